pub mod quiver_checks;
