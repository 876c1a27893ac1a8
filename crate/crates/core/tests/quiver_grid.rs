use wallx_core::quiver::*;

mod support;
use support::quiver_checks::{grid_is_consistent, nc_stable_iff_cyclic};

#[test]
fn grid_labels_match_wall_inequalities() {
    assert!(grid_is_consistent(3) > 0);
    grid_is_consistent(8);
    grid_is_consistent(30);
}

#[test]
fn special_chambers_on_grid() {
    assert_eq!(classify_theta(&Theta::from_ints(1, 2), 3), Classification::Chamber(Chamber::Empty));
    assert_eq!(classify_theta(&Theta::from_ints(-1, -2), 3), Classification::Chamber(Chamber::Nc));
    assert_eq!(
        classify_theta(&Theta::from_ints(-1, 1), 3),
        Classification::OnWall("Linf-".parse().unwrap())
    );
}

#[test]
fn nc_chamber_stable_iff_cyclic() {
    let n = nc_stable_iff_cyclic();
    assert!(n > 100, "only {n} graded representations");
}
