//! Integer linear forms `c1*lam1 + c2*lam2 + c3*lam3 + cm*m`.

use core::fmt;

use num_integer::Integer;

use super::poly::NVARS;
use crate::error::{Error, Result};

/// Primitive linear form whose first nonzero coefficient is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: [i64; NVARS],
}

/// A form together with the integer `scale` it was divided by:
/// the original vector equals `scale * form`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaledForm {
    pub scale: i64,
    pub form: LinearForm,
}

impl ScaledForm {
    /// Parity of the normalization: `true` when the scale is negative.
    pub fn sign_flipped(&self) -> bool {
        self.scale < 0
    }
}

impl LinearForm {
    /// Normalizes an arbitrary coefficient vector.
    pub fn canonical(coeffs: [i64; NVARS]) -> Result<ScaledForm> {
        let first = coeffs.iter().copied().find(|&c| c != 0).ok_or(Error::ZeroForm)?;
        let mut g = 0i64;
        for &c in &coeffs {
            g = g.gcd(&c);
        }
        let scale = if first < 0 { -g } else { g };
        let mut out = [0; NVARS];
        for (o, c) in out.iter_mut().zip(coeffs.iter()) {
            *o = c / scale;
        }
        Ok(ScaledForm {
            scale,
            form: LinearForm { coeffs: out },
        })
    }

    /// The variable `lam1`, `lam2`, `lam3` or `m` (index 0..4).
    pub fn var(i: usize) -> Self {
        let mut c = [0; NVARS];
        c[i] = 1;
        LinearForm { coeffs: c }
    }

    /// Form of the weight `w0*lam0 + w1*lam1 + w2*lam2 + w3*lam3 + wm*m` with
    /// `lam0 = -(lam1 + lam2 + lam3)`.
    pub fn of_weight(w: [i64; 5]) -> Result<ScaledForm> {
        let [w0, w1, w2, w3, wm] = w;
        Self::canonical([w1 - w0, w2 - w0, w3 - w0, wm])
    }

    pub fn coeffs(&self) -> &[i64; NVARS] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_var(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).unwrap_or(0)
    }
}

pub(crate) const VAR_NAMES: [&str; NVARS] = ["lam1", "lam2", "lam3", "m"];

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let a = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            if a != 1 {
                write!(f, "{}*", a)?;
            }
            f.write_str(VAR_NAMES[i])?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lam0_weight_flips_sign() {
        let s = LinearForm::of_weight([1, 0, 0, 0, 0]).unwrap();
        assert_eq!(s.form.coeffs(), &[1, 1, 1, 0]);
        assert!(s.sign_flipped());
    }

    #[test]
    fn lam3_weight() {
        let s = LinearForm::of_weight([0, 0, 0, 1, 0]).unwrap();
        assert_eq!(s.form, LinearForm::var(2));
        assert_eq!(s.scale, 1);
    }

    #[test]
    fn torus_relation_is_zero() {
        assert_eq!(LinearForm::of_weight([1, 1, 1, 1, 0]), Err(Error::ZeroForm));
    }

    #[test]
    fn content_is_removed() {
        let s = LinearForm::canonical([0, -4, 2, 6]).unwrap();
        assert_eq!(s.scale, -2);
        assert_eq!(s.form.coeffs(), &[0, 2, -1, -3]);
    }

    #[test]
    fn display() {
        let f = LinearForm::canonical([2, 0, -1, 1]).unwrap().form;
        assert_eq!(alloc::format!("{}", f), "2*lam1 - lam3 + m");
    }
}
