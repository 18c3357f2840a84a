//! Exact arithmetic over the rationals, cyclotomic fields `Q(zeta_n)` and
//! abstract roots of unity `e(q) = exp(2 pi i q)`.
//!
//! Everything here is immutable once built and carries no global state.
//! Cyclotomic elements share their field description through an `Arc`, so
//! they are cheap to clone and safe to send between threads.

mod cyclo;
mod linalg;
mod root;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub(crate) use cyclo::validate_subgroup;
pub use cyclo::{cyclo_embed, cyclo_mul, degree_over_rationals, galois_conjugate, rel_trace_norm};
pub use cyclo::{CycloElem, CycloField, TraceOrNorm};
pub use linalg::{EchelonBasis, RatMatrix};
pub use root::RootOfUnity;

/// Arbitrary precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },
    #[error("exponent {t} is not a unit modulo {order}")]
    NotCoprime { t: i64, order: u64 },
    #[error("exponent set is not a subgroup of units mod {order}: {reason}")]
    NotASubgroup { order: u64, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("requested precision {requested:e} is below the attainable bound {attainable:e}")]
    Precision { requested: f64, attainable: f64 },
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Representative of `a` modulo `m` in `[0, |m|)`.
pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(&m.abs())
}

/// Fractional part `q - floor(q)`, in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Multiplicative inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let m = m.abs();
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let ext = a.mod_floor(&m).extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(&m))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&rat(7, 2)), rat(1, 2));
        assert_eq!(frac(&rat_int(-4)), rat_int(0));
    }

    #[test]
    fn mod_inverse_basic() {
        let m = BigInt::from(18);
        assert_eq!(mod_inverse(&BigInt::from(13), &m), Some(BigInt::from(7)));
        assert_eq!(mod_inverse(&BigInt::from(-5), &m), Some(BigInt::from(7)));
        assert_eq!(mod_inverse(&BigInt::from(6), &m), None);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational(" -2 "), Some(rat_int(-2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
    }
}
