use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use num_traits::Zero;

use super::{format_rational, frac, rational_to_f64, Rational};

/// The root of unity `e(q) = exp(2 pi i q)`, stored by its exponent
/// `q` reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    q: Rational,
}

impl RootOfUnity {
    pub fn new(q: Rational) -> Self {
        Self { q: frac(&q) }
    }

    pub fn one() -> Self {
        Self {
            q: Rational::zero(),
        }
    }

    pub fn exponent(&self) -> &Rational {
        &self.q
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero()
    }

    /// Multiplicative order, i.e. the denominator of the reduced exponent.
    pub fn order(&self) -> num_bigint::BigInt {
        self.q.denom().clone()
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.q.clone())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(&self.q * Rational::from_integer(k.into()))
    }

    pub fn to_complex(&self) -> Complex64 {
        let angle = 2.0 * std::f64::consts::PI * rational_to_f64(&self.q);
        Complex64::new(angle.cos(), angle.sin())
    }
}

impl Mul for &RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: &RootOfUnity) -> RootOfUnity {
        RootOfUnity::new(&self.q + &rhs.q)
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        &self * &rhs
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", format_rational(&self.q))
    }
}
