use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{EchelonBasis, RatMatrix};
use super::{format_rational, rational_to_f64, ExactError, Rational};

/// Description of `Q(zeta_n)`: the cyclotomic polynomial and the reduction of
/// every power `zeta^k`, `0 <= k < n`, onto the power basis.
#[derive(Debug)]
pub struct CycloField {
    order: u64,
    degree: usize,
    // monic, lowest degree first
    modulus: Vec<BigInt>,
    powers: Vec<Vec<Rational>>,
}

impl CycloField {
    pub fn new(order: u64) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..order {
            powers.push(cur.clone());
            cur = times_zeta(&cur, &modulus);
        }
        Arc::new(Self {
            order,
            degree,
            modulus,
            powers,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `phi(n)`, the length of the power basis.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Exponents `t` in `[1, n)` coprime to `n` (just `{1}` for `n <= 2`).
    pub fn units(&self) -> Vec<u64> {
        if self.order <= 2 {
            return vec![1];
        }
        (1..self.order)
            .filter(|t| t.gcd(&self.order) == 1)
            .collect()
    }

    pub fn zero(self: &Arc<Self>) -> CycloElem {
        CycloElem {
            field: Arc::clone(self),
            coeffs: vec![Rational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloElem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> CycloElem {
        let mut e = self.zero();
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloElem {
        self.from_rational(Rational::from_integer(n.into()))
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycloElem {
        let idx = k.rem_euclid(self.order as i64) as usize;
        CycloElem {
            field: Arc::clone(self),
            coeffs: self.powers[idx].clone(),
        }
    }

    /// `sum_i c[i] zeta^i` where `c` may be longer than the basis.
    pub fn from_power_coeffs(self: &Arc<Self>, c: &[Rational]) -> CycloElem {
        let mut out = vec![Rational::zero(); self.degree];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let row = &self.powers[i % self.order as usize];
            for (o, r) in out.iter_mut().zip(row) {
                *o += ci * r;
            }
        }
        CycloElem {
            field: Arc::clone(self),
            coeffs: out,
        }
    }

    pub fn from_int_coeffs(self: &Arc<Self>, c: &[i64]) -> CycloElem {
        let c: Vec<Rational> = c
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect();
        self.from_power_coeffs(&c)
    }

    /// Builds an element from exactly `phi(n)` basis coefficients.
    pub fn from_basis(self: &Arc<Self>, coeffs: Vec<Rational>) -> Result<CycloElem, ExactError> {
        if coeffs.len() != self.degree {
            return Err(ExactError::Dimension(format!(
                "expected {} coefficients, got {}",
                self.degree,
                coeffs.len()
            )));
        }
        Ok(CycloElem {
            field: Arc::clone(self),
            coeffs,
        })
    }
}

fn times_zeta(v: &[Rational], modulus: &[BigInt]) -> Vec<Rational> {
    let d = v.len();
    let mut out = vec![Rational::zero(); d];
    let top = v[d - 1].clone();
    for i in (1..d).rev() {
        out[i] = v[i - 1].clone();
    }
    if !top.is_zero() {
        for (i, o) in out.iter_mut().enumerate() {
            *o -= &top * Rational::from_integer(modulus[i].clone());
        }
    }
    out
}

fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut memo = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d for proper divisors d of n
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_memo(d, memo);
            p = exact_monic_div(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Exact element of `Q(zeta_n)` on the power basis `1, zeta, ..., zeta^(phi(n)-1)`.
#[derive(Clone)]
pub struct CycloElem {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOrNorm {
    Trace,
    Norm,
}

impl CycloElem {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn rational_value(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_integral_on_basis(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn check_same(&self, other: &Self) -> Result<(), ExactError> {
        if self.field.order != other.field.order {
            return Err(ExactError::OrderMismatch {
                left: self.field.order,
                right: other.field.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.field.degree;
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, m) in self.field.modulus[..d].iter().enumerate() {
                prod[k - d + i] -= &c * Rational::from_integer(m.clone());
            }
        }
        prod.truncate(d);
        Self {
            field: Arc::clone(&self.field),
            coeffs: prod,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse, by solving the multiplication-by-`self` system.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let d = self.field.degree;
        let mut m = RatMatrix::zeros(d, d);
        for j in 0..d {
            let col = self.mul_unchecked(&self.field.zeta_pow(j as i64));
            for (i, c) in col.coeffs.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let mut e0 = vec![Rational::zero(); d];
        e0[0] = Rational::one();
        let y = m.solve(&e0)?;
        self.field.from_basis(y)
    }

    pub fn pow(&self, k: i64) -> Result<Self, ExactError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    /// Image under `zeta -> zeta^t`.
    pub fn conjugate(&self, t: i64) -> Result<Self, ExactError> {
        let n = self.field.order as i64;
        if t.gcd(&n) != 1 {
            return Err(ExactError::NotCoprime {
                t,
                order: self.field.order,
            });
        }
        let t = t.rem_euclid(n.max(1));
        let mut out = vec![Rational::zero(); self.field.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = ((i as i64 * t).rem_euclid(n.max(1))) as usize;
            for (o, r) in out.iter_mut().zip(&self.field.powers[idx]) {
                *o += c * r;
            }
        }
        Ok(Self {
            field: Arc::clone(&self.field),
            coeffs: out,
        })
    }

    /// Complex conjugate, i.e. the conjugate by `t = -1`.
    pub fn complex_conjugate(&self) -> Self {
        self.conjugate(-1).expect("-1 is always a unit")
    }

    /// Numeric value under `zeta -> e(k/n)`.
    pub fn embed(&self, k: i64, precision: f64) -> Result<Complex64, ExactError> {
        let n = self.field.order as i64;
        if k.gcd(&n) != 1 {
            return Err(ExactError::NotCoprime {
                t: k,
                order: self.field.order,
            });
        }
        let mut z = Complex64::new(0.0, 0.0);
        let mut weight = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = rational_to_f64(c);
            let idx = (i as i64 * k).rem_euclid(n.max(1));
            let angle = 2.0 * std::f64::consts::PI * idx as f64 / n.max(1) as f64;
            z += Complex64::new(angle.cos(), angle.sin()) * cf;
            weight += cf.abs();
        }
        let bound = weight * (self.field.degree as f64 + 8.0) * f64::EPSILON;
        if !(bound < precision) {
            return Err(ExactError::Precision {
                requested: precision,
                attainable: bound,
            });
        }
        Ok(z)
    }

    /// Absolute trace `Tr_{Q(zeta_n)/Q}`.
    pub fn trace_to_q(&self) -> Rational {
        let units: Vec<u64> = self.field.units();
        let t = rel_trace_norm(self, &units, TraceOrNorm::Trace).expect("units form a group");
        t.coeffs[0].clone()
    }

    /// Absolute norm `N_{Q(zeta_n)/Q}`.
    pub fn norm_to_q(&self) -> Rational {
        let units: Vec<u64> = self.field.units();
        let t = rel_trace_norm(self, &units, TraceOrNorm::Norm).expect("units form a group");
        t.coeffs[0].clone()
    }

    /// Size of the orbit of `self` under the exponents in `group`.
    pub fn orbit_size(&self, group: &[u64]) -> Result<usize, ExactError> {
        let mut seen: Vec<Vec<Rational>> = Vec::new();
        for &t in group {
            let c = self.conjugate(t as i64)?;
            if !seen.contains(&c.coeffs) {
                seen.push(c.coeffs);
            }
        }
        Ok(seen.len())
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem[{}]({})", self.field.order, self)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let z = self.field.order;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&mag))?,
                (1, true) => write!(f, "z{z}")?,
                (1, false) => write!(f, "{}*z{z}", format_rational(&mag))?,
                (_, true) => write!(f, "z{z}^{i}")?,
                (_, false) => write!(f, "{}*z{z}^{i}", format_rational(&mag))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &CycloElem {
            type Output = CycloElem;
            /// Panics if the operands live in different cyclotomic fields.
            fn $method(self, rhs: &CycloElem) -> CycloElem {
                self.$checked(rhs)
                    .expect("operands in the same cyclotomic field")
            }
        }
        impl $trait for CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: CycloElem) -> CycloElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        -&self
    }
}

pub fn cyclo_mul(a: &CycloElem, b: &CycloElem) -> Result<CycloElem, ExactError> {
    a.checked_mul(b)
}

pub fn galois_conjugate(a: &CycloElem, t: i64) -> Result<CycloElem, ExactError> {
    a.conjugate(t)
}

pub fn cyclo_embed(a: &CycloElem, k: i64, precision: f64) -> Result<Complex64, ExactError> {
    a.embed(k, precision)
}

/// Sum or product of the conjugates of `a` over a subgroup of `(Z/n)^*`.
/// The subgroup is validated for coprimality and closure.
pub fn rel_trace_norm(
    a: &CycloElem,
    subgroup: &[u64],
    mode: TraceOrNorm,
) -> Result<CycloElem, ExactError> {
    let n = a.order();
    let group = validate_subgroup(n, subgroup)?;
    let mut acc = match mode {
        TraceOrNorm::Trace => a.field.zero(),
        TraceOrNorm::Norm => a.field.one(),
    };
    for &t in &group {
        let c = a.conjugate(t as i64)?;
        acc = match mode {
            TraceOrNorm::Trace => acc.zip_with(&c, |x, y| x + y),
            TraceOrNorm::Norm => acc.mul_unchecked(&c),
        };
    }
    Ok(acc)
}

/// Reduces exponents mod `n`, drops duplicates, and checks the set is a
/// subgroup of `(Z/n)^*`.
pub(crate) fn validate_subgroup(n: u64, subgroup: &[u64]) -> Result<BTreeSet<u64>, ExactError> {
    let m = n.max(1);
    let reduce = |t: u64| if n <= 2 { 1 } else { t % m };
    let group: BTreeSet<u64> = subgroup.iter().map(|&t| reduce(t)).collect();
    let fail = |reason: String| ExactError::NotASubgroup { order: n, reason };
    if group.is_empty() {
        return Err(fail("empty set".into()));
    }
    if let Some(t) = group.iter().find(|t| t.gcd(&m) != 1) {
        return Err(fail(format!("{t} is not a unit")));
    }
    for &a in &group {
        for &b in &group {
            let c = reduce(((a as u128 * b as u128) % m as u128) as u64);
            if !group.contains(&c) {
                return Err(fail(format!("{a}*{b} = {c} is missing")));
            }
        }
    }
    Ok(group)
}

/// Degree of the minimal polynomial of `a` over `Q`: the first `k` with
/// `a^k` in the span of `1, a, ..., a^(k-1)`.
pub fn degree_over_rationals(a: &CycloElem) -> usize {
    let d = a.field.degree;
    let mut basis = EchelonBasis::new(d);
    let mut p = a.field.one();
    loop {
        if !basis.insert(p.coeffs.clone()) {
            return basis.len();
        }
        if basis.len() == d {
            return d;
        }
        p = p.mul_unchecked(a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn z(n: u64, k: i64) -> CycloElem {
        CycloField::new(n).zeta_pow(k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |n| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect()
        };
        assert_eq!(to_i(1), vec![-1, 1]);
        assert_eq!(to_i(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(to_i(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(to_i(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(to_i(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        assert_eq!(cyclotomic_polynomial(25).len(), 21);
    }

    #[test]
    fn multiplication_examples() {
        let f = CycloField::new(5);
        let zeta = f.zeta_pow(1);
        assert_eq!(&zeta * &f.one(), zeta);
        assert_eq!(&zeta * &f.zeta_pow(4), f.one());
        // (z + z^4)(z^2 + z^3) = z^3 + z^4 + z + z^2 = -1
        let a = f.from_int_coeffs(&[0, 1, 0, 0, 1]);
        let b = f.from_int_coeffs(&[0, 0, 1, 1]);
        assert_eq!(cyclo_mul(&a, &b).unwrap(), f.from_int(-1));
        assert!(matches!(
            cyclo_mul(&zeta, &z(7, 1)),
            Err(ExactError::OrderMismatch { left: 5, right: 7 })
        ));
    }

    #[test]
    fn conjugation_examples() {
        let f = CycloField::new(5);
        let zeta = f.zeta_pow(1);
        assert_eq!(galois_conjugate(&zeta, 2).unwrap(), f.zeta_pow(2));
        let back = galois_conjugate(&galois_conjugate(&zeta, 3).unwrap(), 2).unwrap();
        assert_eq!(back, zeta);
        for p in [3i64, 5, 7] {
            let x = f.from_int_coeffs(&[1, 2 * p]);
            let want = f.from_int_coeffs(&[1, 0, 0, 2 * p]);
            assert_eq!(galois_conjugate(&x, 3).unwrap(), want);
        }
        assert!(matches!(
            galois_conjugate(&zeta, 10),
            Err(ExactError::NotCoprime { t: 10, order: 5 })
        ));
    }

    #[test]
    fn embedding_examples() {
        let f = CycloField::new(5);
        let w = cyclo_embed(&f.zeta_pow(1), 1, 1e-12).unwrap();
        let angle = 2.0 * std::f64::consts::PI / 5.0;
        assert!((w.re - angle.cos()).abs() < 1e-12 && (w.im - angle.sin()).abs() < 1e-12);
        assert!((w.re - 0.30901699).abs() < 1e-8 && (w.im - 0.95105651).abs() < 1e-8);
        for k in 1..5 {
            assert_eq!(
                cyclo_embed(&f.one(), k, 1e-12).unwrap(),
                Complex64::new(1.0, 0.0)
            );
        }
        let real = f.from_int_coeffs(&[0, 1, 0, 0, 1]);
        let v = cyclo_embed(&real, 1, 1e-12).unwrap();
        assert!((v.re - 2.0 * angle.cos()).abs() < 1e-12 && v.im.abs() < 1e-12);
        assert!((v.re - 0.61803398).abs() < 1e-8);
        assert!(matches!(
            cyclo_embed(&real, 1, 1e-30),
            Err(ExactError::Precision { .. })
        ));
    }

    #[test]
    fn relative_trace_and_norm_examples() {
        let f = CycloField::new(25);
        let h: Vec<u64> = (0..5).map(|k| 1 + 5 * k).collect();
        let zeta = f.zeta_pow(1);
        assert!(rel_trace_norm(&zeta, &h, TraceOrNorm::Trace)
            .unwrap()
            .is_zero());
        let x = f.from_int_coeffs(&[1, 3]);
        let n = rel_trace_norm(&x, &h, TraceOrNorm::Norm).unwrap();
        // zeta_5 = zeta_25^5
        let mut want = vec![rat_int(0); 6];
        want[0] = rat_int(1);
        want[5] = rat_int(243);
        assert_eq!(n, f.from_power_coeffs(&want));
        assert_eq!(
            rel_trace_norm(&f.one(), &h, TraceOrNorm::Trace).unwrap(),
            f.from_int(5)
        );
        assert!(matches!(
            rel_trace_norm(&zeta, &[1, 2], TraceOrNorm::Trace),
            Err(ExactError::NotASubgroup { .. })
        ));
        assert!(rel_trace_norm(&zeta, &[1, 5], TraceOrNorm::Trace).is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_over_rationals(&z(5, 1)), 4);
        assert_eq!(degree_over_rationals(&z(25, 1)), 20);
        let f = CycloField::new(8);
        assert_eq!(degree_over_rationals(&(f.zeta_pow(1) + f.zeta_pow(7))), 2);
        assert_eq!(degree_over_rationals(&f.from_int(3)), 1);
        assert_eq!(degree_over_rationals(&f.zeta_pow(2)), 2);
    }

    #[test]
    fn inverse_and_absolute_norm() {
        let f = CycloField::new(5);
        let x = f.from_int_coeffs(&[1, 2]);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, f.one());
        // N(1 + 2z) = prod (1 + 2 z^t) = Phi_5(-1/2) * 16 = 11
        assert_eq!(x.norm_to_q(), rat_int(11));
        assert_eq!(f.zeta_pow(1).trace_to_q(), rat_int(-1));
        assert_eq!(x.pow(-2).unwrap(), &inv * &inv);
        assert_eq!(f.zero().inverse(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn display_is_readable() {
        let f = CycloField::new(5);
        let x = f.from_power_coeffs(&[rat(1, 2), rat_int(-1), rat_int(0), rat_int(3)]);
        assert_eq!(x.to_string(), "1/2 - z5 + 3*z5^3");
        assert_eq!(f.zero().to_string(), "0");
    }

    fn elem_strategy(n: u64) -> impl Strategy<Value = CycloElem> {
        let f = CycloField::new(n);
        let d = f.degree();
        proptest::collection::vec((-20i64..20, 1i64..5), d).prop_map(move |v| {
            let c = v.into_iter().map(|(a, b)| rat(a, b)).collect();
            f.from_basis(c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in elem_strategy(12), b in elem_strategy(12), c in elem_strategy(12)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn conjugation_is_homomorphism(a in elem_strategy(15), b in elem_strategy(15),
                                       i in 0usize..8, j in 0usize..8) {
            let units = a.field().units();
            let (t, u) = (units[i] as i64, units[j] as i64);
            let ab = &a * &b;
            prop_assert_eq!(ab.conjugate(t).unwrap(), &a.conjugate(t).unwrap() * &b.conjugate(t).unwrap());
            prop_assert_eq!((&a + &b).conjugate(t).unwrap(), &a.conjugate(t).unwrap() + &b.conjugate(t).unwrap());
            prop_assert_eq!(a.conjugate(t).unwrap().conjugate(u).unwrap(), a.conjugate(t * u % 15).unwrap());
        }

        #[test]
        fn embedding_is_multiplicative(a in elem_strategy(5), b in elem_strategy(5), k in 1i64..5) {
            let prec = 1e-9;
            let lhs = (&a * &b).embed(k, prec).unwrap();
            let rhs = a.embed(k, prec).unwrap() * b.embed(k, prec).unwrap();
            prop_assert!((lhs - rhs).norm() < 10.0 * prec);
        }

        #[test]
        fn relative_norm_is_fixed(a in elem_strategy(25)) {
            let h: Vec<u64> = (0..5).map(|k| 1 + 5 * k).collect();
            let n = rel_trace_norm(&a, &h, TraceOrNorm::Norm).unwrap();
            for &t in &h {
                prop_assert_eq!(n.conjugate(t as i64).unwrap(), n.clone());
            }
        }
    }
}
