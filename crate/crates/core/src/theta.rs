//! Error-bounded evaluation of theta functions with rational characteristics
//! and of the theta constants `Phi_[r;s](Z) = Theta(0,Z;r,s) / Theta(0,Z;0,0)`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, frac, parse_rational, Rational};
use crate::symplectic::SiegelPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("radius {needed} needed for tolerance {tol:e} exceeds the cap {cap}")]
    RadiusExceeded { needed: u64, cap: u32, tol: f64 },
    #[error("theta null value {0:e} is below the denominator threshold")]
    VanishingDenominator(f64),
    #[error("genus mismatch: characteristic {chi}, point {point}")]
    Genus { chi: usize, point: usize },
    #[error("characteristic numerators too large for evaluation")]
    Overflow,
    #[error("invalid characteristic: {0}")]
    Invalid(String),
}

/// A characteristic `[r; s]` with `r = r_num / den`, `s = s_num / den`,
/// stored with the common factor of `den` and all numerators removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic {
    den: BigInt,
    r_num: Vec<BigInt>,
    s_num: Vec<BigInt>,
}

impl Characteristic {
    pub fn from_nums(
        den: BigInt,
        r_num: Vec<BigInt>,
        s_num: Vec<BigInt>,
    ) -> Result<Self, ThetaError> {
        if !den.is_positive() {
            return Err(ThetaError::Invalid("denominator must be positive".into()));
        }
        if r_num.len() != s_num.len() || r_num.is_empty() {
            return Err(ThetaError::Invalid(
                "r and s must have the same positive length".into(),
            ));
        }
        let mut c = Self { den, r_num, s_num };
        c.normalize();
        Ok(c)
    }

    pub fn from_i64(den: i64, r_num: &[i64], s_num: &[i64]) -> Result<Self, ThetaError> {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_nums(BigInt::from(den), v(r_num), v(s_num))
    }

    pub fn from_rationals(r: &[Rational], s: &[Rational]) -> Result<Self, ThetaError> {
        let den = r
            .iter()
            .chain(s)
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = |q: &Rational| q.numer() * (&den / q.denom());
        Self::from_nums(
            den.clone(),
            r.iter().map(num).collect(),
            s.iter().map(num).collect(),
        )
    }

    /// `[0; 0]` in genus `g`.
    pub fn zero(g: usize) -> Self {
        Self {
            den: BigInt::one(),
            r_num: vec![BigInt::zero(); g],
            s_num: vec![BigInt::zero(); g],
        }
    }

    /// Splits a `2g` vector `[r; s]`.
    pub fn from_vector(v: &[Rational]) -> Result<Self, ThetaError> {
        if v.len() % 2 != 0 {
            return Err(ThetaError::Invalid("odd length vector".into()));
        }
        let g = v.len() / 2;
        Self::from_rationals(&v[..g], &v[g..])
    }

    fn normalize(&mut self) {
        let g = self
            .r_num
            .iter()
            .chain(&self.s_num)
            .fold(self.den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            self.den /= &g;
            for x in self.r_num.iter_mut().chain(self.s_num.iter_mut()) {
                *x /= &g;
            }
        }
    }

    pub fn g(&self) -> usize {
        self.r_num.len()
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn r_num(&self) -> &[BigInt] {
        &self.r_num
    }

    pub fn s_num(&self) -> &[BigInt] {
        &self.s_num
    }

    pub fn r(&self) -> Vec<Rational> {
        self.r_num
            .iter()
            .map(|x| Rational::new(x.clone(), self.den.clone()))
            .collect()
    }

    pub fn s(&self) -> Vec<Rational> {
        self.s_num
            .iter()
            .map(|x| Rational::new(x.clone(), self.den.clone()))
            .collect()
    }

    /// `[r; s]` as a single vector of length `2g`.
    pub fn to_vector(&self) -> Vec<Rational> {
        let mut v = self.r();
        v.extend(self.s());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.r_num.iter().chain(&self.s_num).all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        Self {
            den: self.den.clone(),
            r_num: self.r_num.iter().map(|x| -x).collect(),
            s_num: self.s_num.iter().map(|x| -x).collect(),
        }
    }

    /// `[r; -s]`.
    pub fn neg_s(&self) -> Self {
        Self {
            den: self.den.clone(),
            r_num: self.r_num.clone(),
            s_num: self.s_num.iter().map(|x| -x).collect(),
        }
    }

    /// `[r + a; s + b]` for integer vectors `a`, `b`.
    pub fn shift(&self, a: &[BigInt], b: &[BigInt]) -> Self {
        let mut c = Self {
            den: self.den.clone(),
            r_num: self
                .r_num
                .iter()
                .zip(a)
                .map(|(x, y)| x + y * &self.den)
                .collect(),
            s_num: self
                .s_num
                .iter()
                .zip(b)
                .map(|(x, y)| x + y * &self.den)
                .collect(),
        };
        c.normalize();
        c
    }

    /// Whether both `r` and `s` lie in `(1/n) Z^g`.
    pub fn has_level(&self, n: &BigInt) -> bool {
        !n.is_zero() && n.is_multiple_of(&self.den)
    }

    /// Numerators over a given common denominator `n`, i.e. `(n r, n s)`.
    pub fn scaled_nums(&self, n: &BigInt) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        if !self.has_level(n) {
            return None;
        }
        let f = n / &self.den;
        Some((
            self.r_num.iter().map(|x| x * &f).collect(),
            self.s_num.iter().map(|x| x * &f).collect(),
        ))
    }

    /// Representative with `0 <= r_j, s_j < 1`.
    pub fn canonical(&self) -> Self {
        let mut c = Self {
            den: self.den.clone(),
            r_num: self.r_num.iter().map(|x| x.mod_floor(&self.den)).collect(),
            s_num: self.s_num.iter().map(|x| x.mod_floor(&self.den)).collect(),
        };
        c.normalize();
        c
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Vec<Rational>| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
        write!(f, "[{};{}]", show(self.r()), show(self.s()))
    }
}

/// Parses the display form `[r_1,..,r_g;s_1,..,s_g]`; brackets are optional.
impl std::str::FromStr for Characteristic {
    type Err = ThetaError;

    fn from_str(text: &str) -> Result<Self, ThetaError> {
        let bad = || ThetaError::Invalid(format!("cannot parse characteristic {text:?}"));
        let body = text.trim().trim_start_matches('[').trim_end_matches(']');
        let (r, s) = body.split_once(';').ok_or_else(bad)?;
        let parse = |part: &str| -> Result<Vec<Rational>, ThetaError> {
            part.split(',')
                .map(|t| parse_rational(t).ok_or_else(bad))
                .collect()
        };
        Characteristic::from_rationals(&parse(r)?, &parse(s)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub tol: f64,
    pub max_radius: u32,
    pub denom_threshold: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_radius: 200,
            denom_threshold: 1e-8,
        }
    }
}

impl EvalSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// A theta value with the truncation data that certifies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub radius: u64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// Bound on the sum of `|term|` over lattice points with `|x + r| >= radius`.
///
/// Terms satisfy `|term| <= exp(-pi lambda |v|^2 + 2 pi |v| |Im u|)` where
/// `lambda` is the smallest eigenvalue of `Im Z`; the shell
/// `d <= |v| < d + 1` holds at most `(2d + 3)^g` points.
pub fn tail_bound(lambda: f64, im_u_norm: f64, g: usize, radius: u64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut total = 0.0;
    let mut d = radius as f64;
    // past the peak of the exponent every shell term is decreasing
    let peak = im_u_norm / lambda;
    loop {
        let log_term = (g as f64) * (2.0 * d + 3.0).ln() - pi * lambda * d * d
            + 2.0 * pi * (d + 1.0) * im_u_norm;
        let term = log_term.exp();
        total += term;
        if d > peak + 1.0 && (term < total * 1e-17 || term == 0.0) {
            break;
        }
        if d > radius as f64 + 1e6 {
            return f64::INFINITY;
        }
        d += 1.0;
    }
    total
}

fn choose_radius(
    lambda: f64,
    im_u_norm: f64,
    g: usize,
    tol: f64,
    cap: u32,
) -> Result<u64, ThetaError> {
    for r in 1..=cap as u64 {
        if tail_bound(lambda, im_u_norm, g, r) < tol {
            return Ok(r);
        }
    }
    // report the radius that would have been needed
    let mut r = cap as u64;
    while tail_bound(lambda, im_u_norm, g, r) >= tol && r < 1 << 20 {
        r *= 2;
    }
    Err(ThetaError::RadiusExceeded {
        needed: r,
        cap,
        tol,
    })
}

struct Prepared {
    den: i128,
    r_num: Vec<i128>,
    s_num: Vec<i128>,
    r: Vec<f64>,
}

fn prepare(chi: &Characteristic) -> Result<Prepared, ThetaError> {
    let conv = |x: &BigInt| x.to_i64().map(i128::from).ok_or(ThetaError::Overflow);
    let den = conv(&chi.den)?;
    let r_num = chi.r_num.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
    let s_num = chi.s_num.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
    if den > 1 << 30 {
        return Err(ThetaError::Overflow);
    }
    let r = r_num.iter().map(|&x| x as f64 / den as f64).collect();
    Ok(Prepared {
        den,
        r_num,
        s_num,
        r,
    })
}

/// Truncated sum of the theta series over `|x + r|_2 <= radius`, with the
/// lattice points enumerated around `-r`.
pub fn theta_sum(
    u: &[Complex64],
    z: &SiegelPoint,
    chi: &Characteristic,
    radius: f64,
) -> Result<(Complex64, usize), ThetaError> {
    let g = z.g();
    if chi.g() != g || u.len() != g {
        return Err(ThetaError::Genus {
            chi: chi.g(),
            point: g,
        });
    }
    let p = prepare(chi)?;
    let zm = z.matrix();
    let two_pi = 2.0 * std::f64::consts::PI;
    let den2 = p.den * p.den;

    let mut total = Complex64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut x = vec![0i64; g];
    let mut v = vec![0.0f64; g];

    // depth-first enumeration of the ball
    fn rec(
        level: usize,
        rem: f64,
        x: &mut [i64],
        v: &mut [f64],
        p: &Prepared,
        visit: &mut dyn FnMut(&[i64], &[f64]),
    ) {
        let g = x.len();
        if level == g {
            visit(x, v);
            return;
        }
        let rr = rem.max(0.0).sqrt();
        let lo = (-p.r[level] - rr).ceil() as i64;
        let hi = (-p.r[level] + rr).floor() as i64;
        for xi in lo..=hi {
            let vi = xi as f64 + p.r[level];
            let left = rem - vi * vi;
            if left < -1e-12 {
                continue;
            }
            x[level] = xi;
            v[level] = vi;
            rec(level + 1, left, x, v, p, visit);
        }
    }

    let mut visit = |x: &[i64], v: &[f64]| {
        // exponent = 1/2 tv Z v + tv u + tv s; the last part is taken exactly mod 1
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += zm[(i, j)] * (v[i] * v[j]);
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..g {
            lin += u[i] * v[i];
        }
        let mut vs: i128 = 0;
        for i in 0..g {
            vs += (x[i] as i128 * p.den + p.r_num[i]) * p.s_num[i];
        }
        let vs = vs.rem_euclid(den2) as f64 / den2 as f64;
        let expo = quad * 0.5 + lin + vs;
        let w = Complex64::new(0.0, two_pi) * expo;
        total += w.exp();
        terms += 1;
    };
    rec(0, radius * radius, &mut x, &mut v, &p, &mut visit);
    Ok((total, terms))
}

/// `Theta(u, Z; r, s)` to absolute accuracy `settings.tol`.
pub fn theta_eval_detailed(
    u: &[Complex64],
    z: &SiegelPoint,
    chi: &Characteristic,
    settings: &EvalSettings,
) -> Result<ThetaValue, ThetaError> {
    if !(settings.tol > 0.0) {
        return Err(ThetaError::Invalid("tolerance must be positive".into()));
    }
    let lambda = z.min_imag_eigenvalue();
    let im_u = u.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
    let radius = choose_radius(lambda, im_u, z.g(), settings.tol, settings.max_radius)?;
    let (value, terms) = theta_sum(u, z, chi, radius as f64)?;
    Ok(ThetaValue {
        value,
        radius,
        terms,
        tail_bound: tail_bound(lambda, im_u, z.g(), radius),
    })
}

pub fn theta_eval(
    u: &[Complex64],
    z: &SiegelPoint,
    chi: &Characteristic,
    settings: &EvalSettings,
) -> Result<Complex64, ThetaError> {
    theta_eval_detailed(u, z, chi, settings).map(|t| t.value)
}

/// `Theta(0, Z; r, s)`.
pub fn theta_null(
    z: &SiegelPoint,
    chi: &Characteristic,
    settings: &EvalSettings,
) -> Result<Complex64, ThetaError> {
    let u = vec![Complex64::new(0.0, 0.0); z.g()];
    theta_eval(&u, z, chi, settings)
}

/// The theta constant `Phi_[r;s](Z)`.
pub fn phi_eval(
    chi: &Characteristic,
    z: &SiegelPoint,
    settings: &EvalSettings,
) -> Result<Complex64, ThetaError> {
    let den = theta_null(z, &Characteristic::zero(z.g()), settings)?;
    if !(den.norm() > settings.denom_threshold) {
        return Err(ThetaError::VanishingDenominator(den.norm()));
    }
    Ok(theta_null(z, chi, settings)? / den)
}

/// Whether `r`, `s` are half-integral with `e(2 tr s) = -1`.
pub fn in_sigma_minus(chi: &Characteristic) -> bool {
    let two = BigInt::from(2);
    if !two.is_multiple_of(&chi.den) {
        return false;
    }
    let dot = chi
        .r()
        .iter()
        .zip(chi.s())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    frac(&(dot * Rational::from_integer(two))) == Rational::new(BigInt::one(), BigInt::from(2))
}

/// Canonical representative for `Phi^l`: `r` mod `Z^g` and `s` mod
/// `(M / gcd(M, l)) Z^g`, where `r` lies in `(1/M) Z^g`.
pub fn reduce_char(
    chi: &Characteristic,
    l: &BigInt,
    m: &BigInt,
) -> Result<Characteristic, ThetaError> {
    if !l.is_positive() || !m.is_positive() {
        return Err(ThetaError::Invalid(
            "power and level must be positive".into(),
        ));
    }
    if chi
        .r()
        .iter()
        .any(|q| !(q * Rational::from_integer(m.clone())).is_integer())
    {
        return Err(ThetaError::Invalid(format!("r is not in (1/{m})Z^g")));
    }
    let k = m / m.gcd(l);
    let den = chi.den.clone();
    let s_mod = &k * &den;
    Characteristic::from_nums(
        den.clone(),
        chi.r_num.iter().map(|x| x.mod_floor(&den)).collect(),
        chi.s_num.iter().map(|x| x.mod_floor(&s_mod)).collect(),
    )
}

/// The `2^(g-1) (2^g - 1)` half-integral characteristics in `Sigma_-` with
/// entries in `{0, 1/2}`.
pub fn odd_characteristics(g: usize) -> Vec<Characteristic> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << (2 * g)) {
        let nums: Vec<i64> = (0..2 * g).map(|i| ((bits >> i) & 1) as i64).collect();
        let chi = Characteristic::from_i64(2, &nums[..g], &nums[g..]).expect("valid");
        if in_sigma_minus(&chi) {
            out.push(chi);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rational_to_f64};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_point(seed: u64) -> SiegelPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SiegelPoint::random(&mut rng, 2, 0.6)
    }

    fn jacobi_sum() -> f64 {
        // sum over n of exp(-pi n^2), summed directly as the oracle
        (-50i32..=50)
            .map(|n| (-std::f64::consts::PI * (n * n) as f64).exp())
            .sum()
    }

    #[test]
    fn parse_characteristic() {
        let c: Characteristic = "[1/3,2/3;0,1/3]".parse().unwrap();
        assert_eq!(c, Characteristic::from_i64(3, &[1, 2], &[0, 1]).unwrap());
        assert_eq!(c.to_string().parse::<Characteristic>().unwrap(), c);
        assert_eq!(
            "1/2, 0 ; 0, 1/2".parse::<Characteristic>().unwrap().den(),
            &BigInt::from(2)
        );
        assert!("[1/2,0]".parse::<Characteristic>().is_err());
        assert!("[1/0;1]".parse::<Characteristic>().is_err());
        assert!("[1,2;3]".parse::<Characteristic>().is_err());
    }

    #[test]
    fn theta_at_i_identity() {
        let z = SiegelPoint::scalar_i(2);
        let v = theta_null(&z, &Characteristic::zero(2), &EvalSettings::default()).unwrap();
        let oracle = jacobi_sum().powi(2);
        assert!((v.re - oracle).abs() < 1e-12 && v.im.abs() < 1e-12);
        assert!((v.re - 1.18034059).abs() < 1e-8);
    }

    #[test]
    fn theta_is_even() {
        let z = random_point(3);
        let u = [Complex64::new(0.1, 0.05), Complex64::new(-0.2, 0.1)];
        let mu = [-u[0], -u[1]];
        let chi = Characteristic::from_i64(6, &[1, 5], &[2, -3]).unwrap();
        let s = EvalSettings::default();
        let a = theta_eval(&u, &z, &chi, &s).unwrap();
        let b = theta_eval(&mu, &z, &chi.neg(), &s).unwrap();
        assert!((a - b).norm() < 1e-11);
    }

    #[test]
    fn phi_examples() {
        let z = random_point(5);
        let s = EvalSettings::default();
        let one = phi_eval(&Characteristic::zero(2), &z, &s).unwrap();
        assert!((one - 1.0).norm() < 1e-14);
        let chi = Characteristic::from_i64(5, &[1, 2], &[3, 1]).unwrap();
        let a = phi_eval(&chi, &z, &s).unwrap();
        let b = phi_eval(&chi.neg(), &z, &s).unwrap();
        assert!((a - b).norm() < 1e-11);
        for odd in odd_characteristics(2) {
            assert!(phi_eval(&odd, &z, &s).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn sigma_minus_examples() {
        assert!(in_sigma_minus(
            &Characteristic::from_i64(2, &[1, 1], &[1, 0]).unwrap()
        ));
        assert!(!in_sigma_minus(&Characteristic::zero(2)));
        assert!(!in_sigma_minus(
            &Characteristic::from_i64(3, &[1, 0], &[0, 0]).unwrap()
        ));
        assert_eq!(odd_characteristics(2).len(), 6);
        assert_eq!(odd_characteristics(1).len(), 1);
        // a translate of an odd characteristic is still odd
        let c = Characteristic::from_i64(2, &[3, 1], &[1, -2]).unwrap();
        assert!(in_sigma_minus(&c));
    }

    #[test]
    fn normalization_removes_common_factor() {
        let c = Characteristic::from_i64(6, &[2, 4], &[0, 2]).unwrap();
        assert_eq!(c.den(), &BigInt::from(3));
        assert_eq!(
            c,
            Characteristic::from_rationals(&[rat(1, 3), rat(2, 3)], &[rat(0, 1), rat(1, 3)])
                .unwrap()
        );
        assert_eq!(c.to_string(), "[1/3,2/3;0,1/3]");
    }

    #[test]
    fn reduce_char_examples() {
        let m = BigInt::from(5);
        let chi = Characteristic::from_i64(5, &[1, 3], &[7, -2]).unwrap();
        let l = BigInt::from(5);
        let shifted = chi.shift(
            &[BigInt::from(1), BigInt::zero()],
            &[BigInt::zero(), BigInt::zero()],
        );
        assert_eq!(
            reduce_char(&chi, &l, &m).unwrap(),
            reduce_char(&shifted, &l, &m).unwrap()
        );
        // l = 2 M^2 reduces s mod Z^g
        let l = BigInt::from(50);
        let red = reduce_char(&chi, &l, &m).unwrap();
        assert!(red.s().iter().all(|q| *q >= rat(0, 1) && *q < rat(1, 1)));
        assert_eq!(reduce_char(&red, &l, &m).unwrap(), red);
        // l = 1: s is reduced mod 5 Z^g
        let red1 = reduce_char(&chi, &BigInt::one(), &m).unwrap();
        assert_eq!(red1.s(), vec![rat(7, 5), rat(23, 5)]);
        assert!(reduce_char(&chi, &l, &BigInt::from(2)).is_err());
    }

    #[test]
    fn reduction_preserves_power() {
        let z = random_point(9);
        let s = EvalSettings::default();
        let m = BigInt::from(3);
        for (l, chi) in [
            (
                3i64,
                Characteristic::from_i64(3, &[4, -1], &[5, 7]).unwrap(),
            ),
            (18, Characteristic::from_i64(3, &[2, 1], &[-4, 2]).unwrap()),
            (1, Characteristic::from_i64(3, &[1, 1], &[3, -3]).unwrap()),
        ] {
            let red = reduce_char(&chi, &BigInt::from(l), &m).unwrap();
            let a = phi_eval(&chi, &z, &s).unwrap().powi(l as i32);
            let b = phi_eval(&red, &z, &s).unwrap().powi(l as i32);
            assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn radius_cap_is_reported() {
        let c = |re, im| Complex64::new(re, im);
        let z =
            SiegelPoint::from_rows(&[&[c(0.0, 1e-4), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 1.0)]])
                .unwrap();
        let s = EvalSettings {
            max_radius: 20,
            ..EvalSettings::default()
        };
        assert!(matches!(
            theta_null(&z, &Characteristic::zero(2), &s),
            Err(ThetaError::RadiusExceeded { cap: 20, .. })
        ));
    }

    #[test]
    fn tail_bound_dominates_omitted_terms() {
        // one-dimensional check: the bound at radius R exceeds the true tail
        let lambda = 0.5;
        for r in 1..6u64 {
            let exact: f64 = (-200i64..=200)
                .filter(|n| n.unsigned_abs() >= r)
                .map(|n| (-std::f64::consts::PI * lambda * (n * n) as f64).exp())
                .sum();
            assert!(tail_bound(lambda, 0.0, 1, r) >= exact);
        }
    }

    fn chi_strategy() -> impl Strategy<Value = Characteristic> {
        (1i64..8, proptest::collection::vec(-20i64..20, 4))
            .prop_map(|(d, v)| Characteristic::from_i64(d, &v[..2], &v[2..]).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn tail_is_sound(seed in any::<u64>(), chi in chi_strategy()) {
            let z = random_point(seed);
            let s = EvalSettings::default();
            let u = [Complex64::new(0.1, 0.02), Complex64::new(0.3, -0.05)];
            let t = theta_eval_detailed(&u, &z, &chi, &s).unwrap();
            let (wide, _) = theta_sum(&u, &z, &chi, 2.0 * t.radius as f64).unwrap();
            prop_assert!((t.value - wide).norm() < s.tol);
        }

        #[test]
        fn translation_covariance(seed in any::<u64>(), chi in chi_strategy(),
                                  a in proptest::collection::vec(-3i64..4, 2),
                                  b in proptest::collection::vec(-3i64..4, 2)) {
            let z = random_point(seed);
            let s = EvalSettings::default();
            let u = [Complex64::new(0.2, 0.01), Complex64::new(-0.1, 0.03)];
            let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            let lhs = theta_eval(&u, &z, &chi.shift(&a, &b), &s).unwrap();
            let rb = chi.r().iter().zip(&b).fold(Rational::zero(), |acc, (x, y)| acc + x * Rational::from_integer(y.clone()));
            let phase = crate::exact::RootOfUnity::new(rb).to_complex();
            let rhs = phase * theta_eval(&u, &z, &chi, &s).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-3));
        }

        #[test]
        fn conjugation_symmetry(seed in any::<u64>(), chi in chi_strategy()) {
            let z = random_point(seed);
            let s = EvalSettings::default();
            let mz = SiegelPoint::new(z.matrix().map(|c| -c.conj())).unwrap();
            let lhs = phi_eval(&chi, &z, &s).unwrap().conj();
            let rhs = phi_eval(&chi.neg_s(), &mz, &s).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-8);
        }
    }

    #[test]
    fn characteristic_accessors() {
        let c = Characteristic::from_i64(4, &[1, -3], &[2, 5]).unwrap();
        let r: Vec<f64> = c.r().iter().map(rational_to_f64).collect();
        assert_eq!(r, vec![0.25, -0.75]);
        assert_eq!(c.canonical().to_string(), "[1/4,1/4;1/2,1/4]");
        assert!(c.has_level(&BigInt::from(8)));
        assert!(!c.has_level(&BigInt::from(6)));
    }
}
