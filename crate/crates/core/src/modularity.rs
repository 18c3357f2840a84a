//! Products of theta constants at even level `N`: the exact modularity test
//! for `Gamma(N)` and the closed-form multiplier of a single theta constant.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, Rational, RootOfUnity};
use crate::symplectic::{
    act_siegel, gamma_generators, membership, GammaKind, Group, IntMatrix, SiegelPoint, SympMatrix,
};
use crate::theta::{in_sigma_minus, phi_eval, Characteristic, EvalSettings, ThetaError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularityError {
    #[error("level {0} is not a positive even integer")]
    OddLevel(BigInt),
    #[error("characteristic {chi} does not lie in (1/{level})Z^2g")]
    LevelMismatch { chi: String, level: BigInt },
    #[error("characteristic {0} lies in Sigma_- (its theta constant vanishes identically)")]
    Vanishing(String),
    #[error("matrix is not in Gamma({0})")]
    NotInGamma(BigInt),
    #[error("genus mismatch")]
    Genus,
    #[error("exponent too large for numeric evaluation")]
    ExponentTooLarge,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("action failed: {0}")]
    Action(String),
}

/// A finite family `{m(r, s)}` describing `prod Phi_[r;s]^m(r,s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaProduct {
    g: usize,
    den: BigInt,
    terms: Vec<(Characteristic, BigInt)>,
}

impl ThetaProduct {
    /// Builds a product, reducing characteristics into `[0, 1)`, merging equal
    /// ones and dropping zero exponents.
    pub fn new(
        g: usize,
        den: BigInt,
        terms: Vec<(Characteristic, BigInt)>,
    ) -> Result<Self, ModularityError> {
        if !den.is_positive() {
            return Err(ModularityError::OddLevel(den));
        }
        let mut merged: BTreeMap<Characteristic, BigInt> = BTreeMap::new();
        for (chi, m) in terms {
            if chi.g() != g {
                return Err(ModularityError::Genus);
            }
            if !chi.has_level(&den) {
                return Err(ModularityError::LevelMismatch {
                    chi: chi.to_string(),
                    level: den,
                });
            }
            if in_sigma_minus(&chi) {
                return Err(ModularityError::Vanishing(chi.to_string()));
            }
            *merged.entry(chi.canonical()).or_insert_with(BigInt::zero) += m;
        }
        let terms = merged.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(Self { g, den, terms })
    }

    pub fn single(chi: Characteristic, m: i64, den: BigInt) -> Result<Self, ModularityError> {
        Self::new(chi.g(), den, vec![(chi, BigInt::from(m))])
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn terms(&self) -> &[(Characteristic, BigInt)] {
        &self.terms
    }

    /// Parses the text format: a header with `g` and `N`, then one line per
    /// term `m r_1 .. r_g s_1 .. s_g` with rationals written `num/den`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, ModularityError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: &str| ModularityError::Parse {
            line,
            msg: msg.to_string(),
        };

        let mut header: Vec<(usize, String)> = Vec::new();
        while header.len() < 2 {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| perr(0, "missing header (g and N)"))?;
            for tok in l.split_whitespace() {
                header.push((ln, tok.to_string()));
            }
        }
        if header.len() > 2 {
            return Err(perr(header[2].0, "header must contain exactly g and N"));
        }
        let g: usize = header[0]
            .1
            .parse()
            .map_err(|_| perr(header[0].0, "genus must be a positive integer"))?;
        if g == 0 {
            return Err(perr(header[0].0, "genus must be a positive integer"));
        }
        let den: BigInt = header[1]
            .1
            .parse()
            .map_err(|_| perr(header[1].0, "level must be an integer"))?;
        if !den.is_positive() {
            return Err(perr(header[1].0, "level must be positive"));
        }

        let mut terms = Vec::new();
        for (ln, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 1 + 2 * g {
                return Err(perr(
                    ln,
                    &format!("expected {} fields, found {}", 1 + 2 * g, toks.len()),
                ));
            }
            let m: BigInt = toks[0]
                .parse()
                .map_err(|_| perr(ln, "exponent must be an integer"))?;
            let qs = toks[1..]
                .iter()
                .map(|t| parse_rational(t).ok_or_else(|| perr(ln, &format!("bad rational '{t}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            let chi = Characteristic::from_vector(&qs).map_err(|e| perr(ln, &e.to_string()))?;
            terms.push((chi, m));
        }
        Self::new(g, den, terms)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.g, self.den);
        for (chi, m) in &self.terms {
            let qs: Vec<String> = chi.to_vector().iter().map(format_rational).collect();
            out.push_str(&format!("{} {}\n", m, qs.join(" ")));
        }
        out
    }
}

impl fmt::Display for ThetaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, m)| format!("Phi{c}^{m}"))
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CongruenceKind {
    /// `sum m (N r_j)(N r_k)`.
    Rr,
    /// `sum m (N s_j)(N s_k)`.
    Ss,
    /// `sum m (N r_j)(N s_k)`.
    Rs,
}

impl fmt::Display for CongruenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rr => "rr",
            Self::Ss => "ss",
            Self::Rs => "rs",
        })
    }
}

/// One violated congruence, with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceFailure {
    pub kind: CongruenceKind,
    pub j: usize,
    pub k: usize,
    pub sum: String,
    pub modulus: String,
}

impl fmt::Display for CongruenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} congruence at (j,k)=({},{}): sum {} is not 0 mod {}",
            self.kind, self.j, self.k, self.sum, self.modulus
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub modular: bool,
    pub failures: Vec<CongruenceFailure>,
}

impl FamilyCheck {
    pub fn diagnostic(&self) -> String {
        if self.modular {
            "all congruences hold".into()
        } else {
            self.failures
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

fn check_level(n: &BigInt) -> Result<(), ModularityError> {
    if !n.is_positive() || n.is_odd() {
        return Err(ModularityError::OddLevel(n.clone()));
    }
    Ok(())
}

/// Exact test of whether the product is invariant under `Gamma(N)`.
///
/// With `x = N r`, `y = N s` the conditions are, for all `j, k`:
/// `sum m x_j x_j` and `sum m y_j y_j` vanish mod `2N`; `sum m x_j x_k` and
/// `sum m y_j y_k` (`j != k`) vanish mod `N`; `sum m x_j y_k` vanishes mod `N`.
pub fn check_family(fam: &ThetaProduct, n: &BigInt) -> Result<FamilyCheck, ModularityError> {
    check_level(n)?;
    let g = fam.g;
    let mut xs = Vec::new();
    for (chi, m) in &fam.terms {
        let (x, y) = chi
            .scaled_nums(n)
            .ok_or_else(|| ModularityError::LevelMismatch {
                chi: chi.to_string(),
                level: n.clone(),
            })?;
        xs.push((x, y, m));
    }
    let two_n = n * 2;
    let mut failures = Vec::new();
    let sum = |f: &dyn Fn(&[BigInt], &[BigInt]) -> BigInt| -> BigInt {
        xs.iter()
            .fold(BigInt::zero(), |acc, (x, y, m)| acc + *m * f(x, y))
    };
    let mut test = |kind, j: usize, k: usize, s: BigInt, modulus: &BigInt| {
        if !s.mod_floor(modulus).is_zero() {
            failures.push(CongruenceFailure {
                kind,
                j: j + 1,
                k: k + 1,
                sum: s.to_string(),
                modulus: modulus.to_string(),
            });
        }
    };
    for j in 0..g {
        for k in j..g {
            let modulus = if j == k { &two_n } else { n };
            test(
                CongruenceKind::Rr,
                j,
                k,
                sum(&|x, _| &x[j] * &x[k]),
                modulus,
            );
            test(
                CongruenceKind::Ss,
                j,
                k,
                sum(&|_, y| &y[j] * &y[k]),
                modulus,
            );
        }
    }
    for j in 0..g {
        for k in 0..g {
            test(CongruenceKind::Rs, j, k, sum(&|x, y| &x[j] * &y[k]), n);
        }
    }
    Ok(FamilyCheck {
        modular: failures.is_empty(),
        failures,
    })
}

fn random_char<R: Rng + ?Sized>(rng: &mut R, n: i64, g: usize) -> Characteristic {
    loop {
        let v: Vec<i64> = (0..2 * g).map(|_| rng.random_range(0..n)).collect();
        let chi = Characteristic::from_i64(n, &v[..g], &v[g..]).expect("shape");
        if !in_sigma_minus(&chi) {
            return chi;
        }
    }
}

/// `len` distinct random characteristics of level `n` outside the odd set,
/// with exponents in `[-3, 3] \ {0}`.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, n: i64, g: usize, len: usize) -> ThetaProduct {
    let mut chars: Vec<Characteristic> = Vec::new();
    while chars.len() < len {
        let chi = random_char(rng, n, g);
        if !chars.contains(&chi) {
            chars.push(chi);
        }
    }
    let terms = chars
        .into_iter()
        .map(|c| {
            let m = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
            (c, BigInt::from(m))
        })
        .collect();
    ThetaProduct::new(g, BigInt::from(n), terms).expect("valid characteristics")
}

/// A random family passing [`check_family`] whose exponents are not all
/// multiples of `2n`. The congruences are linear in the exponents, so the
/// per-characteristic residues are read off single-term checks and a
/// solution is drawn from all exponent vectors mod `2n`.
pub fn random_modular_family<R: Rng + ?Sized>(
    rng: &mut R,
    n: i64,
    g: usize,
    len: usize,
) -> ThetaProduct {
    let two_n = 2 * n;
    let big_n = BigInt::from(n);
    loop {
        let fam = random_family(rng, n, g, len);
        let chars: Vec<Characteristic> = fam.terms.iter().map(|(c, _)| c.clone()).collect();
        // residues[i] = (sum, modulus) of each congruence for chars[i]
        let residues: Vec<BTreeMap<(CongruenceKind, usize, usize), (i64, i64)>> = chars
            .iter()
            .map(|c| {
                let single = ThetaProduct::single(c.clone(), 1, big_n.clone()).expect("valid");
                check_family(&single, &big_n)
                    .expect("even level")
                    .failures
                    .into_iter()
                    .map(|f| {
                        let v = (
                            f.sum.parse().expect("small"),
                            f.modulus.parse().expect("small"),
                        );
                        ((f.kind, f.j, f.k), v)
                    })
                    .collect()
            })
            .collect();
        let keys: BTreeMap<(CongruenceKind, usize, usize), i64> = residues
            .iter()
            .flat_map(|r| r.iter().map(|(k, (_, m))| (*k, *m)))
            .collect();
        let total = (two_n as u64).pow(len as u32);
        let mut solutions = Vec::new();
        for code in 1..total {
            let ms: Vec<i64> = (0..len)
                .map(|i| ((code / (two_n as u64).pow(i as u32)) % two_n as u64) as i64)
                .collect();
            let ok = keys.iter().all(|(key, modulus)| {
                let s: i64 = residues
                    .iter()
                    .zip(&ms)
                    .map(|(r, m)| r.get(key).map_or(0, |v| v.0) * m)
                    .sum();
                s.rem_euclid(*modulus) == 0
            });
            if ok {
                solutions.push(ms);
            }
        }
        if solutions.is_empty() {
            continue;
        }
        let ms = &solutions[rng.random_range(0..solutions.len())];
        let terms = chars
            .into_iter()
            .zip(ms)
            .map(|(c, &m)| {
                let centered = if m > n { m - two_n } else { m };
                (c, BigInt::from(centered + two_n * rng.random_range(-1..=1)))
            })
            .collect();
        let out = ThetaProduct::new(g, big_n.clone(), terms).expect("valid");
        if !out.terms.is_empty() {
            return out;
        }
    }
}

fn quad(x: &[BigInt], m: &IntMatrix, y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            acc += &x[i] * m.get(i, j) * &y[j];
        }
    }
    acc
}

/// The root of unity `mu` with `Phi_[r;s](gamma Z) = mu Phi_[r;s](Z)` for
/// `gamma` in `Gamma(N)`, `N` even, from the closed form in `x = N r`,
/// `y = N s` and `(A0, B0, C0, D0) = (gamma - I) / N`:
///
/// `-(1/2N) tx (-tB0 + N A0 tB0) x - (1/2N) ty (C0 + N C0 tD0) y
///  - (1/N) tx (A0 + (N/2)(A0 tD0 + tD0 A0 + B0 tC0 - tB0 C0)) y`.
pub fn gamma_multiplier(
    gamma: &SympMatrix,
    chi: &Characteristic,
    n: &BigInt,
) -> Result<RootOfUnity, ModularityError> {
    check_level(n)?;
    if gamma.g() != chi.g() {
        return Err(ModularityError::Genus);
    }
    if !gamma.modulus().is_zero() || !membership(gamma, Group::Gamma, n) {
        return Err(ModularityError::NotInGamma(n.clone()));
    }
    let (x, y) = chi
        .scaled_nums(n)
        .ok_or_else(|| ModularityError::LevelMismatch {
            chi: chi.to_string(),
            level: n.clone(),
        })?;
    let g = chi.g();
    let g0 = gamma
        .entries()
        .sub(&IntMatrix::identity(2 * g))
        .div_exact(n)
        .ok_or_else(|| ModularityError::NotInGamma(n.clone()))?;
    let (a0, b0, c0, d0) = g0.abcd();
    let (tb0, tc0, td0) = (b0.transpose(), c0.transpose(), d0.transpose());

    let m1 = a0.mul(&tb0).scale(n).sub(&tb0);
    let m2 = c0.add(&c0.mul(&td0).scale(n));
    let inner = a0
        .mul(&td0)
        .add(&td0.mul(&a0))
        .add(&b0.mul(&tc0))
        .sub(&tb0.mul(&c0));

    let nq = Rational::from_integer(n.clone());
    let two_nq = &nq * Rational::from_integer(BigInt::from(2));
    let q1 = Rational::from_integer(quad(&x, &m1, &x)) / &two_nq;
    let q2 = Rational::from_integer(quad(&y, &m2, &y)) / &two_nq;
    let q3 = Rational::from_integer(quad(&x, &a0, &y)) / &nq;
    // (1/N)(N/2) = 1/2
    let q4 = Rational::new(quad(&x, &inner, &y), BigInt::from(2));
    Ok(RootOfUnity::new(-(q1 + q2 + q3 + q4)))
}

/// `prod mu_chi^m` over the family.
pub fn product_multiplier(
    fam: &ThetaProduct,
    gamma: &SympMatrix,
    n: &BigInt,
) -> Result<RootOfUnity, ModularityError> {
    let mut acc = RootOfUnity::one();
    for (chi, m) in &fam.terms {
        let mu = gamma_multiplier(gamma, chi, n)?;
        let m = m
            .mod_floor(&mu.order())
            .to_i64()
            .expect("reduced below the order");
        acc = &acc * &mu.pow(m);
    }
    Ok(acc)
}

/// Numeric value of `prod Phi^m` at `z`.
pub fn eval_product(
    fam: &ThetaProduct,
    z: &SiegelPoint,
    settings: &EvalSettings,
) -> Result<Complex64, ModularityError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (chi, m) in &fam.terms {
        let v = phi_eval(chi, z, settings)?;
        let m = m.to_i32().ok_or(ModularityError::ExponentTooLarge)?;
        acc *= v.powi(m);
    }
    Ok(acc)
}

/// A generator of `Gamma(N)` under which the product visibly moves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub kind: GammaKind,
    pub j: usize,
    pub k: usize,
    pub deviation: f64,
}

/// Scans the generators of `Gamma(N)` for the largest `|F(gamma Z) / F(Z) - 1|`.
pub fn find_witness(
    fam: &ThetaProduct,
    n: &BigInt,
    z: &SiegelPoint,
    settings: &EvalSettings,
) -> Result<Option<Witness>, ModularityError> {
    let base = eval_product(fam, z, settings)?;
    let mut best: Option<Witness> = None;
    for (kind, j, k, gamma) in gamma_generators(n, fam.g) {
        let w = act_siegel(&gamma, z).map_err(|e| ModularityError::Action(e.to_string()))?;
        let moved = eval_product(fam, &w, settings)?;
        let deviation = (moved / base - 1.0).norm();
        if best.as_ref().is_none_or(|b| deviation > b.deviation) {
            best = Some(Witness {
                kind,
                j,
                k,
                deviation,
            });
        }
    }
    Ok(best)
}
