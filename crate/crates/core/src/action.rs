//! Actions of `iota(a)`, of `G_N` on power families, and of `G_{2M^2}` on
//! single theta constants with odd denominator `M`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exact::{mod_inverse, Rational, RootOfUnity};
use crate::symplectic::{
    invert_sp, j_matrix, membership, special_gamma, sympl_multiplier, GammaKind, Group, SympMatrix,
};
use crate::theta::{reduce_char, Characteristic};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionError {
    #[error("{a} is not a unit modulo {modulus}")]
    NotUnit { a: BigInt, modulus: BigInt },
    #[error("matrix is not in G_{0}")]
    NotInGn(BigInt),
    #[error("level {0} must be even")]
    OddLevel(BigInt),
    #[error("denominator {0} must be odd")]
    EvenDenominator(BigInt),
    #[error("characteristic does not lie in (1/{0})Z^2g")]
    LevelMismatch(BigInt),
    #[error("genus mismatch")]
    Genus,
}

/// `Phi_[r;s]^alpha = multiplier * Phi_[chi_out]`, where `chi_out` has not
/// been reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionResult {
    pub multiplier: RootOfUnity,
    pub chi_out: Characteristic,
}

impl ActionResult {
    /// Reduces `chi_out = [r'; s']` into `[0, 1)^2g` and folds the
    /// translation phase `e(t r_red (s' - s_red))` into the multiplier.
    pub fn reduced(&self) -> ActionResult {
        let (mult, red) = canonical_with_phase(&self.chi_out);
        ActionResult {
            multiplier: &self.multiplier * &mult,
            chi_out: red,
        }
    }
}

/// Canonical representative of `chi` together with the root of unity `c`
/// such that `Phi_chi = c * Phi_canonical`.
pub fn canonical_with_phase(chi: &Characteristic) -> (RootOfUnity, Characteristic) {
    let red = chi.canonical();
    let dot = red
        .r()
        .iter()
        .zip(chi.s().iter().zip(red.s()))
        .fold(Rational::zero(), |acc, (r, (s, s_red))| {
            acc + r * (s - s_red)
        });
    (RootOfUnity::new(dot), red)
}

/// The action of `iota(a^-1)`: `[r; s] -> [r; a s]`, with `r` reduced mod
/// `Z^g` and `s` mod `N Z^g`, where `N` is the denominator of `chi`.
pub fn act_iota_inv(a: &BigInt, chi: &Characteristic) -> Result<Characteristic, ActionError> {
    let n = chi.den().clone();
    let modulus = &n * &n * 2;
    if mod_inverse(a, &modulus).is_none() {
        return Err(ActionError::NotUnit {
            a: a.clone(),
            modulus,
        });
    }
    let r = chi.r();
    let s: Vec<Rational> = chi
        .s()
        .iter()
        .map(|x| x * Rational::from_integer(a.clone()))
        .collect();
    let out = Characteristic::from_rationals(&r, &s).expect("same shape");
    Ok(reduce_char(&out, &BigInt::one(), &n).expect("r keeps its denominator"))
}

/// The action of `alpha` in `G_N` on `Phi^(2N^2)`: `chi -> t alpha chi`
/// reduced mod `Z^2g`.
pub fn act_power_family(
    alpha: &SympMatrix,
    chi: &Characteristic,
    n: &BigInt,
) -> Result<Characteristic, ActionError> {
    if n.is_odd() || n.is_zero() {
        return Err(ActionError::OddLevel(n.clone()));
    }
    if alpha.g() != chi.g() {
        return Err(ActionError::Genus);
    }
    if !chi.has_level(n) {
        return Err(ActionError::LevelMismatch(n.clone()));
    }
    if !membership(alpha, Group::GN, n) {
        return Err(ActionError::NotInGn(n.clone()));
    }
    let v = alpha.entries().transpose().apply_rational(&chi.to_vector());
    Ok(Characteristic::from_vector(&v)
        .expect("even length")
        .canonical())
}

/// The action of `alpha` in `G_{2M^2}` on `Phi_[r;s]` with odd denominator
/// `M`: multiplier `e((tr a s - tr' s') / 2)` with `a = nu(alpha)` and
/// `[r'; s'] = t alpha [r; s]`.
pub fn act_phi(alpha: &SympMatrix, chi: &Characteristic) -> Result<ActionResult, ActionError> {
    let m = chi.den().clone();
    if m.is_even() {
        return Err(ActionError::EvenDenominator(m));
    }
    if alpha.g() != chi.g() {
        return Err(ActionError::Genus);
    }
    let level = &m * &m * 2;
    if !membership(alpha, Group::GN, &level) {
        return Err(ActionError::NotInGn(level));
    }
    let a = sympl_multiplier(&alpha.reduce_mod(&level))
        .map_err(|_| ActionError::NotInGn(level.clone()))?;
    let g = chi.g();
    let v = chi.to_vector();
    let vp = alpha.entries().transpose().apply_rational(&v);
    let dot = |x: &[Rational], y: &[Rational]| {
        x.iter()
            .zip(y)
            .fold(Rational::zero(), |acc, (p, q)| acc + p * q)
    };
    let before = dot(&v[..g], &v[g..]) * Rational::from_integer(a);
    let after = dot(&vp[..g], &vp[g..]);
    let two = Rational::from_integer(BigInt::from(2));
    Ok(ActionResult {
        multiplier: RootOfUnity::new((before - after) / two),
        chi_out: Characteristic::from_vector(&vp).expect("even length"),
    })
}

/// Elements of `Sp_2g(Z)` lying in `G_N`: `J`, the level-1 diagonal kind, the
/// level-1 upper kind off the diagonal, and the generators of `Gamma(N)`.
pub fn gn_sp_generators(n: &BigInt, g: usize) -> Vec<SympMatrix> {
    let one = BigInt::one();
    let mut out = vec![SympMatrix::over_z(j_matrix(g))
        .expect("J")
        .verified()
        .expect("J in Sp")];
    for j in 1..=g {
        for k in 1..=g {
            if j != k {
                out.push(special_gamma(GammaKind::Diagonal, j, k, &one, g).expect("valid"));
            }
            if j < k {
                out.push(special_gamma(GammaKind::Upper, j, k, &one, g).expect("valid"));
            }
        }
    }
    for (_, _, _, m) in crate::symplectic::gamma_generators(n, g) {
        out.push(m);
    }
    out
}

/// Random word in `gn_sp_generators` and their inverses; an element of
/// `Sp_2g(Z)` that also lies in `G_N`.
pub fn random_gn_word<R: Rng + ?Sized>(
    rng: &mut R,
    n: &BigInt,
    g: usize,
    len: usize,
) -> SympMatrix {
    let gens = gn_sp_generators(n, g);
    let mut w = SympMatrix::identity(g).verified().expect("identity");
    for _ in 0..len {
        let m = &gens[rng.random_range(0..gens.len())];
        let m = if rng.random_bool(0.5) {
            m.clone()
        } else {
            invert_sp(m)
        };
        w = w.mul(&m);
    }
    w
}
