//! The CM field `K = Q(zeta_5)`: period matrix, CM point `Z0`, Riemann form,
//! the representation `h`, the reflex norm, and the Galois action on theta
//! constants at `Z0` obtained through `h(phi*(x))`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::action::{act_phi, ActionResult};
use crate::exact::{rat, CycloElem, CycloField, ExactError, RatMatrix, Rational, RootOfUnity};
use crate::symplectic::{
    membership, sympl_multiplier, Group, IntMatrix, SiegelPoint, SympMatrix, SymplecticError,
};
use crate::theta::{self, theta_null, Characteristic, EvalSettings, ThetaError};

/// Embedding exponents: `phi_1 = (zeta -> zeta)`, `phi_2 = (zeta -> zeta^2)`.
pub const PHI_EXPONENTS: [i64; 2] = [1, 2];
/// `phi_2^-1`.
pub const PHI2_INV: i64 = 3;
/// Complex conjugation.
pub const CONJ: i64 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CmError {
    #[error("element must lie in Q(zeta_5), got order {0}")]
    Order(u64),
    #[error("element must have integral coordinates")]
    NotIntegral,
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("norm {norm} is not prime to 2p = {two_p}")]
    NormNotPrime { norm: BigInt, two_p: BigInt },
    #[error("h(phi*(x)) is not in GSp_4 mod {0}")]
    NotInGsp(BigInt),
    #[error("h(phi*(x)) is not in G_{0}")]
    NotInGn(BigInt),
    #[error("characteristic denominator must divide {0}")]
    Denominator(BigInt),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("context invariant violated: {0}")]
    Context(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error("action failed: {0}")]
    Action(String),
}

/// Everything fixed once for `K = Q(zeta_5)`.
#[derive(Debug, Clone)]
pub struct CMContext {
    field: Arc<CycloField>,
    zeta: CycloElem,
    xi: CycloElem,
    basis: [CycloElem; 4],
    basis_inv: RatMatrix,
    omega: DMatrix<Complex64>,
    z0: SiegelPoint,
    theta_null: Complex64,
    settings: EvalSettings,
}

/// `beta = [[0,0,1,-1],[0,0,-1,0],[0,1,0,0],[1,1,0,0]]`, with
/// `beta(Z0) = -conj(Z0)`.
pub fn beta_matrix() -> SympMatrix {
    SympMatrix::from_i64(
        &[&[0, 0, 1, -1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[1, 1, 0, 0]],
        0,
    )
    .expect("4x4")
}

pub fn build_context(settings: EvalSettings) -> Result<CMContext, CmError> {
    let field = CycloField::new(5);
    let zeta = field.zeta_pow(1);
    let xi = (field.zeta_pow(1) - field.zeta_pow(4)).scale(&rat(1, 5));
    let basis = [
        field.zeta_pow(2),
        field.zeta_pow(4),
        field.zeta_pow(1),
        field.zeta_pow(1) + field.zeta_pow(3),
    ];
    let b = RatMatrix::from_rows(basis.iter().map(|e| e.coeffs().to_vec()).collect())?;
    let basis_inv = b.inverse()?;

    let omega = DMatrix::from_fn(2, 4, |i, j| {
        basis[j]
            .embed(PHI_EXPONENTS[i], 1e-13)
            .expect("small coefficients")
    });
    let right = omega.columns(2, 2).into_owned();
    let left = omega.columns(0, 2).into_owned();
    let inv = right
        .try_inverse()
        .ok_or_else(|| CmError::Context("[Phi(xi_3) Phi(xi_4)] is singular".into()))?;
    let z0 = SiegelPoint::new(inv * left).map_err(|e| CmError::Context(format!("Z0: {e}")))?;

    let mut ctx = CMContext {
        field,
        zeta,
        xi,
        basis,
        basis_inv,
        omega,
        z0,
        theta_null: Complex64::new(0.0, 0.0),
        settings,
    };
    let rm = ctx.riemann_matrix();
    let j = RatMatrix::from_rows(
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|k| {
                        Rational::from_integer(crate::symplectic::j_matrix(2).get(i, k).clone())
                    })
                    .collect()
            })
            .collect(),
    )?;
    if rm != j {
        return Err(CmError::Context("Riemann matrix differs from J".into()));
    }
    ctx.theta_null = theta_null(&ctx.z0, &Characteristic::zero(2), &settings)?;
    if !(ctx.theta_null.norm() > 0.1) {
        return Err(CmError::Context(format!(
            "|Theta(0, Z0)| = {}",
            ctx.theta_null.norm()
        )));
    }
    Ok(ctx)
}

impl CMContext {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn zeta(&self) -> &CycloElem {
        &self.zeta
    }

    pub fn xi(&self) -> &CycloElem {
        &self.xi
    }

    pub fn basis(&self) -> &[CycloElem; 4] {
        &self.basis
    }

    pub fn omega(&self) -> &DMatrix<Complex64> {
        &self.omega
    }

    pub fn z0(&self) -> &SiegelPoint {
        &self.z0
    }

    pub fn theta_null_z0(&self) -> Complex64 {
        self.theta_null
    }

    pub fn settings(&self) -> &EvalSettings {
        &self.settings
    }

    /// `sum_k a_k zeta^k` for `k = 0..coords.len()`.
    pub fn from_coords(&self, coords: &[i64]) -> CycloElem {
        self.field.from_int_coeffs(coords)
    }

    fn check_order(&self, x: &CycloElem) -> Result<(), CmError> {
        if x.order() != 5 {
            return Err(CmError::Order(x.order()));
        }
        Ok(())
    }

    /// `E(Phi(x), Phi(y)) = Tr_{K/Q}(xi x conj(y))`.
    pub fn riemann_form(&self, x: &CycloElem, y: &CycloElem) -> Result<Rational, CmError> {
        self.check_order(x)?;
        self.check_order(y)?;
        let prod = &(&self.xi * x) * &y.conjugate(CONJ)?;
        Ok(prod.trace_to_q())
    }

    /// `[E(Phi(xi_j), Phi(xi_k))]`.
    pub fn riemann_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(4, 4);
        for j in 0..4 {
            for k in 0..4 {
                m.set(
                    j,
                    k,
                    self.riemann_form(&self.basis[j], &self.basis[k])
                        .expect("order 5"),
                );
            }
        }
        m
    }

    /// The rational matrix with `x xi_j = sum_k h_jk xi_k`.
    pub fn h_map(&self, x: &CycloElem) -> Result<RatMatrix, CmError> {
        self.check_order(x)?;
        let v = RatMatrix::from_rows(
            self.basis
                .iter()
                .map(|b| (x * b).coeffs().to_vec())
                .collect(),
        )?;
        Ok(v.mul(&self.basis_inv)?)
    }

    /// `phi*(x) = x^(phi_1^-1) x^(phi_2^-1) = x * sigma_3(x)`.
    pub fn reflex_norm(&self, x: &CycloElem) -> Result<CycloElem, CmError> {
        self.check_order(x)?;
        Ok(x * &x.conjugate(PHI2_INV)?)
    }

    /// `x_1 = 1 + 2p zeta`.
    pub fn x1(&self, p: i64) -> CycloElem {
        self.from_coords(&[1, 2 * p])
    }

    /// `x_2 = 1 + 2p (zeta^2 - zeta^3 + zeta^4)`.
    pub fn x2(&self, p: i64) -> CycloElem {
        self.from_coords(&[1, 0, 2 * p, -2 * p, 2 * p])
    }
}

fn is_odd_prime(p: &BigInt) -> bool {
    let Some(p) = p.to_u64() else { return false };
    p > 2
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| p % d != 0)
}

fn to_int_matrix(m: &RatMatrix) -> Option<IntMatrix> {
    if !m.is_integral() {
        return None;
    }
    let data = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).to_integer())
        .collect();
    Some(IntMatrix::from_vec(m.rows(), m.cols(), data))
}

/// The symplectic data attached to an integral `x` and an odd prime `p`.
#[derive(Debug, Clone)]
pub struct GaloisActor {
    pub x: CycloElem,
    pub p: BigInt,
    pub reflex: CycloElem,
    pub h_matrix: IntMatrix,
    pub h_mod: SympMatrix,
    pub nu: BigInt,
    pub first_row: [BigInt; 4],
    pub in_gn: bool,
}

impl GaloisActor {
    pub fn new(ctx: &CMContext, x: &CycloElem, p: &BigInt) -> Result<Self, CmError> {
        ctx.check_order(x)?;
        if !x.is_integral_on_basis() {
            return Err(CmError::NotIntegral);
        }
        if !is_odd_prime(p) {
            return Err(CmError::NotOddPrime(p.clone()));
        }
        let two_p = p * 2;
        let norm = x.norm_to_q().to_integer();
        if !norm.gcd(&two_p).is_one() {
            return Err(CmError::NormNotPrime { norm, two_p });
        }
        let reflex = ctx.reflex_norm(x)?;
        let h = ctx.h_map(&reflex)?;
        let h_matrix = to_int_matrix(&h)
            .ok_or_else(|| CmError::CrossCheck("h(phi*(x)) is not integral".into()))?;
        let level: BigInt = p * p * 2;
        let h_mod = SympMatrix::new(h_matrix.clone(), level.clone())?;
        let nu = sympl_multiplier(&h_mod).map_err(|_| CmError::NotInGsp(level.clone()))?;
        let h_mod = h_mod.verified()?;
        let in_gn = membership(&h_mod, Group::GN, &level);
        let first_row = [0, 1, 2, 3].map(|k| h_matrix.get(0, k).clone());
        Ok(Self {
            x: x.clone(),
            p: p.clone(),
            reflex,
            h_matrix,
            h_mod,
            nu,
            first_row,
            in_gn,
        })
    }

    /// `2p^2`.
    pub fn level(&self) -> BigInt {
        &self.p * &self.p * 2
    }

    /// Image of `Phi_chi(Z0)` under the Artin symbol of `(x)`: the action of
    /// `h(phi*(x))` followed by reduction into `[0,1)^4`.
    pub fn act(&self, chi: &Characteristic) -> Result<ActionResult, CmError> {
        if !self.p.is_multiple_of(chi.den()) {
            return Err(CmError::Denominator(self.p.clone()));
        }
        if !self.in_gn {
            return Err(CmError::NotInGn(self.level()));
        }
        let res = act_phi(&self.h_mod, chi).map_err(|e| CmError::Action(e.to_string()))?;
        Ok(res.reduced())
    }
}

pub fn artin_action(
    ctx: &CMContext,
    x: &CycloElem,
    p: &BigInt,
    chi: &Characteristic,
) -> Result<ActionResult, CmError> {
    GaloisActor::new(ctx, x, p)?.act(chi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reciprocal {
    X1,
    X2,
}

/// Closed-form phase of the Artin action of `(x_1)` or `(x_2)` on
/// `Phi_[a/p, b/p; c/p, d/p](Z0)`.
///
/// For `x_2` this is the phase obtained by composing the transformation
/// multiplier with the translation back to `(a, b, c, d)`; it carries a
/// `-6ad` term.
pub fn closed_form_phase(which: Reciprocal, p: &BigInt, abcd: [i64; 4]) -> RootOfUnity {
    let [a, b, c, d] = abcd.map(BigInt::from);
    let num = match which {
        Reciprocal::X1 => -(&a * &a) + 2 * &a * &d - &b * &b - &c * &c - 2 * &c * &d - 2 * &d * &d,
        Reciprocal::X2 => {
            -(&a * &a) + 4 * &a * &b - 4 * &a * &c - 6 * &a * &d - &b * &b + 4 * &b * &c - &c * &c
                + 2 * &c * &d
                + 2 * &d * &d
        }
    };
    RootOfUnity::new(Rational::new(num, p.clone()))
}

/// Result of the congruence test for whether the Artin symbol of `(x)` can
/// fix `z^(2p^2)`, `z = Phi_[1/p,0;0,0](Z0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BelongResult {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    /// `-2ab + 2ac + ad - 2bc - 2cd - 2d^2`.
    pub value: String,
    pub value_mod_p: String,
    /// `-2ab + 2ac + 4ad - 2bc - 2cd - 2d^2`, the form implied by the
    /// simulated actions of `(x_1)` and `(x_2)`. On first rows of
    /// `h(phi*(x))` it vanishes identically, while `value = -3ad`.
    pub derived_value: String,
    pub derived_mod_p: String,
}

/// The four quadratic forms giving the first row of `h(phi*(x))` for
/// `x = a_0 + a_1 zeta + ... + a_4 zeta^4`.
pub fn first_row_forms(a: &[BigInt; 5]) -> [BigInt; 4] {
    let [a0, a1, a2, a3, a4] = a;
    let ra = a0 * a0 - a0 * a1 - a0 * a3 + a1 * a2 + a1 * a3 - a1 * a4 - a2 * a2 + a2 * a4;
    let rb = -(a0 * a1) + a0 * a2 - a0 * a3 + a0 * a4 + a1 * a2 - a2 * a2 + a3 * a3 - a3 * a4;
    let rc = -(a0 * a1) - a0 * a2 + a0 * a3 + a0 * a4 + a1 * a1 - a1 * a3 + a2 * a4 - a4 * a4;
    let rd = a0 * a2 - a0 * a3 + a1 * a3 - a1 * a4 - a2 * a2 + a2 * a3 - a3 * a4 + a4 * a4;
    [ra, rb, rc, rd]
}

pub fn belong_criterion(
    ctx: &CMContext,
    coords: &[BigInt; 5],
    p: &BigInt,
) -> Result<BelongResult, CmError> {
    let coeffs: Vec<Rational> = coords
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let x = ctx.field().from_power_coeffs(&coeffs);
    let actor = GaloisActor::new(ctx, &x, p)?;
    if !actor.in_gn {
        return Err(CmError::NotInGn(actor.level()));
    }
    let forms = first_row_forms(coords);
    if forms != actor.first_row {
        return Err(CmError::CrossCheck(format!(
            "quadratic forms give {:?}, h(phi*(x)) has first row {:?}",
            forms.iter().map(ToString::to_string).collect::<Vec<_>>(),
            actor
                .first_row
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }
    let [a, b, c, d] = &forms;
    let two = BigInt::from(2);
    let common: BigInt =
        -(&two * a * b) + &two * a * c - &two * b * c - &two * c * d - &two * d * d;
    let value = &common + a * d;
    let derived = &common + BigInt::from(4) * a * d;

    // the same form, read off from the simulated actions of (x_1), (x_2)
    let simulated = simulated_criterion(ctx, p, &forms)?;
    if simulated != derived.mod_floor(p) {
        return Err(CmError::CrossCheck(format!(
            "simulated Artin phases give {simulated} mod {p}, expected {}",
            derived.mod_floor(p)
        )));
    }
    Ok(BelongResult {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        d: d.to_string(),
        value_mod_p: value.mod_floor(p).to_string(),
        value: value.to_string(),
        derived_mod_p: derived.mod_floor(p).to_string(),
        derived_value: derived.to_string(),
    })
}

/// Relative distance between `z^(2p^2)` and its image under the simulated
/// Artin symbol of `(x)`, where `z = Phi_[1/p,0;0,0](Z0)`.
pub fn power_deviation(ctx: &CMContext, x: &CycloElem, p: &BigInt) -> Result<f64, CmError> {
    let actor = GaloisActor::new(ctx, x, p)?;
    let chi = Characteristic::from_nums(
        p.clone(),
        vec![BigInt::one(), BigInt::zero()],
        vec![BigInt::zero(); 2],
    )?;
    let res = actor.act(&chi)?;
    let e = (p * p * BigInt::from(2))
        .to_i32()
        .ok_or_else(|| CmError::NotOddPrime(p.clone()))?;
    let s = ctx.settings();
    let z = theta::phi_eval(&chi, ctx.z0(), s)?.powi(e);
    let img = (res.multiplier.to_complex() * theta::phi_eval(&res.chi_out, ctx.z0(), s)?).powi(e);
    Ok((z - img).norm() / z.norm())
}

/// For `chi = (a,b,c,d)/p`, both `(x_1)` and `(x_2)` fix `chi` up to a
/// phase; the ratio of the two phases at `chi`, divided by the ratio at
/// `(1,0,0,0)/p`, is `e(2 q / p)` where `q` is the criterion value.
fn simulated_criterion(ctx: &CMContext, p: &BigInt, abcd: &[BigInt; 4]) -> Result<BigInt, CmError> {
    let pi = p.to_i64().ok_or_else(|| CmError::NotOddPrime(p.clone()))?;
    let a1 = GaloisActor::new(ctx, &ctx.x1(pi), p)?;
    let a2 = GaloisActor::new(ctx, &ctx.x2(pi), p)?;
    let ratio = |chi: &Characteristic| -> Result<RootOfUnity, CmError> {
        let r1 = a1.act(chi)?;
        let r2 = a2.act(chi)?;
        if r1.chi_out != chi.canonical() || r2.chi_out != chi.canonical() {
            return Err(CmError::CrossCheck(format!(
                "{chi} is not fixed by (x_1), (x_2)"
            )));
        }
        Ok(&r1.multiplier * &r2.multiplier.inv())
    };
    let nums: Vec<BigInt> = abcd.to_vec();
    let chi = Characteristic::from_nums(p.clone(), nums[..2].to_vec(), nums[2..].to_vec())?;
    let base = Characteristic::from_nums(
        p.clone(),
        vec![BigInt::one(), BigInt::zero()],
        vec![BigInt::zero(); 2],
    )?;
    let q = &ratio(&chi)? * &ratio(&base)?.inv();
    // q = e(t / p) with t = 2 * value
    let t: BigInt = (q.exponent() * Rational::from_integer(p.clone())).to_integer();
    let inv2: BigInt = (p + BigInt::one()) / 2;
    Ok((t * inv2).mod_floor(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::act_siegel;
    use crate::theta::{in_sigma_minus, phi_eval};
    use proptest::prelude::*;

    fn ctx() -> CMContext {
        build_context(EvalSettings::default()).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn int_rows(m: &RatMatrix) -> Vec<Vec<i64>> {
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| m.get(i, j).to_integer().to_i64().unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn riemann_form_examples() {
        let c = ctx();
        let b = c.basis();
        assert_eq!(c.riemann_form(&b[0], &b[2]).unwrap(), rat(-1, 1));
        assert_eq!(c.riemann_form(&b[0], &b[1]).unwrap(), rat(0, 1));
        let x = c.from_coords(&[3, -1, 4, 1]);
        assert_eq!(c.riemann_form(&x, &x).unwrap(), rat(0, 1));
        assert!(matches!(
            c.riemann_form(&CycloField::new(7).one(), &x),
            Err(CmError::Order(7))
        ));
    }

    #[test]
    fn z0_is_a_cm_point() {
        let c = ctx();
        let z0 = c.z0();
        assert!(z0.min_imag_eigenvalue() > 0.4);
        let w = act_siegel(&beta_matrix(), z0).unwrap();
        assert!(w.max_abs_diff(&SiegelPoint::new(z0.matrix().map(|v| -v.conj())).unwrap()) < 1e-10);
        assert!(c.theta_null_z0().norm() > 0.1);
    }

    #[test]
    fn h_examples() {
        let c = ctx();
        assert_eq!(c.h_map(&c.field().one()).unwrap(), RatMatrix::identity(4));
        let hz = c.h_map(c.zeta()).unwrap();
        assert_eq!(
            int_rows(&hz),
            vec![
                vec![0, 0, -1, 1],
                vec![-1, -1, 0, -1],
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 0]
            ]
        );
    }

    #[test]
    fn reflex_examples() {
        let c = ctx();
        assert_eq!(c.reflex_norm(&c.field().one()).unwrap(), c.field().one());
        for p in [3i64, 5, 7] {
            let m = big(2 * p * p);
            let congruent = |x: &CycloElem, y: &CycloElem| {
                (x - y)
                    .coeffs()
                    .iter()
                    .all(|q| q.is_integer() && q.to_integer().is_multiple_of(&m))
            };
            let r1 = c.reflex_norm(&c.x1(p)).unwrap();
            assert!(congruent(&r1, &c.from_coords(&[1, 2 * p, 0, 2 * p])));
            let r2 = c.reflex_norm(&c.x2(p)).unwrap();
            assert!(congruent(&r2, &c.from_coords(&[1, 2 * p, 4 * p, -2 * p])));
        }
    }

    #[test]
    fn artin_examples() {
        let c = ctx();
        let p = big(3);
        let chi = Characteristic::from_i64(3, &[1, 2], &[0, 1]).unwrap();
        let r1 = artin_action(&c, &c.x1(3), &p, &chi).unwrap();
        assert_eq!(r1.chi_out, chi);
        assert_eq!(
            r1.multiplier,
            closed_form_phase(Reciprocal::X1, &p, [1, 2, 0, 1])
        );
        // x = 1 mod 2p^2
        let trivial = c.from_coords(&[1 + 18, 18, -36]);
        let r = artin_action(&c, &trivial, &p, &chi).unwrap();
        assert!(r.multiplier.is_one());
        assert_eq!(r.chi_out, chi);
        assert!(matches!(
            artin_action(&c, &c.from_coords(&[1, 2, 2]), &big(5), &chi),
            Err(CmError::NormNotPrime { .. })
        ));
    }

    #[test]
    fn closed_forms_match_simulation() {
        let c = ctx();
        for p in [3i64, 5, 7] {
            let pb = big(p);
            let a1 = GaloisActor::new(&c, &c.x1(p), &pb).unwrap();
            let a2 = GaloisActor::new(&c, &c.x2(p), &pb).unwrap();
            for v in [
                [1, 0, 0, 0],
                [1, 2, 0, 1],
                [0, 1, 1, 2],
                [2, 2, 1, 0],
                [1, 1, 1, 1],
                [p - 1, 2, 1, p - 2],
            ] {
                let chi = Characteristic::from_i64(p, &v[..2], &v[2..]).unwrap();
                let r1 = a1.act(&chi).unwrap();
                let r2 = a2.act(&chi).unwrap();
                assert_eq!(r1.chi_out, chi.canonical());
                assert_eq!(r1.multiplier, closed_form_phase(Reciprocal::X1, &pb, v));
                assert_eq!(r2.multiplier, closed_form_phase(Reciprocal::X2, &pb, v));
            }
        }
    }

    #[test]
    fn belong_examples() {
        let c = ctx();
        let coords = |v: [i64; 5]| v.map(BigInt::from);
        for p in [3i64, 7, 11, 13] {
            let r = belong_criterion(&c, &coords([1, 2, 2, 0, 0]), &big(p)).unwrap();
            assert_eq!(
                (r.a.as_str(), r.b.as_str(), r.c.as_str(), r.d.as_str()),
                ("-1", "0", "0", "-2")
            );
            assert_eq!(r.value, "-6");
            assert_eq!(r.derived_value, "0");
        }
        let one = belong_criterion(&c, &coords([1, 0, 0, 0, 0]), &big(3)).unwrap();
        assert_eq!((one.a.as_str(), one.value.as_str()), ("1", "0"));
        let r = belong_criterion(&c, &coords([1, 2, 0, 0, 0]), &big(7)).unwrap();
        assert_eq!(
            (r.a.as_str(), r.b.as_str(), r.c.as_str(), r.d.as_str()),
            ("-1", "-2", "2", "0")
        );
        assert_eq!(r.value, "0");
        assert!(matches!(
            belong_criterion(&c, &coords([1, 2, 2, 0, 0]), &big(5)),
            Err(CmError::NormNotPrime { .. })
        ));
        assert!(matches!(
            belong_criterion(&c, &coords([1, 0, 0, 0, 0]), &big(9)),
            Err(CmError::NotOddPrime(_))
        ));
    }

    #[test]
    fn unit_ideals_act_trivially() {
        // x = zeta^a (1 + zeta)^k generates the unit ideal, so its Artin
        // symbol is the identity on Phi_chi(Z0)
        let c = ctx();
        let s = EvalSettings::default();
        let p = big(3);
        let mut tested = 0;
        for a in 0..5 {
            for k in -3..4 {
                let u = c.field().zeta_pow(a)
                    * (c.field().one() + c.field().zeta_pow(1)).pow(k).unwrap();
                let actor = GaloisActor::new(&c, &u, &p).unwrap();
                if !actor.in_gn {
                    continue;
                }
                tested += 1;
                for v in [[1, 0, 0, 0], [1, 2, 0, 1], [0, 1, 1, 2], [2, 2, 1, 0]] {
                    let chi = Characteristic::from_i64(3, &v[..2], &v[2..]).unwrap();
                    let res = actor.act(&chi).unwrap();
                    let lhs =
                        res.multiplier.to_complex() * phi_eval(&res.chi_out, c.z0(), &s).unwrap();
                    let rhs = phi_eval(&chi, c.z0(), &s).unwrap();
                    assert!((lhs - rhs).norm() < 1e-10, "{a} {k} {chi}");
                }
            }
        }
        assert!(tested >= 3, "{tested}");
    }

    #[test]
    fn equal_powers_force_the_congruence() {
        let c = ctx();
        let s = EvalSettings::default();
        let p = 3i64;
        let e = 2 * p * p;
        let base = phi_eval(
            &Characteristic::from_i64(p, &[1, 0], &[0, 0]).unwrap(),
            c.z0(),
            &s,
        )
        .unwrap()
        .powi(e as i32);
        let mut hits = 0;
        for n in 0..81 {
            let v = [n % 3, (n / 3) % 3, (n / 9) % 3, n / 27];
            let chi = Characteristic::from_i64(p, &v[..2], &v[2..]).unwrap();
            if in_sigma_minus(&chi) {
                continue;
            }
            let f = phi_eval(&chi, c.z0(), &s).unwrap();
            if f.norm() < 1e-6 || (f.powi(e as i32) - base).norm() > 1e-8 {
                continue;
            }
            hits += 1;
            let [a, b, cc, d] = v;
            let value = -2 * a * b + 2 * a * cc + a * d - 2 * b * cc - 2 * cc * d - 2 * d * d;
            assert_eq!(value.rem_euclid(p), 0, "{chi}");
        }
        assert!(hits >= 1);
    }

    #[test]
    fn reality_at_z0() {
        let c = ctx();
        let s = EvalSettings::default();
        for p in [3i64, 5] {
            for r1 in 0..p {
                for r2 in 0..p {
                    let chi = Characteristic::from_i64(p, &[r1, r2], &[r1 - r2, -r1]).unwrap();
                    if in_sigma_minus(&chi) {
                        continue;
                    }
                    let rs = chi
                        .r()
                        .iter()
                        .zip(chi.s())
                        .fold(Rational::zero(), |acc, (x, y)| acc + x * y);
                    let ph = RootOfUnity::new(-rs / Rational::from_integer(big(2))).to_complex();
                    let v = ph * phi_eval(&chi, c.z0(), &s).unwrap();
                    assert!(v.im.abs() < 1e-8, "{chi}: {v}");
                }
            }
        }
    }

    #[test]
    fn example_is_not_fixed() {
        let c = ctx();
        let x = c.from_coords(&[1, 2, 2]);
        for p in [7i64, 11, 13] {
            assert!(power_deviation(&c, &x, &big(p)).unwrap() > 1e-3);
        }
        // x = 1 mod 2p^2 acts trivially
        assert!(power_deviation(&c, &c.from_coords(&[19, 18]), &big(3)).unwrap() < 1e-8);
    }

    fn coords_strategy() -> impl Strategy<Value = [i64; 5]> {
        proptest::array::uniform5(-4i64..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn h_is_a_ring_homomorphism(x in coords_strategy(), y in coords_strategy()) {
            let c = ctx();
            let (x, y) = (c.from_coords(&x), c.from_coords(&y));
            let hxy = c.h_map(&(&x * &y)).unwrap();
            prop_assert_eq!(hxy, c.h_map(&x).unwrap().mul(&c.h_map(&y).unwrap()).unwrap());
            prop_assert_eq!(c.h_map(&(&x + &y)).unwrap(), c.h_map(&x).unwrap().add(&c.h_map(&y).unwrap()).unwrap());
            prop_assert!(c.h_map(&x).unwrap().is_integral());
        }

        #[test]
        fn forms_are_the_first_row(v in coords_strategy()) {
            let c = ctx();
            let coeffs: Vec<Rational> = v.iter().map(|&a| rat(a, 1)).collect();
            let x = c.field().from_power_coeffs(&coeffs);
            let h = c.h_map(&c.reflex_norm(&x).unwrap()).unwrap();
            let row: Vec<BigInt> = (0..4).map(|k| h.get(0, k).to_integer()).collect();
            prop_assert_eq!(row, first_row_forms(&v.map(BigInt::from)).to_vec());
        }

        #[test]
        fn criterion_forms_on_first_rows(v in coords_strategy()) {
            let [a, b, c, d] = first_row_forms(&v.map(BigInt::from));
            let common = -(BigInt::from(2) * &a * &b) + BigInt::from(2) * &a * &c - BigInt::from(2) * &b * &c
                - BigInt::from(2) * &c * &d - BigInt::from(2) * &d * &d;
            prop_assert!((&common + BigInt::from(4) * &a * &d).is_zero());
            prop_assert_eq!(&common + &a * &d, BigInt::from(-3) * &a * &d);
        }

        #[test]
        fn multiplier_of_h_is_the_norm(v in coords_strategy()) {
            let c = ctx();
            let x = c.field().from_power_coeffs(&v.iter().map(|&a| rat(a, 1)).collect::<Vec<_>>());
            prop_assume!(!x.is_zero());
            let h = to_int_matrix(&c.h_map(&c.reflex_norm(&x).unwrap()).unwrap()).unwrap();
            let j = crate::symplectic::j_matrix(2);
            let norm = x.norm_to_q().to_integer();
            prop_assert_eq!(h.transpose().mul(&j).mul(&h), j.scale(&norm));
        }

        #[test]
        fn one_plus_two_y_is_in_gn(v in proptest::array::uniform4(-3i64..4), p in prop::sample::select(vec![3i64, 5, 7])) {
            let c = ctx();
            let x = c.from_coords(&[1 + 2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]]);
            match GaloisActor::new(&c, &x, &big(p)) {
                Ok(actor) => prop_assert!(actor.in_gn),
                Err(CmError::NormNotPrime { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn nu_congruences() {
        let c = ctx();
        for p in [3i64, 5, 7] {
            let m = big(2 * p * p);
            let h2 = IntMatrix::from_i64(&[
                &[1 - 2 * p, -2 * p, -2 * p, 0],
                &[0, 1 - 2 * p, 0, -2 * p],
                &[2 * p, 2 * p, 1, 0],
                &[2 * p, 4 * p, 2 * p, 1],
            ]);
            let h3 = IntMatrix::from_i64(&[
                &[1 + 2 * p, 6 * p, -2 * p, 4 * p],
                &[-4 * p, 1 - 2 * p, 4 * p, -2 * p],
                &[2 * p, -2 * p, 1 - 4 * p, 4 * p],
                &[-2 * p, -4 * p, -6 * p, 1],
            ]);
            for (x, expected) in [(c.x1(p), h2), (c.x2(p), h3)] {
                let actor = GaloisActor::new(&c, &x, &big(p)).unwrap();
                assert!(actor.h_matrix.congruent(&expected, &m));
                assert_eq!(actor.nu, big(1 - 2 * p).mod_floor(&m));
                assert!(actor.in_gn);
            }
        }
    }

    #[test]
    fn x_must_be_integral_and_in_k() {
        let c = ctx();
        let half = c.field().from_rational(rat(1, 2));
        assert!(matches!(
            GaloisActor::new(&c, &half, &big(3)),
            Err(CmError::NotIntegral)
        ));
        assert!(matches!(
            GaloisActor::new(&c, &CycloField::new(8).one(), &big(3)),
            Err(CmError::Order(8))
        ));
        assert!(matches!(
            GaloisActor::new(&c, &c.field().one(), &big(2)),
            Err(CmError::NotOddPrime(_))
        ));
    }
}
