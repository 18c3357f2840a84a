//! Primitive generators of abelian extensions `L/K`, realized inside one
//! cyclotomic field `Q(zeta_n)` so that every Galois group is a subgroup of
//! `(Z/n)^*` acting by `zeta -> zeta^t`.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::exact::{
    rat, rel_trace_norm, validate_subgroup, CycloElem, CycloField, ExactError, Rational,
    TraceOrNorm,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrimError {
    #[error("coefficient {0} must be nonzero")]
    ZeroCoefficient(&'static str),
    #[error("coefficient {0} is not in the base field")]
    NotInBase(&'static str),
    #[error("need 2 < |{num}/{den}|")]
    Ratio { num: i64, den: i64 },
    #[error("exponent {0} must be nonzero")]
    ZeroExponent(&'static str),
    #[error("{0} must be an algebraic integer")]
    NotIntegral(&'static str),
    #[error("invalid tower: {0}")]
    Tower(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `K subset K(x) subset L = K(x, y)`, with `K` fixed by `base_h` and `K(x)`
/// fixed by `mid_h`.
#[derive(Debug, Clone)]
pub struct AbelianTower {
    n: u64,
    base_h: Vec<u64>,
    mid_h: Vec<u64>,
    top_h: Vec<u64>,
    x: CycloElem,
    y: CycloElem,
}

fn stabilizer(e: &CycloElem, group: &[u64]) -> Result<Vec<u64>, ExactError> {
    let mut out = Vec::new();
    for &t in group {
        if &e.conjugate(t as i64)? == e {
            out.push(t);
        }
    }
    Ok(out)
}

impl AbelianTower {
    pub fn new(
        n: u64,
        base_h: &[u64],
        mid_h: &[u64],
        x: CycloElem,
        y: CycloElem,
    ) -> Result<Self, PrimError> {
        if x.order() != n || y.order() != n {
            return Err(PrimError::Tower(format!("x, y must lie in Q(zeta_{n})")));
        }
        let base: BTreeSet<u64> = validate_subgroup(n, base_h)?;
        let mid: BTreeSet<u64> = validate_subgroup(n, mid_h)?;
        if !mid.is_subset(&base) {
            return Err(PrimError::Tower("mid_h is not contained in base_h".into()));
        }
        let base_h: Vec<u64> = base.into_iter().collect();
        let mid_h: Vec<u64> = mid.into_iter().collect();
        if stabilizer(&x, &base_h)? != mid_h {
            return Err(PrimError::Tower(
                "mid_h is not the stabilizer of x in base_h".into(),
            ));
        }
        let top_h = stabilizer(&y, &mid_h)?;
        Ok(Self {
            n,
            base_h,
            mid_h,
            top_h,
            x,
            y,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn base_h(&self) -> &[u64] {
        &self.base_h
    }

    pub fn mid_h(&self) -> &[u64] {
        &self.mid_h
    }

    /// Subgroup fixing `L`.
    pub fn top_h(&self) -> &[u64] {
        &self.top_h
    }

    pub fn x(&self) -> &CycloElem {
        &self.x
    }

    pub fn y(&self) -> &CycloElem {
        &self.y
    }

    /// `[L : K(x)]`.
    pub fn ell(&self) -> usize {
        self.mid_h.len() / self.top_h.len()
    }

    /// `[L : K]`.
    pub fn degree(&self) -> usize {
        self.base_h.len() / self.top_h.len()
    }

    /// One exponent from each coset of `top_h` in `mid_h`; these restrict to
    /// the distinct elements of `Gal(L/K(x))`.
    fn coset_reps(&self) -> Vec<u64> {
        let mut covered = BTreeSet::new();
        let mut reps = Vec::new();
        for &t in &self.mid_h {
            if covered.contains(&t) {
                continue;
            }
            reps.push(t);
            for &h in &self.top_h {
                covered.insert((t * h) % self.n);
            }
        }
        reps
    }

    /// `Tr_{L/K(x)}(e)` for `e` in `L`.
    pub fn trace_down(&self, e: &CycloElem) -> Result<CycloElem, PrimError> {
        self.check_in_l(e)?;
        let mut acc = e.field().zero();
        for t in self.coset_reps() {
            acc = acc.checked_add(&e.conjugate(t as i64)?)?;
        }
        Ok(acc)
    }

    /// `N_{L/K(x)}(e)` for `e` in `L`.
    pub fn norm_down(&self, e: &CycloElem) -> Result<CycloElem, PrimError> {
        self.check_in_l(e)?;
        let mut acc = e.field().one();
        for t in self.coset_reps() {
            acc = acc.checked_mul(&e.conjugate(t as i64)?)?;
        }
        Ok(acc)
    }

    fn check_in_l(&self, e: &CycloElem) -> Result<(), PrimError> {
        if stabilizer(e, &self.top_h)?.len() != self.top_h.len() {
            return Err(PrimError::Tower("element is not in L".into()));
        }
        Ok(())
    }

    fn in_base(&self, e: &CycloElem) -> Result<bool, PrimError> {
        Ok(stabilizer(e, &self.base_h)?.len() == self.base_h.len())
    }
}

/// `[K(e) : K]`, the orbit size of `e` under `Gal(Q(zeta_n)/K)`.
pub fn degree_over_base(e: &CycloElem, t: &AbelianTower) -> Result<usize, PrimError> {
    Ok(e.orbit_size(&t.base_h)?)
}

/// Whether `K(e) = L`.
pub fn is_primitive(e: &CycloElem, t: &AbelianTower) -> bool {
    if e.order() != t.n || t.check_in_l(e).is_err() {
        return false;
    }
    matches!(degree_over_base(e, t), Ok(d) if d == t.degree())
}

/// `a x + b (l y - Tr_{L/K(x)}(y))`.
pub fn combine_trace(
    t: &AbelianTower,
    a: &CycloElem,
    b: &CycloElem,
) -> Result<CycloElem, PrimError> {
    for (e, name) in [(a, "a"), (b, "b")] {
        if e.is_zero() {
            return Err(PrimError::ZeroCoefficient(name));
        }
        if e.order() != t.n || !t.in_base(e)? {
            return Err(PrimError::NotInBase(name));
        }
    }
    let ell = rat(t.ell() as i64, 1);
    let inner = t.y.scale(&ell).checked_sub(&t.trace_down(&t.y)?)?;
    Ok(a.checked_mul(&t.x)?.checked_add(&b.checked_mul(&inner)?)?)
}

/// Exponents and coefficients for [`combine_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub n: i64,
    pub m: i64,
}

fn check_ratio(num: i64, den: i64) -> Result<(), PrimError> {
    if den == 0 || num.unsigned_abs() <= 2 * den.unsigned_abs() {
        return Err(PrimError::Ratio { num, den });
    }
    Ok(())
}

/// `(a x + b)^n (c y + d)^(-m l) N_{L/K(x)}((c y + d)^m)`.
pub fn combine_norm(t: &AbelianTower, p: NormParams) -> Result<CycloElem, PrimError> {
    check_ratio(p.a, p.b)?;
    check_ratio(p.c, p.d)?;
    if p.n == 0 {
        return Err(PrimError::ZeroExponent("n"));
    }
    if p.m == 0 {
        return Err(PrimError::ZeroExponent("m"));
    }
    if !t.x.is_integral_on_basis() {
        return Err(PrimError::NotIntegral("x"));
    }
    if !t.y.is_integral_on_basis() {
        return Err(PrimError::NotIntegral("y"));
    }
    let f = t.x.field();
    let ax_b = t.x.scale(&rat(p.a, 1)).checked_add(&f.from_int(p.b))?;
    let cy_d = t.y.scale(&rat(p.c, 1)).checked_add(&f.from_int(p.d))?;
    let ell = t.ell() as i64;
    let norm = t.norm_down(&cy_d.pow(p.m)?)?;
    Ok(ax_b
        .pow(p.n)?
        .checked_mul(&cy_d.pow(-p.m * ell)?)?
        .checked_mul(&norm)?)
}

/// Subgroup of `(Z/n)^*` generated by `gens`.
pub fn generated_subgroup(n: u64, gens: &[u64]) -> Vec<u64> {
    let mut group: BTreeSet<u64> = BTreeSet::from([1 % n.max(2)]);
    let mut frontier: Vec<u64> = group.iter().copied().collect();
    while let Some(h) = frontier.pop() {
        for &g in gens {
            let k = (h * g) % n;
            if group.insert(k) {
                frontier.push(k);
            }
        }
    }
    group.into_iter().collect()
}

/// Sum of the conjugates of `e` over `group` (no subgroup validation).
fn orbit_sum(e: &CycloElem, group: &[u64]) -> CycloElem {
    group.iter().fold(e.field().zero(), |acc, &t| {
        acc + e.conjugate(t as i64).expect("unit exponent")
    })
}

fn random_integral<R: Rng + ?Sized>(rng: &mut R, field: &std::sync::Arc<CycloField>) -> CycloElem {
    let c: Vec<i64> = (0..field.degree())
        .map(|_| rng.random_range(-2..=2))
        .collect();
    field.from_int_coeffs(&c)
}

fn random_subgroup_of<R: Rng + ?Sized>(rng: &mut R, n: u64, group: &[u64]) -> Vec<u64> {
    let k = rng.random_range(0..=2);
    let gens: Vec<u64> = (0..k)
        .map(|_| *group.choose(rng).expect("nonempty"))
        .collect();
    generated_subgroup(n, &gens)
}

/// A random tower in `Q(zeta_n)` with integral `x`, `y`: `base_h` and
/// `mid_h` are random subgroups, `x` is a trace to the fixed field of
/// `mid_h` and `y` a trace to the fixed field of a random subgroup of
/// `mid_h`.
pub fn random_tower<R: Rng + ?Sized>(rng: &mut R, n: u64) -> AbelianTower {
    let field = CycloField::new(n);
    let units = field.units();
    loop {
        let base_h = random_subgroup_of(rng, n, &units);
        let mid_h = random_subgroup_of(rng, n, &base_h);
        let top_h = random_subgroup_of(rng, n, &mid_h);
        let x = orbit_sum(&random_integral(rng, &field), &mid_h);
        let y = orbit_sum(&random_integral(rng, &field), &top_h);
        if let Ok(t) = AbelianTower::new(n, &base_h, &mid_h, x, y) {
            return t;
        }
    }
}

/// `Tr_{Q(zeta_25)/Q(zeta_5)}(zeta_25)` and `N_{Q(zeta_25)/Q(zeta_5)}(3 zeta_25 + 1)`.
pub fn zeta25_components() -> Result<(CycloElem, CycloElem), PrimError> {
    let f = CycloField::new(25);
    let sub: Vec<u64> = (0..5).map(|k| 1 + 5 * k).collect();
    let z = f.zeta_pow(1);
    let tr = rel_trace_norm(&z, &sub, TraceOrNorm::Trace)?;
    let nm = rel_trace_norm(&(z.scale(&rat(3, 1)) + f.one()), &sub, TraceOrNorm::Norm)?;
    Ok((tr, nm))
}

/// A coefficient drawn from `{+-1, +-2, 1/5}`.
pub fn sample_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let (a, b) = *[(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 5)]
        .choose(rng)
        .expect("nonempty");
    rat(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::degree_over_rationals;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `Q subset Q(sqrt 2) subset Q(zeta_8)`.
    fn surrogate() -> AbelianTower {
        let f = CycloField::new(8);
        let x = f.zeta_pow(1) + f.zeta_pow(7);
        let y = f.zeta_pow(2);
        AbelianTower::new(8, &[1, 3, 5, 7], &[1, 7], x, y).unwrap()
    }

    #[test]
    fn surrogate_tower() {
        let t = surrogate();
        let f = t.x().field().clone();
        assert_eq!((t.ell(), t.degree()), (2, 4));
        assert!(t.trace_down(t.y()).unwrap().is_zero());
        let e = combine_trace(&t, &f.one(), &f.one()).unwrap();
        assert_eq!(e, t.x() + &t.y().scale(&rat(2, 1)));
        assert!(is_primitive(&e, &t));
        assert_eq!(degree_over_rationals(&e), 4);
        assert!(!is_primitive(t.x(), &t));
        assert!(!is_primitive(&f.from_int(3), &t));
    }

    #[test]
    fn surrogate_norm() {
        let t = surrogate();
        let f = t.x().field().clone();
        let cy_d = t.y().scale(&rat(3, 1)) + f.one();
        assert_eq!(t.norm_down(&cy_d).unwrap(), f.from_int(10));
        let p = NormParams {
            a: 3,
            b: 1,
            c: 3,
            d: 1,
            n: 1,
            m: 1,
        };
        let e = combine_norm(&t, p).unwrap();
        let ax_b = t.x().scale(&rat(3, 1)) + f.one();
        let expected = ax_b.scale(&rat(10, 1)) * cy_d.pow(-2).unwrap();
        assert_eq!(e, expected);
        assert!(is_primitive(&e, &t));
        assert_eq!(degree_over_rationals(&e), 4);
    }

    #[test]
    fn degenerate_towers() {
        let f = CycloField::new(8);
        let x = f.zeta_pow(1) + f.zeta_pow(7);
        let t = AbelianTower::new(8, &[1, 3, 5, 7], &[1, 7], x.clone(), x.clone()).unwrap();
        assert_eq!(t.ell(), 1);
        let a = f.from_int(2);
        assert_eq!(
            combine_trace(&t, &a, &f.one()).unwrap(),
            x.scale(&rat(2, 1))
        );
        let p = NormParams {
            a: 5,
            b: 2,
            c: 3,
            d: 1,
            n: 2,
            m: 1,
        };
        let ax_b = x.scale(&rat(5, 1)) + f.from_int(2);
        assert_eq!(combine_norm(&t, p).unwrap(), ax_b.pow(2).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let t = surrogate();
        let f = t.x().field().clone();
        assert_eq!(
            combine_trace(&t, &f.zero(), &f.one()),
            Err(PrimError::ZeroCoefficient("a"))
        );
        assert_eq!(
            combine_trace(&t, &f.one(), &f.zeta_pow(2)),
            Err(PrimError::NotInBase("b"))
        );
        let p = NormParams {
            a: 2,
            b: 1,
            c: 3,
            d: 1,
            n: 1,
            m: 1,
        };
        assert_eq!(
            combine_norm(&t, p),
            Err(PrimError::Ratio { num: 2, den: 1 })
        );
        let p = NormParams {
            a: 3,
            b: 1,
            c: 3,
            d: 1,
            n: 0,
            m: 1,
        };
        assert_eq!(combine_norm(&t, p), Err(PrimError::ZeroExponent("n")));
        // mid_h must be exactly the stabilizer of x
        assert!(AbelianTower::new(8, &[1, 3, 5, 7], &[1], t.x().clone(), t.y().clone()).is_err());
        assert!(AbelianTower::new(8, &[1, 3], &[1, 7], t.x().clone(), t.y().clone()).is_err());
        assert!(AbelianTower::new(8, &[1, 3, 5], &[1], t.x().clone(), t.y().clone()).is_err());
    }

    #[test]
    fn zeta25_example() {
        let (tr, nm) = zeta25_components().unwrap();
        assert!(tr.is_zero());
        let f = CycloField::new(25);
        assert_eq!(nm, f.zeta_pow(5).scale(&rat(243, 1)) + f.one());
    }

    #[test]
    fn lemma_power_degrees() {
        for n in [5u64, 7, 8, 9, 12, 15] {
            let f = CycloField::new(n);
            let z = f.zeta_pow(1);
            let d = degree_over_rationals(&z);
            for (a, b) in [(3i64, 1i64), (5, 2), (-7, 3)] {
                let base = z.scale(&rat(a, 1)) + f.from_int(b);
                for k in 1..=3 {
                    assert_eq!(
                        degree_over_rationals(&base.pow(k).unwrap()),
                        d,
                        "n={n} a={a} b={b} k={k}"
                    );
                }
            }
        }
    }

    fn conductors() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![8u64, 12, 15, 16, 20, 24])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn trace_combination_is_primitive(n in conductors(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tower(&mut rng, n);
            let f = t.x().field().clone();
            let a = f.from_rational(sample_coefficient(&mut rng));
            let b = f.from_rational(sample_coefficient(&mut rng));
            let e = combine_trace(&t, &a, &b).unwrap();
            prop_assert!(is_primitive(&e, &t));
            prop_assert_eq!(t.trace_down(&e).unwrap(), (&a * t.x()).scale(&rat(t.ell() as i64, 1)));
            if t.base_h().len() == f.units().len() {
                prop_assert_eq!(degree_over_rationals(&e), t.degree());
            }
        }

        #[test]
        fn norm_combination_is_primitive(n in conductors(), seed in any::<u64>(), i in 0usize..3, j in 0usize..3, nn in 1i64..3, m in 1i64..3) {
            let pairs = [(3i64, 1i64), (5, 2), (-7, 3)];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tower(&mut rng, n);
            let p = NormParams { a: pairs[i].0, b: pairs[i].1, c: pairs[j].0, d: pairs[j].1, n: nn, m };
            let e = combine_norm(&t, p).unwrap();
            prop_assert!(is_primitive(&e, &t));
        }
    }
}
