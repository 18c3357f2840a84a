//! Integer and residue-ring symplectic matrices, the congruence subgroups
//! `Gamma(N)` and `G_N`, and the action on the Siegel upper half-space.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exact::{mod_inverse, Rational};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const PIVOT_TOL: f64 = 1e-12;
pub const RCOND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymplecticError {
    #[error("matrix is not square of even dimension ({rows}x{cols})")]
    Shape { rows: usize, cols: usize },
    #[error("matrix is not in GSp")]
    NotGsp,
    #[error("{0} is not invertible modulo the working modulus")]
    NotInvertible(BigInt),
    #[error("index ({j}, {k}) out of range for genus {g}")]
    IndexOutOfRange { j: usize, k: usize, g: usize },
    #[error("the diagonal kind needs j != k")]
    DiagonalNeedsDistinct,
    #[error("action needs an element of Sp over the integers")]
    NotIntegralSp,
    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),
    #[error("imaginary part is not positive definite (pivot {0:e})")]
    NotPositiveDefinite(f64),
    #[error("CZ+D is nearly singular (reciprocal condition {0:e})")]
    NearSingular(f64),
    #[error("level must be positive")]
    BadLevel,
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self {
            rows: rows.len(),
            cols: ncols,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Entrywise reduction into `[0, m)`; the identity when `m == 0`.
    pub fn reduce(&self, m: &BigInt) -> Self {
        if m.is_zero() {
            return self.clone();
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mod_floor(m)).collect(),
        }
    }

    pub fn congruent(&self, rhs: &Self, m: &BigInt) -> bool {
        self.rows == rhs.rows
            && self.cols == rhs.cols
            && self.data.iter().zip(&rhs.data).all(|(a, b)| {
                if m.is_zero() {
                    a == b
                } else {
                    (a - b).mod_floor(m).is_zero()
                }
            })
    }

    /// Exact division of every entry by `d`; `None` if some entry is not a multiple.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            let (q, r) = a.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            data.push(q);
        }
        Some(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block `[r0..r0+h, c0..c0+w]`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut b = Self::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    /// The `g x g` blocks `(A, B, C, D)` of a `2g x 2g` matrix.
    pub fn abcd(&self) -> (Self, Self, Self, Self) {
        let g = self.rows / 2;
        (
            self.block(0, 0, g, g),
            self.block(0, g, g, g),
            self.block(g, 0, g, g),
            self.block(g, g, g, g),
        )
    }

    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let g = a.rows;
        let mut m = Self::zeros(2 * g, 2 * g);
        for i in 0..g {
            for j in 0..g {
                m.set(i, j, a.get(i, j).clone());
                m.set(i, g + j, b.get(i, j).clone());
                m.set(g + i, j, c.get(i, j).clone());
                m.set(g + i, g + j, d.get(i, j).clone());
            }
        }
        m
    }

    pub fn apply_rational(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(self.get(i, j).clone()) * &v[j]
                })
            })
            .collect()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self.get(i, j).to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// The standard form `J = [[0, -I], [I, 0]]`.
pub fn j_matrix(g: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, g + i, -BigInt::one());
        j.set(g + i, i, BigInt::one());
    }
    j
}

/// A `2g x 2g` integer matrix, read either over `Z` (`modulus == 0`) or
/// modulo `modulus`. `nu` is filled in once the multiplier has been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SympMatrix {
    g: usize,
    entries: IntMatrix,
    modulus: BigInt,
    nu: Option<BigInt>,
}

impl SympMatrix {
    pub fn new(entries: IntMatrix, modulus: BigInt) -> Result<Self, SymplecticError> {
        if entries.rows != entries.cols || entries.rows % 2 != 0 || entries.rows == 0 {
            return Err(SymplecticError::Shape {
                rows: entries.rows,
                cols: entries.cols,
            });
        }
        let modulus = modulus.abs();
        let entries = entries.reduce(&modulus);
        Ok(Self {
            g: entries.rows / 2,
            entries,
            modulus,
            nu: None,
        })
    }

    pub fn over_z(entries: IntMatrix) -> Result<Self, SymplecticError> {
        Self::new(entries, BigInt::zero())
    }

    pub fn from_i64(rows: &[&[i64]], modulus: i64) -> Result<Self, SymplecticError> {
        Self::new(IntMatrix::from_i64(rows), BigInt::from(modulus))
    }

    pub fn identity(g: usize) -> Self {
        Self::over_z(IntMatrix::identity(2 * g)).expect("identity has even size")
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn nu(&self) -> Option<&BigInt> {
        self.nu.as_ref()
    }

    /// Computes and records `nu`.
    pub fn verified(mut self) -> Result<Self, SymplecticError> {
        self.nu = Some(sympl_multiplier(&self)?);
        Ok(self)
    }

    /// Same entries read modulo `m`.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        Self::new(self.entries.clone(), m.clone()).expect("shape already checked")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let modulus = match (self.modulus.is_zero(), rhs.modulus.is_zero()) {
            (true, true) => BigInt::zero(),
            (true, false) => rhs.modulus.clone(),
            (false, true) => self.modulus.clone(),
            (false, false) => self.modulus.gcd(&rhs.modulus),
        };
        let mut out = Self::new(self.entries.mul(&rhs.entries), modulus).expect("shape");
        if let (Some(a), Some(b)) = (&self.nu, &rhs.nu) {
            let n = a * b;
            out.nu = Some(if out.modulus.is_zero() {
                n
            } else {
                n.mod_floor(&out.modulus)
            });
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.entries.transpose(), self.modulus.clone()).expect("shape");
        t.nu = self.nu.clone();
        t
    }
}

impl fmt::Display for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus.is_zero() {
            write!(f, "{}", self.entries)
        } else {
            write!(f, "{} mod {}", self.entries, self.modulus)
        }
    }
}

/// The unit `nu` with `tM J M = nu J`, over `Z` or modulo the matrix modulus.
pub fn sympl_multiplier(m: &SympMatrix) -> Result<BigInt, SymplecticError> {
    let g = m.g;
    let j = j_matrix(g);
    let p = m.entries.transpose().mul(&j).mul(&m.entries);
    let nu = -p.get(0, g).clone();
    let nu = if m.modulus.is_zero() {
        nu
    } else {
        nu.mod_floor(&m.modulus)
    };
    if !p.congruent(&j.scale(&nu), &m.modulus) {
        return Err(SymplecticError::NotGsp);
    }
    let unit = if m.modulus.is_zero() {
        nu.abs().is_one()
    } else {
        nu.gcd(&m.modulus).is_one()
    };
    if !unit {
        return Err(SymplecticError::NotGsp);
    }
    Ok(nu)
}

/// `iota(a) = diag(I, a^-1 I)`, with `nu(iota(a)) = a^-1`.
pub fn iota(a: &BigInt, g: usize, modulus: &BigInt) -> Result<SympMatrix, SymplecticError> {
    let inv = if modulus.is_zero() {
        if !a.abs().is_one() {
            return Err(SymplecticError::NotInvertible(a.clone()));
        }
        a.clone()
    } else {
        mod_inverse(a, modulus).ok_or_else(|| SymplecticError::NotInvertible(a.clone()))?
    };
    let mut e = IntMatrix::identity(2 * g);
    for i in g..2 * g {
        e.set(i, i, inv.clone());
    }
    SympMatrix::new(e, modulus.clone())?.verified()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    /// `Sp_2g` over the matrix's own ring.
    Sp,
    /// Principal congruence subgroup of level `N` in `Sp_2g(Z)`.
    Gamma,
    /// `GSp_2g(Z/N)` with even diagonals of `tA C` and `tB D`.
    GN,
}

pub fn membership(m: &SympMatrix, which: Group, n: &BigInt) -> bool {
    match which {
        Group::Sp => matches!(sympl_multiplier(m), Ok(nu) if nu.is_one()),
        Group::Gamma => {
            !n.is_zero()
                && matches!(sympl_multiplier(m), Ok(nu) if nu.is_one())
                && m.entries.congruent(&IntMatrix::identity(2 * m.g), n)
        }
        Group::GN => {
            if n.is_zero() {
                return false;
            }
            if sympl_multiplier(&m.reduce_mod(n)).is_err() {
                return false;
            }
            let (a, b, c, d) = m.entries.abcd();
            let ac = a.transpose().mul(&c);
            let bd = b.transpose().mul(&d);
            (0..m.g).all(|i| ac.get(i, i).is_even() && bd.get(i, i).is_even())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaKind {
    Upper,
    Lower,
    Mixed,
    Diagonal,
}

impl GammaKind {
    pub const ALL: [GammaKind; 4] = [Self::Upper, Self::Lower, Self::Mixed, Self::Diagonal];

    pub fn name(self) -> &'static str {
        match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
            Self::Mixed => "mixed",
            Self::Diagonal => "diagonal",
        }
    }
}

/// Generators of `Gamma(N)` indexed by a 1-based pair `(j, k)`.
///
/// With `S = E_jj` for `j == k` and `S = E_jk + E_kj` otherwise:
/// upper is `[[I, NS], [0, I]]`, lower `[[I, 0], [NS, I]]`, mixed
/// `[[I - NS, NS], [-NS, I + NS]]`. Diagonal (only `j != k`) is
/// `[[I + N E_jk, 0], [0, I - N E_kj]]`.
pub fn special_gamma(
    kind: GammaKind,
    j: usize,
    k: usize,
    n: &BigInt,
    g: usize,
) -> Result<SympMatrix, SymplecticError> {
    if j == 0 || k == 0 || j > g || k > g {
        return Err(SymplecticError::IndexOutOfRange { j, k, g });
    }
    if n.is_zero() || n.is_negative() {
        return Err(SymplecticError::BadLevel);
    }
    let (j, k) = (j - 1, k - 1);
    let id = IntMatrix::identity(g);
    let zero = IntMatrix::zeros(g, g);
    let mut s = IntMatrix::zeros(g, g);
    s.set(j, k, n.clone());
    s.set(k, j, n.clone());
    let m = match kind {
        GammaKind::Upper => IntMatrix::from_blocks(&id, &s, &zero, &id),
        GammaKind::Lower => IntMatrix::from_blocks(&id, &zero, &s, &id),
        GammaKind::Mixed => {
            IntMatrix::from_blocks(&id.sub(&s), &s, &s.scale(&-BigInt::one()), &id.add(&s))
        }
        GammaKind::Diagonal => {
            if j == k {
                return Err(SymplecticError::DiagonalNeedsDistinct);
            }
            let mut a = id.clone();
            a.set(j, k, n.clone());
            let mut d = id.clone();
            d.set(k, j, -n.clone());
            IntMatrix::from_blocks(&a, &zero, &zero, &d)
        }
    };
    SympMatrix::over_z(m)?.verified()
}

/// All generators `special_gamma(kind, j, k)` with `j <= k`.
pub fn gamma_generators(n: &BigInt, g: usize) -> Vec<(GammaKind, usize, usize, SympMatrix)> {
    let mut out = Vec::new();
    for j in 1..=g {
        for k in 1..=g {
            for kind in GammaKind::ALL {
                let wanted = match kind {
                    GammaKind::Diagonal => j != k,
                    _ => j <= k,
                };
                if wanted {
                    let m = special_gamma(kind, j, k, n, g).expect("valid indices");
                    out.push((kind, j, k, m));
                }
            }
        }
    }
    out
}

/// Random product of `len` generators of `Gamma(N)` and their inverses.
pub fn random_gamma_word<R: Rng + ?Sized>(
    rng: &mut R,
    n: &BigInt,
    g: usize,
    len: usize,
) -> SympMatrix {
    let gens = gamma_generators(n, g);
    let neg = -n.clone();
    let mut w = SympMatrix::identity(g).verified().expect("identity");
    for _ in 0..len {
        let (kind, j, k, _) = &gens[rng.random_range(0..gens.len())];
        let level = if rng.random_bool(0.5) { n } else { &neg };
        // the inverse of each generator is the same kind at level -N
        let m = special_gamma_signed(*kind, *j, *k, level, g);
        w = w.mul(&m);
    }
    w
}

fn special_gamma_signed(
    kind: GammaKind,
    j: usize,
    k: usize,
    level: &BigInt,
    g: usize,
) -> SympMatrix {
    if level.is_negative() {
        let m = special_gamma(kind, j, k, &-level.clone(), g).expect("valid");
        invert_sp(&m)
    } else {
        special_gamma(kind, j, k, level, g).expect("valid")
    }
}

/// Inverse of an element of `Sp_2g(Z)`: `M^-1 = -J tM J`.
pub fn invert_sp(m: &SympMatrix) -> SympMatrix {
    let j = j_matrix(m.g);
    let inv = j.mul(&m.entries.transpose()).mul(&j).scale(&-BigInt::one());
    SympMatrix::new(inv, m.modulus.clone())
        .expect("shape")
        .verified()
        .expect("inverse of Sp is Sp")
}

/// Generators of `Sp_2g(Z)`: `J`, the level-1 upper translations and the
/// level-1 diagonal kind.
pub fn sp_generators(g: usize) -> Vec<SympMatrix> {
    let one = BigInt::one();
    let mut out = vec![SympMatrix::over_z(j_matrix(g))
        .expect("J")
        .verified()
        .expect("J in Sp")];
    for (kind, _, _, m) in gamma_generators(&one, g) {
        if matches!(kind, GammaKind::Upper | GammaKind::Diagonal) {
            out.push(m);
        }
    }
    out
}

/// Random word of length `len` in `sp_generators(g)` and their inverses.
pub fn random_sp_word<R: Rng + ?Sized>(rng: &mut R, g: usize, len: usize) -> SympMatrix {
    let gens = sp_generators(g);
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

/// A point of the Siegel upper half-space: symmetric `Z` with positive
/// definite imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    z: DMatrix<Complex64>,
}

impl SiegelPoint {
    pub fn new(z: DMatrix<Complex64>) -> Result<Self, SymplecticError> {
        if z.nrows() != z.ncols() || z.nrows() == 0 {
            return Err(SymplecticError::Shape {
                rows: z.nrows(),
                cols: z.ncols(),
            });
        }
        let dev = (&z - z.transpose())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if !(dev < SYMMETRY_TOL) {
            return Err(SymplecticError::NotSymmetric(dev));
        }
        Self::symmetrized(z)
    }

    fn symmetrized(z: DMatrix<Complex64>) -> Result<Self, SymplecticError> {
        let z = (&z + z.transpose()) * Complex64::new(0.5, 0.0);
        let im = z.map(|c| c.im);
        check_positive_definite(&im)?;
        Ok(Self { z })
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self, SymplecticError> {
        let g = rows.len();
        Self::new(DMatrix::from_fn(g, g, |i, j| rows[i][j]))
    }

    /// `i * I_g`.
    pub fn scalar_i(g: usize) -> Self {
        Self {
            z: DMatrix::from_diagonal_element(g, g, Complex64::new(0.0, 1.0)),
        }
    }

    /// A random point with `Re Z` entries in `[-1/2, 1/2]` and `Im Z` having
    /// smallest eigenvalue at least `min_eig`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, g: usize, min_eig: f64) -> Self {
        let x = DMatrix::from_fn(g, g, |_, _| rng.random_range(-0.5..0.5));
        let x = (&x + x.transpose()) * 0.5;
        let l = DMatrix::from_fn(g, g, |_, _| rng.random_range(-0.4..0.4));
        let y = &l * l.transpose() + DMatrix::identity(g, g) * min_eig;
        let z = DMatrix::from_fn(g, g, |i, j| Complex64::new(x[(i, j)], y[(i, j)]));
        Self::new(z).expect("constructed symmetric with positive definite imaginary part")
    }

    pub fn g(&self) -> usize {
        self.z.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.z
    }

    pub fn imag(&self) -> DMatrix<f64> {
        self.z.map(|c| c.im)
    }

    pub fn conj(&self) -> Self {
        Self {
            z: self.z.map(|c| c.conj()),
        }
    }

    /// Smallest eigenvalue of `Im Z`.
    pub fn min_imag_eigenvalue(&self) -> f64 {
        self.imag().symmetric_eigenvalues().min()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.z - &other.z)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Cholesky attempt with an absolute pivot threshold.
fn check_positive_definite(y: &DMatrix<f64>) -> Result<(), SymplecticError> {
    let n = y.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = y[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > PIVOT_TOL) {
            return Err(SymplecticError::NotPositiveDefinite(d));
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = y[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(())
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `M(Z) = (AZ + B)(CZ + D)^-1` for `M` in `Sp_2g(Z)`.
pub fn act_siegel(m: &SympMatrix, z: &SiegelPoint) -> Result<SiegelPoint, SymplecticError> {
    if !m.modulus.is_zero() || !membership(m, Group::Sp, &BigInt::zero()) {
        return Err(SymplecticError::NotIntegralSp);
    }
    if m.g != z.g() {
        return Err(SymplecticError::Shape {
            rows: 2 * m.g,
            cols: 2 * z.g(),
        });
    }
    let (a, b, c, d) = m.entries.abcd();
    let (a, b, c, d) = (
        a.to_complex(),
        b.to_complex(),
        c.to_complex(),
        d.to_complex(),
    );
    let den = &c * &z.z + d;
    let inv = den
        .clone()
        .try_inverse()
        .ok_or(SymplecticError::NearSingular(0.0))?;
    let rcond = 1.0 / (norm1(&den) * norm1(&inv));
    if !(rcond >= RCOND_TOL) {
        return Err(SymplecticError::NearSingular(rcond));
    }
    let w = (&a * &z.z + b) * inv;
    SiegelPoint::symmetrized(w)
}
