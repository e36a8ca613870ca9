//! Constructors for the algebra catalog: divided power algebras, truncated polynomial
//! rings, Witt algebras realized as derivations, the classical `sl_n`/`gl_n`, the simple
//! graded algebras `S(n;1)^(1)` and `H(2r;1)^(2)`, and the standard torus and maximal
//! solvable subalgebra of `W(n;1)`.

use crate::error::{Error, Result};
use crate::ffla::{FVector, IncrementalBasis, Matrix, PrimeField};
use crate::liecore::{LieAlgebra, Subspace};
use crate::restrict::Torus;

pub const DEFAULT_DIM_CAP: usize = 512;

/// `binom(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(field: PrimeField, mut n: u64, mut k: u64) -> u32 {
    let p = field.p() as u64;
    let mut acc = 1u32;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        // digits are below p, so the small binomial is a unit ratio of factorials
        let num = field.factorial(nd);
        let den = field.mul(field.factorial(kd), field.factorial(nd - kd));
        acc = field.mul(acc, field.mul(num, field.inv(den).expect("digit factorials are units")));
        n /= p;
        k /= p;
    }
    acc
}

/// Exponent tuple `a` with `0 <= a_i < bound_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub exps: Vec<u32>,
}

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// Mixed-radix enumeration of monomials; the first variable is the most significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct MonomialIndexer {
    bounds: Vec<u32>,
    strides: Vec<usize>,
    exps: Vec<MultiIndex>,
}

impl MonomialIndexer {
    fn new(bounds: Vec<u32>) -> Self {
        let m = bounds.len();
        let mut strides = vec![1usize; m];
        for i in (0..m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * bounds[i + 1] as usize;
        }
        let total: usize = bounds.iter().map(|&b| b as usize).product();
        let exps = (0..total)
            .map(|mut idx| {
                let mut e = vec![0u32; m];
                for i in 0..m {
                    e[i] = (idx / strides[i]) as u32;
                    idx %= strides[i];
                }
                MultiIndex { exps: e }
            })
            .collect();
        MonomialIndexer { bounds, strides, exps }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }

    fn index(&self, exps: &[u32]) -> Option<usize> {
        if exps.len() != self.bounds.len() || exps.iter().zip(&self.bounds).any(|(e, b)| e >= b) {
            return None;
        }
        Some(exps.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum())
    }
}

/// A commutative carrier algebra with generators `x_1..x_m` and partial derivatives,
/// on which Witt-type algebras act by derivations.
pub trait Carrier {
    fn field(&self) -> PrimeField;
    fn num_vars(&self) -> usize;
    fn dim(&self) -> usize;
    fn exponents(&self, idx: usize) -> &MultiIndex;
    fn index_of(&self, exps: &[u32]) -> Option<usize>;
    /// Product of two basis monomials.
    fn mul_basis(&self, a: usize, b: usize) -> Option<(usize, u32)>;
    /// `∂_k` of a basis monomial.
    fn partial_basis(&self, k: usize, a: usize) -> Option<(usize, u32)>;
    fn monomial_label(&self, idx: usize) -> String;

    fn one(&self) -> FVector {
        FVector::unit(self.dim(), 0)
    }

    fn generator(&self, k: usize) -> FVector {
        let mut e = vec![0u32; self.num_vars()];
        e[k] = 1;
        FVector::unit(self.dim(), self.index_of(&e).expect("generator exists"))
    }

    fn mul(&self, a: &FVector, b: &FVector) -> FVector {
        let f = self.field();
        let mut out = FVector::zeros(self.dim());
        let bs: Vec<(usize, u32)> = b.support().collect();
        for (i, x) in a.support() {
            for &(j, y) in &bs {
                if let Some((k, c)) = self.mul_basis(i, j) {
                    let add = f.mul(c, f.mul(x, y));
                    out.set(k, f.add(out[k], add));
                }
            }
        }
        out
    }

    fn partial(&self, k: usize, g: &FVector) -> FVector {
        let f = self.field();
        let mut out = FVector::zeros(self.dim());
        for (i, x) in g.support() {
            if let Some((j, c)) = self.partial_basis(k, i) {
                out.set(j, f.add(out[j], f.mul(c, x)));
            }
        }
        out
    }

    fn pow(&self, g: &FVector, e: u32) -> FVector {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, g);
        }
        acc
    }
}

fn var_name(k: usize) -> String {
    format!("x{}", k + 1)
}

/// The divided power algebra `A(m; n̄)` with basis `x^(a)`, `0 <= a_i < p^{n_i}` and
/// `x^(a) x^(b) = Π binom(a_i+b_i, a_i) x^(a+b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedPowerAlgebra {
    field: PrimeField,
    heights: Vec<u32>,
    indexer: MonomialIndexer,
}

impl DividedPowerAlgebra {
    pub fn new(field: PrimeField, heights: &[u32]) -> Result<Self> {
        if heights.is_empty() || heights.contains(&0) {
            return Err(Error::InvalidParameters("heights must be positive and nonempty".into()));
        }
        let mut bounds = Vec::with_capacity(heights.len());
        for &n in heights {
            let b = (field.p() as u64).checked_pow(n).filter(|&b| b <= u32::MAX as u64);
            bounds.push(b.ok_or_else(|| Error::InvalidParameters("height too large".into()))? as u32);
        }
        let total: u64 = bounds.iter().map(|&b| b as u64).product();
        if total > (1 << 24) {
            return Err(Error::DimensionCap {
                dim: total as usize,
                cap: 1 << 24,
            });
        }
        Ok(DividedPowerAlgebra {
            field,
            heights: heights.to_vec(),
            indexer: MonomialIndexer::new(bounds),
        })
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn bounds(&self) -> &[u32] {
        &self.indexer.bounds
    }

    /// The basis element `x^(a)`.
    pub fn monomial(&self, exps: &[u32]) -> Option<FVector> {
        self.index_of(exps).map(|i| FVector::unit(self.dim(), i))
    }
}

impl Carrier for DividedPowerAlgebra {
    fn field(&self) -> PrimeField {
        self.field
    }
    fn num_vars(&self) -> usize {
        self.heights.len()
    }
    fn dim(&self) -> usize {
        self.indexer.len()
    }
    fn exponents(&self, idx: usize) -> &MultiIndex {
        &self.indexer.exps[idx]
    }
    fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.indexer.index(exps)
    }
    fn mul_basis(&self, a: usize, b: usize) -> Option<(usize, u32)> {
        let ea = &self.indexer.exps[a].exps;
        let eb = &self.indexer.exps[b].exps;
        let mut sum = Vec::with_capacity(ea.len());
        let mut coeff = 1u32;
        for (i, (&x, &y)) in ea.iter().zip(eb).enumerate() {
            if x + y >= self.indexer.bounds[i] {
                return None;
            }
            coeff = self.field.mul(coeff, binomial_mod_p(self.field, (x + y) as u64, x as u64));
            sum.push(x + y);
        }
        if coeff == 0 {
            return None;
        }
        Some((self.indexer.index(&sum).expect("in range"), coeff))
    }
    fn partial_basis(&self, k: usize, a: usize) -> Option<(usize, u32)> {
        let mut e = self.indexer.exps[a].exps.clone();
        if e[k] == 0 {
            return None;
        }
        e[k] -= 1;
        Some((self.indexer.index(&e).expect("in range"), 1))
    }
    fn monomial_label(&self, idx: usize) -> String {
        let parts: Vec<String> = self.indexer.exps[idx]
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| format!("{}^({})", var_name(k), e))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// The truncated polynomial ring `B_n = F_p[x_1..x_n]/(x_i^p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPolyRing {
    field: PrimeField,
    indexer: MonomialIndexer,
}

impl TruncatedPolyRing {
    pub fn new(field: PrimeField, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("need at least one variable".into()));
        }
        let total = (field.p() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > (1 << 24) {
            return Err(Error::DimensionCap {
                dim: total as usize,
                cap: 1 << 24,
            });
        }
        Ok(TruncatedPolyRing {
            field,
            indexer: MonomialIndexer::new(vec![field.p(); n]),
        })
    }

    pub fn monomial(&self, exps: &[u32]) -> Option<FVector> {
        self.index_of(exps).map(|i| FVector::unit(self.dim(), i))
    }

    /// Constant term of an element.
    pub fn constant_term(&self, g: &FVector) -> u32 {
        g[0]
    }

    /// `1 + x_k`.
    pub fn one_plus_generator(&self, k: usize) -> FVector {
        let f = self.field;
        f.add_vectors(&self.one(), &self.generator(k))
    }
}

impl Carrier for TruncatedPolyRing {
    fn field(&self) -> PrimeField {
        self.field
    }
    fn num_vars(&self) -> usize {
        self.indexer.bounds.len()
    }
    fn dim(&self) -> usize {
        self.indexer.len()
    }
    fn exponents(&self, idx: usize) -> &MultiIndex {
        &self.indexer.exps[idx]
    }
    fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.indexer.index(exps)
    }
    fn mul_basis(&self, a: usize, b: usize) -> Option<(usize, u32)> {
        let ea = &self.indexer.exps[a].exps;
        let eb = &self.indexer.exps[b].exps;
        let p = self.field.p();
        let mut sum = Vec::with_capacity(ea.len());
        for (&x, &y) in ea.iter().zip(eb) {
            if x + y >= p {
                return None;
            }
            sum.push(x + y);
        }
        Some((self.indexer.index(&sum).expect("in range"), 1))
    }
    fn partial_basis(&self, k: usize, a: usize) -> Option<(usize, u32)> {
        let mut e = self.indexer.exps[a].exps.clone();
        if e[k] == 0 {
            return None;
        }
        let c = e[k];
        e[k] -= 1;
        Some((self.indexer.index(&e).expect("in range"), c))
    }
    fn monomial_label(&self, idx: usize) -> String {
        let parts: Vec<String> = self.indexer.exps[idx]
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| if e == 1 { var_name(k) } else { format!("{}^{}", var_name(k), e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A special derivation `Σ_k f_k ∂_k` of a carrier; `coeffs[k] = f_k = D(x_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub coeffs: Vec<FVector>,
}

impl Derivation {
    /// Reads a derivation from Witt-algebra coordinates (`index = k * dim(carrier) + monomial`).
    pub fn from_lie_vector<C: Carrier>(carrier: &C, v: &FVector) -> Self {
        let d = carrier.dim();
        assert_eq!(v.len(), d * carrier.num_vars());
        let coeffs = (0..carrier.num_vars())
            .map(|k| FVector::from_coords(carrier.field(), v.as_slice()[k * d..(k + 1) * d].to_vec()))
            .collect();
        Derivation { coeffs }
    }

    pub fn to_lie_vector(&self) -> FVector {
        let mut out = Vec::new();
        for c in &self.coeffs {
            out.extend_from_slice(c.as_slice());
        }
        FVector::from_coords_unreduced(out)
    }

    pub fn apply<C: Carrier>(&self, carrier: &C, g: &FVector) -> FVector {
        let f = carrier.field();
        let mut out = FVector::zeros(carrier.dim());
        for (k, coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let dk = carrier.partial(k, g);
            if dk.is_zero() {
                continue;
            }
            f.axpy(&mut out, 1, &carrier.mul(coeff, &dk));
        }
        out
    }

    /// `[D, E]`, decoded from its values on the generators.
    pub fn commutator<C: Carrier>(&self, other: &Derivation, carrier: &C) -> Derivation {
        let f = carrier.field();
        let coeffs = (0..carrier.num_vars())
            .map(|k| f.sub_vectors(&self.apply(carrier, &other.coeffs[k]), &other.apply(carrier, &self.coeffs[k])))
            .collect();
        Derivation { coeffs }
    }

    /// `D^p` as an operator, decoded from `D^p(x_k)`. Only a derivation when the carrier is
    /// `A(m;1)` or `B_m`.
    pub fn p_fold_composition<C: Carrier>(&self, carrier: &C) -> Derivation {
        let p = carrier.field().p();
        let coeffs = (0..carrier.num_vars())
            .map(|k| {
                let mut g = carrier.generator(k);
                for _ in 0..p {
                    g = self.apply(carrier, &g);
                }
                g
            })
            .collect();
        Derivation { coeffs }
    }
}

impl FVector {
    pub(crate) fn from_coords_unreduced(coords: Vec<u32>) -> Self {
        // callers guarantee canonical entries
        let mut v = FVector::zeros(coords.len());
        for (i, c) in coords.into_iter().enumerate() {
            v.set(i, c);
        }
        v
    }
}

fn derivation_labels<C: Carrier>(carrier: &C, partial_name: &str) -> Vec<String> {
    let mut labels = Vec::with_capacity(carrier.dim() * carrier.num_vars());
    for k in 0..carrier.num_vars() {
        for idx in 0..carrier.dim() {
            let mono = carrier.monomial_label(idx);
            let d = format!("{partial_name}{}", k + 1);
            labels.push(if mono == "1" { d } else { format!("{mono}*{d}") });
        }
    }
    labels
}

fn derivation_algebra<C: Carrier>(carrier: &C, partial_name: &str, restricted: bool) -> LieAlgebra {
    let labels = derivation_labels(carrier, partial_name);
    let n = labels.len();
    let basis: Vec<Derivation> = (0..n).map(|i| Derivation::from_lie_vector(carrier, &FVector::unit(n, i))).collect();
    let alg = LieAlgebra::from_bracket_fn(carrier.field(), labels, |i, j| {
        basis[i].commutator(&basis[j], carrier).to_lie_vector()
    });
    if restricted {
        let pmap = basis.iter().map(|d| d.p_fold_composition(carrier).to_lie_vector()).collect();
        alg.with_pmap(pmap)
    } else {
        alg
    }
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(Error::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}

/// The generalized Witt algebra `W(m; n̄)` and its divided power carrier.
#[derive(Clone, Debug)]
pub struct GeneralizedWitt {
    pub algebra: LieAlgebra,
    pub carrier: DividedPowerAlgebra,
}

impl GeneralizedWitt {
    pub fn index(&self, var: usize, exps: &[u32]) -> Option<usize> {
        self.carrier.index_of(exps).map(|i| var * self.carrier.dim() + i)
    }

    /// The basis vector `x^(a) ∂_var`.
    pub fn element(&self, var: usize, exps: &[u32]) -> FVector {
        FVector::unit(self.algebra.dim(), self.index(var, exps).expect("valid monomial"))
    }

    pub fn derivation(&self, v: &FVector) -> Derivation {
        Derivation::from_lie_vector(&self.carrier, v)
    }
}

/// `W(m; n̄)`: the special derivations `Σ f_k ∂_k` of `A(m; n̄)`. A p-map (p-fold
/// composition) is attached exactly when every `n_i = 1`.
pub fn build_witt(field: PrimeField, heights: &[u32]) -> Result<GeneralizedWitt> {
    build_witt_with_cap(field, heights, DEFAULT_DIM_CAP)
}

pub fn build_witt_with_cap(field: PrimeField, heights: &[u32], cap: usize) -> Result<GeneralizedWitt> {
    let carrier = DividedPowerAlgebra::new(field, heights)?;
    check_cap(carrier.dim() * heights.len(), cap)?;
    let restricted = heights.iter().all(|&n| n == 1);
    let algebra = derivation_algebra(&carrier, "d", restricted);
    Ok(GeneralizedWitt { algebra, carrier })
}

/// The Jacobson–Witt algebra `W(n;1) = Der(B_n)` with basis `x^α D_i`, together with `B_n`.
#[derive(Clone, Debug)]
pub struct JacobsonWitt {
    pub algebra: LieAlgebra,
    pub ring: TruncatedPolyRing,
}

impl JacobsonWitt {
    pub fn n(&self) -> usize {
        self.ring.num_vars()
    }

    pub fn index(&self, var: usize, exps: &[u32]) -> Option<usize> {
        self.ring.index_of(exps).map(|i| var * self.ring.dim() + i)
    }

    /// The basis vector `x^α D_var`.
    pub fn element(&self, var: usize, exps: &[u32]) -> FVector {
        FVector::unit(self.algebra.dim(), self.index(var, exps).expect("valid monomial"))
    }

    /// `g · D_var` for `g ∈ B_n`.
    pub fn times_partial(&self, g: &FVector, var: usize) -> FVector {
        let mut coeffs = vec![FVector::zeros(self.ring.dim()); self.n()];
        coeffs[var] = g.clone();
        Derivation { coeffs }.to_lie_vector()
    }

    pub fn derivation(&self, v: &FVector) -> Derivation {
        Derivation::from_lie_vector(&self.ring, v)
    }

    pub fn vector(&self, d: &Derivation) -> FVector {
        d.to_lie_vector()
    }

    /// `u^[p]` computed as the p-fold composition of the derivation `u` on `B_n`.
    pub fn composition_p_power(&self, u: &FVector) -> FVector {
        self.derivation(u).p_fold_composition(&self.ring).to_lie_vector()
    }

    pub fn grading(&self) -> GradedTag {
        grading_of(&self.ring)
    }
}

pub fn build_jacobson_witt(field: PrimeField, n: usize) -> Result<JacobsonWitt> {
    build_jacobson_witt_with_cap(field, n, DEFAULT_DIM_CAP)
}

pub fn build_jacobson_witt_with_cap(field: PrimeField, n: usize, cap: usize) -> Result<JacobsonWitt> {
    let ring = TruncatedPolyRing::new(field, n)?;
    check_cap(ring.dim() * n, cap)?;
    let algebra = derivation_algebra(&ring, "D", true);
    Ok(JacobsonWitt { algebra, ring })
}

/// Degree of each Witt basis element `x^a ∂_i`: `|a| - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTag {
    pub degrees: Vec<i32>,
}

fn grading_of<C: Carrier>(carrier: &C) -> GradedTag {
    let mut degrees = Vec::with_capacity(carrier.dim() * carrier.num_vars());
    for _ in 0..carrier.num_vars() {
        for idx in 0..carrier.dim() {
            degrees.push(carrier.exponents(idx).degree() as i32 - 1);
        }
    }
    GradedTag { degrees }
}

impl GeneralizedWitt {
    pub fn grading(&self) -> GradedTag {
        grading_of(&self.carrier)
    }
}

impl GradedTag {
    pub fn range(&self) -> (i32, i32) {
        let lo = self.degrees.iter().copied().min().unwrap_or(0);
        let hi = self.degrees.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    /// `[g_i, g_j] ⊆ g_{i+j}` on every basis pair.
    pub fn is_compatible(&self, algebra: &LieAlgebra) -> bool {
        let d = algebra.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                let target = self.degrees[i] + self.degrees[j];
                algebra.structure(i, j).iter().all(|&(k, _)| self.degrees[k] == target)
            })
        })
    }

    /// Span of the basis elements of degree `deg`.
    pub fn component(&self, field: PrimeField, deg: i32) -> Subspace {
        let d = self.degrees.len();
        let vecs: Vec<FVector> = (0..d).filter(|&i| self.degrees[i] == deg).map(|i| FVector::unit(d, i)).collect();
        Subspace::span(field, d, &vecs)
    }
}

/// Diagonal change of basis `x^(a) ∂_i ↦ (1/a!) x^a D_i` from the divided power
/// realization of `W(m;1)` to the truncated one.
pub fn witt_rescaling(field: PrimeField, m: usize) -> Result<Matrix> {
    let ring = TruncatedPolyRing::new(field, m)?;
    let mut diag = Vec::with_capacity(ring.dim() * m);
    for _ in 0..m {
        for idx in 0..ring.dim() {
            let fact = ring
                .exponents(idx)
                .exps
                .iter()
                .fold(1u32, |acc, &e| field.mul(acc, field.factorial(e as u64)));
            diag.push(field.inv(fact).expect("a_i < p"));
        }
    }
    Ok(Matrix::diagonal(field, &diag))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    Sl,
    Gl,
}

fn matrix_unit(field: PrimeField, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    m.set(i, j, 1);
    m
}

/// `sl_n` (basis: `E_ij` for `i<j`, then `H_k = E_kk - E_{k+1,k+1}`, then `E_ij` for
/// `i>j`) or `gl_n` (all `E_ij`, row-major). The p-map is the matrix p-th power.
///
/// `sl_n` with `p | n` has a center; it is only built when `allow_center` is set.
pub fn build_classical(field: PrimeField, kind: ClassicalKind, n: usize, allow_center: bool) -> Result<LieAlgebra> {
    if n < 1 || (kind == ClassicalKind::Sl && n < 2) {
        return Err(Error::InvalidParameters(format!("matrix size {n} too small")));
    }
    if kind == ClassicalKind::Sl && (n as u32).is_multiple_of(field.p()) && !allow_center {
        return Err(Error::InvalidParameters(format!(
            "sl_{n} has a nontrivial center in characteristic {}; pass allow_center",
            field.p()
        )));
    }
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    match kind {
        ClassicalKind::Gl => {
            for i in 0..n {
                for j in 0..n {
                    mats.push(matrix_unit(field, n, i, j));
                    labels.push(format!("E{}{}", i + 1, j + 1));
                }
            }
        }
        ClassicalKind::Sl => {
            for i in 0..n {
                for j in i + 1..n {
                    mats.push(matrix_unit(field, n, i, j));
                    labels.push(format!("E{}{}", i + 1, j + 1));
                }
            }
            for k in 0..n - 1 {
                mats.push(matrix_unit(field, n, k, k).sub(&matrix_unit(field, n, k + 1, k + 1)));
                labels.push(format!("H{}", k + 1));
            }
            for i in 0..n {
                for j in 0..i {
                    mats.push(matrix_unit(field, n, i, j));
                    labels.push(format!("E{}{}", i + 1, j + 1));
                }
            }
        }
    }
    let decode = |m: &Matrix| -> FVector {
        let mut v = FVector::zeros(mats.len());
        match kind {
            ClassicalKind::Gl => {
                for i in 0..n {
                    for j in 0..n {
                        v.set(i * n + j, m.get(i, j));
                    }
                }
            }
            ClassicalKind::Sl => {
                let mut idx = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        v.set(idx, m.get(i, j));
                        idx += 1;
                    }
                }
                let mut running = 0u32;
                for k in 0..n - 1 {
                    running = field.add(running, m.get(k, k));
                    v.set(idx, running);
                    idx += 1;
                }
                for i in 0..n {
                    for j in 0..i {
                        v.set(idx, m.get(i, j));
                        idx += 1;
                    }
                }
            }
        }
        v
    };
    let alg = LieAlgebra::from_bracket_fn(field, labels, |i, j| {
        let c = mats[i].mul(&mats[j]).sub(&mats[j].mul(&mats[i]));
        decode(&c)
    });
    let pmap = mats.iter().map(|m| decode(&m.pow(field.p() as u64))).collect();
    Ok(alg.with_pmap(pmap))
}

/// Picks an independent subset of `candidates` (in order) and promotes its span to a
/// standalone restricted algebra.
fn promote_span(
    ambient: &LieAlgebra,
    candidates: Vec<(String, FVector)>,
    expected_dim: Option<usize>,
) -> Result<LieAlgebra> {
    let mut inc = IncrementalBasis::new(ambient.field(), ambient.dim());
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for (label, v) in candidates {
        if inc.insert(&v) {
            basis.push(v);
            labels.push(label);
        }
    }
    if let Some(d) = expected_dim {
        if basis.len() != d {
            return Err(Error::Construction(format!("spanning set has rank {} (expected {d})", basis.len())));
        }
    }
    ambient.subalgebra(&basis, labels, true)
}

/// `S(n;1)^(1)`, spanned inside `W(n;1)` by `D_ij(f) = D_j(f) D_i - D_i(f) D_j`.
pub fn build_special(field: PrimeField, n: usize) -> Result<LieAlgebra> {
    if n < 3 {
        return Err(Error::InvalidParameters("S(n;1) needs n >= 3".into()));
    }
    let w = build_jacobson_witt(field, n)?;
    let ring = &w.ring;
    let mut cands = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for idx in 0..ring.dim() {
                let f = FVector::unit(ring.dim(), idx);
                let dj = ring.partial(j, &f);
                let di = ring.partial(i, &f);
                let mut coeffs = vec![FVector::zeros(ring.dim()); n];
                coeffs[i] = dj;
                coeffs[j] = field.scale(field.neg(1), &di);
                let v = Derivation { coeffs }.to_lie_vector();
                if !v.is_zero() {
                    cands.push((format!("D{}{}({})", i + 1, j + 1, ring.monomial_label(idx)), v));
                }
            }
        }
    }
    let p = field.p() as usize;
    promote_span(&w.algebra, cands, Some((n - 1) * (p.pow(n as u32) - 1)))
}

/// `H(2r;1)^(2)`, spanned inside `W(2r;1)` by `D_H(f) = Σ_i (D_i(f) D_{i+r} - D_{i+r}(f) D_i)`
/// over monomials `f` other than `1` and the top monomial.
pub fn build_hamiltonian(field: PrimeField, two_r: usize) -> Result<LieAlgebra> {
    if two_r < 2 || !two_r.is_multiple_of(2) {
        return Err(Error::InvalidParameters("H(2r;1) needs an even size >= 2".into()));
    }
    let r = two_r / 2;
    let w = build_jacobson_witt(field, two_r)?;
    let ring = &w.ring;
    let top = ring.dim() - 1;
    let mut cands = Vec::new();
    for idx in 1..top {
        let f = FVector::unit(ring.dim(), idx);
        let mut coeffs = vec![FVector::zeros(ring.dim()); two_r];
        for i in 0..r {
            coeffs[i + r] = field.add_vectors(&coeffs[i + r], &ring.partial(i, &f));
            let neg = field.scale(field.neg(1), &ring.partial(i + r, &f));
            coeffs[i] = field.add_vectors(&coeffs[i], &neg);
        }
        cands.push((format!("DH({})", ring.monomial_label(idx)), Derivation { coeffs }.to_lie_vector()));
    }
    let p = field.p() as usize;
    promote_span(&w.algebra, cands, Some(p.pow(two_r as u32) - 2))
}

/// `t_0 = <(1+x_1)D_1, …, (1+x_n)D_n>`.
pub fn standard_generic_torus(w: &JacobsonWitt) -> Result<Torus> {
    let gens: Vec<FVector> = (0..w.n()).map(|i| w.times_partial(&w.ring.one_plus_generator(i), i)).collect();
    Torus::new(&w.algebra, &gens)
}

/// Orientation of the Borel subalgebra of `g_0 ≅ gl_n` spanned by the `x_i D_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum BorelConvention {
    /// `x_i D_j` with `i <= j`.
    #[default]
    Ascending,
    /// `x_i D_j` with `i >= j`.
    Descending,
}

/// The standard maximal solvable subalgebra
/// `c = g_{-1} + b + Σ_i Σ_{|α(i)|>1} x_1^{α_1}⋯x_i^{α_i} D_i` of `W(n;1)`, `n >= 2`.
pub fn standard_maximal_solvable(w: &JacobsonWitt, borel: BorelConvention) -> Result<Subspace> {
    let n = w.n();
    if n < 2 {
        return Err(Error::InvalidParameters(
            "for n = 1 the displayed span is all of W(1;1), which is simple; no maximal solvable subalgebra is produced"
                .into(),
        ));
    }
    let ring = &w.ring;
    let mut vecs = Vec::new();
    for i in 0..n {
        vecs.push(w.element(i, &vec![0; n]));
    }
    for i in 0..n {
        for j in 0..n {
            let keep = match borel {
                BorelConvention::Ascending => i <= j,
                BorelConvention::Descending => i >= j,
            };
            if keep {
                let mut e = vec![0; n];
                e[i] = 1;
                vecs.push(w.element(j, &e));
            }
        }
    }
    for target in 0..n {
        for idx in 0..ring.dim() {
            let e = &ring.exponents(idx).exps;
            if e[target + 1..].iter().all(|&x| x == 0) && e.iter().sum::<u32>() > 1 {
                vecs.push(w.element(target, e));
            }
        }
    }
    Ok(w.algebra.span(&vecs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn lucas_binomials() {
        let f = f5();
        assert_eq!(binomial_mod_p(f, 2, 1), 2);
        assert_eq!(binomial_mod_p(f, 5, 1), 0);
        assert_eq!(binomial_mod_p(f, 10, 5), 2);
        // brute force against exact binomials
        let mut row = vec![1u64];
        for n in 1..=20u64 {
            let mut next = vec![1u64; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for k in 0..=n {
                assert_eq!(binomial_mod_p(f, n, k) as u64, row[k as usize] % 5, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn divided_powers_lucas_consistency() {
        let f = f5();
        let a = DividedPowerAlgebra::new(f, &[2]).unwrap();
        assert_eq!(a.dim(), 25);
        let x1 = a.monomial(&[1]).unwrap();
        assert_eq!(a.mul(&x1, &x1), f.scale(2, &a.monomial(&[2]).unwrap()));
        let x4 = a.monomial(&[4]).unwrap();
        assert!(a.mul(&x4, &x1).is_zero());
    }

    fn check_carrier_axioms<C: Carrier>(c: &C) {
        let n = c.dim();
        let f = c.field();
        let e = |i| FVector::unit(n, i);
        for i in 0..n {
            assert_eq!(c.mul(&c.one(), &e(i)), e(i));
            for j in 0..n {
                let ab = c.mul(&e(i), &e(j));
                assert_eq!(ab, c.mul(&e(j), &e(i)));
                for k in 0..n {
                    assert_eq!(c.mul(&ab, &e(k)), c.mul(&e(i), &c.mul(&e(j), &e(k))));
                }
            }
        }
        let _ = f;
    }

    #[test]
    fn divided_power_algebras_are_associative_commutative_unital() {
        let f = f5();
        check_carrier_axioms(&DividedPowerAlgebra::new(f, &[2]).unwrap());
        check_carrier_axioms(&DividedPowerAlgebra::new(f, &[1, 1]).unwrap());
    }

    #[test]
    fn truncated_ring_basics() {
        let f = f5();
        let b = TruncatedPolyRing::new(f, 2).unwrap();
        assert_eq!(b.dim(), 25);
        let x = b.generator(0);
        assert!(b.pow(&x, 5).is_zero());
        assert!(!b.pow(&x, 4).is_zero());
        check_carrier_axioms(&TruncatedPolyRing::new(f, 1).unwrap());
    }

    #[test]
    fn witt_dimensions() {
        let f = f5();
        let w11 = build_witt(f, &[1]).unwrap();
        assert_eq!(w11.algebra.dim(), 5);
        assert!(w11.algebra.is_restricted());
        let w12 = build_witt(f, &[2]).unwrap();
        assert_eq!(w12.algebra.dim(), 25);
        assert!(!w12.algebra.is_restricted());
        assert_eq!(build_witt(f, &[1, 1]).unwrap().algebra.dim(), 50);
        assert!(matches!(build_witt_with_cap(f, &[1, 1], 10), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn jacobson_witt_basis_and_pmap() {
        let f = f5();
        let w = build_jacobson_witt(f, 1).unwrap();
        assert_eq!(w.algebra.labels(), &["D1", "x1*D1", "x1^2*D1", "x1^3*D1", "x1^4*D1"]);
        let d = w.element(0, &[0]);
        assert!(w.algebra.pmap().unwrap()[0].is_zero());
        assert!(w.composition_p_power(&d).is_zero());
        let w2 = build_jacobson_witt(f, 2).unwrap();
        assert_eq!(w2.algebra.dim(), 50);
        let x1d1 = w2.element(0, &[1, 0]);
        assert_eq!(w2.composition_p_power(&x1d1), x1d1);
        let i = w2.index(0, &[1, 0]).unwrap();
        assert_eq!(w2.algebra.pmap().unwrap()[i], x1d1);
    }

    #[test]
    fn witt_bracket_examples() {
        let f = f5();
        let w = build_witt(f, &[1]).unwrap();
        let d = w.element(0, &[0]);
        let xd = w.element(0, &[1]);
        assert_eq!(w.algebra.bracket(&d, &xd).unwrap(), d);
        assert!(w.algebra.bracket(&xd, &xd).unwrap().is_zero());
    }

    #[test]
    fn grading_is_compatible() {
        let f = f5();
        for n in 1..=2 {
            let w = build_jacobson_witt(f, n).unwrap();
            let g = w.grading();
            assert!(g.is_compatible(&w.algebra));
            assert_eq!(g.range(), (-1, n as i32 * 4 - 1));
        }
    }

    #[test]
    fn rescaling_is_an_isomorphism() {
        let f = f5();
        for m in 1..=2 {
            let heights = vec![1; m];
            let div = build_witt(f, &heights).unwrap().algebra;
            let tr = build_jacobson_witt(f, m).unwrap().algebra;
            let s = witt_rescaling(f, m).unwrap();
            assert!(s.inverse().is_some());
            let d = div.dim();
            for i in 0..d {
                let si = s.column(i);
                for j in 0..d {
                    let lhs = s.mul_vec(&div.bracket_basis(i, &FVector::unit(d, j)));
                    let rhs = tr.bracket(&si, &s.column(j)).unwrap();
                    assert_eq!(lhs, rhs);
                }
                let lhs = s.mul_vec(&div.pmap().unwrap()[i]);
                assert_eq!(lhs, tr.jacobson_p_power(&si).unwrap());
            }
        }
    }

    #[test]
    fn classical_algebras() {
        let f = f5();
        let sl2 = build_classical(f, ClassicalKind::Sl, 2, false).unwrap();
        assert_eq!(sl2.labels(), &["E12", "H1", "E21"]);
        let (e, h, ff) = (sl2.basis_vector(0), sl2.basis_vector(1), sl2.basis_vector(2));
        assert_eq!(sl2.bracket(&h, &e).unwrap(), f.scale(2, &e));
        assert_eq!(sl2.bracket(&e, &ff).unwrap(), h);
        assert_eq!(sl2.pmap().unwrap()[1], h);
        let gl2 = build_classical(f, ClassicalKind::Gl, 2, false).unwrap();
        assert_eq!(gl2.dim(), 4);
        let identity = f.add_vectors(&gl2.basis_vector(0), &gl2.basis_vector(3));
        assert_eq!(gl2.center(), gl2.span(&[identity.clone()]));
        assert_eq!(gl2.jacobson_p_power(&identity).unwrap(), identity);
        assert!(build_classical(f, ClassicalKind::Sl, 5, false).is_err());
        assert_eq!(build_classical(f, ClassicalKind::Sl, 5, true).unwrap().center().dim(), 1);
    }

    #[test]
    fn hamiltonian_dimension() {
        let f = f5();
        let h = build_hamiltonian(f, 2).unwrap();
        assert_eq!(h.dim(), 23);
        assert!(h.is_restricted());
        assert!(build_hamiltonian(f, 3).is_err());
        assert!(build_special(f, 2).is_err());
    }

    #[test]
    #[ignore = "large: S(3;1)^(1) has dimension 248 inside W(3;1)"]
    fn special_dimension() {
        let f = f5();
        let s = build_special(f, 3).unwrap();
        assert_eq!(s.dim(), 248);
    }

    #[test]
    fn maximal_solvable_dimension_and_n1_rejection() {
        let f = f5();
        let w2 = build_jacobson_witt(f, 2).unwrap();
        let c = standard_maximal_solvable(&w2, BorelConvention::Ascending).unwrap();
        assert_eq!(c.dim(), 30);
        let w1 = build_jacobson_witt(f, 1).unwrap();
        assert!(standard_maximal_solvable(&w1, BorelConvention::Ascending).is_err());
    }

    #[test]
    fn displayed_c_contains_a_simple_witt_copy() {
        let f = f5();
        let w2 = build_jacobson_witt(f, 2).unwrap();
        let c = standard_maximal_solvable(&w2, BorelConvention::Ascending).unwrap();
        assert!(w2.algebra.is_subalgebra(&c));
        let copy: Vec<FVector> = (0..5).map(|a| w2.element(0, &[a, 0])).collect();
        let copy = w2.algebra.span(&copy);
        assert!(copy.is_subspace_of(&c));
        let series = w2.algebra.derived_series(&c).unwrap();
        let last = series.last().unwrap();
        assert!(copy.is_subspace_of(last));
        assert!(!w2.algebra.is_solvable(&c).unwrap());
        for conv in [BorelConvention::Ascending, BorelConvention::Descending] {
            let c = standard_maximal_solvable(&w2, conv).unwrap();
            assert!(!w2.algebra.is_solvable(&c).unwrap_or(false));
        }
    }
}
