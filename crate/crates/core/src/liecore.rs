//! Structure-constant Lie algebras over `F_p`, optionally carrying a p-map.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffla::{echelon_basis, intersect_subspaces, BasisSolver, FVector, Matrix, PrimeField};

/// Sparse bracket value `[b_i, b_j] = Σ c · b_k`, stored as `(k, c)` pairs with `c != 0`.
pub type SparseVector = Vec<(usize, u32)>;

/// A subspace of `F_p^dim`, stored as a reduced echelon basis so that equality of
/// subspaces is equality of bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: PrimeField,
    ambient_dim: usize,
    basis: Vec<FVector>,
}

impl Subspace {
    pub fn span(field: PrimeField, ambient_dim: usize, vectors: &[FVector]) -> Self {
        Subspace {
            field,
            ambient_dim,
            basis: echelon_basis(field, ambient_dim, vectors),
        }
    }

    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| FVector::unit(ambient_dim, i)).collect();
        Subspace {
            field,
            ambient_dim,
            basis,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &FVector) -> bool {
        let f = self.field;
        let mut r = v.clone();
        for b in &self.basis {
            let (pivot, _) = b.support().next().expect("echelon rows are nonzero");
            let a = r[pivot];
            if a != 0 {
                f.axpy(&mut r, f.neg(a), b);
            }
        }
        r.is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient_dim, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        Subspace {
            field: self.field,
            ambient_dim: self.ambient_dim,
            basis: intersect_subspaces(self.field, self.ambient_dim, &self.basis, &other.basis),
        }
    }

    pub fn solver(&self) -> BasisSolver {
        BasisSolver::new(self.field, self.ambient_dim, &self.basis).expect("echelon basis is independent")
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FVector {
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| self.field.random(rng)).collect();
        self.field.combine(self.ambient_dim, &coeffs, &self.basis)
    }
}

/// One failed axiom found by [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Antisymmetry { i: usize, j: usize },
    Alternating { i: usize },
    Jacobi { i: usize, j: usize, k: usize },
    Restrictedness { i: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub checked_triples: usize,
    pub checked_pmap: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite-dimensional Lie algebra given by structure constants on a basis `b_0..b_{d-1}`.
///
/// When a p-map is present, `pmap[i]` holds the coordinates of `b_i^[p]`; the p-th power
/// of an arbitrary element is then determined by Jacobson's formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: PrimeField,
    dim: usize,
    labels: Vec<String>,
    table: Vec<SparseVector>,
    pmap: Option<Vec<FVector>>,
}

fn to_sparse(v: &FVector) -> SparseVector {
    v.support().collect()
}

impl LieAlgebra {
    /// Builds an algebra from a bracket oracle evaluated on every ordered basis pair `i < j`.
    /// The table is completed by antisymmetry.
    pub fn from_bracket_fn<F>(field: PrimeField, labels: Vec<String>, mut bracket: F) -> Self
    where
        F: FnMut(usize, usize) -> FVector,
    {
        let dim = labels.len();
        let mut table = vec![SparseVector::new(); dim * dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let v = bracket(i, j);
                debug_assert_eq!(v.len(), dim);
                let neg: SparseVector = v.support().map(|(k, c)| (k, field.neg(c))).collect();
                table[i * dim + j] = to_sparse(&v);
                table[j * dim + i] = neg;
            }
        }
        LieAlgebra {
            field,
            dim,
            labels,
            table,
            pmap: None,
        }
    }

    /// Builds an algebra from explicit ordered-pair entries. Pairs not listed bracket to zero;
    /// no antisymmetry completion is performed.
    pub fn from_entries(
        field: PrimeField,
        labels: Vec<String>,
        entries: Vec<(usize, usize, SparseVector)>,
        pmap: Option<Vec<FVector>>,
    ) -> Result<Self> {
        let dim = labels.len();
        let mut table = vec![SparseVector::new(); dim * dim];
        for (i, j, v) in entries {
            if i >= dim || j >= dim || v.iter().any(|&(k, _)| k >= dim) {
                return Err(Error::Format(format!("structure constant index out of range at ({i},{j})")));
            }
            let mut v: SparseVector = v
                .into_iter()
                .map(|(k, c)| (k, c % field.p()))
                .filter(|&(_, c)| c != 0)
                .collect();
            v.sort_unstable();
            table[i * dim + j] = v;
        }
        if let Some(pm) = &pmap {
            if pm.len() != dim || pm.iter().any(|v| v.len() != dim) {
                return Err(Error::Format("p-map has wrong shape".into()));
            }
        }
        Ok(LieAlgebra {
            field,
            dim,
            labels,
            table,
            pmap,
        })
    }

    pub fn with_pmap(mut self, pmap: Vec<FVector>) -> Self {
        assert_eq!(pmap.len(), self.dim);
        self.pmap = Some(pmap);
        self
    }

    pub fn without_pmap(mut self) -> Self {
        self.pmap = None;
        self
    }

    /// Overwrites `[b_i, b_j]` (and `[b_j, b_i]` by antisymmetry). Used to build negative controls.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: &FVector) {
        let f = self.field;
        self.table[i * self.dim + j] = to_sparse(value);
        self.table[j * self.dim + i] = value.support().map(|(k, c)| (k, f.neg(c))).collect();
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn pmap(&self) -> Option<&[FVector]> {
        self.pmap.as_deref()
    }

    pub fn is_restricted(&self) -> bool {
        self.pmap.is_some()
    }

    pub fn basis_vector(&self, i: usize) -> FVector {
        FVector::unit(self.dim, i)
    }

    /// Index of the basis element with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn structure(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.table[i * self.dim + j]
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    pub fn span(&self, vectors: &[FVector]) -> Subspace {
        Subspace::span(self.field, self.dim, vectors)
    }

    fn check_len(&self, v: &FVector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, u: &FVector, v: &FVector) -> Result<FVector> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &FVector, v: &FVector) -> FVector {
        let p = self.field.p() as u64;
        let mut acc = vec![0u64; self.dim];
        let vs: Vec<(usize, u32)> = v.support().collect();
        for (i, a) in u.support() {
            let row = &self.table[i * self.dim..(i + 1) * self.dim];
            for &(j, b) in &vs {
                let ab = (a * b) as u64;
                for &(k, c) in &row[j] {
                    acc[k] += ab * c as u64;
                }
            }
        }
        FVector::from_coords(self.field, acc.into_iter().map(|x| (x % p) as u32).collect())
    }

    /// `[b_i, v]`.
    pub fn bracket_basis(&self, i: usize, v: &FVector) -> FVector {
        let p = self.field.p() as u64;
        let mut acc = vec![0u64; self.dim];
        let row = &self.table[i * self.dim..(i + 1) * self.dim];
        for (j, b) in v.support() {
            for &(k, c) in &row[j] {
                acc[k] += b as u64 * c as u64;
            }
        }
        FVector::from_coords(self.field, acc.into_iter().map(|x| (x % p) as u32).collect())
    }

    /// Matrix of `v ↦ [u, v]`.
    pub fn ad_matrix(&self, u: &FVector) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        let f = self.field;
        for (i, a) in u.support() {
            for j in 0..self.dim {
                for &(k, c) in &self.table[i * self.dim + j] {
                    let cur = m.get(k, j);
                    m.set(k, j, f.add(cur, f.mul(a, c)));
                }
            }
        }
        m
    }

    /// Checks antisymmetry, the Jacobi identity on all basis triples, and (if a p-map is
    /// present) `ad(b_i^[p]) = ad(b_i)^p`.
    pub fn validate(&self) -> ValidationReport {
        let f = self.field;
        let d = self.dim;
        let mut report = ValidationReport::default();
        for i in 0..d {
            if !self.table[i * d + i].is_empty() {
                report.violations.push(Violation::Alternating { i });
            }
            for j in i + 1..d {
                let a = &self.table[i * d + j];
                let b = &self.table[j * d + i];
                let neg: SparseVector = b.iter().map(|&(k, c)| (k, f.neg(c))).collect();
                let mut a_sorted = a.clone();
                let mut neg_sorted = neg;
                a_sorted.sort_unstable();
                neg_sorted.sort_unstable();
                if a_sorted != neg_sorted {
                    report.violations.push(Violation::Antisymmetry { i, j });
                }
            }
        }
        let dense = |s: &SparseVector| {
            let mut v = FVector::zeros(d);
            for &(k, c) in s {
                v.set(k, f.add(v[k], c));
            }
            v
        };
        for i in 0..d {
            for j in i + 1..d {
                let bij = dense(&self.table[i * d + j]);
                for k in j + 1..d {
                    let bjk = dense(&self.table[j * d + k]);
                    let bki = dense(&self.table[k * d + i]);
                    let mut total = self.bracket_basis(i, &bjk);
                    let t2 = self.bracket_basis(j, &bki);
                    let t3 = self.bracket_basis(k, &bij);
                    f.axpy(&mut total, 1, &t2);
                    f.axpy(&mut total, 1, &t3);
                    report.checked_triples += 1;
                    if !total.is_zero() {
                        report.violations.push(Violation::Jacobi { i, j, k });
                    }
                }
            }
        }
        if let Some(pmap) = &self.pmap {
            report.checked_pmap = true;
            let p = f.p() as u64;
            for i in 0..d {
                let lhs = self.ad_matrix(&pmap[i]);
                let rhs = self.ad_matrix(&self.basis_vector(i)).pow(p);
                if lhs != rhs {
                    report.violations.push(Violation::Restrictedness { i });
                }
            }
        }
        report
    }

    /// `u^[p]` via Jacobson's formula from the basis p-powers.
    ///
    /// The element is accumulated one basis term at a time. For a partial sum `x` and the
    /// next term `y`, `(x+y)^[p] = x^[p] + y^[p] + Σ s_i(x,y)` where `i·s_i(x,y)` is the
    /// coefficient of `λ^{i-1}` in `ad(λx+y)^{p-1}(x)`.
    pub fn jacobson_p_power(&self, u: &FVector) -> Result<FVector> {
        self.check_len(u)?;
        let pmap = self.pmap.as_ref().ok_or(Error::NoPMap)?;
        let f = self.field;
        let p = f.p() as usize;
        let d = self.dim;
        let inverses: Vec<u32> = (1..p as u32).map(|i| f.inv(i).expect("nonzero")).collect();

        let mut x = FVector::zeros(d);
        let mut x_p = FVector::zeros(d);
        let mut ad_x = Matrix::zeros(f, d, d);
        for (j, a) in u.support() {
            // y = a b_j, y^[p] = a^p b_j^[p] = a b_j^[p] over F_p.
            let y_p = f.scale(f.pow(a, p as u64), &pmap[j]);
            if !x.is_zero() {
                // poly[deg] is the λ^deg coefficient; degrees above p-2 never contribute.
                let mut poly: Vec<FVector> = vec![x.clone()];
                for _ in 0..p - 1 {
                    let mut next = vec![FVector::zeros(d); (poly.len() + 1).min(p - 1)];
                    for (deg, v) in poly.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let ady = self.bracket_basis(j, v);
                        f.axpy(&mut next[deg], a, &ady);
                        if deg + 1 < p - 1 {
                            let adx = ad_x.mul_vec(v);
                            f.axpy(&mut next[deg + 1], 1, &adx);
                        }
                    }
                    poly = next;
                }
                for (i, coeff) in poly.iter().enumerate() {
                    // coefficient of λ^i equals (i+1) s_{i+1}
                    f.axpy(&mut x_p, inverses[i], coeff);
                }
            }
            f.axpy(&mut x_p, 1, &y_p);
            x.set(j, a);
            let ad_b = self.ad_matrix(&self.basis_vector(j));
            ad_x.add_scaled(a, &ad_b);
        }
        Ok(x_p)
    }

    /// Iterated p-powers `u, u^[p], u^[p^2], …` (first `count` entries).
    pub fn p_power_iterates(&self, u: &FVector, count: usize) -> Result<Vec<FVector>> {
        let mut out = Vec::with_capacity(count);
        let mut cur = u.clone();
        for _ in 0..count {
            let next = self.jacobson_p_power(&cur)?;
            out.push(cur);
            cur = next;
        }
        Ok(out)
    }

    /// Span of all brackets `[a, b]` with `a ∈ s`, `b ∈ t`.
    pub fn bracket_subspaces(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for a in s.basis() {
            for b in t.basis() {
                let c = self.bracket_unchecked(a, b);
                if !c.is_zero() {
                    vecs.push(c);
                }
            }
        }
        self.span(&vecs)
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let b = s.basis();
        for (i, u) in b.iter().enumerate() {
            for v in &b[i + 1..] {
                if !s.contains(&self.bracket_unchecked(u, v)) {
                    return false;
                }
            }
        }
        true
    }

    /// `S ⊇ [S,S] ⊇ …` until the dimension stabilizes. The first entry is `S` itself.
    pub fn derived_series(&self, s: &Subspace) -> Result<Vec<Subspace>> {
        if !self.is_subalgebra(s) {
            return Err(Error::NotBracketClosed);
        }
        let mut series = vec![s.clone()];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_subspaces(last, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        Ok(series)
    }

    pub fn is_solvable(&self, s: &Subspace) -> Result<bool> {
        Ok(self.derived_series(s)?.last().is_some_and(Subspace::is_zero))
    }

    /// `{x : [x, s] = 0 for all s ∈ S}`.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        if s.is_zero() {
            return self.full_space();
        }
        let mut stacked: Option<Matrix> = None;
        for b in s.basis() {
            let ad = self.ad_matrix(b);
            stacked = Some(match stacked {
                None => ad,
                Some(m) => m.vstack(&ad),
            });
        }
        let kernel = stacked.expect("nonempty").kernel_basis();
        self.span(&kernel)
    }

    pub fn center(&self) -> Subspace {
        self.centralizer(&self.full_space())
    }

    /// Smallest bracket-closed subspace containing `gens`.
    pub fn subalgebra_closure(&self, gens: &[FVector]) -> Subspace {
        let mut current = self.span(gens);
        loop {
            let next = current.sum(&self.bracket_subspaces(&current, &current));
            if next.dim() == current.dim() {
                return current;
            }
            current = next;
        }
    }

    /// Promotes a bracket-closed subspace, given by an independent list of vectors, to a
    /// standalone algebra on that basis. With `restricted`, the subspace must also be closed
    /// under the p-map, which is then inherited.
    pub fn subalgebra(&self, basis: &[FVector], labels: Vec<String>, restricted: bool) -> Result<LieAlgebra> {
        assert_eq!(basis.len(), labels.len());
        let solver = BasisSolver::new(self.field, self.dim, basis)?;
        let k = basis.len();
        let mut failed = false;
        let sub = LieAlgebra::from_bracket_fn(self.field, labels, |i, j| {
            let c = self.bracket_unchecked(&basis[i], &basis[j]);
            match solver.coordinates(&c) {
                Some(coords) => FVector::from_coords(self.field, coords),
                None => {
                    failed = true;
                    FVector::zeros(k)
                }
            }
        });
        if failed {
            return Err(Error::NotBracketClosed);
        }
        if !restricted {
            return Ok(sub);
        }
        let mut pmap = Vec::with_capacity(k);
        for b in basis {
            let bp = self.jacobson_p_power(b)?;
            let coords = solver.coordinates(&bp).ok_or(Error::NotPClosed)?;
            pmap.push(FVector::from_coords(self.field, coords));
        }
        Ok(sub.with_pmap(pmap))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FVector {
        self.field.random_vector(self.dim, rng)
    }
}
