//! The embedding of a generalized Witt algebra `W(m; n̄)` into the Jacobson–Witt algebra
//! `W(|n̄|; 1)`: the divided power isomorphism `φ`, the induced Lie map `Φ = ι` and the
//! p-envelope of the image.

use serde::Serialize;

use crate::cartan::{
    build_jacobson_witt_with_cap, build_witt_with_cap, Carrier, DividedPowerAlgebra, GeneralizedWitt, JacobsonWitt,
    TruncatedPolyRing, DEFAULT_DIM_CAP,
};
use crate::error::{Error, Result};
use crate::ffla::{FVector, Matrix, PrimeField};
use crate::restrict::{p_envelope, PEnvelope};

/// Flat numbering of the variables `y_{i,j}`, `0 <= j < n_i`, block `i` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSplit {
    heights: Vec<u32>,
    offsets: Vec<usize>,
}

impl VariableSplit {
    pub fn new(heights: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(heights.len());
        let mut acc = 0usize;
        for &n in heights {
            offsets.push(acc);
            acc += n as usize;
        }
        VariableSplit {
            heights: heights.to_vec(),
            offsets,
        }
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn m(&self) -> usize {
        self.heights.len()
    }

    /// `|n̄|`.
    pub fn total(&self) -> usize {
        self.heights.iter().map(|&n| n as usize).sum()
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        assert!(j < self.heights[i] as usize);
        self.offsets[i] + j
    }

    pub fn split(&self, flat: usize) -> (usize, usize) {
        let i = self.offsets.iter().rposition(|&o| o <= flat).expect("in range");
        (i, flat - self.offsets[i])
    }

    /// `y_{i,j}` with 1-based block index.
    pub fn name(&self, flat: usize) -> String {
        let (i, j) = self.split(flat);
        format!("y{},{}", i + 1, j)
    }
}

/// `φ: A(m; n̄) → B_{|n̄|}` determined by `x^{(p^j ε_i)} ↦ y_{i,j}`, in the truncated
/// monomial realization of the target: `x^(a) ↦ (Π_{i,j} c_{ij}!)^{-1} y^c` where
/// `a_i = Σ_j c_{ij} p^j`.
#[derive(Clone, Debug)]
pub struct DividedPowerIso {
    pub split: VariableSplit,
    pub source: DividedPowerAlgebra,
    pub target: TruncatedPolyRing,
    /// Columns are the images of the source basis.
    pub matrix: Matrix,
}

fn base_p_digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push(a % p);
        a /= p;
    }
    d
}

pub fn build_phi(field: PrimeField, heights: &[u32]) -> Result<DividedPowerIso> {
    let source = DividedPowerAlgebra::new(field, heights)?;
    let split = VariableSplit::new(heights);
    let target = TruncatedPolyRing::new(field, split.total())?;
    let p = field.p();
    let mut cols = Vec::with_capacity(source.dim());
    for idx in 0..source.dim() {
        let a = source.exponents(idx).exps.clone();
        let mut c = vec![0u32; split.total()];
        let mut prod = source.one();
        let mut fact = 1u32;
        for (i, &ai) in a.iter().enumerate() {
            for (j, dig) in base_p_digits(ai, p, heights[i] as usize).into_iter().enumerate() {
                c[split.flat(i, j)] = dig;
                fact = field.mul(fact, field.factorial(dig as u64));
                let mut e = vec![0u32; a.len()];
                e[i] = p.pow(j as u32);
                let g = source.monomial(&e).expect("generator");
                for _ in 0..dig {
                    prod = source.mul(&prod, &g);
                }
            }
        }
        // Π (x^{(p^j ε_i)})^{c_ij} = κ x^(a) with κ = Π c_ij! exactly
        let mut expected = FVector::zeros(source.dim());
        expected.set(idx, fact);
        if prod != expected {
            return Err(Error::Construction(format!(
                "digit factorization unit for {} is not the digit factorial product",
                source.monomial_label(idx)
            )));
        }
        let inv = field.inv(fact).expect("digits below p");
        let col = field.scale(inv, &target.monomial(&c).expect("digits below p"));
        cols.push(col);
    }
    let matrix = Matrix::from_columns(field, target.dim(), &cols);
    Ok(DividedPowerIso {
        split,
        source,
        target,
        matrix,
    })
}

impl DividedPowerIso {
    pub fn apply(&self, f: &FVector) -> FVector {
        self.matrix.mul_vec(f)
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.rank() == self.source.dim() && self.source.dim() == self.target.dim()
    }

    /// `φ(fg) = φ(f)φ(g)` on every pair of basis monomials.
    pub fn is_multiplicative(&self) -> bool {
        let d = self.source.dim();
        let images: Vec<FVector> = (0..d).map(|i| self.matrix.column(i)).collect();
        (0..d).all(|a| {
            (a..d).all(|b| {
                let lhs = match self.source.mul_basis(a, b) {
                    Some((k, c)) => self.source.field().scale(c, &images[k]),
                    None => FVector::zeros(self.target.dim()),
                };
                lhs == self.target.mul(&images[a], &images[b])
            })
        })
    }
}

/// `ι: W(m; n̄) → W(|n̄|; 1)`, `Φ(D) = φ ∘ D ∘ φ^{-1}`, as a coordinate matrix.
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    pub phi: DividedPowerIso,
    pub source: GeneralizedWitt,
    pub target: JacobsonWitt,
    pub matrix: Matrix,
}

pub fn build_iota(field: PrimeField, heights: &[u32]) -> Result<EmbeddingMap> {
    build_iota_with_cap(field, heights, DEFAULT_DIM_CAP)
}

pub fn build_iota_with_cap(field: PrimeField, heights: &[u32], cap: usize) -> Result<EmbeddingMap> {
    let phi = build_phi(field, heights)?;
    let source = build_witt_with_cap(field, heights, cap)?;
    let target = build_jacobson_witt_with_cap(field, phi.split.total(), cap)?;
    let carrier = &source.carrier;
    let ring = &target.ring;
    let p = field.p();
    let mut cols = Vec::with_capacity(source.algebra.dim());
    for var in 0..carrier.num_vars() {
        for idx in 0..carrier.dim() {
            let f = FVector::unit(carrier.dim(), idx);
            let mut coeffs = vec![FVector::zeros(ring.dim()); phi.split.total()];
            for j in 0..heights[var] as usize {
                // x^(a) ∂_var applied to x^{(p^j ε_var)} is x^(a) x^{((p^j - 1) ε_var)}
                let mut e = vec![0u32; carrier.num_vars()];
                e[var] = p.pow(j as u32) - 1;
                let value = carrier.mul(&f, &carrier.monomial(&e).expect("in range"));
                coeffs[phi.split.flat(var, j)] = phi.apply(&value);
            }
            cols.push(crate::cartan::Derivation { coeffs }.to_lie_vector());
        }
    }
    let matrix = Matrix::from_columns(field, target.algebra.dim(), &cols);
    let emb = EmbeddingMap {
        phi,
        source,
        target,
        matrix,
    };
    if !emb.is_injective() {
        return Err(Error::Construction("embedding is not injective".into()));
    }
    if let Some((i, j)) = emb.first_bracket_failure() {
        return Err(Error::Construction(format!("embedding fails to preserve [b_{i}, b_{j}]")));
    }
    Ok(emb)
}

/// Formula terms of `ι(∂_i)`: `D_{i,0} + Σ_{j>=1} (-1)^j y_{i,0}^{p-1}⋯y_{i,j-1}^{p-1} D_{i,j}`.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionBlock {
    pub var: usize,
    pub matches: bool,
    /// Sign of each term `j = 0..n_i-1` as read off the computed `ι(∂_i)`; `0` when the
    /// computed coefficient is not `±` the displayed monomial.
    pub signs: Vec<i64>,
    pub mismatched_terms: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub blocks: Vec<ExpansionBlock>,
}

impl ExpansionReport {
    pub fn all_match(&self) -> bool {
        self.blocks.iter().all(|b| b.matches)
    }
}

/// A coefficient identity failure: `a_{s,j} != (-1)^j y_{s,0}^{p-1}⋯y_{s,j-1}^{p-1} a_{s,0}`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityWitness {
    pub element: usize,
    pub support: Vec<String>,
    pub block: usize,
    pub j: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<IdentityWitness>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl EmbeddingMap {
    pub fn split(&self) -> &VariableSplit {
        &self.phi.split
    }

    pub fn apply(&self, v: &FVector) -> FVector {
        self.matrix.mul_vec(v)
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.algebra.dim()
    }

    /// First basis pair `(i, j)` with `ι[b_i, b_j] != [ι b_i, ι b_j]`.
    pub fn first_bracket_failure(&self) -> Option<(usize, usize)> {
        let src = &self.source.algebra;
        let tgt = &self.target.algebra;
        let d = src.dim();
        let images: Vec<FVector> = (0..d).map(|i| self.matrix.column(i)).collect();
        for i in 0..d {
            for j in i + 1..d {
                let lhs = self.apply(&src.bracket_basis(i, &FVector::unit(d, j)));
                let rhs = tgt.bracket(&images[i], &images[j]).expect("dims agree");
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Span of `ι(W(m; n̄))` in the target.
    pub fn image(&self) -> crate::liecore::Subspace {
        self.target.algebra.span(&self.matrix.columns())
    }

    /// The coefficient of `D_{i,j}` in a target element (as an element of `B_{|n̄|}`).
    fn coefficient(&self, v: &FVector, flat: usize) -> FVector {
        let d = self.target.ring.dim();
        FVector::from_coords(self.target.ring.field(), v.as_slice()[flat * d..(flat + 1) * d].to_vec())
    }

    /// `(-1)^j y_{i,0}^{p-1}⋯y_{i,j-1}^{p-1}` in `B_{|n̄|}`.
    fn prefix_monomial(&self, block: usize, j: usize) -> FVector {
        let f = self.target.ring.field();
        let split = self.split();
        let mut e = vec![0u32; split.total()];
        for l in 0..j {
            e[split.flat(block, l)] = f.p() - 1;
        }
        let sign = if j.is_multiple_of(2) { 1 } else { f.neg(1) };
        f.scale(sign, &self.target.ring.monomial(&e).expect("in range"))
    }

    pub fn check_d_expansion(&self) -> ExpansionReport {
        let split = self.split();
        let f = self.target.ring.field();
        let mut blocks = Vec::new();
        for var in 0..split.m() {
            let zero = vec![0u32; split.m()];
            let actual = self.apply(&self.source.element(var, &zero));
            let mut expected_coeffs = vec![FVector::zeros(self.target.ring.dim()); split.total()];
            let mut signs = Vec::new();
            for j in 0..split.heights()[var] as usize {
                let flat = split.flat(var, j);
                let term = self.prefix_monomial(var, j);
                expected_coeffs[flat] = term.clone();
                let got = self.coefficient(&actual, flat);
                let unsigned = if j % 2 == 0 { term } else { f.scale(f.neg(1), &term) };
                signs.push(if got == unsigned {
                    1
                } else if got == f.scale(f.neg(1), &unsigned) {
                    -1
                } else {
                    0
                });
            }
            let expected = crate::cartan::Derivation { coeffs: expected_coeffs }.to_lie_vector();
            let mismatched_terms = (0..actual.len())
                .filter(|&k| actual[k] != expected[k])
                .map(|k| self.target.algebra.labels()[k].clone())
                .collect::<Vec<_>>();
            blocks.push(ExpansionBlock {
                var,
                matches: mismatched_terms.is_empty(),
                signs,
                mismatched_terms,
            });
        }
        ExpansionReport { blocks }
    }

    /// Checks `a_{s,j} = (-1)^j y_{s,0}^{p-1}⋯y_{s,j-1}^{p-1} a_{s,0}` on every vector given.
    pub fn coefficient_identity_check(&self, elements: &[FVector]) -> IdentityReport {
        let split = self.split();
        let ring = &self.target.ring;
        let mut failures = Vec::new();
        for (idx, v) in elements.iter().enumerate() {
            for s in 0..split.m() {
                let a0 = self.coefficient(v, split.flat(s, 0));
                for j in 1..split.heights()[s] as usize {
                    let aj = self.coefficient(v, split.flat(s, j));
                    if aj != ring.mul(&self.prefix_monomial(s, j), &a0) {
                        failures.push(IdentityWitness {
                            element: idx,
                            support: self.support_labels(v),
                            block: s,
                            j,
                        });
                    }
                }
            }
        }
        IdentityReport {
            checked: elements.len(),
            failures,
        }
    }

    /// Target labels with the `y_{i,j}` naming, e.g. `y1,0^4*D(y1,1)`, for the support of `v`.
    pub fn support_labels(&self, v: &FVector) -> Vec<String> {
        let ring = &self.target.ring;
        let split = self.split();
        let d = ring.dim();
        v.support()
            .map(|(k, c)| {
                let (var, mono) = (k / d, k % d);
                let e = &ring.exponents(mono).exps;
                let mut parts: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(l, &x)| if x == 1 { split.name(l) } else { format!("{}^{}", split.name(l), x) })
                    .collect();
                parts.push(format!("D({})", split.name(var)));
                format!("{c}*{}", parts.join("*"))
            })
            .collect()
    }

    /// The p-envelope of `ι(W(m; n̄))` inside `W(|n̄|; 1)`.
    pub fn envelope_in_target(&self) -> Result<PEnvelope> {
        p_envelope(&self.target.algebra, &self.image())
    }
}
