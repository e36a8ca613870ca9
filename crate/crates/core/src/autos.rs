//! Automorphisms of `B_n` and the automorphisms of `W(n;1)` they induce: substitution
//! endomorphisms, inverses, lifts of `GL_n(F_p)` matrices, restriction to a torus and the
//! `GL_n` certificate sweep.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{Carrier, Derivation, JacobsonWitt, TruncatedPolyRing};
use crate::error::{Error, Result};
use crate::ffla::{FVector, Matrix, PrimeField};
use crate::liecore::Subspace;
use crate::restrict::Torus;

/// The endomorphism of `B_n` with `x_i ↦ images[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingEndo {
    ring: TruncatedPolyRing,
    images: Vec<FVector>,
}

impl RingEndo {
    /// Each image must have zero constant term, so that `f_i^p = 0` and substitution is
    /// well defined.
    pub fn new(ring: &TruncatedPolyRing, images: Vec<FVector>) -> Result<Self> {
        if images.len() != ring.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: ring.num_vars(),
                actual: images.len(),
            });
        }
        for (i, f) in images.iter().enumerate() {
            if f.len() != ring.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ring.dim(),
                    actual: f.len(),
                });
            }
            if ring.constant_term(f) != 0 {
                return Err(Error::NonzeroConstantTerm(i));
            }
        }
        Ok(RingEndo {
            ring: ring.clone(),
            images,
        })
    }

    pub fn identity(ring: &TruncatedPolyRing) -> Self {
        let images = (0..ring.num_vars()).map(|i| ring.generator(i)).collect();
        RingEndo {
            ring: ring.clone(),
            images,
        }
    }

    /// Linear substitution `x_i ↦ Σ_k m[k][i] x_k` (column `i` holds the image of `x_i`).
    pub fn linear(ring: &TruncatedPolyRing, m: &Matrix) -> Result<Self> {
        let n = ring.num_vars();
        let f = ring.field();
        let images = (0..n)
            .map(|i| {
                let mut v = FVector::zeros(ring.dim());
                for k in 0..n {
                    f.axpy(&mut v, m.get(k, i), &ring.generator(k));
                }
                v
            })
            .collect();
        RingEndo::new(ring, images)
    }

    pub fn ring(&self) -> &TruncatedPolyRing {
        &self.ring
    }

    pub fn images(&self) -> &[FVector] {
        &self.images
    }

    /// `L[k][i]` = coefficient of `x_k` in the image of `x_i`.
    pub fn linear_part(&self) -> Matrix {
        let n = self.ring.num_vars();
        let mut m = Matrix::zeros(self.ring.field(), n, n);
        for (i, img) in self.images.iter().enumerate() {
            for k in 0..n {
                let mut e = vec![0u32; n];
                e[k] = 1;
                m.set(k, i, img[self.ring.index_of(&e).expect("linear monomial")]);
            }
        }
        m
    }

    pub fn is_invertible(&self) -> bool {
        self.linear_part().determinant() != 0
    }

    /// `f(f_1, …, f_n)` in truncated arithmetic.
    pub fn substitute(&self, g: &FVector) -> FVector {
        let ring = &self.ring;
        let f = ring.field();
        let p = f.p() as usize;
        let powers: Vec<Vec<FVector>> = self
            .images
            .iter()
            .map(|img| {
                let mut v = vec![ring.one()];
                for e in 1..p {
                    let next = ring.mul(&v[e - 1], img);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = FVector::zeros(ring.dim());
        for (idx, c) in g.support() {
            let mut term = ring.one();
            for (k, &e) in ring.exponents(idx).exps.iter().enumerate() {
                if e > 0 {
                    term = ring.mul(&term, &powers[k][e as usize]);
                }
            }
            f.axpy(&mut out, c, &term);
        }
        out
    }

    /// Matrix of `f ↦ substitute(f)` on the monomial basis.
    pub fn matrix(&self) -> Matrix {
        let d = self.ring.dim();
        let cols: Vec<FVector> = (0..d).map(|i| self.substitute(&FVector::unit(d, i))).collect();
        Matrix::from_columns(self.ring.field(), d, &cols)
    }

    /// `self ∘ other`: `x_i ↦ self(other(x_i))`.
    pub fn compose(&self, other: &RingEndo) -> RingEndo {
        let images = other.images.iter().map(|g| self.substitute(g)).collect();
        RingEndo {
            ring: self.ring.clone(),
            images,
        }
    }

    /// Compositional inverse. Writing `f_i = Σ_k L_{ki} x_k + N_i`, the inverse `ψ` solves
    /// `ψ = L^{-1}(x − N(ψ))`; each pass fixes one more total degree, so the iteration ends
    /// after at most `n(p-1)` passes.
    pub fn invert(&self) -> Result<RingEndo> {
        let ring = &self.ring;
        let f = ring.field();
        let n = ring.num_vars();
        let lin = self.linear_part();
        let lin_inv = lin.inverse().ok_or(Error::NotAnAutomorphism)?;
        let linear_endo = RingEndo::linear(ring, &lin)?;
        // nonlinear parts N_i
        let nonlinear: Vec<FVector> = self
            .images
            .iter()
            .zip(&linear_endo.images)
            .map(|(a, b)| f.sub_vectors(a, b))
            .collect();
        let mut psi = RingEndo {
            ring: ring.clone(),
            images: vec![FVector::zeros(ring.dim()); n],
        };
        let max_passes = n * (f.p() as usize - 1) + 2;
        for _ in 0..max_passes {
            // rhs_i = x_i − N_i(ψ)
            let rhs: Vec<FVector> = (0..n)
                .map(|i| f.sub_vectors(&ring.generator(i), &psi.substitute(&nonlinear[i])))
                .collect();
            // Σ_k L_{ki} ψ_k = rhs_i, so ψ_k = Σ_i (L^{-1})_{ik} rhs_i
            let next: Vec<FVector> = (0..n)
                .map(|k| {
                    let mut v = FVector::zeros(ring.dim());
                    for (i, r) in rhs.iter().enumerate() {
                        f.axpy(&mut v, lin_inv.get(i, k), r);
                    }
                    v
                })
                .collect();
            if next == psi.images {
                break;
            }
            psi.images = next;
        }
        let check = psi.compose(self);
        if check != RingEndo::identity(ring) || self.compose(&psi) != RingEndo::identity(ring) {
            return Err(Error::Construction("inverse iteration did not converge".into()));
        }
        Ok(psi)
    }
}

/// Result of re-checking an induced automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AutoCheck {
    pub invertible: bool,
    pub bracket_preserving: bool,
    pub commutes_with_p_map: bool,
}

impl AutoCheck {
    pub fn passed(&self) -> bool {
        self.invertible && self.bracket_preserving && self.commutes_with_p_map
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Every basis pair, and the p-map on every basis vector.
    Exhaustive,
    /// Random pairs drawn from the given generator.
    Sampled(usize),
}

/// An automorphism `D ↦ φ ∘ D ∘ φ^{-1}` of `W(n;1)` induced by `φ ∈ Aut(B_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAuto {
    pub matrix: Matrix,
    pub source: RingEndo,
}

pub fn induced_lie_auto(w: &JacobsonWitt, e: &RingEndo) -> Result<LieAuto> {
    let psi = e.invert()?;
    let ring = &w.ring;
    let n = w.n();
    let mut cols = Vec::with_capacity(w.algebra.dim());
    for var in 0..n {
        for idx in 0..ring.dim() {
            let mono = FVector::unit(ring.dim(), idx);
            // coefficient on D_k is φ(x^α ∂_var ψ(x_k))
            let coeffs = (0..n)
                .map(|k| e.substitute(&ring.mul(&mono, &ring.partial(var, &psi.images[k]))))
                .collect();
            cols.push(Derivation { coeffs }.to_lie_vector());
        }
    }
    Ok(LieAuto {
        matrix: Matrix::from_columns(ring.field(), w.algebra.dim(), &cols),
        source: e.clone(),
    })
}

impl LieAuto {
    pub fn identity(w: &JacobsonWitt) -> Self {
        LieAuto {
            matrix: Matrix::identity(w.algebra.field(), w.algebra.dim()),
            source: RingEndo::identity(&w.ring),
        }
    }

    pub fn apply(&self, v: &FVector) -> FVector {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &LieAuto) -> LieAuto {
        LieAuto {
            matrix: self.matrix.mul(&other.matrix),
            source: self.source.compose(&other.source),
        }
    }

    pub fn check<R: Rng + ?Sized>(&self, w: &JacobsonWitt, mode: CheckMode, rng: &mut R) -> AutoCheck {
        let alg = &w.algebra;
        let d = alg.dim();
        let invertible = self.matrix.rank() == d;
        let (bracket_preserving, commutes_with_p_map) = match mode {
            CheckMode::Exhaustive => {
                let images = self.matrix.columns();
                let mut ok = true;
                'outer: for i in 0..d {
                    for j in i + 1..d {
                        let lhs = self.apply(&alg.bracket_basis(i, &FVector::unit(d, j)));
                        if lhs != alg.bracket(&images[i], &images[j]).expect("dims agree") {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                let pmap = alg.pmap().expect("W(n;1) is restricted");
                let pok = (0..d).all(|i| self.apply(&pmap[i]) == w.composition_p_power(&images[i]));
                (ok, pok)
            }
            CheckMode::Sampled(count) => {
                let f = alg.field();
                let mut ok = true;
                let mut pok = true;
                for _ in 0..count {
                    let u = f.random_vector(d, rng);
                    let v = f.random_vector(d, rng);
                    let lhs = self.apply(&alg.bracket(&u, &v).expect("dims agree"));
                    if lhs != alg.bracket(&self.apply(&u), &self.apply(&v)).expect("dims agree") {
                        ok = false;
                    }
                    if self.apply(&w.composition_p_power(&u)) != w.composition_p_power(&self.apply(&u)) {
                        pok = false;
                    }
                }
                (ok, pok)
            }
        };
        AutoCheck {
            invertible,
            bracket_preserving,
            commutes_with_p_map,
        }
    }

    /// `a(S) = S`.
    pub fn stabilizes(&self, s: &Subspace) -> bool {
        let images: Vec<FVector> = s.basis().iter().map(|b| self.apply(b)).collect();
        Subspace::span(s.field(), s.ambient_dim(), &images) == *s
    }

    /// Matrix of the automorphism on the echelon basis of a torus it normalizes.
    pub fn restriction_to_torus(&self, t: &Torus) -> Result<Matrix> {
        let solver = t.span().solver();
        let f = self.matrix.field();
        let mut cols = Vec::with_capacity(t.dim());
        for b in t.basis() {
            let img = self.apply(b);
            let c = solver.coordinates(&img).ok_or(Error::DoesNotNormalize)?;
            cols.push(FVector::from_coords(f, c));
        }
        let m = Matrix::from_columns(f, t.dim(), &cols);
        if m.rank() != t.dim() {
            return Err(Error::DoesNotNormalize);
        }
        Ok(m)
    }
}

/// `x_i ↦ Π_j (1+x_j)^{g_{ji}} − 1`, exponents the representatives `0..p-1`.
pub fn demushkin_endo(ring: &TruncatedPolyRing, g: &Matrix) -> Result<RingEndo> {
    let n = ring.num_vars();
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: g.rows(),
        });
    }
    if g.determinant() == 0 {
        return Err(Error::NotAnAutomorphism);
    }
    let f = ring.field();
    let images = (0..n)
        .map(|i| {
            let mut prod = ring.one();
            for j in 0..n {
                prod = ring.mul(&prod, &ring.pow(&ring.one_plus_generator(j), g.get(j, i)));
            }
            f.sub_vectors(&prod, &ring.one())
        })
        .collect();
    RingEndo::new(ring, images)
}

/// The lift of `g ∈ GL_n(F_p)` to `Aut(W(n;1))`.
pub fn demushkin_lift(w: &JacobsonWitt, g: &Matrix) -> Result<LieAuto> {
    induced_lie_auto(w, &demushkin_endo(&w.ring, g)?)
}

/// Every invertible `n×n` matrix over `F_p`, in lexicographic order of entries.
pub fn general_linear_group(field: PrimeField, n: usize) -> Vec<Matrix> {
    let p = field.p() as u64;
    let total = p.pow((n * n) as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut m = Matrix::zeros(field, n, n);
            for k in (0..n * n).rev() {
                m.set(k / n, k % n, (code % p) as u32);
                code /= p;
            }
            (m.determinant() != 0).then_some(m)
        })
        .collect()
}

/// Unitriangular inputs `g` with `g_{ij} = 0` for `i > j`: the matrices for which the
/// product in the lift only involves `j <= i`. Their restrictions to `t_0` are the lower
/// unitriangular matrices.
pub fn unitriangular_inputs(field: PrimeField, n: usize) -> Vec<Matrix> {
    general_linear_group(field, n)
        .into_iter()
        .filter(|m| (0..n).all(|i| (0..n).all(|j| if i == j { m.get(i, j) == 1 } else { i < j || m.get(i, j) == 0 })))
        .collect()
}

pub fn is_lower_unitriangular(m: &Matrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| (0..n).all(|j| if i == j { m.get(i, j) == 1 } else { i > j || m.get(i, j) == 0 }))
}

/// How the restriction of a lift to `t_0` relates to the input matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RestrictionConvention {
    Identity,
    Transpose,
    Inverse,
    InverseTranspose,
    Unrecognized,
}

const CONVENTIONS: [RestrictionConvention; 4] = [
    RestrictionConvention::Identity,
    RestrictionConvention::Transpose,
    RestrictionConvention::Inverse,
    RestrictionConvention::InverseTranspose,
];

/// Every convention under which `r` is the restriction of the lift of `g`.
pub fn matching_conventions(g: &Matrix, r: &Matrix) -> Vec<RestrictionConvention> {
    let inv = g.inverse().expect("invertible");
    CONVENTIONS
        .into_iter()
        .filter(|c| {
            let candidate = match c {
                RestrictionConvention::Identity => g.clone(),
                RestrictionConvention::Transpose => g.transpose(),
                RestrictionConvention::Inverse => inv.clone(),
                RestrictionConvention::InverseTranspose => inv.transpose(),
                RestrictionConvention::Unrecognized => unreachable!(),
            };
            candidate == *r
        })
        .collect()
}

/// First convention consistent with the given pair, or `Unrecognized`.
pub fn classify_restriction(g: &Matrix, r: &Matrix) -> RestrictionConvention {
    matching_conventions(g, r)
        .first()
        .copied()
        .unwrap_or(RestrictionConvention::Unrecognized)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylCertificate {
    pub group_order: usize,
    pub verified_automorphisms: usize,
    pub normalizing: usize,
    pub distinct_restrictions: usize,
    pub distinct_lifts: usize,
    pub restrictions_invertible: bool,
    pub bijective: bool,
    pub convention: Option<RestrictionConvention>,
    pub failures: Vec<String>,
}

impl WeylCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.bijective
            && self.verified_automorphisms == self.group_order
            && self.normalizing == self.group_order
    }
}

/// Lifts every element of `GL_n(F_p)`, checks each lift is an automorphism normalizing
/// `t`, and that the restriction map is a bijection onto `GL_n(F_p)`.
pub fn weyl_certificate(w: &JacobsonWitt, t: &Torus, mode: CheckMode, seed: u64) -> Result<WeylCertificate> {
    use rand::SeedableRng;
    let field = w.algebra.field();
    let group = general_linear_group(field, w.n());
    let results: Vec<(usize, std::result::Result<(AutoCheck, Matrix, Matrix), String>)> = group
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let out = demushkin_lift(w, g).map_err(|e| e.to_string()).and_then(|a| {
                let check = a.check(w, mode, &mut rng);
                let r = a.restriction_to_torus(t).map_err(|e| e.to_string())?;
                Ok((check, r, a.matrix))
            });
            (k, out)
        })
        .collect();
    let mut verified = 0;
    let mut normalizing = 0;
    let mut restrictions = HashSet::new();
    let mut lifts = HashSet::new();
    let mut failures = Vec::new();
    let mut invertible = true;
    let mut consistent: Vec<RestrictionConvention> = CONVENTIONS.to_vec();
    for (k, res) in results {
        match res {
            Ok((check, r, m)) => {
                if check.passed() {
                    verified += 1;
                } else {
                    failures.push(format!("lift of element {k} failed {check:?}"));
                }
                normalizing += 1;
                if r.determinant() == 0 {
                    invertible = false;
                }
                let matching = matching_conventions(&group[k], &r);
                consistent.retain(|c| matching.contains(c));
                restrictions.insert(r.to_rows());
                lifts.insert(m.to_rows());
            }
            Err(e) => failures.push(format!("element {k}: {e}")),
        }
    }
    let bijective = invertible && restrictions.len() == group.len();
    Ok(WeylCertificate {
        group_order: group.len(),
        verified_automorphisms: verified,
        normalizing,
        distinct_restrictions: restrictions.len(),
        distinct_lifts: lifts.len(),
        restrictions_invertible: invertible,
        bijective,
        convention: Some(consistent.first().copied().unwrap_or(RestrictionConvention::Unrecognized)),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_jacobson_witt, standard_generic_torus, standard_maximal_solvable, BorelConvention};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn poly(ring: &TruncatedPolyRing, terms: &[(u32, &[u32])]) -> FVector {
        let f = ring.field();
        let mut v = FVector::zeros(ring.dim());
        for &(c, e) in terms {
            f.axpy(&mut v, c, &ring.monomial(e).unwrap());
        }
        v
    }

    #[test]
    fn substitution_examples() {
        let f = f5();
        let b1 = TruncatedPolyRing::new(f, 1).unwrap();
        let x2 = poly(&b1, &[(1, &[2])]);
        assert_eq!(RingEndo::identity(&b1).substitute(&x2), x2);
        let dbl = RingEndo::new(&b1, vec![poly(&b1, &[(2, &[1])])]).unwrap();
        assert_eq!(dbl.substitute(&x2), poly(&b1, &[(4, &[2])]));
        let b2 = TruncatedPolyRing::new(f, 2).unwrap();
        let e = RingEndo::new(&b2, vec![poly(&b2, &[(1, &[1, 0]), (1, &[0, 1])]), b2.generator(1)]).unwrap();
        let x1x2 = poly(&b2, &[(1, &[1, 1])]);
        assert_eq!(e.substitute(&x1x2), poly(&b2, &[(1, &[1, 1]), (1, &[0, 2])]));
        assert!(matches!(
            RingEndo::new(&b1, vec![poly(&b1, &[(1, &[0]), (1, &[1])])]),
            Err(Error::NonzeroConstantTerm(0))
        ));
    }

    #[test]
    fn inversion_examples() {
        let f = f5();
        let b1 = TruncatedPolyRing::new(f, 1).unwrap();
        let dbl = RingEndo::new(&b1, vec![poly(&b1, &[(2, &[1])])]).unwrap();
        assert_eq!(dbl.invert().unwrap().images()[0], poly(&b1, &[(3, &[1])]));
        let e = RingEndo::new(&b1, vec![poly(&b1, &[(1, &[1]), (1, &[2])])]).unwrap();
        let inv = e.invert().unwrap();
        assert_eq!(e.compose(&inv), RingEndo::identity(&b1));
        assert_eq!(e.matrix().inverse().unwrap(), inv.matrix());
        let b2 = TruncatedPolyRing::new(f, 2).unwrap();
        let sing = RingEndo::new(&b2, vec![b2.generator(1), b2.generator(1)]).unwrap();
        assert!(matches!(sing.invert(), Err(Error::NotAnAutomorphism)));
    }

    #[test]
    fn induced_examples() {
        let f = f5();
        let w = build_jacobson_witt(f, 1).unwrap();
        let id = induced_lie_auto(&w, &RingEndo::identity(&w.ring)).unwrap();
        assert_eq!(id.matrix, Matrix::identity(f, 5));
        let dbl = RingEndo::new(&w.ring, vec![f.scale(2, &w.ring.generator(0))]).unwrap();
        let a = induced_lie_auto(&w, &dbl).unwrap();
        assert_eq!(a.apply(&w.element(0, &[0])), f.scale(3, &w.element(0, &[0])));
        assert_eq!(a.apply(&w.element(0, &[1])), w.element(0, &[1]));
        assert!(a.check(&w, CheckMode::Exhaustive, &mut rng()).passed());
    }

    #[test]
    fn induced_map_is_semilinear_over_the_ring() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let mut r = rng();
        let g = Matrix::from_rows(f, &[vec![1, 2], vec![3, 2]]);
        let e = demushkin_endo(&w.ring, &g).unwrap();
        let a = induced_lie_auto(&w, &e).unwrap();
        for _ in 0..10 {
            let h = f.random_vector(w.ring.dim(), &mut r);
            let d = f.random_vector(w.algebra.dim(), &mut r);
            let hd = {
                let dd = w.derivation(&d);
                Derivation {
                    coeffs: dd.coeffs.iter().map(|c| w.ring.mul(&h, c)).collect(),
                }
                .to_lie_vector()
            };
            let ad = w.derivation(&a.apply(&d));
            let rhs = Derivation {
                coeffs: ad.coeffs.iter().map(|c| w.ring.mul(&e.substitute(&h), c)).collect(),
            }
            .to_lie_vector();
            assert_eq!(a.apply(&hd), rhs);
        }
    }

    #[test]
    fn induced_is_a_homomorphism() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let g1 = Matrix::from_rows(f, &[vec![2, 1], vec![0, 1]]);
        let g2 = Matrix::from_rows(f, &[vec![1, 0], vec![4, 3]]);
        let e1 = demushkin_endo(&w.ring, &g1).unwrap();
        let e2 = demushkin_endo(&w.ring, &g2).unwrap();
        let a12 = induced_lie_auto(&w, &e1.compose(&e2)).unwrap();
        let a1 = induced_lie_auto(&w, &e1).unwrap();
        let a2 = induced_lie_auto(&w, &e2).unwrap();
        assert_eq!(a12.matrix, a1.matrix.mul(&a2.matrix));
        assert_eq!(e1.compose(&e2), demushkin_endo(&w.ring, &g1.mul(&g2)).unwrap());
    }

    #[test]
    fn lift_n1_restriction_scalar() {
        let f = f5();
        let w = build_jacobson_witt(f, 1).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let g = Matrix::from_rows(f, &[vec![2]]);
        let e = demushkin_endo(&w.ring, &g).unwrap();
        assert_eq!(e.images()[0], poly(&w.ring, &[(2, &[1]), (1, &[2])]));
        let a = demushkin_lift(&w, &g).unwrap();
        let r = a.restriction_to_torus(&t0).unwrap();
        assert_eq!(r, Matrix::from_rows(f, &[vec![3]]));
        assert_eq!(classify_restriction(&g, &r), RestrictionConvention::Inverse);
        let id = demushkin_lift(&w, &Matrix::identity(f, 1)).unwrap();
        assert_eq!(id.matrix, Matrix::identity(f, 5));
    }

    #[test]
    fn non_normalizing_automorphism() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let e = RingEndo::new(&w.ring, vec![poly(&w.ring, &[(1, &[1, 0]), (1, &[1, 1])]), w.ring.generator(1)]).unwrap();
        let a = induced_lie_auto(&w, &e).unwrap();
        assert!(a.check(&w, CheckMode::Sampled(5), &mut rng()).passed());
        assert!(matches!(a.restriction_to_torus(&t0), Err(Error::DoesNotNormalize)));
    }

    #[test]
    fn singular_lift_rejected() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let g = Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        assert!(matches!(demushkin_lift(&w, &g), Err(Error::NotAnAutomorphism)));
    }

    #[test]
    fn unitriangular_lifts_stabilize_c() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let c = standard_maximal_solvable(&w, BorelConvention::Ascending).unwrap();
        let desc = standard_maximal_solvable(&w, BorelConvention::Descending).unwrap();
        let u = unitriangular_inputs(f, 2);
        assert_eq!(u.len(), 5);
        let mut desc_stable = 0;
        for g in &u {
            let a = demushkin_lift(&w, g).unwrap();
            assert!(a.stabilizes(&c));
            if a.stabilizes(&desc) {
                desc_stable += 1;
            }
            let r = a.restriction_to_torus(&t0).unwrap();
            assert!(is_lower_unitriangular(&r));
        }
        assert!(desc_stable < 5);
        let swap = Matrix::from_rows(f, &[vec![0, 1], vec![1, 0]]);
        assert!(!demushkin_lift(&w, &swap).unwrap().stabilizes(&c));
    }

    #[test]
    fn weyl_certificate_n1() {
        let f = f5();
        let w = build_jacobson_witt(f, 1).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let cert = weyl_certificate(&w, &t0, CheckMode::Exhaustive, 1).unwrap();
        assert_eq!(cert.group_order, 4);
        assert!(cert.passed());
        assert_eq!(cert.convention, Some(RestrictionConvention::Inverse));
    }

    #[test]
    fn gl2_order() {
        assert_eq!(general_linear_group(f5(), 2).len(), 480);
    }
}
