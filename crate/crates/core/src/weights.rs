//! Weight space decompositions of the adjoint module (or a torus-stable subspace of it)
//! relative to a torus, and the checks built on them: coverage of all nonzero characters,
//! equal weight space dimensions, the dimension identity and fiber counts over subtori.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffla::{FVector, Matrix};
use crate::liecore::{LieAlgebra, Subspace};
use crate::restrict::Torus;

/// Values of a weight on the echelon basis of the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Character(pub Vec<u32>);

impl Character {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// All of `F_p^mu`, lexicographic.
pub fn all_characters(p: u32, mu: usize) -> Vec<Character> {
    let total = (p as usize).pow(mu as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u32; mu];
            for k in (0..mu).rev() {
                v[k] = (code % p as usize) as u32;
                code /= p as usize;
            }
            Character(v)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub enum Module<'a> {
    Adjoint,
    /// A torus-stable subspace of the adjoint module.
    Subspace(&'a Subspace),
}

#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    pub torus: Torus,
    pub module: Subspace,
    pub zero_space: Subspace,
    /// Nonzero characters with nonzero weight spaces.
    pub table: BTreeMap<Character, usize>,
    pub spaces: BTreeMap<Character, Subspace>,
}

impl WeightDecomposition {
    pub fn module_dim(&self) -> usize {
        self.module.dim()
    }

    pub fn mu(&self) -> usize {
        self.torus.dim()
    }

    pub fn dim_of(&self, chi: &Character) -> usize {
        if chi.is_zero() {
            self.zero_space.dim()
        } else {
            self.table.get(chi).copied().unwrap_or(0)
        }
    }

    pub fn space(&self, chi: &Character) -> Option<&Subspace> {
        if chi.is_zero() {
            Some(&self.zero_space)
        } else {
            self.spaces.get(chi)
        }
    }

    /// Sorted multiset of all weight space dimensions, the zero weight included.
    pub fn dimension_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.table.values().copied().collect();
        v.push(self.zero_space.dim());
        v.sort_unstable();
        v
    }

    /// Weight table keyed by character labels, zero weight included.
    pub fn labelled_table(&self) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> = self.table.iter().map(|(c, &d)| (c.label(), d)).collect();
        out.insert(Character(vec![0; self.mu()]).label(), self.zero_space.dim());
        out
    }
}

fn restricted_action(algebra: &LieAlgebra, t: &FVector, v: &Subspace) -> Result<Matrix> {
    let solver = v.solver();
    let f = algebra.field();
    let mut cols = Vec::with_capacity(v.dim());
    for b in v.basis() {
        let img = algebra.bracket(t, b)?;
        let c = solver.coordinates(&img).ok_or(Error::NotTorusStable)?;
        cols.push(FVector::from_coords(f, c));
    }
    Ok(Matrix::from_columns(f, v.dim(), &cols))
}

/// Simultaneous eigenspaces of `ad(t_1), …, ad(t_mu)` on the module, refined one torus
/// basis element at a time over every eigenvalue in `F_p`.
pub fn decompose(algebra: &LieAlgebra, torus: &Torus, module: Module<'_>) -> Result<WeightDecomposition> {
    let f = algebra.field();
    let m = match module {
        Module::Adjoint => algebra.full_space(),
        Module::Subspace(s) => s.clone(),
    };
    let mut parts: Vec<(Vec<u32>, Subspace)> = vec![(Vec::new(), m.clone())];
    for t in torus.basis() {
        let mut next = Vec::new();
        for (chi, v) in parts {
            if v.is_zero() {
                continue;
            }
            let a = restricted_action(algebra, t, &v)?;
            let mut found = 0;
            for lambda in 0..f.p() {
                let eig = a.eigenspace(lambda)?;
                if eig.is_empty() {
                    continue;
                }
                found += eig.len();
                let vecs: Vec<FVector> = eig
                    .iter()
                    .map(|c| f.combine(algebra.dim(), c.as_slice(), v.basis()))
                    .collect();
                let mut chi2 = chi.clone();
                chi2.push(lambda);
                next.push((chi2, algebra.span(&vecs)));
            }
            if found != v.dim() {
                return Err(Error::NotToral);
            }
        }
        parts = next;
    }
    let mu = torus.dim();
    let mut zero_space = Subspace::zero(f, algebra.dim());
    let mut table = BTreeMap::new();
    let mut spaces = BTreeMap::new();
    for (chi, v) in parts {
        let chi = Character(chi);
        debug_assert_eq!(chi.0.len(), mu);
        if chi.is_zero() {
            zero_space = v;
        } else if !v.is_zero() {
            table.insert(chi.clone(), v.dim());
            spaces.insert(chi, v);
        }
    }
    Ok(WeightDecomposition {
        torus: torus.clone(),
        module: m,
        zero_space,
        table,
        spaces,
    })
}

/// Recomputes `[t_i, u] = λ_i u` on every basis vector of every weight space.
pub fn verify_weight_linearity(algebra: &LieAlgebra, wd: &WeightDecomposition) -> bool {
    let f = algebra.field();
    let zero = Character(vec![0; wd.mu()]);
    std::iter::once((&zero, &wd.zero_space)).chain(wd.spaces.iter()).all(|(chi, space)| {
        space.basis().iter().all(|u| {
            wd.torus
                .basis()
                .iter()
                .zip(&chi.0)
                .all(|(t, &l)| algebra.bracket(t, u).expect("dims agree") == f.scale(l, u))
        })
    })
}

/// `[M_λ, M_μ] ⊆ M_{λ+μ}` for every pair of present weights (adjoint module).
pub fn verify_bracket_additivity(algebra: &LieAlgebra, wd: &WeightDecomposition) -> bool {
    let f = algebra.field();
    let mu = wd.mu();
    let zero = Character(vec![0; mu]);
    let all: Vec<(&Character, &Subspace)> = std::iter::once((&zero, &wd.zero_space)).chain(wd.spaces.iter()).collect();
    for (a, sa) in &all {
        for (b, sb) in &all {
            let sum = Character(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect());
            let br = algebra.bracket_subspaces(sa, sb);
            if br.is_zero() {
                continue;
            }
            match wd.space(&sum) {
                Some(target) if br.is_subspace_of(target) => {}
                _ => return false,
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    pub full: bool,
    pub present: usize,
    pub expected: usize,
    pub missing: Vec<Character>,
}

pub fn coverage_check(wd: &WeightDecomposition) -> Coverage {
    let p = wd.torus.span().field().p();
    let missing: Vec<Character> = all_characters(p, wd.mu())
        .into_iter()
        .filter(|c| !c.is_zero() && wd.dim_of(c) == 0)
        .collect();
    let expected = (p as usize).pow(wd.mu() as u32) - 1;
    Coverage {
        full: missing.is_empty(),
        present: wd.table.len(),
        expected,
        missing,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualDims {
    pub equal: bool,
    pub common: Option<usize>,
    pub violation: Option<(Character, usize, Character, usize)>,
}

pub fn equal_dims_check(wd: &WeightDecomposition) -> EqualDims {
    let mut it = wd.table.iter();
    let Some((first, &d)) = it.next() else {
        return EqualDims {
            equal: true,
            common: None,
            violation: None,
        };
    };
    for (c, &e) in it {
        if e != d {
            return EqualDims {
                equal: false,
                common: None,
                violation: Some((first.clone(), d, c.clone(), e)),
            };
        }
    }
    EqualDims {
        equal: true,
        common: Some(d),
        violation: None,
    }
}

/// `dim M = dim C_M(t) + (p^mu − 1) · d`.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionIdentity {
    pub applicable: bool,
    pub holds: bool,
    pub module_dim: usize,
    pub centralizer_dim: usize,
    pub nonzero_weights: usize,
    pub common_dim: Option<usize>,
    /// `dim(M ∩ t)`.
    pub torus_intersection_dim: usize,
    pub formula: String,
}

pub fn dimension_identity_check(wd: &WeightDecomposition) -> DimensionIdentity {
    let cov = coverage_check(wd);
    let eq = equal_dims_check(wd);
    let torus_intersection_dim = wd.module.intersect(wd.torus.span()).dim();
    let applicable = cov.full && eq.equal && eq.common.is_some();
    let c = wd.zero_space.dim();
    let d = eq.common.unwrap_or(0);
    let holds = applicable && wd.module_dim() == c + cov.expected * d;
    DimensionIdentity {
        applicable,
        holds,
        module_dim: wd.module_dim(),
        centralizer_dim: c,
        nonzero_weights: cov.expected,
        common_dim: eq.common,
        torus_intersection_dim,
        formula: if applicable {
            format!("{} = {} + {}*{}", wd.module_dim(), c, cov.expected, d)
        } else {
            "not applicable".into()
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub sub_dim: usize,
    pub complement_dim: usize,
    pub expected_count: usize,
    /// Preimage count for each nonzero character of the subtorus, keyed by label.
    pub counts: BTreeMap<String, usize>,
    pub counts_hold: bool,
    /// Nonzero characters restricting to zero.
    pub zero_fiber_nonzero: usize,
    pub zero_fiber_holds: bool,
    pub sums_match: bool,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.counts_hold && self.zero_fiber_holds && self.sums_match
    }
}

/// Counts characters of `t` over each character of a subtorus and compares the direct
/// decomposition relative to the subtorus with fiber sums.
pub fn fiber_count_check(algebra: &LieAlgebra, big: &WeightDecomposition, sub: &Torus) -> Result<FiberReport> {
    let f = algebra.field();
    let p = f.p();
    if !sub.span().is_subspace_of(big.torus.span()) {
        return Err(Error::NotASubtorus);
    }
    let mu = big.mu();
    let coords: Vec<Vec<u32>> = sub
        .basis()
        .iter()
        .map(|s| big.torus.coordinates(s).expect("inside torus"))
        .collect();
    let restrict = |alpha: &Character| -> Character {
        Character(
            coords
                .iter()
                .map(|row| row.iter().zip(&alpha.0).fold(0, |acc, (&c, &a)| f.add(acc, f.mul(c, a))))
                .collect(),
        )
    };
    let complement_dim = mu - sub.dim();
    let expected_count = (p as usize).pow(complement_dim as u32);
    let coverage_full = coverage_check(big).full;
    let module = Module::Subspace(&big.module);
    let small = decompose(algebra, sub, module)?;
    let mut counts = BTreeMap::new();
    let mut counts_hold = true;
    let mut sums_match = true;
    for beta in all_characters(p, sub.dim()) {
        let fiber: Vec<&Character> = big.table.keys().filter(|a| restrict(a) == beta).collect();
        let mut sum: usize = fiber.iter().map(|a| big.table[*a]).sum();
        if beta.is_zero() {
            sum += big.zero_space.dim();
        } else {
            counts.insert(beta.label(), fiber.len());
            if coverage_full && fiber.len() != expected_count {
                counts_hold = false;
            }
        }
        if small.dim_of(&beta) != sum {
            sums_match = false;
        }
    }
    let zero_fiber_nonzero = big.table.keys().filter(|a| restrict(a).is_zero()).count();
    let zero_fiber_holds = !coverage_full || zero_fiber_nonzero == expected_count - 1;
    Ok(FiberReport {
        sub_dim: sub.dim(),
        complement_dim,
        expected_count,
        counts,
        counts_hold,
        zero_fiber_nonzero,
        zero_fiber_holds,
        sums_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_classical, build_jacobson_witt, standard_generic_torus, ClassicalKind};
    use crate::ffla::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn witt_one_variable() {
        let w = build_jacobson_witt(f5(), 1).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let wd = decompose(&w.algebra, &t0, Module::Adjoint).unwrap();
        assert_eq!(wd.zero_space, *t0.span());
        assert_eq!(wd.table.len(), 4);
        assert!(wd.table.values().all(|&d| d == 1));
        assert!(coverage_check(&wd).full);
        assert_eq!(equal_dims_check(&wd).common, Some(1));
        assert!(dimension_identity_check(&wd).holds);
        assert!(verify_weight_linearity(&w.algebra, &wd));
        assert!(verify_bracket_additivity(&w.algebra, &wd));
    }

    #[test]
    fn sl2_negative_control() {
        let sl2 = build_classical(f5(), ClassicalKind::Sl, 2, false).unwrap();
        let t = Torus::new(&sl2, &[sl2.basis_vector(1)]).unwrap();
        let wd = decompose(&sl2, &t, Module::Adjoint).unwrap();
        let keys: Vec<Character> = wd.table.keys().cloned().collect();
        assert_eq!(keys, vec![Character(vec![2]), Character(vec![3])]);
        let cov = coverage_check(&wd);
        assert!(!cov.full);
        assert_eq!(cov.missing, vec![Character(vec![1]), Character(vec![4])]);
        assert_eq!(equal_dims_check(&wd).common, Some(1));
        assert!(!dimension_identity_check(&wd).applicable);
    }

    #[test]
    fn witt_two_variables_and_fibers() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let wd = decompose(&w.algebra, &t0, Module::Adjoint).unwrap();
        assert_eq!(wd.table.len(), 24);
        assert_eq!(wd.zero_space.dim(), 2);
        assert_eq!(equal_dims_check(&wd).common, Some(2));
        assert_eq!(dimension_identity_check(&wd).formula, "50 = 2 + 24*2");
        assert!(verify_bracket_additivity(&w.algebra, &wd));
        for k in 0..2 {
            let sub = Torus::new(&w.algebra, &[t0.basis()[k].clone()]).unwrap();
            let r = fiber_count_check(&w.algebra, &wd, &sub).unwrap();
            assert!(r.passed());
            assert!(r.counts.values().all(|&c| c == 5));
            assert_eq!(r.zero_fiber_nonzero, 4);
        }
        let r = fiber_count_check(&w.algebra, &wd, &t0).unwrap();
        assert!(r.passed());
        assert!(r.counts.values().all(|&c| c == 1));
    }

    #[test]
    fn non_stable_module_rejected() {
        let w = build_jacobson_witt(f5(), 1).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let s = w.algebra.span(&[w.element(0, &[2])]);
        assert!(matches!(
            decompose(&w.algebra, &t0, Module::Subspace(&s)),
            Err(Error::NotTorusStable)
        ));
    }

    #[test]
    fn foreign_subtorus_rejected() {
        let f = f5();
        let w = build_jacobson_witt(f, 2).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let wd = decompose(&w.algebra, &t0, Module::Adjoint).unwrap();
        let other = Torus::new(&w.algebra, &[w.element(0, &[1, 0])]).unwrap();
        assert!(matches!(
            fiber_count_check(&w.algebra, &wd, &other),
            Err(Error::NotASubtorus)
        ));
    }
}
