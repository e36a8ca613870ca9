//! p-structure services: p-envelopes, toral elements, semisimple parts, tori and the
//! randomized maximal torus search.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffla::{BasisSolver, FVector, Matrix};
use crate::liecore::{LieAlgebra, Subspace};

pub const DEFAULT_SEED: u64 = 0x6d6f_646c_6965;
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_PATIENCE: usize = 12;

/// Cap on stored iterates when detecting eventual periodicity of `u, u^[p], …`.
const MAX_ITERATES: usize = 4096;

/// A torus: commuting toral elements, stored as an echelonized basis. Over `F_p` every
/// combination of commuting toral elements is toral, so the echelon basis stays toral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    span: Subspace,
}

/// Result of re-checking the torus axioms.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TorusCheck {
    pub commuting: bool,
    pub toral: bool,
    pub diagonalizable: bool,
}

impl TorusCheck {
    pub fn passed(&self) -> bool {
        self.commuting && self.toral && self.diagonalizable
    }
}

impl Torus {
    pub fn new(algebra: &LieAlgebra, gens: &[FVector]) -> Result<Self> {
        for g in gens {
            if g.len() != algebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: algebra.dim(),
                    actual: g.len(),
                });
            }
        }
        let span = algebra.span(gens);
        let torus = Torus { span };
        let check = torus.check(algebra)?;
        if !check.commuting {
            return Err(Error::NotCommuting);
        }
        if !check.toral {
            return Err(Error::NotToral);
        }
        Ok(torus)
    }

    pub fn zero(algebra: &LieAlgebra) -> Self {
        Torus {
            span: Subspace::zero(algebra.field(), algebra.dim()),
        }
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> &[FVector] {
        self.span.basis()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn contains(&self, v: &FVector) -> bool {
        self.span.contains(v)
    }

    pub fn check(&self, algebra: &LieAlgebra) -> Result<TorusCheck> {
        let b = self.basis();
        let mut commuting = true;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if !algebra.bracket(&b[i], &b[j])?.is_zero() {
                    commuting = false;
                }
            }
        }
        let mut toral = true;
        for t in b {
            if algebra.jacobson_p_power(t)? != *t {
                toral = false;
            }
        }
        let diagonalizable = b.iter().all(|t| is_ad_diagonalizable(algebra, t));
        Ok(TorusCheck {
            commuting,
            toral,
            diagonalizable,
        })
    }

    /// Coordinates of a torus element in the echelon basis.
    pub fn coordinates(&self, v: &FVector) -> Option<Vec<u32>> {
        self.span.solver().coordinates(v)
    }
}

/// `ad(u)` is diagonalizable with spectrum in `F_p` iff `ad(u)^p = ad(u)`; the eigenspace
/// dimensions then sum to `dim L`.
pub fn is_ad_diagonalizable(algebra: &LieAlgebra, u: &FVector) -> bool {
    let ad = algebra.ad_matrix(u);
    let f = algebra.field();
    let total: usize = (0..f.p())
        .map(|l| ad.eigenspace(l).map(|v| v.len()).unwrap_or(0))
        .sum();
    total == algebra.dim()
}

pub fn is_toral(algebra: &LieAlgebra, u: &FVector) -> Result<bool> {
    Ok(algebra.jacobson_p_power(u)? == *u)
}

/// A subalgebra `inner` together with its p-envelope `closure` in a restricted ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PEnvelope {
    pub inner: Subspace,
    pub closure: Subspace,
}

impl PEnvelope {
    pub fn dim(&self) -> usize {
        self.closure.dim()
    }

    /// The closure as a standalone restricted algebra on its echelon basis.
    pub fn as_algebra(&self, ambient: &LieAlgebra) -> Result<LieAlgebra> {
        let labels = (0..self.closure.dim()).map(|i| format!("e{}", i + 1)).collect();
        ambient.subalgebra(self.closure.basis(), labels, true)
    }
}

/// Smallest bracket- and `[p]`-closed subspace containing the subalgebra `s`.
pub fn p_envelope(ambient: &LieAlgebra, s: &Subspace) -> Result<PEnvelope> {
    if !ambient.is_restricted() {
        return Err(Error::NoPMap);
    }
    if !ambient.is_subalgebra(s) {
        return Err(Error::NotBracketClosed);
    }
    let mut current = s.clone();
    loop {
        let mut gens: Vec<FVector> = current.basis().to_vec();
        for b in current.basis() {
            gens.push(ambient.jacobson_p_power(b)?);
        }
        let next = ambient.subalgebra_closure(&gens);
        if next.dim() == current.dim() {
            return Ok(PEnvelope {
                inner: s.clone(),
                closure: current,
            });
        }
        current = next;
    }
}

/// Iterates `u, u^[p], u^[p^2], …` until a repeat; returns the iterates and the
/// (preperiod, period).
fn iterate_until_periodic(algebra: &LieAlgebra, u: &FVector) -> Result<(Vec<FVector>, usize, usize)> {
    let mut seen: HashMap<FVector, usize> = HashMap::new();
    let mut iterates = Vec::new();
    let mut cur = u.clone();
    loop {
        if let Some(&e) = seen.get(&cur) {
            let d = iterates.len() - e;
            return Ok((iterates, e, d));
        }
        if iterates.len() >= MAX_ITERATES {
            return Err(Error::Construction("p-power iterates did not become periodic".into()));
        }
        seen.insert(cur.clone(), iterates.len());
        let next = algebra.jacobson_p_power(&cur)?;
        iterates.push(cur);
        cur = next;
    }
}

/// Semisimple part of `u`: `u^[p^k]` for the smallest `k >= e` with `d | k`, where `e` and
/// `d` are the preperiod and period of the p-power iterates.
pub fn semisimple_part(algebra: &LieAlgebra, u: &FVector) -> Result<FVector> {
    let (iterates, e, d) = iterate_until_periodic(algebra, u)?;
    let k = e.div_ceil(d) * d;
    // iterates[e..e+d] is one full period; reduce k into it
    let idx = if k < iterates.len() { k } else { e + (k - e) % d };
    Ok(iterates[idx].clone())
}

/// The matrix of `[p]` on an abelian `[p]`-closed subspace, in its echelon basis. On such a
/// subspace `[p]` is additive, and `F_p`-linear.
fn p_map_matrix(algebra: &LieAlgebra, v: &Subspace) -> Result<(BasisSolver, Matrix)> {
    let solver = v.solver();
    let f = algebra.field();
    let mut cols = Vec::with_capacity(v.dim());
    for b in v.basis() {
        let bp = algebra.jacobson_p_power(b)?;
        let c = solver.coordinates(&bp).ok_or(Error::NotPClosed)?;
        cols.push(FVector::from_coords(f, c));
    }
    Ok((solver, Matrix::from_columns(f, v.dim(), &cols)))
}

/// Toral elements of an abelian `[p]`-closed subspace: the kernel of `[p] − id`.
pub fn toral_part(algebra: &LieAlgebra, v: &Subspace) -> Result<Torus> {
    if v.is_zero() {
        return Ok(Torus::zero(algebra));
    }
    let f = algebra.field();
    let (_, pm) = p_map_matrix(algebra, v)?;
    let kernel = pm.sub(&Matrix::identity(f, v.dim())).kernel_basis();
    let gens: Vec<FVector> = kernel
        .iter()
        .map(|c| f.combine(algebra.dim(), c.as_slice(), v.basis()))
        .collect();
    Ok(Torus {
        span: algebra.span(&gens),
    })
}

/// The torus inside the `[p]`-closed span of `s, s^[p], …`.
pub fn torus_generated(algebra: &LieAlgebra, s: &FVector) -> Result<Torus> {
    let (iterates, e, _) = iterate_until_periodic(algebra, s)?;
    if e != 0 {
        return Err(Error::NotSemisimple);
    }
    let v = algebra.span(&iterates);
    toral_part(algebra, &v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Consecutive samples without growth before a restart gives up.
    pub patience: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: DEFAULT_SEED,
            restarts: DEFAULT_RESTARTS,
            patience: DEFAULT_PATIENCE,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub torus: Torus,
    /// Restart index that produced the torus.
    pub restart: usize,
    /// Dimension found by every restart, in order.
    pub restart_dims: Vec<usize>,
    /// Whether the returned torus equals its own centralizer.
    pub self_centralizing: bool,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn grow_torus(algebra: &LieAlgebra, patience: usize, rng: &mut ChaCha8Rng) -> Result<Torus> {
    let mut torus = Torus::zero(algebra);
    let mut misses = 0;
    while misses < patience {
        let c = algebra.centralizer(torus.span());
        if c == *torus.span() {
            break;
        }
        let x = c.random_element(rng);
        let s = semisimple_part(algebra, &x)?;
        let (iterates, _, _) = iterate_until_periodic(algebra, &s)?;
        let mut gens = torus.basis().to_vec();
        gens.extend(iterates);
        let v = algebra.span(&gens);
        let candidate = toral_part(algebra, &v)?;
        if candidate.dim() > torus.dim() {
            torus = candidate;
            misses = 0;
        } else {
            misses += 1;
        }
    }
    Ok(torus)
}

/// Greedy randomized search for a torus of maximal dimension. Each restart grows a torus
/// inside successive centralizers; the largest result wins, ties going to the earliest
/// restart. The dimension found is a lower bound for the maximal torus dimension.
pub fn max_torus_search(algebra: &LieAlgebra, config: SearchConfig) -> Result<SearchOutcome> {
    if !algebra.is_restricted() {
        return Err(Error::NoPMap);
    }
    let results: Vec<Result<Torus>> = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(config.seed, r);
            grow_torus(algebra, config.patience.max(1), &mut rng)
        })
        .collect();
    let mut best: Option<(usize, Torus)> = None;
    let mut dims = Vec::with_capacity(results.len());
    for (r, res) in results.into_iter().enumerate() {
        let t = res?;
        dims.push(t.dim());
        if best.as_ref().is_none_or(|(_, b)| t.dim() > b.dim()) {
            best = Some((r, t));
        }
    }
    let (restart, torus) = best.expect("at least one restart");
    let self_centralizing = algebra.centralizer(torus.span()) == *torus.span();
    log::debug!("torus search dims per restart: {dims:?}");
    Ok(SearchOutcome {
        torus,
        restart,
        restart_dims: dims,
        self_centralizing,
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
    fn envelope_of_restricted_algebra_is_itself() {
        let w = build_jacobson_witt(f5(), 1).unwrap();
        let env = p_envelope(&w.algebra, &w.algebra.full_space()).unwrap();
        assert_eq!(env.dim(), 5);
        let sl2 = build_classical(f5(), ClassicalKind::Sl, 2, false).unwrap();
        let e = sl2.span(&[sl2.basis_vector(0)]);
        assert_eq!(p_envelope(&sl2, &e).unwrap().closure, e);
    }

    #[test]
    fn toral_elements() {
        let f = f5();
        let w = build_jacobson_witt(f, 1).unwrap();
        let t = w.times_partial(&w.ring.one_plus_generator(0), 0);
        assert!(is_toral(&w.algebra, &t).unwrap());
        assert!(!is_toral(&w.algebra, &w.element(0, &[0])).unwrap());
        let sl2 = build_classical(f, ClassicalKind::Sl, 2, false).unwrap();
        assert!(is_toral(&sl2, &sl2.basis_vector(1)).unwrap());
    }

    #[test]
    fn semisimple_parts() {
        let f = f5();
        let sl2 = build_classical(f, ClassicalKind::Sl, 2, false).unwrap();
        let (e, h) = (sl2.basis_vector(0), sl2.basis_vector(1));
        assert_eq!(semisimple_part(&sl2, &h).unwrap(), h);
        assert!(semisimple_part(&sl2, &e).unwrap().is_zero());
        let u = f.add_vectors(&h, &e);
        let s = semisimple_part(&sl2, &u).unwrap();
        // brute force: (h+e)^[5] is the matrix 5th power, which is a fixed point here
        let direct = sl2.jacobson_p_power(&u).unwrap();
        assert_eq!(sl2.jacobson_p_power(&direct).unwrap(), direct);
        assert_eq!(s, direct);
        assert_eq!(semisimple_part(&sl2, &s).unwrap(), s);
        let n = f.sub_vectors(&u, &s);
        assert!(sl2.ad_matrix(&n).pow(3).is_zero());
        assert!(sl2.bracket(&s, &n).unwrap().is_zero());
    }

    #[test]
    fn generated_tori() {
        let f = f5();
        let sl2 = build_classical(f, ClassicalKind::Sl, 2, false).unwrap();
        assert_eq!(torus_generated(&sl2, &sl2.basis_vector(1)).unwrap().dim(), 1);
        assert!(matches!(torus_generated(&sl2, &sl2.basis_vector(0)), Err(Error::NotSemisimple)));
        let w = build_jacobson_witt(f, 2).unwrap();
        let t0 = standard_generic_torus(&w).unwrap();
        let s = f.combine(w.algebra.dim(), &[1, 2], t0.basis());
        assert_eq!(torus_generated(&w.algebra, &s).unwrap().dim(), 1);
    }

    #[test]
    fn torus_rejects_non_toral_generators() {
        let f = f5();
        let w = build_jacobson_witt(f, 1).unwrap();
        assert!(matches!(Torus::new(&w.algebra, &[w.element(0, &[0])]), Err(Error::NotToral)));
        let sl2 = build_classical(f, ClassicalKind::Sl, 2, false).unwrap();
        let other = f.add_vectors(&sl2.basis_vector(1), &sl2.basis_vector(0));
        assert!(matches!(
            Torus::new(&sl2, &[sl2.basis_vector(1), other]),
            Err(Error::NotCommuting)
        ));
    }

    #[test]
    fn search_small_witt() {
        let w = build_jacobson_witt(f5(), 1).unwrap();
        let out = max_torus_search(&w.algebra, SearchConfig::default()).unwrap();
        assert_eq!(out.torus.dim(), 1);
        assert!(out.torus.check(&w.algebra).unwrap().passed());
        assert!(out.self_centralizing);
    }

    #[test]
    fn search_is_deterministic() {
        let w = build_jacobson_witt(f5(), 1).unwrap();
        let cfg = SearchConfig {
            seed: 7,
            restarts: 4,
            patience: 4,
        };
        let a = max_torus_search(&w.algebra, cfg).unwrap();
        let b = max_torus_search(&w.algebra, cfg).unwrap();
        assert_eq!(a.torus, b.torus);
        assert_eq!(a.restart_dims, b.restart_dims);
    }
}
