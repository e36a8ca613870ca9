//! Named algebra families: `w-1-1`, `w-n-1`, `w-m-n`, `sl-n`, `gl-n`, `s-n-1`, `h-2r-1`.

use std::collections::BTreeMap;

use serde_json::json;

use crate::cartan::{
    build_classical, build_hamiltonian, build_jacobson_witt_with_cap, build_special, build_witt_with_cap,
    ClassicalKind, GradedTag, JacobsonWitt, DEFAULT_DIM_CAP,
};
use crate::error::{Error, Result};
use crate::ffla::{FVector, PrimeField};
use crate::io::Meta;
use crate::liecore::LieAlgebra;
use crate::restrict::Torus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `W(n;1)` in the truncated realization.
    JacobsonWitt { n: usize },
    /// `W(m; n̄)` in the divided power realization.
    GeneralizedWitt { heights: Vec<u32> },
    Classical { kind: ClassicalKind, n: usize },
    Special { n: usize },
    Hamiltonian { two_r: usize },
}

pub const FAMILY_NAMES: [&str; 7] = ["w-1-1", "w-n-1", "w-m-n", "sl-n", "gl-n", "s-n-1", "h-2r-1"];

/// Raw parameters as they arrive from the command line.
#[derive(Clone, Debug, Default)]
pub struct FamilyParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub n_vec: Option<Vec<u32>>,
}

fn need(v: Option<usize>, name: &str, family: &str) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidParameters(format!("{family} needs --{name}")))
}

impl Family {
    pub fn parse(name: &str, params: &FamilyParams) -> Result<Family> {
        match name {
            "w-1-1" => Ok(Family::JacobsonWitt { n: 1 }),
            "w-n-1" => Ok(Family::JacobsonWitt {
                n: need(params.n, "n", name)?,
            }),
            "w-m-n" => {
                let heights = params
                    .n_vec
                    .clone()
                    .ok_or_else(|| Error::InvalidParameters("w-m-n needs --n-vec".into()))?;
                if let Some(m) = params.m {
                    if m != heights.len() {
                        return Err(Error::InvalidParameters(format!(
                            "--m {m} disagrees with --n-vec of length {}",
                            heights.len()
                        )));
                    }
                }
                Ok(Family::GeneralizedWitt { heights })
            }
            "sl-n" | "sl" => Ok(Family::Classical {
                kind: ClassicalKind::Sl,
                n: need(params.n, "n", name)?,
            }),
            "gl-n" | "gl" => Ok(Family::Classical {
                kind: ClassicalKind::Gl,
                n: need(params.n, "n", name)?,
            }),
            "s-n-1" => Ok(Family::Special {
                n: need(params.n, "n", name)?,
            }),
            "h-2r-1" => Ok(Family::Hamiltonian {
                two_r: need(params.n, "n", name)?,
            }),
            other => Err(Error::InvalidParameters(format!(
                "unknown family {other}; expected one of {}",
                FAMILY_NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::JacobsonWitt { n: 1 } => "w-1-1",
            Family::JacobsonWitt { .. } => "w-n-1",
            Family::GeneralizedWitt { .. } => "w-m-n",
            Family::Classical {
                kind: ClassicalKind::Sl, ..
            } => "sl-n",
            Family::Classical { .. } => "gl-n",
            Family::Special { .. } => "s-n-1",
            Family::Hamiltonian { .. } => "h-2r-1",
        }
    }

    pub fn params_json(&self) -> BTreeMap<String, serde_json::Value> {
        let mut m = BTreeMap::new();
        match self {
            Family::JacobsonWitt { n } | Family::Classical { n, .. } | Family::Special { n } => {
                m.insert("n".into(), json!(n));
            }
            Family::GeneralizedWitt { heights } => {
                m.insert("m".into(), json!(heights.len()));
                m.insert("n_vec".into(), json!(heights));
            }
            Family::Hamiltonian { two_r } => {
                m.insert("n".into(), json!(two_r));
            }
        }
        m
    }
}

/// A constructed catalog member.
#[derive(Clone, Debug)]
pub struct Built {
    pub family: Family,
    pub algebra: LieAlgebra,
    pub grading: Option<GradedTag>,
    /// Present for `W(n;1)`.
    pub witt: Option<JacobsonWitt>,
}

impl Built {
    pub fn meta(&self) -> Meta {
        Meta {
            family: self.family.name().into(),
            params: self.family.params_json(),
        }
    }

    /// `t_0` for `W(n;1)`, or the diagonal torus for `sl_n` / `gl_n`.
    pub fn standard_torus(&self) -> Result<Torus> {
        if let Some(w) = &self.witt {
            return crate::cartan::standard_generic_torus(w);
        }
        match self.family {
            Family::Classical { kind, n } => {
                let d = self.algebra.dim();
                let gens: Vec<FVector> = match kind {
                    ClassicalKind::Gl => (0..n).map(|i| FVector::unit(d, i * n + i)).collect(),
                    ClassicalKind::Sl => {
                        let off = n * (n - 1) / 2;
                        (0..n - 1).map(|k| FVector::unit(d, off + k)).collect()
                    }
                };
                Torus::new(&self.algebra, &gens)
            }
            _ => Err(Error::InvalidParameters(format!(
                "no standard torus is defined for {}; use a searched torus",
                self.family.name()
            ))),
        }
    }
}

pub fn build(family: &Family, field: PrimeField, allow_center: bool) -> Result<Built> {
    build_with_cap(family, field, allow_center, DEFAULT_DIM_CAP)
}

pub fn build_with_cap(family: &Family, field: PrimeField, allow_center: bool, cap: usize) -> Result<Built> {
    let (algebra, grading, witt) = match family {
        Family::JacobsonWitt { n } => {
            let w = build_jacobson_witt_with_cap(field, *n, cap)?;
            let g = w.grading();
            (w.algebra.clone(), Some(g), Some(w))
        }
        Family::GeneralizedWitt { heights } => {
            let w = build_witt_with_cap(field, heights, cap)?;
            let g = w.grading();
            (w.algebra, Some(g), None)
        }
        Family::Classical { kind, n } => (build_classical(field, *kind, *n, allow_center)?, None, None),
        Family::Special { n } => (build_special(field, *n)?, None, None),
        Family::Hamiltonian { two_r } => (build_hamiltonian(field, *two_r)?, None, None),
    };
    if algebra.dim() > cap {
        return Err(Error::DimensionCap {
            dim: algebra.dim(),
            cap,
        });
    }
    Ok(Built {
        family: family.clone(),
        algebra,
        grading,
        witt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let f = PrimeField::new(5).unwrap();
        let p = FamilyParams {
            n: Some(2),
            ..Default::default()
        };
        assert_eq!(build(&Family::parse("w-n-1", &p).unwrap(), f, false).unwrap().algebra.dim(), 50);
        assert_eq!(build(&Family::parse("sl", &p).unwrap(), f, false).unwrap().algebra.dim(), 3);
        let q = FamilyParams {
            m: Some(1),
            n_vec: Some(vec![2]),
            ..Default::default()
        };
        let b = build(&Family::parse("w-m-n", &q).unwrap(), f, false).unwrap();
        assert_eq!(b.algebra.dim(), 25);
        assert!(!b.algebra.is_restricted());
        assert!(Family::parse("k-3-1", &p).is_err());
        assert!(Family::parse("w-n-1", &FamilyParams::default()).is_err());
    }

    #[test]
    fn standard_tori() {
        let f = PrimeField::new(5).unwrap();
        let p = FamilyParams {
            n: Some(3),
            ..Default::default()
        };
        let sl3 = build(&Family::parse("sl-n", &p).unwrap(), f, false).unwrap();
        assert_eq!(sl3.standard_torus().unwrap().dim(), 2);
        let gl3 = build(&Family::parse("gl-n", &p).unwrap(), f, false).unwrap();
        assert_eq!(gl3.standard_torus().unwrap().dim(), 3);
    }
}
