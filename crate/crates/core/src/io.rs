//! JSON serialization of algebras.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FVector, PrimeField};
use crate::liecore::{LieAlgebra, SparseVector};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

/// `{p, dim, labels, sc, pmap, meta}` where `sc` lists `[i, j, [[k, c], …]]` for every
/// ordered pair with a nonzero bracket, sorted by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub p: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    pub sc: Vec<(usize, usize, SparseVector)>,
    pub pmap: Option<Vec<FVector>>,
    #[serde(default)]
    pub meta: Meta,
}

impl AlgebraFile {
    pub fn from_algebra(algebra: &LieAlgebra, meta: Meta) -> Self {
        let d = algebra.dim();
        let mut sc = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let s = algebra.structure(i, j);
                if !s.is_empty() {
                    sc.push((i, j, s.to_vec()));
                }
            }
        }
        AlgebraFile {
            p: algebra.field().p(),
            dim: d,
            labels: algebra.labels().to_vec(),
            sc,
            pmap: algebra.pmap().map(<[FVector]>::to_vec),
            meta,
        }
    }

    /// Rebuilds the algebra without validating it.
    pub fn to_algebra_unchecked(&self, allow_small_prime: bool) -> Result<LieAlgebra> {
        let field = if allow_small_prime {
            PrimeField::with_small_prime_override(self.p)?
        } else {
            PrimeField::new(self.p)?
        };
        if self.labels.len() != self.dim {
            return Err(Error::Format(format!("{} labels for dimension {}", self.labels.len(), self.dim)));
        }
        if let Some(pm) = &self.pmap {
            if pm.iter().flat_map(|v| v.as_slice()).any(|&c| c >= self.p) {
                return Err(Error::Format("p-map entry not reduced".into()));
            }
        }
        if self.sc.iter().flat_map(|(_, _, v)| v).any(|&(_, c)| c >= self.p || c == 0) {
            return Err(Error::Format("structure constant not a reduced nonzero scalar".into()));
        }
        LieAlgebra::from_entries(field, self.labels.clone(), self.sc.clone(), self.pmap.clone())
    }

    /// Rebuilds the algebra and checks every axiom.
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let alg = self.to_algebra_unchecked(false)?;
        let report = alg.validate();
        if !report.is_valid() {
            return Err(Error::Format(format!("{} axiom violations, first {:?}", report.violations.len(), report.violations[0])));
        }
        Ok(alg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_classical, build_jacobson_witt, build_witt, ClassicalKind};

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let f = f5();
        let algebras = [
            build_jacobson_witt(f, 1).unwrap().algebra,
            build_witt(f, &[2]).unwrap().algebra,
            build_classical(f, ClassicalKind::Sl, 2, false).unwrap(),
        ];
        for a in algebras {
            let file = AlgebraFile::from_algebra(&a, Meta::default());
            let json = file.to_json();
            let back = AlgebraFile::from_json(&json).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_json(), json);
            assert_eq!(back.to_algebra().unwrap(), a);
        }
    }

    #[test]
    fn pmap_null_for_nonrestricted() {
        let f = f5();
        let file = AlgebraFile::from_algebra(&build_witt(f, &[2]).unwrap().algebra, Meta::default());
        let v: serde_json::Value = serde_json::from_str(&file.to_json()).unwrap();
        assert!(v["pmap"].is_null());
        assert_eq!(v["dim"], 25);
    }

    #[test]
    fn corrupted_file_rejected() {
        let f = f5();
        let sl2 = build_classical(f, ClassicalKind::Sl, 2, false).unwrap();
        let mut file = AlgebraFile::from_algebra(&sl2, Meta::default());
        // drop one entry: [e, f] = h
        file.sc.retain(|(i, j, _)| !(*i == 0 && *j == 2));
        assert!(matches!(file.to_algebra(), Err(Error::Format(_))));
        assert!(AlgebraFile::from_json("{\"p\": 5}").is_err());
    }
}
