//! JSON model files: `{"vertices": [...], "facets": [[...]], "weights": {...}}`.

use std::collections::BTreeMap;

use hmuni_core::{Error, HMPair, Result, SimplicialComplex};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
    /// Missing vertices get two states.
    #[serde(default)]
    pub weights: BTreeMap<String, u64>,
}

/// A parsed model plus the diagnostics produced while normalising it.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub pair: HMPair,
    pub warnings: Vec<String>,
}

pub fn parse_model(text: &str) -> Result<Loaded> {
    let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("model JSON: {e}")))?;
    spec.into_pair()
}

impl ModelSpec {
    pub fn into_pair(self) -> Result<Loaded> {
        let mut warnings = Vec::new();
        for v in self.weights.keys() {
            if !self.vertices.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        let complex = SimplicialComplex::new(&self.vertices, &self.facets)?;
        let kept = complex.facets();
        let mut reported = Vec::new();
        for f in &self.facets {
            let mut sorted = f.clone();
            sorted.sort_by_key(|v| self.vertices.iter().position(|u| u == v));
            sorted.dedup();
            let is_kept = kept.iter().any(|k| {
                let mut k = k.clone();
                k.sort_by_key(|v| self.vertices.iter().position(|u| u == v));
                k == sorted
            });
            if !is_kept && !reported.contains(&sorted) {
                warnings.push(format!("dropped non-maximal facet [{}]", sorted.join(",")));
                reported.push(sorted);
            }
        }
        let weights = self
            .vertices
            .iter()
            .map(|v| self.weights.get(v).copied().unwrap_or(2))
            .collect();
        let pair = HMPair::new(complex, weights)?;
        Ok(Loaded { pair, warnings })
    }

    pub fn from_pair(pair: &HMPair) -> Self {
        ModelSpec {
            vertices: pair.ground().to_vec(),
            facets: pair.complex().facets(),
            weights: pair.weight_map(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_default_to_two() {
        let m = parse_model(r#"{"vertices":["1","2","3"],"facets":[["1","2"],["2","3"]],"weights":{"1":3}}"#).unwrap();
        assert_eq!(m.pair.weights(), &[3, 2, 2]);
        assert!(m.warnings.is_empty());
    }

    #[test]
    fn non_maximal_facets_are_dropped_with_a_warning() {
        let m = parse_model(r#"{"vertices":["1","2"],"facets":[["1","2"],["1"]]}"#).unwrap();
        assert_eq!(m.pair.complex().facets(), vec![vec!["1".to_string(), "2".to_string()]]);
        assert_eq!(m.warnings.len(), 1);
    }

    #[test]
    fn bad_models_are_rejected() {
        assert!(matches!(
            parse_model(r#"{"vertices":["1"],"facets":[["1"]],"weights":{"1":1}}"#),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            parse_model(r#"{"vertices":["1"],"facets":[["2"]]}"#),
            Err(Error::UnknownVertex(_))
        ));
        assert!(parse_model("{").is_err());
    }

    #[test]
    fn round_trip() {
        let m = parse_model(r#"{"vertices":["a","b"],"facets":[["a"],["b"]],"weights":{"b":4}}"#).unwrap();
        let again = parse_model(&ModelSpec::from_pair(&m.pair).to_json()).unwrap();
        assert_eq!(again.pair, m.pair);
    }
}
