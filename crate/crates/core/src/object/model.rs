use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use super::ObjectLanguage;
use crate::syntax::Name;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot read model file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid model: {0}")]
    Invalid(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    domain: Vec<Name>,
    predicates: BTreeMap<Name, RawPredicate>,
    #[serde(default = "default_object_depth")]
    object_depth: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPredicate {
    dom: Vec<Name>,
    true_at: Vec<Name>,
}

fn default_object_depth() -> u32 {
    2
}

#[derive(Debug, Clone)]
struct Table {
    dom: Vec<Name>,
    truths: BTreeSet<Name>,
}

/// A finite first-order structure: a domain and, per predicate, a nonempty
/// subdomain `X_P` with a truth table on it.
#[derive(Debug, Clone)]
pub struct ObjectModel {
    domain: Vec<Name>,
    tables: BTreeMap<Name, Table>,
    object_depth: u32,
}

impl ObjectModel {
    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let raw: RawModel = serde_json::from_str(text)?;
        Self::build(raw)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    fn build(raw: RawModel) -> Result<Self, ModelError> {
        let invalid = |m: String| Err(ModelError::Invalid(m));
        let domain_set: BTreeSet<&Name> = raw.domain.iter().collect();
        if domain_set.len() != raw.domain.len() {
            return invalid("duplicate domain element".into());
        }
        if raw.predicates.is_empty() {
            return invalid("no predicates".into());
        }
        let mut tables = BTreeMap::new();
        for (p, t) in raw.predicates {
            if t.dom.is_empty() {
                return invalid(format!("predicate {p} has an empty domain"));
            }
            let dom_set: BTreeSet<&Name> = t.dom.iter().collect();
            if dom_set.len() != t.dom.len() {
                return invalid(format!("predicate {p} repeats a domain element"));
            }
            if let Some(x) = t.dom.iter().find(|x| !domain_set.contains(x)) {
                return invalid(format!("predicate {p}: {x} is not in the domain"));
            }
            if let Some(x) = t.true_at.iter().find(|x| !dom_set.contains(x)) {
                return invalid(format!("predicate {p}: true_at element {x} is not in dom"));
            }
            let truths = t.true_at.into_iter().collect();
            tables.insert(p, Table { dom: t.dom, truths });
        }
        Ok(ObjectModel {
            domain: raw.domain,
            tables,
            object_depth: raw.object_depth,
        })
    }

    pub fn domain(&self) -> &[Name] {
        &self.domain
    }
}

impl ObjectLanguage for ObjectModel {
    fn predicates(&self) -> Vec<Name> {
        self.tables.keys().cloned().collect()
    }

    fn domain_of(&self, pred: &Name) -> Option<&[Name]> {
        self.tables.get(pred).map(|t| t.dom.as_slice())
    }

    fn holds(&self, pred: &Name, elem: &Name) -> Option<bool> {
        let t = self.tables.get(pred)?;
        t.dom.contains(elem).then(|| t.truths.contains(elem))
    }

    fn object_depth(&self) -> u32 {
        self.object_depth
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_predicate_domain() {
        let e = ObjectModel::from_json_str(
            r#"{"domain": ["a"], "predicates": {"p": {"dom": [], "true_at": []}}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, ModelError::Invalid(_)));
    }

    #[test]
    fn rejects_truth_outside_dom() {
        let e = ObjectModel::from_json_str(
            r#"{"domain": ["a","b"], "predicates": {"p": {"dom": ["a"], "true_at": ["b"]}}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, ModelError::Invalid(_)));
    }

    #[test]
    fn rejects_bad_names() {
        let e = ObjectModel::from_json_str(
            r#"{"domain": ["a b"], "predicates": {"p": {"dom": ["a b"], "true_at": []}}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, ModelError::Json(_)));
    }

    #[test]
    fn missing_file_names_the_path() {
        let e = ObjectModel::load("/nonexistent/model.json").unwrap_err();
        assert!(e.to_string().contains("/nonexistent/model.json"));
    }

    #[test]
    fn object_depth_defaults_to_two() {
        let m = ObjectModel::from_json_str(
            r#"{"domain": ["a"], "predicates": {"p": {"dom": ["a"], "true_at": ["a"]}}}"#,
        )
        .unwrap();
        assert_eq!(m.object_depth(), 2);
        assert_eq!(
            m.holds(&Name::new("p").unwrap(), &Name::new("a").unwrap()),
            Some(true)
        );
    }
}
