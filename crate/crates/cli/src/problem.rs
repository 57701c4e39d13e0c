//! The problem file: two vertex lists over one finite alphabet.
//!
//! ```json
//! {"alphabet_size": 2, "P": [[0.9, 0.1], [0.7, 0.3]], "Q": [[0.4, 0.6]]}
//! ```
//!
//! An optional `"labels"` object may name the vertices:
//! `{"P": ["a", "b"], "Q": ["c"]}`.

use std::path::Path;

use advseq_core::defaults::{MIN_MASS, SUM_TOL};
use advseq_core::prob::{ConvexSet, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexLabels {
    #[serde(rename = "P", default)]
    pub p: Vec<String>,
    #[serde(rename = "Q", default)]
    pub q: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub alphabet_size: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<VertexLabels>,
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn check_vertex(name: &str, i: usize, v: &[f64], k: usize) -> CliResult<()> {
    if v.len() != k {
        return Err(invalid(format!("{name}[{i}]: expected {k} entries (alphabet_size), found {}", v.len())));
    }
    for (x, &m) in v.iter().enumerate() {
        if !m.is_finite() {
            return Err(invalid(format!("{name}[{i}][{x}]: mass {m} is not finite")));
        }
        if m < MIN_MASS {
            return Err(invalid(format!(
                "{name}[{i}][{x}]: mass {m} is below {MIN_MASS:e}; every distribution must give every \
                 symbol positive mass (P and Q must be mutually absolutely continuous)"
            )));
        }
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(invalid(format!("{name}[{i}]: entries sum to {sum}, not 1 (tolerance {SUM_TOL:e})")));
    }
    Ok(())
}

impl ProblemFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("problem file: {e}")))
    }

    pub fn validate(&self) -> CliResult<()> {
        let k = self.alphabet_size;
        if k < 2 {
            return Err(invalid(format!("alphabet_size: must be >= 2, found {k}")));
        }
        for (name, list) in [("P", &self.p), ("Q", &self.q)] {
            if list.is_empty() {
                return Err(invalid(format!("{name}: vertex list is empty")));
            }
            for (i, v) in list.iter().enumerate() {
                check_vertex(name, i, v, k)?;
            }
        }
        if let Some(l) = &self.labels {
            for (name, labels, list) in [("P", &l.p, &self.p), ("Q", &l.q, &self.q)] {
                if !labels.is_empty() && labels.len() != list.len() {
                    return Err(invalid(format!("labels.{name}: {} labels for {} vertices", labels.len(), list.len())));
                }
            }
        }
        Ok(())
    }

    /// Validated sets `(P, Q)`.
    pub fn to_sets(&self) -> CliResult<(ConvexSet, ConvexSet)> {
        self.validate()?;
        let set = |name: &str, list: &[Vec<f64>]| -> CliResult<ConvexSet> {
            let vs = list
                .iter()
                .enumerate()
                .map(|(i, v)| Distribution::new(v.clone()).map_err(|e| invalid(format!("{name}[{i}]: {e}"))))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(ConvexSet::new(vs)?)
        };
        Ok((set("P", &self.p)?, set("Q", &self.q)?))
    }

    pub fn from_sets(p: &ConvexSet, q: &ConvexSet) -> Self {
        let rows = |s: &ConvexSet| s.vertices().iter().map(|d| d.probs().to_vec()).collect();
        ProblemFile { alphabet_size: p.alphabet().size(), p: rows(p), q: rows(q), labels: None }
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Reads and validates a problem file.
pub fn load_problem(path: &Path) -> CliResult<(ConvexSet, ConvexSet)> {
    let text = read_text(path)?;
    ProblemFile::parse(&text).and_then(|f| f.to_sets()).map_err(|e| match e {
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_two_singletons() {
        let f = ProblemFile::parse(r#"{"alphabet_size": 2, "P": [[0.8, 0.2]], "Q": [[0.2, 0.8]]}"#).unwrap();
        let (p, q) = f.to_sets().unwrap();
        assert_eq!(p.alphabet().size(), 2);
        assert_eq!(q.num_vertices(), 1);
    }

    #[test]
    fn rejects_bad_sum() {
        let f = ProblemFile::parse(r#"{"alphabet_size": 2, "P": [[0.78, 0.2]], "Q": [[0.2, 0.8]]}"#).unwrap();
        let e = f.to_sets().unwrap_err().to_string();
        assert!(e.contains("P[0]") && e.contains("sum"), "{e}");
    }

    #[test]
    fn rejects_zero_mass() {
        let f = ProblemFile::parse(r#"{"alphabet_size": 2, "P": [[1.0, 0.0]], "Q": [[0.2, 0.8]]}"#).unwrap();
        let e = f.to_sets().unwrap_err().to_string();
        assert!(e.contains("P[0][1]") && e.contains("absolutely continuous"), "{e}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = ProblemFile::parse("{\"alphabet_size\": 2,\n \"P\": [[0.5, 0.5]]\n}").unwrap_err().to_string();
        assert!(e.contains("Q") && e.contains("line"), "{e}");
        let e =
            ProblemFile::parse(r#"{"alphabet_size": 2, "P": [], "Q": [[0.5,0.5]], "R": 1}"#).unwrap_err().to_string();
        assert!(e.contains("R"), "{e}");
    }

    #[test]
    fn rejects_shape_problems() {
        for (text, needle) in [
            (r#"{"alphabet_size": 2, "P": [], "Q": [[0.2, 0.8]]}"#, "P: vertex list is empty"),
            (r#"{"alphabet_size": 3, "P": [[0.5, 0.5]], "Q": [[0.2, 0.8]]}"#, "expected 3 entries"),
            (r#"{"alphabet_size": 1, "P": [[1.0]], "Q": [[1.0]]}"#, "alphabet_size"),
            (r#"{"alphabet_size": 2, "P": [[0.5, 0.5]], "Q": [[0.2, 0.8]], "labels": {"P": ["a", "b"]}}"#, "labels.P"),
        ] {
            let e = ProblemFile::parse(text).unwrap().to_sets().unwrap_err().to_string();
            assert!(e.contains(needle), "{e}");
        }
    }
}
