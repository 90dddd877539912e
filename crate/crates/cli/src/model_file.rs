//! The JSON model format.
//!
//! ```json
//! {
//!   "variables": [{"name": "H", "cardinality": 2, "latent": true}, ...],
//!   "edges": [["H", "S"], ...],
//!   "cpts": {"S": [[1.0, 0.0], [0.0, 1.0]], ...},
//!   "joint": [0.5, 0.1, ...]
//! }
//! ```
//!
//! A table is a list of columns, one per parent assignment in mixed-radix
//! order over the parents in declaration order. The joint is over the
//! observed variables in declaration order.

use std::collections::BTreeMap;
use std::path::Path;

use causal_surgery::semantics::validate_with_tol;
use causal_surgery::{
    evaluate, network_diagram, BayesNet, CausalDag, Interpretation, Matrix, NodeDecl, State,
    Violation,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDecl {
    pub name: String,
    pub cardinality: usize,
    #[serde(default)]
    pub latent: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub variables: Vec<VariableDecl>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub cpts: Option<BTreeMap<String, Vec<Vec<f64>>>>,
    #[serde(default)]
    pub joint: Option<Vec<f64>>,
}

pub fn read(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if file.cpts.is_some() && file.joint.is_some() {
        return Err(CliError::Parse(format!(
            "{}: `cpts` and `joint` are mutually exclusive",
            path.display()
        )));
    }
    Ok(file)
}

impl ModelFile {
    pub fn dag(&self) -> Result<CausalDag, CliError> {
        let nodes = self
            .variables
            .iter()
            .map(|v| NodeDecl {
                name: v.name.clone(),
                card: v.cardinality,
                latent: v.latent,
            })
            .collect();
        Ok(CausalDag::new(nodes, self.edges.clone())?)
    }

    /// Every problem with the tables, or the model.
    pub fn model(&self, dag: &CausalDag, tol: f64) -> Result<BayesNet, Vec<Violation>> {
        let cpts = self.cpts.as_ref().ok_or_else(Vec::new)?;
        let mut violations = Vec::new();
        let mut interp = Interpretation::new();
        for (node, columns) in cpts {
            let Ok(i) = dag.index_of(node) else {
                violations.push(Violation::UnexpectedCpt { node: node.clone() });
                continue;
            };
            let (dom, cod) = (dag.space_of(dag.parents(i)), dag.space_of(&[i]));
            let ragged = columns.iter().any(|c| c.len() != cod.dim());
            if columns.len() != dom.dim() || ragged {
                let lens: Vec<usize> = columns.iter().map(Vec::len).collect();
                violations.push(Violation::ShapeViolation {
                    node: node.clone(),
                    expected: format!("{} columns of length {}", dom.dim(), cod.dim()),
                    found: format!("{} columns of lengths {lens:?}", columns.len()),
                });
                continue;
            }
            for (c, column) in columns.iter().enumerate() {
                if column.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    violations.push(Violation::StochasticityViolation {
                        node: node.clone(),
                        column: c,
                        sum: column.iter().sum(),
                    });
                }
            }
            let m = Matrix::from_fn(dom, cod, |r, c| columns[c][r]);
            interp.insert(node.as_str(), m);
        }
        let model = BayesNet {
            dag: dag.clone(),
            interp,
        };
        let more: Vec<Violation> = validate_with_tol(&model, tol)
            .into_iter()
            .filter(|v| !violations.iter().any(|w| same_column(v, w)))
            .collect();
        violations.extend(more);
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(violations)
        }
    }

    /// The model, for commands that need tables.
    pub fn require_model(&self, dag: &CausalDag, tol: f64) -> Result<BayesNet, CliError> {
        if self.cpts.is_none() {
            return Err(CliError::Parse("this command needs `cpts`".into()));
        }
        self.model(dag, tol).map_err(|v| {
            let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
            CliError::Invalid(lines.join("\n"))
        })
    }

    /// The observed joint, given directly or evaluated from the tables.
    pub fn observed_joint(&self, dag: &CausalDag, tol: f64) -> Result<State, CliError> {
        match &self.joint {
            Some(probs) => Ok(State::with_tol(dag.observed_space(), probs.clone(), tol)?),
            None if self.cpts.is_some() => {
                let model = self.require_model(dag, tol)?;
                Ok(evaluate(&network_diagram(dag), &model)?)
            }
            None => Err(CliError::Parse(
                "file has neither `cpts` nor `joint`".into(),
            )),
        }
    }
}

fn same_column(a: &Violation, b: &Violation) -> bool {
    match (a, b) {
        (
            Violation::StochasticityViolation { node, column, .. },
            Violation::StochasticityViolation {
                node: n2,
                column: c2,
                ..
            },
        ) => node == n2 && column == c2,
        _ => a == b,
    }
}
