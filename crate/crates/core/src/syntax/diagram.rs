use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::dag::CausalDag;

/// A generating box of `Free(G)`: one output wire, the node's parents as
/// inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub node: String,
    pub inputs: Vec<String>,
    pub output: String,
}

/// The signature `Σ_G`: one generator per node.
pub fn free_signature(dag: &CausalDag) -> Vec<Generator> {
    (0..dag.len())
        .map(|i| Generator {
            node: dag.name(i).to_string(),
            inputs: dag
                .parents(i)
                .iter()
                .map(|&p| dag.name(p).to_string())
                .collect(),
            output: dag.name(i).to_string(),
        })
        .collect()
}

/// A morphism of `Free(G)` in network normal form: one box per node, copy
/// maps fanning each wire out, and every observed node copied to an output.
///
/// Cut nodes keep their box; it is marked as replaced by
/// discard-inputs-then-uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkDiagram {
    dag: CausalDag,
    boxes: Vec<Generator>,
    outputs: Vec<String>,
    cut_set: BTreeSet<String>,
}

pub fn network_diagram(dag: &CausalDag) -> NetworkDiagram {
    NetworkDiagram {
        dag: dag.clone(),
        boxes: free_signature(dag),
        outputs: dag
            .observed()
            .iter()
            .map(|&i| dag.name(i).to_string())
            .collect(),
        cut_set: BTreeSet::new(),
    }
}

/// Diagram surgery at `x`. Idempotent; cuts at distinct nodes commute.
pub fn cut(d: &NetworkDiagram, x: &str) -> Result<NetworkDiagram> {
    d.dag.index_of(x)?;
    let mut out = d.clone();
    out.cut_set.insert(x.to_string());
    Ok(out)
}

/// Structural equality of normal forms.
pub fn diagram_equal(d1: &NetworkDiagram, d2: &NetworkDiagram) -> bool {
    d1 == d2
}

impl NetworkDiagram {
    pub fn dag(&self) -> &CausalDag {
        &self.dag
    }

    pub fn boxes(&self) -> &[Generator] {
        &self.boxes
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn cut_set(&self) -> &BTreeSet<String> {
        &self.cut_set
    }

    pub fn is_cut(&self, i: usize) -> bool {
        self.cut_set.contains(self.dag.name(i))
    }

    /// Wires actually consumed by node `i`'s box: none once it is cut.
    pub fn inputs(&self, i: usize) -> &[usize] {
        if self.is_cut(i) {
            &[]
        } else {
            self.dag.parents(i)
        }
    }

    /// Boxes consuming node `i`'s wire.
    pub fn consumers(&self, i: usize) -> Vec<usize> {
        self.dag
            .children(i)
            .iter()
            .copied()
            .filter(|&c| !self.is_cut(c))
            .collect()
    }

    pub(crate) fn index_checked(&self, x: &str) -> Result<usize> {
        self.dag
            .index_of(x)
            .map_err(|_| Error::UnknownVariable(x.to_string()))
    }
}
