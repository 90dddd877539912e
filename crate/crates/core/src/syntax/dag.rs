use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::finstoch::{Var, VarSpace};

/// A vertex of the causal graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeDecl {
    pub name: String,
    pub card: usize,
    pub latent: bool,
}

impl NodeDecl {
    pub fn observed(name: impl Into<String>, card: usize) -> Self {
        NodeDecl {
            name: name.into(),
            card,
            latent: false,
        }
    }

    pub fn latent(name: impl Into<String>, card: usize) -> Self {
        NodeDecl {
            name: name.into(),
            card,
            latent: true,
        }
    }
}

/// A validated directed acyclic graph with observed/latent flags.
///
/// Parent and child lists are kept in declaration order, which fixes the
/// input order of every generator and hence the column layout of its CPT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalDag {
    nodes: Vec<NodeDecl>,
    edges: Vec<(String, String)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl CausalDag {
    pub fn new(nodes: Vec<NodeDecl>, edges: Vec<(String, String)>) -> Result<Self> {
        for (i, n) in nodes.iter().enumerate() {
            if n.card == 0 {
                return Err(Error::ZeroCardinality(n.name.clone()));
            }
            if nodes[..i].iter().any(|m| m.name == n.name) {
                return Err(Error::DuplicateVariable(n.name.clone()));
            }
        }
        let index = |name: &str| {
            nodes
                .iter()
                .position(|n| n.name == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let mut parents = vec![Vec::new(); nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        for (p, c) in &edges {
            let (pi, ci) = (index(p)?, index(c)?);
            if pi == ci {
                return Err(Error::SelfLoop(p.clone()));
            }
            if !parents[ci].contains(&pi) {
                parents[ci].push(pi);
                children[pi].push(ci);
            }
        }
        parents.iter_mut().for_each(|v| v.sort_unstable());
        children.iter_mut().for_each(|v| v.sort_unstable());

        // Kahn's algorithm, smallest declaration index first.
        let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..nodes.len()).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(nodes.len());
        while let Some(i) = ready.pop_first() {
            topo.push(i);
            for &c in &children[i] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if topo.len() != nodes.len() {
            let stuck = (0..nodes.len())
                .filter(|&i| indegree[i] > 0)
                .map(|i| nodes[i].name.clone())
                .collect();
            return Err(Error::CycleDetected(stuck));
        }
        Ok(CausalDag {
            nodes,
            edges,
            parents,
            children,
            topo,
        })
    }

    /// Shorthand used heavily in tests: `(name, card, latent)` triples and
    /// `(parent, child)` pairs.
    pub fn build(nodes: &[(&str, usize, bool)], edges: &[(&str, &str)]) -> Result<Self> {
        Self::new(
            nodes
                .iter()
                .map(|&(n, c, l)| NodeDecl {
                    name: n.to_string(),
                    card: c,
                    latent: l,
                })
                .collect(),
            edges
                .iter()
                .map(|&(p, c)| (p.to_string(), c.to_string()))
                .collect(),
        )
    }

    pub fn nodes(&self) -> &[NodeDecl] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &NodeDecl {
        &self.nodes[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.nodes[i].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn is_latent(&self, i: usize) -> bool {
        self.nodes[i].latent
    }

    /// A fixed topological order (Kahn, ties broken by declaration order).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Observed node indices in declaration order.
    pub fn observed(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| !self.nodes[i].latent)
            .collect()
    }

    pub fn latents(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].latent)
            .collect()
    }

    pub fn space_of(&self, indices: &[usize]) -> VarSpace {
        VarSpace::new(
            indices
                .iter()
                .map(|&i| Var::new(self.nodes[i].name.clone(), self.nodes[i].card))
                .collect(),
        )
        .expect("dag node names are unique")
    }

    /// The observed variables as an object of `Stoch`, in declaration order.
    pub fn observed_space(&self) -> VarSpace {
        self.space_of(&self.observed())
    }

    /// Nodes reachable from `start` along `next`, excluding `start` itself.
    pub(crate) fn reach(&self, start: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue: VecDeque<usize> = next(start).into();
        while let Some(i) = queue.pop_front() {
            if !std::mem::replace(&mut seen[i], true) {
                queue.extend(next(i));
            }
        }
        seen
    }

    pub fn descendants(&self, i: usize) -> Vec<bool> {
        self.reach(i, |j| self.children[j].clone())
    }

    pub fn ancestors(&self, i: usize) -> Vec<bool> {
        self.reach(i, |j| self.parents[j].clone())
    }
}
