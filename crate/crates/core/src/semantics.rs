//! Interpretations of network diagrams as stochastic matrices.
//!
//! A [`Model`] assigns a conditional probability table to every node of a
//! DAG; evaluating a diagram multiplies the tables in topological order and
//! sums out latent variables, which is the functor `Free(G) → Stoch` applied
//! to the diagram.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::finstoch::{marginalize, permute_state, JointState, RMatrix, VarSpace};
use crate::inference::disintegrate;
use crate::scalar::Scalar;
use crate::syntax::{cut, network_diagram, CausalDag, NetworkDiagram};

/// Default cap on the number of entries of the live joint during evaluation.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

/// Node name → table with domain the parents (declaration order) and
/// codomain the node.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Interpretation<T> {
    pub cpts: BTreeMap<String, RMatrix<T>>,
}

impl<T: Scalar> Interpretation<T> {
    pub fn new() -> Self {
        Interpretation {
            cpts: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, node: impl Into<String>, cpt: RMatrix<T>) {
        self.cpts.insert(node.into(), cpt);
    }
}

/// A Bayesian network: a DAG with an interpretation of each generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<T> {
    pub dag: CausalDag,
    pub interp: Interpretation<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MissingCpt {
        node: String,
    },
    UnexpectedCpt {
        node: String,
    },
    ShapeViolation {
        node: String,
        expected: String,
        found: String,
    },
    StochasticityViolation {
        node: String,
        column: usize,
        sum: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingCpt { node } => write!(f, "MissingCpt: no table for `{node}`"),
            Violation::UnexpectedCpt { node } => {
                write!(f, "UnexpectedCpt: `{node}` is not a node of the graph")
            }
            Violation::ShapeViolation {
                node,
                expected,
                found,
            } => write!(
                f,
                "ShapeViolation: table for `{node}` has shape {found}, expected {expected}"
            ),
            Violation::StochasticityViolation { node, column, sum } => write!(
                f,
                "StochasticityViolation: column {column} of `{node}` sums to {sum}"
            ),
        }
    }
}

impl<T: Scalar> Model<T> {
    /// Build and validate.
    pub fn new(dag: CausalDag, interp: Interpretation<T>) -> Result<Self> {
        let m = Model { dag, interp };
        let v = validate(&m);
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub fn cpt(&self, node: &str) -> Option<&RMatrix<T>> {
        self.interp.cpts.get(node)
    }
}

pub fn validate<T: Scalar>(m: &Model<T>) -> Vec<Violation> {
    validate_with_tol(m, T::stoch_tol())
}

pub fn validate_with_tol<T: Scalar>(m: &Model<T>, tol: T) -> Vec<Violation> {
    let dag = &m.dag;
    let mut out = Vec::new();
    for i in 0..dag.len() {
        let name = dag.name(i);
        let Some(cpt) = m.interp.cpts.get(name) else {
            out.push(Violation::MissingCpt {
                node: name.to_string(),
            });
            continue;
        };
        let dom = dag.space_of(dag.parents(i));
        let cod = dag.space_of(&[i]);
        if !cpt.dom().same_shape(&dom) || !cpt.cod().same_shape(&cod) {
            out.push(Violation::ShapeViolation {
                node: name.to_string(),
                expected: format!("{dom} → {cod}"),
                found: format!("{} → {}", cpt.dom(), cpt.cod()),
            });
            continue;
        }
        for (column, s) in cpt.column_sums().into_iter().enumerate() {
            if (s - T::one()).abs() > tol {
                out.push(Violation::StochasticityViolation {
                    node: name.to_string(),
                    column,
                    sum: s.to_f64_lossy(),
                });
            }
        }
    }
    for node in m.interp.cpts.keys() {
        if dag.index_of(node).is_err() {
            out.push(Violation::UnexpectedCpt { node: node.clone() });
        }
    }
    out
}

/// A dense table over a list of live nodes, first node most significant.
struct Factor<T> {
    vars: Vec<usize>,
    cards: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> Factor<T> {
    fn unit() -> Self {
        Factor {
            vars: Vec::new(),
            cards: Vec::new(),
            data: vec![T::one()],
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.cards.len()];
        for i in (0..self.cards.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.cards[i + 1];
        }
        s
    }

    /// Append `node` with conditional weight `weight(value, parent_column)`.
    fn extend(
        &self,
        node: usize,
        card: usize,
        parents: &[(usize, usize)],
        weight: impl Fn(usize, usize) -> T,
    ) -> Self {
        let strides = self.strides();
        // (stride in this factor, radix in the parent column) per parent
        let lookup: Vec<(usize, usize, usize)> = parents
            .iter()
            .map(|&(p, pcard)| {
                let pos = self
                    .vars
                    .iter()
                    .position(|&v| v == p)
                    .expect("parent is live");
                (strides[pos], self.cards[pos], pcard)
            })
            .collect();
        let mut data = Vec::with_capacity(self.data.len() * card);
        for (idx, &base) in self.data.iter().enumerate() {
            let col = lookup.iter().fold(0, |acc, &(stride, c, pcard)| {
                acc * pcard + (idx / stride) % c
            });
            for v in 0..card {
                data.push(if base == T::zero() {
                    T::zero()
                } else {
                    base * weight(v, col)
                });
            }
        }
        let mut vars = self.vars.clone();
        vars.push(node);
        let mut cards = self.cards.clone();
        cards.push(card);
        Factor { vars, cards, data }
    }

    fn sum_out(&self, node: usize) -> Self {
        let pos = self
            .vars
            .iter()
            .position(|&v| v == node)
            .expect("node is live");
        let stride = self.strides()[pos];
        let card = self.cards[pos];
        let outer = self.data.len() / (stride * card);
        let mut data = vec![T::zero(); outer * stride];
        for o in 0..outer {
            for k in 0..card {
                for s in 0..stride {
                    let slot = &mut data[o * stride + s];
                    *slot = *slot + self.data[(o * card + k) * stride + s];
                }
            }
        }
        let mut vars = self.vars.clone();
        vars.remove(pos);
        let mut cards = self.cards.clone();
        cards.remove(pos);
        Factor { vars, cards, data }
    }
}

/// Evaluate `d` under `m`: the joint state over the observed outputs, in
/// declaration order.
pub fn evaluate<T: Scalar>(d: &NetworkDiagram, m: &Model<T>) -> Result<JointState<T>> {
    evaluate_in_order(d, m, d.dag().topological_order(), DEFAULT_STATE_CAP)
}

/// [`evaluate`] with an explicit topological order and live-state cap.
pub fn evaluate_in_order<T: Scalar>(
    d: &NetworkDiagram,
    m: &Model<T>,
    order: &[usize],
    cap: usize,
) -> Result<JointState<T>> {
    let dag = d.dag();
    if dag != &m.dag {
        return Err(Error::DimensionMismatch(
            "diagram and model are built on different graphs".into(),
        ));
    }
    let violations = validate(m);
    if !violations.is_empty() {
        return Err(Error::InvalidModel(violations));
    }
    let n = dag.len();
    let mut done = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidPermutation(
            "order must list every node once".into(),
        ));
    }
    for &i in order {
        if i >= n || done[i] || d.inputs(i).iter().any(|&p| !done[p]) {
            return Err(Error::InvalidPermutation(format!(
                "{order:?} is not a topological order"
            )));
        }
        done[i] = true;
    }
    done.iter_mut().for_each(|b| *b = false);

    let mut live = Factor::unit();
    for &i in order {
        let card = dag.node(i).card;
        let size = live.data.len() * card;
        if size > cap {
            return Err(Error::DimensionOverflow { size, cap });
        }
        live = if d.is_cut(i) {
            let p = T::one() / T::from_usize_exact(card);
            live.extend(i, card, &[], |_, _| p)
        } else {
            let cpt = &m.interp.cpts[dag.name(i)];
            let parents: Vec<(usize, usize)> = dag
                .parents(i)
                .iter()
                .map(|&p| (p, dag.node(p).card))
                .collect();
            live.extend(i, card, &parents, |v, col| cpt.get(v, col))
        };
        done[i] = true;
        let finished: Vec<usize> = live
            .vars
            .iter()
            .copied()
            .filter(|&v| dag.is_latent(v) && d.consumers(v).iter().all(|&c| done[c]))
            .collect();
        for l in finished {
            live = live.sum_out(l);
        }
    }

    let space = VarSpace::new(
        live.vars
            .iter()
            .map(|&i| crate::finstoch::Var::new(dag.name(i), dag.node(i).card))
            .collect(),
    )?;
    let state = JointState::trusted(space, live.data);
    let names: Vec<&str> = d.outputs().iter().map(String::as_str).collect();
    permute_state(&state, &names)
}

/// Ground-truth interventional distribution, using full knowledge of the
/// mechanisms: evaluate the diagram with `x` cut.
pub fn intervene_oracle<T: Scalar>(m: &Model<T>, x: &str) -> Result<JointState<T>> {
    let d = cut(&network_diagram(&m.dag), x)?;
    evaluate(&d, m)
}

/// The model on a fully observed DAG whose tables are the conditionals
/// `ω(v | parents(v))`. Requires full support.
pub fn conditional_model<T: Scalar>(dag: &CausalDag, omega: &JointState<T>) -> Result<Model<T>> {
    let mut interp = Interpretation::new();
    for i in 0..dag.len() {
        let mut names: Vec<&str> = dag.parents(i).iter().map(|&p| dag.name(p)).collect();
        names.push(dag.name(i));
        let local = permute_state(&marginalize(omega, &names)?, &names)?;
        let split = names.len() - 1;
        let cpt = disintegrate(&local, split)?.channel.into_matrix();
        let dom = dag.space_of(dag.parents(i));
        let cod = dag.space_of(&[i]);
        interp.insert(dag.name(i), cpt.relabel(dom, cod)?);
    }
    Model::new(dag.clone(), interp)
}
