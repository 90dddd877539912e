//! Interventional distributions from observational data.
//!
//! Causal structure is syntax: a DAG generates a free category of string
//! diagrams ([`syntax`]). A model interprets each box as a stochastic matrix
//! ([`semantics`], over the dense matrices of [`finstoch`]). An intervention
//! is diagram surgery: the box of the intervened node is replaced by
//! discard-then-uniform. When the diagram has the right shape, the resulting
//! distribution is computable from the observed joint alone by comb
//! disintegration ([`inference`]).
//!
//! ```
//! use causal_surgery::{factorize_single, intervene_from_observational, network_diagram};
//! use causal_surgery::{CausalDag, State, VarSpace};
//!
//! let dag = CausalDag::build(
//!     &[("S", 2, false), ("T", 2, false), ("C", 2, false), ("H", 2, true)],
//!     &[("H", "S"), ("S", "T"), ("T", "C"), ("H", "C")],
//! )
//! .unwrap();
//! let omega = State::new(
//!     VarSpace::of(&[("S", 2), ("T", 2), ("C", 2)]).unwrap(),
//!     vec![0.5, 0.1, 0.01, 0.02, 0.1, 0.05, 0.02, 0.2],
//! )
//! .unwrap();
//! let ident = factorize_single(&network_diagram(&dag), "S").unwrap();
//! let after = intervene_from_observational(&omega, &ident).unwrap();
//! assert!((after.probs()[0] - 0.367460).abs() < 1e-6);
//! ```
//!
//! All numerics are generic over [`Scalar`]; the aliases below fix `f64`, and
//! the `Exact*` aliases use `Ratio<i64>`.

pub mod error;
pub mod finstoch;
pub mod harness;
pub mod inference;
pub mod random;
pub mod scalar;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
pub use finstoch::{
    cap, compose, copy, cup, discard, has_full_support, is_stochastic, marginalize, min_entry,
    permutation, permute_state, swap, tensor, uniform, JointState, RMatrix, StochMap, Var,
    VarSpace,
};
pub use inference::{
    chain_disintegrate, chain_plug_cut, comb_deviation, comb_disintegrate, comb_plug,
    comb_plug_compact, comb_plug_cut, disintegrate, disintegrate_on, intervene_comb,
    intervene_component, intervene_from_observational, is_comb2, ChainFactors, Comb2,
    Disintegration,
};
pub use scalar::Scalar;
pub use semantics::{
    conditional_model, evaluate, evaluate_in_order, intervene_oracle, validate, Interpretation,
    Model, Violation,
};
pub use syntax::{
    component_split, confounded_components, cut, diagram_equal, factorize_comb, factorize_single,
    free_signature, network_diagram, CausalDag, ComponentSplit, Generator, Grouping,
    Identification, NetworkDiagram, NodeDecl, SurgeryFactorisation,
};

pub type Rational = num_rational::Ratio<i64>;

pub type Matrix = RMatrix<f64>;
pub type Channel = StochMap<f64>;
pub type State = JointState<f64>;
pub type Comb = Comb2<f64>;
pub type BayesNet = Model<f64>;

pub type ExactMatrix = RMatrix<Rational>;
pub type ExactChannel = StochMap<Rational>;
pub type ExactState = JointState<Rational>;
pub type ExactBayesNet = Model<Rational>;
