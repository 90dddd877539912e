//! The syntactic side: causal DAGs, network diagrams of the free CDU category
//! they generate, diagram surgery, and the search for identifying
//! factorisations.

mod dag;
mod diagram;
mod identify;

pub use dag::{CausalDag, NodeDecl};
pub use diagram::{cut, diagram_equal, free_signature, network_diagram, Generator, NetworkDiagram};
pub use identify::{
    component_split, confounded_components, factorize_comb, factorize_single, ComponentSplit,
    Grouping, Identification, SurgeryFactorisation,
};
