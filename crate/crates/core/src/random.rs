//! Seeded random models and joints for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::finstoch::{JointState, RMatrix, VarSpace};
use crate::semantics::{Interpretation, Model};
use crate::syntax::{CausalDag, NodeDecl};

/// Smallest probability handed out by the samplers.
pub const MIN_PROB: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModelConfig {
    pub min_observed: usize,
    pub max_observed: usize,
    pub max_latent: usize,
    pub min_card: usize,
    pub max_card: usize,
    pub edge_prob: f64,
    pub min_prob: f64,
}

impl Default for RandomModelConfig {
    fn default() -> Self {
        RandomModelConfig {
            min_observed: 2,
            max_observed: 5,
            max_latent: 2,
            min_card: 2,
            max_card: 3,
            edge_prob: 0.5,
            min_prob: MIN_PROB,
        }
    }
}

/// A distribution over `n` outcomes with every entry at least `min_prob`:
/// a flat Dirichlet draw squeezed into `[min_prob, 1]`.
pub fn random_distribution(rng: &mut impl Rng, n: usize, min_prob: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    let spare = 1.0 - min_prob * n as f64;
    raw.iter().map(|x| min_prob + spare * x / total).collect()
}

pub fn random_cpt(rng: &mut impl Rng, dom: VarSpace, cod: VarSpace, min_prob: f64) -> RMatrix<f64> {
    let (rows, cols) = (cod.dim(), dom.dim());
    let columns: Vec<Vec<f64>> = (0..cols)
        .map(|_| random_distribution(rng, rows, min_prob))
        .collect();
    RMatrix::from_fn(dom, cod, |r, c| columns[c][r])
}

pub fn random_joint(rng: &mut impl Rng, space: VarSpace, min_prob: f64) -> JointState<f64> {
    let n = space.dim();
    JointState::new(space, random_distribution(rng, n, min_prob)).expect("sampled distribution")
}

fn interpret(rng: &mut impl Rng, dag: CausalDag, min_prob: f64) -> Model<f64> {
    let mut interp = Interpretation::new();
    for i in 0..dag.len() {
        let cpt = random_cpt(
            rng,
            dag.space_of(dag.parents(i)),
            dag.space_of(&[i]),
            min_prob,
        );
        interp.insert(dag.name(i), cpt);
    }
    Model::new(dag, interp).expect("sampled model is valid")
}

fn random_observed(
    rng: &mut impl Rng,
    cfg: &RandomModelConfig,
) -> (Vec<NodeDecl>, Vec<(String, String)>) {
    let n = rng.gen_range(cfg.min_observed..=cfg.max_observed);
    let nodes: Vec<NodeDecl> = (0..n)
        .map(|i| NodeDecl::observed(format!("V{i}"), rng.gen_range(cfg.min_card..=cfg.max_card)))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(cfg.edge_prob) {
                edges.push((nodes[order[a]].name.clone(), nodes[order[b]].name.clone()));
            }
        }
    }
    (nodes, edges)
}

/// A semi-Markovian model: every latent is a root with exactly two observed
/// children.
pub fn random_semi_markovian(rng: &mut impl Rng, cfg: &RandomModelConfig) -> Model<f64> {
    let (mut nodes, mut edges) = random_observed(rng, cfg);
    let n = nodes.len();
    let latents = if n >= 2 {
        rng.gen_range(0..=cfg.max_latent)
    } else {
        0
    };
    for l in 0..latents {
        let name = format!("U{l}");
        let kids: Vec<usize> = rand::seq::index::sample(rng, n, 2).into_vec();
        for k in kids {
            edges.push((name.clone(), nodes[k].name.clone()));
        }
        nodes.push(NodeDecl::latent(
            name,
            rng.gen_range(cfg.min_card..=cfg.max_card),
        ));
    }
    let dag = CausalDag::new(nodes, edges).expect("edges follow a permutation");
    interpret(rng, dag, cfg.min_prob)
}

/// A model with unrestricted latents: they may have parents (observed or
/// latent) and any number of children.
pub fn random_latent_model(rng: &mut impl Rng, cfg: &RandomModelConfig) -> Model<f64> {
    let (mut nodes, mut edges) = random_observed(rng, cfg);
    let latents = rng.gen_range(0..=cfg.max_latent);
    // Insert each latent at a random slot of a topological order of the
    // observed part; latent edges then follow that global order.
    let mut order = CausalDag::new(nodes.clone(), edges.clone())
        .expect("acyclic")
        .topological_order()
        .to_vec();
    for l in 0..latents {
        let idx = nodes.len();
        nodes.push(NodeDecl::latent(
            format!("U{l}"),
            rng.gen_range(cfg.min_card..=cfg.max_card),
        ));
        let slot = rng.gen_range(0..=order.len());
        order.insert(slot, idx);
    }
    for (pos, &v) in order.iter().enumerate() {
        if !nodes[v].latent {
            continue;
        }
        for (p2, &w) in order.iter().enumerate() {
            if p2 == pos || !rng.gen_bool(cfg.edge_prob) {
                continue;
            }
            let (from, to) = if p2 < pos { (w, v) } else { (v, w) };
            edges.push((nodes[from].name.clone(), nodes[to].name.clone()));
        }
    }
    let dag = CausalDag::new(nodes, edges).expect("edges follow a global order");
    interpret(rng, dag, cfg.min_prob)
}
