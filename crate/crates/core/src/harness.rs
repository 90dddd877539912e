//! Seeded oracle-equivalence harness: sample semi-Markovian models, identify
//! a random single-node intervention, and compare the observational pipeline
//! against the cut evaluated with full mechanism knowledge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inference::intervene_from_observational;
use crate::random::{random_semi_markovian, RandomModelConfig};
use crate::semantics::{evaluate, intervene_oracle};
use crate::syntax::{confounded_components, factorize_single, network_diagram, Identification};

/// Deviation above which a case counts as a failure.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Comb,
    Component,
    NotIdentifiable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub index: usize,
    pub observed: usize,
    pub latent: usize,
    pub target: String,
    pub verdict: Verdict,
    /// Max-norm distance between pipeline and oracle, when identifiable.
    pub deviation: Option<f64>,
    /// Whether the verdict agrees with the confounding-path criterion.
    pub criterion_agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub seed: u64,
    pub cases: Vec<CaseResult>,
}

impl CheckReport {
    pub fn identifiable(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| c.verdict != Verdict::NotIdentifiable)
            .count()
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.cases.iter().filter(|c| c.verdict == v).count()
    }

    pub fn max_deviation(&self) -> f64 {
        self.cases
            .iter()
            .filter_map(|c| c.deviation)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self, tol: f64) -> Vec<&CaseResult> {
        self.cases
            .iter()
            .filter(|c| !c.criterion_agrees || c.deviation.is_some_and(|d| d.is_nan() || d > tol))
            .collect()
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.failures(tol).is_empty()
    }
}

/// True iff `x` shares a confounded component with one of its children.
pub fn confounded_with_child(dag: &crate::syntax::CausalDag, x: &str) -> Result<bool> {
    let components = confounded_components(dag)?;
    let xi = dag.index_of(x)?;
    let comp = components
        .iter()
        .find(|c| c.iter().any(|n| n == x))
        .expect("observed node has a component");
    Ok(dag
        .children(xi)
        .iter()
        .any(|&c| comp.iter().any(|n| n == dag.name(c))))
}

/// Run `count` seeded cases with at most `max_observed` observed nodes.
pub fn oracle_equivalence(seed: u64, count: usize, max_observed: usize) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomModelConfig {
        min_observed: 2.min(max_observed.max(1)),
        max_observed: max_observed.max(1),
        ..RandomModelConfig::default()
    };
    let mut cases = Vec::with_capacity(count);
    for index in 0..count {
        let model = random_semi_markovian(&mut rng, &cfg);
        let observed = model.dag.observed();
        let xi = observed[rng.gen_range(0..observed.len())];
        let target = model.dag.name(xi).to_string();
        let d = network_diagram(&model.dag);
        let confounded = confounded_with_child(&model.dag, &target)?;

        let (verdict, deviation) = match factorize_single(&d, &target) {
            Ok(ident) => {
                let omega = evaluate(&d, &model)?;
                let pipeline = intervene_from_observational(&omega, &ident)?;
                let oracle = intervene_oracle(&model, &target)?;
                let dev = pipeline.as_map().max_abs_diff(oracle.as_map())?;
                let v = match ident {
                    Identification::Comb(_) => Verdict::Comb,
                    Identification::Component(_) => Verdict::Component,
                };
                (v, Some(dev))
            }
            Err(Error::NotIdentifiable { .. }) => (Verdict::NotIdentifiable, None),
            Err(e) => return Err(e),
        };
        cases.push(CaseResult {
            index,
            observed: observed.len(),
            latent: model.dag.len() - observed.len(),
            target,
            criterion_agrees: (verdict == Verdict::NotIdentifiable) == confounded,
            verdict,
            deviation,
        });
    }
    Ok(CheckReport { seed, cases })
}
