//! Identifiability of single-node interventions.
//!
//! Two shapes are searched, in order:
//!
//! 1. The comb shape: the diagram splits as `f1`, the target box `x`, a block
//!    `g` holding every consumer of `x` (and whatever those consumers depend
//!    on, except `x`), and `f2` downstream of `g`. The observed outputs group
//!    as `A = [X]`, `B = outputs of g`, `C = everything else`, ready for 2-comb
//!    disintegration.
//! 2. The confounded-component split: when the comb shape fails because an
//!    observed pre-treatment variable or a remote latent ties `g` to `f1`, the
//!    joint still factors along a topological order into the conditionals of
//!    the target's confounded component and those of the rest. This succeeds
//!    exactly when no child of the target shares its confounded component.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::syntax::dag::CausalDag;
use crate::syntax::diagram::NetworkDiagram;

/// Output grouping for 2-comb disintegration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl Grouping {
    pub fn order(&self) -> Vec<&str> {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .map(String::as_str)
            .collect()
    }
}

/// A partition of the boxes into `f1`, the target, `g` and `f2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryFactorisation {
    pub target: String,
    pub f1: Vec<String>,
    pub g: Vec<String>,
    pub f2: Vec<String>,
    pub grouping: Grouping,
}

/// Observed variables in a topological order, split into the target's
/// confounded component (the comb side) and the rest (the channel side).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSplit {
    pub target: String,
    pub order: Vec<String>,
    pub component: Vec<String>,
}

impl ComponentSplit {
    pub fn in_component(&self, name: &str) -> bool {
        self.component.iter().any(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identification {
    Comb(SurgeryFactorisation),
    Component(ComponentSplit),
}

impl Identification {
    pub fn target(&self) -> &str {
        match self {
            Identification::Comb(f) => &f.target,
            Identification::Component(s) => &s.target,
        }
    }
}

fn bfs(
    n: usize,
    start: impl IntoIterator<Item = usize>,
    next: impl Fn(usize) -> Vec<usize>,
) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = start.into_iter().collect();
    while let Some(i) = queue.pop_front() {
        if !std::mem::replace(&mut seen[i], true) {
            queue.extend(next(i));
        }
    }
    seen
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let root = self.find(p);
        self.0[i] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Classes of `members`, each in ascending order, ordered by first member.
    fn classes(&mut self, members: &[usize]) -> Vec<Vec<usize>> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for &m in members {
            let r = self.find(m);
            match out.iter_mut().find(|(root, _)| *root == r) {
                Some((_, v)) => v.push(m),
                None => out.push((r, vec![m])),
            }
        }
        out.into_iter().map(|(_, v)| v).collect()
    }
}

/// Confounded components of a semi-Markovian DAG: observed nodes grouped by
/// the transitive closure of "shares a latent parent".
pub fn confounded_components(dag: &CausalDag) -> Result<Vec<Vec<String>>> {
    let mut uf = UnionFind::new(dag.len());
    for l in dag.latents() {
        let name = dag.name(l).to_string();
        if !dag.parents(l).is_empty() {
            return Err(Error::NotSemiMarkovian {
                latent: name,
                reason: "has parents".into(),
            });
        }
        let kids = dag.children(l);
        if kids.len() != 2 {
            return Err(Error::NotSemiMarkovian {
                latent: name,
                reason: format!("has {} children, expected 2", kids.len()),
            });
        }
        if kids.iter().any(|&k| dag.is_latent(k)) {
            return Err(Error::NotSemiMarkovian {
                latent: name,
                reason: "has a latent child".into(),
            });
        }
        uf.union(kids[0], kids[1]);
    }
    Ok(uf
        .classes(&dag.observed())
        .into_iter()
        .map(|c| c.into_iter().map(|i| dag.name(i).to_string()).collect())
        .collect())
}

fn check_target(d: &NetworkDiagram, x: &str) -> Result<usize> {
    let xi = d.index_checked(x)?;
    if d.dag().is_latent(xi) {
        return Err(Error::TargetLatent(x.to_string()));
    }
    if d.is_cut(xi) {
        return Err(Error::TargetAlreadyCut(x.to_string()));
    }
    Ok(xi)
}

/// Search for the comb shape around `x`.
///
/// `g` is the minimal closure: start from the consumers of `x` and add every
/// input of a `g` box other than `x`. The shape exists iff `g` is fully
/// observed and does not feed `x`.
pub fn factorize_comb(d: &NetworkDiagram, x: &str) -> Result<SurgeryFactorisation> {
    let xi = check_target(d, x)?;
    let dag = d.dag();
    let n = dag.len();

    let mut in_g = vec![false; n];
    let mut added = Vec::new();
    let mut queue: VecDeque<usize> = d.consumers(xi).into();
    while let Some(i) = queue.pop_front() {
        if std::mem::replace(&mut in_g[i], true) {
            continue;
        }
        added.push(i);
        queue.extend(d.inputs(i).iter().copied().filter(|&p| p != xi && !in_g[p]));
    }

    let not_identifiable = |w: usize, reason: String| Error::NotIdentifiable {
        target: x.to_string(),
        witness: dag.name(w).to_string(),
        reason,
    };
    if let Some(&l) = added.iter().find(|&&i| dag.is_latent(i)) {
        return Err(not_identifiable(
            l,
            format!(
                "latent `{}` is an input of the block consuming `{x}`",
                dag.name(l)
            ),
        ));
    }
    let feeds_target = bfs(n, d.inputs(xi).iter().copied(), |i| d.inputs(i).to_vec());
    if let Some(&w) = added.iter().find(|&&i| feeds_target[i]) {
        return Err(not_identifiable(
            w,
            format!(
                "`{}` is needed by the block consuming `{x}` but also causes `{x}`",
                dag.name(w)
            ),
        ));
    }

    let below_g = bfs(n, added.iter().flat_map(|&i| d.consumers(i)), |i| {
        d.consumers(i)
    });
    let names = |pred: &dyn Fn(usize) -> bool| -> Vec<String> {
        (0..n)
            .filter(|&i| pred(i))
            .map(|i| dag.name(i).to_string())
            .collect()
    };
    let f2 = names(&|i| !in_g[i] && i != xi && below_g[i]);
    let f1 = names(&|i| !in_g[i] && i != xi && !below_g[i]);
    let g = names(&|i| in_g[i]);
    let grouping = Grouping {
        a: vec![x.to_string()],
        b: names(&|i| in_g[i] && !dag.is_latent(i)),
        c: names(&|i| !in_g[i] && i != xi && !dag.is_latent(i)),
    };
    let fact = SurgeryFactorisation {
        target: x.to_string(),
        f1,
        g,
        f2,
        grouping,
    };
    debug_assert_eq!(fact.verify(d), Ok(()));
    Ok(fact)
}

impl SurgeryFactorisation {
    /// Check the wiring constraints of the comb shape against `d`.
    pub fn verify(&self, d: &NetworkDiagram) -> std::result::Result<(), String> {
        let dag = d.dag();
        let idx = |names: &[String]| -> std::result::Result<Vec<usize>, String> {
            names
                .iter()
                .map(|s| dag.index_of(s).map_err(|e| e.to_string()))
                .collect()
        };
        let xi = dag.index_of(&self.target).map_err(|e| e.to_string())?;
        let (f1, g, f2) = (idx(&self.f1)?, idx(&self.g)?, idx(&self.f2)?);

        let mut seen = vec![0u8; dag.len()];
        for &i in f1.iter().chain(&g).chain(&f2).chain(std::iter::once(&xi)) {
            seen[i] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err("blocks do not partition the nodes".into());
        }
        if g.contains(&xi) {
            return Err("target inside g".into());
        }
        for c in d.consumers(xi) {
            if !g.contains(&c) {
                return Err(format!(
                    "consumer `{}` of the target outside g",
                    dag.name(c)
                ));
            }
        }
        for &i in &g {
            if dag.is_latent(i) {
                return Err(format!("latent `{}` in g", dag.name(i)));
            }
            for &p in d.inputs(i) {
                if f1.contains(&p) {
                    return Err(format!("wire from f1 node `{}` into g", dag.name(p)));
                }
            }
        }
        for &i in f1.iter().chain(std::iter::once(&xi)) {
            for &p in d.inputs(i) {
                if g.contains(&p) || f2.contains(&p) {
                    return Err(format!(
                        "wire from `{}` back into `{}`",
                        dag.name(p),
                        dag.name(i)
                    ));
                }
            }
        }
        let observed_g: Vec<String> = g.iter().map(|&i| dag.name(i).to_string()).collect();
        if self.grouping.a != [self.target.clone()] || self.grouping.b != observed_g {
            return Err("grouping does not match blocks".into());
        }
        Ok(())
    }
}

fn union_latent_sources(d: &NetworkDiagram, uf: &mut UnionFind) {
    let dag = d.dag();
    for l in dag.latents() {
        // Observed nodes reached from `l` through latent-only intermediates.
        let reached = bfs(dag.len(), d.consumers(l), |i| {
            if dag.is_latent(i) {
                d.consumers(i)
            } else {
                Vec::new()
            }
        });
        let obs: Vec<usize> = (0..dag.len())
            .filter(|&i| reached[i] && !dag.is_latent(i))
            .collect();
        for w in obs.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
}

/// Split the observed variables by the target's confounded component, using
/// the latent projection so that arbitrary latent structure is allowed.
pub fn component_split(d: &NetworkDiagram, x: &str) -> Result<ComponentSplit> {
    let xi = check_target(d, x)?;
    let dag = d.dag();
    let mut uf = UnionFind::new(dag.len());
    union_latent_sources(d, &mut uf);

    let reached = bfs(dag.len(), d.consumers(xi), |i| {
        if dag.is_latent(i) {
            d.consumers(i)
        } else {
            Vec::new()
        }
    });
    let root = uf.find(xi);
    for c in dag.observed() {
        if reached[c] && uf.find(c) == root {
            return Err(Error::NotIdentifiable {
                target: x.to_string(),
                witness: dag.name(c).to_string(),
                reason: format!("child `{}` is confounded with `{x}`", dag.name(c)),
            });
        }
    }
    let order = dag
        .topological_order()
        .iter()
        .filter(|&&i| !dag.is_latent(i))
        .map(|&i| dag.name(i).to_string())
        .collect();
    let component = dag
        .observed()
        .into_iter()
        .filter(|&i| uf.find(i) == root)
        .map(|i| dag.name(i).to_string())
        .collect();
    Ok(ComponentSplit {
        target: x.to_string(),
        order,
        component,
    })
}

/// Find a factorisation witnessing that cutting `x` is computable from the
/// observed joint. The comb shape is tried first.
pub fn factorize_single(d: &NetworkDiagram, x: &str) -> Result<Identification> {
    match factorize_comb(d, x) {
        Ok(f) => Ok(Identification::Comb(f)),
        Err(Error::NotIdentifiable {
            target,
            witness,
            reason,
        }) => match component_split(d, x) {
            Ok(s) => Ok(Identification::Component(s)),
            Err(Error::NotIdentifiable { reason: why, .. }) => Err(Error::NotIdentifiable {
                target,
                witness,
                reason: format!("{reason}; {why}"),
            }),
            Err(e) => Err(e),
        },
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::diagram::{cut, network_diagram};

    fn smoking() -> NetworkDiagram {
        network_diagram(
            &CausalDag::build(
                &[
                    ("S", 2, false),
                    ("T", 2, false),
                    ("C", 2, false),
                    ("H", 2, true),
                ],
                &[("H", "S"), ("S", "T"), ("T", "C"), ("H", "C")],
            )
            .unwrap(),
        )
    }

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn smoking_comb_shape() {
        let d = smoking();
        let f = factorize_comb(&d, "S").unwrap();
        assert_eq!(f.g, strs(&["T"]));
        assert_eq!(f.f1, strs(&["H"]));
        assert_eq!(f.f2, strs(&["C"]));
        assert_eq!(
            f.grouping,
            Grouping {
                a: strs(&["S"]),
                b: strs(&["T"]),
                c: strs(&["C"])
            }
        );
        assert_eq!(f.verify(&d), Ok(()));
        assert_eq!(factorize_single(&d, "S").unwrap(), Identification::Comb(f));
    }

    #[test]
    fn bow_graph_is_not_identifiable() {
        let d = network_diagram(
            &CausalDag::build(
                &[("X", 2, false), ("Y", 2, false), ("L", 2, true)],
                &[("L", "X"), ("L", "Y"), ("X", "Y")],
            )
            .unwrap(),
        );
        match factorize_single(&d, "X") {
            Err(Error::NotIdentifiable { witness, .. }) => assert_eq!(witness, "L"),
            other => panic!("expected NotIdentifiable, got {other:?}"),
        }
    }

    #[test]
    fn childless_target_is_degenerate() {
        let d = smoking();
        let f = factorize_comb(&d, "C").unwrap();
        assert!(f.g.is_empty());
        assert!(f.grouping.b.is_empty());
        assert!(f.f2.is_empty());
        assert_eq!(f.grouping.c, strs(&["S", "T"]));
    }

    #[test]
    fn back_door_uses_component_split() {
        let d = network_diagram(
            &CausalDag::build(
                &[("Z", 2, false), ("X", 2, false), ("Y", 2, false)],
                &[("Z", "X"), ("Z", "Y"), ("X", "Y")],
            )
            .unwrap(),
        );
        assert!(matches!(
            factorize_comb(&d, "X"),
            Err(Error::NotIdentifiable { ref witness, .. }) if witness == "Z"
        ));
        let split = match factorize_single(&d, "X").unwrap() {
            Identification::Component(s) => s,
            other => panic!("{other:?}"),
        };
        assert_eq!(split.order, strs(&["Z", "X", "Y"]));
        assert_eq!(split.component, strs(&["X"]));
    }

    #[test]
    fn remote_confounding_uses_component_split() {
        // E → X → D with E ↔ D: identifiable, yet no comb shape exists.
        let d = network_diagram(
            &CausalDag::build(
                &[
                    ("E", 2, false),
                    ("X", 2, false),
                    ("D", 2, false),
                    ("L", 2, true),
                ],
                &[("E", "X"), ("X", "D"), ("L", "E"), ("L", "D")],
            )
            .unwrap(),
        );
        assert!(factorize_comb(&d, "X").is_err());
        let split = component_split(&d, "X").unwrap();
        assert_eq!(split.component, strs(&["X"]));
    }

    #[test]
    fn target_errors() {
        let d = smoking();
        assert_eq!(
            factorize_single(&d, "H"),
            Err(Error::TargetLatent("H".into()))
        );
        assert_eq!(
            factorize_single(&d, "Q"),
            Err(Error::UnknownVariable("Q".into()))
        );
        let c = cut(&d, "S").unwrap();
        assert_eq!(
            factorize_single(&c, "S"),
            Err(Error::TargetAlreadyCut("S".into()))
        );
    }

    #[test]
    fn components() {
        let smoking = smoking();
        assert_eq!(
            confounded_components(smoking.dag()).unwrap(),
            vec![strs(&["S", "C"]), strs(&["T"])]
        );
        let chain = CausalDag::build(
            &[
                ("X", 2, false),
                ("Z", 2, false),
                ("Y", 2, false),
                ("L1", 2, true),
                ("L2", 2, true),
            ],
            &[("L1", "X"), ("L1", "Z"), ("L2", "Z"), ("L2", "Y")],
        )
        .unwrap();
        assert_eq!(
            confounded_components(&chain).unwrap(),
            vec![strs(&["X", "Z", "Y"])]
        );
        let plain = CausalDag::build(&[("A", 2, false), ("B", 2, false)], &[("A", "B")]).unwrap();
        assert_eq!(
            confounded_components(&plain).unwrap(),
            vec![strs(&["A"]), strs(&["B"])]
        );
    }

    #[test]
    fn components_reject_non_semi_markovian() {
        let g = CausalDag::build(
            &[
                ("A", 2, false),
                ("B", 2, false),
                ("C", 2, false),
                ("L", 2, true),
            ],
            &[("L", "A"), ("L", "B"), ("L", "C")],
        )
        .unwrap();
        assert!(matches!(
            confounded_components(&g),
            Err(Error::NotSemiMarkovian { ref latent, .. }) if latent == "L"
        ));
        let g = CausalDag::build(
            &[
                ("A", 2, false),
                ("B", 2, false),
                ("C", 2, false),
                ("L", 2, true),
            ],
            &[("A", "L"), ("L", "B"), ("L", "C")],
        )
        .unwrap();
        assert!(confounded_components(&g).is_err());
    }

    #[test]
    fn front_door_through_latent_chain() {
        // Not semi-Markovian: U → V (both latent), U → X, V → Y, X → M → Y.
        let d = network_diagram(
            &CausalDag::build(
                &[
                    ("X", 2, false),
                    ("M", 2, false),
                    ("Y", 2, false),
                    ("U", 2, true),
                    ("V", 2, true),
                ],
                &[("U", "V"), ("U", "X"), ("V", "Y"), ("X", "M"), ("M", "Y")],
            )
            .unwrap(),
        );
        let f = factorize_comb(&d, "X").unwrap();
        assert_eq!(f.g, strs(&["M"]));
        assert_eq!(f.f2, strs(&["Y"]));
        assert_eq!(f.f1, strs(&["U", "V"]));
    }
}
