use std::path::Path;

use causal_surgery::harness::{oracle_equivalence, CaseResult, Verdict};
use causal_surgery::{
    comb_deviation, comb_disintegrate, comb_plug, disintegrate_on, evaluate, factorize_single,
    intervene_from_observational, intervene_oracle, marginalize, min_entry, network_diagram,
    permute_state, Error, Identification, State,
};
use serde::Serialize;

use crate::error::CliError;
use crate::model_file::{self, ModelFile};
use crate::output::{render, sci, ChannelBody, Diagnostics, Format, Num, StateBody};

/// A rendered document and the exit code to finish with.
pub struct Outcome {
    pub document: String,
    pub code: i32,
}

impl Outcome {
    fn ok<T: Serialize>(doc: &T) -> Self {
        Outcome {
            document: render(doc),
            code: 0,
        }
    }
}

pub struct Settings {
    pub format: Format,
    pub tol: f64,
}

#[derive(Serialize)]
struct StateDoc {
    kind: &'static str,
    #[serde(flatten)]
    state: StateBody,
    diagnostics: Diagnostics,
}

fn state_doc(s: &Settings, w: &State, diagnostics: Diagnostics) -> Outcome {
    Outcome::ok(&StateDoc {
        kind: "state",
        state: s.format.state(w),
        diagnostics,
    })
}

fn names(list: &[String]) -> Vec<&str> {
    list.iter().map(String::as_str).collect()
}

fn split_names(group: &str) -> Vec<String> {
    group
        .split(',')
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .map(String::from)
        .collect()
}

fn load(path: &Path) -> Result<(ModelFile, causal_surgery::CausalDag), CliError> {
    let file = model_file::read(path)?;
    let dag = file.dag()?;
    Ok((file, dag))
}

#[derive(Serialize)]
struct ValidateDoc {
    kind: &'static str,
    command: &'static str,
    ok: bool,
    nodes: usize,
    edges: usize,
    violations: Vec<String>,
}

pub fn validate(s: &Settings, path: &Path) -> Result<Outcome, CliError> {
    let file = model_file::read(path)?;
    let mut violations = Vec::new();
    match file.dag() {
        Err(e) => violations.push(e.to_string()),
        Ok(dag) => {
            if file.cpts.is_some() {
                if let Err(v) = file.model(&dag, s.tol) {
                    violations.extend(v.iter().map(ToString::to_string));
                }
            }
            if let Some(probs) = &file.joint {
                if let Err(e) = State::with_tol(dag.observed_space(), probs.clone(), s.tol) {
                    violations.push(format!("joint: {e}"));
                }
            }
        }
    }
    let ok = violations.is_empty();
    let doc = ValidateDoc {
        kind: "report",
        command: "validate",
        ok,
        nodes: file.variables.len(),
        edges: file.edges.len(),
        violations,
    };
    Ok(Outcome {
        document: render(&doc),
        code: if ok { 0 } else { 1 },
    })
}

pub fn interpret(s: &Settings, path: &Path) -> Result<Outcome, CliError> {
    let (file, dag) = load(path)?;
    let model = file.require_model(&dag, s.tol)?;
    let w = evaluate(&network_diagram(&dag), &model)?;
    Ok(state_doc(s, &w, Diagnostics::for_state(&w, s.tol)))
}

pub fn marginal(s: &Settings, path: &Path, keep: &[String]) -> Result<Outcome, CliError> {
    let (file, dag) = load(path)?;
    let w = file.observed_joint(&dag, s.tol)?;
    let keep: Vec<String> = keep.iter().flat_map(|k| split_names(k)).collect();
    let m = permute_state(&marginalize(&w, &names(&keep))?, &names(&keep))?;
    Ok(state_doc(s, &m, Diagnostics::for_state(&m, s.tol)))
}

#[derive(Serialize)]
struct DisintegrationDoc {
    kind: &'static str,
    prior: StateBody,
    channel: ChannelBody,
    diagnostics: Diagnostics,
}

pub fn disintegrate(s: &Settings, path: &Path, split: &str) -> Result<Outcome, CliError> {
    let (left, right) = split
        .split_once('|')
        .ok_or_else(|| CliError::Parse(format!("--split `{split}` is not of the form `A|B`")))?;
    let (a, b) = (split_names(left), split_names(right));
    let (file, dag) = load(path)?;
    let w = file.observed_joint(&dag, s.tol)?;
    let d = disintegrate_on(&w, &names(&a), &names(&b))?;
    let back = d.recompose()?;
    let local = permute_state(
        &marginalize(&w, &[names(&a), names(&b)].concat())?,
        &[names(&a), names(&b)].concat(),
    )?;
    let diagnostics = Diagnostics {
        min_entry: Some(sci(min_entry(d.prior.as_map()))),
        min_input_entry: Some(sci(min_entry(local.as_map()))),
        tolerance: Some(sci(s.tol)),
        reconstruction_error: Some(sci(back.as_map().max_abs_diff(local.as_map())?)),
        ..Diagnostics::default()
    };
    Ok(Outcome::ok(&DisintegrationDoc {
        kind: "channel",
        prior: s.format.state(&d.prior),
        channel: s.format.channel(d.channel.matrix()),
        diagnostics,
    }))
}

#[derive(Serialize)]
struct GroupingDoc {
    a: Vec<String>,
    b: Vec<String>,
    c: Vec<String>,
}

#[derive(Serialize)]
struct CombDoc {
    kind: &'static str,
    grouping: GroupingDoc,
    f: ChannelBody,
    g: ChannelBody,
    diagnostics: Diagnostics,
}

pub fn comb(s: &Settings, path: &Path, grouping: &[String]) -> Result<Outcome, CliError> {
    let [a, b, c] = [0, 1, 2].map(|k| split_names(&grouping[k]));
    if a.is_empty() || b.is_empty() {
        return Err(CliError::Parse(
            "--grouping needs nonempty A and B groups".into(),
        ));
    }
    let (file, dag) = load(path)?;
    let w = file.observed_joint(&dag, s.tol)?;
    let order: Vec<&str> = [names(&a), names(&b), names(&c)].concat();
    let local = permute_state(&marginalize(&w, &order)?, &order)?;
    let (f, g) = comb_disintegrate(&local, a.len(), b.len())?;
    let back = comb_plug(&f, &g)?;
    let diagnostics = Diagnostics {
        min_input_entry: Some(sci(min_entry(local.as_map()))),
        tolerance: Some(sci(s.tol)),
        comb_deviation: Some(sci(comb_deviation(f.map(), a.len()))),
        reconstruction_error: Some(sci(back.as_map().max_abs_diff(local.as_map())?)),
        ..Diagnostics::default()
    };
    Ok(Outcome::ok(&CombDoc {
        kind: "comb",
        grouping: GroupingDoc { a, b, c },
        f: s.format.channel(f.map().matrix()),
        g: s.format.channel(g.matrix()),
        diagnostics,
    }))
}

#[derive(Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
enum FactorisationBody {
    Comb {
        f1: Vec<String>,
        g: Vec<String>,
        f2: Vec<String>,
        grouping: GroupingDoc,
    },
    Component {
        order: Vec<String>,
        component: Vec<String>,
    },
}

#[derive(Serialize)]
struct FactorisationDoc {
    kind: &'static str,
    target: String,
    #[serde(flatten)]
    body: FactorisationBody,
}

#[derive(Serialize)]
struct RefusalDoc {
    kind: &'static str,
    command: &'static str,
    ok: bool,
    target: String,
    witness: String,
    reason: String,
}

fn method(ident: &Identification) -> &'static str {
    match ident {
        Identification::Comb(_) => "comb",
        Identification::Component(_) => "component",
    }
}

/// The identification, or a refusal document with exit code 3.
fn identify(
    dag: &causal_surgery::CausalDag,
    target: &str,
    command: &'static str,
) -> Result<Result<Identification, Outcome>, CliError> {
    match factorize_single(&network_diagram(dag), target) {
        Ok(ident) => Ok(Ok(ident)),
        Err(Error::NotIdentifiable {
            target,
            witness,
            reason,
        }) => {
            eprintln!("not identifiable: witness `{witness}`: {reason}");
            Ok(Err(Outcome {
                document: render(&RefusalDoc {
                    kind: "report",
                    command,
                    ok: false,
                    target,
                    witness,
                    reason,
                }),
                code: 3,
            }))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn factorize(path: &Path, target: &str) -> Result<Outcome, CliError> {
    let (_, dag) = load(path)?;
    let ident = match identify(&dag, target, "factorize")? {
        Ok(ident) => ident,
        Err(refusal) => return Ok(refusal),
    };
    let body = match ident {
        Identification::Comb(f) => FactorisationBody::Comb {
            f1: f.f1,
            g: f.g,
            f2: f.f2,
            grouping: GroupingDoc {
                a: f.grouping.a,
                b: f.grouping.b,
                c: f.grouping.c,
            },
        },
        Identification::Component(split) => FactorisationBody::Component {
            order: split.order,
            component: split.component,
        },
    };
    Ok(Outcome::ok(&FactorisationDoc {
        kind: "factorisation",
        target: target.to_string(),
        body,
    }))
}

pub fn intervene(
    s: &Settings,
    path: &Path,
    target: &str,
    oracle: bool,
) -> Result<Outcome, CliError> {
    let (file, dag) = load(path)?;
    if oracle {
        let model = file.require_model(&dag, s.tol)?;
        let w = intervene_oracle(&model, target)?;
        let mut diagnostics = Diagnostics::for_state(&w, s.tol);
        diagnostics.method = Some("oracle".into());
        return Ok(state_doc(s, &w, diagnostics));
    }
    let omega = file.observed_joint(&dag, s.tol)?;
    let ident = match identify(&dag, target, "intervene")? {
        Ok(ident) => ident,
        Err(refusal) => return Ok(refusal),
    };
    let w = intervene_from_observational(&omega, &ident)?;
    let mut diagnostics = Diagnostics::for_state(&w, s.tol);
    diagnostics.min_input_entry = Some(sci(min_entry(omega.as_map())));
    diagnostics.method = Some(method(&ident).into());
    Ok(state_doc(s, &w, diagnostics))
}

#[derive(Serialize)]
struct CaseDoc {
    index: usize,
    observed: usize,
    latent: usize,
    target: String,
    verdict: &'static str,
    deviation: Option<Num>,
    criterion_agrees: bool,
}

#[derive(Serialize)]
struct RandcheckDoc {
    kind: &'static str,
    command: &'static str,
    ok: bool,
    seed: u64,
    count: usize,
    max_nodes: usize,
    comb: usize,
    component: usize,
    not_identifiable: usize,
    max_deviation: Num,
    tolerance: Num,
    failures: Vec<CaseDoc>,
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Comb => "comb",
        Verdict::Component => "component",
        Verdict::NotIdentifiable => "not_identifiable",
    }
}

fn case_doc(c: &CaseResult) -> CaseDoc {
    CaseDoc {
        index: c.index,
        observed: c.observed,
        latent: c.latent,
        target: c.target.clone(),
        verdict: verdict(c.verdict),
        deviation: c.deviation.map(sci),
        criterion_agrees: c.criterion_agrees,
    }
}

pub fn randcheck(
    s: &Settings,
    seed: u64,
    count: usize,
    max_nodes: usize,
) -> Result<Outcome, CliError> {
    if max_nodes == 0 {
        return Err(CliError::Parse("--max-nodes must be at least 1".into()));
    }
    let report = oracle_equivalence(seed, count, max_nodes)?;
    let failures: Vec<CaseDoc> = report.failures(s.tol).into_iter().map(case_doc).collect();
    let ok = failures.is_empty();
    let doc = RandcheckDoc {
        kind: "report",
        command: "randcheck",
        ok,
        seed,
        count,
        max_nodes,
        comb: report.count(Verdict::Comb),
        component: report.count(Verdict::Component),
        not_identifiable: report.count(Verdict::NotIdentifiable),
        max_deviation: sci(report.max_deviation()),
        tolerance: sci(s.tol),
        failures,
    };
    Ok(Outcome {
        document: render(&doc),
        code: if ok { 0 } else { 1 },
    })
}
