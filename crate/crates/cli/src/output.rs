//! Result documents. Probabilities are printed with a fixed number of
//! decimals so that output is byte-stable.

use causal_surgery::{min_entry, Matrix, State, VarSpace};
use serde::Serialize;
use serde_json::value::RawValue;

pub type Num = Box<RawValue>;

#[derive(Debug, Clone, Copy)]
pub struct Format {
    pub precision: usize,
}

impl Format {
    pub fn num(&self, x: f64) -> Num {
        let x = if x == 0.0 { 0.0 } else { x };
        RawValue::from_string(format!("{x:.prec$}", prec = self.precision)).expect("finite decimal")
    }

    pub fn nums(&self, xs: &[f64]) -> Vec<Num> {
        xs.iter().map(|&x| self.num(x)).collect()
    }

    pub fn state(&self, w: &State) -> StateBody {
        StateBody {
            variables: variables(w.space()),
            entries: self.nums(w.probs()),
        }
    }

    pub fn channel(&self, m: &Matrix) -> ChannelBody {
        ChannelBody {
            dom: variables(m.dom()),
            cod: variables(m.cod()),
            columns: (0..m.cols()).map(|c| self.nums(&m.column(c))).collect(),
        }
    }
}

/// Small diagnostic values in scientific notation.
pub fn sci(x: f64) -> Num {
    let x = if x == 0.0 { 0.0 } else { x };
    RawValue::from_string(format!("{x:.3e}")).expect("finite number")
}

#[derive(Debug, Serialize)]
pub struct Variable {
    pub name: String,
    pub cardinality: usize,
}

pub fn variables(space: &VarSpace) -> Vec<Variable> {
    space
        .vars()
        .iter()
        .map(|v| Variable {
            name: v.name.clone(),
            cardinality: v.card,
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct StateBody {
    pub variables: Vec<Variable>,
    pub entries: Vec<Num>,
}

/// Same column layout as the `cpts` of a model file.
#[derive(Debug, Serialize)]
pub struct ChannelBody {
    pub dom: Vec<Variable>,
    pub cod: Vec<Variable>,
    pub columns: Vec<Vec<Num>>,
}

#[derive(Debug, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_entry: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_input_entry: Option<Num>,
    pub tolerance: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_error: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comb_deviation: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction_error: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Diagnostics {
    pub fn for_state(w: &State, tol: f64) -> Self {
        let sum: f64 = w.probs().iter().sum();
        Diagnostics {
            min_entry: Some(sci(min_entry(w.as_map()))),
            tolerance: Some(sci(tol)),
            sum_error: Some(sci((sum - 1.0).abs())),
            ..Diagnostics::default()
        }
    }
}

pub fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialise");
    s.push('\n');
    s
}
