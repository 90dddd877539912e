use std::fmt;

use crate::error::{Error, Result};

/// A named finite variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub card: usize,
}

impl Var {
    pub fn new(name: impl Into<String>, card: usize) -> Self {
        Var {
            name: name.into(),
            card,
        }
    }
}

/// An ordered product of finite variables, i.e. an object of `Stoch`.
///
/// Joint indices are mixed-radix with the first variable most significant:
/// the index of `(i1, .., in)` is `((i1 * |A2| + i2) * |A3| + ..)`. The empty
/// space is the monoidal unit `I` and has dimension 1.
///
/// Labels are unique in spaces built with [`VarSpace::new`]. Tensor products
/// may repeat labels (the codomain of `copy(A)` is `A ⊗ A`), so name lookups
/// on such a space report [`Error::DuplicateVariable`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VarSpace {
    vars: Vec<Var>,
}

impl VarSpace {
    pub fn new(vars: Vec<Var>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if v.card == 0 {
                return Err(Error::ZeroCardinality(v.name.clone()));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(VarSpace { vars })
    }

    /// Convenience constructor from `(name, card)` pairs.
    pub fn of(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(n, c)| Var::new(n, c)).collect())
    }

    /// The monoidal unit.
    pub fn unit() -> Self {
        VarSpace { vars: Vec::new() }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vars.iter().map(|v| v.card).product()
    }

    pub fn cards(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.card).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    /// Same cardinality list; labels are ignored.
    pub fn same_shape(&self, other: &VarSpace) -> bool {
        self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(&other.vars)
                .all(|(a, b)| a.card == b.card)
    }

    /// Concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &VarSpace) -> VarSpace {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        VarSpace { vars }
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        let mut hits = self.vars.iter().enumerate().filter(|(_, v)| v.name == name);
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Ok(i),
            (Some(_), Some(_)) => Err(Error::DuplicateVariable(name.to_string())),
            (None, _) => Err(Error::UnknownVariable(name.to_string())),
        }
    }

    /// Sub-space made of the variables at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> VarSpace {
        VarSpace {
            vars: positions.iter().map(|&p| self.vars[p].clone()).collect(),
        }
    }

    /// Row-major strides: the stride of the last variable is 1.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.vars.len()];
        for i in (0..self.vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.vars[i + 1].card;
        }
        strides
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.vars.len());
        digits
            .iter()
            .zip(&self.vars)
            .fold(0, |acc, (&d, v)| acc * v.card + d)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.vars.len()];
        for (slot, v) in digits.iter_mut().zip(&self.vars).rev() {
            *slot = index % v.card;
            index /= v.card;
        }
        digits
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{}:{}", v.name, v.card))
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}
