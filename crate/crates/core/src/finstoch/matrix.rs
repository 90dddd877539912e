use std::fmt;

use crate::error::{Error, Result};
use crate::finstoch::space::VarSpace;
use crate::scalar::Scalar;

/// A nonnegative matrix `dom → cod`, a morphism of `Mat(R+)`.
///
/// Stored row-major with `|cod|` rows and `|dom|` columns: the row index is
/// the output, the column index the input.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix<T> {
    dom: VarSpace,
    cod: VarSpace,
    entries: Vec<T>,
}

impl<T: Scalar> RMatrix<T> {
    pub fn new(dom: VarSpace, cod: VarSpace, entries: Vec<T>) -> Result<Self> {
        let (rows, cols) = (cod.dim(), dom.dim());
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|x| *x < T::zero()) {
            return Err(Error::NegativeEntry {
                row: pos / cols,
                col: pos % cols,
                value: entries[pos].to_f64_lossy(),
            });
        }
        Ok(RMatrix { dom, cod, entries })
    }

    /// Build from a function of `(row, col)`.
    pub fn from_fn(dom: VarSpace, cod: VarSpace, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let (rows, cols) = (cod.dim(), dom.dim());
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RMatrix { dom, cod, entries }
    }

    pub fn identity(space: &VarSpace) -> Self {
        Self::from_fn(space.clone(), space.clone(), |r, c| delta(r, c))
    }

    pub fn dom(&self) -> &VarSpace {
        &self.dom
    }

    pub fn cod(&self) -> &VarSpace {
        &self.cod
    }

    pub fn rows(&self) -> usize {
        self.cod.dim()
    }

    pub fn cols(&self) -> usize {
        self.dom.dim()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries[row * self.cols() + col]
    }

    pub fn column(&self, col: usize) -> Vec<T> {
        (0..self.rows()).map(|r| self.get(r, col)).collect()
    }

    pub fn column_sums(&self) -> Vec<T> {
        let cols = self.cols();
        let mut sums = vec![T::zero(); cols];
        for (i, x) in self.entries.iter().enumerate() {
            sums[i % cols] = sums[i % cols] + *x;
        }
        sums
    }

    /// Relabel domain and codomain, keeping the cardinalities.
    pub fn relabel(self, dom: VarSpace, cod: VarSpace) -> Result<Self> {
        if !dom.same_shape(&self.dom) || !cod.same_shape(&self.cod) {
            return Err(Error::DimensionMismatch(format!(
                "cannot relabel {} → {} as {} → {}",
                self.dom, self.cod, dom, cod
            )));
        }
        Ok(RMatrix {
            dom,
            cod,
            entries: self.entries,
        })
    }

    /// Largest absolute entrywise difference. Shapes must agree.
    pub fn max_abs_diff(&self, other: &RMatrix<T>) -> Result<T> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (a, b)| m.max_of((*a - *b).abs())))
    }
}

pub(crate) fn delta<T: Scalar>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}

/// Sequential composition `g ∘ f`, i.e. the matrix product `g · f`.
pub fn compose<T: Scalar>(g: &RMatrix<T>, f: &RMatrix<T>) -> Result<RMatrix<T>> {
    if !f.cod.same_shape(&g.dom) {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {} → {} after {} → {}",
            g.dom, g.cod, f.dom, f.cod
        )));
    }
    let (rows, inner, cols) = (g.rows(), g.cols(), f.cols());
    let mut entries = vec![T::zero(); rows * cols];
    for r in 0..rows {
        let out = &mut entries[r * cols..(r + 1) * cols];
        for k in 0..inner {
            let gk = g.entries[r * inner + k];
            if gk == T::zero() {
                continue;
            }
            let frow = &f.entries[k * cols..(k + 1) * cols];
            for (o, x) in out.iter_mut().zip(frow) {
                *o = *o + gk * *x;
            }
        }
    }
    Ok(RMatrix {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        entries,
    })
}

/// Parallel composition `f ⊗ g`, the Kronecker product.
pub fn tensor<T: Scalar>(f: &RMatrix<T>, g: &RMatrix<T>) -> RMatrix<T> {
    let (gr, gc) = (g.rows(), g.cols());
    let dom = f.dom.tensor(&g.dom);
    let cod = f.cod.tensor(&g.cod);
    RMatrix::from_fn(dom, cod, |r, c| {
        f.get(r / gr, c / gc) * g.get(r % gr, c % gc)
    })
}

/// The cap `A ⊗ A → I`, a bent identity wire.
pub fn cap<T: Scalar>(a: &VarSpace) -> RMatrix<T> {
    let n = a.dim();
    RMatrix::from_fn(a.tensor(a), VarSpace::unit(), |_, c| delta(c / n, c % n))
}

/// The cup `I → A ⊗ A`.
pub fn cup<T: Scalar>(a: &VarSpace) -> RMatrix<T> {
    let n = a.dim();
    RMatrix::from_fn(VarSpace::unit(), a.tensor(a), |r, _| delta(r / n, r % n))
}

/// Every entry nonnegative and every column summing to 1 within `tol`.
pub fn is_stochastic<T: Scalar>(f: &RMatrix<T>, tol: T) -> bool {
    f.entries.iter().all(|x| *x >= T::zero())
        && f.column_sums().iter().all(|s| (*s - T::one()).abs() <= tol)
}

/// Strictly positive everywhere.
pub fn has_full_support<T: Scalar>(f: &RMatrix<T>) -> bool {
    f.entries.iter().all(|x| *x > T::zero())
}

/// Smallest entry, reported as a conditioning diagnostic.
pub fn min_entry<T: Scalar>(f: &RMatrix<T>) -> T {
    f.entries
        .iter()
        .copied()
        .reduce(|a, b| a.min_of(b))
        .unwrap_or_else(T::zero)
}

impl<T: Scalar> fmt::Display for RMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} → {}", self.dom, self.cod)?;
        for r in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|c| format!("{}", self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
