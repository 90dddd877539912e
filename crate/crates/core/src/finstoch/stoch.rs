use std::ops::Deref;

use crate::error::{Error, Result};
use crate::finstoch::matrix::{self, delta, RMatrix};
use crate::finstoch::space::VarSpace;
use crate::scalar::Scalar;

/// A column-stochastic matrix, a morphism of `Stoch`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochMap<T>(RMatrix<T>);

impl<T: Scalar> StochMap<T> {
    pub fn new(m: RMatrix<T>, tol: T) -> Result<Self> {
        if let Some((col, sum)) = m
            .column_sums()
            .into_iter()
            .enumerate()
            .find(|(_, s)| (*s - T::one()).abs() > tol)
        {
            return Err(Error::NotStochastic {
                col,
                sum: sum.to_f64_lossy(),
            });
        }
        Ok(StochMap(m))
    }

    /// Validate with the scalar type's default tolerance.
    pub fn from_entries(dom: VarSpace, cod: VarSpace, entries: Vec<T>) -> Result<Self> {
        Self::new(RMatrix::new(dom, cod, entries)?, T::stoch_tol())
    }

    /// Wrap a matrix already known to be stochastic (closure under compose/tensor).
    pub(crate) fn trusted(m: RMatrix<T>) -> Self {
        StochMap(m)
    }

    pub fn identity(space: &VarSpace) -> Self {
        StochMap(RMatrix::identity(space))
    }

    pub fn matrix(&self) -> &RMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> RMatrix<T> {
        self.0
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &StochMap<T>) -> Result<StochMap<T>> {
        Ok(StochMap(matrix::compose(&self.0, &f.0)?))
    }

    pub fn tensor(&self, g: &StochMap<T>) -> StochMap<T> {
        StochMap(matrix::tensor(&self.0, &g.0))
    }

    pub fn relabel(self, dom: VarSpace, cod: VarSpace) -> Result<Self> {
        Ok(StochMap(self.0.relabel(dom, cod)?))
    }
}

impl<T> Deref for StochMap<T> {
    type Target = RMatrix<T>;

    fn deref(&self) -> &RMatrix<T> {
        &self.0
    }
}

/// A probability distribution: a stochastic map out of `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState<T>(StochMap<T>);

impl<T: Scalar> JointState<T> {
    pub fn new(space: VarSpace, probs: Vec<T>) -> Result<Self> {
        Self::with_tol(space, probs, T::stoch_tol())
    }

    pub fn with_tol(space: VarSpace, probs: Vec<T>, tol: T) -> Result<Self> {
        let m = RMatrix::new(VarSpace::unit(), space, probs)?;
        Ok(JointState(StochMap::new(m, tol)?))
    }

    pub fn from_map(map: StochMap<T>) -> Result<Self> {
        if !map.dom().is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "a state has domain I, found {}",
                map.dom()
            )));
        }
        Ok(JointState(map))
    }

    pub(crate) fn trusted(space: VarSpace, probs: Vec<T>) -> Self {
        JointState(StochMap(
            RMatrix::new(VarSpace::unit(), space, probs).expect("nonnegative probabilities"),
        ))
    }

    pub fn point(space: VarSpace, index: usize) -> Self {
        let n = space.dim();
        Self::trusted(space, (0..n).map(|i| delta(i, index)).collect())
    }

    pub fn space(&self) -> &VarSpace {
        self.0.cod()
    }

    pub fn probs(&self) -> &[T] {
        self.0.entries()
    }

    pub fn as_map(&self) -> &StochMap<T> {
        &self.0
    }

    pub fn into_map(self) -> StochMap<T> {
        self.0
    }

    pub fn tensor(&self, other: &JointState<T>) -> JointState<T> {
        JointState(self.0.tensor(&other.0))
    }

    /// Push forward along a channel.
    pub fn push(&self, f: &StochMap<T>) -> Result<JointState<T>> {
        Ok(JointState(f.after(&self.0)?))
    }
}

/// `(copy)_i^{jk} = δ_i^j δ_i^k`.
pub fn copy<T: Scalar>(a: &VarSpace) -> StochMap<T> {
    let n = a.dim();
    StochMap(RMatrix::from_fn(a.clone(), a.tensor(a), |r, c| {
        delta::<T>(r / n, c) * delta(r % n, c)
    }))
}

/// The row of ones `A → I`.
pub fn discard<T: Scalar>(a: &VarSpace) -> StochMap<T> {
    StochMap(RMatrix::from_fn(a.clone(), VarSpace::unit(), |_, _| {
        T::one()
    }))
}

/// The constant column `1/|A|`.
pub fn uniform<T: Scalar>(a: &VarSpace) -> JointState<T> {
    let p = T::one() / T::from_usize_exact(a.dim());
    JointState::trusted(a.clone(), vec![p; a.dim()])
}

/// `σ : A ⊗ B → B ⊗ A`, with `σ_{ij}^{kl} = δ_i^l δ_j^k`.
pub fn swap<T: Scalar>(a: &VarSpace, b: &VarSpace) -> StochMap<T> {
    let (na, nb) = (a.dim(), b.dim());
    StochMap(RMatrix::from_fn(a.tensor(b), b.tensor(a), |r, c| {
        let (k, l) = (r / na, r % na);
        let (i, j) = (c / nb, c % nb);
        delta::<T>(i, l) * delta(j, k)
    }))
}

/// Wire permutation `space → space.select(order)`: output factor `k` is input
/// factor `order[k]`.
pub fn permutation<T: Scalar>(space: &VarSpace, order: &[usize]) -> Result<StochMap<T>> {
    let mut seen = vec![false; space.len()];
    if order.len() != space.len() {
        return Err(Error::InvalidPermutation(format!(
            "{} positions for {} variables",
            order.len(),
            space.len()
        )));
    }
    for &p in order {
        if p >= space.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{order:?}")));
        }
    }
    let target = space.select(order);
    let mut entries = vec![T::zero(); space.dim() * space.dim()];
    let n = space.dim();
    for c in 0..n {
        let digits = space.decode(c);
        let moved: Vec<usize> = order.iter().map(|&p| digits[p]).collect();
        entries[target.encode(&moved) * n + c] = T::one();
    }
    Ok(StochMap(RMatrix::new(space.clone(), target, entries)?))
}

fn positions_of(space: &VarSpace, names: &[&str]) -> Result<Vec<usize>> {
    names.iter().map(|n| space.position(n)).collect()
}

/// Reorder the factors of a state to `order`.
pub fn permute_state<T: Scalar>(omega: &JointState<T>, order: &[&str]) -> Result<JointState<T>> {
    let positions = positions_of(omega.space(), order).map_err(|e| match e {
        Error::UnknownVariable(n) => Error::InvalidPermutation(format!("unknown variable `{n}`")),
        other => other,
    })?;
    let p = permutation(omega.space(), &positions)?;
    omega.push(&p)
}

/// Sum out every variable not in `keep`. Kept variables stay in their order in
/// `omega`.
pub fn marginalize<T: Scalar>(omega: &JointState<T>, keep: &[&str]) -> Result<JointState<T>> {
    let space = omega.space();
    let mut kept = positions_of(space, keep)?;
    kept.sort_unstable();
    kept.dedup();
    let dropped: Vec<usize> = (0..space.len()).filter(|p| !kept.contains(p)).collect();
    let order: Vec<usize> = kept.iter().chain(&dropped).copied().collect();
    let p = permutation(space, &order)?;
    let project =
        StochMap::identity(&space.select(&kept)).tensor(&discard(&space.select(&dropped)));
    let m = project.after(&p)?;
    omega.push(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finstoch::matrix::{compose, is_stochastic, tensor};

    fn space(pairs: &[(&str, usize)]) -> VarSpace {
        VarSpace::of(pairs).unwrap()
    }

    fn smoking_omega() -> JointState<f64> {
        JointState::new(
            space(&[("S", 2), ("T", 2), ("C", 2)]),
            vec![0.5, 0.1, 0.01, 0.02, 0.1, 0.05, 0.02, 0.2],
        )
        .unwrap()
    }

    #[test]
    fn copy_discard_uniform() {
        let a = space(&[("A", 2)]);
        let c = copy::<f64>(&a);
        assert_eq!(c.rows(), 4);
        assert_eq!(c.column(0), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(c.column(1), vec![0.0, 0.0, 0.0, 1.0]);
        assert!(is_stochastic(&c, 0.0));
        assert_eq!(
            discard::<f64>(&space(&[("A", 3)])).entries(),
            &[1.0, 1.0, 1.0]
        );
        assert_eq!(uniform::<f64>(&a).probs(), &[0.5, 0.5]);
    }

    #[test]
    fn tensor_of_uniforms() {
        let a = space(&[("A", 2)]);
        let b = space(&[("B", 2)]);
        let u = uniform::<f64>(&a).tensor(&uniform(&b));
        assert_eq!(u.probs(), &[0.25; 4]);
    }

    #[test]
    fn tensor_of_identities() {
        let a = space(&[("A", 2)]);
        let b = space(&[("B", 3)]);
        let t = tensor(&RMatrix::<f64>::identity(&a), &RMatrix::identity(&b));
        assert_eq!(t, RMatrix::identity(&a.tensor(&b)));
    }

    #[test]
    fn swap_of_product_state() {
        let u = JointState::new(space(&[("U", 2)]), vec![0.3, 0.7]).unwrap();
        let v = JointState::new(space(&[("V", 2)]), vec![0.9, 0.1]).unwrap();
        let swapped = u.tensor(&v).push(&swap(u.space(), v.space())).unwrap();
        assert_eq!(swapped.probs(), v.tensor(&u).probs());
        let via_names = permute_state(&u.tensor(&v), &["V", "U"]).unwrap();
        assert_eq!(via_names, v.tensor(&u));
    }

    #[test]
    fn discard_is_final_for_a_channel() {
        let a = space(&[("A", 2)]);
        let b = space(&[("B", 3)]);
        let f = StochMap::from_entries(a.clone(), b.clone(), vec![0.2, 0.5, 0.3, 0.25, 0.5, 0.25])
            .unwrap();
        let d = compose(&discard(&b), &f).unwrap();
        assert_eq!(d, discard::<f64>(&a).into_matrix());
    }

    #[test]
    fn marginal_of_smoking() {
        let s = marginalize(&smoking_omega(), &["S"]).unwrap();
        assert!((s.probs()[0] - 0.63).abs() < 1e-12);
        assert!((s.probs()[1] - 0.37).abs() < 1e-12);
        assert_eq!(s.space().names(), vec!["S"]);
    }

    #[test]
    fn marginal_keeps_original_order() {
        let sc = marginalize(&smoking_omega(), &["C", "S"]).unwrap();
        assert_eq!(sc.space().names(), vec!["S", "C"]);
        let all = marginalize(&smoking_omega(), &["S", "T", "C"]).unwrap();
        assert_eq!(all, smoking_omega());
    }

    #[test]
    fn marginal_unknown_variable() {
        assert_eq!(
            marginalize(&smoking_omega(), &["X"]),
            Err(Error::UnknownVariable("X".into()))
        );
    }

    #[test]
    fn permute_round_trip() {
        let w = smoking_omega();
        assert_eq!(permute_state(&w, &["S", "T", "C"]).unwrap(), w);
        let tsc = permute_state(&w, &["T", "S", "C"]).unwrap();
        assert_eq!(tsc.probs()[4], 0.01); // T=1,S=0,C=0
        assert_eq!(permute_state(&tsc, &["S", "T", "C"]).unwrap(), w);
    }

    #[test]
    fn permute_rejects_non_permutations() {
        let w = smoking_omega();
        assert!(matches!(
            permute_state(&w, &["S", "T"]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            permute_state(&w, &["S", "S", "C"]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            permute_state(&w, &["S", "T", "Q"]),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn state_must_sum_to_one() {
        let r = JointState::new(space(&[("A", 2)]), vec![0.5, 0.4]);
        assert!(matches!(r, Err(Error::NotStochastic { col: 0, .. })));
    }
}
