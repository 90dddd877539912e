//! Disintegration, comb disintegration, comb plugging, and the pipeline from
//! an observational joint to an interventional one.

use crate::error::{Error, Result};
use crate::finstoch::{
    cap, compose, copy, cup, marginalize, permutation, permute_state, tensor, uniform, JointState,
    RMatrix, StochMap, VarSpace,
};
use crate::scalar::Scalar;
use crate::syntax::{ComponentSplit, Identification, SurgeryFactorisation};

/// A state on `A` and a channel `A → B` that recombine to a joint on `A ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Disintegration<T> {
    pub prior: JointState<T>,
    pub channel: StochMap<T>,
}

impl<T: Scalar> Disintegration<T> {
    /// Copy the prior and feed one copy through the channel.
    pub fn recompose(&self) -> Result<JointState<T>> {
        let a = self.prior.space();
        let branch = StochMap::identity(a).tensor(&self.channel);
        self.prior.push(&branch.after(&copy(a))?)
    }
}

fn check_full_support<T: Scalar>(omega: &JointState<T>) -> Result<()> {
    match omega.probs().iter().position(|p| *p <= T::zero()) {
        Some(index) => Err(Error::NoFullSupport { index }),
        None => Ok(()),
    }
}

fn split_space(space: &VarSpace, at: &[usize]) -> Vec<VarSpace> {
    let mut out = Vec::new();
    let mut start = 0;
    for &end in at.iter().chain(std::iter::once(&space.len())) {
        out.push(space.select(&(start..end).collect::<Vec<_>>()));
        start = end;
    }
    out
}

/// Factor a full-support joint on `A ⊗ B` (the first `split` variables form
/// `A`) into its marginal on `A` and the conditional `A → B`.
pub fn disintegrate<T: Scalar>(omega: &JointState<T>, split: usize) -> Result<Disintegration<T>> {
    let space = omega.space();
    if split > space.len() {
        return Err(Error::DimensionMismatch(format!(
            "cannot split {} variables at {split}",
            space.len()
        )));
    }
    check_full_support(omega)?;
    let parts = split_space(space, &[split]);
    let (a, b) = (&parts[0], &parts[1]);
    let (na, nb) = (a.dim(), b.dim());
    let w = omega.probs();

    let prior: Vec<T> = (0..na)
        .map(|i| {
            w[i * nb..(i + 1) * nb]
                .iter()
                .fold(T::zero(), |s, x| s + *x)
        })
        .collect();
    let channel = RMatrix::from_fn(a.clone(), b.clone(), |j, i| w[i * nb + j] / prior[i]);
    Ok(Disintegration {
        prior: JointState::trusted(a.clone(), prior),
        channel: StochMap::trusted(channel),
    })
}

/// Disintegrate the marginal on `a ∪ b`, with `a` as the conditioning side.
pub fn disintegrate_on<T: Scalar>(
    omega: &JointState<T>,
    a: &[&str],
    b: &[&str],
) -> Result<Disintegration<T>> {
    let names: Vec<&str> = a.iter().chain(b).copied().collect();
    let local = permute_state(&marginalize(omega, &names)?, &names)?;
    disintegrate(&local, a.len())
}

/// A 2-comb `B → A ⊗ C`: discarding `C` leaves a map that ignores `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comb2<T> {
    map: StochMap<T>,
    a_len: usize,
}

impl<T: Scalar> Comb2<T> {
    /// `a_len` is the number of codomain variables forming `A`.
    pub fn new(map: StochMap<T>, a_len: usize, tol: T) -> Result<Self> {
        if a_len > map.cod().len() {
            return Err(Error::DimensionMismatch(format!(
                "A has {a_len} variables but the codomain only {}",
                map.cod().len()
            )));
        }
        if !is_comb2(&map, a_len, tol) {
            return Err(Error::GroupingMismatch(format!(
                "comb law violated by {}",
                comb_deviation(&map, a_len).to_f64_lossy()
            )));
        }
        Ok(Comb2 { map, a_len })
    }

    pub fn map(&self) -> &StochMap<T> {
        &self.map
    }

    pub fn a_space(&self) -> VarSpace {
        split_space(self.map.cod(), &[self.a_len]).swap_remove(0)
    }

    pub fn b_space(&self) -> &VarSpace {
        self.map.dom()
    }

    pub fn c_space(&self) -> VarSpace {
        split_space(self.map.cod(), &[self.a_len]).swap_remove(1)
    }
}

/// Largest spread over `B` of `Σ_k f_j^{ik}`, maximised over `i`.
pub fn comb_deviation<T: Scalar>(f: &RMatrix<T>, a_len: usize) -> T {
    let parts = split_space(f.cod(), &[a_len]);
    let (na, nc) = (parts[0].dim(), parts[1].dim());
    let mut worst = T::zero();
    for i in 0..na {
        let sums = (0..f.cols()).map(|j| (0..nc).fold(T::zero(), |s, k| s + f.get(i * nc + k, j)));
        let (lo, hi) = sums
            .fold(None, |acc: Option<(T, T)>, s| match acc {
                None => Some((s, s)),
                Some((lo, hi)) => Some((lo.min_of(s), hi.max_of(s))),
            })
            .unwrap_or((T::zero(), T::zero()));
        worst = worst.max_of(hi - lo);
    }
    worst
}

/// The 2-comb law within `tol`.
pub fn is_comb2<T: Scalar>(f: &RMatrix<T>, a_len: usize, tol: T) -> bool {
    a_len <= f.cod().len() && comb_deviation(f, a_len) <= tol
}

/// Factor a full-support joint on `A ⊗ B ⊗ C` into a 2-comb `f : B → A ⊗ C`
/// and a channel `g : A → B` with `ω^{ijk} = f_j^{ik} g_i^j`.
///
/// Built by disintegrating twice: `ω` into `(ω', c)` over `A ⊗ B`, then `ω'`
/// into `(a, b)`. Then `g = b` and `f_j^{ik} = a^i c_{ij}^k`.
pub fn comb_disintegrate<T: Scalar>(
    omega: &JointState<T>,
    a_len: usize,
    b_len: usize,
) -> Result<(Comb2<T>, StochMap<T>)> {
    let space = omega.space();
    if a_len + b_len > space.len() {
        return Err(Error::DimensionMismatch(format!(
            "grouping {a_len}+{b_len} exceeds {} variables",
            space.len()
        )));
    }
    let outer = disintegrate(omega, a_len + b_len)?;
    let inner = disintegrate(&outer.prior, a_len)?;
    let parts = split_space(space, &[a_len, a_len + b_len]);
    let (a, b, c) = (&parts[0], &parts[1], &parts[2]);
    let (nb, nc) = (b.dim(), c.dim());
    let prior = inner.prior.probs();
    let cond = &outer.channel;

    let f = RMatrix::from_fn(b.clone(), a.tensor(c), |row, j| {
        let (i, k) = (row / nc, row % nc);
        prior[i] * cond.get(k, i * nb + j)
    });
    let comb = Comb2 {
        map: StochMap::trusted(f),
        a_len,
    };
    Ok((comb, inner.channel))
}

fn check_plug_shapes<T: Scalar>(f: &Comb2<T>, g: &StochMap<T>) -> Result<()> {
    if !g.dom().same_shape(&f.a_space()) || !g.cod().same_shape(f.b_space()) {
        return Err(Error::DimensionMismatch(format!(
            "cannot plug {} → {} into a comb {} → {}",
            g.dom(),
            g.cod(),
            f.b_space(),
            f.map.cod()
        )));
    }
    Ok(())
}

/// Plug `g` into the hole of `f`: `ω^{ijk} = f_j^{ik} g_i^j`.
pub fn comb_plug<T: Scalar>(f: &Comb2<T>, g: &StochMap<T>) -> Result<JointState<T>> {
    check_plug_shapes(f, g)?;
    let (a, c) = (f.a_space(), f.c_space());
    let b = f.b_space().clone();
    let (nb, nc) = (b.dim(), c.dim());
    let space = a.tensor(&b).tensor(&c);
    let probs = (0..space.dim())
        .map(|idx| {
            let (i, j, k) = (idx / (nb * nc), (idx / nc) % nb, idx % nc);
            f.map.get(i * nc + k, j) * g.get(j, i)
        })
        .collect();
    Ok(JointState::trusted(space, probs))
}

/// Plug `g` into `f` with the wire between them cut: `f`'s `A` output is
/// discarded and a uniform `A` is copied to both the output and `g`.
///
/// `ω'^{ijk} = (1/|A|) g_i^j Σ_{i'} f_j^{i'k}`.
pub fn comb_plug_cut<T: Scalar>(f: &Comb2<T>, g: &StochMap<T>) -> Result<JointState<T>> {
    check_plug_shapes(f, g)?;
    let (a, c) = (f.a_space(), f.c_space());
    let b = f.b_space().clone();
    let (na, nb, nc) = (a.dim(), b.dim(), c.dim());
    let u = T::one() / T::from_usize_exact(na);
    let space = a.tensor(&b).tensor(&c);
    let probs = (0..space.dim())
        .map(|idx| {
            let (i, j, k) = (idx / (nb * nc), (idx / nc) % nb, idx % nc);
            let through = (0..na).fold(T::zero(), |s, i2| s + f.map.get(i2 * nc + k, j));
            u * g.get(j, i) * through
        })
        .collect();
    Ok(JointState::trusted(space, probs))
}

/// The same plugging as [`comb_plug`], computed in `Mat(R+)` by composing
/// `f` and `g` and bending `g`'s output back into `f`'s input with a cap.
pub fn comb_plug_compact<T: Scalar>(f: &Comb2<T>, g: &StochMap<T>) -> Result<RMatrix<T>> {
    check_plug_shapes(f, g)?;
    let (a, c) = (f.a_space(), f.c_space());
    let b = f.b_space().clone();
    let id = RMatrix::identity;

    // I → B ⊗ A ⊗ C, entries f_{j'}^{ik}
    let bent_f = compose(&tensor(&id(&b), f.map.matrix()), &cup(&b))?;
    // A → A ⊗ B ⊗ B, entries g_i^j δ_{j j''}
    let feed = compose(
        &tensor(&id(&a), &compose(copy::<T>(&b).matrix(), g.matrix())?),
        copy::<T>(&a).matrix(),
    )?;
    // I → B ⊗ A ⊗ B ⊗ B ⊗ C
    let wide = compose(&tensor(&tensor(&id(&b), &feed), &id(&c)), &bent_f)?;

    let (lb, la, lc) = (b.len(), a.len(), c.len());
    let blocks = [0, lb, lb + la, 2 * lb + la, 3 * lb + la, 3 * lb + la + lc];
    let range = |k: usize| blocks[k]..blocks[k + 1];
    // (j', j, i, j'', k)
    let order: Vec<usize> = range(0)
        .chain(range(2))
        .chain(range(1))
        .chain(range(3))
        .chain(range(4))
        .collect();
    let arranged = compose(permutation::<T>(wide.cod(), &order)?.matrix(), &wide)?;
    let close = tensor(&cap(&b), &id(&a.tensor(&b).tensor(&c)));
    compose(&close, &arranged)
}

/// Interventional joint for the comb shape: permute into `(A, B, C)`,
/// comb-disintegrate, re-plug with a cut, and permute back.
pub fn intervene_comb<T: Scalar>(
    omega: &JointState<T>,
    fact: &SurgeryFactorisation,
) -> Result<JointState<T>> {
    let original = omega.space().names();
    let grouping = fact.grouping.order();
    check_same_variables(&original, &grouping)?;
    check_full_support(omega)?;

    let result = if fact.grouping.b.is_empty() {
        let x = fact.target.as_str();
        let others: Vec<&str> = original.iter().copied().filter(|n| *n != x).collect();
        let xs = omega.space().select(&[omega.space().position(x)?]);
        uniform(&xs).tensor(&marginalize(omega, &others)?)
    } else {
        let arranged = permute_state(omega, &grouping)?;
        let (f, g) = comb_disintegrate(&arranged, fact.grouping.a.len(), fact.grouping.b.len())?;
        comb_plug_cut(&f, &g)?
    };
    permute_state(&result, &original)
}

fn check_same_variables(have: &[&str], want: &[&str]) -> Result<()> {
    let mut a = have.to_vec();
    let mut b = want.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::GroupingMismatch(format!(
            "joint has variables {have:?}, factorisation expects {want:?}"
        )));
    }
    Ok(())
}

/// Chain-rule factors of a joint split into a comb side and a channel side.
///
/// With the variables in a topological order, the comb side collects
/// `Π ω(v_t | v_{<t})` over the marked positions and the channel side the
/// product over the rest; their entrywise product is `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFactors<T> {
    pub comb: Vec<T>,
    pub channel: Vec<T>,
    pub space: VarSpace,
}

pub fn chain_disintegrate<T: Scalar>(
    omega: &JointState<T>,
    comb_side: &[bool],
) -> Result<ChainFactors<T>> {
    let space = omega.space().clone();
    if comb_side.len() != space.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} side flags for {} variables",
            comb_side.len(),
            space.len()
        )));
    }
    check_full_support(omega)?;
    let n = space.dim();
    let strides = space.strides();
    let mut comb = vec![T::one(); n];
    let mut channel = vec![T::one(); n];
    // prefix[t] holds the marginal on the first t variables, indexed by the
    // full index divided by strides[t-1].
    let mut prev: Vec<T> = vec![T::one()];
    for t in 0..space.len() {
        let block = strides[t];
        let marg: Vec<T> = omega
            .probs()
            .chunks(block)
            .map(|c| c.iter().fold(T::zero(), |s, x| s + *x))
            .collect();
        let card = space.vars()[t].card;
        let side = if comb_side[t] {
            &mut comb
        } else {
            &mut channel
        };
        for (idx, slot) in side.iter_mut().enumerate() {
            let here = idx / block;
            *slot = *slot * marg[here] / prev[here / card];
        }
        prev = marg;
    }
    Ok(ChainFactors {
        comb,
        channel,
        space,
    })
}

/// `ω'(v) = (1/|X|) channel(v) Σ_{x'} comb(v[x := x'])` with `X` at position
/// `target`.
pub fn chain_plug_cut<T: Scalar>(
    factors: &ChainFactors<T>,
    target: usize,
) -> Result<JointState<T>> {
    let space = &factors.space;
    if target >= space.len() {
        return Err(Error::DimensionMismatch(format!(
            "no variable at position {target}"
        )));
    }
    let card = space.vars()[target].card;
    let stride = space.strides()[target];
    let u = T::one() / T::from_usize_exact(card);
    let probs = (0..space.dim())
        .map(|idx| {
            let base = idx - ((idx / stride) % card) * stride;
            let summed = (0..card).fold(T::zero(), |s, x| s + factors.comb[base + x * stride]);
            u * factors.channel[idx] * summed
        })
        .collect();
    Ok(JointState::trusted(space.clone(), probs))
}

/// Interventional joint for a confounded-component split.
pub fn intervene_component<T: Scalar>(
    omega: &JointState<T>,
    split: &ComponentSplit,
) -> Result<JointState<T>> {
    let original = omega.space().names();
    let order: Vec<&str> = split.order.iter().map(String::as_str).collect();
    check_same_variables(&original, &order)?;
    let arranged = permute_state(omega, &order)?;
    let sides: Vec<bool> = order.iter().map(|n| split.in_component(n)).collect();
    let target = order
        .iter()
        .position(|n| *n == split.target)
        .ok_or_else(|| {
            Error::GroupingMismatch(format!("target `{}` not in order", split.target))
        })?;
    let factors = chain_disintegrate(&arranged, &sides)?;
    let result = chain_plug_cut(&factors, target)?;
    permute_state(&result, &original)
}

/// The interventional distribution computed from the observational one.
pub fn intervene_from_observational<T: Scalar>(
    omega: &JointState<T>,
    ident: &Identification,
) -> Result<JointState<T>> {
    match ident {
        Identification::Comb(f) => intervene_comb(omega, f),
        Identification::Component(s) => intervene_component(omega, s),
    }
}
