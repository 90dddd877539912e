use causal_surgery::random::{random_cpt, random_joint};
use causal_surgery::{
    cap, compose, copy, cup, discard, is_stochastic, marginalize, swap, tensor, uniform, Matrix,
    StochMap, VarSpace,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(prefix: &str, cards: &[usize]) -> VarSpace {
    let names: Vec<String> = (0..cards.len()).map(|i| format!("{prefix}{i}")).collect();
    VarSpace::of(
        &names
            .iter()
            .map(String::as_str)
            .zip(cards.iter().copied())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn channel(seed: u64, dom: VarSpace, cod: VarSpace) -> StochMap<f64> {
    let m = random_cpt(&mut ChaCha8Rng::seed_from_u64(seed), dom, cod, 0.0);
    StochMap::new(m, 1e-12).unwrap()
}

fn id(a: &VarSpace) -> Matrix {
    Matrix::identity(a)
}

fn dist(f: &Matrix, g: &Matrix) -> f64 {
    assert_eq!(f.rows(), g.rows());
    assert_eq!(f.cols(), g.cols());
    f.entries()
        .iter()
        .zip(g.entries())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn stochasticity_closed_under_compose_and_tensor(
        a in 1usize..=5, b in 1usize..=5, c in 1usize..=5, seed in any::<u64>()
    ) {
        let f = channel(seed, space("A", &[a]), space("B", &[b]));
        let g = channel(seed ^ 1, space("B", &[b]), space("C", &[c]));
        prop_assert!(is_stochastic(&compose(&g, &f).unwrap(), 1e-12));
        prop_assert!(is_stochastic(&tensor(&f, &g), 1e-12));
    }

    #[test]
    fn discard_is_final(a in 1usize..=5, b in 1usize..=5, seed in any::<u64>()) {
        let (da, db) = (space("A", &[a]), space("B", &[b]));
        let f = channel(seed, da.clone(), db.clone());
        let lhs = compose(&discard::<f64>(&db), &f).unwrap();
        prop_assert!(dist(&lhs, &discard::<f64>(&da)) <= 1e-12);
    }

    #[test]
    fn tensor_matches_entrywise_product(
        a in 1usize..=3, b in 1usize..=3, c in 1usize..=3, d in 1usize..=3, seed in any::<u64>()
    ) {
        let f = channel(seed, space("A", &[a]), space("B", &[b]));
        let g = channel(seed ^ 7, space("C", &[c]), space("D", &[d]));
        let t = tensor(&f, &g);
        for (i, k) in (0..a).flat_map(|i| (0..c).map(move |k| (i, k))) {
            for (j, l) in (0..b).flat_map(|j| (0..d).map(move |l| (j, l))) {
                let want = f.get(j, i) * g.get(l, k);
                prop_assert!((t.get(j * d + l, i * c + k) - want).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn marginalize_matches_index_summation(
        cards in prop::collection::vec(1usize..=4, 1..=4), mask in any::<u8>(), seed in any::<u64>()
    ) {
        let sp = space("V", &cards);
        let w = random_joint(&mut ChaCha8Rng::seed_from_u64(seed), sp.clone(), 0.0);
        let keep: Vec<usize> = (0..cards.len()).filter(|i| mask >> i & 1 == 1).collect();
        let names: Vec<String> = keep.iter().map(|i| format!("V{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let m = marginalize(&w, &refs).unwrap();
        let kept = sp.select(&keep);
        let mut want = vec![0.0; kept.dim()];
        for (idx, p) in w.probs().iter().enumerate() {
            let digits = sp.decode(idx);
            let sub: Vec<usize> = keep.iter().map(|&i| digits[i]).collect();
            want[kept.encode(&sub)] += p;
        }
        for (x, y) in m.probs().iter().zip(&want) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn cdu_axioms_for_small_cardinalities() {
    let unit = VarSpace::unit();
    for n in 1..=5 {
        let a = space("A", &[n]);
        let cp = copy::<f64>(&a);
        let del = discard::<f64>(&a);
        // coassociativity
        let left = compose(&tensor(&cp, &id(&a)), &cp).unwrap();
        let right = compose(&tensor(&id(&a), &cp), &cp).unwrap();
        assert!(dist(&left, &right) <= 1e-12);
        // counit on both sides
        assert!(dist(&compose(&tensor(&del, &id(&a)), &cp).unwrap(), &id(&a)) <= 1e-12);
        assert!(dist(&compose(&tensor(&id(&a), &del), &cp).unwrap(), &id(&a)) <= 1e-12);
        // cocommutativity
        let sw = swap::<f64>(&a, &a);
        assert!(dist(&compose(&sw, &cp).unwrap(), &cp) <= 1e-12);
        // discard after uniform is the identity on the unit
        let du = compose(&del, uniform::<f64>(&a).as_map()).unwrap();
        assert!(dist(&du, &id(&unit)) <= 1e-12);
        // discard of a tensor is the tensor of discards
        let b = space("B", &[6 - n]);
        assert!(
            dist(
                &discard::<f64>(&a.tensor(&b)),
                &tensor(&del, &discard::<f64>(&b))
            ) <= 1e-12
        );
    }
}

#[test]
fn yanking_is_exact() {
    for n in 1..=5 {
        let a = space("A", &[n]);
        let lhs = compose(
            &tensor(&cap::<f64>(&a), &id(&a)),
            &tensor(&id(&a), &cup::<f64>(&a)),
        )
        .unwrap();
        assert_eq!(lhs.entries(), id(&a).entries());
        let rhs = compose(
            &tensor(&id(&a), &cap::<f64>(&a)),
            &tensor(&cup::<f64>(&a), &id(&a)),
        )
        .unwrap();
        assert_eq!(rhs.entries(), id(&a).entries());
        let trace = compose(&cap::<f64>(&a), &cup::<f64>(&a)).unwrap();
        assert_eq!(trace.entries(), &[n as f64]);
        assert!(!is_stochastic(&cup::<f64>(&a), 1e-9) || n == 1);
    }
}

#[test]
fn swap_is_an_involution() {
    let (a, b) = (space("A", &[2]), space("B", &[3]));
    let round = compose(&swap::<f64>(&b, &a), &swap::<f64>(&a, &b)).unwrap();
    assert!(dist(&round, &id(&a.tensor(&b))) == 0.0);
}
