use causal_surgery::random::{random_distribution, random_joint};
use causal_surgery::{
    comb_disintegrate, comb_plug, comb_plug_compact, comb_plug_cut, disintegrate, is_comb2,
    marginalize, Channel, Comb, ExactState, JointState, Rational, State, VarSpace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn space(prefix: &str, n: usize, rng: &mut ChaCha8Rng) -> VarSpace {
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let pairs: Vec<(&str, usize)> = names
        .iter()
        .map(|s| (s.as_str(), rng.gen_range(1..=4)))
        .collect();
    VarSpace::of(&pairs).unwrap()
}

/// A comb `f_j^{ik} = a^i h_{ij}^k` and a channel `g_i^j`, all strictly positive.
fn random_pair(rng: &mut ChaCha8Rng) -> (Comb, Channel) {
    let (a, b, c) = (space("A", 1, rng), space("B", 1, rng), space("C", 1, rng));
    let (na, nb, nc) = (a.dim(), b.dim(), c.dim());
    let prior = random_distribution(rng, na, 0.05);
    let h: Vec<Vec<f64>> = (0..na * nb)
        .map(|_| random_distribution(rng, nc, 0.05))
        .collect();
    let mut f = vec![0.0; na * nc * nb];
    for i in 0..na {
        for k in 0..nc {
            for j in 0..nb {
                f[(i * nc + k) * nb + j] = prior[i] * h[i * nb + j][k];
            }
        }
    }
    let g_cols: Vec<Vec<f64>> = (0..na)
        .map(|_| random_distribution(rng, nb, 0.05))
        .collect();
    let g: Vec<f64> = (0..nb)
        .flat_map(|j| g_cols.iter().map(move |col| col[j]))
        .collect();
    let comb = Comb::new(
        Channel::from_entries(b.clone(), a.tensor(&c), f).unwrap(),
        1,
        1e-12,
    )
    .unwrap();
    (comb, Channel::from_entries(a, b, g).unwrap())
}

#[test]
fn disintegration_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let sp = space("V", n, &mut rng);
        let w = random_joint(&mut rng, sp, 0.001);
        let split = rng.gen_range(1..n);
        let back = disintegrate(&w, split).unwrap().recompose().unwrap();
        assert!(max_diff(back.probs(), w.probs()) <= 1e-12);
    }
}

#[test]
fn comb_disintegration_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(3..=4);
        let sp = space("V", n, &mut rng);
        let w = random_joint(&mut rng, sp, 0.001);
        let a_len = rng.gen_range(1..=n - 2);
        let b_len = rng.gen_range(1..=n - 1 - a_len);
        let (f, g) = comb_disintegrate(&w, a_len, b_len).unwrap();
        assert!(is_comb2(f.map(), a_len, 1e-10));
        assert!(max_diff(comb_plug(&f, &g).unwrap().probs(), w.probs()) <= 1e-12);
    }
}

#[test]
fn plug_then_disintegrate_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (f, g) = random_pair(&mut rng);
        let w = comb_plug(&f, &g).unwrap();
        let (f2, g2) = comb_disintegrate(&w, 1, 1).unwrap();
        assert!(max_diff(f2.map().entries(), f.map().entries()) <= 1e-10);
        assert!(max_diff(g2.entries(), g.entries()) <= 1e-10);
    }
}

#[test]
fn compact_plug_agrees_with_direct_plug() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let (f, g) = random_pair(&mut rng);
        let direct = comb_plug(&f, &g).unwrap();
        let compact = comb_plug_compact(&f, &g).unwrap();
        assert!(max_diff(compact.entries(), direct.probs()) <= 1e-15);
    }
}

#[test]
fn cut_plug_is_normalised_with_uniform_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (f, g) = random_pair(&mut rng);
        let w = comb_plug_cut(&f, &g).unwrap();
        assert!((w.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let a = marginalize(&w, &["A0"]).unwrap();
        let k = a.probs().len() as f64;
        assert!(a.probs().iter().all(|p| (p - 1.0 / k).abs() <= 1e-12));
    }
}

#[test]
fn trivial_first_factor_reduces_to_disintegration() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let b = space("B", 1, &mut rng);
        let c = space("C", 1, &mut rng);
        let bc = random_joint(&mut rng, b.tensor(&c), 0.01);
        let one = JointState::point(VarSpace::of(&[("I", 1)]).unwrap(), 0);
        let w = one.tensor(&bc);
        let (f, g) = comb_disintegrate(&w, 1, 1).unwrap();
        let d = disintegrate(&bc, 1).unwrap();
        assert!(max_diff(g.entries(), d.prior.probs()) <= 1e-15);
        assert!(max_diff(f.map().entries(), d.channel.entries()) <= 1e-15);
        let cut = comb_plug_cut(&f, &g).unwrap();
        assert!(max_diff(cut.probs(), comb_plug(&f, &g).unwrap().probs()) <= 1e-15);
    }
}

#[test]
fn perturbed_pairs_do_not_reconstruct() {
    let w = State::new(
        VarSpace::of(&[("S", 2), ("T", 2), ("C", 2)]).unwrap(),
        vec![0.5, 0.1, 0.01, 0.02, 0.1, 0.05, 0.02, 0.2],
    )
    .unwrap();
    let (f, g) = comb_disintegrate(&w, 1, 1).unwrap();
    // Shift mass between the two C outcomes of one (i, j): still a comb.
    let mut fe = f.map().entries().to_vec();
    fe[0] += 0.01; // (i=0, k=0), j=0
    fe[2] -= 0.01; // (i=0, k=1), j=0
    let f2 = Comb::new(
        Channel::from_entries(f.map().dom().clone(), f.map().cod().clone(), fe).unwrap(),
        1,
        1e-9,
    )
    .unwrap();
    assert!(max_diff(comb_plug(&f2, &g).unwrap().probs(), w.probs()) > 1e-3);
    // A different channel with the same comb.
    let ge = g
        .entries()
        .iter()
        .enumerate()
        .map(|(n, x)| x + if n < 2 { -0.01 } else { 0.01 })
        .collect();
    let g2 = Channel::from_entries(g.dom().clone(), g.cod().clone(), ge).unwrap();
    assert!(max_diff(comb_plug(&f, &g2).unwrap().probs(), w.probs()) > 1e-3);
}

#[test]
fn generic_matrix_is_not_a_comb() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let b = VarSpace::of(&[("B", 2)]).unwrap();
    let ac = VarSpace::of(&[("A", 2), ("C", 2)]).unwrap();
    let cols: Vec<Vec<f64>> = (0..2)
        .map(|_| random_distribution(&mut rng, 4, 0.01))
        .collect();
    let entries = (0..4)
        .flat_map(|r| cols.iter().map(move |c| c[r]))
        .collect();
    let m = Channel::from_entries(b, ac, entries).unwrap();
    assert!(!is_comb2(&m, 1, 1e-10));
}

#[test]
fn exact_arithmetic_on_smoking_joint() {
    let r = |n: i64| Rational::new(n, 100);
    let w = ExactState::new(
        VarSpace::of(&[("S", 2), ("T", 2), ("C", 2)]).unwrap(),
        [50, 10, 1, 2, 10, 5, 2, 20].map(r).to_vec(),
    )
    .unwrap();
    let (f, g) = comb_disintegrate(&w, 1, 1).unwrap();
    assert!(is_comb2(f.map(), 1, Rational::from_integer(0)));
    assert_eq!(comb_plug(&f, &g).unwrap(), w);
    let cut = comb_plug_cut(&f, &g).unwrap();
    assert_eq!(cut.probs()[0], Rational::new(463, 1260));
    assert_eq!(
        cut.probs().iter().copied().sum::<Rational>(),
        Rational::from_integer(1)
    );
}

#[test]
fn single_precision_pipeline() {
    let w = JointState::<f32>::new(
        VarSpace::of(&[("S", 2), ("T", 2), ("C", 2)]).unwrap(),
        vec![0.5, 0.1, 0.01, 0.02, 0.1, 0.05, 0.02, 0.2],
    )
    .unwrap();
    let (f, g) = comb_disintegrate(&w, 1, 1).unwrap();
    let cut = comb_plug_cut(&f, &g).unwrap();
    assert!((cut.probs()[0] - 0.367460).abs() < 1e-5);
}
