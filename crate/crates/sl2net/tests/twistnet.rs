use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2net::specfun::TruncationPolicy;
use sl2net::twistnet::{
    check_composition, check_twist_edge, compositions, eps_independence_check, network, sample_edge_point, twisted_unitarity_check, DEFAULT_EPS,
};

const POINTS: usize = 24;

#[test]
fn every_edge_holds_on_random_points() {
    let pol = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = Vec::new();
    for edge in network() {
        let mut max = 0.0f64;
        for _ in 0..POINTS {
            let pt = sample_edge_point(&edge, &mut rng);
            let rep = check_twist_edge(&edge, &pt, DEFAULT_EPS, &pol, 1e-8).unwrap();
            max = max.max(rep.residual);
        }
        worst.push((edge.name(), max));
    }
    let bad: Vec<_> = worst.iter().filter(|(_, r)| *r > 1e-8).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn every_composition_holds_on_random_points() {
    let pol = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for comp in compositions() {
        for _ in 0..POINTS {
            let pt = comp.sample(&mut rng);
            let rep = check_composition(&comp, &pt, &pol, 1e-9).unwrap();
            assert!(rep.pass, "{} at {}: {}", comp.name(), pt, rep.residual);
        }
    }
}

#[test]
fn homothetical_images_do_not_depend_on_eps() {
    let pol = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for edge in network().into_iter().filter(|e| e.twist.name().starts_with('H')) {
        let pt = sample_edge_point(&edge, &mut rng);
        for eps in [0.3, 1.0, 2.5] {
            let rep = check_twist_edge(&edge, &pt, eps, &pol, 1e-9).unwrap();
            assert!(rep.pass, "{} eps={eps}: {}", edge.name(), rep.residual);
        }
    }
}

#[test]
fn h_images_are_unitary_and_eps_free() {
    let pol = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for edge in network().into_iter().filter(|e| e.twist.name().starts_with('H')) {
        for _ in 0..8 {
            let pt = sample_edge_point(&edge, &mut rng);
            let u = twisted_unitarity_check(&edge, &pt, &pol, 1e-9).unwrap();
            assert!(u.pass, "{} unitarity at {pt}: {}", edge.name(), u.residual);
            let e = eps_independence_check(&edge, &pt, &[0.3, 2.5], &pol, 1e-9).unwrap();
            assert!(e.pass, "{} eps at {pt}: {}", edge.name(), e.residual);
        }
    }
}
