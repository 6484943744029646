use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graphon::{embed_real_graphon, marginal_measure, relabel, stepping};
use crate::measures::{MeasureKind, WeightSpace};
use crate::partition::Partition;

fn binary() -> Arc<WeightSpace> {
    WeightSpace::binary().shared()
}

fn canonical() -> Metric {
    Metric::FNorm(TestFamily::canonical(binary()))
}

/// Point-"1" masses `p`, point-"0" masses `-p`.
fn signed_kernel(space: Arc<WeightSpace>, p: &[Vec<f64>]) -> StepGraphon {
    let k = p.len();
    StepGraphon::from_fn(space, Partition::uniform(k), MeasureKind::Signed, |i, j| {
        vec![-p[i][j], p[i][j]]
    })
    .unwrap()
}

fn example_difference() -> StepGraphon {
    signed_kernel(binary(), &[vec![0.2, -0.2], vec![-0.2, 0.2]])
}

fn random_signed(rng: &mut ChaCha8Rng, space: &Arc<WeightSpace>, k: usize) -> StepGraphon {
    let m = space.len();
    let cells = (0..k * k * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    StepGraphon::new(
        space.clone(),
        Partition::uniform(k),
        cells,
        MeasureKind::Signed,
    )
    .unwrap()
}

fn random_probability(rng: &mut ChaCha8Rng, space: &Arc<WeightSpace>, k: usize) -> StepGraphon {
    let m = space.len();
    StepGraphon::from_fn(
        space.clone(),
        Partition::uniform(k),
        MeasureKind::Probability,
        |_, _| {
            let raw: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|x| x / s).collect()
        },
    )
    .unwrap()
}

/// Exhaustive oracle straight from the definition.
fn brute_norm(d: &StepGraphon, metric: &Metric) -> f64 {
    let k = d.k();
    let mut best = 0.0f64;
    for rows in 0..1u32 << k {
        for cols in 0..1u32 << k {
            let r: Vec<usize> = (0..k).filter(|i| rows >> i & 1 == 1).collect();
            let c: Vec<usize> = (0..k).filter(|i| cols >> i & 1 == 1).collect();
            best = best.max(cut_objective(d, None, metric, &r, &c).unwrap());
        }
    }
    best
}

#[test]
fn zero_kernel_has_zero_norm_and_empty_witness() {
    let z = StepGraphon::zero(binary(), Partition::uniform(3));
    let wit = cut_norm_exact(&z, &canonical()).unwrap();
    assert_eq!(wit.value, 0.0);
    assert!(wit.rows.is_empty() && wit.cols.is_empty());
    let h = cut_norm_heuristic(&z, &Metric::Kr, SearchOptions::default()).unwrap();
    assert_eq!(h.value, 0.0);
}

#[test]
fn two_block_difference_fnorm() {
    let wit = cut_norm_exact(&example_difference(), &canonical()).unwrap();
    assert!((wit.value - 0.0375).abs() < 1e-15);
    assert_eq!((wit.rows.clone(), wit.cols.clone()), (vec![0], vec![0]));
    assert_eq!(wit.signs, vec![1, -1, 1]);
}

#[test]
fn two_block_difference_kr() {
    let wit = cut_norm_exact(&example_difference(), &Metric::Kr).unwrap();
    assert!((wit.value - 0.05).abs() < 1e-12);
    assert_eq!(wit.rows.len(), 1);
    assert_eq!(wit.rows, wit.cols);
}

#[test]
fn prohorov_is_not_a_norm() {
    assert!(matches!(
        cut_norm_exact(&example_difference(), &Metric::Prohorov),
        Err(Error::UnsupportedMetric(_))
    ));
}

#[test]
fn witness_value_reevaluates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = WeightSpace::on_line(&[("a", 0.0), ("b", 0.4), ("c", 1.5)], None)
        .unwrap()
        .shared();
    for metric in [
        Metric::Kr,
        Metric::Fm,
        Metric::FNorm(TestFamily::canonical(s.clone())),
    ] {
        let d = random_signed(&mut rng, &s, 4);
        let wit = cut_norm_exact(&d, &metric).unwrap();
        let again = cut_objective(&d, None, &metric, &wit.rows, &wit.cols).unwrap();
        assert!((wit.value - again).abs() < 1e-12);
        assert!(
            (wit.value - brute_norm(&d, &metric)).abs() < 1e-12,
            "{}",
            metric.name()
        );
    }
}

#[test]
fn exact_matches_definition_on_random_kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = binary();
    for k in 1..=4 {
        let d = random_signed(&mut rng, &s, k);
        let wit = cut_norm_exact(&d, &canonical()).unwrap();
        assert!((wit.value - brute_norm(&d, &canonical())).abs() < 1e-12);
    }
}

#[test]
fn prohorov_cut_distance_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = WeightSpace::on_line(&[("a", 0.0), ("b", 0.3), ("c", 0.9)], None)
        .unwrap()
        .shared();
    let u = random_probability(&mut rng, &s, 3);
    let w = random_probability(&mut rng, &s, 3);
    let wit = cut_dist_exact(&u, &w, &Metric::Prohorov).unwrap();
    let mut best = 0.0f64;
    for rows in 0..8u32 {
        for cols in 0..8u32 {
            let r: Vec<usize> = (0..3).filter(|i| rows >> i & 1 == 1).collect();
            let c: Vec<usize> = (0..3).filter(|i| cols >> i & 1 == 1).collect();
            best = best.max(cut_objective(&u, Some(&w), &Metric::Prohorov, &r, &c).unwrap());
        }
    }
    assert!((wit.value - best).abs() < 1e-12);
    assert!(wit.value > 0.0);
}

#[test]
fn cut_distance_to_itself_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_probability(&mut rng, &binary(), 3);
    for metric in [Metric::Prohorov, Metric::Kr, canonical()] {
        assert_eq!(cut_dist_exact(&u, &u, &metric).unwrap().value, 0.0);
    }
}

#[test]
fn constant_graphons_give_measure_norm_on_full_rectangle() {
    let s = WeightSpace::on_line(&[("0", 0.0), ("1", 0.5)], None)
        .unwrap()
        .shared();
    let mu = SignedMeasure::probability(s.clone(), vec![0.2, 0.8]).unwrap();
    let nu = SignedMeasure::probability(s.clone(), vec![0.7, 0.3]).unwrap();
    let u = StepGraphon::constant(&mu, MeasureKind::Probability).unwrap();
    let w = refine_common(
        &StepGraphon::constant(&nu, MeasureKind::Probability).unwrap(),
        &u,
    )
    .unwrap()
    .0;
    let wit = cut_dist_exact(&u, &w, &Metric::Kr).unwrap();
    let expected = crate::measures::kr_norm(&mu.sub(&nu).unwrap()).unwrap();
    assert!((wit.value - expected).abs() < 1e-12);
    assert_eq!(wit.rows, vec![0]);
    assert_eq!(wit.cols, vec![0]);
}

#[test]
fn labeled_distance_sees_relabeling() {
    let s = binary();
    let u = StepGraphon::from_fn(
        s,
        Partition::uniform(2),
        MeasureKind::Probability,
        |i, j| {
            let p = [[0.1, 0.2], [0.3, 0.8]][i][j];
            vec![1.0 - p, p]
        },
    )
    .unwrap();
    let v = relabel(&u, &[1, 0]).unwrap();
    assert!(cut_dist_exact(&u, &v, &canonical()).unwrap().value > 0.1);
}

#[test]
fn heuristic_agrees_with_exact_on_small_kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let s = binary();
    let mut agree = 0;
    for t in 0..100 {
        let d = random_signed(&mut rng, &s, 6);
        let exact = cut_norm_exact(&d, &canonical()).unwrap().value;
        let h = cut_norm_heuristic(
            &d,
            &canonical(),
            SearchOptions {
                seed: t,
                ..Default::default()
            },
        )
        .unwrap()
        .value;
        assert!(h <= exact + 1e-12);
        if (h - exact).abs() <= 1e-9 {
            agree += 1;
        }
    }
    assert!(agree >= 95, "{agree}");
}

#[test]
fn heuristic_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = random_signed(&mut rng, &binary(), 30);
    let opts = SearchOptions {
        restarts: 5,
        seed: 77,
    };
    let a = cut_norm_heuristic(&d, &canonical(), opts).unwrap();
    let b = cut_norm_heuristic(&d, &canonical(), opts).unwrap();
    assert_eq!(a, b);
    let kr = cut_norm_heuristic(&d, &Metric::Kr, opts).unwrap();
    assert_eq!(kr, cut_norm_heuristic(&d, &Metric::Kr, opts).unwrap());
}

#[test]
fn exact_scan_rejects_large_kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let d = random_signed(&mut rng, &binary(), 21);
    assert!(cut_norm_exact(&d, &canonical())
        .unwrap_err()
        .is_capability_limit());
    let (_, bound) = cut_norm(&d, &canonical(), SearchOptions::default()).unwrap();
    assert_eq!(bound, Bound::Lower);
}

#[test]
fn twin_blocks_do_not_count_against_the_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let d = random_signed(&mut rng, &binary(), 3);
    let big = crate::graphon::equipartition(&d, 30).unwrap();
    let a = cut_norm_exact(&d, &Metric::Kr).unwrap();
    let b = cut_norm_exact(&big, &Metric::Kr).unwrap();
    assert!((a.value - b.value).abs() < 1e-12);
    assert_eq!(b.rows.len() % 10, 0);
}

#[test]
fn truncation_is_within_tail_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s = WeightSpace::uniform(4, 1.0).unwrap().shared();
    let fam = TestFamily::canonical(s.clone());
    let u = random_probability(&mut rng, &s, 4);
    let w = random_probability(&mut rng, &s, 4);
    let d = u.difference(&w).unwrap();
    let full = cut_norm_exact(&d, &Metric::FNorm(fam.clone()))
        .unwrap()
        .value;
    for n in 0..fam.len() {
        let t = cut_norm_truncated(&d, &fam, n + 1).unwrap().value;
        assert!(t <= full + 1e-12);
        assert!(t >= full - 0.5f64.powi(n as i32) - 1e-12);
    }
}

#[test]
fn inner_product_examples() {
    let s = binary();
    let fam = TestFamily::canonical(s.clone());
    let w = StepGraphon::constant(
        &SignedMeasure::dirac(s.clone(), 0),
        MeasureKind::Probability,
    )
    .unwrap();
    assert!((f_inner_product(&w, &w, &fam).unwrap() - 1.5).abs() < 1e-15);
    let z = StepGraphon::zero(s.clone(), Partition::uniform(2));
    assert_eq!(f_inner_product(&z, &w, &fam).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let r = random_probability(&mut rng, &s, 3);
        assert!(l2_f_norm(&r, &fam).unwrap() <= 2f64.sqrt() + 1e-12);
        let c = cut_norm_exact(&r, &Metric::FNorm(fam.clone()))
            .unwrap()
            .value;
        assert!(c <= 2f64.sqrt() * l2_f_norm(&r, &fam).unwrap() + 1e-9);
    }
}

#[test]
fn delta_finds_the_inverse_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let w = random_probability(&mut rng, &binary(), 4);
    let sigma = [2, 0, 3, 1];
    let v = relabel(&w, &sigma).unwrap();
    let res = delta_cut(&w, &v, &canonical(), &DeltaOptions::brute(4)).unwrap();
    assert_eq!(res.value, 0.0);
    assert_eq!(res.bound, Bound::Upper);
    let back = relabel(&v, &res.permutation).unwrap();
    assert_eq!(back, w);
    let mut inverse = [0; 4];
    for (i, &s) in sigma.iter().enumerate() {
        inverse[s] = i;
    }
    assert_eq!(res.permutation, inverse);
}

#[test]
fn delta_of_constants_is_measure_norm() {
    let s = binary();
    let mu = SignedMeasure::probability(s.clone(), vec![0.1, 0.9]).unwrap();
    let nu = SignedMeasure::probability(s.clone(), vec![0.6, 0.4]).unwrap();
    let u = StepGraphon::constant(&mu, MeasureKind::Probability).unwrap();
    let w = StepGraphon::constant(&nu, MeasureKind::Probability).unwrap();
    let res = delta_cut(&u, &w, &Metric::Kr, &DeltaOptions::brute(3)).unwrap();
    let expected = crate::measures::kr_norm(&mu.sub(&nu).unwrap()).unwrap();
    assert!((res.value - expected).abs() < 1e-12);
}

#[test]
fn delta_dominates_marginal_distance_and_anneal_is_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let fam = TestFamily::canonical(binary());
    for _ in 0..5 {
        let u = random_probability(&mut rng, &binary(), 2);
        let w = random_probability(&mut rng, &binary(), 4);
        let res = delta_cut(&u, &w, &canonical(), &DeltaOptions::brute(4)).unwrap();
        let lower = crate::measures::f_norm(
            &marginal_measure(&u).sub(&marginal_measure(&w)).unwrap(),
            &fam,
        )
        .unwrap();
        assert!(res.value >= lower - 1e-9);
        let a = delta_cut(&u, &w, &canonical(), &DeltaOptions::anneal(4, 3)).unwrap();
        assert_eq!(
            a,
            delta_cut(&u, &w, &canonical(), &DeltaOptions::anneal(4, 3)).unwrap()
        );
        assert!(a.value >= res.value - 1e-12);
    }
}

#[test]
fn brute_delta_guard() {
    let w = StepGraphon::zero(binary(), Partition::uniform(1));
    assert!(delta_cut(&w, &w, &canonical(), &DeltaOptions::brute(9))
        .unwrap_err()
        .is_capability_limit());
}

#[test]
fn regularity_small_input_is_returned_as_is() {
    let w = embed_real_graphon(
        binary(),
        &[vec![0.9, 0.1], vec![0.1, 0.9]],
        Partition::uniform(2),
    )
    .unwrap();
    let fam = TestFamily::canonical(binary());
    let r = weak_regularity_partition(&w, 4, &fam, &RegularityOptions::default()).unwrap();
    assert_eq!(r.error, 0.0);
    assert_eq!(r.partition.classes(), vec![vec![0], vec![1]]);
    assert_eq!(r.stepped, w);
}

#[test]
fn regularity_with_one_class_is_distance_to_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let w = random_probability(&mut rng, &binary(), 5);
    let fam = TestFamily::canonical(binary());
    let r = weak_regularity_partition(&w, 1, &fam, &RegularityOptions::default()).unwrap();
    let flat = stepping(&w, &Partition::trivial()).unwrap();
    let expected = cut_dist_exact(&w, &flat, &Metric::FNorm(fam.clone()))
        .unwrap()
        .value;
    assert!((r.error - expected).abs() < 1e-12);
    assert_eq!(r.error_bound, Bound::Exact);
    assert!(r.certified_bound >= r.error - 1e-12);
    assert_eq!(r.stepped.k(), 1);
}

#[test]
fn regularity_reduces_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let w = random_probability(&mut rng, &binary(), 12);
    let fam = TestFamily::canonical(binary());
    let one = weak_regularity_partition(&w, 1, &fam, &RegularityOptions::default()).unwrap();
    let many = weak_regularity_partition(&w, 8, &fam, &RegularityOptions::default()).unwrap();
    assert!(many.partition.target_count() <= 8);
    assert!(many.error <= 4.0 / 3f64.sqrt());
    assert!(many.certified_bound >= many.error - 1e-12);
    assert!(one.iterations == 0 && many.iterations >= 1);
}

#[test]
fn witness_json_shape() {
    let wit = CutWitness {
        rows: vec![1],
        cols: vec![0, 1],
        signs: vec![1, -1],
        value: 0.5,
    };
    let json = serde_json::to_string(&wit).unwrap();
    assert_eq!(
        json,
        r#"{"rows":[1],"cols":[0,1],"signs":[1,-1],"value":0.5}"#
    );
    let back: CutWitness = serde_json::from_str(r#"{"rows":[],"cols":[],"value":0}"#).unwrap();
    assert!(back.signs.is_empty());
}
