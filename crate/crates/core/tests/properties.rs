use pgraphon::cutmetric::{
    cut_dist_exact, cut_norm_exact, cut_norm_truncated, delta_cut, l2_f_norm, DeltaOptions, Metric,
};
use pgraphon::graphon::{equipartition, marginal_measure, relabel, stepping};
use pgraphon::harness::{ExperimentReport, Row};
use pgraphon::homdensity::{hom_density_exact, hom_density_mc, DecoratedGraph};
use pgraphon::measures::{
    f_norm, fm_norm, kr_norm, prohorov, MeasureKind, SignedMeasure, TestFamily,
};
use pgraphon::partition::Partition;
use pgraphon::random;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn positive(
    r: &mut ChaCha8Rng,
    space: &std::sync::Arc<pgraphon::measures::WeightSpace>,
) -> SignedMeasure {
    let scale = r.gen_range(0.1..1.5);
    let mass = random::probability(r, space.len())
        .into_iter()
        .map(|x| x * scale)
        .collect();
    SignedMeasure::new(space.clone(), mass).unwrap()
}

fn signed(
    r: &mut ChaCha8Rng,
    space: &std::sync::Arc<pgraphon::measures::WeightSpace>,
) -> SignedMeasure {
    let mass = (0..space.len()).map(|_| r.gen_range(-1.0..1.0)).collect();
    SignedMeasure::new(space.clone(), mass).unwrap()
}

fn permutation(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, r.gen_range(0..=i));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn prohorov_is_a_metric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=6);
        let space = random::space(&mut r, m);
        let (a, b, c) = (positive(&mut r, &space), positive(&mut r, &space), positive(&mut r, &space));
        prop_assert_eq!(prohorov(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(prohorov(&a, &b).unwrap(), prohorov(&b, &a).unwrap());
        let (ab, bc, ac) = (prohorov(&a, &b).unwrap(), prohorov(&b, &c).unwrap(), prohorov(&a, &c).unwrap());
        prop_assert!(ac <= ab + bc + TOL);
    }

    #[test]
    fn norms_are_homogeneous_and_subadditive(seed in any::<u64>(), c in -3.0f64..3.0) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=6);
        let space = random::space(&mut r, m);
        let family = TestFamily::canonical(space.clone());
        let (a, b) = (signed(&mut r, &space), signed(&mut r, &space));
        let norms: [&dyn Fn(&SignedMeasure) -> f64; 3] = [
            &|x| kr_norm(x).unwrap(),
            &|x| fm_norm(x).unwrap(),
            &|x| f_norm(x, &family).unwrap(),
        ];
        for n in norms {
            prop_assert!((n(&a.scale(c)) - c.abs() * n(&a)).abs() <= TOL * (1.0 + n(&a)));
            prop_assert!(n(&a.add(&b).unwrap()) <= n(&a) + n(&b) + TOL);
        }
    }

    #[test]
    fn fm_and_kr_are_equivalent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=8);
        let space = random::space(&mut r, m);
        let mu = signed(&mut r, &space);
        let (fm, kr) = (fm_norm(&mu).unwrap(), kr_norm(&mu).unwrap());
        prop_assert!(fm <= kr + TOL);
        prop_assert!(kr <= 2.0 * fm + TOL);
    }

    #[test]
    fn prohorov_is_quasi_convex(seed in any::<u64>(), alpha in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=5);
        let space = random::space(&mut r, m);
        let ms: Vec<SignedMeasure> = (0..4).map(|_| positive(&mut r, &space)).collect();
        let mixed = prohorov(&ms[0].mix(&ms[1], alpha).unwrap(), &ms[2].mix(&ms[3], alpha).unwrap()).unwrap();
        let worst = prohorov(&ms[0], &ms[2]).unwrap().max(prohorov(&ms[1], &ms[3]).unwrap());
        prop_assert!(mixed <= worst + TOL);
    }

    #[test]
    fn stepping_is_idempotent_and_keeps_kind_and_marginal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=4);
        let space = random::space(&mut r, m);
        let k = r.gen_range(1..=5);
        let w = { let p = random::partition(&mut r, k, 12); random::probability_graphon(&mut r, &space, p) };
        let kp = r.gen_range(1..=4);
        let p = random::partition(&mut r, kp, 12);
        let once = stepping(&w, &p).unwrap();
        prop_assert_eq!(&stepping(&once, &p).unwrap(), &once);
        prop_assert_eq!(once.kind(), MeasureKind::Probability);
        for cell in once.cells().chunks(m) {
            prop_assert!((cell.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
        let (a, b) = (marginal_measure(&once), marginal_measure(&w));
        for (x, y) in a.mass().iter().zip(b.mass()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn relabeling_keeps_marginals_and_densities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random::space(&mut r, 3);
        let family = TestFamily::canonical(space.clone());
        let k = r.gen_range(1..=5);
        let w = random::probability_graphon(&mut r, &space, Partition::uniform(k));
        let sigma = permutation(&mut r, k);
        let v = relabel(&w, &sigma).unwrap();
        let (mv, mw) = (marginal_measure(&v), marginal_measure(&w));
        for (x, y) in mv.mass().iter().zip(mw.mass()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let indices: Vec<usize> = (0..3).map(|_| r.gen_range(0..family.len())).collect();
        let f = DecoratedGraph::from_family(3, vec![(0, 1), (1, 2), (0, 2)], &family, indices).unwrap();
        let (a, b) = (hom_density_exact(&f, &w).unwrap(), hom_density_exact(&f, &v).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn cut_norm_is_dominated_by_l2(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=4);
        let space = random::space(&mut r, m);
        let family = TestFamily::canonical(space.clone());
        let k = r.gen_range(1..=6);
        let d = random::signed_kernel(&mut r, &space, Partition::uniform(k));
        let cut = cut_norm_exact(&d, &Metric::FNorm(family.clone())).unwrap().value;
        prop_assert!(cut <= 2f64.sqrt() * l2_f_norm(&d, &family).unwrap() + TOL);
    }

    #[test]
    fn labeled_distance_is_invariant_under_common_relabeling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random::space(&mut r, 2);
        let k = r.gen_range(1..=5);
        let u = random::probability_graphon(&mut r, &space, Partition::uniform(k));
        let w = random::probability_graphon(&mut r, &space, Partition::uniform(k));
        let sigma = permutation(&mut r, k);
        for metric in [Metric::FNorm(TestFamily::canonical(space.clone())), Metric::Kr, Metric::Prohorov] {
            let a = cut_dist_exact(&u, &w, &metric).unwrap().value;
            let b = cut_dist_exact(&relabel(&u, &sigma).unwrap(), &relabel(&w, &sigma).unwrap(), &metric).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn truncated_f_norm_is_within_the_tail(seed in any::<u64>(), terms in 1usize..=5) {
        let mut r = rng(seed);
        let space = random::space(&mut r, 4);
        let family = TestFamily::canonical(space.clone());
        let u = random::probability_graphon(&mut r, &space, Partition::uniform(4));
        let w = random::probability_graphon(&mut r, &space, Partition::uniform(4));
        let d = u.difference(&w).unwrap();
        let full = cut_norm_exact(&d, &Metric::FNorm(family.clone())).unwrap().value;
        let part = cut_norm_truncated(&d, &family, terms).unwrap().value;
        let tail: f64 = (terms..family.len()).map(TestFamily::weight).sum();
        prop_assert!(part <= full + TOL);
        prop_assert!(part >= full - tail - TOL);
    }

    #[test]
    fn csv_round_trips(rows in prop::collection::vec(
        (any::<u64>(), "[a-z_=;, \"]{0,12}", -1e6f64..1e6, prop::option::of(-1e6f64..1e6)),
        0..8,
    )) {
        let report = ExperimentReport {
            experiment: "prop".into(),
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(t, (seed, params, measured, bound))| {
                    let mut row = Row::at_most("check", params, measured, bound.unwrap_or(f64::INFINITY));
                    row.trial = t as u64;
                    row.seed = seed;
                    row
                })
                .collect(),
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        prop_assert_eq!(ExperimentReport::read_csv(buf.as_slice(), "prop").unwrap(), report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn delta_is_a_pseudometric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random::space(&mut r, 2);
        let metric = Metric::FNorm(TestFamily::canonical(space.clone()));
        let l = 4;
        let ws: Vec<_> = (0..3)
            .map(|_| {
                let k = r.gen_range(1..=4);
                equipartition(&{ let p = random::partition(&mut r, k, l); random::probability_graphon(&mut r, &space, p) }, l).unwrap()
            })
            .collect();
        let d = |a: usize, b: usize| delta_cut(&ws[a], &ws[b], &metric, &DeltaOptions::brute(l)).unwrap().value;
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= TOL);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + TOL);
        let sigma = permutation(&mut r, l);
        let v = relabel(&ws[0], &sigma).unwrap();
        prop_assert_eq!(delta_cut(&ws[0], &v, &metric, &DeltaOptions::brute(l)).unwrap().value, 0.0);
    }
}

#[test]
fn monte_carlo_densities_are_unbiased() {
    let mut r = rng(17);
    let space = random::space(&mut r, 3);
    let family = TestFamily::canonical(space.clone());
    let w = {
        let p = random::partition(&mut r, 3, 6);
        random::probability_graphon(&mut r, &space, p)
    };
    let f = DecoratedGraph::from_family(3, vec![(0, 1), (1, 2), (2, 0)], &family, vec![1, 2, 0])
        .unwrap();
    let exact = hom_density_exact(&f, &w).unwrap();
    let estimates: Vec<(f64, f64)> = (0..200)
        .map(|s| hom_density_mc(&f, &w, 200, s).unwrap())
        .collect();
    let mean = estimates.iter().map(|e| e.0).sum::<f64>() / 200.0;
    let pooled = (estimates.iter().map(|e| e.1 * e.1).sum::<f64>()).sqrt() / 200.0;
    assert!(
        (mean - exact).abs() <= 4.0 * pooled,
        "mean {mean} exact {exact} se {pooled}"
    );
}

#[test]
fn three_vertex_samples_follow_the_edge_joint_measure() {
    use pgraphon::homdensity::edge_joint_measure;
    use pgraphon::sampling::{sample_g, trial_seed};
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    let mut r = rng(3);
    let space = pgraphon::measures::WeightSpace::binary().shared();
    let p = random::partition(&mut r, 2, 4);
    let w = random::probability_graphon(&mut r, &space, p);
    let edges: Vec<(usize, usize)> = (0..3)
        .flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let law = edge_joint_measure(3, &edges, &w).unwrap();
    let n = 100_000;
    let mut counts = vec![0usize; law.entries.len()];
    for s in 0..n {
        let g = sample_g(&w, 3, trial_seed(11, s), false).unwrap();
        let outcome: Vec<usize> = edges
            .iter()
            .map(|&(a, b)| g.weight(a, b).unwrap())
            .collect();
        counts[law.index(&outcome)] += 1;
    }
    let (mut chi2, mut bins) = (0.0, 0);
    for (c, p) in counts.iter().zip(&law.entries) {
        if *p > 0.0 {
            chi2 += (*c as f64 - n as f64 * p).powi(2) / (n as f64 * p);
            bins += 1;
        }
    }
    let critical = ChiSquared::new((bins - 1) as f64)
        .unwrap()
        .inverse_cdf(0.99);
    assert!(chi2 <= critical, "chi2 {chi2} > {critical}");
}
