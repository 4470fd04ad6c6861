use std::collections::BTreeMap;

use ernkit::metrics::{reciprocity, subnetwork_table};
use ernkit::powerlaw::select_xmin;
use ernkit::synth::{
    default_rn_histogram, gen_ba, gen_er, gen_rn_forest, scenario_generate, OsnModel, Placement,
    ScenarioSpec, SeederCount,
};
use ernkit::{components, GraphView};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[test]
fn er_edge_count_is_binomial() {
    let (n, p) = (1000usize, 0.01);
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = pairs * p;
    let sd = (pairs * p * (1.0 - p)).sqrt();
    let counts: Vec<f64> = (0..50).map(|s| gen_er(n, p, s).unwrap().edge_count() as f64).collect();
    for &c in &counts {
        assert!((c - mean).abs() <= 4.5 * sd, "edge count {c} vs {mean} ± {sd}");
    }
    let avg = counts.iter().sum::<f64>() / counts.len() as f64;
    assert!((avg - mean).abs() <= 3.0 * sd / (counts.len() as f64).sqrt(), "mean {avg}");
    let var = counts.iter().map(|c| (c - avg).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!(var > 0.4 * sd * sd && var < 1.9 * sd * sd, "variance {var} vs {}", sd * sd);
}

#[test]
fn ba_shape() {
    let (n, m) = (10_000, 3);
    let g = gen_ba(n, m, 1).unwrap();
    assert_eq!(g.edge_count(), m * (m + 1) / 2 + (n - m - 1) * m);
    assert!(g.degrees().iter().all(|&d| d >= m));
    assert_eq!(components(&g).count(), 1);
    let deg: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
    let fit = select_xmin(&deg).unwrap();
    assert!((2.6..=3.4).contains(&fit.alpha), "alpha {}", fit.alpha);
}

#[test]
fn ba_max_degree_grows() {
    let med = |n: usize| {
        median((0..11).map(|s| *gen_ba(n, 3, s).unwrap().degrees().iter().max().unwrap() as f64).collect())
    };
    let (small, large) = (med(1_000), med(10_000));
    let ratio = large / small;
    assert!(ratio > 2.0 && ratio < 5.0, "max degree {small} -> {large}");
}

#[test]
fn forest_matches_histogram() {
    let h = default_rn_histogram();
    assert_eq!(h.values().sum::<usize>(), 1600);
    let mut recs = Vec::new();
    for seed in 0..20 {
        let g = gen_rn_forest(&h, 0.65, seed).unwrap();
        let dec = components(&g);
        let mut got: BTreeMap<usize, usize> = BTreeMap::new();
        for s in dec.sizes() {
            *got.entry(s.vertices).or_insert(0) += 1;
            assert_eq!(s.undirected_edges, s.vertices - 1, "components are trees");
        }
        assert_eq!(got, h);
        let pairs = subnetwork_table(&dec).unwrap()[0];
        assert_eq!(pairs.size, 2);
        assert!((pairs.networks_pct - 70.0).abs() <= 2.0, "{}", pairs.networks_pct);
        let r = reciprocity(&g).unwrap();
        assert!((r - 0.65).abs() <= 0.05, "reciprocity {r}");
        recs.push(r);
    }
    let mean = recs.iter().sum::<f64>() / recs.len() as f64;
    assert!((mean - 0.65).abs() <= 0.02, "mean reciprocity {mean}");
}

#[test]
fn forest_reciprocity_extremes() {
    let h: BTreeMap<usize, usize> = [(3, 50), (7, 10)].into_iter().collect();
    assert_eq!(reciprocity(&gen_rn_forest(&h, 0.0, 1).unwrap()).unwrap(), 0.0);
    assert_eq!(reciprocity(&gen_rn_forest(&h, 1.0, 1).unwrap()).unwrap(), 1.0);
    assert!(gen_rn_forest(&h, 1.5, 1).is_err());
}

fn seeder_degrees(spec: &ScenarioSpec) -> (f64, f64, f64) {
    let s = scenario_generate(spec).unwrap();
    let deg = s.osn.degrees();
    let global = deg.iter().sum::<usize>() as f64 / deg.len() as f64;
    let var = deg.iter().map(|&d| (d as f64 - global).powi(2)).sum::<f64>() / deg.len() as f64;
    let idx = s.seeder_map.osn_seeds().resolve(s.osn.nodes()).unwrap();
    let mean = idx.iter().map(|&i| deg[i] as f64).sum::<f64>() / idx.len() as f64;
    (mean, global, (var / idx.len() as f64).sqrt())
}

#[test]
fn uniform_placement_is_unbiased() {
    for seed in 1..=5 {
        let spec = ScenarioSpec {
            osn_model: OsnModel::Er { n: 3000, p: 0.004 },
            seeders: SeederCount::Count(300),
            placement: Placement::Uniform,
            seed,
            ..ScenarioSpec::default()
        };
        let (mean, global, se) = seeder_degrees(&spec);
        assert!((mean - global).abs() <= 3.0 * se, "seed {seed}: {mean} vs {global} (se {se})");
    }
}

#[test]
fn degree_biased_placement_favors_hubs() {
    let spec = ScenarioSpec {
        osn_model: OsnModel::Ba { n: 5000, m: 3 },
        ..ScenarioSpec::default()
    };
    let (mean, global, _) = seeder_degrees(&spec);
    assert!(mean >= 2.0 * global, "{mean} vs {global}");
}

#[test]
fn scenario_is_reproducible_and_consistent() {
    let spec = ScenarioSpec {
        osn_model: OsnModel::Ba { n: 3000, m: 2 },
        seeders: SeederCount::Fraction(0.1),
        ..ScenarioSpec::default()
    };
    let a = scenario_generate(&spec).unwrap();
    let b = scenario_generate(&spec).unwrap();
    assert_eq!(a.rn, b.rn);
    assert_eq!(a.osn, b.osn);
    assert_eq!(a.seeder_map, b.seeder_map);
    let c = scenario_generate(&ScenarioSpec { seed: 2, ..spec.clone() }).unwrap();
    assert_ne!(a.seeder_map, c.seeder_map);
    for (r, o) in a.seeder_map.pairs() {
        let ri = a.rn.nodes().resolve(r).unwrap();
        assert!(a.rn.out_degree(ri) > 0, "seeders are recommenders");
        assert!(a.osn.nodes().get(o).is_some());
    }
    let too_many = ScenarioSpec {
        seeders: SeederCount::Count(1_000_000),
        ..spec
    };
    assert!(scenario_generate(&too_many).is_err());
}
