mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use ernkit::extend::{
    build_ern, ern_series, expand_ern, extract_tn, seeder_apl, ErnConfig, SeederDistanceMatrix, SeederMap,
    TnEdgeMode, WeightedGraph,
};
use ernkit::paths::{ShortestPaths, UNREACHABLE};
use ernkit::synth::{scenario_generate, OsnModel, ScenarioSpec, SeederCount};
use ernkit::{components, DirectedGraph, GraphView, SeedSet, UndirectedGraph};
use rand::seq::index;
use rand::Rng;

#[test]
fn tn_distances_and_nodes_match_exhaustive_paths() {
    for seed in 0..50 {
        let mut r = rng(100 + seed);
        let n = r.random_range(20..=200);
        let p = r.random_range(1.2..3.5) / n as f64;
        let osn = random_undirected(&mut r, n, p);
        let idx = index::sample(&mut r, n, 10).into_vec();
        let seeds = SeedSet::new(idx.iter().map(|&i| osn.nodes().token(i).to_owned())).unwrap();
        let tn = extract_tn(&osn, &seeds, TnEdgeMode::Path).unwrap();
        let d = unit_apsp(&osn);
        let m = &tn.matrix;

        let pos: Vec<usize> = m.seeders().iter().map(|t| osn.nodes().get(t).unwrap()).collect();
        let mut unreachable = 0;
        for i in 0..10 {
            for j in 0..10 {
                let want = (d[pos[i]][pos[j]] != INF).then(|| d[pos[i]][pos[j]] as u32);
                assert_eq!(m.distance(i, j), want, "matrix ({i}, {j})");
                if i < j && want.is_none() {
                    unreachable += 1;
                }
            }
        }
        assert_eq!(tn.unreachable_pairs, unreachable);

        let tn_pos = |t: &str| tn.tn.nodes().get(t).unwrap();
        let seed_tn: Vec<usize> = m.seeders().iter().map(|t| tn_pos(t)).collect();
        for i in 0..10 {
            let dist = tn.tn.distances_from(seed_tn[i]);
            for j in 0..10 {
                let got = (dist[seed_tn[j]] != UNREACHABLE).then(|| dist[seed_tn[j]] as u32);
                assert_eq!(got, m.distance(i, j), "d_TN = d_OSN for ({i}, {j})");
            }
        }

        for (i, j, dij) in m.reachable_pairs() {
            let p = m.path(i, j).unwrap();
            assert_eq!(p.len(), dij as usize + 1);
            assert_eq!(p.first().unwrap(), &m.seeders()[i]);
            assert_eq!(p.last().unwrap(), &m.seeders()[j]);
            for w in p.windows(2) {
                let (a, b) = (osn.nodes().get(&w[0]).unwrap(), osn.nodes().get(&w[1]).unwrap());
                assert!(osn.has_edge(a, b));
            }
        }

        let seeder_set: BTreeSet<&str> = m.seeders().iter().map(String::as_str).collect();
        for t in tn.tn.nodes().tokens() {
            if seeder_set.contains(t.as_str()) {
                continue;
            }
            let v = osn.nodes().get(t).unwrap();
            let on_some_path = (0..10).any(|i| {
                (i + 1..10).any(|j| {
                    let (s, u) = (pos[i], pos[j]);
                    d[s][u] != INF && d[s][v] != INF && d[v][u] != INF && d[s][v] + d[v][u] == d[s][u]
                })
            });
            assert!(on_some_path, "{t} lies on no shortest seeder path");
        }
        tn.tn.for_each_edge(|a, b| {
            let (x, y) = (tn.tn.nodes().token(a), tn.tn.nodes().token(b));
            assert!(osn.has_edge(osn.nodes().get(x).unwrap(), osn.nodes().get(y).unwrap()));
        });

        let induced = extract_tn(&osn, &seeds, TnEdgeMode::Induced).unwrap();
        let want = osn.induced_subgraph(tn.tn.nodes().tokens()).unwrap();
        assert_eq!(induced.tn.edge_count(), want.edge_count());
        assert!(induced.tn.edge_count() >= tn.tn.edge_count());
    }
}

struct Case {
    rn: DirectedGraph,
    map: SeederMap,
    osn: UndirectedGraph,
    matrix: SeederDistanceMatrix,
}

fn scenario(seed: u64) -> Case {
    let mut r = rng(seed);
    let hist: BTreeMap<usize, usize> = [(2, r.random_range(10..30)), (3, 6), (4, 3), (7, 2)].into_iter().collect();
    let spec = ScenarioSpec {
        rn_histogram: hist,
        osn_model: if seed % 2 == 0 {
            OsnModel::Ba { n: 400, m: 2 }
        } else {
            OsnModel::Er { n: 300, p: 0.008 }
        },
        seeders: SeederCount::Count(r.random_range(5..25)),
        seed,
        ..ScenarioSpec::default()
    };
    let s = scenario_generate(&spec).unwrap();
    let tn = extract_tn(&s.osn, &s.seeder_map.osn_seeds(), TnEdgeMode::Path).unwrap();
    let matrix = tn.matrix.relabel(&s.seeder_map.osn_to_rn());
    Case {
        rn: s.rn,
        map: s.seeder_map,
        osn: s.osn,
        matrix,
    }
}

fn edge_keys(g: &WeightedGraph) -> BTreeSet<(usize, usize, u32)> {
    g.edges().iter().map(|e| (e.u, e.v, e.hop_cost)).collect()
}

fn weighted_apsp(g: &WeightedGraph) -> Vec<Vec<u64>> {
    let arcs = g
        .edges()
        .iter()
        .flat_map(|e| [(e.u, e.v, e.hop_cost as u64), (e.v, e.u, e.hop_cost as u64)]);
    floyd(g.node_count(), arcs)
}

#[test]
fn ern_edges_match_the_distance_matrix() {
    for seed in 0..20 {
        let c = scenario(seed);
        for k in 0..=4u32 {
            let ern = build_ern(&c.rn, &c.matrix, ErnConfig::new(k as i64, 1).unwrap()).unwrap();
            let und = c.rn.to_undirected();
            let mut pairs: BTreeMap<(usize, usize), &ernkit::extend::ErnEdge> = BTreeMap::new();
            for e in ern.edges() {
                assert!(e.u < e.v);
                assert!(pairs.insert((e.u, e.v), e).is_none(), "duplicate ERN edge");
                if e.origin_weight == 0 {
                    assert!(und.has_edge(e.u, e.v));
                    assert_eq!(e.hop_cost, 1);
                } else {
                    assert!(!und.has_edge(e.u, e.v));
                    assert_eq!(e.hop_cost, e.origin_weight);
                }
            }
            assert_eq!(pairs.len(), ern.edge_count());
            let n_rn = pairs.values().filter(|e| e.origin_weight == 0).count();
            assert_eq!(n_rn, und.edge_count());
            for (i, j, d) in c.matrix.reachable_pairs() {
                let a = c.rn.nodes().get(&c.matrix.seeders()[i]).unwrap();
                let b = c.rn.nodes().get(&c.matrix.seeders()[j]).unwrap();
                let e = pairs.get(&(a.min(b), a.max(b)));
                if d <= k && d > 0 {
                    let e = e.expect("seeder pair within K has an edge");
                    assert_eq!(e.osn_distance, Some(d));
                    assert!(e.origin_weight == 0 || e.origin_weight == d);
                } else if let Some(e) = e {
                    assert_eq!(e.origin_weight, 0);
                }
            }
            let wc = ern.weight_counts();
            assert!(wc.len() <= k as usize + 1);
            assert_eq!(wc.iter().sum::<usize>(), ern.edge_count());
            for (w, &cnt) in wc.iter().enumerate() {
                assert_eq!(cnt, pairs.values().filter(|e| e.origin_weight as usize == w).count());
            }
        }
    }
}

#[test]
fn ern_laws_hold_across_k() {
    for seed in 0..20 {
        let c = scenario(seed);
        let erns: Vec<WeightedGraph> = (0..=5)
            .map(|k| build_ern(&c.rn, &c.matrix, ErnConfig::new(k, 1).unwrap()).unwrap())
            .collect();
        for w in erns.windows(2) {
            assert!(edge_keys(&w[0]).is_subset(&edge_keys(&w[1])), "edge sets nested");
            let giant = |g: &WeightedGraph| components(g.as_unweighted()).giant().unwrap().vertices;
            assert!(giant(&w[0]) <= giant(&w[1]));
            let (d0, d1) = (weighted_apsp(&w[0]), weighted_apsp(&w[1]));
            for u in 0..d0.len() {
                for v in 0..d0.len() {
                    if d0[u][v] != INF {
                        assert!(d1[u][v] <= d0[u][v], "distance grew from K to K+1");
                    }
                }
            }
        }
        let series = ern_series(&c.rn, &c.matrix, 5, 1, usize::MAX, (10, 1)).unwrap();
        assert_eq!(series.rows.len(), 5);
        for (i, row) in series.rows.iter().enumerate() {
            assert_eq!(row.k as usize, i + 1);
            assert_eq!(row.weight_counts.iter().sum::<usize>(), row.edges);
            assert!(row.seeder_components_in_giant <= row.seeder_components);
        }
        for w in series.rows.windows(2) {
            assert!(w[0].vertices <= w[1].vertices);
            assert!(w[0].seeder_components_in_giant <= w[1].seeder_components_in_giant);
        }
        let base = components(erns[0].as_unweighted());
        assert_eq!(series.baseline.vertices, base.giant().unwrap().vertices);
        for rel in &series.relative {
            assert!(rel.vertices_pct <= 100.0 + 1e-9 && rel.edges_pct <= 100.0 + 1e-9);
        }
    }
}

#[test]
fn zero_cost_recommendation_edges() {
    let c = scenario(3);
    let ern = build_ern(&c.rn, &c.matrix, ErnConfig::new(3, 0).unwrap()).unwrap();
    let d = weighted_apsp(&ern);
    for s in 0..ern.node_count().min(60) {
        let got = ern.distances_from(s);
        for t in 0..ern.node_count() {
            assert_eq!(got[t], if d[s][t] == INF { UNREACHABLE } else { d[s][t] });
        }
    }
    assert!(ErnConfig::new(-1, 1).is_err());
    assert!(ErnConfig::new(2, 2).is_err());
}

#[test]
fn seeder_apl_matches_pairwise_oracle() {
    for seed in 0..10 {
        let c = scenario(seed);
        let ern = build_ern(&c.rn, &c.matrix, ErnConfig::new(3, 1).unwrap()).unwrap();
        let idx: Vec<usize> = c.map.rn_seeds().resolve(ern.nodes()).unwrap();
        let d = weighted_apsp(&ern);
        let (mut sum, mut reach, mut unreach) = (0u64, 0usize, 0usize);
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                match d[idx[a]][idx[b]] {
                    INF => unreach += 1,
                    x => {
                        sum += x;
                        reach += 1;
                    }
                }
            }
        }
        match seeder_apl(&ern, &idx) {
            Ok(apl) => {
                assert_eq!((apl.reachable_pairs, apl.unreachable_pairs), (reach, unreach));
                assert!((apl.mean - sum as f64 / reach as f64).abs() <= 1e-12);
            }
            Err(_) => assert_eq!(reach, 0),
        }
        let osn_idx = c.map.osn_seeds().resolve(c.osn.nodes()).unwrap();
        let od = unit_apsp(&c.osn);
        let apl = seeder_apl(&c.osn, &osn_idx).unwrap();
        let pairs: Vec<u64> = (0..osn_idx.len())
            .flat_map(|a| (a + 1..osn_idx.len()).map(move |b| (a, b)))
            .map(|(a, b)| od[osn_idx[a]][osn_idx[b]])
            .filter(|&x| x != INF)
            .collect();
        assert_eq!(apl.reachable_pairs, pairs.len());
        assert!((apl.mean - pairs.iter().sum::<u64>() as f64 / pairs.len() as f64).abs() <= 1e-12);
        let directed = seeder_apl(&c.rn, &c.map.rn_seeds().resolve(c.rn.nodes()).unwrap());
        if let Ok(a) = directed {
            let k = idx.len();
            assert_eq!(a.reachable_pairs + a.unreachable_pairs, k * (k - 1));
        }
    }
}

#[test]
fn expansion_replaces_edges_by_social_paths() {
    for seed in 0..12 {
        let c = scenario(seed);
        for k in 1..=4u32 {
            let ern = build_ern(&c.rn, &c.matrix, ErnConfig::new(k as i64, 1).unwrap()).unwrap();
            let ex = expand_ern(&ern, &c.matrix, k).unwrap();
            let rn_und = c.rn.to_undirected();
            for (u, v) in rn_und.edges() {
                let (a, b) = (ex.nodes().get(c.rn.nodes().token(u)).unwrap(), ex.nodes().get(c.rn.nodes().token(v)).unwrap());
                assert!(ex.has_edge(a, b), "recommendation edges survive");
            }
            let extra = ex.node_count() - ern.node_count();
            assert!(extra <= c.osn.node_count());
            let ern_d = weighted_apsp(&ern);
            let seeds = c.map.rn_seeds().resolve(ern.nodes()).unwrap();
            for &s in &seeds {
                let xs = ex.nodes().get(ern.nodes().token(s)).unwrap();
                let got = ex.distances_from(xs);
                for &t in &seeds {
                    let xt = ex.nodes().get(ern.nodes().token(t)).unwrap();
                    if ern_d[s][t] != INF {
                        assert!(got[xt] <= ern_d[s][t], "expansion never lengthens seeder distances");
                    }
                }
            }
            if k == 1 {
                assert_eq!(ex.node_count(), ern.node_count());
                assert_eq!(ex.edge_count(), ern.edge_count());
            }
            let smaller = expand_ern(&ern, &c.matrix, k - 1).unwrap();
            assert!(smaller.edge_count() <= ex.edge_count());
        }
    }
}
