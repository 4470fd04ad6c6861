#![allow(dead_code)]

use ernkit::{DirectedGraph, GraphView, NodeTable, UndirectedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u64 = u64::MAX;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn table(n: usize) -> NodeTable {
    NodeTable::from_tokens((0..n).map(|i| format!("v{i}"))).unwrap()
}

/// Independent-pair random graph built without the library generators.
pub fn random_undirected(r: &mut ChaCha8Rng, n: usize, p: f64) -> UndirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(table(n), edges).0
}

pub fn random_directed(r: &mut ChaCha8Rng, n: usize, p: f64) -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::from_edges(table(n), edges).0
}

/// Dense adjacency matrix of a graph view.
pub fn matrix<G: GraphView>(g: &G) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut m = vec![vec![false; n]; n];
    for u in 0..n {
        for &v in g.successors(u) {
            m[u][v] = true;
        }
    }
    m
}

/// Union-find labels: each node mapped to the smallest node of its
/// weak component.
pub fn union_find_labels(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let next = p[x];
            p[x] = r;
            x = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Floyd–Warshall over integer arc costs.
pub fn floyd(n: usize, arcs: impl IntoIterator<Item = (usize, usize, u64)>) -> Vec<Vec<u64>> {
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (u, v, c) in arcs {
        d[u][v] = d[u][v].min(c);
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn unit_apsp<G: GraphView>(g: &G) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut arcs = Vec::new();
    for u in 0..n {
        for &v in g.successors(u) {
            arcs.push((u, v, 1));
        }
    }
    floyd(n, arcs)
}

/// (diameter, mean distance over ordered reachable pairs u != v).
pub fn apsp_summary(d: &[Vec<u64>]) -> (u64, f64, u64) {
    let (mut diam, mut sum, mut pairs) = (0u64, 0u128, 0u64);
    for (i, row) in d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != INF {
                diam = diam.max(x);
                sum += x as u128;
                pairs += 1;
            }
        }
    }
    (diam, sum as f64 / pairs as f64, pairs)
}

/// Local CC by exhaustive triple enumeration.
pub fn local_cc_brute(g: &UndirectedGraph) -> Vec<f64> {
    let m = matrix(g);
    let n = g.node_count();
    (0..n)
        .map(|u| {
            let nb: Vec<usize> = (0..n).filter(|&v| m[u][v]).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut t = 0;
            for a in 0..k {
                for b in a + 1..k {
                    if m[nb[a]][nb[b]] {
                        t += 1;
                    }
                }
            }
            2.0 * t as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

pub fn triangle_count_brute(g: &UndirectedGraph) -> usize {
    let m = matrix(g);
    let n = g.node_count();
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !m[a][b] {
                continue;
            }
            for c in b + 1..n {
                if m[a][c] && m[b][c] {
                    t += 1;
                }
            }
        }
    }
    t
}

/// Mean neighbor degree per degree class via nested loops.
pub fn knn_brute(g: &UndirectedGraph) -> Vec<(usize, f64)> {
    let m = matrix(g);
    let n = g.node_count();
    let deg: Vec<usize> = (0..n).map(|u| m[u].iter().filter(|&&x| x).count()).collect();
    let kmax = deg.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for k in 1..=kmax {
        let mut sum = 0.0;
        let mut cnt = 0;
        for u in (0..n).filter(|&u| deg[u] == k) {
            let mut s = 0usize;
            for v in 0..n {
                if m[u][v] {
                    s += deg[v];
                }
            }
            sum += s as f64 / k as f64;
            cnt += 1;
        }
        if cnt > 0 {
            out.push((k, sum / cnt as f64));
        }
    }
    out
}

pub fn reciprocity_brute(g: &DirectedGraph) -> f64 {
    let m = matrix(g);
    let n = g.node_count();
    let (mut e, mut r) = (0, 0);
    for u in 0..n {
        for v in 0..n {
            if m[u][v] {
                e += 1;
                if m[v][u] {
                    r += 1;
                }
            }
        }
    }
    r as f64 / e as f64
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
