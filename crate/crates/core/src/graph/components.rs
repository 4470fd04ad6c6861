use std::collections::VecDeque;

use serde::Serialize;

use super::GraphView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentSize {
    pub vertices: usize,
    /// Native edges (directed edges for a digraph).
    pub edges: usize,
    /// Edges after collapsing reciprocal directed pairs.
    pub undirected_edges: usize,
}

/// Connected components (weak components for digraphs). Component 0 is the
/// giant component; ids are ordered by vertex count descending, then by
/// smallest member index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    component_of: Vec<usize>,
    sizes: Vec<ComponentSize>,
}

impl ComponentDecomposition {
    pub fn component_of(&self, node: usize) -> usize {
        self.component_of[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.component_of
    }

    pub fn sizes(&self) -> &[ComponentSize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Members of `id` in ascending index order.
    pub fn members(&self, id: usize) -> Vec<usize> {
        self.component_of
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == id)
            .map(|(u, _)| u)
            .collect()
    }

    pub fn giant(&self) -> Option<&ComponentSize> {
        self.sizes.first()
    }
}

pub fn components<G: GraphView>(g: &G) -> ComponentDecomposition {
    let n = g.node_count();
    const UNSEEN: usize = usize::MAX;
    let mut label = vec![UNSEEN; n];
    // (first member, vertex count) per raw label; first member is the
    // smallest index because roots are taken in ascending order.
    let mut raw: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if label[root] != UNSEEN {
            continue;
        }
        let id = raw.len();
        label[root] = id;
        queue.push_back(root);
        let mut count = 0;
        while let Some(u) = queue.pop_front() {
            count += 1;
            g.for_each_neighbor(u, |v| {
                if label[v] == UNSEEN {
                    label[v] = id;
                    queue.push_back(v);
                }
            });
        }
        raw.push((root, count));
    }

    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(raw[i].1), raw[i].0));
    let mut rename = vec![0; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new;
    }
    let component_of: Vec<usize> = label.iter().map(|&l| rename[l]).collect();

    let mut sizes: Vec<ComponentSize> = order
        .iter()
        .map(|&old| ComponentSize {
            vertices: raw[old].1,
            edges: 0,
            undirected_edges: 0,
        })
        .collect();
    let directed = g.is_directed();
    g.for_each_edge(|u, v| {
        let s = &mut sizes[component_of[u]];
        s.edges += 1;
        if !directed || u < v || g.successors(v).binary_search(&u).is_err() {
            s.undirected_edges += 1;
        }
    });

    ComponentDecomposition {
        component_of,
        sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ingest_directed, ingest_undirected};

    #[test]
    fn two_disjoint_edges() {
        let (g, _) = ingest_undirected("a b\nc d\n".as_bytes()).unwrap();
        let dec = components(&g);
        assert_eq!(dec.count(), 2);
        assert!(dec.sizes().iter().all(|s| s.vertices == 2 && s.edges == 1));
        assert_eq!(dec.component_of(0), 0);
        assert_eq!(dec.component_of(2), 1);
    }

    #[test]
    fn triangle_plus_isolated() {
        let (g, _) = ingest_undirected("a b\nb c\nc a\nd d\n".as_bytes()).unwrap();
        let dec = components(&g);
        let v: Vec<usize> = dec.sizes().iter().map(|s| s.vertices).collect();
        assert_eq!(v, vec![3, 1]);
        assert_eq!(dec.members(1), vec![3]);
    }

    #[test]
    fn ties_broken_by_smallest_member() {
        let (g, _) = ingest_undirected("x y\na b\n".as_bytes()).unwrap();
        let dec = components(&g);
        assert_eq!(dec.members(0), vec![0, 1]);
    }

    #[test]
    fn directed_counts_both_edge_flavours() {
        let (g, _) = ingest_directed("a b\nb a\nb c\n".as_bytes()).unwrap();
        let dec = components(&g);
        assert_eq!(dec.count(), 1);
        assert_eq!(dec.sizes()[0].edges, 3);
        assert_eq!(dec.sizes()[0].undirected_edges, 2);
    }
}
