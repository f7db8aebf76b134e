use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// BFS tree of a connected graph. Neighbors are visited in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTreeView {
    pub root: Vertex,
    pub parent: Vec<Option<Vertex>>,
    pub level: Vec<usize>,
    pub subtree_size: Vec<usize>,
    /// Vertices in BFS visiting order; `order[0] == root`.
    pub order: Vec<Vertex>,
    pub children: Vec<Vec<Vertex>>,
}

impl RootedTreeView {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Path from `v` up to the root, starting with `v`.
    pub fn path_to_root(&self, mut v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        while let Some(p) = self.parent[v] {
            path.push(p);
            v = p;
        }
        path
    }
}

pub fn bfs_rooted(g: &Graph, root: Vertex) -> Result<RootedTreeView> {
    g.check_vertex(root)?;
    let n = g.order();
    let mut parent = vec![None; n];
    let mut level = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut children = vec![Vec::new(); n];
    level[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in g.neighbors(u) {
            if level[w] == usize::MAX {
                level[w] = level[u] + 1;
                parent[w] = Some(u);
                children[u].push(w);
                order.push(w);
            }
        }
    }
    if order.len() < n {
        let vertex = (0..n).find(|&v| level[v] == usize::MAX).unwrap();
        return Err(Error::Unreachable { root, vertex });
    }
    let mut subtree_size = vec![1usize; n];
    for &u in order.iter().rev() {
        if let Some(p) = parent[u] {
            subtree_size[p] += subtree_size[u];
        }
    }
    Ok(RootedTreeView { root, parent, level, subtree_size, order, children })
}

/// Hop distances from `source`; `None` for unreachable vertices.
pub fn distances(g: &Graph, source: Vertex) -> Result<Vec<Option<usize>>> {
    g.check_vertex(source)?;
    let mut dist = vec![None; g.order()];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// BFS levels into a reusable buffer (`u32::MAX` = unreached). Returns the visit order.
pub(crate) fn bfs_levels(g: &Graph, source: Vertex, level: &mut Vec<u32>, order: &mut Vec<Vertex>) {
    level.clear();
    level.resize(g.order(), u32::MAX);
    order.clear();
    level[source] = 0;
    order.push(source);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let next = level[u] + 1;
        for &w in g.neighbors(u) {
            if level[w] == u32::MAX {
                level[w] = next;
                order.push(w);
            }
        }
    }
}

pub const DEFAULT_DISTANCE_CAP: usize = 20_000;

/// Dense hop-distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> usize {
        self.data[u * self.n + v] as usize
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

/// All-pairs hop distances for a connected graph with at most
/// [`DEFAULT_DISTANCE_CAP`] vertices. Use [`distances`] per source above that.
pub fn all_pairs_distance(g: &Graph) -> Result<DistanceMatrix> {
    all_pairs_distance_capped(g, DEFAULT_DISTANCE_CAP)
}

pub fn all_pairs_distance_capped(g: &Graph, cap: usize) -> Result<DistanceMatrix> {
    let n = g.order();
    if n > cap {
        return Err(Error::param(format!(
            "all-pairs distances limited to {cap} vertices, graph has {n}"
        )));
    }
    let mut data = vec![0u32; n * n];
    let mut level = Vec::new();
    let mut order = Vec::new();
    for s in 0..n {
        bfs_levels(g, s, &mut level, &mut order);
        if order.len() < n {
            let vertex = (0..n).find(|&v| level[v] == u32::MAX).unwrap();
            return Err(Error::Unreachable { root: s, vertex });
        }
        data[s * n..(s + 1) * n].copy_from_slice(&level);
    }
    Ok(DistanceMatrix { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn path_subtree_sizes() {
        let t = bfs_rooted(&path(3), 0).unwrap();
        assert_eq!(t.subtree_size, vec![3, 2, 1]);
        assert_eq!(t.level, vec![0, 1, 2]);
        assert_eq!(t.path_to_root(2), vec![2, 1, 0]);
    }

    #[test]
    fn star_levels() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = bfs_rooted(&g, 0).unwrap();
        assert_eq!(&t.level[1..], &[1, 1, 1]);
        assert_eq!(t.children[0], vec![1, 2, 3]);
    }

    #[test]
    fn bfs_names_unreachable_vertex() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(bfs_rooted(&g, 0), Err(Error::Unreachable { root: 0, vertex: 2 })));
        assert!(bfs_rooted(&g, 7).is_err());
    }

    #[test]
    fn bfs_tie_break_ascending() {
        // 4-cycle 0-1-2-3-0: vertex 2 is reached first through 1
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let t = bfs_rooted(&g, 0).unwrap();
        assert_eq!(t.parent[2], Some(1));
    }

    #[test]
    fn distance_matrix_basics() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d = all_pairs_distance(&c4).unwrap();
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(1, 3), 2);
        assert_eq!(d.get(2, 2), 0);
        assert!(all_pairs_distance_capped(&c4, 3).is_err());
        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(all_pairs_distance(&e).unwrap().get(0, 1), 1);
        assert!(all_pairs_distance(&Graph::empty(2)).is_err());
    }
}
