use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Size of the shortest cycle through a vertex.
///
/// Leaves (and isolated vertices) count as cycles of size 1. Vertices of
/// degree at least 2 that lie on no cycle are `Acyclic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleSize {
    Finite(usize),
    Acyclic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleInfo {
    pub sizes: Vec<CycleSize>,
    /// Ordered cycle `v_1 .. v_h` when the graph is connected and unicyclic.
    pub cycle: Option<Vec<Vertex>>,
}

pub fn minimum_cycle_sizes(g: &Graph) -> CycleInfo {
    let n = g.order();
    let mut sizes = Vec::with_capacity(n);
    let mut level = vec![u32::MAX; n];
    let mut branch = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order: Vec<Vertex> = Vec::new();
    for v in 0..n {
        if g.degree(v) <= 1 {
            sizes.push(CycleSize::Finite(1));
            continue;
        }
        sizes.push(match shortest_cycle_through(g, v, &mut level, &mut branch, &mut parent, &mut order) {
            Some(c) => CycleSize::Finite(c),
            None => CycleSize::Acyclic,
        });
    }
    let cycle = if g.is_unicyclic() { unique_cycle(g).ok() } else { None };
    CycleInfo { sizes, cycle }
}

fn shortest_cycle_through(
    g: &Graph,
    v: Vertex,
    level: &mut [u32],
    branch: &mut [usize],
    parent: &mut [usize],
    order: &mut Vec<Vertex>,
) -> Option<usize> {
    order.clear();
    level[v] = 0;
    branch[v] = v;
    parent[v] = usize::MAX;
    order.push(v);
    let mut best = usize::MAX;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        let lx = level[x] as usize;
        if best <= 2 * lx + 1 {
            break;
        }
        for &y in g.neighbors(x) {
            if level[y] == u32::MAX {
                level[y] = level[x] + 1;
                branch[y] = if x == v { y } else { branch[x] };
                parent[y] = x;
                order.push(y);
            } else if y != parent[x] && x != parent[y] && y != v && x != v && branch[x] != branch[y] {
                best = best.min(lx + level[y] as usize + 1);
            }
        }
    }
    for &u in order.iter() {
        level[u] = u32::MAX;
    }
    (best != usize::MAX).then_some(best)
}

/// The cycle of a connected unicyclic graph as `v_1 .. v_h`, starting at
/// its smallest vertex and continuing towards the smaller of its two cycle
/// neighbors.
pub fn unique_cycle(g: &Graph) -> Result<Vec<Vertex>> {
    g.require_unicyclic()?;
    let n = g.order();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(u) = stack.pop() {
        removed[u] = true;
        for &w in g.neighbors(u) {
            if !removed[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let start = (0..n).find(|&v| !removed[v]).expect("unicyclic graph has a cycle");
    let on = |v: Vertex| !removed[v];
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = *g.neighbors(start).iter().find(|&&w| on(w)).unwrap();
    while cur != start {
        cycle.push(cur);
        let next = *g
            .neighbors(cur)
            .iter()
            .find(|&&w| on(w) && w != prev)
            .unwrap();
        prev = cur;
        cur = next;
    }
    Ok(cycle)
}

/// Hop distance from `v` to the nearest vertex of the unique cycle.
pub fn cycle_distance(g: &Graph, v: Vertex, cycles: &CycleInfo) -> Result<usize> {
    g.check_vertex(v)?;
    let cycle = cycles
        .cycle
        .as_ref()
        .ok_or(Error::NotUnicyclic { vertices: g.order(), edges: g.size() })?;
    let dist = super::distances(g, v)?;
    Ok(cycle.iter().filter_map(|&c| dist[c]).min().expect("connected"))
}

/// The spanning trees `T_j = G \ (v_j, v_{j+1})`, in cycle order, with the removed edge.
pub fn unicyclic_spanning_trees(g: &Graph) -> Result<Vec<(Graph, (Vertex, Vertex))>> {
    let cycle = unique_cycle(g)?;
    let h = cycle.len();
    Ok((0..h)
        .map(|j| {
            let (a, b) = (cycle[j], cycle[(j + 1) % h]);
            (g.without_edge(a, b), (a, b))
        })
        .collect())
}

/// A unicyclic graph seen as trees hanging off the cycle.
#[derive(Debug, Clone)]
pub struct UnicyclicLayout {
    pub cycle: Vec<Vertex>,
    /// Position on the cycle, if any.
    pub cycle_index: Vec<Option<usize>>,
    /// Index of the cycle vertex whose hanging tree contains each vertex.
    pub anchor: Vec<usize>,
    /// Neighbor one step closer to the cycle (`None` on the cycle).
    pub toward_cycle: Vec<Option<Vertex>>,
    pub depth: Vec<usize>,
    /// Size of the hanging subtree below each vertex, itself included.
    /// For cycle vertex `v_i` this is `t_i`.
    pub below: Vec<usize>,
}

impl UnicyclicLayout {
    pub fn new(g: &Graph) -> Result<Self> {
        let cycle = unique_cycle(g)?;
        let n = g.order();
        let mut cycle_index = vec![None; n];
        for (i, &c) in cycle.iter().enumerate() {
            cycle_index[c] = Some(i);
        }
        let mut anchor = vec![usize::MAX; n];
        let mut toward_cycle = vec![None; n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        for (i, &c) in cycle.iter().enumerate() {
            anchor[c] = i;
            order.push(c);
        }
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if anchor[w] == usize::MAX {
                    anchor[w] = anchor[u];
                    toward_cycle[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    order.push(w);
                }
            }
        }
        let mut below = vec![1usize; n];
        for &u in order.iter().rev() {
            if let Some(p) = toward_cycle[u] {
                below[p] += below[u];
            }
        }
        Ok(UnicyclicLayout { cycle, cycle_index, anchor, toward_cycle, depth, below })
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// `t_i` for every cycle position.
    pub fn hanging_sizes(&self) -> Vec<usize> {
        self.cycle.iter().map(|&c| self.below[c]).collect()
    }

    /// Path from `v` to its anchor on the cycle, inclusive.
    pub fn path_to_cycle(&self, mut v: Vertex) -> Vec<Vertex> {
        let mut p = vec![v];
        while let Some(u) = self.toward_cycle[v] {
            p.push(u);
            v = u;
        }
        p
    }
}
