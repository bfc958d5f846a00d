//! Bounded backtracking used when a greedy run gets stuck outside its
//! hypotheses. It only enforces the hard constraints (targets, edges, and
//! optionally non-edges onto a second graph); goodness plays no role.

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Hard constraints for a pattern-to-host map.
pub struct Constraints<'a> {
    pub pattern: &'a Graph,
    pub host: &'a Graph,
    /// Pattern non-edges must land on edges of this graph, when present.
    pub second: Option<&'a Graph>,
    /// Allowed images per pattern vertex.
    pub targets: Vec<VertexSet>,
}

impl Constraints<'_> {
    /// Candidates for `v` given the images of the vertices placed so far.
    pub fn candidates(&self, v: usize, f: &[Option<usize>], used: &VertexSet) -> VertexSet {
        let mut c = self.targets[v].difference(used);
        for (u, img) in f.iter().enumerate() {
            let Some(x) = *img else { continue };
            if u == v {
                continue;
            }
            if self.pattern.has_edge(u, v) {
                c.intersect_with(self.host.neighbors(x));
            } else if let Some(s) = self.second {
                c.intersect_with(s.neighbors(x));
            }
        }
        c
    }
}

/// First map found by depth-first search in `order`, or `None` if there is
/// none or the node limit runs out first.
pub fn backtrack(c: &Constraints<'_>, order: &[usize], node_limit: u64) -> Option<Vec<usize>> {
    let n = c.pattern.n();
    let mut f = vec![None; n];
    let mut used = VertexSet::empty(c.host.n());
    let mut nodes = 0u64;
    if rec(c, order, 0, &mut f, &mut used, &mut nodes, node_limit) {
        Some(f.into_iter().map(|x| x.expect("complete")).collect())
    } else {
        None
    }
}

fn rec(
    c: &Constraints<'_>,
    order: &[usize],
    k: usize,
    f: &mut Vec<Option<usize>>,
    used: &mut VertexSet,
    nodes: &mut u64,
    limit: u64,
) -> bool {
    if k == order.len() {
        return true;
    }
    *nodes += 1;
    if *nodes > limit {
        return false;
    }
    let v = order[k];
    for x in c.candidates(v, f, used).iter() {
        f[v] = Some(x);
        used.insert(x);
        if rec(c, order, k + 1, f, used, nodes, limit) {
            return true;
        }
        used.remove(x);
        f[v] = None;
        if *nodes > limit {
            return false;
        }
    }
    false
}

/// Places constrained vertices first, then by decreasing degree.
pub fn default_order(c: &Constraints<'_>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.pattern.n()).collect();
    order.sort_by_key(|&v| (c.targets[v].len(), std::cmp::Reverse(c.pattern.degree(v))));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cycle;

    #[test]
    fn finds_c4_in_k4() {
        let p = cycle(4).unwrap();
        let h = Graph::complete(4);
        let c = Constraints {
            pattern: &p,
            host: &h,
            second: None,
            targets: vec![VertexSet::full(4); 4],
        };
        let f = backtrack(&c, &default_order(&c), 1000).unwrap();
        for (u, v) in p.edges() {
            assert!(h.has_edge(f[u], f[v]));
        }
    }

    #[test]
    fn respects_second_graph() {
        // Induced P3 cannot live in K4 when non-edges must be K4 non-edges.
        let p = crate::generators::path(3);
        let h = Graph::complete(4);
        let comp = h.complement();
        let c = Constraints {
            pattern: &p,
            host: &h,
            second: Some(&comp),
            targets: vec![VertexSet::full(4); 3],
        };
        assert!(backtrack(&c, &[0, 1, 2], 1000).is_none());
    }
}
