use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

/// Simple undirected graph on `0..n` with optional positive vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    weights: Option<Vec<Rational>>,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        weights: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {}", i)));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range for n = {}",
                    i, j, n
                )));
            }
            set.insert((i.min(j), i.max(j)));
        }
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(Error::Dimension(format!(
                    "{} weights for {} vertices",
                    w.len(),
                    n
                )));
            }
            if w.iter().any(|v| !v.is_positive()) {
                return Err(Error::InvalidArgument(
                    "vertex weights must be positive".into(),
                ));
            }
        }
        Ok(Graph {
            n,
            edges: set,
            weights,
        })
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(
            n,
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))),
            None,
        )
        .unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i)), None).unwrap()
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::new(n, [], None).unwrap()
    }

    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self> {
        Graph::new(self.n, std::mem::take(&mut self.edges), Some(weights))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, i: usize) -> Rational {
        self.weights
            .as_ref()
            .map(|w| w[i].clone())
            .unwrap_or_else(Rational::one)
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for &(i, j) in &self.edges {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        adj
    }
}

/// Cartesian product `K_t □ G`: vertex `(p, i)` is `p·n + i`; `(p,i) ~ (q,j)`
/// when `p ≠ q, i = j` or `p = q, ij ∈ E(G)`.
pub fn product_graph(g: &Graph, t: usize) -> Graph {
    assert!(t >= 1, "t must be at least 1");
    let n = g.n();
    let mut edges = Vec::new();
    for p in 0..t {
        for (i, j) in g.edges() {
            edges.push((p * n + i, p * n + j));
        }
        for q in (p + 1)..t {
            for i in 0..n {
                edges.push((p * n + i, q * n + i));
            }
        }
    }
    Graph::new(n * t, edges, None).unwrap()
}

pub const MAX_ALPHA_VERTICES: usize = 20;
pub const MAX_CHI_VERTICES: usize = 12;

/// Maximum weight of a stable set (weights default to 1), by branch and bound.
pub fn brute_alpha_weighted(g: &Graph) -> Result<Rational> {
    if g.n() > MAX_ALPHA_VERTICES {
        return Err(Error::SizeCap(format!(
            "stability number limited to n ≤ {}",
            MAX_ALPHA_VERTICES
        )));
    }
    let adj = g.adjacency_masks();
    let w: Vec<Rational> = (0..g.n()).map(|i| g.weight(i)).collect();
    fn rec(cand: u64, cur: Rational, best: &mut Rational, adj: &[u64], w: &[Rational]) {
        if cand == 0 {
            if cur > *best {
                *best = cur;
            }
            return;
        }
        let bound: Rational = (0..64)
            .filter(|i| cand >> i & 1 == 1)
            .map(|i| &w[i])
            .sum::<Rational>()
            + &cur;
        if bound <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        rec(cand & !(1 << v) & !adj[v], &cur + &w[v], best, adj, w);
        rec(cand & !(1 << v), cur, best, adj, w);
    }
    let all = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let mut best = Rational::zero();
    rec(all, Rational::zero(), &mut best, &adj, &w);
    Ok(best)
}

/// Unweighted stability number.
pub fn brute_alpha(g: &Graph) -> Result<usize> {
    let unweighted = Graph::new(g.n(), g.edges(), None)?;
    let a = brute_alpha_weighted(&unweighted)?;
    Ok(a.to_integer().try_into().expect("small"))
}

/// Chromatic number by k-colouring search.
pub fn brute_chi(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > MAX_CHI_VERTICES {
        return Err(Error::SizeCap(format!(
            "chromatic number limited to n ≤ {}",
            MAX_CHI_VERTICES
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = g.adjacency_masks();
    fn colour(v: usize, k: usize, colours: &mut [usize], adj: &[u64], used: usize) -> bool {
        if v == colours.len() {
            return true;
        }
        // symmetry breaking: a new colour is only ever the next unused one
        for c in 0..k.min(used + 1) {
            let clash = (0..v).any(|u| adj[v] >> u & 1 == 1 && colours[u] == c);
            if !clash {
                colours[v] = c;
                if colour(v + 1, k, colours, adj, used.max(c + 1)) {
                    return true;
                }
            }
        }
        false
    }
    for k in 1..=n {
        let mut colours = vec![usize::MAX; n];
        if colour(0, k, &mut colours, &adj, 0) {
            return Ok(k);
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn small_values() {
        assert_eq!(brute_alpha(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(brute_chi(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(brute_alpha(&Graph::complete(4)).unwrap(), 1);
        assert_eq!(brute_chi(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(brute_alpha(&Graph::edgeless(6)).unwrap(), 6);
        assert_eq!(brute_chi(&Graph::edgeless(6)).unwrap(), 1);
        assert_eq!(brute_chi(&Graph::path(3)).unwrap(), 2);
    }

    #[test]
    fn weighted_alpha() {
        let g = Graph::path(3)
            .with_weights(vec![rat(1), rat(5), rat(1)])
            .unwrap();
        assert_eq!(brute_alpha_weighted(&g).unwrap(), rat(5));
    }

    #[test]
    fn products() {
        let g = Graph::complete(2);
        let p = product_graph(&g, 1);
        assert_eq!(p, g);
        let c4 = product_graph(&g, 2);
        assert_eq!(c4.num_edges(), 4);
        assert!((0..4).all(|v| (0..4).filter(|&u| c4.has_edge(u, v)).count() == 2));
        assert_eq!(brute_alpha(&product_graph(&Graph::cycle(5), 3)).unwrap(), 5);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Graph::new(3, [(0, 0)], None).is_err());
        assert!(Graph::new(3, [(0, 3)], None).is_err());
        assert!(Graph::new(2, [(0, 1)], Some(vec![rat(1), rat(0)])).is_err());
        assert!(brute_alpha(&Graph::edgeless(21)).is_err());
        assert!(brute_chi(&Graph::edgeless(13)).is_err());
    }
}
