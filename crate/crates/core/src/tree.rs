//! Labelled trees on vertices `1..=n`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, OrderedIndexList, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    // adj[v - 1] lists the neighbours of v in ascending order.
    adj: Vec<Vec<usize>>,
}

impl LabelledTree {
    /// Validates an edge list on vertices `1..=n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooSmall { n, min: 1 });
        }
        let mut adj = vec![Vec::new(); n];
        let mut parent: Vec<usize> = (0..n).collect();
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if normalized.contains(&e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            let (ru, rv) = (find(&mut parent, u - 1), find(&mut parent, v - 1));
            if ru == rv {
                return Err(Error::Cycle(u, v));
            }
            parent[ru] = rv;
            normalized.push(e);
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        let root = find(&mut parent, 0);
        if let Some(v) = (1..n).find(|&v| find(&mut parent, v) != root) {
            return Err(Error::Disconnected(v + 1));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self { n, edges: normalized, adj })
    }

    /// Vertex count is the largest label that appears.
    pub fn from_edge_list(edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(1);
        Self::from_edges(n, edges)
    }

    /// The path `1 - 2 - ... - n`.
    pub fn natural_path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_edges(n, &edges)
    }

    /// Star with centre 1 and leaves `2..=n`.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (2..=n).map(|i| (1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(min, max)` pairs, in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    /// True when every vertex has degree at most two.
    pub fn is_path(&self) -> bool {
        self.adj.iter().all(|a| a.len() <= 2)
    }

    /// True for the path `1 - 2 - ... - n`.
    pub fn is_natural_path(&self) -> bool {
        self.edges.iter().all(|&(u, v)| v == u + 1)
    }

    /// Degree-one vertices, ascending.
    pub fn pendant_vertices(&self) -> Result<Vec<usize>> {
        if self.n < 2 {
            return Err(Error::TooSmall { n: self.n, min: 2 });
        }
        Ok((1..=self.n).filter(|&v| self.degree(v) == 1).collect())
    }

    /// The unique path from `u` to `v`, listed starting at `u`.
    pub fn path_between(&self, u: usize, v: usize) -> Result<TreePath> {
        for w in [u, v] {
            if w == 0 || w > self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SameEndpoints(u));
        }
        // BFS from v so that walking parents from u yields u..v in order.
        let mut parent = vec![0usize; self.n + 1];
        let mut queue = VecDeque::from([v]);
        parent[v] = v;
        while let Some(x) = queue.pop_front() {
            if x == u {
                break;
            }
            for &y in self.neighbors(x) {
                if parent[y] == 0 {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut walk = vec![u];
        let mut x = u;
        while x != v {
            x = parent[x];
            walk.push(x);
        }
        Ok(TreePath { vertices: OrderedIndexList::new(walk)? })
    }

    /// One path per unordered pair `{u, v}`, `u < v`, lexicographic in
    /// `(u, v)`, each listed from `u` to `v`.
    pub fn enumerate_paths(&self) -> Vec<TreePath> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                out.push(self.path_between(u, v).expect("distinct in-range endpoints"));
            }
        }
        out
    }

    /// The alternating 2-colouring with vertex 1 positive.
    pub fn signing(&self) -> VertexSigning {
        let mut signs = vec![0i8; self.n];
        signs[0] = 1;
        let mut queue = VecDeque::from([1usize]);
        while let Some(x) = queue.pop_front() {
            for &y in self.neighbors(x) {
                if signs[y - 1] == 0 {
                    signs[y - 1] = -signs[x - 1];
                    queue.push_back(y);
                }
            }
        }
        VertexSigning { signs }
    }

    /// Removes pendant vertex `p`; labels above `p` shift down by one.
    pub fn remove_pendant(&self, p: usize) -> Result<Self> {
        if !self.pendant_vertices()?.contains(&p) {
            return Err(Error::VertexOutOfRange { vertex: p, n: self.n });
        }
        let relabel = |w: usize| if w > p { w - 1 } else { w };
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != p && b != p)
            .map(|&(a, b)| (relabel(a), relabel(b)))
            .collect();
        Self::from_edges(self.n - 1, &edges)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Vertex sequence of a tree path, at least two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath {
    vertices: OrderedIndexList,
}

impl TreePath {
    pub fn vertices(&self) -> &OrderedIndexList {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.as_slice().contains(&v)
    }
}

/// `±1` per vertex, alternating across every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSigning {
    signs: Vec<i8>,
}

impl VertexSigning {
    /// Sign of 1-based vertex `v`.
    pub fn get(&self, v: usize) -> i8 {
        self.signs[v - 1]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.signs
    }
}
