//! Bipartite graphs stored as dense bit rows, one row per left vertex.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Two vertex classes with a bit row over the right class for every left vertex.
///
/// Row padding bits beyond `right_size` are always zero, so the edge count is the sum
/// of row popcounts. Vertex labels are optional coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_size: usize,
    right_size: usize,
    words: usize,
    bits: Vec<u64>,
    left_labels: Vec<Vec<u64>>,
    right_labels: Vec<Vec<u64>>,
}

impl BipartiteGraph {
    pub fn empty(left_size: usize, right_size: usize) -> Self {
        let words = words_for(right_size);
        BipartiteGraph {
            left_size,
            right_size,
            words,
            bits: vec![0; words * left_size],
            left_labels: Vec::new(),
            right_labels: Vec::new(),
        }
    }

    pub fn complete(left_size: usize, right_size: usize) -> Self {
        let mut g = Self::empty(left_size, right_size);
        for u in 0..left_size {
            for v in 0..right_size {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(
        left_size: usize,
        right_size: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut g = Self::empty(left_size, right_size);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Assembles a graph from per-left-vertex rows of `words_for(right_size)` words each.
    pub(crate) fn from_rows(left_size: usize, right_size: usize, rows: Vec<Vec<u64>>) -> Self {
        let mut g = Self::empty(left_size, right_size);
        for (u, row) in rows.into_iter().enumerate() {
            g.bits[u * g.words..(u + 1) * g.words].copy_from_slice(&row);
        }
        g
    }

    pub fn with_labels(mut self, left: Vec<Vec<u64>>, right: Vec<Vec<u64>>) -> Self {
        assert!(left.is_empty() || left.len() == self.left_size);
        assert!(right.is_empty() || right.len() == self.right_size);
        self.left_labels = left;
        self.right_labels = right;
        self
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn left_labels(&self) -> &[Vec<u64>] {
        &self.left_labels
    }

    pub fn right_labels(&self) -> &[Vec<u64>] {
        &self.right_labels
    }

    /// Words per bit row.
    pub fn row_words(&self) -> usize {
        self.words
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.left_size && v < self.right_size, "edge ({u}, {v}) out of range");
        self.bits[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.left_size
            && v < self.right_size
            && self.bits[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    pub fn left_degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        (0..self.left_size).map(|u| self.left_degree(u)).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right_size];
        for u in 0..self.left_size {
            for v in self.neighbors(u) {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Right neighbors of left vertex `u` in increasing order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(u))
    }

    /// All edges `(u, v)` sorted by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.left_size).flat_map(move |u| self.neighbors(u).map(move |v| (u, v)))
    }

    /// The same graph with the two sides exchanged.
    pub fn transpose(&self) -> BipartiteGraph {
        let mut t = BipartiteGraph::empty(self.right_size, self.left_size);
        for (u, v) in self.edges() {
            t.add_edge(v, u);
        }
        t.left_labels = self.right_labels.clone();
        t.right_labels = self.left_labels.clone();
        t
    }

    /// Adjacency lists over the combined vertex set: left vertices `0..L`, right
    /// vertices `L..L+R`.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let l = self.left_size;
        let mut adj = vec![Vec::new(); l + self.right_size];
        for (u, v) in self.edges() {
            adj[u].push(l + v);
            adj[l + v].push(u);
        }
        adj
    }
}

/// Indices of set bits in increasing order.
pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD_BITS + b)
            }
        })
    })
}

pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let mut g = BipartiteGraph::empty(3, 70);
        g.add_edge(0, 1);
        g.add_edge(0, 65);
        g.add_edge(2, 69);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.row_words(), 2);
        assert!(g.has_edge(0, 65));
        assert!(!g.has_edge(1, 65));
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![1, 65]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 65), (2, 69)]);
        assert_eq!(g.right_degrees()[65], 1);
        let t = g.transpose();
        assert_eq!(t.left_size(), 70);
        assert!(t.has_edge(69, 2));
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn complete_graph() {
        let g = BipartiteGraph::complete(3, 4);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.left_degrees(), vec![4, 4, 4]);
        assert_eq!(g.adjacency_lists()[3], vec![0, 1, 2]);
    }
}
