//! Finite paths of a k-graph in color-sorted normal form and the unique
//! factorisation `λ = λ(0,m)·λ(m,d(λ))`.

use super::FiniteKGraph;
use crate::CoreError;

/// Degree-vector helpers on ℕ^k.
pub(crate) fn deg_add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn deg_sub(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_sub(*y))
        .collect()
}

pub(crate) fn deg_leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn deg_max(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (*x).max(*y)).collect()
}

pub(crate) fn unit_deg(k: usize, color: usize) -> Vec<u32> {
    let mut e = vec![0u32; k];
    e[color] = 1;
    e
}

/// A morphism of the k-graph: degree `d(λ) ∈ ℕ^k` and the edge word in
/// normal form (all color-1 edges first, then color-2, …). Normal forms are
/// canonical, so `PartialEq` decides equality of morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreePath {
    degree: Vec<u32>,
    edges: Vec<usize>,
    range: usize,
    source: usize,
}

impl DegreePath {
    pub fn degree(&self) -> &[u32] {
        &self.degree
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// `r(λ)` (vertex index).
    pub fn range(&self) -> usize {
        self.range
    }

    /// `s(λ)` (vertex index).
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.degree.iter().sum()
    }
}

impl FiniteKGraph {
    /// The degree-zero path at a vertex.
    pub fn vertex_path(&self, v: usize) -> DegreePath {
        DegreePath {
            degree: vec![0; self.k()],
            edges: Vec::new(),
            range: v,
            source: v,
        }
    }

    /// Build a path from an edge word (left to right, `s(a) = r(b)` for
    /// adjacent `a, b`), normalising to the color-sorted form.
    pub fn path_from_word(&self, word: &[usize]) -> Result<DegreePath, CoreError> {
        if word.is_empty() {
            return Err(CoreError::input(
                "empty word is ambiguous; use vertex_path for degree zero",
            ));
        }
        for pair in word.windows(2) {
            if self.edge(pair[0]).src != self.edge(pair[1]).dst {
                return Err(CoreError::input(format!(
                    "word not composable at edges ({},{})",
                    self.edge(pair[0]).id,
                    self.edge(pair[1]).id
                )));
            }
        }
        let mut degree = vec![0u32; self.k()];
        for &e in word {
            degree[self.edge(e).color] += 1;
        }
        let edges = self.normalise_word(word.to_vec())?;
        Ok(DegreePath {
            degree,
            range: self.edge(edges[0]).dst,
            source: self.edge(*edges.last().unwrap()).src,
            edges,
        })
    }

    /// Bubble the word into ascending color order using the factorisation
    /// bijections; the hexagon condition makes the result independent of
    /// the swap order.
    fn normalise_word(&self, mut word: Vec<usize>) -> Result<Vec<usize>, CoreError> {
        loop {
            let mut swapped = false;
            for p in 0..word.len().saturating_sub(1) {
                let (a, b) = (word[p], word[p + 1]);
                if self.edge(a).color > self.edge(b).color {
                    let (b2, a2) = self.swap_pair(a, b).ok_or_else(|| {
                        CoreError::input(format!(
                            "factorisation table missing pair ({},{})",
                            self.edge(a).id,
                            self.edge(b).id
                        ))
                    })?;
                    word[p] = b2;
                    word[p + 1] = a2;
                    swapped = true;
                }
            }
            if !swapped {
                return Ok(word);
            }
        }
    }

    /// λ·μ, requires `s(λ) = r(μ)`.
    pub fn compose_paths(
        &self,
        lhs: &DegreePath,
        rhs: &DegreePath,
    ) -> Result<DegreePath, CoreError> {
        if lhs.source != rhs.range {
            return Err(CoreError::input("paths not composable: s(λ) ≠ r(μ)"));
        }
        if rhs.is_vertex() {
            return Ok(lhs.clone());
        }
        if lhs.is_vertex() {
            return Ok(rhs.clone());
        }
        let mut word = lhs.edges.clone();
        word.extend_from_slice(&rhs.edges);
        self.path_from_word(&word)
    }

    /// Pull the first `color`-edge of the morphism to the front and split it
    /// off. The remaining word stays in normal form.
    fn split_first_edge(
        &self,
        edges: &[usize],
        color: usize,
    ) -> Result<(usize, Vec<usize>), CoreError> {
        let pos = edges
            .iter()
            .position(|&e| self.edge(e).color == color)
            .ok_or_else(|| CoreError::input("no edge of the requested color"))?;
        let mut w = edges.to_vec();
        for p in (1..=pos).rev() {
            let (a, b) = (w[p - 1], w[p]);
            let (b2, a2) = self.swap_pair(a, b).ok_or_else(|| {
                CoreError::input(format!(
                    "factorisation table missing pair ({},{})",
                    self.edge(a).id,
                    self.edge(b).id
                ))
            })?;
            w[p - 1] = b2;
            w[p] = a2;
        }
        Ok((w[0], w[1..].to_vec()))
    }

    /// The unique factorisation `λ = λ(0,m) · λ(m,d(λ))` for `m ≤ d(λ)`.
    pub fn factor(
        &self,
        path: &DegreePath,
        m: &[u32],
    ) -> Result<(DegreePath, DegreePath), CoreError> {
        if m.len() != self.k() || !deg_leq(m, &path.degree) {
            return Err(CoreError::input("factor degree must satisfy m ≤ d(λ)"));
        }
        let mut head: Vec<usize> = Vec::new();
        let mut rest = path.edges.clone();
        for color in 0..self.k() {
            for _ in 0..m[color] {
                let (e, tail) = self.split_first_edge(&rest, color)?;
                head.push(e);
                rest = tail;
            }
        }
        let head_path = if head.is_empty() {
            self.vertex_path(path.range)
        } else {
            // split_first_edge emits colors in ascending order, so the head
            // word is already normal
            DegreePath {
                degree: m.to_vec(),
                range: self.edge(head[0]).dst,
                source: self.edge(*head.last().unwrap()).src,
                edges: head,
            }
        };
        let tail_path = if rest.is_empty() {
            self.vertex_path(head_path.source)
        } else {
            DegreePath {
                degree: deg_sub(&path.degree, m).expect("m ≤ d(λ)"),
                range: self.edge(rest[0]).dst,
                source: path.source,
                edges: rest,
            }
        };
        debug_assert_eq!(head_path.source, tail_path.range);
        Ok((head_path, tail_path))
    }

    /// The window `λ(a, b)` for `a ≤ b ≤ d(λ)`.
    pub fn path_window(
        &self,
        path: &DegreePath,
        a: &[u32],
        b: &[u32],
    ) -> Result<DegreePath, CoreError> {
        if !deg_leq(a, b) {
            return Err(CoreError::input("window needs a ≤ b"));
        }
        let (_, tail) = self.factor(path, a)?;
        let width = deg_sub(b, a).expect("a ≤ b");
        let (win, _) = self.factor(&tail, &width)?;
        Ok(win)
    }

    /// All paths of degree `n`, ordered by (range vertex, edge indices).
    pub fn enumerate_paths(&self, n: &[u32]) -> Vec<DegreePath> {
        let mut out = Vec::new();
        for v in 0..self.n_vertices() {
            let mut word: Vec<usize> = Vec::new();
            self.extend_paths(v, n, 0, 0, &mut word, &mut out);
        }
        out
    }

    /// Paths of degree `n` with range `v`.
    pub fn paths_with_range(&self, n: &[u32], v: usize) -> Vec<DegreePath> {
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.extend_paths(v, n, 0, 0, &mut word, &mut out);
        out
    }

    fn extend_paths(
        &self,
        range: usize,
        n: &[u32],
        color: usize,
        used_in_color: u32,
        word: &mut Vec<usize>,
        out: &mut Vec<DegreePath>,
    ) {
        if color == self.k() {
            let path = if word.is_empty() {
                self.vertex_path(range)
            } else {
                DegreePath {
                    degree: n.to_vec(),
                    range,
                    source: self.edge(*word.last().unwrap()).src,
                    edges: word.clone(),
                }
            };
            out.push(path);
            return;
        }
        if used_in_color == n[color] {
            self.extend_paths(range, n, color + 1, 0, word, out);
            return;
        }
        let attach = word.last().map_or(range, |&e| self.edge(e).src);
        for &e in self.edges_of_color(color) {
            if self.edge(e).dst == attach {
                word.push(e);
                self.extend_paths(range, n, color, used_in_color + 1, word, out);
                word.pop();
            }
        }
    }
}
