//! Finite strongly connected k-graphs: colored edges with unique
//! factorisation rules, degree paths in color-sorted normal form, the
//! infinite-path machinery (eventually periodic representations), Perron
//! data and the preferred dynamics, the periodicity group via the exact
//! window criterion, the induced path-groupoid 2-cocycle σ_c with its
//! bicharacter ω_c, and the KMS₁ parameterisation report.

mod cocycle;
mod infinite;
mod kms1;
mod path;
mod periodicity;
mod spectra;

pub use cocycle::{
    omega_c, rtilde_phase, sigma_c, DegreeBilinearCocycle, KGraphCocycle, OmegaCReport,
    TableKCocycle, TrivialKCocycle,
};
pub use infinite::{EventuallyPeriodicPath, PathGroupoidElement};
pub use kms1::{kms1_report, InvarianceConstraint, Kms1Report};
pub use path::DegreePath;
pub use periodicity::{periodicity_group, window_criterion, PerReport};
pub use spectra::{
    adjacency_spectra, measure_cylinder_mass, preferred_dynamics_value, SpectraReport,
};

use crate::groupoid::ValidationReport;
use crate::CoreError;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct KEdge {
    pub id: i64,
    /// 0-based color.
    pub color: usize,
    /// Source vertex index, `s(e)`.
    pub src: usize,
    /// Range vertex index, `r(e)`.
    pub dst: usize,
}

/// A finite k-graph with per-color edge sets and factorisation bijections.
///
/// Words of edges read left to right as morphism composition: `[a, b]` is
/// the path `a·b` with `s(a) = r(b)`, range `r(a)`, source `s(b)`. The
/// factorisation table stores, for every composable pair of distinct-color
/// edges `a·b`, the unique rewriting `a·b = b'·a'`.
#[derive(Clone, Debug)]
pub struct FiniteKGraph {
    k: usize,
    vertex_ids: Vec<i64>,
    edges: Vec<KEdge>,
    by_color: Vec<Vec<usize>>,
    /// `(a, b) → (b', a')` with `a·b = b'·a'`, both directions populated.
    swap: HashMap<(usize, usize), (usize, usize)>,
    /// Raw factorisation entries per color pair (i < j), for validation.
    factorize: HashMap<(usize, usize), Vec<[usize; 4]>>,
}

impl FiniteKGraph {
    /// Assemble from raw tables. Shape errors (unresolved ids, color out of
    /// range, duplicate factorisation keys) fail here; the k-graph axioms
    /// are checked by [`FiniteKGraph::validate`].
    pub fn from_parts(
        k: usize,
        vertex_ids: Vec<i64>,
        edges: Vec<(i64, usize, i64, i64)>, // (id, 1-based color, src id, dst id)
        factorize: Vec<((usize, usize), Vec<[i64; 4]>)>, // ((i,j) 1-based, [e_i, e_j, e_j', e_i'])
    ) -> Result<Self, CoreError> {
        if k == 0 {
            return Err(CoreError::input("k must be at least 1"));
        }
        let vertex_index = |id: i64| {
            vertex_ids
                .iter()
                .position(|&v| v == id)
                .ok_or_else(|| CoreError::input(format!("unknown vertex id {id}")))
        };
        let mut out_edges: Vec<KEdge> = Vec::with_capacity(edges.len());
        let mut by_color = vec![Vec::new(); k];
        for (id, color, src, dst) in edges {
            if color == 0 || color > k {
                return Err(CoreError::input(format!(
                    "edge {id} has color {color}, expected 1..={k}"
                )));
            }
            if out_edges.iter().any(|e: &KEdge| e.id == id) {
                return Err(CoreError::input(format!("duplicate edge id {id}")));
            }
            by_color[color - 1].push(out_edges.len());
            out_edges.push(KEdge {
                id,
                color: color - 1,
                src: vertex_index(src)?,
                dst: vertex_index(dst)?,
            });
        }
        let edge_index = |id: i64| {
            out_edges
                .iter()
                .position(|e| e.id == id)
                .ok_or_else(|| CoreError::input(format!("unknown edge id {id}")))
        };
        let mut swap = HashMap::new();
        let mut fact = HashMap::new();
        for ((i, j), entries) in factorize {
            if i == 0 || j == 0 || i > k || j > k || i >= j {
                return Err(CoreError::input(format!(
                    "factorisation key ({i},{j}) must satisfy 1 <= i < j <= {k}"
                )));
            }
            let mut resolved = Vec::with_capacity(entries.len());
            for [e, f, f2, e2] in entries {
                let quad = [
                    edge_index(e)?,
                    edge_index(f)?,
                    edge_index(f2)?,
                    edge_index(e2)?,
                ];
                if swap.insert((quad[0], quad[1]), (quad[2], quad[3])).is_some() {
                    return Err(CoreError::input(format!(
                        "duplicate factorisation entry for pair ({e},{f})"
                    )));
                }
                swap.insert((quad[2], quad[3]), (quad[0], quad[1]));
                resolved.push(quad);
            }
            fact.insert((i - 1, j - 1), resolved);
        }
        Ok(FiniteKGraph {
            k,
            vertex_ids,
            edges: out_edges,
            by_color,
            swap,
            factorize: fact,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> i64 {
        self.vertex_ids[v]
    }

    pub fn vertex_index(&self, id: i64) -> Result<usize, CoreError> {
        self.vertex_ids
            .iter()
            .position(|&v| v == id)
            .ok_or_else(|| CoreError::input(format!("unknown vertex id {id}")))
    }

    pub fn edge(&self, e: usize) -> &KEdge {
        &self.edges[e]
    }

    pub fn edge_index(&self, id: i64) -> Result<usize, CoreError> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| CoreError::input(format!("unknown edge id {id}")))
    }

    pub fn edges_of_color(&self, color: usize) -> &[usize] {
        &self.by_color[color]
    }

    /// `a·b = b'·a'` for adjacent distinct-color edges; `None` when the pair
    /// is missing from the factorisation table.
    pub fn swap_pair(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        self.swap.get(&(a, b)).copied()
    }

    /// Structure validation: factorisation completeness and bijectivity,
    /// the hexagon (associativity) condition for k ≥ 3, no sources, and
    /// strong connectivity.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        // factorisation: exactly one entry per composable (i<j) pair,
        // endpoints consistent, image covers all composable (j,i) pairs
        for i in 0..self.k {
            for j in i + 1..self.k {
                let entries = self.factorize.get(&(i, j)).cloned().unwrap_or_default();
                let mut seen_src: HashMap<(usize, usize), ()> = HashMap::new();
                let mut seen_img: HashMap<(usize, usize), ()> = HashMap::new();
                for [e, f, f2, e2] in &entries {
                    let (e, f, f2, e2) = (*e, *f, *f2, *e2);
                    if self.edges[e].color != i
                        || self.edges[f].color != j
                        || self.edges[f2].color != j
                        || self.edges[e2].color != i
                    {
                        report.push(format!(
                            "factorisation entry ({},{}) has wrong colors",
                            self.edges[e].id, self.edges[f].id
                        ));
                        continue;
                    }
                    if self.edges[e].src != self.edges[f].dst {
                        report.push(format!(
                            "factorisation entry ({},{}) is not composable",
                            self.edges[e].id, self.edges[f].id
                        ));
                    }
                    // e·f = f'·e' needs matching outer endpoints
                    if self.edges[f2].dst != self.edges[e].dst
                        || self.edges[e2].src != self.edges[f].src
                        || self.edges[f2].src != self.edges[e2].dst
                    {
                        report.push(format!(
                            "factorisation image of ({},{}) has mismatched endpoints",
                            self.edges[e].id, self.edges[f].id
                        ));
                    }
                    if seen_src.insert((e, f), ()).is_some() {
                        report.push(format!(
                            "factorisation has two entries for ({},{})",
                            self.edges[e].id, self.edges[f].id
                        ));
                    }
                    if seen_img.insert((f2, e2), ()).is_some() {
                        report.push(format!(
                            "factorisation is not injective at image ({},{})",
                            self.edges[f2].id, self.edges[e2].id
                        ));
                    }
                }
                for &e in &self.by_color[i] {
                    for &f in &self.by_color[j] {
                        if self.edges[e].src == self.edges[f].dst
                            && !seen_src.contains_key(&(e, f))
                        {
                            report.push(format!(
                                "factorisation missing composable pair ({},{})",
                                self.edges[e].id, self.edges[f].id
                            ));
                        }
                    }
                }
                for &f in &self.by_color[j] {
                    for &e in &self.by_color[i] {
                        if self.edges[f].src == self.edges[e].dst
                            && !seen_img.contains_key(&(f, e))
                        {
                            report.push(format!(
                                "factorisation not surjective onto pair ({},{})",
                                self.edges[f].id, self.edges[e].id
                            ));
                        }
                    }
                }
            }
        }
        if !report.is_valid() {
            return report; // hexagon checks need a working swap table
        }

        // hexagon condition on triples of distinct colors
        for i in 0..self.k {
            for j in i + 1..self.k {
                for l in j + 1..self.k {
                    for &e in &self.by_color[i] {
                        for &f in &self.by_color[j] {
                            if self.edges[e].src != self.edges[f].dst {
                                continue;
                            }
                            for &g in &self.by_color[l] {
                                if self.edges[f].src != self.edges[g].dst {
                                    continue;
                                }
                                if !self.hexagon_holds(e, f, g) {
                                    report.push(format!(
                                        "hexagon fails on edges ({},{},{})",
                                        self.edges[e].id, self.edges[f].id, self.edges[g].id
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }

        for v in 0..self.n_vertices() {
            for c in 0..self.k {
                if !self.by_color[c].iter().any(|&e| self.edges[e].dst == v) {
                    report.push(format!(
                        "vertex {} receives no edge of color {}",
                        self.vertex_ids[v],
                        c + 1
                    ));
                }
            }
        }

        // strong connectivity of the underlying digraph (arcs s(e) → r(e))
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; self.n_vertices()];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for e in &self.edges {
                    let (from, to) = if forward { (e.src, e.dst) } else { (e.dst, e.src) };
                    if from == v && !seen[to] {
                        seen[to] = true;
                        count += 1;
                        stack.push(to);
                    }
                }
            }
            count
        };
        if self.n_vertices() > 0
            && (reach(true) != self.n_vertices() || reach(false) != self.n_vertices())
        {
            report.push("graph is not strongly connected".to_string());
        }

        report
    }

    fn hexagon_holds(&self, e: usize, f: usize, g: usize) -> bool {
        let sw = |w: &mut [usize; 3], p: usize| -> bool {
            match self.swap_pair(w[p], w[p + 1]) {
                Some((b, a)) => {
                    w[p] = b;
                    w[p + 1] = a;
                    true
                }
                None => false,
            }
        };
        let mut route_a = [e, f, g];
        let mut route_b = [e, f, g];
        let ok_a = sw(&mut route_a, 0) && sw(&mut route_a, 1) && sw(&mut route_a, 0);
        let ok_b = sw(&mut route_b, 1) && sw(&mut route_b, 0) && sw(&mut route_b, 1);
        ok_a && ok_b && route_a == route_b
    }
}

// ---------------------------------------------------------------------------
// builders for the standard fixtures

/// Cycle 1-graph `C_n`: vertices `0..n`, edge `e_v : v+1 → v`.
pub fn cycle_graph(n: usize) -> FiniteKGraph {
    assert!(n >= 1);
    let vertices = (0..n as i64).collect();
    let edges = (0..n)
        .map(|v| (v as i64, 1, ((v + 1) % n) as i64, v as i64))
        .collect();
    FiniteKGraph::from_parts(1, vertices, edges, Vec::new()).expect("cycle graph")
}

/// One vertex with `m` loops of the single color (the full m-shift).
pub fn bouquet_graph(m: usize) -> FiniteKGraph {
    assert!(m >= 1);
    let edges = (0..m as i64).map(|e| (e, 1, 0, 0)).collect();
    FiniteKGraph::from_parts(1, vec![0], edges, Vec::new()).expect("bouquet")
}

/// Single-vertex 2-graph with `n` loops of color 1 and `m` of color 2,
/// commuting via the flip factorisation `e·f = f·e`.
pub fn single_vertex_2graph(n: usize, m: usize) -> FiniteKGraph {
    assert!(n >= 1 && m >= 1);
    let mut edges: Vec<(i64, usize, i64, i64)> = (0..n as i64).map(|e| (e, 1, 0, 0)).collect();
    edges.extend((0..m as i64).map(|f| (n as i64 + f, 2, 0, 0)));
    let mut entries = Vec::new();
    for e in 0..n as i64 {
        for f in 0..m as i64 {
            entries.push([e, n as i64 + f, n as i64 + f, e]);
        }
    }
    FiniteKGraph::from_parts(2, vec![0], edges, vec![((1, 2), entries)])
        .expect("single-vertex 2-graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_graph_is_valid() {
        for n in [1, 2, 3, 5] {
            assert!(cycle_graph(n).validate().is_valid(), "C_{n}");
        }
    }

    #[test]
    fn single_vertex_2graph_is_valid() {
        assert!(single_vertex_2graph(1, 1).validate().is_valid());
        assert!(single_vertex_2graph(2, 3).validate().is_valid());
    }

    #[test]
    fn bouquet_is_valid_and_full_shift_shaped() {
        let g = bouquet_graph(2);
        assert!(g.validate().is_valid());
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn broken_factorisation_is_reported() {
        // duplicate image: both pairs map to the same (f, e) pair
        let edges = vec![(0, 1, 0, 0), (1, 1, 0, 0), (2, 2, 0, 0)];
        let entries = vec![[0i64, 2, 2, 0], [1, 2, 2, 0]];
        let g = FiniteKGraph::from_parts(2, vec![0], edges, vec![((1, 2), entries)]).unwrap();
        let report = g.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("not injective") || v.contains("not surjective")));
    }

    #[test]
    fn missing_source_and_disconnection_are_reported() {
        // two vertices, single edge 1 → 0: vertex 1 receives nothing
        let g =
            FiniteKGraph::from_parts(1, vec![0, 1], vec![(0, 1, 1, 0)], Vec::new()).unwrap();
        let report = g.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("receives no edge")));
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("strongly connected")));
    }

    #[test]
    fn three_color_hexagon_holds_for_flip_graph() {
        // single vertex, one loop per color, all flips
        let edges = vec![(0, 1, 0, 0), (1, 2, 0, 0), (2, 3, 0, 0)];
        let fact = vec![
            ((1, 2), vec![[0i64, 1, 1, 0]]),
            ((1, 3), vec![[0, 2, 2, 0]]),
            ((2, 3), vec![[1, 2, 2, 1]]),
        ];
        let g = FiniteKGraph::from_parts(3, vec![0], edges, fact).unwrap();
        assert!(g.validate().is_valid());
    }
}
