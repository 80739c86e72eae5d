//! The periodicity group `Per = {m − n : ρ^m = ρ^n on all infinite paths}`
//! through the exact window criterion: with `m = p∨0`, `n = (−p)∨0`,
//! `p ∈ Per` iff for every color `i` and every `λ ∈ Λ^{m+n+e_i}` the
//! single-edge windows `λ(m, m+e_i)` and `λ(n, n+e_i)` agree. Every finite
//! path is an initial window of an infinite path (no sources), and a path is
//! determined by its single-edge increments, so window quantification is
//! equivalent to quantification over all paths and shifts.

use super::path::unit_deg;
use super::FiniteKGraph;
use crate::lattice::LatticeSubgroup;

/// Exact certificate that `p ∈ Per`.
pub fn window_criterion(g: &FiniteKGraph, p: &[i64]) -> bool {
    let k = g.k();
    let m: Vec<u32> = p.iter().map(|&v| v.max(0) as u32).collect();
    let n: Vec<u32> = p.iter().map(|&v| (-v).max(0) as u32).collect();
    for color in 0..k {
        let e_i = unit_deg(k, color);
        let full: Vec<u32> = (0..k).map(|i| m[i] + n[i] + e_i[i]).collect();
        let m_hi: Vec<u32> = (0..k).map(|i| m[i] + e_i[i]).collect();
        let n_hi: Vec<u32> = (0..k).map(|i| n[i] + e_i[i]).collect();
        for lambda in g.enumerate_paths(&full) {
            let at_m = g.path_window(&lambda, &m, &m_hi).expect("window in range");
            let at_n = g.path_window(&lambda, &n, &n_hi).expect("window in range");
            if at_m != at_n {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct PerReport {
    pub box_bound: i64,
    /// Nonzero certified candidates in the box.
    pub certified: Vec<Vec<i64>>,
    /// Subgroup generated by the certified candidates. Per itself may have
    /// generators outside the box; each certificate is exact regardless.
    pub subgroup: LatticeSubgroup,
}

/// Certify every candidate in `[−B, B]^k` by the window criterion.
pub fn periodicity_group(g: &FiniteKGraph, box_bound: i64) -> PerReport {
    let k = g.k();
    let mut certified = Vec::new();
    let mut p = vec![-box_bound; k];
    loop {
        if p.iter().any(|&v| v != 0) && window_criterion(g, &p) {
            certified.push(p.clone());
        }
        let mut i = 0;
        loop {
            if i == k {
                let subgroup = LatticeSubgroup::from_generators(k, &certified);
                return PerReport {
                    box_bound,
                    certified,
                    subgroup,
                };
            }
            p[i] += 1;
            if p[i] <= box_bound {
                break;
            }
            p[i] = -box_bound;
            i += 1;
        }
    }
}
