//! Eventually periodic infinite paths `μ·ζ^∞` (dense in the path space and
//! closed under shifts) and path-groupoid elements `(x, l, y)` with exact
//! witness verification.
//!
//! Equality of two eventually periodic paths is decidable: beyond the
//! prefixes both tails are pure with periods `p` and `q`, a pure path with
//! period `p` equals `ρ^q` of itself iff the `(0,p)` and `(q,q+p)` windows
//! agree, and two pure paths sharing the period `q` agree iff their `(0,q)`
//! windows do.

use super::path::{deg_add, deg_leq, deg_max};
use super::{DegreePath, FiniteKGraph};
use crate::CoreError;

/// The infinite path `prefix·cycle·cycle·…` with `r(cycle) = s(cycle) =
/// s(prefix)` and `d(cycle) ≥ (1,…,1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyPeriodicPath {
    pub prefix: DegreePath,
    pub cycle: DegreePath,
}

impl EventuallyPeriodicPath {
    /// `r(x)` (vertex index).
    pub fn range(&self) -> usize {
        self.prefix.range()
    }
}

impl FiniteKGraph {
    pub fn eventually_periodic(
        &self,
        prefix: DegreePath,
        cycle: DegreePath,
    ) -> Result<EventuallyPeriodicPath, CoreError> {
        if cycle.range() != cycle.source() || cycle.range() != prefix.source() {
            return Err(CoreError::input(
                "cycle must be a loop at the prefix source",
            ));
        }
        if cycle.degree().iter().any(|&d| d == 0) {
            return Err(CoreError::input(
                "cycle degree must be ≥ 1 in every color",
            ));
        }
        Ok(EventuallyPeriodicPath { prefix, cycle })
    }

    /// A purely periodic path `ζ^∞`.
    pub fn periodic(&self, cycle: DegreePath) -> Result<EventuallyPeriodicPath, CoreError> {
        let v = cycle.range();
        self.eventually_periodic(self.vertex_path(v), cycle)
    }

    /// Unroll until the window `x(a, b)` is contained in `prefix·cycle^t`.
    pub fn infinite_window(
        &self,
        x: &EventuallyPeriodicPath,
        a: &[u32],
        b: &[u32],
    ) -> Result<DegreePath, CoreError> {
        if !deg_leq(a, b) {
            return Err(CoreError::input("window needs a ≤ b"));
        }
        let mut t = 0u32;
        let mut reach = x.prefix.degree().to_vec();
        while !deg_leq(b, &reach) {
            reach = deg_add(&reach, x.cycle.degree());
            t += 1;
        }
        let mut unrolled = x.prefix.clone();
        for _ in 0..t {
            unrolled = self.compose_paths(&unrolled, &x.cycle)?;
        }
        self.path_window(&unrolled, a, b)
    }

    /// `λ·x` for a finite path with `s(λ) = r(x)`.
    pub fn prepend(
        &self,
        lambda: &DegreePath,
        x: &EventuallyPeriodicPath,
    ) -> Result<EventuallyPeriodicPath, CoreError> {
        let prefix = self.compose_paths(lambda, &x.prefix)?;
        self.eventually_periodic(prefix, x.cycle.clone())
    }

    /// The shift `ρ^l(x)` in closed form: drop `x(0,l)` and keep the cycle.
    pub fn shift_infinite(
        &self,
        x: &EventuallyPeriodicPath,
        l: &[u32],
    ) -> Result<EventuallyPeriodicPath, CoreError> {
        let mut reach = x.prefix.degree().to_vec();
        while !deg_leq(l, &reach) {
            reach = deg_add(&reach, x.cycle.degree());
        }
        let prefix = self.infinite_window(x, l, &reach)?;
        self.eventually_periodic(prefix, x.cycle.clone())
    }

    /// Exact equality of eventually periodic paths (see module docs).
    pub fn eq_infinite(
        &self,
        x: &EventuallyPeriodicPath,
        y: &EventuallyPeriodicPath,
    ) -> Result<bool, CoreError> {
        let b = deg_max(x.prefix.degree(), y.prefix.degree());
        let zero = vec![0u32; self.k()];
        if self.infinite_window(x, &zero, &b)? != self.infinite_window(y, &zero, &b)? {
            return Ok(false);
        }
        let p = x.cycle.degree().to_vec();
        let q = y.cycle.degree().to_vec();
        // tail of x has period q?
        let bp = deg_add(&b, &p);
        let bq = deg_add(&b, &q);
        if self.infinite_window(x, &b, &bp)? != self.infinite_window(x, &bq, &deg_add(&bq, &p))? {
            return Ok(false);
        }
        Ok(self.infinite_window(x, &b, &bq)? == self.infinite_window(y, &b, &bq)?)
    }

    /// A canonical eventually periodic path with range `v`: walk degree-𝟙
    /// steps until a vertex repeats, then close the loop. `pick_last`
    /// selects a different walk for use as a second base point.
    pub fn periodic_path_at(
        &self,
        v: usize,
        pick_last: bool,
    ) -> Result<EventuallyPeriodicPath, CoreError> {
        let ones = vec![1u32; self.k()];
        let mut visited: Vec<usize> = vec![v];
        let mut steps: Vec<DegreePath> = Vec::new();
        loop {
            let at = *visited.last().unwrap();
            let options = self.paths_with_range(&ones, at);
            let step = if pick_last {
                options.last().cloned()
            } else {
                options.first().cloned()
            }
            .ok_or_else(|| {
                CoreError::precondition("k-graph has a source; no degree-𝟙 step exists")
            })?;
            let next = step.source();
            steps.push(step);
            if let Some(pos) = visited.iter().position(|&w| w == next) {
                let mut prefix = self.vertex_path(v);
                for s in &steps[..pos] {
                    prefix = self.compose_paths(&prefix, s)?;
                }
                let mut cycle = self.vertex_path(next);
                for s in &steps[pos..] {
                    cycle = self.compose_paths(&cycle, s)?;
                }
                return self.eventually_periodic(prefix, cycle);
            }
            visited.push(next);
        }
    }
}

/// An element `(x, l, y)` of the path groupoid, carrying a verified witness
/// `(m, n)` with `l = m − n` and `ρ^m(x) = ρ^n(y)`.
#[derive(Clone, Debug)]
pub struct PathGroupoidElement {
    pub range_path: EventuallyPeriodicPath,
    pub shift: Vec<i64>,
    pub source_path: EventuallyPeriodicPath,
    pub witness: (Vec<u32>, Vec<u32>),
}

impl FiniteKGraph {
    pub fn groupoid_element(
        &self,
        range_path: EventuallyPeriodicPath,
        shift: Vec<i64>,
        source_path: EventuallyPeriodicPath,
        witness: (Vec<u32>, Vec<u32>),
    ) -> Result<PathGroupoidElement, CoreError> {
        let (m, n) = &witness;
        if m.len() != self.k() || n.len() != self.k() || shift.len() != self.k() {
            return Err(CoreError::input("witness dimension mismatch"));
        }
        for i in 0..self.k() {
            if m[i] as i64 - n[i] as i64 != shift[i] {
                return Err(CoreError::input("witness does not realise l = m − n"));
            }
        }
        let shifted_x = self.shift_infinite(&range_path, m)?;
        let shifted_y = self.shift_infinite(&source_path, n)?;
        if !self.eq_infinite(&shifted_x, &shifted_y)? {
            return Err(CoreError::input("witness fails: ρ^m(x) ≠ ρ^n(y)"));
        }
        Ok(PathGroupoidElement {
            range_path,
            shift,
            source_path,
            witness,
        })
    }

    pub fn unit_element(
        &self,
        x: &EventuallyPeriodicPath,
    ) -> Result<PathGroupoidElement, CoreError> {
        let zero = vec![0u32; self.k()];
        self.groupoid_element(
            x.clone(),
            vec![0; self.k()],
            x.clone(),
            (zero.clone(), zero),
        )
    }

    /// `(x, p, x)` for `p` a period of `x` (witness `(p⁺, p⁻)`); errors when
    /// `p` is not actually a period of this path.
    pub fn isotropy_element(
        &self,
        x: &EventuallyPeriodicPath,
        p: &[i64],
    ) -> Result<PathGroupoidElement, CoreError> {
        let m: Vec<u32> = p.iter().map(|&v| v.max(0) as u32).collect();
        let n: Vec<u32> = p.iter().map(|&v| (-v).max(0) as u32).collect();
        self.groupoid_element(x.clone(), p.to_vec(), x.clone(), (m, n))
    }

    pub fn inverse_element(&self, alpha: &PathGroupoidElement) -> PathGroupoidElement {
        PathGroupoidElement {
            range_path: alpha.source_path.clone(),
            shift: alpha.shift.iter().map(|v| -v).collect(),
            source_path: alpha.range_path.clone(),
            witness: (alpha.witness.1.clone(), alpha.witness.0.clone()),
        }
    }

    /// `αβ`, requires `s(α) = r(β)`. Witnesses compose additively.
    pub fn compose_elements(
        &self,
        alpha: &PathGroupoidElement,
        beta: &PathGroupoidElement,
    ) -> Result<PathGroupoidElement, CoreError> {
        if !self.eq_infinite(&alpha.source_path, &beta.range_path)? {
            return Err(CoreError::input("elements not composable: s(α) ≠ r(β)"));
        }
        let shift: Vec<i64> = alpha
            .shift
            .iter()
            .zip(&beta.shift)
            .map(|(a, b)| a + b)
            .collect();
        let witness = (
            deg_add(&alpha.witness.0, &beta.witness.0),
            deg_add(&alpha.witness.1, &beta.witness.1),
        );
        // composed witness: ρ^{mα+mβ}(x) = ρ^{nα+mβ}(z) = ρ^{nα+nβ}(y)
        self.groupoid_element(
            alpha.range_path.clone(),
            shift,
            beta.source_path.clone(),
            witness,
        )
    }

    /// The canonical partition cell of α: the deg-lex least witness `(m, n)`
    /// determines `μ_α = x(0,m)`, `ν_α = y(0,n)`. For `α = (x,0,x)` this is
    /// `(r(x), r(x))`, so the `(μ, s(μ))` cells are all present.
    pub fn canonical_cell(
        &self,
        alpha: &PathGroupoidElement,
    ) -> Result<(DegreePath, DegreePath, (Vec<u32>, Vec<u32>)), CoreError> {
        let k = self.k();
        let lower: Vec<u32> = alpha.shift.iter().map(|&v| (-v).max(0) as u32).collect();
        let bound: u32 = alpha.witness.1.iter().sum();
        let lower_sum: u32 = lower.iter().sum();
        for total in lower_sum..=bound {
            for n in compositions_at_least(k, total, &lower) {
                let m: Vec<u32> = n
                    .iter()
                    .zip(&alpha.shift)
                    .map(|(&ni, &li)| (ni as i64 + li) as u32)
                    .collect();
                let sx = self.shift_infinite(&alpha.range_path, &m)?;
                let sy = self.shift_infinite(&alpha.source_path, &n)?;
                if self.eq_infinite(&sx, &sy)? {
                    let zero = vec![0u32; k];
                    let mu = self.infinite_window(&alpha.range_path, &zero, &m)?;
                    let nu = self.infinite_window(&alpha.source_path, &zero, &n)?;
                    return Ok((mu, nu, (m, n)));
                }
            }
        }
        // the stored witness itself is always a member of the search space
        Err(CoreError::precondition(
            "no witness found within the deg-lex bound; stored witness invalid",
        ))
    }
}

/// All `n ∈ ℕ^k` with `Σn = total` and `n ≥ lower`, in lexicographic order.
fn compositions_at_least(k: usize, total: u32, lower: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; k];
    fn rec(
        k: usize,
        pos: usize,
        remaining: u32,
        lower: &[u32],
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == k {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let min_rest: u32 = lower[pos + 1..].iter().sum();
        if remaining < lower[pos] + min_rest {
            return;
        }
        for v in lower[pos]..=(remaining - min_rest) {
            current[pos] = v;
            rec(k, pos + 1, remaining - v, lower, current, out);
        }
        current[pos] = 0;
    }
    rec(k, 0, total, lower, &mut current, &mut out);
    out
}
