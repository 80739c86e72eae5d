//! T-valued 2-cocycles (exact rational angles) and real 1-cocycles on a
//! finite groupoid, coboundaries, and their validation reports.

use crate::angle::UnitCircleValue;
use crate::groupoid::{same_groupoid, GroupoidRef, ValidationReport};
use crate::{CoreError, Scalar};

/// σ : G² → T on composable pairs, stored densely over arrow pairs.
#[derive(Clone, Debug)]
pub struct TwoCocycle {
    g: GroupoidRef,
    vals: Vec<UnitCircleValue>,
}

impl TwoCocycle {
    pub fn trivial(g: GroupoidRef) -> Self {
        let n = g.n_arrows();
        TwoCocycle {
            g,
            vals: vec![UnitCircleValue::ONE; n * n],
        }
    }

    /// Build from a closure evaluated on every composable pair.
    pub fn from_fn(g: GroupoidRef, f: impl Fn(usize, usize) -> UnitCircleValue) -> Self {
        let n = g.n_arrows();
        let mut vals = vec![UnitCircleValue::ONE; n * n];
        for (a, b, _) in g.composable_pairs() {
            vals[a * n + b] = f(a, b);
        }
        TwoCocycle { g, vals }
    }

    /// Build from explicit `(α id, β id, value)` entries. Every composable
    /// pair must be covered; entries on non-composable pairs are rejected.
    pub fn from_pairs(
        g: GroupoidRef,
        entries: &[(i64, i64, UnitCircleValue)],
    ) -> Result<Self, CoreError> {
        let n = g.n_arrows();
        let mut vals = vec![UnitCircleValue::ONE; n * n];
        let mut seen = vec![false; n * n];
        for &(aid, bid, v) in entries {
            let a = g.arrow_index(aid)?;
            let b = g.arrow_index(bid)?;
            if g.compose(a, b).is_none() {
                return Err(CoreError::input(format!(
                    "cocycle entry on non-composable pair ({aid},{bid})"
                )));
            }
            vals[a * n + b] = v;
            seen[a * n + b] = true;
        }
        for (a, b, _) in g.composable_pairs() {
            if !seen[a * n + b] {
                return Err(CoreError::input(format!(
                    "missing cocycle value on composable pair ({},{})",
                    g.arrow_id(a),
                    g.arrow_id(b)
                )));
            }
        }
        Ok(TwoCocycle { g, vals })
    }

    pub fn groupoid(&self) -> &GroupoidRef {
        &self.g
    }

    pub fn value(&self, a: usize, b: usize) -> UnitCircleValue {
        debug_assert!(self.g.compose(a, b).is_some(), "pair not composable");
        self.vals[a * self.g.n_arrows() + b]
    }

    /// Pointwise product (the group law of Z²(G,T)).
    pub fn product(&self, other: &TwoCocycle) -> Result<TwoCocycle, CoreError> {
        if !same_groupoid(&self.g, &other.g) {
            return Err(CoreError::MismatchedGroupoid);
        }
        Ok(TwoCocycle {
            g: self.g.clone(),
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }

    /// Restriction to a subgroupoid whose arrows map into this groupoid's
    /// via `arrow_map` (e.g. an isotropy subgroupoid).
    pub fn restrict_to(&self, sub: GroupoidRef, arrow_map: &[usize]) -> TwoCocycle {
        TwoCocycle::from_fn(sub, |a, b| self.value(arrow_map[a], arrow_map[b]))
    }

    /// Exact check of normalisation and the cocycle identity
    /// σ(α,β)σ(αβ,γ) = σ(β,γ)σ(α,βγ).
    pub fn validate(&self) -> ValidationReport {
        let g = &self.g;
        let mut report = ValidationReport::default();
        for gamma in g.arrows() {
            let (Ok(ur), Ok(us)) = (
                g.unit_arrow_checked(g.dst(gamma)),
                g.unit_arrow_checked(g.src(gamma)),
            ) else {
                report.push("groupoid lacks identity arrows; validate the groupoid first");
                return report;
            };
            if !self.value(ur, gamma).is_one() {
                report.push(format!(
                    "normalisation: σ(r(γ),γ) ≠ 1 for arrow {}",
                    g.arrow_id(gamma)
                ));
            }
            if !self.value(gamma, us).is_one() {
                report.push(format!(
                    "normalisation: σ(γ,s(γ)) ≠ 1 for arrow {}",
                    g.arrow_id(gamma)
                ));
            }
        }
        for (a, b, ab) in g.composable_pairs() {
            for c in g.arrows() {
                if g.src(b) != g.dst(c) {
                    continue;
                }
                let bc = g.compose(b, c).expect("composable");
                let lhs = self.value(a, b).mul(&self.value(ab, c));
                let rhs = self.value(b, c).mul(&self.value(a, bc));
                if lhs != rhs {
                    report.push(format!(
                        "cocycle identity fails on triple ({},{},{})",
                        g.arrow_id(a),
                        g.arrow_id(b),
                        g.arrow_id(c)
                    ));
                }
            }
        }
        report
    }
}

/// 2-coboundary δ¹b(α,β) = b(α)b(β)·conj(b(αβ)) of a circle-valued `b` on
/// arrows with b ≡ 1 on unit arrows.
pub fn coboundary(g: &GroupoidRef, b: &[UnitCircleValue]) -> Result<TwoCocycle, CoreError> {
    if b.len() != g.n_arrows() {
        return Err(CoreError::input("coboundary data has wrong length"));
    }
    for x in g.units() {
        let u = g.unit_arrow_checked(x)?;
        if !b[u].is_one() {
            return Err(CoreError::input(format!(
                "b must be 1 on unit arrows; b ≠ 1 at unit {}",
                g.unit_id(x)
            )));
        }
    }
    Ok(TwoCocycle::from_fn(g.clone(), |alpha, beta| {
        let ab = g.compose(alpha, beta).expect("composable");
        b[alpha].mul(&b[beta]).mul(&b[ab].conj())
    }))
}

/// Real-valued 1-cocycle (additive on composition); generates the dynamics.
#[derive(Clone, Debug)]
pub struct OneCocycle<F: Scalar = f64> {
    g: GroupoidRef,
    vals: Vec<F>,
}

impl<F: Scalar> OneCocycle<F> {
    pub fn zero(g: GroupoidRef) -> Self {
        let n = g.n_arrows();
        OneCocycle {
            g,
            vals: vec![F::zero(); n],
        }
    }

    pub fn from_values(g: GroupoidRef, vals: Vec<F>) -> Result<Self, CoreError> {
        if vals.len() != g.n_arrows() {
            return Err(CoreError::input("one-cocycle data has wrong length"));
        }
        Ok(OneCocycle { g, vals })
    }

    /// `D(γ) = V(r(γ)) − V(s(γ))`; every unit potential gives a valid
    /// 1-cocycle, and on a finite groupoid every 1-cocycle arises this way
    /// orbitwise (ℝ has no torsion).
    pub fn from_unit_potential(g: GroupoidRef, potential: &[F]) -> Result<Self, CoreError> {
        if potential.len() != g.n_units() {
            return Err(CoreError::input("potential has wrong length"));
        }
        let vals = g
            .arrows()
            .map(|a| potential[g.dst(a)] - potential[g.src(a)])
            .collect();
        Ok(OneCocycle { g, vals })
    }

    pub fn groupoid(&self) -> &GroupoidRef {
        &self.g
    }

    pub fn value(&self, a: usize) -> F {
        self.vals[a]
    }

    /// Additivity within `tol` over all composable pairs; zero on units.
    pub fn validate(&self, tol: F) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (a, b, ab) in self.g.composable_pairs() {
            let defect = (self.vals[ab] - self.vals[a] - self.vals[b]).abs();
            if defect > tol {
                report.push(format!(
                    "additivity: |D(αβ)−D(α)−D(β)| = {defect} on pair ({},{})",
                    self.g.arrow_id(a),
                    self.g.arrow_id(b)
                ));
            }
        }
        for x in self.g.units() {
            if let Some(u) = self.g.unit_arrow(x) {
                if self.vals[u].abs() > tol {
                    report.push(format!("D ≠ 0 on unit arrow at {}", self.g.unit_id(x)));
                }
            }
        }
        report
    }
}
