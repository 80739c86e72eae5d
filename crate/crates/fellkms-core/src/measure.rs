//! Quasi-invariant probability measures on the unit space with
//! Radon–Nikodym cocycle `e^{−βD}`. In the finite discrete case
//! `Δ_μ(γ) = μ(r(γ))/μ(s(γ))`, so the condition is the linear system
//! `μ(r(γ)) = e^{−βD(γ)}·μ(s(γ))` over the support. Orbits are admissible
//! iff `βD` vanishes on the base isotropy (loop consistency), and each
//! admissible orbit carries exactly one extreme solution, spread along a
//! spanning tree; the general solution is the convex hull.

use crate::cocycle::OneCocycle;
use crate::groupoid::GroupoidRef;
use crate::{CoreError, Scalar};

/// A nonnegative weight per unit; a probability measure when it sums to 1.
#[derive(Clone, Debug)]
pub struct UnitMeasure<F: Scalar = f64> {
    g: GroupoidRef,
    weights: Vec<F>,
}

impl<F: Scalar> UnitMeasure<F> {
    pub fn from_weights(g: GroupoidRef, weights: Vec<F>) -> Result<Self, CoreError> {
        if weights.len() != g.n_units() {
            return Err(CoreError::input("measure has wrong number of units"));
        }
        if weights.iter().any(|w| *w < F::zero()) {
            return Err(CoreError::input("measure weights must be nonnegative"));
        }
        Ok(UnitMeasure { g, weights })
    }

    pub fn groupoid(&self) -> &GroupoidRef {
        &self.g
    }

    pub fn weight(&self, x: usize) -> F {
        self.weights[x]
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn total(&self) -> F {
        self.weights.iter().copied().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter_map(|(x, w)| (*w > F::zero()).then_some(x))
    }

    pub fn in_support(&self, x: usize) -> bool {
        self.weights[x] > F::zero()
    }

    /// Convex combination Σ t_i μ_i (coefficients assumed to sum to 1).
    pub fn convex_combination(parts: &[(F, &UnitMeasure<F>)]) -> Result<Self, CoreError> {
        let g = parts
            .first()
            .map(|(_, m)| m.g.clone())
            .ok_or_else(|| CoreError::input("empty combination"))?;
        let mut weights = vec![F::zero(); g.n_units()];
        for (t, m) in parts {
            for (x, w) in m.weights.iter().enumerate() {
                weights[x] = weights[x] + *t * *w;
            }
        }
        UnitMeasure::from_weights(g, weights)
    }
}

/// One orbit of the unit space with a base, a spanning tree of connecting
/// arrows `η_x` (src = base, dst = x) and the isotropy at the base.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub base: usize,
    pub members: Vec<usize>,
    /// Per member (parallel to `members`): an arrow from the base to it.
    pub tree_arrows: Vec<usize>,
    pub base_isotropy: Vec<usize>,
}

/// Partition of the units into orbits; two units share an orbit iff an
/// arrow connects them.
pub fn orbits(g: &GroupoidRef) -> Vec<Orbit> {
    let mut seen = vec![false; g.n_units()];
    let mut out = Vec::new();
    for base in g.units() {
        if seen[base] {
            continue;
        }
        seen[base] = true;
        let base_arrow = g
            .unit_arrow(base)
            .expect("orbit analysis requires identity arrows");
        let mut members = vec![base];
        let mut tree_arrows = vec![base_arrow];
        let mut queue = vec![base];
        while let Some(x) = queue.pop() {
            let eta_x = tree_arrows[members.iter().position(|&m| m == x).unwrap()];
            for a in g.arrows() {
                // outward: src = x, so compose(a, η_x) runs base → dst(a)
                let candidates = [
                    (g.src(a) == x, g.dst(a), a),
                    (g.dst(a) == x, g.src(a), g.inv(a)),
                ];
                for (applies, y, step) in candidates {
                    if applies && !seen[y] {
                        seen[y] = true;
                        let eta_y = g.compose(step, eta_x).expect("tree composition");
                        members.push(y);
                        tree_arrows.push(eta_y);
                        queue.push(y);
                    }
                }
            }
        }
        let base_isotropy = g.isotropy(base);
        out.push(Orbit {
            base,
            members,
            tree_arrows,
            base_isotropy,
        });
    }
    out
}

#[derive(Clone, Debug)]
pub struct OrbitVerdict<F: Scalar> {
    pub base_unit_id: i64,
    pub admissible: bool,
    /// max |βD(u)| over the base isotropy — the loop-consistency defect.
    pub isotropy_defect: F,
}

/// Loop-consistency defect of an orbit: max |βD(u)| over the base isotropy.
/// Conjugation invariance of D makes the base check sufficient.
pub fn orbit_isotropy_defect<F: Scalar>(orbit: &Orbit, d: &OneCocycle<F>, beta: F) -> F {
    orbit
        .base_isotropy
        .iter()
        .map(|&u| (beta * d.value(u)).abs())
        .fold(F::zero(), F::max)
}

/// The unique extreme measure of an admissible orbit: weights `e^{−βD(η_x)}`
/// along the spanning tree, normalised.
pub fn orbit_extreme_measure<F: Scalar>(
    g: &GroupoidRef,
    orbit: &Orbit,
    d: &OneCocycle<F>,
    beta: F,
) -> UnitMeasure<F> {
    let mut weights = vec![F::zero(); g.n_units()];
    for (x, eta) in orbit.members.iter().zip(&orbit.tree_arrows) {
        // μ(r(η)) = e^{−βD(η)} μ(s(η)) with s(η) = base
        weights[*x] = (-beta * d.value(*eta)).exp();
    }
    let total: F = weights.iter().copied().sum();
    for w in &mut weights {
        *w = *w / total;
    }
    UnitMeasure::from_weights(g.clone(), weights).expect("normalised")
}

/// All extreme quasi-invariant probability measures with Radon–Nikodym
/// cocycle `e^{−βD}`, one per admissible orbit, plus per-orbit verdicts.
pub fn quasi_invariant_extremes<F: Scalar>(
    g: &GroupoidRef,
    d: &OneCocycle<F>,
    beta: F,
    tol: F,
) -> (Vec<UnitMeasure<F>>, Vec<OrbitVerdict<F>>) {
    let mut measures = Vec::new();
    let mut verdicts = Vec::new();
    for orbit in orbits(g) {
        let isotropy_defect = orbit_isotropy_defect(&orbit, d, beta);
        let admissible = isotropy_defect <= tol;
        verdicts.push(OrbitVerdict {
            base_unit_id: g.unit_id(orbit.base),
            admissible,
            isotropy_defect,
        });
        if !admissible {
            continue;
        }
        measures.push(orbit_extreme_measure(g, &orbit, d, beta));
    }
    (measures, verdicts)
}

/// Residual of the quasi-invariance system: max over arrows with both
/// endpoints in the support of `|μ(r(γ)) − e^{−βD(γ)} μ(s(γ))|`.
pub fn quasi_invariance_residual<F: Scalar>(
    mu: &UnitMeasure<F>,
    d: &OneCocycle<F>,
    beta: F,
) -> F {
    let g = mu.groupoid();
    g.arrows()
        .filter(|&a| mu.in_support(g.src(a)) && mu.in_support(g.dst(a)))
        .map(|a| (mu.weight(g.dst(a)) - (-beta * d.value(a)).exp() * mu.weight(g.src(a))).abs())
        .fold(F::zero(), F::max)
}
