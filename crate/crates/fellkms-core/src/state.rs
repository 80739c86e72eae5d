//! The (measure, trace-field) ↔ state correspondence on a finite twisted
//! groupoid: assembling `Θ(μ,Ψ)(δ_γ) = μ(x)·ψ_x(W_γ)` over isotropy,
//! extracting the pair back, the conjugation-equivariance condition (II)
//! with its exact phase `σ(ηu,η⁻¹)σ(η,u)·conj(σ(η⁻¹,η))`, the vanishing
//! check off `D⁻¹(0)`, and enumeration of the extreme KMS states.

use crate::algebra::{
    extreme_tracial_states, kms_defect, positivity_check, trace_space, LinearFunctional,
};
use crate::angle::UnitCircleValue;
use crate::cocycle::{OneCocycle, TwoCocycle};
use crate::groupoid::{isotropy_subgroupoid, same_groupoid, GroupoidRef};
use crate::measure::{orbit_extreme_measure, orbit_isotropy_defect, orbits, UnitMeasure};
use crate::{CoreError, Scalar};
use num_complex::Complex;
use std::collections::BTreeMap;

/// A field of functionals on the twisted isotropy algebras: for each unit
/// in the support, the values `ψ_x(W_u)` over `u ∈ isotropy(x)`.
#[derive(Clone, Debug)]
pub struct TraceField<F: Scalar = f64> {
    g: GroupoidRef,
    values: Vec<Option<BTreeMap<usize, Complex<F>>>>,
}

impl<F: Scalar> TraceField<F> {
    pub fn empty(g: GroupoidRef) -> Self {
        let n = g.n_units();
        TraceField {
            g,
            values: vec![None; n],
        }
    }

    /// The field with `ψ_x = [u = unit]` at each unit of `support`.
    pub fn trivial(g: GroupoidRef, support: impl IntoIterator<Item = usize>) -> Self {
        let mut field = Self::empty(g.clone());
        for x in support {
            let mut map = BTreeMap::new();
            for u in g.isotropy(x) {
                let v = if g.is_unit_arrow(u) { F::one() } else { F::zero() };
                map.insert(u, Complex::new(v, F::zero()));
            }
            field.values[x] = Some(map);
        }
        field
    }

    pub fn groupoid(&self) -> &GroupoidRef {
        &self.g
    }

    pub fn set_unit(&mut self, x: usize, values: BTreeMap<usize, Complex<F>>) {
        self.values[x] = Some(values);
    }

    pub fn set_value(&mut self, x: usize, u: usize, v: Complex<F>) {
        self.values[x]
            .get_or_insert_with(BTreeMap::new)
            .insert(u, v);
    }

    pub fn defined_at(&self, x: usize) -> bool {
        self.values[x].is_some()
    }

    pub fn unit_values(&self, x: usize) -> Option<&BTreeMap<usize, Complex<F>>> {
        self.values[x].as_ref()
    }

    /// ψ_x(W_u), zero for entries not stored.
    pub fn value(&self, x: usize, u: usize) -> Complex<F> {
        self.values[x]
            .as_ref()
            .and_then(|m| m.get(&u).copied())
            .unwrap_or_else(|| Complex::new(F::zero(), F::zero()))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(x, v)| v.as_ref().map(|_| x))
    }

    pub fn max_abs_diff_on(&self, other: &Self, support: &[usize]) -> F {
        let mut worst = F::zero();
        for &x in support {
            for u in self.g.isotropy(x) {
                worst = worst.max((self.value(x, u) - other.value(x, u)).norm());
            }
        }
        worst
    }
}

/// The conjugation phase of condition (II):
/// `σ(ηu,η⁻¹)·σ(η,u)·conj(σ(η⁻¹,η))` for `u ∈ Iso(src(η))`.
pub fn condition_ii_phase(
    sigma: &TwoCocycle,
    eta: usize,
    u: usize,
) -> Result<UnitCircleValue, CoreError> {
    let g = sigma.groupoid();
    let eta_u = g
        .compose(eta, u)
        .ok_or_else(|| CoreError::input("η and u not composable"))?;
    let eta_inv = g.inv(eta);
    Ok(sigma
        .value(eta_u, eta_inv)
        .mul(&sigma.value(eta, u))
        .mul(&sigma.value(eta_inv, eta).conj()))
}

/// `η u η⁻¹` for `u ∈ Iso(src(η))`.
pub fn conjugate_arrow(g: &GroupoidRef, eta: usize, u: usize) -> Option<usize> {
    let eta_u = g.compose(eta, u)?;
    g.compose(eta_u, g.inv(eta))
}

#[derive(Clone, Debug)]
pub struct CondIIWitness {
    pub unit_id: i64,
    pub iso_arrow_id: i64,
    pub eta_arrow_id: i64,
}

#[derive(Clone, Debug)]
pub struct CondIIReport<F: Scalar> {
    pub ok: bool,
    pub max_violation: F,
    pub witness: Option<CondIIWitness>,
}

/// Verify `ψ_x(W_u) = phase(η,u)·ψ_{r(η)}(W_{ηuη⁻¹})` over every unit of the
/// support, every isotropy arrow, every η out of the unit whose range is in
/// the support (μ-a.e. only the support matters).
pub fn check_condition_ii<F: Scalar>(
    field: &TraceField<F>,
    mu: &UnitMeasure<F>,
    sigma: &TwoCocycle,
    tol: F,
) -> Result<CondIIReport<F>, CoreError> {
    let g = sigma.groupoid();
    if !same_groupoid(field.groupoid(), g) || !same_groupoid(mu.groupoid(), g) {
        return Err(CoreError::MismatchedGroupoid);
    }
    for x in mu.support() {
        if !field.defined_at(x) {
            return Err(CoreError::input(format!(
                "trace field missing support unit {}",
                g.unit_id(x)
            )));
        }
    }
    let mut max_violation = F::zero();
    let mut witness = None;
    for x in mu.support() {
        for u in g.isotropy(x) {
            for eta in g.arrows() {
                if g.src(eta) != x {
                    continue;
                }
                let y = g.dst(eta);
                if !mu.in_support(y) {
                    continue;
                }
                let v = conjugate_arrow(g, eta, u).expect("isotropy conjugation");
                let phase = condition_ii_phase(sigma, eta, u)?;
                let rhs = phase.eval::<F>() * field.value(y, v);
                let violation = (field.value(x, u) - rhs).norm();
                if violation > max_violation {
                    max_violation = violation;
                    witness = Some(CondIIWitness {
                        unit_id: g.unit_id(x),
                        iso_arrow_id: g.arrow_id(u),
                        eta_arrow_id: g.arrow_id(eta),
                    });
                }
            }
        }
    }
    Ok(CondIIReport {
        ok: max_violation <= tol,
        max_violation,
        witness: if max_violation <= tol { None } else { witness },
    })
}

/// `Θ(μ,Ψ)`: the functional `ψ(δ_γ) = μ(x)·ψ_x(W_γ)` for `γ ∈ Iso(x)` with
/// `x` in the support, and 0 elsewhere.
pub fn assemble_theta<F: Scalar>(
    mu: &UnitMeasure<F>,
    field: &TraceField<F>,
) -> Result<LinearFunctional<F>, CoreError> {
    let g = mu.groupoid();
    if !same_groupoid(g, field.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let mut psi = LinearFunctional::zero(g.clone());
    for x in mu.support() {
        if !field.defined_at(x) {
            return Err(CoreError::input(format!(
                "trace field missing support unit {}",
                g.unit_id(x)
            )));
        }
        let w = Complex::new(mu.weight(x), F::zero());
        for u in g.isotropy(x) {
            psi.set_value(u, w * field.value(x, u));
        }
    }
    Ok(psi)
}

/// Invert `assemble_theta`: `μ(x) = ψ(δ_x)`, and `ψ_x(W_u) = ψ(δ_u)/μ(x)`
/// wherever `μ(x) > tol`.
pub fn extract_pair<F: Scalar>(
    psi: &LinearFunctional<F>,
    tol: F,
) -> Result<(UnitMeasure<F>, TraceField<F>), CoreError> {
    let g = psi.groupoid().clone();
    let mut weights = vec![F::zero(); g.n_units()];
    let mut total = F::zero();
    for x in g.units() {
        let u = g.unit_arrow_checked(x)?;
        let v = psi.value(u);
        if v.im.abs() > tol {
            return Err(CoreError::NotAState(format!(
                "unit mass at {} is not real",
                g.unit_id(x)
            )));
        }
        if v.re < -tol {
            return Err(CoreError::NotAState(format!(
                "negative unit mass at {}",
                g.unit_id(x)
            )));
        }
        weights[x] = v.re.max(F::zero());
        total = total + weights[x];
    }
    if (total - F::one()).abs() > tol {
        return Err(CoreError::NotAState(format!(
            "unit masses sum to {total}, not 1"
        )));
    }
    let mu = UnitMeasure::from_weights(g.clone(), weights)?;
    let mut field = TraceField::empty(g.clone());
    for x in mu.support() {
        if mu.weight(x) <= tol {
            continue;
        }
        let inv_w = Complex::new(F::one() / mu.weight(x), F::zero());
        let mut map = BTreeMap::new();
        for u in g.isotropy(x) {
            map.insert(u, psi.value(u) * inv_w);
        }
        field.set_unit(x, map);
    }
    Ok((mu, field))
}

/// Reassemble after extraction and report the largest coefficient mismatch.
/// Agreement on isotropy over the support is the round-trip law; off-isotropy
/// mass shows up here as a nonzero defect.
pub fn roundtrip_defect<F: Scalar>(
    psi: &LinearFunctional<F>,
    tol: F,
) -> Result<F, CoreError> {
    let (mu, field) = extract_pair(psi, tol)?;
    let rebuilt = assemble_theta(&mu, &field)?;
    Ok(psi.max_abs_diff(&rebuilt))
}

#[derive(Clone, Debug)]
pub struct GaugeVanishingReport<F: Scalar> {
    pub ok: bool,
    pub max_mass: F,
    ///Isotropy arrows with `|D| > tol` but `|ψ(δ_u)| > tol`.
    pub witnesses: Vec<i64>,
}

/// KMS states vanish on isotropy outside `D⁻¹(0)`; on a finite groupoid a
/// valid `D` vanishes on isotropy automatically, so this bites only for
/// externally supplied (unvalidated) dynamics.
pub fn gauge_vanishing_check<F: Scalar>(
    psi: &LinearFunctional<F>,
    d: &OneCocycle<F>,
    tol: F,
) -> GaugeVanishingReport<F> {
    let g = psi.groupoid();
    let mut witnesses = Vec::new();
    let mut max_mass = F::zero();
    for x in g.units() {
        for u in g.isotropy(x) {
            if d.value(u).abs() > tol {
                let mass = psi.value(u).norm();
                if mass > tol {
                    witnesses.push(g.arrow_id(u));
                    max_mass = max_mass.max(mass);
                }
            }
        }
    }
    GaugeVanishingReport {
        ok: witnesses.is_empty(),
        max_mass,
        witnesses,
    }
}

/// Membership report for a trace field: per-unit tracial identity,
/// Hermiticity, normalisation, and Gram positivity on the isotropy algebra.
#[derive(Clone, Debug)]
pub struct FieldMembershipReport<F: Scalar> {
    pub ok: bool,
    pub max_violation: F,
    pub notes: Vec<String>,
}

pub fn field_membership<F: Scalar>(
    field: &TraceField<F>,
    sigma: &TwoCocycle,
    tol: F,
) -> Result<FieldMembershipReport<F>, CoreError> {
    let g = sigma.groupoid();
    let mut notes = Vec::new();
    let mut max_violation = F::zero();
    for x in field.support() {
        let (sub, arrow_map) = isotropy_subgroupoid(g, x)?;
        let sigma_sub = sigma.restrict_to(sub.clone(), &arrow_map);
        let mut psi = LinearFunctional::zero(sub.clone());
        for (sub_idx, &parent) in arrow_map.iter().enumerate() {
            psi.set_value(sub_idx, field.value(x, parent));
        }
        // normalisation
        let unit_defect = (psi.value(sub.unit_arrow_checked(0)?)
            - Complex::new(F::one(), F::zero()))
        .norm();
        if unit_defect > tol {
            notes.push(format!(
                "ψ_x(W_unit) ≠ 1 at unit {} (defect {unit_defect})",
                g.unit_id(x)
            ));
        }
        max_violation = max_violation.max(unit_defect);
        // tracial identity σ(u,v)ψ(uv) = σ(v,u)ψ(vu)
        for u in sub.arrows() {
            for v in sub.arrows() {
                let uv = sub.compose(u, v).expect("group");
                let vu = sub.compose(v, u).expect("group");
                let lhs = sigma_sub.value(u, v).eval::<F>() * psi.value(uv);
                let rhs = sigma_sub.value(v, u).eval::<F>() * psi.value(vu);
                let defect = (lhs - rhs).norm();
                if defect > tol {
                    notes.push(format!(
                        "trace identity fails at unit {} (defect {defect})",
                        g.unit_id(x)
                    ));
                }
                max_violation = max_violation.max(defect);
            }
            // Hermiticity ψ(u⁻¹) = σ(u,u⁻¹)·conj(ψ(u))
            let uinv = sub.inv(u);
            let defect = (psi.value(uinv)
                - sigma_sub.value(u, uinv).eval::<F>() * psi.value(u).conj())
            .norm();
            if defect > tol {
                notes.push(format!(
                    "hermiticity fails at unit {} (defect {defect})",
                    g.unit_id(x)
                ));
            }
            max_violation = max_violation.max(defect);
        }
        let pos = positivity_check(&psi, &sigma_sub, tol)?;
        if !pos.is_positive {
            notes.push(format!(
                "isotropy functional not positive at unit {} (min eig {})",
                g.unit_id(x),
                pos.min_eigenvalue
            ));
            max_violation = max_violation.max(-pos.min_eigenvalue);
        }
    }
    Ok(FieldMembershipReport {
        ok: notes.is_empty(),
        max_violation,
        notes,
    })
}

/// One extreme KMS state with its certificates.
#[derive(Clone, Debug)]
pub struct KmsState<F: Scalar> {
    pub orbit_base_id: i64,
    pub measure: UnitMeasure<F>,
    pub field: TraceField<F>,
    pub functional: LinearFunctional<F>,
    pub kms_defect: F,
    pub positivity_min_eigenvalue: F,
    pub condition_ii_violation: F,
    /// True when the per-orbit trace polytope vertices were enumerated
    /// exactly (abelian isotropy); sampled boundary states otherwise.
    pub extreme_certified: bool,
}

/// Enumerate the extreme KMS_β states: one admissible orbit at a time, the
/// extreme tracial states of the base isotropy algebra transported along the
/// orbit's spanning tree via the condition-(II) phases. Non-tree constraints
/// are verified (for tracial base states the transport is path-independent,
/// so they hold up to roundoff) and every returned state carries its
/// achieved defects.
pub fn kms_simplex<F: Scalar>(
    g: &GroupoidRef,
    sigma: &TwoCocycle,
    d: &OneCocycle<F>,
    beta: F,
    tol: F,
) -> Result<Vec<KmsState<F>>, CoreError> {
    if !same_groupoid(g, sigma.groupoid()) || !same_groupoid(g, d.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let mut out = Vec::new();
    for orbit in orbits(g) {
        if orbit_isotropy_defect(&orbit, d, beta) > tol {
            continue;
        }
        let mu = orbit_extreme_measure(g, &orbit, d, beta);
        let (sub, arrow_map) = isotropy_subgroupoid(g, orbit.base)?;
        let sigma_sub = sigma.restrict_to(sub.clone(), &arrow_map);

        // base tracial states, exact when the isotropy is abelian
        let mut base_states: Vec<(Vec<Complex<F>>, bool)> = Vec::new();
        match extreme_tracial_states(&sub, &sigma_sub) {
            Ok(chars) => {
                for c in chars {
                    let vals = (0..sub.n_arrows())
                        .map(|a| {
                            c.value(a)
                                .map(|v| v.eval())
                                .unwrap_or_else(|| Complex::new(F::zero(), F::zero()))
                        })
                        .collect();
                    base_states.push((vals, true));
                }
            }
            Err(_) => {
                base_states = sampled_boundary_traces(&sub, &sigma_sub, tol)?;
            }
        }

        for (base_values, certified) in base_states {
            let mut field = TraceField::empty(g.clone());
            for (x, eta) in orbit.members.iter().zip(&orbit.tree_arrows) {
                let mut map = BTreeMap::new();
                for v in g.isotropy(*x) {
                    // ψ_x(W_v) = conj(phase(η_x, u))·ψ_base(W_u), u = η⁻¹vη
                    let u = conjugate_arrow(g, g.inv(*eta), v).expect("conjugation");
                    let phase = condition_ii_phase(sigma, *eta, u)?;
                    let u_sub = arrow_map
                        .iter()
                        .position(|&p| p == u)
                        .expect("u lies in the base isotropy");
                    map.insert(v, phase.conj().eval::<F>() * base_values[u_sub]);
                }
                field.set_unit(*x, map);
            }
            let functional = assemble_theta(&mu, &field)?;
            let defect = kms_defect(&functional, sigma, d, beta)?;
            let pos = positivity_check(&functional, sigma, tol)?;
            let cond = check_condition_ii(&field, &mu, sigma, tol)?;
            out.push(KmsState {
                orbit_base_id: g.unit_id(orbit.base),
                measure: mu.clone(),
                field,
                functional,
                kms_defect: defect.max_defect,
                positivity_min_eigenvalue: pos.min_eigenvalue,
                condition_ii_violation: cond.max_violation,
                extreme_certified: certified,
            });
        }
    }
    Ok(out)
}

/// Deterministic fallback for nonabelian isotropy: the canonical trace plus
/// the positivity-boundary point along each trace-space direction. These are
/// honest tracial states but are not certified extreme.
fn sampled_boundary_traces<F: Scalar>(
    sub: &GroupoidRef,
    sigma_sub: &TwoCocycle,
    tol: F,
) -> Result<Vec<(Vec<Complex<F>>, bool)>, CoreError> {
    let space = trace_space(sub, sigma_sub)?;
    let e = space.unit_arrow;
    let n = sub.n_arrows();
    let zero = Complex::new(F::zero(), F::zero());
    let canonical: Vec<Complex<F>> = (0..n)
        .map(|a| {
            if a == e {
                Complex::new(F::one(), F::zero())
            } else {
                zero
            }
        })
        .collect();
    let mut states = vec![(canonical.clone(), false)];
    for b in &space.basis {
        let dir: Vec<Complex<F>> = (0..n)
            .map(|a| {
                let v = b.value(a).map(|u| u.eval()).unwrap_or(zero);
                let at_e = b.value(e).map(|u| u.eval()).unwrap_or(zero);
                v - at_e * canonical[a]
            })
            .collect();
        if dir.iter().all(|z| z.norm() <= F::real(1e-14)) {
            continue;
        }
        for sign in [F::one(), -F::one()] {
            let positive_at = |t: F| -> Result<bool, CoreError> {
                let vals: Vec<Complex<F>> = (0..n)
                    .map(|a| canonical[a] + dir[a] * Complex::new(sign * t, F::zero()))
                    .collect();
                let psi = LinearFunctional::from_values(sub.clone(), vals)?;
                Ok(positivity_check(&psi, sigma_sub, tol)?.is_positive)
            };
            let mut lo = F::zero();
            let mut hi = F::one();
            let mut expanded = 0;
            while positive_at(hi)? && expanded < 40 {
                lo = hi;
                hi = hi * F::real(2.0);
                expanded += 1;
            }
            if expanded == 40 {
                continue; // unbounded direction cannot reach a boundary
            }
            for _ in 0..60 {
                let mid = (lo + hi) * F::real(0.5);
                if positive_at(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if lo > F::zero() {
                let vals = (0..n)
                    .map(|a| canonical[a] + dir[a] * Complex::new(sign * lo, F::zero()))
                    .collect();
                states.push((vals, false));
            }
        }
    }
    Ok(states)
}
