//! The twisted convolution *-algebra `C_c(G,σ)` of a finite groupoid: the
//! product `(f⋆g)(γ) = Σ_{αβ=γ} σ(α,β)f(α)g(β)`, the involution
//! `f*(γ) = conj(σ(γ,γ⁻¹) f(γ⁻¹))`, the gauge dynamics
//! `τ_t(f)(γ) = e^{itD(γ)} f(γ)`, the I-norm, and the certificates used by
//! the state machinery: Gram positivity and the KMS defect.

mod traces;

pub use traces::{extreme_tracial_states, trace_space, ExactFunctional, TraceSpace};

use crate::cocycle::{OneCocycle, TwoCocycle};
use crate::groupoid::{same_groupoid, GroupoidRef};
use crate::numeric::hermitian_eigenvalues;
use crate::{CoreError, Scalar};
use num_complex::Complex;

/// An element of `C_c(G,σ)`: a dense complex coefficient vector over arrows.
#[derive(Clone, Debug)]
pub struct AlgElement<F: Scalar = f64> {
    g: GroupoidRef,
    coeff: Vec<Complex<F>>,
}

impl<F: Scalar> AlgElement<F> {
    pub fn zero(g: GroupoidRef) -> Self {
        let n = g.n_arrows();
        AlgElement {
            g,
            coeff: vec![Complex::new(F::zero(), F::zero()); n],
        }
    }

    /// Basis element δ_γ.
    pub fn delta(g: GroupoidRef, arrow: usize) -> Self {
        let mut f = Self::zero(g);
        f.coeff[arrow] = Complex::new(F::one(), F::zero());
        f
    }

    /// The algebra unit Σ_x δ_x (defined when every unit has an identity
    /// arrow).
    pub fn unit(g: GroupoidRef) -> Result<Self, CoreError> {
        let mut f = Self::zero(g.clone());
        for x in g.units() {
            f.coeff[g.unit_arrow_checked(x)?] = Complex::new(F::one(), F::zero());
        }
        Ok(f)
    }

    pub fn from_coeff(g: GroupoidRef, coeff: Vec<Complex<F>>) -> Result<Self, CoreError> {
        if coeff.len() != g.n_arrows() {
            return Err(CoreError::input("coefficient vector has wrong length"));
        }
        Ok(AlgElement { g, coeff })
    }

    pub fn groupoid(&self) -> &GroupoidRef {
        &self.g
    }

    pub fn coeff(&self, arrow: usize) -> Complex<F> {
        self.coeff[arrow]
    }

    pub fn coeffs(&self) -> &[Complex<F>] {
        &self.coeff
    }

    pub fn scale(&self, c: Complex<F>) -> Self {
        AlgElement {
            g: self.g.clone(),
            coeff: self.coeff.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        if !same_groupoid(&self.g, &other.g) {
            return Err(CoreError::MismatchedGroupoid);
        }
        Ok(AlgElement {
            g: self.g.clone(),
            coeff: self
                .coeff
                .iter()
                .zip(&other.coeff)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        self.coeff
            .iter()
            .zip(&other.coeff)
            .map(|(a, b)| (a - b).norm())
            .fold(F::zero(), F::max)
    }
}

/// Twisted convolution `(f⋆g)(γ) = Σ_{αβ=γ} σ(α,β) f(α) g(β)`.
pub fn convolve<F: Scalar>(
    f: &AlgElement<F>,
    g: &AlgElement<F>,
    sigma: &TwoCocycle,
) -> Result<AlgElement<F>, CoreError> {
    if !same_groupoid(&f.g, &g.g) || !same_groupoid(&f.g, sigma.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let mut out = AlgElement::zero(f.g.clone());
    for (a, b, ab) in f.g.composable_pairs() {
        let term = sigma.value(a, b).eval::<F>() * f.coeff[a] * g.coeff[b];
        out.coeff[ab] += term;
    }
    Ok(out)
}

/// Involution `f*(γ) = conj(σ(γ,γ⁻¹)) · conj(f(γ⁻¹))`.
pub fn star<F: Scalar>(f: &AlgElement<F>, sigma: &TwoCocycle) -> Result<AlgElement<F>, CoreError> {
    if !same_groupoid(&f.g, sigma.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let mut out = AlgElement::zero(f.g.clone());
    for gamma in f.g.arrows() {
        let inv = f.g.inv(gamma);
        out.coeff[gamma] = sigma.value(gamma, inv).conj().eval::<F>() * f.coeff[inv].conj();
    }
    Ok(out)
}

/// Gauge evolution `τ_t(f)(γ) = e^{itD(γ)} f(γ)` for complex `t`
/// (imaginary `t = iβ` gives the analytic continuation).
pub fn evolve<F: Scalar>(
    f: &AlgElement<F>,
    d: &OneCocycle<F>,
    t: Complex<F>,
) -> Result<AlgElement<F>, CoreError> {
    if !same_groupoid(&f.g, d.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let i = Complex::new(F::zero(), F::one());
    let mut out = f.clone();
    for gamma in f.g.arrows() {
        out.coeff[gamma] = (i * t * d.value(gamma)).exp() * f.coeff[gamma];
    }
    Ok(out)
}

/// `‖f‖_I = max(sup_x Σ_{r(λ)=x} |f(λ)|, sup_x Σ_{s(λ)=x} |f(λ)|)`.
pub fn i_norm<F: Scalar>(f: &AlgElement<F>) -> F {
    let g = &f.g;
    let mut best = F::zero();
    for x in g.units() {
        let range_sum: F = g
            .arrows()
            .filter(|&a| g.dst(a) == x)
            .map(|a| f.coeff[a].norm())
            .sum();
        let source_sum: F = g
            .arrows()
            .filter(|&a| g.src(a) == x)
            .map(|a| f.coeff[a].norm())
            .sum();
        best = best.max(range_sum).max(source_sum);
    }
    best
}

/// A linear functional on `C_c(G,σ)` as a covector: `ψ(f) = Σ_γ f(γ)·v(γ)`,
/// so `v(γ) = ψ(δ_γ)`.
#[derive(Clone, Debug)]
pub struct LinearFunctional<F: Scalar = f64> {
    g: GroupoidRef,
    value: Vec<Complex<F>>,
}

impl<F: Scalar> LinearFunctional<F> {
    pub fn zero(g: GroupoidRef) -> Self {
        let n = g.n_arrows();
        LinearFunctional {
            g,
            value: vec![Complex::new(F::zero(), F::zero()); n],
        }
    }

    pub fn from_values(g: GroupoidRef, value: Vec<Complex<F>>) -> Result<Self, CoreError> {
        if value.len() != g.n_arrows() {
            return Err(CoreError::input("functional vector has wrong length"));
        }
        Ok(LinearFunctional { g, value })
    }

    pub fn groupoid(&self) -> &GroupoidRef {
        &self.g
    }

    /// ψ(δ_γ).
    pub fn value(&self, arrow: usize) -> Complex<F> {
        self.value[arrow]
    }

    pub fn set_value(&mut self, arrow: usize, v: Complex<F>) {
        self.value[arrow] = v;
    }

    pub fn apply(&self, f: &AlgElement<F>) -> Result<Complex<F>, CoreError> {
        if !same_groupoid(&self.g, &f.g) {
            return Err(CoreError::MismatchedGroupoid);
        }
        Ok(self
            .value
            .iter()
            .zip(&f.coeff)
            .map(|(v, c)| v * c)
            .fold(Complex::new(F::zero(), F::zero()), |a, b| a + b))
    }

    pub fn scale(&self, c: Complex<F>) -> Self {
        LinearFunctional {
            g: self.g.clone(),
            value: self.value.iter().map(|z| z * c).collect(),
        }
    }

    /// ψ(1) = Σ_x ψ(δ_x).
    pub fn normalization(&self) -> Complex<F> {
        let mut total = Complex::new(F::zero(), F::zero());
        for x in self.g.units() {
            if let Some(u) = self.g.unit_arrow(x) {
                total += self.value[u];
            }
        }
        total
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        self.value
            .iter()
            .zip(&other.value)
            .map(|(a, b)| (a - b).norm())
            .fold(F::zero(), F::max)
    }
}

#[derive(Clone, Debug)]
pub struct PositivityReport<F: Scalar> {
    pub is_positive: bool,
    pub min_eigenvalue: F,
    pub hermiticity_defect: F,
    /// ψ(1), reported for normalisation checks.
    pub normalization: Complex<F>,
}

/// Certify `ψ(f*⋆f) ≥ 0` by the Gram matrix `M[γ,η] = ψ(δ_γ* ⋆ δ_η)`:
/// Hermitian within `tol` and minimum eigenvalue ≥ −tol (after
/// symmetrisation `(M+M†)/2`).
pub fn positivity_check<F: Scalar>(
    psi: &LinearFunctional<F>,
    sigma: &TwoCocycle,
    tol: F,
) -> Result<PositivityReport<F>, CoreError> {
    if !same_groupoid(&psi.g, sigma.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let g = &psi.g;
    let n = g.n_arrows();
    let zero = Complex::new(F::zero(), F::zero());
    let mut m = vec![vec![zero; n]; n];
    for gamma in 0..n {
        let ginv = g.inv(gamma);
        let lead = sigma.value(gamma, ginv).conj().eval::<F>();
        for eta in 0..n {
            if let Some(prod) = g.compose(ginv, eta) {
                m[gamma][eta] = lead * sigma.value(ginv, eta).eval::<F>() * psi.value[prod];
            }
        }
    }
    let mut herm_defect = F::zero();
    let mut sym = vec![vec![zero; n]; n];
    for i in 0..n {
        for j in 0..n {
            herm_defect = herm_defect.max((m[i][j] - m[j][i].conj()).norm());
            sym[i][j] = (m[i][j] + m[j][i].conj()) * Complex::new(F::real(0.5), F::zero());
        }
    }
    let min_eigenvalue = if n == 0 {
        F::zero()
    } else {
        hermitian_eigenvalues(&sym)[0]
    };
    Ok(PositivityReport {
        is_positive: herm_defect <= tol && min_eigenvalue >= -tol,
        min_eigenvalue,
        hermiticity_defect: herm_defect,
        normalization: psi.normalization(),
    })
}

#[derive(Clone, Debug)]
pub struct KmsDefectReport<F: Scalar> {
    pub max_defect: F,
    /// External arrow ids of the worst pair (α, γ).
    pub argmax_pair: Option<(i64, i64)>,
}

/// Maximum over basis pairs of `|ψ(δ_α ⋆ δ_γ) − ψ(δ_γ ⋆ τ_{iβ}(δ_α))|`;
/// on a spanning set of analytic elements this certifies the KMS condition.
pub fn kms_defect<F: Scalar>(
    psi: &LinearFunctional<F>,
    sigma: &TwoCocycle,
    d: &OneCocycle<F>,
    beta: F,
) -> Result<KmsDefectReport<F>, CoreError> {
    if !same_groupoid(&psi.g, sigma.groupoid()) || !same_groupoid(&psi.g, d.groupoid()) {
        return Err(CoreError::MismatchedGroupoid);
    }
    let g = &psi.g;
    let zero = Complex::new(F::zero(), F::zero());
    let mut max_defect = F::zero();
    let mut argmax = None;
    for alpha in g.arrows() {
        let decay = (-beta * d.value(alpha)).exp();
        for gamma in g.arrows() {
            let lhs = match g.compose(alpha, gamma) {
                Some(ag) => sigma.value(alpha, gamma).eval::<F>() * psi.value[ag],
                None => zero,
            };
            let rhs = match g.compose(gamma, alpha) {
                Some(ga) => sigma.value(gamma, alpha).eval::<F>() * psi.value[ga] * decay,
                None => zero,
            };
            let defect = (lhs - rhs).norm();
            if defect > max_defect {
                max_defect = defect;
                argmax = Some((g.arrow_id(alpha), g.arrow_id(gamma)));
            }
        }
    }
    Ok(KmsDefectReport {
        max_defect,
        argmax_pair: argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::UnitCircleValue;
    use crate::groupoid::{group_as_groupoid, pair_groupoid, GroupTable};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};

    fn z2_with_sign() -> (GroupoidRef, TwoCocycle, TwoCocycle) {
        let g = group_as_groupoid(&GroupTable::cyclic(2)).unwrap();
        let trivial = TwoCocycle::trivial(g.clone());
        let signed = TwoCocycle::from_fn(g.clone(), |a, b| {
            if a == 1 && b == 1 {
                UnitCircleValue::minus_one()
            } else {
                UnitCircleValue::ONE
            }
        });
        assert!(signed.validate().is_valid());
        (g, trivial, signed)
    }

    #[test]
    fn group_algebra_squares() {
        let (g, trivial, signed) = z2_with_sign();
        let dg = AlgElement::<f64>::delta(g.clone(), 1);
        let de = AlgElement::<f64>::delta(g.clone(), 0);
        let sq = convolve(&dg, &dg, &trivial).unwrap();
        assert_eq!(sq.max_abs_diff(&de), 0.0);
        // σ(g,g) = −1 flips the sign of the square
        let sq = convolve(&dg, &dg, &signed).unwrap();
        assert_eq!(sq.max_abs_diff(&de.scale(Complex::new(-1.0, 0.0))), 0.0);
    }

    #[test]
    fn pair_groupoid_matrix_units() {
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::trivial(g.clone());
        // arrow (x,y) has id x·2+y; (0,1)·(1,0) = (0,0)
        let a01 = AlgElement::<f64>::delta(g.clone(), 1);
        let a10 = AlgElement::<f64>::delta(g.clone(), 2);
        let prod = convolve(&a01, &a10, &sigma).unwrap();
        assert_eq!(prod.max_abs_diff(&AlgElement::delta(g.clone(), 0)), 0.0);
        // opposite order lands at the other unit
        let prod = convolve(&a10, &a01, &sigma).unwrap();
        assert_eq!(prod.max_abs_diff(&AlgElement::delta(g, 3)), 0.0);
    }

    #[test]
    fn star_on_deltas() {
        let (g, trivial, signed) = z2_with_sign();
        let dg = AlgElement::<f64>::delta(g.clone(), 1);
        assert_eq!(star(&dg, &trivial).unwrap().max_abs_diff(&dg), 0.0);
        assert_eq!(
            star(&dg, &signed)
                .unwrap()
                .max_abs_diff(&dg.scale(Complex::new(-1.0, 0.0))),
            0.0
        );
        // on a pair groupoid, star of δ_γ is δ_{γ⁻¹}
        let pg = pair_groupoid(2);
        let s = TwoCocycle::trivial(pg.clone());
        let f = AlgElement::<f64>::delta(pg.clone(), 1);
        assert_eq!(
            star(&f, &s).unwrap().max_abs_diff(&AlgElement::delta(pg, 2)),
            0.0
        );
    }

    fn random_element(g: &GroupoidRef, rng: &mut impl Rng) -> AlgElement<f64> {
        AlgElement::from_coeff(
            g.clone(),
            g.arrows()
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn involution_and_associativity_properties() {
        let g = group_as_groupoid(&GroupTable::cyclic(3)).unwrap();
        let b: Vec<UnitCircleValue> = vec![
            UnitCircleValue::ONE,
            UnitCircleValue::from_angle(1, 3).unwrap(),
            UnitCircleValue::from_angle(2, 3).unwrap(),
        ];
        let sigma = crate::cocycle::coboundary(&g, &b).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let f = random_element(&g, &mut rng);
            let h = random_element(&g, &mut rng);
            let k = random_element(&g, &mut rng);
            // (f*)* = f exactly up to float roundoff
            let ss = star(&star(&f, &sigma).unwrap(), &sigma).unwrap();
            assert!(ss.max_abs_diff(&f) < 1e-15);
            // (f⋆h)* = h*⋆f*
            let lhs = star(&convolve(&f, &h, &sigma).unwrap(), &sigma).unwrap();
            let rhs = convolve(&star(&h, &sigma).unwrap(), &star(&f, &sigma).unwrap(), &sigma)
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            // associativity
            let lhs = convolve(&convolve(&f, &h, &sigma).unwrap(), &k, &sigma).unwrap();
            let rhs = convolve(&f, &convolve(&h, &k, &sigma).unwrap(), &sigma).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn associativity_is_exact_for_quarter_turn_angles_and_integer_coeffs() {
        // σ with angles in {0, 1/4, 1/2, 3/4} evaluates exactly in binary
        // floating point, so integer-coefficient convolutions are exact.
        let table = GroupTable::cyclic(2).product(&GroupTable::cyclic(2));
        let g = group_as_groupoid(&table).unwrap();
        let sigma = TwoCocycle::from_fn(g.clone(), |u, v| {
            let (b, a2) = (u % 2, v / 2);
            UnitCircleValue::from_angle((b * a2) as i64, 2).unwrap()
        });
        let ints = |vals: [i64; 4]| {
            AlgElement::from_coeff(
                g.clone(),
                vals.iter()
                    .map(|&v| Complex::new(v as f64, 0.0))
                    .collect(),
            )
            .unwrap()
        };
        let f = ints([1, -2, 3, 5]);
        let h = ints([2, 1, -1, 4]);
        let k = ints([-3, 2, 2, 1]);
        let lhs = convolve(&convolve(&f, &h, &sigma).unwrap(), &k, &sigma).unwrap();
        let rhs = convolve(&f, &convolve(&h, &k, &sigma).unwrap(), &sigma).unwrap();
        assert_eq!(lhs.max_abs_diff(&rhs), 0.0, "exact, no tolerance");
    }

    #[test]
    fn evolve_examples_and_automorphism() {
        let g = pair_groupoid(2);
        let d = OneCocycle::from_unit_potential(g.clone(), &[2.0_f64.ln(), 0.0]).unwrap();
        let sigma = TwoCocycle::trivial(g.clone());
        let f = AlgElement::<f64>::delta(g.clone(), 1); // arrow (0,1), D = ln 2
        // t = 0 is the identity
        assert!(evolve(&f, &d, Complex::new(0.0, 0.0))
            .unwrap()
            .max_abs_diff(&f)
            .abs()
            < 1e-16);
        // t = i scales by e^{−D} = 1/2
        let ev = evolve(&f, &d, Complex::new(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(ev.coeff(1).re, 0.5, epsilon = 1e-15);
        // evolve(·,t)∘evolve(·,s) = evolve(·,t+s)
        let t = Complex::new(0.3, 0.1);
        let s = Complex::new(-1.2, 0.4);
        let a = evolve(&evolve(&f, &d, t).unwrap(), &d, s).unwrap();
        let b = evolve(&f, &d, t + s).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
        // real-t evolution is a ⋆-automorphism
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = random_element(&g, &mut rng);
        let h = random_element(&g, &mut rng);
        let t = Complex::new(0.7, 0.0);
        let lhs = evolve(&convolve(&f, &h, &sigma).unwrap(), &d, t).unwrap();
        let rhs = convolve(
            &evolve(&f, &d, t).unwrap(),
            &evolve(&h, &d, t).unwrap(),
            &sigma,
        )
        .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        let lhs = evolve(&star(&f, &sigma).unwrap(), &d, t).unwrap();
        let rhs = star(&evolve(&f, &d, t).unwrap(), &sigma).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn i_norm_examples() {
        let g = pair_groupoid(2);
        let f = AlgElement::<f64>::delta(g.clone(), 1);
        assert_eq!(i_norm(&f), 1.0);
        // δ_α + δ_β with shared range fibre: arrows (0,0) and (0,1)
        let two = AlgElement::<f64>::delta(g.clone(), 0)
            .add(&AlgElement::delta(g.clone(), 1))
            .unwrap();
        assert_eq!(i_norm(&two), 2.0);
        let sigma = TwoCocycle::from_fn(g.clone(), |a, b| {
            UnitCircleValue::from_angle(((a * 3 + b) % 5) as i64, 5).unwrap()
        });
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = random_element(&g, &mut rng);
            let sf = star(&f, &sigma).unwrap();
            assert!((i_norm(&f) - i_norm(&sf)).abs() < 1e-12);
        }
    }

    #[test]
    fn positivity_of_uniform_unit_functional() {
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::trivial(g.clone());
        let mut psi = LinearFunctional::<f64>::zero(g.clone());
        for x in g.units() {
            psi.set_value(g.unit_arrow(x).unwrap(), Complex::new(0.5, 0.0));
        }
        let report = positivity_check(&psi, &sigma, 1e-9).unwrap();
        assert!(report.is_positive);
        assert!(report.min_eigenvalue > 0.4);
        assert_abs_diff_eq!(report.normalization.re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mass_on_non_unit_arrow_is_not_positive() {
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::trivial(g.clone());
        let mut psi = LinearFunctional::<f64>::zero(g.clone());
        psi.set_value(1, Complex::new(1.0, 0.0));
        let report = positivity_check(&psi, &sigma, 1e-9).unwrap();
        assert!(!report.is_positive);
        // symmetrised Gram has eigenvalues ±1/2
        assert_abs_diff_eq!(report.min_eigenvalue, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_functional_is_positive_with_zero_mass() {
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::trivial(g.clone());
        let report =
            positivity_check(&LinearFunctional::<f64>::zero(g), &sigma, 1e-9).unwrap();
        assert!(report.is_positive);
        assert_eq!(report.normalization, Complex::new(0.0, 0.0));
    }

    #[test]
    fn kms_defect_examples() {
        // β = 0: the canonical trace on the Z_3 group algebra
        let z3 = group_as_groupoid(&GroupTable::cyclic(3)).unwrap();
        let sigma = TwoCocycle::trivial(z3.clone());
        let d = OneCocycle::zero(z3.clone());
        let mut psi = LinearFunctional::<f64>::zero(z3.clone());
        psi.set_value(0, Complex::new(1.0, 0.0));
        let rep = kms_defect(&psi, &sigma, &d, 0.0).unwrap();
        assert_eq!(rep.max_defect, 0.0);

        // pair groupoid with D = ln 2 on the (0,1) arrow, β = 1
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::trivial(g.clone());
        let d = OneCocycle::from_unit_potential(g.clone(), &[2.0_f64.ln(), 0.0]).unwrap();
        let state = |mx: f64, my: f64| {
            let mut psi = LinearFunctional::<f64>::zero(g.clone());
            psi.set_value(g.unit_arrow(0).unwrap(), Complex::new(mx, 0.0));
            psi.set_value(g.unit_arrow(1).unwrap(), Complex::new(my, 0.0));
            psi
        };
        let rep = kms_defect(&state(1.0 / 3.0, 2.0 / 3.0), &sigma, &d, 1.0).unwrap();
        assert!(rep.max_defect <= 1e-12, "defect {}", rep.max_defect);
        // μ = (1/2, 1/2): the pair (α, γ) = ((0,1), (1,0)) misses by
        // |ψ(δ_{(0,0)}) − e^{−ln 2}ψ(δ_{(1,1)})| = |1/2 − 1/4| = 1/4; the
        // reversed orientation carries e^{+ln 2} and misses by 1/2, which is
        // the reported max.
        let psi = state(0.5, 0.5);
        let lhs = psi.value(g.compose(1, 2).unwrap());
        let rhs = psi.value(g.compose(2, 1).unwrap()) * (-d.value(1)).exp();
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.25, epsilon = 1e-15);
        let rep = kms_defect(&psi, &sigma, &d, 1.0).unwrap();
        assert_abs_diff_eq!(rep.max_defect, 0.5, epsilon = 1e-15);
        let pair = rep.argmax_pair.unwrap();
        assert!(pair.0 == 1 || pair.0 == 2, "off-diagonal argmax: {pair:?}");
        // degree-1 homogeneity in ψ
        let rep2 = kms_defect(&state(1.5, 1.5), &sigma, &d, 1.0).unwrap();
        assert_abs_diff_eq!(rep2.max_defect, 3.0 * rep.max_defect, epsilon = 1e-15);
    }
}
