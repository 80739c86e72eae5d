//! Bicharacters on `Z^t` with exact rational angles, the antisymmetrised
//! pairing ωω*, its center `Z_ω = {p : ωω*(p,q) = 1 ∀q}` via Smith-normal-
//! form kernels, and character traces on the twisted lattice algebra
//! (`W_p W_q = ω(p,q) W_{p+q}`, traces vanish off `Z_ω`).

use crate::angle::UnitCircleValue;
use crate::intlinalg::{hermite_column_basis, kernel_mod, solve_in_basis, IMat};
use crate::{CoreError, Scalar};
use num_complex::Complex;
use num_integer::Integer;

/// A bicharacter on `Z^t` in the strictly-lower-triangular gauge:
/// `ω(p,q) = e^{2πi·pᵀΘq}` with `Θ[i][j] = 0` for `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicharacter {
    rank: usize,
    theta: Vec<Vec<UnitCircleValue>>,
}

impl Bicharacter {
    pub fn trivial(rank: usize) -> Self {
        Bicharacter {
            rank,
            theta: vec![vec![UnitCircleValue::ONE; rank]; rank],
        }
    }

    /// Build from a Θ matrix; entries on or above the diagonal must be zero.
    pub fn from_theta(theta: Vec<Vec<UnitCircleValue>>) -> Result<Self, CoreError> {
        let rank = theta.len();
        if theta.iter().any(|row| row.len() != rank) {
            return Err(CoreError::input("theta must be square"));
        }
        for i in 0..rank {
            for j in i..rank {
                if !theta[i][j].is_one() {
                    return Err(CoreError::input(
                        "theta must be strictly lower triangular (gauge)",
                    ));
                }
            }
        }
        Ok(Bicharacter { rank, theta })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn theta(&self, i: usize, j: usize) -> UnitCircleValue {
        self.theta[i][j]
    }

    /// `ω(p,q) = angle pᵀΘq`.
    pub fn pairing(&self, p: &[i64], q: &[i64]) -> Result<UnitCircleValue, CoreError> {
        if p.len() != self.rank || q.len() != self.rank {
            return Err(CoreError::input("vector rank mismatch"));
        }
        let mut acc = UnitCircleValue::ONE;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc = acc.mul(&self.theta[i][j].pow_checked(p[i], q[j])?);
            }
        }
        Ok(acc)
    }

    /// `ωω*(p,q) = ω(p,q)·conj(ω(q,p)) = angle pᵀ(Θ−Θᵀ)q`; antisymmetric.
    pub fn antisym_pairing(&self, p: &[i64], q: &[i64]) -> Result<UnitCircleValue, CoreError> {
        Ok(self.pairing(p, q)?.mul(&self.pairing(q, p)?.conj()))
    }

    /// Common denominator of all Θ entries.
    pub fn denominator(&self) -> i64 {
        let mut d = 1i64;
        for row in &self.theta {
            for v in row {
                d = d.lcm(&v.angle().1);
            }
        }
        d
    }

    /// The integer matrix `d·(Θ − Θᵀ)` with `d` the common denominator.
    pub fn scaled_antisymmetrisation(&self) -> (IMat, i64) {
        let d = self.denominator();
        let t = self.rank;
        let mut n = IMat::zeros(t, t);
        for i in 0..t {
            for j in 0..t {
                let (a_num, a_den) = self.theta[i][j].angle();
                let (b_num, b_den) = self.theta[j][i].angle();
                n[(i, j)] = (d / a_den * a_num - d / b_den * b_num) as i128;
            }
        }
        (n, d)
    }
}

impl UnitCircleValue {
    /// `self^(a·b)` guarding the exponent product.
    fn pow_checked(&self, a: i64, b: i64) -> Result<UnitCircleValue, CoreError> {
        let e = a
            .checked_mul(b)
            .ok_or_else(|| CoreError::input("pairing exponent overflow"))?;
        Ok(self.pow(e))
    }
}

/// `Θ[i][j] = angle(σ(q_i,q_j)) − angle(σ(q_j,q_i)) mod 1` for `i > j`, zero
/// for `i ≤ j`; the generator values must cover all ordered pairs `i ≠ j`.
pub fn omega_from_generators(
    rank: usize,
    sigma_on_generators: &dyn Fn(usize, usize) -> Option<UnitCircleValue>,
) -> Result<Bicharacter, CoreError> {
    let mut theta = vec![vec![UnitCircleValue::ONE; rank]; rank];
    for i in 0..rank {
        for j in 0..i {
            let upper = sigma_on_generators(i, j)
                .ok_or_else(|| CoreError::input(format!("missing generator pair ({i},{j})")))?;
            let lower = sigma_on_generators(j, i)
                .ok_or_else(|| CoreError::input(format!("missing generator pair ({j},{i})")))?;
            theta[i][j] = upper.mul(&lower.conj());
        }
    }
    Bicharacter::from_theta(theta)
}

/// A subgroup of `Z^t` by a Hermite-normal-form column basis (canonical, so
/// equality of subgroups is equality of bases).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSubgroup {
    pub ambient_rank: usize,
    basis: IMat,
}

impl LatticeSubgroup {
    pub fn from_generators(ambient_rank: usize, gens: &[Vec<i64>]) -> Self {
        let cols: Vec<Vec<i128>> = gens
            .iter()
            .map(|v| v.iter().map(|&x| x as i128).collect())
            .collect();
        LatticeSubgroup {
            ambient_rank,
            basis: hermite_column_basis(&IMat::from_columns(ambient_rank, &cols)),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        let gens: Vec<Vec<i64>> = (0..ambient_rank)
            .map(|i| {
                let mut e = vec![0i64; ambient_rank];
                e[i] = 1;
                e
            })
            .collect();
        Self::from_generators(ambient_rank, &gens)
    }

    fn from_basis(basis: IMat) -> Self {
        LatticeSubgroup {
            ambient_rank: basis.rows,
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    /// Basis vectors as columns.
    pub fn basis_columns(&self) -> Vec<Vec<i64>> {
        (0..self.basis.cols)
            .map(|j| {
                self.basis
                    .column(j)
                    .iter()
                    .map(|&x| i64::try_from(x).expect("basis entry fits i64"))
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        let p128: Vec<i128> = p.iter().map(|&x| x as i128).collect();
        solve_in_basis(&self.basis, &p128).is_some()
    }

    /// Coordinates of `p` in the basis, when `p` belongs to the subgroup.
    pub fn coordinates(&self, p: &[i64]) -> Option<Vec<i64>> {
        let p128: Vec<i128> = p.iter().map(|&x| x as i128).collect();
        solve_in_basis(&self.basis, &p128)
            .map(|x| x.iter().map(|&v| i64::try_from(v).expect("coordinate")).collect())
    }
}

/// `Z_ω = {p : pᵀ(Θ−Θᵀ)q ∈ Z for all q}`, exactly: with `N = d(Θ−Θᵀ)`
/// integer, the kernel of `p ↦ Np mod d` via Smith normal form. Contains
/// `d·Z^t`, so it always has full rank.
pub fn z_omega(omega: &Bicharacter) -> LatticeSubgroup {
    let (n, d) = omega.scaled_antisymmetrisation();
    LatticeSubgroup::from_basis(kernel_mod(&n, d as i128))
}

/// Independent oracle: exhaustive search over residues modulo the common
/// denominator. Only for small `d^t`.
pub fn z_omega_bruteforce(omega: &Bicharacter) -> LatticeSubgroup {
    let (n, d) = omega.scaled_antisymmetrisation();
    let t = omega.rank();
    let d = d as i128;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..t {
        let mut e = vec![0i64; t];
        e[i] = d as i64;
        gens.push(e);
    }
    let mut p = vec![0i128; t];
    loop {
        if n.mul_vec(&p).iter().all(|&v| v.rem_euclid(d) == 0) {
            gens.push(p.iter().map(|&x| x as i64).collect());
        }
        let mut k = 0;
        loop {
            if k == t {
                return LatticeSubgroup::from_generators(t, &gens);
            }
            p[k] += 1;
            if p[k] < d {
                break;
            }
            p[k] = 0;
            k += 1;
        }
    }
}

/// Keep exactly the coefficients supported on `Z_ω` (the trace-restriction
/// map `Υ(W_p) = W_p` for `p ∈ Z_ω`, 0 otherwise).
pub fn restriction_upsilon<F: Scalar>(
    coeffs: &[(Vec<i64>, Complex<F>)],
    omega: &Bicharacter,
) -> Vec<(Vec<i64>, Complex<F>)> {
    let z = z_omega(omega);
    coeffs
        .iter()
        .filter(|(p, _)| z.contains(p))
        .cloned()
        .collect()
}

/// Tracial certificate over a truncation box: for every support point
/// `u = p + q` with `|u|_∞ ≤ 2·box_radius`, the trace identity
/// `ψ(W_pW_q) = ψ(W_qW_p)` reduces to `ωω*(p,u) = 1` for all `p` (since
/// `ωω*(p,−p) = 1`), which is decided exactly by `N·u ≡ 0 (mod d)` with
/// `N = d(Θ−Θᵀ)`. A failing support point yields the explicit witness pair
/// `(u − e_i, e_i)`.
pub fn tracial_certificate(
    omega: &Bicharacter,
    value: &dyn Fn(&[i64]) -> Option<UnitCircleValue>,
    box_radius: i64,
) -> Result<(bool, Option<(Vec<i64>, Vec<i64>)>), CoreError> {
    let t = omega.rank();
    let (n, d) = omega.scaled_antisymmetrisation();
    let d = d as i128;
    if t == 0 {
        return Ok((true, None));
    }
    let mut u = vec![-2 * box_radius; t];
    loop {
        if value(&u).is_some() {
            let nu = n.mul_vec(&u.iter().map(|&x| x as i128).collect::<Vec<_>>());
            if let Some(i) = nu.iter().position(|x| x.rem_euclid(d) != 0) {
                let mut p = u.clone();
                p[i] -= 1;
                let mut q = vec![0i64; t];
                q[i] = 1;
                return Ok((false, Some((p, q))));
            }
        }
        if !advance(&mut u, 2 * box_radius) {
            return Ok((true, None));
        }
    }
}

fn advance(v: &mut [i64], radius: i64) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x <= radius {
            return true;
        }
        *x = -radius;
    }
    false
}

/// The trace `ψ(W_p) = χ(p)` for `p ∈ Z_ω` and 0 otherwise, where χ is
/// given by its angles on the Hermite basis of `Z_ω`; certified tracial on
/// the requested box.
#[derive(Clone, Debug)]
pub struct LatticeTrace {
    pub z: LatticeSubgroup,
    pub character_on_basis: Vec<UnitCircleValue>,
    pub box_radius: i64,
    pub tracial_on_box: bool,
    pub witness: Option<(Vec<i64>, Vec<i64>)>,
}

impl LatticeTrace {
    /// ψ(W_p); `None` encodes 0 (off `Z_ω`).
    pub fn value(&self, p: &[i64]) -> Option<UnitCircleValue> {
        let coords = self.z.coordinates(p)?;
        let mut acc = UnitCircleValue::ONE;
        for (chi, c) in self.character_on_basis.iter().zip(coords) {
            acc = acc.mul(&chi.pow(c));
        }
        Some(acc)
    }
}

pub fn lattice_trace_from_character(
    character_on_basis: Vec<UnitCircleValue>,
    omega: &Bicharacter,
    box_radius: i64,
) -> Result<LatticeTrace, CoreError> {
    let z = z_omega(omega);
    if character_on_basis.len() != z.rank() {
        return Err(CoreError::input(format!(
            "character needs {} basis angles, got {}",
            z.rank(),
            character_on_basis.len()
        )));
    }
    let mut trace = LatticeTrace {
        z,
        character_on_basis,
        box_radius,
        tracial_on_box: false,
        witness: None,
    };
    let probe = trace.clone();
    let (ok, witness) = tracial_certificate(omega, &|p| probe.value(p), box_radius)?;
    trace.tracial_on_box = ok;
    trace.witness = witness;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn angle(n: i64, d: i64) -> UnitCircleValue {
        UnitCircleValue::from_angle(n, d).unwrap()
    }

    fn third_bicharacter() -> Bicharacter {
        // Θ[1][0] = 1/3 (σ(q₂,q₁) = e^{2πi/3}, σ(q₁,q₂) = 1)
        omega_from_generators(2, &|i, j| {
            Some(if (i, j) == (1, 0) {
                angle(1, 3)
            } else {
                UnitCircleValue::ONE
            })
        })
        .unwrap()
    }

    #[test]
    fn symmetric_sigma_gives_trivial_omega() {
        let omega = omega_from_generators(3, &|i, j| Some(angle((i + j) as i64, 5))).unwrap();
        assert_eq!(omega, Bicharacter::trivial(3));
    }

    #[test]
    fn omega_formula_direct_substitution() {
        let omega = third_bicharacter();
        assert_eq!(omega.theta(1, 0), angle(1, 3));
        assert_eq!(omega.theta(0, 1), UnitCircleValue::ONE);
        // ωω*(e₁,e₂) = angle −1/3
        assert_eq!(omega.antisym_pairing(&[1, 0], &[0, 1]).unwrap(), angle(-1, 3));
        // antisymmetry and degenerate directions
        assert_eq!(
            omega.antisym_pairing(&[2, 5], &[2, 5]).unwrap(),
            UnitCircleValue::ONE
        );
        assert_eq!(
            omega.antisym_pairing(&[0, 0], &[4, -7]).unwrap(),
            UnitCircleValue::ONE
        );
    }

    #[test]
    fn bilinearity_on_random_vectors() {
        let omega = omega_from_generators(3, &|i, j| Some(angle((2 * i + 3 * j) as i64, 8)))
            .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let v = |rng: &mut rand_chacha::ChaCha8Rng| {
                (0..3).map(|_| rng.gen_range(-6..7)).collect::<Vec<i64>>()
            };
            let (p, p2, q) = (v(&mut rng), v(&mut rng), v(&mut rng));
            let sum: Vec<i64> = p.iter().zip(&p2).map(|(a, b)| a + b).collect();
            assert_eq!(
                omega.pairing(&sum, &q).unwrap(),
                omega.pairing(&p, &q).unwrap().mul(&omega.pairing(&p2, &q).unwrap())
            );
            assert_eq!(
                omega.antisym_pairing(&p, &q).unwrap(),
                omega.antisym_pairing(&q, &p).unwrap().conj()
            );
        }
    }

    #[test]
    fn omega_omega_star_equals_sigma_sigma_star_on_generators() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let t = 3;
            let mut vals = std::collections::BTreeMap::new();
            for i in 0..t {
                for j in 0..t {
                    if i != j {
                        vals.insert((i, j), angle(rng.gen_range(0..12), 12));
                    }
                }
            }
            let sigma = |i: usize, j: usize| vals.get(&(i, j)).copied();
            let omega = omega_from_generators(t, &sigma).unwrap();
            for i in 0..t {
                for j in 0..t {
                    if i == j {
                        continue;
                    }
                    let e = |k: usize| {
                        let mut v = vec![0i64; t];
                        v[k] = 1;
                        v
                    };
                    let lhs = omega.antisym_pairing(&e(i), &e(j)).unwrap();
                    let rhs = sigma(i, j).unwrap().mul(&sigma(j, i).unwrap().conj());
                    assert_eq!(lhs, rhs, "generators ({i},{j})");
                }
            }
            // cohomology invariance: ω built from ω's own generator values
            // has the same antisymmetrisation
            let omega2 = omega_from_generators(t, &|i, j| {
                Some(if i > j { omega.theta(i, j) } else { UnitCircleValue::ONE })
            })
            .unwrap();
            assert_eq!(omega, omega2);
        }
    }

    #[test]
    fn z_omega_examples() {
        assert_eq!(z_omega(&Bicharacter::trivial(2)), LatticeSubgroup::full(2));

        let omega = third_bicharacter();
        let z = z_omega(&omega);
        assert_eq!(
            z,
            LatticeSubgroup::from_generators(2, &[vec![3, 0], vec![0, 3]])
        );
        assert_eq!(z, z_omega_bruteforce(&omega));

        let half = omega_from_generators(2, &|i, j| {
            Some(if (i, j) == (1, 0) { angle(1, 2) } else { UnitCircleValue::ONE })
        })
        .unwrap();
        let z = z_omega(&half);
        assert_eq!(
            z,
            LatticeSubgroup::from_generators(2, &[vec![2, 0], vec![0, 2]])
        );
        assert_eq!(z, z_omega_bruteforce(&half));
    }

    #[test]
    fn upsilon_restriction() {
        let omega = third_bicharacter();
        let one = Complex::new(1.0f64, 0.0);
        let coeffs = vec![
            (vec![1, 0], one),
            (vec![3, 3], one),
            (vec![0, -3], one),
            (vec![2, 2], one),
        ];
        let kept: Vec<Vec<i64>> = restriction_upsilon(&coeffs, &omega)
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        assert_eq!(kept, vec![vec![3, 3], vec![0, -3]]);
        // support already inside Z_ω is untouched
        let inside = vec![(vec![3, 0], one), (vec![-3, 6], one)];
        assert_eq!(restriction_upsilon(&inside, &omega).len(), 2);
    }

    #[test]
    fn haar_type_trace_is_tracial_on_box() {
        let omega = third_bicharacter();
        let trace = lattice_trace_from_character(
            vec![UnitCircleValue::ONE, UnitCircleValue::ONE],
            &omega,
            6,
        )
        .unwrap();
        assert!(trace.tracial_on_box);
        assert_eq!(trace.value(&[3, 0]), Some(UnitCircleValue::ONE));
        assert_eq!(trace.value(&[1, 0]), None);

        // injecting a nonzero value off Z_ω breaks the certificate
        let bad_support = vec![1i64, 0];
        let (ok, witness) = tracial_certificate(
            &omega,
            &|p| {
                if p == bad_support.as_slice() {
                    Some(UnitCircleValue::ONE)
                } else {
                    trace.value(p)
                }
            },
            6,
        )
        .unwrap();
        assert!(!ok);
        let (p, q) = witness.unwrap();
        let sum: Vec<i64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
        assert_eq!(sum, bad_support);
    }

    #[test]
    fn nontrivial_characters_are_tracial_too() {
        let omega = third_bicharacter();
        let trace =
            lattice_trace_from_character(vec![angle(1, 5), angle(3, 7)], &omega, 6).unwrap();
        assert!(trace.tracial_on_box);
        // χ evaluates multiplicatively on the basis
        assert_eq!(trace.value(&[3, 0]), Some(angle(1, 5)));
        assert_eq!(trace.value(&[3, 3]), Some(angle(1, 5).mul(&angle(3, 7))));
    }

    #[test]
    fn truncated_character_bijection_at_rank_two() {
        // χ ↦ lattice_trace_from_character is injective, and a convex
        // combination over the truncation is recovered by a linear solve
        // against the character matrix (the finite shadow of the trace
        // bijection).
        let omega = omega_from_generators(2, &|i, j| {
            Some(if (i, j) == (1, 0) { angle(1, 2) } else { UnitCircleValue::ONE })
        })
        .unwrap();
        let z = z_omega(&omega);
        assert_eq!(z.rank(), 2);
        let chis: Vec<Vec<UnitCircleValue>> = vec![
            vec![UnitCircleValue::ONE, UnitCircleValue::ONE],
            vec![angle(1, 3), UnitCircleValue::ONE],
            vec![angle(1, 4), angle(1, 5)],
        ];
        let traces: Vec<_> = chis
            .iter()
            .map(|chi| lattice_trace_from_character(chi.clone(), &omega, 4).unwrap())
            .collect();
        // injectivity: distinct χ differ on some box point
        let box_points: Vec<Vec<i64>> = (-4..=4)
            .flat_map(|a| (-4..=4).map(move |b| vec![a, b]))
            .collect();
        for i in 0..traces.len() {
            for j in i + 1..traces.len() {
                assert!(box_points
                    .iter()
                    .any(|p| traces[i].value(p) != traces[j].value(p)));
            }
        }
        // convex combination: recover the weights by solving the linear
        // system over three support points (exact complex evaluation)
        let weights = [0.5f64, 0.3, 0.2];
        let supports: Vec<Vec<i64>> = vec![vec![0, 0], vec![2, 0], vec![0, 2]];
        let value_of_combo = |p: &Vec<i64>| -> Complex<f64> {
            traces
                .iter()
                .zip(&weights)
                .map(|(t, w)| t.value(p).unwrap().eval::<f64>() * *w)
                .fold(Complex::new(0.0, 0.0), |a, b| a + b)
        };
        // 3×3 complex Vandermonde-style solve by Cramer's rule
        let a: Vec<Vec<Complex<f64>>> = supports
            .iter()
            .map(|p| {
                traces
                    .iter()
                    .map(|t| t.value(p).unwrap().eval::<f64>())
                    .collect()
            })
            .collect();
        let rhs: Vec<Complex<f64>> = supports.iter().map(value_of_combo).collect();
        let det3 = |m: &Vec<Vec<Complex<f64>>>| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d0 = det3(&a.iter().map(|r| r.to_vec()).collect());
        for (col, expect) in weights.iter().enumerate() {
            let mut m: Vec<Vec<Complex<f64>>> = a.iter().map(|r| r.to_vec()).collect();
            for (row, value) in rhs.iter().enumerate() {
                m[row][col] = *value;
            }
            let w = det3(&m) / d0;
            assert!((w.re - expect).abs() < 1e-10 && w.im.abs() < 1e-10);
        }
    }

    #[test]
    fn rank_one_theta_is_forced_trivial_and_characters_are_free() {
        let omega = Bicharacter::trivial(1);
        let z = z_omega(&omega);
        assert_eq!(z, LatticeSubgroup::full(1));
        let trace = lattice_trace_from_character(vec![angle(2, 9)], &omega, 5).unwrap();
        assert!(trace.tracial_on_box);
        assert_eq!(trace.value(&[4]), Some(angle(8, 9)));
    }
}
