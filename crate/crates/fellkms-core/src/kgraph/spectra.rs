//! Perron data of a strongly connected finite k-graph: the color adjacency
//! matrices `A_i(u,v) = |uΛ^{e_i}v|`, their spectral radii, the common
//! unimodularised Perron vector, the preferred dynamics
//! `D(x,l,y) = Σ l_i ln ρ(A_i)` and the measure
//! `M(Z(λ)) = Π ρ(A_i)^{−d(λ)_i} · x_{s(λ)}`.

use super::{DegreePath, FiniteKGraph};
use crate::intlinalg::IMat;
use crate::numeric::{char_poly, perron_vector, polish_root};
use crate::{CoreError, Scalar};

#[derive(Clone, Debug)]
pub struct SpectraReport<F: Scalar> {
    /// `A_i(u,v) = |uΛ^{e_i}v|` per color.
    pub adjacency: Vec<IMat>,
    pub radii: Vec<F>,
    /// Common Perron vector, entrywise positive, Σx = 1.
    pub perron: Vec<F>,
    /// max over colors and vertices of `|A_i x − ρ_i x|`.
    pub eigen_residual: F,
}

pub fn adjacency_spectra<F: Scalar>(g: &FiniteKGraph) -> Result<SpectraReport<F>, CoreError> {
    let report = g.validate();
    if report
        .violations
        .iter()
        .any(|v| v.contains("strongly connected"))
    {
        return Err(CoreError::precondition("k-graph is not strongly connected"));
    }
    let n = g.n_vertices();
    let mut adjacency = Vec::with_capacity(g.k());
    for color in 0..g.k() {
        let mut a = IMat::zeros(n, n);
        for &e in g.edges_of_color(color) {
            a[(g.edge(e).dst, g.edge(e).src)] += 1;
        }
        adjacency.push(a);
    }
    // common Perron vector of the commuting family via the color sum
    let sum: Vec<Vec<F>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| {
                    F::real(
                        adjacency
                            .iter()
                            .map(|a| a[(u, v)])
                            .sum::<i128>() as f64,
                    )
                })
                .collect()
        })
        .collect();
    let perron = perron_vector(&sum, F::real(1e-14), 1_000_000)?;

    let mut radii = Vec::with_capacity(g.k());
    let mut eigen_residual = F::zero();
    for a in &adjacency {
        let ax: Vec<F> = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| F::real(a[(u, v)] as f64) * perron[v])
                    .sum()
            })
            .collect();
        // Rayleigh estimate against the common eigenvector (Σx = 1)
        let mut rho: F = ax.iter().copied().sum();
        if n <= 6 {
            // exact characteristic polynomial; Newton from the Rayleigh
            // estimate polishes the largest root to machine precision
            let poly = char_poly(a);
            let polished = polish_root(&poly, rho);
            if (polished - rho).abs() <= (F::one() + rho) * F::real(0.5) {
                rho = polished;
            }
        }
        for u in 0..n {
            eigen_residual = eigen_residual.max((ax[u] - rho * perron[u]).abs());
        }
        radii.push(rho);
    }
    Ok(SpectraReport {
        adjacency,
        radii,
        perron,
        eigen_residual,
    })
}

/// `D(x, l, y) = Σ_i l_i ln ρ(A_i)`, additive in `l`.
pub fn preferred_dynamics_value<F: Scalar>(spectra: &SpectraReport<F>, l: &[i64]) -> F {
    spectra
        .radii
        .iter()
        .zip(l)
        .map(|(rho, &li)| F::real(li as f64) * rho.ln())
        .sum()
}

/// `M(Z(λ)) = (Π_i ρ(A_i)^{−d(λ)_i}) · x_{s(λ)}`.
pub fn measure_cylinder_mass<F: Scalar>(spectra: &SpectraReport<F>, path: &DegreePath) -> F {
    let mut mass = spectra.perron[path.source()];
    for (rho, &d) in spectra.radii.iter().zip(path.degree()) {
        mass = mass * rho.powi(-(d as i32));
    }
    mass
}
