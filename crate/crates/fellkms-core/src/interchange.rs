//! JSON-facing data-transfer types for every external format: groupoids,
//! cocycles, functionals, measures, trace fields, lattice data, k-graphs
//! and k-graph cocycles. Conversions validate shape (ids, lengths); the
//! mathematical axioms stay with the core validators.

use crate::algebra::LinearFunctional;
use crate::angle::UnitCircleValue;
use crate::cocycle::{OneCocycle, TwoCocycle};
use crate::groupoid::{FiniteGroupoid, GroupoidRef};
use crate::kgraph::{
    DegreeBilinearCocycle, DegreePath, FiniteKGraph, KGraphCocycle, TableKCocycle,
    TrivialKCocycle,
};
use crate::lattice::{Bicharacter, LatticeSubgroup};
use crate::measure::UnitMeasure;
use crate::state::TraceField;
use crate::{CoreError, Real};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowDto {
    pub id: i64,
    pub src: i64,
    pub dst: i64,
}

/// `{"units":[...], "arrows":[{"id","src","dst"}...], "compose":[[a,b,c]...],
/// "inv":[[a,b]...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupoidDto {
    pub units: Vec<i64>,
    pub arrows: Vec<ArrowDto>,
    pub compose: Vec<(i64, i64, i64)>,
    pub inv: Vec<(i64, i64)>,
}

impl GroupoidDto {
    pub fn to_groupoid(&self) -> Result<GroupoidRef, CoreError> {
        Ok(Arc::new(FiniteGroupoid::from_parts(
            self.units.clone(),
            self.arrows.iter().map(|a| (a.id, a.src, a.dst)).collect(),
            self.compose.clone(),
            self.inv.clone(),
        )?))
    }

    pub fn from_groupoid(g: &GroupoidRef) -> Self {
        GroupoidDto {
            units: g.units().map(|x| g.unit_id(x)).collect(),
            arrows: g
                .arrows()
                .map(|a| ArrowDto {
                    id: g.arrow_id(a),
                    src: g.unit_id(g.src(a)),
                    dst: g.unit_id(g.dst(a)),
                })
                .collect(),
            compose: g
                .composable_pairs()
                .map(|(a, b, c)| (g.arrow_id(a), g.arrow_id(b), g.arrow_id(c)))
                .collect(),
            inv: g
                .arrows()
                .map(|a| (g.arrow_id(a), g.arrow_id(g.inv(a))))
                .collect(),
        }
    }
}

/// `[[a, b, "p/q"], ...]` — exact angle strings required.
pub fn two_cocycle_from_entries(
    g: &GroupoidRef,
    entries: &[(i64, i64, UnitCircleValue)],
) -> Result<TwoCocycle, CoreError> {
    TwoCocycle::from_pairs(g.clone(), entries)
}

pub fn two_cocycle_to_entries(sigma: &TwoCocycle) -> Vec<(i64, i64, UnitCircleValue)> {
    let g = sigma.groupoid();
    g.composable_pairs()
        .map(|(a, b, _)| (g.arrow_id(a), g.arrow_id(b), sigma.value(a, b)))
        .collect()
}

/// `[[arrow_id, value], ...]`
pub fn one_cocycle_from_entries(
    g: &GroupoidRef,
    entries: &[(i64, Real)],
) -> Result<OneCocycle<Real>, CoreError> {
    let mut vals = vec![0.0; g.n_arrows()];
    let mut seen = vec![false; g.n_arrows()];
    for &(id, v) in entries {
        let a = g.arrow_index(id)?;
        vals[a] = v;
        seen[a] = true;
    }
    if let Some(a) = seen.iter().position(|s| !s) {
        return Err(CoreError::input(format!(
            "one-cocycle missing a value for arrow {}",
            g.arrow_id(a)
        )));
    }
    OneCocycle::from_values(g.clone(), vals)
}

/// `[[arrow_id, re, im], ...]`
pub fn functional_from_entries(
    g: &GroupoidRef,
    entries: &[(i64, Real, Real)],
) -> Result<LinearFunctional<Real>, CoreError> {
    let mut psi = LinearFunctional::zero(g.clone());
    for &(id, re, im) in entries {
        psi.set_value(g.arrow_index(id)?, Complex::new(re, im));
    }
    Ok(psi)
}

pub fn functional_to_entries(psi: &LinearFunctional<Real>) -> Vec<(i64, Real, Real)> {
    let g = psi.groupoid();
    g.arrows()
        .map(|a| (g.arrow_id(a), psi.value(a).re, psi.value(a).im))
        .collect()
}

pub fn measure_to_entries(mu: &UnitMeasure<Real>) -> Vec<(i64, Real)> {
    let g = mu.groupoid();
    g.units().map(|x| (g.unit_id(x), mu.weight(x))).collect()
}

/// `[[unit, [[iso_arrow, re, im], ...]], ...]`
pub fn field_to_entries(field: &TraceField<Real>) -> Vec<(i64, Vec<(i64, Real, Real)>)> {
    let g = field.groupoid();
    field
        .support()
        .map(|x| {
            let vals = g
                .isotropy(x)
                .into_iter()
                .map(|u| {
                    let v = field.value(x, u);
                    (g.arrow_id(u), v.re, v.im)
                })
                .collect();
            (g.unit_id(x), vals)
        })
        .collect()
}

/// `{"rank": t, "theta": [["p/q", ...], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BicharacterDto {
    pub rank: usize,
    pub theta: Vec<Vec<UnitCircleValue>>,
}

impl BicharacterDto {
    pub fn to_bicharacter(&self) -> Result<Bicharacter, CoreError> {
        if self.theta.len() != self.rank {
            return Err(CoreError::input("theta size does not match rank"));
        }
        Bicharacter::from_theta(self.theta.clone())
    }
}

/// `{"basis": [[..], ..], "hermite": true}` — basis vectors as columns.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupDto {
    pub basis: Vec<Vec<i64>>,
    pub hermite: bool,
}

impl SubgroupDto {
    pub fn from_subgroup(z: &LatticeSubgroup) -> Self {
        SubgroupDto {
            basis: z.basis_columns(),
            hermite: true,
        }
    }
}

/// `{"k", "vertices", "edges": {"1": [{...}], ...},
///   "factorize": {"(1,2)": [[e,f,f',e'], ...], ...}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KGraphDto {
    pub k: usize,
    pub vertices: Vec<i64>,
    pub edges: BTreeMap<String, Vec<ArrowDto>>,
    #[serde(default)]
    pub factorize: BTreeMap<String, Vec<[i64; 4]>>,
}

impl KGraphDto {
    pub fn to_kgraph(&self) -> Result<FiniteKGraph, CoreError> {
        let mut edges = Vec::new();
        for (color_key, list) in &self.edges {
            let color: usize = color_key
                .parse()
                .map_err(|_| CoreError::input(format!("bad color key {color_key:?}")))?;
            for e in list {
                edges.push((e.id, color, e.src, e.dst));
            }
        }
        let mut factorize = Vec::new();
        for (pair_key, entries) in &self.factorize {
            let trimmed = pair_key.trim_matches(|c| c == '(' || c == ')');
            let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(CoreError::input(format!(
                    "bad factorisation key {pair_key:?}; expected \"(i,j)\""
                )));
            }
            let i: usize = parts[0]
                .parse()
                .map_err(|_| CoreError::input(format!("bad color in key {pair_key:?}")))?;
            let j: usize = parts[1]
                .parse()
                .map_err(|_| CoreError::input(format!("bad color in key {pair_key:?}")))?;
            factorize.push(((i, j), entries.clone()));
        }
        FiniteKGraph::from_parts(self.k, self.vertices.clone(), edges, factorize)
    }
}

/// K-graph cocycle input: trivial, degree-bilinear (closed form), or a
/// finite table on normal-form pairs extended by the cocycle identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KCocycleDto {
    Trivial,
    DegreeBilinear {
        theta: Vec<Vec<UnitCircleValue>>,
    },
    Table {
        /// Degree box the table is stated on (total degree per factor).
        box_bound: u32,
        /// `[[lhs edge ids], [rhs edge ids], "p/q"]`
        pairs: Vec<(Vec<i64>, Vec<i64>, UnitCircleValue)>,
    },
}

impl KCocycleDto {
    pub fn build(&self, g: &FiniteKGraph) -> Result<Box<dyn KGraphCocycle>, CoreError> {
        match self {
            KCocycleDto::Trivial => Ok(Box::new(TrivialKCocycle)),
            KCocycleDto::DegreeBilinear { theta } => {
                if theta.len() != g.k() || theta.iter().any(|r| r.len() != g.k()) {
                    return Err(CoreError::input("degree_bilinear theta must be k×k"));
                }
                Ok(Box::new(DegreeBilinearCocycle::new(theta.clone())))
            }
            KCocycleDto::Table { box_bound, pairs } => {
                let table = TableKCocycle::new(g, pairs.clone())?;
                let report = table.validate_on_box(g, *box_bound);
                if !report.is_valid() {
                    return Err(CoreError::input(format!(
                        "cocycle table violates the identity inside the box: {}",
                        report.violations.join("; ")
                    )));
                }
                Ok(Box::new(table))
            }
        }
    }
}

/// `{"degree": [...], "edges": [ids...]}` — normal-form path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathDto {
    pub degree: Vec<u32>,
    pub edges: Vec<i64>,
    pub range: i64,
    pub source: i64,
}

impl PathDto {
    pub fn from_path(g: &FiniteKGraph, p: &DegreePath) -> Self {
        PathDto {
            degree: p.degree().to_vec(),
            edges: p.edges().iter().map(|&e| g.edge(e).id).collect(),
            range: g.vertex_id(p.range()),
            source: g.vertex_id(p.source()),
        }
    }
}
