//! Finite discrete étale groupoids with dense composition tables, axiom
//! validation, isotropy, and the standard builders (pair groupoids, groups,
//! action groupoids).
//!
//! Arrows and units are opaque ids resolved to contiguous indices at
//! construction; all operations work on indices and only reports surface the
//! external ids. Construction checks shape (ids resolve, tables sized) but
//! not the groupoid axioms — axioms are *data* checked by
//! [`FiniteGroupoid::validate`], so broken fixtures can be represented and
//! reported on.

use crate::CoreError;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Report of axiom violations; empty means valid.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    unit_ids: Vec<i64>,
    arrow_ids: Vec<i64>,
    src: Vec<u32>,
    dst: Vec<u32>,
    /// `compose[α * n + β] = αβ`, defined iff `src(α) = dst(β)`.
    compose: Vec<Option<u32>>,
    inv: Vec<u32>,
    /// Identity arrow at each unit, if the data exhibits one.
    unit_arrow: Vec<Option<u32>>,
}

impl FiniteGroupoid {
    /// Assemble from raw tables with external ids.
    pub fn from_parts(
        unit_ids: Vec<i64>,
        arrows: Vec<(i64, i64, i64)>, // (id, src unit id, dst unit id)
        compose: Vec<(i64, i64, i64)>, // (α, β, αβ)
        inv: Vec<(i64, i64)>,
    ) -> Result<Self, CoreError> {
        let unit_index = |id: i64| {
            unit_ids
                .iter()
                .position(|&u| u == id)
                .map(|i| i as u32)
                .ok_or_else(|| CoreError::input(format!("unknown unit id {id}")))
        };
        let mut arrow_ids = Vec::with_capacity(arrows.len());
        let mut src = Vec::with_capacity(arrows.len());
        let mut dst = Vec::with_capacity(arrows.len());
        for &(id, s, d) in &arrows {
            if arrow_ids.contains(&id) {
                return Err(CoreError::input(format!("duplicate arrow id {id}")));
            }
            arrow_ids.push(id);
            src.push(unit_index(s)?);
            dst.push(unit_index(d)?);
        }
        let arrow_index = |id: i64| {
            arrow_ids
                .iter()
                .position(|&a| a == id)
                .map(|i| i as u32)
                .ok_or_else(|| CoreError::input(format!("unknown arrow id {id}")))
        };
        let n = arrow_ids.len();
        let mut compose_table = vec![None; n * n];
        for &(a, b, c) in &compose {
            let (a, b, c) = (arrow_index(a)?, arrow_index(b)?, arrow_index(c)?);
            compose_table[a as usize * n + b as usize] = Some(c);
        }
        let mut inv_table = vec![u32::MAX; n];
        for &(a, b) in &inv {
            inv_table[arrow_index(a)? as usize] = arrow_index(b)?;
        }
        if let Some(a) = inv_table.iter().position(|&x| x == u32::MAX) {
            return Err(CoreError::input(format!(
                "missing inverse for arrow id {}",
                arrow_ids[a]
            )));
        }
        let mut g = FiniteGroupoid {
            unit_ids,
            arrow_ids,
            src,
            dst,
            compose: compose_table,
            inv: inv_table,
            unit_arrow: Vec::new(),
        };
        g.unit_arrow = g.find_unit_arrows();
        Ok(g)
    }

    /// The only idempotent loop at a unit is its identity arrow.
    fn find_unit_arrows(&self) -> Vec<Option<u32>> {
        let mut out = vec![None; self.unit_ids.len()];
        for a in 0..self.n_arrows() {
            if self.src[a] == self.dst[a] && self.compose(a, a) == Some(a) {
                out[self.src[a] as usize] = Some(a as u32);
            }
        }
        out
    }

    pub fn n_units(&self) -> usize {
        self.unit_ids.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrow_ids.len()
    }

    pub fn unit_id(&self, x: usize) -> i64 {
        self.unit_ids[x]
    }

    pub fn arrow_id(&self, a: usize) -> i64 {
        self.arrow_ids[a]
    }

    pub fn unit_index(&self, id: i64) -> Result<usize, CoreError> {
        self.unit_ids
            .iter()
            .position(|&u| u == id)
            .ok_or_else(|| CoreError::input(format!("unknown unit id {id}")))
    }

    pub fn arrow_index(&self, id: i64) -> Result<usize, CoreError> {
        self.arrow_ids
            .iter()
            .position(|&a| a == id)
            .ok_or_else(|| CoreError::input(format!("unknown arrow id {id}")))
    }

    /// Source unit (index) of an arrow.
    pub fn src(&self, a: usize) -> usize {
        self.src[a] as usize
    }

    /// Range unit (index) of an arrow.
    pub fn dst(&self, a: usize) -> usize {
        self.dst[a] as usize
    }

    /// `αβ`, defined when `src(α) = dst(β)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.n_arrows() + b].map(|c| c as usize)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn unit_arrow(&self, x: usize) -> Option<usize> {
        self.unit_arrow[x].map(|a| a as usize)
    }

    /// Identity arrow at `x`; error when the data does not exhibit one.
    pub fn unit_arrow_checked(&self, x: usize) -> Result<usize, CoreError> {
        self.unit_arrow(x).ok_or_else(|| {
            CoreError::input(format!("no identity arrow at unit id {}", self.unit_ids[x]))
        })
    }

    pub fn is_unit_arrow(&self, a: usize) -> bool {
        self.unit_arrow[self.src[a] as usize] == Some(a as u32)
    }

    pub fn units(&self) -> impl Iterator<Item = usize> {
        0..self.n_units()
    }

    pub fn arrows(&self) -> impl Iterator<Item = usize> {
        0..self.n_arrows()
    }

    /// All `(α, β, αβ)` with `src(α) = dst(β)` and the composite defined.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n_arrows();
        (0..n).flat_map(move |a| {
            (0..n).filter_map(move |b| self.compose(a, b).map(|c| (a, b, c)))
        })
    }

    /// Arrows `u` with `src(u) = dst(u) = x`.
    pub fn isotropy(&self, x: usize) -> Vec<usize> {
        self.arrows()
            .filter(|&a| self.src(a) == x && self.dst(a) == x)
            .collect()
    }

    /// Isotropy group at a unit given by external id, with an abelian flag.
    pub fn isotropy_report(&self, unit_id: i64) -> Result<IsotropyReport, CoreError> {
        let x = self.unit_index(unit_id)?;
        let arrows = self.isotropy(x);
        let abelian = arrows.iter().all(|&u| {
            arrows
                .iter()
                .all(|&v| self.compose(u, v) == self.compose(v, u))
        });
        Ok(IsotropyReport {
            unit: x,
            arrows,
            abelian,
        })
    }

    /// Full axiom check; violations name the failing identity.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.n_arrows();
        let id = |a: usize| self.arrow_ids[a];

        for a in 0..n {
            for b in 0..n {
                let defined = self.compose(a, b).is_some();
                let composable = self.src[a] == self.dst[b];
                if defined && !composable {
                    report.push(format!(
                        "compose({},{}) defined but src({}) ≠ dst({})",
                        id(a),
                        id(b),
                        id(a),
                        id(b)
                    ));
                }
                if !defined && composable {
                    report.push(format!(
                        "compose({},{}) undefined although src({}) = dst({})",
                        id(a),
                        id(b),
                        id(a),
                        id(b)
                    ));
                }
                if let Some(c) = self.compose(a, b) {
                    if self.dst[c] != self.dst[a] || self.src[c] != self.src[b] {
                        report.push(format!(
                            "endpoints: dst/src of {}·{} do not match dst({}), src({})",
                            id(a),
                            id(b),
                            id(a),
                            id(b)
                        ));
                    }
                }
            }
        }

        // associativity over composable triples
        for (a, b, ab) in self.composable_pairs() {
            for c in 0..n {
                if self.src[b] != self.dst[c] {
                    continue;
                }
                let Some(bc) = self.compose(b, c) else { continue };
                if self.compose(ab, c) != self.compose(a, bc) {
                    report.push(format!(
                        "associativity fails on ({},{},{})",
                        id(a),
                        id(b),
                        id(c)
                    ));
                }
            }
        }

        for x in 0..self.n_units() {
            match self.unit_arrow(x) {
                None => report.push(format!(
                    "unit {} has no identity arrow",
                    self.unit_ids[x]
                )),
                Some(u) => {
                    for b in 0..n {
                        if self.dst[b] as usize == x && self.compose(u, b) != Some(b) {
                            report.push(format!(
                                "unit arrow {} is not a left identity for {}",
                                id(u),
                                id(b)
                            ));
                        }
                        if self.src[b] as usize == x && self.compose(b, u) != Some(b) {
                            report.push(format!(
                                "unit arrow {} is not a right identity for {}",
                                id(u),
                                id(b)
                            ));
                        }
                    }
                }
            }
        }

        for a in 0..n {
            let inv = self.inv(a);
            if self.src[inv] != self.dst[a] || self.dst[inv] != self.src[a] {
                report.push(format!("inv({}) has wrong endpoints", id(a)));
                continue;
            }
            let u_dst = self.unit_arrow(self.dst(a));
            let u_src = self.unit_arrow(self.src(a));
            if self.compose(a, inv).map(Some) != Some(u_dst) {
                report.push(format!("γ·inv(γ) ≠ unit at dst(γ) for arrow {}", id(a)));
            }
            if self.compose(inv, a).map(Some) != Some(u_src) {
                report.push(format!("inv(γ)·γ ≠ unit at src(γ) for arrow {}", id(a)));
            }
        }

        report
    }
}

#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub unit: usize,
    pub arrows: Vec<usize>,
    pub abelian: bool,
}

/// Shared handle; all higher structures (cocycles, algebra elements,
/// functionals) hold one and operations reject mixed handles.
pub type GroupoidRef = Arc<FiniteGroupoid>;

pub fn same_groupoid(a: &GroupoidRef, b: &GroupoidRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A finite group as a multiplication table over `0..n` (not required to be
/// valid until [`GroupTable::validate`] is called).
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub n: usize,
    /// `op[g][h] = gh`
    pub op: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let op = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        GroupTable { n, op }
    }

    /// Direct product; element (a, b) is encoded as `a * other.n + b`.
    pub fn product(&self, other: &GroupTable) -> GroupTable {
        let n = self.n * other.n;
        let op = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| {
                        let (g1, g2) = (g / other.n, g % other.n);
                        let (h1, h2) = (h / other.n, h % other.n);
                        self.op[g1][h1] * other.n + other.op[g2][h2]
                    })
                    .collect()
            })
            .collect();
        GroupTable { n, op }
    }

    pub fn identity(&self) -> Result<usize, CoreError> {
        (0..self.n)
            .find(|&e| (0..self.n).all(|g| self.op[e][g] == g && self.op[g][e] == g))
            .ok_or_else(|| CoreError::input("group table has no identity"))
    }

    pub fn inverse(&self, g: usize) -> Result<usize, CoreError> {
        let e = self.identity()?;
        (0..self.n)
            .find(|&h| self.op[g][h] == e && self.op[h][g] == e)
            .ok_or_else(|| CoreError::input(format!("element {g} has no inverse")))
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.op.len() != self.n || self.op.iter().any(|row| row.len() != self.n) {
            return Err(CoreError::input("group table has wrong shape"));
        }
        if self.op.iter().flatten().any(|&x| x >= self.n) {
            return Err(CoreError::input("group table entry out of range"));
        }
        self.identity()?;
        for g in 0..self.n {
            self.inverse(g)?;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    if self.op[self.op[a][b]][c] != self.op[a][self.op[b][c]] {
                        return Err(CoreError::input(format!(
                            "group table not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The isotropy group at `x` as a standalone one-unit groupoid, together
/// with the map from its arrow indices back to the parent's.
pub fn isotropy_subgroupoid(
    g: &GroupoidRef,
    x: usize,
) -> Result<(GroupoidRef, Vec<usize>), CoreError> {
    let iso = g.isotropy(x);
    let arrows = iso
        .iter()
        .map(|&a| (g.arrow_id(a), g.unit_id(x), g.unit_id(x)))
        .collect();
    let mut compose = Vec::new();
    for &a in &iso {
        for &b in &iso {
            let c = g.compose(a, b).ok_or_else(|| {
                CoreError::input("isotropy not closed under composition; invalid groupoid")
            })?;
            compose.push((g.arrow_id(a), g.arrow_id(b), g.arrow_id(c)));
        }
    }
    let inv = iso.iter().map(|&a| (g.arrow_id(a), g.arrow_id(g.inv(a)))).collect();
    let sub = FiniteGroupoid::from_parts(vec![g.unit_id(x)], arrows, compose, inv)?;
    Ok((Arc::new(sub), iso))
}

/// Pair groupoid on `n` points. Arrow `(x, y)` (id `x·n + y`) runs from `y`
/// to `x`, so `(x,y)·(y,z) = (x,z)` — the matrix-unit convention.
pub fn pair_groupoid(n: usize) -> GroupoidRef {
    assert!(n >= 1);
    let units = (0..n as i64).collect();
    let arrows = (0..n)
        .flat_map(|x| (0..n).map(move |y| ((x * n + y) as i64, y as i64, x as i64)))
        .collect();
    let mut compose = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                compose.push(((x * n + y) as i64, (y * n + z) as i64, (x * n + z) as i64));
            }
        }
    }
    let inv = (0..n)
        .flat_map(|x| (0..n).map(move |y| ((x * n + y) as i64, (y * n + x) as i64)))
        .collect();
    Arc::new(FiniteGroupoid::from_parts(units, arrows, compose, inv).expect("pair groupoid"))
}

/// A finite group as a one-unit groupoid; arrow ids are the group elements.
pub fn group_as_groupoid(table: &GroupTable) -> Result<GroupoidRef, CoreError> {
    table.validate()?;
    let arrows = (0..table.n as i64).map(|g| (g, 0, 0)).collect();
    let compose = (0..table.n)
        .flat_map(|g| {
            (0..table.n).map(move |h| (g as i64, h as i64, table.op[g][h] as i64))
        })
        .collect();
    let inv = (0..table.n)
        .map(|g| Ok((g as i64, table.inverse(g)? as i64)))
        .collect::<Result<_, CoreError>>()?;
    Ok(Arc::new(FiniteGroupoid::from_parts(
        vec![0],
        arrows,
        compose,
        inv,
    )?))
}

/// Action groupoid `G ⋉ X` for a left action `action[g][x] = g·x`. Arrow
/// `(g, x)` (id `g·|X| + x`) runs from `x` to `g·x`.
pub fn action_groupoid(
    table: &GroupTable,
    action: &[Vec<usize>],
) -> Result<GroupoidRef, CoreError> {
    table.validate()?;
    let n_pts = action.first().map_or(0, |row| row.len());
    if action.len() != table.n || n_pts == 0 {
        return Err(CoreError::input("action table has wrong shape"));
    }
    let e = table.identity()?;
    if (0..n_pts).any(|x| action[e][x] != x) {
        return Err(CoreError::input("identity does not act trivially"));
    }
    for g in 0..table.n {
        for h in 0..table.n {
            for x in 0..n_pts {
                if action[table.op[g][h]][x] != action[g][action[h][x]] {
                    return Err(CoreError::input(format!(
                        "action is not a homomorphism at (g={g}, h={h}, x={x})"
                    )));
                }
            }
        }
    }
    let aid = |g: usize, x: usize| (g * n_pts + x) as i64;
    let units = (0..n_pts as i64).collect();
    let arrows = (0..table.n)
        .flat_map(|g| (0..n_pts).map(move |x| (aid(g, x), x as i64, action[g][x] as i64)))
        .collect();
    let mut compose = Vec::new();
    for g in 0..table.n {
        for h in 0..table.n {
            for x in 0..n_pts {
                // (g, h·x)·(h, x) = (gh, x)
                compose.push((aid(g, action[h][x]), aid(h, x), aid(table.op[g][h], x)));
            }
        }
    }
    let inv = (0..table.n)
        .flat_map(|g| {
            let ginv = table.inverse(g).expect("validated group");
            (0..n_pts).map(move |x| (aid(g, x), aid(ginv, action[g][x])))
        })
        .collect();
    Ok(Arc::new(FiniteGroupoid::from_parts(
        units, arrows, compose, inv,
    )?))
}
