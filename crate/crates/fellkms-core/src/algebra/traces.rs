//! Trace space of a one-unit twisted algebra, solved exactly.
//!
//! The tracial constraints σ(u,v)ψ(δ_{uv}) = σ(v,u)ψ(δ_{vu}) and the
//! Hermitian constraints ψ(δ_{u⁻¹}) = σ(u,u⁻¹)·conj(ψ(δ_u)) are all of the
//! form ψ(a) = phase·ψ(b) or ψ(a) = phase·conj(ψ(b)) with exact circle
//! phases, so the solution space is computed by gauge propagation over a
//! union-find: every component ends up free (2 real dimensions), pinned to
//! a real line (1 dimension), or dead (forced to 0). No numerical nullspace
//! is involved; membership in the tracial *state* set is then positivity
//! plus ψ(δ_e) = 1.
//!
//! For abelian isotropy the extreme tracial states are enumerated exactly as
//! the σ-multiplicative characters supported on the subgroup pairing
//! trivially with everything under σσ*.

use crate::angle::UnitCircleValue;
use crate::cocycle::TwoCocycle;
use crate::groupoid::GroupoidRef;
use crate::intlinalg::{cyclic_decomposition, IMat};
use crate::{algebra::LinearFunctional, CoreError, Scalar};

/// A functional whose values are exact circle values or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactFunctional {
    values: Vec<Option<UnitCircleValue>>,
}

impl ExactFunctional {
    pub fn new(values: Vec<Option<UnitCircleValue>>) -> Self {
        ExactFunctional { values }
    }

    pub fn value(&self, arrow: usize) -> Option<UnitCircleValue> {
        self.values[arrow]
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|_| i))
    }

    pub fn to_functional<F: Scalar>(&self, g: &GroupoidRef) -> LinearFunctional<F> {
        let mut psi = LinearFunctional::zero(g.clone());
        for (a, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                psi.set_value(a, v.eval());
            }
        }
        psi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CompState {
    /// ψ(root) ranges over ℂ.
    Free,
    /// ψ(root) = e^{2πiθ}·conj(ψ(root)); the root lives on the line
    /// e^{πiθ}·ℝ.
    Line(UnitCircleValue),
    /// ψ ≡ 0 on the component.
    Dead,
}

/// ψ(u) = phase·C^{conj}(ψ(parent)), C = complex conjugation.
#[derive(Clone, Copy, Debug)]
struct Gauge {
    phase: UnitCircleValue,
    conj: bool,
}

impl Gauge {
    const ID: Gauge = Gauge {
        phase: UnitCircleValue::ONE,
        conj: false,
    };

    fn apply_conj(c: bool, v: UnitCircleValue) -> UnitCircleValue {
        if c {
            v.conj()
        } else {
            v
        }
    }

    /// Compose: if ψ(u) = g1(ψ(v)) and ψ(v) = g2(ψ(w)) then ψ(u) = (g1∘g2)(ψ(w)).
    fn then(&self, inner: &Gauge) -> Gauge {
        Gauge {
            phase: self.phase.mul(&Self::apply_conj(self.conj, inner.phase)),
            conj: self.conj ^ inner.conj,
        }
    }
}

struct GaugeGraph {
    parent: Vec<usize>,
    gauge: Vec<Gauge>,
    state: Vec<CompState>,
}

impl GaugeGraph {
    fn new(n: usize) -> Self {
        GaugeGraph {
            parent: (0..n).collect(),
            gauge: vec![Gauge::ID; n],
            state: vec![CompState::Free; n],
        }
    }

    fn find(&mut self, u: usize) -> (usize, Gauge) {
        if self.parent[u] == u {
            return (u, self.gauge[u]);
        }
        let (root, pg) = self.find(self.parent[u]);
        let composed = self.gauge[u].then(&pg);
        self.parent[u] = root;
        self.gauge[u] = composed;
        (root, composed)
    }

    fn merge_state(&mut self, root: usize, add: CompState) {
        let merged = match (self.state[root], add) {
            (CompState::Dead, _) | (_, CompState::Dead) => CompState::Dead,
            (CompState::Free, s) | (s, CompState::Free) => s,
            (CompState::Line(a), CompState::Line(b)) => {
                if a == b {
                    CompState::Line(a)
                } else {
                    CompState::Dead
                }
            }
        };
        self.state[root] = merged;
    }

    /// Impose ψ(a) = phase·C^{conj}(ψ(b)).
    fn link(&mut self, a: usize, b: usize, phase: UnitCircleValue, conj: bool) {
        let (ra, ga) = self.find(a);
        let (rb, gb) = self.find(b);
        let rel = Gauge { phase, conj };
        // ψ(a) = (rel ∘ gb)(ψ(rb)) and ψ(a) = ga(ψ(ra))
        let rhs = rel.then(&gb);
        if ra != rb {
            // ψ(ra) = ga⁻¹(ψ(a)) = (ga⁻¹ ∘ rhs)(ψ(rb))
            let ga_inv = Gauge {
                phase: Gauge::apply_conj(ga.conj, ga.phase.conj()),
                conj: ga.conj,
            };
            let new_gauge = ga_inv.then(&rhs);
            self.parent[ra] = rb;
            self.gauge[ra] = new_gauge;
            let moved = self.state[ra];
            let transported = match moved {
                CompState::Free => CompState::Free,
                CompState::Dead => CompState::Dead,
                // ψ(ra) = e^{2πiθ} conj(ψ(ra)) with ψ(ra) = q·C^c(ψ(rb))
                CompState::Line(theta) => {
                    let q = new_gauge.phase;
                    if !new_gauge.conj {
                        CompState::Line(theta.mul(&q.conj().pow(2)))
                    } else {
                        CompState::Line(q.pow(2).mul(&theta.conj()))
                    }
                }
            };
            self.merge_state(rb, transported);
        } else {
            // consistency of two expressions for ψ(a) over the same root
            if ga.conj == rhs.conj {
                if ga.phase != rhs.phase {
                    self.merge_state(ra, CompState::Dead);
                }
            } else {
                // ga(z) = rhs applied with opposite parity forces a line
                let q = rhs.phase.mul(&ga.phase.conj());
                let theta = if !ga.conj { q } else { q.conj() };
                self.merge_state(ra, CompState::Line(theta));
            }
        }
    }

    fn kill(&mut self, u: usize) {
        let (r, _) = self.find(u);
        self.state[r] = CompState::Dead;
    }
}

/// Affine description of the Hermitian tracial functionals of a one-unit
/// twisted algebra: a real-linear basis plus the normalisation arrow
/// (a tracial state is `Σ c_i basis_i` with real `c_i`, ψ(δ_e) = 1 and the
/// Gram positivity certificate).
#[derive(Clone, Debug)]
pub struct TraceSpace {
    pub basis: Vec<ExactFunctional>,
    /// Index of the identity arrow; ψ(δ_e) = 1 is the normalisation.
    pub unit_arrow: usize,
}

impl TraceSpace {
    /// Real dimension of the solution space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solve ψ(δ_u ⋆ δ_v) = ψ(δ_v ⋆ δ_u) for all u,v together with Hermiticity
/// on a one-unit groupoid (a finite group).
pub fn trace_space(g: &GroupoidRef, sigma: &TwoCocycle) -> Result<TraceSpace, CoreError> {
    if g.n_units() != 1 {
        return Err(CoreError::input(format!(
            "trace space needs a one-unit groupoid, got {} units",
            g.n_units()
        )));
    }
    let unit_arrow = g.unit_arrow_checked(0)?;
    let n = g.n_arrows();
    let mut graph = GaugeGraph::new(n);

    for u in 0..n {
        for v in 0..n {
            let uv = g.compose(u, v).expect("group");
            let vu = g.compose(v, u).expect("group");
            // σ(u,v)ψ(uv) = σ(v,u)ψ(vu)
            let phase = sigma.value(v, u).mul(&sigma.value(u, v).conj());
            if uv == vu {
                if !phase.is_one() {
                    graph.kill(uv);
                }
            } else {
                graph.link(uv, vu, phase, false);
            }
        }
    }
    for u in 0..n {
        let uinv = g.inv(u);
        let phase = sigma.value(u, uinv);
        if uinv == u {
            // ψ(u) = phase·conj(ψ(u))
            graph.link(u, u, phase, true);
        } else {
            graph.link(uinv, u, phase, true);
        }
    }

    let mut basis = Vec::new();
    let roots: Vec<usize> = (0..n).filter(|&u| graph.find(u).0 == u).collect();
    for root in roots {
        let root_values: Vec<UnitCircleValue> = match graph.state[root] {
            CompState::Dead => continue,
            CompState::Free => vec![
                UnitCircleValue::ONE,
                UnitCircleValue::from_angle(1, 4).expect("i"),
            ],
            CompState::Line(theta) => {
                let (num, den) = theta.angle();
                vec![UnitCircleValue::from_angle(num, 2 * den).expect("half angle")]
            }
        };
        for rv in root_values {
            let mut values = vec![None; n];
            for u in 0..n {
                let (r, gauge) = graph.find(u);
                if r == root {
                    values[u] = Some(gauge.phase.mul(&Gauge::apply_conj(gauge.conj, rv)));
                }
            }
            basis.push(ExactFunctional::new(values));
        }
    }
    Ok(TraceSpace { basis, unit_arrow })
}

/// Subgroup of arrows pairing trivially with every arrow under σσ* (the
/// support of any trace when the group is abelian).
pub fn antisymmetry_center(g: &GroupoidRef, sigma: &TwoCocycle) -> Vec<usize> {
    let n = g.n_arrows();
    (0..n)
        .filter(|&w| (0..n).all(|q| sigma.value(w, q) == sigma.value(q, w)))
        .collect()
}

/// Exact extreme tracial states of the twisted algebra of a finite *abelian*
/// group: the σ-multiplicative unimodular characters of the σσ*-center,
/// extended by zero. Their count equals the order of the center.
pub fn extreme_tracial_states(
    g: &GroupoidRef,
    sigma: &TwoCocycle,
) -> Result<Vec<ExactFunctional>, CoreError> {
    if g.n_units() != 1 {
        return Err(CoreError::input("extreme traces need a one-unit groupoid"));
    }
    let n = g.n_arrows();
    let e = g.unit_arrow_checked(0)?;
    let abelian = (0..n).all(|u| (0..n).all(|v| g.compose(u, v) == g.compose(v, u)));
    if !abelian {
        return Err(CoreError::precondition(
            "extreme tracial states are enumerated for abelian isotropy only",
        ));
    }

    let center = antisymmetry_center(g, sigma);
    let m = center.len();
    let pos = |arrow: usize| center.iter().position(|&z| z == arrow);
    // closure sanity: σσ* is a bicharacter on an abelian group
    for &a in &center {
        for &b in &center {
            let ab = g.compose(a, b).expect("group");
            assert!(pos(ab).is_some(), "center not closed under products");
        }
        assert!(pos(g.inv(a)).is_some(), "center not closed under inverse");
    }

    // cyclic decomposition of the center from its multiplication table
    let mut relations: Vec<Vec<i128>> = Vec::new();
    let e_in_center = pos(e).expect("identity is central");
    let mut unit_rel = vec![0i128; m];
    unit_rel[e_in_center] = 1;
    relations.push(unit_rel);
    for i in 0..m {
        for j in 0..m {
            let k = pos(g.compose(center[i], center[j]).expect("group")).expect("closed");
            let mut rel = vec![0i128; m];
            rel[i] += 1;
            rel[j] += 1;
            rel[k] -= 1;
            relations.push(rel);
        }
    }
    let decomposition = cyclic_decomposition(&IMat::from_columns(m, &relations));

    // resolve each factor generator as a group element
    let mul = |a: usize, b: usize| g.compose(a, b).expect("group");
    let power = |base: usize, exp: i128| -> usize {
        let (base, exp) = if exp < 0 {
            (g.inv(base), -exp)
        } else {
            (base, exp)
        };
        let mut acc = e;
        for _ in 0..exp {
            acc = mul(acc, base);
        }
        acc
    };
    let mut generators: Vec<usize> = Vec::new();
    let mut orders: Vec<i64> = Vec::new();
    for (order, exponents) in decomposition {
        assert!(order > 1, "finite group decomposition");
        let mut gen = e;
        for (idx, &w) in exponents.iter().enumerate() {
            gen = mul(gen, power(center[idx], w));
        }
        generators.push(gen);
        orders.push(order as i64);
    }
    let total: i64 = orders.iter().product();
    assert_eq!(total as usize, m, "decomposition must cover the center");

    // n_i-th roots available to each generator: ψ(g_i)^{n_i} = Π σ(g_i^j, g_i)
    let mut root_choices: Vec<Vec<UnitCircleValue>> = Vec::new();
    for (&gen, &order) in generators.iter().zip(&orders) {
        let mut c = UnitCircleValue::ONE;
        let mut p = gen;
        for _ in 1..order {
            c = c.mul(&sigma.value(p, gen));
            p = mul(p, gen);
        }
        let (num, den) = c.angle();
        let choices = (0..order)
            .map(|k| {
                UnitCircleValue::from_angle(num + k * den, den * order).expect("root of unity")
            })
            .collect();
        root_choices.push(choices);
    }

    // enumerate characters over all root combinations
    let mut states = Vec::new();
    let combos = orders.iter().map(|&o| o as usize).collect::<Vec<_>>();
    let mut choice = vec![0usize; combos.len()];
    loop {
        // ψ on normal forms g_1^{a_1}…g_r^{a_r} via ψ(x·g) = conj(σ(x,g))ψ(x)ψ(g)
        let mut values: Vec<Option<UnitCircleValue>> = vec![None; n];
        values[e] = Some(UnitCircleValue::ONE);
        let mut frontier: Vec<(usize, UnitCircleValue)> = vec![(e, UnitCircleValue::ONE)];
        for (i, &gen) in generators.iter().enumerate() {
            let psi_gen = root_choices[i][choice[i]];
            let mut next = frontier.clone();
            for (x, psi_x) in &frontier {
                let mut elt = *x;
                let mut val = *psi_x;
                for _ in 1..orders[i] {
                    val = sigma.value(elt, gen).conj().mul(&val).mul(&psi_gen);
                    elt = mul(elt, gen);
                    next.push((elt, val));
                }
            }
            frontier = next;
        }
        assert_eq!(frontier.len(), m, "normal forms must cover the center");
        for (elt, val) in frontier {
            assert!(values[elt].is_none() || elt == e, "normal form collision");
            values[elt] = Some(val);
        }
        // exact multiplicativity audit: ψ(uv) = conj(σ(u,v))ψ(u)ψ(v)
        for &u in &center {
            for &v in &center {
                let uv = mul(u, v);
                let expect = sigma
                    .value(u, v)
                    .conj()
                    .mul(&values[u].unwrap())
                    .mul(&values[v].unwrap());
                assert_eq!(values[uv], Some(expect), "character audit failed");
            }
        }
        states.push(ExactFunctional::new(values));

        // next combination
        let mut i = 0;
        loop {
            if i == combos.len() {
                return Ok(states);
            }
            choice[i] += 1;
            if choice[i] < combos[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
