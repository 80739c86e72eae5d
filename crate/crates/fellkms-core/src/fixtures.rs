//! Deterministic random finite models (groupoid, 2-cocycle, 1-cocycle) for
//! property and acceptance testing: mixes of pair groupoids, finite abelian
//! groups, and action groupoids, twisted by random rational coboundaries
//! and pulled-back bicharacters, with dynamics from random unit potentials.

use crate::angle::UnitCircleValue;
use crate::cocycle::{coboundary, OneCocycle, TwoCocycle};
use crate::groupoid::{
    action_groupoid, group_as_groupoid, pair_groupoid, GroupTable, GroupoidRef,
};
use crate::Real;
use rand::Rng;

pub struct RandomModel {
    pub name: String,
    pub groupoid: GroupoidRef,
    pub sigma: TwoCocycle,
    pub dynamics: OneCocycle<Real>,
}

/// A random circle-valued `b` (trivial on units) with small denominators.
fn random_coboundary(g: &GroupoidRef, rng: &mut impl Rng) -> TwoCocycle {
    let b: Vec<UnitCircleValue> = g
        .arrows()
        .map(|a| {
            if g.is_unit_arrow(a) {
                UnitCircleValue::ONE
            } else {
                let den = rng.gen_range(2..=6);
                UnitCircleValue::from_angle(rng.gen_range(0..den), den).unwrap()
            }
        })
        .collect();
    coboundary(g, &b).expect("b is 1 on units")
}

/// The bicharacter twist on `Z_n × Z_n` (element `a·n + b`):
/// `σ((a,b),(a',b')) = e^{2πi·t·b·a'/n}`.
fn product_bicharacter(g: &GroupoidRef, n: usize, t: i64) -> TwoCocycle {
    TwoCocycle::from_fn(g.clone(), move |u, v| {
        let b = (u % n) as i64;
        let a2 = (v / n) as i64;
        UnitCircleValue::from_angle(t * b * a2, n as i64).unwrap()
    })
}

/// Pull a group 2-cocycle back through the projection of an action groupoid
/// (arrow `g·|X| + x ↦ g`).
fn pullback_to_action(
    g: &GroupoidRef,
    n_points: usize,
    group_sigma: impl Fn(usize, usize) -> UnitCircleValue,
) -> TwoCocycle {
    TwoCocycle::from_fn(g.clone(), move |a, b| {
        group_sigma(a / n_points, b / n_points)
    })
}

/// Potentials in [−1, 1] keep all measure weights well away from zero.
fn random_dynamics(g: &GroupoidRef, rng: &mut impl Rng) -> OneCocycle<Real> {
    let potential: Vec<Real> = (0..g.n_units()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    OneCocycle::from_unit_potential(g.clone(), &potential).expect("potential cocycle")
}

/// `count` models drawn deterministically from the given generator; covers
/// pair groupoids, cyclic and product abelian groups (with and without
/// nontrivial twist class), and several action groupoids, all within 6
/// units and 40 arrows.
pub fn random_models(rng: &mut impl Rng, count: usize) -> Vec<RandomModel> {
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let (name, groupoid, base_sigma): (String, GroupoidRef, Option<TwoCocycle>) =
            match index % 7 {
                0 => {
                    let n = rng.gen_range(2..=4);
                    (format!("pair({n})"), pair_groupoid(n), None)
                }
                1 => {
                    let n = rng.gen_range(2..=6);
                    (
                        format!("Z_{n}"),
                        group_as_groupoid(&GroupTable::cyclic(n)).unwrap(),
                        None,
                    )
                }
                2 => {
                    let n = rng.gen_range(2..=3);
                    let table = GroupTable::cyclic(n).product(&GroupTable::cyclic(n));
                    let g = group_as_groupoid(&table).unwrap();
                    let t = rng.gen_range(1..n as i64);
                    let sigma = product_bicharacter(&g, n, t);
                    (format!("Z_{n}xZ_{n} twist {t}"), g, Some(sigma))
                }
                3 => {
                    // Z_2 × Z_2: first factor swaps 2 points, second trivial
                    let table = GroupTable::cyclic(2).product(&GroupTable::cyclic(2));
                    let action = vec![vec![0, 1], vec![0, 1], vec![1, 0], vec![1, 0]];
                    let g = action_groupoid(&table, &action).unwrap();
                    let sigma = pullback_to_action(&g, 2, |u, v| {
                        let b = (u % 2) as i64;
                        let a2 = (v / 2) as i64;
                        UnitCircleValue::from_angle(b * a2, 2).unwrap()
                    });
                    ("swap x Z_2 (Pauli pullback)".to_string(), g, Some(sigma))
                }
                4 => {
                    let m = rng.gen_range(2..=3);
                    let shift: Vec<Vec<usize>> =
                        (0..m).map(|g| (0..m).map(|x| (x + g) % m).collect()).collect();
                    let g = action_groupoid(&GroupTable::cyclic(m), &shift).unwrap();
                    (format!("Z_{m} shift on {m} points"), g, None)
                }
                5 => {
                    // Z_4 on 2 points through the sign character
                    let action = vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]];
                    let g = action_groupoid(&GroupTable::cyclic(4), &action).unwrap();
                    ("Z_4 sign action".to_string(), g, None)
                }
                _ => {
                    // Z_2 swapping two of three points
                    let action = vec![vec![0, 1, 2], vec![1, 0, 2]];
                    let g = action_groupoid(&GroupTable::cyclic(2), &action).unwrap();
                    ("Z_2 partial swap".to_string(), g, None)
                }
            };
        assert!(groupoid.n_units() <= 6 && groupoid.n_arrows() <= 40);
        let mut sigma = random_coboundary(&groupoid, rng);
        if let Some(twist) = base_sigma {
            sigma = sigma.product(&twist).expect("same groupoid");
        }
        debug_assert!(sigma.validate().is_valid());
        let dynamics = random_dynamics(&groupoid, rng);
        out.push(RandomModel {
            name: format!("{index}: {name}"),
            groupoid,
            sigma,
            dynamics,
        });
    }
    out
}
