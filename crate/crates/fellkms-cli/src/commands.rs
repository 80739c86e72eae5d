//! Command handlers: each builds the core objects from the input file,
//! runs the requested computation, and returns a JSON report body plus a
//! pass/fail verdict for the exit code.

use crate::input::InputDto;
use crate::{CliFailure, Common, RunOutcome};
use fellkms_core::algebra::{kms_defect, positivity_check, trace_space};
use fellkms_core::cocycle::{OneCocycle, TwoCocycle};
use fellkms_core::groupoid::GroupoidRef;
use fellkms_core::interchange::{
    field_to_entries, functional_from_entries, measure_to_entries, one_cocycle_from_entries,
    two_cocycle_from_entries, PathDto, SubgroupDto,
};
use fellkms_core::kgraph::{
    adjacency_spectra, kms1_report, measure_cylinder_mass, omega_c, periodicity_group,
    FiniteKGraph, KGraphCocycle,
};
use fellkms_core::lattice::{z_omega, Bicharacter};
use fellkms_core::measure::quasi_invariant_extremes;
use fellkms_core::state::{
    check_condition_ii, extract_pair, gauge_vanishing_check, kms_simplex, roundtrip_defect,
};
use serde::Serialize;
use serde_json::{json, Value};

pub fn dispatch(name: &str, input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    match name {
        "groupoid validate" => groupoid_validate(input),
        "cocycle validate" => cocycle_validate(input, common),
        "kms simplex" => kms_simplex_cmd(input, common),
        "kms verify" => kms_verify_cmd(input, common),
        "trace space" => trace_space_cmd(input),
        "lattice zomega" => lattice_zomega(input),
        "kgraph per" => kgraph_per(input, common),
        "kgraph spectra" => kgraph_spectra(input, common),
        "kgraph measure" => kgraph_measure(input, common),
        "kgraph omega" => kgraph_omega(input, common),
        "kgraph kms1" => kgraph_kms1(input, common),
        _ => unreachable!("unknown command"),
    }
}

fn missing(field: &str) -> CliFailure {
    CliFailure::Malformed(format!("input file is missing the field {field:?}"))
}

fn need_groupoid(input: &InputDto) -> Result<GroupoidRef, CliFailure> {
    let dto = input.groupoid.as_ref().ok_or_else(|| missing("groupoid"))?;
    Ok(dto.to_groupoid()?)
}

fn build_two_cocycle(input: &InputDto, g: &GroupoidRef) -> Result<TwoCocycle, CliFailure> {
    match &input.two_cocycle {
        Some(entries) => Ok(two_cocycle_from_entries(g, entries)?),
        None => Ok(TwoCocycle::trivial(g.clone())),
    }
}

fn build_one_cocycle(input: &InputDto, g: &GroupoidRef) -> Result<OneCocycle, CliFailure> {
    match &input.one_cocycle {
        Some(entries) => Ok(one_cocycle_from_entries(g, entries)?),
        None => Ok(OneCocycle::zero(g.clone())),
    }
}

fn need_kgraph(input: &InputDto) -> Result<FiniteKGraph, CliFailure> {
    let dto = input.kgraph.as_ref().ok_or_else(|| missing("kgraph"))?;
    Ok(dto.to_kgraph()?)
}

fn need_kcocycle(
    input: &InputDto,
    g: &FiniteKGraph,
) -> Result<Box<dyn KGraphCocycle>, CliFailure> {
    let dto = input.cocycle.as_ref().ok_or_else(|| missing("cocycle"))?;
    Ok(dto.build(g)?)
}

fn kgraph_box(common: &Common, g: &FiniteKGraph) -> i64 {
    common
        .box_bound
        .unwrap_or(2 * g.n_vertices() as i64 * g.k() as i64)
}

fn validated_kgraph(input: &InputDto) -> Result<Result<FiniteKGraph, Value>, CliFailure> {
    let g = need_kgraph(input)?;
    let report = g.validate();
    if report.is_valid() {
        Ok(Ok(g))
    } else {
        Ok(Err(json!({ "valid": false, "violations": report.violations })))
    }
}

fn groupoid_validate(input: &InputDto) -> Result<RunOutcome, CliFailure> {
    let g = need_groupoid(input)?;
    let report = g.validate();
    let valid = report.is_valid();
    Ok(RunOutcome::Done(
        json!({ "valid": valid, "violations": report.violations }),
        valid,
    ))
}

fn cocycle_validate(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = need_groupoid(input)?;
    if input.two_cocycle.is_none() && input.one_cocycle.is_none() {
        return Err(missing("two_cocycle or one_cocycle"));
    }
    let groupoid_report = g.validate();
    let mut passed = groupoid_report.is_valid();
    let mut body = serde_json::Map::new();
    body.insert(
        "groupoid".into(),
        json!({ "valid": groupoid_report.is_valid(), "violations": groupoid_report.violations }),
    );
    if passed {
        if input.two_cocycle.is_some() {
            let sigma = build_two_cocycle(input, &g)?;
            let report = sigma.validate();
            passed &= report.is_valid();
            body.insert(
                "two_cocycle".into(),
                json!({ "valid": report.is_valid(), "violations": report.violations }),
            );
        }
        if input.one_cocycle.is_some() {
            let d = build_one_cocycle(input, &g)?;
            let report = d.validate(common.tol);
            passed &= report.is_valid();
            body.insert(
                "one_cocycle".into(),
                json!({ "valid": report.is_valid(), "violations": report.violations }),
            );
        }
    }
    Ok(RunOutcome::Done(Value::Object(body), passed))
}

#[derive(Serialize)]
struct KmsStateDto {
    orbit_base: i64,
    measure: Vec<(i64, f64)>,
    field: Vec<(i64, Vec<(i64, f64, f64)>)>,
    kms_defect: f64,
    positivity_min_eigenvalue: f64,
    condition_ii_violation: f64,
    extreme_certified: bool,
}

fn kms_simplex_cmd(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = need_groupoid(input)?;
    let sigma = build_two_cocycle(input, &g)?;
    let d = build_one_cocycle(input, &g)?;
    let beta = input.beta.ok_or_else(|| missing("beta"))?;
    let (extremes, verdicts) = quasi_invariant_extremes(&g, &d, beta, common.tol);
    let states = kms_simplex(&g, &sigma, &d, beta, common.tol)?;
    let mut passed = true;
    let state_dtos: Vec<KmsStateDto> = states
        .iter()
        .map(|s| {
            passed &= s.kms_defect <= common.tol
                && s.positivity_min_eigenvalue >= -common.tol
                && s.condition_ii_violation <= common.tol;
            KmsStateDto {
                orbit_base: s.orbit_base_id,
                measure: measure_to_entries(&s.measure),
                field: field_to_entries(&s.field),
                kms_defect: s.kms_defect,
                positivity_min_eigenvalue: s.positivity_min_eigenvalue,
                condition_ii_violation: s.condition_ii_violation,
                extreme_certified: s.extreme_certified,
            }
        })
        .collect();
    // admissible verdicts carry their extreme measure, in orbit order
    let mut extreme_iter = extremes.iter();
    let verdicts: Vec<Value> = verdicts
        .iter()
        .map(|v| {
            let measure = if v.admissible {
                extreme_iter.next().map(measure_to_entries)
            } else {
                None
            };
            json!({
                "orbit_base": v.base_unit_id,
                "admissible": v.admissible,
                "isotropy_defect": v.isotropy_defect,
                "measure": measure,
            })
        })
        .collect();
    Ok(RunOutcome::Done(
        json!({
            "beta": beta,
            "orbit_verdicts": verdicts,
            "states": state_dtos,
        }),
        passed,
    ))
}

fn kms_verify_cmd(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = need_groupoid(input)?;
    let sigma = build_two_cocycle(input, &g)?;
    let d = build_one_cocycle(input, &g)?;
    let beta = input.beta.ok_or_else(|| missing("beta"))?;
    let entries = input.functional.as_ref().ok_or_else(|| missing("functional"))?;
    let psi = functional_from_entries(&g, entries)?;

    let defect = kms_defect(&psi, &sigma, &d, beta)?;
    let positivity = positivity_check(&psi, &sigma, common.tol)?;
    let gauge = gauge_vanishing_check(&psi, &d, common.tol);
    let mut passed = defect.max_defect <= common.tol && positivity.is_positive && gauge.ok;

    let extraction = match extract_pair(&psi, common.tol) {
        Ok((mu, field)) => {
            let cond = check_condition_ii(&field, &mu, &sigma, common.tol)?;
            let roundtrip = roundtrip_defect(&psi, common.tol)?;
            let residual =
                fellkms_core::measure::quasi_invariance_residual(&mu, &d, beta);
            passed &= cond.ok && roundtrip <= common.tol && residual <= common.tol;
            json!({
                "ok": true,
                "measure": measure_to_entries(&mu),
                "field": field_to_entries(&field),
                "quasi_invariance_residual": residual,
                "roundtrip_defect": roundtrip,
                "condition_ii": {
                    "ok": cond.ok,
                    "max_violation": cond.max_violation,
                    "witness": cond.witness.as_ref().map(|w| {
                        json!({"unit": w.unit_id, "iso_arrow": w.iso_arrow_id, "eta": w.eta_arrow_id})
                    }),
                },
            })
        }
        Err(e) => {
            passed = false;
            json!({ "ok": false, "error": e.to_string() })
        }
    };

    Ok(RunOutcome::Done(
        json!({
            "beta": beta,
            "kms_defect": {
                "max_defect": defect.max_defect,
                "argmax_pair": defect.argmax_pair,
            },
            "positivity": {
                "is_positive": positivity.is_positive,
                "min_eigenvalue": positivity.min_eigenvalue,
                "hermiticity_defect": positivity.hermiticity_defect,
                "normalization": [positivity.normalization.re, positivity.normalization.im],
            },
            "gauge_vanishing": {
                "ok": gauge.ok,
                "witnesses": gauge.witnesses,
            },
            "extraction": extraction,
        }),
        passed,
    ))
}

fn trace_space_cmd(input: &InputDto) -> Result<RunOutcome, CliFailure> {
    let g = need_groupoid(input)?;
    let sigma = build_two_cocycle(input, &g)?;
    let space = trace_space(&g, &sigma)?;
    let basis: Vec<Vec<(i64, Option<String>)>> = space
        .basis
        .iter()
        .map(|b| {
            g.arrows()
                .map(|a| (g.arrow_id(a), b.value(a).map(|v| v.to_string())))
                .collect()
        })
        .collect();
    let extremes = match fellkms_core::algebra::extreme_tracial_states(&g, &sigma) {
        Ok(states) => json!({
            "exact": true,
            "count": states.len(),
            "states": states
                .iter()
                .map(|s| {
                    g.arrows()
                        .map(|a| (g.arrow_id(a), s.value(a).map(|v| v.to_string())))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        }),
        Err(e) => json!({ "exact": false, "reason": e.to_string() }),
    };
    Ok(RunOutcome::Done(
        json!({
            "dimension": space.dim(),
            "normalization_arrow": g.arrow_id(space.unit_arrow),
            "basis": basis,
            "extreme_tracial_states": extremes,
        }),
        true,
    ))
}

fn lattice_zomega(input: &InputDto) -> Result<RunOutcome, CliFailure> {
    let rank = input.rank.ok_or_else(|| missing("rank"))?;
    let theta = input.theta.clone().ok_or_else(|| missing("theta"))?;
    if theta.len() != rank {
        return Err(CliFailure::Malformed(
            "theta size does not match rank".into(),
        ));
    }
    let omega = Bicharacter::from_theta(theta)?;
    let z = z_omega(&omega);
    Ok(RunOutcome::Done(
        json!({
            "rank": rank,
            "z_omega": SubgroupDto::from_subgroup(&z),
        }),
        true,
    ))
}

fn kgraph_per(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = match validated_kgraph(input)? {
        Ok(g) => g,
        Err(body) => return Ok(RunOutcome::Done(body, false)),
    };
    let box_bound = kgraph_box(common, &g);
    let report = periodicity_group(&g, box_bound);
    Ok(RunOutcome::Done(
        json!({
            "box": box_bound,
            "certified": report.certified,
            "subgroup": SubgroupDto::from_subgroup(&report.subgroup),
            "note": "Per is reported within the box; generators outside it are not excluded",
        }),
        true,
    ))
}

fn kgraph_spectra(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = match validated_kgraph(input)? {
        Ok(g) => g,
        Err(body) => return Ok(RunOutcome::Done(body, false)),
    };
    let spectra = adjacency_spectra::<f64>(&g)?;
    let adjacency: Vec<Vec<Vec<i64>>> = spectra
        .adjacency
        .iter()
        .map(|a| {
            (0..a.rows)
                .map(|i| (0..a.cols).map(|j| a[(i, j)] as i64).collect())
                .collect()
        })
        .collect();
    let passed = spectra.eigen_residual <= common.tol;
    Ok(RunOutcome::Done(
        json!({
            "adjacency": adjacency,
            "spectral_radii": spectra.radii,
            "perron_vector": spectra.perron,
            "eigen_residual": spectra.eigen_residual,
        }),
        passed,
    ))
}

fn kgraph_measure(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = match validated_kgraph(input)? {
        Ok(g) => g,
        Err(body) => return Ok(RunOutcome::Done(body, false)),
    };
    let box_bound = kgraph_box(common, &g).max(0) as u32;
    let spectra = adjacency_spectra::<f64>(&g)?;
    let mut table = Vec::new();
    let mut additivity_residual = 0.0f64;
    for total in 0..=box_bound {
        for d in degree_vectors(g.k(), total) {
            for lambda in g.enumerate_paths(&d) {
                let mass = measure_cylinder_mass(&spectra, &lambda);
                // cylinder subdivision certificate per color
                for color in 0..g.k() {
                    let children: f64 = g
                        .edges_of_color(color)
                        .iter()
                        .filter(|&&e| g.edge(e).dst == lambda.source())
                        .map(|&e| {
                            let word = [e];
                            let ext = g
                                .compose_paths(&lambda, &g.path_from_word(&word).unwrap())
                                .unwrap();
                            measure_cylinder_mass(&spectra, &ext)
                        })
                        .sum();
                    additivity_residual = additivity_residual.max((children - mass).abs());
                }
                table.push(json!({
                    "path": PathDto::from_path(&g, &lambda),
                    "mass": mass,
                }));
            }
        }
    }
    let vertex_total: f64 = (0..g.n_vertices())
        .map(|v| measure_cylinder_mass(&spectra, &g.vertex_path(v)))
        .sum();
    let passed =
        additivity_residual <= common.tol && (vertex_total - 1.0).abs() <= common.tol;
    Ok(RunOutcome::Done(
        json!({
            "box": box_bound,
            "table": table,
            "additivity_residual": additivity_residual,
            "vertex_mass_total": vertex_total,
        }),
        passed,
    ))
}

fn degree_vectors(k: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(k, left - v, cur, out);
            cur.pop();
        }
    }
    rec(k, total, &mut Vec::new(), &mut out);
    out
}

fn omega_body(_g: &FiniteKGraph, report: &fellkms_core::kgraph::OmegaCReport) -> Value {
    let rank = report.omega.rank();
    let theta: Vec<Vec<String>> = (0..rank)
        .map(|i| (0..rank).map(|j| report.omega.theta(i, j).to_string()).collect())
        .collect();
    json!({
        "per": {
            "box": report.per.box_bound,
            "certified": report.per.certified,
            "subgroup": SubgroupDto::from_subgroup(&report.per.subgroup),
        },
        "theta_on_per_basis": theta,
        "z_omega_in_basis": SubgroupDto::from_subgroup(&report.z_in_basis),
        "z_omega_ambient": SubgroupDto::from_subgroup(&report.z_ambient),
        "second_base_point": report.second_base_point,
        "x_independence_ok": report.x_independence_ok,
    })
}

fn kgraph_omega(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = match validated_kgraph(input)? {
        Ok(g) => g,
        Err(body) => return Ok(RunOutcome::Done(body, false)),
    };
    let c = need_kcocycle(input, &g)?;
    let box_bound = kgraph_box(common, &g);
    let report = omega_c(&g, c.as_ref(), box_bound, common.depth)?;
    let passed = report.x_independence_ok;
    Ok(RunOutcome::Done(omega_body(&g, &report), passed))
}

fn kgraph_kms1(input: &InputDto, common: &Common) -> Result<RunOutcome, CliFailure> {
    let g = match validated_kgraph(input)? {
        Ok(g) => g,
        Err(body) => return Ok(RunOutcome::Done(body, false)),
    };
    let c = need_kcocycle(input, &g)?;
    let box_bound = kgraph_box(common, &g);
    let report = kms1_report::<f64>(
        &g,
        c.as_ref(),
        box_bound,
        common.depth,
        common.seed,
        common.samples,
    )?;
    let measure_table: Vec<Value> = report
        .measure_table
        .iter()
        .map(|(p, m)| json!({ "path": PathDto::from_path(&g, p), "mass": m }))
        .collect();
    let constraints: Vec<Value> = report
        .constraints
        .iter()
        .map(|c| {
            json!({
                "sample": c.sample_index,
                "p": c.p,
                "phase": c.phase.to_string(),
                "forces_zero": !c.phase.is_one(),
            })
        })
        .collect();
    let states: Vec<Value> = if report.unique_state {
        vec![json!({
            "name": "haar_trace",
            "phi": "W_p ↦ [p = 0]",
            "diagonal_cylinder_table": "see measure_table: ψ_Tr(1_{Z(λ,λ)}) = M(Z(λ))",
        })]
    } else {
        vec![json!({
            "name": "haar_trace",
            "phi": "W_p ↦ [p = 0]",
            "diagonal_cylinder_table": "see measure_table: ψ_Tr(1_{Z(λ,λ)}) = M(Z(λ))",
        }), json!({
            "name": "simplex_description",
            "free_phi_points": report.free_points,
            "forced_zero_points": report.forced_zero_points,
            "note": "states φ on C*(Z_ω) with φ(W_p) = 0 at forced points; completeness of extreme points is not claimed (sampled evidence)",
        })]
    };
    let passed = report.haar_violations == 0 && report.omega.x_independence_ok;
    Ok(RunOutcome::Done(
        json!({
            "omega": omega_body(&g, &report.omega),
            "spectral_radii": report.spectra.radii,
            "perron_vector": report.spectra.perron,
            "measure_table": measure_table,
            "z_box_points": report.z_box_points,
            "sampled_constraints": constraints,
            "haar_violations": report.haar_violations,
            "free_point_cylinders": report
                .free_point_cylinders
                .iter()
                .map(|(p, lam, mu)| {
                    json!({
                        "p": p,
                        "lambda": PathDto::from_path(&g, lam),
                        "mu": PathDto::from_path(&g, mu),
                    })
                })
                .collect::<Vec<_>>(),
            "unique_state": report.unique_state,
            "states": states,
        }),
        passed,
    ))
}

// ---------------------------------------------------------------------------

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn envelope(name: &str, common: &Common, raw_input: &str, body: Value) -> Value {
    let config = json!({
        "tol": common.tol,
        "box": common.box_bound,
        "depth": common.depth,
        "seed": common.seed,
        "samples": common.samples,
        "format": common.format,
    });
    let mut hash_input = Vec::new();
    hash_input.extend_from_slice(name.as_bytes());
    hash_input.extend_from_slice(config.to_string().as_bytes());
    hash_input.extend_from_slice(raw_input.as_bytes());
    json!({
        "tool": "fellkms",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "config": config,
        "config_hash": format!("{:016x}", fnv64(&hash_input)),
        "report": body,
    })
}

pub fn render_table(value: &Value) -> String {
    let mut lines = Vec::new();
    walk("", value, &mut lines);
    lines.join("\n") + "\n"
}

fn walk(prefix: &str, value: &Value, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                walk(&path, v, lines);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(&format!("{prefix}[{i}]"), v, lines);
            }
        }
        scalar => lines.push(format!("{prefix} = {scalar}")),
    }
}
