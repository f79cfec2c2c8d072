use num_complex::Complex64;
use pil_core::boundary_models::{
    boundary_signature, check_denjoy_wolff, conjugacy_residual, proximity_bits, PhiInverseTable,
};
use pil_core::plaque_engine::{
    component_census, index_sequence, pullback_tower, rh_check, signature_estimate, BackwardOrbit, Disk,
};
use pil_core::poly_dynamics::{basin_membership, critical_points, find_cycles, Polynomial, RootOptions};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{OrbitSpec, RunConfig, Task};
use crate::emit::{fmt_f64, Table};
use crate::{CliError, SCHEMA_VERSION};

/// Largest level written inline into blaschke-conj JSON.
const INLINE_TABLE: u64 = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    pub table: Table,
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize to JSON")
}

fn merge(into: &mut Map<String, Value>, v: Value) {
    if let Value::Object(m) = v {
        into.extend(m);
    }
}

fn orbit(p: &Polynomial, spec: &OrbitSpec, len: usize, roots: &RootOptions) -> pil_core::Result<BackwardOrbit> {
    match spec {
        OrbitSpec::Fixed(x) => BackwardOrbit::fixed_point(p, *x, len),
        OrbitSpec::Cycle(c) => BackwardOrbit::cycle(p, c, len),
        OrbitSpec::Nearest { x1, anchor } => BackwardOrbit::nearest_to(p, *x1, *anchor, len, roots),
    }
}

fn c(z: Complex64) -> [String; 2] {
    [fmt_f64(z.re), fmt_f64(z.im)]
}

/// Runs the configured task. Identical configs give identical outputs.
pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let roots = cfg.roots();
    let mut obj = Map::new();
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(cfg.task.name()));
    obj.insert("seed".into(), json!(cfg.seed));

    let table = match &cfg.task {
        Task::Classify { poly, max_period, classify, basin } => {
            let cycles = find_cycles(poly, *max_period, &roots, classify)?;
            let crit = critical_points(poly, &roots)?;
            let mut critical = Vec::with_capacity(crit.len());
            for cp in &crit {
                let mut basins = Vec::new();
                for (i, cyc) in cycles.iter().enumerate() {
                    if cyc.kind.is_attracting_or_parabolic() {
                        let v = basin_membership(poly, cp.point, cyc, basin)?;
                        basins.push(json!({"cycle": i, "verdict": v.verdict, "iterations_used": v.iterations_used}));
                    }
                }
                critical.push(json!({"point": cp.point, "ramification": cp.ramification, "basins": basins}));
            }
            obj.insert("polynomial".into(), json!(poly.to_string()));
            obj.insert("max_period".into(), json!(max_period));
            obj.insert("cycles".into(), value(&cycles));
            obj.insert("critical".into(), Value::Array(critical));

            let mut t = Table::new(&["cycle", "period", "kind", "multiplier_re", "multiplier_im", "point_re", "point_im"]);
            for (i, cyc) in cycles.iter().enumerate() {
                let [mre, mim] = c(cyc.multiplier);
                for z in &cyc.points {
                    let [re, im] = c(*z);
                    t.push(vec![i.to_string(), cyc.period.to_string(), cyc.kind.to_string(), mre.clone(), mim.clone(), re, im]);
                }
            }
            t
        }

        Task::Index { poly, orbit: spec, critical, radius, levels, tower: opts } => {
            let orbit = orbit(poly, spec, *levels, &roots)?;
            let tower = pullback_tower(poly, &orbit, Disk::new(orbit.point(1), *radius)?, *levels, opts)?;
            let targets: Vec<Complex64> = match critical {
                Some(c) => vec![*c],
                None => tower.critical.iter().map(|cp| cp.point).collect(),
            };
            let indices = targets
                .iter()
                .map(|&c| Ok(json!({"critical": c, "window": index_sequence(&tower, c)?})))
                .collect::<pil_core::Result<Vec<_>>>()?;
            let levels_json: Vec<Value> = tower
                .levels
                .iter()
                .map(|l| {
                    json!({
                        "n": l.n,
                        "center": l.center,
                        "t": l.t,
                        "cumulative_degree": l.cumulative_degree.to_string(),
                        "vertices": l.offsets.len(),
                        "containment": l.containment,
                        "center_winding": l.center_winding,
                    })
                })
                .collect();
            obj.insert("polynomial".into(), json!(poly.to_string()));
            obj.insert("orbit".into(), value(orbit.policy()));
            obj.insert("radius".into(), json!(tower.radius));
            obj.insert("requested_depth".into(), json!(tower.requested_depth));
            obj.insert("depth".into(), json!(tower.depth()));
            obj.insert("truncation".into(), value(&tower.truncation));
            obj.insert("levels".into(), Value::Array(levels_json));
            obj.insert("indices".into(), Value::Array(indices));
            obj.insert("rh".into(), value(&rh_check(&tower)));

            let mut t = Table::new(&["level", "vertex", "re", "im"]);
            for l in &tower.levels {
                for (k, z) in l.polyline().into_iter().enumerate() {
                    let [re, im] = c(z);
                    t.push(vec![l.n.to_string(), k.to_string(), re, im]);
                }
            }
            t
        }

        Task::Signature { poly, orbit: spec, critical, params } => {
            let depths = params.depths()?;
            let len = depths.iter().copied().max().unwrap_or(1);
            let orbit = orbit(poly, spec, len, &roots)?;
            let est = signature_estimate(poly, &orbit, *critical, params)?;
            obj.insert("polynomial".into(), json!(poly.to_string()));
            obj.insert("critical".into(), json!(critical));
            obj.insert("depths".into(), json!(depths));
            merge(&mut obj, value(&est.report));
            obj.insert("rings".into(), value(&est.rings));

            let mut t = Table::new(&["ring", "radius", "requested_depth", "depth", "window"]);
            for r in &est.rings {
                t.push(vec![
                    r.j.to_string(),
                    fmt_f64(r.radius),
                    r.requested_depth.to_string(),
                    r.window.depth().to_string(),
                    r.window.to_string(),
                ]);
            }
            t
        }

        Task::Census { poly, orbit: spec, radius, w, levels, tower: opts } => {
            let orbit = orbit(poly, spec, *levels, &roots)?;
            let v = pullback_tower(poly, &orbit, Disk::new(orbit.point(1), *radius)?, *levels, opts)?;
            let reachable = (*levels).min(v.depth());
            let census = component_census(*w, &v, reachable, opts, cfg.exec)?;
            obj.insert("polynomial".into(), json!(poly.to_string()));
            obj.insert("v_radius".into(), json!(v.radius));
            obj.insert("v_depth".into(), json!(v.depth()));
            obj.insert("v_truncation".into(), value(&v.truncation));
            obj.insert("w".into(), value(w));
            obj.insert("levels".into(), value(&census));

            let mut t = Table::new(&["level", "count"]);
            for l in &census {
                t.push(vec![l.n.to_string(), l.count.to_string()]);
            }
            t
        }

        Task::BlaschkeConj { product, depth } => {
            let dw = check_denjoy_wolff(product, 1e-9)?;
            let table = PhiInverseTable::build(product.clone(), *depth, cfg.exec)?;
            let residual = conjugacy_residual(product, *depth, cfg.exec)?;
            let level = table.level(*depth).expect("table was built to this depth");
            obj.insert("degree".into(), json!(product.degree()));
            obj.insert("denjoy_wolff".into(), value(&dw));
            obj.insert("depth".into(), json!(depth));
            obj.insert("residual".into(), json!(residual));
            obj.insert(
                "turns".into(),
                if (level.len() as u64) <= INLINE_TABLE { json!(level) } else { Value::Null },
            );

            let mut t = Table::new(&["k", "turns", "re", "im"]);
            for (k, &x) in level.iter().enumerate() {
                let [re, im] = c(Complex64::from_polar(1.0, std::f64::consts::TAU * x));
                t.push(vec![k.to_string(), fmt_f64(x), re, im]);
            }
            t
        }

        Task::AngleBits { theta, d, eps, len } => {
            let bits = proximity_bits(theta, *d, *eps, *len)?;
            obj.insert("theta".into(), json!(theta.to_string()));
            obj.insert("d".into(), json!(d));
            obj.insert("eps".into(), json!(eps));
            obj.insert("len".into(), json!(len));
            merge(&mut obj, value(&bits));

            let mut t = Table::new(&["n", "bit"]);
            for n in 1..=*len {
                t.push(vec![n.to_string(), u8::from(bits.window.bit(n) == Some(true)).to_string()]);
            }
            t
        }

        Task::BoundarySig { theta, d, eps0, steps, len } => {
            let report = boundary_signature(theta, *d, *eps0, *steps, *len)?;
            obj.insert("theta".into(), json!(theta.to_string()));
            obj.insert("d".into(), json!(d));
            obj.insert("eps0".into(), json!(eps0));
            obj.insert("steps".into(), json!(steps));
            merge(&mut obj, value(&report));

            let mut t = Table::new(&["t", "eps", "meet"]);
            for (i, m) in report.chain.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), fmt_f64(eps0 * 0.5f64.powi(i as i32 + 1)), m.to_string()]);
            }
            t
        }
    };

    Ok(Output {
        json: Value::Object(obj),
        table,
    })
}
