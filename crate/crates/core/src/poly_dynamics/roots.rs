//! Simultaneous (Aberth–Ehrlich) root finding with Newton polishing and
//! multiplicity clustering.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::polynomial::{derivative, horner, horner_magnitude};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    /// Residual tolerance, relative to `1 + max|coefficient|`.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Roots closer than this (relative to their modulus) are merged outright.
    pub cluster_radius: f64,
    /// Seeds the angular offset of the initial circles.
    pub seed: u64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_sweeps: 200,
            cluster_radius: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All roots of the polynomial with ascending `coeffs`, with multiplicities
/// summing to its degree.
pub fn all_roots(coeffs: &[Complex64], opts: &RootOptions) -> Result<Vec<Root>> {
    let zero = Complex64::new(0.0, 0.0);
    let end = coeffs
        .iter()
        .rposition(|c| *c != zero)
        .ok_or_else(|| Error::invalid("the zero polynomial has no finite root set"))?;
    let coeffs = &coeffs[..=end];
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("non-finite coefficient"));
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Err(Error::invalid("degree must be >= 1"));
    }

    // Exact zero roots are split off so that they stay exact.
    let zeros = coeffs.iter().take_while(|c| **c == zero).count();
    let reduced = &coeffs[zeros..];
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(Root {
            value: zero,
            multiplicity: zeros,
        });
    }

    match reduced.len() - 1 {
        0 => {}
        1 => roots.push(Root {
            value: -reduced[0] / reduced[1],
            multiplicity: 1,
        }),
        _ => {
            let approx = aberth(reduced, opts)?;
            roots.extend(cluster(reduced, &approx, opts));
        }
    }

    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    debug_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), degree);
    Ok(roots)
}

/// Starting points on circles read off the Newton polygon of `|coeffs|`.
fn initial_guesses(coeffs: &[Complex64], seed: u64) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k as f64, c.norm().ln()))
        .collect();

    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = 0.7 + 0.1 * rng.gen::<f64>();
    let tau = std::f64::consts::TAU;
    let mut guesses = Vec::with_capacity(n);
    for edge in hull.windows(2) {
        let (k0, l0) = edge[0];
        let (k1, l1) = edge[1];
        let m = (k1 - k0) as usize;
        let radius = ((l0 - l1) / (k1 - k0)).exp();
        for j in 0..m {
            let angle = tau * j as f64 / m as f64 + tau * k0 / n as f64 + sigma;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn aberth(coeffs: &[Complex64], opts: &RootOptions) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let mut z = initial_guesses(&monic, opts.seed);
    let mut done = vec![false; n];

    let mut sweeps = 0;
    while sweeps < opts.max_sweeps && done.iter().any(|d| !d) {
        sweeps += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = horner(&monic, z[i]);
            if v.norm() <= 4.0 * EPS * horner_magnitude(&monic, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                // Coincident iterates or a vanishing derivative: nudge and retry next sweep.
                let nudge = Complex64::new(1e-6, 1e-6) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 2.0 * EPS * z[i].norm() {
                done[i] = true;
            }
        }
    }

    let scale = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for zi in z.iter_mut() {
        polish(&monic, zi);
        let residual = horner(coeffs, *zi).0.norm();
        let rounding = 64.0 * EPS * horner_magnitude(coeffs, *zi);
        if !zi.is_finite() || residual > (opts.tol * scale).max(rounding) {
            return Err(Error::NumericalFailure(format!(
                "root finder did not converge after {sweeps} sweeps: |p({zi})| = {residual:.3e} \
                 exceeds {:.3e} (degree {n})",
                (opts.tol * scale).max(rounding)
            )));
        }
    }
    Ok(z)
}

fn polish(coeffs: &[Complex64], z: &mut Complex64) {
    let mut best = horner(coeffs, *z).0.norm();
    for _ in 0..4 {
        let (v, dv) = horner(coeffs, *z);
        let step = v / dv;
        if !step.is_finite() {
            return;
        }
        let candidate = *z - step;
        let r = horner(coeffs, candidate).0.norm();
        if r < best {
            best = r;
            *z = candidate;
        } else {
            return;
        }
    }
}

/// A root of multiplicity `m` is a simple root of `p^{(m−1)}`; Newton there
/// recovers the digits lost to the cluster spread.
fn polish_multiple(coeffs: &[Complex64], z: Complex64, m: usize) -> Complex64 {
    let mut d = coeffs.to_vec();
    for _ in 1..m {
        d = derivative(&d);
    }
    let mut z = z;
    polish(&d, &mut z);
    z
}

/// Groups approximations of one multiple root.
///
/// Nearby approximations (within `1e-4` relative) form a candidate group; the
/// group is merged when its centroid is a root to rounding accuracy, which is
/// how a perturbed multiple root shows up in double precision. Approximations
/// within `cluster_radius` (relative) are merged regardless.
fn cluster(coeffs: &[Complex64], approx: &[Complex64], opts: &RootOptions) -> Vec<Root> {
    let n = approx.len();
    let near = |i: usize, j: usize, radius: f64| {
        let scale = approx[i].norm().max(approx[j].norm());
        (approx[i] - approx[j]).norm() <= radius * scale
    };
    let groups = components(n, |i, j| near(i, j, 1e-4));

    let mut roots = Vec::new();
    for group in groups {
        let centroid = group.iter().map(|&i| approx[i]).sum::<Complex64>() / group.len() as f64;
        let residual = horner(coeffs, centroid).0.norm();
        if group.len() > 1 && residual <= 8.0 * EPS * horner_magnitude(coeffs, centroid) {
            roots.push(Root {
                value: polish_multiple(coeffs, centroid, group.len()),
                multiplicity: group.len(),
            });
            continue;
        }
        let sub = components(group.len(), |a, b| near(group[a], group[b], opts.cluster_radius));
        for members in sub {
            let value = members.iter().map(|&a| approx[group[a]]).sum::<Complex64>()
                / members.len() as f64;
            roots.push(Root {
                value,
                multiplicity: members.len(),
            });
        }
    }
    roots
}

/// Connected components of the graph on `0..n` with edges where `linked` holds.
fn components(n: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if linked(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(i);
    }
    out
}
