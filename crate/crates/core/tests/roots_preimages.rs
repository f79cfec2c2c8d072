use num_complex::Complex64;
use pil_core::poly_dynamics::{
    all_roots, basin_membership, critical_points, find_cycles, preimages, ClassifyOptions, BasinOptions, CycleKind,
    Polynomial, RootOptions, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coefficients of `∏ (x − r_k)`, ascending.
fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![z(1.0, 0.0)];
    for r in roots {
        let mut next = vec![z(0.0, 0.0); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

#[test]
fn recovers_planted_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let d = rng.gen_range(2..=7);
        let planted: Vec<Complex64> = (0..d).map(|_| z(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let found = all_roots(&from_roots(&planted), &RootOptions::default()).unwrap();
        let flat: Vec<Complex64> = found.iter().flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity)).collect();
        assert_eq!(flat.len(), d);
        for p in &planted {
            let err = flat.iter().map(|f| (f - p).norm()).fold(f64::INFINITY, f64::min);
            assert!(err < 1e-7, "planted {p} missed by {err:e}");
        }
    }
}

#[test]
fn planted_multiplicities() {
    let planted = [z(0.5, 0.5), z(0.5, 0.5), z(0.5, 0.5), z(-1.0, 0.0), z(-1.0, 0.0), z(2.0, -1.0)];
    let found = all_roots(&from_roots(&planted), &RootOptions::default()).unwrap();
    let mult: Vec<usize> = found.iter().map(|r| r.multiplicity).collect();
    assert_eq!(mult.iter().sum::<usize>(), 6);
    let triple = found.iter().find(|r| (r.value - z(0.5, 0.5)).norm() < 1e-6).unwrap();
    assert_eq!(triple.multiplicity, 3);
}

#[test]
fn seeds_do_not_change_simple_roots() {
    let c = from_roots(&[z(1.0, 0.0), z(-0.3, 0.7), z(0.0, -2.0)]);
    let a = all_roots(&c, &RootOptions::default()).unwrap();
    let b = all_roots(&c, &RootOptions { seed: 99, ..RootOptions::default() }).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.value - y.value).norm() < 1e-12);
    }
}

#[test]
fn preimages_of_forward_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let d = rng.gen_range(2..=5);
        let coeffs: Vec<Complex64> = (0..=d).map(|_| z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let Ok(p) = Polynomial::new(coeffs) else { continue };
        for _ in 0..10 {
            let x = z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let pre = preimages(&p, p.eval(x), &RootOptions::default()).unwrap();
            assert_eq!(pre.iter().map(|r| r.multiplicity).sum::<usize>(), p.degree());
            assert!(pre.iter().any(|r| (r.value - x).norm() < 1e-7));
        }
    }
}

#[test]
fn critical_points_of_known_maps() {
    let cubic = Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap();
    let cps = critical_points(&cubic, &RootOptions::default()).unwrap();
    let pts: Vec<f64> = cps.iter().map(|c| c.point.re).collect();
    assert!((pts[0] + 1.0).abs() < 1e-12 && (pts[1] - 1.0).abs() < 1e-12);
    let z4 = Polynomial::monomial(4).unwrap();
    let cps = critical_points(&z4, &RootOptions::default()).unwrap();
    assert_eq!(cps.len(), 1);
    assert_eq!(cps[0].ramification, 4);
}

#[test]
fn parabolic_quadratic_classification() {
    let p = Polynomial::from_real(&[0.0, 1.0, 1.0]).unwrap();
    let cycles = find_cycles(&p, 2, &RootOptions::default(), &ClassifyOptions::default()).unwrap();
    let fixed: Vec<_> = cycles.iter().filter(|c| c.period == 1).collect();
    assert_eq!(fixed.len(), 1);
    assert_eq!(fixed[0].kind, CycleKind::Parabolic(1));
    let v = basin_membership(&p, z(-0.5, 0.0), fixed[0], &BasinOptions::default()).unwrap();
    assert_eq!(v.verdict, Verdict::Inside);
    let v = basin_membership(&p, z(1.0, 0.0), fixed[0], &BasinOptions::default()).unwrap();
    assert_eq!(v.verdict, Verdict::Outside);
}

#[test]
fn multiplier_oracle_for_period_two() {
    // z^2 - 1 has the super-attracting 2-cycle {0, -1}; z^2 + c cycles of period 2
    // satisfy z^2 + z + c + 1 = 0 with multiplier 4(c + 1).
    for c in [-1.0, -0.9, 0.2, 1.3] {
        let p = Polynomial::from_real(&[c, 0.0, 1.0]).unwrap();
        let cycles = find_cycles(&p, 2, &RootOptions::default(), &ClassifyOptions::default()).unwrap();
        let two: Vec<_> = cycles.iter().filter(|k| k.period == 2).collect();
        assert_eq!(two.len(), 1, "c = {c}");
        assert!((two[0].multiplier - z(4.0 * (c + 1.0), 0.0)).norm() < 1e-8, "c = {c}");
    }
}
