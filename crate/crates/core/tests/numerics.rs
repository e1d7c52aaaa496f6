use multibrot_core::numerics::solvers::{center_residual, misiurewicz_degeneracy, misiurewicz_residual};
use multibrot_core::numerics::*;
use multibrot_core::tuning::decoration_angles;
use multibrot_core::combinatorics::shared_lamination;
use multibrot_core::{Angle, ComponentSignature, Config, Error, RayPair};
use num_complex::Complex64 as C;

fn a(p: u64, q: u64) -> Angle {
    Angle::frac(p, q)
}

fn pair(p: u64, q: u64, r: u64, s: u64) -> RayPair {
    RayPair::new(a(p, q), a(r, s)).unwrap()
}

/// Coefficients (constant first) of `p_c^m(0)` as a polynomial in `c`.
fn critical_polynomial(m: usize) -> Vec<f64> {
    let mut p = vec![0.0];
    for _ in 0..m {
        let mut sq = vec![0.0; 2 * p.len() - 1];
        for (i, x) in p.iter().enumerate() {
            for (j, y) in p.iter().enumerate() {
                sq[i + j] += x * y;
            }
        }
        if sq.len() < 2 {
            sq.resize(2, 0.0);
        }
        sq[1] += 1.0;
        p = sq;
    }
    p
}

/// All complex roots of a real polynomial by Durand–Kerner.
fn roots(coeffs: &[f64]) -> Vec<C> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let lead = *c.last().unwrap();
    let n = c.len() - 1;
    let eval = |z: C| c.iter().rev().fold(C::new(0.0, 0.0), |acc, &k| acc * z + k) / lead;
    let seed = C::new(0.4, 0.9);
    let mut zs: Vec<C> = (0..n).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..2000 {
        let prev = zs.clone();
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(C::new(1.0, 0.0), |acc, j| acc * (zs[i] - zs[j]));
            let z = zs[i];
            zs[i] = z - eval(z) / denom;
        }
        if zs.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15) {
            break;
        }
    }
    zs
}

fn misiurewicz_roots(l: usize, k: usize) -> Vec<C> {
    let hi = critical_polynomial(l + k);
    let lo = critical_polynomial(l);
    let diff: Vec<f64> = (0..hi.len()).map(|i| hi[i] - lo.get(i).copied().unwrap_or(0.0)).collect();
    roots(&diff)
}

#[test]
fn misiurewicz_solver_matches_root_enumeration() {
    let cfg = Config::default();
    // (1, 1): c^2 = 0, only the center 0.
    for r in misiurewicz_roots(1, 1) {
        assert!(misiurewicz_degeneracy(2, r, 1, 1).is_some(), "{r}");
    }
    // (3, 1): every valid root is found from a nearby seed, and nothing else is.
    let valid: Vec<C> = misiurewicz_roots(3, 1)
        .into_iter()
        .filter(|&r| misiurewicz_degeneracy(2, r, 3, 1).is_none())
        .collect();
    assert!(!valid.is_empty());
    for r in &valid {
        let found = find_misiurewicz(3, 1, r + C::new(1e-3, -1e-3), &cfg).unwrap();
        assert!((found - r).norm() < 1e-8, "{found} vs {r}");
        assert!(misiurewicz_residual(found, 3, 1) < 1e-12);
    }
    let m = find_misiurewicz(3, 1, C::new(-0.2, 1.1), &cfg).unwrap();
    assert!(valid.iter().any(|r| (r - m).norm() < 1e-8));
}

#[test]
fn center_solver_matches_root_enumeration() {
    let cfg = Config::default();
    for r in roots(&critical_polynomial(4)) {
        let c = find_center(4, r + C::new(1e-4, 1e-4), &cfg).unwrap();
        assert!((c - r).norm() < 1e-8);
        assert!(center_residual(c, 4) < 1e-12);
    }
}

#[test]
fn parameter_ray_landings() {
    let cfg = Config::default();
    let land = |t: Angle| {
        let tr = trace_parameter_ray(&t, cfg.ray_depth, &cfg).unwrap();
        assert!(tr.converged, "{t}");
        tr.landing_estimate
    };
    assert!((land(a(0, 1)) - C::new(0.25, 0.0)).norm() < 1e-4);
    let m = find_misiurewicz(2, 1, C::new(-1.9, 0.0), &cfg).unwrap();
    assert!((land(a(1, 2)) - m).norm() < 1e-4);
    assert!((land(a(1, 3)) - C::new(-0.75, 0.0)).norm() < 1e-4);
}

#[test]
fn parameter_trace_invariants() {
    let cfg = Config::default();
    let tr = trace_parameter_ray(&a(1, 7), cfg.ray_depth, &cfg).unwrap();
    assert!(tr.potentials.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(tr.points.len(), tr.potentials.len());
    let csv = tr.to_csv();
    assert!(csv.starts_with("potential,re,im\n"));
    assert_eq!(csv.lines().count(), tr.points.len() + 1);
}

#[test]
fn dynamic_ray_landings() {
    let cfg = Config::default();
    let tr = trace_dynamic_ray(C::new(0.0, 0.0), &a(1, 3), cfg.ray_depth, &cfg).unwrap();
    assert!(tr.converged);
    assert!((tr.landing_estimate - C::from_polar(1.0, std::f64::consts::TAU / 3.0)).norm() < 1e-6);

    let tr = trace_dynamic_ray(C::new(-2.0, 0.0), &a(1, 2), cfg.ray_depth, &cfg).unwrap();
    let z = tr.landing_estimate;
    assert!(tr.converged && z.im.abs() < 1e-6 && z.re.abs() <= 2.0 + 1e-6);

    let rabbit = find_center(3, C::new(-0.12, 0.74), &cfg).unwrap();
    let lands: Vec<C> = [a(1, 7), a(2, 7), a(4, 7)]
        .iter()
        .map(|t| trace_dynamic_ray(rabbit, t, cfg.ray_depth, &cfg).unwrap().landing_estimate)
        .collect();
    for z in &lands {
        assert!((z - lands[0]).norm() < 1e-6);
        assert!((z * z + rabbit - z).norm() < 1e-8);
    }
}

#[test]
fn degree_three_dynamic_rays_are_radial_at_zero() {
    let cfg = Config::default();
    let tr = trace_dynamic_ray_degree(3, C::new(0.0, 0.0), &a(1, 4), 30, &cfg).unwrap();
    assert!((tr.landing_estimate - C::new(0.0, 1.0)).norm() < 1e-6);
}

#[test]
fn ray_pair_verification() {
    let cfg = Config::default();
    let param = RayKind::Parameter;
    assert!(verify_ray_pair(&pair(1, 3, 2, 3), param, 1e-6, &cfg).unwrap());
    assert!(verify_ray_pair(&pair(1, 7, 2, 7), param, 1e-6, &cfg).unwrap());
    assert!(!verify_ray_pair(&pair(1, 7, 3, 7), param, 1e-6, &cfg).unwrap());
    assert!(!verify_ray_pair(&pair(1, 15, 4, 15), param, 1e-6, &cfg).unwrap());
    let basilica = C::new(-1.0, 0.0);
    assert!(verify_ray_pair(&pair(1, 3, 2, 3), RayKind::Dynamic(basilica), 1e-6, &cfg).unwrap());
    assert!(!verify_ray_pair(&pair(1, 7, 2, 7), RayKind::Dynamic(basilica), 1e-6, &cfg).unwrap());
}

#[test]
fn truncated_traces_are_inconclusive() {
    let cfg = Config {
        ray_depth: 3,
        ..Config::default()
    };
    let r = verify_ray_pair(&pair(1, 7, 2, 7), RayKind::Parameter, 1e-6, &cfg);
    assert!(matches!(r, Err(Error::Inconclusive(_))), "{r:?}");
}

#[test]
fn lamination_pairs_land_together() {
    let cfg = Config::default();
    let lam = shared_lamination(6, 20).unwrap();
    for p in lam.pairs_up_to(6) {
        assert!(verify_ray_pair(&p, RayKind::Parameter, 1e-6, &cfg).unwrap(), "{p}");
    }
}

#[test]
fn basilica_decorations_land_at_misiurewicz_points() {
    let cfg = Config::default();
    let basilica: ComponentSignature = "2:1/3".parse().unwrap();
    for p in decoration_angles(&basilica, 2).unwrap() {
        let ends: Vec<_> = [&p.minus, &p.plus]
            .iter()
            .map(|t| trace_parameter_ray(t, cfg.ray_depth, &cfg).unwrap())
            .collect();
        assert!(ends.iter().all(|t| t.converged), "{p}");
        let (z0, z1) = (ends[0].landing_estimate, ends[1].landing_estimate);
        assert!((z0 - z1).norm() < 1e-4, "{p}: {z0} {z1}");
        let orbit = p.minus.orbit(2).unwrap();
        let (l, k) = (orbit.preperiod as u32 + 1, orbit.period as u32);
        let m = (1..=k)
            .filter(|m| k % m == 0)
            .find_map(|m| find_misiurewicz(l, m, z0, &cfg).ok().map(|c| (c, m)));
        let (c, m) = m.unwrap_or_else(|| panic!("{p}: no Misiurewicz root near {z0}"));
        assert!((c - z0).norm() < 1e-4 && misiurewicz_residual(c, l, m) < 1e-9, "{p}");
    }
}

#[test]
fn puzzle_examples() {
    let cfg = Config::default();
    let airplane = find_center(3, C::new(-1.7, 0.0), &cfg).unwrap();
    let alpha = (C::new(1.0, 0.0) - (C::new(1.0, 0.0) - airplane * 4.0).sqrt()) / 2.0;
    let pairs = [pair(3, 7, 4, 7), pair(1, 7, 6, 7), pair(2, 7, 5, 7)];
    let r = puzzle_diameters(airplane, &pairs, alpha, 8, &cfg).unwrap();
    assert!(!r.truncated);
    assert_eq!(r.diameters.len(), 9);
    assert!(r.diameters.windows(2).all(|w| w[1] <= w[0]), "{:?}", r.diameters);
    assert!(r.diameters[8] / r.diameters[0] < 0.5);

    let r0 = puzzle_diameters(airplane, &pairs, alpha, 0, &cfg).unwrap();
    assert_eq!(r0.diameters, vec![r.diameters[0]]);

    let r = puzzle_diameters(C::new(-2.0, 0.0), &[pair(1, 3, 2, 3)], C::new(0.5, 0.0), 6, &cfg).unwrap();
    assert!(!r.truncated);
    assert!(r.diameters.windows(2).all(|w| w[1] <= w[0]), "{:?}", r.diameters);
}

#[test]
fn pieces_reject_pairs_that_do_not_land_together() {
    let cfg = Config::default();
    let groups = vec![vec![a(1, 7), a(2, 7)]];
    let r = PiecePartition::new(C::new(-1.0, 0.0), &groups, &cfg);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn mandelbrot_render_has_interior_at_origin() {
    let spec = RenderSpec::parameter(Region::new(-2.5, 1.0, -1.25, 1.25).unwrap(), 800, 600, 500);
    let img = render(&spec, &[]).unwrap();
    let (x, y) = spec.pixel_of(C::new(0.0, 0.0)).unwrap();
    assert_eq!(img.get(x, y), 0);
    let (x, y) = spec.pixel_of(C::new(0.9, 1.0)).unwrap();
    assert!(img.get(x, y) > 0);
    assert_eq!(img, render(&spec, &[]).unwrap());
}

#[test]
fn airplane_render_with_ray_overlays() {
    let cfg = Config::default();
    let airplane = find_center(3, C::new(-1.7, 0.0), &cfg).unwrap();
    let spec = RenderSpec {
        kind: RayKind::Dynamic(airplane),
        ..RenderSpec::parameter(Region::around(C::new(0.0, 0.0), 2.0).unwrap(), 200, 200, 200)
    };
    let overlays: Vec<Overlay> = [a(1, 7), a(2, 7), a(4, 7)]
        .iter()
        .map(|t| Overlay {
            points: trace_dynamic_ray(airplane, t, cfg.ray_depth, &cfg).unwrap().points,
            shade: 200,
        })
        .collect();
    let img = render(&spec, &overlays).unwrap();
    assert!(img.pixels.iter().filter(|&&p| p == 200).count() > 50);
}
