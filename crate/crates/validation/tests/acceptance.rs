//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lorentzlattice::analysis::{
    coefficient_residuals, encoding_uniqueness_search, fit_loglog, kg_decoupling_residual, order_fit,
    second_order_counterexample, OrderOutcome,
};
use lorentzlattice::lattice::{LightCoord, SpacetimeField};
use lorentzlattice::lorentz::nonhomog::{nonhomog_transform, rescaled_step_counts, GateNetwork};
use lorentzlattice::lorentz::{
    covariance_residual, lorentz_transform_field, observer_rescaling, unzoom_field, EncodingPair, LorentzParams,
};
use lorentzlattice::models::evolve::{evolve_model, InitialLayer};
use lorentzlattice::models::{ClockWalkSpec, InnerCoin, Model, QcaBasis};
use lorentzlattice::observables::{
    surface_norm, swap_move, transform_surface, velocity_addition_check, CauchySurface, Step,
};
use lorentzlattice::Window;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_layer(rng: &mut ChaCha8Rng, sites: usize, dp: usize, dm: usize) -> InitialLayer {
    let mut gen = |d: usize| -> Vec<Vec<C64>> {
        (0..sites)
            .map(|_| (0..d).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect()
    };
    let mut plus = gen(dp);
    let mut minus = gen(dm);
    let n: f64 = plus.iter().chain(&minus).flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for v in plus.iter_mut().chain(minus.iter_mut()).flatten() {
        *v /= n;
    }
    InitialLayer { t0: 0, r_start: 0, plus, minus }
}

fn c1_clock_qw_exact() -> Outcome {
    let mut worst = 0.0f64;
    for p in 1..=2 {
        for q in 1..=2 {
            let model = Model::ClockQw { p, q, coin: InnerCoin::from_mass(1.3, 0.17), eps: 0.17 };
            for alpha in 1..=3 {
                for beta in 1..=3 {
                    let params = LorentzParams::for_model(&model, alpha, beta).map_err(|e| e.to_string())?;
                    let mapped = params.mapped_model(&model).map_err(|e| e.to_string())?;
                    if mapped.wire_dims() != (alpha * p, beta * q) {
                        return Err(format!("({p},{q}) mapped to {:?} under ({alpha},{beta})", mapped.wire_dims()));
                    }
                    let pair = EncodingPair::for_model(&model, alpha, beta).map_err(|e| e.to_string())?;
                    worst = worst.max(covariance_residual(&model, &params, &pair).map_err(|e| e.to_string())?);
                }
            }
        }
    }
    check(worst < 1e-12, format!("max residual {worst:.3e} over 36 cases (< 1e-12)"))
}

fn c2_clock_qca_exact() -> Outcome {
    let model = Model::ClockQca { coin: InnerCoin::from_mass(0.9, 0.3), eps: 0.3 };
    let mut worst = 0.0f64;
    for alpha in 1..=3 {
        for beta in 1..=3 {
            let params = LorentzParams::for_model(&model, alpha, beta).map_err(|e| e.to_string())?;
            let pair = EncodingPair::for_model(&model, alpha, beta).map_err(|e| e.to_string())?;
            worst = worst.max(covariance_residual(&model, &params, &pair).map_err(|e| e.to_string())?);
        }
    }
    check(worst < 1e-12, format!("max residual {worst:.3e} over 9 cases, patch inputs up to 3^6 (< 1e-12)"))
}

fn c3_dirac_first_order() -> Outcome {
    let sweep = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut parts = Vec::new();
    let mut ok = true;
    for (alpha, beta) in [(2, 1), (1, 2), (2, 3)] {
        let residual = |eps: f64| {
            let model = Model::Dirac { m: 1.0, eps };
            let params = LorentzParams::for_model(&model, alpha, beta)?;
            let pair = EncodingPair::for_model(&model, alpha, beta)?;
            covariance_residual(&model, &params, &pair)
        };
        let smallest = residual(1e-4).map_err(|e| e.to_string())?;
        let OrderOutcome::Fit(fit) = order_fit(residual, &sweep).map_err(|e| e.to_string())? else {
            return Err(format!("({alpha},{beta}) reported exact"));
        };
        ok &= (fit.slope - 2.0).abs() <= 0.1 && smallest > 1e-13;
        parts.push(format!("({alpha},{beta}) slope {:.4} r2 {:.6} res(1e-4) {smallest:.3e}", fit.slope, fit.r_squared));
    }
    check(ok, parts.join("; "))
}

/// Direct evaluation of the first-order residual, written out for α=2, β=1.
fn grid_residual_2_1(vp: C64, v0: C64, v1: C64, m: f64) -> f64 {
    let mp = m / 2f64.sqrt();
    let a = m * vp - mp * (v0 + v1);
    let b = m * v0 - mp * vp;
    let c = m * v1 - mp * vp;
    a.norm_sqr() + b.norm_sqr() + c.norm_sqr()
}

fn c4_uniqueness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (alpha, beta) in [(2, 1), (3, 2)] {
        let r = encoding_uniqueness_search(alpha, beta, 1.0, 1e-3, 11).map_err(|e| e.to_string())?;
        let good = r.flat_residual < 1e-10
            && r.floor >= 10.0 * r.flat_residual
            && r.floor > 0.0
            && r.best.first_order_residual < 1e-10;
        ok &= good;
        parts.push(format!(
            "({alpha},{beta}) flat {:.2e} floor {:.3e} over {} candidates, best at distance {:.1e}",
            r.flat_residual, r.floor, r.candidates_tested, r.best_distance
        ));
    }
    // dense grid over the (2,1) spheres, up to a global phase
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let flat_res = grid_residual_2_1(C64::new(1.0, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), 1.0);
    let n = 48;
    let mut grid_floor = f64::INFINITY;
    for i in 0..=n {
        let chi = std::f64::consts::FRAC_PI_2 * i as f64 / n as f64;
        for j in 0..n {
            let phi0 = std::f64::consts::TAU * j as f64 / n as f64;
            for k in 0..n {
                let phi1 = std::f64::consts::TAU * k as f64 / n as f64;
                let (vp, v0, v1) =
                    (C64::new(1.0, 0.0), C64::from_polar(chi.cos(), phi0), C64::from_polar(chi.sin(), phi1));
                let overlap = vp + h * (v0 + v1);
                let d = (4.0 - 2.0 * overlap.norm()).max(0.0).sqrt();
                if d >= 0.1 {
                    grid_floor = grid_floor.min(grid_residual_2_1(vp, v0, v1, 1.0));
                }
            }
        }
    }
    ok &= flat_res < 1e-10 && grid_floor >= 10.0 * flat_res && grid_floor > 0.0;
    parts.push(format!("(2,1) dense-grid floor {grid_floor:.3e}"));
    check(ok, parts.join("; "))
}

fn c5_counterexample() -> Outcome {
    let sweep = [1e-1, 1e-2, 1e-3, 1e-4];
    let ces = sweep
        .iter()
        .map(|&e| second_order_counterexample(1.0, e))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let by_eps: Vec<f64> = ces.iter().map(|c| c.gap_over_eps).collect();
    let decreasing = by_eps.windows(2).all(|w| w[1] < w[0]) && by_eps[3] < 1e-3;
    let by_eps2: Vec<f64> = ces[1..].iter().map(|c| c.gap_over_eps2).collect();
    let (lo, hi) = by_eps2.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    let agree = (hi - lo) / lo < 0.01;
    // closed-form limit m²/(2√2)
    let limit = 1.0 / (2.0 * 2f64.sqrt());
    let near_limit = (by_eps2[2] - limit).abs() / limit < 1e-3;
    let massless = second_order_counterexample(0.0, 1e-2).map_err(|e| e.to_string())?.gap;
    check(
        decreasing && agree && near_limit && massless == 0.0,
        format!(
            "gap/eps {}; gap/eps^2 {} (limit {limit:.6}); m=0 gap {massless}",
            fmt_list(&by_eps, 3),
            fmt_list(&by_eps2, 6)
        ),
    )
}

fn fmt_list(v: &[f64], digits: usize) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.digits$e}")).collect();
    format!("[{}]", items.join(", "))
}

fn surface_for(f: &SpacetimeField) -> CauchySurface {
    let (xmin, xmax) = f.window().x_range();
    CauchySurface::alternating(LightCoord::new(0, 0), xmin - 2, (xmax - xmin + 4) as usize)
}

/// Applies `count` random forward swaps (RL → LR) inside the support band.
fn deform(s: &CauchySurface, rng: &mut ChaCha8Rng, count: usize, lo: i64, hi: i64) -> CauchySurface {
    let mut cur = s.clone();
    let mut done = 0;
    while done < count {
        let n = rng.gen_range(lo..hi);
        if cur.label(n) == Step::R && cur.label(n + 1) == Step::L {
            cur = swap_move(&cur, n).expect("valid pair");
            done += 1;
        }
    }
    cur
}

fn c6_norms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_swap = 0.0f64;
    let mut worst_boost = 0.0f64;
    for trial in 0..20 {
        let m = rng.gen_range(0.2..2.0);
        let model = Model::Dirac { m, eps: 0.1 };
        let init = random_layer(&mut rng, 64, 1, 1);
        let f = evolve_model(&model, &init, 24).map_err(|e| e.to_string())?;
        let base = surface_for(&f);
        let n0 = surface_norm(&f, &base).map_err(|e| e.to_string())?.value;
        if (n0 - 1.0).abs() > 1e-12 {
            return Err(format!("trial {trial}: t=0 surface norm {n0}"));
        }
        let mut surfaces = vec![base.clone()];
        for _ in 0..10 {
            let count = rng.gen_range(1..=20);
            surfaces.push(deform(&base, &mut rng, count, -70, 70));
        }
        for s in &surfaces[1..] {
            let v = surface_norm(&f, s).map_err(|e| format!("trial {trial}: {e}"))?.value;
            worst_swap = worst_swap.max((v - n0).abs());
        }
        // boosts, each on one of the surfaces
        for alpha in 1..=3 {
            for beta in 1..=3 {
                let params = LorentzParams::for_model(&model, alpha, beta).map_err(|e| e.to_string())?;
                let g = lorentz_transform_field(&f, &model, &params).map_err(|e| e.to_string())?;
                let s = &surfaces[(alpha * 3 + beta) % surfaces.len()];
                let before = surface_norm(&f, s).map_err(|e| e.to_string())?.value;
                let after = surface_norm(&g, &transform_surface(s, alpha, beta)).map_err(|e| e.to_string())?.value;
                worst_boost = worst_boost.max((after - before).abs());
            }
        }
    }
    check(
        worst_swap < 1e-12 && worst_boost < 1e-12,
        format!("swap deviation {worst_swap:.3e}, boost deviation {worst_boost:.3e} (< 1e-12)"),
    )
}

fn c7_velocity_addition() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..37 {
        let v = -0.9 + 1.8 * k as f64 / 36.0;
        for alpha in 1..=3 {
            for beta in 1..=3 {
                let (measured, predicted) = velocity_addition_check(v, alpha, beta);
                let u = (alpha as f64 - beta as f64) / (alpha + beta) as f64;
                let mobius = (v + u) / (1.0 + v * u);
                worst = worst.max((measured - predicted).abs()).max((predicted - mobius).abs());
            }
        }
    }
    check(worst < 1e-12, format!("max |v' - (v+u)/(1+vu)| = {worst:.3e} (< 1e-12)"))
}

fn c8_kg_stencil() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for p in 1..=3 {
        for q in 1..=3 {
            let coin = InnerCoin::from_mass(1.0, 0.05);
            let model = Model::ClockQw { p, q, coin, eps: 0.05 };
            let init = random_layer(&mut rng, 8, p, q);
            let f = evolve_model(&model, &init, 200).map_err(|e| e.to_string())?;
            let spec = ClockWalkSpec::new(p, q, coin).map_err(|e| e.to_string())?;
            worst = worst.max(kg_decoupling_residual(&f, &spec).map_err(|e| e.to_string())?);
        }
    }
    // random field as negative control
    let coin = InnerCoin::from_mass(1.0, 0.05);
    let spec = ClockWalkSpec::new(2, 1, coin).map_err(|e| e.to_string())?;
    let w = Window::new(0, 0, 12, 12).map_err(|e| e.to_string())?;
    let mut noise = SpacetimeField::with_dims(w, 2, 1, 0.05);
    for c in w.coords() {
        let plus: Vec<C64> = (0..2).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        noise.set_plus(c, &plus).map_err(|e| e.to_string())?;
        noise.set_minus(c, &[C64::new(rng.gen_range(-1.0..1.0), 0.0)]).map_err(|e| e.to_string())?;
    }
    let control = kg_decoupling_residual(&noise, &spec).map_err(|e| e.to_string())?;
    check(
        worst < 1e-10 && control > 1e-3,
        format!(
            "stencil residual {worst:.3e} over (p,q) in {{1,2,3}}^2 at 200 steps; random-field control {control:.3e}"
        ),
    )
}

fn c8_coefficient_slope() -> Outcome {
    let sweep = [1e-1, 5e-2, 2.5e-2, 1.25e-2];
    let literal = coefficient_residuals(1.0, &sweep, 1.0);
    let fit = fit_loglog(&sweep, &literal).map_err(|e| e.to_string())?;
    let corrected = fit_loglog(&sweep, &coefficient_residuals(1.0, &sweep, -1.0)).map_err(|e| e.to_string())?;
    check(
        (fit.slope - 4.0).abs() <= 0.2,
        format!(
            "slope of |a - 1 - eps^2 m^2/2| is {:.4} (target 4 +/- 0.2); with the opposite sign, |a - 1 + eps^2 m^2/2| has slope {:.4}",
            fit.slope, corrected.slope
        ),
    )
}

fn c9_nonhomog() -> Outcome {
    let nh = observer_rescaling(&[(1, 1), (2, 1)]).map_err(|e| e.to_string())?;
    let params_ok = (-8..8).all(|x| nh.alpha.value_at(x) == 1)
        && (-8..0).all(|l| nh.beta.value_at(l) == 1)
        && (0..8).all(|l| nh.beta.value_at(l) == 2);
    let counts = rescaled_step_counts(&[(1, 1), (2, 1)], &nh, LightCoord::new(0, 0)).map_err(|e| e.to_string())?;
    let at_rest = counts.iter().all(|&(r, l)| r == l);

    let net = GateNetwork {
        window: Window::new(-3, -3, 6, 6).map_err(|e| e.to_string())?,
        model: Model::ClockQca { coin: InnerCoin::from_mass(1.0, 0.4), eps: 0.4 },
    };
    let stretched = nonhomog_transform(&net, &nh).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut replay = 0.0f64;
    for _ in 0..6 {
        let mut pick = |n: usize| -> Vec<QcaBasis> {
            (0..n)
                .map(|_| match rng.gen_range(0..4) {
                    0 => QcaBasis::One,
                    1 => QcaBasis::Zero,
                    _ => QcaBasis::Q,
                })
                .collect()
        };
        let (pl, mi) = (pick(6), pick(6));
        replay = replay.max(stretched.replay_mismatch(&pl, &mi).map_err(|e| e.to_string())?);
    }
    check(
        params_ok && at_rest && stretched.gluing < 1e-12 && replay < 1e-12,
        format!(
            "alpha=1, beta 1->2 at l=0: {params_ok}; rescaled step counts {counts:?}; gluing {:.3e}; replay {replay:.3e}",
            stretched.gluing
        ),
    )
}

fn c10_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let models = [
        Model::Dirac { m: 1.2, eps: 0.1 },
        Model::ClockQw { p: 1, q: 1, coin: InnerCoin::from_mass(0.8, 0.1), eps: 0.1 },
        Model::ClockQw { p: 2, q: 1, coin: InnerCoin::from_mass(0.8, 0.1), eps: 0.1 },
    ];
    let mut worst = 0.0f64;
    for model in &models {
        let (dp, dm) = model.wire_dims();
        let f = evolve_model(model, &random_layer(&mut rng, 10, dp, dm), 12).map_err(|e| e.to_string())?;
        for alpha in 1..=3 {
            for beta in 1..=3 {
                let params = LorentzParams::for_model(model, alpha, beta).map_err(|e| e.to_string())?;
                let g = lorentz_transform_field(&f, model, &params).map_err(|e| e.to_string())?;
                let mapped = params.mapped_model(model).map_err(|e| e.to_string())?;
                let back = unzoom_field(&g, &mapped, &params).map_err(|e| e.to_string())?;
                if back.window() != f.window() {
                    return Err(format!("window changed under ({alpha},{beta})"));
                }
                for (a, b) in
                    back.plus_data().iter().zip(f.plus_data()).chain(back.minus_data().iter().zip(f.minus_data()))
                {
                    worst = worst.max((a - b).norm());
                }
            }
        }
    }
    check(worst < 1e-12, format!("max deviation {worst:.3e} over Dirac and clock walks, (alpha,beta) <= (3,3)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1  exact covariance, clock walk", c1_clock_qw_exact),
        ("2  exact covariance, clock automaton", c2_clock_qca_exact),
        ("3  first-order covariance, Dirac walk", c3_dirac_first_order),
        ("4  flat encoding uniqueness", c4_uniqueness),
        ("5  second-order counterexample", c5_counterexample),
        ("6  surface norms", c6_norms),
        ("7  velocity addition", c7_velocity_addition),
        ("8a Klein-Gordon stencil", c8_kg_stencil),
        ("8b Klein-Gordon coefficient slope", c8_coefficient_slope),
        ("9  non-homogeneous transform", c9_nonhomog),
        ("10 round trip", c10_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(d) => println!("PASS criterion {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {name}: {d}");
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
