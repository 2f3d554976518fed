//! Acceptance suite. Every criterion prints one `PASS` / `FAIL` line; the
//! process exits non-zero when any of them fails.
//!
//! `cargo test --test acceptance -- <filter>` runs only the criteria whose
//! name contains `<filter>`.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use acat_core::acat1d::{self, Boundary, Grid1D, RunOptions, SchemeSpec, Stepper};
use acat_core::acat2d::{self, Grid2D};
use acat_core::catcore::cat_flux;
use acat_core::harness::{
    convergence_study, error_entry, initial_grid_1d, run_config, Preset, RunConfig, RunOutcome, Solution,
};
use acat_core::models::{Euler1d, Euler2d, EulerState, LinearAdvection, DEFAULT_GAMMA};
use acat_core::smooth::{indicator, IndicatorConfig};
use acat_core::Execution;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: acat_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", e.kind()))
}

fn config(preset: Preset, scheme: SchemeSpec) -> RunConfig {
    RunConfig::for_preset(preset).with_scheme(scheme)
}

/// Least-squares slope of `log2 y` against `log2 x`.
fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.log2()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log2()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Weights of the centered `k`-th derivative on nodes `-p..=p`, from the
/// monomial expansion of the Lagrange basis.
fn centered_weights(p: usize, k: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (0..=2 * p).map(|m| m as f64 - p as f64).collect();
    let fact: f64 = (1..=k).map(|v| v as f64).product();
    (0..nodes.len())
        .map(|j| {
            let mut poly = vec![1.0];
            for (m, &xm) in nodes.iter().enumerate() {
                if m == j {
                    continue;
                }
                let scale = 1.0 / (nodes[j] - xm);
                let mut next = vec![0.0; poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c * scale;
                    next[d] -= c * xm * scale;
                }
                poly = next;
            }
            fact * poly[k]
        })
        .collect()
}

fn euler_positive_1d(g: &Grid1D, gamma: f64) -> Result<(f64, f64), String> {
    let (mut rho_min, mut p_min) = (f64::INFINITY, f64::INFINITY);
    for i in 0..g.n() {
        let u = g.cell(i);
        ensure(u.iter().all(|v| v.is_finite()), || format!("non-finite state at cell {i}"))?;
        let s = EulerState::from_conserved_1d(u, gamma);
        rho_min = rho_min.min(s.rho);
        p_min = p_min.min(s.p);
    }
    ensure(rho_min > 0.0 && p_min > 0.0, || format!("min rho {rho_min:.3e}, min p {p_min:.3e}"))?;
    Ok((rho_min, p_min))
}

fn grid_of(out: &RunOutcome) -> &Grid1D {
    out.solution.as_1d().expect("1D run")
}

fn convergence_orders() -> Outcome {
    let start = Instant::now();
    let mut base = RunConfig::for_preset(Preset::TransportSine);
    base.cfl = 0.5;
    base.t_final = 0.4;
    let meshes = [40, 80, 160, 320];
    let mut detail = Vec::new();
    let mut failures = Vec::new();
    for (scheme, want, tol) in
        [(SchemeSpec::flcat2(), 2.0, 0.3), (SchemeSpec::acat(2), 4.0, 0.4), (SchemeSpec::acat(3), 6.0, 0.6)]
    {
        let report = lib(convergence_study(&base.clone().with_scheme(scheme), &meshes))?;
        let fitted = report.fitted_l1_order().unwrap_or(f64::NAN);
        let pairs: Vec<String> = report.orders.iter().map(|o| format!("{:.2}", o.l1)).collect();
        detail.push(format!("{} {fitted:.2} [{}]", report.scheme, pairs.join(" ")));
        if (fitted - want).abs() > tol {
            failures.push(format!("{} order {fitted:.3} outside {want}+-{tol}", report.scheme));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("runtime {secs:.1}s >= 60s"));
    }
    let detail = format!("L1 orders {}", detail.join(", "));
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", failures.join("; ")))
    }
}

fn linear_reduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let n = 64;
    let dx = 1.0 / n as f64;
    let mut worst_flux = 0.0f64;
    let mut worst_update = 0.0f64;
    for p in 1..=3 {
        for a in [1.0, -0.7, 2.5] {
            let model = LinearAdvection::new(a);
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let dt = rng.random_range(0.05..1.0) * dx / a.abs();
            let at = |i: i64| u[i.rem_euclid(n as i64) as usize];
            // oracle flux weights: running sums of the centered k+1 derivative weights
            let weights: Vec<Vec<f64>> = (0..2 * p)
                .map(|k| {
                    let d = centered_weights(p, k + 1);
                    let mut acc = 0.0;
                    d[..2 * p]
                        .iter()
                        .map(|v| {
                            acc -= v;
                            acc
                        })
                        .collect()
                })
                .collect();
            let mut fluxes = Vec::with_capacity(n + 1);
            for q in 0..=n as i64 {
                let window: Vec<f64> = (q - p as i64..q + p as i64).map(at).collect();
                let cat = lib(cat_flux(p, &window, &model, dx, dt))?[0];
                let mut coef = a;
                let mut oracle = 0.0;
                for (k, w) in weights.iter().enumerate() {
                    let s: f64 = w.iter().zip(&window).map(|(w, v)| w * v).sum();
                    oracle += coef * s / dx.powi(k as i32);
                    coef *= -a * dt / (k as f64 + 2.0);
                }
                worst_flux = worst_flux.max((cat - oracle).abs());
                fluxes.push(cat);
            }
            // update against the centered Taylor series sum_k (-a dt)^k / k! D^k u
            for i in 0..n {
                let mut lw = 0.0;
                let mut coef = 1.0;
                for k in 0..=2 * p {
                    let d = centered_weights(p, k);
                    let s: f64 = d.iter().enumerate().map(|(j, w)| w * at(i as i64 + j as i64 - p as i64)).sum();
                    lw += coef * s / dx.powi(k as i32);
                    coef *= -a * dt / (k as f64 + 1.0);
                }
                let cat = u[i] - dt / dx * (fluxes[i + 1] - fluxes[i]);
                worst_update = worst_update.max((cat - lw).abs());
            }
        }
    }
    let detail = format!("max |F_cat - F_lw| {worst_flux:.2e}, max update diff {worst_update:.2e}");
    ensure(worst_flux <= 1e-12 && worst_update <= 1e-12, || detail.clone())?;
    Ok(detail)
}

fn cfl_one_stability() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let n = 200;
    let model = LinearAdvection::new(1.0);
    let mut detail = Vec::new();
    for p in 1..=3 {
        let vals: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut g = Grid1D::new(n, (0.0, 1.0), 1, p, Boundary::Periodic).map_err(|e| e.to_string())?;
        g.interior_mut().copy_from_slice(&vals);
        g.fill_ghosts();
        let mut stepper = lib(Stepper::new(&model, SchemeSpec::cat(p), Execution::Serial))?;
        let l2 = |g: &Grid1D| (g.interior().iter().map(|v| v * v).sum::<f64>() * g.dx()).sqrt();
        let (mut prev_l2, mut worst_growth, mut worst_shift) = (l2(&g), f64::NEG_INFINITY, 0.0f64);
        for _ in 0..100 {
            let before = g.interior().to_vec();
            lib(stepper.step(&mut g, 1.0, f64::INFINITY))?;
            let now = l2(&g);
            worst_growth = worst_growth.max(now - prev_l2);
            prev_l2 = now;
            for i in 0..n {
                worst_shift = worst_shift.max((g.cell(i)[0] - before[(i + n - 1) % n]).abs());
            }
        }
        ensure(worst_growth <= 1e-10, || format!("CAT{} L2 grew by {worst_growth:.2e}", 2 * p))?;
        if p == 1 {
            ensure(worst_shift <= 1e-12, || format!("CAT2 unit shift error {worst_shift:.2e}"))?;
        }
        detail.push(format!("CAT{} growth {worst_growth:.1e} shift err {worst_shift:.1e}", 2 * p));
    }
    Ok(detail.join(", "))
}

fn indicator_rates() -> Outcome {
    let cfg = IndicatorConfig::default();
    let samples = |f: &dyn Fn(f64) -> f64, h: f64, p: usize| -> Vec<f64> {
        (0..2 * p).map(|j| f(0.1 + (j as f64 - p as f64 + 0.5) * h)).collect()
    };
    let smooth = |x: f64| (x + 0.3).sin() + 0.5 * x;
    let hs = [0.2, 0.1, 0.05, 0.025];
    let jump_hs = [0.1, 0.05, 0.025, 0.0125];
    let mut detail = Vec::new();
    for p in 2..=3 {
        let ys: Vec<f64> = hs.iter().map(|&h| 1.0 - indicator(p, &samples(&smooth, h, p), &cfg).unwrap()).collect();
        let slope = log_slope(&hs, &ys);
        let want = 4.0 * (p as f64 - 1.0);
        ensure((slope - want).abs() <= 0.5, || format!("p={p} smooth slope {slope:.3}, want {want}"))?;
        detail.push(format!("smooth p={p} {slope:.2}"));
        // jump in the central interval and in each lateral interval
        for offset in 0..2 * p - 1 {
            let shift = offset as f64 - (p as f64 - 1.0);
            let ys: Vec<f64> = jump_hs
                .iter()
                .map(|&h| {
                    let jump = 0.1 + shift * h;
                    let f = move |x: f64| smooth(x) + if x > jump { 1.0 } else { 0.0 };
                    indicator(p, &samples(&f, h, p), &cfg).unwrap()
                })
                .collect();
            let slope = log_slope(&jump_hs, &ys);
            ensure((slope - 2.0).abs() <= 0.5, || format!("p={p} jump at {shift:+} slope {slope:.3}"))?;
            if shift == 0.0 {
                detail.push(format!("jump p={p} {slope:.2}"));
            }
        }
    }
    Ok(detail.join(", "))
}

fn sod() -> Outcome {
    let mut errors = Vec::new();
    for scheme in [SchemeSpec::flcat2(), SchemeSpec::acat(2)] {
        let out = lib(run_config(&config(Preset::Sod, scheme)))?;
        euler_positive_1d(grid_of(&out), DEFAULT_GAMMA)?;
        let e = lib(error_entry(&out))?.ok_or("no reference")?;
        errors.push(e.norms.l1);
    }
    let detail = format!("density L1 FL-CAT2 {:.4e}, ACAT4 {:.4e}", errors[0], errors[1]);
    ensure(errors[0] < 0.02, || format!("FL-CAT2 error too large: {detail}"))?;
    ensure(errors[1] <= errors[0], || format!("ACAT4 worse than FL-CAT2: {detail}"))?;
    Ok(detail)
}

fn einfeldt() -> Outcome {
    let mut detail = Vec::new();
    for scheme in [SchemeSpec::flcat2(), SchemeSpec::acat(2), SchemeSpec::acat(3)] {
        let out = lib(run_config(&config(Preset::Einfeldt123, scheme)))?;
        let (rho, p) =
            euler_positive_1d(grid_of(&out), DEFAULT_GAMMA).map_err(|e| format!("{}: {e}", scheme.label()))?;
        detail.push(format!("{} min rho {rho:.2e} min p {p:.2e}", scheme.label()));
    }
    Ok(detail.join(", "))
}

fn blast() -> Outcome {
    let mut errors = Vec::new();
    for scheme in [SchemeSpec::flcat2(), SchemeSpec::acat(2)] {
        let out = lib(run_config(&config(Preset::BlastRight, scheme)))?;
        let g = grid_of(&out);
        euler_positive_1d(g, DEFAULT_GAMMA)?;
        let rho = g.component(0);
        let (lo, hi) = rho.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        ensure(lo >= 0.0 && hi <= 8.0, || format!("{} density range [{lo}, {hi}]", scheme.label()))?;
        let e = lib(error_entry(&out))?.ok_or("no reference")?;
        errors.push(e.norms.l1);
    }
    let detail = format!("L1 vs 4x Rusanov reference FL-CAT2 {:.4e}, ACAT4 {:.4e}", errors[0], errors[1]);
    ensure(errors[1] < errors[0], || detail.clone())?;
    Ok(detail)
}

fn conservation() -> Outcome {
    let mut worst = 0.0f64;
    for scheme in [SchemeSpec::flcat2(), SchemeSpec::acat(2), SchemeSpec::acat(3)] {
        let out = lib(run_config(&config(Preset::BurgersSine, scheme)))?;
        worst = worst.max(out.diagnostics.conservation_drift());
    }
    let detail = format!("max |drift of sum u dx| {worst:.2e}");
    ensure(worst <= 1e-10, || detail.clone())?;
    Ok(detail)
}

fn slice_and_symmetry() -> Outcome {
    let start = Instant::now();
    let gamma = DEFAULT_GAMMA;
    let (l, r) = (EulerState::new_2d(1.0, 0.0, 0.0, 1.0), EulerState::new_2d(0.125, 0.0, 0.0, 0.1));
    let (n, rows) = (100, 3);
    let dx = 1.0 / n as f64;
    let out = (Boundary::Outflow, Boundary::Outflow);
    let mut worst_row = 0.0f64;
    for scheme in [SchemeSpec::flcat2(), SchemeSpec::acat(2), SchemeSpec::acat(3)] {
        let mut g2 = lib(Grid2D::from_fn((n, rows), (0.0, 1.0), (0.0, rows as f64 * dx), 4, 3, out, |x, _, u| {
            u.copy_from_slice(&if x < 0.5 { l } else { r }.to_conserved_2d(gamma))
        }))?;
        lib(acat2d::run_2d(&mut g2, &Euler2d::new(gamma), &scheme, &RunOptions::new(0.8, 0.2)))?;
        let mut g1 = lib(Grid1D::from_fn(n, (0.0, 1.0), 3, 3, Boundary::Outflow, |x, u| {
            let s = if x < 0.5 { l } else { r };
            u.copy_from_slice(&EulerState::new(s.rho, s.v, s.p).to_conserved_1d(gamma))
        }))?;
        lib(acat1d::run(&mut g1, &Euler1d::new(gamma), &scheme, &RunOptions::new(0.4, 0.2)))?;
        for j in 0..rows {
            for i in 0..n {
                let (a, b) = (g2.cell(i, j), g1.cell(i));
                for (x, y) in [(a[0], b[0]), (a[1], b[1]), (a[3], b[2])] {
                    worst_row = worst_row.max((x - y).abs());
                }
                worst_row = worst_row.max(a[2].abs());
            }
        }
    }
    ensure(worst_row <= 1e-13, || format!("2D rows differ from 1D by {worst_row:.2e}"))?;
    let mut cfg = config(Preset::Euler2dCfg4, SchemeSpec::acat(2));
    cfg.t_final = 0.1;
    let res = lib(run_config(&cfg))?;
    let Solution::TwoD(g) = &res.solution else {
        return Err("expected a 2D solution".into());
    };
    let asym = g.diagonal_asymmetry(|u| u.swap(1, 2));
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("row mismatch {worst_row:.1e}, cfg4 100^2 diagonal asymmetry {asym:.1e}, {secs:.1}s");
    ensure(asym <= 1e-10, || detail.clone())?;
    ensure(secs < 120.0, || format!("too slow: {detail}"))?;
    Ok(detail)
}

fn adaptivity() -> Outcome {
    let cfg = config(Preset::TransportSquare, SchemeSpec::acat(3));
    let mut grid = lib(initial_grid_1d(&cfg))?;
    let tv = |g: &Grid1D| {
        let u = g.interior();
        (0..u.len()).map(|i| (u[(i + 1) % u.len()] - u[i]).abs()).sum::<f64>()
    };
    let tv0 = tv(&grid);
    let (n, dx, max_p) = (grid.n(), grid.dx(), cfg.scheme.max_p);
    let (mut steps, mut reduced) = (0usize, 0usize);
    let opts = RunOptions::new(cfg.cfl, cfg.t_final);
    lib(acat1d::run_with(&mut grid, &LinearAdvection::new(1.0), &cfg.scheme, &opts, |st, _, rec| {
        let t0 = rec.t - rec.dt;
        steps += 1;
        let all_reduced = [0.5, 1.0, 1.5].iter().all(|&x| {
            let q = (((x + t0) / dx).round() as usize) % n;
            st.records()[q].report.selected_p < max_p
        });
        if all_reduced {
            reduced += 1;
        }
    }))?;
    let tv1 = tv(&grid);
    let share = reduced as f64 / steps as f64;
    let detail = format!("TV {tv1:.4} vs IC {tv0:.4}, p_s < P at the jumps in {:.1}% of {steps} steps", 100.0 * share);
    ensure(tv1 <= tv0 + 0.05, || detail.clone())?;
    ensure(share > 0.95, || detail.clone())?;
    Ok(detail)
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("convergence orders", convergence_orders),
        ("linear reduction to Lax-Wendroff", linear_reduction),
        ("CFL-1 linear stability", cfl_one_stability),
        ("indicator rates", indicator_rates),
        ("Sod shock tube", sod),
        ("123 problem positivity", einfeldt),
        ("blast wave", blast),
        ("Burgers conservation", conservation),
        ("2D slice equivalence and symmetry", slice_and_symmetry),
        ("adaptivity on the square wave", adaptivity),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let (mut run, mut failed) = (0, 0);
    for (k, (name, check)) in checks.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        run += 1;
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(d) => println!("criterion {:>2} {name}: PASS ({d}) [{secs:.1}s]", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({d}) [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {run} criteria passed", run - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
