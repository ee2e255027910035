mod support;

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use besovlab::estimate::commutator::ScanFields;
use besovlab::estimate::riccati::lambda_series;
use besovlab::estimate::{
    budget_all_blocks, check_energy_monotonicity, commutator_scan, fit_decay_rate, fit_riccati_constant,
    local_time_bound, riccati_check, riccati_envelope, stability_divergence, vorticity_decay_check, CommutatorVariant,
    Indices,
};
use besovlab::euler::{
    band_limited_field, linear_mode_solution, random_band_limited_ic, simulate, simulate_from, step_rk4, Branch,
    GridSpec, IcKind, IcSpec, LinearMode, SimConfig, TerminalStatus,
};
use besovlab::lp::bony::{paraproduct, remainder};
use besovlab::lp::calculus::spectral_gradient;
use besovlab::lp::norms::lp_norm;
use besovlab::lp::{make_grid, Field, Grid};
use besovlab::{DyadicPartition, EulerModel, NonlinearTerms, PhysicalParams, State, VectorField};
use rustfft::num_complex::Complex64;
use support::{random_trig, variant_reference, Lattice, ScanInputs};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid(dim: usize, n: usize) -> Grid {
    make_grid(dim, n, TAU).unwrap()
}

fn partition(g: Grid) -> DyadicPartition {
    DyadicPartition::new(g, 1e-12).unwrap()
}

fn lattice(g: &Grid) -> Lattice {
    Lattice::new(g.dim(), g.points_per_axis(), g.period())
}

fn trig(g: Grid, kmax: i64, amp: f64, seed: u64) -> Field {
    let s = random_trig(&lattice(&g), kmax, seed)
        .into_iter()
        .map(|v| amp * v)
        .collect();
    Field::from_samples(g, s).unwrap()
}

fn l2(f: &Field) -> f64 {
    lp_norm(f, 2.0).unwrap()
}

fn params(a: f64) -> PhysicalParams {
    PhysicalParams::new(1.0, 1.4, a, 1.0).unwrap()
}

fn partition_suite() -> Outcome {
    let mut worst_residual: f64 = 0.0;
    for dim in 1..=3 {
        for n in [8, 16, 32, 64] {
            let r = partition(grid(dim, n)).report();
            worst_residual = worst_residual.max(r.max_residual);
            ensure(r.max_residual <= 1e-12, || {
                format!("residual {:e} on {dim}-D n={n}", r.max_residual)
            })?;
        }
    }
    let mut worst_orth: f64 = 0.0;
    let mut worst_loc: f64 = 0.0;
    for dim in 1..=3 {
        let g = grid(dim, 64);
        let part = partition(g);
        let top = 2.0 * g.k_max() / 3.0;
        let f = band_limited_field(&g, [0.0, top], 1.0, 7 + dim as u64).unwrap();
        let h = band_limited_field(&g, [0.0, top], 1.0, 70 + dim as u64).unwrap();
        let nf = l2(&f);
        let blocks = part.blocks(&f).unwrap();
        for (p, bp) in part.indices().zip(&blocks) {
            for q in part.indices().filter(|q| (q - p).abs() >= 2) {
                worst_orth = worst_orth.max(l2(&part.dyadic_block(bp, q).unwrap()) / nf);
            }
        }
        let scale = nf * h.max_abs();
        for p in 1..=part.q_max() {
            let term = part
                .low_cutoff(&f, p - 1)
                .unwrap()
                .mul(&part.dyadic_block(&h, p).unwrap())
                .unwrap();
            for q in part.indices().filter(|q| (q - p).abs() >= 5) {
                worst_loc = worst_loc.max(l2(&part.dyadic_block(&term, q).unwrap()) / scale);
            }
        }
    }
    ensure(worst_orth <= 1e-12, || format!("orthogonality {worst_orth:e}"))?;
    ensure(worst_loc <= 1e-12, || format!("localization {worst_loc:e}"))?;
    Ok(format!(
        "residual {worst_residual:.1e}, orthogonality {worst_orth:.1e}, localization {worst_loc:.1e}"
    ))
}

fn bernstein_suite() -> Outcome {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (dim, n) in [(1, 64), (2, 64), (3, 32)] {
        let g = grid(dim, n);
        let part = partition(g);
        for seed in 0..20 {
            let f = band_limited_field(&g, [0.5, 2.0 * g.k_max() / 3.0], 1.0, seed).unwrap();
            let nf = l2(&f);
            for q in 0..=part.q_max() {
                let b = part.dyadic_block(&f, q).unwrap();
                let nb = l2(&b);
                if nb <= 1e-10 * nf {
                    continue;
                }
                let grad = spectral_gradient(&b);
                let ng = grad.components().iter().map(|c| l2(c).powi(2)).sum::<f64>().sqrt();
                let ratio = ng / (2f64.powi(q) * nb);
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
    }
    ensure(lo >= 0.75 && hi <= 8.0 / 3.0, || format!("ratios span [{lo}, {hi}]"))?;
    Ok(format!("ratios in [{lo:.4}, {hi:.4}]"))
}

fn bony_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    let cases = [(1, 64, 21), (2, 32, 10), (3, 16, 5)];
    for i in 0..50u64 {
        let (dim, n, kmax) = cases[(i % 3) as usize];
        let g = grid(dim, n);
        let part = partition(g);
        let f = trig(g, kmax, 1.0, 1000 + i);
        let h = trig(g, kmax, 1.0, 2000 + i);
        let sum = paraproduct(&part, &f, &h)
            .unwrap()
            .add(&paraproduct(&part, &h, &f).unwrap())
            .unwrap()
            .add(&remainder(&part, &f, &h).unwrap())
            .unwrap();
        let prod = f.mul(&h).unwrap();
        worst = worst.max(l2(&sum.sub(&prod).unwrap()) / l2(&prod));
    }
    ensure(worst <= 1e-10, || format!("reconstruction {worst:e}"))?;
    let mut worst_pp: f64 = 0.0;
    for (dim, n, seed) in [(1, 32, 1u64), (1, 64, 2), (2, 16, 3)] {
        let g = grid(dim, n);
        let part = partition(g);
        let naive = Lattice::naive(dim, n, TAU);
        let kmax = (n / 3) as i64;
        let f = trig(g, kmax, 1.0, seed);
        let h = trig(g, kmax, 1.0, seed + 50);
        let got = paraproduct(&part, &f, &h).unwrap();
        let expect = naive.paraproduct_double_sum(f.samples(), h.samples());
        let scale = support::max_abs(&expect);
        for (a, b) in got.samples().iter().zip(&expect) {
            worst_pp = worst_pp.max((a - b).abs() / scale);
        }
    }
    ensure(worst_pp <= 1e-12, || format!("paraproduct vs double sum {worst_pp:e}"))?;
    Ok(format!("reconstruction {worst:.1e}, double sum {worst_pp:.1e}"))
}

fn mode_state(g: Grid, k: [i64; 3], mode: &LinearMode, perp: [f64; 3]) -> State {
    let kv = k.map(|v| v as f64);
    let kn = kv.iter().map(|v| v * v).sum::<f64>().sqrt();
    let wave = |x: [f64; 3], c: Complex64| {
        2.0 * (c * Complex64::from_polar(1.0, kv[0] * x[0] + kv[1] * x[1] + kv[2] * x[2])).re
    };
    let m = Field::from_fn(g, |x| wave(x, mode.m));
    let u = (0..3)
        .map(|a| Field::from_fn(g, |x| wave(x, mode.u_parallel * kv[a] / kn + mode.u_perp[0] * perp[a])))
        .collect();
    State::new(m, VectorField::new(u).unwrap(), Branch::Isentropic).unwrap()
}

fn coefficient(f: &Field, k: [i64; 3]) -> Complex64 {
    let g = f.grid();
    let n = g.points_per_axis() as i64;
    f.spectrum()[g.flat_index(k.map(|v| v.rem_euclid(n) as usize))]
}

fn read_mode(s: &State, k: [i64; 3], perp: [f64; 3]) -> LinearMode {
    let kv = k.map(|v| v as f64);
    let kn = kv.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut par = Complex64::new(0.0, 0.0);
    let mut per = Complex64::new(0.0, 0.0);
    for (a, c) in s.u.components().iter().enumerate() {
        let v = coefficient(c, k);
        par += v * kv[a] / kn;
        per += v * perp[a];
    }
    LinearMode {
        m: coefficient(&s.m, k),
        u_parallel: par,
        u_perp: vec![per],
    }
}

fn linear_oracle() -> Outcome {
    let g = grid(3, 16);
    let p = params(0.6);
    let model = EulerModel::linearized(p);
    let (k, perp) = ([1, 2, 0], [0.0, 0.0, 1.0]);
    let init = LinearMode {
        m: Complex64::new(0.3, -0.1),
        u_parallel: Complex64::new(0.05, 0.2),
        u_perp: vec![Complex64::new(-0.15, 0.1)],
    };
    let t_end = 2.0;
    let exact = linear_mode_solution(&[1.0, 2.0, 0.0], &p, &init, t_end).unwrap();
    let mut errors = Vec::new();
    for steps in [10, 20, 40] {
        let dt = t_end / steps as f64;
        let mut s = mode_state(g, k, &init, perp);
        for _ in 0..steps {
            s = step_rk4(&model, &s, dt).unwrap();
        }
        let got = read_mode(&s, k, perp);
        let err = ((got.m - exact.m).norm_sqr()
            + (got.u_parallel - exact.u_parallel).norm_sqr()
            + (got.u_perp[0] - exact.u_perp[0]).norm_sqr())
        .sqrt();
        errors.push(err);
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    ensure(orders.iter().all(|o| (3.8..=4.2).contains(o)), || {
        format!("orders {orders:?}")
    })?;

    let a = 0.8;
    let model = EulerModel::linearized(params(a));
    let (k, perp) = ([0, 1, 1], [1.0, 0.0, 0.0]);
    let zero = Complex64::new(0.0, 0.0);
    let init = LinearMode {
        m: zero,
        u_parallel: zero,
        u_perp: vec![Complex64::new(0.2, 0.0)],
    };
    let mut s = mode_state(g, k, &init, perp);
    let dt = 0.02;
    let mut series = vec![(0.0, read_mode(&s, k, perp).u_perp[0].norm())];
    for i in 1..=100 {
        s = step_rk4(&model, &s, dt).unwrap();
        series.push((i as f64 * dt, read_mode(&s, k, perp).u_perp[0].norm()));
    }
    let rate = fit_decay_rate(&series, (0.0, 2.0)).unwrap().rate;
    let rel = (rate - a).abs() / a;
    ensure(rel <= 1e-3, || format!("transverse rate {rate} vs {a}"))?;
    Ok(format!(
        "orders {:.3}, {:.3}; transverse rate error {rel:.1e}",
        orders[0], orders[1]
    ))
}

fn small_data_config(terms: NonlinearTerms) -> SimConfig {
    let mut cfg = SimConfig::new(
        GridSpec {
            dim: 3,
            points_per_axis: 32,
            period: TAU,
        },
        params(1.0),
        10.0,
        IcSpec {
            kind: IcKind::Random,
            amplitude: 1e-4,
            band: [1.0, 4.0],
            seed: 42,
        },
    );
    cfg.terms = terms;
    cfg
}

fn energy_monotonicity(traj: &besovlab::euler::Trajectory) -> Outcome {
    ensure(traj.status == TerminalStatus::Completed, || {
        format!("run ended with {:?}", traj.status)
    })?;
    let rep = check_energy_monotonicity(traj).map_err(|e| e.to_string())?;
    ensure(rep.non_increasing, || {
        format!("largest step increase {:e} of E(0)", rep.max_step_increase)
    })?;
    ensure(rep.holds && rep.mu_fit > 0.0, || format!("fitted mu {}", rep.mu_fit))?;
    Ok(format!(
        "{} steps, largest step change {:.1e} E(0), mu {:.3}, E ratio {:.1e}",
        traj.steps_taken,
        rep.max_step_increase,
        rep.mu_fit,
        traj.last().energy / traj.records[0].energy
    ))
}

fn vorticity_decay(traj: &besovlab::euler::Trajectory) -> Outcome {
    let rep = vorticity_decay_check(traj, 1e-2).map_err(|e| e.to_string())?;
    ensure(rep.holds, || format!("worst ratio {}", rep.worst_ratio))?;
    let lin = simulate(&small_data_config(NonlinearTerms::none())).map_err(|e| e.to_string())?;
    let lin_rep = vorticity_decay_check(&lin, 1e-2).map_err(|e| e.to_string())?;
    let a = lin.params.damping();
    let rate = lin_rep.fit.ok_or("no vorticity fit on the linearized run")?.rate;
    ensure((rate - a).abs() <= 1e-2 * a, || {
        format!("linearized rate {rate} vs {a}")
    })?;
    Ok(format!("worst ratio {:.6}, linearized rate {rate:.6}", rep.worst_ratio))
}

fn block_budget() -> Outcome {
    let p = params(0.05);
    let g = grid(3, 32);
    let part = partition(g);
    let model = EulerModel::new(p);
    let mut s = random_band_limited_ic(&g, 2e-2, [1.0, 2.0], 7, &p).unwrap();
    for _ in 0..10 {
        s = step_rk4(&model, &s, 0.05).unwrap();
    }
    let mut residuals = Vec::new();
    for dt in [1e-4, 5e-5] {
        let mid = step_rk4(&model, &s, dt).unwrap();
        let next = step_rk4(&model, &mid, dt).unwrap();
        residuals.push(
            budget_all_blocks(&s, &mid, &next, dt, &model, &part, 1e-6)
                .unwrap()
                .max_residual,
        );
    }
    let gain = residuals[0] / residuals[1];
    ensure(residuals[0] <= 1e-6, || {
        format!("residual {:e} at dt=1e-4", residuals[0])
    })?;
    ensure(gain >= 3.5, || format!("halving gain {gain}"))?;
    Ok(format!(
        "residual {:.2e} at dt=1e-4, {:.2e} at dt=5e-5, gain {gain:.2}",
        residuals[0], residuals[1]
    ))
}

fn scan_inputs(fields: &ScanFields) -> ScanInputs {
    let s = |v: &VectorField| v.components().iter().map(|c| c.samples().to_vec()).collect();
    ScanInputs {
        m: fields.m.samples().to_vec(),
        u: s(&fields.u),
        mt: fields.m_t.samples().to_vec(),
        ut: s(&fields.u_t),
    }
}

fn commutator_scans() -> Outcome {
    let coarse = grid(3, 32);
    let vec3 = |seed: u64| VectorField::new((0..3).map(|a| trig(coarse, 3, 0.1, seed + a)).collect()).unwrap();
    let f32 = ScanFields::new(trig(coarse, 3, 0.1, 1), vec3(10), trig(coarse, 3, 0.1, 20), vec3(30)).unwrap();
    let f64_ = f32.resample(grid(3, 64)).unwrap();
    let idx = Indices::for_dim(3);
    let mut worst_ref: f64 = 0.0;
    let mut worst_ratio: f64 = 1.0;
    for fields in [&f32, &f64_] {
        let g = *fields.grid();
        let part = partition(g);
        let lat = lattice(&g);
        let raw = scan_inputs(fields);
        for &v in CommutatorVariant::all() {
            let got = commutator_scan(&part, fields, v, &idx).map_err(|e| format!("{v}: {e}"))?;
            let expect = variant_reference(&lat, v.name(), &raw, idx.eps);
            ensure(got.c_q.len() == expect.c_q.len(), || {
                format!("{v}: block count differs")
            })?;
            for (a, b) in got
                .c_q
                .iter()
                .zip(&expect.c_q)
                .chain([(&got.statistic, &expect.statistic)])
            {
                worst_ref = worst_ref.max((a - b).abs() / expect.statistic);
            }
        }
    }
    let (p32, p64) = (partition(*f32.grid()), partition(*f64_.grid()));
    for &v in CommutatorVariant::all() {
        let a = commutator_scan(&p32, &f32, v, &idx).unwrap().statistic;
        let b = commutator_scan(&p64, &f64_, v, &idx).unwrap().statistic;
        let r = (a / b).max(b / a);
        ensure(r <= 2.0, || format!("{v}: statistic {a:e} at 32, {b:e} at 64"))?;
        worst_ratio = worst_ratio.max(r);
    }
    ensure(worst_ref <= 1e-10, || format!("oracle disagreement {worst_ref:e}"))?;
    Ok(format!(
        "{} variants, oracle agreement {worst_ref:.1e}, worst resolution ratio {worst_ratio:.4}",
        CommutatorVariant::all().len()
    ))
}

fn riccati_bound() -> Outcome {
    for (l0, c) in [(1.0, 1.0), (2.0, 0.25), (3.5, 0.04), (0.3, 7.0)] {
        let t0 = local_time_bound(l0, c).unwrap();
        let env = riccati_envelope(t0, l0, c).unwrap();
        ensure((env - 2.0 * l0).abs() <= 1e-14 * l0, || {
            format!("envelope {env} vs {}", 2.0 * l0)
        })?;
    }
    let mut cfg = SimConfig::new(
        GridSpec {
            dim: 3,
            points_per_axis: 16,
            period: TAU,
        },
        params(0.3),
        4.0,
        IcSpec {
            kind: IcKind::Random,
            amplitude: 1e-2,
            band: [1.0, 3.0],
            seed: 5,
        },
    );
    cfg.terms = NonlinearTerms::none();
    cfg.dt = Some(0.05);
    let traj = simulate(&cfg).map_err(|e| e.to_string())?;
    let series = lambda_series(&traj);
    let c = fit_riccati_constant(&series).map_err(|e| e.to_string())?;
    let rep = riccati_check(&series, c, 1e-12).map_err(|e| e.to_string())?;
    ensure(rep.holds && rep.samples_checked > 0, || {
        format!("max ratio {}", rep.max_ratio)
    })?;
    Ok(format!(
        "envelope(T0) = 2 lambda0; fitted C {c:.2e}, max ratio {:.6} over {} samples",
        rep.max_ratio, rep.samples_checked
    ))
}

fn discrete_uniqueness() -> Outcome {
    let p = params(1.0);
    let g = grid(3, 32);
    let part = partition(g);
    let s0 = random_band_limited_ic(&g, 1e-2, [1.0, 3.0], 3, &p).unwrap();
    let pert = band_limited_field(&g, [1.0, 3.0], 1e-8, 99).unwrap();
    let s1 = State::new(s0.m.add(&pert).unwrap(), s0.u.clone(), s0.branch).unwrap();
    let mut cfg = SimConfig::new(
        GridSpec {
            dim: 3,
            points_per_axis: 32,
            period: TAU,
        },
        p,
        2.0,
        IcSpec {
            kind: IcKind::Random,
            amplitude: 1e-2,
            band: [1.0, 3.0],
            seed: 3,
        },
    );
    cfg.keep_states = true;
    let mut fits = Vec::new();
    for (dt, every) in [(0.05, 1), (0.025, 2)] {
        cfg.dt = Some(dt);
        cfg.record_every = every;
        let a = simulate_from(&cfg, s0.clone()).map_err(|e| e.to_string())?;
        if fits.is_empty() {
            let b = simulate_from(&cfg, s0.clone()).map_err(|e| e.to_string())?;
            let same = stability_divergence(&a, &b, &part).map_err(|e| e.to_string())?;
            let worst = same.delta.iter().map(|d| d.1).fold(0.0, f64::max);
            ensure(same.holds && worst <= 1e-10, || {
                format!("identical runs separate by {worst:e}")
            })?;
        }
        let b = simulate_from(&cfg, s1.clone()).map_err(|e| e.to_string())?;
        let rep = stability_divergence(&a, &b, &part).map_err(|e| e.to_string())?;
        let c = rep.c_fit.ok_or("no Gronwall fit")?;
        ensure(c.is_finite(), || format!("constant {c} at dt={dt}"))?;
        fits.push(c);
    }
    let spread = (fits[0] / fits[1]).max(fits[1] / fits[0]);
    ensure(spread <= 2.0, || format!("constants {fits:?}"))?;
    Ok(format!(
        "identical runs agree; C = {:.4e} / {:.4e}, spread {spread:.3}",
        fits[0], fits[1]
    ))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut run = |id: usize, name: &str, budget: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let out = out.and_then(|d| {
            if took <= Duration::from_secs(budget) {
                Ok(d)
            } else {
                Err(format!("{d}; runtime {:.1}s over {budget}s", took.as_secs_f64()))
            }
        });
        let (tag, detail) = match &out {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if out.is_err() {
            failed += 1;
        }
        println!("[{tag}] {id:>2} {name:<28} {detail} ({:.1}s)", took.as_secs_f64());
    };

    run(1, "partition and orthogonality", 30, &mut partition_suite);
    run(2, "bernstein shells", 10, &mut bernstein_suite);
    run(3, "bony reconstruction", 60, &mut bony_suite);
    run(4, "linear oracle", 30, &mut linear_oracle);
    let mut shared = None;
    run(5, "energy monotonicity", 600, &mut || {
        let traj = simulate(&small_data_config(NonlinearTerms::all())).map_err(|e| e.to_string())?;
        let out = energy_monotonicity(&traj);
        shared = Some(traj);
        out
    });
    run(6, "vorticity decay", 600, &mut || match &shared {
        Some(traj) => vorticity_decay(traj),
        None => Err("the small-data run failed".into()),
    });
    run(7, "block energy budget", 300, &mut block_budget);
    run(8, "commutator scans", 600, &mut commutator_scans);
    run(9, "riccati bound", 60, &mut riccati_bound);
    run(10, "discrete uniqueness", 300, &mut discrete_uniqueness);

    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
