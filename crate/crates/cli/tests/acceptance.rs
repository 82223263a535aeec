//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{LN_10, PI};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toruscauchy_core::diagnostics::{
    chain_singular, decay_classify, gh_verdict, hoermander_scan, singular_solution, ChainOutcome, DecayClass,
    DecayOptions, SingularOptions, Verdict, VerdictOptions,
};
use toruscauchy_core::diophantine::{
    is_resonant, liouville_number, resonant_set, siegel_scan, torus_gap, ResonanceMode, ScanOptions, ScanPoint,
    SequenceSource, SiegelClass,
};
use toruscauchy_core::fourier;
use toruscauchy_core::operators::{apply_factor, apply_product, commutator_residual, constant_symbol, symbol_roots};
use toruscauchy_core::solver::{solve_factor, solve_factor_nonresonant, solve_mode, Orientation, SolverOptions};
use toruscauchy_core::{
    bump_pair, CauchyFactor, Interval, LatticePoint, LatticeWindow, PeriodicCoefficient, ProductOperator,
    QuadraticReal, SpectralField, ToroidalSymbol,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn coordinate_factor(n_t: usize, c: f64, exact: Option<&str>) -> CauchyFactor {
    let mut coef = PeriodicCoefficient::constant(n_t, re(c)).unwrap();
    if let Some(e) = exact {
        coef = coef.with_exact_mean(e.parse().unwrap()).unwrap();
    }
    CauchyFactor::new(coef, ToroidalSymbol::coordinate(1))
}

fn sorted(points: impl IntoIterator<Item = LatticePoint>) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = points.into_iter().map(|p| p.coords().to_vec()).collect();
    v.sort();
    v
}

fn rational_resonance() -> Check {
    let n_t = 1024;
    let f = coordinate_factor(n_t, -0.5, Some("-1/2"));
    let w = LatticeWindow::new(1, 1000).unwrap();
    let oracle = sorted(w.points().iter().filter(|p| p.coords()[0] % 2 == 0).cloned());
    let float = resonant_set(&f, &w, ResonanceMode::default()).map_err(|e| e.to_string())?;
    let exact = resonant_set(&f, &w, ResonanceMode::Exact).map_err(|e| e.to_string())?;
    // the symmetric window holds 1001 even points, 501 of them with ξ ≥ 0
    let nonnegative = oracle.iter().filter(|p| p[0] >= 0).count();
    ensure(oracle.len() == 1001 && nonnegative == 501, || format!("oracle has {} members", oracle.len()))?;
    ensure(sorted(float.members.clone()) == oracle, || "float resonant set differs from even ξ".into())?;
    ensure(sorted(exact.members.clone()) == oracle, || "exact resonant set differs from even ξ".into())?;

    let l = ProductOperator::new(vec![f.clone()]);
    let v = gh_verdict(&l, &w, &VerdictOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::NotGh, || format!("verdict {}", v.verdict.name()))?;

    let opts = SingularOptions { n_t, ..SingularOptions::default() };
    let u = singular_solution(&f, &w, &opts).map_err(|e| e.to_string())?;
    let res = apply_factor(&f, &u).unwrap().sup_norm() / u.sup_norm();
    ensure(res <= 1e-10, || format!("singular residual {res:e}"))?;
    let decay = decay_classify(&u, &DecayOptions::default()).classification;
    ensure(decay == DecayClass::NoDecay, || format!("decay {}", decay.name()))?;
    Ok(format!("1001 resonances, 501 with ξ ≥ 0 (float = exact), NOT_GH, witness residual {res:.1e}, NO_DECAY"))
}

fn badly_approximable() -> Check {
    let f = coordinate_factor(8, 2f64.sqrt(), Some("sqrt(2)"));
    let w = LatticeWindow::new(1, 10_000).unwrap();
    let report = siegel_scan(&SequenceSource::ExactMean(f), &w, &ScanOptions::default()).map_err(|e| e.to_string())?;
    let m_hat = match report.classification {
        SiegelClass::Satisfied(m) => m,
        ref other => return Err(format!("classification {}", other.name())),
    };
    ensure((0.8..=1.2).contains(&m_hat), || format!("M̂ = {m_hat}"))?;

    let by_xi = |x: i128| report.records.iter().find(|r| !r.probe && r.xi.coords() == [x]).unwrap();
    let (mut p, mut q) = (1i128, 1i128);
    let mut worst = 0.0f64;
    let mut count = 0;
    while q <= 10_000 {
        let r = by_xi(q);
        let oracle = 1.0 / (p as f64 + q as f64 * 2f64.sqrt());
        worst = worst.max((r.distance / oracle - 1.0).abs());
        ensure(r.tau == p, || format!("nearest integer at ξ={q}: {} vs {p}", r.tau))?;
        let best_before = (1..q).map(|x| by_xi(x).distance).fold(f64::INFINITY, f64::min);
        ensure(r.distance < best_before, || format!("ξ={q} is not a record minimum"))?;
        (p, q) = (p + 2 * q, p + q);
        count += 1;
    }
    ensure(worst <= 1e-12, || format!("relative gap error {worst:e}"))?;
    Ok(format!("SATISFIED M̂={m_hat:.4}; {count} convergent gaps within {worst:.1e} relative"))
}

fn liouville_probe() -> Check {
    let lambda = liouville_number(10, 5).map_err(|e| e.to_string())?;
    let fact = |k: i32| (1..=k).product::<i32>();
    let probes: Vec<ScanPoint> = (2..=4).map(|k| ScanPoint(vec![10i128.pow(fact(k) as u32)])).collect();
    let w = LatticeWindow::new(1, 64).unwrap();
    let report = siegel_scan(
        &SequenceSource::Linear(QuadraticReal::rational(lambda)),
        &w,
        &ScanOptions::with_extra_points(probes),
    )
    .map_err(|e| e.to_string())?;
    let mut exps = Vec::new();
    for k in 2..=4 {
        let xi = 10i128.pow(fact(k) as u32);
        let r = report.records.iter().find(|r| r.probe && r.xi.coords() == [xi]).unwrap();
        // λ·10^{k!} = Σ_{j≤k} 10^{k!−j!} + Σ_{j>k} 10^{k!−j!}
        let tau: i128 = (1..=k).map(|j| 10i128.pow((fact(k) - fact(j)) as u32)).sum();
        let tail: f64 = (k + 2..=5).map(|j| 10f64.powi(fact(k + 1) - fact(j))).sum();
        let ln_d = (fact(k) - fact(k + 1)) as f64 * LN_10 + tail.ln_1p();
        let oracle = -ln_d / ((tau + xi) as f64).ln();
        ensure(r.tau == tau, || format!("k={k}: τ* {} vs {tau}", r.tau))?;
        let m = r.local_exponent.ok_or("missing local exponent")?;
        ensure((m - oracle).abs() <= 1e-9, || format!("k={k}: m={m} oracle {oracle}"))?;
        exps.push(m);
    }
    ensure(exps[0] < exps[1] && exps[1] < exps[2], || format!("exponents {exps:?} not increasing"))?;
    ensure(exps[2] > 3.0, || format!("m at k=4 is {}", exps[2]))?;
    ensure(report.classification == SiegelClass::LiouvilleSuspect, || {
        format!("classification {}", report.classification.name())
    })?;
    Ok(format!("exponents {:.4} < {:.4} < {:.4}, LIOUVILLE_SUSPECT", exps[0], exps[1], exps[2]))
}

fn wave_coefficients(alpha: f64, beta: f64) -> Vec<ToroidalSymbol> {
    vec![
        ToroidalSymbol::scaled(re(2.0 * alpha), ToroidalSymbol::sqrt_laplacian()),
        ToroidalSymbol::scaled(re(beta * beta), ToroidalSymbol::laplacian()),
    ]
}

fn wave_operator() -> Check {
    let n_t = 64;
    let radius = 64;
    let w = LatticeWindow::new(2, radius).unwrap();
    let coeffs = wave_coefficients(0.0, 1.0);
    let l = ProductOperator::from_polynomial(n_t, &coeffs).map_err(|e| e.to_string())?;
    let mut root_err = 0.0f64;
    for xi in w.points() {
        let mut r = symbol_roots(&coeffs, xi).unwrap();
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        let n = xi.norm();
        root_err = root_err.max((r[0] - Complex64::new(0.0, -n)).norm()).max((r[1] - Complex64::new(0.0, n)).norm());
    }
    ensure(root_err <= 1e-10, || format!("root error {root_err:e}"))?;
    let mut checked = 0usize;
    for xi in w.points() {
        let bound = xi.norm_sq() as f64;
        for tau in -2 * radius..=2 * radius {
            let v = constant_symbol(&l, tau, xi).unwrap().norm();
            // τ = 0 attains the bound, so allow rounding there
            ensure(v >= bound * (1.0 - 1e-12), || format!("|L({tau},{xi})| = {v} < {bound}"))?;
            checked += 1;
        }
    }
    let v = gh_verdict(&l, &w, &VerdictOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Gh, || format!("verdict {}", v.verdict.name()))?;

    let degenerate = ProductOperator::from_polynomial(n_t, &wave_coefficients(1.0, 1.0)).map_err(|e| e.to_string())?;
    let is_square = |n: i64| {
        let r = (n as f64).sqrt().round() as i64;
        r * r == n
    };
    let oracle = sorted(w.points().iter().filter(|p| is_square(p.norm_sq())).cloned());
    for f in degenerate.factors() {
        let set = resonant_set(f, &w, ResonanceMode::default()).map_err(|e| e.to_string())?;
        ensure(sorted(set.members) == oracle, || "degenerate resonances differ from integer |ξ|".into())?;
    }
    let v = gh_verdict(&degenerate, &w, &VerdictOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::NotGh, || format!("degenerate verdict {}", v.verdict.name()))?;
    Ok(format!(
        "roots ±i|ξ| within {root_err:.1e}, {checked} symbol bounds, GH; degenerate: {} integer-|ξ| resonances, NOT_GH",
        oracle.len()
    ))
}

/// Periodic solution of `−i u' + c(t)ξ u = f(t)` sampled at `2πi/n_t` by RK4.
fn rk4_periodic(c: impl Fn(f64) -> f64, xi: f64, f: impl Fn(f64) -> Complex64, n_t: usize, steps: usize) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let rhs = |t: f64, u: Complex64, forcing: bool| {
        let src = if forcing { f(t) } else { Complex64::new(0.0, 0.0) };
        i * (src - c(t) * xi * u)
    };
    let h = 2.0 * PI / steps as f64;
    let march = |u0: Complex64, forcing: bool, mut record: Option<&mut Vec<Complex64>>| {
        let mut u = u0;
        let stride = steps / n_t;
        for s in 0..steps {
            if let Some(out) = record.as_deref_mut() {
                if s % stride == 0 {
                    out.push(u);
                }
            }
            let t = s as f64 * h;
            let k1 = rhs(t, u, forcing);
            let k2 = rhs(t + h / 2.0, u + k1 * (h / 2.0), forcing);
            let k3 = rhs(t + h / 2.0, u + k2 * (h / 2.0), forcing);
            let k4 = rhs(t + h, u + k3 * h, forcing);
            u += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
        }
        u
    };
    let particular = march(Complex64::new(0.0, 0.0), true, None);
    let monodromy = march(Complex64::new(1.0, 0.0), false, None);
    let u0 = particular / (1.0 - monodromy);
    let mut out = Vec::with_capacity(n_t);
    march(u0, true, Some(&mut out));
    out
}

fn solver_round_trip() -> Check {
    let n_t = 256;
    let sqrt2 = 2f64.sqrt();
    let coef = PeriodicCoefficient::from_fourier(n_t, &[(0, re(sqrt2)), (1, re(0.5)), (-1, re(0.5))]).unwrap();
    let f = CauchyFactor::new(coef, ToroidalSymbol::coordinate(1));
    let w = LatticeWindow::new(1, 32).unwrap();
    let opts = SolverOptions::default();
    let u = SpectralField::random_bandlimited(w, n_t, 8, 2024, true).unwrap();
    let rhs = apply_factor(&f, &u).unwrap();
    let fwd = solve_factor(&f, &rhs, Orientation::Forward, &opts).map_err(|e| e.to_string())?;
    let rev = solve_factor(&f, &rhs, Orientation::Reverse, &opts).map_err(|e| e.to_string())?;
    let trip = fwd.field.relative_distance(&u).unwrap();
    let agree = fwd.field.relative_distance(&rev.field).unwrap();
    ensure(trip <= 1e-8, || format!("round trip {trip:e}"))?;
    ensure(agree <= 1e-8, || format!("orientation disagreement {agree:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let grid = fourier::grid(n_t);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let xi = rng.gen_range(1..=8i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let modes: Vec<(f64, Complex64)> = (0..3)
            .map(|_| {
                let k = rng.gen_range(-4..=4) as f64;
                (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            })
            .collect();
        let forcing = |t: f64| modes.iter().map(|(k, a)| a * Complex64::new(0.0, k * t).exp()).sum::<Complex64>();
        let samples: Vec<Complex64> = grid.iter().map(|&t| forcing(t)).collect();
        let out = solve_mode(&f, &LatticePoint::new(vec![xi]), &samples, Orientation::Forward, &opts)
            .map_err(|e| e.to_string())?;
        let got = out.solution.ok_or_else(|| format!("ξ={xi} unsolved"))?;
        let oracle = rk4_periodic(|t| sqrt2 + t.cos(), xi as f64, forcing, n_t, 16_384);
        let err = got.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(err);
    }
    ensure(worst <= 1e-7, || format!("RK4 disagreement {worst:e}"))?;
    Ok(format!("round trip {trip:.1e}, orientations {agree:.1e}, 50 RK4 cases within {worst:.1e}"))
}

fn hormander_example() -> Check {
    let n_t = 256;
    let pair = bump_pair(n_t, Interval::new(0.5, 1.5).unwrap(), Interval::new(3.0, 4.0).unwrap())
        .map_err(|e| e.to_string())?;
    let coef = pair.combined();
    let b_max = coef.imag_part().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let f = CauchyFactor::new(coef, ToroidalSymbol::piecewise_example()).with_hormander(true);
    let radius = 64;
    let w = LatticeWindow::new(1, radius).unwrap();
    let h = hoermander_scan(&f, &w).map_err(|e| e.to_string())?;
    for x in (-radius..0).filter(|x| x % 2 != 0) {
        let xi = LatticePoint::new(vec![x]);
        ensure(h.sign_changing_modes.contains(&xi), || format!("ξ={x} missing from sign changes"))?;
    }
    ensure(h.eta_hat <= b_max + 1e-12, || format!("η̂ = {} > max b = {b_max}", h.eta_hat))?;

    let g = SpectralField::random_bandlimited(w.clone(), n_t, 6, 66, false).unwrap();
    let opts = SolverOptions::default();
    let mut solved = 0;
    let mut worst_ratio = 0.0f64;
    for (m, xi) in w.points().iter().enumerate() {
        if is_resonant(&f, xi, ResonanceMode::default()).unwrap() {
            continue;
        }
        let Ok(u) = solve_factor_nonresonant(&f, xi, g.mode(m), &opts) else {
            continue;
        };
        let gap = torus_gap(f.mean_multiplier(xi).unwrap());
        let bound = 2.0 * PI * (2.0 * PI * h.eta_hat).exp() / gap * fourier::sup_norm(g.mode(m));
        let ratio = fourier::sup_norm(&u) / bound;
        ensure(ratio <= 1.0, || format!("ξ={xi}: ‖û‖ exceeds the bound by {ratio}"))?;
        worst_ratio = worst_ratio.max(ratio);
        solved += 1;
    }
    ensure(solved > 0, || "no mode solved".into())?;
    Ok(format!(
        "{} sign-changing modes, η̂={:.4} ≤ max b={b_max:.4}, {solved} modes within bound (max ratio {worst_ratio:.3})",
        h.sign_changing_modes.len(),
        h.eta_hat
    ))
}

fn chained_singular() -> Check {
    let n_t = 1024;
    let resonant = CauchyFactor::new(
        PeriodicCoefficient::from_fn(n_t, |t| re(-0.5 + 0.2 * t.sin())).unwrap(),
        ToroidalSymbol::coordinate(1),
    );
    let other = CauchyFactor::new(
        PeriodicCoefficient::from_fn(n_t, |t| re(2f64.sqrt() + 0.1 * t.cos())).unwrap(),
        ToroidalSymbol::coordinate(1),
    );
    let l = ProductOperator::new(vec![resonant, other]);
    let w = LatticeWindow::new(1, 512).unwrap();
    let opts = SingularOptions { n_t, ..SingularOptions::default() };
    let report = chain_singular(&l, 1, &w, &opts, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let ChainOutcome::Witness { field, decay, image_decay, .. } = &report.outcome else {
        return Err("chain obstructed".into());
    };
    ensure(!decay.classification.is_rapid(), || "u₂ decays rapidly".into())?;
    ensure(image_decay.classification.is_rapid(), || {
        format!("L u₂ classified {}", image_decay.classification.name())
    })?;
    let image = apply_product(&l, field).unwrap().sup_norm() / field.sup_norm();
    ensure(report.succeeded(), || "chain did not succeed".into())?;
    Ok(format!(
        "u₂ {}, L u₂ {} (‖L u₂‖/‖u₂‖ = {image:.1e})",
        decay.classification.name(),
        image_decay.classification.name()
    ))
}

fn sandwich() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut violations = 0;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(-10.0..10.0);
        let d = (x - x.round()).abs();
        let g = torus_gap(re(x));
        if !(4.0 * d <= g * (1.0 + 1e-12) && g <= 2.0 * PI * d * (1.0 + 1e-12)) {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("1000 samples, zero violations".into())
}

fn commutation() -> Check {
    let n_t = 64;
    let w = LatticeWindow::new(2, 12).unwrap();
    let symbols = [ToroidalSymbol::coordinate(1), ToroidalSymbol::laplacian(), ToroidalSymbol::sqrt_laplacian()];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut pick = || {
            let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
            let s = symbols[rng.gen_range(0..symbols.len())].clone();
            CauchyFactor::constant(n_t, c, s).unwrap()
        };
        let (a, b) = (pick(), pick());
        let u = SpectralField::random_bandlimited(w.clone(), n_t, 10, seed, false).unwrap();
        worst = worst.max(commutator_residual(&a, &b, &u).unwrap());
    }
    ensure(worst <= 1e-12, || format!("constant commutator {worst:e}"))?;

    let a = CauchyFactor::new(
        PeriodicCoefficient::from_fn(n_t, |t| re(1.0 + 0.5 * t.cos())).unwrap(),
        ToroidalSymbol::coordinate(1),
    );
    let b = CauchyFactor::constant(n_t, re(2f64.sqrt()), ToroidalSymbol::coordinate(1)).unwrap();
    let u = SpectralField::random_bandlimited(w, n_t, 10, 99, false).unwrap();
    let variable = commutator_residual(&a, &b, &u).unwrap();
    ensure(variable > 1e-3, || format!("variable commutator only {variable:e}"))?;
    Ok(format!("constant pairs ≤ {worst:.1e}, variable pair {variable:.3}"))
}

fn determinism() -> Check {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let tmp = std::env::temp_dir().join(format!("toruscauchy-acceptance-{}", std::process::id()));
    let mut compared = 0;
    for (sub, cfg, files) in [
        ("diagnose", "chained.json", &["verdict.json", "scan.csv"][..]),
        ("diagnose", "rational.json", &["verdict.json", "scan.csv"][..]),
        ("scan", "sqrt2_scan.json", &["scan.csv"][..]),
        ("scan", "liouville.json", &["scan.csv"][..]),
    ] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = tmp.join(format!("{sub}-{cfg}-{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_toruscauchy"))
                .args([sub, "--seed", "17", "--config"])
                .arg(configs.join(cfg))
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || format!("{sub} {cfg} failed"))?;
            outputs.push(files.iter().map(|f| fs::read(out.join(f)).unwrap()).collect::<Vec<_>>());
        }
        ensure(outputs[0] == outputs[1], || format!("{sub} {cfg} differs between runs"))?;
        compared += files.len();
    }
    let _ = fs::remove_dir_all(&tmp);
    Ok(format!("{compared} artifacts byte-identical across repeated runs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rational resonance", rational_resonance),
        ("badly approximable slope", badly_approximable),
        ("Liouville probe", liouville_probe),
        ("wave operator", wave_operator),
        ("solver round trip", solver_round_trip),
        ("Hörmander bump example", hormander_example),
        ("chained singular solution", chained_singular),
        ("gap sandwich", sandwich),
        ("commutation", commutation),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why} ({secs:.1}s)", i + 1);
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
