use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::{json, Value};
use toruscauchy_core::diagnostics::{
    chain_singular, decay_classify, gh_verdict, singular_solution, ChainOutcome, DecayClass, DecayOptions,
    DecayReport, GhVerdict, SingularOptions, VerdictOptions, Witness,
};
use toruscauchy_core::diophantine::{
    siegel_scan, ResonanceMode, ScanOptions, SequenceSource, SiegelClass, SiegelReport,
};
use toruscauchy_core::fourier;
use toruscauchy_core::operators::{apply_product, symbol_roots};
use toruscauchy_core::solver::{residual, solve_product, ModeSolveOutcome, SolverOptions};
use toruscauchy_core::{LatticePoint, SpectralField};

use crate::config::{RhsSpec, RunConfig};
use crate::report::{cnum, coords, jnum, jopt, num, opt, write_json, xi_header, Table};
use crate::RunArgs;

pub fn run(name: &str, cfg: &RunConfig, args: &RunArgs) -> Result<u8> {
    if args.exact && !cfg.operator.factors().iter().all(|f| f.has_exact_data()) {
        bail!("--exact needs exact declarations (exact_mean, exact symbol data) on every factor");
    }
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let out = args.out.as_path();
    match name {
        "diagnose" => diagnose(cfg, args.exact, out),
        "solve" => solve(cfg, args.exact, out),
        "scan" => scan(cfg, args.exact, out),
        "singular" => singular(cfg, args.exact, out),
        "roots" => roots(cfg, out),
        other => bail!("unknown subcommand {other}"),
    }
}

fn solver_options(cfg: &RunConfig, exact: bool) -> SolverOptions {
    SolverOptions {
        tol_z: cfg.tol_z,
        tol_compat: cfg.tol_compat,
        resonance: if exact {
            ResonanceMode::Exact
        } else {
            ResonanceMode::Float { tol: cfg.tol_resonance }
        },
        integrator: cfg.integrator,
    }
}

fn scan_options(cfg: &RunConfig) -> ScanOptions {
    ScanOptions {
        extra_points: cfg.extra_points.clone(),
        tol: cfg.tol_resonance,
    }
}

fn point_json(xi: &LatticePoint) -> Value {
    json!(xi.coords())
}

fn siegel_json(report: &SiegelReport) -> Value {
    let m_hat = match report.classification {
        SiegelClass::Satisfied(m) => jnum(m),
        _ => Value::Null,
    };
    json!({
        "classification": report.classification.name(),
        "m_hat": m_hat,
        "fitted_exponent": jopt(report.fitted_exponent),
        "nonzero_resonances": report.nonzero_resonances,
        "resonant_shells": report.resonant_shells,
        "shell_count": report.shell_count,
        "shell_maxima": report.shell_maxima.iter().map(|(s, m)| json!([s, jnum(*m)])).collect::<Vec<_>>(),
    })
}

fn summary_line(label: &str, report: &SiegelReport) -> String {
    let m_hat = match report.classification {
        SiegelClass::Satisfied(m) => num(m),
        _ => String::new(),
    };
    format!(
        "summary source={label} classification={} m_hat={m_hat} fitted_exponent={} nonzero_resonances={} resonant_shells={} radius={}",
        report.classification.name(),
        opt(report.fitted_exponent),
        report.nonzero_resonances,
        report.resonant_shells.len(),
        report.radius,
    )
}

fn scan_table(dimension: usize, reports: &[(String, &SiegelReport)]) -> Table {
    let mut header = vec!["source".to_string()];
    header.extend(xi_header(dimension));
    header.extend(
        ["re_m0", "im_m0", "nearest_integer", "distance", "m_exponent", "resonant", "probe"].map(String::from),
    );
    let mut table = Table::new(header);
    for (label, report) in reports {
        for r in &report.records {
            let mut row = vec![label.clone()];
            let mut c = coords(r.xi.coords());
            c.resize(dimension, "0".to_string());
            row.extend(c);
            row.extend(cnum(r.value));
            row.push(r.tau.to_string());
            row.push(num(r.distance));
            row.push(opt(r.local_exponent));
            row.push(r.resonant.to_string());
            row.push(r.probe.to_string());
            table.push(row);
        }
        table.comment(summary_line(label, report));
    }
    table
}

fn emit_summaries(table_reports: &[(String, &SiegelReport)]) {
    for (label, report) in table_reports {
        println!("# {}", summary_line(label, report));
    }
}

fn scan(cfg: &RunConfig, exact: bool, out: &Path) -> Result<u8> {
    let opts = scan_options(cfg);
    let sources: Vec<(String, SequenceSource)> = match &cfg.sequence {
        Some(source) => vec![("sequence".to_string(), source.clone())],
        None => cfg
            .operator
            .factors()
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let frozen = f.freeze_mean();
                let source = if exact {
                    SequenceSource::ExactMean(frozen)
                } else {
                    SequenceSource::Mean(frozen)
                };
                (format!("factor{}", j + 1), source)
            })
            .collect(),
    };
    let reports = sources
        .iter()
        .map(|(label, s)| Ok((label.clone(), siegel_scan(s, &cfg.window, &opts)?)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<(String, &SiegelReport)> = reports.iter().map(|(l, r)| (l.clone(), r)).collect();
    scan_table(cfg.dimension, &refs).write(&out.join("scan.csv"))?;
    emit_summaries(&refs);
    Ok(0)
}

fn decay_json(decay: &DecayClass) -> Value {
    let rate = match decay {
        DecayClass::PolynomialDecay(r) | DecayClass::Growth(r) => jnum(*r),
        DecayClass::Inconclusive { shells } => json!(shells),
        _ => Value::Null,
    };
    json!({"class": decay.name(), "parameter": rate})
}

fn decay_report_json(report: &DecayReport) -> Value {
    json!({
        "classification": decay_json(&report.classification),
        "radii": report.radii.iter().map(|r| jnum(*r)).collect::<Vec<_>>(),
        "slopes": report.slopes.iter().map(|s| jopt(*s)).collect::<Vec<_>>(),
    })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::ResonantSet { factor, nonzero } => {
            json!({"kind": "resonant_set", "factor": factor, "nonzero": nonzero})
        }
        Witness::LiouvilleSuspect { factor, fitted_exponent } => {
            json!({"kind": "liouville_suspect", "factor": factor, "fitted_exponent": jopt(*fitted_exponent)})
        }
        Witness::SingularSolution { factor, modes, decay } => {
            json!({"kind": "singular_solution", "factor": factor, "modes": modes, "decay": decay_json(decay)})
        }
        Witness::ChainedSolution { seed_factor, decay, image_decay } => json!({
            "kind": "chained_solution",
            "seed_factor": seed_factor,
            "decay": decay_json(decay),
            "image_decay": decay_json(image_decay),
        }),
    }
}

fn verdict_json(cfg: &RunConfig, exact: bool, v: &GhVerdict) -> Value {
    let factors: Vec<Value> = v
        .factors
        .iter()
        .map(|f| {
            let h = &f.hoermander;
            json!({
                "index": f.index,
                "constant": f.constant,
                "resonant_count": f.resonant_count,
                "nonzero_resonances": f.nonzero_resonances,
                "resonant_sample": f.resonant_sample.iter().map(point_json).collect::<Vec<_>>(),
                "siegel": siegel_json(&f.siegel),
                "hormander": {
                    "evidence": f.evidence.name(),
                    "eta_hat": jnum(h.eta_hat),
                    "worst_point": point_json(&h.worst_point),
                    "worst_t": jnum(h.worst_t),
                    "bounded_below": h.bounded_below,
                    "scan_consistent": h.scan_consistent,
                    "sign_changing_count": h.sign_changing_modes.len(),
                    "sign_changing_sample": h.sign_changing_modes.iter().take(10).map(point_json).collect::<Vec<_>>(),
                },
            })
        })
        .collect();
    json!({
        "verdict": v.verdict.name(),
        "label": v.label,
        "trace": v.trace.iter().map(|t| json!({"rule": t.rule.name(), "detail": t.detail})).collect::<Vec<_>>(),
        "factors": factors,
        "commutators": v.commutators.iter().map(|(j, k, r)| json!({"j": j, "k": k, "residual": jnum(*r)})).collect::<Vec<_>>(),
        "notes": v.notes,
        "witnesses": v.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
        "run": {
            "dimension": cfg.dimension,
            "n_t": cfg.n_t,
            "window": cfg.window.radius(),
            "seed": cfg.seed,
            "exact": exact,
        },
    })
}

fn diagnose(cfg: &RunConfig, exact: bool, out: &Path) -> Result<u8> {
    let opts = VerdictOptions {
        scan: scan_options(cfg),
        exact,
        solver: solver_options(cfg, exact),
        sparsity: cfg.singular.sparsity,
        seed: cfg.seed,
        construct_witness: true,
    };
    let v = gh_verdict(&cfg.operator, &cfg.window, &opts)?;
    write_json(&out.join("verdict.json"), &verdict_json(cfg, exact, &v))?;
    let reports: Vec<(String, &SiegelReport)> =
        v.factors.iter().map(|f| (format!("factor{}", f.index), &f.siegel)).collect();
    scan_table(cfg.dimension, &reports).write(&out.join("scan.csv"))?;
    println!("{} ({})", v.verdict.name(), v.label);
    Ok(0)
}

fn solution_table(field: &SpectralField) -> Table {
    let dimension = field.window().dimension();
    let mut header = xi_header(dimension);
    header.extend(["t_index", "t", "re_u", "im_u"].map(String::from));
    let mut table = Table::new(header);
    let grid = fourier::grid(field.n_t());
    for (xi, mode) in field.modes() {
        if mode.iter().all(|v| v.norm() == 0.0) {
            continue;
        }
        for (i, (v, t)) in mode.iter().zip(&grid).enumerate() {
            let mut row = coords(xi.coords());
            row.push(i.to_string());
            row.push(num(*t));
            row.extend(cnum(*v));
            table.push(row);
        }
    }
    table
}

fn outcome_table(dimension: usize, stages: &[(usize, &[ModeSolveOutcome])]) -> Table {
    let mut header = vec!["factor".to_string()];
    header.extend(xi_header(dimension));
    header.extend(
        ["status", "integrator", "denominator_abs", "compatibility_abs", "relative_residual"].map(String::from),
    );
    let mut table = Table::new(header);
    for (factor, outcomes) in stages {
        for o in *outcomes {
            let mut row = vec![factor.to_string()];
            row.extend(coords(o.xi.coords()));
            row.push(o.status.name().to_string());
            row.push(o.integrator.name().to_string());
            row.push(opt(o.denominator.map(|d| d.norm())));
            row.push(opt(o.compatibility.map(|c| c.norm())));
            row.push(opt(o.residual));
            table.push(row);
        }
    }
    table
}

fn obstruction_table(dimension: usize, factor: usize, modes: &[LatticePoint], outcomes: &[ModeSolveOutcome]) -> Table {
    let mut header = vec!["factor".to_string()];
    header.extend(xi_header(dimension));
    header.extend(["re_compatibility", "im_compatibility"].map(String::from));
    let mut table = Table::new(header);
    for xi in modes {
        let c = outcomes
            .iter()
            .find(|o| &o.xi == xi)
            .and_then(|o| o.compatibility)
            .unwrap_or_default();
        let mut row = vec![factor.to_string()];
        row.extend(coords(xi.coords()));
        row.extend(cnum(c));
        table.push(row);
    }
    table
}

fn build_rhs(cfg: &RunConfig) -> Result<(SpectralField, Option<SpectralField>)> {
    let Some(rhs) = &cfg.rhs else {
        bail!("solve needs an `rhs` block");
    };
    match rhs {
        RhsSpec::Table { entries } => {
            let mut f = SpectralField::zeros(cfg.window.clone(), cfg.n_t)?;
            for e in entries {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); cfg.n_t];
                for m in &e.modes {
                    coeffs[fourier::index_of(m.k, cfg.n_t)] += m.value.value();
                }
                f.set_mode(&LatticePoint::new(e.xi.clone()), &fourier::inverse(&coeffs))?;
            }
            Ok((f, None))
        }
        RhsSpec::Manufactured { bandwidth, zero_origin } => {
            let u = SpectralField::random_bandlimited(cfg.window.clone(), cfg.n_t, *bandwidth, cfg.seed, *zero_origin)?;
            Ok((apply_product(&cfg.operator, &u)?, Some(u)))
        }
    }
}

fn solve(cfg: &RunConfig, exact: bool, out: &Path) -> Result<u8> {
    let (f, manufactured) = build_rhs(cfg)?;
    let opts = solver_options(cfg, exact);
    let result = solve_product(&cfg.operator, &f, cfg.orientation, &opts)?;
    let stages: Vec<(usize, &[ModeSolveOutcome])> =
        result.stages.iter().map(|s| (s.factor, s.outcomes.as_slice())).collect();
    outcome_table(cfg.dimension, &stages).write(&out.join("modes.csv"))?;
    solution_table(&result.field).write(&out.join("solution.csv"))?;

    let mut summary = json!({
        "partial": result.is_partial(),
        "stages": result.stages.len(),
        "orientation": format!("{:?}", cfg.orientation).to_lowercase(),
        "integrator": cfg.integrator.name(),
    });
    if let Some(ob) = &result.obstruction {
        let outcomes = &result.stages.last().expect("obstructed stage").outcomes;
        obstruction_table(cfg.dimension, ob.factor, &ob.modes, outcomes).write(&out.join("obstruction.csv"))?;
        summary["obstruction"] = json!({
            "factor": ob.factor,
            "modes": ob.modes.iter().map(point_json).collect::<Vec<_>>(),
        });
        println!("PARTIAL: {} incompatible mode(s) at factor {}", ob.modes.len(), ob.factor);
    } else {
        let r = residual(&cfg.operator, &result.field, &f)?;
        summary["relative_residual"] = jnum(r);
        if let Some(u) = &manufactured {
            summary["relative_error"] = jnum(result.field.relative_distance(u)?);
        }
        println!("solved: relative residual {r:e}");
    }
    write_json(&out.join("solve.json"), &summary)?;
    Ok(if result.is_partial() { 2 } else { 0 })
}

fn singular(cfg: &RunConfig, exact: bool, out: &Path) -> Result<u8> {
    let m = cfg.operator.len();
    let k = cfg.singular.factor.unwrap_or(m);
    let sopts = SingularOptions {
        sparsity: cfg.singular.sparsity,
        include_zero: cfg.singular.include_zero,
        n_t: cfg.n_t,
        resonance: solver_options(cfg, exact).resonance,
    };
    let summary = if k == m {
        let u = singular_solution(&cfg.operator.factors()[k - 1], &cfg.window, &sopts)?;
        let decay = decay_classify(&u, &DecayOptions::default());
        let image = apply_product(&cfg.operator, &u)?;
        solution_table(&u).write(&out.join("solution.csv"))?;
        println!("singular solution of factor {k}: {}", decay.classification.name());
        json!({
            "seed_factor": k,
            "modes": u.modes().filter(|(_, v)| v.iter().any(|z| z.norm() > 0.0)).count(),
            "decay": decay_report_json(&decay),
            "image_norm": jnum(image.sup_norm() / u.sup_norm().max(1e-300)),
        })
    } else {
        let chain = chain_singular(&cfg.operator, k, &cfg.window, &sopts, &solver_options(cfg, exact))?;
        match &chain.outcome {
            ChainOutcome::Witness { field, decay, image_decay, image_norm } => {
                solution_table(field).write(&out.join("solution.csv"))?;
                println!(
                    "chained singular solution from factor {k}: u {}, L u {}",
                    decay.classification.name(),
                    image_decay.classification.name()
                );
                json!({
                    "seed_factor": k,
                    "succeeded": chain.succeeded(),
                    "decay": decay_report_json(decay),
                    "image_decay": decay_report_json(image_decay),
                    "image_norm": jnum(*image_norm),
                })
            }
            ChainOutcome::Obstruction { factor, modes } => {
                let outcomes = &chain.stages.last().expect("obstructed stage").outcomes;
                obstruction_table(cfg.dimension, *factor, modes, outcomes).write(&out.join("obstruction.csv"))?;
                println!("chain obstructed at factor {factor} on {} mode(s)", modes.len());
                json!({
                    "seed_factor": k,
                    "succeeded": false,
                    "obstruction": {"factor": factor, "modes": modes.iter().map(point_json).collect::<Vec<_>>()},
                })
            }
        }
    };
    write_json(&out.join("singular.json"), &summary)?;
    Ok(0)
}

/// Roots `σ_j(ξ)` of the frozen symbol `∏(τ − M₀_j(ξ))`, or of the declared
/// polynomial, sorted by real then imaginary part.
fn roots(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let m = cfg.operator.len();
    let mut header = xi_header(cfg.dimension);
    for j in 1..=m {
        header.push(format!("re_sigma_{j}"));
        header.push(format!("im_sigma_{j}"));
    }
    let mut table = Table::new(header);
    for xi in cfg.window.points() {
        let mut sigma = match &cfg.polynomial {
            Some(coeffs) => symbol_roots(coeffs, xi)?,
            None => cfg
                .operator
                .factors()
                .iter()
                .map(|f| f.mean_multiplier(xi))
                .collect::<toruscauchy_core::Result<Vec<_>>>()?,
        };
        sigma.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut row = coords(xi.coords());
        for s in sigma {
            row.extend(cnum(s));
        }
        table.push(row);
    }
    let rows = table.len();
    table.write(&out.join("roots.csv"))?;
    println!("roots at {rows} lattice points");
    Ok(0)
}
