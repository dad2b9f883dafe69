use std::path::Path;
use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use bmv_core::equivalence::{
    cm_probe_exp_checked, cm_probe_general_f, cm_probe_invpow_checked, inverse_power_mixture, verify_lemma1, CMReport,
    Lemma1Report, MixtureTerm,
};
use bmv_core::matcore::{Classification, ExactMatrix, HermitianMatrix, MatrixFile, SeededStream};
use bmv_core::numeric::{fmt17, json_f64};
use bmv_core::search::{
    certify_instance, search_min_coeff, search_negative_term, Field, Normalization, Objective, SearchConfig, SearchRecord,
};
use bmv_core::trace_poly::{coefficient_scale, trace_poly};
use bmv_core::words::{
    coeff_bruteforce, coeff_bruteforce_exact, coeff_by_necklaces, coeff_by_necklaces_exact, exact_pair, rational_value,
    term_rows, BinaryWord, TermRow,
};
use bmv_core::BmvError;

use crate::args::*;
use crate::error::{CliError, Status};
use crate::grid::parse_grid;
use crate::instances;
use crate::manifest::RunManifest;
use crate::suites::{oracle_suites, SuiteKind, SuiteResult};

/// Relative cross-engine tolerance for `coeffs --engine all`.
pub const ENGINE_TOL: f64 = 1e-9;
/// Coefficients of 2×2 positive pairs below `-SEARCH_FLOOR · scale` are bugs.
pub const SEARCH_FLOOR: f64 = 1e-10;

/// What a command produced: the report text, its status, and an optional
/// one-line summary for standard output when the report went to a file.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub status: Status,
    pub summary: Option<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let (name, params) = match &cli.command {
        Command::Coeffs(a) => ("coeffs", to_value(a)),
        Command::VerifyLemma1(a) => ("verify-lemma1", to_value(a)),
        Command::ProbeCm(a) => ("probe-cm", to_value(a)),
        Command::Search(a) => ("search", to_value(a)),
        Command::OracleDiff(a) => ("oracle-diff", to_value(a)),
        Command::Gen(a) => ("gen", to_value(a)),
    };
    let mut m = RunManifest::new(name, params);
    let mut finish = |m: &mut RunManifest| {
        if cli.timing {
            m.duration_ms = Some(started.elapsed().as_millis());
        }
    };
    match &cli.command {
        Command::Coeffs(a) => coeffs(a, &mut m, &mut finish),
        Command::VerifyLemma1(a) => lemma1(a, &mut m, &mut finish),
        Command::ProbeCm(a) => probe(a, &mut m, &mut finish),
        Command::Search(a) => search(a, &mut m, &mut finish),
        Command::OracleDiff(a) => oracle(a, &mut m, &mut finish),
        Command::Gen(a) => gen(a, &mut m, &mut finish),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("arguments serialize")
}

type Finish<'a> = dyn FnMut(&mut RunManifest) + 'a;

fn read_pair(m: &mut RunManifest, a: &Path, b: &Path) -> Result<(MatrixFile, MatrixFile), CliError> {
    let fa = m.read_matrix(a)?;
    let fb = m.read_matrix(b)?;
    if fa.matrix.dim() != fb.matrix.dim() {
        return Err(CliError::Input(format!(
            "{} is {}x{} but {} is {}x{}",
            a.display(),
            fa.matrix.dim(),
            fa.matrix.dim(),
            b.display(),
            fb.matrix.dim(),
            fb.matrix.dim()
        )));
    }
    Ok((fa, fb))
}

fn csv_with_manifest(m: &RunManifest, header: &str, lines: &[String]) -> String {
    let mut s = format!("# manifest {}\n{header}\n", m.to_json());
    for l in lines {
        s.push_str(l);
        s.push('\n');
    }
    s
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Writes the report to `out` when given (returning the summary for
/// standard output), otherwise returns it for standard output.
fn emit(report: String, status: Status, summary: String, out: &Option<std::path::PathBuf>) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &report).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Outcome {
                report,
                status,
                summary: Some(summary),
            })
        }
        None => Ok(Outcome {
            report,
            status,
            summary: None,
        }),
    }
}

fn rational_json(q: &BigRational) -> Value {
    json!({"num": q.numer().to_string(), "den": q.denom().to_string(), "value": json_f64(rational_value(q))})
}

fn coeffs(args: &CoeffsArgs, m: &mut RunManifest, finish: &mut Finish) -> Result<Outcome, CliError> {
    let (fa, fb) = read_pair(m, &args.a, &args.b)?;
    let (a, b) = (&fa.matrix, &fb.matrix);
    let p = args.p;
    let r_max = args.r_max.unwrap_or(p);
    if r_max > p {
        return Err(CliError::Input(format!("--r-max {r_max} exceeds --p {p}")));
    }
    let n = a.dim();
    let (na, nb) = (a.matrix().frobenius_norm(), b.matrix().frobenius_norm());
    let want = |e: Engine| args.engine == e || args.engine == Engine::All;

    let dp = if want(Engine::Dp) { Some(trace_poly(a, b, p, Some(r_max))?.coeffs) } else { None };
    let per_r = |f: &dyn Fn(usize) -> bmv_core::Result<f64>| -> Result<Vec<f64>, CliError> {
        (0..=r_max).map(|r| f(r).map_err(CliError::from)).collect()
    };
    let brute = if want(Engine::Brute) { Some(per_r(&|r| coeff_bruteforce(a, b, p, r))?) } else { None };
    let neck = if want(Engine::Necklace) { Some(per_r(&|r| coeff_by_necklaces(a, b, p, r))?) } else { None };

    let mut status = Status::Ok;
    let mut max_dev: Option<f64> = None;
    let mut rows = Vec::new();
    let mut csv = Vec::new();
    for r in 0..=r_max {
        let scale = coefficient_scale(na, nb, n, p, r);
        let vals: Vec<f64> = [&dp, &brute, &neck].iter().filter_map(|v| v.as_ref().map(|v| v[r])).collect();
        let dev = if vals.len() > 1 {
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let d = if scale > 0.0 { (hi - lo) / scale } else { hi - lo };
            max_dev = Some(max_dev.unwrap_or(0.0).max(d));
            Some(d)
        } else {
            None
        };
        let get = |v: &Option<Vec<f64>>| v.as_ref().map(|v| json_f64(v[r])).unwrap_or(Value::Null);
        let cell = |v: &Option<Vec<f64>>| v.as_ref().map(|v| fmt17(v[r])).unwrap_or_default();
        rows.push(json!({
            "r": r,
            "dp": get(&dp),
            "brute": get(&brute),
            "necklace": get(&neck),
            "scale": json_f64(scale),
            "rel_deviation": dev.map(json_f64).unwrap_or(Value::Null),
        }));
        csv.push(format!(
            "{r},{},{},{},{},{}",
            cell(&dp),
            cell(&brute),
            cell(&neck),
            fmt17(scale),
            dev.map(fmt17).unwrap_or_default()
        ));
    }
    if let Some(d) = max_dev {
        if !(d <= ENGINE_TOL) {
            status = Status::CheckFailed(format!("engines disagree: relative deviation {} > {ENGINE_TOL:e}", fmt17(d)));
        }
    }

    let exact_pair_used = if args.exact || args.terms {
        match (&fa.exact, &fb.exact) {
            (Some(ea), Some(eb)) => Some((ea.clone(), eb.clone())),
            _ if args.exact => Some(exact_pair(a, b)?),
            _ => None,
        }
    } else {
        None
    };
    let mut exact_json = Value::Null;
    if args.exact {
        let (ea, eb) = exact_pair_used.as_ref().expect("exact pair formed");
        let mut list = Vec::new();
        for r in 0..=r_max {
            let q = coeff_by_necklaces_exact(ea, eb, p, r)?;
            if want(Engine::Brute) {
                let qb = coeff_bruteforce_exact(ea, eb, p, r)?;
                if qb != q && status == Status::Ok {
                    status = Status::CheckFailed(format!("exact brute force and necklace values differ at r = {r}"));
                }
            }
            list.push(json!({"r": r, "value": rational_json(&q)}));
        }
        exact_json = Value::Array(list);
    }
    let mut terms_json = Value::Null;
    let mut term_lines = Vec::new();
    if args.terms {
        let mut all: Vec<TermRow> = Vec::new();
        for r in 0..=r_max {
            all.extend(term_rows(a, b, p, r, exact_pair_used.as_ref().map(|(x, y)| (x, y)))?);
        }
        term_lines = all.iter().map(TermRow::to_csv_line).collect();
        terms_json = Value::Array(
            all.iter()
                .map(|t| {
                    json!({
                        "p": t.p,
                        "r": t.r,
                        "representative": t.representative.to_string(),
                        "orbit_size": t.orbit_size,
                        "value": json_f64(t.value),
                        "exact": t.exact.as_ref().map(rational_json).unwrap_or(Value::Null),
                    })
                })
                .collect(),
        );
    }

    finish(m);
    let report = match args.format {
        Format::Json => pretty(&json!({
            "manifest": m.to_json(),
            "n": n,
            "p": p,
            "engine": to_value(&args.engine),
            "coefficients": rows,
            "max_rel_deviation": max_dev.map(json_f64).unwrap_or(Value::Null),
            "exact": exact_json,
            "terms": terms_json,
        })),
        Format::Csv => {
            let mut s = csv_with_manifest(m, "r,dp,brute,necklace,scale,rel_deviation", &csv);
            if args.terms {
                s.push_str(TermRow::CSV_HEADER);
                s.push('\n');
                for l in &term_lines {
                    s.push_str(l);
                    s.push('\n');
                }
            }
            s
        }
    };
    let summary = format!(
        "coeffs n={n} p={p} engine={:?} max_rel_deviation={}",
        args.engine,
        max_dev.map(fmt17).unwrap_or_else(|| "-".into())
    );
    emit(report, status, summary, &args.out)
}

fn lemma1(args: &Lemma1Args, m: &mut RunManifest, finish: &mut Finish) -> Result<Outcome, CliError> {
    use rayon::prelude::*;
    let reports: Vec<Lemma1Report> = match (&args.a, args.random) {
        (Some(pa), None) => {
            let pb = args.b.as_ref().ok_or_else(|| CliError::Input("--a needs --b".into()))?;
            let (fa, fb) = read_pair(m, pa, pb)?;
            let p = args.p.ok_or_else(|| CliError::Input("--p is required with --a".into()))?;
            let r = args.r.ok_or_else(|| CliError::Input("--r is required with --a".into()))?;
            vec![verify_lemma1(&fa.matrix, &fb.matrix, p, r, args.tol)?]
        }
        (None, Some(count)) => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Input(format!("--random needs {flag}")));
            let dim = need(args.dim, "--dim")?;
            let pmax = need(args.pmax, "--pmax")?;
            let rmax = need(args.rmax, "--rmax")?;
            let seed = args.seed.ok_or_else(|| CliError::Input("--random needs --seed".into()))?;
            if dim == 0 || pmax == 0 {
                return Err(CliError::Input("--dim and --pmax must be at least 1".into()));
            }
            m.seeds.push(seed);
            let root = SeededStream::new(seed);
            let per_case: Vec<Vec<Lemma1Report>> = (0..count)
                .into_par_iter()
                .map(|k| -> bmv_core::Result<Vec<Lemma1Report>> {
                    let mut rng = root.split(k as u64);
                    let a = instances::pd(dim, 0.25, &mut rng)?;
                    let b = instances::hermitian(dim, &mut rng)?;
                    let mut out = Vec::new();
                    for p in 1..=pmax {
                        for r in 0..=rmax {
                            out.push(verify_lemma1(&a, &b, p, r, args.tol)?);
                        }
                    }
                    Ok(out)
                })
                .collect::<bmv_core::Result<_>>()?;
            per_case.into_iter().flatten().collect()
        }
        _ => return Err(CliError::Input("give either --a/--b/--p/--r or --random".into())),
    };
    let failures = reports.iter().filter(|r| !r.pass).count();
    let worst = reports.iter().map(|r| r.rel_residual).fold(0.0, f64::max);
    let status = if failures == 0 {
        Status::Ok
    } else {
        Status::CheckFailed(format!("{failures} of {} cases exceed tolerance {:e}", reports.len(), args.tol))
    };
    finish(m);
    let report = match args.format {
        Format::Json => pretty(&json!({
            "manifest": m.to_json(),
            "cases": reports.iter().map(Lemma1Report::to_json).collect::<Vec<_>>(),
            "failures": failures,
            "worst_rel_residual": json_f64(worst),
        })),
        Format::Csv => {
            let lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{},{},{}",
                        r.p,
                        r.r,
                        fmt17(r.lhs),
                        fmt17(r.rhs),
                        fmt17(r.abs_residual),
                        fmt17(r.rel_residual),
                        fmt17(r.scale),
                        r.pass
                    )
                })
                .collect();
            csv_with_manifest(m, "p,r,lhs,rhs,abs_residual,rel_residual,scale,pass", &lines)
        }
    };
    let summary = format!("verify-lemma1 cases={} failures={failures} worst={}", reports.len(), fmt17(worst));
    emit(report, status, summary, &args.out)
}

fn parse_mixture(v: &Value, path: &Path) -> Result<Vec<MixtureTerm>, CliError> {
    let bad = |why: &str| CliError::Input(format!("{}: {why}", path.display()));
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("expected {\"terms\": [...]}"))?;
    terms
        .iter()
        .map(|t| {
            let field = |k: &str| t.get(k).and_then(Value::as_f64).ok_or_else(|| bad(&format!("term without numeric {k:?}")));
            Ok(MixtureTerm {
                weight: field("weight")?,
                decay: field("decay")?,
            })
        })
        .collect()
}

/// Node count for non-integer inverse powers.
pub const MIXTURE_NODES: usize = 64;

fn probe(args: &ProbeArgs, m: &mut RunManifest, finish: &mut Finish) -> Result<Outcome, CliError> {
    let grid = parse_grid(&args.grid)?;
    let (fa, fb) = read_pair(m, &args.a, &args.b)?;
    let (a, b) = (&fa.matrix, &fb.matrix);
    let n = a.dim();
    let mut route = String::new();
    let report: CMReport = match args.mode {
        ProbeMode::Exp => {
            route.push_str("block-augmentation");
            cm_probe_exp_checked(a, b, args.rmax, &grid, args.tol)?
        }
        ProbeMode::Invpow => {
            if !(args.p > 0.0) || !args.p.is_finite() {
                return Err(CliError::Input(format!("--p {} must be positive", args.p)));
            }
            if args.p.fract() == 0.0 && args.p <= 64.0 {
                route.push_str("composition-sum");
                cm_probe_invpow_checked(a, b, args.p as usize, args.rmax, &grid, args.tol)?
            } else {
                let spec = a.require_positive_definite()?;
                let shift = spec.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
                route.push_str(&format!("exponential-mixture({MIXTURE_NODES} nodes, shift {})", fmt17(shift)));
                let mix = inverse_power_mixture(args.p, shift, MIXTURE_NODES)?;
                cm_probe_general_f(a, b, &mix, &grid, args.rmax, args.tol)?
            }
        }
        ProbeMode::Mixture => {
            let path = args.mixture.as_ref().ok_or_else(|| CliError::Input("--mode mixture needs --mixture FILE".into()))?;
            let v = m.read_json(path)?;
            let mix = parse_mixture(&v, path)?;
            route.push_str("exponential-mixture");
            cm_probe_general_f(a, b, &mix, &grid, args.rmax, args.tol)?
        }
    };
    let violations = report.violations.len();
    let status = if violations > 0 && n == 2 {
        Status::CheckFailed(format!("{violations} sign violations on a 2x2 pair"))
    } else {
        Status::Ok
    };
    finish(m);
    let out = match args.format {
        Format::Json => pretty(&json!({
            "manifest": m.to_json(),
            "n": n,
            "mode": to_value(&args.mode),
            "route": route,
            "report": report.to_json(),
        })),
        Format::Csv => {
            let mut lines = Vec::new();
            for (i, lambda) in report.lambda_grid.iter().enumerate() {
                for r in 0..report.values[i].len() {
                    let v = report.values[i][r];
                    let s = report.scales[i][r];
                    lines.push(format!("{},{r},{},{},{}", fmt17(*lambda), fmt17(v), fmt17(s), v < -report.tol * s));
                }
            }
            csv_with_manifest(m, "lambda,r,signed_value,scale,violation", &lines)
        }
    };
    let summary = format!(
        "probe-cm n={n} mode={:?} violations={violations} min_signed_value={}",
        args.mode,
        fmt17(report.min_signed_value)
    );
    emit(out, status, summary, &args.out)
}

fn search_config(args: &SearchArgs) -> Result<SearchConfig, CliError> {
    let mut config = match args.objective {
        ObjectiveArg::Coeff => {
            let p = args.p.ok_or_else(|| CliError::Input("--objective coeff needs --p".into()))?;
            let r = args.r.ok_or_else(|| CliError::Input("--objective coeff needs --r".into()))?;
            SearchConfig::coefficient(args.n, p, r, args.restarts, args.seed)
        }
        ObjectiveArg::Term => {
            let text = args.word.as_ref().ok_or_else(|| CliError::Input("--objective term needs --word".into()))?;
            let w: BinaryWord = text.parse().map_err(|e: BmvError| CliError::Input(format!("--word {text:?}: {e}")))?;
            if let Some(p) = args.p {
                if p != w.len() {
                    return Err(CliError::Input(format!("--p {p} does not match word length {}", w.len())));
                }
            }
            if let Some(r) = args.r {
                if r != w.weight() {
                    return Err(CliError::Input(format!("--r {r} does not match the number of B's ({})", w.weight())));
                }
            }
            SearchConfig::single_term(args.n, w, args.restarts, args.seed)
        }
    };
    if let Some(it) = args.iters {
        config.max_iters = it;
    }
    if let Some(nz) = args.normalization {
        config.normalization = match nz {
            NormalizationArg::TraceOne => Normalization::TraceOne,
            NormalizationArg::OperatorNormOne => Normalization::OperatorNormOne,
        };
    }
    if let Some(f) = args.field {
        config.field = match f {
            FieldArg::Complex => Field::Complex,
            FieldArg::Real => Field::Real,
        };
    }
    if let Some(k) = args.rank {
        config.rank = k;
    }
    config.diagonal = args.diagonal;
    config.validate()?;
    Ok(config)
}

fn search(args: &SearchArgs, m: &mut RunManifest, finish: &mut Finish) -> Result<Outcome, CliError> {
    let config = search_config(args)?;
    m.seeds.push(config.seed);
    let mut record: SearchRecord = match config.objective {
        Objective::Coefficient => search_min_coeff(&config)?,
        Objective::SingleTerm(_) => search_negative_term(&config)?,
    };
    if args.certify {
        record = certify_instance(record);
    }
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let write = |m: &mut RunManifest, name: &str, f: MatrixFile| m.write_file(&dir.join(name), &f.to_json_string());
        write(m, "a.json", MatrixFile::new(record.a.clone()))?;
        write(m, "b.json", MatrixFile::new(record.b.clone()))?;
        if let (Some(ea), Some(eb)) = (&record.exact_a, &record.exact_b) {
            write(m, "exact_a.json", MatrixFile::from_exact(ea.clone(), Classification::Positive)?)?;
            write(m, "exact_b.json", MatrixFile::from_exact(eb.clone(), Classification::Positive)?)?;
        }
    }
    // coefficients of 2×2 (and scalar) positive pairs are proved non-negative
    let status = if config.objective == Objective::Coefficient
        && config.n <= 2
        && record.best_value < -SEARCH_FLOOR * record.scale
    {
        Status::CheckFailed(format!(
            "negative coefficient {} on a {}x{} pair",
            fmt17(record.best_value),
            config.n,
            config.n
        ))
    } else {
        Status::Ok
    };
    finish(m);
    let report = pretty(&json!({"manifest": m.to_json(), "record": record.to_json()}));
    let summary = format!(
        "search objective={} n={} p={} r={} best={} scale={} certified={}{}",
        config.objective.name(),
        config.n,
        config.p,
        config.r,
        fmt17(record.best_value),
        fmt17(record.scale),
        record.is_certified(),
        record
            .exact_value
            .as_ref()
            .map(|q| format!(" exact={}", fmt17(rational_value(q))))
            .unwrap_or_default()
    );
    let mut out = emit(report, status, summary.clone(), &args.out)?;
    out.summary = Some(summary);
    Ok(out)
}

fn oracle(args: &OracleArgs, m: &mut RunManifest, finish: &mut Finish) -> Result<Outcome, CliError> {
    m.seeds.push(args.seed);
    let kind = match args.suite {
        SuiteArg::Quick => SuiteKind::Quick,
        SuiteArg::Full => SuiteKind::Full,
    };
    let results = oracle_suites(kind, args.seed)?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass()).map(|r| r.name.as_str()).collect();
    let status = if failed.is_empty() {
        Status::Ok
    } else {
        Status::CheckFailed(format!("failing suites: {}", failed.join(", ")))
    };
    finish(m);
    let report = match args.format {
        Format::Json => pretty(&json!({
            "manifest": m.to_json(),
            "suites": results.iter().map(SuiteResult::to_json).collect::<Vec<_>>(),
            "pass": failed.is_empty(),
        })),
        Format::Csv => {
            let lines: Vec<String> = results.iter().map(SuiteResult::to_csv_line).collect();
            csv_with_manifest(m, SuiteResult::CSV_HEADER, &lines)
        }
    };
    let summary = results
        .iter()
        .map(|r| format!("{:<16} {:>5} cases  worst {}  {}", r.name, r.cases, fmt17(r.worst), if r.pass() { "ok" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("\n");
    emit(report, status, summary, &args.out)
}

fn gen(args: &GenArgs, m: &mut RunManifest, finish: &mut Finish) -> Result<Outcome, CliError> {
    if args.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    if args.exact && args.kind != GenKind::IntegerGram {
        return Err(CliError::Input("--exact is only available for integer-gram".into()));
    }
    m.seeds.push(args.seed);
    let mut rng = SeededStream::new(args.seed);
    let h: HermitianMatrix = match args.kind {
        GenKind::Psd => instances::psd(args.n, &mut rng)?.with_classification(Classification::Positive),
        GenKind::Pd => {
            if !(args.shift > 0.0) {
                return Err(CliError::Input("--shift must be positive".into()));
            }
            instances::pd(args.n, args.shift, &mut rng)?.with_classification(Classification::PositiveDefinite)
        }
        GenKind::Hermitian => instances::hermitian(args.n, &mut rng)?,
        GenKind::IntegerGram => instances::integer_gram(args.n, &mut rng)?.with_classification(Classification::Positive),
    };
    let file = if args.exact {
        MatrixFile::from_exact(ExactMatrix::from_hermitian(&h)?, Classification::Positive)?
    } else {
        MatrixFile::new(h)
    };
    m.write_file(&args.out, &file.to_json_string())?;
    finish(m);
    Ok(Outcome {
        report: pretty(&json!({"manifest": m.to_json()})),
        status: Status::Ok,
        summary: None,
    })
}
