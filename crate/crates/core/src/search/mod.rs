//! Minimization of coefficients `c_{p,r}` and single trace monomials over
//! pairs of positive matrices `A = G G*`, `B = H H*`, with exact
//! certification of negative values.

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{BmvError, Result};
use crate::matcore::{gram, Classification, CMatrix, ExactMatrix, HermitianMatrix, MatrixFile, SeededStream, StreamId};
use crate::numeric::{binomial, fmt17, json_f64};
use crate::trace_poly::coeff_value_and_gradient;
use crate::words::{coeff_by_necklaces, coeff_by_necklaces_exact, word_trace, word_trace_exact, word_trace_gradient, BinaryWord};

/// What is minimized: `c_{p,r}` or `Re Tr w` for one word `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Coefficient,
    SingleTerm(BinaryWord),
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Coefficient => "coefficient",
            Objective::SingleTerm(_) => "single-term",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `Tr A = Tr B = 1`.
    TraceOne,
    /// `‖A‖ = ‖B‖ = 1`.
    OperatorNormOne,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::TraceOne => "trace-one",
            Normalization::OperatorNormOne => "operator-norm-one",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trace-one" => Ok(Normalization::TraceOne),
            "operator-norm-one" => Ok(Normalization::OperatorNormOne),
            other => Err(BmvError::InvalidArgument(format!("unknown normalization {other:?}"))),
        }
    }
}

/// Entries allowed in the Gram factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Complex,
    /// Real symmetric pairs; every trace monomial is then real.
    Real,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Complex => "complex",
            Field::Real => "real",
        }
    }
}

/// Armijo backtracking parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRule {
    pub armijo_c: f64,
    pub backtrack: f64,
    pub initial_step: f64,
    pub max_backtracks: usize,
}

impl Default for StepRule {
    fn default() -> Self {
        Self {
            armijo_c: 1e-4,
            backtrack: 0.5,
            initial_step: 1.0,
            max_backtracks: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub objective: Objective,
    pub restarts: usize,
    pub max_iters: usize,
    pub step: StepRule,
    pub normalization: Normalization,
    pub field: Field,
    /// Keep both factors diagonal (commuting pairs).
    pub diagonal: bool,
    /// Number of nonzero columns in each Gram factor, so `rank A, rank B <= rank`.
    pub rank: usize,
    pub seed: u64,
    /// Restarts are run in batches of this size; early stopping is only
    /// checked between batches, so results do not depend on thread count.
    pub batch_size: usize,
    /// Stop once a negative value has been certified exactly.
    pub stop_on_certified: bool,
}

impl SearchConfig {
    pub fn coefficient(n: usize, p: usize, r: usize, restarts: usize, seed: u64) -> Self {
        Self {
            n,
            p,
            r,
            objective: Objective::Coefficient,
            restarts,
            max_iters: 200,
            step: StepRule::default(),
            normalization: Normalization::TraceOne,
            field: Field::Complex,
            diagonal: false,
            rank: n,
            seed,
            batch_size: 64,
            stop_on_certified: false,
        }
    }

    /// Real factors by default, so that the exact value is a real rational.
    pub fn single_term(n: usize, word: BinaryWord, restarts: usize, seed: u64) -> Self {
        Self {
            n,
            p: word.len(),
            r: word.weight(),
            objective: Objective::SingleTerm(word),
            restarts,
            max_iters: 200,
            step: StepRule::default(),
            normalization: Normalization::TraceOne,
            field: Field::Real,
            diagonal: false,
            rank: n,
            seed,
            batch_size: 64,
            stop_on_certified: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(BmvError::EmptyDimension);
        }
        if self.restarts == 0 {
            return Err(BmvError::InvalidArgument("restarts must be at least 1".into()));
        }
        if self.rank == 0 || self.rank > self.n {
            return Err(BmvError::InvalidRank { rank: self.rank, n: self.n });
        }
        if self.batch_size == 0 {
            return Err(BmvError::InvalidArgument("batch size must be at least 1".into()));
        }
        if self.p == 0 {
            return Err(BmvError::InvalidIndex("p must be at least 1".into()));
        }
        if self.r > self.p {
            return Err(BmvError::InvalidIndex(format!("r {} exceeds p {}", self.r, self.p)));
        }
        if let Objective::SingleTerm(w) = &self.objective {
            if w.len() != self.p || w.weight() != self.r {
                return Err(BmvError::InvalidIndex(format!(
                    "word {w} has length {} and weight {}, expected p = {} and r = {}",
                    w.len(),
                    w.weight(),
                    self.p,
                    self.r
                )));
            }
        }
        let s = &self.step;
        if !(s.armijo_c > 0.0 && s.armijo_c < 1.0 && s.backtrack > 0.0 && s.backtrack < 1.0 && s.initial_step > 0.0) {
            return Err(BmvError::InvalidArgument("invalid line-search parameters".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "p": self.p,
            "r": self.r,
            "objective": self.objective.name(),
            "word": match &self.objective {
                Objective::SingleTerm(w) => Value::String(w.to_string()),
                Objective::Coefficient => Value::Null,
            },
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "armijo_c": json_f64(self.step.armijo_c),
            "backtrack": json_f64(self.step.backtrack),
            "initial_step": json_f64(self.step.initial_step),
            "max_backtracks": self.step.max_backtracks,
            "normalization": self.normalization.as_str(),
            "field": self.field.as_str(),
            "diagonal": self.diagonal,
            "rank": self.rank,
            "seed": self.seed,
            "batch_size": self.batch_size,
            "stop_on_certified": self.stop_on_certified,
        })
    }

    fn perturbed_restarts(&self) -> usize {
        self.restarts / 10
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    None,
    /// Exact objective value of the rationalized instance, negative.
    RationalCertified { value: BigRational },
}

/// Descent history of the winning restart plus totals.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationSummary {
    pub restarts_run: usize,
    pub best_restart: usize,
    pub perturbed: bool,
    pub iterations: usize,
    pub accepted_steps: usize,
    pub initial_value: f64,
    /// Objective every 10 accepted iterations, then the final value.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchRecord {
    pub config: SearchConfig,
    pub best_value: f64,
    /// Magnitude reference `binomial(p,r) ‖A‖^{p-r} ‖B‖^r n`.
    pub scale: f64,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub factor_a: Option<CMatrix>,
    pub factor_b: Option<CMatrix>,
    /// Random streams that produced the winning restart's factors.
    pub streams: Vec<StreamId>,
    pub summary: IterationSummary,
    pub certification: Certification,
    /// Exact objective of the rationalized pair, whatever its sign.
    pub exact_value: Option<BigRational>,
    pub exact_a: Option<ExactMatrix>,
    pub exact_b: Option<ExactMatrix>,
    /// Bits of the dyadic rounding that produced `exact_a`, `exact_b`.
    pub rounding_bits: Option<u32>,
    pub certification_note: Option<String>,
}

impl SearchRecord {
    pub fn is_certified(&self) -> bool {
        matches!(self.certification, Certification::RationalCertified { .. })
    }

    pub fn to_json(&self) -> Value {
        let factor = |g: &Option<CMatrix>| match g {
            Some(g) => {
                let n = g.dim();
                let part = |f: &dyn Fn(usize, usize) -> f64| -> Value {
                    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| json_f64(f(i, j))).collect())).collect())
                };
                json!({"re": part(&|i, j| g[(i, j)].re), "im": part(&|i, j| g[(i, j)].im)})
            }
            None => Value::Null,
        };
        let rational = |q: &BigRational| json!({"num": q.numer().to_string(), "den": q.denom().to_string(), "value": json_f64(crate::words::rational_value(q))});
        let exact_file = |m: &Option<ExactMatrix>| match m {
            Some(m) => MatrixFile::from_exact(m.clone(), Classification::Positive)
                .map(|f| f.to_json())
                .unwrap_or(Value::Null),
            None => Value::Null,
        };
        json!({
            "config": self.config.to_json(),
            "best_value": json_f64(self.best_value),
            "best_value_text": fmt17(self.best_value),
            "scale": json_f64(self.scale),
            "a": MatrixFile::new(self.a.clone()).to_json(),
            "b": MatrixFile::new(self.b.clone()).to_json(),
            "factor_a": factor(&self.factor_a),
            "factor_b": factor(&self.factor_b),
            "streams": self.streams.iter().map(|s| json!({"seed": s.seed, "stream": s.stream})).collect::<Vec<_>>(),
            "summary": {
                "restarts_run": self.summary.restarts_run,
                "best_restart": self.summary.best_restart,
                "perturbed": self.summary.perturbed,
                "iterations": self.summary.iterations,
                "accepted_steps": self.summary.accepted_steps,
                "initial_value": json_f64(self.summary.initial_value),
                "history": self.summary.history.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
            },
            "certification": match &self.certification {
                Certification::None => json!({"status": "none"}),
                Certification::RationalCertified { value } => json!({"status": "rational-certified", "value": rational(value)}),
            },
            "exact_value": self.exact_value.as_ref().map(rational).unwrap_or(Value::Null),
            "exact_a": exact_file(&self.exact_a),
            "exact_b": exact_file(&self.exact_b),
            "rounding_bits": self.rounding_bits,
            "certification_note": self.certification_note,
        })
    }
}

/// Floating-point objective for a pair: `c_{p,r}` (necklace engine) or
/// `Re Tr w`.
pub fn evaluate_objective(objective: &Objective, a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<f64> {
    match objective {
        Objective::Coefficient => coeff_by_necklaces(a, b, p, r),
        Objective::SingleTerm(w) => Ok(word_trace(a, b, w)?.re),
    }
}

/// Exact objective for a rational pair.
pub fn evaluate_objective_exact(objective: &Objective, a: &ExactMatrix, b: &ExactMatrix, p: usize, r: usize) -> Result<BigRational> {
    match objective {
        Objective::Coefficient => coeff_by_necklaces_exact(a, b, p, r),
        Objective::SingleTerm(w) => Ok(word_trace_exact(a, b, w)?.re),
    }
}

fn magnitude_scale(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> f64 {
    binomial(p as u64, r as u64) as f64
        * a.operator_norm().powi((p - r) as i32)
        * b.operator_norm().powi(r as i32)
        * a.dim() as f64
}

struct Evaluator<'a> {
    config: &'a SearchConfig,
}

struct Point {
    ga: CMatrix,
    gb: CMatrix,
    value: f64,
}

impl Evaluator<'_> {
    fn value_and_grad(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(f64, CMatrix, CMatrix)> {
        let c = self.config;
        match &c.objective {
            Objective::Coefficient => {
                let g = coeff_value_and_gradient(a, b, c.p, c.r)?;
                Ok((g.value, g.grad_a.into_matrix(), g.grad_b.into_matrix()))
            }
            Objective::SingleTerm(w) => {
                let g = word_trace_gradient(a, b, w)?;
                Ok((g.value.re, g.grad_a.into_matrix(), g.grad_b.into_matrix()))
            }
        }
    }

    fn value(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
        let c = self.config;
        match &c.objective {
            Objective::Coefficient => Ok(coeff_value_and_gradient(a, b, c.p, c.r)?.value),
            Objective::SingleTerm(w) => Ok(word_trace(a, b, w)?.re),
        }
    }

    /// `ν(G)` with `ν = ‖G‖_F` (trace one) or `σ_max(G)` (norm one), and
    /// the gradient of `ν` at a point with `ν = 1`.
    fn norm_and_grad(&self, g: &CMatrix) -> (f64, CMatrix) {
        match self.config.normalization {
            Normalization::TraceOne => {
                let nu = g.frobenius_norm();
                (nu, g.scale(1.0 / nu))
            }
            Normalization::OperatorNormOne => {
                let s = gram(g).eigh();
                let nu = s.max().max(0.0).sqrt();
                let n = g.dim();
                let top = n - 1;
                // u u* G / σ
                let uu = CMatrix::from_fn(n, |i, j| s.basis[(i, top)] * s.basis[(j, top)].conj());
                (nu, uu.matmul(g).scale(1.0 / nu))
            }
        }
    }

    fn normalize(&self, g: &CMatrix) -> CMatrix {
        let (nu, _) = self.norm_and_grad(g);
        g.scale(1.0 / nu)
    }

    fn mask(&self, mut m: CMatrix) -> CMatrix {
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                if (self.config.diagonal && i != j) || j >= self.config.rank {
                    m[(i, j)] = num_complex::Complex64::new(0.0, 0.0);
                }
                if self.config.field == Field::Real {
                    m[(i, j)].im = 0.0;
                }
            }
        }
        m
    }

    fn point(&self, ga: CMatrix, gb: CMatrix) -> Result<Point> {
        let value = self.value(&gram(&ga), &gram(&gb))?;
        Ok(Point { ga, gb, value })
    }

    /// Gradient of the scale-invariant objective `f(GG*, HH*) / (ν(G)^{2(p-r)} ν(H)^{2r})`
    /// at a normalized point.
    fn reduced_gradient(&self, pt: &Point) -> Result<(f64, CMatrix, CMatrix)> {
        let c = self.config;
        let (value, ga_herm, gb_herm) = self.value_and_grad(&gram(&pt.ga), &gram(&pt.gb))?;
        let (_, dnu_a) = self.norm_and_grad(&pt.ga);
        let (_, dnu_b) = self.norm_and_grad(&pt.gb);
        let mut da = ga_herm.matmul(&pt.ga).scale(2.0);
        da.axpy(-2.0 * (c.p - c.r) as f64 * value, &dnu_a);
        let mut db = gb_herm.matmul(&pt.gb).scale(2.0);
        db.axpy(-2.0 * c.r as f64 * value, &dnu_b);
        Ok((value, self.mask(da), self.mask(db)))
    }

    fn random_factor(&self, rng: &mut SeededStream) -> CMatrix {
        let n = self.config.n;
        let g = CMatrix::from_fn(n, |i, j| {
            if (self.config.diagonal && i != j) || j >= self.config.rank {
                return num_complex::Complex64::new(0.0, 0.0);
            }
            match self.config.field {
                Field::Complex => rng.complex_normal(),
                Field::Real => num_complex::Complex64::new(rng.normal(), 0.0),
            }
        });
        self.normalize(&g)
    }

    fn perturb(&self, g: &CMatrix, rng: &mut SeededStream) -> CMatrix {
        let noise = self.mask(self.random_factor(rng));
        let mut out = g.clone();
        out.axpy(0.1, &noise);
        self.normalize(&out)
    }

    fn descend(&self, start: Point, index: usize, perturbed: bool) -> Result<RestartResult> {
        let rule = self.config.step;
        let initial_value = start.value;
        let mut pt = start;
        let mut history = vec![pt.value];
        let mut iterations = 0;
        let mut accepted = 0;
        while iterations < self.config.max_iters {
            iterations += 1;
            let (value, da, db) = self.reduced_gradient(&pt)?;
            pt.value = value;
            let gnorm = (da.frobenius_norm().powi(2) + db.frobenius_norm().powi(2)).sqrt();
            if !(gnorm > 1e-300) {
                break;
            }
            // unit-norm steepest descent direction; the slope along it is -gnorm
            let mut t = rule.initial_step;
            let mut next = None;
            for _ in 0..rule.max_backtracks {
                let mut ga = pt.ga.clone();
                ga.axpy(-t / gnorm, &da);
                let mut gb = pt.gb.clone();
                gb.axpy(-t / gnorm, &db);
                let ga = self.normalize(&ga);
                let gb = self.normalize(&gb);
                let cand = self.point(ga, gb)?;
                if cand.value.is_finite() && cand.value <= value - rule.armijo_c * t * gnorm {
                    next = Some(cand);
                    break;
                }
                t *= rule.backtrack;
            }
            match next {
                Some(cand) => {
                    pt = cand;
                    accepted += 1;
                    if accepted % 10 == 0 {
                        history.push(pt.value);
                    }
                }
                None => break,
            }
        }
        if history.last() != Some(&pt.value) {
            history.push(pt.value);
        }
        Ok(RestartResult {
            index,
            perturbed,
            initial_value,
            point: pt,
            iterations,
            accepted,
            history,
        })
    }
}

struct RestartResult {
    index: usize,
    perturbed: bool,
    initial_value: f64,
    point: Point,
    iterations: usize,
    accepted: usize,
    history: Vec<f64>,
}

fn better(a: &RestartResult, b: &RestartResult) -> bool {
    a.point.value < b.point.value || (a.point.value == b.point.value && a.index < b.index)
}

fn run_search(config: &SearchConfig) -> Result<SearchRecord> {
    config.validate()?;
    let eval = Evaluator { config };
    let root = SeededStream::new(config.seed);
    let perturbed = config.perturbed_restarts();
    let fresh = config.restarts - perturbed;
    let mut best: Option<RestartResult> = None;
    let mut record: Option<SearchRecord> = None;
    let mut run = 0usize;
    let mut start = 0usize;
    while start < config.restarts {
        // phase boundary is a batch boundary, so phase two sees the full phase-one best
        let end = if start < fresh {
            (start + config.batch_size).min(fresh)
        } else {
            (start + config.batch_size).min(config.restarts)
        };
        let seed_point = best.as_ref().map(|b| (b.point.ga.clone(), b.point.gb.clone()));
        let batch: Vec<RestartResult> = (start..end)
            .into_par_iter()
            .map(|index| {
                let mut rng = root.split(index as u64);
                let is_perturbed = index >= fresh;
                let (ga, gb) = match (&seed_point, is_perturbed) {
                    (Some((ga, gb)), true) => (eval.perturb(ga, &mut rng), eval.perturb(gb, &mut rng)),
                    _ => (eval.random_factor(&mut rng), eval.random_factor(&mut rng)),
                };
                let pt = eval.point(ga, gb)?;
                eval.descend(pt, index, is_perturbed)
            })
            .collect::<Result<_>>()?;
        run += batch.len();
        let improved = batch.iter().fold(None::<&RestartResult>, |acc, r| match acc {
            Some(a) if !better(r, a) => Some(a),
            _ => Some(r),
        });
        let batch_improved = match (improved, &best) {
            (Some(cand), Some(cur)) => better(cand, cur),
            (Some(_), None) => true,
            _ => false,
        };
        if batch_improved {
            let idx = improved.map(|r| r.index).expect("batch is nonempty");
            best = batch.into_iter().find(|r| r.index == idx);
        }
        start = end;
        if config.stop_on_certified && batch_improved {
            let cur = best.as_ref().expect("set above");
            if cur.point.value < 0.0 {
                let rec = certify_instance(assemble(config, cur, &root, run)?);
                if rec.is_certified() {
                    record = Some(rec);
                    break;
                }
            }
        }
    }
    match record {
        Some(r) => Ok(r),
        None => {
            let b = best.expect("at least one restart");
            let mut rec = assemble(config, &b, &root, run)?;
            if config.stop_on_certified {
                rec = certify_instance(rec);
            }
            Ok(rec)
        }
    }
}

fn assemble(config: &SearchConfig, best: &RestartResult, root: &SeededStream, run: usize) -> Result<SearchRecord> {
    let a = gram(&best.point.ga);
    let b = gram(&best.point.gb);
    let scale = magnitude_scale(&a, &b, config.p, config.r);
    Ok(SearchRecord {
        config: config.clone(),
        best_value: best.point.value,
        scale,
        a,
        b,
        factor_a: Some(best.point.ga.clone()),
        factor_b: Some(best.point.gb.clone()),
        streams: vec![root.split(best.index as u64).id()],
        summary: IterationSummary {
            restarts_run: run,
            best_restart: best.index,
            perturbed: best.perturbed,
            iterations: best.iterations,
            accepted_steps: best.accepted,
            initial_value: best.initial_value,
            history: best.history.clone(),
        },
        certification: Certification::None,
        exact_value: None,
        exact_a: None,
        exact_b: None,
        rounding_bits: None,
        certification_note: None,
    })
}

/// Projected gradient descent on Gram factors for `c_{p,r}`.
pub fn search_min_coeff(config: &SearchConfig) -> Result<SearchRecord> {
    if config.objective != Objective::Coefficient {
        return Err(BmvError::InvalidArgument("search_min_coeff needs the coefficient objective".into()));
    }
    run_search(config)
}

/// Descent on a single monomial `Re Tr w`; certifies the first negative
/// value that survives rational rounding.
pub fn search_negative_term(config: &SearchConfig) -> Result<SearchRecord> {
    if !matches!(config.objective, Objective::SingleTerm(_)) {
        return Err(BmvError::InvalidArgument("search_negative_term needs a single-term objective".into()));
    }
    run_search(config)
}

/// Dyadic precisions tried when rounding Gram factors.
pub const ROUNDING_BITS: [u32; 3] = [20, 30, 40];

/// Re-evaluates the objective exactly on a rationalized copy of the pair.
///
/// With stored factors, the factors are rounded to `2^-bits` (for each
/// entry of [`ROUNDING_BITS`] until the sign is negative) and the exact pair
/// is `G G*`, `H H*`, which keeps positivity. Without factors the matrices
/// themselves are converted exactly, subject to the `2^64` denominator
/// budget. `best_value` is never changed.
pub fn certify_instance(mut record: SearchRecord) -> SearchRecord {
    let c = &record.config;
    let (p, r) = (c.p, c.r);
    record.certification = Certification::None;
    record.certification_note = None;
    match (&record.factor_a, &record.factor_b) {
        (Some(fa), Some(fb)) => {
            let mut last: Option<(BigRational, ExactMatrix, ExactMatrix, u32)> = None;
            let mut note = None;
            for &bits in &ROUNDING_BITS {
                let attempt = (|| -> Result<(BigRational, ExactMatrix, ExactMatrix)> {
                    let ea = ExactMatrix::round_dyadic(fa, bits)?;
                    let eb = ExactMatrix::round_dyadic(fb, bits)?;
                    let ea = ea.matmul(&ea.adjoint());
                    let eb = eb.matmul(&eb.adjoint());
                    let v = evaluate_objective_exact(&c.objective, &ea, &eb, p, r)?;
                    Ok((v, ea, eb))
                })();
                match attempt {
                    Ok((v, ea, eb)) => {
                        let negative = v.is_negative();
                        last = Some((v, ea, eb, bits));
                        if negative || record.best_value >= 0.0 {
                            break;
                        }
                    }
                    Err(e) => {
                        note = Some(e.to_string());
                        break;
                    }
                }
            }
            if let Some((v, ea, eb, bits)) = last {
                if v.is_negative() {
                    record.certification = Certification::RationalCertified { value: v.clone() };
                } else if record.best_value < 0.0 {
                    note = Some(format!("rounded instances stayed non-negative up to {bits} bits"));
                }
                record.exact_value = Some(v);
                record.exact_a = Some(ea);
                record.exact_b = Some(eb);
                record.rounding_bits = Some(bits);
            }
            record.certification_note = note;
        }
        _ => {
            let attempt = ExactMatrix::from_hermitian(&record.a).and_then(|ea| {
                let eb = ExactMatrix::from_hermitian(&record.b)?;
                let v = evaluate_objective_exact(&record.config.objective, &ea, &eb, p, r)?;
                Ok((v, ea, eb))
            });
            match attempt {
                Ok((v, ea, eb)) => {
                    if v.is_negative() {
                        record.certification = Certification::RationalCertified { value: v.clone() };
                    }
                    record.exact_value = Some(v);
                    record.exact_a = Some(ea);
                    record.exact_b = Some(eb);
                    record.rounding_bits = None;
                }
                Err(e) => record.certification_note = Some(e.to_string()),
            }
        }
    }
    record
}

/// A record for a given pair, for certifying pairs that did not come out of
/// a search.
pub fn record_for_pair(config: &SearchConfig, a: HermitianMatrix, b: HermitianMatrix) -> Result<SearchRecord> {
    config.validate()?;
    crate::matcore::check_same_dim(&a, &b)?;
    let best_value = evaluate_objective(&config.objective, &a, &b, config.p, config.r)?;
    let scale = magnitude_scale(&a, &b, config.p, config.r);
    Ok(SearchRecord {
        config: config.clone(),
        best_value,
        scale,
        a,
        b,
        factor_a: None,
        factor_b: None,
        streams: Vec::new(),
        summary: IterationSummary {
            restarts_run: 0,
            best_restart: 0,
            perturbed: false,
            iterations: 0,
            accepted_steps: 0,
            initial_value: best_value,
            history: vec![best_value],
        },
        certification: Certification::None,
        exact_value: None,
        exact_a: None,
        exact_b: None,
        rounding_bits: None,
        certification_note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::coeff_bruteforce;
    use num_traits::Zero;

    fn word(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn config_validation() {
        let mut c = SearchConfig::coefficient(2, 6, 3, 4, 1);
        assert!(c.validate().is_ok());
        c.r = 7;
        assert!(c.validate().is_err());
        let mut t = SearchConfig::single_term(3, word("AABBAB"), 4, 1);
        t.r = 2;
        assert!(t.validate().is_err());
        let mut z = SearchConfig::coefficient(2, 6, 3, 0, 1);
        assert!(z.validate().is_err());
        z.restarts = 1;
        z.n = 0;
        assert!(z.validate().is_err());
    }

    #[test]
    fn scalar_term_is_nonnegative() {
        let c = SearchConfig::single_term(1, word("AABBAB"), 8, 3);
        let rec = search_negative_term(&c).unwrap();
        assert!(rec.best_value >= 0.0);
        assert!(!rec.is_certified());
    }

    #[test]
    fn commuting_search_stays_nonnegative() {
        let mut c = SearchConfig::coefficient(3, 6, 3, 6, 4);
        c.diagonal = true;
        let rec = search_min_coeff(&c).unwrap();
        assert!(rec.best_value >= 0.0);
        let fa = rec.factor_a.as_ref().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(fa[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn descent_is_monotone_and_consistent() {
        let c = SearchConfig::coefficient(3, 6, 3, 4, 11);
        let rec = search_min_coeff(&c).unwrap();
        assert!(rec.summary.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(rec.best_value <= rec.summary.initial_value);
        let re = coeff_bruteforce(&rec.a, &rec.b, 6, 3).unwrap();
        assert!((re - rec.best_value).abs() <= 1e-9 * rec.scale);
        assert!((rec.a.trace() - 1.0).abs() < 1e-12);
        assert!((rec.b.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn search_is_deterministic() {
        let c = SearchConfig::coefficient(2, 5, 2, 12, 7);
        let one = search_min_coeff(&c).unwrap();
        let two = search_min_coeff(&c).unwrap();
        assert_eq!(one.to_json(), two.to_json());
    }

    #[test]
    fn operator_norm_normalization() {
        let mut c = SearchConfig::coefficient(2, 4, 2, 3, 5);
        c.normalization = Normalization::OperatorNormOne;
        let rec = search_min_coeff(&c).unwrap();
        assert!((rec.a.operator_norm() - 1.0).abs() < 1e-10);
        assert!((rec.b.operator_norm() - 1.0).abs() < 1e-10);
        assert!(rec.summary.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_pair_certifies_to_none() {
        let c = SearchConfig::single_term(2, word("AB"), 1, 0);
        let z = HermitianMatrix::zeros(2).unwrap();
        let rec = certify_instance(record_for_pair(&c, z.clone(), z).unwrap());
        assert_eq!(rec.certification, Certification::None);
        assert!(rec.exact_value.unwrap().is_zero());
    }

    #[test]
    fn over_budget_is_reported() {
        let c = SearchConfig::single_term(1, word("AB"), 1, 0);
        let a = HermitianMatrix::scalar(1.0);
        let b = HermitianMatrix::scalar(2f64.powi(-70));
        let rec = certify_instance(record_for_pair(&c, a, b).unwrap());
        assert!(rec.certification_note.is_some());
        assert!(rec.exact_value.is_none());
    }

    #[test]
    fn finds_and_certifies_negative_monomial() {
        let c = SearchConfig::single_term(3, word("AABBAB"), 256, 1);
        let rec = search_negative_term(&c).unwrap();
        assert!(rec.best_value < 0.0);
        assert!(rec.is_certified());
        let exact = rec.exact_value.clone().unwrap();
        assert!(exact.is_negative());
        let again = certify_instance(rec.clone());
        assert_eq!(again.certification, rec.certification);
        assert_eq!(again.best_value, rec.best_value);
        let ea = rec.exact_a.as_ref().unwrap();
        assert!(ea.is_hermitian());
    }
}
