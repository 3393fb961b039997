use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use misolab_core::difference;
use misolab_core::isometry::{self, default_m_max, GlobalOrder, SurveyOptions};
use misolab_core::shift::{self, localization_shift, shift_is_m_isometry, Positivity, WeightRule, WeightedShift};
use misolab_core::spectral::{
    algebraic_decompose, jordan_pair_equivalences, ortho_test_generalized, perturbation_analysis, PairCase, Refusal,
};
use misolab_core::vector::unit;
use misolab_core::{Degree, FiniteVector, GaussianRational, Matrix, Mode, Scalar, C64};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entry::{parse_scalar_arg, parse_vector_arg};
use crate::error::CliError;
use crate::report::{
    defect_norms, scalar_json, vector_json, AnalysisReport, BlockReport, DecompositionReport, OrbitDegree,
    OrthogonalityReport, PerturbationSummary, ShiftReport, SurveyReport, Verdict,
};
use crate::spec::{ModeTag, Operator, OperatorSpecFile};
use crate::suites;

/// Default float tolerance for defect and orthogonality tests.
pub const DEFAULT_FLOAT_TOL: f64 = isometry::DEFAULT_TOL;

/// Number of basis vectors `e_0, …` surveyed for a weighted shift.
pub const SHIFT_BASIS: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "misolab", version, about = "Analysis of m-isometric operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Zero-test tolerance (float mode only).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of orbit samples for difference tests.
    #[arg(long)]
    pub window: Option<usize>,
    /// Also write the JSON report to this path (`-` for stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Strict m-isometry order and per-basis orbit degrees.
    Order {
        file: PathBuf,
        #[arg(long)]
        mmax: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Generalized eigenspace decomposition and its certificate.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        mmax: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// m-isometry test for a weighted shift, or for the localization shift
    /// of a matrix at `--h`.
    Shift {
        file: PathBuf,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        mmax: Option<usize>,
        /// Vector for the localization shift of a matrix spec.
        #[arg(long)]
        h: Option<String>,
        /// Number of weights tabulated for a localization shift.
        #[arg(long)]
        prefix: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Orthogonality tests for generalized eigenvectors `h1`, `h2` of
    /// distinct unimodular eigenvalues `z1`, `z2`.
    Ortho {
        file: PathBuf,
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
        #[arg(long)]
        z1: String,
        #[arg(long)]
        z2: String,
        /// Pair from {-1,1} x {-i,i}, e.g. `1,0+1i` (opposite eigenvalues).
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Order bound for `A + N` with `N` nilpotent and commuting with `A`.
    Perturb {
        file_a: PathBuf,
        file_n: PathBuf,
        /// Use this m for `A` instead of its strict order.
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named invariant suite (`all` runs every suite).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    pub fn output(&self) -> Option<&PathBuf> {
        match self {
            Command::Order { common, .. }
            | Command::Decompose { common, .. }
            | Command::Shift { common, .. }
            | Command::Ortho { common, .. }
            | Command::Perturb { common, .. } => common.output.as_ref(),
            Command::Verify { output, .. } => output.as_ref(),
        }
    }
}

/// `MISOLAB_SEED` takes precedence over `--seed`.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    match std::env::var("MISOLAB_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Parse(format!("MISOLAB_SEED={v:?} is not an integer"))),
        Err(_) => Ok(flag.unwrap_or(0)),
    }
}

struct Tolerances {
    defect: f64,
    difference: f64,
}

fn tolerances<S: Scalar>(common: &Common, report: &mut AnalysisReport) -> Tolerances {
    match S::MODE {
        Mode::Exact => {
            if common.tol.is_some() {
                report.warnings.push("--tol is ignored in exact mode".into());
            }
            Tolerances { defect: 0.0, difference: 0.0 }
        }
        Mode::Float => {
            let t = Tolerances {
                defect: common.tol.unwrap_or(DEFAULT_FLOAT_TOL),
                difference: common.tol.unwrap_or(difference::DEFAULT_TOL),
            };
            report.parameters.tol = Some(t.defect);
            report.parameters.difference_tol = Some(t.difference);
            t
        }
    }
}

pub fn execute(command: &Command) -> Result<AnalysisReport, CliError> {
    match command {
        Command::Order { file, mmax, common } => {
            let spec = OperatorSpecFile::load(file)?;
            match spec.mode {
                ModeTag::Exact => order::<GaussianRational>(&spec, *mmax, common),
                ModeTag::Float => order::<C64>(&spec, *mmax, common),
            }
        }
        Command::Decompose { file, mmax, common } => {
            let spec = OperatorSpecFile::load(file)?;
            match spec.mode {
                ModeTag::Exact => decompose::<GaussianRational>(&spec, *mmax, common),
                ModeTag::Float => decompose::<C64>(&spec, *mmax, common),
            }
        }
        Command::Shift { file, m, mmax, h, prefix, common } => {
            let spec = OperatorSpecFile::load(file)?;
            let args = ShiftArgs { m: *m, mmax: *mmax, h: h.as_deref(), prefix: *prefix };
            match spec.mode {
                ModeTag::Exact => shift_cmd::<GaussianRational>(&spec, &args, common),
                ModeTag::Float => shift_cmd::<C64>(&spec, &args, common),
            }
        }
        Command::Ortho { file, h1, h2, z1, z2, eps, seed, common } => {
            let spec = OperatorSpecFile::load(file)?;
            let args = OrthoArgs { h1, h2, z1, z2, eps: eps.as_deref(), seed: resolve_seed(*seed)? };
            match spec.mode {
                ModeTag::Exact => ortho::<GaussianRational>(&spec, &args, common),
                ModeTag::Float => ortho::<C64>(&spec, &args, common),
            }
        }
        Command::Perturb { file_a, file_n, m, common } => {
            let a = OperatorSpecFile::load(file_a)?;
            let n = OperatorSpecFile::load(file_n)?;
            if a.mode != n.mode {
                return Err(CliError::Parse("the two spec files use different modes".into()));
            }
            match a.mode {
                ModeTag::Exact => perturb::<GaussianRational>(&a, &n, *m, common),
                ModeTag::Float => perturb::<C64>(&a, &n, *m, common),
            }
        }
        Command::Verify { suite, seed, .. } => {
            let seed = resolve_seed(*seed)?;
            let reports = suites::run(suite, seed)?;
            let mode = if reports.iter().all(|r| r.max_residual.is_none()) { ModeTag::Exact } else { ModeTag::Float };
            let mut report = AnalysisReport::new("verify", mode);
            report.parameters.seed = Some(seed);
            report.suites = reports;
            Ok(report)
        }
    }
}

fn matrix_operator<S: Scalar>(spec: &OperatorSpecFile, command: &str) -> Result<(Matrix<S>, Option<Vec<S>>), CliError> {
    match spec.resolve::<S>()? {
        Operator::Matrix { matrix, hints } => Ok((matrix, hints)),
        Operator::Shift { .. } => Err(CliError::Precondition(format!("{command} needs a matrix or jordan_blocks spec"))),
    }
}

fn basis_labels(n: usize) -> impl Iterator<Item = String> {
    (0..n).map(|j| format!("e{j}"))
}

fn order<S: Scalar>(spec: &OperatorSpecFile, mmax: Option<usize>, common: &Common) -> Result<AnalysisReport, CliError> {
    let mut report = AnalysisReport::new("order", spec.mode);
    let tol = tolerances::<S>(common, &mut report);
    match spec.resolve::<S>()? {
        Operator::Matrix { matrix, .. } => {
            let dim = matrix.dim();
            let m_max = mmax.unwrap_or_else(|| default_m_max(dim));
            let window = common.window.unwrap_or_else(|| difference::default_window(dim));
            let vectors: Vec<Vec<S>> = (0..dim).map(|j| unit(dim, j)).collect();
            let options = SurveyOptions {
                window: Some(window),
                m_max: Some(m_max),
                difference_tol: tol.difference,
                defect_tol: tol.defect,
            };
            let survey = isometry::local_isometry_survey(&matrix, &vectors, options)?;
            report.parameters.m_max = Some(m_max);
            report.parameters.window = Some(window);
            report.survey = Some(SurveyReport {
                orbits: basis_labels(dim)
                    .zip(&survey.per_vector)
                    .map(|(l, v)| OrbitDegree::new(l, v, S::MODE))
                    .collect(),
                order_lower_bound: None,
            });
            if let GlobalOrder::Dense(v) = &survey.global {
                report.verdict = Some(Verdict::from_order(v));
                report.defect_norms = defect_norms(v);
                if let Some(m) = v.order() {
                    if !survey.consistent_with(m) {
                        report.warnings.push(format!("an orbit has degree at least {m} although the defect vanishes"));
                    }
                }
            }
        }
        Operator::Shift { shift, polynomial } => {
            let m_max = mmax.unwrap_or_else(|| default_shift_m_max(&polynomial));
            report.parameters.m_max = Some(m_max);
            report.parameters.window = common.window;
            let order = shift_order(&shift, m_max, common.window, tol.difference)?;
            report.verdict = Some(Verdict::ShiftOrder { order, m_max, tested_m: None, is_m_isometry: None });
            shift_survey(&shift, common.window, tol.difference, &mut report)?;
        }
    }
    Ok(report)
}

fn default_shift_m_max<S: Scalar>(p: &misolab_core::Polynomial<S>) -> usize {
    match p.degree() {
        Degree::Finite(d) => d + 2,
        Degree::NegInfinity => 1,
    }
}

fn shift_order<S: Scalar>(
    w: &WeightedShift<S>,
    m_max: usize,
    window: Option<usize>,
    tol: f64,
) -> Result<Option<usize>, CliError> {
    for m in 1..=m_max {
        if shift_is_m_isometry(w, m, SHIFT_BASIS, window, tol)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn shift_survey<S: Scalar>(
    w: &WeightedShift<S>,
    window: Option<usize>,
    tol: f64,
    report: &mut AnalysisReport,
) -> Result<(), CliError> {
    let vectors: Vec<FiniteVector<S>> = (0..SHIFT_BASIS).map(FiniteVector::basis).collect();
    let options = SurveyOptions { window, m_max: None, difference_tol: tol, defect_tol: tol };
    let survey = isometry::local_isometry_survey(w, &vectors, options)?;
    let bound = match survey.global {
        GlobalOrder::LowerBound(b) => Some(b),
        GlobalOrder::Dense(_) => None,
    };
    report.survey = Some(SurveyReport {
        orbits: basis_labels(SHIFT_BASIS)
            .zip(&survey.per_vector)
            .map(|(l, v)| OrbitDegree::new(l, v, S::MODE))
            .collect(),
        order_lower_bound: bound,
    });
    Ok(())
}

fn decompose<S: Scalar>(spec: &OperatorSpecFile, mmax: Option<usize>, common: &Common) -> Result<AnalysisReport, CliError> {
    let mut report = AnalysisReport::new("decompose", spec.mode);
    let tol = tolerances::<S>(common, &mut report);
    let (matrix, hints) = matrix_operator::<S>(spec, "decompose")?;
    let d = algebraic_decompose(&matrix, hints.as_deref(), tol.defect)?;
    let m_max = mmax.unwrap_or_else(|| default_m_max(matrix.dim()));
    report.parameters.m_max = Some(m_max);
    let verdict = isometry::strict_order(&matrix, m_max, tol.defect);
    let reassembled = d.reassemble(&matrix, tol.defect)?;
    let diff = reassembled.sub(&matrix)?;
    let (reassembles, residual) = match S::MODE {
        Mode::Exact => (diff.is_zero(), None),
        Mode::Float => {
            let r = diff.max_abs();
            (r <= 1e-6 * matrix.max_abs().max(1.0), Some(r))
        }
    };
    let refusals = d
        .refusals
        .iter()
        .map(|r| match r {
            Refusal::OffCircle { z } => format!("eigenvalue {} is off the unit circle", misolab_core::scalar::format_scalar(z)),
            Refusal::NotOrthogonal { first, second } => format!("blocks {first} and {second} are not orthogonal"),
        })
        .collect();
    report.decomposition = Some(DecompositionReport {
        certified: d.certified(),
        blocks: d
            .blocks
            .iter()
            .map(|b| BlockReport {
                z: scalar_json(b.z()),
                dim: b.space.dim(),
                nilpotency_index: b.nilpotent.index,
                chain_depth: b.space.chain_depth,
                block_order: 2 * b.nilpotent.index - 1,
                unimodular: !d.refusals.contains(&Refusal::OffCircle { z: b.z().clone() }),
            })
            .collect(),
        gram_residual: scalar_json(&d.pairwise_gram),
        predicted_strict_order: d.predicted_strict_order,
        refusals,
        reassembles,
        reassembly_residual: residual,
    });
    if d.certified() && verdict.order() != Some(d.predicted_strict_order) {
        report.warnings.push("predicted order differs from the defect-operator order".into());
    }
    report.warnings.extend(d.warnings.iter().cloned());
    report.defect_norms = defect_norms(&verdict);
    report.verdict = Some(Verdict::from_order(&verdict));
    Ok(report)
}

struct ShiftArgs<'a> {
    m: Option<usize>,
    mmax: Option<usize>,
    h: Option<&'a str>,
    prefix: Option<usize>,
}

fn shift_cmd<S: Scalar>(spec: &OperatorSpecFile, args: &ShiftArgs, common: &Common) -> Result<AnalysisReport, CliError> {
    let mut report = AnalysisReport::new("shift", spec.mode);
    let tol = tolerances::<S>(common, &mut report);
    let (w, default_mmax) = match (spec.resolve::<S>()?, args.h) {
        (Operator::Shift { shift, polynomial }, None) => (shift, default_shift_m_max(&polynomial)),
        (Operator::Shift { .. }, Some(_)) => {
            return Err(CliError::Precondition("--h applies to matrix specs only".into()));
        }
        (Operator::Matrix { matrix, .. }, Some(h)) => {
            let h = parse_vector_arg::<S>(h)?;
            let m_max = default_m_max(matrix.dim());
            let need = args.m.unwrap_or(m_max).max(m_max);
            let prefix = args.prefix.unwrap_or_else(|| shift::default_prefix_len(need, SHIFT_BASIS));
            (localization_shift(&matrix, &h, prefix)?, m_max)
        }
        (Operator::Matrix { .. }, None) => {
            return Err(CliError::Precondition("a matrix spec needs --h to build a localization shift".into()));
        }
    };
    let m_max = args.mmax.unwrap_or(default_mmax);
    report.parameters.m_max = Some(m_max);
    report.parameters.m = args.m;
    report.parameters.window = common.window;
    let order = shift_order(&w, m_max, common.window, tol.difference)?;
    let is_m = match args.m {
        Some(m) => Some(shift_is_m_isometry(&w, m, SHIFT_BASIS, common.window, tol.difference)?),
        None => None,
    };
    report.verdict = Some(Verdict::ShiftOrder { order, m_max, tested_m: args.m, is_m_isometry: is_m });
    let shown = w.prefix_len().unwrap_or(8).min(8);
    let weights = (0..shown).map(|n| w.squared_weight(n).map(|x| scalar_json(&x))).collect::<Result<Vec<_>, _>>()?;
    let positivity = match (w.positivity(), w.rule()) {
        (Some(Positivity::Certified), _) => "certified for all n".to_string(),
        (Some(Positivity::PrefixOnly(n)), _) => format!("checked for n <= {n} only"),
        (None, WeightRule::Table(t)) => format!("weights tabulated for n < {}", t.len()),
        (None, _) => "not applicable".to_string(),
    };
    let window = common.window.unwrap_or_else(|| shift::default_window(args.m.or(order).unwrap_or(m_max)));
    report.shift = Some(ShiftReport { positivity, basis_count: SHIFT_BASIS, window, squared_weights: weights });
    shift_survey(&w, common.window, tol.difference, &mut report)?;
    Ok(report)
}

struct OrthoArgs<'a> {
    h1: &'a str,
    h2: &'a str,
    z1: &'a str,
    z2: &'a str,
    eps: Option<&'a str>,
    seed: u64,
}

fn ortho<S: Scalar>(spec: &OperatorSpecFile, args: &OrthoArgs, common: &Common) -> Result<AnalysisReport, CliError> {
    let mut report = AnalysisReport::new("ortho", spec.mode);
    let tol = tolerances::<S>(common, &mut report);
    let (t, _) = matrix_operator::<S>(spec, "ortho")?;
    let h1 = parse_vector_arg::<S>(args.h1)?;
    let h2 = parse_vector_arg::<S>(args.h2)?;
    let z1 = parse_scalar_arg::<S>(args.z1)?;
    let z2 = parse_scalar_arg::<S>(args.z2)?;
    let eps = match args.eps {
        Some(text) => {
            let v = parse_vector_arg::<S>(text)?;
            if v.len() != 2 {
                return Err(CliError::Parse("--eps needs exactly two entries".into()));
            }
            Some((v[0].clone(), v[1].clone()))
        }
        None => None,
    };
    let o = ortho_test_generalized(&t, &h1, &h2, &z1, &z2, eps, common.window, tol.defect)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let p = jordan_pair_equivalences(&t, &h1, &h2, &z1, &z2, common.window, tol.defect, &mut rng)?;
    report.parameters.window = Some(o.window);
    report.parameters.seed = Some(args.seed);
    if !o.consistent {
        report.warnings.push("orthogonality test result contradicts the theorem at this tolerance".into());
    }
    if !p.all_agree() {
        report.warnings.push("the five equivalent conditions disagree at this tolerance".into());
    }
    report.orthogonality = Some(OrthogonalityReport {
        case: match o.case {
            PairCase::Opposite => "opposite",
            PairCase::Generic => "generic",
        },
        sum_orbit_polynomial: o.sum_orbit_polynomial,
        eps_pair: o.eps_pair.as_ref().map(|(a, b)| [scalar_json(a), scalar_json(b)]),
        eps_orbits_polynomial: o.eps_orbits_polynomial,
        mixed_inner_vanishes: o.mixed_inner_vanishes,
        re_inner_vanishes: o.re_inner_vanishes,
        max_inner_sq: scalar_json(&o.max_inner_sq),
        consistent: o.consistent,
        conditions: p.conditions,
        conditions_agree: p.all_agree(),
        restricted_order: p.restricted_order,
        cross_gram_sq: scalar_json(&p.cross_gram_sq),
        cyclic_dims: [p.cyclic_dims.0, p.cyclic_dims.1],
        samples: p.samples,
    });
    Ok(report)
}

fn perturb<S: Scalar>(
    a_spec: &OperatorSpecFile,
    n_spec: &OperatorSpecFile,
    m: Option<usize>,
    common: &Common,
) -> Result<AnalysisReport, CliError> {
    let mut report = AnalysisReport::new("perturb", a_spec.mode);
    let tol = tolerances::<S>(common, &mut report);
    let (a, _) = matrix_operator::<S>(a_spec, "perturb")?;
    let (n, _) = matrix_operator::<S>(n_spec, "perturb")?;
    let r = perturbation_analysis(&a, &n, m, tol.defect)?;
    report.parameters.m = m;
    if let misolab_core::isometry::OrderKind::NotWithinBound(m_max) = r.observed.kind {
        report.warnings.push(format!("A + N has no order within {m_max}"));
    }
    report.verdict = Some(Verdict::from_order(&r.observed));
    report.defect_norms = defect_norms(&r.observed);
    report.perturbation = Some(PerturbationSummary {
        m_a: r.m_a,
        nu: r.nu,
        m_n_bound: r.m_n_bound,
        bound_holds: r.bound_holds,
        strict: r.strict,
        witness: r.witness.as_ref().map(|w| vector_json(w)),
    });
    Ok(report)
}
