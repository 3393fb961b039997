//! Analysis reports, as JSON and as plain text.
//!
//! Scalars are written as rational strings in exact mode and as `[re, im]`
//! pairs in float mode, so an exact report never contains a float.

use std::fmt::{self, Write as _};

use misolab_core::difference::{DegreeKind, DegreeVerdict};
use misolab_core::isometry::{OrderKind, OrderVerdict, Witness};
use misolab_core::scalar::format_scalar;
use misolab_core::{Mode, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

use crate::spec::ModeTag;

pub fn scalar_json<S: Scalar>(z: &S) -> Value {
    match S::MODE {
        Mode::Exact => Value::String(format_scalar(z)),
        Mode::Float => {
            let c = z.to_c64();
            json!([c.re, c.im])
        }
    }
}

pub fn vector_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub vector: Value,
    /// `⟨β h, h⟩`.
    pub value: Value,
}

impl WitnessReport {
    pub fn new<S: Scalar>(w: &Witness<S>) -> Self {
        WitnessReport { vector: vector_json(&w.vector), value: scalar_json(&w.value) }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    StrictOrder {
        m: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessReport>,
    },
    NotWithinBound {
        m_max: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessReport>,
    },
    ShiftOrder {
        /// Smallest m within `m_max` passing the shift test.
        order: Option<usize>,
        m_max: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        tested_m: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        is_m_isometry: Option<bool>,
    },
}

impl Verdict {
    pub fn from_order<S: Scalar>(v: &OrderVerdict<S>) -> Self {
        let witness = v.witness.as_ref().map(WitnessReport::new);
        match v.kind {
            OrderKind::StrictOrder(m) => Verdict::StrictOrder { m, witness },
            OrderKind::NotWithinBound(m_max) => Verdict::NotWithinBound { m_max, witness },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectNorm {
    pub m: usize,
    /// Largest `|entry|²` of `β_m`.
    pub max_abs_sq: Value,
}

pub fn defect_norms<S: Scalar>(v: &OrderVerdict<S>) -> Vec<DefectNorm> {
    v.defect_norms
        .iter()
        .enumerate()
        .map(|(i, x)| DefectNorm { m: i + 1, max_abs_sq: scalar_json(x) })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitDegree {
    pub vector: String,
    /// `zero`, `polynomial` or `not_polynomial`.
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl OrbitDegree {
    pub fn new(vector: String, v: &DegreeVerdict, mode: Mode) -> Self {
        let (kind, degree) = match v.kind {
            DegreeKind::ZeroSequence => ("zero", None),
            DegreeKind::Polynomial(d) => ("polynomial", Some(d)),
            DegreeKind::NotPolynomialWithinWindow => ("not_polynomial", None),
        };
        let residual = (mode == Mode::Float).then_some(v.residual);
        OrbitDegree { vector, kind, degree, residual }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveyReport {
    pub orbits: Vec<OrbitDegree>,
    /// For operators without a dense defect: every m-isometry order is at
    /// least this, `null` when some orbit was not polynomial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_lower_bound: Option<Option<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub z: Value,
    pub dim: usize,
    pub nilpotency_index: usize,
    pub chain_depth: usize,
    /// `2ν − 1` for the block alone.
    pub block_order: usize,
    pub unimodular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub certified: bool,
    pub blocks: Vec<BlockReport>,
    /// Largest `|⟨u, v⟩|²` between bases of different blocks.
    pub gram_residual: Value,
    pub predicted_strict_order: usize,
    pub refusals: Vec<String>,
    pub reassembles: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reassembly_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub case: &'static str,
    pub sum_orbit_polynomial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_pair: Option<[Value; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_orbits_polynomial: Option<bool>,
    pub mixed_inner_vanishes: bool,
    pub re_inner_vanishes: bool,
    pub max_inner_sq: Value,
    pub consistent: bool,
    /// Conditions (i) to (v) of the Jordan-pair equivalence.
    pub conditions: [bool; 5],
    pub conditions_agree: bool,
    pub restricted_order: Option<usize>,
    pub cross_gram_sq: Value,
    pub cyclic_dims: [usize; 2],
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationSummary {
    pub m_a: usize,
    pub nu: usize,
    pub m_n_bound: usize,
    pub bound_holds: bool,
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub positivity: String,
    pub basis_count: usize,
    pub window: usize,
    pub squared_weights: Vec<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub command: String,
    pub mode: ModeTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub defect_norms: Vec<DefectNorm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survey: Option<SurveyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthogonality: Option<OrthogonalityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
    pub parameters: Parameters,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn new(command: &str, mode: ModeTag) -> Self {
        AnalysisReport {
            command: command.to_string(),
            mode,
            verdict: None,
            defect_norms: Vec::new(),
            survey: None,
            decomposition: None,
            orthogonality: None,
            perturbation: None,
            shift: None,
            suites: Vec::new(),
            parameters: Parameters::default(),
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn violations(&self) -> usize {
        self.suites.iter().map(|s| s.violations.len()).sum()
    }
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) if xs.len() == 2 && xs.iter().all(Value::is_number) => {
            let re = xs[0].as_f64().unwrap_or(f64::NAN);
            let im = xs[1].as_f64().unwrap_or(f64::NAN);
            if im == 0.0 {
                format!("{re:.6e}")
            } else {
                format!("{re:.6e}{im:+.6e}i")
            }
        }
        Value::Array(xs) => format!("({})", xs.iter().map(text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            ModeTag::Exact => "exact",
            ModeTag::Float => "float",
        };
        writeln!(f, "{} ({mode})", self.command)?;
        match &self.verdict {
            Some(Verdict::StrictOrder { m, witness }) => {
                writeln!(f, "verdict: strict {m}-isometry")?;
                if let Some(w) = witness {
                    writeln!(f, "  not a {}-isometry: <beta h, h> = {} at h = {}", m - 1, text(&w.value), text(&w.vector))?;
                }
            }
            Some(Verdict::NotWithinBound { m_max, witness }) => {
                writeln!(f, "verdict: not an m-isometry for any m <= {m_max}")?;
                if let Some(w) = witness {
                    writeln!(f, "  <beta_{m_max} h, h> = {} at h = {}", text(&w.value), text(&w.vector))?;
                }
            }
            Some(Verdict::ShiftOrder { order, m_max, tested_m, is_m_isometry }) => {
                match order {
                    Some(m) => writeln!(f, "verdict: shift passes the {m}-isometry test (first m <= {m_max})")?,
                    None => writeln!(f, "verdict: shift fails the m-isometry test for every m <= {m_max}")?,
                }
                if let (Some(m), Some(ok)) = (tested_m, is_m_isometry) {
                    writeln!(f, "  {m}-isometry: {ok}")?;
                }
            }
            None => {}
        }
        if !self.defect_norms.is_empty() {
            let parts: Vec<String> = self.defect_norms.iter().map(|d| format!("{}:{}", d.m, text(&d.max_abs_sq))).collect();
            writeln!(f, "max |beta_m|^2: {}", parts.join(" "))?;
        }
        if let Some(s) = &self.survey {
            let mut line = String::from("orbit degrees:");
            for o in &s.orbits {
                match o.degree {
                    Some(d) => write!(line, " {}={d}", o.vector)?,
                    None => write!(line, " {}={}", o.vector, o.kind)?,
                }
            }
            writeln!(f, "{line}")?;
            if let Some(b) = s.order_lower_bound {
                match b {
                    Some(m) => writeln!(f, "order lower bound: {m}")?,
                    None => writeln!(f, "order lower bound: none (non-polynomial orbit)")?,
                }
            }
        }
        if let Some(d) = &self.decomposition {
            writeln!(f, "decomposition: {}", if d.certified { "certified" } else { "refused" })?;
            for b in &d.blocks {
                writeln!(
                    f,
                    "  z = {}  dim {}  nilpotency {}  block order {}",
                    text(&b.z),
                    b.dim,
                    b.nilpotency_index,
                    b.block_order
                )?;
            }
            writeln!(f, "  gram residual {}", text(&d.gram_residual))?;
            writeln!(f, "  predicted strict order {}", d.predicted_strict_order)?;
            for r in &d.refusals {
                writeln!(f, "  refused: {r}")?;
            }
        }
        if let Some(o) = &self.orthogonality {
            writeln!(f, "pair case: {}", o.case)?;
            writeln!(f, "  orbit of h1 + h2 polynomial: {}", o.sum_orbit_polynomial)?;
            if let (Some(p), Some(ok)) = (&o.eps_pair, o.eps_orbits_polynomial) {
                writeln!(f, "  eps pair ({}, {}) orbits polynomial: {ok}", text(&p[0]), text(&p[1]))?;
            }
            writeln!(f, "  <T^n h1, T^n h2> = 0: {}  real part = 0: {}", o.mixed_inner_vanishes, o.re_inner_vanishes)?;
            writeln!(f, "  consistent with the theorem: {}", o.consistent)?;
            let c = o.conditions;
            writeln!(f, "  conditions (i)-(v): {} {} {} {} {}", c[0], c[1], c[2], c[3], c[4])?;
            if let Some(m) = o.restricted_order {
                writeln!(f, "  restriction is a strict {m}-isometry")?;
            }
        }
        if let Some(p) = &self.perturbation {
            writeln!(f, "perturbation: m_A = {}, nu = {}, bound {}", p.m_a, p.nu, p.m_n_bound)?;
            writeln!(f, "  bound holds: {}  strict at bound: {}", p.bound_holds, p.strict)?;
        }
        if let Some(s) = &self.shift {
            writeln!(f, "shift positivity: {}", s.positivity)?;
            let ws: Vec<String> = s.squared_weights.iter().map(text).collect();
            writeln!(f, "  |lambda_n|^2: {}", ws.join(" "))?;
        }
        for s in &self.suites {
            let status = if s.violations.is_empty() { "ok" } else { "VIOLATED" };
            write!(f, "suite {}: {status} ({} cases, seed {})", s.name, s.cases, s.seed)?;
            if let Some(r) = s.max_residual {
                write!(f, " max residual {r:.3e}")?;
            }
            writeln!(f)?;
            for v in &s.violations {
                writeln!(f, "  {v}")?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
