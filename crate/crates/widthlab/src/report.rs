//! JSON report records. Every report re-parses into its own type.

use serde::{Deserialize, Serialize};
use widthlab_core::ball::BallWidthQuery;
use widthlab_core::engine::{
    derived_exponents, embedding_exponent, remark1_applies, width_exponent, DerivedExponents, EmbeddingCase,
    WidthStatus,
};
use widthlab_core::intersection::{intersection_width, interpolation_bound, InterpTarget, Regime, TwoBallSpec};
use widthlab_core::lattice::LatticeSum;
use widthlab_core::sobolev::{SobolevReport, SobolevSpec};
use widthlab_core::{Error, ExponentParams, OrderValue};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Json(_) => "Json",
            CliError::Csv(_) => "Csv",
            CliError::Io(_) => "Io",
            CliError::Usage(_) => "Usage",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
}

impl From<&CliError> for ErrorReport {
    fn from(e: &CliError) -> ErrorReport {
        ErrorReport { error: e.code().to_string(), message: e.to_string() }
    }
}

/// Status values that map to exit code 2.
pub fn status_exit_code(status: WidthStatus) -> i32 {
    match status {
        WidthStatus::Determined => 0,
        _ => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub params: ExponentParams,
    pub notation_id: Option<String>,
    pub sub_case: Option<String>,
    pub j0: usize,
    #[serde(with = "crate::extreal::vec")]
    pub thetas: Vec<f64>,
    pub status: WidthStatus,
    pub theta_star: Option<f64>,
    pub j_star: Option<usize>,
    pub remark1: bool,
    pub nu_star: Option<f64>,
    pub embedding_case: Option<EmbeddingCase>,
    pub boundary_overlap: bool,
    pub derived: DerivedExponents,
}

impl ExponentReport {
    pub fn build(params: &ExponentParams) -> Result<ExponentReport, CliError> {
        let r = width_exponent(params)?;
        let nu = embedding_exponent(params)?;
        let menu = r.menu.as_ref();
        Ok(ExponentReport {
            params: *params,
            notation_id: menu.map(|m| m.notation.id().to_string()),
            sub_case: menu.map(|m| m.sub_case.clone()),
            j0: menu.map_or(0, |m| m.j0()),
            thetas: menu.map(|m| m.thetas.clone()).unwrap_or_default(),
            status: r.status,
            theta_star: r.theta_star,
            j_star: r.j_star,
            remark1: remark1_applies(params)?,
            nu_star: nu.nu_star,
            embedding_case: nu.case,
            boundary_overlap: menu.is_some_and(|m| m.boundary_overlap()),
            derived: derived_exponents(params)?,
        })
    }

    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x}"));
        let thetas: Vec<String> = self.thetas.iter().map(|t| if t.is_infinite() { "inf".into() } else { format!("{t}") }).collect();
        format!(
            "notation: {}\nsub_case: {}\nj0: {}\nthetas: [{}]\nstatus: {}\ntheta_star: {}\nj_star: {}\nremark1: {}\nnu_star: {}\n",
            self.notation_id.as_deref().unwrap_or("-"),
            self.sub_case.as_deref().unwrap_or("-"),
            self.j0,
            thetas.join(", "),
            self.status.as_str(),
            opt(self.theta_star),
            self.j_star.map_or("-".into(), |j| j.to_string()),
            self.remark1,
            opt(self.nu_star),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    pub query: BallWidthQuery,
    pub value: f64,
    pub exact: bool,
}

impl BallReport {
    pub fn new(query: BallWidthQuery, v: OrderValue) -> BallReport {
        BallReport { query, value: v.value, exact: v.exact }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectReport {
    pub spec: TwoBallSpec,
    pub value: f64,
    pub exact: bool,
    pub regime: Regime,
    /// Radius of the `l_q` ball containing the intersection, when `q` lies between `p0` and `p1`.
    pub interpolation_q: Option<f64>,
    pub interpolation_2: Option<f64>,
}

impl IntersectReport {
    pub fn build(spec: &TwoBallSpec) -> Result<IntersectReport, CliError> {
        let (v, regime) = intersection_width(spec)?;
        Ok(IntersectReport {
            spec: *spec,
            value: v.value,
            exact: v.exact,
            regime,
            interpolation_q: interpolation_bound(spec, InterpTarget::Q).ok(),
            interpolation_2: interpolation_bound(spec, InterpTarget::Two).ok(),
        })
    }
}

/// One CSV row of a lattice run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeRow {
    pub n: u64,
    #[serde(rename = "S")]
    pub s: f64,
    pub nodes: u64,
    pub dominant_t: u64,
    pub dominant_m: u64,
}

impl From<&LatticeSum> for LatticeRow {
    fn from(s: &LatticeSum) -> LatticeRow {
        LatticeRow { n: s.n, s: s.sum, nodes: s.nodes, dominant_t: s.dominant_t, dominant_m: s.dominant_m }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub slope: f64,
    pub r_squared: f64,
    pub theta_star: f64,
    /// `|slope + theta*| / theta*`.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub params: ExponentParams,
    pub rows: Vec<LatticeRow>,
    pub fit: FitSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevRun {
    pub spec: SobolevSpec,
    pub report: SobolevReport,
    pub exponent: ExponentReport,
}
