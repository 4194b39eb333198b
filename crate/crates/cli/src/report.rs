use serde::Serialize;
use twoqubit::chsh::{max_violation, optimal_settings, BellSettings};
use twoqubit::entanglement::{concurrence, eof, negativity};
use twoqubit::filtering::{is_bell_diagonal, normal_form, NormalFormResult};
use twoqubit::qstate::matrix_to_pairs;
use twoqubit::{DensityMatrix, Error};

/// Tolerance on off-diagonal R̃ entries for the `bell_diagonal` flag.
pub const BELL_DIAGONAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub concurrence: f64,
    pub eof: f64,
    pub negativity: f64,
    pub purity: f64,
    pub entropy: f64,
    pub beta: f64,
    /// a, b (qubit A) then c, d (qubit B), three components each.
    pub optimal_settings: [f64; 12],
    pub bell_diagonal: bool,
    pub normal_form_beta: Option<f64>,
    pub normal_form_converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form_error: Option<String>,
}

/// Settings reported when R = 0: every choice gives the value 0 = β.
fn fallback_settings() -> BellSettings {
    let (x, z) = ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
    BellSettings::new(z, x, z, x).expect("unit vectors")
}

pub fn analyze(rho: &DensityMatrix, tol: f64, max_iter: usize) -> AnalysisReport {
    let c = concurrence(rho).value;
    let settings = match optimal_settings(rho) {
        Ok((s, _)) => s,
        Err(Error::DegenerateState) => fallback_settings(),
        Err(e) => unreachable!("optimal settings of a valid state: {e}"),
    };
    let (normal_form_beta, normal_form_converged, normal_form_error) =
        match normal_form(rho, tol, max_iter) {
            Ok(nf) => (Some(nf.beta()), nf.converged, None),
            Err(e) => (None, false, Some(e.to_string())),
        };
    AnalysisReport {
        concurrence: c,
        eof: eof(c).expect("concurrence lies in [0, 1]"),
        negativity: negativity(rho),
        purity: rho.purity(),
        entropy: rho.entropy(),
        beta: max_violation(rho).beta,
        optimal_settings: settings.to_array(),
        bell_diagonal: is_bell_diagonal(rho, BELL_DIAGONAL_TOL),
        normal_form_beta,
        normal_form_converged,
        normal_form_error,
    }
}

type Pairs = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize)]
pub struct FilterJson {
    pub a: Pairs,
    pub b: Pairs,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormJson {
    pub state: Pairs,
    pub filter: FilterJson,
    pub probability: f64,
    pub iterations: usize,
    pub converged: bool,
    pub marginal_defect: f64,
    pub beta: f64,
}

impl From<&NormalFormResult> for NormalFormJson {
    fn from(nf: &NormalFormResult) -> Self {
        NormalFormJson {
            state: matrix_to_pairs(nf.state.matrix()),
            filter: FilterJson {
                a: matrix_to_pairs(&nf.filter.a),
                b: matrix_to_pairs(&nf.filter.b),
            },
            probability: nf.success_probability,
            iterations: nf.iterations,
            converged: nf.converged,
            marginal_defect: nf.marginal_defect,
            beta: nf.beta(),
        }
    }
}
