//! Monte Carlo property suites over the bounds, filtering and spectrum
//! results.
//!
//! Every check yields a margin that is non-negative when the property holds
//! (tolerances included). Sample `i` of property `k` draws from
//! `SeedStream::new(seed).child(k).rng(i)`, so reports are reproducible and
//! independent of the thread count.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chsh::{
    bell_diagonal_beta, bell_operator, chsh_value, max_over_unitaries, max_violation, BellSettings,
};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::families::{
    extremal_form_state, mems, random_extremal_form, region_state, spectrum_maximizer, BoundCurve,
    RegionKind,
};
use crate::filtering::{apply_filter, normal_form, transform_correlation, LocalFilter};
use crate::qstate::{
    random_filter_factor, random_simplex, random_unit_vector, random_unitary, sample_state_with,
    state_to_json, DensityMatrix, SeedStream, StateKind,
};

/// Filter probes per state in the filtering suite.
pub const PROBES_PER_STATE: usize = 100;
/// Random unitaries per spectrum in the spectrum suite.
pub const UNITARIES_PER_SPECTRUM: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Bounds,
    Filtering,
    Spectrum,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Filtering => "filtering",
            Suite::Spectrum => "spectrum",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Bounds, Suite::Filtering, Suite::Spectrum, Suite::All]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown suite '{s}'")))
    }
}

/// Outcome of one property over all its samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub suite: &'static str,
    pub property: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Smallest margin seen; `None` when no check applied.
    pub worst_margin: Option<f64>,
    /// JSON of the first violating state, by sample index.
    pub offending_state: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub samples: usize,
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::passed)
    }
}

struct Check {
    margin: f64,
    state: DensityMatrix,
}

fn check(margin: f64, state: &DensityMatrix) -> Check {
    Check {
        margin: if margin.is_nan() {
            f64::NEG_INFINITY
        } else {
            margin
        },
        state: *state,
    }
}

fn run_property<F>(
    suite: &'static str,
    property: &'static str,
    stream: SeedStream,
    n: usize,
    f: F,
) -> PropertyReport
where
    F: Fn(&mut ChaCha20Rng, usize) -> Vec<Check> + Sync,
{
    let per_sample: Vec<Vec<Check>> = (0..n)
        .into_par_iter()
        .map(|i| f(&mut stream.rng(i as u64), i))
        .collect();
    let checks = per_sample.iter().flatten();
    PropertyReport {
        suite,
        property,
        checked: checks.clone().count(),
        violations: checks.clone().filter(|c| c.margin < 0.0).count(),
        worst_margin: checks.clone().map(|c| c.margin).reduce(f64::min),
        offending_state: checks
            .clone()
            .find(|c| c.margin < 0.0)
            .map(|c| state_to_json(&c.state)),
    }
}

fn random_settings<R: Rng + ?Sized>(rng: &mut R) -> BellSettings {
    let mut v = || random_unit_vector(rng);
    BellSettings::new(v(), v(), v(), v()).expect("unit vectors")
}

fn random_filter<R: Rng + ?Sized>(rng: &mut R) -> LocalFilter {
    LocalFilter::new(random_filter_factor(rng), random_filter_factor(rng)).expect("finite factors")
}

/// Runs `suite` with `samples` draws per property.
pub fn run_suite(suite: Suite, samples: usize, seed: u64) -> SuiteReport {
    let properties = match suite {
        Suite::Bounds => bounds(samples, seed),
        Suite::Filtering => filtering(samples, seed),
        Suite::Spectrum => spectrum(samples, seed),
        Suite::All => {
            let mut all = bounds(samples, seed);
            all.extend(filtering(samples, seed));
            all.extend(spectrum(samples, seed));
            all
        }
    };
    SuiteReport {
        suite: suite.name(),
        samples,
        seed,
        properties,
    }
}

fn bounds(n: usize, seed: u64) -> Vec<PropertyReport> {
    let root = SeedStream::new(seed).child(0);
    let s = "bounds";
    vec![
        run_property(s, "region-containment", root.child(0), n, |rng, _| {
            let rho = sample_state_with(rng, StateKind::MixedHs);
            let (c, beta) = (concurrence(&rho).value, max_violation(&rho).beta);
            let lower = beta - BoundCurve::Lower.eval(c) + 1e-9;
            let upper = BoundCurve::Upper.eval(c) + 1e-9 - beta;
            vec![check(lower.min(upper), &rho)]
        }),
        run_property(
            s,
            "pure-states-on-upper-curve",
            root.child(1),
            n,
            |rng, _| {
                let rho = sample_state_with(rng, StateKind::PureHaar);
                let (c, beta) = (concurrence(&rho).value, max_violation(&rho).beta);
                vec![check(1e-9 - (beta - BoundCurve::Upper.eval(c)).abs(), &rho)]
            },
        ),
        run_property(s, "mems-on-lower-curve", root.child(2), n, |_, i| {
            let rho = region_state(seed, i, n, RegionKind::MemsLine);
            let (c, beta) = (concurrence(&rho).value, max_violation(&rho).beta);
            vec![check(1e-9 - (beta - BoundCurve::Lower.eval(c)).abs(), &rho)]
        }),
        run_property(
            s,
            "werner-on-bell-diagonal-curve",
            root.child(3),
            n,
            |_, i| {
                let rho = region_state(seed, i, n, RegionKind::WernerLine);
                let (c, beta) = (concurrence(&rho).value, max_violation(&rho).beta);
                vec![check(
                    1e-9 - (beta - BoundCurve::BellDiagonalLower.eval(c)).abs(),
                    &rho,
                )]
            },
        ),
        run_property(s, "bell-diagonal-band", root.child(4), n, |rng, _| {
            let rho = sample_state_with(rng, StateKind::BellDiagonal);
            if rho.spectrum()[0] < 0.5 {
                return Vec::new();
            }
            let (c, beta) = (concurrence(&rho).value, max_violation(&rho).beta);
            let lower = beta - BoundCurve::BellDiagonalLower.eval(c) + 1e-9;
            let upper = BoundCurve::Upper.eval(c) + 1e-9 - beta;
            vec![check(lower.min(upper), &rho)]
        }),
        run_property(
            s,
            "extremal-form-concurrence",
            root.child(5),
            n,
            |rng, _| {
                let e = random_extremal_form(rng);
                match extremal_form_state(&e) {
                    Ok((rho, formula)) => vec![check(
                        1e-8 - (formula - concurrence(&rho).value).abs(),
                        &rho,
                    )],
                    Err(_) => Vec::new(),
                }
            },
        ),
        run_property(s, "mems-entropy-echo", root.child(6), n, |rng, _| {
            [StateKind::MixedHs, StateKind::PureHaar]
                .into_iter()
                .map(|kind| sample_state_with(rng, kind))
                .filter_map(|rho| {
                    let c = concurrence(&rho).value;
                    (c >= 2.0 / 3.0).then(|| {
                        let bound = mems(c).expect("C in (0, 1]").entropy();
                        check(bound + 1e-6 - rho.entropy(), &rho)
                    })
                })
                .collect()
        }),
    ]
}

/// Even samples are Hilbert–Schmidt states; odd samples hide a violating
/// Bell-diagonal state behind a random filter.
fn filtering_state(rng: &mut ChaCha20Rng, i: usize) -> DensityMatrix {
    if i.is_multiple_of(2) {
        return sample_state_with(rng, StateKind::MixedHs);
    }
    // Weights bounded away from zero; near-pure states converge too slowly.
    let top = 0.75 + 0.2 * rng.random::<f64>();
    let spread = random_simplex(rng);
    let weights = [
        top,
        (1.0 - top) * (1.0 + spread[0]) / 4.0,
        (1.0 - top) * (1.0 + spread[1]) / 4.0,
        (1.0 - top) * (2.0 - spread[0] - spread[1]) / 4.0,
    ];
    let core = DensityMatrix::bell_diagonal(weights).expect("probability vector");
    apply_filter(&core, &random_filter(rng))
        .expect("invertible filter")
        .0
}

fn filtering(n: usize, seed: u64) -> Vec<PropertyReport> {
    let root = SeedStream::new(seed).child(1);
    let s = "filtering";

    let probe_checks = |property: &'static str, k: u64| {
        run_property(s, property, root.child(k), n, move |rng, i| {
            let rho = filtering_state(rng, i);
            let nf = match normal_form(&rho, 1e-10, 10_000) {
                Ok(nf) if nf.converged => nf,
                _ => return vec![check(f64::NEG_INFINITY, &rho)],
            };
            let (beta_nf, c_nf) = (nf.beta(), concurrence(&nf.state).value);
            (0..PROBES_PER_STATE)
                .filter_map(|_| {
                    let filtered = apply_filter(&rho, &random_filter(rng)).ok()?.0;
                    let beta = max_violation(&filtered).beta;
                    match property {
                        "violation-optimality" => {
                            (beta > 1.0).then(|| check(beta_nf - beta + 1e-7, &rho))
                        }
                        "non-violating-normal-form" => {
                            (beta_nf <= 1.0).then(|| check(1.0 - beta, &rho))
                        }
                        _ => Some(check(c_nf - concurrence(&filtered).value + 1e-7, &rho)),
                    }
                })
                .collect()
        })
    };

    vec![
        run_property(s, "lorentz-covariance", root.child(0), n, |rng, _| {
            let rho = sample_state_with(rng, StateKind::MixedHs);
            let f = random_filter(rng);
            let margin = match (
                transform_correlation(&rho.correlation(), &f),
                apply_filter(&rho, &f),
            ) {
                (Ok(predicted), Ok((filtered, _))) => {
                    1e-8 - predicted
                        .as_matrix()
                        .max_abs_diff(filtered.correlation().as_matrix())
                }
                _ => f64::NEG_INFINITY,
            };
            vec![check(margin, &rho)]
        }),
        run_property(
            s,
            "normal-form-bell-diagonal",
            root.child(1),
            n,
            |rng, _| {
                let rho = sample_state_with(rng, StateKind::MixedHs);
                let margin = match normal_form(&rho, 1e-10, 10_000) {
                    Ok(nf) if nf.converged => {
                        let corr = nf.state.correlation();
                        let off = (0..4)
                            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
                            .map(|(i, j)| corr.get(i, j).abs())
                            .fold(0.0, f64::max);
                        (1e-10 - nf.marginal_defect).min(1e-7 - off)
                    }
                    _ => f64::NEG_INFINITY,
                };
                vec![check(margin, &rho)]
            },
        ),
        probe_checks("violation-optimality", 2),
        probe_checks("non-violating-normal-form", 3),
        probe_checks("concurrence-optimality", 4),
        run_property(s, "normal-form-uniqueness", root.child(5), n, |rng, _| {
            let rho = sample_state_with(rng, StateKind::MixedHs);
            let key = |state: &DensityMatrix| -> Option<[f64; 3]> {
                let nf = normal_form(state, 1e-10, 10_000)
                    .ok()
                    .filter(|nf| nf.converged)?;
                let mut d = nf.state.corr_block().singular_values();
                d.sort_by(|a, b| b.total_cmp(a));
                Some(d)
            };
            let first = apply_filter(&rho, &random_filter(rng))
                .ok()
                .and_then(|(s, _)| key(&s));
            let second = apply_filter(&rho, &random_filter(rng))
                .ok()
                .and_then(|(s, _)| key(&s));
            let margin = match (first, second) {
                (Some(a), Some(b)) => {
                    1e-6 - a
                        .iter()
                        .zip(&b)
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max)
                }
                _ => f64::NEG_INFINITY,
            };
            vec![check(margin, &rho)]
        }),
    ]
}

fn spectrum(n: usize, seed: u64) -> Vec<PropertyReport> {
    let root = SeedStream::new(seed).child(2);
    let s = "spectrum";
    vec![
        run_property(s, "bell-diagonal-dominance", root.child(0), n, |rng, _| {
            let lambda = random_simplex(rng);
            let best = spectrum_maximizer(lambda).expect("probability vector");
            let beta_best = max_violation(&best).beta;
            (0..UNITARIES_PER_SPECTRUM)
                .map(|_| {
                    let rotated = best.conjugate_by(&random_unitary(rng, 4));
                    check(beta_best + 1e-7 - max_violation(&rotated).beta, &rotated)
                })
                .collect()
        }),
        run_property(s, "sorted-product-bound", root.child(1), n, |rng, _| {
            let lambda = random_simplex(rng);
            let op = bell_operator(&random_settings(rng));
            let bound = max_over_unitaries(lambda, &op).expect("probability vector");
            let base = DensityMatrix::bell_diagonal(lambda).expect("probability vector");
            (0..UNITARIES_PER_SPECTRUM)
                .map(|_| {
                    let rotated = base.conjugate_by(&random_unitary(rng, 4));
                    let value = (*rotated.matrix() * *op.matrix()).trace().re;
                    check(bound + 1e-9 - value, &rotated)
                })
                .collect()
        }),
        run_property(s, "bell-diagonal-formula", root.child(2), n, |rng, _| {
            let rho = sample_state_with(rng, StateKind::BellDiagonal);
            let margin = match bell_diagonal_beta(rho.spectrum()) {
                Ok(formula) => 1e-9 - (formula - max_violation(&rho).beta).abs(),
                Err(_) => f64::NEG_INFINITY,
            };
            vec![check(margin, &rho)]
        }),
        run_property(
            s,
            "optimal-settings-attain-beta",
            root.child(3),
            n,
            |rng, _| {
                let rho = sample_state_with(rng, StateKind::MixedHs);
                let margin = match crate::chsh::optimal_settings(&rho) {
                    Ok((settings, beta)) => 1e-9 - (chsh_value(&rho, &settings) - beta.beta).abs(),
                    Err(_) => f64::NEG_INFINITY,
                };
                vec![check(margin, &rho)]
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_reproducible() {
        let report = run_suite(Suite::All, 40, 5);
        for p in &report.properties {
            assert!(p.passed(), "{p:?}");
        }
        assert_eq!(report, run_suite(Suite::All, 40, 5));
        let names: Vec<_> = report.properties.iter().map(|p| p.property).collect();
        assert!(names.contains(&"violation-optimality") && names.contains(&"sorted-product-bound"));
    }

    #[test]
    fn violation_optimality_is_exercised() {
        let report = run_suite(Suite::Filtering, 40, 1);
        let p = report
            .properties
            .iter()
            .find(|p| p.property == "violation-optimality")
            .unwrap();
        assert!(p.checked > 10);
    }

    #[test]
    fn violations_carry_the_offending_state() {
        let stream = SeedStream::new(0);
        let report = run_property("test", "always-fails", stream, 3, |rng, _| {
            vec![check(-1.0, &sample_state_with(rng, StateKind::PureHaar))]
        });
        assert_eq!(report.violations, 3);
        let json = report.offending_state.unwrap();
        let first = sample_state_with(&mut stream.rng(0), StateKind::PureHaar);
        assert_eq!(json, state_to_json(&first));
    }

    #[test]
    fn suite_names_parse() {
        for s in ["bounds", "filtering", "spectrum", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}
