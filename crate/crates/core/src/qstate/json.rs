//! The shared state file format: `{"rho": [[[re, im], ...4], ...4]}`,
//! row-major in the basis |00⟩, |01⟩, |10⟩, |11⟩.

use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, C64};

/// Serialized form of a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub rho: Vec<Vec<[f64; 2]>>,
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        StateJson {
            rho: matrix_to_pairs(rho.matrix()),
        }
    }
}

/// Nested `[re, im]` rows of a matrix.
pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

/// Inverse of [`matrix_to_pairs`] for an expected `n`×`n` shape.
pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>], n: usize) -> Result<ComplexMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
        return Err(Error::Json(format!(
            "expected a {n}x{n} matrix of [re, im] pairs, got row lengths {shape:?}"
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Parses and validates a state file.
pub fn parse_state_json(text: &str) -> Result<DensityMatrix> {
    let parsed: StateJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let m = matrix_from_pairs(&parsed.rho, 4)?;
    DensityMatrix::new(m)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&StateJson::from(rho)).expect("finite matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{sample_state, BellState, StateKind};
    use proptest::prelude::*;

    #[test]
    fn parses_bell_state() {
        let h = 0.5;
        let text = format!(
            r#"{{"rho": [[[{h},0],[0,0],[0,0],[{h},0]],
                        [[0,0],[0,0],[0,0],[0,0]],
                        [[0,0],[0,0],[0,0],[0,0]],
                        [[{h},0],[0,0],[0,0],[{h},0]]]}}"#
        );
        let rho = parse_state_json(&text).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(DensityMatrix::bell(BellState::PhiPlus).matrix())
                < 1e-15
        );
    }

    #[test]
    fn rejects_wrong_shapes() {
        let three = r#"{"rho": [[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(parse_state_json(three), Err(Error::Json(_))));

        let triple = r#"{"rho": [[[1,0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(parse_state_json(triple), Err(Error::Json(_))));

        assert!(matches!(
            parse_state_json(r#"{"state": []}"#),
            Err(Error::Json(_))
        ));
        assert!(matches!(parse_state_json("not json"), Err(Error::Json(_))));
    }

    #[test]
    fn rejects_unphysical_matrix() {
        let text = r#"{"rho": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(parse_state_json(text), Err(Error::Validation(_))));
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(seed in any::<u64>()) {
            let rho = sample_state(seed, StateKind::MixedHs);
            let back = parse_state_json(&state_to_json(&rho)).unwrap();
            prop_assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-15);
        }
    }
}
