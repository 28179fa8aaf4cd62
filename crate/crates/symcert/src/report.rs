//! The certification report as versioned JSON.

use serde::{Deserialize, Serialize};
use symcert_core::certify::{CertificationReport, LinearOutcome, LinearSource, Tolerances};
use symcert_core::linalg::{CMatrix, RMatrix};
use symcert_core::rep::{Assignment, SubspaceDecomposition};

use crate::formats::Entry;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: u32,
    pub well_defined: bool,
    pub collisions: Vec<Vec<usize>>,
    pub ill_defined_witness: Option<WitnessFile>,
    pub equivariance_residual: Option<f64>,
    pub linear_fit: Option<LinearFitFile>,
    pub linear_fit_error: Option<String>,
    pub decomposition_found: DecompositionFound,
    pub coordinates: CoordinatesFile,
    pub verdict_disentangled: bool,
    pub verdict_linear_disentangled: bool,
    pub metrics: MetricsFile,
    pub tolerances: TolerancesFile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub w1: usize,
    pub w2: usize,
    pub g: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFitFile {
    pub source: String,
    pub generators: Vec<usize>,
    pub generator_matrices: Vec<Vec<Vec<f64>>>,
    pub data_rank: usize,
    pub homomorphism_residual: f64,
    /// Relative to the largest latent norm.
    pub equivariance_residual: f64,
    pub equivariance_residual_absolute: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecompositionFound {
    Subspaces {
        blocks: Vec<BlockFile>,
        covered_dim: usize,
        dim: usize,
        orthonormality_defect: f64,
        invariance_residual: f64,
    },
    Coordinates {
        assignment: Vec<Option<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockFile {
    /// Owning factor; `null` for the globally fixed block.
    pub factor: Option<usize>,
    pub dim: usize,
    /// Rows of the basis matrix.
    pub basis: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinatesFile {
    pub sensitivity: Vec<Vec<f64>>,
    pub assignment: Vec<Option<usize>>,
    pub worst_leak: f64,
    pub disentangled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub modularity: Vec<Option<f64>>,
    pub dropped: Vec<usize>,
    pub compactness: Vec<usize>,
    pub explicitness: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancesFile {
    pub tol_eq: f64,
    pub tol_nl: f64,
    pub tol_lin: f64,
    pub tol_rep: f64,
}

impl From<Tolerances> for TolerancesFile {
    fn from(t: Tolerances) -> Self {
        TolerancesFile {
            tol_eq: t.tol_eq,
            tol_nl: t.tol_nl,
            tol_lin: t.tol_lin,
            tol_rep: t.tol_rep,
        }
    }
}

fn rows(m: &RMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn entry_rows(m: &CMatrix) -> Vec<Vec<Entry>> {
    let real = m.iter().all(|z| z.im == 0.0);
    m.row_iter()
        .map(|r| {
            r.iter()
                .map(|z| {
                    if real {
                        Entry::Real(z.re)
                    } else {
                        Entry::Complex([z.re, z.im])
                    }
                })
                .collect()
        })
        .collect()
}

fn blocks(d: &SubspaceDecomposition) -> Vec<BlockFile> {
    d.blocks
        .iter()
        .map(|b| BlockFile {
            factor: match b.assignment {
                Assignment::Trivial => None,
                Assignment::Factor(i) => Some(i),
            },
            dim: b.basis.ncols(),
            basis: entry_rows(&b.basis),
        })
        .collect()
}

impl From<&CertificationReport> for ReportFile {
    fn from(r: &CertificationReport) -> Self {
        let (linear_fit, linear_fit_error) = match &r.linear {
            LinearOutcome::Fitted(fit) => (
                Some(LinearFitFile {
                    source: match fit.source {
                        LinearSource::Fitted => "fitted",
                        LinearSource::Supplied => "supplied",
                    }
                    .to_string(),
                    generators: fit.generators.clone(),
                    generator_matrices: fit.generator_matrices.iter().map(rows).collect(),
                    data_rank: fit.data_rank,
                    homomorphism_residual: fit.homomorphism_residual,
                    equivariance_residual: fit.equivariance.relative,
                    equivariance_residual_absolute: fit.equivariance.residual,
                }),
                None,
            ),
            LinearOutcome::Failed(e) => (None, Some(e.clone())),
        };
        let decomposition_found = match &r.linear_verdict {
            Some(v) => DecompositionFound::Subspaces {
                blocks: blocks(&v.decomposition),
                covered_dim: v.covered_dim,
                dim: v.dim,
                orthonormality_defect: v.orthonormality_defect,
                invariance_residual: v.invariance_residual,
            },
            None => DecompositionFound::Coordinates {
                assignment: r.coordinates.assignment.clone(),
            },
        };
        ReportFile {
            schema: SCHEMA,
            well_defined: r.well_defined,
            collisions: r.collisions.clone(),
            ill_defined_witness: r.ill_defined_witness.map(|w| WitnessFile {
                w1: w.w1,
                w2: w.w2,
                g: w.g,
            }),
            equivariance_residual: r.equivariance_residual,
            linear_fit,
            linear_fit_error,
            decomposition_found,
            coordinates: CoordinatesFile {
                sensitivity: r.coordinates.sensitivity.clone(),
                assignment: r.coordinates.assignment.clone(),
                worst_leak: r.coordinates.worst_leak,
                disentangled: r.coordinates.disentangled,
            },
            verdict_disentangled: r.verdict_disentangled,
            verdict_linear_disentangled: r.verdict_linear_disentangled,
            metrics: MetricsFile {
                modularity: r.metrics.modularity.clone(),
                dropped: r.metrics.dropped(),
                compactness: r.metrics.compactness.clone(),
                explicitness: r.metrics.explicitness,
            },
            tolerances: r.tolerances.into(),
        }
    }
}

impl ReportFile {
    /// Dimensions of the factor blocks, in factor order, when the linear
    /// path produced subspaces.
    pub fn block_dims(&self) -> Option<Vec<usize>> {
        match &self.decomposition_found {
            DecompositionFound::Subspaces { blocks, .. } => Some(
                blocks
                    .iter()
                    .filter(|b| b.factor.is_some())
                    .map(|b| b.dim)
                    .collect(),
            ),
            DecompositionFound::Coordinates { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcert_core::certify::{certify, CertifyOptions};
    use symcert_core::world::{canonical_table, coordinate_table, world_group, GridWorldSpec};

    #[test]
    fn json_round_trip() {
        let spec = GridWorldSpec::new(3).unwrap();
        let world = world_group(&spec);
        for f in [
            canonical_table(&spec),
            coordinate_table(&spec, [1.0, 2.0, 3.0]).unwrap(),
        ] {
            let r = certify(
                &f,
                &world.action,
                &world.decomposition,
                &CertifyOptions {
                    reference: Some(&canonical_table(&spec)),
                    ..Default::default()
                },
            )
            .unwrap();
            let file = ReportFile::from(&r);
            let text = serde_json::to_string(&file).unwrap();
            assert!(text.contains("\"schema\":1"));
            let back: ReportFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}
