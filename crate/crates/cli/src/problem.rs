//! Problem files: a JSON document naming one analysis target plus optional
//! tolerance overrides. Complex scalars are always `[re, im]`.

use std::path::Path;

use opfactor::birman_schwinger::PerturbationProblem;
use opfactor::generate::{self, PairBlocks};
use opfactor::linalg::{self, CMatrix};
use opfactor::projection_pairs::ProjectionPair;
use opfactor::{analytic, OperatorFunction, QuadratureConfig, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    OperatorFunction,
    Perturbation,
    ProjectionPair,
}

/// Row-major matrix of `[re, im]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixData(pub Vec<Vec<C64>>);

impl MatrixData {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect())
    }

    pub fn to_matrix(&self, name: &str) -> Result<CMatrix, CliError> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err(CliError::Input(format!("matrix `{name}` is empty")));
        }
        if let Some(i) = self.0.iter().position(|r| r.len() != cols) {
            return Err(CliError::Input(format!(
                "matrix `{name}` is ragged: row {i} has {} entries, row 0 has {cols}",
                self.0[i].len()
            )));
        }
        let m = CMatrix::from_fn(rows, cols, |i, j| self.0[i][j]);
        linalg::ensure_finite(&m).map_err(|_| CliError::Input(format!("matrix `{name}` has non-finite entries")))?;
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `A - zI`.
    Pencil { a: MatrixData },
    /// `N(z) D(z)^{-1}` with matrix polynomial coefficients in increasing
    /// degree.
    Rational {
        numerator: Vec<MatrixData>,
        denominator: Vec<MatrixData>,
    },
    /// `I - K(z)` for `H = H0 + V2^* V1`.
    BirmanSchwinger {
        h0: MatrixData,
        v1: MatrixData,
        v2: MatrixData,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub h0: MatrixData,
    pub v1: MatrixData,
    pub v2: MatrixData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    Explicit { p: MatrixData, q: MatrixData },
    /// Direct sum of the elementary blocks, conjugated by a random unitary
    /// drawn from `seed` (or `--seed`).
    Random {
        #[serde(default)]
        m1: usize,
        #[serde(default)]
        m_minus1: usize,
        #[serde(default)]
        both: usize,
        #[serde(default)]
        neither: usize,
        #[serde(default)]
        generic: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
}

impl Tolerances {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<C64>,
    #[serde(default, skip_serializing_if = "Tolerances::is_empty")]
    pub tolerances: Tolerances,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Pretty-printed canonical form; parsing it back gives the same value.
    pub fn canonical(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    fn validate(&self) -> Result<(), CliError> {
        let present = [
            ("function", self.function.is_some(), Kind::OperatorFunction),
            ("perturbation", self.perturbation.is_some(), Kind::Perturbation),
            ("pair", self.pair.is_some(), Kind::ProjectionPair),
        ];
        for (field, is_present, kind) in present {
            if (kind == self.kind) != is_present {
                let verb = if is_present { "must not have" } else { "needs" };
                return Err(CliError::Input(format!(
                    "a problem of kind `{}` {verb} a `{field}` field",
                    kind_name(self.kind)
                )));
            }
        }
        if let Some(r) = self.tolerances.rtol {
            check_positive("tolerances.rtol", r)?;
        }
        if let Some(e) = self.tolerances.eps {
            check_positive("tolerances.eps", e)?;
        }
        if let Some(q) = &self.tolerances.quadrature {
            q.validate().map_err(|e| CliError::Input(format!("tolerances.quadrature: {e}")))?;
        }
        Ok(())
    }
}

pub fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::OperatorFunction => "operator_function",
        Kind::Perturbation => "perturbation",
        Kind::ProjectionPair => "projection_pair",
    }
}

pub fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("{name} must be positive and finite, got {v}")))
    }
}

/// An operator function with the points a default contour has to avoid:
/// its declared singularities and the zeros of its determinant.
pub struct LoadedFunction {
    pub function: OperatorFunction,
    pub special_points: Vec<C64>,
    /// The matrix `A` of a pencil `A - zI`.
    pub pencil: Option<CMatrix>,
    pub perturbation: Option<PerturbationProblem>,
}

impl LoadedFunction {
    /// Half the distance from `z0` to the nearest other special point,
    /// capped at 1. Points within the clustering tolerance count as `z0`.
    pub fn default_radius(&self, z0: C64) -> f64 {
        let tol = linalg::CLUSTER_TOL * (1.0 + z0.norm());
        opfactor::contour::isolating_radius(z0, &self.special_points, tol, 1.0)
    }

    pub fn is_pole(&self, z0: C64) -> bool {
        self.function.is_declared_singular(z0)
    }
}

pub fn perturbation_problem(h0: &MatrixData, v1: &MatrixData, v2: &MatrixData) -> Result<PerturbationProblem, CliError> {
    Ok(PerturbationProblem::new(
        h0.to_matrix("h0")?,
        v1.to_matrix("v1")?,
        v2.to_matrix("v2")?,
    )?)
}

fn from_perturbation(p: PerturbationProblem) -> LoadedFunction {
    let mut special: Vec<C64> = p.spectrum_h0().iter().map(|s| s.value).collect();
    special.extend(p.spectrum_h().iter().map(|s| s.value));
    LoadedFunction {
        function: p.identity_minus_k(),
        special_points: special,
        pencil: None,
        perturbation: Some(p),
    }
}

impl ProblemFile {
    pub fn load_function(&self) -> Result<LoadedFunction, CliError> {
        match (&self.function, &self.perturbation) {
            (Some(FunctionSpec::Pencil { a }), _) => {
                let a = a.to_matrix("a")?;
                let function = OperatorFunction::pencil(a.clone())?;
                Ok(LoadedFunction {
                    function,
                    special_points: linalg::eigenvalues(&a)?,
                    pencil: Some(a),
                    perturbation: None,
                })
            }
            (Some(FunctionSpec::Rational { numerator, denominator }), _) => {
                let convert = |list: &[MatrixData], name: &str| -> Result<Vec<CMatrix>, CliError> {
                    list.iter()
                        .enumerate()
                        .map(|(k, m)| m.to_matrix(&format!("{name}[{k}]")))
                        .collect()
                };
                let num = convert(numerator, "numerator")?;
                let den = convert(denominator, "denominator")?;
                let function = OperatorFunction::rational(num.clone(), den)?;
                let mut special = function.singularities().to_vec();
                // a numerator with identically vanishing determinant has no
                // isolated zeros to avoid
                if let Ok(zeros) = analytic::polynomial_determinant_roots(&num) {
                    special.extend(zeros);
                }
                Ok(LoadedFunction {
                    function,
                    special_points: special,
                    pencil: None,
                    perturbation: None,
                })
            }
            (Some(FunctionSpec::BirmanSchwinger { h0, v1, v2 }), _) => Ok(from_perturbation(perturbation_problem(h0, v1, v2)?)),
            (None, Some(p)) => Ok(from_perturbation(perturbation_problem(&p.h0, &p.v1, &p.v2)?)),
            (None, None) => Err(CliError::Input(format!(
                "a problem of kind `{}` does not define an operator function",
                kind_name(self.kind)
            ))),
        }
    }

    pub fn load_perturbation(&self) -> Result<PerturbationProblem, CliError> {
        match (&self.perturbation, &self.function) {
            (Some(p), _) => perturbation_problem(&p.h0, &p.v1, &p.v2),
            (None, Some(FunctionSpec::BirmanSchwinger { h0, v1, v2 })) => perturbation_problem(h0, v1, v2),
            _ => Err(CliError::Input(format!(
                "a problem of kind `{}` does not define a perturbation H0 + V2^* V1",
                kind_name(self.kind)
            ))),
        }
    }

    /// The pair and, for generated pairs, the block structure it was built
    /// from. `seed` overrides the file's seed.
    pub fn load_pair(&self, seed: Option<u64>) -> Result<(ProjectionPair, Option<PairBlocks>), CliError> {
        match &self.pair {
            Some(PairSpec::Explicit { p, q }) => {
                let pair = ProjectionPair::new(p.to_matrix("p")?, q.to_matrix("q")?)?;
                Ok((pair, None))
            }
            Some(PairSpec::Random {
                m1,
                m_minus1,
                both,
                neither,
                generic,
                seed: file_seed,
            }) => {
                let blocks = PairBlocks {
                    m1: *m1,
                    m_minus1: *m_minus1,
                    both: *both,
                    neither: *neither,
                    generic: *generic,
                };
                if blocks.dim() == 0 {
                    return Err(CliError::Input("random pair has dimension 0".into()));
                }
                let seed = seed
                    .or(*file_seed)
                    .ok_or_else(|| CliError::Input("a random pair needs a seed (file `seed` or --seed)".into()))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (p, q) = generate::projection_pair(&mut rng, &blocks);
                Ok((ProjectionPair::new(p, q)?, Some(blocks)))
            }
            None => Err(CliError::Input(format!(
                "a problem of kind `{}` does not define a projection pair",
                kind_name(self.kind)
            ))),
        }
    }
}
