//! Experiment configuration: a single JSON document describing the storage
//! and retrieval codes, file shape, adversary budgets, seed and budgets.
//! Command-line flags override file values.

use serde::Deserialize;
use serde_json::Value;

use starpir::algebra::{Field, FieldRef, Matrix, Poly};
use starpir::codes::LinearCode;
use starpir::families;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Deserialize)]
pub struct FieldCfg {
    pub p: u64,
    #[serde(default = "one")]
    pub s: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u64>>,
}

fn one() -> u32 {
    1
}

impl FieldCfg {
    pub fn build(&self) -> Result<FieldRef, ConfigError> {
        Field::new(self.p, self.s, self.modulus.clone()).map_err(|e| bad(e.to_string()))
    }
}

/// `{"family": "...", "params": {...}}` plus optional structural modifiers
/// applied in order: construct, then parity extension, then dual.
#[derive(Debug, Clone, Deserialize)]
pub struct CodeCfg {
    pub family: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub extend_parity: bool,
    #[serde(default)]
    pub dual: bool,
}

#[derive(Debug, Clone, Deserialize)]
struct GrsParams {
    field: FieldCfg,
    n: usize,
    k: usize,
    #[serde(default)]
    evals: Option<Vec<u64>>,
    #[serde(default)]
    mults: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
struct RmParams {
    m: u32,
    r: u32,
}

#[derive(Debug, Clone, Deserialize)]
struct CyclicParams {
    field: FieldCfg,
    n: usize,
    /// Generator polynomial coefficients, lowest degree first.
    generator: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
struct BchParams {
    field: FieldCfg,
    n: usize,
    delta: usize,
}

#[derive(Debug, Clone, Deserialize)]
struct EllipticParams {
    field: FieldCfg,
    #[serde(default)]
    a1: u64,
    #[serde(default)]
    a2: u64,
    #[serde(default)]
    a3: u64,
    #[serde(default)]
    a4: u64,
    #[serde(default)]
    a6: u64,
    m: usize,
    /// Evaluation points; all affine points when omitted.
    #[serde(default)]
    points: Option<Vec<(u64, u64)>>,
}

#[derive(Debug, Clone, Deserialize)]
struct RepetitionParams {
    field: FieldCfg,
    n: usize,
}

impl CodeCfg {
    pub fn build(&self) -> Result<LinearCode, ConfigError> {
        let from = |e: families::FamilyError| bad(e.to_string());
        let mut code = match self.family.as_str() {
            "grs" => {
                let p: GrsParams =
                    serde_json::from_value(self.params.clone()).map_err(|e| bad(e.to_string()))?;
                let field = p.field.build()?;
                let evals: Vec<u64> = match p.evals {
                    Some(e) => e,
                    None => (0..p.n as u64).collect(),
                };
                let mults = p.mults.unwrap_or_else(|| vec![1; p.n]);
                families::grs(field, p.n, p.k, &evals, &mults).map_err(from)?
            }
            "rm" => {
                let p: RmParams =
                    serde_json::from_value(self.params.clone()).map_err(|e| bad(e.to_string()))?;
                families::reed_muller(p.m, p.r).map_err(from)?
            }
            "cyclic" => {
                let p: CyclicParams =
                    serde_json::from_value(self.params.clone()).map_err(|e| bad(e.to_string()))?;
                let field = p.field.build()?;
                let g = Poly::new(field.clone(), p.generator);
                families::cyclic_from_generator(field, p.n, &g).map_err(from)?
            }
            "bch" => {
                let p: BchParams =
                    serde_json::from_value(self.params.clone()).map_err(|e| bad(e.to_string()))?;
                let field = p.field.build()?;
                families::bch(field, p.n, p.delta).map_err(from)?
            }
            "elliptic" => {
                let p: EllipticParams =
                    serde_json::from_value(self.params.clone()).map_err(|e| bad(e.to_string()))?;
                let field = p.field.build()?;
                let curve = families::EllipticCurve::new(field, p.a1, p.a2, p.a3, p.a4, p.a6)
                    .map_err(from)?;
                let spec = match p.points {
                    Some(points) => families::AgCodeSpec { curve, m: p.m, points },
                    None => families::AgCodeSpec::all_affine(&curve, p.m),
                };
                families::elliptic_ag(&spec).map_err(from)?
            }
            "repetition" => {
                let p: RepetitionParams =
                    serde_json::from_value(self.params.clone()).map_err(|e| bad(e.to_string()))?;
                let field = p.field.build()?;
                let gen = Matrix::from_rows(field.clone(), vec![vec![1; p.n]])
                    .map_err(|e| bad(e.to_string()))?;
                LinearCode::from_generator(field, gen).map_err(|e| bad(e.to_string()))?
            }
            other => return Err(bad(format!("unknown family {other:?}"))),
        };
        if self.extend_parity {
            code = code.extend_parity();
        }
        if self.dual {
            code = (*code.dual()).clone();
        }
        Ok(code)
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct FilesCfg {
    #[serde(default = "one_usize")]
    pub m: usize,
    #[serde(default = "one_usize")]
    pub b: usize,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct AdversaryCfg {
    /// Colluding coalition size to audit.
    #[serde(default)]
    pub t: usize,
    #[serde(default)]
    pub byzantine: usize,
    #[serde(default)]
    pub unresponsive: usize,
    /// Concrete adversarial positions for simulation.
    #[serde(default)]
    pub byzantine_positions: Vec<usize>,
    #[serde(default)]
    pub unresponsive_positions: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub storage: Option<CodeCfg>,
    pub retrieval: Option<CodeCfg>,
    #[serde(default)]
    pub files: FilesCfg,
    #[serde(default)]
    pub adversary: AdversaryCfg,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub transitive: bool,
    /// Target file index for simulate/retrieve; all files when absent.
    #[serde(default)]
    pub target: Option<usize>,
    /// Endpoint list for `retrieve`.
    #[serde(default)]
    pub endpoints: Vec<String>,
    /// Attach the full session export (responses, transcripts) to
    /// simulation reports.
    #[serde(default)]
    pub export_session: bool,
}

fn default_budget() -> u64 {
    starpir::codes::DEFAULT_BUDGET
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }

    pub fn storage_code(&self) -> Result<LinearCode, ConfigError> {
        self.storage
            .as_ref()
            .ok_or_else(|| bad("missing \"storage\" code descriptor"))?
            .build()
    }

    pub fn retrieval_code(&self) -> Result<LinearCode, ConfigError> {
        self.retrieval
            .as_ref()
            .ok_or_else(|| bad("missing \"retrieval\" code descriptor"))?
            .build()
    }
}
