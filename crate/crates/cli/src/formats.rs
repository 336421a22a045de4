//! File formats read and written by the CLI.

use std::fs;
use std::path::Path;

use gqt_core::phasemat::Witness;
use gqt_core::rotft::{RotSpec, ThetaEntry, Variant};
use gqt_core::{Circuit, Complex64, DenseUnitary, Gate, PhaseMatrix, Regime, Unitary2, ValidityReport};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const CONVENTION: &str =
    "little-endian basis index k = sum_i x_i 2^i; entries[y][x] = <y|U|x> as [re, im]";

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_text(path, &text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeName {
    Triangular,
    #[serde(alias = "general")]
    SubsetSum,
    SignedSum,
}

impl From<RegimeName> for Regime {
    fn from(r: RegimeName) -> Self {
        match r {
            RegimeName::Triangular => Regime::Triangular,
            RegimeName::SubsetSum => Regime::General,
            RegimeName::SignedSum => Regime::Signed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseMatrixFile {
    pub n: usize,
    pub phi: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeName>,
}

impl PhaseMatrixFile {
    pub fn load(path: &Path) -> CliResult<(PhaseMatrix, Regime)> {
        let f: PhaseMatrixFile = read_json(path)?;
        if f.phi.len() != f.n {
            return Err(CliError::Usage(format!(
                "{}: n = {} but phi has {} rows",
                path.display(),
                f.n,
                f.phi.len()
            )));
        }
        let pm = PhaseMatrix::new(f.phi)?;
        Ok((pm, f.regime.map(Regime::from).unwrap_or(Regime::Triangular)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantName {
    #[serde(alias = "rot1")]
    HadamardFirst,
    #[serde(alias = "rot2")]
    RotationFirst,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThetaRecord {
    pub i: usize,
    pub j: usize,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotSpecFile {
    pub n: usize,
    pub variant: VariantName,
    #[serde(default)]
    pub theta: Vec<ThetaRecord>,
    #[serde(default)]
    pub alpha0: Vec<f64>,
}

impl RotSpecFile {
    pub fn load(path: &Path) -> CliResult<RotSpec> {
        let f: RotSpecFile = read_json(path)?;
        let variant = match f.variant {
            VariantName::HadamardFirst => Variant::HadamardFirst,
            VariantName::RotationFirst => Variant::RotationFirst,
        };
        let thetas: Vec<ThetaEntry> = f
            .theta
            .iter()
            .map(|t| ThetaEntry {
                i: t.i,
                j: t.j,
                t0: t.t0,
                t1: t.t1,
            })
            .collect();
        Ok(RotSpec::new(f.n, variant, &thetas, &f.alpha0)?)
    }
}

pub type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateRecord {
    Single {
        target: usize,
        u: [Pair; 4],
    },
    Controlled {
        controls: Vec<(usize, u8)>,
        target: usize,
        u: [Pair; 4],
    },
    Swap {
        target: usize,
        partner: usize,
    },
}

fn unitary(u: &[Pair; 4]) -> CliResult<Unitary2> {
    Ok(Unitary2::new(u.map(|[re, im]| Complex64::new(re, im)))?)
}

impl GateRecord {
    fn from_gate(g: &Gate) -> Self {
        match g {
            Gate::Single { target, u } => GateRecord::Single {
                target: *target,
                u: u.entries().map(pair),
            },
            Gate::Controlled { controls, target, u } => GateRecord::Controlled {
                controls: controls.iter().map(|&(q, b)| (q, b as u8)).collect(),
                target: *target,
                u: u.entries().map(pair),
            },
            Gate::Swap(a, b) => GateRecord::Swap {
                target: *a,
                partner: *b,
            },
        }
    }

    fn to_gate(&self) -> CliResult<Gate> {
        Ok(match self {
            GateRecord::Single { target, u } => Gate::single(*target, unitary(u)?),
            GateRecord::Controlled { controls, target, u } => {
                let controls = controls
                    .iter()
                    .map(|&(q, b)| match b {
                        0 => Ok((q, false)),
                        1 => Ok((q, true)),
                        _ => Err(CliError::Usage(format!("control bit must be 0 or 1, got {b}"))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Gate::Controlled {
                    controls,
                    target: *target,
                    u: unitary(u)?,
                }
            }
            GateRecord::Swap { target, partner } => Gate::Swap(*target, *partner),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitFile {
    pub n: usize,
    pub gates: Vec<GateRecord>,
}

impl CircuitFile {
    pub fn from_circuit(c: &Circuit) -> Self {
        Self {
            n: c.n(),
            gates: c.gates().iter().map(GateRecord::from_gate).collect(),
        }
    }

    pub fn to_circuit(&self) -> CliResult<Circuit> {
        let gates = self.gates.iter().map(GateRecord::to_gate).collect::<CliResult<Vec<_>>>()?;
        Ok(Circuit::from_gates(self.n, gates)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDump {
    pub n: usize,
    pub convention: String,
    pub entries: Vec<Vec<Pair>>,
}

impl MatrixDump {
    pub fn from_unitary(u: &DenseUnitary) -> Self {
        let m = u.matrix();
        Self {
            n: u.n(),
            convention: CONVENTION.to_string(),
            entries: (0..m.dim()).map(|r| m.row(r).iter().copied().map(pair).collect()).collect(),
        }
    }
}

pub fn regime_name(r: Regime) -> String {
    r.to_string()
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Cell { row, col } => json!({ "cell": [row, col] }),
        Witness::Subset(rows) => json!({ "subset": rows }),
        Witness::SignedSubset { plus, minus } => json!({ "signed": { "plus": plus, "minus": minus } }),
    }
}

pub fn report_json(r: &ValidityReport) -> Value {
    json!({
        "regime": regime_name(r.regime),
        "valid": r.valid,
        "witness": r.witness.as_ref().map(witness_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_records_round_trip() {
        let c = gqt_core::gqft::qft_circuit(3).unwrap();
        let text = serde_json::to_string(&CircuitFile::from_circuit(&c)).unwrap();
        let back: CircuitFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_circuit().unwrap(), c);
    }

    #[test]
    fn control_bits_must_be_binary() {
        let text = r#"{"n":2,"gates":[{"kind":"controlled","controls":[[0,2]],"target":1,
            "u":[[1,0],[0,0],[0,0],[1,0]]}]}"#;
        let f: CircuitFile = serde_json::from_str(text).unwrap();
        assert!(matches!(f.to_circuit(), Err(CliError::Usage(_))));
    }
}
