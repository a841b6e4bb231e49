//! JSON state and protocol files.
//!
//! Complex numbers are `[re, im]` pairs. Flat indices are row-major over the
//! parties, first party slowest. Floats are written in shortest round-trip
//! form, so write-then-read is bit-exact.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use entassist_core::locc::{
    mixed_collaboration_protocol, phi_collaboration_protocol, Instrument, Protocol, ProtocolNode, SystemState,
};
use entassist_core::qmath::{ComplexMatrix, StateVector};
use entassist_core::states::{
    make_bell, make_max_entangled, make_mixed_example, make_phi, purify, DensityOperator, PartySpace, PureState,
};
use entassist_core::C64;
use serde::{Deserialize, Serialize};

/// Normalization slack accepted on load without `--renormalize`.
pub const LOAD_TOL: f64 = 1e-9;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub dims: Vec<usize>,
    pub kind: StateKind,
    /// Pure states: `prod(dims)` amplitudes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Pair>>,
    /// Mixed states: `prod(dims)` rows of the density matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<Pair>>>,
}

fn to_c64(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn to_pair(z: &C64) -> Pair {
    [z.re, z.im]
}

fn matrix_from_rows(rows: &[Vec<Pair>]) -> Result<ComplexMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        bail!("matrix rows have different lengths");
    }
    let data = rows.iter().flatten().map(to_c64).collect();
    Ok(ComplexMatrix::from_vec(n, cols, data)?)
}

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(to_pair).collect()).collect()
}

impl StateFile {
    pub fn from_state(state: &SystemState) -> Self {
        let space = state.space();
        let (amplitudes, entries, kind) = match state {
            SystemState::Pure(p) => (
                Some(p.amplitudes().iter().map(to_pair).collect()),
                None,
                StateKind::Pure,
            ),
            SystemState::Mixed(r) => (None, Some(matrix_rows(r.matrix())), StateKind::Mixed),
        };
        Self {
            labels: Some(space.labels().to_vec()),
            dims: space.dims().to_vec(),
            kind,
            amplitudes,
            entries,
        }
    }

    /// Validates and builds the state; `renormalize` rescales a pure state
    /// to unit norm or a mixed state to unit trace instead of rejecting it.
    pub fn into_state(self, renormalize: bool) -> Result<SystemState> {
        let space = match self.labels {
            Some(labels) => PartySpace::new(labels, self.dims)?,
            None => PartySpace::with_dims(&self.dims)?,
        };
        let n = space.total_dim();
        match self.kind {
            StateKind::Pure => {
                if self.entries.is_some() {
                    bail!("pure state file must not carry `entries`");
                }
                let amps: Vec<C64> = self
                    .amplitudes
                    .ok_or_else(|| anyhow!("pure state file needs `amplitudes`"))?
                    .iter()
                    .map(to_c64)
                    .collect();
                if amps.len() != n {
                    bail!("expected {n} amplitudes, found {}", amps.len());
                }
                let v = if renormalize {
                    StateVector::normalize(amps)?
                } else {
                    StateVector::new(amps)?
                };
                Ok(PureState::new(space, v)?.into())
            }
            StateKind::Mixed => {
                if self.amplitudes.is_some() {
                    bail!("mixed state file must not carry `amplitudes`");
                }
                let rows = self
                    .entries
                    .ok_or_else(|| anyhow!("mixed state file needs `entries`"))?;
                let mut m = matrix_from_rows(&rows)?;
                if m.rows() != n || m.cols() != n {
                    bail!("expected a {n}x{n} matrix, found {}x{}", m.rows(), m.cols());
                }
                if renormalize {
                    let t = m.trace().re;
                    if t <= 0.0 {
                        bail!("cannot renormalize a matrix with trace {t}");
                    }
                    m = m.scale_real(1.0 / t);
                }
                Ok(DensityOperator::new(space, m)?.into())
            }
        }
    }
}

pub fn read_state(path: &Path, renormalize: bool) -> Result<SystemState> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: StateFile =
        serde_json::from_str(&text).with_context(|| format!("parsing state file {}", path.display()))?;
    file.into_state(renormalize)
        .with_context(|| format!("invalid state in {}", path.display()))
}

/// JSON with one amplitude (pure) or one matrix row (mixed) per line.
pub fn state_text(file: &StateFile) -> Result<String> {
    let mut out = String::from("{\n");
    if let Some(labels) = &file.labels {
        out += &format!("  \"labels\": {},\n", serde_json::to_string(labels)?);
    }
    out += &format!("  \"dims\": {},\n", serde_json::to_string(&file.dims)?);
    out += &format!("  \"kind\": {}", serde_json::to_string(&file.kind)?);
    let (key, lines) = match (&file.amplitudes, &file.entries) {
        (Some(a), _) => (
            "amplitudes",
            a.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?,
        ),
        (None, Some(e)) => (
            "entries",
            e.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?,
        ),
        (None, None) => bail!("state file has no data"),
    };
    out += &format!(",\n  \"{key}\": [\n    {}\n  ]\n}}\n", lines.join(",\n    "));
    Ok(out)
}

pub fn write_state(path: &Path, state: &SystemState) -> Result<()> {
    let text = state_text(&StateFile::from_state(state))?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Protocol tree node; a leaf is `{}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub party: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub children: BTreeMap<String, ProtocolFile>,
}

impl ProtocolFile {
    pub fn from_protocol(p: &Protocol) -> Self {
        Self::from_node(p.root())
    }

    fn from_node(node: &ProtocolNode) -> Self {
        match node {
            ProtocolNode::Leaf => Self::default(),
            ProtocolNode::Step { instrument, children } => Self {
                party: Some(instrument.party().to_string()),
                operators: instrument
                    .operators()
                    .iter()
                    .map(|(l, k)| (l.clone(), matrix_rows(k)))
                    .collect(),
                children: children.iter().map(|(l, c)| (l.clone(), Self::from_node(c))).collect(),
            },
        }
    }

    pub fn into_protocol(self) -> Result<Protocol> {
        Ok(Protocol::new(self.into_node()?)?)
    }

    fn into_node(self) -> Result<ProtocolNode> {
        let Some(party) = self.party else {
            if !self.operators.is_empty() || !self.children.is_empty() {
                bail!("node with operators or children needs a `party`");
            }
            return Ok(ProtocolNode::Leaf);
        };
        let operators = self
            .operators
            .iter()
            .map(|(l, rows)| Ok((l.clone(), matrix_from_rows(rows)?)))
            .collect::<Result<Vec<_>>>()?;
        let instrument = Instrument::new(party, operators)?;
        let children = self
            .children
            .into_iter()
            .map(|(l, c)| Ok((l, c.into_node()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ProtocolNode::Step { instrument, children })
    }
}

/// Built-in protocol names accepted in place of a file.
pub const PROTOCOL_NAMES: &[&str] = &["phi", "mixed"];

pub fn builtin_protocol(name: &str) -> Option<Protocol> {
    match name {
        "phi" => Some(phi_collaboration_protocol()),
        "mixed" => Some(mixed_collaboration_protocol()),
        _ => None,
    }
}

/// A built-in name (`phi`, `mixed`) or a protocol file path.
pub fn load_protocol(source: &str) -> Result<Protocol> {
    if let Some(p) = builtin_protocol(source) {
        return Ok(p);
    }
    let path = Path::new(source);
    let text = fs::read_to_string(path).with_context(|| format!("reading protocol {source}"))?;
    let file: ProtocolFile = serde_json::from_str(&text).with_context(|| format!("parsing protocol {source}"))?;
    file.into_protocol()
        .with_context(|| format!("invalid protocol in {source}"))
}

pub fn write_protocol(path: &Path, p: &Protocol) -> Result<()> {
    let text = serde_json::to_string_pretty(&ProtocolFile::from_protocol(p))?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// Catalog state names, as accepted by `export` and by `--state catalog:NAME`.
pub const CATALOG_NAMES: &[&str] = &["phi", "mixed", "bell", "maxent_8x4", "mixed_2qubit_purified", "product"];

pub fn catalog_state(name: &str) -> Result<SystemState> {
    Ok(match name {
        "phi" => make_phi().into(),
        "mixed" => make_mixed_example().into(),
        "bell" => make_bell(0)?.into(),
        "maxent_8x4" => make_max_entangled(8, 4)?.into(),
        "mixed_2qubit_purified" => {
            let rho = DensityOperator::maximally_mixed(PartySpace::with_dims(&[2, 2])?);
            purify(&rho)?.into()
        }
        "product" => {
            let zero = StateVector::basis(2, 0)?;
            PureState::product(&[zero.clone(), zero.clone(), zero])?.into()
        }
        _ => bail!("unknown catalog state `{name}` (known: {})", CATALOG_NAMES.join(", ")),
    })
}

/// `catalog:NAME` or a state file path.
pub fn load_state(source: &str, renormalize: bool) -> Result<SystemState> {
    match source.strip_prefix("catalog:") {
        Some(name) => catalog_state(name),
        None => read_state(Path::new(source), renormalize),
    }
}
