//! JSON circuit files.
//!
//! ```json
//! { "num_qubits": 2, "edges": [[0, 1]],
//!   "cycles": [[{"pair": [0, 1], "gate": "fsim", "params": {"theta": 1.5707963267948966, "phi": 0.5235987755982988}}]],
//!   "single_qubit": [{"qubit": 0, "moment": 0, "matrix": [[0.5, 0.5], [0.5, -0.5], [0.5, -0.5], [0.5, 0.5]]}] }
//! ```
//!
//! Gate names are `cz`, `iswap`, `fsim` (with `params`), `identity` and
//! `matrix` (with 16 `[re, im]` entries, row-major over
//! `(s_k' s_l') x (s_k s_l)`).

use std::fmt;

use rqcsim_core::circuit::gates::{unitarity_defect2, unitarity_defect4};
use rqcsim_core::circuit::{Circuit, CircuitGraph, Gate, GateKind, Mat2, Mat4, SingleQubitGate};
use rqcsim_core::C64;
use serde::{Deserialize, Serialize};

/// Largest tolerated deviation of `U^H U` from the identity.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum FormatError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Invalid {
        at: String,
        message: String,
    },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Syntax {
                line,
                column,
                message,
            } => write!(f, "line {line}, column {column}: {message}"),
            FormatError::Invalid { at, message } => write!(f, "{at}: {message}"),
        }
    }
}

impl std::error::Error for FormatError {}

fn invalid(at: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        at: at.into(),
        message: message.into(),
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
    cycles: Vec<Vec<RawGate>>,
    #[serde(default)]
    single_qubit: Vec<RawSingle>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGate {
    pair: [usize; 2],
    gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<RawParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    theta: f64,
    phi: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSingle {
    qubit: usize,
    moment: usize,
    matrix: Vec<[f64; 2]>,
}

fn complex_entries<const N: usize>(at: &str, raw: &[[f64; 2]]) -> Result<[C64; N], FormatError> {
    if raw.len() != N {
        return Err(invalid(
            at,
            format!("expected {N} entries, found {}", raw.len()),
        ));
    }
    let mut m = [C64::new(0.0, 0.0); N];
    for (i, [re, im]) in raw.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return Err(invalid(format!("{at}[{i}]"), "entry is not finite"));
        }
        m[i] = C64::new(*re, *im);
    }
    Ok(m)
}

fn raw_entries(m: &[C64]) -> Vec<[f64; 2]> {
    m.iter().map(|z| [z.re, z.im]).collect()
}

pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let raw: RawCircuit = serde_json::from_str(text)?;
    let n = raw.num_qubits;
    for (i, e) in raw.edges.iter().enumerate() {
        if let Some(&q) = e.iter().find(|&&q| q >= n) {
            return Err(invalid(
                format!("edges[{i}]"),
                format!("qubit {q} out of range for {n} qubits"),
            ));
        }
    }
    let graph = CircuitGraph::new(n, raw.edges.iter().map(|e| (e[0], e[1])).collect())
        .map_err(|e| invalid("edges", e.to_string()))?;

    let mut cycles = Vec::with_capacity(raw.cycles.len());
    for (ci, cycle) in raw.cycles.iter().enumerate() {
        let mut used = vec![false; n];
        let mut gates = Vec::with_capacity(cycle.len());
        for (gi, g) in cycle.iter().enumerate() {
            let at = format!("cycles[{ci}][{gi}]");
            let [k, l] = g.pair;
            if let Some(q) = [k, l].into_iter().find(|&q| q >= n) {
                return Err(invalid(
                    format!("{at}.pair"),
                    format!("qubit {q} out of range for {n} qubits"),
                ));
            }
            if !graph.has_edge(k, l) {
                return Err(invalid(
                    format!("{at}.pair"),
                    format!("({k}, {l}) is not an edge"),
                ));
            }
            for q in [k, l] {
                if std::mem::replace(&mut used[q], true) {
                    return Err(invalid(&at, format!("qubit {q} used twice in cycle {ci}")));
                }
            }
            let kind = match (g.gate.as_str(), &g.params) {
                ("cz", _) => GateKind::Cz,
                ("iswap", _) => GateKind::Iswap,
                ("identity", _) => GateKind::Identity,
                ("fsim", Some(p)) => {
                    if !p.theta.is_finite() || !p.phi.is_finite() {
                        return Err(invalid(format!("{at}.params"), "angles must be finite"));
                    }
                    GateKind::Fsim {
                        theta: p.theta,
                        phi: p.phi,
                    }
                }
                ("fsim", None) => return Err(invalid(&at, "fsim needs params {theta, phi}")),
                ("matrix", _) => GateKind::Matrix,
                (other, _) => {
                    return Err(invalid(
                        format!("{at}.gate"),
                        format!("unknown gate '{other}'"),
                    ))
                }
            };
            let gate = if kind == GateKind::Matrix {
                let raw_m = g
                    .matrix
                    .as_deref()
                    .ok_or_else(|| invalid(&at, "matrix gate needs a matrix"))?;
                let m: Mat4 = complex_entries(&format!("{at}.matrix"), raw_m)?;
                let defect = unitarity_defect4(&m);
                if defect > UNITARITY_TOLERANCE {
                    return Err(invalid(
                        format!("{at}.matrix"),
                        format!("not unitary (defect {defect:e})"),
                    ));
                }
                Gate::from_matrix((k, l), m)
            } else {
                if g.matrix.is_some() {
                    return Err(invalid(&at, format!("gate '{}' takes no matrix", g.gate)));
                }
                Gate::new((k, l), kind)
            };
            gates.push(gate);
        }
        cycles.push(gates);
    }

    let depth = cycles.len();
    let mut singles = Vec::with_capacity(raw.single_qubit.len());
    for (i, s) in raw.single_qubit.iter().enumerate() {
        let at = format!("single_qubit[{i}]");
        if s.qubit >= n {
            return Err(invalid(
                format!("{at}.qubit"),
                format!("qubit {} out of range for {n} qubits", s.qubit),
            ));
        }
        if s.moment > depth {
            return Err(invalid(
                format!("{at}.moment"),
                format!("moment {} exceeds depth {depth}", s.moment),
            ));
        }
        let m: Mat2 = complex_entries(&format!("{at}.matrix"), &s.matrix)?;
        let defect = unitarity_defect2(&m);
        if defect > UNITARITY_TOLERANCE {
            return Err(invalid(
                format!("{at}.matrix"),
                format!("not unitary (defect {defect:e})"),
            ));
        }
        singles.push(SingleQubitGate {
            qubit: s.qubit,
            moment: s.moment,
            matrix: m,
        });
    }
    Circuit::new(graph, cycles, singles).map_err(|e| invalid("circuit", e.to_string()))
}

/// Fused circuits cannot be written: trailing single-qubit unitaries have no
/// place in the format.
pub fn serialize_circuit(c: &Circuit) -> String {
    let raw = RawCircuit {
        num_qubits: c.num_qubits(),
        edges: c.graph().edges().iter().map(|&(a, b)| [a, b]).collect(),
        cycles: c
            .cycles()
            .iter()
            .map(|cycle| {
                cycle
                    .iter()
                    .map(|g| {
                        let (gate, params, matrix) = match g.kind {
                            GateKind::Cz => ("cz", None, None),
                            GateKind::Iswap => ("iswap", None, None),
                            GateKind::Identity => ("identity", None, None),
                            GateKind::Fsim { theta, phi } => {
                                ("fsim", Some(RawParams { theta, phi }), None)
                            }
                            GateKind::Matrix => ("matrix", None, Some(raw_entries(&g.matrix))),
                        };
                        RawGate {
                            pair: [g.pair.0, g.pair.1],
                            gate: gate.into(),
                            params,
                            matrix,
                        }
                    })
                    .collect()
            })
            .collect(),
        single_qubit: c
            .single_qubit_gates()
            .iter()
            .map(|s| RawSingle {
                qubit: s.qubit,
                moment: s.moment,
                matrix: raw_entries(&s.matrix),
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&raw).expect("circuit serializes");
    s.push('\n');
    s
}
