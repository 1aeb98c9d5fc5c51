//! Connectivity graphs of common processor layouts.

use alloc::vec::Vec;

use super::{CircuitError, CircuitGraph, Edge};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// Rotated square lattice: qubits in staggered rows, each coupled to
    /// up to two qubits in the row above and two in the row below.
    SycamoreLike,
    Square,
}

/// A graph together with the planar coordinates its qubits were laid out on.
#[derive(Debug, Clone)]
pub struct Layout {
    pub graph: CircuitGraph,
    /// `(row, column)` per qubit; for the staggered layouts the column is the
    /// horizontal position in half-spacings.
    pub coords: Vec<(i64, i64)>,
}

const SYCAMORE54: &str = include_str!("../../data/sycamore54.txt");

pub fn generate_lattice(
    kind: LatticeKind,
    rows: usize,
    cols: usize,
) -> Result<CircuitGraph, CircuitError> {
    Ok(layout(kind, rows, cols)?.graph)
}

pub fn layout(kind: LatticeKind, rows: usize, cols: usize) -> Result<Layout, CircuitError> {
    if rows < 2 || cols < 2 {
        return Err(CircuitError::LatticeTooSmall { rows, cols });
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges: Vec<Edge> = Vec::new();
    let mut coords = Vec::with_capacity(rows * cols);
    match kind {
        LatticeKind::Square => {
            for r in 0..rows {
                for c in 0..cols {
                    coords.push((r as i64, c as i64));
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
        }
        LatticeKind::SycamoreLike => {
            // qubit (r, c) sits at x = 2c + (r mod 2); it couples to the
            // qubits of row r + 1 at x - 1 and x + 1
            for r in 0..rows {
                for c in 0..cols {
                    let x = 2 * c + r % 2;
                    coords.push((r as i64, x as i64));
                    if r + 1 == rows {
                        continue;
                    }
                    for nx in [x as i64 - 1, x as i64 + 1] {
                        let twice = nx - ((r + 1) % 2) as i64;
                        if twice >= 0 && (twice / 2) < cols as i64 {
                            edges.push((id(r, c), id(r + 1, (twice / 2) as usize)));
                        }
                    }
                }
            }
        }
    }
    let graph = CircuitGraph::new(rows * cols, edges)?;
    Ok(Layout { graph, coords })
}

/// The 54-qubit Sycamore layout, as a grid with nearest-neighbour couplers.
pub fn sycamore54() -> Layout {
    grid_from_diagram(SYCAMORE54, None)
}

/// [`sycamore54`] with the qubit at grid position (0, 5) removed.
pub fn sycamore53() -> Layout {
    grid_from_diagram(SYCAMORE54, Some((0, 5)))
}

fn grid_from_diagram(diagram: &str, skip: Option<(i64, i64)>) -> Layout {
    let mut coords = Vec::new();
    for (r, line) in diagram.lines().enumerate() {
        for (c, ch) in line.chars().enumerate() {
            let pos = (r as i64, c as i64);
            if ch.is_ascii_alphabetic() && Some(pos) != skip {
                coords.push(pos);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, &(r, c)) in coords.iter().enumerate() {
        for (j, &(r2, c2)) in coords.iter().enumerate().skip(i + 1) {
            if (r - r2).abs() + (c - c2).abs() == 1 {
                edges.push((i, j));
            }
        }
    }
    let graph = CircuitGraph::new(coords.len(), edges).expect("bundled layout is connected");
    Layout { graph, coords }
}

/// Sycamore-like layouts by qubit count: 53 and 54 are the bundled
/// processor; other sizes use a generated staggered lattice (`n / 6` rows of
/// six qubits, or 13 rows of eight for 104).
pub fn sycamore_of_size(n: usize) -> Result<Layout, CircuitError> {
    match n {
        53 => Ok(sycamore53()),
        54 => Ok(sycamore54()),
        104 => layout(LatticeKind::SycamoreLike, 13, 8),
        n if n % 6 == 0 && n >= 12 => layout(LatticeKind::SycamoreLike, n / 6, 6),
        n => Err(CircuitError::UnsupportedSize(n)),
    }
}
