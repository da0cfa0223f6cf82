//! Named graphs and states used throughout the examples and tests.
//!
//! Graph constructors use 0-based vertex indices; the comments list edges
//! 1-based to match the usual pictures.

use crate::graph::Graph;
use crate::pauli::PauliString;
use crate::stabilizer::Tableau;

fn graph(n: usize, edges_1based: &[(usize, usize)]) -> Graph {
    let edges: Vec<_> = edges_1based.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    Graph::from_edges(n, &edges).expect("fixture graph is valid")
}

fn tableau(rows: &[&str]) -> Tableau {
    Tableau::parse_generators(rows).expect("fixture tableau is valid")
}

/// Two vertices joined by an edge.
pub fn pair_graph() -> Graph {
    graph(2, &[(1, 2)])
}

/// Five-cycle 1-2-3-4-5-1.
pub fn ring5_graph() -> Graph {
    Graph::cycle(5).expect("5 <= 64")
}

pub fn ring5_tableau() -> Tableau {
    Tableau::from_graph(&ring5_graph())
}

/// Path 1-2-3-4.
pub fn l4_graph() -> Graph {
    Graph::path(4).expect("4 <= 64")
}

/// Edges 1-2, 2-4, 4-5, 2-3.
pub fn fig5_graph() -> Graph {
    graph(5, &[(1, 2), (2, 4), (4, 5), (2, 3)])
}

/// Eleven-vertex graph with a unique route from the cluster around 1 to
/// the tail 9-10-11.
pub fn fig6_graph() -> Graph {
    graph(
        11,
        &[
            (1, 2),
            (1, 4),
            (1, 3),
            (3, 4),
            (3, 5),
            (3, 6),
            (6, 7),
            (6, 8),
            (6, 9),
            (9, 10),
            (10, 11),
            (4, 6),
        ],
    )
}

pub fn fig6_tableau() -> Tableau {
    Tableau::from_graph(&fig6_graph())
}

/// Linear chain on nine vertices.
pub fn chain9_graph() -> Graph {
    Graph::path(9).expect("9 <= 64")
}

/// Six-vertex graph with edges 12, 23, 13, 14, 45, 56, 46, 36, 25.
pub fn fig1c_graph() -> Graph {
    graph(
        6,
        &[
            (1, 2),
            (2, 3),
            (1, 3),
            (1, 4),
            (4, 5),
            (5, 6),
            (4, 6),
            (3, 6),
            (2, 5),
        ],
    )
}

/// Five independent generators of the five-qubit state `|ψ5⟩`, taken from
/// its perfect-correlation table rows (1,2,3), (1,2,4), (1,2,5), (1,3,4),
/// (1,3,5).
pub fn psi5_tableau() -> Tableau {
    tableau(&["+ZXXII", "+XZIZI", "+YYIIZ", "+YIZYI", "+XIYIY"])
}

/// The ten weight-three correlations of `|ψ5⟩` as usually listed, keyed by
/// the 1-based qubit triple.
///
/// The (2,3,4) entry `−Y2Y3Y4` is a misprint: it anticommutes with the
/// (1,3,4), (1,4,5) and (2,4,5) entries. The group element on those qubits
/// is `−Y2Y3X4`, see [`psi5_correlation_table`].
pub fn psi5_printed_correlations() -> Vec<([usize; 3], PauliString)> {
    let mut rows = psi5_correlation_table();
    rows[6].1 = "-IYYYI".parse().expect("valid Pauli literal");
    rows
}

/// All ten weight-three stabilizers of `|ψ5⟩` with their signs, keyed by
/// the 1-based qubit triple.
pub fn psi5_correlation_table() -> Vec<([usize; 3], PauliString)> {
    [
        ([1, 2, 3], "+ZXXII"),
        ([1, 2, 4], "+XZIZI"),
        ([1, 2, 5], "+YYIIZ"),
        ([1, 3, 4], "+YIZYI"),
        ([1, 3, 5], "+XIYIY"),
        ([1, 4, 5], "+ZIIXX"),
        ([2, 3, 4], "-IYYXI"),
        ([2, 3, 5], "+IZZIX"),
        ([2, 4, 5], "-IXIYY"),
        ([3, 4, 5], "+IIXZZ"),
    ]
    .into_iter()
    .map(|(t, s)| (t, s.parse().expect("valid Pauli literal")))
    .collect()
}

/// `|00⟩`.
pub fn product_00() -> Tableau {
    tableau(&["+ZI", "+IZ"])
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_tableau() -> Tableau {
    tableau(&["+XX", "+ZZ"])
}

/// `n`-qubit GHZ state `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_tableau(n: usize) -> Tableau {
    let mut rows = vec![PauliString::from_parts(n, (1u64 << n) - 1, 0, 0).expect("n <= 63")];
    for q in 1..n {
        rows.push(PauliString::from_parts(n, 0, 0b11 << (q - 1), 0).expect("n <= 63"));
    }
    Tableau::new(rows).expect("GHZ generators are valid")
}
