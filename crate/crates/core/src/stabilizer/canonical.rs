//! Reduction of a stabilizer state to a local-Clifford-equivalent graph state.

use std::fmt;

use super::Tableau;
use crate::graph::Graph;
use crate::pauli::{Gate, PauliString};

/// Single-qubit Clifford as a gate sequence in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalClifford {
    pub gates: Vec<Gate>,
}

impl LocalClifford {
    pub fn is_identity(&self) -> bool {
        self.gates.is_empty()
    }

    /// Operator word with the first-applied gate rightmost, e.g. `ZSH`
    /// for `H` then `S` then `Z`. The identity is `I`.
    pub fn operator_word(&self) -> String {
        if self.gates.is_empty() {
            return "I".into();
        }
        self.gates
            .iter()
            .rev()
            .map(|g| match g {
                Gate::H => 'H',
                Gate::S => 'S',
                Gate::X => 'X',
                Gate::Z => 'Z',
            })
            .collect()
    }

    pub fn conjugate(&self, p: &mut PauliString, qubit: usize) {
        for &g in &self.gates {
            p.conjugate_local(qubit, g);
        }
    }
}

impl fmt::Display for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.operator_word())
    }
}

/// Graph together with the per-qubit Cliffords mapping the input state to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphForm {
    pub graph: Graph,
    pub cliffords: Vec<LocalClifford>,
}

impl GraphForm {
    /// Image of a Pauli under the local unitary `⊗ U_q`.
    pub fn map(&self, p: &PauliString) -> PauliString {
        let mut out = *p;
        for (q, c) in self.cliffords.iter().enumerate() {
            c.conjugate(&mut out, q);
        }
        out
    }
}

struct Work {
    rows: Vec<PauliString>,
    cliffords: Vec<LocalClifford>,
}

impl Work {
    fn apply(&mut self, q: usize, g: Gate) {
        for r in &mut self.rows {
            r.conjugate_local(q, g);
        }
        self.cliffords[q].gates.push(g);
    }

    /// Gauss–Jordan on the rows `from..` using bit `col` of `bits(row)`,
    /// reducing every other row in `reduce_from..`. Returns the pivot row.
    fn pivot(
        &mut self,
        from: usize,
        reduce_from: usize,
        col: usize,
        bits: impl Fn(&PauliString) -> u64,
    ) -> Option<usize> {
        let pos = (from..self.rows.len()).find(|&r| bits(&self.rows[r]) >> col & 1 == 1)?;
        self.rows.swap(from, pos);
        let pivot = self.rows[from];
        for r in reduce_from..self.rows.len() {
            if r != from && bits(&self.rows[r]) >> col & 1 == 1 {
                self.rows[r] = self.rows[r].mul(&pivot);
            }
        }
        Some(from)
    }
}

/// Finds a graph `G` and local Cliffords `U_q` with `(⊗U_q)|ψ⟩ = |G⟩`.
pub fn to_graph_state(t: &Tableau) -> GraphForm {
    let n = t.n();
    let mut w = Work {
        rows: t.generators().to_vec(),
        cliffords: vec![LocalClifford::default(); n],
    };

    // rows[..rank] get distinct X pivots, rows[rank..] are Z-only
    let mut rank = 0;
    let mut x_pivots = 0u64;
    for col in 0..n {
        if w.pivot(rank, 0, col, |p| p.x_bits()).is_some() {
            rank += 1;
            x_pivots |= 1 << col;
        }
    }
    // commutation with the upper rows makes the Z-only rows independent on
    // the columns without an X pivot; Hadamards there complete the X block
    let mut next = rank;
    let mut hadamards = Vec::new();
    for col in (0..n).filter(|c| x_pivots >> c & 1 == 0) {
        if w.pivot(next, rank, col, |p| p.z_bits()).is_some() {
            hadamards.push(col);
            next += 1;
        }
    }
    for q in hadamards {
        w.apply(q, Gate::H);
    }

    for col in 0..n {
        w.pivot(col, 0, col, |p| p.x_bits())
            .expect("X block is invertible after the Hadamards");
    }
    for q in 0..n {
        debug_assert_eq!(w.rows[q].x_bits(), 1 << q);
        if w.rows[q].z_bits() >> q & 1 == 1 {
            w.apply(q, Gate::S);
        }
    }
    for q in 0..n {
        if w.rows[q].is_negative() {
            w.apply(q, Gate::Z);
        }
    }

    let mut graph = Graph::new(n).expect("n <= 64");
    for (a, row) in w.rows.iter().enumerate() {
        for b in crate::pauli::bits_of(row.z_bits()) {
            assert!(
                w.rows[b].z_bits() >> a & 1 == 1,
                "Z block of a stabilizer state in graph form is symmetric"
            );
            if a < b {
                graph.add_edge(a, b).expect("distinct in-range vertices");
            }
        }
    }
    let form = GraphForm {
        graph,
        cliffords: w.cliffords,
    };
    let target = Tableau::from_graph(&form.graph);
    assert!(
        t.generators().iter().all(|g| target.contains(&form.map(g))),
        "local Clifford image must equal the graph state"
    );
    form
}
