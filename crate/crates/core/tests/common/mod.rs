#![allow(dead_code)]

use std::path::PathBuf;

use makd::{Gate, Graph, Letter, PauliString, Tableau};
use num_complex::Complex64;
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Connected graphs on 2..=6 vertices, one per isomorphism class.
pub fn connected_graphs() -> Vec<Graph> {
    data("connected_le6.graphs")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut toks = l.split_whitespace();
            assert_eq!(toks.next(), Some("n"));
            let n: usize = toks.next().unwrap().parse().unwrap();
            let edges: Vec<(usize, usize)> = toks
                .map(|e| {
                    let (a, b) = e.split_once('-').unwrap();
                    (a.parse::<usize>().unwrap() - 1, b.parse::<usize>().unwrap() - 1)
                })
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// Random spanning tree plus extra edges, so the result is connected.
pub fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = random_graph(n, p, rng);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    g
}

/// Applies a few random single-qubit Cliffords and Paulis to every qubit,
/// which changes letters and signs but not the entanglement structure.
pub fn scramble<R: Rng>(t: &Tableau, rng: &mut R) -> Tableau {
    let gates = [Gate::H, Gate::S, Gate::X, Gate::Z];
    let mut t = t.clone();
    for q in 0..t.n() {
        for _ in 0..rng.gen_range(0..4) {
            t = t.conjugated(q, gates[rng.gen_range(0..4)]).unwrap();
        }
    }
    t
}

pub type Mat = Vec<Vec<Complex64>>;

fn letter_matrix(l: Letter) -> Mat {
    let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    let j = Complex64::i();
    match l {
        Letter::I => vec![vec![i, o], vec![o, i]],
        Letter::X => vec![vec![o, i], vec![i, o]],
        Letter::Y => vec![vec![o, -j], vec![j, o]],
        Letter::Z => vec![vec![i, o], vec![o, -i]],
    }
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Explicit `2^n × 2^n` matrix, qubit 0 as the leftmost tensor factor.
pub fn pauli_matrix(p: &PauliString) -> Mat {
    let phase = [
        Complex64::new(1.0, 0.0),
        Complex64::i(),
        Complex64::new(-1.0, 0.0),
        -Complex64::i(),
    ][p.phase_exp() as usize];
    let mut m = vec![vec![phase]];
    for q in 0..p.num_qubits() {
        m = kron(&m, &letter_matrix(p.letter(q)));
    }
    // the letter form already carries i per Y; remove it from the phase
    let ys = p.letters().iter().filter(|&&l| l == Letter::Y).count() as i32;
    let fix = Complex64::i().powi(-ys);
    m.iter().map(|r| r.iter().map(|v| v * fix).collect()).collect()
}

pub fn close(a: &Mat, b: &Mat) -> bool {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| (x - y).norm() < 1e-12)
}

pub fn all_paulis(n: usize) -> Vec<PauliString> {
    (0..1u64 << n)
        .flat_map(|x| (0..1u64 << n).map(move |z| (x, z)))
        .flat_map(|(x, z)| (0..4u8).map(move |ph| PauliString::from_parts(n, x, z, ph).unwrap()))
        .collect()
}

/// Proper letter-wise substrings of `sigma` acting on `i` or `j` that are
/// group elements with either sign, by enumeration of all support subsets.
pub fn exhaustive_substring_secure(t: &Tableau, sigma: &PauliString, i: usize, j: usize) -> bool {
    let supp = sigma.support();
    let full = (1u64 << supp.len()) - 1;
    for m in 1..full {
        let qs: Vec<usize> = (0..supp.len()).filter(|b| m >> b & 1 == 1).map(|b| supp[b]).collect();
        if !qs.contains(&i) && !qs.contains(&j) {
            continue;
        }
        let letters: Vec<(usize, Letter)> = qs.iter().map(|&q| (q, sigma.letter(q))).collect();
        let tau = PauliString::from_sparse(sigma.num_qubits(), &letters).unwrap();
        if t.membership(&tau).unwrap().up_to_sign() {
            return false;
        }
    }
    true
}

/// Zero entropy across some bipartition, i.e. the tableau splits.
pub fn has_product_cut(t: &Tableau) -> bool {
    let n = t.n();
    (1..1u64 << (n - 1)).any(|m| {
        let a: Vec<usize> = (0..n).filter(|q| m >> q & 1 == 1).collect();
        t.entanglement_entropy(&a).unwrap() == 0
    })
}

/// Zero entropy across some bipartition separating `i` from `j`.
pub fn separated(t: &Tableau, i: usize, j: usize) -> bool {
    let n = t.n();
    (0..1u64 << n).any(|m| {
        if m >> i & 1 == 0 || m >> j & 1 == 1 {
            return false;
        }
        let a: Vec<usize> = (0..n).filter(|q| m >> q & 1 == 1).collect();
        t.entanglement_entropy(&a).unwrap() == 0
    })
}
