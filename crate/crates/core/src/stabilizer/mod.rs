//! Stabilizer tableaux and the group-theoretic queries built on them.
//!
//! A [`Tableau`] holds `n` independent, pairwise commuting, Hermitian Pauli
//! generators on `n` qubits. Everything else here (membership, local
//! subgroups, entropies, AME certification) reduces to GF(2) elimination on
//! the packed `(x|z)` rows followed by an exact recomputation of the sign.

mod canonical;
mod measure;

pub use canonical::{to_graph_state, GraphForm, LocalClifford};
pub use measure::{Basis as MeasurementBasis, Outcome, StabilizerFrame};

use std::fmt;

use itertools::Itertools;

use crate::error::{parse_err, Error, Result};
use crate::gf2;
use crate::graph::Graph;
use crate::pauli::{bits_of, low_mask, mask_of, Gate, PauliString, MAX_QUBITS};

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The operator is in the group; the mask lists the generators whose
    /// product equals it.
    Member(u64),
    /// The operator with the opposite sign is in the group.
    Negated(u64),
    Absent,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    /// Member with either sign.
    pub fn up_to_sign(&self) -> bool {
        !matches!(self, Membership::Absent)
    }
}

/// Generating set of a stabilizer state.
#[derive(Clone)]
pub struct Tableau {
    n: usize,
    generators: Vec<PauliString>,
    basis: gf2::Basis,
}

impl PartialEq for Tableau {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

impl Eq for Tableau {}

impl Tableau {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::InvalidTableau("no generators".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::InvalidTableau(format!(
                    "{n} generators need {n} qubits each, {g} has {}",
                    g.num_qubits()
                )));
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitian(g.to_string()));
            }
        }
        for (a, b) in generators.iter().tuple_combinations() {
            if !a.commutes_with(b) {
                return Err(Error::InvalidTableau(format!("{a} and {b} anticommute")));
            }
        }
        let mut basis = gf2::Basis::new();
        for (i, g) in generators.iter().enumerate() {
            if basis.insert(g.vector(), 1 << i).is_some() {
                return Err(Error::InvalidTableau(format!(
                    "generator {} ({g}) is dependent on the others",
                    i + 1
                )));
            }
        }
        Ok(Tableau {
            n,
            generators,
            basis,
        })
    }

    /// Graph-state generators `X_i ∏_{j ∈ N(i)} Z_j`.
    pub fn from_graph(g: &Graph) -> Tableau {
        let n = g.n();
        let gens = (0..n)
            .map(|i| PauliString::from_parts(n, 1 << i, g.neighbor_mask(i), 0).expect("n <= 64"))
            .collect();
        Tableau::new(gens).expect("graph-state generators are always valid")
    }

    pub fn parse_generators(lines: &[&str]) -> Result<Self> {
        let gens = lines
            .iter()
            .map(|l| PauliString::parse(l))
            .collect::<Result<Vec<_>>>()?;
        Tableau::new(gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Exact product of the generators selected by `mask`.
    pub fn product(&self, mask: u64) -> PauliString {
        bits_of(mask)
            .into_iter()
            .fold(PauliString::identity(self.n), |acc, i| {
                acc.mul(&self.generators[i])
            })
    }

    pub fn membership(&self, p: &PauliString) -> Result<Membership> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.to_string()));
        }
        Ok(match self.basis.solve(p.vector()) {
            None => Membership::Absent,
            Some(mask) => {
                let prod = self.product(mask);
                if prod == *p {
                    Membership::Member(mask)
                } else {
                    debug_assert_eq!(prod, p.negated());
                    Membership::Negated(mask)
                }
            }
        })
    }

    /// `Some(mask)` when `p`, sign included, is in the group.
    pub fn is_member(&self, p: &PauliString) -> Result<Option<u64>> {
        Ok(match self.membership(p)? {
            Membership::Member(m) => Some(m),
            _ => None,
        })
    }

    pub(crate) fn contains(&self, p: &PauliString) -> bool {
        matches!(self.membership(p), Ok(Membership::Member(_)))
    }

    /// Independent elements of the group lying in the kernel of a linear map
    /// that sends each generator's `(x|z)` row to a constraint word.
    pub(crate) fn subgroup_where(&self, constraint: impl Fn(&PauliString) -> u128) -> Vec<PauliString> {
        let rows: Vec<u128> = self.generators.iter().map(constraint).collect();
        gf2::kernel(&rows)
            .into_iter()
            .map(|mask| self.product(mask))
            .collect()
    }

    /// Elements that agree letter-wise with `pattern` wherever they act,
    /// act only on its support, and may carry any letter on the `free`
    /// qubits. The first two conditions say: off the support the letter is
    /// `I`; on the support it is `I` or the pattern letter, which is the
    /// same as a zero symplectic product with that letter.
    pub(crate) fn pattern_subgroup(&self, pattern: &PauliString, free: u64) -> Vec<PauliString> {
        let supp = pattern.support_mask() & !free;
        let outside = low_mask(self.n) & !supp & !free;
        let (px, pz) = (pattern.x_bits() & supp, pattern.z_bits() & supp);
        self.subgroup_where(|g| {
            let sym = ((g.x_bits() & pz) ^ (g.z_bits() & px)) & supp;
            ((g.x_bits() & outside) | sym) as u128 | (((g.z_bits() & outside) as u128) << 64)
        })
    }

    /// Elements supported inside `qubits`.
    pub fn local_subgroup(&self, qubits: &[usize]) -> Result<LocalSubgroup> {
        let inside = mask_of(qubits, self.n)?;
        let outside = low_mask(self.n) & !inside;
        let generators = self.subgroup_where(|g| {
            ((g.x_bits() & outside) as u128) | (((g.z_bits() & outside) as u128) << 64)
        });
        Ok(LocalSubgroup {
            n: self.n,
            qubits: bits_of(inside),
            generators,
        })
    }

    /// Entanglement entropy in bits across `qubits | rest`.
    pub fn entanglement_entropy(&self, qubits: &[usize]) -> Result<usize> {
        let local = self.local_subgroup(qubits)?;
        Ok(local.qubits.len() - local.rank())
    }

    /// Every `⌊n/2⌋`-qubit reduction is maximally mixed.
    pub fn is_ame(&self) -> bool {
        (0..self.n).combinations(self.n / 2).all(|a| {
            self.local_subgroup(&a)
                .map(|l| l.rank() == 0)
                .unwrap_or(false)
        })
    }

    /// Counts non-identity local stabilizers on every `⌊n/2⌋ + 1` subset.
    pub fn verify_theorem1(&self) -> Result<Theorem1Report> {
        if !self.is_ame() {
            return Err(Error::Precondition(
                "state is not absolutely maximally entangled".into(),
            ));
        }
        let size = self.n / 2 + 1;
        let expected = if self.n % 2 == 1 { 1 } else { 3 };
        let entries = (0..self.n)
            .combinations(size)
            .map(|a| {
                let k = self.local_subgroup(&a).expect("indices in range").rank();
                ((1usize << k) - 1, a)
            })
            .map(|(count, subset)| SubsetCount { subset, count })
            .collect();
        Ok(Theorem1Report {
            n: self.n,
            expected,
            entries,
        })
    }

    /// All `2^n` group elements, ordered by generator mask. Intended for
    /// oracles at small `n`.
    pub fn elements(&self) -> impl Iterator<Item = PauliString> + '_ {
        assert!(self.n <= 24, "exhaustive enumeration limited to 24 qubits");
        (0..1u64 << self.n).map(move |m| self.product(m))
    }

    /// Tensor product with `other` acting on the following qubits.
    pub fn tensor(&self, other: &Tableau) -> Result<Tableau> {
        let n = self.n + other.n;
        let left = self.generators.iter().map(|g| {
            PauliString::from_parts(n, g.x_bits(), g.z_bits(), g.phase_exp())
        });
        let right = other.generators.iter().map(|g| {
            PauliString::from_parts(
                n,
                g.x_bits() << self.n,
                g.z_bits() << self.n,
                g.phase_exp(),
            )
        });
        Tableau::new(left.chain(right).collect::<Result<Vec<_>>>()?)
    }

    /// Image `U S U†` of the whole group under a single-qubit Clifford.
    pub fn conjugated(&self, qubit: usize, gate: Gate) -> Result<Tableau> {
        if qubit >= self.n {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                size: self.n,
            });
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut g = *g;
                g.conjugate_local(qubit, gate);
                g
            })
            .collect();
        Tableau::new(gens)
    }

    /// Same group as `other` (same state).
    pub fn same_group(&self, other: &Tableau) -> bool {
        self.n == other.n && other.generators.iter().all(|g| self.contains(g))
    }

    /// Parses `n <N>` followed by `N` Pauli lines.
    pub fn parse(text: &str) -> Result<Tableau> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (first_no, first) = lines.next().ok_or_else(|| parse_err(0, "empty tableau file"))?;
        let n: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count
                .parse()
                .map_err(|_| parse_err(first_no, format!("bad qubit count {count:?}")))?,
            _ => return Err(parse_err(first_no, "expected \"n <N>\"")),
        };
        if n == 0 || n > MAX_QUBITS {
            return Err(parse_err(first_no, format!("qubit count {n} outside 1..=64")));
        }
        let mut gens = Vec::with_capacity(n);
        let mut last = first_no;
        for (no, line) in lines {
            last = no;
            if gens.len() == n {
                return Err(parse_err(no, format!("more than {n} generators")));
            }
            let p = PauliString::parse_with_len(line, n).map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(no, message),
                other => parse_err(no, other.to_string()),
            })?;
            gens.push(p);
        }
        if gens.len() != n {
            return Err(parse_err(
                last,
                format!("expected {n} generators, found {}", gens.len()),
            ));
        }
        Tableau::new(gens).map_err(|e| parse_err(last, e.to_string()))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.generators.iter()).finish()
    }
}

/// Stabilizer elements supported inside a qubit set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSubgroup {
    /// Size of the whole system.
    pub n: usize,
    pub qubits: Vec<usize>,
    pub generators: Vec<PauliString>,
}

impl LocalSubgroup {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn order(&self) -> u64 {
        1 << self.rank()
    }

    pub fn elements(&self) -> Vec<PauliString> {
        let n = self.n;
        (0..self.order())
            .map(|m| {
                bits_of(m)
                    .into_iter()
                    .fold(PauliString::identity(n), |a, i| a.mul(&self.generators[i]))
            })
            .collect()
    }
}

/// One line of a [`Theorem1Report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCount {
    pub subset: Vec<usize>,
    pub count: usize,
}

/// Non-identity local stabilizer counts on every `⌊n/2⌋ + 1` subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Report {
    pub n: usize,
    /// 1 for odd `n`, 3 for even `n`.
    pub expected: usize,
    pub entries: Vec<SubsetCount>,
}

impl Theorem1Report {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.count == self.expected)
    }
}

pub(crate) fn format_subset(s: &[usize]) -> String {
    s.iter().map(|q| (q + 1).to_string()).join(",")
}

impl fmt::Display for Theorem1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "subset {} count {}", format_subset(&e.subset), e.count)?;
        }
        Ok(())
    }
}
