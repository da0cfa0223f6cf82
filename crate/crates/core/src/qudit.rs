//! Generalized Pauli operators and stabilizer states over prime dimension.
//!
//! A site operator is `D^{μ,ν} = e^{iπμν/d} X^μ Z^ν` with `X|l⟩ = |l+1⟩` and
//! `Z|l⟩ = ω^l|l⟩`, `ω = e^{2πi/d}`. A [`QuditPauli`] carries a global phase
//! `e^{iπk/d}` with `k` mod `2d`.
//!
//! Text form: `d=3 w^2 (1,0) (0,2) (0,0)`, the `w^k` factor being optional.

use std::fmt;

use itertools::Itertools;

use crate::error::{parse_err, Error, Result};
use crate::pauli::PauliString;
use crate::stabilizer::format_subset;

fn is_prime(d: u32) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| d % k != 0)
}

fn check_prime(d: u32) -> Result<()> {
    if is_prime(d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Left kernel of `rows` over Z_p: combinations `c` with `Σ c_i rows[i] = 0`.
pub fn kernel_mod_p(rows: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let m = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut work: Vec<(Vec<u32>, Vec<u32>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut c = vec![0; m];
            c[i] = 1;
            (r.iter().map(|v| v % p).collect(), c)
        })
        .collect();
    let mut next = 0;
    for col in 0..width {
        let Some(pos) = (next..m).find(|&r| work[r].0[col] != 0) else {
            continue;
        };
        work.swap(next, pos);
        let inv = inv_mod(work[next].0[col], p);
        let scale = |v: &mut Vec<u32>| v.iter_mut().for_each(|x| *x = *x * inv % p);
        scale(&mut work[next].0);
        scale(&mut work[next].1);
        let (pv, pc) = work[next].clone();
        for (r, (v, c)) in work.iter_mut().enumerate() {
            if r == next || v[col] == 0 {
                continue;
            }
            let f = v[col];
            for (x, y) in v.iter_mut().zip(&pv) {
                *x = (*x + p * p - f * y) % p;
            }
            for (x, y) in c.iter_mut().zip(&pc) {
                *x = (*x + p * p - f * y) % p;
            }
        }
        next += 1;
    }
    work.into_iter().skip(next).map(|(_, c)| c).collect()
}

pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    rows.len() - kernel_mod_p(rows, p).len()
}

/// Phased tensor product of displacement operators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuditPauli {
    d: u32,
    mu: Vec<u32>,
    nu: Vec<u32>,
    phase: u32,
}

impl QuditPauli {
    pub fn new(d: u32, mu: Vec<u32>, nu: Vec<u32>, phase: u32) -> Result<Self> {
        check_prime(d)?;
        if mu.len() != nu.len() {
            return Err(Error::DimensionMismatch {
                expected: mu.len(),
                found: nu.len(),
            });
        }
        if mu.is_empty() {
            return Err(Error::InvalidArgument("qudit Pauli needs at least one site".into()));
        }
        Ok(QuditPauli {
            d,
            mu: mu.into_iter().map(|m| m % d).collect(),
            nu: nu.into_iter().map(|v| v % d).collect(),
            phase: phase % (2 * d),
        })
    }

    pub fn identity(d: u32, n: usize) -> Result<Self> {
        Self::new(d, vec![0; n], vec![0; n], 0)
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn num_sites(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    /// Exponent `k` of the global factor `e^{iπk/d}`.
    pub fn phase_exp(&self) -> u32 {
        self.phase
    }

    pub fn is_trivial(&self) -> bool {
        self.mu.iter().chain(&self.nu).all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_trivial() && self.phase == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_sites())
            .filter(|&q| self.mu[q] != 0 || self.nu[q] != 0)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    fn check_same(&self, other: &QuditPauli) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d as usize,
                found: other.d as usize,
            });
        }
        if self.num_sites() != other.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: self.num_sites(),
                found: other.num_sites(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &QuditPauli) -> Result<QuditPauli> {
        self.check_same(other)?;
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &QuditPauli) -> QuditPauli {
        let d = self.d;
        let two_d = 2 * d;
        let mut phase = self.phase + other.phase;
        let mut mu = Vec::with_capacity(self.num_sites());
        let mut nu = Vec::with_capacity(self.num_sites());
        for q in 0..self.num_sites() {
            let (m1, n1, m2, n2) = (self.mu[q], self.nu[q], other.mu[q], other.nu[q]);
            let (m, n) = ((m1 + m2) % d, (n1 + n2) % d);
            // Z^ν1 X^μ2 = ω^{ν1μ2} X^μ2 Z^ν1
            phase += m1 * n1 + m2 * n2 + 2 * n1 * m2 + two_d * d - m * n;
            mu.push(m);
            nu.push(n);
        }
        QuditPauli {
            d,
            mu,
            nu,
            phase: phase % two_d,
        }
    }

    pub fn pow(&self, k: u32) -> QuditPauli {
        let mut acc = QuditPauli {
            d: self.d,
            mu: vec![0; self.num_sites()],
            nu: vec![0; self.num_sites()],
            phase: 0,
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `Σ_q μ1ν2 − μ2ν1` mod `d`.
    pub fn symplectic_form(&self, other: &QuditPauli) -> Result<u32> {
        self.check_same(other)?;
        let d = self.d as u64;
        let s = (0..self.num_sites()).fold(0u64, |acc, q| {
            let a = self.mu[q] as u64 * other.nu[q] as u64;
            let b = other.mu[q] as u64 * self.nu[q] as u64;
            (acc + a + d * d - b % d) % d
        });
        Ok(s as u32)
    }

    pub fn commutes(&self, other: &QuditPauli) -> Result<bool> {
        Ok(self.symplectic_form(other)? == 0)
    }

    fn vector(&self) -> Vec<u32> {
        self.mu.iter().chain(&self.nu).copied().collect()
    }

    /// Qubit operator to its `d = 2` counterpart.
    pub fn from_qubit(p: &PauliString) -> QuditPauli {
        let n = p.num_qubits();
        let bit = |v: u64, q: usize| (v >> q & 1) as u32;
        QuditPauli {
            d: 2,
            mu: (0..n).map(|q| bit(p.x_bits(), q)).collect(),
            nu: (0..n).map(|q| bit(p.z_bits(), q)).collect(),
            phase: p.sign_exp() as u32,
        }
    }

    /// Inverse of [`Self::from_qubit`]; `None` unless `d = 2`.
    pub fn to_qubit(&self) -> Option<PauliString> {
        if self.d != 2 {
            return None;
        }
        let mask = |v: &[u32]| {
            v.iter()
                .enumerate()
                .fold(0u64, |m, (q, &b)| m | (b as u64) << q)
        };
        let p = PauliString::from_parts(self.num_sites(), mask(&self.mu), mask(&self.nu), 0).ok()?;
        let ys = (p.x_bits() & p.z_bits()).count_ones();
        PauliString::from_parts(p.num_qubits(), p.x_bits(), p.z_bits(), ((self.phase + ys) % 4) as u8).ok()
    }

    pub fn parse(text: &str) -> Result<QuditPauli> {
        let mut tokens = text.split_whitespace();
        let head = tokens.next().ok_or_else(|| parse_err(0, "empty qudit Pauli"))?;
        let d: u32 = head
            .strip_prefix("d=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(0, format!("expected \"d=<p>\", got {head:?}")))?;
        check_prime(d)?;
        let mut phase = 0;
        let mut mu = Vec::new();
        let mut nu = Vec::new();
        for (idx, tok) in tokens.enumerate() {
            if let Some(k) = tok.strip_prefix("w^") {
                if idx != 0 {
                    return Err(parse_err(0, "phase factor must precede the sites"));
                }
                phase = k
                    .parse()
                    .map_err(|_| parse_err(0, format!("bad phase exponent {k:?}")))?;
                continue;
            }
            let inner = tok
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| parse_err(0, format!("expected \"(μ,ν)\", got {tok:?}")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| parse_err(0, format!("expected \"(μ,ν)\", got {tok:?}")))?;
            let num = |s: &str| -> Result<u32> {
                let v: u32 = s
                    .parse()
                    .map_err(|_| parse_err(0, format!("bad exponent {s:?}")))?;
                if v >= d {
                    return Err(parse_err(0, format!("exponent {v} outside 0..{d}")));
                }
                Ok(v)
            };
            mu.push(num(a)?);
            nu.push(num(b)?);
        }
        if mu.is_empty() {
            return Err(parse_err(0, "qudit Pauli has no sites"));
        }
        QuditPauli::new(d, mu, nu, phase)
    }
}

impl fmt::Display for QuditPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.d)?;
        if self.phase != 0 {
            write!(f, " w^{}", self.phase)?;
        }
        for q in 0..self.num_sites() {
            write!(f, " ({},{})", self.mu[q], self.nu[q])?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuditPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuditPauli({self})")
    }
}

/// Stabilizer state on `n` qudits of prime dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuditTableau {
    d: u32,
    generators: Vec<QuditPauli>,
}

impl QuditTableau {
    /// Validates commutation, independence and the `g^d = +I` convention
    /// that makes `+1` an eigenvalue of every generator.
    pub fn new(generators: Vec<QuditPauli>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidTableau("no generators".into()));
        };
        let d = first.d;
        let n = generators.len();
        for g in &generators {
            if g.d != d {
                return Err(Error::DimensionMismatch {
                    expected: d as usize,
                    found: g.d as usize,
                });
            }
            if g.num_sites() != n {
                return Err(Error::InvalidTableau(format!(
                    "{n} generators need {n} sites each, {g} has {}",
                    g.num_sites()
                )));
            }
            if !g.pow(d).is_identity() {
                return Err(Error::InvalidTableau(format!(
                    "{g} raised to the power {d} is not +I, so +1 is not an eigenvalue"
                )));
            }
        }
        for (a, b) in generators.iter().tuple_combinations() {
            if !a.commutes(b)? {
                return Err(Error::InvalidTableau(format!("{a} and {b} do not commute")));
            }
        }
        let rows: Vec<Vec<u32>> = generators.iter().map(QuditPauli::vector).collect();
        if rank_mod_p(&rows, d) != n {
            return Err(Error::InvalidTableau("generators are not independent".into()));
        }
        Ok(QuditTableau { d, generators })
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[QuditPauli] {
        &self.generators
    }

    /// `∏ g_i^{a_i}`.
    pub fn element(&self, exponents: &[u32]) -> QuditPauli {
        self.generators
            .iter()
            .zip(exponents)
            .fold(QuditPauli::identity(self.d, self.n()).expect("valid shape"), |acc, (g, &a)| {
                acc.mul(&g.pow(a % self.d))
            })
    }

    /// All `d^n` elements, for oracles at small size.
    pub fn elements(&self) -> Vec<QuditPauli> {
        assert!(
            (self.d as f64).powi(self.n() as i32) <= 1e6,
            "enumeration limited to a million elements"
        );
        span(self.d, self.n(), &self.generators)
    }

    fn check_sites(&self, sites: &[usize]) -> Result<()> {
        if let Some(&q) = sites.iter().find(|&&q| q >= self.n()) {
            return Err(Error::IndexOutOfRange {
                index: q,
                size: self.n(),
            });
        }
        Ok(())
    }

    /// Generators of the elements supported inside `sites`.
    pub fn local_subgroup(&self, sites: &[usize]) -> Result<Vec<QuditPauli>> {
        self.check_sites(sites)?;
        let outside: Vec<usize> = (0..self.n()).filter(|q| !sites.contains(q)).collect();
        let rows: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|g| outside.iter().flat_map(|&q| [g.mu[q], g.nu[q]]).collect())
            .collect();
        if outside.is_empty() {
            return Ok(self.generators.clone());
        }
        Ok(kernel_mod_p(&rows, self.d)
            .into_iter()
            .map(|c| self.element(&c))
            .collect())
    }

    /// Entanglement entropy across `sites | rest` in dits.
    pub fn entropy(&self, sites: &[usize]) -> Result<usize> {
        let k = self.local_subgroup(sites)?.len();
        let mut uniq = sites.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        Ok(uniq.len() - k)
    }

    pub fn is_ame(&self) -> Result<bool> {
        if self.n() < 2 {
            return Err(Error::InvalidArgument(
                "AME is defined for at least two sites".into(),
            ));
        }
        for a in (0..self.n()).combinations(self.n() / 2) {
            if !self.local_subgroup(&a)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks every `⌊n/2⌋ + 1` subset for a nontrivial local subgroup and,
    /// separately, for an element acting on every site of the subset.
    pub fn verify_theorem2(&self) -> Result<Theorem2Report> {
        if !self.is_ame()? {
            return Err(Error::Precondition(
                "state is not absolutely maximally entangled".into(),
            ));
        }
        let size = self.n() / 2 + 1;
        let mut entries = Vec::new();
        for subset in (0..self.n()).combinations(size) {
            let gens = self.local_subgroup(&subset)?;
            let k = gens.len();
            let elements = span(self.d, self.n(), &gens);
            let full: Vec<&QuditPauli> = elements
                .iter()
                .filter(|e| e.support() == subset)
                .collect();
            entries.push(Theorem2Entry {
                subset,
                k,
                nonidentity: elements.len() - 1,
                exact_support: full.len(),
                witness: full.first().map(|e| (*e).clone()),
            });
        }
        Ok(Theorem2Report {
            d: self.d,
            n: self.n(),
            entries,
        })
    }

    /// `n <N>` followed by `N` qudit Pauli lines.
    pub fn parse(text: &str) -> Result<QuditTableau> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (no, first) = lines.next().ok_or_else(|| parse_err(0, "empty tableau file"))?;
        let n: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", c] => c
                .parse()
                .map_err(|_| parse_err(no, format!("bad site count {c:?}")))?,
            _ => return Err(parse_err(no, "expected \"n <N>\"")),
        };
        let mut gens = Vec::new();
        let mut last = no;
        for (no, line) in lines {
            last = no;
            let p = QuditPauli::parse(line).map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(no, message),
                other => parse_err(no, other.to_string()),
            })?;
            if p.num_sites() != n {
                return Err(parse_err(no, format!("expected {n} sites, found {}", p.num_sites())));
            }
            gens.push(p);
        }
        if gens.len() != n {
            return Err(parse_err(last, format!("expected {n} generators, found {}", gens.len())));
        }
        QuditTableau::new(gens).map_err(|e| parse_err(last, e.to_string()))
    }

    /// Embeds a qubit tableau as `d = 2`.
    pub fn from_qubit(t: &crate::stabilizer::Tableau) -> QuditTableau {
        QuditTableau::new(t.generators().iter().map(QuditPauli::from_qubit).collect())
            .expect("qubit tableaux map to valid d = 2 tableaux")
    }
}

impl fmt::Display for QuditTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n())?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// All `d^k` products of `gens`.
fn span(d: u32, n: usize, gens: &[QuditPauli]) -> Vec<QuditPauli> {
    let mut out = vec![QuditPauli::identity(d, n).expect("valid shape")];
    for g in gens {
        let powers: Vec<QuditPauli> = (0..d).map(|a| g.pow(a)).collect();
        out = out
            .iter()
            .flat_map(|e| powers.iter().map(move |p| e.mul(p)))
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Entry {
    pub subset: Vec<usize>,
    /// Rank of the local subgroup.
    pub k: usize,
    /// `d^k − 1`.
    pub nonidentity: usize,
    /// Elements whose support is the whole subset.
    pub exact_support: usize,
    pub witness: Option<QuditPauli>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Report {
    pub d: u32,
    pub n: usize,
    pub entries: Vec<Theorem2Entry>,
}

impl Theorem2Report {
    /// Every subset has a non-identity local stabilizer.
    pub fn nontrivial(&self) -> bool {
        self.entries.iter().all(|e| e.k >= 1)
    }

    /// Every subset has an element acting on all of its sites.
    pub fn exact_support(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_some())
    }
}

impl fmt::Display for Theorem2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(
                f,
                "subset {} k {} count {} exact_support {}",
                format_subset(&e.subset),
                e.k,
                e.nonidentity,
                e.exact_support
            )?;
            match &e.witness {
                Some(w) => writeln!(f, " witness {w}")?,
                None => writeln!(f, " witness -")?,
            }
        }
        Ok(())
    }
}

/// Stabilizer generators of `Σ_{i,j ∈ Z_3} |i, j, i+j, i+2j⟩`: shifts along
/// the two code generators and phases dual to them.
pub fn ame_4_3() -> QuditTableau {
    let text = "n 4\n\
                d=3 (1,0) (0,0) (1,0) (1,0)\n\
                d=3 (0,0) (1,0) (1,0) (2,0)\n\
                d=3 (0,2) (0,2) (0,1) (0,0)\n\
                d=3 (0,2) (0,1) (0,0) (0,1)\n";
    QuditTableau::parse(text).expect("valid fixture")
}
