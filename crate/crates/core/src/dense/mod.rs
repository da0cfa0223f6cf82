//! Dense statevector oracles for small systems.
//!
//! Site `q` is the digit of weight `d^(n-1-q)` in the basis index, so site 0
//! is the most significant digit and `|k⟩` reads left to right.

mod bell;

pub use bell::{classical_bound, expectation, grid_search, BellExpression, Factor, GridResult, Term};

use itertools::Itertools;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qudit::{QuditPauli, QuditTableau};
use crate::stabilizer::Tableau;

/// Tolerance for unit-magnitude comparisons.
pub const TOL: f64 = 1e-9;
/// Tolerance for norms.
pub const NORM_TOL: f64 = 1e-12;

pub const MAX_QUBITS: usize = 14;
pub const MAX_QUTRITS: usize = 6;
pub const MAX_ENUMERATION_QUBITS: usize = 6;

pub type Matrix = Vec<Vec<Complex64>>;
pub type Mat2 = [[Complex64; 2]; 2];

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Normalized amplitude vector with canonical global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    d: u32,
    sites: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// Normalizes `amps` and rotates the first nonzero amplitude onto the
    /// positive real axis.
    pub fn new(d: u32, sites: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let max = match d {
            2 => MAX_QUBITS,
            3 => MAX_QUTRITS,
            _ => return Err(Error::UnsupportedDimension(d)),
        };
        if sites == 0 || sites > max {
            return Err(Error::TooLarge {
                requested: sites,
                max,
            });
        }
        let len = (d as usize).pow(sites as u32);
        if amps.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let lead = amps.iter().find(|a| a.norm() > 1e-6).copied().unwrap_or(C1);
        let rot = lead.conj() / lead.norm() / norm;
        amps.iter_mut().for_each(|a| *a *= rot);
        Ok(DenseState { d, sites, amps })
    }

    pub fn qubits(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::new(2, n, amps)
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(dot(&self.amps, &other.amps))
    }

    pub fn overlap(&self, other: &DenseState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    fn check_shape(&self, other: &DenseState) -> Result<()> {
        if self.d != other.d || self.sites != other.sites {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                found: other.amps.len(),
            });
        }
        Ok(())
    }

    fn require_qubits(&self) -> Result<()> {
        if self.d != 2 {
            return Err(Error::InvalidArgument(format!(
                "operation needs a qubit state, got dimension {}",
                self.d
            )));
        }
        Ok(())
    }

    fn check_pauli(&self, p: &PauliString) -> Result<()> {
        self.require_qubits()?;
        if p.num_qubits() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                found: p.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<Vec<Complex64>> {
        self.check_pauli(p)?;
        Ok(apply_pauli(&self.amps, self.sites, p))
    }

    pub fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64> {
        self.check_pauli(p)?;
        Ok(pauli_expectation(&self.amps, self.sites, p))
    }

    /// Applies `u` on `site`; the result keeps its global phase.
    pub fn apply_single(&self, site: usize, u: &Mat2) -> Result<Vec<Complex64>> {
        self.require_qubits()?;
        if site >= self.sites {
            return Err(Error::IndexOutOfRange {
                index: site,
                size: self.sites,
            });
        }
        Ok(apply_single(&self.amps, self.sites, site, u))
    }

    fn check_qudit(&self, p: &QuditPauli) -> Result<()> {
        if p.dim() != self.d || p.num_sites() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                found: p.num_sites(),
            });
        }
        Ok(())
    }

    pub fn apply_qudit_pauli(&self, p: &QuditPauli) -> Result<Vec<Complex64>> {
        self.check_qudit(p)?;
        Ok(apply_qudit(&self.amps, self.sites, p))
    }

    pub fn qudit_expectation(&self, p: &QuditPauli) -> Result<Complex64> {
        self.check_qudit(p)?;
        Ok(dot(&self.amps, &apply_qudit(&self.amps, self.sites, p)))
    }

    /// Partial trace onto `sites` (in the given order).
    pub fn reduced_density_matrix(&self, sites: &[usize]) -> Result<Matrix> {
        if let Some(&q) = sites.iter().find(|&&q| q >= self.sites) {
            return Err(Error::IndexOutOfRange {
                index: q,
                size: self.sites,
            });
        }
        if !sites.iter().all_unique() {
            return Err(Error::InvalidArgument("repeated site in partial trace".into()));
        }
        let d = self.d as usize;
        let dim_a = d.pow(sites.len() as u32);
        let rest: Vec<usize> = (0..self.sites).filter(|q| !sites.contains(q)).collect();
        let dim_b = d.pow(rest.len() as u32);
        let mut blocks = vec![vec![C0; dim_a]; dim_b];
        for (k, &amp) in self.amps.iter().enumerate() {
            let digit = |q: usize| k / d.pow((self.sites - 1 - q) as u32) % d;
            let a = sites.iter().fold(0, |acc, &q| acc * d + digit(q));
            let b = rest.iter().fold(0, |acc, &q| acc * d + digit(q));
            blocks[b][a] = amp;
        }
        let mut rho = vec![vec![C0; dim_a]; dim_a];
        for v in &blocks {
            for (i, vi) in v.iter().enumerate() {
                if *vi == C0 {
                    continue;
                }
                for (j, vj) in v.iter().enumerate() {
                    rho[i][j] += vi * vj.conj();
                }
            }
        }
        Ok(rho)
    }

    /// True when every `r`-site reduction equals `I/d^r` within [`TOL`].
    pub fn reductions_maximally_mixed(&self, r: usize) -> Result<bool> {
        self.check_uniformity_order(r)?;
        let target = 1.0 / (self.d as f64).powi(r as i32);
        for sub in (0..self.sites).combinations(r) {
            let rho = self.reduced_density_matrix(&sub)?;
            for (i, row) in rho.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { target } else { 0.0 };
                    if (v - want).norm() > TOL {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn check_uniformity_order(&self, r: usize) -> Result<()> {
        if r > self.sites / 2 {
            return Err(Error::Precondition(format!(
                "r = {r} exceeds half of {} sites",
                self.sites
            )));
        }
        Ok(())
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Qubit mask (bit `q` = site `q`) to basis-index mask.
fn index_mask(mask: u64, n: usize) -> usize {
    (0..n)
        .filter(|q| mask >> q & 1 == 1)
        .fold(0, |m, q| m | 1 << (n - 1 - q))
}

fn i_pow(k: u8) -> Complex64 {
    [C1, Complex64::i(), -C1, -Complex64::i()][(k % 4) as usize]
}

fn apply_pauli(amps: &[Complex64], n: usize, p: &PauliString) -> Vec<Complex64> {
    let x = index_mask(p.x_bits(), n);
    let z = index_mask(p.z_bits(), n);
    let ph = i_pow(p.phase_exp());
    let mut out = vec![C0; amps.len()];
    for (k, &a) in amps.iter().enumerate() {
        let s = if (k & z).count_ones() % 2 == 1 { -ph } else { ph };
        out[k ^ x] = s * a;
    }
    out
}

fn pauli_expectation(amps: &[Complex64], n: usize, p: &PauliString) -> Complex64 {
    let x = index_mask(p.x_bits(), n);
    let z = index_mask(p.z_bits(), n);
    let sum: Complex64 = amps
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let t = amps[k ^ x].conj() * a;
            if (k & z).count_ones() % 2 == 1 {
                -t
            } else {
                t
            }
        })
        .sum();
    i_pow(p.phase_exp()) * sum
}

fn apply_single(amps: &[Complex64], n: usize, site: usize, u: &Mat2) -> Vec<Complex64> {
    let bit = 1 << (n - 1 - site);
    let mut out = amps.to_vec();
    for k in (0..amps.len()).filter(|k| k & bit == 0) {
        let (a0, a1) = (amps[k], amps[k | bit]);
        out[k] = u[0][0] * a0 + u[0][1] * a1;
        out[k | bit] = u[1][0] * a0 + u[1][1] * a1;
    }
    out
}

fn apply_qudit(amps: &[Complex64], m: usize, p: &QuditPauli) -> Vec<Complex64> {
    let d = p.dim() as usize;
    let unit = std::f64::consts::PI / d as f64;
    let mut out = vec![C0; amps.len()];
    let base: usize = (0..m).map(|q| (p.mu()[q] * p.nu()[q]) as usize).sum::<usize>() + p.phase_exp() as usize;
    for (k, &a) in amps.iter().enumerate() {
        let mut target = 0;
        let mut phase = base;
        for q in 0..m {
            let l = k / d.pow((m - 1 - q) as u32) % d;
            phase += 2 * p.nu()[q] as usize * l;
            target = target * d + (l + p.mu()[q] as usize) % d;
        }
        out[target] = Complex64::from_polar(1.0, unit * (phase % (2 * d)) as f64) * a;
    }
    out
}

/// Generic vector used as the seed of projector constructions.
fn seed_vector(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// The unique joint `+1` eigenvector of the generators of `t`.
pub fn state_from_tableau(t: &Tableau) -> Result<DenseState> {
    let n = t.n();
    if n > MAX_QUBITS {
        return Err(Error::TooLarge {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    for seed in 0..8 {
        let mut v = seed_vector(1 << n, seed);
        for g in t.generators() {
            let gv = apply_pauli(&v, n, g);
            v.iter_mut().zip(gv).for_each(|(a, b)| *a = (*a + b) * 0.5);
        }
        if v.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-10 {
            continue;
        }
        let s = DenseState::qubits(n, v)?;
        for g in t.generators() {
            let gv = apply_pauli(&s.amps, n, g);
            let dev: f64 = gv.iter().zip(&s.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            if dev > TOL {
                return Err(Error::InvalidTableau(format!("{g} does not fix the projected state")));
            }
        }
        return Ok(s);
    }
    Err(Error::InvalidTableau("stabilizer group contains −I".into()))
}

/// As [`state_from_tableau`] for qutrit tableaux.
pub fn state_from_qudit_tableau(t: &QuditTableau) -> Result<DenseState> {
    let (d, m) = (t.dim(), t.n());
    if d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if m > MAX_QUTRITS {
        return Err(Error::TooLarge {
            requested: m,
            max: MAX_QUTRITS,
        });
    }
    let len = 3usize.pow(m as u32);
    for seed in 0..8 {
        let mut v = seed_vector(len, seed);
        for g in t.generators() {
            let mut acc = v.clone();
            let mut cur = v.clone();
            for _ in 1..d {
                cur = apply_qudit(&cur, m, g);
                acc.iter_mut().zip(&cur).for_each(|(a, b)| *a += b);
            }
            v = acc.into_iter().map(|a| a / d as f64).collect();
        }
        if v.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-10 {
            continue;
        }
        let s = DenseState::new(3, m, v)?;
        for g in t.generators() {
            let e = s.qudit_expectation(g)?;
            if (e - C1).norm() > TOL {
                return Err(Error::InvalidTableau(format!("{g} does not fix the projected state")));
            }
        }
        return Ok(s);
    }
    Err(Error::InvalidTableau("projector onto the stabilized space vanishes".into()))
}

fn letter_form(n: usize, x: u64, z: u64) -> PauliString {
    let ys = (x & z).count_ones() as u8;
    PauliString::from_parts(n, x, z, ys % 4).expect("masks fit")
}

/// Every signed Pauli with expectation `±1` on `s`, by exhaustive search over
/// all `4^n` strings.
pub fn brute_force_stabilizers(s: &DenseState) -> Result<Vec<PauliString>> {
    s.require_qubits()?;
    let n = s.sites;
    if n > MAX_ENUMERATION_QUBITS {
        return Err(Error::TooLarge {
            requested: n,
            max: MAX_ENUMERATION_QUBITS,
        });
    }
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for z in 0..1u64 << n {
            let p = letter_form(n, x, z);
            let e = pauli_expectation(&s.amps, n, &p).re;
            if (e - 1.0).abs() < TOL {
                out.push(p);
            } else if (e + 1.0).abs() < TOL {
                out.push(p.negated());
            }
        }
    }
    Ok(out)
}

/// Every phased qutrit displacement operator fixing `s`.
pub fn brute_force_qudit_stabilizers(s: &DenseState) -> Result<Vec<QuditPauli>> {
    let (d, m) = (s.d, s.sites);
    if d == 2 {
        return Ok(brute_force_stabilizers(s)?
            .iter()
            .map(QuditPauli::from_qubit)
            .collect());
    }
    let unit = std::f64::consts::PI / d as f64;
    let mut out = Vec::new();
    for exps in (0..2 * m).map(|_| 0..d).multi_cartesian_product() {
        let (mu, nu) = exps.split_at(m);
        let p = QuditPauli::new(d, mu.to_vec(), nu.to_vec(), 0)?;
        let e = s.qudit_expectation(&p)?;
        if (e.norm() - 1.0).abs() > TOL {
            continue;
        }
        // e^{iπk/d} D has expectation 1 for e^{iπk/d} = conj(e)
        let k = (-e.arg() / unit).round();
        if (k * unit + e.arg()).abs() > 1e-6 {
            continue;
        }
        let k = k.rem_euclid(2.0 * d as f64) as u32;
        out.push(QuditPauli::new(d, mu.to_vec(), nu.to_vec(), k)?);
    }
    Ok(out)
}

/// Every non-identity Pauli of weight at most `r` has zero expectation.
pub fn uniformity_check(s: &DenseState, r: usize) -> Result<bool> {
    s.require_qubits()?;
    s.check_uniformity_order(r)?;
    let n = s.sites;
    for w in 1..=r {
        for support in (0..n).combinations(w) {
            for letters in (0..w).map(|_| 1..4u8).multi_cartesian_product() {
                let (mut x, mut z) = (0u64, 0u64);
                for (&q, &l) in support.iter().zip(&letters) {
                    x |= ((l & 1) as u64) << q;
                    z |= ((l >> 1) as u64) << q;
                }
                if pauli_expectation(&s.amps, n, &letter_form(n, x, z)).norm() > TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `a_x X + a_y Y + a_z Z`.
pub fn bloch_matrix(a: [f64; 3]) -> Mat2 {
    let [x, y, z] = a;
    [
        [Complex64::new(z, 0.0), Complex64::new(x, -y)],
        [Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ]
}

/// Single-qubit gate names accepted in local-unitary words: `I X Y Z`, the
/// reflections `F = (X+Y)/√2`, `G = (Y+Z)/√2`, `H = (Z+X)/√2`,
/// `A, Ap = (X±Z)/√2`, and the phase gate `S`.
pub fn named_unitary(label: &str) -> Option<Mat2> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let m = match label {
        "I" => [[C1, C0], [C0, C1]],
        "S" => [[C1, C0], [C0, Complex64::i()]],
        "X" => bloch_matrix([1.0, 0.0, 0.0]),
        "Y" => bloch_matrix([0.0, 1.0, 0.0]),
        "Z" => bloch_matrix([0.0, 0.0, 1.0]),
        "F" => bloch_matrix([h, h, 0.0]),
        "G" => bloch_matrix([0.0, h, h]),
        "H" => bloch_matrix([h, 0.0, h]),
        "A" => bloch_matrix([h, 0.0, h]),
        "Ap" | "A'" => bloch_matrix([h, 0.0, -h]),
        _ => return None,
    };
    Some(m)
}

/// A product of single-qubit gates written as an operator, e.g.
/// `X1 F1 G2`: the rightmost factor acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalWord {
    pub factors: Vec<(String, usize)>,
}

impl LocalWord {
    /// Parses tokens `<label><site>` with 1-based sites.
    pub fn parse(text: &str) -> Result<LocalWord> {
        let factors = text
            .split_whitespace()
            .map(|tok| {
                let split = tok
                    .find(|c: char| c.is_ascii_digit())
                    .ok_or_else(|| Error::InvalidArgument(format!("factor {tok:?} has no site")))?;
                let (label, site) = tok.split_at(split);
                let site: usize = site
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad site in {tok:?}")))?;
                if site == 0 {
                    return Err(Error::InvalidArgument(format!("sites are 1-based in {tok:?}")));
                }
                if named_unitary(label).is_none() {
                    return Err(Error::InvalidArgument(format!("unknown gate {label:?}")));
                }
                Ok((label.to_string(), site - 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalWord { factors })
    }
}

/// `|⟨target|U|s⟩|` for the local word `u`.
pub fn verify_lu_map(s: &DenseState, u: &LocalWord, target: &DenseState) -> Result<f64> {
    s.check_shape(target)?;
    s.require_qubits()?;
    let mut v = s.amps.clone();
    for (label, site) in u.factors.iter().rev() {
        if *site >= s.sites {
            return Err(Error::IndexOutOfRange {
                index: *site,
                size: s.sites,
            });
        }
        let m = named_unitary(label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown gate {label:?}")))?;
        v = apply_single(&v, s.sites, *site, &m);
    }
    Ok(dot(&target.amps, &v).norm())
}

/// `Σ_{i,j ∈ Z_3} |i, j, i+j, i+2j⟩ / 3`.
pub fn mds_ame_4_3() -> DenseState {
    let mut amps = vec![C0; 81];
    for (i, j) in (0..3).cartesian_product(0..3) {
        let digits = [i, j, (i + j) % 3, (i + 2 * j) % 3];
        let k = digits.iter().fold(0, |acc, &v| acc * 3 + v);
        amps[k] = C1;
    }
    DenseState::new(3, 4, amps).expect("81 amplitudes")
}

/// Real phase pattern `e^{iφ_k}`, `φ_k ∈ {0, π}` given as sign bits, on `n`
/// qubits.
pub fn phase_state(n: usize, pi_phases: &[bool]) -> Result<DenseState> {
    let amps = pi_phases
        .iter()
        .map(|&neg| if neg { -C1 } else { C1 })
        .collect();
    DenseState::qubits(n, amps)
}

/// The printed 32-entry phase list of the five-qubit state, with its empty
/// field removed.
pub const PSI5_PI_PHASES: [u8; 32] = [
    0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;
    use std::collections::HashSet;

    fn set(v: Vec<PauliString>) -> HashSet<PauliString> {
        v.into_iter().collect()
    }

    #[test]
    fn canonical_phase_and_norm() {
        let s = DenseState::qubits(1, vec![Complex64::new(0.0, 3.0), Complex64::new(4.0, 0.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < NORM_TOL);
        assert!((s.amplitudes()[0] - Complex64::new(0.6, 0.0)).norm() < NORM_TOL);
        assert!(DenseState::qubits(1, vec![C0, C0]).is_err());
        assert!(DenseState::qubits(2, vec![C1]).is_err());
        assert_eq!(
            DenseState::new(5, 1, vec![C1; 5]),
            Err(Error::UnsupportedDimension(5))
        );
    }

    #[test]
    fn product_state_stabilizers() {
        let s = state_from_tableau(&states::product_00()).unwrap();
        assert!((s.amplitudes()[0] - C1).norm() < TOL);
        let got = set(brute_force_stabilizers(&s).unwrap());
        let want = set(["+II", "+ZI", "+IZ", "+ZZ"].iter().map(|p| PauliString::parse(p).unwrap()).collect());
        assert_eq!(got, want);
        assert!(!uniformity_check(&s, 1).unwrap());
    }

    #[test]
    fn pair_graph_state() {
        let t = Tableau::from_graph(&states::pair_graph());
        let s = state_from_tableau(&t).unwrap();
        let xz = PauliString::parse("+XZ").unwrap();
        assert!((s.pauli_expectation(&xz).unwrap() - C1).norm() < TOL);
        let yy = PauliString::parse("+YY").unwrap();
        assert!((s.pauli_expectation(&yy).unwrap() - C1).norm() < TOL);
    }

    #[test]
    fn ring_stabilizers_hold() {
        let s = state_from_tableau(&states::ring5_tableau()).unwrap();
        for i in 0..5 {
            let mut p = PauliString::identity(5);
            p.set_letter((i + 4) % 5, crate::Letter::Z);
            p.set_letter(i, crate::Letter::X);
            p.set_letter((i + 1) % 5, crate::Letter::Z);
            assert!((s.pauli_expectation(&p).unwrap() - C1).norm() < TOL, "{p}");
        }
    }

    #[test]
    fn psi5_recovers_listed_correlations() {
        let s = state_from_tableau(&states::psi5_tableau()).unwrap();
        let group = set(brute_force_stabilizers(&s).unwrap());
        assert_eq!(group.len(), 32);
        for (_, p) in states::psi5_correlation_table() {
            assert!(group.contains(&p), "{p}");
        }
        assert!(group.contains(&PauliString::parse("+ZZYYZ").unwrap()));
        assert!(!group.contains(&PauliString::parse("-IYYYI").unwrap()));
        assert!(!group.contains(&PauliString::parse("+IYYYI").unwrap()));
        assert!(uniformity_check(&s, 2).unwrap());
        assert!(!uniformity_check(&s, 3).is_ok_and(|v| v));
    }

    #[test]
    fn printed_phase_list_gives_the_same_state() {
        let bits: Vec<bool> = PSI5_PI_PHASES.iter().map(|&b| b == 1).collect();
        let listed = phase_state(5, &bits).unwrap();
        let tab = state_from_tableau(&states::psi5_tableau()).unwrap();
        assert!((listed.overlap(&tab).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn local_word_maps_psi5_onto_the_ring() {
        let psi5 = state_from_tableau(&states::psi5_tableau()).unwrap();
        let ring = state_from_tableau(&states::ring5_tableau()).unwrap();
        let u = LocalWord::parse("X1 F1 G2 F3 H3 Z4 H4").unwrap();
        assert!((verify_lu_map(&psi5, &u, &ring).unwrap() - 1.0).abs() < TOL);
        let id = LocalWord::parse("").unwrap();
        assert!((verify_lu_map(&psi5, &id, &psi5).unwrap() - 1.0).abs() < TOL);
        assert!(LocalWord::parse("Q1").is_err());
        assert!(LocalWord::parse("X0").is_err());
    }

    #[test]
    fn orthogonal_states_have_zero_overlap() {
        let zero = state_from_tableau(&states::product_00()).unwrap();
        let one = DenseState::qubits(2, vec![C0, C0, C0, C1]).unwrap();
        let id = LocalWord::parse("I1").unwrap();
        assert!(verify_lu_map(&zero, &id, &one).unwrap() < TOL);
    }

    #[test]
    fn ghz_pair_correlations() {
        let s = state_from_tableau(&states::ghz_tableau(4)).unwrap();
        for (i, j) in (0..4).tuple_combinations() {
            let p = PauliString::from_sparse(4, &[(i, crate::Letter::Z), (j, crate::Letter::Z)]).unwrap();
            assert!((s.pauli_expectation(&p).unwrap() - C1).norm() < TOL);
        }
    }

    #[test]
    fn reduced_states() {
        let s = state_from_tableau(&states::bell_tableau()).unwrap();
        let rho = s.reduced_density_matrix(&[0]).unwrap();
        assert!((rho[0][0].re - 0.5).abs() < TOL && rho[0][1].norm() < TOL);
        let full = s.reduced_density_matrix(&[0, 1]).unwrap();
        let tr: f64 = (0..4).map(|i| full[i][i].re).sum();
        assert!((tr - 1.0).abs() < TOL);
        assert!(s.reduced_density_matrix(&[0, 0]).is_err());
        assert!(s.reduced_density_matrix(&[2]).is_err());
        assert!(s.reductions_maximally_mixed(1).unwrap());
        assert!(s.reductions_maximally_mixed(2).is_err());
    }

    #[test]
    fn uniformity_matches_reductions() {
        for t in [
            states::ring5_tableau(),
            states::psi5_tableau(),
            Tableau::from_graph(&states::l4_graph()),
            states::fig6_tableau(),
        ] {
            if t.n() > 6 {
                continue;
            }
            let s = state_from_tableau(&t).unwrap();
            let r = t.n() / 2;
            assert_eq!(uniformity_check(&s, r).unwrap(), s.reductions_maximally_mixed(r).unwrap());
            assert_eq!(uniformity_check(&s, r).unwrap(), t.is_ame());
        }
        let s = state_from_tableau(&states::ring5_tableau()).unwrap();
        assert!(uniformity_check(&s, 3).is_err());
    }

    #[test]
    fn qutrit_mds_state_is_ame() {
        let s = mds_ame_4_3();
        assert!((s.norm() - 1.0).abs() < NORM_TOL);
        assert!(s.reductions_maximally_mixed(2).unwrap());
        let stab = brute_force_qudit_stabilizers(&s).unwrap();
        assert_eq!(stab.len(), 81);
        let t = crate::qudit::ame_4_3();
        let engine: HashSet<QuditPauli> = t.elements().into_iter().collect();
        assert_eq!(stab.into_iter().collect::<HashSet<_>>(), engine);
        let rebuilt = state_from_qudit_tableau(&t).unwrap();
        assert!((rebuilt.overlap(&s).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn qubit_and_qudit_application_agree() {
        let s = state_from_tableau(&states::ring5_tableau()).unwrap();
        let p = PauliString::parse("-YXZIY").unwrap();
        let a = s.apply_pauli(&p).unwrap();
        let b = apply_qudit(s.amplitudes(), 5, &QuditPauli::from_qubit(&p));
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < TOL));
    }
}
