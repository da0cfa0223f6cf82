//! Pauli measurements on a stabilizer state with a destabilizer frame.

use rand::Rng;

use super::Tableau;
use crate::error::{Error, Result};
use crate::gf2;
use crate::pauli::{bits_of, Letter, PauliString};

/// Single-qubit measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn letter(self) -> Letter {
        match self {
            Basis::X => Letter::X,
            Basis::Y => Letter::Y,
            Basis::Z => Letter::Z,
        }
    }

    pub fn from_letter(l: Letter) -> Option<Basis> {
        match l {
            Letter::X => Some(Basis::X),
            Letter::Y => Some(Basis::Y),
            Letter::Z => Some(Basis::Z),
            Letter::I => None,
        }
    }

    pub fn as_char(self) -> char {
        self.letter().as_char()
    }
}

/// Measurement result `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    /// `0` for `+1`, `1` for `−1`.
    pub fn bit(self) -> u8 {
        (self == Outcome::Minus) as u8
    }

    pub fn from_bit(b: bool) -> Outcome {
        if b {
            Outcome::Minus
        } else {
            Outcome::Plus
        }
    }
}

/// Stabilizer generators with a matching destabilizer for each.
///
/// Destabilizer `d_i` anticommutes with stabilizer `s_i` and commutes with
/// every other stabilizer and destabilizer. Destabilizer signs carry no
/// meaning and are kept at `+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerFrame {
    stabilizers: Vec<PauliString>,
    destabilizers: Vec<PauliString>,
}

fn unsigned(p: &PauliString) -> PauliString {
    PauliString::from_parts(p.num_qubits(), p.x_bits(), p.z_bits(), 0).expect("same shape")
}

impl StabilizerFrame {
    pub fn new(t: &Tableau) -> StabilizerFrame {
        let n = t.n();
        let stabilizers = t.generators().to_vec();
        // d·s_j' is the symplectic product when s_j' has x and z swapped
        let swapped: Vec<u128> = stabilizers
            .iter()
            .map(|s| s.z_bits() as u128 | ((s.x_bits() as u128) << 64))
            .collect();
        let (rows, pivots) = gf2::rref(&swapped);
        debug_assert_eq!(rows.len(), n);
        let mut destabilizers: Vec<PauliString> = (0..n)
            .map(|i| {
                let v = rows
                    .iter()
                    .zip(&pivots)
                    .filter(|((_, combo), _)| combo >> i & 1 == 1)
                    .fold(0u128, |acc, (_, &p)| acc ^ (1u128 << p));
                PauliString::from_parts(n, v as u64, (v >> 64) as u64, 0).expect("n qubits")
            })
            .collect();
        for i in 0..n {
            for j in 0..i {
                if !destabilizers[i].commutes_with(&destabilizers[j]) {
                    destabilizers[i] = unsigned(&destabilizers[i].mul(&stabilizers[j]));
                }
            }
        }
        StabilizerFrame {
            stabilizers,
            destabilizers,
        }
    }

    pub fn n(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    /// Current stabilizer group as a tableau.
    pub fn tableau(&self) -> Tableau {
        Tableau::new(self.stabilizers.clone()).expect("frame stays a valid stabilizer state")
    }

    /// Measures a Hermitian Pauli observable. Returns the outcome and
    /// whether it was fixed by the state (as opposed to uniformly random).
    pub fn measure_in_place<R: Rng + ?Sized>(
        &mut self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<(Outcome, bool)> {
        if p.num_qubits() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: p.num_qubits(),
            });
        }
        if !p.is_hermitian() || p.is_trivial() {
            return Err(Error::InvalidArgument(format!(
                "cannot measure {p}: need a Hermitian non-identity Pauli"
            )));
        }
        let anti = self.stabilizers.iter().position(|s| !s.commutes_with(p));
        match anti {
            Some(k) => {
                let sk = self.stabilizers[k];
                for i in 0..self.n() {
                    if i != k && !self.stabilizers[i].commutes_with(p) {
                        self.stabilizers[i] = self.stabilizers[i].mul(&sk);
                    }
                    if i != k && !self.destabilizers[i].commutes_with(p) {
                        self.destabilizers[i] = unsigned(&self.destabilizers[i].mul(&sk));
                    }
                }
                self.destabilizers[k] = unsigned(&sk);
                let outcome = Outcome::from_bit(rng.gen::<bool>());
                let plus = p.with_sign(false);
                self.stabilizers[k] = plus.with_sign(outcome == Outcome::Minus);
                Ok((outcome, false))
            }
            None => {
                let mask: u64 = self
                    .destabilizers
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| !d.commutes_with(p))
                    .fold(0, |m, (i, _)| m | 1 << i);
                let prod = bits_of(mask)
                    .into_iter()
                    .fold(PauliString::identity(self.n()), |a, i| a.mul(&self.stabilizers[i]));
                debug_assert_eq!(prod.vector(), p.vector());
                let same = prod.sign_exp() == p.sign_exp();
                Ok((Outcome::from_bit(!same), true))
            }
        }
    }

    /// Functional form of [`Self::measure_in_place`].
    pub fn measure_pauli<R: Rng + ?Sized>(
        &self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<(Outcome, StabilizerFrame)> {
        let mut next = self.clone();
        let (o, _) = next.measure_in_place(p, rng)?;
        Ok((o, next))
    }

    pub fn measure_qubit_in_place<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(Outcome, bool)> {
        let p = PauliString::single(self.n(), qubit, basis.letter())?;
        self.measure_in_place(&p, rng)
    }

    pub fn measure_single_qubit<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(Outcome, StabilizerFrame)> {
        let mut next = self.clone();
        let (o, _) = next.measure_qubit_in_place(qubit, basis, rng)?;
        Ok((o, next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::states;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_frame(f: &StabilizerFrame) {
        let n = f.n();
        for i in 0..n {
            for j in 0..n {
                assert!(f.stabilizers[i].commutes_with(&f.stabilizers[j]));
                assert!(f.destabilizers[i].commutes_with(&f.destabilizers[j]));
                assert_eq!(f.destabilizers[i].commutes_with(&f.stabilizers[j]), i != j);
            }
        }
    }

    #[test]
    fn initial_frames_are_symplectic() {
        for t in [states::psi5_tableau(), states::ring5_tableau(), states::fig6_tableau()] {
            check_frame(&StabilizerFrame::new(&t));
        }
    }

    #[test]
    fn plus_state_in_z_basis_is_a_fair_coin() {
        let t = Tableau::from_graph(&Graph::new(1).unwrap());
        let f = StabilizerFrame::new(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ones: usize = (0..4000)
            .map(|_| f.measure_single_qubit(0, Basis::Z, &mut rng).unwrap().0.bit() as usize)
            .sum();
        assert!((1800..2200).contains(&ones), "{ones}");
        let (o, _) = f.measure_single_qubit(0, Basis::X, &mut rng).unwrap();
        assert_eq!(o, Outcome::Plus);
        assert!(f.measure_single_qubit(3, Basis::X, &mut rng).is_err());
    }

    #[test]
    fn bell_pair_outcomes_correlate() {
        let t = Tableau::from_graph(&Graph::path(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f = StabilizerFrame::new(&t);
            let (a, f) = f.measure_single_qubit(0, Basis::Z, &mut rng).unwrap();
            let (b, _) = f.measure_single_qubit(1, Basis::X, &mut rng).unwrap();
            assert_eq!(a.value() * b.value(), 1);
        }
    }

    #[test]
    fn zzyyz_parity_always_plus_one() {
        let t = states::psi5_tableau();
        let sigma: PauliString = "+ZZYYZ".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let mut f = StabilizerFrame::new(&t);
            let mut prod = 1;
            for q in 0..5 {
                let b = Basis::from_letter(sigma.letter(q)).unwrap();
                prod *= f.measure_qubit_in_place(q, b, &mut rng).unwrap().0.value();
            }
            assert_eq!(prod, 1);
        }
    }

    proptest! {
        #[test]
        fn frames_stay_valid_under_random_measurements(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut f = StabilizerFrame::new(&states::fig6_tableau());
            for _ in 0..20 {
                let q = rng.gen_range(0..f.n());
                let b = [Basis::X, Basis::Y, Basis::Z][rng.gen_range(0..3)];
                let p = PauliString::single(f.n(), q, b.letter()).unwrap();
                let (o, _) = f.measure_in_place(&p, &mut rng).unwrap();
                // repeating a measurement gives the same answer
                let (again, det) = f.measure_in_place(&p, &mut rng).unwrap();
                prop_assert!(det);
                prop_assert_eq!(o, again);
            }
            check_frame(&f);
            let _ = f.tableau();
        }
    }
}
