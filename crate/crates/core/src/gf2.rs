//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are `u128` words; each inserted vector carries a `u64` mask
//! recording which input rows were combined to produce it, so callers can
//! recover explicit combinations (membership witnesses, kernel elements).

/// Echelon basis keyed by leading bit, with combination tracking.
#[derive(Clone, Debug)]
pub struct Basis {
    slots: Vec<Option<(u128, u64)>>,
    rank: usize,
}

impl Default for Basis {
    fn default() -> Self {
        Self::new()
    }
}

impl Basis {
    pub fn new() -> Self {
        Basis {
            slots: vec![None; 128],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis. Returns the residue and the combination
    /// of basis rows that was XORed in.
    pub fn reduce(&self, mut v: u128, mut combo: u64) -> (u128, u64) {
        while v != 0 {
            let top = 127 - v.leading_zeros() as usize;
            match self.slots[top] {
                Some((bv, bc)) => {
                    v ^= bv;
                    combo ^= bc;
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Inserts `v` tagged with `combo`. Returns `Some(c)` if `v` was dependent,
    /// where `c` is a nonzero combination summing to zero (a kernel element).
    pub fn insert(&mut self, v: u128, combo: u64) -> Option<u64> {
        let (r, c) = self.reduce(v, combo);
        if r == 0 {
            return Some(c);
        }
        let top = 127 - r.leading_zeros() as usize;
        self.slots[top] = Some((r, c));
        self.rank += 1;
        None
    }

    /// Combination of inserted rows equal to `v`, if `v` lies in the span.
    pub fn solve(&self, v: u128) -> Option<u64> {
        let (r, c) = self.reduce(v, 0);
        (r == 0).then_some(c)
    }
}

/// Rank of a set of vectors.
pub fn rank(rows: &[u128]) -> usize {
    let mut b = Basis::new();
    for &r in rows {
        b.insert(r, 0);
    }
    b.rank()
}

/// Basis of `{c : XOR_i c_i·rows[i] = 0}` as row-combination masks.
pub fn kernel(rows: &[u128]) -> Vec<u64> {
    assert!(rows.len() <= 64, "at most 64 rows");
    let mut b = Basis::new();
    rows.iter()
        .enumerate()
        .filter_map(|(i, &r)| b.insert(r, 1u64 << i))
        .collect()
}

/// Reduced row echelon form. Returns `(row, combination)` pairs for the
/// nonzero rows and their pivot bit positions (lowest set bit is the pivot).
pub fn rref(rows: &[u128]) -> (Vec<(u128, u64)>, Vec<usize>) {
    assert!(rows.len() <= 64, "at most 64 rows");
    let mut work: Vec<(u128, u64)> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, 1u64 << i))
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..128 {
        let bit = 1u128 << col;
        let Some(pos) = (next..work.len()).find(|&r| work[r].0 & bit != 0) else {
            continue;
        };
        work.swap(next, pos);
        let (pv, pc) = work[next];
        for (r, row) in work.iter_mut().enumerate() {
            if r != next && row.0 & bit != 0 {
                row.0 ^= pv;
                row.1 ^= pc;
            }
        }
        pivots.push(col);
        next += 1;
        if next == work.len() {
            break;
        }
    }
    work.truncate(next);
    (work, pivots)
}

#[inline]
pub fn parity(v: u128) -> bool {
    v.count_ones() & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_of_dependent_rows() {
        let rows = [0b011u128, 0b110, 0b101, 0b111];
        let k = kernel(&rows);
        assert_eq!(k.len(), 1);
        for c in k {
            let sum = (0..4).filter(|i| c >> i & 1 == 1).fold(0u128, |a, i| a ^ rows[i]);
            assert_eq!(sum, 0);
        }
        assert_eq!(rank(&rows), 3);
        assert_eq!(kernel(&[0b11, 0b11, 0b11]).len(), 2);
    }

    #[test]
    fn solve_reports_combination() {
        let rows = [1u128 << 100 | 1, 1 << 3];
        let mut b = Basis::new();
        for (i, &r) in rows.iter().enumerate() {
            assert!(b.insert(r, 1 << i).is_none());
        }
        assert_eq!(b.solve(1 << 100 | 1 | 1 << 3), Some(0b11));
        assert_eq!(b.solve(1 << 5), None);
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(rows in prop::collection::vec(any::<u128>().prop_map(|v| v & 0xff_ffff), 1..20)) {
            prop_assert_eq!(rank(&rows) + kernel(&rows).len(), rows.len());
            let (red, piv) = rref(&rows);
            prop_assert_eq!(red.len(), rank(&rows));
            for (k, &(r, c)) in red.iter().enumerate() {
                let sum = (0..rows.len()).filter(|i| c >> i & 1 == 1).fold(0u128, |a, i| a ^ rows[i]);
                prop_assert_eq!(sum, r);
                for (k2, &p) in piv.iter().enumerate() {
                    prop_assert_eq!(r >> p & 1 == 1, k == k2);
                }
            }
        }
    }
}
