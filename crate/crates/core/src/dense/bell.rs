//! Bell expressions over dichotomic single-qubit observables.
//!
//! File format, one record per line (`#` starts a comment):
//!
//! ```text
//! obs B 1 0 0
//! term 1 1:A 2:B
//! term -1 1:Ap 2:Z
//! ```
//!
//! `obs <label> <a_x> <a_y> <a_z>` defines `a_x X + a_y Y + a_z Z`; parties
//! in `term` lines are 1-based. Built-in labels are `X Y Z F G H A Ap`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use super::{apply_single, bloch_matrix, dot, DenseState};
use crate::error::{parse_err, Error, Result};

const MAX_CLASSICAL_VARIABLES: usize = 24;

fn builtin() -> BTreeMap<String, [f64; 3]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        ("X", [1.0, 0.0, 0.0]),
        ("Y", [0.0, 1.0, 0.0]),
        ("Z", [0.0, 0.0, 1.0]),
        ("F", [h, h, 0.0]),
        ("G", [0.0, h, h]),
        ("H", [h, 0.0, h]),
        ("A", [h, 0.0, h]),
        ("Ap", [h, 0.0, -h]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    /// 0-based.
    pub party: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BellExpression {
    terms: Vec<Term>,
    dictionary: BTreeMap<String, [f64; 3]>,
}

impl BellExpression {
    /// Validates that every label resolves to a unit Bloch vector, that
    /// coefficients are finite and that no term names a party twice.
    pub fn new(terms: Vec<Term>, extra: BTreeMap<String, [f64; 3]>) -> Result<Self> {
        let mut dictionary = builtin();
        for (label, a) in extra {
            check_bloch(&label, a)?;
            dictionary.insert(label, a);
        }
        for t in &terms {
            if !t.coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("coefficient {} is not finite", t.coeff)));
            }
            if let Some(f) = t.factors.iter().find(|f| !dictionary.contains_key(&f.label)) {
                return Err(Error::InvalidArgument(format!("unknown observable {:?}", f.label)));
            }
            if !t.factors.iter().map(|f| f.party).all_unique() {
                return Err(Error::InvalidArgument("a term names the same party twice".into()));
            }
        }
        Ok(BellExpression { terms, dictionary })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn observable(&self, label: &str) -> Option<[f64; 3]> {
        self.dictionary.get(label).copied()
    }

    /// Distinct `(party, label)` pairs, sorted.
    pub fn variables(&self) -> Vec<Factor> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn parties(&self) -> usize {
        self.variables().iter().map(|f| f.party + 1).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<BellExpression> {
        let mut terms = Vec::new();
        let mut extra = BTreeMap::new();
        let mut term_lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "obs" => {
                    let [_, label, ax, ay, az] = tokens[..] else {
                        return Err(parse_err(no, "expected \"obs <label> <a_x> <a_y> <a_z>\""));
                    };
                    let num = |s: &str| -> Result<f64> {
                        s.parse().map_err(|_| parse_err(no, format!("bad number {s:?}")))
                    };
                    let a = [num(ax)?, num(ay)?, num(az)?];
                    check_bloch(label, a).map_err(|e| parse_err(no, e.to_string()))?;
                    extra.insert(label.to_string(), a);
                }
                "term" => {
                    let coeff: f64 = tokens
                        .get(1)
                        .ok_or_else(|| parse_err(no, "term needs a coefficient"))?
                        .parse()
                        .map_err(|_| parse_err(no, format!("bad coefficient {:?}", tokens[1])))?;
                    if !coeff.is_finite() {
                        return Err(parse_err(no, "coefficient is not finite"));
                    }
                    let mut factors = Vec::new();
                    for tok in &tokens[2..] {
                        let (p, label) = tok
                            .split_once(':')
                            .ok_or_else(|| parse_err(no, format!("expected \"<party>:<label>\", got {tok:?}")))?;
                        let party: usize = p
                            .parse()
                            .ok()
                            .filter(|&p| p >= 1)
                            .ok_or_else(|| parse_err(no, format!("bad party {p:?}")))?;
                        factors.push(Factor {
                            party: party - 1,
                            label: label.to_string(),
                        });
                    }
                    if factors.is_empty() {
                        return Err(parse_err(no, "term has no observables"));
                    }
                    term_lines.push(no);
                    terms.push(Term { coeff, factors });
                }
                other => return Err(parse_err(no, format!("unknown record {other:?}"))),
            }
        }
        if terms.is_empty() {
            return Err(parse_err(0, "no terms"));
        }
        // labels resolve only once every obs line is known
        for (t, &no) in terms.iter().zip(&term_lines) {
            for f in &t.factors {
                if !builtin().contains_key(&f.label) && !extra.contains_key(&f.label) {
                    return Err(parse_err(no, format!("unknown observable {:?}", f.label)));
                }
            }
            if !t.factors.iter().map(|f| f.party).all_unique() {
                return Err(parse_err(no, "term names the same party twice"));
            }
        }
        BellExpression::new(terms, extra)
    }
}

impl fmt::Display for BellExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let builtins = builtin();
        for (label, a) in &self.dictionary {
            if builtins.get(label) != Some(a) {
                writeln!(f, "obs {label} {} {} {}", a[0], a[1], a[2])?;
            }
        }
        for t in &self.terms {
            write!(f, "term {}", t.coeff)?;
            for x in &t.factors {
                write!(f, " {}:{}", x.party + 1, x.label)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check_bloch(label: &str, a: [f64; 3]) -> Result<()> {
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "observable {label:?} has Bloch norm {norm}, dichotomic observables need 1"
        )));
    }
    Ok(())
}

fn term_value(s: &DenseState, factors: &[(usize, [f64; 3])]) -> f64 {
    let v = factors.iter().fold(s.amplitudes().to_vec(), |v, (q, a)| {
        apply_single(&v, s.sites(), *q, &bloch_matrix(*a))
    });
    dot(s.amplitudes(), &v).re
}

fn check_parties(s: &DenseState, e: &BellExpression) -> Result<()> {
    s.require_qubits()?;
    if e.parties() > s.sites() {
        return Err(Error::IndexOutOfRange {
            index: e.parties() - 1,
            size: s.sites(),
        });
    }
    Ok(())
}

/// `⟨s|Σ c_t ⊗ O|s⟩` by exact dense contraction.
pub fn expectation(s: &DenseState, e: &BellExpression) -> Result<f64> {
    check_parties(s, e)?;
    Ok(e
        .terms
        .iter()
        .map(|t| {
            let fs: Vec<(usize, [f64; 3])> = t
                .factors
                .iter()
                .map(|f| (f.party, e.dictionary[&f.label]))
                .collect();
            t.coeff * term_value(s, &fs)
        })
        .sum())
}

/// Maximum of `|value|` over all `±1` assignments to the distinct
/// `(party, label)` variables.
pub fn classical_bound(e: &BellExpression) -> Result<f64> {
    let vars = e.variables();
    if vars.len() > MAX_CLASSICAL_VARIABLES {
        return Err(Error::TooLarge {
            requested: vars.len(),
            max: MAX_CLASSICAL_VARIABLES,
        });
    }
    let index: BTreeMap<&Factor, usize> = vars.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let terms: Vec<(f64, u32)> = e
        .terms
        .iter()
        .map(|t| (t.coeff, t.factors.iter().fold(0u32, |m, f| m | 1 << index[f])))
        .collect();
    let mut best = 0f64;
    for assign in 0u32..1 << vars.len() {
        // bit set = value −1
        let v: f64 = terms
            .iter()
            .map(|&(c, m)| if (assign & m).count_ones() % 2 == 1 { -c } else { c })
            .sum();
        best = best.max(v.abs());
    }
    Ok(best)
}

/// Best value found over observables `cos θ X + sin θ Z` per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    pub value: f64,
    /// Angle of each variable, in units of `π / (steps / 2)`.
    pub assignment: Vec<(Factor, usize)>,
    pub steps: usize,
}

impl GridResult {
    pub fn angle(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.steps as f64
    }
}

impl fmt::Display for GridResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid {:.12}", self.value)?;
        for (x, k) in &self.assignment {
            let th = self.angle(*k);
            writeln!(
                f,
                "assign {}:{} theta {}/{} obs {:.12} 0 {:.12}",
                x.party + 1,
                x.label,
                2 * k,
                self.steps,
                th.cos(),
                th.sin()
            )?;
        }
        Ok(())
    }
}

/// Coordinate ascent over `steps` equally spaced X-Z plane angles per
/// variable, from `restarts` deterministic starting points.
pub fn grid_search(s: &DenseState, e: &BellExpression, steps: usize, restarts: usize) -> Result<GridResult> {
    check_parties(s, e)?;
    if steps == 0 || restarts == 0 {
        return Err(Error::InvalidArgument("grid needs at least one step and one start".into()));
    }
    let vars = e.variables();
    let index: BTreeMap<&Factor, usize> = vars.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let angle = |k: usize| 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
    let value = |ks: &[usize]| -> f64 {
        e.terms
            .iter()
            .map(|t| {
                let fs: Vec<(usize, [f64; 3])> = t
                    .factors
                    .iter()
                    .map(|f| {
                        let th = angle(ks[index[f]]);
                        (f.party, [th.cos(), 0.0, th.sin()])
                    })
                    .collect();
                t.coeff * term_value(s, &fs)
            })
            .sum()
    };
    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in 0..restarts {
        let mut ks: Vec<usize> = (0..vars.len()).map(|i| (start * 3 + i) % steps).collect();
        let mut cur = value(&ks);
        loop {
            let before = cur;
            for i in 0..vars.len() {
                for k in 0..steps {
                    let old = ks[i];
                    ks[i] = k;
                    let v = value(&ks);
                    if v > cur + 1e-12 {
                        cur = v;
                    } else {
                        ks[i] = old;
                    }
                }
            }
            if cur <= before + 1e-12 {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| cur > *b + 1e-12) {
            best = Some((cur, ks));
        }
    }
    let (value, ks) = best.expect("at least one start");
    Ok(GridResult {
        value,
        assignment: vars.into_iter().zip(ks).collect(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::state_from_tableau;
    use crate::states;
    use proptest::prelude::*;

    const IB: &str = "term 1 1:A 2:X\nterm 1 1:Ap 2:X\nterm 1 1:A 2:Z\nterm -1 1:Ap 2:Z\n";

    const IC: &str = "\
term 2 1:A 2:Z 5:Z
term 2 1:Ap 2:Z 5:Z
term 1 1:A 2:X 3:Z
term -1 1:Ap 2:X 3:Z
term 1 1:A 4:Z 5:X
term -1 1:Ap 4:Z 5:X
term 1 2:Z 3:X 4:Z
term 1 3:Z 4:X 5:Z
";

    fn bell_state() -> DenseState {
        state_from_tableau(&states::bell_tableau()).unwrap()
    }

    fn ring() -> DenseState {
        state_from_tableau(&states::ring5_tableau()).unwrap()
    }

    #[test]
    fn chsh_values() {
        let e = BellExpression::parse(IB).unwrap();
        let q = expectation(&bell_state(), &e).unwrap();
        assert!((q - 2.0 * 2f64.sqrt()).abs() < 1e-9, "{q}");
        assert_eq!(classical_bound(&e).unwrap(), 2.0);
    }

    #[test]
    fn ring_operator_values() {
        let e = BellExpression::parse(IC).unwrap();
        let q = expectation(&ring(), &e).unwrap();
        assert!((q - (2.0 + 4.0 * 2f64.sqrt())).abs() < 1e-9, "{q}");
        assert_eq!(classical_bound(&e).unwrap(), 6.0);
    }

    #[test]
    fn grid_search_attains_quantum_value() {
        let e = BellExpression::parse(IC).unwrap();
        let g = grid_search(&ring(), &e, 16, 4).unwrap();
        assert!((g.value - (2.0 + 4.0 * 2f64.sqrt())).abs() < 1e-9, "{g}");
        assert_eq!(g.assignment.len(), e.variables().len());
        let e = BellExpression::parse(IB).unwrap();
        let g = grid_search(&bell_state(), &e, 16, 1).unwrap();
        assert!((g.value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn single_term_bound() {
        let e = BellExpression::parse("term 1 1:A 2:B\nobs B 1 0 0\n").unwrap();
        assert_eq!(classical_bound(&e).unwrap(), 1.0);
        assert_eq!(e.parties(), 2);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("term 1 1:Q\n", 1),
            ("term 1 1:X\nobs B 1 1 0\n", 2),
            ("term x 1:X\n", 1),
            ("\nterm 1 0:X\n", 2),
            ("term 1 1:X 1:Z\n", 1),
            ("frob\n", 1),
            ("term 1\n", 1),
        ];
        for (text, line) in cases {
            match BellExpression::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn display_round_trips() {
        let e = BellExpression::parse("obs B 0.6 0 0.8\nterm 1.5 1:B 2:Z\n").unwrap();
        assert_eq!(BellExpression::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn too_many_parties_for_state() {
        let e = BellExpression::parse(IC).unwrap();
        assert!(expectation(&bell_state(), &e).is_err());
    }

    proptest! {
        #[test]
        fn classical_bound_is_invariant(perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(), rename in any::<bool>()) {
            let e = BellExpression::parse(IC).unwrap();
            let base = classical_bound(&e).unwrap();
            let terms: Vec<Term> = perm
                .iter()
                .map(|&i| {
                    let mut t = e.terms()[i].clone();
                    if rename {
                        for f in &mut t.factors {
                            f.label = format!("{}_r", f.label);
                        }
                    }
                    t
                })
                .collect();
            let extra = if rename {
                e.variables().iter().map(|f| (format!("{}_r", f.label), e.observable(&f.label).unwrap())).collect()
            } else {
                BTreeMap::new()
            };
            let shuffled = BellExpression::new(terms, extra).unwrap();
            prop_assert_eq!(classical_bound(&shuffled).unwrap(), base);
        }
    }
}
