//! Choosing and certifying stabilizer elements for key agreement.
//!
//! A key between communicants `i` and `j` uses a stabilizer element `σ`
//! whose support contains both. Every other qubit in the support is a
//! cooperator that measures its letter of `σ` and announces the outcome;
//! `i` and `j` measure theirs privately and the product of all outcomes is
//! the sign of `σ`.
//!
//! Security is decided on the *pattern subgroup* of `σ`: the group elements
//! that, on every qubit, carry either `I` or the letter of `σ` there. Every
//! such element is a fully announced-or-private correlation among the same
//! measurements, so it is exactly what a listener can exploit.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::pauli::{bits_of, PauliString};
use crate::stabilizer::{format_subset, to_graph_state, Membership, Tableau};

/// Security verdicts for one plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdicts {
    pub substring_secure: bool,
    pub outsider_leak: bool,
    /// Parties outside the plan who can compute the key from the public
    /// outcomes plus one measurement of their own.
    pub insider_leaks: Vec<usize>,
}

/// A communicant pair, its stabilizer element and the analysis of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPlan {
    pub i: usize,
    pub j: usize,
    pub sigma: PauliString,
    pub cooperators: Vec<usize>,
    pub verdicts: Verdicts,
}

/// Outsider and insider leak analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeakReport {
    pub outsider: bool,
    pub insiders: Vec<usize>,
}

fn check_pair(sigma: &PauliString, i: usize, j: usize) -> Result<()> {
    let n = sigma.num_qubits();
    for q in [i, j] {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, size: n });
        }
    }
    if i == j {
        return Err(Error::InvalidPlan(format!(
            "communicants must differ, got ({}, {})",
            i + 1,
            j + 1
        )));
    }
    let supp = sigma.support_mask();
    for q in [i, j] {
        if supp >> q & 1 == 0 {
            return Err(Error::InvalidPlan(format!(
                "{sigma} does not act on communicant {}",
                q + 1
            )));
        }
    }
    Ok(())
}

fn check_member(t: &Tableau, sigma: &PauliString) -> Result<()> {
    match t.membership(sigma)? {
        Membership::Member(_) => Ok(()),
        _ => Err(Error::NotAStabilizer(sigma.to_string())),
    }
}

fn has(p: &PauliString, q: usize) -> bool {
    p.support_mask() >> q & 1 == 1
}

/// No proper substring of `sigma` acting on `i` or `j` is a stabilizer
/// element, with either sign.
pub fn substring_secure(t: &Tableau, sigma: &PauliString, i: usize, j: usize) -> Result<bool> {
    check_pair(sigma, i, j)?;
    check_member(t, sigma)?;
    // A second independent pattern element splits the support into two
    // complementary substrings, one of which contains i.
    Ok(t.pattern_subgroup(sigma, 0).len() == 1)
}

/// Whether the public outcomes alone fix a key bit, and which outside
/// parties could fix it with one extra measurement.
pub fn leak_check(t: &Tableau, plan: &KeyPlan) -> Result<LeakReport> {
    check_pair(&plan.sigma, plan.i, plan.j)?;
    check_member(t, &plan.sigma)?;
    let (i, j) = (plan.i, plan.j);
    let split = |p: &PauliString| has(p, i) != has(p, j);

    let outsider = t.pattern_subgroup(&plan.sigma, 0).iter().any(split);

    let mut insiders = Vec::new();
    for k in (0..t.n()).filter(|&k| !has(&plan.sigma, k)) {
        let basis = t.pattern_subgroup(&plan.sigma, 1 << k);
        let Some(eta) = basis.iter().find(|p| split(p)).copied() else {
            continue;
        };
        // the elements splitting i from j form the coset eta + ker(split)
        let leaks = has(&eta, k)
            || basis.iter().any(|p| {
                let q = if split(p) { p.mul(&eta) } else { *p };
                has(&q, k)
            });
        if leaks {
            insiders.push(k);
        }
    }
    Ok(LeakReport { outsider, insiders })
}

impl KeyPlan {
    /// Builds and analyses the plan. `sigma` must be a group element, sign
    /// included.
    pub fn analyze(t: &Tableau, i: usize, j: usize, sigma: PauliString) -> Result<KeyPlan> {
        if sigma.num_qubits() != t.n() {
            return Err(Error::DimensionMismatch {
                expected: t.n(),
                found: sigma.num_qubits(),
            });
        }
        let substring_secure = substring_secure(t, &sigma, i, j)?;
        let cooperators = sigma
            .support()
            .into_iter()
            .filter(|&q| q != i && q != j)
            .collect();
        let mut plan = KeyPlan {
            i,
            j,
            sigma,
            cooperators,
            verdicts: Verdicts {
                substring_secure,
                outsider_leak: false,
                insider_leaks: Vec::new(),
            },
        };
        let leaks = leak_check(t, &plan)?;
        plan.verdicts.outsider_leak = leaks.outsider;
        plan.verdicts.insider_leaks = leaks.insiders;
        Ok(plan)
    }

    /// Substring-secure and free of outsider leaks. Insider leaks are
    /// reported but do not make a plan insecure.
    pub fn is_secure(&self) -> bool {
        self.verdicts.substring_secure && !self.verdicts.outsider_leak
    }

    /// `1` when `sigma` carries a minus sign.
    pub fn sign_bit(&self) -> u8 {
        self.sigma.is_negative() as u8
    }

    /// Every qubit the plan measures.
    pub fn support(&self) -> Vec<usize> {
        self.sigma.support()
    }

    pub fn key_qubits(&self) -> [usize; 2] {
        [self.i, self.j]
    }

    /// The plan file line for this plan.
    pub fn plan_line(&self) -> String {
        format!("pair {} {} sigma {}", self.i + 1, self.j + 1, self.sigma)
    }
}

fn format_set(s: &[usize]) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        format_subset(s)
    }
}

impl fmt::Display for KeyPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} cooperators {} substring_secure {} outsider_leak {} insiders {}",
            self.plan_line(),
            format_set(&self.cooperators),
            self.verdicts.substring_secure,
            self.verdicts.outsider_leak,
            format_set(&self.verdicts.insider_leaks)
        )
    }
}

fn path_checked(g: &Graph, i: usize, j: usize) -> Result<Vec<usize>> {
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "communicants must differ, got ({}, {})",
            i + 1,
            j + 1
        )));
    }
    g.shortest_path(i, j)
}

fn product_over(g: &Graph, vertices: impl IntoIterator<Item = usize>) -> PauliString {
    let mask = vertices.into_iter().fold(0u64, |m, v| m | 1 << v);
    Tableau::from_graph(g).product(mask)
}

/// Product of the generators at positions 1, 3, 5, … of the shortest path
/// from `i` to `j`, counting from 1 at `i`.
pub fn path_stabilizer(g: &Graph, i: usize, j: usize) -> Result<PauliString> {
    let p = path_checked(g, i, j)?;
    Ok(product_over(g, p.into_iter().step_by(2)))
}

/// Product of the generators at positions 2, 4, 6, … of the shortest path.
pub fn even_path_stabilizer(g: &Graph, i: usize, j: usize) -> Result<PauliString> {
    let p = path_checked(g, i, j)?;
    Ok(product_over(g, p.into_iter().skip(1).step_by(2)))
}

/// Product of the generators at every vertex of the shortest path.
pub fn full_path_stabilizer(g: &Graph, i: usize, j: usize) -> Result<PauliString> {
    let p = path_checked(g, i, j)?;
    Ok(product_over(g, p))
}

/// Table entry for one pair: the lighter of the odd- and even-position
/// path products among those that are secure, odd on ties.
pub fn table_plan(g: &Graph, i: usize, j: usize) -> Result<KeyPlan> {
    let t = Tableau::from_graph(g);
    let odd = KeyPlan::analyze(&t, i, j, path_stabilizer(g, i, j)?)?;
    let even = KeyPlan::analyze(&t, i, j, even_path_stabilizer(g, i, j)?)?;
    [odd, even]
        .into_iter()
        .filter(KeyPlan::is_secure)
        .min_by_key(|p| p.sigma.weight())
        .ok_or_else(|| Error::InsecurePlan {
            i: i + 1,
            j: j + 1,
            reason: "no path product is secure".into(),
        })
}

/// One plan per unordered pair within each connected component, ordered
/// lexicographically by pair.
pub fn pair_table(g: &Graph) -> Result<Vec<KeyPlan>> {
    let mut out = Vec::new();
    for comp in g.components() {
        for (&i, &j) in comp.iter().tuple_combinations() {
            out.push(table_plan(g, i, j)?);
        }
    }
    out.sort_by_key(|p| (p.i, p.j));
    Ok(out)
}

/// Whether any secure key between `i` and `j` can exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

/// `i` and `j` are connected in a graph locally equivalent to the state.
pub fn separability_gate(t: &Tableau, i: usize, j: usize) -> Result<Feasibility> {
    let form = to_graph_state(t);
    Ok(if form.graph.connected(i, j)? {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible
    })
}

/// How a set of plans is meant to combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One common key among all communicants.
    Conference,
    /// Independent keys for disjoint groups of communicants.
    Parallel,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "conference" => Ok(Mode::Conference),
            "parallel" => Ok(Mode::Parallel),
            other => Err(Error::InvalidArgument(format!(
                "mode must be conference or parallel, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// A key qubit of one plan is a cooperator of another.
    C1,
    /// Two plans ask one qubit for different letters.
    C2,
    /// The communicant graph is not connected (conference) or not split
    /// (parallel).
    Connectivity,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::C1 => "C1",
            Constraint::C2 => "C2",
            Constraint::Connectivity => "CONNECTIVITY",
        })
    }
}

/// One failed constraint. Plan indices and qubits are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub constraint: Constraint,
    pub plans: Vec<usize>,
    pub qubits: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VIOLATION {} plans {} qubits {}: {}",
            self.constraint,
            format_set(&self.plans),
            format_set(&self.qubits),
            self.detail
        )
    }
}

/// A validated set of plans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPlan {
    pub mode: Mode,
    pub plans: Vec<KeyPlan>,
    /// Communicants grouped by connectivity of the pair graph; a single
    /// group in conference mode.
    pub groups: Vec<Vec<usize>>,
    /// Secure plans obtained as products of two plans sharing a communicant.
    pub derived: Vec<KeyPlan>,
}

impl MultiPlan {
    /// The single Pauli each measured qubit uses.
    pub fn measurement_pattern(&self) -> PauliString {
        let n = self.plans[0].sigma.num_qubits();
        let mut p = PauliString::identity(n);
        for plan in &self.plans {
            for q in plan.support() {
                p.set_letter(q, plan.sigma.letter(q));
            }
        }
        p
    }

    /// Qubits that announce outcomes: every measured qubit that is not a
    /// communicant of any plan.
    pub fn public_qubits(&self) -> Vec<usize> {
        let keys: BTreeSet<usize> = self.plans.iter().flat_map(|p| p.key_qubits()).collect();
        self.measurement_pattern()
            .support()
            .into_iter()
            .filter(|q| !keys.contains(q))
            .collect()
    }
}

/// Outcome of [`validate_multi`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultiOutcome {
    Valid(MultiPlan),
    Invalid(Vec<Violation>),
}

/// Checks that the plans can run on one shared copy of the state.
pub fn validate_multi(t: &Tableau, plans: &[KeyPlan], mode: Mode) -> Result<MultiOutcome> {
    if plans.is_empty() {
        return Err(Error::InvalidPlan("no plans given".into()));
    }
    for p in plans {
        if p.sigma.num_qubits() != t.n() {
            return Err(Error::DimensionMismatch {
                expected: t.n(),
                found: p.sigma.num_qubits(),
            });
        }
        check_member(t, &p.sigma)?;
        if !p.is_secure() {
            return Err(Error::InsecurePlan {
                i: p.i + 1,
                j: p.j + 1,
                reason: "plan fails the substring or outsider check".into(),
            });
        }
    }
    let mut violations = Vec::new();
    for (a, b) in (0..plans.len()).tuple_combinations() {
        for (x, y) in [(a, b), (b, a)] {
            for q in plans[x].key_qubits() {
                if plans[y].cooperators.contains(&q) {
                    violations.push(Violation {
                        constraint: Constraint::C1,
                        plans: vec![x, y],
                        qubits: vec![q],
                        detail: format!(
                            "key qubit {} of plan {} is a cooperator of plan {}",
                            q + 1,
                            x + 1,
                            y + 1
                        ),
                    });
                }
            }
        }
        let overlap = plans[a].sigma.support_mask() & plans[b].sigma.support_mask();
        let clash: Vec<usize> = bits_of(overlap)
            .into_iter()
            .filter(|&q| plans[a].sigma.letter(q) != plans[b].sigma.letter(q))
            .collect();
        if !clash.is_empty() {
            let detail = clash
                .iter()
                .map(|&q| {
                    format!(
                        "qubit {} measured {} and {}",
                        q + 1,
                        plans[a].sigma.letter(q),
                        plans[b].sigma.letter(q)
                    )
                })
                .join(", ");
            violations.push(Violation {
                constraint: Constraint::C2,
                plans: vec![a, b],
                qubits: clash,
                detail,
            });
        }
    }

    let keys: BTreeSet<usize> = plans.iter().flat_map(|p| p.key_qubits()).collect();
    let mut pair_graph = Graph::new(t.n())?;
    for p in plans {
        pair_graph.add_edge(p.i, p.j)?;
    }
    let groups: Vec<Vec<usize>> = pair_graph
        .components()
        .into_iter()
        .filter(|c| c.iter().any(|q| keys.contains(q)))
        .collect();
    match mode {
        Mode::Conference if groups.len() != 1 => violations.push(Violation {
            constraint: Constraint::Connectivity,
            plans: (0..plans.len()).collect(),
            qubits: keys.iter().copied().collect(),
            detail: format!(
                "communicant pairs form {} groups, a conference needs one",
                groups.len()
            ),
        }),
        Mode::Parallel if groups.len() < 2 => violations.push(Violation {
            constraint: Constraint::Connectivity,
            plans: (0..plans.len()).collect(),
            qubits: keys.iter().copied().collect(),
            detail: "communicant pairs are connected, parallel keys need independent groups".into(),
        }),
        _ => {}
    }
    if !violations.is_empty() {
        return Ok(MultiOutcome::Invalid(violations));
    }

    let mut derived = Vec::new();
    let listed: BTreeSet<(usize, usize)> = plans.iter().map(|p| (p.i.min(p.j), p.i.max(p.j))).collect();
    for (a, b) in plans.iter().tuple_combinations() {
        let shared: Vec<usize> = a
            .key_qubits()
            .into_iter()
            .filter(|q| b.key_qubits().contains(q))
            .collect();
        if shared.len() != 1 {
            continue;
        }
        let other = |p: &KeyPlan| if p.i == shared[0] { p.j } else { p.i };
        let (j, k) = (other(a), other(b));
        let pair = (j.min(k), j.max(k));
        if listed.contains(&pair) || derived.iter().any(|d: &KeyPlan| (d.i, d.j) == pair) {
            continue;
        }
        let sigma = a.sigma.mul(&b.sigma);
        if sigma.support_mask() >> j & 1 == 0 || sigma.support_mask() >> k & 1 == 0 {
            continue;
        }
        let plan = KeyPlan::analyze(t, pair.0, pair.1, sigma)?;
        if plan.is_secure() {
            derived.push(plan);
        }
    }
    Ok(MultiOutcome::Valid(MultiPlan {
        mode,
        plans: plans.to_vec(),
        groups,
        derived,
    }))
}

/// A `pair i j sigma P` line before analysis. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanSpec {
    pub line: usize,
    pub i: usize,
    pub j: usize,
    pub sigma: PauliString,
}

/// Parses a plan file for an `n`-qubit state.
pub fn parse_plan_file(text: &str, n: usize) -> Result<Vec<PlanSpec>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        let ["pair", a, b, "sigma", p] = fields.as_slice() else {
            return Err(parse_err(line, format!("expected \"pair <i> <j> sigma <pauli>\", got {l:?}")));
        };
        let vertex = |s: &str| -> Result<usize> {
            let v: usize = s
                .parse()
                .map_err(|_| parse_err(line, format!("bad party index {s:?}")))?;
            if v == 0 || v > n {
                return Err(parse_err(line, format!("party {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (vertex(a)?, vertex(b)?);
        if i == j {
            return Err(parse_err(line, format!("communicants must differ, got {a} {b}")));
        }
        let sigma = PauliString::parse_with_len(p, n).map_err(|e| match e {
            Error::Parse { message, .. } => parse_err(line, message),
            other => parse_err(line, other.to_string()),
        })?;
        out.push(PlanSpec { line, i, j, sigma });
    }
    Ok(out)
}

/// Parses and analyses every plan in a file.
pub fn load_plans(t: &Tableau, text: &str) -> Result<Vec<KeyPlan>> {
    parse_plan_file(text, t.n())?
        .into_iter()
        .map(|s| {
            KeyPlan::analyze(t, s.i, s.j, s.sigma).map_err(|e| parse_err(s.line, e.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn substring_examples() {
        let l4 = Tableau::from_graph(&states::l4_graph());
        assert!(!substring_secure(&l4, &p("XZZX"), 0, 3).unwrap());
        assert!(substring_secure(&l4, &p("XIXZ"), 0, 3).unwrap());
        let pair = Tableau::from_graph(&states::pair_graph());
        assert!(substring_secure(&pair, &p("XZ"), 0, 1).unwrap());
        assert!(matches!(
            substring_secure(&l4, &p("XXII"), 0, 1),
            Err(Error::NotAStabilizer(_))
        ));
        assert!(substring_secure(&l4, &p("XIXZ"), 0, 1).is_err());
        assert!(substring_secure(&l4, &p("XIXZ"), 0, 0).is_err());
    }

    #[test]
    fn fig6_insider_and_full_path() {
        let g = states::fig6_graph();
        let t = Tableau::from_graph(&g);
        let sigma = path_stabilizer(&g, 0, 10).unwrap();
        assert_eq!(sigma.to_sparse_string(), "X1Z2X6Z7Z8X10Z11");
        let plan = KeyPlan::analyze(&t, 0, 10, sigma).unwrap();
        assert!(plan.is_secure());
        assert!(plan.verdicts.insider_leaks.contains(&8));
        let full = KeyPlan::analyze(&t, 0, 10, full_path_stabilizer(&g, 0, 10).unwrap()).unwrap();
        assert!(full.is_secure());
        assert_eq!(full.verdicts.insider_leaks, Vec::<usize>::new());
    }

    #[test]
    fn ring_s2_has_no_leaks() {
        let t = states::ring5_tableau();
        let plan = KeyPlan::analyze(&t, 0, 1, p("ZXZII")).unwrap();
        assert!(plan.is_secure());
        assert!(!plan.verdicts.outsider_leak);
        assert!(plan.verdicts.insider_leaks.is_empty());
        assert_eq!(plan.cooperators, vec![2]);
    }

    #[test]
    fn l4_full_product_leaks_to_outsiders() {
        let t = Tableau::from_graph(&states::l4_graph());
        let plan = KeyPlan::analyze(&t, 0, 3, p("XZZX")).unwrap();
        assert!(plan.verdicts.outsider_leak);
        assert!(!plan.is_secure());
    }

    #[test]
    fn path_products() {
        let chain = states::chain9_graph();
        let odd = path_stabilizer(&chain, 0, 8).unwrap();
        assert_eq!(odd.to_sparse_string(), "X1X3X5X7X9");
        let even = even_path_stabilizer(&chain, 0, 8).unwrap();
        assert_eq!(even.to_sparse_string(), "Z1X2X4X6X8Z9");
        let t = Tableau::from_graph(&chain);
        assert!(substring_secure(&t, &odd, 0, 8).unwrap());
        assert!(substring_secure(&t, &even, 0, 8).unwrap());
        let l4 = states::l4_graph();
        let full = full_path_stabilizer(&l4, 0, 3).unwrap();
        assert_eq!(full, Tableau::from_graph(&l4).product(0b1111));
        assert!(full.support().contains(&0) && full.support().contains(&3));
        let ring = states::ring5_graph();
        assert_eq!(path_stabilizer(&ring, 1, 2).unwrap(), Tableau::from_graph(&ring).generators()[1]);
        assert!(path_stabilizer(&ring, 1, 1).is_err());
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(path_stabilizer(&split, 0, 3), Err(Error::NoPath(1, 4))));
    }

    #[test]
    fn fig5_table_matches_listing() {
        let table = pair_table(&states::fig5_graph()).unwrap();
        let got: Vec<String> = table.iter().map(|p| p.sigma.to_sparse_string()).collect();
        assert_eq!(
            got,
            [
                "X1Z2", "X1X3", "X1X4Z5", "X1X4Z5", "Z2X3", "Z2X4Z5", "Z2X4Z5", "X3X4Z5",
                "X3X4Z5", "Z4X5"
            ]
        );
        assert!(table.iter().all(KeyPlan::is_secure));
    }

    #[test]
    fn ring_table_uses_three_qubit_generators() {
        let table = pair_table(&states::ring5_graph()).unwrap();
        assert_eq!(table.len(), 10);
        let p13 = table.iter().find(|p| (p.i, p.j) == (0, 2)).unwrap();
        assert_eq!(p13.sigma, p("ZXZII"));
        assert!(table.iter().all(|p| p.sigma.weight() == 3));
    }

    #[test]
    fn separability() {
        let l4 = Tableau::from_graph(&states::l4_graph());
        let two = l4.tensor(&l4).unwrap();
        assert_eq!(separability_gate(&two, 0, 4).unwrap(), Feasibility::Infeasible);
        assert_eq!(separability_gate(&two, 0, 3).unwrap(), Feasibility::Feasible);
        assert_eq!(separability_gate(&l4, 0, 3).unwrap(), Feasibility::Feasible);
        let ring = states::ring5_tableau();
        for (i, j) in (0..5).tuple_combinations() {
            assert_eq!(separability_gate(&ring, i, j).unwrap(), Feasibility::Feasible);
        }
    }

    fn plans(t: &Tableau, text: &str) -> Vec<KeyPlan> {
        load_plans(t, text).unwrap()
    }

    #[test]
    fn fig4a_conference_with_derived_pair() {
        let t = states::ring5_tableau();
        let ps = plans(&t, "pair 1 2 sigma +XZIIZ\npair 1 3 sigma +XIXZZ\n");
        let MultiOutcome::Valid(mp) = validate_multi(&t, &ps, Mode::Conference).unwrap() else {
            panic!("expected a valid conference");
        };
        assert_eq!(mp.groups, vec![vec![0, 1, 2]]);
        assert_eq!(mp.derived.len(), 1);
        assert_eq!((mp.derived[0].i, mp.derived[0].j), (1, 2));
        assert_eq!(mp.derived[0].sigma, p("IZXZI"));
        assert_eq!(mp.public_qubits(), vec![3, 4]);
    }

    #[test]
    fn fig8a_parallel() {
        let t = states::ring5_tableau();
        let ps = plans(&t, "pair 1 2 sigma +ZXZII\npair 4 5 sigma +IIZXZ\n");
        let MultiOutcome::Valid(mp) = validate_multi(&t, &ps, Mode::Parallel).unwrap() else {
            panic!("expected valid parallel keys");
        };
        assert_eq!(mp.groups, vec![vec![0, 1], vec![3, 4]]);
        assert!(matches!(
            validate_multi(&t, &ps, Mode::Conference).unwrap(),
            MultiOutcome::Invalid(v) if v[0].constraint == Constraint::Connectivity
        ));
    }

    #[test]
    fn fig7_chain_conference() {
        let t = Tableau::from_graph(&states::chain9_graph());
        let text = "pair 1 9 sigma +ZXIXIXIXZ\n\
                    pair 1 3 sigma +ZXZIIIIII\n\
                    pair 3 5 sigma +IIZXZIIII\n\
                    pair 5 7 sigma +IIIIZXZII\n\
                    pair 7 9 sigma +IIIIIIZXZ\n";
        let ps = plans(&t, text);
        let MultiOutcome::Valid(mp) = validate_multi(&t, &ps, Mode::Conference).unwrap() else {
            panic!("expected a valid conference");
        };
        assert_eq!(mp.groups, vec![vec![0, 2, 4, 6, 8]]);
    }

    #[test]
    fn constraint_violations_are_named() {
        let t = states::ring5_tableau();
        // (1,2) via S2 makes 3 a cooperator, (3,4) via S4 keys on 3 but
        // asks 3 for Z and 4 for X, while (1,2) needs nothing from 4
        let ps = plans(&t, "pair 1 2 sigma +ZXZII\npair 3 4 sigma +IIZXZ\n");
        let MultiOutcome::Invalid(v) = validate_multi(&t, &ps, Mode::Parallel).unwrap() else {
            panic!("expected violations");
        };
        assert_eq!(v[0].constraint, Constraint::C1);
        assert_eq!(v[0].qubits, vec![2]);
        assert!(v[0].to_string().starts_with("VIOLATION C1 plans 2,1 qubits 3: key qubit 3 of plan 2"));
        let ps = plans(&t, "pair 1 2 sigma +ZXZII\npair 1 5 sigma +XZIIZ\n");
        let MultiOutcome::Invalid(v) = validate_multi(&t, &ps, Mode::Conference).unwrap() else {
            panic!("expected violations");
        };
        assert!(v.iter().any(|x| x.constraint == Constraint::C2 && x.qubits == vec![0, 1]));
    }

    #[test]
    fn plan_file_errors_carry_lines() {
        let t = states::ring5_tableau();
        for (text, line) in [
            ("pair 1 2 sigma +ZXZII\npair 1 2 sigma +ZXZ\n", 2),
            ("# c\npair 1 6 sigma +ZXZII\n", 2),
            ("pair 1 1 sigma +ZXZII\n", 1),
            ("pairs 1 2\n", 1),
            ("pair 1 2 sigma +XXIII\n", 1),
        ] {
            match load_plans(&t, text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn plan_display() {
        let t = states::ring5_tableau();
        let plan = KeyPlan::analyze(&t, 0, 2, p("ZXZII")).unwrap();
        assert_eq!(
            plan.to_string(),
            "pair 1 3 sigma +ZXZII cooperators 2 substring_secure true outsider_leak false insiders -"
        );
    }
}
