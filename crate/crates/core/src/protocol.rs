//! Seeded simulation of key-agreement sessions over a shared stabilizer
//! state, and the die roll that splits copies between self-testing and key
//! generation.
//!
//! Transcript format, one record per line:
//!
//! ```text
//! SEED 7
//! INTENT 1 3
//! SIGMA +ZXZII
//! PUBLIC 2 X -1
//! ---PRIVATE---
//! KEY 1 0
//! KEY 3 0
//! ```
//!
//! `SIGMA` lines publish the agreed table entry of each intent; everything
//! above the `---PRIVATE---` marker is the public view.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::planner::{KeyPlan, Mode, MultiPlan};
use crate::stabilizer::{MeasurementBasis, Outcome, StabilizerFrame, Tableau};

/// Generator used for every seeded run.
pub type SessionRng = ChaCha8Rng;

pub fn session_rng(seed: u64) -> SessionRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An announced measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PublicRecord {
    pub party: usize,
    pub basis: MeasurementBasis,
    pub outcome: Outcome,
}

/// One party's view of a session. Party `k` holds qubit `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Party {
    pub id: usize,
    pub held_qubit: usize,
    pub local_outcomes: Vec<(MeasurementBasis, Outcome)>,
}

/// Everything announced during a session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicView {
    pub seed: u64,
    pub intents: Vec<(usize, usize)>,
    pub sigmas: Vec<PauliString>,
    pub public: Vec<PublicRecord>,
}

/// Public records plus the private measurements and key bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionTranscript {
    view: PublicView,
    private: Vec<PublicRecord>,
    keys: Vec<(usize, u8)>,
}

impl SessionTranscript {
    pub fn public_view(&self) -> &PublicView {
        &self.view
    }

    pub fn seed(&self) -> u64 {
        self.view.seed
    }

    /// Key bit derived by each communicant, in ascending party order.
    pub fn keys(&self) -> &[(usize, u8)] {
        &self.keys
    }

    pub fn key_of(&self, party: usize) -> Option<u8> {
        self.keys.iter().find(|(p, _)| *p == party).map(|&(_, b)| b)
    }

    /// Measurements kept private by communicants.
    pub fn private_outcomes(&self) -> &[PublicRecord] {
        &self.private
    }

    pub fn parties(&self) -> Vec<Party> {
        let mut by_party: BTreeMap<usize, Vec<(MeasurementBasis, Outcome)>> = BTreeMap::new();
        for r in self.view.public.iter().chain(&self.private) {
            by_party.entry(r.party).or_default().push((r.basis, r.outcome));
        }
        by_party
            .into_iter()
            .map(|(id, local_outcomes)| Party {
                id,
                held_qubit: id,
                local_outcomes,
            })
            .collect()
    }
}

fn outcome_text(o: Outcome) -> &'static str {
    match o {
        Outcome::Plus => "+1",
        Outcome::Minus => "-1",
    }
}

impl fmt::Display for PublicView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SEED {}", self.seed)?;
        for ((i, j), s) in self.intents.iter().zip(&self.sigmas) {
            writeln!(f, "INTENT {} {}", i + 1, j + 1)?;
            writeln!(f, "SIGMA {s}")?;
        }
        for r in &self.public {
            writeln!(
                f,
                "PUBLIC {} {} {}",
                r.party + 1,
                r.basis.as_char(),
                outcome_text(r.outcome)
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for SessionTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.view)?;
        writeln!(f, "---PRIVATE---")?;
        for (p, b) in &self.keys {
            writeln!(f, "KEY {} {b}", p + 1)?;
        }
        Ok(())
    }
}

/// Parity of announced bits on `qubits`, `None` if one is missing.
fn public_parity(public: &[PublicRecord], qubits: &[usize]) -> Option<u8> {
    qubits.iter().try_fold(0u8, |acc, q| {
        public
            .iter()
            .find(|r| r.party == *q)
            .map(|r| acc ^ r.outcome.bit())
    })
}

/// Measures each qubit of `order` in its letter of `pattern` on one copy.
fn measure_all(
    t: &Tableau,
    pattern: &PauliString,
    order: &[usize],
    rng: &mut SessionRng,
) -> Result<BTreeMap<usize, (MeasurementBasis, Outcome)>> {
    let mut frame = StabilizerFrame::new(t);
    let mut out = BTreeMap::new();
    for &q in order {
        let basis = MeasurementBasis::from_letter(pattern.letter(q))
            .ok_or_else(|| Error::InvalidArgument(format!("qubit {} is not measured", q + 1)))?;
        let (o, _) = frame.measure_qubit_in_place(q, basis, rng)?;
        out.insert(q, (basis, o));
    }
    Ok(out)
}

fn record(q: usize, m: (MeasurementBasis, Outcome)) -> PublicRecord {
    PublicRecord {
        party: q,
        basis: m.0,
        outcome: m.1,
    }
}

/// Key relation offset for a plan: `bit_i ⊕ bit_j` as computed from public
/// data.
fn plan_offset(plan: &KeyPlan, public: &[PublicRecord]) -> u8 {
    plan.sign_bit() ^ public_parity(public, &plan.cooperators).expect("cooperators announced")
}

fn default_order(plan: &KeyPlan) -> Vec<usize> {
    let mut order = plan.cooperators.clone();
    order.extend([plan.i, plan.j]);
    order
}

/// Runs one session: cooperators announce, then `i` and `j` measure
/// privately. The key is `i`'s outcome bit.
pub fn run_session(t: &Tableau, plan: &KeyPlan, seed: u64) -> Result<SessionTranscript> {
    if !plan.is_secure() {
        return Err(Error::InsecurePlan {
            i: plan.i + 1,
            j: plan.j + 1,
            reason: "plan fails the substring or outsider check".into(),
        });
    }
    run_session_unchecked(t, plan, seed)
}

/// [`run_session`] without the security gate, for demonstrating attacks.
pub fn run_session_unchecked(t: &Tableau, plan: &KeyPlan, seed: u64) -> Result<SessionTranscript> {
    run_session_ordered(t, plan, seed, &default_order(plan))
}

/// Session with an explicit measurement order over the plan's support.
pub fn run_session_ordered(
    t: &Tableau,
    plan: &KeyPlan,
    seed: u64,
    order: &[usize],
) -> Result<SessionTranscript> {
    if !t.membership(&plan.sigma)?.is_member() {
        return Err(Error::NotAStabilizer(plan.sigma.to_string()));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != plan.support() {
        return Err(Error::InvalidArgument(
            "measurement order must list the plan support exactly once".into(),
        ));
    }
    let mut rng = session_rng(seed);
    let outcomes = measure_all(t, &plan.sigma, order, &mut rng)?;
    let public: Vec<PublicRecord> = order
        .iter()
        .filter(|q| plan.cooperators.contains(q))
        .map(|&q| record(q, outcomes[&q]))
        .collect();
    let private = [plan.i, plan.j].map(|q| record(q, outcomes[&q])).to_vec();
    let bit_i = outcomes[&plan.i].1.bit();
    let bit_j = outcomes[&plan.j].1.bit();
    let key_j = bit_j ^ plan_offset(plan, &public);
    let mut keys = vec![(plan.i, bit_i), (plan.j, key_j)];
    keys.sort_unstable();
    Ok(SessionTranscript {
        view: PublicView {
            seed,
            intents: vec![(plan.i, plan.j)],
            sigmas: vec![plan.sigma],
            public,
        },
        private,
        keys,
    })
}

/// What a listener can conclude about the key from the public record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guess {
    Forced(u8),
    Undetermined,
}

impl fmt::Display for Guess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guess::Forced(b) => write!(f, "forced {b}"),
            Guess::Undetermined => f.write_str("undetermined"),
        }
    }
}

/// Looks for a stabilizer element among the announced and key letters that
/// contains exactly one key qubit; its parity then fixes that party's bit.
pub fn adversary_guess(view: &PublicView, t: &Tableau) -> Result<Guess> {
    let (Some(&(i, j)), Some(sigma)) = (view.intents.first(), view.sigmas.first()) else {
        return Err(Error::InvalidArgument("transcript has no intent".into()));
    };
    if sigma.num_qubits() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            found: sigma.num_qubits(),
        });
    }
    let has = |p: &PauliString, q: usize| p.support_mask() >> q & 1 == 1;
    let Some(tau) = t
        .pattern_subgroup(sigma, 0)
        .into_iter()
        .find(|p| has(p, i) != has(p, j))
    else {
        return Ok(Guess::Undetermined);
    };
    let k = if has(&tau, i) { i } else { j };
    let others: Vec<usize> = tau.support().into_iter().filter(|&q| q != k).collect();
    let Some(par) = public_parity(&view.public, &others) else {
        return Ok(Guess::Undetermined);
    };
    let bit_k = tau.is_negative() as u8 ^ par;
    if k == i {
        return Ok(Guess::Forced(bit_k));
    }
    let cooperators: Vec<usize> = sigma
        .support()
        .into_iter()
        .filter(|&q| q != i && q != j)
        .collect();
    match public_parity(&view.public, &cooperators) {
        Some(p) => Ok(Guess::Forced(bit_k ^ sigma.is_negative() as u8 ^ p)),
        None => Ok(Guess::Undetermined),
    }
}

/// Forced bit when available, otherwise a coin flip.
pub fn adversary_attack<R: Rng + ?Sized>(view: &PublicView, t: &Tableau, rng: &mut R) -> Result<u8> {
    Ok(match adversary_guess(view, t)? {
        Guess::Forced(b) => b,
        Guess::Undetermined => rng.gen_range(0..2),
    })
}

/// Which use a shared copy is put to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionLabel {
    SelfTest,
    Makd,
}

impl fmt::Display for PartitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionLabel::SelfTest => "SELF_TEST",
            PartitionLabel::Makd => "MAKD",
        })
    }
}

/// Joint die roll for one copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionDecision {
    pub index: usize,
    pub d: u32,
    pub k: u32,
    pub rolls: Vec<u32>,
    /// Sum of the rolls mod `d`.
    pub total: u32,
    pub label: PartitionLabel,
}

fn check_die(d: u32, k: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("die needs at least one face".into()));
    }
    if k > d {
        return Err(Error::InvalidArgument(format!(
            "self-test threshold {k} exceeds die faces {d}"
        )));
    }
    Ok(())
}

impl PartitionDecision {
    pub fn from_rolls(index: usize, d: u32, k: u32, rolls: Vec<u32>) -> Result<Self> {
        check_die(d, k)?;
        if let Some(r) = rolls.iter().find(|&&r| r >= d) {
            return Err(Error::InvalidArgument(format!("roll {r} outside 0..{d}")));
        }
        let total = (rolls.iter().map(|&r| r as u64).sum::<u64>() % d as u64) as u32;
        let label = if total < k {
            PartitionLabel::SelfTest
        } else {
            PartitionLabel::Makd
        };
        Ok(PartitionDecision {
            index,
            d,
            k,
            rolls,
            total,
            label,
        })
    }
}

impl fmt::Display for PartitionDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "COPY {} D {} {}", self.index, self.total, self.label)
    }
}

/// Each of `n_parties` rolls a fair `d`-sided die per copy; copies whose
/// total mod `d` is below `k` are used for self-testing.
pub fn die_partition(
    n_parties: usize,
    d: u32,
    k: u32,
    copies: usize,
    seed: u64,
) -> Result<Vec<PartitionDecision>> {
    check_die(d, k)?;
    if n_parties == 0 {
        return Err(Error::InvalidArgument("need at least one party".into()));
    }
    let mut rng = session_rng(seed);
    (0..copies)
        .map(|idx| {
            let rolls = (0..n_parties).map(|_| rng.gen_range(0..d)).collect();
            PartitionDecision::from_rolls(idx, d, k, rolls)
        })
        .collect()
}

/// Pearson goodness-of-fit against the uniform distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare> {
    if counts.len() < 2 {
        return Err(Error::InvalidArgument("need at least two categories".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("no observations".into()));
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Keys held by one group of communicants after a multi-plan session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupKey {
    pub participants: Vec<usize>,
    /// Lowest-indexed participant; the group key is its outcome bit.
    pub anchor: usize,
    pub keys: Vec<(usize, u8)>,
}

impl GroupKey {
    pub fn agreed(&self) -> bool {
        self.keys.windows(2).all(|w| w[0].1 == w[1].1)
    }

    pub fn bit(&self) -> u8 {
        self.keys.iter().find(|(p, _)| *p == self.anchor).map(|k| k.1).unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConferenceRun {
    pub transcript: SessionTranscript,
    pub groups: Vec<GroupKey>,
}

impl ConferenceRun {
    pub fn agreed(&self) -> bool {
        self.groups.iter().all(GroupKey::agreed)
    }
}

/// Runs every plan of a validated [`MultiPlan`] on one shared copy.
///
/// Each participant derives its group's key from its own outcome and the
/// public relations along a path of plans to the anchor.
pub fn run_conference(t: &Tableau, mp: &MultiPlan, seed: u64) -> Result<ConferenceRun> {
    let pattern = mp.measurement_pattern();
    for p in &mp.plans {
        if !p.is_secure() {
            return Err(Error::InvalidPlan(format!(
                "plan ({}, {}) is not secure",
                p.i + 1,
                p.j + 1
            )));
        }
        if p.support().iter().any(|&q| pattern.letter(q) != p.sigma.letter(q)) {
            return Err(Error::InvalidPlan("plans ask one qubit for two letters".into()));
        }
    }
    if mp.mode == Mode::Conference && mp.groups.len() != 1 {
        return Err(Error::InvalidPlan("conference plans must form one group".into()));
    }
    let public_qubits = mp.public_qubits();
    let mut participants: Vec<usize> = mp.groups.iter().flatten().copied().collect();
    participants.sort_unstable();
    let mut order = public_qubits.clone();
    order.extend(&participants);

    let mut rng = session_rng(seed);
    let outcomes = measure_all(t, &pattern, &order, &mut rng)?;
    let public: Vec<PublicRecord> = public_qubits.iter().map(|&q| record(q, outcomes[&q])).collect();
    let private: Vec<PublicRecord> = participants.iter().map(|&q| record(q, outcomes[&q])).collect();

    let mut groups = Vec::new();
    let mut keys = Vec::new();
    for members in &mp.groups {
        let anchor = members[0];
        // offset[p] = bit_anchor ⊕ bit_p, accumulated along plan edges
        let mut offset: BTreeMap<usize, u8> = BTreeMap::from([(anchor, 0)]);
        let mut queue = VecDeque::from([anchor]);
        while let Some(u) = queue.pop_front() {
            for plan in &mp.plans {
                let w = match (plan.i == u, plan.j == u) {
                    (true, _) => plan.j,
                    (_, true) => plan.i,
                    _ => continue,
                };
                if offset.contains_key(&w) {
                    continue;
                }
                offset.insert(w, offset[&u] ^ plan_offset(plan, &public));
                queue.push_back(w);
            }
        }
        let group_keys: Vec<(usize, u8)> = members
            .iter()
            .map(|&p| (p, outcomes[&p].1.bit() ^ offset[&p]))
            .collect();
        keys.extend(&group_keys);
        groups.push(GroupKey {
            participants: members.clone(),
            anchor,
            keys: group_keys,
        });
    }
    keys.sort_unstable();
    Ok(ConferenceRun {
        transcript: SessionTranscript {
            view: PublicView {
                seed,
                intents: mp.plans.iter().map(|p| (p.i, p.j)).collect(),
                sigmas: mp.plans.iter().map(|p| p.sigma).collect(),
                public,
            },
            private,
            keys,
        },
        groups,
    })
}
