use std::path::Path;

use serde_json::json;

use makd::dense::{self, BellExpression, DenseState};
use makd::planner::{self, Feasibility, KeyPlan, Mode, MultiOutcome, MultiPlan};
use makd::protocol::{self, PartitionLabel};
use makd::qudit::QuditTableau;
use makd::{states, Error, Graph, PauliString, Tableau};

use crate::output::{one_based, set, Emitter, Failure};
use crate::Command;

type Res<T> = Result<T, Failure>;

pub fn run(cmd: &Command, seed: u64, out: &mut Emitter) -> Res<u8> {
    match cmd {
        Command::CertifyAme { file } => certify_ame(file, out),
        Command::PairTable { file } => pair_table(file, out),
        Command::Plan {
            file,
            pair,
            full_path,
            odd_label,
        } => plan(file, *pair, *full_path, *odd_label, out),
        Command::ValidateMulti { file, plans, mode } => validate_multi(file, plans, (*mode).into(), out),
        Command::Simulate {
            file,
            plans,
            copies,
            mode,
            transcripts,
        } => simulate(file, plans, *copies, (*mode).into(), *transcripts, seed, out),
        Command::Partition {
            parties,
            d,
            k,
            copies,
        } => partition(*parties, *d, *k, *copies, seed, out),
        Command::Bell { state, bell, grid } => bell_cmd(state, bell, *grid, out),
        Command::QuditCertify { file } => qudit_certify(file, out),
        Command::Oracle { file } => oracle(file, out),
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// `file:line: message` for parse errors, `file: message` otherwise.
fn diag(path: &Path, e: Error) -> Failure {
    match e {
        Error::Parse { line, message } if line > 0 => {
            Failure::Input(format!("{}:{line}: {message}", path.display()))
        }
        Error::Parse { message, .. } => Failure::Input(format!("{}: {message}", path.display())),
        other => Failure::Input(format!("{}: {other}", path.display())),
    }
}

fn input(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

fn load_graph(path: &Path) -> Res<Graph> {
    Graph::parse(&read(path)?).map_err(|e| diag(path, e))
}

fn looks_like_graph(text: &str) -> bool {
    text.lines().any(|l| l.trim_start().starts_with("e "))
}

/// A graph file yields its graph state; anything else is read as a tableau.
fn load_state(path: &Path) -> Res<(Tableau, Option<Graph>)> {
    let text = read(path)?;
    match Graph::parse(&text) {
        Ok(g) => Ok((Tableau::from_graph(&g), Some(g))),
        Err(e) if looks_like_graph(&text) => Err(diag(path, e)),
        Err(_) => Tableau::parse(&text).map(|t| (t, None)).map_err(|e| diag(path, e)),
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..1u64 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|q| m >> q & 1 == 1).collect())
        .collect();
    all.sort();
    all
}

fn certify_ame(file: &Path, out: &mut Emitter) -> Res<u8> {
    let (t, _) = load_state(file)?;
    let n = t.n();
    let ame = t.is_ame();
    out.record(format!("n {n}"), "size", json!({ "n": n }));
    out.record(format!("AME: {ame}"), "ame", json!({ "ame": ame }));
    if !ame {
        let witness = subsets(n, n / 2)
            .into_iter()
            .map(|a| t.local_subgroup(&a).map_err(input))
            .find(|l| l.as_ref().map_or(true, |l| l.rank() > 0))
            .transpose()?;
        if let Some(l) = witness {
            let g = l.generators[0];
            out.record(
                format!("witness subset {} rank {} element {g}", set(&l.qubits), l.rank()),
                "witness",
                json!({ "subset": one_based(&l.qubits), "rank": l.rank(), "element": g.to_string() }),
            );
        }
        out.record(
            "theorem1 not applicable",
            "theorem1",
            json!({ "applicable": false }),
        );
        return Ok(0);
    }
    let report = t.verify_theorem1().map_err(input)?;
    for e in &report.entries {
        out.record(
            format!("subset {} count {}", set(&e.subset), e.count),
            "subset",
            json!({ "subset": one_based(&e.subset), "count": e.count }),
        );
    }
    out.record(
        format!("theorem1 expected {} pass {}", report.expected, report.pass()),
        "theorem1",
        json!({ "applicable": true, "expected": report.expected, "pass": report.pass() }),
    );
    Ok(0)
}

fn plan_record(p: &KeyPlan, out: &mut Emitter) {
    out.record(
        p.to_string(),
        "plan",
        json!({
            "i": p.i + 1,
            "j": p.j + 1,
            "sigma": p.sigma.to_string(),
            "cooperators": one_based(&p.cooperators),
            "substring_secure": p.verdicts.substring_secure,
            "outsider_leak": p.verdicts.outsider_leak,
            "insiders": one_based(&p.verdicts.insider_leaks),
            "secure": p.is_secure(),
        }),
    );
}

fn pair_table(file: &Path, out: &mut Emitter) -> Res<u8> {
    let g = load_graph(file)?;
    for p in planner::pair_table(&g).map_err(input)? {
        plan_record(&p, out);
    }
    Ok(0)
}

fn plan(file: &Path, (a, b): (usize, usize), full: bool, odd: bool, out: &mut Emitter) -> Res<u8> {
    let g = load_graph(file)?;
    let n = g.n();
    if a > n || b > n {
        return Err(Failure::Input(format!("pair {a},{b} outside 1..={n}")));
    }
    if a == b {
        return Err(Failure::Input(format!("communicants must differ, got {a},{b}")));
    }
    let (i, j) = (a - 1, b - 1);
    let t = Tableau::from_graph(&g);
    if planner::separability_gate(&t, i, j).map_err(input)? == Feasibility::Infeasible {
        out.record(
            format!("pair {a} {b} infeasible: separable, no secure key exists"),
            "infeasible",
            json!({ "i": a, "j": b }),
        );
        return Ok(0);
    }
    let p = if full || odd {
        let sigma = if full {
            planner::full_path_stabilizer(&g, i, j)
        } else {
            planner::path_stabilizer(&g, i, j)
        }
        .map_err(input)?;
        KeyPlan::analyze(&t, i, j, sigma).map_err(input)?
    } else {
        planner::table_plan(&g, i, j).map_err(input)?
    };
    plan_record(&p, out);
    let leaks = planner::leak_check(&t, &p).map_err(input)?;
    out.record(
        format!("leak outsider {} insiders {}", leaks.outsider, set(&leaks.insiders)),
        "leak",
        json!({ "outsider": leaks.outsider, "insiders": one_based(&leaks.insiders) }),
    );
    Ok(0)
}

fn load_plans(t: &Tableau, path: &Path) -> Res<Vec<KeyPlan>> {
    planner::load_plans(t, &read(path)?).map_err(|e| diag(path, e))
}

fn validated(t: &Tableau, plans: &[KeyPlan], path: &Path, mode: Mode, out: &mut Emitter) -> Res<Option<MultiPlan>> {
    match planner::validate_multi(t, plans, mode).map_err(|e| diag(path, e))? {
        MultiOutcome::Valid(mp) => Ok(Some(mp)),
        MultiOutcome::Invalid(vs) => {
            for v in vs {
                out.record(
                    v.to_string(),
                    "violation",
                    json!({
                        "constraint": v.constraint.to_string(),
                        "plans": one_based(&v.plans),
                        "qubits": one_based(&v.qubits),
                        "detail": v.detail,
                    }),
                );
            }
            Ok(None)
        }
    }
}

fn validate_multi(file: &Path, plans: &Path, mode: Mode, out: &mut Emitter) -> Res<u8> {
    let (t, _) = load_state(file)?;
    let ps = load_plans(&t, plans)?;
    let Some(mp) = validated(&t, &ps, plans, mode, out)? else {
        return Ok(1);
    };
    for g in &mp.groups {
        out.record(format!("group {}", set(g)), "group", json!({ "members": one_based(g) }));
    }
    for d in &mp.derived {
        out.record(
            format!("derived {}", d.plan_line()),
            "derived",
            json!({ "i": d.i + 1, "j": d.j + 1, "sigma": d.sigma.to_string() }),
        );
    }
    out.record(
        format!("VALID {} plans {} public {}", mode_name(mode), mp.plans.len(), set(&mp.public_qubits())),
        "valid",
        json!({ "mode": mode_name(mode), "plans": mp.plans.len(), "public": one_based(&mp.public_qubits()) }),
    );
    Ok(0)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Conference => "conference",
        Mode::Parallel => "parallel",
    }
}

fn simulate(
    file: &Path,
    plans: &Path,
    copies: usize,
    mode: Mode,
    transcripts: bool,
    seed: u64,
    out: &mut Emitter,
) -> Res<u8> {
    let (t, _) = load_state(file)?;
    let ps = load_plans(&t, plans)?;
    if ps.len() == 1 {
        return simulate_pair(&t, &ps[0], copies, transcripts, seed, out);
    }
    let Some(mp) = validated(&t, &ps, plans, mode, out)? else {
        return Ok(1);
    };
    let mut agreed = 0;
    let mut bits: Vec<Vec<u8>> = vec![Vec::new(); mp.groups.len()];
    for c in 0..copies {
        let s = seed.wrapping_add(c as u64);
        let run = protocol::run_conference(&t, &mp, s).map_err(input)?;
        if transcripts {
            out.record(
                format!("SESSION {c}\n{}", run.transcript),
                "session",
                json!({ "copy": c, "seed": s, "agreed": run.agreed() }),
            );
        }
        agreed += run.agreed() as usize;
        for (g, key) in run.groups.iter().enumerate() {
            bits[g].push(key.bit());
        }
    }
    for (g, members) in mp.groups.iter().enumerate() {
        let ones = bits[g].iter().filter(|&&b| b == 1).count();
        let frac = ones as f64 / copies.max(1) as f64;
        out.record(
            format!("group {} ones {frac:.4}", set(members)),
            "group",
            json!({ "members": one_based(members), "ones_fraction": frac }),
        );
    }
    if bits.len() >= 2 && copies > 0 {
        let rho = correlation(&bits[0], &bits[1]);
        out.record(format!("correlation {rho:.4}"), "correlation", json!({ "rho": rho }));
    }
    out.record(
        format!("sessions {copies} agreed {agreed}"),
        "summary",
        json!({ "sessions": copies, "agreed": agreed }),
    );
    Ok(0)
}

fn correlation(a: &[u8], b: &[u8]) -> f64 {
    let n = a.len() as f64;
    let sa: Vec<f64> = a.iter().map(|&x| 1.0 - 2.0 * x as f64).collect();
    let sb: Vec<f64> = b.iter().map(|&x| 1.0 - 2.0 * x as f64).collect();
    let (ma, mb) = (sa.iter().sum::<f64>() / n, sb.iter().sum::<f64>() / n);
    let cov: f64 = sa.iter().zip(&sb).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n;
    let va: f64 = sa.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / n;
    let vb: f64 = sb.iter().map(|y| (y - mb).powi(2)).sum::<f64>() / n;
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

fn simulate_pair(t: &Tableau, plan: &KeyPlan, copies: usize, transcripts: bool, seed: u64, out: &mut Emitter) -> Res<u8> {
    let mut adversary = protocol::session_rng(seed ^ 0x5eed_ad5e);
    let (mut agreed, mut ones, mut guessed) = (0usize, 0usize, 0usize);
    for c in 0..copies {
        let s = seed.wrapping_add(c as u64);
        let tr = protocol::run_session(t, plan, s).map_err(input)?;
        let (ki, kj) = (tr.key_of(plan.i), tr.key_of(plan.j));
        let ok = ki.is_some() && ki == kj;
        let key = ki.unwrap_or(0);
        let guess = protocol::adversary_attack(tr.public_view(), t, &mut adversary).map_err(input)?;
        agreed += ok as usize;
        ones += key as usize;
        guessed += (guess == key) as usize;
        if transcripts {
            out.record(
                format!("SESSION {c}\n{tr}"),
                "session",
                json!({ "copy": c, "seed": s, "agreed": ok, "key": key, "adversary_guess": guess }),
            );
        }
    }
    let n = copies.max(1) as f64;
    let bias = ones as f64 / n - 0.5;
    let success = guessed as f64 / n;
    out.record(
        format!("sessions {copies} agreed {agreed} bias {bias:.4} adversary_success {success:.4}"),
        "summary",
        json!({ "sessions": copies, "agreed": agreed, "bias": bias, "adversary_success": success }),
    );
    Ok(0)
}

fn partition(parties: usize, d: u32, k: u32, copies: usize, seed: u64, out: &mut Emitter) -> Res<u8> {
    let decisions = protocol::die_partition(parties, d, k, copies, seed).map_err(input)?;
    let mut counts = vec![0u64; d as usize];
    for dec in &decisions {
        counts[dec.total as usize] += 1;
        out.record(
            dec.to_string(),
            "copy",
            json!({ "index": dec.index, "d": dec.total, "label": dec.label.to_string() }),
        );
    }
    let self_test = decisions
        .iter()
        .filter(|d| d.label == PartitionLabel::SelfTest)
        .count();
    let frac = self_test as f64 / copies.max(1) as f64;
    out.record(
        format!("self_test_fraction {frac:.4} expected {:.4}", k as f64 / d as f64),
        "fraction",
        json!({ "self_test_fraction": frac, "expected": k as f64 / d as f64 }),
    );
    if d >= 2 && copies > 0 {
        let chi = protocol::chi_square_uniform(&counts).map_err(input)?;
        out.record(
            format!("chi_square statistic {:.4} dof {} p_value {:.4}", chi.statistic, chi.dof, chi.p_value),
            "chi_square",
            json!({ "statistic": chi.statistic, "dof": chi.dof, "p_value": chi.p_value }),
        );
    }
    Ok(0)
}

fn builtin_state(name: &str) -> Option<Tableau> {
    match name {
        "ring5" | "c" => Some(states::ring5_tableau()),
        "psi5" => Some(states::psi5_tableau()),
        "bell" | "b" => Some(states::bell_tableau()),
        _ => {
            let n: usize = name.strip_prefix("ghz")?.parse().ok()?;
            (2..=dense::MAX_QUBITS).contains(&n).then(|| states::ghz_tableau(n))
        }
    }
}

fn dense_state(t: &Tableau) -> Res<DenseState> {
    dense::state_from_tableau(t).map_err(input)
}

fn bell_cmd(state: &str, bell: &Path, grid: Option<usize>, out: &mut Emitter) -> Res<u8> {
    let t = match builtin_state(state) {
        Some(t) => t,
        None => load_state(Path::new(state))?.0,
    };
    let s = dense_state(&t)?;
    let e = BellExpression::parse(&read(bell)?).map_err(|e| diag(bell, e))?;
    let quantum = dense::expectation(&s, &e).map_err(|e| diag(bell, e))?;
    let classical = dense::classical_bound(&e).map_err(|e| diag(bell, e))?;
    out.record(
        format!("quantum {} classical {}", fmt_value(quantum), fmt_value(classical)),
        "bell",
        json!({ "quantum": quantum, "classical": classical, "violation": quantum.abs() > classical + 1e-9 }),
    );
    if let Some(steps) = grid {
        let g = dense::grid_search(&s, &e, steps, 4).map_err(input)?;
        out.record(
            g.to_string().trim_end().to_string(),
            "grid",
            json!({
                "value": g.value,
                "steps": g.steps,
                "assignment": g.assignment.iter().map(|(f, k)| json!({
                    "party": f.party + 1, "label": f.label, "theta": g.angle(*k)
                })).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(0)
}

/// Integers print bare, everything else with twelve decimals.
fn fmt_value(v: f64) -> String {
    if (v - v.round()).abs() < 1e-12 {
        format!("{}", v.round())
    } else {
        format!("{v:.12}")
    }
}

fn qudit_certify(file: &Path, out: &mut Emitter) -> Res<u8> {
    let t = QuditTableau::parse(&read(file)?).map_err(|e| diag(file, e))?;
    let ame = t.is_ame().map_err(|e| diag(file, e))?;
    out.record(
        format!("d {} n {}", t.dim(), t.n()),
        "size",
        json!({ "d": t.dim(), "n": t.n() }),
    );
    out.record(format!("AME: {ame}"), "ame", json!({ "ame": ame }));
    if !ame {
        out.record("theorem2 not applicable", "theorem2", json!({ "applicable": false }));
        return Ok(0);
    }
    let r = t.verify_theorem2().map_err(input)?;
    for e in &r.entries {
        let w = e.witness.as_ref().map(|w| w.to_string());
        out.record(
            format!(
                "subset {} k {} count {} exact_support {} witness {}",
                set(&e.subset),
                e.k,
                e.nonidentity,
                e.exact_support,
                w.as_deref().unwrap_or("-")
            ),
            "subset",
            json!({
                "subset": one_based(&e.subset),
                "k": e.k,
                "count": e.nonidentity,
                "exact_support": e.exact_support,
                "witness": w,
            }),
        );
    }
    out.record(
        format!("theorem2 nontrivial {} exact_support {}", r.nontrivial(), r.exact_support()),
        "theorem2",
        json!({ "applicable": true, "nontrivial": r.nontrivial(), "exact_support": r.exact_support() }),
    );
    if t.dim() == 3 && t.n() <= dense::MAX_QUTRITS {
        let s = dense::state_from_qudit_tableau(&t).map_err(input)?;
        let mixed = s.reductions_maximally_mixed(t.n() / 2).map_err(input)?;
        out.record(
            format!("dense reductions_maximally_mixed {mixed}"),
            "dense",
            json!({ "reductions_maximally_mixed": mixed }),
        );
        if mixed != ame {
            return Err(Failure::Internal("dense qutrit state disagrees with the AME verdict".into()));
        }
    }
    Ok(0)
}

fn oracle(file: &Path, out: &mut Emitter) -> Res<u8> {
    let (t, _) = load_state(file)?;
    let n = t.n();
    if n > dense::MAX_ENUMERATION_QUBITS {
        return Err(Failure::Input(format!(
            "{}: oracle supports at most {} qubits, got {n}",
            file.display(),
            dense::MAX_ENUMERATION_QUBITS
        )));
    }
    let s = dense_state(&t)?;
    let mut brute: Vec<PauliString> = dense::brute_force_stabilizers(&s).map_err(input)?;
    let mut engine: Vec<PauliString> = t.elements().collect();
    let key = |p: &PauliString| (p.x_bits(), p.z_bits(), p.phase_exp());
    brute.sort_by_key(key);
    engine.sort_by_key(key);
    let group_match = brute == engine;
    out.record(
        format!("group_match {group_match} dense {} engine {}", brute.len(), engine.len()),
        "group",
        json!({ "match": group_match, "dense": brute.len(), "engine": engine.len() }),
    );

    let r = n / 2;
    let uniform = dense::uniformity_check(&s, r).map_err(input)?;
    let ame = t.is_ame();
    out.record(
        format!("uniformity r {r} dense {uniform} engine_ame {ame}"),
        "uniformity",
        json!({ "r": r, "dense": uniform, "engine_ame": ame }),
    );

    // stabilizer reductions have flat spectra, so S = -log2 tr(rho^2)
    let mut entropy_match = true;
    for size in 1..=r {
        for a in subsets(n, size) {
            let rho = s.reduced_density_matrix(&a).map_err(input)?;
            let purity: f64 = rho.iter().flatten().map(|v| v.norm_sqr()).sum();
            let dense_s = -purity.log2();
            let engine_s = t.entanglement_entropy(&a).map_err(input)? as f64;
            entropy_match &= (dense_s - engine_s).abs() < 1e-9;
        }
    }
    out.record(format!("entropy_match {entropy_match}"), "entropy", json!({ "match": entropy_match }));

    if !group_match || uniform != ame || !entropy_match {
        return Err(Failure::Internal("dense oracle disagrees with the stabilizer engine".into()));
    }
    Ok(0)
}
