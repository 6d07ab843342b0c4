//! Command-line driver: JSON in, certificates out.
//!
//! Every subcommand reports a verdict plus the witness that makes it
//! auditable: embedding maps, offending pairs, homogeneous sets, descent
//! witnesses. Exit code 0 means verified/true, 1 refuted/false (with the
//! refuting data in the report), 2 input error. Reports are deterministic:
//! the same inputs and seed produce byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use bqo::{
    check_bad_prefix, couset_subset, descend_chain, embeds, enumerate_terms, eta, iota, is_bad_on,
    rado_bad_downset, ramsey_homogeneous, roundtrip_check, sim_equiv, truncate_downset, unwind,
    validate_witness, wind, BadnessVerdict, CoUpset, EmbedResult, EmbedWitness, Error,
    FrontTemplate, Qo, SeqTerm, TameArray, VTerm,
};

#[derive(Parser)]
#[command(name = "bqo", version, about = "order-theory toolkit: embeddability, hierarchies, barriers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct QoArg {
    /// Quasi-order: inline JSON or a file path.
    #[arg(long)]
    qo: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide sequence embeddability and emit the embedding witness.
    Embed {
        #[command(flatten)]
        qo: QoArg,
        /// Source term (inline JSON or file path).
        #[arg(long)]
        u: String,
        /// Target term (inline JSON or file path).
        #[arg(long)]
        v: String,
        #[arg(long)]
        weak: bool,
    },
    /// Map a hierarchy term to its omega-iterated sequence.
    Iota {
        #[command(flatten)]
        qo: QoArg,
        #[arg(long)]
        x: String,
    },
    /// Map a sequence term back to a hierarchy term.
    Eta {
        #[command(flatten)]
        qo: QoArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        starred: bool,
    },
    /// Check the round-trip law on a hierarchy term.
    Roundtrip {
        #[command(flatten)]
        qo: QoArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        starred: bool,
    },
    /// Unwind a bad prefix of hierarchy terms into a bad array.
    Unwind {
        #[command(flatten)]
        qo: QoArg,
        /// JSON array of hierarchy terms (inline or file path).
        #[arg(long)]
        prefix: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        starred: bool,
    },
    /// Wind a tame array into the hierarchy term rooted at an index.
    Wind {
        /// Tame array (inline JSON or file path).
        #[arg(long)]
        array: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 12)]
        trunc: u64,
    },
    /// The Rado regression suite: pairwise incomparability, the certified
    /// descending chain, the unwound array, and the wind round trip.
    RadoSuite {
        #[arg(long, default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 12)]
        trunc: u64,
    },
    /// Truncated homogeneous-set search for a two-coloring of a uniform
    /// front.
    Ramsey {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        target: usize,
        #[arg(long, default_value_t = 18)]
        bound: u64,
        /// Built-in name (even-sum, const0, const1, random), inline JSON
        /// map, or file path.
        #[arg(long, default_value = "even-sum")]
        coloring: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scan the size-ordered stream of regular terms for the first good
    /// pair.
    GoodnessScan {
        #[command(flatten)]
        qo: QoArg,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        weak: bool,
    },
    /// Dump the equivalence classes of the exhaustive small universe of
    /// hierarchy terms and the order between them.
    Quotient {
        #[command(flatten)]
        qo: QoArg,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long)]
        starred: bool,
    },
    /// Re-validate an embedding witness produced by `embed`.
    VerifyWitness {
        /// JSON object {qo, u, v, weak, witness} (inline or file path).
        #[arg(long)]
        input: String,
    },
}

struct Report {
    exit: u8,
    json: Value,
    text: String,
}

fn ok(json: Value, text: String) -> Result<Report, Error> {
    Ok(Report { exit: 0, json, text })
}

fn refuted(json: Value, text: String) -> Result<Report, Error> {
    Ok(Report { exit: 1, json, text })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli.command).unwrap_or_else(|e| {
        let exit = match e {
            Error::NotBad(i, j) => {
                return Report {
                    exit: 1,
                    json: json!({"verdict": "refuted", "offending_pair": [i, j]}),
                    text: format!("refuted: prefix not bad, offending pair ({i}, {j})"),
                }
            }
            _ => 2,
        };
        Report {
            exit,
            json: json!({"error": e.to_string()}),
            text: format!("error: {e}"),
        }
    });
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).unwrap() + "\n",
        Format::Text => report.text.clone() + "\n",
    };
    match &cli.out {
        Some(path) => {
            if fs::write(path, &rendered).is_err() {
                eprintln!("error: cannot write {path}");
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit)
}

/// Inline JSON (starts with a brace, bracket, or quote) or file contents.
fn read_input(s: &str) -> Result<String, Error> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(s.to_string());
    }
    fs::read_to_string(s).map_err(|e| Error::InvalidInput(format!("cannot read `{s}`: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, Error> {
    let raw = read_input(s)?;
    serde_json::from_str(&raw).map_err(|e| {
        Error::InvalidInput(format!(
            "malformed {what} (line {}, column {}): {e}",
            e.line(),
            e.column()
        ))
    })
}

fn load_qo(arg: &QoArg) -> Result<Qo, Error> {
    let qo: Qo = parse_json(&arg.qo, "quasi-order")?;
    if let Qo::Finite { elements, leq } = &qo {
        return Qo::finite(elements.clone(), leq.clone());
    }
    Ok(qo)
}

fn load_seqterm(qo: &Qo, s: &str) -> Result<SeqTerm, Error> {
    let t: SeqTerm = parse_json(s, "sequence term")?;
    let t = t.normalize()?;
    t.validate(qo)?;
    Ok(t)
}

fn load_vterm(qo: &Qo, s: &str) -> Result<VTerm, Error> {
    let t: VTerm = parse_json(s, "hierarchy term")?;
    t.validate(qo)?;
    Ok(t)
}

fn run(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Embed { qo, u, v, weak } => {
            let q = load_qo(qo)?;
            let ut = load_seqterm(&q, u)?;
            let vt = load_seqterm(&q, v)?;
            let rel = if *weak { "<=emb*" } else { "<=emb" };
            match embeds(&q, &ut, &vt, *weak)? {
                EmbedResult::Embeds(w) => ok(
                    json!({
                        "verdict": "embeds",
                        "weak": weak,
                        "witness": w,
                    }),
                    format!(
                        "verified: {ut} {rel} {vt}\nwitness: {} matched pairs, {} limit jumps",
                        w.pairs.len(),
                        w.loops.len()
                    ),
                ),
                EmbedResult::Refuted { stuck_at } => refuted(
                    json!({
                        "verdict": "refuted",
                        "weak": weak,
                        "stuck_at": stuck_at,
                    }),
                    format!("refuted: {ut} {rel} {vt} fails; source position {stuck_at} has no match"),
                ),
            }
        }
        Command::Iota { qo, x } => {
            let q = load_qo(qo)?;
            let xt = load_vterm(&q, x)?;
            let s = iota(&q, &xt)?;
            ok(
                json!({"sequence": s, "length": seq_len_string(&s)}),
                format!("iota: {s} (length {})", seq_len_string(&s)),
            )
        }
        Command::Eta { qo, u, starred } => {
            let q = load_qo(qo)?;
            let ut = load_seqterm(&q, u)?;
            let x = eta(&q, &ut, *starred)?;
            ok(
                json!({"term": x, "starred": starred}),
                format!("eta: {}", serde_json::to_string(&x).unwrap()),
            )
        }
        Command::Roundtrip { qo, x, starred } => {
            let q = load_qo(qo)?;
            let xt = load_vterm(&q, x)?;
            let holds = roundtrip_check(&q, &xt, *starred)?;
            let back = eta(&q, &iota(&q, &xt)?, *starred)?;
            if holds {
                ok(
                    json!({"verdict": "equivalent", "eta_iota": back}),
                    "verified: eta(iota(x)) ~ x".into(),
                )
            } else {
                refuted(
                    json!({"verdict": "refuted", "eta_iota": back}),
                    "refuted: eta(iota(x)) differs from x".into(),
                )
            }
        }
        Command::Unwind {
            qo,
            prefix,
            depth,
            starred,
        } => {
            let q = load_qo(qo)?;
            let terms: Vec<VTerm> = parse_json(prefix, "prefix")?;
            for t in &terms {
                t.validate(&q)?;
            }
            let arr = unwind(&q, &terms, *depth, *starred)?;
            let pairs = step_pairs(&arr.domain);
            ok(
                json!({
                    "verdict": "bad-array",
                    "array": arr,
                    "step_pairs_checked": pairs,
                }),
                format!(
                    "verified on depth {depth}: bad array with {} front tuples, {} step pairs re-checked\nrank note: {}",
                    arr.domain.len(),
                    pairs,
                    arr.rank_note
                ),
            )
        }
        Command::Wind { array, n, trunc } => {
            let arr: TameArray = parse_json(array, "tame array")?;
            let x = wind(&arr, *n, *trunc)?;
            ok(
                json!({"term": x, "n": n, "trunc": trunc}),
                format!("wind({n}): {}", serde_json::to_string(&x).unwrap()),
            )
        }
        Command::RadoSuite { n, trunc } => rado_suite(*n, *trunc),
        Command::Ramsey {
            k,
            target,
            bound,
            coloring,
            seed,
        } => {
            let front = FrontTemplate::uniform(*k);
            let table = build_coloring(*k, *bound, coloring, *seed)?;
            let color = |sigma: &[u64]| table[&key_of(sigma)];
            match ramsey_homogeneous(&front, &color, *target, *bound) {
                Some(h) => {
                    let c = color(&h[..*k]);
                    ok(
                        json!({"verdict": "homogeneous", "set": h, "color": c}),
                        format!(
                            "verified on bound {bound}: homogeneous set {{{}}} with color {c}",
                            join_nums(&h)
                        ),
                    )
                }
                None => refuted(
                    json!({"verdict": "failure", "bound": bound}),
                    format!("refuted on bound {bound}: no homogeneous set of size {target}"),
                ),
            }
        }
        Command::GoodnessScan {
            qo,
            depth,
            blocks,
            count,
            weak,
        } => {
            let q = load_qo(qo)?;
            let terms = enumerate_terms(&q, *depth, *blocks, *count)?;
            let rel = if *weak { "<=emb*" } else { "<=emb" };
            for j in 1..terms.len() {
                for i in 0..j {
                    if let EmbedResult::Embeds(w) = embeds(&q, &terms[i], &terms[j], *weak)? {
                        return ok(
                            json!({
                                "verdict": "good-pair",
                                "i": i,
                                "j": j,
                                "u": terms[i],
                                "v": terms[j],
                                "witness": w,
                            }),
                            format!(
                                "verified: good pair at ({i}, {j}): {} {rel} {}",
                                terms[i], terms[j]
                            ),
                        );
                    }
                }
            }
            refuted(
                json!({"verdict": "all-bad", "scanned": terms.len()}),
                format!("refuted on bound {count}: no good pair among the first {} terms", terms.len()),
            )
        }
        Command::Quotient {
            qo,
            depth,
            width,
            starred,
        } => quotient(qo, *depth, *width, *starred),
        Command::VerifyWitness { input } => {
            #[derive(serde::Deserialize)]
            struct Input {
                qo: Qo,
                u: SeqTerm,
                v: SeqTerm,
                weak: bool,
                witness: EmbedWitness,
            }
            let inp: Input = parse_json(input, "witness bundle")?;
            let u = inp.u.normalize()?;
            let v = inp.v.normalize()?;
            if inp.witness.weak != inp.weak {
                return refuted(
                    json!({"verdict": "invalid", "reason": "weak flag mismatch"}),
                    "invalid: witness weak flag does not match".into(),
                );
            }
            match validate_witness(&inp.qo, &u, &v, &inp.witness) {
                Ok(()) => ok(
                    json!({"verdict": "valid", "pairs": inp.witness.pairs.len()}),
                    format!("verified: witness with {} pairs validates", inp.witness.pairs.len()),
                ),
                Err(e) => refuted(
                    json!({"verdict": "invalid", "reason": e.to_string()}),
                    format!("invalid: {e}"),
                ),
            }
        }
    }
}

fn seq_len_string(s: &SeqTerm) -> String {
    bqo::seq_len(s).to_string()
}

fn key_of(sigma: &[u64]) -> String {
    sigma
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_nums(h: &[u64]) -> String {
    h.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
}

fn step_pairs(domain: &[Vec<u64>]) -> u64 {
    let mut count = 0;
    for s in domain {
        for t in domain {
            if bqo::triangleleft(s, t).unwrap_or(false) {
                count += 1;
            }
        }
    }
    count
}

/// Total coloring table over the k-subsets of the bound.
fn build_coloring(
    k: usize,
    bound: u64,
    spec: &str,
    seed: u64,
) -> Result<BTreeMap<String, u8>, Error> {
    let tuples = FrontTemplate::uniform(k).tuples_up_to(bound);
    let mut table = BTreeMap::new();
    match spec {
        "even-sum" => {
            for t in &tuples {
                table.insert(key_of(t), (t.iter().sum::<u64>() % 2) as u8);
            }
        }
        "const0" | "const1" => {
            let c = if spec == "const1" { 1 } else { 0 };
            for t in &tuples {
                table.insert(key_of(t), c);
            }
        }
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in &tuples {
                table.insert(key_of(t), rng.gen_range(0..2u8));
            }
        }
        other => {
            let parsed: BTreeMap<String, u8> = parse_json(other, "coloring")?;
            for t in &tuples {
                let key = key_of(t);
                let c = *parsed
                    .get(&key)
                    .ok_or_else(|| Error::InvalidInput(format!("coloring misses tuple {key}")))?;
                table.insert(key, c);
            }
        }
    }
    Ok(table)
}

fn rado_suite(n: u64, trunc: u64) -> Result<Report, Error> {
    if n < 2 || trunc < 6 {
        return Err(Error::InvalidInput("need --n >= 2 and --trunc >= 6".into()));
    }
    let mut text = Vec::new();
    let sets: Vec<CoUpset> = (1..=n)
        .map(rado_bad_downset)
        .collect::<Result<_, _>>()?;

    // Pairwise incomparability in both directions.
    let mut incomparable = 0u64;
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if i < j {
                if couset_subset(&sets[i], &sets[j])? || couset_subset(&sets[j], &sets[i])? {
                    return Err(Error::InvalidInput(format!(
                        "B{} and B{} are comparable",
                        i + 1,
                        j + 1
                    )));
                }
                incomparable += 1;
            }
        }
    }
    text.push(format!(
        "incomparability: {incomparable} unordered pairs checked, both directions refuted"
    ));

    // The certified descending chain one level up.
    let chain = descend_chain(&sets)?;
    text.push(format!(
        "descent: {} witnesses certify the strictly descending chain",
        chain.steps.len()
    ));

    // Unwind a truncated four-term prefix.
    let bound = trunc * (trunc + 1) / 2;
    let prefix: Vec<VTerm> = sets
        .iter()
        .take(4)
        .map(|s| truncate_downset(s, bound))
        .collect::<Result<_, _>>()?;
    if !check_bad_prefix(&Qo::Rado, &prefix, false) {
        return Err(Error::InvalidInput("truncated prefix is not bad".into()));
    }
    let arr = unwind(&Qo::Rado, &prefix, 2, false)?;
    arr.verify_badness()?;
    let pairs = step_pairs(&arr.domain);
    text.push(format!(
        "unwinding: array on {} front tuples, {} step pairs bad (verified on bound {trunc})",
        arr.domain.len(),
        pairs
    ));

    // Wind the identity array back and compare with the truncations.
    let identity = TameArray::rado_identity();
    let mut rt = 0u64;
    for m in 1..=n.min(trunc.saturating_sub(2)) {
        let wound = wind(&identity, m, trunc)?;
        let t = truncate_downset(&sets[(m - 1) as usize], bound)?;
        if !sim_equiv(&Qo::Rado, &wound, &t, true) {
            return Err(Error::InvalidInput(format!(
                "wind({m}) differs from the truncated downset"
            )));
        }
        rt += 1;
    }
    text.push(format!("winding: {rt} round trips equivalent (verified on bound {trunc})"));

    // The identity array is bad on the truncation.
    match is_bad_on(&identity, trunc)? {
        BadnessVerdict::BadOnBound { pairs_checked, .. } => {
            text.push(format!(
                "array badness: {pairs_checked} step pairs checked (verified on bound {trunc})"
            ));
        }
        BadnessVerdict::Counterexample { sigma, tau, .. } => {
            return Err(Error::InvalidInput(format!(
                "identity array good at {sigma:?} <| {tau:?}"
            )));
        }
    }

    let witnesses: Vec<Value> = chain
        .steps
        .iter()
        .map(|s| json!({"index": s.witness_index, "witness": s.witness.to_string()}))
        .collect();
    ok(
        json!({
            "verdict": "verified",
            "n": n,
            "trunc": trunc,
            "incomparable_pairs": incomparable,
            "descent_witnesses": witnesses,
            "unwound_front": arr.domain,
            "roundtrips": rt,
        }),
        text.join("\n"),
    )
}

fn quotient(qo: &QoArg, depth: usize, width: usize, starred: bool) -> Result<Report, Error> {
    let q = load_qo(qo)?;
    if depth > 2 || width > 4 {
        return Err(Error::InvalidInput("quotient supports depth <= 2, width <= 4".into()));
    }
    // Exhaustive universe of terms up to the bounds.
    let mut pool: Vec<VTerm> = q.all_elements()?.into_iter().map(VTerm::Ur).collect();
    for _ in 0..depth {
        let mut next = pool.clone();
        grow_sets(&pool, width, &mut next);
        pool = next;
    }
    // Group by equivalence, keep the first representative.
    let mut classes: Vec<(VTerm, Vec<VTerm>)> = Vec::new();
    'terms: for t in pool {
        for (rep, members) in classes.iter_mut() {
            if sim_equiv(&q, rep, &t, starred) {
                members.push(t);
                continue 'terms;
            }
        }
        classes.push((t.clone(), vec![t]));
    }
    let order: Vec<Vec<bool>> = classes
        .iter()
        .map(|(x, _)| {
            classes
                .iter()
                .map(|(y, _)| bqo::lesssim(&q, x, y, starred))
                .collect()
        })
        .collect();
    let mut lines = vec![format!(
        "{} terms in {} classes (starred: {starred})",
        classes.iter().map(|(_, m)| m.len()).sum::<usize>(),
        classes.len()
    )];
    for (i, (rep, members)) in classes.iter().enumerate() {
        let below: Vec<String> = (0..classes.len())
            .filter(|&j| j != i && order[i][j])
            .map(|j| format!("c{j}"))
            .collect();
        lines.push(format!(
            "c{i}: {} ({} terms){}",
            serde_json::to_string(rep).unwrap(),
            members.len(),
            if below.is_empty() {
                String::new()
            } else {
                format!(" <~ {}", below.join(", "))
            }
        ));
    }
    let classes_json: Vec<Value> = classes
        .iter()
        .map(|(rep, members)| json!({"representative": rep, "size": members.len()}))
        .collect();
    ok(
        json!({"classes": classes_json, "leq": order, "starred": starred}),
        lines.join("\n"),
    )
}

fn grow_sets(pool: &[VTerm], width: usize, out: &mut Vec<VTerm>) {
    fn rec(pool: &[VTerm], start: usize, width: usize, current: &mut Vec<VTerm>, out: &mut Vec<VTerm>) {
        if !current.is_empty() {
            let t = VTerm::set(current.clone()).expect("nonempty");
            if !out.contains(&t) {
                out.push(t);
            }
        }
        if current.len() == width {
            return;
        }
        for i in start..pool.len() {
            current.push(pool[i].clone());
            rec(pool, i + 1, width, current, out);
            current.pop();
        }
    }
    rec(pool, 0, width, &mut Vec::new(), out);
}
