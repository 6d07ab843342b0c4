//! Regular transfinite sequence terms and their decision procedures.
//!
//! A term denotes a sequence over the points of a quasi-order: a single
//! point, a finite concatenation, or the omega-iteration of a block list in
//! round-robin order (block `i mod k` at step `i`). Lengths are ordinals in
//! Cantor normal form.
//!
//! Embeddability is decided by executing the greedy minimal embedding
//! symbolically. Scanning for the next match of a single letter is a
//! structural recursion (a letter matches inside an omega-iteration iff it
//! matches in some block, so exhaustion is decidable without search). The
//! driver consumes the left term position by position and accelerates
//! through limits with cycle detection: when the pair of cursor
//! abstractions repeats, the outermost iteration frame that advanced in the
//! cycle is the one whose limit the greedy reaches, and both cursors move
//! past it.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::qo::{Element, Qo};

/// A regular transfinite sequence term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqTerm {
    Atom(Element),
    /// Finite concatenation; kept flattened, arity at least two.
    Cat(Vec<SeqTerm>),
    /// Omega-iteration of the blocks in round-robin order.
    Rep(Vec<SeqTerm>),
}

impl SeqTerm {
    pub fn atom(e: Element) -> SeqTerm {
        SeqTerm::Atom(e)
    }

    /// Concatenation; flattens nested concatenations and collapses the
    /// singleton case.
    pub fn cat(parts: Vec<SeqTerm>) -> Result<SeqTerm> {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                SeqTerm::Cat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Err(Error::InvalidInput("empty concatenation".into())),
            1 => Ok(flat.pop().unwrap()),
            _ => Ok(SeqTerm::Cat(flat)),
        }
    }

    pub fn rep(blocks: Vec<SeqTerm>) -> Result<SeqTerm> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("empty block list".into()));
        }
        Ok(SeqTerm::Rep(blocks))
    }

    /// Re-establishes the constructor invariants on a parsed term.
    pub fn normalize(self) -> Result<SeqTerm> {
        match self {
            SeqTerm::Atom(e) => Ok(SeqTerm::Atom(e)),
            SeqTerm::Cat(parts) => SeqTerm::cat(
                parts
                    .into_iter()
                    .map(|p| p.normalize())
                    .collect::<Result<_>>()?,
            ),
            SeqTerm::Rep(blocks) => SeqTerm::rep(
                blocks
                    .into_iter()
                    .map(|b| b.normalize())
                    .collect::<Result<_>>()?,
            ),
        }
    }

    pub fn validate(&self, qo: &Qo) -> Result<()> {
        match self {
            SeqTerm::Atom(e) => qo.validate(e),
            SeqTerm::Cat(parts) => {
                if parts.len() < 2 || parts.iter().any(|p| matches!(p, SeqTerm::Cat(_))) {
                    return Err(Error::InvalidInput("concatenation not flattened".into()));
                }
                parts.iter().try_for_each(|p| p.validate(qo))
            }
            SeqTerm::Rep(blocks) => {
                if blocks.is_empty() {
                    return Err(Error::InvalidInput("empty block list".into()));
                }
                blocks.iter().try_for_each(|b| b.validate(qo))
            }
        }
    }

    pub fn contains_rep(&self) -> bool {
        match self {
            SeqTerm::Atom(_) => false,
            SeqTerm::Cat(parts) => parts.iter().any(|p| p.contains_rep()),
            SeqTerm::Rep(_) => true,
        }
    }

    /// The letters of a finite term, `None` when the term is infinite.
    pub fn as_word(&self) -> Option<Vec<&Element>> {
        match self {
            SeqTerm::Atom(e) => Some(vec![e]),
            SeqTerm::Cat(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.as_word()?);
                }
                Some(out)
            }
            SeqTerm::Rep(_) => None,
        }
    }

    /// First `n` letters of the denoted sequence (for cross-checks).
    pub fn prefix_letters(&self, n: usize) -> Vec<Element> {
        let mut out = Vec::with_capacity(n);
        fn walk(t: &SeqTerm, out: &mut Vec<Element>, n: usize) {
            if out.len() >= n {
                return;
            }
            match t {
                SeqTerm::Atom(e) => out.push(e.clone()),
                SeqTerm::Cat(parts) => parts.iter().for_each(|p| walk(p, out, n)),
                SeqTerm::Rep(blocks) => {
                    let mut step = 0usize;
                    while out.len() < n {
                        walk(&blocks[step % blocks.len()], out, n);
                        step += 1;
                    }
                }
            }
        }
        walk(self, &mut out, n);
        out
    }
}

impl fmt::Display for SeqTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqTerm::Atom(e) => write!(f, "{e}"),
            SeqTerm::Cat(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            SeqTerm::Rep(blocks) => {
                write!(f, "rep(")?;
                for (i, b) in blocks.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{b}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Length of the denoted sequence: the omega-iteration of a round of length
/// `w^e*c + ..` has length `w^{e+1}`.
pub fn seq_len(u: &SeqTerm) -> Ordinal {
    match u {
        SeqTerm::Atom(_) => Ordinal::one(),
        SeqTerm::Cat(parts) => parts
            .iter()
            .fold(Ordinal::zero(), |acc, p| acc.add(&seq_len(p))),
        SeqTerm::Rep(blocks) => blocks
            .iter()
            .fold(Ordinal::zero(), |acc, b| acc.add(&seq_len(b)))
            .mul_omega(),
    }
}

// ---------------------------------------------------------------------------
// Positions and cursors
// ---------------------------------------------------------------------------

/// One step of a path from the root of a term to an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PosStep {
    /// Index into a concatenation.
    Part(usize),
    /// Repetition step of an omega-iteration (block `step mod k`).
    Round(u64),
}

/// A position of the denoted sequence: the path to the atom holding its
/// letter. Positions of one term compare lexicographically along the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position(pub Vec<PosStep>);

impl Position {
    /// Order among positions of the same term.
    pub fn cmp_pos(&self, other: &Position) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            let ord = match (a, b) {
                (PosStep::Part(i), PosStep::Part(j)) => i.cmp(j),
                (PosStep::Round(s), PosStep::Round(t)) => s.cmp(t),
                _ => unreachable!("positions of one term agree on step kinds"),
            };
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        debug_assert_eq!(self.0.len(), other.0.len());
        std::cmp::Ordering::Equal
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match s {
                PosStep::Part(p) => write!(f, "p{p}")?,
                PosStep::Round(r) => write!(f, "r{r}")?,
            }
        }
        write!(f, "]")
    }
}

fn descend_first(term: &SeqTerm, path: &mut Vec<PosStep>) {
    match term {
        SeqTerm::Atom(_) => {}
        SeqTerm::Cat(parts) => {
            path.push(PosStep::Part(0));
            descend_first(&parts[0], path);
        }
        SeqTerm::Rep(blocks) => {
            path.push(PosStep::Round(0));
            descend_first(&blocks[0], path);
        }
    }
}

fn first_position(term: &SeqTerm) -> Position {
    let mut path = Vec::new();
    descend_first(term, &mut path);
    Position(path)
}

fn subterm_at<'t>(term: &'t SeqTerm, path: &[PosStep]) -> &'t SeqTerm {
    match path.split_first() {
        None => term,
        Some((step, rest)) => match (term, step) {
            (SeqTerm::Cat(parts), PosStep::Part(i)) => subterm_at(&parts[*i], rest),
            (SeqTerm::Rep(blocks), PosStep::Round(s)) => {
                subterm_at(&blocks[(*s % blocks.len() as u64) as usize], rest)
            }
            _ => unreachable!("path does not match term shape"),
        },
    }
}

fn letter_at<'t>(term: &'t SeqTerm, pos: &Position) -> &'t Element {
    match subterm_at(term, &pos.0) {
        SeqTerm::Atom(e) => e,
        _ => unreachable!("position must end at an atom"),
    }
}

/// Successor position considering only the first `upto` path steps: the
/// deepest frame among them that can advance does, everything below starts
/// fresh. `upto = len` gives the ordinary successor; smaller values realize
/// the limit jump past an exhausted iteration frame.
fn advance_upto(term: &SeqTerm, pos: &Position, upto: usize) -> Option<Position> {
    for depth in (0..upto).rev() {
        let prefix = &pos.0[..depth];
        let node = subterm_at(term, prefix);
        match (node, pos.0[depth]) {
            (SeqTerm::Cat(parts), PosStep::Part(i)) => {
                if i + 1 < parts.len() {
                    let mut path = prefix.to_vec();
                    path.push(PosStep::Part(i + 1));
                    descend_first(&parts[i + 1], &mut path);
                    return Some(Position(path));
                }
            }
            (SeqTerm::Rep(blocks), PosStep::Round(s)) => {
                let mut path = prefix.to_vec();
                path.push(PosStep::Round(s + 1));
                descend_first(&blocks[((s + 1) % blocks.len() as u64) as usize], &mut path);
                return Some(Position(path));
            }
            _ => unreachable!("path does not match term shape"),
        }
    }
    None
}

fn advance(term: &SeqTerm, pos: &Position) -> Option<Position> {
    advance_upto(term, pos, pos.0.len())
}

/// Least position at or after `from` whose letter dominates `letter`, if
/// any. `from = None` scans the whole term. Inside an omega-iteration a
/// match exists iff the remainder of the current block or any block
/// contains one, so the recursion is finite.
fn scan_from(
    qo: &Qo,
    term: &SeqTerm,
    from: Option<&[PosStep]>,
    letter: &Element,
) -> Option<Vec<PosStep>> {
    match term {
        SeqTerm::Atom(e) => qo.leq_ok(letter, e).then(Vec::new),
        SeqTerm::Cat(parts) => {
            let (start, inner) = match from {
                None => (0, None),
                Some([PosStep::Part(i), rest @ ..]) => (*i, Some(rest)),
                _ => unreachable!("path does not match term shape"),
            };
            for j in start..parts.len() {
                let f = if j == start { inner } else { None };
                if let Some(mut tail) = scan_from(qo, &parts[j], f, letter) {
                    let mut path = vec![PosStep::Part(j)];
                    path.append(&mut tail);
                    return Some(path);
                }
            }
            None
        }
        SeqTerm::Rep(blocks) => {
            let k = blocks.len() as u64;
            let (s, inner) = match from {
                None => (0, None),
                Some([PosStep::Round(s), rest @ ..]) => (*s, Some(rest)),
                _ => unreachable!("path does not match term shape"),
            };
            if let Some(mut tail) = scan_from(qo, &blocks[(s % k) as usize], inner, letter) {
                let mut path = vec![PosStep::Round(s)];
                path.append(&mut tail);
                return Some(path);
            }
            for d in 1..=k {
                if let Some(mut tail) =
                    scan_from(qo, &blocks[((s + d) % k) as usize], None, letter)
                {
                    let mut path = vec![PosStep::Round(s + d)];
                    path.append(&mut tail);
                    return Some(path);
                }
            }
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Embeddability
// ---------------------------------------------------------------------------

/// One accelerated limit step: the cursor pair cycled between these
/// snapshots and the run skipped past the iteration frames that diverged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopNote {
    pub u_from: Position,
    pub u_to: Position,
    pub v_from: Position,
    pub v_to: Position,
}

/// Certificate for a positive embeddability verdict: explicitly matched
/// position pairs, plus the accelerations taken through periodic parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedWitness {
    pub weak: bool,
    pub pairs: Vec<(Position, Position)>,
    pub loops: Vec<LoopNote>,
}

/// Outcome of an embeddability query.
#[derive(Debug, Clone, Serialize)]
pub enum EmbedResult {
    Embeds(EmbedWitness),
    /// The greedy embedding ran out of target positions while this source
    /// position was still unmatched.
    Refuted { stuck_at: Position },
}

impl EmbedResult {
    pub fn holds(&self) -> bool {
        matches!(self, EmbedResult::Embeds(_))
    }
}

/// Validates a witness against the terms: matched letters must be dominated
/// and positions must increase strictly (non-strictly on the target side
/// for weak witnesses).
pub fn validate_witness(
    qo: &Qo,
    u: &SeqTerm,
    v: &SeqTerm,
    w: &EmbedWitness,
) -> Result<()> {
    for (pu, pv) in &w.pairs {
        let lu = letter_at(u, pu);
        let lv = letter_at(v, pv);
        if !qo.leq(lu, lv)? {
            return Err(Error::InvalidInput(format!(
                "witness pair {pu} -> {pv} does not satisfy the order"
            )));
        }
    }
    for pair in w.pairs.windows(2) {
        let (pu0, pv0) = &pair[0];
        let (pu1, pv1) = &pair[1];
        if pu0.cmp_pos(pu1) != std::cmp::Ordering::Less {
            return Err(Error::InvalidInput("source positions not increasing".into()));
        }
        let vord = pv0.cmp_pos(pv1);
        let ok = if w.weak {
            vord != std::cmp::Ordering::Greater
        } else {
            vord == std::cmp::Ordering::Less
        };
        if !ok {
            return Err(Error::InvalidInput("target positions not increasing".into()));
        }
    }
    Ok(())
}

/// Decides whether `u` (weakly) embeds into `v`, with a checkable witness
/// on success.
pub fn embeds(qo: &Qo, u: &SeqTerm, v: &SeqTerm, weak: bool) -> Result<EmbedResult> {
    u.validate(qo)?;
    v.validate(qo)?;
    Ok(embeds_ok(qo, u, v, weak))
}

pub fn embeds_bool(qo: &Qo, u: &SeqTerm, v: &SeqTerm, weak: bool) -> Result<bool> {
    Ok(embeds(qo, u, v, weak)?.holds())
}

pub(crate) fn embeds_ok(qo: &Qo, u: &SeqTerm, v: &SeqTerm, weak: bool) -> EmbedResult {
    if let (Some(uw), Some(vw)) = (u.as_word(), v.as_word()) {
        return embed_words(qo, u, v, &uw, &vw, weak);
    }
    embed_machine(qo, u, v, weak)
}

/// Greedy subsequence matching on finite words, the classical special case.
fn embed_words(
    qo: &Qo,
    u: &SeqTerm,
    v: &SeqTerm,
    uw: &[&Element],
    vw: &[&Element],
    weak: bool,
) -> EmbedResult {
    let upos = |i: usize| match u {
        SeqTerm::Atom(_) => Position(vec![]),
        _ => Position(vec![PosStep::Part(i)]),
    };
    let vpos = |j: usize| match v {
        SeqTerm::Atom(_) => Position(vec![]),
        _ => Position(vec![PosStep::Part(j)]),
    };
    let mut pairs = Vec::new();
    let mut j = 0usize;
    for (i, letter) in uw.iter().enumerate() {
        while j < vw.len() && !qo.leq_ok(letter, vw[j]) {
            j += 1;
        }
        if j == vw.len() {
            return EmbedResult::Refuted { stuck_at: upos(i) };
        }
        pairs.push((upos(i), vpos(j)));
        if !weak {
            j += 1;
        }
    }
    EmbedResult::Embeds(EmbedWitness {
        weak,
        pairs,
        loops: Vec::new(),
    })
}

/// Abstraction of a cursor pair: path shapes with iteration steps reduced
/// modulo their block counts. Equal abstractions evolve identically up to a
/// step shift, which is what justifies the limit acceleration.
fn abstract_key(u: &SeqTerm, up: &Position, v: &SeqTerm, vp: &Position) -> Vec<u64> {
    let mut key = Vec::with_capacity(up.0.len() * 2 + vp.0.len() * 2 + 1);
    let push_path = |term: &SeqTerm, pos: &Position, key: &mut Vec<u64>| {
        let mut node = term;
        for step in &pos.0 {
            match (node, step) {
                (SeqTerm::Cat(parts), PosStep::Part(i)) => {
                    key.push(0);
                    key.push(*i as u64);
                    node = &parts[*i];
                }
                (SeqTerm::Rep(blocks), PosStep::Round(s)) => {
                    let k = blocks.len() as u64;
                    key.push(1);
                    key.push(s % k);
                    node = &blocks[(s % k) as usize];
                }
                _ => unreachable!("path does not match term shape"),
            }
        }
    };
    push_path(u, up, &mut key);
    key.push(u64::MAX);
    push_path(v, vp, &mut key);
    key
}

/// First path index where two shape-equal positions differ.
fn outermost_divergence(old: &Position, new: &Position) -> Option<usize> {
    old.0
        .iter()
        .zip(new.0.iter())
        .position(|(a, b)| a != b)
}

/// Cursor-pair state machine for terms with omega-iterations.
fn embed_machine(qo: &Qo, u: &SeqTerm, v: &SeqTerm, weak: bool) -> EmbedResult {
    let mut ucur = Some(first_position(u));
    let mut vcur = Some(first_position(v));
    let mut seen: HashMap<Vec<u64>, (Position, Position)> = HashMap::new();
    let mut pairs = Vec::new();
    let mut loops = Vec::new();

    // Generous bound on machine steps; the abstract state space is finite
    // and every step advances a cursor, so exhausting this means a bug.
    let mut fuel: u64 = 2_000_000;

    loop {
        fuel -= 1;
        assert!(fuel > 0, "embeds state machine exceeded its step budget");
        let Some(up) = ucur.clone() else {
            return EmbedResult::Embeds(EmbedWitness { weak, pairs, loops });
        };
        let Some(vp) = vcur.clone() else {
            return EmbedResult::Refuted { stuck_at: up };
        };

        let key = abstract_key(u, &up, v, &vp);
        if let Some((u0, v0)) = seen.get(&key) {
            // The configuration repeats: iterating the cycle omega times
            // drives every diverged iteration frame to its limit. The
            // outermost diverged frame dominates; both cursors move past
            // theirs (a cursor with no diverged frame stands still).
            let du = outermost_divergence(u0, &up);
            let dv = outermost_divergence(v0, &vp);
            let note = LoopNote {
                u_from: u0.clone(),
                u_to: up.clone(),
                v_from: v0.clone(),
                v_to: vp.clone(),
            };
            match (du, dv) {
                (Some(fu), dv) => {
                    ucur = advance_upto(u, &up, fu);
                    if let Some(fv) = dv {
                        vcur = advance_upto(v, &vp, fv);
                    }
                }
                (None, Some(fv)) => {
                    // No source progress in the cycle: the current letter
                    // can never match inside the cycling region, skip it.
                    vcur = advance_upto(v, &vp, fv);
                }
                (None, None) => unreachable!("identical states cannot recur"),
            }
            loops.push(note);
            continue;
        }
        seen.insert(key, (up.clone(), vp.clone()));

        let letter = letter_at(u, &up);
        match scan_from(qo, v, Some(&vp.0), letter) {
            None => return EmbedResult::Refuted { stuck_at: up },
            Some(path) => {
                let matched = Position(path);
                pairs.push((up.clone(), matched.clone()));
                ucur = advance(u, &up);
                vcur = if weak {
                    Some(matched)
                } else {
                    advance(v, &matched)
                };
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Tails
// ---------------------------------------------------------------------------

fn rotate(blocks: &[SeqTerm], j: usize) -> Vec<SeqTerm> {
    let k = blocks.len();
    let j = j % k;
    blocks[j..].iter().chain(blocks[..j].iter()).cloned().collect()
}

/// The tail of the denoted sequence starting at position `gamma`.
pub fn tail_at(u: &SeqTerm, gamma: &Ordinal) -> Result<SeqTerm> {
    if gamma.is_zero() {
        return Ok(u.clone());
    }
    match u {
        SeqTerm::Atom(_) => Err(Error::OutOfRange),
        SeqTerm::Cat(parts) => {
            let mut rem = gamma.clone();
            for (idx, p) in parts.iter().enumerate() {
                let len = seq_len(p);
                if rem.cmp_ord(&len) == std::cmp::Ordering::Less {
                    let inner = tail_at(p, &rem)?;
                    let mut rest = vec![inner];
                    rest.extend(parts[idx + 1..].iter().cloned());
                    return SeqTerm::cat(rest);
                }
                rem = len.left_sub(&rem).ok_or(Error::CutNotRepresentable)?;
            }
            Err(Error::OutOfRange)
        }
        SeqTerm::Rep(blocks) => {
            let round = blocks
                .iter()
                .fold(Ordinal::zero(), |acc, b| acc.add(&seq_len(b)));
            if gamma.cmp_ord(&seq_len(u)) != std::cmp::Ordering::Less {
                return Err(Error::OutOfRange);
            }
            // Position inside round m at offset rem; rounds always start at
            // block zero.
            let mut m = 0u64;
            while round
                .mul_nat(m + 1)
                .cmp_ord(gamma)
                .is_le()
            {
                m += 1;
            }
            let mut rem = if m == 0 {
                gamma.clone()
            } else {
                round
                    .mul_nat(m)
                    .left_sub(gamma)
                    .ok_or(Error::CutNotRepresentable)?
            };
            for (j, b) in blocks.iter().enumerate() {
                if rem.is_zero() {
                    return SeqTerm::rep(rotate(blocks, j));
                }
                let len = seq_len(b);
                if rem.cmp_ord(&len) == std::cmp::Ordering::Less {
                    let inner = tail_at(b, &rem)?;
                    return SeqTerm::cat(vec![inner, SeqTerm::Rep(rotate(blocks, j + 1))]);
                }
                rem = len.left_sub(&rem).ok_or(Error::CutNotRepresentable)?;
            }
            Err(Error::CutNotRepresentable)
        }
    }
}

/// The finitely many tail classes of a regular term (including the term
/// itself). Tails of an omega-iteration repeat with its round, so rotations
/// and within-round cuts cover every class.
pub fn tail_classes(u: &SeqTerm) -> Vec<SeqTerm> {
    let mut out = vec![u.clone()];
    let push = |t: SeqTerm, out: &mut Vec<SeqTerm>| {
        if !out.contains(&t) {
            out.push(t);
        }
    };
    match u {
        SeqTerm::Atom(_) => {}
        SeqTerm::Cat(parts) => {
            for i in 0..parts.len() {
                for t in tail_classes(&parts[i]) {
                    let mut v = vec![t];
                    v.extend(parts[i + 1..].iter().cloned());
                    push(SeqTerm::cat(v).expect("nonempty"), &mut out);
                }
            }
        }
        SeqTerm::Rep(blocks) => {
            for j in 0..blocks.len() {
                push(
                    SeqTerm::rep(rotate(blocks, j)).expect("nonempty"),
                    &mut out,
                );
                for t in tail_classes(&blocks[j]) {
                    if t != blocks[j] {
                        let cont = SeqTerm::Rep(rotate(blocks, j + 1));
                        push(SeqTerm::cat(vec![t, cont]).expect("nonempty"), &mut out);
                    }
                }
            }
        }
    }
    out
}

/// A term is indecomposable when it embeds into all of its tails.
pub fn is_indecomposable(qo: &Qo, u: &SeqTerm, weak: bool) -> Result<bool> {
    u.validate(qo)?;
    for t in tail_classes(u) {
        if !embeds_ok(qo, u, &t, weak).holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits a term into indecomposable summands, taking maximal
/// indecomposable suffixes from the right.
pub fn decompose(qo: &Qo, u: &SeqTerm, weak: bool) -> Result<Vec<SeqTerm>> {
    if is_indecomposable(qo, u, weak)? {
        return Ok(vec![u.clone()]);
    }
    let SeqTerm::Cat(parts) = u else {
        unreachable!("atoms and omega-iterations are indecomposable");
    };
    for j in 1..parts.len() {
        let suffix = SeqTerm::cat(parts[j..].to_vec())?;
        if is_indecomposable(qo, &suffix, weak)? {
            let prefix = SeqTerm::cat(parts[..j].to_vec())?;
            let mut out = decompose(qo, &prefix, weak)?;
            out.push(suffix);
            return Ok(out);
        }
    }
    unreachable!("the last part alone is indecomposable");
}

/// Direct decision of cofinal embeddability by searching tail classes: for
/// every tail of `v` some tail of `u` must embed into it.
pub fn cofembeds_by_tails(qo: &Qo, u: &SeqTerm, v: &SeqTerm, weak: bool) -> Result<bool> {
    u.validate(qo)?;
    v.validate(qo)?;
    let utails = tail_classes(u);
    for vt in tail_classes(v) {
        let mut some = false;
        for ut in &utails {
            if embeds_ok(qo, ut, &vt, weak).holds() {
                some = true;
                break;
            }
        }
        if !some {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Term enumeration
// ---------------------------------------------------------------------------

/// Enumerates regular terms over a finite order by size (node count), then
/// lexicographically: atoms, then concatenations, then iterations. `depth`
/// bounds the nesting (atoms are depth zero), `max_blocks` the block count
/// of iterations.
pub fn enumerate_terms(
    qo: &Qo,
    max_depth: usize,
    max_blocks: usize,
    count: usize,
) -> Result<Vec<SeqTerm>> {
    let atoms = qo.all_elements()?;
    let mut out = Vec::new();
    let mut size = 1usize;
    while out.len() < count && size < 64 {
        let terms = terms_of_size(&atoms, size, max_depth, max_blocks, false);
        for t in terms {
            out.push(t);
            if out.len() == count {
                break;
            }
        }
        size += 1;
    }
    Ok(out)
}

/// All terms of exactly `size` nodes. `inside_cat` suppresses nested
/// concatenations (they are flattened away).
fn terms_of_size(
    atoms: &[Element],
    size: usize,
    max_depth: usize,
    max_blocks: usize,
    inside_cat: bool,
) -> Vec<SeqTerm> {
    let mut out = Vec::new();
    if size == 1 {
        out.extend(atoms.iter().cloned().map(SeqTerm::Atom));
        return out;
    }
    if max_depth == 0 {
        return out;
    }
    if !inside_cat {
        // Concatenations of at least two parts, none a concatenation.
        for parts in compositions(size - 1, 2, size - 1) {
            let mut choices: Vec<Vec<SeqTerm>> = Vec::new();
            for s in &parts {
                choices.push(terms_of_size(atoms, *s, max_depth - 1, max_blocks, true));
            }
            product_into(&choices, &mut |sel| {
                out.push(SeqTerm::Cat(sel.to_vec()));
            });
        }
    }
    // Omega-iterations with at most `max_blocks` blocks.
    for blocks in compositions(size - 1, 1, max_blocks) {
        let mut choices: Vec<Vec<SeqTerm>> = Vec::new();
        for s in &blocks {
            choices.push(terms_of_size(atoms, *s, max_depth - 1, max_blocks, false));
        }
        product_into(&choices, &mut |sel| {
            out.push(SeqTerm::Rep(sel.to_vec()));
        });
    }
    out
}

/// Ways to write `total` as an ordered sum of between `min_parts` and
/// `max_parts` positive integers.
fn compositions(total: usize, min_parts: usize, max_parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        rem: usize,
        min_parts: usize,
        max_parts: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rem == 0 {
            if current.len() >= min_parts {
                out.push(current.clone());
            }
            return;
        }
        if current.len() == max_parts {
            return;
        }
        for first in 1..=rem {
            current.push(first);
            rec(rem - first, min_parts, max_parts, current, out);
            current.pop();
        }
    }
    rec(total, min_parts, max_parts, &mut current, &mut out);
    out
}

fn product_into(choices: &[Vec<SeqTerm>], f: &mut impl FnMut(&[SeqTerm])) {
    fn rec(choices: &[Vec<SeqTerm>], acc: &mut Vec<SeqTerm>, f: &mut impl FnMut(&[SeqTerm])) {
        if choices.is_empty() {
            f(acc);
            return;
        }
        for c in &choices[0] {
            acc.push(c.clone());
            rec(&choices[1..], acc, f);
            acc.pop();
        }
    }
    rec(choices, &mut Vec::new(), f);
}
