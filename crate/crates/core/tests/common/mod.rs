//! Shared oracles and universe generators for the integration suites.
//!
//! Everything here is deliberately independent of the implementation paths
//! it checks: the word oracle is a dynamic program, downset membership is
//! evaluated from the generator formula directly, and the universes are
//! plain recursive enumerations.

#![allow(dead_code)]

use bqo::{Element, Qo, SeqTerm, VTerm};
use rand::Rng;

/// Reusable state for the dynamic-programming subsequence oracle. Words
/// are letter indices into the order's element list, the order itself a
/// plain boolean matrix, so the oracle shares no code path with the
/// implementation it checks.
pub struct WordOracle {
    pub leq: Vec<Vec<bool>>,
    row: Vec<bool>,
    next: Vec<bool>,
}

impl WordOracle {
    pub fn new(qo: &Qo) -> WordOracle {
        let atoms = qo.all_elements().unwrap();
        let leq = atoms
            .iter()
            .map(|a| atoms.iter().map(|b| qo.leq(a, b).unwrap()).collect())
            .collect();
        WordOracle {
            leq,
            row: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Does `u` embed into `v` with a strictly (weak: non-strictly)
    /// increasing position map?
    pub fn embeds(&mut self, u: &[u8], v: &[u8], weak: bool) -> bool {
        let m = v.len();
        self.next.clear();
        self.next.resize(m + 1, true);
        self.row.clear();
        self.row.resize(m + 1, false);
        for &ul in u.iter().rev() {
            let dom = &self.leq[ul as usize];
            self.row[m] = false;
            for j in (0..m).rev() {
                let cont = if weak { self.next[j] } else { self.next[j + 1] };
                self.row[j] = (dom[v[j] as usize] && cont) || self.row[j + 1];
            }
            std::mem::swap(&mut self.next, &mut self.row);
        }
        self.next[0]
    }
}

/// All words over an `n`-letter alphabet of length 1..=max_len, as letter
/// index vectors, in length-then-lexicographic order.
pub fn index_words_up_to(n: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = Vec::new();
    let mut current: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(current.len() * n as usize);
        for w in &current {
            for a in 0..n {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

pub fn word_term(atoms: &[Element], letters: &[u8]) -> SeqTerm {
    if letters.len() == 1 {
        return SeqTerm::Atom(atoms[letters[0] as usize].clone());
    }
    SeqTerm::cat(
        letters
            .iter()
            .map(|&l| SeqTerm::Atom(atoms[l as usize].clone()))
            .collect(),
    )
    .unwrap()
}

/// Exhaustive universe of hereditary terms of nesting depth at most
/// `max_depth` and member width at most `max_width`.
pub fn vterm_universe(qo: &Qo, max_depth: usize, max_width: usize) -> Vec<VTerm> {
    let mut pool: Vec<VTerm> = qo
        .all_elements()
        .unwrap()
        .into_iter()
        .map(VTerm::Ur)
        .collect();
    for _ in 0..max_depth {
        let mut next = pool.clone();
        for subset in nonempty_subsets(&pool, max_width) {
            let t = VTerm::set(subset).unwrap();
            if !next.contains(&t) {
                next.push(t);
            }
        }
        pool = next;
    }
    pool
}

fn nonempty_subsets(pool: &[VTerm], max_width: usize) -> Vec<Vec<VTerm>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        pool: &[VTerm],
        start: usize,
        max_width: usize,
        current: &mut Vec<VTerm>,
        out: &mut Vec<Vec<VTerm>>,
    ) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if current.len() == max_width {
            return;
        }
        for i in start..pool.len() {
            current.push(pool[i].clone());
            rec(pool, i + 1, max_width, current, out);
            current.pop();
        }
    }
    rec(pool, 0, max_width, &mut current, &mut out);
    out
}

/// A random term of nesting depth at most `depth`, width at most 3.
pub fn random_vterm(rng: &mut impl Rng, atoms: &[Element], depth: usize) -> VTerm {
    if depth == 0 || rng.gen_bool(0.25) {
        return VTerm::Ur(atoms[rng.gen_range(0..atoms.len())].clone());
    }
    let width = rng.gen_range(1..=3);
    let members = (0..width)
        .map(|_| random_vterm(rng, atoms, depth - 1))
        .collect();
    VTerm::set(members).unwrap()
}

/// Truncation of the n-th Rado downset at second coordinates `<= j_cap`:
/// the enumeration prefix of length `j_cap (j_cap + 1) / 2`.
pub fn rado_trunc_prefix(count: u64, j_cap: u64) -> Vec<VTerm> {
    let bound = j_cap * (j_cap + 1) / 2;
    (1..=count)
        .map(|n| {
            bqo::truncate_downset(&bqo::rado_bad_downset(n).unwrap(), bound).unwrap()
        })
        .collect()
}

/// Brute-force membership of a Rado pair in the n-th bad downset, from the
/// closed form of the down-closure of `{(n, j) : j > n}`.
pub fn rado_member_brute(n: u64, k: u64, l: u64) -> bool {
    k == n || l < n
}

pub fn chain2() -> Qo {
    Qo::chain(2)
}

pub fn antichain2() -> Qo {
    Qo::antichain(2)
}

pub fn antichain3() -> Qo {
    Qo::antichain(3)
}

pub fn small_qos() -> Vec<(&'static str, Qo)> {
    vec![
        ("2-chain", chain2()),
        ("2-antichain", antichain2()),
        ("3-antichain", antichain3()),
    ]
}
