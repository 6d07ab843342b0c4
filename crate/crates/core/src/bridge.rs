//! The two maps between hierarchy terms and sequence terms, their round-trip
//! laws, and the winding of tame arrays into hierarchy terms.
//!
//! `iota` sends a set to the omega-iteration of its members' images, so its
//! range consists of indecomposable terms. `eta` goes back: it collects the
//! values of all nonempty initial segments of a term. On iterations every
//! block recurs, so the collected set is the same from any tail start; this
//! tail-invariance is what lets the implementation skip the minimum over
//! start positions entirely (the law is tested, not assumed).

use std::collections::BTreeSet;

use crate::barrier::TameArray;
use crate::error::{Error, Result};
use crate::hierarchy::{lesssim, sim_equiv, VTerm};
use crate::qo::Qo;
use crate::sequence::{cofembeds_by_tails, SeqTerm};

/// Hierarchy term to sequence term: urelements become atoms, sets become
/// the round-robin iteration of their members' images in canonical member
/// order.
pub fn iota(qo: &Qo, x: &VTerm) -> Result<SeqTerm> {
    x.validate(qo)?;
    Ok(iota_ok(x))
}

fn iota_ok(x: &VTerm) -> SeqTerm {
    match x {
        VTerm::Ur(e) => SeqTerm::Atom(e.clone()),
        VTerm::Set(ms) => SeqTerm::Rep(ms.iter().map(iota_ok).collect()),
    }
}

/// Sequence term to hierarchy term.
///
/// Computed through the prefix-value sets: `pe(t)` collects the values of
/// all nonempty initial segments of `t`. A term of successor length ends in
/// its last letter; a term of limit length becomes the set of its prefix
/// values, which by tail-invariance is independent of the starting point.
/// The result is canonical up to the semantic equivalence, not syntactically
/// minimal. The `starred` flag selects which equivalence downstream
/// comparisons use; the computed term is the same.
pub fn eta(qo: &Qo, u: &SeqTerm, _starred: bool) -> Result<VTerm> {
    u.validate(qo)?;
    Ok(eta_rec(u).0)
}

/// Returns `(eta(t), pe(t))`.
fn eta_rec(t: &SeqTerm) -> (VTerm, BTreeSet<VTerm>) {
    match t {
        SeqTerm::Atom(e) => {
            let v = VTerm::Ur(e.clone());
            (v.clone(), BTreeSet::from([v]))
        }
        SeqTerm::Cat(parts) => {
            let mut pe = BTreeSet::new();
            let mut last = None;
            for p in parts {
                let (e, pe_p) = eta_rec(p);
                pe.extend(pe_p);
                last = Some(e);
            }
            (last.expect("concatenation is nonempty"), pe)
        }
        SeqTerm::Rep(blocks) => {
            let mut pe = BTreeSet::new();
            for b in blocks {
                let (_, pe_b) = eta_rec(b);
                pe.extend(pe_b);
            }
            let value = VTerm::set(pe.iter().cloned().collect()).expect("blocks are nonempty");
            pe.insert(value.clone());
            (value, pe)
        }
    }
}

/// The round-trip law: `eta(iota(x))` is equivalent to `x`.
pub fn roundtrip_check(qo: &Qo, x: &VTerm, starred: bool) -> Result<bool> {
    let back = eta(qo, &iota(qo, x)?, starred)?;
    Ok(sim_equiv(qo, &back, x, starred))
}

/// Cofinal embeddability, decided through the hierarchy comparison of the
/// two `eta` values. In debug builds the verdict is cross-checked against
/// the direct search over tail classes; the two routes are also compared in
/// the test suites.
pub fn cofembeds(qo: &Qo, u: &SeqTerm, v: &SeqTerm, weak: bool) -> Result<bool> {
    let eu = eta(qo, u, weak)?;
    let ev = eta(qo, v, weak)?;
    let verdict = lesssim(qo, &eu, &ev, weak);
    debug_assert_eq!(
        verdict,
        cofembeds_by_tails(qo, u, v, weak)?,
        "eta route disagrees with tail search on {u} vs {v}"
    );
    Ok(verdict)
}

/// Winds a tame array into the hierarchy term rooted at `{n}`: tuples of
/// full front width take the array value, shorter ones collect the values
/// of their one-step extensions with entries up to `trunc`.
pub fn wind(array: &TameArray, n: u64, trunc: u64) -> Result<VTerm> {
    if !array.front.in_carrier(n) {
        return Err(Error::InvalidInput(format!("{n} outside the carrier")));
    }
    wind_rec(array, &mut vec![n], trunc)
}

fn wind_rec(array: &TameArray, sigma: &mut Vec<u64>, trunc: u64) -> Result<VTerm> {
    if sigma.len() == array.front.width {
        return Ok(VTerm::Ur(array.value(sigma)?));
    }
    let start = *sigma.last().expect("rooted at a singleton") + 1;
    let mut members = Vec::new();
    for m in start..=trunc {
        if !array.front.in_carrier(m) {
            continue;
        }
        sigma.push(m);
        members.push(wind_rec(array, sigma, trunc)?);
        sigma.pop();
    }
    if members.is_empty() {
        return Err(Error::TruncationTooSmall);
    }
    VTerm::set(members)
}
