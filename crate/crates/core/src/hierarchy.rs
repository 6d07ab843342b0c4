//! Finite hereditary set terms over the points of a quasi-order, the two
//! recursive comparisons on them, and the unwinding of bad sequences into
//! bad arrays.
//!
//! A `VTerm` is either an urelement or a nonempty finite set of terms; no
//! empty set appears anywhere in the transitive closure. Terms are kept in
//! canonical form: members sorted by the syntactic order and deduplicated.
//! Canonicalization does not quotient by the semantic equivalences; use
//! `sim_equiv` for those.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::barrier::{triangleleft, Tuple};
use crate::downset::CoUpset;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::qo::{enum_order, Element, Qo};

/// A hereditary set term: an urelement or a nonempty canonical set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VTerm {
    Ur(Element),
    Set(Vec<VTerm>),
}

impl VTerm {
    pub fn ur(e: Element) -> VTerm {
        VTerm::Ur(e)
    }

    /// Builds a set term; members are sorted and deduplicated. Empty sets
    /// are rejected.
    pub fn set(mut members: Vec<VTerm>) -> Result<VTerm> {
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        members.sort();
        members.dedup();
        Ok(VTerm::Set(members))
    }

    pub fn is_set(&self) -> bool {
        matches!(self, VTerm::Set(_))
    }

    pub fn members(&self) -> &[VTerm] {
        match self {
            VTerm::Ur(_) => &[],
            VTerm::Set(ms) => ms,
        }
    }

    /// Checks that every urelement belongs to `qo` and that the term is in
    /// canonical form with no empty set.
    pub fn validate(&self, qo: &Qo) -> Result<()> {
        match self {
            VTerm::Ur(e) => qo.validate(e),
            VTerm::Set(ms) => {
                if ms.is_empty() {
                    return Err(Error::EmptySet);
                }
                if !ms.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::InvalidInput("set members not canonical".into()));
                }
                ms.iter().try_for_each(|m| m.validate(qo))
            }
        }
    }
}

/// The rank used for the hierarchy levels: defined on set terms only, with
/// urelement members ignored, so that `rk({q}) = 0`.
pub fn v_rank(x: &VTerm) -> Result<u64> {
    match x {
        VTerm::Ur(_) => Err(Error::RankOnUrelement),
        VTerm::Set(ms) => Ok(ms
            .iter()
            .filter(|m| m.is_set())
            .map(|m| v_rank(m).expect("set member") + 1)
            .max()
            .unwrap_or(0)),
    }
}

/// The urelements occurring anywhere in the term.
pub fn supp(x: &VTerm) -> Vec<Element> {
    let mut out = Vec::new();
    fn walk(x: &VTerm, out: &mut Vec<Element>) {
        match x {
            VTerm::Ur(e) => {
                if !out.contains(e) {
                    out.push(e.clone());
                }
            }
            VTerm::Set(ms) => ms.iter().for_each(|m| walk(m, out)),
        }
    }
    walk(x, &mut out);
    out
}

/// The two recursive comparisons. `starred = false` gives the strict
/// variant, where a set is never below an urelement; `starred = true`
/// allows it through the singleton embedding.
pub fn lesssim(qo: &Qo, x: &VTerm, y: &VTerm, starred: bool) -> bool {
    match (x, y) {
        (VTerm::Ur(a), VTerm::Ur(b)) => qo.leq_ok(a, b),
        (VTerm::Set(ms), VTerm::Ur(_)) => {
            starred && ms.iter().all(|m| lesssim(qo, m, y, starred))
        }
        (VTerm::Ur(_), VTerm::Set(ns)) => ns.iter().any(|n| lesssim(qo, x, n, starred)),
        (VTerm::Set(ms), VTerm::Set(ns)) => ms
            .iter()
            .all(|m| ns.iter().any(|n| lesssim(qo, m, n, starred))),
    }
}

/// Equivalence induced by `lesssim` in both directions.
pub fn sim_equiv(qo: &Qo, x: &VTerm, y: &VTerm, starred: bool) -> bool {
    lesssim(qo, x, y, starred) && lesssim(qo, y, x, starred)
}

/// Finite surrogate of an infinite downset: the set of its members among
/// the first `bound` enumerated points of the base.
pub fn truncate_downset(d: &CoUpset, bound: u64) -> Result<VTerm> {
    let mut members = Vec::new();
    for i in 0..bound {
        let e = d.base.enumerate(i)?;
        if d.member_ok(&e) {
            members.push(VTerm::Ur(e));
        }
    }
    if members.is_empty() {
        return Err(Error::EmptyDenotation(format!(
            "no members among the first {bound} enumerated elements"
        )));
    }
    VTerm::set(members)
}

/// First ascending pair `i < j` with `f(i)` below `f(j)`, or `None` when
/// the prefix is bad.
pub fn find_good_pair(
    qo: &Qo,
    prefix: &[VTerm],
    starred: bool,
) -> Option<(usize, usize)> {
    for i in 0..prefix.len() {
        for j in (i + 1)..prefix.len() {
            if lesssim(qo, &prefix[i], &prefix[j], starred) {
                return Some((i, j));
            }
        }
    }
    None
}

/// True iff no ascending pair exists.
pub fn check_bad_prefix(qo: &Qo, prefix: &[VTerm], starred: bool) -> bool {
    find_good_pair(qo, prefix, starred).is_none()
}

/// A bad array computed on a finite fragment: the minimal tuples whose
/// recursion already landed in the target order, with their values.
#[derive(Debug, Clone)]
pub struct PartialArray {
    /// The order the values live in: `base x omega` for the strict variant,
    /// the base itself for the starred one.
    pub qo: Qo,
    pub domain: Vec<Tuple>,
    pub values: BTreeMap<Tuple, Element>,
    /// Intended bound on the front rank, derived from the term ranks.
    pub rank_note: Ordinal,
}

impl Serialize for PartialArray {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PartialArray", 4)?;
        st.serialize_field("front", &self.domain)?;
        let values: BTreeMap<String, &Element> = self
            .values
            .iter()
            .map(|(k, v)| (crate::barrier::tuple_key(k), v))
            .collect();
        st.serialize_field("values", &values)?;
        st.serialize_field("value_qo", &self.qo)?;
        st.serialize_field("rank_note", &self.rank_note)?;
        st.end()
    }
}

impl PartialArray {
    /// Re-verifies badness on every step pair inside the domain.
    pub fn verify_badness(&self) -> Result<()> {
        for sigma in &self.domain {
            for tau in &self.domain {
                if !triangleleft(sigma, tau)? {
                    continue;
                }
                let vs = &self.values[sigma];
                let vt = &self.values[tau];
                if self.qo.leq(vs, vt)? {
                    return Err(Error::InvalidInput(format!(
                        "array not bad: {vs} <= {vt} at {sigma:?}, {tau:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Intermediate value of the unwinding recursion.
#[derive(Debug, Clone, PartialEq)]
enum HValue {
    /// Landed in the target order: `(q, level)` for the strict variant,
    /// `(q, 0)` unused level for the starred one.
    Landed(Element, u64),
    /// Still a set term.
    Term(VTerm),
}

/// Unwinds a bad prefix of hereditary terms into a bad array over
/// `base x omega` (strict) or the base itself (starred).
///
/// The recursion follows five clauses on strictly increasing index tuples:
/// values propagate once they land in the target order; otherwise a support
/// witness or a set member failing the comparison against the shifted tuple
/// is chosen, least in the enumeration order of the support respectively the
/// canonical member order. The minimal landed tuples form the front; on the
/// returned fragment badness is re-verified, since truncation could in
/// principle destroy clause applicability.
pub fn unwind(
    qo: &Qo,
    bad_prefix: &[VTerm],
    depth: usize,
    starred: bool,
) -> Result<PartialArray> {
    for t in bad_prefix {
        t.validate(qo)?;
    }
    if let Some((i, j)) = find_good_pair(qo, bad_prefix, starred) {
        return Err(Error::NotBad(i, j));
    }
    if depth == 0 || bad_prefix.is_empty() {
        return Err(Error::InvalidInput("empty prefix or zero depth".into()));
    }

    let mut h: BTreeMap<Tuple, HValue> = BTreeMap::new();
    let n = bad_prefix.len() as u64;

    for (i, term) in bad_prefix.iter().enumerate() {
        let v = match term {
            VTerm::Ur(q) => HValue::Landed(q.clone(), 0),
            set => HValue::Term(set.clone()),
        };
        h.insert(vec![i as u64], v);
    }

    for len in 2..=depth {
        for sigma in increasing_tuples(n, len) {
            let prev = h[&sigma[..len - 1].to_vec()].clone();
            let shifted = h[&sigma[1..].to_vec()].clone();
            let k = (len - 1) as u64;
            let value = step_clauses(qo, &prev, &shifted, k, starred)?;
            h.insert(sigma, value);
        }
    }

    // The front: minimal tuples that landed. Propagation (clause three)
    // makes every extension land too, so minimality means the proper
    // prefixes are still set terms.
    let value_qo = if starred {
        qo.clone()
    } else {
        Qo::product(qo.clone(), Qo::Omega)
    };
    let mut domain = Vec::new();
    let mut values = BTreeMap::new();
    for (sigma, v) in &h {
        let HValue::Landed(q, lvl) = v else { continue };
        let parent_landed = sigma.len() > 1
            && matches!(h[&sigma[..sigma.len() - 1].to_vec()], HValue::Landed(..));
        if parent_landed {
            continue;
        }
        let value = if starred {
            q.clone()
        } else {
            Element::tuple(q.clone(), Element::Nat(*lvl))
        };
        domain.push(sigma.clone());
        values.insert(sigma.clone(), value);
    }

    let max_rank = bad_prefix
        .iter()
        .filter_map(|t| v_rank(t).ok())
        .max()
        .map(|r| r + 1)
        .unwrap_or(0);
    let array = PartialArray {
        qo: value_qo,
        domain,
        values,
        rank_note: Ordinal::from_nat(max_rank),
    };
    array.verify_badness()?;
    verify_rank_note(&h, max_rank)?;
    Ok(array)
}

/// Applies the recursion clauses to one tuple extension.
fn step_clauses(
    qo: &Qo,
    prev: &HValue,
    shifted: &HValue,
    k: u64,
    starred: bool,
) -> Result<HValue> {
    // Propagation: previously landed values carry over unchanged.
    if let HValue::Landed(q, lvl) = prev {
        return Ok(HValue::Landed(q.clone(), *lvl));
    }
    let HValue::Term(prev_term) = prev else {
        unreachable!()
    };

    // Support witness: an urelement of the support that the shifted value
    // does not dominate. Always applicable when the shifted value has
    // already landed, where the comparison is undefined.
    let mut support = supp(prev_term);
    support.sort_by(|a, b| enum_order(qo, a, b));
    for q in &support {
        let blocked = match shifted {
            HValue::Landed(..) if !starred => false,
            HValue::Landed(p, _) => lesssim(qo, &VTerm::Ur(q.clone()), &VTerm::Ur(p.clone()), true),
            HValue::Term(t) => lesssim(qo, &VTerm::Ur(q.clone()), t, starred),
        };
        if !blocked {
            return Ok(HValue::Landed(q.clone(), k));
        }
    }

    // Set member failing the comparison against every member of the shifted
    // value. Reached only when the shifted value is still a set.
    let HValue::Term(shifted_term) = shifted else {
        return Err(Error::TruncationTooSmall);
    };
    for x in prev_term.members() {
        if !starred && !x.is_set() {
            continue;
        }
        let dominated = shifted_term
            .members()
            .iter()
            .any(|y| lesssim(qo, x, y, starred));
        if !dominated {
            return Ok(HValue::Term(x.clone()));
        }
    }
    Err(Error::TruncationTooSmall)
}

/// The intended rank bound must dominate the term rank at every still-set
/// tuple (dropping by at least one per index), and the rank must strictly
/// decrease along extension.
fn verify_rank_note(h: &BTreeMap<Tuple, HValue>, bound: u64) -> Result<()> {
    for (sigma, v) in h {
        let HValue::Term(t) = v else { continue };
        let r = v_rank(t)?;
        if r + sigma.len() as u64 > bound {
            return Err(Error::InvalidInput(format!(
                "rank note violated at {sigma:?}: term rank {r} against bound {bound}"
            )));
        }
        if sigma.len() > 1 {
            if let HValue::Term(parent) = &h[&sigma[..sigma.len() - 1].to_vec()] {
                if v_rank(parent)? <= r {
                    return Err(Error::InvalidInput(format!(
                        "term rank not decreasing at {sigma:?}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Strictly increasing tuples of the given length over `0..n`.
pub fn increasing_tuples(n: u64, len: usize) -> Vec<Tuple> {
    crate::barrier::k_subsets(&(0..n).collect::<Vec<_>>(), len)
}
