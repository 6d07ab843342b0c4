//! Downward-closed sets as complements of finitely generated upsets.
//!
//! A `CoUpset` over a base order denotes `{p : no generator lies below p}`.
//! Inclusion between two such sets is decided exactly by the generator
//! criterion, with no search. On top of this the module builds the iterated
//! downset levels and the descending chains extracted from bad sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qo::{normalize_generators, Element, Qo};

/// A downward-closed subset of `base`, represented as the complement of the
/// upset generated by `generators`. Empty generator list denotes the full
/// set. Generators are kept normalized (dominated ones dropped, canonically
/// sorted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoUpset {
    pub base: Qo,
    pub generators: Vec<Element>,
}

impl CoUpset {
    pub fn new(base: Qo, generators: Vec<Element>) -> Result<CoUpset> {
        for g in &generators {
            base.validate(g)?;
        }
        let generators = normalize_generators(&base, generators);
        Ok(CoUpset { base, generators })
    }

    /// The full set (no generators).
    pub fn full(base: Qo) -> CoUpset {
        CoUpset {
            base,
            generators: Vec::new(),
        }
    }

    /// Membership in the denoted set.
    pub fn member(&self, p: &Element) -> Result<bool> {
        self.base.validate(p)?;
        Ok(self.member_ok(p))
    }

    pub(crate) fn member_ok(&self, p: &Element) -> bool {
        self.generators.iter().all(|g| !self.base.leq_ok(g, p))
    }

    /// The element of the next level that this set denotes.
    pub fn as_element(&self) -> Element {
        Element::Down {
            gens: self.generators.clone(),
        }
    }

    /// Searches the base enumeration for a member, scanning at most `bound`
    /// indices. Nonemptiness is only semi-decidable in general, so a `None`
    /// here is evidence, not proof. Candidates that are themselves downset
    /// elements are accepted only if they are nonempty within the same bound.
    pub fn find_member(&self, bound: u64) -> Result<Option<Element>> {
        for i in 0..bound {
            let e = match self.base.enumerate(i) {
                Ok(e) => e,
                Err(Error::EnumerationUnsupported) => return Err(Error::EnumerationUnsupported),
                Err(e) => return Err(e),
            };
            if let Element::Down { gens } = &e {
                if let Qo::Level { base } = &self.base {
                    let inner = CoUpset::new((**base).clone(), gens.clone())?;
                    if inner.find_member(bound)?.is_none() {
                        continue;
                    }
                }
            }
            if self.member_ok(&e) {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

/// Inclusion of denoted sets: `x` is contained in `y` iff every generator of
/// `y` lies above some generator of `x` (upset reversal).
pub fn couset_subset(x: &CoUpset, y: &CoUpset) -> Result<bool> {
    if x.base != y.base {
        return Err(Error::BaseMismatch);
    }
    Ok(y.generators
        .iter()
        .all(|b| x.generators.iter().any(|a| x.base.leq_ok(a, b))))
}

/// The n-th set of the level-one bad sequence over Rado's order: generators
/// `{(i,n) : i < n}`, denoting the downward closure of `{(n,j) : j > n}`.
pub fn rado_bad_downset(n: u64) -> Result<CoUpset> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "rado_bad_downset needs n >= 1: an empty generator set would denote all of Q".into(),
        ));
    }
    let gens = (0..n).map(|i| Element::pair(i, n)).collect();
    CoUpset::new(Qo::Rado, gens)
}

/// Iterates the downset-level construction `k` times over `base`.
pub fn next_level(base: &Qo, k: u32) -> Qo {
    let mut q = base.clone();
    for _ in 0..k {
        q = Qo::Level { base: Box::new(q) };
    }
    q
}

/// One certified step of a descending chain.
#[derive(Debug, Clone, Serialize)]
pub struct DescentStep {
    /// Index of the witness element in the input prefix.
    pub witness_index: usize,
    /// The witness itself: a member of the upper set that the lower one
    /// excludes.
    pub witness: Element,
}

/// A strictly descending chain of downsets over the next level, together
/// with the witnesses certifying each strict step.
#[derive(Debug, Clone)]
pub struct DescentChain {
    /// `sets[i]` excludes everything above one of the first `i+1` prefix
    /// elements.
    pub sets: Vec<CoUpset>,
    /// Witness for step `i`: `prefix[i]` belongs to `sets[i-1]` (to the full
    /// set when `i = 0`) but not to `sets[i]`.
    pub steps: Vec<DescentStep>,
}

/// Turns a bad prefix `x_0..x_{k-1}` of downsets into the descending chain
/// `y_1..y_k` over the next level, where `y_i` has generators `x_0..x_{i-1}`.
/// Strict descent is certified by exhibiting `x_i` inside `y_i` and outside
/// `y_{i+1}`; the step down from the full set is certified by `x_0`.
pub fn descend_chain(bad_prefix: &[CoUpset]) -> Result<DescentChain> {
    let Some(first) = bad_prefix.first() else {
        return Err(Error::InvalidInput("empty prefix".into()));
    };
    let base = &first.base;
    if bad_prefix.iter().any(|x| &x.base != base) {
        return Err(Error::BaseMismatch);
    }
    // Pairwise incomparability check; reflexivity makes duplicates fail too.
    for i in 0..bad_prefix.len() {
        for j in 0..bad_prefix.len() {
            if i < j && couset_subset(&bad_prefix[i], &bad_prefix[j])? {
                return Err(Error::NotBad(i, j));
            }
            if j < i && couset_subset(&bad_prefix[i], &bad_prefix[j])? {
                return Err(Error::NotBad(j, i));
            }
        }
    }
    let level = next_level(base, 1);
    let mut sets = Vec::new();
    for i in 1..=bad_prefix.len() {
        let gens = bad_prefix[..i].iter().map(|x| x.as_element()).collect();
        sets.push(CoUpset::new(level.clone(), gens)?);
    }
    let mut steps = Vec::new();
    for (i, x) in bad_prefix.iter().enumerate() {
        let e = x.as_element();
        let upper_ok = if i == 0 {
            true
        } else {
            sets[i - 1].member(&e)?
        };
        let lower_excludes = !sets[i].member(&e)?;
        if !(upper_ok && lower_excludes) {
            return Err(Error::InvalidInput(format!(
                "descent step {i} not certified"
            )));
        }
        steps.push(DescentStep {
            witness_index: i,
            witness: e,
        });
    }
    Ok(DescentChain { sets, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rado_member_brute(n: u64, k: u64, l: u64) -> bool {
        // Down-closure of {(n,j) : j > n}, in closed form.
        k == n || l < n
    }

    #[test]
    fn full_set_is_top() {
        let b2 = rado_bad_downset(2).unwrap();
        let full = CoUpset::full(Qo::Rado);
        assert!(couset_subset(&b2, &full).unwrap());
        assert!(!couset_subset(&full, &b2).unwrap());
    }

    #[test]
    fn rado_generators_and_membership() {
        let b3 = rado_bad_downset(3).unwrap();
        assert_eq!(
            b3.generators,
            vec![Element::pair(0, 3), Element::pair(1, 3), Element::pair(2, 3)]
        );
        // Denoted set agrees with the brute-force down-closure on j <= 8.
        for n in 1..=4u64 {
            let bn = rado_bad_downset(n).unwrap();
            for k in 0..8u64 {
                for l in (k + 1)..=8 {
                    assert_eq!(
                        bn.member(&Element::pair(k, l)).unwrap(),
                        rado_member_brute(n, k, l),
                        "B{n} at ({k},{l})"
                    );
                }
            }
        }
    }

    #[test]
    fn rado_b2_truncation() {
        let b2 = rado_bad_downset(2).unwrap();
        let mut members = Vec::new();
        for k in 0..5u64 {
            for l in (k + 1)..=5 {
                if b2.member(&Element::pair(k, l)).unwrap() {
                    members.push(Element::pair(k, l));
                }
            }
        }
        members.sort();
        assert_eq!(
            members,
            vec![
                Element::pair(0, 1),
                Element::pair(2, 3),
                Element::pair(2, 4),
                Element::pair(2, 5),
            ]
        );
    }

    #[test]
    fn rado_pairwise_incomparable() {
        for n in 1..=15u64 {
            for m in 1..=15u64 {
                if n == m {
                    continue;
                }
                let bn = rado_bad_downset(n).unwrap();
                let bm = rado_bad_downset(m).unwrap();
                assert!(!couset_subset(&bn, &bm).unwrap(), "B{n} <= B{m}");
            }
        }
    }

    #[test]
    fn subset_examples() {
        let b2 = rado_bad_downset(2).unwrap();
        let b3 = rado_bad_downset(3).unwrap();
        assert!(!couset_subset(&b2, &b3).unwrap());
        assert!(!couset_subset(&b3, &b2).unwrap());
    }

    #[test]
    fn rejects_n_zero() {
        assert!(rado_bad_downset(0).is_err());
    }

    #[test]
    fn level_over_two_antichain() {
        let level = next_level(&Qo::antichain(2), 1);
        let all = level.all_elements().unwrap();
        // a0, a1, plus the three nonempty downsets {a1}, {a0}, {a0,a1}.
        assert_eq!(all.len(), 5);
        let x_a0 = Element::Down {
            gens: vec![Element::name("a0")],
        };
        let x_empty = Element::Down { gens: vec![] };
        assert!(all.contains(&x_a0));
        assert!(all.contains(&x_empty));
        assert!(level.leq(&x_a0, &x_empty).unwrap());
        assert!(!level.leq(&x_empty, &x_a0).unwrap());
    }

    #[test]
    fn level_over_point_adds_one_set() {
        let level = next_level(&Qo::antichain(1), 1);
        let all = level.all_elements().unwrap();
        assert_eq!(all.len(), 2);
        let star = Element::name("a0");
        let top = Element::Down { gens: vec![] };
        assert!(level.leq(&star, &top).unwrap());
        assert!(!level.leq(&top, &star).unwrap());
    }

    #[test]
    fn level_two_over_point_is_three_chain() {
        // The point, the reappearance of its singleton, and the new top.
        let level2 = next_level(&Qo::antichain(1), 2);
        let all = level2.all_elements().unwrap();
        assert_eq!(all.len(), 3);
        for a in &all {
            for b in &all {
                let ab = level2.leq(a, b).unwrap();
                let ba = level2.leq(b, a).unwrap();
                assert!(ab || ba, "level 2 over a point must be a chain");
            }
        }
    }

    #[test]
    fn level_over_three_antichain() {
        let level = next_level(&Qo::antichain(3), 1);
        let all = level.all_elements().unwrap();
        assert_eq!(all.len(), 10); // 3 urelements + 7 nonempty downsets
        let pair_sets: Vec<Element> = (0..3)
            .map(|i| Element::Down {
                gens: vec![Element::name(&format!("a{i}"))],
            })
            .collect();
        let triple = Element::Down { gens: vec![] };
        for (i, x) in pair_sets.iter().enumerate() {
            assert!(level.leq(x, &triple).unwrap());
            for (j, y) in pair_sets.iter().enumerate() {
                if i != j {
                    assert!(!level.leq(x, y).unwrap(), "pair sets must be incomparable");
                }
            }
        }
    }

    #[test]
    fn descend_chain_on_rado() {
        let prefix: Vec<CoUpset> = (1..=3).map(|n| rado_bad_downset(n).unwrap()).collect();
        let chain = descend_chain(&prefix).unwrap();
        assert_eq!(chain.sets.len(), 3);
        assert_eq!(chain.steps.len(), 3);
        // The second prefix element separates y_1 from y_2.
        let w = &chain.steps[1];
        assert_eq!(w.witness_index, 1);
        assert!(chain.sets[0].member(&w.witness).unwrap());
        assert!(!chain.sets[1].member(&w.witness).unwrap());
    }

    #[test]
    fn descend_chain_singleton() {
        let prefix = vec![rado_bad_downset(1).unwrap()];
        let chain = descend_chain(&prefix).unwrap();
        assert_eq!(chain.sets.len(), 1);
    }

    #[test]
    fn descend_chain_rejects_duplicates() {
        let b1 = rado_bad_downset(1).unwrap();
        let err = descend_chain(&[b1.clone(), b1]).unwrap_err();
        assert!(matches!(err, Error::NotBad(0, 1)));
    }

    #[test]
    fn nonemptiness_search() {
        let b2 = rado_bad_downset(2).unwrap();
        let found = b2.find_member(100).unwrap();
        assert_eq!(found, Some(Element::pair(0, 1)));

        // (0,1) dominates every (0,j) and everything with first coordinate
        // >= 2; (1,2) dominates every (1,j). Together they cover Rado, so
        // the complement is empty.
        let all_gen =
            CoUpset::new(Qo::Rado, vec![Element::pair(0, 1), Element::pair(1, 2)]).unwrap();
        assert_eq!(all_gen.find_member(200).unwrap(), None);
    }

    #[test]
    fn normalization_idempotent() {
        let gens = vec![
            Element::pair(0, 3),
            Element::pair(0, 2),
            Element::pair(2, 3),
            Element::pair(0, 2),
        ];
        let once = CoUpset::new(Qo::Rado, gens).unwrap();
        let twice = CoUpset::new(Qo::Rado, once.generators.clone()).unwrap();
        assert_eq!(once, twice);
        // (0,2) <= (0,3), so (0,3) is dominated and dropped.
        assert_eq!(
            once.generators,
            vec![Element::pair(0, 2), Element::pair(2, 3)]
        );
    }

    #[test]
    fn couset_json_schema() {
        let b2 = rado_bad_downset(2).unwrap();
        let json = serde_json::to_value(&b2).unwrap();
        assert_eq!(json["base"]["type"], "rado");
        assert_eq!(json["generators"][0][0], 0);
        let back: CoUpset = serde_json::from_value(json).unwrap();
        assert_eq!(back, b2);
    }
}
