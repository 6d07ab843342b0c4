//! Uniform fronts, the step relation between their tuples, badness checks,
//! truncated homogeneous-set search, and the finite-support goodness scan.
//!
//! Only uniform fronts `[carrier]^k` are represented. All verdicts obtained
//! by scanning a bounded fragment are "verified on bound N" statements, not
//! absolute ones; callers that print reports should phrase them that way.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qo::{Element, Qo};

/// A strictly increasing tuple of naturals, identified with a finite set.
pub type Tuple = Vec<u64>;

/// The front of all strictly increasing `k`-tuples over a carrier, with the
/// rank function `k - |sigma|` on proper prefixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontTemplate {
    pub width: usize,
    /// `None` means the full set of naturals.
    pub carrier: Option<Vec<u64>>,
}

impl FrontTemplate {
    pub fn uniform(width: usize) -> FrontTemplate {
        assert!(width >= 1, "front width must be positive");
        FrontTemplate {
            width,
            carrier: None,
        }
    }

    pub fn restricted_to(&self, carrier: Vec<u64>) -> FrontTemplate {
        FrontTemplate {
            width: self.width,
            carrier: Some(carrier),
        }
    }

    pub fn in_carrier(&self, n: u64) -> bool {
        match &self.carrier {
            None => true,
            Some(h) => h.contains(&n),
        }
    }

    pub fn contains(&self, sigma: &[u64]) -> bool {
        sigma.len() == self.width
            && strictly_increasing(sigma)
            && sigma.iter().all(|n| self.in_carrier(*n))
    }

    /// Rank of a proper prefix: strictly decreasing along extension.
    pub fn rank(&self, sigma: &[u64]) -> usize {
        self.width.saturating_sub(sigma.len())
    }

    /// All front tuples with entries at most `bound`.
    pub fn tuples_up_to(&self, bound: u64) -> Vec<Tuple> {
        let pool: Vec<u64> = (0..=bound).filter(|n| self.in_carrier(*n)).collect();
        k_subsets(&pool, self.width)
    }
}

fn strictly_increasing(sigma: &[u64]) -> bool {
    sigma.windows(2).all(|w| w[0] < w[1])
}

/// All k-element subsets of `pool` (kept sorted), in lexicographic order.
pub fn k_subsets(pool: &[u64], k: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(pool: &[u64], k: usize, start: usize, current: &mut Tuple, out: &mut Vec<Tuple>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..pool.len() {
            if pool.len() - i < needed {
                break;
            }
            current.push(pool[i]);
            rec(pool, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(pool, k, 0, &mut current, &mut out);
    out
}

/// The step relation between front tuples: `sigma` steps to `tau` when
/// `min(sigma) < min(tau)` and `sigma` minus its minimum is comparable with
/// `tau` in the extension order.
pub fn triangleleft(sigma: &[u64], tau: &[u64]) -> Result<bool> {
    if sigma.is_empty() || tau.is_empty() {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    if !strictly_increasing(sigma) || !strictly_increasing(tau) {
        return Err(Error::InvalidInput("tuple not strictly increasing".into()));
    }
    if sigma[0] >= tau[0] {
        return Ok(false);
    }
    let reduced = &sigma[1..];
    let shorter = reduced.len().min(tau.len());
    Ok(reduced[..shorter] == tau[..shorter])
}

/// How a tame array computes its values from a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Valuer {
    /// `{i,j} -> (i,j)` as a Rado element. Width 2 only.
    RadoPair,
    /// First entry as a natural.
    First,
    /// Constant value.
    Const { value: Element },
    /// `{i,j} -> (i,i+1)` as a Rado element. Width 2 only.
    PairSucc,
    /// Value depends on the gap-capped feature of the tuple: first entry and
    /// successive gaps, all capped at `cap`.
    GapCapped {
        cap: u64,
        table: BTreeMap<String, Element>,
    },
    /// Value depends on the entries modulo `m`.
    Mod {
        m: u64,
        table: BTreeMap<String, Element>,
    },
    /// Explicit finite table keyed by the tuple itself.
    Table { table: BTreeMap<String, Element> },
}

pub fn tuple_key(sigma: &[u64]) -> String {
    sigma
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// An array from a uniform front into a quasi-order whose values only depend
/// on a finite abstraction of the tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameArray {
    pub qo: Qo,
    pub front: FrontTemplate,
    pub valuer: Valuer,
    /// Finite support annotations: `supports[n]` lists the possible values
    /// of tuples starting at `n`. Required by the goodness extraction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supports: Option<Vec<Vec<Element>>>,
}

impl TameArray {
    pub fn rado_identity() -> TameArray {
        TameArray {
            qo: Qo::Rado,
            front: FrontTemplate::uniform(2),
            valuer: Valuer::RadoPair,
            supports: None,
        }
    }

    pub fn value(&self, sigma: &[u64]) -> Result<Element> {
        if !self.front.contains(sigma) {
            return Err(Error::InvalidInput(format!(
                "tuple {:?} not in the front",
                sigma
            )));
        }
        let missing =
            |key: &str| Error::NotTame(format!("valuer has no entry for feature `{key}`"));
        match &self.valuer {
            Valuer::RadoPair => match sigma {
                [i, j] => Ok(Element::pair(*i, *j)),
                _ => Err(Error::NotTame("rado_pair needs width 2".into())),
            },
            Valuer::First => Ok(Element::Nat(sigma[0])),
            Valuer::Const { value } => Ok(value.clone()),
            Valuer::PairSucc => match sigma {
                [i, _] => Ok(Element::pair(*i, *i + 1)),
                _ => Err(Error::NotTame("pair_succ needs width 2".into())),
            },
            Valuer::GapCapped { cap, table } => {
                let mut feat = Vec::with_capacity(sigma.len());
                feat.push(sigma[0].min(*cap));
                for w in sigma.windows(2) {
                    feat.push((w[1] - w[0]).min(*cap));
                }
                let key = tuple_key(&feat);
                table.get(&key).cloned().ok_or_else(|| missing(&key))
            }
            Valuer::Mod { m, table } => {
                let feat: Vec<u64> = sigma.iter().map(|n| n % m).collect();
                let key = tuple_key(&feat);
                table.get(&key).cloned().ok_or_else(|| missing(&key))
            }
            Valuer::Table { table } => {
                let key = tuple_key(sigma);
                table.get(&key).cloned().ok_or_else(|| missing(&key))
            }
        }
    }

    pub fn restricted_to(&self, carrier: Vec<u64>) -> TameArray {
        TameArray {
            qo: self.qo.clone(),
            front: self.front.restricted_to(carrier),
            valuer: self.valuer.clone(),
            supports: self.supports.clone(),
        }
    }
}

/// Outcome of a bounded badness scan.
#[derive(Debug, Clone, Serialize)]
pub enum BadnessVerdict {
    /// No ascending step pair with entries at most the bound.
    BadOnBound { bound: u64, pairs_checked: u64 },
    /// An ascending pair: the array is good.
    Counterexample {
        sigma: Tuple,
        tau: Tuple,
        value_sigma: Element,
        value_tau: Element,
    },
}

/// Checks `f(sigma) <= f(tau)` over every step pair with entries `<= bound`.
pub fn is_bad_on(array: &TameArray, bound: u64) -> Result<BadnessVerdict> {
    let tuples = array.front.tuples_up_to(bound);
    let mut checked = 0u64;
    for sigma in &tuples {
        for tau in &tuples {
            if !triangleleft(sigma, tau)? {
                continue;
            }
            checked += 1;
            let vs = array.value(sigma)?;
            let vt = array.value(tau)?;
            if array.qo.leq(&vs, &vt)? {
                return Ok(BadnessVerdict::Counterexample {
                    sigma: sigma.clone(),
                    tau: tau.clone(),
                    value_sigma: vs,
                    value_tau: vt,
                });
            }
        }
    }
    Ok(BadnessVerdict::BadOnBound {
        bound,
        pairs_checked: checked,
    })
}

/// Exhaustive truncated homogeneous-set search: the lexicographically least
/// `H` of size `target` inside `{0..bound-1}` whose `width`-subsets all get
/// one color, or `None`.
pub fn ramsey_homogeneous(
    front: &FrontTemplate,
    coloring: &dyn Fn(&[u64]) -> u8,
    target: usize,
    bound: u64,
) -> Option<Vec<u64>> {
    let pool: Vec<u64> = (0..bound).filter(|n| front.in_carrier(*n)).collect();
    'candidates: for h in k_subsets(&pool, target) {
        let mut color: Option<u8> = None;
        for sigma in k_subsets(&h, front.width) {
            let c = coloring(&sigma);
            match color {
                None => color = Some(c),
                Some(c0) if c0 != c => continue 'candidates,
                _ => {}
            }
        }
        return Some(h);
    }
    None
}

/// Result of the finite-support goodness extraction.
#[derive(Debug, Clone, Serialize)]
pub enum ExtractVerdict {
    /// An ascending step pair found in the homogeneous restriction.
    Goodness {
        homogeneous: Vec<u64>,
        sigma: Tuple,
        tau: Tuple,
        value_sigma: Element,
        value_tau: Element,
    },
    /// Values stayed distinct along a fixed start inside a finite support:
    /// more distinct values than the support can hold.
    Pigeonhole {
        homogeneous: Vec<u64>,
        start: u64,
        distinct_values: Vec<Element>,
        support_size: usize,
    },
    /// Still bad on the homogeneous restriction within the bound.
    StillBad {
        homogeneous: Vec<u64>,
        pairs_checked: u64,
    },
}

/// The goodness scan: doubles the front, colors a combined tuple by whether
/// its two halves give equal values, homogenizes within the bound, and then
/// either finds an ascending pair, certifies a pigeonhole contradiction
/// against the finite supports, or reports the still-bad restriction.
pub fn extract_bad_sequence(array: &TameArray, bound: u64) -> Result<ExtractVerdict> {
    let supports = array.supports.as_ref().ok_or(Error::SupportsNotFinite)?;
    let k = array.front.width;
    let doubled = FrontTemplate {
        width: 2 * k - 1,
        carrier: array.front.carrier.clone(),
    };
    let color = |tuple: &[u64]| -> u8 {
        // Split {n} ∪ σ0 ∪ σ1 into its two overlapping front tuples.
        let n = tuple[0];
        let mut s0 = vec![n];
        s0.extend_from_slice(&tuple[1..k]);
        let mut s1 = vec![n];
        s1.extend_from_slice(&tuple[k..]);
        let v0 = array.value(&s0);
        let v1 = array.value(&s1);
        match (v0, v1) {
            (Ok(a), Ok(b)) if a == b => 0,
            _ => 1,
        }
    };
    let target = (2 * k + 2).max(k + 2);
    let Some(h) = ramsey_homogeneous(&doubled, &color, target, bound) else {
        return Err(Error::BoundTooSmall);
    };
    let sample = k_subsets(&h, 2 * k - 1)
        .into_iter()
        .next()
        .ok_or(Error::BoundTooSmall)?;
    if color(&sample) == 0 {
        // Homogeneous for equal halves: tuple values only depend on the
        // start. Scan the restriction for an ascending pair.
        let tuples = k_subsets(&h, k);
        let mut checked = 0u64;
        for sigma in &tuples {
            for tau in &tuples {
                if !triangleleft(sigma, tau)? {
                    continue;
                }
                checked += 1;
                let vs = array.value(sigma)?;
                let vt = array.value(tau)?;
                if array.qo.leq(&vs, &vt)? {
                    return Ok(ExtractVerdict::Goodness {
                        homogeneous: h,
                        sigma: sigma.clone(),
                        tau: tau.clone(),
                        value_sigma: vs,
                        value_tau: vt,
                    });
                }
            }
        }
        Ok(ExtractVerdict::StillBad {
            homogeneous: h,
            pairs_checked: checked,
        })
    } else {
        // Homogeneous for distinct halves: values along blocks after the
        // minimal start are pairwise distinct, which a finite support cannot
        // accommodate.
        let m = h[0];
        let support = supports
            .get(m as usize)
            .ok_or_else(|| Error::InvalidInput(format!("no support annotation for {m}")))?;
        let rest = &h[1..];
        let mut values = Vec::new();
        for chunk in rest.chunks_exact(k - 1) {
            let mut sigma = vec![m];
            sigma.extend_from_slice(chunk);
            let v = array.value(&sigma)?;
            if !values.contains(&v) {
                values.push(v);
            }
            if values.len() > support.len() {
                return Ok(ExtractVerdict::Pigeonhole {
                    homogeneous: h,
                    start: m,
                    distinct_values: values,
                    support_size: support.len(),
                });
            }
        }
        Err(Error::BoundTooSmall)
    }
}
