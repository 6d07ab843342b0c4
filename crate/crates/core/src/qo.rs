//! Registry of base quasi-orders and constructors.
//!
//! Every other module works against `Qo`: a decidable `leq`, a fair
//! enumeration, and element validation. The registered variants are finite
//! orders given by an explicit matrix, the naturals, Rado's partial order on
//! pairs, binary products, and the derived one-step downset level used by
//! the downset algebra.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of a quasi-order. The payload shape must match the order it is
/// used with: names for finite orders, naturals for omega, increasing pairs
/// for Rado, nested pairs for products, and generator lists (`Down`) for
/// downset levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Nat(u64),
    Name(String),
    Pair(u64, u64),
    Tuple { l: Box<Element>, r: Box<Element> },
    Down { gens: Vec<Element> },
}

impl Element {
    pub fn name(s: &str) -> Element {
        Element::Name(s.to_string())
    }

    pub fn pair(i: u64, j: u64) -> Element {
        Element::Pair(i, j)
    }

    pub fn tuple(l: Element, r: Element) -> Element {
        Element::Tuple {
            l: Box::new(l),
            r: Box::new(r),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Name(s) => write!(f, "{s}"),
            Element::Nat(n) => write!(f, "{n}"),
            Element::Pair(i, j) => write!(f, "({i},{j})"),
            Element::Tuple { l, r } => write!(f, "({l},{r})"),
            Element::Down { gens } => {
                write!(f, "co{{")?;
                for (k, g) in gens.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// A registered quasi-order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Qo {
    Finite {
        elements: Vec<String>,
        leq: Vec<Vec<bool>>,
    },
    Omega,
    Rado,
    Product {
        left: Box<Qo>,
        right: Box<Qo>,
    },
    /// One downset level over a base: the base's points plus complements of
    /// finitely generated upsets over it. Produced by `next_level`.
    Level {
        base: Box<Qo>,
    },
}

impl Qo {
    /// Finite quasi-order from named elements and a `leq` matrix. The matrix
    /// is validated to be reflexive and transitive.
    pub fn finite(elements: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Qo> {
        let n = elements.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidQo("matrix shape does not match elements".into()));
        }
        for (i, row) in leq.iter().enumerate() {
            if !row[i] {
                return Err(Error::InvalidQo(format!("not reflexive at {}", elements[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidQo(format!(
                            "not transitive at ({}, {}, {})",
                            elements[i], elements[j], elements[k]
                        )));
                    }
                }
            }
        }
        Ok(Qo::Finite { elements, leq })
    }

    /// Antichain of `n` points named `a0..`.
    pub fn antichain(n: usize) -> Qo {
        let elements: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        Qo::Finite { elements, leq }
    }

    /// Linear order of `n` points named `a0 < a1 < ..`.
    pub fn chain(n: usize) -> Qo {
        let elements: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Qo::Finite { elements, leq }
    }

    pub fn product(left: Qo, right: Qo) -> Qo {
        Qo::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Checks that `e` is a point of this order.
    pub fn validate(&self, e: &Element) -> Result<()> {
        let mismatch = || Error::ElementMismatch(format!("{e} in {self:?}"));
        match (self, e) {
            (Qo::Finite { elements, .. }, Element::Name(s)) => {
                if elements.iter().any(|x| x == s) {
                    Ok(())
                } else {
                    Err(mismatch())
                }
            }
            (Qo::Omega, Element::Nat(_)) => Ok(()),
            (Qo::Rado, Element::Pair(i, j)) => {
                if i < j {
                    Ok(())
                } else {
                    Err(mismatch())
                }
            }
            (Qo::Product { left, right }, Element::Tuple { l, r }) => {
                left.validate(l)?;
                right.validate(r)
            }
            (Qo::Level { base }, Element::Down { gens }) => {
                gens.iter().try_for_each(|g| base.validate(g))
            }
            (Qo::Level { base }, other) => base.validate(other),
            _ => Err(mismatch()),
        }
    }

    /// Decides the order. Errors when either element does not belong here.
    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.leq_ok(a, b))
    }

    /// `leq` over elements already known to belong to this order.
    pub(crate) fn leq_ok(&self, a: &Element, b: &Element) -> bool {
        match (self, a, b) {
            (Qo::Finite { elements, leq }, Element::Name(x), Element::Name(y)) => {
                let i = elements.iter().position(|e| e == x).expect("validated");
                let j = elements.iter().position(|e| e == y).expect("validated");
                leq[i][j]
            }
            (Qo::Omega, Element::Nat(m), Element::Nat(n)) => m <= n,
            (Qo::Rado, Element::Pair(i, j), Element::Pair(k, l)) => (i == k && j <= l) || j < k,
            (
                Qo::Product { left, right },
                Element::Tuple { l: al, r: ar },
                Element::Tuple { l: bl, r: br },
            ) => left.leq_ok(al, bl) && right.leq_ok(ar, br),
            (Qo::Level { base }, a, b) => match (a, b) {
                (Element::Down { gens: ga }, Element::Down { gens: gb }) => {
                    // Set below set: inclusion of the denoted downsets, by
                    // the generator criterion.
                    gb.iter().all(|b| ga.iter().any(|a| base.leq_ok(a, b)))
                }
                (Element::Down { .. }, _) => false,
                (a, Element::Down { gens }) => {
                    // Urelement below set: membership in the denotation.
                    gens.iter().all(|g| !base.leq_ok(g, a))
                }
                (a, b) => base.leq_ok(a, b),
            },
            _ => unreachable!("validated elements match the qo shape"),
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Result<Option<u64>> {
        match self {
            Qo::Finite { elements, .. } => Ok(Some(elements.len() as u64)),
            Qo::Omega | Qo::Rado => Ok(None),
            Qo::Product { left, right } => Ok(match (left.size()?, right.size()?) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            }),
            Qo::Level { .. } => Ok(Some(self.level_elements()?.len() as u64)),
        }
    }

    /// Fair enumeration. Injective on infinite variants; finite variants
    /// wrap around so that every index is defined.
    pub fn enumerate(&self, n: u64) -> Result<Element> {
        match self {
            Qo::Finite { elements, .. } => {
                if elements.is_empty() {
                    return Err(Error::EnumerationUnsupported);
                }
                Ok(Element::name(&elements[(n % elements.len() as u64) as usize]))
            }
            Qo::Omega => Ok(Element::Nat(n)),
            Qo::Rado => {
                // Diagonal order (0,1),(0,2),(1,2),(0,3),(1,3),(2,3),...
                let mut j = 1u64;
                while j * (j + 1) / 2 <= n {
                    j += 1;
                }
                let i = n - j * (j - 1) / 2;
                Ok(Element::Pair(i, j))
            }
            Qo::Product { left, right } => {
                let (i, j) = match (left.size()?, right.size()?) {
                    (Some(a), _) => (n % a, n / a),
                    (None, Some(b)) => (n / b, n % b),
                    (None, None) => cantor_unpair(n),
                };
                Ok(Element::tuple(left.enumerate(i)?, right.enumerate(j)?))
            }
            Qo::Level { .. } => {
                let all = self.level_elements()?;
                if all.is_empty() {
                    return Err(Error::EnumerationUnsupported);
                }
                Ok(all[(n % all.len() as u64) as usize].clone())
            }
        }
    }

    /// Index of an element in the enumeration (inverse of `enumerate` on
    /// infinite variants). Used as the deterministic tie-breaking order.
    pub fn enum_index(&self, e: &Element) -> Result<u64> {
        self.validate(e)?;
        match (self, e) {
            (Qo::Finite { elements, .. }, Element::Name(s)) => {
                Ok(elements.iter().position(|x| x == s).unwrap() as u64)
            }
            (Qo::Omega, Element::Nat(n)) => Ok(*n),
            (Qo::Rado, Element::Pair(i, j)) => Ok(j * (j - 1) / 2 + i),
            (Qo::Product { left, right }, Element::Tuple { l, r }) => {
                let i = left.enum_index(l)?;
                let j = right.enum_index(r)?;
                Ok(match (left.size()?, right.size()?) {
                    (Some(a), _) => j * a + i,
                    (None, Some(b)) => i * b + j,
                    (None, None) => cantor_pair(i, j),
                })
            }
            (Qo::Level { .. }, e) => {
                let all = self.level_elements()?;
                all.iter()
                    .position(|x| x == e)
                    .map(|i| i as u64)
                    .ok_or_else(|| Error::ElementMismatch(format!("{e} not in level")))
            }
            _ => unreachable!("validated elements match the qo shape"),
        }
    }

    /// All elements of a (finitely materializable) order.
    pub fn all_elements(&self) -> Result<Vec<Element>> {
        match self {
            Qo::Finite { elements, .. } => {
                Ok(elements.iter().map(|s| Element::name(s)).collect())
            }
            Qo::Level { .. } => self.level_elements(),
            Qo::Product { left, right } => {
                let ls = left.all_elements()?;
                let rs = right.all_elements()?;
                Ok(ls
                    .iter()
                    .flat_map(|l| rs.iter().map(move |r| Element::tuple(l.clone(), r.clone())))
                    .collect())
            }
            _ => Err(Error::EnumerationUnsupported),
        }
    }

    /// The non-set points: levels keep the urelements of the order they
    /// started from, while their sets are rebuilt over each new base.
    pub fn urelement_part(&self) -> Result<Vec<Element>> {
        match self {
            Qo::Level { base } => base.urelement_part(),
            other => other.all_elements(),
        }
    }

    /// Materializes one downset level over a finite base: the urelements
    /// followed by all distinct nonempty complements of finitely generated
    /// upsets over the full base, with generator antichains normalized.
    /// Sets of earlier levels reappear through the generators denoting the
    /// same downset, so nothing is lost up to equivalence.
    fn level_elements(&self) -> Result<Vec<Element>> {
        let Qo::Level { base } = self else {
            return Err(Error::EnumerationUnsupported);
        };
        let ground = base.all_elements()?;
        let mut out = self.urelement_part()?;
        let n = ground.len();
        if n >= 24 {
            return Err(Error::InvalidQo(format!("level over base of size {n} is too large")));
        }
        let mut seen_denotations: Vec<Vec<bool>> = Vec::new();
        for mask in 0u32..(1 << n) {
            let gens: Vec<Element> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| ground[i].clone())
                .collect();
            let denotation: Vec<bool> = ground
                .iter()
                .map(|p| gens.iter().all(|g| !base.leq_ok(g, p)))
                .collect();
            if denotation.iter().all(|m| !m) {
                continue; // empty downset is not an element
            }
            if seen_denotations.contains(&denotation) {
                continue;
            }
            seen_denotations.push(denotation);
            out.push(Element::Down {
                gens: normalize_generators(base, gens),
            });
        }
        Ok(out)
    }
}

/// Cantor pairing, used to enumerate products of two infinite orders.
fn cantor_pair(i: u64, j: u64) -> u64 {
    (i + j) * (i + j + 1) / 2 + j
}

fn cantor_unpair(n: u64) -> (u64, u64) {
    let mut s = 0u64;
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    let j = n - s * (s + 1) / 2;
    (s - j, j)
}

/// Drops dominated generators and sorts canonically, so that equal upsets
/// over a partial-order base get syntactically equal generator lists. Among
/// mutually equivalent generators the canonically least survives.
pub(crate) fn normalize_generators(base: &Qo, mut gens: Vec<Element>) -> Vec<Element> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = (0..gens.len())
        .map(|i| {
            !gens.iter().enumerate().any(|(j, g)| {
                j != i
                    && base.leq_ok(g, &gens[i])
                    && (!base.leq_ok(&gens[i], g) || j < i)
            })
        })
        .collect();
    gens.into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect()
}

/// Compares two elements by enumeration index where available, falling back
/// to the syntactic order. Deterministic tie-breaking for witness choices.
pub fn enum_order(qo: &Qo, a: &Element, b: &Element) -> Ordering {
    match (qo.enum_index(a), qo.enum_index(b)) {
        (Ok(i), Ok(j)) => i.cmp(&j).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}
