//! Ordinal arithmetic in Cantor normal form, below epsilon-zero.
//!
//! Ordinals are sums `w^{e_0}*c_0 + ... + w^{e_n}*c_n` with strictly
//! decreasing exponents (themselves ordinals) and positive integer
//! coefficients. The empty sum is zero. This is enough for sequence
//! lengths and front ranks: we need comparison, addition, `w^a`, and
//! successor/predecessor, but no general multiplication.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An ordinal below epsilon-zero in Cantor normal form.
///
/// Invariants: exponents strictly decreasing, coefficients >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(&Ordinal::one())
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` terms, which must
    /// already be in normal form (strictly decreasing exponents).
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, Error> {
        for w in terms.windows(2) {
            if w[0].0.cmp_ord(&w[1].0) != Ordering::Greater {
                return Err(Error::Ordinal("exponents not strictly decreasing".into()));
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(Error::Ordinal("zero coefficient".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total order on ordinals: lexicographic on the CNF term lists.
    pub fn cmp_ord(&self, other: &Ordinal) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp_ord(&b.0) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    /// Ordinal sum `self + other`. Terms of `self` strictly below the leading
    /// exponent of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead_exp, lead_coeff)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::new();
        for (e, c) in &self.terms {
            if e.cmp_ord(lead_exp) == Ordering::Greater {
                terms.push((e.clone(), *c));
            } else {
                break;
            }
        }
        let mut rest = other.terms.iter();
        // Merge coefficients when self still carries the leading exponent.
        if let Some((e, c)) = self
            .terms
            .iter()
            .find(|(e, _)| e.cmp_ord(lead_exp) == Ordering::Equal)
        {
            terms.push((e.clone(), c + lead_coeff));
            rest.next();
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// `w^a` as a single CNF term.
    pub fn omega_pow(a: &Ordinal) -> Ordinal {
        Ordinal {
            terms: vec![(a.clone(), 1)],
        }
    }

    /// True iff the last CNF term has exponent zero.
    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|(e, _)| e.is_zero())
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Result<Ordinal, Error> {
        if !self.is_successor() {
            return Err(Error::Ordinal("not a successor".into()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.1 > 1 {
            last.1 -= 1;
        } else {
            terms.pop();
        }
        Ok(Ordinal { terms })
    }

    /// Left subtraction: the unique `d` with `self + d == target`, when
    /// `target >= self`.
    pub fn left_sub(&self, target: &Ordinal) -> Option<Ordinal> {
        if target.cmp_ord(self) == Ordering::Less {
            return None;
        }
        if self.is_zero() {
            return Some(target.clone());
        }
        let (se, sc) = &self.terms[0];
        let (te, tc) = &target.terms[0];
        match te.cmp_ord(se) {
            Ordering::Greater => Some(target.clone()),
            Ordering::Less => None,
            Ordering::Equal => match tc.cmp(sc) {
                Ordering::Less => None,
                Ordering::Greater => {
                    let mut terms = vec![(te.clone(), tc - sc)];
                    terms.extend(target.terms[1..].iter().cloned());
                    Some(Ordinal { terms })
                }
                Ordering::Equal => {
                    let self_rest = Ordinal {
                        terms: self.terms[1..].to_vec(),
                    };
                    let target_rest = Ordinal {
                        terms: target.terms[1..].to_vec(),
                    };
                    self_rest.left_sub(&target_rest)
                }
            },
        }
    }

    /// `self * n` for a finite, positive `n`: multiplies the leading
    /// coefficient, keeps the tail.
    pub fn mul_nat(&self, n: u64) -> Ordinal {
        assert!(n > 0, "mul_nat needs a positive multiplier");
        if self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].1 *= n;
        Ordinal { terms }
    }

    /// `self * omega` for a nonzero ordinal: jumps to the next omega power.
    pub fn mul_omega(&self) -> Ordinal {
        let (e, _) = self
            .terms
            .first()
            .expect("mul_omega needs a nonzero ordinal");
        Ordinal::omega_pow(&e.add(&Ordinal::one()))
    }

    pub fn to_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                if e.to_nat() == Some(1) {
                    write!(f, "w")?;
                } else {
                    write!(f, "w^{{{e}}}")?;
                }
                if *c != 1 {
                    write!(f, "*{c}")?;
                }
            }
        }
        Ok(())
    }
}

impl From<Ordinal> for String {
    fn from(o: Ordinal) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for Ordinal {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Parses the textual form produced by `Display`, e.g. `w^{2}*3 + w + 7`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "0" {
            return Ok(Ordinal::zero());
        }
        let mut terms = Vec::new();
        for part in split_top_level(s)? {
            terms.push(parse_term(part.trim())?);
        }
        let o = Ordinal::from_terms(terms)?;
        Ok(o)
    }
}

fn split_top_level(s: &str) -> Result<Vec<&str>, Error> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'{' => depth += 1,
            b'}' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Ordinal(format!("unbalanced braces in `{s}`")))?;
            }
            b'+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Ordinal(format!("unbalanced braces in `{s}`")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_term(part: &str) -> Result<(Ordinal, u64), Error> {
    let bad = || Error::Ordinal(format!("cannot parse ordinal term `{part}`"));
    if let Ok(n) = part.parse::<u64>() {
        if n == 0 {
            return Err(bad());
        }
        return Ok((Ordinal::zero(), n));
    }
    let rest = part.strip_prefix('w').ok_or_else(bad)?;
    let (exp, after) = if let Some(r) = rest.strip_prefix("^{") {
        let close = find_matching_brace(r).ok_or_else(bad)?;
        (r[..close].parse::<Ordinal>()?, &r[close + 1..])
    } else {
        (Ordinal::one(), rest)
    };
    let coeff = match after.trim() {
        "" => 1,
        c => c
            .strip_prefix('*')
            .and_then(|c| c.trim().parse::<u64>().ok())
            .filter(|c| *c > 0)
            .ok_or_else(bad)?,
    };
    Ok((exp, coeff))
}

fn find_matching_brace(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, b) in s.bytes().enumerate() {
        match b {
            b'{' => depth += 1,
            b'}' => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}
