//! Suitable sequences: non-decreasing exponent lists over G starting at 1.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GroupElement, QuotientGroup};
use crate::subgroups::Subgroup;

/// A member of St(1, m, G), stored in non-decreasing order.
///
/// The multiset is the identity of the sequence: reordering positions gives
/// an isomorphic near-vector space, so only the sorted form is kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuitableSequence {
    entries: Vec<GroupElement>,
}

/// Distinct entries of a sequence with their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportProfile {
    pub support: Vec<GroupElement>,
    pub occurrences: Vec<usize>,
}

impl SupportProfile {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn occurrence_of(&self, q: GroupElement) -> usize {
        self.support
            .binary_search(&q)
            .map(|k| self.occurrences[k])
            .unwrap_or(0)
    }
}

/// Result of [`SuitableSequence::normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub sequence: SuitableSequence,
    /// True when the input was not already canonical and sorted.
    pub changed: bool,
}

impl SuitableSequence {
    /// Strict constructor: entries must already be canonical, sorted and start with 1.
    pub fn new(group: &QuotientGroup, values: &[u64]) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("sequence is empty", None));
        }
        let normalized = Self::normalize(group, values).ok();
        let hint = normalized.as_ref().map(|n| n.sequence.to_string());
        for &v in values {
            if !group.contains_value(v) {
                return Err(invalid(
                    &format!("{v} is not a canonical representative of G"),
                    hint,
                ));
            }
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(invalid("entries are not in non-decreasing order", hint));
        }
        if values[0] != 1 {
            return Err(invalid("first entry must be 1", hint));
        }
        Ok(Self {
            entries: values.iter().map(|&v| group.element(v).unwrap()).collect(),
        })
    }

    /// Replaces every unit by its coset representative and sorts. Non-units,
    /// and inputs that do not contain the identity class, are rejected.
    pub fn normalize(group: &QuotientGroup, values: &[u64]) -> Result<Normalized> {
        if values.is_empty() {
            return Err(invalid("sequence is empty", None));
        }
        let mut entries = values
            .iter()
            .map(|&v| group.canonical_rep(v))
            .collect::<Result<Vec<_>>>()?;
        entries.sort_unstable();
        if entries[0] != GroupElement::IDENTITY {
            return Err(invalid("sequence has no entry in the identity class", None));
        }
        let changed = entries.iter().map(|e| e.value()).ne(values.iter().copied());
        Ok(Normalized {
            sequence: Self { entries },
            changed,
        })
    }

    /// Accepts a sorted multiset of canonical elements when it contains 1.
    pub fn from_sorted(entries: Vec<GroupElement>) -> Option<Self> {
        debug_assert!(entries.windows(2).all(|w| w[0] <= w[1]));
        (entries.first() == Some(&GroupElement::IDENTITY)).then_some(Self { entries })
    }

    pub(crate) fn from_indices(group: &QuotientGroup, indices: &[u32]) -> Self {
        Self {
            entries: indices
                .iter()
                .map(|&i| group.element_at(i as usize))
                .collect(),
        }
    }

    /// All-ones sequence of length `m`.
    pub fn constant(m: usize) -> Self {
        Self {
            entries: vec![GroupElement::IDENTITY; m],
        }
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.entries
    }

    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_profile(&self) -> SupportProfile {
        let mut support = Vec::new();
        let mut occurrences: Vec<usize> = Vec::new();
        for &e in &self.entries {
            if support.last() == Some(&e) {
                *occurrences.last_mut().unwrap() += 1;
            } else {
                support.push(e);
                occurrences.push(1);
            }
        }
        SupportProfile {
            support,
            occurrences,
        }
    }

    /// Number of distinct entries, `N`.
    pub fn support_size(&self) -> usize {
        1 + self.entries.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

impl fmt::Display for SuitableSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

fn invalid(reason: &str, normalized: Option<String>) -> Error {
    let reason = match &normalized {
        Some(n) => format!("{reason} (normalized form: {n})"),
        None => reason.to_string(),
    };
    Error::InvalidSequence { reason, normalized }
}

/// Splits `"1,1,5,5"` into integers.
pub fn parse_values(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .map_err(|_| invalid(&format!("cannot parse {t:?} as an integer"), None))
        })
        .collect()
}

/// Strict parse of the comma-separated text form.
pub fn parse_sequence(group: &QuotientGroup, text: &str) -> Result<SuitableSequence> {
    SuitableSequence::new(group, &parse_values(text)?)
}

/// `q(S)`: multiply every entry by `q` and re-sort. The result lies in
/// St(1, m, G) exactly when `q^-1` is in the support of `s`.
pub fn scale(
    group: &QuotientGroup,
    q: GroupElement,
    s: &SuitableSequence,
) -> Result<Vec<GroupElement>> {
    let mut out = s
        .entries
        .iter()
        .map(|&e| group.mul(q, e))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}

/// Membership in St(H, m, N): the support has `n` elements, is a union of
/// H-cosets (hence contains H), and multiplicities are constant on each coset.
pub fn in_st_h(group: &QuotientGroup, h: &Subgroup, s: &SuitableSequence, n: usize) -> bool {
    let profile = s.support_profile();
    if profile.len() != n {
        return false;
    }
    for (&x, &count) in profile.support.iter().zip(&profile.occurrences) {
        for &y in h.elements() {
            let Ok(xy) = group.mul(x, y) else {
                return false;
            };
            if profile.occurrence_of(xy) != count {
                return false;
            }
        }
    }
    true
}

/// Lexicographic walk over non-decreasing index sequences with a leading 0.
pub(crate) struct St1Odometer {
    seq: Vec<u32>,
    top: u32,
    started: bool,
}

impl St1Odometer {
    pub(crate) fn new(group_order: usize, m: usize) -> Self {
        assert!(m >= 1 && group_order >= 1);
        Self {
            seq: vec![0; m],
            top: group_order as u32 - 1,
            started: false,
        }
    }

    pub(crate) fn advance(&mut self) -> Option<&[u32]> {
        if !self.started {
            self.started = true;
            return Some(&self.seq);
        }
        let pos = (1..self.seq.len()).rev().find(|&i| self.seq[i] < self.top)?;
        let v = self.seq[pos] + 1;
        for x in &mut self.seq[pos..] {
            *x = v;
        }
        Some(&self.seq)
    }
}

/// St(1, m, G) in lexicographic order; `C(|G| + m - 2, m - 1)` sequences.
pub fn enumerate_st1(group: &QuotientGroup, m: usize) -> Result<Vec<SuitableSequence>> {
    if m == 0 {
        return Err(Error::OutOfRange("sequence length m must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut odo = St1Odometer::new(group.order(), m);
    while let Some(idx) = odo.advance() {
        out.push(SuitableSequence::from_indices(group, idx));
    }
    Ok(out)
}
