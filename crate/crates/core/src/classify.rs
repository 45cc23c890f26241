//! Isomorphism of near-vector spaces via their suitable sequences, orbits
//! under scaling, explicit witnesses, and brute-force classification.
//!
//! Two sequences are isomorphic iff `S1 = q S2` as multisets for some `q` in
//! the support of `S1`. The class of `S` is `{q^-1 S : q in support(S)}`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::group::{frobenius_exponent, CayleyTable, GroupElement, QuotientGroup};
use crate::sequences::{scale, St1Odometer, SuitableSequence};

/// Default cap on `|St(1, m, G)|` for brute-force classification.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

fn check_lengths(s1: &SuitableSequence, s2: &SuitableSequence) -> Result<()> {
    if s1.len() != s2.len() {
        return Err(Error::LengthMismatch {
            left: s1.len(),
            right: s2.len(),
        });
    }
    Ok(())
}

/// The least `q` in the support of `s1` with `s1 = q s2`, or `None` when the
/// two near-vector spaces are not isomorphic.
pub fn isomorphic(
    group: &QuotientGroup,
    s1: &SuitableSequence,
    s2: &SuitableSequence,
) -> Result<Option<GroupElement>> {
    check_lengths(s1, s2)?;
    for q in s1.support_profile().support {
        if scale(group, q, s2)? == s1.entries() {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// The class `[(S)]` as a set.
pub fn orbit(group: &QuotientGroup, s: &SuitableSequence) -> Result<BTreeSet<SuitableSequence>> {
    let mut out = BTreeSet::new();
    for q in s.support_profile().support {
        let image = scale(group, group.inv(q)?, s)?;
        out.insert(SuitableSequence::from_sorted(image).expect("q^-1 q = 1 is in the image"));
    }
    Ok(out)
}

/// Number of sequences `C(|G| + m - 2, m - 1)` in St(1, m, G), saturating.
pub fn st1_size(group_order: usize, m: usize) -> u128 {
    if m == 0 {
        return 0;
    }
    let n = (group_order + m - 2) as u128;
    let k = (m - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul(n - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

fn check_budget(group: &QuotientGroup, m: usize, budget: u128) -> Result<u128> {
    if m == 0 {
        return Err(Error::OutOfRange("sequence length m must be at least 1".into()));
    }
    let required = st1_size(group.order(), m);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(required)
}

/// Outcome of scanning one sequence's orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Scan {
    support_size: usize,
    /// Whether the sequence is the lexicographically least member of its orbit.
    least: bool,
    /// `|{q in support : q^-1 S = S}|`; only complete when `least` holds.
    stabilizer: usize,
}

/// Allocation-free orbit scanner over element indices.
struct OrbitScanner<'a> {
    table: &'a CayleyTable,
    support: Vec<u32>,
    counts: Vec<u32>,
    image: Vec<(u32, u32)>,
    /// Multiplicity of each element in the current sequence; zero elsewhere.
    /// Only used when the group fits in a `u128` mask.
    dense: Option<Vec<u32>>,
}

const MASK_LIMIT: usize = 128;

impl<'a> OrbitScanner<'a> {
    fn new(table: &'a CayleyTable, m: usize, use_masks: bool) -> Self {
        Self {
            table,
            support: Vec::with_capacity(m),
            counts: Vec::with_capacity(m),
            image: Vec::with_capacity(m),
            dense: (use_masks && table.order() <= MASK_LIMIT).then(|| vec![0; table.order()]),
        }
    }

    fn scan(&mut self, seq: &[u32]) -> Scan {
        self.support.clear();
        self.counts.clear();
        for &x in seq {
            if self.support.last() == Some(&x) {
                *self.counts.last_mut().unwrap() += 1;
            } else {
                self.support.push(x);
                self.counts.push(1);
            }
        }
        let n = self.support.len();
        let outcome = match self.dense.take() {
            Some(mut dense) => {
                let r = self.scan_masked(&mut dense);
                self.dense = Some(dense);
                r
            }
            None => self.scan_sorted(),
        };
        match outcome {
            Some(stabilizer) => Scan {
                support_size: n,
                least: true,
                stabilizer,
            },
            None => Scan {
                support_size: n,
                least: false,
                stabilizer: 0,
            },
        }
    }

    /// Stabilizer size if the sequence is least in its orbit.
    fn scan_sorted(&mut self) -> Option<usize> {
        let n = self.support.len();
        let mut stabilizer = 1;
        for k in 1..n {
            // the image q_k^-1 S opens with the identity repeated counts[k] times
            match self.counts[k].cmp(&self.counts[0]) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => {}
            }
            let row = self.table.row(self.table.inv(self.support[k]));
            self.image.clear();
            for j in 0..n {
                let e = (row[self.support[j] as usize], self.counts[j]);
                // insertion sort; n is at most m
                let mut pos = self.image.len();
                while pos > 0 && self.image[pos - 1].0 > e.0 {
                    pos -= 1;
                }
                self.image.insert(pos, e);
            }
            match compare_multisets(&self.image, &self.support, &self.counts) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => stabilizer += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        Some(stabilizer)
    }

    /// Same decision via multiplicity lookups: the image `q^-1 S` has
    /// multiplicity `count_S(q e)` at `e`, and the first element (in index
    /// order) where the two multiplicities differ decides the comparison.
    fn scan_masked(&self, dense: &mut [u32]) -> Option<usize> {
        let n = self.support.len();
        let mut s_mask = 0u128;
        for (&x, &c) in self.support.iter().zip(&self.counts) {
            dense[x as usize] = c;
            s_mask |= 1 << x;
        }
        let mut stabilizer = 1;
        let mut least = true;
        'shifts: for k in 1..n {
            match self.counts[k].cmp(&self.counts[0]) {
                std::cmp::Ordering::Greater => {
                    least = false;
                    break;
                }
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => {}
            }
            let q = self.support[k];
            let inv_row = self.table.row(self.table.inv(q));
            let row = self.table.row(q);
            let mut img_mask = 0u128;
            for &x in &self.support {
                img_mask |= 1 << inv_row[x as usize];
            }
            let mut union = s_mask | img_mask;
            while union != 0 {
                let e = union.trailing_zeros() as usize;
                union &= union - 1;
                let in_s = if s_mask >> e & 1 == 1 { dense[e] } else { 0 };
                let in_img = if img_mask >> e & 1 == 1 {
                    dense[row[e] as usize]
                } else {
                    0
                };
                if in_s != in_img {
                    if in_img > in_s {
                        least = false;
                        break 'shifts;
                    }
                    continue 'shifts;
                }
            }
            stabilizer += 1;
        }
        for &x in &self.support {
            dense[x as usize] = 0;
        }
        least.then_some(stabilizer)
    }
}

/// Lexicographic order of the sorted sequences encoded by (element, count)
/// runs. At the first differing run, a smaller element or a longer run of the
/// same element makes the sequence smaller.
fn compare_multisets(image: &[(u32, u32)], support: &[u32], counts: &[u32]) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    for (j, &(e, c)) in image.iter().enumerate() {
        if e != support[j] {
            return e.cmp(&support[j]);
        }
        if c != counts[j] {
            return if c > counts[j] { Less } else { Greater };
        }
    }
    Equal
}

fn for_each_class(group: &QuotientGroup, m: usize, visit: impl FnMut(&[u32], Scan)) -> u64 {
    walk_classes(group, m, true, visit)
}

fn walk_classes(
    group: &QuotientGroup,
    m: usize,
    use_masks: bool,
    mut visit: impl FnMut(&[u32], Scan),
) -> u64 {
    let table = group.cayley_table();
    let mut scanner = OrbitScanner::new(&table, m, use_masks);
    let mut odo = St1Odometer::new(group.order(), m);
    let mut visited = 0u64;
    while let Some(seq) = odo.advance() {
        visited += 1;
        let scan = scanner.scan(seq);
        if scan.least {
            visit(seq, scan);
        }
    }
    visited
}

/// Per-N class counts from exhaustive enumeration, without keeping the classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceCounts {
    pub m: usize,
    pub sequences: u64,
    pub per_n: BTreeMap<usize, u64>,
    pub total: u64,
}

/// Walks all of St(1, m, G) and counts sequences that are the least member of
/// their orbit. Same enumeration as [`brute_force_classes`] with no storage.
pub fn brute_force_counts(group: &QuotientGroup, m: usize, budget: u128) -> Result<BruteForceCounts> {
    check_budget(group, m, budget)?;
    let mut per_n: BTreeMap<usize, u64> = BTreeMap::new();
    let mut orbit_mass = 0u64;
    let sequences = for_each_class(group, m, |_, scan| {
        *per_n.entry(scan.support_size).or_default() += 1;
        orbit_mass += (scan.support_size / scan.stabilizer) as u64;
    });
    if orbit_mass != sequences {
        return Err(Error::InternalCount(format!(
            "orbit sizes sum to {orbit_mass}, expected {sequences}"
        )));
    }
    let total = per_n.values().sum();
    Ok(BruteForceCounts {
        m,
        sequences,
        per_n,
        total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    /// Lexicographically least member of the class.
    pub representative: SuitableSequence,
    pub orbit_size: usize,
    pub support_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    pub m: usize,
    pub classes: Vec<ClassRecord>,
    pub per_n: BTreeMap<usize, u64>,
    pub total: u64,
}

impl ClassificationResult {
    pub fn sequence_count(&self) -> u64 {
        self.classes.iter().map(|c| c.orbit_size as u64).sum()
    }
}

/// Partitions St(1, m, G) into isomorphism classes by explicit orbit
/// computation. Classes never mix support sizes.
pub fn brute_force_classes(
    group: &QuotientGroup,
    m: usize,
    budget: u128,
) -> Result<ClassificationResult> {
    check_budget(group, m, budget)?;
    let mut classes = Vec::new();
    let mut per_n: BTreeMap<usize, u64> = BTreeMap::new();
    let visited = for_each_class(group, m, |seq, scan| {
        *per_n.entry(scan.support_size).or_default() += 1;
        classes.push(ClassRecord {
            representative: SuitableSequence::from_indices(group, seq),
            orbit_size: scan.support_size / scan.stabilizer,
            support_size: scan.support_size,
        });
    });
    let result = ClassificationResult {
        m,
        total: classes.len() as u64,
        classes,
        per_n,
    };
    if result.sequence_count() != visited {
        return Err(Error::InternalCount(format!(
            "orbit sizes sum to {}, expected {visited}",
            result.sequence_count()
        )));
    }
    Ok(result)
}

/// Finite data of an isomorphism `(theta, eta)` between the near-vector
/// spaces of `s1` and `s2`:
///
/// `theta(x)_i = x_{sigma(i)}^(p^l_i)` and `eta(s_alpha) = t_{alpha^q}`,
/// where position `i` of `s2` corresponds to position `sigma(i)` of `s1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismWitness {
    pub q: GroupElement,
    /// Zero-based.
    pub sigma: Vec<usize>,
    pub frobenius_powers: Vec<u32>,
}

impl IsomorphismWitness {
    pub fn sigma_one_based(&self) -> Vec<usize> {
        self.sigma.iter().map(|i| i + 1).collect()
    }

    /// `p^l_i` for each position.
    pub fn frobenius_exponents(&self, p: u64) -> Vec<u64> {
        self.frobenius_powers.iter().map(|&l| p.pow(l)).collect()
    }

    pub fn satisfies_invariants(
        &self,
        group: &QuotientGroup,
        s1: &SuitableSequence,
        s2: &SuitableSequence,
    ) -> bool {
        let m = s1.len();
        if s2.len() != m || self.sigma.len() != m || self.frobenius_powers.len() != m {
            return false;
        }
        let Ok(q_inv) = group.inv(self.q) else {
            return false;
        };
        let (p1, p2) = (s1.support_profile(), s2.support_profile());
        if p1.occurrence_of(self.q) == 0 || p2.occurrence_of(q_inv) == 0 {
            return false;
        }
        let mut seen = vec![false; m];
        for &j in &self.sigma {
            if j >= m || std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        let params = group.params();
        (0..m).all(|i| {
            let target = s1.entries()[self.sigma[i]];
            let source = s2.entries()[i];
            if group.mul(self.q, source).ok() != Some(target) {
                return false;
            }
            let Ok(inv) = group.unit_inverse(target.value()) else {
                return false;
            };
            let ratio = group.unit_mul(group.unit_mul(self.q.value(), source.value()), inv);
            frobenius_exponent(params, ratio).ok() == Some(self.frobenius_powers[i])
        })
    }
}

/// Builds the witness for `s1 = q s2`: each occurrence block of `s2` is sent
/// in order onto the block of `q q'_k` in `s1`, and the Frobenius power at
/// position `i` is the exponent of `q q'_i / q_sigma(i)` in `<p>`.
pub fn build_witness(
    group: &QuotientGroup,
    s1: &SuitableSequence,
    s2: &SuitableSequence,
    q: GroupElement,
) -> Result<IsomorphismWitness> {
    check_lengths(s1, s2)?;
    if scale(group, q, s2)? != s1.entries() {
        return Err(Error::NotIsomorphic);
    }
    let (p1, p2) = (s1.support_profile(), s2.support_profile());
    // block start offsets in s1
    let mut offsets = Vec::with_capacity(p1.len());
    let mut acc = 0;
    for &l in &p1.occurrences {
        offsets.push(acc);
        acc += l;
    }
    let mut sigma = Vec::with_capacity(s2.len());
    for (&q2, &l2) in p2.support.iter().zip(&p2.occurrences) {
        let target = group.mul(q, q2)?;
        let r = p1
            .support
            .binary_search(&target)
            .map_err(|_| Error::NotIsomorphic)?;
        sigma.extend((0..l2).map(|j| offsets[r] + j));
    }
    let params = group.params();
    let frobenius_powers = (0..s2.len())
        .map(|i| {
            let target = s1.entries()[sigma[i]].value();
            let ratio = group.unit_mul(
                group.unit_mul(q.value(), s2.entries()[i].value()),
                group.unit_inverse(target)?,
            );
            frobenius_exponent(params, ratio)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IsomorphismWitness {
        q,
        sigma,
        frobenius_powers,
    })
}
