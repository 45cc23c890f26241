//! Closed-form class counts from the subgroup lattice of G.
//!
//! `t(N, d)` counts sequences of St(1, m, N) fixed by a subgroup of order `d`.
//! `|S(H)|` counts those whose full stabilizer is exactly `H`; it is `t(N, |H|)`
//! minus the same quantity for every strictly larger subgroup. Each sequence
//! with stabilizer `H` lies in a class of size `N/|H|`, which gives
//!
//! `T(N) = t_N/N + (1/N) * sum over nontrivial H of (|H| - 1) |S(H)|`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::subgroups::SubgroupLattice;

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_n(group_order: usize, m: usize, n: usize) -> Result<()> {
    if n == 0 || n > m.min(group_order) {
        return Err(Error::OutOfRange(format!(
            "support size N = {n} must lie in 1..={}",
            m.min(group_order)
        )));
    }
    Ok(())
}

/// `t_N = C(|G| - 1, N - 1) * C(m - 1, N - 1)`, the size of St(1, m, N).
pub fn t_n(group_order: usize, m: usize, n: usize) -> Result<BigUint> {
    check_n(group_order, m, n)?;
    let k = (n - 1) as u64;
    Ok(binomial(group_order as u64 - 1, k) * binomial(m as u64 - 1, k))
}

/// `t(N, d) = C(|G|/d - 1, N/d - 1) * C(m/d - 1, N/d - 1)`.
pub fn t_n_d(group_order: usize, m: usize, n: usize, d: usize) -> Result<BigUint> {
    check_n(group_order, m, n)?;
    for (value, what) in [(n, "N"), (m, "m"), (group_order, "|G|")] {
        if d == 0 || value % d != 0 {
            return Err(Error::NotDivisible {
                divisor: d as u64,
                what: format!("{what} = {value}"),
            });
        }
    }
    let k = (n / d - 1) as u64;
    Ok(binomial((group_order / d) as u64 - 1, k) * binomial((m / d) as u64 - 1, k))
}

fn applicable(lat: &SubgroupLattice, m: usize, n: usize, index: usize) -> bool {
    let g = m.gcd(&n).gcd(&lat.group_order());
    let d = lat.get(index).order();
    d > 1 && g % d == 0
}

/// `|S(H)|` for every nontrivial subgroup `H` whose order divides
/// `gcd(m, N, |G|)`, keyed by lattice index. Evaluated from the largest
/// order down.
pub fn sbar_sizes(lat: &SubgroupLattice, m: usize, n: usize) -> Result<BTreeMap<usize, BigUint>> {
    check_n(lat.group_order(), m, n)?;
    let mut values: BTreeMap<usize, BigInt> = BTreeMap::new();
    // lattice indices are sorted by order, so reverse order visits supersets first
    for index in (0..lat.len()).rev() {
        if !applicable(lat, m, n, index) {
            continue;
        }
        let d = lat.get(index).order();
        let mut value = BigInt::from(t_n_d(lat.group_order(), m, n, d)?);
        for &k in lat.strict_supersets(index) {
            if let Some(v) = values.get(&k) {
                value -= v;
            }
        }
        if value.is_negative() {
            return Err(Error::InternalCount(format!(
                "negative |S(H)| = {value} for {} at m = {m}, N = {n}",
                lat.get(index)
            )));
        }
        values.insert(index, value);
    }
    Ok(values
        .into_iter()
        .map(|(k, v)| (k, v.to_biguint().expect("checked non-negative")))
        .collect())
}

fn divide_exact(numerator: BigUint, n: usize, context: &str) -> Result<BigUint> {
    let (q, r) = numerator.div_rem(&BigUint::from(n));
    if !r.is_zero() {
        return Err(Error::InternalCount(format!(
            "{context}: {numerator} is not divisible by N = {n}"
        )));
    }
    Ok(q)
}

/// Number of isomorphism classes with support size `N`.
pub fn t_of_n(lat: &SubgroupLattice, m: usize, n: usize) -> Result<BigUint> {
    let sbar = sbar_sizes(lat, m, n)?;
    class_count(lat, m, n, &sbar)
}

fn class_count(
    lat: &SubgroupLattice,
    m: usize,
    n: usize,
    sbar: &BTreeMap<usize, BigUint>,
) -> Result<BigUint> {
    let mut numerator = t_n(lat.group_order(), m, n)?;
    for (&index, value) in sbar {
        numerator += value * (lat.get(index).order() - 1);
    }
    divide_exact(numerator, n, "T(N)")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCount {
    pub t_n: BigUint,
    /// `|S(H)|` keyed by lattice index; only subgroups with order dividing
    /// `gcd(m, N, |G|)` and greater than 1 appear.
    pub sbar: BTreeMap<usize, BigUint>,
    pub classes: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub m: usize,
    pub per_n: BTreeMap<usize, SupportCount>,
    pub total: BigUint,
}

/// Class counts for every support size `1..=min(m, |G|)`.
pub fn total_count(lat: &SubgroupLattice, m: usize) -> Result<CountReport> {
    if m == 0 {
        return Err(Error::OutOfRange("sequence length m must be at least 1".into()));
    }
    let mut per_n = BTreeMap::new();
    let mut total = BigUint::zero();
    for n in 1..=m.min(lat.group_order()) {
        let sbar = sbar_sizes(lat, m, n)?;
        let classes = class_count(lat, m, n, &sbar)?;
        total += &classes;
        per_n.insert(
            n,
            SupportCount {
                t_n: t_n(lat.group_order(), m, n)?,
                sbar,
                classes,
            },
        );
    }
    Ok(CountReport { m, per_n, total })
}

/// `sum t_N / N` when `gcd(m, |G|) = 1`; every division must be exact.
pub fn coprime_shortcut(group_order: usize, m: usize) -> Result<Option<BigUint>> {
    if m == 0 {
        return Err(Error::OutOfRange("sequence length m must be at least 1".into()));
    }
    if m.gcd(&group_order) != 1 {
        return Ok(None);
    }
    let mut total = BigUint::zero();
    for n in 1..=m.min(group_order) {
        total += divide_exact(t_n(group_order, m, n)?, n, "t_N with gcd(m, |G|) = 1")?;
    }
    Ok(Some(total))
}
