//! The unit group U(p^n - 1), its Frobenius subgroup <p>, and the quotient
//! G = U(p^n - 1)/<p> with coset-minimum representatives.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Deterministic trial division.
pub fn is_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    if k < 4 {
        return true;
    }
    if k % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= k {
        if k % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn euler_phi(mut k: u64) -> u64 {
    if k == 0 {
        return 0;
    }
    let mut phi = k;
    let mut d = 2u64;
    while d.saturating_mul(d) <= k {
        if k % d == 0 {
            while k % d == 0 {
                k /= d;
            }
            phi -= phi / d;
        }
        d += 1;
    }
    if k > 1 {
        phi -= phi / k;
    }
    phi
}

/// Inverse of `a` modulo `modulus`, if it exists.
pub fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(modulus as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(modulus as i128) as u64)
}

/// All `1 <= q <= modulus` coprime to `modulus`. `unit_group(1)` is `[1]`.
pub fn unit_group(modulus: u64) -> Vec<u64> {
    if modulus <= 1 {
        return vec![1];
    }
    (1..=modulus).filter(|q| q.gcd(&modulus) == 1).collect()
}

/// The prime power `p^n` together with `modulus = p^n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    p: u64,
    n: u32,
    modulus: u64,
}

impl GroupParams {
    /// Largest admissible modulus is `2^32 - 1`.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        let order = p
            .checked_pow(n)
            .filter(|&q| q - 1 < (1u64 << 32))
            .ok_or(Error::ModulusTooLarge { p, n })?;
        Ok(Self {
            p,
            n,
            modulus: order - 1,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `p^n - 1`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^n`, the size of the field.
    pub fn field_order(&self) -> u64 {
        self.modulus + 1
    }

    /// GF(2): the modulus is 1 and G is trivial.
    pub fn is_degenerate(&self) -> bool {
        self.modulus == 1
    }

    fn reduce(&self, u: u64) -> u64 {
        if self.is_degenerate() {
            1
        } else {
            u % self.modulus
        }
    }

    fn check_unit(&self, u: u64) -> Result<u64> {
        let r = self.reduce(u);
        if self.is_degenerate() || r.gcd(&self.modulus) == 1 {
            Ok(r)
        } else {
            Err(Error::NotAUnit {
                value: u,
                modulus: self.modulus,
            })
        }
    }
}

/// Sorted powers `p^0, ..., p^(n-1)` modulo `p^n - 1`.
pub fn p_coset(params: &GroupParams) -> Result<Vec<u64>> {
    if params.is_degenerate() {
        return Err(Error::DegenerateModulus);
    }
    Ok(frobenius_powers(params))
}

fn frobenius_powers(params: &GroupParams) -> Vec<u64> {
    if params.is_degenerate() {
        return vec![1];
    }
    let m = params.modulus;
    let mut powers = Vec::with_capacity(params.n as usize);
    let mut h = 1u64;
    for _ in 0..params.n {
        powers.push(h);
        h = h * params.p % m;
    }
    powers.sort_unstable();
    powers
}

/// The unique `l` in `0..n` with `s = p^l (mod p^n - 1)`.
pub fn frobenius_exponent(params: &GroupParams, s: u64) -> Result<u32> {
    let target = params.check_unit(s)?;
    if params.is_degenerate() {
        return Ok(0);
    }
    let m = params.modulus;
    let mut h = 1u64;
    for l in 0..params.n {
        if h == target {
            return Ok(l);
        }
        h = h * params.p % m;
    }
    Err(Error::NotInFrobeniusCoset {
        value: s,
        p: params.p,
        modulus: m,
    })
}

/// A coset-minimum representative of an element of G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(u64);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(1);

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// G = U(p^n - 1)/<p>, each coset represented by its least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGroup {
    params: GroupParams,
    p_coset: Vec<u64>,
    elements: Vec<u64>,
}

impl QuotientGroup {
    pub fn new(params: GroupParams) -> Self {
        let p_coset = frobenius_powers(&params);
        let elements = if params.is_degenerate() {
            vec![1]
        } else {
            let m = params.modulus;
            (1..m)
                .filter(|&u| u.gcd(&m) == 1)
                .filter(|&u| p_coset.iter().all(|&h| u * h % m >= u))
                .collect()
        };
        Self {
            params,
            p_coset,
            elements,
        }
    }

    pub fn from_prime_power(p: u64, n: u32) -> Result<Self> {
        GroupParams::new(p, n).map(Self::new)
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn p_coset(&self) -> &[u64] {
        &self.p_coset
    }

    /// Canonical representatives in increasing order; `elements()[0] == 1`.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = GroupElement> + '_ {
        self.elements.iter().map(|&v| GroupElement(v))
    }

    pub fn element_values(&self) -> &[u64] {
        &self.elements
    }

    /// `|G| = phi(p^n - 1)/n`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    /// Position of a canonical representative in `elements()`.
    pub fn index_of(&self, value: u64) -> Option<usize> {
        self.elements.binary_search(&value).ok()
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        GroupElement(self.elements[index])
    }

    /// Checked wrapper for a canonical representative.
    pub fn element(&self, value: u64) -> Result<GroupElement> {
        self.index_of(value)
            .map(|_| GroupElement(value))
            .ok_or(Error::InvalidElement(value))
    }

    pub fn contains(&self, a: GroupElement) -> bool {
        self.index_of(a.0).is_some()
    }

    pub fn contains_value(&self, value: u64) -> bool {
        self.index_of(value).is_some()
    }

    fn check(&self, a: GroupElement) -> Result<u64> {
        if self.contains(a) {
            Ok(a.0)
        } else {
            Err(Error::InvalidElement(a.0))
        }
    }

    /// Least member of the coset `u<p>`.
    pub fn canonical_rep(&self, u: u64) -> Result<GroupElement> {
        let r = self.params.check_unit(u)?;
        Ok(GroupElement(self.canonicalize_unit(r)))
    }

    fn canonicalize_unit(&self, r: u64) -> u64 {
        if self.params.is_degenerate() {
            return 1;
        }
        let m = self.params.modulus;
        self.p_coset.iter().map(|&h| r * h % m).min().unwrap_or(r)
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(GroupElement(self.mul_values(a, b)))
    }

    fn mul_values(&self, a: u64, b: u64) -> u64 {
        if self.params.is_degenerate() {
            return 1;
        }
        self.canonicalize_unit(a * b % self.params.modulus)
    }

    pub fn inv(&self, a: GroupElement) -> Result<GroupElement> {
        let a = self.check(a)?;
        Ok(GroupElement(self.inv_value(a)))
    }

    fn inv_value(&self, a: u64) -> u64 {
        if self.params.is_degenerate() {
            return 1;
        }
        let inv = mod_inverse(a, self.params.modulus).expect("group elements are units");
        self.canonicalize_unit(inv)
    }

    /// Inverse of a unit in U(p^n - 1), not reduced to a coset representative.
    pub fn unit_inverse(&self, u: u64) -> Result<u64> {
        let r = self.params.check_unit(u)?;
        if self.params.is_degenerate() {
            return Ok(1);
        }
        Ok(mod_inverse(r, self.params.modulus).expect("checked unit"))
    }

    /// Product in U(p^n - 1), not reduced to a coset representative.
    pub fn unit_mul(&self, a: u64, b: u64) -> u64 {
        if self.params.is_degenerate() {
            return 1;
        }
        let m = self.params.modulus;
        (a % m) * (b % m) % m
    }

    /// Dense multiplication table over element indices.
    pub fn cayley_table(&self) -> CayleyTable {
        CayleyTable::new(self)
    }
}

/// Index-level multiplication and inversion tables for G.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    order: usize,
    products: Vec<u32>,
    inverses: Vec<u32>,
}

impl CayleyTable {
    fn new(group: &QuotientGroup) -> Self {
        let order = group.order();
        let index = |v: u64| group.index_of(v).expect("closure") as u32;
        let mut products = Vec::with_capacity(order * order);
        for &a in &group.elements {
            for &b in &group.elements {
                products.push(index(group.mul_values(a, b)));
            }
        }
        let inverses = group
            .elements
            .iter()
            .map(|&a| index(group.inv_value(a)))
            .collect();
        Self {
            order,
            products,
            inverses,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.products[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn row(&self, a: u32) -> &[u32] {
        let start = a as usize * self.order;
        &self.products[start..start + self.order]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }
}
