//! GF(p^n) as polynomials over GF(p) modulo the least monic irreducible of
//! degree n, and the scalar actions `(x_1, ..., x_m) s_a = (x_1 a^e_1, ..., x_m a^e_m)`
//! built from it.
//!
//! Elements are packed as `c_0 + c_1 p + ... + c_{n-1} p^(n-1)` where `c_i` is
//! the coefficient of `x^i`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::IsomorphismWitness;
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupParams};
use crate::sequences::SuitableSequence;

/// Default cap on action evaluations for exhaustive checks: 2^24.
pub const DEFAULT_VERIFICATION_BUDGET: u128 = 1 << 24;

/// Fields up to this order get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The packed coefficient encoding.
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
struct LogTables {
    // exp has length 2 (q - 1) so log a + log b never needs reducing
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    n: u32,
    order: u64,
    /// Monic, lowest degree first, length `n + 1`.
    modulus_poly: Vec<u64>,
    generator: FieldElement,
    tables: Option<LogTables>,
}

// Dense polynomial helpers over GF(p), lowest degree first.

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    poly_rem_monic(&mut prod, modulus, p);
    prod.truncate(n);
    prod.resize(n, 0);
    prod
}

/// In-place remainder modulo a monic polynomial.
fn poly_rem_monic(a: &mut [u64], modulus: &[u64], p: u64) {
    let d = modulus.len() - 1;
    for top in (d..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for k in 0..=d {
            let idx = top - d + k;
            let sub = (c as u128 * modulus[k] as u128 % p as u128) as u64;
            a[idx] = (a[idx] + p - sub) % p;
        }
    }
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    // trial division by every monic polynomial of degree 1..=n/2
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        let mut divisor = vec![0u64; d + 1];
        divisor[d] = 1;
        for code in 0..count {
            let mut c = code;
            for slot in divisor.iter_mut().take(d) {
                *slot = c % p;
                c /= p;
            }
            let mut r = f.to_vec();
            poly_rem_monic(&mut r, &divisor, p);
            if r[..d].iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            out.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

impl FiniteField {
    /// GF(p^n) with the least monic irreducible modulus, where polynomials are
    /// ordered by their packed lower coefficients (`c_{n-1}` most significant).
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let params = GroupParams::new(p, n)?;
        let order = params.field_order();
        let nn = n as usize;
        let mut modulus_poly = vec![0u64; nn + 1];
        modulus_poly[nn] = 1;
        let mut found = false;
        for code in 0..order {
            let mut c = code;
            for slot in modulus_poly.iter_mut().take(nn) {
                *slot = c % p;
                c /= p;
            }
            if is_irreducible(&modulus_poly, p) {
                found = true;
                break;
            }
        }
        assert!(found, "an irreducible polynomial of every degree exists");

        let mut field = Self {
            p,
            n,
            order,
            modulus_poly,
            generator: FieldElement::ONE,
            tables: None,
        };
        field.generator = field.find_generator();
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    fn find_generator(&self) -> FieldElement {
        let group_order = self.order - 1;
        let factors = prime_factors(group_order);
        (1..self.order)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_slow(g, group_order / r) != FieldElement::ONE)
            })
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let q1 = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * q1.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut x = FieldElement::ONE;
        for k in 0..q1.max(1) {
            exp[k] = x.0 as u32;
            log[x.0 as usize] = k as u32;
            x = self.mul_slow(x, self.generator);
        }
        for k in q1..2 * q1 {
            exp[k] = exp[k - q1];
        }
        LogTables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// `p^n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus_poly
    }

    /// Least element (in packed order) of multiplicative order `p^n - 1`.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn element(&self, index: u64) -> Option<FieldElement> {
        (index < self.order).then_some(FieldElement(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.n as usize);
        let mut c = x.0;
        for _ in 0..self.n {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.n as usize {
            return Err(Error::DimensionMismatch {
                expected: self.n as usize,
                actual: coeffs.len(),
            });
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::OutOfRange(format!("coefficient {c} >= p = {}", self.p)));
            }
            v = v * self.p + c;
        }
        Ok(FieldElement(v))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u64, 1u64);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u64, 1u64);
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    let k = t.log[a.0 as usize] + t.log[b.0 as usize];
                    FieldElement(t.exp[k as usize] as u64)
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = poly_mul_mod(&self.coeffs(a), &self.coeffs(b), &self.modulus_poly, self.p);
        self.from_coeffs(&prod).expect("reduced")
    }

    fn pow_slow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` for `e >= 0`, by square-and-multiply.
    pub fn pow_u(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if x.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let q1 = self.order - 1;
            let k = (t.log[x.0 as usize] as u128 * (e % q1) as u128 % q1 as u128) as usize;
            return FieldElement(t.exp[k] as u64);
        }
        self.pow_slow(x, e)
    }

    /// `x^e`; negative exponents go through the inverse.
    pub fn pow(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow_u(x, e as u64))
        } else {
            Ok(self.pow_u(self.inv(x)?, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow_u(x, self.order - 2))
    }

    /// `x^(p^l)`.
    pub fn frobenius(&self, x: FieldElement, l: u32) -> FieldElement {
        let mut y = x;
        for _ in 0..l {
            y = self.pow_u(y, self.p);
        }
        y
    }

    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let mut k = 1;
        let mut y = x;
        while y != FieldElement::ONE {
            y = self.mul(y, x);
            k += 1;
        }
        Ok(k)
    }

    fn unit_modulus(&self) -> u64 {
        self.order - 1
    }

    fn check_unit(&self, q: u64) -> Result<()> {
        let m = self.unit_modulus();
        if m == 1 || (q % m).gcd(&m) == 1 {
            Ok(())
        } else {
            Err(Error::NotAUnit {
                value: q,
                modulus: m,
            })
        }
    }

    /// `a^e` with `e` an exponent taken modulo `p^n - 1`; `e = 0 (mod p^n - 1)`
    /// is read as `p^n - 1` so that `0^e = 0`.
    fn pow_class(&self, a: FieldElement, e: u64) -> FieldElement {
        let m = self.unit_modulus();
        let r = e % m;
        self.pow_u(a, if r == 0 { m } else { r })
    }
}

/// Exponents of a scalar action, optionally twisted by Frobenius powers:
/// `(x_1 a^(q_1 p^l_1), ..., x_m a^(q_m p^l_m))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    exponents: Vec<u64>,
    frobenius_powers: Option<Vec<u32>>,
}

impl ActionSpec {
    pub fn new(
        field: &FiniteField,
        exponents: Vec<u64>,
        frobenius_powers: Option<Vec<u32>>,
    ) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::OutOfRange("an action needs at least one exponent".into()));
        }
        for &q in &exponents {
            field.check_unit(q)?;
        }
        if let Some(l) = &frobenius_powers {
            if l.len() != exponents.len() {
                return Err(Error::DimensionMismatch {
                    expected: exponents.len(),
                    actual: l.len(),
                });
            }
            if let Some(&bad) = l.iter().find(|&&x| x >= field.degree()) {
                return Err(Error::OutOfRange(format!(
                    "Frobenius power {bad} must be below n = {}",
                    field.degree()
                )));
            }
        }
        Ok(Self {
            exponents,
            frobenius_powers,
        })
    }

    pub fn from_sequence(field: &FiniteField, s: &SuitableSequence) -> Result<Self> {
        Self::new(field, s.values(), None)
    }

    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `q_i p^l_i` reduced modulo `p^n - 1`.
    fn effective_exponents(&self, field: &FiniteField) -> Vec<u64> {
        let m = field.unit_modulus();
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &q)| {
                let l = self.frobenius_powers.as_ref().map_or(0, |v| v[i]);
                let mut e = q % m;
                for _ in 0..l {
                    e = e * field.p() % m;
                }
                e
            })
            .collect()
    }

    /// Multipliers `a^(q_i p^l_i)` for one scalar.
    fn multipliers(&self, field: &FiniteField, exps: &[u64], alpha: FieldElement) -> Vec<FieldElement> {
        exps.iter().map(|&e| field.pow_class(alpha, e)).collect()
    }
}

/// `x s_alpha`, componentwise `x_i alpha^(q_i p^l_i)`.
pub fn apply_action(
    field: &FiniteField,
    spec: &ActionSpec,
    x: &[FieldElement],
    alpha: FieldElement,
) -> Result<Vec<FieldElement>> {
    if x.len() != spec.dimension() {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension(),
            actual: x.len(),
        });
    }
    let exps = spec.effective_exponents(field);
    Ok(x.iter()
        .zip(spec.multipliers(field, &exps, alpha))
        .map(|(&xi, a)| field.mul(xi, a))
        .collect())
}

/// Whether `(a^qi + b^qi)^qj = (a^qj + b^qj)^qi` for every `a, b` in the field.
pub fn check_field_identity(field: &FiniteField, qi: u64, qj: u64) -> Result<bool> {
    field.check_unit(qi)?;
    field.check_unit(qj)?;
    let pi: Vec<FieldElement> = field.elements().map(|a| field.pow_class(a, qi)).collect();
    let pj: Vec<FieldElement> = field.elements().map(|a| field.pow_class(a, qj)).collect();
    for a in 0..field.order() as usize {
        for b in a..field.order() as usize {
            let lhs = field.pow_class(field.add(pi[a], pi[b]), qj);
            let rhs = field.pow_class(field.add(pj[a], pj[b]), qi);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every `x` in `F^m` and every scalar.
    Exhaustive,
    /// The standard basis plus `samples` uniform random vectors, every scalar.
    Sampled { samples: usize, seed: u64 },
}

impl VerifyMode {
    pub fn sampled() -> Self {
        VerifyMode::Sampled {
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessVerification {
    /// Every component `x -> x^(p^l)` of theta is additive.
    pub additive: bool,
    /// `sigma` is a permutation and every component map is injective.
    pub bijective: bool,
    /// `theta(x s_alpha) = theta(x) eta(s_alpha)` on every tested pair.
    pub compatible: bool,
    /// Number of `(x, alpha)` pairs tested.
    pub checks: u64,
}

impl WitnessVerification {
    pub fn verified(&self) -> bool {
        self.additive && self.bijective && self.compatible
    }
}

/// Field-level check that the witness defines an isomorphism between the
/// near-vector spaces of `s1` (scalars `s_alpha`) and `s2` (scalars `t_beta`),
/// with `theta(x)_i = x_{sigma(i)}^(p^l_i)` and `eta(s_alpha) = t_{alpha^q}`.
pub fn verify_witness(
    field: &FiniteField,
    s1: &SuitableSequence,
    s2: &SuitableSequence,
    w: &IsomorphismWitness,
    mode: VerifyMode,
    budget: u128,
) -> Result<WitnessVerification> {
    let m = s1.len();
    for (len, what) in [(s2.len(), m), (w.sigma.len(), m), (w.frobenius_powers.len(), m)] {
        if len != what {
            return Err(Error::DimensionMismatch {
                expected: what,
                actual: len,
            });
        }
    }
    let order = field.order();
    let q1 = ActionSpec::from_sequence(field, s1)?;
    let q2 = ActionSpec::from_sequence(field, s2)?;
    let e1 = q1.effective_exponents(field);
    let e2 = q2.effective_exponents(field);

    let checks_needed = match mode {
        VerifyMode::Exhaustive => (order as u128)
            .checked_pow(m as u32 + 1)
            .unwrap_or(u128::MAX),
        VerifyMode::Sampled { samples, .. } => (samples + m) as u128 * order as u128,
    };
    if checks_needed > budget {
        return Err(Error::BudgetExceeded {
            required: checks_needed,
            budget,
        });
    }

    let mut seen = vec![false; m];
    let sigma_ok = w
        .sigma
        .iter()
        .all(|&j| j < m && !std::mem::replace(&mut seen[j], true));
    let powers_ok = w.frobenius_powers.iter().all(|&l| l < field.degree());
    if !sigma_ok || !powers_ok {
        return Ok(WitnessVerification {
            additive: powers_ok,
            bijective: false,
            compatible: false,
            checks: 0,
        });
    }

    // Frobenius maps for the powers in use, as lookup tables.
    let mut frob: HashMap<u32, Vec<FieldElement>> = HashMap::new();
    for &l in &w.frobenius_powers {
        frob.entry(l)
            .or_insert_with(|| field.elements().map(|x| field.frobenius(x, l)).collect());
    }
    let mut additive = true;
    let mut bijective = true;
    for table in frob.values() {
        let distinct: HashSet<FieldElement> = table.iter().copied().collect();
        bijective &= distinct.len() as u64 == order;
        'pairs: for a in field.elements() {
            for b in field.elements() {
                let lhs = table[field.add(a, b).0 as usize];
                if lhs != field.add(table[a.0 as usize], table[b.0 as usize]) {
                    additive = false;
                    break 'pairs;
                }
            }
        }
    }
    let frob_of = |i: usize| &frob[&w.frobenius_powers[i]];

    let scalars: Vec<FieldElement> = field.elements().collect();
    let lhs_mult: Vec<Vec<FieldElement>> = scalars
        .iter()
        .map(|&a| q1.multipliers(field, &e1, a))
        .collect();
    let rhs_mult: Vec<Vec<FieldElement>> = scalars
        .iter()
        .map(|&a| q2.multipliers(field, &e2, field.pow_class(a, w.q.value())))
        .collect();

    let mut checks = 0u64;
    let mut theta_x = vec![FieldElement::ZERO; m];
    let mut check = |x: &[FieldElement], checks: &mut u64| -> bool {
        for i in 0..m {
            theta_x[i] = frob_of(i)[x[w.sigma[i]].0 as usize];
        }
        for (lm, rm) in lhs_mult.iter().zip(&rhs_mult) {
            *checks += 1;
            for i in 0..m {
                let j = w.sigma[i];
                let lhs = frob_of(i)[field.mul(x[j], lm[j]).0 as usize];
                if lhs != field.mul(theta_x[i], rm[i]) {
                    return false;
                }
            }
        }
        true
    };

    let mut compatible = true;
    let mut x = vec![FieldElement::ZERO; m];
    if let VerifyMode::Sampled { .. } = mode {
        for i in 0..m {
            x.fill(FieldElement::ZERO);
            x[i] = FieldElement::ONE;
            compatible &= check(&x, &mut checks);
        }
    }
    match mode {
        VerifyMode::Exhaustive => {
            x.fill(FieldElement::ZERO);
            'all: loop {
                if !check(&x, &mut checks) {
                    compatible = false;
                    break;
                }
                for slot in x.iter_mut() {
                    if slot.0 + 1 < order {
                        slot.0 += 1;
                        continue 'all;
                    }
                    slot.0 = 0;
                }
                break;
            }
        }
        VerifyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                for slot in x.iter_mut() {
                    *slot = FieldElement(rng.gen_range(0..order));
                }
                if !check(&x, &mut checks) {
                    compatible = false;
                    break;
                }
            }
        }
    }
    Ok(WitnessVerification {
        additive,
        bijective,
        compatible,
        checks,
    })
}

/// Outcome of checking the near-vector space conditions for one action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// Every `s_alpha` is an endomorphism of `(V, +)`.
    pub endomorphisms: bool,
    /// `0`, `id` and `-id` are among the scalars.
    pub contains_zero_id_neg: bool,
    /// The nonzero scalars form a subgroup of `Aut(V)`.
    pub units_form_group: bool,
    /// `x s_a = x s_b` implies `x = 0` or `s_a = s_b`.
    pub fixed_point_free: bool,
    pub quasi_kernel_size: u64,
    /// The quasi-kernel generates `(V, +)`.
    pub quasi_kernel_generates: bool,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.endomorphisms
            && self.contains_zero_id_neg
            && self.units_form_group
            && self.fixed_point_free
            && self.quasi_kernel_generates
    }
}

/// Vectors of `F^m` packed base `p^n`, first coordinate least significant.
struct VectorSpace<'a> {
    field: &'a FiniteField,
    m: usize,
    size: u64,
}

impl VectorSpace<'_> {
    fn decode(&self, mut v: u64, out: &mut [FieldElement]) {
        for slot in out.iter_mut() {
            *slot = FieldElement(v % self.field.order);
            v /= self.field.order;
        }
    }

    fn encode(&self, x: &[FieldElement]) -> u64 {
        x.iter().rev().fold(0, |acc, e| acc * self.field.order + e.0)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let mut xa = vec![FieldElement::ZERO; self.m];
        let mut xb = vec![FieldElement::ZERO; self.m];
        self.decode(a, &mut xa);
        self.decode(b, &mut xb);
        for (u, v) in xa.iter_mut().zip(&xb) {
            *u = self.field.add(*u, *v);
        }
        self.encode(&xa)
    }

    fn neg(&self, a: u64) -> u64 {
        let mut x = vec![FieldElement::ZERO; self.m];
        self.decode(a, &mut x);
        for u in x.iter_mut() {
            *u = self.field.neg(*u);
        }
        self.encode(&x)
    }
}

/// Exhaustive check of the near-vector space conditions for `(F^m, A)` with
/// `A = {s_alpha}`. Only feasible for tiny fields and dimensions.
pub fn check_axioms(field: &FiniteField, spec: &ActionSpec, budget: u128) -> Result<AxiomReport> {
    let m = spec.dimension();
    let q = field.order() as u128;
    let size = q.checked_pow(m as u32).unwrap_or(u128::MAX);
    let required = size.saturating_mul(size).saturating_mul(q).max(size.saturating_mul(q * q * q));
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let space = VectorSpace {
        field,
        m,
        size: size as u64,
    };
    let exps = spec.effective_exponents(field);
    let scalars: Vec<FieldElement> = field.elements().collect();

    // image tables: maps[alpha][x] = x s_alpha
    let mut buf = vec![FieldElement::ZERO; m];
    let maps: Vec<Vec<u64>> = scalars
        .iter()
        .map(|&a| {
            let mult = spec.multipliers(field, &exps, a);
            (0..space.size)
                .map(|v| {
                    space.decode(v, &mut buf);
                    for (x, k) in buf.iter_mut().zip(&mult) {
                        *x = field.mul(*x, *k);
                    }
                    space.encode(&buf)
                })
                .collect()
        })
        .collect();
    let sum_table: Vec<Vec<u64>> = (0..space.size)
        .map(|a| (0..space.size).map(|b| space.add(a, b)).collect())
        .collect();

    let endomorphisms = maps.iter().all(|f| {
        (0..space.size).all(|a| {
            (0..space.size).all(|b| {
                f[sum_table[a as usize][b as usize] as usize]
                    == sum_table[f[a as usize] as usize][f[b as usize] as usize]
            })
        })
    });

    // distinct endomorphisms in A
    let mut distinct: HashMap<&[u64], usize> = HashMap::new();
    for f in &maps {
        let k = distinct.len();
        distinct.entry(f.as_slice()).or_insert(k);
    }
    let zero_map = vec![0u64; space.size as usize];
    let id_map: Vec<u64> = (0..space.size).collect();
    let neg_map: Vec<u64> = (0..space.size).map(|v| space.neg(v)).collect();
    let contains_zero_id_neg = [&zero_map, &id_map, &neg_map]
        .iter()
        .all(|f| distinct.contains_key(f.as_slice()));

    let units: Vec<&Vec<u64>> = distinct
        .keys()
        .filter(|f| **f != zero_map.as_slice())
        .map(|f| maps.iter().find(|g| g.as_slice() == *f).unwrap())
        .collect();
    let unit_set: HashSet<&[u64]> = units.iter().map(|f| f.as_slice()).collect();
    let bijective = units.iter().all(|f| {
        let image: HashSet<u64> = f.iter().copied().collect();
        image.len() as u64 == space.size
    });
    let mut closed = true;
    let mut has_inverses = true;
    for f in &units {
        let mut inverse_found = false;
        for g in &units {
            let comp: Vec<u64> = f.iter().map(|&v| g[v as usize]).collect();
            if !unit_set.contains(comp.as_slice()) {
                closed = false;
            }
            if comp == id_map {
                inverse_found = true;
            }
        }
        has_inverses &= inverse_found;
    }
    let units_form_group =
        endomorphisms && bijective && closed && has_inverses && unit_set.contains(id_map.as_slice());

    let maps_distinct: Vec<&[u64]> = distinct.keys().copied().collect();
    let fixed_point_free = (1..space.size).all(|x| {
        let images: HashSet<u64> = maps_distinct.iter().map(|f| f[x as usize]).collect();
        images.len() == maps_distinct.len()
    });

    let quasi_kernel: Vec<u64> = (0..space.size)
        .filter(|&x| {
            let xs: HashSet<u64> = maps.iter().map(|f| f[x as usize]).collect();
            maps.iter().all(|fa| {
                maps.iter()
                    .all(|fb| xs.contains(&sum_table[fa[x as usize] as usize][fb[x as usize] as usize]))
            })
        })
        .collect();

    // additive closure of the quasi-kernel
    let mut reached = vec![false; space.size as usize];
    reached[0] = true;
    let mut queue = VecDeque::from([0u64]);
    while let Some(v) = queue.pop_front() {
        for &g in &quasi_kernel {
            let w = sum_table[v as usize][g as usize];
            if !reached[w as usize] {
                reached[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    let quasi_kernel_generates = reached.iter().all(|&r| r);

    Ok(AxiomReport {
        endomorphisms,
        contains_zero_id_neg,
        units_form_group,
        fixed_point_free,
        quasi_kernel_size: quasi_kernel.len() as u64,
        quasi_kernel_generates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{build_witness, isomorphic};
    use crate::group::{unit_group, QuotientGroup};

    fn field(p: u64, n: u32) -> FiniteField {
        FiniteField::new(p, n).unwrap()
    }

    #[test]
    fn construction() {
        let f = field(3, 1);
        assert_eq!(f.order(), 3);
        assert_eq!(f.modulus_poly(), &[0, 1]);
        // x^3 + 2x + 1 is the least monic irreducible cubic over GF(3)
        assert_eq!(field(3, 3).modulus_poly(), &[1, 2, 0, 1]);
        // x^2 + 2 over GF(5)
        assert_eq!(field(5, 2).modulus_poly(), &[2, 0, 1]);
        assert_eq!(field(2, 3).modulus_poly(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(6, 1).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(
            FiniteField::new(3, 30),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn lagrange_and_generator() {
        let f = field(3, 3);
        for x in f.elements().skip(1) {
            assert_eq!(f.pow(x, 26).unwrap(), f.one());
        }
        let g = f.generator();
        assert_eq!(f.multiplicative_order(g).unwrap(), 26);
        for x in f.elements().skip(1).take_while(|&x| x < g) {
            assert!(f.multiplicative_order(x).unwrap() < 26);
        }
        assert_eq!(f.pow(g, 0).unwrap(), f.one());
        assert_eq!(f.pow(f.zero(), 0).unwrap(), f.one());
        assert_eq!(f.pow(f.zero(), -1), Err(Error::ZeroInverse));
        assert_eq!(f.mul(f.pow(g, -5).unwrap(), f.pow(g, 5).unwrap()), f.one());
    }

    fn check_field_laws(f: &FiniteField) {
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            // Frobenius is additive
            for &b in &els {
                assert_eq!(
                    f.frobenius(f.add(a, b), 1),
                    f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                );
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
        let step = (els.len() / 9).max(1);
        for &a in els.iter().step_by(step) {
            for &b in &els {
                for &c in &els {
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                }
            }
        }
    }

    #[test]
    fn field_laws_small_fields() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4), (2, 6)] {
            check_field_laws(&field(p, n));
        }
    }

    #[test]
    fn slow_path_matches_tables() {
        let f = field(3, 4);
        for a in f.elements() {
            for e in [0u64, 1, 2, 5, 79, 80, 81, 1000] {
                assert_eq!(f.pow_u(a, e), f.pow_slow(a, e));
            }
        }
        // a field above the table limit still works
        let big = field(2, 21);
        assert!(big.tables.is_none());
        let g = big.generator();
        assert_eq!(big.pow_u(g, big.order() - 1), big.one());
        assert_ne!(big.pow_u(g, (big.order() - 1) / 7), big.one());
    }

    #[test]
    fn actions() {
        let f = field(3, 3);
        let spec = ActionSpec::new(&f, vec![1, 1, 5, 5], None).unwrap();
        let x = vec![f.one(); 4];
        assert_eq!(apply_action(&f, &spec, &x, f.one()).unwrap(), x);
        assert_eq!(apply_action(&f, &spec, &x, f.zero()).unwrap(), vec![f.zero(); 4]);
        let g = f.generator();
        let g5 = f.pow(g, 5).unwrap();
        assert_eq!(apply_action(&f, &spec, &x, g).unwrap(), vec![g, g, g5, g5]);
        assert!(matches!(
            apply_action(&f, &spec, &x[..3], g),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ActionSpec::new(&field(7, 1), vec![1, 2], None),
            Err(Error::NotAUnit { .. })
        ));
        let twisted = ActionSpec::new(&f, vec![1, 5], Some(vec![0, 2])).unwrap();
        let y = apply_action(&f, &twisted, &x[..2], g).unwrap();
        assert_eq!(y[1], f.pow(g, 45).unwrap());
    }

    #[test]
    fn field_identity_examples() {
        let f = field(3, 3);
        assert!(check_field_identity(&f, 5, 15).unwrap());
        assert!(!check_field_identity(&f, 5, 7).unwrap());
        assert!(check_field_identity(&f, 7, 7).unwrap());
        assert!(check_field_identity(&f, 2, 5).is_err());
    }

    #[test]
    fn field_identity_matches_cosets_gf16() {
        let f = field(2, 4);
        let g = QuotientGroup::from_prime_power(2, 4).unwrap();
        let units = unit_group(15);
        for &a in &units {
            for &b in &units {
                let same = g.canonical_rep(a).unwrap() == g.canonical_rep(b).unwrap();
                assert_eq!(check_field_identity(&f, a, b).unwrap(), same, "{a} {b}");
            }
        }
    }

    fn counterexample() -> (FiniteField, QuotientGroup, SuitableSequence, SuitableSequence) {
        let g = QuotientGroup::from_prime_power(3, 3).unwrap();
        let s1 = SuitableSequence::new(&g, &[1, 1, 5, 5]).unwrap();
        let s2 = SuitableSequence::new(&g, &[1, 1, 7, 7]).unwrap();
        (field(3, 3), g, s1, s2)
    }

    #[test]
    fn witness_verification_sampled() {
        let (f, g, s1, s2) = counterexample();
        let q = isomorphic(&g, &s1, &s2).unwrap().unwrap();
        let w = build_witness(&g, &s1, &s2, q).unwrap();
        let r = verify_witness(&f, &s1, &s2, &w, VerifyMode::sampled(), u128::MAX).unwrap();
        assert!(r.verified());
        assert_eq!(r.checks, (1000 + 4) * 27);

        let corrupted = IsomorphismWitness {
            frobenius_powers: vec![0; 4],
            ..w.clone()
        };
        let r = verify_witness(&f, &s1, &s2, &corrupted, VerifyMode::sampled(), u128::MAX).unwrap();
        assert!(!r.verified());
        assert!(!r.compatible);

        let unscaled = IsomorphismWitness {
            q: g.identity(),
            ..w.clone()
        };
        assert!(!verify_witness(&f, &s1, &s2, &unscaled, VerifyMode::sampled(), u128::MAX)
            .unwrap()
            .verified());

        let identity = build_witness(&g, &s1, &s1, g.identity()).unwrap();
        assert!(verify_witness(&f, &s1, &s1, &identity, VerifyMode::Exhaustive, u128::MAX)
            .unwrap()
            .verified());
    }

    #[test]
    fn verification_budget() {
        let (f, g, s1, s2) = counterexample();
        let w = build_witness(&g, &s1, &s2, g.element(5).unwrap()).unwrap();
        assert_eq!(
            verify_witness(&f, &s1, &s2, &w, VerifyMode::Exhaustive, 1000),
            Err(Error::BudgetExceeded {
                required: 27u128.pow(5),
                budget: 1000
            })
        );
        // 27^5 fits under the default budget
        assert!(27u128.pow(5) <= DEFAULT_VERIFICATION_BUDGET);
    }

    #[test]
    fn axioms_hold_for_constructed_spaces() {
        let f4 = field(2, 2);
        let r = check_axioms(&f4, &ActionSpec::new(&f4, vec![1, 1], None).unwrap(), u128::MAX).unwrap();
        assert!(r.all_hold(), "{r:?}");
        let f8 = field(2, 3);
        let r = check_axioms(&f8, &ActionSpec::new(&f8, vec![1, 3], None).unwrap(), u128::MAX).unwrap();
        assert!(r.all_hold(), "{r:?}");
        let f9 = field(3, 2);
        let r = check_axioms(&f9, &ActionSpec::new(&f9, vec![1, 3], Some(vec![0, 1])).unwrap(), u128::MAX)
            .unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert!(matches!(
            check_axioms(&f9, &ActionSpec::new(&f9, vec![1, 1, 1, 1], None).unwrap(), 1 << 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn quasi_kernel_of_mixed_exponents() {
        // For (1, 3) over GF(8) the classes differ, so no vector with both
        // coordinates nonzero can be in the quasi-kernel.
        let f8 = field(2, 3);
        let r = check_axioms(&f8, &ActionSpec::new(&f8, vec![1, 3], None).unwrap(), u128::MAX).unwrap();
        assert_eq!(r.quasi_kernel_size, 8 + 8 - 1);
        let r = check_axioms(&f8, &ActionSpec::new(&f8, vec![1, 2], None).unwrap(), u128::MAX).unwrap();
        assert_eq!(r.quasi_kernel_size, 64);
    }
}
