// Exhaustive structural checks over St(1, m, G). Each returns the list of
// violations found; an empty list means the property holds.

use std::collections::BTreeMap;

use nearvec_core::sequences::enumerate_st1;
use nearvec_core::subgroups::SubgroupLattice;
use nearvec_core::{
    all_subgroups, in_st_h, isomorphic, orbit, sbar_sizes, scale, QuotientGroup, SuitableSequence,
};

/// Prime powers `p^n <= limit` whose group has order at most `max_order`.
pub fn small_groups(limit: u64, max_order: usize) -> Vec<(u64, u32, QuotientGroup)> {
    let mut out = Vec::new();
    for p in 2..=limit {
        if !nearvec_core::group::is_prime(p) {
            continue;
        }
        let mut n = 1;
        while p.pow(n) <= limit {
            let g = QuotientGroup::from_prime_power(p, n).unwrap();
            if g.order() <= max_order {
                out.push((p, n, g));
            }
            n += 1;
        }
    }
    out
}

/// `{q : q S = S}`, as lattice index.
pub fn stabilizer(g: &QuotientGroup, lat: &SubgroupLattice, s: &SuitableSequence) -> usize {
    let fixed: Vec<u64> = g
        .elements()
        .filter(|&q| scale(g, q, s).unwrap() == s.entries())
        .map(|q| q.value())
        .collect();
    let h = nearvec_core::Subgroup::from_elements(g, &fixed).expect("stabilizer is a subgroup");
    lat.index_of(&h).expect("stabilizer is in the lattice")
}

pub fn action_laws(g: &QuotientGroup, m: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for s in enumerate_st1(g, m).unwrap() {
        for a in g.elements() {
            let sa = scale(g, a, &s).unwrap();
            let back = {
                let inv = g.inv(a).unwrap();
                let mut v: Vec<_> = sa.iter().map(|&e| g.mul(inv, e).unwrap()).collect();
                v.sort();
                v
            };
            if back != s.entries() {
                bad.push(format!("q^-1 q S != S for q={a}, S={s}"));
            }
            for b in g.elements() {
                let lhs = {
                    let mut v: Vec<_> = scale(g, b, &s)
                        .unwrap()
                        .iter()
                        .map(|&e| g.mul(a, e).unwrap())
                        .collect();
                    v.sort();
                    v
                };
                if lhs != scale(g, g.mul(a, b).unwrap(), &s).unwrap() {
                    bad.push(format!("a(bS) != (ab)S for a={a}, b={b}, S={s}"));
                }
            }
        }
    }
    bad
}

/// Reflexive, symmetric, transitive, and consistent with `orbit`.
pub fn equivalence_laws(g: &QuotientGroup, m: usize) -> Vec<String> {
    let mut bad = Vec::new();
    let all = enumerate_st1(g, m).unwrap();
    let mut label: BTreeMap<&SuitableSequence, usize> = BTreeMap::new();
    let orbits: Vec<_> = all.iter().map(|s| orbit(g, s).unwrap()).collect();
    for (i, s) in all.iter().enumerate() {
        let least = orbits[i].iter().next().unwrap();
        label.insert(s, all.iter().position(|x| x == least).unwrap());
        if isomorphic(g, s, s).unwrap() != Some(g.identity()) {
            bad.push(format!("not reflexive with q=1 at {s}"));
        }
    }
    for (i, a) in all.iter().enumerate() {
        for b in &all {
            let q = isomorphic(g, a, b).unwrap();
            if q.is_some() != orbits[i].contains(b) {
                bad.push(format!("isomorphic and orbit disagree on {a} / {b}"));
            }
            if q.is_some() != (label[a] == label[b]) {
                bad.push(format!("relation is not a partition at {a} / {b}"));
            }
            if let Some(q) = q {
                if scale(g, q, b).unwrap() != a.entries() {
                    bad.push(format!("returned q={q} does not map {b} onto {a}"));
                }
                let back = isomorphic(g, b, a).unwrap();
                if back.is_none() {
                    bad.push(format!("not symmetric at {a} / {b}"));
                }
                if scale(g, g.inv(q).unwrap(), a).unwrap() != b.entries() {
                    bad.push(format!("q^-1 does not map {a} onto {b}"));
                }
            }
        }
    }
    // transitivity through composed multipliers, within each class
    for (i, a) in all.iter().enumerate() {
        for b in &orbits[i] {
            for c in &orbits[i] {
                let (q1, q2) = (
                    isomorphic(g, a, b).unwrap().unwrap(),
                    isomorphic(g, b, c).unwrap().unwrap(),
                );
                if scale(g, g.mul(q1, q2).unwrap(), c).unwrap() != a.entries() {
                    bad.push(format!("not transitive through {a}, {b}, {c}"));
                }
            }
        }
    }
    bad
}

/// Orbit sizes are `N/|H|` with `H` the stabilizer, a lattice subgroup whose
/// order divides `gcd(m, N, |G|)`; an orbit is short exactly when the
/// sequence lies in St(H, m, N) for a nontrivial `H`.
pub fn orbit_laws(g: &QuotientGroup, m: usize) -> Vec<String> {
    let mut bad = Vec::new();
    let lat = all_subgroups(g);
    for s in enumerate_st1(g, m).unwrap() {
        let n = s.support_size();
        let size = orbit(g, &s).unwrap().len();
        let h = lat.get(stabilizer(g, &lat, &s)).order();
        let gcd = gcd(gcd(m, n), g.order());
        if size * h != n || gcd % h != 0 {
            bad.push(format!("|orbit({s})| = {size}, stabilizer order {h}"));
        }
        let short = lat
            .subgroups()
            .iter()
            .any(|h| !h.is_trivial() && in_st_h(g, h, &s, n));
        if (size < n) != short {
            bad.push(format!("short orbit {} but nontrivial family {short} for {s}", size < n));
        }
    }
    bad
}

/// Within St(H, m, N) the orbit has exactly `N/|H|` members iff no strictly
/// larger applicable subgroup also contains the sequence's family; and the
/// number of sequences with stabilizer exactly `H` matches the recursion.
pub fn maximality(g: &QuotientGroup, m: usize) -> Vec<String> {
    let mut bad = Vec::new();
    let lat = all_subgroups(g);
    let all = enumerate_st1(g, m).unwrap();
    for n in 1..=m.min(g.order()) {
        let g_nm = gcd(gcd(m, n), g.order());
        let mut exact: BTreeMap<usize, u64> = BTreeMap::new();
        for s in all.iter().filter(|s| s.support_size() == n) {
            *exact.entry(stabilizer(g, &lat, s)).or_default() += 1;
        }
        let sbar = sbar_sizes(&lat, m, n).unwrap();
        for (i, h) in lat.subgroups().iter().enumerate() {
            if h.is_trivial() || g_nm % h.order() != 0 {
                continue;
            }
            let have = exact.get(&i).copied().unwrap_or(0);
            if sbar[&i] != have.into() {
                bad.push(format!("|S(H)| for {h} at m={m}, N={n}: formula {} vs {have}", sbar[&i]));
            }
            for s in all.iter().filter(|s| s.support_size() == n && in_st_h(g, h, s, n)) {
                let full = orbit(g, s).unwrap().len() == n / h.order();
                let larger = lat.strict_supersets(i).iter().any(|&k| {
                    g_nm % lat.get(k).order() == 0 && in_st_h(g, lat.get(k), s, n)
                });
                if full == larger {
                    bad.push(format!("maximality fails for {s} in family of {h}"));
                }
            }
        }
    }
    bad
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
