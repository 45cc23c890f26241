//! Subgroup lattice of the abelian group G.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GroupElement, QuotientGroup};

/// A subgroup stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    // Element indices into `QuotientGroup::elements`, sorted; value order and
    // index order agree.
    indices: Vec<u32>,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    fn from_indices(group: &QuotientGroup, mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        let elements = indices
            .iter()
            .map(|&i| group.element_at(i as usize))
            .collect();
        Self { indices, elements }
    }

    pub fn trivial(group: &QuotientGroup) -> Self {
        Self::from_indices(group, vec![0])
    }

    pub fn whole(group: &QuotientGroup) -> Self {
        Self::from_indices(group, (0..group.order() as u32).collect())
    }

    /// Validates identity membership and closure under multiplication. In a
    /// finite group that also gives closure under inverses.
    pub fn from_elements(group: &QuotientGroup, values: &[u64]) -> Result<Self> {
        let mut indices = Vec::with_capacity(values.len());
        for &v in values {
            let i = group.index_of(v).ok_or(Error::InvalidElement(v))?;
            indices.push(i as u32);
        }
        let candidate = Self::from_indices(group, indices);
        if candidate.indices.first() != Some(&0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        let table = group.cayley_table();
        for &a in &candidate.indices {
            for &b in &candidate.indices {
                if candidate.indices.binary_search(&table.mul(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!(
                        "{} * {} leaves the set",
                        group.element_at(a as usize),
                        group.element_at(b as usize)
                    )));
                }
            }
        }
        Ok(candidate)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.indices.len() == 1
    }

    pub fn contains(&self, a: GroupElement) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn contains_index(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.indices.len() <= other.indices.len()
            && self.indices.iter().all(|i| other.contains_index(*i))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// `{ab : a in h1, b in h2}`; a subgroup because G is abelian.
pub fn product_subgroup(group: &QuotientGroup, h1: &Subgroup, h2: &Subgroup) -> Subgroup {
    let table = group.cayley_table();
    product_with(group, &table, h1, h2)
}

fn product_with(
    group: &QuotientGroup,
    table: &crate::group::CayleyTable,
    h1: &Subgroup,
    h2: &Subgroup,
) -> Subgroup {
    let set: BTreeSet<u32> = h1
        .indices
        .iter()
        .flat_map(|&a| h2.indices.iter().map(move |&b| table.mul(a, b)))
        .collect();
    Subgroup::from_indices(group, set.into_iter().collect())
}

/// The cosets `qH` partitioning G, each sorted, listed by least element.
pub fn cosets(group: &QuotientGroup, h: &Subgroup) -> Result<Vec<Vec<GroupElement>>> {
    let values: Vec<u64> = h.elements.iter().map(|e| e.value()).collect();
    let h = Subgroup::from_elements(group, &values)?;
    let table = group.cayley_table();
    let mut assigned = vec![false; group.order()];
    let mut out = Vec::with_capacity(group.order() / h.order());
    for q in 0..group.order() as u32 {
        if assigned[q as usize] {
            continue;
        }
        let mut coset: Vec<u32> = h.indices.iter().map(|&x| table.mul(q, x)).collect();
        coset.sort_unstable();
        for &c in &coset {
            assigned[c as usize] = true;
        }
        out.push(coset.into_iter().map(|c| group.element_at(c as usize)).collect());
    }
    Ok(out)
}

/// Every subgroup of G, grouped by order, with strict containment.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    group_order: usize,
    subgroups: Vec<Subgroup>,
    by_order: BTreeMap<usize, Vec<usize>>,
    /// `supersets[i]` lists every `j` with `subgroups[i]` strictly inside `subgroups[j]`.
    supersets: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    /// Cyclic subgroups first, then closure under pairwise products until
    /// nothing new appears.
    pub fn new(group: &QuotientGroup) -> Self {
        let table = group.cayley_table();
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        for g in 0..group.order() as u32 {
            let mut powers = vec![0u32];
            let mut x = g;
            while x != 0 {
                powers.push(x);
                x = table.mul(x, g);
            }
            found.insert(Subgroup::from_indices(group, powers));
        }
        let mut frontier: Vec<Subgroup> = found.iter().cloned().collect();
        while !frontier.is_empty() {
            let snapshot: Vec<Subgroup> = found.iter().cloned().collect();
            let mut next = Vec::new();
            for a in &frontier {
                for b in &snapshot {
                    let prod = product_with(group, &table, a, b);
                    if !found.contains(&prod) {
                        found.insert(prod.clone());
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }

        let mut subgroups: Vec<Subgroup> = found.into_iter().collect();
        subgroups.sort_by(|a, b| (a.order(), &a.indices).cmp(&(b.order(), &b.indices)));
        let mut by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, h) in subgroups.iter().enumerate() {
            by_order.entry(h.order()).or_default().push(i);
        }
        let supersets = subgroups
            .iter()
            .map(|h| {
                subgroups
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| k.order() > h.order() && h.is_subset_of(k))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Self {
            group_order: group.order(),
            subgroups,
            by_order,
            supersets,
        }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// All subgroups, sorted by order and then by element list.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn get(&self, index: usize) -> &Subgroup {
        &self.subgroups[index]
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|k| k == h)
    }

    pub fn orders(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_order.iter().map(|(&d, v)| (d, v.len()))
    }

    /// Lattice indices of the subgroups of order `d`.
    pub fn indices_of_order(&self, d: usize) -> &[usize] {
        self.by_order.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn subgroups_of_order(&self, d: usize) -> Vec<&Subgroup> {
        self.indices_of_order(d)
            .iter()
            .map(|&i| &self.subgroups[i])
            .collect()
    }

    /// Lattice indices of the subgroups strictly containing subgroup `index`.
    pub fn strict_supersets(&self, index: usize) -> &[usize] {
        &self.supersets[index]
    }

    pub fn containing_subgroups(&self, h: &Subgroup, order: usize) -> Vec<&Subgroup> {
        self.subgroups_of_order(order)
            .into_iter()
            .filter(|k| h.is_subset_of(k))
            .collect()
    }
}

pub fn all_subgroups(group: &QuotientGroup) -> SubgroupLattice {
    SubgroupLattice::new(group)
}
