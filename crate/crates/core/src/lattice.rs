//! Subgroups, maximal subgroups and the lattice of intersection subgroups.
//!
//! The intersection subgroups are all intersections of nonempty families of
//! maximal subgroups. Each one `I` names a structure class `X_I`: the subsets
//! of `I` contained in no smaller intersection subgroup. Generating sets form
//! the extra terminal class.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;

pub const DEFAULT_ORDER_MAX: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConfig {
    /// Largest group order accepted by subgroup enumeration.
    pub order_max: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { order_max: DEFAULT_ORDER_MAX }
    }
}

impl LatticeConfig {
    fn check(&self, g: &GroupTable) -> Result<()> {
        if g.order() > self.order_max {
            Err(Error::Capacity { what: "subgroup-enumeration", order: g.order(), cap: self.order_max })
        } else {
            Ok(())
        }
    }
}

/// A deduplicated list of subgroup carriers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgroupSet {
    carriers: Vec<ElementSet>,
}

impl SubgroupSet {
    pub fn len(&self) -> usize {
        self.carriers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carriers.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ElementSet> {
        self.carriers.iter()
    }

    pub fn as_slice(&self) -> &[ElementSet] {
        &self.carriers
    }

    pub fn contains(&self, s: &ElementSet) -> bool {
        self.carriers.contains(s)
    }

    /// Orders of the members, ascending.
    pub fn orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.carriers.iter().map(ElementSet::len).collect();
        v.sort_unstable();
        v
    }
}

/// Every subgroup of `g`, found by seeding with the cyclic subgroups and
/// closing under joins with cyclic subgroups until nothing new appears.
pub fn all_subgroups(g: &GroupTable, cfg: LatticeConfig) -> Result<SubgroupSet> {
    cfg.check(g)?;
    let n = g.order();

    // One representative generator per cyclic subgroup.
    let mut cyclic: Vec<(usize, ElementSet)> = Vec::new();
    let mut seen: HashSet<ElementSet> = HashSet::new();
    for x in 0..n {
        let c = g.generated_subgroup(&ElementSet::singleton(x));
        if seen.insert(c) {
            cyclic.push((x, c));
        }
    }

    // Each found subgroup keeps a generating list so joins can be closed
    // incrementally from its carrier.
    let mut found: Vec<(ElementSet, Vec<usize>)> =
        cyclic.iter().map(|&(x, c)| (c, if x == 0 { vec![] } else { vec![x] })).collect();
    let mut next = 0;
    while next < found.len() {
        let (h, gens) = found[next].clone();
        next += 1;
        if h.len() == n {
            continue;
        }
        for &(x, _) in &cyclic {
            if h.contains(x) {
                continue;
            }
            let mut join_gens = gens.clone();
            join_gens.push(x);
            let k = g.close_under(h, &join_gens);
            if seen.insert(k) {
                found.push((k, join_gens));
            }
        }
    }

    let mut carriers: Vec<ElementSet> = found.into_iter().map(|(s, _)| s).collect();
    carriers.sort();
    Ok(SubgroupSet { carriers })
}

/// Proper subgroups not strictly contained in another proper subgroup.
pub fn maximal_subgroups(g: &GroupTable, cfg: LatticeConfig) -> Result<SubgroupSet> {
    if g.order() < 2 {
        return Err(Error::TrivialGroup("the trivial group has no maximal subgroups"));
    }
    let all = all_subgroups(g, cfg)?;
    Ok(maximals_of(&all, g.order()))
}

fn maximals_of(all: &SubgroupSet, order: usize) -> SubgroupSet {
    let proper: Vec<&ElementSet> = all.iter().filter(|s| s.len() < order).collect();
    let carriers = proper
        .iter()
        .filter(|h| !proper.iter().any(|k| k.len() > h.len() && h.is_subset(k)))
        .map(|h| **h)
        .collect();
    SubgroupSet { carriers }
}

/// A structure class: an intersection subgroup (by index into
/// [`IntersectionLattice::intersections`]) or the terminal class of
/// generating sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassId {
    Intersection(usize),
    Terminal,
}

/// The intersection subgroups of a group, sorted by increasing order, with
/// their containment relation.
#[derive(Debug, Clone)]
pub struct IntersectionLattice {
    group_order: usize,
    intersections: Vec<ElementSet>,
    frattini: usize,
    containment: Vec<Vec<bool>>,
    maximals: SubgroupSet,
}

impl IntersectionLattice {
    pub fn new(g: &GroupTable, cfg: LatticeConfig) -> Result<Self> {
        let maximals = maximal_subgroups(g, cfg)?;
        Ok(Self::from_maximals(g.order(), maximals))
    }

    /// Closes `maximals` under pairwise intersection.
    pub fn from_maximals(group_order: usize, maximals: SubgroupSet) -> Self {
        let mut set: HashSet<ElementSet> = maximals.iter().copied().collect();
        let mut list: Vec<ElementSet> = maximals.iter().copied().collect();
        let mut next = 0;
        while next < list.len() {
            let a = list[next];
            next += 1;
            for j in 0..next {
                let c = a.intersection(&list[j]);
                if set.insert(c) {
                    list.push(c);
                }
            }
        }
        list.sort();
        let containment: Vec<Vec<bool>> =
            list.iter().map(|a| list.iter().map(|b| a.is_subset(b)).collect()).collect();
        // Sorted by size, and the lattice has a unique minimum, so it is first.
        let frattini = 0;
        debug_assert!(containment[frattini].iter().all(|&c| c));
        Self { group_order, intersections: list, frattini, containment, maximals }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn intersections(&self) -> &[ElementSet] {
        &self.intersections
    }

    pub fn len(&self) -> usize {
        self.intersections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intersections.is_empty()
    }

    pub fn maximals(&self) -> &SubgroupSet {
        &self.maximals
    }

    pub fn frattini_index(&self) -> usize {
        self.frattini
    }

    pub fn frattini(&self) -> &ElementSet {
        &self.intersections[self.frattini]
    }

    pub fn frattini_class(&self) -> ClassId {
        ClassId::Intersection(self.frattini)
    }

    /// `true` when intersection `i` is a subset of intersection `j`.
    pub fn contained(&self, i: usize, j: usize) -> bool {
        self.containment[i][j]
    }

    /// Every class id, terminal last.
    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.len()).map(ClassId::Intersection).chain([ClassId::Terminal])
    }

    /// The carrier of a class: `I` itself, or all of `G` for the terminal class.
    pub fn carrier(&self, id: ClassId) -> ElementSet {
        match id {
            ClassId::Intersection(i) => self.intersections[i],
            ClassId::Terminal => ElementSet::full(self.group_order),
        }
    }

    pub fn class_order(&self, id: ClassId) -> usize {
        match id {
            ClassId::Intersection(i) => self.intersections[i].len(),
            ClassId::Terminal => self.group_order,
        }
    }

    /// Parity of `|I|` (0 even, 1 odd); the terminal class takes the parity of `|G|`.
    pub fn class_parity(&self, id: ClassId) -> u8 {
        (self.class_order(id) % 2) as u8
    }

    /// The class containing position `p`: the smallest intersection subgroup
    /// containing it, or [`ClassId::Terminal`] when `p` generates `g`.
    pub fn ceil(&self, g: &GroupTable, p: &ElementSet) -> Result<ClassId> {
        let Some(i) = self.intersections.iter().position(|s| p.is_subset(s)) else {
            // Non-generating sets sit inside some maximal subgroup, which is in the lattice.
            return if g.generates(p) {
                Ok(ClassId::Terminal)
            } else {
                Err(Error::Internal(format!("non-generating set {p:?} lies in no intersection subgroup")))
            };
        };
        for j in i + 1..self.len() {
            if p.is_subset(&self.intersections[j]) && !self.containment[i][j] {
                return Err(Error::Internal(format!(
                    "no unique smallest intersection subgroup contains {p:?}"
                )));
            }
        }
        Ok(ClassId::Intersection(i))
    }

    /// Option classes of `id`, probed from the position `I` itself: every
    /// `⌈I ∪ {x}⌉` for `x ∉ I`.
    pub fn class_options(&self, g: &GroupTable, id: ClassId) -> Result<BTreeSet<ClassId>> {
        let ClassId::Intersection(i) = id else {
            return Ok(BTreeSet::new());
        };
        let carrier = self.intersections[i];
        let mut out = BTreeSet::new();
        for x in 0..g.order() {
            if !carrier.contains(x) {
                out.insert(self.ceil(g, &carrier.with(x))?);
            }
        }
        out.remove(&id);
        Ok(out)
    }

    /// Options of every intersection class, indexed like [`Self::intersections`].
    pub fn option_table(&self, g: &GroupTable) -> Result<Vec<Vec<ClassId>>> {
        (0..self.len())
            .map(|i| Ok(self.class_options(g, ClassId::Intersection(i))?.into_iter().collect()))
            .collect()
    }
}
