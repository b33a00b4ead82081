use std::collections::{BTreeMap, VecDeque};

use itertools::Itertools;

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::{ClassId, IntersectionLattice};

/// Deficiency of every structure class: the fewest extra elements needed to
/// generate the group, equal to the directed distance to the terminal class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyTable {
    per_class: Vec<u32>,
    d_g: u32,
}

impl DeficiencyTable {
    pub fn get(&self, id: ClassId) -> u32 {
        match id {
            ClassId::Intersection(i) => self.per_class[i],
            ClassId::Terminal => 0,
        }
    }

    /// `d(G)`, read off the Frattini class.
    pub fn d_g(&self) -> u32 {
        self.d_g
    }

    pub fn max(&self) -> u32 {
        self.per_class.iter().copied().max().unwrap_or(0)
    }
}

/// Breadth-first search backwards from the terminal class over the option
/// table produced by [`IntersectionLattice::option_table`].
pub fn deficiency_table(lat: &IntersectionLattice, options: &[Vec<ClassId>]) -> Result<DeficiencyTable> {
    let n = lat.len();
    let terminal = n;
    let node = |id: ClassId| match id {
        ClassId::Intersection(i) => i,
        ClassId::Terminal => terminal,
    };
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, opts) in options.iter().enumerate() {
        for &o in opts {
            preds[node(o)].push(i);
        }
    }
    let mut dist = vec![u32::MAX; n + 1];
    dist[terminal] = 0;
    let mut queue = VecDeque::from([terminal]);
    while let Some(v) = queue.pop_front() {
        for &u in &preds[v] {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if let Some(i) = dist[..n].iter().position(|&d| d == u32::MAX) {
        return Err(Error::Internal(format!("class {i} cannot reach the terminal class")));
    }
    dist.truncate(n);
    let d_g = dist[lat.frattini_index()];
    Ok(DeficiencyTable { per_class: dist, d_g })
}

/// Smallest `|Q|` with `⟨p ∪ Q⟩ = G`, by trying every `Q` of increasing size.
pub fn exhaustive_deficiency(g: &GroupTable, p: &ElementSet) -> usize {
    let rest: Vec<usize> = (0..g.order()).filter(|&x| !p.contains(x)).collect();
    for k in 0..=rest.len() {
        if rest.iter().copied().combinations(k).any(|q| g.generates(&p.union(&q.into_iter().collect()))) {
            return k;
        }
    }
    unreachable!("the whole group generates itself")
}

/// `d(G)`, by exhaustive search over subsets of increasing size.
pub fn d_min(g: &GroupTable) -> usize {
    exhaustive_deficiency(g, &ElementSet::new())
}

/// Structure classes partitioned by `(parity, deficiency)`.
pub type Strata = BTreeMap<(u8, u32), Vec<ClassId>>;

pub fn strata(def: &DeficiencyTable, lat: &IntersectionLattice) -> Result<Strata> {
    let mut out: Strata = BTreeMap::new();
    for id in lat.class_ids() {
        out.entry((lat.class_parity(id), def.get(id))).or_default().push(id);
    }
    let zero: Vec<ClassId> = out.iter().filter(|((_, d), _)| *d == 0).flat_map(|(_, v)| v.clone()).collect();
    if zero != [ClassId::Terminal] {
        return Err(Error::Internal(format!("0-deficient classes should be exactly the terminal class, got {zero:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeConfig;
    use crate::spec::GroupSpec;

    fn setup(s: &str) -> (GroupTable, IntersectionLattice, DeficiencyTable) {
        let g = GroupSpec::parse(s).unwrap().build().unwrap();
        let lat = IntersectionLattice::new(&g, LatticeConfig::default()).unwrap();
        let opts = lat.option_table(&g).unwrap();
        let def = deficiency_table(&lat, &opts).unwrap();
        (g, lat, def)
    }

    #[test]
    fn d8_deficiencies() {
        let (g, lat, def) = setup("Dih(Z4)");
        assert_eq!(def.get(ClassId::Terminal), 0);
        assert_eq!(def.get(lat.frattini_class()), 2);
        for i in 1..lat.len() {
            assert_eq!(def.get(ClassId::Intersection(i)), 1);
            assert_eq!(exhaustive_deficiency(&g, &lat.intersections()[i]), 1);
        }
        assert_eq!(d_min(&g), 2);

        let st = strata(&def, &lat).unwrap();
        assert_eq!(st[&(0, 1)].len(), 3);
        assert_eq!(st[&(0, 2)], vec![lat.frattini_class()]);
        assert_eq!(st[&(0, 0)], vec![ClassId::Terminal]);
    }

    #[test]
    fn rank_three_dihedral() {
        let (_, lat, def) = setup("Dih(Z3xZ3)");
        assert_eq!(def.get(lat.frattini_class()), 3);
        let st = strata(&def, &lat).unwrap();
        assert_eq!(st[&(1, 3)], vec![lat.frattini_class()]);
    }

    #[test]
    fn minimal_generating_numbers() {
        let b = |s: &str| GroupSpec::parse(s).unwrap().build().unwrap();
        assert_eq!(d_min(&b("Z6")), 1);
        assert_eq!(d_min(&b("Z2xZ2")), 2);
        assert_eq!(d_min(&b("Z1")), 0);
        assert_eq!(d_min(&b("Dih(Z2xZ2xZ2)")), 4);
        let (_, _, def) = setup("Dih(Z2xZ2xZ2)");
        assert_eq!(def.d_g(), 4);
    }
}
