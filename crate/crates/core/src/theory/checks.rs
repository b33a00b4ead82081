use crate::diagram::{type_of, StructureDigraph, TypeTriple};
use crate::lattice::IntersectionLattice;
use crate::solver::ClassNimTable;

use super::deficiency::DeficiencyTable;

/// Outcome of a structural check: how many items were examined and what
/// went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(msg());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

/// Type of an even class of an even-order group, by deficiency.
pub fn even_type_row(deficiency: u32) -> TypeTriple {
    match deficiency {
        0 => TypeTriple::new(0, 0, 0),
        1 => TypeTriple::new(0, 1, 2),
        2 => TypeTriple::new(0, 0, 2),
        _ => TypeTriple::new(0, 0, 1),
    }
}

/// Type of an odd class of `Dih(A)`, `A` odd with `d(A) = 2`, by deficiency.
pub fn odd_dihedral_type_row(deficiency: u32) -> Option<TypeTriple> {
    match deficiency {
        1 => Some(TypeTriple::new(1, 2, 1)),
        2 => Some(TypeTriple::new(1, 3, 0)),
        3 => Some(TypeTriple::new(1, 3, 1)),
        _ => None,
    }
}

/// Every even class's type against [`even_type_row`]; when `d(G) >= 4` the
/// game value must also be `*0`.
pub fn check_even_type_table(lat: &IntersectionLattice, def: &DeficiencyTable, nims: &ClassNimTable) -> CheckReport {
    let mut report = CheckReport::default();
    if lat.group_order() % 2 == 1 {
        report.violations.push(format!("group order {} is odd; the even-type table does not apply", lat.group_order()));
        return report;
    }
    for id in lat.class_ids().filter(|&id| lat.class_parity(id) == 0) {
        let m = def.get(id);
        let got = type_of(nims, lat, id);
        let want = even_type_row(m);
        report.expect(got == want, || format!("{id:?} (order {}, δ={m}) has type {got}, expected {want}", lat.class_order(id)));
    }
    if def.d_g() >= 4 {
        let nim = nims.game_nim();
        report.expect(nim.0 == 0, || format!("d(G) = {} but the game value is {nim}", def.d_g()));
    }
    report
}

/// Every class of deficiency `m >= 1` has an option of deficiency `m - 1`
/// and no option outside `{m, m - 1}`; even classes have only even options,
/// including one of deficiency `m - 1`.
pub fn check_option_deficiency(d: &StructureDigraph, def: &DeficiencyTable) -> CheckReport {
    let mut report = CheckReport::default();
    for (v, vertex) in d.vertices.iter().enumerate() {
        let m = vertex.deficiency;
        report.expect(m == def.get(vertex.id), || format!("vertex {v}: digraph δ={m}, table δ={}", def.get(vertex.id)));
        if vertex.id == crate::lattice::ClassId::Terminal {
            report.expect(m == 0, || format!("terminal class has δ={m}"));
            continue;
        }
        let opts: Vec<_> = d.successors(v).map(|w| &d.vertices[w]).collect();
        report.expect(m >= 1, || format!("vertex {v} is not terminal but has δ=0"));
        report.expect(!opts.is_empty(), || format!("vertex {v} has no options"));
        report.expect(opts.iter().any(|o| o.deficiency + 1 == m), || format!("vertex {v} (δ={m}) has no option in D_{}", m.saturating_sub(1)));
        report.expect(
            opts.iter().all(|o| o.deficiency == m || o.deficiency + 1 == m),
            || format!("vertex {v} (δ={m}) has an option outside D_{m} ∪ D_{}", m.saturating_sub(1)),
        );
        if vertex.parity == 0 {
            report.expect(opts.iter().all(|o| o.parity == 0), || format!("even vertex {v} has an odd option"));
            report.expect(
                opts.iter().any(|o| o.parity == 0 && o.deficiency + 1 == m),
                || format!("even vertex {v} (δ={m}) has no option in E_{}", m.saturating_sub(1)),
            );
        }
    }
    report
}

/// For `Dih(A)` with `A` odd and `d(A) = 2`: odd classes of deficiency
/// `m ∈ {2, 3}` reach `O_{m-1}`; odd classes of deficiency `m ∈ {1, 2, 3}`
/// reach `E_{m-1}` but not `E_m`; and odd types follow
/// [`odd_dihedral_type_row`].
pub fn check_odd_dihedral_classes(d: &StructureDigraph) -> CheckReport {
    let mut report = CheckReport::default();
    for (v, vertex) in d.vertices.iter().enumerate() {
        if vertex.parity != 1 {
            continue;
        }
        let m = vertex.deficiency;
        let opts: Vec<_> = d.successors(v).map(|w| &d.vertices[w]).collect();
        let has = |parity: u8, def: u32| opts.iter().any(|o| o.parity == parity && o.deficiency == def);
        if (2..=3).contains(&m) {
            report.expect(has(1, m - 1), || format!("odd vertex {v} (δ={m}) has no option in O_{}", m - 1));
        }
        if (1..=3).contains(&m) {
            report.expect(has(0, m - 1), || format!("odd vertex {v} (δ={m}) has no option in E_{}", m - 1));
            report.expect(!has(0, m), || format!("odd vertex {v} (δ={m}) has an option in E_{m}"));
        }
        match odd_dihedral_type_row(m) {
            Some(want) => report.expect(vertex.ty == want, || format!("odd vertex {v} (δ={m}) has type {}, expected {want}", vertex.ty)),
            None => report.expect(false, || format!("odd vertex {v} has δ={m}, outside 1..=3")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::digraph_from_parts;
    use crate::group::GroupTable;
    use crate::lattice::LatticeConfig;
    use crate::spec::GroupSpec;
    use crate::theory::deficiency_table;

    struct Solved {
        lat: IntersectionLattice,
        def: DeficiencyTable,
        nims: ClassNimTable,
        digraph: StructureDigraph,
    }

    fn solve(s: &str) -> Solved {
        let g: GroupTable = GroupSpec::parse(s).unwrap().build().unwrap();
        let lat = IntersectionLattice::new(&g, LatticeConfig::default()).unwrap();
        let options = lat.option_table(&g).unwrap();
        let def = deficiency_table(&lat, &options).unwrap();
        let nims = ClassNimTable::from_options(&lat, &options).unwrap();
        let digraph = digraph_from_parts(&lat, &options, &nims, &def);
        Solved { lat, def, nims, digraph }
    }

    #[test]
    fn even_table_on_d8_and_rank_four() {
        let s = solve("Dih(Z4)");
        let r = check_even_type_table(&s.lat, &s.def, &s.nims);
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.checked, 5);

        let s = solve("Dih(Z2xZ2xZ2)");
        assert_eq!(s.def.d_g(), 4);
        assert_eq!(s.nims.game_nim().0, 0);
        assert!(check_even_type_table(&s.lat, &s.def, &s.nims).passed());
    }

    #[test]
    fn z2_only_checks_terminal() {
        let s = solve("Z2");
        let r = check_even_type_table(&s.lat, &s.def, &s.nims);
        assert!(r.passed());
        assert_eq!(r.checked, 1);
    }

    #[test]
    fn option_deficiencies() {
        for g in ["Dih(Z4)", "Z12", "Dih(Z3xZ3)", "Z2xZ2xZ2"] {
            let s = solve(g);
            let r = check_option_deficiency(&s.digraph, &s.def);
            assert!(r.passed(), "{g}: {:?}", r.violations);
        }
        let s = solve("Dih(Z4)");
        let phi: Vec<usize> = s.digraph.successors(0).collect();
        assert_eq!(phi, vec![1, 2, 3]);
    }

    #[test]
    fn odd_classes_on_rank_two_odd_dihedral() {
        let s = solve("Dih(Z3xZ3)");
        let r = check_odd_dihedral_classes(&s.digraph);
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.checked > 0);
    }

    #[test]
    fn corrupted_types_are_reported() {
        let mut s = solve("Dih(Z3xZ3)");
        let v = s.digraph.vertices.iter().position(|v| v.parity == 1).unwrap();
        s.digraph.vertices[v].ty = TypeTriple::new(1, 0, 0);
        assert!(!check_odd_dihedral_classes(&s.digraph).passed());
    }
}
