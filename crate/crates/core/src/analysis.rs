use crate::diagram::{digraph_from_parts, StructureDigraph};
use crate::error::Result;
use crate::group::GroupTable;
use crate::lattice::{ClassId, IntersectionLattice, LatticeConfig};
use crate::solver::{ClassNimTable, Nim};
use crate::theory::{deficiency_table, DeficiencyTable};

/// Everything the structure route derives for one group: lattice, option
/// table, deficiencies, class nim values and the structure digraph.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub group: GroupTable,
    pub lattice: IntersectionLattice,
    pub options: Vec<Vec<ClassId>>,
    pub deficiency: DeficiencyTable,
    pub nims: ClassNimTable,
    pub digraph: StructureDigraph,
}

impl Analysis {
    pub fn new(group: GroupTable, cfg: LatticeConfig) -> Result<Self> {
        let lattice = IntersectionLattice::new(&group, cfg)?;
        let options = lattice.option_table(&group)?;
        let deficiency = deficiency_table(&lattice, &options)?;
        let nims = ClassNimTable::from_options(&lattice, &options)?;
        let digraph = digraph_from_parts(&lattice, &options, &nims, &deficiency);
        Ok(Self { group, lattice, options, deficiency, nims, digraph })
    }

    pub fn game_nim(&self) -> Nim {
        self.nims.game_nim()
    }

    /// `d(G)`, the deficiency of the Frattini class.
    pub fn d_g(&self) -> u32 {
        self.deficiency.d_g()
    }
}
