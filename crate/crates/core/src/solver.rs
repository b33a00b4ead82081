//! Nim-numbers of `GEN(G)` and `DNG(G)`.
//!
//! [`BruteSolver`] is the oracle: a memoized depth-first walk over raw
//! positions starting from the empty set. [`structure_nim`] computes one pair
//! of nim values per structure class (even positions, odd positions) and
//! never looks at individual positions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::{ClassId, IntersectionLattice, LatticeConfig};
use crate::spec::GroupSpec;

pub const DEFAULT_BRUTE_MAX: usize = 16;

/// Positions are keyed by a 64-bit mask, so no cap may exceed this.
pub const BRUTE_HARD_LIMIT: usize = 64;

/// A Grundy value, printed as `*n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Nim(pub u32);

impl Nim {
    pub const ZERO: Nim = Nim(0);

    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Nim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "*{}", self.0)
    }
}

/// Minimum excludant: the least nonnegative integer not in `values`.
pub fn mex<I: IntoIterator<Item = u32>>(values: I) -> u32 {
    let mut seen: u128 = 0;
    let mut overflow: Vec<u32> = Vec::new();
    for v in values {
        if v < 128 {
            seen |= 1 << v;
        } else {
            overflow.push(v);
        }
    }
    let low = seen.trailing_ones();
    if low < 128 {
        return low;
    }
    overflow.sort_unstable();
    overflow.dedup();
    let mut m = 128;
    for v in overflow {
        if v == m {
            m += 1;
        } else if v > m {
            break;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GameVariant {
    #[serde(rename = "GEN")]
    Gen,
    #[serde(rename = "DNG")]
    Dng,
}

impl fmt::Display for GameVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameVariant::Gen => "GEN",
            GameVariant::Dng => "DNG",
        })
    }
}

impl FromStr for GameVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gen" => Ok(GameVariant::Gen),
            "dng" => Ok(GameVariant::Dng),
            _ => Err(Error::InvalidSpec(format!("unknown game {s:?}; expected gen or dng"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    #[default]
    Auto,
    Brute,
    Structure,
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::Auto => "auto",
            SolveMode::Brute => "brute",
            SolveMode::Structure => "structure",
        })
    }
}

impl FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(SolveMode::Auto),
            "brute" => Ok(SolveMode::Brute),
            "structure" => Ok(SolveMode::Structure),
            _ => Err(Error::InvalidSpec(format!("unknown mode {s:?}; expected auto, brute or structure"))),
        }
    }
}

/// Options of `p` in `GEN(g)`: empty when `p` generates, otherwise every
/// `p ∪ {x}` with `x ∉ p`.
pub fn gen_options(g: &GroupTable, p: &ElementSet) -> Vec<ElementSet> {
    if g.generates(p) {
        return Vec::new();
    }
    (0..g.order()).filter(|&x| !p.contains(x)).map(|x| p.with(x)).collect()
}

/// Options of `p` in `DNG(g)`: every non-generating `p ∪ {x}`.
pub fn dng_options(g: &GroupTable, p: &ElementSet) -> Result<Vec<ElementSet>> {
    if g.generates(p) {
        return Err(Error::Contract(format!("{p:?} generates the group and is not a DNG position")));
    }
    Ok((0..g.order())
        .filter(|&x| !p.contains(x))
        .map(|x| p.with(x))
        .filter(|q| !g.generates(q))
        .collect())
}

/// Exhaustive memoized solver over raw positions.
pub struct BruteSolver<'g> {
    g: &'g GroupTable,
    variant: GameVariant,
    memo: HashMap<u64, u32>,
    generating: HashMap<u64, bool>,
}

impl<'g> BruteSolver<'g> {
    pub fn new(g: &'g GroupTable, variant: GameVariant, cap: usize) -> Result<Self> {
        if g.order() < 2 {
            return Err(Error::TrivialGroup("games are only defined on nontrivial groups"));
        }
        let cap = cap.min(BRUTE_HARD_LIMIT);
        if g.order() > cap {
            return Err(Error::Capacity { what: "brute-force", order: g.order(), cap });
        }
        Ok(Self { g, variant, memo: HashMap::new(), generating: HashMap::new() })
    }

    fn generates(&mut self, mask: u64) -> bool {
        let g = self.g;
        *self.generating.entry(mask).or_insert_with(|| g.generates(&ElementSet::from_mask(mask)))
    }

    fn nim_mask(&mut self, mask: u64) -> u32 {
        if let Some(&v) = self.memo.get(&mask) {
            return v;
        }
        let variant = self.variant;
        let value = match variant {
            GameVariant::Gen if self.generates(mask) => 0,
            _ => {
                let mut child = Vec::with_capacity(self.g.order());
                for x in 0..self.g.order() {
                    let bit = 1u64 << x;
                    if mask & bit != 0 {
                        continue;
                    }
                    let q = mask | bit;
                    if self.variant == GameVariant::Dng && self.generates(q) {
                        continue;
                    }
                    child.push(self.nim_mask(q));
                }
                mex(child)
            }
        };
        self.memo.insert(mask, value);
        value
    }

    /// Nim-number of the game: the value of the empty starting position.
    pub fn solve(&mut self) -> Nim {
        Nim(self.nim_mask(0))
    }

    /// Nim-number of an arbitrary position. Generating sets with no removable
    /// element (GEN) and generating sets (DNG) are not positions at all.
    pub fn nim_of(&mut self, p: &ElementSet) -> Result<Nim> {
        if p.bound() > self.g.order() {
            return Err(Error::NotAPosition(format!("{p:?} has elements outside the group")));
        }
        let mask = p.low_mask();
        if self.generates(mask) {
            match self.variant {
                GameVariant::Dng => {
                    return Err(Error::NotAPosition(format!("{p:?} generates the group")));
                }
                GameVariant::Gen => {
                    let reachable = p.iter().any(|x| !self.generates(mask & !(1u64 << x)));
                    if !reachable {
                        return Err(Error::NotAPosition(format!(
                            "{p:?} generates, but so does every subset missing one element"
                        )));
                    }
                }
            }
        }
        Ok(Nim(self.nim_mask(mask)))
    }

    /// Every evaluated position with its value, in increasing mask order.
    pub fn memo(&self) -> Vec<(ElementSet, Nim)> {
        let mut v: Vec<(u64, u32)> = self.memo.iter().map(|(&m, &n)| (m, n)).collect();
        v.sort_unstable();
        v.into_iter().map(|(m, n)| (ElementSet::from_mask(m), Nim(n))).collect()
    }

    pub fn options_of(&self, p: &ElementSet) -> Result<Vec<ElementSet>> {
        match self.variant {
            GameVariant::Gen => Ok(gen_options(self.g, p)),
            GameVariant::Dng => dng_options(self.g, p),
        }
    }
}

/// Grundy value of the empty position by exhaustive search.
pub fn brute_nim(g: &GroupTable, variant: GameVariant, cap: usize) -> Result<Nim> {
    Ok(BruteSolver::new(g, variant, cap)?.solve())
}

/// Nim values of the even and odd positions of each structure class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNimTable {
    per_class: Vec<(Nim, Nim)>,
    frattini: usize,
}

impl ClassNimTable {
    /// `(even, odd)` nim values for a class; the terminal class is `(0, 0)`.
    pub fn get(&self, id: ClassId) -> (Nim, Nim) {
        match id {
            ClassId::Intersection(i) => self.per_class[i],
            ClassId::Terminal => (Nim::ZERO, Nim::ZERO),
        }
    }

    /// The class's value on positions of the given parity.
    pub fn value(&self, id: ClassId, parity: u8) -> Nim {
        let (even, odd) = self.get(id);
        if parity == 0 {
            even
        } else {
            odd
        }
    }

    /// The empty position is even and lies in the Frattini class.
    pub fn game_nim(&self) -> Nim {
        self.per_class[self.frattini].0
    }

    pub fn len(&self) -> usize {
        self.per_class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_class.is_empty()
    }

    /// Solves the class-level equations given the option table of
    /// `lat` (one entry per intersection subgroup).
    ///
    /// For a class of parity `q`, positions of parity `q` move only to option
    /// classes, while positions of parity `1-q` also have a move inside the
    /// class. With `T_0`, `T_1` the even and odd values reachable in option
    /// classes: `n_q = mex(T_{1-q})` and `n_{1-q} = mex(T_q ∪ {n_q})`.
    pub fn from_options(lat: &IntersectionLattice, options: &[Vec<ClassId>]) -> Result<Self> {
        if options.len() != lat.len() {
            return Err(Error::Internal("option table does not match the lattice".into()));
        }
        let mut per_class = vec![(Nim::ZERO, Nim::ZERO); lat.len()];
        for i in (0..lat.len()).rev() {
            let mut pools: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
            for &opt in &options[i] {
                let (even, odd) = match opt {
                    ClassId::Intersection(j) if j > i => per_class[j],
                    ClassId::Intersection(j) => {
                        return Err(Error::Internal(format!("class {i} has option {j} that is not larger")))
                    }
                    ClassId::Terminal => (Nim::ZERO, Nim::ZERO),
                };
                pools[0].push(even.0);
                pools[1].push(odd.0);
            }
            let q = lat.class_parity(ClassId::Intersection(i)) as usize;
            let same = mex(pools[1 - q].iter().copied());
            let other = mex(pools[q].iter().copied().chain([same]));
            let recheck = mex(pools[1 - q].iter().copied().chain([other]));
            if recheck != same {
                return Err(Error::Internal(format!(
                    "class {i}: parity-{q} value {same} changes to {recheck} once the in-class move is included"
                )));
            }
            let mut pair = [0u32; 2];
            pair[q] = same;
            pair[1 - q] = other;
            per_class[i] = (Nim(pair[0]), Nim(pair[1]));
        }
        Ok(Self { per_class, frattini: lat.frattini_index() })
    }
}

/// Class-level solve of `GEN(g)`.
pub fn structure_nim(g: &GroupTable, lat: &IntersectionLattice, variant: GameVariant) -> Result<ClassNimTable> {
    if variant == GameVariant::Dng {
        return Err(Error::Unsupported("the structure solver only handles GEN".into()));
    }
    if g.order() < 2 {
        return Err(Error::TrivialGroup("games are only defined on nontrivial groups"));
    }
    let options = lat.option_table(g)?;
    ClassNimTable::from_options(lat, &options)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub brute_max: usize,
    pub lattice: LatticeConfig,
    /// Run both solvers whenever both apply and fail on disagreement.
    pub cross_check: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { brute_max: DEFAULT_BRUTE_MAX, lattice: LatticeConfig::default(), cross_check: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOutcome {
    pub nim: Nim,
    /// The solver that produced `nim` (never `Auto`).
    pub mode: SolveMode,
    pub order: usize,
}

/// Builds the group and dispatches to a solver. `Auto` picks brute force for
/// DNG or groups up to `brute_max`, and the structure solver otherwise.
pub fn nim_of_game(spec: &GroupSpec, variant: GameVariant, mode: SolveMode, opts: SolveOptions) -> Result<SolveOutcome> {
    let g = spec.build()?;
    nim_of_group(&g, variant, mode, opts)
}

pub fn nim_of_group(g: &GroupTable, variant: GameVariant, mode: SolveMode, opts: SolveOptions) -> Result<SolveOutcome> {
    let resolved = match mode {
        SolveMode::Auto if variant == GameVariant::Dng => {
            if g.order() > opts.brute_max {
                return Err(Error::Unsupported(format!(
                    "DNG needs brute force, but order {} exceeds the brute-force cap {}",
                    g.order(),
                    opts.brute_max
                )));
            }
            SolveMode::Brute
        }
        SolveMode::Auto if g.order() <= opts.brute_max => SolveMode::Brute,
        SolveMode::Auto => SolveMode::Structure,
        m => m,
    };
    let structure = |g: &GroupTable| -> Result<Nim> {
        let lat = IntersectionLattice::new(g, opts.lattice)?;
        Ok(structure_nim(g, &lat, variant)?.game_nim())
    };
    let nim = match resolved {
        SolveMode::Brute => brute_nim(g, variant, opts.brute_max)?,
        _ => structure(g)?,
    };
    if opts.cross_check && variant == GameVariant::Gen && g.order() <= opts.brute_max {
        let other = if resolved == SolveMode::Brute { structure(g)? } else { brute_nim(g, variant, opts.brute_max)? };
        if other != nim {
            return Err(Error::Internal(format!("solvers disagree: {resolved} gives {nim}, the other gives {other}")));
        }
    }
    Ok(SolveOutcome { nim, mode: resolved, order: g.order() })
}
