//! Structure digraphs, class types, simplified diagrams and DOT output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::group::GroupTable;
use crate::lattice::{ClassId, IntersectionLattice};
use crate::solver::{ClassNimTable, Nim};
use crate::theory::{deficiency_table, DeficiencyTable};

/// `(pty(I), nim of even positions, nim of odd positions)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeTriple {
    pub parity: u8,
    pub even: Nim,
    pub odd: Nim,
}

impl TypeTriple {
    pub const fn new(parity: u8, even: u32, odd: u32) -> Self {
        Self { parity, even: Nim(even), odd: Nim(odd) }
    }
}

impl fmt::Display for TypeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.parity, self.even.0, self.odd.0)
    }
}

impl Serialize for TypeTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.parity as u32, self.even.0, self.odd.0].serialize(serializer)
    }
}

pub fn type_of(nims: &ClassNimTable, lat: &IntersectionLattice, id: ClassId) -> TypeTriple {
    let (even, odd) = nims.get(id);
    TypeTriple { parity: lat.class_parity(id), even, odd }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Vertex {
    pub id: ClassId,
    pub order: usize,
    pub parity: u8,
    pub deficiency: u32,
    #[serde(rename = "type")]
    pub ty: TypeTriple,
}

/// Vertices are the intersection classes in lattice order followed by the
/// terminal class; edges point from a class to each of its option classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureDigraph {
    pub group_order: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

pub fn build_digraph(g: &GroupTable, lat: &IntersectionLattice, nims: &ClassNimTable) -> Result<StructureDigraph> {
    let options = lat.option_table(g)?;
    let def = deficiency_table(lat, &options)?;
    Ok(digraph_from_parts(lat, &options, nims, &def))
}

pub fn digraph_from_parts(
    lat: &IntersectionLattice,
    options: &[Vec<ClassId>],
    nims: &ClassNimTable,
    def: &DeficiencyTable,
) -> StructureDigraph {
    let terminal = lat.len();
    let index = |id: ClassId| match id {
        ClassId::Intersection(i) => i,
        ClassId::Terminal => terminal,
    };
    let vertices = lat
        .class_ids()
        .map(|id| Vertex {
            id,
            order: lat.class_order(id),
            parity: lat.class_parity(id),
            deficiency: def.get(id),
            ty: type_of(nims, lat, id),
        })
        .collect();
    let edges = options
        .iter()
        .enumerate()
        .flat_map(|(i, opts)| opts.iter().map(move |&o| (i, index(o))))
        .collect();
    StructureDigraph { group_order: lat.group_order(), vertices, edges }
}

impl StructureDigraph {
    pub fn terminal(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Index of the Frattini class. Lattice order puts it first.
    pub fn frattini(&self) -> usize {
        0
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == v).map(|e| e.1)
    }

    pub fn simplify(&self) -> SimplifiedDiagram {
        self.simplify_in_order(&(0..self.vertices.len()).collect::<Vec<_>>())
    }

    /// Simplification that scans candidate pairs in the order given by `order`
    /// (a permutation of vertex indices).
    pub fn simplify_in_order(&self, order: &[usize]) -> SimplifiedDiagram {
        SimplifiedDiagram::trivial(self).merge(order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MergedVertex {
    #[serde(rename = "type")]
    pub ty: TypeTriple,
    /// Indices into the original digraph's vertex list, ascending.
    pub members: Vec<usize>,
    pub orders: Vec<usize>,
    pub deficiencies: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimplifiedDiagram {
    pub vertices: Vec<MergedVertex>,
    pub edges: Vec<(usize, usize)>,
}

pub fn simplify(d: &StructureDigraph) -> SimplifiedDiagram {
    d.simplify()
}

impl SimplifiedDiagram {
    fn trivial(d: &StructureDigraph) -> Self {
        let vertices = d
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| MergedVertex { ty: v.ty, members: vec![i], orders: vec![v.order], deficiencies: vec![v.deficiency] })
            .collect();
        Self { vertices, edges: d.edges.clone() }
    }

    pub fn simplify(&self) -> Self {
        self.merge(&(0..self.vertices.len()).collect::<Vec<_>>())
    }

    /// Repeatedly identifies two vertices with equal type whose option types
    /// together with their own type agree, until no such pair remains; then
    /// drops loops and sorts vertices by type and first member.
    fn merge(&self, order: &[usize]) -> Self {
        debug_assert_eq!(order.len(), self.vertices.len());
        let mut groups: Vec<Option<MergedVertex>> = self.vertices.iter().cloned().map(Some).collect();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); groups.len()];
        for &(a, b) in &self.edges {
            succ[a].insert(b);
        }

        loop {
            let key = |v: usize, groups: &[Option<MergedVertex>]| {
                let ty = groups[v].as_ref().unwrap().ty;
                let mut types: BTreeSet<TypeTriple> =
                    succ[v].iter().map(|&w| groups[w].as_ref().unwrap().ty).collect();
                types.insert(ty);
                (ty, types)
            };
            let mut first_with_key: BTreeMap<(TypeTriple, BTreeSet<TypeTriple>), usize> = BTreeMap::new();
            let mut pair = None;
            for &v in order {
                if groups[v].is_none() {
                    continue;
                }
                let k = key(v, &groups);
                if let Some(&u) = first_with_key.get(&k) {
                    pair = Some((u, v));
                    break;
                }
                first_with_key.insert(k, v);
            }
            let Some((keep, gone)) = pair else { break };

            let absorbed = groups[gone].take().unwrap();
            let target = groups[keep].as_mut().unwrap();
            target.members.extend(absorbed.members);
            target.orders.extend(absorbed.orders);
            target.deficiencies.extend(absorbed.deficiencies);
            let moved = std::mem::take(&mut succ[gone]);
            succ[keep].extend(moved);
            for s in succ.iter_mut() {
                if s.remove(&gone) {
                    s.insert(keep);
                }
            }
        }

        // Canonical layout.
        let mut live: Vec<(usize, MergedVertex)> = groups
            .into_iter()
            .enumerate()
            .filter_map(|(i, g)| g.map(|mut g| {
                let mut zipped: Vec<(usize, usize, u32)> = g
                    .members
                    .iter()
                    .zip(&g.orders)
                    .zip(&g.deficiencies)
                    .map(|((&m, &o), &d)| (m, o, d))
                    .collect();
                zipped.sort_unstable();
                g.members = zipped.iter().map(|z| z.0).collect();
                g.orders = zipped.iter().map(|z| z.1).collect();
                g.deficiencies = zipped.iter().map(|z| z.2).collect();
                (i, g)
            }))
            .collect();
        live.sort_by(|a, b| (a.1.ty, a.1.members[0]).cmp(&(b.1.ty, b.1.members[0])));
        let mut renumber = vec![usize::MAX; succ.len()];
        for (new, (old, _)) in live.iter().enumerate() {
            renumber[*old] = new;
        }
        let mut edges: Vec<(usize, usize)> = live
            .iter()
            .flat_map(|(old, _)| succ[*old].iter().map(|&w| (renumber[*old], renumber[w])))
            .filter(|(a, b)| a != b)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Self { vertices: live.into_iter().map(|(_, g)| g).collect(), edges }
    }

    /// Index of the merged vertex holding original vertex `v`.
    pub fn vertex_of(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|m| m.members.contains(&v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DotStyle {
    /// Order, parity, deficiency and type on every node.
    #[default]
    Full,
    /// Type only.
    Plain,
}

pub trait ToDot {
    fn to_dot(&self, style: DotStyle) -> String;
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn render(name: &str, labels: &[String], edges: &[(usize, usize)]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for (i, label) in labels.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{label}\"];").unwrap();
    }
    for (a, b) in edges {
        writeln!(out, "  v{a} -> v{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

impl ToDot for StructureDigraph {
    fn to_dot(&self, style: DotStyle) -> String {
        let labels: Vec<String> = self
            .vertices
            .iter()
            .map(|v| match style {
                DotStyle::Full => format!("I={} pty={} δ={} type={}", v.order, v.parity, v.deficiency, v.ty),
                DotStyle::Plain => format!("type={}", v.ty),
            })
            .collect();
        render("structure", &labels, &self.edges)
    }
}

impl ToDot for SimplifiedDiagram {
    fn to_dot(&self, style: DotStyle) -> String {
        let labels: Vec<String> = self
            .vertices
            .iter()
            .map(|v| match style {
                DotStyle::Full => {
                    let mut defs = v.deficiencies.clone();
                    defs.sort_unstable();
                    defs.dedup();
                    format!("I={} pty={} δ={} type={}", join(&v.orders), v.ty.parity, join(&defs), v.ty)
                }
                DotStyle::Plain => format!("type={}", v.ty),
            })
            .collect();
        render("simplified", &labels, &self.edges)
    }
}
