//! The verification battery behind `nimgen verify --suite <name>`.
//!
//! Each criterion recomputes its claim from scratch on the built-in catalog
//! and reports a single pass/fail line.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::Analysis;
use crate::bitset::ElementSet;
use crate::catalog::{full_catalog, ABELIAN_GROUPS, DNG_SWEEP, SMALL_GROUPS, DIHEDRAL_SWEEP};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::ClassId;
use crate::solver::{brute_nim, BruteSolver, GameVariant, Nim, SolveOptions};
use crate::spec::GroupSpec;
use crate::theory::{
    check_even_type_table, check_odd_dihedral_classes, check_option_deficiency, d_min, exhaustive_deficiency,
    frattini_matches, involution_transform_trials, predict_dng_dih, predict_gen_dih, quotient_generation_trials,
    AbelianSpec,
};

pub const SUITES: &[&str] = &[
    "all", "theorem", "dng", "oracle", "even-types", "odd-lemmas", "deficiency", "dih-facts", "simplify",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2}. {} ({:.2}s): {}", self.id, self.title, self.elapsed.as_secs_f64(), self.detail)
    }
}

type Criterion = fn(&SolveOptions) -> (bool, String);

const CRITERIA: &[(u8, &str, Criterion)] = &[
    (1, "dihedral table for n = 2..12", dihedral_table),
    (2, "dihedral classification sweep", dihedral_sweep),
    (3, "DNG(Dih(A)) classification", dng_classification),
    (4, "brute force equals structure solver", oracle_equivalence),
    (5, "one nim value per (class, parity)", compression),
    (6, "even-type table", even_types),
    (7, "odd-class types and options", odd_classes),
    (8, "deficiency identities", deficiency_identities),
    (9, "d(Dih(A)) = d(A) + 1 and Φ(Dih(A)) = Φ(A)", dihedral_facts),
    (10, "randomized two-involution transform", involution_transform),
    (11, "simplification", simplification),
    (12, "GEN(Z2) and the |A| = 1 edge", edge_cases),
];

fn suite_members(name: &str) -> Option<Vec<u8>> {
    Some(match name {
        "all" => (1..=12).collect(),
        "theorem" => vec![1, 2, 12],
        "dng" => vec![3],
        "oracle" => vec![4, 5],
        "even-types" => vec![6],
        "odd-lemmas" => vec![7],
        "deficiency" => vec![8],
        "dih-facts" => vec![9, 10],
        "simplify" => vec![11],
        _ => return None,
    })
}

pub fn run_suite(name: &str, opts: &SolveOptions) -> Result<Vec<CriterionOutcome>> {
    let members = suite_members(name)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", "))))?;
    Ok(CRITERIA
        .iter()
        .filter(|(id, _, _)| members.contains(id))
        .map(|&(id, title, check)| {
            let start = Instant::now();
            let (passed, detail) = check(opts);
            CriterionOutcome { id, title, passed, detail, elapsed: start.elapsed() }
        })
        .collect())
}

/// 0 when every criterion passes, 1 otherwise.
pub fn suite_exit_code(outcomes: &[CriterionOutcome]) -> i32 {
    if outcomes.iter().all(|o| o.passed) {
        0
    } else {
        1
    }
}

fn build(spec: &str) -> Result<GroupTable> {
    GroupSpec::parse(spec)?.build()
}

fn analyse(spec: &str, opts: &SolveOptions) -> Result<Analysis> {
    Analysis::new(build(spec)?, opts.lattice)
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn summarize(failures: &[String], checked: usize, extra: &str) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{checked} checked{extra}"))
    } else {
        (false, format!("{} of {checked} failed{extra}: {}", failures.len(), failures.join("; ")))
    }
}

fn dihedral_table(opts: &SolveOptions) -> (bool, String) {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut row = Vec::new();
    for n in 2..=12usize {
        let want = match n % 4 {
            0 => 0,
            2 => 1,
            _ => 3,
        };
        match analyse(&format!("Dih(Z{n})"), opts) {
            Ok(a) => {
                row.push(a.game_nim().0.to_string());
                if a.game_nim() != Nim(want) {
                    failures.push(format!("n={n}: got {}, want *{want}", a.game_nim()));
                }
            }
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    let (fast, time) = within(start, Duration::from_secs(10));
    let (ok, detail) = summarize(&failures, 11, &format!(" [{}], {time}", row.join(",")));
    (ok && fast, detail)
}

fn dihedral_sweep(opts: &SolveOptions) -> (bool, String) {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    let mut completed = 0;
    for spec in DIHEDRAL_SWEEP {
        let a = AbelianSpec::parse(spec).expect("catalog spec");
        let want = predict_gen_dih(&a).expect("nontrivial");
        match analyse(&format!("Dih({spec})"), opts) {
            Ok(an) => {
                completed += 1;
                if an.game_nim() != want {
                    failures.push(format!("Dih({spec}): got {}, want {want}", an.game_nim()));
                }
            }
            Err(e) if e.is_capacity_like() => skipped.push(format!("Dih({spec}) skipped: {e}")),
            Err(e) => failures.push(format!("Dih({spec}): {e}")),
        }
    }
    let (fast, time) = within(start, Duration::from_secs(60));
    let mut extra = format!(", {completed}/{} completed, {time}", DIHEDRAL_SWEEP.len());
    if !skipped.is_empty() {
        extra.push_str(&format!(" ({})", skipped.join("; ")));
    }
    let (ok, detail) = summarize(&failures, completed, &extra);
    (ok && fast && completed >= 6, detail)
}

fn dng_classification(opts: &SolveOptions) -> (bool, String) {
    let start = Instant::now();
    let failures: Vec<String> = DNG_SWEEP
        .par_iter()
        .filter_map(|spec| {
            let a = AbelianSpec::parse(spec).expect("catalog spec");
            let want = predict_dng_dih(&a).expect("nontrivial");
            let got = build(&format!("Dih({spec})")).and_then(|g| brute_nim(&g, GameVariant::Dng, opts.brute_max));
            match got {
                Ok(n) if n == want => None,
                Ok(n) => Some(format!("Dih({spec}): got {n}, want {want}")),
                Err(e) => Some(format!("Dih({spec}): {e}")),
            }
        })
        .collect();
    let (fast, time) = within(start, Duration::from_secs(30));
    let (ok, detail) = summarize(&failures, DNG_SWEEP.len(), &format!(", {time}"));
    (ok && fast, detail)
}

fn oracle_equivalence(opts: &SolveOptions) -> (bool, String) {
    let start = Instant::now();
    let failures: Vec<String> = SMALL_GROUPS
        .par_iter()
        .filter_map(|spec| {
            let run = || -> Result<(Nim, Nim)> {
                let an = analyse(spec, opts)?;
                Ok((brute_nim(&an.group, GameVariant::Gen, opts.brute_max)?, an.game_nim()))
            };
            match run() {
                Ok((b, s)) if b == s => None,
                Ok((b, s)) => Some(format!("{spec}: brute {b}, structure {s}")),
                Err(e) => Some(format!("{spec}: {e}")),
            }
        })
        .collect();
    let (fast, time) = within(start, Duration::from_secs(60));
    let (ok, detail) = summarize(&failures, SMALL_GROUPS.len(), &format!(", {time}"));
    (ok && fast, detail)
}

fn compression(opts: &SolveOptions) -> (bool, String) {
    let groups: Vec<&str> = SMALL_GROUPS.iter().copied().filter(|s| build(s).is_ok_and(|g| g.order() <= 12)).collect();
    let results: Vec<std::result::Result<usize, String>> = groups
        .par_iter()
        .map(|spec| {
            let an = analyse(spec, opts).map_err(|e| format!("{spec}: {e}"))?;
            let mut solver = BruteSolver::new(&an.group, GameVariant::Gen, opts.brute_max).map_err(|e| e.to_string())?;
            solver.solve();
            let mut cells: HashMap<(ClassId, u8), BTreeSet<Nim>> = HashMap::new();
            let memo = solver.memo();
            for (p, nim) in &memo {
                let class = an.lattice.ceil(&an.group, p).map_err(|e| e.to_string())?;
                cells.entry((class, p.parity())).or_default().insert(*nim);
            }
            for ((class, parity), values) in &cells {
                if values.len() != 1 {
                    return Err(format!("{spec}: {class:?} parity {parity} holds {values:?}"));
                }
                let expected = an.nims.value(*class, *parity);
                if values.first() != Some(&expected) {
                    return Err(format!("{spec}: {class:?} parity {parity} is {values:?}, class table says {expected}"));
                }
            }
            Ok(memo.len())
        })
        .collect();
    let mut failures = Vec::new();
    let mut total = 0;
    for r in results {
        match r {
            Ok(n) => total += n,
            Err(e) => failures.push(e),
        }
    }
    summarize(&failures, groups.len(), &format!(" groups, {total} positions"))
}

fn even_types(opts: &SolveOptions) -> (bool, String) {
    let mut failures = Vec::new();
    let mut checked = 0;
    for spec in full_catalog() {
        match analyse(&spec, opts) {
            Ok(an) if an.group.order() % 2 == 0 => {
                let r = check_even_type_table(&an.lattice, &an.deficiency, &an.nims);
                checked += r.checked;
                failures.extend(r.violations.into_iter().map(|v| format!("{spec}: {v}")));
            }
            Ok(_) => {}
            Err(e) if e.is_capacity_like() => {}
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }
    summarize(&failures, checked, " even classes")
}

fn odd_classes(opts: &SolveOptions) -> (bool, String) {
    let mut failures = Vec::new();
    let mut checked = 0;
    for spec in ["Dih(Z3xZ3)", "Dih(Z3xZ9)", "Dih(Z5xZ5)"] {
        match analyse(spec, opts) {
            Ok(an) => {
                let mut r = check_odd_dihedral_classes(&an.digraph);
                r.merge(check_option_deficiency(&an.digraph, &an.deficiency));
                checked += r.checked;
                failures.extend(r.violations.into_iter().map(|v| format!("{spec}: {v}")));
            }
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }
    summarize(&failures, checked, " conditions")
}

fn deficiency_identities(opts: &SolveOptions) -> (bool, String) {
    let mut failures = Vec::new();
    let mut checked = 0;
    for spec in full_catalog() {
        let an = match analyse(&spec, opts) {
            Ok(an) => an,
            Err(e) => {
                failures.push(format!("{spec}: {e}"));
                continue;
            }
        };
        let def = &an.deficiency;
        let n = an.group.order();
        checked += 1;
        if def.get(ClassId::Terminal) != 0 {
            failures.push(format!("{spec}: terminal class is not 0-deficient"));
        }
        if def.max() > def.d_g() {
            failures.push(format!("{spec}: a class has δ = {} > d(G) = {}", def.max(), def.d_g()));
        }
        if n <= 16 && d_min(&an.group) as u32 != def.d_g() {
            failures.push(format!("{spec}: δ(Φ) = {} but d(G) = {}", def.d_g(), d_min(&an.group)));
        }
        if n <= 12 {
            for (i, carrier) in an.lattice.intersections().iter().enumerate() {
                let bfs = def.get(ClassId::Intersection(i));
                let exhaustive = exhaustive_deficiency(&an.group, carrier) as u32;
                if bfs != exhaustive {
                    failures.push(format!("{spec}: class {i} BFS δ {bfs}, exhaustive {exhaustive}"));
                }
            }
            // Equal deficiency of every position in a class.
            for mask in 0u64..1 << n {
                let p = ElementSet::from_mask(mask);
                if an.group.generates(&p) {
                    continue;
                }
                let class = an.lattice.ceil(&an.group, &p).expect("non-generating");
                if exhaustive_deficiency(&an.group, &p) as u32 != def.get(class) {
                    failures.push(format!("{spec}: position {p:?} disagrees with its class"));
                    break;
                }
            }
        }
    }
    summarize(&failures, checked, " groups")
}

fn dihedral_facts(opts: &SolveOptions) -> (bool, String) {
    let specs: Vec<AbelianSpec> = ABELIAN_GROUPS
        .iter()
        .map(|s| AbelianSpec::parse(s).expect("catalog spec"))
        .filter(|a| a.order() <= 27)
        .collect();
    let failures: Vec<String> = specs
        .par_iter()
        .filter_map(|a| {
            let run = || -> Result<Option<String>> {
                let at = a.build()?;
                let an = Analysis::new(GroupTable::dihedralize(&at)?, opts.lattice)?;
                let d_a = a.rank();
                if d_a != d_min(&at) {
                    return Ok(Some(format!("{a}: rank {d_a} but search gives {}", d_min(&at))));
                }
                if an.d_g() as usize != d_a + 1 {
                    return Ok(Some(format!("Dih({a}): d = {}, d(A) + 1 = {}", an.d_g(), d_a + 1)));
                }
                if !frattini_matches(&at, &an.lattice, opts.lattice)? {
                    return Ok(Some(format!("Dih({a}): Frattini subgroups differ")));
                }
                Ok(None)
            };
            run().unwrap_or_else(|e| Some(format!("{a}: {e}")))
        })
        .collect();
    summarize(&failures, specs.len(), " abelian groups")
}

fn involution_transform(_: &SolveOptions) -> (bool, String) {
    let r = involution_transform_trials(1000, 24, 0x4c31);
    let q = quotient_generation_trials(1000, 24, 0x4c32);
    let failures: Vec<String> = r.failures.into_iter().chain(q.failures).collect();
    summarize(&failures, r.trials + q.trials, " random instances")
}

fn simplification(opts: &SolveOptions) -> (bool, String) {
    let mut failures = Vec::new();
    let mut confluence_notes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let catalog = full_catalog();
    for spec in &catalog {
        let an = match analyse(spec, opts) {
            Ok(an) => an,
            Err(e) => {
                failures.push(format!("{spec}: {e}"));
                continue;
            }
        };
        let s = an.digraph.simplify();
        if s.simplify() != s {
            failures.push(format!("{spec}: simplification is not idempotent"));
        }
        for v in &s.vertices {
            let types: BTreeSet<_> = v.members.iter().map(|&m| an.digraph.vertices[m].ty).collect();
            if types.len() != 1 {
                failures.push(format!("{spec}: merged vertex mixes types {types:?}"));
            }
        }
        let frattini_ty = an.digraph.vertices[an.digraph.frattini()].ty;
        if s.vertex_of(an.digraph.frattini()).map(|v| s.vertices[v].ty) != Some(frattini_ty) {
            failures.push(format!("{spec}: Frattini type lost"));
        }
        if spec == "Dih(Z4)" && (an.digraph.vertices.len(), s.vertices.len()) != (5, 3) {
            failures.push(format!("Dih(Z4): {} -> {} vertices, want 5 -> 3", an.digraph.vertices.len(), s.vertices.len()));
        }
        let mut order: Vec<usize> = (0..an.digraph.vertices.len()).collect();
        for _ in 0..5 {
            order.shuffle(&mut rng);
            if an.digraph.simplify_in_order(&order) != s {
                confluence_notes.push(format!("{spec}: confluence differs for order {order:?}"));
                break;
            }
        }
    }
    let mut extra = String::from(" digraphs");
    if confluence_notes.is_empty() {
        extra.push_str(", merge order never changed the result (5 shuffles each)");
    } else {
        extra.push_str(&format!(", {}", confluence_notes.join("; ")));
    }
    summarize(&failures, catalog.len(), &extra)
}

fn edge_cases(opts: &SolveOptions) -> (bool, String) {
    let mut failures = Vec::new();
    match build("Z2").and_then(|g| brute_nim(&g, GameVariant::Gen, opts.brute_max)) {
        Ok(Nim(2)) => {}
        other => failures.push(format!("GEN(Z2) = {other:?}, want *2")),
    }
    match predict_gen_dih(&AbelianSpec::new([1]).expect("valid")) {
        Err(Error::OutOfScope(_)) => {}
        other => failures.push(format!("predict_gen_dih(Z1) = {other:?}, want an out-of-scope error")),
    }
    summarize(&failures, 2, "")
}
