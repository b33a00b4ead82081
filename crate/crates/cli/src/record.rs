use std::time::Instant;

use nimgen_core::lattice::IntersectionLattice;
use nimgen_core::solver::{nim_of_group, SolveOptions};
use nimgen_core::theory::deficiency_table;
use nimgen_core::{GameVariant, GroupSpec, Nim, SolveMode, TOOL_VERSION};
use serde::{Deserialize, Serialize};

/// One solved (or failed) game. Absent values serialize as `null` so every
/// record has the same keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRecord {
    pub spec: String,
    pub order: Option<usize>,
    pub variant: GameVariant,
    pub nim: Option<Nim>,
    pub mode: Option<SolveMode>,
    /// Number of intersection subgroups, `|𝓘|`.
    pub intersections: Option<usize>,
    pub d_g: Option<u32>,
    pub wall_ms: u64,
    pub tool_version: String,
    pub error: Option<String>,
}

impl ResultRecord {
    fn failed(spec: String, order: Option<usize>, variant: GameVariant, error: String, start: Instant) -> Self {
        Self {
            spec,
            order,
            variant,
            nim: None,
            mode: None,
            intersections: None,
            d_g: None,
            wall_ms: start.elapsed().as_millis() as u64,
            tool_version: TOOL_VERSION.to_string(),
            error: Some(error),
        }
    }
}

pub fn solve_spec(spec: &GroupSpec, variant: GameVariant, mode: SolveMode, opts: SolveOptions) -> ResultRecord {
    let start = Instant::now();
    let name = spec.canonical();
    let g = match spec.build() {
        Ok(g) => g,
        Err(e) => return ResultRecord::failed(name, None, variant, e.to_string(), start),
    };
    let outcome = match nim_of_group(&g, variant, mode, opts) {
        Ok(o) => o,
        Err(e) => return ResultRecord::failed(name, Some(g.order()), variant, e.to_string(), start),
    };
    // Lattice statistics are best effort: brute force may succeed on groups
    // whose lattice is over the order cap.
    let stats = IntersectionLattice::new(&g, opts.lattice).and_then(|lat| {
        let options = lat.option_table(&g)?;
        Ok((lat.len(), deficiency_table(&lat, &options)?.d_g()))
    });
    let (intersections, d_g) = match stats {
        Ok((n, d)) => (Some(n), Some(d)),
        Err(_) => (None, None),
    };
    ResultRecord {
        spec: name,
        order: Some(outcome.order),
        variant,
        nim: Some(outcome.nim),
        mode: Some(outcome.mode),
        intersections,
        d_g,
        wall_ms: start.elapsed().as_millis() as u64,
        tool_version: TOOL_VERSION.to_string(),
        error: None,
    }
}

/// Parses and solves; unparseable input becomes an error record named by
/// the raw text.
pub fn solve_text(text: &str, variant: GameVariant, mode: SolveMode, opts: SolveOptions) -> ResultRecord {
    match GroupSpec::parse(text) {
        Ok(spec) => solve_spec(&spec, variant, mode, opts),
        Err(e) => ResultRecord::failed(text.to_string(), None, variant, e.to_string(), Instant::now()),
    }
}

pub const CSV_HEADER: [&str; 8] = ["spec", "order", "variant", "nim", "mode", "d(G)", "millis", "note"];

pub fn csv_row(r: &ResultRecord) -> [String; 8] {
    let opt = |v: Option<String>| v.unwrap_or_default();
    [
        r.spec.clone(),
        opt(r.order.map(|n| n.to_string())),
        r.variant.to_string(),
        opt(r.nim.map(|n| n.0.to_string())),
        opt(r.mode.map(|m| m.to_string())),
        opt(r.d_g.map(|d| d.to_string())),
        r.wall_ms.to_string(),
        r.error.clone().unwrap_or_default(),
    ]
}

pub fn to_csv(records: &[ResultRecord]) -> anyhow::Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(csv_row(r))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn to_text(r: &ResultRecord) -> String {
    match (&r.nim, &r.error) {
        (Some(nim), _) => {
            let mut line = format!("{} {}: {nim}", r.variant, r.spec);
            let mut facts = vec![format!("order {}", r.order.unwrap_or(0))];
            if let Some(m) = r.mode {
                facts.push(format!("{m}"));
            }
            if let Some(n) = r.intersections {
                facts.push(format!("|I| = {n}"));
            }
            if let Some(d) = r.d_g {
                facts.push(format!("d(G) = {d}"));
            }
            line.push_str(&format!(" ({})", facts.join(", ")));
            line
        }
        (None, Some(e)) => format!("{} {}: error: {e}", r.variant, r.spec),
        (None, None) => format!("{} {}: no result", r.variant, r.spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_notes_with_commas_and_quotes() {
        let r = ResultRecord {
            spec: "Dih(Z2xZ2)".into(),
            order: None,
            variant: GameVariant::Gen,
            nim: None,
            mode: None,
            intersections: None,
            d_g: None,
            wall_ms: 7,
            tool_version: TOOL_VERSION.into(),
            error: Some("order 8, cap \"4\"".into()),
        };
        let text = to_csv(&[r]).unwrap();
        assert_eq!(text, "spec,order,variant,nim,mode,d(G),millis,note\nDih(Z2xZ2),,GEN,,,,7,\"order 8, cap \"\"4\"\"\"\n");
    }

    #[test]
    fn records_name_the_canonical_spec() {
        let r = solve_text("Z5xZ3", GameVariant::Gen, SolveMode::Auto, SolveOptions::default());
        assert_eq!(r.spec, "Z3xZ5");
        assert_eq!(r.nim, Some(Nim(2)));
        let r = solve_text("Z(", GameVariant::Gen, SolveMode::Auto, SolveOptions::default());
        assert_eq!(r.spec, "Z(");
        assert!(r.error.is_some());
    }
}
