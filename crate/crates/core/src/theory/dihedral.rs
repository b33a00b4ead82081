use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::{IntersectionLattice, LatticeConfig};
use crate::solver::{brute_nim, ClassNimTable, GameVariant, Nim, SolveOptions};
use crate::spec::GroupSpec;

use super::deficiency::deficiency_table;

/// A finite abelian group given as a product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianSpec {
    factors: Vec<usize>,
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl AbelianSpec {
    pub fn new(factors: impl Into<Vec<usize>>) -> Result<Self> {
        let factors = factors.into();
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidSpec(format!("cyclic factors must be positive, got {factors:?}")));
        }
        Ok(Self { factors })
    }

    /// Accepts `Z<n>` and products of them, e.g. `Z3xZ9`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_group_spec(&GroupSpec::parse(text)?)
    }

    pub fn from_group_spec(spec: &GroupSpec) -> Result<Self> {
        let factors = spec
            .factors()
            .into_iter()
            .map(|f| match f {
                GroupSpec::Cyclic(n) => Ok(*n),
                other => Err(Error::InvalidSpec(format!("{other} is not a cyclic factor"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn is_odd(&self) -> bool {
        self.order() % 2 == 1
    }

    /// `d(A)`: for each prime, the number of factors it divides; the maximum
    /// over primes.
    pub fn rank(&self) -> usize {
        prime_divisors(self.order())
            .into_iter()
            .map(|p| self.factors.iter().filter(|&&f| f % p == 0).count())
            .max()
            .unwrap_or(0)
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    pub fn to_group_spec(&self) -> GroupSpec {
        let mut it = self.factors.iter().map(|&n| GroupSpec::Cyclic(n));
        let first = it.next().expect("at least one factor");
        it.fold(first, GroupSpec::product)
    }

    pub fn build(&self) -> Result<GroupTable> {
        self.to_group_spec().build()
    }

    /// One representative per isomorphism class of abelian groups of order
    /// `2..=max_order`, as invariant factors `n_1 | n_2 | ...`.
    pub fn all_up_to(max_order: usize) -> Vec<AbelianSpec> {
        fn extend(prefix: &mut Vec<usize>, product: usize, max: usize, out: &mut Vec<AbelianSpec>) {
            if !prefix.is_empty() {
                out.push(AbelianSpec { factors: prefix.clone() });
            }
            let last = prefix.last().copied().unwrap_or(1);
            let mut next = if last == 1 { 2 } else { last };
            while product * next <= max {
                if next % last == 0 {
                    prefix.push(next);
                    extend(prefix, product * next, max, out);
                    prefix.pop();
                }
                next += 1;
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::new(), 1, max_order, &mut out);
        out.sort_by_key(|a| (a.order(), a.factors.len(), a.factors.clone()));
        out
    }
}

impl fmt::Display for AbelianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

fn reject_trivial(a: &AbelianSpec) -> Result<()> {
    if a.order() == 1 {
        Err(Error::OutOfScope(format!(
            "{a}: predictions need a nontrivial A (Dih(Z1) = Z2 is outside the dihedral case split)"
        )))
    } else {
        Ok(())
    }
}

/// Predicted `GEN(Dih(A))`: `*1` for cyclic `A` of order `2 mod 4`, `*3`
/// for odd `A` generated by at most two elements, `*0` otherwise.
pub fn predict_gen_dih(a: &AbelianSpec) -> Result<Nim> {
    reject_trivial(a)?;
    let n = a.order();
    let value = match a.rank() {
        1 if n % 4 == 2 => 1,
        1 | 2 if n % 2 == 1 => 3,
        _ => 0,
    };
    Ok(Nim(value))
}

/// Predicted `DNG(Dih(A))`: `*3` for cyclic `A` of odd order, `*0` otherwise.
pub fn predict_dng_dih(a: &AbelianSpec) -> Result<Nim> {
    reject_trivial(a)?;
    Ok(Nim(if a.is_cyclic() && a.is_odd() { 3 } else { 0 }))
}

/// Whether `Φ(Dih(A))` equals `Φ(A)`, with `A` embedded as the first `|A|`
/// elements of `Dih(A)`.
pub fn frattini_matches(a: &GroupTable, dih_lattice: &IntersectionLattice, cfg: LatticeConfig) -> Result<bool> {
    let phi_a = IntersectionLattice::new(a, cfg)?.frattini().to_owned();
    Ok(*dih_lattice.frattini() == phi_a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyRecord {
    pub spec: String,
    pub variant: GameVariant,
    pub predicted: Option<Nim>,
    pub computed: Option<Nim>,
    pub d_dih: Option<u32>,
    pub d_a: Option<u32>,
    pub frattini_match: Option<bool>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerifyRecord {
    fn failed(spec: String, variant: GameVariant, err: &Error) -> Self {
        Self {
            spec,
            variant,
            predicted: None,
            computed: None,
            d_dih: None,
            d_a: None,
            frattini_match: None,
            agree: false,
            error: Some(err.to_string()),
        }
    }
}

/// Computes `Dih(A)` for one `A` and compares it with the predictions: the
/// nim-number, `d(Dih(A)) = d(A) + 1` and `Φ(Dih(A)) = Φ(A)`.
pub fn verify_one(a: &AbelianSpec, variant: GameVariant, opts: SolveOptions) -> VerifyRecord {
    let spec = format!("Dih({a})");
    let run = || -> Result<VerifyRecord> {
        let predicted = match variant {
            GameVariant::Gen => predict_gen_dih(a)?,
            GameVariant::Dng => predict_dng_dih(a)?,
        };
        let a_table = a.build()?;
        let dih = GroupTable::dihedralize(&a_table)?;
        let lat = IntersectionLattice::new(&dih, opts.lattice)?;
        let options = lat.option_table(&dih)?;
        let def = deficiency_table(&lat, &options)?;
        let computed = match variant {
            GameVariant::Gen => ClassNimTable::from_options(&lat, &options)?.game_nim(),
            GameVariant::Dng => brute_nim(&dih, GameVariant::Dng, opts.brute_max)?,
        };
        let d_a = a.rank() as u32;
        let frattini_match = frattini_matches(&a_table, &lat, opts.lattice)?;
        let agree = predicted == computed && def.d_g() == d_a + 1 && frattini_match;
        Ok(VerifyRecord {
            spec: spec.clone(),
            variant,
            predicted: Some(predicted),
            computed: Some(computed),
            d_dih: Some(def.d_g()),
            d_a: Some(d_a),
            frattini_match: Some(frattini_match),
            agree,
            error: None,
        })
    };
    run().unwrap_or_else(|e| VerifyRecord::failed(spec.clone(), variant, &e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
#[serde(transparent)]
pub struct FamilyReport {
    pub records: Vec<VerifyRecord>,
}

impl FamilyReport {
    /// 0 when everything agrees, 1 on any disagreement, 2 when the only
    /// failures are errors (capacity, scope).
    pub fn exit_code(&self) -> i32 {
        if self.records.iter().any(|r| r.error.is_none() && !r.agree) {
            1
        } else if self.records.iter().any(|r| r.error.is_some()) {
            2
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let cell = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let mut out = format!(
            "{:<20} {:<4} {:>9} {:>9} {:>5} {:>3} {:>7} {}\n",
            "spec", "game", "predicted", "computed", "dDih", "dA", "frattini", "result"
        );
        for r in &self.records {
            let result = match (&r.error, r.agree) {
                (Some(e), _) => format!("ERROR {e}"),
                (None, true) => "ok".into(),
                (None, false) => "MISMATCH".into(),
            };
            out.push_str(&format!(
                "{:<20} {:<4} {:>9} {:>9} {:>5} {:>3} {:>7} {}\n",
                r.spec,
                r.variant,
                cell(r.predicted.map(|n| n.to_string())),
                cell(r.computed.map(|n| n.to_string())),
                cell(r.d_dih.map(|n| n.to_string())),
                cell(r.d_a.map(|n| n.to_string())),
                cell(r.frattini_match.map(|b| b.to_string())),
                result
            ));
        }
        out
    }
}

/// Verifies each spec independently (in parallel); records keep input order.
pub fn verify_family(specs: &[AbelianSpec], variant: GameVariant, opts: SolveOptions) -> FamilyReport {
    FamilyReport { records: specs.par_iter().map(|a| verify_one(a, variant, opts)).collect() }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrialReport {
    pub trials: usize,
    pub failures: Vec<String>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn dihedral_pool(max_order: usize) -> Vec<(AbelianSpec, GroupTable)> {
    AbelianSpec::all_up_to(max_order)
        .into_iter()
        .map(|a| {
            let dih = GroupTable::dihedralize(&a.build().expect("catalog groups build")).expect("abelian");
            (a, dih)
        })
        .collect()
}

/// Random instances of `⟨S, ya, yb⟩ = ⟨S, a⁻¹b, yb⟩` for `y ∉ A` and
/// `a, b ∈ A`, over abelian `A` of order at most `max_order`.
pub fn involution_transform_trials(trials: usize, max_order: usize, seed: u64) -> TrialReport {
    let pool = dihedral_pool(max_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport { trials, failures: Vec::new() };
    for _ in 0..trials {
        let (spec, g) = pool.choose(&mut rng).expect("nonempty pool");
        let n = g.order() / 2;
        let s: ElementSet = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..g.order())).collect();
        let y = n + rng.gen_range(0..n);
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (ya, yb) = (g.mul(y, a), g.mul(y, b));
        let ainv_b = g.mul(g.inv(a), b);
        let lhs = g.generated_subgroup(&s.with(ya).with(yb));
        let rhs = g.generated_subgroup(&s.with(ainv_b).with(yb));
        if lhs != rhs {
            report.failures.push(format!("Dih({spec}): S={s:?} y={y} a={a} b={b}"));
        }
    }
    report
}

/// Random instances of: if `⟨B, y⟩ = Dih(A)` with `B ≤ A` and `y ∉ A`, then
/// `B = A`.
pub fn quotient_generation_trials(trials: usize, max_order: usize, seed: u64) -> TrialReport {
    let pool = dihedral_pool(max_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport { trials, failures: Vec::new() };
    for _ in 0..trials {
        let (spec, g) = pool.choose(&mut rng).expect("nonempty pool");
        let n = g.order() / 2;
        let seeds: ElementSet = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..n)).collect();
        let b = g.generated_subgroup(&seeds);
        let y = n + rng.gen_range(0..n);
        if g.generates(&b.with(y)) && b.len() != n {
            report.failures.push(format!("Dih({spec}): B={b:?} y={y}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::d_min;

    fn a(s: &str) -> AbelianSpec {
        AbelianSpec::parse(s).unwrap()
    }

    #[test]
    fn rank_matches_search() {
        for spec in AbelianSpec::all_up_to(36) {
            let g = spec.build().unwrap();
            assert_eq!(spec.rank(), d_min(&g), "{spec}");
        }
        // Non-invariant spellings too.
        for (s, d) in [("Z2xZ3", 1), ("Z3xZ9", 2), ("Z2xZ2xZ3", 2), ("Z4xZ6", 2), ("Z1", 0), ("Z1xZ5", 1)] {
            assert_eq!(a(s).rank(), d, "{s}");
        }
    }

    #[test]
    fn catalog_of_abelian_groups() {
        let orders: Vec<usize> = AbelianSpec::all_up_to(16).iter().map(AbelianSpec::order).collect();
        // Number of abelian groups of order n for n = 2..16.
        let counts: Vec<usize> = (2..=16).map(|n| orders.iter().filter(|&&o| o == n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
    }

    #[test]
    fn gen_predictions() {
        assert_eq!(predict_gen_dih(&a("Z6")).unwrap(), Nim(1));
        assert_eq!(predict_gen_dih(&a("Z3xZ9")).unwrap(), Nim(3));
        assert_eq!(predict_gen_dih(&a("Z2xZ2xZ2")).unwrap(), Nim(0));
        assert_eq!(predict_gen_dih(&a("Z4")).unwrap(), Nim(0));
        assert_eq!(predict_gen_dih(&a("Z9")).unwrap(), Nim(3));
        assert_eq!(predict_gen_dih(&a("Z2xZ3")).unwrap(), Nim(1));
        assert_eq!(predict_gen_dih(&a("Z2xZ4")).unwrap(), Nim(0));
        assert_eq!(predict_gen_dih(&a("Z3xZ3xZ3")).unwrap(), Nim(0));
        assert!(matches!(predict_gen_dih(&a("Z1")), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn dng_predictions() {
        assert_eq!(predict_dng_dih(&a("Z5")).unwrap(), Nim(3));
        assert_eq!(predict_dng_dih(&a("Z4")).unwrap(), Nim(0));
        assert_eq!(predict_dng_dih(&a("Z3xZ3")).unwrap(), Nim(0));
        assert_eq!(predict_dng_dih(&a("Z3xZ5")).unwrap(), Nim(3));
        assert!(predict_dng_dih(&a("Z1")).is_err());
    }

    #[test]
    fn family_reports() {
        let opts = SolveOptions::default();
        let gen: Vec<AbelianSpec> = ["Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ4", "Z3xZ3"].map(a).to_vec();
        let report = verify_family(&gen, GameVariant::Gen, opts);
        assert!(report.records.iter().all(|r| r.agree), "{}", report.to_text());
        assert_eq!(report.exit_code(), 0);

        let dng: Vec<AbelianSpec> = ["Z3", "Z4", "Z5", "Z2xZ2"].map(a).to_vec();
        assert_eq!(verify_family(&dng, GameVariant::Dng, opts).exit_code(), 0);

        assert_eq!(verify_family(&[], GameVariant::Gen, opts).exit_code(), 0);

        let trivial = verify_family(&[a("Z1")], GameVariant::Gen, opts);
        assert_eq!(trivial.exit_code(), 2);
        assert!(trivial.records[0].error.as_deref().unwrap().contains("nontrivial"));

        let too_big = verify_family(&[a("Z9")], GameVariant::Dng, opts);
        assert_eq!(too_big.exit_code(), 2);
    }

    #[test]
    fn randomized_dihedral_identities() {
        assert!(involution_transform_trials(200, 24, 1).passed());
        assert!(quotient_generation_trials(200, 24, 2).passed());
    }

    #[test]
    fn frattini_of_dihedral_and_abelian_agree() {
        for s in ["Z4", "Z8", "Z2xZ4", "Z9", "Z3xZ9", "Z12"] {
            let at = a(s).build().unwrap();
            let dih = GroupTable::dihedralize(&at).unwrap();
            let lat = IntersectionLattice::new(&dih, LatticeConfig::default()).unwrap();
            assert!(frattini_matches(&at, &lat, LatticeConfig::default()).unwrap(), "{s}");
        }
    }
}
