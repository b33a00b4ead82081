//! Built-in group lists used by verification runs and tests.

/// Groups of order at most 16 used for oracle comparisons.
pub const SMALL_GROUPS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z13", "Z14", "Z15", "Z16",
    "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z2xZ6",
    "Dih(Z2)", "Dih(Z3)", "Dih(Z4)", "Dih(Z5)", "Dih(Z6)", "Dih(Z7)", "Dih(Z8)",
    "Dih(Z2xZ2)", "Dih(Z2xZ4)", "Dih(Z2xZ2xZ2)",
];

/// Abelian `A` whose `Dih(A)` exercises every case of the dihedral
/// classification beyond the cyclic ones.
pub const DIHEDRAL_SWEEP: &[&str] =
    &["Z3xZ3", "Z3xZ9", "Z5xZ5", "Z2xZ2", "Z2xZ4", "Z2xZ6", "Z2xZ2xZ2", "Z3xZ3xZ3"];

/// Abelian `A` for the brute-force `DNG(Dih(A))` classification check.
pub const DNG_SWEEP: &[&str] = &["Z3", "Z5", "Z7", "Z4", "Z6", "Z2xZ2"];

/// Every abelian group appearing in the catalog.
pub const ABELIAN_GROUPS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z13", "Z14", "Z15", "Z16",
    "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z2xZ6", "Z3xZ3", "Z3xZ9", "Z5xZ5", "Z3xZ3xZ3",
];

/// Small groups plus `Dih(A)` for the dihedral sweep.
pub fn full_catalog() -> Vec<String> {
    let mut v: Vec<String> = SMALL_GROUPS.iter().map(|s| s.to_string()).collect();
    for a in DIHEDRAL_SWEEP {
        let dih = format!("Dih({a})");
        if !v.contains(&dih) {
            v.push(dih);
        }
    }
    v
}
