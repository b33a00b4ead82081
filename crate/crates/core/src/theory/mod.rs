//! Deficiency, minimal generating number, strata of structure classes,
//! closed-form predictions for `Dih(A)`, and checks that confront solver
//! output with those predictions.

mod checks;
mod deficiency;
mod dihedral;

pub use checks::{
    check_even_type_table, check_odd_dihedral_classes, check_option_deficiency, even_type_row, odd_dihedral_type_row,
    CheckReport,
};
pub use deficiency::{d_min, deficiency_table, exhaustive_deficiency, strata, DeficiencyTable, Strata};
pub use dihedral::{
    frattini_matches, involution_transform_trials, predict_dng_dih, predict_gen_dih,
    quotient_generation_trials, verify_family, verify_one, AbelianSpec, FamilyReport, TrialReport, VerifyRecord,
};
