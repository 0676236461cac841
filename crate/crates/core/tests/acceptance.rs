//! Runs every suite at the default configuration and reports each acceptance
//! criterion with the checks that cover it.

use contact_lab::experiments::{evaluate_suite, CheckRecord, ExperimentConfig};

const CRITERIA: [(u32, &str, &[&str]); 15] = [
    (1, "complex identities", &["verify-complex/model_structure", "verify-complex/complex_identities"]),
    (2, "adjointness", &["verify-complex/adjointness"]),
    (3, "Laplacian positivity and symmetry", &["verify-complex/laplacian_rayleigh_min", "verify-complex/laplacian_self_adjoint"]),
    (4, "Hodge decomposition", &["verify-hodge/hodge_reconstruction", "verify-hodge/hodge_orthogonality", "verify-hodge/harmonic_dimensions_mismatch"]),
    (5, "dense versus CG", &["verify-hodge/dense_vs_cg"]),
    (6, "commutation relations", &["verify-hodge/harmonic_commutation", "verify-hodge/green_relation"]),
    (7, "contact fields", &["contact-field/lie_contact_identity", "contact-field/characterization_residuals", "contact-field/non_contact_flagged"]),
    (8, "Psi solver", &["solve-psi/psi_iterations", "solve-psi/psi_defect", "solve-psi/newton_contraction", "solve-psi/phi_reconstruction", "solve-psi/symmetry_control_defect"]),
    (9, "quadratic error", &["quadratic-scaling/quadratic_slope_s0", "quadratic-scaling/quadratic_slope_s1", "quadratic-scaling/quadratic_slope_s2"]),
    (10, "difference estimate", &["quadratic-scaling/difference_ratio_spread"]),
    (11, "pullback Taylor", &["exp-taylor/quad_eta_slope", "exp-taylor/exp_remainder_slope", "exp-taylor/b_consistency", "exp-taylor/geodesic_integrator_order"]),
    (12, "group operations", &["group-ops/composed_defect", "group-ops/inverse_defect", "group-ops/inverse_identity_distance", "group-ops/symmetry_composed_defect", "group-ops/pullback_functoriality"]),
    (13, "derivative of composition", &["comp-derivative/composition_derivative_order"]),
    (14, "FS-norm integrity", &["norms-report/fs_refinement_invariance", "norms-report/fs_isometry_invariance", "norms-report/fs_recursive_identity"]),
    (15, "stability reports", &[
        "norms-report/sobolev_drift",
        "norms-report/algebra_drift",
        "norms-report/division_drift",
        "norms-report/hypoelliptic_degree0_drift",
        "norms-report/hypoelliptic_degree1_drift",
        "norms-report/hypoelliptic_degree2_drift",
        "norms-report/hypoelliptic_degree3_drift",
        "norms-report/green_gain_degree0_drift",
        "norms-report/green_gain_degree1_drift",
        "norms-report/green_gain_degree2_drift",
        "norms-report/green_gain_degree3_drift",
        "quadratic-scaling/mixed_norm_sweep_spread",
    ]),
];

#[test]
fn acceptance_criteria() {
    let report = evaluate_suite("all", &ExperimentConfig::default()).unwrap();
    let find = |name: &str| -> &CheckRecord {
        report.check(name).unwrap_or_else(|| panic!("no check named {name}"))
    };
    let mut failed = Vec::new();
    for (number, title, checks) in CRITERIA {
        let records: Vec<&CheckRecord> = checks.iter().map(|c| find(c)).collect();
        let passed = records.iter().all(|r| r.passed);
        println!("criterion {number:>2} {}: {title}", if passed { "PASS" } else { "FAIL" });
        for r in records {
            println!("    {}", r.summary());
        }
        if !passed {
            failed.push(number);
        }
    }
    let mapped: Vec<&str> = CRITERIA.iter().flat_map(|(_, _, c)| c.iter().copied()).collect();
    let unmapped: Vec<&str> = report
        .checks
        .iter()
        .map(|c| c.name.as_str())
        .filter(|n| !mapped.contains(n))
        .collect();
    println!("all suites in {:.1} s", report.wall_seconds);
    assert!(unmapped.is_empty(), "checks without a criterion: {unmapped:?}");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
