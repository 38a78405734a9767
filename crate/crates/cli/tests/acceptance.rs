//! Acceptance gate: every criterion runs at its stated tolerance (all
//! tolerances are exact) and prints one pass/fail line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use homgrow::suites::{run_criterion, DEFAULT_SEED};

fn check(id: usize) {
    let result = run_criterion(id, DEFAULT_SEED, None);
    println!("{}", result.line());
    assert!(result.pass, "{}", result.line());
}

#[test]
fn criterion_01_free_product_kernel() {
    check(1);
}

#[test]
fn criterion_02_graph_product_bounds() {
    check(2);
}

#[test]
fn criterion_03_k33_obstruction() {
    check(3);
}

#[test]
fn criterion_04_finger_move_calculus() {
    check(4);
}

#[test]
fn criterion_05_small_eigenvalue_lemma() {
    check(5);
}

#[test]
fn criterion_06_delta_pinching() {
    check(6);
}

#[test]
fn criterion_07_universal_coefficients() {
    check(7);
}

#[test]
fn criterion_08_mapping_torus_decay() {
    check(8);
}

#[test]
fn criterion_09_nerve_lemma() {
    check(9);
}

#[test]
fn criterion_10_octahedralization() {
    check(10);
}

#[test]
fn criterion_11_mayer_vietoris_stars() {
    check(11);
}
