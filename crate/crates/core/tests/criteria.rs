mod common;

use common::criteria::{run_timed, ALL};

fn check(id: u32) {
    let c = ALL.iter().find(|c| c.id == id).unwrap();
    let (out, took) = run_timed(c);
    match out {
        Ok(msg) => eprintln!("{} ({took:.2?}): {msg}", c.name),
        Err(e) => panic!("{}: {e}", c.name),
    }
}

#[test]
fn ring_axioms() {
    check(1);
}

#[test]
fn action_compatibility() {
    check(2);
}

#[test]
fn envelope_oracle() {
    check(3);
}

#[test]
fn regularity_dichotomy() {
    check(4);
}

#[test]
fn solver_certificate() {
    check(5);
}

#[test]
fn kernel_structure() {
    check(6);
}

#[test]
fn regular_decomposition() {
    check(7);
}

#[test]
fn logic_corpus_and_elimination() {
    check(8);
}
