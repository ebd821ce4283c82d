//! Every example compiles as part of the test suite and its result is checked.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(svd_projection);
example!(linear_assignment);
example!(laps_vs_naive);
example!(auto_basis);
example!(theory_rates);
example!(lattice_symmetry);
example!(signal_sweep);
example!(p_sweep);
example!(label_accuracy);
example!(file_formats);

use matchkit::{BasisSource, Method};

#[test]
fn svd_projection_recovers_the_subspace() {
    assert!(svd_projection::run_example().unwrap() < 0.5);
}

#[test]
fn linear_assignment_matches_the_oracle() {
    let (ours, best) = linear_assignment::run_example().unwrap();
    assert_eq!(ours, best);
}

#[test]
fn laps_beats_naive() {
    let (laps, naive) = laps_vs_naive::run_example().unwrap();
    assert!(laps < naive, "laps {laps} naive {naive}");
}

#[test]
fn auto_basis_picks_the_quieter_dataset() {
    assert_eq!(auto_basis::run_example().unwrap(), BasisSource::FromY);
}

#[test]
fn theory_rates_fall_with_signal() {
    let b = theory_rates::run_example().unwrap();
    assert!(b[0].upper_sharp > b[1].upper_sharp && b[1].upper_sharp > b[2].upper_sharp);
    assert!(b.iter().all(|x| x.upper_c6 >= x.upper_sharp));
}

#[test]
fn lattice_is_weakly_symmetric() {
    assert!(lattice_symmetry::run_example().unwrap());
}

#[test]
fn signal_sweep_rows() {
    let res = signal_sweep::run_example().unwrap();
    assert_eq!(res.rows.len(), 8);
    let laps = res.mean_losses(Method::Laps);
    let naive = res.mean_losses(Method::Naive);
    assert!(laps.iter().zip(&naive).all(|(l, n)| l <= n));
}

#[test]
fn p_sweep_theory_constant() {
    let res = p_sweep::run_example().unwrap();
    let t = res.theory_rates(Method::Naive);
    assert!(t.iter().all(|v| v.to_bits() == t[0].to_bits()));
}

#[test]
fn label_accuracy_is_high() {
    assert!(label_accuracy::run_example().unwrap() > 0.9);
}

#[test]
fn file_formats_reject_bad_input() {
    assert_eq!(file_formats::run_example().unwrap(), 4);
}
