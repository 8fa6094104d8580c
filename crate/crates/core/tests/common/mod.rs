#![allow(dead_code)]

use proptest::prelude::*;
use tsd_core::{CMatrix, HamiltonianOperator, MixtureBasis, StateVector, C64};

/// Hermitian matrix built from `d*d` real and `d*d` imaginary draws.
pub fn hermitian(d: usize, re: &[f64], im: &[f64]) -> HamiltonianOperator {
    let m = CMatrix::from_fn(d, d, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let z = C64::new(re[a * d + b], if a == b { 0.0 } else { im[a * d + b] });
        if i <= j {
            z
        } else {
            z.conj()
        }
    });
    HamiltonianOperator::new(m).expect("hermitian by construction")
}

pub fn hermitian_strategy(max_d: usize) -> impl Strategy<Value = HamiltonianOperator> {
    (2..=max_d).prop_flat_map(|d| {
        (
            prop::collection::vec(-2.0..2.0f64, d * d),
            prop::collection::vec(-2.0..2.0f64, d * d),
        )
            .prop_map(move |(re, im)| hermitian(d, &re, &im))
    })
}

pub fn state_strategy(d: usize) -> impl Strategy<Value = StateVector> {
    (
        prop::collection::vec(-1.0..1.0f64, d),
        prop::collection::vec(-1.0..1.0f64, d),
    )
        .prop_filter_map("nonzero", |(re, im)| {
            StateVector::normalized(re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect())
                .ok()
        })
}

/// A random orthonormal basis: eigenvectors of a random Hermitian matrix.
pub fn basis_from(h: &HamiltonianOperator) -> MixtureBasis {
    MixtureBasis::from_columns(h.eigen().vectors.clone()).expect("unitary eigenvectors")
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
