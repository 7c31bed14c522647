#![allow(dead_code)]

use std::f64::consts::TAU;

use kakeya::Complex;
use proptest::prelude::*;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Uniform point in the closed disc of the given radius.
pub fn in_disc(radius: f64) -> impl Strategy<Value = Complex> {
    (0.0..=1.0f64, 0.0..TAU)
        .prop_map(move |(u, theta)| Complex::from_polar(radius * u.sqrt(), theta))
}

/// Point with both components in [-1, 1].
pub fn in_square() -> impl Strategy<Value = Complex> {
    (-1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

pub fn min_sep(points: &[Complex]) -> f64 {
    kakeya::construction::min_separation(points)
}

/// `k` points in the closed unit disc with pairwise separation >= `sep`.
pub fn unit_nodes(
    k: std::ops::RangeInclusive<usize>,
    sep: f64,
) -> impl Strategy<Value = Vec<Complex>> {
    k.prop_flat_map(|k| proptest::collection::vec(in_disc(1.0), k))
        .prop_filter("nodes too close", move |v| min_sep(v) >= sep)
}

pub fn rng_in_disc(rng: &mut impl Rng, radius: f64) -> Complex {
    loop {
        let z = c(
            rng.gen_range(-radius..=radius),
            rng.gen_range(-radius..=radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

pub fn rng_in_square(rng: &mut impl Rng) -> Complex {
    c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Relative distance `|a - b| / max(|a|, |b|, floor)`.
pub fn rel(a: Complex, b: Complex, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}
