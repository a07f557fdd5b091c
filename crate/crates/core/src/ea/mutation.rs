use rand::Rng;

use crate::instance::Solution;

/// Uniform point of `{0,1}^n`.
pub fn random_solution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Solution {
    Solution::from_bits((0..n).map(|_| rng.random_bool(0.5)).collect())
}

/// Standard bit mutation: flips every bit independently with probability `1/n`.
///
/// An offspring identical to its parent is returned as is.
pub fn mutate<R: Rng + ?Sized>(x: &Solution, rng: &mut R) -> Solution {
    let n = x.len();
    let mut child = x.clone();
    if n == 0 {
        return child;
    }
    let rate = 1.0 / n as f64;
    for i in 0..n {
        if rng.random_bool(rate) {
            child.flip(i);
        }
    }
    child
}
