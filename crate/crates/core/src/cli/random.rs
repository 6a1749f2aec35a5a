//! Seeded random generation. Every draw goes through `ChaCha8Rng` so that a
//! seed reproduces the same values on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::potential::FramedRep;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar<R: Rng>(rng: &mut R, bound: i64, complex: bool) -> Scalar {
    let re = rng.gen_range(-bound..=bound);
    let im = if complex { rng.gen_range(-bound..=bound) } else { 0 };
    Scalar::gaussian(re, im)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64, complex: bool) -> Matrix {
    let data = (0..rows * cols).map(|_| random_scalar(rng, bound, complex)).collect();
    Matrix::from_vec(rows, cols, data).expect("shape")
}

/// Random invertible matrix (rejection sampling on the determinant).
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, bound: i64, complex: bool) -> Matrix {
    loop {
        let g = random_matrix(rng, n, n, bound, complex);
        if !g.determinant().expect("square").is_zero() {
            return g;
        }
    }
}

pub fn random_rep_with<R: Rng>(rng: &mut R, n: usize, r: usize, bound: i64) -> Result<FramedRep> {
    if bound < 1 {
        return Err(Error::InvalidInput("bound must be at least 1".into()));
    }
    let a = random_matrix(rng, n, n, bound, true);
    let b = random_matrix(rng, n, n, bound, true);
    let c = random_matrix(rng, n, n, bound, true);
    let v = random_matrix(rng, n, r, bound, true);
    FramedRep::new(a, b, c, v)
}

/// Framed representation with Gaussian-integer entries in `[−bound, bound]`
/// (real and imaginary parts), determined by `seed`.
pub fn random_rep(n: usize, r: usize, seed: u64, bound: i64) -> Result<FramedRep> {
    random_rep_with(&mut rng(seed), n, r, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(random_rep(3, 2, 42, 5).unwrap(), random_rep(3, 2, 42, 5).unwrap());
        assert_ne!(random_rep(3, 2, 42, 5).unwrap(), random_rep(3, 2, 43, 5).unwrap());
    }

    #[test]
    fn bound_zero_rejected() {
        assert!(random_rep(2, 1, 0, 0).is_err());
    }

    #[test]
    fn entries_within_bound() {
        let rep = random_rep(3, 1, 9, 2).unwrap();
        let two = crate::exactalg::Rational::from_integer(2.into());
        for s in rep.coords() {
            assert!(s.re() <= &two && s.re() >= &-two.clone());
            assert!(s.im() <= &two && s.im() >= &-two.clone());
        }
    }
}
