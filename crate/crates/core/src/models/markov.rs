//! The Markov chain behind repeated "live" observations.
//!
//! Combining the all-live mass function with one more live observation maps
//! the mass vector over the focal sets `[1..N], ..., [N..N]` through a fixed
//! lower-triangular stochastic matrix `T`. `T` diagonalizes as `M L M⁻¹`
//! with an explicit bidiagonal `M` and `L = diag(1/N, 2/N, ..., 1)`.

use num_traits::{One, Zero};

use super::matrix::RationalMatrix;
use crate::error::{Error, Result};
use crate::frames::rational::ratio;
use crate::frames::Rational;

/// `T[i][i] = (i+1)/N`, `T[i][j] = 1/N` for `i > j`, zero above the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    size: usize,
    entries: RationalMatrix,
}

pub fn build_transition_matrix(n: u32) -> Result<TransitionMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let big_n = n as i64;
    let entries = RationalMatrix::from_fn(n as usize, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => ratio(r as i64 + 1, big_n),
        std::cmp::Ordering::Greater => ratio(1, big_n),
        std::cmp::Ordering::Less => Rational::zero(),
    });
    Ok(TransitionMatrix { size: n as usize, entries })
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &RationalMatrix {
        &self.entries
    }

    pub fn is_stochastic(&self) -> bool {
        let nonneg = (0..self.size).all(|r| (0..self.size).all(|c| *self.entries.get(r, c) >= Rational::zero()));
        nonneg && self.entries.column_sums().iter().all(One::is_one)
    }

    /// One step of the chain.
    pub fn apply(&self, masses: &[Rational]) -> Vec<Rational> {
        self.entries.mul_vec(masses)
    }

    /// The uniform starting vector `m⁽¹⁾ = (1/N, ..., 1/N)`.
    pub fn initial(&self) -> Vec<Rational> {
        vec![ratio(1, self.size as i64); self.size]
    }

    /// `m⁽ᵐ⁾ = T^{m-1} m⁽¹⁾`, stepping the chain `m - 1` times.
    pub fn evolve(&self, m: u32) -> Result<Vec<Rational>> {
        if m == 0 {
            return Err(Error::InvalidArgument("observation count must be at least 1".into()));
        }
        Ok((1..m).fold(self.initial(), |v, _| self.apply(&v)))
    }
}

/// The eigenvector matrix `M`: `-1` on the diagonal except a final `+1`,
/// `+1` on the subdiagonal.
pub fn eigenvector_matrix(n: u32) -> RationalMatrix {
    let n = n as usize;
    RationalMatrix::from_fn(n, |r, c| {
        if r == c {
            if r + 1 == n {
                Rational::one()
            } else {
                -Rational::one()
            }
        } else if r == c + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// `L = diag(1/N, 2/N, ..., N/N)`.
pub fn eigenvalue_matrix(n: u32) -> RationalMatrix {
    RationalMatrix::diagonal((1..=n as i64).map(|i| ratio(i, n as i64)).collect())
}

/// `T^k = M L^k M⁻¹` with `M⁻¹` obtained by exact inversion.
pub fn jordan_power(n: u32, k: u32) -> Result<RationalMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let m = eigenvector_matrix(n);
    let m_inv = m.inverse().expect("eigenvector matrix is unit triangular up to sign");
    let l_pow = RationalMatrix::diagonal((1..=n as i64).map(|i| crate::frames::rational::pow(&ratio(i, n as i64), k)).collect());
    Ok(&(&m * &l_pow) * &m_inv)
}
