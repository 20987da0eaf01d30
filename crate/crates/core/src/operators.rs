//! Single-site Pauli operators and their many-body embeddings.
//!
//! Basis convention: site 0 is the most significant bit of the
//! computational-basis index, i.e. basis state `n` assigns site `i` the bit
//! `(n >> (L-1-i)) & 1`, with bit 0 meaning spin up (`σ^z = +1`). Everything
//! downstream (reduced density matrices, half-cut entropies, the classical
//! Ising diagonal) relies on this ordering.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Pauli axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Hilbert-space dimension of an `L`-site register.
pub fn dim(sites: usize) -> usize {
    1usize << sites
}

/// `σ^z` eigenvalue (+1 or -1) of site `site` in basis state `n`.
#[inline]
pub fn z_sign(n: usize, site: usize, sites: usize) -> f64 {
    if (n >> (sites - 1 - site)) & 1 == 0 { 1.0 } else { -1.0 }
}

fn check_site(site: usize, sites: usize) -> Result<()> {
    if sites == 0 {
        return Err(Error::EmptyRegister);
    }
    if site >= sites {
        return Err(Error::SiteOutOfRange { site, sites });
    }
    Ok(())
}

/// `2^L` identity matrix.
pub fn identity(sites: usize) -> CMatrix {
    Array2::eye(dim(sites))
}

/// Embed `σ^axis` at position `site` of an `L`-site register:
/// `I ⊗ … ⊗ σ^axis ⊗ … ⊗ I`.
///
/// The result is Hermitian, involutory and traceless. Identical inputs yield
/// bit-identical matrices.
pub fn pauli(axis: Axis, site: usize, sites: usize) -> Result<CMatrix> {
    check_site(site, sites)?;
    let d = dim(sites);
    let mask = 1usize << (sites - 1 - site);
    let mut op = Array2::zeros((d, d));
    for col in 0..d {
        match axis {
            // σ^x flips the bit with amplitude 1.
            Axis::X => op[[col ^ mask, col]] = C64::new(1.0, 0.0),
            // σ^y = [[0, -i], [i, 0]]: |0> -> i|1>, |1> -> -i|0>.
            Axis::Y => {
                let up = col & mask == 0;
                let amp = if up { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                op[[col ^ mask, col]] = amp;
            }
            Axis::Z => op[[col, col]] = C64::new(z_sign(col, site, sites), 0.0),
        }
    }
    Ok(op)
}

/// `σ^z_i σ^z_j` on an `L`-site register; diagonal with entries ±1.
pub fn two_site_zz(i: usize, j: usize, sites: usize) -> Result<CMatrix> {
    check_site(i, sites)?;
    check_site(j, sites)?;
    if i == j {
        return Err(Error::SiteCollision(i));
    }
    let d = dim(sites);
    let mut op = Array2::zeros((d, d));
    for n in 0..d {
        op[[n, n]] = C64::new(z_sign(n, i, sites) * z_sign(n, j, sites), 0.0);
    }
    Ok(op)
}
