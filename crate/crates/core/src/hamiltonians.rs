//! The two non-Hermitian Hamiltonians of the model: the two-level system
//! `M₀ + ib` and the `L`-site Ising chain
//! `H = Σ_i [h_i σ^z_i + g σ^x_i + iγ(1 + σ^y_i)] + Σ_i J_i σ^z_i σ^z_{i+1}`,
//! plus disorder sampling and the classical-spectrum oracle for the solvable
//! line `γ = 1`.
//!
//! Sign convention: the anti-Hermitian term enters with `+iγ`, so the slowest
//! *decaying* mode is the one with the largest imaginary eigenvalue part.
//! Normalized dynamics is invariant under `γ → -γ` (which conjugates the
//! spectrum), so purities, entropies and gaps do not depend on this choice.

use ndarray::Array2;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{dim, z_sign};
use crate::{C64, CMatrix, RMatrix};

/// Default cap on the register size; override with the `PTSIM_MAX_L` env var.
pub const DEFAULT_MAX_SITES: usize = 14;

/// Effective cap on `L`, reading `PTSIM_MAX_L` if set.
pub fn max_sites() -> usize {
    std::env::var("PTSIM_MAX_L")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_SITES)
}

/// Boundary condition for the Ising bond sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Bonds `i = 0 .. L-2` only (the default; the bond sum is written
    /// without a wrap term).
    #[default]
    Open,
    /// Adds the wrap bond `L-1 -- 0` for `L >= 2`.
    Periodic,
}

/// Number of Ising bonds for the given boundary condition.
pub fn bond_count(sites: usize, boundary: Boundary) -> usize {
    match boundary {
        _ if sites < 2 => 0,
        Boundary::Open => sites - 1,
        Boundary::Periodic => sites,
    }
}

/// Two-level model parameters: `H = M₀ + ib` with
/// `M₀ = [[0, 1+b], [1-b, 0]]`, plus the initial-state angle θ for
/// trajectory studies of `|ψ⟩ = (cos θ, sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TlsParameters {
    pub b: f64,
    #[serde(default)]
    pub theta: f64,
}

impl TlsParameters {
    pub fn new(b: f64) -> Self {
        Self { b, theta: 0.0 }
    }
}

/// Chain parameters. Energies are dimensionless; the transverse coupling is
/// the paper-unit scale (`g = 1` by default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParameters {
    /// Number of sites `L >= 1`.
    pub sites: usize,
    /// Mean longitudinal field `h₀`.
    pub h0: f64,
    /// Half-width of the uniform disorder on `h_i ∈ [h₀-ε, h₀+ε]`.
    #[serde(default)]
    pub epsilon: f64,
    /// Transverse field coefficient (default 1).
    #[serde(default = "default_g")]
    pub g: f64,
    /// Measurement strength `γ >= 0` for physical runs; negative values are
    /// accepted by the builder for the spectrum-conjugation symmetry check.
    pub gamma: f64,
    /// Ising coupling `J`.
    pub j: f64,
    /// Relative half-width of the multiplicative coupling disorder,
    /// `J_i ∈ J·[1-δ, 1+δ]`.
    #[serde(default)]
    pub coupling_disorder: f64,
    #[serde(default)]
    pub boundary: Boundary,
    /// RNG seed for the disorder realization.
    #[serde(default)]
    pub seed: u64,
}

fn default_g() -> f64 {
    1.0
}

impl ChainParameters {
    /// Clean chain with the paper's defaults (`g = 1`, open boundary).
    pub fn clean(sites: usize, h0: f64, gamma: f64, j: f64) -> Self {
        Self {
            sites,
            h0,
            epsilon: 0.0,
            g: 1.0,
            gamma,
            j,
            coupling_disorder: 0.0,
            boundary: Boundary::Open,
            seed: 0,
        }
    }

    /// Soft validation: returns human-readable warnings for parameter choices
    /// that are permitted but outside the regime the model targets.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.h0 != 0.0 && self.epsilon > self.h0.abs() / 10.0 {
            w.push(format!(
                "field disorder epsilon = {} exceeds h0/10 = {}; outside the weak-disorder regime",
                self.epsilon,
                self.h0.abs() / 10.0
            ));
        }
        if self.gamma < 0.0 {
            w.push("gamma < 0: spectrum is the complex conjugate of the physical run".into());
        }
        w
    }

    fn check_size(&self) -> Result<()> {
        if self.sites == 0 {
            return Err(Error::EmptyRegister);
        }
        let max = max_sites();
        if self.sites > max {
            return Err(Error::DimensionOverflow { sites: self.sites, max });
        }
        Ok(())
    }
}

/// Structural classification detected (or declared) at construction time;
/// the eigensolver dispatches on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Structure {
    /// Real symmetric (the `γ = 0` chain).
    RealSymmetric,
    /// Hermitian but not purely real.
    Hermitian,
    /// `H = R + i·shift·I` with `R` purely real — the generic form of the
    /// model at `γ ≠ 0` (`shift = γL`).
    RealPlusShift { shift: f64 },
    /// No special structure detected.
    General,
}

/// A dense non-Hermitian operator with its structural metadata.
#[derive(Debug, Clone)]
pub struct NonHermitianOperator {
    matrix: CMatrix,
    structure: Structure,
    sites: usize,
}

impl NonHermitianOperator {
    /// Wrap an arbitrary square matrix, detecting structure by exact
    /// comparison (the builders produce exact zeros, so no tolerance is
    /// needed; externally computed matrices with rounding dirt fall back to
    /// the general path).
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        if r == 0 || !r.is_power_of_two() {
            return Err(Error::Linalg(format!("dimension {r} is not a power of two")));
        }
        let sites = r.trailing_zeros() as usize;
        let structure = detect_structure(&matrix);
        Ok(Self { matrix, structure, sites })
    }

    pub(crate) fn with_structure(matrix: CMatrix, structure: Structure, sites: usize) -> Self {
        Self { matrix, structure, sites }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// The measurement strength implied by the structure metadata, when known
    /// (`shift = γL`; Hermitian means `γ = 0`).
    pub fn gamma_hint(&self) -> Option<f64> {
        match self.structure {
            Structure::RealSymmetric | Structure::Hermitian => Some(0.0),
            Structure::RealPlusShift { shift } => Some(shift / self.sites as f64),
            Structure::General => None,
        }
    }

    /// Hermitian part `(H + H†)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        let dag = self.matrix.t().mapv(|z| z.conj());
        (&self.matrix + &dag).mapv(|z| z * 0.5)
    }

    /// Anti-Hermitian part `(H - H†)/2` (equal to `iγ Σ_i (1 + σ^y_i)` for
    /// the chain).
    pub fn antihermitian_part(&self) -> CMatrix {
        let dag = self.matrix.t().mapv(|z| z.conj());
        (&self.matrix - &dag).mapv(|z| z * 0.5)
    }

    /// The real matrix `R = H - i·shift·I` when the structure admits it.
    pub(crate) fn real_representation(&self) -> Option<(RMatrix, f64)> {
        match self.structure {
            Structure::RealSymmetric => Some((self.matrix.mapv(|z| z.re), 0.0)),
            Structure::RealPlusShift { shift } => {
                let n = self.dim();
                let mut r = Array2::zeros((n, n));
                for i in 0..n {
                    for j in 0..n {
                        r[[i, j]] = self.matrix[[i, j]].re;
                    }
                }
                Some((r, shift))
            }
            _ => None,
        }
    }
}

fn detect_structure(m: &CMatrix) -> Structure {
    let n = m.nrows();
    let shift = m[[0, 0]].im;
    let mut real_shifted = true;
    let mut real = true;
    for i in 0..n {
        for j in 0..n {
            let im = m[[i, j]].im;
            if i == j {
                if im != shift {
                    real_shifted = false;
                }
            } else if im != 0.0 {
                real_shifted = false;
            }
            if im != 0.0 {
                real = false;
            }
            if !real_shifted && !real {
                break;
            }
        }
    }
    let hermitian = {
        let mut h = true;
        'outer: for i in 0..n {
            for j in i..n {
                if m[[i, j]] != m[[j, i]].conj() {
                    h = false;
                    break 'outer;
                }
            }
        }
        h
    };
    if real && hermitian {
        Structure::RealSymmetric
    } else if hermitian {
        Structure::Hermitian
    } else if real_shifted {
        Structure::RealPlusShift { shift }
    } else {
        Structure::General
    }
}

/// Build the two-level Hamiltonian `[[ib, 1+b], [1-b, ib]]`.
pub fn build_tls(p: &TlsParameters) -> NonHermitianOperator {
    let b = p.b;
    let m = ndarray::arr2(&[
        [C64::new(0.0, b), C64::new(1.0 + b, 0.0)],
        [C64::new(1.0 - b, 0.0), C64::new(0.0, b)],
    ]);
    let structure = if b == 0.0 {
        Structure::RealSymmetric
    } else {
        Structure::RealPlusShift { shift: b }
    };
    NonHermitianOperator::with_structure(m, structure, 1)
}

/// Draw the longitudinal fields `h_i` i.i.d. uniform on `[h₀-ε, h₀+ε]`,
/// deterministically from `p.seed`. `ε = 0` returns the clean model.
pub fn sample_fields(p: &ChainParameters) -> Vec<f64> {
    let mut rng = realization_rng(p.seed);
    draw_fields(p, &mut rng)
}

/// One disorder realization: fields and per-bond couplings, drawn in a fixed
/// order (fields first) from a single seeded stream.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    pub fields: Vec<f64>,
    pub couplings: Vec<f64>,
}

impl DisorderRealization {
    pub fn sample(p: &ChainParameters) -> Self {
        let mut rng = realization_rng(p.seed);
        let fields = draw_fields(p, &mut rng);
        let couplings = draw_couplings(p, &mut rng);
        Self { fields, couplings }
    }
}

fn realization_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn draw_fields(p: &ChainParameters, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if p.epsilon == 0.0 {
        return vec![p.h0; p.sites];
    }
    let dist = Uniform::new_inclusive(p.h0 - p.epsilon, p.h0 + p.epsilon);
    (0..p.sites).map(|_| dist.sample(rng)).collect()
}

fn draw_couplings(p: &ChainParameters, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let bonds = bond_count(p.sites, p.boundary);
    if p.coupling_disorder == 0.0 {
        return vec![p.j; bonds];
    }
    let dist = Uniform::new_inclusive(1.0 - p.coupling_disorder, 1.0 + p.coupling_disorder);
    (0..bonds).map(|_| p.j * dist.sample(rng)).collect()
}

/// Build the chain Hamiltonian for the given disorder realization.
///
/// The matrix is assembled in place: diagonal terms
/// `Σ h_i σ^z_i + Σ J_i σ^z σ^z + iγL`, and for each site the flip amplitude
/// `g ∓ γ` (`g σ^x + iγ σ^y` acting on up/down).
pub fn build_chain(
    p: &ChainParameters,
    fields: &[f64],
    couplings: &[f64],
) -> Result<NonHermitianOperator> {
    p.check_size()?;
    if fields.len() != p.sites {
        return Err(Error::FieldCountMismatch { got: fields.len(), expected: p.sites });
    }
    let bonds = bond_count(p.sites, p.boundary);
    if couplings.len() != bonds {
        return Err(Error::CouplingCountMismatch { got: couplings.len(), expected: bonds });
    }
    let l = p.sites;
    let d = dim(l);
    let mut m: CMatrix = Array2::zeros((d, d));
    let shift = p.gamma * l as f64;

    for n in 0..d {
        let mut diag = 0.0;
        for (i, &h) in fields.iter().enumerate() {
            diag += h * z_sign(n, i, l);
        }
        for (bond, &j) in couplings.iter().enumerate() {
            diag += j * z_sign(n, bond, l) * z_sign(n, (bond + 1) % l, l);
        }
        m[[n, n]] = C64::new(diag, shift);
        for i in 0..l {
            let mask = 1usize << (l - 1 - i);
            // g σ^x + iγ σ^y: spin-up columns flip with amplitude g - γ,
            // spin-down columns with g + γ.
            let amp = if n & mask == 0 { p.g - p.gamma } else { p.g + p.gamma };
            m[[n ^ mask, n]] += C64::new(amp, 0.0);
        }
    }

    let structure = if p.gamma == 0.0 {
        Structure::RealSymmetric
    } else {
        Structure::RealPlusShift { shift }
    };
    Ok(NonHermitianOperator::with_structure(m, structure, l))
}

/// Convenience: sample the disorder for `p` and build the chain.
pub fn build_chain_sampled(p: &ChainParameters) -> Result<(NonHermitianOperator, DisorderRealization)> {
    let real = DisorderRealization::sample(p);
    let op = build_chain(p, &real.fields, &real.couplings)?;
    Ok((op, real))
}

/// All `2^L` classical Ising energies `Σ_i h_i s_i + Σ_i J_i s_i s_{i+1}`
/// with `s_i = ±1`, sorted ascending. This is the solvable-line oracle: at
/// `γ = 1` the chain Hamiltonian is upper triangular and its eigenvalues are
/// `{E_s + iγL}` over classical configurations `s`.
pub fn classical_ising_spectrum_disordered(
    fields: &[f64],
    couplings: &[f64],
    boundary: Boundary,
) -> Result<Vec<f64>> {
    let l = fields.len();
    if l == 0 {
        return Err(Error::EmptyRegister);
    }
    if l > 24 {
        return Err(Error::DimensionOverflow { sites: l, max: 24 });
    }
    let bonds = bond_count(l, boundary);
    if couplings.len() != bonds {
        return Err(Error::CouplingCountMismatch { got: couplings.len(), expected: bonds });
    }
    let mut energies: Vec<f64> = (0..dim(l))
        .map(|n| {
            let mut e = 0.0;
            for (i, &h) in fields.iter().enumerate() {
                e += h * z_sign(n, i, l);
            }
            for (bond, &j) in couplings.iter().enumerate() {
                e += j * z_sign(n, bond, l) * z_sign(n, (bond + 1) % l, l);
            }
            e
        })
        .collect();
    energies.sort_by(f64::total_cmp);
    Ok(energies)
}

/// Uniform-coupling version of [`classical_ising_spectrum_disordered`].
pub fn classical_ising_spectrum(fields: &[f64], j: f64, boundary: Boundary) -> Result<Vec<f64>> {
    let bonds = bond_count(fields.len(), boundary);
    classical_ising_spectrum_disordered(fields, &vec![j; bonds], boundary)
}
