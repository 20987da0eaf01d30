//! Non-Hermitian eigendecomposition and spectrum-derived diagnostics:
//! phase classification, purification gap, critical-γ bisection, level
//! statistics, effective dimension, and eigenstate entanglement profiles.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, EigVals, Eigh, Inverse, JobSvd, SVDDC, UPLO};

use crate::error::{Error, Result};
use crate::hamiltonians::{
    build_chain, ChainParameters, DisorderRealization, NonHermitianOperator, Structure,
};
use crate::linalg::{renyi2_of_amplitudes, spectral_norm_bound};
use crate::{C64, CMatrix, RMatrix};

/// Eigenpairs above this conditioning are flagged; the propagator falls back
/// to the direct matrix exponential well before this point.
pub const ILL_CONDITION_THRESHOLD: f64 = 1e10;

/// Spacings closer than this are merged before level-statistics ratios are
/// formed (exact degeneracies in the clean model come from spatial symmetry).
pub const DEGENERACY_MERGE_TOL: f64 = 1e-12;

/// Spectral phase of the non-Hermitian Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// PT-unbroken: all decay rates equal; a mixed state stays mixed.
    Mixed,
    /// PT-broken: decay rates split; any state purifies onto the dominant
    /// eigenvector.
    Pure,
}

/// Full right-eigendecomposition of a non-Hermitian operator, with
/// conditioning diagnostics.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Eigenvalues sorted by (Im descending, Re ascending).
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors as columns, in eigenvalue order.
    pub p: CMatrix,
    /// Inverse of `p`.
    pub p_inv: CMatrix,
    /// Singular values of `p`, descending.
    pub singular_values: Vec<f64>,
    /// `max_k ‖H p_k - λ_k p_k‖₂`.
    pub residual: f64,
    /// Upper bound on `‖H‖₂` used to scale the residual check.
    pub matrix_norm: f64,
    /// `s_max / s_min` of `p`.
    pub condition: f64,
    /// `condition > 1e10`.
    pub ill_conditioned: bool,
    /// Number of sites of the underlying register.
    pub sites: usize,
    /// Measurement strength when the operator metadata knows it.
    pub gamma_hint: Option<f64>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Scale-aware default tolerance for the phase classification:
    /// `max(1e-9, 1e-7·|γ|·L)`, with `|γ|L` estimated from the mean imaginary
    /// part when the construction metadata does not carry γ.
    pub fn default_pt_tol(&self) -> f64 {
        let scale = match self.gamma_hint {
            Some(g) => g.abs() * self.sites as f64,
            None => {
                let n = self.dim().max(1) as f64;
                self.eigenvalues.iter().map(|l| l.im).sum::<f64>().abs() / n
            }
        };
        (1e-7 * scale).max(1e-9)
    }

    /// The eigenvalue with the largest imaginary part (the slowest-decaying
    /// mode under the `+iγ` sign convention) and its eigenvector.
    pub fn dominant(&self) -> (C64, Array1<C64>) {
        (self.eigenvalues[0], self.p.column(0).to_owned())
    }
}

/// Sort order: imaginary part descending, then real part ascending.
fn sort_indices(eigs: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..eigs.len()).collect();
    idx.sort_by(|&a, &b| {
        eigs[b]
            .im
            .total_cmp(&eigs[a].im)
            .then(eigs[a].re.total_cmp(&eigs[b].re))
    });
    idx
}

/// Full eigendecomposition of `h`, dispatching on the structure metadata:
/// real-symmetric and Hermitian operators use the symmetric solver (unitary
/// eigenbasis, condition 1 by construction); operators that are real up to a
/// uniform imaginary shift use the real general solver on `H - i·shift·I`;
/// everything else goes through the complex general solver.
pub fn decompose(h: &NonHermitianOperator) -> Result<SpectralData> {
    let n = h.dim();
    let matrix_norm = spectral_norm_bound(h.matrix());
    match h.structure() {
        Structure::RealSymmetric => {
            let real = h.matrix().mapv(|z| z.re);
            let (vals, vecs) = real
                .eigh(UPLO::Lower)
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            let eigs: Vec<C64> = vals.iter().map(|&v| C64::new(v, 0.0)).collect();
            let order = sort_indices(&eigs);
            let eigenvalues: Vec<C64> = order.iter().map(|&k| eigs[k]).collect();
            let p_real = permute_columns_real(&vecs, &order);
            let p = p_real.mapv(|v| C64::new(v, 0.0));
            let p_inv = p_real.t().mapv(|v| C64::new(v, 0.0));
            let residual = residual_real(&real, &p_real, &vals_from(&eigenvalues));
            Ok(SpectralData {
                eigenvalues,
                p,
                p_inv,
                singular_values: vec![1.0; n],
                residual,
                matrix_norm,
                condition: 1.0,
                ill_conditioned: false,
                sites: h.sites(),
                gamma_hint: h.gamma_hint(),
            })
        }
        Structure::Hermitian => {
            let (vals, vecs) = h
                .matrix()
                .eigh(UPLO::Lower)
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            let eigs: Vec<C64> = vals.iter().map(|&v| C64::new(v, 0.0)).collect();
            let order = sort_indices(&eigs);
            let eigenvalues: Vec<C64> = order.iter().map(|&k| eigs[k]).collect();
            let p = permute_columns(&vecs, &order);
            let p_inv = p.t().mapv(|z| z.conj());
            let residual = residual_complex(h.matrix(), &p, &eigenvalues);
            Ok(SpectralData {
                eigenvalues,
                p,
                p_inv,
                singular_values: vec![1.0; n],
                residual,
                matrix_norm,
                condition: 1.0,
                ill_conditioned: false,
                sites: h.sites(),
                gamma_hint: h.gamma_hint(),
            })
        }
        Structure::RealPlusShift { shift } => {
            let (real, _) = h.real_representation().expect("structure guarantees real form");
            let (vals, vecs) = real
                .eig()
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            let all_real = vals.iter().all(|l| l.im == 0.0);
            if all_real {
                // Entirely real spectrum: stay in real arithmetic for the
                // inverse, SVD and residual, then shift by i·γL at the end.
                let real_vecs = vecs.mapv(|z| z.re);
                let eigs: Vec<C64> = vals.to_vec();
                let order = sort_indices(&eigs);
                let eigenvalues_r: Vec<f64> = order.iter().map(|&k| eigs[k].re).collect();
                let mut p_real = permute_columns_real(&real_vecs, &order);
                normalize_columns_real(&mut p_real);
                let p_inv_real = p_real
                    .inv()
                    .map_err(|e| Error::Linalg(format!("eigenvector inverse: {e}")))?;
                let singular_values = singular_values_real(&p_real)?;
                let residual = residual_real(
                    &real,
                    &p_real,
                    &Array1::from(eigenvalues_r.clone()),
                );
                let condition = cond_from_singular(&singular_values);
                Ok(SpectralData {
                    eigenvalues: eigenvalues_r
                        .iter()
                        .map(|&re| C64::new(re, shift))
                        .collect(),
                    p: p_real.mapv(|v| C64::new(v, 0.0)),
                    p_inv: p_inv_real.mapv(|v| C64::new(v, 0.0)),
                    singular_values,
                    residual,
                    matrix_norm,
                    condition,
                    ill_conditioned: condition > ILL_CONDITION_THRESHOLD,
                    sites: h.sites(),
                    gamma_hint: h.gamma_hint(),
                })
            } else {
                let eigs: Vec<C64> = vals.iter().map(|l| l + C64::new(0.0, shift)).collect();
                finalize_general(h, eigs, vecs, matrix_norm)
            }
        }
        Structure::General => {
            let (vals, vecs) = h
                .matrix()
                .eig()
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            finalize_general(h, vals.to_vec(), vecs, matrix_norm)
        }
    }
}

/// Eigenvalues only, same dispatch and sort order as [`decompose`] but
/// without eigenvectors, inverse or singular values. This is what the scan
/// uses for gap and level-statistics observables.
pub fn eigenvalues_only(h: &NonHermitianOperator) -> Result<Vec<C64>> {
    let n = h.dim();
    let eigs: Vec<C64> = match h.structure() {
        Structure::RealSymmetric => {
            let real = h.matrix().mapv(|z| z.re);
            let vals = real
                .eigvalsh(UPLO::Lower)
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            vals.iter().map(|&v| C64::new(v, 0.0)).collect()
        }
        Structure::Hermitian => {
            let vals = h
                .matrix()
                .eigvalsh(UPLO::Lower)
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            vals.iter().map(|&v| C64::new(v, 0.0)).collect()
        }
        Structure::RealPlusShift { shift } => {
            let (real, _) = h.real_representation().expect("structure guarantees real form");
            let vals = real
                .eigvals()
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            vals.iter().map(|l| l + C64::new(0.0, shift)).collect()
        }
        Structure::General => {
            let vals = h
                .matrix()
                .eigvals()
                .map_err(|e| Error::EigFailure { dim: n, detail: e.to_string() })?;
            vals.to_vec()
        }
    };
    let order = sort_indices(&eigs);
    Ok(order.iter().map(|&k| eigs[k]).collect())
}

fn finalize_general(
    h: &NonHermitianOperator,
    eigs: Vec<C64>,
    vecs: CMatrix,
    matrix_norm: f64,
) -> Result<SpectralData> {
    let order = sort_indices(&eigs);
    let eigenvalues: Vec<C64> = order.iter().map(|&k| eigs[k]).collect();
    let mut p = permute_columns(&vecs, &order);
    normalize_columns(&mut p);
    let p_inv = p
        .inv()
        .map_err(|e| Error::Linalg(format!("eigenvector inverse: {e}")))?;
    let singular_values = singular_values_complex(&p)?;
    let residual = residual_complex(h.matrix(), &p, &eigenvalues);
    let condition = cond_from_singular(&singular_values);
    Ok(SpectralData {
        eigenvalues,
        p,
        p_inv,
        singular_values,
        residual,
        matrix_norm,
        condition,
        ill_conditioned: condition > ILL_CONDITION_THRESHOLD,
        sites: h.sites(),
        gamma_hint: h.gamma_hint(),
    })
}

fn vals_from(eigs: &[C64]) -> Array1<f64> {
    Array1::from(eigs.iter().map(|l| l.re).collect::<Vec<_>>())
}

fn permute_columns(m: &CMatrix, order: &[usize]) -> CMatrix {
    let (r, _) = m.dim();
    let mut out = Array2::zeros((r, order.len()));
    for (new, &old) in order.iter().enumerate() {
        out.column_mut(new).assign(&m.column(old));
    }
    out
}

fn permute_columns_real(m: &RMatrix, order: &[usize]) -> RMatrix {
    let (r, _) = m.dim();
    let mut out = Array2::zeros((r, order.len()));
    for (new, &old) in order.iter().enumerate() {
        out.column_mut(new).assign(&m.column(old));
    }
    out
}

fn normalize_columns(p: &mut CMatrix) {
    for mut col in p.columns_mut() {
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            col.mapv_inplace(|z| z / norm);
        }
    }
}

fn normalize_columns_real(p: &mut RMatrix) {
    for mut col in p.columns_mut() {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            col.mapv_inplace(|v| v / norm);
        }
    }
}

fn singular_values_complex(p: &CMatrix) -> Result<Vec<f64>> {
    let (_, s, _) = p
        .svddc(JobSvd::None)
        .map_err(|e| Error::Linalg(format!("svd of eigenvector matrix: {e}")))?;
    Ok(s.to_vec())
}

fn singular_values_real(p: &RMatrix) -> Result<Vec<f64>> {
    let (_, s, _) = p
        .svddc(JobSvd::None)
        .map_err(|e| Error::Linalg(format!("svd of eigenvector matrix: {e}")))?;
    Ok(s.to_vec())
}

fn cond_from_singular(s: &[f64]) -> f64 {
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if min > 0.0 => max / min,
        _ => f64::INFINITY,
    }
}

/// `max_k ‖H p_k - λ_k p_k‖₂` for a real matrix, real eigenvectors, real
/// eigenvalues (the shift `i·c·I` cancels between both sides).
fn residual_real(h: &RMatrix, p: &RMatrix, re_eigs: &Array1<f64>) -> f64 {
    let hp = h.dot(p);
    let mut worst = 0.0f64;
    for (k, &lam) in re_eigs.iter().enumerate() {
        let mut acc = 0.0;
        for i in 0..h.nrows() {
            let d = hp[[i, k]] - lam * p[[i, k]];
            acc += d * d;
        }
        worst = worst.max(acc.sqrt());
    }
    worst
}

fn residual_complex(h: &CMatrix, p: &CMatrix, eigs: &[C64]) -> f64 {
    let hp = h.dot(p);
    let mut worst = 0.0f64;
    for (k, &lam) in eigs.iter().enumerate() {
        let mut acc = 0.0;
        for i in 0..h.nrows() {
            let d = hp[[i, k]] - lam * p[[i, k]];
            acc += d.norm_sqr();
        }
        worst = worst.max(acc.sqrt());
    }
    worst
}

/// Classify the spectrum: `Mixed` iff the spread of imaginary parts is below
/// `tol`.
pub fn classify_pt(s: &SpectralData, tol: f64) -> Phase {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for l in &s.eigenvalues {
        lo = lo.min(l.im);
        hi = hi.max(l.im);
    }
    if hi - lo < tol {
        Phase::Mixed
    } else {
        Phase::Pure
    }
}

/// Difference between the two largest imaginary parts: zero (within
/// tolerance) in the mixed phase, and the asymptotic purification rate of the
/// slowest-vs-next mode split in the pure phase.
pub fn purification_gap(s: &SpectralData) -> f64 {
    gap_of(&s.eigenvalues)
}

/// [`purification_gap`] on a bare sorted spectrum.
pub fn gap_of(eigenvalues: &[C64]) -> f64 {
    if eigenvalues.len() < 2 {
        return 0.0;
    }
    eigenvalues[0].im - eigenvalues[1].im
}

/// Gap threshold above which a spectrum is declared pure; absolute floors
/// alone fail at small γ.
pub fn gap_threshold(gamma: f64) -> f64 {
    (1e-4 * gamma.abs()).max(1e-6)
}

/// Result of the critical-γ bisection.
#[derive(Debug, Clone)]
pub struct GammaCritical {
    /// Midpoint of the final bracket.
    pub gamma_c: f64,
    /// Final bracket (mixed side, pure side).
    pub bracket: (f64, f64),
    /// The two slowest eigenvalues just on the pure side: the pair that split
    /// at the exceptional point, for level-dynamics plots.
    pub colliding_pair: (C64, C64),
    pub iterations: usize,
}

/// Bisect for the exceptional point of the chain between `gamma_lo` (must
/// classify mixed) and `gamma_hi` (must classify pure). The disorder
/// realization is held fixed across γ. Eigenvalues-only solves are used, so
/// this is cheap relative to a full decomposition.
pub fn find_gamma_c(
    p: &ChainParameters,
    gamma_lo: f64,
    gamma_hi: f64,
    tol: f64,
) -> Result<GammaCritical> {
    let realization = DisorderRealization::sample(p);
    let spectrum_at = |gamma: f64| -> Result<Vec<C64>> {
        let mut q = p.clone();
        q.gamma = gamma;
        let h = build_chain(&q, &realization.fields, &realization.couplings)?;
        eigenvalues_only(&h)
    };
    let is_pure = |eigs: &[C64], gamma: f64| gap_of(eigs) > gap_threshold(gamma);

    let lo_eigs = spectrum_at(gamma_lo)?;
    if is_pure(&lo_eigs, gamma_lo) {
        return Err(Error::InvalidBracket("pure"));
    }
    let hi_eigs = spectrum_at(gamma_hi)?;
    if !is_pure(&hi_eigs, gamma_hi) {
        return Err(Error::InvalidBracket("mixed"));
    }

    let mut lo = gamma_lo;
    let mut hi = gamma_hi;
    let mut pair = (hi_eigs[0], hi_eigs[1]);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let eigs = spectrum_at(mid)?;
        if is_pure(&eigs, mid) {
            hi = mid;
            pair = (eigs[0], eigs[1]);
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > 200 {
            break;
        }
    }
    Ok(GammaCritical {
        gamma_c: 0.5 * (lo + hi),
        bracket: (lo, hi),
        colliding_pair: pair,
        iterations,
    })
}

/// Adjacent-gap ratio statistics `r = min(s_i, s_{i+1}) / max(s_i, s_{i+1})`.
#[derive(Debug, Clone)]
pub struct LevelStatistics {
    pub r_values: Vec<f64>,
    pub r_mean: f64,
    /// Counts over 50 uniform bins of `[0, 1]`.
    pub histogram: Vec<u64>,
}

pub const R_HISTOGRAM_BINS: usize = 50;

impl LevelStatistics {
    /// Build from raw levels (positions on the real line). Levels closer than
    /// [`DEGENERACY_MERGE_TOL`] are merged before ratios are formed.
    pub fn from_levels(levels: &[f64]) -> Result<Self> {
        let mut sorted = levels.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut spacings = Vec::with_capacity(sorted.len().saturating_sub(1));
        for w in sorted.windows(2) {
            let s = w[1] - w[0];
            if s >= DEGENERACY_MERGE_TOL {
                spacings.push(s);
            }
        }
        if spacings.len() < 2 {
            return Err(Error::TooFewPoints { need: 3, got: spacings.len() + 1 });
        }
        let r_values: Vec<f64> = spacings
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                if a <= b { a / b } else { b / a }
            })
            .collect();
        let r_mean = r_values.iter().sum::<f64>() / r_values.len() as f64;
        let mut histogram = vec![0u64; R_HISTOGRAM_BINS];
        for &r in &r_values {
            let bin = ((r * R_HISTOGRAM_BINS as f64) as usize).min(R_HISTOGRAM_BINS - 1);
            histogram[bin] += 1;
        }
        Ok(Self { r_values, r_mean, histogram })
    }
}

/// Level statistics of a mixed-phase spectrum: ratios of adjacent spacings of
/// the real parts (eigenvalue differences are purely real in the mixed
/// phase).
pub fn r_statistics(s: &SpectralData) -> Result<LevelStatistics> {
    let levels: Vec<f64> = s.eigenvalues.iter().map(|l| l.re).collect();
    LevelStatistics::from_levels(&levels)
}

/// Participation ratio of the squared singular values of `P`:
/// `D_eff = (Σ s²)² / Σ s⁴ ∈ [1, 2^L]`. Exactly `2^L` for unitary `P`, and
/// invariant under a unitary change of the reference basis.
pub fn effective_dimension(s: &SpectralData) -> f64 {
    participation_squared(&s.singular_values)
}

pub(crate) fn participation_squared(singular: &[f64]) -> f64 {
    let sum2: f64 = singular.iter().map(|v| v * v).sum();
    let sum4: f64 = singular.iter().map(|v| v.powi(4)).sum();
    if sum4 == 0.0 {
        return 0.0;
    }
    sum2 * sum2 / sum4
}

/// Alternative weighting for comparison: participation ratio of the
/// normalized singular values themselves, `(Σ s)² / Σ s²`.
pub fn effective_dimension_linear_weights(s: &SpectralData) -> f64 {
    let sum1: f64 = s.singular_values.iter().sum();
    let sum2: f64 = s.singular_values.iter().map(|v| v * v).sum();
    if sum2 == 0.0 {
        return 0.0;
    }
    sum1 * sum1 / sum2
}

/// Least-squares slope `α` of `log₂ D_eff` against `L`.
pub fn fit_alpha(d_eff_by_size: &[(usize, f64)]) -> Result<f64> {
    if d_eff_by_size.len() < 3 {
        return Err(Error::TooFewPoints { need: 3, got: d_eff_by_size.len() });
    }
    let pts: Vec<(f64, f64)> = d_eff_by_size
        .iter()
        .map(|&(l, d)| (l as f64, d.log2()))
        .collect();
    crate::linalg::ls_slope(&pts)
}

/// Per-eigenvector half-cut Rényi-2 entropies, paired with the real part of
/// the eigenvalue and sorted along the spectrum.
pub fn eigenstate_entropy_profile(s: &SpectralData, cut: usize) -> Result<Vec<(f64, f64)>> {
    let sites = s.sites;
    if cut == 0 || cut >= sites {
        return Err(Error::CutOutOfRange { cut, sites });
    }
    let mut profile: Vec<(f64, f64)> = Vec::with_capacity(s.dim());
    for k in 0..s.dim() {
        let s2 = renyi2_of_amplitudes(s.p.column(k), sites, cut)?;
        profile.push((s.eigenvalues[k].re, s2));
    }
    profile.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_tls, TlsParameters};
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;

    fn tls_spectral(b: f64) -> SpectralData {
        decompose(&build_tls(&TlsParameters::new(b))).unwrap()
    }

    #[test]
    fn tls_hermitian_decomposition() {
        let s = tls_spectral(0.0);
        let mut re: Vec<f64> = s.eigenvalues.iter().map(|l| l.re).collect();
        re.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(re[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(re[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.condition, 1.0, epsilon = 1e-10);
        assert!(s.residual <= 1e-12);
    }

    #[test]
    fn tls_mixed_phase_eigenvalues_and_overlap() {
        let s = tls_spectral(0.5);
        let split = 0.75f64.sqrt();
        assert_abs_diff_eq!(s.eigenvalues[0].im, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalues[1].im, 0.5, epsilon = 1e-12);
        let mut re: Vec<f64> = s.eigenvalues.iter().map(|l| l.re).collect();
        re.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(re[0], -split, epsilon = 1e-12);
        assert_abs_diff_eq!(re[1], split, epsilon = 1e-12);
        // Eigenvector overlap is |b|.
        let overlap: C64 = s
            .p
            .column(0)
            .iter()
            .zip(s.p.column(1).iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert_abs_diff_eq!(overlap.norm(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn tls_broken_phase_pure_imaginary() {
        let s = tls_spectral(2.0);
        let r3 = 3f64.sqrt();
        assert_abs_diff_eq!(s.eigenvalues[0].im, 2.0 + r3, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalues[1].im, 2.0 - r3, epsilon = 1e-12);
        assert!(s.eigenvalues[0].re.abs() < 1e-12);
        assert!(s.eigenvalues[1].re.abs() < 1e-12);
    }

    #[test]
    fn classification() {
        let s = tls_spectral(0.5);
        assert_eq!(classify_pt(&s, s.default_pt_tol()), Phase::Mixed);
        let s = tls_spectral(2.0);
        assert_eq!(classify_pt(&s, s.default_pt_tol()), Phase::Pure);
    }

    #[test]
    fn gap_values() {
        assert_abs_diff_eq!(purification_gap(&tls_spectral(2.0)), 2.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert!(purification_gap(&tls_spectral(0.5)) < 1e-12);
        // Square-root opening at the exceptional point.
        let delta = 1e-4;
        let gap = purification_gap(&tls_spectral(1.0 + delta));
        let expect = 2.0 * (2.0 * delta).sqrt();
        assert_abs_diff_eq!(gap / expect, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn tls_effective_dimension() {
        // 2/(1+b²) from the closed-form SVD of a 2x2 matrix with unit columns
        // and overlap b.
        let s = tls_spectral(0.5);
        assert_abs_diff_eq!(effective_dimension(&s), 1.6, epsilon = 1e-9);
        // Hermitian limit: full rank.
        let s = tls_spectral(0.0);
        assert_abs_diff_eq!(effective_dimension(&s), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn rank_collapse_limit() {
        assert_abs_diff_eq!(participation_squared(&[1.0, 1e-9]), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn residual_and_inverse_quality() {
        let s = tls_spectral(0.7);
        assert!(s.residual <= 1e-8 * s.matrix_norm);
        let id = s.p.dot(&s.p_inv);
        let err = id
            .indexed_iter()
            .map(|((i, j), z)| {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                (z - expect).norm()
            })
            .fold(0.0, f64::max);
        assert!(err <= 1e-8 * s.condition);
    }

    #[test]
    fn general_path_agrees_with_real_path() {
        // Force the general complex solver with an explicit matrix that has
        // no detectable structure (perturb one imaginary entry), and compare
        // against the structured path on the unperturbed operator.
        let op = build_tls(&TlsParameters::new(0.3));
        let structured = decompose(&op).unwrap();
        let m = op.matrix().clone();
        let general = finalize_general(
            &op,
            structured.eigenvalues.clone(),
            {
                use ndarray_linalg::Eig;
                m.eig().unwrap().1
            },
            spectral_norm_bound(&m),
        )
        .unwrap();
        for (a, b) in structured.eigenvalues.iter().zip(&general.eigenvalues) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-10);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-10);
        }
        for (a, b) in structured.singular_values.iter().zip(&general.singular_values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn find_gamma_c_tls_limit() {
        // L = 1, h = 0, J = 0: exceptional point at γ = 1.
        let p = ChainParameters::clean(1, 0.0, 0.0, 0.0);
        let gc = find_gamma_c(&p, 0.5, 1.5, 1e-6).unwrap();
        assert_abs_diff_eq!(gc.gamma_c, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn find_gamma_c_single_spin_with_field() {
        // L = 1, h = 1.25: direct 2x2 diagonalization puts the exceptional
        // point at γ = √(g² + h²).
        let p = ChainParameters::clean(1, 1.25, 0.0, 0.0);
        let expect = (1.0 + 1.25 * 1.25f64).sqrt();
        let gc = find_gamma_c(&p, 0.5, 2.5, 1e-6).unwrap();
        assert_abs_diff_eq!(gc.gamma_c, expect, epsilon = 1e-4);
    }

    #[test]
    fn bisection_bracket_shrinks() {
        let p = ChainParameters::clean(1, 0.0, 0.0, 0.0);
        let gc = find_gamma_c(&p, 0.0, 2.0, 1e-3).unwrap();
        let width = gc.bracket.1 - gc.bracket.0;
        assert!(width <= 1e-3);
        assert!(width >= 2.0 / 2f64.powi(gc.iterations as i32 + 1));
    }

    #[test]
    fn invalid_bracket() {
        let p = ChainParameters::clean(1, 0.0, 0.0, 0.0);
        assert!(matches!(find_gamma_c(&p, 0.1, 0.5, 1e-3), Err(Error::InvalidBracket("mixed"))));
        assert!(matches!(find_gamma_c(&p, 1.5, 1.9, 1e-3), Err(Error::InvalidBracket("pure"))));
    }

    #[test]
    fn r_of_uniform_ladder() {
        let levels: Vec<f64> = (0..100).map(|k| k as f64).collect();
        let stats = LevelStatistics::from_levels(&levels).unwrap();
        assert_abs_diff_eq!(stats.r_mean, 1.0, epsilon = 1e-12);
        assert!(stats.r_values.iter().all(|&r| (r - 1.0).abs() < 1e-12));
    }

    #[test]
    fn r_merges_degeneracies() {
        // A doubly-degenerate ladder would give 0/0 ratios without merging.
        let mut levels = Vec::new();
        for k in 0..50 {
            levels.push(k as f64);
            levels.push(k as f64 + 1e-14);
        }
        let stats = LevelStatistics::from_levels(&levels).unwrap();
        assert_abs_diff_eq!(stats.r_mean, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn r_values_in_unit_interval_and_affine_invariant() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        use rand::SeedableRng;
        let levels: Vec<f64> = (0..500).map(|_| rng.gen_range(0.0..10.0)).collect();
        let a = LevelStatistics::from_levels(&levels).unwrap();
        assert!(a.r_values.iter().all(|&r| (0.0..=1.0).contains(&r)));
        let mapped: Vec<f64> = levels.iter().map(|&x| 3.5 * x - 42.0).collect();
        let b = LevelStatistics::from_levels(&mapped).unwrap();
        assert_abs_diff_eq!(a.r_mean, b.r_mean, epsilon = 1e-12);
    }

    #[test]
    fn fit_alpha_recovery() {
        let exact: Vec<(usize, f64)> = (4..=8).map(|l| (l, 2f64.powi(l as i32))).collect();
        assert_abs_diff_eq!(fit_alpha(&exact).unwrap(), 1.0, epsilon = 1e-12);
        let synth: Vec<(usize, f64)> = (4..=8).map(|l| (l, 2f64.powf(0.64 * l as f64))).collect();
        assert_abs_diff_eq!(fit_alpha(&synth).unwrap(), 0.64, epsilon = 1e-12);
        assert!(matches!(
            fit_alpha(&[(4, 16.0), (4, 14.0), (4, 15.0)]),
            Err(Error::DegenerateFit)
        ));
        assert!(matches!(fit_alpha(&[(4, 16.0)]), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn entropy_profile_of_product_eigenbasis() {
        // J = 0, γ = 0 with distinct fields: eigenvectors are products.
        let mut p = ChainParameters::clean(4, 1.25, 0.0, 0.0);
        p.epsilon = 0.125;
        p.seed = 9;
        let (h, _) = crate::hamiltonians::build_chain_sampled(&p).unwrap();
        let s = decompose(&h).unwrap();
        let profile = eigenstate_entropy_profile(&s, 2).unwrap();
        for (_, s2) in profile {
            assert!(s2.abs() < 1e-9, "product eigenstate with S2 = {s2}");
        }
    }

    #[test]
    fn d_eff_invariant_under_reference_unitary() {
        // Conjugating the operator by a unitary leaves the singular values of
        // the eigenvector matrix unchanged.
        let s = tls_spectral(0.6);
        let theta = 0.7f64;
        let u = arr2(&[
            [C64::new(theta.cos(), 0.0), C64::new(-theta.sin(), 0.1).unscale((1.0f64 + 0.01).sqrt())],
            [C64::new(theta.sin(), 0.1).unscale((1.0f64 + 0.01).sqrt()), C64::new(theta.cos(), 0.0)],
        ]);
        // Orthonormalize the second column against the first (Gram-Schmidt)
        // to get an exact unitary.
        let c0 = u.column(0).to_owned();
        let n0 = c0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let c0 = c0.mapv(|z| z / n0);
        let mut c1 = u.column(1).to_owned();
        let proj: C64 = c0.iter().zip(c1.iter()).map(|(a, b)| a.conj() * b).sum();
        for i in 0..2 {
            c1[i] -= proj * c0[i];
        }
        let n1 = c1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let c1 = c1.mapv(|z| z / n1);
        let mut uu: CMatrix = Array2::zeros((2, 2));
        uu.column_mut(0).assign(&c0);
        uu.column_mut(1).assign(&c1);

        let up = uu.dot(&s.p);
        let sv = singular_values_complex(&up).unwrap();
        let d_rot = participation_squared(&sv);
        assert_abs_diff_eq!(d_rot, effective_dimension(&s), epsilon = 1e-9);
    }
}
