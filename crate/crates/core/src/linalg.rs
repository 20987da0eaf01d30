//! Dense linear-algebra utilities: matrix exponential, operator norms, the
//! Rényi-2 kernel shared by states and eigenvector profiles, and BLAS thread
//! control for reproducible parallel scans.

use ndarray::{Array1, Array2, ArrayView1};
use ndarray_linalg::{Inverse, OperationNorm};

use crate::error::{Error, Result};
use crate::{C64, CMatrix};

extern "C" {
    fn openblas_set_num_threads(num_threads: std::os::raw::c_int);
}

/// Set the number of OpenBLAS threads. The scan driver pins this to 1 so that
/// cells parallelize over the worker pool and results do not depend on the
/// BLAS partitioning.
pub fn set_blas_threads(n: usize) {
    unsafe { openblas_set_num_threads(n.max(1) as std::os::raw::c_int) };
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Upper bound on the spectral norm: `√(‖A‖₁ ‖A‖∞)`.
pub fn spectral_norm_bound(m: &CMatrix) -> f64 {
    let one = m.opnorm_one().unwrap_or(f64::INFINITY);
    let inf = m.opnorm_inf().unwrap_or(f64::INFINITY);
    (one * inf).sqrt()
}

/// Matrix exponential by scaling-and-squaring with a Padé(13,13) approximant.
///
/// Coefficients and the scaling threshold follow the standard double-precision
/// tuning of the algorithm.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NotSquare { rows: n, cols: a.ncols() });
    }
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    if n == 1 {
        let mut out = Array2::zeros((1, 1));
        out[[0, 0]] = a[[0, 0]].exp();
        return Ok(out);
    }

    const THETA_13: f64 = 5.371920351148152;
    let norm = a.opnorm_one().map_err(|e| Error::Linalg(e.to_string()))?;
    if !norm.is_finite() {
        return Err(Error::Linalg("non-finite entries in expm input".into()));
    }
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(squarings as i32));
    let mut result = pade13(&scaled)?;
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}

// b-coefficients of the (13,13) Padé approximant to exp.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let eye: CMatrix = Array2::eye(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let c = |k: usize| C64::new(PADE13[k], 0.0);

    let u_inner = a6.mapv(|z| z * c(13)) + a4.mapv(|z| z * c(11)) + a2.mapv(|z| z * c(9));
    let u_poly = a6.dot(&u_inner)
        + a6.mapv(|z| z * c(7))
        + a4.mapv(|z| z * c(5))
        + a2.mapv(|z| z * c(3))
        + eye.mapv(|z| z * c(1));
    let u = a.dot(&u_poly);

    let v_inner = a6.mapv(|z| z * c(12)) + a4.mapv(|z| z * c(10)) + a2.mapv(|z| z * c(8));
    let v = a6.dot(&v_inner)
        + a6.mapv(|z| z * c(6))
        + a4.mapv(|z| z * c(4))
        + a2.mapv(|z| z * c(2))
        + eye.mapv(|z| z * c(0));

    let num = &v + &u;
    let den = &v - &u;
    let den_inv = den.inv().map_err(|e| Error::Linalg(format!("expm Padé solve: {e}")))?;
    Ok(den_inv.dot(&num))
}

/// Rényi-2 entropy (in bits) of the reduced state of `ψ` on sites
/// `[0, cut)`, with site 0 the most significant bit of the amplitude index.
///
/// Reshapes `ψ` into a `2^cut × 2^(L-cut)` matrix `M`; then
/// `Tr ρ_A² = Σ |M M†|²` and `S₂ = -log₂ Tr ρ_A²`.
pub fn renyi2_of_amplitudes(psi: ArrayView1<C64>, sites: usize, cut: usize) -> Result<f64> {
    if cut == 0 || cut >= sites {
        return Err(Error::CutOutOfRange { cut, sites });
    }
    let da = 1usize << cut;
    let db = 1usize << (sites - cut);
    if psi.len() != da * db {
        return Err(Error::Linalg(format!(
            "state length {} does not match {} sites",
            psi.len(),
            sites
        )));
    }
    // Work with the smaller subsystem; the pure-state Schmidt spectrum is the
    // same on both sides.
    let (rows, cols, transpose) = if da <= db { (da, db, false) } else { (db, da, true) };
    let mut rho: Array2<C64> = Array2::zeros((rows, rows));
    for i in 0..rows {
        for j in 0..=i {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..cols {
                let (ai, aj) = if transpose {
                    (k * rows + i, k * rows + j)
                } else {
                    (i * cols + k, j * cols + k)
                };
                acc += psi[ai] * psi[aj].conj();
            }
            rho[[i, j]] = acc;
            rho[[j, i]] = acc.conj();
        }
    }
    let tr_rho2: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    // Clamp: rounding can push Tr ρ² infinitesimally above 1.
    Ok(-tr_rho2.min(1.0).max(f64::MIN_POSITIVE).log2())
}

/// Purity `Tr(ρ²)/(Tr ρ)²` of a Hermitian matrix given without normalization.
pub fn purity_ratio(rho: &CMatrix) -> Result<f64> {
    let tr: C64 = rho.diag().iter().sum();
    let scale = max_abs(rho);
    if tr.norm() <= 1e-300 || (scale > 0.0 && tr.norm() < 1e-14 * scale * rho.nrows() as f64) {
        return Err(Error::ZeroTrace);
    }
    let tr2: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    Ok(tr2 / tr.norm_sqr())
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: points.len() });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

/// Complex column as an owned vector.
pub fn column(m: &CMatrix, k: usize) -> Array1<C64> {
    m.column(k).to_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::arr1;

    #[test]
    fn expm_zero_is_identity() {
        let z: CMatrix = Array2::zeros((4, 4));
        let e = expm(&z).unwrap();
        assert!(max_abs(&(&e - &Array2::eye(4))) < 1e-14);
    }

    #[test]
    fn expm_diagonal() {
        let mut a: CMatrix = Array2::zeros((2, 2));
        a[[0, 0]] = C64::new(1.0, 0.5);
        a[[1, 1]] = C64::new(-2.0, 0.0);
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - C64::new(1.0, 0.5).exp()).norm() < 1e-12);
        assert!((e[[1, 1]] - C64::new(-2.0, 0.0).exp()).norm() < 1e-12);
        assert!(e[[0, 1]].norm() < 1e-14);
    }

    #[test]
    fn expm_rotation() {
        // exp(-iθσ^x/2): rows [[cos, -i sin], [-i sin, cos]] at half-angle.
        let theta = std::f64::consts::PI / 3.0;
        let mut a: CMatrix = Array2::zeros((2, 2));
        a[[0, 1]] = C64::new(0.0, -theta / 2.0);
        a[[1, 0]] = C64::new(0.0, -theta / 2.0);
        let e = expm(&a).unwrap();
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        assert!((e[[0, 0]] - C64::new(c, 0.0)).norm() < 1e-12);
        assert!((e[[0, 1]] - C64::new(0.0, -s)).norm() < 1e-12);
    }

    #[test]
    fn expm_large_norm_scales() {
        let mut a: CMatrix = Array2::zeros((2, 2));
        a[[0, 0]] = C64::new(50.0, 0.0);
        a[[1, 1]] = C64::new(-50.0, 0.0);
        let e = expm(&a).unwrap();
        assert_abs_diff_eq!(e[[0, 0]].re / 50f64.exp(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn renyi2_product_and_bell() {
        // |00>: product state, S2 = 0.
        let psi = arr1(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        assert_abs_diff_eq!(renyi2_of_amplitudes(psi.view(), 2, 1).unwrap(), 0.0, epsilon = 1e-12);

        // Bell pair: S2 = 1 bit.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = arr1(&[C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)]);
        assert_abs_diff_eq!(renyi2_of_amplitudes(psi.view(), 2, 1).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn renyi2_ghz_any_cut() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![C64::new(0.0, 0.0); 16];
        v[0] = C64::new(r, 0.0);
        v[15] = C64::new(r, 0.0);
        let psi = arr1(&v);
        for cut in 1..4 {
            assert_abs_diff_eq!(renyi2_of_amplitudes(psi.view(), 4, cut).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn renyi2_cut_bounds() {
        let psi = arr1(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(
            renyi2_of_amplitudes(psi.view(), 1, 0),
            Err(Error::CutOutOfRange { .. })
        ));
    }

    #[test]
    fn purity_ratio_examples() {
        let mut rho: CMatrix = Array2::zeros((2, 2));
        rho[[0, 0]] = C64::new(0.75, 0.0);
        rho[[1, 1]] = C64::new(0.25, 0.0);
        assert_abs_diff_eq!(purity_ratio(&rho).unwrap(), 0.625, epsilon = 1e-15);

        // Scale invariance of the ratio form.
        let scaled = rho.mapv(|z| z * 7.3);
        assert_abs_diff_eq!(purity_ratio(&scaled).unwrap(), 0.625, epsilon = 1e-15);

        let zero: CMatrix = Array2::zeros((2, 2));
        assert!(matches!(purity_ratio(&zero), Err(Error::ZeroTrace)));
    }

    #[test]
    fn slope_recovery() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 - 0.4 * i as f64)).collect();
        assert_abs_diff_eq!(ls_slope(&pts).unwrap(), -0.4, epsilon = 1e-12);
        assert!(matches!(ls_slope(&[(1.0, 2.0), (1.0, 3.0)]), Err(Error::DegenerateFit)));
    }
}
