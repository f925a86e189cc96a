//! Verified singular value decompositions and gap classification.

use super::{C64, CMat};

pub const MAX_DIM: usize = 48;
pub const UNITARY_RESIDUAL_MAX: f64 = 1e-14;
pub const RECON_RESIDUAL_MAX: f64 = 3e-14;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SvdError {
    #[error("matrix dimensions {0}x{1} outside the supported range")]
    Dims(usize, usize),
    #[error("SVD iteration failed to converge")]
    NoConvergence,
    #[error("{which} residual {value:.3e} exceeds its certification threshold")]
    Residual { which: &'static str, value: f64 },
    #[error("singular value {sigma:.6e} violates the certified gap (low <= {low:.3e}, high in [{high_min:.3e}, {high_max:.3e}], perturbation {pert:.3e})")]
    GapViolation {
        sigma: f64,
        low: f64,
        high_min: f64,
        high_max: f64,
        pert: f64,
    },
    #[error("gap between bands does not survive the certified perturbation")]
    GapConsumed,
}

/// An SVD together with verified residual bounds.
///
/// `u` is m x m, `v` is n x n (both square, completed to full unitaries), and
/// `sigma` holds the min(m, n) computed singular values in nonincreasing
/// order. True singular values provably lie within `spectral_perturbation`
/// of the computed ones.
#[derive(Clone, Debug)]
pub struct CertifiedSvd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
    pub residual_recon: f64,
    pub residual_unitary: f64,
    pub spectral_perturbation: f64,
}

impl CertifiedSvd {
    pub fn nrows(&self) -> usize {
        self.u.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.v.nrows()
    }

    /// Singular values padded with structural zeros up to the column count,
    /// so that entry j always corresponds to column j of `v`. The padding
    /// covers the right null directions a wide matrix has beyond min(m, n).
    pub fn sigma_right_padded(&self) -> Vec<f64> {
        let mut out = self.sigma.clone();
        out.resize(self.ncols(), 0.0);
        out
    }

    /// The last `count` columns of `v`, i.e. the singular directions for the
    /// smallest (padded) singular values, in descending sigma order.
    pub fn trailing_right_vectors(&self, count: usize) -> Vec<Vec<C64>> {
        let n = self.ncols();
        assert!(count <= n);
        (n - count..n)
            .map(|c| self.v.column(c).iter().copied().collect())
            .collect()
    }
}

/// Compute an SVD and certify it by explicit residual verification.
///
/// The fast path decomposes with nalgebra; if the verified residuals miss
/// the contract (the iteration occasionally returns inaccurate factors on
/// structured complex inputs), a one-sided Jacobi pass recomputes the
/// factors from scratch. Whatever engine produced them, the residual checks
/// below are the only thing the certificate relies on.
pub fn svd_verified(a: &CMat) -> Result<CertifiedSvd, SvdError> {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 || m > MAX_DIM || n > MAX_DIM {
        return Err(SvdError::Dims(m, n));
    }
    match nalgebra_factors(a).and_then(|f| assemble(a, f)) {
        Ok(svd) => Ok(svd),
        Err(_) => {
            let f = jacobi_factors(a)?;
            assemble(a, f)
        }
    }
}

struct ThinFactors {
    u_thin: CMat,
    sigma: Vec<f64>,
    /// n x k matrix with orthonormal columns (right singular vectors)
    v_thin: CMat,
}

fn nalgebra_factors(a: &CMat) -> Result<ThinFactors, SvdError> {
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(SvdError::NoConvergence)?;
    let raw_sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let raw_u = svd.u.ok_or(SvdError::NoConvergence)?;
    let raw_vt = svd.v_t.ok_or(SvdError::NoConvergence)?;
    let (m, n) = (a.nrows(), a.ncols());
    let k = raw_sigma.len();
    // defensive descending sort, applied consistently to the factors
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| raw_sigma[j].partial_cmp(&raw_sigma[i]).expect("finite sigma"));
    Ok(ThinFactors {
        u_thin: CMat::from_fn(m, k, |r, c| raw_u[(r, order[c])]),
        sigma: order.iter().map(|&i| raw_sigma[i]).collect(),
        v_thin: CMat::from_fn(n, k, |r, c| raw_vt[(order[c], r)].conj()),
    })
}

/// One-sided Jacobi SVD: orthogonalize the columns of A V by unitary plane
/// rotations. Slower than the bidiagonalization path but reliably accurate
/// on every input in range.
fn jacobi_factors(a: &CMat) -> Result<ThinFactors, SvdError> {
    let (m, n) = (a.nrows(), a.ncols());
    if m < n {
        // A^H = U S V^H  =>  A = V S U^H
        let f = jacobi_factors(&a.adjoint())?;
        return Ok(ThinFactors {
            u_thin: f.v_thin,
            sigma: f.sigma,
            v_thin: f.u_thin,
        });
    }
    let mut b = a.clone();
    let mut v = CMat::identity(n, n);
    // rotation threshold: rounding regenerates relative off-diagonals at the
    // ~1e-15 level, so a tighter target cycles forever; 5e-15 keeps the
    // normalized-column Gram well inside the 1e-14 unitarity contract
    let tol = 5e-15f64;
    // columns that have decayed this far below the matrix scale carry exact
    // zeros at working precision; rotating against their noise never settles
    let max_col = (0..n).map(|c| b.column(c).norm()).fold(0.0f64, f64::max);
    let dead_floor_sq = (1e-20 * max_col.max(f64::MIN_POSITIVE)).powi(2);
    let max_sweeps = 60;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = C64::new(0.0, 0.0);
                for r in 0..m {
                    let bp = b[(r, p)];
                    let bq = b[(r, q)];
                    app += bp.norm_sqr();
                    aqq += bq.norm_sqr();
                    apq += bp.conj() * bq;
                }
                if app <= dead_floor_sq || aqq <= dead_floor_sq {
                    continue;
                }
                let scale = (app * aqq).sqrt();
                if scale == 0.0 || apq.norm() <= tol * scale {
                    continue;
                }
                rotated = true;
                // component division: Complex/Complex would square the
                // modulus in its denominator and underflow for decayed
                // kernel columns
                let apq_norm = apq.norm();
                let alpha = C64::new(apq.re / apq_norm, apq.im / apq_norm);
                let tau = (aqq - app) / (2.0 * apq_norm);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // unitary G = [[c, s], [-conj(alpha) s, conj(alpha) c]]
                let cs = C64::new(c, 0.0);
                let sp = C64::new(s, 0.0);
                let am = alpha.conj();
                for r in 0..m {
                    let bp = b[(r, p)];
                    let bq = b[(r, q)];
                    b[(r, p)] = bp * cs - bq * (am * sp);
                    b[(r, q)] = bp * sp + bq * (am * cs);
                }
                for r in 0..n {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp * cs - vq * (am * sp);
                    v[(r, q)] = vp * sp + vq * (am * cs);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        // accept a stalled iteration if the relative off-diagonals are still
        // tiny; the residual verification downstream remains the actual gate
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = C64::new(0.0, 0.0);
                for r in 0..m {
                    let bp = b[(r, p)];
                    let bq = b[(r, q)];
                    app += bp.norm_sqr();
                    aqq += bq.norm_sqr();
                    apq += bp.conj() * bq;
                }
                if app <= dead_floor_sq || aqq <= dead_floor_sq {
                    continue;
                }
                let scale = (app * aqq).sqrt();
                if scale > 0.0 {
                    worst = worst.max(apq.norm() / scale);
                }
            }
        }
        if worst > 2e-14 {
            return Err(SvdError::NoConvergence);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|c| {
            let nn = b.column(c).norm();
            if nn * nn <= dead_floor_sq {
                0.0
            } else {
                nn
            }
        })
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norm"));
    let sigma: Vec<f64> = order.iter().map(|&c| norms[c]).collect();
    let mut u_thin = CMat::zeros(m, n);
    for (dst, &src) in order.iter().enumerate() {
        if norms[src] > 0.0 {
            let inv = C64::new(1.0 / norms[src], 0.0);
            for r in 0..m {
                u_thin[(r, dst)] = b[(r, src)] * inv;
            }
        }
        // dead columns are reported as exact zeros; the unitary completion
        // rebuilds their U directions
    }
    let v_sorted = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(ThinFactors {
        u_thin,
        sigma,
        v_thin: v_sorted,
    })
}

fn assemble(a: &CMat, f: ThinFactors) -> Result<CertifiedSvd, SvdError> {
    let (m, n) = (a.nrows(), a.ncols());
    let ThinFactors {
        u_thin,
        sigma,
        v_thin,
    } = f;
    let k = sigma.len();
    let u = complete_unitary(&u_thin, m);
    let v = complete_unitary(&v_thin, n);

    // reconstruction residual: max entry modulus of U D V^H - A
    let mut scaled = u.columns(0, k).clone_owned();
    for (c, s) in sigma.iter().enumerate() {
        let factor = C64::new(*s, 0.0);
        for r in 0..m {
            scaled[(r, c)] *= factor;
        }
    }
    let recon = &scaled * v.columns(0, k).adjoint();
    let residual_recon = (0..m)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .map(|(r, c)| (recon[(r, c)] - a[(r, c)]).norm())
        .fold(0.0f64, f64::max);

    let residual_unitary = unitary_residual(&u).max(unitary_residual(&v));
    if residual_unitary > UNITARY_RESIDUAL_MAX {
        return Err(SvdError::Residual {
            which: "unitarity",
            value: residual_unitary,
        });
    }
    if residual_recon > RECON_RESIDUAL_MAX {
        return Err(SvdError::Residual {
            which: "reconstruction",
            value: residual_recon,
        });
    }

    let spectral_perturbation = ((m * n) as f64).sqrt() * residual_recon;
    Ok(CertifiedSvd {
        u,
        sigma,
        v,
        residual_recon,
        residual_unitary,
        spectral_perturbation,
    })
}

fn unitary_residual(q: &CMat) -> f64 {
    let n = q.nrows();
    let qq = q * q.adjoint();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            worst = worst.max((qq[(r, c)] - target).norm());
        }
    }
    worst
}

/// Extend `thin` (m x k, orthonormal columns) to an m x m unitary by
/// deterministic Gram-Schmidt over the standard basis.
/// Extend `thin` (m x k, orthonormal columns, except that exact-zero columns
/// stand in for zero singular values) to an m x m unitary. Filled columns
/// keep their positions; missing ones are built by deterministic
/// Gram-Schmidt over the standard basis, best residual first.
fn complete_unitary(thin: &CMat, m: usize) -> CMat {
    let k = thin.ncols();
    let mut out = CMat::zeros(m, m);
    let mut filled: Vec<usize> = Vec::with_capacity(m);
    let mut missing: Vec<usize> = Vec::new();
    for c in 0..m {
        if c < k && thin.column(c).norm() > 0.5 {
            out.set_column(c, &thin.column(c).clone_owned());
            filled.push(c);
        } else {
            missing.push(c);
        }
    }
    let orthogonalize = |cand: usize, filled: &[usize], out: &CMat| -> nalgebra::DVector<C64> {
        let mut v = nalgebra::DVector::<C64>::zeros(m);
        v[cand] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for &c in filled {
                let col = out.column(c);
                let proj: C64 = col.iter().zip(v.iter()).map(|(b, x)| b.conj() * x).sum();
                for r in 0..m {
                    let d = proj * out[(r, c)];
                    v[r] -= d;
                }
            }
        }
        v
    };
    let mut used = vec![false; m];
    for &slot in &missing {
        // among unused standard basis vectors, take the one with the largest
        // residual after projecting out the accepted columns (deterministic,
        // and the best residual is always bounded below)
        let best = (0..m)
            .filter(|&c| !used[c])
            .map(|c| (c, orthogonalize(c, &filled, &out).norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite norm"))
            .expect("candidates remain");
        used[best.0] = true;
        let mut v = orthogonalize(best.0, &filled, &out);
        let norm = v.norm();
        assert!(norm > 1e-8, "orthonormal completion degenerate");
        v /= C64::new(norm, 0.0);
        out.set_column(slot, &v);
        filled.push(slot);
    }
    out
}

/// A two-band acceptance region for singular values.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Bands {
    pub low_max: f64,
    pub high_min: f64,
    pub high_max: f64,
}

impl Bands {
    pub const fn new(low_max: f64, high_min: f64, high_max: f64) -> Self {
        Bands {
            low_max,
            high_min,
            high_max,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GapCounts {
    pub low: usize,
    pub high: usize,
}

/// Classify every (right-padded) singular value into the low or high band,
/// after inflating the low band by `extra_low` (perturbation budget carried
/// by the caller) and both bands by the certified spectral perturbation.
pub fn classify_gap(
    svd: &CertifiedSvd,
    bands: Bands,
    extra_low: f64,
) -> Result<GapCounts, SvdError> {
    let pert = svd.spectral_perturbation;
    let low_cut = bands.low_max + extra_low + pert;
    let high_lo = bands.high_min - pert;
    let high_hi = bands.high_max + pert;
    if low_cut >= high_lo {
        return Err(SvdError::GapConsumed);
    }
    let mut counts = GapCounts::default();
    for s in svd.sigma_right_padded() {
        if s <= low_cut {
            counts.low += 1;
        } else if s >= high_lo && s <= high_hi {
            counts.high += 1;
        } else {
            return Err(SvdError::GapViolation {
                sigma: s,
                low: low_cut,
                high_min: high_lo,
                high_max: high_hi,
                pert,
            });
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> CMat {
        CMat::from_fn(rows, cols, f)
    }

    #[test]
    fn zero_matrix() {
        let a = CMat::zeros(5, 3);
        let svd = svd_verified(&a).unwrap();
        assert!(svd.sigma.iter().all(|&s| s == 0.0));
        assert_eq!(svd.residual_recon, 0.0);
    }

    #[test]
    fn identity_matrix() {
        let a = CMat::identity(5, 5);
        let svd = svd_verified(&a).unwrap();
        assert!(svd.sigma.iter().all(|&s| (s - 1.0).abs() < 1e-14));
    }

    #[test]
    fn diagonal_matrix() {
        let mut a = CMat::zeros(3, 3);
        a[(0, 0)] = C64::new(3.0, 0.0);
        a[(1, 1)] = C64::new(2.0, 0.0);
        a[(2, 2)] = C64::new(1.0, 0.0);
        let svd = svd_verified(&a).unwrap();
        assert!((svd.sigma[0] - 3.0).abs() < 1e-13);
        assert!((svd.sigma[1] - 2.0).abs() < 1e-13);
        assert!((svd.sigma[2] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn classify_basic_and_violation() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = C64::new(1.0, 0.0);
        a[(1, 1)] = C64::new(1e-16, 0.0);
        let svd = svd_verified(&a).unwrap();
        let bands = Bands::new(1e-14, 1e-2, 1e3);
        let counts = classify_gap(&svd, bands, 0.0).unwrap();
        assert_eq!(counts, GapCounts { low: 1, high: 1 });

        let mut b = CMat::zeros(2, 2);
        b[(0, 0)] = C64::new(1.0, 0.0);
        b[(1, 1)] = C64::new(1e-8, 0.0);
        let svd = svd_verified(&b).unwrap();
        assert!(matches!(
            classify_gap(&svd, bands, 0.0),
            Err(SvdError::GapViolation { .. })
        ));
    }

    #[test]
    fn wide_matrix_pads_structural_zeros() {
        let a = mat(2, 5, |r, c| {
            C64::new((r * 5 + c) as f64 / 7.0, ((r + c) % 3) as f64 / 5.0)
        });
        let svd = svd_verified(&a).unwrap();
        assert_eq!(svd.sigma.len(), 2);
        assert_eq!(svd.sigma_right_padded().len(), 5);
        // the padded directions really are near-null: certified by recon
        for v in svd.trailing_right_vectors(3) {
            let av: Vec<C64> = (0..2)
                .map(|r| (0..5).map(|c| a[(r, c)] * v[c]).sum())
                .collect();
            let norm: f64 = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm < 1e-13, "padded direction has image norm {norm:.3e}");
        }
    }
}
