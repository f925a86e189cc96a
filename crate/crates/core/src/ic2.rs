//! Reconstruction of the quadric ideal from theta-hyperplane products.
//!
//! Each of the 160 theta characteristics determines the unique hyperplane
//! through its four points, which meets the curve doubly there. Products of
//! the two hyperplanes of a partitioned pair give one quadric per pair;
//! stacking a class's quadrics and certifying the rank shows the span is
//! 13-dimensional with a 2-dimensional complement for at least 240 classes,
//! and the complements together span exactly the blocks R1 + R2 + R5. The
//! orthogonal complement of that span is then a certified 3-dimensional space
//! of quadrics vanishing on the curve, which must agree with the span of the
//! three defining quadrics.

use crate::linalg::svd::{classify_gap, svd_verified, Bands, SvdError};
use crate::linalg::{C64, CMat, IrrepBasis, Quadric15};
use crate::partition::SteinerClass;
use crate::wiman::{CurvePoint, Model, QuadricLabel};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

/// Slack for assembling hyperplane and pair-quadric rows in floats.
const ROW_EVAL_SLACK: f64 = 1e-12;

pub const SPAN_BANDS: Bands = Bands {
    low_max: 1e-14,
    high_min: 1e-2,
    high_max: 10.0,
};

#[derive(Debug, thiserror::Error)]
pub enum Ic2Error {
    #[error("svd failure while processing theta {0}: {1}")]
    HyperplaneSvd(u8, SvdError),
    #[error("theta {0} kernel dimension is {1}, expected 1")]
    HyperplaneKernel(u8, usize),
    #[error("theta {0} fails the double-contact check: residual {1:.3e}")]
    HyperplaneTangency(u8, f64),
    #[error("class {0}: {1}")]
    ClassSvd(u16, SvdError),
    #[error("only {0} classes reach span dimension 13, need at least {1}")]
    NotEnoughDim13(usize, usize),
    #[error("complement union spans dimension {0}, expected 12")]
    ComplementSpan(usize),
    #[error("intersection does not match the defining quadrics: residual {0:.3e}")]
    IntersectionMismatch(f64),
    #[error("intersection quadric has residual {0:.3e} at point {1}")]
    PointResidual(f64, u8),
}

#[derive(Clone, Debug)]
pub struct ThetaHyperplane {
    pub theta: u8,
    pub coeffs: [C64; 5],
    /// worst |l(p)| over the four points
    pub vanishing_residual: f64,
    /// worst |l_j| over the two tangency coordinates
    pub tangency_residual: f64,
}

/// The unique hyperplane through the four points of a theta characteristic,
/// with the double-contact invariants verified.
pub fn theta_hyperplane(model: &Model, theta: u8) -> Result<ThetaHyperplane, Ic2Error> {
    let th = &model.thetas[theta as usize];
    let m = CMat::from_fn(4, 5, |r, c| model.points[th.points[r] as usize].floats[c]);
    let svd = svd_verified(&m).map_err(|e| Ic2Error::HyperplaneSvd(theta, e))?;
    let counts = classify_gap(&svd, SPAN_BANDS, ROW_EVAL_SLACK)
        .map_err(|e| Ic2Error::HyperplaneSvd(theta, e))?;
    if counts.low != 1 {
        return Err(Ic2Error::HyperplaneKernel(theta, counts.low));
    }
    let v = &svd.trailing_right_vectors(1)[0];
    let mut q = Quadric15::zero();
    q.0[..5].copy_from_slice(v);
    let normalized = {
        // reuse the quadric normalization on the 5 leading slots
        let n = q.normalized();
        let mut c = [C64::new(0.0, 0.0); 5];
        c.copy_from_slice(&n.0[..5]);
        c
    };

    let mut vanishing = 0.0f64;
    for &p in &th.points {
        let val: C64 = (0..5)
            .map(|k| normalized[k] * model.points[p as usize].floats[k])
            .sum();
        vanishing = vanishing.max(val.norm());
    }
    let tangency = normalized[th.family.0 as usize]
        .norm()
        .max(normalized[th.family.1 as usize].norm());
    if vanishing > 1e-13 || tangency > 1e-13 {
        return Err(Ic2Error::HyperplaneTangency(theta, vanishing.max(tangency)));
    }
    Ok(ThetaHyperplane {
        theta,
        coeffs: normalized,
        vanishing_residual: vanishing,
        tangency_residual: tangency,
    })
}

pub fn theta_hyperplanes(model: &Model) -> Result<Vec<ThetaHyperplane>, Ic2Error> {
    (0..model.thetas.len() as u8)
        .map(|t| theta_hyperplane(model, t))
        .collect()
}

/// The product quadric of two hyperplanes, unit-normalized.
pub fn pair_quadric(l1: &[C64; 5], l2: &[C64; 5]) -> Quadric15 {
    let mut q = Quadric15::zero();
    for (idx, &(i, k)) in crate::linalg::MONO_PAIRS.iter().enumerate() {
        q.0[idx] = if i == k {
            l1[i] * l2[i]
        } else {
            l1[i] * l2[k] + l1[k] * l2[i]
        };
    }
    q.normalized()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SteinerSpanReport {
    pub class_id: u16,
    pub orbit: u16,
    pub pair_count: usize,
    pub span_dim: usize,
    pub complement_dim: usize,
    /// largest singular value of the complement projected onto each block
    pub proj_magnitudes: [f64; 5],
    #[serde(skip)]
    pub complement: Vec<Quadric15>,
    pub usable: bool,
}

/// Span analysis of one class's pair quadrics.
pub fn steiner_span(
    model: &Model,
    hyperplanes: &[ThetaHyperplane],
    class: &SteinerClass,
) -> Result<SteinerSpanReport, Ic2Error> {
    let _ = model;
    let rows: Vec<Quadric15> = class
        .pairs
        .iter()
        .map(|&(a, b)| pair_quadric(&hyperplanes[a as usize].coeffs, &hyperplanes[b as usize].coeffs))
        .collect();
    let m = CMat::from_fn(rows.len(), 15, |r, c| rows[r].0[c]);
    let svd = svd_verified(&m).map_err(|e| Ic2Error::ClassSvd(class.id, e))?;
    let counts = match classify_gap(&svd, SPAN_BANDS, ROW_EVAL_SLACK) {
        Ok(c) => c,
        Err(_) => {
            return Ok(SteinerSpanReport {
                class_id: class.id,
                orbit: class.orbit,
                pair_count: class.pairs.len(),
                span_dim: 0,
                complement_dim: 0,
                proj_magnitudes: [0.0; 5],
                complement: Vec::new(),
                usable: false,
            });
        }
    };
    let complement: Vec<Quadric15> = svd
        .trailing_right_vectors(counts.low)
        .into_iter()
        .map(|v| Quadric15(std::array::from_fn(|k| v[k])))
        .collect();
    let irrep = IrrepBasis::shared();
    let proj_magnitudes = block_plane_magnitudes(irrep, &complement);
    Ok(SteinerSpanReport {
        class_id: class.id,
        orbit: class.orbit,
        pair_count: class.pairs.len(),
        span_dim: counts.high,
        complement_dim: counts.low,
        proj_magnitudes,
        complement,
        usable: true,
    })
}

/// Largest singular value of the projection of span(vs) onto each block.
fn block_plane_magnitudes(irrep: &IrrepBasis, vs: &[Quadric15]) -> [f64; 5] {
    use crate::linalg::irrep::BLOCK_RANGES;
    let k = vs.len();
    if k == 0 {
        return [0.0; 5];
    }
    let coords: Vec<[C64; 15]> = vs.iter().map(|v| irrep.to_irrep(v)).collect();
    std::array::from_fn(|bi| {
        let range = BLOCK_RANGES[bi].clone();
        let cols = range.len();
        let m = CMat::from_fn(k, cols, |r, c| coords[r][range.start + c]);
        // 2x2 (or k x k) Gram; the operator norm is sqrt(lambda_max)
        let gram = &m * m.adjoint();
        let svd = gram.symmetric_eigen();
        svd.eigenvalues
            .iter()
            .cloned()
            .fold(0.0f64, f64::max)
            .max(0.0)
            .sqrt()
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Ic2Certificate {
    /// classes whose span certified at dimension 13 with 2-dim complements
    pub dim13_classes: Vec<u16>,
    /// orbits containing them
    pub good_orbits: Vec<u16>,
    /// certified dimension of the complement union (must be 12)
    pub union_dim: usize,
    /// the three intersection quadrics, unit rows
    #[serde(skip)]
    pub intersection: Vec<Quadric15>,
    /// worst mutual projection residual against the defining quadrics
    pub i2_match_residual: f64,
    /// worst |q(p)| over the 40 points and 3 intersection quadrics
    pub point_residual: f64,
}

/// Verify the span reports and certify the intersection of the Steiner spans.
pub fn intersect_and_certify(
    model: &Model,
    reports: &[SteinerSpanReport],
) -> Result<Ic2Certificate, Ic2Error> {
    let irrep = IrrepBasis::shared();
    let mut dim13: Vec<&SteinerSpanReport> = reports
        .iter()
        .filter(|r| {
            r.usable
                && r.span_dim == 13
                && r.complement_dim == 2
                && r.proj_magnitudes[2] <= 1e-13
                && r.proj_magnitudes[3] <= 1e-13
        })
        .collect();
    dim13.sort_by_key(|r| r.class_id);
    if dim13.len() < 240 {
        return Err(Ic2Error::NotEnoughDim13(dim13.len(), 240));
    }

    // 24 classes x 2 complement rows = 48 rows, the widest certified stack
    let chosen: Vec<&SteinerSpanReport> = dim13.iter().take(24).copied().collect();
    let rows: Vec<&Quadric15> = chosen.iter().flat_map(|r| r.complement.iter()).collect();
    let m = CMat::from_fn(rows.len(), 15, |r, c| rows[r].0[c]);
    let svd = svd_verified(&m).map_err(|e| Ic2Error::ClassSvd(u16::MAX, e))?;
    let counts = classify_gap(&svd, SPAN_BANDS, ROW_EVAL_SLACK)
        .map_err(|e| Ic2Error::ClassSvd(u16::MAX, e))?;
    if counts.high != 12 {
        return Err(Ic2Error::ComplementSpan(counts.high));
    }
    let intersection: Vec<Quadric15> = svd
        .trailing_right_vectors(counts.low)
        .into_iter()
        .map(|v| Quadric15(std::array::from_fn(|k| v[k])))
        .collect();
    debug_assert_eq!(intersection.len(), 3);

    // the intersection must match span(Q_A, Q_B, Q_C)
    let defining = defining_quadrics(model);
    let i2_match_residual = mutual_span_residual(&intersection, &defining);
    if i2_match_residual > 1e-12 {
        return Err(Ic2Error::IntersectionMismatch(i2_match_residual));
    }

    let mut point_residual = 0.0f64;
    for q in &intersection {
        for p in &model.points {
            let r = q.eval(&p.floats).norm();
            point_residual = point_residual.max(r);
            if r > 1e-12 {
                return Err(Ic2Error::PointResidual(r, p.index));
            }
        }
    }

    let _ = irrep;
    let mut good_orbits: Vec<u16> = dim13.iter().map(|r| r.orbit).collect();
    good_orbits.sort_unstable();
    good_orbits.dedup();

    Ok(Ic2Certificate {
        dim13_classes: dim13.iter().map(|r| r.class_id).collect(),
        good_orbits,
        union_dim: counts.high,
        intersection,
        i2_match_residual,
        point_residual,
    })
}

/// The three defining quadrics as unit-normalized coefficient vectors.
pub fn defining_quadrics(model: &Model) -> Vec<Quadric15> {
    model
        .quadrics
        .iter()
        .filter(|q| matches!(q.label, QuadricLabel::A | QuadricLabel::B | QuadricLabel::C))
        .map(|q| {
            let mut out = Quadric15::zero();
            for k in 0..5 {
                out.0[crate::linalg::quadric::mono_index(k, k)] = q.floats[k];
            }
            out.normalized()
        })
        .collect()
}

/// Worst distance from any unit vector of either span to the other span.
pub fn mutual_span_residual(a: &[Quadric15], b: &[Quadric15]) -> f64 {
    let onb = |vs: &[Quadric15]| -> Vec<Quadric15> {
        let mut out: Vec<Quadric15> = Vec::new();
        for v in vs {
            let mut w = v.clone();
            for _ in 0..2 {
                for u in &out {
                    let c = u.inner(&w);
                    w = w.add(&u.scaled(-c));
                }
            }
            let n = w.norm();
            assert!(n > 1e-8, "degenerate span basis");
            out.push(w.scaled(C64::new(1.0 / n, 0.0)));
        }
        out
    };
    let oa = onb(a);
    let ob = onb(b);
    let dist = |v: &Quadric15, basis: &[Quadric15]| -> f64 {
        let mut w = v.clone();
        for u in basis {
            let c = u.inner(&w);
            w = w.add(&u.scaled(-c));
        }
        w.norm()
    };
    let mut worst = 0.0f64;
    for v in &oa {
        worst = worst.max(dist(v, &ob));
    }
    for v in &ob {
        worst = worst.max(dist(v, &oa));
    }
    worst
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ReconstructReport {
    pub exact_point_residual: f64,
    pub continued_samples: usize,
    pub continued_residual: f64,
    pub off_curve_min_residual: f64,
}

/// Desk-scale sanity: continued curve samples satisfy the intersection
/// quadrics; a random off-curve point does not.
pub fn reconstruct_check(
    model: &Model,
    cert: &Ic2Certificate,
    samples: usize,
    seed: u64,
) -> ReconstructReport {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let defining = defining_quadrics(model);

    let mut exact_point_residual = 0.0f64;
    for q in &cert.intersection {
        for p in &model.points {
            exact_point_residual = exact_point_residual.max(q.eval(&p.floats).norm());
        }
    }

    let mut found: Vec<[C64; 5]> = Vec::new();
    let mut continued_residual = 0.0f64;
    'outer: while found.len() < samples {
        // random section: g . x = 0, h . x = 1
        let g: [C64; 5] = std::array::from_fn(|_| rand_c(&mut rng));
        let h: [C64; 5] = std::array::from_fn(|_| rand_c(&mut rng));
        for _ in 0..40 {
            if found.len() >= samples {
                break 'outer;
            }
            let mut x: [C64; 5] = std::array::from_fn(|_| rand_c(&mut rng));
            if newton_on_section(&defining, &g, &h, &mut x, 80) {
                let r = cert
                    .intersection
                    .iter()
                    .map(|q| q.eval(&x).norm())
                    .fold(0.0f64, f64::max);
                continued_residual = continued_residual.max(r);
                found.push(x);
            }
        }
    }

    let off: [C64; 5] = std::array::from_fn(|_| rand_c(&mut rng) * 2.0);
    let off_curve_min_residual = cert
        .intersection
        .iter()
        .map(|q| q.eval(&off).norm())
        .fold(f64::INFINITY, f64::min);

    ReconstructReport {
        exact_point_residual,
        continued_samples: found.len(),
        continued_residual,
        off_curve_min_residual,
    }
}

fn rand_c(rng: &mut rand_chacha::ChaCha8Rng) -> C64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Newton iteration for the square system (3 defining quadrics, g.x = 0,
/// h.x = 1); returns true on convergence to residual <= 1e-12.
fn newton_on_section(
    quadrics: &[Quadric15],
    g: &[C64; 5],
    h: &[C64; 5],
    x: &mut [C64; 5],
    max_iter: usize,
) -> bool {
    for _ in 0..max_iter {
        let mut f = [C64::new(0.0, 0.0); 5];
        for (i, q) in quadrics.iter().enumerate() {
            f[i] = q.eval(x);
        }
        f[3] = (0..5).map(|k| g[k] * x[k]).sum();
        f[4] = (0..5).map(|k| h[k] * x[k]).sum::<C64>() - C64::new(1.0, 0.0);
        let res: f64 = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if res <= 1e-12 {
            return true;
        }
        let mut jac = CMat::zeros(5, 5);
        for (i, q) in quadrics.iter().enumerate() {
            let grad = crate::tangency::gradient_at(q, x);
            for k in 0..5 {
                jac[(i, k)] = grad[k];
            }
        }
        for k in 0..5 {
            jac[(3, k)] = g[k];
            jac[(4, k)] = h[k];
        }
        let rhs = nalgebra::DVector::from_row_slice(&f);
        let Some(delta) = jac.lu().solve(&rhs) else {
            return false;
        };
        let step: f64 = delta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for k in 0..5 {
            x[k] -= delta[k];
        }
        if step > 1e6 {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiman::Model;

    #[test]
    fn all_hyperplanes_pass_contact_checks() {
        let model = Model::shared();
        let hs = theta_hyperplanes(model).unwrap();
        assert_eq!(hs.len(), 160);
        let worst_v = hs.iter().map(|h| h.vanishing_residual).fold(0.0f64, f64::max);
        let worst_t = hs.iter().map(|h| h.tangency_residual).fold(0.0f64, f64::max);
        assert!(worst_v <= 1e-13, "vanishing residual {worst_v:.3e}");
        assert!(worst_t <= 1e-13, "tangency residual {worst_t:.3e}");
    }

    #[test]
    fn hyperplane_equivariance_sample() {
        let model = Model::shared();
        let hs = theta_hyperplanes(model).unwrap();
        let irrep_like = |g: crate::wiman::GroupElement, l: &[C64; 5]| -> [C64; 5] {
            // linear action matching act_sym: (g.l)(g.x) = l(x)
            let mut out = [C64::new(0.0, 0.0); 5];
            for k in 0..5 {
                let src = (k + 5 - g.rot as usize) % 5;
                let sgn = if g.signs >> k & 1 == 1 { -1.0 } else { 1.0 };
                out[k] = l[src] * sgn;
            }
            out
        };
        let g = crate::wiman::GroupElement::new(2, 0b00110);
        for t in [0u8, 7, 80, 133] {
            let img = model.act_on_theta(g, t);
            let mapped = irrep_like(g, &hs[t as usize].coeffs);
            // compare projectively
            let target = &hs[img as usize].coeffs;
            let inner: C64 = (0..5).map(|k| mapped[k].conj() * target[k]).sum();
            let selfn: f64 = mapped.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(
                (inner.norm() - selfn).abs() < 1e-10,
                "theta {t}: |<g.l, l_img>| = {:.6} vs {:.6}",
                inner.norm(),
                selfn
            );
        }
    }

    #[test]
    fn pair_quadric_simple_products() {
        let e0 = {
            let mut l = [C64::new(0.0, 0.0); 5];
            l[0] = C64::new(1.0, 0.0);
            l
        };
        let e1 = {
            let mut l = [C64::new(0.0, 0.0); 5];
            l[1] = C64::new(1.0, 0.0);
            l
        };
        let q = pair_quadric(&e0, &e1);
        assert!((q.coeff(0, 1).norm() - 1.0).abs() < 1e-15);
        assert!(q.0.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0 < 1e-14);
        let q2 = pair_quadric(&e0, &e0);
        assert!((q2.coeff(0, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pair_quadric_double_vanishing() {
        // the product of the two hyperplanes of a pair vanishes doubly at all
        // eight underlying points
        let model = Model::shared();
        let hs = theta_hyperplanes(model).unwrap();
        let (a, b) = (0u8, 20u8);
        let q = pair_quadric(&hs[a as usize].coeffs, &hs[b as usize].coeffs);
        for &t in &[a, b] {
            for &p in &model.thetas[t as usize].points {
                let point = &model.points[p as usize];
                let val = q.eval(&point.floats).norm();
                assert!(val < 1e-12, "value {val:.3e}");
                let grad = crate::tangency::gradient_at(&q, &point.floats);
                let (fiber, e_j) = crate::tangency::tangent_pair(point);
                let d1: C64 = (0..5).map(|k| grad[k] * fiber[k]).sum();
                let d2: C64 = (0..5).map(|k| grad[k] * e_j[k]).sum();
                assert!(d1.norm() < 1e-12 && d2.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn defining_quadrics_are_orthogonal_unit() {
        let model = Model::shared();
        let qs = defining_quadrics(model);
        assert_eq!(qs.len(), 3);
        for (i, a) in qs.iter().enumerate() {
            assert!((a.norm() - 1.0).abs() < 1e-14);
            for b in qs.iter().skip(i + 1) {
                assert!(a.inner(b).norm() < 1e-14);
            }
        }
    }
}
