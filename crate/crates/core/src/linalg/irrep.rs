//! The unitary change of basis splitting the 15-dimensional space of quadrics
//! into its five blocks under the curve symmetry group:
//!
//!   R1 = span{x_j x_{j+1}}           (dim 5)
//!   R2 = span{x_j x_{j+2}}           (dim 5)
//!   R3 = span{sum x_j^2}             (dim 1)
//!   R4 = span{sum z^{+-j} x_j^2}     (dim 2)
//!   R5 = span{sum z^{+-2j} x_j^2}    (dim 2)
//!
//! with z = e^(2 pi i / 5). R3 + R4 is the ideal of the curve; dropping those
//! three coordinates projects onto its orthogonal complement R1 + R2 + R5.

use super::quadric::{mono_index, Quadric15};
use super::{C64, CMat};
use crate::wiman::GroupElement;
use std::sync::OnceLock;

/// Index ranges of the five blocks in irrep coordinates.
pub const BLOCK_RANGES: [std::ops::Range<usize>; 5] = [0..5, 5..10, 10..11, 11..13, 13..15];

/// Columns kept by the projection away from R3 + R4 (R1, R2, R5).
pub const KEEP_COLS: [usize; 12] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 13, 14];

pub struct IrrepBasis {
    /// 15 x 15 unitary; column c is the c-th basis vector in monomial
    /// coordinates, ordered R1, R2, R3, R4, R5.
    basis: CMat,
    /// 15 x 12: the R1, R2, R5 columns.
    keep: CMat,
    /// entrywise unitarity defect of basis^H basis
    pub unitarity_residual: f64,
}

fn zeta(k: i64) -> C64 {
    let ang = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
    C64::new(ang.cos(), ang.sin())
}

static SHARED: OnceLock<IrrepBasis> = OnceLock::new();

impl IrrepBasis {
    pub fn shared() -> &'static IrrepBasis {
        SHARED.get_or_init(IrrepBasis::new)
    }

    pub fn new() -> IrrepBasis {
        let mut b = CMat::zeros(15, 15);
        // R1: the adjacent-pair monomials
        for j in 0..5 {
            b[(mono_index(j, (j + 1) % 5), j)] = C64::new(1.0, 0.0);
        }
        // R2: the skip-pair monomials
        for j in 0..5 {
            b[(mono_index(j, (j + 2) % 5), 5 + j)] = C64::new(1.0, 0.0);
        }
        // R3..R5: discrete Fourier vectors on the diagonal monomials
        let inv_sqrt5 = C64::new(1.0 / 5.0f64.sqrt(), 0.0);
        for (col, freq) in [(10usize, 0i64), (11, 1), (12, -1), (13, 2), (14, -2)] {
            for j in 0..5i64 {
                b[(mono_index(j as usize, j as usize), col)] = inv_sqrt5 * zeta(freq * j);
            }
        }
        let keep = CMat::from_fn(15, 12, |r, c| b[(r, KEEP_COLS[c])]);
        let gram = b.adjoint() * &b;
        let mut unitarity_residual = 0.0f64;
        for r in 0..15 {
            for c in 0..15 {
                let t = if r == c {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                unitarity_residual = unitarity_residual.max((gram[(r, c)] - t).norm());
            }
        }
        assert!(
            unitarity_residual <= 1e-14,
            "irrep basis unitarity defect {unitarity_residual:.3e}"
        );
        IrrepBasis {
            basis: b,
            keep,
            unitarity_residual,
        }
    }

    /// Hermitian coordinates of a quadric in the block basis.
    pub fn to_irrep(&self, q: &Quadric15) -> [C64; 15] {
        std::array::from_fn(|c| {
            (0..15)
                .map(|r| self.basis[(r, c)].conj() * q.0[r])
                .sum::<C64>()
        })
    }

    /// Inverse of [`Self::to_irrep`].
    pub fn from_irrep(&self, w: &[C64; 15]) -> Quadric15 {
        Quadric15(std::array::from_fn(|r| {
            (0..15).map(|c| self.basis[(r, c)] * w[c]).sum::<C64>()
        }))
    }

    /// Hermitian norms of the five block components.
    pub fn block_magnitudes(&self, q: &Quadric15) -> [f64; 5] {
        let w = self.to_irrep(q);
        std::array::from_fn(|bi| {
            BLOCK_RANGES[bi]
                .clone()
                .map(|k| w[k].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
    }

    /// Evaluation coordinates of rows against the R1+R2+R5 quadrics: the
    /// n x 12 matrix M * keep. A kernel vector v of the result corresponds to
    /// the quadric keep * v, which vanishes on all the rows' points.
    pub fn project_rows(&self, m: &CMat) -> CMat {
        assert_eq!(m.ncols(), 15);
        m * &self.keep
    }

    /// Lift a 12-vector in kept coordinates to a quadric orthogonal to
    /// R3 + R4.
    pub fn lift_kept(&self, v: &[C64]) -> Quadric15 {
        assert_eq!(v.len(), 12);
        Quadric15(std::array::from_fn(|r| {
            (0..12).map(|c| self.keep[(r, c)] * v[c]).sum::<C64>()
        }))
    }

    /// The induced action of a group element on quadric coefficient vectors:
    /// 15 x 15 signed-permutation-like matrix.
    pub fn quadric_action(g: GroupElement) -> CMat {
        let mut m = CMat::zeros(15, 15);
        for (idx, &(i, k)) in super::quadric::MONO_PAIRS.iter().enumerate() {
            // x_i x_k maps to s_i s_k x_{pi(i)} x_{pi(k)} under the
            // coordinate substitution
            let pi = |c: usize| (c + g.rot as usize) % 5;
            let sgn = |c: usize| {
                if g.signs >> pi(c) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            };
            let target = mono_index(pi(i), pi(k));
            m[(target, idx)] = C64::new(sgn(i) * sgn(k), 0.0);
        }
        m
    }
}

impl Default for IrrepBasis {
    fn default() -> Self {
        IrrepBasis::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiman::Model;

    fn qa() -> Quadric15 {
        let mut q = Quadric15::zero();
        for j in 0..5 {
            q.0[mono_index(j, j)] = C64::new(1.0, 0.0);
        }
        q
    }

    fn qb() -> Quadric15 {
        let mut q = Quadric15::zero();
        for j in 0..5 {
            q.0[mono_index(j, j)] = zeta(j as i64);
        }
        q
    }

    #[test]
    fn qa_is_pure_r3() {
        let ir = IrrepBasis::shared();
        let m = ir.block_magnitudes(&qa());
        assert!(m[2] > 2.0);
        for (bi, &v) in m.iter().enumerate() {
            if bi != 2 {
                assert!(v < 1e-14, "block {bi} magnitude {v:.3e}");
            }
        }
    }

    #[test]
    fn qb_is_pure_r4() {
        let ir = IrrepBasis::shared();
        let m = ir.block_magnitudes(&qb());
        assert!(m[3] > 2.0);
        for (bi, &v) in m.iter().enumerate() {
            if bi != 3 {
                assert!(v < 1e-14, "block {bi} magnitude {v:.3e}");
            }
        }
    }

    #[test]
    fn monomial_x0x1_is_pure_r1() {
        let ir = IrrepBasis::shared();
        let mut q = Quadric15::zero();
        q.0[mono_index(0, 1)] = C64::new(1.0, 0.0);
        let m = ir.block_magnitudes(&q);
        assert!((m[0] - 1.0).abs() < 1e-14);
        assert!(m[1] < 1e-14 && m[2] < 1e-14 && m[3] < 1e-14 && m[4] < 1e-14);
    }

    #[test]
    fn round_trip() {
        let ir = IrrepBasis::shared();
        let mut q = Quadric15::zero();
        for (k, c) in q.0.iter_mut().enumerate() {
            *c = C64::new((k as f64).sin(), (k as f64).cos());
        }
        let back = ir.from_irrep(&ir.to_irrep(&q));
        let worst = q
            .0
            .iter()
            .zip(back.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-14, "round trip defect {worst:.3e}");
    }

    #[test]
    fn blocks_are_group_invariant() {
        let ir = IrrepBasis::shared();
        let model = Model::shared();
        for &g in model.elements.iter() {
            let act = IrrepBasis::quadric_action(g);
            for (bi, range) in BLOCK_RANGES.iter().enumerate() {
                for col in range.clone() {
                    // image of basis vector `col` must stay inside block bi
                    let v = Quadric15(std::array::from_fn(|r| ir.basis[(r, col)]));
                    let img = Quadric15(std::array::from_fn(|r| {
                        (0..15).map(|c| act[(r, c)] * v.0[c]).sum::<C64>()
                    }));
                    let mags = ir.block_magnitudes(&img);
                    for (bj, &m) in mags.iter().enumerate() {
                        if bj != bi {
                            assert!(
                                m <= 1e-14,
                                "block {bi} leaks {m:.3e} into {bj} under {g:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn i2_rows_project_to_zero() {
        let ir = IrrepBasis::shared();
        // rows spanned by Q_A, Q_B and conjugates project to zero
        let rows = [qa(), qb()];
        for q in rows {
            let conj = Quadric15(std::array::from_fn(|k| q.0[k].conj()));
            for r in [q, conj] {
                let m = CMat::from_fn(1, 15, |_, c| r.0[c]);
                let p = ir.project_rows(&m);
                let worst = (0..12).map(|c| p[(0, c)].norm()).fold(0.0f64, f64::max);
                assert!(worst <= 1e-14, "projection leak {worst:.3e}");
            }
        }
    }

    #[test]
    fn projection_preserves_norm_split() {
        let ir = IrrepBasis::shared();
        let mut q = Quadric15::zero();
        for (k, c) in q.0.iter_mut().enumerate() {
            *c = C64::new(0.3 * (k as f64 + 1.0).ln(), -0.1 * k as f64);
        }
        let m = CMat::from_fn(1, 15, |_, c| q.0[c]);
        let p = ir.project_rows(&m);
        let kept: f64 = (0..12).map(|c| p[(0, c)].norm_sqr()).sum();
        let mags = ir.block_magnitudes(&q);
        let dropped = mags[2] * mags[2] + mags[3] * mags[3];
        assert!((kept + dropped - q.norm() * q.norm()).abs() < 1e-12);
    }
}
