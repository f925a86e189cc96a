//! Quadratic forms on C^5 as 15-vectors in the lexicographic monomial basis
//! x0^2, x0x1, x0x2, x0x3, x0x4, x1^2, x1x2, ..., x4^2.

use super::C64;

/// The (i, k) index pairs, i <= k, in lexicographic order.
pub const MONO_PAIRS: [(usize, usize); 15] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 1),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 2),
    (2, 3),
    (2, 4),
    (3, 3),
    (3, 4),
    (4, 4),
];

pub fn mono_index(i: usize, k: usize) -> usize {
    let (i, k) = if i <= k { (i, k) } else { (k, i) };
    // offset of row i in the upper triangle, then the column
    i * 5 - i * (i + 1) / 2 + k
}

/// A quadric as its 15 monomial coefficients; q(x) = sum q_ik x_i x_k.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadric15(pub [C64; 15]);

impl Quadric15 {
    pub fn zero() -> Self {
        Quadric15([C64::new(0.0, 0.0); 15])
    }

    pub fn coeff(&self, i: usize, k: usize) -> C64 {
        self.0[mono_index(i, k)]
    }

    /// Coefficient of x_j^2.
    pub fn diag_coeff(&self, j: usize) -> C64 {
        self.0[mono_index(j, j)]
    }

    pub fn eval(&self, p: &[C64; 5]) -> C64 {
        self.0
            .iter()
            .zip(MONO_PAIRS.iter())
            .map(|(c, &(i, k))| c * p[i] * p[k])
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Quadric15(std::array::from_fn(|k| self.0[k] * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Quadric15(std::array::from_fn(|k| self.0[k] + other.0[k]))
    }

    /// Unit norm with the largest-magnitude coefficient rotated to the
    /// positive real axis (deterministic representative).
    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        assert!(norm > 0.0, "cannot normalize the zero quadric");
        let lead = self
            .0
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                a.norm()
                    .partial_cmp(&b.norm())
                    .expect("finite coefficients")
            })
            .map(|(k, _)| k)
            .expect("nonempty");
        let phase = self.0[lead] / C64::new(self.0[lead].norm(), 0.0);
        let s = phase.conj() / C64::new(norm, 0.0);
        self.scaled(s)
    }

    /// Hermitian inner product <self, other> = sum conj(self_k) other_k.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The symmetric 5x5 coefficient matrix (Hess/2 off diagonal handling:
    /// entry (i,k) = q_ik / 2 for i != k, q_ii on the diagonal).
    pub fn coefficient_matrix(&self) -> super::CMat {
        super::CMat::from_fn(5, 5, |r, c| {
            if r == c {
                self.coeff(r, r)
            } else {
                self.coeff(r, c) * C64::new(0.5, 0.0)
            }
        })
    }
}

/// The degree-2 monomials of a point, as a row of the evaluation matrix.
pub fn monomial_vector(p: &[C64; 5]) -> [C64; 15] {
    std::array::from_fn(|idx| {
        let (i, k) = MONO_PAIRS[idx];
        p[i] * p[k]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mono_index_is_lexicographic() {
        for (idx, &(i, k)) in MONO_PAIRS.iter().enumerate() {
            assert_eq!(mono_index(i, k), idx);
            assert_eq!(mono_index(k, i), idx);
        }
    }

    #[test]
    fn monomial_vector_unit_points() {
        let mut p = [C64::new(0.0, 0.0); 5];
        p[0] = C64::new(1.0, 0.0);
        let row = monomial_vector(&p);
        assert_eq!(row[0], C64::new(1.0, 0.0));
        assert!(row[1..].iter().all(|c| c.norm() == 0.0));

        let mut p = [C64::new(0.0, 0.0); 5];
        p[4] = C64::new(1.0, 0.0);
        let row = monomial_vector(&p);
        assert_eq!(row[14], C64::new(1.0, 0.0));
        assert!(row[..14].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn eval_matches_row_contraction() {
        let p = [
            C64::new(0.3, -0.2),
            C64::new(1.0, 0.4),
            C64::new(-0.7, 0.1),
            C64::new(0.0, 0.9),
            C64::new(0.5, 0.5),
        ];
        let mut q = Quadric15::zero();
        for (k, c) in q.0.iter_mut().enumerate() {
            *c = C64::new(k as f64 * 0.1 - 0.7, 0.3 - k as f64 * 0.05);
        }
        let row = monomial_vector(&p);
        let dot: C64 = row.iter().zip(q.0.iter()).map(|(r, c)| r * c).sum();
        assert!((dot - q.eval(&p)).norm() < 1e-15);
    }

    #[test]
    fn normalized_is_unit_with_real_lead() {
        let mut q = Quadric15::zero();
        q.0[3] = C64::new(0.0, -2.0);
        q.0[7] = C64::new(1.0, 1.0);
        let n = q.normalized();
        assert!((n.norm() - 1.0).abs() < 1e-15);
        let lead = n.0[3];
        assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
    }
}
