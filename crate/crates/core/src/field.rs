//! Exact arithmetic over the number field Q(i, a), where a^4 + a^2 - 1 = 0
//! and i^2 = -1.
//!
//! The real root a = 1/sqrt(phi) of t^4 + t^2 - 1 (with phi the golden ratio)
//! generates a degree-4 totally real-free extension; adjoining i gives the
//! degree-8 field that contains every coordinate of the 40 special points of
//! the curve, together with phi = a^2 + 1. Elements are stored as 8 exact
//! rational coordinates over the basis {1, a, a^2, a^3} x {1, i}, always
//! reduced modulo the defining relations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::OnceLock;

pub type Rat = BigRational;

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("inversion of zero field element")]
    DivisionByZero,
    #[error("prime {0} is unusable: {1}")]
    UnusablePrime(u64, &'static str),
}

fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// An element of Q(i, a). `coeffs[4*e + k]` is the coefficient of `a^k * i^e`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    coeffs: [Rat; 8],
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "a", "a^2", "a^3", "i", "i*a", "i*a^2", "i*a^3"];
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if names[k].is_empty() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*{}", c, names[k])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Multiply two degree-<4 polynomials in a and reduce by a^4 = 1 - a^2.
fn poly_mul_reduce(x: &[Rat; 4], y: &[Rat; 4]) -> [Rat; 4] {
    let mut prod = [
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
    ];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            prod[i + j] += xi * yj;
        }
    }
    // a^4 = 1 - a^2, a^5 = a - a^3, a^6 = 2a^2 - 1
    let mut out = [
        prod[0].clone(),
        prod[1].clone(),
        prod[2].clone(),
        prod[3].clone(),
    ];
    out[0] += &prod[4];
    out[2] -= &prod[4];
    out[1] += &prod[5];
    out[3] -= &prod[5];
    out[0] -= &prod[6];
    out[2] += &prod[6] + &prod[6];
    out
}

/// Extended Euclid in Q[t] modulo m(t) = t^4 + t^2 - 1: returns p^{-1}.
fn poly_inv(p: &[Rat; 4]) -> Option<[Rat; 4]> {
    // work with Vec<Rat> polynomials, lowest degree first
    fn deg(v: &[Rat]) -> Option<usize> {
        v.iter().rposition(|c| !c.is_zero())
    }
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    }
    let m: Vec<Rat> = vec![
        -Rat::one(),
        Rat::zero(),
        Rat::one(),
        Rat::zero(),
        Rat::one(),
    ];
    let mut r0 = m;
    let mut r1 = trim(p.to_vec());
    if deg(&r1).is_none() {
        return None;
    }
    let mut s0: Vec<Rat> = vec![Rat::zero()];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while let Some(d1) = deg(&r1) {
        if d1 == 0 {
            break;
        }
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut quo = vec![Rat::zero(); rem.len()];
        while let Some(dr) = deg(&rem) {
            if dr < d1 {
                break;
            }
            let c = &rem[dr] / &r1[d1];
            let shift = dr - d1;
            quo[shift] += &c;
            for (k, r1k) in r1.iter().enumerate() {
                let v = &c * r1k;
                rem[k + shift] -= v;
            }
        }
        let rem = trim(rem);
        // s_new = s0 - quo * s1
        let mut snew = vec![Rat::zero(); s0.len().max(quo.len() + s1.len())];
        for (k, c) in s0.iter().enumerate() {
            snew[k] += c;
        }
        for (k, qk) in quo.iter().enumerate() {
            if qk.is_zero() {
                continue;
            }
            for (l, sl) in s1.iter().enumerate() {
                let v = qk * sl;
                snew[k + l] -= v;
            }
        }
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = trim(snew);
    }
    let d = deg(&r1)?;
    debug_assert_eq!(d, 0, "gcd with irreducible modulus must be constant");
    let c = r1[0].clone();
    let mut out = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    for (k, sk) in s1.iter().enumerate() {
        if k >= 4 {
            // reduce the cofactor; degrees < 4 are guaranteed by the algorithm
            unreachable!("cofactor degree exceeds 3");
        }
        out[k] = sk / &c;
    }
    Some(out)
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem {
            coeffs: std::array::from_fn(|_| Rat::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        let mut e = Self::zero();
        e.coeffs[0] = rat_i64(n);
        e
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut e = Self::zero();
        e.coeffs[0] = r;
        e
    }

    /// The generator a = 1/sqrt(phi).
    pub fn gen_a() -> Self {
        let mut e = Self::zero();
        e.coeffs[1] = Rat::one();
        e
    }

    /// The imaginary unit.
    pub fn gen_i() -> Self {
        let mut e = Self::zero();
        e.coeffs[4] = Rat::one();
        e
    }

    /// phi = (1 + sqrt 5)/2, which equals a^2 + 1 in this field.
    pub fn phi() -> Self {
        let mut e = Self::from_int(1);
        e.coeffs[2] = Rat::one();
        e
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn real_poly(&self) -> [Rat; 4] {
        std::array::from_fn(|k| self.coeffs[k].clone())
    }

    fn imag_poly(&self) -> [Rat; 4] {
        std::array::from_fn(|k| self.coeffs[4 + k].clone())
    }

    fn from_polys(re: [Rat; 4], im: [Rat; 4]) -> Self {
        let coeffs = std::array::from_fn(|k| {
            if k < 4 {
                re[k].clone()
            } else {
                im[k - 4].clone()
            }
        });
        FieldElem { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = std::array::from_fn(|k| &self.coeffs[k] + &other.coeffs[k]);
        FieldElem { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = std::array::from_fn(|k| &self.coeffs[k] - &other.coeffs[k]);
        FieldElem { coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = std::array::from_fn(|k| -self.coeffs[k].clone());
        FieldElem { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (xr, xi) = (self.real_poly(), self.imag_poly());
        let (yr, yi) = (other.real_poly(), other.imag_poly());
        let rr = poly_mul_reduce(&xr, &yr);
        let ii = poly_mul_reduce(&xi, &yi);
        let ri = poly_mul_reduce(&xr, &yi);
        let ir = poly_mul_reduce(&xi, &yr);
        let re = std::array::from_fn(|k| &rr[k] - &ii[k]);
        let im = std::array::from_fn(|k| &ri[k] + &ir[k]);
        Self::from_polys(re, im)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let coeffs = std::array::from_fn(|k| &self.coeffs[k] * r);
        FieldElem { coeffs }
    }

    /// Complex conjugation a |-> a, i |-> -i.
    pub fn conj(&self) -> Self {
        let coeffs = std::array::from_fn(|k| {
            if k < 4 {
                self.coeffs[k].clone()
            } else {
                -self.coeffs[k].clone()
            }
        });
        FieldElem { coeffs }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // 1/(r + i s) = (r - i s) / (r^2 + s^2); the norm lives in Q(a).
        let r = self.real_poly();
        let s = self.imag_poly();
        let n = {
            let rr = poly_mul_reduce(&r, &r);
            let ss = poly_mul_reduce(&s, &s);
            std::array::from_fn(|k| &rr[k] + &ss[k])
        };
        let ninv = poly_inv(&n).ok_or(FieldError::DivisionByZero)?;
        let re = poly_mul_reduce(&r, &ninv);
        let im_neg = poly_mul_reduce(&s, &ninv);
        let im = std::array::from_fn(|k| -im_neg[k].clone());
        Ok(Self::from_polys(re, im))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Nearest representable complex double together with a proven bound on
    /// |exact - returned|. The bound is computed a posteriori in exact
    /// rational arithmetic, so it holds regardless of rounding details.
    pub fn embed_float(&self) -> Embedded {
        let (alo, ahi) = a_enclosure();
        let pow_lo = [Rat::one(), alo.clone(), &alo * &alo, &alo * &alo * &alo];
        let pow_hi = [Rat::one(), ahi.clone(), &ahi * &ahi, &ahi * &ahi * &ahi];
        let eval = |poly: &[Rat; 4]| -> (Rat, Rat) {
            let mut lo = Rat::zero();
            let mut hi = Rat::zero();
            for k in 0..4 {
                let c = &poly[k];
                if c.is_zero() {
                    continue;
                }
                if c.is_positive() {
                    lo += c * &pow_lo[k];
                    hi += c * &pow_hi[k];
                } else {
                    lo += c * &pow_hi[k];
                    hi += c * &pow_lo[k];
                }
            }
            (lo, hi)
        };
        let (rlo, rhi) = eval(&self.real_poly());
        let (ilo, ihi) = eval(&self.imag_poly());
        let re = rat_to_f64(&((&rlo + &rhi) / rat_i64(2)));
        let im = rat_to_f64(&((&ilo + &ihi) / rat_i64(2)));
        let err = |v: f64, lo: &Rat, hi: &Rat| -> Rat {
            let vr = Rat::from_float(v).expect("finite float");
            let d1 = (&vr - lo).abs();
            let d2 = (&vr - hi).abs();
            if d1 > d2 {
                d1
            } else {
                d2
            }
        };
        let bound_rat = err(re, &rlo, &rhi) + err(im, &ilo, &ihi);
        Embedded {
            value: num_complex::Complex64::new(re, im),
            bound: rat_to_f64_upper(&bound_rat),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Embedded {
    pub value: num_complex::Complex64,
    pub bound: f64,
}

/// Exact enclosure of the real root a of t^4 + t^2 - 1 in (0, 1),
/// via 220 bisection steps starting from [0.78, 0.79].
fn a_enclosure() -> (Rat, Rat) {
    static CELL: OnceLock<(Rat, Rat)> = OnceLock::new();
    let (lo, hi) = CELL.get_or_init(|| {
        let f = |t: &Rat| -> Rat { t * t * t * t + t * t - Rat::one() };
        let mut lo = Rat::new(BigInt::from(78), BigInt::from(100));
        let mut hi = Rat::new(BigInt::from(79), BigInt::from(100));
        assert!(f(&lo).is_negative() && f(&hi).is_positive());
        for _ in 0..220 {
            let mid = (&lo + &hi) / rat_i64(2);
            if f(&mid).is_negative() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    });
    (lo.clone(), hi.clone())
}

/// Round a rational to a nearby f64 (within one ulp of exact).
pub fn rat_to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let mut n = x.numer().abs();
    let mut d = x.denom().abs();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // scale so that the integer quotient carries ~80 significant bits
    let shift = 80 - (nb - db);
    let mut e2: i64 = 0;
    if shift > 0 {
        n <<= shift as u64;
        e2 -= shift;
    } else if shift < 0 {
        d <<= (-shift) as u64;
        e2 += -shift;
    }
    let (q, r) = n.div_rem(&d);
    let mut q = q;
    if &r * BigInt::from(2) >= d {
        q += 1;
    }
    let qf = q.to_f64().unwrap_or(f64::MAX);
    let v = qf * 2f64.powi(e2 as i32);
    if neg {
        -v
    } else {
        v
    }
}

/// Round a nonnegative rational UP to an f64 (verified upper bound).
pub fn rat_to_f64_upper(x: &Rat) -> f64 {
    let mut v = rat_to_f64(x);
    let mut guard = 0;
    while &Rat::from_float(v).expect("finite") < x {
        v = if v == 0.0 {
            f64::MIN_POSITIVE
        } else {
            v * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
        };
        guard += 1;
        assert!(guard < 64, "upper rounding failed to terminate");
    }
    v
}

/// A dense matrix over Q(i, a), row major.
#[derive(Clone)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElem>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![FieldElem::zero(); n * n];
        for k in 0..n {
            data[k * n + k] = FieldElem::one();
        }
        ExactMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    /// Basis of the right kernel over Q(i, a); empty iff full column rank.
    pub fn exact_kernel(&self) -> Vec<Vec<FieldElem>> {
        let (echelon, pivots) = self.echelon();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..self.cols)
            .filter(|c| !pivot_cols.contains(c))
            .collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![FieldElem::zero(); self.cols];
            v[fc] = FieldElem::one();
            // pivots are ordered by increasing column; solve bottom-up
            for &(pr, pc) in pivots.iter().rev() {
                let mut acc = FieldElem::zero();
                for c in (pc + 1)..self.cols {
                    let e = echelon.at(pr, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc = acc.add(&e.mul(&v[c]));
                    }
                }
                if !acc.is_zero() {
                    v[pc] = acc.neg().div(echelon.at(pr, pc)).expect("pivot nonzero");
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Fraction-free style row echelon with content stripping per pivot row.
    fn echelon(&self) -> (ExactMatrix, Vec<(usize, usize)>) {
        let mut m = self.clone();
        for r in 0..m.rows {
            m.strip_row(r);
        }
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..m.cols {
            let Some(pr) = (next_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(next_row, pr);
            let pivot = m.at(next_row, col).clone();
            for r in (next_row + 1)..m.rows {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    let v = m.at(r, c).mul(&pivot).sub(&m.at(next_row, c).mul(&factor));
                    m.data[r * m.cols + c] = v;
                }
                m.strip_row(r);
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Scale a row to primitive integer coordinates (content stripped).
    fn strip_row(&mut self, r: usize) {
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in 0..self.cols {
            for k in 0..8 {
                let q = self.at(r, c).coeff(k);
                if q.is_zero() {
                    continue;
                }
                den_lcm = den_lcm.lcm(q.denom());
            }
        }
        for c in 0..self.cols {
            for k in 0..8 {
                let q = self.at(r, c).coeff(k);
                if q.is_zero() {
                    continue;
                }
                let scaled = q.numer() * (&den_lcm / q.denom());
                num_gcd = num_gcd.gcd(&scaled);
            }
        }
        if num_gcd.is_zero() {
            return;
        }
        let factor = Rat::new(den_lcm, num_gcd);
        if factor.is_one() {
            return;
        }
        for c in 0..self.cols {
            let v = self.at(r, c).scale(&factor);
            self.data[r * self.cols + c] = v;
        }
    }

    /// Rank of the matrix reduced mod p under a joint root assignment for
    /// t^4 + t^2 - 1 and t^2 + 1. A lower bound for the exact rank.
    pub fn rank_mod_p(&self, p: u64) -> Result<usize, FieldError> {
        if p < 3 || p % 2 == 0 {
            return Err(FieldError::UnusablePrime(p, "p must be odd"));
        }
        if p >= 1 << 31 {
            return Err(FieldError::UnusablePrime(p, "p too large for u64 kernel"));
        }
        let a_root = (1..p)
            .find(|&t| (pow_mod(t, 4, p) + pow_mod(t, 2, p) + p - 1) % p == 0)
            .ok_or(FieldError::UnusablePrime(p, "t^4+t^2-1 has no root"))?;
        let i_root = (1..p)
            .find(|&t| (t * t + 1) % p == 0)
            .ok_or(FieldError::UnusablePrime(p, "t^2+1 has no root"))?;
        let mut apow = [1u64; 4];
        for k in 1..4 {
            apow[k] = apow[k - 1] * a_root % p;
        }
        let reduce = |e: &FieldElem| -> Result<u64, FieldError> {
            let mut acc: u64 = 0;
            for k in 0..8 {
                let q = e.coeff(k);
                if q.is_zero() {
                    continue;
                }
                let num = bigint_mod(q.numer(), p);
                let den = bigint_mod(q.denom(), p);
                if den == 0 {
                    return Err(FieldError::UnusablePrime(p, "denominator divisible by p"));
                }
                let mut term = num * pow_mod(den, p - 2, p) % p;
                term = term * apow[k % 4] % p;
                if k >= 4 {
                    term = term * i_root % p;
                }
                acc = (acc + term) % p;
            }
            Ok(acc)
        };
        let mut m = vec![0u64; self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[r * self.cols + c] = reduce(self.at(r, c))?;
            }
        }
        Ok(rank_gf(&mut m, self.rows, self.cols, p))
    }
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    m.to_u64().expect("reduced value fits")
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn rank_gf(m: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r * cols + col] % p != 0) else {
            continue;
        };
        for c in 0..cols {
            m.swap(rank * cols + c, pr * cols + c);
        }
        let inv = pow_mod(m[rank * cols + col], p - 2, p);
        for r in (rank + 1)..rows {
            let f = m[r * cols + col] % p;
            if f == 0 {
                continue;
            }
            let f = f * inv % p;
            for c in col..cols {
                let v = (m[r * cols + c] + p * p - f * m[rank * cols + c] % p) % p;
                m[r * cols + c] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Smallest odd prime >= `from` for which both defining polynomials split
/// and no denominator in `m` vanishes.
pub fn find_usable_prime(m: &ExactMatrix, from: u64) -> (u64, usize) {
    let mut p = from.max(3);
    if p % 2 == 0 {
        p += 1;
    }
    loop {
        if is_prime(p) {
            if let Ok(rank) = m.rank_mod_p(p) {
                return (p, rank);
            }
        }
        p += 2;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> FieldElem {
        FieldElem::gen_a()
    }

    fn i() -> FieldElem {
        FieldElem::gen_i()
    }

    #[test]
    fn defining_relations() {
        // a^4 + a^2 - 1 = 0
        let lhs = a().pow(4).add(&a().pow(2)).sub(&FieldElem::one());
        assert!(lhs.is_zero());
        // i^2 = -1
        assert_eq!(i().mul(&i()), FieldElem::from_int(-1));
    }

    #[test]
    fn inverse_of_a_squares_to_phi() {
        let inv_a = a().inv().unwrap();
        let lhs = inv_a.mul(&inv_a);
        assert_eq!(lhs, FieldElem::phi());
        assert_eq!(a().mul(&a().inv().unwrap()), FieldElem::one());
    }

    #[test]
    fn embed_basics() {
        let one = FieldElem::one().embed_float();
        assert_eq!(one.value.re, 1.0);
        assert_eq!(one.value.im, 0.0);
        assert_eq!(one.bound, 0.0);

        let ea = a().embed_float();
        assert!((ea.value.re - 0.786151377757423).abs() < 1e-14);
        assert_eq!(ea.value.im, 0.0);
        assert!(ea.bound <= 2.0 * 2f64.powi(-53), "bound = {}", ea.bound);

        let eia = i().mul(&a()).embed_float();
        assert_eq!(eia.value.re, 0.0);
        assert!((eia.value.im - 0.786151377757423).abs() < 1e-14);
        assert!(eia.bound <= 2.0 * 2f64.powi(-53));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(ExactMatrix::identity(3).exact_kernel().is_empty());
    }

    #[test]
    fn kernel_of_rank_one() {
        let row = vec![FieldElem::one(), a()];
        let m = ExactMatrix::from_rows(vec![row.clone(), row]);
        let k = m.exact_kernel();
        assert_eq!(k.len(), 1);
        // kernel vector proportional to (-a, 1)
        let v = &k[0];
        let cross = v[0].mul(&FieldElem::one()).add(&v[1].mul(&a()));
        assert!(cross.is_zero());
        assert!(!v[0].is_zero() || !v[1].is_zero());
    }

    #[test]
    fn mod_p_identity_and_zero() {
        let id = ExactMatrix::identity(3);
        let (p, rank) = find_usable_prime(&id, 3);
        assert_eq!(rank, 3);
        assert!(p >= 3);
        let z = ExactMatrix::from_rows(vec![vec![FieldElem::zero(); 4]; 2]);
        assert_eq!(z.rank_mod_p(p).unwrap(), 0);
    }

    #[test]
    fn upper_rounding_is_upper() {
        let x = Rat::new(BigInt::from(1), BigInt::from(3));
        let u = rat_to_f64_upper(&x);
        assert!(Rat::from_float(u).unwrap() >= x);
    }
}
