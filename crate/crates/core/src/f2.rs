//! Combinatorial oracle: a 10-dimensional symplectic vector space over GF(2)
//! modelling the 2-torsion of the Jacobian, with the ten 4-dimensional
//! isotropic subspaces V_ij and their unique odd translates.
//!
//! The oracle predicts, independently of all floating-point work, how the
//! pairs of the 160 theta characteristics distribute over difference classes:
//! which class sizes occur, how many classes of each size, how each class
//! splits across the ten families, and the rotation-orbit structure. The
//! numerical partition must reproduce this census exactly.
//!
//! Bit layout of a [`TwoTorsion`]: bits 0..5 hold the alpha components, bits
//! 5..10 the alpha' components. The Weil pairing is the standard symplectic
//! form, and parity is the standard quadratic refinement q(x) = sum x_i x_i',
//! whose value-1 locus has the 496 elements matching the count of odd theta
//! characteristics in genus 5.

use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("odd translate of V_{0}{1} is not a single coset")]
    TranslateNotCoset(u8, u8),
    #[error("model points are not 160 distinct odd vectors")]
    PointsNotDistinct,
    #[error("difference census violates the predicted structure: {0}")]
    CensusStructure(String),
}

/// A 2-torsion class as a 10-bit vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TwoTorsion(pub u16);

impl TwoTorsion {
    pub fn zero() -> Self {
        TwoTorsion(0)
    }

    pub fn alpha(i: u8) -> Self {
        TwoTorsion(1 << (i % 5))
    }

    pub fn alpha_prime(i: u8) -> Self {
        TwoTorsion(1 << (5 + i % 5))
    }

    pub fn add(self, other: Self) -> Self {
        TwoTorsion(self.0 ^ other.0)
    }

    pub fn alpha_part(self) -> u16 {
        self.0 & 0x1f
    }

    pub fn alpha_prime_part(self) -> u16 {
        self.0 >> 5 & 0x1f
    }

    /// Standard symplectic form sum u_i v_i' + u_i' v_i.
    pub fn weil_pairing(self, other: Self) -> u8 {
        let x = (self.alpha_part() & other.alpha_prime_part())
            ^ (self.alpha_prime_part() & other.alpha_part());
        (x.count_ones() & 1) as u8
    }

    /// Quadratic refinement q(x) = sum x_i x_i'; odd thetas sit at q = 1.
    pub fn parity(self) -> u8 {
        ((self.alpha_part() & self.alpha_prime_part()).count_ones() & 1) as u8
    }

    /// Cyclic index rotation on both halves.
    pub fn rotated(self, r: u8) -> Self {
        let rot5 = |s: u16, r: u8| -> u16 {
            let r = r % 5;
            if r == 0 {
                s
            } else {
                (s << r | s >> (5 - r)) & 0x1f
            }
        };
        TwoTorsion(rot5(self.alpha_part(), r) | rot5(self.alpha_prime_part(), r) << 5)
    }
}

pub fn sum_alpha() -> TwoTorsion {
    TwoTorsion(0x1f)
}

/// Basis of V_ij. For j = i+1 the span is (a_i, a_{i-1}, a_{i+1}, a_{i+2});
/// for j = i+2 it is (a_i, a_{i-1}+a_{i+1}, a_{i+2}, a_{i+1}+a_{i+3}).
pub fn v_ij_basis(i: u8, j: u8) -> [TwoTorsion; 4] {
    let (i, j) = normalize_family(i, j);
    let a = TwoTorsion::alpha;
    if (i + 1) % 5 == j || (j + 1) % 5 == i {
        // adjacent pair; orient so the formula uses the i with j = i+1
        let i = if (i + 1) % 5 == j { i } else { j };
        [a(i), a(i + 4), a(i + 1), a(i + 2)]
    } else {
        let i = if (i + 2) % 5 == j { i } else { j };
        [
            a(i),
            a(i + 4).add(a(i + 1)),
            a(i + 2),
            a(i + 1).add(a(i + 3)),
        ]
    }
}

/// The unique nontrivial element of the projection of V_ij-perp to the
/// alpha' half: alpha'_{i+3} for j = i+1, and
/// alpha'_{i-1} + alpha'_{i+1} + alpha'_{i+3} for j = i+2.
pub fn eta_ij(i: u8, j: u8) -> TwoTorsion {
    let (i, j) = normalize_family(i, j);
    let ap = TwoTorsion::alpha_prime;
    if (i + 1) % 5 == j || (j + 1) % 5 == i {
        let i = if (i + 1) % 5 == j { i } else { j };
        ap(i + 3)
    } else {
        let i = if (i + 2) % 5 == j { i } else { j };
        ap(i + 4).add(ap(i + 1)).add(ap(i + 3))
    }
}

fn normalize_family(i: u8, j: u8) -> (u8, u8) {
    let (i, j) = (i % 5, j % 5);
    assert_ne!(i, j, "family indices must differ");
    (i.min(j), i.max(j))
}

pub fn span_of(basis: &[TwoTorsion]) -> Vec<TwoTorsion> {
    let mut out = Vec::with_capacity(1 << basis.len());
    for mask in 0..1u16 << basis.len() {
        let mut v = TwoTorsion::zero();
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                v = v.add(*b);
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
pub struct Family {
    pub label: (u8, u8),
    pub subspace: Vec<TwoTorsion>,
    pub eta: TwoTorsion,
    /// The 16 model points of the unique odd translate of the subspace.
    pub points: Vec<TwoTorsion>,
}

/// The realized GF(2) model: ten families of 16 odd vectors each.
pub struct Oracle {
    pub families: Vec<Family>,
    /// census[mu] = per family-pair counts of unordered point pairs with
    /// difference mu; key (fa, fb) with fa <= fb indexes into `families`.
    pub census: HashMap<TwoTorsion, BTreeMap<(u8, u8), u32>>,
}

pub fn family_labels() -> Vec<(u8, u8)> {
    let mut labels = Vec::with_capacity(10);
    for i in 0..5u8 {
        labels.push(normalize_family(i, (i + 1) % 5));
        labels.push(normalize_family(i, (i + 2) % 5));
    }
    labels.sort_unstable();
    labels.dedup();
    assert_eq!(labels.len(), 10);
    labels
}

impl Oracle {
    pub fn new() -> Result<Oracle, OracleError> {
        let mut families = Vec::with_capacity(10);
        for &(i, j) in &family_labels() {
            let basis = v_ij_basis(i, j);
            let subspace = span_of(&basis);
            if subspace.len() != 16 {
                return Err(OracleError::TranslateNotCoset(i, j));
            }
            let points = odd_translate(&basis, &subspace)
                .ok_or(OracleError::TranslateNotCoset(i, j))?;
            families.push(Family {
                label: (i, j),
                subspace,
                eta: eta_ij(i, j),
                points,
            });
        }

        let mut all: BTreeSet<TwoTorsion> = BTreeSet::new();
        for f in &families {
            for &p in &f.points {
                if p.parity() != 1 || !all.insert(p) {
                    return Err(OracleError::PointsNotDistinct);
                }
            }
        }
        if all.len() != 160 {
            return Err(OracleError::PointsNotDistinct);
        }

        let mut census: HashMap<TwoTorsion, BTreeMap<(u8, u8), u32>> = HashMap::new();
        for fa in 0..10u8 {
            for fb in fa..10u8 {
                let pa = &families[fa as usize].points;
                let pb = &families[fb as usize].points;
                if fa == fb {
                    for x in 0..16 {
                        for y in (x + 1)..16 {
                            let mu = pa[x].add(pa[y]);
                            *census.entry(mu).or_default().entry((fa, fb)).or_default() += 1;
                        }
                    }
                } else {
                    for &x in pa {
                        for &y in pb {
                            let mu = x.add(y);
                            *census.entry(mu).or_default().entry((fa, fb)).or_default() += 1;
                        }
                    }
                }
            }
        }

        let oracle = Oracle { families, census };
        oracle.verify_structure()?;
        Ok(oracle)
    }

    /// Difference multiset for one family pair.
    pub fn predict_difference_multiset(
        &self,
        f1: (u8, u8),
        f2: (u8, u8),
    ) -> HashMap<TwoTorsion, u32> {
        let ia = self.family_index(f1);
        let ib = self.family_index(f2);
        let key = (ia.min(ib), ia.max(ib));
        let mut out = HashMap::new();
        for (mu, m) in &self.census {
            if let Some(&c) = m.get(&key) {
                out.insert(*mu, c);
            }
        }
        out
    }

    pub fn family_index(&self, label: (u8, u8)) -> u8 {
        let label = normalize_family(label.0, label.1);
        self.families
            .iter()
            .position(|f| f.label == label)
            .expect("known family") as u8
    }

    /// Total pair count per difference class mu, over all family pairs.
    pub fn pairs_per_mu(&self) -> HashMap<TwoTorsion, u32> {
        self.census
            .iter()
            .map(|(mu, m)| (*mu, m.values().sum()))
            .collect()
    }

    /// Number of contributing family pairs and the per-pair count, per mu.
    pub fn family_incidence(&self, mu: TwoTorsion) -> Vec<((u8, u8), u32)> {
        self.census
            .get(&mu)
            .map(|m| m.iter().map(|(k, v)| (*k, *v)).collect())
            .unwrap_or_default()
    }

    pub fn predict_partition_table(&self) -> PartitionPrediction {
        let per_mu = self.pairs_per_mu();
        let mut mu48 = Vec::new();
        let mut mu32 = Vec::new();
        let mut mu24 = Vec::new();
        for (&mu, &count) in &per_mu {
            match count {
                48 => mu48.push(mu),
                32 => mu32.push(mu),
                24 => mu24.push(mu),
                other => panic!("unexpected census count {other} for {mu:?}"),
            }
        }
        mu48.sort_unstable();
        mu32.sort_unstable();
        mu24.sort_unstable();
        let rows = vec![
            PredictedRow {
                pairs_per_class: 48,
                class_count: mu48.len() as u32,
                orbit_size: 5,
                orbit_count: 3,
            },
            PredictedRow {
                pairs_per_class: 32,
                class_count: mu32.len() as u32,
                orbit_size: 5,
                orbit_count: 3,
            },
            PredictedRow {
                pairs_per_class: 24,
                class_count: mu24.len() as u32,
                orbit_size: 40,
                orbit_count: 12,
            },
        ];
        PartitionPrediction {
            rows,
            mu48,
            mu32,
            mu24,
        }
    }

    /// Structural checks tying the brute-force census to the closed-form
    /// description; any violation invalidates the oracle itself.
    fn verify_structure(&self) -> Result<(), OracleError> {
        let err = |s: String| Err(OracleError::CensusStructure(s));
        let total: u32 = self.pairs_per_mu().values().sum();
        if total != 12720 {
            return err(format!("total pairs {total} != C(160,2)"));
        }

        // within one family: differences are V \ {0}, eight each
        for (fi, f) in self.families.iter().enumerate() {
            let d = self.predict_difference_multiset(f.label, f.label);
            if d.len() != 15
                || d.values().any(|&c| c != 8)
                || d.keys().any(|mu| !f.subspace.contains(mu))
            {
                return err(format!("family {fi} internal differences malformed"));
            }
        }

        // across families: the 32-element coset span(alpha) + eta + eta',
        // eight each
        let alpha_span = span_of(&[
            TwoTorsion::alpha(0),
            TwoTorsion::alpha(1),
            TwoTorsion::alpha(2),
            TwoTorsion::alpha(3),
            TwoTorsion::alpha(4),
        ]);
        for fa in 0..10usize {
            for fb in (fa + 1)..10usize {
                let la = self.families[fa].label;
                let lb = self.families[fb].label;
                let d = self.predict_difference_multiset(la, lb);
                let shift = self.families[fa].eta.add(self.families[fb].eta);
                if d.len() != 32 || d.values().any(|&c| c != 8) {
                    return err(format!("families {la:?},{lb:?} cross differences malformed"));
                }
                for mu in d.keys() {
                    if !alpha_span.contains(&mu.add(shift)) {
                        return err(format!(
                            "difference {mu:?} outside predicted coset for {la:?},{lb:?}"
                        ));
                    }
                }
            }
        }

        // every nonzero mu in span(alpha') ∩ (sum alpha)-perp arises from
        // exactly three family pairs
        for g in 1..32u16 {
            let mu = TwoTorsion((g as u16) << 5);
            if mu.weil_pairing(sum_alpha()) != 0 {
                continue;
            }
            // every difference with this alpha'-part comes from the same
            // family pairs, so collect over the whole coset
            let distinct: BTreeSet<(u8, u8)> = self
                .census
                .iter()
                .filter(|(m, _)| m.alpha_prime_part() == g)
                .flat_map(|(_, m)| m.keys().copied())
                .collect();
            if distinct.len() != 3 {
                return err(format!(
                    "gamma with alpha' mask {g:05b} has {} family pairs, expected 3",
                    distinct.len()
                ));
            }
        }

        // census sizes: 15 classes of 48, 15 of 32, 480 of 24
        let per_mu = self.pairs_per_mu();
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for &c in per_mu.values() {
            *counts.entry(c).or_default() += 1;
        }
        let expect: BTreeMap<u32, u32> = [(24u32, 480u32), (32, 15), (48, 15)].into();
        if counts != expect {
            return err(format!("class census {counts:?} != {expect:?}"));
        }

        // every mu lies in (sum alpha)-perp minus {0, sum alpha}
        for mu in per_mu.keys() {
            if mu.weil_pairing(sum_alpha()) != 0
                || *mu == TwoTorsion::zero()
                || *mu == sum_alpha()
            {
                return err(format!("difference {mu:?} outside the expected set"));
            }
        }

        // the 48-count shapes: a_k, a_k + a_{k+2}, sum - a_k - a_{k+1}
        let mut shapes: BTreeSet<TwoTorsion> = BTreeSet::new();
        for k in 0..5u8 {
            shapes.insert(TwoTorsion::alpha(k));
            shapes.insert(TwoTorsion::alpha(k).add(TwoTorsion::alpha(k + 2)));
            shapes.insert(
                sum_alpha()
                    .add(TwoTorsion::alpha(k))
                    .add(TwoTorsion::alpha(k + 1)),
            );
        }
        for (mu, &c) in &per_mu {
            let is48 = shapes.contains(mu);
            if is48 != (c == 48) && mu.alpha_prime_part() == 0 {
                return err(format!("mu {mu:?} count {c} contradicts shape rule"));
            }
        }

        // rotation orbits: the 30 same-family classes split 3+3 orbits of 5
        let table = {
            let mut mu48 = Vec::new();
            let mut mu32v = Vec::new();
            for (&mu, &c) in &per_mu {
                if c == 48 {
                    mu48.push(mu);
                } else if c == 32 {
                    mu32v.push(mu);
                }
            }
            (mu48, mu32v)
        };
        for (set, label) in [(&table.0, "48"), (&table.1, "32")] {
            let orbits = rotation_orbits(set);
            if orbits.len() != 3 || orbits.iter().any(|o| o.len() != 5) {
                return err(format!("{label}-pair classes do not form 3 rotation orbits of 5"));
            }
        }
        Ok(())
    }
}

fn rotation_orbits(mus: &[TwoTorsion]) -> Vec<Vec<TwoTorsion>> {
    let mut seen: BTreeSet<TwoTorsion> = BTreeSet::new();
    let mut orbits = Vec::new();
    for &mu in mus {
        if seen.contains(&mu) {
            continue;
        }
        let mut orbit = Vec::new();
        for r in 0..5 {
            let v = mu.rotated(r);
            if seen.insert(v) {
                orbit.push(v);
            }
        }
        orbits.push(orbit);
    }
    orbits
}

/// The 16 points of the unique odd translate of the given subspace.
fn odd_translate(basis: &[TwoTorsion; 4], subspace: &[TwoTorsion]) -> Option<Vec<TwoTorsion>> {
    let mut cosets: BTreeSet<Vec<TwoTorsion>> = BTreeSet::new();
    for x in 0..1024u16 {
        let t = TwoTorsion(x);
        if t.parity() != 1 {
            continue;
        }
        if basis.iter().any(|&v| t.weil_pairing(v) != v.parity()) {
            continue;
        }
        let mut coset: Vec<TwoTorsion> = subspace.iter().map(|&v| v.add(t)).collect();
        coset.sort_unstable();
        cosets.insert(coset);
    }
    if cosets.len() == 1 {
        cosets.into_iter().next()
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PredictedRow {
    pub pairs_per_class: u32,
    pub class_count: u32,
    pub orbit_size: u32,
    pub orbit_count: u32,
}

#[derive(Clone, Debug)]
pub struct PartitionPrediction {
    pub rows: Vec<PredictedRow>,
    pub mu48: Vec<TwoTorsion>,
    pub mu32: Vec<TwoTorsion>,
    pub mu24: Vec<TwoTorsion>,
}

impl PartitionPrediction {
    pub fn total_classes(&self) -> u32 {
        self.rows.iter().map(|r| r.class_count).sum()
    }

    pub fn total_pairs(&self) -> u32 {
        self.rows
            .iter()
            .map(|r| r.class_count * r.pairs_per_class)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weil_pairing_basics() {
        let a0 = TwoTorsion::alpha(0);
        let a0p = TwoTorsion::alpha_prime(0);
        let a1 = TwoTorsion::alpha(1);
        assert_eq!(a0.weil_pairing(a0p), 1);
        assert_eq!(a0.weil_pairing(a1), 0);
        for x in 0..1024u16 {
            assert_eq!(TwoTorsion(x).weil_pairing(TwoTorsion(x)), 0);
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_ij(0, 1), TwoTorsion::alpha_prime(3));
        let expect = TwoTorsion::alpha_prime(4)
            .add(TwoTorsion::alpha_prime(1))
            .add(TwoTorsion::alpha_prime(3));
        assert_eq!(eta_ij(0, 2), expect);
    }

    #[test]
    fn v_ij_isotropic_dimension_4() {
        for &(i, j) in &family_labels() {
            let basis = v_ij_basis(i, j);
            let span = span_of(&basis);
            assert_eq!(span.len(), 16);
            for &u in &span {
                for &v in &span {
                    assert_eq!(u.weil_pairing(v), 0);
                }
            }
        }
    }

    #[test]
    fn oracle_builds() {
        let oracle = Oracle::new().unwrap();
        assert_eq!(oracle.families.len(), 10);
        let p = oracle.predict_partition_table();
        assert_eq!(p.total_classes(), 510);
        assert_eq!(p.total_pairs(), 12720);
        assert_eq!(
            p.rows,
            vec![
                PredictedRow { pairs_per_class: 48, class_count: 15, orbit_size: 5, orbit_count: 3 },
                PredictedRow { pairs_per_class: 32, class_count: 15, orbit_size: 5, orbit_count: 3 },
                PredictedRow { pairs_per_class: 24, class_count: 480, orbit_size: 40, orbit_count: 12 },
            ]
        );
    }

    #[test]
    fn same_family_census_is_15_times_8() {
        let oracle = Oracle::new().unwrap();
        let d = oracle.predict_difference_multiset((0, 1), (0, 1));
        assert_eq!(d.len(), 15);
        assert!(d.values().all(|&c| c == 8));
        assert_eq!(d.values().sum::<u32>(), 120);
    }

    #[test]
    fn cross_family_census_is_32_times_8() {
        let oracle = Oracle::new().unwrap();
        let d = oracle.predict_difference_multiset((0, 1), (2, 3));
        assert_eq!(d.len(), 32);
        assert!(d.values().all(|&c| c == 8));
    }

    #[test]
    fn incidence_of_cross_mu_is_three_family_pairs() {
        let oracle = Oracle::new().unwrap();
        let p = oracle.predict_partition_table();
        for &mu in &p.mu24 {
            let inc = oracle.family_incidence(mu);
            assert_eq!(inc.len(), 3, "mu {mu:?}");
            assert!(inc.iter().all(|&(_, c)| c == 8));
        }
        for &mu in p.mu48.iter().chain(&p.mu32) {
            let inc = oracle.family_incidence(mu);
            let n = if p.mu48.contains(&mu) { 6 } else { 4 };
            assert_eq!(inc.len(), n, "mu {mu:?}");
            assert!(inc.iter().all(|&(f, c)| f.0 == f.1 && c == 8));
        }
    }
}
