//! Exact spanning-tree witnesses for Steiner classes.
//!
//! A quadruple of thetas whose 16 points are pairwise distinct certifies that
//! its two constituent pairs belong to the same class as soon as the exact
//! 16 x 15 monomial matrix of the points drops rank: a quadric through 16
//! distinct points of the degree-8 canonical curve cuts exactly that divisor,
//! so a kernel beyond the 3-dimensional curve ideal forces the divisor sum to
//! be bicanonical. A spanning tree of such quadruples over a class's pairs
//! therefore certifies the whole class with no floating point anywhere: the
//! rank computations run over Q(i, a), prescreened by a modular rank bound.

use crate::field::{find_usable_prime, ExactMatrix, FieldElem};
use crate::linalg::quadric::MONO_PAIRS;
use crate::partition::SteinerClass;
use crate::tangency::multiplicity_profile;
use crate::wiman::Model;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, thiserror::Error)]
pub enum WitnessError {
    #[error("quadruple {0:?} repeats a point; only 16-distinct-point quadruples certify")]
    RepeatedPoints([u8; 4]),
    #[error("compatibility graph is disconnected: reached {0} of {1} pairs")]
    Disconnected(usize, usize),
    #[error("quadruple {0:?} does not split into two listed pairs")]
    BadQuad([u8; 4]),
    #[error("could not infer the pair decomposition: {0}")]
    AmbiguousPairs(String),
    #[error("quadruple {0:?} has full projected rank (exact rank {1}); not a class relation")]
    FullRank([u8; 4], usize),
    #[error("modular screen disagrees with exact rank on {0:?}: {1} > {2}")]
    ScreenInconsistent([u8; 4], usize, usize),
    #[error("the defining quadrics do not lie in an exact kernel of {0:?}")]
    IdealNotInKernel([u8; 4]),
}

/// A witness: the pairs of one class plus spanning-tree quadruples.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct Witness {
    pub schema_version: u32,
    pub class_id: Option<u16>,
    pub pairs: Vec<(u8, u8)>,
    pub quads: Vec<[u8; 4]>,
}

/// Reference spanning-tree witness for the 24-pair class containing the
/// theta pair {0, 9}.
pub const REFERENCE_WITNESS: [[u8; 4]; 23] = [
    [0, 9, 22, 70],
    [0, 9, 24, 142],
    [0, 9, 25, 82],
    [0, 9, 26, 83],
    [0, 9, 27, 143],
    [0, 9, 31, 42],
    [0, 9, 88, 134],
    [0, 9, 94, 111],
    [0, 9, 114, 149],
    [0, 9, 130, 154],
    [2, 20, 30, 49],
    [2, 24, 49, 142],
    [2, 40, 49, 71],
    [2, 49, 91, 92],
    [2, 49, 108, 132],
    [2, 49, 112, 129],
    [2, 49, 150, 152],
    [4, 7, 140, 141],
    [4, 20, 30, 140],
    [5, 6, 80, 81],
    [5, 20, 30, 80],
    [8, 20, 30, 62],
    [22, 48, 60, 70],
];

/// Greedy breadth-first spanning tree over the class's pairs, using only
/// 16-distinct-point quadruples as edges.
pub fn find_witness(model: &Model, class: &SteinerClass) -> Result<Witness, WitnessError> {
    let mut pairs: Vec<(u8, u8)> = class.pairs.clone();
    pairs.sort_unstable();
    let n = pairs.len();
    let distinct_points = |a: (u8, u8), b: (u8, u8)| -> bool {
        let quad = sorted_quad(a, b);
        multiplicity_profile(&quad, model).distinct.len() == 16
    };
    let mut visited = vec![false; n];
    let mut quads = Vec::new();
    let mut queue = VecDeque::new();
    visited[0] = true;
    queue.push_back(0usize);
    let mut reached = 1usize;
    while let Some(cur) = queue.pop_front() {
        for next in 0..n {
            if visited[next] || !distinct_points(pairs[cur], pairs[next]) {
                continue;
            }
            visited[next] = true;
            reached += 1;
            quads.push(sorted_quad(pairs[cur], pairs[next]));
            queue.push_back(next);
        }
    }
    if reached != n {
        return Err(WitnessError::Disconnected(reached, n));
    }
    Ok(Witness {
        schema_version: 1,
        class_id: Some(class.id),
        pairs,
        quads,
    })
}

fn sorted_quad(a: (u8, u8), b: (u8, u8)) -> [u8; 4] {
    let mut q = [a.0, a.1, b.0, b.1];
    q.sort_unstable();
    q
}

/// Reconstruct the pair set of a witness given only its quadruples, using
/// the tree structure: adjacent edges share their common endpoint.
pub fn infer_pairs(quads: &[[u8; 4]]) -> Result<Vec<(u8, u8)>, WitnessError> {
    let sets: Vec<BTreeSet<u8>> = quads.iter().map(|q| q.iter().copied().collect()).collect();
    let mut vertices: BTreeSet<(u8, u8)> = BTreeSet::new();
    for i in 0..sets.len() {
        for j in (i + 1)..sets.len() {
            let common: Vec<u8> = sets[i].intersection(&sets[j]).copied().collect();
            if common.len() == 2 {
                vertices.insert((common[0], common[1]));
            }
        }
    }
    // peel leaves: a quad with one known endpoint determines the other
    loop {
        let mut grew = false;
        for (qi, q) in quads.iter().enumerate() {
            let known: Vec<(u8, u8)> = vertices
                .iter()
                .copied()
                .filter(|&(a, b)| sets[qi].contains(&a) && sets[qi].contains(&b))
                .collect();
            if known.len() == 1 {
                let rest: Vec<u8> = q
                    .iter()
                    .copied()
                    .filter(|t| *t != known[0].0 && *t != known[0].1)
                    .collect();
                if rest.len() == 2 && vertices.insert((rest[0].min(rest[1]), rest[0].max(rest[1]))) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    // every quad must now split across two disjoint known vertices
    for (qi, q) in quads.iter().enumerate() {
        if quad_split(q, &vertices).is_none() {
            return Err(WitnessError::AmbiguousPairs(format!(
                "edge {qi} has no unique decomposition"
            )));
        }
    }
    Ok(vertices.into_iter().collect())
}

fn quad_split(q: &[u8; 4], vertices: &BTreeSet<(u8, u8)>) -> Option<((u8, u8), (u8, u8))> {
    let mut found = None;
    for (i, j) in [(0usize, 1usize), (0, 2), (0, 3)] {
        let a = (q[i].min(q[j]), q[i].max(q[j]));
        let rest: Vec<u8> = (0..4).filter(|&k| k != i && k != j).map(|k| q[k]).collect();
        let b = (rest[0].min(rest[1]), rest[0].max(rest[1]));
        if vertices.contains(&a) && vertices.contains(&b) {
            if found.is_some() {
                return None; // ambiguous
            }
            found = Some((a, b));
        }
    }
    found
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct QuadCertificate {
    pub quad: [u8; 4],
    pub exact_rank: usize,
    pub kernel_dim: usize,
    pub screen_prime: u64,
    pub screen_rank: usize,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct WitnessCertificate {
    pub pairs: Vec<(u8, u8)>,
    pub quad_certs: Vec<QuadCertificate>,
    pub connected: bool,
    pub is_tree: bool,
}

/// The exact 16 x 15 monomial matrix of a quadruple's points over Q(i, a).
pub fn exact_monomial_matrix(model: &Model, quad: &[u8; 4]) -> ExactMatrix {
    let mut rows = Vec::with_capacity(16);
    for &t in quad {
        for &p in &model.thetas[t as usize].points {
            let coords = &model.points[p as usize].exact;
            let row: Vec<FieldElem> = MONO_PAIRS
                .iter()
                .map(|&(i, k)| coords[i].mul(&coords[k]))
                .collect();
            rows.push(row);
        }
    }
    ExactMatrix::from_rows(rows)
}

/// Exact verification: float-free from here down.
pub fn verify_witness(model: &Model, witness: &Witness) -> Result<WitnessCertificate, WitnessError> {
    let pairs: Vec<(u8, u8)> = if witness.pairs.is_empty() {
        infer_pairs(&witness.quads)?
    } else {
        witness.pairs.clone()
    };
    let vertex_set: BTreeSet<(u8, u8)> = pairs.iter().copied().collect();

    // graph checks: every quad is an edge between two listed pairs; the edge
    // set must connect and span all pairs
    let mut adjacency: BTreeMap<(u8, u8), Vec<(u8, u8)>> = BTreeMap::new();
    for quad in &witness.quads {
        let (a, b) = quad_split(quad, &vertex_set).ok_or(WitnessError::BadQuad(*quad))?;
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut seen: BTreeSet<(u8, u8)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    if let Some(&start) = pairs.first() {
        seen.insert(start);
        queue.push_back(start);
    }
    while let Some(v) = queue.pop_front() {
        for w in adjacency.get(&v).into_iter().flatten() {
            if seen.insert(*w) {
                queue.push_back(*w);
            }
        }
    }
    if seen.len() != pairs.len() {
        return Err(WitnessError::Disconnected(seen.len(), pairs.len()));
    }
    let is_tree = witness.quads.len() + 1 == pairs.len();

    // exact rank certificates
    let i2 = model.i2_exact_basis();
    let mut quad_certs = Vec::with_capacity(witness.quads.len());
    for quad in &witness.quads {
        if multiplicity_profile(quad, model).distinct.len() != 16 {
            return Err(WitnessError::RepeatedPoints(*quad));
        }
        let m = exact_monomial_matrix(model, quad);

        // the defining quadrics lie in the kernel of every such matrix;
        // a cheap exact sanity check on the matrix itself
        for basis in &i2 {
            let mut as_vec = vec![FieldElem::zero(); 15];
            for (k, coeff) in basis.iter().enumerate() {
                as_vec[crate::linalg::quadric::mono_index(k, k)] = coeff.clone();
            }
            for r in 0..m.rows {
                let mut acc = FieldElem::zero();
                for c in 0..m.cols {
                    if !as_vec[c].is_zero() {
                        acc = acc.add(&m.at(r, c).mul(&as_vec[c]));
                    }
                }
                if !acc.is_zero() {
                    return Err(WitnessError::IdealNotInKernel(*quad));
                }
            }
        }

        // modular screen: a lower bound on the exact rank, so screen rank 12
        // conclusively refutes the quadruple before any exact elimination
        let (screen_prime, screen_rank) = find_usable_prime(&m, 3);
        if screen_rank >= 12 {
            return Err(WitnessError::FullRank(*quad, screen_rank));
        }
        let kernel = m.exact_kernel();
        let exact_rank = 15 - kernel.len();
        if screen_rank > exact_rank {
            return Err(WitnessError::ScreenInconsistent(*quad, screen_rank, exact_rank));
        }
        // kernel dim >= 4 means a quadric beyond the 3-dimensional ideal
        if kernel.len() < 4 {
            return Err(WitnessError::FullRank(*quad, exact_rank));
        }
        quad_certs.push(QuadCertificate {
            quad: *quad,
            exact_rank,
            kernel_dim: kernel.len(),
            screen_prime,
            screen_rank,
        });
    }

    Ok(WitnessCertificate {
        pairs,
        quad_certs,
        connected: true,
        is_tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiman::Model;

    #[test]
    fn reference_witness_has_distinct_points() {
        let model = Model::shared();
        for quad in &REFERENCE_WITNESS {
            let profile = multiplicity_profile(quad, model);
            assert_eq!(profile.distinct.len(), 16, "quad {quad:?}");
        }
    }

    #[test]
    fn infer_pairs_of_reference_witness() {
        let pairs = infer_pairs(&REFERENCE_WITNESS).unwrap();
        assert_eq!(pairs.len(), 24);
        assert!(pairs.contains(&(0, 9)));
        assert!(pairs.contains(&(22, 70)));
        assert!(pairs.contains(&(20, 30)));
        // a tree on 24 vertices has 23 edges
        assert_eq!(REFERENCE_WITNESS.len() + 1, pairs.len());
    }

    #[test]
    fn first_reference_quad_is_rank_deficient() {
        let model = Model::shared();
        let m = exact_monomial_matrix(model, &[0, 9, 22, 70]);
        let kernel = m.exact_kernel();
        assert!(kernel.len() >= 4, "kernel dim {}", kernel.len());
        let (p, screen) = find_usable_prime(&m, 3);
        assert!(screen <= 11, "screen rank {screen} at prime {p}");
    }

    #[test]
    fn corrupted_quad_has_full_projected_rank() {
        let model = Model::shared();
        // swap theta 70 for 71: still 16 distinct points, but cross-class
        let quad = [0u8, 9, 22, 71];
        assert_eq!(multiplicity_profile(&quad, model).distinct.len(), 16);
        let m = exact_monomial_matrix(model, &quad);
        assert_eq!(m.exact_kernel().len(), 3);
    }
}
