//! Orbit-parallel sweep over all 4-subsets of the 160 thetas and assembly of
//! the certified 510-class pair partition.
//!
//! The sweep enumerates one canonical representative (the lexicographic
//! minimum) per symmetry orbit of 4-subsets, certifies each representative
//! with the three-stage tangency test, and expands the surviving candidates
//! into the full set A of quadruples that might sum to a bicanonical divisor.
//! Pairs {P1, P2} of disjoint theta pairs with P1 u P2 in A generate a
//! relation whose equivalence classes must come out as exactly 510 complete
//! classes with the census {15 x 48, 15 x 32, 480 x 24}; anything else is a
//! certification failure and no partition is produced.

use crate::f2::Oracle;
use crate::par::par_map;
use crate::tangency::{CandidateReason, CertifyReport, Pipeline, StageBands, StageObs, StageVerdict};
use crate::wiman::{Model, GROUP_ORDER, NUM_THETAS};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

pub const TOTAL_QUADS: u64 = 26_294_360; // C(160, 4)
pub const TOTAL_PAIRS: usize = 12_720; // C(160, 2)
pub const EXPECTED_CLASSES: usize = 510;

#[derive(Debug, thiserror::Error)]
pub enum PartitionError {
    #[error("orbit decomposition covers {0} quadruples, expected {1}")]
    OrbitCover(u64, u64),
    #[error("internal SVD certification failed on {0} quadruples")]
    SvdFailures(u64),
    #[error("relation is not transitive: {got_edges} edges vs {want_edges} required for completeness")]
    NotTransitive { got_edges: u64, want_edges: u64 },
    #[error("partition has {0} classes, expected {1}")]
    ClassCount(usize, usize),
    #[error("class size census {0:?} does not match {{48: 15, 32: 15, 24: 480}}")]
    Census(BTreeMap<usize, usize>),
    #[error("group image of a class is not a class")]
    OrbitStructure,
    #[error("class orbit census {0:?} does not match the required structure")]
    OrbitCensus(BTreeMap<(usize, usize), usize>),
    #[error("pair {0:?} belongs to no class")]
    UnassignedPair((u8, u8)),
    #[error("oracle cross-check failed: {0}")]
    Crosscheck(String),
}

/// Canonical orbit representatives of 4-subsets under the group action.
pub struct OrbitReps {
    pub reps: Vec<[u8; 4]>,
    pub orbit_sizes: Vec<u32>,
}

impl OrbitReps {
    pub fn total_covered(&self) -> u64 {
        self.orbit_sizes.iter().map(|&s| s as u64).sum()
    }
}

/// Enumerate the lexicographically minimal representative of every orbit.
pub fn orbit_representatives(model: &Model, parallel: bool) -> OrbitReps {
    let n = NUM_THETAS as u8;
    let orbit_min: Vec<u8> = (0..n)
        .map(|t| {
            (0..GROUP_ORDER)
                .map(|gi| model.theta_action[gi][t as usize])
                .min()
                .expect("nonempty orbit")
        })
        .collect();

    // the first element of a representative is minimal in its own orbit, and
    // no other element may reach below it
    let starts: Vec<u8> = (0..n).filter(|&t| orbit_min[t as usize] == t).collect();
    let mut prefixes: Vec<(u8, u8)> = Vec::new();
    for &t0 in &starts {
        for t1 in (t0 + 1)..n {
            if orbit_min[t1 as usize] >= t0 {
                prefixes.push((t0, t1));
            }
        }
    }

    let chunks: Vec<(Vec<[u8; 4]>, Vec<u32>)> = par_map(&prefixes, parallel, |&(t0, t1)| {
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let allowed: Vec<u8> = ((t1 + 1)..n)
            .filter(|&t| orbit_min[t as usize] >= t0)
            .collect();
        for (i2, &t2) in allowed.iter().enumerate() {
            for &t3 in &allowed[i2 + 1..] {
                let quad = [t0, t1, t2, t3];
                if let Some(stab) = canonical_check(model, &quad) {
                    reps.push(quad);
                    sizes.push((GROUP_ORDER / stab) as u32);
                }
            }
        }
        (reps, sizes)
    });

    let mut reps = Vec::new();
    let mut orbit_sizes = Vec::new();
    for (r, s) in chunks {
        reps.extend(r);
        orbit_sizes.extend(s);
    }
    OrbitReps { reps, orbit_sizes }
}

/// If `quad` is the lexicographic minimum of its orbit, return the stabilizer
/// order; otherwise None. Quads must be sorted ascending.
fn canonical_check(model: &Model, quad: &[u8; 4]) -> Option<usize> {
    let mut stab = 1usize; // identity
    for gi in 1..GROUP_ORDER {
        let row = &model.theta_action[gi];
        let img = sort4([
            row[quad[0] as usize],
            row[quad[1] as usize],
            row[quad[2] as usize],
            row[quad[3] as usize],
        ]);
        if img < *quad {
            return None;
        }
        if img == *quad {
            stab += 1;
        }
    }
    Some(stab)
}

#[inline]
fn sort4(mut v: [u8; 4]) -> [u8; 4] {
    // sorting network
    macro_rules! cswap {
        ($a:expr, $b:expr) => {
            if v[$a] > v[$b] {
                v.swap($a, $b);
            }
        };
    }
    cswap!(0, 2);
    cswap!(1, 3);
    cswap!(0, 1);
    cswap!(2, 3);
    cswap!(1, 2);
    v
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct VerdictCounts {
    pub certified_stage1: u64,
    pub certified_stage2: u64,
    pub certified_stage3: u64,
    pub candidate_kernel: u64,
    pub candidate_kernel_dim: u64,
    pub candidate_mult4: u64,
    pub candidate_gap: u64,
}

impl VerdictCounts {
    fn absorb(&mut self, v: StageVerdict) {
        match v {
            StageVerdict::CertifiedNon2K { stage: 1 } => self.certified_stage1 += 1,
            StageVerdict::CertifiedNon2K { stage: 2 } => self.certified_stage2 += 1,
            StageVerdict::CertifiedNon2K { .. } => self.certified_stage3 += 1,
            StageVerdict::Candidate { reason } => match reason {
                CandidateReason::KernelFound => self.candidate_kernel += 1,
                CandidateReason::KernelDimGt1 => self.candidate_kernel_dim += 1,
                CandidateReason::MultGe4 => self.candidate_mult4 += 1,
                CandidateReason::GapViolation => self.candidate_gap += 1,
            },
        }
    }

    pub fn candidates(&self) -> u64 {
        self.candidate_kernel + self.candidate_kernel_dim + self.candidate_mult4 + self.candidate_gap
    }
}

/// Aggregated observed band extremes per stage, over the whole sweep.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct AggregatedObs {
    pub matrices: u64,
    pub max_low_sigma: f64,
    pub min_high_sigma: f64,
    pub max_high_sigma: f64,
    pub max_extra_low: f64,
}

impl AggregatedObs {
    fn empty() -> Self {
        AggregatedObs {
            matrices: 0,
            max_low_sigma: 0.0,
            min_high_sigma: f64::INFINITY,
            max_high_sigma: 0.0,
            max_extra_low: 0.0,
        }
    }

    fn absorb(&mut self, obs: &StageObs) {
        self.matrices += 1;
        self.max_low_sigma = self.max_low_sigma.max(obs.max_low);
        self.min_high_sigma = self.min_high_sigma.min(obs.min_high);
        self.max_high_sigma = self.max_high_sigma.max(obs.max_high);
        self.max_extra_low = self.max_extra_low.max(obs.extra_low);
    }
}

pub struct SweepOutcome {
    pub reps: OrbitReps,
    pub verdicts: Vec<StageVerdict>,
    pub counts: VerdictCounts,
    pub stage_obs: [AggregatedObs; 3],
    pub svd_failures: u64,
}

/// Certify every orbit representative.
pub fn sweep(model: &Model, bands: StageBands, parallel: bool) -> SweepOutcome {
    let reps = orbit_representatives(model, parallel);
    let pipeline = Pipeline::new(model, bands);
    let reports: Vec<CertifyReport> =
        par_map(&reps.reps, parallel, |quad| pipeline.certify(quad));

    let mut counts = VerdictCounts::default();
    let mut stage_obs = [AggregatedObs::empty(), AggregatedObs::empty(), AggregatedObs::empty()];
    let mut svd_failures = 0u64;
    let mut verdicts = Vec::with_capacity(reports.len());
    for r in &reports {
        counts.absorb(r.verdict);
        for (slot, obs) in [&r.stage1, &r.stage2, &r.stage3].into_iter().enumerate() {
            if let Some(o) = obs {
                stage_obs[slot].absorb(o);
            }
        }
        svd_failures += r.svd_failures as u64;
        verdicts.push(r.verdict);
    }
    SweepOutcome {
        reps,
        verdicts,
        counts,
        stage_obs,
        svd_failures,
    }
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SteinerClass {
    pub id: u16,
    /// G0-orbit id of this class
    pub orbit: u16,
    pub pairs: Vec<(u8, u8)>,
}

impl SteinerClass {
    /// Family-split signature: sorted (family(t1), family(t2), count) with the
    /// two family labels themselves in sorted order.
    pub fn family_split(&self, model: &Model) -> Vec<((u8, u8), (u8, u8), u32)> {
        let mut counts: BTreeMap<((u8, u8), (u8, u8)), u32> = BTreeMap::new();
        for &(a, b) in &self.pairs {
            let fa = model.thetas[a as usize].family;
            let fb = model.thetas[b as usize].family;
            let key = if fa <= fb { (fa, fb) } else { (fb, fa) };
            *counts.entry(key).or_default() += 1;
        }
        counts.into_iter().map(|((x, y), c)| (x, y, c)).collect()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PartitionResult {
    pub classes: Vec<SteinerClass>,
    /// orbit id -> class ids
    pub orbits: Vec<Vec<u16>>,
    /// class size -> number of classes
    pub census: BTreeMap<usize, usize>,
    /// (orbit size, pairs per class) -> number of orbits
    pub orbit_census: BTreeMap<(usize, usize), usize>,
    pub counts: VerdictCounts,
    pub rep_count: u64,
    pub candidate_quads: u64,
}

fn pair_id(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let a = a as usize;
    let b = b as usize;
    a * (2 * NUM_THETAS - a - 1) / 2 + (b - a - 1)
}

fn pair_from_id(mut id: usize) -> (u8, u8) {
    for a in 0..NUM_THETAS {
        let row = NUM_THETAS - a - 1;
        if id < row {
            return (a as u8, (a + 1 + id) as u8);
        }
        id -= row;
    }
    unreachable!("pair id out of range")
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi as usize] = lo;
        true
    }
}

/// Expand candidate orbit representatives to the full set A of quadruples.
pub fn expand_candidates(model: &Model, outcome: &SweepOutcome) -> HashSet<[u8; 4]> {
    let mut a: HashSet<[u8; 4]> = HashSet::new();
    for (quad, verdict) in outcome.reps.reps.iter().zip(&outcome.verdicts) {
        if !verdict.is_candidate() {
            continue;
        }
        for gi in 0..GROUP_ORDER {
            let row = &model.theta_action[gi];
            let img = sort4([
                row[quad[0] as usize],
                row[quad[1] as usize],
                row[quad[2] as usize],
                row[quad[3] as usize],
            ]);
            a.insert(img);
        }
    }
    a
}

/// Assemble and verify the partition from sweep verdicts.
pub fn build_partition(model: &Model, outcome: &SweepOutcome) -> Result<PartitionResult, PartitionError> {
    if outcome.svd_failures > 0 {
        return Err(PartitionError::SvdFailures(outcome.svd_failures));
    }
    let covered = outcome.reps.total_covered();
    if covered != TOTAL_QUADS {
        return Err(PartitionError::OrbitCover(covered, TOTAL_QUADS));
    }

    let a_set = expand_candidates(model, outcome);
    let mut a_sorted: Vec<[u8; 4]> = a_set.iter().copied().collect();
    a_sorted.sort_unstable();

    let mut uf = UnionFind::new(TOTAL_PAIRS);
    let mut edges: u64 = 0;
    for quad in &a_sorted {
        let [a, b, c, d] = *quad;
        for (p1, p2) in [
            ((a, b), (c, d)),
            ((a, c), (b, d)),
            ((a, d), (b, c)),
        ] {
            uf.union(pair_id(p1.0, p1.1) as u32, pair_id(p2.0, p2.1) as u32);
            edges += 1;
        }
    }

    // group pairs into classes
    let mut by_root: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for id in 0..TOTAL_PAIRS {
        let root = uf.find(id as u32);
        by_root.entry(root).or_default().push(id);
    }
    if by_root.len() != EXPECTED_CLASSES {
        return Err(PartitionError::ClassCount(by_root.len(), EXPECTED_CLASSES));
    }

    // transitivity <=> completeness of each class: the edge count must equal
    // sum over classes of C(size, 2) (edges are distinct pair-of-pairs and
    // never cross classes after the union pass)
    let want_edges: u64 = by_root
        .values()
        .map(|v| (v.len() as u64) * (v.len() as u64 - 1) / 2)
        .sum();
    if edges != want_edges {
        return Err(PartitionError::NotTransitive {
            got_edges: edges,
            want_edges,
        });
    }

    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    for v in by_root.values() {
        *census.entry(v.len()).or_default() += 1;
    }
    let expected: BTreeMap<usize, usize> = [(24usize, 480usize), (32, 15), (48, 15)].into();
    if census != expected {
        return Err(PartitionError::Census(census));
    }

    // class list in canonical order (by smallest pair id)
    let mut classes: Vec<SteinerClass> = by_root
        .values()
        .enumerate()
        .map(|(i, ids)| SteinerClass {
            id: i as u16,
            orbit: u16::MAX,
            pairs: ids.iter().map(|&id| pair_from_id(id)).collect(),
        })
        .collect();

    // class id of every pair, for orbit computation
    let mut class_of_pair = vec![u16::MAX; TOTAL_PAIRS];
    for cls in &classes {
        for &(x, y) in &cls.pairs {
            class_of_pair[pair_id(x, y)] = cls.id;
        }
    }
    if let Some(id) = class_of_pair.iter().position(|&c| c == u16::MAX) {
        return Err(PartitionError::UnassignedPair(pair_from_id(id)));
    }

    // orbit decomposition of classes under the group
    let mut orbit_of_class = vec![u16::MAX; classes.len()];
    let mut orbits: Vec<Vec<u16>> = Vec::new();
    for cid in 0..classes.len() as u16 {
        if orbit_of_class[cid as usize] != u16::MAX {
            continue;
        }
        let orbit_id = orbits.len() as u16;
        let mut members = BTreeSet::new();
        let mut stack = vec![cid];
        orbit_of_class[cid as usize] = orbit_id;
        members.insert(cid);
        while let Some(c) = stack.pop() {
            for gi in 0..GROUP_ORDER {
                let row = &model.theta_action[gi];
                // image of the class: verify it is exactly another class
                let first = classes[c as usize].pairs[0];
                let img_first = pair_id(row[first.0 as usize], row[first.1 as usize]);
                let target = class_of_pair[img_first];
                let tgt_class = &classes[target as usize];
                if tgt_class.pairs.len() != classes[c as usize].pairs.len() {
                    return Err(PartitionError::OrbitStructure);
                }
                let tgt_set: HashSet<usize> =
                    tgt_class.pairs.iter().map(|&(x, y)| pair_id(x, y)).collect();
                for &(x, y) in &classes[c as usize].pairs {
                    let img = pair_id(row[x as usize], row[y as usize]);
                    if !tgt_set.contains(&img) {
                        return Err(PartitionError::OrbitStructure);
                    }
                }
                if orbit_of_class[target as usize] == u16::MAX {
                    orbit_of_class[target as usize] = orbit_id;
                    members.insert(target);
                    stack.push(target);
                }
            }
        }
        orbits.push(members.into_iter().collect());
    }
    for cls in classes.iter_mut() {
        cls.orbit = orbit_of_class[cls.id as usize];
    }

    let mut orbit_census: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for orbit in &orbits {
        let size = orbit.len();
        let pairs = classes[orbit[0] as usize].pairs.len();
        *orbit_census.entry((size, pairs)).or_default() += 1;
    }
    let expected_orbits: BTreeMap<(usize, usize), usize> =
        [((5usize, 48usize), 3usize), ((5, 32), 3), ((40, 24), 12)].into();
    if orbit_census != expected_orbits {
        return Err(PartitionError::OrbitCensus(orbit_census));
    }

    Ok(PartitionResult {
        classes,
        orbits,
        census,
        orbit_census,
        counts: outcome.counts,
        rep_count: outcome.reps.reps.len() as u64,
        candidate_quads: a_sorted.len() as u64,
    })
}

/// Cross-check the numerical partition against the GF(2) oracle.
#[derive(Debug, serde::Serialize)]
pub struct CrosscheckReport {
    pub within_family_pairs: u32,
    pub cross_family_pairs: u32,
    pub classes_matched: usize,
}

pub fn crosscheck_f2(
    model: &Model,
    partition: &PartitionResult,
    oracle: &Oracle,
) -> Result<CrosscheckReport, PartitionError> {
    let fail = |s: String| Err(PartitionError::Crosscheck(s));

    // census vs prediction
    let prediction = oracle.predict_partition_table();
    for row in &prediction.rows {
        let have = partition
            .census
            .get(&(row.pairs_per_class as usize))
            .copied()
            .unwrap_or(0);
        if have != row.class_count as usize {
            return fail(format!(
                "{} classes of {} pairs, oracle predicts {}",
                have, row.pairs_per_class, row.class_count
            ));
        }
        let orbits = partition
            .orbit_census
            .get(&(row.orbit_size as usize, row.pairs_per_class as usize))
            .copied()
            .unwrap_or(0);
        if orbits != row.orbit_count as usize {
            return fail(format!(
                "{} orbits of size {} with {}-pair classes, oracle predicts {}",
                orbits, row.orbit_size, row.pairs_per_class, row.orbit_count
            ));
        }
    }

    // family-split signatures must match the oracle's incidence multisets
    let mut class_sigs: Vec<Vec<((u8, u8), (u8, u8), u32)>> = partition
        .classes
        .iter()
        .map(|c| c.family_split(model))
        .collect();
    let mut oracle_sigs: Vec<Vec<((u8, u8), (u8, u8), u32)>> = Vec::new();
    let all_mu = prediction
        .mu48
        .iter()
        .chain(&prediction.mu32)
        .chain(&prediction.mu24);
    for &mu in all_mu {
        let mut sig: Vec<((u8, u8), (u8, u8), u32)> = oracle
            .family_incidence(mu)
            .into_iter()
            .map(|((fa, fb), c)| {
                let la = oracle.families[fa as usize].label;
                let lb = oracle.families[fb as usize].label;
                let (x, y) = if la <= lb { (la, lb) } else { (lb, la) };
                (x, y, c)
            })
            .collect();
        sig.sort_unstable();
        oracle_sigs.push(sig);
    }
    class_sigs.sort_unstable();
    oracle_sigs.sort_unstable();
    if class_sigs != oracle_sigs {
        return fail("family-split signature multisets differ".to_string());
    }

    let mut within = 0u32;
    let mut cross = 0u32;
    for cls in &partition.classes {
        for &(x, y) in &cls.pairs {
            if model.thetas[x as usize].family == model.thetas[y as usize].family {
                within += 1;
            } else {
                cross += 1;
            }
        }
    }
    if within != 1200 || cross != 11520 {
        return fail(format!(
            "within/cross family pair totals ({within}, {cross}) != (1200, 11520)"
        ));
    }

    Ok(CrosscheckReport {
        within_family_pairs: within,
        cross_family_pairs: cross,
        classes_matched: class_sigs.len(),
    })
}

/// Serializable artifact: the full partition plus run statistics.
#[derive(serde::Serialize)]
pub struct PartitionArtifact<'a> {
    pub schema_version: u32,
    pub bands: ArtifactBands,
    pub rep_count: u64,
    pub candidate_quads: u64,
    pub verdicts: &'a VerdictCounts,
    pub stage_observations: &'a [AggregatedObs; 3],
    pub census: &'a BTreeMap<usize, usize>,
    pub orbit_census: Vec<(usize, usize, usize)>,
    pub classes: Vec<ClassRecord>,
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct ArtifactBands {
    pub stage1: [f64; 3],
    pub stage2: [f64; 3],
    pub stage3: [f64; 3],
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct ClassRecord {
    pub id: u16,
    pub orbit: u16,
    pub pairs: Vec<[u8; 2]>,
}

pub fn to_artifact<'a>(
    result: &'a PartitionResult,
    outcome: &'a SweepOutcome,
    bands: &StageBands,
) -> PartitionArtifact<'a> {
    PartitionArtifact {
        schema_version: 1,
        bands: ArtifactBands {
            stage1: [bands.stage1.low_max, bands.stage1.high_min, bands.stage1.high_max],
            stage2: [bands.stage2.low_max, bands.stage2.high_min, bands.stage2.high_max],
            stage3: [bands.stage3.low_max, bands.stage3.high_min, bands.stage3.high_max],
        },
        rep_count: result.rep_count,
        candidate_quads: result.candidate_quads,
        verdicts: &result.counts,
        stage_observations: &outcome.stage_obs,
        census: &result.census,
        orbit_census: result
            .orbit_census
            .iter()
            .map(|(&(s, p), &c)| (s, p, c))
            .collect(),
        classes: result
            .classes
            .iter()
            .map(|c| ClassRecord {
                id: c.id,
                orbit: c.orbit,
                pairs: c.pairs.iter().map(|&(a, b)| [a, b]).collect(),
            })
            .collect(),
    }
}

/// Reload a partition from its JSON artifact (for the downstream consumers).
#[derive(serde::Deserialize)]
pub struct PartitionArtifactOwned {
    pub schema_version: u32,
    pub bands: ArtifactBands,
    pub rep_count: u64,
    pub candidate_quads: u64,
    pub classes: Vec<ClassRecord>,
}

impl PartitionArtifactOwned {
    pub fn classes(&self) -> Vec<SteinerClass> {
        self.classes
            .iter()
            .map(|c| SteinerClass {
                id: c.id,
                orbit: c.orbit,
                pairs: c.pairs.iter().map(|p| (p[0], p[1])).collect(),
            })
            .collect()
    }
}

/// Sampled invariance of candidate membership under the group action:
/// certify(g . quad) must agree with certify(quad) as an A-membership claim.
pub fn sample_verdict_invariance(
    model: &Model,
    bands: StageBands,
    outcome: &SweepOutcome,
    samples: usize,
    seed: u64,
) -> Result<(), String> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pipeline = Pipeline::new(model, bands);
    for _ in 0..samples {
        let ri = rng.gen_range(0..outcome.reps.reps.len());
        let gi = rng.gen_range(0..GROUP_ORDER);
        let quad = outcome.reps.reps[ri];
        let row = &model.theta_action[gi];
        let img = sort4([
            row[quad[0] as usize],
            row[quad[1] as usize],
            row[quad[2] as usize],
            row[quad[3] as usize],
        ]);
        let v = pipeline.certify(&img).verdict;
        if v.is_candidate() != outcome.verdicts[ri].is_candidate() {
            return Err(format!(
                "verdict not invariant: rep {quad:?} vs image {img:?} under element {gi}"
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_id_round_trip() {
        let mut seen = vec![false; TOTAL_PAIRS];
        for a in 0..NUM_THETAS as u8 {
            for b in (a + 1)..NUM_THETAS as u8 {
                let id = pair_id(a, b);
                assert!(!seen[id]);
                seen[id] = true;
                assert_eq!(pair_from_id(id), (a, b));
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn sort4_works() {
        assert_eq!(sort4([3, 1, 2, 0]), [0, 1, 2, 3]);
        assert_eq!(sort4([1, 1, 0, 2]), [0, 1, 1, 2]);
    }

    #[test]
    fn binomial_total() {
        // C(160, 4)
        let n: u64 = 160;
        assert_eq!(n * (n - 1) * (n - 2) * (n - 3) / 24, TOTAL_QUADS);
    }
}
