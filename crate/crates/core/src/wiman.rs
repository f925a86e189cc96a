//! The Wiman curve W160: its defining quadrics, the 40 special points, the
//! 160 odd theta characteristics, and the order-80 symmetry group action.
//!
//! The canonical model is the intersection of three diagonal quadrics in P^4,
//!   Q_A = sum x_j^2,  Q_B = sum z^j x_j^2,  Q_C = sum z^-j x_j^2,  z = e^(2 pi i/5).
//! Every coordinate of the 40 special points is 0 or a sign times one of
//! {1, i, a, ia} with a = 1/sqrt(phi), so points are kept in symbolic form
//! alongside their exact field coordinates and certified float embeddings.

use crate::field::{FieldElem, Rat};
use num_bigint::BigInt;
use num_complex::Complex64;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

pub type C64 = Complex64;

pub const NUM_POINTS: usize = 40;
pub const NUM_THETAS: usize = 160;
pub const GROUP_ORDER: usize = 80;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("decoded point {0} does not match any table point")]
    UnknownPoint(String),
    #[error("point {0} has {1} zero coordinates, expected exactly 1")]
    ZeroCoordCount(u8, usize),
    #[error("theta {0} image under group element {1} is not a table entry")]
    ThetaImageMissing(u8, usize),
    #[error("generated theta orbit disagrees with the enumeration table: {0}")]
    TableMismatch(String),
    #[error("family structure violated: {0}")]
    FamilyStructure(String),
    #[error("curve membership check failed: {0}")]
    CurveMembership(String),
}

/// One symbolic coordinate value: zero, or a sign times a unit from
/// {1, i, a, ia}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Coord {
    Zero,
    Val { unit: Unit, neg: bool },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Unit {
    One,
    I,
    A,
    Ia,
}

impl Coord {
    pub fn val(unit: Unit, sign: i8) -> Self {
        Coord::Val {
            unit,
            neg: sign < 0,
        }
    }

    pub fn negated(self) -> Self {
        match self {
            Coord::Zero => Coord::Zero,
            Coord::Val { unit, neg } => Coord::Val { unit, neg: !neg },
        }
    }

    /// Multiply by the imaginary unit; the symbolic value set is closed
    /// under this, which is what makes projective lookup exact.
    pub fn times_i(self) -> Self {
        match self {
            Coord::Zero => Coord::Zero,
            Coord::Val { unit, neg } => match unit {
                Unit::One => Coord::Val { unit: Unit::I, neg },
                Unit::I => Coord::Val { unit: Unit::One, neg: !neg },
                Unit::A => Coord::Val { unit: Unit::Ia, neg },
                Unit::Ia => Coord::Val { unit: Unit::A, neg: !neg },
            },
        }
    }

    pub fn is_zero(self) -> bool {
        self == Coord::Zero
    }

    pub fn to_field(self) -> FieldElem {
        match self {
            Coord::Zero => FieldElem::zero(),
            Coord::Val { unit, neg } => {
                let base = match unit {
                    Unit::One => FieldElem::one(),
                    Unit::I => FieldElem::gen_i(),
                    Unit::A => FieldElem::gen_a(),
                    Unit::Ia => FieldElem::gen_i().mul(&FieldElem::gen_a()),
                };
                if neg {
                    base.neg()
                } else {
                    base
                }
            }
        }
    }
}

/// A point of P^4 with all five coordinates symbolic.
pub type SymPoint = [Coord; 5];

pub fn sym_negated(p: &SymPoint) -> SymPoint {
    std::array::from_fn(|k| p[k].negated())
}

/// Decode the special point with index J in 0..40.
///
/// With q, j the quotient and remainder of J by 8 and j = j0 + 2 j1 + 4 j2,
/// the point is the right rotation by q of
///   ( i(1-2 j0) a, (1-2 j1), i(1-2 j2), a, 0 ).
pub fn decode_point(j_index: usize) -> SymPoint {
    assert!(j_index < NUM_POINTS, "point index out of range");
    let q = j_index / 8;
    let j = j_index % 8;
    let s0 = if j & 1 == 0 { 1 } else { -1 };
    let s1 = if j & 2 == 0 { 1 } else { -1 };
    let s2 = if j & 4 == 0 { 1 } else { -1 };
    let base = [
        Coord::val(Unit::Ia, s0),
        Coord::val(Unit::One, s1),
        Coord::val(Unit::I, s2),
        Coord::val(Unit::A, 1),
        Coord::Zero,
    ];
    let mut out = [Coord::Zero; 5];
    for (k, c) in base.into_iter().enumerate() {
        out[(k + q) % 5] = c;
    }
    out
}

/// Element of the order-80 group G0: coordinate rotation by `rot` followed by
/// sign flips on the coordinates in `signs` (5 bits, modulo the global flip,
/// canonicalized so that bit 0 is clear).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    pub rot: u8,
    pub signs: u8,
}

fn rot5(s: u8, r: u8) -> u8 {
    let r = r % 5;
    if r == 0 {
        return s & 0x1f;
    }
    ((s << r) | (s >> (5 - r))) & 0x1f
}

fn canon_signs(s: u8) -> u8 {
    let s = s & 0x1f;
    if s & 1 == 1 {
        s ^ 0x1f
    } else {
        s
    }
}

impl GroupElement {
    pub fn new(rot: u8, signs: u8) -> Self {
        GroupElement {
            rot: rot % 5,
            signs: canon_signs(signs),
        }
    }

    pub fn identity() -> Self {
        GroupElement { rot: 0, signs: 0 }
    }

    /// `self * other` acts as `other` first, then `self`.
    pub fn mul(self, other: Self) -> Self {
        GroupElement::new(
            (self.rot + other.rot) % 5,
            self.signs ^ rot5(other.signs, self.rot),
        )
    }

    pub fn inv(self) -> Self {
        let r = (5 - self.rot) % 5;
        GroupElement::new(r, rot5(self.signs, r))
    }

    pub fn act_sym(self, p: &SymPoint) -> SymPoint {
        std::array::from_fn(|k| {
            let src = (k + 5 - self.rot as usize) % 5;
            let c = p[src];
            if self.signs >> k & 1 == 1 {
                c.negated()
            } else {
                c
            }
        })
    }

    /// All 80 elements in a fixed order: index = 16 * rot + signs/2.
    pub fn all() -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(GROUP_ORDER);
        for rot in 0..5u8 {
            for m in 0..16u8 {
                out.push(GroupElement { rot, signs: m << 1 });
            }
        }
        out
    }

    pub fn index(self) -> usize {
        self.rot as usize * 16 + (self.signs >> 1) as usize
    }
}

/// The enumeration of the 160 odd theta characteristics as 4-sets of point
/// indices. This table is the contract; the model builder regenerates it from
/// the two seed divisor shapes and fails hard on any disagreement.
pub const THETA_TABLE: [[u8; 4]; NUM_THETAS] = [
    [8, 12, 37, 39],
    [9, 13, 33, 35],
    [10, 14, 32, 34],
    [11, 15, 36, 38],
    [5, 7, 16, 20],
    [1, 3, 17, 21],
    [0, 2, 18, 22],
    [4, 6, 19, 23],
    [13, 15, 24, 28],
    [9, 11, 25, 29],
    [8, 10, 26, 30],
    [12, 14, 27, 31],
    [21, 23, 32, 36],
    [17, 19, 33, 37],
    [16, 18, 34, 38],
    [20, 22, 35, 39],
    [0, 4, 29, 31],
    [1, 5, 25, 27],
    [2, 6, 24, 26],
    [3, 7, 28, 30],
    [8, 12, 36, 38],
    [9, 13, 32, 34],
    [10, 14, 33, 35],
    [11, 15, 37, 39],
    [4, 6, 16, 20],
    [0, 2, 17, 21],
    [1, 3, 18, 22],
    [5, 7, 19, 23],
    [12, 14, 24, 28],
    [8, 10, 25, 29],
    [9, 11, 26, 30],
    [13, 15, 27, 31],
    [20, 22, 32, 36],
    [16, 18, 33, 37],
    [17, 19, 34, 38],
    [21, 23, 35, 39],
    [0, 4, 28, 30],
    [1, 5, 24, 26],
    [2, 6, 25, 27],
    [3, 7, 29, 31],
    [8, 12, 33, 35],
    [9, 13, 37, 39],
    [10, 14, 36, 38],
    [11, 15, 32, 34],
    [1, 3, 16, 20],
    [5, 7, 17, 21],
    [4, 6, 18, 22],
    [0, 2, 19, 23],
    [9, 11, 24, 28],
    [13, 15, 25, 29],
    [12, 14, 26, 30],
    [8, 10, 27, 31],
    [17, 19, 32, 36],
    [21, 23, 33, 37],
    [20, 22, 34, 38],
    [16, 18, 35, 39],
    [0, 4, 25, 27],
    [1, 5, 29, 31],
    [2, 6, 28, 30],
    [3, 7, 24, 26],
    [8, 12, 32, 34],
    [9, 13, 36, 38],
    [10, 14, 37, 39],
    [11, 15, 33, 35],
    [0, 2, 16, 20],
    [4, 6, 17, 21],
    [5, 7, 18, 22],
    [1, 3, 19, 23],
    [8, 10, 24, 28],
    [12, 14, 25, 29],
    [13, 15, 26, 30],
    [9, 11, 27, 31],
    [16, 18, 32, 36],
    [20, 22, 33, 37],
    [21, 23, 34, 38],
    [17, 19, 35, 39],
    [0, 4, 24, 26],
    [1, 5, 28, 30],
    [2, 6, 29, 31],
    [3, 7, 25, 27],
    [24, 25, 34, 37],
    [28, 29, 32, 39],
    [30, 31, 33, 38],
    [26, 27, 35, 36],
    [2, 5, 32, 33],
    [0, 7, 36, 37],
    [1, 6, 38, 39],
    [3, 4, 34, 35],
    [0, 1, 10, 13],
    [4, 5, 8, 15],
    [6, 7, 9, 14],
    [2, 3, 11, 12],
    [8, 9, 18, 21],
    [12, 13, 16, 23],
    [14, 15, 17, 22],
    [10, 11, 19, 20],
    [16, 17, 26, 29],
    [20, 21, 24, 31],
    [22, 23, 25, 30],
    [18, 19, 27, 28],
    [24, 25, 35, 36],
    [28, 29, 33, 38],
    [30, 31, 32, 39],
    [26, 27, 34, 37],
    [3, 4, 32, 33],
    [1, 6, 36, 37],
    [0, 7, 38, 39],
    [2, 5, 34, 35],
    [0, 1, 11, 12],
    [4, 5, 9, 14],
    [6, 7, 8, 15],
    [2, 3, 10, 13],
    [8, 9, 19, 20],
    [12, 13, 17, 22],
    [14, 15, 16, 23],
    [10, 11, 18, 21],
    [16, 17, 27, 28],
    [20, 21, 25, 30],
    [22, 23, 24, 31],
    [18, 19, 26, 29],
    [24, 25, 33, 38],
    [28, 29, 35, 36],
    [30, 31, 34, 37],
    [26, 27, 32, 39],
    [1, 6, 32, 33],
    [3, 4, 36, 37],
    [2, 5, 38, 39],
    [0, 7, 34, 35],
    [0, 1, 9, 14],
    [4, 5, 11, 12],
    [6, 7, 10, 13],
    [2, 3, 8, 15],
    [8, 9, 17, 22],
    [12, 13, 19, 20],
    [14, 15, 18, 21],
    [10, 11, 16, 23],
    [16, 17, 25, 30],
    [20, 21, 27, 28],
    [22, 23, 26, 29],
    [18, 19, 24, 31],
    [24, 25, 32, 39],
    [28, 29, 34, 37],
    [30, 31, 35, 36],
    [26, 27, 33, 38],
    [0, 7, 32, 33],
    [2, 5, 36, 37],
    [3, 4, 38, 39],
    [1, 6, 34, 35],
    [0, 1, 8, 15],
    [4, 5, 10, 13],
    [6, 7, 11, 12],
    [2, 3, 9, 14],
    [8, 9, 16, 23],
    [12, 13, 18, 21],
    [14, 15, 19, 20],
    [10, 11, 17, 22],
    [16, 17, 24, 31],
    [20, 21, 26, 29],
    [22, 23, 27, 28],
    [18, 19, 25, 30],
];

#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub index: u8,
    pub sym: SymPoint,
    pub exact: [FieldElem; 5],
    pub floats: [C64; 5],
    pub coord_bounds: [f64; 5],
    /// Euclidean bound on the distance between exact and float coordinates.
    pub eps: f64,
    pub zero_coord: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaChar {
    pub index: u8,
    pub points: [u8; 4],
    /// The unordered pair of zero coordinates carried by the four points.
    pub family: (u8, u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadricLabel {
    A,
    B,
    C,
    Q(u8),
    QPrime(u8),
}

/// A diagonal quadric sum c_j x_j^2. Q_B and Q_C have coefficients involving
/// the fifth root of unity, which lies outside Q(i, a); for those two the
/// exact side is carried by the rational-coefficient combinations returned by
/// [`Model::i2_exact_basis`], which span the same pencil together with Q_A.
#[derive(Clone, Debug)]
pub struct DiagQuadric {
    pub label: QuadricLabel,
    pub floats: [C64; 5],
    pub exact: Option<[FieldElem; 5]>,
}

pub struct Model {
    pub points: Vec<CurvePoint>,
    pub thetas: Vec<ThetaChar>,
    pub elements: Vec<GroupElement>,
    /// point_action[g][j] = index of g . pt_j
    pub point_action: Vec<[u8; NUM_POINTS]>,
    /// theta_action[g][t] = index of g . theta_t
    pub theta_action: Vec<[u8; NUM_THETAS]>,
    /// the ten families keyed by zero-coordinate pair, each with 16 members
    pub families: HashMap<(u8, u8), Vec<u8>>,
    pub quadrics: Vec<DiagQuadric>,
    theta_index: HashMap<[u8; 4], u8>,
    /// max over points of ||p_float|| + eps: certified upper bound on any
    /// representative norm
    pub point_norm_upper: f64,
    /// max over points of eps
    pub point_eps: f64,
}

static SHARED: OnceLock<Model> = OnceLock::new();

impl Model {
    /// The process-wide model; panics if construction fails (construction is
    /// deterministic, so a failure is a build defect, not an input problem).
    pub fn shared() -> &'static Model {
        SHARED.get_or_init(|| Model::new().expect("model construction"))
    }

    pub fn new() -> Result<Model, ModelError> {
        let points = build_points()?;
        let point_sym_index = sym_index(&points);
        let elements = GroupElement::all();

        let mut point_action = Vec::with_capacity(GROUP_ORDER);
        for g in &elements {
            let mut row = [0u8; NUM_POINTS];
            for p in &points {
                let img = g.act_sym(&p.sym);
                let idx = lookup_sym(&point_sym_index, &img)
                    .ok_or_else(|| ModelError::UnknownPoint(format!("{img:?}")))?;
                row[p.index as usize] = idx;
            }
            point_action.push(row);
        }

        let mut theta_index = HashMap::new();
        for (t, pts) in THETA_TABLE.iter().enumerate() {
            let mut key = *pts;
            key.sort_unstable();
            theta_index.insert(key, t as u8);
        }

        let mut thetas = Vec::with_capacity(NUM_THETAS);
        for (t, pts) in THETA_TABLE.iter().enumerate() {
            let family = family_of(&points, pts).map_err(|e| {
                ModelError::FamilyStructure(format!("theta {t}: {e}"))
            })?;
            thetas.push(ThetaChar {
                index: t as u8,
                points: *pts,
                family,
            });
        }

        let mut theta_action = Vec::with_capacity(GROUP_ORDER);
        for (gi, _) in elements.iter().enumerate() {
            let mut row = [0u8; NUM_THETAS];
            for t in 0..NUM_THETAS {
                let mut img: [u8; 4] =
                    std::array::from_fn(|k| point_action[gi][THETA_TABLE[t][k] as usize]);
                img.sort_unstable();
                row[t] = *theta_index
                    .get(&img)
                    .ok_or(ModelError::ThetaImageMissing(t as u8, gi))?;
            }
            theta_action.push(row);
        }

        let mut families: HashMap<(u8, u8), Vec<u8>> = HashMap::new();
        for th in &thetas {
            families.entry(th.family).or_default().push(th.index);
        }
        if families.len() != 10 || families.values().any(|v| v.len() != 16) {
            return Err(ModelError::FamilyStructure(format!(
                "expected 10 families of 16, got sizes {:?}",
                families.values().map(|v| v.len()).collect::<Vec<_>>()
            )));
        }

        let point_eps = points.iter().map(|p| p.eps).fold(0.0, f64::max);
        let point_norm_upper = points
            .iter()
            .map(|p| p.floats.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() + p.eps)
            .fold(0.0, f64::max);

        let model = Model {
            quadrics: build_quadrics(),
            points,
            thetas,
            elements,
            point_action,
            theta_action,
            families,
            theta_index,
            point_norm_upper,
            point_eps,
        };
        model.verify_enumeration()?;
        Ok(model)
    }

    pub fn theta_of_points(&self, pts: &[u8; 4]) -> Option<u8> {
        let mut key = *pts;
        key.sort_unstable();
        self.theta_index.get(&key).copied()
    }

    pub fn act_on_point(&self, g: GroupElement, j: u8) -> u8 {
        self.point_action[g.index()][j as usize]
    }

    pub fn act_on_theta(&self, g: GroupElement, t: u8) -> u8 {
        self.theta_action[g.index()][t as usize]
    }

    /// Rational-coefficient diagonal quadrics spanning I2(W) over C:
    /// Q_A, (Q_B + Q_C), and (Q_B - Q_C)/(2 i sin 72deg). All vanish exactly
    /// on the 40 points.
    pub fn i2_exact_basis(&self) -> [[FieldElem; 5]; 3] {
        let one = FieldElem::one;
        let a2 = || FieldElem::gen_a().mul(&FieldElem::gen_a());
        let qa = [one(), one(), one(), one(), one()];
        // z^j + z^-j = 2 cos(2 pi j / 5): (2, phi-1, -phi, -phi, phi-1), phi-1 = a^2
        let s = [
            FieldElem::from_int(2),
            a2(),
            FieldElem::phi().neg(),
            FieldElem::phi().neg(),
            a2(),
        ];
        // (z^j - z^-j)/(2 i sin 72): (0, 1, phi-1, -(phi-1), -1)
        let t = [
            FieldElem::zero(),
            one(),
            a2(),
            a2().neg(),
            one().neg(),
        ];
        [qa, s, t]
    }

    /// Exact on-curve check for every point (zero tolerance), plus float
    /// residuals for all thirteen diagonal quadrics.
    pub fn verify_points_on_curve(&self) -> Result<CurveCheckReport, ModelError> {
        let mut max_float_residual: f64 = 0.0;
        let exact_basis = self.i2_exact_basis();
        let mut exact_quads: Vec<[FieldElem; 5]> = exact_basis.to_vec();
        for q in &self.quadrics {
            if let Some(e) = &q.exact {
                exact_quads.push(e.clone());
            }
        }
        for p in &self.points {
            for q in &exact_quads {
                let mut acc = FieldElem::zero();
                for k in 0..5 {
                    acc = acc.add(&q[k].mul(&p.exact[k]).mul(&p.exact[k]));
                }
                if !acc.is_zero() {
                    return Err(ModelError::CurveMembership(format!(
                        "exact quadric nonzero at point {}",
                        p.index
                    )));
                }
            }
            for q in &self.quadrics {
                let val: C64 = (0..5).map(|k| q.floats[k] * p.floats[k] * p.floats[k]).sum();
                let r = val.norm();
                max_float_residual = max_float_residual.max(r);
                if r > 1e-14 {
                    return Err(ModelError::CurveMembership(format!(
                        "float residual {r:.3e} at point {} on {:?}",
                        p.index, q.label
                    )));
                }
            }
        }
        Ok(CurveCheckReport { max_float_residual })
    }

    /// Regenerate the theta enumeration from the two seed divisor shapes and
    /// check it against the table (hard failure on mismatch).
    fn verify_enumeration(&self) -> Result<(), ModelError> {
        let point_sym_index = sym_index(&self.points);
        let to_set = |syms: [SymPoint; 4]| -> Result<[u8; 4], ModelError> {
            let mut out = [0u8; 4];
            for (k, s) in syms.iter().enumerate() {
                out[k] = lookup_sym(&point_sym_index, s)
                    .ok_or_else(|| ModelError::UnknownPoint(format!("{s:?}")))?;
            }
            out.sort_unstable();
            Ok(out)
        };

        let mut closures: Vec<HashSet<[u8; 4]>> = Vec::new();
        for seeds in [seed_divisors_first(), seed_divisors_second()] {
            let mut seen: HashSet<[u8; 4]> = HashSet::new();
            let mut queue: VecDeque<[u8; 4]> = VecDeque::new();
            for s in seeds {
                let set = to_set(s)?;
                if seen.insert(set) {
                    queue.push_back(set);
                }
            }
            while let Some(q) = queue.pop_front() {
                for (gi, _) in self.elements.iter().enumerate() {
                    let mut img: [u8; 4] =
                        std::array::from_fn(|k| self.point_action[gi][q[k] as usize]);
                    img.sort_unstable();
                    if seen.insert(img) {
                        queue.push_back(img);
                    }
                }
            }
            closures.push(seen);
        }

        let block_a: HashSet<[u8; 4]> = (0..80).map(|t| sorted4(THETA_TABLE[t])).collect();
        let block_b: HashSet<[u8; 4]> = (80..160).map(|t| sorted4(THETA_TABLE[t])).collect();
        let ok_direct = closures[0] == block_a && closures[1] == block_b;
        let ok_swapped = closures[0] == block_b && closures[1] == block_a;
        if !(ok_direct || ok_swapped) {
            return Err(ModelError::TableMismatch(format!(
                "seed closures of sizes {} and {} do not reproduce the table blocks",
                closures[0].len(),
                closures[1].len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CurveCheckReport {
    pub max_float_residual: f64,
}

fn sorted4(mut x: [u8; 4]) -> [u8; 4] {
    x.sort_unstable();
    x
}

fn sym_index(points: &[CurvePoint]) -> HashMap<SymPoint, u8> {
    let mut m = HashMap::new();
    for p in points {
        m.insert(p.sym, p.index);
    }
    m
}

/// Look up a symbolic point projectively: representatives may differ by a
/// scalar in {1, -1, i, -i}.
fn lookup_sym(index: &HashMap<SymPoint, u8>, sym: &SymPoint) -> Option<u8> {
    let i_scaled: SymPoint = std::array::from_fn(|k| sym[k].times_i());
    index
        .get(sym)
        .or_else(|| index.get(&sym_negated(sym)))
        .or_else(|| index.get(&i_scaled))
        .or_else(|| index.get(&sym_negated(&i_scaled)))
        .copied()
}

fn family_of(points: &[CurvePoint], pts: &[u8; 4]) -> Result<(u8, u8), String> {
    let mut counts: HashMap<u8, usize> = HashMap::new();
    for &p in pts {
        *counts.entry(points[p as usize].zero_coord).or_default() += 1;
    }
    let mut keys: Vec<u8> = counts.keys().copied().collect();
    keys.sort_unstable();
    if keys.len() != 2 || counts.values().any(|&c| c != 2) {
        return Err(format!("zero-coordinate profile {counts:?}"));
    }
    Ok((keys[0], keys[1]))
}

fn build_points() -> Result<Vec<CurvePoint>, ModelError> {
    let mut out = Vec::with_capacity(NUM_POINTS);
    for j in 0..NUM_POINTS {
        let sym = decode_point(j);
        let zero_positions: Vec<usize> = (0..5).filter(|&k| sym[k].is_zero()).collect();
        if zero_positions.len() != 1 {
            return Err(ModelError::ZeroCoordCount(j as u8, zero_positions.len()));
        }
        let exact: [FieldElem; 5] = std::array::from_fn(|k| sym[k].to_field());
        let mut floats = [C64::new(0.0, 0.0); 5];
        let mut coord_bounds = [0.0f64; 5];
        for k in 0..5 {
            let e = exact[k].embed_float();
            floats[k] = e.value;
            coord_bounds[k] = e.bound;
        }
        let eps = coord_bounds.iter().sum();
        out.push(CurvePoint {
            index: j as u8,
            sym,
            exact,
            floats,
            coord_bounds,
            eps,
            zero_coord: zero_positions[0] as u8,
        });
    }
    Ok(out)
}

/// Seed divisors, first displayed shape: sign choices e1..e4 over
///   (i, e1 a, 0,  i a, e2), (i, e1 a, 0, -i a, e2),
///   (i, e3, i a, 0, e4 a), (i, e3, -i a, 0, e4 a).
fn seed_divisors_first() -> Vec<[SymPoint; 4]> {
    let mut out = Vec::with_capacity(16);
    for mask in 0..16u8 {
        let e = |b: u8| if mask >> b & 1 == 0 { 1i8 } else { -1i8 };
        let (e1, e2, e3, e4) = (e(0), e(1), e(2), e(3));
        out.push([
            [
                Coord::val(Unit::I, 1),
                Coord::val(Unit::A, e1),
                Coord::Zero,
                Coord::val(Unit::Ia, 1),
                Coord::val(Unit::One, e2),
            ],
            [
                Coord::val(Unit::I, 1),
                Coord::val(Unit::A, e1),
                Coord::Zero,
                Coord::val(Unit::Ia, -1),
                Coord::val(Unit::One, e2),
            ],
            [
                Coord::val(Unit::I, 1),
                Coord::val(Unit::One, e3),
                Coord::val(Unit::Ia, 1),
                Coord::Zero,
                Coord::val(Unit::A, e4),
            ],
            [
                Coord::val(Unit::I, 1),
                Coord::val(Unit::One, e3),
                Coord::val(Unit::Ia, -1),
                Coord::Zero,
                Coord::val(Unit::A, e4),
            ],
        ]);
    }
    out
}

/// Seed divisors, second displayed shape:
///   (0, i a, e1,  i, e2 a), (0, i a, e1, -i, e2 a),
///   (i, e3, i a, 0, e4 a), (-i, e3, i a, 0, e4 a).
fn seed_divisors_second() -> Vec<[SymPoint; 4]> {
    let mut out = Vec::with_capacity(16);
    for mask in 0..16u8 {
        let e = |b: u8| if mask >> b & 1 == 0 { 1i8 } else { -1i8 };
        let (e1, e2, e3, e4) = (e(0), e(1), e(2), e(3));
        out.push([
            [
                Coord::Zero,
                Coord::val(Unit::Ia, 1),
                Coord::val(Unit::One, e1),
                Coord::val(Unit::I, 1),
                Coord::val(Unit::A, e2),
            ],
            [
                Coord::Zero,
                Coord::val(Unit::Ia, 1),
                Coord::val(Unit::One, e1),
                Coord::val(Unit::I, -1),
                Coord::val(Unit::A, e2),
            ],
            [
                Coord::val(Unit::I, 1),
                Coord::val(Unit::One, e3),
                Coord::val(Unit::Ia, 1),
                Coord::Zero,
                Coord::val(Unit::A, e4),
            ],
            [
                Coord::val(Unit::I, -1),
                Coord::val(Unit::One, e3),
                Coord::val(Unit::Ia, 1),
                Coord::Zero,
                Coord::val(Unit::A, e4),
            ],
        ]);
    }
    out
}

fn build_quadrics() -> Vec<DiagQuadric> {
    let mut out = Vec::with_capacity(13);
    let one = FieldElem::one;
    let phi = FieldElem::phi;
    let funit = |k: usize| -> C64 {
        let ang = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
        C64::new(ang.cos(), ang.sin())
    };
    let phi_f = (1.0 + 5.0f64.sqrt()) / 2.0;

    out.push(DiagQuadric {
        label: QuadricLabel::A,
        floats: [C64::new(1.0, 0.0); 5],
        exact: Some([one(), one(), one(), one(), one()]),
    });
    out.push(DiagQuadric {
        label: QuadricLabel::B,
        floats: std::array::from_fn(funit),
        exact: None,
    });
    out.push(DiagQuadric {
        label: QuadricLabel::C,
        floats: std::array::from_fn(|k| funit((5 - k) % 5)),
        exact: None,
    });
    for k in 0..5u8 {
        // Q_k = x_{k-1}^2 + phi x_k^2 + x_{k+1}^2
        let mut floats = [C64::new(0.0, 0.0); 5];
        let mut exact = [
            FieldElem::zero(),
            FieldElem::zero(),
            FieldElem::zero(),
            FieldElem::zero(),
            FieldElem::zero(),
        ];
        let km1 = (k as usize + 4) % 5;
        let kp1 = (k as usize + 1) % 5;
        floats[km1] = C64::new(1.0, 0.0);
        floats[k as usize] = C64::new(phi_f, 0.0);
        floats[kp1] = C64::new(1.0, 0.0);
        exact[km1] = one();
        exact[k as usize] = phi();
        exact[kp1] = one();
        out.push(DiagQuadric {
            label: QuadricLabel::Q(k),
            floats,
            exact: Some(exact),
        });
    }
    for k in 0..5u8 {
        // Q_k' = -x_k^2 + phi (x_{k+2}^2 + x_{k+3}^2)
        let mut floats = [C64::new(0.0, 0.0); 5];
        let mut exact = [
            FieldElem::zero(),
            FieldElem::zero(),
            FieldElem::zero(),
            FieldElem::zero(),
            FieldElem::zero(),
        ];
        let kp2 = (k as usize + 2) % 5;
        let kp3 = (k as usize + 3) % 5;
        floats[k as usize] = C64::new(-1.0, 0.0);
        floats[kp2] = C64::new(phi_f, 0.0);
        floats[kp3] = C64::new(phi_f, 0.0);
        exact[k as usize] = one().neg();
        exact[kp2] = phi();
        exact[kp3] = phi();
        out.push(DiagQuadric {
            label: QuadricLabel::QPrime(k),
            floats,
            exact: Some(exact),
        });
    }
    out
}

/// Serializable snapshot of the model for the `export-model` artifact.
#[derive(serde::Serialize)]
pub struct ModelExport {
    pub schema_version: u32,
    pub points: Vec<PointExport>,
    pub thetas: Vec<ThetaExport>,
}

#[derive(serde::Serialize)]
pub struct PointExport {
    pub index: u8,
    pub zero_coord: u8,
    /// Per coordinate: 8 exact rational basis coefficients as [num, den]
    /// decimal strings over the basis {1, a, a^2, a^3} x {1, i}.
    pub exact: Vec<Vec<[String; 2]>>,
    pub floats: Vec<[f64; 2]>,
    pub embed_bound: f64,
}

#[derive(serde::Serialize)]
pub struct ThetaExport {
    pub index: u8,
    pub points: [u8; 4],
    pub family: (u8, u8),
}

pub fn export_model(model: &Model) -> ModelExport {
    let rat_pair = |r: &Rat| -> [String; 2] {
        [r.numer().to_string(), r.denom().to_string()]
    };
    let _ = BigInt::from(0);
    ModelExport {
        schema_version: 1,
        points: model
            .points
            .iter()
            .map(|p| PointExport {
                index: p.index,
                zero_coord: p.zero_coord,
                exact: p
                    .exact
                    .iter()
                    .map(|e| (0..8).map(|k| rat_pair(e.coeff(k))).collect())
                    .collect(),
                floats: p.floats.iter().map(|z| [z.re, z.im]).collect(),
                embed_bound: p.eps,
            })
            .collect(),
        thetas: model
            .thetas
            .iter()
            .map(|t| ThetaExport {
                index: t.index,
                points: t.points,
                family: t.family,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_examples() {
        use Coord::*;
        use Unit::*;
        assert_eq!(
            decode_point(0),
            [
                Val { unit: Ia, neg: false },
                Val { unit: One, neg: false },
                Val { unit: I, neg: false },
                Val { unit: A, neg: false },
                Zero
            ]
        );
        // pt_9 = (0, -ia, 1, i, a)
        assert_eq!(
            decode_point(9),
            [
                Zero,
                Val { unit: Ia, neg: true },
                Val { unit: One, neg: false },
                Val { unit: I, neg: false },
                Val { unit: A, neg: false },
            ]
        );
        // pt_39 = (-1, -i, a, 0, -ia)
        assert_eq!(
            decode_point(39),
            [
                Val { unit: One, neg: true },
                Val { unit: I, neg: true },
                Val { unit: A, neg: false },
                Zero,
                Val { unit: Ia, neg: true },
            ]
        );
    }

    #[test]
    fn group_law() {
        let all = GroupElement::all();
        assert_eq!(all.len(), GROUP_ORDER);
        for &g in &all {
            assert_eq!(g.mul(g.inv()), GroupElement::identity());
            assert_eq!(g.index(), all[g.index()].index());
        }
        // associativity on a sample
        let g1 = GroupElement::new(2, 0b01010);
        let g2 = GroupElement::new(4, 0b00110);
        let g3 = GroupElement::new(1, 0b11000);
        assert_eq!(g1.mul(g2).mul(g3), g1.mul(g2.mul(g3)));
    }

    #[test]
    fn model_builds_and_verifies() {
        let model = Model::shared();
        assert_eq!(model.points.len(), NUM_POINTS);
        assert_eq!(model.thetas.len(), NUM_THETAS);
        model.verify_points_on_curve().unwrap();
    }

    #[test]
    fn rotation_moves_point_0_to_8() {
        let model = Model::shared();
        let rot1 = GroupElement::new(1, 0);
        assert_eq!(model.act_on_point(rot1, 0), 8);
    }

    #[test]
    fn actions_are_bijections() {
        let model = Model::shared();
        for gi in 0..GROUP_ORDER {
            let mut seen_p = [false; NUM_POINTS];
            for j in 0..NUM_POINTS {
                seen_p[model.point_action[gi][j] as usize] = true;
            }
            assert!(seen_p.iter().all(|&b| b));
            let mut seen_t = [false; NUM_THETAS];
            for t in 0..NUM_THETAS {
                seen_t[model.theta_action[gi][t] as usize] = true;
            }
            assert!(seen_t.iter().all(|&b| b));
        }
    }

    #[test]
    fn theta_orbit_sizes_divide_group_order() {
        // Individual thetas have order-4 stabilizers (two independent sign
        // flips fix each theta), so single-theta orbits have size 20; the two
        // seed families close to the 80-element table blocks, which
        // verify_enumeration checks during construction.
        let model = Model::shared();
        let mut seen = [false; NUM_THETAS];
        let mut sizes = Vec::new();
        for t in 0..NUM_THETAS as u8 {
            if seen[t as usize] {
                continue;
            }
            let orbit: HashSet<u8> = (0..GROUP_ORDER)
                .map(|gi| model.theta_action[gi][t as usize])
                .collect();
            for &x in &orbit {
                seen[x as usize] = true;
            }
            sizes.push(orbit.len());
        }
        assert!(sizes.iter().all(|&s| GROUP_ORDER % s == 0));
        assert_eq!(sizes.iter().sum::<usize>(), NUM_THETAS);
        // the table blocks are unions of orbits
        for t in 0..NUM_THETAS {
            for gi in 0..GROUP_ORDER {
                let img = model.theta_action[gi][t] as usize;
                assert_eq!(t < 80, img < 80);
            }
        }
    }

    #[test]
    fn zero_coords_equidistributed() {
        let model = Model::shared();
        let mut counts = [0usize; 5];
        for p in &model.points {
            counts[p.zero_coord as usize] += 1;
        }
        assert_eq!(counts, [8; 5]);
    }

    #[test]
    fn theta_zero_family() {
        let model = Model::shared();
        assert_eq!(model.thetas[0].points, [8, 12, 37, 39]);
        assert_eq!(model.thetas[0].family, (0, 3));
        assert_eq!(model.thetas[80].points, [24, 25, 34, 37]);
        assert_eq!(model.thetas[159].points, [18, 19, 25, 30]);
    }
}
