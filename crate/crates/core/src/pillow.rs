//! The pillow: two unit squares glued along their boundaries.
//!
//! Points are held as a face tag plus square coordinates. For metric and
//! dynamical computations the pillow is modelled as the quotient of the plane
//! by the group `{z -> ±z + t : t ∈ 2Z²}`; the front face is `[0,1]²` and the
//! back face `(x, y)` sits at `(x, -y)`, so `[0,1] × [-1,1]` is a fundamental
//! domain.

use std::fmt;
use std::str::FromStr;

use crate::carpet::{self, CarpetSpace};
use crate::error::{domain, parse, Error, Result};
use crate::exactnum::{expand, sqrt_le_sum, Base, PRational};
use crate::verify::GridOracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    Front,
    Back,
}

impl Face {
    pub fn other(self) -> Face {
        match self {
            Face::Front => Face::Back,
            Face::Back => Face::Front,
        }
    }

    pub const BOTH: [Face; 2] = [Face::Front, Face::Back];
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Face::Front => "front",
            Face::Back => "back",
        })
    }
}

impl FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "front" => Ok(Face::Front),
            "back" => Ok(Face::Back),
            other => Err(parse(format!("unknown face {other:?}"))),
        }
    }
}

/// A point of the pillow in canonical form: points of the glued boundary
/// always carry `Face::Front`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PillowPoint {
    face: Face,
    x: PRational,
    y: PRational,
}

impl PillowPoint {
    pub fn new(face: Face, x: PRational, y: PRational) -> Result<Self> {
        if !x.in_unit_interval() || !y.in_unit_interval() {
            return Err(domain(format!("({x}, {y}) is not in the unit square")));
        }
        let on_edge = is_edge(&x) || is_edge(&y);
        let face = if on_edge { Face::Front } else { face };
        Ok(PillowPoint { face, x, y })
    }

    pub fn front(x: PRational, y: PRational) -> Result<Self> {
        Self::new(Face::Front, x, y)
    }

    pub fn back(x: PRational, y: PRational) -> Result<Self> {
        Self::new(Face::Back, x, y)
    }

    /// Shorthand for small literal coordinates: `PillowPoint::at(Face::Front, (1, 4), (1, 4))`.
    pub fn at(face: Face, x: (i64, i64), y: (i64, i64)) -> Result<Self> {
        Self::new(face, PRational::new(x.0, x.1), PRational::new(y.0, y.1))
    }

    pub fn face(&self) -> Face {
        self.face
    }

    pub fn x(&self) -> &PRational {
        &self.x
    }

    pub fn y(&self) -> &PRational {
        &self.y
    }

    /// True iff the point lies on the seam `O` shared by both faces.
    pub fn on_seam(&self) -> bool {
        is_edge(&self.x) || is_edge(&self.y)
    }

    /// True iff the point is one of the four cone points of the pillow.
    pub fn is_pillow_corner(&self) -> bool {
        is_edge(&self.x) && is_edge(&self.y)
    }

    /// The faces whose closed square contains the point.
    pub fn faces(&self) -> &'static [Face] {
        if self.on_seam() {
            &Face::BOTH
        } else if self.face == Face::Front {
            &Face::BOTH[..1]
        } else {
            &Face::BOTH[1..]
        }
    }

    /// The same coordinates on the given face (canonicalized).
    pub fn with_face(&self, face: Face) -> PillowPoint {
        PillowPoint::new(face, self.x.clone(), self.y.clone()).expect("coordinates already valid")
    }
}

fn is_edge(c: &PRational) -> bool {
    c.is_zero() || c.is_one()
}

impl fmt::Display for PillowPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}@{}", self.x, self.y, self.face)
    }
}

impl fmt::Debug for PillowPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PillowPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (coords, face) = s
            .trim()
            .split_once('@')
            .ok_or_else(|| parse(format!("expected \"x,y@face\", got {s:?}")))?;
        let (x, y) = coords
            .split_once(',')
            .ok_or_else(|| parse(format!("expected \"x,y@face\", got {s:?}")))?;
        let face: Face = face.parse()?;
        PillowPoint::new(face, x.parse()?, y.parse()?).map_err(|e| match e {
            Error::Domain(m) => Error::Parse(m),
            other => other,
        })
    }
}

/// A point of the plane model.
///
/// Values returned by [`to_plane`] lie in the strip `[0,1] × (-1,1]`; values
/// passed to [`reduce`] may be anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneRep {
    pub u: PRational,
    pub v: PRational,
}

impl PlaneRep {
    pub fn new(u: PRational, v: PRational) -> Self {
        PlaneRep { u, v }
    }

    pub fn scale(&self, k: &PRational) -> PlaneRep {
        PlaneRep { u: &self.u * k, v: &self.v * k }
    }

    pub fn translate(&self, du: &PRational, dv: &PRational) -> PlaneRep {
        PlaneRep { u: &self.u + du, v: &self.v + dv }
    }

    pub fn squared_norm_to(&self, other: &PlaneRep) -> PRational {
        let du = &self.u - &other.u;
        let dv = &self.v - &other.v;
        &du * &du + &dv * &dv
    }
}

pub fn to_plane(q: &PillowPoint) -> PlaneRep {
    match q.face {
        Face::Front => PlaneRep { u: q.x.clone(), v: q.y.clone() },
        Face::Back => PlaneRep { u: q.x.clone(), v: -&q.y },
    }
}

/// Fold an arbitrary plane point back onto the pillow.
pub fn reduce(w: &PlaneRep) -> PillowPoint {
    let two = PRational::integer(2);
    // u into [0, 2)
    let mut u = (&w.u / &two).fract() * &two;
    // v into (-1, 1]
    let k = (&w.v - PRational::one()) / &two;
    let mut v = &w.v - &two * PRational::from_bigint(k.ceil());
    if u > PRational::one() {
        u = &two - u;
        v = -v;
        if v == PRational::integer(-1) {
            v = PRational::one();
        }
    }
    let point = if v.is_negative() {
        PillowPoint::new(Face::Back, u, -v)
    } else {
        PillowPoint::new(Face::Front, u, v)
    };
    point.expect("reduction lands in the fundamental domain")
}

/// Integer version of [`reduce`] for lattice points `(u/l, v/l)`.
///
/// Returns the face and the canonical coordinates scaled by `l`.
pub fn reduce_scaled(l: i64, u: i64, v: i64) -> (Face, i64, i64) {
    let two = 2 * l;
    let mut u = u.rem_euclid(two);
    let mut v = v.rem_euclid(two);
    if v > l {
        v -= two;
    }
    if u > l {
        u = two - u;
        v = -v;
        if v == -l {
            v = l;
        }
    }
    if v >= 0 {
        (Face::Front, u, v)
    } else if u == 0 || u == l {
        (Face::Front, u, -v)
    } else {
        (Face::Back, u, -v)
    }
}

/// Pillow distance, held as its exact square.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance {
    squared: PRational,
}

impl Distance {
    pub fn from_squared(squared: PRational) -> Self {
        Distance { squared }
    }

    pub fn squared(&self) -> &PRational {
        &self.squared
    }

    pub fn to_f64(&self) -> f64 {
        self.squared.to_f64().sqrt()
    }

    /// Exact test of `self <= a + b`.
    pub fn le_sum(&self, a: &Distance, b: &Distance) -> bool {
        sqrt_le_sum(&self.squared, &a.squared, &b.squared)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({}) ≈ {:.12}", self.squared, self.to_f64())
    }
}

const SHIFTS: [i64; 3] = [-2, 0, 2];

/// Path distance on the pillow: the shortest plane distance between lifts.
pub fn distance(a: &PillowPoint, b: &PillowPoint) -> Distance {
    distance_with_shifts(a, b, &SHIFTS)
}

/// [`distance`] with an explicit set of lattice shifts per axis.
pub fn distance_with_shifts(a: &PillowPoint, b: &PillowPoint, shifts: &[i64]) -> Distance {
    let pa = to_plane(a);
    let pb = to_plane(b);
    let neg = PlaneRep { u: -&pb.u, v: -&pb.v };
    let mut best: Option<PRational> = None;
    for lift in [&pb, &neg] {
        for &tu in shifts {
            for &tv in shifts {
                let cand = lift.translate(&PRational::integer(tu), &PRational::integer(tv));
                let d = pa.squared_norm_to(&cand);
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
    }
    Distance { squared: best.expect("non-empty shift set") }
}

/// One of the eight symmetries of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareSymmetry {
    Id,
    R90,
    R180,
    R270,
    /// Reflection in the diagonal `y = x`.
    DMain,
    /// Reflection in the diagonal `x + y = 1`.
    DAnti,
    /// Reflection in the horizontal midline `y = 1/2`.
    HMid,
    /// Reflection in the vertical midline `x = 1/2`.
    VMid,
}

type Affine = ([[i64; 2]; 2], [i64; 2]);

impl SquareSymmetry {
    pub const ALL: [SquareSymmetry; 8] = [
        SquareSymmetry::Id,
        SquareSymmetry::R90,
        SquareSymmetry::R180,
        SquareSymmetry::R270,
        SquareSymmetry::DMain,
        SquareSymmetry::DAnti,
        SquareSymmetry::HMid,
        SquareSymmetry::VMid,
    ];

    /// `(x, y) -> A (x, y) + b`; rotations are counterclockwise about the centre.
    pub fn affine(self) -> Affine {
        use SquareSymmetry::*;
        match self {
            Id => ([[1, 0], [0, 1]], [0, 0]),
            R90 => ([[0, -1], [1, 0]], [1, 0]),
            R180 => ([[-1, 0], [0, -1]], [1, 1]),
            R270 => ([[0, 1], [-1, 0]], [0, 1]),
            DMain => ([[0, 1], [1, 0]], [0, 0]),
            DAnti => ([[0, -1], [-1, 0]], [1, 1]),
            HMid => ([[1, 0], [0, -1]], [0, 1]),
            VMid => ([[-1, 0], [0, 1]], [1, 0]),
        }
    }

    fn from_matrix(a: [[i64; 2]; 2]) -> SquareSymmetry {
        *Self::ALL
            .iter()
            .find(|s| s.affine().0 == a)
            .expect("signed permutation matrices are exactly the square symmetries")
    }

    pub fn is_reflection(self) -> bool {
        let a = self.affine().0;
        a[0][0] * a[1][1] - a[0][1] * a[1][0] == -1
    }

    pub fn apply(self, x: &PRational, y: &PRational) -> (PRational, PRational) {
        let (a, b) = self.affine();
        let row = |r: [i64; 2], t: i64| {
            PRational::integer(r[0]) * x + PRational::integer(r[1]) * y + PRational::integer(t)
        };
        (row(a[0], b[0]), row(a[1], b[1]))
    }

    /// `self ∘ other`.
    pub fn compose(self, other: SquareSymmetry) -> SquareSymmetry {
        let (a, _) = self.affine();
        let (c, _) = other.affine();
        let mut m = [[0i64; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * c[0][j] + a[i][1] * c[1][j];
            }
        }
        Self::from_matrix(m)
    }

    pub fn inverse(self) -> SquareSymmetry {
        let (a, _) = self.affine();
        // signed permutation matrices are orthogonal
        Self::from_matrix([[a[0][0], a[1][0]], [a[0][1], a[1][1]]])
    }

    fn name(self) -> &'static str {
        use SquareSymmetry::*;
        match self {
            Id => "id",
            R90 => "r90",
            R180 => "r180",
            R270 => "r270",
            DMain => "dmain",
            DAnti => "danti",
            HMid => "hmid",
            VMid => "vmid",
        }
    }
}

/// An isometry of the pillow preserving `D_p`: a square symmetry applied on
/// both faces, optionally followed by the face swap `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometryId {
    pub square: SquareSymmetry,
    pub swap: bool,
}

impl IsometryId {
    pub const IDENTITY: IsometryId = IsometryId { square: SquareSymmetry::Id, swap: false };
    /// The face swap.
    pub const R: IsometryId = IsometryId { square: SquareSymmetry::Id, swap: true };

    pub fn new(square: SquareSymmetry, swap: bool) -> Self {
        IsometryId { square, swap }
    }

    /// All sixteen elements, no-swap elements first.
    pub fn all() -> Vec<IsometryId> {
        [false, true]
            .into_iter()
            .flat_map(|swap| SquareSymmetry::ALL.into_iter().map(move |square| IsometryId { square, swap }))
            .collect()
    }
}

impl fmt::Display for IsometryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.square.name())?;
        if self.swap {
            f.write_str("+R")?;
        }
        Ok(())
    }
}

impl FromStr for IsometryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "R" {
            return Ok(IsometryId::R);
        }
        let (base, swap) = match s.strip_suffix("+R") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let square = SquareSymmetry::ALL
            .into_iter()
            .find(|g| g.name() == base)
            .ok_or_else(|| parse(format!("unknown isometry {s:?}")))?;
        Ok(IsometryId { square, swap })
    }
}

pub fn isometry_apply(g: IsometryId, q: &PillowPoint) -> PillowPoint {
    let (x, y) = g.square.apply(&q.x, &q.y);
    let face = if g.swap { q.face.other() } else { q.face };
    PillowPoint::new(face, x, y).expect("square symmetries preserve the unit square")
}

/// `g ∘ h`.
pub fn isometry_compose(g: IsometryId, h: IsometryId) -> IsometryId {
    // R commutes with every square symmetry
    IsometryId { square: g.square.compose(h.square), swap: g.swap ^ h.swap }
}

pub fn isometry_inverse(g: IsometryId) -> IsometryId {
    IsometryId { square: g.square.inverse(), swap: g.swap }
}

/// Shape of the fixed-point set of an isometry restricted to `D_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedSetClass {
    Empty,
    Finite(usize),
    Cantor,
    /// Exactly the seam `O`.
    JordanCurveO,
    All,
}

impl fmt::Display for FixedSetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedSetClass::Empty => f.write_str("empty"),
            FixedSetClass::Finite(n) => write!(f, "finite({n})"),
            FixedSetClass::Cantor => f.write_str("cantor"),
            FixedSetClass::JordanCurveO => f.write_str("jordan-curve-O"),
            FixedSetClass::All => f.write_str("all"),
        }
    }
}

/// Fixed locus of a square symmetry inside the closed unit square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedLocus {
    Empty,
    Point(PRational, PRational),
    /// Closed segment between two boundary points.
    Segment((PRational, PRational), (PRational, PRational)),
    Square,
}

/// Solve `A z + b = z` over the rationals and clip to `[0,1]²`.
pub fn fixed_locus(g: SquareSymmetry) -> FixedLocus {
    let (a, b) = g.affine();
    let m = [[a[0][0] - 1, a[0][1]], [a[1][0], a[1][1] - 1]];
    let c = [-b[0], -b[1]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let unit = |v: &PRational| v.in_unit_interval();

    if m == [[0, 0], [0, 0]] {
        return if c == [0, 0] { FixedLocus::Square } else { FixedLocus::Empty };
    }
    if det != 0 {
        let x = PRational::new(c[0] * m[1][1] - m[0][1] * c[1], det);
        let y = PRational::new(m[0][0] * c[1] - m[1][0] * c[0], det);
        return if unit(&x) && unit(&y) { FixedLocus::Point(x, y) } else { FixedLocus::Empty };
    }
    // rank one: both equations must agree
    let consistent = m[0][0] * c[1] - m[1][0] * c[0] == 0 && m[0][1] * c[1] - m[1][1] * c[0] == 0;
    if !consistent {
        return FixedLocus::Empty;
    }
    let (row, rhs) = if m[0] != [0, 0] { (m[0], c[0]) } else { (m[1], c[1]) };
    let (a1, a2, rhs) = (PRational::integer(row[0]), PRational::integer(row[1]), PRational::integer(rhs));
    let zero = PRational::zero();
    let one = PRational::one();
    let mut pts: Vec<(PRational, PRational)> = Vec::new();
    if !a2.is_zero() {
        for x in [&zero, &one] {
            let y = (&rhs - &a1 * x) / &a2;
            if unit(&y) {
                pts.push((x.clone(), y));
            }
        }
    }
    if !a1.is_zero() {
        for y in [&zero, &one] {
            let x = (&rhs - &a2 * y) / &a1;
            if unit(&x) {
                pts.push((x, y.clone()));
            }
        }
    }
    pts.sort();
    pts.dedup();
    match pts.len() {
        0 => FixedLocus::Empty,
        1 => {
            let (x, y) = pts.pop().unwrap();
            FixedLocus::Point(x, y)
        }
        _ => {
            let last = pts.pop().unwrap();
            FixedLocus::Segment(pts.swap_remove(0), last)
        }
    }
}

/// How one coordinate of a segment parametrized by `t ∈ [0,1]` reads its
/// base-`p` digits off the digits of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DigitMap {
    Same,
    Complement,
    Constant(u32),
}

impl DigitMap {
    fn of(start: &PRational, delta: &PRational, p: Base) -> Option<DigitMap> {
        if delta.is_one() && start.is_zero() {
            return Some(DigitMap::Same);
        }
        if *delta == PRational::integer(-1) && start.is_one() {
            return Some(DigitMap::Complement);
        }
        if delta.is_zero() {
            // constants of the form d/(p-1) have the single expansion 0.ddd...
            let e = expand(start, p).ok()?;
            if let [only] = e.as_slice() {
                if only.preperiod().is_empty() && only.period().len() <= 1 {
                    return Some(DigitMap::Constant(only.digit_at(1)));
                }
            }
        }
        None
    }

    fn digit(self, d: u32, p: Base) -> u32 {
        match self {
            DigitMap::Same => d,
            DigitMap::Complement => p.get() - 1 - d,
            DigitMap::Constant(c) => c,
        }
    }
}

/// Evidence behind a [`FixedSetClass`].
#[derive(Debug, Clone)]
pub struct FixedSetCertificate {
    pub class: FixedSetClass,
    pub locus: FixedLocus,
    /// For segment loci: the digits of the parameter `t` that force a point
    /// off the carpet.
    pub forbidden_digits: Vec<u32>,
    /// `(level, good tiles met by the locus, predicted count)` from the grid
    /// oracle, for Cantor loci.
    pub oracle_counts: Vec<(u32, u64, u64)>,
    /// The fixed points themselves, for finite classes.
    pub points: Vec<PillowPoint>,
    pub confirmed: bool,
}

/// Classify the fixed set of `g` on `D_p`. The answer is symbolic;
/// `resolution` only sets the depth of the confirming grid oracle.
pub fn fixed_set_classify(g: IsometryId, p: Base, resolution: u32) -> FixedSetClass {
    fixed_set_certificate(g, p, resolution).class
}

pub fn fixed_set_certificate(g: IsometryId, p: Base, resolution: u32) -> FixedSetCertificate {
    let locus = fixed_locus(g.square);
    let mut cert = FixedSetCertificate {
        class: FixedSetClass::Empty,
        locus: locus.clone(),
        forbidden_digits: Vec::new(),
        oracle_counts: Vec::new(),
        points: Vec::new(),
        confirmed: true,
    };
    let in_dp = |q: &PillowPoint| carpet::member(p, CarpetSpace::Dp, q);

    match (&locus, g.swap) {
        (FixedLocus::Square, false) => {
            cert.class = FixedSetClass::All;
        }
        (FixedLocus::Square, true) => {
            cert.class = FixedSetClass::JordanCurveO;
            cert.confirmed = seam_sample(p).iter().all(|q| isometry_apply(g, q) == *q);
        }
        (FixedLocus::Empty, _) => {}
        (FixedLocus::Point(x, y), swap) => {
            let mut pts: Vec<PillowPoint> = Face::BOTH
                .iter()
                .map(|&f| PillowPoint::new(f, x.clone(), y.clone()).expect("locus inside square"))
                .filter(|q| !swap || q.on_seam())
                .collect();
            pts.sort();
            pts.dedup();
            pts.retain(|q| in_dp(q));
            finish_finite(&mut cert, g, pts);
        }
        (FixedLocus::Segment(s, e), true) => {
            // a swap fixes only seam points, and a clipped segment meets the
            // seam in its endpoints unless it runs along a side
            let along_side = (s.0 == e.0 && (s.0.is_zero() || s.0.is_one()))
                || (s.1 == e.1 && (s.1.is_zero() || s.1.is_one()));
            assert!(!along_side, "no square symmetry fixes a side pointwise");
            let mut pts: Vec<PillowPoint> = [s, e]
                .iter()
                .map(|(x, y)| PillowPoint::front(x.clone(), y.clone()).expect("locus inside square"))
                .filter(|q| q.on_seam() && in_dp(q))
                .collect();
            pts.sort();
            pts.dedup();
            finish_finite(&mut cert, g, pts);
        }
        (FixedLocus::Segment(s, e), false) => {
            let dx = &e.0 - &s.0;
            let dy = &e.1 - &s.1;
            let mx = DigitMap::of(&s.0, &dx, p).expect("fixed segments of square symmetries are axis or diagonal lines");
            let my = DigitMap::of(&s.1, &dy, p).expect("fixed segments of square symmetries are axis or diagonal lines");
            let m = p.middle();
            cert.forbidden_digits =
                (0..p.get()).filter(|&d| (mx.digit(d, p), my.digit(d, p)) == (m, m)).collect();
            let allowed = p.get() as u64 - cert.forbidden_digits.len() as u64;
            assert!(
                !cert.forbidden_digits.is_empty() && allowed >= 2,
                "segment locus must meet the removed squares in a Cantor pattern"
            );
            cert.class = FixedSetClass::Cantor;

            let depth = resolution.clamp(1, GridOracle::max_level(p));
            let oracle = GridOracle::build(p, depth).expect("depth within oracle bound");
            for n in 1..=depth {
                let scale = p.pow(n);
                let found = (0..scale)
                    .filter(|&k| {
                        let t = PRational::new(2 * k as i64 + 1, 2 * scale as i64);
                        let x = &s.0 + &dx * &t;
                        let y = &s.1 + &dy * &t;
                        let i = x.scale(p, n).floor();
                        let j = y.scale(p, n).floor();
                        oracle.is_good(Face::Front, n, to_u64(&i), to_u64(&j))
                    })
                    .count() as u64;
                let expected = allowed.pow(n);
                cert.confirmed &= found == expected;
                cert.oracle_counts.push((n, found, expected));
            }
            // every point of the locus is fixed
            cert.confirmed &= (0..=8).all(|k| {
                let t = PRational::new(k, 8);
                let q = PillowPoint::front(&s.0 + &dx * &t, &s.1 + &dy * &t).expect("inside square");
                isometry_apply(g, &q) == q
            });
        }
    }
    cert
}

fn finish_finite(cert: &mut FixedSetCertificate, g: IsometryId, pts: Vec<PillowPoint>) {
    cert.confirmed = pts.iter().all(|q| isometry_apply(g, q) == *q);
    cert.class = if pts.is_empty() { FixedSetClass::Empty } else { FixedSetClass::Finite(pts.len()) };
    cert.points = pts;
}

fn to_u64(v: &num_bigint::BigInt) -> u64 {
    u64::try_from(v).expect("tile index fits in u64")
}

fn seam_sample(p: Base) -> Vec<PillowPoint> {
    let den = 2 * p.get() as i64 + 1;
    let mut out = Vec::new();
    for k in 0..=den {
        let t = PRational::new(k, den);
        for (x, y) in [
            (t.clone(), PRational::zero()),
            (t.clone(), PRational::one()),
            (PRational::zero(), t.clone()),
            (PRational::one(), t.clone()),
        ] {
            out.push(PillowPoint::front(x, y).expect("seam point"));
        }
    }
    out
}

/// Check the classification rule: the square symmetry fixes the whole square
/// only for the identity, so `R` is the unique element fixing exactly `O`.
pub fn jordan_curve_elements(p: Base, resolution: u32) -> Vec<IsometryId> {
    IsometryId::all()
        .into_iter()
        .filter(|&g| fixed_set_classify(g, p, resolution) == FixedSetClass::JordanCurveO)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> PRational {
        PRational::new(n, d)
    }

    fn b(p: u32) -> Base {
        Base::new(p).unwrap()
    }

    fn pt(face: Face, x: (i64, i64), y: (i64, i64)) -> PillowPoint {
        PillowPoint::at(face, x, y).unwrap()
    }

    /// Brute-force reduction: search every group element `z -> ±z + t` with
    /// small translations for an image inside the fundamental domain.
    fn reduce_by_search(w: &PlaneRep) -> PillowPoint {
        let mut hits = Vec::new();
        for sign in [1i64, -1] {
            for tu in (-4..=4).map(|k| 2 * k) {
                for tv in (-4..=4).map(|k| 2 * k) {
                    let u = PRational::integer(sign) * &w.u + PRational::integer(tu);
                    let v = PRational::integer(sign) * &w.v + PRational::integer(tv);
                    if u.in_unit_interval() && v <= PRational::one() && v >= PRational::integer(-1) {
                        let q = if v.is_negative() {
                            PillowPoint::back(u, -v)
                        } else {
                            PillowPoint::front(u, v)
                        };
                        hits.push(q.unwrap());
                    }
                }
            }
        }
        hits.sort();
        hits.dedup();
        assert_eq!(hits.len(), 1, "orbit of {w:?} meets the domain in {hits:?}");
        hits.pop().unwrap()
    }

    #[test]
    fn canonical_boundary() {
        assert_eq!(pt(Face::Back, (1, 2), (0, 1)).face(), Face::Front);
        assert_eq!(pt(Face::Back, (1, 1), (1, 3)).face(), Face::Front);
        assert_eq!(pt(Face::Back, (1, 2), (1, 3)).face(), Face::Back);
        assert!(PillowPoint::at(Face::Front, (3, 2), (0, 1)).is_err());
    }

    #[test]
    fn to_plane_examples() {
        assert_eq!(to_plane(&pt(Face::Front, (1, 2), (1, 3))), PlaneRep::new(r(1, 2), r(1, 3)));
        assert_eq!(to_plane(&pt(Face::Back, (1, 2), (1, 3))), PlaneRep::new(r(1, 2), r(-1, 3)));
        assert_eq!(to_plane(&pt(Face::Back, (1, 2), (0, 1))), PlaneRep::new(r(1, 2), r(0, 1)));
    }

    #[test]
    fn reduce_examples() {
        let cases = [
            ((3, 2), (3, 2), pt(Face::Front, (1, 2), (1, 2))),
            ((1, 1), (3, 2), pt(Face::Front, (1, 1), (1, 2))),
            ((0, 1), (0, 1), pt(Face::Front, (0, 1), (0, 1))),
        ];
        for ((un, ud), (vn, vd), want) in cases {
            let w = PlaneRep::new(r(un, ud), r(vn, vd));
            assert_eq!(reduce(&w), want);
            assert_eq!(reduce_by_search(&w), want);
        }
    }

    #[test]
    fn reduce_matches_search_on_grid() {
        for un in -12..=12 {
            for vn in -12..=12 {
                let w = PlaneRep::new(r(un, 4), r(vn, 4));
                assert_eq!(reduce(&w), reduce_by_search(&w), "at {w:?}");
            }
        }
    }

    #[test]
    fn scaled_reduce_agrees() {
        let l = 9;
        for u in -40..40 {
            for v in -40..40 {
                let q = reduce(&PlaneRep::new(r(u, l), r(v, l)));
                let (f, x, y) = reduce_scaled(l, u, v);
                assert_eq!(q, PillowPoint::new(f, r(x, l), r(y, l)).unwrap());
            }
        }
    }

    #[test]
    fn distance_examples() {
        let o_front = pt(Face::Front, (0, 1), (0, 1));
        let o_back = pt(Face::Back, (0, 1), (0, 1));
        assert!(distance(&o_front, &o_back).squared().is_zero());
        let c_front = pt(Face::Front, (1, 2), (1, 2));
        let c_back = pt(Face::Back, (1, 2), (1, 2));
        let wide = [-4, -2, 0, 2, 4];
        assert_eq!(distance(&c_front, &c_back).squared(), &PRational::one());
        assert_eq!(distance_with_shifts(&c_front, &c_back, &wide).squared(), &PRational::one());
        let a = pt(Face::Front, (1, 5), (1, 7));
        let b2 = pt(Face::Front, (4, 5), (2, 3));
        let euclid = r(3, 5) * r(3, 5) + r(11, 21) * r(11, 21);
        assert_eq!(distance(&a, &b2).squared(), &euclid);
    }

    #[test]
    fn isometry_examples() {
        let q = pt(Face::Front, (1, 4), (1, 4));
        assert_eq!(isometry_apply(IsometryId::R, &q), pt(Face::Back, (1, 4), (1, 4)));
        let rot = IsometryId::new(SquareSymmetry::R180, false);
        assert_eq!(isometry_apply(rot, &pt(Face::Front, (0, 1), (0, 1))), pt(Face::Front, (1, 1), (1, 1)));
        let diag = IsometryId::new(SquareSymmetry::DMain, false);
        assert_eq!(isometry_apply(diag, &pt(Face::Back, (1, 3), (2, 3))), pt(Face::Back, (2, 3), (1, 3)));
    }

    #[test]
    fn group_examples() {
        let r90 = IsometryId::new(SquareSymmetry::R90, false);
        assert_eq!(isometry_compose(IsometryId::R, IsometryId::R), IsometryId::IDENTITY);
        assert_eq!(isometry_compose(r90, r90), IsometryId::new(SquareSymmetry::R180, false));
        let g = IsometryId::new(SquareSymmetry::R90, true);
        let inv = isometry_inverse(g);
        assert_eq!(inv, IsometryId::new(SquareSymmetry::R270, true));
        for k in 0..100 {
            let q = PillowPoint::new(
                if k % 2 == 0 { Face::Front } else { Face::Back },
                r(k % 11, 11),
                r((3 * k) % 13, 13),
            )
            .unwrap();
            assert_eq!(isometry_apply(inv, &isometry_apply(g, &q)), q);
        }
    }

    #[test]
    fn isometry_names_round_trip() {
        for g in IsometryId::all() {
            assert_eq!(g.to_string().parse::<IsometryId>().unwrap(), g);
        }
        assert_eq!("R".parse::<IsometryId>().unwrap(), IsometryId::R);
        assert!("r45".parse::<IsometryId>().is_err());
    }

    #[test]
    fn point_text_round_trip() {
        let q: PillowPoint = "1/4,1/3@back".parse().unwrap();
        assert_eq!(q, pt(Face::Back, (1, 4), (1, 3)));
        assert_eq!(q.to_string(), "1/4,1/3@back");
        assert!("1/4;1/3@back".parse::<PillowPoint>().is_err());
        assert!("1/4,1/3@side".parse::<PillowPoint>().is_err());
        assert!("2,1/3@front".parse::<PillowPoint>().is_err());
    }

    #[test]
    fn fixed_set_examples() {
        let p = b(3);
        assert_eq!(fixed_set_classify(IsometryId::IDENTITY, p, 3), FixedSetClass::All);
        assert_eq!(fixed_set_classify(IsometryId::R, p, 3), FixedSetClass::JordanCurveO);
        let cert = fixed_set_certificate(IsometryId::new(SquareSymmetry::DMain, false), p, 6);
        assert_eq!(cert.class, FixedSetClass::Cantor);
        assert_eq!(cert.forbidden_digits, vec![1]);
        assert!(cert.confirmed, "{:?}", cert.oracle_counts);
    }

    #[test]
    fn fixed_set_taxonomy() {
        use SquareSymmetry::*;
        for p in [3, 5] {
            let p = b(p);
            for g in IsometryId::all() {
                let class = fixed_set_classify(g, p, 3);
                let want = match (g.square, g.swap) {
                    (Id, false) => FixedSetClass::All,
                    (Id, true) => FixedSetClass::JordanCurveO,
                    (R90 | R180 | R270, _) => FixedSetClass::Empty,
                    (DMain | DAnti | HMid | VMid, false) => FixedSetClass::Cantor,
                    (DMain | DAnti | HMid | VMid, true) => FixedSetClass::Finite(2),
                };
                assert_eq!(class, want, "{g} at p={p}");
            }
            assert_eq!(jordan_curve_elements(p, 3), vec![IsometryId::R]);
        }
    }
}
