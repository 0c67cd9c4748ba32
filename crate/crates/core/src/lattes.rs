//! The Lattès map `T` of the pillow and its exact dynamics.
//!
//! `T` lifts to `z -> p z` in the plane model. Everything here goes through
//! that one code path; the per-tile similarity behaviour is checked, not
//! assumed.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::carpet::{member, on_peripheral, CarpetSpace, CircleKind, PeripheralCircleId};
use crate::error::{domain, Error, Result};
use crate::exactnum::{Base, PRational};
use crate::pillow::{distance, isometry_apply, reduce, to_plane, Face, IsometryId, PillowPoint, PlaneRep};
use crate::sample::{front_grid, Sampler};
use crate::tiling::{tile_color, tile_is_good, tile_of_point, TileAddress, TileColor};
use crate::verify::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LattesMap {
    p: Base,
}

impl LattesMap {
    pub fn new(p: Base) -> Self {
        LattesMap { p }
    }

    pub fn base(&self) -> Base {
        self.p
    }

    pub fn apply(&self, q: &PillowPoint) -> PillowPoint {
        self.lifted(q, 1)
    }

    /// `T^n(q)`, composed one step at a time.
    pub fn iterate(&self, q: &PillowPoint, n: u32) -> PillowPoint {
        (0..n).fold(q.clone(), |acc, _| self.apply(&acc))
    }

    /// `T^n(q)` in one step through the lift `z -> p^n z`.
    pub fn lifted(&self, q: &PillowPoint, n: u32) -> PillowPoint {
        let k = PRational::power(self.p, n as i32);
        reduce(&to_plane(q).scale(&k))
    }

    /// All points `z` with `T(z) = w`.
    ///
    /// Preimages are `(±w̃ + t)/p` for `t ∈ 2Z²`; translations are periodic
    /// modulo `2p`, so a `p × p` block of `t` per sign covers everything.
    pub fn preimages(&self, w: &PillowPoint) -> Vec<PillowPoint> {
        let lift = to_plane(w);
        let inv_p = PRational::power(self.p, -1);
        let q = self.p.get() as i64;
        let mut out: Vec<PillowPoint> = Vec::new();
        for sign in [1i64, -1] {
            let s = PRational::integer(sign);
            for a in 0..q {
                for b in 0..q {
                    let u = (&s * &lift.u + PRational::integer(2 * a)) * &inv_p;
                    let v = (&s * &lift.v + PRational::integer(2 * b)) * &inv_p;
                    out.push(reduce(&PlaneRep::new(u, v)));
                }
            }
        }
        out.sort();
        out.dedup();
        debug_assert!(out.iter().all(|z| self.apply(z) == *w));
        out
    }
}

/// The branch `T^{-n}: Q -> Z^n = [0, p^-n]²` fixing the corner `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseBranch {
    pub p: Base,
    pub depth: u32,
}

impl InverseBranch {
    pub fn new(p: Base, depth: u32) -> Self {
        InverseBranch { p, depth }
    }

    pub fn apply(&self, q: &PillowPoint) -> Result<PillowPoint> {
        if q.face() == Face::Back {
            return Err(domain(format!("{q} is not on the front face")));
        }
        PillowPoint::front(q.x().shrink(self.p, self.depth), q.y().shrink(self.p, self.depth))
    }
}

/// Check `T^{-(n+k)} = T^{-n} ∘ T^{-k}`, `T^{n-k} ∘ T^{-n} = T^{-k}` (when
/// `n > k`) and `T^n ∘ T^{-n} = id` on a fixed grid sample of `Q`.
pub fn branch_consistency_check(p: Base, n: u32, k: u32) -> Verdict {
    branch_consistency_on(p, n, k, &front_grid(p, 100))
}

pub fn branch_consistency_on(p: Base, n: u32, k: u32, sample: &[PillowPoint]) -> Verdict {
    let t = LattesMap::new(p);
    let bn = InverseBranch::new(p, n);
    let bk = InverseBranch::new(p, k);
    let bnk = InverseBranch::new(p, n + k);
    Verdict::first_failure(sample.iter(), |q| {
        let deep = bnk.apply(q).ok()?;
        let nested = bn.apply(&bk.apply(q).ok()?).ok()?;
        if deep != nested {
            return Some(format!("T^-{}({q}) = {deep} but T^-{n}∘T^-{k} gives {nested}", n + k));
        }
        let back = t.iterate(&bn.apply(q).ok()?, n);
        if back != *q {
            return Some(format!("T^{n}∘T^-{n}({q}) = {back}"));
        }
        if n > k {
            let lhs = t.iterate(&bn.apply(q).ok()?, n - k);
            let rhs = bk.apply(q).ok()?;
            if lhs != rhs {
                return Some(format!("T^{}∘T^-{n}({q}) = {lhs} but T^-{k} gives {rhs}", n - k));
            }
        }
        None
    })
}

pub fn forward_invariance_check(p: Base, samples: &[PillowPoint]) -> Verdict {
    let t = LattesMap::new(p);
    Verdict::first_failure_par(samples, |q| {
        if !member(p, CarpetSpace::Dp, q) {
            return None;
        }
        let image = t.apply(q);
        (!member(p, CarpetSpace::Dp, &image)).then(|| format!("{q} ∈ D_p but T({q}) = {image} ∉ D_p"))
    })
}

/// A point off `D_p` whose image lies in `D_p`, from a grid search of the
/// open middle square of the front face.
pub fn backward_noninvariance_witness(p: Base) -> Result<PillowPoint> {
    let t = LattesMap::new(p);
    let q = p.get() as i64;
    let m = p.middle() as i64;
    for den_pow in 2..=4u32 {
        let den = p.pow(den_pow) as i64;
        let cell = den / q;
        let lo = m * cell;
        for a in lo + 1..lo + cell {
            for b in lo + 1..lo + cell {
                let z = PillowPoint::at(Face::Front, (a, den), (b, den))?;
                if !member(p, CarpetSpace::Dp, &z) && member(p, CarpetSpace::Dp, &t.apply(&z)) {
                    return Ok(z);
                }
            }
        }
    }
    Err(Error::Internal("no backward non-invariance witness found".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Top, Side::Left, Side::Right];

    fn point(self, t: PRational) -> PillowPoint {
        let (x, y) = match self {
            Side::Bottom => (t, PRational::zero()),
            Side::Top => (t, PRational::one()),
            Side::Left => (PRational::zero(), t),
            Side::Right => (PRational::one(), t),
        };
        PillowPoint::front(x, y).expect("side point")
    }

    fn contains(self, q: &PillowPoint) -> bool {
        match self {
            Side::Bottom => q.y().is_zero(),
            Side::Top => q.y().is_one(),
            Side::Left => q.x().is_zero(),
            Side::Right => q.x().is_one(),
        }
    }
}

pub fn side_invariance_check(p: Base) -> Verdict {
    let t = LattesMap::new(p);
    let den = 4 * p.get() as i64 + 1;
    let cases: Vec<(Side, PillowPoint)> = Side::ALL
        .into_iter()
        .flat_map(|s| (0..=den).map(move |k| (s, s.point(PRational::new(k, den)))))
        .collect();
    Verdict::first_failure(cases.iter(), |(side, q)| {
        let image = t.apply(q);
        (!side.contains(&image)).then(|| format!("T({q}) = {image} leaves the {side:?} side"))
    })
}

/// Image of a peripheral circle under `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeripheralImage {
    Circle(PeripheralCircleId),
    /// The circle is mapped onto the seam `O`.
    Outer,
}

impl fmt::Display for PeripheralImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeripheralImage::Circle(c) => write!(f, "{c}"),
            PeripheralImage::Outer => f.write_str("outer"),
        }
    }
}

/// Symbolic image: middle circles go to `O`; a circle born at level `k >= 2`
/// goes to the circle born at `k - 1` inside the image of its parent tile.
pub fn peripheral_image(p: Base, c: &PeripheralCircleId) -> PeripheralImage {
    match c.kind {
        CircleKind::Outer => PeripheralImage::Outer,
        CircleKind::Removed { level: 1, .. } => PeripheralImage::Outer,
        CircleKind::Removed { level, .. } => {
            let parent = c.parent().expect("removed circle has a parent");
            let image_centre = LattesMap::new(p).apply(&parent.center(p));
            let tiles = tile_of_point(p, &image_centre, level - 2);
            let image = tiles
                .into_iter()
                .find(|t| t.contains_in_interior(p, &image_centre))
                .expect("tile centres map to tile centres");
            let ambient = match (c.ambient, image.face) {
                (CarpetSpace::Dp, _) => CarpetSpace::Dp,
                (_, Face::Front) => CarpetSpace::SpFront,
                (_, Face::Back) => CarpetSpace::SpBack,
            };
            PeripheralImage::Circle(PeripheralCircleId::removed(ambient, image.face, level - 1, image.i, image.j))
        }
    }
}

/// Confirm [`peripheral_image`] by pushing `count` exact points of `c`
/// through `T` and checking they land on the predicted curve.
pub fn confirm_peripheral_image(p: Base, c: &PeripheralCircleId, count: usize) -> Verdict {
    let t = LattesMap::new(p);
    let predicted = peripheral_image(p, c);
    let pts = c.sample_points(p, count);
    Verdict::first_failure(pts.iter(), |q| {
        let w = t.apply(q);
        let ok = match predicted {
            PeripheralImage::Outer => w.on_seam(),
            PeripheralImage::Circle(img) => img.contains(p, &w),
        };
        (!ok).then(|| format!("T({q}) = {w} is not on {predicted}"))
    })
}

/// Why a point of `D_p` is excluded from the good-point argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalReason {
    /// A 1-vertex.
    OneVertexF,
    OnM,
    OnMprime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    /// Interior of a good 1-tile.
    Case1(TileAddress),
    /// Interior of a side shared by two good 1-tiles.
    Case2(TileAddress, TileAddress),
    Exceptional(ExceptionalReason),
    NotInDp,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointClass::Case1(t) => write!(f, "case1 {t}"),
            PointClass::Case2(a, b) => write!(f, "case2 {a} {b}"),
            PointClass::Exceptional(r) => write!(f, "exceptional {r:?}"),
            PointClass::NotInDp => f.write_str("not-in-dp"),
        }
    }
}

pub fn classify_point(p: Base, q: &PillowPoint) -> PointClass {
    if !member(p, CarpetSpace::Dp, q) {
        return PointClass::NotInDp;
    }
    let xi = q.x().scale(p, 1);
    let yi = q.y().scale(p, 1);
    if xi.is_integer() && yi.is_integer() {
        return PointClass::Exceptional(ExceptionalReason::OneVertexF);
    }
    for face in Face::BOTH {
        if PeripheralCircleId::middle(CarpetSpace::Dp, face).contains(p, q) {
            return PointClass::Exceptional(match face {
                Face::Front => ExceptionalReason::OnM,
                Face::Back => ExceptionalReason::OnMprime,
            });
        }
    }
    let tiles = tile_of_point(p, q, 1);
    debug_assert!(tiles.iter().all(|t| tile_is_good(p, t)));
    match tiles.as_slice() {
        [t] => PointClass::Case1(*t),
        [a, b] => PointClass::Case2(*a, *b),
        _ => unreachable!("a non-vertex lies in one or two 1-tiles"),
    }
}

/// Check `d(T a, T b) = p · d(a, b)` for pairs of points near `q`, chosen
/// well inside the region where `T` is a local similarity.
pub fn scaling_certificate(p: Base, q: &PillowPoint) -> Verdict {
    let class = classify_point(p, q);
    let xi = q.x().scale(p, 1);
    let yi = q.y().scale(p, 1);
    let gap = |c: &PRational| {
        let f = c.fract();
        let g = PRational::one() - &f;
        if f < g {
            f
        } else {
            g
        }
    };
    // distance (in units of 1/p) to the nearest place where the local
    // similarity picture changes
    let rho = match class {
        PointClass::Case1(_) => {
            let (gx, gy) = (gap(&xi), gap(&yi));
            if gx < gy {
                gx
            } else {
                gy
            }
        }
        PointClass::Case2(..) => {
            if xi.is_integer() {
                gap(&yi)
            } else {
                gap(&xi)
            }
        }
        other => return Verdict::Fails(format!("{q} is {other}, no scaling region")),
    };
    let radius = rho.shrink(p, 1) * PRational::new(1, 8);
    let centre = to_plane(q);
    let pts: Vec<PillowPoint> = (-1i64..=1)
        .flat_map(|a| (-1i64..=1).map(move |b| (a, b)))
        .map(|(a, b)| {
            let du = PRational::integer(a) * &radius;
            let dv = PRational::integer(b) * &radius;
            reduce(&centre.translate(&du, &dv))
        })
        .collect();
    let t = LattesMap::new(p);
    let p2 = PRational::integer((p.get() * p.get()) as i64);
    // centre to each neighbour, plus both long diagonals
    let mut pairs: Vec<(usize, usize)> = (0..pts.len()).filter(|&i| i != 4).map(|i| (4, i)).collect();
    pairs.extend([(0, 8), (2, 6)]);
    Verdict::first_failure(pairs.iter(), |&(i, j)| {
        let before = distance(&pts[i], &pts[j]);
        let after = distance(&t.apply(&pts[i]), &t.apply(&pts[j]));
        (after.squared() != &(&p2 * before.squared()))
            .then(|| format!("near {q}: d(T{}, T{})² = {} vs p²·{}", pts[i], pts[j], after.squared(), before.squared()))
    })
}

/// Exponents with `T^m ∘ g = T^n ∘ g ∘ T^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationWitness {
    pub k: u32,
    pub n: u32,
    pub m: u32,
}

impl fmt::Display for RelationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} n={} m={}", self.k, self.n, self.m)
    }
}

fn relation_holds(t: &LattesMap, g: IsometryId, w: RelationWitness, sample: &[PillowPoint]) -> bool {
    sample.par_iter().all(|x| {
        let lhs = t.lifted(&isometry_apply(g, x), w.m);
        let rhs = t.lifted(&isometry_apply(g, &t.lifted(x, w.k)), w.n);
        lhs == rhs
    })
}

pub const RELATION_SCREEN_SIZE: usize = 200;
pub const RELATION_CONFIRM_SIZE: usize = 1000;

/// Lexicographically least `(m, n, k)` with entries in `1..=bound` for which
/// the relation holds on a fixed 200-point `D_p` sample and then on 1000
/// seeded points.
pub fn relation_witness(p: Base, g: IsometryId, bound: u32, seed: u64) -> Option<RelationWitness> {
    let t = LattesMap::new(p);
    let screen = Sampler::new(p, 0x5eed_0000).take(RELATION_SCREEN_SIZE, |s| s.dp_point());
    let confirm = Sampler::new(p, seed).take(RELATION_CONFIRM_SIZE, |s| s.dp_point());
    for m in 1..=bound {
        for n in 1..=bound {
            for k in 1..=bound {
                let w = RelationWitness { k, n, m };
                if relation_holds(&t, g, w, &screen) && relation_holds(&t, g, w, &confirm) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Exact facts about `σ = (1/(p+1), 1/(p+1))` and the 2-tile
/// `X = [(p-1)/p², 1/p]²` around it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    pub p: u32,
    pub sigma: String,
    pub in_sp: bool,
    pub off_seam: bool,
    pub in_tile_interior: bool,
    pub tile: String,
    pub tile_good: bool,
    pub tile_white: bool,
    pub period_two: bool,
}

impl SigmaReport {
    pub fn passed(&self) -> bool {
        self.in_sp && self.off_seam && self.in_tile_interior && self.tile_good && self.tile_white && self.period_two
    }
}

pub fn sigma(p: Base) -> PillowPoint {
    let d = p.get() as i64 + 1;
    PillowPoint::at(Face::Front, (1, d), (1, d)).expect("sigma in square")
}

pub fn sigma_facts(p: Base) -> SigmaReport {
    let s = sigma(p);
    let q = p.get() as u64;
    let x_tile = TileAddress::new(Face::Front, 2, q - 1, q - 1);
    let t = LattesMap::new(p);
    SigmaReport {
        p: p.get(),
        sigma: s.to_string(),
        in_sp: member(p, CarpetSpace::SpFront, &s),
        off_seam: !s.on_seam(),
        in_tile_interior: x_tile.contains_in_interior(p, &s),
        tile: x_tile.to_string(),
        tile_good: tile_is_good(p, &x_tile),
        tile_white: tile_color(&x_tile) == TileColor::White,
        period_two: t.iterate(&s, 2) == s && t.apply(&s) != s,
    }
}

/// The peripheral circle (if any) that `q` lies on, in `D_p`, up to the given
/// birth level.
pub fn peripheral_of(p: Base, q: &PillowPoint, max_level: u32) -> Option<PeripheralCircleId> {
    on_peripheral(p, CarpetSpace::Dp, q, max_level).ok().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pillow::SquareSymmetry;

    fn b(p: u32) -> Base {
        Base::new(p).unwrap()
    }

    fn pt(face: Face, x: (i64, i64), y: (i64, i64)) -> PillowPoint {
        PillowPoint::at(face, x, y).unwrap()
    }

    #[test]
    fn apply_examples() {
        let t = LattesMap::new(b(3));
        assert_eq!(t.iterate(&pt(Face::Front, (1, 9), (1, 9)), 2), pt(Face::Front, (1, 1), (1, 1)));
        assert_eq!(t.apply(&pt(Face::Front, (1, 2), (1, 2))), pt(Face::Front, (1, 2), (1, 2)));
        let img = t.apply(&pt(Face::Front, (1, 3), (1, 2)));
        assert!(img.on_seam(), "{img}");
        assert_eq!(t.apply(&pt(Face::Front, (0, 1), (0, 1))), pt(Face::Front, (0, 1), (0, 1)));
    }

    #[test]
    fn iterate_matches_lift() {
        let p = b(5);
        let t = LattesMap::new(p);
        let mut s = Sampler::new(p, 3);
        for _ in 0..200 {
            let q = s.pillow_point();
            for n in 0..4 {
                assert_eq!(t.iterate(&q, n), t.lifted(&q, n));
            }
        }
    }

    #[test]
    fn inverse_branch_examples() {
        let p = b(3);
        let t = LattesMap::new(p);
        assert_eq!(InverseBranch::new(p, 1).apply(&pt(Face::Front, (1, 1), (1, 1))).unwrap(), pt(Face::Front, (1, 3), (1, 3)));
        let q = pt(Face::Front, (2, 7), (5, 11));
        assert_eq!(InverseBranch::new(p, 0).apply(&q).unwrap(), q);
        let z = InverseBranch::new(p, 2).apply(&pt(Face::Front, (1, 2), (0, 1))).unwrap();
        assert_eq!(z, pt(Face::Front, (1, 18), (0, 1)));
        assert_eq!(t.iterate(&z, 2), pt(Face::Front, (1, 2), (0, 1)));
        assert!(InverseBranch::new(p, 1).apply(&pt(Face::Back, (1, 2), (1, 2))).is_err());
        // seam points count as front points
        assert!(InverseBranch::new(p, 1).apply(&pt(Face::Back, (1, 2), (0, 1))).is_ok());
    }

    #[test]
    fn branch_consistency_examples() {
        assert!(branch_consistency_check(b(3), 2, 1).holds());
        assert!(branch_consistency_check(b(5), 3, 0).holds());
        assert!(branch_consistency_check(b(3), 4, 2).holds());
    }

    #[test]
    fn invariance_examples() {
        let p = b(3);
        let samples = Sampler::new(p, 11).take(300, |s| s.dp_point());
        assert!(forward_invariance_check(p, &samples).holds());
        let z = backward_noninvariance_witness(p).unwrap();
        assert!(!member(p, CarpetSpace::Dp, &z));
        assert!(member(p, CarpetSpace::Dp, &LattesMap::new(p).apply(&z)));
        assert!(side_invariance_check(b(3)).holds());
        assert!(side_invariance_check(b(5)).holds());
        let t = LattesMap::new(p);
        assert_eq!(t.apply(&pt(Face::Front, (1, 2), (0, 1))), pt(Face::Front, (1, 2), (0, 1)));
        assert!(t.apply(&pt(Face::Front, (1, 3), (1, 1))).y().is_one());
    }

    #[test]
    fn peripheral_image_examples() {
        let p = b(3);
        let m_front = PeripheralCircleId::middle(CarpetSpace::Dp, Face::Front);
        let m_back = PeripheralCircleId::middle(CarpetSpace::Dp, Face::Back);
        assert_eq!(peripheral_image(p, &m_front), PeripheralImage::Outer);
        assert_eq!(peripheral_image(p, &m_back), PeripheralImage::Outer);
        let c = PeripheralCircleId::removed(CarpetSpace::Dp, Face::Front, 2, 0, 0);
        assert_eq!(peripheral_image(p, &c), PeripheralImage::Circle(m_front));
        // the tile (1,0) is black: its middle square lands on M'
        let c = PeripheralCircleId::removed(CarpetSpace::Dp, Face::Front, 2, 1, 0);
        assert_eq!(peripheral_image(p, &c), PeripheralImage::Circle(m_back));
        for c in [m_front, m_back] {
            assert!(confirm_peripheral_image(p, &c, 20).holds());
        }
    }

    #[test]
    fn classify_examples() {
        let p = b(3);
        let q = pt(Face::Front, (1, 4), (1, 4));
        assert_eq!(classify_point(p, &q), PointClass::Case1(TileAddress::new(Face::Front, 1, 0, 0)));
        assert!(scaling_certificate(p, &q).holds());
        assert_eq!(classify_point(p, &pt(Face::Front, (1, 3), (1, 2))), PointClass::Exceptional(ExceptionalReason::OnM));
        let e = pt(Face::Front, (1, 3), (1, 10));
        assert_eq!(
            classify_point(p, &e),
            PointClass::Case2(TileAddress::new(Face::Front, 1, 0, 0), TileAddress::new(Face::Front, 1, 1, 0))
        );
        assert!(scaling_certificate(p, &e).holds());
        // seam edge shared by a front and a back tile
        let s = pt(Face::Front, (1, 2), (0, 1));
        assert!(matches!(classify_point(p, &s), PointClass::Case2(..)));
        assert!(scaling_certificate(p, &s).holds());
        assert_eq!(classify_point(p, &pt(Face::Back, (2, 3), (1, 3))), PointClass::Exceptional(ExceptionalReason::OneVertexF));
        assert_eq!(classify_point(p, &pt(Face::Back, (1, 2), (1, 3))), PointClass::Exceptional(ExceptionalReason::OnMprime));
        assert_eq!(classify_point(p, &pt(Face::Back, (1, 2), (1, 2))), PointClass::NotInDp);
    }

    #[test]
    fn relation_examples() {
        let p = b(3);
        let want = Some(RelationWitness { k: 1, n: 1, m: 2 });
        assert_eq!(relation_witness(p, IsometryId::IDENTITY, 3, 0), want);
        assert_eq!(relation_witness(p, IsometryId::R, 3, 0), want);
        assert_eq!(relation_witness(p, IsometryId::new(SquareSymmetry::R90, false), 3, 0), want);
    }

    #[test]
    fn sigma_examples() {
        for p in [3, 5, 7] {
            let r = sigma_facts(b(p));
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(sigma(b(3)), pt(Face::Front, (1, 4), (1, 4)));
        assert_eq!(sigma(b(5)), pt(Face::Front, (1, 6), (1, 6)));
    }

    #[test]
    fn preimage_count_is_degree() {
        let p = b(3);
        let t = LattesMap::new(p);
        let mut s = Sampler::new(p, 5);
        for _ in 0..100 {
            let w = s.pillow_point();
            let pre = t.preimages(&w);
            assert!(pre.iter().all(|z| t.apply(z) == w));
            if w.is_pillow_corner() {
                assert!(pre.len() < 9);
            } else {
                assert_eq!(pre.len(), 9, "{w}");
            }
        }
        assert_eq!(t.preimages(&pt(Face::Front, (0, 1), (0, 1))).len(), 5);
    }

    #[test]
    fn preimages_sit_one_per_tile_of_matching_colour() {
        // each 1-tile maps onto the face its colour names, so a point off the
        // seam has one preimage in each of the p² tiles of that colour
        for p in [3, 5] {
            let p = b(p);
            let t = LattesMap::new(p);
            let mut s = Sampler::new(p, 9);
            for _ in 0..40 {
                let w = s.pillow_point();
                if w.on_seam() {
                    continue;
                }
                let want = if w.face() == Face::Front { TileColor::White } else { TileColor::Black };
                let pre = t.preimages(&w);
                let mut tiles: Vec<TileAddress> = pre
                    .iter()
                    .map(|z| {
                        let ts = tile_of_point(p, z, 1);
                        *ts.iter().find(|x| tile_color(x) == want).expect("preimage in a tile of the right colour")
                    })
                    .collect();
                tiles.sort();
                tiles.dedup();
                assert_eq!(tiles.len(), (p.get() * p.get()) as usize, "{w}");
            }
        }
    }
}
