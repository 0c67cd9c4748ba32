//! Membership in `S_p`, `S'_p`, `D_p`, the Cantor set `C_p`, peripheral
//! circles and the weak tangents `W`, `W̃`.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, parse, Error, Result};
use crate::exactnum::{expand, first_hit, Base, DigitExpansion, PRational};
use crate::pillow::{Face, PillowPoint};
use crate::tiling::{tile_is_good, TileAddress};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CarpetSpace {
    /// `S_p` on the front face.
    SpFront,
    /// `S'_p` on the back face.
    SpBack,
    /// The double `D_p = S_p ∪ S'_p`.
    Dp,
}

impl CarpetSpace {
    fn admits_face(self, face: Face) -> bool {
        match self {
            CarpetSpace::SpFront => face == Face::Front,
            CarpetSpace::SpBack => face == Face::Back,
            CarpetSpace::Dp => true,
        }
    }

    fn faces(self) -> &'static [Face] {
        match self {
            CarpetSpace::SpFront => &Face::BOTH[..1],
            CarpetSpace::SpBack => &Face::BOTH[1..],
            CarpetSpace::Dp => &Face::BOTH,
        }
    }
}

impl fmt::Display for CarpetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CarpetSpace::SpFront => "sp",
            CarpetSpace::SpBack => "sp-back",
            CarpetSpace::Dp => "dp",
        })
    }
}

impl FromStr for CarpetSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sp" | "sp-front" | "sp_front" => Ok(CarpetSpace::SpFront),
            "sp-back" | "sp_back" => Ok(CarpetSpace::SpBack),
            "dp" => Ok(CarpetSpace::Dp),
            other => Err(parse(format!("unknown carpet space {other:?}"))),
        }
    }
}

/// Result of the digit test, with the offending digit position when the
/// point is excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Smallest position at which every expansion pair shows the middle pair.
    pub first_violation: Option<u64>,
}

/// Digit criterion on the unit square: some pair of expansions of `(x, y)`
/// avoids the middle pair at every position.
pub fn square_membership(p: Base, x: &PRational, y: &PRational) -> Membership {
    let m = p.middle();
    let ex = expand(x, p).expect("coordinates lie in [0,1]");
    let ey = expand(y, p).expect("coordinates lie in [0,1]");
    let mut earliest: Option<u64> = None;
    for a in &ex {
        for b in &ey {
            match first_hit(a, b, (m, m)) {
                None => return Membership { member: true, first_violation: None },
                Some(k) => earliest = Some(earliest.map_or(k, |e| e.max(k))),
            }
        }
    }
    Membership { member: false, first_violation: earliest }
}

pub fn member(p: Base, space: CarpetSpace, q: &PillowPoint) -> bool {
    membership(p, space, q).member
}

pub fn membership(p: Base, space: CarpetSpace, q: &PillowPoint) -> Membership {
    if !q.faces().iter().any(|&f| space.admits_face(f)) {
        return Membership { member: false, first_violation: None };
    }
    square_membership(p, q.x(), q.y())
}

fn avoids_middle(e: &DigitExpansion, m: u32) -> bool {
    let horizon = (e.preperiod().len() + e.cycle_len()) as u64;
    (1..=horizon).all(|k| e.digit_at(k) != m)
}

/// `t ∈ C_p`: some expansion of `t` never uses the middle digit.
pub fn cantor_member(p: Base, t: &PRational) -> Result<bool> {
    let m = p.middle();
    Ok(expand(t, p)?.iter().any(|e| avoids_middle(e, m)))
}

/// Every sampled pair of `C_p` points must lie in `S_p`; returns the first
/// pair that does not.
pub fn cp_product_subset_check(
    p: Base,
    samples: &[(PRational, PRational)],
) -> Result<Option<(PRational, PRational)>> {
    for (s, t) in samples {
        if !(cantor_member(p, s)? && cantor_member(p, t)?) {
            continue;
        }
        if !square_membership(p, s, t).member {
            return Ok(Some((s.clone(), t.clone())));
        }
    }
    Ok(None)
}

/// Which peripheral circle: the seam `O`, or the boundary of the middle
/// level-`k` subsquare of a good `(k-1)`-tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleKind {
    Outer,
    Removed { face: Face, level: u32, parent_i: u64, parent_j: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeripheralCircleId {
    pub ambient: CarpetSpace,
    pub kind: CircleKind,
}

impl PeripheralCircleId {
    /// The middle circle `M` (front) or `M'` (back).
    pub fn middle(ambient: CarpetSpace, face: Face) -> Self {
        PeripheralCircleId { ambient, kind: CircleKind::Removed { face, level: 1, parent_i: 0, parent_j: 0 } }
    }

    pub fn removed(ambient: CarpetSpace, face: Face, level: u32, parent_i: u64, parent_j: u64) -> Self {
        PeripheralCircleId { ambient, kind: CircleKind::Removed { face, level, parent_i, parent_j } }
    }

    pub fn parent(&self) -> Option<TileAddress> {
        match self.kind {
            CircleKind::Outer => None,
            CircleKind::Removed { face, level, parent_i, parent_j } => {
                Some(TileAddress::new(face, level - 1, parent_i, parent_j))
            }
        }
    }

    /// Lower-left corner and side of the removed square, as rationals.
    pub fn square(&self, p: Base) -> Option<(Face, PRational, PRational, PRational)> {
        match self.kind {
            CircleKind::Outer => None,
            CircleKind::Removed { face, level, parent_i, parent_j } => {
                let q = p.get() as i64;
                let m = p.middle() as i64;
                let lo_x = PRational::integer(parent_i as i64 * q + m).shrink(p, level);
                let lo_y = PRational::integer(parent_j as i64 * q + m).shrink(p, level);
                Some((face, lo_x, lo_y, PRational::power(p, -(level as i32))))
            }
        }
    }

    /// `count` points spread evenly along the circle, starting at a corner.
    pub fn sample_points(&self, p: Base, count: usize) -> Vec<PillowPoint> {
        let perimeter_point = |face: Face, lo_x: &PRational, lo_y: &PRational, side: &PRational, s: &PRational| {
            // s ∈ [0, 4): walk counterclockwise from the lower-left corner
            let leg = s.floor();
            let f = s.fract() * side;
            let (x, y) = match i64::try_from(&leg).unwrap() {
                0 => (lo_x + &f, lo_y.clone()),
                1 => (lo_x + side, lo_y + &f),
                2 => (lo_x + side - &f, lo_y + side),
                _ => (lo_x.clone(), lo_y + side - &f),
            };
            PillowPoint::new(face, x, y).expect("circle inside the unit square")
        };
        let step = |k: usize| PRational::new(4 * k as i64, count as i64);
        match self.square(p) {
            Some((face, lo_x, lo_y, side)) => {
                (0..count).map(|k| perimeter_point(face, &lo_x, &lo_y, &side, &step(k))).collect()
            }
            None => {
                let (zero, one) = (PRational::zero(), PRational::one());
                (0..count).map(|k| perimeter_point(Face::Front, &zero, &zero, &one, &step(k))).collect()
            }
        }
    }

    /// True iff `q` lies on this circle.
    pub fn contains(&self, p: Base, q: &PillowPoint) -> bool {
        match self.square(p) {
            None => q.on_seam(),
            Some((face, lo_x, lo_y, side)) => {
                if q.face() != face {
                    return false;
                }
                let hi_x = &lo_x + &side;
                let hi_y = &lo_y + &side;
                let (x, y) = (q.x(), q.y());
                let in_x = *x >= lo_x && *x <= hi_x;
                let in_y = *y >= lo_y && *y <= hi_y;
                in_x && in_y && (*x == lo_x || *x == hi_x || *y == lo_y || *y == hi_y)
            }
        }
    }
}

impl fmt::Display for PeripheralCircleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CircleKind::Outer => f.write_str("outer"),
            CircleKind::Removed { face, level, parent_i, parent_j } => {
                write!(f, "removed:{face}:{}:{parent_i},{parent_j}", level - 1)
            }
        }
    }
}

/// Parse `"outer"` or `"removed:face:k:i,j"` in the given ambient space.
pub fn parse_circle(s: &str, ambient: CarpetSpace) -> Result<PeripheralCircleId> {
    let s = s.trim();
    if s == "outer" {
        return Ok(PeripheralCircleId { ambient, kind: CircleKind::Outer });
    }
    let rest = s
        .strip_prefix("removed:")
        .ok_or_else(|| parse(format!("expected \"outer\" or \"removed:face:k:i,j\", got {s:?}")))?;
    let parent: TileAddress = rest.parse()?;
    Ok(PeripheralCircleId::removed(ambient, parent.face, parent.level + 1, parent.i, parent.j))
}

/// Peripheral circles born at level `<= max_level`, outer circle first, then
/// by `(level, face, i, j)`. `O` is not peripheral in `D_p`.
pub fn peripheral_circles_up_to(p: Base, space: CarpetSpace, max_level: u32) -> Vec<PeripheralCircleId> {
    let mut out = Vec::new();
    if space != CarpetSpace::Dp {
        out.push(PeripheralCircleId { ambient: space, kind: CircleKind::Outer });
    }
    for level in 1..=max_level {
        for &face in space.faces() {
            let side = p.pow(level - 1);
            for i in 0..side {
                for j in 0..side {
                    if tile_is_good(p, &TileAddress::new(face, level - 1, i, j)) {
                        out.push(PeripheralCircleId::removed(space, face, level, i, j));
                    }
                }
            }
        }
    }
    out
}

/// The peripheral circle of lowest birth level through `q`, if any.
pub fn on_peripheral(
    p: Base,
    space: CarpetSpace,
    q: &PillowPoint,
    max_level: u32,
) -> Result<Option<PeripheralCircleId>> {
    if !member(p, space, q) {
        return Err(domain(format!("{q} is not in {space}")));
    }
    if q.on_seam() {
        return Ok((space != CarpetSpace::Dp).then_some(PeripheralCircleId { ambient: space, kind: CircleKind::Outer }));
    }
    let m = p.middle() as u64;
    let q_base = p.get() as u64;
    for level in 1..=max_level {
        let sx = q.x().scale(p, level);
        let sy = q.y().scale(p, level);
        let (Some(is), Some(js)) = (middle_cells(&sx, q_base, m), middle_cells(&sy, q_base, m)) else {
            continue;
        };
        for &i in &is {
            for &j in &js {
                let parent = TileAddress::new(q.face(), level - 1, i / q_base, j / q_base);
                let id = PeripheralCircleId::removed(space, q.face(), level, parent.i, parent.j);
                if tile_is_good(p, &parent) && id.contains(p, q) {
                    return Ok(Some(id));
                }
            }
        }
    }
    Ok(None)
}

/// Cells `k ≡ m (mod p)` with `scaled ∈ [k, k+1]`.
fn middle_cells(scaled: &PRational, q: u64, m: u64) -> Option<Vec<u64>> {
    let f = u64::try_from(&scaled.floor()).ok()?;
    let mut cells = vec![f];
    if scaled.is_integer() && f > 0 {
        cells.push(f - 1);
    }
    cells.retain(|k| k % q == m);
    (!cells.is_empty()).then_some(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeakTangentSpace {
    /// `W = ⋃ p^n S_p`, the blow-up at the corner.
    W,
    /// `W̃ = W ∪ iW ∪ (-1)W`.
    WTilde,
}

impl FromStr for WeakTangentSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "W" | "w" => Ok(WeakTangentSpace::W),
            "Wtilde" | "wtilde" | "W~" => Ok(WeakTangentSpace::WTilde),
            other => Err(parse(format!("unknown weak tangent {other:?}"))),
        }
    }
}

pub fn weak_tangent_member(p: Base, space: WeakTangentSpace, x: &PRational, y: &PRational) -> bool {
    match space {
        WeakTangentSpace::W => in_w(p, x, y),
        WeakTangentSpace::WTilde => {
            // z ∈ iW iff -iz = (y, -x) ∈ W; z ∈ (-1)W iff -z ∈ W
            in_w(p, x, y) || in_w(p, y, &-x) || in_w(p, &-x, &-y)
        }
    }
}

fn in_w(p: Base, x: &PRational, y: &PRational) -> bool {
    if x.is_negative() || y.is_negative() {
        return false;
    }
    let big = if x > y { x } else { y };
    let mut n = 0u32;
    while *big > PRational::power(p, n as i32) {
        n += 1;
    }
    square_membership(p, &x.shrink(p, n), &y.shrink(p, n)).member
}

/// The point `((p-1)/(2p), (p-1)/(2p))`, the lower-left corner of the middle
/// removed square pulled half a cell toward the centre.
pub fn q_point(p: Base) -> PillowPoint {
    let den = 2 * p.get() as i64;
    let num = p.get() as i64 - 1;
    PillowPoint::at(Face::Front, (num, den), (num, den)).expect("q lies in the square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::tile_of_point;

    fn b(p: u32) -> Base {
        Base::new(p).unwrap()
    }

    fn r(n: i64, d: i64) -> PRational {
        PRational::new(n, d)
    }

    fn pt(face: Face, x: (i64, i64), y: (i64, i64)) -> PillowPoint {
        PillowPoint::at(face, x, y).unwrap()
    }

    #[test]
    fn member_examples() {
        let p = b(3);
        assert!(member(p, CarpetSpace::SpFront, &pt(Face::Front, (0, 1), (0, 1))));
        assert!(!member(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 2), (1, 2))));
        assert!(member(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 4), (1, 4))));
        // boundary of the removed square is kept
        assert!(member(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 3), (1, 2))));
        assert!(member(p, CarpetSpace::SpFront, &pt(Face::Front, (2, 3), (2, 3))));
        // face restrictions
        assert!(!member(p, CarpetSpace::SpFront, &pt(Face::Back, (1, 4), (1, 4))));
        assert!(member(p, CarpetSpace::SpBack, &pt(Face::Back, (1, 4), (1, 4))));
        assert!(member(p, CarpetSpace::SpBack, &pt(Face::Front, (0, 1), (1, 2))));
        assert!(member(p, CarpetSpace::Dp, &pt(Face::Back, (1, 4), (1, 4))));
    }

    #[test]
    fn witness_position() {
        let p = b(3);
        let got = membership(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 2), (1, 2)));
        assert_eq!(got.first_violation, Some(1));
        // 1/18 = 0.00111... and 1/2 = 0.111... first collide at position 3
        let got = membership(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 18), (1, 2)));
        assert_eq!(got.first_violation, Some(3));
    }

    #[test]
    fn cantor_examples() {
        let p = b(3);
        assert!(cantor_member(p, &PRational::zero()).unwrap());
        assert!(!cantor_member(p, &r(1, 2)).unwrap());
        assert!(cantor_member(p, &r(1, 4)).unwrap());
        assert!(cantor_member(p, &r(1, 3)).unwrap());
        assert!(cantor_member(p, &r(3, 4)).unwrap());
        assert!(cantor_member(b(3), &r(3, 2)).is_err());
    }

    #[test]
    fn cp_product_examples() {
        let p = b(3);
        let samples = vec![(r(0, 1), r(1, 1)), (r(1, 4), r(3, 4)), (r(1, 2), r(1, 2))];
        assert_eq!(cp_product_subset_check(p, &samples).unwrap(), None);
    }

    #[test]
    fn peripheral_enumeration() {
        let p = b(3);
        let c = peripheral_circles_up_to(p, CarpetSpace::SpFront, 1);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].kind, CircleKind::Outer);
        assert_eq!(c[1], PeripheralCircleId::middle(CarpetSpace::SpFront, Face::Front));
        let c = peripheral_circles_up_to(p, CarpetSpace::SpFront, 2);
        assert_eq!(c.len(), 10);
        let c = peripheral_circles_up_to(p, CarpetSpace::Dp, 1);
        assert_eq!(
            c,
            vec![
                PeripheralCircleId::middle(CarpetSpace::Dp, Face::Front),
                PeripheralCircleId::middle(CarpetSpace::Dp, Face::Back)
            ]
        );
        for level in 1..=4 {
            let per_face = peripheral_circles_up_to(p, CarpetSpace::SpFront, level)
                .iter()
                .filter(|c| matches!(c.kind, CircleKind::Removed { level: k, .. } if k == level))
                .count();
            assert_eq!(per_face, 8usize.pow(level - 1));
        }
    }

    #[test]
    fn circle_text() {
        let c = PeripheralCircleId::removed(CarpetSpace::Dp, Face::Front, 3, 2, 5);
        assert_eq!(c.to_string(), "removed:front:2:2,5");
        assert_eq!(parse_circle("removed:front:2:2,5", CarpetSpace::Dp).unwrap(), c);
        assert_eq!(parse_circle("outer", CarpetSpace::SpFront).unwrap().kind, CircleKind::Outer);
        assert!(parse_circle("inner", CarpetSpace::Dp).is_err());
    }

    #[test]
    fn on_peripheral_examples() {
        let p = b(3);
        let got = on_peripheral(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 3), (1, 2)), 5).unwrap();
        assert_eq!(got, Some(PeripheralCircleId::middle(CarpetSpace::SpFront, Face::Front)));
        let got = on_peripheral(p, CarpetSpace::SpFront, &pt(Face::Front, (0, 1), (1, 2)), 5).unwrap();
        assert_eq!(got.unwrap().kind, CircleKind::Outer);
        let got = on_peripheral(p, CarpetSpace::Dp, &pt(Face::Front, (0, 1), (1, 2)), 5).unwrap();
        assert_eq!(got, None);
        let got = on_peripheral(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 4), (1, 4)), 10).unwrap();
        assert_eq!(got, None);
        assert!(on_peripheral(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 2), (1, 2)), 3).is_err());
        // a level-2 circle: middle of tile (0,0) at level 1 is [1/9, 2/9]^2
        let got = on_peripheral(p, CarpetSpace::SpFront, &pt(Face::Front, (1, 9), (3, 18)), 5).unwrap();
        assert_eq!(got, Some(PeripheralCircleId::removed(CarpetSpace::SpFront, Face::Front, 2, 0, 0)));
    }

    #[test]
    fn sampled_circle_points_are_members() {
        let p = b(3);
        for c in peripheral_circles_up_to(p, CarpetSpace::Dp, 3) {
            for q in c.sample_points(p, 12) {
                assert!(member(p, CarpetSpace::Dp, &q), "{q} on {c}");
                assert!(c.contains(p, &q));
            }
            // centre of the removed square is not a member
            let (face, lo_x, lo_y, side) = c.square(p).unwrap();
            let half = PRational::half() * &side;
            let centre = PillowPoint::new(face, &lo_x + &half, &lo_y + &half).unwrap();
            assert!(!member(p, CarpetSpace::Dp, &centre));
        }
    }

    #[test]
    fn weak_tangent_examples() {
        let p = b(3);
        let z = PRational::zero();
        assert!(weak_tangent_member(p, WeakTangentSpace::W, &z, &z));
        assert!(weak_tangent_member(p, WeakTangentSpace::W, &r(2, 1), &r(2, 1)));
        assert!(!weak_tangent_member(p, WeakTangentSpace::W, &r(-1, 1), &z));
        assert!(weak_tangent_member(p, WeakTangentSpace::WTilde, &r(-1, 1), &z));
        // centre of the first removed square of 3 S_3
        assert!(!weak_tangent_member(p, WeakTangentSpace::W, &r(3, 2), &r(3, 2)));
        // the fourth quadrant is not covered by W̃
        assert!(!weak_tangent_member(p, WeakTangentSpace::WTilde, &r(1, 4), &r(-1, 4)));
        assert!(weak_tangent_member(p, WeakTangentSpace::WTilde, &r(-1, 4), &r(1, 4)));
        assert!(weak_tangent_member(p, WeakTangentSpace::WTilde, &r(-1, 4), &r(-1, 4)));
    }

    #[test]
    fn q_point_on_middle_circle() {
        for p in [3, 5, 7] {
            let p = b(p);
            let q = q_point(p);
            assert!(member(p, CarpetSpace::SpFront, &q));
            let on = on_peripheral(p, CarpetSpace::SpFront, &q, 1).unwrap();
            assert_eq!(on, Some(PeripheralCircleId::middle(CarpetSpace::SpFront, Face::Front)));
        }
    }

    #[test]
    fn membership_agrees_with_tiles() {
        let p = b(3);
        for a in 0..=54 {
            for c in 0..=54 {
                let q = pt(Face::Front, (a, 54), (c, 54));
                let by_tiles =
                    (0..=6).all(|n| tile_of_point(p, &q, n).iter().any(|t| tile_is_good(p, t)));
                assert_eq!(member(p, CarpetSpace::SpFront, &q), by_tiles, "{q}");
            }
        }
    }
}
