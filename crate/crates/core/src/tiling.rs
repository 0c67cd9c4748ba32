//! Level-`n` subdivision of the pillow into tiles, edges and vertices.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{domain, parse, Error, Result};
use crate::exactnum::{Base, PRational};
use crate::pillow::{distance, reduce_scaled, Face, PillowPoint};

/// The closed square `[i/p^n, (i+1)/p^n] × [j/p^n, (j+1)/p^n]` on one face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileAddress {
    pub face: Face,
    pub level: u32,
    pub i: u64,
    pub j: u64,
}

impl TileAddress {
    pub fn new(face: Face, level: u32, i: u64, j: u64) -> Self {
        TileAddress { face, level, i, j }
    }

    pub fn root(face: Face) -> Self {
        TileAddress { face, level: 0, i: 0, j: 0 }
    }

    pub fn check(&self, p: Base) -> Result<()> {
        let side = p.pow(self.level);
        if self.i >= side || self.j >= side {
            return Err(domain(format!("tile {self} out of range for p={p}")));
        }
        Ok(())
    }

    /// Base-`p` digits of `i` and `j`, most significant first, padded to the
    /// tile level. Digit `k` (1-based) is the level-`k` choice.
    pub fn digits(&self, p: Base) -> (Vec<u32>, Vec<u32>) {
        (digits_of(self.i, p, self.level), digits_of(self.j, p, self.level))
    }

    pub fn parent(&self, p: Base) -> Option<TileAddress> {
        (self.level > 0).then(|| {
            let q = p.get() as u64;
            TileAddress { face: self.face, level: self.level - 1, i: self.i / q, j: self.j / q }
        })
    }

    pub fn children(&self, p: Base) -> impl Iterator<Item = TileAddress> + '_ {
        let q = p.get() as u64;
        let (face, level, i, j) = (self.face, self.level + 1, self.i, self.j);
        (0..q).flat_map(move |a| (0..q).map(move |b| TileAddress { face, level, i: i * q + a, j: j * q + b }))
    }

    pub fn contains(&self, p: Base, q: &PillowPoint) -> bool {
        if !q.faces().contains(&self.face) {
            return false;
        }
        let lo_x = PRational::integer(self.i as i64).shrink(p, self.level);
        let lo_y = PRational::integer(self.j as i64).shrink(p, self.level);
        let side = PRational::power(p, -(self.level as i32));
        let hi_x = &lo_x + &side;
        let hi_y = &lo_y + &side;
        *q.x() >= lo_x && *q.x() <= hi_x && *q.y() >= lo_y && *q.y() <= hi_y
    }

    /// True iff `q` lies in the open square.
    pub fn contains_in_interior(&self, p: Base, q: &PillowPoint) -> bool {
        if q.on_seam() || q.face() != self.face {
            return false;
        }
        let sx = q.x().scale(p, self.level);
        let sy = q.y().scale(p, self.level);
        let (i, j) = (PRational::integer(self.i as i64), PRational::integer(self.j as i64));
        let one = PRational::one();
        sx > i && sx < &i + &one && sy > j && sy < &j + &one
    }

    pub fn center(&self, p: Base) -> PillowPoint {
        let den = 2 * p.pow(self.level) as i64;
        PillowPoint::at(self.face, (2 * self.i as i64 + 1, den), (2 * self.j as i64 + 1, den))
            .expect("tile centre lies in the unit square")
    }

    pub fn corners(&self, p: Base) -> [PillowPoint; 4] {
        let den = p.pow(self.level) as i64;
        let (i, j) = (self.i as i64, self.j as i64);
        let at = |a: i64, b: i64| PillowPoint::at(self.face, (a, den), (b, den)).expect("corner in square");
        [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)]
    }
}

fn digits_of(mut v: u64, p: Base, len: u32) -> Vec<u32> {
    let q = p.get() as u64;
    let mut out = vec![0u32; len as usize];
    for slot in out.iter_mut().rev() {
        *slot = (v % q) as u32;
        v /= q;
    }
    out
}

impl fmt::Display for TileAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{},{}", self.face, self.level, self.i, self.j)
    }
}

impl FromStr for TileAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || parse(format!("expected \"face:n:i,j\", got {s:?}"));
        let mut parts = s.trim().splitn(3, ':');
        let face: Face = parts.next().ok_or_else(bad)?.parse()?;
        let level: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let (i, j) = parts.next().ok_or_else(bad)?.split_once(',').ok_or_else(bad)?;
        Ok(TileAddress {
            face,
            level,
            i: i.trim().parse().map_err(|_| bad())?,
            j: j.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Indices `k` with `c ∈ [k, k+1]` for a coordinate already scaled by `p^n`.
fn covering_indices(scaled: &PRational, side: u64) -> Vec<u64> {
    let f = u64::try_from(&scaled.floor()).expect("coordinate in range");
    if scaled.is_integer() {
        [f.checked_sub(1), Some(f)].into_iter().flatten().filter(|&k| k < side).collect()
    } else {
        vec![f]
    }
}

/// All level-`n` tiles containing `q`, sorted by `(face, i, j)`.
pub fn tile_of_point(p: Base, q: &PillowPoint, n: u32) -> Vec<TileAddress> {
    let side = p.pow(n);
    let is = covering_indices(&q.x().scale(p, n), side);
    let js = covering_indices(&q.y().scale(p, n), side);
    let mut out = Vec::with_capacity(q.faces().len() * is.len() * js.len());
    for &face in q.faces() {
        for &i in &is {
            for &j in &js {
                out.push(TileAddress { face, level: n, i, j });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileColor {
    White,
    Black,
}

impl fmt::Display for TileColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TileColor::White => "white",
            TileColor::Black => "black",
        })
    }
}

/// White iff `T^n` maps the tile onto the front face.
pub fn tile_color(t: &TileAddress) -> TileColor {
    let even = (t.i + t.j) % 2 == 0;
    match (t.face, even) {
        (Face::Front, true) | (Face::Back, false) => TileColor::White,
        _ => TileColor::Black,
    }
}

/// A tile is good iff its interior meets `D_p`: no level carries the middle
/// digit in both coordinates.
pub fn tile_is_good(p: Base, t: &TileAddress) -> bool {
    let q = p.get() as u64;
    let m = p.middle() as u64;
    let (mut i, mut j) = (t.i, t.j);
    for _ in 0..t.level {
        if i % q == m && j % q == m {
            return false;
        }
        i /= q;
        j /= q;
    }
    true
}

pub fn count_tiles(p: Base, n: u32) -> BigUint {
    BigUint::from(2u32) * num_traits::pow(BigUint::from(p.get()), 2 * n as usize)
}

pub fn count_good_tiles(p: Base, n: u32) -> BigUint {
    let q = p.get() as u64;
    BigUint::from(2u32) * num_traits::pow(BigUint::from(q * q - 1), n as usize)
}

/// Level-`n` tiles in lexicographic `(face, i, j)` order.
pub fn enumerate_tiles(p: Base, n: u32) -> impl Iterator<Item = TileAddress> {
    let side = p.pow(n);
    Face::BOTH.into_iter().flat_map(move |face| {
        (0..side).flat_map(move |i| (0..side).map(move |j| TileAddress { face, level: n, i, j }))
    })
}

pub fn enumerate_good_tiles(p: Base, n: u32) -> impl Iterator<Item = TileAddress> {
    enumerate_tiles(p, n).filter(move |t| tile_is_good(p, t))
}

/// Bitmask of the levels at which an index carries the middle digit.
fn middle_mask(v: u64, p: Base, n: u32) -> u64 {
    let q = p.get() as u64;
    let m = p.middle() as u64;
    let mut v = v;
    let mut mask = 0u64;
    for k in 0..n {
        if v % q == m {
            mask |= 1 << k;
        }
        v /= q;
    }
    mask
}

/// Walk every tile and tally `(all, good)`.
pub fn count_by_enumeration(p: Base, n: u32) -> (u64, u64) {
    assert!(n < 64, "level too deep to enumerate");
    let side = p.pow(n);
    let masks: Vec<u64> = (0..side).map(|v| middle_mask(v, p, n)).collect();
    let (all, good) = masks
        .par_iter()
        .map(|&mi| {
            let good = masks.iter().filter(|&&mj| mi & mj == 0).count() as u64;
            (side, good)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    // both faces carry the same pattern
    (2 * all, 2 * good)
}

/// Tiles sharing a side with `t`, including neighbours across the seam.
pub fn side_neighbors(p: Base, t: &TileAddress) -> Vec<TileAddress> {
    let l = 2 * p.pow(t.level) as i64;
    let cu = 2 * t.i as i64 + 1;
    let cv = match t.face {
        Face::Front => 2 * t.j as i64 + 1,
        Face::Back => -(2 * t.j as i64 + 1),
    };
    let mut out: Vec<TileAddress> = [(2, 0), (-2, 0), (0, 2), (0, -2)]
        .into_iter()
        .map(|(du, dv)| tile_at_doubled(t.level, l, cu + du, cv + dv))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The tile whose centre is the plane point `(u/l, v/l)` with `u, v` odd.
fn tile_at_doubled(level: u32, l: i64, u: i64, v: i64) -> TileAddress {
    let (face, x, y) = reduce_scaled(l, u, v);
    debug_assert!(x % 2 == 1 && y % 2 == 1);
    TileAddress { face, level, i: (x / 2) as u64, j: (y / 2) as u64 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A level-`n` edge from `(a, b)` to `(a+1, b)` (horizontal) or `(a, b+1)`
/// (vertical), canonical on the seam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeAddress {
    pub face: Face,
    pub level: u32,
    pub a: u64,
    pub b: u64,
    pub orientation: Orientation,
}

/// Plane lattice of level `n`: integer points `(u, v)` stand for `(u, v)/p^n`.
struct Lattice {
    level: u32,
    l: i64,
}

impl Lattice {
    fn new(p: Base, level: u32) -> Self {
        Lattice { level, l: p.pow(level) as i64 }
    }

    fn square(&self, u: i64, v: i64) -> TileAddress {
        // lower-left corner (u, v)
        tile_at_doubled(self.level, 2 * self.l, 2 * u + 1, 2 * v + 1)
    }

    fn star(&self, u: i64, v: i64) -> BTreeSet<TileAddress> {
        [(-1, -1), (-1, 0), (0, -1), (0, 0)].into_iter().map(|(du, dv)| self.square(u + du, v + dv)).collect()
    }

    fn edge(&self, u: i64, v: i64, orientation: Orientation) -> EdgeAddress {
        let (mu, mv) = match orientation {
            Orientation::Horizontal => (2 * u + 1, 2 * v),
            Orientation::Vertical => (2 * u, 2 * v + 1),
        };
        let (face, x, y) = reduce_scaled(2 * self.l, mu, mv);
        let (a, b) = match orientation {
            Orientation::Horizontal => ((x - 1) / 2, y / 2),
            Orientation::Vertical => (x / 2, (y - 1) / 2),
        };
        EdgeAddress { face, level: self.level, a: a as u64, b: b as u64, orientation }
    }

    /// Plane lift of a pillow lattice point.
    fn lift(face: Face, a: u64, b: u64) -> (i64, i64) {
        match face {
            Face::Front => (a as i64, b as i64),
            Face::Back => (a as i64, -(b as i64)),
        }
    }
}

/// Outcome of the neighbourhood checks around one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionReport {
    pub p: u32,
    pub m: u32,
    pub ell: u32,
    pub vertex: String,
    /// Distinct `m`-edges making up `K`.
    pub k_edges: usize,
    /// `(m+ℓ)`-tiles whose union has interior `Ω`.
    pub omega_tiles: usize,
    pub connected: bool,
    /// Every `(m+ℓ)`-edge of `K` is surrounded by at most six tiles of `Ω`.
    pub neighborhood_contained: bool,
    pub max_tiles_around_edge: usize,
    /// Every tile of `Ω` has a corner outside `Ω` within `√2·p^-(m+ℓ)`.
    pub corner_bound: bool,
    pub witness: Option<String>,
}

impl RegionReport {
    pub fn passed(&self) -> bool {
        self.connected && self.neighborhood_contained && self.corner_bound
    }
}

/// Certify the three properties of the region `Ω` around the `m`-vertex `v`.
pub fn region_check(p: Base, m: u32, ell: u32, v: &PillowPoint) -> Result<RegionReport> {
    if ell == 0 {
        return Err(domain("ℓ must be at least 1"));
    }
    let (Some(vx), Some(vy)) = (v.x().scaled_integer(p, m), v.y().scaled_integer(p, m)) else {
        return Err(domain(format!("{v} is not a {m}-vertex for p={p}")));
    };
    let n = m + ell;
    let lat = Lattice::new(p, n);
    let step = p.pow(ell) as i64;
    let to_i64 = |b: num_bigint::BigInt| i64::try_from(b).expect("vertex coordinate fits");
    let (vu, vv) = Lattice::lift(v.face(), to_i64(vx) as u64 * step as u64, to_i64(vy) as u64 * step as u64);
    let coarse = Lattice::new(p, m);

    // K as plane segments from the lift of v in the four axis directions
    const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    let mut k_edges = BTreeSet::new();
    let mut fine_edges: Vec<(i64, i64, Orientation)> = Vec::new();
    let mut k_vertices: Vec<(i64, i64)> = Vec::new();
    for (du, dv) in DIRS {
        let orient = if dv == 0 { Orientation::Horizontal } else { Orientation::Vertical };
        let cu = vu / step + du.min(0);
        let cv = vv / step + dv.min(0);
        k_edges.insert(coarse.edge(cu, cv, orient));
        for t in 0..=step {
            k_vertices.push((vu + t * du, vv + t * dv));
        }
        for t in 0..step {
            let (a, b) = (vu + t * du, vv + t * dv);
            let (c, d) = (a + du, b + dv);
            fine_edges.push((a.min(c), b.min(d), orient));
        }
    }

    let omega: BTreeSet<TileAddress> = k_vertices.iter().flat_map(|&(u, w)| lat.star(u, w)).collect();
    let mut report = RegionReport {
        p: p.get(),
        m,
        ell,
        vertex: v.to_string(),
        k_edges: k_edges.len(),
        omega_tiles: omega.len(),
        connected: false,
        neighborhood_contained: true,
        max_tiles_around_edge: 0,
        corner_bound: true,
        witness: None,
    };

    // (a) side-adjacency connectivity
    let start = *omega.iter().next().expect("K meets at least one tile");
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for nb in side_neighbors(p, &t) {
            if omega.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    report.connected = seen.len() == omega.len();
    if !report.connected {
        report.witness = omega.iter().find(|t| !seen.contains(t)).map(|t| format!("unreached tile {t}"));
    }

    // (b) the six-tile block around every fine edge of K lies in Ω, and
    // every plane point within distance < p^-n of the edge folds into Ω's interior
    let quarter = Lattice::new(p, n);
    for &(a, b, orient) in &fine_edges {
        let block: Vec<(i64, i64)> = match orient {
            Orientation::Horizontal => (-1..=1).flat_map(|x| (-1..=0).map(move |y| (a + x, b + y))).collect(),
            Orientation::Vertical => (-1..=0).flat_map(|x| (-1..=1).map(move |y| (a + x, b + y))).collect(),
        };
        let tiles: BTreeSet<TileAddress> = block.iter().map(|&(x, y)| lat.square(x, y)).collect();
        report.max_tiles_around_edge = report.max_tiles_around_edge.max(tiles.len());
        if let Some(t) = tiles.iter().find(|t| !omega.contains(t)) {
            report.neighborhood_contained = false;
            report.witness.get_or_insert_with(|| format!("tile {t} next to edge at ({a},{b}) is outside Ω"));
        }
        // sampled ball check at quarter-lattice resolution
        let (ex, ey) = match orient {
            Orientation::Horizontal => (4 * a, 4 * b),
            Orientation::Vertical => (4 * a, 4 * b),
        };
        for s in 0..=4 {
            let (cx, cy) = match orient {
                Orientation::Horizontal => (ex + s, ey),
                Orientation::Vertical => (ex, ey + s),
            };
            for ox in -4i64..=4 {
                for oy in -4i64..=4 {
                    if ox * ox + oy * oy >= 16 {
                        continue;
                    }
                    for t in tiles_at_quarter_point(&quarter, cx + ox, cy + oy) {
                        if !omega.contains(&t) {
                            report.neighborhood_contained = false;
                            report.witness.get_or_insert_with(|| {
                                format!("ball around edge ({a},{b}) reaches tile {t} outside Ω")
                            });
                        }
                    }
                }
            }
        }
    }

    // (c) corner argument
    let star_inside = |f: Face, x: u64, y: u64| {
        let (u, w) = Lattice::lift(f, x, y);
        lat.star(u, w).iter().all(|t| omega.contains(t))
    };
    let h2 = PRational::power(p, -2 * n as i32) * PRational::integer(2);
    for t in &omega {
        let corners = [(t.i, t.j), (t.i + 1, t.j), (t.i, t.j + 1), (t.i + 1, t.j + 1)];
        let outside = corners.iter().position(|&(x, y)| !star_inside(t.face, x, y));
        match outside {
            Some(k) => {
                let pts = t.corners(p);
                let far = distance(&pts[k], &pts[3 - k]);
                if far.squared() > &h2 {
                    report.corner_bound = false;
                    report.witness.get_or_insert_with(|| format!("tile {t} is wider than √2·p^-{n}"));
                }
            }
            None => {
                report.corner_bound = false;
                report.witness.get_or_insert_with(|| format!("tile {t} has every corner inside Ω"));
            }
        }
    }
    Ok(report)
}

/// Tiles containing the plane point `(u, v) / (4 p^n)` after folding.
fn tiles_at_quarter_point(lat: &Lattice, u: i64, v: i64) -> Vec<TileAddress> {
    let l4 = 4 * lat.l;
    let (face, x, y) = reduce_scaled(l4, u, v);
    let side = lat.l as u64;
    let idx = |c: i64| -> Vec<u64> {
        if c % 4 == 0 {
            let k = (c / 4) as u64;
            [k.checked_sub(1), Some(k)].into_iter().flatten().filter(|&k| k < side).collect()
        } else {
            vec![(c / 4) as u64]
        }
    };
    let on_seam = x == 0 || x == l4 || y == 0 || y == l4;
    let faces: &[Face] = if on_seam { &Face::BOTH } else if face == Face::Front { &Face::BOTH[..1] } else { &Face::BOTH[1..] };
    let mut out = Vec::new();
    for &f in faces {
        for i in idx(x) {
            for j in idx(y) {
                out.push(TileAddress { face: f, level: lat.level, i, j });
            }
        }
    }
    out
}
