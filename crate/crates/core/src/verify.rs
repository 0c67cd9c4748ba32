//! Brute-force oracles and the acceptance suite.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::carpet::{member, peripheral_circles_up_to, CarpetSpace, CircleKind, PeripheralCircleId};
use crate::error::{domain, Result};
use crate::exactnum::{Base, PRational};
use crate::lattes::{
    backward_noninvariance_witness, branch_consistency_check, classify_point, confirm_peripheral_image,
    forward_invariance_check, peripheral_image, relation_witness, scaling_certificate, side_invariance_check,
    sigma_facts, LattesMap, PeripheralImage, PointClass,
};
use crate::pillow::{
    distance, fixed_set_classify, isometry_apply, isometry_compose, isometry_inverse, Face, FixedSetClass,
    IsometryId, PillowPoint, SquareSymmetry,
};
use crate::render::{drawn_tiles, render, RenderConfig, Target};
use crate::sample::Sampler;
use crate::tiling::{
    count_by_enumeration, count_good_tiles, count_tiles, enumerate_good_tiles, enumerate_tiles, region_check,
    side_neighbors, tile_color, tile_of_point, TileAddress, TileColor,
};

/// Outcome of one check. A failure always carries a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn check(ok: bool, witness: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails(witness())
        }
    }

    pub fn first_failure<I, T, F>(items: I, mut f: F) -> Verdict
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> Option<String>,
    {
        items.into_iter().find_map(&mut f).map_or(Verdict::Holds, Verdict::Fails)
    }

    /// Parallel scan that still reports the first failure in input order.
    pub fn first_failure_par<T, F>(items: &[T], f: F) -> Verdict
    where
        T: Sync,
        F: Fn(&T) -> Option<String> + Sync + Send,
    {
        items.par_iter().find_map_first(f).map_or(Verdict::Holds, Verdict::Fails)
    }

    pub fn and_then(self, f: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Holds => f(),
            fail => fail,
        }
    }

    pub fn context(self, prefix: impl fmt::Display) -> Verdict {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(format!("{prefix}: {w}")),
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().find(|v| !v.holds()).unwrap_or(Verdict::Holds)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails(w) => write!(f, "fails: {w}"),
        }
    }
}

/// Good tiles of every level up to `n`, built top-down from the parent tile
/// without looking at digit expansions.
#[derive(Debug, Clone)]
pub struct GridOracle {
    p: Base,
    n: u32,
    /// `levels[face][k][i * p^k + j]`
    levels: [Vec<Vec<bool>>; 2],
}

impl GridOracle {
    pub fn max_level(p: Base) -> u32 {
        if p.get() == 3 {
            6
        } else {
            4
        }
    }

    pub fn build(p: Base, n: u32) -> Result<Self> {
        if n > Self::max_level(p) {
            return Err(domain(format!("grid oracle level {n} exceeds {} for p={p}", Self::max_level(p))));
        }
        let q = p.get() as usize;
        let m = p.middle() as usize;
        let face_levels = || {
            let mut levels = vec![vec![true]];
            for k in 1..=n {
                let side = q.pow(k);
                let parent = &levels[k as usize - 1];
                let mut cur = vec![false; side * side];
                for i in 0..side {
                    for j in 0..side {
                        let up = parent[(i / q) * (side / q) + j / q];
                        let removed = i % q == m && j % q == m;
                        cur[i * side + j] = up && !removed;
                    }
                }
                levels.push(cur);
            }
            levels
        };
        Ok(GridOracle { p, n, levels: [face_levels(), face_levels()] })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn is_good(&self, face: Face, level: u32, i: u64, j: u64) -> bool {
        assert!(level <= self.n, "level {level} beyond oracle depth {}", self.n);
        let side = self.p.pow(level);
        assert!(i < side && j < side, "tile index out of range");
        let f = match face {
            Face::Front => 0,
            Face::Back => 1,
        };
        self.levels[f][level as usize][(i * side + j) as usize]
    }

    /// True iff at every level `k <= n` some tile containing `q` is good.
    pub fn oracle_member(&self, q: &PillowPoint) -> bool {
        (0..=self.n).all(|k| tile_of_point(self.p, q, k).iter().any(|t| self.is_good(t.face, k, t.i, t.j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub witness: Option<String>,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub p: u32,
    pub seed: u64,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Depths used by the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Levels {
    pub tiles: u32,
    pub oracle: u32,
    pub checkerboard: u32,
    pub color: u32,
    pub branches: u32,
    pub circles: u32,
    pub region: u32,
    pub relation_bound: u32,
    pub render: u32,
}

impl Levels {
    pub fn for_base(p: Base) -> Self {
        let big = p.get() >= 7;
        Levels {
            tiles: 5,
            oracle: if big { 3 } else { 4 },
            checkerboard: if big { 3 } else { 4 },
            color: 3,
            branches: 4,
            circles: 3,
            region: if p.get() == 3 { 2 } else { 1 },
            relation_bound: 3,
            render: if big { 3 } else { 4 },
        }
    }
}

pub type ColorRule = fn(&TileAddress) -> TileColor;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub p: Base,
    pub seed: u64,
    pub levels: Levels,
    /// Record wall time per claim. Off by default so reports are
    /// byte-identical across runs.
    pub timing: bool,
    /// Coloring under test; swapped out for fault injection.
    pub color_rule: ColorRule,
}

impl SuiteConfig {
    pub fn new(p: Base, seed: u64) -> Self {
        SuiteConfig { p, seed, levels: Levels::for_base(p), timing: false, color_rule: tile_color }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    TileCounts = 1,
    OracleEquivalence,
    Checkerboard,
    LattesLaws,
    InverseBranches,
    SigmaFacts,
    PeripheralDynamics,
    RegionCertificates,
    IsometryGroup,
    RelationWitnesses,
    Admissibility,
    RenderFaithfulness,
}

impl Claim {
    pub const ALL: [Claim; 12] = [
        Claim::TileCounts,
        Claim::OracleEquivalence,
        Claim::Checkerboard,
        Claim::LattesLaws,
        Claim::InverseBranches,
        Claim::SigmaFacts,
        Claim::PeripheralDynamics,
        Claim::RegionCertificates,
        Claim::IsometryGroup,
        Claim::RelationWitnesses,
        Claim::Admissibility,
        Claim::RenderFaithfulness,
    ];

    pub fn number(self) -> u32 {
        self as u32
    }

    pub fn id(self) -> &'static str {
        match self {
            Claim::TileCounts => "tile-counts",
            Claim::OracleEquivalence => "oracle-equivalence",
            Claim::Checkerboard => "checkerboard",
            Claim::LattesLaws => "lattes-laws",
            Claim::InverseBranches => "inverse-branches",
            Claim::SigmaFacts => "sigma-facts",
            Claim::PeripheralDynamics => "peripheral-dynamics",
            Claim::RegionCertificates => "region-certificates",
            Claim::IsometryGroup => "isometry-group",
            Claim::RelationWitnesses => "relation-witnesses",
            Claim::Admissibility => "admissibility",
            Claim::RenderFaithfulness => "render-faithfulness",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Claim::TileCounts => "There are precisely 2(p²−1)^n good n-tiles",
            Claim::OracleEquivalence => "an n-tile is good if its interior meets D_p",
            Claim::Checkerboard => "two n-tiles sharing a side have different colors",
            Claim::LattesLaws => "Each side of Q is forward invariant under T",
            Claim::InverseBranches => "T^{-(n+k)} = T^{-n}∘T^{-k}",
            Claim::SigmaFacts => "T²(σ)=σ",
            Claim::PeripheralDynamics => "either T^l(C) is also a peripheral circle or T^l(C)=O",
            Claim::RegionCertificates => "does not contain any ball of radius r>√2·p^{−(m+ℓ)}",
            Claim::IsometryGroup => "either empty, finite, a Cantor set, or all of D_p",
            Claim::RelationWitnesses => "T^m∘ξ = T^n∘ξ∘T^k",
            Claim::Admissibility => "scales lengths of paths in U′ by the factor p",
            Claim::RenderFaithfulness => "The standard square Sierpiński 3-carpet",
        }
    }

    pub fn run(self, cfg: &SuiteConfig) -> Verdict {
        let p = cfg.p;
        let lv = &cfg.levels;
        match self {
            Claim::TileCounts => tile_counts(p, lv.tiles),
            Claim::OracleEquivalence => oracle_equivalence(p, lv.oracle),
            Claim::Checkerboard => checkerboard(p, lv.checkerboard, lv.color, cfg.color_rule),
            Claim::LattesLaws => lattes_laws(p, cfg.seed),
            Claim::InverseBranches => inverse_branches(p, lv.branches),
            Claim::SigmaFacts => sigma_claim(p),
            Claim::PeripheralDynamics => peripheral_dynamics(p, lv.circles),
            Claim::RegionCertificates => region_certificates(p, lv.region),
            Claim::IsometryGroup => isometry_group(p, cfg.seed),
            Claim::RelationWitnesses => relation_witnesses(p, lv.relation_bound, cfg.seed),
            Claim::Admissibility => admissibility(p, cfg.seed),
            Claim::RenderFaithfulness => render_faithfulness(p, lv.render),
        }
    }
}

/// Run every claim and assemble the report in claim order.
pub fn run_suite(cfg: &SuiteConfig) -> VerificationReport {
    let claims = Claim::ALL
        .par_iter()
        .map(|&c| {
            let start = Instant::now();
            let verdict = c.run(cfg);
            let millis = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
            ClaimResult {
                id: c.id().to_string(),
                anchor: c.anchor().to_string(),
                status: if verdict.holds() { Status::Pass } else { Status::Fail },
                witness: verdict.witness().map(str::to_string),
                millis,
            }
        })
        .collect();
    VerificationReport { suite: "carpet".to_string(), p: cfg.p.get(), seed: cfg.seed, claims }
}

pub fn tile_counts(p: Base, max_level: u32) -> Verdict {
    Verdict::first_failure(0..=max_level, |n| {
        let (all, good) = count_by_enumeration(p, n);
        let (want_all, want_good) = (count_tiles(p, n), count_good_tiles(p, n));
        (want_all != all.into() || want_good != good.into())
            .then(|| format!("n={n}: enumerated ({all}, {good}) vs ({want_all}, {want_good})"))
    })
}

/// `member` against the grid oracle on every point with denominator `p^n`.
pub fn oracle_equivalence(p: Base, n: u32) -> Verdict {
    let oracle = match GridOracle::build(p, n) {
        Ok(o) => o,
        Err(e) => return Verdict::Fails(e.to_string()),
    };
    let d = p.pow(n) as i64;
    let coords: Vec<PRational> = (0..=d).map(|a| PRational::new(a, d)).collect();
    let rows: Vec<(Face, usize)> = Face::BOTH.iter().flat_map(|&f| (0..coords.len()).map(move |a| (f, a))).collect();
    Verdict::first_failure_par(&rows, |&(face, a)| {
        coords.iter().find_map(|y| {
            let q = PillowPoint::new(face, coords[a].clone(), y.clone()).expect("grid point");
            let (digits, grid) = (member(p, CarpetSpace::Dp, &q), oracle.oracle_member(&q));
            (digits != grid).then(|| format!("{q}: member={digits} oracle={grid}"))
        })
    })
}

pub fn checkerboard(p: Base, adjacency_level: u32, color_level: u32, rule: ColorRule) -> Verdict {
    let t = LattesMap::new(p);
    let adjacency = Verdict::first_failure(0..=adjacency_level, |n| {
        let tiles: Vec<TileAddress> = enumerate_tiles(p, n).collect();
        tiles.par_iter().find_map_first(|a| {
            side_neighbors(p, a)
                .into_iter()
                .find(|b| rule(a) == rule(b))
                .map(|b| format!("{a} and {b} share a side and are both {}", rule(a)))
        })
    });
    adjacency.and_then(|| {
        Verdict::first_failure(0..=color_level, |n| {
            let tiles: Vec<TileAddress> = enumerate_tiles(p, n).collect();
            tiles.par_iter().find_map_first(|a| {
                let image = t.lifted(&a.center(p), n);
                let want = if image.face() == Face::Front { TileColor::White } else { TileColor::Black };
                (rule(a) != want).then(|| format!("{a} is {} but T^{n} sends its centre to {image}", rule(a)))
            })
        })
    })
}

pub fn lattes_laws(p: Base, seed: u64) -> Verdict {
    let t = LattesMap::new(p);
    let pts = Sampler::new(p, seed).take(10_000, |s| s.pillow_point());
    let commute = Verdict::first_failure_par(&pts, |q| {
        let a = t.apply(&isometry_apply(IsometryId::R, q));
        let b = isometry_apply(IsometryId::R, &t.apply(q));
        (a != b).then(|| format!("T(R({q})) = {a} but R(T({q})) = {b}"))
    })
    .context("T∘R = R∘T");
    commute
        .and_then(|| {
            let members = Sampler::new(p, seed ^ 1).take(1000, |s| s.dp_point());
            forward_invariance_check(p, &members).context("forward invariance")
        })
        .and_then(|| match backward_noninvariance_witness(p) {
            Ok(z) => {
                let ok = !member(p, CarpetSpace::Dp, &z) && member(p, CarpetSpace::Dp, &t.apply(&z));
                Verdict::check(ok, || format!("{z} is not a backward witness"))
            }
            Err(e) => Verdict::Fails(e.to_string()),
        })
        .and_then(|| side_invariance_check(p).context("side invariance"))
}

pub fn inverse_branches(p: Base, max: u32) -> Verdict {
    let pairs: Vec<(u32, u32)> = (0..=max).flat_map(|n| (0..=max).map(move |k| (n, k))).collect();
    Verdict::first_failure(pairs, |(n, k)| branch_consistency_check(p, n, k).witness().map(|w| format!("n={n} k={k}: {w}")))
}

pub fn sigma_claim(p: Base) -> Verdict {
    let r = sigma_facts(p);
    Verdict::check(r.passed(), || format!("{r:?}"))
}

pub fn peripheral_dynamics(p: Base, max_level: u32) -> Verdict {
    let middles = Face::BOTH.map(|f| PeripheralCircleId::middle(CarpetSpace::Dp, f));
    let m = Verdict::all(middles.iter().map(|c| {
        let v = Verdict::check(peripheral_image(p, c) == PeripheralImage::Outer, || format!("{c} does not map to O"));
        v.and_then(|| confirm_peripheral_image(p, c, 20)).context(c)
    }));
    let circles = peripheral_circles_up_to(p, CarpetSpace::Dp, max_level);
    m.and_then(|| {
        Verdict::first_failure(circles.iter().filter(|c| level_of(c) == Some(2)), |c| match peripheral_image(p, c) {
            PeripheralImage::Circle(img) if level_of(&img) == Some(1) => None,
            other => Some(format!("{c} maps to {other}, not a level-1 circle")),
        })
    })
    .and_then(|| Verdict::first_failure_par(&circles, |c| confirm_peripheral_image(p, c, 8).witness().map(str::to_string)))
}

fn level_of(c: &PeripheralCircleId) -> Option<u32> {
    match c.kind {
        CircleKind::Outer => None,
        CircleKind::Removed { level, .. } => Some(level),
    }
}

/// Sample `m`-vertices: the pillow corners, plus a seam vertex and interior
/// vertices on both faces once `m >= 1`.
pub fn region_vertices(p: Base, m: u32) -> Vec<PillowPoint> {
    let d = p.pow(m) as i64;
    let mut out = vec![
        PillowPoint::at(Face::Front, (0, 1), (0, 1)).unwrap(),
        PillowPoint::at(Face::Front, (1, 1), (1, 1)).unwrap(),
    ];
    if m >= 1 {
        out.push(PillowPoint::at(Face::Front, (1, d), (0, 1)).unwrap());
        out.push(PillowPoint::at(Face::Front, (1, d), (1, d)).unwrap());
        out.push(PillowPoint::at(Face::Back, (d - 1, d), (1, d)).unwrap());
    }
    out
}

pub fn region_certificates(p: Base, max: u32) -> Verdict {
    let cases: Vec<(u32, u32, PillowPoint)> = (0..=max)
        .flat_map(|m| (1..=max).flat_map(move |l| region_vertices(p, m).into_iter().map(move |v| (m, l, v))))
        .collect();
    Verdict::first_failure_par(&cases, |(m, l, v)| match region_check(p, *m, *l, v) {
        Ok(r) if r.passed() => None,
        Ok(r) => Some(format!("m={m} ℓ={l} v={v}: {r:?}")),
        Err(e) => Some(format!("m={m} ℓ={l} v={v}: {e}")),
    })
}

pub fn isometry_group(p: Base, seed: u64) -> Verdict {
    let g = IsometryId::all();
    let g = g.as_slice();
    let set: HashSet<IsometryId> = g.iter().copied().collect();
    let closure = Verdict::check(set.len() == 16, || format!("{} distinct elements", set.len()))
        .and_then(|| {
            Verdict::first_failure(g.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))), |(a, b)| {
                let c = isometry_compose(a, b);
                if !set.contains(&c) {
                    return Some(format!("{a}∘{b} = {c} not in the group"));
                }
                (isometry_compose(a, isometry_inverse(a)) != IsometryId::IDENTITY)
                    .then(|| format!("{a} has no inverse"))
            })
        })
        .and_then(|| {
            Verdict::first_failure(g.iter().flat_map(|&a| g.iter().flat_map(move |&b| g.iter().map(move |&c| (a, b, c)))), |(a, b, c)| {
                (isometry_compose(isometry_compose(a, b), c) != isometry_compose(a, isometry_compose(b, c)))
                    .then(|| format!("({a}∘{b})∘{c} differs from {a}∘({b}∘{c})"))
            })
        })
        .context("group laws");

    let pts = Sampler::new(p, seed ^ 2).take(200, |s| s.dp_point());
    let off = Sampler::new(p, seed ^ 3).take(200, |s| s.pillow_point());
    let preserve = || {
        Verdict::first_failure_par(g, |&h| {
            let images_ok = pts.iter().chain(&off).find(|q| {
                member(p, CarpetSpace::Dp, q) != member(p, CarpetSpace::Dp, &isometry_apply(h, q))
            });
            if let Some(q) = images_ok {
                return Some(format!("{h} changes membership of {q}"));
            }
            pts.chunks(2).filter(|c| c.len() == 2).find_map(|c| {
                let before = distance(&c[0], &c[1]);
                let after = distance(&isometry_apply(h, &c[0]), &isometry_apply(h, &c[1]));
                (before != after).then(|| format!("{h} moves d({}, {}) from {before} to {after}", c[0], c[1]))
            })
        })
    };
    let taxonomy = || {
        Verdict::first_failure(g.iter(), |&h| {
            let class = fixed_set_classify(h, p, 3);
            let ok = match (h.square, h.swap) {
                (SquareSymmetry::Id, false) => class == FixedSetClass::All,
                (SquareSymmetry::Id, true) => class == FixedSetClass::JordanCurveO,
                (s, false) if s.is_reflection() => class == FixedSetClass::Cantor,
                _ => matches!(class, FixedSetClass::Empty | FixedSetClass::Finite(_)),
            };
            (!ok).then(|| format!("{h} classified as {class:?}"))
        })
    };
    closure.and_then(preserve).and_then(taxonomy)
}

pub fn relation_witnesses(p: Base, bound: u32, seed: u64) -> Verdict {
    let g = IsometryId::all();
    Verdict::first_failure(g, |h| match relation_witness(p, h, bound, seed) {
        Some(w) if w.k.max(w.n).max(w.m) <= bound => None,
        Some(w) => Some(format!("{h}: witness {w} exceeds {bound}")),
        None => Some(format!("{h}: no witness with exponents ≤ {bound}")),
    })
}

/// Independent description of the exceptional set `F ∪ M ∪ M′`.
fn exceptional_oracle(p: Base, vertices: &HashSet<PillowPoint>, q: &PillowPoint) -> bool {
    if vertices.contains(q) {
        return true;
    }
    let lo = PRational::new(p.middle() as i64, p.get() as i64);
    let hi = PRational::new(p.middle() as i64 + 1, p.get() as i64);
    let (x, y) = (q.x(), q.y());
    let inside = *x >= lo && *x <= hi && *y >= lo && *y <= hi;
    inside && (*x == lo || *x == hi || *y == lo || *y == hi)
}

pub fn admissibility(p: Base, seed: u64) -> Verdict {
    let q = p.get() as i64;
    let vertices: HashSet<PillowPoint> = Face::BOTH
        .iter()
        .flat_map(|&f| (0..=q).flat_map(move |a| (0..=q).map(move |b| PillowPoint::at(f, (a, q), (b, q)).unwrap())))
        .collect();
    let mut sample = Sampler::new(p, seed ^ 4).take(500, |s| s.dp_point());
    let mut fixed: Vec<PillowPoint> = vertices.iter().cloned().collect();
    fixed.sort();
    sample.extend(fixed);
    for f in Face::BOTH {
        sample.extend(PeripheralCircleId::middle(CarpetSpace::Dp, f).sample_points(p, 20));
    }
    Verdict::first_failure_par(&sample, |z| {
        let class = classify_point(p, z);
        let exceptional = exceptional_oracle(p, &vertices, z);
        match class {
            PointClass::Exceptional(_) if exceptional => None,
            PointClass::Case1(_) | PointClass::Case2(..) if !exceptional => {
                scaling_certificate(p, z).witness().map(str::to_string)
            }
            other => Some(format!("{z} classified {other}, exceptional={exceptional}")),
        }
    })
}

pub fn render_faithfulness(p: Base, n: u32) -> Verdict {
    let cfg = RenderConfig::new(p, n, Target::CarpetFront);
    let svg = render(&cfg);
    let again = render(&cfg);
    let expected: BTreeSet<TileAddress> = enumerate_good_tiles(p, n).filter(|t| t.face == Face::Front).collect();
    let want = (p.get() as u64 * p.get() as u64 - 1).pow(n);
    Verdict::check(svg == again, || "two renders differ".to_string()).and_then(|| match drawn_tiles(&svg, p, n) {
        Err(e) => Verdict::Fails(e.to_string()),
        Ok(drawn) => {
            let drawn_set: BTreeSet<TileAddress> = drawn.iter().copied().collect();
            if drawn.len() as u64 != want || drawn_set.len() != drawn.len() {
                return Verdict::Fails(format!("{} squares drawn, {} distinct, expected {want}", drawn.len(), drawn_set.len()));
            }
            match drawn_set.symmetric_difference(&expected).next() {
                Some(t) => Verdict::Fails(format!("{t} drawn xor enumerated")),
                None => Verdict::Holds,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(p: u32) -> Base {
        Base::new(p).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let o = GridOracle::build(b(3), 1).unwrap();
        assert!(o.oracle_member(&PillowPoint::at(Face::Front, (0, 1), (0, 1)).unwrap()));
        assert!(!o.oracle_member(&PillowPoint::at(Face::Front, (1, 2), (1, 2)).unwrap()));
        assert!(o.oracle_member(&PillowPoint::at(Face::Front, (1, 3), (1, 2)).unwrap()));
        assert!(GridOracle::build(b(3), 7).is_err());
        assert!(GridOracle::build(b(5), 5).is_err());
    }

    #[test]
    fn oracle_agrees_with_digit_criterion() {
        assert!(oracle_equivalence(b(3), 4).holds());
        assert!(oracle_equivalence(b(5), 2).holds());
    }

    #[test]
    fn oracle_matches_closed_form_counts() {
        let p = b(3);
        let o = GridOracle::build(p, 4).unwrap();
        for n in 0..=4 {
            let side = p.pow(n);
            let good = (0..side).flat_map(|i| (0..side).map(move |j| (i, j))).filter(|&(i, j)| o.is_good(Face::Back, n, i, j)).count();
            assert_eq!(good as u64, 8u64.pow(n));
        }
    }

    fn corrupted(t: &TileAddress) -> TileColor {
        if t.level == 2 && t.face == Face::Front && t.i == 4 && t.j == 4 {
            TileColor::Black
        } else {
            tile_color(t)
        }
    }

    #[test]
    fn fault_injection_is_caught() {
        let mut cfg = SuiteConfig::new(b(3), 0);
        cfg.levels.checkerboard = 2;
        cfg.color_rule = corrupted;
        let v = Claim::Checkerboard.run(&cfg);
        let w = v.witness().expect("corrupted rule must fail");
        assert!(w.contains("front:2:4,4"), "{w}");
        cfg.color_rule = tile_color;
        assert!(Claim::Checkerboard.run(&cfg).holds());
    }

    #[test]
    fn verdict_helpers() {
        assert_eq!(Verdict::first_failure([1, 2, 3], |x| (x == 2).then(|| "two".to_string())), Verdict::Fails("two".into()));
        let xs: Vec<u32> = (0..1000).collect();
        assert_eq!(Verdict::first_failure_par(&xs, |&x| (x % 7 == 6).then(|| x.to_string())), Verdict::Fails("6".into()));
        assert!(Verdict::all([Verdict::Holds, Verdict::Holds]).holds());
    }

    #[test]
    fn report_json_shape() {
        let report = VerificationReport {
            suite: "carpet".into(),
            p: 3,
            seed: 0,
            claims: vec![ClaimResult {
                id: "sigma-facts".into(),
                anchor: Claim::SigmaFacts.anchor().into(),
                status: Status::Pass,
                witness: None,
                millis: 0,
            }],
        };
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["claims"][0]["status"], "pass");
        for key in ["id", "anchor", "status", "witness", "millis"] {
            assert!(v["claims"][0].get(key).is_some(), "{key}");
        }
    }
}
