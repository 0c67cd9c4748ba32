//! Deterministic SVG pictures of carpets, tilings and circle orbits.
//!
//! Every coordinate is an integer on the level-`n` lattice, so the output is
//! exact and byte-stable. The lattice `y` axis points up; SVG rows are
//! flipped accordingly.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::carpet::{peripheral_circles_up_to, CarpetSpace, CircleKind, PeripheralCircleId};
use crate::error::{parse, Error, Result};
use crate::exactnum::Base;
use crate::lattes::{peripheral_image, PeripheralImage};
use crate::pillow::Face;
use crate::tiling::{enumerate_good_tiles, enumerate_tiles, tile_color, TileAddress, TileColor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    CarpetFront,
    CarpetBack,
    TilesColored,
    GoodTiles,
    WeakTangentW,
    WeakTangentWTilde,
    PeripheralOrbit,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::CarpetFront,
        Target::CarpetBack,
        Target::TilesColored,
        Target::GoodTiles,
        Target::WeakTangentW,
        Target::WeakTangentWTilde,
        Target::PeripheralOrbit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::CarpetFront => "carpet_front",
            Target::CarpetBack => "carpet_back",
            Target::TilesColored => "tiles_colored",
            Target::GoodTiles => "good_tiles",
            Target::WeakTangentW => "weak_tangent_W",
            Target::WeakTangentWTilde => "weak_tangent_Wtilde",
            Target::PeripheralOrbit => "peripheral_orbit",
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| parse(format!("unknown render target {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Palette {
    pub background: String,
    pub fill: String,
    pub white: String,
    pub black: String,
    pub stroke: String,
    pub highlight: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            background: "#ffffff".into(),
            fill: "#1f2933".into(),
            white: "#f5f0e1".into(),
            black: "#3b3b58".into(),
            stroke: "#9aa5b1".into(),
            highlight: "#d64545".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RenderConfig {
    pub p: Base,
    pub level: u32,
    pub target: Target,
    /// Width of the image in pixels.
    pub size: u32,
    pub palette: Palette,
    /// Start of the highlighted orbit; defaults to the first circle born at
    /// the deepest level.
    pub orbit_start: Option<PeripheralCircleId>,
}

impl RenderConfig {
    pub fn new(p: Base, level: u32, target: Target) -> Self {
        RenderConfig { p, level, target, size: 729, palette: Palette::default(), orbit_start: None }
    }
}

struct Canvas {
    out: String,
    side: u64,
}

impl Canvas {
    fn open(cfg: &RenderConfig, width: u64, height: u64) -> Canvas {
        let px_h = (cfg.size as u64 * height).div_ceil(width);
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{px_h}\" viewBox=\"0 0 {width} {height}\" shape-rendering=\"crispEdges\" data-target=\"{}\" data-p=\"{}\" data-level=\"{}\">",
            cfg.size,
            cfg.target.name(),
            cfg.p,
            cfg.level
        );
        let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"{}\"/>", cfg.palette.background);
        Canvas { out, side: cfg.p.pow(cfg.level) }
    }

    fn group(&mut self, face: Face, dx: u64, dy: u64, attrs: &str) {
        let _ = writeln!(self.out, "<g data-face=\"{face}\" transform=\"translate({dx},{dy})\"{attrs}>");
    }

    fn end_group(&mut self) {
        self.out.push_str("</g>\n");
    }

    /// A lattice cell, `y` flipped.
    fn cell(&mut self, i: u64, j: u64, fill: Option<&str>) {
        let y = self.side - 1 - j;
        match fill {
            Some(f) => {
                let _ = writeln!(self.out, "<rect class=\"tile\" x=\"{i}\" y=\"{y}\" width=\"1\" height=\"1\" fill=\"{f}\"/>");
            }
            None => {
                let _ = writeln!(self.out, "<rect class=\"tile\" x=\"{i}\" y=\"{y}\" width=\"1\" height=\"1\"/>");
            }
        }
    }

    fn close(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Render `cfg` to an SVG document. Pure: equal configs give equal bytes.
pub fn render(cfg: &RenderConfig) -> String {
    let p = cfg.p;
    let n = cfg.level;
    let side = p.pow(n);
    let pal = &cfg.palette;
    let color = |t: &TileAddress| match tile_color(t) {
        TileColor::White => pal.white.as_str(),
        TileColor::Black => pal.black.as_str(),
    };
    match cfg.target {
        Target::CarpetFront | Target::CarpetBack | Target::WeakTangentW => {
            let face = if cfg.target == Target::CarpetBack { Face::Back } else { Face::Front };
            let mut c = Canvas::open(cfg, side, side);
            c.group(face, 0, 0, &format!(" fill=\"{}\"", pal.fill));
            for t in enumerate_good_tiles(p, n).filter(|t| t.face == face) {
                c.cell(t.i, t.j, None);
            }
            c.end_group();
            c.close()
        }
        Target::TilesColored | Target::GoodTiles => {
            let mut c = Canvas::open(cfg, 2 * side + 1, side);
            let good_only = cfg.target == Target::GoodTiles;
            for (face, dx) in [(Face::Front, 0), (Face::Back, side + 1)] {
                c.group(face, dx, 0, "");
                let tiles: Box<dyn Iterator<Item = TileAddress>> =
                    if good_only { Box::new(enumerate_good_tiles(p, n)) } else { Box::new(enumerate_tiles(p, n)) };
                for t in tiles.filter(|t| t.face == face) {
                    c.cell(t.i, t.j, Some(color(&t)));
                }
                c.end_group();
            }
            c.close()
        }
        Target::WeakTangentWTilde => {
            // W in the first quadrant, iW in the second, -W in the third
            let mut c = Canvas::open(cfg, 2 * side, 2 * side);
            let _ = writeln!(c.out, "<g transform=\"translate({side},{side})\" fill=\"{}\">", pal.fill);
            for (rot, name) in [(0, "W"), (90, "iW"), (180, "-W")] {
                let _ = writeln!(
                    c.out,
                    "<g data-copy=\"{name}\" transform=\"rotate({}) translate(0,-{side})\">",
                    -rot
                );
                for t in enumerate_good_tiles(p, n).filter(|t| t.face == Face::Front) {
                    c.cell(t.i, t.j, None);
                }
                c.end_group();
            }
            c.end_group();
            c.close()
        }
        Target::PeripheralOrbit => render_orbit(cfg),
    }
}

/// The orbit of a circle under `T`, ending at `O`.
pub fn circle_orbit(p: Base, start: PeripheralCircleId) -> Vec<PeripheralImage> {
    let mut orbit = vec![PeripheralImage::Circle(start)];
    let mut cur = start;
    loop {
        match peripheral_image(p, &cur) {
            PeripheralImage::Outer => {
                orbit.push(PeripheralImage::Outer);
                return orbit;
            }
            PeripheralImage::Circle(next) => {
                orbit.push(PeripheralImage::Circle(next));
                cur = next;
            }
        }
    }
}

fn render_orbit(cfg: &RenderConfig) -> String {
    let p = cfg.p;
    let n = cfg.level.max(1);
    let side = p.pow(n);
    let pal = &cfg.palette;
    let circles = peripheral_circles_up_to(p, CarpetSpace::Dp, n);
    let start = cfg.orbit_start.or_else(|| {
        circles.iter().copied().find(|c| matches!(c.kind, CircleKind::Removed { level, .. } if level == n))
    });
    let orbit: Vec<PeripheralImage> = start.map(|s| circle_orbit(p, s)).unwrap_or_default();
    let highlighted = |c: &PeripheralCircleId| orbit.contains(&PeripheralImage::Circle(*c));

    let cfg = RenderConfig { level: n, ..cfg.clone() };
    let mut c = Canvas::open(&cfg, 2 * side + 1, side);
    for (face, dx) in [(Face::Front, 0), (Face::Back, side + 1)] {
        let outline = if orbit.contains(&PeripheralImage::Outer) { &pal.highlight } else { &pal.stroke };
        c.group(face, dx, 0, " fill=\"none\"");
        let _ = writeln!(
            c.out,
            "<rect class=\"outer\" width=\"{side}\" height=\"{side}\" stroke=\"{outline}\" stroke-width=\"{}\"/>",
            side.div_ceil(200)
        );
        for circle in circles.iter().filter(|c| matches!(c.kind, CircleKind::Removed { face: f, .. } if f == face)) {
            let CircleKind::Removed { level, parent_i, parent_j, .. } = circle.kind else { continue };
            let q = p.get() as u64;
            let m = p.middle() as u64;
            let w = p.pow(n - level);
            let x = (parent_i * q + m) * w;
            let y = side - (parent_j * q + m + 1) * w;
            let (stroke, width) = if highlighted(circle) { (&pal.highlight, 3) } else { (&pal.stroke, 1) };
            let _ = writeln!(
                c.out,
                "<rect class=\"circle\" data-circle=\"{circle}\" x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{w}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
                width * side.div_ceil(400)
            );
        }
        c.end_group();
    }
    c.close()
}

fn attr<'a>(line: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = line.find(&key)? + key.len();
    let len = line[start..].find('"')?;
    Some(&line[start..start + len])
}

/// Recover the tile addresses drawn as lattice cells in a single-face carpet
/// picture by reading the rectangle geometry back.
pub fn drawn_tiles(svg: &str, p: Base, n: u32) -> Result<Vec<TileAddress>> {
    let side = p.pow(n);
    let mut face = None;
    let mut out = Vec::new();
    for line in svg.lines() {
        if line.starts_with("<g ") {
            if let Some(f) = attr(line, "data-face") {
                face = Some(f.parse::<Face>()?);
            }
        } else if line.starts_with("<rect class=\"tile\"") {
            let face = face.ok_or_else(|| parse("tile outside a face group"))?;
            let num = |k: &str| -> Result<u64> {
                attr(line, k).and_then(|v| v.parse().ok()).ok_or_else(|| parse(format!("bad {k} in {line}")))
            };
            let (x, y, w, h) = (num("x")?, num("y")?, num("width")?, num("height")?);
            if w != 1 || h != 1 || x >= side || y >= side {
                return Err(parse(format!("rectangle is not a level-{n} cell: {line}")));
            }
            out.push(TileAddress::new(face, n, x, side - 1 - y));
        }
    }
    Ok(out)
}
