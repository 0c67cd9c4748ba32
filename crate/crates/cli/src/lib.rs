//! Command-line front end. Every subcommand is a thin adapter over one
//! `carpet-core` operation and returns its text output.

use std::fmt;
use std::path::PathBuf;

use carpet_core::carpet::{parse_circle, CarpetSpace};
use carpet_core::lattes::{relation_witness, LattesMap};
use carpet_core::pillow::{distance, fixed_set_classify, IsometryId, PillowPoint};
use carpet_core::render::{circle_orbit, render, RenderConfig, Target};
use carpet_core::tiling::{count_good_tiles, count_tiles, enumerate_good_tiles, enumerate_tiles, tile_color, tile_is_good, TileAddress};
use carpet_core::verify::{run_suite, SuiteConfig};
use carpet_core::{member, Base};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "carpet", version, about = "Exact computations on square Sierpiński carpets and their Lattès map")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test membership of a point in S_p, S'_p or D_p.
    Member {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = "dp")]
        space: String,
        /// Point as "x,y@face", e.g. 1/4,1/4@front.
        #[arg(long)]
        point: String,
    },
    /// Path distance between two pillow points.
    Distance {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Forward orbit of a point, or of a peripheral circle, under T.
    Orbit {
        #[arg(long)]
        p: u32,
        #[arg(long, conflicts_with = "circle", required_unless_present = "circle")]
        point: Option<String>,
        /// Circle as "removed:face:k:i,j" (the parent tile address).
        #[arg(long)]
        circle: Option<String>,
        #[arg(long, default_value_t = 4)]
        steps: u32,
    },
    /// Tile counts, listings, colors and goodness.
    Tiles {
        #[command(subcommand)]
        action: TilesAction,
    },
    /// Classify the fixed set of an isometry of D_p.
    Fixedset {
        #[arg(long)]
        p: u32,
        /// Isometry name such as id, r90, hmid, dmain+R or R; omit for all 16.
        #[arg(long)]
        isometry: Option<String>,
        #[arg(long, default_value_t = 3)]
        resolution: u32,
    },
    /// Least exponents (m, n, k) with T^m∘g = T^n∘g∘T^k.
    Relation {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        isometry: String,
        #[arg(long, default_value_t = 3)]
        bound: u32,
        #[arg(long, env = "CARPET_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance suite and print the JSON report.
    Verify {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, env = "CARPET_SEED", default_value_t = 0)]
        seed: u64,
        /// Record wall time per claim (makes the report nondeterministic).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an SVG picture.
    Render(RenderArgs),
}

#[derive(Debug, Subcommand)]
pub enum TilesAction {
    Count {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        good: bool,
    },
    List {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        good: bool,
    },
    Color {
        #[arg(long)]
        p: u32,
        /// Tile as "face:n:i,j".
        #[arg(long)]
        tile: String,
    },
    Good {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        tile: String,
    },
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub level: u32,
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 729)]
    pub size: u32,
    /// Start circle for peripheral_orbit.
    #[arg(long)]
    pub circle: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Core(carpet_core::Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl std::error::Error for Failure {}

impl From<carpet_core::Error> for Failure {
    fn from(e: carpet_core::Error) -> Self {
        Failure::Core(e)
    }
}

/// Text to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: impl Into<String>) -> Self {
        Output { text: text.into(), code: 0 }
    }
}

fn base(p: u32) -> Result<Base, Failure> {
    Ok(Base::new(p)?)
}

fn point(s: &str) -> Result<PillowPoint, Failure> {
    Ok(s.parse()?)
}

pub fn cmd_member(p: u32, space: &str, q: &str) -> Result<String, Failure> {
    let space: CarpetSpace = space.parse()?;
    Ok(member(base(p)?, space, &point(q)?).to_string())
}

pub fn cmd_distance(a: &str, b: &str) -> Result<String, Failure> {
    Ok(distance(&point(a)?, &point(b)?).to_string())
}

pub fn cmd_orbit(p: u32, q: Option<&str>, circle: Option<&str>, steps: u32) -> Result<String, Failure> {
    let p = base(p)?;
    if let Some(c) = circle {
        let c = parse_circle(c, CarpetSpace::Dp)?;
        return Ok(circle_orbit(p, c).iter().map(|c| format!("{c}\n")).collect());
    }
    let t = LattesMap::new(p);
    let mut cur = point(q.unwrap_or_default())?;
    let mut out = String::new();
    for k in 0..=steps {
        out.push_str(&format!("{k} {cur}\n"));
        cur = t.apply(&cur);
    }
    Ok(out)
}

pub fn cmd_tiles(action: &TilesAction) -> Result<String, Failure> {
    match *action {
        TilesAction::Count { p, level, good } => {
            let p = base(p)?;
            Ok(if good { count_good_tiles(p, level) } else { count_tiles(p, level) }.to_string())
        }
        TilesAction::List { p, level, good } => {
            let p = base(p)?;
            let tiles: Box<dyn Iterator<Item = TileAddress>> =
                if good { Box::new(enumerate_good_tiles(p, level)) } else { Box::new(enumerate_tiles(p, level)) };
            Ok(tiles.map(|t| format!("{t}\n")).collect())
        }
        TilesAction::Color { p, ref tile } => {
            let t: TileAddress = tile.parse()?;
            t.check(base(p)?)?;
            Ok(tile_color(&t).to_string())
        }
        TilesAction::Good { p, ref tile } => {
            let p = base(p)?;
            let t: TileAddress = tile.parse()?;
            t.check(p)?;
            Ok(tile_is_good(p, &t).to_string())
        }
    }
}

pub fn cmd_fixedset(p: u32, isometry: Option<&str>, resolution: u32) -> Result<String, Failure> {
    let p = base(p)?;
    match isometry {
        Some(g) => Ok(fixed_set_classify(g.parse()?, p, resolution).to_string()),
        None => Ok(IsometryId::all()
            .into_iter()
            .map(|g| format!("{g} {}\n", fixed_set_classify(g, p, resolution)))
            .collect()),
    }
}

pub fn cmd_relation(p: u32, isometry: &str, bound: u32, seed: u64) -> Result<Output, Failure> {
    let g: IsometryId = isometry.parse()?;
    Ok(match relation_witness(base(p)?, g, bound, seed) {
        Some(w) => Output::ok(w.to_string()),
        None => Output { text: "none".into(), code: 1 },
    })
}

pub fn cmd_verify(p: u32, seed: u64, timing: bool) -> Result<Output, Failure> {
    let mut cfg = SuiteConfig::new(base(p)?, seed);
    cfg.timing = timing;
    let report = run_suite(&cfg);
    Ok(Output { text: report.to_json(), code: if report.all_pass() { 0 } else { 1 } })
}

pub fn cmd_render(args: &RenderArgs) -> Result<String, Failure> {
    let target: Target = args.target.parse()?;
    let mut cfg = RenderConfig::new(base(args.p)?, args.level, target);
    cfg.size = args.size;
    if let Some(c) = &args.circle {
        cfg.orbit_start = Some(parse_circle(c, CarpetSpace::Dp)?);
    }
    Ok(render(&cfg))
}

fn write_or_print(text: String, out: Option<&PathBuf>) -> Result<String, Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Io(path.clone(), e))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Member { p, space, point } => cmd_member(*p, space, point).map(Output::ok),
        Command::Distance { a, b } => cmd_distance(a, b).map(Output::ok),
        Command::Orbit { p, point, circle, steps } => {
            cmd_orbit(*p, point.as_deref(), circle.as_deref(), *steps).map(Output::ok)
        }
        Command::Tiles { action } => cmd_tiles(action).map(Output::ok),
        Command::Fixedset { p, isometry, resolution } => cmd_fixedset(*p, isometry.as_deref(), *resolution).map(Output::ok),
        Command::Relation { p, isometry, bound, seed } => cmd_relation(*p, isometry, *bound, *seed),
        Command::Verify { p, seed, timing, out } => {
            let o = cmd_verify(*p, *seed, *timing)?;
            Ok(Output { text: write_or_print(o.text, out.as_ref())?, code: o.code })
        }
        Command::Render(args) => write_or_print(cmd_render(args)?, args.out.as_ref()).map(Output::ok),
    }
}
