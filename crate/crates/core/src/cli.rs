//! Command-line front end.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cartan::{cartan, fmt_weight, parse_weight, LieType};
use crate::error::{Error, Result};
use crate::fold::{build_folding, symmetric_weights, Twist};
use crate::fusion::{FusionEngine, MethodSelect, DEFAULT_INTEGER_TOLERANCE};
use crate::rep::{branch, dim, dominant_level_weights, WeightCache, DEFAULT_DIM_CAP};
use crate::selfcheck::{run_selfcheck, Grid, Tolerances, DEFAULT_UNITARITY_TOLERANCE};
use crate::smatrix::{restrict_columns, twisted_sector_s, untwisted_s, ModularMatrix, SOptions};
use crate::weyl::{DEFAULT_ELEMENT_CAP, DEFAULT_MAX_RANK};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "twistfuse",
    version,
    about = "Twisted and untwisted fusion rules for affine VOAs"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    #[arg(long, global = true, default_value_t = 53)]
    pub precision_bits: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_INTEGER_TOLERANCE)]
    pub integer_tolerance: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_UNITARITY_TOLERANCE)]
    pub unitarity_tolerance: f64,
    /// Worker threads; 0 means all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub parallelism: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_RANK)]
    pub max_rank: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Modular S-matrix; with a twist also the twisted-sector matrix.
    Smatrix {
        algebra: String,
        #[arg(long, short = 'k')]
        level: i64,
        #[arg(long, default_value = "none")]
        twist: String,
    },
    /// Fusion table for a sector pattern, or one coefficient if three weights are given.
    Fusion {
        algebra: String,
        #[arg(long, short = 'k')]
        level: i64,
        #[arg(long, default_value = "none")]
        twist: String,
        #[arg(long, default_value = "1,1,1")]
        pattern: String,
        #[arg(long, default_value = "both")]
        method: String,
        /// Three weights, e.g. `1 1 0` or `1,0,0 0,0,1 1,0,1`.
        #[arg(num_args = 0..=3)]
        weights: Vec<String>,
    },
    /// Folding data for a base type and twist.
    FoldInfo {
        algebra: String,
        #[arg(long, default_value = "diagram")]
        twist: String,
    },
    /// Level-k dominant weights of any supported affine type.
    Weights {
        algebra: String,
        #[arg(long, short = 'k')]
        level: i64,
    },
    /// Restrict an irrep of the base finite algebra to the fixed-point subalgebra.
    Branch {
        algebra: String,
        weight: String,
        #[arg(long, default_value = "diagram")]
        twist: String,
    },
    /// Run the invariant suite.
    Selfcheck {
        #[arg(long)]
        grid: Option<String>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MethodMismatch { .. }
        | Error::NotInteger { .. }
        | Error::NegativeCoefficient(_)
        | Error::NegativeMultiplicity(_) => EXIT_CHECK_FAILED,
        _ => EXIT_BAD_INPUT,
    }
}

/// Finite names like `A3` mean the untwisted affine algebra.
fn untwisted_type(s: &str) -> Result<LieType> {
    let t = LieType::parse(s)?;
    LieType::affine(t.family, t.rank, 1)
}

fn affine_type(s: &str) -> Result<LieType> {
    let t = LieType::parse(s)?;
    if t.is_affine() {
        Ok(t)
    } else {
        LieType::affine(t.family, t.rank, 1)
    }
}

fn level(k: i64) -> Result<i64> {
    if k < 0 {
        return Err(Error::Parse("level must be non-negative".into()));
    }
    Ok(k)
}

struct Ctx<'a> {
    common: &'a Common,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn opts(&self) -> SOptions {
        SOptions {
            precision_bits: self.common.precision_bits,
            max_rank: self.common.max_rank,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    fn emit(&mut self, json: String, table: String) {
        let s = match self.common.output {
            Output::Json => json,
            Output::Table => table,
        };
        let _ = writeln!(self.out, "{}", s.trim_end());
    }

    fn emit_matrices(&mut self, ms: &[ModularMatrix]) {
        let json = if ms.len() == 1 {
            ms[0].to_json()
        } else {
            format!("[{}]", ms.iter().map(|m| m.to_json()).collect::<Vec<_>>().join(","))
        };
        let table = ms.iter().map(|m| m.to_table()).collect::<Vec<_>>().join("\n");
        self.emit(json, table);
    }
}

fn cmd_smatrix(ctx: &mut Ctx, algebra: &str, k: i64, twist: &str) -> Result<i32> {
    let t = untwisted_type(algebra)?;
    let k = level(k)?;
    let twist = Twist::parse(twist)?;
    let opts = ctx.opts();
    let base = cartan(t)?;
    let s = untwisted_s(&base, k, &opts)?;
    let mut ms = vec![];
    let mut worst = s.unitarity_residual().max(s.symmetry_residual());
    if twist == Twist::None {
        ms.push(s);
    } else {
        let f = build_folding(t, twist)?;
        let sym: Vec<_> = symmetric_weights(&f, k).into_iter().map(|w| w.finite).collect();
        let a = twisted_sector_s(&f, k, &opts)?;
        worst = worst.max(a.unitarity_residual());
        ms.push(restrict_columns(&s, &sym));
        ms.push(a);
    }
    ctx.emit_matrices(&ms);
    if worst >= ctx.common.unitarity_tolerance {
        let _ = writeln!(ctx.err, "unitarity check failed: residual {worst:.3e}");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_fusion(
    ctx: &mut Ctx,
    algebra: &str,
    k: i64,
    twist: &str,
    pattern: &str,
    method: &str,
    weights: &[String],
) -> Result<i32> {
    let t = untwisted_type(algebra)?;
    let k = level(k)?;
    let twist = Twist::parse(twist)?;
    let select = MethodSelect::parse(method)?;
    let p = match twist {
        Twist::None => 0,
        Twist::Diagram => 2,
        Twist::Triality => 3,
    };
    let pattern = crate::fusion::Pattern::parse(pattern, p)?;
    let engine = FusionEngine::new(t, twist, k, &ctx.opts(), ctx.common.integer_tolerance)?;
    match weights.len() {
        0 => {
            let table = engine.table(pattern, select)?;
            ctx.emit(table.to_json(), table.to_table());
        }
        3 => {
            let ws: Vec<_> = weights.iter().map(|w| parse_weight(w)).collect::<Result<_>>()?;
            let (n, m) = engine.coefficient(pattern, [&ws[0], &ws[1], &ws[2]], select)?;
            let json = serde_json::json!({
                "schema": 1,
                "algebra": t.to_string(),
                "level": k,
                "pattern": pattern.name(),
                "m1": fmt_weight(&ws[0]),
                "m2": fmt_weight(&ws[1]),
                "m3": fmt_weight(&ws[2]),
                "N": n,
                "method": m.tag(),
            });
            let _ = writeln!(
                ctx.out,
                "{}",
                if ctx.common.output == Output::Json {
                    json.to_string()
                } else {
                    n.to_string()
                }
            );
        }
        _ => return Err(Error::Parse("give zero or three weights".into())),
    }
    Ok(EXIT_OK)
}

fn cmd_fold_info(ctx: &mut Ctx, algebra: &str, twist: &str) -> Result<i32> {
    let f = build_folding(untwisted_type(algebra)?, Twist::parse(twist)?)?;
    let json = serde_json::to_string_pretty(&f.to_json()).expect("json");
    let table = format!(
        "base {}\norder {}\norbits {:?}\ntwisted {}\nadjacent {}\norbit matrix matches adjacent: {}\n",
        f.auto.base.lie_type,
        f.p(),
        f.auto.orbits(),
        f.twisted.lie_type,
        f.adjacent.lie_type,
        f.orbit_matches_adjacent()
    );
    ctx.emit(json, table);
    Ok(EXIT_OK)
}

fn cmd_weights(ctx: &mut Ctx, algebra: &str, k: i64) -> Result<i32> {
    let t = affine_type(algebra)?;
    let d = cartan(t)?;
    let ws = dominant_level_weights(&d, level(k)?);
    let list: Vec<String> = ws.iter().map(|w| fmt_weight(&w.finite)).collect();
    let json = serde_json::json!({ "schema": 1, "algebra": t.to_string(), "level": k, "weights": list }).to_string();
    let table = ws
        .iter()
        .map(|w| format!("{}  dim={}", fmt_weight(&w.finite), dim(&d, &w.finite)))
        .collect::<Vec<_>>()
        .join("\n");
    ctx.emit(json, table);
    Ok(EXIT_OK)
}

fn cmd_branch(ctx: &mut Ctx, algebra: &str, weight: &str, twist: &str) -> Result<i32> {
    let f = build_folding(untwisted_type(algebra)?, Twist::parse(twist)?)?;
    let w = parse_weight(weight)?;
    let cache = WeightCache::new(DEFAULT_DIM_CAP);
    let b = branch(&f.auto.base, &f.twisted, &f.restriction_matrix(), &w, &cache)?;
    let entries: Vec<_> = b
        .entries
        .iter()
        .map(|(v, m)| serde_json::json!({ "weight": fmt_weight(v), "mult": m }))
        .collect();
    let json = serde_json::json!({
        "schema": 1,
        "from": f.auto.base.lie_type.to_string(),
        "to": f.twisted.lie_type.to_string(),
        "weight": fmt_weight(&w),
        "components": entries,
    })
    .to_string();
    let table = b
        .entries
        .iter()
        .map(|(v, m)| format!("{}  x{}", fmt_weight(v), m))
        .collect::<Vec<_>>()
        .join("\n");
    ctx.emit(json, table);
    Ok(EXIT_OK)
}

fn cmd_selfcheck(ctx: &mut Ctx, grid: Option<&str>) -> Result<i32> {
    let grid = Grid::resolve(grid)?;
    let tol = Tolerances {
        integer: ctx.common.integer_tolerance,
        unitarity: ctx.common.unitarity_tolerance,
    };
    let report = run_selfcheck(&grid, &tol, &ctx.opts());
    let _ = write!(ctx.out, "{}", report.render());
    if let Some(f) = report.first_failure() {
        let _ = writeln!(ctx.err, "selfcheck failed: {} ({})", f.name, f.detail);
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

/// Runs with explicit streams; returns the process exit code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    if cli.common.integer_tolerance <= 0.0 || cli.common.unitarity_tolerance <= 0.0 {
        let _ = writeln!(err, "error: tolerances must be positive");
        return EXIT_BAD_INPUT;
    }
    if cli.common.parallelism > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.parallelism)
            .build_global();
    }
    let common = cli.common.clone();
    let mut ctx = Ctx {
        common: &common,
        out,
        err,
    };
    let r = match &cli.command {
        Command::Smatrix { algebra, level, twist } => cmd_smatrix(&mut ctx, algebra, *level, twist),
        Command::Fusion {
            algebra,
            level,
            twist,
            pattern,
            method,
            weights,
        } => cmd_fusion(&mut ctx, algebra, *level, twist, pattern, method, weights),
        Command::FoldInfo { algebra, twist } => cmd_fold_info(&mut ctx, algebra, twist),
        Command::Weights { algebra, level } => cmd_weights(&mut ctx, algebra, *level),
        Command::Branch { algebra, weight, twist } => cmd_branch(&mut ctx, algebra, weight, twist),
        Command::Selfcheck { grid } => cmd_selfcheck(&mut ctx, grid.as_deref()),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
