//! Invariant suite over a configurable grid.

use std::fmt::Write as _;
use std::time::Instant;

use crate::cartan::{cartan, LieType};
use crate::error::{Error, Result};
use crate::fold::{build_folding, symmetric_weights, Twist};
use crate::fusion::{FusionEngine, Method, MethodSelect, Pattern, DEFAULT_INTEGER_TOLERANCE};
use crate::rep::{branch, dim, dominant_level_weights, tensor_decompose, WeightCache, DEFAULT_DIM_CAP};
use crate::smatrix::{anomaly, twisted_a, untwisted_s, SOptions};

pub const DEFAULT_UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Grid {
    pub name: String,
    pub untwisted: Vec<(String, i64)>,
    /// (base type, twist, max level)
    pub twisted: Vec<(String, Twist, i64)>,
    pub sigma_sigma: Vec<(String, i64)>,
}

impl Grid {
    pub fn tiny() -> Self {
        Grid {
            name: "tiny".into(),
            untwisted: vec![("A1".into(), 2), ("A2".into(), 1), ("B2".into(), 1)],
            twisted: vec![("A3".into(), Twist::Diagram, 1), ("D4".into(), Twist::Triality, 1)],
            sigma_sigma: vec![("A3".into(), 1)],
        }
    }

    pub fn default_grid() -> Self {
        let untwisted = ["A1", "A2", "A3", "B2", "C2", "G2", "D4"]
            .iter()
            .map(|t| (t.to_string(), 3))
            .collect();
        Grid {
            name: "default".into(),
            untwisted,
            twisted: vec![
                ("A3".into(), Twist::Diagram, 2),
                ("D4".into(), Twist::Diagram, 1),
                ("D4".into(), Twist::Triality, 1),
                ("E6".into(), Twist::Diagram, 1),
            ],
            sigma_sigma: vec![("A3".into(), 2)],
        }
    }

    pub fn by_name(s: &str) -> Result<Self> {
        match s {
            "tiny" => Ok(Grid::tiny()),
            "default" => Ok(Grid::default_grid()),
            _ => Err(Error::Parse(format!("unknown grid '{s}'"))),
        }
    }

    /// `TWISTFUSE_GRID` wins over the argument.
    pub fn resolve(arg: Option<&str>) -> Result<Self> {
        match std::env::var("TWISTFUSE_GRID") {
            Ok(v) if !v.is_empty() => Grid::by_name(&v),
            _ => Grid::by_name(arg.unwrap_or("default")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub integer: f64,
    pub unitarity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            integer: DEFAULT_INTEGER_TOLERANCE,
            unitarity: DEFAULT_UNITARITY_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
    pub seconds: f64,
}

pub struct Report {
    pub grid: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("selfcheck grid={}\n", self.grid);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {:<24} residual={:.3e} time={:.2}s {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.seconds,
                c.detail
            );
        }
        out
    }
}

struct Outcome {
    residual: f64,
    detail: String,
    ok: bool,
}

fn run(name: &'static str, f: impl FnOnce() -> Result<Outcome>) -> CheckResult {
    let t0 = Instant::now();
    let r = f();
    let seconds = t0.elapsed().as_secs_f64();
    match r {
        Ok(o) => CheckResult {
            name,
            passed: o.ok,
            residual: o.residual,
            detail: o.detail,
            seconds,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            residual: f64::NAN,
            detail: e.to_string(),
            seconds,
        },
    }
}

fn affine(s: &str) -> Result<LieType> {
    let t = LieType::parse(s)?;
    LieType::affine(t.family, t.rank, 1)
}

fn check_unitarity(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (t, kmax) in &grid.untwisted {
        let d = cartan(affine(t)?)?;
        for k in 0..=*kmax {
            let s = untwisted_s(&d, k, opts)?;
            worst = worst.max(s.symmetry_residual()).max(s.unitarity_residual());
            n += 1;
        }
    }
    Ok(Outcome {
        residual: worst,
        detail: format!("{n} matrices"),
        ok: worst < tol.unitarity,
    })
}

fn check_untwisted_fusion(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (t, kmax) in &grid.untwisted {
        for k in 0..=*kmax {
            let e = FusionEngine::new(affine(t)?, Twist::None, k, opts, tol.integer)?;
            let table = e.table(Pattern::Untwisted, MethodSelect::Both)?;
            worst = worst.max(table.max_residual());
            n += table.entries.len();
        }
    }
    Ok(Outcome {
        residual: worst,
        detail: format!("{n} triples"),
        ok: true,
    })
}

fn check_twisted_a(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (t, tw, kmax) in &grid.twisted {
        let f = build_folding(affine(t)?, *tw)?;
        for k in 0..=*kmax {
            let a = twisted_a(&f, k, opts)?;
            if a.n_rows() != a.n_cols() {
                return Ok(Outcome {
                    residual: f64::INFINITY,
                    detail: format!("{} not square", a.name),
                    ok: false,
                });
            }
            worst = worst.max(a.unitarity_residual());
            n += 1;
        }
    }
    Ok(Outcome {
        residual: worst,
        detail: format!("{n} matrices"),
        ok: worst < tol.unitarity,
    })
}

fn check_twisted_fusion(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (t, tw, kmax) in &grid.twisted {
        for k in 0..=*kmax {
            let e = FusionEngine::new(affine(t)?, *tw, k, opts, tol.integer)?;
            let table = e.table(Pattern::OneSigmaSigma, MethodSelect::Both)?;
            worst = worst.max(table.max_residual());
            n += table.entries.len();
        }
    }
    Ok(Outcome {
        residual: worst,
        detail: format!("{n} triples"),
        ok: true,
    })
}

fn check_sigma_sigma(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (t, kmax) in &grid.sigma_sigma {
        for k in 0..=*kmax {
            let e = FusionEngine::new(affine(t)?, Twist::Diagram, k, opts, tol.integer)?;
            let table = e.table(Pattern::SigmaSigmaOne, MethodSelect::Both)?;
            worst = worst.max(table.max_residual());
            n += table.entries.len();
            if table.entries.iter().any(|x| x.method != Method::VerlindeOnly) {
                return Ok(Outcome {
                    residual: worst,
                    detail: "method tag".into(),
                    ok: false,
                });
            }
            let vac = vec![0; e.base.rank()];
            for a in e.sigma_weights() {
                let row: Vec<i64> = table
                    .entries
                    .iter()
                    .filter(|x| x.m1.weight.finite == a && x.m3.weight.finite == vac)
                    .map(|x| x.n)
                    .collect();
                if row.iter().sum::<i64>() != 1 {
                    return Ok(Outcome {
                        residual: worst,
                        detail: format!("dual of s{a:?} at {t} k={k}"),
                        ok: false,
                    });
                }
            }
        }
    }
    Ok(Outcome {
        residual: worst,
        detail: format!("{n} triples"),
        ok: worst < tol.integer,
    })
}

fn check_unit_laws(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Result<Outcome> {
    let mut n = 0;
    for (t, tw, kmax) in &grid.twisted {
        for k in 0..=*kmax {
            let e = FusionEngine::new(affine(t)?, *tw, k, opts, tol.integer)?;
            let vac = vec![0; e.base.rank()];
            let sig = e.sigma_weights();
            let unt = e.untwisted_weights();
            for a in &sig {
                for b in &sig {
                    let want = i64::from(a == b);
                    let (x, _) = e.coefficient(Pattern::OneSigmaSigma, [&vac, a, b], MethodSelect::Both)?;
                    if x != want {
                        return Ok(Outcome {
                            residual: 0.0,
                            detail: format!("1,s,s at {t} k={k}"),
                            ok: false,
                        });
                    }
                    n += 1;
                }
            }
            for a in &unt {
                for b in &unt {
                    let want = i64::from(a == b);
                    let (x, _) = e.coefficient(Pattern::Untwisted, [&vac, a, b], MethodSelect::Both)?;
                    if x != want {
                        return Ok(Outcome {
                            residual: 0.0,
                            detail: format!("1,1,1 at {t} k={k}"),
                            ok: false,
                        });
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(Outcome {
        residual: 0.0,
        detail: format!("{n} unit triples"),
        ok: true,
    })
}

const FOLDINGS: [(&str, Twist); 4] = [
    ("A3", Twist::Diagram),
    ("D4", Twist::Diagram),
    ("D4", Twist::Triality),
    ("E6", Twist::Diagram),
];

fn check_folding_identities(kmax: i64) -> Result<Outcome> {
    let mut n = 0;
    for (t, tw) in FOLDINGS {
        let f = build_folding(affine(t)?, tw)?;
        let base = &f.auto.base;
        let adj = &f.adjacent;
        let fail = |what: &str| {
            Ok(Outcome {
                residual: 0.0,
                detail: format!("{what} at {t} {}", tw.name()),
                ok: false,
            })
        };
        if f.pstar_apply(&adj.rhobar) != base.rhobar {
            return fail("rho");
        }
        let l = adj.rank();
        for i in 0..l {
            for j in 0..l {
                let mut x = vec![0; l];
                let mut y = vec![0; l];
                x[i] = 1;
                y[j] = 1;
                if adj.inner_product(&x, &y)? != base.inner_product(&f.pstar_apply(&x), &f.pstar_apply(&y))? {
                    return fail("isometry");
                }
            }
        }
        if f.nu_iota_nu_inv() != f.pstar_phi_inv() {
            return fail("nu iota nu^-1");
        }
        if !f.orbit_matches_adjacent() {
            return fail("orbit cartan");
        }
        for k in 0..=kmax {
            for w in dominant_level_weights(adj, k) {
                if anomaly(adj, k, &w.finite)? != anomaly(base, k, &f.pstar_apply(&w.finite))? {
                    return fail("anomaly");
                }
                n += 1;
            }
        }
    }
    Ok(Outcome {
        residual: 0.0,
        detail: format!("{n} anomaly pairs"),
        ok: true,
    })
}

fn check_bijections(kmax: i64) -> Result<Outcome> {
    for (t, tw) in FOLDINGS {
        let f = build_folding(affine(t)?, tw)?;
        for k in 0..=kmax {
            let a = dominant_level_weights(&f.twisted, k).len();
            let b = dominant_level_weights(&f.adjacent, k).len();
            let c = dominant_level_weights(&f.auto.base, k)
                .into_iter()
                .filter(|w| f.is_symmetric(&w.finite))
                .count();
            let sym = symmetric_weights(&f, k);
            let all_sym = sym
                .iter()
                .all(|w| f.is_symmetric(&w.finite) && f.auto.base.is_dominant_at_level(&w.finite, k));
            if a != b || b != c || !all_sym {
                return Ok(Outcome {
                    residual: 0.0,
                    detail: format!("{t} {} k={k}: {a} {b} {c}", tw.name()),
                    ok: false,
                });
            }
        }
    }
    Ok(Outcome {
        residual: 0.0,
        detail: "4 foldings".into(),
        ok: true,
    })
}

fn check_conservation(grid: &Grid, cap: u128) -> Result<Outcome> {
    let cache = WeightCache::new(DEFAULT_DIM_CAP);
    let mut n = 0;
    let bad = |s: String| {
        Ok(Outcome {
            residual: 0.0,
            detail: s,
            ok: false,
        })
    };
    for (t, kmax) in &grid.untwisted {
        let d = cartan(affine(t)?)?;
        let ws: Vec<_> = dominant_level_weights(&d, *kmax)
            .into_iter()
            .map(|w| w.finite)
            .collect();
        for a in &ws {
            if dim(&d, a) > cap {
                continue;
            }
            if cache.get(&d, a)?.total() != dim(&d, a) {
                return bad(format!("freudenthal {t} {a:?}"));
            }
            for b in &ws {
                if dim(&d, a) * dim(&d, b) > cap {
                    continue;
                }
                let tt = tensor_decompose(&d, a, b, &cache)?;
                let s: u128 = tt.entries.iter().map(|(w, m)| dim(&d, w) * *m as u128).sum();
                if s != dim(&d, a) * dim(&d, b) {
                    return bad(format!("tensor {t} {a:?} {b:?}"));
                }
                n += 1;
            }
        }
    }
    for (t, tw, kmax) in &grid.twisted {
        let f = build_folding(affine(t)?, *tw)?;
        let base = &f.auto.base;
        let td = &f.twisted;
        for w in dominant_level_weights(base, *kmax) {
            if dim(base, &w.finite) > cap {
                continue;
            }
            let br = branch(base, td, &f.restriction_matrix(), &w.finite, &cache)?;
            let s: u128 = br.entries.iter().map(|(v, m)| dim(td, v) * *m as u128).sum();
            if s != dim(base, &w.finite) {
                return bad(format!("branch {t} {:?}", w.finite));
            }
            n += 1;
        }
    }
    Ok(Outcome {
        residual: 0.0,
        detail: format!("{n} decompositions"),
        ok: true,
    })
}

pub fn run_selfcheck(grid: &Grid, tol: &Tolerances, opts: &SOptions) -> Report {
    let kfold = grid.twisted.iter().map(|x| x.2).max().unwrap_or(1).max(1) + 1;
    let checks = vec![
        run("s-symmetric-unitary", || check_unitarity(grid, tol, opts)),
        run("verlinde=kac-walton", || check_untwisted_fusion(grid, tol, opts)),
        run("twisted-a-unitary", || check_twisted_a(grid, tol, opts)),
        run("twisted-fusion", || check_twisted_fusion(grid, tol, opts)),
        run("sigma-sigma-1", || check_sigma_sigma(grid, tol, opts)),
        run("unit-laws", || check_unit_laws(grid, tol, opts)),
        run("folding-identities", || check_folding_identities(kfold)),
        run("weight-bijections", || check_bijections(kfold)),
        run("conservation", || check_conservation(grid, 5000)),
    ];
    Report {
        grid: grid.name.clone(),
        checks,
    }
}
