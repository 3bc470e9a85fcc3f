//! Fusion coefficients by the (twisted) Verlinde and Kac-Walton formulas.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cartan::{cartan, fmt_weight, CartanDatum, Kind, LeveledWeight, LieType, Weight};
use crate::error::{Error, Result};
use crate::fold::{build_folding, symmetric_weights, FoldingData, Twist};
use crate::rep::{branch, tensor_decompose, WeightCache, DEFAULT_DIM_CAP};
use crate::smatrix::{
    restrict_columns, twisted_sector_s, untwisted_s, MatrixLabel, ModularMatrix, Provenance, SOptions, Sector,
};
use crate::weyl::alcove_fold;

pub const DEFAULT_INTEGER_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorLabel {
    pub sector: Sector,
    pub weight: LeveledWeight,
}

impl SectorLabel {
    pub fn render(&self) -> String {
        let w = fmt_weight(&self.weight.finite);
        match self.sector {
            Sector::Untwisted => w,
            Sector::Sigma => format!("s{w}"),
        }
    }
}

/// Rounds a Verlinde sum, rejecting non-integers and negatives.
pub fn round_coefficient(z: Complex64, tol: f64) -> Result<(i64, f64)> {
    let n = z.re.round();
    let residual = (z.re - n).abs().max(z.im.abs());
    if residual > tol {
        return Err(Error::NotInteger { value: z.re, residual });
    }
    let n = n as i64;
    if n < 0 {
        return Err(Error::NegativeCoefficient(n));
    }
    Ok((n, residual))
}

fn verlinde_sum(s: &ModularMatrix, r1: usize, r2: usize, r3: usize, vac: usize) -> Complex64 {
    let mut z = Complex64::zero();
    for c in 0..s.n_cols() {
        z += s.entries[r1][c] * s.entries[r2][c] * s.entries[r3][c].conj() / s.entries[vac][c];
    }
    z
}

/// `N_{ij}^k` from an untwisted S-matrix.
pub fn verlinde(s: &ModularMatrix, i: &[i64], j: &[i64], k: &[i64], tol: f64) -> Result<i64> {
    let find = |w: &[i64]| s.row_of(w).ok_or_else(|| Error::NotDominant(fmt_weight(w), -1));
    let zero = vec![0; i.len()];
    let z = verlinde_sum(s, find(i)?, find(j)?, find(k)?, find(&zero)?);
    Ok(round_coefficient(z, tol)?.0)
}

fn check_level(datum: &CartanDatum, k: i64, w: &[i64]) -> Result<()> {
    if !datum.is_dominant_at_level(w, k) {
        return Err(Error::NotDominant(fmt_weight(w), k));
    }
    Ok(())
}

/// Folds each tensor component into the alcove and accumulates signed multiplicities.
fn fold_decomposition(
    datum: &CartanDatum,
    k: i64,
    comps: &BTreeMap<Weight, u64>,
    weight: i64,
    acc: &mut BTreeMap<Weight, i64>,
) -> Result<()> {
    for (mu, m) in comps {
        let x: Weight = mu.iter().map(|v| v + 1).collect();
        let r = alcove_fold(datum, k, &x)?;
        if let Some(rep) = r.rep {
            let key: Weight = rep.iter().map(|v| v - 1).collect();
            *acc.entry(key).or_insert(0) += weight * r.sign as i64 * *m as i64;
        }
    }
    Ok(())
}

fn finish_row(acc: BTreeMap<Weight, i64>) -> Result<BTreeMap<Weight, i64>> {
    for v in acc.values() {
        if *v < 0 {
            return Err(Error::NegativeCoefficient(*v));
        }
    }
    Ok(acc.into_iter().filter(|(_, v)| *v != 0).collect())
}

/// All `N_{λ1 λ2}^{λ3}` for fixed `λ1, λ2` by Kac-Walton.
pub fn kac_walton_row(
    datum: &CartanDatum,
    k: i64,
    l1: &[i64],
    l2: &[i64],
    cache: &WeightCache,
) -> Result<BTreeMap<Weight, i64>> {
    check_level(datum, k, l1)?;
    check_level(datum, k, l2)?;
    let t = tensor_decompose(datum, l1, l2, cache)?;
    let mut acc = BTreeMap::new();
    fold_decomposition(datum, k, &t.entries, 1, &mut acc)?;
    finish_row(acc)
}

pub fn kac_walton(datum: &CartanDatum, k: i64, l1: &[i64], l2: &[i64], l3: &[i64], cache: &WeightCache) -> Result<i64> {
    check_level(datum, k, l3)?;
    Ok(kac_walton_row(datum, k, l1, l2, cache)?.get(l3).copied().unwrap_or(0))
}

/// All `N_{λ1, λ2†}^{λ3†}` for fixed `λ1, λ2†`.
pub fn twisted_kac_walton_row(
    f: &FoldingData,
    k: i64,
    l1: &[i64],
    l2: &[i64],
    cache: &WeightCache,
) -> Result<BTreeMap<Weight, i64>> {
    let base = &f.auto.base;
    let td = &f.twisted;
    check_level(base, k, l1)?;
    check_level(td, k, l2)?;
    let comps = branch(base, td, &f.restriction_matrix(), l1, cache)?;
    let mut acc = BTreeMap::new();
    for (nu, c) in &comps.entries {
        let t = tensor_decompose(td, nu, l2, cache)?;
        fold_decomposition(td, k, &t.entries, *c as i64, &mut acc)?;
    }
    finish_row(acc)
}

pub fn twisted_kac_walton(
    f: &FoldingData,
    k: i64,
    l1: &[i64],
    l2: &[i64],
    l3: &[i64],
    cache: &WeightCache,
) -> Result<i64> {
    check_level(&f.twisted, k, l3)?;
    Ok(twisted_kac_walton_row(f, k, l1, l2, cache)?
        .get(l3)
        .copied()
        .unwrap_or(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Untwisted,
    OneSigmaSigma,
    SigmaOneSigma,
    SigmaSigmaOne,
}

impl Pattern {
    /// Parses `1,s,s` style patterns and applies the sector rule for order `p`.
    pub fn parse(s: &str, p: usize) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(|x| x.trim()).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("pattern '{s}' needs three sectors")));
        }
        let mut g = [false; 3];
        for (i, x) in parts.iter().enumerate() {
            g[i] = match *x {
                "1" | "u" => false,
                "s" | "sigma" => true,
                _ => return Err(Error::Parse(format!("bad sector '{x}'"))),
            };
        }
        match g {
            [false, false, false] => Ok(Pattern::Untwisted),
            [false, true, true] | [true, false, true] if p == 0 => {
                Err(Error::UnsupportedSectorPattern(format!("{s} needs a twist")))
            }
            [false, true, true] => Ok(Pattern::OneSigmaSigma),
            [true, false, true] => Ok(Pattern::SigmaOneSigma),
            [true, true, false] if p == 2 => Ok(Pattern::SigmaSigmaOne),
            [true, true, false] => Err(Error::UnsupportedSectorPattern(format!("{s} at order {p}"))),
            _ => Err(Error::SectorRule(format!("{s}: g3 must equal g1 g2"))),
        }
    }

    pub fn sectors(self) -> [Sector; 3] {
        use Sector::*;
        match self {
            Pattern::Untwisted => [Untwisted, Untwisted, Untwisted],
            Pattern::OneSigmaSigma => [Untwisted, Sigma, Sigma],
            Pattern::SigmaOneSigma => [Sigma, Untwisted, Sigma],
            Pattern::SigmaSigmaOne => [Sigma, Sigma, Untwisted],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern::Untwisted => "1,1,1",
            Pattern::OneSigmaSigma => "1,s,s",
            Pattern::SigmaOneSigma => "s,1,s",
            Pattern::SigmaSigmaOne => "s,s,1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Verlinde,
    KacWalton,
    Both,
    VerlindeOnly,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Verlinde => "verlinde",
            Method::KacWalton => "kac-walton",
            Method::Both => "verlinde+kac-walton",
            Method::VerlindeOnly => "verlinde-only",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodSelect {
    Both,
    Verlinde,
    KacWalton,
}

impl MethodSelect {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(MethodSelect::Both),
            "verlinde" => Ok(MethodSelect::Verlinde),
            "kac-walton" | "kw" => Ok(MethodSelect::KacWalton),
            _ => Err(Error::Parse(format!("bad method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FusionEntry {
    pub m1: SectorLabel,
    pub m2: SectorLabel,
    pub m3: SectorLabel,
    pub n: i64,
    pub method: Method,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct FusionTable {
    pub algebra: String,
    pub level: i64,
    pub twist: Twist,
    pub pattern: Pattern,
    pub entries: Vec<FusionEntry>,
}

impl FusionTable {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "m1": e.m1.render(),
                    "m2": e.m2.render(),
                    "m3": e.m3.render(),
                    "N": e.n,
                    "method": e.method.tag(),
                })
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "algebra": self.algebra,
            "level": self.level,
            "twist": self.twist.name(),
            "pattern": self.pattern.name(),
            "entries": entries,
        })
        .to_string()
    }

    pub fn to_table(&self) -> String {
        let mut rows: Vec<[String; 5]> = vec![["m1".into(), "m2".into(), "m3".into(), "N".into(), "method".into()]];
        for e in &self.entries {
            rows.push([
                e.m1.render(),
                e.m2.render(),
                e.m3.render(),
                e.n.to_string(),
                e.method.tag().into(),
            ]);
        }
        let widths: Vec<usize> = (0..5).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap()).collect();
        let mut out = format!(
            "# {} k={} twist={} pattern={}\n",
            self.algebra,
            self.level,
            self.twist.name(),
            self.pattern.name()
        );
        for r in rows {
            let cells: Vec<String> = (0..5).map(|c| format!("{:<w$}", r[c], w = widths[c])).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

/// Shared state for all fusion computations at one algebra, level and twist.
pub struct FusionEngine {
    pub base: Arc<CartanDatum>,
    pub k: i64,
    pub twist: Twist,
    pub folding: Option<FoldingData>,
    pub s: ModularMatrix,
    pub sigma: Option<ModularMatrix>,
    /// Symmetric weights and their column indices in `s`.
    pub sym: Vec<Weight>,
    pub sym_cols: Vec<usize>,
    pub cache: WeightCache,
    pub tol: f64,
}

fn leveled(k: i64, w: &[i64]) -> LeveledWeight {
    LeveledWeight {
        level: k,
        finite: w.to_vec(),
    }
}

impl FusionEngine {
    /// Accepts a finite or untwisted type name; the affine algebra is always untwisted.
    pub fn new(t: LieType, twist: Twist, k: i64, opts: &SOptions, tol: f64) -> Result<Self> {
        if k < 0 {
            return Err(Error::Parse("level must be non-negative".into()));
        }
        let t = match t.kind {
            Kind::Finite | Kind::Affine1 => LieType::affine(t.family, t.rank, 1)?,
            _ => return Err(Error::UnsupportedType(format!("{t}: give the untwisted algebra"))),
        };
        let base = cartan(t)?;
        let s = untwisted_s(&base, k, opts)?;
        let (folding, sigma, sym) = if twist == Twist::None {
            (None, None, vec![])
        } else {
            let f = build_folding(t, twist)?;
            let sig = twisted_sector_s(&f, k, opts)?;
            let sym: Vec<Weight> = symmetric_weights(&f, k).into_iter().map(|w| w.finite).collect();
            (Some(f), Some(sig), sym)
        };
        let sym_cols = sym
            .iter()
            .map(|w| s.col_of(w).expect("symmetric weight is a column"))
            .collect();
        Ok(FusionEngine {
            base,
            k,
            twist,
            folding,
            s,
            sigma,
            sym,
            sym_cols,
            cache: WeightCache::new(DEFAULT_DIM_CAP),
            tol,
        })
    }

    pub fn order(&self) -> usize {
        self.folding.as_ref().map_or(0, |f| f.p())
    }

    pub fn untwisted_weights(&self) -> Vec<Weight> {
        self.s.rows.iter().map(|l| l.weight.clone()).collect()
    }

    pub fn sigma_weights(&self) -> Vec<Weight> {
        self.sigma
            .as_ref()
            .map(|s| s.rows.iter().map(|l| l.weight.clone()).collect())
            .unwrap_or_default()
    }

    fn weights_of(&self, sector: Sector) -> Vec<Weight> {
        match sector {
            Sector::Untwisted => self.untwisted_weights(),
            Sector::Sigma => self.sigma_weights(),
        }
    }

    pub fn parse_pattern(&self, s: &str) -> Result<Pattern> {
        Pattern::parse(s, self.order())
    }

    /// `S_{M,W}` for `W` the `c`-th symmetric weight.
    fn s_entry(&self, sector: Sector, row: usize, c: usize) -> Complex64 {
        match sector {
            Sector::Untwisted => self.s.entries[row][self.sym_cols[c]],
            Sector::Sigma => self.sigma.as_ref().unwrap().entries[row][c],
        }
    }

    fn row_index(&self, sector: Sector, w: &[i64]) -> Result<usize> {
        let m = match sector {
            Sector::Untwisted => &self.s,
            Sector::Sigma => self
                .sigma
                .as_ref()
                .ok_or_else(|| Error::UnsupportedSectorPattern("no twist".into()))?,
        };
        m.row_of(w).ok_or_else(|| Error::NotDominant(fmt_weight(w), self.k))
    }

    /// Twisted Verlinde sum over the symmetric weights.
    pub fn twisted_verlinde(&self, pattern: Pattern, w: [&[i64]; 3]) -> Result<(i64, f64)> {
        if pattern == Pattern::Untwisted {
            return Err(Error::UnsupportedSectorPattern("untwisted pattern".into()));
        }
        if pattern == Pattern::SigmaSigmaOne && self.order() != 2 {
            return Err(Error::UnsupportedSectorPattern(format!(
                "s,s,1 at order {}",
                self.order()
            )));
        }
        let sec = pattern.sectors();
        let r: Vec<usize> = (0..3).map(|i| self.row_index(sec[i], w[i])).collect::<Result<_>>()?;
        let vac = self.row_index(Sector::Untwisted, &vec![0; self.base.rank()])?;
        let mut z = Complex64::zero();
        for c in 0..self.sym.len() {
            z += self.s_entry(sec[0], r[0], c) * self.s_entry(sec[1], r[1], c) * self.s_entry(sec[2], r[2], c).conj()
                / self.s_entry(Sector::Untwisted, vac, c);
        }
        round_coefficient(z, self.tol)
    }

    pub fn untwisted_verlinde(&self, w: [&[i64]; 3]) -> Result<(i64, f64)> {
        let r: Vec<usize> = (0..3)
            .map(|i| self.row_index(Sector::Untwisted, w[i]))
            .collect::<Result<_>>()?;
        let vac = self.row_index(Sector::Untwisted, &vec![0; self.base.rank()])?;
        round_coefficient(verlinde_sum(&self.s, r[0], r[1], r[2], vac), self.tol)
    }

    fn kw_row(&self, pattern: Pattern, a: &[i64], b: &[i64]) -> Result<BTreeMap<Weight, i64>> {
        match pattern {
            Pattern::Untwisted => kac_walton_row(&self.base, self.k, a, b, &self.cache),
            Pattern::OneSigmaSigma => twisted_kac_walton_row(self.folding.as_ref().unwrap(), self.k, a, b, &self.cache),
            _ => Err(Error::UnsupportedSectorPattern(format!(
                "no alcove formula for {}",
                pattern.name()
            ))),
        }
    }

    fn has_kw(pattern: Pattern) -> bool {
        matches!(pattern, Pattern::Untwisted | Pattern::OneSigmaSigma)
    }

    fn verlinde_for(&self, pattern: Pattern, w: [&[i64]; 3]) -> Result<(i64, f64)> {
        if pattern == Pattern::Untwisted {
            self.untwisted_verlinde(w)
        } else {
            self.twisted_verlinde(pattern, w)
        }
    }

    fn combine(
        &self,
        pattern: Pattern,
        w: [&[i64]; 3],
        select: MethodSelect,
        kw: Option<i64>,
    ) -> Result<(i64, Method, f64)> {
        let sec = pattern.sectors();
        let label = || {
            (0..3)
                .map(|i| {
                    SectorLabel {
                        sector: sec[i],
                        weight: leveled(self.k, w[i]),
                    }
                    .render()
                })
                .collect::<Vec<_>>()
                .join(" x ")
        };
        match (select, kw) {
            (MethodSelect::KacWalton, Some(n)) => Ok((n, Method::KacWalton, 0.0)),
            (MethodSelect::KacWalton, None) => Err(Error::UnsupportedSectorPattern(format!(
                "no alcove formula for {}",
                pattern.name()
            ))),
            (MethodSelect::Verlinde, _) => {
                let (n, r) = self.verlinde_for(pattern, w)?;
                let m = if Self::has_kw(pattern) {
                    Method::Verlinde
                } else {
                    Method::VerlindeOnly
                };
                Ok((n, m, r))
            }
            (MethodSelect::Both, Some(n2)) => {
                let (n1, r) = self.verlinde_for(pattern, w)?;
                if n1 != n2 {
                    return Err(Error::MethodMismatch {
                        triple: label(),
                        first: n1,
                        second: n2,
                    });
                }
                Ok((n1, Method::Both, r))
            }
            (MethodSelect::Both, None) => {
                let (n, r) = self.verlinde_for(pattern, w)?;
                Ok((n, Method::VerlindeOnly, r))
            }
        }
    }

    /// A single coefficient.
    pub fn coefficient(&self, pattern: Pattern, w: [&[i64]; 3], select: MethodSelect) -> Result<(i64, Method)> {
        let kw = if Self::has_kw(pattern) && select != MethodSelect::Verlinde {
            Some(self.kw_row(pattern, w[0], w[1])?.get(w[2]).copied().unwrap_or(0))
        } else {
            None
        };
        let (n, m, _) = self.combine(pattern, w, select, kw)?;
        Ok((n, m))
    }

    /// Every triple of the pattern, in label order.
    pub fn table(&self, pattern: Pattern, select: MethodSelect) -> Result<FusionTable> {
        let sec = pattern.sectors();
        let ws: Vec<Vec<Weight>> = sec.iter().map(|s| self.weights_of(*s)).collect();
        let pairs: Vec<(usize, usize)> = (0..ws[0].len())
            .flat_map(|a| (0..ws[1].len()).map(move |b| (a, b)))
            .collect();
        let blocks: Vec<Result<Vec<FusionEntry>>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (w1, w2) = (&ws[0][a], &ws[1][b]);
                let row = if Self::has_kw(pattern) && select != MethodSelect::Verlinde {
                    Some(self.kw_row(pattern, w1, w2)?)
                } else {
                    None
                };
                let mut out = vec![];
                for w3 in &ws[2] {
                    let kw = row.as_ref().map(|r| r.get(w3).copied().unwrap_or(0));
                    let (n, method, residual) = self.combine(pattern, [w1, w2, w3], select, kw)?;
                    out.push(FusionEntry {
                        m1: SectorLabel {
                            sector: sec[0],
                            weight: leveled(self.k, w1),
                        },
                        m2: SectorLabel {
                            sector: sec[1],
                            weight: leveled(self.k, w2),
                        },
                        m3: SectorLabel {
                            sector: sec[2],
                            weight: leveled(self.k, w3),
                        },
                        n,
                        method,
                        residual,
                    });
                }
                Ok(out)
            })
            .collect();
        let mut entries = vec![];
        for b in blocks {
            entries.extend(b?);
        }
        Ok(FusionTable {
            algebra: self.base.lie_type.to_string(),
            level: self.k,
            twist: self.twist,
            pattern,
            entries,
        })
    }
}

/// Blocks of the orbifold S-matrix computable from the untwisted and twisted-sector data (order 2).
pub fn orbifold_block_report(f: &FoldingData, k: i64, opts: &SOptions) -> Result<Vec<ModularMatrix>> {
    if f.p() != 2 {
        return Err(Error::UnsupportedOrder(f.p()));
    }
    let base = &f.auto.base;
    let s = untwisted_s(base, k, opts)?;
    let a = twisted_sector_s(f, k, opts)?;
    let sym: Vec<Weight> = symmetric_weights(f, k).into_iter().map(|w| w.finite).collect();
    let ssym = restrict_columns(&s, &sym);
    let sym_rows: Vec<usize> = sym.iter().map(|w| s.row_of(w).unwrap()).collect();
    let reps: Vec<usize> = (0..s.n_rows())
        .filter(|&i| {
            let w = &s.rows[i].weight;
            let img = f.auto.act(w);
            img != *w && *w < img
        })
        .collect();
    let tw: Vec<Weight> = a.rows.iter().map(|l| l.weight.clone()).collect();
    let chars = [0u8, 1u8];
    let sign = |s: u8| if s == 0 { 1.0 } else { -1.0 };

    let lab_sym = |s: u8| {
        sym.iter()
            .map(move |w| MatrixLabel::untwisted(w.clone()).with_character(s))
    };
    let lab_tw = |s: u8| tw.iter().map(move |w| MatrixLabel::sigma(w.clone()).with_character(s));
    let block =
        |name: &str, rows: Vec<MatrixLabel>, cols: Vec<MatrixLabel>, entries: Vec<Vec<Complex64>>| ModularMatrix {
            name: name.to_string(),
            rows,
            cols,
            entries,
            provenance: Provenance::OrbifoldBlock,
            precision_bits: opts.precision_bits.max(53),
        };

    let mut out = vec![];
    // sym x sym: characters trivial at g = 1
    {
        let rows: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_sym(c)).collect();
        let cols = rows.clone();
        let mut e = vec![];
        for _ in chars {
            for &i in &sym_rows {
                let mut r = vec![];
                for _ in chars {
                    for j in 0..sym.len() {
                        r.push(ssym.entries[i][j] * 0.5);
                    }
                }
                e.push(r);
            }
        }
        out.push(block("sym x sym", rows, cols, e));
    }
    // sym x twisted: conj(L_s(sigma))
    {
        let rows: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_sym(c)).collect();
        let cols: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_tw(c)).collect();
        let mut e = vec![];
        for &cs in &chars {
            for j in 0..sym.len() {
                let mut r = vec![];
                for _ in chars {
                    for t in 0..tw.len() {
                        r.push(a.entries[t][j] * 0.5 * sign(cs));
                    }
                }
                e.push(r);
            }
        }
        out.push(block("sym x twisted", rows, cols, e));
    }
    // twisted x sym: L_t(sigma^{-1})
    {
        let rows: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_tw(c)).collect();
        let cols: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_sym(c)).collect();
        let mut e = vec![];
        for _ in chars {
            for t in 0..tw.len() {
                let mut r = vec![];
                for &ct in &chars {
                    for j in 0..sym.len() {
                        r.push(a.entries[t][j] * 0.5 * sign(ct));
                    }
                }
                e.push(r);
            }
        }
        out.push(block("twisted x sym", rows, cols, e));
    }
    let orbit_labels: Vec<MatrixLabel> = reps
        .iter()
        .map(|&i| MatrixLabel {
            orbit_rep: true,
            ..MatrixLabel::untwisted(s.rows[i].weight.clone())
        })
        .collect();
    // orbit representatives x sym
    {
        let cols: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_sym(c)).collect();
        let e = reps
            .iter()
            .map(|&i| chars.iter().flat_map(|_| ssym.entries[i].iter().copied()).collect())
            .collect();
        out.push(block("orbit x sym", orbit_labels.clone(), cols, e));
    }
    // orbit representatives x twisted: zero
    {
        let cols: Vec<MatrixLabel> = chars.iter().flat_map(|&c| lab_tw(c)).collect();
        let n = cols.len();
        let e = reps.iter().map(|_| vec![Complex64::zero(); n]).collect();
        out.push(block("orbit x twisted", orbit_labels, cols, e));
    }
    Ok(out)
}
