//! Conformal data and Kac-Peterson modular matrices.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cartan::{dual_lattice, fmt_weight, lattice_index, CartanDatum, LatticeBasis, Weight};
use crate::error::{Error, Result};
use crate::fold::{symmetric_weights, FoldingData};
use crate::linalg::{self, q, Q};
use crate::rep::dominant_level_weights;
use crate::weyl::{generate_weyl_with, WeylGroup, DEFAULT_ELEMENT_CAP, DEFAULT_MAX_RANK};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalData {
    pub k: i64,
    pub m: Q,
    pub h: Q,
    pub c: Q,
}

fn shifted(w: &[i64], by: i64) -> Weight {
    w.iter().map(|x| x + by).collect()
}

/// `m = |λ+ρ|²/2t - |ρ|²/2h∨`.
pub fn anomaly(datum: &CartanDatum, k: i64, lambda: &[i64]) -> Result<Q> {
    datum.check_len(lambda)?;
    let t = q((k + datum.hdual) as i128);
    let lr = shifted(lambda, 1);
    let a = datum.inner_product(&lr, &lr)?;
    let r = datum.inner_product(&datum.rhobar, &datum.rhobar)?;
    Ok(a / (q(2) * t) - r / q(2 * datum.hdual as i128))
}

pub fn central_charge(datum: &CartanDatum, k: i64) -> Q {
    let dim = (datum.rank() + 2 * datum.npos) as i128;
    Q::new(k as i128 * dim, (k + datum.hdual) as i128)
}

pub fn conformal(datum: &CartanDatum, k: i64, lambda: &[i64]) -> Result<ConformalData> {
    if !datum.is_affine() {
        return Err(Error::NotAffine);
    }
    if !datum.is_dominant_at_level(lambda, k) {
        return Err(Error::NotDominant(fmt_weight(lambda), k));
    }
    let t = q((k + datum.hdual) as i128);
    let l2r: Weight = lambda.iter().map(|x| x + 2).collect();
    let h = datum.inner_product(&l2r, lambda)? / (q(2) * t);
    Ok(ConformalData {
        k,
        m: anomaly(datum, k, lambda)?,
        h,
        c: central_charge(datum, k),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    UntwistedS,
    TwistedA,
    OrbifoldBlock,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::UntwistedS => "untwisted-S",
            Provenance::TwistedA => "twisted-a",
            Provenance::OrbifoldBlock => "orbifold-block",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Untwisted,
    Sigma,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixLabel {
    pub sector: Sector,
    pub weight: Weight,
    /// Eigenspace index `s` of `Λ_s` for orbifold blocks.
    pub character: Option<u8>,
    /// Marks a non-symmetric orbit representative.
    pub orbit_rep: bool,
}

impl MatrixLabel {
    pub fn untwisted(w: Weight) -> Self {
        MatrixLabel {
            sector: Sector::Untwisted,
            weight: w,
            character: None,
            orbit_rep: false,
        }
    }

    pub fn sigma(w: Weight) -> Self {
        MatrixLabel {
            sector: Sector::Sigma,
            weight: w,
            character: None,
            orbit_rep: false,
        }
    }

    pub fn with_character(mut self, s: u8) -> Self {
        self.character = Some(s);
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.orbit_rep {
            out.push('M');
        }
        if self.sector == Sector::Sigma {
            out.push('s');
        }
        out.push_str(&fmt_weight(&self.weight));
        if let Some(s) = self.character {
            let _ = write!(out, "L{s}");
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ModularMatrix {
    pub name: String,
    pub rows: Vec<MatrixLabel>,
    pub cols: Vec<MatrixLabel>,
    pub entries: Vec<Vec<Complex64>>,
    pub provenance: Provenance,
    pub precision_bits: usize,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl ModularMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_of(&self, w: &[i64]) -> Option<usize> {
        self.rows.iter().position(|l| l.weight == w)
    }

    pub fn col_of(&self, w: &[i64]) -> Option<usize> {
        self.cols.iter().position(|l| l.weight == w)
    }

    /// `max |S - S^T|`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for i in 0..self.n_rows() {
            for j in 0..self.n_cols() {
                r = r.max((self.entries[i][j] - self.entries[j][i]).norm());
            }
        }
        r
    }

    /// `max |S S^H - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n_rows();
        let mut r = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::zero();
                for c in 0..self.n_cols() {
                    s += self.entries[i][c] * self.entries[j][c].conj();
                }
                if i == j {
                    s -= 1.0;
                }
                r = r.max(s.norm());
            }
        }
        r
    }

    pub fn to_json(&self) -> String {
        let labels = |ls: &[MatrixLabel]| {
            let v: Vec<String> = ls.iter().map(|l| format!("\"{}\"", l.render())).collect();
            format!("[{}]", v.join(","))
        };
        let part = |f: &dyn Fn(&Complex64) -> f64| {
            let rows: Vec<String> = self
                .entries
                .iter()
                .map(|r| format!("[{}]", r.iter().map(|z| fmt_f64(f(z))).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", rows.join(","))
        };
        format!(
            "{{\"schema\":1,\"name\":\"{}\",\"provenance\":\"{}\",\"precision\":{},\"rows\":{},\"cols\":{},\"re\":{},\"im\":{}}}",
            self.name,
            self.provenance.tag(),
            self.precision_bits,
            labels(&self.rows),
            labels(&self.cols),
            part(&|z| z.re),
            part(&|z| z.im)
        )
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("# {} [{}]\n", self.name, self.provenance.tag());
        let w = self.rows.iter().map(|l| l.render().len()).max().unwrap_or(0);
        let _ = write!(out, "{:w$}", "");
        for c in &self.cols {
            let _ = write!(out, "  {:>24}", c.render());
        }
        out.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let _ = write!(out, "{:w$}", r.render());
            for z in &self.entries[i] {
                let _ = write!(out, "  {:>24}", format!("{:+.9}{:+.9}i", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SOptions {
    pub precision_bits: usize,
    pub max_rank: usize,
    pub element_cap: usize,
}

impl Default for SOptions {
    fn default() -> Self {
        SOptions {
            precision_bits: 53,
            max_rank: DEFAULT_MAX_RANK,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

fn quarter_turn(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Signed histogram of `(w x, g) mod modulus` over the group.
fn weyl_histogram(group: &WeylGroup, x: &[i64], g: &[i128], modulus: i128) -> Vec<i64> {
    let mut counts = vec![0i64; modulus as usize];
    let l = group.rank;
    for (m, s) in group.elements.iter().zip(&group.signs) {
        let mut n: i128 = 0;
        for i in 0..l {
            let mut wx = 0i64;
            for j in 0..l {
                wx += m[i * l + j] * x[j];
            }
            n += wx as i128 * g[i];
        }
        counts[n.rem_euclid(modulus) as usize] += *s as i64;
    }
    counts
}

/// `Σ counts[n] exp(-2πi n / modulus)`.
fn evaluate(counts: &[i64], modulus: i128, bits: usize) -> Complex64 {
    if bits <= 53 {
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (n, c) in counts.iter().enumerate() {
            if *c != 0 {
                let a = 2.0 * std::f64::consts::PI * (n as f64) / (modulus as f64);
                re += *c as f64 * a.cos();
                im -= *c as f64 * a.sin();
            }
        }
        Complex64::new(re, im)
    } else {
        extended::evaluate(counts, modulus, bits)
    }
}

mod extended {
    use astro_float::{BigFloat, Consts, RoundingMode};
    use num_complex::Complex64;

    fn to_f64(x: &BigFloat) -> f64 {
        x.to_string().parse().unwrap_or(f64::NAN)
    }

    pub fn evaluate(counts: &[i64], modulus: i128, bits: usize) -> Complex64 {
        let rm = RoundingMode::ToEven;
        let p = bits + 64;
        let mut cc = Consts::new().expect("constants cache");
        let two_pi = cc.pi(p, rm).mul(&BigFloat::from_i64(2, p), p, rm);
        let m = BigFloat::from_i64(modulus as i64, p);
        let mut re = BigFloat::from_i64(0, p);
        let mut im = BigFloat::from_i64(0, p);
        for (n, c) in counts.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let a = two_pi.mul(&BigFloat::from_i64(n as i64, p), p, rm).div(&m, p, rm);
            let cf = BigFloat::from_i64(*c, p);
            re = re.add(&a.cos(p, rm, &mut cc).mul(&cf, p, rm), p, rm);
            im = im.sub(&a.sin(p, rm, &mut cc).mul(&cf, p, rm), p, rm);
        }
        Complex64::new(to_f64(&re), to_f64(&im))
    }
}

fn positive_integer(x: Q) -> Result<i128> {
    if !x.is_integer() || x <= Q::zero() {
        return Err(Error::NotSublattice);
    }
    Ok(x.to_integer())
}

/// `|M*/tM|` for an affine datum.
pub fn discriminant_index(datum: &CartanDatum, t: i64) -> Result<i128> {
    let m = datum.lattice_m()?;
    positive_integer(lattice_index(&dual_lattice(m, datum), &m.scaled(t as i128))?)
}

fn sqrt_int(n: i128) -> f64 {
    n.to_f64().unwrap().sqrt()
}

pub fn untwisted_s(datum: &CartanDatum, k: i64, opts: &SOptions) -> Result<ModularMatrix> {
    if !datum.is_affine() {
        return Err(Error::NotAffine);
    }
    let group = generate_weyl_with(datum, opts.max_rank, opts.element_cap)?;
    let t = k + datum.hdual;
    let weights: Vec<Weight> = dominant_level_weights(datum, k).into_iter().map(|w| w.finite).collect();
    let idx = discriminant_index(datum, t)?;
    let pref = quarter_turn(datum.npos) / sqrt_int(idx);
    let modulus = datum.gram_den * t as i128;
    let l = datum.rank();
    let gy: Vec<Vec<i128>> = weights
        .iter()
        .map(|mu| {
            let y = shifted(mu, 1);
            (0..l)
                .map(|i| (0..l).map(|j| datum.gram_num[i][j] * y[j] as i128).sum())
                .collect()
        })
        .collect();
    let n = weights.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let vals: Vec<Complex64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let x = shifted(&weights[i], 1);
            let h = weyl_histogram(&group, &x, &gy[j], modulus);
            pref * evaluate(&h, modulus, opts.precision_bits)
        })
        .collect();
    let entries = vals.chunks(n.max(1)).map(|c| c.to_vec()).collect();
    let labels: Vec<MatrixLabel> = weights.into_iter().map(MatrixLabel::untwisted).collect();
    Ok(ModularMatrix {
        name: format!("S[{} k={}]", datum.lie_type, k),
        rows: labels.clone(),
        cols: labels,
        entries,
        provenance: Provenance::UntwistedS,
        precision_bits: opts.precision_bits.max(53),
    })
}

/// `|M'/M†|` with `M'` carried into the twisted weight space by `phi`.
pub fn adjacent_index(f: &FoldingData) -> Result<i128> {
    let md = f.twisted.lattice_m()?;
    let ma = f.adjacent.lattice_m()?;
    let image = LatticeBasis {
        basis: ma.basis.iter().map(|b| f.phi_apply(b)).collect(),
    };
    positive_integer(lattice_index(&image, md)?)
}

pub fn twisted_a(f: &FoldingData, k: i64, opts: &SOptions) -> Result<ModularMatrix> {
    let td = &f.twisted;
    let group = generate_weyl_with(td, opts.max_rank, opts.element_cap)?;
    let t = k + td.hdual;
    let rows: Vec<Weight> = dominant_level_weights(td, k).into_iter().map(|w| w.finite).collect();
    let cols: Vec<Weight> = dominant_level_weights(&f.adjacent, k)
        .into_iter()
        .map(|w| w.finite)
        .collect();
    let idx_d = discriminant_index(td, t)?;
    let idx_a = adjacent_index(f)?;
    let pref = quarter_turn(td.npos) * (sqrt_int(idx_a) / sqrt_int(idx_d));
    let l = td.rank();
    // (x, phi(y)) = x . g / den
    let gs: Vec<Vec<Q>> = cols
        .iter()
        .map(|mu| {
            let y: Vec<Q> = shifted(mu, 1).iter().map(|&v| q(v as i128)).collect();
            linalg::mat_vec(&td.gram_weights, &f.phi_apply(&y))
        })
        .collect();
    let den = linalg::lcm_denoms(gs.iter().flatten());
    let gi: Vec<Vec<i128>> = gs
        .iter()
        .map(|g| g.iter().map(|x| (x * q(den)).to_integer()).collect())
        .collect();
    let modulus = den * t as i128;
    let nr = rows.len();
    let nc = cols.len();
    let cells: Vec<(usize, usize)> = (0..nr).flat_map(|i| (0..nc).map(move |j| (i, j))).collect();
    let vals: Vec<Complex64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let x = shifted(&rows[i], 1);
            debug_assert_eq!(x.len(), l);
            let h = weyl_histogram(&group, &x, &gi[j], modulus);
            pref * evaluate(&h, modulus, opts.precision_bits)
        })
        .collect();
    let entries = vals.chunks(nc.max(1)).map(|c| c.to_vec()).collect();
    Ok(ModularMatrix {
        name: format!("a[{}/{} k={}]", td.lie_type, f.adjacent.lie_type, k),
        rows: rows.into_iter().map(MatrixLabel::sigma).collect(),
        cols: cols.into_iter().map(MatrixLabel::untwisted).collect(),
        entries,
        provenance: Provenance::TwistedA,
        precision_bits: opts.precision_bits.max(53),
    })
}

/// Twisted `a` with columns relabeled by symmetric weights of `A`.
pub fn twisted_sector_s(f: &FoldingData, k: i64, opts: &SOptions) -> Result<ModularMatrix> {
    let mut a = twisted_a(f, k, opts)?;
    a.cols = symmetric_weights(f, k)
        .into_iter()
        .map(|w| MatrixLabel::untwisted(w.finite))
        .collect();
    a.name = format!("S[{} sigma k={}]", f.auto.base.lie_type, k);
    Ok(a)
}

/// Columns of an untwisted S restricted to the given weights.
pub fn restrict_columns(s: &ModularMatrix, cols: &[Weight]) -> ModularMatrix {
    let idx: Vec<usize> = cols.iter().map(|w| s.col_of(w).expect("column present")).collect();
    ModularMatrix {
        name: format!("{} (symmetric columns)", s.name),
        rows: s.rows.clone(),
        cols: idx.iter().map(|&j| s.cols[j].clone()).collect(),
        entries: s.entries.iter().map(|r| idx.iter().map(|&j| r[j]).collect()).collect(),
        provenance: s.provenance,
        precision_bits: s.precision_bits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, LieType};
    use crate::fold::{build_folding, Twist};

    fn datum(s: &str) -> CartanDatum {
        build_cartan(LieType::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn conformal_a1() {
        let a = datum("A1^(1)");
        let c = conformal(&a, 1, &[1]).unwrap();
        assert_eq!(c.h, Q::new(1, 4));
        assert_eq!(c.c, q(1));
        let c0 = conformal(&a, 1, &[0]).unwrap();
        assert_eq!(c0.h, q(0));
        assert_eq!(c0.m, Q::new(-1, 24));
        assert_eq!(c.h - c.m, c.c / q(24));
    }

    #[test]
    fn a1_closed_form() {
        for k in 1..=3 {
            let s = untwisted_s(&datum("A1^(1)"), k, &SOptions::default()).unwrap();
            let t = (k + 2) as f64;
            for a in 0..=k as usize {
                for b in 0..=k as usize {
                    let want = (2.0 / t).sqrt() * (std::f64::consts::PI * ((a + 1) * (b + 1)) as f64 / t).sin();
                    assert!((s.entries[a][b] - Complex64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn extended_matches_double() {
        let a = datum("A2^(1)");
        let s1 = untwisted_s(&a, 2, &SOptions::default()).unwrap();
        let s2 = untwisted_s(
            &a,
            2,
            &SOptions {
                precision_bits: 128,
                ..Default::default()
            },
        )
        .unwrap();
        for i in 0..s1.n_rows() {
            for j in 0..s1.n_cols() {
                assert!((s1.entries[i][j] - s2.entries[i][j]).norm() < 1e-13);
            }
        }
        assert!(s2.unitarity_residual() < 1e-14);
    }

    #[test]
    fn twisted_unitary_small() {
        let f = build_folding(LieType::parse("A3^(1)").unwrap(), Twist::Diagram).unwrap();
        let a = twisted_a(&f, 1, &SOptions::default()).unwrap();
        assert_eq!(a.n_rows(), a.n_cols());
        assert!(a.unitarity_residual() < 1e-9, "{}", a.unitarity_residual());
        let s = twisted_sector_s(&f, 1, &SOptions::default()).unwrap();
        assert_eq!(s.entries, a.entries);
    }

    #[test]
    fn json_shape() {
        let s = untwisted_s(&datum("A1^(1)"), 1, &SOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    }
}
