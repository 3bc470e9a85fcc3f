//! Root data for finite and affine Cartan matrices.
//!
//! Nodes follow Kac's numbering. Affine matrices are indexed `0..=l`; the
//! finite part consists of nodes `1..=l`. Weights are integer Dynkin labels of
//! the finite part, stored as plain vectors with index `i - 1` for node `i`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, q, QMat, Q};

pub type Weight = Vec<i64>;

/// A finite weight paired with a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeveledWeight {
    pub level: i64,
    pub finite: Weight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Finite,
    Affine1,
    Affine2,
    Affine3,
}

impl Kind {
    pub fn order(self) -> usize {
        match self {
            Kind::Finite => 0,
            Kind::Affine1 => 1,
            Kind::Affine2 => 2,
            Kind::Affine3 => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
    pub kind: Kind,
}

impl LieType {
    pub fn new(family: Family, rank: usize, kind: Kind) -> Result<Self> {
        let t = LieType { family, rank, kind };
        use Family::*;
        let ok = match kind {
            Kind::Finite | Kind::Affine1 => match family {
                A => rank >= 1,
                B | C => rank >= 2,
                D => rank >= 4,
                E => (6..=8).contains(&rank),
                F => rank == 4,
                G => rank == 2,
            },
            Kind::Affine2 => match family {
                A if rank >= 2 && rank.is_multiple_of(2) => {
                    return Err(Error::UnsupportedType(format!("{t} (even A twisted)")))
                }
                A => rank >= 3,
                D => rank >= 3,
                E => rank == 6,
                _ => false,
            },
            Kind::Affine3 => family == D && rank == 4,
        };
        if ok {
            Ok(t)
        } else {
            Err(Error::UnsupportedType(t.to_string()))
        }
    }

    pub fn finite(family: Family, rank: usize) -> Result<Self> {
        Self::new(family, rank, Kind::Finite)
    }

    pub fn affine(family: Family, rank: usize, r: usize) -> Result<Self> {
        let kind = match r {
            1 => Kind::Affine1,
            2 => Kind::Affine2,
            3 => Kind::Affine3,
            _ => return Err(Error::UnsupportedType(format!("{family:?}{rank}^({r})"))),
        };
        Self::new(family, rank, kind)
    }

    /// Parses `A3`, `A3^(1)`, `A3(2)`, `D4^(3)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad type '{s}'"));
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(bad()),
        };
        let rest: &str = chars.as_str();
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rank: usize = digits.parse().map_err(|_| bad())?;
        let tail = rest[digits.len()..].trim_start_matches('^');
        if tail.is_empty() {
            return Self::finite(family, rank);
        }
        let inner = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let r: usize = inner.parse().map_err(|_| bad())?;
        Self::affine(family, rank, r)
    }

    pub fn is_affine(&self) -> bool {
        self.kind != Kind::Finite
    }

    /// Number of finite nodes.
    pub fn finite_rank(&self) -> usize {
        match (self.kind, self.family) {
            (Kind::Affine2, Family::A) => self.rank.div_ceil(2),
            (Kind::Affine2, Family::D) => self.rank - 1,
            (Kind::Affine2, Family::E) => 4,
            (Kind::Affine3, _) => 2,
            _ => self.rank,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)?;
        if self.is_affine() {
            write!(f, "^({})", self.kind.order())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    pub basis: Vec<Vec<Q>>,
}

impl LatticeBasis {
    /// Basis of the integer span of rational generators.
    pub fn from_generators(gens: &[Vec<Q>]) -> Self {
        let den = linalg::lcm_denoms(gens.iter().flatten());
        let rows = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * q(den)).to_integer()).collect())
            .collect();
        let h = linalg::hnf_rows(rows);
        LatticeBasis {
            basis: h
                .into_iter()
                .map(|r| r.into_iter().map(|x| Q::new(x, den)).collect())
                .collect(),
        }
    }

    pub fn scaled(&self, t: i128) -> Self {
        LatticeBasis {
            basis: self
                .basis
                .iter()
                .map(|r| r.iter().map(|x| x * q(t)).collect())
                .collect(),
        }
    }

    pub fn standard(n: usize) -> Self {
        LatticeBasis {
            basis: linalg::identity(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// `[L1 : L2]` for `L2 ⊆ L1`.
pub fn lattice_index(l1: &LatticeBasis, l2: &LatticeBasis) -> Result<Q> {
    if l1.rank() != l2.rank() {
        return Err(Error::NotSublattice);
    }
    let inv = linalg::inverse(&l1.basis).ok_or(Error::NotSublattice)?;
    let c = linalg::mat_mul(&l2.basis, &inv);
    if !c.iter().all(|r| linalg::is_integral(r)) {
        return Err(Error::NotSublattice);
    }
    let d = linalg::det(&c).abs();
    if d.is_zero() {
        return Err(Error::NotSublattice);
    }
    Ok(d)
}

/// Dual lattice with respect to the datum's form on weights.
pub fn dual_lattice(l: &LatticeBasis, datum: &CartanDatum) -> LatticeBasis {
    let g = &datum.gram_weights;
    let bg = linalg::mat_mul(&l.basis, g);
    let gb = linalg::mat_mul(&bg, &linalg::transpose(&l.basis));
    let inv = linalg::inverse(&gb).expect("lattice basis is nondegenerate");
    LatticeBasis {
        basis: linalg::mat_mul(&inv, &l.basis),
    }
}

#[derive(Clone, Debug)]
pub struct CartanDatum {
    pub lie_type: LieType,
    /// Full matrix, `a[i][j] = <alpha_i^vee, alpha_j>`.
    pub a: Vec<Vec<i64>>,
    pub d: Vec<Q>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub hdual: i64,
    pub gram_roots: QMat,
    pub gram_weights: QMat,
    pub theta: Weight,
    pub theta_covec: Vec<i64>,
    pub rhobar: Weight,
    pub m_basis: Option<LatticeBasis>,
    pub npos: usize,
    /// Positive roots of the finite part in simple-root coordinates.
    pub positive_roots: Vec<Vec<i64>>,
    /// Positive roots in weight coordinates.
    pub positive_roots_wt: Vec<Weight>,
    /// `gram_weights = gram_num / gram_den`.
    pub gram_num: Vec<Vec<i128>>,
    pub gram_den: i128,
    pub fingerprint: u64,
}

fn edges_to_matrix(n: usize, edges: &[(usize, usize, i64, i64)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j, aij, aji) in edges {
        a[i][j] = aij;
        a[j][i] = aji;
    }
    a
}

fn chain(from: usize, to: usize) -> Vec<(usize, usize, i64, i64)> {
    (from..to).map(|i| (i, i + 1, -1, -1)).collect()
}

/// Finite Cartan matrix, 1-based node `i` at index `i - 1`.
fn finite_matrix(family: Family, l: usize) -> Vec<Vec<i64>> {
    // edges use 1-based node numbers shifted to 0-based
    let mut e: Vec<(usize, usize, i64, i64)> = vec![];
    match family {
        Family::A => e.extend(chain(1, l)),
        Family::B => {
            e.extend(chain(1, l - 1));
            e.push((l - 1, l, -1, -2));
        }
        Family::C => {
            e.extend(chain(1, l - 1));
            e.push((l - 1, l, -2, -1));
        }
        Family::D => {
            e.extend(chain(1, l - 1));
            e.push((l - 2, l, -1, -1));
        }
        Family::E => {
            e.extend(chain(1, l - 1));
            e.push((3, l, -1, -1));
        }
        Family::F => {
            e.push((1, 2, -1, -1));
            e.push((2, 3, -1, -2));
            e.push((3, 4, -1, -1));
        }
        Family::G => e.push((1, 2, -1, -3)),
    }
    let e: Vec<_> = e.into_iter().map(|(i, j, a, b)| (i - 1, j - 1, a, b)).collect();
    edges_to_matrix(l, &e)
}

/// Twisted affine matrices, nodes `0..=l`.
fn twisted_matrix(t: LieType) -> Vec<Vec<i64>> {
    let l = t.finite_rank();
    let mut e: Vec<(usize, usize, i64, i64)> = vec![];
    match (t.family, t.kind) {
        (Family::A, Kind::Affine2) => {
            if l == 2 {
                e.push((0, 2, -2, -1));
            } else {
                e.push((0, 2, -1, -1));
                e.extend(chain(1, l - 1));
            }
            e.push((l - 1, l, -2, -1));
        }
        (Family::D, Kind::Affine2) => {
            e.push((0, 1, -2, -1));
            e.extend(chain(1, l - 1));
            e.push((l - 1, l, -1, -2));
        }
        (Family::E, Kind::Affine2) => {
            e.extend(chain(0, 2));
            e.push((2, 3, -2, -1));
            e.push((3, 4, -1, -1));
        }
        (Family::D, Kind::Affine3) => {
            e.push((0, 1, -1, -1));
            e.push((1, 2, -3, -1));
        }
        _ => unreachable!("validated by LieType::new"),
    }
    edges_to_matrix(l + 1, &e)
}

fn untwisted_matrix(fin: &CartanDatum) -> Vec<Vec<i64>> {
    let l = fin.rank();
    let mut a = vec![vec![0i64; l + 1]; l + 1];
    a[0][0] = 2;
    for i in 0..l {
        for j in 0..l {
            a[i + 1][j + 1] = fin.a[i][j];
        }
        a[i + 1][0] = -fin.theta[i];
        a[0][i + 1] = -(0..l).map(|m| fin.theta_covec[m] * fin.a[m][i]).sum::<i64>();
    }
    a
}

/// Builds the datum for a supported type from the embedded tables.
pub fn build_cartan(t: LieType) -> Result<CartanDatum> {
    let t = LieType::new(t.family, t.rank, t.kind)?;
    match t.kind {
        Kind::Finite => CartanDatum::from_matrix(t, finite_matrix(t.family, t.rank)),
        Kind::Affine1 => {
            let fin = CartanDatum::from_matrix(LieType::finite(t.family, t.rank)?, finite_matrix(t.family, t.rank))?;
            CartanDatum::from_matrix(t, untwisted_matrix(&fin))
        }
        _ => CartanDatum::from_matrix(t, twisted_matrix(t)),
    }
}

fn symmetrizer(a: &[Vec<i64>]) -> Result<Vec<Q>> {
    let n = a.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if i != j && a[i][j] != 0 && d[j].is_none() {
                    if a[j][i] == 0 {
                        return Err(Error::InvalidTable("not symmetrizable".into()));
                    }
                    // d_i a_ij = d_j a_ji
                    d[j] = Some(d[i].unwrap() * q(a[i][j] as i128) / q(a[j][i] as i128));
                    queue.push_back(j);
                }
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(Option::unwrap).collect();
    let max = d.iter().cloned().fold(Q::zero(), |m, x| if x > m { x } else { m });
    Ok(d.into_iter().map(|x| x / max).collect())
}

fn positive_roots(abar: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = abar.len();
    let mut roots: Vec<Vec<i64>> = vec![];
    let mut set: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        })
        .collect();
    for r in &layer {
        set.insert(r.clone());
    }
    while !layer.is_empty() {
        roots.extend(layer.iter().cloned());
        let mut next = vec![];
        for beta in &layer {
            for i in 0..l {
                let pairing: i64 = (0..l).map(|j| abar[i][j] * beta[j]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if set.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if set.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        layer = next;
    }
    roots
}

impl CartanDatum {
    /// Derives every field from a raw matrix; validates the invariants.
    pub fn from_matrix(t: LieType, a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        let affine = t.is_affine();
        let off = usize::from(affine);
        let l = n - off;
        if l != t.finite_rank() || a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTable(format!("{t}: matrix has wrong size")));
        }
        let (marks, comarks, d) = if affine {
            let marks = linalg::primitive_null_vector(&a)
                .ok_or_else(|| Error::InvalidTable(format!("{t}: no positive null vector")))?;
            let at: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
            let comarks = linalg::primitive_null_vector(&at)
                .ok_or_else(|| Error::InvalidTable(format!("{t}: no positive conull vector")))?;
            if marks[0] != 1 || comarks[0] != 1 {
                return Err(Error::UnsupportedType(format!("{t}: a_0 != 1")));
            }
            let d = (0..n).map(|i| Q::new(comarks[i] as i128, marks[i] as i128)).collect();
            (marks, comarks, d)
        } else {
            (vec![], vec![], symmetrizer(&a)?)
        };
        for i in 0..n {
            for j in 0..n {
                if d[i] * q(a[i][j] as i128) != d[j] * q(a[j][i] as i128) {
                    return Err(Error::InvalidTable(format!("{t}: diag(d)A not symmetric")));
                }
            }
        }
        let abar: Vec<Vec<i64>> = (off..n).map(|i| a[i][off..].to_vec()).collect();
        let dbar: Vec<Q> = d[off..].to_vec();
        let abar_q = linalg::to_q(&abar);
        let gram_roots = linalg::mat_mul(&linalg::diag(&dbar), &abar_q);
        let abar_inv =
            linalg::inverse(&abar_q).ok_or_else(|| Error::InvalidTable(format!("{t}: finite part singular")))?;
        let gram_weights = linalg::mat_mul(&linalg::diag(&dbar), &abar_inv);
        let roots = positive_roots(&abar);
        let to_wt = |c: &[i64]| -> Weight { (0..l).map(|i| (0..l).map(|j| abar[i][j] * c[j]).sum()).collect() };
        let roots_wt: Vec<Weight> = roots.iter().map(|c| to_wt(c)).collect();

        let gram_den = linalg::lcm_denoms(gram_weights.iter().flatten());
        let gram_num: Vec<Vec<i128>> = gram_weights
            .iter()
            .map(|r| r.iter().map(|x| (x * q(gram_den)).to_integer()).collect())
            .collect();

        let (theta, theta_covec) = if affine {
            let theta: Weight = (1..n).map(|j| -a[j][0]).collect();
            (theta, comarks[1..].to_vec())
        } else {
            let top = roots
                .iter()
                .max_by_key(|c| c.iter().sum::<i64>())
                .expect("nonempty root system")
                .clone();
            let theta = to_wt(&top);
            let tt = form(&gram_weights, &theta, &theta);
            let cov: Vec<Q> = (0..l).map(|i| q(2 * top[i] as i128) * dbar[i] / tt).collect();
            if !linalg::is_integral(&cov) {
                return Err(Error::InvalidTable(format!("{t}: theta coroot not integral")));
            }
            (theta, cov.iter().map(|x| x.to_integer() as i64).collect())
        };
        let hdual = if affine {
            comarks.iter().sum()
        } else {
            1 + theta_covec.iter().sum::<i64>()
        };
        if affine {
            let tt = form(&gram_weights, &theta, &theta);
            if tt != q(2 * marks[0] as i128) {
                return Err(Error::InvalidTable(format!("{t}: (theta,theta) = {tt}")));
            }
        }

        let mut h = std::collections::hash_map::DefaultHasher::new();
        t.hash(&mut h);
        a.hash(&mut h);
        let fingerprint = h.finish();

        let mut datum = CartanDatum {
            lie_type: t,
            a,
            d,
            marks,
            comarks,
            hdual,
            gram_roots,
            gram_weights,
            theta,
            theta_covec,
            rhobar: vec![1; l],
            m_basis: None,
            npos: roots.len(),
            positive_roots: roots,
            positive_roots_wt: roots_wt,
            gram_num,
            gram_den,
            fingerprint,
        };
        if affine {
            datum.m_basis = Some(datum.compute_lattice_m());
        }
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.rhobar.len()
    }

    pub fn is_affine(&self) -> bool {
        self.lie_type.is_affine()
    }

    fn offset(&self) -> usize {
        usize::from(self.is_affine())
    }

    /// Finite Cartan matrix, indices `0..l` for nodes `1..=l`.
    pub fn abar(&self) -> Vec<Vec<i64>> {
        let o = self.offset();
        (o..self.a.len()).map(|i| self.a[i][o..].to_vec()).collect()
    }

    pub fn dbar(&self) -> &[Q] {
        &self.d[self.offset()..]
    }

    /// Marks of the finite nodes; for affine data only.
    pub fn finite_comarks(&self) -> &[i64] {
        if self.is_affine() {
            &self.comarks[1..]
        } else {
            &[]
        }
    }

    pub fn finite_marks(&self) -> &[i64] {
        if self.is_affine() {
            &self.marks[1..]
        } else {
            &[]
        }
    }

    pub fn check_len(&self, w: &[i64]) -> Result<()> {
        if w.len() != self.rank() {
            return Err(Error::MixedDatum(w.len(), self.rank()));
        }
        Ok(())
    }

    pub fn inner_product(&self, x: &[i64], y: &[i64]) -> Result<Q> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(Q::new(self.inner_scaled(x, y), self.gram_den))
    }

    /// `(x, y) * gram_den` as an integer.
    pub fn inner_scaled(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut s = 0i128;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            let row = &self.gram_num[i];
            let mut t = 0i128;
            for (j, yj) in y.iter().enumerate() {
                t += row[j] * *yj as i128;
            }
            s += *xi as i128 * t;
        }
        s
    }

    pub fn inner_q(&self, x: &[Q], y: &[Q]) -> Q {
        form(&self.gram_weights, x, y)
    }

    /// Level of a finite weight: `sum a_i^vee lambda_i`.
    pub fn level_of(&self, w: &[i64]) -> i64 {
        self.finite_comarks().iter().zip(w).map(|(a, x)| a * x).sum()
    }

    pub fn is_dominant_at_level(&self, w: &[i64], k: i64) -> bool {
        w.len() == self.rank() && w.iter().all(|x| *x >= 0) && self.level_of(w) <= k
    }

    /// Weight coordinates of a vector given in simple-root coordinates.
    pub fn root_to_weight(&self, c: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&linalg::to_q(&self.abar()), c)
    }

    pub fn weight_to_root(&self, w: &[Q]) -> Vec<Q> {
        let inv = linalg::inverse(&linalg::to_q(&self.abar())).expect("finite part nonsingular");
        linalg::mat_vec(&inv, w)
    }

    fn compute_lattice_m(&self) -> LatticeBasis {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::from([self.theta.clone()]);
        seen.insert(self.theta.clone());
        let abar = self.abar();
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                if w[i] != 0 {
                    let r: Weight = (0..w.len()).map(|j| w[j] - w[i] * abar[j][i]).collect();
                    if seen.insert(r.clone()) {
                        queue.push_back(r);
                    }
                }
            }
        }
        let mut gens: Vec<Weight> = seen.into_iter().collect();
        gens.sort();
        let gens: Vec<Vec<Q>> = gens.iter().map(|g| g.iter().map(|&x| q(x as i128)).collect()).collect();
        LatticeBasis::from_generators(&gens)
    }

    pub fn lattice_m(&self) -> Result<&LatticeBasis> {
        self.m_basis.as_ref().ok_or(Error::NotAffine)
    }

    /// The finite datum underlying an untwisted affine one.
    pub fn finite_type(&self) -> Option<LieType> {
        match self.lie_type.kind {
            Kind::Affine1 | Kind::Finite => LieType::finite(self.lie_type.family, self.lie_type.rank).ok(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let qs = |v: &[Q]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let qm = |m: &QMat| m.iter().map(|r| qs(r)).collect::<Vec<_>>();
        json!({
            "type": self.lie_type.to_string(),
            "A": self.a,
            "d": qs(&self.d),
            "marks": self.marks,
            "comarks": self.comarks,
            "hdual": self.hdual,
            "gram_roots": qm(&self.gram_roots),
            "gram_weights": qm(&self.gram_weights),
            "theta": self.theta,
            "theta_covec": self.theta_covec,
            "rhobar": self.rhobar,
            "M_basis": self.m_basis.as_ref().map(|m| qm(&m.basis)),
            "npos": self.npos,
        })
    }
}

pub fn form(g: &QMat, x: &[impl Into<QLike> + Copy], y: &[impl Into<QLike> + Copy]) -> Q {
    let mut s = Q::zero();
    for i in 0..x.len() {
        let xi: Q = x[i].into().0;
        if xi.is_zero() {
            continue;
        }
        for j in 0..y.len() {
            let yj: Q = y[j].into().0;
            s += xi * g[i][j] * yj;
        }
    }
    s
}

#[derive(Clone, Copy)]
pub struct QLike(pub Q);

impl From<i64> for QLike {
    fn from(x: i64) -> Self {
        QLike(q(x as i128))
    }
}

impl From<Q> for QLike {
    fn from(x: Q) -> Self {
        QLike(x)
    }
}

pub fn fmt_weight(w: &[i64]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parses `1,0,1`, `(1,0,1)` or `1 0 1`.
pub fn parse_weight(s: &str) -> Result<Weight> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Ok(vec![]);
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<i64>().map_err(|_| Error::Parse(format!("bad weight '{s}'"))))
        .collect()
}

/// All types with a given number of affine nodes, used to identify folded matrices.
pub fn affine_types_of_finite_rank(l: usize) -> Vec<LieType> {
    let mut out = vec![];
    for fam in [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ] {
        for rank in 1..=(2 * l + 2) {
            for kind in [Kind::Affine1, Kind::Affine2, Kind::Affine3] {
                if let Ok(t) = LieType::new(fam, rank, kind) {
                    if t.finite_rank() == l {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// Cached data keyed by type.
pub fn datum_cache() -> &'static std::sync::RwLock<HashMap<LieType, std::sync::Arc<CartanDatum>>> {
    static CACHE: std::sync::OnceLock<std::sync::RwLock<HashMap<LieType, std::sync::Arc<CartanDatum>>>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn cartan(t: LieType) -> Result<std::sync::Arc<CartanDatum>> {
    if let Some(d) = datum_cache().read().unwrap().get(&t) {
        return Ok(d.clone());
    }
    let d = std::sync::Arc::new(build_cartan(t)?);
    datum_cache().write().unwrap().entry(t).or_insert(d.clone());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> LieType {
        LieType::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(ty("A3^(2)").to_string(), "A3^(2)");
        assert_eq!(ty("d4(3)").to_string(), "D4^(3)");
        assert!(matches!(LieType::parse("A4^(2)"), Err(Error::UnsupportedType(_))));
        assert!(LieType::parse("E9").is_err());
        assert!(LieType::parse("B4^(3)").is_err());
    }

    #[test]
    fn a1_finite() {
        let d = build_cartan(ty("A1")).unwrap();
        assert_eq!(d.a, vec![vec![2]]);
        assert_eq!(d.d, vec![q(1)]);
        assert_eq!(d.npos, 1);
        assert_eq!(d.inner_product(&[1], &[1]).unwrap(), Q::new(1, 2));
        assert_eq!(d.inner_product(&[0], &[5]).unwrap(), q(0));
        assert!(matches!(d.inner_product(&[1], &[1, 0]), Err(Error::MixedDatum(..))));
    }

    #[test]
    fn a2_form() {
        let d = build_cartan(ty("A2")).unwrap();
        assert_eq!(d.inner_product(&[1, 0], &[0, 1]).unwrap(), Q::new(1, 3));
    }

    #[test]
    fn affine_marks() {
        let d = build_cartan(ty("A3^(1)")).unwrap();
        assert_eq!(d.marks, vec![1, 1, 1, 1]);
        assert_eq!(d.comarks, vec![1, 1, 1, 1]);
        assert_eq!(d.hdual, 4);
        let d = build_cartan(ty("A1^(1)")).unwrap();
        assert_eq!(d.hdual, 2);
        assert_eq!(d.a, vec![vec![2, -2], vec![-2, 2]]);
        let e6 = build_cartan(ty("E6^(1)")).unwrap();
        assert_eq!(e6.marks, vec![1, 1, 2, 3, 2, 1, 2]);
        assert_eq!(e6.hdual, 12);
        let e8 = build_cartan(ty("E8^(1)")).unwrap();
        assert_eq!(e8.marks, vec![1, 2, 4, 6, 5, 4, 3, 2, 3]);
        assert_eq!(build_cartan(ty("G2^(1)")).unwrap().marks, vec![1, 2, 3]);
        assert_eq!(build_cartan(ty("F4^(1)")).unwrap().marks, vec![1, 2, 3, 4, 2]);
    }

    #[test]
    fn twisted_tables() {
        let e = build_cartan(ty("E6^(2)")).unwrap();
        assert_eq!(e.marks, vec![1, 2, 3, 2, 1]);
        assert_eq!(e.comarks, vec![1, 2, 3, 4, 2]);
        assert_eq!(e.hdual, 12);
        let d = build_cartan(ty("D4^(3)")).unwrap();
        assert_eq!(d.marks, vec![1, 2, 1]);
        assert_eq!(d.comarks, vec![1, 2, 3]);
        assert_eq!(d.hdual, 6);
        let a = build_cartan(ty("A5^(2)")).unwrap();
        assert_eq!(a.marks, vec![1, 1, 2, 1]);
        assert_eq!(a.comarks, vec![1, 1, 2, 2]);
        assert_eq!(a.hdual, 6);
        let a3 = build_cartan(ty("A3^(2)")).unwrap();
        assert_eq!(a3.hdual, 4);
        let d3 = build_cartan(ty("D3^(2)")).unwrap();
        assert_eq!(d3.marks, vec![1, 1, 1]);
        assert_eq!(d3.comarks, vec![1, 2, 1]);
        assert_eq!(d3.hdual, 4);
    }

    #[test]
    fn lattice_examples() {
        let a1 = build_cartan(ty("A1^(1)")).unwrap();
        assert_eq!(a1.lattice_m().unwrap().basis, vec![vec![q(2)]]);
        let a2 = build_cartan(ty("A2^(1)")).unwrap();
        let m = a2.lattice_m().unwrap();
        assert_eq!(lattice_index(&LatticeBasis::standard(2), m).unwrap(), q(3));
        let fin = build_cartan(ty("A2")).unwrap();
        assert!(matches!(fin.lattice_m(), Err(Error::NotAffine)));
        let dual = dual_lattice(m, &a2);
        assert_eq!(lattice_index(&dual, &LatticeBasis::standard(2)).unwrap(), q(1));
        let a1d = dual_lattice(a1.lattice_m().unwrap(), &a1);
        assert_eq!(a1d.basis, vec![vec![q(1)]]);
        let z2 = LatticeBasis::standard(2);
        assert_eq!(lattice_index(&z2, &z2.scaled(2)).unwrap(), q(4));
        assert_eq!(lattice_index(&z2, &z2).unwrap(), q(1));
        assert!(matches!(lattice_index(&z2.scaled(2), &z2), Err(Error::NotSublattice)));
    }
    #[test]
    fn root_lengths() {
        let max_len = |d: &CartanDatum| {
            d.positive_roots_wt
                .iter()
                .map(|b| d.inner_product(b, b).unwrap())
                .max()
                .unwrap()
        };
        for s in ["A3", "B3", "C3", "G2", "F4", "E6", "A2^(1)", "C2^(1)", "G2^(1)"] {
            assert_eq!(max_len(&build_cartan(ty(s)).unwrap()), q(2), "{s}");
        }
        for (s, r) in [
            ("A3^(2)", 2),
            ("A5^(2)", 2),
            ("D4^(2)", 2),
            ("E6^(2)", 2),
            ("D4^(3)", 3),
        ] {
            let d = build_cartan(ty(s)).unwrap();
            assert_eq!(max_len(&d), q(2 * r), "{s}");
            assert_eq!(
                d.inner_product(&d.theta, &d.theta).unwrap(),
                q(2 * d.marks[0] as i128),
                "{s}"
            );
        }
    }
}
