//! Diagram automorphisms, orbit Cartan matrices and the maps between
//! `A`, its twisted partner `A†` and the adjacent algebra `A′`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cartan::{self, cartan, CartanDatum, Family, Kind, LeveledWeight, LieType, Weight};
use crate::error::{Error, Result};
use crate::linalg::{self, q, QMat, Q};
use crate::rep::dominant_level_weights;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    None,
    Diagram,
    Triality,
}

impl Twist {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "1" => Ok(Twist::None),
            "diagram" | "2" => Ok(Twist::Diagram),
            "triality" | "3" => Ok(Twist::Triality),
            _ => Err(Error::Parse(format!("bad twist '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Twist::None => "none",
            Twist::Diagram => "diagram",
            Twist::Triality => "triality",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiagramAutomorphism {
    pub base: Arc<CartanDatum>,
    pub perm: Vec<usize>,
    pub order: usize,
}

fn perm_order(perm: &[usize]) -> usize {
    let mut cur: Vec<usize> = perm.to_vec();
    let mut n = 1;
    while cur.iter().enumerate().any(|(i, p)| i != *p) {
        cur = cur.iter().map(|&i| perm[i]).collect();
        n += 1;
        if n > perm.len() + 1 {
            break;
        }
    }
    n
}

/// Validates that `perm` is a nontrivial symmetry of `a` fixing node 0.
pub fn validate_perm(a: &[Vec<i64>], perm: &[usize]) -> Result<usize> {
    let n = a.len();
    let set: BTreeSet<usize> = perm.iter().cloned().collect();
    if perm.len() != n || set.len() != n || set.iter().any(|&i| i >= n) {
        return Err(Error::InvalidAutomorphism("not a permutation of the nodes".into()));
    }
    if perm[0] != 0 {
        return Err(Error::InvalidAutomorphism("node 0 must be fixed".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if a[perm[i]][perm[j]] != a[i][j] {
                return Err(Error::InvalidAutomorphism("does not preserve the matrix".into()));
            }
        }
    }
    let order = perm_order(perm);
    if order != 2 && order != 3 {
        return Err(Error::InvalidAutomorphism(format!("order {order} not in {{2,3}}")));
    }
    Ok(order)
}

impl DiagramAutomorphism {
    pub fn new(base: Arc<CartanDatum>, perm: Vec<usize>) -> Result<Self> {
        if base.lie_type.kind != Kind::Affine1 {
            return Err(Error::InvalidAutomorphism("base must be untwisted affine".into()));
        }
        let order = validate_perm(&base.a, &perm)?;
        Ok(DiagramAutomorphism { base, perm, order })
    }

    /// Action on finite Dynkin labels: `(sigma* lambda)_{sigma(i)} = lambda_i`.
    pub fn act(&self, w: &[i64]) -> Weight {
        let mut out = vec![0; w.len()];
        for i in 1..self.perm.len() {
            out[self.perm[i] - 1] = w[i - 1];
        }
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = vec![];
        for i in 0..self.perm.len() {
            if seen[i] {
                continue;
            }
            let mut orb = vec![];
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                orb.push(j);
                j = self.perm[j];
            }
            out.push(orb);
        }
        out
    }
}

pub fn builtin_sigma(t: LieType, twist: Twist) -> Result<DiagramAutomorphism> {
    let none = || Error::NoBuiltinAutomorphism(format!("{t} with twist {}", twist.name()));
    if t.kind != Kind::Affine1 {
        return Err(none());
    }
    let l = t.rank;
    let mut perm: Vec<usize> = (0..=l).collect();
    match (t.family, twist) {
        (Family::A, Twist::Diagram) if l >= 3 && l % 2 == 1 => {
            let m = l + 1;
            for (i, p) in perm.iter_mut().enumerate() {
                *p = (m - i) % m;
            }
        }
        (Family::D, Twist::Diagram) if l >= 4 => perm.swap(l - 1, l),
        (Family::D, Twist::Triality) if l == 4 => {
            perm[1] = 3;
            perm[3] = 4;
            perm[4] = 1;
        }
        (Family::E, Twist::Diagram) if l == 6 => {
            perm.swap(1, 5);
            perm.swap(2, 4);
        }
        _ => return Err(none()),
    }
    DiagramAutomorphism::new(cartan(t)?, perm)
}

/// Orbit matrix together with its identification.
#[derive(Clone, Debug)]
pub struct OrbitCartan {
    pub datum: CartanDatum,
    pub orbits: Vec<Vec<usize>>,
    pub n: Vec<usize>,
    pub s: Vec<Q>,
    /// Orbit index to canonical node of the identified type.
    pub relabel: Vec<usize>,
}

/// Folds a matrix along a permutation and identifies the result.
pub fn fold_matrix(a: &[Vec<i64>], perm: &[usize]) -> Result<OrbitCartan> {
    fold_matrix_as(a, perm, None)
}

/// As [`fold_matrix`], trying `prefer` first when several types match.
pub fn fold_matrix_as(a: &[Vec<i64>], perm: &[usize], prefer: Option<LieType>) -> Result<OrbitCartan> {
    validate_perm(a, perm)?;
    let auto_orbits = {
        let mut seen = vec![false; perm.len()];
        let mut out = vec![];
        for i in 0..perm.len() {
            if !seen[i] {
                let mut orb = vec![];
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    orb.push(j);
                    j = perm[j];
                }
                out.push(orb);
            }
        }
        out
    };
    let m = auto_orbits.len();
    let n: Vec<usize> = auto_orbits.iter().map(|o| o.len()).collect();
    let mut s = vec![];
    for o in &auto_orbits {
        let i = o[0];
        let sum: i64 = o.iter().map(|&j| a[i][j]).sum();
        if sum == 0 {
            return Err(Error::UnrecognizedFoldedType("degenerate orbit".into()));
        }
        s.push(Q::new(a[i][i] as i128, sum as i128));
    }
    let mut ahat = vec![vec![0i64; m]; m];
    for (x, oi) in auto_orbits.iter().enumerate() {
        for (y, oj) in auto_orbits.iter().enumerate() {
            let sum: i64 = oj.iter().map(|&j| a[oi[0]][j]).sum();
            let v = s[y] * q(sum as i128);
            if !v.is_integer() {
                return Err(Error::UnrecognizedFoldedType("non-integral orbit matrix".into()));
            }
            ahat[x][y] = v.to_integer() as i64;
        }
    }
    let (t, relabel) = identify(&ahat, prefer)?;
    let datum = CartanDatum::from_matrix(t, ahat).map_err(|e| Error::UnrecognizedFoldedType(e.to_string()))?;
    Ok(OrbitCartan {
        datum,
        orbits: auto_orbits,
        n,
        s,
        relabel,
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = vec![];
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Finds an affine type and a node relabeling (fixing 0) matching `ahat`.
pub fn identify(ahat: &[Vec<i64>], prefer: Option<LieType>) -> Result<(LieType, Vec<usize>)> {
    let m = ahat.len();
    if m < 2 {
        return Err(Error::UnrecognizedFoldedType("rank 0".into()));
    }
    let rest: Vec<usize> = (1..m).collect();
    let mut candidates: Vec<LieType> = prefer.into_iter().collect();
    candidates.extend(cartan::affine_types_of_finite_rank(m - 1));
    for t in candidates {
        let c = cartan(t)?;
        for p in permutations(&rest) {
            let mut full = vec![0];
            full.extend(p);
            if (0..m).all(|i| (0..m).all(|j| ahat[i][j] == c.a[full[i]][full[j]])) {
                return Ok((t, full));
            }
        }
    }
    Err(Error::UnrecognizedFoldedType(format!("{ahat:?}")))
}

pub fn orbit_cartan(auto: &DiagramAutomorphism) -> Result<OrbitCartan> {
    fold_matrix(&auto.base.a, &auto.perm)
}

fn orbit_cartan_as(auto: &DiagramAutomorphism, prefer: LieType) -> Result<OrbitCartan> {
    fold_matrix_as(&auto.base.a, &auto.perm, Some(prefer))
}

#[derive(Clone, Debug)]
pub struct FoldingData {
    pub auto: DiagramAutomorphism,
    pub twist: Twist,
    pub orbit_cartan: OrbitCartan,
    pub twisted: Arc<CartanDatum>,
    pub adjacent: Arc<CartanDatum>,
    pub r: usize,
    pub n: Vec<usize>,
    pub s: Vec<Q>,
    /// `l x l′`, adjacent labels to symmetric labels of `A`.
    pub pstar: QMat,
    /// `l† x l′`, adjacent labels to twisted labels.
    pub phi: QMat,
    /// `l† x l`, restriction of labels of `A` to `A†`.
    pub iota_dual: QMat,
    /// Nodes of `A` in the image of each twisted coroot.
    pub iota_images: Vec<Vec<usize>>,
    /// Adjacent node `i` is sent by `phi` to twisted node `pi[i - 1]`.
    pub pi: Vec<usize>,
}

fn paired_types(t: LieType, twist: Twist) -> Result<(LieType, LieType)> {
    let none = || Error::NoBuiltinAutomorphism(format!("{t} with twist {}", twist.name()));
    match (t.family, twist) {
        (Family::A, Twist::Diagram) => {
            let n = t.rank.div_ceil(2);
            Ok((
                LieType::affine(Family::A, t.rank, 2)?,
                LieType::affine(Family::D, n + 1, 2)?,
            ))
        }
        (Family::D, Twist::Diagram) => {
            let n = t.rank - 1;
            Ok((
                LieType::affine(Family::D, t.rank, 2)?,
                LieType::affine(Family::A, 2 * n - 1, 2)?,
            ))
        }
        (Family::D, Twist::Triality) => {
            let d = LieType::affine(Family::D, 4, 3)?;
            Ok((d, d))
        }
        (Family::E, Twist::Diagram) => {
            let e = LieType::affine(Family::E, 6, 2)?;
            Ok((e, e))
        }
        _ => Err(none()),
    }
}

pub fn build_folding(t: LieType, twist: Twist) -> Result<FoldingData> {
    let auto = builtin_sigma(t, twist)?;
    let (tt, ta) = paired_types(t, twist)?;
    let oc = orbit_cartan_as(&auto, ta)?;
    if oc.datum.lie_type != ta {
        return Err(Error::UnrecognizedFoldedType(format!(
            "orbit matrix is {} but the adjacent type is {ta}",
            oc.datum.lie_type
        )));
    }
    let twisted = cartan(tt)?;
    let adjacent = cartan(ta)?;
    let l = auto.base.rank();
    let ld = twisted.rank();
    let la = adjacent.rank();
    let orbits = &oc.orbits;
    let orbit_of = |node: usize| orbits.iter().position(|o| o.contains(&node)).unwrap();

    let mut pstar = vec![vec![Q::zero(); la]; l];
    for i in 1..=l {
        let target = oc.relabel[orbit_of(i)];
        pstar[i - 1][target - 1] = Q::one();
    }

    let reversed = matches!(tt.family, Family::E) || tt.kind == Kind::Affine3;
    let pi: Vec<usize> = (1..=la).map(|i| if reversed { la + 1 - i } else { i }).collect();
    let mut scale = vec![vec![Q::zero(); la]; ld];
    for i in 1..=la {
        let p = pi[i - 1];
        scale[p - 1][i - 1] = Q::new(twisted.marks[p] as i128, twisted.comarks[p] as i128);
    }
    let adj_inv = linalg::inverse(&linalg::to_q(&adjacent.abar())).expect("nonsingular");
    let phi = linalg::mat_mul(&linalg::mat_mul(&linalg::to_q(&twisted.abar()), &scale), &adj_inv);

    let iota_images: Vec<Vec<usize>> = match (tt.family, tt.kind) {
        (Family::E, _) => vec![vec![1, 5], vec![2, 4], vec![3], vec![6]],
        (_, Kind::Affine3) => vec![vec![1, 3, 4], vec![2]],
        _ => (1..=ld).map(|i| orbits[orbit_of(i)].clone()).collect(),
    };
    let mut iota_dual = vec![vec![Q::zero(); l]; ld];
    for (i, img) in iota_images.iter().enumerate() {
        for &j in img {
            iota_dual[i][j - 1] = Q::one();
        }
    }
    Ok(FoldingData {
        r: tt.kind.order(),
        n: oc.n.clone(),
        s: oc.s.clone(),
        auto,
        twist,
        orbit_cartan: oc,
        twisted,
        adjacent,
        pstar,
        phi,
        iota_dual,
        iota_images,
        pi,
    })
}

fn apply(m: &QMat, w: &[i64]) -> Vec<Q> {
    linalg::mat_vec(m, &w.iter().map(|&x| q(x as i128)).collect::<Vec<_>>())
}

fn to_int(v: &[Q]) -> Weight {
    v.iter().map(|x| x.to_integer() as i64).collect()
}

impl FoldingData {
    pub fn p(&self) -> usize {
        self.auto.order
    }

    pub fn pstar_apply(&self, w: &[i64]) -> Weight {
        to_int(&apply(&self.pstar, w))
    }

    pub fn phi_apply(&self, w: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.phi, w)
    }

    pub fn restriction_matrix(&self) -> Vec<Vec<i64>> {
        self.iota_dual.iter().map(|r| to_int(r)).collect()
    }

    pub fn is_symmetric(&self, w: &[i64]) -> bool {
        self.auto.act(w) == w
    }

    /// The matrix of `nu ∘ iota ∘ nu†^{-1}` on Dynkin labels.
    pub fn nu_iota_nu_inv(&self) -> QMat {
        let t = &self.twisted;
        let base = &self.auto.base;
        let ld = t.rank();
        let l = base.rank();
        let dbase = base.dbar();
        // twisted root i -> root coordinates of A
        let mut m = vec![vec![Q::zero(); ld]; l];
        for (i, img) in self.iota_images.iter().enumerate() {
            let f = Q::new(t.comarks[i + 1] as i128, t.marks[i + 1] as i128);
            for &j in img {
                m[j - 1][i] += f / dbase[j - 1];
            }
        }
        let tinv = linalg::inverse(&linalg::to_q(&t.abar())).expect("nonsingular");
        linalg::mat_mul(&linalg::mat_mul(&linalg::to_q(&base.abar()), &m), &tinv)
    }

    pub fn pstar_phi_inv(&self) -> QMat {
        let inv = linalg::inverse(&self.phi).expect("phi invertible");
        linalg::mat_mul(&self.pstar, &inv)
    }

    /// Orbit matrix equals the adjacent matrix after relabeling.
    pub fn orbit_matches_adjacent(&self) -> bool {
        let oc = &self.orbit_cartan;
        let a = &self.adjacent.a;
        let m = oc.relabel.len();
        (0..m).all(|i| (0..m).all(|j| oc.datum.a[i][j] == a[oc.relabel[i]][oc.relabel[j]]))
    }

    pub fn to_json(&self) -> Value {
        let qm = |m: &QMat| {
            m.iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        json!({
            "schema": 1,
            "base": self.auto.base.lie_type.to_string(),
            "perm": self.auto.perm,
            "order": self.auto.order,
            "twist": self.twist.name(),
            "orbits": self.orbit_cartan.orbits,
            "orbit_cartan": self.orbit_cartan.datum.a,
            "orbit_type": self.orbit_cartan.datum.lie_type.to_string(),
            "relabel": self.orbit_cartan.relabel,
            "twisted": self.twisted.to_json(),
            "adjacent": self.adjacent.to_json(),
            "r": self.r,
            "N": self.n,
            "s": self.s.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "Pstar": qm(&self.pstar),
            "phi": qm(&self.phi),
            "iota_dual": qm(&self.iota_dual),
        })
    }
}

/// Symmetric level-`k` weights of `A`, in the order induced from `A′`.
pub fn symmetric_weights(f: &FoldingData, k: i64) -> Vec<LeveledWeight> {
    dominant_level_weights(&f.adjacent, k)
        .into_iter()
        .map(|w| LeveledWeight {
            level: k,
            finite: f.pstar_apply(&w.finite),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> LieType {
        LieType::parse(s).unwrap()
    }

    #[test]
    fn builtin_perms() {
        let a = builtin_sigma(ty("A3^(1)"), Twist::Diagram).unwrap();
        assert_eq!(a.perm, vec![0, 3, 2, 1]);
        assert_eq!(a.order, 2);
        let d = builtin_sigma(ty("D4^(1)"), Twist::Triality).unwrap();
        assert_eq!(d.perm, vec![0, 3, 2, 4, 1]);
        assert_eq!(d.order, 3);
        let e = builtin_sigma(ty("E6^(1)"), Twist::Diagram).unwrap();
        assert_eq!(e.perm, vec![0, 5, 4, 3, 2, 1, 6]);
        assert!(matches!(
            builtin_sigma(ty("B3^(1)"), Twist::Diagram),
            Err(Error::NoBuiltinAutomorphism(_))
        ));
        let base = cartan(ty("A3^(1)")).unwrap();
        assert!(DiagramAutomorphism::new(base, vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn folded_types() {
        for (s, tw, twisted, adj, r) in [
            ("A3^(1)", Twist::Diagram, "A3^(2)", "D3^(2)", 2),
            ("A5^(1)", Twist::Diagram, "A5^(2)", "D4^(2)", 2),
            ("D4^(1)", Twist::Diagram, "D4^(2)", "A5^(2)", 2),
            ("D5^(1)", Twist::Diagram, "D5^(2)", "A7^(2)", 2),
            ("D4^(1)", Twist::Triality, "D4^(3)", "D4^(3)", 3),
            ("E6^(1)", Twist::Diagram, "E6^(2)", "E6^(2)", 2),
        ] {
            let f = build_folding(ty(s), tw).unwrap();
            assert_eq!(f.twisted.lie_type.to_string(), twisted);
            assert_eq!(f.adjacent.lie_type.to_string(), adj);
            assert_eq!(f.r, r);
            assert!(f.orbit_matches_adjacent());
            assert_eq!(f.twisted.hdual, f.auto.base.hdual);
            assert_eq!(f.adjacent.hdual, f.auto.base.hdual);
        }
    }

    #[test]
    fn corrupted_table_is_unrecognized() {
        let mut a = cartan(ty("A3^(1)")).unwrap().a.clone();
        a[0][1] = -2;
        a[0][3] = -2;
        assert!(matches!(
            fold_matrix(&a, &[0, 3, 2, 1]),
            Err(Error::UnrecognizedFoldedType(_))
        ));
    }

    #[test]
    fn identities_exact() {
        for (s, tw) in [
            ("A3^(1)", Twist::Diagram),
            ("A5^(1)", Twist::Diagram),
            ("D4^(1)", Twist::Diagram),
            ("D4^(1)", Twist::Triality),
            ("E6^(1)", Twist::Diagram),
        ] {
            let f = build_folding(ty(s), tw).unwrap();
            assert_eq!(f.pstar_apply(&f.adjacent.rhobar), f.auto.base.rhobar, "{s}");
            let gp = linalg::mat_mul(
                &linalg::mat_mul(&linalg::transpose(&f.pstar), &f.auto.base.gram_weights),
                &f.pstar,
            );
            assert_eq!(gp, f.adjacent.gram_weights, "{s} pstar isometry");
            assert_eq!(f.nu_iota_nu_inv(), f.pstar_phi_inv(), "{s} nu iota");
            let gphi = linalg::mat_mul(
                &linalg::mat_mul(&linalg::transpose(&f.phi), &f.twisted.gram_weights),
                &f.phi,
            );
            let scaled: QMat = f
                .adjacent
                .gram_weights
                .iter()
                .map(|r| r.iter().map(|x| x / q(f.r as i128)).collect())
                .collect();
            assert_eq!(gphi, scaled, "{s} phi scaling");
        }
    }

    #[test]
    fn symmetric_sets() {
        let f = build_folding(ty("A3^(1)"), Twist::Diagram).unwrap();
        let s: Vec<Weight> = symmetric_weights(&f, 1).into_iter().map(|w| w.finite).collect();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&vec![0, 0, 0]) && s.contains(&vec![0, 1, 0]));
        assert_eq!(symmetric_weights(&f, 0).len(), 1);
    }
}
