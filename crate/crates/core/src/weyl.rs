//! Finite Weyl groups, dominant reduction and alcove folding.

use std::collections::{HashMap, VecDeque};

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_RANK: usize = 6;
pub const DEFAULT_ELEMENT_CAP: usize = 100_000;
const FOLD_CAP: u64 = 10_000_000;

/// `r_i`, node `i` in `1..=l`.
pub fn simple_reflect(datum: &CartanDatum, i: usize, w: &[i64]) -> Result<Weight> {
    datum.check_len(w)?;
    if i == 0 || i > datum.rank() {
        return Err(Error::IndexOutOfRange(i));
    }
    let mut out = w.to_vec();
    reflect_in_place(&datum.abar(), i - 1, &mut out);
    Ok(out)
}

#[inline]
fn reflect_in_place(abar: &[Vec<i64>], i: usize, w: &mut [i64]) {
    let c = w[i];
    if c != 0 {
        for (j, x) in w.iter_mut().enumerate() {
            *x -= c * abar[j][i];
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub rank: usize,
    /// Row-major `l x l` integer matrices acting on Dynkin labels.
    pub elements: Vec<Vec<i64>>,
    pub signs: Vec<i8>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn apply(&self, idx: usize, w: &[i64]) -> Weight {
        let l = self.rank;
        let m = &self.elements[idx];
        (0..l).map(|i| (0..l).map(|j| m[i * l + j] * w[j]).sum()).collect()
    }
}

pub fn generate_weyl(datum: &CartanDatum) -> Result<WeylGroup> {
    generate_weyl_with(datum, DEFAULT_MAX_RANK, DEFAULT_ELEMENT_CAP)
}

pub fn generate_weyl_with(datum: &CartanDatum, max_rank: usize, cap: usize) -> Result<WeylGroup> {
    let l = datum.rank();
    if l > max_rank {
        return Err(Error::RankTooLarge { rank: l, max: max_rank });
    }
    let abar = datum.abar();
    let mut id = vec![0i64; l * l];
    for i in 0..l {
        id[i * l + i] = 1;
    }
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut elements = vec![id.clone()];
    let mut signs = vec![1i8];
    index.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for g in 0..l {
            // r_g * E: reflect each column of E
            let mut m = elements[e].clone();
            for col in 0..l {
                let c = m[g * l + col];
                if c != 0 {
                    for row in 0..l {
                        m[row * l + col] -= c * abar[row][g];
                    }
                }
            }
            if !index.contains_key(&m) {
                if elements.len() >= cap {
                    return Err(Error::WeylCapExceeded(cap));
                }
                index.insert(m.clone(), elements.len());
                signs.push(-signs[e]);
                elements.push(m);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    Ok(WeylGroup {
        rank: l,
        elements,
        signs,
    })
}

/// Dominant representative and sign; sign 0 when the orbit meets a wall.
pub fn to_dominant(datum: &CartanDatum, w: &[i64]) -> (Weight, i8) {
    to_dominant_with(&datum.abar(), w)
}

pub fn to_dominant_with(abar: &[Vec<i64>], w: &[i64]) -> (Weight, i8) {
    let mut x = w.to_vec();
    let mut sign = 1i8;
    while let Some(i) = x.iter().position(|c| *c < 0) {
        reflect_in_place(abar, i, &mut x);
        sign = -sign;
    }
    if x.contains(&0) {
        sign = 0;
    }
    (x, sign)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldResult {
    pub sign: i8,
    pub rep: Option<Weight>,
    pub reflections_used: u64,
}

/// Folds a rho-shifted weight into the open level-`k + h^vee` alcove.
pub fn alcove_fold(datum: &CartanDatum, k: i64, x: &[i64]) -> Result<FoldResult> {
    if !datum.is_affine() {
        return Err(Error::NotAffine);
    }
    datum.check_len(x)?;
    let t = k + datum.hdual;
    let n = datum.a.len();
    let mut labels = Vec::with_capacity(n);
    labels.push(t - datum.level_of(x));
    labels.extend_from_slice(x);
    let mut used = 0u64;
    loop {
        let (i, min) = labels.iter().enumerate().fold(
            (0, i64::MAX),
            |(bi, bm), (i, &v)| if v < bm { (i, v) } else { (bi, bm) },
        );
        if min >= 0 {
            break;
        }
        for (j, lab) in labels.iter_mut().enumerate() {
            *lab -= min * datum.a[j][i];
        }
        used += 1;
        if used > FOLD_CAP {
            return Err(Error::NonTermination(used));
        }
    }
    if labels.contains(&0) {
        return Ok(FoldResult {
            sign: 0,
            rep: None,
            reflections_used: used,
        });
    }
    let sign = if used.is_multiple_of(2) { 1 } else { -1 };
    Ok(FoldResult {
        sign,
        rep: Some(labels[1..].to_vec()),
        reflections_used: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, LieType};

    fn datum(s: &str) -> CartanDatum {
        build_cartan(LieType::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn reflections() {
        let a1 = datum("A1");
        assert_eq!(simple_reflect(&a1, 1, &[1]).unwrap(), vec![-1]);
        assert_eq!(simple_reflect(&a1, 1, &[0]).unwrap(), vec![0]);
        assert!(matches!(simple_reflect(&a1, 2, &[0]), Err(Error::IndexOutOfRange(2))));
        let a2 = datum("A2");
        assert_eq!(simple_reflect(&a2, 1, &[1, 0]).unwrap(), vec![-1, 1]);
    }

    #[test]
    fn group_orders() {
        for (s, n) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 24),
            ("B2", 8),
            ("C3", 48),
            ("G2", 12),
            ("D4", 192),
            ("F4", 1152),
        ] {
            assert_eq!(generate_weyl(&datum(s)).unwrap().order(), n, "{s}");
        }
        assert!(matches!(generate_weyl(&datum("A7")), Err(Error::RankTooLarge { .. })));
        assert!(matches!(
            generate_weyl_with(&datum("A3"), 6, 10),
            Err(Error::WeylCapExceeded(10))
        ));
    }

    #[test]
    fn dominant() {
        let a1 = datum("A1");
        assert_eq!(to_dominant(&a1, &[-3]), (vec![3], -1));
        let a2 = datum("A2");
        assert_eq!(to_dominant(&a2, &[2, 1]), (vec![2, 1], 1));
        assert_eq!(to_dominant(&a2, &[0, -1]).1, 0);
    }

    #[test]
    fn fold_examples() {
        let a = datum("A1^(1)");
        assert_eq!(alcove_fold(&a, 1, &[3]).unwrap().sign, 0);
        let r = alcove_fold(&a, 1, &[1]).unwrap();
        assert_eq!((r.sign, r.rep, r.reflections_used), (1, Some(vec![1]), 0));
        let r = alcove_fold(&a, 1, &[4]).unwrap();
        assert_eq!((r.sign, r.rep), (-1, Some(vec![2])));
        assert!(matches!(alcove_fold(&datum("A1"), 1, &[1]), Err(Error::NotAffine)));
    }
}
