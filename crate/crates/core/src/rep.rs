//! Weight multiplicities, dimensions, tensor products and branching.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::cartan::{fmt_weight, CartanDatum, LeveledWeight, Weight};
use crate::error::{Error, Result};
use crate::linalg::{self, Q};
use crate::weyl::to_dominant_with;

pub const DEFAULT_DIM_CAP: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct WeightSystem {
    pub highest: Weight,
    /// Multiplicities of dominant weights.
    pub dominant: BTreeMap<Weight, u64>,
    /// Multiplicities of every weight.
    pub mults: BTreeMap<Weight, u64>,
}

impl WeightSystem {
    pub fn total(&self) -> u128 {
        self.mults.values().map(|m| *m as u128).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompTable {
    pub entries: BTreeMap<Weight, u64>,
}

/// Level-`k` dominant weights in lexicographic order.
pub fn dominant_level_weights(datum: &CartanDatum, k: i64) -> Vec<LeveledWeight> {
    let l = datum.rank();
    let comarks = datum.finite_comarks().to_vec();
    let mut out = vec![];
    let mut cur = vec![0i64; l];
    fn rec(i: usize, budget: i64, cur: &mut Vec<i64>, comarks: &[i64], k: i64, out: &mut Vec<LeveledWeight>) {
        if i == cur.len() {
            out.push(LeveledWeight {
                level: k,
                finite: cur.clone(),
            });
            return;
        }
        let mut v = 0;
        while v * comarks[i] <= budget {
            cur[i] = v;
            rec(i + 1, budget - v * comarks[i], cur, comarks, k, out);
            v += 1;
        }
        cur[i] = 0;
    }
    if k >= 0 && comarks.len() == l {
        rec(0, k, &mut cur, &comarks, k, &mut out);
    }
    out
}

/// Weyl dimension formula.
pub fn dim(datum: &CartanDatum, lambda: &[i64]) -> u128 {
    let d = datum.dbar();
    let mut num = Ratio::<i128>::one();
    for c in &datum.positive_roots {
        let mut a = Q::zero();
        let mut b = Q::zero();
        for i in 0..c.len() {
            if c[i] != 0 {
                let f = d[i] * linalg::q(c[i] as i128);
                a += f * linalg::q((lambda[i] + 1) as i128);
                b += f;
            }
        }
        num = num * a / b;
    }
    debug_assert!(num.is_integer());
    num.to_integer() as u128
}

fn orbit(abar: &[Vec<i64>], w: &[i64]) -> Vec<Weight> {
    let mut seen: HashSet<Weight> = HashSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    let mut out = vec![];
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len() {
            if x[i] != 0 {
                let c = x[i];
                let y: Weight = (0..x.len()).map(|j| x[j] - c * abar[j][i]).collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        out.push(x);
    }
    out
}

/// Freudenthal's formula over dominant weights.
pub fn freudenthal(datum: &CartanDatum, lambda: &[i64], cap: u128) -> Result<WeightSystem> {
    datum.check_len(lambda)?;
    if lambda.iter().any(|x| *x < 0) {
        return Err(Error::NotDominant(fmt_weight(lambda), -1));
    }
    let dm = dim(datum, lambda);
    if dm > cap {
        return Err(Error::DimensionCap { dim: dm, cap });
    }
    let abar = datum.abar();
    let roots = &datum.positive_roots_wt;
    let heights: Vec<i64> = datum.positive_roots.iter().map(|c| c.iter().sum()).collect();

    // dominant weights below lambda, with depth
    let mut depth: HashMap<Weight, i64> = HashMap::from([(lambda.to_vec(), 0)]);
    let mut queue = VecDeque::from([lambda.to_vec()]);
    while let Some(mu) = queue.pop_front() {
        let dmu = depth[&mu];
        for (r, h) in roots.iter().zip(&heights) {
            let nu: Weight = mu.iter().zip(r).map(|(a, b)| a - b).collect();
            if nu.iter().all(|x| *x >= 0) && !depth.contains_key(&nu) {
                depth.insert(nu.clone(), dmu + h);
                queue.push_back(nu);
            }
        }
    }
    let mut order: Vec<Weight> = depth.keys().cloned().collect();
    order.sort_by(|a, b| depth[a].cmp(&depth[b]).then(b.cmp(a)));

    let shift = |w: &[i64]| -> Weight { w.iter().map(|x| x + 1).collect() };
    let lr = shift(lambda);
    let norm_top = datum.inner_scaled(&lr, &lr);
    let mut mult: HashMap<Weight, u64> = HashMap::new();
    mult.insert(lambda.to_vec(), 1);
    for mu in order.iter().skip(1) {
        let mr = shift(mu);
        let den = norm_top - datum.inner_scaled(&mr, &mr);
        let mut num: i128 = 0;
        for r in roots {
            let mut nu: Weight = mu.clone();
            loop {
                for (x, y) in nu.iter_mut().zip(r) {
                    *x += y;
                }
                let (rep, _) = to_dominant_with(&abar, &nu);
                let Some(m) = mult.get(&rep) else {
                    if depth.contains_key(&rep) {
                        unreachable!("processed in depth order");
                    }
                    break;
                };
                num += 2 * (*m as i128) * datum.inner_scaled(&nu, r);
            }
        }
        if den <= 0 || num % den != 0 {
            return Err(Error::InvalidTable(format!(
                "freudenthal: non-integral multiplicity at {}",
                fmt_weight(mu)
            )));
        }
        let m = num / den;
        if m > 0 {
            mult.insert(mu.clone(), m as u64);
        } else {
            // weights with zero multiplicity do not continue strings
            mult.insert(mu.clone(), 0);
        }
    }
    let dominant: BTreeMap<Weight, u64> = mult.into_iter().filter(|(_, m)| *m > 0).collect();
    let mut mults = BTreeMap::new();
    for (w, m) in &dominant {
        for x in orbit(&abar, w) {
            mults.insert(x, *m);
        }
    }
    Ok(WeightSystem {
        highest: lambda.to_vec(),
        dominant,
        mults,
    })
}

/// Write-once cache of weight systems keyed by datum and highest weight.
#[derive(Default)]
pub struct WeightCache {
    map: RwLock<HashMap<(u64, Weight), Arc<WeightSystem>>>,
    pub cap: u128,
}

impl WeightCache {
    pub fn new(cap: u128) -> Self {
        WeightCache {
            map: RwLock::new(HashMap::new()),
            cap,
        }
    }

    pub fn get(&self, datum: &CartanDatum, lambda: &[i64]) -> Result<Arc<WeightSystem>> {
        let key = (datum.fingerprint, lambda.to_vec());
        if let Some(ws) = self.map.read().unwrap().get(&key) {
            return Ok(ws.clone());
        }
        let cap = if self.cap == 0 { DEFAULT_DIM_CAP } else { self.cap };
        let ws = Arc::new(freudenthal(datum, lambda, cap)?);
        let mut w = self.map.write().unwrap();
        Ok(w.entry(key).or_insert(ws).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Klimyk's formula.
pub fn tensor_decompose(datum: &CartanDatum, lambda: &[i64], mu: &[i64], cache: &WeightCache) -> Result<DecompTable> {
    datum.check_len(lambda)?;
    datum.check_len(mu)?;
    let (big, small) = if dim(datum, lambda) >= dim(datum, mu) {
        (lambda, mu)
    } else {
        (mu, lambda)
    };
    let ws = cache.get(datum, small)?;
    let abar = datum.abar();
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (tau, m) in &ws.mults {
        let x: Weight = (0..big.len()).map(|i| big[i] + tau[i] + 1).collect();
        let (rep, sign) = to_dominant_with(&abar, &x);
        if sign == 0 {
            continue;
        }
        let key: Weight = rep.iter().map(|v| v - 1).collect();
        *acc.entry(key).or_insert(0) += sign as i64 * *m as i64;
    }
    let mut entries = BTreeMap::new();
    for (w, m) in acc {
        if m < 0 {
            return Err(Error::NegativeMultiplicity(fmt_weight(&w)));
        }
        if m > 0 {
            entries.insert(w, m as u64);
        }
    }
    Ok(DecompTable { entries })
}

/// Restrict to a subalgebra through an integer matrix on Dynkin labels, then peel.
pub fn branch(
    ambient: &CartanDatum,
    sub: &CartanDatum,
    restriction: &[Vec<i64>],
    lambda: &[i64],
    cache: &WeightCache,
) -> Result<DecompTable> {
    ambient.check_len(lambda)?;
    let ws = cache.get(ambient, lambda)?;
    let ls = sub.rank();
    let mut rem: HashMap<Weight, i64> = HashMap::new();
    for (w, m) in &ws.mults {
        let r: Weight = (0..ls)
            .map(|i| restriction[i].iter().zip(w).map(|(a, b)| a * b).sum())
            .collect();
        if r.iter().all(|x| *x >= 0) {
            *rem.entry(r).or_insert(0) += *m as i64;
        }
    }
    let inv = linalg::inverse(&linalg::to_q(&sub.abar())).expect("finite part nonsingular");
    let height = |w: &[i64]| -> Q {
        let mut s = Q::zero();
        for row in &inv {
            for (a, b) in row.iter().zip(w) {
                s += a * linalg::q(*b as i128);
            }
        }
        s
    };
    let mut entries = BTreeMap::new();
    loop {
        let top = rem
            .iter()
            .filter(|(_, m)| **m != 0)
            .map(|(w, _)| (height(w), w.clone()))
            .max();
        let Some((_, nu)) = top else { break };
        let c = rem[&nu];
        if c < 0 {
            return Err(Error::NegativeMultiplicity(fmt_weight(&nu)));
        }
        entries.insert(nu.clone(), c as u64);
        let sws = cache.get(sub, &nu)?;
        for (w, m) in &sws.dominant {
            let e = rem.entry(w.clone()).or_insert(0);
            *e -= c * *m as i64;
            if *e < 0 {
                return Err(Error::NegativeMultiplicity(fmt_weight(w)));
            }
        }
    }
    Ok(DecompTable { entries })
}

pub fn dim_f64(datum: &CartanDatum, lambda: &[i64]) -> f64 {
    dim(datum, lambda).to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, LieType};

    fn datum(s: &str) -> CartanDatum {
        build_cartan(LieType::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn level_weights() {
        let a1 = datum("A1^(1)");
        let w: Vec<Weight> = dominant_level_weights(&a1, 1).into_iter().map(|x| x.finite).collect();
        assert_eq!(w, vec![vec![0], vec![1]]);
        assert_eq!(dominant_level_weights(&datum("E6^(1)"), 0).len(), 1);
        assert_eq!(dominant_level_weights(&datum("A3^(1)"), 1).len(), 4);
    }

    #[test]
    fn dims() {
        let a1 = datum("A1");
        for k in 0..6 {
            assert_eq!(dim(&a1, &[k]), k as u128 + 1);
        }
        assert_eq!(dim(&datum("A3"), &[0, 1, 0]), 6);
        assert_eq!(dim(&datum("E6"), &[1, 0, 0, 0, 0, 0]), 27);
        assert_eq!(dim(&datum("G2"), &[0, 1]), 7);
        assert_eq!(dim(&datum("G2"), &[1, 0]), 14);
        assert_eq!(dim(&datum("F4"), &[0, 0, 0, 1]), 26);
    }

    #[test]
    fn freudenthal_examples() {
        let ws = freudenthal(&datum("A1"), &[2], DEFAULT_DIM_CAP).unwrap();
        assert_eq!(ws.mults.len(), 3);
        assert!(ws.mults.values().all(|m| *m == 1));
        let ws = freudenthal(&datum("A2"), &[1, 1], DEFAULT_DIM_CAP).unwrap();
        assert_eq!(ws.total(), 8);
        assert_eq!(ws.mults[&vec![0, 0]], 2);
        let ws = freudenthal(&datum("A2"), &[0, 0], DEFAULT_DIM_CAP).unwrap();
        assert_eq!(ws.total(), 1);
        assert!(matches!(
            freudenthal(&datum("A2"), &[9, 9], 10),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let c = WeightCache::new(DEFAULT_DIM_CAP);
        let t = tensor_decompose(&datum("A1"), &[1], &[1], &c).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(vec![0], 1), (vec![2], 1)]));
        let a3 = datum("A3");
        let t = tensor_decompose(&a3, &[1, 0, 0], &[1, 0, 0], &c).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(vec![2, 0, 0], 1), (vec![0, 1, 0], 1)]));
        let t = tensor_decompose(&a3, &[1, 2, 0], &[0, 0, 0], &c).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(vec![1, 2, 0], 1)]));
    }
}
