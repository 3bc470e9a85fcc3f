use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use twistfuse::cartan::{cartan, CartanDatum, LieType, Weight};
use twistfuse::fold::{build_folding, Twist};
use twistfuse::fusion::{kac_walton, twisted_kac_walton, verlinde, FusionEngine, Pattern, DEFAULT_INTEGER_TOLERANCE};
use twistfuse::rep::{branch, dominant_level_weights, freudenthal, tensor_decompose, WeightCache, DEFAULT_DIM_CAP};
use twistfuse::smatrix::{anomaly, twisted_a, untwisted_s, SOptions};
use twistfuse::weyl::alcove_fold;

type Q = Ratio<i128>;

const UNTWISTED_GRID: [&str; 7] = ["A1", "A2", "A3", "B2", "C2", "G2", "D4"];
const FOLDINGS: [(&str, Twist); 4] = [
    ("A3", Twist::Diagram),
    ("D4", Twist::Diagram),
    ("D4", Twist::Triality),
    ("E6", Twist::Diagram),
];

fn ty(s: &str) -> LieType {
    LieType::parse(s).unwrap()
}

fn aff(s: &str) -> LieType {
    let t = ty(s);
    LieType::affine(t.family, t.rank, 1).unwrap()
}

fn weights(d: &CartanDatum, k: i64) -> Vec<Weight> {
    dominant_level_weights(d, k).into_iter().map(|w| w.finite).collect()
}

/// Prints one line outside the test harness capture and returns the verdict.
fn report(n: u32, name: &str, ok: bool, detail: &str, elapsed: Duration, budget: Duration) -> bool {
    let in_time = elapsed <= budget;
    let pass = ok && in_time;
    let line = format!(
        "criterion {n:>2} {} {name}: {detail} [{:.2}s / {:.0}s budget]\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    let _ = std::io::stdout().write_all(line.as_bytes());
    pass
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let r = f();
    (r, t0.elapsed())
}

#[test]
fn criterion_01_a1_closed_form() {
    let (worst, el) = timed(|| {
        let d = cartan(aff("A1")).unwrap();
        let mut worst = 0.0f64;
        for k in 1..=3 {
            let s = untwisted_s(&d, k, &SOptions::default()).unwrap();
            let t = (k + 2) as f64;
            for a in 0..=k {
                for b in 0..=k {
                    let want = (2.0 / t).sqrt() * (PI * ((a + 1) * (b + 1)) as f64 / t).sin();
                    let z = s.entries[s.row_of(&[a]).unwrap()][s.col_of(&[b]).unwrap()];
                    worst = worst.max((z.re - want).abs()).max(z.im.abs());
                }
            }
        }
        worst
    });
    let detail = format!("max |S - oracle| = {worst:.3e}");
    assert!(report(
        1,
        "A1 closed form",
        worst < 1e-10,
        &detail,
        el,
        Duration::from_secs(1)
    ));
}

#[test]
fn criterion_02_symmetric_unitary() {
    let (worst, el) = timed(|| {
        let mut worst = 0.0f64;
        for t in UNTWISTED_GRID {
            let d = cartan(aff(t)).unwrap();
            for k in 0..=3 {
                let s = untwisted_s(&d, k, &SOptions::default()).unwrap();
                let n = s.n_rows();
                for i in 0..n {
                    for j in 0..n {
                        worst = worst.max((s.entries[i][j] - s.entries[j][i]).norm());
                        let mut z = num_complex::Complex64::new(0.0, 0.0);
                        for c in 0..n {
                            z += s.entries[i][c] * s.entries[j][c].conj();
                        }
                        let id = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((z - id).norm());
                    }
                }
            }
        }
        worst
    });
    let detail = format!("max residual = {worst:.3e}");
    assert!(report(
        2,
        "S symmetric and unitary",
        worst < 1e-9,
        &detail,
        el,
        Duration::from_secs(30)
    ));
}

/// su(2)_k fusion by the truncated Clebsch-Gordan rule.
fn su2_fusion(k: i64, a: i64, b: i64, c: i64) -> i64 {
    let ok = (a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0;
    i64::from(ok)
}

#[test]
fn criterion_03_verlinde_equals_kac_walton() {
    let ((mismatch, n), el) = timed(|| {
        let mut mismatch = vec![];
        let mut n = 0usize;
        let cache = WeightCache::new(DEFAULT_DIM_CAP);
        for t in UNTWISTED_GRID {
            let d = cartan(aff(t)).unwrap();
            for k in 0..=3 {
                let s = untwisted_s(&d, k, &SOptions::default()).unwrap();
                let ws = weights(&d, k);
                for a in &ws {
                    for b in &ws {
                        for c in &ws {
                            let v = verlinde(&s, a, b, c, DEFAULT_INTEGER_TOLERANCE).unwrap();
                            let kw = kac_walton(&d, k, a, b, c, &cache).unwrap();
                            let closed = if t == "A1" { su2_fusion(k, a[0], b[0], c[0]) } else { kw };
                            if v != kw || kw != closed {
                                mismatch.push(format!("{t} k={k} {a:?} {b:?} {c:?}: {v} {kw} {closed}"));
                            }
                            n += 1;
                        }
                    }
                }
            }
        }
        (mismatch, n)
    });
    let detail = format!(
        "{n} triples, {} mismatches {:?}",
        mismatch.len(),
        mismatch.iter().take(3).collect::<Vec<_>>()
    );
    assert!(report(
        3,
        "Verlinde = Kac-Walton",
        mismatch.is_empty(),
        &detail,
        el,
        Duration::from_secs(60)
    ));
}

#[test]
fn criterion_04_twisted_a_unitary() {
    let ((worst, square), el) = timed(|| {
        let mut worst = 0.0f64;
        let mut square = true;
        for (t, tw, kmax) in [
            ("A3", Twist::Diagram, 2),
            ("D4", Twist::Triality, 2),
            ("E6", Twist::Diagram, 1),
        ] {
            let f = build_folding(aff(t), tw).unwrap();
            for k in 0..=kmax {
                let a = twisted_a(&f, k, &SOptions::default()).unwrap();
                let n = a.n_rows();
                square &= a.n_cols() == n;
                if a.n_cols() != n {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let mut z = num_complex::Complex64::new(0.0, 0.0);
                        for c in 0..n {
                            z += a.entries[i][c] * a.entries[j][c].conj();
                        }
                        let id = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((z - id).norm());
                    }
                }
            }
        }
        (worst, square)
    });
    let detail = format!("square = {square}, max |aa* - I| = {worst:.3e}");
    assert!(report(
        4,
        "twisted a-matrix unitary",
        square && worst < 1e-9,
        &detail,
        el,
        Duration::from_secs(60)
    ));
}

#[test]
fn criterion_05_twisted_verlinde_equals_twisted_kac_walton() {
    let ((mismatch, n), el) = timed(|| {
        let mut mismatch = vec![];
        let mut n = 0usize;
        let cases = [
            ("A3", Twist::Diagram, 0),
            ("A3", Twist::Diagram, 1),
            ("A3", Twist::Diagram, 2),
            ("D4", Twist::Diagram, 1),
            ("D4", Twist::Triality, 1),
            ("E6", Twist::Diagram, 1),
        ];
        for (t, tw, k) in cases {
            let e = FusionEngine::new(aff(t), tw, k, &SOptions::default(), DEFAULT_INTEGER_TOLERANCE).unwrap();
            let f = e.folding.as_ref().unwrap();
            let sig = weights(&f.twisted, k);
            for a in weights(&e.base, k) {
                for b in &sig {
                    for c in &sig {
                        let (v, _) = e.twisted_verlinde(Pattern::OneSigmaSigma, [&a, b, c]).unwrap();
                        let kw = twisted_kac_walton(f, k, &a, b, c, &e.cache).unwrap();
                        if v != kw {
                            mismatch.push(format!("{t} {} k={k} {a:?} {b:?} {c:?}: {v} vs {kw}", tw.name()));
                        }
                        n += 1;
                    }
                }
            }
        }
        (mismatch, n)
    });
    let detail = format!(
        "{n} triples, {} mismatches {:?}",
        mismatch.len(),
        mismatch.iter().take(3).collect::<Vec<_>>()
    );
    assert!(report(
        5,
        "twisted Verlinde = twisted Kac-Walton",
        mismatch.is_empty(),
        &detail,
        el,
        Duration::from_secs(120)
    ));
}

/// `(x, y)` from the finite Cartan matrix and symmetrizer, solved by elimination.
fn form_oracle(d: &CartanDatum, x: &[i64], y: &[i64]) -> Q {
    // x = A c in root coordinates c; (x, y) = sum_i c_i d_i y_i
    let ab = d.abar();
    let l = ab.len();
    let mut m: Vec<Vec<Q>> = (0..l)
        .map(|i| {
            let mut r: Vec<Q> = (0..l).map(|j| Q::from_integer(ab[i][j] as i128)).collect();
            r.push(Q::from_integer(x[i] as i128));
            r
        })
        .collect();
    for c in 0..l {
        let p = (c..l).find(|&r| m[r][c] != Q::from_integer(0)).unwrap();
        m.swap(c, p);
        let inv = Q::from_integer(1) / m[c][c];
        for v in m[c].iter_mut() {
            *v *= inv;
        }
        for r in 0..l {
            if r != c {
                let f = m[r][c];
                for j in 0..=l {
                    let v = m[c][j];
                    m[r][j] -= f * v;
                }
            }
        }
    }
    let dbar = d.dbar();
    (0..l).map(|i| m[i][l] * dbar[i] * Q::from_integer(y[i] as i128)).sum()
}

#[test]
fn criterion_06_folding_identities() {
    let (fails, el) = timed(|| {
        let mut fails = vec![];
        for (t, tw) in FOLDINGS {
            let f = build_folding(aff(t), tw).unwrap();
            let base = &f.auto.base;
            let adj = &f.adjacent;
            let tag = format!("{t} {}", tw.name());
            let l = adj.rank();
            if f.pstar_apply(&vec![1; l]) != vec![1; base.rank()] {
                fails.push(format!("{tag}: rho"));
            }
            for i in 0..l {
                for j in 0..l {
                    let mut x = vec![0; l];
                    let mut y = vec![0; l];
                    x[i] = 1;
                    y[j] = 1;
                    if form_oracle(adj, &x, &y) != form_oracle(base, &f.pstar_apply(&x), &f.pstar_apply(&y)) {
                        fails.push(format!("{tag}: isometry {i} {j}"));
                    }
                }
            }
            if f.nu_iota_nu_inv() != f.pstar_phi_inv() {
                fails.push(format!("{tag}: nu iota nu^-1"));
            }
            let oc = &f.orbit_cartan;
            let n = oc.relabel.len();
            let same = (0..n).all(|i| (0..n).all(|j| oc.datum.a[i][j] == adj.a[oc.relabel[i]][oc.relabel[j]]));
            if !same || oc.datum.a.len() != adj.a.len() {
                fails.push(format!("{tag}: orbit cartan"));
            }
            let rho_a = vec![1; l];
            let rho_b = vec![1; base.rank()];
            assert_eq!(adj.hdual, base.hdual);
            for k in 0..=3 {
                let tt = Q::from_integer((k + adj.hdual) as i128);
                let h = Q::from_integer(adj.hdual as i128);
                for w in weights(adj, k) {
                    let shift = |x: &[i64], r: &[i64]| -> Vec<i64> { x.iter().zip(r).map(|(a, b)| a + b).collect() };
                    let lp = shift(&w, &rho_a);
                    let m1 = form_oracle(adj, &lp, &lp) / (tt * 2) - form_oracle(adj, &rho_a, &rho_a) / (h * 2);
                    let pw = f.pstar_apply(&w);
                    let lb = shift(&pw, &rho_b);
                    let m2 = form_oracle(base, &lb, &lb) / (tt * 2) - form_oracle(base, &rho_b, &rho_b) / (h * 2);
                    let lib1 = anomaly(adj, k, &w).unwrap();
                    let lib2 = anomaly(base, k, &pw).unwrap();
                    if m1 != m2 || lib1 != m1 || lib2 != m2 {
                        fails.push(format!("{tag} k={k} {w:?}: anomaly"));
                    }
                }
            }
        }
        fails
    });
    let detail = format!(
        "4 foldings, {} failures {:?}",
        fails.len(),
        fails.iter().take(3).collect::<Vec<_>>()
    );
    assert!(report(
        6,
        "folding identities",
        fails.is_empty(),
        &detail,
        el,
        Duration::from_secs(5)
    ));
}

/// Level-`k` dominant weights by brute enumeration of label tuples.
fn brute_level_weights(d: &CartanDatum, k: i64) -> Vec<Weight> {
    let comarks = &d.comarks[1..];
    let mut out = vec![];
    let mut cur = vec![0i64; comarks.len()];
    fn rec(i: usize, left: i64, comarks: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == comarks.len() {
            out.push(cur.clone());
            return;
        }
        let mut v = 0;
        while v * comarks[i] <= left {
            cur[i] = v;
            rec(i + 1, left - v * comarks[i], comarks, cur, out);
            v += 1;
        }
        cur[i] = 0;
    }
    rec(0, k, comarks, &mut cur, &mut out);
    out
}

#[test]
fn criterion_07_weight_bijections() {
    let (fails, el) = timed(|| {
        let mut fails = vec![];
        for (t, tw) in FOLDINGS {
            let f = build_folding(aff(t), tw).unwrap();
            let perm = &f.auto.perm;
            for k in 0..=3 {
                let dag = brute_level_weights(&f.twisted, k).len();
                let adj = brute_level_weights(&f.adjacent, k).len();
                let sym = brute_level_weights(&f.auto.base, k)
                    .into_iter()
                    .filter(|w| (1..perm.len()).all(|i| w[perm[i] - 1] == w[i - 1]))
                    .count();
                if dag != adj || adj != sym || weights(&f.twisted, k).len() != dag {
                    fails.push(format!("{t} {} k={k}: {dag} {adj} {sym}", tw.name()));
                }
            }
        }
        fails
    });
    let detail = format!("4 foldings x k<=3, {} failures {:?}", fails.len(), fails);
    assert!(report(
        7,
        "weight-set bijections",
        fails.is_empty(),
        &detail,
        el,
        Duration::from_secs(1)
    ));
}

/// Weyl dimension formula from the positive roots.
fn weyl_dim(d: &CartanDatum, lambda: &[i64]) -> Q {
    let rho = vec![1; d.rank()];
    let lr: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
    let mut num = Q::from_integer(1);
    for beta in &d.positive_roots_wt {
        num *= form_oracle(d, &lr, beta) / form_oracle(d, &rho, beta);
    }
    num
}

#[test]
fn criterion_08_conservation() {
    let ((fails, n), el) = timed(|| {
        let cap = 5000u128;
        let mut fails = vec![];
        let mut n = 0usize;
        let cache = WeightCache::new(DEFAULT_DIM_CAP);
        let dimq = |d: &CartanDatum, w: &[i64]| -> u128 { weyl_dim(d, w).to_integer() as u128 };
        let check_tensor = |d: &CartanDatum, a: &Weight, b: &Weight, fails: &mut Vec<String>| {
            let t = tensor_decompose(d, a, b, &cache).unwrap();
            let s: u128 = t.entries.iter().map(|(w, m)| dimq(d, w) * *m as u128).sum();
            if s != dimq(d, a) * dimq(d, b) {
                fails.push(format!("tensor {} {a:?} {b:?}", d.lie_type));
            }
        };
        for t in UNTWISTED_GRID {
            let d = cartan(aff(t)).unwrap();
            let ws: Vec<Weight> = weights(&d, 3).into_iter().filter(|w| dimq(&d, w) <= cap).collect();
            for a in &ws {
                let fr = freudenthal(&d, a, DEFAULT_DIM_CAP).unwrap();
                if fr.total() != dimq(&d, a) {
                    fails.push(format!("freudenthal {t} {a:?}"));
                }
                n += 1;
                for b in &ws {
                    check_tensor(&d, a, b, &mut fails);
                    n += 1;
                }
            }
        }
        let cache2 = WeightCache::new(DEFAULT_DIM_CAP);
        for (t, tw, kmax) in [
            ("A3", Twist::Diagram, 2),
            ("D4", Twist::Diagram, 1),
            ("D4", Twist::Triality, 1),
            ("E6", Twist::Diagram, 1),
        ] {
            let f = build_folding(aff(t), tw).unwrap();
            let base = &f.auto.base;
            let td = &f.twisted;
            for a in weights(base, kmax) {
                if dimq(base, &a) > cap {
                    continue;
                }
                let fr = freudenthal(base, &a, DEFAULT_DIM_CAP).unwrap();
                if fr.total() != dimq(base, &a) {
                    fails.push(format!("freudenthal {t} {a:?}"));
                }
                let br = branch(base, td, &f.restriction_matrix(), &a, &cache2).unwrap();
                let s: u128 = br.entries.iter().map(|(w, m)| dimq(td, w) * *m as u128).sum();
                if s != dimq(base, &a) {
                    fails.push(format!("branch {t} {a:?}"));
                }
                n += 1;
                for nu in br.entries.keys() {
                    for b in weights(td, kmax) {
                        if dimq(td, nu) <= cap && dimq(td, &b) <= cap {
                            let t2 = tensor_decompose(td, nu, &b, &cache2).unwrap();
                            let s: u128 = t2.entries.iter().map(|(w, m)| dimq(td, w) * *m as u128).sum();
                            if s != dimq(td, nu) * dimq(td, &b) {
                                fails.push(format!("twisted tensor {t} {nu:?} {b:?}"));
                            }
                            n += 1;
                        }
                    }
                }
            }
        }
        (fails, n)
    });
    let detail = format!(
        "{n} checks, {} failures {:?}",
        fails.len(),
        fails.iter().take(3).collect::<Vec<_>>()
    );
    assert!(report(
        8,
        "representation conservation",
        fails.is_empty(),
        &detail,
        el,
        Duration::from_secs(60)
    ));
}

/// Alcove representative and sign by enumerating the affine Weyl orbit inside a window.
fn brute_fold(d: &CartanDatum, k: i64, x: &[i64], window: i64) -> (i8, Option<Weight>) {
    let t = k + d.hdual;
    let comarks = &d.comarks[1..];
    let full = |y: &[i64]| -> Vec<i64> {
        let mut v = vec![t - comarks.iter().zip(y).map(|(a, b)| a * b).sum::<i64>()];
        v.extend_from_slice(y);
        v
    };
    let mut parity: HashMap<Weight, u8> = HashMap::from([(x.to_vec(), 0)]);
    let mut queue = VecDeque::from([x.to_vec()]);
    let mut on_wall = false;
    let mut hit: HashSet<(Weight, u8)> = HashSet::new();
    while let Some(y) = queue.pop_front() {
        let p = parity[&y];
        let lab = full(&y);
        if lab.iter().all(|v| *v >= 0) {
            if lab.contains(&0) {
                on_wall = true;
            } else {
                hit.insert((y.clone(), p));
            }
        }
        for i in 0..lab.len() {
            let z: Vec<i64> = (1..lab.len()).map(|j| lab[j] - lab[i] * d.a[j][i]).collect();
            if z.iter().all(|v| v.abs() <= window) && !parity.contains_key(&z) {
                parity.insert(z.clone(), 1 - p);
                queue.push_back(z);
            }
        }
    }
    if on_wall {
        return (0, None);
    }
    assert_eq!(hit.len(), 1, "window too small for {x:?}");
    let (w, p) = hit.into_iter().next().unwrap();
    (if p == 0 { 1 } else { -1 }, Some(w))
}

#[test]
fn criterion_09_alcove_fold_brute_force() {
    let ((fails, n), el) = timed(|| {
        let mut fails = vec![];
        let mut n = 0usize;
        for (t, kmax) in [("A1^(1)", 3), ("A2^(1)", 3), ("A3^(2)", 2)] {
            let d = cartan(ty(t)).unwrap();
            let l = d.rank();
            for k in 0..=kmax {
                let tt = k + d.hdual;
                let r = 2 * tt;
                let mut pts: Vec<Vec<i64>> = vec![vec![]];
                for _ in 0..l {
                    pts = pts
                        .into_iter()
                        .flat_map(|p| (-r..=r).map(move |v| [p.clone(), vec![v]].concat()))
                        .collect();
                }
                for x in pts {
                    let got = alcove_fold(&d, k, &x).unwrap();
                    let want = brute_fold(&d, k, &x, 6 * tt);
                    if (got.sign, got.rep.clone()) != want {
                        fails.push(format!("{t} k={k} {x:?}: {:?} vs {want:?}", (got.sign, got.rep)));
                    }
                    n += 1;
                }
            }
        }
        (fails, n)
    });
    let detail = format!(
        "{n} points, {} disagreements {:?}",
        fails.len(),
        fails.iter().take(3).collect::<Vec<_>>()
    );
    assert!(report(
        9,
        "alcove folding vs brute force",
        fails.is_empty(),
        &detail,
        el,
        Duration::from_secs(30)
    ));
}

#[test]
fn criterion_10_sigma_sigma_vacuum() {
    let ((fails, worst, n), el) = timed(|| {
        let mut fails = vec![];
        let mut worst = 0.0f64;
        let mut n = 0usize;
        for k in 0..=2 {
            let e = FusionEngine::new(
                aff("A3"),
                Twist::Diagram,
                k,
                &SOptions::default(),
                DEFAULT_INTEGER_TOLERANCE,
            )
            .unwrap();
            let sig = e.sigma_weights();
            let unt = e.untwisted_weights();
            let vac = vec![0; 3];
            for a in &sig {
                let mut dual = 0;
                for b in &sig {
                    for c in &unt {
                        match e.twisted_verlinde(Pattern::SigmaSigmaOne, [a, b, c]) {
                            Ok((v, r)) => {
                                worst = worst.max(r);
                                if *c == vac {
                                    dual += v;
                                }
                            }
                            Err(err) => fails.push(format!("k={k} {a:?} {b:?} {c:?}: {err}")),
                        }
                        n += 1;
                    }
                }
                if dual != 1 {
                    fails.push(format!("k={k} s{a:?}: {dual} vacuum channels"));
                }
            }
        }
        (fails, worst, n)
    });
    let detail = format!(
        "{n} triples, max residual {worst:.3e}, {} failures {:?} (consistency only)",
        fails.len(),
        fails.iter().take(3).collect::<Vec<_>>()
    );
    let ok = fails.is_empty() && worst < 1e-6;
    assert!(report(
        10,
        "sigma x sigma -> 1 Verlinde",
        ok,
        &detail,
        el,
        Duration::from_secs(10)
    ));
}
