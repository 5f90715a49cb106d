//! Oracles and generators shared by the integration tests. Nothing here
//! calls the code paths it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hierstate::rep_theory::IrrepLabel;
use hierstate::state_tree::{BasisLabel, GroupTag, HierState, HierarchyLevel, NodeWave};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of product-basis vectors with each total `2M`, by enumerating
/// every m-tuple.
pub fn weight_counts(factors: &[IrrepLabel]) -> BTreeMap<i32, u64> {
    let mut counts = BTreeMap::new();
    let mut tuple: Vec<i32> = factors.iter().map(|f| f.twice_j as i32).collect();
    loop {
        *counts.entry(tuple.iter().sum::<i32>()).or_insert(0) += 1;
        // odometer over m_i = j_i, j_i - 1, ..., -j_i
        let mut k = 0;
        loop {
            if k == tuple.len() {
                return counts;
            }
            let tj = factors[k].twice_j as i32;
            if tuple[k] > -tj {
                tuple[k] -= 2;
                break;
            }
            tuple[k] = tj;
            k += 1;
        }
    }
}

/// All m-tuples (twice-values) of the given spins.
pub fn all_weight_tuples(factors: &[IrrepLabel]) -> Vec<Vec<i32>> {
    let mut out: Vec<Vec<i32>> = vec![vec![]];
    for f in factors {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                f.weights().map(move |m| {
                    let mut t = prefix.clone();
                    t.push(m);
                    t
                })
            })
            .collect();
    }
    out
}

/// Clebsch–Gordan table for `j1 ⊗ j2` built by lowering-operator
/// construction with Condon–Shortley phases; key `(2J, 2M, 2m1, 2m2)`.
pub fn ladder_cg_table(tj1: u32, tj2: u32) -> BTreeMap<(u32, i32, i32, i32), f64> {
    let m1s: Vec<i32> = (0..=tj1 as i32).map(|k| tj1 as i32 - 2 * k).collect();
    let m2s: Vec<i32> = (0..=tj2 as i32).map(|k| tj2 as i32 - 2 * k).collect();
    let pairs: Vec<(i32, i32)> = m1s
        .iter()
        .flat_map(|&a| m2s.iter().map(move |&b| (a, b)))
        .collect();
    let index = |m1: i32, m2: i32| pairs.iter().position(|&p| p == (m1, m2)).unwrap();
    let n = pairs.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // lowering coefficient sqrt(j(j+1) - m(m-1)) with twice-values
    let lower_coef = |tj: i32, tm: i32| {
        let (j, m) = (tj as f64 / 2.0, tm as f64 / 2.0);
        (j * (j + 1.0) - m * (m - 1.0)).sqrt()
    };
    let lower = |v: &[f64]| {
        let mut out = vec![0.0; n];
        for (k, &(m1, m2)) in pairs.iter().enumerate() {
            if v[k] == 0.0 {
                continue;
            }
            if m1 > -(tj1 as i32) {
                out[index(m1 - 2, m2)] += lower_coef(tj1 as i32, m1) * v[k];
            }
            if m2 > -(tj2 as i32) {
                out[index(m1, m2 - 2)] += lower_coef(tj2 as i32, m2) * v[k];
            }
        }
        out
    };

    let mut states: BTreeMap<(u32, i32), Vec<f64>> = BTreeMap::new();
    let hi = tj1 + tj2;
    let lo = tj1.abs_diff(tj2);
    for tj in (lo..=hi).rev().step_by(2) {
        let tm = tj as i32;
        // highest weight: residual of |j1, J - j1> against all larger J at M = J
        let mut v = vec![0.0; n];
        v[index(tj1 as i32, tm - tj1 as i32)] = 1.0;
        for (&(_, m), w) in &states {
            if m == tm {
                let c = dot(&v, w);
                for (a, b) in v.iter_mut().zip(w) {
                    *a -= c * b;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let mut m = tm;
        states.insert((tj, m), v.clone());
        while m > -(tj as i32) {
            let c = lower_coef(tj as i32, m);
            v = lower(&v).into_iter().map(|x| x / c).collect();
            m -= 2;
            states.insert((tj, m), v.clone());
        }
    }

    let mut table = BTreeMap::new();
    for ((tj, tm), v) in states {
        for (k, &(m1, m2)) in pairs.iter().enumerate() {
            table.insert((tj, tm, m1, m2), v[k]);
        }
    }
    table
}

fn point_level(index: u32, n: usize) -> HierarchyLevel {
    HierarchyLevel::new(
        index,
        GroupTag::Translation1D,
        (0..n as i64).map(BasisLabel::Point).collect(),
    )
    .unwrap()
}

/// Random tree shape: depth up to `max_depth`, up to 3 children per node,
/// 1 to 4 basis labels per level, zero amplitudes.
pub fn random_shape(rng: &mut impl Rng, level: u32, max_depth: u32) -> HierState {
    let n = rng.gen_range(1..=4);
    let wave = NodeWave::new(point_level(level, n), vec![Complex64::new(0.0, 0.0); n]).unwrap();
    let kids = if level < max_depth { rng.gen_range(0..=3) } else { 0 };
    let child_n = rng.gen_range(1..=4);
    let children = (0..kids)
        .map(|_| {
            let mut c = random_shape(rng, level + 1, max_depth);
            // siblings share one level; give them one basis too
            c.wave = NodeWave::new(point_level(level + 1, child_n), vec![Complex64::new(0.0, 0.0); child_n]).unwrap();
            c
        })
        .collect();
    HierState::new(wave, children)
}

/// Same shape as `shape` with fresh amplitudes in the unit square.
pub fn fill(rng: &mut impl Rng, shape: &HierState) -> HierState {
    let mut out = shape.clone();
    fill_in_place(rng, &mut out);
    out
}

fn fill_in_place(rng: &mut impl Rng, node: &mut HierState) {
    for a in &mut node.wave.amplitudes {
        *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    for c in &mut node.children {
        fill_in_place(rng, c);
    }
}

pub fn random_scalar(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Largest amplitude difference between two trees of identical shape,
/// walking both with an explicit stack.
pub fn max_amplitude_diff(a: &HierState, b: &HierState) -> f64 {
    let mut worst: f64 = 0.0;
    let mut stack = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        assert_eq!(x.wave.amplitudes.len(), y.wave.amplitudes.len());
        assert_eq!(x.children.len(), y.children.len());
        for (p, q) in x.wave.amplitudes.iter().zip(&y.wave.amplitudes) {
            worst = worst.max((p - q).norm());
        }
        stack.extend(x.children.iter().zip(&y.children));
    }
    worst
}

/// Vector-space axioms on one random congruent triple; returns the worst
/// amplitude error over all checks.
pub fn axiom_errors(rng: &mut impl Rng) -> f64 {
    use hierstate::state_tree::{add, scalar_mul};
    let shape = random_shape(rng, 0, 3);
    let phi = fill(rng, &shape);
    let psi = fill(rng, &shape);
    let chi = fill(rng, &shape);
    let a = random_scalar(rng);
    let b = random_scalar(rng);
    let one = Complex64::new(1.0, 0.0);

    let checks = [
        // a(φ+ψ) = aφ + aψ
        (
            scalar_mul(a, &add(&phi, &psi).unwrap()),
            add(&scalar_mul(a, &phi), &scalar_mul(a, &psi)).unwrap(),
        ),
        // (a+b)ψ = aψ + bψ
        (
            scalar_mul(a + b, &psi),
            add(&scalar_mul(a, &psi), &scalar_mul(b, &psi)).unwrap(),
        ),
        // (ab)ψ = a(bψ)
        (scalar_mul(a * b, &psi), scalar_mul(a, &scalar_mul(b, &psi))),
        // 1ψ = ψ
        (scalar_mul(one, &psi), psi.clone()),
        // φ+ψ = ψ+φ
        (add(&phi, &psi).unwrap(), add(&psi, &phi).unwrap()),
        // (φ+ψ)+χ = φ+(ψ+χ)
        (
            add(&add(&phi, &psi).unwrap(), &chi).unwrap(),
            add(&phi, &add(&psi, &chi).unwrap()).unwrap(),
        ),
    ];
    checks
        .iter()
        .map(|(l, r)| {
            assert!(hierstate::state_tree::congruent(l, &shape));
            max_amplitude_diff(l, r)
        })
        .fold(0.0, f64::max)
}

/// Random factor list: 1 to `max_len` spins with `2j <= max_twice_j`.
pub fn random_factors(rng: &mut impl Rng, max_len: usize, max_twice_j: u32) -> Vec<IrrepLabel> {
    let n = rng.gen_range(1..=max_len);
    (0..n)
        .map(|_| IrrepLabel::new(rng.gen_range(0..=max_twice_j)))
        .collect()
}

/// Relative coordinate `x1 - x2` downward zero crossings, linearly
/// interpolated.
pub fn downward_crossings(t: &[f64], r: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1..r.len() {
        if r[k - 1] > 0.0 && r[k] <= 0.0 {
            let frac = r[k - 1] / (r[k - 1] - r[k]);
            out.push(t[k - 1] + frac * (t[k] - t[k - 1]));
        }
    }
    out
}
