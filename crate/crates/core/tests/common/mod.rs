#![allow(dead_code)]

use rand::Rng;

/// Fraction of `samples` that are `<= x`, by direct counting.
pub fn ecdf_by_count(samples: &[f64], x: f64) -> f64 {
    samples.iter().filter(|&&s| s <= x).count() as f64 / samples.len() as f64
}

/// Midpoint Riemann sum of `f(F_a(x) - F_b(x))` on a uniform grid spanning
/// both samples. Sorted sweeps keep it linear in the grid size.
pub fn riemann_integral(a: &[f64], b: &[f64], points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let lo = sa[0].min(sb[0]);
    let hi = sa.last().unwrap().max(*sb.last().unwrap());
    if hi == lo {
        return 0.0;
    }
    let h = (hi - lo) / points as f64;
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut sum = 0.0;
    for k in 0..points {
        let x = lo + (k as f64 + 0.5) * h;
        while ia < sa.len() && sa[ia] <= x {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= x {
            ib += 1;
        }
        let fa = ia as f64 / sa.len() as f64;
        let fb = ib as f64 / sb.len() as f64;
        sum += f(fa - fb);
    }
    sum * h
}

pub fn uniform_list(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_list(rng: &mut impl Rng) -> Vec<f64> {
    let len = rng.gen_range(1..=50);
    uniform_list(rng, len)
}

/// Symmetric matrix with zero diagonal and entries uniform in [0, 1).
#[allow(clippy::needless_range_loop)]
pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.gen();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Objective of a medoid set computed straight from the definition.
pub fn brute_objective(d: &[Vec<f64>], medoids: &[usize]) -> f64 {
    (0..d.len())
        .map(|k| {
            medoids
                .iter()
                .map(|&l| d[k][l])
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Partition as a sorted set of sorted member lists.
pub fn partition(assignments: &[usize]) -> Vec<Vec<usize>> {
    let m = assignments.iter().max().map_or(0, |&x| x + 1);
    let mut groups = vec![Vec::new(); m];
    for (i, &c) in assignments.iter().enumerate() {
        groups[c].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups.sort();
    groups
}
