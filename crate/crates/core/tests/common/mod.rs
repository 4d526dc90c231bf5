//! Brute-force oracles that share no code paths with the library: full
//! tuple loops instead of multi-indices, explicit Hermite sums instead of
//! recurrences, and hash-map polynomials.

#![allow(dead_code)]

use std::collections::HashMap;

use wiener_chaos::{ChaosExpansion, SymmetricTensor};

pub fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `He_n(x) = n! Σ_k (-1)^k x^{n-2k} / (k! (n-2k)! 2^k)`.
pub fn he_coeffs(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[n - 2 * k] = sign * fact(n) / (fact(k) * fact(n - 2 * k) * 2f64.powi(k as i32));
    }
    c
}

pub fn he(n: usize, x: f64) -> f64 {
    he_coeffs(n)
        .iter()
        .enumerate()
        .map(|(k, c)| c * x.powi(k as i32))
        .sum()
}

/// Every ordered tuple in `{0..dim}^order`.
pub fn tuples(dim: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..order {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

fn counts(t: &[usize], dim: usize) -> Vec<usize> {
    let mut c = vec![0; dim];
    for &k in t {
        c[k] += 1;
    }
    c
}

/// Kernel as a full row-major array.
pub fn dense(f: &SymmetricTensor) -> Vec<f64> {
    tuples(f.dim(), f.order())
        .iter()
        .map(|t| f.get(t))
        .collect()
}

/// `Σ_{tuples t} f[t] Π_k He_{count_k(t)}(x_k)`.
pub fn eval(f: &ChaosExpansion, x: &[f64]) -> f64 {
    let mut total = 0.0;
    for (n, kernel) in f.terms() {
        for t in tuples(f.dim(), n) {
            let wick: f64 = counts(&t, f.dim())
                .iter()
                .zip(x)
                .map(|(&c, &xk)| he(c, xk))
                .product();
            total += kernel.get(&t) * wick;
        }
    }
    total
}

pub type Poly = HashMap<Vec<usize>, f64>;

pub fn to_poly(f: &ChaosExpansion) -> Poly {
    let dim = f.dim();
    let mut out = Poly::new();
    for (n, kernel) in f.terms() {
        for t in tuples(dim, n) {
            // expand Π_k He_{c_k}(x_k) into monomials
            let mut partial: Poly = Poly::from([(vec![0; dim], kernel.get(&t))]);
            for (k, &c) in counts(&t, dim).iter().enumerate() {
                let coeffs = he_coeffs(c);
                let mut next = Poly::new();
                for (e, v) in &partial {
                    for (d, &a) in coeffs.iter().enumerate() {
                        if a != 0.0 {
                            let mut e = e.clone();
                            e[k] += d;
                            *next.entry(e).or_default() += v * a;
                        }
                    }
                }
                partial = next;
            }
            for (e, v) in partial {
                *out.entry(e).or_default() += v;
            }
        }
    }
    out
}

pub fn mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (a, x) in p {
        for (b, y) in q {
            let e: Vec<usize> = a.iter().zip(b).map(|(i, j)| i + j).collect();
            *out.entry(e).or_default() += x * y;
        }
    }
    out
}

/// `E[x^e]` for independent standard normals.
pub fn expect(p: &Poly) -> f64 {
    p.iter()
        .map(|(e, v)| {
            v * e
                .iter()
                .map(|&n| {
                    if n % 2 == 1 {
                        0.0
                    } else {
                        (1..n).step_by(2).map(|k| k as f64).product()
                    }
                })
                .product::<f64>()
        })
        .sum()
}

pub fn max_diff(p: &Poly, q: &Poly) -> f64 {
    p.keys()
        .chain(q.keys())
        .map(|e| (p.get(e).copied().unwrap_or(0.0) - q.get(e).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// `(f ⊗_i g)[a, b] = Σ_c f[a, c] g[b, c]` over full tuples.
pub fn contract(f: &SymmetricTensor, g: &SymmetricTensor, i: usize) -> Vec<f64> {
    let m = f.dim();
    let (p, q) = (f.order(), g.order());
    let mut out = Vec::new();
    for a in tuples(m, p - i) {
        for b in tuples(m, q - i) {
            let mut s = 0.0;
            for c in tuples(m, i) {
                let fa: Vec<usize> = a.iter().chain(&c).copied().collect();
                let gb: Vec<usize> = b.iter().chain(&c).copied().collect();
                s += f.get(&fa) * g.get(&gb);
            }
            out.push(s);
        }
    }
    out
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut p = p.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Average of a full array over all axis permutations.
pub fn symmetrize(data: &[f64], dim: usize, order: usize) -> Vec<f64> {
    let all = tuples(dim, order);
    let perms = permutations(order);
    let flat = |t: &[usize]| t.iter().fold(0, |acc, &k| acc * dim + k);
    all.iter()
        .map(|t| {
            perms
                .iter()
                .map(|p| {
                    let u: Vec<usize> = p.iter().map(|&j| t[j]).collect();
                    data[flat(&u)]
                })
                .sum::<f64>()
                / perms.len() as f64
        })
        .collect()
}

/// `E[F G]` through the brute-force polynomial route.
pub fn pairing(f: &ChaosExpansion, g: &ChaosExpansion) -> f64 {
    expect(&mul(&to_poly(f), &to_poly(g)))
}
