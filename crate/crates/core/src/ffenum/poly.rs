//! Dense univariate polynomials over a [`GF`], coefficients low to high.

use super::gf::GF;

pub type Poly = Vec<u32>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, `None` for the zero polynomial.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn eval(k: &GF, f: &[u32], x: u32) -> u32 {
    f.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
}

pub fn add(k: &GF, f: &[u32], g: &[u32]) -> Poly {
    let n = f.len().max(g.len());
    trim((0..n).map(|i| k.add(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0))).collect())
}

pub fn sub(k: &GF, f: &[u32], g: &[u32]) -> Poly {
    let n = f.len().max(g.len());
    trim((0..n).map(|i| k.sub(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0))).collect())
}

pub fn scale(k: &GF, f: &[u32], c: u32) -> Poly {
    trim(f.iter().map(|&a| k.mul(a, c)).collect())
}

pub fn mul(k: &GF, f: &[u32], g: &[u32]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(a, b));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(k: &GF, f: &[u32], g: &[u32]) -> (Poly, Poly) {
    let dg = degree(g).expect("polynomial division by zero");
    let inv = k.inv(g[dg]).expect("nonzero leading coefficient");
    let mut r = trim(f.to_vec());
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = k.mul(r[dr], inv);
        q[dr - dg] = c;
        for (j, &b) in g.iter().enumerate().take(dg + 1) {
            r[dr - dg + j] = k.sub(r[dr - dg + j], k.mul(c, b));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(k: &GF, f: &[u32]) -> Poly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => scale(k, f, k.inv(f[d]).expect("nonzero")),
    }
}

/// Monic greatest common divisor (`gcd(0, 0) = 0`).
pub fn gcd(k: &GF, f: &[u32], g: &[u32]) -> Poly {
    let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

/// Hasse derivative `D^(j) f = sum_i binom(i, j) c_i t^{i-j}`.
pub fn hasse_derivative(k: &GF, f: &[u32], j: usize) -> Poly {
    if f.len() <= j {
        return Vec::new();
    }
    let p = k.characteristic() as u64;
    trim((j..f.len()).map(|i| k.mul(f[i], k.from_int(binomial_mod(i as u64, j as u64, p) as i64))).collect())
}

pub fn derivative(k: &GF, f: &[u32]) -> Poly {
    hasse_derivative(k, f, 1)
}

/// `binom(n, r) mod p` by Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut r: u64, p: u64) -> u64 {
    let mut out = 1u64;
    while n > 0 || r > 0 {
        let (a, b) = (n % p, r % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..b {
            c = c * (a - i) % p;
        }
        let mut d = 1u64;
        for i in 1..=b {
            d = d * i % p;
        }
        // d is a unit mod p
        c = c * mod_pow(d, p - 2, p) % p;
        out = out * c % p;
        n /= p;
        r /= p;
    }
    out
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// No repeated factor over the algebraic closure; zero is not squarefree.
pub fn is_squarefree(k: &GF, f: &[u32]) -> bool {
    power_free(k, f, 2)
}

/// No root of multiplicity `>= ell` over the algebraic closure.
pub fn power_free(k: &GF, f: &[u32], ell: usize) -> bool {
    if degree(f).is_none() {
        return false;
    }
    let mut g = trim(f.to_vec());
    for j in 1..ell {
        g = gcd(k, &g, &hasse_derivative(k, f, j));
        if degree(&g) == Some(0) {
            return true;
        }
    }
    degree(&g).unwrap_or(0) == 0
}

/// Multiplicity of `a` as a root of the nonzero `f`.
pub fn root_multiplicity(k: &GF, f: &[u32], a: u32) -> usize {
    let mut g = trim(f.to_vec());
    let mut m = 0;
    while !g.is_empty() && eval(k, &g, a) == 0 {
        // synthetic division by t - a
        let mut q = vec![0u32; g.len() - 1];
        let mut acc = 0;
        for i in (1..g.len()).rev() {
            acc = k.add(k.mul(acc, a), g[i]);
            q[i - 1] = acc;
        }
        g = trim(q);
        m += 1;
    }
    m
}

/// Taylor coefficients of `f` at `a` up to order `order - 1`.
pub fn taylor(k: &GF, f: &[u32], a: u32, order: usize) -> Vec<u32> {
    (0..order).map(|j| eval(k, &hasse_derivative(k, f, j), a)).collect()
}

/// Interpolating polynomial through `(xs[i], ys[i])`, distinct `xs`.
pub fn interpolate(k: &GF, xs: &[u32], ys: &[u32]) -> Poly {
    let mut out: Poly = Vec::new();
    for (i, &xi) in xs.iter().enumerate() {
        if ys[i] == 0 {
            continue;
        }
        let mut basis: Poly = vec![1];
        let mut denom = 1u32;
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                basis = mul(k, &basis, &[k.neg(xj), 1]);
                denom = k.mul(denom, k.sub(xi, xj));
            }
        }
        out = add(k, &out, &scale(k, &basis, k.div(ys[i], denom).expect("distinct nodes")));
    }
    out
}

/// Map coefficients through a code table.
pub fn map_coeffs(f: &[u32], table: &[u32]) -> Poly {
    f.iter().map(|&c| table[c as usize]).collect()
}
