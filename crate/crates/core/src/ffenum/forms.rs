//! Homogeneous forms over `F_Q`, their enumeration and their points.

use super::gf::GF;
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Exponent vectors of degree `d` in `n + 1` variables, lexicographically
/// descending (`x_0^d` first).
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(vars - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n + 1, d, &mut Vec::new(), &mut out);
    out
}

/// Number of forms `Q^{binom(n+d, n)}`, if it fits the budget.
pub fn form_count(q: u64, n: usize, d: u32, budget: u64) -> Result<u64> {
    let m = monomials(n, d).len() as u32;
    q.checked_pow(m).filter(|&c| c <= budget).ok_or_else(|| Error::Budget {
        size: format!("{q}^{m}"),
        budget: budget.to_string(),
    })
}

/// Base-`Q` digits of `index`, most significant first.
pub fn decode(mut index: u64, q: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % q) as u32;
        index /= q;
    }
    out
}

/// Every form of degree `d` in `n + 1` variables over `F_Q` exactly once,
/// lexicographic in the coefficient vector (ordered as [`monomials`]).
pub fn enumerate_forms(q: u64, n: usize, d: u32, budget: u64) -> Result<impl Iterator<Item = Vec<u32>>> {
    let total = form_count(q, n, d, budget)?;
    let len = monomials(n, d).len();
    Ok((0..total).map(move |i| decode(i, q, len)))
}

/// First nonzero coefficient equal to one.
pub fn is_normalized(coeffs: &[u32]) -> bool {
    coeffs.iter().find(|&&c| c != 0) == Some(&1)
}

/// A form over some field together with its monomial list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub n: usize,
    pub d: u32,
    pub coeffs: Vec<u32>,
}

impl Form {
    pub fn new(n: usize, d: u32, coeffs: Vec<u32>) -> Result<Form> {
        if coeffs.len() != monomials(n, d).len() {
            return Err(Error::Parameter(format!("form of degree {d} in {} variables needs {} coefficients", n + 1, monomials(n, d).len())));
        }
        Ok(Form { n, d, coeffs })
    }

    /// Coefficients pushed through a field embedding.
    pub fn embed(&self, table: &[u32]) -> Form {
        Form { n: self.n, d: self.d, coeffs: poly::map_coeffs(&self.coeffs, table) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, k: &GF, x: &[u32]) -> u32 {
        let mons = monomial_cache(self.n, self.d);
        let powers: Vec<Vec<u32>> =
            x.iter().map(|&xi| (0..=self.d).map(|e| k.pow(xi, e as u64)).collect()).collect();
        let mut acc = 0;
        for (c, e) in self.coeffs.iter().zip(mons.iter()) {
            if *c == 0 {
                continue;
            }
            let mut t = *c;
            for (i, &ei) in e.iter().enumerate() {
                t = k.mul(t, powers[i][ei as usize]);
            }
            acc = k.add(acc, t);
        }
        acc
    }

    /// `d/dx_i` as a form of degree `d - 1`.
    pub fn partial(&self, k: &GF, i: usize) -> Form {
        if self.d == 0 {
            return Form { n: self.n, d: 0, coeffs: vec![0] };
        }
        let target = monomials(self.n, self.d - 1);
        let mut coeffs = vec![0u32; target.len()];
        for (c, e) in self.coeffs.iter().zip(monomials(self.n, self.d)) {
            if e[i] == 0 || *c == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            let idx = target.iter().position(|m| *m == f).expect("monomial present");
            coeffs[idx] = k.add(coeffs[idx], k.mul(*c, k.from_int(e[i] as i64)));
        }
        Form { n: self.n, d: self.d - 1, coeffs }
    }

    /// Restriction to the affine line `s -> s a + b`, as a polynomial in `s`.
    pub fn restrict_line(&self, k: &GF, a: &[u32], b: &[u32]) -> Poly {
        let lines: Vec<Poly> = a.iter().zip(b).map(|(&ai, &bi)| poly::trim(vec![bi, ai])).collect();
        let powers: Vec<Vec<Poly>> = lines
            .iter()
            .map(|l| {
                let mut v = vec![vec![1u32]];
                for e in 1..=self.d as usize {
                    let next = poly::mul(k, &v[e - 1], l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out: Poly = Vec::new();
        for (c, e) in self.coeffs.iter().zip(monomial_cache(self.n, self.d).iter()) {
            if *c == 0 {
                continue;
            }
            let mut t: Poly = vec![*c];
            for (i, &ei) in e.iter().enumerate() {
                t = poly::mul(k, &t, &powers[i][ei as usize]);
            }
            out = poly::add(k, &out, &t);
        }
        out
    }
}

pub(crate) fn monomial_cache(n: usize, d: u32) -> std::sync::Arc<Vec<Vec<u32>>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<Vec<Vec<u32>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("monomial cache poisoned");
    guard.entry((n, d)).or_insert_with(|| Arc::new(monomials(n, d))).clone()
}

/// Normalized representatives of `P^n(F)`: first nonzero coordinate one.
pub fn projective_points(k: &GF, n: usize) -> Vec<Vec<u32>> {
    let q = k.size() as u64;
    let mut out = Vec::new();
    for lead in 0..=n {
        let free = n - lead;
        for idx in 0..q.pow(free as u32) {
            let mut p = vec![0u32; n + 1];
            p[lead] = 1;
            let tail = decode(idx, q, free);
            p[lead + 1..].copy_from_slice(&tail);
            out.push(p);
        }
    }
    out
}

/// Binary form `sum c_i x_0^{d-i} x_1^i` dehomogenized at `x_0 = 1`.
pub fn binary_dehomogenize(coeffs: &[u32]) -> Poly {
    poly::trim(coeffs.to_vec())
}

/// Number of points of `V(F)` in `P^1(F_big)` for a binary form over the
/// subfield embedded by `table`.
pub fn binary_point_count(big: &GF, coeffs: &[u32], table: &[u32]) -> u64 {
    let d = coeffs.len() - 1;
    let f = poly::map_coeffs(&binary_dehomogenize(coeffs), table);
    if poly::degree(&f).is_none() {
        return big.size() as u64 + 1;
    }
    let mut count = (poly::degree(&f).unwrap() < d) as u64;
    for x in big.elements() {
        if poly::eval(big, &f, x) == 0 {
            count += 1;
        }
    }
    count
}

/// A binary form is squarefree iff its dehomogenization is and the point
/// at infinity is at most a simple root.
pub fn binary_is_squarefree(k: &GF, coeffs: &[u32]) -> bool {
    let d = coeffs.len() - 1;
    let f = binary_dehomogenize(coeffs);
    match poly::degree(&f) {
        None => false,
        Some(deg) => d - deg <= 1 && (deg == 0 || poly::is_squarefree(k, &f)),
    }
}

/// Root multiplicity scan: no root of `F` in `P^1(F_{Q^j})`, `j <= d`, is
/// repeated. Cross-check for [`binary_is_squarefree`].
pub fn binary_squarefree_by_scan(tower: &super::gf::FieldTower, coeffs: &[u32]) -> Result<bool> {
    let d = coeffs.len() - 1;
    let f = binary_dehomogenize(coeffs);
    let Some(deg) = poly::degree(&f) else { return Ok(false) };
    if d - deg > 1 {
        return Ok(false);
    }
    for j in 1..=deg.max(1) as u32 {
        let big = tower.extension(j)?;
        let g = poly::map_coeffs(&f, &tower.embed(j)?);
        for x in big.elements() {
            if poly::root_multiplicity(&big, &g, x) > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Singular points of a plane curve by scanning `P^2(F_{Q^j})` for
/// `j <= (d-1)^2`, the number of intersections of two partials.
pub fn plane_curve_is_smooth(tower: &super::gf::FieldTower, form: &Form, budget: u64) -> Result<bool> {
    if form.n != 2 {
        return Err(Error::Parameter("plane curves are ternary forms".into()));
    }
    if form.is_zero() {
        return Ok(false);
    }
    let cap = ((form.d.max(2) - 1) as u32).pow(2);
    let mut scanned = 0u64;
    for j in 1..=cap {
        let big = tower.extension(j)?;
        let f = form.embed(&tower.embed(j)?);
        let partials: Vec<Form> = (0..3).map(|i| f.partial(&big, i)).collect();
        let q = big.size() as u64;
        scanned += q * q + q + 1;
        if scanned > budget {
            return Err(Error::Budget { size: format!("P^2 scan up to degree {j}"), budget: budget.to_string() });
        }
        for pt in projective_points(&big, 2) {
            if f.eval(&big, &pt) == 0 && partials.iter().all(|g| g.eval(&big, &pt) == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Points of `V(F_1, ..., F_r)` in `P^n(F_big)`; forms already embedded.
pub fn common_zero_count(big: &GF, forms: &[Form], n: usize) -> u64 {
    projective_points(big, n).iter().filter(|pt| forms.iter().all(|f| f.eval(big, pt) == 0)).count() as u64
}
