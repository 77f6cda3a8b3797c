//! Transversality of two plane curves.
//!
//! Project from a center `c` off `V(F_1, F_2)`. The resultant `R` of the
//! restrictions to the lines through `c` has, at each line, order equal to
//! the sum of the intersection multiplicities on that line. Simple roots of
//! `R` are therefore transverse points. For a multiple root the line is
//! checked directly: the intersection is transverse there iff the gcd of the
//! two restrictions is squarefree of degree equal to the order of the root.

use super::forms::{projective_points, Form};
use super::gf::{FieldTower, GF, MAX_FIELD_SIZE};
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Determinant over a field by elimination.
fn determinant(k: &GF, mut m: Vec<Vec<u32>>) -> u32 {
    let n = m.len();
    let mut det = 1u32;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else { return 0 };
        if pivot != col {
            m.swap(pivot, col);
            det = k.neg(det);
        }
        let inv = k.inv(m[col][col]).expect("nonzero pivot");
        det = k.mul(det, m[col][col]);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let factor = k.mul(m[r][col], inv);
            for c in col..n {
                let v = k.mul(factor, m[col][c]);
                m[r][c] = k.sub(m[r][c], v);
            }
        }
    }
    det
}

/// Sylvester resultant of `f`, `g` with formal degrees `m`, `n`.
pub fn resultant(k: &GF, f: &[u32], m: usize, g: &[u32], n: usize) -> u32 {
    if m + n == 0 {
        return 1;
    }
    let size = m + n;
    let coeff = |p: &[u32], i: usize| *p.get(i).unwrap_or(&0);
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![0u32; size];
        for i in 0..=m {
            row[r + i] = coeff(f, m - i);
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![0u32; size];
        for i in 0..=n {
            row[r + i] = coeff(g, n - i);
        }
        rows.push(row);
    }
    determinant(k, rows)
}

/// Line data through the center: `s -> s c + t v1 + v2`.
struct Pencil {
    c: Vec<u32>,
    /// Coordinates of `v1` and `v2` (standard basis vectors).
    j: usize,
    k: usize,
    /// Index of the coordinate where `c` is one, if `c` is a basis vector.
    standard: Option<usize>,
}

impl Pencil {
    fn new(c: Vec<u32>) -> Pencil {
        let lead = c.iter().position(|&x| x != 0).expect("nonzero center");
        let others: Vec<usize> = (0..3).filter(|&i| i != lead).collect();
        let standard = (c.iter().filter(|&&x| x != 0).count() == 1).then_some(lead);
        Pencil { c, j: others[0], k: others[1], standard }
    }

    /// Restriction of `f` to the line with parameter `t` (`None` is the line at infinity).
    fn restrict(&self, field: &GF, f: &Form, t: Option<u32>) -> Poly {
        let mut b = vec![0u32; 3];
        match t {
            Some(t) => {
                b[self.j] = t;
                b[self.k] = 1;
            }
            None => b[self.j] = 1,
        }
        if let Some(i) = self.standard {
            // coefficient of s^a collects monomials with exponent a at i
            let mons = super::forms::monomial_cache(2, f.d);
            let mut out = vec![0u32; f.d as usize + 1];
            for (coef, e) in f.coeffs.iter().zip(mons.iter()) {
                if *coef == 0 {
                    continue;
                }
                let mut v = *coef;
                for (idx, &ei) in e.iter().enumerate() {
                    if idx != i {
                        v = field.mul(v, field.pow(b[idx], ei as u64));
                    }
                }
                out[e[i] as usize] = field.add(out[e[i] as usize], v);
            }
            return poly::trim(out);
        }
        f.restrict_line(field, &self.c, &b)
    }
}

/// Degree of `a` over the subfield of size `sub` (the smallest `e` with
/// `a^{sub^e} = a`).
fn degree_over(field: &GF, a: u32, sub: u64) -> u32 {
    let mut x = a;
    for e in 1..=field.degree() {
        x = field.pow(x, sub);
        if x == a {
            return e;
        }
    }
    field.degree()
}

/// Whether `V(F_1, F_2)` in `P^2` is a finite transverse intersection.
pub fn ci_pair_is_transversal(tower: &FieldTower, f1: &Form, f2: &Form) -> Result<bool> {
    if f1.n != 2 || f2.n != 2 {
        return Err(Error::Parameter("complete intersections are pairs of ternary forms".into()));
    }
    if f1.is_zero() || f2.is_zero() {
        return Ok(false);
    }
    let (d1, d2) = (f1.d as usize, f2.d as usize);
    let bezout = d1 * d2;
    // a center off the intersection, over the smallest possible extension
    let mut center = None;
    for e0 in 1..=4u32 {
        let w0 = tower.extension(e0)?;
        let emb = tower.embed(e0)?;
        let (g1, g2) = (f1.embed(&emb), f2.embed(&emb));
        if let Some(c) = projective_points(&w0, 2).into_iter().find(|c| g1.eval(&w0, c) != 0 || g2.eval(&w0, c) != 0) {
            center = Some((e0, c, g1, g2));
            break;
        }
    }
    let (e0, c, g1, g2) = center.ok_or_else(|| Error::Budget {
        size: "center search beyond degree 4".into(),
        budget: "degree 4".into(),
    })?;
    let w0 = tower.extension(e0)?;
    let pencil = Pencil::new(c.clone());

    // interpolation nodes in an extension with more than d1 d2 elements
    let mut ew = e0;
    while (tower.q() as u64).pow(ew) <= bezout as u64 {
        ew += e0;
    }
    let w = tower.extension(ew)?;
    let up = tower.embed_between(e0, ew)?;
    let (h1, h2) = (g1.embed(&up), g2.embed(&up));
    let wpencil = Pencil::new(c.iter().map(|&x| up[x as usize]).collect());
    let nodes: Vec<u32> = w.elements().take(bezout + 1).collect();
    let values: Vec<u32> = nodes
        .iter()
        .map(|&t| resultant(&w, &wpencil.restrict(&w, &h1, Some(t)), d1, &wpencil.restrict(&w, &h2, Some(t)), d2))
        .collect();
    let r_big = poly::interpolate(&w, &nodes, &values);
    let mut down = vec![u32::MAX; w.size() as usize];
    for (small, &big) in up.iter().enumerate() {
        down[big as usize] = small as u32;
    }
    let r: Poly = r_big.iter().map(|&x| down[x as usize]).collect();
    debug_assert!(r.iter().all(|&x| x != u32::MAX));
    let Some(deg_r) = poly::degree(&r) else {
        // a common component
        return Ok(false);
    };

    let line_ok = |field: &GF, u1: Poly, u2: Poly, order: usize| -> bool {
        let g = poly::gcd(field, &u1, &u2);
        poly::degree(&g) == Some(order) && (order == 0 || poly::is_squarefree(field, &g))
    };

    let at_infinity = bezout - deg_r;
    if at_infinity >= 2 && !line_ok(&w0, pencil.restrict(&w0, &g1, None), pencil.restrict(&w0, &g2, None), at_infinity) {
        return Ok(false);
    }
    let d = poly::gcd(&w0, &r, &poly::derivative(&w0, &r));
    let deg_d = poly::degree(&d).unwrap_or(0);
    if deg_d == 0 {
        return Ok(true);
    }
    let sub = w0.size() as u64;
    for e in 1..=deg_d as u32 {
        if (sub as f64).powi(e as i32) > MAX_FIELD_SIZE as f64 {
            return Err(Error::Budget { size: format!("F_{sub}^{e}"), budget: MAX_FIELD_SIZE.to_string() });
        }
        let ke = tower.extension(e0 * e)?;
        let emb = tower.embed_between(e0, e0 * e)?;
        let (dk, rk) = (poly::map_coeffs(&d, &emb), poly::map_coeffs(&r, &emb));
        let (k1, k2) = (g1.embed(&emb), g2.embed(&emb));
        let kpencil = Pencil::new(c.iter().map(|&x| emb[x as usize]).collect());
        for alpha in ke.elements() {
            if poly::eval(&ke, &dk, alpha) != 0 || degree_over(&ke, alpha, sub) != e {
                continue;
            }
            // one representative per Frobenius orbit
            let mut conj = alpha;
            let mut smallest = true;
            for _ in 1..e {
                conj = ke.pow(conj, sub);
                smallest &= conj > alpha;
            }
            if !smallest {
                continue;
            }
            let order = poly::root_multiplicity(&ke, &rk, alpha);
            if !line_ok(&ke, kpencil.restrict(&ke, &k1, Some(alpha)), kpencil.restrict(&ke, &k2, Some(alpha)), order) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Brute-force oracle: scan `P^2(F_{Q^j})` for `j <= d1 d2`, require
/// `d1 d2` distinct geometric points and full-rank Jacobians.
pub fn ci_pair_transversal_by_scan(tower: &FieldTower, f1: &Form, f2: &Form, budget: u64) -> Result<bool> {
    if f1.is_zero() || f2.is_zero() {
        return Ok(false);
    }
    let bezout = (f1.d * f2.d) as u32;
    // geometric points counted by degree: N_j = sum_{e | j} e a_e
    let mut counts = Vec::new();
    let mut spent = 0u64;
    for j in 1..=bezout {
        let k = tower.extension(j)?;
        let q = k.size() as u64;
        spent += q * q + q + 1;
        if spent > budget {
            return Err(Error::Budget { size: format!("P^2 scan to degree {j}"), budget: budget.to_string() });
        }
        let emb = tower.embed(j)?;
        let (g1, g2) = (f1.embed(&emb), f2.embed(&emb));
        let grads1: Vec<Form> = (0..3).map(|i| g1.partial(&k, i)).collect();
        let grads2: Vec<Form> = (0..3).map(|i| g2.partial(&k, i)).collect();
        let mut n = 0u64;
        for pt in projective_points(&k, 2) {
            if g1.eval(&k, &pt) != 0 || g2.eval(&k, &pt) != 0 {
                continue;
            }
            n += 1;
            let a: Vec<u32> = grads1.iter().map(|g| g.eval(&k, &pt)).collect();
            let b: Vec<u32> = grads2.iter().map(|g| g.eval(&k, &pt)).collect();
            let minors = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(x, y)| k.sub(k.mul(a[x], b[y]), k.mul(a[y], b[x])))
                .any(|m| m != 0);
            if !minors {
                return Ok(false);
            }
        }
        counts.push(n);
    }
    // closed points of degree e: e a_e = sum_{j | e} mu(e/j) N_j
    let mut total = 0i64;
    for e in 1..=bezout as u64 {
        let s: i64 = (1..=e)
            .filter(|j| e % j == 0)
            .map(|j| crate::scalar::mobius(e / j) * counts[j as usize - 1] as i64)
            .sum();
        total += s;
    }
    Ok(total == bezout as i64)
}
