//! Exact germ censuses: local probabilities by enumerating Taylor data.

use super::forms::decode;
use super::gf::{FieldTower, GF};
use crate::error::{Error, Result};

/// Rank of a matrix over a field.
pub fn rank(k: &GF, mut m: Vec<Vec<u32>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(p, r);
        let inv = k.inv(m[r][c]).expect("nonzero pivot");
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = k.mul(m[i][c], inv);
                for j in c..cols {
                    let v = k.mul(f, m[r][j]);
                    m[i][j] = k.sub(m[i][j], v);
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Census of `r`-tuples of first-order germs at a point of a smooth
/// `(m + r)`-dimensional variety: `(tuples vanishing with full-rank
/// Jacobian, admissible tuples)`. A tuple is admissible unless it vanishes
/// with a rank-deficient Jacobian.
pub fn germ_census(q: u64, m: u32, r: u32, budget: u64) -> Result<(u64, u64)> {
    let tower = FieldTower::new(q)?;
    let k = &tower.base;
    let dim = (m + r) as usize;
    let per = dim + 1;
    let len = per * r as usize;
    let total = q.checked_pow(len as u32).filter(|&t| t <= budget).ok_or_else(|| Error::Budget {
        size: format!("{q}^{len}"),
        budget: budget.to_string(),
    })?;
    let (mut favorable, mut admissible) = (0u64, 0u64);
    for idx in 0..total {
        let digits = decode(idx, q, len);
        let germs: Vec<&[u32]> = digits.chunks(per).collect();
        let vanish = germs.iter().all(|g| g[0] == 0);
        if !vanish {
            admissible += 1;
            continue;
        }
        let jac: Vec<Vec<u32>> = germs.iter().map(|g| g[1..].to_vec()).collect();
        if rank(k, jac) == r as usize {
            favorable += 1;
            admissible += 1;
        }
    }
    Ok((favorable, admissible))
}

/// Case counts for the Hirzebruch family over `F_{q^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HirzebruchCensus {
    /// Fiber form a square of a single rational factor.
    pub square: u64,
    /// Fiber form with two distinct rational factors.
    pub split: u64,
    /// Fiber form irreducible over the field.
    pub irreducible: u64,
    pub total: u64,
}

/// Enumerate pairs `(g_0, g_1)` of binary quadratics (the fiber form and
/// its first-order deformation). A pair is admissible unless `g_0 = 0`, or
/// `g_0 = c L^2` and `g_1` vanishes at the root of `L`.
pub fn hirzebruch_census(q: u64, k: u32, budget: u64) -> Result<HirzebruchCensus> {
    let big_q = q.checked_pow(k).ok_or(Error::Parameter("field too large".into()))?;
    big_q.checked_pow(6).filter(|&s| s <= budget).ok_or_else(|| Error::Budget {
        size: format!("{big_q}^6"),
        budget: budget.to_string(),
    })?;
    let tower = FieldTower::new(big_q)?;
    let f = &tower.base;
    let pts: Vec<(u32, u32)> = f.elements().map(|t| (1, t)).chain(std::iter::once((0, 1))).collect();
    let eval = |g: &[u32], (x0, x1): (u32, u32)| {
        let t0 = f.mul(g[0], f.mul(x0, x0));
        let t1 = f.mul(g[1], f.mul(x0, x1));
        let t2 = f.mul(g[2], f.mul(x1, x1));
        f.add(f.add(t0, t1), t2)
    };
    let mut out = HirzebruchCensus { square: 0, split: 0, irreducible: 0, total: 0 };
    for i0 in 0..big_q.pow(3) {
        let g0 = decode(i0, big_q, 3);
        if g0.iter().all(|&c| c == 0) {
            continue;
        }
        let roots: Vec<(u32, u32)> = pts.iter().copied().filter(|&p| eval(&g0, p) == 0).collect();
        for i1 in 0..big_q.pow(3) {
            let g1 = decode(i1, big_q, 3);
            match roots.len() {
                0 => out.irreducible += 1,
                1 => {
                    if eval(&g1, roots[0]) != 0 {
                        out.square += 1;
                    } else {
                        continue;
                    }
                }
                _ => out.split += 1,
            }
            out.total += 1;
        }
    }
    Ok(out)
}

/// Closed-form Hirzebruch case counts over a field with `big_q` elements.
pub fn hirzebruch_case_formulas(big_q: u64) -> HirzebruchCensus {
    let q = big_q;
    let cube = q * q * q;
    HirzebruchCensus {
        square: (q * q - 1) * (cube - q * q),
        split: (q - 1) * (q + 1) * q / 2 * cube,
        irreducible: (q - 1) * (q * q - q) / 2 * cube,
        total: q.pow(6) - q.pow(4) - cube + q * q,
    }
}
