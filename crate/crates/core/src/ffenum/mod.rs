//! Finite-field enumeration: field arithmetic, forms and their points,
//! transversality, character sums, germ censuses and the empirical side of
//! the moment generating functions.

pub mod census;
pub mod empirical;
pub mod forms;
pub mod gf;
pub mod poly;
pub mod transversal;

pub use census::{germ_census, hirzebruch_case_formulas, hirzebruch_census, HirzebruchCensus};
pub use empirical::{empirical_mgf, Deviation, EmpiricalReport, PowerFree, SampleFamily, SampleSpec, Sampling};
pub use forms::{enumerate_forms, Form};
pub use gf::{FieldTower, GF};
pub use transversal::ci_pair_is_transversal;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tower};
use crate::witt::WittVec;

/// Witt vector whose `j`-th ghost is `count(j, F_{Q^j})`.
pub fn zeta_ghost(tower: &FieldTower, k: usize, mut count: impl FnMut(u32, &GF) -> Result<u64>) -> Result<WittVec> {
    let mut ghosts = Vec::with_capacity(k);
    for j in 1..=k as u32 {
        let field = tower.extension(j)?;
        ghosts.push(Scalar::from_int(count(j, &field)? as i64));
    }
    WittVec::from_ghost(ghosts)
}

/// Class of `V(F_1, ..., F_r)` in `P^n`, ghost `j` the number of points over `F_{Q^j}`.
pub fn forms_zeta_ghost(tower: &FieldTower, forms: &[Form], k: usize) -> Result<WittVec> {
    let n = forms.first().map_or(0, |f| f.n);
    zeta_ghost(tower, k, |j, field| {
        let emb = tower.embed(j)?;
        let embedded: Vec<Form> = forms.iter().map(|f| f.embed(&emb)).collect();
        Ok(forms::common_zero_count(field, &embedded, n))
    })
}

/// Ghost components `sum_{z in F_{Q^j}} chi(f(z))` for the order-`ell`
/// character `chi(w^i) = zeta^i`, `w` the primitive `ell`-th root of unity
/// `g^{(Q-1)/ell}` of `F_Q`, extended through `a -> a^{(Q^j-1)/ell}`.
pub fn char_l_ghost(tower: &FieldTower, f: &[u32], ell: u32, k: usize, free: PowerFree) -> Result<WittVec> {
    let base = &tower.base;
    let q = tower.q();
    if ell < 2 || (q - 1) % ell as u64 != 0 {
        return Err(Error::Parameter(format!("character order {ell} must be >= 2 and divide {q} - 1")));
    }
    let order = if free == PowerFree::Squarefree { 2 } else { ell as usize };
    if !poly::power_free(base, f, order) {
        return Err(Error::NotSquarefree);
    }
    let zeta_tower = Tower::new(ell, None)?;
    let zeta = Scalar::zeta(zeta_tower);
    let w = base.exp((q - 1) / ell as u64);
    let mut ghosts = Vec::with_capacity(k);
    for j in 1..=k as u32 {
        let field = tower.extension(j)?;
        let emb = tower.embed(j)?;
        let g = poly::map_coeffs(f, &emb);
        let big = field.size() as u64;
        let target = emb[w as usize];
        let mut counts = vec![0i64; ell as usize];
        for z in field.elements() {
            let v = poly::eval(&field, &g, z);
            if v == 0 {
                continue;
            }
            let root = field.pow(v, (big - 1) / ell as u64);
            let i = (0..ell).find(|&i| field.pow(target, i as u64) == root).expect("power is a root of unity");
            counts[i as usize] += 1;
        }
        let mut value = Scalar::zero();
        for (i, &c) in counts.iter().enumerate() {
            if c != 0 {
                value += &zeta.pow(i as i64)?.scale(&num_rational::BigRational::from_integer(c.into()));
            }
        }
        ghosts.push(value);
    }
    WittVec::from_ghost(ghosts)
}
