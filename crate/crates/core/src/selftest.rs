//! Invariant suite run by the command-line `selftest`.
//!
//! Every property draws its instances from a fixed ChaCha seed and checks an
//! exact identity, so a run is deterministic and finishes in seconds.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cfun::{expectation, integrate, pullback, pullback_phi, FiberFunction, OrbitFunction};
use crate::ffenum::forms::{binary_is_squarefree, binary_squarefree_by_scan, form_count, Form};
use crate::ffenum::transversal::ci_pair_transversal_by_scan;
use crate::ffenum::{ci_pair_is_transversal, germ_census, hirzebruch_case_formulas, hirzebruch_census, FieldTower};
use crate::mep::{
    character_fraction_check, ci_lfunction_transform, exp_h1, family_series, ghost_classical, product, product_to_point,
    BaseClass, Family, FamilySpec, Variant,
};
use crate::{Basis, Partition, Scalar, Sym, SymSeries, WittVec, ZMap, ZSet};

/// Outcome of one property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    ok.then_some(()).ok_or_else(msg)
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn witt(r: &mut ChaCha8Rng, prec: usize) -> WittVec {
    WittVec::from_fn(prec, |_| Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=2)))
}

fn degrees(r: &mut ChaCha8Rng, orbits: usize, max: usize, sectioned: bool) -> Vec<usize> {
    let mut v: Vec<usize> = (0..r.gen_range(1..=orbits)).map(|_| r.gen_range(1..=max)).collect();
    v.sort_unstable();
    if sectioned {
        v[0] = 1;
    }
    v
}

fn series(r: &mut ChaCha8Rng, n: usize, prec: usize) -> SymSeries {
    let parts = Partition::up_to(n);
    let mut s = SymSeries::zero(n, prec);
    for _ in 0..r.gen_range(1..=3) {
        s.add_term(parts[r.gen_range(1..parts.len())].clone(), witt(r, prec));
    }
    s
}

fn h_series(r: &mut ChaCha8Rng, n: usize, prec: usize) -> SymSeries {
    let mut c = BTreeMap::new();
    c.insert(Partition::empty(), WittVec::unit(prec));
    for j in 1..=n {
        c.insert(Partition::single(j as u32), witt(r, prec));
    }
    Sym::from_basis(n, prec, Basis::H, &c)
}

fn exp_log() -> Check {
    let (n, k) = (5, 5);
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (f, g) = (series(&mut r, n, n * k), series(&mut r, n, n * k));
        let ef = f.exp_sigma().map_err(err)?;
        ensure(ef.log_sigma().map_err(err)?.equal_to_precision(&f, k), || "Log(Exp f) != f".into())?;
        let lhs = f.add(&g).exp_sigma().map_err(err)?;
        ensure(lhs.equal_to_precision(&ef.mul(&g.exp_sigma().map_err(err)?), k), || "Exp not additive".into())?;
    }
    Ok("20 pairs at (5,5)".into())
}

fn classical_products() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let v = ZSet::from_degrees(&degrees(&mut r, 4, 4, false));
        let (n, k) = (r.gen_range(1..=4), r.gen_range(1..=3));
        let vals = (0..v.orbit_count().map_err(err)?).map(|_| h_series(&mut r, n, 4 * n)).collect();
        let h = OrbitFunction::per_orbit(v, vals).map_err(err)?;
        let direct = product_to_point(&h).and_then(|p| p.ghost_slice(k)).map_err(err)?;
        for variant in [Variant::Extended, Variant::Gcd] {
            ensure(direct.sub(&ghost_classical(&h, k, variant).map_err(err)?).is_zero(), || format!("{variant:?} differs"))?;
        }
    }
    Ok("20 random sets".into())
}

fn constant_product() -> Check {
    let (n, k) = (3, 3);
    let prec = 4 * n * k;
    let mut r = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let v = ZSet::from_degrees(&degrees(&mut r, 4, 4, false));
        let h = h_series(&mut r, n, prec);
        let map = ZMap::to_point(v.clone());
        let constant = pullback(&map, &OrbitFunction::constant(ZSet::point(), h.clone())).map_err(err)?;
        let lhs = product(&map, &constant).map_err(err)?;
        let rhs = h.power(&v.class(prec).map_err(err)?).map_err(err)?;
        ensure(lhs.value(0).map_err(err)?.equal_to_precision(&rhs, k), || "product != H^[V]".into())?;
    }
    Ok("10 random sets".into())
}

fn base_change() -> Check {
    let (n, prec) = (2, 12);
    let mut r = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let base = degrees(&mut r, 3, 3, false);
        let fibers = base.iter().map(|_| ZSet::from_degrees(&degrees(&mut r, 2, 3, true))).collect();
        let map = ZMap::new(ZSet::from_degrees(&base), fibers).map_err(err)?;
        let psi_fibers = base.iter().map(|_| ZSet::from_degrees(&degrees(&mut r, 2, 2, true))).collect();
        let psi = ZMap::new(map.base().clone(), psi_fibers).map_err(err)?;
        let sq = map.base_change(&psi).map_err(err)?;
        let h = FiberFunction::from_fn(&map, |_| h_series(&mut r, n, prec)).map_err(err)?;
        let lhs = pullback(&psi, &product(&map, &h).map_err(err)?).and_then(|f| f.to_total(&psi)).map_err(err)?;
        let rhs = product(&sq.map, &pullback_phi(&sq, &h).map_err(err)?).map_err(err)?;
        let x = FiberFunction::from_fn(&map, |_| witt(&mut r, prec)).map_err(err)?;
        let le = pullback(&psi, &expectation(&map, &x).map_err(err)?).and_then(|f| f.to_total(&psi)).map_err(err)?;
        let re = expectation(&sq.map, &pullback_phi(&sq, &x).map_err(err)?).map_err(err)?;
        for c in 0..rhs.domain().orbit_count().map_err(err)? {
            ensure(lhs.value(c).map_err(err)?.equal_to_precision(rhs.value(c).map_err(err)?, prec / (n * 3)), || {
                "product does not commute with base change".into()
            })?;
            ensure(le.value(c).map_err(err)?.agrees_with(re.value(c).map_err(err)?), || "expectation pullback".into())?;
        }
    }
    Ok("10 random squares".into())
}

fn pipeline() -> Check {
    let (n, k) = (4, 4);
    let mut r = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..10 {
        let v = ZSet::from_degrees(&degrees(&mut r, 3, 3, false));
        let b = ZSet::from_degrees(&degrees(&mut r, 2, 2, false));
        let map = ZMap::product_projection(&b, &v).map_err(err)?;
        let x = FiberFunction::from_fn(&map, |_| witt(&mut r, n * k)).map_err(err)?;
        let lhs = integrate(&map, &x).and_then(|f| f.try_map(|w| exp_h1(w, n))).map_err(err)?;
        let rhs = x.try_map(|w| exp_h1(w, n)).and_then(|f| product(&map, &f)).map_err(err)?;
        for c in 0..lhs.domain().orbit_count().map_err(err)? {
            ensure(lhs.value(c).map_err(err)?.equal_to_precision(rhs.value(c).map_err(err)?, k), || "pipeline".into())?;
        }
    }
    Ok("10 random families at (4,4)".into())
}

fn negation() -> Check {
    let (n, k) = (6, 6);
    for i in 0..10i64 {
        let x = WittVec::from_fn(n * k, |j| Scalar::from_ratio(i * 3 - j as i64, 1 + i % 3));
        let lhs = exp_h1(&x, n).and_then(|e| e.negate_distribution()).map_err(err)?;
        ensure(lhs.equal_to_precision(&exp_h1(&x.neg(), n).map_err(err)?, k), || format!("atom {i}"))?;
    }
    Ok("10 atoms at (6,6)".into())
}

fn lfunction_routes() -> Check {
    for (q, m, r, dim) in [(2u64, 0u32, 2u32, 2u32), (3, 1, 1, 2)] {
        let mut spec = FamilySpec::new(Family::CiLfunction, q, 4, 4);
        spec.m = m;
        spec.r = r;
        spec.base = BaseClass::Projective(dim);
        let direct = family_series(&spec).map_err(err)?;
        ensure(direct.equal_to_precision(&ci_lfunction_transform(&spec).map_err(err)?, 4), || format!("q={q}, m={m}"))?;
    }
    Ok("direct and transformed routes agree".into())
}

fn censuses() -> Check {
    ensure(germ_census(2, 0, 2, 1 << 20).map_err(err)? == (6, 54), || "CI germ census at q=2".into())?;
    ensure(germ_census(2, 0, 1, 1 << 20).map_err(err)? == (1, 3), || "hypersurface germ census".into())?;
    let (census, _) = character_fraction_check(3, 2).map_err(err)?;
    ensure(census == num_rational::BigRational::new(3.into(), 4.into()), || "character census".into())?;
    for q in [2, 3] {
        ensure(hirzebruch_census(q, 1, 1 << 24).map_err(err)? == hirzebruch_case_formulas(q), || format!("Hirzebruch at q={q}"))?;
    }
    Ok("germ, character and Hirzebruch censuses".into())
}

fn enumeration() -> Check {
    ensure(form_count(2, 1, 1, u64::MAX).map_err(err)? == 4, || "binary linear forms".into())?;
    ensure(form_count(3, 1, 2, u64::MAX).map_err(err)? == 27, || "binary quadratics".into())?;
    let tower = FieldTower::new(3).map_err(err)?;
    let mut r = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let c: Vec<u32> = (0..r.gen_range(2..6)).map(|_| r.gen_range(0..3)).collect();
        ensure(binary_is_squarefree(&tower.base, &c) == binary_squarefree_by_scan(&tower, &c).map_err(err)?, || {
            format!("squarefree test disagrees on {c:?}")
        })?;
    }
    let tower = FieldTower::new(2).map_err(err)?;
    for _ in 0..30 {
        let a = Form::new(2, 1, (0..3).map(|_| r.gen_range(0..2)).collect()).map_err(err)?;
        let b = Form::new(2, 2, (0..6).map(|_| r.gen_range(0..2)).collect()).map_err(err)?;
        let fast = ci_pair_is_transversal(&tower, &a, &b).map_err(err)?;
        ensure(fast == ci_pair_transversal_by_scan(&tower, &a, &b, 1 << 20).map_err(err)?, || "transversality".into())?;
    }
    Ok("form counts, squarefree and transversality cross-checks".into())
}

/// Run every property in a fixed order.
pub fn run() -> Vec<PropertyResult> {
    let props: [(&'static str, fn() -> Check); 10] = [
        ("exp_log_round_trip", exp_log),
        ("classical_euler_products", classical_products),
        ("constant_product_is_power", constant_product),
        ("base_change_and_expectation", base_change),
        ("pipeline_identity", pipeline),
        ("negation_transform", negation),
        ("lfunction_two_routes", lfunction_routes),
        ("germ_censuses", censuses),
        ("finite_field_enumeration", enumeration),
        ("hypersurface_mean", hypersurface_mean),
    ];
    props
        .into_iter()
        .map(|(name, f)| match f() {
            Ok(detail) => PropertyResult { name, pass: true, detail },
            Err(detail) => PropertyResult { name, pass: false, detail },
        })
        .collect()
}

fn hypersurface_mean() -> Check {
    use crate::ffenum::{empirical_mgf, SampleFamily, SampleSpec};
    let report = empirical_mgf(&SampleSpec::new(SampleFamily::BinaryForms { d: 10 }, 2, 2)).map_err(err)?;
    let theory = family_series(&FamilySpec::new(Family::SmoothHypersurface, 2, 2, 1)).map_err(err)?;
    let dev = report.deviation(&theory).map_err(err)?;
    ensure(dev.max <= 0.1, || format!("max deviation {}", dev.max))?;
    Ok(format!("d=10 over F_2, max deviation {:.4}", dev.max))
}
