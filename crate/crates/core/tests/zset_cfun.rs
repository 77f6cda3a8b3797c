use lambda_euler::cfun::{
    expectation, expectation_ghost, expectation_to_point, integrate, integrate_to_point, pullback, pullback_phi,
    restrict_fibered, FiberFunction, OrbitFunction,
};
use lambda_euler::{Scalar, WittVec, ZMap, ZSet};
use num_bigint::BigUint;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

fn counts(v: &ZSet) -> Vec<u64> {
    v.counts().iter().map(|c| c.try_into().unwrap()).collect()
}

/// Explicit permutation model: a cycle of length `d` for every orbit.
fn permutation(degrees: &[usize]) -> Vec<usize> {
    let mut perm = Vec::new();
    for &d in degrees {
        let start = perm.len();
        for i in 0..d {
            perm.push(start + (i + 1) % d);
        }
    }
    perm
}

fn power(perm: &[usize], k: usize) -> Vec<usize> {
    (0..perm.len())
        .map(|mut x| {
            for _ in 0..k {
                x = perm[x];
            }
            x
        })
        .collect()
}

fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let (mut x, mut len) = (s, 0);
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

fn teich(c: i64, k: usize) -> WittVec {
    WittVec::teichmuller(&Scalar::from_int(c), k)
}

#[test]
fn class_examples() {
    let two = ZSet::from_degrees(&[2]);
    assert_eq!(two.class(4).unwrap().ghosts(), ints(&[0, 2, 0, 2]).as_slice());
    assert_eq!(two.class(4).unwrap(), WittVec::unit(2).substitute(2));
    assert_eq!(ZSet::point().class(5).unwrap(), WittVec::unit(5));
    let p1 = ZSet::projective_space(2, 1, 4);
    assert_eq!(counts(&p1), vec![3, 1, 2, 3]);
    assert_eq!(p1.class(4).unwrap().ghosts(), ints(&[3, 5, 9, 17]).as_slice());
    assert!(p1.class(5).is_err());
}

#[test]
fn extension_examples() {
    assert_eq!(counts(&ZSet::from_degrees(&[6]).extend(4)), vec![0, 0, 2]);
    let v = ZSet::from_degrees(&[1, 2, 2, 3]);
    assert_eq!(v.extend(1), v);
    let p1 = ZSet::projective_space(2, 1, 8);
    let p1_4 = ZSet::projective_space(4, 1, 4);
    assert_eq!(p1.extend(2).counts(), p1_4.counts());
    assert_eq!(p1.extend(2).count(1).unwrap(), BigUint::from(5u32));
}

#[test]
fn projective_space_examples() {
    assert_eq!(counts(&ZSet::projective_space(2, 0, 4)), vec![1, 0, 0, 0]);
    assert_eq!(counts(&ZSet::projective_space(3, 1, 2)), vec![4, 3]);
    // P^2 over F_2: 7 points; degree-2 orbits (21 - 7)/2 = 7
    assert_eq!(counts(&ZSet::projective_space(2, 2, 2)), vec![7, 7]);
}

#[test]
fn fiber_examples() {
    let v = ZSet::from_degrees(&[1, 2, 6]);
    let k = ZSet::from_degrees(&[3]);
    let proj = ZMap::product_projection(&v, &k).unwrap();
    assert_eq!(proj.fiber(0).unwrap(), &v.extend(3));
    assert!(proj.fiber(1).is_err());
    let id = ZMap::identity(&v).unwrap();
    assert!(id.fibers().iter().all(|f| f == &ZSet::point()));
    // total orbit of degree 6 over a degree-2 base orbit has fiber degree 3
    let m = ZMap::new(ZSet::from_degrees(&[2]), vec![ZSet::from_degrees(&[3])]).unwrap();
    let (total, _) = m.total().unwrap();
    assert_eq!(total.orbit_degrees().unwrap(), vec![6]);
}

#[test]
fn origins_follow_canonical_order() {
    let v = ZSet::from_degrees(&[1, 2, 4]);
    let (ext, origin) = v.extend_with_origins(2).unwrap();
    assert_eq!(ext.orbit_degrees().unwrap(), vec![1, 1, 1, 2, 2]);
    assert_eq!(origin, vec![0, 1, 1, 2, 2]);
}

fn random_zset() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=4, 1..=5).prop_map(|mut v| {
        v.sort_unstable();
        v
    })
}

fn random_witt(p: usize) -> impl Strategy<Value = WittVec> {
    prop::collection::vec(-5i64..=5, p).prop_map(|g| WittVec::from_ghost(ints(&g)).unwrap())
}

/// Fibers containing a degree-1 orbit have invertible classes.
fn sectioned_zset() -> impl Strategy<Value = Vec<usize>> {
    random_zset().prop_map(|mut v| {
        v[0] = 1;
        v
    })
}

fn random_map() -> impl Strategy<Value = ZMap> {
    random_zset().prop_flat_map(|base| {
        let n = base.len();
        prop::collection::vec(sectioned_zset(), n).prop_map(move |fibers| {
            ZMap::new(ZSet::from_degrees(&base), fibers.iter().map(|f| ZSet::from_degrees(f)).collect()).unwrap()
        })
    })
}

fn random_fiber_function(map: &ZMap, seed: &[i64]) -> FiberFunction {
    let mut i = 0;
    FiberFunction::from_fn(map, |_| {
        let g: Vec<i64> = (0..24).map(|j| seed[(i * 7 + j) % seed.len()] + (j as i64 % 3)).collect();
        i += 1;
        WittVec::from_ghost(ints(&g)).unwrap()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_matches_permutation_power(deg in random_zset(), k in 1usize..=6) {
        let v = ZSet::from_degrees(&deg);
        let perm = permutation(&deg);
        let expected = ZSet::from_degrees(&cycle_lengths(&power(&perm, k)));
        prop_assert_eq!(v.extend(k), expected);
        let cv = v.class(24).unwrap();
        let ce = v.extend(k).class(24 / k).unwrap();
        for j in 1..=24 / k {
            prop_assert_eq!(ce.ghost(j).unwrap(), cv.ghost(k * j).unwrap());
        }
    }

    #[test]
    fn product_matches_permutation_model(a in random_zset(), b in random_zset()) {
        let (pa, pb) = (permutation(&a), permutation(&b));
        let n = pb.len();
        let prod: Vec<usize> = (0..pa.len() * n).map(|x| pa[x / n] * n + pb[x % n]).collect();
        let va = ZSet::from_degrees(&a);
        let vb = ZSet::from_degrees(&b);
        let p = va.product(&vb).unwrap();
        prop_assert_eq!(&p, &ZSet::from_degrees(&cycle_lengths(&prod)));
        prop_assert_eq!(p.class(12).unwrap(), va.class(12).unwrap().mul(&vb.class(12).unwrap()));
        let lcm = 12;
        let total: usize = p.orbit_degrees().unwrap().iter().sum();
        prop_assert_eq!(BigUint::from(total), p.fixed_points(lcm).unwrap());
    }

    #[test]
    fn projection_formula(map in random_map(), seed in prop::collection::vec(-4i64..=4, 13), gs in prop::collection::vec(random_witt(24), 5)) {
        let f = random_fiber_function(&map, &seed);
        let n = map.base().orbit_count().unwrap();
        let g = OrbitFunction::per_orbit(map.base().clone(), gs[..n].to_vec()).unwrap();
        let lhs = integrate(&map, &f.mul(&pullback(&map, &g).unwrap()).unwrap()).unwrap();
        let rhs = integrate(&map, &f).unwrap().mul(&g).unwrap();
        for b in 0..n {
            prop_assert!(lhs.value(b).unwrap().agrees_with(rhs.value(b).unwrap()));
        }
    }

    #[test]
    fn base_change_and_expectation_pullback(map in random_map(), seed in prop::collection::vec(-4i64..=4, 11), psi_fibers in prop::collection::vec(sectioned_zset(), 5)) {
        let n = map.base().orbit_count().unwrap();
        let psi = ZMap::new(map.base().clone(), psi_fibers[..n].iter().map(|f| ZSet::from_degrees(f)).collect()).unwrap();
        let sq = map.base_change(&psi).unwrap();
        let f = random_fiber_function(&map, &seed);
        let lhs = pullback(&psi, &integrate(&map, &f).unwrap()).unwrap().to_total(&psi).unwrap();
        let phi_f = pullback_phi(&sq, &f).unwrap();
        let rhs = integrate(&sq.map, &phi_f).unwrap();
        prop_assert_eq!(lhs.domain(), rhs.domain());
        for c in 0..rhs.domain().orbit_count().unwrap() {
            prop_assert!(lhs.value(c).unwrap().agrees_with(rhs.value(c).unwrap()));
        }
        let le = pullback(&psi, &expectation(&map, &f).unwrap()).unwrap().to_total(&psi).unwrap();
        let re = expectation(&sq.map, &phi_f).unwrap();
        for c in 0..re.domain().orbit_count().unwrap() {
            prop_assert!(le.value(c).unwrap().agrees_with(re.value(c).unwrap()));
        }
    }

    #[test]
    fn family_extension(map in random_map(), seed in prop::collection::vec(-4i64..=4, 17), k in 1usize..=4) {
        let f = random_fiber_function(&map, &seed);
        let e = expectation(&map, &f).unwrap();
        let ext = map.extend(k).unwrap();
        let lhs = e.restrict(k).unwrap();
        let rhs = expectation(&ext.map, &restrict_fibered(&map, &ext, &f, k).unwrap()).unwrap();
        prop_assert_eq!(lhs.domain(), rhs.domain());
        for c in 0..lhs.domain().orbit_count().unwrap() {
            prop_assert!(lhs.value(c).unwrap().agrees_with(rhs.value(c).unwrap()));
        }
    }

    #[test]
    fn ghost_expectation_is_ghost_of_expectation(deg in sectioned_zset(), vals in prop::collection::vec(random_witt(12), 5), k in 1usize..=4) {
        let v = ZSet::from_degrees(&deg);
        let f = OrbitFunction::per_orbit(v.clone(), vals[..deg.len()].to_vec()).unwrap();
        let e = expectation_to_point(&f).unwrap();
        prop_assert_eq!(&expectation_ghost(&f, k).unwrap(), e.ghost(k).unwrap());
        // point-level census: every point of an orbit of degree d | k contributes ghost_{k/d}
        let mut total = Scalar::zero();
        let mut count = 0i64;
        for (i, &d) in deg.iter().enumerate() {
            if k % d == 0 {
                for _ in 0..d {
                    total += f.value(i).unwrap().ghost(k / d).unwrap();
                    count += 1;
                }
            }
        }
        prop_assert_eq!(expectation_ghost(&f, k).unwrap(), total.scale(&num_rational::BigRational::new(1.into(), count.into())));
    }

    #[test]
    fn integration_is_linear(deg in random_zset(), a in prop::collection::vec(random_witt(12), 5), b in prop::collection::vec(random_witt(12), 5)) {
        let v = ZSet::from_degrees(&deg);
        let n = deg.len();
        let fa = OrbitFunction::per_orbit(v.clone(), a[..n].to_vec()).unwrap();
        let fb = OrbitFunction::per_orbit(v.clone(), b[..n].to_vec()).unwrap();
        let sum = integrate_to_point(&fa.add(&fb).unwrap()).unwrap();
        let parts = integrate_to_point(&fa).unwrap().add(&integrate_to_point(&fb).unwrap());
        prop_assert!(sum.agrees_with(&parts));
    }
}

#[test]
fn pullback_examples() {
    let base = ZSet::from_degrees(&[2]);
    let map = ZMap::new(base.clone(), vec![ZSet::from_degrees(&[2])]).unwrap();
    let g = OrbitFunction::per_orbit(base.clone(), vec![teich(3, 8)]).unwrap();
    let pulled = pullback(&map, &g).unwrap();
    assert_eq!(pulled.part(0).unwrap().value(0).unwrap(), &teich(9, 4));
    let id = ZMap::identity(&base).unwrap();
    assert_eq!(pullback(&id, &g).unwrap().to_total(&id).unwrap(), g);
}

#[test]
fn integration_examples() {
    let v = ZSet::from_degrees(&[1, 1, 3]);
    let one = OrbitFunction::constant(v.clone(), WittVec::unit(9));
    assert!(integrate_to_point(&one).unwrap().agrees_with(&v.class(9).unwrap()));
    let single = ZSet::from_degrees(&[3]);
    let w = WittVec::from_ghost(ints(&[2, -1, 5])).unwrap();
    let f = OrbitFunction::per_orbit(single, vec![w.clone()]).unwrap();
    assert_eq!(integrate_to_point(&f).unwrap(), w.substitute(3));
    // infinite fiber: integral of 1 over P^1 is its class up to the cap
    let p1 = ZSet::projective_space(2, 1, 6);
    let one = OrbitFunction::constant(p1.clone(), WittVec::unit(6));
    assert_eq!(integrate_to_point(&one).unwrap(), p1.class(6).unwrap());
}

#[test]
fn restriction_examples() {
    let v = ZSet::from_degrees(&[2]);
    let w = WittVec::from_ghost(ints(&[1, 2, 3, 4, 5, 6, 7, 8])).unwrap();
    let f = OrbitFunction::per_orbit(v.clone(), vec![w.clone()]).unwrap();
    assert_eq!(f.restrict(1).unwrap(), f);
    let r4 = f.restrict(4).unwrap();
    assert_eq!(r4.domain().orbit_degrees().unwrap(), vec![1, 1]);
    assert_eq!(r4.value(0).unwrap(), &w.adams(2).unwrap());
    let r2 = f.restrict(2).unwrap();
    assert_eq!(r2.value(1).unwrap(), &w);
    // degree-uniform restriction on an infinite set stays uniform when degrees do not mix
    let p1 = ZSet::projective_space(2, 1, 8);
    let u = OrbitFunction::uniform(p1, (1..=8).map(|d| teich(d as i64, 8)).collect()).unwrap();
    assert!(u.restrict(2).is_err());
    let pulled = OrbitFunction::uniform(ZSet::projective_space(2, 1, 8), (1..=8u32).map(|d| teich(3i64.pow(d), 8 / d as usize)).collect()).unwrap();
    let rc = pulled.restrict(2).unwrap();
    assert_eq!(rc.value_at_degree(1).unwrap(), &teich(9, 4));
    let c = OrbitFunction::constant(ZSet::projective_space(2, 1, 8), teich(3, 8));
    assert!(c.restrict(2).is_err());
}

#[test]
fn expectation_examples() {
    let v = ZSet::from_degrees(&[1, 1]);
    let one = OrbitFunction::constant(v.clone(), WittVec::unit(6));
    assert_eq!(expectation_to_point(&one).unwrap(), WittVec::unit(6));
    let f = OrbitFunction::per_orbit(v.clone(), vec![teich(2, 6), teich(4, 6)]).unwrap();
    assert_eq!(expectation_to_point(&f).unwrap().ghost(1).unwrap(), &Scalar::from_int(3));
    // [c] pulled back from the point gives c^k
    let to_point = ZMap::to_point(ZSet::from_degrees(&[1, 2, 3]));
    let g = OrbitFunction::per_orbit(ZSet::point(), vec![teich(5, 12)]).unwrap();
    let c = pullback(&to_point, &g).unwrap().part(0).unwrap().clone();
    assert_eq!(expectation_ghost(&c, 3).unwrap(), Scalar::from_int(125));
    // a literally constant function weighs each fixed point by its own degree
    let c = OrbitFunction::constant(ZSet::from_degrees(&[1, 2, 3]), teich(5, 6));
    assert_eq!(expectation_ghost(&c, 3).unwrap(), Scalar::from_int((125 + 3 * 5) / 4));
    // degrees (1,2) with values [1],[2] at k=2: fixed points 1 + 2, values 1, 2, 2
    let f = OrbitFunction::per_orbit(ZSet::from_degrees(&[1, 2]), vec![teich(1, 4), teich(2, 4)]).unwrap();
    assert_eq!(expectation_ghost(&f, 2).unwrap(), Scalar::from_ratio(5, 3));
    // a fiber with no fixed points at some degree has a non-invertible class
    let map = ZMap::new(ZSet::point(), vec![ZSet::from_degrees(&[2])]).unwrap();
    let g = FiberFunction::from_fn(&map, |_| WittVec::unit(4)).unwrap();
    assert!(expectation(&map, &g).is_err());
    assert!(expectation_ghost(&OrbitFunction::constant(ZSet::from_degrees(&[2]), WittVec::unit(4)), 1).is_err());
}
