use lambda_euler::ffenum::census::rank;
use lambda_euler::ffenum::forms::{self, binary_is_squarefree, binary_squarefree_by_scan, form_count, plane_curve_is_smooth};
use lambda_euler::ffenum::gf::{field, FieldTower};
use lambda_euler::ffenum::poly;
use lambda_euler::ffenum::transversal::{ci_pair_is_transversal, ci_pair_transversal_by_scan};
use lambda_euler::ffenum::{
    char_l_ghost, empirical_mgf, forms_zeta_ghost, germ_census, hirzebruch_case_formulas, hirzebruch_census, Form,
    PowerFree, SampleFamily, SampleSpec, Sampling,
};
use lambda_euler::{Partition, Scalar, WittVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

/// Coefficient vector of a form given as `(coefficient, exponents)` terms.
fn form(n: usize, d: u32, terms: &[(u32, &[u32])]) -> Form {
    let mons = forms::monomials(n, d);
    let mut c = vec![0u32; mons.len()];
    for (coef, e) in terms {
        let i = mons.iter().position(|m| m.as_slice() == *e).unwrap();
        c[i] = *coef;
    }
    Form::new(n, d, c).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(pn in prop::sample::select(vec![(2u32, 1u32), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 2)]),
                    a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let k = field(pn.0, pn.1).unwrap();
        let (a, b, c) = (a % k.size(), b % k.size(), c % k.size());
        prop_assert_eq!(k.add(a, b), k.add(b, a));
        prop_assert_eq!(k.mul(a, b), k.mul(b, a));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), 0);
        prop_assert_eq!(k.sub(k.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
        }
        // Frobenius is additive
        prop_assert_eq!(k.frobenius(k.add(a, b), 1), k.add(k.frobenius(a, 1), k.frobenius(b, 1)));
    }

    #[test]
    fn embeddings_are_ring_maps(a in 0u32..64, b in 0u32..64) {
        let tower = FieldTower::new(4).unwrap();
        let small = &tower.base;
        let big = tower.extension(3).unwrap();
        let emb = tower.embed(3).unwrap();
        let (a, b) = (a % small.size(), b % small.size());
        prop_assert_eq!(emb[small.add(a, b) as usize], big.add(emb[a as usize], emb[b as usize]));
        prop_assert_eq!(emb[small.mul(a, b) as usize], big.mul(emb[a as usize], emb[b as usize]));
    }

    #[test]
    fn squarefree_agrees_with_root_scan(q in prop::sample::select(vec![2u64, 3, 4]), raw in prop::collection::vec(0u32..4, 2..6)) {
        let tower = FieldTower::new(q).unwrap();
        let coeffs: Vec<u32> = raw.iter().map(|c| c % q as u32).collect();
        prop_assert_eq!(binary_is_squarefree(&tower.base, &coeffs), binary_squarefree_by_scan(&tower, &coeffs).unwrap());
    }

    #[test]
    fn transversality_agrees_with_point_scan(q in prop::sample::select(vec![2u64, 3]), degrees in prop::sample::select(vec![(1u32, 1u32), (1, 2), (2, 2)]),
                                              raw in prop::collection::vec(0u32..3, 12)) {
        let tower = FieldTower::new(q).unwrap();
        let m1 = forms::monomials(2, degrees.0).len();
        let m2 = forms::monomials(2, degrees.1).len();
        let c: Vec<u32> = raw.iter().map(|x| x % q as u32).collect();
        let f1 = Form::new(2, degrees.0, c[..m1].to_vec()).unwrap();
        let f2 = Form::new(2, degrees.1, c[m1..m1 + m2].to_vec()).unwrap();
        prop_assert_eq!(
            ci_pair_is_transversal(&tower, &f1, &f2).unwrap(),
            ci_pair_transversal_by_scan(&tower, &f1, &f2, 1 << 22).unwrap()
        );
    }
}

#[test]
fn form_counts() {
    assert_eq!(form_count(2, 1, 1, u64::MAX).unwrap(), 4);
    assert_eq!(form_count(3, 1, 2, u64::MAX).unwrap(), 27);
    assert!(form_count(3, 2, 4, 1000).is_err());
    let k = field(3, 1).unwrap();
    let monic_squarefree = (0..9).filter(|i| poly::is_squarefree(&k, &[i % 3, i / 3, 1])).count();
    assert_eq!(monic_squarefree, 6);
}

#[test]
fn zeta_ghosts_count_points() {
    let t2 = FieldTower::new(2).unwrap();
    let origin = form(1, 1, &[(1, &[1, 0])]);
    assert_eq!(forms_zeta_ghost(&t2, &[origin], 3).unwrap(), WittVec::from_ghost(ints(&[1, 1, 1])).unwrap());
    // x0 x2 - x1^2 over F_2
    let conic = form(2, 2, &[(1, &[1, 0, 1]), (1, &[0, 2, 0])]);
    assert_eq!(forms_zeta_ghost(&t2, &[conic], 3).unwrap(), WittVec::from_ghost(ints(&[3, 5, 9])).unwrap());
}

#[test]
fn character_sums() {
    let tower = FieldTower::new(3).unwrap();
    let x = char_l_ghost(&tower, &[0, 1], 2, 3, PowerFree::Squarefree).unwrap();
    assert!(x.ghost(1).unwrap().is_zero());
    let one = char_l_ghost(&tower, &[1], 2, 3, PowerFree::Squarefree).unwrap();
    assert_eq!(one, WittVec::from_ghost(ints(&[3, 9, 27])).unwrap());
    assert!(char_l_ghost(&tower, &[0, 0, 1], 2, 2, PowerFree::Squarefree).is_err());
    assert!(char_l_ghost(&tower, &[1, 1], 3, 2, PowerFree::Squarefree).is_err());
}

/// `prod_x (1 - chi(N f(x)) T^{deg x})^{-1}` over the closed points of the
/// affine line, read off from roots in `F_{Q^e}` and norms down to `F_Q`.
fn closed_point_l_series(q: u64, f: &[u32], k: usize) -> Vec<BigRational> {
    let tower = FieldTower::new(q).unwrap();
    let mut series = vec![BigRational::zero(); k + 1];
    series[0] = BigRational::one();
    for e in 1..=k as u32 {
        let big = tower.extension(e).unwrap();
        let g = poly::map_coeffs(f, &tower.embed(e).unwrap());
        let size = big.size() as u64;
        let mut seen = std::collections::BTreeSet::new();
        for alpha in big.elements() {
            let orbit: Vec<u32> = (0..e).map(|j| big.pow(alpha, q.pow(j))).collect();
            if orbit.iter().skip(1).any(|&b| b == alpha) || !seen.insert(*orbit.iter().min().unwrap()) {
                continue;
            }
            let v = poly::eval(&big, &g, alpha);
            let norm = big.pow(v, (size - 1) / (q - 1));
            // quadratic character on F_Q: norm^{(Q-1)/2} in {0, 1, -1}
            let chi = if norm == 0 {
                0
            } else if big.pow(norm, (q - 1) / 2) == 1 {
                1
            } else {
                -1
            };
            if chi == 0 {
                continue;
            }
            // multiply by 1/(1 - chi T^e) = sum_m chi^m T^{em}
            let mut next = series.clone();
            for i in 0..=k {
                let mut m = 1;
                while i + m * e as usize <= k {
                    let c = BigRational::from_integer(BigInt::from(if chi == 1 { 1 } else { (-1i64).pow(m as u32) }));
                    next[i + m * e as usize] += &series[i] * c;
                    m += 1;
                }
            }
            series = next;
        }
    }
    series
}

#[test]
fn character_l_function_is_a_short_polynomial() {
    let tower = FieldTower::new(3).unwrap();
    let k = 6;
    for f in [vec![1u32, 2, 0, 1], vec![2, 1, 1], vec![0, 1, 0, 1], vec![1, 2, 0, 1, 1]] {
        let d = f.len() - 1;
        let ghosts = char_l_ghost(&tower, &f, 2, k, PowerFree::Squarefree).unwrap();
        let newton: Vec<BigRational> = ghosts.to_series().iter().map(|c| c.as_rational().unwrap().clone()).collect();
        let oracle = closed_point_l_series(3, &f, k);
        assert_eq!(newton, oracle[1..].to_vec(), "f = {f:?}");
        assert!(newton[d - 1..].iter().all(Zero::is_zero), "degree of L exceeds d - 1 for {f:?}");
    }
}

#[test]
fn fermat_cubic_is_smooth() {
    let tower = FieldTower::new(2).unwrap();
    let fermat = form(2, 3, &[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3])]);
    assert!(plane_curve_is_smooth(&tower, &fermat, 1 << 22).unwrap());
    // a nodal cubic x0 x1 x2 + x1^3 + x2^3 is singular at [1:0:0]
    let nodal = form(2, 3, &[(1, &[1, 1, 1]), (1, &[0, 3, 0]), (1, &[0, 0, 3])]);
    assert!(!plane_curve_is_smooth(&tower, &nodal, 1 << 22).unwrap());
}

#[test]
fn tangent_pair_is_rejected() {
    let tower = FieldTower::new(3).unwrap();
    let conic = form(2, 2, &[(1, &[1, 0, 1]), (2, &[0, 2, 0])]);
    let tangent = form(2, 1, &[(1, &[0, 0, 1])]);
    let secant = form(2, 1, &[(1, &[0, 1, 0])]);
    assert!(!ci_pair_is_transversal(&tower, &conic, &tangent).unwrap());
    assert!(!ci_pair_transversal_by_scan(&tower, &conic, &tangent, 1 << 20).unwrap());
    assert!(ci_pair_is_transversal(&tower, &conic, &secant).unwrap());
    assert!(!ci_pair_is_transversal(&tower, &conic, &conic).unwrap());
}

#[test]
fn germ_censuses() {
    assert_eq!(germ_census(2, 0, 1, 1 << 20).unwrap(), (1, 3));
    assert_eq!(germ_census(2, 0, 2, 1 << 20).unwrap(), (6, 54));
    assert_eq!(germ_census(3, 1, 1, 1 << 20).unwrap(), (8, 26));
    let k = field(3, 1).unwrap();
    assert_eq!(rank(&k, vec![vec![1, 2], vec![2, 1]]), 1);
}

#[test]
fn hirzebruch_census_matches_case_formulas() {
    assert_eq!(hirzebruch_census(2, 1, 1 << 20).unwrap(), hirzebruch_case_formulas(2));
    assert_eq!(hirzebruch_census(3, 1, 1 << 20).unwrap(), hirzebruch_case_formulas(3));
    assert_eq!(hirzebruch_census(2, 2, 1 << 20).unwrap(), hirzebruch_case_formulas(4));
    let c = hirzebruch_case_formulas(2);
    assert_eq!((c.square, c.split, c.irreducible, c.total), (12, 24, 8, 44));
}

#[test]
fn character_sample_space() {
    let spec = SampleSpec::new(SampleFamily::Character { d: 2, ell: 2, free: PowerFree::Squarefree }, 3, 2);
    let report = empirical_mgf(&spec).unwrap();
    assert_eq!(report.enumerated, 9);
    assert_eq!(report.admissible, 6);
}

#[test]
fn hypersurface_point_count_mean() {
    let spec = SampleSpec::new(SampleFamily::BinaryForms { d: 10 }, 2, 2);
    let report = empirical_mgf(&spec).unwrap();
    let mean = &report.means[&Partition::single(1)];
    assert!((mean.abs_f64() - 1.0).abs() < 0.1, "mean {}", mean.decimal());
    // m_(1) is the mean point count, checked against a direct scan
    let tower = FieldTower::new(2).unwrap();
    let (mut total, mut count) = (0u64, 0u64);
    for c in forms::enumerate_forms(2, 1, 10, u64::MAX).unwrap().filter(|c| forms::is_normalized(c)) {
        if binary_is_squarefree(&tower.base, &c) {
            count += 1;
            total += forms::binary_point_count(&tower.base, &c, &(0..2).collect::<Vec<u32>>());
        }
    }
    assert_eq!(report.admissible, count);
    assert_eq!(mean, &Scalar::from_rational(BigRational::new(total.into(), count.into())));
}

#[test]
fn equidistribution_improves_with_degree() {
    let run = |d| {
        let spec = SampleSpec::new(SampleFamily::BinaryForms { d }, 2, 1);
        empirical_mgf(&spec).unwrap()
    };
    let (low, high) = (run(2), run(10));
    assert_eq!(low.cells, 3);
    let total: BigRational = high.masses().into_iter().map(|(_, m)| m).sum();
    assert!(total.is_one());
    assert!(low.tv_distance() > high.tv_distance());
}

#[test]
fn monte_carlo_is_reproducible() {
    let mk = |seed| {
        let mut spec = SampleSpec::new(SampleFamily::BinaryForms { d: 6 }, 3, 2);
        spec.sampling = Sampling::MonteCarlo { samples: 10_000, seed };
        empirical_mgf(&spec).unwrap()
    };
    let (a, b, c) = (mk(7), mk(7), mk(8));
    assert_eq!(a, b);
    assert_eq!(a.enumerated, 10_000);
    assert_ne!(a.means, c.means);
}

#[test]
fn exhaustive_ci_pairs_count() {
    // transverse line-conic pairs over F_2 through the same sampler and a direct scan
    let spec = SampleSpec::new(SampleFamily::CiPairs { d1: 1, d2: 2 }, 2, 1);
    let report = empirical_mgf(&spec).unwrap();
    let tower = FieldTower::new(2).unwrap();
    let mut count = 0;
    for a in forms::enumerate_forms(2, 2, 1, u64::MAX).unwrap().filter(|c| forms::is_normalized(c)) {
        for b in forms::enumerate_forms(2, 2, 2, u64::MAX).unwrap().filter(|c| forms::is_normalized(c)) {
            let (f1, f2) = (Form::new(2, 1, a.clone()).unwrap(), Form::new(2, 2, b).unwrap());
            count += ci_pair_transversal_by_scan(&tower, &f1, &f2, 1 << 20).unwrap() as u64;
        }
    }
    assert_eq!(report.admissible, count);
}
