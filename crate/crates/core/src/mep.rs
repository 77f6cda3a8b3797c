//! Motivic Euler products over maps of admissible Z-sets, their evaluation
//! through classical Euler products, and the closed-form moment generating
//! functions of the arithmetic families.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::cfun::{integrate, integrate_to_point, FiberFunction, OrbitFunction};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{Scalar, Tower};
use crate::symfun::{Basis, ScalarSeries, Sym, SymSeries};
use crate::witt::WittVec;
use crate::zset::{biguint_to_rational, ZMap, ZSet};

/// `prod_{V/B} H = Exp_sigma(int_{V/B} Log_sigma H)`, one series per base orbit.
pub fn product(map: &ZMap, h: &FiberFunction<SymSeries>) -> Result<OrbitFunction<SymSeries>> {
    let logs = h.try_map(SymSeries::log_sigma)?;
    integrate(map, &logs)?.try_map(SymSeries::exp_sigma)
}

/// `prod_V H` over `V -> 1`.
pub fn product_to_point(h: &OrbitFunction<SymSeries>) -> Result<SymSeries> {
    integrate_to_point(&h.try_map(SymSeries::log_sigma)?)?.exp_sigma()
}

/// Which classical product formula to use in [`ghost_classical`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Product over the orbits of `V_k` of `H(|v|)_1(t^{deg})`.
    Extended,
    /// Product over the orbits of `V` of `H(|v|)_{k/g}(t^{d/g})^g`, `g = gcd(k, d)`.
    Gcd,
}

fn pow_count(base: &ScalarSeries, count: &BigUint) -> Result<ScalarSeries> {
    match count.to_u64() {
        Some(e) => Ok(base.pow_u64(e)),
        None => base.pow_rational(&biguint_to_rational(count)),
    }
}

/// The `k`-th ghost slice of `prod_V H` as a classical Euler product.
/// Orbits whose degree exceeds the series degree cap contribute only `1`.
pub fn ghost_classical(h: &OrbitFunction<SymSeries>, k: usize, variant: Variant) -> Result<ScalarSeries> {
    let n = match h.values() {
        crate::cfun::Values::PerOrbit(v) | crate::cfun::Values::Uniform(v) => {
            v.first().map(Sym::degree_cap).ok_or_else(|| Error::Empty("no values".into()))?
        }
    };
    let domain = h.domain();
    let mut acc = ScalarSeries::one_scalar(n);
    match variant {
        Variant::Extended => {
            if let Some(cap) = domain.cap() {
                if cap / k < n {
                    return Err(Error::Cap { needed: n * k, cap });
                }
            }
            let r = h.restrict(k)?;
            for (d, count, val) in r.orbit_classes()? {
                if d > n {
                    continue;
                }
                let factor = val.ghost_slice(1)?.dilate(d as u32);
                acc = acc.mul(&pow_count(&factor, &count)?);
            }
        }
        Variant::Gcd => {
            if let Some(cap) = h.known_cap() {
                if cap < n * k {
                    return Err(Error::Cap { needed: n * k, cap });
                }
            }
            for (d, count, val) in h.orbit_classes()? {
                let g = d.gcd(&k);
                if d / g > n {
                    continue;
                }
                let factor = val.ghost_slice(k / g)?.dilate((d / g) as u32);
                acc = acc.mul(&pow_count(&factor, &(count * BigUint::from(g)))?);
            }
        }
    }
    Ok(acc)
}

/// `sum_{j=1}^{n} h_j` with coefficient `c`.
fn h_tail(n: usize, c: &WittVec) -> SymSeries {
    let coeffs: BTreeMap<Partition, WittVec> = (1..=n).map(|j| (Partition::single(j as u32), c.clone())).collect();
    Sym::from_basis(n, c.precision(), Basis::H, &coeffs)
}

/// Binomial lambda-distribution `(1 + p (h_1 + h_2 + ...))^N`.
pub fn binomial(p: &WittVec, nexp: &WittVec, n: usize) -> Result<SymSeries> {
    let prec = p.precision().max(nexp.precision());
    SymSeries::one(n, prec).add(&h_tail(n, p)).power(nexp)
}

/// The families with closed-form moment generating functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Character,
    SmoothHypersurface,
    Exotic,
    CiZeta,
    CiLfunction,
    Hirzebruch,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Character => "character",
            Family::SmoothHypersurface => "smooth_hypersurface",
            Family::Exotic => "exotic",
            Family::CiZeta => "ci_zeta",
            Family::CiLfunction => "ci_lfunction",
            Family::Hirzebruch => "hirzebruch",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Ok(match s {
            "character" => Family::Character,
            "smooth_hypersurface" => Family::SmoothHypersurface,
            "exotic" => Family::Exotic,
            "ci_zeta" => Family::CiZeta,
            "ci_lfunction" => Family::CiLfunction,
            "hirzebruch" => Family::Hirzebruch,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }
}

/// Class of the variety `Y` the family lives on.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseClass {
    /// Projective space of the given dimension over `F_q`.
    Projective(u32),
    ZSet(ZSet),
    Witt(WittVec),
}

impl BaseClass {
    pub fn class(&self, q: u64, precision: usize) -> Result<WittVec> {
        match self {
            BaseClass::Projective(dim) => ZSet::projective_space(q, *dim, precision).class(precision),
            BaseClass::ZSet(v) => v.class(precision),
            BaseClass::Witt(w) => w.truncate(precision),
        }
    }

    fn dimension(&self) -> Option<u32> {
        match self {
            BaseClass::Projective(d) => Some(*d),
            _ => None,
        }
    }
}

/// Which local expectation the character family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharFraction {
    /// Fraction of nonzero germs with nonzero value (the enumerated census).
    Census,
    /// `(Q^{l-1} - 1)/(Q^l - 1)`, the complementary count.
    Printed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub q: u64,
    /// Character order or relative dimension.
    pub ell: u32,
    pub m: u32,
    pub r: u32,
    pub base: BaseClass,
    /// `[H^i(Y)]` for `i = 0..=m`; empty means the projective-space table.
    pub cohomology: Vec<WittVec>,
    pub dim_y: Option<u32>,
    pub fraction: CharFraction,
    pub tower: Option<Tower>,
    /// Symmetric degree cap.
    pub n: usize,
    /// Ghost precision of the output.
    pub k: usize,
}

impl FamilySpec {
    pub fn new(family: Family, q: u64, n: usize, k: usize) -> FamilySpec {
        FamilySpec {
            family,
            q,
            ell: 1,
            m: 0,
            r: 1,
            base: BaseClass::Projective(1),
            cohomology: Vec::new(),
            dim_y: None,
            fraction: CharFraction::Census,
            tower: None,
            n,
            k,
        }
    }

    /// Working precision: coefficient `tau` of `Exp`/`Log` keeps `P / tau_1` ghosts.
    fn internal_precision(&self) -> usize {
        self.k * self.n.max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.q < 2 || !is_prime_power(self.q) {
            return Err(Error::Parameter(format!("q = {} is not a prime power", self.q)));
        }
        if self.n == 0 || self.k == 0 {
            return Err(Error::Parameter("truncation (N, K) must be positive".into()));
        }
        match self.family {
            Family::Character => {
                if self.ell < 2 || (self.q - 1) % self.ell as u64 != 0 {
                    return Err(Error::Parameter(format!("character order {} must be >= 2 and divide q - 1", self.ell)));
                }
            }
            Family::Exotic => {
                let dim = self.dim_y.or(self.base.dimension());
                if let Some(d) = dim {
                    if self.ell < d {
                        return Err(Error::Parameter(format!("relative dimension {} below dim Y = {d}", self.ell)));
                    }
                }
            }
            Family::CiZeta | Family::CiLfunction => {
                if self.r == 0 {
                    return Err(Error::Parameter("r must be at least 1".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Tower holding `q^{1/2}`.
    pub fn sqrt_tower(&self) -> Result<Tower> {
        let root = self.q.sqrt();
        if root * root == self.q {
            return Ok(self.tower.unwrap_or(Tower::RATIONAL));
        }
        match self.tower {
            Some(t) if t.sqrt_radicand() == Some(self.q) => Ok(t),
            Some(_) => Err(Error::MissingSqrt(self.q)),
            None => Tower::new(1, Some(self.q)),
        }
    }

    /// `[H^i(Y)]` for `i = 0..=m`.
    pub fn cohomology_classes(&self, precision: usize) -> Result<Vec<WittVec>> {
        if self.cohomology.is_empty() {
            if let BaseClass::Projective(dim) = self.base {
                return Ok(projective_cohomology(self.q, dim, precision).into_iter().take(self.m as usize + 1).collect());
            }
            return Err(Error::Parameter("cohomology classes [H^i(Y)] are required".into()));
        }
        if self.cohomology.len() <= self.m as usize {
            return Err(Error::Parameter(format!("need [H^i(Y)] for i <= {}, got {}", self.m, self.cohomology.len())));
        }
        self.cohomology.iter().map(|w| w.truncate(precision)).collect()
    }
}

pub(crate) fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
    let mut x = q;
    while x % p == 0 {
        x /= p;
    }
    x == 1
}

/// `q^e` as an exact rational.
fn qpow(q: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), e.unsigned_abs() as usize)
    }
}

/// Witt vector with ghost `k` equal to `f(q^k)`.
fn ghost_in_q(q: u64, precision: usize, f: impl Fn(&BigRational) -> BigRational) -> WittVec {
    WittVec::from_fn(precision, |k| Scalar::from_rational(f(&qpow(q, k as i64))))
}

/// `[q^{e/2}]`, ghost `k` equal to `q^{ek/2}`.
fn half_teichmuller(q: u64, e: i64, precision: usize, tower: Tower) -> Result<WittVec> {
    let s = Scalar::sqrt(q, tower)?;
    let base = s.pow(e)?;
    Ok(WittVec::teichmuller(&base, precision))
}

/// `[H^{2i}(P^dim)] = [q^i]`, odd degrees vanish, for `i = 0..=2 dim`.
pub fn projective_cohomology(q: u64, dim: u32, precision: usize) -> Vec<WittVec> {
    (0..=2 * dim as usize)
        .map(|i| {
            if i % 2 == 0 {
                WittVec::teichmuller(&Scalar::from_rational(qpow(q, (i / 2) as i64)), precision)
            } else {
                WittVec::zero(precision)
            }
        })
        .collect()
}

/// Enumerated census of nonzero germs in `O/m^ell` over a field with `big_q`
/// elements: `(germs with nonzero value, all nonzero germs)`.
pub fn character_germ_census(big_q: u64, ell: u32) -> Result<(u64, u64)> {
    let size = big_q.checked_pow(ell).filter(|&s| s <= 1 << 24).ok_or_else(|| Error::Budget {
        size: format!("{big_q}^{ell}"),
        budget: "2^24".into(),
    })?;
    let (mut favorable, mut total) = (0u64, 0u64);
    for code in 1..size {
        total += 1;
        // the constant term is the lowest digit
        if code % big_q != 0 {
            favorable += 1;
        }
    }
    Ok((favorable, total))
}

/// Local coefficient `c` of the character family as a Witt vector.
pub fn character_coefficient(q: u64, ell: u32, precision: usize, fraction: CharFraction) -> WittVec {
    let l = ell as usize;
    ghost_in_q(q, precision, |big| {
        let one = BigRational::one();
        let top = num_traits::pow(big.clone(), l);
        let below = num_traits::pow(big.clone(), l - 1);
        match fraction {
            CharFraction::Census => (&top - &below) / (&top - &one),
            CharFraction::Printed => (&below - &one) / (&top - &one),
        }
    })
}

/// Census and printed values of the first ghost of the character coefficient.
pub fn character_fraction_check(q: u64, ell: u32) -> Result<(BigRational, BigRational)> {
    let (fav, total) = character_germ_census(q, ell)?;
    let census = BigRational::new(fav.into(), total.into());
    let printed = character_coefficient(q, ell, 1, CharFraction::Printed).ghosts()[0].as_rational().cloned().unwrap_or_default();
    Ok((census, printed))
}

fn character_raw(spec: &FamilySpec, prec: usize) -> Result<SymSeries> {
    let n = spec.n;
    let c = character_coefficient(spec.q, spec.ell, prec, spec.fraction);
    let mut coeffs: BTreeMap<Partition, WittVec> = BTreeMap::new();
    coeffs.insert(Partition::empty(), WittVec::unit(prec));
    let ell = spec.ell as usize;
    for j in (ell..=n).step_by(ell) {
        coeffs.insert(Partition::single(j as u32), c.clone());
    }
    let inner = Sym::from_basis(n, prec, Basis::H, &coeffs);
    inner.power(&WittVec::teichmuller(&Scalar::from_int(spec.q as i64), prec))
}

/// `([q^l] - 1)/([q^{l+1}] - 1)`.
pub fn hypersurface_p(q: u64, ell: u32, precision: usize) -> WittVec {
    let l = ell as usize;
    ghost_in_q(q, precision, |big| {
        let one = BigRational::one();
        (num_traits::pow(big.clone(), l) - &one) / (num_traits::pow(big.clone(), l + 1) - &one)
    })
}

/// `L(a, b, c) = prod_{j<c} (1 - a^{-(b-j)})` for rational `a`.
pub fn linear_independence(a: &BigRational, b: u32, c: u32) -> BigRational {
    let one = BigRational::one();
    (0..c).fold(one.clone(), |acc, j| acc * (&one - num_traits::pow(a.recip(), (b - j) as usize)))
}

/// Success parameter of the complete-intersection zeta family.
pub fn ci_p(q: u64, m: u32, r: u32, precision: usize) -> WittVec {
    ghost_in_q(q, precision, |big| {
        let one = BigRational::one();
        let qr = num_traits::pow(big.recip(), r as usize);
        let l = linear_independence(big, m + r, r);
        (&qr * &l) / (&one - &qr + &qr * &l)
    })
}

/// `mu` of the complete-intersection L-function family.
pub fn ci_mu(spec: &FamilySpec, precision: usize) -> Result<WittVec> {
    let m = spec.m as i64;
    let tower = spec.sqrt_tower()?;
    let h = spec.cohomology_classes(precision)?;
    let neg_half = half_teichmuller(spec.q, -m, precision, tower)?;
    let mut mu = neg_half.mul(&h[m as usize]).neg();
    let eps = if m % 2 == 0 { 1 } else { -1 };
    for i in 0..m {
        let sign = if i % 2 == 0 { eps } else { -eps };
        let pair = neg_half.add(&half_teichmuller(spec.q, m - 2 * i, precision, tower)?);
        let term = pair.mul(&h[i as usize]);
        mu = if sign > 0 { mu.sub(&term) } else { mu.add(&term) };
    }
    Ok(mu)
}

fn hirzebruch_raw(spec: &FamilySpec, prec: usize) -> Result<SymSeries> {
    let n = spec.n;
    let unit = WittVec::unit(prec);
    let all: BTreeMap<Partition, WittVec> = (0..=n).map(|j| (Partition::single(j as u32), unit.clone())).collect();
    let s = Sym::from_basis(n, prec, Basis::H, &all);
    // h_j(t^2) summed: every m_{2 tau}
    let doubled: BTreeMap<Partition, WittVec> =
        Partition::up_to(n / 2).into_iter().map(|t| (t.dilate(2), unit.clone())).collect();
    let s2 = Sym::from_basis(n, prec, Basis::M, &doubled);
    let half = BigRational::new(1.into(), 2.into());
    let one = BigRational::one();
    let a = ghost_in_q(spec.q, prec, |x| (x * x - &one) * (x - &one));
    let b = ghost_in_q(spec.q, prec, |x| (num_traits::pow(x.clone(), 4) - x * x) * &half);
    let c = ghost_in_q(spec.q, prec, |x| {
        let t = x * x - x;
        &t * &t * &half
    });
    let den = ghost_in_q(spec.q, prec, |x| num_traits::pow(x.clone(), 4) - x * x - x + &one);
    let inner = s.mul_coeff(&a).add(&s.mul(&s).mul_coeff(&b)).add(&s2.mul_coeff(&c)).mul_coeff(&den.inv()?);
    inner.power(&BaseClass::Projective(1).class(spec.q, prec)?)
}

fn ci_lfunction_direct(spec: &FamilySpec, prec: usize) -> Result<SymSeries> {
    let n = spec.n;
    let m = spec.m as i64;
    let tower = spec.sqrt_tower()?;
    let p = ci_p(spec.q, spec.m, spec.r, prec);
    let (basis, eps) = if m % 2 == 0 { (Basis::H, 1) } else { (Basis::E, -1) };
    let mut coeffs: BTreeMap<Partition, WittVec> = BTreeMap::new();
    coeffs.insert(Partition::empty(), WittVec::unit(prec));
    for i in 1..=n as i64 {
        let mut c = p.mul(&half_teichmuller(spec.q, -i * m, prec, tower)?);
        if eps < 0 && i % 2 == 1 {
            c = c.neg();
        }
        coeffs.insert(Partition::single(i as u32), c);
    }
    let inner = Sym::from_basis(n, prec, basis, &coeffs);
    let y = spec.base.class(spec.q, prec)?;
    let mu = Sym::monomial(n, prec, Partition::single(1), ci_mu(spec, prec)?).exp_sigma()?;
    Ok(inner.power(&y)?.mul(&mu))
}

/// Complete-intersection L-function family obtained from the zeta family:
/// scale by `[q^{-m/2}]`, negate when `m` is odd, multiply by `Exp(mu h_1)`.
pub fn ci_lfunction_transform(spec: &FamilySpec) -> Result<SymSeries> {
    spec.validate()?;
    let prec = spec.internal_precision();
    let n = spec.n;
    let m = spec.m as i64;
    let tower = spec.sqrt_tower()?;
    let zeta = binomial(&ci_p(spec.q, spec.m, spec.r, prec), &spec.base.class(spec.q, prec)?, n)?;
    let scales: Vec<WittVec> =
        (0..=n as i64).map(|d| half_teichmuller(spec.q, -m * d, prec, tower)).collect::<Result<_>>()?;
    let mut out = zeta.grade_scale(|d| scales[d].clone());
    if m % 2 == 1 {
        out = out.negate_distribution()?;
    }
    let mu = Sym::monomial(n, prec, Partition::single(1), ci_mu(spec, prec)?).exp_sigma()?;
    out.mul(&mu).truncate_precision(spec.k)
}

/// The limiting moment generating function `lim E[Exp_sigma(X h_1)]` of a family.
pub fn family_series(spec: &FamilySpec) -> Result<SymSeries> {
    spec.validate()?;
    let prec = spec.internal_precision();
    let out = match spec.family {
        Family::Character => character_raw(spec, prec)?,
        Family::SmoothHypersurface | Family::Exotic => {
            binomial(&hypersurface_p(spec.q, spec.ell, prec), &spec.base.class(spec.q, prec)?, spec.n)?
        }
        Family::CiZeta => binomial(&ci_p(spec.q, spec.m, spec.r, prec), &spec.base.class(spec.q, prec)?, spec.n)?,
        Family::CiLfunction => ci_lfunction_direct(spec, prec)?,
        Family::Hirzebruch => hirzebruch_raw(spec, prec)?,
    };
    out.truncate_precision(spec.k)
}

/// Random-matrix comparison targets modulo `[q^{-1/2}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    /// `Exp_sigma(h_2)`.
    Orthogonal,
    /// `Exp_sigma(e_2)`.
    Symplectic,
    /// `Exp_sigma(h_2 + h_3 + ...)`.
    Symmetric,
}

impl Reference {
    /// Target for the L-function family of middle dimension `m`.
    pub fn for_dimension(m: u32) -> Reference {
        match m {
            0 => Reference::Symmetric,
            m if m % 2 == 0 => Reference::Orthogonal,
            _ => Reference::Symplectic,
        }
    }

    pub fn series(&self, n: usize, k: usize) -> Result<SymSeries> {
        let unit = WittVec::unit(k * n.max(1));
        let f = match self {
            Reference::Orthogonal => SymSeries::term(n, Basis::H, Partition::single(2), unit),
            Reference::Symplectic => SymSeries::term(n, Basis::E, Partition::single(2), unit),
            Reference::Symmetric => {
                let c: BTreeMap<Partition, WittVec> = (2..=n).map(|j| (Partition::single(j as u32), unit.clone())).collect();
                Sym::from_basis(n, k * n.max(1), Basis::H, &c)
            }
        };
        f.exp_sigma()?.truncate_precision(k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QHalfReport {
    pub k: usize,
    pub bound: f64,
    /// Largest `|ghost_k coefficient of F - reference| * q^{k/2}`.
    pub max_ratio: f64,
    pub worst: Option<Partition>,
    pub pass: bool,
}

/// Check `|ghost_k(F - reference)| <= C q^{-k/2}` on every coefficient of
/// the difference in `basis`.
pub fn reduce_mod_qhalf(f: &SymSeries, reference: &SymSeries, q: u64, k: usize, bound: f64, basis: Basis) -> Result<QHalfReport> {
    let diff = f.sub(reference).to_basis(basis);
    let scale = (q as f64).powf(k as f64 / 2.0);
    let mut max_ratio = 0.0f64;
    let mut worst = None;
    for (tau, c) in &diff {
        let ratio = c.ghost(k)?.abs_f64() * scale;
        if ratio > max_ratio {
            max_ratio = ratio;
            worst = Some(tau.clone());
        }
    }
    Ok(QHalfReport { k, bound, max_ratio, worst, pass: max_ratio <= bound })
}

/// `Exp_sigma(X h_1)` for a Witt vector `X`.
pub fn exp_h1(x: &WittVec, n: usize) -> Result<SymSeries> {
    Sym::monomial(n, x.precision(), Partition::single(1), x.clone()).exp_sigma()
}
