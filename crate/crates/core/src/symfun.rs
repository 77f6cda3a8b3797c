//! Truncated symmetric-function series.
//!
//! [`Sym`] stores coefficients in the power-sum basis `p_tau`, keeping only
//! partitions of size at most `n`. Absent entries are exact zeros.
//! [`SymSeries`] has Witt vector coefficients and carries the plethystic
//! structure (`p_i` acts by the Adams operation on coefficients and by
//! `p_tau -> p_{i tau}`). [`ScalarSeries`] is the scalar-coefficient
//! counterpart obtained by taking one ghost component.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{mobius, Scalar};
use crate::witt::WittVec;

/// Coefficient ring of a [`Sym`].
pub trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    /// True only for values known to be zero exactly (such entries may be dropped).
    fn is_exact_zero(&self) -> bool;
}

impl Coeff for Scalar {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &BigRational) -> Self {
        Scalar::scale(self, r)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for WittVec {
    fn add(&self, other: &Self) -> Self {
        WittVec::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        WittVec::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        WittVec::mul(self, other)
    }
    fn neg(&self) -> Self {
        WittVec::neg(self)
    }
    fn scale(&self, r: &BigRational) -> Self {
        WittVec::scale(self, r)
    }
    // A computed zero is only known up to its precision, so it is kept.
    fn is_exact_zero(&self) -> bool {
        false
    }
}

/// Truncated series `sum_tau c_tau p_tau` over partitions with `|tau| <= n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sym<C> {
    n: usize,
    k: usize,
    terms: BTreeMap<Partition, C>,
}

/// Series with Witt vector coefficients.
pub type SymSeries = Sym<WittVec>;
/// Series with scalar coefficients.
pub type ScalarSeries = Sym<Scalar>;

/// Presentation bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    P,
    H,
    E,
    M,
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::H => "h",
            Basis::E => "e",
            Basis::M => "m",
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl<C: Coeff> Sym<C> {
    /// The zero series with degree cap `n` and nominal ghost precision `k`.
    pub fn zero(n: usize, k: usize) -> Sym<C> {
        Sym { n, k, terms: BTreeMap::new() }
    }

    /// Build from `(partition, coefficient)` pairs in the power-sum basis.
    /// Partitions larger than `n` are dropped; repeated keys are summed.
    pub fn from_terms(n: usize, k: usize, terms: impl IntoIterator<Item = (Partition, C)>) -> Sym<C> {
        let mut s = Sym::zero(n, k);
        for (t, c) in terms {
            s.add_term(t, c);
        }
        s
    }

    /// Single term `c * p_tau`.
    pub fn monomial(n: usize, k: usize, tau: Partition, c: C) -> Sym<C> {
        Sym::from_terms(n, k, [(tau, c)])
    }

    pub fn degree_cap(&self) -> usize {
        self.n
    }

    /// Nominal precision used for constants created by operations.
    pub fn nominal_precision(&self) -> usize {
        self.k
    }

    pub fn with_nominal_precision(mut self, k: usize) -> Sym<C> {
        self.k = k;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Partition, C> {
        &self.terms
    }

    pub fn get(&self, tau: &Partition) -> Option<&C> {
        self.terms.get(tau)
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&Partition::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c * p_tau` in place (ignored when `|tau| > n`).
    pub fn add_term(&mut self, tau: Partition, c: C) {
        if tau.size() > self.n {
            return;
        }
        match self.terms.get_mut(&tau) {
            Some(old) => {
                let v = old.add(&c);
                if v.is_exact_zero() {
                    self.terms.remove(&tau);
                } else {
                    *old = v;
                }
            }
            None => {
                if !c.is_exact_zero() {
                    self.terms.insert(tau, c);
                }
            }
        }
    }

    fn cap(&self, other: &Sym<C>) -> (usize, usize) {
        (self.n.min(other.n), self.k.max(other.k))
    }

    pub fn add(&self, other: &Sym<C>) -> Sym<C> {
        let (n, k) = self.cap(other);
        let mut out = self.truncate_degree(n).with_nominal_precision(k);
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Sym<C> {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, other: &Sym<C>) -> Sym<C> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Sym<C> {
        if r.is_zero() {
            return Sym::zero(self.n, self.k);
        }
        self.map(|c| c.scale(r))
    }

    /// Multiply every coefficient by `c`.
    pub fn mul_coeff(&self, c: &C) -> Sym<C> {
        self.map(|x| x.mul(c))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Sym<C> {
        Sym::from_terms(self.n, self.k, self.terms.iter().map(|(t, c)| (t.clone(), f(c))))
    }

    /// Product truncated at the smaller degree cap.
    pub fn mul(&self, other: &Sym<C>) -> Sym<C> {
        let (n, k) = self.cap(other);
        let mut acc: BTreeMap<Partition, C> = BTreeMap::new();
        for (s, a) in &self.terms {
            let rest = n.saturating_sub(s.size());
            if s.size() > n {
                continue;
            }
            for (t, b) in &other.terms {
                if t.size() > rest {
                    continue;
                }
                let prod = a.mul(b);
                let key = s.union(t);
                match acc.get_mut(&key) {
                    Some(v) => *v = v.add(&prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Sym::from_terms(n, k, acc)
    }

    /// Keep only partitions of size at most `n`.
    pub fn truncate_degree(&self, n: usize) -> Sym<C> {
        let n = n.min(self.n);
        Sym {
            n,
            k: self.k,
            terms: self.terms.iter().filter(|(t, _)| t.size() <= n).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    /// Homogeneous part of degree `d`.
    pub fn degree_part(&self, d: usize) -> Sym<C> {
        Sym {
            n: self.n,
            k: self.k,
            terms: self.terms.iter().filter(|(t, _)| t.size() == d).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    /// Variable substitution `t_j -> t_j^d` (so `p_tau -> p_{d tau}`); the
    /// coefficients are left untouched.
    pub fn dilate(&self, d: u32) -> Sym<C> {
        Sym::from_terms(self.n, self.k, self.terms.iter().map(|(t, c)| (t.dilate(d), c.clone())))
    }

    /// Multiply the degree-`d` part by `f(d)`.
    pub fn grade_scale(&self, f: impl Fn(usize) -> C) -> Sym<C> {
        Sym::from_terms(self.n, self.k, self.terms.iter().map(|(t, c)| (t.clone(), c.mul(&f(t.size())))))
    }

    /// Ordinary logarithm of a series with constant term one (the caller checks it).
    pub fn graded_log(&self) -> Sym<C> {
        let parts: Vec<Sym<C>> = (0..=self.n).map(|d| self.degree_part(d)).collect();
        let mut logs: Vec<Sym<C>> = vec![Sym::zero(self.n, self.k)];
        for m in 1..=self.n {
            let mut acc = parts[m].clone();
            for j in 1..m {
                let prod = logs[j].mul(&parts[m - j]).scale(&rat(j as i64, m as i64));
                acc = acc.sub(&prod);
            }
            logs.push(acc);
        }
        logs.into_iter().fold(Sym::zero(self.n, self.k), |a, b| a.add(&b))
    }

    /// Ordinary exponential of a series without constant term; `one` is the
    /// unit coefficient.
    pub fn graded_exp(&self, one: C) -> Sym<C> {
        let parts: Vec<Sym<C>> = (0..=self.n).map(|d| self.degree_part(d)).collect();
        let mut exps: Vec<Sym<C>> = vec![Sym::monomial(self.n, self.k, Partition::empty(), one)];
        for m in 1..=self.n {
            let mut acc = Sym::zero(self.n, self.k);
            for j in 1..=m {
                acc = acc.add(&parts[j].mul(&exps[m - j]).scale(&rat(j as i64, m as i64)));
            }
            exps.push(acc);
        }
        exps.into_iter().fold(Sym::zero(self.n, self.k), |a, b| a.add(&b))
    }

    /// Coefficients in another basis, keyed by partition.
    pub fn to_basis(&self, basis: Basis) -> BTreeMap<Partition, C> {
        if basis == Basis::P {
            return self.terms.clone();
        }
        let mut out: BTreeMap<Partition, C> = BTreeMap::new();
        for d in 0..=self.n {
            let tr = transition(basis, d);
            for (mu, c) in self.terms.iter().filter(|(t, _)| t.size() == d) {
                let i = tr.index[mu];
                for (j, lam) in tr.parts.iter().enumerate() {
                    let r = &tr.from_p[i][j];
                    if r.is_zero() {
                        continue;
                    }
                    let v = c.scale(r);
                    match out.get_mut(lam) {
                        Some(old) => *old = old.add(&v),
                        None => {
                            out.insert(lam.clone(), v);
                        }
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_exact_zero());
        out
    }

    /// Build from coefficients given in `basis`.
    pub fn from_basis(n: usize, k: usize, basis: Basis, coeffs: &BTreeMap<Partition, C>) -> Sym<C> {
        if basis == Basis::P {
            return Sym::from_terms(n, k, coeffs.iter().map(|(t, c)| (t.clone(), c.clone())));
        }
        let mut out = Sym::zero(n, k);
        for (lam, c) in coeffs {
            if lam.size() > n {
                continue;
            }
            let tr = transition(basis, lam.size());
            let i = tr.index[lam];
            for (j, mu) in tr.parts.iter().enumerate() {
                let r = &tr.to_p[i][j];
                if !r.is_zero() {
                    out.add_term(mu.clone(), c.scale(r));
                }
            }
        }
        out
    }

    /// The basis element `b_lambda` with coefficient `c`, expanded in power sums.
    pub fn basis_element(n: usize, k: usize, basis: Basis, lambda: Partition, c: C) -> Sym<C> {
        let mut m = BTreeMap::new();
        m.insert(lambda, c);
        Sym::from_basis(n, k, basis, &m)
    }
}

/// Transition data between the power sums and another basis in one degree.
struct Transition {
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// Row `lambda`: the basis element `b_lambda` in power sums.
    to_p: Vec<Vec<BigRational>>,
    /// Row `mu`: the power sum `p_mu` in the basis.
    from_p: Vec<Vec<BigRational>>,
}

fn transition(basis: Basis, n: usize) -> Arc<Transition> {
    static CACHE: OnceLock<Mutex<HashMap<(Basis, usize), Arc<Transition>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(basis, n)) {
        return t.clone();
    }
    let parts = Partition::all(n);
    let index: HashMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let size = parts.len();
    let (to_p, from_p) = match basis {
        Basis::P => {
            let id: Vec<Vec<BigRational>> = (0..size)
                .map(|i| (0..size).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
                .collect();
            (id.clone(), id)
        }
        Basis::H | Basis::E => {
            let rows: Vec<Vec<BigRational>> = parts
                .iter()
                .map(|lam| {
                    let mut acc: BTreeMap<Partition, BigRational> = BTreeMap::new();
                    acc.insert(Partition::empty(), BigRational::one());
                    for &part in lam.parts() {
                        let single = elementary_or_complete(basis == Basis::E, part as usize);
                        let mut next = BTreeMap::new();
                        for (a, x) in &acc {
                            for (b, y) in &single {
                                *next.entry(a.union(b)).or_insert_with(BigRational::zero) += x * y;
                            }
                        }
                        acc = next;
                    }
                    parts.iter().map(|mu| acc.get(mu).cloned().unwrap_or_else(BigRational::zero)).collect()
                })
                .collect();
            let inv = invert(&rows);
            (rows, inv)
        }
        Basis::M => {
            // p_mu = sum_lambda L[mu][lambda] m_lambda
            let l: Vec<Vec<BigRational>> = parts
                .iter()
                .map(|mu| parts.iter().map(|lam| BigRational::from_integer(monomial_count(mu, lam))).collect())
                .collect();
            let inv = invert(&l);
            (inv, l)
        }
    };
    let t = Arc::new(Transition { parts, index, to_p, from_p });
    cache.lock().unwrap().insert((basis, n), t.clone());
    t
}

/// `h_n` or `e_n` in power sums: `sum_mu (+-1) p_mu / z_mu`.
fn elementary_or_complete(elementary: bool, n: usize) -> BTreeMap<Partition, BigRational> {
    Partition::all(n)
        .into_iter()
        .map(|mu| {
            let sign = if elementary && (n - mu.len()) % 2 == 1 { -1 } else { 1 };
            let c = BigRational::new(BigInt::from(sign), mu.z());
            (mu, c)
        })
        .collect()
}

/// Coefficient of `x^lambda` in `p_mu`: ways to distribute the parts of `mu`
/// into bins of sizes `lambda`.
fn monomial_count(mu: &Partition, lambda: &Partition) -> BigInt {
    fn rec(parts: &[u32], bins: &mut [u32]) -> u64 {
        match parts.split_first() {
            None => bins.iter().all(|&b| b == 0) as u64,
            Some((&p, rest)) => {
                let mut total = 0;
                for i in 0..bins.len() {
                    if bins[i] >= p {
                        bins[i] -= p;
                        total += rec(rest, bins);
                        bins[i] += p;
                    }
                }
                total
            }
        }
    }
    if mu.size() != lambda.size() {
        return BigInt::zero();
    }
    let mut bins = lambda.parts().to_vec();
    BigInt::from(rec(mu.parts(), &mut bins))
}

fn invert(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("transition matrix is invertible");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl SymSeries {
    /// The constant series `1` with coefficient the unit of precision `k`.
    pub fn one(n: usize, k: usize) -> SymSeries {
        Sym::monomial(n, k, Partition::empty(), WittVec::unit(k))
    }

    /// `c * b_lambda` for a basis element of `basis`.
    pub fn term(n: usize, basis: Basis, lambda: Partition, c: WittVec) -> SymSeries {
        let k = c.precision();
        Sym::basis_element(n, k, basis, lambda, c)
    }

    /// Precision given to constants created by operations on this series:
    /// at least the nominal precision and every coefficient precision.
    pub fn unit_precision(&self) -> usize {
        self.terms.values().map(WittVec::precision).max().unwrap_or(0).max(self.k).max(1)
    }

    /// Smallest coefficient precision (`None` for the zero series).
    pub fn min_precision(&self) -> Option<usize> {
        self.terms.values().map(WittVec::precision).min()
    }

    /// Truncate every coefficient to ghost precision `k`.
    pub fn truncate_precision(&self, k: usize) -> Result<SymSeries> {
        let terms = self.terms.iter().map(|(t, c)| Ok((t.clone(), c.truncate(k)?))).collect::<Result<Vec<_>>>()?;
        Ok(Sym::from_terms(self.n, k, terms))
    }

    /// Equality of the first `k` ghost components of every coefficient;
    /// absent entries count as zero, and any present coefficient with
    /// precision below `k` makes the comparison fail.
    pub fn equal_to_precision(&self, other: &SymSeries, k: usize) -> bool {
        let n = self.n.min(other.n);
        let check = |c: Option<&WittVec>| -> Option<Vec<Scalar>> {
            match c {
                None => Some(vec![Scalar::zero(); k]),
                Some(w) if w.precision() >= k => Some(w.ghosts()[..k].to_vec()),
                Some(_) => None,
            }
        };
        let keys: std::collections::BTreeSet<&Partition> =
            self.terms.keys().chain(other.terms.keys()).filter(|t| t.size() <= n).collect();
        keys.into_iter().all(|t| match (check(self.get(t)), check(other.get(t))) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    /// Plethysm by `p_i`: Adams operation on coefficients, `p_tau -> p_{i tau}`.
    pub fn adams(&self, i: usize) -> Result<SymSeries> {
        let mut out = Sym::zero(self.n, self.k);
        for (t, c) in &self.terms {
            if t.size() * i > self.n {
                continue;
            }
            out.add_term(t.dilate(i as u32), c.adams(i)?);
        }
        Ok(out)
    }

    /// Coefficient-wise substitution `w -> w(t^d)` on the Witt coefficients.
    pub fn substitute(&self, d: usize) -> SymSeries {
        Sym::from_terms(self.n, self.k * d, self.terms.iter().map(|(t, c)| (t.clone(), c.substitute(d))))
    }

    fn require_no_constant(&self, what: &str) -> Result<()> {
        match self.constant_term() {
            Some(c) if !c.is_zero() => Err(Error::ConstantTerm(format!("{what} needs a series without constant term"))),
            _ => Ok(()),
        }
    }

    fn require_constant_one(&self, what: &str) -> Result<()> {
        match self.constant_term() {
            Some(c) if c.ghosts().iter().all(Scalar::is_one) => Ok(()),
            _ => Err(Error::ConstantTerm(format!("{what} needs constant term 1"))),
        }
    }

    /// `Exp_sigma(F) = sum_n h_n o F`, by `n (h_n o F) = sum_k (p_k o F)(h_{n-k} o F)`.
    pub fn exp_sigma(&self) -> Result<SymSeries> {
        self.require_no_constant("Exp_sigma")?;
        let f = Sym::from_terms(self.n, self.k, self.terms.iter().filter(|(t, _)| !t.is_empty()).map(|(t, c)| (t.clone(), c.clone())));
        let adams: Vec<SymSeries> = (1..=self.n).map(|j| f.adams(j)).collect::<Result<_>>()?;
        let mut h: Vec<SymSeries> = vec![SymSeries::one(self.n, self.unit_precision())];
        for m in 1..=self.n {
            let mut acc = Sym::zero(self.n, self.k);
            for j in 1..=m {
                acc = acc.add(&adams[j - 1].mul(&h[m - j]));
            }
            h.push(acc.scale(&rat(1, m as i64)));
        }
        Ok(h.into_iter().fold(Sym::zero(self.n, self.k), |a, b| a.add(&b)))
    }

    /// Inverse of [`exp_sigma`](Self::exp_sigma): `sum_m mu(m)/m p_m o log(G)`.
    pub fn log_sigma(&self) -> Result<SymSeries> {
        self.require_constant_one("Log_sigma")?;
        let l = self.graded_log();
        let mut out = Sym::zero(self.n, self.k);
        for m in 1..=self.n {
            let mu = mobius(m as u64);
            if mu == 0 {
                continue;
            }
            out = out.add(&l.adams(m)?.scale(&rat(mu, m as i64)));
        }
        Ok(out)
    }

    /// Pre-lambda power `F^E = Exp_sigma(E Log_sigma F)` for a Witt exponent.
    pub fn power(&self, e: &WittVec) -> Result<SymSeries> {
        self.log_sigma()?.mul_coeff(e).exp_sigma()
    }

    /// Pre-lambda power with a series exponent.
    pub fn power_series(&self, e: &SymSeries) -> Result<SymSeries> {
        self.log_sigma()?.mul(e).exp_sigma()
    }

    /// Rational coefficients of a series whose coefficients are ghost-constant
    /// rationals.
    fn rational_coefficients(&self) -> Result<Vec<(Partition, BigRational)>> {
        self.terms
            .iter()
            .map(|(t, c)| {
                let first = c.ghosts()[0].as_rational().ok_or(Error::NotRational)?;
                if c.ghosts().iter().any(|g| g.as_rational() != Some(first)) {
                    return Err(Error::NotRational);
                }
                Ok((t.clone(), first.clone()))
            })
            .collect()
    }

    /// Plethysm `a o F` for `a` with rational coefficients.
    pub fn plethysm(a: &SymSeries, f: &SymSeries) -> Result<SymSeries> {
        let coeffs = a.rational_coefficients()?;
        let has_const = coeffs.iter().any(|(t, _)| t.is_empty());
        if has_const && f.constant_term().is_some_and(|c| !c.is_zero()) {
            return Err(Error::ConstantTerm("plethysm of a series with degree-0 terms into a series with constant term".into()));
        }
        let n = f.n;
        let mut adams: HashMap<u32, SymSeries> = HashMap::new();
        let mut out = Sym::zero(n, f.k);
        for (tau, r) in coeffs {
            let mut prod = SymSeries::one(n, f.unit_precision());
            for &part in tau.parts() {
                if !adams.contains_key(&part) {
                    adams.insert(part, f.adams(part as usize)?);
                }
                prod = prod.mul(&adams[&part]);
            }
            out = out.add(&prod.scale(&r));
        }
        Ok(out)
    }

    /// The `k`-th ghost component of every coefficient.
    pub fn ghost_slice(&self, k: usize) -> Result<ScalarSeries> {
        let mut out = Sym::zero(self.n, 0);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c.ghost(k)?.clone());
        }
        Ok(out)
    }

    /// Substitute `h_tau -> (-1)^{|tau|} e_tau` in the h-basis expansion.
    pub fn negate_distribution(&self) -> Result<SymSeries> {
        self.require_constant_one("negation")?;
        let mut h = self.to_basis(Basis::H);
        for (t, c) in h.iter_mut() {
            if t.size() % 2 == 1 {
                *c = c.neg();
            }
        }
        Ok(Sym::from_basis(self.n, self.k, Basis::E, &h))
    }
}

impl ScalarSeries {
    pub fn one_scalar(n: usize) -> ScalarSeries {
        Sym::monomial(n, 0, Partition::empty(), Scalar::one())
    }

    /// Integer power by repeated squaring.
    pub fn pow_u64(&self, e: u64) -> ScalarSeries {
        let mut acc = ScalarSeries::one_scalar(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Rational power `exp(r log F)` of a series with constant term one.
    pub fn pow_rational(&self, r: &BigRational) -> Result<ScalarSeries> {
        if !self.constant_term().is_some_and(Scalar::is_one) {
            return Err(Error::ConstantTerm("rational power needs constant term 1".into()));
        }
        Ok(self.graded_log().scale(r).graded_exp(Scalar::one()))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Sym<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{c}*p[{t}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
