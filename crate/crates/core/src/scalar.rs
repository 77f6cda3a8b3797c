//! Exact scalars: rationals, optionally extended by a root of unity `z` of a
//! declared order and a formal square root `s` of an integer `q`.
//!
//! A value is stored as a polynomial in `z` and `s`, reduced modulo the
//! cyclotomic polynomial and `s^2 - q`. Values with no `z` or `s` part are
//! always stored as plain rationals, so they combine with values of any
//! tower. Two values carrying generators from different towers cannot be
//! combined; the operators panic on that, the `checked_*` methods report it.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Generators adjoined to the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tower {
    zeta: u32,
    s_sq: u64,
}

impl Tower {
    /// The rationals.
    pub const RATIONAL: Tower = Tower { zeta: 1, s_sq: 0 };

    /// Tower with a primitive `zeta_order`-th root of unity and, when `q` is
    /// given and not a perfect square, a formal `s` with `s^2 = q`.
    pub fn new(zeta_order: u32, q: Option<u64>) -> Result<Tower> {
        if zeta_order == 0 {
            return Err(Error::Parameter("root of unity order must be positive".into()));
        }
        let s_sq = match q {
            Some(q) if q == 0 => return Err(Error::Parameter("q must be positive".into())),
            Some(q) if integer_sqrt(q).is_none() => q,
            _ => 0,
        };
        Ok(Tower { zeta: zeta_order, s_sq })
    }

    pub fn zeta_order(&self) -> u32 {
        self.zeta
    }

    /// The radicand of the formal square root, if one is adjoined.
    pub fn sqrt_radicand(&self) -> Option<u64> {
        (self.s_sq != 0).then_some(self.s_sq)
    }

    fn phi(&self) -> usize {
        cyclotomic(self.zeta).len() - 1
    }

    fn dim(&self) -> usize {
        self.phi() * if self.s_sq != 0 { 2 } else { 1 }
    }

    fn is_rational(&self) -> bool {
        self.dim() == 1
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        if self.zeta > 2 {
            write!(f, "(z{})", self.zeta)?;
        }
        if self.s_sq != 0 {
            write!(f, "(sqrt {})", self.s_sq)?;
        }
        Ok(())
    }
}

fn integer_sqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|x| x * x == q)
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
fn cyclotomic(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic(d);
            num = exact_div_monic(&num, &den);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = r[i + dn];
        quot[i] = c;
        for (j, d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    quot
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(BigRational),
    T(Tower, Vec<BigRational>),
}

/// An exact scalar. See the module documentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(Repr::Q(BigRational::zero()))
    }

    pub fn one() -> Scalar {
        Scalar(Repr::Q(BigRational::one()))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar(Repr::Q(BigRational::from_integer(n.into())))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar(Repr::Q(BigRational::from_integer(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar(Repr::Q(BigRational::new(num.into(), den.into())))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar(Repr::Q(r))
    }

    /// The primitive root of unity of the tower, `z = exp(2 pi i / n)`.
    pub fn zeta(tower: Tower) -> Scalar {
        let phi = tower.phi();
        if phi == 1 {
            let c = cyclotomic(tower.zeta);
            return Scalar::from_int(-c[0]);
        }
        let mut v = vec![BigRational::zero(); tower.dim()];
        v[1] = BigRational::one();
        Scalar::normalize(tower, v)
    }

    /// Square root of `q`: an integer when `q` is a perfect square, otherwise
    /// the formal generator `s` of a tower adjoining it.
    pub fn sqrt(q: u64, tower: Tower) -> Result<Scalar> {
        if let Some(r) = integer_sqrt(q) {
            return Ok(Scalar::from_int(r as i64));
        }
        if tower.s_sq != q {
            return Err(Error::MissingSqrt(q));
        }
        let mut v = vec![BigRational::zero(); tower.dim()];
        v[tower.phi()] = BigRational::one();
        Ok(Scalar::normalize(tower, v))
    }

    fn normalize(tower: Tower, v: Vec<BigRational>) -> Scalar {
        if tower.is_rational() || v[1..].iter().all(Zero::is_zero) {
            let mut v = v;
            return Scalar(Repr::Q(v.swap_remove(0)));
        }
        Scalar(Repr::T(tower, v))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::T(..) => false,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Q(r) if r.is_one())
    }

    /// The rational value, if the scalar has no generator part.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(r) => Some(r),
            Repr::T(..) => None,
        }
    }

    /// Tower of the generators occurring in this value (`RATIONAL` if none).
    pub fn tower(&self) -> Tower {
        match &self.0 {
            Repr::Q(_) => Tower::RATIONAL,
            Repr::T(t, _) => *t,
        }
    }

    fn coords(&self, tower: Tower) -> Vec<BigRational> {
        match &self.0 {
            Repr::T(_, v) => v.clone(),
            Repr::Q(r) => {
                let mut v = vec![BigRational::zero(); tower.dim()];
                v[0] = r.clone();
                v
            }
        }
    }

    fn common_tower(&self, other: &Scalar) -> Result<Option<Tower>> {
        match (&self.0, &other.0) {
            (Repr::Q(_), Repr::Q(_)) => Ok(None),
            (Repr::T(t, _), Repr::Q(_)) | (Repr::Q(_), Repr::T(t, _)) => Ok(Some(*t)),
            (Repr::T(a, _), Repr::T(b, _)) if a == b => Ok(Some(*a)),
            (Repr::T(a, _), Repr::T(b, _)) => Err(Error::TowerMismatch(a.to_string(), b.to_string())),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.common_tower(other)? {
            None => Scalar(Repr::Q(self.rat() + other.rat())),
            Some(t) => {
                let mut a = self.coords(t);
                for (x, y) in a.iter_mut().zip(other.coords(t)) {
                    *x += y;
                }
                Scalar::normalize(t, a)
            }
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.common_tower(other)? {
            None => Scalar(Repr::Q(self.rat() * other.rat())),
            Some(t) => {
                if let Some(r) = self.as_rational() {
                    return Ok(other.scale(r));
                }
                if let Some(r) = other.as_rational() {
                    return Ok(self.scale(r));
                }
                Scalar::normalize(t, tower_mul(t, &self.coords(t), &other.coords(t)))
            }
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse; fails on zero and on zero divisors.
    pub fn inv(&self) -> Result<Scalar> {
        match &self.0 {
            Repr::Q(r) if r.is_zero() => Err(Error::DivisionByZero),
            Repr::Q(r) => Ok(Scalar(Repr::Q(r.recip()))),
            Repr::T(t, v) => {
                let t = *t;
                let phi = t.phi();
                let poly = cyclotomic(t.zeta);
                let zero_divisor = || Error::ZeroDivisor(self.to_string());
                if t.s_sq == 0 {
                    let inv = cyc_inv(v, &poly).ok_or_else(zero_divisor)?;
                    return Ok(Scalar::normalize(t, inv));
                }
                // (a + b s)^-1 = (a - b s) / (a^2 - q b^2)
                let (a, b) = v.split_at(phi);
                let q = BigRational::from_integer(t.s_sq.into());
                let a2 = cyc_mul(a, a, &poly);
                let b2 = cyc_mul(b, b, &poly);
                let norm: Vec<BigRational> = a2.iter().zip(&b2).map(|(x, y)| x - &q * y).collect();
                let ninv = cyc_inv(&norm, &poly).ok_or_else(zero_divisor)?;
                let mut out = cyc_mul(a, &ninv, &poly);
                out.extend(cyc_mul(b, &ninv, &poly).into_iter().map(|x| -x));
                Ok(Scalar::normalize(t, out))
            }
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Multiply by a rational.
    pub fn scale(&self, r: &BigRational) -> Scalar {
        match &self.0 {
            Repr::Q(x) => Scalar(Repr::Q(x * r)),
            Repr::T(t, v) => Scalar::normalize(*t, v.iter().map(|x| x * r).collect()),
        }
    }

    fn rat(&self) -> &BigRational {
        match &self.0 {
            Repr::Q(r) => r,
            Repr::T(..) => unreachable!("rational view of a tower element"),
        }
    }

    /// Complex value under `z = exp(2 pi i/n)` and `s = +sqrt(q)`.
    pub fn to_complex(&self) -> (f64, f64) {
        match &self.0 {
            Repr::Q(r) => (rat_to_f64(r), 0.0),
            Repr::T(t, v) => {
                let phi = t.phi();
                let s = (t.s_sq as f64).sqrt();
                let (mut re, mut im) = (0.0, 0.0);
                for (idx, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (i, j) = (idx % phi, idx / phi);
                    let ang = 2.0 * std::f64::consts::PI * i as f64 / t.zeta as f64;
                    let m = rat_to_f64(c) * if j == 1 { s } else { 1.0 };
                    re += m * ang.cos();
                    im += m * ang.sin();
                }
                (re, im)
            }
        }
    }

    /// Absolute value of the complex embedding.
    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    /// Short decimal rendering of the complex embedding.
    pub fn decimal(&self) -> String {
        let (re, im) = self.to_complex();
        if im.abs() <= 1e-12 * re.abs().max(1.0) {
            format_decimal(re)
        } else {
            let sign = if im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", format_decimal(re), sign, format_decimal(im.abs()))
        }
    }

    /// Parse the exact string form, e.g. `"3/4"`, `"1/2*z^1 + 1"`, `"-s"`.
    pub fn parse(text: &str, tower: Tower) -> Result<Scalar> {
        let err = |m: &str| Error::Parse(format!("{m} in scalar {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            let prev = compact[..i].chars().last();
            if (ch == '+' || ch == '-') && i > start && !matches!(prev, Some('^' | '+' | '-' | '*' | '/')) {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut acc = Scalar::zero();
        for term in terms {
            let mut neg = false;
            let mut body = term;
            while let Some(c) = body.chars().next().filter(|c| *c == '+' || *c == '-') {
                neg ^= c == '-';
                body = &body[1..];
            }
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let mut val = Scalar::one();
            for factor in body.split('*') {
                let f = if factor == "s" {
                    let q = tower.sqrt_radicand().ok_or_else(|| err("tower has no s"))?;
                    Scalar::sqrt(q, tower)?
                } else if let Some(e) = factor.strip_prefix("z") {
                    let e = match e.strip_prefix('^') {
                        Some(e) => e.parse::<i64>().map_err(|_| err("bad exponent"))?,
                        None if e.is_empty() => 1,
                        None => return Err(err("bad factor")),
                    };
                    Scalar::zeta(tower).pow(e)?
                } else {
                    let r: BigRational = factor.parse().map_err(|_| err("bad rational"))?;
                    Scalar::from_rational(r)
                };
                val = val.checked_mul(&f)?;
            }
            acc = acc.checked_add(&if neg { -val } else { val })?;
        }
        Ok(acc)
    }
}

fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-6..1e15).contains(&a) {
        let s = format!("{:.12}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{:.12e}", x)
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64().filter(|x| x.is_finite() && *x != 0.0) {
        return x;
    }
    if r.is_zero() {
        return 0.0;
    }
    // Shift both parts down to 64 significant bits before dividing.
    let a = r.numer().bits().saturating_sub(64);
    let b = r.denom().bits().saturating_sub(64);
    let n = (r.numer() >> a as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> b as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((a as i64 - b as i64) as i32)
}

fn tower_mul(t: Tower, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let poly = cyclotomic(t.zeta);
    if t.s_sq == 0 {
        return cyc_mul(a, b, &poly);
    }
    let phi = t.phi();
    let (a0, a1) = a.split_at(phi);
    let (b0, b1) = b.split_at(phi);
    let q = BigRational::from_integer(t.s_sq.into());
    let x00 = cyc_mul(a0, b0, &poly);
    let x11 = cyc_mul(a1, b1, &poly);
    let x01 = cyc_mul(a0, b1, &poly);
    let x10 = cyc_mul(a1, b0, &poly);
    let mut out: Vec<BigRational> = x00.iter().zip(&x11).map(|(x, y)| x + &q * y).collect();
    out.extend(x01.iter().zip(&x10).map(|(x, y)| x + y));
    out
}

fn cyc_mul(a: &[BigRational], b: &[BigRational], poly: &[i64]) -> Vec<BigRational> {
    let phi = poly.len() - 1;
    let mut r = vec![BigRational::zero(); 2 * phi - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                r[i + j] += x * y;
            }
        }
    }
    reduce_mod(&mut r, poly);
    r.truncate(phi);
    r
}

fn reduce_mod(r: &mut Vec<BigRational>, poly: &[i64]) {
    let phi = poly.len() - 1;
    for deg in (phi..r.len()).rev() {
        let c = std::mem::take(&mut r[deg]);
        if c.is_zero() {
            continue;
        }
        for (j, p) in poly[..phi].iter().enumerate() {
            if *p != 0 {
                r[deg - phi + j] -= &c * BigRational::from_integer((*p).into());
            }
        }
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Inverse of `a` modulo the cyclotomic polynomial by extended Euclid.
fn cyc_inv(a: &[BigRational], poly: &[i64]) -> Option<Vec<BigRational>> {
    let phi = poly.len() - 1;
    let mut r0: Vec<BigRational> = poly.iter().map(|c| BigRational::from_integer((*c).into())).collect();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
    while r1.len() > 1 {
        let (q, r) = poly_divmod(&r0, &r1);
        let mut s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        trim(&mut s2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        if r1.is_empty() {
            return None;
        }
    }
    let c = r1[0].recip();
    let mut out: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
    reduce_mod(&mut out, poly);
    out.resize(phi, BigRational::zero());
    Some(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect()
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].recip();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead;
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= &c * y;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    trim(&mut r);
    (q, r)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(r) => write!(f, "{}", r),
            Repr::T(t, v) => {
                let phi = t.phi();
                let mut terms = Vec::new();
                for idx in (0..v.len()).rev() {
                    let c = &v[idx];
                    if c.is_zero() {
                        continue;
                    }
                    let (i, j) = (idx % phi, idx / phi);
                    let mut mono = Vec::new();
                    if i > 0 {
                        mono.push(format!("z^{i}"));
                    }
                    if j == 1 {
                        mono.push("s".to_string());
                    }
                    let mono = mono.join("*");
                    terms.push(if mono.is_empty() {
                        c.to_string()
                    } else if c.is_one() {
                        mono
                    } else if (-c).is_one() {
                        format!("-{mono}")
                    } else {
                        format!("{c}*{mono}")
                    });
                }
                let mut out = String::new();
                for (i, t) in terms.iter().enumerate() {
                    match (i, t.strip_prefix('-')) {
                        (0, _) => out.push_str(t),
                        (_, Some(rest)) => {
                            out.push_str(" - ");
                            out.push_str(rest);
                        }
                        (_, None) => {
                            out.push_str(" + ");
                            out.push_str(t);
                        }
                    }
                }
                write!(f, "{out}")
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Scalar {
        Scalar::from_rational(r)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Scalar {
        Scalar::from_bigint(n)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(r) => Scalar(Repr::Q(-r)),
            Repr::T(t, v) => Scalar(Repr::T(*t, v.iter().map(|x| -x).collect())),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Q(a), Repr::Q(b)) = (&mut self.0, &rhs.0) {
            *a += b;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Q(a), Repr::Q(b)) = (&mut self.0, &rhs.0) {
            *a -= b;
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Q(a), Repr::Q(b)) = (&mut self.0, &rhs.0) {
            *a *= b;
            return;
        }
        *self = &*self * rhs;
    }
}

/// Greatest common divisor of two positive integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}
