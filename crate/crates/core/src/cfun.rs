//! Functions on admissible Z-sets that are constant on orbits: pullback,
//! integration over fibers, restriction to `V_k`, and expectations.
//!
//! Values are generic over [`OrbitValue`] so that the same machinery serves
//! Witt-vector valued functions and series whose coefficients are Witt vectors
//! (acted on coefficient-wise).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symfun::{Sym, SymSeries};
use crate::witt::WittVec;
use crate::zset::{biguint_to_rational, CartesianSquare, ExtendedMap, TotalOrbit, ZMap, ZSet};

/// Values a function on orbits can take.
pub trait OrbitValue: Clone + PartialEq + Send + Sync {
    /// `p_i` applied to the Witt coefficients.
    fn adams_coeff(&self, i: usize) -> Result<Self>;
    /// `t -> t^d` applied to the Witt coefficients.
    fn substitute(&self, d: usize) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale_count(&self, n: &BigUint) -> Self;
    /// Largest `i` for which [`adams_coeff`](Self::adams_coeff) succeeds.
    fn precision(&self) -> usize;
    fn truncate(&self, precision: usize) -> Result<Self>;
    /// Zero of the same shape as `self`.
    fn zero_like(&self, precision: usize) -> Self;
}

impl OrbitValue for WittVec {
    fn adams_coeff(&self, i: usize) -> Result<Self> {
        self.adams(i)
    }
    fn substitute(&self, d: usize) -> Self {
        WittVec::substitute(self, d)
    }
    fn add(&self, other: &Self) -> Self {
        WittVec::add(self, other)
    }
    fn scale_count(&self, n: &BigUint) -> Self {
        self.scale(&biguint_to_rational(n))
    }
    fn precision(&self) -> usize {
        WittVec::precision(self)
    }
    fn truncate(&self, precision: usize) -> Result<Self> {
        WittVec::truncate(self, precision)
    }
    fn zero_like(&self, precision: usize) -> Self {
        WittVec::zero(precision)
    }
}

impl OrbitValue for SymSeries {
    fn adams_coeff(&self, i: usize) -> Result<Self> {
        let terms = self.terms().iter().map(|(t, c)| Ok((t.clone(), c.adams(i)?))).collect::<Result<Vec<_>>>()?;
        Ok(Sym::from_terms(self.degree_cap(), (self.nominal_precision() / i).max(1), terms))
    }
    fn substitute(&self, d: usize) -> Self {
        SymSeries::substitute(self, d)
    }
    fn add(&self, other: &Self) -> Self {
        Sym::add(self, other)
    }
    fn scale_count(&self, n: &BigUint) -> Self {
        self.scale(&biguint_to_rational(n))
    }
    fn precision(&self) -> usize {
        self.min_precision().unwrap_or_else(|| self.nominal_precision())
    }
    fn truncate(&self, precision: usize) -> Result<Self> {
        self.truncate_precision(precision)
    }
    fn zero_like(&self, precision: usize) -> Self {
        Sym::zero(self.degree_cap(), precision)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Values<T> {
    /// One value per orbit in canonical order.
    PerOrbit(Vec<T>),
    /// `values[d-1]` on every orbit of degree `d`.
    Uniform(Vec<T>),
}

/// A function on the orbits of a Z-set.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitFunction<T = WittVec> {
    domain: ZSet,
    values: Values<T>,
}

impl<T: OrbitValue> OrbitFunction<T> {
    pub fn per_orbit(domain: ZSet, values: Vec<T>) -> Result<Self> {
        let n = domain.orbit_count()?;
        if n != values.len() {
            return Err(Error::Parameter(format!("{} values for {n} orbits", values.len())));
        }
        Ok(OrbitFunction { domain, values: Values::PerOrbit(values) })
    }

    /// Degree-uniform function. On a finite domain every orbit degree must be
    /// covered; on an infinite domain the function is known up to degree
    /// `min(values.len(), cap)`.
    pub fn uniform(domain: ZSet, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("degree-uniform function without values".into()));
        }
        if domain.is_finite() && values.len() < domain.max_degree() {
            return Err(Error::Cap { needed: domain.max_degree(), cap: values.len() });
        }
        Ok(OrbitFunction { domain, values: Values::Uniform(values) })
    }

    /// The same value on every orbit.
    pub fn constant(domain: ZSet, value: T) -> Self {
        let len = domain.max_degree().max(1);
        OrbitFunction { domain, values: Values::Uniform(vec![value; len]) }
    }

    pub fn domain(&self) -> &ZSet {
        &self.domain
    }

    pub fn values(&self) -> &Values<T> {
        &self.values
    }

    /// Largest degree with a known value (`None` when every orbit is covered).
    pub fn known_cap(&self) -> Option<usize> {
        match (&self.values, self.domain.cap()) {
            (Values::Uniform(v), Some(cap)) => Some(v.len().min(cap)),
            _ => None,
        }
    }

    /// Value on the orbit with canonical index `idx` (finite domains).
    pub fn value(&self, idx: usize) -> Result<&T> {
        match &self.values {
            Values::PerOrbit(v) => v.get(idx).ok_or(Error::UnknownOrbit(idx)),
            Values::Uniform(v) => {
                let degrees = self.domain.orbit_degrees()?;
                let d = *degrees.get(idx).ok_or(Error::UnknownOrbit(idx))?;
                Ok(&v[d - 1])
            }
        }
    }

    /// Value on orbits of degree `d` of a degree-uniform function.
    pub fn value_at_degree(&self, d: usize) -> Result<&T> {
        match &self.values {
            Values::Uniform(v) => v.get(d - 1).ok_or(Error::Cap { needed: d, cap: v.len() }),
            Values::PerOrbit(_) => Err(Error::Parameter("function is not degree-uniform".into())),
        }
    }

    /// `(degree, number of orbits, value)` over all known orbits, grouped
    /// by degree for uniform functions.
    pub fn orbit_classes(&self) -> Result<Vec<(usize, BigUint, &T)>> {
        match &self.values {
            Values::PerOrbit(v) => {
                let degrees = self.domain.orbit_degrees()?;
                Ok(degrees.into_iter().zip(v).map(|(d, x)| (d, BigUint::from(1u32), x)).collect())
            }
            Values::Uniform(v) => {
                let top = self.known_cap().unwrap_or(self.domain.max_degree());
                let mut out = Vec::new();
                for d in 1..=top {
                    let c = self.domain.count(d)?;
                    if !c.is_zero() {
                        out.push((d, c, &v[d - 1]));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Per-orbit form of a function on a finite domain.
    pub fn to_per_orbit(&self) -> Result<Self> {
        let n = self.domain.orbit_count()?;
        let values = (0..n).map(|i| self.value(i).cloned()).collect::<Result<Vec<_>>>()?;
        Ok(OrbitFunction { domain: self.domain.clone(), values: Values::PerOrbit(values) })
    }

    pub fn try_map<U: OrbitValue>(&self, f: impl Fn(&T) -> Result<U>) -> Result<OrbitFunction<U>> {
        let values = match &self.values {
            Values::PerOrbit(v) => Values::PerOrbit(v.iter().map(&f).collect::<Result<_>>()?),
            Values::Uniform(v) => Values::Uniform(v.iter().map(&f).collect::<Result<_>>()?),
        };
        Ok(OrbitFunction { domain: self.domain.clone(), values })
    }

    /// Pointwise combination of two functions on the same domain.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::Parameter("functions live on different Z-sets".into()));
        }
        match (&self.values, &other.values) {
            (Values::Uniform(a), Values::Uniform(b)) => {
                let values = a.iter().zip(b).map(|(x, y)| f(x, y)).collect();
                Ok(OrbitFunction { domain: self.domain.clone(), values: Values::Uniform(values) })
            }
            _ => {
                let (a, b) = (self.to_per_orbit()?, other.to_per_orbit()?);
                let (Values::PerOrbit(a), Values::PerOrbit(b)) = (&a.values, &b.values) else { unreachable!() };
                let values = a.iter().zip(b).map(|(x, y)| f(x, y)).collect();
                Ok(OrbitFunction { domain: self.domain.clone(), values: Values::PerOrbit(values) })
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, T::add)
    }

    /// Restriction to `V_k`: the value on an orbit of `V_k` coming from a
    /// degree-`d` orbit is `p_{k/gcd(d,k)}` of the original value.
    pub fn restrict(&self, k: usize) -> Result<Self> {
        match (&self.values, self.domain.is_finite()) {
            (Values::PerOrbit(v), _) => {
                let (ext, origin) = self.domain.extend_with_origins(k)?;
                let degrees = self.domain.orbit_degrees()?;
                let values = origin
                    .into_iter()
                    .map(|i| v[i].adams_coeff(k / degrees[i].gcd(&k)))
                    .collect::<Result<Vec<_>>>()?;
                OrbitFunction::per_orbit(ext, values)
            }
            (Values::Uniform(_), true) => self.to_per_orbit()?.restrict(k),
            (Values::Uniform(v), false) => {
                let ext = self.domain.extend(k);
                let top = self.known_cap().unwrap_or(0) / k;
                if top == 0 {
                    return Err(Error::Cap { needed: k, cap: self.known_cap().unwrap_or(0) });
                }
                let mut values: Vec<Option<T>> = vec![None; top];
                for d in 1..=top * k {
                    let g = d.gcd(&k);
                    let nd = d / g;
                    if nd > top || self.domain.count(d)?.is_zero() {
                        continue;
                    }
                    let val = v[d - 1].adams_coeff(k / g)?;
                    if values[nd - 1].as_ref().is_some_and(|prev| prev != &val) {
                        return Err(Error::Parameter(format!(
                            "restriction to degree {nd} mixes several source degrees; not degree-uniform"
                        )));
                    }
                    values[nd - 1] = Some(val);
                }
                let filler = v[0].adams_coeff(k)?;
                let values = values.into_iter().map(|x| x.unwrap_or_else(|| filler.clone())).collect();
                OrbitFunction::uniform(ext, values)
            }
        }
    }
}

impl OrbitFunction<WittVec> {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, WittVec::mul)
    }
}

/// A function on the total space of a [`ZMap`], stored fiber by fiber:
/// `parts[b]` is a function on the fiber over base orbit `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberFunction<T = WittVec> {
    parts: Vec<OrbitFunction<T>>,
}

impl<T: OrbitValue> FiberFunction<T> {
    pub fn new(map: &ZMap, parts: Vec<OrbitFunction<T>>) -> Result<Self> {
        if parts.len() != map.fibers().len() || parts.iter().zip(map.fibers()).any(|(p, f)| p.domain() != f) {
            return Err(Error::Parameter("fiber functions do not match the fibers of the map".into()));
        }
        Ok(FiberFunction { parts })
    }

    /// Per-orbit values given by `f(base orbit, fiber orbit)`.
    pub fn from_fn(map: &ZMap, mut f: impl FnMut(TotalOrbit) -> T) -> Result<Self> {
        let parts = map
            .fibers()
            .iter()
            .enumerate()
            .map(|(b, fiber)| {
                let n = fiber.orbit_count()?;
                OrbitFunction::per_orbit(fiber.clone(), (0..n).map(|w| f(TotalOrbit { base: b, fiber: w })).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiberFunction { parts })
    }

    /// From a function on the (finite) total space.
    pub fn from_total(map: &ZMap, f: &OrbitFunction<T>) -> Result<Self> {
        let (total, layout) = map.total()?;
        if f.domain() != &total {
            return Err(Error::Parameter("function is not defined on the total space".into()));
        }
        let mut slots: Vec<Vec<Option<T>>> =
            map.fibers().iter().map(|fib| fib.orbit_count().map(|n| vec![None; n])).collect::<Result<_>>()?;
        for (i, o) in layout.iter().enumerate() {
            slots[o.base][o.fiber] = Some(f.value(i)?.clone());
        }
        let parts = slots
            .into_iter()
            .zip(map.fibers())
            .map(|(s, fib)| OrbitFunction::per_orbit(fib.clone(), s.into_iter().map(Option::unwrap).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiberFunction { parts })
    }

    /// The function on the (finite) total space in its canonical order.
    pub fn to_total(&self, map: &ZMap) -> Result<OrbitFunction<T>> {
        let (total, layout) = map.total()?;
        let values = layout.iter().map(|o| self.parts[o.base].value(o.fiber).cloned()).collect::<Result<Vec<_>>>()?;
        OrbitFunction::per_orbit(total, values)
    }

    pub fn parts(&self) -> &[OrbitFunction<T>] {
        &self.parts
    }

    pub fn part(&self, b: usize) -> Result<&OrbitFunction<T>> {
        self.parts.get(b).ok_or(Error::UnknownOrbit(b))
    }

    pub fn try_map<U: OrbitValue>(&self, f: impl Fn(&T) -> Result<U>) -> Result<FiberFunction<U>> {
        Ok(FiberFunction { parts: self.parts.iter().map(|p| p.try_map(&f)).collect::<Result<_>>()? })
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::Parameter("fiber functions over different bases".into()));
        }
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.zip_with(b, &f)).collect::<Result<_>>()?;
        Ok(FiberFunction { parts })
    }

    fn any_value(&self) -> Option<&T> {
        self.parts.iter().find_map(|p| match p.values() {
            Values::PerOrbit(v) => v.first(),
            Values::Uniform(v) => v.first(),
        })
    }
}

impl FiberFunction<WittVec> {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, WittVec::mul)
    }
}

/// `(phi^* g)(v) = p_{deg v / deg phi(v)} g(phi(v))` for the projection of `map`.
pub fn pullback<T: OrbitValue>(map: &ZMap, g: &OrbitFunction<T>) -> Result<FiberFunction<T>> {
    if g.domain() != map.base() {
        return Err(Error::Parameter("function is not defined on the base".into()));
    }
    let parts = map
        .fibers()
        .iter()
        .enumerate()
        .map(|(b, fiber)| {
            let gb = g.value(b)?;
            if fiber.is_finite() {
                let values = fiber.orbit_degrees()?.into_iter().map(|e| gb.adams_coeff(e)).collect::<Result<Vec<_>>>()?;
                OrbitFunction::per_orbit(fiber.clone(), values)
            } else {
                let top = fiber.cap().unwrap_or(0).min(gb.precision());
                let values = (1..=top).map(|e| gb.adams_coeff(e)).collect::<Result<Vec<_>>>()?;
                OrbitFunction::uniform(fiber.clone(), values)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberFunction { parts })
}

/// Pullback along `phi: V' -> V` of a cartesian square.
pub fn pullback_phi<T: OrbitValue>(square: &CartesianSquare, f: &FiberFunction<T>) -> Result<FiberFunction<T>> {
    let parts = square
        .phi
        .iter()
        .zip(square.map.fibers())
        .map(|(images, fiber)| {
            let values = images
                .iter()
                .map(|(o, ratio)| f.part(o.base)?.value(o.fiber)?.adams_coeff(*ratio))
                .collect::<Result<Vec<_>>>()?;
            OrbitFunction::per_orbit(fiber.clone(), values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberFunction { parts })
}

/// Restriction of a fiberwise function on `V -> B` to `V_k -> B_k` (finite fibers).
pub fn restrict_fibered<T: OrbitValue>(map: &ZMap, ext: &ExtendedMap, f: &FiberFunction<T>, k: usize) -> Result<FiberFunction<T>> {
    let parts = ext
        .map
        .fibers()
        .iter()
        .enumerate()
        .map(|(c, fiber)| {
            let b = ext.base_origin[c];
            let bd = map.base_degrees()[b];
            let src_degrees = map.fiber(b)?.orbit_degrees()?;
            let values = ext.fiber_origin[c]
                .iter()
                .map(|&w| {
                    let total = bd * src_degrees[w];
                    f.part(b)?.value(w)?.adams_coeff(k / total.gcd(&k))
                })
                .collect::<Result<Vec<_>>>()?;
            OrbitFunction::per_orbit(fiber.clone(), values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberFunction { parts })
}

/// Integral over one fiber: `sum_{|v|} f(|v|)(t^{deg |v|})`.
fn integrate_fiber<T: OrbitValue>(f: &OrbitFunction<T>, template: &T) -> Result<T> {
    let classes = f.orbit_classes()?;
    let mut acc: Option<T> = None;
    for (e, count, val) in classes {
        let term = val.substitute(e).scale_count(&count);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let mut acc = acc.unwrap_or_else(|| template.zero_like(template.precision()));
    if let Some(cap) = f.known_cap() {
        // orbits beyond the known degrees feed ghost indices above the cap
        acc = acc.truncate(cap.min(acc.precision()))?;
    }
    Ok(acc)
}

/// `(int f)(b) = sum_{|v| in |V_b|} f(|v|)(t^{deg |v|})`.
pub fn integrate<T: OrbitValue>(map: &ZMap, f: &FiberFunction<T>) -> Result<OrbitFunction<T>> {
    if f.parts.len() != map.fibers().len() {
        return Err(Error::Parameter("function does not match the map".into()));
    }
    let template = f.any_value().ok_or_else(|| Error::Empty("integral of a function with no values".into()))?.clone();
    let values = f.parts.iter().map(|p| integrate_fiber(p, &template)).collect::<Result<Vec<_>>>()?;
    OrbitFunction::per_orbit(map.base().clone(), values)
}

/// Integral over a Z-set to the point.
pub fn integrate_to_point<T: OrbitValue>(f: &OrbitFunction<T>) -> Result<T> {
    let template = match f.values() {
        Values::PerOrbit(v) => v.first(),
        Values::Uniform(v) => v.first(),
    }
    .ok_or_else(|| Error::Empty("integral of a function with no values".into()))?
    .clone();
    integrate_fiber(f, &template)
}

/// `E_{V/B}[f] = int f / [V/B]`, fiber by fiber.
pub fn expectation(map: &ZMap, f: &FiberFunction<WittVec>) -> Result<OrbitFunction<WittVec>> {
    let integral = integrate(map, f)?;
    let values = map
        .fibers()
        .iter()
        .enumerate()
        .map(|(b, fiber)| {
            let num = integral.value(b)?;
            let class = fiber.class(num.precision())?;
            num.div(&class).map_err(|_| Error::NotInvertible(b))
        })
        .collect::<Result<Vec<_>>>()?;
    OrbitFunction::per_orbit(map.base().clone(), values)
}

/// `E[f]` over `V -> 1`.
pub fn expectation_to_point(f: &OrbitFunction<WittVec>) -> Result<WittVec> {
    let num = integrate_to_point(f)?;
    let class = f.domain().class(num.precision())?;
    num.div(&class).map_err(|_| Error::NotInvertible(0))
}

/// `E_k[f]`: the uniform average over the fixed points `V_k(1)` of the first
/// ghost component of the restriction of `f` to `V_k`.
pub fn expectation_ghost(f: &OrbitFunction<WittVec>, k: usize) -> Result<Scalar> {
    if f.domain().is_finite() {
        let r = f.restrict(k)?;
        let mut total = Scalar::zero();
        let mut count = 0u64;
        for (idx, d) in r.domain().orbit_degrees()?.into_iter().enumerate() {
            if d == 1 {
                total += r.value(idx)?.ghost(1)?;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::Empty(format!("no fixed points over degree {k}")));
        }
        return Ok(total.scale(&BigRational::new(1.into(), count.into())));
    }
    // infinite domain: each degree-d orbit with d | k contributes d fixed points
    let mut total = Scalar::zero();
    let mut count = BigUint::zero();
    for d in (1..=k).filter(|d| k % d == 0) {
        let a = f.domain().count(d)?;
        if a.is_zero() {
            continue;
        }
        let n = a * BigUint::from(d);
        let v = f.value_at_degree(d)?.ghost(k / d)?.clone();
        total += &v.scale(&biguint_to_rational(&n));
        count += n;
    }
    if count.is_zero() {
        return Err(Error::Empty(format!("no fixed points over degree {k}")));
    }
    Ok(total.scale(&BigRational::new(1.into(), BigInt::from(count))))
}
