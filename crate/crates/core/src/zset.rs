//! Admissible Z-sets described by orbit counts, and maps described fiberwise.
//!
//! Orbits of a finite [`ZSet`] are enumerated in canonical order: by degree,
//! then by index within the degree. Infinite Z-sets store counts up to a
//! degree cap and refuse questions beyond it.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{mobius, Scalar};
use crate::witt::WittVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSet {
    /// `counts[d-1]` is the number of orbits of degree `d`.
    counts: Vec<BigUint>,
    finite: bool,
    name: Option<String>,
}

impl ZSet {
    /// Finite Z-set with `counts[d-1]` orbits of degree `d`.
    pub fn finite(counts: &[u64]) -> ZSet {
        let mut counts: Vec<BigUint> = counts.iter().map(|&c| BigUint::from(c)).collect();
        while counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        ZSet { counts, finite: true, name: None }
    }

    /// Finite Z-set with one orbit per listed degree.
    pub fn from_degrees(degrees: &[usize]) -> ZSet {
        let max = degrees.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0u64; max];
        for &d in degrees {
            assert!(d >= 1, "orbit degrees are positive");
            counts[d - 1] += 1;
        }
        ZSet::finite(&counts)
    }

    /// The one-point set.
    pub fn point() -> ZSet {
        ZSet::finite(&[1])
    }

    pub fn empty() -> ZSet {
        ZSet::finite(&[])
    }

    /// Infinite Z-set from explicit counts for degrees `1..=counts.len()`.
    pub fn capped(counts: Vec<BigUint>, name: impl Into<String>) -> ZSet {
        ZSet { counts, finite: false, name: Some(name.into()) }
    }

    /// Closed points of projective `n`-space over `F_q`, up to degree `cap`.
    pub fn projective_space(q: u64, n: u32, cap: usize) -> ZSet {
        let q = BigUint::from(q);
        let points = |e: usize| -> BigUint {
            let qe = q.pow(e as u32);
            (qe.pow(n + 1) - 1u32) / (qe - 1u32)
        };
        let counts = (1..=cap)
            .map(|d| {
                let mut pos = BigUint::zero();
                let mut neg = BigUint::zero();
                for e in (1..=d).filter(|e| d % e == 0) {
                    match mobius((d / e) as u64) {
                        1 => pos += points(e),
                        -1 => neg += points(e),
                        _ => {}
                    }
                }
                (pos - neg) / BigUint::from(d)
            })
            .collect();
        ZSet::capped(counts, format!("P{n}(F{q})"))
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Degree cap for infinite sets; `None` when finite.
    pub fn cap(&self) -> Option<usize> {
        (!self.finite).then_some(self.counts.len())
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> ZSet {
        self.name = Some(name.into());
        self
    }

    /// Largest degree with a stored count.
    pub fn max_degree(&self) -> usize {
        self.counts.len()
    }

    /// Number of orbits of degree `d`.
    pub fn count(&self, d: usize) -> Result<BigUint> {
        assert!(d >= 1, "orbit degrees are positive");
        match self.counts.get(d - 1) {
            Some(c) => Ok(c.clone()),
            None if self.finite => Ok(BigUint::zero()),
            None => Err(Error::Cap { needed: d, cap: self.counts.len() }),
        }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `#V(k) = sum_{d | k} d a_d`.
    pub fn fixed_points(&self, k: usize) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for d in (1..=k).filter(|d| k % d == 0) {
            total += self.count(d)? * BigUint::from(d);
        }
        Ok(total)
    }

    /// The class `[V]`: ghost `k` is `#V(k)`.
    pub fn class(&self, precision: usize) -> Result<WittVec> {
        if let Some(cap) = self.cap() {
            if cap < precision {
                return Err(Error::Cap { needed: precision, cap });
            }
        }
        let ghost = (1..=precision)
            .map(|k| self.fixed_points(k).map(|n| Scalar::from_rational(BigRational::from_integer(n.into()))))
            .collect::<Result<Vec<_>>>()?;
        WittVec::from_ghost(ghost)
    }

    /// `V_k`: each orbit of degree `d` splits into `gcd(d,k)` orbits of degree `d / gcd(d,k)`.
    pub fn extend(&self, k: usize) -> ZSet {
        assert!(k >= 1, "extension degree is positive");
        let new_len = if self.finite { self.counts.len() } else { self.counts.len() / k };
        let mut counts = vec![BigUint::zero(); new_len];
        let source_len = if self.finite { self.counts.len() } else { new_len * k };
        for d in 1..=source_len {
            let g = d.gcd(&k);
            let nd = d / g;
            if nd <= new_len {
                counts[nd - 1] += &self.counts[d - 1] * BigUint::from(g);
            }
        }
        let mut out = ZSet { counts, finite: self.finite, name: self.name.as_ref().map(|n| format!("{n}_{k}")) };
        if out.finite {
            while out.counts.last().is_some_and(Zero::is_zero) {
                out.counts.pop();
            }
        }
        out
    }

    /// Degrees of all orbits in canonical order (finite sets only).
    pub fn orbit_degrees(&self) -> Result<Vec<usize>> {
        if !self.finite {
            return Err(Error::Parameter("cannot enumerate the orbits of an infinite Z-set".into()));
        }
        let mut out = Vec::new();
        for (i, c) in self.counts.iter().enumerate() {
            let c = c.to_usize().ok_or_else(|| Error::Parameter("orbit count too large to enumerate".into()))?;
            out.extend(std::iter::repeat(i + 1).take(c));
        }
        Ok(out)
    }

    pub fn orbit_count(&self) -> Result<usize> {
        Ok(self.orbit_degrees()?.len())
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(Zero::is_zero)
    }

    /// `V_k` together with, for each orbit of `V_k` in canonical order, the
    /// canonical index of the orbit of `V` it comes from.
    pub fn extend_with_origins(&self, k: usize) -> Result<(ZSet, Vec<usize>)> {
        let degrees = self.orbit_degrees()?;
        let ext = self.extend(k);
        let mut pieces: Vec<(usize, usize)> = Vec::new();
        for (idx, &d) in degrees.iter().enumerate() {
            let g = d.gcd(&k);
            pieces.extend(std::iter::repeat((d / g, idx)).take(g));
        }
        // stable sort keeps the source order within a degree
        pieces.sort_by_key(|&(nd, _)| nd);
        Ok((ext, pieces.into_iter().map(|(_, i)| i).collect()))
    }

    /// Product of finite Z-sets: orbits of degrees `a`, `b` give `gcd(a,b)` orbits of degree `lcm(a,b)`.
    pub fn product(&self, other: &ZSet) -> Result<ZSet> {
        let a = self.orbit_degrees()?;
        let b = other.orbit_degrees()?;
        let max = a.iter().flat_map(|x| b.iter().map(move |y| x.lcm(y))).max().unwrap_or(0);
        let mut counts = vec![0u64; max];
        for x in &a {
            for y in &b {
                counts[x.lcm(y) - 1] += x.gcd(y) as u64;
            }
        }
        Ok(ZSet::finite(&counts))
    }

    /// `(degree, count)` pairs with nonzero count.
    pub fn pairs(&self) -> Vec<(usize, BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i + 1, c.clone())).collect()
    }
}

impl fmt::Display for ZSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().iter().map(|(d, c)| format!("({d},{c})")).collect();
        write!(f, "[{}]", pairs.join(","))?;
        if let Some(n) = &self.name {
            write!(f, " {n}")?;
        }
        if let Some(cap) = self.cap() {
            write!(f, " cap {cap}")?;
        }
        Ok(())
    }
}

/// A map `V -> B` described by the finite base `B` and, for each base orbit
/// in canonical order, the fiber over it with action multiplied by the orbit
/// degree. A fiber orbit of degree `e` over a base orbit of degree `b` is an
/// orbit of `V` of degree `b e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMap {
    base: ZSet,
    base_degrees: Vec<usize>,
    fibers: Vec<ZSet>,
}

/// Position of an orbit of the total space: base orbit and orbit in its fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TotalOrbit {
    pub base: usize,
    pub fiber: usize,
}

impl ZMap {
    pub fn new(base: ZSet, fibers: Vec<ZSet>) -> Result<ZMap> {
        let base_degrees = base.orbit_degrees()?;
        if base_degrees.len() != fibers.len() {
            return Err(Error::Parameter(format!("{} fibers for {} base orbits", fibers.len(), base_degrees.len())));
        }
        Ok(ZMap { base, base_degrees, fibers })
    }

    /// `V -> 1`.
    pub fn to_point(v: ZSet) -> ZMap {
        ZMap::new(ZSet::point(), vec![v]).expect("one fiber over the point")
    }

    /// Identity of a finite Z-set.
    pub fn identity(v: &ZSet) -> Result<ZMap> {
        let n = v.orbit_count()?;
        ZMap::new(v.clone(), vec![ZSet::point(); n])
    }

    /// Projection `V x B -> B`; the fiber over a degree-`k` orbit is `V_k`.
    pub fn product_projection(v: &ZSet, b: &ZSet) -> Result<ZMap> {
        let fibers = b.orbit_degrees()?.into_iter().map(|k| v.extend(k)).collect();
        ZMap::new(b.clone(), fibers)
    }

    pub fn base(&self) -> &ZSet {
        &self.base
    }

    pub fn base_degrees(&self) -> &[usize] {
        &self.base_degrees
    }

    pub fn fibers(&self) -> &[ZSet] {
        &self.fibers
    }

    pub fn fiber(&self, b: usize) -> Result<&ZSet> {
        self.fibers.get(b).ok_or(Error::UnknownOrbit(b))
    }

    /// Every fiber has at least one orbit.
    pub fn has_section(&self) -> bool {
        self.fibers.iter().all(|f| !f.is_empty())
    }

    /// The total space and, for each of its orbits in canonical order, the
    /// corresponding base/fiber position.
    pub fn total(&self) -> Result<(ZSet, Vec<TotalOrbit>)> {
        let mut orbits: Vec<(usize, TotalOrbit)> = Vec::new();
        for (b, (fiber, &bd)) in self.fibers.iter().zip(&self.base_degrees).enumerate() {
            for (w, e) in fiber.orbit_degrees()?.into_iter().enumerate() {
                orbits.push((bd * e, TotalOrbit { base: b, fiber: w }));
            }
        }
        orbits.sort_by_key(|(d, o)| (*d, *o));
        let degrees: Vec<usize> = orbits.iter().map(|(d, _)| *d).collect();
        Ok((ZSet::from_degrees(&degrees), orbits.into_iter().map(|(_, o)| o).collect()))
    }

    /// `V_k -> B_k`, with the origin base orbit of each new base orbit and,
    /// per new base orbit, the origin fiber orbit of each new fiber orbit.
    pub fn extend(&self, k: usize) -> Result<ExtendedMap> {
        let (base, base_origin) = self.base.extend_with_origins(k)?;
        let mut fibers = Vec::new();
        let mut fiber_origin = Vec::new();
        for &b in &base_origin {
            let g = self.base_degrees[b].gcd(&k);
            let src = &self.fibers[b];
            if src.is_finite() {
                let (f, origin) = src.extend_with_origins(k / g)?;
                fibers.push(f);
                fiber_origin.push(origin);
            } else {
                fibers.push(src.extend(k / g));
                fiber_origin.push(Vec::new());
            }
        }
        Ok(ExtendedMap { map: ZMap::new(base, fibers)?, base_origin, fiber_origin })
    }

    /// Base change along `psi: B' -> B` (given as a map whose base is this
    /// map's base): the fiber product `V' = V x_B B' -> B'`, where `B'` is the
    /// total space of `psi` in canonical order.
    pub fn base_change(&self, psi: &ZMap) -> Result<CartesianSquare> {
        if psi.base != self.base {
            return Err(Error::Parameter("base change needs maps over the same base".into()));
        }
        let (b1, layout) = psi.total()?;
        let mut fibers = Vec::new();
        let mut phi = Vec::new();
        for o in &layout {
            let g = psi.fibers[o.base].orbit_degrees()?[o.fiber];
            let src = &self.fibers[o.base];
            let src_degrees = src.orbit_degrees()?;
            let (f, origin) = src.extend_with_origins(g)?;
            phi.push(
                origin
                    .into_iter()
                    .map(|w| {
                        let fd = src_degrees[w];
                        (TotalOrbit { base: o.base, fiber: w }, g / fd.gcd(&g))
                    })
                    .collect(),
            );
            fibers.push(f);
        }
        Ok(CartesianSquare { map: ZMap::new(b1, fibers)?, psi_layout: layout, phi })
    }
}

/// Result of [`ZMap::extend`].
#[derive(Clone, Debug)]
pub struct ExtendedMap {
    pub map: ZMap,
    pub base_origin: Vec<usize>,
    /// Empty for infinite fibers.
    pub fiber_origin: Vec<Vec<usize>>,
}

/// Result of [`ZMap::base_change`].
#[derive(Clone, Debug)]
pub struct CartesianSquare {
    /// `V' -> B'`.
    pub map: ZMap,
    /// For each orbit of `B'` (canonical order), its position in `psi`.
    pub psi_layout: Vec<TotalOrbit>,
    /// `phi: V' -> V`: for each orbit of `V'` (by base, fiber position), the
    /// image orbit of `V` and the degree ratio `deg v' / deg phi(v')`.
    pub phi: Vec<Vec<(TotalOrbit, usize)>>,
}

pub(crate) fn biguint_to_rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(n.clone().into())
}
