//! Empirical sigma-moment generating functions and equidistribution.
//!
//! A run scans a family of forms over `F_Q` (exhaustively or by seeded Monte
//! Carlo), keeps the admissible members, and records for each one the ghost
//! vector `x_j` of its random variable together with its Taylor data at the
//! selected rational points. Sums are exact integers in `Z[zeta_l]`, merged
//! in chunk order, so reports do not depend on the thread count.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::forms::{self, binary_is_squarefree, binary_point_count, common_zero_count, decode, is_normalized, projective_points, Form};
use super::gf::{FieldTower, GF};
use super::poly::{self, Poly};
use super::transversal::ci_pair_is_transversal;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{Scalar, Tower};
use crate::symfun::{Basis, SymSeries};

const CHUNK: u64 = 4096;

/// Which local condition the character family imposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerFree {
    Squarefree,
    /// No factor of multiplicity `l`.
    EllPowerFree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleFamily {
    /// Squarefree binary forms of degree `d`: smooth hypersurfaces of `P^1`;
    /// the variable is the zero locus.
    BinaryForms { d: u32 },
    /// Smooth plane curves of degree `d`.
    PlaneCurves { d: u32 },
    /// Monic power-free `f` of degree `d`; the variable has ghost
    /// `sum_z chi(f(z))` over the affine line.
    Character { d: u32, ell: u32, free: PowerFree },
    /// Transverse pairs of plane curves of degrees `(d1, d2)`; the variable
    /// is the intersection.
    CiPairs { d1: u32, d2: u32 },
}

impl SampleFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SampleFamily::BinaryForms { .. } => "smooth_hypersurface",
            SampleFamily::PlaneCurves { .. } => "smooth_hypersurface",
            SampleFamily::Character { .. } => "character",
            SampleFamily::CiPairs { .. } => "ci_zeta",
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        match *self {
            SampleFamily::BinaryForms { d } | SampleFamily::PlaneCurves { d } | SampleFamily::Character { d, .. } => vec![d],
            SampleFamily::CiPairs { d1, d2 } => vec![d1, d2],
        }
    }

    fn zeta_order(&self) -> usize {
        match self {
            SampleFamily::Character { ell, .. } => *ell as usize,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    pub family: SampleFamily,
    pub q: u64,
    /// Largest `|tau|` recorded.
    pub n: usize,
    /// Ghost index: the family is taken over `F_{q^k}`.
    pub ghost_k: u32,
    /// Indices of rational points (or affine points for the character
    /// family) whose Taylor data are tallied.
    pub points: Vec<usize>,
    pub sampling: Sampling,
    pub budget: u64,
}

impl SampleSpec {
    pub fn new(family: SampleFamily, q: u64, n: usize) -> SampleSpec {
        SampleSpec { family, q, n, ghost_k: 1, points: vec![0], sampling: Sampling::Exhaustive, budget: 1 << 24 }
    }

    /// Number of coefficient vectors an exhaustive scan visits, if it fits in `u64`.
    pub fn state_space(&self) -> Option<u64> {
        let width = match self.family {
            SampleFamily::BinaryForms { d } => d as usize + 1,
            SampleFamily::PlaneCurves { d } => forms::monomials(2, d).len(),
            SampleFamily::Character { d, .. } => d as usize,
            SampleFamily::CiPairs { d1, d2 } => forms::monomials(2, d1).len() + forms::monomials(2, d2).len(),
        };
        self.q.checked_pow(self.ghost_k)?.checked_pow(width as u32)
    }
}

/// Element of `Z[x]/(x^l - 1)`, `x` standing for a primitive `l`-th root of unity.
type Cyc = Vec<i128>;

fn cyc_mul(a: &Cyc, b: &Cyc) -> Cyc {
    let l = a.len();
    let mut out = vec![0i128; l];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[(i + j) % l] += x * y;
        }
    }
    out
}

fn cyc_scale(a: &Cyc, c: i128) -> Cyc {
    a.iter().map(|&x| x * c).collect()
}

fn cyc_add_assign(a: &mut Cyc, b: &Cyc) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += *y;
    }
}

/// `H_n = n! h_n` from power-sum ghosts `x_1..x_N`:
/// `H_n = sum_j x_j (n-1)!/(n-j)! H_{n-j}`.
fn scaled_h(x: &[Cyc], l: usize) -> Vec<Cyc> {
    let mut unit = vec![0i128; l];
    unit[0] = 1;
    let mut h = vec![unit];
    for n in 1..=x.len() {
        let mut acc = vec![0i128; l];
        for j in 1..=n {
            let falling: i128 = ((n - j + 1)..n).map(|v| v as i128).product();
            cyc_add_assign(&mut acc, &cyc_scale(&cyc_mul(&x[j - 1], &h[n - j]), falling));
        }
        h.push(acc);
    }
    h
}

/// One sampled member of the family.
struct Outcome {
    ghosts: Vec<Cyc>,
    jets: Vec<u32>,
}

#[derive(Clone, Debug, Default)]
struct Acc {
    enumerated: u64,
    admissible: u64,
    sums: Vec<Cyc>,
    jets: BTreeMap<Vec<u32>, u64>,
}

impl Acc {
    fn merge(&mut self, other: Acc) {
        self.enumerated += other.enumerated;
        self.admissible += other.admissible;
        if self.sums.is_empty() {
            self.sums = other.sums;
        } else {
            for (a, b) in self.sums.iter_mut().zip(&other.sums) {
                cyc_add_assign(a, b);
            }
        }
        for (k, v) in other.jets {
            *self.jets.entry(k).or_default() += v;
        }
    }
}

/// Precomputed fields and tables for a run.
struct Context {
    spec: SampleSpec,
    tower: FieldTower,
    exts: Vec<(Arc<GF>, Arc<Vec<u32>>)>,
    partitions: Vec<Partition>,
    /// Rational points for the Taylor data.
    points: Vec<Vec<u32>>,
    /// Character family: per extension, `a -> index of chi(a)` factor.
    chi_factor: Vec<u64>,
    /// Number of coefficients per sample.
    width: usize,
}

fn modinv(a: u64, m: u64) -> u64 {
    (1..m).find(|&x| (a * x) % m == 1 % m).unwrap_or(0)
}

impl Context {
    fn new(spec: &SampleSpec) -> Result<Context> {
        let q = spec.q.checked_pow(spec.ghost_k).ok_or_else(|| Error::Parameter("field too large".into()))?;
        let tower = FieldTower::new(q)?;
        if spec.n == 0 {
            return Err(Error::Parameter("N must be positive".into()));
        }
        let exts = (1..=spec.n as u32).map(|j| Ok((tower.extension(j)?, tower.embed(j)?))).collect::<Result<Vec<_>>>()?;
        let partitions = Partition::up_to(spec.n);
        let base = &tower.base;
        let (ambient, width) = match spec.family {
            SampleFamily::BinaryForms { d } => (1, d as usize + 1),
            SampleFamily::PlaneCurves { d } => (2, forms::monomials(2, d).len()),
            SampleFamily::Character { d, .. } => (0, d as usize),
            SampleFamily::CiPairs { d1, d2 } => (2, forms::monomials(2, d1).len() + forms::monomials(2, d2).len()),
        };
        let points = if ambient == 0 {
            spec.points
                .iter()
                .map(|&i| (i < base.size() as usize).then(|| vec![i as u32]).ok_or(Error::UnknownOrbit(i)))
                .collect::<Result<Vec<_>>>()?
        } else {
            let all = projective_points(base, ambient);
            spec.points.iter().map(|&i| all.get(i).cloned().ok_or(Error::UnknownOrbit(i))).collect::<Result<Vec<_>>>()?
        };
        let mut chi_factor = Vec::new();
        if let SampleFamily::Character { ell, d, .. } = spec.family {
            let l = ell as u64;
            if ell < 2 || (q - 1) % l != 0 {
                return Err(Error::Parameter(format!("character order {ell} must be >= 2 and divide {q} - 1")));
            }
            if d == 0 {
                return Err(Error::Parameter("degree must be positive".into()));
            }
            // fixed primitive l-th root of unity w in F_Q
            let w = base.exp((q - 1) / l);
            for (k, emb) in &exts {
                let big = k.size() as u64;
                let wj = k.exp((big - 1) / l);
                let target = emb[w as usize];
                let s = (1..l).find(|&s| k.pow(wj, s) == target).expect("roots of unity embed");
                chi_factor.push(modinv(s, l));
            }
        }
        Ok(Context { spec: spec.clone(), tower, exts, partitions, points, chi_factor, width })
    }

    fn q(&self) -> u64 {
        self.tower.q()
    }

    /// Number of coefficient vectors scanned in exhaustive mode.
    fn space(&self) -> Result<u64> {
        let q = self.q();
        let total = q.checked_pow(self.width as u32).filter(|&t| t <= self.spec.budget);
        total.ok_or_else(|| Error::Budget {
            size: format!("{q}^{}", self.width),
            budget: self.spec.budget.to_string(),
        })
    }

    fn split_ci(&self, coeffs: &[u32]) -> Result<(Form, Form)> {
        let SampleFamily::CiPairs { d1, d2 } = self.spec.family else { unreachable!() };
        let m1 = forms::monomials(2, d1).len();
        Ok((Form::new(2, d1, coeffs[..m1].to_vec())?, Form::new(2, d2, coeffs[m1..].to_vec())?))
    }

    /// Whether a coefficient vector is the canonical representative.
    fn is_representative(&self, coeffs: &[u32]) -> Result<bool> {
        Ok(match self.spec.family {
            SampleFamily::BinaryForms { .. } | SampleFamily::PlaneCurves { .. } => is_normalized(coeffs),
            SampleFamily::Character { .. } => true,
            SampleFamily::CiPairs { .. } => {
                let (a, b) = self.split_ci(coeffs)?;
                is_normalized(&a.coeffs) && is_normalized(&b.coeffs)
            }
        })
    }

    /// Monte Carlo draws are uniform over nonzero tuples.
    fn is_valid_draw(&self, coeffs: &[u32]) -> Result<bool> {
        Ok(match self.spec.family {
            SampleFamily::BinaryForms { .. } | SampleFamily::PlaneCurves { .. } => coeffs.iter().any(|&c| c != 0),
            SampleFamily::Character { .. } => true,
            SampleFamily::CiPairs { .. } => {
                let (a, b) = self.split_ci(coeffs)?;
                !a.is_zero() && !b.is_zero()
            }
        })
    }

    fn monic(&self, coeffs: &[u32]) -> Poly {
        let mut f = coeffs.to_vec();
        f.push(1);
        f
    }

    /// Evaluate one coefficient vector; `None` when not admissible.
    fn evaluate(&self, coeffs: &[u32]) -> Result<Option<Outcome>> {
        let base = &self.tower.base;
        match self.spec.family {
            SampleFamily::BinaryForms { d } => {
                if !binary_is_squarefree(base, coeffs) {
                    return Ok(None);
                }
                let ghosts = self.exts.iter().map(|(k, emb)| vec![binary_point_count(k, coeffs, emb) as i128]).collect();
                let form = Form::new(1, d, coeffs.to_vec())?;
                Ok(Some(Outcome { ghosts, jets: self.form_jets(&[form]) }))
            }
            SampleFamily::PlaneCurves { d } => {
                let form = Form::new(2, d, coeffs.to_vec())?;
                if !forms::plane_curve_is_smooth(&self.tower, &form, self.spec.budget)? {
                    return Ok(None);
                }
                let ghosts = self
                    .exts
                    .iter()
                    .map(|(k, emb)| vec![common_zero_count(k, &[form.embed(emb)], 2) as i128])
                    .collect();
                Ok(Some(Outcome { ghosts, jets: self.form_jets(&[form]) }))
            }
            SampleFamily::Character { ell, free, .. } => {
                let f = self.monic(coeffs);
                let order = if free == PowerFree::Squarefree { 2 } else { ell as usize };
                if !poly::power_free(base, &f, order) {
                    return Ok(None);
                }
                let l = ell as u64;
                let ghosts = self
                    .exts
                    .iter()
                    .zip(&self.chi_factor)
                    .map(|((k, emb), &factor)| {
                        let g = poly::map_coeffs(&f, emb);
                        let mut v = vec![0i128; l as usize];
                        for z in k.elements() {
                            if let Some(lg) = k.log(poly::eval(k, &g, z)) {
                                v[((lg as u64 % l) * factor % l) as usize] += 1;
                            }
                        }
                        v
                    })
                    .collect();
                let jets = self.points.iter().flat_map(|z| poly::taylor(base, &f, z[0], order)).collect();
                Ok(Some(Outcome { ghosts, jets }))
            }
            SampleFamily::CiPairs { .. } => {
                let (a, b) = self.split_ci(coeffs)?;
                if !ci_pair_is_transversal(&self.tower, &a, &b)? {
                    return Ok(None);
                }
                let ghosts = self
                    .exts
                    .iter()
                    .map(|(k, emb)| vec![common_zero_count(k, &[a.embed(emb), b.embed(emb)], 2) as i128])
                    .collect();
                Ok(Some(Outcome { ghosts, jets: self.form_jets(&[a, b]) }))
            }
        }
    }

    /// Value and affine partials at each selected point, per form.
    fn form_jets(&self, fs: &[Form]) -> Vec<u32> {
        let base = &self.tower.base;
        let mut out = Vec::new();
        for pt in &self.points {
            let lead = pt.iter().position(|&x| x != 0).expect("normalized point");
            for f in fs {
                out.push(f.eval(base, pt));
                for i in (0..pt.len()).filter(|&i| i != lead) {
                    out.push(f.partial(base, i).eval(base, pt));
                }
            }
        }
        out
    }

    /// Local admissibility of concatenated jets.
    fn jet_admissible(&self, jets: &[u32]) -> bool {
        let base = &self.tower.base;
        match self.spec.family {
            SampleFamily::BinaryForms { .. } | SampleFamily::PlaneCurves { .. } | SampleFamily::Character { .. } => {
                let per = jets.len() / self.points.len().max(1);
                jets.chunks(per.max(1)).all(|j| j.iter().any(|&c| c != 0))
            }
            SampleFamily::CiPairs { .. } => jets.chunks(6).all(|j| {
                let (a, b) = (&j[..3], &j[3..]);
                if a[0] != 0 || b[0] != 0 {
                    return true;
                }
                base.sub(base.mul(a[1], b[2]), base.mul(a[2], b[1])) != 0
            }),
        }
    }

    fn jet_len(&self) -> usize {
        let per_point = match self.spec.family {
            SampleFamily::BinaryForms { .. } => 2,
            SampleFamily::PlaneCurves { .. } => 3,
            SampleFamily::Character { ell, free, .. } => {
                if free == PowerFree::Squarefree {
                    2
                } else {
                    ell as usize
                }
            }
            SampleFamily::CiPairs { .. } => 6,
        };
        per_point * self.points.len()
    }

    fn record(&self, acc: &mut Acc, outcome: Outcome) {
        let l = self.spec.family.zeta_order();
        let h = scaled_h(&outcome.ghosts, l);
        if acc.sums.is_empty() {
            acc.sums = vec![vec![0i128; l]; self.partitions.len()];
        }
        for (slot, tau) in acc.sums.iter_mut().zip(&self.partitions) {
            let mut v = h[0].clone();
            for &part in tau.parts() {
                v = cyc_mul(&v, &h[part as usize]);
            }
            cyc_add_assign(slot, &v);
        }
        if !self.points.is_empty() {
            *acc.jets.entry(outcome.jets).or_default() += 1;
        }
        acc.admissible += 1;
    }

    fn exhaustive_chunk(&self, chunk: u64, total: u64) -> Result<Acc> {
        let mut acc = Acc::default();
        let q = self.q();
        for idx in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
            let coeffs = decode(idx, q, self.width);
            if !self.is_representative(&coeffs)? {
                continue;
            }
            acc.enumerated += 1;
            if let Some(o) = self.evaluate(&coeffs)? {
                self.record(&mut acc, o);
            }
        }
        Ok(acc)
    }

    fn monte_carlo_chunk(&self, chunk: u64, samples: u64, seed: u64) -> Result<Acc> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let mut acc = Acc::default();
        let q = self.q() as u32;
        let count = CHUNK.min(samples - chunk * CHUNK);
        let mut drawn = 0;
        while drawn < count {
            let coeffs: Vec<u32> = (0..self.width).map(|_| rng.gen_range(0..q)).collect();
            if !self.is_valid_draw(&coeffs)? {
                continue;
            }
            drawn += 1;
            acc.enumerated += 1;
            if let Some(o) = self.evaluate(&coeffs)? {
                self.record(&mut acc, o);
            }
        }
        Ok(acc)
    }
}

/// Sample means of `h_tau(X)` at one ghost index, with Taylor-data tallies.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalReport {
    pub family: String,
    pub q: u64,
    pub degrees: Vec<u32>,
    pub ghost_k: u32,
    pub n: usize,
    pub sampling: Sampling,
    /// Members of the family scanned (canonical representatives or draws).
    pub enumerated: u64,
    /// Admissible members: `|U_d|` in exhaustive mode.
    pub admissible: u64,
    /// Mean of the `k`-th ghost of `h_tau(X)`, the `m_tau` coefficient.
    pub means: BTreeMap<Partition, Scalar>,
    pub jet_counts: BTreeMap<Vec<u32>, u64>,
    /// `|prod_P A_P|`, the number of admissible Taylor data.
    pub cells: u64,
    /// Admissible Taylor data listed in order.
    admissible_cells: Vec<Vec<u32>>,
}

/// Run the sampler described by `spec`.
pub fn empirical_mgf(spec: &SampleSpec) -> Result<EmpiricalReport> {
    let ctx = Context::new(spec)?;
    let chunks: Vec<Result<Acc>> = match spec.sampling {
        Sampling::Exhaustive => {
            let total = ctx.space()?;
            let n = total.div_ceil(CHUNK);
            (0..n).into_par_iter().map(|c| ctx.exhaustive_chunk(c, total)).collect()
        }
        Sampling::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::Parameter("sample count must be positive".into()));
            }
            let n = samples.div_ceil(CHUNK);
            (0..n).into_par_iter().map(|c| ctx.monte_carlo_chunk(c, samples, seed)).collect()
        }
    };
    let mut acc = Acc::default();
    for c in chunks {
        acc.merge(c?);
    }
    if acc.admissible == 0 {
        return Err(Error::Empty("no admissible member in the family".into()));
    }
    let l = spec.family.zeta_order();
    let tower = if l > 1 { Tower::new(l as u32, None)? } else { Tower::RATIONAL };
    let zeta = Scalar::zeta(tower);
    let mut means = BTreeMap::new();
    for (tau, sum) in ctx.partitions.iter().zip(&acc.sums) {
        let denom: BigInt = tau.parts().iter().map(|&p| (1..=p as i64).product::<i64>()).map(BigInt::from).product::<BigInt>()
            * BigInt::from(acc.admissible);
        let mut value = Scalar::zero();
        for (i, &c) in sum.iter().enumerate() {
            if c != 0 {
                let r = BigRational::new(BigInt::from(c), denom.clone());
                value += &zeta.pow(i as i64)?.scale(&r);
            }
        }
        means.insert(tau.clone(), value);
    }
    let base = &ctx.tower.base;
    let jl = ctx.jet_len();
    let q = base.size() as u64;
    let all = q.checked_pow(jl as u32).filter(|&t| t <= spec.budget).ok_or_else(|| Error::Budget {
        size: format!("{q}^{jl} Taylor data"),
        budget: spec.budget.to_string(),
    })?;
    let admissible_cells: Vec<Vec<u32>> = if ctx.points.is_empty() {
        Vec::new()
    } else {
        (0..all).map(|i| decode(i, q, jl)).filter(|j| ctx.jet_admissible(j)).collect()
    };
    Ok(EmpiricalReport {
        family: spec.family.name().to_string(),
        q: spec.q,
        degrees: spec.family.degrees(),
        ghost_k: spec.ghost_k,
        n: spec.n,
        sampling: spec.sampling,
        enumerated: acc.enumerated,
        admissible: acc.admissible,
        means,
        jet_counts: acc.jets,
        cells: admissible_cells.len() as u64,
        admissible_cells,
    })
}

/// Per-coefficient comparison of a report with a theory series.
#[derive(Clone, Debug, PartialEq)]
pub struct Deviation {
    pub rows: Vec<(Partition, Scalar, Scalar, f64)>,
    pub max: f64,
}

impl EmpiricalReport {
    /// Total-variation distance between the pushforward of the uniform
    /// measure on the admissible members and the uniform measure on the
    /// admissible Taylor data.
    pub fn tv_exact(&self) -> BigRational {
        let n = BigInt::from(self.admissible);
        let uniform = BigRational::new(BigInt::from(1), BigInt::from(self.cells.max(1)));
        let mut total = BigRational::zero();
        for cell in &self.admissible_cells {
            let c = self.jet_counts.get(cell).copied().unwrap_or(0);
            total += (BigRational::new(BigInt::from(c), n.clone()) - &uniform).abs();
        }
        for (cell, &c) in &self.jet_counts {
            if self.admissible_cells.binary_search(cell).is_err() {
                total += BigRational::new(BigInt::from(c), n.clone());
            }
        }
        total / BigRational::from_integer(BigInt::from(2))
    }

    pub fn tv_distance(&self) -> f64 {
        self.tv_exact().to_f64().unwrap_or(f64::NAN)
    }

    /// Pushforward masses; they sum to one.
    pub fn masses(&self) -> Vec<(Vec<u32>, BigRational)> {
        let n = BigInt::from(self.admissible);
        self.jet_counts.iter().map(|(k, &c)| (k.clone(), BigRational::new(BigInt::from(c), n.clone()))).collect()
    }

    /// Fraction of admissible members not vanishing at the first selected point.
    pub fn nonvanishing_exact(&self) -> BigRational {
        let n = BigInt::from(self.admissible);
        let hit: u64 = self.jet_counts.iter().filter(|(k, _)| k.first().is_some_and(|&v| v != 0)).map(|(_, &c)| c).sum();
        BigRational::new(BigInt::from(hit), n)
    }

    pub fn nonvanishing_frequency(&self) -> f64 {
        self.nonvanishing_exact().to_f64().unwrap_or(f64::NAN)
    }

    /// `|empirical - theory|` on every `m_tau` coefficient with `|tau| <= N`,
    /// theory read at ghost index `ghost_k`.
    pub fn deviation(&self, theory: &SymSeries) -> Result<Deviation> {
        let coeffs = theory.to_basis(Basis::M);
        let mut rows = Vec::new();
        let mut max = 0.0f64;
        for (tau, emp) in &self.means {
            let th = match coeffs.get(tau) {
                Some(w) => w.ghost(self.ghost_k as usize)?.clone(),
                None => Scalar::zero(),
            };
            let dev = (emp - &th).abs_f64();
            max = max.max(dev);
            rows.push((tau.clone(), emp.clone(), th, dev));
        }
        Ok(Deviation { rows, max })
    }
}
