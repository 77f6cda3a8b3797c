//! Flat `key = value` run configuration.
//!
//! Parsing is strict: unknown keys, duplicate keys and malformed values are
//! errors. The resolved configuration, defaults included, is echoed into
//! every report header.

use std::collections::BTreeMap;
use std::str::FromStr;

use lambda_euler::ffenum::{PowerFree, SampleFamily};
use lambda_euler::mep::{BaseClass, CharFraction, Family, FamilySpec};
use lambda_euler::{Basis, Scalar, WittVec, ZSet};

use crate::CliError;

/// Keys accepted in a config file, in echo order.
pub const KEYS: &[&str] = &[
    "family",
    "q",
    "ell",
    "m",
    "r",
    "base",
    "dim_y",
    "cohomology",
    "fraction",
    "free",
    "d",
    "degrees",
    "N",
    "K",
    "ghost_k",
    "points",
    "basis",
    "budget",
    "sampling",
    "samples",
    "seed",
    "theory_table",
    "empirical_table",
    "format",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Format, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingMode {
    /// Exhaustive when the state space fits the budget, otherwise Monte Carlo.
    Auto,
    Exhaustive,
    MonteCarlo,
}

/// The resolved configuration of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub q: Option<u64>,
    pub ell: u32,
    pub m: u32,
    pub r: u32,
    /// Raw base descriptor: `P<n>`, `point`, or `zset:<degrees>`.
    pub base: String,
    pub dim_y: Option<u32>,
    /// Ghost lists of `[H^i(Y)]`, separated by `;`.
    pub cohomology: Option<String>,
    pub fraction: CharFraction,
    pub free: PowerFree,
    pub degrees: Vec<u32>,
    pub n: usize,
    pub k: usize,
    pub ghost_k: u32,
    pub points: Vec<usize>,
    pub basis: Basis,
    pub budget: u64,
    pub sampling: SamplingMode,
    pub samples: u64,
    pub seed: u64,
    pub theory_table: Option<String>,
    pub empirical_table: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            family: None,
            q: None,
            ell: 1,
            m: 0,
            r: 1,
            base: "P1".into(),
            dim_y: None,
            cohomology: None,
            fraction: CharFraction::Census,
            free: PowerFree::Squarefree,
            degrees: Vec::new(),
            n: 6,
            k: 6,
            ghost_k: 1,
            points: vec![0],
            basis: Basis::M,
            budget: 1 << 24,
            sampling: SamplingMode::Auto,
            samples: 100_000,
            seed: 0,
            theory_table: None,
            empirical_table: None,
            format: Format::Csv,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(|x| parse_num(key, x.trim())).collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Parse a config file body.
    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.insert(key.to_string(), lineno).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    /// Set one key from its text value.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "family" => self.family = Some(Family::parse(v)?),
            "q" => self.q = Some(parse_num(key, v)?),
            "ell" => self.ell = parse_num(key, v)?,
            "m" => self.m = parse_num(key, v)?,
            "r" => self.r = parse_num(key, v)?,
            "base" => {
                self.base = v.to_string();
                self.base_class()?;
            }
            "dim_y" => self.dim_y = Some(parse_num(key, v)?),
            "cohomology" => self.cohomology = Some(v.to_string()),
            "fraction" => {
                self.fraction = match v {
                    "census" => CharFraction::Census,
                    "printed" => CharFraction::Printed,
                    other => return Err(CliError::Config(format!("fraction: unknown value {other:?}"))),
                }
            }
            "free" => {
                self.free = match v {
                    "squarefree" => PowerFree::Squarefree,
                    "ell_power_free" => PowerFree::EllPowerFree,
                    other => return Err(CliError::Config(format!("free: unknown value {other:?}"))),
                }
            }
            "d" => self.degrees = vec![parse_num(key, v)?],
            "degrees" => self.degrees = parse_list(key, v)?,
            "N" => self.n = parse_num(key, v)?,
            "K" => self.k = parse_num(key, v)?,
            "ghost_k" => self.ghost_k = parse_num(key, v)?,
            "points" => self.points = parse_list(key, v)?,
            "basis" => {
                self.basis = match v {
                    "p" => Basis::P,
                    "h" => Basis::H,
                    "e" => Basis::E,
                    "m" => Basis::M,
                    other => return Err(CliError::Config(format!("basis: unknown value {other:?}"))),
                }
            }
            "budget" => self.budget = parse_num(key, v)?,
            "sampling" => {
                self.sampling = match v {
                    "auto" => SamplingMode::Auto,
                    "exhaustive" => SamplingMode::Exhaustive,
                    "monte_carlo" => SamplingMode::MonteCarlo,
                    other => return Err(CliError::Config(format!("sampling: unknown value {other:?}"))),
                }
            }
            "samples" => self.samples = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "theory_table" => self.theory_table = Some(v.to_string()),
            "empirical_table" => self.empirical_table = Some(v.to_string()),
            "format" => self.format = v.parse()?,
            other => return Err(CliError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Every key with its resolved value, in [`KEYS`] order.
    pub fn resolved(&self) -> Vec<(&'static str, String)> {
        let opt = |o: Option<String>| o.unwrap_or_default();
        KEYS.iter()
            .map(|&key| {
                let v = match key {
                    "family" => opt(self.family.map(|f| f.name().to_string())),
                    "q" => opt(self.q.map(|q| q.to_string())),
                    "ell" => self.ell.to_string(),
                    "m" => self.m.to_string(),
                    "r" => self.r.to_string(),
                    "base" => self.base.clone(),
                    "dim_y" => opt(self.dim_y.map(|d| d.to_string())),
                    "cohomology" => opt(self.cohomology.clone()),
                    "fraction" => match self.fraction {
                        CharFraction::Census => "census".into(),
                        CharFraction::Printed => "printed".into(),
                    },
                    "free" => match self.free {
                        PowerFree::Squarefree => "squarefree".into(),
                        PowerFree::EllPowerFree => "ell_power_free".into(),
                    },
                    "d" => self.degrees.first().map(|d| d.to_string()).unwrap_or_default(),
                    "degrees" => join(&self.degrees),
                    "N" => self.n.to_string(),
                    "K" => self.k.to_string(),
                    "ghost_k" => self.ghost_k.to_string(),
                    "points" => join(&self.points),
                    "basis" => self.basis.name().to_string(),
                    "budget" => self.budget.to_string(),
                    "sampling" => match self.sampling {
                        SamplingMode::Auto => "auto".into(),
                        SamplingMode::Exhaustive => "exhaustive".into(),
                        SamplingMode::MonteCarlo => "monte_carlo".into(),
                    },
                    "samples" => self.samples.to_string(),
                    "seed" => self.seed.to_string(),
                    "theory_table" => opt(self.theory_table.clone()),
                    "empirical_table" => opt(self.empirical_table.clone()),
                    "format" => match self.format {
                        Format::Csv => "csv".into(),
                        Format::Json => "json".into(),
                    },
                    _ => unreachable!("every key is listed"),
                };
                (key, v)
            })
            .collect()
    }

    pub fn family(&self) -> Result<Family, CliError> {
        self.family.ok_or_else(|| CliError::Config("missing key \"family\"".into()))
    }

    pub fn q(&self) -> Result<u64, CliError> {
        self.q.ok_or_else(|| CliError::Config("missing key \"q\"".into()))
    }

    /// The base variety `Y` as a class source.
    pub fn base_class(&self) -> Result<BaseClass, CliError> {
        let b = self.base.as_str();
        if b == "point" {
            return Ok(BaseClass::ZSet(ZSet::point()));
        }
        if let Some(dim) = b.strip_prefix('P') {
            return Ok(BaseClass::Projective(parse_num("base", dim)?));
        }
        if let Some(degs) = b.strip_prefix("zset:") {
            let mut d: Vec<usize> = parse_list("base", degs)?;
            if d.contains(&0) {
                return Err(CliError::Config("base: orbit degrees must be positive".into()));
            }
            d.sort_unstable();
            return Ok(BaseClass::ZSet(ZSet::from_degrees(&d)));
        }
        Err(CliError::Config(format!("base: expected P<n>, point or zset:<degrees>, got {b:?}")))
    }

    /// Family parameters for the theory side.
    pub fn family_spec(&self) -> Result<FamilySpec, CliError> {
        let mut spec = FamilySpec::new(self.family()?, self.q()?, self.n, self.k.max(self.ghost_k as usize));
        spec.ell = self.ell;
        spec.m = self.m;
        spec.r = self.r;
        spec.base = self.base_class()?;
        spec.dim_y = self.dim_y;
        spec.fraction = self.fraction;
        if let Some(text) = &self.cohomology {
            let tower = spec.sqrt_tower()?;
            spec.cohomology = text
                .split(';')
                .map(|block| {
                    let ghosts = block
                        .split(',')
                        .map(|g| Scalar::parse(g.trim(), tower).map_err(CliError::from))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok::<_, CliError>(WittVec::from_ghost(ghosts)?)
                })
                .collect::<Result<_, _>>()?;
            spec.tower = Some(tower);
        }
        Ok(spec)
    }

    /// The simulated family matching the configured geometry.
    pub fn sample_family(&self) -> Result<SampleFamily, CliError> {
        let family = self.family()?;
        let degree = |i: usize| {
            self.degrees.get(i).copied().ok_or_else(|| CliError::Config("missing key \"d\" or \"degrees\"".into()))
        };
        match (family, self.base_class()?) {
            (Family::SmoothHypersurface, BaseClass::Projective(1)) => Ok(SampleFamily::BinaryForms { d: degree(0)? }),
            (Family::SmoothHypersurface, BaseClass::Projective(2)) => Ok(SampleFamily::PlaneCurves { d: degree(0)? }),
            (Family::Character, _) => Ok(SampleFamily::Character { d: degree(0)?, ell: self.ell, free: self.free }),
            (Family::CiZeta, BaseClass::Projective(2)) if self.m == 0 && self.r == 2 => {
                Ok(SampleFamily::CiPairs { d1: degree(0)?, d2: degree(1)? })
            }
            _ => Err(CliError::Config(format!(
                "simulation covers hypersurfaces in P1 or P2, the character family, and point pairs in P2 (m=0, r=2); got {} on {}",
                family.name(),
                self.base
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_echo_order() {
        let cfg = RunConfig::parse("# comment\nfamily = ci_zeta\nq = 2\ndegrees = 3, 4\n").unwrap();
        assert_eq!(cfg.degrees, vec![3, 4]);
        assert_eq!((cfg.n, cfg.k, cfg.ghost_k), (6, 6, 1));
        let keys: Vec<_> = cfg.resolved().into_iter().map(|(k, _)| k).collect();
        assert_eq!(keys, KEYS);
    }

    #[test]
    fn base_descriptors() {
        let mut cfg = RunConfig::default();
        for ok in ["P2", "point", "zset:1,1,3"] {
            cfg.set("base", ok).unwrap();
        }
        for bad in ["Q2", "zset:0,1", "zset:"] {
            assert!(cfg.set("base", bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cohomology_ghost_lists() {
        let cfg = RunConfig::parse("family = ci_zeta\nq = 2\nbase = point\nN = 1\nK = 2\ncohomology = 1,1\n").unwrap();
        let spec = cfg.family_spec().unwrap();
        assert_eq!(spec.cohomology.len(), 1);
        assert_eq!(spec.cohomology[0].ghosts(), &[Scalar::one(), Scalar::one()]);
    }
}
