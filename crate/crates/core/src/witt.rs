//! Truncated big Witt vectors in ghost coordinates.
//!
//! A [`WittVec`] of precision `K` stores the ghost components `g_1..g_K`.
//! Ring operations act componentwise. The power-series presentation
//! `1 + c_1 t + c_2 t^2 + ...` is only an input/output codec: the ghost
//! vector is the logarithmic derivative `t d/dt log(f)`.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVec {
    ghost: Vec<Scalar>,
}

impl WittVec {
    /// Build from ghost components `g_1..g_K`.
    pub fn from_ghost(ghost: Vec<Scalar>) -> Result<WittVec> {
        if ghost.is_empty() {
            return Err(Error::Precision { needed: 1, available: 0 });
        }
        Ok(WittVec { ghost })
    }

    /// Build from a closure `k -> g_k`, `k = 1..=precision`.
    pub fn from_fn(precision: usize, f: impl FnMut(usize) -> Scalar) -> WittVec {
        assert!(precision > 0, "witt vector precision must be positive");
        WittVec { ghost: (1..=precision).map(f).collect() }
    }

    pub fn zero(precision: usize) -> WittVec {
        WittVec::constant(Scalar::zero(), precision)
    }

    /// The unit `1/(1-t)`, ghost `(1,1,...)`.
    pub fn unit(precision: usize) -> WittVec {
        WittVec::constant(Scalar::one(), precision)
    }

    /// Ghost-constant vector `(c,c,...)`; for rational `c` this is `c` times the unit.
    pub fn constant(c: Scalar, precision: usize) -> WittVec {
        WittVec::from_fn(precision, |_| c.clone())
    }

    pub fn from_int(n: i64, precision: usize) -> WittVec {
        WittVec::constant(Scalar::from_int(n), precision)
    }

    /// The class `[z] = 1/(1 - z t)`, ghost `(z, z^2, ...)`.
    pub fn teichmuller(z: &Scalar, precision: usize) -> WittVec {
        let mut acc = Scalar::one();
        WittVec::from_fn(precision, |_| {
            acc = &acc * z;
            acc.clone()
        })
    }

    /// From series coefficients `c_1..c_K` of `1 + c_1 t + ...`.
    pub fn from_series(c: &[Scalar]) -> Result<WittVec> {
        if c.is_empty() {
            return Err(Error::Precision { needed: 1, available: 0 });
        }
        let mut g: Vec<Scalar> = Vec::with_capacity(c.len());
        for k in 1..=c.len() {
            let mut gk = c[k - 1].clone() * Scalar::from_int(k as i64);
            for i in 1..k {
                gk -= &(&c[i - 1] * &g[k - i - 1]);
            }
            g.push(gk);
        }
        Ok(WittVec { ghost: g })
    }

    /// Series coefficients `c_1..c_K`.
    pub fn to_series(&self) -> Vec<Scalar> {
        let g = &self.ghost;
        let mut c: Vec<Scalar> = Vec::with_capacity(g.len());
        for k in 1..=g.len() {
            let mut acc = g[k - 1].clone();
            for i in 1..k {
                acc += &(&c[i - 1] * &g[k - i - 1]);
            }
            c.push(acc.scale(&BigRational::new(1.into(), (k as i64).into())));
        }
        c
    }

    pub fn precision(&self) -> usize {
        self.ghost.len()
    }

    pub fn ghosts(&self) -> &[Scalar] {
        &self.ghost
    }

    /// The `k`-th ghost component, `k >= 1`.
    pub fn ghost(&self, k: usize) -> Result<&Scalar> {
        if k == 0 || k > self.ghost.len() {
            return Err(Error::Precision { needed: k, available: self.ghost.len() });
        }
        Ok(&self.ghost[k - 1])
    }

    pub fn truncate(&self, precision: usize) -> Result<WittVec> {
        if precision == 0 || precision > self.precision() {
            return Err(Error::Precision { needed: precision, available: self.precision() });
        }
        Ok(WittVec { ghost: self.ghost[..precision].to_vec() })
    }

    pub fn is_zero(&self) -> bool {
        self.ghost.iter().all(Scalar::is_zero)
    }

    fn zip(&self, other: &WittVec, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> WittVec {
        WittVec { ghost: self.ghost.iter().zip(&other.ghost).map(|(a, b)| f(a, b)).collect() }
    }

    /// Sum (series product); mixed precision truncates to the minimum.
    pub fn add(&self, other: &WittVec) -> WittVec {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &WittVec) -> WittVec {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &WittVec) -> WittVec {
        self.zip(other, |a, b| a * b)
    }

    pub fn neg(&self) -> WittVec {
        WittVec { ghost: self.ghost.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> WittVec {
        WittVec { ghost: self.ghost.iter().map(|a| a.scale(r)).collect() }
    }

    pub fn scale_scalar(&self, s: &Scalar) -> WittVec {
        WittVec { ghost: self.ghost.iter().map(|a| a * s).collect() }
    }

    /// Multiplicative inverse; every ghost component must be nonzero.
    pub fn inv(&self) -> Result<WittVec> {
        let ghost = self
            .ghost
            .iter()
            .enumerate()
            .map(|(i, g)| g.inv().map_err(|_| Error::NotInvertible(i + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVec { ghost })
    }

    pub fn div(&self, other: &WittVec) -> Result<WittVec> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<WittVec> {
        let ghost = self.ghost.iter().map(|g| g.pow(e)).collect::<Result<Vec<_>>>()?;
        Ok(WittVec { ghost })
    }

    /// Adams operation `p_i`: ghost `(g_i, g_{2i}, ...)`, precision `K / i`.
    pub fn adams(&self, i: usize) -> Result<WittVec> {
        assert!(i >= 1, "Adams index must be positive");
        let k = self.precision() / i;
        if k == 0 {
            return Err(Error::Precision { needed: i, available: self.precision() });
        }
        Ok(WittVec { ghost: (1..=k).map(|j| self.ghost[j * i - 1].clone()).collect() })
    }

    /// Substitution `t -> t^i`: ghost `k` becomes `i * g_{k/i}` when `i | k`,
    /// zero otherwise. The result has precision `i * K`.
    pub fn substitute(&self, i: usize) -> WittVec {
        assert!(i >= 1, "substitution index must be positive");
        let factor = Scalar::from_int(i as i64);
        WittVec::from_fn(self.precision() * i, |k| {
            if k % i == 0 {
                &self.ghost[k / i - 1] * &factor
            } else {
                Scalar::zero()
            }
        })
    }

    /// True when both agree on their common precision.
    pub fn agrees_with(&self, other: &WittVec) -> bool {
        self.ghost.iter().zip(&other.ghost).all(|(a, b)| a == b)
    }
}

impl fmt::Display for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ghost.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
