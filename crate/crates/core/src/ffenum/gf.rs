//! Table-driven arithmetic in `F_{p^n}`.
//!
//! Elements are integer codes whose base-`p` digits are the coefficients of
//! a polynomial in a primitive root `x`. Multiplication goes through
//! discrete-log tables, so every nonzero code has a logarithm for free.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field the tables are built for.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Debug)]
pub struct GF {
    p: u32,
    n: u32,
    size: u32,
    /// `x^n = -sum modulus[i] x^i`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

fn digits(mut code: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl GF {
    /// Build `F_{p^n}` from the first primitive polynomial in code order.
    pub fn new(p: u32, n: u32) -> Result<GF> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        let size = (p as u64).checked_pow(n).filter(|&s| s <= MAX_FIELD_SIZE).ok_or_else(|| Error::Budget {
            size: format!("{p}^{n}"),
            budget: format!("{MAX_FIELD_SIZE}"),
        })? as u32;
        let order = size - 1;
        for low in 1..size {
            let modulus = digits(low, p, n);
            if modulus[0] == 0 {
                continue;
            }
            if let Some(exp) = Self::cycle(p, n, &modulus, order) {
                let mut log = vec![0u32; size as usize];
                for (i, &e) in exp.iter().enumerate().take(order as usize) {
                    log[e as usize] = i as u32;
                }
                let mut gf = GF { p, n, size, modulus, exp, log, add_table: None };
                if p != 2 && size <= 1024 {
                    let s = size as usize;
                    let mut t = vec![0u32; s * s];
                    for a in 0..s {
                        for b in 0..s {
                            t[a * s + b] = gf.add_digits(a as u32, b as u32);
                        }
                    }
                    gf.add_table = Some(t);
                }
                return Ok(gf);
            }
        }
        Err(Error::Parameter(format!("no primitive polynomial of degree {n} over F_{p}")))
    }

    /// Powers of `x` modulo the candidate, if `x` has full order.
    fn cycle(p: u32, n: u32, modulus: &[u32], order: u32) -> Option<Vec<u32>> {
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut v = vec![0u32; n as usize];
        v[0] = 1;
        for i in 0..order {
            let code = undigits(&v, p);
            if i > 0 && code == 1 {
                return None;
            }
            exp.push(code);
            // multiply by x
            let top = v[n as usize - 1];
            for j in (1..n as usize).rev() {
                v[j] = (v[j - 1] + p * p - top * modulus[j] % p) % p;
            }
            v[0] = (p * p - top * modulus[0] % p) % p;
        }
        if undigits(&v, p) != 1 {
            return None;
        }
        let head = exp.clone();
        exp.extend(head);
        Some(exp)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// The primitive element `x`.
    pub fn generator(&self) -> u32 {
        self.exp[1]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[(a * self.size + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        // -1 = x^{(q-1)/2}
        self.mul(a, self.exp[(self.size as usize - 1) / 2])
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.size - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Discrete logarithm to base [`generator`](Self::generator).
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.size as u64 - 1)) as usize]
    }

    /// The prime-field element `n mod p`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// `a -> a^{p^j}`.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(j % self.n))
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size
    }

    /// Code map of the embedding `self -> big` sending `x` to the first root
    /// of its minimal polynomial in `big`.
    pub fn embedding_into(&self, big: &GF) -> Result<Vec<u32>> {
        if big.p != self.p || big.n % self.n != 0 {
            return Err(Error::Parameter(format!(
                "F_{}^{} does not embed in F_{}^{}",
                self.p, self.n, big.p, big.n
            )));
        }
        let root = big
            .elements()
            .find(|&beta| {
                // x^n + sum m_i x^i at beta
                let mut acc = 1u32;
                for i in (0..self.n as usize).rev() {
                    acc = big.add(big.mul(acc, beta), self.modulus[i]);
                }
                acc == 0
            })
            .ok_or_else(|| Error::Parameter("minimal polynomial has no root".into()))?;
        let powers: Vec<u32> = (0..self.n).map(|i| big.pow(root, i as u64)).collect();
        Ok(self
            .elements()
            .map(|code| {
                digits(code, self.p, self.n)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&d, &pw)| big.add(acc, big.mul(d, pw)))
            })
            .collect())
    }
}

type FieldCache = Mutex<HashMap<(u32, u32), Arc<GF>>>;
type EmbedCache = Mutex<HashMap<(u32, u32, u32), Arc<Vec<u32>>>>;

/// Shared `F_{p^n}`.
pub fn field(p: u32, n: u32) -> Result<Arc<GF>> {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("field cache poisoned").get(&(p, n)) {
        return Ok(f.clone());
    }
    let f = Arc::new(GF::new(p, n)?);
    cache.lock().expect("field cache poisoned").insert((p, n), f.clone());
    Ok(f)
}

/// Shared embedding `F_{p^small} -> F_{p^big}` between cached fields.
pub fn embedding(p: u32, small: u32, big: u32) -> Result<Arc<Vec<u32>>> {
    static CACHE: OnceLock<EmbedCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().expect("embedding cache poisoned").get(&(p, small, big)) {
        return Ok(e.clone());
    }
    let e = Arc::new(field(p, small)?.embedding_into(&*field(p, big)?)?);
    cache.lock().expect("embedding cache poisoned").insert((p, small, big), e.clone());
    Ok(e)
}

/// `q = p^e` as `(p, e)`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Parameter(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q >= 2 has a prime factor");
    let (mut x, mut e) = (q, 0);
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    if x != 1 {
        return Err(Error::Parameter(format!("{q} is not a prime power")));
    }
    Ok((p as u32, e))
}

/// `F_Q` together with its extensions `F_{Q^j}` and the embeddings.
#[derive(Clone, Debug)]
pub struct FieldTower {
    pub p: u32,
    /// `Q = p^base_degree`.
    pub base_degree: u32,
    pub base: Arc<GF>,
}

impl FieldTower {
    pub fn new(q: u64) -> Result<FieldTower> {
        let (p, e) = prime_power(q)?;
        Ok(FieldTower { p, base_degree: e, base: field(p, e)? })
    }

    pub fn q(&self) -> u64 {
        self.base.size() as u64
    }

    /// `F_{Q^j}`.
    pub fn extension(&self, j: u32) -> Result<Arc<GF>> {
        field(self.p, self.base_degree * j)
    }

    /// `F_Q -> F_{Q^j}`.
    pub fn embed(&self, j: u32) -> Result<Arc<Vec<u32>>> {
        embedding(self.p, self.base_degree, self.base_degree * j)
    }

    /// `F_{Q^i} -> F_{Q^j}` for `i | j`.
    pub fn embed_between(&self, i: u32, j: u32) -> Result<Arc<Vec<u32>>> {
        embedding(self.p, self.base_degree * i, self.base_degree * j)
    }
}
