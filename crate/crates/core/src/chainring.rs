//! The supported finite chain rings: `Z/p^s` and `F_q[u]/(u^s)`.
//!
//! Elements are stored as integer codes. For `Z/p^s` the code is the residue
//! itself. For `F_q[u]/(u^s)` with `F_q = F_p[x]/(g)` the code is
//! `Σ a_i q^i` where `a_i` is the code `Σ c_j p^j` of the `u^i` coefficient.
//! In both cases, with `B = p` resp. `B = q`, multiplication by the uniformizer
//! is multiplication of the code by `B`, and `x mod π^e` is `x mod B^e`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{prime_power_base, CycInt};
use crate::error::{Error, Result};

/// Largest ring the table-driven arithmetic accepts.
pub const MAX_RING_SIZE: u32 = 1024;

/// Which generating character a computation uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharChoice {
    #[default]
    Primary,
    /// `a ↦ χ(u·a)` for the unit `u` with the largest code.
    Alternate,
}

/// Description of a chain ring, as parsed from the command line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    /// `Z/p^s`.
    ZMod { p: u32, s: u32 },
    /// `F_q[u]/(u^s)`, `q = p^r`. `modulus` lists the coefficients of `g`
    /// from the constant term up to the leading 1; `None` picks the
    /// lexicographically least monic irreducible of degree `r`.
    TruncatedPoly {
        p: u32,
        r: u32,
        s: u32,
        modulus: Option<Vec<u32>>,
    },
}

impl RingSpec {
    pub fn zmod(p: u32, s: u32) -> Self {
        Self::ZMod { p, s }
    }

    pub fn field(p: u32, r: u32) -> Self {
        Self::TruncatedPoly {
            p,
            r,
            s: 1,
            modulus: None,
        }
    }

    pub fn truncated(p: u32, r: u32, s: u32) -> Self {
        Self::TruncatedPoly {
            p,
            r,
            s,
            modulus: None,
        }
    }
}

fn parse_num(s: &str, whole: &str) -> Result<u32> {
    s.trim()
        .parse()
        .map_err(|_| Error::RingParse(whole.to_string()))
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::RingParse(text.to_string());
        if let Some(rest) = t.strip_prefix("Z:").or_else(|| t.strip_prefix("F:")) {
            let mut p = None;
            let mut r = None;
            let mut s = None;
            let mut g = None;
            for kv in rest.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(bad)?;
                match k.trim() {
                    "p" => p = Some(parse_num(v, text)?),
                    "r" => r = Some(parse_num(v, text)?),
                    "s" => s = Some(parse_num(v, text)?),
                    "g" => {
                        let coeffs = v
                            .split('/')
                            .map(|c| parse_num(c, text))
                            .collect::<Result<Vec<_>>>()?;
                        g = Some(coeffs);
                    }
                    _ => return Err(bad()),
                }
            }
            let p = p.ok_or_else(bad)?;
            return if t.starts_with('Z') {
                if r.is_some() || g.is_some() {
                    return Err(bad());
                }
                Ok(Self::ZMod {
                    p,
                    s: s.ok_or_else(bad)?,
                })
            } else {
                Ok(Self::TruncatedPoly {
                    p,
                    r: r.unwrap_or(1),
                    s: s.unwrap_or(1),
                    modulus: g,
                })
            };
        }
        if let Some(n) = t.strip_prefix('Z') {
            let n = parse_num(n, text)?;
            let p = prime_power_base(n as u64).ok_or(Error::NotPrimePower(n as u64))? as u32;
            return Ok(Self::ZMod { p, s: n.ilog(p) });
        }
        if let Some(rest) = t.strip_prefix('F') {
            let (q, s) = match rest.split_once('u') {
                Some((q, s)) => (parse_num(q, text)?, parse_num(s, text)?),
                None => (parse_num(rest, text)?, 1),
            };
            let p = prime_power_base(q as u64).ok_or(Error::NotPrimePower(q as u64))? as u32;
            return Ok(Self::TruncatedPoly {
                p,
                r: q.ilog(p),
                s,
                modulus: None,
            });
        }
        Err(bad())
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZMod { p, s } => write!(f, "Z{}", p.pow(*s)),
            Self::TruncatedPoly {
                p,
                r,
                s,
                modulus: Some(g),
            } => {
                let g: Vec<String> = g.iter().map(u32::to_string).collect();
                write!(f, "F:p={p},r={r},s={s},g={}", g.join("/"))
            }
            Self::TruncatedPoly {
                p,
                r,
                s,
                modulus: None,
            } => {
                write!(f, "F{}", p.pow(*r))?;
                if *s > 1 {
                    write!(f, "u{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// A ring element: its canonical code plus the identity of its ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    ring: u64,
    code: u32,
}

impl RingElem {
    pub fn code(self) -> u32 {
        self.code
    }
}

/// Arithmetic in `F_p[x]/(g)` on digit codes.
struct PrimeExtension {
    p: u32,
    r: u32,
    modulus: Vec<u32>,
}

impl PrimeExtension {
    fn digits(&self, mut code: u32) -> Vec<u32> {
        (0..self.r)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, d| acc * self.p + d)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let rem = poly_rem(&poly_mul(&da, &db, self.p), &self.modulus, self.p);
        let mut out = vec![0; self.r as usize];
        out[..rem.len().min(self.r as usize)]
            .copy_from_slice(&rem[..rem.len().min(self.r as usize)]);
        self.encode(&out)
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `g`.
fn poly_rem(a: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let deg = g.len() - 1;
    let mut rem = a.to_vec();
    for k in (deg..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            let idx = k - deg + j;
            rem[idx] = (rem[idx] + (p - c) * gj % p) % p;
        }
    }
    rem.truncate(deg);
    rem
}

fn is_irreducible(g: &[u32], p: u32) -> bool {
    let deg = g.len() - 1;
    for d in 1..deg {
        for low in 0..p.pow(d as u32) {
            let mut divisor: Vec<u32> = (0..d).map(|i| low / p.pow(i as u32) % p).collect();
            divisor.push(1);
            if poly_rem(g, &divisor, p).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, r: u32) -> Vec<u32> {
    (0..p.pow(r))
        .map(|low| {
            let mut g: Vec<u32> = (0..r).map(|i| low / p.pow(i) % p).collect();
            g.push(1);
            g
        })
        .find(|g| is_irreducible(g, p))
        .expect("an irreducible polynomial exists in every degree")
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// A finite chain ring with precomputed operation tables.
pub struct ChainRing {
    spec: RingSpec,
    id: u64,
    p: u32,
    r: u32,
    s: u32,
    q: u32,
    base: u32,
    size: u32,
    char_order: u32,
    alt_unit: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    val: Vec<u32>,
    phi: [Vec<u32>; 2],
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainRing({})", self.spec)
    }
}

impl ChainRing {
    /// Parses and builds a ring, e.g. `"Z4"`, `"F2u2"`, `"F:p=3,r=2,s=1"`.
    pub fn parse(text: &str) -> Result<Arc<Self>> {
        Self::new(text.parse()?)
    }

    pub fn new(spec: RingSpec) -> Result<Arc<Self>> {
        let (p, r, s) = match &spec {
            RingSpec::ZMod { p, s } => (*p, 1, *s),
            RingSpec::TruncatedPoly { p, r, s, .. } => (*p, *r, *s),
        };
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if s == 0 || r == 0 {
            return Err(Error::InvalidRing("r and s must be positive".into()));
        }
        let size = (p as u64)
            .checked_pow(r * s)
            .filter(|n| *n <= MAX_RING_SIZE as u64)
            .ok_or_else(|| {
                Error::InvalidRing(format!("ring larger than {MAX_RING_SIZE} elements"))
            })? as u32;
        let q = p.pow(r);
        let mut ring = match &spec {
            RingSpec::ZMod { .. } => Self::build_zmod(p, s, size),
            RingSpec::TruncatedPoly { modulus, .. } => {
                let g = match modulus {
                    Some(g) => {
                        if g.len() != r as usize + 1
                            || g[r as usize] != 1
                            || g.iter().any(|c| *c >= p)
                        {
                            return Err(Error::InvalidRing(format!(
                                "modulus {g:?} is not a monic degree-{r} polynomial over F_{p}"
                            )));
                        }
                        if !is_irreducible(g, p) {
                            return Err(Error::InvalidRing(format!("modulus {g:?} is reducible")));
                        }
                        g.clone()
                    }
                    None => least_irreducible(p, r),
                };
                Self::build_truncated(p, r, s, q, size, g)
            }
        };
        ring.id = ring_id(&spec, p, r, s);
        ring.spec = spec;
        ring.finish()?;
        Ok(Arc::new(ring))
    }

    fn blank(p: u32, r: u32, s: u32, base: u32, size: u32, char_order: u32) -> Self {
        let n = size as usize;
        Self {
            spec: RingSpec::ZMod { p, s },
            id: 0,
            p,
            r,
            s,
            q: p.pow(r),
            base,
            size,
            char_order,
            alt_unit: 1,
            add: vec![0; n * n],
            mul: vec![0; n * n],
            neg: vec![0; n],
            inv: vec![u32::MAX; n],
            val: vec![0; n],
            phi: [vec![0; n], vec![0; n]],
        }
    }

    fn build_zmod(p: u32, s: u32, size: u32) -> Self {
        let mut ring = Self::blank(p, 1, s, p, size, size);
        for a in 0..size {
            for b in 0..size {
                let idx = (a * size + b) as usize;
                ring.add[idx] = (a + b) % size;
                ring.mul[idx] = (a * b) % size;
            }
            ring.phi[0][a as usize] = a;
        }
        ring
    }

    fn build_truncated(p: u32, r: u32, s: u32, q: u32, size: u32, g: Vec<u32>) -> Self {
        let field = PrimeExtension { p, r, modulus: g };
        let fadd: Vec<u32> = (0..q * q).map(|i| field.add(i / q, i % q)).collect();
        let fmul: Vec<u32> = (0..q * q).map(|i| field.mul(i / q, i % q)).collect();
        let trace = |x: u32| {
            let mut acc = 0;
            let mut pow = x;
            for _ in 0..r {
                acc = fadd[(acc * q + pow) as usize];
                let mut next = 1;
                for _ in 0..p {
                    next = fmul[(next * q + pow) as usize];
                }
                pow = next;
            }
            debug_assert!(acc < p, "trace must land in the prime field");
            acc
        };
        let digits = |mut code: u32| -> Vec<u32> {
            (0..s)
                .map(|_| {
                    let d = code % q;
                    code /= q;
                    d
                })
                .collect()
        };
        let encode = |d: &[u32]| d.iter().rev().fold(0, |acc, x| acc * q + x);
        let mut ring = Self::blank(p, r, s, q, size, p);
        for a in 0..size {
            let da = digits(a);
            for b in 0..size {
                let db = digits(b);
                let sum: Vec<u32> = da
                    .iter()
                    .zip(&db)
                    .map(|(x, y)| fadd[(x * q + y) as usize])
                    .collect();
                let mut prod = vec![0; s as usize];
                for i in 0..s as usize {
                    for j in 0..s as usize - i {
                        let t = fmul[(da[i] * q + db[j]) as usize];
                        prod[i + j] = fadd[(prod[i + j] * q + t) as usize];
                    }
                }
                let idx = (a * size + b) as usize;
                ring.add[idx] = encode(&sum);
                ring.mul[idx] = encode(&prod);
            }
            ring.phi[0][a as usize] = trace(da[s as usize - 1]);
        }
        ring
    }

    fn finish(&mut self) -> Result<()> {
        let n = self.size;
        for a in 0..n {
            self.neg[a as usize] = (0..n)
                .find(|b| self.add_code(a, *b) == 0)
                .expect("additive inverse");
            self.inv[a as usize] = (0..n)
                .find(|b| self.mul_code(a, *b) == 1)
                .unwrap_or(u32::MAX);
            let mut v = 0;
            let mut x = a;
            while v < self.s && x % self.base == 0 {
                x /= self.base;
                v += 1;
            }
            self.val[a as usize] = if a == 0 { self.s } else { v };
        }
        self.alt_unit = (0..n)
            .rev()
            .find(|u| self.inv[*u as usize] != u32::MAX)
            .expect("1 is a unit");
        self.phi[1] = (0..n)
            .map(|a| self.phi[0][self.mul_code(self.alt_unit, a) as usize])
            .collect();
        let socle = self.pi_pow_code(self.s - 1);
        for (i, phi) in self.phi.iter().enumerate() {
            let generating = (1..n).any(|a| phi[self.mul_code(a, socle) as usize] != 0);
            if !generating {
                return Err(Error::Inconsistency(format!(
                    "character {i} of {} is not generating",
                    self.spec
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.to_string()
    }

    /// Identity shared by every ring built from the same spec.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Size of the residue field.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Nilpotency index of the uniformizer.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn is_field(&self) -> bool {
        self.s == 1
    }

    /// Order of the roots of unity the generating characters take values in.
    pub fn char_order(&self) -> u32 {
        self.char_order
    }

    /// The unit defining [`CharChoice::Alternate`].
    pub fn alternate_unit(&self) -> RingElem {
        self.wrap(self.alt_unit)
    }

    fn wrap(&self, code: u32) -> RingElem {
        RingElem {
            ring: self.id,
            code,
        }
    }

    fn own(&self, a: RingElem) -> Result<u32> {
        if a.ring == self.id {
            Ok(a.code)
        } else {
            Err(Error::MixedRing)
        }
    }

    pub fn elem(&self, code: u32) -> Result<RingElem> {
        if code < self.size {
            Ok(self.wrap(code))
        } else {
            Err(Error::InvalidRing(format!(
                "code {code} outside {}",
                self.spec
            )))
        }
    }

    pub fn zero(&self) -> RingElem {
        self.wrap(0)
    }

    pub fn one(&self) -> RingElem {
        self.wrap(1)
    }

    /// The uniformizer: `p` for `Z/p^s`, `u` for `F_q[u]/(u^s)`, and `0` in a field.
    pub fn pi(&self) -> RingElem {
        self.wrap(self.pi_pow_code(1))
    }

    /// All elements in code order, zero first.
    pub fn enumerate(&self) -> Vec<RingElem> {
        (0..self.size).map(|c| self.wrap(c)).collect()
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> Result<RingElem> {
        Ok(self.wrap(self.add_code(self.own(a)?, self.own(b)?)))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> Result<RingElem> {
        Ok(self.wrap(self.mul_code(self.own(a)?, self.own(b)?)))
    }

    pub fn neg(&self, a: RingElem) -> Result<RingElem> {
        Ok(self.wrap(self.neg_code(self.own(a)?)))
    }

    /// `i` with `a ∈ Rπ^i \ Rπ^{i+1}`; the valuation of zero is `s`.
    pub fn valuation(&self, a: RingElem) -> Result<u32> {
        Ok(self.val_code(self.own(a)?))
    }

    pub fn generating_character(&self, a: RingElem, choice: CharChoice) -> Result<CycInt> {
        CycInt::root(self.char_order, self.phi_code(self.own(a)?, choice) as i64)
    }

    // Raw code-level arithmetic used by the matrix and enumeration kernels.

    #[inline]
    pub fn add_code(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.size + b) as usize]
    }

    #[inline]
    pub fn mul_code(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.size + b) as usize]
    }

    #[inline]
    pub fn neg_code(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub_code(&self, a: u32, b: u32) -> u32 {
        self.add_code(a, self.neg_code(b))
    }

    #[inline]
    pub fn val_code(&self, a: u32) -> u32 {
        self.val[a as usize]
    }

    /// Multiplicative inverse of a unit.
    pub fn inv_code(&self, a: u32) -> Option<u32> {
        let v = self.inv[a as usize];
        (v != u32::MAX).then_some(v)
    }

    /// Exponent `k` with `χ(a) = ζ^k`.
    #[inline]
    pub fn phi_code(&self, a: u32, choice: CharChoice) -> u32 {
        self.phi[choice as usize][a as usize]
    }

    /// Code of `π^e` (zero once `e ≥ s`).
    pub fn pi_pow_code(&self, e: u32) -> u32 {
        if e >= self.s {
            0
        } else {
            self.base.pow(e)
        }
    }

    /// Splits `x = rep + quot·π^e` with `rep` the canonical representative of
    /// `x` modulo `Rπ^e`.
    pub fn split_code(&self, x: u32, e: u32) -> (u32, u32) {
        if e >= self.s {
            return (x, 0);
        }
        let m = self.base.pow(e);
        (x % m, x / m)
    }
}

fn ring_id(spec: &RingSpec, p: u32, r: u32, s: u32) -> u64 {
    let (kind, g) = match spec {
        RingSpec::ZMod { .. } => (0u64, 0u64),
        RingSpec::TruncatedPoly { modulus, .. } => {
            let g = modulus.clone().unwrap_or_else(|| least_irreducible(p, r));
            (
                1,
                g[..r as usize]
                    .iter()
                    .rev()
                    .fold(0u64, |acc, c| acc * p as u64 + *c as u64),
            )
        }
    };
    kind | (p as u64) << 1 | (r as u64) << 17 | (s as u64) << 25 | g << 33
}
