//! Exact scalars over ℚ, cyclotomic fields ℚ(ζₘ) and prime fields 𝔽ₚ.
//!
//! Cyclotomic elements are stored as coefficient vectors of length φ(m)
//! over ℚ, fully reduced modulo the m-th cyclotomic polynomial, so equality
//! is a plain vector comparison and zero has a unique representation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Descriptor of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Cyclotomic(u32),
    PrimeField(u64),
}

impl FieldSpec {
    pub fn cyclotomic(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidField(format!(
                "cyclotomic order must be at least 3, got {m}"
            )));
        }
        Ok(FieldSpec::Cyclotomic(m))
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    /// Characteristic of the field (0 for ℚ and ℚ(ζₘ)).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        match self {
            FieldSpec::Cyclotomic(m) => euler_phi(*m) as usize,
            _ => 1,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(*self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(*self)
    }

    pub fn int(&self, n: i64) -> Scalar {
        Scalar::from_int(*self, n)
    }

    /// A primitive m-th root of unity in this field, if one is available
    /// without extending it.
    pub fn root_of_unity(&self, m: u32) -> Option<Scalar> {
        match (m, self) {
            (0, _) => None,
            (1, _) => Some(self.one()),
            (2, _) => Some(self.int(-1)),
            (_, FieldSpec::Cyclotomic(big)) if big % m == 0 => {
                Some(Scalar::zeta_power(*big, (big / m) as i64))
            }
            _ => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Cyclotomic(m) => write!(f, "Q(z{m})"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = t.strip_prefix("Q(z").and_then(|r| r.strip_suffix(')')) {
            let m = rest
                .parse::<u32>()
                .map_err(|_| Error::InvalidField(s.to_string()))?;
            return FieldSpec::cyclotomic(m);
        }
        if let Some(rest) = t.strip_prefix("Fp:").or_else(|| t.strip_prefix("F:")) {
            let p = rest
                .parse::<u64>()
                .map_err(|_| Error::InvalidField(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(Error::InvalidField(s.to_string()))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    // p is prime, Fermat is fine at these sizes
    Some(pow_mod(a, p - 2, p))
}

pub fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low to high) of the m-th cyclotomic polynomial Φₘ.
///
/// Obtained by dividing tᵐ − 1 exactly by Φ_d for every proper divisor d of m.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = div_exact_int_monic(&num, &div);
        }
    }
    let result = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(m, result.clone());
    result
}

fn div_exact_int_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (l, &dc) in den.iter().enumerate() {
                rem[i + l] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}

/// An exact field element. The field is carried by the representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Cyclotomic { m: u32, coeffs: Vec<BigRational> },
    Prime { p: u64, value: u64 },
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Scalar {
        Scalar::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Scalar {
        Scalar::from_int(field, 1)
    }

    pub fn from_int(field: FieldSpec, n: i64) -> Scalar {
        Scalar::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: FieldSpec, n: &BigInt) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Cyclotomic(m) => {
                let mut coeffs = vec![BigRational::zero(); euler_phi(m) as usize];
                coeffs[0] = BigRational::from_integer(n.clone());
                Scalar::Cyclotomic { m, coeffs }
            }
            FieldSpec::PrimeField(p) => Scalar::Prime {
                p,
                value: reduce_bigint(n, p),
            },
        }
    }

    /// Embeds a rational number. Fails in 𝔽ₚ when p divides the denominator.
    pub fn from_rational(field: FieldSpec, q: &BigRational) -> Result<Scalar> {
        match field {
            FieldSpec::PrimeField(p) => {
                let num = reduce_bigint(q.numer(), p);
                let den = reduce_bigint(q.denom(), p);
                let inv = inv_mod(den, p).ok_or(Error::DivisionByZero)?;
                Ok(Scalar::Prime {
                    p,
                    value: mul_mod(num, inv, p),
                })
            }
            FieldSpec::Rationals => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Cyclotomic(m) => {
                let mut coeffs = vec![BigRational::zero(); euler_phi(m) as usize];
                coeffs[0] = q.clone();
                Ok(Scalar::Cyclotomic { m, coeffs })
            }
        }
    }

    /// Builds ζₘ-polynomial Σ cᵢ ζᵢ from arbitrary-length coefficients, reducing mod Φₘ.
    pub fn cyclotomic_from_coeffs(m: u32, coeffs: Vec<BigRational>) -> Scalar {
        Scalar::Cyclotomic {
            m,
            coeffs: reduce_cyclotomic(m, coeffs),
        }
    }

    /// ζ_M^e in ℚ(ζ_M).
    pub fn zeta_power(big_m: u32, e: i64) -> Scalar {
        let e = e.rem_euclid(big_m as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        Scalar::cyclotomic_from_coeffs(big_m, coeffs)
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Cyclotomic { m, .. } => FieldSpec::Cyclotomic(*m),
            Scalar::Prime { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Cyclotomic { coeffs, .. } => coeffs.iter().all(Zero::is_zero),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Cyclotomic { coeffs, .. } => {
                coeffs[0].is_one() && coeffs[1..].iter().all(Zero::is_zero)
            }
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        let (a, b) = (self.field(), other.field());
        if a != b {
            return Err(Error::FieldMismatch { left: a, right: b });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Cyclotomic { m, coeffs: a }, Scalar::Cyclotomic { coeffs: b, .. }) => {
                Scalar::Cyclotomic {
                    m: *m,
                    coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect(),
                }
            }
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Cyclotomic { m, coeffs: a }, Scalar::Cyclotomic { coeffs: b, .. }) => {
                if b.iter().skip(1).all(Zero::is_zero) {
                    let c = &b[0];
                    return Ok(Scalar::Cyclotomic {
                        m: *m,
                        coeffs: a.iter().map(|x| x * c).collect(),
                    });
                }
                let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            prod[i + j] += x * y;
                        }
                    }
                }
                Scalar::cyclotomic_from_coeffs(*m, prod)
            }
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                p: *p,
                value: mul_mod(*a, *b, *p),
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse. Cyclotomic inverses come from the extended
    /// Euclidean algorithm against Φₘ.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: inv_mod(*value, *p).ok_or(Error::DivisionByZero)?,
            },
            Scalar::Cyclotomic { m, coeffs } => {
                if coeffs.iter().skip(1).all(Zero::is_zero) {
                    let mut out = vec![BigRational::zero(); coeffs.len()];
                    out[0] = coeffs[0].recip();
                    return Ok(Scalar::Cyclotomic { m: *m, coeffs: out });
                }
                let phi: Vec<BigRational> = cyclotomic_polynomial(*m)
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect();
                let inv = qpoly_inverse_mod(coeffs, &phi).ok_or_else(|| {
                    Error::InternalConsistency("cyclotomic element not invertible".into())
                })?;
                Scalar::cyclotomic_from_coeffs(*m, inv)
            }
        })
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Cyclotomic { m, coeffs } => Scalar::Cyclotomic {
                m: *m,
                coeffs: coeffs.iter().map(|c| -c).collect(),
            },
            Scalar::Prime { p, value } => Scalar::Prime {
                p: *p,
                value: if *value == 0 { 0 } else { p - value },
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = Scalar::one(self.field());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Reduction ℚ → 𝔽ₚ. `None` when p divides the denominator or the
    /// scalar is not rational.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => Scalar::from_rational(FieldSpec::PrimeField(p), q).ok(),
            _ => None,
        }
    }

    /// The rational value, when the scalar lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(q) => Some(q.clone()),
            Scalar::Cyclotomic { coeffs, .. } => {
                if coeffs.iter().skip(1).all(Zero::is_zero) {
                    Some(coeffs[0].clone())
                } else {
                    None
                }
            }
            Scalar::Prime { .. } => None,
        }
    }

    /// Least common multiple of all rational denominators in the representation.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        match self {
            Scalar::Rational(q) => q.denom().clone(),
            Scalar::Cyclotomic { coeffs, .. } => coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom())),
            Scalar::Prime { .. } => BigInt::one(),
        }
    }

    /// True when the literal would need parentheses as a coefficient factor.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            Scalar::Cyclotomic { coeffs, .. } => coeffs.iter().filter(|c| !c.is_zero()).count() > 1,
            _ => false,
        }
    }

    /// Parses a scalar literal (`3`, `-1/2`, `z5^3+z5`, ...).
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        crate::parse::parse_scalar(text, field)
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = ((n % &pb) + &pb) % &pb;
    r.to_u64().expect("residue fits in u64")
}

/// Reduces a coefficient vector modulo Φₘ and pads it to length φ(m).
fn reduce_cyclotomic(m: u32, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(m);
    let d = phi.len() - 1;
    if v.len() > d {
        for top in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[top]);
            if c.is_zero() {
                continue;
            }
            for (l, &pc) in phi.iter().enumerate().take(d) {
                if pc != 0 {
                    v[top - d + l] -= &c * BigRational::from_integer(pc.into());
                }
            }
        }
        v.truncate(d);
    }
    v.resize(d, BigRational::zero());
    v
}

fn qpoly_trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    qpoly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (l, bc) in b.iter().enumerate() {
            r[shift + l] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        qpoly_trim(&mut r);
    }
    (q, r)
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    qpoly_trim(&mut out);
    out
}

/// Inverse of `a` modulo `modulus` over ℚ[t], when gcd(a, modulus) = 1.
fn qpoly_inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    qpoly_trim(&mut r1);
    let mut s0: Vec<BigRational> = vec![];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let s = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.into_iter().map(|x| x * &c).collect())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
            Scalar::Cyclotomic { m, coeffs } => {
                let mut out = String::new();
                for (e, c) in coeffs.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let term = if e == 0 {
                        c.to_string()
                    } else {
                        let mono = if e == 1 {
                            format!("z{m}")
                        } else {
                            format!("z{m}^{e}")
                        };
                        if c.is_one() {
                            mono
                        } else if (-c).is_one() {
                            format!("-{mono}")
                        } else {
                            format!("{c}*{mono}")
                        }
                    };
                    if !out.is_empty() && !term.starts_with('-') {
                        out.push('+');
                    }
                    out.push_str(&term);
                }
                if out.is_empty() {
                    out.push('0');
                }
                f.write_str(&out)
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).expect("scalar field mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
