//! Bihomogeneous forms on P¹×P¹.
//!
//! A form of bidegree (d₁,d₂) is a dense (d₁+1)×(d₂+1) coefficient matrix;
//! entry (i,j) multiplies x₀ⁱ x₁^{d₁−i} y₀ʲ y₁^{d₂−j}.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiForm {
    field: FieldSpec,
    d1: u32,
    d2: u32,
    coeffs: Vec<Scalar>,
}

/// Diagonal torus automorphism x₀ ↦ ζᵃ⁰x₀, x₁ ↦ ζᵃ¹x₁, y₀ ↦ ζᵇ⁰y₀, y₁ ↦ ζᵇ¹y₁
/// with ζ a primitive m-th root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusAuto {
    /// (a₀, a₁, b₀, b₁), read modulo `order`.
    pub weights: [u32; 4],
    pub order: u32,
}

impl TorusAuto {
    pub fn new(weights: [u32; 4], order: u32) -> Self {
        TorusAuto {
            weights: weights.map(|w| w % order.max(1)),
            order,
        }
    }

    /// Exponent of ζ picked up by x₀ⁱx₁^{d₁−i}y₀ʲy₁^{d₂−j}.
    pub fn monomial_weight(&self, d1: u32, d2: u32, i: u32, j: u32) -> u32 {
        let [a0, a1, b0, b1] = self.weights.map(u64::from);
        let (i, j, d1, d2) = (i as u64, j as u64, d1 as u64, d2 as u64);
        ((a0 * i + a1 * (d1 - i) + b0 * j + b1 * (d2 - j)) % self.order as u64) as u32
    }
}

impl BiForm {
    pub fn zero(field: FieldSpec, d1: u32, d2: u32) -> Self {
        BiForm {
            field,
            d1,
            d2,
            coeffs: vec![field.zero(); ((d1 + 1) * (d2 + 1)) as usize],
        }
    }

    /// c · x₀ⁱ x₁^{d₁−i} y₀ʲ y₁^{d₂−j}.
    pub fn monomial(d1: u32, d2: u32, i: u32, j: u32, c: Scalar) -> Self {
        assert!(i <= d1 && j <= d2, "monomial exponent out of range");
        let mut f = BiForm::zero(c.field(), d1, d2);
        f.set(i, j, c);
        f
    }

    /// From a (d₁+1)×(d₂+1) matrix indexed by (x₀-exponent, y₀-exponent).
    pub fn from_matrix(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DegreeError("empty coefficient matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DegreeError("ragged coefficient matrix".into()));
        }
        for c in rows.iter().flatten() {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: c.field(),
                });
            }
        }
        Ok(BiForm {
            field,
            d1: rows.len() as u32 - 1,
            d2: cols as u32 - 1,
            coeffs: rows.into_iter().flatten().collect(),
        })
    }

    /// The product u(x)·v(y) of an x-form with coefficients `u[i]` (of x₀ⁱ)
    /// and a y-form with coefficients `v[j]` (of y₀ʲ).
    pub fn outer(u: &[Scalar], v: &[Scalar]) -> Self {
        assert!(!u.is_empty() && !v.is_empty());
        let field = u[0].field();
        let mut f = BiForm::zero(field, u.len() as u32 - 1, v.len() as u32 - 1);
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                f.set(i as u32, j as u32, a * b);
            }
        }
        f
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }

    #[inline]
    fn idx(&self, i: u32, j: u32) -> usize {
        (i * (self.d2 + 1) + j) as usize
    }

    pub fn coeff(&self, i: u32, j: u32) -> &Scalar {
        &self.coeffs[self.idx(i, j)]
    }

    pub fn set(&mut self, i: u32, j: u32, c: Scalar) {
        assert_eq!(c.field(), self.field, "coefficient field mismatch");
        let k = self.idx(i, j);
        self.coeffs[k] = c;
    }

    /// Raw coefficients, row-major in (i, j).
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Nonzero terms as (i, j, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Scalar)> + '_ {
        let w = self.d2 + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k as u32 / w, k as u32 % w, c))
    }

    /// The coefficient matrix M with M[i][j] = coefficient of x₀ⁱx₁^{d₁−i}y₀ʲy₁^{d₂−j}.
    pub fn coeff_matrix(&self) -> Matrix {
        let w = (self.d2 + 1) as usize;
        Matrix::from_rows(
            self.field,
            self.coeffs.chunks(w).map(<[Scalar]>::to_vec).collect(),
        )
    }

    fn same_shape(&self, other: &BiForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        if self.bidegree() != other.bidegree() {
            return Err(Error::DegreeError(format!(
                "bidegree {:?} vs {:?}",
                self.bidegree(),
                other.bidegree()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BiForm) -> Result<BiForm> {
        self.same_shape(other)?;
        Ok(BiForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn checked_sub(&self, other: &BiForm) -> Result<BiForm> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> BiForm {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &Scalar) -> BiForm {
        BiForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            ..self.clone()
        }
    }

    /// Exact product; bidegrees add.
    pub fn mul(&self, other: &BiForm) -> Result<BiForm> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        let mut out = BiForm::zero(self.field, self.d1 + other.d1, self.d2 + other.d2);
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                let idx = out.idx(i + k, j + l);
                out.coeffs[idx] = &out.coeffs[idx] + &(a * b);
            }
        }
        Ok(out)
    }

    /// G with h·G = self, if it exists. Solved as a linear system in the
    /// coefficients of G.
    pub fn divide_exact(&self, h: &BiForm) -> Result<Option<BiForm>> {
        if self.field != h.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: h.field,
            });
        }
        if h.is_zero() {
            return Err(Error::DegreeError("division by the zero form".into()));
        }
        if self.d1 < h.d1 || self.d2 < h.d2 {
            return Err(Error::DegreeError(format!(
                "cannot divide bidegree {:?} by {:?}",
                self.bidegree(),
                h.bidegree()
            )));
        }
        let (e1, e2) = (self.d1 - h.d1, self.d2 - h.d2);
        if self.is_zero() {
            return Ok(Some(BiForm::zero(self.field, e1, e2)));
        }
        let system = multiplication_matrix(h, e1, e2);
        Ok(system.solve(&self.coeffs).map(|g| BiForm {
            field: self.field,
            d1: e1,
            d2: e2,
            coeffs: g,
        }))
    }

    pub fn is_divisible_by(&self, h: &BiForm) -> Result<bool> {
        Ok(self.divide_exact(h)?.is_some())
    }

    fn partial(&self, var: usize) -> BiForm {
        let (d1, d2) = self.bidegree();
        let (n1, n2) = match var {
            0 | 1 => (d1.saturating_sub(1), d2),
            _ => (d1, d2.saturating_sub(1)),
        };
        let mut out = BiForm::zero(self.field, n1, n2);
        for (i, j, c) in self.terms() {
            let (e, ni, nj) = match var {
                0 => (i, i.wrapping_sub(1), j),
                1 => (d1 - i, i, j),
                2 => (j, i, j.wrapping_sub(1)),
                _ => (d2 - j, i, j),
            };
            if e == 0 {
                continue;
            }
            out.set(ni, nj, c * &self.field.int(e as i64));
        }
        out
    }

    pub fn d_x0(&self) -> BiForm {
        self.partial(0)
    }
    pub fn d_x1(&self) -> BiForm {
        self.partial(1)
    }
    pub fn d_y0(&self) -> BiForm {
        self.partial(2)
    }
    pub fn d_y1(&self) -> BiForm {
        self.partial(3)
    }

    /// Swaps the two rulings: x ↔ y.
    pub fn transpose(&self) -> BiForm {
        let mut out = BiForm::zero(self.field, self.d2, self.d1);
        for (i, j, c) in self.terms() {
            out.set(j, i, c.clone());
        }
        out
    }

    pub fn eval(&self, x: [&Scalar; 2], y: [&Scalar; 2]) -> Scalar {
        let mut acc = self.field.zero();
        for (i, j, c) in self.terms() {
            let t = c * &(&(&x[0].pow(i as u64) * &x[1].pow((self.d1 - i) as u64))
                * &(&y[0].pow(j as u64) * &y[1].pow((self.d2 - j) as u64)));
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes x ↦ gx·x and y ↦ gy·y, where `gx = [[a,b],[c,d]]` sends
    /// x₀ ↦ a x₀ + b x₁ and x₁ ↦ c x₀ + d x₁.
    pub fn linear_change(&self, gx: &[[Scalar; 2]; 2], gy: &[[Scalar; 2]; 2]) -> BiForm {
        let xs: Vec<Vec<Scalar>> = (0..=self.d1)
            .map(|i| binary_power(gx, i, self.d1))
            .collect();
        let ys: Vec<Vec<Scalar>> = (0..=self.d2)
            .map(|j| binary_power(gy, j, self.d2))
            .collect();
        let mut out = BiForm::zero(self.field, self.d1, self.d2);
        for (i, j, c) in self.terms() {
            let xi = &xs[i as usize];
            let yj = &ys[j as usize];
            for (p, a) in xi.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let ca = c * a;
                for (q, b) in yj.iter().enumerate() {
                    if !b.is_zero() {
                        let idx = out.idx(p as u32, q as u32);
                        out.coeffs[idx] = &out.coeffs[idx] + &(&ca * b);
                    }
                }
            }
        }
        out
    }

    /// h∘σ, together with the character e such that h∘σ = ζᵉ·h when h is a
    /// σ-eigenform.
    pub fn apply_auto(&self, sigma: &TorusAuto) -> Result<(BiForm, Option<u32>)> {
        let zeta = self
            .field
            .root_of_unity(sigma.order)
            .ok_or(Error::FieldMismatch {
                left: self.field,
                right: FieldSpec::Cyclotomic(sigma.order.max(3)),
            })?;
        let mut out = self.clone();
        let mut character: Option<Option<u32>> = None;
        for (i, j, c) in self.terms() {
            let w = sigma.monomial_weight(self.d1, self.d2, i, j);
            out.set(i, j, c * &zeta.pow(w as u64));
            character = match character {
                None => Some(Some(w)),
                Some(Some(prev)) if prev == w => Some(Some(w)),
                _ => Some(None),
            };
        }
        Ok((out, character.unwrap_or(Some(0))))
    }

    /// Whether the variable (0 = x₀, 1 = x₁, 2 = y₀, 3 = y₁) divides the form.
    pub fn divisible_by_variable(&self, var: usize) -> bool {
        let (d1, d2) = self.bidegree();
        !self.is_zero()
            && self.terms().all(|(i, j, _)| match var {
                0 => i > 0,
                1 => i < d1,
                2 => j > 0,
                _ => j < d2,
            })
    }

    /// Monomial text for (i, j), e.g. `x0^2*x1*y1^3`.
    pub fn monomial_text(d1: u32, d2: u32, i: u32, j: u32) -> String {
        let parts: Vec<String> = [("x0", i), ("x1", d1 - i), ("y0", j), ("y1", d2 - j)]
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| {
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }

    pub fn parse(text: &str, field: FieldSpec) -> Result<BiForm> {
        crate::parse::parse_biform(text, field)
    }
}

/// Coefficients (by x₀-exponent) of (a x₀ + b x₁)ⁱ (c x₀ + d x₁)^{n−i}.
fn binary_power(g: &[[Scalar; 2]; 2], i: u32, n: u32) -> Vec<Scalar> {
    let field = g[0][0].field();
    // linear forms as [coeff of x1^1 x0^0, coeff of x0]
    let first = [g[0][1].clone(), g[0][0].clone()];
    let second = [g[1][1].clone(), g[1][0].clone()];
    let mut acc = vec![field.one()];
    let mut mul_linear = |lin: &[Scalar; 2]| {
        let mut next = vec![field.zero(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k] = &next[k] + &(a * &lin[0]);
            next[k + 1] = &next[k + 1] + &(a * &lin[1]);
        }
        acc = next;
    };
    for _ in 0..i {
        mul_linear(&first);
    }
    for _ in i..n {
        mul_linear(&second);
    }
    acc
}

/// Matrix of G ↦ h·G from Forms(e₁,e₂) to Forms(e₁+k₁, e₂+k₂) in the
/// row-major monomial bases.
pub fn multiplication_matrix(h: &BiForm, e1: u32, e2: u32) -> Matrix {
    let (k1, k2) = h.bidegree();
    let (t1, t2) = (e1 + k1, e2 + k2);
    let rows = ((t1 + 1) * (t2 + 1)) as usize;
    let cols = ((e1 + 1) * (e2 + 1)) as usize;
    let mut m = Matrix::zeros(h.field(), rows, cols);
    for a in 0..=e1 {
        for b in 0..=e2 {
            let col = (a * (e2 + 1) + b) as usize;
            for (i, j, c) in h.terms() {
                let row = ((a + i) * (t2 + 1) + (b + j)) as usize;
                m.set(row, col, c.clone());
            }
        }
    }
    m
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut terms: Vec<(u32, u32, &Scalar)> = self.terms().collect();
        terms.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
        for (i, j, c) in terms {
            let mono = BiForm::monomial_text(self.d1, self.d2, i, j);
            let cs = c.to_string();
            let term = if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else if c.is_compound() {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Serialize, Deserialize)]
struct BiFormWire {
    field: FieldSpec,
    bidegree: [u32; 2],
    coeffs: Vec<Vec<String>>,
}

impl Serialize for BiForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let w = (self.d2 + 1) as usize;
        BiFormWire {
            field: self.field,
            bidegree: [self.d1, self.d2],
            coeffs: self
                .coeffs
                .chunks(w)
                .map(|r| r.iter().map(Scalar::to_string).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = BiFormWire::deserialize(deserializer)?;
        let [d1, d2] = wire.bidegree;
        if wire.coeffs.len() != (d1 + 1) as usize
            || wire.coeffs.iter().any(|r| r.len() != (d2 + 1) as usize)
        {
            return Err(D::Error::custom(
                "coefficient matrix does not match bidegree",
            ));
        }
        let rows = wire
            .coeffs
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Scalar::parse(s, wire.field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        BiForm::from_matrix(wire.field, rows).map_err(D::Error::custom)
    }
}

/// Free-function form of [`BiForm::mul`].
pub fn biform_mul(a: &BiForm, b: &BiForm) -> Result<BiForm> {
    a.mul(b)
}

/// Free-function form of [`BiForm::divide_exact`].
pub fn biform_divide_exact(f: &BiForm, h: &BiForm) -> Result<Option<BiForm>> {
    f.divide_exact(h)
}
