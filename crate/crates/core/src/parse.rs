//! Expression parser for scalars and bihomogeneous forms.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'z' integer | 'x0' | 'x1' | 'y0' | 'y1' | '(' expr ')'
//! ```
//!
//! `z<m>` denotes a primitive m-th root of unity and must exist in the
//! target field. Division is only allowed by nonzero constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::bipoly::BiForm;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Exponents of (x0, x1, y0, y1).
type Exps = [u32; 4];

#[derive(Clone, Debug)]
struct Poly {
    terms: BTreeMap<Exps, Scalar>,
}

impl Poly {
    fn constant(c: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        Poly { terms }
    }

    fn var(field: FieldSpec, k: usize) -> Poly {
        let mut e = [0; 4];
        e[k] = 1;
        Poly {
            terms: BTreeMap::from([(e, field.one())]),
        }
    }

    fn as_constant(&self, field: FieldSpec) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(field.zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    fn add(mut self, other: Poly, sign: bool) -> Poly {
        for (e, c) in other.terms {
            let c = if sign { c } else { -c };
            let v = match self.terms.remove(&e) {
                Some(old) => &old + &c,
                None => c,
            };
            if !v.is_zero() {
                self.terms.insert(e, v);
            }
        }
        self
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly {
            terms: BTreeMap::new(),
        };
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                let single = Poly {
                    terms: BTreeMap::from([(e, a * b)]),
                };
                out = out.add(single, true);
            }
        }
        out
    }

    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: FieldSpec) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            field,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn parse_all(&mut self) -> Result<Poly> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!("unexpected `{}`", self.src[self.pos] as char));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?, true);
            } else if self.eat(b'-') {
                acc = acc.add(self.term()?, false);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                let Some(c) = d.as_constant(self.field) else {
                    self.pos = at;
                    return self.err("division by a non-constant");
                };
                let Ok(inv) = c.inverse() else {
                    self.pos = at;
                    return self.err("division by zero");
                };
                acc = acc.mul(&Poly::constant(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let Some(d) = self.digits() else {
                return self.err("expected a nonnegative integer exponent");
            };
            let Ok(e) = d.parse::<u32>() else {
                return self.err("exponent too large");
            };
            let mut acc = Poly::constant(self.field.one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let n: BigInt = d.parse().expect("digits");
                Ok(Poly::constant(Scalar::from_bigint(self.field, &n)))
            }
            Some(b'x') | Some(b'y') => {
                let letter = self.src[self.pos];
                self.pos += 1;
                let idx = match self.src.get(self.pos) {
                    Some(b'0') => 0,
                    Some(b'1') => 1,
                    _ => return self.err("expected variable x0, x1, y0 or y1"),
                };
                self.pos += 1;
                let k = if letter == b'x' { idx } else { 2 + idx };
                Ok(Poly::var(self.field, k))
            }
            Some(b'z') => {
                let at = self.pos;
                self.pos += 1;
                let Some(d) = self.digits() else {
                    return self.err("expected root-of-unity order after `z`");
                };
                let m: u32 = match d.parse() {
                    Ok(m) => m,
                    Err(_) => return self.err("root-of-unity order too large"),
                };
                match self.field.root_of_unity(m) {
                    Some(z) => Ok(Poly::constant(z)),
                    None => {
                        self.pos = at;
                        self.err(format!("z{m} is not available in {}", self.field))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
        }
    }
}

/// Parses a scalar literal in the given field.
pub fn parse_scalar(text: &str, field: FieldSpec) -> Result<Scalar> {
    let p = Parser::new(text, field).parse_all()?;
    p.as_constant(field).ok_or(Error::Parse {
        position: 0,
        message: "scalar literal contains variables".into(),
    })
}

/// Parses a bihomogeneous form; the bidegree is read off its monomials.
pub fn parse_biform(text: &str, field: FieldSpec) -> Result<BiForm> {
    parse_biform_with_bidegree(text, field, None)
}

/// Parses a bihomogeneous form, checking it against an expected bidegree.
/// The zero form takes the expected bidegree, or (0,0).
pub fn parse_biform_with_bidegree(
    text: &str,
    field: FieldSpec,
    expected: Option<(u32, u32)>,
) -> Result<BiForm> {
    let poly = Parser::new(text, field).parse_all()?;
    let text_of = |e: &Exps| {
        let s = BiForm::monomial_text(e[0] + e[1], e[2] + e[3], e[0], e[2]);
        if s.is_empty() {
            "1".to_string()
        } else {
            s
        }
    };
    let mut first: Option<&Exps> = None;
    for e in poly.terms.keys() {
        match first {
            None => first = Some(e),
            Some(f) => {
                if f[0] + f[1] != e[0] + e[1] || f[2] + f[3] != e[2] + e[3] {
                    return Err(Error::NotBihomogeneous {
                        first: text_of(f),
                        second: text_of(e),
                    });
                }
            }
        }
    }
    let bidegree = match first {
        Some(f) => (f[0] + f[1], f[2] + f[3]),
        None => expected.unwrap_or((0, 0)),
    };
    if let Some(exp) = expected {
        if exp != bidegree {
            return Err(Error::DegreeError(format!(
                "expected bidegree {exp:?}, found {bidegree:?}"
            )));
        }
    }
    let mut form = BiForm::zero(field, bidegree.0, bidegree.1);
    for (e, c) in poly.terms {
        form.set(e[0], e[2], c);
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_term_form() {
        let h = parse_biform("x0^3*y0^3 + x1^3*y1^3", FieldSpec::Rationals).unwrap();
        assert_eq!(h.bidegree(), (3, 3));
        assert_eq!(h.terms().count(), 2);
        assert!(h.coeff(3, 3).is_one() && h.coeff(0, 0).is_one());
    }

    #[test]
    fn sigma_family_member() {
        let f = FieldSpec::Cyclotomic(5);
        let h = parse_biform(
            "x0*x1^2*y1^3 - z5*x0^2*x1*y0^3 + (z5^3+z5^2+z5)*x0^3*y0*y1^2 + (z5^2+z5)*x1^3*y0^2*y1",
            f,
        )
        .unwrap();
        assert!(h.coeff(1, 0).is_one());
        assert_eq!(*h.coeff(2, 3), -Scalar::zeta_power(5, 1));
        assert_eq!(h.coeff(3, 1).to_string(), "z5^3+z5^2+z5");
        assert_eq!(h.coeff(0, 2).to_string(), "z5^2+z5");
        assert_eq!(h.terms().count(), 4);
    }

    #[test]
    fn rejects_non_bihomogeneous() {
        let e = parse_biform("x0^2*y0 + x0*y0", FieldSpec::Rationals).unwrap_err();
        match e {
            Error::NotBihomogeneous { first, second } => {
                let mut pair = [first, second];
                pair.sort();
                assert_eq!(pair, ["x0*y0".to_string(), "x0^2*y0".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_biform("x0*y0 + * x1", FieldSpec::Rationals).unwrap_err();
        assert!(matches!(e, Error::Parse { position: 8, .. }), "{e:?}");
        let e = parse_biform("x0*y0 + z5", FieldSpec::Rationals).unwrap_err();
        assert!(matches!(e, Error::Parse { position: 8, .. }), "{e:?}");
        assert!(parse_biform("x2", FieldSpec::Rationals).is_err());
        assert!(parse_biform("(x0", FieldSpec::Rationals).is_err());
        assert!(parse_biform("x0/x1", FieldSpec::Rationals).is_err());
    }

    #[test]
    fn scalars() {
        let q = FieldSpec::Rationals;
        assert_eq!(parse_scalar("1/2 + 1/3", q).unwrap().to_string(), "5/6");
        assert_eq!(parse_scalar("-3/6", q).unwrap().to_string(), "-1/2");
        let f7 = FieldSpec::PrimeField(7);
        assert_eq!(parse_scalar("1/3", f7).unwrap().to_string(), "5");
        assert!(parse_scalar("z5^5", FieldSpec::Cyclotomic(5))
            .unwrap()
            .is_one());
        assert!(parse_scalar("x0", q).is_err());
    }

    fn field_strategy() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::Rationals),
            Just(FieldSpec::Cyclotomic(5)),
            Just(FieldSpec::PrimeField(31)),
        ]
    }

    fn random_form() -> impl Strategy<Value = BiForm> {
        (field_strategy(), 0u32..5, 0u32..5).prop_flat_map(|(field, d1, d2)| {
            let n = ((d1 + 1) * (d2 + 1)) as usize;
            prop::collection::vec((-9i64..10, 1i64..4, 0i64..5), n).prop_map(move |cs| {
                let rows = cs
                    .chunks((d2 + 1) as usize)
                    .map(|r| {
                        r.iter()
                            .map(|&(n, d, e)| {
                                let base = Scalar::from_rational(
                                    field,
                                    &num_rational::BigRational::new(n.into(), d.into()),
                                )
                                .unwrap();
                                match field {
                                    FieldSpec::Cyclotomic(m) => {
                                        &base * &Scalar::zeta_power(m, e)
                                            + Scalar::from_int(field, e)
                                    }
                                    _ => base,
                                }
                            })
                            .collect()
                    })
                    .collect();
                BiForm::from_matrix(field, rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn print_parse_round_trip(h in random_form()) {
            prop_assume!(!h.is_zero());
            let text = h.to_string();
            let back = parse_biform_with_bidegree(&text, h.field(), Some(h.bidegree())).unwrap();
            prop_assert_eq!(back, h);
        }
    }
}
