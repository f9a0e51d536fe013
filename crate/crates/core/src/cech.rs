//! Čech cohomology of line bundles on P¹×P¹ restricted to a curve C = V(h).
//!
//! H¹(Q,O(a,b)) for a ≥ 0, b ≤ −2 is realized by Laurent monomials
//! x₀ᵖx₁^{a−p}y₀^{−r}y₁^{b+r} with p ∈ [0,a], r ∈ [1,−b−1]; bundles with the
//! poles in x are handled by swapping the two factors.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bipoly::{multiplication_matrix, BiForm};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Matrix, Rref};
use crate::smooth::CurveContext;

/// Monomial basis of H¹(Q,O(a,b)), a ≥ 0, b ≤ −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohBasis {
    pub a: i64,
    pub b: i64,
}

impl CohBasis {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 0 || b > -1 {
            return Err(Error::DegreeError(format!(
                "no y-pole cocycle basis for H^1(O({a},{b}))"
            )));
        }
        Ok(CohBasis { a, b })
    }

    pub fn len(&self) -> usize {
        ((self.a + 1) * (-self.b - 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, p: i64, r: i64) -> usize {
        (p * (-self.b - 1) + (r - 1)) as usize
    }

    /// (p, r) of the basis element at `idx`.
    pub fn element(&self, idx: usize) -> (i64, i64) {
        let w = -self.b - 1;
        let idx = idx as i64;
        (idx / w, idx % w + 1)
    }

    pub fn monomial_text(&self, idx: usize) -> String {
        let (p, r) = self.element(idx);
        LaurentForm::monomial_text(self.a, p, -r, self.b + r)
    }
}

/// A cohomology class in coordinates of a [`CohBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohVector {
    pub basis: CohBasis,
    pub coords: Vec<Scalar>,
}

/// Laurent polynomial of bidegree (a,b): homogeneous of degree a in x with
/// nonnegative exponents, and of total degree b in y with integer exponents.
/// Keys are (x₀-exponent, y₀-exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentForm {
    field: FieldSpec,
    a: i64,
    b: i64,
    terms: BTreeMap<(i64, i64), Scalar>,
}

impl LaurentForm {
    pub fn zero(field: FieldSpec, a: i64, b: i64) -> Self {
        LaurentForm {
            field,
            a,
            b,
            terms: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (x₀-exponent, y₀-exponent, y₁-exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, i64, &Scalar)> + '_ {
        self.terms
            .iter()
            .map(move |(&(p, e0), c)| (p, e0, self.b - e0, c))
    }

    fn add_term(&mut self, p: i64, e0: i64, c: Scalar) {
        let entry = self
            .terms
            .entry((p, e0))
            .or_insert_with(|| self.field.zero());
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&(p, e0));
        }
    }

    pub fn add(&self, other: &LaurentForm) -> LaurentForm {
        let mut out = self.clone();
        for (p, e0, _, c) in other.terms() {
            out.add_term(p, e0, c.clone());
        }
        out
    }

    pub fn mul_form(&self, f: &BiForm) -> LaurentForm {
        let (d1, d2) = f.bidegree();
        let mut out = LaurentForm::zero(self.field, self.a + d1 as i64, self.b + d2 as i64);
        for (p, e0, _, c) in self.terms() {
            for (i, j, fc) in f.terms() {
                out.add_term(p + i as i64, e0 + j as i64, c * fc);
            }
        }
        out
    }

    /// Smallest N ≥ 0 with y₁ᴺ·self free of negative y₁-exponents.
    pub fn y1_clearing_exponent(&self) -> u32 {
        self.terms()
            .map(|(_, _, e1, _)| (-e1).max(0))
            .max()
            .unwrap_or(0) as u32
    }

    /// y₁ᴺ·self as a form, when that has no negative exponents.
    pub fn times_y1_pow(&self, n: u32) -> Option<BiForm> {
        let d2 = self.b + n as i64;
        if self.a < 0 || d2 < 0 {
            return None;
        }
        let mut out = BiForm::zero(self.field, self.a as u32, d2 as u32);
        for (p, e0, e1, c) in self.terms() {
            if e0 < 0 || e1 + (n as i64) < 0 {
                return None;
            }
            out.set(p as u32, e0 as u32, c.clone());
        }
        Some(out)
    }

    fn monomial_text(a: i64, p: i64, e0: i64, e1: i64) -> String {
        let mut parts = Vec::new();
        for (v, e) in [("x0", p), ("x1", a - p), ("y0", e0), ("y1", e1)] {
            match e {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for LaurentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (p, e0, e1, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mono = LaurentForm::monomial_text(self.a, p, e0, e1);
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
        f.write_str(&out)
    }
}

/// dim H¹(Q,O(a,b)) by Künneth.
pub fn h1_dim(a: i64, b: i64) -> i64 {
    if a >= 0 && b <= -2 {
        (a + 1) * (-b - 1)
    } else if b >= 0 && a <= -2 {
        (-a - 1) * (b + 1)
    } else {
        0
    }
}

/// dim H⁰(Q,O(a,b)).
pub fn h0_quadric(a: i64, b: i64) -> i64 {
    if a >= 0 && b >= 0 {
        (a + 1) * (b + 1)
    } else {
        0
    }
}

/// h·w for a class w in H¹(a,b), as a Laurent form of bidegree (a+k,b+k).
pub fn times_h(h: &BiForm, w: &CohVector) -> LaurentForm {
    let (k1, k2) = h.bidegree();
    let basis = w.basis;
    let mut out = LaurentForm::zero(h.field(), basis.a + k1 as i64, basis.b + k2 as i64);
    for (idx, c) in w.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (p, r) = basis.element(idx);
        for (i, j, hc) in h.terms() {
            out.add_term(p + i as i64, j as i64 - r, c * hc);
        }
    }
    out
}

fn cocycle_matrix(h: &BiForm, a: i64, b: i64) -> Matrix {
    let (k, _) = h.bidegree();
    let k = k as i64;
    let source = CohBasis { a, b };
    let (ta, tb) = (a + k, b + k);
    let target_len = h1_dim(ta, tb).max(0) as usize;
    let target = CohBasis {
        a: ta,
        b: tb.min(-1),
    };
    let mut m = Matrix::zeros(h.field(), target_len, source.len());
    if target_len == 0 {
        return m;
    }
    for col in 0..source.len() {
        let (p, r) = source.element(col);
        for (i, j, c) in h.terms() {
            let r2 = r - j as i64;
            if r2 >= 1 && r2 < -tb {
                m.set(target.index(p + i as i64, r2), col, c.clone());
            }
        }
    }
    m
}

/// The map H¹(a,b) → H¹(a+k,b+k) induced by multiplication by h, in the
/// monomial cocycle bases (terms with a nonnegative y-exponent are
/// coboundaries and drop out).
pub fn mult_by_h_matrix(h: &BiForm, a: i64, b: i64) -> Result<Matrix> {
    let (k1, k2) = h.bidegree();
    if k1 != k2 {
        return Err(Error::DegreeError(format!(
            "h must have bidegree (k,k), got ({k1},{k2})"
        )));
    }
    if a < 0 || b > -2 || b + (k2 as i64) > -2 {
        return Err(Error::DegreeError(format!(
            "multiplication map needs a >= 0 and b + k <= -2, got ({a},{b}) with k = {k2}"
        )));
    }
    Ok(cocycle_matrix(h, a, b))
}

/// How the kernel of H¹(a−k,b−k) → H¹(a,b) is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Orientation {
    /// No H¹ in the source: the kernel is zero.
    Empty,
    /// Poles in y; computed with h as given.
    Direct,
    /// Poles in x; computed with h and (a,b) transposed.
    Transposed,
}

fn orientation(a: i64, b: i64, k: i64) -> Orientation {
    let (c, d) = (a - k, b - k);
    if c >= 0 && d <= -2 {
        Orientation::Direct
    } else if d >= 0 && c <= -2 {
        Orientation::Transposed
    } else {
        Orientation::Empty
    }
}

fn check_curve(ctx: &CurveContext) -> Result<()> {
    ctx.require_smooth()
}

/// dim ker(H¹(a−k,b−k) → H¹(a,b)) for a form h of bidegree (k,k), in
/// whichever orientation carries the H¹ classes.
pub fn connecting_kernel_dim(h: &BiForm, a: i64, b: i64) -> usize {
    let k = h.bidegree().0 as i64;
    let (h, a, b) = match orientation(a, b, k) {
        Orientation::Empty => return 0,
        Orientation::Direct => (h.clone(), a, b),
        Orientation::Transposed => (h.transpose(), b, a),
    };
    let m = cocycle_matrix(&h, a - k, b - k);
    m.ncols() - if m.nrows() == 0 { 0 } else { m.rank() }
}

/// h⁰(C, O_C(a,b)) without building a basis.
pub fn h0_dim(ctx: &CurveContext, a: i64, b: i64) -> Result<usize> {
    check_curve(ctx)?;
    let k = ctx.k as i64;
    let forms = h0_quadric(a, b) - h0_quadric(a - k, b - k);
    Ok(forms as usize + connecting_kernel_dim(&ctx.h, a, b))
}

/// Global section of O_C(a′,b′) given on the two charts {y₀≠0} and {y₁≠0}
/// by (−partB, partA).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSection {
    pub bidegree: (i64, i64),
    pub part_a: LaurentForm,
    pub part_b: LaurentForm,
    pub clearing: u32,
    pub class: CohVector,
}

impl ChartSection {
    fn from_class(h: &BiForm, class: CohVector) -> Result<Self> {
        let product = times_h(h, &class);
        let (a, b) = product.bidegree();
        let mut part_a = LaurentForm::zero(h.field(), a, b);
        let mut part_b = LaurentForm::zero(h.field(), a, b);
        for (p, e0, e1, c) in product.terms() {
            if e0 >= 0 {
                part_a.add_term(p, e0, c.clone());
            } else if e1 >= 0 {
                part_b.add_term(p, e0, c.clone());
            } else {
                return Err(Error::InternalConsistency(format!(
                    "class is not in the kernel: cocycle term {} survives",
                    LaurentForm::monomial_text(a, p, e0, e1)
                )));
            }
        }
        let clearing = part_a.y1_clearing_exponent();
        Ok(ChartSection {
            bidegree: (a, b),
            part_a,
            part_b,
            clearing,
            class,
        })
    }

    /// partA·y₁ᴺ as a form of bidegree (a′, b′+N).
    pub fn cleared_form(&self) -> BiForm {
        self.part_a
            .times_y1_pow(self.clearing)
            .expect("clearing exponent removes all y1 poles")
    }

    /// s·c for a (0,n)-form c with b′+n = 0, as a class in
    /// Forms(a′,N)/h·Forms(a′−k,N−k).
    pub fn times_form(&self, h: &BiForm, c: &BiForm) -> Result<QuotientClass> {
        section_times_form(h, self, c)
    }
}

/// Quotient Forms(a,b)/h·Forms(a−k,b−k), the image of H⁰(Q,O(a,b)) in
/// H⁰(C,O_C(a,b)).
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub bidegree: (u32, u32),
    field: FieldSpec,
    relations: Rref,
}

/// Normal form of a form in a [`QuotientSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    pub bidegree: (u32, u32),
    pub coords: Vec<Scalar>,
}

impl QuotientClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }
}

impl QuotientSpace {
    pub fn new(h: &BiForm, a: u32, b: u32) -> Self {
        let (k1, k2) = h.bidegree();
        let field = h.field();
        let n = ((a + 1) * (b + 1)) as usize;
        let relations = if a >= k1 && b >= k2 {
            multiplication_matrix(h, a - k1, b - k2).transpose().rref()
        } else {
            Matrix::zeros(field, 0, n).rref()
        };
        QuotientSpace {
            bidegree: (a, b),
            field,
            relations,
        }
    }

    pub fn dim(&self) -> usize {
        let (a, b) = self.bidegree;
        ((a + 1) * (b + 1)) as usize - self.relations.pivots.len()
    }

    /// Monomials (i,j) whose classes form a basis of the quotient.
    pub fn basis_monomials(&self) -> Vec<(u32, u32)> {
        let (a, b) = self.bidegree;
        let mut pivot = vec![false; ((a + 1) * (b + 1)) as usize];
        for &p in &self.relations.pivots {
            pivot[p] = true;
        }
        (0..=a)
            .flat_map(|i| (0..=b).map(move |j| (i, j)))
            .filter(|&(i, j)| !pivot[(i * (b + 1) + j) as usize])
            .collect()
    }

    pub fn reduce(&self, f: &BiForm) -> Result<QuotientClass> {
        if f.bidegree() != self.bidegree {
            return Err(Error::DegreeError(format!(
                "form of bidegree {:?} in quotient of bidegree {:?}",
                f.bidegree(),
                self.bidegree
            )));
        }
        if f.field() != self.field {
            return Err(Error::FieldMismatch {
                left: f.field(),
                right: self.field,
            });
        }
        let mut v = f.coeffs().to_vec();
        for (row, &p) in self.relations.rows.iter().zip(&self.relations.pivots) {
            let c = v[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&c * r);
                }
            }
        }
        Ok(QuotientClass {
            bidegree: self.bidegree,
            coords: v,
        })
    }
}

/// s·c reduced in Forms(a′,N)/h·Forms(a′−k,N−k).
pub fn section_times_form(h: &BiForm, s: &ChartSection, c: &BiForm) -> Result<QuotientClass> {
    let (a, b) = s.bidegree;
    let (c1, c2) = c.bidegree();
    if c1 != 0 || b + c2 as i64 != 0 {
        return Err(Error::DegreeError(format!(
            "section of O_C({a},{b}) times a ({c1},{c2})-form does not land in O_C({a},0)"
        )));
    }
    let product = s
        .part_a
        .mul_form(c)
        .times_y1_pow(s.clearing)
        .expect("cleared product is a form");
    QuotientSpace::new(h, a as u32, s.clearing).reduce(&product)
}

/// Representatives of a basis of H⁰(C,O_C(a,b)): restrictions of forms
/// plus sections coming from the connecting map's kernel. Sections are
/// expressed for the transposed curve when `transposed` is set.
#[derive(Clone, Debug)]
pub struct H0Basis {
    pub bidegree: (i64, i64),
    pub forms: Vec<BiForm>,
    pub sections: Vec<ChartSection>,
    pub transposed: bool,
}

impl H0Basis {
    pub fn len(&self) -> usize {
        self.forms.len() + self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn sections_for(h: &BiForm, c: i64, d: i64) -> Result<Vec<ChartSection>> {
    let basis = CohBasis { a: c, b: d };
    let m = cocycle_matrix(h, c, d);
    m.kernel()
        .into_iter()
        .map(|coords| ChartSection::from_class(h, CohVector { basis, coords }))
        .collect()
}

/// h⁰(C,O_C(a,b)) with an explicit basis.
pub fn h0_curve(ctx: &CurveContext, a: i64, b: i64) -> Result<(usize, H0Basis)> {
    check_curve(ctx)?;
    let h = &ctx.h;
    let k = ctx.k as i64;
    let forms = if a >= 0 && b >= 0 {
        QuotientSpace::new(h, a as u32, b as u32)
            .basis_monomials()
            .into_iter()
            .map(|(i, j)| BiForm::monomial(a as u32, b as u32, i, j, h.field().one()))
            .collect()
    } else {
        Vec::new()
    };
    let (sections, transposed) = match orientation(a, b, k) {
        Orientation::Empty => (Vec::new(), false),
        Orientation::Direct => (sections_for(h, a - k, b - k)?, false),
        Orientation::Transposed => (sections_for(&h.transpose(), b - k, a - k)?, true),
    };
    let basis = H0Basis {
        bidegree: (a, b),
        forms,
        sections,
        transposed,
    };
    Ok((basis.len(), basis))
}

/// Sections of O_C(n,−n) from the kernel of H¹(n−k,−n−k) → H¹(n,−n).
pub fn kernel_sections(ctx: &CurveContext, n: u32) -> Result<Vec<ChartSection>> {
    check_curve(ctx)?;
    let k = ctx.k as i64;
    let n = n as i64;
    if n < k {
        return Err(Error::DegreeError(format!(
            "kernel sections need n >= k = {k}, got {n}"
        )));
    }
    sections_for(&ctx.h, n - k, -n - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::SmoothVerdict;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn curve(s: &str) -> CurveContext {
        let ctx = CurveContext::certified(BiForm::parse(s, Q).unwrap()).unwrap();
        assert_eq!(ctx.smooth, SmoothVerdict::Smooth, "{s}");
        ctx
    }

    // a smooth grid curve: f1 g2 + g1 f2
    const GRID: &str =
        "(x0^3 + x1^3)*(y0^3 - 2*y1^3) + (x0^3 - x0*x1^2 + 3*x1^3)*(y0^3 + y0*y1^2 + y1^3)";
    const GENERIC: &str = "x0^3*y0^3 + 2*x0^3*y1^3 - x0^2*x1*y0*y1^2 + 3*x0*x1^2*y0^2*y1 + x1^3*y0^3 - x1^3*y1^3 + x0*x1^2*y1^3 + 5*x0^2*x1*y0^3 - 7*x1^3*y0*y1^2 + 2*x0*x1^2*y0*y1^2";

    #[test]
    fn h1_dims() {
        assert_eq!(h1_dim(0, -6), 5);
        assert_eq!(h1_dim(2, -3), 6);
        assert_eq!(h1_dim(-1, -1), 0);
        assert_eq!(h1_dim(-3, 1), 4);
        assert_eq!(CohBasis::new(0, -6).unwrap().len(), 5);
        assert!(CohBasis::new(0, -1).unwrap().is_empty());
    }

    #[test]
    fn fermat_multiplication_column() {
        let h = BiForm::parse("x0^3*y0^3 + x1^3*y1^3", Q).unwrap();
        let m = mult_by_h_matrix(&h, 0, -6).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (8, 5));
        // source y0^-1 y1^-5 is index 0; image x1^3 y0^-1 y1^-2 is index 0 of (3,-3)
        let col = m.column(0);
        assert_eq!(col[0], Q.int(1));
        assert_eq!(col.iter().filter(|c| !c.is_zero()).count(), 1);
        let doubled = mult_by_h_matrix(&h.scale(&Q.int(2)), 0, -6).unwrap();
        assert_eq!(doubled, m.scale(&Q.int(2)));
        assert!(mult_by_h_matrix(&h, 0, -4).is_err());
        assert!(mult_by_h_matrix(&h, -1, -6).is_err());
    }

    #[test]
    fn lemma_table_k3() {
        let ctx = curve(GENERIC);
        assert_eq!(h0_dim(&ctx, 1, 0).unwrap(), 2);
        assert_eq!(h0_dim(&ctx, 2, 0).unwrap(), 3);
        assert_eq!(h0_dim(&ctx, 3, 0).unwrap(), 6);
        assert_eq!(h0_dim(&ctx, 1, -1).unwrap(), 0);
        let (d, basis) = h0_curve(&ctx, 3, 0).unwrap();
        assert_eq!(d, 6);
        assert_eq!(basis.forms.len(), 4);
        assert_eq!(basis.sections.len(), 2);
    }

    #[test]
    fn grid_curve_has_torsion_section() {
        let ctx = curve(GRID);
        let sections = kernel_sections(&ctx, 3).unwrap();
        assert_eq!(sections.len(), 1);
        let s = &sections[0];
        let total = s.part_a.add(&s.part_b);
        assert_eq!(total, times_h(&ctx.h, &s.class));
        assert!(kernel_sections(&curve(GENERIC), 3).unwrap().is_empty());
        assert_eq!(kernel_sections(&ctx, 6).unwrap().len(), 1);
    }

    #[test]
    fn section_times_f2_is_multiple_of_f1() {
        let ctx = curve(GRID);
        let s = &kernel_sections(&ctx, 3).unwrap()[0];
        let f1 = BiForm::parse("x0^3 + x1^3", Q).unwrap();
        let f2 = BiForm::parse("y0^3 + y0*y1^2 + y1^3", Q).unwrap();
        let sc = s.times_form(&ctx.h, &f2).unwrap();
        assert!(!sc.is_zero());
        let y1n = BiForm::monomial(0, s.clearing, 0, 0, Q.one());
        let target = f1.mul(&y1n).unwrap();
        let space = QuotientSpace::new(&ctx.h, 3, s.clearing);
        let t = space.reduce(&target).unwrap();
        let lambda = {
            let i = sc.coords.iter().position(|c| !c.is_zero()).unwrap();
            sc.coords[i].checked_div(&t.coords[i]).unwrap()
        };
        let scaled: Vec<Scalar> = t.coords.iter().map(|c| c * &lambda).collect();
        assert_eq!(sc.coords, scaled);
        let zero = s.times_form(&ctx.h, &BiForm::zero(Q, 0, 3)).unwrap();
        assert!(zero.is_zero());
        assert!(s.times_form(&ctx.h, &BiForm::zero(Q, 0, 2)).is_err());
    }

    #[test]
    fn not_smooth_is_rejected() {
        let ctx =
            CurveContext::certified(BiForm::parse("x0^3*y0^3 + x1^3*y1^3", Q).unwrap()).unwrap();
        assert!(matches!(h0_dim(&ctx, 1, 0), Err(Error::NotSmooth)));
    }

    #[test]
    fn transposed_orientation() {
        let ctx = curve(GENERIC);
        // x-poles: O(0,3) and O(-1,3)
        assert_eq!(h0_dim(&ctx, 0, 3).unwrap(), 6);
        let (d, basis) = h0_curve(&ctx, -1, 4).unwrap();
        assert_eq!(d, 6);
        assert!(basis.forms.is_empty() && basis.transposed);
        let (d, basis) = h0_curve(&ctx, 0, 3).unwrap();
        assert_eq!(d, 6);
        assert_eq!(basis.sections.len(), 2);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn euler_characteristic_and_duality(a in -12i64..12, b in -12i64..12) {
                let h2 = h0_quadric(-2 - a, -2 - b);
                prop_assert_eq!(h0_quadric(a, b) - h1_dim(a, b) + h2, (a + 1) * (b + 1));
                prop_assert_eq!(h1_dim(a, b), h1_dim(-2 - a, -2 - b));
            }

            #[test]
            fn basis_index_round_trip(a in 0i64..8, b in -9i64..-1) {
                let basis = CohBasis::new(a, b).unwrap();
                prop_assert_eq!(basis.len() as i64, h1_dim(a, b));
                for idx in 0..basis.len() {
                    let (p, r) = basis.element(idx);
                    prop_assert_eq!(basis.index(p, r), idx);
                }
            }
        }
    }
}
