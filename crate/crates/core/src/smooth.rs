//! Exact smoothness certificates for curves V(h) ⊂ P¹×P¹.
//!
//! P¹×P¹ is split into four disjoint strata, each read in one affine chart:
//! the open cell {x₁≠0, y₁≠0}, the line {x₁=0, y₁≠0}, the line
//! {x₁≠0, y₁=0} and the point {x₁=0, y₁=0}. On the open cell the common
//! zeros of h̃, ∂h̃/∂x, ∂h̃/∂y are projected to the x-axis with resultants,
//! and each x-fiber is decided by a gcd over base[x]/(q) computed with
//! dynamic splitting of q whenever a zero divisor shows up. The boundary
//! strata reduce to univariate gcds over the base field.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bipoly::BiForm;
use crate::error::{Error, Result};
use crate::field::{is_prime, pow_mod, FieldSpec, Scalar};
use crate::linalg::bareiss_det;
use crate::upoly::UniPoly;

const MAX_PROJECTION_TRIES: usize = 8;

/// Affine chart of P¹×P¹, named by the coordinates set to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chart {
    /// x₁ = y₁ = 1, coordinates (x₀, y₀).
    X1Y1,
    /// x₀ = y₁ = 1, coordinates (x₁, y₀).
    X0Y1,
    /// x₁ = y₀ = 1, coordinates (x₀, y₁).
    X1Y0,
    /// x₀ = y₀ = 1, coordinates (x₁, y₁).
    X0Y0,
}

impl Chart {
    pub const ALL: [Chart; 4] = [Chart::X1Y1, Chart::X0Y1, Chart::X1Y0, Chart::X0Y0];

    /// Names of the two affine coordinates.
    pub fn coordinates(self) -> (&'static str, &'static str) {
        match self {
            Chart::X1Y1 => ("x0", "y0"),
            Chart::X0Y1 => ("x1", "y0"),
            Chart::X1Y0 => ("x0", "y1"),
            Chart::X0Y0 => ("x1", "y1"),
        }
    }
}

/// Polynomial in two affine variables (s, t), stored as coefficients of
/// tʲ, each a polynomial in s.
pub type BiPoly = Vec<UniPoly>;

/// Where a singular point lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessLocus {
    /// An exact point ([x₀:x₁], [y₀:y₁]) over the base field.
    Point { x: [Scalar; 2], y: [Scalar; 2] },
    /// base(s) = 0 and fiber(s, t) = 0 in the chart's coordinates (s, t),
    /// with `fiber` monic in t modulo `base`. Every root s of `base` carries
    /// at least one common zero.
    Triangular {
        base_var: &'static str,
        base: UniPoly,
        fiber_var: &'static str,
        fiber: BiPoly,
    },
    /// A common factor of h̃ and both affine partials: a whole curve of
    /// singular points (h has a repeated component).
    Component {
        base_var: &'static str,
        fiber_var: &'static str,
        factor: BiPoly,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularWitness {
    pub chart: Chart,
    pub locus: WitnessLocus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothVerdict {
    Smooth,
    Singular(Vec<SingularWitness>),
    Unchecked,
}

impl SmoothVerdict {
    pub fn is_smooth(&self) -> bool {
        matches!(self, SmoothVerdict::Smooth)
    }
}

/// A curve of bidegree (k,k) with its genus and smoothness verdict.
#[derive(Clone, Debug)]
pub struct CurveContext {
    pub h: BiForm,
    pub k: u32,
    pub genus: u32,
    pub smooth: SmoothVerdict,
}

impl CurveContext {
    /// Wraps h without checking smoothness.
    pub fn new(h: BiForm) -> Result<Self> {
        let (d1, d2) = h.bidegree();
        if d1 != d2 {
            return Err(Error::DegreeError(format!(
                "curve must have bidegree (k,k), got ({d1},{d2})"
            )));
        }
        if h.is_zero() {
            return Err(Error::DegenerateInput("the zero form".into()));
        }
        Ok(CurveContext {
            k: d1,
            genus: (d1.saturating_sub(1)).pow(2),
            smooth: SmoothVerdict::Unchecked,
            h,
        })
    }

    /// Wraps h and runs the smoothness check.
    pub fn certified(h: BiForm) -> Result<Self> {
        let mut ctx = CurveContext::new(h)?;
        ctx.smooth = singular_locus(&ctx.h)?;
        Ok(ctx)
    }

    pub fn field(&self) -> FieldSpec {
        self.h.field()
    }

    pub fn require_smooth(&self) -> Result<()> {
        if self.smooth.is_smooth() {
            Ok(())
        } else {
            Err(Error::NotSmooth)
        }
    }
}

/// Decides whether V(h) ⊂ P¹×P¹ is smooth; singular loci come with exact
/// witnesses, one per stratum component.
pub fn singular_locus(h: &BiForm) -> Result<SmoothVerdict> {
    if h.is_zero() {
        return Err(Error::DegenerateInput("the zero form".into()));
    }
    if h.field().characteristic() == 0 && smooth_by_reduction(h)? {
        return Ok(SmoothVerdict::Smooth);
    }
    chart_analysis(h)
}

/// A reduction modulo a prime of the coefficient ring that is still a
/// (k,k)-form and is smooth certifies smoothness in characteristic 0: the
/// singular locus over the local ring is proper, so if it met the generic
/// fiber it would meet the special one.
fn smooth_by_reduction(h: &BiForm) -> Result<bool> {
    for (p, root) in reduction_primes(h.field())
        .into_iter()
        .take(REDUCTION_TRIES)
    {
        let Some(reduced) = reduce_form(h, p, root) else {
            continue;
        };
        if !reduced.is_zero() && chart_analysis(&reduced)? == SmoothVerdict::Smooth {
            return Ok(true);
        }
    }
    Ok(false)
}

const REDUCTION_TRIES: usize = 2;

/// Primes p ≈ 2³⁰ with p ≡ 1 mod m, each with a primitive m-th root of unity
/// in 𝔽ₚ (m = 1 for ℚ).
fn reduction_primes(field: FieldSpec) -> Vec<(u64, u64)> {
    let m = match field {
        FieldSpec::Cyclotomic(m) => m as u64,
        _ => 1,
    };
    let factors: Vec<u64> = (2..=m).filter(|&q| m % q == 0 && is_prime(q)).collect();
    let mut out = Vec::new();
    let mut p = (1u64 << 30) / m * m + 1;
    while out.len() < REDUCTION_TRIES {
        if is_prime(p) {
            let root = (2..p)
                .map(|a| pow_mod(a, (p - 1) / m, p))
                .find(|&r| factors.iter().all(|&q| pow_mod(r, m / q, p) != 1))
                .expect("F_p* is cyclic");
            out.push((p, root));
        }
        p += m;
    }
    out
}

fn reduce_scalar(c: &Scalar, p: u64, root: u64) -> Option<Scalar> {
    let fp = FieldSpec::PrimeField(p);
    match c {
        Scalar::Rational(q) => Scalar::from_rational(fp, q).ok(),
        Scalar::Cyclotomic { coeffs, .. } => {
            let mut acc = fp.zero();
            let mut power = fp.one();
            let z = fp.int(root as i64);
            for q in coeffs {
                acc = &acc + &(&Scalar::from_rational(fp, q).ok()? * &power);
                power = &power * &z;
            }
            Some(acc)
        }
        Scalar::Prime { .. } => None,
    }
}

fn reduce_form(h: &BiForm, p: u64, root: u64) -> Option<BiForm> {
    let (d1, d2) = h.bidegree();
    let mut out = BiForm::zero(FieldSpec::PrimeField(p), d1, d2);
    for (i, j, c) in h.terms() {
        out.set(i, j, reduce_scalar(c, p, root)?);
    }
    Some(out)
}

fn chart_analysis(h: &BiForm) -> Result<SmoothVerdict> {
    let field = h.field();
    let mut rng = ChaCha8Rng::seed_from_u64(form_seed(h));
    let mut witnesses = Vec::new();

    // open cell
    let f = dehomogenize(h, Chart::X1Y1);
    witnesses.extend(open_cell(&f, field, &mut rng)?);

    // line x₁ = 0 (chart x₀ = 1, coordinates (x₁, y₀), at x₁ = 0)
    let f = dehomogenize(h, Chart::X0Y1);
    let at0 = bipoly_coeff_in_s(&f, 0);
    let ds_at0 = bipoly_coeff_in_s(&f, 1);
    let dt_at0 = at0.derivative();
    witnesses.extend(boundary_line(
        Chart::X0Y1,
        true,
        [&at0, &ds_at0, &dt_at0],
        field,
    ));

    // line y₁ = 0 (chart y₀ = 1, coordinates (x₀, y₁), at y₁ = 0)
    let f = dehomogenize(h, Chart::X1Y0);
    let at0 = coeff_t(&f, 0);
    let dt_at0 = coeff_t(&f, 1);
    let ds_at0 = at0.derivative();
    witnesses.extend(boundary_line(
        Chart::X1Y0,
        false,
        [&at0, &ds_at0, &dt_at0],
        field,
    ));

    // the point x₁ = y₁ = 0
    let f = dehomogenize(h, Chart::X0Y0);
    let value = coeff_t(&f, 0).coeff(0);
    let ds = coeff_t(&f, 0).coeff(1);
    let dt = coeff_t(&f, 1).coeff(0);
    if value.is_zero() && ds.is_zero() && dt.is_zero() {
        witnesses.push(SingularWitness {
            chart: Chart::X0Y0,
            locus: WitnessLocus::Point {
                x: [field.one(), field.zero()],
                y: [field.one(), field.zero()],
            },
        });
    }

    Ok(if witnesses.is_empty() {
        SmoothVerdict::Smooth
    } else {
        SmoothVerdict::Singular(witnesses)
    })
}

/// FNV-1a of the canonical text, so retries are reproducible per input.
fn form_seed(h: &BiForm) -> u64 {
    let text = format!("{}|{}", h.field(), h);
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |acc, b| {
        (acc ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// h in the given chart as a polynomial in the chart's coordinates (s, t).
pub fn dehomogenize(h: &BiForm, chart: Chart) -> BiPoly {
    let field = h.field();
    let (d1, d2) = h.bidegree();
    let mut grid = vec![vec![field.zero(); d1 as usize + 1]; d2 as usize + 1];
    for (i, j, c) in h.terms() {
        let s = match chart {
            Chart::X1Y1 | Chart::X1Y0 => i,
            _ => d1 - i,
        };
        let t = match chart {
            Chart::X1Y1 | Chart::X0Y1 => j,
            _ => d2 - j,
        };
        grid[t as usize][s as usize] = c.clone();
    }
    let mut out: BiPoly = grid
        .into_iter()
        .map(|coeffs| UniPoly::from_coeffs(field, coeffs))
        .collect();
    trim(&mut out);
    out
}

fn trim(f: &mut BiPoly) {
    while f.last().is_some_and(UniPoly::is_zero) {
        f.pop();
    }
}

fn coeff_t(f: &BiPoly, j: usize) -> UniPoly {
    f.get(j)
        .cloned()
        .unwrap_or_else(|| UniPoly::zero(field_of(f)))
}

fn field_of(f: &BiPoly) -> FieldSpec {
    f.first()
        .map(UniPoly::field)
        .unwrap_or(FieldSpec::Rationals)
}

/// The coefficient of sⁱ, as a polynomial in t.
fn bipoly_coeff_in_s(f: &BiPoly, i: usize) -> UniPoly {
    let field = field_of(f);
    UniPoly::from_coeffs(field, f.iter().map(|c| c.coeff(i)).collect())
}

pub(crate) fn d_s(f: &BiPoly) -> BiPoly {
    let mut out: BiPoly = f.iter().map(UniPoly::derivative).collect();
    trim(&mut out);
    out
}

pub(crate) fn d_t(f: &BiPoly) -> BiPoly {
    let field = field_of(f);
    let mut out: BiPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.scale(&field.int(j as i64)))
        .collect();
    trim(&mut out);
    out
}

fn bipoly_add_scaled(a: &BiPoly, b: &BiPoly, c: &Scalar) -> BiPoly {
    let n = a.len().max(b.len());
    let field = c.field();
    let mut out: BiPoly = (0..n)
        .map(|j| {
            let x = a.get(j).cloned().unwrap_or_else(|| UniPoly::zero(field));
            let y = b.get(j).cloned().unwrap_or_else(|| UniPoly::zero(field));
            &x + &y.scale(c)
        })
        .collect();
    trim(&mut out);
    out
}

/// A polynomial in s vanishing at the s-coordinate of every common zero
/// of f and g (zero when f and g share a factor of positive t-degree).
fn projection(f: &BiPoly, g: &BiPoly, field: FieldSpec) -> UniPoly {
    if f.is_empty() || g.is_empty() {
        return UniPoly::zero(field);
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 && n == 0 {
        return f[0].gcd(&g[0]);
    }
    let size = m + n;
    let zero = UniPoly::zero(field);
    let mut rows = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for (j, c) in f.iter().enumerate() {
            rows[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in g.iter().enumerate() {
            rows[n + r][r + j] = c.clone();
        }
    }
    bareiss_det(rows, UniPoly::one(field), zero)
}

fn content(f: &BiPoly) -> UniPoly {
    f.iter()
        .fold(UniPoly::zero(field_of(f)), |acc, c| acc.gcd(c))
}

fn primitive_part(f: &BiPoly) -> BiPoly {
    let c = content(f);
    if c.is_zero() {
        return f.clone();
    }
    f.iter()
        .map(|x| x.div_exact(&c).expect("content divides"))
        .collect()
}

/// Pseudo-remainder of a by b in t over base[s].
fn pseudo_rem(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lc = b[db].clone();
    while !r.is_empty() && r.len() > db {
        let shift = r.len() - 1 - db;
        let lead = r.last().unwrap().clone();
        let mut next: BiPoly = r.iter().map(|c| c * &lc).collect();
        for (j, bc) in b.iter().enumerate() {
            next[shift + j] = &next[shift + j] - &(&lead * bc);
        }
        next.pop();
        trim(&mut next);
        r = next;
    }
    r
}

/// Primitive gcd in t of two bivariate polynomials over base[s].
fn bivariate_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let (mut a, mut b) = (primitive_part(a), primitive_part(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![UniPoly::one(field_of(&b))];
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    a
}

fn divides(factor: &BiPoly, f: &BiPoly) -> bool {
    f.is_empty() || pseudo_rem(f, factor).is_empty()
}

fn projection_parameters(field: FieldSpec, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    match field {
        FieldSpec::PrimeField(p) => {
            let mut all: Vec<u64> = (0..p.min(4096)).collect();
            all.shuffle(rng);
            all.into_iter()
                .take(MAX_PROJECTION_TRIES)
                .map(|v| field.int(v as i64))
                .collect()
        }
        _ => {
            let mut seen = Vec::new();
            while seen.len() < MAX_PROJECTION_TRIES {
                let v: i64 = rng.gen_range(-1000..=1000);
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
            seen.into_iter().map(|v| field.int(v)).collect()
        }
    }
}

fn open_cell(f: &BiPoly, field: FieldSpec, rng: &mut ChaCha8Rng) -> Result<Vec<SingularWitness>> {
    let chart = Chart::X1Y1;
    let (base_var, fiber_var) = chart.coordinates();
    if f.is_empty() {
        return Err(Error::DegenerateInput("the zero form".into()));
    }
    if f.len() == 1 && f[0].is_constant() {
        return Ok(vec![]);
    }
    let fs = d_s(f);
    let ft = d_t(f);

    let mut projections = Vec::new();
    for t in projection_parameters(field, rng) {
        let combo = bipoly_add_scaled(&fs, &ft, &t);
        let r = projection(f, &combo, field);
        if r.is_zero() {
            let common = bivariate_gcd(f, &combo);
            if common.len() > 1 && divides(&common, &fs) && divides(&common, &ft) {
                return Ok(vec![SingularWitness {
                    chart,
                    locus: WitnessLocus::Component {
                        base_var,
                        fiber_var,
                        factor: common,
                    },
                }]);
            }
            continue;
        }
        projections.push(r);
        if projections.len() == 2 {
            break;
        }
    }
    if projections.is_empty() {
        return Err(Error::InternalConsistency(
            "no admissible projection direction for the singular locus".into(),
        ));
    }
    let g = projections
        .iter()
        .skip(1)
        .fold(projections[0].clone(), |acc, r| acc.gcd(r));
    if g.is_constant() {
        return Ok(vec![]);
    }
    let q = g.radical();
    let mut witnesses = Vec::new();
    for (qi, gi) in triangular_gcd(&q, &[f.clone(), fs, ft]) {
        if gi.is_empty() {
            witnesses.push(SingularWitness {
                chart,
                locus: WitnessLocus::Component {
                    base_var,
                    fiber_var,
                    factor: vec![qi],
                },
            });
        } else if gi.len() > 1 {
            witnesses.push(SingularWitness {
                chart,
                locus: fiber_locus(chart, qi, gi),
            });
        }
    }
    Ok(witnesses)
}

/// Exact point when the base is linear and the fiber has a single root;
/// the triangular system otherwise.
fn fiber_locus(chart: Chart, base: UniPoly, fiber: BiPoly) -> WitnessLocus {
    let (base_var, fiber_var) = chart.coordinates();
    if base.degree() == Some(1) {
        let field = base.field();
        let s = -&base.monic().coeff(0);
        let univariate = UniPoly::from_coeffs(field, fiber.iter().map(|c| c.eval(&s)).collect());
        let simple = squarefree_part(&univariate);
        if simple.degree() == Some(1) {
            let t = -&simple.monic().coeff(0);
            let (x, y) = chart_point(chart, s, t);
            return WitnessLocus::Point { x, y };
        }
    }
    WitnessLocus::Triangular {
        base_var,
        base,
        fiber_var,
        fiber,
    }
}

fn squarefree_part(f: &UniPoly) -> UniPoly {
    if f.is_constant() {
        return f.clone();
    }
    f.radical()
}

/// Projective coordinates of the chart point (s, t).
fn chart_point(chart: Chart, s: Scalar, t: Scalar) -> ([Scalar; 2], [Scalar; 2]) {
    let one = s.field().one();
    match chart {
        Chart::X1Y1 => ([s, one.clone()], [t, one]),
        Chart::X0Y1 => ([one.clone(), s], [t, one]),
        Chart::X1Y0 => ([s, one.clone()], [one, t]),
        Chart::X0Y0 => ([one.clone(), s], [one, t]),
    }
}

/// Singular points on a boundary line. `s_is_zero` says which chart
/// coordinate is pinned to 0; `polys` are h̃, ∂h̃/∂s, ∂h̃/∂t restricted
/// to the line, as polynomials in the free coordinate.
fn boundary_line(
    chart: Chart,
    s_is_zero: bool,
    polys: [&UniPoly; 3],
    field: FieldSpec,
) -> Vec<SingularWitness> {
    let g = polys[0].gcd(polys[1]).gcd(polys[2]);
    let (s_var, t_var) = chart.coordinates();
    let pinned = UniPoly::var(field);
    if g.is_zero() {
        let factor: BiPoly = if s_is_zero {
            vec![pinned]
        } else {
            vec![UniPoly::zero(field), UniPoly::one(field)]
        };
        return vec![SingularWitness {
            chart,
            locus: WitnessLocus::Component {
                base_var: s_var,
                fiber_var: t_var,
                factor,
            },
        }];
    }
    if g.is_constant() {
        return vec![];
    }
    let simple = squarefree_part(&g);
    let locus = if simple.degree() == Some(1) {
        let free = -&simple.coeff(0);
        let (s, t) = if s_is_zero {
            (field.zero(), free)
        } else {
            (free, field.zero())
        };
        let (x, y) = chart_point(chart, s, t);
        WitnessLocus::Point { x, y }
    } else {
        // base is the pinned coordinate, fiber the free one
        let (base_var, fiber_var) = if s_is_zero {
            (s_var, t_var)
        } else {
            (t_var, s_var)
        };
        WitnessLocus::Triangular {
            base_var,
            base: pinned,
            fiber_var,
            fiber: simple
                .coeffs()
                .iter()
                .cloned()
                .map(UniPoly::constant)
                .collect(),
        }
    };
    vec![SingularWitness { chart, locus }]
}

// ---- gcd over base[s]/(q) with dynamic splitting ----

enum Normalized {
    Ready(BiPoly),
    Split(UniPoly, UniPoly),
}

fn reduce_mod(f: &BiPoly, q: &UniPoly) -> BiPoly {
    let mut out: BiPoly = f.iter().map(|c| c.rem(q)).collect();
    trim(&mut out);
    out
}

/// Strips leading coefficients that vanish mod q. Returns a split of q
/// when a leading coefficient is a zero divisor.
fn normalize(f: &BiPoly, q: &UniPoly) -> Normalized {
    let mut f = reduce_mod(f, q);
    while let Some(lead) = f.last() {
        let g = lead.gcd(q);
        if g.degree() == q.degree() {
            f.pop();
            continue;
        }
        if g.is_constant() {
            break;
        }
        let other = q.div_exact(&g).expect("gcd divides");
        return Normalized::Split(g, other);
    }
    trim(&mut f);
    Normalized::Ready(f)
}

fn inverse_mod(a: &UniPoly, q: &UniPoly) -> UniPoly {
    let (g, s, _) = a.ext_gcd(q);
    debug_assert!(g.is_constant() && !g.is_zero());
    s.rem(q)
}

fn monic_mod(f: &BiPoly, q: &UniPoly) -> BiPoly {
    match f.last() {
        None => f.clone(),
        Some(lead) => {
            let inv = inverse_mod(lead, q);
            reduce_mod(&f.iter().map(|c| c * &inv).collect(), q)
        }
    }
}

/// a mod b over base[s]/(q), b with unit leading coefficient.
fn rem_mod(a: &BiPoly, b: &BiPoly, q: &UniPoly) -> BiPoly {
    let db = b.len() - 1;
    let inv = inverse_mod(&b[db], q);
    let mut r = reduce_mod(a, q);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r.last().unwrap() * &inv).rem(q);
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = (&r[shift + j] - &(&c * bc)).rem(q);
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        trim(&mut r);
    }
    r
}

fn gcd_mod(q: UniPoly, a: BiPoly, b: BiPoly, out: &mut Vec<(UniPoly, BiPoly)>) {
    match normalize(&b, &q) {
        Normalized::Split(q1, q2) => {
            gcd_mod(q1.clone(), reduce_mod(&a, &q1), reduce_mod(&b, &q1), out);
            gcd_mod(q2.clone(), reduce_mod(&a, &q2), reduce_mod(&b, &q2), out);
        }
        Normalized::Ready(b) if b.is_empty() => match normalize(&a, &q) {
            Normalized::Split(q1, q2) => {
                gcd_mod(q1.clone(), reduce_mod(&a, &q1), vec![], out);
                gcd_mod(q2.clone(), reduce_mod(&a, &q2), vec![], out);
            }
            Normalized::Ready(a) => {
                let g = monic_mod(&a, &q);
                out.push((q, g));
            }
        },
        Normalized::Ready(b) => {
            let r = rem_mod(&a, &b, &q);
            gcd_mod(q, b, r, out);
        }
    }
}

/// gcd of several polynomials in t over base[s]/(q), for squarefree q.
/// Returns the pieces of the splitting of q with the gcd on each (monic in
/// t, or empty for the zero polynomial).
pub(crate) fn triangular_gcd(q: &UniPoly, polys: &[BiPoly]) -> Vec<(UniPoly, BiPoly)> {
    let mut branches = vec![(q.monic(), reduce_mod(&polys[0], q))];
    for p in &polys[1..] {
        let mut next = Vec::new();
        for (qi, gi) in branches {
            let pi = reduce_mod(p, &qi);
            gcd_mod(qi, gi, pi, &mut next);
        }
        branches = next;
    }
    branches
        .into_iter()
        .map(|(qi, gi)| (qi.monic(), gi))
        .collect()
}

impl SingularWitness {
    /// Substitutes the witness back into h and its partials; true when all
    /// of them vanish on the witness.
    pub fn verify(&self, h: &BiForm) -> bool {
        match &self.locus {
            WitnessLocus::Point { x, y } => {
                let xs = [&x[0], &x[1]];
                let ys = [&y[0], &y[1]];
                [h.clone(), h.d_x0(), h.d_x1(), h.d_y0(), h.d_y1()]
                    .iter()
                    .all(|g| g.eval(xs, ys).is_zero())
            }
            WitnessLocus::Triangular {
                base_var,
                base,
                fiber,
                ..
            } => {
                let f = self.chart_poly(h, base_var);
                [f.clone(), d_s(&f), d_t(&f)]
                    .iter()
                    .all(|g| rem_mod(g, fiber, base).is_empty())
            }
            WitnessLocus::Component {
                base_var, factor, ..
            } => {
                let f = self.chart_poly(h, base_var);
                [f.clone(), d_s(&f), d_t(&f)]
                    .iter()
                    .all(|g| divides(factor, g))
            }
        }
    }

    /// h in this witness' chart, with the base variable as s.
    fn chart_poly(&self, h: &BiForm, base_var: &str) -> BiPoly {
        let f = dehomogenize(h, self.chart);
        if base_var == self.chart.coordinates().0 {
            f
        } else {
            swap_variables(&f)
        }
    }
}

fn swap_variables(f: &BiPoly) -> BiPoly {
    let field = field_of(f);
    let ds = f
        .iter()
        .filter_map(UniPoly::degree)
        .max()
        .map_or(0, |d| d + 1);
    let mut out: BiPoly = (0..ds).map(|i| bipoly_coeff_in_s(f, i)).collect();
    if out.is_empty() {
        out.push(UniPoly::zero(field));
    }
    trim(&mut out);
    out
}

/// Formats a chart polynomial with variable names.
pub fn format_bipoly(f: &BiPoly, s: &str, t: &str) -> String {
    let mut parts = Vec::new();
    for (j, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let inner = c.display_in(s);
        let tpow = match j {
            0 => String::new(),
            1 => t.to_string(),
            _ => format!("{t}^{j}"),
        };
        parts.push(match (tpow.is_empty(), inner.as_str()) {
            (true, _) => format!("({inner})"),
            (false, "1") => tpow,
            _ => format!("({inner})*{tpow}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for SingularWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.locus {
            WitnessLocus::Point { x, y } => {
                write!(f, "([{}:{}],[{}:{}])", x[0], x[1], y[0], y[1])
            }
            WitnessLocus::Triangular {
                base_var,
                base,
                fiber_var,
                fiber,
            } => write!(
                f,
                "{:?}: {} = 0, {} = 0",
                self.chart,
                base.display_in(base_var),
                format_bipoly(fiber, base_var, fiber_var)
            ),
            WitnessLocus::Component {
                base_var,
                fiber_var,
                factor,
            } => write!(
                f,
                "{:?}: component {} = 0",
                self.chart,
                format_bipoly(factor, base_var, fiber_var)
            ),
        }
    }
}

impl Serialize for SingularWitness {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("chart", &self.chart)?;
        match &self.locus {
            WitnessLocus::Point { x, y } => {
                map.serialize_entry("kind", "point")?;
                map.serialize_entry("x", &format!("[{}:{}]", x[0], x[1]))?;
                map.serialize_entry("y", &format!("[{}:{}]", y[0], y[1]))?;
            }
            WitnessLocus::Triangular {
                base_var,
                base,
                fiber_var,
                fiber,
            } => {
                map.serialize_entry("kind", "triangular")?;
                map.serialize_entry("base", &base.display_in(base_var))?;
                map.serialize_entry("fiber", &format_bipoly(fiber, base_var, fiber_var))?;
            }
            WitnessLocus::Component {
                base_var,
                fiber_var,
                factor,
            } => {
                map.serialize_entry("kind", "component")?;
                map.serialize_entry("factor", &format_bipoly(factor, base_var, fiber_var))?;
            }
        }
        map.end()
    }
}

impl Serialize for SmoothVerdict {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        match self {
            SmoothVerdict::Smooth => map.serialize_entry("verdict", "smooth")?,
            SmoothVerdict::Unchecked => map.serialize_entry("verdict", "unchecked")?,
            SmoothVerdict::Singular(w) => {
                map.serialize_entry("verdict", "singular")?;
                map.serialize_entry("witnesses", w)?;
            }
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn parse(s: &str, f: FieldSpec) -> BiForm {
        BiForm::parse(s, f).unwrap()
    }

    #[test]
    fn fermat_type_curve_has_two_singular_points() {
        let h = parse("x0^3*y0^3 + x1^3*y1^3", Q);
        let SmoothVerdict::Singular(w) = singular_locus(&h).unwrap() else {
            panic!("expected singular");
        };
        let pts: Vec<String> = w.iter().map(ToString::to_string).collect();
        assert_eq!(pts, vec!["([1:0],[0:1])", "([0:1],[1:0])"]);
        assert!(w.iter().all(|w| w.verify(&h)));
    }

    #[test]
    fn reduction_agrees_with_exact_path() {
        use crate::families::{sample_random_curve, SamplerConfig};
        for seed in 0..8 {
            let h = sample_random_curve(&SamplerConfig::new(3, Q, seed));
            assert_eq!(singular_locus(&h).unwrap(), chart_analysis(&h).unwrap());
        }
        let z5 = FieldSpec::Cyclotomic(5);
        let h = parse(
            "x0^2*y0^2 + z5*x1^2*y1^2 + (z5^2-3)*x0*x1*y0*y1 + x0*x1*y1^2",
            z5,
        );
        assert_eq!(singular_locus(&h).unwrap(), chart_analysis(&h).unwrap());
        // singular over ℚ, so every good reduction is singular too
        let h = parse("x0^3*y0^3 + x1^3*y1^3", Q);
        assert!(!smooth_by_reduction(&h).unwrap());
    }

    #[test]
    fn reduction_primes_carry_roots_of_unity() {
        for m in [3u32, 5, 12] {
            for (p, r) in reduction_primes(FieldSpec::Cyclotomic(m)) {
                assert_eq!(p % m as u64, 1);
                assert_eq!(pow_mod(r, m as u64, p), 1);
                assert!((1..m as u64).all(|e| pow_mod(r, e, p) != 1));
            }
        }
    }

    #[test]
    fn diagonal_conic_is_smooth() {
        let h = parse("x0*y0 - x1*y1", Q);
        assert_eq!(singular_locus(&h).unwrap(), SmoothVerdict::Smooth);
    }

    #[test]
    fn node_at_origin() {
        // (1,1)-form times (1,1)-form: two lines of each ruling meeting
        let h = parse("x0*y0*(x0*y1 - x1*y0 + x1*y1)", Q);
        let h = parse(&h.to_string(), Q);
        let SmoothVerdict::Singular(w) = singular_locus(&h).unwrap() else {
            panic!("expected singular");
        };
        assert!(!w.is_empty());
        assert!(w.iter().all(|w| w.verify(&h)));
    }

    #[test]
    fn repeated_component_is_reported() {
        // (x0 y1 - x1 y0)^2 (x0 y0 + x1 y1)
        let h = parse("(x0*y1 - x1*y0)^2*(x0*y0 + x1*y1)", Q);
        let SmoothVerdict::Singular(w) = singular_locus(&h).unwrap() else {
            panic!("expected singular");
        };
        assert!(w
            .iter()
            .any(|w| matches!(w.locus, WitnessLocus::Component { .. })));
        assert!(w.iter().all(|w| w.verify(&h)));
    }

    #[test]
    fn vertical_double_line() {
        let h = parse("x1^2*(y0 + y1)", Q);
        let SmoothVerdict::Singular(w) = singular_locus(&h).unwrap() else {
            panic!("expected singular");
        };
        assert!(w.iter().all(|w| w.verify(&h)));
    }

    #[test]
    fn conjugate_singular_points_are_triangular() {
        // two (1,1)-curves meeting where x0^2 + x1^2 = 0 over ℚ
        let h = parse("(x0*y0 + x1*y1)*(x0*y1 - x1*y0)", Q);
        let SmoothVerdict::Singular(w) = singular_locus(&h).unwrap() else {
            panic!("expected singular");
        };
        assert!(w
            .iter()
            .any(|w| matches!(w.locus, WitnessLocus::Triangular { .. })));
        assert!(w.iter().all(|w| w.verify(&h)));
    }

    #[test]
    fn zero_form_is_degenerate() {
        assert!(matches!(
            singular_locus(&BiForm::zero(Q, 3, 3)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn genus_by_adjunction() {
        let ctx = CurveContext::new(parse("x0^3*y0^3 + x1^3*y1^3", Q)).unwrap();
        assert_eq!(ctx.genus, 4);
        assert_eq!(ctx.smooth, SmoothVerdict::Unchecked);
        assert!(CurveContext::new(parse("x0^3*y0^2", Q)).is_err());
    }
}
