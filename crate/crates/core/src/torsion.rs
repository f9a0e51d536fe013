//! Grid membership, torsion of η_C = D₁ − D₂, and the grilled-type test.

use serde::Serialize;

use crate::bipoly::BiForm;
use crate::cech::{connecting_kernel_dim, h0_dim, kernel_sections, QuotientSpace};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::smooth::CurveContext;

/// h = f₁(x)·g₂(y) + g₁(x)·f₂(y), as coefficient vectors indexed by the
/// x₀- resp. y₀-exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridFactorization {
    pub f1: Vec<Scalar>,
    pub g1: Vec<Scalar>,
    pub f2: Vec<Scalar>,
    pub g2: Vec<Scalar>,
}

impl GridFactorization {
    pub fn f1_form(&self) -> BiForm {
        x_form(&self.f1)
    }
    pub fn g1_form(&self) -> BiForm {
        x_form(&self.g1)
    }
    pub fn f2_form(&self) -> BiForm {
        y_form(&self.f2)
    }
    pub fn g2_form(&self) -> BiForm {
        y_form(&self.g2)
    }

    pub fn reassemble(&self) -> BiForm {
        let a = BiForm::outer(&self.f1, &self.g2);
        let b = BiForm::outer(&self.g1, &self.f2);
        a.checked_add(&b).expect("same bidegree")
    }
}

fn x_form(c: &[Scalar]) -> BiForm {
    BiForm::outer(c, &[c[0].field().one()])
}

fn y_form(c: &[Scalar]) -> BiForm {
    BiForm::outer(&[c[0].field().one()], c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub rank: usize,
    pub is_grid: bool,
    pub factorization: Option<GridFactorization>,
}

/// Rank of the coefficient matrix M of h, with a factorization
/// M = f₁g₂ᵀ + g₁f₂ᵀ read off the first two pivot columns when rank ≤ 2.
pub fn grid_rank(h: &BiForm) -> Result<GridReport> {
    let m = h.coeff_matrix();
    let field = h.field();
    let rref = m.rref();
    let rank = rref.pivots.len();
    if rank > 2 {
        return Ok(GridReport {
            rank,
            is_grid: false,
            factorization: None,
        });
    }
    let zero_x = vec![field.zero(); m.nrows()];
    let zero_y = vec![field.zero(); m.ncols()];
    let col = |idx: usize| {
        rref.pivots
            .get(idx)
            .map_or_else(|| zero_x.clone(), |&c| m.column(c))
    };
    let row = |idx: usize| {
        rref.rows
            .get(idx)
            .cloned()
            .unwrap_or_else(|| zero_y.clone())
    };
    let fact = GridFactorization {
        f1: col(0),
        g2: row(0),
        g1: col(1),
        f2: row(1),
    };
    if fact.reassemble() != *h {
        return Err(Error::InternalConsistency(
            "rank factorization does not reassemble the form".into(),
        ));
    }
    Ok(GridReport {
        rank,
        is_grid: true,
        factorization: Some(fact),
    })
}

/// Whether n·η_C = 0, with the kernel dimension of
/// H¹(n−k,−n−k) → H¹(n,−n) (which is h⁰(C,O_C(n,−n))).
pub fn is_n_torsion(ctx: &CurveContext, n: u32) -> Result<(bool, usize)> {
    ctx.require_smooth()?;
    if n < ctx.k {
        return Ok((false, 0));
    }
    let dim = connecting_kernel_dim(&ctx.h, n as i64, -(n as i64));
    if dim > 1 {
        return Err(Error::InternalConsistency(format!(
            "h0(O_C({n},-{n})) = {dim} > 1 on a smooth curve"
        )));
    }
    Ok((dim == 1, dim))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub k: u32,
    /// (n, kernel dimension) for each scanned n.
    pub tested: Vec<(u32, usize)>,
    pub order: Option<u32>,
    pub lower_bound_certificate: String,
}

/// Least n in k..=n_max with n·η_C = 0.
pub fn torsion_order(ctx: &CurveContext, n_max: u32) -> Result<TorsionReport> {
    ctx.require_smooth()?;
    let k = ctx.k;
    if n_max < k {
        return Err(Error::RangeError(format!(
            "n_max = {n_max} is below k = {k}"
        )));
    }
    let mut tested = Vec::new();
    let mut order = None;
    for n in k..=n_max {
        let (hit, dim) = is_n_torsion(ctx, n)?;
        tested.push((n, dim));
        if hit {
            order = Some(n);
            break;
        }
    }
    Ok(TorsionReport {
        k,
        tested,
        order,
        lower_bound_certificate: format!(
            "n < {k}: H^1(n-{k},-n-{k}) = 0 and h^0(Q,O(n,-n)) = 0, so h^0(O_C(n,-n)) = 0"
        ),
    })
}

/// A pair (f, c) with s·c ≡ f on C: f is an (n,0)-form, c a (0,n)-form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrilledCertificate {
    pub f: BiForm,
    pub c: BiForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrilledReport {
    pub n: u32,
    pub dim_w1: usize,
    pub dim_w2: usize,
    pub dim_intersection: usize,
    pub is_grilled: bool,
    pub ambient_dim: usize,
    pub clearing_exponent: u32,
    pub certificate: Option<GrilledCertificate>,
}

/// Compares W₁ = restrictions of (n,0)-forms with W₂ = s·(0,n)-forms inside
/// H⁰(C,O_C(n,0)), where s trivializes O_C(n,−n).
pub fn is_grilled(ctx: &CurveContext, n: u32) -> Result<GrilledReport> {
    ctx.require_smooth()?;
    let (torsion, _) = is_n_torsion(ctx, n)?;
    if !torsion {
        return Err(Error::NoTorsionSection { n, tried: vec![n] });
    }
    let h = &ctx.h;
    let field = h.field();
    let s = kernel_sections(ctx, n)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InternalConsistency("torsion kernel without a section".into()))?;
    let clearing = s.clearing;
    let space = QuotientSpace::new(h, n, clearing);
    let y1n = BiForm::monomial(0, clearing, 0, 0, field.one());

    let xs: Vec<BiForm> = (0..=n)
        .map(|i| BiForm::monomial(n, 0, i, 0, field.one()))
        .collect();
    let ys: Vec<BiForm> = (0..=n)
        .map(|j| BiForm::monomial(0, n, 0, j, field.one()))
        .collect();
    let mut w1 = Vec::new();
    for f in &xs {
        w1.push(space.reduce(&f.mul(&y1n)?)?.coords);
    }
    let mut w2 = Vec::new();
    for c in &ys {
        w2.push(s.times_form(h, c)?.coords);
    }
    let rows = space_rank(field, &w1);
    let dim_w2 = space_rank(field, &w2);
    let stacked: Vec<Vec<Scalar>> = w1.iter().chain(&w2).cloned().collect();
    let total = space_rank(field, &stacked);
    let dim_intersection = rows + dim_w2 - total;

    let certificate = if dim_intersection > 0 {
        let nrows = stacked[0].len();
        let m = Matrix::from_columns(field, nrows, &stacked);
        let v = m
            .kernel()
            .into_iter()
            .find(|v| v[..xs.len()].iter().any(|c| !c.is_zero()))
            .ok_or_else(|| {
                Error::InternalConsistency("intersection without a kernel vector".into())
            })?;
        let mut f = BiForm::zero(field, n, 0);
        let mut c = BiForm::zero(field, 0, n);
        for (i, a) in v[..xs.len()].iter().enumerate() {
            f.set(i as u32, 0, a.clone());
        }
        for (j, b) in v[xs.len()..].iter().enumerate() {
            c.set(0, j as u32, -b);
        }
        Some(GrilledCertificate { f, c })
    } else {
        None
    };

    Ok(GrilledReport {
        n,
        dim_w1: rows,
        dim_w2,
        dim_intersection,
        is_grilled: dim_intersection > 0,
        ambient_dim: h0_dim(ctx, n as i64, 0)?,
        clearing_exponent: clearing,
        certificate,
    })
}

fn space_rank(field: FieldSpec, vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(field, vectors.to_vec()).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FiniteGenerationVerdict {
    FinitelyGenerated { order: u32 },
    OpenUpTo { n_max: u32 },
    NotApplicable { reason: String },
}

/// R(Δ,K) is finitely generated iff η_C is torsion (and nontrivial, which
/// is automatic for k ≥ 3).
pub fn finite_generation_verdict(
    ctx: &CurveContext,
    n_max: u32,
) -> Result<FiniteGenerationVerdict> {
    ctx.require_smooth()?;
    if ctx.k < 3 {
        return Ok(FiniteGenerationVerdict::NotApplicable {
            reason: format!("needs k >= 3, got k = {}", ctx.k),
        });
    }
    let report = torsion_order(ctx, n_max)?;
    Ok(match (report.order, ctx.field()) {
        (Some(order), _) => FiniteGenerationVerdict::FinitelyGenerated { order },
        (None, FieldSpec::PrimeField(p)) => FiniteGenerationVerdict::NotApplicable {
            reason: format!(
                "over F_{p} every degree-0 class is torsion; the order exceeds n_max = {n_max}"
            ),
        },
        (None, _) => FiniteGenerationVerdict::OpenUpTo { n_max },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::SmoothVerdict;

    const Q: FieldSpec = FieldSpec::Rationals;
    const GRID: &str =
        "(x0^3 + x1^3)*(y0^3 - 2*y1^3) + (x0^3 - x0*x1^2 + 3*x1^3)*(y0^3 + y0*y1^2 + y1^3)";
    const GENERIC: &str = "x0^3*y0^3 + 2*x0^3*y1^3 - x0^2*x1*y0*y1^2 + 3*x0*x1^2*y0^2*y1 + x1^3*y0^3 - x1^3*y1^3 + x0*x1^2*y1^3 + 5*x0^2*x1*y0^3 - 7*x1^3*y0*y1^2 + 2*x0*x1^2*y0*y1^2";

    fn curve(s: &str) -> CurveContext {
        let ctx = CurveContext::certified(BiForm::parse(s, Q).unwrap()).unwrap();
        assert_eq!(ctx.smooth, SmoothVerdict::Smooth);
        ctx
    }

    #[test]
    fn fermat_grid_rank() {
        let h = BiForm::parse("x0^3*y0^3 + x1^3*y1^3", Q).unwrap();
        let r = grid_rank(&h).unwrap();
        assert_eq!(r.rank, 2);
        assert!(r.is_grid);
        let f = r.factorization.unwrap();
        assert_eq!(f.reassemble(), h);
        assert_eq!(f.f1_form().to_string(), "x1^3");
    }

    #[test]
    fn single_product_has_rank_one() {
        let h = BiForm::parse("(x0^3 - x1^3)*(y0^2*y1 + y1^3)", Q).unwrap();
        let r = grid_rank(&h).unwrap();
        assert_eq!(r.rank, 1);
        let f = r.factorization.unwrap();
        assert!(f.g1.iter().all(Scalar::is_zero));
        assert_eq!(f.reassemble(), h);
    }

    #[test]
    fn generic_curve_is_not_grid() {
        let r = grid_rank(&BiForm::parse(GENERIC, Q).unwrap()).unwrap();
        assert_eq!(r.rank, 4);
        assert!(!r.is_grid && r.factorization.is_none());
    }

    #[test]
    fn grid_curve_has_order_k_and_is_grilled() {
        let ctx = curve(GRID);
        assert_eq!(is_n_torsion(&ctx, 2).unwrap(), (false, 0));
        assert_eq!(is_n_torsion(&ctx, 3).unwrap(), (true, 1));
        assert_eq!(is_n_torsion(&ctx, 6).unwrap(), (true, 1));
        let report = torsion_order(&ctx, 10).unwrap();
        assert_eq!(report.order, Some(3));
        let g = is_grilled(&ctx, 3).unwrap();
        assert_eq!((g.dim_w1, g.dim_w2, g.ambient_dim), (4, 4, 6));
        assert!(g.is_grilled);
        let cert = g.certificate.unwrap();
        assert!(!cert.f.is_zero() && !cert.c.is_zero());
        assert_eq!(
            finite_generation_verdict(&ctx, 10).unwrap(),
            FiniteGenerationVerdict::FinitelyGenerated { order: 3 }
        );
    }

    #[test]
    fn generic_curve_is_open() {
        let ctx = curve(GENERIC);
        let report = torsion_order(&ctx, 8).unwrap();
        assert_eq!(report.order, None);
        assert_eq!(report.tested.len(), 6);
        assert!(matches!(
            is_grilled(&ctx, 3),
            Err(Error::NoTorsionSection { n: 3, .. })
        ));
        assert_eq!(
            finite_generation_verdict(&ctx, 8).unwrap(),
            FiniteGenerationVerdict::OpenUpTo { n_max: 8 }
        );
    }

    #[test]
    fn singular_curve_is_rejected() {
        let ctx =
            CurveContext::certified(BiForm::parse("x0^3*y0^3 + x1^3*y1^3", Q).unwrap()).unwrap();
        assert!(matches!(is_n_torsion(&ctx, 3), Err(Error::NotSmooth)));
    }
}
