//! Curve constructors and samplers: random and grid-family curves, the
//! σ-invariant genus-4 family, the secant dimension count and the
//! finite-field torsion survey.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipoly::{BiForm, TorusAuto};
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::smooth::{CurveContext, SmoothVerdict};
use crate::torsion::torsion_order;

pub const DEFAULT_HEIGHT: u64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub k: u32,
    pub field: FieldSpec,
    pub seed: u64,
    pub height: u64,
    pub count: usize,
}

impl SamplerConfig {
    pub fn new(k: u32, field: FieldSpec, seed: u64) -> Self {
        SamplerConfig {
            k,
            field,
            seed,
            height: DEFAULT_HEIGHT,
            count: 1,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec, height: u64) -> Scalar {
    match field {
        FieldSpec::PrimeField(p) if height >= p => field.int(rng.gen_range(0..p) as i64),
        _ => {
            let h = height as i64;
            field.int(rng.gen_range(-h..=h))
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, field: FieldSpec, len: usize, height: u64) -> Vec<Scalar> {
    (0..len)
        .map(|_| random_scalar(rng, field, height))
        .collect()
}

fn random_curve_from(rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> BiForm {
    let n = cfg.k as usize + 1;
    let rows = (0..n)
        .map(|_| random_vector(rng, cfg.field, n, cfg.height))
        .collect();
    BiForm::from_matrix(cfg.field, rows).expect("square coefficient matrix")
}

fn grid_curve_from(rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> BiForm {
    let n = cfg.k as usize + 1;
    let f1 = random_vector(rng, cfg.field, n, cfg.height);
    let g1 = random_vector(rng, cfg.field, n, cfg.height);
    let f2 = random_vector(rng, cfg.field, n, cfg.height);
    let g2 = random_vector(rng, cfg.field, n, cfg.height);
    BiForm::outer(&f1, &g2)
        .checked_add(&BiForm::outer(&g1, &f2))
        .expect("same bidegree")
}

/// A (k,k)-form with independent coefficients of height ≤ cfg.height
/// (uniform over 𝔽ₚ when the height reaches p).
pub fn sample_random_curve(cfg: &SamplerConfig) -> BiForm {
    random_curve_from(&mut cfg.rng(), cfg)
}

/// f₁g₂ + g₁f₂ with random f₁, g₁ ∈ Forms(k,0) and f₂, g₂ ∈ Forms(0,k).
pub fn sample_grid_curve(cfg: &SamplerConfig) -> BiForm {
    grid_curve_from(&mut cfg.rng(), cfg)
}

/// cfg.count random curves from one seeded stream.
pub fn sample_random_curves(cfg: &SamplerConfig) -> Vec<BiForm> {
    let mut rng = cfg.rng();
    (0..cfg.count)
        .map(|_| random_curve_from(&mut rng, cfg))
        .collect()
}

/// cfg.count grid curves from one seeded stream.
pub fn sample_grid_curves(cfg: &SamplerConfig) -> Vec<BiForm> {
    let mut rng = cfg.rng();
    (0..cfg.count)
        .map(|_| grid_curve_from(&mut rng, cfg))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaFamilySpec {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
}

/// The automorphism (x₀,x₁,y₀,y₁) ↦ (ζ₅x₀, x₁, ζ₅³y₀, y₁).
pub fn sigma() -> TorusAuto {
    TorusAuto::new([1, 0, 3, 0], 5)
}

#[derive(Clone, Debug)]
pub struct SigmaFamilyMember {
    pub ctx: CurveContext,
    pub sigma: TorusAuto,
    pub character: u32,
    pub note: String,
}

fn to_z5(s: &Scalar) -> Result<Scalar> {
    let z5 = FieldSpec::Cyclotomic(5);
    match s.field() {
        f if f == z5 => Ok(s.clone()),
        FieldSpec::Rationals => Scalar::from_rational(z5, &s.as_rational().expect("rational")),
        other => Err(Error::FieldMismatch {
            left: other,
            right: z5,
        }),
    }
}

/// x₀x₁²y₁³ + αx₀²x₁y₀³ + βx₀³y₀y₁² + γx₁³y₀²y₁ over ℚ(ζ₅).
pub fn sigma_family_form(spec: &SigmaFamilySpec) -> Result<BiForm> {
    let field = FieldSpec::Cyclotomic(5);
    let mut h = BiForm::zero(field, 3, 3);
    h.set(1, 0, field.one());
    h.set(2, 3, to_z5(&spec.alpha)?);
    h.set(3, 1, to_z5(&spec.beta)?);
    h.set(0, 2, to_z5(&spec.gamma)?);
    Ok(h)
}

/// The family member as a certified curve, with its σ-character.
pub fn sigma_family_g4(spec: &SigmaFamilySpec) -> Result<SigmaFamilyMember> {
    let h = sigma_family_form(spec)?;
    for (var, name) in ["x0", "x1", "y0", "y1"].iter().enumerate() {
        if h.divisible_by_variable(var) {
            return Err(Error::Reducible(format!("{name} divides {h}")));
        }
    }
    let sigma = sigma();
    let (_, character) = h.apply_auto(&sigma)?;
    let character = character.ok_or_else(|| {
        Error::InternalConsistency("family member is not a sigma-eigenform".into())
    })?;
    Ok(SigmaFamilyMember {
        ctx: CurveContext::certified(h)?,
        sigma,
        character,
        note: "sigma-eigenform of order 5: when C/<sigma> has genus 0 the order of eta_C divides 5"
            .into(),
    })
}

/// Rank of the differential of (u,v,w,z) ↦ uvᵀ + wzᵀ at a random rational
/// point, u,v,w,z ∈ ℚ^{k+1}.
pub fn secant_jacobian_rank(k: u32, seed: u64) -> Result<usize> {
    if k < 2 {
        return Err(Error::RangeError(format!(
            "secant rank needs k >= 2, got {k}"
        )));
    }
    let field = FieldSpec::Rationals;
    let n = k as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [u, v, w, z] = [(); 4].map(|_| random_vector(&mut rng, field, n, 1000));
    let mut columns = Vec::with_capacity(4 * n);
    // ∂/∂u_i = e_i vᵀ, ∂/∂v_j = u e_jᵀ, and the same for (w, z)
    for (left, right) in [(&u, &v), (&w, &z)] {
        for i in 0..n {
            let mut col = vec![field.zero(); n * n];
            for j in 0..n {
                col[i * n + j] = right[j].clone();
            }
            columns.push(col);
        }
        for j in 0..n {
            let mut col = vec![field.zero(); n * n];
            for i in 0..n {
                col[i * n + j] = left[i].clone();
            }
            columns.push(col);
        }
    }
    Ok(Matrix::from_columns(field, n * n, &columns).rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurveySampler {
    Random,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyHistogram {
    pub p: u64,
    pub k: u32,
    pub n_max: u32,
    pub trials: usize,
    pub sampler: SurveySampler,
    /// torsion order → number of smooth samples with that order
    pub counts: BTreeMap<u32, usize>,
    pub singular: usize,
    pub not_found: usize,
}

impl SurveyHistogram {
    pub fn total(&self) -> usize {
        self.counts.values().sum::<usize>() + self.singular + self.not_found
    }

    pub fn mass_below(&self, n: u32) -> usize {
        self.counts.range(..n).map(|(_, c)| c).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,count\n");
        for (order, c) in &self.counts {
            out.push_str(&format!("{order},{c}\n"));
        }
        out.push_str(&format!("singular,{}\n", self.singular));
        out.push_str(&format!("not_found,{}\n", self.not_found));
        out
    }
}

enum Outcome {
    Singular,
    Order(u32),
    NotFound,
}

/// Torsion orders of random smooth (k,k) curves over 𝔽ₚ.
pub fn survey_fp(k: u32, p: u64, n_max: u32, trials: usize, seed: u64) -> Result<SurveyHistogram> {
    survey_fp_with(SurveySampler::Random, k, p, n_max, trials, seed)
}

pub fn survey_fp_with(
    sampler: SurveySampler,
    k: u32,
    p: u64,
    n_max: u32,
    trials: usize,
    seed: u64,
) -> Result<SurveyHistogram> {
    if !is_prime(p) || p <= 2 * k as u64 {
        return Err(Error::InvalidPrime(p));
    }
    if k < 1 || n_max < k {
        return Err(Error::RangeError(format!(
            "survey needs 1 <= k <= n_max, got k = {k}, n_max = {n_max}"
        )));
    }
    let field = FieldSpec::PrimeField(p);
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let cfg = SamplerConfig {
                k,
                field,
                seed: seed.wrapping_add(i as u64),
                height: p,
                count: 1,
            };
            let h = match sampler {
                SurveySampler::Random => sample_random_curve(&cfg),
                SurveySampler::Grid => sample_grid_curve(&cfg),
            };
            if h.is_zero() {
                return Ok(Outcome::Singular);
            }
            let ctx = CurveContext::certified(h)?;
            if ctx.smooth != SmoothVerdict::Smooth {
                return Ok(Outcome::Singular);
            }
            Ok(match torsion_order(&ctx, n_max)?.order {
                Some(n) => Outcome::Order(n),
                None => Outcome::NotFound,
            })
        })
        .collect::<Result<_>>()?;
    let mut hist = SurveyHistogram {
        p,
        k,
        n_max,
        trials,
        sampler,
        counts: BTreeMap::new(),
        singular: 0,
        not_found: 0,
    };
    for o in outcomes {
        match o {
            Outcome::Singular => hist.singular += 1,
            Outcome::NotFound => hist.not_found += 1,
            Outcome::Order(n) => *hist.counts.entry(n).or_default() += 1,
        }
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::grid_rank;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn samplers_are_deterministic() {
        let cfg = SamplerConfig::new(3, Q, 42);
        assert_eq!(sample_grid_curve(&cfg), sample_grid_curve(&cfg));
        assert_eq!(sample_random_curve(&cfg), sample_random_curve(&cfg));
        let other = SamplerConfig::new(3, Q, 43);
        assert_ne!(sample_random_curve(&cfg), sample_random_curve(&other));
    }

    #[test]
    fn grid_samples_have_rank_at_most_two() {
        let cfg = SamplerConfig {
            count: 20,
            ..SamplerConfig::new(3, Q, 7)
        };
        for h in sample_grid_curves(&cfg) {
            assert!(grid_rank(&h).unwrap().rank <= 2);
        }
    }

    #[test]
    fn sigma_family_character_and_reducibility() {
        let z5 = FieldSpec::Cyclotomic(5);
        let spec = SigmaFamilySpec {
            alpha: z5.int(-1),
            beta: z5.int(1),
            gamma: z5.int(1),
        };
        let member = sigma_family_g4(&spec).unwrap();
        assert_eq!(member.character, 1);
        assert_eq!(member.ctx.genus, 4);
        let bad = SigmaFamilySpec {
            alpha: z5.zero(),
            ..spec
        };
        assert!(matches!(sigma_family_g4(&bad), Err(Error::Reducible(_))));
    }

    #[test]
    fn secant_ranks() {
        assert_eq!(secant_jacobian_rank(2, 1).unwrap(), 8);
        assert_eq!(secant_jacobian_rank(3, 1).unwrap(), 12);
        assert_eq!(secant_jacobian_rank(4, 1).unwrap(), 16);
        assert!(secant_jacobian_rank(1, 1).is_err());
    }

    #[test]
    fn survey_validation() {
        assert!(matches!(
            survey_fp(3, 5, 10, 1, 0),
            Err(Error::InvalidPrime(5))
        ));
        assert!(matches!(
            survey_fp(3, 9, 10, 1, 0),
            Err(Error::InvalidPrime(9))
        ));
        let empty = survey_fp(3, 7, 10, 0, 0).unwrap();
        assert_eq!(empty.total(), 0);
    }

    #[test]
    fn small_grid_survey() {
        let hist = survey_fp_with(SurveySampler::Grid, 3, 11, 6, 6, 3).unwrap();
        assert_eq!(hist.total(), 6);
        assert!(hist.counts.keys().all(|&n| n == 3));
        assert_eq!(hist.not_found, 0);
    }
}
