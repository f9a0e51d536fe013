#![allow(dead_code)]

use gridtorsion::families::{sample_grid_curve, sample_random_curve, SamplerConfig};
use gridtorsion::smooth::{BiPoly, Chart, SingularWitness, WitnessLocus};
use gridtorsion::{BiForm, CurveContext, FieldSpec, Scalar, SmoothVerdict};

pub fn word(s: &Scalar) -> u64 {
    match s {
        Scalar::Prime { value, .. } => *value,
        _ => panic!("expected an F_p scalar"),
    }
}

/// 𝔽_{p²} = 𝔽ₚ[t]/(t² − r) for a non-residue r; with `r = 0` only the
/// subfield is used.
#[derive(Clone, Copy)]
pub struct Fq {
    pub p: u64,
    pub r: u64,
}

type E = (u64, u64);

impl Fq {
    pub fn quadratic(p: u64) -> Self {
        let r = (2..p)
            .find(|&r| pow(r, (p - 1) / 2, p) == p - 1)
            .expect("non-residue exists");
        Fq { p, r }
    }

    pub fn prime(p: u64) -> Self {
        Fq { p, r: 0 }
    }

    pub fn elements(&self) -> Vec<E> {
        let p = self.p;
        if self.r == 0 {
            (0..p).map(|a| (a, 0)).collect()
        } else {
            (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect()
        }
    }

    fn add(&self, x: E, y: E) -> E {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    fn mul(&self, x: E, y: E) -> E {
        let p = self.p;
        (
            (x.0 * y.0 + x.1 * y.1 % p * self.r) % p,
            (x.0 * y.1 + x.1 * y.0) % p,
        )
    }

    fn pow(&self, x: E, e: u32) -> E {
        (0..e).fold((1, 0), |acc, _| self.mul(acc, x))
    }
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn eval(f: &BiForm, q: &Fq, x: [E; 2], y: [E; 2]) -> E {
    let (d1, d2) = f.bidegree();
    let mut acc = (0, 0);
    for (i, j, c) in f.terms() {
        let m = [
            q.pow(x[0], i),
            q.pow(x[1], d1 - i),
            q.pow(y[0], j),
            q.pow(y[1], d2 - j),
        ]
        .into_iter()
        .fold((word(c), 0), |a, b| q.mul(a, b));
        acc = q.add(acc, m);
    }
    acc
}

pub fn projective_line(q: &Fq) -> Vec<[E; 2]> {
    let mut pts: Vec<[E; 2]> = q.elements().into_iter().map(|a| [a, (1, 0)]).collect();
    pts.push([(1, 0), (0, 0)]);
    pts
}

/// Every point of P¹×P¹ over the given field where h and all four partials vanish.
pub fn singular_points(h: &BiForm, q: &Fq) -> Vec<([E; 2], [E; 2])> {
    let forms = [h.clone(), h.d_x0(), h.d_x1(), h.d_y0(), h.d_y1()];
    let line = projective_line(q);
    let mut out = Vec::new();
    for x in &line {
        for y in &line {
            if forms.iter().all(|f| eval(f, q, *x, *y) == (0, 0)) {
                out.push((*x, *y));
            }
        }
    }
    out
}

fn chart_of(x: [u64; 2], y: [u64; 2]) -> Chart {
    match (x[1] != 0, y[1] != 0) {
        (true, true) => Chart::X1Y1,
        (false, true) => Chart::X0Y1,
        (true, false) => Chart::X1Y0,
        (false, false) => Chart::X0Y0,
    }
}

fn coordinate(var: &str, x: [u64; 2], y: [u64; 2], field: FieldSpec) -> Scalar {
    let s = |a: u64| field.int(a as i64);
    let ratio = |n: u64, d: u64| s(n).checked_div(&s(d)).unwrap();
    match var {
        "x0" => ratio(x[0], x[1]),
        "x1" => ratio(x[1], x[0]),
        "y0" => ratio(y[0], y[1]),
        _ => ratio(y[1], y[0]),
    }
}

fn eval_bipoly(f: &BiPoly, s: &Scalar, t: &Scalar) -> Scalar {
    let mut acc = s.field().zero();
    for c in f.iter().rev() {
        acc = &(&acc * t) + &c.eval(s);
    }
    acc
}

/// Whether the 𝔽ₚ-point (x, y) lies on the witness locus.
pub fn witness_covers(w: &SingularWitness, x: [u64; 2], y: [u64; 2], field: FieldSpec) -> bool {
    if chart_of(x, y) != w.chart {
        return false;
    }
    match &w.locus {
        WitnessLocus::Point { x: wx, y: wy } => {
            let s = |a: u64| field.int(a as i64);
            &wx[0] * &s(x[1]) == &wx[1] * &s(x[0]) && &wy[0] * &s(y[1]) == &wy[1] * &s(y[0])
        }
        WitnessLocus::Triangular {
            base_var,
            base,
            fiber_var,
            fiber,
        } => {
            let s = coordinate(base_var, x, y, field);
            let t = coordinate(fiber_var, x, y, field);
            base.eval(&s).is_zero() && eval_bipoly(fiber, &s, &t).is_zero()
        }
        WitnessLocus::Component {
            base_var,
            fiber_var,
            factor,
        } => {
            let s = coordinate(base_var, x, y, field);
            let t = coordinate(fiber_var, x, y, field);
            eval_bipoly(factor, &s, &t).is_zero()
        }
    }
}

/// A random (k,k) form over 𝔽ₚ singular at a random 𝔽ₚ-point: vanish to
/// order two at ([0:1],[0:1]), then move that point by a random GL₂×GL₂.
pub fn forced_singular_curve(k: u32, p: u64, seed: u64) -> BiForm {
    let field = FieldSpec::PrimeField(p);
    let cfg = SamplerConfig {
        k,
        field,
        seed,
        height: p,
        count: 1,
    };
    let mut h = sample_random_curve(&cfg);
    h.set(0, 0, field.zero());
    h.set(1, 0, field.zero());
    h.set(0, 1, field.zero());
    let g = sample_random_curve(&SamplerConfig {
        k: 1,
        seed: seed ^ 0x5eed,
        ..cfg
    });
    let c = |i, j| g.coeff(i, j).clone();
    let gx = [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]];
    let gy = [[c(1, 1), c(1, 0)], [c(0, 1), c(0, 0)]];
    h.linear_change(&gx, &gy)
}

/// Smooth (k,k) curves drawn from the given sampler, skipping singular draws.
pub fn smooth_curves(
    k: u32,
    field: FieldSpec,
    grid: bool,
    count: usize,
    seed: u64,
) -> Vec<CurveContext> {
    let mut out = Vec::new();
    let mut s = seed;
    while out.len() < count {
        let cfg = SamplerConfig::new(k, field, s);
        s += 1;
        let h = if grid {
            sample_grid_curve(&cfg)
        } else {
            sample_random_curve(&cfg)
        };
        if h.is_zero() {
            continue;
        }
        let ctx = CurveContext::certified(h).unwrap();
        if ctx.smooth == SmoothVerdict::Smooth {
            out.push(ctx);
        }
        assert!(
            s < seed + 20 * count as u64 + 100,
            "too many singular samples"
        );
    }
    out
}

/// Outcome of comparing the checker against enumeration on one curve.
pub fn agrees_with_enumeration(h: &BiForm) -> Result<(), String> {
    let field = h.field();
    let FieldSpec::PrimeField(p) = field else {
        panic!("enumeration needs a prime field");
    };
    let verdict = gridtorsion::smooth::singular_locus(h).map_err(|e| e.to_string())?;
    let rational: Vec<([u64; 2], [u64; 2])> = singular_points(h, &Fq::prime(p))
        .into_iter()
        .map(|(x, y)| ([x[0].0, x[1].0], [y[0].0, y[1].0]))
        .collect();
    let quadratic = if p <= 13 {
        Some(singular_points(h, &Fq::quadratic(p)).len())
    } else {
        None
    };
    match verdict {
        SmoothVerdict::Smooth => {
            if !rational.is_empty() || quadratic.unwrap_or(0) > 0 {
                return Err(format!("checker says smooth, enumeration found {rational:?} ({quadratic:?} over F_p^2) on {h}"));
            }
        }
        SmoothVerdict::Singular(ws) => {
            if let Some(w) = ws.iter().find(|w| !w.verify(h)) {
                return Err(format!("witness {w} does not verify on {h}"));
            }
            for (x, y) in &rational {
                if !ws.iter().any(|w| witness_covers(w, *x, *y, field)) {
                    return Err(format!("point {x:?},{y:?} not covered by {ws:?} on {h}"));
                }
            }
            for w in &ws {
                if let WitnessLocus::Point { .. } = w.locus {
                    if rational.is_empty() {
                        return Err(format!(
                            "rational witness {w} missing from enumeration on {h}"
                        ));
                    }
                }
            }
        }
        SmoothVerdict::Unchecked => return Err("unchecked verdict".into()),
    }
    Ok(())
}
