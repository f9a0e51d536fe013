//! Intersection numbers on the second symmetric product C⁽²⁾ of a curve
//! carrying a g¹ₖ, in the classes Γ, K, Δ.

use serde::Serialize;

use crate::error::{Error, Result};

const MAX_K: i64 = 1_000_000;

/// A divisor class aΔ + bK, stored as the primitive pair (a, b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneClass {
    pub delta: i64,
    pub canonical: i64,
}

impl PlaneClass {
    pub fn primitive(delta: i64, canonical: i64) -> Self {
        let g = num_integer::gcd(delta, canonical).max(1);
        PlaneClass {
            delta: delta / g,
            canonical: canonical / g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymProdChecks {
    pub presentations_agree: bool,
    pub kernel_annihilated: bool,
    pub matrix_rank: usize,
    pub ray_one_orthogonal_to_delta: bool,
    pub ray_two_square_zero: bool,
    pub ray_one_square_positive: bool,
    pub genus_formulas_agree: bool,
}

impl SymProdChecks {
    pub fn all_hold(&self) -> bool {
        self.presentations_agree
            && self.kernel_annihilated
            && self.matrix_rank == 2
            && self.ray_one_orthogonal_to_delta
            && self.ray_two_square_zero
            && self.ray_one_square_positive
            && self.genus_formulas_agree
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymProdTable {
    pub k: i64,
    pub g: i64,
    pub k_squared: i128,
    pub k_dot_delta: i128,
    pub delta_squared: i128,
    /// Intersection matrix of (Γ, K, Δ).
    pub gamma_matrix: [[i128; 3]; 3],
    pub genus_gamma: i128,
    pub kernel_vector: [i128; 3],
    pub rays: [PlaneClass; 2],
    pub checks: SymProdChecks,
}

/// The pairing on ⟨Δ, K⟩ with the given K², K·Δ, Δ².
fn pair(k2: i128, kd: i128, d2: i128, x: (i128, i128), y: (i128, i128)) -> i128 {
    // x = (Δ-coefficient, K-coefficient)
    x.0 * y.0 * d2 + (x.0 * y.1 + x.1 * y.0) * kd + x.1 * y.1 * k2
}

fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn rank3(m: &[[i128; 3]; 3]) -> usize {
    if det3(m) != 0 {
        return 3;
    }
    let minor = |r: [usize; 2], c: [usize; 2]| {
        m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
    };
    let pairs = [[0, 1], [0, 2], [1, 2]];
    if pairs
        .iter()
        .any(|&r| pairs.iter().any(|&c| minor(r, c) != 0))
    {
        return 2;
    }
    if m.iter().flatten().any(|&v| v != 0) {
        1
    } else {
        0
    }
}

pub fn intersection_table(k: i64) -> Result<SymProdTable> {
    if k < 3 {
        return Err(Error::RangeError(format!(
            "intersection table needs k >= 3, got {k}"
        )));
    }
    if k > MAX_K {
        return Err(Error::RangeError(format!("k = {k} exceeds {MAX_K}")));
    }
    let g = (k - 1) * (k - 1);
    let (kk, gg) = (k as i128, g as i128);
    let k_squared = (gg - 1) * (4 * gg - 9);
    let k_dot_delta = 6 * (gg - 1);
    let delta_squared = -4 * (gg - 1);

    let gk = (2 * kk - 5) * (kk - 1) * kk;
    let gd = 2 * (kk - 1) * kk;
    let m = [
        [0, gk, gd],
        [
            gk,
            (2 * kk - 5) * (kk - 2) * kk * (2 * kk + 1),
            6 * (kk - 2) * kk,
        ],
        [gd, 6 * (kk - 2) * kk, -4 * (kk - 2) * kk],
    ];
    let kernel_vector = [4 * kk - 8, -2, 2 * kk - 5];
    let kernel_annihilated = m.iter().all(|row| {
        row.iter()
            .zip(&kernel_vector)
            .map(|(a, b)| a * b)
            .sum::<i128>()
            == 0
    });
    let presentations_agree =
        m[1][1] == k_squared && m[1][2] == k_dot_delta && m[2][2] == delta_squared;

    let two_g_gamma_minus_two = -kk * (kk - 1) + 2 * (kk - 2) * (kk - 1) * kk;
    let genus_formulas_agree = two_g_gamma_minus_two == m[0][0] + m[0][1];
    let genus_gamma = two_g_gamma_minus_two / 2 + 1;

    let ray_one = (3, 2);
    let ray_two = (5 - 2 * kk, 2);
    let p = |x, y| pair(k_squared, k_dot_delta, delta_squared, x, y);
    let checks = SymProdChecks {
        presentations_agree,
        kernel_annihilated,
        matrix_rank: rank3(&m),
        ray_one_orthogonal_to_delta: p(ray_one, (1, 0)) == 0,
        ray_two_square_zero: p(ray_two, ray_two) == 0,
        ray_one_square_positive: p(ray_one, ray_one) > 0,
        genus_formulas_agree,
    };
    Ok(SymProdTable {
        k,
        g,
        k_squared,
        k_dot_delta,
        delta_squared,
        gamma_matrix: m,
        genus_gamma,
        kernel_vector,
        rays: [
            PlaneClass::primitive(3, 2),
            PlaneClass::primitive(5 - 2 * k, 2),
        ],
        checks,
    })
}

impl SymProdTable {
    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let m = &self.gamma_matrix;
        let width = m
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let mut out = format!(
            "k = {}  g = {}\nK^2 = {}  K.D = {}  D^2 = {}\ng(Gamma) = {}\n",
            self.k, self.g, self.k_squared, self.k_dot_delta, self.delta_squared, self.genus_gamma
        );
        out.push_str("        Gamma  K  D\n");
        for (name, row) in ["Gamma", "K", "D"].iter().zip(m) {
            out.push_str(&format!("{name:>6} "));
            for v in row {
                out.push_str(&format!(" {v:>width$}"));
            }
            out.push('\n');
        }
        let [a, b, c] = self.kernel_vector;
        out.push_str(&format!("kernel ({a}, {b}, {c})\n"));
        for r in &self.rays {
            out.push_str(&format!("ray {}K {:+}D\n", r.canonical, r.delta));
        }
        out.push_str(&format!(
            "checks {}\n",
            if self.checks.all_hold() {
                "ok"
            } else {
                "FAILED"
            }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3() {
        let t = intersection_table(3).unwrap();
        assert_eq!(
            (t.g, t.k_squared, t.k_dot_delta, t.delta_squared),
            (4, 21, 18, -12)
        );
        assert_eq!(t.genus_gamma, 4);
        assert_eq!(t.kernel_vector, [4, -2, 1]);
        assert_eq!(2 * t.k_dot_delta + 3 * t.delta_squared, 0);
        assert!(t.checks.all_hold());
        assert_eq!(
            t.rays[1],
            PlaneClass {
                delta: -1,
                canonical: 2
            }
        );
    }

    #[test]
    fn k4() {
        let t = intersection_table(4).unwrap();
        assert_eq!(
            (t.g, t.k_squared, t.k_dot_delta, t.delta_squared),
            (9, 216, 48, -32)
        );
        assert_eq!(t.kernel_vector, [8, -2, 3]);
    }

    #[test]
    fn small_k_rejected() {
        assert!(matches!(intersection_table(2), Err(Error::RangeError(_))));
    }

    #[test]
    fn identities_hold_up_to_50() {
        for k in 3..=50 {
            let t = intersection_table(k).unwrap();
            assert!(t.checks.all_hold(), "k = {k}");
            // (4k-8)·(Γ·X) = (2K + (5-2k)Δ)·X for X in Γ, K, Δ
            let m = &t.gamma_matrix;
            let kk = k as i128;
            for col in 0..3 {
                let lhs = (4 * kk - 8) * m[0][col];
                let rhs = 2 * m[1][col] + (5 - 2 * kk) * m[2][col];
                assert_eq!(lhs, rhs);
            }
        }
    }
}
