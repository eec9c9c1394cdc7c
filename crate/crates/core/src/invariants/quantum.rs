//! Quantum integers, the symmetric quantum 6j-symbol and the Turaev–Viro sum
//! for manifolds with a one-edged triangulation.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::InvariantError;

const REAL_TOL: f64 = 1e-10;

/// A level `r >= 3` and a `q0` with `q0^2` a primitive `r`-th root of unity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantumContext {
    r: u32,
    q0: Complex64,
}

impl QuantumContext {
    /// `q0 = exp(i pi / r)`.
    pub fn new(r: u32) -> Result<Self, InvariantError> {
        Self::with_q0(r, Complex64::from_polar(1.0, PI / r as f64))
    }

    /// `q0 = exp(i k pi / r)`; needs `gcd(k, r) = 1`.
    pub fn with_multiple(r: u32, k: u32) -> Result<Self, InvariantError> {
        Self::with_q0(r, Complex64::from_polar(1.0, k as f64 * PI / r as f64))
    }

    pub fn with_q0(r: u32, q0: Complex64) -> Result<Self, InvariantError> {
        if r < 3 {
            return Err(InvariantError::LevelTooSmall(r));
        }
        let q2 = q0 * q0;
        let tol = 1e-9;
        if (q0.norm() - 1.0).abs() > tol || (q2.powu(r) - 1.0).norm() > tol {
            return Err(InvariantError::NotPrimitiveRoot { r });
        }
        if (1..r).any(|k| (q2.powu(k) - 1.0).norm() <= tol) {
            return Err(InvariantError::NotPrimitiveRoot { r });
        }
        Ok(QuantumContext { r, q0 })
    }

    pub fn level(&self) -> u32 {
        self.r
    }

    pub fn q0(&self) -> Complex64 {
        self.q0
    }

    fn qint(&self, k: i64) -> Complex64 {
        let q = self.q0;
        let qk = q.powi(k as i32);
        (qk - qk.inv()) / (q - q.inv())
    }

    fn qfact(&self, k: i64) -> Complex64 {
        (1..=k).map(|j| self.qint(j)).product()
    }

    /// Largest admissible colour: `3h <= r - 2`.
    pub fn max_color(&self) -> u32 {
        (self.r - 2) / 3
    }

    fn six_j_complex(&self, h: u32) -> Result<Complex64, InvariantError> {
        if 3 * h + 2 > self.r {
            return Err(InvariantError::Inadmissible { h, r: self.r });
        }
        let h = h as i64;
        // Delta^4 needs no square root, so no branch choice is involved.
        let ratio = self.qfact(h).powu(3) / self.qfact(3 * h + 1);
        let delta4 = ratio * ratio;
        // Four triangles of colour sum 3h, three quadrilaterals of sum 4h.
        let top = (4 * h).min(self.r as i64 - 2);
        let mut sum = Complex64::new(0.0, 0.0);
        for z in 3 * h..=top {
            let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * self.qfact(z + 1) / (self.qfact(z - 3 * h).powu(4) * self.qfact(4 * h - z).powu(3));
        }
        Ok(delta4 * sum)
    }
}

fn real(z: Complex64, tol: f64, what: &'static str) -> Result<f64, InvariantError> {
    if z.im.abs() > tol {
        return Err(InvariantError::NotReal { what, imaginary: z.im });
    }
    Ok(z.re)
}

/// `[k] = (q0^k - q0^-k) / (q0 - q0^-1)`.
pub fn quantum_integer(k: i64, ctx: &QuantumContext) -> Result<f64, InvariantError> {
    real(ctx.qint(k), 1e-12, "quantum integer")
}

/// `[k]! = [1][2]...[k]`.
pub fn quantum_factorial(k: i64, ctx: &QuantumContext) -> Result<f64, InvariantError> {
    real(ctx.qfact(k), 1e-12, "quantum factorial")
}

/// The quantum 6j-symbol with all six entries equal to `h`:
/// `Delta^4 * sum_z (-1)^z [z+1]! / ([z-3h]!^4 [4h-z]!^3)` for
/// `3h <= z <= min(4h, r-2)`, where `Delta^2 = [h]!^3 / [3h+1]!`.
pub fn quantum_6j_sym(h: u32, ctx: &QuantumContext) -> Result<f64, InvariantError> {
    real(ctx.six_j_complex(h)?, REAL_TOL, "6j-symbol")
}

/// `TV_r = sum_h {h h h; h h h}^n [2h+1]^(1-n)` over admissible `h`.
pub fn turaev_viro(n: u32, ctx: &QuantumContext) -> Result<f64, InvariantError> {
    if n < 2 {
        return Err(InvariantError::TooFewTetrahedra(n));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for h in 0..=ctx.max_color() {
        let six_j = ctx.six_j_complex(h)?;
        let dim = ctx.qint(2 * h as i64 + 1);
        total += six_j.powu(n) * dim.powi(1 - n as i32);
    }
    real(total, 1e-9, "Turaev-Viro sum")
}
