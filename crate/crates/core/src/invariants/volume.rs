//! Lobachevsky function and volumes of regular truncated tetrahedra.

use std::f64::consts::{LN_2, PI};

use super::quadrature::{adaptive_simpson, GaussLegendre};
use super::InvariantError;

/// Lobachevsky function `L(w) = -int_0^w log|2 sin u| du`, via the Clausen
/// expansion `L(w) = Cl_2(2w) / 2` with
/// `Cl_2(t) = t - t log|t| + sum_k zeta(2k) t (t / 2 pi)^(2k) / (k (2k + 1))`
/// on `|t| <= pi`.
pub fn lobachevsky(omega: f64) -> f64 {
    let w = reduce(omega);
    if w == 0.0 {
        return 0.0;
    }
    let t = 2.0 * w;
    let x = (t / (2.0 * PI)).powi(2);
    let mut sum = t - t * t.abs().ln();
    let mut pow = x;
    for k in 1..200 {
        let term = zeta_even(k) * t * pow / (k as f64 * (2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
        pow *= x;
    }
    0.5 * sum
}

/// The same function by quadrature of the defining integral, with the
/// logarithmic singularity at 0 removed analytically:
/// `log(2 sin u) = log 2 + log u + log(sin u / u)`.
pub fn lobachevsky_quadrature(omega: f64) -> f64 {
    let w = reduce(omega);
    if w == 0.0 {
        return 0.0;
    }
    let (sign, w) = if w < 0.0 { (-1.0, -w) } else { (1.0, w) };
    let smooth = adaptive_simpson(sinc_log, 0.0, w, 1e-15);
    sign * -(w * LN_2 + w * w.ln() - w + smooth)
}

fn sinc_log(u: f64) -> f64 {
    if u < 1e-4 {
        // log(sin u / u) = -u^2/6 - u^4/180 - ...
        let u2 = u * u;
        -u2 / 6.0 - u2 * u2 / 180.0
    } else {
        (u.sin() / u).ln()
    }
}

/// `L` has period `pi`; maps `omega` into `(-pi/2, pi/2]`.
fn reduce(omega: f64) -> f64 {
    let mut w = omega.rem_euclid(PI);
    if w > 0.5 * PI {
        w -= PI;
    }
    w
}

/// `zeta(2k)` for `k >= 1`: a direct sum with an Euler–Maclaurin tail.
fn zeta_even(k: u32) -> f64 {
    if k == 1 {
        return PI * PI / 6.0;
    }
    let s = 2.0 * k as f64;
    let n = 20.0f64;
    let mut sum: f64 = (1..20).rev().map(|j| (j as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    sum += s * n.powf(-s - 1.0) / 12.0;
    sum -= s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    let rising5 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0);
    sum += rising5 * n.powf(-s - 5.0) / 30240.0;
    sum -= rising5 * (s + 5.0) * (s + 6.0) * n.powf(-s - 7.0) / 1_209_600.0;
    sum
}

/// `8 L(pi/4)`, the volume of the regular ideal octahedron.
pub fn octahedron_volume() -> f64 {
    8.0 * lobachevsky(PI / 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QuadratureBackend {
    #[default]
    AdaptiveSimpson,
    GaussLegendre,
}

/// `arccosh(cos t / (2 cos t - 1))`, written as `log1p(x + sqrt(x (x + 2)))`
/// with `x = 2 sin^2(t/2) / (2 cos t - 1)` to keep precision near `t = 0`.
fn internal_angle_integrand(t: f64) -> f64 {
    let s = (0.5 * t).sin();
    let x = 2.0 * s * s / (2.0 * t.cos() - 1.0);
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// Volume of the regular truncated tetrahedron with internal dihedral angle
/// `theta`: `8 L(pi/4) - 3 int_0^theta arccosh(cos t / (2 cos t - 1)) dt`.
pub fn truncated_tetrahedron_volume(theta: f64) -> Result<f64, InvariantError> {
    truncated_tetrahedron_volume_with(theta, QuadratureBackend::default())
}

pub fn truncated_tetrahedron_volume_with(theta: f64, backend: QuadratureBackend) -> Result<f64, InvariantError> {
    if !(theta > 0.0 && theta < PI / 3.0) {
        return Err(InvariantError::AngleOutOfRange(theta));
    }
    let integral = match backend {
        QuadratureBackend::AdaptiveSimpson => adaptive_simpson(internal_angle_integrand, 0.0, theta, 1e-14),
        QuadratureBackend::GaussLegendre => {
            // Graded panels towards the log singularity at pi/3.
            let rule = GaussLegendre::new(24);
            let mut total = 0.0;
            let mut hi = theta.min(PI / 6.0);
            total += rule.integrate(internal_angle_integrand, 0.0, hi, 8);
            while hi < theta {
                let lo = hi;
                hi = (lo + 0.5 * (PI / 3.0 - lo)).min(theta);
                total += rule.integrate(internal_angle_integrand, lo, hi, 2);
            }
            total
        }
    };
    Ok(octahedron_volume() - 3.0 * integral)
}

/// `n` times the volume of the regular truncated tetrahedron of angle `pi/(3n)`.
pub fn manifold_volume(n: u32) -> Result<f64, InvariantError> {
    manifold_volume_with(n, QuadratureBackend::default())
}

pub fn manifold_volume_with(n: u32, backend: QuadratureBackend) -> Result<f64, InvariantError> {
    if n < 2 {
        return Err(InvariantError::TooFewTetrahedra(n));
    }
    Ok(n as f64 * truncated_tetrahedron_volume_with(PI / (3.0 * n as f64), backend)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lobachevsky_special_values() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert_eq!(lobachevsky_quadrature(0.0), 0.0);
        // 8 L(pi/4) = 4 G with G Catalan's constant.
        assert!((octahedron_volume() - 3.663_862_376_708_876).abs() < 1e-14);
        assert!((lobachevsky(PI / 3.0) - 0.338_313_868_803_217_9).abs() < 1e-14);
        assert!((lobachevsky(PI / 6.0) - 1.5 * lobachevsky(PI / 3.0)).abs() < 1e-14);
        assert!(lobachevsky(PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_even(2) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta_even(3) - PI.powi(6) / 945.0).abs() < 1e-15);
    }

    #[test]
    fn routes_agree_on_a_grid() {
        for i in 0..=1000 {
            let w = -PI + 2.0 * PI * i as f64 / 1000.0;
            let a = lobachevsky(w);
            let b = lobachevsky_quadrature(w);
            assert!((a - b).abs() < 1e-12, "w={w}: {a} vs {b}");
            assert!((lobachevsky(-w) + a).abs() < 1e-15);
        }
    }

    #[test]
    fn volume_domain() {
        assert!(truncated_tetrahedron_volume(0.0).is_err());
        assert!(truncated_tetrahedron_volume(PI / 3.0).is_err());
        assert!(manifold_volume(1).is_err());
        let small = truncated_tetrahedron_volume(1e-6).unwrap();
        assert!((small - octahedron_volume()).abs() < 1e-10);
    }

    #[test]
    fn backends_agree_at_pi_over_six() {
        let a = truncated_tetrahedron_volume_with(PI / 6.0, QuadratureBackend::AdaptiveSimpson).unwrap();
        let b = truncated_tetrahedron_volume_with(PI / 6.0, QuadratureBackend::GaussLegendre).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn backends_agree_near_the_upper_end() {
        let a = truncated_tetrahedron_volume_with(1.0, QuadratureBackend::AdaptiveSimpson).unwrap();
        let b = truncated_tetrahedron_volume_with(1.0, QuadratureBackend::GaussLegendre).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}
