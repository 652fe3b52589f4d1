//! Complete elliptic integral of the first kind via the arithmetic-geometric mean.

use std::f64::consts::PI;

use super::WidthError;

const MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of two nonnegative numbers.
pub fn agm(a: f64, b: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    for _ in 0..MAX_ITER {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = m;
    }
    0.5 * (a + b)
}

/// `K(k) = ∫₀^{π/2} dθ / sqrt(1 - k² sin²θ)` for the modulus `k ∈ [0, 1)`.
pub fn elliptic_k(k: f64) -> Result<f64, WidthError> {
    if !(0.0..1.0).contains(&k) {
        return Err(WidthError::Domain(k));
    }
    Ok(elliptic_k_complement(((1.0 - k) * (1.0 + k)).sqrt()))
}

/// `K` evaluated from the complementary modulus `k' = sqrt(1 - k²) ∈ (0, 1]`.
pub fn elliptic_k_complement(kp: f64) -> f64 {
    PI / (2.0 * agm(1.0, kp))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson quadrature of the defining integral.
    fn k_quadrature(k: f64) -> f64 {
        let f = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (a, b) = (0.0, PI / 2.0);
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        simpson(&f, a, b, fa, fm, fb, whole, 1e-14, 50)
    }

    #[test]
    fn k_at_zero() {
        assert!((elliptic_k(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn k_matches_quadrature() {
        let k = 1.0 / 2f64.sqrt();
        let exact = elliptic_k(k).unwrap();
        assert!((exact - k_quadrature(k)).abs() < 1e-10);
        assert!((exact - 1.854_074_677_301_372).abs() < 1e-14);
        for &k in &[0.1, 0.3, 0.6, 0.9, 0.99] {
            let v = elliptic_k(k).unwrap();
            assert!((v - k_quadrature(k)).abs() / v < 1e-10, "k={k}");
        }
    }

    #[test]
    fn k_monotone() {
        let mut prev = 0.0;
        for i in 0..1000 {
            let v = elliptic_k(i as f64 / 1000.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn k_domain() {
        assert_eq!(elliptic_k(1.0), Err(WidthError::Domain(1.0)));
        assert!(elliptic_k(-0.1).is_err());
    }
}
