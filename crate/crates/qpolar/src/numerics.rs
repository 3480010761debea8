//! Shared special functions and guarded elementary operations.

use crate::{Error, Result};

/// Legendre polynomial `P_l(x)` for `x >= 1`, by the Bonnet three-term
/// recurrence. The recurrence is well behaved on this half-line (all terms
/// positive and increasing), and `P_l(1) = 1` comes out exact.
pub fn legendre(l: u32, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!(
            "legendre polynomial evaluated at x = {x}, expected x >= 1"
        )));
    }
    if l == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0; // P_0
    let mut cur = x; // P_1
    for k in 1..l as u64 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Natural log of the binomial coefficient `C(n, k)`.
///
/// Small coefficients (`n <= 120`) are computed exactly as integers first, so
/// the result is accurate to the rounding of a single `ln`. Larger ones fall
/// back to a compensated sum of term logarithms.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!(
            "binomial coefficient C({n}, {k}) is outside the support 0 <= k <= n"
        )));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(0.0);
    }
    if n <= 120 {
        // C(120, 60) * 120 still fits in u128; every intermediate division
        // below is exact because the running product is itself a binomial.
        let mut c: u128 = 1;
        for i in 1..=k as u128 {
            c = c * (n as u128 - k as u128 + i) / i;
        }
        return Ok((c as f64).ln());
    }
    // Kahan-compensated sum of ln((n-k+i)/i); the partial sums reach ln C(n,k)
    // so compensation keeps the absolute error near eps * |result|.
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 1..=k {
        let term = ((n - k + i) as f64 / i as f64).ln();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
pub fn xlnx(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("x ln x evaluated at x = {x} < 0")));
    }
    Ok(if x == 0.0 { 0.0 } else { x * x.ln() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_orders() {
        assert_eq!(legendre(0, 7.3).unwrap(), 1.0);
        assert_eq!(legendre(1, 3.0).unwrap(), 3.0);
        // P_2(x) = (3x^2 - 1)/2
        assert!((legendre(2, 3.0).unwrap() - 13.0).abs() < 1e-12);
        // P_3(x) = (5x^3 - 3x)/2, P_4(x) = (35x^4 - 30x^2 + 3)/8
        for &x in &[1.0f64, 1.5, 2.0, 4.0, 10.0] {
            let p3 = (5.0 * x.powi(3) - 3.0 * x) / 2.0;
            let p4 = (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0;
            let p5 = (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0;
            assert!((legendre(3, x).unwrap() - p3).abs() <= 1e-12 * p3.abs());
            assert!((legendre(4, x).unwrap() - p4).abs() <= 1e-12 * p4.abs());
            assert!((legendre(5, x).unwrap() - p5).abs() <= 1e-12 * p5.abs());
        }
    }

    #[test]
    fn legendre_at_one_is_exact() {
        for l in 0..200 {
            assert_eq!(legendre(l, 1.0).unwrap(), 1.0, "P_{l}(1)");
        }
    }

    #[test]
    fn legendre_rejects_small_arguments() {
        assert!(legendre(2, 0.999).is_err());
        assert!(legendre(2, f64::NAN).is_err());
    }

    #[test]
    fn log_binomial_small_cases() {
        assert_eq!(log_binomial(5, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(5, 5).unwrap(), 0.0);
        assert!((log_binomial(5, 2).unwrap() - 10.0f64.ln()).abs() < 1e-14);
        assert!(log_binomial(4, 5).is_err());
    }

    #[test]
    fn log_binomial_matches_big_integer_oracle() {
        // Pascal-triangle additions in u128, a route independent of the
        // multiplicative formula used by the implementation.
        let n = 60usize;
        let mut row: Vec<u128> = vec![1];
        for _ in 0..n {
            let mut next = vec![1u128; row.len() + 1];
            for j in 1..row.len() {
                next[j] = row[j - 1] + row[j];
            }
            row = next;
        }
        let exact = (row[30] as f64).ln();
        assert!((log_binomial(60, 30).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn log_binomial_large_path_is_consistent() {
        // Pascal identity in the exp domain across the small/large boundary.
        for &(n, k) in &[(121u64, 40u64), (200, 3), (500, 250), (4096, 17)] {
            let lhs = log_binomial(n, k).unwrap().exp();
            let rhs = log_binomial(n - 1, k - 1).unwrap().exp() + log_binomial(n - 1, k).unwrap().exp();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs,
                "Pascal identity failed for C({n},{k})"
            );
        }
    }

    #[test]
    fn xlnx_conventions() {
        assert_eq!(xlnx(0.0).unwrap(), 0.0);
        assert_eq!(xlnx(1.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((xlnx(e).unwrap() - e).abs() < 1e-15);
        assert!(xlnx(-1e-16).is_err());
    }
}
