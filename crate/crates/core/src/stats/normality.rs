//! Shapiro-Wilk W test following Royston's approximation (AS R94): the
//! weights come from polynomial corrections to normal order-statistic scores
//! and the p-value from a normalising transform of `ln(1 - W)`.

use super::special::normal_sf;
use super::{check_finite, StatsError, TestMethod, TestResult};

pub const SHAPIRO_MAX_N: usize = 5000;

const C1: [f64; 6] = [0.0, 0.221_157, -0.147_981, -2.071_19, 4.434_685, -2.706_056];
const C2: [f64; 6] = [0.0, 0.042_981, -0.293_762, -1.752_461, 5.682_633, -3.582_633];
const C3: [f64; 4] = [0.544, -0.399_78, 0.025_054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.778_57, 0.062_767, -0.002_032_2];
const C5: [f64; 4] = [-1.5861, -0.310_82, -0.083_751, 0.003_891_5];
const C6: [f64; 3] = [-0.4803, -0.082_676, 0.003_030_2];
const G: [f64; 2] = [-2.273, 0.459];

/// `c[0] + c[1] x + c[2] x^2 + ...`
fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Normal quantile, algorithm AS 111 (the variant the W weights were fitted
/// with).
fn ppnd(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.42 {
        let r = q * q;
        return q * (((-25.441_060_496_37 * r + 41.391_197_735_34) * r - 18.615_000_625_29) * r + 2.506_628_238_84)
            / ((((3.130_829_098_33 * r - 21.062_241_018_26) * r + 23.083_367_437_43) * r - 8.473_510_930_90) * r
                + 1.0);
    }
    let r = if q > 0.0 { 1.0 - p } else { p };
    if r <= 0.0 {
        return 0.0;
    }
    let r = (-r.ln()).sqrt();
    let v = (((2.321_212_768_58 * r + 4.850_141_271_35) * r - 2.297_964_791_34) * r - 2.787_189_311_38)
        / ((1.637_067_818_97 * r + 3.543_889_247_62) * r + 1.0);
    if q < 0.0 {
        -v
    } else {
        v
    }
}

/// Weights for the outermost `n / 2` order-statistic differences, largest
/// first. Their squares sum to one half.
fn weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let an = n as f64;
    let m: Vec<f64> = (1..=half).map(|i| ppnd((i as f64 - 0.375) / (an + 0.25))).collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let (start, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        a[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in start..half {
        a[i] = -m[i] / fac;
    }
    a
}

/// Shapiro-Wilk test for `3 <= n <= 5000`.
pub fn shapiro_wilk(xs: &[f64]) -> Result<TestResult, StatsError> {
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::TooFewObservations { needed: 3, got: n });
    }
    if n > SHAPIRO_MAX_N {
        return Err(StatsError::Domain(format!(
            "Shapiro-Wilk supports at most {SHAPIRO_MAX_N} observations, got {n}"
        )));
    }
    check_finite(xs)?;
    let mut x = xs.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range == 0.0 {
        return Err(StatsError::ConstantInput);
    }
    // work on range-scaled data
    for v in &mut x {
        *v /= range;
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let ss: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    let a = weights(n);
    let num: f64 = a.iter().enumerate().map(|(i, ai)| ai * (x[n - 1 - i] - x[i])).sum();
    let w = (num * num / ss).min(1.0);

    let p = if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        (pi6 * (w.sqrt().asin() - std::f64::consts::FRAC_PI_3)).max(0.0)
    } else {
        let an = n as f64;
        let y = (1.0 - w).ln();
        if n <= 11 {
            let gamma = poly(&G, an);
            if y >= gamma {
                1e-99
            } else {
                let y = -(gamma - y).ln();
                let m = poly(&C3, an);
                let s = poly(&C4, an).exp();
                normal_sf((y - m) / s)
            }
        } else {
            let ln_n = an.ln();
            let m = poly(&C5, ln_n);
            let s = poly(&C6, ln_n).exp();
            normal_sf((y - m) / s)
        }
    };
    Ok(TestResult::new(TestMethod::ShapiroWilk, w, p, vec![n]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::special::normal_cdf;

    /// Inverse normal CDF by bisection on the crate's CDF.
    fn quantile(p: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn weights_are_normalised() {
        for n in [4, 5, 6, 11, 12, 50, 501] {
            let s: f64 = weights(n).iter().map(|a| a * a).sum();
            assert!((2.0 * s - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn normal_quantiles_have_high_w() {
        let n = 50;
        let xs: Vec<f64> = (1..=n).map(|i| quantile((i as f64 - 0.5) / n as f64)).collect();
        let r = shapiro_wilk(&xs).unwrap();
        assert!(r.statistic >= 0.99, "W = {}", r.statistic);
        assert!(r.p_value > 0.5);
    }

    #[test]
    fn affine_invariance() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 37 % 41) as f64).sqrt()).collect();
        let base = shapiro_wilk(&xs).unwrap().statistic;
        for (a, b) in [(3.0, -7.0), (0.001, 1e3), (250.0, 0.5)] {
            let t: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            assert!((shapiro_wilk(&t).unwrap().statistic - base).abs() < 1e-10);
        }
    }

    #[test]
    fn size_and_constant_errors() {
        assert_eq!(shapiro_wilk(&[1.0; 4]), Err(StatsError::ConstantInput));
        assert!(shapiro_wilk(&[1.0, 2.0]).is_err());
        assert!(shapiro_wilk(&vec![0.5; SHAPIRO_MAX_N + 1]).is_err());
    }

    #[test]
    fn three_points() {
        let r = shapiro_wilk(&[1.0, 2.0, 3.0]).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }
}
