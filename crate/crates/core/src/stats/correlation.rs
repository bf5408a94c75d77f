use super::special::student_t_two_sided;
use super::{check_finite, StatsError, TestMethod, TestResult};

/// Pearson correlation with a two-sided p-value from the t distribution with
/// `n - 2` degrees of freedom. A perfect correlation reports p = 0.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<TestResult, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::TooFewObservations { needed: 3, got: n });
    }
    check_finite(xs)?;
    check_finite(ys)?;
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ConstantInput);
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let dof = nf - 2.0;
    let one_minus = 1.0 - r * r;
    let p = if one_minus <= 0.0 {
        0.0
    } else {
        student_t_two_sided(r * (dof / one_minus).sqrt(), dof)?
    };
    Ok(TestResult::new(TestMethod::Pearson, r, p, vec![n]))
}
