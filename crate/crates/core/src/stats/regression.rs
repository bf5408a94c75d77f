use std::fmt;

use serde::{Deserialize, Serialize};

use super::StatsError;

/// Least-squares plane `z = intercept + coef_x * x + coef_y * y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneFit {
    pub intercept: f64,
    pub coef_x: f64,
    pub coef_y: f64,
    pub r_squared: f64,
    /// Set when every `z` is identical (zero total variance). The fit is then
    /// exact with both slopes 0 and `r_squared` reported as 1.
    #[serde(skip)]
    pub degenerate: bool,
}

impl PlaneFit {
    pub fn predict(&self, x: f64, y: f64) -> f64 {
        self.intercept + self.coef_x * x + self.coef_y * y
    }
}

fn signed(v: f64) -> (char, f64) {
    if v < 0.0 {
        ('-', -v)
    } else {
        ('+', v)
    }
}

impl fmt::Display for PlaneFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sx, bx) = signed(self.coef_x);
        let (sy, by) = signed(self.coef_y);
        write!(
            f,
            "C = {:.4} {sx} {bx:.4}*x {sy} {by:.4}*y (R²={:.4})",
            self.intercept, self.r_squared
        )
    }
}

/// Ordinary least squares through Householder QR of the `[1, x, y]` design.
pub fn fit_plane(points: &[(f64, f64, f64)]) -> Result<PlaneFit, StatsError> {
    let n = points.len();
    if n < 3 {
        return Err(StatsError::TooFewObservations { needed: 3, got: n });
    }
    if points
        .iter()
        .any(|(x, y, z)| !(x.is_finite() && y.is_finite() && z.is_finite()))
    {
        return Err(StatsError::NonFinite);
    }

    // column-major design and response
    let mut cols: [Vec<f64>; 3] = [
        vec![1.0; n],
        points.iter().map(|p| p.0).collect(),
        points.iter().map(|p| p.1).collect(),
    ];
    let mut rhs: Vec<f64> = points.iter().map(|p| p.2).collect();
    let scale = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);

    for k in 0..3 {
        let norm = cols[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-10 * scale {
            return Err(StatsError::RankDeficient);
        }
        let alpha = if cols[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|e| e * e).sum();
        let reflect = |target: &mut [f64]| {
            let dot: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (t, vi) in target.iter_mut().zip(&v) {
                *t -= f * vi;
            }
        };
        for col in cols.iter_mut().skip(k) {
            reflect(&mut col[k..]);
        }
        reflect(&mut rhs[k..]);
    }

    // back substitution on the 3x3 upper triangle
    let mut beta = [0.0; 3];
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|j| cols[j][i] * beta[j]).sum();
        beta[i] = (rhs[i] - tail) / cols[i][i];
    }

    let z0 = points[0].2;
    if points.iter().all(|p| p.2 == z0) {
        return Ok(PlaneFit {
            intercept: z0,
            coef_x: 0.0,
            coef_y: 0.0,
            r_squared: 1.0,
            degenerate: true,
        });
    }

    let fit = PlaneFit {
        intercept: beta[0],
        coef_x: beta[1],
        coef_y: beta[2],
        r_squared: 0.0,
        degenerate: false,
    };
    let mean_z = points.iter().map(|p| p.2).sum::<f64>() / n as f64;
    let ss_tot: f64 = points.iter().map(|p| (p.2 - mean_z).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.2 - fit.predict(p.0, p.1)).powi(2)).sum();
    Ok(PlaneFit {
        r_squared: (1.0 - ss_res / ss_tot).min(1.0),
        ..fit
    })
}
