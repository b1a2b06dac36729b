//! Not-a-knot cubic spline interpolation.

use crate::error::{FwmError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Needs at least four strictly increasing abscissae.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() {
            return Err(FwmError::Table("x and y lengths differ".into()));
        }
        if n < 4 {
            return Err(FwmError::Table(format!(
                "spline needs at least 4 samples, got {n}"
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(FwmError::Table("non-finite sample".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FwmError::Table(
                "abscissae must be strictly increasing".into(),
            ));
        }

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        // Interior equations for M_1..M_{n-2}, with M_0 and M_{n-1} eliminated
        // through third-derivative continuity at x_1 and x_{n-2}.
        let k = n - 2;
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for j in 0..k {
            let i = j + 1;
            sub[j] = h[i - 1];
            diag[j] = 2.0 * (h[i - 1] + h[i]);
            sup[j] = h[i];
            rhs[j] = 6.0 * (slope[i] - slope[i - 1]);
        }
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 + h0 * h0 / h1;
        sup[0] -= h0 * h0 / h1;
        let (ha, hb) = (h[n - 3], h[n - 2]);
        diag[k - 1] += hb + hb * hb / ha;
        sub[k - 1] -= hb * hb / ha;

        let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
        let mut m = Vec::with_capacity(n);
        m.push(inner[0] * (1.0 + h0 / h1) - inner[1] * h0 / h1);
        m.extend_from_slice(&inner);
        m.push(inner[k - 1] * (1.0 + hb / ha) - inner[k - 2] * hb / ha);

        Ok(Self { xs, ys, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Evaluates inside the knot range; `None` outside.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p => (p - 1).min(self.xs.len() - 2),
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - x, x - x0);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        Some(
            m0 * a * a * a / (6.0 * h)
                + m1 * b * b * b / (6.0 * h)
                + (self.ys[i] / h - m0 * h / 6.0) * a
                + (self.ys[i + 1] / h - m1 * h / 6.0) * b,
        )
    }
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    for i in 0..n {
        if i > 0 {
            pivot = diag[i] - sub[i] * c[i - 1];
        }
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(FwmError::Table("singular spline system".into()));
        }
        c[i] = sup[i] / pivot;
        d[i] = (rhs[i] - if i > 0 { sub[i] * d[i - 1] } else { 0.0 }) / pivot;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}
