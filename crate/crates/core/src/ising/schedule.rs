use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Minimum ratio `A(0)/B(0)` and `B(1)/A(1)` a schedule must reach.
pub const ENDPOINT_RATIO: f64 = 10.0;

/// `A(s)`, `B(s)` and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleValues {
    pub a: f64,
    pub b: f64,
    pub da: f64,
    pub db: f64,
}

impl ScheduleValues {
    /// `λ = A/B`; infinite where `B = 0`.
    pub fn lambda(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            self.a / self.b
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Linear,
    Tabulated {
        points: Vec<[f64; 3]>,
        slope_a: Vec<f64>,
        slope_b: Vec<f64>,
    },
}

/// Annealing schedule for `H(s) = A(s) H_B + B(s) H_P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    kind: Kind,
    energy_unit: String,
}

impl Schedule {
    /// `A = 1 - s`, `B = s`.
    pub fn linear() -> Self {
        Schedule {
            kind: Kind::Linear,
            energy_unit: String::from("dimensionless"),
        }
    }

    /// Monotone cubic (Fritsch–Carlson) interpolation through `(s, A, B)`
    /// rows. Rows must start at `s = 0`, end at `s = 1`, be strictly
    /// increasing in `s`, have nonnegative `A` and `B`, and satisfy the
    /// endpoint dominance ratios.
    pub fn tabulated(rows: &[[f64; 3]], energy_unit: impl Into<String>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::input("a tabulated schedule needs at least two rows"));
        }
        if rows[0][0] != 0.0 || rows[rows.len() - 1][0] != 1.0 {
            return Err(Error::input("schedule table must span s = 0 to s = 1"));
        }
        if rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::input("schedule s values must be strictly increasing"));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) || rows.iter().any(|r| r[1] < 0.0 || r[2] < 0.0) {
            return Err(Error::input("schedule A and B must be finite and nonnegative"));
        }
        let first = rows[0];
        let last = rows[rows.len() - 1];
        if !dominates(first[1], first[2]) || !dominates(last[2], last[1]) {
            return Err(Error::input(alloc::format!(
                "schedule must satisfy A(0)/B(0) > {ENDPOINT_RATIO} and B(1)/A(1) > {ENDPOINT_RATIO}"
            )));
        }
        let s: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let a: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        let b: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        Ok(Schedule {
            kind: Kind::Tabulated {
                points: rows.to_vec(),
                slope_a: monotone_slopes(&s, &a),
                slope_b: monotone_slopes(&s, &b),
            },
            energy_unit: energy_unit.into(),
        })
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, Kind::Linear)
    }

    /// Table rows for tabulated schedules.
    pub fn table(&self) -> Option<&[[f64; 3]]> {
        match &self.kind {
            Kind::Linear => None,
            Kind::Tabulated { points, .. } => Some(points),
        }
    }

    pub fn energy_unit(&self) -> &str {
        &self.energy_unit
    }

    pub fn values(&self, s: f64) -> Result<ScheduleValues> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::input(alloc::format!("s = {s} outside [0, 1]")));
        }
        Ok(match &self.kind {
            Kind::Linear => ScheduleValues {
                a: 1.0 - s,
                b: s,
                da: -1.0,
                db: 1.0,
            },
            Kind::Tabulated {
                points,
                slope_a,
                slope_b,
            } => {
                let k = match points.iter().position(|p| p[0] > s) {
                    Some(0) => 0,
                    Some(k) => k - 1,
                    None => points.len() - 2,
                };
                let (s0, s1) = (points[k][0], points[k + 1][0]);
                let (a, da) = hermite(s, s0, s1, points[k][1], points[k + 1][1], slope_a[k], slope_a[k + 1]);
                let (b, db) = hermite(s, s0, s1, points[k][2], points[k + 1][2], slope_b[k], slope_b[k + 1]);
                ScheduleValues { a, b, da, db }
            }
        })
    }

    pub fn lambda(&self, s: f64) -> Result<f64> {
        Ok(self.values(s)?.lambda())
    }

    /// Point where `A/B = lambda`, by bisection (λ is decreasing in s for
    /// valid schedules).
    pub fn s_at_lambda(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::input("lambda must be positive"));
        }
        if self.is_linear() {
            return Ok(1.0 / (1.0 + lambda));
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.lambda(mid)? > lambda {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn dominates(big: f64, small: f64) -> bool {
    if small == 0.0 {
        big > 0.0
    } else {
        big / small > ENDPOINT_RATIO
    }
}

/// Fritsch–Carlson tangents: averaged secants, zeroed at local extrema and
/// limited so each segment stays monotone.
fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secant: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
    let mut m = alloc::vec![0.0; n];
    m[0] = secant[0];
    m[n - 1] = secant[n - 2];
    for k in 1..n - 1 {
        m[k] = if secant[k - 1] * secant[k] <= 0.0 {
            0.0
        } else {
            0.5 * (secant[k - 1] + secant[k])
        };
    }
    for k in 0..n - 1 {
        if secant[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let alpha = m[k] / secant[k];
        let beta = m[k + 1] / secant[k];
        let r = alpha * alpha + beta * beta;
        if r > 9.0 {
            let tau = 3.0 / crate::math::sqrt(r);
            m[k] = tau * alpha * secant[k];
            m[k + 1] = tau * beta * secant[k];
        }
    }
    m
}

/// Cubic Hermite value and derivative on `[x0, x1]`.
fn hermite(x: f64, x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1;
    let deriv = ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * m1)
        / h;
    (value, deriv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ScheduleValues, b: [f64; 4]) -> bool {
        [a.a - b[0], a.b - b[1], a.da - b[2], a.db - b[3]]
            .iter()
            .all(|d| d.abs() < 1e-12)
    }

    #[test]
    fn linear_values() {
        let s = Schedule::linear();
        assert!(close(s.values(0.0).unwrap(), [1.0, 0.0, -1.0, 1.0]));
        assert!(close(s.values(0.5).unwrap(), [0.5, 0.5, -1.0, 1.0]));
        assert!(s.values(1.5).is_err());
        assert!(s.values(-0.1).is_err());
    }

    #[test]
    fn identity_table_interpolates_linearly() {
        let s = Schedule::tabulated(&[[0.0, 1.0, 0.0], [1.0, 0.0, 1.0]], "GHz").unwrap();
        assert!(close(s.values(0.5).unwrap(), [0.5, 0.5, -1.0, 1.0]));
        assert!(close(s.values(1.0).unwrap(), [0.0, 1.0, -1.0, 1.0]));
    }

    #[test]
    fn table_validation() {
        assert!(Schedule::tabulated(&[[0.0, 1.0, 0.5], [1.0, 0.0, 1.0]], "u").is_err());
        assert!(Schedule::tabulated(&[[0.0, 1.0, 0.0], [0.5, 0.5, 0.5], [0.4, 0.0, 1.0]], "u").is_err());
        assert!(Schedule::tabulated(&[[0.1, 1.0, 0.0], [1.0, 0.0, 1.0]], "u").is_err());
        assert!(Schedule::tabulated(&[[0.0, 1.0, 0.0], [0.5, -0.1, 0.5], [1.0, 0.0, 1.0]], "u").is_err());
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let rows = [
            [0.0, 10.0, 0.0],
            [0.2, 9.5, 0.1],
            [0.4, 3.0, 0.2],
            [0.6, 0.5, 2.0],
            [0.8, 0.1, 6.0],
            [1.0, 0.0, 8.0],
        ];
        let sch = Schedule::tabulated(&rows, "GHz").unwrap();
        let mut prev = sch.values(0.0).unwrap();
        for k in 1..=1000 {
            let v = sch.values(k as f64 / 1000.0).unwrap();
            assert!(v.a <= prev.a + 1e-12 && v.b >= prev.b - 1e-12);
            assert!(v.da <= 1e-12 && v.db >= -1e-12);
            prev = v;
        }
        for r in rows {
            let v = sch.values(r[0]).unwrap();
            assert!((v.a - r[1]).abs() < 1e-12 && (v.b - r[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_decreasing_for_linear() {
        let sch = Schedule::linear();
        assert_eq!(sch.lambda(0.0).unwrap(), f64::INFINITY);
        let mut prev = f64::INFINITY;
        for k in 1..=100 {
            let l = sch.lambda(k as f64 / 100.0).unwrap();
            assert!(l.is_finite() && l < prev);
            prev = l;
        }
        assert!((sch.s_at_lambda(1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bisection_inverts_lambda() {
        let sch = Schedule::tabulated(&[[0.0, 1.0, 0.0], [0.5, 0.3, 0.4], [1.0, 0.0, 1.0]], "u").unwrap();
        let s = sch.s_at_lambda(0.5).unwrap();
        assert!((sch.lambda(s).unwrap() - 0.5).abs() < 1e-9);
    }
}
