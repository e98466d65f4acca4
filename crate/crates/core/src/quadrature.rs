//! Gauss-Legendre rules on the reference interval `[-1, 1]`, optionally
//! repeated over uniform sub-segments.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point Gauss-Legendre rule, exact for polynomials up to degree `2n - 1`.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one point");
        let mut points = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            points[i] = -x;
            points[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            points[n / 2] = 0.0;
        }
        GaussRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Composite rule: `n_segments` equal sub-intervals of `[-1, 1]`, each
    /// carrying an `n_gp`-point Gauss rule. Points are ordered ascending.
    pub fn segmented(n_segments: usize, n_gp: usize) -> Self {
        assert!(n_segments >= 1);
        let base = GaussRule::legendre(n_gp);
        let width = 2.0 / n_segments as f64;
        let mut points = Vec::with_capacity(n_segments * n_gp);
        let mut weights = Vec::with_capacity(n_segments * n_gp);
        for seg in 0..n_segments {
            let lo = -1.0 + seg as f64 * width;
            for (x, w) in base.points.iter().zip(&base.weights) {
                points.push(lo + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        GaussRule { points, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in 1..=20 {
            let rule = GaussRule::legendre(n);
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn exact_for_degree_two_n_minus_one() {
        for n in 1..=12 {
            let rule = GaussRule::legendre(n);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got = rule.integrate(|x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn known_two_point_rule() {
        let rule = GaussRule::legendre(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((rule.points[0] + x).abs() < 1e-15);
        assert!((rule.points[1] - x).abs() < 1e-15);
    }

    #[test]
    fn segmented_rule_integrates_kinked_function_exactly() {
        // |x| is piecewise linear with its kink on the segment boundary.
        let rule = GaussRule::segmented(2, 3);
        assert!((rule.integrate(f64::abs) - 1.0).abs() < 1e-14);
        assert_eq!(rule.len(), 6);
        assert!(rule.points.windows(2).all(|w| w[0] < w[1]));
    }
}
