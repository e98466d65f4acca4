//! Planar, torsion-free, shear-rigid beam element with a cubic Hermite
//! centerline.
//!
//! Each node carries four degrees of freedom: the centerline position
//! `(x, y)` and the centerline derivative `(t_x, t_y)` with respect to the
//! reference arc length. Tangent vectors are not normalized, so axial
//! stretch enters through `|r'|`.
//!
//! The strain energy density per unit reference length is
//! `0.5 * (EA * eps^2 + EI * kappa^2)` with
//!
//! * `eps = |r'| - 1`
//! * `kappa = (r'_x r''_y - r'_y r''_x) / |r'|^2`
//!
//! Element DOFs are ordered `[x1, y1, tx1, ty1, x2, y2, tx2, ty2]`.

use nalgebra::{Matrix2, SMatrix, SVector, Vector2};

use crate::error::{Error, Result};
use crate::quadrature::GaussRule;

pub type ElementVector = SVector<f64, 8>;
pub type ElementMatrix = SMatrix<f64, 8, 8>;

/// Quadrature points per element for the internal forces.
pub const INTERNAL_FORCE_GAUSS_POINTS: usize = 4;

/// `|r'|` below this value is treated as a degenerate centerline.
pub const TANGENT_DEGENERACY: f64 = 1e-12;

/// Hermite shape values at one local coordinate, already scaled so that
/// `r = sum_k value[k] * q_k` for the four 2-vectors `q_k`
/// (position 1, tangent 1, position 2, tangent 2). `d1` and `d2` are
/// derivatives with respect to reference arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteShape {
    pub value: [f64; 4],
    pub d1: [f64; 4],
    pub d2: [f64; 4],
}

impl HermiteShape {
    pub fn at(xi: f64, length: f64) -> Self {
        let (h, dh, ddh) = hermite_basis(xi);
        let half = 0.5 * length;
        let jac = 2.0 / length;
        let scale = [1.0, half, 1.0, half];
        let mut value = [0.0; 4];
        let mut d1 = [0.0; 4];
        let mut d2 = [0.0; 4];
        for k in 0..4 {
            value[k] = h[k] * scale[k];
            d1[k] = dh[k] * scale[k] * jac;
            d2[k] = ddh[k] * scale[k] * jac * jac;
        }
        HermiteShape { value, d1, d2 }
    }

    /// Shape values and their first two derivatives with respect to the
    /// local coordinate `xi` (not arc length).
    pub fn parametric(xi: f64, length: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
        let (h, dh, ddh) = hermite_basis(xi);
        let half = 0.5 * length;
        let scale = [1.0, half, 1.0, half];
        let mut v = [0.0; 4];
        let mut d = [0.0; 4];
        let mut dd = [0.0; 4];
        for k in 0..4 {
            v[k] = h[k] * scale[k];
            d[k] = dh[k] * scale[k];
            dd[k] = ddh[k] * scale[k];
        }
        (v, d, dd)
    }
}

/// Cubic Hermite basis on `[-1, 1]` with first and second `xi`-derivatives.
pub fn hermite_basis(xi: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let x2 = xi * xi;
    let x3 = x2 * xi;
    let h = [
        0.25 * (2.0 - 3.0 * xi + x3),
        0.25 * (1.0 - xi - x2 + x3),
        0.25 * (2.0 + 3.0 * xi - x3),
        0.25 * (-1.0 - xi + x2 + x3),
    ];
    let dh = [
        0.25 * (-3.0 + 3.0 * x2),
        0.25 * (-1.0 - 2.0 * xi + 3.0 * x2),
        0.25 * (3.0 - 3.0 * x2),
        0.25 * (-1.0 + 2.0 * xi + 3.0 * x2),
    ];
    let ddh = [1.5 * xi, 0.25 * (-2.0 + 6.0 * xi), -1.5 * xi, 0.25 * (2.0 + 6.0 * xi)];
    (h, dh, ddh)
}

/// Combine the four nodal 2-vectors of `q` with scalar shape weights.
#[inline]
pub fn combine(weights: &[f64; 4], q: &ElementVector) -> Vector2<f64> {
    let mut r = Vector2::zeros();
    for k in 0..4 {
        r.x += weights[k] * q[2 * k];
        r.y += weights[k] * q[2 * k + 1];
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteElement {
    pub nodes: [usize; 2],
    pub reference_length: f64,
    /// Axial stiffness `E * pi * R^2`.
    pub ea: f64,
    /// Bending stiffness `E * pi * R^4 / 4`.
    pub ei: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainState {
    pub axial: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementResponse {
    pub energy: f64,
    pub force: ElementVector,
    pub stiffness: ElementMatrix,
}

/// Position and its first two arc-length derivatives at `xi`.
pub fn interpolate(
    element: &HermiteElement,
    xi: f64,
    q: &ElementVector,
) -> (Vector2<f64>, Vector2<f64>, Vector2<f64>) {
    let shape = HermiteShape::at(xi, element.reference_length);
    (
        combine(&shape.value, q),
        combine(&shape.d1, q),
        combine(&shape.d2, q),
    )
}

pub fn strains(r1: &Vector2<f64>, r2: &Vector2<f64>) -> StrainState {
    let n2 = r1.norm_squared();
    StrainState {
        axial: n2.sqrt() - 1.0,
        curvature: (r1.x * r2.y - r1.y * r2.x) / n2,
    }
}

/// Energy density and its gradient / Hessian with respect to `(r', r'')`.
struct Density {
    value: f64,
    grad_a: Vector2<f64>,
    grad_b: Vector2<f64>,
    h_aa: Matrix2<f64>,
    h_ab: Matrix2<f64>,
    h_bb: Matrix2<f64>,
}

fn density(ea: f64, ei: f64, a: &Vector2<f64>, b: &Vector2<f64>) -> Density {
    // cross(a, b) = a^T S b
    let s = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let m = a.norm_squared();
    let n = m.sqrt();
    let eps = n - 1.0;
    let c = a.x * b.y - a.y * b.x;
    let kappa = c / m;

    let de = a / n;
    let dde = (Matrix2::identity() - a * a.transpose() / m) / n;

    let sb = s * b;
    let sta = s.transpose() * a;
    let dk_a = sb / m - a * (2.0 * c / (m * m));
    let dk_b = sta / m;
    let ddk_aa = -(sb * a.transpose() + a * sb.transpose()) * (2.0 / (m * m))
        - Matrix2::identity() * (2.0 * c / (m * m))
        + a * a.transpose() * (8.0 * c / (m * m * m));
    let ddk_ab = s / m - a * sta.transpose() * (2.0 / (m * m));

    Density {
        value: 0.5 * (ea * eps * eps + ei * kappa * kappa),
        grad_a: de * (ea * eps) + dk_a * (ei * kappa),
        grad_b: dk_b * (ei * kappa),
        h_aa: (de * de.transpose() + dde * eps) * ea
            + (dk_a * dk_a.transpose() + ddk_aa * kappa) * ei,
        h_ab: (dk_a * dk_b.transpose() + ddk_ab * kappa) * ei,
        // kappa is linear in r'', so only the outer product survives.
        h_bb: dk_b * dk_b.transpose() * ei,
    }
}

/// Internal energy, internal force `dPi/dq` and consistent tangent `d2Pi/dq2`.
pub fn element_energy_force_tangent(
    element: &HermiteElement,
    element_index: usize,
    q: &ElementVector,
    rule: &GaussRule,
) -> Result<ElementResponse> {
    let jac = 0.5 * element.reference_length;
    let mut energy = 0.0;
    let mut force = ElementVector::zeros();
    let mut stiffness = ElementMatrix::zeros();
    for (&xi, &w) in rule.points.iter().zip(&rule.weights) {
        let shape = HermiteShape::at(xi, element.reference_length);
        let a = combine(&shape.d1, q);
        let b = combine(&shape.d2, q);
        let norm = a.norm();
        if !(norm > TANGENT_DEGENERACY) {
            return Err(Error::DegenerateTangent {
                element: element_index,
                xi,
                norm,
            });
        }
        let d = density(element.ea, element.ei, &a, &b);
        let wj = w * jac;
        energy += wj * d.value;
        let h_ba = d.h_ab.transpose();
        for k in 0..4 {
            let fk = d.grad_a * shape.d1[k] + d.grad_b * shape.d2[k];
            force[2 * k] += wj * fk.x;
            force[2 * k + 1] += wj * fk.y;
            for l in 0..4 {
                let blk = d.h_aa * (shape.d1[k] * shape.d1[l])
                    + d.h_ab * (shape.d1[k] * shape.d2[l])
                    + h_ba * (shape.d2[k] * shape.d1[l])
                    + d.h_bb * (shape.d2[k] * shape.d2[l]);
                for i in 0..2 {
                    for j in 0..2 {
                        stiffness[(2 * k + i, 2 * l + j)] += wj * blk[(i, j)];
                    }
                }
            }
        }
    }
    Ok(ElementResponse {
        energy,
        force,
        stiffness,
    })
}

/// Central finite-difference check of the element tangent. Returns the
/// largest entry error relative to the largest stiffness entry.
pub fn verify_tangent(element: &HermiteElement, q: &ElementVector, step: f64) -> Result<f64> {
    let rule = GaussRule::legendre(INTERNAL_FORCE_GAUSS_POINTS);
    let base = element_energy_force_tangent(element, 0, q, &rule)?;
    let scale = base.stiffness.amax().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for j in 0..8 {
        let mut qp = *q;
        let mut qm = *q;
        qp[j] += step;
        qm[j] -= step;
        let fp = element_energy_force_tangent(element, 0, &qp, &rule)?.force;
        let fm = element_energy_force_tangent(element, 0, &qm, &rule)?.force;
        for i in 0..8 {
            let fd = (fp[i] - fm[i]) / (2.0 * step);
            worst = worst.max((fd - base.stiffness[(i, j)]).abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn element(length: f64, ea: f64, ei: f64) -> HermiteElement {
        HermiteElement {
            nodes: [0, 1],
            reference_length: length,
            ea,
            ei,
        }
    }

    fn straight(length: f64) -> ElementVector {
        ElementVector::from_column_slice(&[0.0, 0.0, 0.0, 1.0, 0.0, length, 0.0, 1.0])
    }

    fn rule() -> GaussRule {
        GaussRule::legendre(INTERNAL_FORCE_GAUSS_POINTS)
    }

    fn transform(q: &ElementVector, angle: f64, shift: Vector2<f64>) -> ElementVector {
        let rot = nalgebra::Rotation2::new(angle);
        let mut out = *q;
        for k in 0..4 {
            let v = rot * Vector2::new(q[2 * k], q[2 * k + 1]);
            let v = if k % 2 == 0 { v + shift } else { v };
            out[2 * k] = v.x;
            out[2 * k + 1] = v.y;
        }
        out
    }

    #[test]
    fn endpoint_interpolation() {
        let e = element(0.7, 1.0, 1.0);
        let q = ElementVector::from_column_slice(&[0.1, 0.2, 0.9, 0.3, 0.5, 0.8, -0.2, 1.1]);
        let (r, r1, _) = interpolate(&e, -1.0, &q);
        assert!((r - Vector2::new(0.1, 0.2)).norm() < 1e-15);
        assert!((r1 - Vector2::new(0.9, 0.3)).norm() < 1e-14);
        let (r, r1, _) = interpolate(&e, 1.0, &q);
        assert!((r - Vector2::new(0.5, 0.8)).norm() < 1e-15);
        assert!((r1 - Vector2::new(-0.2, 1.1)).norm() < 1e-14);
    }

    #[test]
    fn straight_midpoint() {
        let e = element(2.0, 1.0, 1.0);
        let (r, r1, r2) = interpolate(&e, 0.0, &straight(2.0));
        assert!((r - Vector2::new(0.0, 1.0)).norm() < 1e-15);
        assert!((r1.norm() - 1.0).abs() < 1e-15);
        assert!(r2.norm() < 1e-15);
    }

    #[test]
    fn reproduces_cubic_curves() {
        // r(s) = (a0 + a1 s + a2 s^2 + a3 s^3, b0 + ... ) on s in [0, L]
        let a = [0.3, -0.7, 0.25, 0.11];
        let b = [-1.0, 0.4, -0.6, 0.05];
        let len = 1.7;
        let p = |c: &[f64; 4], s: f64| c[0] + c[1] * s + c[2] * s * s + c[3] * s * s * s;
        let dp = |c: &[f64; 4], s: f64| c[1] + 2.0 * c[2] * s + 3.0 * c[3] * s * s;
        let ddp = |c: &[f64; 4], s: f64| 2.0 * c[2] + 6.0 * c[3] * s;
        let q = ElementVector::from_column_slice(&[
            p(&a, 0.0),
            p(&b, 0.0),
            dp(&a, 0.0),
            dp(&b, 0.0),
            p(&a, len),
            p(&b, len),
            dp(&a, len),
            dp(&b, len),
        ]);
        let e = element(len, 1.0, 1.0);
        for xi in [-1.0, -0.4, 0.0, 0.3, 1.0] {
            let s = 0.5 * (xi + 1.0) * len;
            let (r, r1, r2) = interpolate(&e, xi, &q);
            assert!((r.x - p(&a, s)).abs() < 1e-14 && (r.y - p(&b, s)).abs() < 1e-14);
            assert!((r1.x - dp(&a, s)).abs() < 1e-13 && (r1.y - dp(&b, s)).abs() < 1e-13);
            assert!((r2.x - ddp(&a, s)).abs() < 1e-12 && (r2.y - ddp(&b, s)).abs() < 1e-12);
        }
    }

    #[test]
    fn stress_free_reference() {
        let e = element(0.3125, 125.0, 0.0126);
        let resp = element_energy_force_tangent(&e, 0, &straight(0.3125), &rule()).unwrap();
        assert!(resp.energy.abs() < 1e-25);
        assert!(resp.force.amax() < 1e-13 * 125.0);
    }

    #[test]
    fn uniform_stretch_energy() {
        let len = 0.3125;
        let ea = 125.66;
        let e = element(len, ea, 0.0126);
        let lambda = 1.01;
        let q = ElementVector::from_column_slice(&[0.0, 0.0, 0.0, lambda, 0.0, lambda * len, 0.0, lambda]);
        let resp = element_energy_force_tangent(&e, 0, &q, &rule()).unwrap();
        let exact = 0.5 * ea * 0.01f64.powi(2) * len;
        assert!((resp.energy - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn circular_arc_bending_energy() {
        let ei = 0.012566;
        for ratio in [0.05, 0.1, 0.2, 0.3] {
            let rho = 1.0;
            let len = ratio * rho;
            let at = |s: f64| {
                let phi = s / rho;
                (
                    Vector2::new(rho * (1.0 - phi.cos()), rho * phi.sin()),
                    Vector2::new(phi.sin(), phi.cos()),
                )
            };
            let (p0, t0) = at(0.0);
            let (p1, t1) = at(len);
            let q = ElementVector::from_column_slice(&[p0.x, p0.y, t0.x, t0.y, p1.x, p1.y, t1.x, t1.y]);
            let e = element(len, 0.0, ei);
            let resp = element_energy_force_tangent(&e, 0, &q, &rule()).unwrap();
            let exact = 0.5 * ei * len / (rho * rho);
            assert!((resp.energy - exact).abs() / exact < 0.01, "L/rho = {ratio}: {} vs {exact}", resp.energy);
        }
    }

    #[test]
    fn tangent_exact_on_straight_reference() {
        let e = element(0.3125, 125.66, 0.012566);
        let err = verify_tangent(&e, &straight(0.3125), 1e-6).unwrap();
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn tangent_error_shrinks_quadratically() {
        let e = element(0.5, 10.0, 0.3);
        let q = ElementVector::from_column_slice(&[0.01, -0.02, 0.3, 0.9, 0.2, 0.45, -0.4, 1.05]);
        let coarse = verify_tangent(&e, &q, 1e-3).unwrap();
        let fine = verify_tangent(&e, &q, 1e-4).unwrap();
        assert!(fine < coarse / 30.0, "{coarse} -> {fine}");
    }

    #[test]
    fn degenerate_tangent_is_reported() {
        let e = element(1.0, 1.0, 1.0);
        let q = ElementVector::zeros();
        assert!(matches!(
            element_energy_force_tangent(&e, 3, &q, &rule()),
            Err(Error::DegenerateTangent { element: 3, .. })
        ));
    }

    fn perturbed(len: f64, noise: &[f64]) -> ElementVector {
        let mut q = straight(len);
        for (i, n) in noise.iter().enumerate() {
            let scale = if (i / 2) % 2 == 0 { 0.2 * len } else { 0.2 };
            q[i] += scale * n;
        }
        q
    }

    proptest! {
        #[test]
        fn tangent_matches_finite_differences(noise in proptest::collection::vec(-1.0f64..1.0, 8)) {
            let len = 0.3125;
            let e = element(len, 125.66, 0.012566);
            let q = perturbed(len, &noise);
            let err = verify_tangent(&e, &q, 1e-7 * len).unwrap();
            prop_assert!(err < 1e-6, "{}", err);
        }

        #[test]
        fn rigid_motion_invariance(
            noise in proptest::collection::vec(-1.0f64..1.0, 8),
            angle in -std::f64::consts::PI..std::f64::consts::PI,
            dx in -10.0f64..10.0,
            dy in -10.0f64..10.0,
        ) {
            let len = 0.3125;
            let e = element(len, 125.66, 0.012566);
            let q = perturbed(len, &noise);
            let moved = transform(&q, angle, Vector2::new(dx, dy));
            let a = element_energy_force_tangent(&e, 0, &q, &rule()).unwrap().energy;
            let b = element_energy_force_tangent(&e, 0, &moved, &rule()).unwrap().energy;
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300), "{} vs {}", a, b);
            for &xi in &rule().points {
                let (_, r1, r2) = interpolate(&e, xi, &q);
                let (_, m1, m2) = interpolate(&e, xi, &moved);
                let s = strains(&r1, &r2);
                let t = strains(&m1, &m2);
                prop_assert!((s.axial - t.axial).abs() < 1e-12);
                prop_assert!((s.curvature - t.curvature).abs() < 1e-10 * (1.0 + s.curvature.abs()));
            }
        }
    }
}
