//! Section-to-section interaction potential (SSIP) laws and their
//! integration over pairs of Hermite beam elements.
//!
//! Every law is a function of the distance `d` between the two centerline
//! points only. Cross-section orientation is ignored, so the resulting
//! generalized forces act through the centerline interpolation alone.
//! For the Lennard-Jones family the natural variable is the surface gap
//! `g = d - R1 - R2`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::beam::{combine, ElementMatrix, ElementVector, HermiteElement, HermiteShape};
use crate::error::{Error, Result};
use crate::quadrature::GaussRule;

/// Prefactor of the repulsive SSIP, `k_rep_ssip = REPULSIVE_PREFACTOR * k_repLJ`.
pub const REPULSIVE_PREFACTOR: f64 = 5.30e-3;

/// Ratio between the equilibrium gap of two parallel fibers and the
/// Lennard-Jones point-pair equilibrium distance.
pub const PARALLEL_EQUILIBRIUM_RATIO: f64 = 0.57169;

/// Value of a law and its first two derivatives with respect to `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectrostaticLaw {
    pub sigma1: f64,
    pub sigma2: f64,
    /// Coulomb prefactor.
    pub k: f64,
    pub radius1: f64,
    pub radius2: f64,
}

impl ElectrostaticLaw {
    /// `2 pi R1 sigma1 * 2 pi R2 sigma2 * k`, the numerator of `pi(d) = C / d`.
    pub fn coefficient(&self) -> f64 {
        2.0 * PI * self.radius1 * self.sigma1 * 2.0 * PI * self.radius2 * self.sigma2 * self.k
    }

    pub fn eval(&self, d: f64) -> Result<LawValue> {
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::Singularity { gap: d });
        }
        let c = self.coefficient();
        Ok(LawValue {
            value: c / d,
            d1: -c / (d * d),
            d2: 2.0 * c / (d * d * d),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LennardJonesLaw {
    pub rho1: f64,
    pub rho2: f64,
    /// Attractive point-pair constant (negative).
    pub k_vdw: f64,
    /// Repulsive point-pair constant (positive).
    pub k_rep: f64,
    pub radius1: f64,
    pub radius2: f64,
    /// Below this gap the combined section force is extrapolated linearly.
    pub g_reg: Option<f64>,
    /// Center-distance cutoff for point pairs.
    pub r_cutoff: Option<f64>,
}

impl LennardJonesLaw {
    fn radius_factor(&self) -> f64 {
        (2.0 * self.radius1 * self.radius2 / (self.radius1 + self.radius2)).sqrt()
    }

    fn vdw_coefficient(&self) -> f64 {
        3.0 * PI * PI / 256.0 * self.rho1 * self.rho2 * self.radius_factor() * self.k_vdw
    }

    fn rep_coefficient(&self) -> f64 {
        self.rho1 * self.rho2 * self.radius_factor() * REPULSIVE_PREFACTOR * self.k_rep
    }

    /// Hamaker constant `pi^2 rho1 rho2 k_vdw`. Informational only.
    pub fn hamaker_constant(&self) -> f64 {
        PI * PI * self.rho1 * self.rho2 * self.k_vdw
    }

    /// Point-pair equilibrium distance `(-2 k_rep / k_vdw)^(1/6)`.
    pub fn point_equilibrium_distance(&self) -> Result<f64> {
        if !(self.k_vdw < 0.0 && self.k_rep > 0.0) {
            return Err(Error::config(
                "interaction",
                "Lennard-Jones constants need k_vdw < 0 and k_rep > 0",
            ));
        }
        Ok((-2.0 * self.k_rep / self.k_vdw).powf(1.0 / 6.0))
    }

    /// Van der Waals SSIP as a function of the surface gap.
    pub fn vdw(&self, g: f64) -> Result<LawValue> {
        power_law(self.vdw_coefficient(), -2.5, g)
    }

    /// Repulsive SSIP as a function of the surface gap.
    pub fn repulsive(&self, g: f64) -> Result<LawValue> {
        power_law(self.rep_coefficient(), -8.5, g)
    }

    fn raw(&self, g: f64) -> Result<LawValue> {
        if g <= 0.0 || !g.is_finite() {
            return Err(Error::Singularity { gap: g });
        }
        // g^-2.5 and g^-8.5 from one square root, this is the inner loop
        let inv = 1.0 / g;
        let p25 = inv * inv / g.sqrt();
        let inv3 = inv * inv * inv;
        let p85 = p25 * inv3 * inv3;
        let v = self.vdw_coefficient() * p25;
        let r = self.rep_coefficient() * p85;
        Ok(LawValue {
            value: v + r,
            d1: (-2.5 * v - 8.5 * r) * inv,
            d2: (2.5 * 3.5 * v + 8.5 * 9.5 * r) * inv * inv,
        })
    }

    /// Combined potential with the regularization applied, as a function of
    /// the surface gap. Below `g_reg` the potential is the quadratic whose
    /// derivative continues the section force linearly.
    pub fn combined(&self, g: f64) -> Result<LawValue> {
        match self.g_reg {
            Some(gr) if g < gr => {
                let knot = self.raw(gr)?;
                let dg = g - gr;
                Ok(LawValue {
                    value: knot.value + knot.d1 * dg + 0.5 * knot.d2 * dg * dg,
                    d1: knot.d1 + knot.d2 * dg,
                    d2: knot.d2,
                })
            }
            _ => self.raw(g),
        }
    }

    /// Section force per unit length squared, positive when repulsive.
    pub fn section_force(&self, g: f64) -> Result<f64> {
        let v = self.combined(g)?;
        if !v.d1.is_finite() {
            return Err(Error::NonFinite {
                provider: "lennard-jones".into(),
                detail: format!("section force at gap {g:e}"),
            });
        }
        Ok(-v.d1)
    }

    pub fn eval(&self, d: f64) -> Result<LawValue> {
        self.combined(d - self.radius1 - self.radius2)
    }
}

fn power_law(coefficient: f64, exponent: f64, g: f64) -> Result<LawValue> {
    if g <= 0.0 || !g.is_finite() {
        return Err(Error::Singularity { gap: g });
    }
    let v = coefficient * g.powf(exponent);
    Ok(LawValue {
        value: v,
        d1: exponent * v / g,
        d2: exponent * (exponent - 1.0) * v / (g * g),
    })
}

/// Gap at which two parallel straight fibers are in equilibrium under the
/// combined vdW and repulsive SSIP.
pub fn lj_equilibrium_gap(law: &LennardJonesLaw) -> Result<f64> {
    Ok(PARALLEL_EQUILIBRIUM_RATIO * law.point_equilibrium_distance()?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InteractionLaw {
    Electrostatic(ElectrostaticLaw),
    LennardJones(LennardJonesLaw),
}

impl InteractionLaw {
    pub fn eval(&self, d: f64) -> Result<LawValue> {
        match self {
            InteractionLaw::Electrostatic(l) => l.eval(d),
            InteractionLaw::LennardJones(l) => l.eval(d),
        }
    }

    pub fn cutoff(&self) -> Option<f64> {
        match self {
            InteractionLaw::Electrostatic(_) => None,
            InteractionLaw::LennardJones(l) => l.r_cutoff,
        }
    }

    pub fn radii(&self) -> (f64, f64) {
        match self {
            InteractionLaw::Electrostatic(l) => (l.radius1, l.radius2),
            InteractionLaw::LennardJones(l) => (l.radius1, l.radius2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InteractionLaw::Electrostatic(_) => "electrostatic",
            InteractionLaw::LennardJones(_) => "lennard-jones",
        }
    }
}

/// Integration segments per element and Gauss points per segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SsipQuadrature {
    pub n_segments: usize,
    pub n_gauss_points: usize,
}

impl SsipQuadrature {
    pub fn rule(&self) -> GaussRule {
        GaussRule::segmented(self.n_segments, self.n_gauss_points)
    }
}

/// Energy, gradient and Hessian of one element pair. `force_*` are
/// gradients of the pair energy with respect to the element DOFs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairResponse {
    pub energy: f64,
    pub force_a: ElementVector,
    pub force_b: ElementVector,
    pub k_aa: ElementMatrix,
    pub k_ab: ElementMatrix,
    pub k_bb: ElementMatrix,
}

impl PairResponse {
    fn zero() -> Self {
        PairResponse {
            energy: 0.0,
            force_a: ElementVector::zeros(),
            force_b: ElementVector::zeros(),
            k_aa: ElementMatrix::zeros(),
            k_ab: ElementMatrix::zeros(),
            k_bb: ElementMatrix::zeros(),
        }
    }
}

/// Quadrature points of one element: positions, shape weights, and
/// integration weights including the arc-length Jacobian.
#[derive(Debug, Clone)]
pub struct ElementSamples {
    pub positions: Vec<Vector2<f64>>,
    pub shapes: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
}

impl ElementSamples {
    pub fn new(element: &HermiteElement, q: &ElementVector, rule: &GaussRule) -> Self {
        let jac = 0.5 * element.reference_length;
        let mut positions = Vec::with_capacity(rule.len());
        let mut shapes = Vec::with_capacity(rule.len());
        let mut weights = Vec::with_capacity(rule.len());
        for (&xi, &w) in rule.points.iter().zip(&rule.weights) {
            let shape = HermiteShape::at(xi, element.reference_length).value;
            positions.push(combine(&shape, q));
            shapes.push(shape);
            weights.push(w * jac);
        }
        ElementSamples {
            positions,
            shapes,
            weights,
        }
    }
}

/// Double Gauss sum of the SSIP over one element pair.
pub fn integrate_pair(
    law: &InteractionLaw,
    a: &ElementSamples,
    b: &ElementSamples,
) -> Result<PairResponse> {
    let cutoff = law.cutoff();
    let na = a.positions.len();
    let nb = b.positions.len();
    let mut energy = 0.0;
    let mut grad_a = vec![Vector2::zeros(); na];
    let mut grad_b = vec![Vector2::zeros(); nb];
    let mut hess_a = vec![Matrix2::zeros(); na];
    let mut hess_b = vec![Matrix2::zeros(); nb];
    // mixed[i][m] = sum_j w_ij * b_shape[j][m] * H_ij
    let mut mixed = vec![[Matrix2::zeros(); 4]; na];
    let mut any = false;

    for i in 0..na {
        let ra = a.positions[i];
        let wa = a.weights[i];
        for j in 0..nb {
            let x = ra - b.positions[j];
            let d = x.norm();
            if let Some(rc) = cutoff {
                if d > rc {
                    continue;
                }
            }
            let lv = law.eval(d)?;
            any = true;
            let w = wa * b.weights[j];
            let n = x / d;
            energy += w * lv.value;
            let g = n * (w * lv.d1);
            grad_a[i] += g;
            grad_b[j] -= g;
            let nn = n * n.transpose();
            let h = nn * (w * lv.d2) + (Matrix2::identity() - nn) * (w * lv.d1 / d);
            hess_a[i] += h;
            hess_b[j] += h;
            let bs = &b.shapes[j];
            for m in 0..4 {
                mixed[i][m] += h * bs[m];
            }
        }
    }

    let mut out = PairResponse::zero();
    if !any {
        return Ok(out);
    }
    out.energy = energy;
    for i in 0..na {
        let s = &a.shapes[i];
        for k in 0..4 {
            add_vec(&mut out.force_a, k, grad_a[i] * s[k]);
            for l in 0..4 {
                add_block(&mut out.k_aa, k, l, hess_a[i] * (s[k] * s[l]));
            }
            for (m, &mix) in mixed[i].iter().enumerate() {
                add_block(&mut out.k_ab, k, m, -mix * s[k]);
            }
        }
    }
    for j in 0..nb {
        let s = &b.shapes[j];
        for k in 0..4 {
            add_vec(&mut out.force_b, k, grad_b[j] * s[k]);
            for l in 0..4 {
                add_block(&mut out.k_bb, k, l, hess_b[j] * (s[k] * s[l]));
            }
        }
    }
    if !out.energy.is_finite() || out.force_a.iter().chain(out.force_b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            provider: law.name().into(),
            detail: "element pair integration".into(),
        });
    }
    Ok(out)
}

#[inline]
pub(crate) fn add_vec(v: &mut ElementVector, k: usize, f: Vector2<f64>) {
    v[2 * k] += f.x;
    v[2 * k + 1] += f.y;
}

#[inline]
pub(crate) fn add_block(m: &mut ElementMatrix, k: usize, l: usize, b: Matrix2<f64>) {
    m[(2 * k, 2 * l)] += b[(0, 0)];
    m[(2 * k, 2 * l + 1)] += b[(0, 1)];
    m[(2 * k + 1, 2 * l)] += b[(1, 0)];
    m[(2 * k + 1, 2 * l + 1)] += b[(1, 1)];
}

/// Axis-aligned box around the Bezier control polygon of a Hermite
/// element, which contains the whole centerline segment.
pub fn element_bounds(element: &HermiteElement, q: &ElementVector) -> (Vector2<f64>, Vector2<f64>) {
    let third = element.reference_length / 3.0;
    let p0 = Vector2::new(q[0], q[1]);
    let t0 = Vector2::new(q[2], q[3]);
    let p3 = Vector2::new(q[4], q[5]);
    let t3 = Vector2::new(q[6], q[7]);
    let pts = [p0, p0 + t0 * third, p3 - t3 * third, p3];
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in &pts[1..] {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

pub(crate) fn box_distance(a: &(Vector2<f64>, Vector2<f64>), b: &(Vector2<f64>, Vector2<f64>)) -> f64 {
    let dx = (b.0.x - a.1.x).max(a.0.x - b.1.x).max(0.0);
    let dy = (b.0.y - a.1.y).max(a.0.y - b.1.y).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

/// Element pairs `(index in A, index in B)` that may carry a nonzero
/// contribution. Without a cutoff every pair is returned.
pub fn interaction_pair_schedule(
    elements_a: &[(HermiteElement, ElementVector)],
    elements_b: &[(HermiteElement, ElementVector)],
    law: &InteractionLaw,
) -> Vec<(usize, usize)> {
    let Some(rc) = law.cutoff() else {
        return (0..elements_a.len())
            .flat_map(|i| (0..elements_b.len()).map(move |j| (i, j)))
            .collect();
    };
    let boxes_b: Vec<_> = elements_b.iter().map(|(e, q)| element_bounds(e, q)).collect();
    let mut pairs = Vec::new();
    for (i, (ea, qa)) in elements_a.iter().enumerate() {
        let ba = element_bounds(ea, qa);
        for (j, bb) in boxes_b.iter().enumerate() {
            if box_distance(&ba, bb) <= rc {
                pairs.push((i, j));
            }
        }
    }
    pairs
}
