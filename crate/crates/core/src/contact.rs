//! Frictionless penalty line contact between two fibers.
//!
//! Quadrature points on the slave fiber are projected onto the master
//! centerline. The gap `g = |r1 - r2c| - R1 - R2` enters a quadratically
//! regularized linear penalty law, and the penalty energy is integrated
//! along the slave fiber. The linearization includes the motion of the
//! projection point with the master DOFs.

use nalgebra::{SMatrix, SVector, Vector2};

use crate::beam::{combine, ElementVector, HermiteElement, HermiteShape};
use crate::error::{Error, Result};
use crate::interaction::box_distance;
use crate::interaction::element_bounds;
use crate::quadrature::GaussRule;

pub type PairVector = SVector<f64, 16>;
pub type PairMatrix = SMatrix<f64, 16, 16>;

const PROJECTION_SEEDS: usize = 5;
const PROJECTION_MAX_ITER: usize = 50;
const FALLBACK_SAMPLES: usize = 200;
/// Relative size of `|f'|` below which a projection counts as orthogonal.
const ORTHOGONALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactLaw {
    /// Line penalty parameter.
    pub penalty: f64,
    /// Gap at which the regularized law starts.
    pub gap_reg: f64,
}

impl ContactLaw {
    pub fn validate(&self) -> Result<()> {
        if !(self.penalty > 0.0) {
            return Err(Error::config("contact.penalty", "must be positive"));
        }
        if !(self.gap_reg > 0.0) {
            return Err(Error::config("contact.gap_reg", "must be positive"));
        }
        Ok(())
    }

    /// Energy density per unit slave length and its first two derivatives in `g`.
    pub fn energy_density(&self, g: f64) -> (f64, f64, f64) {
        let eps = self.penalty;
        let gb = self.gap_reg;
        if g >= gb {
            (0.0, 0.0, 0.0)
        } else if g >= 0.0 {
            let s = gb - g;
            (eps * s * s * s / (6.0 * gb), -eps * s * s / (2.0 * gb), eps * s / gb)
        } else {
            (
                eps * gb * gb / 6.0 - 0.5 * eps * gb * g + 0.5 * eps * g * g,
                -0.5 * eps * gb + eps * g,
                eps,
            )
        }
    }
}

/// Contact pressure `p(g)` (force per length) and `dp/dg`.
pub fn penalty_pressure(g: f64, law: &ContactLaw) -> (f64, f64) {
    let (_, d1, d2) = law.energy_density(g);
    (-d1, -d2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactQuadrature {
    pub n_segments: usize,
    pub n_gauss_points: usize,
}

impl ContactQuadrature {
    pub fn rule(&self) -> GaussRule {
        GaussRule::segmented(self.n_segments, self.n_gauss_points)
    }
}

/// Closest point on the master centerline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub element: usize,
    pub xi: f64,
    pub point: Vector2<f64>,
    pub distance: f64,
    /// Whether the orthogonality condition holds (as opposed to a clamped end).
    pub orthogonal: bool,
    /// Set when the local Newton failed and dense sampling was used.
    pub fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSample {
    pub slave_element: usize,
    pub slave_xi: f64,
    pub master_element: usize,
    pub master_xi: f64,
    pub gap: f64,
    /// Midpoint between the slave point and its projection.
    pub midpoint: Vector2<f64>,
    pub fallback: bool,
}

fn master_eval(element: &HermiteElement, q: &ElementVector, xi: f64) -> (Vector2<f64>, Vector2<f64>, Vector2<f64>) {
    let (v, d, dd) = HermiteShape::parametric(xi, element.reference_length);
    (combine(&v, q), combine(&d, q), combine(&dd, q))
}

/// Local minimization of `0.5 |p - r(xi)|^2` on one element from one seed.
fn local_newton(point: &Vector2<f64>, element: &HermiteElement, q: &ElementVector, seed: f64) -> Option<f64> {
    let mut xi = seed;
    for _ in 0..PROJECTION_MAX_ITER {
        let (r, r_xi, r_xixi) = master_eval(element, q, xi);
        let x = point - r;
        let f1 = -x.dot(&r_xi);
        let f2 = r_xi.norm_squared() - x.dot(&r_xixi);
        let scale = x.norm() * r_xi.norm();
        if f1.abs() <= ORTHOGONALITY_TOL * scale || scale == 0.0 {
            return Some(xi);
        }
        let step = if f2 > 0.0 { -f1 / f2 } else { -f1.signum() * 0.25 };
        let next = (xi + step).clamp(-1.0, 1.0);
        if next == xi {
            // pinned at an end with the gradient pointing outward
            return Some(xi);
        }
        if (next - xi).abs() < 1e-15 {
            return Some(next);
        }
        xi = next;
    }
    None
}

fn golden_section(point: &Vector2<f64>, element: &HermiteElement, q: &ElementVector, lo: f64, hi: f64) -> f64 {
    let f = |xi: f64| (point - master_eval(element, q, xi).0).norm_squared();
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn candidate(point: &Vector2<f64>, element_index: usize, element: &HermiteElement, q: &ElementVector, xi: f64, fallback: bool) -> Projection {
    let (r, r_xi, _) = master_eval(element, q, xi);
    let x = point - r;
    let orthogonal = x.dot(&r_xi).abs() <= 1e-8 * x.norm() * r_xi.norm() || x.norm() == 0.0;
    Projection {
        element: element_index,
        xi,
        point: r,
        distance: x.norm(),
        orthogonal,
        fallback,
    }
}

fn project_on_element(point: &Vector2<f64>, index: usize, element: &HermiteElement, q: &ElementVector) -> Projection {
    let mut best: Option<Projection> = None;
    let mut any_converged = false;
    for s in 0..PROJECTION_SEEDS {
        let seed = -1.0 + 2.0 * s as f64 / (PROJECTION_SEEDS - 1) as f64;
        if let Some(xi) = local_newton(point, element, q, seed) {
            any_converged = true;
            let c = candidate(point, index, element, q, xi, false);
            if best.is_none_or(|b| c.distance < b.distance) {
                best = Some(c);
            }
        }
    }
    if any_converged {
        return best.expect("converged candidate");
    }
    let mut best_xi = -1.0;
    let mut best_d = f64::INFINITY;
    for k in 0..FALLBACK_SAMPLES {
        let xi = -1.0 + 2.0 * k as f64 / (FALLBACK_SAMPLES - 1) as f64;
        let d = (point - master_eval(element, q, xi).0).norm_squared();
        if d < best_d {
            best_d = d;
            best_xi = xi;
        }
    }
    let h = 2.0 / (FALLBACK_SAMPLES - 1) as f64;
    let xi = golden_section(point, element, q, (best_xi - h).max(-1.0), (best_xi + h).min(1.0));
    log::debug!("closest point projection fell back to sampling on element {index}");
    candidate(point, index, element, q, xi, true)
}

/// Global closest point on the master centerline. Elements are visited in
/// order of their bounding-box distance and pruned once no box can beat
/// the best distance found. Elements whose box lies farther than
/// `max_distance` are skipped, and `None` is returned if nothing is left.
pub fn closest_point_projection(
    point: &Vector2<f64>,
    master: &[(HermiteElement, ElementVector)],
    max_distance: Option<f64>,
) -> Option<Projection> {
    let p_box = (*point, *point);
    let mut order: Vec<(f64, usize)> = master
        .iter()
        .enumerate()
        .map(|(i, (e, q))| (box_distance(&p_box, &element_bounds(e, q)), i))
        .filter(|(d, _)| max_distance.is_none_or(|m| *d <= m))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<Projection> = None;
    for (box_d, i) in order {
        if best.is_some_and(|b| box_d > b.distance) {
            break;
        }
        let (e, q) = &master[i];
        let c = project_on_element(point, i, e, q);
        if best.is_none_or(|b| c.distance < b.distance) {
            best = Some(c);
        }
    }
    best
}

/// Contribution of one active slave point, acting on the slave element and
/// the master element that holds the projection. DOFs are ordered slave
/// element first, then master element.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactContribution {
    pub slave_element: usize,
    pub master_element: usize,
    pub force: PairVector,
    pub stiffness: PairMatrix,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContactResponse {
    pub energy: f64,
    pub contributions: Vec<ContactContribution>,
    /// Samples of active points (gap below the regularization gap).
    pub samples: Vec<GapSample>,
    pub fallbacks: usize,
}

/// Distance `d` between a slave point and its projection, with gradient and
/// Hessian with respect to the 16 slave+master element DOFs.
fn distance_linearization(
    slave_shape: &[f64; 4],
    r1: &Vector2<f64>,
    master: &HermiteElement,
    q_master: &ElementVector,
    proj: &Projection,
) -> (f64, PairVector, PairMatrix) {
    let (v, d, dd) = HermiteShape::parametric(proj.xi, master.reference_length);
    let r2 = combine(&v, q_master);
    let r2_xi = combine(&d, q_master);
    let r2_xixi = combine(&dd, q_master);
    let x = r1 - r2;
    let dist = x.norm();

    // x_q: 2 x 16, x = S1 q_s - S2 q_m
    let mut xq = SMatrix::<f64, 2, 16>::zeros();
    for k in 0..4 {
        xq[(0, 2 * k)] = slave_shape[k];
        xq[(1, 2 * k + 1)] = slave_shape[k];
        xq[(0, 8 + 2 * k)] = -v[k];
        xq[(1, 8 + 2 * k + 1)] = -v[k];
    }
    let grad_phi = xq.transpose() * x;
    let mut hess_phi = xq.transpose() * xq;
    if proj.orthogonal && proj.xi > -1.0 && proj.xi < 1.0 {
        let f_xixi = r2_xi.norm_squared() - x.dot(&r2_xixi);
        if f_xixi > 0.0 {
            let mut f_qxi: PairVector = -(xq.transpose() * r2_xi);
            for k in 0..4 {
                f_qxi[8 + 2 * k] -= d[k] * x.x;
                f_qxi[8 + 2 * k + 1] -= d[k] * x.y;
            }
            hess_phi -= f_qxi * f_qxi.transpose() / f_xixi;
        }
    }
    let grad_d = grad_phi / dist;
    let hess_d = hess_phi / dist - grad_d * grad_d.transpose() / dist;
    (dist, grad_d, hess_d)
}

/// Slave quadrature point positions, shape weights, integration weights and
/// their element/local coordinates.
struct SlavePoint {
    element: usize,
    xi: f64,
    weight: f64,
    shape: [f64; 4],
    position: Vector2<f64>,
}

fn slave_points<'a>(slave: &'a [(HermiteElement, ElementVector)], rule: &'a GaussRule) -> impl Iterator<Item = SlavePoint> + 'a {
    slave.iter().enumerate().flat_map(move |(ie, (e, q))| {
        rule.points.iter().zip(&rule.weights).map(move |(&xi, &w)| {
            let shape = HermiteShape::at(xi, e.reference_length).value;
            SlavePoint {
                element: ie,
                xi,
                weight: w * 0.5 * e.reference_length,
                shape,
                position: combine(&shape, q),
            }
        })
    })
}

/// Penalty energy, generalized forces (energy gradients), tangent and
/// active gap samples.
pub fn contact_forces(
    slave: &[(HermiteElement, ElementVector)],
    master: &[(HermiteElement, ElementVector)],
    radii: (f64, f64),
    law: &ContactLaw,
    rule: &GaussRule,
) -> Result<ContactResponse> {
    let reach = radii.0 + radii.1 + law.gap_reg;
    let mut out = ContactResponse::default();
    for sp in slave_points(slave, rule) {
        let Some(proj) = closest_point_projection(&sp.position, master, Some(reach)) else {
            continue;
        };
        let gap = proj.distance - radii.0 - radii.1;
        if gap >= law.gap_reg {
            continue;
        }
        if proj.distance <= 0.0 {
            return Err(Error::Singularity { gap });
        }
        let (me, mq) = &master[proj.element];
        let (_, grad_d, hess_d) = distance_linearization(&sp.shape, &sp.position, me, mq, &proj);
        let (e, e1, e2) = law.energy_density(gap);
        out.energy += sp.weight * e;
        out.contributions.push(ContactContribution {
            slave_element: sp.element,
            master_element: proj.element,
            force: grad_d * (sp.weight * e1),
            stiffness: (grad_d * grad_d.transpose() * e2 + hess_d * e1) * sp.weight,
        });
        if proj.fallback {
            out.fallbacks += 1;
        }
        out.samples.push(GapSample {
            slave_element: sp.element,
            slave_xi: sp.xi,
            master_element: proj.element,
            master_xi: proj.xi,
            gap,
            midpoint: 0.5 * (sp.position + proj.point),
            fallback: proj.fallback,
        });
    }
    if !out.energy.is_finite() {
        return Err(Error::NonFinite {
            provider: "contact".into(),
            detail: "penalty energy".into(),
        });
    }
    Ok(out)
}

/// Gap at every slave quadrature point, active or not.
pub fn gap_samples(
    slave: &[(HermiteElement, ElementVector)],
    master: &[(HermiteElement, ElementVector)],
    radii: (f64, f64),
    rule: &GaussRule,
) -> Vec<GapSample> {
    slave_points(slave, rule)
        .filter_map(|sp| {
            closest_point_projection(&sp.position, master, None).map(|proj| GapSample {
                slave_element: sp.element,
                slave_xi: sp.xi,
                master_element: proj.element,
                master_xi: proj.xi,
                gap: proj.distance - radii.0 - radii.1,
                midpoint: 0.5 * (sp.position + proj.point),
                fallback: proj.fallback,
            })
        })
        .collect()
}
