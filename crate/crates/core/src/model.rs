//! Fiber meshes, degree-of-freedom bookkeeping, supports, global assembly
//! and reaction recovery.
//!
//! Global DOFs are interleaved by node so that the two fibers' matching
//! nodes sit next to each other: index `(node * n_fibers + fiber) * 4 + c`
//! with `c` in `x, y, t_x, t_y`. This keeps the tangent banded when the
//! interaction is short-ranged.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector, Vector2};

use crate::beam::{element_energy_force_tangent, ElementVector, HermiteElement, INTERNAL_FORCE_GAUSS_POINTS};
use crate::contact::{contact_forces, gap_samples, ContactLaw, GapSample};
use crate::error::{Error, Result};
use crate::interaction::{integrate_pair, interaction_pair_schedule, ElementSamples, InteractionLaw};
use crate::quadrature::GaussRule;

pub const DOFS_PER_NODE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct FiberMesh {
    pub length: f64,
    pub radius: f64,
    pub youngs_modulus: f64,
    /// Stored for completeness; the shear-rigid beam does not use it.
    pub poisson_ratio: f64,
    pub n_elements: usize,
    /// Reference (position, tangent) per node.
    pub reference_nodes: Vec<(Vector2<f64>, Vector2<f64>)>,
}

impl FiberMesh {
    /// Straight fiber along `+y` starting at `origin`.
    pub fn straight(
        length: f64,
        radius: f64,
        youngs_modulus: f64,
        poisson_ratio: f64,
        n_elements: usize,
        origin: Vector2<f64>,
    ) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::config("fiber.length", "must be positive"));
        }
        if !(radius > 0.0) {
            return Err(Error::config("fiber.radius", "must be positive"));
        }
        if !(youngs_modulus > 0.0) {
            return Err(Error::config("fiber.youngs_modulus", "must be positive"));
        }
        if n_elements == 0 {
            return Err(Error::config("fiber.n_elements", "must be at least 1"));
        }
        let h = length / n_elements as f64;
        let reference_nodes = (0..=n_elements)
            .map(|k| (origin + Vector2::new(0.0, k as f64 * h), Vector2::new(0.0, 1.0)))
            .collect();
        Ok(FiberMesh {
            length,
            radius,
            youngs_modulus,
            poisson_ratio,
            n_elements,
            reference_nodes,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elements + 1
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn second_moment(&self) -> f64 {
        PI * self.radius.powi(4) / 4.0
    }

    pub fn slenderness(&self) -> f64 {
        self.length / self.radius
    }

    pub fn element_length(&self) -> f64 {
        self.length / self.n_elements as f64
    }

    pub fn element(&self, e: usize) -> HermiteElement {
        HermiteElement {
            nodes: [e, e + 1],
            reference_length: self.element_length(),
            ea: self.youngs_modulus * self.area(),
            ei: self.youngs_modulus * self.second_moment(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    Free,
    Fixed,
    Driven,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub n_fibers: usize,
    pub nodes_per_fiber: usize,
    pub kinds: Vec<DofKind>,
    pub free: Vec<usize>,
    pub fixed: Vec<usize>,
    pub driven: Vec<usize>,
    /// Position of each DOF in `free`, if free.
    pub free_index: Vec<Option<usize>>,
}

impl DofMap {
    pub fn new(n_fibers: usize, nodes_per_fiber: usize) -> Self {
        let n = n_fibers * nodes_per_fiber * DOFS_PER_NODE;
        let mut map = DofMap {
            n_fibers,
            nodes_per_fiber,
            kinds: vec![DofKind::Free; n],
            free: Vec::new(),
            fixed: Vec::new(),
            driven: Vec::new(),
            free_index: Vec::new(),
        };
        map.rebuild();
        map
    }

    pub fn index(&self, fiber: usize, node: usize, component: usize) -> usize {
        (node * self.n_fibers + fiber) * DOFS_PER_NODE + component
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn set(&mut self, dof: usize, kind: DofKind) {
        self.kinds[dof] = kind;
        self.rebuild();
    }

    fn rebuild(&mut self) {
        self.free.clear();
        self.fixed.clear();
        self.driven.clear();
        self.free_index = vec![None; self.kinds.len()];
        for (i, k) in self.kinds.iter().enumerate() {
            match k {
                DofKind::Free => {
                    self.free_index[i] = Some(self.free.len());
                    self.free.push(i);
                }
                DofKind::Fixed => self.fixed.push(i),
                DofKind::Driven => self.driven.push(i),
            }
        }
    }

    pub fn element_dofs(&self, fiber: usize, element: usize) -> [usize; 8] {
        let mut out = [0; 8];
        for c in 0..4 {
            out[c] = self.index(fiber, element, c);
            out[4 + c] = self.index(fiber, element + 1, c);
        }
        out
    }

    /// Whether DOF `i` is a translational (position) component.
    pub fn is_translational(&self, i: usize) -> bool {
        i % DOFS_PER_NODE < 2
    }

    pub fn decompose(&self, i: usize) -> (usize, usize, usize) {
        let c = i % DOFS_PER_NODE;
        let slot = i / DOFS_PER_NODE;
        (slot % self.n_fibers, slot / self.n_fibers, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Contact,
    Separated,
    Unstable,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Contact => "contact",
            Branch::Separated => "separated",
            Branch::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contact" => Ok(Branch::Contact),
            "separated" => Ok(Branch::Separated),
            "unstable" => Ok(Branch::Unstable),
            other => Err(Error::config("branch", format!("unknown branch `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub q: DVector<f64>,
    pub u_x: f64,
    pub branch: Branch,
}

/// Everything an assembly pass accumulates.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub energy: f64,
    /// Gradient of the total potential with respect to all DOFs.
    pub gradient: DVector<f64>,
    pub stiffness: Option<DMatrix<f64>>,
    pub gap_samples: Vec<GapSample>,
    pub projection_fallbacks: usize,
}

impl Assembly {
    pub fn new(n: usize, with_tangent: bool) -> Self {
        Assembly {
            energy: 0.0,
            gradient: DVector::zeros(n),
            stiffness: with_tangent.then(|| DMatrix::zeros(n, n)),
            gap_samples: Vec::new(),
            projection_fallbacks: 0,
        }
    }

    pub fn scatter_vector<const N: usize>(&mut self, dofs: &[usize; N], f: &nalgebra::SVector<f64, N>) {
        for (a, &i) in dofs.iter().enumerate() {
            self.gradient[i] += f[a];
        }
    }

    pub fn scatter_matrix<const N: usize, const M: usize>(
        &mut self,
        rows: &[usize; N],
        cols: &[usize; M],
        k: &nalgebra::SMatrix<f64, N, M>,
    ) {
        if let Some(s) = self.stiffness.as_mut() {
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    s[(i, j)] += k[(a, b)];
                }
            }
        }
    }
}

/// Geometry of all elements of all fibers at the current DOF values.
pub struct Configuration<'a> {
    pub model: &'a Model,
    pub q: &'a DVector<f64>,
}

impl Configuration<'_> {
    pub fn element_vector(&self, fiber: usize, element: usize) -> ElementVector {
        let dofs = self.model.dofs.element_dofs(fiber, element);
        ElementVector::from_fn(|i, _| self.q[dofs[i]])
    }

    pub fn fiber_elements(&self, fiber: usize) -> Vec<(HermiteElement, ElementVector)> {
        let mesh = &self.model.fibers[fiber];
        (0..mesh.n_elements)
            .map(|e| (mesh.element(e), self.element_vector(fiber, e)))
            .collect()
    }
}

/// A contribution to the total potential.
pub trait ForceProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Adds energy, gradient and (if requested) Hessian to `out`.
    fn contribute(&self, config: &Configuration<'_>, out: &mut Assembly) -> Result<()>;
}

/// Internal elastic energy of one fiber.
#[derive(Debug, Clone)]
pub struct BeamProvider {
    pub fiber: usize,
    rule: GaussRule,
}

impl BeamProvider {
    pub fn new(fiber: usize) -> Self {
        BeamProvider {
            fiber,
            rule: GaussRule::legendre(INTERNAL_FORCE_GAUSS_POINTS),
        }
    }
}

impl ForceProvider for BeamProvider {
    fn name(&self) -> &str {
        "beam"
    }

    fn contribute(&self, config: &Configuration<'_>, out: &mut Assembly) -> Result<()> {
        let mesh = &config.model.fibers[self.fiber];
        for e in 0..mesh.n_elements {
            let element = mesh.element(e);
            let q = config.element_vector(self.fiber, e);
            let r = element_energy_force_tangent(&element, e, &q, &self.rule)?;
            let dofs = config.model.dofs.element_dofs(self.fiber, e);
            out.energy += r.energy;
            out.scatter_vector(&dofs, &r.force);
            out.scatter_matrix(&dofs, &dofs, &r.stiffness);
        }
        Ok(())
    }
}

/// SSIP interaction between fiber 0 and fiber 1.
#[derive(Debug, Clone)]
pub struct InteractionProvider {
    pub law: InteractionLaw,
    pub rule: GaussRule,
}

impl ForceProvider for InteractionProvider {
    fn name(&self) -> &str {
        self.law.name()
    }

    fn contribute(&self, config: &Configuration<'_>, out: &mut Assembly) -> Result<()> {
        let a = config.fiber_elements(0);
        let b = config.fiber_elements(1);
        let schedule = interaction_pair_schedule(&a, &b, &self.law);
        let samples_a: Vec<_> = a.iter().map(|(e, q)| ElementSamples::new(e, q, &self.rule)).collect();
        let samples_b: Vec<_> = b.iter().map(|(e, q)| ElementSamples::new(e, q, &self.rule)).collect();
        let dofs = &config.model.dofs;
        for (i, j) in schedule {
            let r = integrate_pair(&self.law, &samples_a[i], &samples_b[j])?;
            let da = dofs.element_dofs(0, i);
            let db = dofs.element_dofs(1, j);
            out.energy += r.energy;
            out.scatter_vector(&da, &r.force_a);
            out.scatter_vector(&db, &r.force_b);
            out.scatter_matrix(&da, &da, &r.k_aa);
            out.scatter_matrix(&da, &db, &r.k_ab);
            out.scatter_matrix(&db, &da, &r.k_ab.transpose());
            out.scatter_matrix(&db, &db, &r.k_bb);
        }
        Ok(())
    }
}

/// Penalty contact with fiber 0 as slave and fiber 1 as master.
#[derive(Debug, Clone)]
pub struct ContactProvider {
    pub law: ContactLaw,
    pub rule: GaussRule,
}

impl ForceProvider for ContactProvider {
    fn name(&self) -> &str {
        "contact"
    }

    fn contribute(&self, config: &Configuration<'_>, out: &mut Assembly) -> Result<()> {
        let slave = config.fiber_elements(0);
        let master = config.fiber_elements(1);
        let radii = (config.model.fibers[0].radius, config.model.fibers[1].radius);
        let r = contact_forces(&slave, &master, radii, &self.law, &self.rule)?;
        let dofs = &config.model.dofs;
        for c in &r.contributions {
            let ds = dofs.element_dofs(0, c.slave_element);
            let dm = dofs.element_dofs(1, c.master_element);
            let mut all = [0usize; 16];
            all[..8].copy_from_slice(&ds);
            all[8..].copy_from_slice(&dm);
            out.scatter_vector(&all, &c.force);
            out.scatter_matrix(&all, &all, &c.stiffness);
        }
        out.energy += r.energy;
        out.gap_samples.extend(r.samples);
        out.projection_fallbacks += r.fallbacks;
        Ok(())
    }
}

/// Dead load `value` on a single DOF, potential `-value * q[dof]`.
#[derive(Debug, Clone)]
pub struct PointLoad {
    pub dof: usize,
    pub value: f64,
}

impl ForceProvider for PointLoad {
    fn name(&self) -> &str {
        "point load"
    }

    fn contribute(&self, config: &Configuration<'_>, out: &mut Assembly) -> Result<()> {
        out.energy -= self.value * config.q[self.dof];
        out.gradient[self.dof] -= self.value;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportReaction {
    pub fiber: usize,
    pub node: usize,
    pub force: Vector2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionSet {
    pub supports: Vec<SupportReaction>,
    /// x-reaction at the top support of the right fiber.
    pub f_x_top: f64,
    /// x-reaction at the bottom support of the right fiber.
    pub f_x_bottom: f64,
    pub f_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Supports {
    /// Bottom endpoint pinned, top endpoint on a roller that slides along the fiber axis.
    #[default]
    PinRoller,
    /// Both endpoints pinned.
    PinPin,
}

pub struct Model {
    pub fibers: Vec<FiberMesh>,
    pub dofs: DofMap,
    pub providers: Vec<Box<dyn ForceProvider>>,
    /// Reference DOF values (straight, undeformed).
    pub reference: DVector<f64>,
    /// Fiber whose driven DOFs follow `u_x`, and the support nodes that carry
    /// the reported force.
    pub driven_fiber: usize,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("fibers", &self.fibers)
            .field("dofs", &self.dofs)
            .field("providers", &self.providers.iter().map(|p| p.name()).collect::<Vec<_>>())
            .finish()
    }
}

impl Model {
    /// Model with the given fibers, beam providers for each, no constraints.
    pub fn new(fibers: Vec<FiberMesh>) -> Result<Self> {
        let nodes = fibers.first().map(|f| f.n_nodes()).unwrap_or(0);
        if fibers.iter().any(|f| f.n_nodes() != nodes) {
            return Err(Error::config("fiber.n_elements", "all fibers must share the element count"));
        }
        let dofs = DofMap::new(fibers.len(), nodes);
        let mut reference = DVector::zeros(dofs.len());
        for (fi, mesh) in fibers.iter().enumerate() {
            for (n, (p, t)) in mesh.reference_nodes.iter().enumerate() {
                reference[dofs.index(fi, n, 0)] = p.x;
                reference[dofs.index(fi, n, 1)] = p.y;
                reference[dofs.index(fi, n, 2)] = t.x;
                reference[dofs.index(fi, n, 3)] = t.y;
            }
        }
        let providers: Vec<Box<dyn ForceProvider>> = (0..fibers.len())
            .map(|f| Box::new(BeamProvider::new(f)) as Box<dyn ForceProvider>)
            .collect();
        Ok(Model {
            fibers,
            dofs,
            providers,
            reference,
            driven_fiber: 0,
        })
    }

    pub fn add_provider(&mut self, provider: impl ForceProvider + 'static) {
        self.providers.push(Box::new(provider));
    }

    pub fn apply_supports(&mut self, fiber: usize, supports: Supports) {
        let last = self.fibers[fiber].n_elements;
        let d = &mut self.dofs;
        let fix = |d: &mut DofMap, node, c| {
            let i = d.index(fiber, node, c);
            d.set(i, DofKind::Fixed)
        };
        fix(d, 0, 0);
        fix(d, 0, 1);
        fix(d, last, 0);
        if supports == Supports::PinPin {
            fix(d, last, 1);
        }
    }

    /// Turns the x DOFs of both endpoints of `fiber` into driven DOFs.
    pub fn drive_endpoints(&mut self, fiber: usize) {
        let last = self.fibers[fiber].n_elements;
        for node in [0, last] {
            let i = self.dofs.index(fiber, node, 0);
            self.dofs.set(i, DofKind::Driven);
        }
        self.driven_fiber = fiber;
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.len()
    }

    /// State at prescribed displacement `u_x` with free DOFs from `q`.
    pub fn set_driven(&self, q: &mut DVector<f64>, u_x: f64) {
        for &i in &self.dofs.driven {
            q[i] = self.reference[i] + u_x;
        }
        for &i in &self.dofs.fixed {
            q[i] = self.reference[i];
        }
    }

    pub fn reference_state(&self, u_x: f64, branch: Branch) -> SystemState {
        let mut q = self.reference.clone();
        self.set_driven(&mut q, u_x);
        SystemState { q, u_x, branch }
    }

    /// Straight state with the whole driven fiber translated by `u_x`.
    pub fn translated_state(&self, u_x: f64, branch: Branch) -> SystemState {
        let mut q = self.reference.clone();
        let nodes = self.fibers[self.driven_fiber].n_nodes();
        for node in 0..nodes {
            q[self.dofs.index(self.driven_fiber, node, 0)] += u_x;
        }
        self.set_driven(&mut q, u_x);
        SystemState { q, u_x, branch }
    }

    pub fn assemble(&self, q: &DVector<f64>, with_tangent: bool) -> Result<Assembly> {
        let mut out = Assembly::new(self.n_dofs(), with_tangent);
        let config = Configuration { model: self, q };
        for p in &self.providers {
            p.contribute(&config, &mut out)?;
            if !out.energy.is_finite() || out.gradient.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    provider: p.name().to_string(),
                    detail: "assembled contribution".into(),
                });
            }
        }
        if let Some(k) = &out.stiffness {
            if k.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    provider: "assembly".into(),
                    detail: "tangent matrix".into(),
                });
            }
        }
        Ok(out)
    }

    /// Out-of-balance force on the free DOFs, `f_ext - f_int = -gradient`.
    pub fn residual(&self, assembly: &Assembly) -> DVector<f64> {
        DVector::from_iterator(self.dofs.free.len(), self.dofs.free.iter().map(|&i| -assembly.gradient[i]))
    }

    /// Derivative of the gradient with respect to the free DOFs (the
    /// negative derivative of the residual).
    pub fn tangent(&self, assembly: &Assembly) -> DMatrix<f64> {
        let k = assembly.stiffness.as_ref().expect("assembly without tangent");
        let free = &self.dofs.free;
        DMatrix::from_fn(free.len(), free.len(), |a, b| k[(free[a], free[b])])
    }

    pub fn extract_reactions(&self, assembly: &Assembly) -> ReactionSet {
        let mut supports: Vec<SupportReaction> = Vec::new();
        for &i in self.dofs.fixed.iter().chain(&self.dofs.driven) {
            let (fiber, node, c) = self.dofs.decompose(i);
            if c >= 2 {
                continue;
            }
            let entry = match supports.iter_mut().find(|s| s.fiber == fiber && s.node == node) {
                Some(s) => s,
                None => {
                    supports.push(SupportReaction {
                        fiber,
                        node,
                        force: Vector2::zeros(),
                    });
                    supports.last_mut().unwrap()
                }
            };
            entry.force[c] = assembly.gradient[i];
        }
        supports.sort_by_key(|s| (s.fiber, s.node));
        let df = self.driven_fiber;
        let last = self.fibers[df].n_elements;
        let fx = |node: usize| assembly.gradient[self.dofs.index(df, node, 0)];
        let (top, bottom) = (fx(last), fx(0));
        ReactionSet {
            supports,
            f_x_top: top,
            f_x_bottom: bottom,
            f_x: top + bottom,
        }
    }

    /// Largest relative error between the assembled free tangent and central
    /// differences of the free residual. Tangent DOFs are perturbed with a
    /// step scaled by the element length.
    pub fn verify_tangent(&self, q: &DVector<f64>, step: f64) -> Result<f64> {
        let base = self.assemble(q, true)?;
        let k = self.tangent(&base);
        let scale = k.amax().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for (col, &i) in self.dofs.free.iter().enumerate() {
            let h = step;
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[i] += h;
            qm[i] -= h;
            let rp = self.residual(&self.assemble(&qp, false)?);
            let rm = self.residual(&self.assemble(&qm, false)?);
            for row in 0..self.dofs.free.len() {
                let fd = -(rp[row] - rm[row]) / (2.0 * h);
                worst = worst.max((fd - k[(row, col)]).abs() / scale);
            }
        }
        Ok(worst)
    }

    /// Gap at the given slave quadrature rule between fibers 0 and 1.
    pub fn gap_field(&self, q: &DVector<f64>, rule: &GaussRule) -> Vec<GapSample> {
        let config = Configuration { model: self, q };
        let slave = config.fiber_elements(0);
        let master = config.fiber_elements(1);
        gap_samples(&slave, &master, (self.fibers[0].radius, self.fibers[1].radius), rule)
    }

    /// Nodal centerline positions of one fiber.
    pub fn positions(&self, q: &DVector<f64>, fiber: usize) -> Vec<Vector2<f64>> {
        (0..self.fibers[fiber].n_nodes())
            .map(|n| Vector2::new(q[self.dofs.index(fiber, n, 0)], q[self.dofs.index(fiber, n, 1)]))
            .collect()
    }
}

/// Geometry and physics of a two-fiber peeling setup.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFiberSetup {
    pub length: f64,
    pub radius: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub n_elements: usize,
    /// Initial inter-axis separation.
    pub separation: f64,
    pub supports: Supports,
    pub interaction: Option<(InteractionLaw, GaussRule)>,
    pub contact: Option<(ContactLaw, GaussRule)>,
}

/// Left fiber along `x = 0`, right fiber along `x = separation`, both from
/// `y = 0` to `y = length`. The right fiber's endpoints are driven in `x`.
pub fn build_two_fiber_model(setup: &TwoFiberSetup) -> Result<(Model, SystemState)> {
    if !(setup.separation > 0.0) {
        return Err(Error::config("geometry.separation", "must be positive"));
    }
    let fiber = |x: f64| {
        FiberMesh::straight(
            setup.length,
            setup.radius,
            setup.youngs_modulus,
            setup.poisson_ratio,
            setup.n_elements,
            Vector2::new(x, 0.0),
        )
    };
    let mut model = Model::new(vec![fiber(0.0)?, fiber(setup.separation)?])?;
    model.apply_supports(0, setup.supports);
    model.apply_supports(1, setup.supports);
    model.drive_endpoints(1);
    if let Some((law, rule)) = &setup.interaction {
        model.add_provider(InteractionProvider {
            law: *law,
            rule: rule.clone(),
        });
    }
    if let Some((law, rule)) = &setup.contact {
        law.validate()?;
        model.add_provider(ContactProvider {
            law: *law,
            rule: rule.clone(),
        });
    }
    let state = model.reference_state(0.0, Branch::Contact);
    Ok((model, state))
}

/// Single fiber along `x = 0` with the given supports. With `midpoint_driven`
/// the midpoint `x` DOF is prescribed instead of loaded.
pub fn build_single_fiber_model(mesh: FiberMesh, supports: Supports, midpoint_driven: bool) -> Result<(Model, usize)> {
    if !mesh.n_elements.is_multiple_of(2) {
        return Err(Error::config(
            "fiber.n_elements",
            "must be even so that the fiber has a midpoint node",
        ));
    }
    let mid = mesh.n_elements / 2;
    let mut model = Model::new(vec![mesh])?;
    model.apply_supports(0, supports);
    let dof = model.dofs.index(0, mid, 0);
    if midpoint_driven {
        model.dofs.set(dof, DofKind::Driven);
    }
    Ok((model, dof))
}
