use std::collections::BTreeMap;

use super::{DynamicsError, PhaseState, SimConfig};

/// One time step of the toy model.
pub trait Integrator: Send + Sync {
    fn name(&self) -> &'static str;

    fn step(&self, config: &SimConfig, state: &PhaseState) -> Result<PhaseState, DynamicsError>;
}

/// Classical RK4 on `(x, p)`, recovering `v` from `p` at every stage.
#[derive(Debug, Default, Clone, Copy)]
pub struct MomentumRk4;

impl MomentumRk4 {
    pub const NAME: &'static str = "rk4-momentum";
}

impl Integrator for MomentumRk4 {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn step(&self, config: &SimConfig, state: &PhaseState) -> Result<PhaseState, DynamicsError> {
        let dt = config.dt;
        let velocities = |p: [f64; 2], guess: [f64; 2]| -> Result<[f64; 2], DynamicsError> {
            Ok([
                config.invert_momentum(0, p[0], guess[0])?,
                config.invert_momentum(1, p[1], guess[1])?,
            ])
        };
        let shift = |base: [f64; 2], d: [f64; 2], h: f64| [base[0] + h * d[0], base[1] + h * d[1]];

        let (x0, p0) = (state.x, state.p);
        let v1 = state.v;
        let f1 = config.force(x0);

        let p2 = shift(p0, f1, dt / 2.0);
        let v2 = velocities(p2, v1)?;
        let x2 = shift(x0, v1, dt / 2.0);
        let f2 = config.force(x2);

        let p3 = shift(p0, f2, dt / 2.0);
        let v3 = velocities(p3, v2)?;
        let x3 = shift(x0, v2, dt / 2.0);
        let f3 = config.force(x3);

        let p4 = shift(p0, f3, dt);
        let v4 = velocities(p4, v3)?;
        let x4 = shift(x0, v3, dt);
        let f4 = config.force(x4);

        let combine = |base: [f64; 2], k: [[f64; 2]; 4]| {
            [0, 1].map(|i| base[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
        };
        let x = combine(x0, [v1, v2, v3, v4]);
        let p = combine(p0, [f1, f2, f3, f4]);
        let v = velocities(p, v4)?;
        Ok(PhaseState { x, p, v })
    }
}

/// Classical RK4 on `(x, v)` with masses frozen at `m0 + σ lambda0`.
/// Only valid for `lambda1 = 0`; serves as a reference integrator.
#[derive(Debug, Default, Clone, Copy)]
pub struct ConstantMassRk4;

impl ConstantMassRk4 {
    pub const NAME: &'static str = "rk4-constant-mass";
}

impl Integrator for ConstantMassRk4 {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn step(&self, config: &SimConfig, state: &PhaseState) -> Result<PhaseState, DynamicsError> {
        if config.lambda1 != 0.0 {
            return Err(DynamicsError::InvalidConfig(format!(
                "{} requires lambda1 = 0",
                Self::NAME
            )));
        }
        let dt = config.dt;
        let mass = [config.effective_mass(0, 0.0), config.effective_mass(1, 0.0)];
        for (block, &m) in mass.iter().enumerate() {
            if !(m > 0.0) {
                return Err(DynamicsError::NonpositiveMass { block, mass: m });
            }
        }
        let accel = |x: [f64; 2]| {
            let f = config.force(x);
            [f[0] / mass[0], f[1] / mass[1]]
        };
        let shift = |base: [f64; 2], d: [f64; 2], h: f64| [base[0] + h * d[0], base[1] + h * d[1]];

        let (x0, v0) = (state.x, state.v);
        let a1 = accel(x0);
        let v2 = shift(v0, a1, dt / 2.0);
        let a2 = accel(shift(x0, v0, dt / 2.0));
        let v3 = shift(v0, a2, dt / 2.0);
        let a3 = accel(shift(x0, v2, dt / 2.0));
        let v4 = shift(v0, a3, dt);
        let a4 = accel(shift(x0, v3, dt));

        let combine = |base: [f64; 2], k: [[f64; 2]; 4]| {
            [0, 1].map(|i| base[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
        };
        let x = combine(x0, [v0, v2, v3, v4]);
        let v = combine(v0, [a1, a2, a3, a4]);
        Ok(PhaseState {
            x,
            p: [mass[0] * v[0], mass[1] * v[1]],
            v,
        })
    }
}

/// Integrators selectable by name.
pub struct IntegratorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Integrator>>,
}

impl IntegratorRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(MomentumRk4));
        r.register(Box::new(ConstantMassRk4));
        r
    }

    pub fn register(&mut self, integrator: Box<dyn Integrator>) {
        self.entries.insert(integrator.name(), integrator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Integrator, DynamicsError> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| DynamicsError::UnknownIntegrator(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for IntegratorRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
