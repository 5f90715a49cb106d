//! Toy two-level hierarchical system: two blocks on a line, each made of two
//! classical spins, with a block mass that depends on the spin-spin product
//! and on the block velocity.
//!
//! ```text
//! H   = m1 v1²/2 + m2 v2²/2 + U(|x1 - x2|) + Λ(S1 S2)
//! m_i = m0 + λ(v_i²) s_a^i s_b^i,   λ(v²) = lambda0 + lambda1 v²
//! S_i = s_a^i + s_b^i
//! ```
//!
//! Because the mass depends on velocity, the kinetic part of `H` is read as
//! the kinetic term of a Lagrangian `L = Σ m_i(v_i) v_i²/2 - U - Λ`. The
//! equations of motion are integrated in the canonical momentum
//!
//! ```text
//! p_i = ∂L/∂v_i = m0 v_i + σ_i (lambda0 v_i + 2 lambda1 v_i³),   σ_i = s_a^i s_b^i
//! ```
//!
//! with `dp_i/dt = -∂U/∂x_i`; velocities are recovered from momenta by a
//! safeguarded Newton iteration. The value of `H` itself is reported as
//! `E_total` and is conserved when `lambda1 = 0`. Spins are static
//! projections `±1/2`, so `Λ` only shifts the energy.

mod integrator;
mod sweep;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use integrator::{ConstantMassRk4, Integrator, IntegratorRegistry, MomentumRk4};
pub use sweep::{linspace, run_sweep, SweepParam, SweepRun, SweepSpec};

/// Newton tolerance on the velocity update, relative to `max(1, |v|)`.
pub const NEWTON_TOL: f64 = 1e-13;
pub const NEWTON_MAX_ITER: usize = 50;
/// Upper bound on simulated time `dt * steps`.
pub const MAX_SIM_TIME: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("NonpositiveMass: effective mass of block {block} is {mass}")]
    NonpositiveMass { block: usize, mass: f64 },
    #[error("MomentumInversionFailed: no velocity for momentum {momentum} of block {block}")]
    MomentumInversionFailed { block: usize, momentum: f64 },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("UnknownIntegrator: `{0}`")]
    UnknownIntegrator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PositionPotential {
    #[default]
    None,
    /// `U(r) = k r² / 2`
    Harmonic { k: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpinPotential {
    #[default]
    None,
    /// `Λ = kappa S1 S2`
    Linear { kappa: f64 },
}

fn default_integrator() -> String {
    MomentumRk4::NAME.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub m0: f64,
    /// Spin projections `[[s_a^1, s_b^1], [s_a^2, s_b^2]]`, each `±0.5`.
    pub spins: [[f64; 2]; 2],
    pub lambda0: f64,
    pub lambda1: f64,
    #[serde(default)]
    pub potential_u: PositionPotential,
    #[serde(default)]
    pub potential_lambda: SpinPotential,
    pub x_init: [f64; 2],
    pub v_init: [f64; 2],
    pub dt: f64,
    pub steps: u64,
    #[serde(default = "default_integrator")]
    pub integrator: String,
}

impl SimConfig {
    /// Harmonic two-body benchmark: `m0 = 1`, `k = 1`, no velocity coupling.
    pub fn harmonic_benchmark() -> Self {
        Self {
            m0: 1.0,
            spins: [[0.5, 0.5], [0.5, 0.5]],
            lambda0: 0.0,
            lambda1: 0.0,
            potential_u: PositionPotential::Harmonic { k: 1.0 },
            potential_lambda: SpinPotential::None,
            x_init: [0.5, -0.5],
            v_init: [0.0, 0.0],
            dt: 1e-4,
            steps: 50_000,
            integrator: default_integrator(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DynamicsError> {
        let cfg: SimConfig =
            serde_json::from_str(text).map_err(|e| DynamicsError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: String| Err(DynamicsError::InvalidConfig(msg));
        if !(self.m0 > 0.0 && self.m0.is_finite()) {
            return bad(format!("m0 must be positive, got {}", self.m0));
        }
        for s in self.spins.iter().flatten() {
            if s.abs() != 0.5 {
                return bad(format!("spin projections must be +-0.5, got {s}"));
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if self.dt * self.steps as f64 >= MAX_SIM_TIME {
            return bad(format!("dt * steps must stay below {MAX_SIM_TIME}"));
        }
        let finite = [self.lambda0, self.lambda1]
            .iter()
            .chain(&self.x_init)
            .chain(&self.v_init)
            .all(|v| v.is_finite());
        if !finite {
            return bad("non-finite coupling or initial condition".into());
        }
        for block in 0..2 {
            self.checked_mass(block, self.v_init[block])?;
        }
        Ok(())
    }

    /// `σ_i = s_a^i s_b^i`
    pub fn spin_product(&self, block: usize) -> f64 {
        self.spins[block][0] * self.spins[block][1]
    }

    pub fn block_spin(&self, block: usize) -> f64 {
        self.spins[block][0] + self.spins[block][1]
    }

    pub fn coupling(&self, v: f64) -> f64 {
        self.lambda0 + self.lambda1 * v * v
    }

    pub fn effective_mass(&self, block: usize, v: f64) -> f64 {
        self.m0 + self.coupling(v) * self.spin_product(block)
    }

    fn checked_mass(&self, block: usize, v: f64) -> Result<f64, DynamicsError> {
        let mass = self.effective_mass(block, v);
        if mass > 0.0 {
            Ok(mass)
        } else {
            Err(DynamicsError::NonpositiveMass { block, mass })
        }
    }

    /// Canonical momentum `∂L/∂v` of one block.
    pub fn momentum(&self, block: usize, v: f64) -> f64 {
        let sigma = self.spin_product(block);
        self.m0 * v + sigma * (self.lambda0 * v + 2.0 * self.lambda1 * v * v * v)
    }

    /// `dp/dv`; the momentum map is invertible where this stays positive.
    pub fn momentum_slope(&self, block: usize, v: f64) -> f64 {
        let sigma = self.spin_product(block);
        self.m0 + sigma * (self.lambda0 + 6.0 * self.lambda1 * v * v)
    }

    /// Velocity on the branch through `v = 0` whose momentum is `p`.
    ///
    /// Newton's method started from `guess`, falling back to bisection
    /// whenever a step would leave the current bracket.
    pub fn invert_momentum(&self, block: usize, p: f64, guess: f64) -> Result<f64, DynamicsError> {
        let sigma = self.spin_product(block);
        let a = self.m0 + sigma * self.lambda0;
        let b = 2.0 * sigma * self.lambda1;
        if !(a > 0.0) {
            return Err(DynamicsError::NonpositiveMass { block, mass: a });
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        let fail = || DynamicsError::MomentumInversionFailed { block, momentum: p };
        if !p.is_finite() {
            return Err(fail());
        }
        // p(v) is odd: solve a w + b w^3 = |p| for w > 0
        let sign = p.signum();
        let target = p.abs();
        let mut lo = 0.0;
        let mut hi = if b >= 0.0 {
            target / a
        } else {
            let w_turn = (a / (-3.0 * b)).sqrt();
            if a * w_turn + b * w_turn.powi(3) < target {
                return Err(fail());
            }
            w_turn
        };
        let start = if guess * sign > 0.0 { guess * sign } else { target / a };
        let mut w = start.clamp(lo, hi);
        for _ in 0..NEWTON_MAX_ITER {
            let f = a * w + b * w * w * w - target;
            if f == 0.0 {
                return Ok(sign * w);
            }
            if f > 0.0 {
                hi = w;
            } else {
                lo = w;
            }
            let slope = a + 3.0 * b * w * w;
            let mut next = w - f / slope;
            if !(slope > 0.0) || !(lo..=hi).contains(&next) {
                next = 0.5 * (lo + hi);
            }
            if (next - w).abs() <= NEWTON_TOL * next.abs().max(1.0) {
                return Ok(sign * next);
            }
            w = next;
        }
        Err(fail())
    }

    /// `-∂U/∂x_i` for both blocks.
    pub fn force(&self, x: [f64; 2]) -> [f64; 2] {
        match self.potential_u {
            PositionPotential::None => [0.0, 0.0],
            PositionPotential::Harmonic { k } => {
                let f = -k * (x[0] - x[1]);
                [f, -f]
            }
        }
    }

    pub fn potential_energy(&self, x: [f64; 2]) -> f64 {
        let u = match self.potential_u {
            PositionPotential::None => 0.0,
            PositionPotential::Harmonic { k } => {
                let r = (x[0] - x[1]).abs();
                0.5 * k * r * r
            }
        };
        let spin = match self.potential_lambda {
            SpinPotential::None => 0.0,
            SpinPotential::Linear { kappa } => kappa * self.block_spin(0) * self.block_spin(1),
        };
        u + spin
    }

    pub fn initial_state(&self) -> Result<PhaseState, DynamicsError> {
        PhaseState::from_velocities(self, self.x_init, self.v_init)
    }
}

/// `Σ m_i(v_i) v_i²/2 + U(|x1-x2|) + Λ(S1 S2)`.
pub fn energy(config: &SimConfig, x: [f64; 2], v: [f64; 2]) -> Result<f64, DynamicsError> {
    let mut kinetic = 0.0;
    for block in 0..2 {
        kinetic += 0.5 * config.checked_mass(block, v[block])? * v[block] * v[block];
    }
    Ok(kinetic + config.potential_energy(x))
}

/// Positions, canonical momenta and the matching velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: [f64; 2],
    pub p: [f64; 2],
    pub v: [f64; 2],
}

impl PhaseState {
    pub fn from_velocities(config: &SimConfig, x: [f64; 2], v: [f64; 2]) -> Result<Self, DynamicsError> {
        for (block, &vi) in v.iter().enumerate() {
            config.checked_mass(block, vi)?;
        }
        Ok(Self {
            x,
            p: [config.momentum(0, v[0]), config.momentum(1, v[1])],
            v,
        })
    }

    /// Same positions, velocities and momenta negated.
    pub fn reversed(&self) -> Self {
        Self {
            x: self.x,
            p: [-self.p[0], -self.p[1]],
            v: [-self.v[0], -self.v[1]],
        }
    }
}

/// Advances one `dt` with the integrator named in the config.
pub fn step(config: &SimConfig, state: &PhaseState) -> Result<PhaseState, DynamicsError> {
    let registry = IntegratorRegistry::with_builtins();
    let integrator = registry.get(&config.integrator)?;
    checked_step(integrator, config, state)
}

fn checked_step(
    integrator: &dyn Integrator,
    config: &SimConfig,
    state: &PhaseState,
) -> Result<PhaseState, DynamicsError> {
    let next = integrator.step(config, state)?;
    for block in 0..2 {
        config.checked_mass(block, next.v[block])?;
    }
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: [f64; 2],
    pub v: [f64; 2],
    pub m_eff: [f64; 2],
    pub e_total: f64,
}

pub const CSV_HEADER: &str = "t,x1,x2,v1,v2,m1_eff,m2_eff,E_total";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    fn record(&mut self, config: &SimConfig, index: u64, state: &PhaseState) -> Result<(), DynamicsError> {
        let e_total = energy(config, state.x, state.v)?;
        self.samples.push(Sample {
            t: index as f64 * config.dt,
            x: state.x,
            v: state.v,
            m_eff: [
                config.effective_mass(0, state.v[0]),
                config.effective_mass(1, state.v[1]),
            ],
            e_total,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `max |E(t) - E(0)| / |E(0)|`, or the absolute drift when `E(0) = 0`.
    pub fn max_relative_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let e0 = first.e_total;
        let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
        self.samples
            .iter()
            .map(|s| (s.e_total - e0).abs() / scale)
            .fold(0.0, f64::max)
    }

    /// CSV with 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t, s.x[0], s.x[1], s.v[0], s.v[1], s.m_eff[0], s.m_eff[1], s.e_total
            )?;
        }
        Ok(())
    }
}

/// A run that stopped early; `partial` holds every sample taken.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("run aborted after {} sample(s): {source}", partial.len())]
pub struct RunAborted {
    pub partial: Trajectory,
    pub source: DynamicsError,
}

/// Integrates `config.steps` steps, sampling every step.
pub fn run(config: &SimConfig) -> Result<Trajectory, RunAborted> {
    let abort = |partial: Trajectory, source| RunAborted { partial, source };
    let mut traj = Trajectory::default();
    if let Err(e) = config.validate() {
        return Err(abort(traj, e));
    }
    let registry = IntegratorRegistry::with_builtins();
    let integrator = match registry.get(&config.integrator) {
        Ok(i) => i,
        Err(e) => return Err(abort(traj, e)),
    };
    let mut state = match config.initial_state() {
        Ok(s) => s,
        Err(e) => return Err(abort(traj, e)),
    };
    if let Err(e) = traj.record(config, 0, &state) {
        return Err(abort(traj, e));
    }
    for i in 1..=config.steps {
        state = match checked_step(integrator, config, &state) {
            Ok(s) => s,
            Err(e) => return Err(abort(traj, e)),
        };
        if let Err(e) = traj.record(config, i, &state) {
            return Err(abort(traj, e));
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> SimConfig {
        SimConfig {
            potential_u: PositionPotential::None,
            x_init: [0.0, 1.0],
            v_init: [0.3, -1.7],
            steps: 10,
            dt: 0.01,
            ..SimConfig::harmonic_benchmark()
        }
    }

    #[test]
    fn energy_examples() {
        let cfg = free();
        assert_eq!(energy(&cfg, [0.0, 0.0], [0.0, 0.0]).unwrap(), 0.0);

        let plain = SimConfig {
            spins: [[0.5, -0.5], [-0.5, -0.5]],
            potential_u: PositionPotential::Harmonic { k: 2.0 },
            potential_lambda: SpinPotential::Linear { kappa: 0.5 },
            ..cfg.clone()
        };
        let e = energy(&plain, [1.0, 0.0], [1.0, 2.0]).unwrap();
        // 1·(1+4)/2 + 2·1/2 + 0.5·0·(-1)
        assert!((e - 3.5).abs() < 1e-15);

        let coupled = SimConfig {
            lambda0: 0.4,
            ..cfg
        };
        assert!((energy(&coupled, [0.0, 0.0], [2.0, 0.0]).unwrap() - 2.2).abs() < 1e-14);
    }

    #[test]
    fn energy_rejects_nonpositive_mass() {
        let cfg = SimConfig {
            lambda0: -8.0,
            ..free()
        };
        assert!(matches!(
            energy(&cfg, [0.0, 0.0], [1.0, 0.0]),
            Err(DynamicsError::NonpositiveMass { block: 0, .. })
        ));
    }

    #[test]
    fn free_motion_is_linear() {
        let cfg = free();
        let s0 = cfg.initial_state().unwrap();
        let s1 = step(&cfg, &s0).unwrap();
        for b in 0..2 {
            assert!((s1.x[b] - (s0.x[b] + s0.v[b] * cfg.dt)).abs() <= 1e-15);
            assert_eq!(s1.v[b], s0.v[b]);
        }
    }

    #[test]
    fn zero_steps_gives_initial_sample() {
        let cfg = SimConfig { steps: 0, ..free() };
        let t = run(&cfg).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.samples[0].t, 0.0);
        assert_eq!(t.samples[0].x, cfg.x_init);
    }

    #[test]
    fn inversion_round_trip_and_failures() {
        let cfg = SimConfig {
            lambda0: 0.3,
            lambda1: 0.2,
            spins: [[0.5, 0.5], [0.5, -0.5]],
            ..free()
        };
        for &v in &[-7.5, -1.0, -1e-9, 0.0, 0.25, 3.0, 9.99] {
            for block in 0..2 {
                if cfg.momentum_slope(block, v) <= 0.0 {
                    // past the turning point of p(v), off the physical branch
                    continue;
                }
                let p = cfg.momentum(block, v);
                let back = cfg.invert_momentum(block, p, 0.0).unwrap();
                assert!((back - v).abs() < 1e-12, "{v} -> {back}");
            }
        }
        // block 1 has σ = -1/4: p(v) turns over, large momenta are unreachable
        assert!(matches!(
            cfg.invert_momentum(1, 1e6, 0.0),
            Err(DynamicsError::MomentumInversionFailed { block: 1, .. })
        ));
        let heavy = SimConfig {
            lambda0: -5.0,
            ..cfg
        };
        assert!(matches!(
            heavy.invert_momentum(0, 1.0, 0.0),
            Err(DynamicsError::NonpositiveMass { .. })
        ));
    }

    #[test]
    fn run_aborts_with_partial_trajectory() {
        // σ = -1/4 with lambda1 > 0: mass m0 - (v²)/4·lambda1 hits zero as the
        // spring accelerates the block
        let cfg = SimConfig {
            spins: [[0.5, -0.5], [0.5, -0.5]],
            lambda1: 1.0,
            potential_u: PositionPotential::Harmonic { k: 50.0 },
            x_init: [1.0, -1.0],
            dt: 1e-3,
            steps: 5_000,
            ..SimConfig::harmonic_benchmark()
        };
        let err = run(&cfg).unwrap_err();
        assert!(!err.partial.is_empty());
        assert!(matches!(
            err.source,
            DynamicsError::NonpositiveMass { .. } | DynamicsError::MomentumInversionFailed { .. }
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = free();
        cfg.spins[0][1] = 0.3;
        assert!(matches!(cfg.validate(), Err(DynamicsError::InvalidConfig(_))));
        let cfg = SimConfig { dt: 0.0, ..free() };
        assert!(cfg.validate().is_err());
        let cfg = SimConfig {
            dt: 1.0,
            steps: 1_000_000_000,
            ..free()
        };
        assert!(cfg.validate().is_err());
        let cfg = SimConfig {
            integrator: "leapfrog".into(),
            ..free()
        };
        assert_eq!(
            run(&cfg).unwrap_err().source,
            DynamicsError::UnknownIntegrator("leapfrog".into())
        );
    }

    #[test]
    fn csv_layout() {
        let t = run(&SimConfig { steps: 2, ..free() }).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        let fields: Vec<f64> = lines[2].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[1], t.samples[1].x[0]);
        assert_eq!(fields[7], t.samples[1].e_total);
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = SimConfig::harmonic_benchmark();
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"kind\":\"harmonic\""));
        assert_eq!(SimConfig::from_json(&text).unwrap(), cfg);
    }
}
