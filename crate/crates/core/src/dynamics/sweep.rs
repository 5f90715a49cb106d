//! Parameter sweeps over one scalar of [`SimConfig`].

use std::fmt;
use std::str::FromStr;

use super::{run, RunAborted, SimConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Lambda0,
    Lambda1,
    M0,
    Dt,
}

impl SweepParam {
    fn apply(self, config: &mut SimConfig, value: f64) {
        match self {
            SweepParam::Lambda0 => config.lambda0 = value,
            SweepParam::Lambda1 => config.lambda1 = value,
            SweepParam::M0 => config.m0 = value,
            SweepParam::Dt => config.dt = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Lambda0 => "lambda0",
            SweepParam::Lambda1 => "lambda1",
            SweepParam::M0 => "m0",
            SweepParam::Dt => "dt",
        })
    }
}

/// `<param>=<start>:<end>:<count>`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("expected <param>=<a>:<b>:<n>, got `{s}`"))?;
        let param = match name.trim() {
            "lambda0" => SweepParam::Lambda0,
            "lambda1" => SweepParam::Lambda1,
            "m0" => SweepParam::M0,
            "dt" => SweepParam::Dt,
            other => return Err(format!("cannot sweep `{other}`")),
        };
        let parts: Vec<&str> = range.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected <a>:<b>:<n>, got `{range}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let count: usize = n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?;
        if count == 0 {
            return Err("sweep needs at least one point".into());
        }
        Ok(SweepSpec {
            param,
            start: num(a)?,
            end: num(b)?,
            count,
        })
    }
}

/// `count` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub struct SweepRun {
    pub value: f64,
    pub config: SimConfig,
    pub outcome: Result<Trajectory, RunAborted>,
}

impl SweepRun {
    pub fn trajectory(&self) -> &Trajectory {
        match &self.outcome {
            Ok(t) => t,
            Err(e) => &e.partial,
        }
    }
}

/// Runs every grid point. Runs are independent and execute on scoped
/// threads.
pub fn run_sweep(base: &SimConfig, spec: &SweepSpec) -> Vec<SweepRun> {
    let configs: Vec<(f64, SimConfig)> = linspace(spec.start, spec.end, spec.count)
        .into_iter()
        .map(|value| {
            let mut c = base.clone();
            spec.param.apply(&mut c, value);
            (value, c)
        })
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .into_iter()
            .map(|(value, config)| {
                scope.spawn(move || {
                    let outcome = run(&config);
                    SweepRun {
                        value,
                        config,
                        outcome,
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}
