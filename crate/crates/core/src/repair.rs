//! Symmetry breaking by removal of components and its repair by descending
//! one hierarchy level at a time.
//!
//! An organism with target irrep `T` is intact while the product of its
//! component irreps contains `T`. Removing components can break this. The
//! remainder then breaks down into the subcomponents of its components
//! (only one level per step) until their product contains `T` again or the
//! allowed depth is used up. Photoionization and recombination is the
//! two-level special case: remove one component, capture a fresh one.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rep_theory::{contains, decompose_product, IrrepLabel, IrrepSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("EmptyRemoval: removal action must name at least one component")]
    EmptyRemoval,
    #[error("IndexOutOfRange: component index {index} with {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("EmptyRemainder: every component was removed")]
    EmptyRemainder,
    #[error("NotBuildable: component `{0}` is not contained in the product of its subcomponents")]
    NotBuildable(String),
    #[error("IncompleteOrganism: product of component irreps does not contain the target {0}")]
    IncompleteOrganism(IrrepLabel),
    #[error("TooFewComponents: need at least 2 components, found {0}")]
    TooFewComponents(usize),
    #[error("Parse: {0}")]
    Parse(String),
}

/// A component and the parts it breaks into one level down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub name: String,
    pub irrep: IrrepLabel,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subcomponents: Vec<ComponentSpec>,
}

impl ComponentSpec {
    pub fn leaf(name: impl Into<String>, irrep: IrrepLabel) -> Self {
        Self {
            name: name.into(),
            irrep,
            subcomponents: Vec::new(),
        }
    }

    pub fn composite(name: impl Into<String>, irrep: IrrepLabel, subcomponents: Vec<ComponentSpec>) -> Self {
        Self {
            name: name.into(),
            irrep,
            subcomponents,
        }
    }

    /// Checks recursively that each composite is buildable from its parts.
    pub fn validate(&self) -> Result<(), RepairError> {
        if !self.subcomponents.is_empty() {
            let parts: Vec<IrrepLabel> = self.subcomponents.iter().map(|c| c.irrep).collect();
            let product = decompose_product(&parts).expect("non-empty");
            if contains(&product, self.irrep) == 0 {
                return Err(RepairError::NotBuildable(self.name.clone()));
            }
        }
        self.subcomponents.iter().try_for_each(ComponentSpec::validate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Organism {
    pub target_irrep: IrrepLabel,
    pub components: Vec<ComponentSpec>,
}

impl Organism {
    /// Builds an intact organism: components buildable, target contained.
    pub fn new(target_irrep: IrrepLabel, components: Vec<ComponentSpec>) -> Result<Self, RepairError> {
        let org = Self {
            target_irrep,
            components,
        };
        org.validate()?;
        Ok(org)
    }

    pub fn validate(&self) -> Result<(), RepairError> {
        if self.components.is_empty() {
            return Err(RepairError::EmptyRemainder);
        }
        self.components.iter().try_for_each(ComponentSpec::validate)?;
        if !product_contains(&self.components, self.target_irrep) {
            return Err(RepairError::IncompleteOrganism(self.target_irrep));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, RepairError> {
        let org: Organism = serde_json::from_str(text).map_err(|e| RepairError::Parse(e.to_string()))?;
        org.validate()?;
        Ok(org)
    }
}

fn irreps(components: &[ComponentSpec]) -> Vec<IrrepLabel> {
    components.iter().map(|c| c.irrep).collect()
}

fn product_of(components: &[ComponentSpec]) -> IrrepSum {
    decompose_product(&irreps(components)).unwrap_or_default()
}

fn product_contains(components: &[ComponentSpec], target: IrrepLabel) -> bool {
    contains(&product_of(components), target) > 0
}

/// Indices of the components cut off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalAction {
    removed: BTreeSet<usize>,
}

impl RemovalAction {
    pub fn new(indices: impl IntoIterator<Item = usize>, component_count: usize) -> Result<Self, RepairError> {
        let removed: BTreeSet<usize> = indices.into_iter().collect();
        if removed.is_empty() {
            return Err(RepairError::EmptyRemoval);
        }
        if let Some(&index) = removed.iter().find(|&&i| i >= component_count) {
            return Err(RepairError::IndexOutOfRange {
                index,
                len: component_count,
            });
        }
        Ok(Self { removed })
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.removed.iter().copied()
    }
}

/// What is left after a removal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remainder {
    pub target_irrep: IrrepLabel,
    pub components: Vec<ComponentSpec>,
    pub removed: Vec<ComponentSpec>,
    /// Whether the remaining product still contains the target.
    pub complete: bool,
}

impl Remainder {
    /// Adds a component captured from the environment.
    pub fn capture(&self, component: ComponentSpec) -> Remainder {
        let mut components = self.components.clone();
        components.push(component);
        Remainder {
            target_irrep: self.target_irrep,
            complete: product_contains(&components, self.target_irrep),
            components,
            removed: self.removed.clone(),
        }
    }
}

pub fn amputate(org: &Organism, gamma: &RemovalAction) -> Result<Remainder, RepairError> {
    let (removed, components): (Vec<_>, Vec<_>) = org
        .components
        .iter()
        .cloned()
        .enumerate()
        .partition(|(i, _)| gamma.removed.contains(i));
    if let Some(&index) = gamma.removed.iter().find(|&&i| i >= org.components.len()) {
        return Err(RepairError::IndexOutOfRange {
            index,
            len: org.components.len(),
        });
    }
    let components: Vec<ComponentSpec> = components.into_iter().map(|(_, c)| c).collect();
    if components.is_empty() {
        return Err(RepairError::EmptyRemainder);
    }
    Ok(Remainder {
        target_irrep: org.target_irrep,
        complete: product_contains(&components, org.target_irrep),
        components,
        removed: removed.into_iter().map(|(_, c)| c).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// The current product contains the target; the missing level is rebuilt.
    Rebuilt,
    /// `max_depth` descents were made without success.
    DepthExhausted,
    /// No remaining component has subcomponents.
    LeafLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CascadeStep {
    /// Descents made before this check; 0 is the remainder itself.
    pub level: u32,
    pub irreps: Vec<IrrepLabel>,
    pub target_multiplicity: u64,
    /// Components materialized by the descent that produced this level.
    pub materialized: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CascadeResult {
    pub feasible: bool,
    pub levels_descended: u32,
    pub steps: Vec<CascadeStep>,
    pub cost: u64,
    pub stop: StopReason,
    /// The component list at the final level; its product contains the
    /// target whenever `feasible` is true.
    #[serde(skip)]
    pub witness: Vec<ComponentSpec>,
}

impl CascadeResult {
    pub fn witness_irreps(&self) -> Vec<IrrepLabel> {
        irreps(&self.witness)
    }
}

impl fmt::Display for CascadeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            let irr: Vec<String> = step.irreps.iter().map(IrrepLabel::to_string).collect();
            write!(f, "level {}: product of [{}]", step.level, irr.join(", "))?;
            if !step.materialized.is_empty() {
                write!(f, " (materialized {})", step.materialized.join(", "))?;
            }
            writeln!(f, " contains target x{}", step.target_multiplicity)?;
        }
        match self.stop {
            StopReason::Rebuilt => write!(
                f,
                "rebuilt after {} descent(s), cost {}",
                self.levels_descended, self.cost
            ),
            StopReason::DepthExhausted => write!(
                f,
                "not repairable within {} level(s), cost {}",
                self.levels_descended, self.cost
            ),
            StopReason::LeafLevel => write!(
                f,
                "not repairable: leaf level reached after {} descent(s), cost {}",
                self.levels_descended, self.cost
            ),
        }
    }
}

/// Descends the remainder level by level until its product contains the
/// target. Each descent replaces every composite component by its direct
/// subcomponents; levels are never skipped.
pub fn repair(remainder: &Remainder, max_depth: u32) -> CascadeResult {
    let target = remainder.target_irrep;
    let mut current = remainder.components.clone();
    let mut steps = Vec::new();
    let mut cost = 0u64;
    let mut level = 0u32;
    let mut materialized = Vec::new();
    loop {
        let multiplicity = contains(&product_of(&current), target);
        steps.push(CascadeStep {
            level,
            irreps: irreps(&current),
            target_multiplicity: multiplicity,
            materialized: std::mem::take(&mut materialized),
        });
        let stop = if multiplicity > 0 {
            Some(StopReason::Rebuilt)
        } else if level >= max_depth {
            Some(StopReason::DepthExhausted)
        } else if current.iter().all(|c| c.subcomponents.is_empty()) {
            Some(StopReason::LeafLevel)
        } else {
            None
        };
        if let Some(stop) = stop {
            return CascadeResult {
                feasible: stop == StopReason::Rebuilt,
                levels_descended: level,
                steps,
                cost,
                stop,
                witness: current,
            };
        }
        let mut next = Vec::new();
        for c in current {
            if c.subcomponents.is_empty() {
                next.push(c);
            } else {
                cost += c.subcomponents.len() as u64;
                materialized.extend(c.subcomponents.iter().map(|s| s.name.clone()));
                next.extend(c.subcomponents);
            }
        }
        current = next;
        level += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IonizationOutcome {
    /// Whether the ion (electron removed) still contains the target.
    pub broken_complete: bool,
    /// Whether ion plus captured component contains the target.
    pub restored_complete: bool,
    pub removed: ComponentSpec,
    pub captured: ComponentSpec,
}

/// Removes the component at `electron` and captures `capture` (a fresh copy
/// of the removed component when `None`).
pub fn ionize_recombine(
    atom: &Organism,
    electron: usize,
    capture: Option<ComponentSpec>,
) -> Result<IonizationOutcome, RepairError> {
    if atom.components.len() < 2 {
        return Err(RepairError::TooFewComponents(atom.components.len()));
    }
    let gamma = RemovalAction::new([electron], atom.components.len())?;
    let ion = amputate(atom, &gamma)?;
    let removed = ion.removed[0].clone();
    let captured = capture.unwrap_or_else(|| ComponentSpec {
        name: format!("{}'", removed.name),
        ..removed.clone()
    });
    let restored = ion.capture(captured.clone());
    Ok(IonizationOutcome {
        broken_complete: ion.complete,
        restored_complete: restored.complete,
        removed,
        captured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(twice: u32) -> IrrepLabel {
        IrrepLabel::new(twice)
    }

    fn cells(n: usize, twice: u32) -> Vec<ComponentSpec> {
        (0..n).map(|i| ComponentSpec::leaf(format!("c{i}"), j(twice))).collect()
    }

    #[test]
    fn removal_guards() {
        assert_eq!(RemovalAction::new([], 3), Err(RepairError::EmptyRemoval));
        assert_eq!(
            RemovalAction::new([3], 3),
            Err(RepairError::IndexOutOfRange { index: 3, len: 3 })
        );
        let org = Organism::new(j(0), cells(2, 1)).unwrap();
        let all = RemovalAction::new([0, 1], 2).unwrap();
        assert_eq!(amputate(&org, &all), Err(RepairError::EmptyRemainder));
    }

    #[test]
    fn amputate_singlet_of_four() {
        let org = Organism::new(j(0), cells(4, 1)).unwrap();
        let rem = amputate(&org, &RemovalAction::new([1, 3], 4).unwrap()).unwrap();
        assert_eq!(rem.components.len(), 2);
        assert!(rem.complete);
        assert_eq!(rem.removed[0].name, "c1");
    }

    #[test]
    fn amputate_triplet_of_two() {
        let org = Organism::new(j(2), cells(2, 1)).unwrap();
        let rem = amputate(&org, &RemovalAction::new([0], 2).unwrap()).unwrap();
        assert_eq!(rem.components, vec![ComponentSpec::leaf("c1", j(1))]);
        assert!(!rem.complete);
    }

    #[test]
    fn organism_validation() {
        assert_eq!(
            Organism::new(j(4), cells(1, 1)),
            Err(RepairError::IncompleteOrganism(j(4)))
        );
        let bad = ComponentSpec::composite("x", j(4), cells(2, 1));
        assert_eq!(
            Organism::new(j(4), vec![bad]),
            Err(RepairError::NotBuildable("x".into()))
        );
    }

    #[test]
    fn repair_without_cascade() {
        let org = Organism::new(j(0), cells(4, 1)).unwrap();
        let rem = amputate(&org, &RemovalAction::new([0, 1], 4).unwrap()).unwrap();
        let r = repair(&rem, 3);
        assert!(r.feasible);
        assert_eq!(r.levels_descended, 0);
        assert_eq!(r.cost, 0);
        assert_eq!(r.stop, StopReason::Rebuilt);
    }

    #[test]
    fn repair_depth_zero() {
        let org = Organism::new(j(2), cells(2, 1)).unwrap();
        let rem = amputate(&org, &RemovalAction::new([0], 2).unwrap()).unwrap();
        let r = repair(&rem, 0);
        assert!(!r.feasible);
        assert_eq!(r.levels_descended, 0);
        assert_eq!(r.stop, StopReason::DepthExhausted);
    }

    #[test]
    fn repair_stops_at_leaves() {
        let org = Organism::new(j(2), cells(2, 1)).unwrap();
        let rem = amputate(&org, &RemovalAction::new([0], 2).unwrap()).unwrap();
        let r = repair(&rem, 5);
        assert!(!r.feasible);
        assert_eq!(r.stop, StopReason::LeafLevel);
        assert_eq!(r.levels_descended, 0);
    }

    #[test]
    fn ionization_cycle() {
        let atom = Organism::new(
            j(0),
            vec![ComponentSpec::leaf("core", j(1)), ComponentSpec::leaf("e", j(1))],
        )
        .unwrap();
        let out = ionize_recombine(&atom, 1, None).unwrap();
        assert!(!out.broken_complete);
        assert!(out.restored_complete);
        assert_eq!(out.captured.irrep, j(1));

        let wrong = ionize_recombine(&atom, 1, Some(ComponentSpec::leaf("x", j(3)))).unwrap();
        assert!(!wrong.restored_complete);

        let lone = Organism::new(j(1), cells(1, 1)).unwrap();
        assert_eq!(ionize_recombine(&lone, 0, None), Err(RepairError::TooFewComponents(1)));
    }
}
