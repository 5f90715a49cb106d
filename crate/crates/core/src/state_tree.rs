//! Hierarchical wave functions as trees of node wave functions.
//!
//! Every node carries the wave function of one subsystem at one hierarchy
//! level, expanded over that level's finite basis. Children are the
//! subsystems at the next level. States form a complex vector space under
//! node-wise scaling and node-wise addition of congruent trees; there is
//! deliberately no product between a node and its children.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::half;

/// Absolute tolerance used for amplitude comparisons.
pub const AMPLITUDE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("ShapeMismatch: trees are not congruent at {0}")]
    ShapeMismatch(NodePath),
    #[error("InvalidLevel: {0}")]
    InvalidLevel(String),
    #[error("AmplitudeLength: {found} amplitudes for {expected} basis labels")]
    AmplitudeLength { expected: usize, found: usize },
    #[error("Parse: {0}")]
    Parse(String),
}

/// Symmetry group attached to a hierarchy level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum GroupTag {
    SU2,
    Translation1D,
    Custom(String),
}

impl GroupTag {
    pub fn name(&self) -> &str {
        match self {
            GroupTag::SU2 => "SU2",
            GroupTag::Translation1D => "Translation1D",
            GroupTag::Custom(name) => name,
        }
    }
}

impl From<String> for GroupTag {
    fn from(s: String) -> Self {
        match s.as_str() {
            "SU2" => GroupTag::SU2,
            "Translation1D" => GroupTag::Translation1D,
            _ => GroupTag::Custom(s),
        }
    }
}

impl From<GroupTag> for String {
    fn from(g: GroupTag) -> Self {
        g.name().to_string()
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisLabel {
    /// Weight `m` of spin `j`, both stored as twice their value.
    #[serde(rename = "spin")]
    SpinWeight {
        #[serde(rename = "j", with = "half::serde_unsigned")]
        twice_j: u32,
        #[serde(rename = "m", with = "half::serde_signed")]
        twice_m: i32,
    },
    Point(i64),
    Named(String),
}

impl BasisLabel {
    pub fn spin(twice_j: u32, twice_m: i32) -> Self {
        BasisLabel::SpinWeight { twice_j, twice_m }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            BasisLabel::SpinWeight { twice_j, twice_m } => {
                twice_m.unsigned_abs() <= twice_j && (twice_j as i64 - twice_m as i64) % 2 == 0
            }
            _ => true,
        }
    }

    /// All weights of spin `j`, highest first.
    pub fn spin_multiplet(twice_j: u32) -> Vec<BasisLabel> {
        (0..=twice_j as i32)
            .map(|k| BasisLabel::spin(twice_j, twice_j as i32 - 2 * k))
            .collect()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::SpinWeight { twice_j, twice_m } => write!(
                f,
                "({},{})",
                half::format_twice(*twice_j as i64),
                half::format_twice(*twice_m as i64)
            ),
            BasisLabel::Point(i) => write!(f, "x{i}"),
            BasisLabel::Named(s) => f.write_str(s),
        }
    }
}

/// The triplet (level index, symmetry group, basis on that group).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyLevel {
    pub level_index: u32,
    pub group: GroupTag,
    pub basis: Vec<BasisLabel>,
}

impl HierarchyLevel {
    pub fn new(level_index: u32, group: GroupTag, basis: Vec<BasisLabel>) -> Result<Self, StateError> {
        let level = Self {
            level_index,
            group,
            basis,
        };
        match level.problems().into_iter().next() {
            Some(kind) => Err(StateError::InvalidLevel(kind.to_string())),
            None => Ok(level),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn problems(&self) -> Vec<ViolationKind> {
        let mut out = Vec::new();
        if self.basis.is_empty() {
            out.push(ViolationKind::EmptyBasis);
        }
        let mut seen = HashSet::new();
        for label in &self.basis {
            if !label.is_valid() {
                out.push(ViolationKind::InvalidSpinWeight(label.clone()));
            }
            if !seen.insert(label) {
                out.push(ViolationKind::DuplicateBasisLabel(label.clone()));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Statistics {
    Boson,
    Fermion,
    #[default]
    Unspecified,
}

/// Wave function of one node, expanded over its level's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWave {
    pub level: HierarchyLevel,
    pub amplitudes: Vec<Complex64>,
    pub statistics: Statistics,
    pub quantum_numbers: Option<Vec<i64>>,
}

impl NodeWave {
    pub fn new(level: HierarchyLevel, amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        if amplitudes.len() != level.dim() {
            return Err(StateError::AmplitudeLength {
                expected: level.dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            level,
            amplitudes,
            statistics: Statistics::Unspecified,
            quantum_numbers: None,
        })
    }

    /// Unit amplitude on basis label `index`, zero elsewhere.
    pub fn basis_state(level: HierarchyLevel, index: usize) -> Result<Self, StateError> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); level.dim()];
        let slot = amplitudes.get_mut(index).ok_or(StateError::AmplitudeLength {
            expected: level.dim(),
            found: index + 1,
        })?;
        *slot = Complex64::new(1.0, 0.0);
        Self::new(level, amplitudes)
    }

    pub fn with_statistics(mut self, statistics: Statistics) -> Self {
        self.statistics = statistics;
        self
    }

    pub fn with_quantum_numbers(mut self, qn: Vec<i64>) -> Self {
        self.quantum_numbers = Some(qn);
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= AMPLITUDE_TOL
    }

    /// Largest-magnitude `SpinWeight` label; ties go to the lowest index.
    pub fn dominant_spin_weight(&self) -> Option<(u32, i32)> {
        let mut best: Option<(f64, u32, i32)> = None;
        for (label, amp) in self.level.basis.iter().zip(&self.amplitudes) {
            if let BasisLabel::SpinWeight { twice_j, twice_m } = *label {
                let w = amp.norm_sqr();
                if best.is_none_or(|(bw, _, _)| w > bw) {
                    best = Some((w, twice_j, twice_m));
                }
            }
        }
        best.map(|(_, j, m)| (j, m))
    }
}

/// Path from the root: the child index taken at every step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, index: usize) -> Self {
        let mut p = self.0.clone();
        p.push(index);
        Self(p)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

/// A hierarchical state: a node wave function and the states of its
/// components one level down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "NodeDoc", into = "NodeDoc")]
pub struct HierState {
    pub wave: NodeWave,
    pub children: Vec<HierState>,
}

impl HierState {
    pub fn leaf(wave: NodeWave) -> Self {
        Self {
            wave,
            children: Vec::new(),
        }
    }

    pub fn new(wave: NodeWave, children: Vec<HierState>) -> Self {
        Self { wave, children }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(HierState::node_count).sum::<usize>()
    }

    /// Pre-order walk over every node with its path.
    pub fn nodes(&self) -> Vec<(NodePath, &HierState)> {
        let mut out = Vec::new();
        self.collect_nodes(NodePath::root(), &mut out);
        out
    }

    fn collect_nodes<'a>(&'a self, path: NodePath, out: &mut Vec<(NodePath, &'a HierState)>) {
        out.push((path.clone(), self));
        for (i, child) in self.children.iter().enumerate() {
            child.collect_nodes(path.child(i), out);
        }
    }

    pub fn get(&self, path: &NodePath) -> Option<&HierState> {
        path.0
            .iter()
            .try_fold(self, |node, &i| node.children.get(i))
    }

    fn map_amplitudes(&self, f: &impl Fn(Complex64) -> Complex64) -> HierState {
        let mut wave = self.wave.clone();
        for a in &mut wave.amplitudes {
            *a = f(*a);
        }
        HierState {
            wave,
            children: self.children.iter().map(|c| c.map_amplitudes(f)).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, StateError> {
        serde_json::from_str(text).map_err(|e| StateError::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes")
    }
}

/// `a·ψ`: every amplitude of every node multiplied by `a`.
pub fn scalar_mul(a: Complex64, psi: &HierState) -> HierState {
    psi.map_amplitudes(&|z| a * z)
}

/// Component-wise sum of two congruent trees.
pub fn add(phi: &HierState, psi: &HierState) -> Result<HierState, StateError> {
    add_at(phi, psi, NodePath::root())
}

fn add_at(phi: &HierState, psi: &HierState, path: NodePath) -> Result<HierState, StateError> {
    if !same_node_shape(&phi.wave, &psi.wave) || phi.children.len() != psi.children.len() {
        return Err(StateError::ShapeMismatch(path));
    }
    let mut wave = phi.wave.clone();
    for (a, b) in wave.amplitudes.iter_mut().zip(&psi.wave.amplitudes) {
        *a += b;
    }
    let children = phi
        .children
        .iter()
        .zip(&psi.children)
        .enumerate()
        .map(|(i, (c1, c2))| add_at(c1, c2, path.child(i)))
        .collect::<Result<_, _>>()?;
    Ok(HierState { wave, children })
}

fn same_node_shape(a: &NodeWave, b: &NodeWave) -> bool {
    a.level == b.level && a.amplitudes.len() == b.amplitudes.len()
}

/// Same shape, level indices, groups and bases node by node.
pub fn congruent(phi: &HierState, psi: &HierState) -> bool {
    same_node_shape(&phi.wave, &psi.wave)
        && phi.children.len() == psi.children.len()
        && phi
            .children
            .iter()
            .zip(&psi.children)
            .all(|(a, b)| congruent(a, b))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    EmptyBasis,
    DuplicateBasisLabel(BasisLabel),
    InvalidSpinWeight(BasisLabel),
    AmplitudeLength { expected: usize, found: usize },
    ChildLevelNotDeeper { parent: u32, child: u32 },
    SiblingLevelMismatch { expected: u32, found: u32 },
    NotNormalized { norm_sqr: f64 },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::EmptyBasis => write!(f, "basis is empty"),
            ViolationKind::DuplicateBasisLabel(l) => write!(f, "duplicate basis label {l}"),
            ViolationKind::InvalidSpinWeight(l) => write!(f, "invalid spin weight {l}"),
            ViolationKind::AmplitudeLength { expected, found } => {
                write!(f, "{found} amplitudes for {expected} basis labels")
            }
            ViolationKind::ChildLevelNotDeeper { parent, child } => {
                write!(f, "child level {child} is not deeper than parent level {parent}")
            }
            ViolationKind::SiblingLevelMismatch { expected, found } => {
                write!(f, "sibling level {found} differs from {expected}")
            }
            ViolationKind::NotNormalized { norm_sqr } => {
                write!(f, "squared norm {norm_sqr} is not 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: NodePath,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.kind)
    }
}

/// Every broken structural invariant in the tree; empty when well formed.
pub fn validate_tree(psi: &HierState) -> Vec<Violation> {
    let mut out = Vec::new();
    validate_at(psi, NodePath::root(), false, &mut out);
    out
}

/// As [`validate_tree`], additionally requiring every node to be normalized.
pub fn validate_tree_normalized(psi: &HierState) -> Vec<Violation> {
    let mut out = Vec::new();
    validate_at(psi, NodePath::root(), true, &mut out);
    out
}

fn validate_at(node: &HierState, path: NodePath, normalized: bool, out: &mut Vec<Violation>) {
    let wave = &node.wave;
    let push = |out: &mut Vec<Violation>, kind| {
        out.push(Violation {
            path: path.clone(),
            kind,
        })
    };
    for kind in wave.level.problems() {
        push(out, kind);
    }
    if wave.amplitudes.len() != wave.level.dim() {
        push(
            out,
            ViolationKind::AmplitudeLength {
                expected: wave.level.dim(),
                found: wave.amplitudes.len(),
            },
        );
    }
    if normalized && !wave.is_normalized() {
        push(
            out,
            ViolationKind::NotNormalized {
                norm_sqr: wave.norm_sqr(),
            },
        );
    }
    let parent_level = wave.level.level_index;
    let first_child_level = node.children.first().map(|c| c.wave.level.level_index);
    for (i, child) in node.children.iter().enumerate() {
        let child_path = path.child(i);
        let level = child.wave.level.level_index;
        if level <= parent_level {
            out.push(Violation {
                path: child_path.clone(),
                kind: ViolationKind::ChildLevelNotDeeper {
                    parent: parent_level,
                    child: level,
                },
            });
        }
        if let Some(expected) = first_child_level.filter(|&e| e != level) {
            out.push(Violation {
                path: child_path.clone(),
                kind: ViolationKind::SiblingLevelMismatch {
                    expected,
                    found: level,
                },
            });
        }
        validate_at(child, child_path, normalized, out);
    }
}

/// On-disk form of one node.
#[derive(Serialize, Deserialize)]
struct NodeDoc {
    level: u32,
    group: GroupTag,
    basis: Vec<BasisLabel>,
    amplitudes: Vec<Complex64>,
    #[serde(default)]
    statistics: Statistics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantum_numbers: Option<Vec<i64>>,
    #[serde(default)]
    children: Vec<NodeDoc>,
}

impl From<NodeDoc> for HierState {
    fn from(doc: NodeDoc) -> Self {
        HierState {
            wave: NodeWave {
                level: HierarchyLevel {
                    level_index: doc.level,
                    group: doc.group,
                    basis: doc.basis,
                },
                amplitudes: doc.amplitudes,
                statistics: doc.statistics,
                quantum_numbers: doc.quantum_numbers,
            },
            children: doc.children.into_iter().map(HierState::from).collect(),
        }
    }
}

impl From<HierState> for NodeDoc {
    fn from(s: HierState) -> Self {
        NodeDoc {
            level: s.wave.level.level_index,
            group: s.wave.level.group,
            basis: s.wave.level.basis,
            amplitudes: s.wave.amplitudes,
            statistics: s.wave.statistics,
            quantum_numbers: s.wave.quantum_numbers,
            children: s.children.into_iter().map(NodeDoc::from).collect(),
        }
    }
}
