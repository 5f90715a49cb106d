//! Which hierarchical basis states are physical, and the generalized Pauli
//! principle.
//!
//! A parent basis vector labelled `(J, M)` over children with spins `j_i` and
//! weights `m_i` is physical when `J` occurs in `j_1 ⊗ … ⊗ j_n` and
//! `M = Σ m_i`. Group-specific checks are provided by a [`GroupBackend`]
//! looked up by group name; groups without a backend are reported as
//! unsupported rather than guessed.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::half::format_twice;
use crate::rep_theory::{contains, decompose_product, IrrepLabel, IrrepSum};
use crate::state_tree::{GroupTag, HierState, NodePath, Statistics};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhysicalityError {
    #[error("ArityMismatch: {ms} child weights for {spins} child spins")]
    ArityMismatch { ms: usize, spins: usize },
    #[error("InvalidLabel: {0}")]
    InvalidLabel(String),
}

/// Parent label `(J, M)` together with the weights `m_i` of its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledLabel {
    pub total: IrrepLabel,
    pub twice_m: i32,
    pub child_twice_ms: Vec<i32>,
}

impl CoupledLabel {
    pub fn new(total: IrrepLabel, twice_m: i32, child_twice_ms: Vec<i32>) -> Result<Self, PhysicalityError> {
        check_weight("parent", total, twice_m)?;
        Ok(Self {
            total,
            twice_m,
            child_twice_ms,
        })
    }
}

impl fmt::Display for CoupledLabel {
    /// `(M,(m1,m2,…))` with `J` appended.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self
            .child_twice_ms
            .iter()
            .map(|m| format_twice(*m as i64))
            .collect();
        write!(
            f,
            "({},({})) J={}",
            format_twice(self.twice_m as i64),
            ms.join(","),
            self.total
        )
    }
}

fn check_weight(what: &str, spin: IrrepLabel, twice_m: i32) -> Result<(), PhysicalityError> {
    let ok = twice_m.unsigned_abs() <= spin.twice_j && (spin.twice_j as i64 - twice_m as i64) % 2 == 0;
    if ok {
        Ok(())
    } else {
        Err(PhysicalityError::InvalidLabel(format!(
            "{what} weight {} is not a weight of spin {spin}",
            format_twice(twice_m as i64)
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    ParentIrrepAbsent,
    WeightMismatch,
    UnsupportedGroup,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::ParentIrrepAbsent => "ParentIrrepAbsent",
            Reason::WeightMismatch => "WeightMismatch",
            Reason::UnsupportedGroup => "UnsupportedGroup",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhysicalityReport {
    pub physical: bool,
    pub reasons: Vec<Reason>,
    /// Multiplicity of the parent irrep in the children's product.
    pub parent_multiplicity: u64,
}

impl PhysicalityReport {
    fn from_reasons(reasons: Vec<Reason>, parent_multiplicity: u64) -> Self {
        Self {
            physical: reasons.is_empty(),
            reasons,
            parent_multiplicity,
        }
    }

    pub fn unsupported() -> Self {
        Self::from_reasons(vec![Reason::UnsupportedGroup], 0)
    }
}

impl fmt::Display for PhysicalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.physical {
            f.write_str("PHYSICAL")
        } else {
            let r: Vec<String> = self.reasons.iter().map(Reason::to_string).collect();
            write!(f, "UNPHYSICAL ({})", r.join(", "))
        }
    }
}

/// Product of no factors is the trivial representation.
fn children_product(child_spins: &[IrrepLabel]) -> IrrepSum {
    decompose_product(child_spins).unwrap_or_else(|_| IrrepSum::single(IrrepLabel::new(0)))
}

/// Decides whether the basis vector `parent` over children of the given
/// spins is physical.
pub fn check_basis_state(
    parent: &CoupledLabel,
    child_spins: &[IrrepLabel],
) -> Result<PhysicalityReport, PhysicalityError> {
    if parent.child_twice_ms.len() != child_spins.len() {
        return Err(PhysicalityError::ArityMismatch {
            ms: parent.child_twice_ms.len(),
            spins: child_spins.len(),
        });
    }
    check_weight("parent", parent.total, parent.twice_m)?;
    for (i, (spin, m)) in child_spins.iter().zip(&parent.child_twice_ms).enumerate() {
        check_weight(&format!("child {i}"), *spin, *m)?;
    }

    let multiplicity = contains(&children_product(child_spins), parent.total);
    let mut reasons = Vec::new();
    if multiplicity == 0 {
        reasons.push(Reason::ParentIrrepAbsent);
    }
    let sum: i64 = parent.child_twice_ms.iter().map(|&m| m as i64).sum();
    if sum != parent.twice_m as i64 {
        reasons.push(Reason::WeightMismatch);
    }
    Ok(PhysicalityReport::from_reasons(reasons, multiplicity))
}

/// Group-specific physicality check of one internal node against its
/// direct children.
pub trait GroupBackend: Send + Sync {
    fn group(&self) -> &str;

    fn check(&self, node: &HierState) -> PhysicalityReport;
}

/// SU(2): labels are the dominant `SpinWeight` of each node.
#[derive(Debug, Default, Clone, Copy)]
pub struct Su2Backend;

impl GroupBackend for Su2Backend {
    fn group(&self) -> &str {
        "SU2"
    }

    fn check(&self, node: &HierState) -> PhysicalityReport {
        let all_su2 = std::iter::once(node)
            .chain(&node.children)
            .all(|n| n.wave.level.group == GroupTag::SU2);
        if !all_su2 {
            return PhysicalityReport::unsupported();
        }
        let Some((twice_j, twice_m)) = node.wave.dominant_spin_weight() else {
            return PhysicalityReport::unsupported();
        };
        let mut spins = Vec::with_capacity(node.children.len());
        let mut ms = Vec::with_capacity(node.children.len());
        for child in &node.children {
            let Some((j, m)) = child.wave.dominant_spin_weight() else {
                return PhysicalityReport::unsupported();
            };
            spins.push(IrrepLabel::new(j));
            ms.push(m);
        }
        let label = CoupledLabel {
            total: IrrepLabel::new(twice_j),
            twice_m,
            child_twice_ms: ms,
        };
        // labels come from validated basis entries; an invalid one cannot be adjudicated
        check_basis_state(&label, &spins).unwrap_or_else(|_| PhysicalityReport::unsupported())
    }
}

/// Physicality backends keyed by group name.
pub struct GroupRegistry {
    backends: HashMap<String, Box<dyn GroupBackend>>,
}

impl GroupRegistry {
    pub fn empty() -> Self {
        Self {
            backends: HashMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Su2Backend));
        r
    }

    pub fn register(&mut self, backend: Box<dyn GroupBackend>) {
        self.backends.insert(backend.group().to_string(), backend);
    }

    pub fn get(&self, group: &str) -> Option<&dyn GroupBackend> {
        self.backends.get(group).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.backends.keys().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

impl Default for GroupRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// One report per internal node, in pre-order.
pub fn check_node(psi: &HierState) -> Vec<(NodePath, PhysicalityReport)> {
    check_node_with(&GroupRegistry::with_builtins(), psi)
}

pub fn check_node_with(registry: &GroupRegistry, psi: &HierState) -> Vec<(NodePath, PhysicalityReport)> {
    psi.nodes()
        .into_iter()
        .filter(|(_, n)| !n.children.is_empty())
        .map(|(path, n)| {
            let report = match registry.get(n.wave.level.group.name()) {
                Some(backend) => backend.check(n),
                None => PhysicalityReport::unsupported(),
            };
            (path, report)
        })
        .collect()
}

/// The quantum state compared by the Pauli checker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FermionState {
    pub quantum_numbers: Option<Vec<i64>>,
    pub spin_weight: Option<(u32, i32)>,
}

impl fmt::Display for FermionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.quantum_numbers {
            Some(q) => {
                let q: Vec<String> = q.iter().map(i64::to_string).collect();
                write!(f, "({})", q.join(","))?
            }
            None => f.write_str("()")?,
        }
        if let Some((_, m)) = self.spin_weight {
            write!(f, " m={}", format_twice(m as i64))?;
        }
        Ok(())
    }
}

/// Two fermions of the same system found in the same state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliViolation {
    pub system: NodePath,
    pub first: NodePath,
    pub second: NodePath,
    pub state: FermionState,
}

impl fmt::Display for PauliViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} and {} share state {}",
            self.system, self.first, self.second, self.state
        )
    }
}

/// Generalized Pauli check where "the system" is each node and the
/// fermions compared are its direct children. Fermions under different
/// parents are never compared.
pub fn pauli_check(parent: &HierState) -> Vec<PauliViolation> {
    pauli_check_scoped(parent, 1)
}

/// As [`pauli_check`], but the fermions compared are the descendants
/// exactly `depth` levels below each system node. `depth = 2` treats the
/// grandparent as the system. A depth of zero compares nothing.
pub fn pauli_check_scoped(root: &HierState, depth: usize) -> Vec<PauliViolation> {
    let mut out = Vec::new();
    if depth == 0 {
        return out;
    }
    for (system_path, system) in root.nodes() {
        let mut members = Vec::new();
        collect_at_depth(system, system_path.clone(), depth, &mut members);
        let fermions: Vec<(NodePath, FermionState)> = members
            .into_iter()
            .filter(|(_, n)| n.wave.statistics == Statistics::Fermion)
            .map(|(p, n)| {
                (
                    p,
                    FermionState {
                        quantum_numbers: n.wave.quantum_numbers.clone(),
                        spin_weight: n.wave.dominant_spin_weight(),
                    },
                )
            })
            .collect();
        for (i, (pa, sa)) in fermions.iter().enumerate() {
            for (pb, sb) in &fermions[i + 1..] {
                if sa == sb {
                    out.push(PauliViolation {
                        system: system_path.clone(),
                        first: pa.clone(),
                        second: pb.clone(),
                        state: sa.clone(),
                    });
                }
            }
        }
    }
    out
}

fn collect_at_depth<'a>(node: &'a HierState, path: NodePath, depth: usize, out: &mut Vec<(NodePath, &'a HierState)>) {
    if depth == 0 {
        out.push((path, node));
        return;
    }
    for (i, child) in node.children.iter().enumerate() {
        collect_at_depth(child, path.child(i), depth - 1, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_tree::{BasisLabel, HierarchyLevel, NodeWave};

    fn half() -> IrrepLabel {
        IrrepLabel::new(1)
    }

    fn label(j: u32, m: i32, ms: &[i32]) -> CoupledLabel {
        CoupledLabel::new(IrrepLabel::new(j), m, ms.to_vec()).unwrap()
    }

    #[test]
    fn triplet_top_is_physical() {
        let r = check_basis_state(&label(2, 2, &[1, 1]), &[half(), half()]).unwrap();
        assert!(r.physical);
        assert!(r.reasons.is_empty());
        assert_eq!(r.parent_multiplicity, 1);
    }

    #[test]
    fn flipped_weight_is_unphysical() {
        let r = check_basis_state(&label(2, -2, &[1, 1]), &[half(), half()]).unwrap();
        assert!(!r.physical);
        assert_eq!(r.reasons, vec![Reason::WeightMismatch]);
    }

    #[test]
    fn absent_irrep() {
        let r = check_basis_state(&label(3, 1, &[1, -1]), &[half(), half()]).unwrap();
        assert_eq!(r.reasons, vec![Reason::ParentIrrepAbsent, Reason::WeightMismatch]);
        let r = check_basis_state(&label(3, 1, &[1, -1, 1]), &[half(), half(), half()]).unwrap();
        assert!(r.physical);
        assert_eq!(r.parent_multiplicity, 1);
    }

    #[test]
    fn absent_irrep_alone() {
        let r = check_basis_state(&label(3, 1, &[1, 1]), &[half(), half()]);
        // M = 1/2 cannot be the sum of two half weights, flagged alongside
        assert!(r.unwrap().reasons.contains(&Reason::ParentIrrepAbsent));
        let r = check_basis_state(&label(4, 0, &[1, -1]), &[half(), half()]).unwrap();
        assert_eq!(r.reasons, vec![Reason::ParentIrrepAbsent]);
    }

    #[test]
    fn arity_and_label_errors() {
        assert_eq!(
            check_basis_state(&label(2, 2, &[1]), &[half(), half()]),
            Err(PhysicalityError::ArityMismatch { ms: 1, spins: 2 })
        );
        assert!(matches!(
            check_basis_state(&label(2, 2, &[3, -1]), &[half(), half()]),
            Err(PhysicalityError::InvalidLabel(_))
        ));
        assert!(CoupledLabel::new(IrrepLabel::new(2), 1, vec![]).is_err());
    }

    #[test]
    fn no_children_is_trivial_product() {
        assert!(check_basis_state(&label(0, 0, &[]), &[]).unwrap().physical);
        assert!(!check_basis_state(&label(2, 0, &[]), &[]).unwrap().physical);
    }

    fn spin_node(level: u32, twice_j: u32, twice_m: i32) -> NodeWave {
        let basis = BasisLabel::spin_multiplet(twice_j);
        let idx = basis
            .iter()
            .position(|b| *b == BasisLabel::spin(twice_j, twice_m))
            .unwrap();
        NodeWave::basis_state(HierarchyLevel::new(level, GroupTag::SU2, basis).unwrap(), idx).unwrap()
    }

    #[test]
    fn leaf_has_no_reports() {
        assert!(check_node(&HierState::leaf(spin_node(0, 1, 1))).is_empty());
    }

    #[test]
    fn unsupported_group_reported() {
        let lvl = HierarchyLevel::new(0, GroupTag::Custom("SU3".into()), vec![BasisLabel::Named("q".into())]).unwrap();
        let root = HierState::new(
            NodeWave::basis_state(lvl, 0).unwrap(),
            vec![HierState::leaf(spin_node(1, 1, 1))],
        );
        let reports = check_node(&root);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].1.reasons, vec![Reason::UnsupportedGroup]);

        let mut mixed = HierState::new(spin_node(0, 1, 1), vec![HierState::leaf(spin_node(1, 1, 1))]);
        mixed.children[0].wave.level.group = GroupTag::Translation1D;
        assert_eq!(check_node(&mixed)[0].1, PhysicalityReport::unsupported());
    }

    #[test]
    fn registry_lists_builtins() {
        let r = GroupRegistry::with_builtins();
        assert_eq!(r.names(), vec!["SU2"]);
        assert!(r.get("SU3").is_none());
        let empty = GroupRegistry::empty();
        let root = HierState::new(spin_node(0, 0, 0), vec![HierState::leaf(spin_node(1, 0, 0))]);
        assert_eq!(check_node_with(&empty, &root)[0].1, PhysicalityReport::unsupported());
    }

    fn electron(m: i32) -> HierState {
        HierState::leaf(
            spin_node(2, 1, m)
                .with_statistics(Statistics::Fermion)
                .with_quantum_numbers(vec![1, 0, 0]),
        )
    }

    #[test]
    fn pauli_same_parent() {
        let atom = HierState::new(spin_node(1, 0, 0), vec![electron(1), electron(1)]);
        let v = pauli_check(&atom);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].first, NodePath(vec![0]));
        assert_eq!(v[0].second, NodePath(vec![1]));
        assert_eq!(v[0].to_string(), "root: root/0 and root/1 share state (1,0,0) m=1/2");

        let paired = HierState::new(spin_node(1, 0, 0), vec![electron(1), electron(-1)]);
        assert!(pauli_check(&paired).is_empty());
    }

    #[test]
    fn pauli_different_parents_and_scope() {
        let atom = |e: HierState| HierState::new(spin_node(1, 1, 1), vec![e]);
        let molecule = HierState::new(spin_node(0, 0, 0), vec![atom(electron(1)), atom(electron(1))]);
        assert!(pauli_check(&molecule).is_empty());
        let wide = pauli_check_scoped(&molecule, 2);
        assert_eq!(wide.len(), 1);
        assert_eq!(wide[0].system, NodePath::root());
        assert!(pauli_check_scoped(&molecule, 0).is_empty());
    }

    #[test]
    fn pauli_ignores_bosons() {
        let boson = || {
            HierState::leaf(
                spin_node(2, 1, 1)
                    .with_statistics(Statistics::Boson)
                    .with_quantum_numbers(vec![1, 0, 0]),
            )
        };
        let parent = HierState::new(spin_node(1, 0, 0), vec![boson(), boson()]);
        assert!(pauli_check(&parent).is_empty());
    }
}
