//! Ψ-orbits, minimal diagrams and the equivalence decision.
//!
//! Ψ moves keep the number of intersection points and Φ annihilations lower it. A diagram
//! is minimal when nothing in its Ψ-orbit can be annihilated. Two diagrams are declared
//! equivalent when some reduction of each ends in the same minimal Ψ-orbit.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_form_with, CanonicalKey, ComponentMode};
use crate::error::{MoveError, SearchError};
use crate::gauss::GaussDiagram;
use crate::moves::{apply_move, apply_phi, apply_psi, enumerate_phi_annihilations, enumerate_psi_moves};
use crate::moves::{MoveDescriptor, PhiDescriptor, PsiDescriptor};
pub use crate::peak::{flatten_peak, peak_case, PeakCase};

pub const DEFAULT_MAX_NODES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest orbit explored before giving up with [`SearchError::BudgetExceeded`].
    pub max_nodes: usize,
    /// Expand orbit frontiers on the current rayon pool.
    pub parallel: bool,
    pub mode: ComponentMode,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_nodes: DEFAULT_MAX_NODES, parallel: false, mode: ComponentMode::Unlabeled }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitNode {
    pub diagram: GaussDiagram,
    /// Where it was first reached from, and by which move.
    pub parent: Option<(CanonicalKey, PsiDescriptor)>,
}

/// All diagrams reachable by Ψ moves, keyed by canonical form.
#[derive(Clone, Debug)]
pub struct OrbitSummary {
    pub seed: CanonicalKey,
    pub members: BTreeMap<CanonicalKey, OrbitNode>,
}

impl OrbitSummary {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.members.keys()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.members.contains_key(key)
    }

    pub fn min_key(&self) -> &CanonicalKey {
        self.members.keys().next().expect("orbit contains its seed")
    }

    /// Ψ moves leading from the seed to `key`.
    pub fn path_to(&self, key: &CanonicalKey) -> Vec<(PsiDescriptor, CanonicalKey)> {
        let mut path = Vec::new();
        let mut cur = key.clone();
        while let Some((parent, m)) = self.members.get(&cur).and_then(|n| n.parent.clone()) {
            path.push((m, cur));
            cur = parent;
        }
        path.reverse();
        path
    }
}

/// Breadth-first closure of `d` under Ψ moves.
pub fn psi_orbit(d: &GaussDiagram, opts: &SearchOptions) -> Result<OrbitSummary, SearchError> {
    let seed = canonical_form_with(d, opts.mode);
    let mut members = BTreeMap::new();
    members.insert(seed.clone(), OrbitNode { diagram: d.clone(), parent: None });
    let mut frontier = vec![(seed.clone(), d.clone())];

    let expand = |(key, diagram): &(CanonicalKey, GaussDiagram)| {
        enumerate_psi_moves(diagram)
            .into_iter()
            .map(|m| {
                let next = apply_psi(diagram, &m).expect("enumerated move applies");
                (canonical_form_with(&next, opts.mode), next, key.clone(), m)
            })
            .collect::<Vec<_>>()
    };

    while !frontier.is_empty() {
        let children: Vec<Vec<_>> = if opts.parallel {
            frontier.par_iter().map(expand).collect()
        } else {
            frontier.iter().map(expand).collect()
        };
        let mut next_frontier = Vec::new();
        for (key, diagram, parent, m) in children.into_iter().flatten() {
            if members.contains_key(&key) {
                continue;
            }
            if members.len() >= opts.max_nodes {
                return Err(SearchError::BudgetExceeded(opts.max_nodes));
            }
            members.insert(key.clone(), OrbitNode { diagram: diagram.clone(), parent: Some((parent, m)) });
            next_frontier.push((key, diagram));
        }
        next_frontier.sort_by(|a, b| a.0.cmp(&b.0));
        frontier = next_frontier;
    }
    Ok(OrbitSummary { seed, members })
}

/// A start diagram and moves applied to it, each with the canonical key it produces.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveSequence {
    #[serde(with = "crate::io::diagram_serde")]
    pub start: GaussDiagram,
    pub steps: Vec<MoveStep>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveStep {
    #[serde(rename = "move")]
    pub mv: MoveDescriptor,
    #[serde(with = "key_serde")]
    pub result: CanonicalKey,
}

mod key_serde {
    use super::CanonicalKey;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(k: &CanonicalKey, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&k.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CanonicalKey, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl MoveSequence {
    pub fn new(start: GaussDiagram) -> Self {
        MoveSequence { start, steps: Vec::new() }
    }

    /// Applies `mv` to the current end and records it.
    pub fn push(&mut self, current: &GaussDiagram, mv: MoveDescriptor) -> Result<GaussDiagram, MoveError> {
        let next = apply_move(current, &mv)?;
        self.steps.push(MoveStep { mv, result: canonical_form_with(&next, ComponentMode::Unlabeled) });
        Ok(next)
    }

    /// Every diagram of the sequence, checking each step against its recorded key.
    pub fn replay(&self) -> Result<Vec<GaussDiagram>, (usize, Option<MoveError>)> {
        let mut out = vec![self.start.clone()];
        for (i, step) in self.steps.iter().enumerate() {
            let next = apply_move(out.last().expect("nonempty"), &step.mv).map_err(|e| (i, Some(e)))?;
            if canonical_form_with(&next, ComponentMode::Unlabeled) != step.result {
                return Err((i, None));
            }
            out.push(next);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn annihilations_in(orbit: &OrbitSummary, opts: &SearchOptions) -> Option<(CanonicalKey, PhiDescriptor, GaussDiagram)> {
    for (key, node) in &orbit.members {
        let mut best: Option<(CanonicalKey, PhiDescriptor, GaussDiagram)> = None;
        for phi in enumerate_phi_annihilations(&node.diagram) {
            let next = apply_phi(&node.diagram, &phi).expect("enumerated move applies");
            let k = canonical_form_with(&next, opts.mode);
            if best.as_ref().is_none_or(|b| k < b.0) {
                best = Some((k, phi, next));
            }
        }
        if let Some((_, phi, next)) = best {
            return Some((key.clone(), phi, next));
        }
    }
    None
}

/// Whether no diagram Ψ-equivalent to `d` admits a Φ annihilation.
pub fn is_minimal(d: &GaussDiagram, opts: &SearchOptions) -> Result<bool, SearchError> {
    let orbit = psi_orbit(d, opts)?;
    Ok(orbit.members.values().all(|n| enumerate_phi_annihilations(&n.diagram).is_empty()))
}

/// Outcome of [`minimize`]: the minimal diagram and the moves that reached it.
#[derive(Clone, Debug)]
pub struct Minimization {
    pub diagram: GaussDiagram,
    pub moves: MoveSequence,
}

/// Repeatedly walks the Ψ-orbit to the first member (by canonical key) that admits a Φ
/// annihilation and applies the annihilation with the smallest resulting key.
pub fn minimize(d: &GaussDiagram, opts: &SearchOptions) -> Result<Minimization, SearchError> {
    let mut moves = MoveSequence::new(d.clone());
    let mut current = d.clone();
    loop {
        let orbit = psi_orbit(&current, opts)?;
        let Some((key, phi, _)) = annihilations_in(&orbit, opts) else {
            return Ok(Minimization { diagram: current, moves });
        };
        for (m, _) in orbit.path_to(&key) {
            current = moves.push(&current, MoveDescriptor::Psi(m))?;
        }
        current = moves.push(&current, MoveDescriptor::Phi(phi))?;
    }
}

/// Number of intersection points of any minimal diagram equivalent to `d`.
pub fn min_crossing_number(d: &GaussDiagram, opts: &SearchOptions) -> Result<usize, SearchError> {
    Ok(minimize(d, opts)?.diagram.crossing_count())
}

/// Smallest keys of the minimal Ψ-orbits reachable from `d` by Ψ moves and Φ annihilations.
///
/// Minimal forms need not form a single Ψ-orbit, so every reduction route is followed.
pub fn minimal_classes(d: &GaussDiagram, opts: &SearchOptions) -> Result<BTreeSet<CanonicalKey>, SearchError> {
    let mut reached = BTreeSet::from([canonical_form_with(d, opts.mode)]);
    let mut orbits_done = BTreeSet::new();
    let mut stack = vec![d.clone()];
    let mut minima = BTreeSet::new();
    let mut explored = 0;
    while let Some(x) = stack.pop() {
        let orbit = psi_orbit(&x, opts)?;
        if !orbits_done.insert(orbit.min_key().clone()) {
            continue;
        }
        explored += orbit.size();
        if explored > opts.max_nodes {
            return Err(SearchError::BudgetExceeded(opts.max_nodes));
        }
        let mut reducible = false;
        for node in orbit.members.values() {
            for phi in enumerate_phi_annihilations(&node.diagram) {
                reducible = true;
                let y = apply_phi(&node.diagram, &phi)?;
                if reached.insert(canonical_form_with(&y, opts.mode)) {
                    stack.push(y);
                }
            }
        }
        if !reducible {
            minima.insert(orbit.min_key().clone());
        }
    }
    Ok(minima)
}

/// Decides equivalence under Φ and Ψ moves by looking for a minimal Ψ-orbit reachable from both.
///
/// `true` is always backed by a move sequence. `false` is exact whenever every diagram has
/// a single minimal Ψ-orbit.
pub fn equivalent(d1: &GaussDiagram, d2: &GaussDiagram, opts: &SearchOptions) -> Result<bool, SearchError> {
    if canonical_form_with(d1, opts.mode) == canonical_form_with(d2, opts.mode) {
        return Ok(true);
    }
    let m1 = minimal_classes(d1, opts)?;
    let m2 = minimal_classes(d2, opts)?;
    Ok(!m1.is_disjoint(&m2))
}

/// Equivalence of doodles using double-point annihilations only.
pub fn doodle_equivalent(d1: &GaussDiagram, d2: &GaussDiagram, mode: ComponentMode) -> Result<bool, SearchError> {
    Ok(canonical_form_with(&reduce_doodle(d1)?, mode) == canonical_form_with(&reduce_doodle(d2)?, mode))
}

/// Removes annihilable pairs of double points until none is left.
pub fn reduce_doodle(d: &GaussDiagram) -> Result<GaussDiagram, SearchError> {
    if let Some((&l, _)) = d.orders().iter().find(|(_, o)| o.branches() != 2) {
        return Err(SearchError::NotDoodle(l));
    }
    let mut current = d.clone();
    while let Some(phi) = enumerate_phi_annihilations(&current).into_iter().next() {
        current = apply_phi(&current, &phi)?;
    }
    Ok(current)
}
