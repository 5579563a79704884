//! Flattening of peaks: a Φ creation, some Ψ moves, then a Φ annihilation is replaced by a
//! sequence between the same endpoints that never has more intersection points than they do.
//!
//! Each intermediate diagram of the peak is transformed by reversing the orders of the sets
//! met along the segments joining the created (or annihilated) pairs and erasing those
//! pairs. Consecutive transformed diagrams are then equal or differ by a single move, which
//! is recovered by search.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::canonical::{canonical_form_with, isomorphism, ComponentMode};
use crate::error::PeakError;
use crate::equivalence::{minimize, psi_orbit, MoveSequence, SearchOptions};
use crate::gauss::{GaussDiagram, Label, PointId};
use crate::moves::{
    apply_move, apply_phi, apply_psi, creation_inverse, enumerate_phi_annihilations,
    enumerate_psi_moves, reverse_subset_order, MoveDescriptor, PhiDescriptor, PhiDirection, Relabeling,
};
use crate::realize::is_realizable;

/// Which of the annihilated sets were created by the first move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeakCase {
    /// The annihilated pair is the created pair.
    Same,
    /// One set in common.
    OneShared,
    /// No set in common.
    Disjoint,
}

/// A segment of a circle running forward from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Segment {
    start: PointId,
    end: PointId,
}

/// Points strictly inside the forward arc from `start` to `end`.
fn interior(d: &GaussDiagram, start: PointId, end: PointId) -> Option<BTreeSet<PointId>> {
    let slots = d.slots();
    let (s, e) = (slots.get(&start)?, slots.get(&end)?);
    if s.circle != e.circle {
        return None;
    }
    let c = &d.circles()[s.circle];
    let mut out = BTreeSet::new();
    let mut i = (s.index + 1) % c.len();
    while i != e.index {
        out.insert(c[i]);
        i = (i + 1) % c.len();
    }
    Some(out)
}

/// Reverses, one group after the other, the part of every surviving set lying in the group,
/// fully reverses `flip`, then erases `erase`.
fn transform(d: &GaussDiagram, groups: &[BTreeSet<PointId>], flip: Option<Label>, erase: &[Label]) -> GaussDiagram {
    let mut out = d.clone();
    for group in groups {
        let labels: Vec<Label> = out.set_labels().filter(|l| !erase.contains(l)).collect();
        for l in labels {
            let pts: BTreeSet<PointId> = out.set_points(l).intersection(group).copied().collect();
            if !pts.is_empty() {
                let o = reverse_subset_order(&out.orders()[&l], &pts);
                out = out.with_order(l, o);
            }
        }
    }
    if let Some(l) = flip {
        let o = out.orders()[&l].reversed();
        out = out.with_order(l, o);
    }
    out.without_sets(erase)
}

/// A single move leading from `prev` to `next`, if any; `None` when they coincide.
fn connect(prev: &GaussDiagram, next: &GaussDiagram) -> Result<Option<MoveDescriptor>, ()> {
    if prev.same_as(next) {
        return Ok(None);
    }
    if prev.crossing_count() == next.crossing_count() {
        for m in enumerate_psi_moves(prev) {
            if apply_psi(prev, &m).is_ok_and(|d| d.same_as(next)) {
                return Ok(Some(MoveDescriptor::Psi(m)));
            }
        }
    }
    if prev.crossing_count() == next.crossing_count() + 2 {
        for m in enumerate_phi_annihilations(prev) {
            if apply_phi(prev, &m).is_ok_and(|d| d.same_as(next)) {
                return Ok(Some(MoveDescriptor::Phi(m)));
            }
        }
    }
    if next.crossing_count() == prev.crossing_count() + 2 {
        for m in enumerate_phi_annihilations(next) {
            if apply_phi(next, &m).is_ok_and(|d| d.same_as(prev)) {
                let create = creation_inverse(next, &m).map_err(|_| ())?;
                if apply_phi(prev, &create).is_ok_and(|d| d.same_as(next)) {
                    return Ok(Some(MoveDescriptor::Phi(create)));
                }
            }
        }
    }
    if prev.crossing_count() == next.crossing_count() {
        if let Some((labels, points)) = isomorphism(prev, next) {
            return Ok(Some(MoveDescriptor::Relabel(Relabeling { labels, points })));
        }
    }
    Err(())
}

struct Peak {
    diagrams: Vec<GaussDiagram>,
    created: PhiDescriptor,
    annihilated: PhiDescriptor,
}

fn check_peak(seq: &MoveSequence) -> Result<Peak, PeakError> {
    let r = seq.steps.len();
    if r < 2 {
        return Err(PeakError::NotAPeak("needs at least a creation and an annihilation".into()));
    }
    let created = match &seq.steps[0].mv {
        MoveDescriptor::Phi(m) if !m.is_annihilation() => m.clone(),
        _ => return Err(PeakError::NotAPeak("first move must be a Φ creation".into())),
    };
    let annihilated = match &seq.steps[r - 1].mv {
        MoveDescriptor::Phi(m) if m.is_annihilation() => m.clone(),
        _ => return Err(PeakError::NotAPeak("last move must be a Φ annihilation".into())),
    };
    if let Some(i) = (1..r - 1).find(|&i| !matches!(seq.steps[i].mv, MoveDescriptor::Psi(_))) {
        return Err(PeakError::NotAPeak(format!("move {i} is not a Ψ move")));
    }
    let diagrams = seq.replay().map_err(|(index, e)| match e {
        Some(source) => PeakError::Replay { index, source },
        None => PeakError::KeyMismatch(index),
    })?;
    if let Some(i) = diagrams.iter().position(|d| !is_realizable(d)) {
        return Err(PeakError::Unrealizable(i));
    }
    Ok(Peak { diagrams, created, annihilated })
}

/// Classifies a peak by the overlap of its created and annihilated labels.
pub fn peak_case(seq: &MoveSequence) -> Result<PeakCase, PeakError> {
    let peak = check_peak(seq)?;
    Ok(classify(&peak))
}

fn classify(peak: &Peak) -> PeakCase {
    let c: BTreeSet<Label> = [peak.created.first, peak.created.second].into();
    let a: BTreeSet<Label> = [peak.annihilated.first, peak.annihilated.second].into();
    match c.intersection(&a).count() {
        2 => PeakCase::Same,
        1 => PeakCase::OneShared,
        _ => PeakCase::Disjoint,
    }
}

/// Pairing of `from`-points with the points they are paired to in `m`.
fn pairs_from(m: &PhiDescriptor, from: Label) -> Vec<(PointId, PointId)> {
    if m.first == from {
        m.pairing.clone()
    } else {
        m.pairing.iter().map(|&(x, y)| (y, x)).collect()
    }
}

/// The two arcs joining `x` and `y`.
fn arcs(x: PointId, y: PointId) -> [Segment; 2] {
    [Segment { start: x, end: y }, Segment { start: y, end: x }]
}

/// Union of the arc interiors; `None` unless the arcs are disjoint and avoid `blocked`.
fn region(d: &GaussDiagram, segs: &[Segment], blocked: &BTreeSet<PointId>) -> Option<BTreeSet<PointId>> {
    let mut out = BTreeSet::new();
    for s in segs {
        let inside = interior(d, s.start, s.end)?;
        if !inside.is_disjoint(blocked) || !inside.is_disjoint(&out) {
            return None;
        }
        out.extend(inside);
    }
    Some(out)
}

fn points_of(d: &GaussDiagram, labels: &[Label]) -> BTreeSet<PointId> {
    labels.iter().flat_map(|&l| d.set_points(l)).collect()
}

/// Regions swept by the segments joining each pair, over every choice of arcs.
fn pair_regions(d: &GaussDiagram, pairs: &[(PointId, PointId)], blocked: &BTreeSet<PointId>) -> Vec<BTreeSet<PointId>> {
    let mut out: Vec<BTreeSet<PointId>> = Vec::new();
    for mask in 0..1usize << pairs.len() {
        let segs: Vec<Segment> = pairs.iter().enumerate().map(|(j, &(x, y))| arcs(x, y)[mask >> j & 1]).collect();
        if let Some(r) = region(d, &segs, blocked) {
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

/// For paths `a - s - b` through each shared point: the parts between `a` and `s` and
/// between `s` and `b`, over every choice of arcs.
fn path_regions(
    d: &GaussDiagram,
    paths: &[(PointId, PointId, PointId)],
    blocked: &BTreeSet<PointId>,
) -> Vec<(BTreeSet<PointId>, BTreeSet<PointId>)> {
    let mut out = Vec::new();
    for mask in 0..1usize << (2 * paths.len()) {
        let near: Vec<Segment> = paths.iter().enumerate().map(|(j, &(a, s, _))| arcs(a, s)[mask >> (2 * j) & 1]).collect();
        let far: Vec<Segment> =
            paths.iter().enumerate().map(|(j, &(_, s, b))| arcs(s, b)[mask >> (2 * j + 1) & 1]).collect();
        let (Some(p), Some(q)) = (region(d, &near, blocked), region(d, &far, blocked)) else {
            continue;
        };
        if p.is_disjoint(&q) && !out.contains(&(p.clone(), q.clone())) {
            out.push((p, q));
        }
    }
    out
}

/// Flattened diagrams, one layer per position in the new sequence. Any diagram of a layer
/// may be used; the first and last layers are the endpoints of the peak.
type Layers = Vec<Vec<GaussDiagram>>;

fn push_layer(layers: &mut Layers, candidates: impl IntoIterator<Item = GaussDiagram>) {
    let mut seen = HashSet::new();
    let layer: Vec<GaussDiagram> = candidates.into_iter().filter(|d| seen.insert(d.normalized())).collect();
    layers.push(layer);
}

fn build_layers(peak: &Peak, case: PeakCase) -> Layers {
    let r = peak.diagrams.len() - 1;
    let mids = &peak.diagrams[1..r];
    let (ca, cb) = (peak.created.first, peak.created.second);
    let (ka, kb) = (peak.annihilated.first, peak.annihilated.second);
    let mut layers: Layers = vec![vec![peak.diagrams[0].clone()]];
    match case {
        PeakCase::Same => {
            for d in mids {
                let regions = pair_regions(d, &peak.created.pairing, &points_of(d, &[ca, cb]));
                push_layer(&mut layers, regions.iter().map(|g| transform(d, std::slice::from_ref(g), None, &[ca, cb])));
            }
        }
        PeakCase::Disjoint => {
            let regions: Vec<_> = mids
                .iter()
                .map(|d| {
                    (
                        pair_regions(d, &peak.created.pairing, &points_of(d, &[ca, cb])),
                        pair_regions(d, &peak.annihilated.pairing, &points_of(d, &[ka, kb])),
                    )
                })
                .collect();
            for (d, (ri, _)) in mids.iter().zip(&regions) {
                push_layer(&mut layers, ri.iter().map(|g| transform(d, std::slice::from_ref(g), None, &[ca, cb])));
            }
            for (d, (ri, rj)) in mids.iter().zip(&regions).rev() {
                let all = ri.iter().flat_map(|i| rj.iter().map(move |j| [i.clone(), j.clone()]));
                push_layer(&mut layers, all.map(|g| transform(d, &g, None, &[ca, cb, ka, kb])));
            }
            for (d, (_, rj)) in mids.iter().zip(&regions) {
                push_layer(&mut layers, rj.iter().map(|g| transform(d, std::slice::from_ref(g), None, &[ka, kb])));
            }
        }
        PeakCase::OneShared => {
            let shared = if ca == ka || ca == kb { ca } else { cb };
            let a = if shared == ca { cb } else { ca };
            let b = if shared == ka { kb } else { ka };
            let to_a: HashMap<PointId, PointId> = pairs_from(&peak.created, shared).into_iter().collect();
            let to_b: HashMap<PointId, PointId> = pairs_from(&peak.annihilated, shared).into_iter().collect();
            let mut shared_points: Vec<PointId> = to_a.keys().copied().collect();
            shared_points.sort();
            let paths: Vec<(PointId, PointId, PointId)> = shared_points.iter().map(|s| (to_a[s], *s, to_b[s])).collect();
            let regions: Vec<_> = mids.iter().map(|d| path_regions(d, &paths, &points_of(d, &[a, shared, b]))).collect();
            for (d, rs) in mids.iter().zip(&regions) {
                push_layer(&mut layers, rs.iter().map(|(p, _)| transform(d, std::slice::from_ref(p), None, &[a, shared])));
            }
            for (d, rs) in mids.iter().zip(&regions).rev() {
                let whole = rs.iter().map(|(p, q)| p.union(q).copied().collect::<BTreeSet<PointId>>());
                push_layer(&mut layers, whole.map(|g| transform(d, &[g], Some(shared), &[a, b])));
            }
            for (d, rs) in mids.iter().zip(&regions) {
                push_layer(&mut layers, rs.iter().map(|(_, q)| transform(d, std::slice::from_ref(q), None, &[shared, b])));
            }
        }
    }
    layers.push(vec![peak.diagrams[r].clone()]);
    layers
}

/// Walks the layers keeping every reachable diagram, then reads back one path.
fn link(layers: &Layers) -> Result<MoveSequence, PeakError> {
    // per layer: (diagram, index of its predecessor, move from it)
    let mut reached: Vec<Vec<(usize, Option<usize>, Option<MoveDescriptor>)>> = vec![vec![(0, None, None)]];
    for i in 1..layers.len() {
        let mut here = Vec::new();
        for (j, next) in layers[i].iter().enumerate() {
            let found = reached[i - 1].iter().enumerate().find_map(|(k, &(p, _, _))| {
                connect(&layers[i - 1][p], next).ok().map(|mv| (k, mv))
            });
            if let Some((k, mv)) = found {
                here.push((j, Some(k), mv));
            }
        }
        if here.is_empty() {
            return Err(PeakError::Disconnected(i - 1, i));
        }
        reached.push(here);
    }
    let mut moves = Vec::new();
    let mut k = 0;
    for i in (1..layers.len()).rev() {
        let (_, prev, mv) = &reached[i][k];
        moves.extend(mv.clone());
        k = prev.expect("non-initial layers record a predecessor");
    }
    moves.reverse();
    let start = layers[0][0].clone();
    let mut seq = MoveSequence::new(start.clone());
    let mut current = start;
    for (index, mv) in moves.into_iter().enumerate() {
        current = seq.push(&current, mv).map_err(|source| PeakError::Replay { index, source })?;
    }
    if !current.same_as(&layers[layers.len() - 1][0]) {
        return Err(PeakError::Disconnected(layers.len() - 2, layers.len() - 1));
    }
    Ok(seq)
}

/// How a peak was flattened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Erasing the created pair and reversing the sets met along its segments.
    Segments,
    /// Minimizing both endpoints and joining the minimal forms by Ψ moves.
    Descent,
}

/// Replaces a peak (creation, Ψ moves, annihilation, all diagrams realizable) by a move
/// sequence with the same endpoints whose diagrams never exceed the endpoints' crossing count.
pub fn flatten_peak(seq: &MoveSequence) -> Result<MoveSequence, PeakError> {
    flatten_peak_traced(seq).map(|(out, _)| out)
}

/// [`flatten_peak`], also reporting which construction succeeded.
pub fn flatten_peak_traced(seq: &MoveSequence) -> Result<(MoveSequence, Route), PeakError> {
    let peak = check_peak(seq)?;
    if let Ok(out) = link(&build_layers(&peak, classify(&peak))) {
        return Ok((out, Route::Segments));
    }
    let end = &peak.diagrams[peak.diagrams.len() - 1];
    Ok((descent(&peak.diagrams[0], end)?, Route::Descent))
}

/// Down from `start` to a minimal diagram, across its Ψ-orbit, and back up to `end` along
/// the reversed minimization of `end`. Circles keep their identity throughout.
fn descent(start: &GaussDiagram, end: &GaussDiagram) -> Result<MoveSequence, PeakError> {
    let opts = SearchOptions { mode: ComponentMode::Labeled, ..Default::default() };
    let down = minimize(start, &opts)?;
    let up = minimize(end, &opts)?;
    let mut seq = down.moves;
    let mut current = down.diagram;
    let push = |seq: &mut MoveSequence, current: &GaussDiagram, mv| {
        let index = seq.len();
        seq.push(current, mv).map_err(|source| PeakError::Replay { index, source })
    };

    let orbit = psi_orbit(&current, &opts)?;
    let target = canonical_form_with(&up.diagram, ComponentMode::Labeled);
    if !orbit.contains(&target) {
        return Err(PeakError::Unconfluent);
    }
    for (m, _) in orbit.path_to(&target) {
        current = push(&mut seq, &current, MoveDescriptor::Psi(m))?;
    }
    if let Some(mv) = connect(&current, &up.diagram).map_err(|_| PeakError::Unconfluent)? {
        current = push(&mut seq, &current, mv)?;
    }

    let path = up.moves.replay().map_err(|(index, e)| match e {
        Some(source) => PeakError::Replay { index, source },
        None => PeakError::KeyMismatch(index),
    })?;
    for (step, before) in up.moves.steps.iter().zip(&path).rev() {
        let back = match &step.mv {
            MoveDescriptor::Psi(m) => MoveDescriptor::Psi(m.mirror()),
            MoveDescriptor::Phi(m) => {
                MoveDescriptor::Phi(creation_inverse(before, m).map_err(|source| PeakError::Replay { index: seq.len(), source })?)
            }
            MoveDescriptor::Relabel(_) => return Err(PeakError::NotAPeak("unexpected relabeling".into())),
        };
        current = push(&mut seq, &current, back)?;
        if !current.same_as(before) {
            return Err(PeakError::KeyMismatch(seq.len()));
        }
    }
    Ok(seq)
}

/// Builds the peak `create`, then `psi` moves, then `annihilate`, as a move sequence.
pub fn peak_sequence(
    start: &GaussDiagram,
    create: PhiDescriptor,
    psi: &[MoveDescriptor],
    annihilate: PhiDescriptor,
) -> Result<MoveSequence, PeakError> {
    if !matches!(create.direction, PhiDirection::Create(_)) {
        return Err(PeakError::NotAPeak("first move must be a Φ creation".into()));
    }
    let mut seq = MoveSequence::new(start.clone());
    let mut cur = start.clone();
    let moves = std::iter::once(MoveDescriptor::Phi(create))
        .chain(psi.iter().cloned())
        .chain(std::iter::once(MoveDescriptor::Phi(annihilate)));
    for (index, m) in moves.enumerate() {
        apply_move(&cur, &m).map_err(|source| PeakError::Replay { index, source })?;
        cur = seq.push(&cur, m).map_err(|source| PeakError::Replay { index, source })?;
    }
    Ok(seq)
}
