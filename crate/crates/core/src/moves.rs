//! The elementary moves on Gauss diagrams.
//!
//! A Φ move annihilates (or creates) two singular sets of equal size whose points are
//! pairwise adjacent along the circles and whose orders are opposite. A Ψ move passes a
//! small singular set through a bigger one it is attached to, reversing the small order
//! and the matching part of the big order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::MoveError;
use crate::gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign, Slot};

/// Reverses, in place, every maximal run of consecutive endpoints of branches in `subset`.
pub fn reverse_subset_order(o: &OrientedCyclicOrder, subset: &BTreeSet<PointId>) -> OrientedCyclicOrder {
    let seq = o.sequence();
    let n = seq.len();
    let inside = |e: &Endpoint| subset.contains(&e.point);
    let Some(start) = seq.iter().position(|e| !inside(e)) else {
        return o.reversed();
    };
    let mut out = seq.to_vec();
    let mut i = 0;
    while i < n {
        let idx = (start + i) % n;
        if !inside(&seq[idx]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < n && inside(&seq[(start + j) % n]) {
            j += 1;
        }
        // run covers offsets i..j
        for t in 0..(j - i) {
            out[(start + i + t) % n] = seq[(start + j - 1 - t) % n];
        }
        i = j;
    }
    OrientedCyclicOrder::from_seq_unchecked(out)
}

/// Where the pair `(a, pairing(a))` goes in a Φ creation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrandInsertion {
    pub circle: usize,
    /// Insert right after this point, or at the start of the circle.
    pub after: Option<PointId>,
    /// Whether the point of the first set comes first along the circle.
    pub first_ahead: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    /// One entry per pair, aligned with the descriptor's pairing; applied in sequence.
    pub strands: Vec<StrandInsertion>,
    pub first_order: OrientedCyclicOrder,
    pub second_order: OrientedCyclicOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiDirection {
    Annihilate,
    Create(Placement),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhiDescriptor {
    pub first: Label,
    pub second: Label,
    /// `(a, b)`: point `a` of the first set lies next to point `b` of the second.
    pub pairing: Vec<(PointId, PointId)>,
    pub direction: PhiDirection,
}

impl PhiDescriptor {
    pub fn is_annihilation(&self) -> bool {
        matches!(self.direction, PhiDirection::Annihilate)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Attachment {
    pub small: PointId,
    pub big: PointId,
    /// `Final`: the small point directly follows the big one; `Initial`: directly precedes it.
    pub side: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PsiDescriptor {
    pub big: Label,
    pub small: Label,
    /// Sorted by small point.
    pub attachment: Vec<Attachment>,
}

impl PsiDescriptor {
    /// The descriptor of the move undoing this one.
    pub fn mirror(&self) -> PsiDescriptor {
        PsiDescriptor {
            big: self.big,
            small: self.small,
            attachment: self
                .attachment
                .iter()
                .map(|a| Attachment { side: a.side.flip(), ..a.clone() })
                .collect(),
        }
    }
}

/// A renaming of singular sets and marked points; leaves the diagram's isomorphism class fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relabeling {
    pub labels: Vec<(Label, Label)>,
    pub points: Vec<(PointId, PointId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveDescriptor {
    Phi(PhiDescriptor),
    Psi(PsiDescriptor),
    Relabel(Relabeling),
}

/// Neighbours along the circle.
fn next_on_circle(d: &GaussDiagram, slot: Slot) -> PointId {
    let c = &d.circles()[slot.circle];
    c[(slot.index + 1) % c.len()]
}

fn prev_on_circle(d: &GaussDiagram, slot: Slot) -> PointId {
    let c = &d.circles()[slot.circle];
    c[(slot.index + c.len() - 1) % c.len()]
}

/// Sides of `a` on which `b` sits directly next to it (`Final`: after, `Initial`: before).
fn adjacent_sides(d: &GaussDiagram, slots: &HashMap<PointId, Slot>, a: PointId, b: PointId) -> Vec<Sign> {
    let (sa, sb) = (slots[&a], slots[&b]);
    if sa.circle != sb.circle || a == b {
        return Vec::new();
    }
    let mut sides = Vec::new();
    if next_on_circle(d, sa) == b {
        sides.push(Sign::Final);
    }
    if prev_on_circle(d, sa) == b {
        sides.push(Sign::Initial);
    }
    sides
}

/// `order(second) == reverse(transport(order(first)))` along the pairing.
fn orders_opposite(first: &OrientedCyclicOrder, second: &OrientedCyclicOrder, pairing: &[(PointId, PointId)]) -> bool {
    let map: HashMap<PointId, PointId> = pairing.iter().copied().collect();
    first.renamed(&map).reversed().cyclic_eq(second)
}

/// Some choice of one side per branch puts the endpoints facing the partner into one arc.
fn fan_exists(order: &OrientedCyclicOrder, choices: &[(PointId, Vec<Sign>)]) -> bool {
    fn go(order: &OrientedCyclicOrder, choices: &[(PointId, Vec<Sign>)], acc: &mut BTreeSet<Endpoint>) -> bool {
        let Some(((p, sides), rest)) = choices.split_first() else {
            return order.is_consecutive(acc);
        };
        for &s in sides {
            let e = Endpoint::new(*p, s);
            acc.insert(e);
            let ok = go(order, rest, acc);
            acc.remove(&e);
            if ok {
                return true;
            }
        }
        false
    }
    go(order, choices, &mut BTreeSet::new())
}

/// Injective assignments of `targets` to `sources`, `options[i]` listing source `i`'s choices.
fn matchings<T: Copy + Ord>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    fn go<T: Copy + Ord>(options: &[Vec<T>], used: &mut BTreeSet<T>, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        let Some((first, rest)) = options.split_first() else {
            out.push(acc.clone());
            return;
        };
        for &t in first {
            if used.insert(t) {
                acc.push(t);
                go(rest, used, acc, out);
                acc.pop();
                used.remove(&t);
            }
        }
    }
    let mut out = Vec::new();
    go(options, &mut BTreeSet::new(), &mut Vec::new(), &mut out);
    out
}

fn check_phi_pair(
    d: &GaussDiagram,
    slots: &HashMap<PointId, Slot>,
    first: Label,
    second: Label,
    pairing: &[(PointId, PointId)],
) -> bool {
    let (Some(oa), Some(ob)) = (d.order(first), d.order(second)) else {
        return false;
    };
    if first == second || oa.branches() != ob.branches() || pairing.len() != oa.branches() {
        return false;
    }
    let a_pts: BTreeSet<PointId> = pairing.iter().map(|x| x.0).collect();
    let b_pts: BTreeSet<PointId> = pairing.iter().map(|x| x.1).collect();
    if a_pts != oa.points() || b_pts != ob.points() {
        return false;
    }
    let mut choices = Vec::new();
    for &(a, b) in pairing {
        let sides = adjacent_sides(d, slots, a, b);
        if sides.is_empty() {
            return false;
        }
        choices.push((a, sides));
    }
    orders_opposite(oa, ob, pairing) && fan_exists(oa, &choices)
}

/// Every applicable Φ annihilation, sorted by labels and pairing.
pub fn enumerate_phi_annihilations(d: &GaussDiagram) -> Vec<PhiDescriptor> {
    let slots = d.slots();
    let labels: Vec<Label> = d.set_labels().collect();
    let mut out = Vec::new();
    for (i, &first) in labels.iter().enumerate() {
        for &second in &labels[i + 1..] {
            let (oa, ob) = (&d.orders()[&first], &d.orders()[&second]);
            if oa.branches() != ob.branches() {
                continue;
            }
            let a_pts: Vec<PointId> = oa.points().into_iter().collect();
            let b_pts = ob.points();
            let options: Vec<Vec<PointId>> = a_pts
                .iter()
                .map(|&a| b_pts.iter().copied().filter(|&b| !adjacent_sides(d, &slots, a, b).is_empty()).collect())
                .collect();
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            for m in matchings(&options) {
                let pairing: Vec<(PointId, PointId)> = a_pts.iter().copied().zip(m).collect();
                if check_phi_pair(d, &slots, first, second, &pairing) {
                    out.push(PhiDescriptor { first, second, pairing, direction: PhiDirection::Annihilate });
                }
            }
        }
    }
    out
}

/// The creation descriptor that undoes annihilating `m` on `d`.
pub fn creation_inverse(d: &GaussDiagram, m: &PhiDescriptor) -> Result<PhiDescriptor, MoveError> {
    let slots = d.slots();
    if !m.is_annihilation() || !check_phi_pair(d, &slots, m.first, m.second, &m.pairing) {
        return Err(MoveError::NotApplicable("not an applicable annihilation".into()));
    }
    let removed: BTreeSet<PointId> = m.pairing.iter().flat_map(|&(a, b)| [a, b]).collect();
    // (pair index, circle, first element position, first_ahead)
    let mut pairs: Vec<(usize, usize, usize, bool)> = Vec::new();
    for (j, &(a, b)) in m.pairing.iter().enumerate() {
        let sa = slots[&a];
        // pick the reading in which b directly follows a, or a directly follows b
        let a_ahead = next_on_circle(d, sa) == b;
        let lead = if a_ahead { sa } else { slots[&b] };
        pairs.push((j, sa.circle, lead.index, a_ahead));
    }
    let mut strands: Vec<Option<StrandInsertion>> = vec![None; m.pairing.len()];
    let mut sequence: Vec<usize> = Vec::new();
    // insert pairs circle by circle in circle order, starting after a surviving point
    let mut circles: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    circles.sort_unstable();
    circles.dedup();
    for c in circles {
        let pts = &d.circles()[c];
        let len = pts.len();
        let start = (0..len).find(|&i| !removed.contains(&pts[i]));
        let mut on_circle: Vec<&(usize, usize, usize, bool)> = pairs.iter().filter(|p| p.1 == c).collect();
        // sort by position, reading the circle from just after the start point
        let base = start.map_or_else(
            || on_circle.iter().map(|p| p.2).min().unwrap_or(0),
            |s| s + 1,
        );
        on_circle.sort_by_key(|p| (p.2 + len - base % len) % len);
        for &&(j, _, idx, a_ahead) in &on_circle {
            let prev = pts[(idx + len - 1) % len];
            let first_of_circle = start.is_none() && sequence.iter().all(|&k| pairs[k].1 != c);
            let after = if first_of_circle { None } else { Some(prev) };
            strands[j] = Some(StrandInsertion { circle: c, after, first_ahead: a_ahead });
            sequence.push(j);
        }
    }
    let pairing: Vec<(PointId, PointId)> = sequence.iter().map(|&j| m.pairing[j]).collect();
    let strands: Vec<StrandInsertion> = sequence.iter().map(|&j| strands[j].clone().expect("every pair placed")).collect();
    Ok(PhiDescriptor {
        first: m.first,
        second: m.second,
        pairing,
        direction: PhiDirection::Create(Placement {
            strands,
            first_order: d.orders()[&m.first].clone(),
            second_order: d.orders()[&m.second].clone(),
        }),
    })
}

/// Applies a Φ move given by `m`.
pub fn apply_phi(d: &GaussDiagram, m: &PhiDescriptor) -> Result<GaussDiagram, MoveError> {
    match &m.direction {
        PhiDirection::Annihilate => {
            if !check_phi_pair(d, &d.slots(), m.first, m.second, &m.pairing) {
                return Err(MoveError::NotApplicable(format!("Φ annihilation of {} and {}", m.first, m.second)));
            }
            Ok(d.without_sets(&[m.first, m.second]))
        }
        PhiDirection::Create(placement) => create(d, m, placement),
    }
}

fn create(d: &GaussDiagram, m: &PhiDescriptor, placement: &Placement) -> Result<GaussDiagram, MoveError> {
    let n = m.pairing.len();
    if n < 2 || placement.strands.len() != n {
        return Err(MoveError::NotApplicable("Φ creation needs at least two aligned pairs".into()));
    }
    if m.first == m.second || d.order(m.first).is_some() || d.order(m.second).is_some() {
        return Err(MoveError::NotApplicable("Φ creation labels must be new and distinct".into()));
    }
    let (mut circles, mut labels, mut orders) = d.clone().into_parts();
    for (&(a, b), s) in m.pairing.iter().zip(&placement.strands) {
        if a == b || labels.contains_key(&a) || labels.contains_key(&b) {
            return Err(MoveError::NotApplicable(format!("points {a} and {b} must be new")));
        }
        let circle = circles
            .get_mut(s.circle)
            .ok_or_else(|| MoveError::NotApplicable(format!("no circle {}", s.circle)))?;
        let pos = match s.after {
            None => 0,
            Some(p) => {
                circle
                    .iter()
                    .position(|&x| x == p)
                    .ok_or_else(|| MoveError::NotApplicable(format!("point {p} is not on circle {}", s.circle)))?
                    + 1
            }
        };
        let pair = if s.first_ahead { [a, b] } else { [b, a] };
        circle.splice(pos..pos, pair);
        labels.insert(a, m.first);
        labels.insert(b, m.second);
    }
    orders.insert(m.first, placement.first_order.clone());
    orders.insert(m.second, placement.second_order.clone());
    let out = GaussDiagram::new(circles, labels, orders)?;
    if !check_phi_pair(&out, &out.slots(), m.first, m.second, &m.pairing) {
        return Err(MoveError::NotApplicable("created sets do not form a Φ pair".into()));
    }
    Ok(out)
}

fn check_psi(d: &GaussDiagram, slots: &HashMap<PointId, Slot>, m: &PsiDescriptor) -> bool {
    let (Some(big), Some(small)) = (d.order(m.big), d.order(m.small)) else {
        return false;
    };
    let (n, k) = (big.branches(), small.branches());
    if m.big == m.small || k < 2 || k >= n || m.attachment.len() != k {
        return false;
    }
    let smalls: BTreeSet<PointId> = m.attachment.iter().map(|a| a.small).collect();
    let bigs: BTreeSet<PointId> = m.attachment.iter().map(|a| a.big).collect();
    if smalls != small.points() || bigs.len() != k || !bigs.is_subset(&big.points()) {
        return false;
    }
    for a in &m.attachment {
        if !adjacent_sides(d, slots, a.big, a.small).contains(&a.side) {
            return false;
        }
    }
    let facing: BTreeSet<Endpoint> = m.attachment.iter().map(|a| Endpoint::new(a.big, a.side)).collect();
    if !big.is_consecutive(&facing) {
        return false;
    }
    let induced = big.induced(&bigs).expect("attached points lie in the big set");
    let pairing: Vec<(PointId, PointId)> = m.attachment.iter().map(|a| (a.big, a.small)).collect();
    orders_opposite(&induced, small, &pairing)
}

/// Every applicable Ψ move, sorted.
pub fn enumerate_psi_moves(d: &GaussDiagram) -> Vec<PsiDescriptor> {
    let slots = d.slots();
    let mut out = Vec::new();
    for (&big, bo) in d.orders() {
        if bo.branches() < 3 {
            continue;
        }
        let big_pts = bo.points();
        for (&small, so) in d.orders() {
            let k = so.branches();
            if small == big || k >= bo.branches() {
                continue;
            }
            let small_pts: Vec<PointId> = so.points().into_iter().collect();
            let options: Vec<Vec<(PointId, Sign)>> = small_pts
                .iter()
                .map(|&s| {
                    big_pts
                        .iter()
                        .flat_map(|&b| adjacent_sides(d, &slots, b, s).into_iter().map(move |side| (b, side)))
                        .collect()
                })
                .collect();
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            for choice in matchings_by_first(&options) {
                let attachment = small_pts
                    .iter()
                    .zip(choice)
                    .map(|(&s, (b, side))| Attachment { small: s, big: b, side })
                    .collect();
                let m = PsiDescriptor { big, small, attachment };
                if check_psi(d, &slots, &m) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    out
}

/// Like [`matchings`], but injective only in the first component.
fn matchings_by_first(options: &[Vec<(PointId, Sign)>]) -> Vec<Vec<(PointId, Sign)>> {
    fn go(
        options: &[Vec<(PointId, Sign)>],
        used: &mut BTreeSet<PointId>,
        acc: &mut Vec<(PointId, Sign)>,
        out: &mut Vec<Vec<(PointId, Sign)>>,
    ) {
        let Some((first, rest)) = options.split_first() else {
            out.push(acc.clone());
            return;
        };
        for &(b, side) in first {
            if used.insert(b) {
                acc.push((b, side));
                go(rest, used, acc, out);
                acc.pop();
                used.remove(&b);
            }
        }
    }
    let mut out = Vec::new();
    go(options, &mut BTreeSet::new(), &mut Vec::new(), &mut out);
    out
}

/// Applies a Ψ move: every small point hops over its big point, the small order is reversed
/// and the big order is reversed on the attached branches.
pub fn apply_psi(d: &GaussDiagram, m: &PsiDescriptor) -> Result<GaussDiagram, MoveError> {
    let slots = d.slots();
    if !check_psi(d, &slots, m) {
        return Err(MoveError::NotApplicable(format!("Ψ move of {} through {}", m.small, m.big)));
    }
    let (mut circles, labels, mut orders) = d.clone().into_parts();
    for a in &m.attachment {
        let sb = slots[&a.big];
        let circle = &mut circles[sb.circle];
        let len = circle.len();
        let other = match a.side {
            Sign::Final => (sb.index + 1) % len,
            Sign::Initial => (sb.index + len - 1) % len,
        };
        circle.swap(sb.index, other);
    }
    let bigs: BTreeSet<PointId> = m.attachment.iter().map(|a| a.big).collect();
    let new_big = reverse_subset_order(&orders[&m.big], &bigs);
    let new_small = orders[&m.small].reversed();
    orders.insert(m.big, new_big);
    orders.insert(m.small, new_small);
    Ok(GaussDiagram::from_parts_unchecked(circles, labels, orders))
}

/// Renames sets and points.
pub fn apply_relabel(d: &GaussDiagram, r: &Relabeling) -> Result<GaussDiagram, MoveError> {
    let lmap: HashMap<Label, Label> = r.labels.iter().copied().collect();
    let pmap: HashMap<PointId, PointId> = r.points.iter().copied().collect();
    if lmap.len() != r.labels.len() || pmap.len() != r.points.len() {
        return Err(MoveError::NotApplicable("relabeling repeats a source".into()));
    }
    let (circles, labels, orders) = d.clone().into_parts();
    let circles = circles
        .into_iter()
        .map(|c| c.into_iter().map(|p| *pmap.get(&p).unwrap_or(&p)).collect())
        .collect();
    let labels: BTreeMap<PointId, Label> = labels
        .into_iter()
        .map(|(p, l)| (*pmap.get(&p).unwrap_or(&p), *lmap.get(&l).unwrap_or(&l)))
        .collect();
    let orders: BTreeMap<Label, OrientedCyclicOrder> =
        orders.into_iter().map(|(l, o)| (*lmap.get(&l).unwrap_or(&l), o.renamed(&pmap))).collect();
    if labels.len() != d.labels().len() || orders.len() != d.orders().len() {
        return Err(MoveError::NotApplicable("relabeling is not injective".into()));
    }
    Ok(GaussDiagram::new(circles, labels, orders)?)
}

pub fn apply_move(d: &GaussDiagram, m: &MoveDescriptor) -> Result<GaussDiagram, MoveError> {
    match m {
        MoveDescriptor::Phi(phi) => apply_phi(d, phi),
        MoveDescriptor::Psi(psi) => apply_psi(d, psi),
        MoveDescriptor::Relabel(r) => apply_relabel(d, r),
    }
}
