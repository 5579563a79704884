//! Canonical encodings of Gauss diagrams up to renaming of labels and points, rotation of
//! each circle, and (optionally) permutation of the circles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign};

/// Whether circles may be permuted when comparing diagrams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ComponentMode {
    /// Circles are interchangeable (equivalence of curves in the sphere).
    #[default]
    Unlabeled,
    /// Each circle keeps its index.
    Labeled,
}

/// Totally ordered encoding; equal keys iff the diagrams are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn tokens(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl std::str::FromStr for CanonicalKey {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(CanonicalKey(Vec::new()));
        }
        s.split('.').map(str::parse).collect::<Result<_, _>>().map(CanonicalKey)
    }
}

/// Partial labeling: circles placed so far, with their rotations.
#[derive(Clone)]
struct State {
    used: Vec<bool>,
    placed: Vec<(usize, usize)>,
    labels: HashMap<Label, u32>,
    points: HashMap<PointId, u32>,
}

impl State {
    /// Tokens for circle `c` read from `rot`, extending the numbering as a side effect.
    fn extend(&mut self, d: &GaussDiagram, c: usize, rot: usize) -> Vec<u32> {
        let pts = &d.circles()[c];
        let mut tokens = Vec::with_capacity(pts.len() + 1);
        tokens.push(pts.len() as u32);
        for i in 0..pts.len() {
            let p = pts[(rot + i) % pts.len()];
            let next_point = self.points.len() as u32;
            self.points.insert(p, next_point);
            let l = d.label_of(p).expect("placed point is labeled");
            let next_label = self.labels.len() as u32;
            tokens.push(*self.labels.entry(l).or_insert(next_label));
        }
        self.used[c] = true;
        self.placed.push((c, rot));
        tokens
    }

    fn order_tokens(&self, d: &GaussDiagram) -> Vec<u32> {
        let mut by_number: Vec<(u32, &OrientedCyclicOrder)> =
            d.orders().iter().map(|(l, o)| (self.labels[l], o)).collect();
        by_number.sort_by_key(|(n, _)| *n);
        let mut out = Vec::new();
        for (_, o) in by_number {
            let enc: Vec<u32> = o
                .sequence()
                .iter()
                .map(|e| 2 * self.points[&e.point] + u32::from(e.sign == Sign::Final))
                .collect();
            out.extend(min_rotation(&enc));
        }
        out
    }
}

fn min_rotation(seq: &[u32]) -> Vec<u32> {
    let n = seq.len();
    (0..n)
        .map(|r| seq[r..].iter().chain(&seq[..r]).copied().collect::<Vec<u32>>())
        .min()
        .unwrap_or_default()
}

/// Canonical key together with the relabeled diagram realizing it.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonicalKey,
    pub diagram: GaussDiagram,
}

pub fn canonicalize(d: &GaussDiagram, mode: ComponentMode) -> Canonical {
    let (winner, key) = search(d, mode);
    Canonical { diagram: relabel(d, &winner), key }
}

fn search(d: &GaussDiagram, mode: ComponentMode) -> (State, CanonicalKey) {
    let circle_count = d.circles().len();
    let mut states = vec![State {
        used: vec![false; circle_count],
        placed: Vec::new(),
        labels: HashMap::new(),
        points: HashMap::new(),
    }];
    let mut prefix: Vec<u32> = vec![match mode {
        ComponentMode::Unlabeled => 0,
        ComponentMode::Labeled => 1,
    }];

    // Circle by circle, keep only the partial labelings whose encoding is smallest.
    for step in 0..circle_count {
        let mut best: Option<Vec<u32>> = None;
        let mut next_states = Vec::new();
        for state in &states {
            let candidates: Vec<usize> = match mode {
                ComponentMode::Labeled => vec![step],
                ComponentMode::Unlabeled => (0..circle_count).filter(|&c| !state.used[c]).collect(),
            };
            // skip circles we can already tell are too long
            let min_len = candidates.iter().map(|&c| d.circles()[c].len()).min().unwrap_or(0);
            for c in candidates {
                let len = d.circles()[c].len();
                if mode == ComponentMode::Unlabeled && len > min_len {
                    continue;
                }
                for rot in 0..len.max(1) {
                    let mut s = state.clone();
                    let tokens = s.extend(d, c, rot);
                    match &best {
                        Some(b) if tokens > *b => {}
                        Some(b) if tokens == *b => next_states.push(s),
                        _ => {
                            best = Some(tokens);
                            next_states.clear();
                            next_states.push(s);
                        }
                    }
                }
            }
        }
        prefix.extend(best.unwrap_or_default());
        states = next_states;
    }

    let (order_part, winner) = states
        .into_iter()
        .map(|s| (s.order_tokens(d), s))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("at least one labeling");
    prefix.extend(order_part);
    (winner, CanonicalKey(prefix))
}

fn relabel(d: &GaussDiagram, s: &State) -> GaussDiagram {
    let circles: Vec<Vec<PointId>> = s
        .placed
        .iter()
        .map(|&(c, rot)| {
            let pts = &d.circles()[c];
            (0..pts.len()).map(|i| PointId(s.points[&pts[(rot + i) % pts.len()]])).collect()
        })
        .collect();
    let labels = d.labels().iter().map(|(p, l)| (PointId(s.points[p]), Label(s.labels[l]))).collect();
    let orders: BTreeMap<Label, OrientedCyclicOrder> = d
        .orders()
        .iter()
        .map(|(l, o)| {
            let seq: Vec<Endpoint> =
                o.sequence().iter().map(|e| Endpoint::new(PointId(s.points[&e.point]), e.sign)).collect();
            (Label(s.labels[l]), OrientedCyclicOrder::from_seq_unchecked(seq).normalized())
        })
        .collect();
    GaussDiagram::from_parts_unchecked(circles, labels, orders)
}

/// Canonical key with interchangeable circles.
pub fn canonical_form(d: &GaussDiagram) -> CanonicalKey {
    canonicalize(d, ComponentMode::Unlabeled).key
}

pub fn canonical_form_with(d: &GaussDiagram, mode: ComponentMode) -> CanonicalKey {
    canonicalize(d, mode).key
}

/// The diagram relabeled into its canonical numbering (labels and points counted from 0).
pub fn canonical_diagram(d: &GaussDiagram, mode: ComponentMode) -> GaussDiagram {
    canonicalize(d, mode).diagram
}

/// Renaming of labels and points taking `a` onto `b`, circles kept in place.
pub fn isomorphism(a: &GaussDiagram, b: &GaussDiagram) -> Option<(Vec<(Label, Label)>, Vec<(PointId, PointId)>)> {
    let (sa, ka) = search(a, ComponentMode::Labeled);
    let (sb, kb) = search(b, ComponentMode::Labeled);
    if ka != kb {
        return None;
    }
    let back_l: HashMap<u32, Label> = sb.labels.iter().map(|(&l, &n)| (n, l)).collect();
    let back_p: HashMap<u32, PointId> = sb.points.iter().map(|(&p, &n)| (n, p)).collect();
    let mut labels: Vec<(Label, Label)> = sa.labels.iter().map(|(&l, n)| (l, back_l[n])).collect();
    let mut points: Vec<(PointId, PointId)> = sa.points.iter().map(|(&p, n)| (p, back_p[n])).collect();
    labels.sort();
    points.sort();
    Some((labels, points))
}
