//! Gauss diagrams: oriented circles carrying marked points, grouped into singular sets,
//! each singular set carrying an oriented cyclic order on the endpoints of its branches.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u32);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Label of a singular set (one intersection point of the curve).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

/// Which end of a branch: `Initial` is where the curve enters the intersection point,
/// `Final` where it leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Initial,
    Final,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Initial => Sign::Final,
            Sign::Final => Sign::Initial,
        }
    }

    pub fn as_int(self) -> i8 {
        match self {
            Sign::Initial => -1,
            Sign::Final => 1,
        }
    }

    pub fn from_int(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Initial),
            1 => Some(Sign::Final),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_int())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Sign::from_int(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be -1 or 1, got {v}")))
    }
}

/// One end of one branch at an intersection point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Endpoint {
    pub point: PointId,
    pub sign: Sign,
}

impl Endpoint {
    pub fn new(point: PointId, sign: Sign) -> Self {
        Endpoint { point, sign }
    }

    pub fn opposite(self) -> Self {
        Endpoint { point: self.point, sign: self.sign.flip() }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Initial => '-',
            Sign::Final => '+',
        };
        write!(f, "({},{})", self.point, s)
    }
}

/// A cyclic order on `X x {-1, +1}` in which position `i + k` holds the opposite endpoint
/// of position `i`, `k = |X|`. Stored as the full length-`2k` sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Endpoint>", into = "Vec<Endpoint>")]
pub struct OrientedCyclicOrder {
    seq: Vec<Endpoint>,
}

impl TryFrom<Vec<Endpoint>> for OrientedCyclicOrder {
    type Error = DiagramError;

    fn try_from(seq: Vec<Endpoint>) -> Result<Self, DiagramError> {
        OrientedCyclicOrder::new(seq)
    }
}

impl From<OrientedCyclicOrder> for Vec<Endpoint> {
    fn from(o: OrientedCyclicOrder) -> Self {
        o.seq
    }
}

impl OrientedCyclicOrder {
    pub fn new(seq: Vec<Endpoint>) -> Result<Self, DiagramError> {
        if seq.is_empty() || seq.len() % 2 != 0 {
            return Err(DiagramError::BadOrder(format!("length {} is not a positive even number", seq.len())));
        }
        let mut seen = BTreeSet::new();
        for e in &seq {
            if !seen.insert(*e) {
                return Err(DiagramError::BadOrder(format!("endpoint {e} repeated")));
            }
        }
        let order = OrientedCyclicOrder { seq };
        if !order.is_antipodal() {
            return Err(DiagramError::BadOrder("antipodal property fails".into()));
        }
        Ok(order)
    }

    /// Builds the order whose first half is `half`; the second half is forced.
    pub fn from_half(half: &[Endpoint]) -> Result<Self, DiagramError> {
        let mut seq = half.to_vec();
        seq.extend(half.iter().map(|e| e.opposite()));
        Self::new(seq)
    }

    pub(crate) fn from_seq_unchecked(seq: Vec<Endpoint>) -> Self {
        debug_assert!(OrientedCyclicOrder { seq: seq.clone() }.is_antipodal());
        OrientedCyclicOrder { seq }
    }

    fn is_antipodal(&self) -> bool {
        let k = self.seq.len() / 2;
        (0..k).all(|i| self.seq[i + k] == self.seq[i].opposite())
    }

    pub fn sequence(&self) -> &[Endpoint] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Number of branches.
    pub fn branches(&self) -> usize {
        self.seq.len() / 2
    }

    /// The points whose endpoints are ordered.
    pub fn points(&self) -> BTreeSet<PointId> {
        self.seq.iter().map(|e| e.point).collect()
    }

    pub fn position(&self, e: Endpoint) -> Option<usize> {
        self.seq.iter().position(|x| *x == e)
    }

    /// Restriction to the branches in `subset`.
    pub fn induced(&self, subset: &BTreeSet<PointId>) -> Result<Self, DiagramError> {
        let seq: Vec<Endpoint> = self.seq.iter().copied().filter(|e| subset.contains(&e.point)).collect();
        if seq.is_empty() {
            return Err(DiagramError::BadOrder("restriction to an empty subset".into()));
        }
        if seq.len() != 2 * subset.len() {
            return Err(DiagramError::BadOrder("subset is not contained in the ground set".into()));
        }
        Ok(OrientedCyclicOrder { seq })
    }

    /// The same cyclic order read backwards.
    pub fn reversed(&self) -> Self {
        let mut seq = self.seq.clone();
        seq.reverse();
        OrientedCyclicOrder { seq }
    }

    /// Renames branches; points missing from `map` keep their name.
    pub fn renamed(&self, map: &HashMap<PointId, PointId>) -> Self {
        let seq = self
            .seq
            .iter()
            .map(|e| Endpoint::new(*map.get(&e.point).unwrap_or(&e.point), e.sign))
            .collect();
        OrientedCyclicOrder { seq }
    }

    /// Equality as cyclic sequences.
    pub fn cyclic_eq(&self, other: &Self) -> bool {
        if self.seq.len() != other.seq.len() {
            return false;
        }
        let Some(shift) = other.position(self.seq[0]) else {
            return false;
        };
        let n = self.seq.len();
        (0..n).all(|i| self.seq[i] == other.seq[(i + shift) % n])
    }

    /// Rotation starting at the smallest endpoint; equal for cyclically equal orders.
    pub fn normalized(&self) -> Self {
        let start = (0..self.seq.len()).min_by_key(|&i| self.seq[i]).unwrap_or(0);
        let mut seq = self.seq.clone();
        seq.rotate_left(start);
        OrientedCyclicOrder { seq }
    }

    /// Whether `set` occupies a contiguous arc of the cyclic sequence.
    pub fn is_consecutive(&self, set: &BTreeSet<Endpoint>) -> bool {
        let n = self.seq.len();
        if set.is_empty() || set.len() == n {
            return true;
        }
        if set.iter().any(|e| self.position(*e).is_none()) {
            return false;
        }
        // a contiguous arc has exactly one entry point
        let entries = (0..n)
            .filter(|&i| set.contains(&self.seq[i]) && !set.contains(&self.seq[(i + n - 1) % n]))
            .count();
        entries == 1
    }
}

impl fmt::Display for OrientedCyclicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.seq {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Circles with labeled marked points; no order information.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoughDiagram {
    /// Each circle is the cyclic sequence of its marked points along its orientation.
    pub circles: Vec<Vec<PointId>>,
    pub labels: BTreeMap<PointId, Label>,
}

impl RoughDiagram {
    /// Marked points grouped by label.
    pub fn singular_sets(&self) -> BTreeMap<Label, BTreeSet<PointId>> {
        let mut sets: BTreeMap<Label, BTreeSet<PointId>> = BTreeMap::new();
        for (&p, &l) in &self.labels {
            sets.entry(l).or_default().insert(p);
        }
        sets
    }
}

/// Location of a marked point: circle index and position along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub circle: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussDiagram {
    rough: RoughDiagram,
    orders: BTreeMap<Label, OrientedCyclicOrder>,
}

impl GaussDiagram {
    pub fn new(
        circles: Vec<Vec<PointId>>,
        labels: BTreeMap<PointId, Label>,
        orders: BTreeMap<Label, OrientedCyclicOrder>,
    ) -> Result<Self, DiagramError> {
        let d = GaussDiagram { rough: RoughDiagram { circles, labels }, orders };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(
        circles: Vec<Vec<PointId>>,
        labels: BTreeMap<PointId, Label>,
        orders: BTreeMap<Label, OrientedCyclicOrder>,
    ) -> Self {
        let d = GaussDiagram { rough: RoughDiagram { circles, labels }, orders };
        debug_assert_eq!(d.validate(), Ok(()));
        d
    }

    /// `count` circles without marked points.
    pub fn unknot(count: usize) -> Self {
        GaussDiagram {
            rough: RoughDiagram { circles: vec![Vec::new(); count], labels: BTreeMap::new() },
            orders: BTreeMap::new(),
        }
    }

    /// One circle through a single double point; `turn` picks one of the two mirror images.
    pub fn figure_eight(turn: Sign) -> Self {
        let (a, b) = (PointId(0), PointId(1));
        let order = OrientedCyclicOrder::from_half(&[Endpoint::new(a, Sign::Initial), Endpoint::new(b, turn)])
            .expect("valid order");
        let labels = [(a, Label(0)), (b, Label(0))].into_iter().collect();
        GaussDiagram::new(vec![vec![a, b]], labels, [(Label(0), order)].into_iter().collect()).expect("valid diagram")
    }

    pub fn rough(&self) -> &RoughDiagram {
        &self.rough
    }

    pub fn circles(&self) -> &[Vec<PointId>] {
        &self.rough.circles
    }

    pub fn labels(&self) -> &BTreeMap<PointId, Label> {
        &self.rough.labels
    }

    pub fn orders(&self) -> &BTreeMap<Label, OrientedCyclicOrder> {
        &self.orders
    }

    pub fn order(&self, label: Label) -> Option<&OrientedCyclicOrder> {
        self.orders.get(&label)
    }

    pub fn label_of(&self, p: PointId) -> Option<Label> {
        self.rough.labels.get(&p).copied()
    }

    pub fn set_points(&self, label: Label) -> BTreeSet<PointId> {
        self.orders.get(&label).map(|o| o.points()).unwrap_or_default()
    }

    pub fn set_labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.orders.keys().copied()
    }

    pub fn point_count(&self) -> usize {
        self.rough.labels.len()
    }

    /// Circle index and position of every marked point.
    pub fn slots(&self) -> HashMap<PointId, Slot> {
        let mut out = HashMap::new();
        for (circle, pts) in self.rough.circles.iter().enumerate() {
            for (index, &p) in pts.iter().enumerate() {
                out.insert(p, Slot { circle, index });
            }
        }
        out
    }

    /// Smallest point id not in use.
    pub fn fresh_point(&self) -> PointId {
        PointId(self.rough.labels.keys().next_back().map_or(0, |p| p.0 + 1))
    }

    pub fn fresh_label(&self) -> Label {
        Label(self.orders.keys().next_back().map_or(0, |l| l.0 + 1))
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut placed = BTreeSet::new();
        for &p in self.rough.circles.iter().flatten() {
            if !placed.insert(p) {
                return Err(DiagramError::DuplicatePoint(p));
            }
            if !self.rough.labels.contains_key(&p) {
                return Err(DiagramError::UnlabeledPoint(p));
            }
        }
        if let Some(&p) = self.rough.labels.keys().find(|p| !placed.contains(p)) {
            return Err(DiagramError::UnplacedPoint(p));
        }
        let sets = self.rough.singular_sets();
        for (&label, pts) in &sets {
            if pts.len() < 2 {
                return Err(DiagramError::SingletonSet(label));
            }
            let order = self.orders.get(&label).ok_or(DiagramError::MissingOrder(label))?;
            let mut seen = BTreeSet::new();
            for e in order.sequence() {
                if !pts.contains(&e.point) {
                    return Err(DiagramError::ForeignEndpoint { label, point: e.point });
                }
                if !seen.insert(*e) {
                    return Err(DiagramError::DuplicateEndpoint { label, point: e.point });
                }
            }
            if seen.len() != 2 * pts.len() {
                return Err(DiagramError::IncompleteOrder(label));
            }
            if !order.is_antipodal() {
                return Err(DiagramError::AntipodalViolation(label));
            }
        }
        if let Some(&label) = self.orders.keys().find(|l| !sets.contains_key(l)) {
            return Err(DiagramError::UnknownSet(label));
        }
        Ok(())
    }

    /// Number of intersection points.
    pub fn crossing_count(&self) -> usize {
        self.orders.len()
    }

    /// Whether every intersection point is a double point.
    pub fn is_doodle(&self) -> bool {
        self.orders.values().all(|o| o.branches() == 2)
    }

    /// Sizes of the singular sets, sorted.
    pub fn set_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.orders.values().map(|o| o.branches()).collect();
        v.sort_unstable();
        v
    }

    /// Same diagram with each circle and each order rotated to a fixed start. Two diagrams
    /// with the same point ids and labels are identical iff their normal forms are equal.
    pub fn normalized(&self) -> GaussDiagram {
        let circles = self
            .rough
            .circles
            .iter()
            .map(|c| {
                let mut c = c.clone();
                if let Some(start) = (0..c.len()).min_by_key(|&i| c[i]) {
                    c.rotate_left(start);
                }
                c
            })
            .collect();
        let orders = self.orders.iter().map(|(&l, o)| (l, o.normalized())).collect();
        GaussDiagram { rough: RoughDiagram { circles, labels: self.rough.labels.clone() }, orders }
    }

    /// Identity of labeled diagrams up to the starting points of circles and orders.
    pub fn same_as(&self, other: &GaussDiagram) -> bool {
        self.normalized() == other.normalized()
    }

    /// Removes the singular sets in `labels` together with their marked points.
    pub fn without_sets(&self, labels: &[Label]) -> GaussDiagram {
        let gone: BTreeSet<PointId> = labels.iter().flat_map(|&l| self.set_points(l)).collect();
        let circles = self
            .rough
            .circles
            .iter()
            .map(|c| c.iter().copied().filter(|p| !gone.contains(p)).collect())
            .collect();
        let point_labels = self.rough.labels.iter().filter(|(p, _)| !gone.contains(p)).map(|(&p, &l)| (p, l)).collect();
        let orders = self
            .orders
            .iter()
            .filter(|(l, _)| !labels.contains(l))
            .map(|(&l, o)| (l, o.clone()))
            .collect();
        GaussDiagram::from_parts_unchecked(circles, point_labels, orders)
    }

    /// Replaces the order on one singular set.
    pub(crate) fn with_order(mut self, label: Label, order: OrientedCyclicOrder) -> GaussDiagram {
        debug_assert_eq!(self.orders.get(&label).map(|o| o.points()), Some(order.points()));
        self.orders.insert(label, order);
        self
    }

    pub(crate) fn into_parts(
        self,
    ) -> (Vec<Vec<PointId>>, BTreeMap<PointId, Label>, BTreeMap<Label, OrientedCyclicOrder>) {
        (self.rough.circles, self.rough.labels, self.orders)
    }

    /// Number of points on each circle, in circle order.
    pub fn circle_sizes(&self) -> Vec<usize> {
        self.rough.circles.iter().map(|c| c.len()).collect()
    }
}

/// Free-standing form of [`GaussDiagram::validate`].
pub fn validate(d: &GaussDiagram) -> Result<(), DiagramError> {
    d.validate()
}

/// Restriction of an oriented cyclic order to a nonempty subset of its branches.
pub fn induced_suborder(
    o: &OrientedCyclicOrder,
    subset: &BTreeSet<PointId>,
) -> Result<OrientedCyclicOrder, DiagramError> {
    o.induced(subset)
}
