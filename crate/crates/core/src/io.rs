//! JSON interchange for diagrams:
//!
//! ```json
//! {"circles": [[0, 1]], "sets": {"A": {"points": [0, 1], "order": [[0, -1], [1, -1], [0, 1], [1, 1]]}}}
//! ```
//!
//! Cyclic sequences may start anywhere. Labels that are not all decimal integers are
//! numbered in sorted order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;
use crate::gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetJson {
    pub points: Vec<u32>,
    pub order: Vec<(u32, i8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub circles: Vec<Vec<u32>>,
    pub sets: BTreeMap<String, SetJson>,
}

impl DiagramJson {
    pub fn from_diagram(d: &GaussDiagram) -> Self {
        let circles = d.circles().iter().map(|c| c.iter().map(|p| p.0).collect()).collect();
        let sets = d
            .orders()
            .iter()
            .map(|(l, o)| {
                let set = SetJson {
                    points: o.points().into_iter().map(|p| p.0).collect(),
                    order: o.sequence().iter().map(|e| (e.point.0, e.sign.as_int())).collect(),
                };
                (l.0.to_string(), set)
            })
            .collect();
        DiagramJson { circles, sets }
    }

    pub fn to_diagram(&self) -> Result<GaussDiagram, DiagramError> {
        let numeric: Option<Vec<u32>> = self.sets.keys().map(|k| k.parse().ok()).collect();
        let label_of: BTreeMap<&String, Label> = match numeric {
            Some(nums) => self.sets.keys().zip(nums).map(|(k, n)| (k, Label(n))).collect(),
            None => self.sets.keys().enumerate().map(|(i, k)| (k, Label(i as u32))).collect(),
        };
        let mut labels = BTreeMap::new();
        let mut orders = BTreeMap::new();
        for (name, set) in &self.sets {
            let label = label_of[name];
            for &p in &set.points {
                if labels.insert(PointId(p), label).is_some() {
                    return Err(DiagramError::Format(format!("point {p} belongs to two sets")));
                }
            }
            let seq = set
                .order
                .iter()
                .map(|&(p, s)| {
                    Sign::from_int(s)
                        .map(|s| Endpoint::new(PointId(p), s))
                        .ok_or_else(|| DiagramError::Format(format!("sign {s} is not -1 or 1")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let order = OrientedCyclicOrder::new(seq).map_err(|e| match e {
                DiagramError::BadOrder(msg) if msg.contains("antipodal") => DiagramError::AntipodalViolation(label),
                other => other,
            })?;
            if order.points().len() * 2 != order.len() {
                return Err(DiagramError::BadOrder(format!("set {name}: inconsistent endpoints")));
            }
            orders.insert(label, order);
        }
        let circles = self.circles.iter().map(|c| c.iter().copied().map(PointId).collect()).collect();
        GaussDiagram::new(circles, labels, orders)
    }
}

pub fn to_json(d: &GaussDiagram) -> String {
    serde_json::to_string(&DiagramJson::from_diagram(d)).expect("diagram serializes")
}

pub fn to_json_pretty(d: &GaussDiagram) -> String {
    serde_json::to_string_pretty(&DiagramJson::from_diagram(d)).expect("diagram serializes")
}

pub fn from_json(text: &str) -> Result<GaussDiagram, DiagramError> {
    let raw: DiagramJson = serde_json::from_str(text).map_err(|e| DiagramError::Format(e.to_string()))?;
    raw.to_diagram()
}

/// `#[serde(with = ...)]` adapter for fields holding a diagram.
pub mod diagram_serde {
    use super::DiagramJson;
    use crate::gauss::GaussDiagram;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(d: &GaussDiagram, s: S) -> Result<S::Ok, S::Error> {
        DiagramJson::from_diagram(d).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GaussDiagram, D::Error> {
        DiagramJson::deserialize(d)?.to_diagram().map_err(serde::de::Error::custom)
    }
}
