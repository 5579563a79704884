//! Realizability on the sphere via the ribbon graph of a Gauss diagram.
//!
//! Every singular set becomes a vertex whose rotation is its oriented cyclic order, every
//! arc of a circle between consecutive marked points becomes an edge. The diagram comes
//! from a curve on the sphere iff every connected component has genus zero.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::MoveError;
use crate::gauss::{Endpoint, GaussDiagram, Label, Sign};
use crate::moves::{apply_move, MoveDescriptor};

/// Half-edges are endpoints of branches.
#[derive(Clone, Debug)]
pub struct RibbonGraph {
    /// One vertex per singular set; rotation counterclockwise.
    pub vertices: Vec<(Label, Vec<Endpoint>)>,
    /// `(u, Final)` joined to `(v, Initial)` for every arc `u -> v` of a circle.
    pub edges: Vec<(Endpoint, Endpoint)>,
    /// Circles without marked points.
    pub free_loops: usize,
    partner: HashMap<Endpoint, Endpoint>,
    rotation_next: HashMap<Endpoint, Endpoint>,
    vertex_of: HashMap<Endpoint, usize>,
}

pub fn ribbon_graph(d: &GaussDiagram) -> RibbonGraph {
    let mut vertices = Vec::new();
    let mut rotation_next = HashMap::new();
    let mut vertex_of = HashMap::new();
    for (&label, order) in d.orders() {
        let seq = order.sequence().to_vec();
        for (i, &h) in seq.iter().enumerate() {
            rotation_next.insert(h, seq[(i + 1) % seq.len()]);
            vertex_of.insert(h, vertices.len());
        }
        vertices.push((label, seq));
    }
    let mut edges = Vec::new();
    let mut partner = HashMap::new();
    let mut free_loops = 0;
    for circle in d.circles() {
        if circle.is_empty() {
            free_loops += 1;
            continue;
        }
        for (i, &u) in circle.iter().enumerate() {
            let v = circle[(i + 1) % circle.len()];
            let (hu, hv) = (Endpoint::new(u, Sign::Final), Endpoint::new(v, Sign::Initial));
            partner.insert(hu, hv);
            partner.insert(hv, hu);
            edges.push((hu, hv));
        }
    }
    RibbonGraph { vertices, edges, free_loops, partner, rotation_next, vertex_of }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
}

impl ComponentReport {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceStructure {
    /// Boundary walks; each directed arc is named by the half-edge it leaves from.
    pub faces: Vec<Vec<Endpoint>>,
    /// `V - E + F` over all vertices (free loops excluded).
    pub euler: i64,
    pub components: Vec<ComponentReport>,
    pub free_loops: usize,
}

impl RibbonGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex indices of each connected component, in order of their first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, self.vertex_of[a]), find(&mut parent, self.vertex_of[b]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Traces the boundary walks: after arc `h`, continue with the rotation successor of the
    /// half-edge it arrives at.
    pub fn faces(&self) -> FaceStructure {
        let mut half_edges: Vec<Endpoint> = self.vertices.iter().flat_map(|(_, r)| r.iter().copied()).collect();
        half_edges.sort();
        let mut done: HashMap<Endpoint, usize> = HashMap::new();
        let mut faces = Vec::new();
        for &h0 in &half_edges {
            if done.contains_key(&h0) {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = h0;
            while !done.contains_key(&h) {
                done.insert(h, faces.len());
                walk.push(h);
                h = self.rotation_next[&self.partner[&h]];
            }
            debug_assert_eq!(h, h0);
            faces.push(walk);
        }
        let components = self
            .components()
            .into_iter()
            .map(|vs| {
                let vertices = vs.len();
                let half: usize = vs.iter().map(|&v| self.vertices[v].1.len()).sum();
                let edges = half / 2;
                let mut face_ids: Vec<usize> = vs
                    .iter()
                    .flat_map(|&v| self.vertices[v].1.iter().map(|h| done[h]))
                    .collect();
                face_ids.sort_unstable();
                face_ids.dedup();
                let faces = face_ids.len();
                let euler = vertices as i64 - edges as i64 + faces as i64;
                ComponentReport { vertices, edges, faces, genus: ((2 - euler) / 2) as usize }
            })
            .collect();
        let euler = self.vertices.len() as i64 - self.edges.len() as i64 + faces.len() as i64;
        FaceStructure { faces, euler, components, free_loops: self.free_loops }
    }
}

/// Face structure of the diagram's ribbon graph.
pub fn faces(d: &GaussDiagram) -> FaceStructure {
    ribbon_graph(d).faces()
}

/// Whether the diagram comes from a curve on the sphere: every component has genus 0.
pub fn is_realizable(d: &GaussDiagram) -> bool {
    faces(d).components.iter().all(|c| c.genus == 0)
}

/// Applies a Ψ move or Φ annihilation to a realizable diagram and reports whether the
/// result is realizable too.
pub fn check_lemma_preservation(d: &GaussDiagram, m: &MoveDescriptor) -> Result<bool, MoveError> {
    match m {
        MoveDescriptor::Psi(_) => {}
        MoveDescriptor::Phi(phi) if phi.is_annihilation() => {}
        _ => return Err(MoveError::NotApplicable("only Ψ moves and Φ annihilations are checked".into())),
    }
    if !is_realizable(d) {
        return Err(MoveError::NotApplicable("starting diagram is not realizable".into()));
    }
    Ok(is_realizable(&apply_move(d, m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::CactusWord;
    use crate::closure::close;

    #[test]
    fn figure_eight_faces() {
        for turn in [Sign::Initial, Sign::Final] {
            let d = GaussDiagram::figure_eight(turn);
            let g = ribbon_graph(&d);
            assert_eq!((g.vertex_count(), g.edge_count()), (1, 2));
            let f = g.faces();
            assert_eq!(f.faces.len(), 3);
            assert_eq!(f.euler, 2);
            assert!(is_realizable(&d));
        }
    }

    #[test]
    fn free_loops_only() {
        let d = GaussDiagram::unknot(2);
        let g = ribbon_graph(&d);
        assert_eq!((g.vertex_count(), g.free_loops), (0, 2));
        assert!(is_realizable(&d));
        assert!(g.faces().components.is_empty());
    }

    #[test]
    fn triple_point_closure() {
        let d = close(&CactusWord::from_pairs(3, &[(1, 3)]).unwrap());
        let g = ribbon_graph(&d);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.vertices[0].1.len(), 6);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.faces().euler, 2);
    }

    #[test]
    fn every_arc_is_used_once() {
        let d = close(&CactusWord::from_pairs(4, &[(1, 3), (2, 4), (1, 2)]).unwrap());
        let f = faces(&d);
        let total: usize = f.faces.iter().map(|w| w.len()).sum();
        assert_eq!(total, 2 * ribbon_graph(&d).edge_count());
    }
}
