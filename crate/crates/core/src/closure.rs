//! Closing a cactus-group word into a Gauss diagram.

use std::collections::BTreeMap;

use crate::cactus::{perm_image, CactusWord};
use crate::gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign};

/// Closes `w`: strands run downwards, letter `t` is an intersection point labeled `t`, and
/// the bottom end at position `i` is joined to the top end at position `i`.
///
/// At each intersection the branches are read counterclockwise starting at the top right:
/// top ends right to left (initial endpoints), then bottom ends left to right (final).
pub fn close(w: &CactusWord) -> GaussDiagram {
    let n = w.n();
    // strand_at[pos - 1] = the strand (named by its top position) currently at `pos`
    let mut strand_at: Vec<usize> = (1..=n).collect();
    let mut visits: Vec<Vec<PointId>> = vec![Vec::new(); n + 1];
    let mut labels = BTreeMap::new();
    let mut orders = BTreeMap::new();
    let mut next_id = 0u32;

    for (t, g) in w.letters().iter().enumerate() {
        let label = Label(t as u32);
        let mut point_at = Vec::with_capacity(g.width());
        for pos in g.p()..=g.q() {
            let id = PointId(next_id);
            next_id += 1;
            visits[strand_at[pos - 1]].push(id);
            labels.insert(id, label);
            point_at.push(id);
        }
        let half: Vec<Endpoint> = point_at.iter().rev().map(|&p| Endpoint::new(p, Sign::Initial)).collect();
        orders.insert(label, OrientedCyclicOrder::from_half(&half).expect("distinct branches"));
        strand_at[g.p() - 1..g.q()].reverse();
    }

    let perm = perm_image(w);
    let circles = perm
        .cycles()
        .into_iter()
        .map(|cycle| cycle.into_iter().flat_map(|s| visits[s].iter().copied()).collect())
        .collect();
    GaussDiagram::from_parts_unchecked(circles, labels, orders)
}

/// Whether `close(w)` has one circle per cycle of the permutation of `w`.
pub fn component_count_check(w: &CactusWord) -> bool {
    close(w).circles().len() == perm_image(w).cycles().len()
}
