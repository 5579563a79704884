#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use cactus_doodles::cactus::{CactusWord, Generator};
use cactus_doodles::canonical::canonical_form;
use cactus_doodles::closure::close;
use cactus_doodles::equivalence::{psi_orbit, MoveSequence, SearchOptions};
use cactus_doodles::gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign};
use cactus_doodles::moves::{
    apply_phi, apply_psi, creation_inverse, enumerate_phi_annihilations, enumerate_psi_moves, MoveDescriptor,
};
use cactus_doodles::peak::peak_sequence;
use cactus_doodles::CanonicalKey;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_generator<R: Rng>(rng: &mut R, n: usize) -> Generator {
    let p = rng.gen_range(1..n);
    let q = rng.gen_range(p + 1..=n);
    Generator::new(p, q, n).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> CactusWord {
    let letters = (0..len).map(|_| random_generator(rng, n)).collect();
    CactusWord::new(n, letters).unwrap()
}

pub fn closed(n: usize, pairs: &[(usize, usize)]) -> GaussDiagram {
    close(&CactusWord::from_pairs(n, pairs).unwrap())
}

fn all_orders(points: &[PointId]) -> Vec<OrientedCyclicOrder> {
    let k = points.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        for signs in 0..(1u32 << k) {
            let half: Vec<Endpoint> = perm
                .iter()
                .enumerate()
                .map(|(i, &j)| Endpoint::new(points[j], if signs >> i & 1 == 1 { Sign::Final } else { Sign::Initial }))
                .collect();
            let o = OrientedCyclicOrder::from_half(&half).unwrap().normalized();
            if seen.insert(o.clone()) {
                out.push(o);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn partitions(m: usize, max: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=m.min(max)).rev() {
        for mut rest in partitions(m - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Set partitions of `items` into blocks of size at least two.
fn set_partitions(items: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let Some((&head, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for mask in 1..(1u32 << rest.len()) {
        let block: Vec<u32> = std::iter::once(head)
            .chain(rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p))
            .collect();
        let left: Vec<u32> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &p)| p).collect();
        for mut tail in set_partitions(&left) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

/// Every diagram with exactly `m` marked points and no empty circles, one per isomorphism class.
pub fn all_diagrams(m: usize) -> Vec<GaussDiagram> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let points: Vec<u32> = (0..m as u32).collect();
    for shape in partitions(m, m) {
        let mut circles = Vec::new();
        let mut next = 0u32;
        for len in &shape {
            circles.push((next..next + *len as u32).map(PointId).collect::<Vec<_>>());
            next += *len as u32;
        }
        for blocks in set_partitions(&points) {
            let labels: BTreeMap<PointId, Label> = blocks
                .iter()
                .enumerate()
                .flat_map(|(l, b)| b.iter().map(move |&p| (PointId(p), Label(l as u32))))
                .collect();
            let options: Vec<Vec<OrientedCyclicOrder>> = blocks
                .iter()
                .map(|b| all_orders(&b.iter().map(|&p| PointId(p)).collect::<Vec<_>>()))
                .collect();
            let mut idx = vec![0usize; options.len()];
            loop {
                let orders = idx.iter().enumerate().map(|(l, &i)| (Label(l as u32), options[l][i].clone())).collect();
                let d = GaussDiagram::new(circles.clone(), labels.clone(), orders).unwrap();
                if seen.insert(canonical_form(&d)) {
                    out.push(d);
                }
                let Some(pos) = (0..idx.len()).find(|&l| idx[l] + 1 < options[l].len()) else {
                    break;
                };
                idx[pos] += 1;
                for l in 0..pos {
                    idx[l] = 0;
                }
            }
        }
    }
    out
}

/// A random diagram with `m` marked points and sets of size at most `max_set` (or 3).
pub fn random_diagram<R: Rng>(rng: &mut R, m: usize, max_set: usize) -> GaussDiagram {
    assert!(m >= 2);
    let mut sizes = Vec::new();
    let mut left = m;
    while left > 0 {
        let s = if left <= 3 { left } else { rng.gen_range(2..=max_set.min(left - 2)) };
        sizes.push(s);
        left -= s;
    }
    let mut points: Vec<PointId> = (0..m as u32).map(PointId).collect();
    points.shuffle(rng);
    let mut labels = BTreeMap::new();
    let mut orders = BTreeMap::new();
    let mut i = 0;
    for (l, &s) in sizes.iter().enumerate() {
        let mut half: Vec<Endpoint> = points[i..i + s]
            .iter()
            .map(|&p| Endpoint::new(p, if rng.gen() { Sign::Final } else { Sign::Initial }))
            .collect();
        half.shuffle(rng);
        for e in &half {
            labels.insert(e.point, Label(l as u32));
        }
        orders.insert(Label(l as u32), OrientedCyclicOrder::from_half(&half).unwrap());
        i += s;
    }
    points.shuffle(rng);
    let mut circles = Vec::new();
    let mut rest = &points[..];
    while !rest.is_empty() {
        let len = rng.gen_range(1..=rest.len());
        circles.push(rest[..len].to_vec());
        rest = &rest[len..];
    }
    GaussDiagram::new(circles, labels, orders).unwrap()
}

/// A random realizable doodle: the closure of a word in adjacent transpositions.
pub fn random_doodle<R: Rng>(rng: &mut R, max_points: usize) -> GaussDiagram {
    let n = rng.gen_range(2..=4);
    let len = rng.gen_range(0..=max_points / 2);
    let letters = (0..len)
        .map(|_| {
            let p = rng.gen_range(1..n);
            Generator::new(p, p + 1, n).unwrap()
        })
        .collect();
    close(&CactusWord::new(n, letters).unwrap())
}

/// A word with a square `s s` spliced in at a random place.
pub fn word_with_square<R: Rng>(rng: &mut R, n: usize, len: usize) -> CactusWord {
    let w = random_word(rng, n, len);
    let g = random_generator(rng, n);
    let at = rng.gen_range(0..=w.len());
    let mut letters = w.letters().to_vec();
    letters.splice(at..at, [g, g]);
    CactusWord::new(n, letters).unwrap()
}

/// A peak: undo an annihilation of a closed word with a square, walk randomly by Ψ, then
/// annihilate any available pair. `None` when the walk ends without an annihilation.
pub fn random_peak<R: Rng>(rng: &mut R, n: usize, len: usize, walk: usize) -> Option<MoveSequence> {
    let top = close(&word_with_square(rng, n, len));
    let phis = enumerate_phi_annihilations(&top);
    let kill = phis.choose(rng)?.clone();
    let start = apply_phi(&top, &kill).unwrap();
    let create = creation_inverse(&top, &kill).unwrap();
    let mut cur = apply_phi(&start, &create).unwrap();
    let mut psi = Vec::new();
    for _ in 0..walk {
        let Some(m) = enumerate_psi_moves(&cur).choose(rng).cloned() else {
            break;
        };
        cur = apply_psi(&cur, &m).unwrap();
        psi.push(MoveDescriptor::Psi(m));
    }
    let last = enumerate_phi_annihilations(&cur).choose(rng)?.clone();
    peak_sequence(&start, create, &psi, last).ok()
}

/// Every minimal diagram reachable from `d` by Ψ moves and Φ annihilations, one per class.
pub fn reduction_minima(d: &GaussDiagram, opts: &SearchOptions) -> Vec<GaussDiagram> {
    let mut seen = HashSet::from([canonical_form(d)]);
    let mut stack = vec![d.clone()];
    let mut minima = Vec::new();
    while let Some(x) = stack.pop() {
        let orbit = psi_orbit(&x, opts).unwrap();
        let mut reducible = false;
        for node in orbit.members.values() {
            for phi in enumerate_phi_annihilations(&node.diagram) {
                reducible = true;
                let y = apply_phi(&node.diagram, &phi).unwrap();
                if seen.insert(canonical_form(&y)) {
                    stack.push(y);
                }
            }
        }
        if !reducible {
            minima.push(x);
        }
    }
    minima
}

/// Smallest key of the Ψ-orbit of each diagram, deduplicated.
pub fn orbit_keys(ds: &[GaussDiagram], opts: &SearchOptions) -> std::collections::BTreeSet<CanonicalKey> {
    ds.iter().map(|d| psi_orbit(d, opts).unwrap().min_key().clone()).collect()
}

pub const CORPUS_WORDS: &[&str] = &[
    "n=1",
    "n=2",
    "n=2 s(1,2)",
    "n=3 s(1,3)",
    "n=4 s(1,4)",
    "n=2 s(1,2) s(1,2)",
    "n=3 s(1,3) s(1,3)",
    "n=3 s(1,3) s(1,2)",
    "n=3 s(2,3) s(1,3)",
    "n=3 s(1,3) s(1,3) s(1,2)",
    "n=3 s(1,2) s(2,3) s(1,2)",
    "n=4 s(1,2) s(3,4) s(1,4)",
    "n=4 s(1,4) s(2,3) s(1,4)",
    "n=4 s(1,3) s(2,4) s(1,2)",
    "n=5 s(1,5) s(2,4) s(1,3)",
    "n=5 s(1,2) s(2,5) s(3,4) s(1,5)",
];

/// A fixed collection of diagrams: hand-picked closures, the figure-eights, every diagram on
/// at most four points and some random closures.
pub fn corpus() -> Vec<GaussDiagram> {
    let mut out = vec![
        GaussDiagram::unknot(1),
        GaussDiagram::unknot(2),
        GaussDiagram::figure_eight(Sign::Initial),
        GaussDiagram::figure_eight(Sign::Final),
    ];
    out.extend(CORPUS_WORDS.iter().map(|w| close(&w.parse().unwrap())));
    for m in 2..=4 {
        out.extend(all_diagrams(m));
    }
    let mut r = rng(11);
    for i in 0..30 {
        out.push(close(&random_word(&mut r, 2 + i % 4, 1 + i % 5)));
    }
    out
}
