//! Cactus group words, relation rewrites and the map onto the symmetric group.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::WordError;

/// The generator `s(p,q)` of the cactus group on `n` strands.
///
/// Reverses the strand positions `p..=q` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    p: usize,
    q: usize,
    n: usize,
}

impl Generator {
    pub fn new(p: usize, q: usize, n: usize) -> Result<Self, WordError> {
        if p == 0 || p >= q || q > n {
            return Err(WordError::BadGenerator { p, q, n });
        }
        Ok(Generator { p, q, n })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of strands meeting at the intersection point of this generator.
    pub fn width(&self) -> usize {
        self.q - self.p + 1
    }

    fn disjoint(&self, other: &Generator) -> bool {
        self.q < other.p || other.q < self.p
    }

    /// Strictly nested: `other`'s interval lies inside ours and differs from it.
    fn contains(&self, other: &Generator) -> bool {
        self.p <= other.p && other.q <= self.q && self != other
    }

    /// The generator `s(p+q-r, p+q-m)`: `other` conjugated by `self`.
    fn mirror(&self, other: &Generator) -> Generator {
        let s = self.p + self.q;
        Generator { p: s - other.q, q: s - other.p, n: self.n }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s({},{})", self.p, self.q)
    }
}

/// A permutation of `1..=n` in one-line notation: `images[i - 1]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &i in &images {
            if i == 0 || i > n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&i| other.apply(i)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i + 1 == j)
    }

    /// Cycles in order of their smallest element, each starting there.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A word in the generators of the cactus group on `n` strands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CactusWord {
    n: usize,
    letters: Vec<Generator>,
}

impl CactusWord {
    pub fn identity(n: usize) -> Self {
        CactusWord { n, letters: Vec::new() }
    }

    pub fn new(n: usize, letters: Vec<Generator>) -> Result<Self, WordError> {
        if let Some(g) = letters.iter().find(|g| g.n != n) {
            return Err(WordError::MixedStrandCount { expected: n, found: g.n });
        }
        Ok(CactusWord { n, letters })
    }

    /// Builds a word from `(p, q)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, WordError> {
        let letters = pairs
            .iter()
            .map(|&(p, q)| Generator::new(p, q, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CactusWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for CactusWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for g in &self.letters {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

impl FromStr for CactusWord {
    type Err = WordError;

    /// Parses `n=<int>` followed by whitespace-separated `s(p,q)` tokens.
    fn from_str(text: &str) -> Result<Self, WordError> {
        let mut tokens = text.split_whitespace();
        let header = tokens.next().ok_or(WordError::MissingHeader)?;
        let n = header
            .strip_prefix("n=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| WordError::BadToken(header.to_string()))?;
        let mut letters = Vec::new();
        for tok in tokens {
            let inner = tok
                .strip_prefix("s(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| WordError::BadToken(tok.to_string()))?;
            let (p, q) = inner.split_once(',').ok_or_else(|| WordError::BadToken(tok.to_string()))?;
            let p = p.trim().parse().map_err(|_| WordError::BadToken(tok.to_string()))?;
            let q = q.trim().parse().map_err(|_| WordError::BadToken(tok.to_string()))?;
            letters.push(Generator::new(p, q, n)?);
        }
        Ok(CactusWord { n, letters })
    }
}

/// Reversal of the positions `p..=q`, fixing everything else.
pub fn perm_of_generator(g: &Generator) -> Permutation {
    let mut images: Vec<usize> = (1..=g.n).collect();
    for i in 0..=(g.q - g.p) {
        images[g.p + i - 1] = g.q - i;
    }
    Permutation { images }
}

/// Image of a word in the symmetric group. Letters act left to right on strand positions,
/// so `perm_image(w).apply(i)` is the bottom position of the strand that starts at `i`.
pub fn perm_image(w: &CactusWord) -> Permutation {
    w.letters
        .iter()
        .fold(Permutation::identity(w.n), |acc, g| acc.then(&perm_of_generator(g)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// `s s = 1`
    C1,
    /// commuting disjoint intervals
    C2,
    /// `s(p,q) s(m,r) = s(p+q-r, p+q-m) s(p,q)` for nested intervals
    C3,
}

/// Which side of the relation is matched at `position`.
///
/// For C1, `Forward` deletes a square and `Backward` inserts one. For C3, `Forward` matches
/// the outer generator first (`s(p,q) s(m,r)`), `Backward` matches it second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

/// A located relation in a word: letters `position` and `position + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub direction: Direction,
    pub position: usize,
    pub first: Generator,
    pub second: Generator,
}

impl RelationInstance {
    /// The letters this instance produces in place of the matched pair.
    pub fn replacement(&self) -> Vec<Generator> {
        match (self.kind, self.direction) {
            (RelationKind::C1, Direction::Forward) => Vec::new(),
            (RelationKind::C1, Direction::Backward) => vec![self.first, self.first],
            (RelationKind::C2, _) => vec![self.second, self.first],
            (RelationKind::C3, Direction::Forward) => {
                vec![self.first.mirror(&self.second), self.first]
            }
            (RelationKind::C3, Direction::Backward) => {
                vec![self.second, self.second.mirror(&self.first)]
            }
        }
    }

    /// The instance undoing this one on the rewritten word.
    pub fn inverse(&self) -> RelationInstance {
        let repl = self.replacement();
        match (self.kind, self.direction) {
            (RelationKind::C1, Direction::Forward) => RelationInstance {
                direction: Direction::Backward,
                ..*self
            },
            (RelationKind::C1, Direction::Backward) => RelationInstance {
                direction: Direction::Forward,
                ..*self
            },
            (kind, direction) => RelationInstance {
                kind,
                direction: match (kind, direction) {
                    (RelationKind::C3, Direction::Forward) => Direction::Backward,
                    (RelationKind::C3, Direction::Backward) => Direction::Forward,
                    (_, d) => d,
                },
                position: self.position,
                first: repl[0],
                second: repl[1],
            },
        }
    }
}

/// All relation instances matching adjacent letter pairs, in position order.
///
/// Square insertions are not reported since they can occur anywhere.
pub fn find_relations(w: &CactusWord) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for (position, pair) in w.letters.windows(2).enumerate() {
        let (first, second) = (pair[0], pair[1]);
        let inst = |kind, direction| RelationInstance { kind, direction, position, first, second };
        if first == second {
            out.push(inst(RelationKind::C1, Direction::Forward));
        } else if first.disjoint(&second) {
            out.push(inst(RelationKind::C2, Direction::Forward));
        } else if first.contains(&second) {
            out.push(inst(RelationKind::C3, Direction::Forward));
        } else if second.contains(&first) {
            out.push(inst(RelationKind::C3, Direction::Backward));
        }
    }
    out
}

fn matches(w: &CactusWord, rel: &RelationInstance) -> bool {
    match (rel.kind, rel.direction) {
        (RelationKind::C1, Direction::Backward) => {
            rel.position <= w.len() && rel.first.n == w.n && rel.first == rel.second
        }
        _ => {
            w.letters.get(rel.position) == Some(&rel.first)
                && w.letters.get(rel.position + 1) == Some(&rel.second)
                && match rel.kind {
                    RelationKind::C1 => rel.first == rel.second,
                    RelationKind::C2 => rel.first.disjoint(&rel.second),
                    RelationKind::C3 => match rel.direction {
                        Direction::Forward => rel.first.contains(&rel.second),
                        Direction::Backward => rel.second.contains(&rel.first),
                    },
                }
        }
    }
}

/// Rewrites `w` at the located relation.
pub fn apply_relation(w: &CactusWord, rel: &RelationInstance) -> Result<CactusWord, WordError> {
    if !matches(w, rel) {
        return Err(WordError::RelationMismatch(format!("{rel:?}")));
    }
    let mut letters = w.letters.clone();
    let matched = match (rel.kind, rel.direction) {
        (RelationKind::C1, Direction::Backward) => 0,
        _ => 2,
    };
    letters.splice(rel.position..rel.position + matched, rel.replacement());
    Ok(CactusWord { n: w.n, letters })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordEquality {
    Equal,
    Unknown,
}

/// Breadth-first search over relation rewrites from `w1`, at most `depth` rewrites deep.
///
/// This is a semi-decision: `Unknown` does not mean the words differ.
pub fn bounded_word_equal(w1: &CactusWord, w2: &CactusWord, depth: usize) -> WordEquality {
    if w1.n != w2.n || perm_image(w1) != perm_image(w2) {
        // different images in S_n, but we still only claim what we can show
        return WordEquality::Unknown;
    }
    let mut seen: HashSet<Vec<Generator>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w1.letters.clone());
    queue.push_back((w1.clone(), 0));
    while let Some((w, d)) = queue.pop_front() {
        if w.letters == w2.letters {
            return WordEquality::Equal;
        }
        if d == depth {
            continue;
        }
        for rel in find_relations(&w) {
            let next = apply_relation(&w, &rel).expect("found relation applies");
            if seen.insert(next.letters.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    WordEquality::Unknown
}
