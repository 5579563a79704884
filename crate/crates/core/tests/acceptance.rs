mod common;

use std::collections::BTreeMap;
use std::io::Write;

use cactus_doodles::cactus::{apply_relation, find_relations, Direction, RelationInstance, RelationKind};
use cactus_doodles::canonical::{canonical_form, ComponentMode};
use cactus_doodles::closure::component_count_check;
use cactus_doodles::equivalence::{doodle_equivalent, equivalent, min_crossing_number, minimize, SearchOptions};
use cactus_doodles::gauss::{Endpoint, GaussDiagram, Label, OrientedCyclicOrder, PointId, Sign};
use cactus_doodles::io::to_json;
use cactus_doodles::moves::{
    apply_phi, apply_psi, enumerate_phi_annihilations, enumerate_psi_moves, PhiDescriptor, PhiDirection, Placement,
    StrandInsertion,
};
use cactus_doodles::peak::{flatten_peak_traced, peak_case};
use cactus_doodles::realize::{check_lemma_preservation, faces, is_realizable};
use cactus_doodles::{close, perm_image, CactusWord, Generator, MoveDescriptor, PeakError};
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Writes past the test harness capture so every verdict shows up in the log.
fn report(n: usize, name: &str, outcome: Result<String, String>) {
    let line = match &outcome {
        Ok(detail) => format!("criterion {n} {name}: PASS ({detail})"),
        Err(detail) => format!("criterion {n} {name}: FAIL ({detail})"),
    };
    writeln!(std::io::stderr(), "\n{line}").unwrap();
    if let Err(detail) = outcome {
        panic!("criterion {n} failed: {detail}");
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn one_annihilation_apart(from: &GaussDiagram, to: &GaussDiagram) -> bool {
    let target = canonical_form(to);
    enumerate_phi_annihilations(from).iter().any(|m| canonical_form(&apply_phi(from, m).unwrap()) == target)
}

fn one_psi_apart(from: &GaussDiagram, to: &GaussDiagram) -> bool {
    let target = canonical_form(to);
    enumerate_psi_moves(from).iter().any(|m| canonical_form(&apply_psi(from, m).unwrap()) == target)
}

#[test]
fn relation_coherence() {
    let run = || -> Result<String, String> {
        let mut r = rng(1);
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        let mut words = 0;
        let short = |t: &BTreeMap<String, usize>| ["C1", "C2", "C3"].iter().any(|k| t.get(*k).copied().unwrap_or(0) < 60);
        while tally.values().sum::<usize>() < 600 || short(&tally) {
            let n = r.gen_range(2..=5);
            let len = r.gen_range(1..=4);
            let w = if r.gen_bool(0.3) { word_with_square(&mut r, n, len - 1) } else { random_word(&mut r, n, len) };
            words += 1;
            let mut instances = find_relations(&w);
            if r.gen_bool(0.2) {
                let g = random_generator(&mut r, n);
                let position = r.gen_range(0..=w.len());
                instances.push(RelationInstance {
                    kind: RelationKind::C1,
                    direction: Direction::Backward,
                    position,
                    first: g,
                    second: g,
                });
            }
            for rel in instances {
                let w2 = apply_relation(&w, &rel).map_err(|e| e.to_string())?;
                let (d, d2) = (close(&w), close(&w2));
                check(equivalent(&d, &d2, &opts()).unwrap(), || format!("{w} and {w2} are not equivalent"))?;
                let forced = match (rel.kind, rel.direction) {
                    (RelationKind::C1, Direction::Forward) => one_annihilation_apart(&d, &d2),
                    (RelationKind::C1, Direction::Backward) => one_annihilation_apart(&d2, &d),
                    (RelationKind::C2, _) => canonical_form(&d) == canonical_form(&d2),
                    (RelationKind::C3, _) => one_psi_apart(&d, &d2),
                };
                check(forced, || format!("{:?} instance {w} -> {w2} is not a single move", rel.kind))?;
                *tally.entry(format!("{:?}", rel.kind)).or_default() += 1;
            }
        }
        for kind in ["C1", "C2", "C3"] {
            check(tally.get(kind).copied().unwrap_or(0) >= 60, || format!("too few {kind} cases: {tally:?}"))?;
        }
        let total: usize = tally.values().sum();
        Ok(format!("{total} cases from {words} words, {tally:?}"))
    };
    report(1, "relation coherence", run());
}

#[test]
fn reduction_confluence() {
    let run = || -> Result<String, String> {
        let confluent = |d: &GaussDiagram| -> Result<(), String> {
            let minima = reduction_minima(d, &opts());
            let counts: std::collections::BTreeSet<usize> = minima.iter().map(|m| m.crossing_count()).collect();
            check(counts.len() == 1, || format!("minimal crossing counts {counts:?} for {}", to_json(d)))?;
            check(orbit_keys(&minima, &opts()).len() == 1, || format!("several minimal Ψ-orbits for {}", to_json(d)))?;
            let by_minimize = min_crossing_number(d, &opts()).unwrap();
            check(counts.contains(&by_minimize), || format!("minimize disagrees on {}", to_json(d)))
        };
        let mut exhaustive = 0;
        for m in 2..=5 {
            for d in all_diagrams(m) {
                confluent(&d)?;
                exhaustive += 1;
            }
        }
        let mut r = rng(2);
        for _ in 0..200 {
            let m = r.gen_range(2..=8);
            confluent(&random_diagram(&mut r, m, 4))?;
        }
        Ok(format!("{exhaustive} diagrams with at most 5 points, 200 random with at most 8"))
    };
    report(2, "confluence of reductions", run());
}

fn adjacent_word<R: Rng>(r: &mut R, n: usize, len: usize) -> CactusWord {
    let letters = (0..len)
        .map(|_| {
            let p = r.gen_range(1..n);
            Generator::new(p, p + 1, n).unwrap()
        })
        .collect();
    CactusWord::new(n, letters).unwrap()
}

#[test]
fn doodle_agreement() {
    let run = || -> Result<String, String> {
        let mut r = rng(3);
        let (mut same, mut different) = (0, 0);
        for i in 0..240 {
            let n = r.gen_range(2..=4);
            let len = r.gen_range(0..=3);
            let w = adjacent_word(&mut r, n, len);
            let w2 = match i % 3 {
                0 => {
                    let len = r.gen_range(0..=5);
                    adjacent_word(&mut r, n, len)
                }
                1 => {
                    let mut letters = w.letters().to_vec();
                    let g = adjacent_word(&mut r, n, 1).letters()[0];
                    let at = r.gen_range(0..=letters.len());
                    letters.splice(at..at, [g, g]);
                    CactusWord::new(n, letters).unwrap()
                }
                _ => match find_relations(&w).choose(&mut r) {
                    Some(rel) => apply_relation(&w, rel).unwrap(),
                    None => w.clone(),
                },
            };
            let (a, b) = (close(&w), close(&w2));
            check(a.point_count() <= 10 && b.point_count() <= 10, || format!("{w} or {w2} too large"))?;
            check(is_realizable(&a) && is_realizable(&b), || format!("{w} or {w2} not realizable"))?;
            let doodle = doodle_equivalent(&a, &b, ComponentMode::Unlabeled).unwrap();
            let full = equivalent(&a, &b, &opts()).unwrap();
            check(doodle == full, || format!("{w} vs {w2}: doodle {doodle}, cactus {full}"))?;
            if full {
                same += 1;
            } else {
                different += 1;
            }
        }
        check(same >= 40 && different >= 40, || format!("unbalanced sample: {same} equivalent, {different} not"))?;
        Ok(format!("240 pairs, {same} equivalent, {different} not"))
    };
    report(3, "doodle equivalence agrees", run());
}

/// Two double points created on an empty circle so that they interleave as `X Y X Y`.
fn interleaved_creation() -> PhiDescriptor {
    let (a, b, c, d) = (PointId(0), PointId(1), PointId(2), PointId(3));
    PhiDescriptor {
        first: Label(0),
        second: Label(1),
        pairing: vec![(a, b), (c, d)],
        direction: PhiDirection::Create(Placement {
            strands: vec![
                StrandInsertion { circle: 0, after: None, first_ahead: true },
                StrandInsertion { circle: 0, after: Some(b), first_ahead: true },
            ],
            first_order: OrientedCyclicOrder::from_half(&[Endpoint::new(a, Sign::Initial), Endpoint::new(c, Sign::Initial)])
                .unwrap(),
            second_order: OrientedCyclicOrder::from_half(&[Endpoint::new(b, Sign::Initial), Endpoint::new(d, Sign::Final)])
                .unwrap(),
        }),
    }
}

#[test]
fn realizability_preserved() {
    let run = || -> Result<String, String> {
        let mut r = rng(4);
        let (mut psi, mut phi) = (0, 0);
        while psi + phi < 600 || psi < 100 || phi < 100 {
            let n = r.gen_range(3..=5);
            let len = r.gen_range(2..=5);
            let mut d = close(&random_word(&mut r, n, len));
            let walk = r.gen_range(0..=3);
            for _ in 0..walk {
                let Some(m) = enumerate_psi_moves(&d).choose(&mut r).cloned() else { break };
                d = apply_psi(&d, &m).unwrap();
            }
            check(is_realizable(&d), || format!("walk left the realizable diagrams: {}", to_json(&d)))?;
            for m in enumerate_psi_moves(&d) {
                check(check_lemma_preservation(&d, &MoveDescriptor::Psi(m.clone())).unwrap(), || {
                    format!("Ψ {m:?} breaks {}", to_json(&d))
                })?;
                psi += 1;
            }
            for m in enumerate_phi_annihilations(&d) {
                check(check_lemma_preservation(&d, &MoveDescriptor::Phi(m.clone())).unwrap(), || {
                    format!("Φ {m:?} breaks {}", to_json(&d))
                })?;
                phi += 1;
            }
        }
        let twisted = apply_phi(&GaussDiagram::unknot(1), &interleaved_creation()).map_err(|e| e.to_string())?;
        check(!is_realizable(&twisted), || "the interleaved creation stayed realizable".into())?;
        let genus = faces(&twisted).components[0].genus;
        Ok(format!("{psi} Ψ and {phi} Φ-annihilation pairs; interleaved creation has genus {genus}"))
    };
    report(4, "realizability preserved", run());
}

#[test]
fn closure_sanity() {
    let run = || -> Result<String, String> {
        let mut r = rng(5);
        for _ in 0..600 {
            let n = r.gen_range(2..=6);
            let len = r.gen_range(0..=6);
            let w = random_word(&mut r, n, len);
            let d = close(&w);
            d.validate().map_err(|e| format!("{w}: {e}"))?;
            check(is_realizable(&d), || format!("{w} is not realizable"))?;
            check(d.crossing_count() == w.len(), || format!("{w} has {} sets", d.crossing_count()))?;
            for (t, g) in w.letters().iter().enumerate() {
                check(d.set_points(Label(t as u32)).len() == g.width(), || format!("{w}: set {t} has the wrong size"))?;
            }
            check(d.circles().len() == perm_image(&w).cycles().len(), || format!("{w}: wrong circle count"))?;
            check(component_count_check(&w), || format!("{w}: component count check"))?;
        }
        Ok("600 words with n <= 6 and length <= 6".into())
    };
    report(5, "closure sanity", run());
}

#[test]
fn euler_characteristic() {
    let run = || -> Result<String, String> {
        let mut connected = 0;
        for d in corpus() {
            let f = faces(&d);
            if !is_realizable(&d) || f.components.len() != 1 || f.free_loops > 0 {
                continue;
            }
            connected += 1;
            check(f.euler == 2, || format!("V-E+F = {} for {}", f.euler, to_json(&d)))?;
        }
        for turn in [Sign::Initial, Sign::Final] {
            let c = faces(&GaussDiagram::figure_eight(turn)).components[0].clone();
            check((c.vertices, c.edges, c.faces) == (1, 2, 3), || format!("figure-eight gives {c:?}"))?;
        }
        Ok(format!("{connected} connected realizable corpus diagrams; figure-eight (1,2,3)"))
    };
    report(6, "Euler characteristic", run());
}

#[test]
fn peak_flattening() {
    let run = || -> Result<String, String> {
        let mut r = rng(7);
        let mut flattened: BTreeMap<String, usize> = BTreeMap::new();
        let mut failures: Vec<String> = Vec::new();
        for i in 0..400 {
            let n = 3 + i % 3;
            let Some(seq) = random_peak(&mut r, n, 2, 1 + i % 4) else { continue };
            let case = peak_case(&seq).map_err(|e| e.to_string())?;
            let path = seq.replay().map_err(|e| format!("peak {i} does not replay: {e:?}"))?;
            let (first, last) = (&path[0], path.last().unwrap());
            match flatten_peak_traced(&seq) {
                Ok((out, route)) => {
                    let diagrams = out.replay().map_err(|e| format!("peak {i}: output does not replay: {e:?}"))?;
                    let bound = first.crossing_count().max(last.crossing_count());
                    check(canonical_form(&diagrams[0]) == canonical_form(first), || format!("peak {i}: start moved"))?;
                    check(canonical_form(diagrams.last().unwrap()) == canonical_form(last), || {
                        format!("peak {i}: end moved")
                    })?;
                    for d in &diagrams {
                        d.validate().map_err(|e| format!("peak {i}: {e}"))?;
                        check(d.crossing_count() <= bound && is_realizable(d), || {
                            format!("peak {i}: intermediate {} exceeds the bound or is not realizable", to_json(d))
                        })?;
                    }
                    *flattened.entry(format!("{case:?}/{route:?}")).or_default() += 1;
                }
                Err(PeakError::Unconfluent) => {
                    failures.push(format!("peak {i} ({case:?}): endpoints have different minimal Ψ-orbits"))
                }
                Err(e) => failures.push(format!("peak {i} ({case:?}): {e}")),
            }
        }
        let ok: usize = flattened.values().sum();
        for case in ["Same", "OneShared", "Disjoint"] {
            check(flattened.keys().any(|k| k.starts_with(case)), || format!("no flattened {case} peak"))?;
        }
        check(ok >= 50, || format!("only {ok} peaks flattened"))?;
        let summary = format!("{ok} flattened {flattened:?}");
        check(failures.is_empty(), || format!("{summary}; {} not flattened: {}", failures.len(), failures.join("; ")))?;
        Ok(summary)
    };
    report(7, "peak flattening", run());
}

/// Byte strings for every corpus diagram: canonical key, minimization and equivalence with
/// the next diagram.
fn fingerprint(corpus: &[GaussDiagram], parallel: bool) -> Vec<String> {
    let opts = SearchOptions { parallel, ..SearchOptions::default() };
    let mut out = Vec::new();
    for (i, d) in corpus.iter().enumerate() {
        out.push(canonical_form(d).to_string());
        let m = minimize(d, &opts).unwrap();
        out.push(to_json(&m.diagram));
        out.push(serde_json::to_string(&m.moves).unwrap());
        let next = &corpus[(i + 1) % corpus.len()];
        out.push(equivalent(d, next, &opts).unwrap().to_string());
    }
    out
}

#[test]
fn determinism() {
    let run = || -> Result<String, String> {
        let corpus = corpus();
        let pool = |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let baseline = fingerprint(&corpus, false);
        let again = fingerprint(&corpus, false);
        let one = pool(1).install(|| fingerprint(&corpus, true));
        let many = pool(4).install(|| fingerprint(&corpus, true));
        for (name, other) in [("second run", &again), ("1 thread", &one), ("4 threads", &many)] {
            let diff = baseline.iter().zip(other.iter()).position(|(a, b)| a != b);
            check(diff.is_none() && baseline.len() == other.len(), || format!("{name} differs at output {diff:?}"))?;
        }
        Ok(format!("{} diagrams, {} outputs identical across runs and 1/4 threads", corpus.len(), baseline.len()))
    };
    report(8, "determinism", run());
}
