//! Edge-path presentations of the fundamental group and a bounded Tietze simplifier.
//!
//! Simplification only ever applies Tietze transformations, so reaching the empty
//! presentation proves the group trivial. Failing to do so proves nothing.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub const DEFAULT_TIETZE_BUDGET: usize = 10_000;

/// Letters are `±(g + 1)` for generator `g`.
pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: BTreeSet<usize>,
    pub relators: Vec<Word>,
}

fn letter_gen(x: i32) -> usize {
    x.unsigned_abs() as usize - 1
}

fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    let (mut lo, mut hi) = (0, out.len());
    while hi - lo >= 2 && out[lo] == -out[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    out[lo..hi].to_vec()
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        if let Some(bad) = relators
            .iter()
            .flatten()
            .find(|&&x| x == 0 || letter_gen(x) >= generators)
        {
            return Err(Error::InvalidInput(format!("relator letter {bad} out of range")));
        }
        Ok(Presentation {
            generators: (0..generators).collect(),
            relators,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Free and cyclic reduction of every relator; empty relators are dropped.
    fn normalise(&mut self) {
        self.relators = self
            .relators
            .iter()
            .map(|r| free_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
    }

    fn occurrences(word: &[i32], g: usize) -> usize {
        word.iter().filter(|&&x| letter_gen(x) == g).count()
    }

    /// Removes generator `g` using relator `r`, in which it occurs exactly once.
    fn eliminate(&mut self, g: usize, r: usize) -> std::result::Result<usize, String> {
        if !self.generators.contains(&g) {
            return Err(format!("generator {g} is not present"));
        }
        let rel = self
            .relators
            .get(r)
            .ok_or_else(|| format!("relator {r} does not exist"))?
            .clone();
        if Self::occurrences(&rel, g) != 1 {
            return Err(format!("generator {g} does not occur exactly once in relator {r}"));
        }
        let pos = rel.iter().position(|&x| letter_gen(x) == g).unwrap();
        let sign = rel[pos].signum();
        // g^sign · w = 1 with w the cyclic remainder
        let w: Word = rel[pos + 1..].iter().chain(&rel[..pos]).copied().collect();
        let image = if sign > 0 { inverse(&w) } else { w };
        let image_inv = inverse(&image);
        self.relators.remove(r);
        let mut written = 0;
        for rel in &mut self.relators {
            if Self::occurrences(rel, g) == 0 {
                continue;
            }
            let mut out = Vec::with_capacity(rel.len() + image.len());
            for &x in rel.iter() {
                if letter_gen(x) == g {
                    out.extend(if x > 0 { &image } else { &image_inv });
                    written += image.len();
                } else {
                    out.push(x);
                }
            }
            *rel = out;
        }
        self.generators.remove(&g);
        self.normalise();
        Ok(written)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeMove {
    pub generator: usize,
    pub relator: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplification {
    pub trivial: bool,
    pub transcript: Vec<TietzeMove>,
    pub cost: usize,
    pub exhausted_budget: bool,
    pub remaining_generators: usize,
}

/// Greedy generator elimination. Each step picks the shortest relator containing some
/// generator exactly once (ties: lowest relator, then lowest generator). A step costs
/// one move plus the number of letters it writes.
pub fn simplify(presentation: &Presentation, budget: usize) -> Simplification {
    let mut p = presentation.clone();
    p.normalise();
    let mut transcript = Vec::new();
    let mut cost = 0;
    let mut exhausted_budget = false;
    while !p.is_trivial() {
        let choice = p
            .relators
            .iter()
            .enumerate()
            .filter_map(|(r, rel)| {
                let g = rel
                    .iter()
                    .map(|&x| letter_gen(x))
                    .filter(|&g| Presentation::occurrences(rel, g) == 1)
                    .min()?;
                Some((rel.len(), r, g))
            })
            .min();
        let Some((len, r, g)) = choice else { break };
        let others: usize = p
            .relators
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, rel)| Presentation::occurrences(rel, g))
            .sum();
        let step = 1 + others * (len - 1);
        if cost + step > budget {
            exhausted_budget = true;
            break;
        }
        let written = p.eliminate(g, r).expect("chosen move is valid");
        debug_assert_eq!(written, others * (len - 1));
        cost += step;
        transcript.push(TietzeMove {
            generator: g,
            relator: r,
        });
    }
    Simplification {
        trivial: p.is_trivial(),
        transcript,
        cost,
        exhausted_budget,
        remaining_generators: p.generators.len(),
    }
}

/// Re-applies a transcript, validating every move. Returns the final presentation.
pub fn replay(presentation: &Presentation, transcript: &[TietzeMove]) -> std::result::Result<Presentation, String> {
    let mut p = presentation.clone();
    p.normalise();
    for (i, m) in transcript.iter().enumerate() {
        p.eliminate(m.generator, m.relator)
            .map_err(|e| format!("move {i}: {e}"))?;
    }
    Ok(p)
}

/// Presentation of `π₁(L, v₀)` for connected nonempty `L`: one generator per edge off a
/// breadth-first spanning tree rooted at the least vertex, one relator per triangle.
pub fn edge_path_presentation(complex: &SimplicialComplex) -> Result<Presentation> {
    if complex.is_empty() || !complex.is_connected() {
        return Err(Error::Precondition(
            "fundamental group needs a connected nonempty complex".into(),
        ));
    }
    let g = complex.one_skeleton();
    let n = complex.vertex_count();
    let mut tree = BTreeSet::new();
    let mut seen = VertexSet::singleton(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbours(u).difference(seen) {
            seen.insert(w);
            tree.insert((u.min(w), u.max(w)));
            queue.push_back(w);
        }
    }
    debug_assert_eq!(seen.len(), n);
    let edges = complex.simplices(1);
    let mut edge_letter = std::collections::HashMap::new();
    let mut count = 0usize;
    for e in &edges {
        let v = e.to_vec();
        if !tree.contains(&(v[0], v[1])) {
            count += 1;
            edge_letter.insert((v[0], v[1]), count as i32);
        }
    }
    let letter = |a: usize, b: usize| edge_letter.get(&(a, b)).copied();
    let relators = complex
        .simplices(2)
        .into_iter()
        .map(|t| {
            let v = t.to_vec();
            let (a, b, c) = (v[0], v[1], v[2]);
            [letter(a, b), letter(b, c), letter(a, c).map(|x| -x)]
                .into_iter()
                .flatten()
                .collect()
        })
        .collect();
    Presentation::new(count, relators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn free_reduction() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(free_reduce(&[1, 2, 3, -1]), vec![2, 3]);
        assert!(free_reduce(&[1, -1]).is_empty());
    }

    #[test]
    fn simplex_has_trivial_presentation_after_simplification() {
        let p = edge_path_presentation(&standard::simplex(3)).unwrap();
        let s = simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert!(s.trivial);
        assert!(replay(&p, &s.transcript).unwrap().is_trivial());
    }

    #[test]
    fn square_keeps_a_free_generator() {
        let p = edge_path_presentation(&standard::cycle(4)).unwrap();
        assert_eq!(p.generators.len(), 1);
        assert!(p.relators.is_empty());
        assert!(!simplify(&p, 100).trivial);
    }

    #[test]
    fn octahedron_is_simply_connected() {
        let p = edge_path_presentation(&standard::octahedron()).unwrap();
        assert_eq!(p.generators.len(), 12 - 5);
        let s = simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert!(s.trivial);
        assert!(replay(&p, &s.transcript).unwrap().is_trivial());
    }

    #[test]
    fn replay_rejects_bad_moves() {
        let p = Presentation::new(2, vec![vec![1, 1, 2]]).unwrap();
        assert!(replay(
            &p,
            &[TietzeMove {
                generator: 0,
                relator: 0
            }]
        )
        .is_err());
        assert!(replay(
            &p,
            &[TietzeMove {
                generator: 1,
                relator: 3
            }]
        )
        .is_err());
        let ok = replay(
            &p,
            &[TietzeMove {
                generator: 1,
                relator: 0,
            }],
        )
        .unwrap();
        assert_eq!(ok.generators.len(), 1);
    }

    #[test]
    fn budget_stops_simplification() {
        let p = edge_path_presentation(&standard::octahedron()).unwrap();
        let s = simplify(&p, 1);
        assert!(!s.trivial);
        assert!(s.exhausted_budget);
    }

    #[test]
    fn disconnected_is_a_precondition_error() {
        let l = SimplicialComplex::points(&["a", "b"]);
        assert!(matches!(edge_path_presentation(&l), Err(Error::Precondition(_))));
    }
}
