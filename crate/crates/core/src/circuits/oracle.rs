//! Exhaustive search for negation-limited circuits, independent of the
//! prover.
//!
//! Without NOT gates the constructible signals over a generator set `G` form
//! the lattice generated by `G` under bitwise AND/OR. A nonzero pattern `o`
//! lies in that lattice iff for every row `r` of `o` the meet `m_r` of all
//! generators true at `r` exists and lies below `o`; then `o` is the join of
//! those meets. Zero is in the lattice iff the meet of all generators is
//! zero. The search branches on which lattice element to negate next, in
//! ascending order, so the first witness found is deterministic.

use std::collections::{BTreeSet, HashSet};

use super::{CircuitBuilder, CircuitError, CircuitProblem, Gate, NodeId, SignalPattern};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleResult {
    Witness(super::Circuit),
    Unsat,
}

struct Lattice {
    rows: usize,
    full: u64,
    // meet of all generators true at row r
    meets: Vec<Option<u64>>,
    bottom: u64,
}

impl Lattice {
    fn new(gens: &[u64], rows: usize) -> Self {
        let full = if rows == 64 {
            u64::MAX
        } else {
            (1u64 << rows) - 1
        };
        let meets = (0..rows)
            .map(|r| {
                gens.iter()
                    .filter(|&&g| g >> r & 1 == 1)
                    .fold(None, |acc: Option<u64>, &g| Some(acc.unwrap_or(full) & g))
            })
            .collect();
        let bottom = gens.iter().fold(full, |a, &g| a & g);
        Lattice {
            rows,
            full,
            meets,
            bottom,
        }
    }

    fn contains(&self, o: u64) -> bool {
        if o == 0 {
            return self.bottom == 0;
        }
        (0..self.rows)
            .filter(|r| o >> r & 1 == 1)
            .all(|r| self.meets[r].is_some_and(|m| m & !o == 0))
    }

    /// Every element, ascending.
    fn elements(&self) -> Vec<u64> {
        let generators: BTreeSet<u64> = self.meets.iter().flatten().copied().collect();
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut frontier: Vec<u64> = generators.iter().copied().collect();
        seen.extend(frontier.iter().copied());
        while let Some(x) = frontier.pop() {
            for &g in &generators {
                let y = x | g;
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        if self.bottom == 0 && !generators.is_empty() {
            seen.insert(0);
        }
        seen.into_iter().collect()
    }
}

/// The AND/OR closure of `gens` (no NOT gates), ascending by row bits.
pub fn lattice_closure(gens: &[SignalPattern]) -> Result<Vec<SignalPattern>, CircuitError> {
    let rows = gens.first().map_or(0, |g| g.len());
    if rows > 64 {
        return Err(CircuitError::OracleRange(rows));
    }
    let words: Vec<u64> = gens.iter().map(|g| g.to_u64().unwrap()).collect();
    Ok(Lattice::new(&words, rows)
        .elements()
        .into_iter()
        .map(|w| SignalPattern::from_u64(w, rows))
        .collect())
}

struct Search<'p> {
    problem: &'p CircuitProblem,
    inputs: Vec<u64>,
    outputs: Vec<u64>,
    visited: HashSet<Vec<u64>>,
}

impl Search<'_> {
    fn gens(&self, negs: &[u64]) -> Vec<u64> {
        self.inputs.iter().chain(negs).copied().collect()
    }

    fn solve(&mut self, negs: &mut Vec<u64>) -> bool {
        let lat = Lattice::new(&self.gens(negs), self.problem.rows);
        if self.outputs.iter().all(|&o| lat.contains(o)) {
            return true;
        }
        if negs.len() == self.problem.budget {
            return false;
        }
        for p in lat.elements() {
            let q = !p & lat.full;
            if lat.contains(q) {
                continue;
            }
            negs.push(q);
            let mut key = negs.clone();
            key.sort_unstable();
            if self.visited.insert(key) && self.solve(negs) {
                return true;
            }
            negs.pop();
        }
        false
    }
}

/// Builds `target` from `gens` as the join of row meets.
fn build_from(b: &mut CircuitBuilder, target: u64, gens: &[(u64, NodeId)], rows: usize) -> NodeId {
    let words: Vec<u64> = gens.iter().map(|g| g.0).collect();
    let lat = Lattice::new(&words, rows);
    let meet_of = |b: &mut CircuitBuilder, pred: &dyn Fn(u64) -> bool| -> NodeId {
        let mut acc: Option<NodeId> = None;
        for &(g, node) in gens {
            if pred(g) {
                acc = Some(match acc {
                    None => node,
                    Some(a) => b.gate(Gate::And(a, node)),
                });
            }
        }
        acc.expect("nonempty meet")
    };
    if let Some(&(_, node)) = gens.iter().find(|g| g.0 == target) {
        return node;
    }
    if target == 0 {
        return meet_of(b, &|_| true);
    }
    let mut used: BTreeSet<u64> = BTreeSet::new();
    let mut acc: Option<NodeId> = None;
    for r in 0..rows {
        if target >> r & 1 == 0 || !used.insert(lat.meets[r].unwrap()) {
            continue;
        }
        let m = meet_of(b, &|g| g >> r & 1 == 1);
        acc = Some(match acc {
            None => m,
            Some(a) => b.gate(Gate::Or(a, m)),
        });
    }
    acc.expect("target has a set row")
}

/// Searches for a circuit meeting `p` with at most `p.budget` NOT gates, or
/// proves that none exists.
pub fn brute_force_search(p: &CircuitProblem) -> Result<OracleResult, CircuitError> {
    if p.rows > 64 {
        return Err(CircuitError::OracleRange(p.rows));
    }
    let word = |s: &SignalPattern| s.to_u64().unwrap();
    let mut search = Search {
        problem: p,
        inputs: p.inputs.iter().map(word).collect(),
        outputs: p.outputs.iter().map(word).collect(),
        visited: HashSet::new(),
    };
    let mut negs = Vec::new();
    if !search.solve(&mut negs) {
        return Ok(OracleResult::Unsat);
    }
    let mut b = CircuitBuilder::new();
    let mut gens: Vec<(u64, NodeId)> = search
        .inputs
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, b.gate(Gate::Input(i))))
        .collect();
    for &q in &negs {
        let full = SignalPattern::ones(p.rows).to_u64().unwrap();
        let src = build_from(&mut b, !q & full, &gens, p.rows);
        let n = b.gate(Gate::Not(src));
        gens.push((q, n));
    }
    let outs = search
        .outputs
        .iter()
        .map(|&o| build_from(&mut b, o, &gens, p.rows))
        .collect();
    Ok(OracleResult::Witness(b.finish(outs)))
}
