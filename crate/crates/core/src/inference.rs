//! Hyper-resolution, UR-resolution and binary resolution.
//!
//! Every function here generates the conclusions in which a designated given
//! clause participates, either as the nucleus or as one of the satellites,
//! against the clauses already in the usable list. The given clause is
//! expected to be in the usable list itself, so it may also serve as
//! further satellites of the same inference.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::clause::{make_clause, Clause, ClauseId, Literal, Origin, Rule};
use crate::index::LitIndex;
use crate::unify::Unifier;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceRule {
    #[default]
    Hyper,
    Ur,
    Binary,
}

/// Which unit conclusions UR-resolution may emit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UrPolarity {
    #[default]
    Both,
    PositiveOnly,
    NegativeOnly,
}

impl UrPolarity {
    fn allows(self, positive: bool) -> bool {
        match self {
            UrPolarity::Both => true,
            UrPolarity::PositiveOnly => positive,
            UrPolarity::NegativeOnly => !positive,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleConfig {
    pub rule: InferenceRule,
    pub ur_polarity: UrPolarity,
}

impl RuleConfig {
    pub fn hyper() -> Self {
        RuleConfig {
            rule: InferenceRule::Hyper,
            ur_polarity: UrPolarity::Both,
        }
    }

    pub fn ur() -> Self {
        RuleConfig {
            rule: InferenceRule::Ur,
            ur_polarity: UrPolarity::Both,
        }
    }

    pub fn binary() -> Self {
        RuleConfig {
            rule: InferenceRule::Binary,
            ur_polarity: UrPolarity::Both,
        }
    }
}

/// A raw conclusion: instantiated literals plus provenance. Variables are
/// unifier slots, not yet normalised.
#[derive(Clone, Debug)]
pub struct Resolvent {
    pub literals: Vec<Literal>,
    pub origin: Origin,
}

impl Resolvent {
    /// Canonical clause, `None` for a tautology.
    pub fn into_clause(self) -> Option<Clause> {
        make_clause(self.literals, self.origin)
    }
}

/// The usable list together with the literal indexes the rules search.
#[derive(Default, Clone)]
pub struct Usable {
    clauses: Vec<Arc<Clause>>,
    // positive literals of positive clauses
    hyper_sat: LitIndex,
    // negative literals of clauses that have one
    hyper_nuc: LitIndex,
    // literals of unit clauses
    ur_sat: LitIndex,
    // literals of non-unit clauses
    ur_nuc: LitIndex,
    all: LitIndex,
}

impl Usable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let mut u = Usable::new();
        for c in clauses {
            u.insert(Arc::new(c));
        }
        u
    }

    pub fn insert(&mut self, c: Arc<Clause>) {
        let positive = c.is_positive();
        for (i, l) in c.literals().iter().enumerate() {
            self.all.insert(&c, i);
            if positive {
                self.hyper_sat.insert(&c, i);
            }
            if !l.positive {
                self.hyper_nuc.insert(&c, i);
            }
            if c.is_unit() {
                self.ur_sat.insert(&c, i);
            } else {
                self.ur_nuc.insert(&c, i);
            }
        }
        self.clauses.push(c);
    }

    pub fn remove(&mut self, id: ClauseId) -> bool {
        let Some(pos) = self.clauses.iter().position(|c| c.id == id) else {
            return false;
        };
        self.clauses.remove(pos);
        for ix in [
            &mut self.hyper_sat,
            &mut self.hyper_nuc,
            &mut self.ur_sat,
            &mut self.ur_nuc,
            &mut self.all,
        ] {
            ix.remove_clause(id);
        }
        true
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.clauses.iter().any(|c| c.id == id)
    }

    pub fn clauses(&self) -> &[Arc<Clause>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

/// Runs the configured rule for `given`.
pub fn infer(config: &RuleConfig, given: &Arc<Clause>, usable: &Usable) -> Vec<Resolvent> {
    match config.rule {
        InferenceRule::Hyper => hyper_resolve(given, usable),
        InferenceRule::Ur => ur_resolve_with(given, usable, config.ur_polarity),
        InferenceRule::Binary => binary_resolve(given, usable),
    }
}

/// One fixed satellite: the given clause clashing at nucleus literal `slot`
/// through its literal `lit`.
#[derive(Clone, Copy)]
struct Forced<'a> {
    slot: usize,
    clause: &'a Arc<Clause>,
    lit: usize,
}

struct Chosen<'a> {
    slot: usize,
    clause: &'a Arc<Clause>,
    lit: usize,
    offset: u32,
}

/// Clashing the given clause first binds the shared variables before the
/// index is searched for the remaining satellites.
fn forced_first(mut slots: Vec<usize>, forced: Option<Forced<'_>>) -> Vec<usize> {
    if let Some(f) = forced {
        if let Some(i) = slots.iter().position(|&s| s == f.slot) {
            slots[..=i].rotate_right(1);
        }
    }
    slots
}

/// Satellites in nucleus literal order, whatever order they were found in.
fn by_slot<'b, 'a>(chosen: &'b [Chosen<'a>]) -> Vec<&'b Chosen<'a>> {
    let mut v: Vec<&Chosen> = chosen.iter().collect();
    v.sort_by_key(|c| c.slot);
    v
}

// ---------------------------------------------------------------- hyper

/// Hyper-resolvents in which `given` participates.
///
/// As nucleus: every negative literal of `given` is clashed at once against
/// a positive literal of a positive usable clause. As satellite (when
/// `given` is positive): `given` clashes one negative literal of a usable
/// nucleus and usable positive clauses clash the rest. Conclusions contain
/// only positive literals.
pub fn hyper_resolve(given: &Arc<Clause>, usable: &Usable) -> Vec<Resolvent> {
    let mut out = Vec::new();
    let mut u = Unifier::new();
    if given.literals().iter().any(|l| !l.positive) {
        hyper_nucleus(given, None, usable, &mut u, &mut out);
    } else {
        for (gl, glit) in given.literals().iter().enumerate() {
            let query = u.resolve(&glit.atom, 0);
            for e in usable.hyper_nuc.unifiable(false, &query) {
                let forced = Forced {
                    slot: e.lit,
                    clause: given,
                    lit: gl,
                };
                hyper_nucleus(&e.clause, Some(forced), usable, &mut u, &mut out);
            }
        }
    }
    out
}

fn hyper_nucleus<'a>(
    nucleus: &'a Arc<Clause>,
    forced: Option<Forced<'a>>,
    usable: &'a Usable,
    u: &mut Unifier<'a>,
    out: &mut Vec<Resolvent>,
) {
    let slots: Vec<usize> = nucleus
        .literals()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.positive)
        .map(|(i, _)| i)
        .collect();
    let slots = forced_first(slots, forced);
    u.clear();
    u.reserve_slots(nucleus.num_vars() as usize);
    let mut chosen = Vec::with_capacity(slots.len());
    hyper_search(
        nucleus,
        &slots,
        0,
        nucleus.num_vars(),
        forced,
        usable,
        u,
        &mut chosen,
        out,
    );
}

#[allow(clippy::too_many_arguments)]
fn hyper_search<'a>(
    nucleus: &'a Arc<Clause>,
    slots: &[usize],
    depth: usize,
    next_offset: u32,
    forced: Option<Forced<'a>>,
    usable: &'a Usable,
    u: &mut Unifier<'a>,
    chosen: &mut Vec<Chosen<'a>>,
    out: &mut Vec<Resolvent>,
) {
    if depth == slots.len() {
        out.push(hyper_conclusion(nucleus, chosen, u));
        return;
    }
    let slot = slots[depth];
    let nlit = &nucleus.literals()[slot];
    let try_sat = |sat: &'a Arc<Clause>,
                   lit: usize,
                   u: &mut Unifier<'a>,
                   chosen: &mut Vec<Chosen<'a>>,
                   out: &mut Vec<Resolvent>| {
        let offset = next_offset;
        u.reserve_slots((offset + sat.num_vars()) as usize);
        let mark = u.mark();
        if u.unify(&nlit.atom, 0, &sat.literals()[lit].atom, offset) {
            chosen.push(Chosen {
                slot,
                clause: sat,
                lit,
                offset,
            });
            hyper_search(
                nucleus,
                slots,
                depth + 1,
                offset + sat.num_vars(),
                forced,
                usable,
                u,
                chosen,
                out,
            );
            chosen.pop();
            u.undo(mark);
        }
    };
    match forced {
        Some(f) if f.slot == slot => try_sat(f.clause, f.lit, u, chosen, out),
        _ => {
            // before the forced slot the given clause is excluded so each
            // combination is produced once
            let exclude = forced.filter(|f| slot < f.slot).map(|f| f.clause.id);
            let query = u.resolve(&nlit.atom, 0);
            for e in usable.hyper_sat.unifiable(true, &query) {
                if Some(e.clause.id) == exclude {
                    continue;
                }
                try_sat(&e.clause, e.lit, u, chosen, out);
            }
        }
    }
}

fn hyper_conclusion(nucleus: &Arc<Clause>, chosen: &[Chosen<'_>], u: &Unifier<'_>) -> Resolvent {
    let mut lits: Vec<Literal> = nucleus
        .literals()
        .iter()
        .filter(|l| l.positive)
        .map(|l| Literal::new(true, u.resolve(&l.atom, 0)))
        .collect();
    let mut parents = vec![nucleus.id];
    for c in by_slot(chosen) {
        parents.push(c.clause.id);
        for (i, l) in c.clause.literals().iter().enumerate() {
            if i != c.lit {
                lits.push(Literal::new(l.positive, u.resolve(&l.atom, c.offset)));
            }
        }
    }
    Resolvent {
        literals: lits,
        origin: Origin::derived(Rule::Hyper, parents),
    }
}

// ---------------------------------------------------------------- UR

/// UR-resolvents of either polarity in which `given` participates.
pub fn ur_resolve(given: &Arc<Clause>, usable: &Usable) -> Vec<Resolvent> {
    ur_resolve_with(given, usable, UrPolarity::Both)
}

/// UR-resolution: all but one literal of a non-unit nucleus are clashed
/// against unit satellites of opposite sign; the remaining literal, under
/// the simultaneous unifier, is the unit conclusion.
pub fn ur_resolve_with(
    given: &Arc<Clause>,
    usable: &Usable,
    polarity: UrPolarity,
) -> Vec<Resolvent> {
    let mut out = Vec::new();
    let mut u = Unifier::new();
    if given.is_empty() {
        return out;
    }
    if !given.is_unit() {
        for r in 0..given.len() {
            if polarity.allows(given.literals()[r].positive) {
                ur_nucleus(given, r, None, usable, &mut u, &mut out);
            }
        }
    } else {
        let glit = &given.literals()[0];
        let query = u.resolve(&glit.atom, 0);
        for e in usable.ur_nuc.unifiable(!glit.positive, &query) {
            let forced = Forced {
                slot: e.lit,
                clause: given,
                lit: 0,
            };
            for r in 0..e.clause.len() {
                if r != e.lit && polarity.allows(e.clause.literals()[r].positive) {
                    ur_nucleus(&e.clause, r, Some(forced), usable, &mut u, &mut out);
                }
            }
        }
    }
    out
}

fn ur_nucleus<'a>(
    nucleus: &'a Arc<Clause>,
    result: usize,
    forced: Option<Forced<'a>>,
    usable: &'a Usable,
    u: &mut Unifier<'a>,
    out: &mut Vec<Resolvent>,
) {
    let slots: Vec<usize> = (0..nucleus.len()).filter(|&i| i != result).collect();
    let slots = forced_first(slots, forced);
    u.clear();
    u.reserve_slots(nucleus.num_vars() as usize);
    let mut chosen = Vec::with_capacity(slots.len());
    ur_search(
        nucleus,
        result,
        &slots,
        0,
        nucleus.num_vars(),
        forced,
        usable,
        u,
        &mut chosen,
        out,
    );
}

#[allow(clippy::too_many_arguments)]
fn ur_search<'a>(
    nucleus: &'a Arc<Clause>,
    result: usize,
    slots: &[usize],
    depth: usize,
    next_offset: u32,
    forced: Option<Forced<'a>>,
    usable: &'a Usable,
    u: &mut Unifier<'a>,
    chosen: &mut Vec<Chosen<'a>>,
    out: &mut Vec<Resolvent>,
) {
    if depth == slots.len() {
        let r = &nucleus.literals()[result];
        let mut parents = vec![nucleus.id];
        parents.extend(by_slot(chosen).iter().map(|c| c.clause.id));
        out.push(Resolvent {
            literals: vec![Literal::new(r.positive, u.resolve(&r.atom, 0))],
            origin: Origin::derived(Rule::Ur, parents),
        });
        return;
    }
    let slot = slots[depth];
    let nlit = &nucleus.literals()[slot];
    let try_sat = |sat: &'a Arc<Clause>,
                   u: &mut Unifier<'a>,
                   chosen: &mut Vec<Chosen<'a>>,
                   out: &mut Vec<Resolvent>| {
        let offset = next_offset;
        u.reserve_slots((offset + sat.num_vars()) as usize);
        let mark = u.mark();
        if u.unify(&nlit.atom, 0, &sat.literals()[0].atom, offset) {
            chosen.push(Chosen {
                slot,
                clause: sat,
                lit: 0,
                offset,
            });
            ur_search(
                nucleus,
                result,
                slots,
                depth + 1,
                offset + sat.num_vars(),
                forced,
                usable,
                u,
                chosen,
                out,
            );
            chosen.pop();
            u.undo(mark);
        }
    };
    match forced {
        Some(f) if f.slot == slot => try_sat(f.clause, u, chosen, out),
        _ => {
            let exclude = forced.filter(|f| slot < f.slot).map(|f| f.clause.id);
            let query = u.resolve(&nlit.atom, 0);
            for e in usable.ur_sat.unifiable(!nlit.positive, &query) {
                if Some(e.clause.id) == exclude {
                    continue;
                }
                try_sat(&e.clause, u, chosen, out);
            }
        }
    }
}

// ---------------------------------------------------------------- binary

/// Binary resolvents between `given` and each usable clause (including a
/// renamed copy of `given` itself).
pub fn binary_resolve(given: &Arc<Clause>, usable: &Usable) -> Vec<Resolvent> {
    let mut out = Vec::new();
    let mut u = Unifier::new();
    for (gi, gl) in given.literals().iter().enumerate() {
        let query = u.resolve(&gl.atom, 0);
        for e in usable.all.unifiable(!gl.positive, &query) {
            let other = &e.clause;
            let off = given.num_vars();
            u.clear();
            u.reserve_slots((off + other.num_vars()) as usize);
            if !u.unify(&gl.atom, 0, &other.literals()[e.lit].atom, off) {
                continue;
            }
            let mut lits = Vec::with_capacity(given.len() + other.len() - 2);
            for (i, l) in given.literals().iter().enumerate() {
                if i != gi {
                    lits.push(Literal::new(l.positive, u.resolve(&l.atom, 0)));
                }
            }
            for (i, l) in other.literals().iter().enumerate() {
                if i != e.lit {
                    lits.push(Literal::new(l.positive, u.resolve(&l.atom, off)));
                }
            }
            out.push(Resolvent {
                literals: lits,
                origin: Origin::derived(Rule::Binary, vec![given.id, other.id]),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::parse_clause;
    use crate::term::SymbolTable;

    struct Fixture {
        syms: SymbolTable,
        next: u32,
    }

    impl Fixture {
        fn new() -> Self {
            Fixture {
                syms: SymbolTable::new(),
                next: 1,
            }
        }

        fn clause(&mut self, s: &str) -> Arc<Clause> {
            let c = parse_clause(s, &self.syms)
                .unwrap()
                .with_id(ClauseId(self.next));
            self.next += 1;
            Arc::new(c)
        }

        fn usable(&mut self, srcs: &[&str]) -> (Usable, Vec<Arc<Clause>>) {
            let mut u = Usable::new();
            let cs: Vec<_> = srcs.iter().map(|s| self.clause(s)).collect();
            for c in &cs {
                u.insert(Arc::clone(c));
            }
            (u, cs)
        }

        fn show(&self, rs: Vec<Resolvent>) -> Vec<String> {
            let mut v: Vec<String> = rs
                .into_iter()
                .filter_map(Resolvent::into_clause)
                .map(|c| c.display(&self.syms).to_string())
                .collect();
            v.sort();
            v.dedup();
            v
        }
    }

    #[test]
    fn hyper_textbook_example() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P | -Q | -R | S", "P | T", "Q | W", "R"]);
        // nucleus as given
        let r = hyper_resolve(&cs[0], &usable);
        assert_eq!(fx.show(r), vec!["S | T | W"]);
        // each satellite as given yields the same conclusion
        for sat in &cs[1..] {
            let r = hyper_resolve(sat, &usable);
            assert_eq!(fx.show(r), vec!["S | T | W"]);
        }
    }

    #[test]
    fn hyper_first_order_example() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P(x,y) | -Q(x) | R(x,y)", "P(z,b)", "Q(a)"]);
        let r = hyper_resolve(&cs[0], &usable);
        assert_eq!(fx.show(r), vec!["R(a,b)"]);
        let r = hyper_resolve(&cs[2], &usable);
        assert_eq!(fx.show(r), vec!["R(a,b)"]);
    }

    #[test]
    fn hyper_needs_every_negative_literal_clashed() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P | -Q | R", "P", "-R"]);
        for c in &cs {
            assert!(hyper_resolve(c, &usable).is_empty());
        }
    }

    #[test]
    fn hyper_positive_given_without_nucleus() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["P(a)", "Q(b) | R(c)"]);
        assert!(hyper_resolve(&cs[0], &usable).is_empty());
        assert!(hyper_resolve(&cs[1], &usable).is_empty());
    }

    #[test]
    fn hyper_given_fills_several_slots_once() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P(x) | -P(y) | Q(x,y)", "P(a)"]);
        let r = hyper_resolve(&cs[1], &usable);
        assert_eq!(r.len(), 1);
        assert_eq!(fx.show(r), vec!["Q(a,a)"]);
        let p_b = fx.clause("P(b)");
        let mut usable = usable;
        usable.insert(Arc::clone(&p_b));
        let r = hyper_resolve(&p_b, &usable);
        assert_eq!(fx.show(r), vec!["Q(a,b)", "Q(b,a)", "Q(b,b)"]);
    }

    #[test]
    fn ur_textbook_example() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P | -Q | R", "P", "-R"]);
        assert_eq!(fx.show(ur_resolve(&cs[0], &usable)), vec!["-Q"]);
        assert_eq!(fx.show(ur_resolve(&cs[1], &usable)), vec!["-Q"]);
        assert_eq!(fx.show(ur_resolve(&cs[2], &usable)), vec!["-Q"]);
    }

    #[test]
    fn ur_requires_unit_result() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P | -Q | R", "P"]);
        assert!(ur_resolve(&cs[0], &usable).is_empty());
        assert!(ur_resolve(&cs[1], &usable).is_empty());
    }

    #[test]
    fn ur_first_order_example() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P(x,y) | -Q(x) | R(x,y)", "P(z,b)", "Q(a)"]);
        assert_eq!(fx.show(ur_resolve(&cs[0], &usable)), vec!["R(a,b)"]);
    }

    #[test]
    fn ur_polarity_filter() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P | -Q | R", "P", "-R", "Q"]);
        let pos = ur_resolve_with(&cs[0], &usable, UrPolarity::PositiveOnly);
        assert_eq!(fx.show(pos), vec!["R"]);
        let neg = ur_resolve_with(&cs[0], &usable, UrPolarity::NegativeOnly);
        assert_eq!(fx.show(neg), vec!["-P", "-Q"]);
    }

    #[test]
    fn binary_examples() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P | Q", "P"]);
        assert_eq!(fx.show(binary_resolve(&cs[1], &usable)), vec!["Q"]);
        let (usable, cs) = fx.usable(&["-R(x) | S(x)", "R(a)"]);
        assert_eq!(fx.show(binary_resolve(&cs[1], &usable)), vec!["S(a)"]);
        let (usable, cs) = fx.usable(&["P", "Q"]);
        assert!(binary_resolve(&cs[0], &usable).is_empty());
    }

    #[test]
    fn provenance_lists_nucleus_first() {
        let mut fx = Fixture::new();
        let (usable, cs) = fx.usable(&["-P(x) | -Q(x) | R(x)", "Q(a)", "P(a)"]);
        let r = hyper_resolve(&cs[1], &usable);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].origin.parents, vec![cs[0].id, cs[2].id, cs[1].id]);
    }
}
