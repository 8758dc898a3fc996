//! Literals and clauses, plus the retention calculus: factoring, subsumption
//! and unit conflict.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::term::{Substitution, Symbol, SymbolTable, Term, TermError, TermParser, Var};
use crate::unify::Unifier;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClauseId(pub u32);

impl ClauseId {
    /// Placeholder carried by clauses that have not been retained yet.
    pub const UNASSIGNED: ClauseId = ClauseId(0);
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Term,
}

impl Literal {
    pub fn new(positive: bool, atom: Term) -> Literal {
        debug_assert!(!atom.is_var(), "literal atom must not be a variable");
        Literal { positive, atom }
    }

    pub fn pos(atom: Term) -> Literal {
        Literal::new(true, atom)
    }

    pub fn neg(atom: Term) -> Literal {
        Literal::new(false, atom)
    }

    pub fn predicate(&self) -> Symbol {
        self.atom
            .functor()
            .expect("literal atom is a compound term")
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }
}

/// Inference rule that produced a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Input,
    Hyper,
    Ur,
    Binary,
    Factor,
    UnitConflict,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Input => "input",
            Rule::Hyper => "hyper",
            Rule::Ur => "ur",
            Rule::Binary => "binary",
            Rule::Factor => "factor",
            Rule::UnitConflict => "unit_conflict",
        }
    }
}

/// Provenance. For hyper and UR resolvents `parents[0]` is the nucleus and
/// the rest are the satellites in the order of the nucleus literals they
/// clash with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub rule: Rule,
    pub parents: Vec<ClauseId>,
}

impl Origin {
    pub fn input() -> Origin {
        Origin {
            rule: Rule::Input,
            parents: Vec::new(),
        }
    }

    pub fn derived(rule: Rule, parents: Vec<ClauseId>) -> Origin {
        Origin { rule, parents }
    }
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub id: ClauseId,
    literals: Vec<Literal>,
    pub origin: Origin,
    weight: u32,
    num_vars: u32,
}

/// Builds a clause in canonical form: variables renumbered from zero,
/// literals sorted by predicate then term order, duplicates merged and the
/// weight computed. Returns `None` for tautologies.
pub fn make_clause(literals: Vec<Literal>, origin: Origin) -> Option<Clause> {
    let clause = canonical_clause(literals, origin);
    let lits = &clause.literals;
    for (i, a) in lits.iter().enumerate() {
        if lits[i + 1..]
            .iter()
            .any(|b| b.positive != a.positive && b.atom == a.atom)
        {
            return None;
        }
    }
    Some(clause)
}

fn canonical_clause(literals: Vec<Literal>, origin: Origin) -> Clause {
    let mut lits = normalize_vars(literals).0;
    lits.sort_by(|a, b| {
        a.predicate()
            .cmp(&b.predicate())
            .then(a.positive.cmp(&b.positive))
            .then_with(|| a.atom.cmp(&b.atom))
    });
    lits.dedup();
    let (literals, num_vars) = normalize_vars(lits);
    let weight = literals.iter().map(|l| l.atom.symbol_count() as u32).sum();
    Clause {
        id: ClauseId::UNASSIGNED,
        literals,
        origin,
        weight,
        num_vars,
    }
}

fn normalize_vars(lits: Vec<Literal>) -> (Vec<Literal>, u32) {
    let mut map: Vec<(Var, Var)> = Vec::new();
    let out = lits
        .into_iter()
        .map(|l| Literal {
            positive: l.positive,
            atom: l.atom.map_vars(&mut |v| {
                if let Some(&(_, n)) = map.iter().find(|(o, _)| *o == v) {
                    Term::Var(n)
                } else {
                    let n = Var(map.len() as u32);
                    map.push((v, n));
                    Term::Var(n)
                }
            }),
        })
        .collect();
    (out, map.len() as u32)
}

impl Clause {
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.literals.len() == 1
    }

    pub fn is_positive(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn is_negative(&self) -> bool {
        self.literals.iter().all(|l| !l.positive)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Variables are numbered `0..num_vars`.
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn with_id(mut self, id: ClauseId) -> Clause {
        self.id = id;
        self
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> ClauseDisplay<'a> {
        ClauseDisplay {
            clause: self,
            symbols,
        }
    }
}

/// Equality of the literal sets (ids and provenance ignored).
impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.literals == other.literals
    }
}

impl Eq for Clause {}

pub struct ClauseDisplay<'a> {
    clause: &'a Clause,
    symbols: &'a SymbolTable,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.literals.is_empty() {
            return f.write_str("$F");
        }
        for (i, l) in self.clause.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            if !l.positive {
                f.write_str("-")?;
            }
            write!(f, "{}", l.atom.display(self.symbols))?;
        }
        Ok(())
    }
}

/// Parses `-P(x) | Q(a)`; an optional trailing `.` is accepted and `$F`
/// denotes the empty clause.
pub fn parse_clause(src: &str, symbols: &SymbolTable) -> Result<Clause, TermError> {
    // tautologies are legal input, so skip the check make_clause would do
    Ok(canonical_clause(
        parse_literals(src, symbols)?,
        Origin::input(),
    ))
}

pub fn parse_literals(src: &str, symbols: &SymbolTable) -> Result<Vec<Literal>, TermError> {
    let src = src.trim().trim_end_matches('.');
    if src.trim() == "$F" {
        return Ok(Vec::new());
    }
    let mut p = TermParser::new(src, symbols);
    p.reset_vars();
    let mut lits = Vec::new();
    loop {
        let positive = !p.eat(b'-');
        let atom = p.parse_term()?;
        if atom.is_var() {
            return Err(p.err("literal atom must not be a variable"));
        }
        lits.push(Literal::new(positive, atom));
        if !p.eat(b'|') {
            break;
        }
    }
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(lits)
}

struct Matcher<'a> {
    bind: Vec<Option<&'a Term>>,
    trail: Vec<u32>,
}

impl<'a> Matcher<'a> {
    fn new(slots: usize) -> Self {
        Matcher {
            bind: vec![None; slots],
            trail: Vec::new(),
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let s = self.trail.pop().unwrap();
            self.bind[s as usize] = None;
        }
    }

    fn matches(&mut self, pattern: &'a Term, target: &'a Term) -> bool {
        match pattern {
            Term::Var(v) => match self.bind[v.0 as usize] {
                Some(b) => b == target,
                None => {
                    self.bind[v.0 as usize] = Some(target);
                    self.trail.push(v.0);
                    true
                }
            },
            Term::App(f, args) => match target {
                Term::App(g, targs) if f == g && args.len() == targs.len() => args
                    .iter()
                    .zip(targs.iter())
                    .all(|(p, t)| self.matches(p, t)),
                _ => false,
            },
        }
    }

    fn subsume_from(&mut self, c: &'a [Literal], d: &'a [Literal]) -> bool {
        let Some((first, rest)) = c.split_first() else {
            return true;
        };
        for l in d {
            if l.positive != first.positive {
                continue;
            }
            let mark = self.trail.len();
            if self.matches(&first.atom, &l.atom) && self.subsume_from(rest, d) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// θ-subsumption with the length guard `|c| <= |d|`.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    let mut m = Matcher::new(c.num_vars as usize);
    m.subsume_from(&c.literals, &d.literals)
}

/// The matching substitution witnessing `subsumes(c, d)`, if any.
pub fn subsumption_witness(c: &Clause, d: &Clause) -> Option<Substitution> {
    if c.len() > d.len() {
        return None;
    }
    let mut m = Matcher::new(c.num_vars as usize);
    if !m.subsume_from(&c.literals, &d.literals) {
        return None;
    }
    Some(Substitution::from_pairs(
        m.bind
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.map(|t| (Var(i as u32), t.clone()))),
    ))
}

/// Single-step factors: unify two same-sign literals and merge them.
pub fn factors(c: &Clause) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    let lits = &c.literals;
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            let (a, b) = (&lits[i], &lits[j]);
            if a.positive != b.positive || a.predicate() != b.predicate() {
                continue;
            }
            let mut u = Unifier::with_capacity(c.num_vars as usize);
            if !u.unify(&a.atom, 0, &b.atom, 0) {
                continue;
            }
            let merged = lits
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, l)| Literal::new(l.positive, u.resolve(&l.atom, 0)))
                .collect();
            if let Some(f) = make_clause(merged, Origin::derived(Rule::Factor, vec![c.id])) {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Empty clause if the two units have opposite signs and unifiable atoms.
pub fn unit_conflict(u: &Clause, w: &Clause) -> Option<Clause> {
    if !u.is_unit() || !w.is_unit() {
        return None;
    }
    let (a, b) = (&u.literals[0], &w.literals[0]);
    if a.positive == b.positive {
        return None;
    }
    let mut un = Unifier::with_capacity((u.num_vars + w.num_vars) as usize);
    if !un.unify(&a.atom, 0, &b.atom, u.num_vars) {
        return None;
    }
    make_clause(
        Vec::new(),
        Origin::derived(Rule::UnitConflict, vec![u.id, w.id]),
    )
}

/// Role of a retained-clause list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListRole {
    Usable,
    Sos,
    Passive,
}

/// Ordered clause ids belonging to one list.
#[derive(Clone, Debug)]
pub struct ClauseList {
    pub role: ListRole,
    ids: Vec<ClauseId>,
}

impl ClauseList {
    pub fn new(role: ListRole) -> Self {
        ClauseList {
            role,
            ids: Vec::new(),
        }
    }

    pub fn push(&mut self, id: ClauseId) {
        self.ids.push(id);
    }

    pub fn remove(&mut self, id: ClauseId) -> bool {
        match self.ids.iter().position(|&i| i == id) {
            Some(p) => {
                self.ids.remove(p);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.ids.contains(&id)
    }

    pub fn ids(&self) -> &[ClauseId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}
