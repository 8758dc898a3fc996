//! First-order terms, interned symbols and substitutions.
//!
//! Terms are plain values: a variable or a functor applied to arguments
//! (constants are arity-0 applications). Functor names are interned into a
//! [`SymbolTable`] shared by everything working on one problem, so equality of
//! terms is structural equality over small integers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unify::Unifier;

/// Interned functor or predicate name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(pub u32);

/// Variable identifier. Variables are local to a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var(pub u32);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("symbol `{name}` used with arity {found}, but it was declared with arity {declared}")]
    ArityClash {
        name: String,
        declared: usize,
        found: usize,
    },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Default)]
struct SymbolTableInner {
    entries: Vec<(String, usize)>,
    by_name: HashMap<String, Symbol>,
}

/// Name/arity registry. Interior locking lets an `Arc<SymbolTable>` be shared
/// between the encoder, the prover hooks and the printers.
#[derive(Default)]
pub struct SymbolTable {
    inner: RwLock<SymbolTableInner>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the symbol for `name`, creating it on first use. A name keeps
    /// the arity it was first interned with.
    pub fn intern(&self, name: &str, arity: usize) -> Result<Symbol, TermError> {
        if let Some(sym) = self.lookup(name) {
            let declared = self.arity(sym);
            if declared != arity {
                return Err(TermError::ArityClash {
                    name: name.to_string(),
                    declared,
                    found: arity,
                });
            }
            return Ok(sym);
        }
        let mut inner = self.inner.write().expect("symbol table poisoned");
        if let Some(&sym) = inner.by_name.get(name) {
            // lost a race with another writer
            let declared = inner.entries[sym.0 as usize].1;
            if declared != arity {
                return Err(TermError::ArityClash {
                    name: name.to_string(),
                    declared,
                    found: arity,
                });
            }
            return Ok(sym);
        }
        let sym = Symbol(inner.entries.len() as u32);
        inner.entries.push((name.to_string(), arity));
        inner.by_name.insert(name.to_string(), sym);
        Ok(sym)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.inner
            .read()
            .expect("symbol table poisoned")
            .by_name
            .get(name)
            .copied()
    }

    pub fn name(&self, sym: Symbol) -> String {
        self.inner.read().expect("symbol table poisoned").entries[sym.0 as usize]
            .0
            .clone()
    }

    pub fn arity(&self, sym: Symbol) -> usize {
        self.inner.read().expect("symbol table poisoned").entries[sym.0 as usize].1
    }

    pub fn len(&self) -> usize {
        self.inner
            .read()
            .expect("symbol table poisoned")
            .entries
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Debug for SymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolTable")
            .field("len", &self.len())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Symbol, Box<[Term]>),
}

impl Term {
    pub fn var(id: u32) -> Term {
        Term::Var(Var(id))
    }

    pub fn constant(sym: Symbol) -> Term {
        Term::App(sym, Box::new([]))
    }

    pub fn app(sym: Symbol, args: Vec<Term>) -> Term {
        Term::App(sym, args.into_boxed_slice())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn functor(&self) -> Option<Symbol> {
        match self {
            Term::App(f, _) => Some(*f),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol occurrences, variables included.
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) if args.is_empty() => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn occurs(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.0),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Consistent arity use across the term, checked against `symbols`.
    pub fn check_arity(&self, symbols: &SymbolTable) -> Result<(), TermError> {
        if let Term::App(f, args) = self {
            let declared = symbols.arity(*f);
            if declared != args.len() {
                return Err(TermError::ArityClash {
                    name: symbols.name(*f),
                    declared,
                    found: args.len(),
                });
            }
            for a in args.iter() {
                a.check_arity(symbols)?;
            }
        }
        Ok(())
    }

    /// Replaces variables through `f`, leaving structure untouched.
    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(s, args) => Term::App(*s, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            symbols,
        }
    }
}

pub(crate) fn var_name(v: Var) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "w", "v"];
    match NAMES.get(v.0 as usize) {
        Some(n) => (*n).to_string(),
        None => format!("v{}", v.0),
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    symbols: &'a SymbolTable,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => f.write_str(&var_name(*v)),
            Term::App(s, args) => {
                f.write_str(&self.symbols.name(*s))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{}", a.display(self.symbols))?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Finite map from variables to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn bind(&mut self, v: Var, t: Term) {
        self.map.insert(v, t);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    /// Single-pass replacement of bound variables.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.map.get(&v).cloned().unwrap_or(Term::Var(v)))
    }

    /// True when no bound variable occurs in any binding, so `apply` is
    /// idempotent.
    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|t| self.map.keys().all(|v| !t.occurs(*v)))
    }
}

/// Most general unifier of two terms, `None` on clash or occurs-check failure.
pub fn mgu(a: &Term, b: &Term) -> Option<Substitution> {
    simultaneous_mgu(&[(a.clone(), b.clone())])
}

/// One substitution unifying every pair at once. Pairs are solved left to
/// right, each step seeing the bindings made by the previous ones.
pub fn simultaneous_mgu(pairs: &[(Term, Term)]) -> Option<Substitution> {
    let max = pairs
        .iter()
        .flat_map(|(a, b)| [a.max_var(), b.max_var()])
        .flatten()
        .max();
    let mut u = Unifier::with_capacity(max.map_or(0, |m| m as usize + 1));
    for (a, b) in pairs {
        if !u.unify(a, 0, b, 0) {
            return None;
        }
    }
    Some(u.substitution())
}

/// Fresh-variable source used for renaming apart.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(next: u32) -> Self {
        VarGen { next }
    }

    /// Generator whose variables are all above those of `terms`.
    pub fn above<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Self {
        let next = terms
            .into_iter()
            .filter_map(Term::max_var)
            .max()
            .map_or(0, |m| m + 1);
        VarGen { next }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }
}

/// Copy of `t` whose variables are replaced by fresh ones from `gen`.
pub fn rename_apart(t: &Term, gen: &mut VarGen) -> Term {
    let mut seen: HashMap<Var, Var> = HashMap::new();
    t.map_vars(&mut |v| Term::Var(*seen.entry(v).or_insert_with(|| gen.fresh())))
}

/// One-way matching: extends `theta` so that `pattern` instantiated by it is
/// identical to `target`. Variables of `target` are treated as constants.
pub fn match_term(pattern: &Term, target: &Term, theta: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match theta.map.get(v) {
            Some(bound) => bound == target,
            None => {
                theta.map.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => args
                .iter()
                .zip(targs.iter())
                .all(|(p, t)| match_term(p, t, theta)),
            _ => false,
        },
    }
}

/// Tiny reader for the clause surface syntax used in tests and problem
/// files: `f(a, g(x))`. Identifiers starting with `u`..`z` are variables.
pub struct TermParser<'s> {
    src: &'s [u8],
    pos: usize,
    symbols: &'s SymbolTable,
    vars: HashMap<String, Var>,
}

impl<'s> TermParser<'s> {
    pub fn new(src: &'s str, symbols: &'s SymbolTable) -> Self {
        TermParser {
            src: src.as_bytes(),
            pos: 0,
            symbols,
            vars: HashMap::new(),
        }
    }

    pub(crate) fn err(&self, msg: impl Into<String>) -> TermError {
        TermError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn ident(&mut self) -> Result<String, TermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || self.src[self.pos] == b'_'
                || self.src[self.pos] == b'$')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    pub fn parse_term(&mut self) -> Result<Term, TermError> {
        let name = self.ident()?;
        if self.eat(b'(') {
            let mut args = vec![self.parse_term()?];
            while self.eat(b',') {
                args.push(self.parse_term()?);
            }
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            let sym = self.symbols.intern(&name, args.len())?;
            return Ok(Term::app(sym, args));
        }
        let first = name.as_bytes()[0];
        if (b'u'..=b'z').contains(&first) {
            let next = self.vars.len() as u32;
            let v = *self.vars.entry(name).or_insert(Var(next));
            Ok(Term::Var(v))
        } else {
            Ok(Term::constant(self.symbols.intern(&name, 0)?))
        }
    }

    pub(crate) fn reset_vars(&mut self) {
        self.vars.clear();
    }
}

/// Parses a single term; variables are numbered in order of appearance.
pub fn parse_term(src: &str, symbols: &SymbolTable) -> Result<Term, TermError> {
    let mut p = TermParser::new(src, symbols);
    let t = p.parse_term()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}
