//! Literal index: one discrimination tree per sign over the preorder symbol
//! sequence of each atom, variables collapsed to a single wildcard key.
//!
//! Lookups return a superset of the matching entries (repeated variables are
//! not checked), sorted by clause id then literal position.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::clause::{Clause, ClauseId, Literal};
use crate::term::{Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Var,
    Sym(Symbol, u32),
}

fn key(t: &Term) -> Key {
    match t {
        Term::Var(_) => Key::Var,
        Term::App(f, args) => Key::Sym(*f, args.len() as u32),
    }
}

#[derive(Clone)]
pub struct Entry {
    pub clause: Arc<Clause>,
    pub lit: usize,
}

impl Entry {
    pub fn literal(&self) -> &Literal {
        &self.clause.literals()[self.lit]
    }
}

#[derive(Default, Clone)]
struct Node {
    children: BTreeMap<Key, Node>,
    entries: Vec<Entry>,
}

impl Node {
    fn is_empty(&self) -> bool {
        self.children.is_empty() && self.entries.is_empty()
    }

    fn remove_clause(&mut self, id: ClauseId) -> usize {
        let before = self.entries.len();
        self.entries.retain(|e| e.clause.id != id);
        let mut removed = before - self.entries.len();
        self.children.retain(|_, c| {
            removed += c.remove_clause(id);
            !c.is_empty()
        });
        removed
    }

    /// Calls `f` on every node reached by consuming `k` whole terms.
    fn skip<'a>(&'a self, k: u32, f: &mut impl FnMut(&'a Node)) {
        if k == 0 {
            f(self);
            return;
        }
        for (key, child) in &self.children {
            match key {
                Key::Var => child.skip(k - 1, f),
                Key::Sym(_, n) => child.skip(k - 1 + n, f),
            }
        }
    }

    fn unifiable<'a>(&'a self, pending: &mut Vec<&Term>, out: &mut Vec<&'a Entry>) {
        let Some(t) = pending.pop() else {
            out.extend(self.entries.iter());
            return;
        };
        match t {
            Term::Var(_) => self.skip(1, &mut |n| {
                let mut rest = pending.clone();
                n.unifiable(&mut rest, out);
            }),
            Term::App(f, args) => {
                if let Some(c) = self.children.get(&Key::Var) {
                    c.unifiable(pending, out);
                }
                if let Some(c) = self.children.get(&Key::Sym(*f, args.len() as u32)) {
                    let depth = pending.len();
                    pending.extend(args.iter().rev());
                    c.unifiable(pending, out);
                    pending.truncate(depth);
                }
            }
        }
        pending.push(t);
    }

    fn generalizations<'a>(&'a self, pending: &mut Vec<&Term>, out: &mut Vec<&'a Entry>) {
        let Some(t) = pending.pop() else {
            out.extend(self.entries.iter());
            return;
        };
        if let Some(c) = self.children.get(&Key::Var) {
            c.generalizations(pending, out);
        }
        if let Term::App(f, args) = t {
            if let Some(c) = self.children.get(&Key::Sym(*f, args.len() as u32)) {
                let depth = pending.len();
                pending.extend(args.iter().rev());
                c.generalizations(pending, out);
                pending.truncate(depth);
            }
        }
        pending.push(t);
    }
}

#[derive(Default, Clone)]
pub struct LitIndex {
    // indexed by sign: [negative, positive]
    roots: [Node; 2],
    len: usize,
}

fn sorted(mut v: Vec<&Entry>) -> Vec<&Entry> {
    v.sort_by_key(|e| (e.clause.id, e.lit));
    v
}

impl LitIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, clause: &Arc<Clause>, lit: usize) {
        let l = &clause.literals()[lit];
        let mut node = &mut self.roots[l.positive as usize];
        let mut stack = vec![&l.atom];
        while let Some(t) = stack.pop() {
            node = node.children.entry(key(t)).or_default();
            stack.extend(t.args().iter().rev());
        }
        node.entries.push(Entry {
            clause: Arc::clone(clause),
            lit,
        });
        self.len += 1;
    }

    pub fn remove_clause(&mut self, id: ClauseId) {
        let removed: usize = self.roots.iter_mut().map(|r| r.remove_clause(id)).sum();
        self.len -= removed;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Stored literals of sign `positive` whose atom may unify with `query`.
    /// Variables of `query` and of the stored atoms are independent.
    pub fn unifiable(&self, positive: bool, query: &Term) -> Vec<&Entry> {
        let mut out = Vec::new();
        self.roots[positive as usize].unifiable(&mut vec![query], &mut out);
        sorted(out)
    }

    /// Stored literals of sign `positive` whose atom may match onto `target`
    /// (the stored atom is the more general one).
    pub fn generalizations(&self, positive: bool, target: &Term) -> Vec<&Entry> {
        let mut out = Vec::new();
        self.roots[positive as usize].generalizations(&mut vec![target], &mut out);
        sorted(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::parse_clause;
    use crate::term::{mgu, parse_term, SymbolTable};

    fn index(syms: &SymbolTable, srcs: &[&str]) -> LitIndex {
        let mut ix = LitIndex::new();
        for (i, s) in srcs.iter().enumerate() {
            let c = Arc::new(
                parse_clause(s, syms)
                    .unwrap()
                    .with_id(ClauseId(i as u32 + 1)),
            );
            for l in 0..c.len() {
                ix.insert(&c, l);
            }
        }
        ix
    }

    fn ids(v: Vec<&Entry>) -> Vec<u32> {
        v.into_iter().map(|e| e.clause.id.0).collect()
    }

    #[test]
    fn unifiable_candidates_include_every_unifier() {
        let syms = SymbolTable::new();
        let srcs = [
            "P(a, L(inv(b), x))",
            "P(x, y)",
            "P(b, L(inv(c), L(inv(b), x)))",
            "P(a, nil)",
            "-P(a, nil)",
            "P(f(x), y)",
        ];
        let ix = index(&syms, &srcs);
        assert_eq!(ix.len(), 6);
        for q in [
            "P(a, L(inv(b), nil))",
            "P(x, L(inv(c), y))",
            "P(z, w)",
            "P(f(a), b)",
        ] {
            let q = parse_term(q, &syms).unwrap();
            let got = ids(ix.unifiable(true, &q));
            for (i, s) in srcs.iter().enumerate() {
                let c = parse_clause(s, &syms).unwrap();
                let l = &c.literals()[0];
                // rename stored variables away from the query
                let stored = l.atom.map_vars(&mut |v| Term::var(v.0 + 50));
                if l.positive && mgu(&q, &stored).is_some() {
                    assert!(got.contains(&(i as u32 + 1)), "missing {s}");
                }
            }
        }
        let q = parse_term("P(a, L(inv(b), nil))", &syms).unwrap();
        assert_eq!(ids(ix.unifiable(true, &q)), vec![1, 2]);
        assert_eq!(ids(ix.unifiable(false, &q)), Vec::<u32>::new());
    }

    #[test]
    fn generalizations_respect_rigid_target_variables() {
        let syms = SymbolTable::new();
        let ix = index(
            &syms,
            &["P(x, y)", "P(a, x)", "P(a, L(inv(b), x))", "P(x, nil)"],
        );
        let t = parse_term("P(a, L(inv(b), L(inv(c), z)))", &syms).unwrap();
        assert_eq!(ids(ix.generalizations(true, &t)), vec![1, 2, 3]);
        let t = parse_term("P(a, z)", &syms).unwrap();
        assert_eq!(ids(ix.generalizations(true, &t)), vec![1, 2]);
    }

    #[test]
    fn removal() {
        let syms = SymbolTable::new();
        let mut ix = index(&syms, &["P(a) | Q(b)", "P(x)"]);
        assert_eq!(ix.len(), 3);
        ix.remove_clause(ClauseId(1));
        assert_eq!(ix.len(), 1);
        let q = parse_term("P(a)", &syms).unwrap();
        assert_eq!(ids(ix.unifiable(true, &q)), vec![2]);
    }
}
