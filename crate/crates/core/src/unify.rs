//! Offset-based syntactic unification.
//!
//! Each participating term is paired with a variable offset; variable `v` of
//! a term used at offset `k` is the unifier slot `v + k`. Giving every clause
//! of an inference its own offset renames them apart without copying.
//! Bindings are triangular and undone through a trail, which makes the
//! unifier cheap to backtrack during satellite search.

use crate::term::{Substitution, Term, Var};

pub struct Unifier<'a> {
    bind: Vec<Option<(&'a Term, u32)>>,
    trail: Vec<u32>,
}

impl Default for Unifier<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'a> Unifier<'a> {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    pub fn with_capacity(slots: usize) -> Self {
        Unifier {
            bind: vec![None; slots],
            trail: Vec::new(),
        }
    }

    /// Makes sure slots `0..slots` exist.
    pub fn reserve_slots(&mut self, slots: usize) {
        if self.bind.len() < slots {
            self.bind.resize(slots, None);
        }
    }

    pub fn clear(&mut self) {
        for s in self.trail.drain(..) {
            self.bind[s as usize] = None;
        }
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let s = self.trail.pop().unwrap();
            self.bind[s as usize] = None;
        }
    }

    pub fn deref(&self, mut t: &'a Term, mut off: u32) -> (&'a Term, u32) {
        loop {
            match t {
                Term::Var(v) => match self.bind.get((v.0 + off) as usize) {
                    Some(Some((bt, bo))) => {
                        t = bt;
                        off = *bo;
                    }
                    _ => return (t, off),
                },
                Term::App(..) => return (t, off),
            }
        }
    }

    fn occurs(&self, slot: u32, t: &'a Term, off: u32) -> bool {
        let (t, off) = self.deref(t, off);
        match t {
            Term::Var(v) => v.0 + off == slot,
            Term::App(_, args) => args.iter().any(|a| self.occurs(slot, a, off)),
        }
    }

    fn set(&mut self, slot: u32, t: &'a Term, off: u32) {
        let idx = slot as usize;
        if idx >= self.bind.len() {
            self.bind.resize(idx + 1, None);
        }
        self.bind[idx] = Some((t, off));
        self.trail.push(slot);
    }

    fn unify_rec(&mut self, a: &'a Term, ao: u32, b: &'a Term, bo: u32) -> bool {
        let (a, ao) = self.deref(a, ao);
        let (b, bo) = self.deref(b, bo);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let (sx, sy) = (x.0 + ao, y.0 + bo);
                if sx != sy {
                    self.set(sx, b, bo);
                }
                true
            }
            (Term::Var(x), _) => {
                let sx = x.0 + ao;
                if self.occurs(sx, b, bo) {
                    return false;
                }
                self.set(sx, b, bo);
                true
            }
            (_, Term::Var(y)) => {
                let sy = y.0 + bo;
                if self.occurs(sy, a, ao) {
                    return false;
                }
                self.set(sy, a, ao);
                true
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g
                    && fa.len() == ga.len()
                    && fa
                        .iter()
                        .zip(ga.iter())
                        .all(|(x, y)| self.unify_rec(x, ao, y, bo))
            }
        }
    }

    /// Unifies `a` (at offset `ao`) with `b` (at offset `bo`). On failure the
    /// bindings are left exactly as before the call.
    pub fn unify(&mut self, a: &'a Term, ao: u32, b: &'a Term, bo: u32) -> bool {
        let mark = self.mark();
        if self.unify_rec(a, ao, b, bo) {
            true
        } else {
            self.undo(mark);
            false
        }
    }

    /// Fully instantiated copy of `t` at offset `off`; unbound variables
    /// become `Var(slot)`.
    pub fn resolve(&self, t: &'a Term, off: u32) -> Term {
        let (t, off) = self.deref(t, off);
        match t {
            Term::Var(v) => Term::Var(Var(v.0 + off)),
            Term::App(f, args) => {
                if args.is_empty() {
                    return t.clone();
                }
                Term::App(*f, args.iter().map(|a| self.resolve(a, off)).collect())
            }
        }
    }

    /// Current bindings as an idempotent substitution over slot variables.
    pub fn substitution(&self) -> Substitution {
        let mut slots: Vec<u32> = self.trail.clone();
        slots.sort_unstable();
        slots.dedup();
        Substitution::from_pairs(slots.into_iter().map(|s| {
            let t = self.resolve(
                self.bind[s as usize].unwrap().0,
                self.bind[s as usize].unwrap().1,
            );
            (Var(s), t)
        }))
    }
}
