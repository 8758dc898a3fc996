#![allow(dead_code)]

use nlinv::{Symbol, SymbolTable, Term};
use proptest::prelude::*;

pub const A: Symbol = Symbol(0);
pub const B: Symbol = Symbol(1);
pub const F: Symbol = Symbol(2);
pub const G: Symbol = Symbol(3);
pub const P: Symbol = Symbol(4);
pub const Q: Symbol = Symbol(5);
pub const R: Symbol = Symbol(6);

/// Symbol table whose ids match the constants above.
pub fn symbols() -> SymbolTable {
    let s = SymbolTable::new();
    for (name, arity) in [
        ("a", 0),
        ("b", 0),
        ("f", 1),
        ("g", 2),
        ("P", 1),
        ("Q", 1),
        ("R", 2),
    ] {
        s.intern(name, arity).unwrap();
    }
    s
}

pub fn arb_term(vars: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..vars).prop_map(Term::var),
        Just(Term::constant(A)),
        Just(Term::constant(B)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app(F, vec![t])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::app(G, vec![x, y])),
        ]
    })
}

pub fn arb_ground_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::constant(A)), Just(Term::constant(B))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app(F, vec![t])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::app(G, vec![x, y])),
        ]
    })
}

pub fn arb_atom(vars: u32) -> impl Strategy<Value = Term> {
    prop_oneof![
        arb_term(vars).prop_map(|t| Term::app(P, vec![t])),
        arb_term(vars).prop_map(|t| Term::app(Q, vec![t])),
        (arb_term(vars), arb_term(vars)).prop_map(|(x, y)| Term::app(R, vec![x, y])),
    ]
}

pub fn arb_literals(vars: u32, max_len: usize) -> impl Strategy<Value = Vec<nlinv::Literal>> {
    prop::collection::vec(
        (any::<bool>(), arb_atom(vars)).prop_map(|(s, a)| nlinv::Literal::new(s, a)),
        1..=max_len,
    )
}

/// Interpretation over the domain {0, 1}: function tables and relations.
#[derive(Clone, Debug)]
pub struct Model {
    pub a: u8,
    pub b: u8,
    pub f: [u8; 2],
    pub g: [[u8; 2]; 2],
    pub p: [bool; 2],
    pub q: [bool; 2],
    pub r: [[bool; 2]; 2],
}

pub fn arb_model() -> impl Strategy<Value = Model> {
    (
        0u8..2,
        0u8..2,
        [0u8..2, 0u8..2],
        [[0u8..2, 0u8..2], [0u8..2, 0u8..2]],
        any::<[bool; 2]>(),
        any::<[bool; 2]>(),
        any::<[[bool; 2]; 2]>(),
    )
        .prop_map(|(a, b, f, g, p, q, r)| Model {
            a,
            b,
            f,
            g,
            p,
            q,
            r,
        })
}

impl Model {
    fn term(&self, t: &Term, env: &[u8]) -> u8 {
        match t {
            Term::Var(v) => env[v.0 as usize],
            Term::App(s, args) => match *s {
                A => self.a,
                B => self.b,
                F => self.f[self.term(&args[0], env) as usize],
                G => self.g[self.term(&args[0], env) as usize][self.term(&args[1], env) as usize],
                _ => unreachable!("not a function symbol"),
            },
        }
    }

    fn atom(&self, t: &Term, env: &[u8]) -> bool {
        let args = t.args();
        let v = |i: usize| self.term(&args[i], env) as usize;
        match t.functor().unwrap() {
            P => self.p[v(0)],
            Q => self.q[v(0)],
            R => self.r[v(0)][v(1)],
            _ => unreachable!("not a predicate"),
        }
    }

    /// Truth of the universal closure of a clause.
    pub fn satisfies(&self, c: &nlinv::Clause) -> bool {
        let n = c.num_vars() as usize;
        (0..1u32 << n).all(|bits| {
            let env: Vec<u8> = (0..n).map(|i| (bits >> i & 1) as u8).collect();
            c.literals()
                .iter()
                .any(|l| self.atom(&l.atom, &env) == l.positive)
        })
    }
}
