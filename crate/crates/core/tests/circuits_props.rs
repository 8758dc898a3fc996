use std::collections::BTreeSet;

use nlinv::circuits::{
    brute_force_search, input_patterns, lattice_closure, synthesize, verify_circuit,
    CircuitProblem, OracleResult, SignalPattern,
};
use nlinv::saturation::{DiscardReason, Disposition};
use nlinv::term::mgu;
use nlinv::{
    parse_clause, parse_term, Limits, Origin, Outcome, Prover, ProverConfig, Resolvent, RuleConfig,
    SymbolTable, Term,
};
use proptest::prelude::*;

/// Fixpoint of pairwise AND/OR over `gens`, computed on raw row masks.
fn and_or_fixpoint(gens: &[u64]) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = gens.iter().copied().collect();
    loop {
        let v: Vec<u64> = set.iter().copied().collect();
        let before = set.len();
        for &a in &v {
            for &b in &v {
                set.insert(a & b);
                set.insert(a | b);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn mask(p: &SignalPattern) -> u64 {
    p.to_u64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Raising one input row never lowers an AND/OR-built signal.
    #[test]
    fn closure_of_inputs_is_monotone(n in 1usize..=4) {
        let inputs = input_patterns(n).unwrap();
        let rows = 1usize << n;
        for e in lattice_closure(&inputs).unwrap() {
            for r in 0..rows {
                for bit in 0..n {
                    let up = r | 1 << bit;
                    prop_assert!(!e.get(r) || e.get(up), "{e} drops from row {r} to {up}");
                }
            }
        }
    }

    #[test]
    fn closure_matches_and_or_fixpoint(gens in prop::collection::vec(0u64..256, 1..5)) {
        let pats: Vec<SignalPattern> = gens.iter().map(|&g| SignalPattern::from_u64(g, 8)).collect();
        let got: BTreeSet<u64> = lattice_closure(&pats).unwrap().iter().map(mask).collect();
        prop_assert_eq!(got, and_or_fixpoint(&gens));
    }

    /// Two open inverter lists unify exactly when one is a prefix of the other.
    #[test]
    fn open_lists_unify_along_prefixes(
        a in prop::collection::vec(0u8..3, 0..4),
        b in prop::collection::vec(0u8..3, 0..4),
    ) {
        let syms = SymbolTable::new();
        let list = |cells: &[u8], tail: &str| {
            cells.iter().rev().fold(tail.to_string(), |t, c| format!("L(inv(c{c}),{t})"))
        };
        let ta = parse_term(&list(&a, "v"), &syms).unwrap();
        let tb = parse_term(&list(&b, "z"), &syms).unwrap().map_vars(&mut |v| Term::var(v.0 + 100));
        let prefix = a.iter().zip(&b).all(|(p, q)| p == q);
        prop_assert_eq!(mgu(&ta, &tb).is_some(), prefix);
    }

    /// The prover refutes exactly the problems the oracle can solve, and
    /// the extracted circuit checks out.
    #[test]
    fn prover_agrees_with_oracle(
        outs in prop::collection::vec(0u64..16, 1..3),
        budget in 0usize..3,
    ) {
        let inputs = input_patterns(2).unwrap();
        let outputs = outs.iter().map(|&o| SignalPattern::from_u64(o, 4)).collect();
        let p = CircuitProblem::new("random", inputs, outputs, budget).unwrap();
        let oracle = brute_force_search(&p).unwrap();
        for rule in [RuleConfig::ur(), RuleConfig::hyper()] {
            let cfg = ProverConfig {
                rule,
                limits: Limits::unbounded().with_max_given(20_000),
                ..ProverConfig::default()
            };
            let s = synthesize(&p, cfg);
            match (&oracle, s.outcome) {
                (OracleResult::Witness(w), Outcome::Refutation(_)) => {
                    prop_assert!(verify_circuit(w, &p));
                    let c = s.circuit.expect("refutation yields a circuit").unwrap();
                    prop_assert!(verify_circuit(&c, &p), "{}", c.render(&p));
                }
                (OracleResult::Unsat, Outcome::SosExhausted) => {}
                (o, got) => prop_assert!(false, "oracle {o:?}, prover {got:?}"),
            }
        }
    }
}

fn offer(prover: &mut Prover, syms: &SymbolTable, src: &str) -> Disposition {
    let c = parse_clause(src, syms).unwrap();
    prover.process_new_clause(Resolvent {
        literals: c.literals().to_vec(),
        origin: Origin::input(),
    })
}

#[test]
fn empty_inverter_list_subsumes_longer_lists() {
    let syms = SymbolTable::new();
    let mut prover = Prover::new(ProverConfig::default());
    let two = offer(&mut prover, &syms, "P(00001111, v)");
    let Disposition::Retained(two) = two else {
        panic!("open fact discarded")
    };
    // a different pattern behind one inverter is new
    let three = offer(&mut prover, &syms, "P(11110000, L(inv(11110000), v))");
    assert!(matches!(three, Disposition::Retained(_)));
    // the first pattern again, behind two inverters, is already known
    let four = offer(
        &mut prover,
        &syms,
        "P(00001111, L(inv(00001111), L(inv(11110000), v)))",
    );
    assert_eq!(
        four,
        Disposition::Discarded(DiscardReason::ForwardSubsumed {
            by: two,
            in_sos: true
        })
    );
    // and so is any single-inverter variant of it
    let again = offer(&mut prover, &syms, "P(00001111, L(inv(11110000), v))");
    assert!(matches!(
        again,
        Disposition::Discarded(DiscardReason::ForwardSubsumed { .. })
    ));
    assert_eq!(prover.stats().clauses_forward_subsumed, 2);
    assert_eq!(prover.stats().subsumed_by_sos, 2);
}
