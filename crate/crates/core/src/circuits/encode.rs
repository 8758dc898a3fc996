//! Clause encoding of a circuit problem.
//!
//! `P(s, l)` states that signal pattern `s` can be built using the inverters
//! recorded in list `l`. Lists are `L(inv(s), rest)` cells ending in an open
//! tail variable, oldest inverter first, so a fact with a shorter list
//! subsumes the same pattern with a longer one and unifies with any
//! extension of its list. The not rule appends through `app(list, cell)`,
//! which the hook evaluates by binding the open tail. Gate rules share the
//! list variable between premises, and the denial shares it across all
//! outputs so that one circuit has to produce every output. The denial also requires `Budget(w)`, which holds
//! exactly for closed lists of at most `budget` cells, so the budget is part
//! of the clause semantics and the retention filter only prunes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{CircuitBuilder, CircuitError, CircuitProblem, Gate, NodeId, SignalPattern};
use crate::clause::{parse_clause, Clause, Literal, Rule};
use crate::saturation::{ClauseHook, HookVerdict, ProofDag};
use crate::term::{Symbol, SymbolTable, Term, Var};

/// Which usable-list rule acted as nucleus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateRule {
    And,
    Or,
    Not,
    Denial,
    /// `Budget(...)` fact for one admissible list length.
    Budget,
}

pub struct Encoding {
    pub symbols: Arc<SymbolTable>,
    pub usable: Vec<Clause>,
    pub sos: Vec<Clause>,
    rules: Vec<(GateRule, Clause)>,
}

const AND_RULE: &str = "-P(x,w) | -P(y,w) | P(and(x,y),w)";
const OR_RULE: &str = "-P(x,w) | -P(y,w) | P(or(x,y),w)";
const NOT_RULE: &str = "-P(x,w) | P(not(x),app(w,inv(not(x))))";

impl Encoding {
    pub fn rule_of(&self, nucleus: &Clause) -> Option<GateRule> {
        self.rules
            .iter()
            .find(|(_, c)| c == nucleus)
            .map(|(r, _)| *r)
    }

    pub fn rule_clause(&self, rule: GateRule) -> &Clause {
        &self.rules.iter().find(|(r, _)| *r == rule).unwrap().1
    }

    /// Hook enforcing `budget` and evaluating gate functions on patterns.
    pub fn hook(&self, budget: usize) -> BudgetHook {
        BudgetHook::new(Arc::clone(&self.symbols), budget)
    }
}

/// Input facts go to sos; gate rules and the denial go to usable.
pub fn encode_problem(p: &CircuitProblem, symbols: Arc<SymbolTable>) -> Encoding {
    let parse = |s: &str| parse_clause(s, &symbols).expect("encoding clauses are well formed");
    let sos = p
        .inputs
        .iter()
        .map(|i| parse(&format!("P({i},v)")))
        .collect();
    let mut denial: Vec<String> = p.outputs.iter().map(|o| format!("-P({o},w)")).collect();
    denial.push("-Budget(w)".into());
    let mut rules = vec![
        (GateRule::And, parse(AND_RULE)),
        (GateRule::Or, parse(OR_RULE)),
        (GateRule::Not, parse(NOT_RULE)),
        (GateRule::Denial, parse(&denial.join(" | "))),
    ];
    for k in 0..=p.budget {
        let list = (1..=k)
            .rev()
            .fold("nil".to_string(), |tail, i| format!("L(x{i},{tail})"));
        rules.push((GateRule::Budget, parse(&format!("Budget({list})"))));
    }
    Encoding {
        usable: rules.iter().map(|(_, c)| c.clone()).collect(),
        sos,
        rules,
        symbols,
    }
}

/// Rewrites generated clauses for the circuit encoding:
/// evaluates `and`/`or`/`not` over pattern constants and `app` over lists,
/// drops clauses whose gate functions stay unevaluated, and drops clauses
/// with a `P` literal whose inverter list has more than `budget` cells.
///
/// `app(l, c)` on a list ending in `nil` closes it with `c`; on a list ending
/// in a variable it binds that tail to `L(c, tail)`, which is only done when
/// the variable occurs nowhere else in the clause.
pub struct BudgetHook {
    symbols: Arc<SymbolTable>,
    budget: usize,
    p: Symbol,
    l: Symbol,
    nil: Symbol,
    app: Symbol,
    and: Symbol,
    or: Symbol,
    not: Symbol,
    patterns: HashMap<Symbol, Option<SignalPattern>>,
    by_pattern: HashMap<SignalPattern, Symbol>,
    bound_tails: Vec<Var>,
}

impl BudgetHook {
    pub fn new(symbols: Arc<SymbolTable>, budget: usize) -> Self {
        let sym = |n: &str, a: usize| symbols.intern(n, a).expect("encoding symbols");
        BudgetHook {
            p: sym("P", 2),
            l: sym("L", 2),
            nil: sym("nil", 0),
            app: sym("app", 2),
            and: sym("and", 2),
            or: sym("or", 2),
            not: sym("not", 1),
            symbols: Arc::clone(&symbols),
            budget,
            patterns: HashMap::new(),
            by_pattern: HashMap::new(),
            bound_tails: Vec::new(),
        }
    }

    fn pattern(&mut self, s: Symbol) -> Option<SignalPattern> {
        if let Some(p) = self.patterns.get(&s) {
            return p.clone();
        }
        let p = if self.symbols.arity(s) == 0 {
            SignalPattern::parse(&self.symbols.name(s)).ok()
        } else {
            None
        };
        if let Some(q) = &p {
            self.by_pattern.insert(q.clone(), s);
        }
        self.patterns.insert(s, p.clone());
        p
    }

    fn constant(&mut self, p: SignalPattern) -> Term {
        if let Some(&s) = self.by_pattern.get(&p) {
            return Term::constant(s);
        }
        let s = self
            .symbols
            .intern(&p.to_string(), 0)
            .expect("pattern names are constants");
        self.patterns.insert(s, Some(p.clone()));
        self.by_pattern.insert(p, s);
        Term::constant(s)
    }

    fn is_evaluable(&self, s: Symbol) -> bool {
        s == self.and || s == self.or || s == self.not || s == self.app
    }

    fn needs_eval(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::App(f, args) => self.is_evaluable(*f) || args.iter().any(|a| self.needs_eval(a)),
        }
    }

    /// Evaluated copy of `t`; `None` if a gate function stays symbolic.
    fn eval(&mut self, t: &Term) -> Option<Term> {
        if !self.needs_eval(t) {
            return Some(t.clone());
        }
        let Term::App(f, args) = t else {
            unreachable!("variables need no evaluation")
        };
        let args: Vec<Term> = args.iter().map(|a| self.eval(a)).collect::<Option<_>>()?;
        if *f == self.app {
            let [list, cell] = <[Term; 2]>::try_from(args).ok()?;
            return self.append(list, cell);
        }
        if !self.is_evaluable(*f) {
            return Some(Term::App(*f, args.into()));
        }
        let mut pats = Vec::with_capacity(args.len());
        for a in &args {
            pats.push(self.pattern(a.functor()?)?);
        }
        if pats.len() == 2 && pats[0].len() != pats[1].len() {
            return None;
        }
        let v = match pats.as_slice() {
            [a, b] if *f == self.and => a & b,
            [a, b] if *f == self.or => a | b,
            [a] => !a,
            _ => return None,
        };
        Some(self.constant(v))
    }

    fn append(&mut self, list: Term, cell: Term) -> Option<Term> {
        match list {
            Term::Var(v) => {
                self.bound_tails.push(v);
                Some(Term::app(self.l, vec![cell, Term::Var(v)]))
            }
            Term::App(f, _) if f == self.nil => {
                Some(Term::app(self.l, vec![cell, Term::constant(self.nil)]))
            }
            Term::App(f, args) if f == self.l => {
                let [head, rest] = <[Term; 2]>::try_from(args.into_vec()).ok()?;
                let rest = self.append(rest, cell)?;
                Some(Term::app(self.l, vec![head, rest]))
            }
            Term::App(..) => None,
        }
    }

    fn list_cells(&self, mut t: &Term) -> usize {
        let mut n = 0;
        while let Term::App(f, args) = t {
            if *f != self.l {
                break;
            }
            n += 1;
            t = &args[1];
        }
        n
    }
}

fn occurrences(t: &Term, v: Var) -> usize {
    match t {
        Term::Var(w) => (*w == v) as usize,
        Term::App(_, args) => args.iter().map(|a| occurrences(a, v)).sum(),
    }
}

impl ClauseHook for BudgetHook {
    fn rewrite(&mut self, literals: Vec<Literal>) -> HookVerdict {
        self.bound_tails.clear();
        let mut out = Vec::with_capacity(literals.len());
        for lit in literals {
            let Some(atom) = self.eval(&lit.atom) else {
                return HookVerdict::Discard("unevaluated gate");
            };
            if atom.functor() == Some(self.p) && self.list_cells(&atom.args()[1]) > self.budget {
                return HookVerdict::Discard("inverter budget");
            }
            out.push(Literal::new(lit.positive, atom));
        }
        for &v in &self.bound_tails {
            // binding a shared tail would instantiate the other occurrences
            if out.iter().map(|l| occurrences(&l.atom, v)).sum::<usize>() != 1 {
                return HookVerdict::Discard("unevaluated gate");
            }
        }
        HookVerdict::Keep(out)
    }
}

#[derive(Clone, Debug)]
enum Derivation {
    Input(usize),
    And(SignalPattern, SignalPattern),
    Or(SignalPattern, SignalPattern),
    Not(SignalPattern),
    Same(SignalPattern),
}

fn fact_pattern(c: &Clause, symbols: &SymbolTable) -> Option<SignalPattern> {
    if !c.is_unit() || !c.literals()[0].positive {
        return None;
    }
    let atom = &c.literals()[0].atom;
    if atom.args().len() != 2 || symbols.name(atom.functor()?) != "P" {
        return None;
    }
    let f = atom.args()[0].functor()?;
    if symbols.arity(f) != 0 {
        return None;
    }
    SignalPattern::parse(&symbols.name(f)).ok()
}

/// Reads the gates off the positive `P` facts of a refutation of
/// [`encode_problem`]. The earliest derivation of each pattern is used.
pub fn extract_circuit(
    proof: &ProofDag,
    enc: &Encoding,
    p: &CircuitProblem,
) -> Result<super::Circuit, CircuitError> {
    let symbols = &*enc.symbols;
    let bad = |m: String| CircuitError::MalformedProof(m);
    let mut derivs: BTreeMap<SignalPattern, Derivation> = BTreeMap::new();
    for node in &proof.nodes {
        let Some(pat) = fact_pattern(&node.clause, symbols) else {
            continue;
        };
        if derivs.contains_key(&pat) {
            continue;
        }
        let d = match node.rule() {
            Rule::Input => {
                let i = p
                    .inputs
                    .iter()
                    .position(|q| *q == pat)
                    .ok_or_else(|| bad(format!("input fact {pat} is not a problem input")))?;
                Derivation::Input(i)
            }
            Rule::Hyper | Rule::Ur => {
                let parents = node.parents();
                let nucleus = proof
                    .node(parents[0])
                    .ok_or_else(|| bad(format!("missing nucleus of {}", node.id())))?;
                let sats: Vec<SignalPattern> = parents[1..]
                    .iter()
                    .map(|id| {
                        proof
                            .node(*id)
                            .and_then(|n| fact_pattern(&n.clause, symbols))
                            .ok_or_else(|| bad(format!("satellite {id} is not a fact")))
                    })
                    .collect::<Result<_, _>>()?;
                match (enc.rule_of(&nucleus.clause), sats.as_slice()) {
                    (Some(GateRule::And), [a, b]) => Derivation::And(a.clone(), b.clone()),
                    (Some(GateRule::Or), [a, b]) => Derivation::Or(a.clone(), b.clone()),
                    (Some(GateRule::Not), [a]) => Derivation::Not(a.clone()),
                    (r, _) => {
                        return Err(bad(format!(
                            "fact {} derived from unexpected nucleus {:?}",
                            node.id(),
                            r
                        )))
                    }
                }
            }
            Rule::Factor => match node.parents() {
                [parent] => {
                    let q = proof
                        .node(*parent)
                        .and_then(|n| n.clause.literals().first())
                        .and_then(|l| l.atom.args().first())
                        .and_then(|t| t.functor())
                        .and_then(|f| SignalPattern::parse(&symbols.name(f)).ok());
                    match q {
                        Some(q) if q == pat => Derivation::Same(q),
                        _ => continue,
                    }
                }
                _ => continue,
            },
            _ => continue,
        };
        derivs.insert(pat, d);
    }

    let mut b = CircuitBuilder::new();
    let mut built: HashMap<SignalPattern, NodeId> = HashMap::new();
    let mut outputs = Vec::with_capacity(p.outputs.len());
    for o in &p.outputs {
        outputs.push(build(o, &derivs, &mut built, &mut b, 0)?);
    }
    Ok(b.finish(outputs))
}

fn build(
    pat: &SignalPattern,
    derivs: &BTreeMap<SignalPattern, Derivation>,
    built: &mut HashMap<SignalPattern, NodeId>,
    b: &mut CircuitBuilder,
    depth: usize,
) -> Result<NodeId, CircuitError> {
    if let Some(&n) = built.get(pat) {
        return Ok(n);
    }
    if depth > derivs.len() {
        return Err(CircuitError::MalformedProof(format!(
            "cyclic derivation of {pat}"
        )));
    }
    let d = derivs
        .get(pat)
        .ok_or_else(|| CircuitError::MalformedProof(format!("no derivation of {pat}")))?;
    let mut sub = |q: &SignalPattern| build(q, derivs, built, b, depth + 1);
    let n = match d {
        Derivation::Input(i) => b.gate(Gate::Input(*i)),
        Derivation::And(x, y) => {
            let (x, y) = (sub(x)?, sub(y)?);
            b.gate(Gate::And(x, y))
        }
        Derivation::Or(x, y) => {
            let (x, y) = (sub(x)?, sub(y)?);
            b.gate(Gate::Or(x, y))
        }
        Derivation::Not(x) => {
            let x = sub(x)?;
            b.gate(Gate::Not(x))
        }
        Derivation::Same(x) if x != pat => sub(x)?,
        Derivation::Same(_) => {
            return Err(CircuitError::MalformedProof(format!(
                "{pat} derived from itself"
            )))
        }
    };
    built.insert(pat.clone(), n);
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::super::{ninv_problem, two_inverter_problem};
    use super::*;
    use crate::clause::parse_literals;

    fn lits(s: &str, syms: &SymbolTable) -> Vec<Literal> {
        parse_literals(s, syms).unwrap()
    }

    fn show(ls: &[Literal], syms: &SymbolTable) -> String {
        ls.iter()
            .map(|l| {
                format!(
                    "{}{}",
                    if l.positive { "" } else { "-" },
                    l.atom.display(syms)
                )
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    #[test]
    fn input_facts_have_open_lists() {
        let syms = Arc::new(SymbolTable::new());
        let enc = encode_problem(&two_inverter_problem(), Arc::clone(&syms));
        let facts: Vec<String> = enc
            .sos
            .iter()
            .map(|c| c.display(&syms).to_string())
            .collect();
        assert_eq!(facts, ["P(00001111,x)", "P(00110011,x)", "P(01010101,x)"]);
        assert_eq!(enc.usable.len(), 7);
        assert_eq!(enc.rule_clause(GateRule::Denial).len(), 4);
        let caps: Vec<String> = enc.usable[4..]
            .iter()
            .map(|c| c.display(&syms).to_string())
            .collect();
        assert_eq!(
            caps,
            ["Budget(nil)", "Budget(L(x,nil))", "Budget(L(x,L(y,nil)))"]
        );
    }

    #[test]
    fn not_rule_conclusion_is_evaluated() {
        let syms = Arc::new(SymbolTable::new());
        let _enc = encode_problem(&two_inverter_problem(), Arc::clone(&syms));
        let mut hook = BudgetHook::new(Arc::clone(&syms), 2);
        let HookVerdict::Keep(out) = hook.rewrite(lits(
            "P(not(00001111), app(L(inv(00110011), v), inv(not(00001111))))",
            &syms,
        )) else {
            panic!("discarded");
        };
        assert_eq!(
            show(&out, &syms),
            "P(11110000,L(inv(00110011),L(inv(11110000),x)))"
        );
        let HookVerdict::Keep(out) = hook.rewrite(lits("-Q(app(nil, a))", &syms)) else {
            panic!("discarded");
        };
        assert_eq!(show(&out, &syms), "-Q(L(a,nil))");
        // a tail shared with another literal is not rebound
        assert!(matches!(
            hook.rewrite(lits("P(00001111, app(v, a)) | Q(v)", &syms)),
            HookVerdict::Discard(_)
        ));
    }

    #[test]
    fn budget_counts_closed_cells() {
        let syms = Arc::new(SymbolTable::new());
        let _ = encode_problem(&two_inverter_problem(), Arc::clone(&syms));
        let keep = |budget: usize, s: &str| {
            let mut h = BudgetHook::new(Arc::clone(&syms), budget);
            matches!(h.rewrite(lits(s, &syms)), HookVerdict::Keep(_))
        };
        assert!(keep(2, "P(0011, L(inv(a), L(inv(b), v)))"));
        assert!(!keep(2, "P(0011, L(inv(a), L(inv(b), L(inv(c), v))))"));
        assert!(keep(0, "P(0011, v)"));
        assert!(!keep(0, "-P(0011, L(inv(a), v))"));
    }

    #[test]
    fn symbolic_gates_are_dropped() {
        let syms = Arc::new(SymbolTable::new());
        let _ = encode_problem(&ninv_problem(2, 1).unwrap(), Arc::clone(&syms));
        let mut h = BudgetHook::new(Arc::clone(&syms), 1);
        assert!(matches!(
            h.rewrite(lits("-P(and(x, 0011), v)", &syms)),
            HookVerdict::Discard(_)
        ));
        let HookVerdict::Keep(out) = h.rewrite(lits("P(or(0011, 0101), v)", &syms)) else {
            panic!("discarded");
        };
        assert_eq!(show(&out, &syms), "P(0111,x)");
    }
}
