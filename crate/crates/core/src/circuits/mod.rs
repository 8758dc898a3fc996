//! Negation-limited inverter synthesis.
//!
//! A signal is identified with its truth-table column (a [`SignalPattern`]).
//! A [`CircuitProblem`] asks for AND/OR/NOT circuits that produce every
//! output column from the input columns using at most `budget` NOT gates.

mod encode;
mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::saturation::{Outcome, Prover, ProverConfig, TraceSink};
use crate::term::SymbolTable;

pub use encode::{encode_problem, extract_circuit, BudgetHook, Encoding, GateRule};
pub use oracle::{brute_force_search, lattice_closure, OracleResult};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("input count {0} outside 1..=16")]
    InputCount(usize),
    #[error("pattern has {found} rows, expected {expected}")]
    PatternLength { expected: usize, found: usize },
    #[error("invalid pattern `{0}`: only 0 and 1 allowed")]
    BadPattern(String),
    #[error("problem has no inputs")]
    NoInputs,
    #[error("problem has no outputs")]
    NoOutputs,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("cannot read problem file: {0}")]
    Io(String),
    #[error("proof does not come from this encoding: {0}")]
    MalformedProof(String),
    #[error("oracle supports at most 64 rows, problem has {0}")]
    OracleRange(usize),
}

/// Truth-table column. Row `r` is bit `r`; rows print left to right.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignalPattern {
    len: usize,
    words: Vec<u64>,
}

impl SignalPattern {
    pub fn zeros(len: usize) -> Self {
        SignalPattern {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        !&Self::zeros(len)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Self::zeros(bits.len());
        for (r, &b) in bits.iter().enumerate() {
            p.set(r, b);
        }
        p
    }

    /// Low `len` bits of `bits`, row 0 in bit 0.
    pub fn from_u64(bits: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut p = Self::zeros(len);
        if len > 0 {
            p.words[0] = bits & mask(len);
        }
        p
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self, CircuitError> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(CircuitError::BadPattern(s.to_string()));
        }
        let bits: Vec<bool> = s.bytes().map(|b| b == b'1').collect();
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, row: usize) -> bool {
        assert!(row < self.len);
        self.words[row / 64] >> (row % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, value: bool) {
        assert!(row < self.len);
        let bit = 1u64 << (row % 64);
        if value {
            self.words[row / 64] |= bit;
        } else {
            self.words[row / 64] &= !bit;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.len, other.len, "pattern length mismatch");
        SignalPattern {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl std::ops::BitAnd for &SignalPattern {
    type Output = SignalPattern;
    fn bitand(self, rhs: &SignalPattern) -> SignalPattern {
        self.zip(rhs, |a, b| a & b)
    }
}

impl std::ops::BitOr for &SignalPattern {
    type Output = SignalPattern;
    fn bitor(self, rhs: &SignalPattern) -> SignalPattern {
        self.zip(rhs, |a, b| a | b)
    }
}

impl std::ops::Not for &SignalPattern {
    type Output = SignalPattern;
    fn not(self) -> SignalPattern {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let rem = self.len % 64;
        if rem != 0 {
            *words.last_mut().unwrap() &= mask(rem);
        }
        SignalPattern {
            len: self.len,
            words,
        }
    }
}

impl fmt::Display for SignalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.len {
            f.write_str(if self.get(r) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignalPattern({self})")
    }
}

/// Columns of the full truth table over `n` inputs, rows in binary counting
/// order with input 1 as the most significant bit.
pub fn input_patterns(n: usize) -> Result<Vec<SignalPattern>, CircuitError> {
    if !(1..=16).contains(&n) {
        return Err(CircuitError::InputCount(n));
    }
    let rows = 1usize << n;
    Ok((0..n)
        .map(|i| {
            let mut p = SignalPattern::zeros(rows);
            for r in 0..rows {
                p.set(r, (r >> (n - 1 - i)) & 1 == 1);
            }
            p
        })
        .collect())
}

/// ⌈log2(n+1)⌉, the number of NOT gates needed to invert `n` inputs.
pub fn markov_bound(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitProblem {
    pub name: String,
    pub rows: usize,
    pub inputs: Vec<SignalPattern>,
    pub outputs: Vec<SignalPattern>,
    pub budget: usize,
}

impl CircuitProblem {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<SignalPattern>,
        outputs: Vec<SignalPattern>,
        budget: usize,
    ) -> Result<Self, CircuitError> {
        let first = inputs.first().ok_or(CircuitError::NoInputs)?;
        if outputs.is_empty() {
            return Err(CircuitError::NoOutputs);
        }
        let rows = first.len();
        for p in inputs.iter().chain(&outputs) {
            if p.len() != rows {
                return Err(CircuitError::PatternLength {
                    expected: rows,
                    found: p.len(),
                });
            }
        }
        Ok(CircuitProblem {
            name: name.into(),
            rows,
            inputs,
            outputs,
            budget,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

/// `n` inputs, outputs their complements.
pub fn ninv_problem(n: usize, budget: usize) -> Result<CircuitProblem, CircuitError> {
    let inputs = input_patterns(n)?;
    let outputs = inputs.iter().map(|p| !p).collect();
    CircuitProblem::new(format!("ninv:{n}:{budget}"), inputs, outputs, budget)
}

/// Three inputs, three inverted outputs, two NOT gates.
pub fn two_inverter_problem() -> CircuitProblem {
    ninv_problem(3, 2).expect("valid").renamed("2inv")
}

/// Outputs equal the inputs; solvable with no gates at all.
pub fn identity_problem(n: usize) -> Result<CircuitProblem, CircuitError> {
    let inputs = input_patterns(n)?;
    CircuitProblem::new(format!("identity:{n}"), inputs.clone(), inputs, 0)
}

impl CircuitProblem {
    fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// Which next-state columns the decade-counter denial uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DenialSource {
    /// Columns read off the counter's state table.
    #[default]
    TableDerived,
    /// The published denial clause verbatim (two columns differ from the table).
    Listing,
}

/// Decade counter next-state function: ten rows, four state bits.
pub fn bcd_problem() -> CircuitProblem {
    bcd_problem_with(DenialSource::TableDerived)
}

pub fn bcd_problem_with(denial: DenialSource) -> CircuitProblem {
    let p = |s: &str| SignalPattern::parse(s).expect("valid literal");
    let inputs = ["0000000011", "0000111100", "0011001100", "0101010101"]
        .map(p)
        .to_vec();
    let outputs = match denial {
        DenialSource::TableDerived => ["0000000111", "0001111000", "0110011001", "1010101010"],
        DenialSource::Listing => ["0000000110", "0001111000", "0110011000", "1010101010"],
    }
    .map(p)
    .to_vec();
    let name = match denial {
        DenialSource::TableDerived => "bcd",
        DenialSource::Listing => "bcd:listing",
    };
    CircuitProblem::new(name, inputs, outputs, 2).expect("valid")
}

/// Parses the text problem format: `rows R`, `input <bits>`, `output <bits>`,
/// `budget K`, `#` comments.
pub fn parse_problem(name: &str, text: &str) -> Result<CircuitProblem, CircuitError> {
    let mut rows: Option<usize> = None;
    let mut budget: Option<usize> = None;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let perr = |msg: String| CircuitError::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap();
        let value = parts
            .next()
            .ok_or_else(|| perr(format!("`{key}` needs a value")))?;
        if parts.next().is_some() {
            return Err(perr("trailing tokens".into()));
        }
        match key {
            "rows" => {
                let r = value
                    .parse()
                    .map_err(|_| perr(format!("bad row count `{value}`")))?;
                rows = Some(r);
            }
            "budget" => {
                let b = value
                    .parse()
                    .map_err(|_| perr(format!("bad budget `{value}`")))?;
                budget = Some(b);
            }
            "input" | "output" => {
                let p = SignalPattern::parse(value).map_err(|e| perr(e.to_string()))?;
                if let Some(r) = rows {
                    if p.len() != r {
                        return Err(perr(format!("pattern has {} rows, expected {r}", p.len())));
                    }
                }
                if key == "input" {
                    inputs.push(p);
                } else {
                    outputs.push(p);
                }
            }
            other => return Err(perr(format!("unknown key `{other}`"))),
        }
    }
    let budget = budget.ok_or(CircuitError::Parse {
        line: 0,
        msg: "missing `budget`".into(),
    })?;
    let p = CircuitProblem::new(name, inputs, outputs, budget)?;
    if let Some(r) = rows {
        if r != p.rows {
            return Err(CircuitError::PatternLength {
                expected: r,
                found: p.rows,
            });
        }
    }
    Ok(p)
}

/// Resolves a built-in name (`2inv`, `bcd`, `ninv N K` / `ninv:N:K`,
/// `identity:N`) or reads a problem file.
pub fn load_problem(source: &str, denial: DenialSource) -> Result<CircuitProblem, CircuitError> {
    let parts: Vec<&str> = source
        .split(|c: char| c == ':' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CircuitError::UnknownProblem(source.to_string()))
    };
    match parts.as_slice() {
        ["2inv"] => return Ok(two_inverter_problem()),
        ["bcd"] => return Ok(bcd_problem_with(denial)),
        ["ninv", n, k] => return ninv_problem(num(n)?, num(k)?),
        ["identity", n] => return identity_problem(num(n)?),
        _ => {}
    }
    let path = Path::new(source);
    if !path.is_file() {
        return Err(CircuitError::UnknownProblem(source.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CircuitError::Io(e.to_string()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| source.to_string());
    parse_problem(&name, &text)
}

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Index into the problem's inputs.
    Input(usize),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Not(NodeId),
}

/// Gate DAG in topological order: every gate refers only to earlier nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    pub outputs: Vec<NodeId>,
}

impl Circuit {
    pub fn not_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Not(_)))
            .count()
    }

    /// AND/OR/NOT gates, inputs excluded.
    pub fn gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| !matches!(g, Gate::Input(_)))
            .count()
    }

    /// Node values over all rows; `None` if the DAG is malformed.
    pub fn evaluate(&self, inputs: &[SignalPattern]) -> Option<Vec<SignalPattern>> {
        let mut vals: Vec<SignalPattern> = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let ok = |n: &NodeId| *n < i;
            let v = match g {
                Gate::Input(k) => inputs.get(*k)?.clone(),
                Gate::And(a, b) if ok(a) && ok(b) => &vals[*a] & &vals[*b],
                Gate::Or(a, b) if ok(a) && ok(b) => &vals[*a] | &vals[*b],
                Gate::Not(a) if ok(a) => !&vals[*a],
                _ => return None,
            };
            vals.push(v);
        }
        Some(vals)
    }

    pub fn render(&self, problem: &CircuitProblem) -> String {
        let vals = self.evaluate(&problem.inputs);
        let mut s = String::new();
        for (i, g) in self.gates.iter().enumerate() {
            let expr = match g {
                Gate::Input(k) => format!("input {}", k + 1),
                Gate::And(a, b) => format!("and(g{a}, g{b})"),
                Gate::Or(a, b) => format!("or(g{a}, g{b})"),
                Gate::Not(a) => format!("not(g{a})"),
            };
            match &vals {
                Some(v) => s.push_str(&format!("g{i} = {expr:<18} # {}\n", v[i])),
                None => s.push_str(&format!("g{i} = {expr}\n")),
            }
        }
        for (k, o) in self.outputs.iter().enumerate() {
            s.push_str(&format!("output {} = g{o}\n", k + 1));
        }
        s.push_str(&format!("# not gates: {}\n", self.not_count()));
        s
    }
}

/// Builds a circuit while sharing structurally identical gates.
#[derive(Default)]
pub struct CircuitBuilder {
    circuit: Circuit,
    memo: HashMap<Gate, NodeId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gate(&mut self, g: Gate) -> NodeId {
        if let Some(&id) = self.memo.get(&g) {
            return id;
        }
        let id = self.circuit.gates.len();
        self.circuit.gates.push(g);
        self.memo.insert(g, id);
        id
    }

    pub fn finish(mut self, outputs: Vec<NodeId>) -> Circuit {
        self.circuit.outputs = outputs;
        self.circuit
    }
}

/// True iff every output evaluates to its required column and the circuit
/// uses at most `budget` NOT gates.
pub fn verify_circuit(c: &Circuit, p: &CircuitProblem) -> bool {
    if c.outputs.len() != p.outputs.len() || c.not_count() > p.budget {
        return false;
    }
    let Some(vals) = c.evaluate(&p.inputs) else {
        return false;
    };
    c.outputs
        .iter()
        .zip(&p.outputs)
        .all(|(&o, want)| vals.get(o) == Some(want))
}

/// A saturation run on an encoded problem, with the circuit read off the
/// proof when one was found.
pub struct Synthesis {
    pub outcome: Outcome,
    pub prover: Prover,
    pub encoding: Encoding,
    pub circuit: Option<Result<Circuit, CircuitError>>,
}

pub fn synthesize(p: &CircuitProblem, config: ProverConfig) -> Synthesis {
    synthesize_traced(p, config, None)
}

pub fn synthesize_traced(
    p: &CircuitProblem,
    config: ProverConfig,
    trace: Option<Box<dyn TraceSink>>,
) -> Synthesis {
    let encoding = encode_problem(p, std::sync::Arc::new(SymbolTable::new()));
    let mut prover = Prover::new(config).with_hook(Box::new(encoding.hook(p.budget)));
    if let Some(t) = trace {
        prover = prover.with_trace_sink(t);
    }
    prover.add_usable(encoding.usable.iter().cloned());
    prover.add_sos(encoding.sos.iter().cloned());
    let outcome = prover.run();
    let circuit = match outcome {
        Outcome::Refutation(id) => Some(
            prover
                .extract_proof(id)
                .ok_or_else(|| CircuitError::MalformedProof("no proof".into()))
                .and_then(|proof| extract_circuit(&proof, &encoding, p)),
        ),
        _ => None,
    };
    Synthesis {
        outcome,
        prover,
        encoding,
        circuit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> SignalPattern {
        SignalPattern::parse(s).unwrap()
    }

    fn show(ps: &[SignalPattern]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn input_columns() {
        assert_eq!(
            show(&input_patterns(3).unwrap()),
            ["00001111", "00110011", "01010101"]
        );
        assert_eq!(show(&input_patterns(1).unwrap()), ["01"]);
        assert_eq!(show(&input_patterns(2).unwrap()), ["0011", "0101"]);
        assert_eq!(input_patterns(0), Err(CircuitError::InputCount(0)));
        assert_eq!(input_patterns(17), Err(CircuitError::InputCount(17)));
        assert_eq!(input_patterns(16).unwrap()[15].count_ones(), 1 << 15);
    }

    #[test]
    fn pattern_ops_mask_unused_bits() {
        let a = pat("0011");
        assert_eq!((!&a).to_string(), "1100");
        assert_eq!((&a & &pat("0101")).to_string(), "0001");
        assert_eq!((&a | &pat("0101")).to_string(), "0111");
        assert_eq!(SignalPattern::ones(70).count_ones(), 70);
        assert!(SignalPattern::parse("01x").is_err());
    }

    #[test]
    fn markov_bound_values() {
        let expect = [(1, 1), (2, 2), (3, 2), (4, 3), (7, 3), (8, 4)];
        for (n, d) in expect {
            assert_eq!(markov_bound(n), d, "n={n}");
        }
    }

    #[test]
    fn bcd_row_transitions() {
        let p = bcd_problem();
        let state = |cols: &[SignalPattern], r: usize| -> String {
            cols.iter()
                .map(|c| if c.get(r) { '1' } else { '0' })
                .collect()
        };
        // 0111 -> 1000 in the eighth row
        assert_eq!(state(&p.inputs, 7), "0111");
        assert_eq!(state(&p.outputs, 7), "1000");
        assert_eq!(p.budget, 2);
        assert_eq!(p.rows, 10);
    }

    #[test]
    fn problem_file_round_trip() {
        let text = "# three inputs\nrows 8\ninput 00001111\ninput 00110011 # second\ninput 01010101\noutput 11110000\nbudget 1\n";
        let p = parse_problem("t", text).unwrap();
        assert_eq!(p.inputs.len(), 3);
        assert_eq!(p.outputs, vec![pat("11110000")]);
        assert_eq!(p.budget, 1);
        assert!(matches!(
            parse_problem("t", "rows 4\ninput 001\nbudget 0\n"),
            Err(CircuitError::Parse { line: 2, .. })
        ));
        assert!(parse_problem("t", "input 01\noutput 10\n").is_err());
        assert!(matches!(
            parse_problem("t", "input 01\noutput 10\nbudget 1\ncolour red\n"),
            Err(CircuitError::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn builtin_names() {
        let d = DenialSource::TableDerived;
        assert_eq!(load_problem("2inv", d).unwrap().budget, 2);
        assert_eq!(
            load_problem("ninv 2 1", d).unwrap(),
            ninv_problem(2, 1).unwrap()
        );
        assert_eq!(load_problem("ninv:2:1", d).unwrap().outputs.len(), 2);
        assert_eq!(
            load_problem("bcd", DenialSource::Listing).unwrap().outputs[0].to_string(),
            "0000000110"
        );
        assert!(matches!(
            load_problem("nope", d),
            Err(CircuitError::UnknownProblem(_))
        ));
    }

    #[test]
    fn verify_identity_and_budget() {
        let p = identity_problem(3).unwrap();
        let mut b = CircuitBuilder::new();
        let outs = (0..3).map(|i| b.gate(Gate::Input(i))).collect();
        assert!(verify_circuit(&b.finish(outs), &p));

        let p = ninv_problem(1, 2).unwrap();
        let mut b = CircuitBuilder::new();
        let x = b.gate(Gate::Input(0));
        let n1 = b.gate(Gate::Not(x));
        let n2 = b.gate(Gate::Not(n1));
        let n3 = b.gate(Gate::Not(n2));
        let c = b.finish(vec![n3]);
        assert_eq!(c.not_count(), 3);
        assert!(!verify_circuit(&c, &p));
        assert!(verify_circuit(&c, &p.clone().with_budget(3)));
    }

    #[test]
    fn malformed_dag_fails_verification() {
        let p = ninv_problem(1, 1).unwrap();
        let c = Circuit {
            gates: vec![Gate::Not(0)],
            outputs: vec![0],
        };
        assert!(!verify_circuit(&c, &p));
    }

    /// Full inverter over three inputs with two NOT gates, evaluated row by
    /// row on the table's "1 0 1 -> 0 1 0" line.
    #[test]
    fn classic_two_inverter_circuit() {
        let p = two_inverter_problem();
        let mut b = CircuitBuilder::new();
        let [x, y, z] = [0, 1, 2].map(|i| b.gate(Gate::Input(i)));
        let xy = b.gate(Gate::And(x, y));
        let yz = b.gate(Gate::And(y, z));
        let xz = b.gate(Gate::And(x, z));
        let t = b.gate(Gate::Or(xy, yz));
        let maj = b.gate(Gate::Or(t, xz));
        let nmaj = b.gate(Gate::Not(maj));
        let xyz = b.gate(Gate::And(xy, z));
        let x_or_y = b.gate(Gate::Or(x, y));
        let any = b.gate(Gate::Or(x_or_y, z));
        let one = b.gate(Gate::And(nmaj, any));
        let odd = b.gate(Gate::Or(one, xyz));
        let nodd = b.gate(Gate::Not(odd));
        // not(i) = nmaj & nodd | nmaj & (j | k) | nodd & j & k
        let both = b.gate(Gate::And(nmaj, nodd));
        let outs: Vec<NodeId> = [(y, z), (x, z), (x, y)]
            .into_iter()
            .map(|(j, k)| {
                let j_or_k = b.gate(Gate::Or(j, k));
                let j_and_k = b.gate(Gate::And(j, k));
                let t1 = b.gate(Gate::And(nmaj, j_or_k));
                let t2 = b.gate(Gate::And(nodd, j_and_k));
                let u = b.gate(Gate::Or(both, t1));
                b.gate(Gate::Or(u, t2))
            })
            .collect();
        let c = b.finish(outs);
        let vals = c.evaluate(&p.inputs).unwrap();
        let row = 5; // inputs 1 0 1
        let ins: String = p
            .inputs
            .iter()
            .map(|q| if q.get(row) { '1' } else { '0' })
            .collect();
        assert_eq!(ins, "101");
        let got: String = c
            .outputs
            .iter()
            .map(|&o| if vals[o].get(row) { '1' } else { '0' })
            .collect();
        assert_eq!(got, "010");
        assert!(verify_circuit(&c, &p));
        assert_eq!(c.not_count(), 2);
    }
}
