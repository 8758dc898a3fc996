//! The given-clause loop.
//!
//! Retained clauses live in exactly one of three lists: `usable` (partners
//! for inference), `sos` (waiting to be picked as given clause) and
//! `passive` (consulted only by forward subsumption and unit conflict).
//! Each iteration picks a given clause from sos, moves it to usable, runs
//! the active rule with the given clause participating, and pushes every
//! conclusion through the retention pipeline. The sos size is recorded right
//! after each pick.

use std::collections::{BTreeSet, HashSet};
use std::io::{self, Write};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clause::{
    factors, make_clause, subsumes, unit_conflict, Clause, ClauseId, ListRole, Literal, Rule,
};
use crate::index::LitIndex;
use crate::inference::{infer, Resolvent, RuleConfig, Usable};

/// Given-clause selection strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PickGiven {
    /// Lightest clause first, oldest among equals.
    #[default]
    Weight,
    Fifo,
    /// Every `r`-th pick is FIFO, the others lightest-first.
    Ratio(u32),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_given: Option<u64>,
    pub max_seconds: Option<f64>,
    pub max_weight: Option<u32>,
    pub max_retained: Option<u64>,
}

impl Limits {
    pub fn unbounded() -> Self {
        Self::default()
    }

    pub fn with_max_given(mut self, n: u64) -> Self {
        self.max_given = Some(n);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    MaxGiven,
    MaxSeconds,
    MaxRetained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The empty clause with this id was derived.
    Refutation(ClauseId),
    SosExhausted,
    LimitHit(LimitKind),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub clauses_generated: u64,
    pub clauses_kept: u64,
    pub clauses_forward_subsumed: u64,
    pub subsumed_by_sos: u64,
    pub discarded_tautology: u64,
    pub discarded_weight: u64,
    pub discarded_by_hook: u64,
    pub back_subsumed: u64,
    pub sos_size_final: u64,
    pub sos_size_peak: u64,
    pub given_count: u64,
    pub wall_seconds: f64,
    pub cpu_seconds: f64,
}

impl Stats {
    /// Stats with the timing fields zeroed, for reproducibility checks.
    pub fn without_times(&self) -> Stats {
        Stats {
            wall_seconds: 0.0,
            cpu_seconds: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub sos_size: u64,
    pub given_id: ClauseId,
    pub given_weight: u32,
}

pub const TRACE_HEADER: &str = "iteration,sos_size,given_id,given_weight";

pub trait TraceSink: Send {
    fn record(&mut self, point: &TracePoint);
}

/// Writes the trace as CSV, flushing every 1000 rows. I/O errors are kept
/// and reported by [`CsvTrace::finish`].
pub struct CsvTrace<W: Write + Send> {
    out: W,
    rows: u64,
    error: Option<io::Error>,
}

impl<W: Write + Send> CsvTrace<W> {
    pub fn new(mut out: W) -> Self {
        let error = writeln!(out, "{TRACE_HEADER}").err();
        CsvTrace {
            out,
            rows: 0,
            error,
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write + Send> TraceSink for CsvTrace<W> {
    fn record(&mut self, p: &TracePoint) {
        if self.error.is_some() {
            return;
        }
        let r = writeln!(
            self.out,
            "{},{},{},{}",
            p.iteration, p.sos_size, p.given_id, p.given_weight
        )
        .and_then(|_| {
            self.rows += 1;
            if self.rows.is_multiple_of(1000) {
                self.out.flush()
            } else {
                Ok(())
            }
        });
        self.error = r.err();
    }
}

impl<T: TraceSink + ?Sized> TraceSink for Box<T> {
    fn record(&mut self, point: &TracePoint) {
        (**self).record(point)
    }
}

/// Verdict of a [`ClauseHook`] on a freshly generated clause.
pub enum HookVerdict {
    Keep(Vec<Literal>),
    Discard(&'static str),
}

/// Problem-specific rewriting applied to every conclusion before the
/// retention tests (interpreted functions, resource constraints).
pub trait ClauseHook: Send {
    fn rewrite(&mut self, literals: Vec<Literal>) -> HookVerdict;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscardReason {
    Hook(&'static str),
    Tautology,
    Weight,
    ForwardSubsumed { by: ClauseId, in_sos: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disposition {
    Retained(ClauseId),
    Discarded(DiscardReason),
    Refutation(ClauseId),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProverConfig {
    pub rule: RuleConfig,
    pub pick_given: PickGiven,
    pub limits: Limits,
    /// Delete retained clauses subsumed by a newly kept one.
    pub back_subsumption: bool,
    /// Skip factoring of retained clauses.
    pub no_factoring: bool,
}

/// Set-of-support queue supporting both weight and FIFO order.
#[derive(Default, Debug, Clone)]
pub struct SosQueue {
    by_weight: BTreeSet<(u32, ClauseId)>,
    by_age: BTreeSet<(ClauseId, u32)>,
    picks: u64,
}

impl SosQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: ClauseId, weight: u32) {
        self.by_weight.insert((weight, id));
        self.by_age.insert((id, weight));
    }

    pub fn remove(&mut self, id: ClauseId, weight: u32) -> bool {
        self.by_age.remove(&(id, weight)) && self.by_weight.remove(&(weight, id))
    }

    pub fn len(&self) -> usize {
        self.by_age.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_age.is_empty()
    }

    /// Removes and returns the next given clause id.
    pub fn select_given(&mut self, strategy: PickGiven) -> Option<ClauseId> {
        self.picks += 1;
        let fifo = match strategy {
            PickGiven::Weight => false,
            PickGiven::Fifo => true,
            PickGiven::Ratio(r) => r <= 1 || self.picks.is_multiple_of(r as u64),
        };
        let (id, w) = if fifo {
            *self.by_age.iter().next()?
        } else {
            let (w, id) = *self.by_weight.iter().next()?;
            (id, w)
        };
        self.remove(id, w);
        Some(id)
    }
}

struct Stored {
    clause: Arc<Clause>,
    role: Option<ListRole>,
    initial_sos: bool,
}

/// One node of an extracted proof.
#[derive(Clone, Debug)]
pub struct ProofNode {
    pub clause: Arc<Clause>,
    /// List an input clause was loaded into; `None` for derived clauses.
    pub input_role: Option<ListRole>,
}

impl ProofNode {
    pub fn id(&self) -> ClauseId {
        self.clause.id
    }

    pub fn rule(&self) -> Rule {
        self.clause.origin.rule
    }

    pub fn parents(&self) -> &[ClauseId] {
        &self.clause.origin.parents
    }
}

/// Ancestor-closed derivation of the empty clause, parents before children.
#[derive(Clone, Debug)]
pub struct ProofDag {
    pub nodes: Vec<ProofNode>,
}

impl ProofDag {
    pub fn node(&self, id: ClauseId) -> Option<&ProofNode> {
        self.nodes
            .binary_search_by_key(&id, |n| n.id())
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn root(&self) -> &ProofNode {
        self.nodes
            .last()
            .expect("proof has at least the empty clause")
    }

    /// Number of distinct derivation steps.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn render(&self, symbols: &crate::term::SymbolTable) -> String {
        let mut s = String::new();
        for n in &self.nodes {
            let parents: Vec<String> = n.parents().iter().map(|p| p.to_string()).collect();
            let tag = match n.input_role {
                Some(ListRole::Usable) => "input,usable".to_string(),
                Some(ListRole::Sos) => "input,sos".to_string(),
                Some(ListRole::Passive) => "input,passive".to_string(),
                None if parents.is_empty() => n.rule().name().to_string(),
                None => format!("{},{}", n.rule().name(), parents.join(",")),
            };
            s.push_str(&format!(
                "{} [{}] {}.\n",
                n.id(),
                tag,
                n.clause.display(symbols)
            ));
        }
        s
    }
}

pub struct Prover {
    config: ProverConfig,
    store: Vec<Option<Stored>>,
    usable: Usable,
    sos: SosQueue,
    passive: Vec<ClauseId>,
    // every retained clause, keyed by its first literal
    subsumers: LitIndex,
    units: LitIndex,
    hook: Option<Box<dyn ClauseHook>>,
    trace_sink: Option<Box<dyn TraceSink>>,
    trace: Vec<TracePoint>,
    stats: Stats,
    refutation: Option<ClauseId>,
    started: Option<(Instant, Option<f64>)>,
}

impl Prover {
    pub fn new(config: ProverConfig) -> Self {
        Prover {
            config,
            store: vec![None],
            usable: Usable::new(),
            sos: SosQueue::new(),
            passive: Vec::new(),
            subsumers: LitIndex::new(),
            units: LitIndex::new(),
            hook: None,
            trace_sink: None,
            trace: Vec::new(),
            stats: Stats::default(),
            refutation: None,
            started: None,
        }
    }

    pub fn with_hook(mut self, hook: Box<dyn ClauseHook>) -> Self {
        self.hook = Some(hook);
        self
    }

    pub fn with_trace_sink(mut self, sink: Box<dyn TraceSink>) -> Self {
        self.trace_sink = Some(sink);
        self
    }

    pub fn config(&self) -> &ProverConfig {
        &self.config
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    pub fn take_trace_sink(&mut self) -> Option<Box<dyn TraceSink>> {
        self.trace_sink.take()
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Arc<Clause>> {
        self.store
            .get(id.0 as usize)
            .and_then(|s| s.as_ref())
            .map(|s| &s.clause)
    }

    pub fn role(&self, id: ClauseId) -> Option<ListRole> {
        self.store
            .get(id.0 as usize)
            .and_then(|s| s.as_ref())
            .and_then(|s| s.role)
    }

    pub fn usable(&self) -> &Usable {
        &self.usable
    }

    pub fn sos_len(&self) -> usize {
        self.sos.len()
    }

    pub fn passive_len(&self) -> usize {
        self.passive.len()
    }

    /// Ids of every clause currently in a list.
    pub fn retained_ids(&self) -> Vec<(ClauseId, ListRole)> {
        self.store
            .iter()
            .flatten()
            .filter_map(|s| s.role.map(|r| (s.clause.id, r)))
            .collect()
    }

    fn next_id(&self) -> ClauseId {
        ClauseId(self.store.len() as u32)
    }

    fn store_clause(
        &mut self,
        clause: Clause,
        role: Option<ListRole>,
        initial_sos: bool,
    ) -> Arc<Clause> {
        let id = self.next_id();
        let clause = Arc::new(clause.with_id(id));
        self.store.push(Some(Stored {
            clause: Arc::clone(&clause),
            role,
            initial_sos,
        }));
        if role.is_some() && !clause.is_empty() {
            self.subsumers.insert(&clause, 0);
            if clause.is_unit() {
                self.units.insert(&clause, 0);
            }
        }
        clause
    }

    fn load(&mut self, clause: Clause, role: ListRole) -> ClauseId {
        let c = self.store_clause(
            Clause::clone(&clause).with_id(ClauseId::UNASSIGNED),
            Some(role),
            role == ListRole::Sos,
        );
        match role {
            ListRole::Usable => self.usable.insert(Arc::clone(&c)),
            ListRole::Sos => {
                self.sos.push(c.id, c.weight());
                self.stats.sos_size_peak = self.stats.sos_size_peak.max(self.sos.len() as u64);
            }
            ListRole::Passive => self.passive.push(c.id),
        }
        if c.is_empty() {
            self.refutation.get_or_insert(c.id);
        }
        c.id
    }

    pub fn add_usable(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Vec<ClauseId> {
        clauses
            .into_iter()
            .map(|c| self.load(c, ListRole::Usable))
            .collect()
    }

    pub fn add_sos(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Vec<ClauseId> {
        clauses
            .into_iter()
            .map(|c| self.load(c, ListRole::Sos))
            .collect()
    }

    pub fn add_passive(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Vec<ClauseId> {
        clauses
            .into_iter()
            .map(|c| self.load(c, ListRole::Passive))
            .collect()
    }

    fn find_subsumer(&self, d: &Clause) -> Option<(ClauseId, bool)> {
        let mut seen: HashSet<ClauseId> = HashSet::new();
        for l in d.literals() {
            for e in self.subsumers.generalizations(l.positive, &l.atom) {
                let c = &e.clause;
                if d.len() > 1 && !seen.insert(c.id) {
                    continue;
                }
                if subsumes(c, d) {
                    let in_sos = self.role(c.id) == Some(ListRole::Sos);
                    return Some((c.id, in_sos));
                }
            }
        }
        None
    }

    fn find_unit_conflict(&self, unit: &Arc<Clause>) -> Option<Clause> {
        let l = &unit.literals()[0];
        self.units
            .unifiable(!l.positive, &l.atom)
            .into_iter()
            .filter(|e| e.clause.id != unit.id)
            .find_map(|e| unit_conflict(unit, &e.clause))
    }

    fn retain_refutation(&mut self, empty: Clause) -> ClauseId {
        let id = self.store_clause(empty, None, false).id;
        self.refutation = Some(id);
        id
    }

    /// Retention pipeline for one generated clause: hook, canonical form and
    /// tautology test, weight limit, forward subsumption, unit conflict,
    /// append to sos.
    pub fn process_new_clause(&mut self, r: Resolvent) -> Disposition {
        let literals = match self.hook.as_mut() {
            Some(h) => match h.rewrite(r.literals) {
                HookVerdict::Keep(l) => l,
                HookVerdict::Discard(why) => {
                    self.stats.discarded_by_hook += 1;
                    return Disposition::Discarded(DiscardReason::Hook(why));
                }
            },
            None => r.literals,
        };
        let Some(clause) = make_clause(literals, r.origin) else {
            self.stats.discarded_tautology += 1;
            return Disposition::Discarded(DiscardReason::Tautology);
        };
        if clause.is_empty() {
            self.stats.clauses_kept += 1;
            return Disposition::Refutation(self.retain_refutation(clause));
        }
        if let Some(max) = self.config.limits.max_weight {
            if clause.weight() > max {
                self.stats.discarded_weight += 1;
                return Disposition::Discarded(DiscardReason::Weight);
            }
        }
        if let Some((by, in_sos)) = self.find_subsumer(&clause) {
            self.stats.clauses_forward_subsumed += 1;
            if in_sos {
                self.stats.subsumed_by_sos += 1;
            }
            return Disposition::Discarded(DiscardReason::ForwardSubsumed { by, in_sos });
        }
        self.stats.clauses_kept += 1;
        if self.config.back_subsumption {
            self.back_subsume(&clause);
        }
        let c = self.store_clause(clause, Some(ListRole::Sos), false);
        self.sos.push(c.id, c.weight());
        self.stats.sos_size_peak = self.stats.sos_size_peak.max(self.sos.len() as u64);
        if c.is_unit() {
            if let Some(empty) = self.find_unit_conflict(&c) {
                return Disposition::Refutation(self.retain_refutation(empty));
            }
        }
        if !self.config.no_factoring && c.len() > 1 {
            for f in factors(&c) {
                self.stats.clauses_generated += 1;
                let d = self.process_new_clause(Resolvent {
                    literals: f.literals().to_vec(),
                    origin: f.origin.clone(),
                });
                if let Disposition::Refutation(_) = d {
                    return d;
                }
            }
        }
        Disposition::Retained(c.id)
    }

    fn back_subsume(&mut self, c: &Clause) {
        let victims: Vec<(ClauseId, ListRole)> = self
            .retained_ids()
            .into_iter()
            .filter(|(_, role)| *role != ListRole::Passive)
            .filter(|(id, _)| subsumes(c, self.clause(*id).unwrap()))
            .collect();
        for (id, role) in victims {
            let clause = Arc::clone(self.clause(id).unwrap());
            match role {
                ListRole::Sos => {
                    self.sos.remove(id, clause.weight());
                }
                ListRole::Usable => {
                    self.usable.remove(id);
                }
                ListRole::Passive => unreachable!(),
            }
            self.subsumers.remove_clause(id);
            if clause.is_unit() {
                self.units.remove_clause(id);
            }
            if let Some(s) = self.store[id.0 as usize].as_mut() {
                s.role = None;
            }
            self.stats.back_subsumed += 1;
        }
    }

    fn limit_reached(&self) -> Option<LimitKind> {
        let lim = &self.config.limits;
        if lim.max_given.is_some_and(|m| self.stats.given_count >= m) {
            return Some(LimitKind::MaxGiven);
        }
        if let (Some(m), Some((t0, _))) = (lim.max_seconds, self.started) {
            if t0.elapsed().as_secs_f64() >= m {
                return Some(LimitKind::MaxSeconds);
            }
        }
        if lim
            .max_retained
            .is_some_and(|m| self.stats.clauses_kept >= m)
        {
            return Some(LimitKind::MaxRetained);
        }
        None
    }

    fn finish(&mut self, outcome: Outcome) -> Outcome {
        self.stats.sos_size_final = self.sos.len() as u64;
        if let Some((t0, cpu0)) = self.started {
            self.stats.wall_seconds = t0.elapsed().as_secs_f64();
            if let (Some(c0), Some(c1)) = (cpu0, thread_cpu_seconds()) {
                self.stats.cpu_seconds = c1 - c0;
            }
        }
        outcome
    }

    /// One given-clause iteration. Returns `Some` when the run is over.
    pub fn step(&mut self) -> Option<Outcome> {
        if self.started.is_none() {
            self.started = Some((Instant::now(), thread_cpu_seconds()));
        }
        if let Some(id) = self.refutation {
            return Some(self.finish(Outcome::Refutation(id)));
        }
        if self.sos.is_empty() {
            return Some(self.finish(Outcome::SosExhausted));
        }
        if let Some(k) = self.limit_reached() {
            return Some(self.finish(Outcome::LimitHit(k)));
        }
        let id = self
            .sos
            .select_given(self.config.pick_given)
            .expect("sos is not empty");
        let given = Arc::clone(self.clause(id).unwrap());
        self.stats.given_count += 1;
        let point = TracePoint {
            iteration: self.stats.given_count,
            sos_size: self.sos.len() as u64,
            given_id: id,
            given_weight: given.weight(),
        };
        self.trace.push(point);
        if let Some(sink) = self.trace_sink.as_mut() {
            sink.record(&point);
        }
        if let Some(s) = self.store[id.0 as usize].as_mut() {
            s.role = Some(ListRole::Usable);
        }
        self.usable.insert(Arc::clone(&given));

        // input units were never checked against the other inputs
        if given.is_unit() && given.origin.rule == Rule::Input {
            if let Some(empty) = self.find_unit_conflict(&given) {
                let rid = self.retain_refutation(empty);
                return Some(self.finish(Outcome::Refutation(rid)));
            }
        }

        let conclusions = infer(&self.config.rule, &given, &self.usable);
        for r in conclusions {
            self.stats.clauses_generated += 1;
            if let Disposition::Refutation(rid) = self.process_new_clause(r) {
                return Some(self.finish(Outcome::Refutation(rid)));
            }
        }
        None
    }

    /// Runs the loop until refutation, an empty sos or a limit.
    pub fn run(&mut self) -> Outcome {
        loop {
            if let Some(o) = self.step() {
                return o;
            }
        }
    }

    /// Derivation of the empty clause `empty`, parents before children.
    pub fn extract_proof(&self, empty: ClauseId) -> Option<ProofDag> {
        let root = self.clause(empty)?;
        if !root.is_empty() {
            return None;
        }
        let mut seen: BTreeSet<ClauseId> = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            let c = self.clause(id)?;
            stack.extend(c.origin.parents.iter().copied());
        }
        let nodes = seen
            .into_iter()
            .map(|id| {
                let s = self.store[id.0 as usize].as_ref().unwrap();
                let input_role = if s.clause.origin.rule == Rule::Input {
                    if s.initial_sos {
                        Some(ListRole::Sos)
                    } else {
                        self.passive
                            .contains(&id)
                            .then_some(ListRole::Passive)
                            .or(Some(ListRole::Usable))
                    }
                } else {
                    None
                };
                ProofNode {
                    clause: Arc::clone(&s.clause),
                    input_role,
                }
            })
            .collect();
        Some(ProofDag { nodes })
    }

    pub fn is_initial_sos(&self, id: ClauseId) -> bool {
        self.store
            .get(id.0 as usize)
            .and_then(|s| s.as_ref())
            .is_some_and(|s| s.initial_sos)
    }
}

/// Result of a complete [`saturate`] call.
pub struct Saturation {
    pub outcome: Outcome,
    pub prover: Prover,
}

impl Saturation {
    pub fn stats(&self) -> &Stats {
        self.prover.stats()
    }

    pub fn trace(&self) -> &[TracePoint] {
        self.prover.trace()
    }

    pub fn proof(&self) -> Option<ProofDag> {
        match self.outcome {
            Outcome::Refutation(id) => self.prover.extract_proof(id),
            _ => None,
        }
    }
}

/// Convenience wrapper: load the lists and run to completion.
pub fn saturate(
    usable: Vec<Clause>,
    sos: Vec<Clause>,
    rule: RuleConfig,
    limits: Limits,
) -> Saturation {
    let mut prover = Prover::new(ProverConfig {
        rule,
        limits,
        ..ProverConfig::default()
    });
    prover.add_usable(usable);
    prover.add_sos(sos);
    let outcome = prover.run();
    Saturation { outcome, prover }
}

/// CPU time consumed by the calling thread, where the platform reports it.
pub fn thread_cpu_seconds() -> Option<f64> {
    #[cfg(unix)]
    {
        let mut ts = libc::timespec {
            tv_sec: 0,
            tv_nsec: 0,
        };
        // SAFETY: `ts` is a valid, writable timespec.
        let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
        if rc == 0 {
            return Some(ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9);
        }
        None
    }
    #[cfg(not(unix))]
    {
        None
    }
}
