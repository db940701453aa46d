//! Exact minimum-cost planning for small instances.
//!
//! States are canonical multisets: the droplets currently held and the target
//! values still owed. Actions mix any two distinct held or dispensed
//! concentrations; outputs go straight to a matching unmet target when there
//! is one (swapping which droplet serves the target never changes cost) and
//! are held otherwise. A droplet may be discarded only when the droplet cap
//! would otherwise be exceeded.
//!
//! Search is best-first on the lexicographic objective with admissible lower
//! bounds and a transposition table, so the first goal popped is optimal
//! within the caps.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap, VecDeque};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::cf::ConcFactor;
use crate::exec::execute;
use crate::model::{DirectDispense, Disposition, DropletSource, Plan, PlanStats, PlanStep, TargetSeries};

/// Lexicographic cost under the active objective.
type Key = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Fewest sample droplets, then fewest steps.
    #[default]
    Samples,
    /// Fewest steps, then fewest sample droplets.
    Steps,
}

impl Objective {
    pub fn key(self, stats: &PlanStats) -> (usize, usize) {
        match self {
            Objective::Samples => (stats.n_sample, stats.n_steps),
            Objective::Steps => (stats.n_steps, stats.n_sample),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_steps: usize,
    pub max_droplets: usize,
    pub max_precision: u32,
    pub budget: Duration,
    /// Memory guard: stop with `Unknown` after generating this many nodes.
    pub max_nodes: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_steps: 12,
            max_droplets: 6,
            max_precision: 5,
            budget: Duration::from_secs(30),
            max_nodes: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Found(Plan),
    /// No plan exists within the caps.
    Infeasible,
    /// The time budget or node limit ran out first.
    Unknown,
}

impl OracleOutcome {
    pub fn plan(&self) -> Option<&Plan> {
        match self {
            OracleOutcome::Found(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Input {
    Buffer,
    Held(ConcFactor),
    Sample,
}

impl Input {
    fn cf(self) -> ConcFactor {
        match self {
            Input::Buffer => ConcFactor::ZERO,
            Input::Sample => ConcFactor::ONE,
            Input::Held(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Action {
    Mix(Input, Input),
    Discard(ConcFactor),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    held: Vec<ConcFactor>,
    owed: Vec<ConcFactor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Cost {
    samples: usize,
    steps: usize,
}

struct Node {
    state: State,
    cost: Cost,
    parent: Option<usize>,
    action: Option<Action>,
}

/// Search configuration beyond the caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub caps: SearchCaps,
    pub objective: Objective,
    /// Use the admissible lower bounds to order and prune the search.
    pub lower_bounds: bool,
}

impl SearchOptions {
    pub fn new(caps: SearchCaps, objective: Objective) -> Self {
        SearchOptions { caps, objective, lower_bounds: true }
    }
}

/// Result plus search statistics.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: OracleOutcome,
    pub expanded: usize,
    pub elapsed: Duration,
}

pub fn min_cost_plan(targets: &TargetSeries, caps: SearchCaps, objective: Objective) -> OracleOutcome {
    search(targets, SearchOptions::new(caps, objective)).outcome
}

struct Searcher {
    opts: SearchOptions,
    scale: u32,
}

impl Searcher {
    fn key(&self, c: Cost) -> (usize, usize) {
        match self.opts.objective {
            Objective::Samples => (c.samples, c.steps),
            Objective::Steps => (c.steps, c.samples),
        }
    }

    fn mass(&self, v: &[ConcFactor]) -> u64 {
        v.iter().map(|c| c.numerator_at(self.scale).expect("within precision cap")).sum()
    }

    /// Lower bound on the remaining (samples, steps).
    fn lower_bound(&self, s: &State) -> Cost {
        if !self.opts.lower_bounds || s.owed.is_empty() {
            return Cost::default();
        }
        let owed = self.mass(&s.owed);
        let held = self.mass(&s.held);
        let unit = 1u64 << self.scale;
        let samples = owed.saturating_sub(held).div_ceil(unit) as usize;

        let mut distinct = s.owed.clone();
        distinct.dedup();
        let have = s.held.iter().map(|c| c.precision()).max().unwrap_or(0);
        let gap = s.owed.iter().map(|c| c.precision().saturating_sub(have)).max().unwrap_or(0) as usize;
        Cost { samples, steps: distinct.len().max(gap).max(1) }
    }

    fn successors(&self, s: &State) -> Vec<(Action, State, Cost)> {
        let caps = &self.opts.caps;
        let mut inputs: Vec<Input> = vec![Input::Buffer];
        let mut distinct = s.held.clone();
        distinct.dedup();
        inputs.extend(distinct.iter().map(|&c| Input::Held(c)));
        inputs.push(Input::Sample);
        inputs.sort_by_key(|a| a.cf());

        let mut out = Vec::new();
        for (i, &a) in inputs.iter().enumerate() {
            for &b in &inputs[i + 1..] {
                let m = a.cf().mix(b.cf());
                if m.precision() > caps.max_precision {
                    continue;
                }
                let mut held = s.held.clone();
                for x in [a, b] {
                    if let Input::Held(c) = x {
                        let pos = held.binary_search(&c).expect("held input");
                        held.remove(pos);
                    }
                }
                let mut owed = s.owed.clone();
                for _ in 0..2 {
                    match owed.binary_search(&m) {
                        Ok(pos) => {
                            owed.remove(pos);
                        }
                        Err(_) => {
                            let pos = held.binary_search(&m).unwrap_or_else(|p| p);
                            held.insert(pos, m);
                        }
                    }
                }
                if held.len() > caps.max_droplets {
                    continue;
                }
                let delta = Cost {
                    samples: [a, b].iter().filter(|x| matches!(x, Input::Sample)).count(),
                    steps: 1,
                };
                out.push((Action::Mix(a, b), State { held, owed }, delta));
            }
        }
        if s.held.len() + 1 >= caps.max_droplets {
            for &c in &distinct {
                let mut held = s.held.clone();
                let pos = held.binary_search(&c).expect("held value");
                held.remove(pos);
                out.push((Action::Discard(c), State { held, owed: s.owed.clone() }, Cost::default()));
            }
        }
        out
    }
}

/// Best-first search; see the module documentation.
pub fn search(targets: &TargetSeries, opts: SearchOptions) -> SearchResult {
    let start = Instant::now();
    let caps = opts.caps;
    let done = |outcome, expanded| SearchResult { outcome, expanded, elapsed: start.elapsed() };

    if caps.max_steps == 0 && targets.iter().any(|t| !t.is_zero() && !t.is_one())
        || targets.iter().any(|t| t.precision() > caps.max_precision)
    {
        return done(OracleOutcome::Infeasible, 0);
    }

    let searcher = Searcher { opts, scale: caps.max_precision };
    let mut owed: Vec<ConcFactor> =
        targets.iter().copied().filter(|t| !t.is_zero() && !t.is_one()).collect();
    owed.sort();
    let direct_samples = targets.iter().filter(|t| t.is_one()).count();

    let root = State { held: Vec::new(), owed };
    let mut nodes = vec![Node {
        state: root.clone(),
        cost: Cost { samples: direct_samples, steps: 0 },
        parent: None,
        action: None,
    }];
    let mut best: HashMap<State, (usize, usize)> = HashMap::new();
    best.insert(root.clone(), searcher.key(nodes[0].cost));

    // (f, g, insertion order) min-heap
    let mut heap: BinaryHeap<Reverse<(Key, Key, usize)>> = BinaryHeap::new();
    let h0 = searcher.lower_bound(&root);
    let f0 = searcher.key(Cost {
        samples: nodes[0].cost.samples + h0.samples,
        steps: h0.steps,
    });
    heap.push(Reverse((f0, searcher.key(nodes[0].cost), 0)));

    let mut expanded = 0usize;
    while let Some(Reverse((_, g, idx))) = heap.pop() {
        if best.get(&nodes[idx].state).is_some_and(|&b| b < g) {
            continue;
        }
        if nodes[idx].state.owed.is_empty() {
            let plan = rebuild(targets, &nodes, idx);
            return done(OracleOutcome::Found(plan), expanded);
        }
        expanded += 1;
        if nodes.len() > caps.max_nodes || expanded.is_multiple_of(1024) && start.elapsed() > caps.budget {
            return done(OracleOutcome::Unknown, expanded);
        }
        let cost = nodes[idx].cost;
        for (action, next, delta) in searcher.successors(&nodes[idx].state) {
            let c = Cost { samples: cost.samples + delta.samples, steps: cost.steps + delta.steps };
            let lb = searcher.lower_bound(&next);
            if c.steps + lb.steps > caps.max_steps {
                continue;
            }
            let gk = searcher.key(c);
            match best.get(&next) {
                Some(&b) if b <= gk => continue,
                _ => {}
            }
            best.insert(next.clone(), gk);
            let f = searcher.key(Cost { samples: c.samples + lb.samples, steps: c.steps + lb.steps });
            let id = nodes.len();
            nodes.push(Node { state: next, cost: c, parent: Some(idx), action: Some(action) });
            heap.push(Reverse((f, gk, id)));
        }
    }
    done(OracleOutcome::Infeasible, expanded)
}

/// Turns the action path into a concrete plan with droplet provenance.
fn rebuild(targets: &TargetSeries, nodes: &[Node], goal: usize) -> Plan {
    let mut actions = Vec::new();
    let mut cur = goal;
    while let Some(p) = nodes[cur].parent {
        actions.push(nodes[cur].action.expect("non-root node has an action"));
        cur = p;
    }
    actions.reverse();

    let mut owed: BTreeMap<ConcFactor, VecDeque<usize>> = BTreeMap::new();
    let mut direct = Vec::new();
    for (i, &t) in targets.iter().enumerate() {
        if t.is_one() {
            direct.push(DirectDispense { target: i, source: DropletSource::SampleDispenser });
        } else if t.is_zero() {
            direct.push(DirectDispense { target: i, source: DropletSource::BufferDispenser });
        } else {
            owed.entry(t).or_default().push_back(i);
        }
    }
    let mut held: BTreeMap<ConcFactor, VecDeque<DropletSource>> = BTreeMap::new();
    let mut steps: Vec<PlanStep> = Vec::new();
    for action in actions {
        match action {
            Action::Mix(a, b) => {
                let mut take = |x: Input| match x {
                    Input::Buffer => DropletSource::BufferDispenser,
                    Input::Sample => DropletSource::SampleDispenser,
                    Input::Held(c) => held
                        .get_mut(&c)
                        .and_then(|q| q.pop_front())
                        .expect("search only mixes held droplets"),
                };
                let inputs = [take(a), take(b)];
                let id = steps.len();
                let out_cf = a.cf().mix(b.cf());
                let mut outputs = [Disposition::Store; 2];
                for (o, disp) in outputs.iter_mut().enumerate() {
                    if let Some(t) = owed.get_mut(&out_cf).and_then(|q| q.pop_front()) {
                        *disp = Disposition::Target(t);
                    } else {
                        held.entry(out_cf)
                            .or_default()
                            .push_back(DropletSource::StepOutput { step: id, output: o as u8 });
                    }
                }
                steps.push(PlanStep { id, inputs, out_cf, outputs });
            }
            Action::Discard(c) => {
                if let Some(DropletSource::StepOutput { step, output }) =
                    held.get_mut(&c).and_then(|q| q.pop_front())
                {
                    steps[step].outputs[output as usize] = Disposition::Waste;
                }
            }
        }
    }
    Plan { targets: targets.clone(), steps, direct_dispenses: direct }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapRow {
    pub targets: TargetSeries,
    pub planner: PlanStats,
    /// `None` when the oracle was inconclusive or found nothing within caps.
    pub oracle: Option<PlanStats>,
    pub verdict: &'static str,
    pub sample_gap: Option<i64>,
    pub step_gap: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub objective: Objective,
    pub rows: Vec<GapRow>,
}

impl GapReport {
    pub fn solved(&self) -> impl Iterator<Item = &GapRow> {
        self.rows.iter().filter(|r| r.oracle.is_some())
    }

    pub fn total_sample_gap(&self) -> i64 {
        self.solved().filter_map(|r| r.sample_gap).sum()
    }

    pub fn total_step_gap(&self) -> i64 {
        self.solved().filter_map(|r| r.step_gap).sum()
    }

    pub fn optimal_count(&self) -> usize {
        self.solved().filter(|r| r.sample_gap == Some(0) && r.step_gap == Some(0)).count()
    }

    pub fn unknown_count(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == "unknown").count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("planner beat the oracle on {targets:?}: planner {planner}, oracle {oracle}")]
    PlannerBeatOracle { targets: TargetSeries, planner: PlanStats, oracle: PlanStats },
    #[error("planner produced an invalid plan for {0:?}")]
    InvalidPlan(TargetSeries),
}

/// Compares `planner` with the oracle on every instance. An instance where
/// the planner is strictly cheaper than the oracle is an error.
pub fn optimality_gap<F>(
    planner: F,
    instances: &[TargetSeries],
    caps: SearchCaps,
    objective: Objective,
) -> Result<GapReport, GapError>
where
    F: Fn(&TargetSeries) -> Plan,
{
    let mut rows = Vec::with_capacity(instances.len());
    for ts in instances {
        let trace = execute(&planner(ts));
        if !trace.is_valid() {
            return Err(GapError::InvalidPlan(ts.clone()));
        }
        let p = trace.stats;
        let (oracle, verdict) = match min_cost_plan(ts, caps, objective) {
            OracleOutcome::Found(plan) => (Some(execute(&plan).stats), "optimal"),
            OracleOutcome::Infeasible => (None, "infeasible"),
            OracleOutcome::Unknown => (None, "unknown"),
        };
        if let Some(o) = oracle {
            if objective.key(&p).cmp(&objective.key(&o)) == Ordering::Less {
                return Err(GapError::PlannerBeatOracle { targets: ts.clone(), planner: p, oracle: o });
            }
        }
        rows.push(GapRow {
            targets: ts.clone(),
            planner: p,
            oracle,
            verdict,
            sample_gap: oracle.map(|o| p.n_sample as i64 - o.n_sample as i64),
            step_gap: oracle.map(|o| p.n_steps as i64 - o.n_steps as i64),
        });
    }
    Ok(GapReport { objective, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::naive_multi;
    use crate::emdp::{self, EmdpConfig};
    use crate::exec::check_conservation;

    fn cf(k: u64, den: u64) -> ConcFactor {
        ConcFactor::new(k, den).unwrap()
    }

    fn solve(ts: &[ConcFactor], objective: Objective) -> PlanStats {
        let ts = TargetSeries::new(ts.to_vec());
        let plan = match min_cost_plan(&ts, SearchCaps::default(), objective) {
            OracleOutcome::Found(p) => p,
            other => panic!("{other:?}"),
        };
        let trace = execute(&plan);
        assert!(trace.is_valid(), "{:?}", trace.violations);
        check_conservation(&trace).unwrap();
        trace.stats
    }

    #[test]
    fn half_is_one_mix() {
        let s = solve(&[cf(1, 2)], Objective::Samples);
        assert_eq!((s.n_steps, s.n_sample, s.n_buffer), (1, 1, 1));
    }

    #[test]
    fn three_quarters_needs_two_of_each() {
        // brute force: depth-1 plans reach only {0, 1/2, 1}
        let mut reach = vec![ConcFactor::ZERO, ConcFactor::ONE];
        reach.push(ConcFactor::ZERO.mix(ConcFactor::ONE));
        assert!(!reach.contains(&cf(3, 4)));
        for obj in [Objective::Samples, Objective::Steps] {
            let s = solve(&[cf(3, 4)], obj);
            assert_eq!((s.n_steps, s.n_sample), (2, 2));
        }
    }

    #[test]
    fn single_target_steps_equal_precision() {
        for d in 1..=4u32 {
            for k in (1..(1u64 << d)).step_by(2) {
                let s = solve(&[ConcFactor::from_parts(k, d).unwrap()], Objective::Steps);
                assert_eq!(s.n_steps, d as usize);
            }
        }
    }

    #[test]
    fn endpoints_and_empty() {
        let s = solve(&[ConcFactor::ONE, ConcFactor::ZERO], Objective::Samples);
        assert_eq!((s.n_steps, s.n_sample, s.n_buffer), (0, 1, 1));
        let s = solve(&[], Objective::Samples);
        assert_eq!(s, PlanStats::default());
    }

    #[test]
    fn tight_caps_are_infeasible() {
        let ts = TargetSeries::new(vec![cf(3, 4)]);
        let caps = SearchCaps { max_steps: 1, ..SearchCaps::default() };
        assert_eq!(min_cost_plan(&ts, caps, Objective::Samples), OracleOutcome::Infeasible);
        let caps = SearchCaps { max_precision: 1, ..SearchCaps::default() };
        assert_eq!(min_cost_plan(&ts, caps, Objective::Samples), OracleOutcome::Infeasible);
    }

    #[test]
    fn exhausted_budget_is_unknown() {
        // TS3 needs far more than one polling interval of expansions
        let caps = SearchCaps { budget: Duration::ZERO, max_steps: 13, max_precision: 6, ..SearchCaps::default() };
        assert_eq!(min_cost_plan(&crate::fixtures::ts3(), caps, Objective::Samples), OracleOutcome::Unknown);
        let caps = SearchCaps { max_nodes: 10, max_steps: 13, ..SearchCaps::default() };
        assert_eq!(min_cost_plan(&crate::fixtures::ts2(), caps, Objective::Samples), OracleOutcome::Unknown);
    }

    #[test]
    fn pruning_is_admissible_on_small_instances() {
        let values: Vec<ConcFactor> = (0..=8).map(|k| cf(k, 8)).collect();
        let caps = SearchCaps { max_steps: 8, max_droplets: 5, max_precision: 3, ..SearchCaps::default() };
        for (i, &a) in values.iter().enumerate() {
            for &b in &values[i..] {
                let ts = TargetSeries::new(vec![a, b]);
                for obj in [Objective::Samples, Objective::Steps] {
                    let with = search(&ts, SearchOptions { caps, objective: obj, lower_bounds: true });
                    let without = search(&ts, SearchOptions { caps, objective: obj, lower_bounds: false });
                    let cost = |r: &SearchResult| r.outcome.plan().map(|p| obj.key(&execute(p).stats));
                    assert_eq!(cost(&with), cost(&without), "{ts:?} {obj:?}");
                }
            }
        }
    }

    #[test]
    fn discards_make_room_under_a_droplet_cap() {
        // 5/8 and 1/8 together under a tight cap
        let ts = TargetSeries::new(vec![cf(5, 8), cf(1, 8)]);
        let caps = SearchCaps { max_droplets: 2, ..SearchCaps::default() };
        let plan = min_cost_plan(&ts, caps, Objective::Samples);
        let plan = plan.plan().expect("feasible");
        let trace = execute(plan);
        assert!(trace.is_valid());
        check_conservation(&trace).unwrap();
    }

    #[test]
    fn gap_examples() {
        let emdp_planner = |ts: &TargetSeries| emdp::plan(ts, &EmdpConfig::default()).unwrap();
        let caps = SearchCaps::default();
        let r = optimality_gap(emdp_planner, &[TargetSeries::new(vec![cf(1, 2)])], caps, Objective::Samples)
            .unwrap();
        assert_eq!(r.rows[0].sample_gap, Some(0));
        assert_eq!(r.rows[0].step_gap, Some(0));

        let ts = TargetSeries::new(vec![cf(3, 4), cf(1, 4)]);
        let r = optimality_gap(emdp_planner, std::slice::from_ref(&ts), caps, Objective::Samples).unwrap();
        let row = &r.rows[0];
        assert!(row.oracle.unwrap().n_sample <= row.planner.n_sample);

        let r = optimality_gap(naive_multi, &[TargetSeries::new(vec![cf(1, 2), cf(1, 2)])], caps, Objective::Samples)
            .unwrap();
        assert!(r.rows[0].sample_gap.unwrap() >= 1);
    }
}
