//! Enhanced multigradient dilution preparation (EMDP).
//!
//! The planner walks the target series and, for each target not already on
//! hand, builds it from an *anchor* droplet above it and the complementary
//! partner `2t - anchor`:
//!
//! * storage is searched for the immediate higher concentration; fresh
//!   sample acts as an always-available anchor of last resort;
//! * an anchor more than twice the target is first diluted down a halving
//!   ladder (a serial dilution tree rooted at the anchor), each spare half
//!   going to storage;
//! * the partner is buffer, a stored droplet, or created recursively;
//! * every spare output first serves a pending duplicate target, otherwise it
//!   is kept for reuse. Whatever storage still holds at the end is waste.
//!
//! Anchors are limited to values whose ladder lands in `(t, 2t]` at a
//! precision strictly below the target's. The complement then has smaller
//! precision too, so the recursion depth is bounded by the target precision.
//!
//! With [`AnchorSet::Wide`] a stored droplet *below* the target may anchor as
//! well (its partner `2t - h` lies above the target), and an empty storage may
//! first be seeded with a bracketing dilution tree. Neither set dominates the
//! other, so by default both are planned and the cheaper plan kept.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::cf::{ConcFactor, MAX_PRECISION};
use crate::inventory::{Capacity, CapacityError, Inventory, OnFull};
use crate::model::{DirectDispense, Disposition, Droplet, DropletSource, Plan, PlanStep, TargetSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetOrder {
    /// Highest concentration first; intermediates of dense targets become
    /// anchors for the lighter ones.
    #[default]
    Descending,
    /// The order given in the series.
    Series,
}

/// How a serial dilution tree seeded from fresh sample stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SdtStop {
    /// Stop once the working droplet lies in `(t, 2t]`; it becomes the anchor.
    #[default]
    Anchor,
    /// Keep halving until the working droplet is at or below `t`, leaving
    /// storage bracketing `t` (the classic tree).
    Bracket,
}

/// Which anchors droplet creation may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnchorSet {
    /// Stored values above the target, and fresh sample.
    Above,
    /// Also stored values below the target (partner `2t - h` above it) and a
    /// bracketing seed tree when storage has nothing usable.
    Wide,
    /// Plan with both sets and keep the cheaper plan.
    #[default]
    Best,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmdpConfig {
    pub order: TargetOrder,
    pub sdt_stop: SdtStop,
    pub anchors: AnchorSet,
    /// Recursion levels at which every usable anchor is tried on a scratch
    /// copy of the state and the cheapest kept. 0 = always immediate higher.
    pub anchor_lookahead: u32,
    /// Optional storage limit; the oldest droplet is discarded when full.
    pub storage_capacity: Option<usize>,
    pub max_precision: u32,
}

impl Default for EmdpConfig {
    fn default() -> Self {
        EmdpConfig {
            order: TargetOrder::Descending,
            sdt_stop: SdtStop::Anchor,
            anchors: AnchorSet::Best,
            anchor_lookahead: 3,
            storage_capacity: None,
            max_precision: MAX_PRECISION,
        }
    }
}

impl EmdpConfig {
    /// Series order, immediate-higher anchors and bracketing seed trees.
    pub fn classic() -> Self {
        EmdpConfig {
            order: TargetOrder::Series,
            sdt_stop: SdtStop::Bracket,
            anchors: AnchorSet::Above,
            anchor_lookahead: 0,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("target {0} must lie strictly between 0 and 1 here")]
    NotInterior(ConcFactor),
    #[error("target {cf} has precision {precision}, above the configured maximum {max}")]
    PrecisionTooHigh { cf: ConcFactor, precision: u32, max: u32 },
    #[error("droplet creation for {0} recursed deeper than its precision")]
    RecursionLimit(ConcFactor),
    #[error(transparent)]
    Storage(#[from] CapacityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    Stored(ConcFactor),
    /// A fresh sample droplet, halved down to `(t, 2t]` if needed.
    Fresh,
    /// Seed storage with a bracketing serial dilution tree first.
    Seed,
}

/// Working state of one planner run.
#[derive(Debug, Clone)]
pub struct PlannerState {
    inventory: Inventory,
    /// Unmet occurrences per target value, in processing order.
    pending: BTreeMap<ConcFactor, VecDeque<usize>>,
    satisfied: Vec<bool>,
    steps: Vec<PlanStep>,
    direct: Vec<DirectDispense>,
    samples: usize,
    buffers: usize,
    sdt_stop: SdtStop,
    wide: bool,
    lookahead: u32,
}

impl PlannerState {
    pub fn new(config: &EmdpConfig, n_targets: usize) -> Self {
        let inventory = match config.storage_capacity {
            Some(limit) => Inventory::with_capacity_limit(Capacity { limit, on_full: OnFull::EvictOldest }),
            None => Inventory::new(),
        };
        PlannerState {
            inventory,
            pending: BTreeMap::new(),
            satisfied: vec![false; n_targets],
            steps: Vec::new(),
            direct: Vec::new(),
            samples: 0,
            buffers: 0,
            sdt_stop: config.sdt_stop,
            wide: config.anchors == AnchorSet::Wide,
            lookahead: config.anchor_lookahead,
        }
    }

    pub fn inventory(&self) -> &Inventory {
        &self.inventory
    }

    pub fn steps(&self) -> &[PlanStep] {
        &self.steps
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn buffers(&self) -> usize {
        self.buffers
    }

    fn cost(&self) -> (usize, usize, usize) {
        (self.samples, self.steps.len(), self.buffers)
    }

    fn sample(&mut self) -> Droplet {
        self.samples += 1;
        Droplet::sample()
    }

    fn buffer(&mut self) -> Droplet {
        self.buffers += 1;
        Droplet::buffer()
    }

    fn set_disposition(&mut self, source: DropletSource, disp: Disposition) {
        if let DropletSource::StepOutput { step, output } = source {
            self.steps[step].outputs[output as usize] = disp;
        }
    }

    fn mix_split(&mut self, a: Droplet, b: Droplet) -> (Droplet, Droplet) {
        let id = self.steps.len();
        let out_cf = a.cf.mix(b.cf);
        self.steps.push(PlanStep {
            id,
            inputs: [a.source, b.source],
            out_cf,
            outputs: [Disposition::Store, Disposition::Store],
        });
        let out = |output| Droplet { cf: out_cf, source: DropletSource::StepOutput { step: id, output } };
        (out(0), out(1))
    }

    fn store(&mut self, d: Droplet) -> Result<(), PlanError> {
        if let Some(evicted) = self.inventory.store(d)? {
            self.set_disposition(evicted.source, Disposition::Waste);
        }
        Ok(())
    }

    /// A spare output first satisfies a pending occurrence of its value.
    fn place_spare(&mut self, d: Droplet) -> Result<(), PlanError> {
        if let Some(idx) = self.pending.get_mut(&d.cf).and_then(|q| q.pop_front()) {
            self.satisfied[idx] = true;
            self.set_disposition(d.source, Disposition::Target(idx));
            Ok(())
        } else {
            self.store(d)
        }
    }

    /// Serial dilution tree seeded with one fresh sample droplet, using the
    /// bracketing stop rule: halve while `current / 2 > t`, then once more
    /// while `current > t`. One half of every mix is stored. Returns the
    /// droplet when the ladder hits `t` exactly; otherwise the last working
    /// droplet (below `t`) is stored too and `None` is returned.
    pub fn serial_dilution_tree(&mut self, t: ConcFactor) -> Result<Option<Droplet>, PlanError> {
        if t.is_zero() || t.is_one() {
            return Err(PlanError::NotInterior(t));
        }
        let mut current = self.sample();
        while current.cf.halve() > t {
            let buf = self.buffer();
            let (kept, next) = self.mix_split(current, buf);
            self.store(kept)?;
            current = next;
        }
        if current.cf > t {
            let buf = self.buffer();
            let (kept, next) = self.mix_split(current, buf);
            self.store(kept)?;
            current = next;
        }
        if current.cf == t {
            Ok(Some(current))
        } else {
            self.store(current)?;
            Ok(None)
        }
    }

    /// Halvings needed to bring `h` into `(t, 2t]`, if the result stays
    /// below the target's precision.
    fn ladder_len(t: ConcFactor, mut h: ConcFactor) -> Option<u32> {
        let mut j = 0;
        while ConcFactor::complement(t, h).is_none() {
            if h <= t {
                return None;
            }
            h = h.halve();
            j += 1;
        }
        (h.precision() < t.precision()).then_some(j)
    }

    /// Usable anchors for `t` in preference order: stored values above `t`
    /// (immediate higher first), stored values below `t` (closest first),
    /// then fresh sample, then a bracketing seed tree when nothing is stored.
    fn anchor_candidates(&self, t: ConcFactor, allow_seed: bool) -> Vec<Anchor> {
        let usable: Vec<ConcFactor> = self
            .inventory
            .distinct_above(ConcFactor::ZERO)
            .into_iter()
            .filter(|&h| h != t && Self::ladder_len(t, h).is_some())
            .collect();
        let mut c: Vec<Anchor> = usable.iter().filter(|&&h| h > t).map(|&h| Anchor::Stored(h)).collect();
        if self.wide {
            c.extend(usable.iter().rev().filter(|&&h| h < t).map(|&h| Anchor::Stored(h)));
        }
        let stored = c.len();
        let fresh_direct = ConcFactor::complement(t, ConcFactor::ONE).is_some();
        if self.sdt_stop == SdtStop::Anchor || fresh_direct {
            c.push(Anchor::Fresh);
        }
        let seed_ok = self.wide || self.sdt_stop == SdtStop::Bracket;
        if allow_seed && seed_ok && stored == 0 && !fresh_direct {
            c.push(Anchor::Seed);
        }
        if c.is_empty() {
            c.push(Anchor::Fresh);
        }
        c
    }

    /// Returns a fresh droplet of concentration `t`; its twin is placed as a
    /// spare. Precondition: `0 < t < 1`.
    pub fn create_droplet(&mut self, t: ConcFactor) -> Result<Droplet, PlanError> {
        if t.is_zero() || t.is_one() {
            return Err(PlanError::NotInterior(t));
        }
        self.create_at_depth(t, 0, t.precision(), true)
    }

    fn create_at_depth(&mut self, t: ConcFactor, depth: u32, limit: u32, allow_seed: bool) -> Result<Droplet, PlanError> {
        if depth > limit {
            return Err(PlanError::RecursionLimit(t));
        }
        let candidates = self.anchor_candidates(t, allow_seed);
        let anchor = if depth < self.lookahead && candidates.len() > 1 {
            let mut best: Option<((usize, usize, usize), Anchor)> = None;
            for &h in &candidates {
                let mut scratch = self.clone();
                if scratch.create_with_anchor(t, h, depth, limit).is_err() {
                    continue;
                }
                let cost = scratch.cost();
                if best.is_none_or(|(c, _)| cost < c) {
                    best = Some((cost, h));
                }
            }
            best.map_or(candidates[0], |(_, h)| h)
        } else {
            candidates[0]
        };
        self.create_with_anchor(t, anchor, depth, limit)
    }

    fn create_with_anchor(&mut self, t: ConcFactor, anchor: Anchor, depth: u32, limit: u32) -> Result<Droplet, PlanError> {
        let mut h = match anchor {
            Anchor::Stored(cf) => self.inventory.take_exact(cf).expect("anchor candidate is stored"),
            Anchor::Fresh => self.sample(),
            Anchor::Seed => {
                if let Some(d) = self.serial_dilution_tree(t)? {
                    return Ok(d);
                }
                return self.create_at_depth(t, depth, limit, false);
            }
        };
        let partner_cf = loop {
            if let Some(c) = ConcFactor::complement(t, h.cf) {
                break c;
            }
            let buf = self.buffer();
            let (spare, next) = self.mix_split(h, buf);
            self.place_spare(spare)?;
            h = next;
        };
        let partner = if partner_cf.is_zero() {
            self.buffer()
        } else if partner_cf.is_one() {
            self.sample()
        } else if let Some(d) = self.inventory.take_exact(partner_cf) {
            d
        } else {
            self.create_at_depth(partner_cf, depth + 1, limit, true)?
        };
        let (made, twin) = self.mix_split(h, partner);
        debug_assert_eq!(made.cf, t);
        self.place_spare(twin)?;
        Ok(made)
    }

    fn finish(self, targets: TargetSeries) -> Plan {
        Plan { targets, steps: self.steps, direct_dispenses: self.direct }
    }
}

/// Plans the whole series with EMDP.
pub fn plan(targets: &TargetSeries, config: &EmdpConfig) -> Result<Plan, PlanError> {
    if config.anchors != AnchorSet::Best {
        return plan_with(targets, config).map(|s| s.finish(targets.clone()));
    }
    let narrow = plan_with(targets, &EmdpConfig { anchors: AnchorSet::Above, ..config.clone() })?;
    let wide = plan_with(targets, &EmdpConfig { anchors: AnchorSet::Wide, ..config.clone() })?;
    let best = if wide.cost() < narrow.cost() { wide } else { narrow };
    Ok(best.finish(targets.clone()))
}

fn plan_with(targets: &TargetSeries, config: &EmdpConfig) -> Result<PlannerState, PlanError> {
    for &t in targets.iter() {
        if t.precision() > config.max_precision {
            return Err(PlanError::PrecisionTooHigh {
                cf: t,
                precision: t.precision(),
                max: config.max_precision,
            });
        }
    }
    let mut order: Vec<usize> = (0..targets.len()).collect();
    if config.order == TargetOrder::Descending {
        // stable: equal values keep series order
        order.sort_by(|&a, &b| targets[b].cmp(&targets[a]));
    }

    let mut state = PlannerState::new(config, targets.len());
    for &i in &order {
        let t = targets[i];
        if !t.is_zero() && !t.is_one() {
            state.pending.entry(t).or_default().push_back(i);
        }
    }

    for &i in &order {
        let t = targets[i];
        if t.is_one() || t.is_zero() {
            let d = if t.is_one() { state.sample() } else { state.buffer() };
            state.direct.push(DirectDispense { target: i, source: d.source });
            continue;
        }
        if state.satisfied[i] {
            continue;
        }
        let q = state.pending.get_mut(&t).expect("interior targets are pending");
        let front = q.pop_front();
        debug_assert_eq!(front, Some(i));
        state.satisfied[i] = true;
        let d = match state.inventory.take_exact(t) {
            Some(d) => d,
            None => state.create_droplet(t)?,
        };
        state.set_disposition(d.source, Disposition::Target(i));
    }
    Ok(state)
}
