//! On-chip storage of intermediate droplets.
//!
//! Entries are kept in insertion order and every removal by value takes the
//! oldest matching droplet, so replaying the same operations always yields
//! the same provenance sequence.

use std::collections::VecDeque;

use thiserror::Error;

use crate::cf::ConcFactor;
use crate::model::Droplet;

/// What to do when a store would exceed the capacity limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnFull {
    /// Discard the oldest stored droplet to waste.
    EvictOldest,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub limit: usize,
    pub on_full: OnFull,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("storage full: capacity {limit} reached")]
pub struct CapacityError {
    pub limit: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Inventory {
    entries: VecDeque<Droplet>,
    capacity: Option<Capacity>,
    peak: usize,
    stores: usize,
    takes: usize,
}

impl Inventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_limit(capacity: Capacity) -> Self {
        Inventory { capacity: Some(capacity), ..Self::default() }
    }

    pub fn occupancy(&self) -> usize {
        self.entries.len()
    }

    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored droplets, oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Droplet> {
        self.entries.iter()
    }

    pub fn contents(&self) -> Vec<ConcFactor> {
        self.entries.iter().map(|d| d.cf).collect()
    }

    /// Appends a droplet. Under an evicting capacity policy the displaced
    /// oldest droplet is returned so the caller can account it as waste.
    pub fn store(&mut self, droplet: Droplet) -> Result<Option<Droplet>, CapacityError> {
        let mut evicted = None;
        if let Some(cap) = self.capacity {
            if self.entries.len() >= cap.limit {
                match cap.on_full {
                    OnFull::Reject => return Err(CapacityError { limit: cap.limit }),
                    OnFull::EvictOldest => {
                        evicted = self.entries.pop_front();
                        if evicted.is_some() {
                            self.takes += 1;
                        }
                    }
                }
            }
        }
        if self.capacity.is_some_and(|c| c.limit == 0) {
            // a zero-capacity store discards immediately
            return Ok(Some(droplet));
        }
        self.entries.push_back(droplet);
        self.stores += 1;
        self.peak = self.peak.max(self.entries.len());
        Ok(evicted)
    }

    /// Removes the oldest droplet with exactly this concentration.
    pub fn take_exact(&mut self, cf: ConcFactor) -> Option<Droplet> {
        let pos = self.entries.iter().position(|d| d.cf == cf)?;
        self.takes += 1;
        self.entries.remove(pos)
    }

    /// Smallest stored value strictly greater than `t`, without removing it.
    pub fn peek_immediate_higher(&self, t: ConcFactor) -> Option<ConcFactor> {
        self.entries.iter().map(|d| d.cf).filter(|&c| c > t).min()
    }

    /// Removes the oldest droplet holding the smallest value strictly above `t`.
    pub fn take_immediate_higher(&mut self, t: ConcFactor) -> Option<Droplet> {
        let h = self.peek_immediate_higher(t)?;
        self.take_exact(h)
    }

    /// Distinct stored values strictly above `t`, ascending.
    pub fn distinct_above(&self, t: ConcFactor) -> Vec<ConcFactor> {
        let mut v: Vec<ConcFactor> = self.entries.iter().map(|d| d.cf).filter(|&c| c > t).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn contains(&self, cf: ConcFactor) -> bool {
        self.entries.iter().any(|d| d.cf == cf)
    }

    /// Removes and returns everything left, oldest first.
    pub fn drain(&mut self) -> Vec<Droplet> {
        self.takes += self.entries.len();
        self.entries.drain(..).collect()
    }

    pub fn stores(&self) -> usize {
        self.stores
    }

    pub fn successful_takes(&self) -> usize {
        self.takes
    }
}
