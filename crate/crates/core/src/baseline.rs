//! Reference planners: bit-serial single-target dilution and the naive
//! per-occurrence concatenation built from it.

use crate::cf::ConcFactor;
use crate::model::{DirectDispense, Disposition, DropletSource, Plan, PlanStep, TargetSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Sample,
    Buffer,
}

impl Partner {
    fn cf(self) -> ConcFactor {
        match self {
            Partner::Sample => ConcFactor::ONE,
            Partner::Buffer => ConcFactor::ZERO,
        }
    }

    fn source(self) -> DropletSource {
        match self {
            Partner::Sample => DropletSource::SampleDispenser,
            Partner::Buffer => DropletSource::BufferDispenser,
        }
    }
}

/// Mix partners `s_0..s_d` for a target `k / 2^d`: `s_0` is the low bit of
/// `k`, `s_1` is buffer and `s_j` is bit `j - 1` of `k` for `j >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSchedule {
    pub target: ConcFactor,
    pub partners: Vec<Partner>,
}

impl BitSchedule {
    /// `None` for the pure endpoints 0 and 1, which need no mixing.
    pub fn new(target: ConcFactor) -> Option<Self> {
        let (k, d) = (target.numerator(), target.precision());
        if d == 0 {
            return None;
        }
        let bit = |j: u32| if (k >> j) & 1 == 1 { Partner::Sample } else { Partner::Buffer };
        let mut partners = vec![bit(0), Partner::Buffer];
        partners.extend((2..=d).map(|j| bit(j - 1)));
        Some(BitSchedule { target, partners })
    }

    /// Concentrations after each mix: `c_1 = (s_0 + s_1)/2`, `c_j = (c_{j-1} + s_j)/2`.
    pub fn intermediates(&self) -> Vec<ConcFactor> {
        let mut out = Vec::with_capacity(self.partners.len() - 1);
        let mut c = self.partners[0].cf();
        for p in &self.partners[1..] {
            c = c.mix(p.cf());
            out.push(c);
        }
        out
    }
}

fn direct(targets: TargetSeries, t: ConcFactor) -> Plan {
    let source = if t.is_one() { DropletSource::SampleDispenser } else { DropletSource::BufferDispenser };
    Plan { targets, steps: vec![], direct_dispenses: vec![DirectDispense { target: 0, source }] }
}

/// Bit-serial preparation of one target: `d` mixes, every spare output wasted.
pub fn two_way_mix_single(t: ConcFactor) -> Plan {
    let targets = TargetSeries::new(vec![t]);
    let Some(schedule) = BitSchedule::new(t) else {
        return direct(targets, t);
    };
    let cfs = schedule.intermediates();
    let last = cfs.len() - 1;
    let mut steps = Vec::with_capacity(cfs.len());
    for (j, &out_cf) in cfs.iter().enumerate() {
        let carried = if j == 0 {
            schedule.partners[0].source()
        } else {
            DropletSource::StepOutput { step: j - 1, output: 0 }
        };
        let keep = if j == last { Disposition::Target(0) } else { Disposition::Store };
        steps.push(PlanStep {
            id: j,
            inputs: [carried, schedule.partners[j + 1].source()],
            out_cf,
            outputs: [keep, Disposition::Waste],
        });
    }
    Plan { targets, steps, direct_dispenses: vec![] }
}

/// Every occurrence prepared independently with no storage reuse.
pub fn naive_multi(targets: &TargetSeries) -> Plan {
    let mut plan = Plan::empty(TargetSeries::default());
    for &t in targets.iter() {
        plan.append(two_way_mix_single(t));
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::{check_conservation, execute};
    use crate::fixtures;

    fn cf(k: u64, den: u64) -> ConcFactor {
        ConcFactor::new(k, den).unwrap()
    }

    #[test]
    fn five_sixteenths_schedule() {
        use Partner::{Buffer as B, Sample as S};
        let s = BitSchedule::new(cf(5, 16)).unwrap();
        assert_eq!(s.partners, vec![S, B, B, S, B]);
        assert_eq!(s.intermediates(), vec![cf(1, 2), cf(1, 4), cf(5, 8), cf(5, 16)]);
        let trace = execute(&two_way_mix_single(cf(5, 16)));
        assert!(trace.is_valid());
        let st = trace.stats;
        assert_eq!((st.n_steps, st.n_sample, st.n_buffer, st.n_waste), (4, 2, 3, 4));
        check_conservation(&trace).unwrap();
    }

    #[test]
    fn half_and_three_quarters() {
        let st = execute(&two_way_mix_single(cf(1, 2))).stats;
        assert_eq!((st.n_steps, st.n_sample, st.n_buffer, st.n_waste), (1, 1, 1, 1));

        let s = BitSchedule::new(cf(3, 4)).unwrap();
        assert_eq!(s.partners, vec![Partner::Sample, Partner::Buffer, Partner::Sample]);
        assert_eq!(s.intermediates(), vec![cf(1, 2), cf(3, 4)]);
        let st = execute(&two_way_mix_single(cf(3, 4))).stats;
        assert_eq!((st.n_steps, st.n_sample, st.n_buffer, st.n_waste), (2, 2, 1, 2));
    }

    #[test]
    fn endpoints_are_direct() {
        for t in [ConcFactor::ZERO, ConcFactor::ONE] {
            let p = two_way_mix_single(t);
            assert!(p.steps.is_empty());
            let trace = execute(&p);
            assert!(trace.is_valid());
            check_conservation(&trace).unwrap();
        }
    }

    #[test]
    fn naive_examples() {
        let st = execute(&naive_multi(&TargetSeries::new(vec![cf(1, 2), cf(1, 2)]))).stats;
        assert_eq!((st.n_steps, st.n_sample, st.n_buffer, st.n_waste), (2, 2, 2, 2));

        // closed form: 1 + 2*popcount(5) + 2*popcount(11) + 2*popcount(14 / 2 -> 7)
        let closed: u32 = 1 + [5u64, 11, 7].iter().map(|k| 2 * k.count_ones()).sum::<u32>();
        assert_eq!(closed, 17);
        let trace = execute(&naive_multi(&fixtures::ts1()));
        assert!(trace.is_valid());
        assert_eq!(trace.stats.n_sample, closed as usize);

        let empty = naive_multi(&TargetSeries::default());
        assert!(empty.steps.is_empty() && empty.targets.is_empty());
    }

    #[test]
    fn closed_forms_up_to_precision_eight() {
        for d in 1..=8u32 {
            for k in (1..(1u64 << d)).step_by(2) {
                let trace = execute(&two_way_mix_single(ConcFactor::from_parts(k, d).unwrap()));
                assert!(trace.is_valid());
                let st = trace.stats;
                let pc = k.count_ones() as usize;
                assert_eq!(st.n_steps, d as usize);
                assert_eq!(st.n_sample, pc);
                assert_eq!(st.n_buffer, d as usize + 1 - pc);
                assert_eq!(st.n_waste, d as usize);
            }
        }
    }
}
