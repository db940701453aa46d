//! Exact concentration factors on the dyadic grid.
//!
//! Under the 1:1 mix-split model every droplet's concentration factor is a
//! dyadic rational `k / 2^d` with `0 <= k <= 2^d`. Values are always kept in
//! canonical form (odd numerator, or `0/1` and `1/1`), so equality and
//! hashing are value-based.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest precision accepted from user input.
pub const MAX_PRECISION: u32 = 30;

/// Hard representation limit; reachable only through long chains of mixes.
const REPR_LIMIT: u32 = 63;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CfError {
    #[error("denominator {0} is not a power of two")]
    NotDyadic(u64),
    #[error("numerator {num} exceeds denominator {den}: a concentration factor lies in [0, 1]")]
    AboveOne { num: u64, den: u64 },
    #[error("precision {0} exceeds the supported maximum of {MAX_PRECISION}")]
    PrecisionTooHigh(u32),
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("cannot parse `{0}` as a concentration factor")]
    Syntax(String),
}

/// A droplet concentration factor `k / 2^d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConcFactor {
    num: u64,
    prec: u32,
}

impl ConcFactor {
    pub const ZERO: ConcFactor = ConcFactor { num: 0, prec: 0 };
    pub const ONE: ConcFactor = ConcFactor { num: 1, prec: 0 };

    /// Builds `num / 2^prec`, reducing to canonical form.
    pub fn from_parts(num: u64, prec: u32) -> Result<Self, CfError> {
        if prec > MAX_PRECISION {
            return Err(CfError::PrecisionTooHigh(prec));
        }
        let den = 1u64 << prec;
        if num > den {
            return Err(CfError::AboveOne { num, den });
        }
        Ok(Self::canonical(num, prec))
    }

    /// Builds `num / den` where `den` must be a power of two.
    pub fn new(num: u64, den: u64) -> Result<Self, CfError> {
        if den == 0 || !den.is_power_of_two() {
            return Err(CfError::NotDyadic(den));
        }
        Self::from_parts(num, den.trailing_zeros())
    }

    fn canonical(mut num: u64, mut prec: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(prec);
        num >>= tz;
        prec -= tz;
        ConcFactor { num, prec }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    /// Canonical precision `d`: the value is `numerator / 2^d`.
    pub fn precision(self) -> u32 {
        self.prec
    }

    pub fn denominator(self) -> u64 {
        1u64 << self.prec
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.denominator() as f64
    }

    /// Numerator of this value over `2^prec`, if it is representable there.
    pub fn numerator_at(self, prec: u32) -> Option<u64> {
        if prec < self.prec || prec > REPR_LIMIT {
            return None;
        }
        Some(self.num << (prec - self.prec))
    }

    /// One 1:1 mix-split: the exact average of two concentration factors.
    ///
    /// Panics only if the result would need more than 63 bits of precision.
    pub fn mix(self, other: ConcFactor) -> ConcFactor {
        let p = self.prec.max(other.prec);
        assert!(p < REPR_LIMIT, "concentration precision overflow");
        let sum = (self.num << (p - self.prec)) + (other.num << (p - other.prec));
        Self::canonical(sum, p + 1)
    }

    /// `self / 2`, i.e. a mix with buffer.
    pub fn halve(self) -> ConcFactor {
        self.mix(Self::ZERO)
    }

    /// The partner `2t - anchor` that mixed with `anchor` yields `target`,
    /// or `None` when that partner would fall outside `[0, 1]`.
    pub fn complement(target: ConcFactor, anchor: ConcFactor) -> Option<ConcFactor> {
        let p = (target.prec.saturating_sub(1)).max(anchor.prec);
        // 2t over 2^p: t = n/2^q, 2t = n/2^(q-1) (or 2n when q = 0)
        let twice_t: u128 = if target.prec == 0 {
            (2 * target.num as u128) << p
        } else {
            (target.num as u128) << (p - (target.prec - 1))
        };
        let h = (anchor.num as u128) << (p - anchor.prec);
        if h > twice_t {
            return None;
        }
        let c = twice_t - h;
        if c > 1u128 << p {
            return None;
        }
        Some(Self::canonical(c as u64, p))
    }

    /// Nearest grid point `round(x * 2^d) / 2^d`, ties rounded up.
    pub fn quantize(x: f64, prec: u32) -> Result<ConcFactor, CfError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(CfError::OutOfRange(x));
        }
        if prec > MAX_PRECISION {
            return Err(CfError::PrecisionTooHigh(prec));
        }
        let scale = (1u64 << prec) as f64;
        let k = (x * scale + 0.5).floor() as u64;
        Self::from_parts(k.min(1u64 << prec), prec)
    }

    /// Parses `k/m` (m a power of two), an integer `0`/`1`, or a decimal
    /// which is quantized at `decimal_precision`.
    pub fn parse_with_precision(s: &str, decimal_precision: u32) -> Result<ConcFactor, CfError> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| CfError::Syntax(s.to_string()))?;
            let den: u64 = d.trim().parse().map_err(|_| CfError::Syntax(s.to_string()))?;
            return Self::new(num, den);
        }
        if let Ok(k) = s.parse::<u64>() {
            return Self::new(k, 1);
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Self::quantize(x, decimal_precision),
            _ => Err(CfError::Syntax(s.to_string())),
        }
    }

    /// Renders as `k/2^d` over the given precision when it fits, else canonically.
    pub fn display_over(self, prec: u32) -> String {
        match self.numerator_at(prec) {
            Some(k) if prec > 0 => format!("{}/{}", k, 1u64 << prec),
            _ => self.to_string(),
        }
    }
}

impl Ord for ConcFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        let p = self.prec.max(other.prec);
        let a = (self.num as u128) << (p - self.prec);
        let b = (other.num as u128) << (p - other.prec);
        a.cmp(&b)
    }
}

impl PartialOrd for ConcFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ConcFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

impl fmt::Debug for ConcFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ConcFactor {
    type Err = CfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with_precision(s, MAX_PRECISION)
    }
}

impl Serialize for ConcFactor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConcFactor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact running sum of concentration factors (may exceed 1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DyadicSum {
    // value = num / 2^REPR_LIMIT
    num: u128,
}

impl DyadicSum {
    pub fn add(&mut self, cf: ConcFactor) {
        self.num += (cf.num as u128) << (REPR_LIMIT - cf.prec);
    }

    pub fn of_integer(n: u64) -> Self {
        DyadicSum { num: (n as u128) << REPR_LIMIT }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (1u128 << REPR_LIMIT) as f64
    }
}

impl fmt::Display for DyadicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            return write!(f, "0");
        }
        let tz = self.num.trailing_zeros().min(REPR_LIMIT);
        let num = self.num >> tz;
        let prec = REPR_LIMIT - tz;
        if prec == 0 {
            write!(f, "{num}")
        } else {
            write!(f, "{}/{}", num, 1u128 << prec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(k: u64, den: u64) -> ConcFactor {
        ConcFactor::new(k, den).unwrap()
    }

    #[test]
    fn mix_examples() {
        assert_eq!(ConcFactor::ONE.mix(ConcFactor::ZERO), cf(1, 2));
        assert_eq!(cf(8, 16).mix(cf(4, 16)), cf(6, 16));
        assert_eq!(cf(16, 16).mix(cf(6, 16)), cf(11, 16));
        assert_eq!(cf(2, 16).mix(cf(8, 16)), cf(5, 16));
    }

    #[test]
    fn canonical_form() {
        let x = cf(8, 16);
        assert_eq!((x.numerator(), x.precision()), (1, 1));
        assert_eq!(cf(16, 16), ConcFactor::ONE);
        assert_eq!(cf(0, 64), ConcFactor::ZERO);
        assert_eq!(cf(0, 64).precision(), 0);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(ConcFactor::complement(cf(5, 16), cf(8, 16)), Some(cf(2, 16)));
        let t = cf(11, 32);
        assert_eq!(ConcFactor::complement(t, t), Some(t));
        assert_eq!(ConcFactor::complement(cf(2, 16), cf(8, 16)), None);
        assert_eq!(ConcFactor::complement(cf(3, 4), ConcFactor::ONE), Some(cf(1, 2)));
        assert_eq!(ConcFactor::complement(ConcFactor::ONE, ConcFactor::ONE), Some(ConcFactor::ONE));
        // partner would need to exceed 1
        assert_eq!(ConcFactor::complement(cf(7, 8), cf(1, 4)), None);
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(ConcFactor::quantize(0.5, 4).unwrap(), cf(8, 16));
        assert_eq!(ConcFactor::quantize(1.0, 6).unwrap(), ConcFactor::ONE);
        assert!(matches!(ConcFactor::quantize(1.5, 4), Err(CfError::OutOfRange(_))));
        assert!(ConcFactor::quantize(-0.1, 4).is_err());
        // tie rounds up: 1/32 is halfway between 0 and 1/16
        assert_eq!(ConcFactor::quantize(1.0 / 32.0, 4).unwrap(), cf(1, 16));
    }

    #[test]
    fn quantize_matches_enumeration() {
        // brute force: the k/16 closest to 0.3
        let best = (0..=16u64)
            .min_by(|a, b| {
                let da = (0.3 - *a as f64 / 16.0).abs();
                let db = (0.3 - *b as f64 / 16.0).abs();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        assert_eq!(best, 5);
        assert_eq!(ConcFactor::quantize(0.3, 4).unwrap(), cf(best, 16));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("5/16".parse::<ConcFactor>().unwrap(), cf(5, 16));
        assert_eq!("16/16".parse::<ConcFactor>().unwrap(), ConcFactor::ONE);
        assert_eq!("0".parse::<ConcFactor>().unwrap(), ConcFactor::ZERO);
        assert_eq!(ConcFactor::parse_with_precision("0.3", 4).unwrap(), cf(5, 16));
        assert!(matches!("3/12".parse::<ConcFactor>(), Err(CfError::NotDyadic(12))));
        assert!(matches!("17/16".parse::<ConcFactor>(), Err(CfError::AboveOne { .. })));
        assert!(matches!(
            ConcFactor::from_parts(1, 31),
            Err(CfError::PrecisionTooHigh(31))
        ));
        assert!("abc".parse::<ConcFactor>().is_err());
        assert_eq!(cf(5, 16).to_string(), "5/16");
        assert_eq!(cf(14, 16).to_string(), "7/8");
        assert_eq!(cf(14, 16).display_over(4), "14/16");
        assert_eq!(ConcFactor::ONE.display_over(4), "16/16");
        assert_eq!(ConcFactor::ONE.display_over(0), "1");
    }

    #[test]
    fn ordering_is_by_value() {
        let mut v = vec![cf(3, 4), cf(1, 16), ConcFactor::ONE, ConcFactor::ZERO, cf(1, 2)];
        v.sort();
        assert_eq!(v, vec![ConcFactor::ZERO, cf(1, 16), cf(1, 2), cf(3, 4), ConcFactor::ONE]);
    }

    #[test]
    fn dyadic_sum_is_exact() {
        let mut s = DyadicSum::default();
        for k in [5u64, 11, 14, 16, 14, 11, 5, 2, 2] {
            s.add(cf(k, 16));
        }
        assert_eq!(s, DyadicSum::of_integer(5));
        assert_eq!(s.to_string(), "5");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn grid() -> impl Strategy<Value = (u64, u64, u32)> {
            (0u32..=20).prop_flat_map(|d| (0..=(1u64 << d), 0..=(1u64 << d), Just(d)))
        }

        proptest! {
            #[test]
            fn mix_is_exact_average((k1, k2, d) in grid()) {
                let a = ConcFactor::from_parts(k1, d).unwrap();
                let b = ConcFactor::from_parts(k2, d).unwrap();
                let m = a.mix(b);
                // (k1 + k2) / 2^(d+1), cross-multiplied in u128
                let lhs = m.numerator() as u128 * (1u128 << (d + 1));
                let rhs = (k1 + k2) as u128 * m.denominator() as u128;
                prop_assert_eq!(lhs, rhs);
                prop_assert!(m >= a.min(b) && m <= a.max(b));
                prop_assert!(m.numerator() % 2 == 1 || m.precision() == 0);
            }

            #[test]
            fn complement_round_trips((k1, k2, d) in grid()) {
                let t = ConcFactor::from_parts(k1, d).unwrap();
                let h = ConcFactor::from_parts(k2, d).unwrap();
                match ConcFactor::complement(t, h) {
                    Some(c) => prop_assert_eq!(h.mix(c), t),
                    None => {
                        let twice = 2 * k1 as i128;
                        let diff = twice - k2 as i128;
                        prop_assert!(diff < 0 || diff > (1i128 << d));
                    }
                }
            }

            #[test]
            fn quantize_error_bound(x in 0.0f64..=1.0, d in 0u32..=30) {
                let q = ConcFactor::quantize(x, d).unwrap();
                prop_assert!((x - q.to_f64()).abs() <= 1.0 / (1u64 << (d + 1)) as f64 + 1e-15);
            }

            #[test]
            fn display_parse_round_trip((k, _k2, d) in grid()) {
                let a = ConcFactor::from_parts(k, d).unwrap();
                prop_assert_eq!(a.to_string().parse::<ConcFactor>().unwrap(), a);
            }
        }

        #[test]
        fn denominator_growth_bound() {
            // every CF reachable from {0, 1} in m mixes has precision <= m
            let mut layer: Vec<ConcFactor> = vec![ConcFactor::ZERO, ConcFactor::ONE];
            for m in 1..=5u32 {
                let mut next = layer.clone();
                for &a in &layer {
                    for &b in &layer {
                        next.push(a.mix(b));
                    }
                }
                next.sort();
                next.dedup();
                assert!(next.iter().all(|c| c.precision() <= m));
                layer = next;
            }
        }
    }
}
