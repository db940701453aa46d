//! Published counts for comparison tables. Display only.

use serde::Serialize;

const REPORTED_CSV: &str = include_str!("../../data/reported_counts.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportedCounts {
    pub series: String,
    pub algorithm: String,
    pub waste: usize,
    pub sample: usize,
    pub buffer: usize,
    pub steps: Option<usize>,
}

fn parse(text: &str) -> Vec<ReportedCounts> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let _header = lines.next();
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let num = |i: usize| f[i].parse::<usize>().expect("reference data is well formed");
            ReportedCounts {
                series: f[0].to_string(),
                algorithm: f[1].to_string(),
                waste: num(2),
                sample: num(3),
                buffer: num(4),
                steps: f.get(5).filter(|s| !s.is_empty()).map(|_| num(5)),
            }
        })
        .collect()
}

/// All reference rows, in file order.
pub fn reported_counts() -> Vec<ReportedCounts> {
    parse(REPORTED_CSV)
}

/// Reference rows for one series (`ts1`, `ts2`, `ts3`).
pub fn reported_for(series: &str) -> Vec<ReportedCounts> {
    let series = series.to_ascii_lowercase();
    reported_counts().into_iter().filter(|r| r.series == series).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_shape() {
        let all = reported_counts();
        assert_eq!(all.len(), 21);
        let ts1 = reported_for("TS1");
        let emdp = ts1.iter().find(|r| r.algorithm == "emdp").unwrap();
        assert_eq!((emdp.sample, emdp.buffer, emdp.waste, emdp.steps), (5, 4, 2, Some(8)));
        assert!(ts1.iter().filter(|r| r.algorithm != "emdp").all(|r| r.steps.is_none()));
    }

    #[test]
    fn published_waste_conservation_check() {
        // samples + buffers = targets + waste must hold for any real plan
        let sizes = [("ts1", 7), ("ts2", 7), ("ts3", 4)];
        for (series, n) in sizes {
            let emdp = reported_for(series).into_iter().find(|r| r.algorithm == "emdp").unwrap();
            let balanced = emdp.sample + emdp.buffer == n + emdp.waste;
            assert_eq!(balanced, series == "ts1", "{series}");
        }
    }
}
