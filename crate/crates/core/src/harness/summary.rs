use std::io::Write;

use crate::harness::records::TrialRecord;

/// z-value of a two-sided 95% normal interval.
pub const Z_95: f64 = 1.96;

/// Mean cumulative regret of one (agent, param) at one period, across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub agent: String,
    pub param: String,
    pub period: u32,
    pub trials: usize,
    pub mean: f64,
    /// `mean ± 1.96 sd / √trials`; `None` with fewer than two trials.
    pub ci: Option<(f64, f64)>,
}

impl SummaryRow {
    pub fn half_width(&self) -> Option<f64> {
        self.ci.map(|(lo, hi)| 0.5 * (hi - lo))
    }
}

/// Mean and sample standard deviation (n − 1 denominator).
pub fn mean_sd(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, Some(var.sqrt()))
}

/// Cumulative regrets per period for one (agent, param) pair.
type PeriodRegrets = std::collections::BTreeMap<u32, Vec<f64>>;

/// Groups by (agent, param, period) in first-seen order of (agent, param), periods ascending.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut groups: Vec<((String, String), PeriodRegrets)> = Vec::new();
    for r in records {
        let key = (r.agent.clone(), r.param.clone());
        let idx = match groups.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                groups.push((key, Default::default()));
                groups.len() - 1
            }
        };
        groups[idx].1.entry(r.period).or_default().push(r.cum_regret);
    }
    let mut rows = Vec::new();
    for ((agent, param), periods) in groups {
        for (period, xs) in periods {
            let (mean, sd) = mean_sd(&xs);
            let ci = sd.map(|sd| {
                let h = Z_95 * sd / (xs.len() as f64).sqrt();
                (mean - h, mean + h)
            });
            rows.push(SummaryRow { agent: agent.clone(), param: param.clone(), period, trials: xs.len(), mean, ci });
        }
    }
    rows
}

pub fn write_summary_to<W: Write>(rows: &[SummaryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "agent,param,period,trials,mean,ci_low,ci_high")?;
    for r in rows {
        let (lo, hi) = r.ci.map_or((String::new(), String::new()), |(l, h)| (l.to_string(), h.to_string()));
        writeln!(out, "{},{},{},{},{},{},{}", r.agent, r.param, r.period, r.trials, r.mean, lo, hi)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(trial: u32, period: u32, cum: f64) -> TrialRecord {
        TrialRecord { agent: "ts".into(), param: String::new(), trial, period, regret: 0.0, cum_regret: cum }
    }

    #[test]
    fn identical_trials_have_zero_width() {
        let rows = summarize(&[rec(0, 1, 3.0), rec(1, 1, 3.0), rec(2, 1, 3.0)]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].half_width(), Some(0.0));
    }

    #[test]
    fn two_trial_interval() {
        let rows = summarize(&[rec(0, 5, 10.0), rec(1, 5, 20.0)]);
        assert_eq!(rows[0].mean, 15.0);
        let want = 1.96 * 50f64.sqrt() / 2f64.sqrt();
        assert!((rows[0].half_width().unwrap() - want).abs() < 1e-12);
        assert!((want - 9.8).abs() < 1e-12);
    }

    #[test]
    fn single_trial_has_no_interval() {
        let rows = summarize(&[rec(0, 1, 1.0), rec(0, 2, 2.0)]);
        assert!(rows.iter().all(|r| r.ci.is_none()));
        let mut buf = Vec::new();
        write_summary_to(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("ts,,1,1,1,,\n"));
    }

    #[test]
    fn width_shrinks_with_trials() {
        // Alternating 0/2 values keep sd ≈ 1 while n grows.
        let width = |n: u32| {
            let recs: Vec<_> = (0..n).map(|t| rec(t, 1, if t % 2 == 0 { 0.0 } else { 2.0 })).collect();
            let (_, sd) = mean_sd(&recs.iter().map(|r| r.cum_regret).collect::<Vec<_>>());
            (summarize(&recs)[0].half_width().unwrap(), sd.unwrap())
        };
        let (w4, s4) = width(4);
        let (w16, s16) = width(16);
        assert!(((w4 / s4) / (w16 / s16) - 2.0).abs() < 1e-12);
    }
}
