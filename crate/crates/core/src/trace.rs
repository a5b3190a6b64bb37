//! Trace rows shared by every runner and their CSV encoding.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// Local time estimate statistics (asynchronous runs only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeStats {
    pub m_min: f64,
    pub m_max: f64,
    pub m_mean: f64,
    /// `max_k |m_k - t| / t^0.6`.
    pub m_dev_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: u64,
    pub grad_evals: u64,
    pub obj_mean: f64,
    pub obj_std: f64,
    pub obj_max: f64,
    pub gap_mean: Option<f64>,
    pub bias_term: f64,
    pub bias_term_centered: Option<f64>,
    pub dual_disagreement: f64,
    pub time: Option<TimeStats>,
}

const BASE_COLUMNS: [&str; 8] = [
    "t",
    "obj_mean",
    "obj_std",
    "obj_max",
    "gap_mean",
    "bias_term",
    "bias_term_centered",
    "dual_disagreement",
];
const TIME_COLUMNS: [&str; 4] = ["m_min", "m_max", "m_mean", "m_dev_scaled"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    /// Non-fatal precondition warnings, e.g. a bipartite graph.
    pub warnings: Vec<String>,
}

impl Trace {
    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    fn has_time(&self) -> bool {
        self.records.iter().any(|r| r.time.is_some())
    }

    /// Header row, then one row per record. Missing values are empty cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let time = self.has_time();
        let mut header: Vec<&str> = BASE_COLUMNS.to_vec();
        if time {
            header.extend(TIME_COLUMNS);
        }
        header.push("grad_evals");
        w.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![
                r.t.to_string(),
                r.obj_mean.to_string(),
                r.obj_std.to_string(),
                r.obj_max.to_string(),
                opt(r.gap_mean),
                r.bias_term.to_string(),
                opt(r.bias_term_centered),
                r.dual_disagreement.to_string(),
            ];
            if time {
                match r.time {
                    Some(s) => row.extend([s.m_min, s.m_max, s.m_mean, s.m_dev_scaled].map(|v| v.to_string())),
                    None => row.extend(std::iter::repeat_n(String::new(), 4)),
                }
            }
            row.push(r.grad_evals.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: u64, time: Option<TimeStats>) -> TraceRecord {
        TraceRecord {
            t,
            grad_evals: 2 * t,
            obj_mean: 0.5,
            obj_std: 0.0,
            obj_max: 0.5,
            gap_mean: None,
            bias_term: 0.0,
            bias_term_centered: Some(-0.25),
            dual_disagreement: 1.0,
            time,
        }
    }

    #[test]
    fn sync_header_and_empty_cells() {
        let trace = Trace {
            records: vec![record(0, None), record(10, None)],
            warnings: vec![],
        };
        let s = trace.to_csv_string().unwrap();
        let mut lines = s.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,obj_mean,obj_std,obj_max,gap_mean,bias_term,bias_term_centered,dual_disagreement,grad_evals"
        );
        assert_eq!(lines.next().unwrap(), "0,0.5,0,0.5,,0,-0.25,1,0");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn async_columns() {
        let stats = TimeStats {
            m_min: 1.0,
            m_max: 3.0,
            m_mean: 2.0,
            m_dev_scaled: 0.5,
        };
        let trace = Trace {
            records: vec![record(0, None), record(4, Some(stats))],
            warnings: vec![],
        };
        let s = trace.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].ends_with("m_min,m_max,m_mean,m_dev_scaled,grad_evals"));
        assert!(lines[1].ends_with(",,,,0"));
        assert!(lines[2].ends_with(",1,3,2,0.5,8"));
    }
}
