//! Run records and benchmark aggregation, serializable as JSON for scripts
//! and renderable as aligned text for humans.

use crate::bnc::{CutCounts, SolveResult, SolveStatus};
use serde::{Deserialize, Serialize};

/// One solver run on one instance configuration. Serializes losslessly;
/// `wall_time_s` is zeroed under stable output so identical runs emit
/// identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none", default)]
    pub big_r: Option<f64>,
    pub theta: f64,
    pub k: u32,
    pub setting: String,
    pub status: String,
    pub best_value: f64,
    pub dual_bound: f64,
    pub gap_pct: f64,
    pub nodes: u64,
    pub cuts: CutCounts,
    pub root_lpg_pct: f64,
    pub wall_time_s: f64,
    /// Model variables (2|I| + 2|J|) after preprocessing.
    pub variables: usize,
}

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::TimeLimit => "time_limit",
    }
}

impl RunRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn from_result(
        instance: String,
        format: String,
        r: Option<f64>,
        big_r: Option<f64>,
        theta: f64,
        k: u32,
        setting: String,
        variables: usize,
        res: &SolveResult,
    ) -> RunRecord {
        RunRecord {
            instance,
            format,
            r,
            big_r,
            theta,
            k,
            setting,
            status: status_name(res.status).to_string(),
            best_value: res.best_value,
            dual_bound: res.dual_bound,
            gap_pct: res.gap_pct,
            nodes: res.nodes,
            cuts: res.cuts_added,
            root_lpg_pct: res.root_lpg_pct,
            wall_time_s: res.wall_time_s,
            variables,
        }
    }

    pub fn solved(&self) -> bool {
        self.status == "optimal"
    }

    pub fn table_header() -> String {
        format!(
            "{:<18} {:>5} {:>5} {:>5} {:>4} {:<16} {:<10} {:>12} {:>12} {:>7} {:>7} {:>6} {:>7} {:>8} {:>6}",
            "instance", "r", "R", "theta", "K", "setting", "status", "best", "bound", "gap%",
            "nodes", "cuts", "lpg%", "time_s", "vars"
        )
    }

    pub fn table_row(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x}"));
        format!(
            "{:<18} {:>5} {:>5} {:>5} {:>4} {:<16} {:<10} {:>12.6} {:>12.6} {:>7.3} {:>7} {:>6} {:>7.3} {:>8.2} {:>6}",
            self.instance,
            fmt_opt(self.r),
            fmt_opt(self.big_r),
            self.theta,
            self.k,
            self.setting,
            self.status,
            self.best_value,
            self.dual_bound,
            self.gap_pct,
            self.nodes,
            self.cuts.total(),
            self.root_lpg_pct,
            self.wall_time_s,
            self.variables,
        )
    }
}

/// Table-style aggregate over records with the same instance size and K.
/// Time and node means run over solved records only; gap and root-gap means
/// run over everything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub size: usize,
    pub k: u32,
    pub setting: String,
    pub count: usize,
    pub solved: usize,
    pub mean_time_s: f64,
    pub mean_nodes: f64,
    pub mean_gap_pct: f64,
    pub mean_root_lpg_pct: f64,
}

pub fn aggregate(records: &[(usize, RunRecord)]) -> Vec<AggregateRow> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(usize, u32, String), Vec<&RunRecord>> = BTreeMap::new();
    for (size, rec) in records {
        groups
            .entry((*size, rec.k, rec.setting.clone()))
            .or_default()
            .push(rec);
    }
    groups
        .into_iter()
        .map(|((size, k, setting), rows)| {
            let solved: Vec<&&RunRecord> = rows.iter().filter(|r| r.solved()).collect();
            let mean = |vals: Vec<f64>| {
                if vals.is_empty() {
                    0.0
                } else {
                    vals.iter().sum::<f64>() / vals.len() as f64
                }
            };
            AggregateRow {
                size,
                k,
                setting,
                count: rows.len(),
                solved: solved.len(),
                mean_time_s: mean(solved.iter().map(|r| r.wall_time_s).collect()),
                mean_nodes: mean(solved.iter().map(|r| r.nodes as f64).collect()),
                mean_gap_pct: mean(rows.iter().map(|r| r.gap_pct).collect()),
                mean_root_lpg_pct: mean(rows.iter().map(|r| r.root_lpg_pct).collect()),
            }
        })
        .collect()
}

pub fn aggregate_table(rows: &[AggregateRow]) -> String {
    let mut out = format!(
        "{:>6} {:>5} {:<16} {:>4} {:>4} {:>9} {:>9} {:>7} {:>7}\n",
        "|I|", "K", "setting", "#", "S", "T", "N", "G%", "LPG%"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>6} {:>5} {:<16} {:>4} {:>4} {:>9.2} {:>9.1} {:>7.3} {:>7.3}\n",
            r.size,
            r.k,
            r.setting,
            r.count,
            r.solved,
            r.mean_time_s,
            r.mean_nodes,
            r.mean_gap_pct,
            r.mean_root_lpg_pct
        ));
    }
    out
}
