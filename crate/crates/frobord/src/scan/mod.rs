//! Batch experiments over prime ranges: exceptional-order searches, density
//! and probability statistics, the one-third bound audit, friable-equality
//! searches, and running-maximum scans.
//!
//! Every scan is data-parallel over contiguous prime chunks with a
//! deterministic sequential merge, so output is byte-identical regardless of
//! worker count.

mod density;
mod driver;
mod exceptional;
mod friable;

use serde::{Deserialize, Serialize};

pub use density::{
    cmax_scan, density_scan, equality_scan, phi_variant_scan, quad_density_stats,
    quad_density_stats_big, quad_phi_sum, third_bound_audit, BigDensityStats, DensityParams,
    DensityScanOutcome, DensityStats,
};
pub use exceptional::{exceptional_scan, Dedup, DeficientPolicy, ExceptionalConfig};
pub use friable::friable_search;

/// One row of experimental output. Kinds mirror the batch subcommands; the
/// `params` field echoes the scan inputs that produced the record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanRecord {
    /// A prime where eta has order d <= p: the first (smallest) d per
    /// (eta, p) unless the scan ran raw.
    Exceptional {
        eta: Vec<i64>,
        nu: u64,
        p: u64,
        order: u64,
        params: String,
    },
    /// Per-prime density-scan row: S_p and C(p). The sum saturates at
    /// u64::MAX for ranges beyond desk scale; C stays exact to f64.
    Density {
        p: u64,
        s: u64,
        c: f64,
        params: String,
    },
    /// Quadratic density statistics row.
    Quadstat {
        p: u64,
        phi_sum: u64,
        density: f64,
        delta: f64,
        c: f64,
        params: String,
    },
    /// A prime violating the one-third lower bound.
    Audit {
        p: u64,
        phi_sum: u64,
        params: String,
    },
    /// A prime attaining the one-third bound exactly.
    Equality { p: u64, params: String },
    /// An equality prime of the 3-smooth shape, with both factorizations.
    Friable {
        p: u64,
        pm1: Vec<(u64, u32)>,
        pp1: Vec<(u64, u32)>,
        params: String,
    },
    /// A successive maximum of the C statistic.
    Cmax {
        p: u64,
        c: f64,
        c_over_log_p: f64,
        params: String,
    },
}

impl ScanRecord {
    pub fn p(&self) -> u64 {
        match self {
            ScanRecord::Exceptional { p, .. }
            | ScanRecord::Density { p, .. }
            | ScanRecord::Quadstat { p, .. }
            | ScanRecord::Audit { p, .. }
            | ScanRecord::Equality { p, .. }
            | ScanRecord::Friable { p, .. }
            | ScanRecord::Cmax { p, .. } => *p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_round_trip_through_json_lines() {
        let records = vec![
            ScanRecord::Exceptional {
                eta: vec![2, 5],
                nu: 1,
                p: 29,
                order: 21,
                params: "spec=quad3 bound=100000".into(),
            },
            ScanRecord::Quadstat {
                p: 112771,
                phi_sum: 1716480000,
                density: 1.35e-4,
                delta: 14.9499,
                c: 1.3137,
                params: "p=112771".into(),
            },
            ScanRecord::Friable {
                p: 13,
                pm1: vec![(2, 2), (3, 1)],
                pp1: vec![(2, 1), (7, 1)],
                params: "t_bound=3000".into(),
            },
        ];
        let text: String = records
            .iter()
            .map(|r| serde_json::to_string(r).unwrap() + "\n")
            .collect();
        let back: Vec<ScanRecord> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(records, back);
    }
}
