use frobord::numfield::{load_builtin, AlgebraicNumber};
use frobord::scan::{exceptional_scan, DeficientPolicy, Dedup, ExceptionalConfig, ScanRecord};

fn show(tag: &str, records: &[ScanRecord]) {
    println!("== {tag}: {} records", records.len());
    for r in records {
        if let ScanRecord::Exceptional { eta, p, order, .. } = r {
            println!("  eta={eta:?} p={p} d={order}");
        }
    }
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    let dedup = match std::env::args().nth(2).as_deref() {
        Some("paper") => Dedup::PerPairConjugate,
        _ => Dedup::PerPair,
    };
    if which == "cubic" {
        let spec = load_builtin("cubic7").unwrap();
        let mut family = Vec::new();
        for b in -10i64..=10 {
            for c in -10i64..=10 {
                family.push(AlgebraicNumber::from_i64(&spec, &[c, b, 1], 1).unwrap());
            }
        }
        let cfg = ExceptionalConfig { bound: 100_000, np_filter: 3, dedup, deficient: DeficientPolicy::Skip };
        let t = std::time::Instant::now();
        let records = exceptional_scan(&family, &cfg).unwrap();
        show("cubic", &records);
        println!("elapsed {:?}", t.elapsed());
    } else if which == "quartic" {
        let spec = load_builtin("quartic17").unwrap();
        let mut family = Vec::new();
        for b in -10i64..=10 {
            for c in -10i64..=10 {
                for d in -10i64..=10 {
                    family.push(AlgebraicNumber::from_i64(&spec, &[d, c, b, 1], 1).unwrap());
                }
            }
        }
        let cfg = ExceptionalConfig { bound: 100_000, np_filter: 2, dedup, deficient: DeficientPolicy::Skip };
        let t = std::time::Instant::now();
        let records = exceptional_scan(&family, &cfg).unwrap();
        show("quartic", &records);
        println!("elapsed {:?}", t.elapsed());
    } else if which == "quad" {
        let spec = load_builtin("quad3").unwrap();
        let mut family = Vec::new();
        for b in -10i64..=10 {
            family.push(AlgebraicNumber::from_i64(&spec, &[b, 1], 1).unwrap());
        }
        let cfg = ExceptionalConfig { bound: 100_000, np_filter: 2, dedup, deficient: DeficientPolicy::Skip };
        let records = exceptional_scan(&family, &cfg).unwrap();
        show("quad sqrt3+b", &records);
    }
}
