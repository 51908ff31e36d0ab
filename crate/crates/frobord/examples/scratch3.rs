use frobord::scan::{density_scan, DensityParams, ScanRecord};

fn main() {
    let params = DensityParams { n_p: 2, g_p: 2, lo: 1_000_000, hi: 10_000_000, kappa: 1.0, phi_weight: false };
    let out = density_scan(&params, true).unwrap();
    let mut rows: Vec<(f64, u64)> = out.per_prime.iter().map(|r| match r {
        ScanRecord::Density { p, c, .. } => (*c, *p),
        _ => unreachable!(),
    }).collect();
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (c, p) in rows.iter().take(8) {
        println!("C = {c:.6} at p = {p}");
    }
}
