use frobord::scan::{density_scan, phi_variant_scan, DensityParams};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let np: u32 = args[1].parse().unwrap();
    let gp: u32 = args[2].parse().unwrap();
    let lo: u64 = args[3].parse().unwrap();
    let hi: u64 = args[4].parse().unwrap();
    let kappa: f64 = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let phi = args.get(6).map(|s| s == "phi").unwrap_or(false);
    let t = std::time::Instant::now();
    let out = if phi {
        phi_variant_scan(lo, hi, false).unwrap()
    } else {
        density_scan(&DensityParams { n_p: np, g_p: gp, lo, hi, kappa, phi_weight: phi }, false).unwrap()
    };
    println!("np={np} gp={gp} [{lo},{hi}] kappa={kappa} phi={phi}: C_min = {:.6} at p = {:?}  ({:?})",
             out.c_min, out.argmin_p, t.elapsed());
}
