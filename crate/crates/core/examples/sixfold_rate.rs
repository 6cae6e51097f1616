//! Six-fold coincidence probability of the heralded NS sign test versus
//! source cooperativity.
use pdcsim::focksim::{modes_for_truncation, rate_curve_csv, sixfold_rate_curve, sixfold_rate_mu, NSGateConfig, TRUNCATION_LIMIT};

fn main() -> pdcsim::Result<()> {
    let cfg = NSGateConfig::ideal();
    let mus = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];
    let rows = sixfold_rate_curve(&mus, &cfg, None)?;
    print!("{}", rate_curve_csv(&rows));

    for mu in [0.3, 0.5] {
        let a = sixfold_rate_mu(mu, &cfg, 6)?.rate;
        let b = sixfold_rate_mu(mu, &cfg, 8)?.rate;
        println!("mu={mu}: N=6 {a:.6e}, N=8 {b:.6e}, change {:.2e}", (a - b).abs() / b);
    }
    println!("modes needed at mu=0.7: {}", modes_for_truncation(0.7, 8, TRUNCATION_LIMIT)?);
    Ok(())
}
