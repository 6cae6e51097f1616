//! NS gate conditional map, optimizer and the HOM-in-MZ test.
use pdcsim::focksim::{homi_mz_stage_states, ns_conditional_map, ns_optimize, NSGateConfig};

fn main() -> pdcsim::Result<()> {
    let map = ns_conditional_map(&NSGateConfig::ideal())?;
    println!("c = {:?}", map.amplitudes);
    println!("success {:.6}, residual {:.1e}", map.success_probability, map.map_residual);
    let opt = ns_optimize(100)?;
    println!("optimum r = {:.6}, s = {:.6}", opt.r, opt.s);
    for k in 0..=8 {
        let phase = std::f64::consts::PI * k as f64 / 8.0;
        println!("phase {phase:.4}: coincidence {:.6}", homi_mz_stage_states(phase)?.coincidence);
    }
    Ok(())
}
