//! Bell-analyzer rates and polarization fringes of a type-II source.
use pdcsim::dispersion::{type_ii_cut_angle, CutGeometry, MaterialId, MaterialLibrary, PdcType};
use pdcsim::interference::{bell_analyzer_rates, fringe_visibility, PairFamily, PairSign, PolarizedPairState};
use pdcsim::spectra::{build_jsa_sinc, CrystalConfig, FrequencyGrid, PumpEnvelope};
use pdcsim::units::Wavelength;

fn main() -> pdcsim::Result<()> {
    let bbo = MaterialLibrary::builtin().get(MaterialId::Bbo)?.clone();
    let pump_wl = Wavelength::from_nm(400.0);
    let cut = type_ii_cut_angle(&bbo, Wavelength::from_nm(800.0))?;
    let crystal = CrystalConfig::new(bbo, 1e-3, CutGeometry::new(cut, 0.0, PdcType::TypeII)?)?;
    let pump = PumpEnvelope::from_fwhm_nm(pump_wl, 15.0)?;
    let grid = FrequencyGrid::new(pump_wl.omega() / 2.0, 4e14, 96)?;
    let f = build_jsa_sinc(&crystal, &pump, &grid, &grid)?;

    for (name, g) in [("g = f^T", f.transpose()), ("g = f", f.clone())] {
        let pair = PolarizedPairState::new(f.clone(), g, PairSign::Plus, PairFamily::Psi)?;
        println!("{name}: fringe visibility {:.4}", fringe_visibility(&pair));
        for tau in [0.0, 1e-13, 3e-13] {
            let (p, m) = bell_analyzer_rates(&pair, tau)?;
            println!("  tau {tau:.0e} s: Rc+ {p:.4}  Rc- {m:.4}");
        }
    }
    Ok(())
}
