//! Type-I noncollinear JSA with the true sinc, written as CSV.
use pdcsim::dispersion::{cut_angle_for_emission, CutGeometry, MaterialId, MaterialLibrary, PdcType};
use pdcsim::spectra::io::to_csv_string;
use pdcsim::spectra::{build_jsa_sinc, CrystalConfig, FrequencyGrid, PumpEnvelope};
use pdcsim::units::Wavelength;

fn main() -> pdcsim::Result<()> {
    let bbo = MaterialLibrary::builtin().get(MaterialId::Bbo)?.clone();
    let pump_wl = Wavelength::from_nm(400.0);
    let theta = 3f64.to_radians();
    let cut = cut_angle_for_emission(&bbo, pump_wl, theta)?;
    let crystal = CrystalConfig::new(bbo, 1e-3, CutGeometry::new(cut, theta, PdcType::TypeI)?)?;
    let pump = PumpEnvelope::from_fwhm_nm(pump_wl, 15.0)?;
    let grid = FrequencyGrid::new(pump_wl.omega() / 2.0, 1.2e15, 128)?;
    let jsa = build_jsa_sinc(&crystal, &pump, &grid, &grid)?;
    eprintln!("boundary ratio {:.2e}", jsa.boundary_ratio());
    print!("{}", to_csv_string(&jsa, None));
    Ok(())
}
