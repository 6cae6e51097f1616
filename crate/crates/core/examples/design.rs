//! Factorable waist, pump threshold and correlated margin for 1 mm BBO.
use pdcsim::design::{correlated_design, factorable_design, threshold_design};
use pdcsim::dispersion::{MaterialId, MaterialLibrary};
use pdcsim::units::{fwhm_nm_to_delta_omega, fwhm_to_sigma, Wavelength};

fn main() -> pdcsim::Result<()> {
    let bbo = MaterialLibrary::builtin().get(MaterialId::Bbo)?.clone();
    let pump = Wavelength::from_nm(400.0);
    let theta = 3f64.to_radians();
    let f = factorable_design(&bbo, pump, 1e-3, theta)?;
    println!("factorable w0 = {:.1} um, checks {:?}", f.value * 1e6, f.checks);
    let sigma = fwhm_to_sigma(fwhm_nm_to_delta_omega(pump, 10.0));
    let t = threshold_design(&bbo, pump, 1e-3, theta, Some(sigma))?;
    println!("sigma_p_min = {:.4e} rad/s, 10 nm gives {:.4e}: {:?}", t.value, sigma, t.checks);
    let c = correlated_design(&bbo, pump, 1e-3, theta, 200e-6)?;
    println!("w0 = 200 um at 1 mm: margin {:.3}", c.value);
    Ok(())
}
