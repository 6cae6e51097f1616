//! BBO indices, the degenerate type-I emission angle and the type-II
//! group-velocity-matched wavelength.
use pdcsim::dispersion::{
    degenerate_noncollinear_angle, gvm_wavelength, refractive_index, type_ii_contour_slope, MaterialId, MaterialLibrary,
    Ray,
};
use pdcsim::units::Wavelength;

fn main() -> pdcsim::Result<()> {
    let lib = MaterialLibrary::builtin();
    let bbo = lib.get(MaterialId::Bbo)?;
    for nm in [400.0, 800.0, 1550.0] {
        let w = Wavelength::from_nm(nm);
        let no = refractive_index(bbo, w, Ray::Ordinary)?;
        let ne = refractive_index(bbo, w, Ray::Extraordinary { theta_pm: std::f64::consts::FRAC_PI_2 })?;
        println!("{nm:6.0} nm  n_o = {no:.5}  n_e = {ne:.5}");
    }
    let theta = degenerate_noncollinear_angle(bbo, Wavelength::from_nm(400.0), 30.32f64.to_radians())?;
    println!("emission angle at cut 30.32 deg: {:.3} deg", theta.to_degrees());
    let gvm = gvm_wavelength(bbo)?;
    println!("type II group-velocity matching at {:.4} um", gvm.um());
    for um in [0.8, 1.2, 1.5, 1.9] {
        println!("  contour slope at {um} um: {:+.4}", type_ii_contour_slope(bbo, Wavelength::from_um(um))?);
    }
    Ok(())
}
