use std::f64::consts::FRAC_PI_2;

use super::sellmeier::{refractive_index, wave_props, Material, Ray};
use crate::numerics::{bisect, scan_first_root};
use crate::units::Wavelength;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PdcType {
    /// Both daughters share a polarization (e→oo in a negative crystal).
    #[serde(rename = "I_eoo")]
    TypeI,
    /// Orthogonally polarized daughters (e→oe in a negative crystal).
    #[serde(rename = "II_eoe")]
    TypeII,
}

/// Crystal cut and emission geometry. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CutGeometry {
    pub theta_pm: f64,
    pub theta: f64,
    pub pdc_type: PdcType,
    pub collinear: bool,
}

impl CutGeometry {
    pub fn new(theta_pm: f64, theta: f64, pdc_type: PdcType) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta_pm) {
            return Err(Error::Invalid(format!("cut angle {theta_pm} rad outside [0, π/2]")));
        }
        if !(theta.abs() < FRAC_PI_2) {
            return Err(Error::Invalid(format!("emission angle {theta} rad outside (−π/2, π/2)")));
        }
        Ok(CutGeometry {
            theta_pm,
            theta,
            pdc_type,
            collinear: theta == 0.0,
        })
    }
}

/// `(pump, daughter)` rays for type-I PDC. Negative crystals pump on the
/// extraordinary ray, positive ones on the ordinary ray.
pub fn type_i_rays(material: &Material, theta_pm: f64) -> (Ray, Ray) {
    let e = Ray::Extraordinary { theta_pm };
    if material.is_negative_uniaxial() {
        (e, Ray::Ordinary)
    } else {
        (Ray::Ordinary, e)
    }
}

/// `(pump, signal, idler)` rays for type-II PDC; the signal is ordinary and
/// the idler extraordinary.
pub fn type_ii_rays(material: &Material, theta_pm: f64) -> (Ray, Ray, Ray) {
    let e = Ray::Extraordinary { theta_pm };
    let pump = if material.is_negative_uniaxial() {
        e
    } else {
        Ray::Ordinary
    };
    (pump, Ray::Ordinary, e)
}

/// Internal emission angle θ at which degenerate type-I PDC phase-matches:
/// `kp(2ω0) = 2k(ω0)cosθ`.
pub fn degenerate_noncollinear_angle(
    material: &Material,
    pump: Wavelength,
    theta_pm: f64,
) -> Result<f64> {
    let (pr, dr) = type_i_rays(material, theta_pm);
    let kp = wave_props(material, pump, pr)?.k;
    let k = wave_props(material, Wavelength::from_m(2.0 * pump.m()), dr)?.k;
    let c = kp / (2.0 * k);
    // a collinear root found by bisection can land a few ulps above 1
    if c > 1.0 + 1e-12 {
        return Err(Error::NotPhaseMatchable(format!(
            "{}: cut {:.4}° gives kp/2k = {c:.8} > 1 at pump {:.4} um",
            material.name(),
            theta_pm.to_degrees(),
            pump.um()
        )));
    }
    Ok(c.min(1.0).acos())
}

/// Cut angle that makes degenerate type-I PDC emit at internal angle `theta`,
/// the inverse of [`degenerate_noncollinear_angle`].
pub fn cut_angle_for_emission(material: &Material, pump: Wavelength, theta: f64) -> Result<f64> {
    let signal = Wavelength::from_m(2.0 * pump.m());
    let mismatch = |t: f64| -> Result<f64> {
        let (pr, dr) = type_i_rays(material, t);
        let kp = wave_props(material, pump, pr)?.k;
        let k = wave_props(material, signal, dr)?.k;
        Ok(kp - 2.0 * k * theta.cos())
    };
    mismatch(0.0)?;
    bisect(|t| mismatch(t).unwrap_or(f64::NAN), 0.0, FRAC_PI_2, 1e-13).map_err(|_| {
        Error::NotPhaseMatchable(format!(
            "{}: no type-I cut emits at {:.4}° for pump {:.4} um",
            material.name(),
            theta.to_degrees(),
            pump.um()
        ))
    })
}

/// Cut angle at which degenerate type-I PDC is collinear.
pub fn collinear_type_i_cut_angle(material: &Material, pump: Wavelength) -> Result<f64> {
    let signal = Wavelength::from_m(2.0 * pump.m());
    let mismatch = |t: f64| -> Result<f64> {
        let (pr, dr) = type_i_rays(material, t);
        Ok(refractive_index(material, pump, pr)? - refractive_index(material, signal, dr)?)
    };
    mismatch(0.0)?;
    bisect(|t| mismatch(t).unwrap_or(f64::NAN), 0.0, FRAC_PI_2, 1e-12).map_err(|_| {
        Error::NotPhaseMatchable(format!(
            "{}: no collinear type-I cut for pump {:.4} um",
            material.name(),
            pump.um()
        ))
    })
}

/// Cut angle for collinear degenerate type-II PDC at `degenerate` wavelength:
/// `2n_p = n_s + n_i`.
pub fn type_ii_cut_angle(material: &Material, degenerate: Wavelength) -> Result<f64> {
    let pump = degenerate.half();
    let mismatch = |t: f64| -> Result<f64> {
        let (pr, sr, ir) = type_ii_rays(material, t);
        Ok(2.0 * refractive_index(material, pump, pr)?
            - refractive_index(material, degenerate, sr)?
            - refractive_index(material, degenerate, ir)?)
    };
    mismatch(0.0)?;
    bisect(|t| mismatch(t).unwrap_or(f64::NAN), 0.0, FRAC_PI_2, 1e-12).map_err(|_| {
        Error::NotPhaseMatchable(format!(
            "{}: no collinear type-II cut at {:.4} um",
            material.name(),
            degenerate.um()
        ))
    })
}

/// Group slopes `(kp', ks', ki')` at the type-II cut for `degenerate`.
fn type_ii_slopes(material: &Material, degenerate: Wavelength) -> Result<(f64, f64, f64)> {
    let t = type_ii_cut_angle(material, degenerate)?;
    let (pr, sr, ir) = type_ii_rays(material, t);
    Ok((
        wave_props(material, degenerate.half(), pr)?.k_prime,
        wave_props(material, degenerate, sr)?.k_prime,
        wave_props(material, degenerate, ir)?.k_prime,
    ))
}

/// Degenerate wavelength where collinear type-II PDC is group-velocity
/// matched, `kp' = ½(k_o' + k_e')`. The range is scanned in 0.01 µm steps
/// from the short end and the first sign change is bisected.
pub fn gvm_wavelength(material: &Material) -> Result<Wavelength> {
    let (lo, hi) = material.range_um();
    let start = (2.0 * lo).max(lo);
    let n = ((hi - start) / 0.01).floor() as usize;
    let stop = start + 0.01 * n as f64;
    let residual = |l: f64| -> Option<f64> {
        let (kp, ks, ki) = type_ii_slopes(material, Wavelength::from_um(l)).ok()?;
        Some(kp - 0.5 * (ks + ki))
    };
    scan_first_root(residual, start, stop, n, 1e-12)
        .map(Wavelength::from_um)
        .map_err(|_| {
            Error::NoRoot(format!(
                "{}: no type-II group-velocity matching in [{start:.3}, {stop:.3}] um",
                material.name()
            ))
        })
}

/// Slope `dνi/dνs` of the linearized type-II phase-matching contour,
/// `−(kp' − ks')/(kp' − ki')` with an ordinary signal and extraordinary idler.
pub fn type_ii_contour_slope(material: &Material, degenerate: Wavelength) -> Result<f64> {
    let (kp, ks, ki) = type_ii_slopes(material, degenerate)?;
    let den = kp - ki;
    if den.abs() < 1e-15 {
        return Err(Error::Degenerate(format!(
            "kp' − ki' = {den:.3e} s/m at {:.4} um",
            degenerate.um()
        )));
    }
    Ok(-(kp - ks) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{MaterialId, MaterialLibrary};

    fn lib() -> MaterialLibrary {
        MaterialLibrary::builtin()
    }

    #[test]
    fn noncollinear_angle_near_three_degrees() {
        let lib = lib();
        let m = lib.get(MaterialId::Bbo).unwrap();
        let t = degenerate_noncollinear_angle(m, Wavelength::from_nm(400.0), 30.32f64.to_radians())
            .unwrap();
        assert!((t.to_degrees() - 3.0).abs() < 0.2);
        assert!((t.to_degrees() - 2.9970698904373942).abs() < 1e-6);
        // substitute back
        let kp = wave_props(m, Wavelength::from_nm(400.0), Ray::Extraordinary { theta_pm: 30.32f64.to_radians() }).unwrap().k;
        let k = wave_props(m, Wavelength::from_nm(800.0), Ray::Ordinary).unwrap().k;
        assert!((kp - 2.0 * k * t.cos()).abs() < 1e-6 * kp);
    }

    #[test]
    fn cut_for_emission_inverts_angle() {
        let lib = lib();
        let m = lib.get(MaterialId::Bbo).unwrap();
        let p = Wavelength::from_nm(400.0);
        let cut = cut_angle_for_emission(m, p, 3f64.to_radians()).unwrap();
        assert!((cut.to_degrees() - 30.32).abs() < 0.01, "{}", cut.to_degrees());
        let back = degenerate_noncollinear_angle(m, p, cut).unwrap();
        assert!((back.to_degrees() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_cut_lies_below_30_32() {
        let lib = lib();
        let m = lib.get(MaterialId::Bbo).unwrap();
        let cut = collinear_type_i_cut_angle(m, Wavelength::from_nm(400.0)).unwrap();
        assert!(cut.to_degrees() < 30.32);
        // independent oracle: bisection on Δkz(0) at θ = 0 over the cut angle
        let dk = |tp: f64| {
            let kp = wave_props(m, Wavelength::from_nm(400.0), Ray::Extraordinary { theta_pm: tp }).unwrap().k;
            let k = wave_props(m, Wavelength::from_nm(800.0), Ray::Ordinary).unwrap().k;
            kp - 2.0 * k
        };
        let (mut a, mut b) = (0.1f64, 1.5f64);
        for _ in 0..100 {
            let c = 0.5 * (a + b);
            if dk(c) > 0.0 { a = c } else { b = c }
        }
        assert!((cut - a).abs() < 1e-10);
        assert!((cut.to_degrees() - 29.178).abs() < 0.01);
        let t = degenerate_noncollinear_angle(m, Wavelength::from_nm(400.0), cut).unwrap();
        assert!(t.abs() < 1e-5);
    }

    #[test]
    fn zero_cut_is_not_phase_matchable() {
        let lib = lib();
        let m = lib.get(MaterialId::Bbo).unwrap();
        // scan oracle: kp − 2k stays positive along θPM = 0 for every pump in range
        for i in 0..50 {
            let lp = 0.22 + 0.026 * i as f64;
            let kp = wave_props(m, Wavelength::from_um(lp), Ray::Extraordinary { theta_pm: 0.0 }).unwrap().k;
            let k = wave_props(m, Wavelength::from_um(2.0 * lp), Ray::Ordinary).unwrap().k;
            assert!(kp - 2.0 * k > 0.0);
        }
        let e = degenerate_noncollinear_angle(m, Wavelength::from_nm(400.0), 0.0).unwrap_err();
        assert!(matches!(e, Error::NotPhaseMatchable(_)));
    }

    #[test]
    fn bbo_gvm_near_1_51() {
        let lib = lib();
        let m = lib.get(MaterialId::Bbo).unwrap();
        let w = gvm_wavelength(m).unwrap();
        assert!((w.um() - 1.51).abs() < 0.02, "{}", w.um());
        let (kp, ks, ki) = type_ii_slopes(m, w).unwrap();
        assert!((kp - 0.5 * (ks + ki)).abs() < 1e-9 * kp);
    }

    #[test]
    fn ktp_and_kdp_gvm_pinned() {
        let lib = lib();
        let ktp = gvm_wavelength(lib.get(MaterialId::Ktp).unwrap()).unwrap();
        assert!((ktp.um() - GVM_KTP_UM).abs() < 1e-6, "{}", ktp.um());
        let kdp = gvm_wavelength(lib.get(MaterialId::Kdp).unwrap()).unwrap();
        assert!((kdp.um() - GVM_KDP_UM).abs() < 1e-6, "{}", kdp.um());
    }

    // frozen from the scan-and-bisect oracle
    const GVM_KTP_UM: f64 = 1.8697605712438228;
    const GVM_KDP_UM: f64 = 1.1026875613749143;

    #[test]
    fn contour_slope_signs() {
        let lib = lib();
        let m = lib.get(MaterialId::Bbo).unwrap();
        assert!(type_ii_contour_slope(m, Wavelength::from_um(0.8)).unwrap() < 0.0);
        assert!(type_ii_contour_slope(m, Wavelength::from_um(1.5)).unwrap() > 0.0);
        for i in 0..=70 {
            let l = 1.20 + 0.01 * i as f64;
            assert!(type_ii_contour_slope(m, Wavelength::from_um(l)).unwrap() > 0.0, "{l}");
        }
        for i in 0..=40 {
            let l = 0.70 + 0.01 * i as f64;
            assert!(type_ii_contour_slope(m, Wavelength::from_um(l)).unwrap() < 0.0, "{l}");
        }
        // the sign flips once between 1.10 and 1.20 um
        let mut flips = Vec::new();
        let mut prev = type_ii_contour_slope(m, Wavelength::from_um(1.0)).unwrap();
        for i in 1..=30 {
            let l = 1.0 + 0.01 * i as f64;
            let s = type_ii_contour_slope(m, Wavelength::from_um(l)).unwrap();
            if s.signum() != prev.signum() {
                flips.push(l);
            }
            prev = s;
        }
        assert_eq!(flips.len(), 1);
        assert!((flips[0] - 1.15).abs() < 0.03, "{flips:?}");
    }

    #[test]
    fn cut_geometry_validation() {
        assert!(CutGeometry::new(0.5, 0.05, PdcType::TypeI).is_ok());
        assert!(CutGeometry::new(-0.1, 0.0, PdcType::TypeI).is_err());
        assert!(CutGeometry::new(0.5, 1.6, PdcType::TypeII).is_err());
        assert!(CutGeometry::new(0.5, 0.0, PdcType::TypeII).unwrap().collinear);
    }
}
