// Rotational compliance of an edge crack for both shape functions and
// both plane states.

use std::error::Error;

use archfreq::compliance::{rotational_compliance, shape_factor};
use archfreq::{CrackSpec, Material, PlaneState, ShapeFunction};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let material = Material {
        youngs_modulus: 7e11,
        poisson_ratio: 0.3,
        mass_density: 2300.0,
        nonlocal_eta: 1e-18,
    };
    let (width, h_ref) = (1e-9, 10e-9);
    println!("   s   F rizos   F tada   C rizos [rad/Nm]  C tada [rad/Nm]  plane strain / stress");
    for i in 0..=7 {
        let s = i as f64 / 10.0;
        let mut crack = CrackSpec::new(0, s);
        let rizos = rotational_compliance(&material, width, h_ref, &crack)?;
        crack.shape_function = ShapeFunction::TadaTrigonometric;
        let tada = rotational_compliance(&material, width, h_ref, &crack)?;
        crack.plane_state = PlaneState::Strain;
        let strain = rotational_compliance(&material, width, h_ref, &crack)?;
        let ratio = if tada.compliance > 0.0 {
            strain.compliance / tada.compliance
        } else {
            f64::NAN
        };
        println!(
            "{s:4.1}  {:8.4}  {:7.4}  {:16.6e}  {:15.6e}  {ratio:.4}",
            shape_factor(s, ShapeFunction::RizosPolynomial)?,
            shape_factor(s, ShapeFunction::TadaTrigonometric)?,
            rizos.compliance,
            tada.compliance,
        );
    }
    // depths beyond the fitted range of the shape functions are refused
    assert!(shape_factor(0.8, ShapeFunction::RizosPolynomial).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
