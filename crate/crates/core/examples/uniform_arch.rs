// Natural frequencies of a constant-thickness arch, checked against the
// closed form `K_n = k²(k² − 1)/(k² + 1)`, `k = nπ/β`.

use std::error::Error;
use std::f64::consts::PI;

use archfreq::basis::frequency_scale;
use archfreq::{
    natural_frequencies, ArchGeometry, ArchModel, Material, ModelOptions, SolverConfig,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let material = Material {
        youngs_modulus: 7e11,
        poisson_ratio: 0.3,
        mass_density: 2300.0,
        nonlocal_eta: 1e-18,
    };
    let beta = 1.0;
    let model = ArchModel::new(
        material,
        ArchGeometry::uniform(30e-9, 1e-9, beta, 10e-9),
        vec![],
        ModelOptions::default(),
    )?;
    let spectrum = natural_frequencies(&model, &SolverConfig::default_for(&model)?)?;

    let per_omega2 = frequency_scale(&model, 0).c_per_omega2;
    println!("mode  omega [rad/s]     K (solver)     K (closed form)  rel. diff");
    for m in &spectrum.modes {
        let k2 = (m.mode_index as f64 * PI / beta).powi(2);
        let exact = k2 * (k2 - 1.0) / (k2 + 1.0);
        let k = m.omega * m.omega * per_omega2;
        let rel = (k - exact).abs() / exact;
        println!(
            "{:>4}  {:.6e}  {:>13.8}  {:>13.8}  {rel:.1e}",
            m.mode_index, m.omega, k, exact
        );
        if rel > 1e-8 {
            return Err(format!("mode {} off the closed form by {rel:e}", m.mode_index).into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
