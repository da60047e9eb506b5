// Normalized frequencies of a uniform arch for η = 0..4 nm² against the
// tabulated reference values, with the radius fitted to their ratios.

use std::error::Error;

use archfreq::reference::{fit_radius, local_omega_bar, ratios, DEFAULT_BETA, ETA_NM2, OMEGA_BAR};
use archfreq::{
    natural_frequencies, ArchGeometry, ArchModel, Formulation, Material, ModelOptions, SolverConfig,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let beta = DEFAULT_BETA;
    let radius = fit_radius(beta);
    println!(
        "fitted radius {:.4} nm, local closed form {:.6}",
        radius * 1e9,
        local_omega_bar(beta)
    );
    println!("eta [nm2]  omega_bar   table      ratio    table ratio");
    let mut first = None;
    for (i, eta) in ETA_NM2.iter().enumerate() {
        let model = ArchModel::new(
            Material {
                youngs_modulus: 7e11,
                poisson_ratio: 0.3,
                mass_density: 2300.0,
                nonlocal_eta: eta * 1e-18,
            },
            ArchGeometry::uniform(radius, 1e-9, beta, 10e-9),
            vec![],
            ModelOptions::with_formulation(Formulation::Consistent),
        )?;
        let spectrum = natural_frequencies(&model, &SolverConfig::default_for(&model)?)?;
        let w = spectrum.modes.first().ok_or("no first mode")?.omega_bar;
        let w0 = *first.get_or_insert(w);
        println!(
            "{eta:>9}  {w:9.6}  {:9.6}  {:7.5}  {:7.5}",
            OMEGA_BAR[i],
            w / w0,
            ratios()[i]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
