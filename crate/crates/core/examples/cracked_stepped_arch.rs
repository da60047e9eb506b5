// How a crack at the thickness step changes the spectrum, from an intact
// joint through increasing depth to a free hinge.

use std::error::Error;

use archfreq::{
    natural_frequencies, ArchGeometry, ArchModel, CrackSpec, Formulation, Joint, Material,
    ModelOptions, SolverConfig,
};

fn model(cracks: Vec<CrackSpec>) -> archfreq::Result<ArchModel> {
    ArchModel::new(
        Material {
            youngs_modulus: 7e11,
            poisson_ratio: 0.3,
            mass_density: 2300.0,
            nonlocal_eta: 1e-18,
        },
        ArchGeometry::stepped(30e-9, 1e-9, 1.0, &[0.5], &[10e-9, 20e-9]),
        cracks,
        ModelOptions::with_formulation(Formulation::Consistent),
    )
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let intact = model(vec![])?;
    // one window for every case so the columns are comparable
    let config = SolverConfig::default_for(&intact)?;
    let mut cases = vec![("intact".to_string(), intact)];
    for s in [0.1, 0.3, 0.5, 0.7] {
        cases.push((format!("s = {s}"), model(vec![CrackSpec::new(0, s)])?));
    }
    cases.push(("hinge".to_string(), model(vec![CrackSpec::hinge(0)])?));

    println!("case        joint                 omega_1 .. omega_3 [rad/s]");
    for (name, m) in &cases {
        let joint = match m.joint(0) {
            Joint::Spring { compliance } => format!("C = {compliance:.3e}"),
            Joint::Hinge => "hinge".to_string(),
        };
        let omegas = natural_frequencies(m, &config)?.omegas();
        let shown: Vec<String> = omegas.iter().take(3).map(|w| format!("{w:.5e}")).collect();
        println!("{name:<10}  {joint:<20}  {}", shown.join("  "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
