// Cross-check of the determinant roots with the finite-difference model,
// and the observed order of convergence of the latter.

use std::error::Error;

use archfreq::fd::{discretize, oracle_frequencies};
use archfreq::{
    natural_frequencies, ArchGeometry, ArchModel, CrackSpec, Material, ModelOptions, SolverConfig,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = ArchModel::new(
        Material {
            youngs_modulus: 7e11,
            poisson_ratio: 0.3,
            mass_density: 2300.0,
            nonlocal_eta: 1e-18,
        },
        ArchGeometry::stepped(30e-9, 1e-9, 1.0, &[0.4], &[10e-9, 20e-9]),
        vec![CrackSpec::new(0, 0.5)],
        ModelOptions::default(),
    )?;
    let config = SolverConfig::default_for(&model)?;
    let det = natural_frequencies(&model, &config)?.omegas();
    let exact = det[0];

    println!("nodes/rad  omega_1 (FD)      rel. error");
    let mut errors = Vec::new();
    for nodes in [100, 200, 400] {
        let fd = oracle_frequencies(&discretize(&model, nodes)?, 1, config.omega_min)?;
        let err = (fd[0] - exact).abs() / exact;
        println!("{nodes:>9}  {:.9e}  {err:.3e}", fd[0]);
        errors.push(err);
    }
    println!("determinant omega_1 = {exact:.9e}");
    for w in errors.windows(2) {
        println!("observed order {:.2}", (w[0] / w[1]).log2());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
