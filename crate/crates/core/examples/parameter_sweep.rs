// First natural frequency as thickness, radius and the nonlocal parameter
// vary, starting from a config file.

use std::error::Error;

use archfreq::{natural_frequencies, RunConfig, SweepParam, SweepSpec};

fn first_frequencies(base: &RunConfig, spec: SweepSpec) -> Result<Vec<(f64, f64)>, Box<dyn Error>> {
    let mut out = Vec::new();
    for value in spec.values() {
        let v = base.with_param(spec.param, value)?.validated()?;
        let spectrum = natural_frequencies(&v.model, &v.solver)?;
        let first = spectrum.modes.first().ok_or("no mode in window")?;
        out.push((value, first.omega));
    }
    Ok(out)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = RunConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/stepped.conf"))?;
    let sweeps = [
        (SweepParam::H0, 5e-9, 15e-9),
        (SweepParam::Radius, 20e-9, 60e-9),
        (SweepParam::Eta, 0.5e-18, 4e-18),
    ];
    for (param, from, to) in sweeps {
        let rows = first_frequencies(
            &base,
            SweepSpec {
                param,
                from,
                to,
                steps: 5,
            },
        )?;
        println!("{param}:");
        for (value, omega) in &rows {
            println!("  {value:.3e}  omega_1 = {omega:.6e} rad/s");
        }
        let rising = rows.windows(2).all(|w| w[1].1 > w[0].1);
        let falling = rows.windows(2).all(|w| w[1].1 < w[0].1);
        println!(
            "  trend: {}",
            if rising {
                "increasing"
            } else if falling {
                "decreasing"
            } else {
                "mixed"
            }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
