// The command-line front end driven in process: solve a config file,
// then write it back out in canonical form.

use std::error::Error;

use archfreq::cli;
use archfreq::RunConfig;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/cracked.conf");
    let out = cli::run(["archfreq", "--threads", "2", "solve", path]);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    if out.code != cli::EXIT_OK {
        return Err(format!("solve exited with {}", out.code).into());
    }

    let config = RunConfig::load(path)?;
    let text = config.to_string();
    println!("\ncanonical form:\n{text}");
    assert_eq!(RunConfig::parse(&text)?, config);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
