macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }
    };
}

example!(uniform_arch);
example!(crack_compliance);
example!(cracked_stepped_arch);
example!(mode_shapes);
example!(finite_difference_check);
example!(parameter_sweep);
example!(reference_table);
example!(config_driven);

#[test]
fn uniform_arch_runs() {
    uniform_arch::run_example().expect("uniform_arch");
}

#[test]
fn crack_compliance_runs() {
    crack_compliance::run_example().expect("crack_compliance");
}

#[test]
fn cracked_stepped_arch_runs() {
    cracked_stepped_arch::run_example().expect("cracked_stepped_arch");
}

#[test]
fn mode_shapes_runs() {
    mode_shapes::run_example().expect("mode_shapes");
}

#[test]
fn finite_difference_check_runs() {
    finite_difference_check::run_example().expect("finite_difference_check");
}

#[test]
fn parameter_sweep_runs() {
    parameter_sweep::run_example().expect("parameter_sweep");
}

#[test]
fn reference_table_runs() {
    reference_table::run_example().expect("reference_table");
}

#[test]
fn config_driven_runs() {
    config_driven::run_example().expect("config_driven");
}
