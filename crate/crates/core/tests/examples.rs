mod link_budget_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/link_budget.rs"));
}

mod interference_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/interference.rs"));
}

mod order_statistics_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/order_statistics.rs"));
}

mod utility_profile_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/utility_profile.rs"));
}

mod replicator_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/replicator.rs"));
}

mod baselines_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/baselines.rs"));
}

mod sweep_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweep.rs"));
}

#[test]
fn link_budget_example_runs() {
    link_budget_example::run_example().expect("link budget example should run");
}

#[test]
fn interference_example_runs() {
    interference_example::run_example().expect("interference example should run");
}

#[test]
fn order_statistics_example_runs() {
    order_statistics_example::run_example().expect("order statistics example should run");
}

#[test]
fn utility_profile_example_runs() {
    utility_profile_example::run_example().expect("utility profile example should run");
}

#[test]
fn replicator_example_runs() {
    replicator_example::run_example().expect("replicator example should run");
}

#[test]
fn baselines_example_runs() {
    baselines_example::run_example().expect("baselines example should run");
}

#[test]
fn sweep_example_runs() {
    sweep_example::run_example().expect("sweep example should run");
}
