//! Distributing GHZ states to several receivers sharing one controller.

use qswitch_lab::protocols::{run_ghz_distribution, ResourceState};

fn main() -> qswitch_lab::Result<()> {
    for (d, n) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
        let t = run_ghz_distribution(d, n, &ResourceState::maximally_entangled(d)?)?;
        println!(
            "d={d} N={n}: min branch fidelity {:.12}, GGM {:.6}",
            t.metric("min_branch_fidelity").unwrap(),
            t.metric("ggm_pre_measurement").unwrap()
        );
    }
    Ok(())
}
