//! Establishing |Φ+> between Alice and Bob through the coincidence channel.

use qswitch_lab::protocols::{run_bipartite_establishment, ResourceState};

fn main() -> qswitch_lab::Result<()> {
    for d in 2..=4 {
        let t = run_bipartite_establishment(d, &ResourceState::maximally_entangled(d)?)?;
        let fids: Vec<f64> = t.branches.iter().map(|b| b.fidelity.unwrap()).collect();
        println!(
            "d={d}: branch fidelities {fids:.10?}, GGM before Charlie measures {:.6}",
            t.metric("ggm_pre_measurement").unwrap()
        );
    }
    let t = run_bipartite_establishment(2, &ResourceState::schmidt(&[0.25, 0.75])?)?;
    println!(
        "d=2, spectrum (0.25, 0.75): fidelity {:.6}, concurrence {:.6}",
        t.metric("mean_fidelity").unwrap(),
        t.metric("mean_concurrence").unwrap()
    );
    Ok(())
}
