//! Private transmission of a dit, with Charlie learning nothing.

use qswitch_lab::protocols::{privacy_report, run_private_dit_all, ResourceState};

fn main() -> qswitch_lab::Result<()> {
    let d = 3;
    for resource in [ResourceState::maximally_entangled(d)?, ResourceState::schmidt(&[0.5, 0.3, 0.2])?] {
        let runs = run_private_dit_all(d, &resource)?;
        let success: Vec<f64> = runs.iter().map(|t| t.metric("success_probability").unwrap()).collect();
        let privacy = privacy_report(&runs)?;
        println!("resource {}:", resource.description());
        println!("  success per message {success:.6?}");
        println!("  Charlie max trace distance {:.1e}", privacy.max_charlie_trace_distance);
        println!("  I(x; x̂) = {:.6} bits", privacy.decode_mutual_information_bits.unwrap());
    }
    let t = &run_private_dit_all(2, &ResourceState::maximally_entangled(2)?)?[1];
    println!("d=2, x=1: p(m_B, m_C) = {:?}", t.joint_pmf.as_ref().unwrap());
    Ok(())
}
