//! Sending the message with the channels in one fixed order: either Bob
//! learns nothing or Charlie can read the message too.

use qswitch_lab::protocols::{classical_flag_encodings, dfs_phase_encodings, fixed_configuration_baseline, identical_encodings};

fn main() -> qswitch_lab::Result<()> {
    let d = 3;
    for (name, enc) in [
        ("dfs-phase", dfs_phase_encodings(d)?),
        ("classical-flag", classical_flag_encodings(d)?),
        ("identical", identical_encodings(d)?),
    ] {
        let r = fixed_configuration_baseline(d, &enc)?;
        println!(
            "{name:>14}: Bob success {:.4} (bound {:.4}), Charlie min trace distance {:.4}, leak certified {}",
            r.bob_success, r.bound, r.min_pairwise_trace_distance, r.leak_certified
        );
    }
    Ok(())
}
