//! Protocol quality against resource entanglement: perfect only at the
//! uniform Schmidt spectrum.

use qswitch_lab::protocols::{alpha_grid, necessity_sweep, Protocol, PERFECT_TOL};

fn main() -> qswitch_lab::Result<()> {
    let grid = alpha_grid(2, 0.0, 1.0, 11)?;
    for protocol in [Protocol::PrivateDit, Protocol::Bipartite, Protocol::Ghz] {
        let table = necessity_sweep(protocol, 2, 2, &grid)?;
        println!("{protocol}:");
        for r in &table.rows {
            println!("  α={:.1}  metric={:.6}  perfect={}", r.spectrum[0], r.metric, r.is_perfect);
        }
        let cert = table.certify(PERFECT_TOL);
        println!("  perfect only at uniform: {}", cert.holds);
    }
    Ok(())
}
