//! The N-line coincidence channel against brute-force enumeration, and the
//! GHZ states it leaves untouched.

use qswitch_lab::channel::channels_equal;
use qswitch_lab::control::{k_multiline, multiline_enumeration, CoincidenceChannel};
use qswitch_lab::tensor::{states, DensityMatrix, Label, SubsystemLayout};

fn main() -> qswitch_lab::Result<()> {
    for n in 1..=2 {
        let dist = channels_equal(&k_multiline(2, n)?, &multiline_enumeration(2, n)?, 1e-10)?.distance;
        println!("d=2 N={n}: closed form vs enumeration {dist:.1e}");
    }
    for (d, n) in [(2, 3), (3, 2)] {
        let k = CoincidenceChannel::new(d, n)?;
        let mut pairs: Vec<_> = (1..=n).map(|l| (Label::Line(l), d)).collect();
        pairs.push((Label::C, d));
        let psi = states::ghz(d, n + 1)?;
        let rho = DensityMatrix::from_ket(&psi, SubsystemLayout::from_pairs(pairs)?)?;
        let lines: Vec<_> = (1..=n).map(Label::Line).collect();
        let out = k.apply(&rho, &lines, &Label::C)?;
        println!("d={d} N={n}: GHZ fidelity after K^(N) = {:.12}", out.fidelity_with_pure(&psi)?);
    }
    Ok(())
}
