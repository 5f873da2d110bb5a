//! Controlled order and controlled choice of orthogonal erasing channels
//! are the same channel, and it keeps every |Φ_x> intact.

use qswitch_lab::channel::channels_equal;
use qswitch_lab::control::{coincident_extension, controlled_choice, cyclic_switch, erasing_family, k_closed_form};
use qswitch_lab::tensor::{states, DensityMatrix, Label, SubsystemLayout};

fn main() -> qswitch_lab::Result<()> {
    for d in 2..=4 {
        let order = cyclic_switch(&erasing_family(d)?)?;
        let exts = (0..d).map(|l| coincident_extension(d, l)).collect::<Result<Vec<_>, _>>()?;
        let choice = controlled_choice(&exts)?;
        let k = k_closed_form(d)?;
        println!(
            "d={d}: {} Kraus ops, |order-choice|={:.1e}, |order-K|={:.1e}",
            order.len(),
            channels_equal(&order, &choice, 1e-10)?.distance,
            channels_equal(&order, &k, 1e-10)?.distance
        );
        let layout = SubsystemLayout::from_pairs([(Label::A, d), (Label::C, d)])?;
        for x in 0..d {
            let phi = states::phi_x(d, x)?;
            let out = k.apply(&DensityMatrix::from_ket(&phi, layout.clone())?, &[Label::A, Label::C])?;
            println!("  F(K(Φ_{x}), Φ_{x}) = {:.12}", out.fidelity_with_pure(&phi)?);
        }
    }
    Ok(())
}
