//! The two-channel quantum SWITCH and controlled choice on qubits.

use qswitch_lab::channel::{channels_equal, erasing_channel};
use qswitch_lab::control::{choice_two, coincident_extension, restrict_to_target, switch_two};
use qswitch_lab::tensor::{states, DensityMatrix, Label, SubsystemLayout, Tensor};

fn main() -> qswitch_lab::Result<()> {
    let s = switch_two(&erasing_channel(2, 0)?, &erasing_channel(2, 1)?)?;
    let layout = SubsystemLayout::from_pairs([(Label::A, 2), (Label::C, 2)])?;
    let plus = states::fourier_ket(2, 0)?;
    let out = s.apply(&DensityMatrix::from_ket(&plus.tensor(&plus), layout)?, &[Label::A, Label::C])?;
    println!("SWITCH(E0, E1) on |+>|+>:");
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|c| format!("{:6.3}", out.matrix()[(r, c)].re)).collect();
        println!("  {}", row.join(" "));
    }
    let choice = choice_two(&coincident_extension(2, 0)?, &coincident_extension(2, 1)?)?;
    let restricted = restrict_to_target(&choice, 2, 2)?;
    println!("choice restricted to the target sector equals the SWITCH: {}", channels_equal(&restricted, &s, 1e-10)?.equal);
    Ok(())
}
