//! Canonical form of a controlled choice with arbitrary vacuum amplitudes.

use qswitch_lab::channel::{channels_equal, erasing_channel, vacuum_extend};
use qswitch_lab::control::{controlled_choice, cyclic_switch, erasing_family, t_decomposition};
use qswitch_lab::sampling::random_amplitudes;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qswitch_lab::Result<()> {
    let d = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let exts = (0..d)
        .map(|l| vacuum_extend(&erasing_channel(d, l)?, &random_amplitudes(&mut rng, d)))
        .collect::<Result<Vec<_>, _>>()?;
    let td = t_decomposition(&exts)?;
    for (j, v) in td.v.iter().enumerate() {
        println!("‖v_{j}‖ = {:.6}", v.norm());
    }
    let choice = controlled_choice(&exts)?;
    println!("reconstruction distance {:.1e}", channels_equal(&td.to_channel()?, &choice, 1e-10)?.distance);
    let order = cyclic_switch(&erasing_family(d)?)?;
    println!("distance to the controlled order {:.4}", channels_equal(&choice, &order, 1e-10)?.distance);
    Ok(())
}
