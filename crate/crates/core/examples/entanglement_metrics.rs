//! Concurrence, GGM, Helstrom error and mutual information.

use qswitch_lab::metrics::{concurrence_2qubit, ggm, helstrom_error, mutual_information};
use qswitch_lab::tensor::{states, DensityMatrix, Ket, Label, SubsystemLayout};

fn main() -> qswitch_lab::Result<()> {
    let two = SubsystemLayout::from_pairs([(Label::A, 2), (Label::B(1), 2)])?;
    let psi = states::schmidt_form(&[0.25, 0.75]);
    println!("concurrence {:.6}", concurrence_2qubit(&DensityMatrix::from_ket(&psi, two)?)?);

    for (d, n) in [(2, 3), (3, 4)] {
        let layout = SubsystemLayout::from_pairs((0..n).map(|k| (Label::Line(k), d)))?;
        println!("GGM of GHZ_{n} (d={d}) = {:.6}", ggm(&states::ghz(d, n)?, &layout)?);
    }

    let one = SubsystemLayout::from_pairs([(Label::A, 2)])?;
    let zero = DensityMatrix::from_ket(&Ket::basis(2, 0)?, one.clone())?;
    let plus = DensityMatrix::from_ket(&states::fourier_ket(2, 0)?, one)?;
    println!("Helstrom error |0> vs |+>: {:.5}", helstrom_error(&zero, &plus, 0.5)?);

    let pmf = vec![vec![0.375, 0.125], vec![0.125, 0.375]];
    println!("mutual information {:.5} bits", mutual_information(&pmf)?);
    Ok(())
}
