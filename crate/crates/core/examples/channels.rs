//! Kraus channels, vacuum extensions and Choi-matrix equality.

use num_complex::Complex64;
use qswitch_lab::channel::{canonicalize_extension, channels_equal, choi, erasing_channel, vacuum_extend};
use qswitch_lab::tensor::{states, DensityMatrix, Label, SubsystemLayout};

fn main() -> qswitch_lab::Result<()> {
    let e = erasing_channel(3, 1)?;
    println!("erasing(3, 1): {} Kraus operators, TP defect {:.1e}", e.len(), e.trace_preservation_defect());

    let layout = SubsystemLayout::from_pairs([(Label::A, 3)])?;
    let rho = DensityMatrix::from_ket(&states::fourier_ket(3, 2)?, layout)?;
    let out = e.apply(&rho, &[Label::A])?;
    println!("output <1|ρ|1> = {:.3}", out.matrix()[(1, 1)].re);

    let c = choi(&e);
    println!("Choi {}x{}, min eigenvalue {:.2e}", c.entries().nrows(), c.entries().ncols(), c.min_eigenvalue());

    let h = Complex64::new(0.6, 0.0);
    let ext = vacuum_extend(&e, &[h, Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0)])?;
    let canon = canonicalize_extension(&ext)?;
    let same = channels_equal(ext.realized(), canon.realized(), 1e-10)?;
    println!(
        "canonical amplitudes {:?}: same extended channel = {} (Choi distance {:.1e})",
        canon.amplitudes().iter().map(|a| a.norm()).collect::<Vec<_>>(),
        same.equal,
        same.distance
    );
    Ok(())
}
