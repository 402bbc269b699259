//! Entanglement of two-mode cat states as the weight |a0|^2 and the separation
//! d vary. Large separations approach the binary entropy of the weights.

use cvent::{cat_amplitudes, converge, make_cat, reduce_mixture, ConvergeOptions, Subsystem};

fn main() -> cvent::Result<()> {
    let opts = ConvergeOptions::default();
    let weights = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    print!("{:>5}", "d");
    for p in weights {
        print!(" {p:>7}");
    }
    println!();
    for d in [0.25, 0.5, 1.0, 1.5, 2.0, 4.0] {
        print!("{d:>5}");
        for p in weights {
            let (a0, a1) = cat_amplitudes(p)?;
            let kernel = reduce_mixture(&make_cat(a0, a1, d)?, Subsystem::First)?;
            print!(" {:>7.4}", converge(&kernel, &opts)?.entropy_bits);
        }
        println!();
    }
    let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    println!("binary entropy limit at 0.3: {:.6}", h(0.3));
    Ok(())
}
