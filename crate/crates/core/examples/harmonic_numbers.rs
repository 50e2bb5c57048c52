//! Generalized harmonic numbers, exactly and modulo a prime power.

use hcl::exact::{format_rational, reduce_mod, vp, PrimePower};
use hcl::harmonic::{harmonic, harmonic_mod, HarmonicSpec};

fn main() -> hcl::Result<()> {
    for (order, upto) in [(1, 6), (2, 6), (1, 36), (3, 18)] {
        let spec = HarmonicSpec::new(order, upto)?;
        println!("H^({order})_{upto} = {}", format_rational(&harmonic(spec)));
    }

    // Wolstenholme: p^2 divides the numerator of H_{p-1} for p >= 5
    for p in [5u64, 7, 11, 13, 37] {
        let h = harmonic(HarmonicSpec::new(1, p - 1)?);
        println!("v_{p}(H_{}) = {}", p - 1, vp(&h, p));
    }

    // both routes agree modulo p^e
    let m = PrimePower::new(31, 4)?;
    let spec = HarmonicSpec::new(3, 15)?;
    println!(
        "H^(3)_15 mod 31^4: modular {} / exact {}",
        harmonic_mod(spec, m)?,
        reduce_mod(&harmonic(spec), m)?
    );
    Ok(())
}
