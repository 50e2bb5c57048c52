//! Fermat quotients, Wieferich and Mersenne primes, and the p-adic series
//! for `(2^{p^{n-1}(p-1)} - 1)/p^n`.

use hcl::primes::{check_fermat_expansion, classify, fermat_expansion_residue, primes_in};

fn main() -> hcl::Result<()> {
    for p in [3u64, 5, 7, 31, 127, 1093, 3511] {
        let c = classify(p)?;
        println!(
            "p={p:<5} q_p has {:>4} digits  wieferich={:<5} mersenne={}",
            c.fermat_quotient.to_string().len(),
            c.is_wieferich,
            c.is_mersenne
        );
    }
    let wieferich: Vec<u64> = primes_in(3, 4000)
        .into_iter()
        .filter(|&p| classify(p).unwrap().is_wieferich)
        .collect();
    println!("Wieferich primes below 4000: {wieferich:?}");

    println!("(2^20 - 1)/25 mod 25 = {}", fermat_expansion_residue(5, 2)?);
    for p in [3u64, 5, 7, 101] {
        let ok: Vec<bool> = (1..=6)
            .filter(|&n| 2 * p > n as u64 + 1)
            .map(|n| check_fermat_expansion(p, n).unwrap())
            .collect();
        println!("p={p:<4} expansion holds for n=1..: {ok:?}");
    }
    Ok(())
}
