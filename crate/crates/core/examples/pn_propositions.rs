//! Congruences modulo `p^n` whose constants involve `B_{p^{n-1}(p-1) - 2i}`,
//! Bernoulli numbers of index up to about 2000 for p = 13, n = 3.

use std::time::Instant;

use hcl::congruences::{verify_intermediate_47, verify_prop41, verify_prop42};
use hcl::Context;

fn main() -> hcl::Result<()> {
    let ctx = Context::new();
    let start = Instant::now();
    for p in [3u64, 5, 7, 11, 13] {
        for n in (1..=3).filter(|&n| 2 * p > n + 1) {
            let v = verify_prop41(p, n, &ctx)?;
            print!(
                "p={p:<3} n={n}  H_(p-1)/2 series: v={:<3}",
                v.achieved_valuation.to_string()
            );
            if n >= 2 {
                let v = verify_prop42(p, n, 1, &ctx)?;
                print!(" H^(3) series: v={:<3}", v.achieved_valuation.to_string());
            }
            if n == 2 {
                let v = verify_intermediate_47(p, n, &ctx)?;
                print!(" reduction: v={}", v.achieved_valuation);
            }
            println!();
        }
    }
    println!(
        "B_0..B_{} computed in {:?}",
        ctx.bernoulli.high_water(),
        start.elapsed()
    );
    Ok(())
}
