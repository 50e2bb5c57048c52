//! The `C_j`-weighted series over `H^(j+2i)_{(p-1)/2}` and its three worked
//! instances, including the Mersenne-prime shortcut at p = 31.

use hcl::congruences::{c_coefficient, verify_thm_eecj, TierMode};
use hcl::exact::format_rational;
use hcl::Context;

fn main() -> hcl::Result<()> {
    let ctx = Context::new();
    for j in 0..6 {
        println!(
            "C_{j} = {}",
            format_rational(&c_coefficient(j, &ctx.bernoulli)?)
        );
    }
    for (p, n, i) in [(37, 1, 1), (31, 1, 1), (5, 1, 2), (101, 2, 1)] {
        let v = verify_thm_eecj(p, n, i, TierMode::Auto, &ctx)?;
        let why = v
            .ladder
            .iter()
            .rev()
            .find_map(|t| t.reason.clone())
            .unwrap_or_default();
        println!(
            "p={p:<3} n={n} i={i}: lhs={} v_p={} tier={} {why} pass={}",
            format_rational(&v.lhs),
            v.achieved_valuation,
            v.tier.unwrap(),
            v.pass
        );
    }
    Ok(())
}
