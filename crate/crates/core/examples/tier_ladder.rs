//! How the modulus of the Bernoulli-weighted series in `H^(j+2i+1)_{p-1}`
//! strengthens from `p^{2n+1}` to `p^{2n+5}` as conditions on `p` are met.
//!
//!     cargo run --example tier_ladder -- 37 0 0

use hcl::congruences::{verify_thm_ee10bis, TierMode};
use hcl::exact::format_rational;
use hcl::Context;

fn main() -> hcl::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (p, n, i) = match args[..] {
        [p, n, i] => (p, n, i),
        _ => (37, 0, 0),
    };
    let ctx = Context::new();
    let v = verify_thm_ee10bis(p, n, i, TierMode::Auto, &ctx)?;
    println!("p={p} n={n} i={i}");
    println!("lhs = {}", format_rational(&v.lhs));
    println!("achieved valuation {}", v.achieved_valuation);
    for rung in &v.ladder {
        println!(
            "  m={} condition={:<5} p^{:<2} holds={}{}",
            rung.m,
            rung.condition,
            rung.exponent,
            rung.pass,
            rung.reason
                .as_deref()
                .map(|r| format!("  [{r}]"))
                .unwrap_or_default()
        );
    }
    println!("resolved tier m={}, pass={}", v.tier.unwrap(), v.pass);
    Ok(())
}
