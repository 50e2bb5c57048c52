//! Wolstenholme, Eisenstein, Lehmer and Sun over a range of primes.

use hcl::congruences::{
    sun_congruence, verify_eisenstein, verify_lehmer, verify_wolstenholme,
    verify_wolstenholme_refined,
};
use hcl::primes::primes_in;
use hcl::Context;

fn main() -> hcl::Result<()> {
    let ctx = Context::new();
    println!(
        "{:>4}  {:>6} {:>8} {:>10} {:>6} {:>4}",
        "p", "wolst", "refined", "eisenstein", "lehmer", "sun"
    );
    for p in primes_in(3, 60) {
        let show = |v: hcl::Result<hcl::congruences::Verdict>| match v {
            Ok(v) => format!(
                "{}{}",
                if v.pass { "v=" } else { "FAIL v=" },
                v.achieved_valuation
            ),
            Err(_) => "-".to_string(),
        };
        println!(
            "{p:>4}  {:>6} {:>8} {:>10} {:>6} {:>4}",
            show(verify_wolstenholme(p, &ctx)),
            show(verify_wolstenholme_refined(p, &ctx)),
            show(verify_eisenstein(p, &ctx)),
            show(verify_lehmer(p, &ctx)),
            show(sun_congruence(p, &ctx)),
        );
    }
    Ok(())
}
