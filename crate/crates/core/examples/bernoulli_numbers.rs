//! Exact Bernoulli numbers, the Von Staudt-Clausen denominator, and a
//! file-backed cache that survives across runs.
//!
//!     cargo run --example bernoulli_numbers -- /tmp/bernoulli.cache

use hcl::bernoulli::{check_kummer, von_staudt_denominator, BernoulliCache, DEFAULT_INDEX_CEILING};
use hcl::exact::format_rational;

fn main() -> hcl::Result<()> {
    let cache = match std::env::args().nth(1) {
        Some(path) => BernoulliCache::open(path, DEFAULT_INDEX_CEILING)?,
        None => BernoulliCache::new(),
    };

    for n in [0, 1, 2, 4, 12, 20, 32] {
        println!("B_{n:<3} = {}", format_rational(&cache.get(n)?));
    }

    let b = cache.get(100)?;
    println!(
        "denominator of B_100 = {} (Von Staudt-Clausen: {})",
        b.denom(),
        von_staudt_denominator(100)?
    );

    // B_h/h ≡ B_k/k (mod p) when h ≡ k (mod p-1)
    println!(
        "Kummer, p = 37, h = 32, k = 68: {}",
        check_kummer(32, 68, 37, &cache)?
    );

    cache.persist()?;
    if let Some(path) = cache.path() {
        println!(
            "cache at {} holds B_0..B_{}",
            path.display(),
            cache.high_water()
        );
    }
    Ok(())
}
