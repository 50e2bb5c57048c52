//! Irregular pairs `(p, 2k)`: `p >= 2k + 3` and `p` divides the numerator of `B_{2k}`.

use hcl::bernoulli::{irregular_pairs, BernoulliCache};

fn main() -> hcl::Result<()> {
    let hi = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(300);
    let cache = BernoulliCache::new();
    for (p, two_k) in irregular_pairs(3, hi, &cache)? {
        println!("({p}, {two_k})");
    }
    Ok(())
}
