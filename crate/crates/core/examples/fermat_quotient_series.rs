//! The Fermat-quotient series for `H_{(p-1)/2}` modulo `p^n`, its agreement
//! with Eisenstein and Lehmer at n = 1, 2, and the failure just outside the
//! bound `p > (n+1)/2`.

use hcl::congruences::{check_hypothesis, ee20_coefficient, verify_thm_ee20};
use hcl::exact::{format_rational, int};
use hcl::Context;

fn main() -> hcl::Result<()> {
    let ctx = Context::new();
    for j in 0..6 {
        let c = int(2) * ee20_coefficient(j, &ctx.bernoulli)?;
        println!(
            "coefficient of H^({})·p^{j}: {}",
            j + 1,
            format_rational(&c)
        );
    }

    for p in [5u64, 7, 11, 13] {
        let row: Vec<String> = (1..=6)
            .map(|n| match verify_thm_ee20(p, n, &ctx) {
                Ok(v) => format!("n={n}:{}", v.achieved_valuation),
                Err(e) => format!("n={n}:{e}"),
            })
            .collect();
        println!("p={p:<3} {}", row.join("  "));
    }

    let v = verify_thm_ee20(3, 5, &ctx)?;
    println!(
        "p=3 n=5: 2·lhs = {}, v_3 = {}, pass = {} (hypothesis: {})",
        format_rational(&(int(2) * &v.lhs)),
        v.achieved_valuation,
        v.pass,
        match check_hypothesis(&v.case) {
            Ok(()) => "met".to_string(),
            Err(e) => e.to_string(),
        }
    );
    Ok(())
}
