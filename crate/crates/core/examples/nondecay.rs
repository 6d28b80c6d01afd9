//! Uniform lower bound on |mu^(N_1..N_n)| for consecutive digits, compared with
//! the computed values at each scale.
//!
//! cargo run --example nondecay

use moran::measure::{c0_enclosure, mu_hat_at_scale, nondecay_certificate, NonDecay, C0_TAIL_TOLERANCE};
use moran::{specfile, Precision};

fn main() -> moran::Result<()> {
    let c0 = c0_enclosure(Precision::default(), C0_TAIL_TOLERANCE)?;
    println!("c0 = {:.15} (+/- {:.1e}, {} factors)", c0.midpoint(), c0.width(), c0.terms);

    let sys = specfile::parse("horizon = 40\nn = constant 10\ndigits = consecutive constant 7\n")?;
    let NonDecay::Certified(bound) = nondecay_certificate(&sys, Precision::default())? else {
        unreachable!("K/N = 0.7 is below sqrt(6)/pi");
    };
    println!("lower bound L = {:.12}", bound.lower_bound);

    for n in 0..=12 {
        let s = mu_hat_at_scale(&sys, n, 1e-12)?;
        let ok = s.sample.modulus() >= bound.lower_bound - s.sample.error_bound;
        println!("n = {n:>2}  |mu^(10^n)| = {:.12}  {}", s.sample.modulus(), if ok { "ok" } else { "VIOLATED" });
    }

    // Here the dilation obstruction fails (3/2 * 76/100 > 1) but the bound still applies.
    let mixed = specfile::parse(
        "horizon = 40\nn = explicit 3,100 then constant 100\ndigits = consecutive explicit 2,77 then constant 77\n",
    )?;
    if let NonDecay::Certified(b) = nondecay_certificate(&mixed, Precision::default())? {
        let worst = (0..=12)
            .map(|n| mu_hat_at_scale(&mixed, n, 1e-12).map(|s| s.sample.modulus()))
            .collect::<moran::Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        println!("mixed N: L = {:.12}, smallest |mu^| over n <= 12 is {worst:.12}", b.lower_bound);
    }

    let wide = specfile::parse("horizon = 10\nn = constant 100\ndigits = consecutive constant 78\n")?;
    if let NonDecay::Refused(r) = nondecay_certificate(&wide, Precision::default())? {
        println!("K/N = 0.78: {}", r.reason);
    }
    Ok(())
}
