//! Fourier transform of the Cantor measure with certified error bars, checked
//! against a direct sum over level endpoints.
//!
//! cargo run --example spectrum

use moran::geometry::DEFAULT_ENUMERATION_CAP;
use moran::measure::{mu_hat, mu_hat_bruteforce, partial_product};
use moran::specfile;

fn main() -> moran::Result<()> {
    let cantor = specfile::parse("horizon = 60\nn = constant 3\ndigits = sets {0,2} then repeat\n")?;

    println!("{:>8} {:>22} {:>10} {:>6}", "xi", "|mu^(xi)|", "error", "levels");
    for xi in [0.0, 0.5, 1.0, 3.0, 9.0, 27.0, 100.0] {
        let s = mu_hat(&cantor, xi, 1e-10)?;
        println!("{xi:>8} {:>22.15} {:>10.2e} {:>6}", s.modulus(), s.error_bound, s.levels_used);
    }

    // mu^ at the powers of 3 does not decay: the set has no Fourier decay.
    let a = mu_hat(&cantor, 3f64.powi(10), 1e-10)?;
    println!("|mu^(3^10)| = {:.12}", a.modulus());

    let n = 8;
    let product = partial_product(&cantor, 7.25, n)?;
    let direct = mu_hat_bruteforce(&cantor, 7.25, n, DEFAULT_ENUMERATION_CAP)?;
    println!("level {n}: product {product:.15}, direct sum {direct:.15}");
    Ok(())
}
