//! Level approximations and fundamental intervals of the middle-thirds Cantor set.
//!
//! cargo run --example construct

use moran::geometry::{interval_of, level_endpoints, MultiIndex, DEFAULT_ENUMERATION_CAP};
use moran::{specfile, numeric::fmt_rational};

fn main() -> moran::Result<()> {
    let cantor = specfile::parse("horizon = 20\nn = constant 3\ndigits = sets {0,2} then repeat\n")?;

    for level in 1..=3 {
        let approx = level_endpoints(&cantor, level, DEFAULT_ENUMERATION_CAP)?;
        let points: Vec<String> = approx.endpoints().map(|x| fmt_rational(&x)).collect();
        println!("level {level}: {}", points.join(" "));
    }

    let interval = interval_of(&cantor, &MultiIndex(vec![2, 0, 2]))?;
    println!(
        "I(2,0,2) = [{}, {}]",
        fmt_rational(&interval.left),
        fmt_rational(&interval.right())
    );

    // Digits outside B_j are rejected.
    println!("{}", interval_of(&cantor, &MultiIndex(vec![1])).unwrap_err());
    Ok(())
}
