//! Canonical arithmetic progressions and an exhaustive search over level endpoints.
//!
//! cargo run --example progressions

use moran::geometry::{level_endpoints, DEFAULT_ENUMERATION_CAP};
use moran::numeric::fmt_rational;
use moran::progressions::{ap_length_profile, canonical_ap, find_aps};
use moran::specfile;

fn main() -> moran::Result<()> {
    let sys = specfile::parse("horizon = 400\nn = affine 1 2\ndigits = consecutive floor-pow 1/2\n")?;

    let w = canonical_ap(&sys, 7)?;
    println!(
        "level 7: start {}, gap {}, length {}, verified: {}",
        fmt_rational(&w.start),
        fmt_rational(&w.gap),
        w.length,
        w.verify_canonical(&sys)
    );

    let profile = ap_length_profile(&sys, 400)?;
    println!(
        "longest canonical progression up to level 400: {} terms (conditions hold: {})",
        profile.max_length(),
        profile.conditions_hold()
    );

    let approx = level_endpoints(&sys, 5, DEFAULT_ENUMERATION_CAP)?;
    println!("level 5: {} endpoints", approx.len());
    for ap in find_aps(&approx, 3, 5)? {
        println!("found: start {}, gap {}, length {}", fmt_rational(&ap.start), fmt_rational(&ap.gap), ap.length);
    }

    let cantor = specfile::parse("horizon = 10\nn = constant 3\ndigits = sets {0,2} then repeat\n")?;
    let approx = level_endpoints(&cantor, 2, DEFAULT_ENUMERATION_CAP)?;
    println!("Cantor level 2, 3-term progressions: {}", find_aps(&approx, 3, 10)?.len());
    Ok(())
}
