//! Hausdorff dimension quantities s1, s2 over a window of levels.
//!
//! cargo run --release --example dimension

use moran::dimension::{assumption_collapse_check, dimension_estimate};
use moran::{specfile, Precision};

fn main() -> moran::Result<()> {
    let prec = Precision::default();

    let sys = specfile::parse("horizon = 10000\nn = affine 1 2\ndigits = consecutive floor-pow 1/2\n")?;
    let e = dimension_estimate(&sys, 5000, 10_000, prec)?;
    println!("N_j = j+2, K_j = floor(sqrt N_j)");
    println!("  {} ({})", e.classification.as_str(), e.verdict);
    println!("  inf s1 = {:.6}, inf s2 = {:.6} over [{}, {}]", e.s1_inf, e.s2_inf, e.start, e.end);
    println!("  growth ratio at the end {:.2e}, assumption ok: {}", e.growth.last(), e.assumption_ok);

    let thirds = specfile::parse("horizon = 10000\nn = constant 3\ndigits = consecutive constant 2\n")?;
    let gap = assumption_collapse_check(&thirds, 9000, 10_000, prec)?;
    println!("N = 3, K = 2: s1 - s2 at j = 10^4 is {:.3e}", gap.gap_at_end);

    let tower = specfile::parse("horizon = 5\nn = tower 2\ndigits = consecutive constant 2\n")?;
    let gap = assumption_collapse_check(&tower, 1, 4, prec)?;
    println!(
        "N_j = 2^(2^j), K = 2: relative gap {:.3} at j = 4, collapses: {}",
        gap.relative_gap_at_end, gap.collapses
    );
    Ok(())
}
