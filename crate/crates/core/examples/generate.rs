//! Systems of prescribed Hausdorff dimension with zero Fourier dimension.
//!
//! cargo run --release --example generate

use moran::generator::generate_for_dimension;
use moran::numeric::{fmt_rational, parse_rational};
use moran::SequenceRule;

fn main() -> moran::Result<()> {
    let n_rule: SequenceRule = "affine 1 2".parse()?;
    for s in ["0", "1/4", "1/2", "3/4", "1"] {
        let g = generate_for_dimension(&parse_rational(s)?, n_rule.clone(), 4000)?;
        println!(
            "s = {s:>3}: obstruction bound {:>6}, inf s2 on [{}, {}] = {:.4}, longest AP {}",
            fmt_rational(&g.obstruction.bound),
            g.dimension.start,
            g.dimension.end,
            g.dimension.s2_inf,
            g.ap_profile.max_length()
        );
        if let Some(note) = g.deviation {
            println!("         note: {note}");
        }
    }

    let g = generate_for_dimension(&parse_rational("1/2")?, n_rule, 10)?;
    print!("\n{}", g.spec_text());
    Ok(())
}
