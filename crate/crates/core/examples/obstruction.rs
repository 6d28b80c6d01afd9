//! Exact dilation obstruction: when every dilate N_1..N_k E (mod 1) stays in a
//! proper arc, no measure on E has Fourier decay.
//!
//! cargo run --example obstruction

use moran::geometry::{max_dilated_image, rajchman_obstruction, Obstruction};
use moran::numeric::{fmt_rational, to_f64};
use moran::specfile;

fn report(name: &str, spec: &str) -> moran::Result<()> {
    let sys = specfile::parse(spec)?;
    match rajchman_obstruction(&sys) {
        Obstruction::Certified(c) => println!(
            "{name}: certified, c = {}, factor = {}, bound = {}",
            fmt_rational(&c.c),
            fmt_rational(&c.factor),
            fmt_rational(&c.bound)
        ),
        Obstruction::Refused(r) => println!("{name}: refused, {}", r.reason),
    }
    let image = max_dilated_image(&sys, 3)?;
    println!("  max of N_1 N_2 N_3 E (mod 1) <= {:.6}", to_f64(&image.upper));
    Ok(())
}

fn main() -> moran::Result<()> {
    report("Cantor", "horizon = 20\nn = constant 3\ndigits = sets {0,2} then repeat\n")?;
    report("N=5, B={0,1}", "horizon = 20\nn = constant 5\ndigits = consecutive constant 2\n")?;
    report(
        "N=j+2, K=floor(sqrt N)",
        "horizon = 200\nn = affine 1 2\ndigits = consecutive floor-pow 1/2\n",
    )?;
    // Obstruction refused, yet the measure still does not decay (see the nondecay example).
    report(
        "mixed N",
        "horizon = 20\nn = explicit 3,100 then constant 100\ndigits = consecutive explicit 2,77 then constant 77\n",
    )
}
