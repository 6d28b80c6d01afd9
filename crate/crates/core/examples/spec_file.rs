//! Reading and writing the text spec format.
//!
//! cargo run --example spec_file

use moran::specfile;

const SPEC: &str = "\
# two listed levels, then rules for the rest
horizon = 12
n = explicit 3,100 then constant 5
n.min3 = true
digits = consecutive explicit 2,77 then floor-frac 2/5
";

fn main() -> moran::Result<()> {
    let sys = specfile::parse(SPEC)?;
    for level in sys.levels().iter().take(4) {
        println!("N = {:>3}, K = {:>2}", level.n, level.digits.len());
    }
    println!("c = {}", sys.compute_c());
    print!("{}", specfile::emit(&sys));

    for bad in ["horizon = 3\nn = constant 3\ndigits = consecutive constant 3\n", "horizon = 3\ncolour = red\n"] {
        let err = specfile::parse(bad).unwrap_err();
        println!("error[{}] (exit {}): {err}", err.reason_code(), err.exit_code());
    }
    Ok(())
}
