use crate::sequences::{DigitSystem, SystemOptions};

pub(crate) fn system(n: &str, digits: &str, horizon: usize) -> DigitSystem {
    DigitSystem::new(n.parse().unwrap(), digits.parse().unwrap(), horizon).unwrap()
}

/// `N = 2, B = {0, 1}`: the whole interval, carrying Lebesgue measure.
pub(crate) fn lebesgue(horizon: usize) -> DigitSystem {
    let options = SystemOptions {
        allow_full_levels: true,
        ..SystemOptions::default()
    };
    DigitSystem::with_options(
        "constant 2".parse().unwrap(),
        "sets {0,1} then repeat".parse().unwrap(),
        horizon,
        options,
    )
    .unwrap()
}
