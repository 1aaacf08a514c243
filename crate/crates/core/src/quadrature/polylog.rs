//! Polylogarithms of order 1, 2, 3 on `[0, 1]` and the closed-form mode
//! integral `int_a^inf u^2 / (exp(2uH) - 1) du`.
//!
//! For `y <= 0.75` the defining series `sum y^k / k^s` is summed directly.
//! Above that the expansion in `mu = ln y` around `mu = 0` is used:
//!
//! ```text
//! Li_n(e^mu) = mu^(n-1)/(n-1)! [H_(n-1) - ln(-mu)] + sum_{k != n-1} zeta(n-k) mu^k / k!
//! ```
//!
//! which converges fast since `|mu| < 0.288` there.

use crate::error::{CasimirError, Result};

pub(crate) const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
#[allow(clippy::excessive_precision)]
pub(crate) const ZETA3: f64 = 1.202_056_903_159_594_285_399_738_161_511_449_99;

const REFLECTION_THRESHOLD: f64 = 0.75;

// zeta(-n) for n = 0..=21; zero at negative even integers.
const ZETA_NONPOSITIVE: [f64; 22] = [
    -0.5,
    -1.0 / 12.0,
    0.0,
    1.0 / 120.0,
    0.0,
    -1.0 / 252.0,
    0.0,
    1.0 / 240.0,
    0.0,
    -1.0 / 132.0,
    0.0,
    691.0 / 32760.0,
    0.0,
    -1.0 / 12.0,
    0.0,
    3617.0 / 8160.0,
    0.0,
    -43867.0 / 14364.0,
    0.0,
    174611.0 / 6600.0,
    0.0,
    -77683.0 / 276.0,
];

fn series(order: i32, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..4000 {
        power *= y;
        let term = power / (k as f64).powi(order);
        sum += term;
        // Remaining tail is bounded by term * y / (1 - y).
        if term * y < 1e-17 * (1.0 - y) * sum {
            break;
        }
    }
    sum
}

/// `Li_2(e^mu)` for `mu <= 0`.
fn li2_log(mu: f64) -> f64 {
    if mu == 0.0 {
        return ZETA2;
    }
    if mu < REFLECTION_THRESHOLD.ln() {
        return series(2, mu.exp());
    }
    let mut sum = ZETA2 + mu * (1.0 - (-mu).ln());
    let mut power = mu;
    let mut factorial = 1.0;
    for k in 2..=21 {
        power *= mu;
        factorial *= k as f64;
        sum += ZETA_NONPOSITIVE[k - 2] * power / factorial;
    }
    sum
}

/// `Li_3(e^mu)` for `mu <= 0`.
fn li3_log(mu: f64) -> f64 {
    if mu == 0.0 {
        return ZETA3;
    }
    if mu < REFLECTION_THRESHOLD.ln() {
        return series(3, mu.exp());
    }
    let mut sum = ZETA3 + ZETA2 * mu + 0.5 * mu * mu * (1.5 - (-mu).ln());
    let mut power = mu * mu;
    let mut factorial = 2.0;
    for k in 3..=21 {
        power *= mu;
        factorial *= k as f64;
        sum += ZETA_NONPOSITIVE[k - 3] * power / factorial;
    }
    sum
}

/// Polylogarithm `Li_s(y)` for `s in {1, 2, 3}` and `y in [0, 1]`.
pub fn polylog(s: u32, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(CasimirError::domain(
            "polylog",
            format!("argument {y} outside [0, 1]"),
        ));
    }
    if y == 0.0 {
        return match s {
            1..=3 => Ok(0.0),
            _ => Err(CasimirError::domain(
                "polylog",
                format!("order {s} not in {{1, 2, 3}}"),
            )),
        };
    }
    match s {
        1 if y == 1.0 => Err(CasimirError::Divergence("Li_1(1) = -ln(0)")),
        1 => Ok(-(-y).ln_1p()),
        2 => Ok(li2_log(y.ln())),
        3 => Ok(li3_log(y.ln())),
        _ => Err(CasimirError::domain(
            "polylog",
            format!("order {s} not in {{1, 2, 3}}"),
        )),
    }
}

/// `int_a^inf u^2 / (exp(2uH) - 1) du`, evaluated as
/// `[x^2 Li_1(e^-x) + 2x Li_2(e^-x) + 2 Li_3(e^-x)] / (2H)^3` with `x = 2aH`.
pub fn inner_mode_integral(a: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(CasimirError::domain(
            "inner_mode_integral",
            format!("H = {h} must be > 0"),
        ));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(CasimirError::domain(
            "inner_mode_integral",
            format!("a = {a} must be >= 0"),
        ));
    }
    let x = 2.0 * a * h;
    // Li_1(e^-x) = -ln(1 - e^-x), formed on whichever side keeps precision.
    let li1_term = if x == 0.0 {
        0.0
    } else if x < std::f64::consts::LN_2 {
        -x * x * (-(-x).exp_m1()).ln()
    } else {
        -x * x * (-(-x).exp()).ln_1p()
    };
    let bracket = li1_term + 2.0 * x * li2_log(-x) + 2.0 * li3_log(-x);
    Ok(bracket / (2.0 * h).powi(3))
}
