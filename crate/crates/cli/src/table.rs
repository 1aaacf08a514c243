//! Locale-independent number formatting for CSV output.
//!
//! Values print in Rust's shortest round-trip form, switching to exponent
//! notation outside `[1e-5, 1e16)` so tiny or huge magnitudes stay compact.

pub fn number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs();
    if (1e-5..1e16).contains(&magnitude) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
