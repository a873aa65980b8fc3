use std::f64::consts::PI;

/// Positive iff at least two of `v`, `w`, `y < 0.5 + 0.3 sin(3 pi x)` hold;
/// odd concepts reverse the classification.
pub fn mixed_label(v: bool, w: bool, x: f64, y: f64, concept: usize) -> bool {
    let under = y < 0.5 + 0.3 * (3.0 * PI * x).sin();
    let votes = v as u8 + w as u8 + under as u8;
    (votes >= 2) ^ (concept % 2 == 1)
}
