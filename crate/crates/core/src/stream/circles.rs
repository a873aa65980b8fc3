use crate::error::{Error, Result};

/// `((x_c, y_c), r_c)` for the four concepts.
pub const CIRCLES: [((f64, f64), f64); 4] = [
    ((0.2, 0.5), 0.15),
    ((0.4, 0.5), 0.2),
    ((0.6, 0.5), 0.25),
    ((0.8, 0.5), 0.3),
];

/// Positive iff the point lies inside (or on) the concept's circle.
pub fn circles_label(x: f64, y: f64, concept: usize) -> Result<bool> {
    let ((cx, cy), r) = *CIRCLES.get(concept).ok_or_else(|| {
        Error::Config(format!("circles has {} concepts, got concept {concept}", CIRCLES.len()))
    })?;
    Ok((x - cx).powi(2) + (y - cy).powi(2) <= r * r)
}
