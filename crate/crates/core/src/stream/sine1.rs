/// Positive iff the point lies strictly below `y = sin(x)`; odd concepts
/// reverse the classification.
pub fn sine1_label(x: f64, y: f64, concept: usize) -> bool {
    let below = y < x.sin();
    below ^ (concept % 2 == 1)
}
