use rand::Rng;

use super::{Attribute, StreamRng};
use crate::error::{Error, Result};

pub const LED_ATTRIBUTES: usize = 24;

/// Segment states per digit, ordered top, upper-left, upper-right, middle,
/// lower-left, lower-right, bottom.
pub const SEGMENTS: [[bool; 7]; 10] = {
    const O: bool = false;
    const I: bool = true;
    [
        [I, I, I, O, I, I, I],
        [O, O, I, O, O, I, O],
        [I, O, I, I, I, O, I],
        [I, O, I, I, O, I, I],
        [O, I, I, I, O, I, O],
        [I, I, O, I, O, I, I],
        [I, I, O, I, I, I, I],
        [I, O, I, O, O, I, O],
        [I, I, I, I, I, I, I],
        [I, I, I, I, O, I, I],
    ]
};

/// Attribute position of each of the seven segments under one concept.
/// The remaining 17 positions carry random bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedLayout {
    segment_at: [usize; 7],
}

impl Default for LedLayout {
    fn default() -> Self {
        Self {
            segment_at: [0, 1, 2, 3, 4, 5, 6],
        }
    }
}

impl LedLayout {
    pub fn segment_positions(&self) -> &[usize; 7] {
        &self.segment_at
    }

    /// Which segment (if any) lives at each attribute position.
    pub fn roles(&self) -> [Option<usize>; LED_ATTRIBUTES] {
        let mut roles = [None; LED_ATTRIBUTES];
        for (seg, &pos) in self.segment_at.iter().enumerate() {
            roles[pos] = Some(seg);
        }
        roles
    }

    /// Layouts for each concept: concept `c + 1` moves `swaps[c]` segments
    /// of concept `c` onto currently irrelevant positions. Segments are
    /// taken round-robin and free positions in increasing order (wrapping),
    /// so consecutive layouts differ in exactly `2 * swaps[c]` positions.
    pub fn for_schedule(swaps: &[usize], concepts: usize) -> Result<Vec<LedLayout>> {
        if concepts > swaps.len() + 1 {
            return Err(Error::Config(format!(
                "led needs a swap count per drift: {} drifts, {} swap counts",
                concepts - 1,
                swaps.len()
            )));
        }
        let mut layouts = vec![LedLayout::default()];
        let mut next_segment = 0usize;
        let mut next_slot = 7usize;
        for &k in &swaps[..concepts - 1] {
            if k > 7 {
                return Err(Error::Config(format!("cannot swap {k} of 7 segments")));
            }
            let mut layout = layouts.last().expect("non-empty").clone();
            let before = layout.segment_at;
            for _ in 0..k {
                // a freed position may not receive a segment in the same drift
                while layout.segment_at.contains(&next_slot) || before.contains(&next_slot) {
                    next_slot = (next_slot + 1) % LED_ATTRIBUTES;
                }
                layout.segment_at[next_segment] = next_slot;
                next_segment = (next_segment + 1) % 7;
                next_slot = (next_slot + 1) % LED_ATTRIBUTES;
            }
            layouts.push(layout);
        }
        Ok(layouts)
    }

    /// Reads back the digit displayed by `attributes`, if any.
    pub fn decode(&self, attributes: &[Attribute]) -> Option<u32> {
        let lit: Vec<bool> = self
            .segment_at
            .iter()
            .map(|&p| attributes.get(p).is_some_and(|a| a.as_f64() != 0.0))
            .collect();
        SEGMENTS.iter().position(|s| s[..] == lit[..]).map(|d| d as u32)
    }
}

/// Draws a digit uniformly and renders it as 24 binary attributes.
pub fn led_emit(rng: &mut StreamRng, layout: &LedLayout) -> (Vec<Attribute>, u32) {
    let digit = rng.gen_range(0..10u32);
    let mut bits = [false; LED_ATTRIBUTES];
    for b in bits.iter_mut() {
        *b = rng.gen();
    }
    for (seg, &pos) in layout.segment_at.iter().enumerate() {
        bits[pos] = SEGMENTS[digit as usize][seg];
    }
    let attrs = bits.iter().map(|&b| Attribute::Nominal(b as u32)).collect();
    (attrs, digit)
}
