//! Binary PPM (P6) emission for regime charts, one pixel per grid cell,
//! colored by the regime palette.

use crate::lyapunov::RegimeClass;

/// Renders a row-major grid of classes (row 0 is the top scanline) into a
/// P6 byte stream.
pub fn render_p6(classes: &[RegimeClass], width: usize, height: usize) -> Vec<u8> {
    assert_eq!(classes.len(), width * height, "grid size mismatch");
    let mut out = Vec::with_capacity(32 + 3 * classes.len());
    out.extend_from_slice(format!("P6\n{width} {height}\n255\n").as_bytes());
    for class in classes {
        out.extend_from_slice(&class.rgb());
    }
    out
}
