//! Numeric text formatting for emitted CSV files.

/// 17 significant digits: round-trips any f64 exactly, so emitted files are
/// bit-stable regression artifacts.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::float;

    #[test]
    fn round_trips_exactly() {
        for x in [
            1.0,
            -1.0 / 3.0,
            6.02e23,
            f64::MIN_POSITIVE,
            1.8556595368853628e7,
            -0.0,
            4.062527086162295,
        ] {
            let s = float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
        assert!(float(f64::NAN).parse::<f64>().unwrap().is_nan());
    }
}
