//! Text rendering shared by reports and the command line.

/// 17 significant digits, enough to round-trip any `f64`.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma-joined [`sig17`] values.
pub fn join_sig17(values: &[f64]) -> String {
    values.iter().map(|v| sig17(*v)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for v in [0.1, 1.0 / 3.0, 12345.678e-300, -2.5e17] {
            assert_eq!(sig17(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
    }
}
