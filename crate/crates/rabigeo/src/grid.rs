//! Small grid helpers shared by figures, scans, and tests.

/// `n` equally spaced points covering `[a, b]` inclusive.
///
/// `n = 1` yields `[a]`. Endpoints are exact.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| a + step * i as f64).collect();
            v[n - 1] = b;
            v
        }
    }
}
