//! Composite Simpson and trapezoid rules.

/// Composite Simpson weights for `panels` equal sub-intervals of width `h`.
/// `panels` must be even.
pub fn simpson_weights(panels: usize, h: f64) -> Vec<f64> {
    assert!(panels >= 2 && panels % 2 == 0, "Simpson needs an even panel count");
    let mut w = vec![0.0; panels + 1];
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = if j == 0 || j == panels {
            h / 3.0
        } else if j % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    w
}

/// Rounds a requested panel count up to the next multiple of `multiple`.
pub fn round_panels(requested: usize, multiple: usize) -> usize {
    requested.max(multiple).div_ceil(multiple) * multiple
}

/// ∫_a^b f with composite Simpson; `panels` is rounded up to even.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = round_panels(panels, 2);
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for j in 1..n {
        let v = f(a + j as f64 * h);
        if j % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid_samples(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 2);
        // ∫ = [x⁴/4 − x² + x] from −1 to 2 = 2 − (−1.75) = 3.75
        assert!((v - 3.75).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_length() {
        let w = simpson_weights(8, 0.25);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_panels(0, 2), 2);
        assert_eq!(round_panels(5, 4), 8);
        assert_eq!(round_panels(8, 4), 8);
    }

    #[test]
    fn trapezoid_linear() {
        assert!((trapezoid_samples(&[0.0, 1.0, 2.0], 0.5) - 1.0).abs() < 1e-15);
    }
}
