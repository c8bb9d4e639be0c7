/// Sigmoid transfer: bit `d` is set iff `1/(1+e^(−x_d)) > 0.5`, i.e. iff
/// `x_d > 0`. Zero (and NaN) maps to 0.
pub fn binarize_sigmoid(x: &[f64]) -> Vec<bool> {
    x.iter().map(|v| *v > 0.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_threshold_with_tie_to_zero() {
        assert_eq!(binarize_sigmoid(&[-1.0, 0.0, 1.0]), vec![false, false, true]);
        assert_eq!(binarize_sigmoid(&[0.0; 4]), vec![false; 4]);
        assert_eq!(binarize_sigmoid(&[-0.0]), vec![false]);
    }

    proptest! {
        #[test]
        fn invariant_under_positive_scaling(
            x in prop::collection::vec(-5.0f64..5.0, 1..40),
            scale in 1e-3f64..1e3,
        ) {
            let scaled: Vec<f64> = x.iter().map(|v| v * scale).collect();
            prop_assert_eq!(binarize_sigmoid(&x), binarize_sigmoid(&scaled));
        }

        #[test]
        fn monotone_per_dimension(a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let blo = binarize_sigmoid(&[lo])[0];
            let bhi = binarize_sigmoid(&[hi])[0];
            prop_assert!(!blo || bhi);
        }
    }
}
