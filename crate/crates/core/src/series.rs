//! Truncated power series and Hilbert series numerators.

use serde::{Deserialize, Serialize};

use crate::scalar::Field;

/// Dimensions `h_0..h_D` with a chosen denominator `prod (1 - t^{d_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub dims: Vec<u64>,
    pub denominator_degrees: Vec<u32>,
    pub numerator: Vec<i64>,
    pub field: Field,
}

impl HilbertData {
    pub fn new(dims: Vec<u64>, denominator_degrees: Vec<u32>, field: Field) -> HilbertData {
        let numerator = numerator(&dims, &denominator_degrees);
        HilbertData {
            dims,
            denominator_degrees,
            numerator,
            field,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// Numerator with trailing zeros removed.
    pub fn trimmed_numerator(&self) -> Vec<i64> {
        trim(&self.numerator)
    }

    pub fn has_negative(&self) -> bool {
        self.numerator.iter().any(|&q| q < 0)
    }

    /// Sum of the numerator coefficients (through the computed range).
    pub fn numerator_sum(&self) -> i64 {
        self.numerator.iter().sum()
    }
}

pub fn trim(v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// Multiply a truncated series by `1 - t^j`.
pub fn mul_one_minus(series: &[i64], j: usize) -> Vec<i64> {
    let mut out = series.to_vec();
    for d in (j..series.len()).rev() {
        out[d] -= series[d - j];
    }
    out
}

/// Divide a truncated series by `1 - t^j`.
pub fn div_one_minus(series: &[i64], j: usize) -> Vec<i64> {
    let mut out = series.to_vec();
    for d in j..out.len() {
        out[d] += out[d - j];
    }
    out
}

/// Coefficients of `H(t) prod (1 - t^{d_i})` through the length of `dims`.
pub fn numerator(dims: &[u64], denominator_degrees: &[u32]) -> Vec<i64> {
    let mut s: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    for &d in denominator_degrees {
        s = mul_one_minus(&s, d as usize);
    }
    s
}

/// Coefficients of `N(t) / prod (1 - t^{d_i})` through degree `max_deg`.
pub fn expand(numerator: &[i64], denominator_degrees: &[u32], max_deg: usize) -> Vec<i64> {
    let mut s = vec![0i64; max_deg + 1];
    for (i, &c) in numerator.iter().enumerate().take(max_deg + 1) {
        s[i] = c;
    }
    for &d in denominator_degrees {
        s = div_one_minus(&s, d as usize);
    }
    s
}

/// `1/prod_{j<=r}(1-t^j) * sum_{i<=s} t^{i(r+1)} / prod_{j<=i}(1-t^j)` through `max_deg`.
pub fn closed_form_hrs(r: usize, s: usize, max_deg: usize) -> Vec<i64> {
    let mut total = vec![0i64; max_deg + 1];
    for i in 0..=s {
        let shift = i * (r + 1);
        if shift > max_deg {
            break;
        }
        let mut term = vec![0i64; max_deg + 1];
        term[shift] = 1;
        for j in 1..=i {
            term = div_one_minus(&term, j);
        }
        for (a, b) in total.iter_mut().zip(&term) {
            *a += b;
        }
    }
    for j in 1..=r {
        total = div_one_minus(&total, j);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn polynomial_ring_has_numerator_one() {
        let dims: Vec<u64> = (0..10).map(|d| d as u64 + 1).collect();
        assert_eq!(trim(&numerator(&dims, &[1, 1])), vec![1]);
    }

    #[test]
    fn closed_form_small_cases() {
        // (r, s) = (1, 0): the polynomial ring in one variable.
        assert_eq!(closed_form_hrs(1, 0, 4), vec![1, 1, 1, 1, 1]);
        let h = closed_form_hrs(2, 1, 12);
        assert_eq!(h, vec![1, 1, 2, 3, 5, 7, 10, 13, 17, 21, 26, 31, 37]);
        let h = closed_form_hrs(2, 2, 12);
        assert_eq!(h, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 29, 40, 51, 67]);
    }

    proptest! {
        #[test]
        fn expand_inverts_numerator(dims in proptest::collection::vec(0u64..50, 1..15), degs in proptest::collection::vec(1u32..5, 0..4)) {
            let q = numerator(&dims, &degs);
            let back = expand(&q, &degs, dims.len() - 1);
            let d: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
            prop_assert_eq!(back, d);
        }
    }
}
