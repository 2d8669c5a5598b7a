//! Closed-form sample sizes for k-uniform approximate equilibria.
//!
//! Every bound is `floor(expr) + 1`, the smallest integer strictly above the
//! floor, with natural logarithms throughout.

use serde::{Deserialize, Serialize};

use crate::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    CceExist,
    CceAlg,
    CeExist,
    CeAlg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBound {
    pub kind: BoundKind,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub k: u64,
    /// Per-player support budget of the seed equilibrium (`CeExist` only).
    pub b: Option<u64>,
}

impl SampleBound {
    pub fn compute(kind: BoundKind, n: usize, m: usize, epsilon: f64) -> Result<Self> {
        let (k, b) = match kind {
            BoundKind::CceExist => (k_bound_cce_exist(n, m, epsilon)?, None),
            BoundKind::CceAlg => (k_bound_cce_alg(n, m, epsilon)?, None),
            BoundKind::CeExist => {
                let (k, b) = k_bound_ce_exist(n, m, epsilon)?;
                (k, Some(b))
            }
            BoundKind::CeAlg => (k_bound_ce_alg(n, m, epsilon)?, None),
        };
        Ok(SampleBound { kind, n, m, epsilon, k, b })
    }
}

fn check(n: usize, m: usize, epsilon: f64) -> Result<()> {
    if n == 0 || m == 0 {
        return invalid("n and m must be positive");
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return invalid(format!("epsilon {} is outside (0, 1]", epsilon));
    }
    Ok(())
}

fn floor_plus_one(value: f64) -> u64 {
    value.floor() as u64 + 1
}

/// `floor(2(ln m + ln n) / ε²) + 1`: a k-uniform ε-CCE exists.
pub fn k_bound_cce_exist(n: usize, m: usize, epsilon: f64) -> Result<u64> {
    check(n, m, epsilon)?;
    let (ln_n, ln_m) = ((n as f64).ln(), (m as f64).ln());
    Ok(floor_plus_one(2.0 * (ln_m + ln_n) / (epsilon * epsilon)))
}

/// `floor(2(ln m + ln n + ln 2) / ε²) + 1`: one draw succeeds w.p. >= 1/2.
pub fn k_bound_cce_alg(n: usize, m: usize, epsilon: f64) -> Result<u64> {
    check(n, m, epsilon)?;
    let (ln_n, ln_m) = ((n as f64).ln(), (m as f64).ln());
    Ok(floor_plus_one(2.0 * (ln_m + ln_n + std::f64::consts::LN_2) / (epsilon * epsilon)))
}

/// `k = floor(264 ln m (ln m + ln n - ln ε + ln 16) / ε⁴) + 1` and
/// `b = ceil(32 (ln n + ln m - ln ε + ln 16) / ε²)`.
pub fn k_bound_ce_exist(n: usize, m: usize, epsilon: f64) -> Result<(u64, u64)> {
    check(n, m, epsilon)?;
    if m < 2 {
        return invalid("the CE existence bound needs m >= 2");
    }
    let (ln_n, ln_m) = ((n as f64).ln(), (m as f64).ln());
    let inner = ln_m + ln_n - epsilon.ln() + 16f64.ln();
    let e2 = epsilon * epsilon;
    let k = floor_plus_one(264.0 * ln_m * inner / (e2 * e2));
    let b = (32.0 * inner / e2).ceil() as u64;
    Ok((k, b))
}

/// `floor(2(m ln m + ln n + ln 2) / ε²) + 1`: one draw from any CE succeeds w.p. >= 1/2.
pub fn k_bound_ce_alg(n: usize, m: usize, epsilon: f64) -> Result<u64> {
    check(n, m, epsilon)?;
    let (ln_n, ln_m) = ((n as f64).ln(), (m as f64).ln());
    Ok(floor_plus_one(
        2.0 * (m as f64 * ln_m + ln_n + std::f64::consts::LN_2) / (epsilon * epsilon),
    ))
}

/// How far the sampled-from distribution is from exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanGap {
    /// Exact equilibrium: expected regret <= 0.
    Zero,
    /// ε/2-equilibrium: expected regret <= ε/2.
    HalfEpsilon,
}

/// Hoeffding tail for one deviation: `e^{-kε²/2}` from an exact equilibrium,
/// `e^{-kε²/8}` from an ε/2-equilibrium.
pub fn hoeffding_failure_bound(k: u64, epsilon: f64, gap: MeanGap) -> Result<f64> {
    if k == 0 {
        return invalid("k must be positive");
    }
    check(1, 1, epsilon)?;
    let exponent = k as f64 * epsilon * epsilon;
    Ok(match gap {
        MeanGap::Zero => (-exponent / 2.0).exp(),
        MeanGap::HalfEpsilon => (-exponent / 8.0).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(k_bound_cce_exist(2, 2, 0.1).unwrap(), 278);
        assert_eq!(k_bound_cce_exist(10, 10, 0.3).unwrap(), 103);
        assert_eq!(k_bound_cce_exist(1, 1, 1.0).unwrap(), 1);
        assert_eq!(k_bound_cce_alg(10, 10, 0.3).unwrap(), 118);
        assert_eq!(k_bound_cce_alg(2, 2, 0.5).unwrap(), 17);
        assert_eq!(k_bound_ce_exist(2, 2, 0.5).unwrap(), (14207, 622));
        assert_eq!(k_bound_ce_alg(2, 4, 0.2).unwrap(), 347);
        assert_eq!(k_bound_ce_alg(2, 2, 0.5).unwrap(), 23);
        assert_eq!(k_bound_ce_alg(2, 2, 0.3).unwrap(), 62);
    }

    #[test]
    fn ce_exist_at_epsilon_one_drops_the_log_epsilon_term() {
        let inner = 2.0 * 2f64.ln() + 16f64.ln();
        let expected_k = (264.0 * 2f64.ln() * inner).floor() as u64 + 1;
        let expected_b = (32.0 * inner).ceil() as u64;
        assert_eq!(k_bound_ce_exist(2, 2, 1.0).unwrap(), (expected_k, expected_b));
    }

    #[test]
    fn argument_errors() {
        assert!(k_bound_cce_exist(2, 2, 0.0).is_err());
        assert!(k_bound_cce_alg(2, 2, -0.1).is_err());
        assert!(k_bound_ce_alg(2, 2, 1.5).is_err());
        assert!(k_bound_ce_exist(2, 1, 0.5).is_err());
        assert!(k_bound_cce_exist(0, 2, 0.5).is_err());
        assert!(hoeffding_failure_bound(0, 0.5, MeanGap::Zero).is_err());
    }

    #[test]
    fn hoeffding_values() {
        let p = hoeffding_failure_bound(103, 0.3, MeanGap::Zero).unwrap();
        assert!((p - (-4.635f64).exp()).abs() < 1e-15);
        assert!(p < 0.01);
        let q = hoeffding_failure_bound(103, 0.3, MeanGap::HalfEpsilon).unwrap();
        assert!((q - (-4.635f64 / 4.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn sample_bound_records_b_only_for_ce_exist() {
        let s = SampleBound::compute(BoundKind::CeExist, 2, 2, 0.5).unwrap();
        assert_eq!(s.b, Some(622));
        let t = SampleBound::compute(BoundKind::CceAlg, 2, 2, 0.5).unwrap();
        assert_eq!((t.k, t.b), (17, None));
    }
}
