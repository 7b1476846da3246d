//! Closed-form intercept probabilities over Rayleigh fading.
//!
//! With Rayleigh fading every squared magnitude `|h|²` is exponential with
//! mean equal to its variance, so:
//!
//! - direct: `P(|h_sd|² < |h_se|²) = σ_se² / (σ_se² + σ_sd²)`;
//! - proposed: the relays are independent and the bottleneck
//!   `min(|h_si|², |h_id|²)` is exponential with rate `1/σ_si² + 1/σ_id²`,
//!   giving a product of per-relay factors;
//! - max-min: `P(max_i min(|h_si|², |h_id|²) < |h_me|²)` averaged over the
//!   selected relay `m`, expanded by inclusion–exclusion over every
//!   non-empty subset of relays:
//!   `1 + Σ_A (-1)^|A| / (1 + x_A)` with `x_A = σ_me² Σ_{i∈A}(1/σ_si² + 1/σ_id²)`.
//!
//! The signs over all non-empty subsets sum to `-1`, so the leading `1`
//! cancels exactly and the expansion is evaluated as
//! `Σ_A (-1)^(|A|+1) · x_A / (1 + x_A)`. Each term then scales with `x_A`
//! instead of sitting near `±1`, which keeps small probabilities accurate.

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::selection::SchemeId;

/// Largest relay count the max-min closed form enumerates (`2^20` subsets).
pub const MAX_ENUMERATED_RELAYS: usize = 20;

/// Intercept probability of direct transmission.
pub fn direct_intercept(s: &Scenario) -> f64 {
    s.sigma2_se() / (s.sigma2_se() + s.sigma2_sd())
}

/// Intercept probability with secrecy-optimal relay selection: the product
/// over relays of `P(min(|h_si|², |h_id|²) < |h_ie|²)`.
pub fn proposed_intercept(s: &Scenario) -> Result<f64> {
    if s.relay_count() == 0 {
        return Err(Error::NoRelays);
    }
    Ok(s.relays()
        .iter()
        .map(|r| {
            let intercepted = r.id * r.ie + r.si * r.ie;
            intercepted / (intercepted + r.si * r.id)
        })
        .product())
}

/// One non-empty subset `A` of relays in the max-min expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetTerm {
    /// Bit `i` set iff relay `i` belongs to the subset.
    pub subset_mask: u32,
    /// `(-1)^|A|`.
    pub sign: f64,
    /// `Σ_{i∈A} (1/σ_si² + 1/σ_id²)`.
    pub rate_sum: f64,
}

impl SubsetTerm {
    /// `-(-1)^|A| · x / (1 + x)` with `x = σ_me² · rate_sum`. Summed over all
    /// subsets this equals `1 + Σ_A (-1)^|A| / (1 + x_A)`.
    #[inline]
    pub fn contribution(&self, sigma2_me: f64) -> f64 {
        let x = sigma2_me * self.rate_sum;
        -self.sign * x / (1.0 + x)
    }
}

/// All `2^M - 1` non-empty subsets of the relays, ordered by subset size and
/// then by mask.
pub fn subset_terms(s: &Scenario) -> Result<Vec<SubsetTerm>> {
    let m = s.relay_count();
    if m == 0 {
        return Err(Error::NoRelays);
    }
    if m > MAX_ENUMERATED_RELAYS {
        return Err(Error::TooManyRelays {
            count: m,
            max: MAX_ENUMERATED_RELAYS,
        });
    }
    let rates: Vec<f64> = s.relays().iter().map(|r| 1.0 / r.si + 1.0 / r.id).collect();

    // rate_sums[mask] built from the mask without its lowest bit.
    let full = 1usize << m;
    let mut rate_sums = vec![0.0f64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        rate_sums[mask] = rate_sums[mask & (mask - 1)] + rates[low];
    }

    let mut masks: Vec<u32> = (1..full as u32).collect();
    masks.sort_by_key(|&mask| (mask.count_ones(), mask));
    Ok(masks
        .into_iter()
        .map(|mask| SubsetTerm {
            subset_mask: mask,
            sign: if mask.count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            },
            rate_sum: rate_sums[mask as usize],
        })
        .collect())
}

/// Intercept probability with max-min relay selection.
///
/// Each relay is weighted `1/M` as the selected one, which is exact when
/// relays are identically distributed. Heterogeneous scenarios are accepted
/// and evaluated term by term; see [`Scenario::is_homogeneous`].
///
/// Fails for `M = 0` or `M >` [`MAX_ENUMERATED_RELAYS`].
pub fn maxmin_intercept(s: &Scenario) -> Result<f64> {
    let terms = subset_terms(s)?;
    let m = s.relay_count();
    let mut total = NeumaierSum::default();
    for relay in s.relays() {
        let mut inner = NeumaierSum::default();
        for term in &terms {
            inner.add(term.contribution(relay.ie));
        }
        total.add(inner.value() / m as f64);
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// Intercept probability of `scheme` under `s`.
pub fn intercept_probability(scheme: SchemeId, s: &Scenario) -> Result<f64> {
    match scheme {
        SchemeId::Direct => Ok(direct_intercept(s)),
        SchemeId::MaxMin => maxmin_intercept(s),
        SchemeId::Proposed => proposed_intercept(s),
    }
}

/// Compensated (Kahan–Babuška–Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FigureParams, RelayVariances};
    use proptest::prelude::*;

    fn unit(m: usize) -> Scenario {
        Scenario::homogeneous(1.0, 1.0, m, RelayVariances::new(1.0, 1.0, 1.0)).unwrap()
    }

    /// Homogeneous max-min probability via the binomial form
    /// `Σ_k C(M,k) (-1)^k / (1 + k·σ_e²·rate)`.
    fn binomial_oracle(m: usize, si: f64, id: f64, ie: f64) -> f64 {
        let rate = 1.0 / si + 1.0 / id;
        let mut coeff = 1.0f64;
        let mut sum = 0.0f64;
        for k in 0..=m {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * coeff / (1.0 + k as f64 * ie * rate);
            coeff = coeff * (m - k) as f64 / (k + 1) as f64;
        }
        sum
    }

    /// `∫_0^1 Π_i (1 - u^{σ_e² r_i}) du`, the max-min probability for a fixed
    /// eavesdropper variance after substituting `u = exp(-x/σ_e²)`.
    fn quadrature_oracle(rates: &[f64], sigma2_e: f64) -> f64 {
        let f = |u: f64| {
            rates
                .iter()
                .map(|r| 1.0 - u.powf(sigma2_e * r))
                .product::<f64>()
        };
        adaptive_simpson(&f, 0.0, 1.0, 1e-13, 40)
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn step(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, depth)
    }

    #[test]
    fn direct_examples() {
        assert_eq!(direct_intercept(&unit(0)), 0.5);
        let s = Scenario::new(3.0, 1.0, vec![]).unwrap();
        assert_eq!(direct_intercept(&s), 0.25);
        let s = Scenario::new(1e6, 1.0, vec![]).unwrap();
        assert!((direct_intercept(&s) - 1e-6).abs() < 1e-11);
    }

    #[test]
    fn maxmin_unit_variances() {
        // one relay: min of two unit exponentials has rate 2, so 2/(2+1)
        assert!((maxmin_intercept(&unit(1)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        // 1 - 1/3 - 1/3 + 1/5
        assert!((maxmin_intercept(&unit(2)).unwrap() - 8.0 / 15.0).abs() < 1e-15);
        assert!((binomial_oracle(2, 1.0, 1.0, 1.0) - 8.0 / 15.0).abs() < 1e-15);
        assert!((quadrature_oracle(&[2.0, 2.0], 1.0) - 8.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn maxmin_vanishing_eavesdropper() {
        let s = Scenario::homogeneous(1.0, 1.0, 2, RelayVariances::new(1.0, 1.0, 1e-12)).unwrap();
        assert!(maxmin_intercept(&s).unwrap() < 1e-11);
    }

    #[test]
    fn maxmin_rejects_bad_relay_counts() {
        assert_eq!(maxmin_intercept(&unit(0)), Err(Error::NoRelays));
        assert_eq!(
            maxmin_intercept(&unit(MAX_ENUMERATED_RELAYS + 1)),
            Err(Error::TooManyRelays { count: 21, max: 20 })
        );
        assert!(maxmin_intercept(&unit(MAX_ENUMERATED_RELAYS)).is_ok());
    }

    #[test]
    fn proposed_examples() {
        assert!((proposed_intercept(&unit(1)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((proposed_intercept(&unit(2)).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        let s = FigureParams {
            mer_db: 5.0,
            ..Default::default()
        }
        .to_scenario()
        .unwrap();
        let expected = 2.0 / (2.0 + 10f64.sqrt());
        assert!((proposed_intercept(&s).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.387_425_886_7).abs() < 1e-9);
        assert_eq!(proposed_intercept(&unit(0)), Err(Error::NoRelays));
    }

    #[test]
    fn subset_terms_shape() {
        let s =
            Scenario::from_lists(1.0, 1.0, &[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0], &[1.0; 3]).unwrap();
        let terms = subset_terms(&s).unwrap();
        assert_eq!(terms.len(), 7);
        let sizes: Vec<u32> = terms.iter().map(|t| t.subset_mask.count_ones()).collect();
        assert_eq!(sizes, vec![1, 1, 1, 2, 2, 2, 3]);
        for t in &terms {
            assert_ne!(t.subset_mask, 0);
            assert_eq!(t.sign > 0.0, t.subset_mask.count_ones() % 2 == 0);
            let expected: f64 = (0..3)
                .filter(|i| t.subset_mask & (1 << i) != 0)
                .map(|i| 2.0 / [1.0, 2.0, 4.0][i])
                .sum();
            assert!((t.rate_sum - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn maxmin_matches_binomial_form_up_to_cap() {
        for m in [1usize, 3, 5, 8, 12, 16, 20] {
            for (si, id, ie) in [(1.0, 1.0, 1.0), (2.0, 0.5, 0.316), (1.0, 1.0, 0.01)] {
                let s =
                    Scenario::homogeneous(1.0, 1.0, m, RelayVariances::new(si, id, ie)).unwrap();
                let got = maxmin_intercept(&s).unwrap();
                let want = quadrature_oracle(&vec![1.0 / si + 1.0 / id; m], ie);
                assert!(
                    (got - want).abs() < 1e-9,
                    "M={m} ({si},{id},{ie}): {got} vs quadrature {want}"
                );
                if m <= 8 {
                    assert!((got - binomial_oracle(m, si, id, ie)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn maxmin_heterogeneous_follows_term_by_term_form() {
        let si = [0.5, 1.0, 3.0];
        let id = [2.0, 1.0, 0.7];
        let ie = [0.3, 1.2, 0.8];
        let s = Scenario::from_lists(1.0, 1.0, &si, &id, &ie).unwrap();
        let rates: Vec<f64> = (0..3).map(|i| 1.0 / si[i] + 1.0 / id[i]).collect();
        let want = ie
            .iter()
            .map(|&e| quadrature_oracle(&rates, e))
            .sum::<f64>()
            / 3.0;
        assert!((maxmin_intercept(&s).unwrap() - want).abs() < 1e-10);
    }

    fn variance() -> impl Strategy<Value = f64> {
        (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
    }

    fn scenario_strategy(max_relays: usize) -> impl Strategy<Value = Scenario> {
        (
            variance(),
            variance(),
            prop::collection::vec((variance(), variance(), variance()), 1..=max_relays),
        )
            .prop_map(|(sd, se, rs)| {
                Scenario::new(
                    sd,
                    se,
                    rs.into_iter()
                        .map(|(a, b, c)| RelayVariances::new(a, b, c))
                        .collect(),
                )
                .unwrap()
            })
    }

    fn homogeneous_strategy(max_relays: usize) -> impl Strategy<Value = Scenario> {
        (
            variance(),
            variance(),
            variance(),
            variance(),
            variance(),
            1..=max_relays,
        )
            .prop_map(|(sd, se, si, id, ie, m)| {
                Scenario::homogeneous(sd, se, m, RelayVariances::new(si, id, ie)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn probabilities_in_open_unit_interval(s in scenario_strategy(6)) {
            for p in [direct_intercept(&s), maxmin_intercept(&s).unwrap(), proposed_intercept(&s).unwrap()] {
                prop_assert!(p > 0.0 && p < 1.0, "{p}");
            }
        }

        #[test]
        fn one_relay_closed_forms_coincide(s in scenario_strategy(1)) {
            let a = maxmin_intercept(&s).unwrap();
            let b = proposed_intercept(&s).unwrap();
            prop_assert!(((a - b) / b).abs() < 1e-12);
        }

        #[test]
        fn proposed_dominates_maxmin(s in homogeneous_strategy(8)) {
            let maxmin = maxmin_intercept(&s).unwrap();
            prop_assert!(proposed_intercept(&s).unwrap() <= maxmin + 1e-12);
        }

        #[test]
        fn extra_relay_never_hurts(s in homogeneous_strategy(7)) {
            let more = s.with_extra_relay(s.relays()[0]).unwrap();
            prop_assert!(proposed_intercept(&more).unwrap() < proposed_intercept(&s).unwrap());
            prop_assert!(maxmin_intercept(&more).unwrap() <= maxmin_intercept(&s).unwrap() + 1e-12);
        }

        #[test]
        fn invariant_to_common_scaling(s in scenario_strategy(5), c in variance()) {
            let t = s.scaled(c).unwrap();
            prop_assert!((direct_intercept(&s) - direct_intercept(&t)).abs() < 1e-12);
            prop_assert!((maxmin_intercept(&s).unwrap() - maxmin_intercept(&t).unwrap()).abs() < 1e-12);
            prop_assert!((proposed_intercept(&s).unwrap() - proposed_intercept(&t).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn independent_of_power_and_noise(s in scenario_strategy(4)) {
            for p in [0.1, 1.0, 10.0] {
                let t = s.clone().with_power(p).unwrap().with_noise_var(p * 3.0).unwrap();
                prop_assert_eq!(direct_intercept(&s), direct_intercept(&t));
                prop_assert_eq!(maxmin_intercept(&s).unwrap(), maxmin_intercept(&t).unwrap());
                prop_assert_eq!(proposed_intercept(&s).unwrap(), proposed_intercept(&t).unwrap());
            }
        }
    }

    #[test]
    fn neumaier_recovers_cancelled_digits() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
