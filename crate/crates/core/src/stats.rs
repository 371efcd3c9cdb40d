//! Empirical distribution comparisons: total variation distance and a
//! chi-square goodness-of-fit test.

use std::collections::BTreeMap;
use std::hash::Hash;

/// Empirical TVD between two sample sets over the same outcome space.
pub fn empirical_tvd<K: Ord + Clone>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    if na == 0 || nb == 0 {
        return 1.0;
    }
    let mut keys: Vec<K> = a.keys().cloned().collect();
    for k in b.keys() {
        if !a.contains_key(k) {
            keys.push(k.clone());
        }
    }
    let mut acc = 0.0;
    for k in &keys {
        let pa = *a.get(k).unwrap_or(&0) as f64 / na as f64;
        let pb = *b.get(k).unwrap_or(&0) as f64 / nb as f64;
        acc += (pa - pb).abs();
    }
    acc / 2.0
}

/// TVD of an empirical sample against a reference distribution. Reference
/// probabilities absent from `probs` are treated as zero.
pub fn tvd_vs_reference<K: Ord + Clone>(counts: &BTreeMap<K, u64>, probs: &BTreeMap<K, f64>) -> f64 {
    let n: u64 = counts.values().sum();
    if n == 0 {
        return 1.0;
    }
    let mut keys: Vec<K> = counts.keys().cloned().collect();
    for k in probs.keys() {
        if !counts.contains_key(k) {
            keys.push(k.clone());
        }
    }
    let mut acc = 0.0;
    for k in &keys {
        let pa = *counts.get(k).unwrap_or(&0) as f64 / n as f64;
        let pb = *probs.get(k).unwrap_or(&0.0);
        acc += (pa - pb).abs();
    }
    acc / 2.0
}

pub fn counts_from_samples<K: Ord + Clone + Hash, I: IntoIterator<Item = K>>(
    samples: I,
) -> BTreeMap<K, u64> {
    let mut m = BTreeMap::new();
    for s in samples {
        *m.entry(s).or_insert(0) += 1;
    }
    m
}

/// Regularized lower incomplete gamma P(a, x), by series expansion for
/// x < a + 1 and continued fraction otherwise.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // Series: P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a)_{n+1}
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..500 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-15 {
                break;
            }
        }
        sum * (a * x.ln() - x - ln_gamma(a)).exp()
    } else {
        // Continued fraction for Q(a,x), Lentz's method.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-15 {
                break;
            }
        }
        let q = (a * x.ln() - x - ln_gamma(a)).exp() * h;
        1.0 - q
    }
}

/// Lanczos approximation of ln Gamma (g = 5, valid for x > 0).
fn ln_gamma(x: f64) -> f64 {
    const COF: [f64; 6] = [
        76.180_091_729_471_46,
        -86.505_320_329_416_77,
        24.014_098_240_830_91,
        -1.231_739_572_450_155,
        0.120_865_097_386_617_9e-2,
        -0.539_523_938_495_3e-5,
    ];
    debug_assert!(x > 0.0);
    let mut y = x;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000_000_000_190_015;
    for c in COF {
        y += 1.0;
        ser += c / y;
    }
    -tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Chi-square goodness-of-fit. Returns (statistic, p-value). Categories with
/// zero expected probability must have zero observations.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), probs.len());
    let n: u64 = observed.iter().sum();
    assert!(n >= 100, "chi-square needs at least 100 samples");
    let nf = n as f64;
    let mut stat = 0.0;
    let mut df = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            assert_eq!(o, 0, "observation in zero-probability category");
            continue;
        }
        let exp = nf * p;
        let d = o as f64 - exp;
        stat += d * d / exp;
        df += 1;
    }
    assert!(df >= 2);
    let p_value = 1.0 - gamma_p((df - 1) as f64 / 2.0, stat / 2.0);
    (stat, p_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn tvd_identical_and_disjoint() {
        let a = counts_from_samples([0u8, 0, 1, 1]);
        assert_eq!(empirical_tvd(&a, &a), 0.0);
        let b = counts_from_samples([2u8, 3, 2]);
        assert!((empirical_tvd(&a, &b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_p_known_values() {
        // P(0.5, x) = erf(sqrt(x)); P(0.5, 0.5) ~ 0.682689, P(1, 1) = 1 - e^-1.
        assert!((gamma_p(0.5, 0.5) - 0.6826894921).abs() < 1e-8);
        assert!((gamma_p(1.0, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        // chi-square survival value: P[X2_3 > 7.814] = 0.05.
        assert!((1.0 - gamma_p(1.5, 7.814727903 / 2.0) - 0.05).abs() < 1e-6);
    }

    #[test]
    fn chi_square_reference() {
        // Worked example: observed (28, 31, 40, 35) on 4 equal categories
        // gives statistic 2.41791... and p ~ 0.49.
        let (stat, p) = chi_square(&[28, 31, 40, 35], &[0.25; 4]);
        assert!((stat - 2.417910447761194).abs() < 1e-9);
        assert!((p - 0.4903093069653883).abs() < 1e-6);
    }

    #[test]
    fn fair_coin_usually_passes() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let mut obs = [0u64; 2];
        for _ in 0..10_000 {
            obs[rng.gen_range(0..2)] += 1;
        }
        let (_, p) = chi_square(&obs, &[0.5, 0.5]);
        assert!(p >= 0.01, "p = {p}");
    }
}
