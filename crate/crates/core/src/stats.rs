//! Exact genus distributions and the statistics derived from them.
//!
//! Moments, medians, modes and quasi-symmetry are computed with exact
//! rationals. Floats appear only in the convergence diagnostics at the end
//! (gaps to the limiting mean and variance, binomial and normal distances).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Number;
use thiserror::Error;

use crate::counts::{binomial, knots_total, max_genus, t_of, t_total, tbar_of, tp_of, tp_total, Count, CountError};
use crate::oracle;
use crate::word::{EnumerationCap, EnumerationError, WordEnsemble, MIN_CROSSINGS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("crossing number {c} is below the minimum of {min}")]
    TooFewCrossings { c: usize, min: usize },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Where the counts of a distribution come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Closed-form counts.
    Formula,
    /// Exhaustive enumeration, subject to the cap.
    Oracle { cap: EnumerationCap, threads: usize },
}

impl Source {
    /// Enumeration with the default cap on one thread.
    pub fn oracle() -> Self {
        Source::Oracle { cap: EnumerationCap::default(), threads: 1 }
    }
}

/// Counts by genus for one crossing number and ensemble. `counts[i]` is the
/// count for genus `i + 1`, for every genus `1..=floor((c-1)/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusDistribution {
    pub c: usize,
    pub ensemble: WordEnsemble,
    counts: Vec<Count>,
}

impl GenusDistribution {
    /// Builds a distribution, padding with zeros up to the maximal genus.
    pub fn new(c: usize, ensemble: WordEnsemble, mut counts: Vec<Count>) -> Self {
        assert!(counts.len() <= max_genus(c), "genus beyond floor((c-1)/2)");
        counts.resize(max_genus(c), Count::zero());
        GenusDistribution { c, ensemble, counts }
    }

    /// Count for genus `g`; zero outside the support.
    pub fn count(&self, g: usize) -> Count {
        g.checked_sub(1).and_then(|i| self.counts.get(i)).cloned().unwrap_or_default()
    }

    /// `(genus, count)` pairs for every genus `1..=floor((c-1)/2)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Count)> {
        self.counts.iter().enumerate().map(|(i, n)| (i + 1, n))
    }

    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    pub fn total(&self) -> Count {
        self.counts.iter().sum()
    }

    /// Expected total for the ensemble: `t(c)`, `t_p(c)` or `|K_c|`.
    pub fn expected_total(&self) -> Count {
        match self.ensemble {
            WordEnsemble::AllWords => t_total(self.c),
            WordEnsemble::PalindromicWords => tp_total(self.c),
            WordEnsemble::KnotClasses => knots_total(self.c),
        }
    }

    /// `P(G <= g)` exactly.
    pub fn cdf(&self, g: usize) -> BigRational {
        let below: Count = self.counts.iter().take(g).sum();
        ratio(&below, &self.total())
    }
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn distribution(c: usize, ensemble: WordEnsemble, source: Source) -> Result<GenusDistribution, StatsError> {
    if c < MIN_CROSSINGS {
        return Err(StatsError::TooFewCrossings { c, min: MIN_CROSSINGS });
    }
    match source {
        Source::Formula => {
            let counts = (1..=max_genus(c))
                .map(|g| match ensemble {
                    WordEnsemble::AllWords => Ok(t_of(c, g)),
                    WordEnsemble::PalindromicWords => Ok(tp_of(c, g)),
                    WordEnsemble::KnotClasses => tbar_of(c, g),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GenusDistribution::new(c, ensemble, counts))
        }
        Source::Oracle { cap, threads } => Ok(oracle::empirical_distribution(c, ensemble, cap, threads)?),
    }
}

/// `E(G)`. Panics on an empty distribution.
pub fn mean(d: &GenusDistribution) -> BigRational {
    let weighted: Count = d.iter().map(|(g, n)| n * g).sum();
    ratio(&weighted, &d.total())
}

/// `E(G^2) - E(G)^2`.
pub fn variance(d: &GenusDistribution) -> BigRational {
    let square: Count = d.iter().map(|(g, n)| n * (g * g)).sum();
    let m = mean(d);
    ratio(&square, &d.total()) - &m * &m
}

/// Every `m` with `P(G <= m) >= 1/2` and `P(G >= m) >= 1/2`.
pub fn median_set(d: &GenusDistribution) -> Vec<usize> {
    let total = d.total();
    let mut below = Count::zero();
    let mut out = Vec::new();
    for (g, n) in d.iter() {
        let at_least = &total - &below;
        below += n;
        if &below * 2u8 >= total && at_least * 2u8 >= total {
            out.push(g);
        }
    }
    out
}

/// Every genus attaining the largest count.
pub fn mode_set(d: &GenusDistribution) -> Vec<usize> {
    let Some(top) = d.counts.iter().max() else {
        return Vec::new();
    };
    d.iter().filter(|(_, n)| *n == top).map(|(g, _)| g).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QsClass {
    LeftDominated,
    RightDominated,
    Both,
    Neither,
}

impl fmt::Display for QsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QsClass::LeftDominated => "LeftDominated",
            QsClass::RightDominated => "RightDominated",
            QsClass::Both => "Both",
            QsClass::Neither => "Neither",
        };
        f.write_str(s)
    }
}

/// Classifies `a_1..a_n` by the two interleaving chains
/// `a_{n-j+1} <= a_j <= a_{n-j}` (left) and `a_j <= a_{n-j+1} <= a_{j+1}`
/// (right) for `1 <= j <= floor(n/2)`.
pub fn qs_classify_seq(a: &[Count]) -> QsClass {
    let n = a.len();
    let at = |i: usize| &a[i - 1];
    let left = (1..=n / 2).all(|j| at(n - j + 1) <= at(j) && at(j) <= at(n - j));
    let right = (1..=n / 2).all(|j| at(j) <= at(n - j + 1) && at(n - j + 1) <= at(j + 1));
    match (left, right) {
        (true, true) => QsClass::Both,
        (true, false) => QsClass::LeftDominated,
        (false, true) => QsClass::RightDominated,
        (false, false) => QsClass::Neither,
    }
}

pub fn qs_classify(d: &GenusDistribution) -> QsClass {
    qs_classify_seq(&d.counts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryStats {
    pub mean: BigRational,
    pub variance: BigRational,
    pub median_set: Vec<usize>,
    pub mode_set: Vec<usize>,
    pub qs_class: QsClass,
}

pub fn summarize(d: &GenusDistribution) -> SummaryStats {
    SummaryStats {
        mean: mean(d),
        variance: variance(d),
        median_set: median_set(d),
        mode_set: mode_set(d),
        qs_class: qs_classify(d),
    }
}

/// Sums of genus and squared genus over `T(c)` and `T_p(c)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TotalsBundle {
    pub g_total: Count,
    pub gp_total: Count,
    pub g2_total: Count,
    pub gp2_total: Count,
}

fn pow2_signed(e: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn integral(r: BigRational, what: &str, c: usize) -> Count {
    assert!(r.is_integer() && !r.is_negative(), "{what}({c}) = {r} is not a nonnegative integer");
    r.to_integer().magnitude().clone()
}

/// Closed forms for the four totals. The odd-`c` palindromic total uses the
/// sign `(-1)^{(c+1)/2}`, the variant consistent with its recurrence and with
/// enumeration; the squared total at `c = 3` is the enumerated value 1.
pub fn totals_closed(c: usize) -> TotalsBundle {
    assert!(c >= MIN_CROSSINGS, "totals need c >= 3");
    let ci = c as i64;
    let cr = int(c);
    let g = ((int(9 * c + 3) * pow2_signed(ci - 3)) - frac(24 * sign(ci), 1)) / int(54);
    let gp = if c.is_multiple_of(2) {
        (int(3 * c + 2) * pow2_signed((ci - 4) / 2) + frac(4 * sign(ci / 2), 1)) / int(18)
    } else {
        (int(3 * c + 5) * pow2_signed((ci - 3) / 2) + frac(4 * sign((ci + 1) / 2), 1)) / int(18)
    };
    let g2 = if c == 3 {
        BigRational::one()
    } else {
        let poly = int(9) * &cr * &cr + int(15) * &cr - int(16);
        (poly * pow2_signed(ci - 6) - frac(20 * sign(ci), 1)) / int(27)
    };
    let gp2 = if c % 2 == 1 {
        let poly = int(9) * &cr * &cr + int(48) * &cr - int(25);
        (poly * pow2_signed((ci - 3) / 2) - frac(16 * sign((ci - 1) / 2), 1)) / int(216)
    } else {
        let poly = int(9) * &cr * &cr + int(30) * &cr - int(64);
        (poly * pow2_signed((ci - 4) / 2) - frac(16 * sign((ci - 2) / 2), 1)) / int(216)
    };
    TotalsBundle {
        g_total: integral(g, "g", c),
        gp_total: integral(gp, "g_p", c),
        g2_total: integral(g2, "g2", c),
        gp2_total: integral(gp2, "g_p2", c),
    }
}

/// Totals for `c = 3..=6`, obtained by enumerating `T(c)` and `T_p(c)`.
pub const TOTALS_SEEDS: [(usize, [u64; 4]); 4] =
    [(3, [1, 1, 1, 1]), (4, [1, 1, 1, 1]), (5, [4, 2, 6, 4]), (6, [8, 2, 14, 4])];

/// Totals for `3 <= c <= c_max` from the recurrences; entry `i` is `c = i + 3`.
pub fn totals_recursive_table(c_max: usize) -> Vec<TotalsBundle> {
    let mut out: Vec<TotalsBundle> = Vec::new();
    let t = |c: usize| BigInt::from(t_total(c));
    let tp = |c: usize| BigInt::from(tp_total(c));
    for c in MIN_CROSSINGS..=c_max {
        if let Some((_, [g, gp, g2, gp2])) = TOTALS_SEEDS.iter().find(|s| s.0 == c) {
            out.push(TotalsBundle {
                g_total: (*g).into(),
                gp_total: (*gp).into(),
                g2_total: (*g2).into(),
                gp2_total: (*gp2).into(),
            });
            continue;
        }
        let at = |k: usize| &out[k - MIN_CROSSINGS];
        let s = |v: &Count| BigInt::from(v.clone());
        let unit = BigInt::from(sign(c.div_ceil(2) as i64));
        let g = s(&at(c - 1).g_total) + s(&at(c - 2).g_total) * 2 + t(c - 2) + t(c - 3);
        let gp = s(&at(c - 2).gp_total) * 2 + tp(c - 2) + &unit;
        let g2 = s(&at(c - 1).g2_total) + s(&at(c - 2).g2_total) * 2 + &g + s(&at(c - 3).g_total) * 2
            - s(&at(c - 1).g_total);
        let gp2 = s(&at(c - 2).gp2_total) * 2 + s(&at(c - 2).gp_total) * 2 + tp(c - 2) + &unit;
        let nonneg = |v: BigInt, what: &str| -> Count {
            assert!(!v.is_negative(), "{what}({c}) negative in recurrence");
            v.magnitude().clone()
        };
        out.push(TotalsBundle {
            g_total: nonneg(g, "g"),
            gp_total: nonneg(gp, "g_p"),
            g2_total: nonneg(g2, "g2"),
            gp2_total: nonneg(gp2, "g_p2"),
        });
    }
    out
}

pub fn totals_recursive(c: usize) -> TotalsBundle {
    assert!(c >= MIN_CROSSINGS, "totals need c >= 3");
    totals_recursive_table(c).pop().expect("c >= 3")
}

/// `E(G_c) = (g(c) + g_p(c)) / (2 |K_c|)`.
pub fn knot_mean(c: usize) -> BigRational {
    let t = totals_closed(c);
    ratio(&(t.g_total + t.gp_total), &(knots_total(c) * 2u8))
}

/// `Var(G_c) = (g2(c) + g_p2(c)) / (2 |K_c|) - E(G_c)^2`.
pub fn knot_variance(c: usize) -> BigRational {
    let t = totals_closed(c);
    let m = ratio(&(t.g_total + t.gp_total), &(knots_total(c) * 2u8));
    ratio(&(t.g2_total + t.gp2_total), &(knots_total(c) * 2u8)) - &m * &m
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `E(G_c) - (c/4 + 1/12)`.
pub fn mean_gap(c: usize) -> f64 {
    to_f64(&(knot_mean(c) - int(c) / int(4) - frac(1, 12)))
}

/// `Var(G_c) - (c/16 - 17/144)`.
pub fn var_gap(c: usize) -> f64 {
    to_f64(&(knot_variance(c) - int(c) / int(16) + frac(17, 144)))
}

/// Total variation between `Binomial(n, 1/2)` and the palindromic genus law
/// at `c = 2n + 3`, shifted by one: `sum_k |C(n,k)/2^n - t_p(c, k+1)/t_p(c)|`.
pub fn binom_tv_distance(n: usize) -> f64 {
    assert!(n >= 1, "binom_tv_distance needs n >= 1");
    let c = 2 * n + 3;
    let total = tp_total(c);
    let two_n = BigUint::one() << n;
    let sum: BigRational =
        (0..=n).map(|k| (ratio(&binomial(n as u64, k as u64), &two_n) - ratio(&tp_of(c, k + 1), &total)).abs()).sum();
    to_f64(&sum)
}

/// First `k` in `2..=n` where `t_p(c, k) / C(n, k-1) <= t_p(c, k+1) / C(n, k)`
/// fails, with `c = 2n + 3`; `None` when the ratio is monotone.
pub fn binom_ratio_violation(n: usize) -> Option<usize> {
    let c = 2 * n + 3;
    (2..=n).find(|&k| {
        let lhs = tp_of(c, k) * binomial(n as u64, k as u64);
        let rhs = tp_of(c, k + 1) * binomial(n as u64, k as u64 - 1);
        lhs > rhs
    })
}

/// `P(G_{T(c)} <= l/2) - P(G_{T_p(2c)} <= l)`.
pub fn half_scale_gap(c: usize, l: usize) -> f64 {
    let words: Count = (1..=l / 2).map(|g| t_of(c, g)).sum();
    let pal: Count = (1..=l).map(|g| tp_of(2 * c, g)).sum();
    to_f64(&(ratio(&words, &t_total(c)) - ratio(&pal, &tp_total(2 * c))))
}

/// Normal distribution function `Phi_{mu, sigma}(x)`.
pub fn normal_cdf(x: f64, mu: f64, sigma: f64) -> f64 {
    assert!(sigma > 0.0, "sigma must be positive");
    0.5 * statrs::function::erf::erfc(-(x - mu) / (sigma * std::f64::consts::SQRT_2))
}

/// Parameters `(mu, sigma) = (n/2, sqrt(n)/2)` with `n = floor((c-3)/2)`.
pub fn normal_params(c: usize) -> (f64, f64) {
    let n = ((c - 3) / 2) as f64;
    (n / 2.0, n.sqrt() / 2.0)
}

/// `max_g |P(G_c <= g) - Phi_{mu,sigma}(g)|` over `g = 0..=floor((c-1)/2)`.
pub fn ks_to_normal(c: usize) -> f64 {
    assert!(c >= 5, "ks_to_normal needs c >= 5");
    let d = distribution(c, WordEnsemble::KnotClasses, Source::Formula).expect("formula counts");
    let (mu, sigma) = normal_params(c);
    (0..=max_genus(c)).map(|g| (to_f64(&d.cdf(g)) - normal_cdf(g as f64, mu, sigma)).abs()).fold(0.0, f64::max)
}

/// `p/q` with `q >= 1`, also for integers.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// 17 significant digits, in a form that is also a valid JSON number.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn json_number(text: &str) -> serde_json::Value {
    match text.parse::<Number>() {
        Ok(n) => serde_json::Value::Number(n),
        Err(_) => serde_json::Value::Null,
    }
}

/// The per-`c` statistics document.
#[derive(Debug, Clone, Serialize)]
pub struct StatsDocument {
    pub c: usize,
    pub ensemble: WordEnsemble,
    pub counts: BTreeMap<usize, serde_json::Value>,
    pub mean: String,
    pub variance: String,
    pub median_set: Vec<usize>,
    pub mode_set: Vec<usize>,
    pub qs_class: QsClass,
    /// Limit diagnostics, present for the knot ensemble only.
    pub mean_gap: Option<serde_json::Value>,
    pub var_gap: Option<serde_json::Value>,
    pub ks_to_normal: Option<serde_json::Value>,
}

pub fn stats_document(c: usize, ensemble: WordEnsemble) -> Result<StatsDocument, StatsError> {
    let d = distribution(c, ensemble, Source::Formula)?;
    let s = summarize(&d);
    let knots = ensemble == WordEnsemble::KnotClasses;
    let float = |x: f64| json_number(&format_float(x));
    Ok(StatsDocument {
        c,
        ensemble,
        counts: d.iter().map(|(g, n)| (g, json_number(&n.to_string()))).collect(),
        mean: format_rational(&s.mean),
        variance: format_rational(&s.variance),
        median_set: s.median_set,
        mode_set: s.mode_set,
        qs_class: s.qs_class,
        mean_gap: knots.then(|| float(mean_gap(c))),
        var_gap: knots.then(|| float(var_gap(c))),
        ks_to_normal: (knots && c >= 5).then(|| float(ks_to_normal(c))),
    })
}

impl StatsDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats document serializes")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("stats document serializes")
    }
}

/// One row of the normality diagnostics: `c`, KS distance, the TV distance
/// at `n = floor((c-3)/2)`, and the mean and variance gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityRow {
    pub c: usize,
    pub ks_to_normal: f64,
    pub binom_n: usize,
    pub binom_tv: f64,
    pub mean_gap: f64,
    pub var_gap: f64,
}

pub const NORMALITY_HEADER: &str = "c,ks_to_normal,binom_n,binom_tv,mean_gap,var_gap";

pub fn normality_row(c: usize) -> NormalityRow {
    let binom_n = (c - 3) / 2;
    NormalityRow {
        c,
        ks_to_normal: ks_to_normal(c),
        binom_n,
        binom_tv: binom_tv_distance(binom_n),
        mean_gap: mean_gap(c),
        var_gap: var_gap(c),
    }
}

impl fmt::Display for NormalityRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{}",
            self.c,
            format_float(self.ks_to_normal),
            self.binom_n,
            format_float(self.binom_tv),
            format_float(self.mean_gap),
            format_float(self.var_gap)
        )
    }
}

/// Exact totals of a distribution as `(sum g, sum g^2)`.
pub fn genus_sums(d: &GenusDistribution) -> (Count, Count) {
    let g = d.iter().map(|(g, n)| n * g).sum();
    let g2 = d.iter().map(|(g, n)| n * (g * g)).sum();
    (g, g2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knots(c: usize) -> GenusDistribution {
        distribution(c, WordEnsemble::KnotClasses, Source::Formula).unwrap()
    }

    fn seq(v: &[u64]) -> Vec<Count> {
        v.iter().map(|&x| Count::from(x)).collect()
    }

    fn point(c: usize) -> GenusDistribution {
        let mut v = vec![0; max_genus(c)];
        v[1] = 5;
        GenusDistribution::new(c, WordEnsemble::AllWords, seq(&v))
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(knots(7).counts(), seq(&[2, 4, 1]).as_slice());
        let pal = distribution(6, WordEnsemble::PalindromicWords, Source::Formula).unwrap();
        assert_eq!(pal.counts(), seq(&[0, 1]).as_slice());
        assert_eq!(pal.count(2), Count::from(1u8));
        assert_eq!(pal.count(0), Count::zero());
        assert_eq!(pal.count(9), Count::zero());
        assert_eq!(knots(7), distribution(7, WordEnsemble::KnotClasses, Source::oracle()).unwrap());
        assert!(matches!(
            distribution(2, WordEnsemble::AllWords, Source::Formula),
            Err(StatsError::TooFewCrossings { .. })
        ));
        let capped = Source::Oracle { cap: EnumerationCap::new(8), threads: 1 };
        assert!(matches!(distribution(9, WordEnsemble::AllWords, capped), Err(StatsError::Enumeration(_))));
        for c in 3..=30 {
            let d = knots(c);
            assert_eq!(d.total(), d.expected_total());
            assert_eq!(d.cdf(max_genus(c)), BigRational::one());
        }
    }

    #[test]
    fn moments() {
        assert_eq!(mean(&knots(7)), frac(13, 7));
        assert_eq!(variance(&knots(7)), frac(20, 49));
        assert_eq!(variance(&point(9)), BigRational::zero());
        assert_eq!(mean(&point(9)), int(2));
    }

    #[test]
    fn median_and_mode() {
        assert_eq!(median_set(&knots(11)), [3]);
        assert_eq!(mode_set(&knots(11)), [3]);
        assert_eq!(mode_set(&knots(5)), [1, 2]);
        assert!(median_set(&knots(5)).contains(&1));
        assert_eq!(median_set(&point(9)), [2]);
        assert_eq!(mode_set(&point(9)), [2]);
        // two equal halves make both middle values medians
        let split = GenusDistribution::new(9, WordEnsemble::AllWords, seq(&[0, 3, 3, 0]));
        assert_eq!(median_set(&split), [2, 3]);
    }

    #[test]
    fn quasi_symmetry() {
        assert_eq!(qs_classify(&knots(12)), QsClass::RightDominated);
        assert_eq!(qs_classify(&knots(11)), QsClass::LeftDominated);
        assert_eq!(qs_classify_seq(&seq(&[4, 4, 4, 4, 4])), QsClass::Both);
        assert_eq!(qs_classify_seq(&seq(&[9, 1, 9, 1])), QsClass::Neither);
        assert_eq!(qs_classify_seq(&seq(&[1])), QsClass::Both);
    }

    #[test]
    fn totals_examples() {
        let t = totals_closed(5);
        assert_eq!(t.g_total, Count::from(4u8));
        assert_eq!(totals_closed(7).gp_total, Count::from(6u8));
        assert_eq!(totals_closed(6).g2_total, Count::from(14u8));
        for c in [3, 4] {
            let r = totals_recursive(c);
            assert_eq!(
                r,
                TotalsBundle { g_total: 1u8.into(), gp_total: 1u8.into(), g2_total: 1u8.into(), gp2_total: 1u8.into() }
            );
        }
        assert_eq!(totals_recursive(5).gp2_total, Count::from(4u8));
        assert_eq!(totals_recursive(7).gp_total, Count::from(6u8));
        assert_eq!(totals_recursive(6).g2_total, Count::from(14u8));
        let table = totals_recursive_table(200);
        for c in 3..=200 {
            assert_eq!(table[c - 3], totals_closed(c), "c={c}");
        }
    }

    #[test]
    fn printed_odd_palindromic_sign_fails() {
        // the variant with (-1)^{(c-1)/2} is not even an integer at c = 3
        let printed = (int(3 * 3 + 5) + frac(4 * sign(1), 1)) / int(18);
        assert_eq!(printed, frac(10, 18));
        assert_eq!(totals_closed(3).gp_total, Count::from(1u8));
    }

    #[test]
    fn knot_moments() {
        assert_eq!(knot_mean(7), frac(13, 7));
        assert_eq!(knot_variance(7), frac(20, 49));
        assert_eq!(knot_mean(3), int(1));
        for c in 3..=40 {
            assert_eq!(knot_mean(c), mean(&knots(c)), "c={c}");
            assert_eq!(knot_variance(c), variance(&knots(c)), "c={c}");
        }
        let big = knot_mean(10_000);
        assert!((to_f64(&big) - (10_000.0 / 4.0 + 1.0 / 12.0)).abs() < 1e-9);
    }

    #[test]
    fn gaps_shrink() {
        assert!(var_gap(60).abs() < var_gap(30).abs());
        assert!(var_gap(30).abs() < var_gap(20).abs());
        assert!(mean_gap(40).abs() < 0.01);
        assert!(mean_gap(80).abs() < mean_gap(40).abs());
    }

    #[test]
    fn binomial_comparison() {
        assert!(binom_tv_distance(4) > 0.0);
        assert!(binom_tv_distance(32) < binom_tv_distance(16));
        assert!(binom_tv_distance(16) < binom_tv_distance(8));
        assert!(binom_tv_distance(8) < binom_tv_distance(4));
        for n in 4..=40 {
            assert_eq!(binom_ratio_violation(n), None, "n={n}");
        }
    }

    #[test]
    fn half_scale() {
        // even-index palindromic terms equal the word terms
        for c in 3..=20 {
            for l in 1..=c {
                let words: Count = (1..=l / 2).map(|g| t_of(c, g)).sum();
                let even: Count = (1..=l / 2).map(|g| tp_of(2 * c, 2 * g)).sum();
                assert_eq!(words, even);
            }
        }
        assert!(half_scale_gap(20, 5).abs() < half_scale_gap(10, 5).abs());
    }

    /// Composite Simpson rule on the standard normal density from `-12`.
    fn simpson_cdf(z: f64) -> f64 {
        let (a, n) = (-12.0, 200_000);
        let h = (z - a) / n as f64;
        let f = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = f(a) + f(z);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0, 0.0, 1.0), 0.5);
        assert_eq!(normal_cdf(3.5, 3.5, 2.0), 0.5);
        assert!((normal_cdf(3.0, 1.0, 2.0) - 0.841344746).abs() < 1e-8);
        for z in [-3.0, -1.3, 0.4, 1.0, 2.2] {
            let reference = simpson_cdf(z);
            assert!(((normal_cdf(z, 0.0, 1.0) - reference) / reference).abs() < 1e-10, "z={z}");
        }
    }

    #[test]
    fn ks_decreases() {
        let ks: Vec<f64> = [23, 43, 83].iter().map(|&c| ks_to_normal(c)).collect();
        assert!(ks[0] > ks[1] && ks[1] > ks[2], "{ks:?}");
        let (mu, sigma) = normal_params(23);
        assert_eq!((mu, sigma), (5.0, 10f64.sqrt() / 2.0));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&frac(13, 7)), "13/7");
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn stats_document_shape() {
        let doc = stats_document(7, WordEnsemble::KnotClasses).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(v["mean"], "13/7");
        assert_eq!(v["variance"], "20/49");
        assert_eq!(v["counts"]["2"], 4);
        assert_eq!(v["qs_class"], "LeftDominated");
        assert!(v["ks_to_normal"].is_number());
        let doc = stats_document(4, WordEnsemble::PalindromicWords).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert!(v["ks_to_normal"].is_null());
        let big = stats_document(200, WordEnsemble::KnotClasses).unwrap().to_json();
        assert!(big.contains(&tbar_of(200, 50).unwrap().to_string()));
    }

    #[test]
    fn normality_row_format() {
        let row = normality_row(23);
        assert_eq!(row.binom_n, 10);
        assert_eq!(row.to_string().split(',').count(), NORMALITY_HEADER.split(',').count());
    }
}
