//! Exact counts of words and knots by crossing number and genus.
//!
//! Three families of counts appear throughout:
//! `t(c, g)` words of `T(c)` with genus `g`, `t_p(c, g)` palindromic words,
//! and `tbar(c, g) = (t + t_p) / 2` knots. Each has a closed form (alternating
//! binomial sums) and a recursive form; both are implemented independently so
//! they can be compared. Everything is exact big-integer arithmetic.

use std::io::{self, Write};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::report::VerificationReport;

/// Exact nonnegative count.
pub type Count = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("t({c},{g}) + t_p({c},{g}) = {sum} is odd")]
    OddSum { c: usize, g: usize, sum: BigUint },
    #[error("count at c={c}, g={g} is negative: {value}")]
    Negative { c: usize, g: usize, value: BigInt },
}

/// Largest genus occurring at crossing number `c`.
pub fn max_genus(c: usize) -> usize {
    c.saturating_sub(1) / 2
}

/// `C(n, k)` by the multiplicative formula; every partial product is an
/// integer so the division is exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn sign_pow(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// `sum_{n=0}^{upper} (-1)^n C(n + k - 1, n)`; zero when `upper < 0`.
fn alternating_sum(upper: i64, k: u64) -> BigInt {
    let mut total = BigInt::zero();
    if upper < 0 {
        return total;
    }
    // C(n + k - 1, n) built up from n = 0
    let mut term = BigUint::one();
    for n in 0..=upper as u64 {
        if n > 0 {
            term *= n + k - 1;
            term /= n;
        }
        if n % 2 == 0 {
            total += BigInt::from(term.clone());
        } else {
            total -= BigInt::from(term.clone());
        }
    }
    total
}

fn to_count(c: usize, g: usize, v: BigInt) -> Result<Count, CountError> {
    match v.sign() {
        Sign::Minus => Err(CountError::Negative { c, g, value: v }),
        _ => Ok(v.magnitude().clone()),
    }
}

/// `|T(c)| = (2^{c-2} - (-1)^c) / 3`.
pub fn t_total(c: usize) -> Count {
    assert!(c >= 2, "t_total needs c >= 2");
    let v = pow2(c - 2) - sign_pow(c as i64);
    to_count(c, 0, v / 3).expect("nonnegative")
}

/// `|T_p(c)| = (2^h - (-1)^h) / 3` with `h = floor((c - 1) / 2)`.
pub fn tp_total(c: usize) -> Count {
    assert!(c >= 1, "tp_total needs c >= 1");
    let h = (c - 1) / 2;
    let v = pow2(h) - sign_pow(h as i64);
    to_count(c, 0, v / 3).expect("nonnegative")
}

/// Number of 2-bridge knots with `c` crossings, mirror images identified.
pub fn knots_total(c: usize) -> Count {
    assert!(c >= 3, "knots_total needs c >= 3");
    let base = pow2(c - 3);
    let v = match c % 4 {
        0 => base + pow2((c - 4) / 2),
        1 => base + pow2((c - 3) / 2),
        2 => base + pow2((c - 4) / 2) - 1,
        _ => base + pow2((c - 3) / 2) + 1,
    };
    to_count(c, 0, v / 3).expect("nonnegative")
}

/// Closed form for `t(c, g)`.
pub fn t_of(c: usize, g: usize) -> Count {
    if g == 0 {
        return Count::zero();
    }
    let upper = c as i64 - 2 * g as i64 - 1;
    let v = alternating_sum(upper, 2 * g as u64) * sign_pow(c as i64 - 1);
    to_count(c, g, v).expect("closed form for t is nonnegative")
}

/// `c' = floor((c + 1) / 2)`, the palindromic half-length index.
pub fn half_index(c: usize) -> usize {
    c.div_ceil(2)
}

/// Closed form for `t_p(c, g)`.
pub fn tp_of(c: usize, g: usize) -> Count {
    if g == 0 {
        return Count::zero();
    }
    let upper = half_index(c) as i64 - g as i64 - 1;
    let v = alternating_sum(upper, g as u64) * sign_pow(upper);
    to_count(c, g, v).expect("closed form for t_p is nonnegative")
}

/// Knots with crossing number `c` and genus `g`: half of `t + t_p`.
pub fn tbar_of(c: usize, g: usize) -> Result<Count, CountError> {
    if g == 0 || g > max_genus(c) {
        return Ok(Count::zero());
    }
    let sum = t_of(c, g) + tp_of(c, g);
    let (q, r) = sum.div_rem(&BigUint::from(2u8));
    if !r.is_zero() {
        return Err(CountError::OddSum { c, g, sum });
    }
    Ok(q)
}

/// The small-genus closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallGenus {
    /// `t_p(c, 1)`: 0 when `c = 1, 2 mod 4`, else 1.
    TpGenus1,
    /// `t_p(c, 2) = floor((c - 1) / 4)`.
    TpGenus2,
    /// `t_p(c, 3)`.
    TpGenus3,
    /// `t(c, 1) = floor((c - 1) / 2)`.
    TGenus1,
    /// `tbar(c, 1) = floor((c + 1) / 4)`.
    TbarGenus1,
}

pub fn small_genus(c: usize, which: SmallGenus) -> Count {
    let ci = c as i64;
    let v: i64 = match which {
        SmallGenus::TpGenus1 => match c % 4 {
            1 | 2 => 0,
            _ => 1,
        },
        SmallGenus::TpGenus2 => (ci - 1).div_euclid(4),
        SmallGenus::TpGenus3 => {
            let a = (ci - 5).div_euclid(2);
            let b = (ci - 1).div_euclid(2);
            (2 * a * b - sign_pow(b) as i64 + 1) / 8
        }
        SmallGenus::TGenus1 => (ci - 1).div_euclid(2),
        SmallGenus::TbarGenus1 => (ci + 1).div_euclid(4),
    };
    Count::from(v as u64)
}

/// Base values for the `t(c, g)` recursion at `c = 3, 4, 5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSeeds {
    values: Vec<(usize, usize, i64)>,
}

impl Default for TSeeds {
    fn default() -> Self {
        TSeeds { values: vec![(3, 1, 1), (4, 1, 1), (5, 1, 2), (5, 2, 1)] }
    }
}

impl TSeeds {
    /// Overrides one base value, used to prove the harness can fail.
    pub fn with_override(mut self, c: usize, g: usize, value: i64) -> Self {
        assert!((3..=5).contains(&c), "seeds cover c = 3..=5");
        self.values.retain(|&(sc, sg, _)| (sc, sg) != (c, g));
        self.values.push((c, g, value));
        self
    }

    fn get(&self, c: usize, g: usize) -> i64 {
        self.values.iter().find(|&&(sc, sg, _)| (sc, sg) == (c, g)).map_or(0, |v| v.2)
    }
}

/// Table of signed values indexed by `(c, g)`, zero outside the stored range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    rows: Vec<Vec<BigInt>>,
}

impl CountTable {
    fn new() -> Self {
        CountTable { rows: Vec::new() }
    }

    pub fn c_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn get(&self, c: usize, g: usize) -> BigInt {
        self.rows.get(c).and_then(|r| r.get(g)).cloned().unwrap_or_default()
    }

    fn push_row(&mut self, c: usize, row: Vec<BigInt>) {
        while self.rows.len() < c {
            self.rows.push(Vec::new());
        }
        self.rows.push(row);
    }

    pub fn row_sum(&self, c: usize) -> BigInt {
        self.rows.get(c).map(|r| r.iter().sum()).unwrap_or_default()
    }
}

/// `t(c, g)` for `c <= c_max` by the five-term recursion, bottom up.
pub fn t_table(c_max: usize, seeds: &TSeeds) -> CountTable {
    let mut table = CountTable::new();
    for c in 3..=c_max.max(3) {
        let row: Vec<BigInt> = (0..=c)
            .map(|g| {
                if g == 0 {
                    BigInt::zero()
                } else if c <= 5 {
                    BigInt::from(seeds.get(c, g))
                } else {
                    table.get(c - 1, g) + table.get(c - 2, g - 1) + table.get(c - 2, g) + table.get(c - 3, g - 1)
                        - table.get(c - 3, g)
                }
            })
            .collect();
        table.push_row(c, row);
    }
    table
}

/// `t_p(c, g)` by the recursion reaching back two and four crossings.
pub fn tp_table(c_max: usize) -> CountTable {
    let seeds = [(3, 1), (4, 1), (5, 2), (6, 2)];
    let mut table = CountTable::new();
    for c in 3..=c_max.max(3) {
        let row: Vec<BigInt> = (0..=c)
            .map(|g| {
                if g == 0 {
                    BigInt::zero()
                } else if c <= 6 {
                    BigInt::from(seeds.contains(&(c, g)) as u8)
                } else {
                    table.get(c - 2, g - 1) + table.get(c - 4, g) + table.get(c - 4, g - 1)
                }
            })
            .collect();
        table.push_row(c, row);
    }
    table
}

/// `t_p(c, g)` by the Pascal-style recursion `t_p(c-2, g) + t_p(c-2, g-1)`
/// for `g >= 2`, with the genus-1 column taken from its parity rule.
pub fn tp_table_pascal(c_max: usize) -> CountTable {
    let mut table = CountTable::new();
    for c in 3..=c_max.max(3) {
        let row: Vec<BigInt> = (0..=c)
            .map(|g| match g {
                0 => BigInt::zero(),
                1 => BigInt::from(small_genus(c, SmallGenus::TpGenus1)),
                _ if c <= 4 => BigInt::zero(),
                _ => table.get(c - 2, g) + table.get(c - 2, g - 1),
            })
            .collect();
        table.push_row(c, row);
    }
    table
}

/// `tbar(c, g)` by `tbar(c-2, g) + tbar(c-2, g-1) + t_p(2c-4, 2g-1)` for
/// `g >= 2`; the genus-1 column and the rows `c = 3, 4` come from the word
/// recursions.
pub fn tbar_table(c_max: usize, t: &CountTable, tp: &CountTable) -> CountTable {
    assert!(t.c_max() >= c_max && tp.c_max() >= 2 * c_max - 4, "source tables too small");
    let mut table = CountTable::new();
    for c in 3..=c_max.max(3) {
        let row: Vec<BigInt> = (0..=c)
            .map(|g| {
                if g == 0 {
                    BigInt::zero()
                } else if c <= 4 || g == 1 {
                    (t.get(c, g) + tp.get(c, g)) / 2
                } else {
                    table.get(c - 2, g) + table.get(c - 2, g - 1) + tp.get(2 * c - 4, 2 * g - 1)
                }
            })
            .collect();
        table.push_row(c, row);
    }
    table
}

pub fn t_of_rec(c: usize, g: usize) -> Count {
    to_count(c, g, t_table(c, &TSeeds::default()).get(c, g)).expect("nonnegative")
}

pub fn tp_of_rec(c: usize, g: usize) -> Count {
    to_count(c, g, tp_table(c).get(c, g)).expect("nonnegative")
}

/// One row of the `c,g,t,tp,tbar` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub c: usize,
    pub g: usize,
    pub t: Count,
    pub tp: Count,
    pub tbar: Count,
}

/// Rows for `c_min <= c <= c_max`, `1 <= g <= floor((c-1)/2)`, sorted by `(c, g)`.
pub fn table_rows(c_min: usize, c_max: usize) -> Result<Vec<TableRow>, CountError> {
    let mut out = Vec::new();
    for c in c_min.max(3)..=c_max {
        for g in 1..=max_genus(c) {
            out.push(TableRow { c, g, t: t_of(c, g), tp: tp_of(c, g), tbar: tbar_of(c, g)? });
        }
    }
    Ok(out)
}

pub const TABLE_HEADER: &str = "c,g,t,tp,tbar";

/// Writes the table as CSV with LF line endings.
pub fn write_table_csv<W: Write + ?Sized>(out: &mut W, rows: &[TableRow]) -> io::Result<()> {
    writeln!(out, "{TABLE_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.c, r.g, r.t, r.tp, r.tbar)?;
    }
    Ok(())
}

/// Checks the algebraic relations between the closed forms.
pub fn identity_suite(c_max: usize) -> VerificationReport {
    let mut report = VerificationReport::new();
    let cs = || 3..=c_max;
    let range = (3, c_max);
    report.compare(
        "t_p(2c,2g) = t(c,g)",
        range,
        cs().flat_map(|c| (1..=c).map(move |g| (c, Some(g), t_of(c, g), tp_of(2 * c, 2 * g)))),
    );
    report.compare(
        "tbar(c,g) = tbar(c-2,g) + tbar(c-2,g-1) + t_p(2c-4,2g-1)",
        (5, c_max),
        (5..=c_max).flat_map(|c| {
            (2..=max_genus(c)).map(move |g| {
                let rhs = tbar_of(c - 2, g).unwrap() + tbar_of(c - 2, g - 1).unwrap() + tp_of(2 * c - 4, 2 * g - 1);
                (c, Some(g), tbar_of(c, g).unwrap(), rhs)
            })
        }),
    );
    report.compare(
        "t_p(c,g) = t_p(c-2,g) + t_p(c-2,g-1)",
        (5, c_max),
        (5..=c_max)
            .flat_map(|c| (2..=c).map(move |g| (c, Some(g), tp_of(c, g), tp_of(c - 2, g) + tp_of(c - 2, g - 1)))),
    );
    report.compare(
        "t_p(c,g) = t_p(c+1,g) for odd c",
        range,
        cs().filter(|c| c % 2 == 1).flat_map(|c| (1..=c).map(move |g| (c, Some(g), tp_of(c, g), tp_of(c + 1, g)))),
    );
    report.compare(
        "sum_g t(c,g) = t(c)",
        range,
        cs().map(|c| (c, None, t_total(c), (1..=max_genus(c)).map(|g| t_of(c, g)).sum())),
    );
    report.compare(
        "sum_g t_p(c,g) = t_p(c)",
        range,
        cs().map(|c| (c, None, tp_total(c), (1..=max_genus(c)).map(|g| tp_of(c, g)).sum())),
    );
    report.compare(
        "sum_g tbar(c,g) = |K_c|",
        range,
        cs().map(|c| (c, None, knots_total(c), (1..=max_genus(c)).map(|g| tbar_of(c, g).unwrap()).sum())),
    );
    report.compare(
        "2 tbar = t + t_p",
        range,
        cs().flat_map(|c| {
            (1..=max_genus(c)).map(move |g| (c, Some(g), t_of(c, g) + tp_of(c, g), tbar_of(c, g).unwrap() * 2u8))
        }),
    );
    report.compare(
        "t(c) = 2|K_c| - t_p(c)",
        range,
        cs().map(|c| (c, None, t_total(c), knots_total(c) * 2u8 - tp_total(c))),
    );
    let small = [
        (SmallGenus::TpGenus1, "t_p(c,1) parity rule", tp_of as fn(usize, usize) -> Count, 1),
        (SmallGenus::TpGenus2, "t_p(c,2) = floor((c-1)/4)", tp_of, 2),
        (SmallGenus::TpGenus3, "t_p(c,3) closed form", tp_of, 3),
        (SmallGenus::TGenus1, "t(c,1) = floor((c-1)/2)", t_of, 1),
        (SmallGenus::TbarGenus1, "tbar(c,1) = floor((c+1)/4)", |c, g| tbar_of(c, g).unwrap(), 1),
    ];
    for (which, name, f, g) in small {
        report.compare(name, range, cs().map(move |c| (c, Some(g), f(c, g), small_genus(c, which))));
    }
    report
}

/// Closed forms against the recursions, exactly, for `3 <= c <= c_max`.
pub fn recursion_suite(c_max: usize, seeds: &TSeeds) -> VerificationReport {
    let mut report = VerificationReport::new();
    if c_max < 3 {
        return report;
    }
    let t = t_table(c_max, seeds);
    let tp = tp_table((2 * c_max).saturating_sub(4).max(c_max));
    let tp_pascal = tp_table_pascal(c_max);
    let tbar = tbar_table(c_max, &t, &tp);
    let (t, tp, tp_pascal, tbar) = (&t, &tp, &tp_pascal, &tbar);
    let range = (3, c_max);
    let signed = |v: Count| BigInt::from(v);
    report.compare("sum_g t_rec(c,g) = t(c)", range, (3..=c_max).map(|c| (c, None, signed(t_total(c)), t.row_sum(c))));
    report.compare(
        "t closed = t recursion",
        range,
        (3..=c_max).flat_map(|c| (1..=c).map(move |g| (c, Some(g), signed(t_of(c, g)), t.get(c, g)))),
    );
    report.compare(
        "t_p closed = t_p recursion",
        range,
        (3..=c_max).flat_map(|c| (1..=c).map(move |g| (c, Some(g), signed(tp_of(c, g)), tp.get(c, g)))),
    );
    report.compare(
        "t_p recursion = t_p Pascal recursion (g >= 2)",
        range,
        (3..=c_max).flat_map(|c| (2..=c).map(move |g| (c, Some(g), tp.get(c, g), tp_pascal.get(c, g)))),
    );
    report.compare(
        "tbar closed = tbar recursion",
        range,
        (3..=c_max).flat_map(|c| (1..=c).map(move |g| (c, Some(g), signed(tbar_of(c, g).unwrap()), tbar.get(c, g)))),
    );
    report.assert_all(
        "recursion tables nonnegative",
        range,
        (3..=c_max).flat_map(|c| {
            (1..=c).map(move |g| {
                let v = t.get(c, g);
                (c, Some(g), !v.is_negative(), v.to_string())
            })
        }),
    );
    report
}

/// Lossy view of a count, for diagnostics.
pub fn count_to_f64(v: &Count) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}
