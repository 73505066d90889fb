//! Ground truth by exhaustion, and the harness that checks every formula
//! against it.

use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::counts::{
    identity_suite, knots_total, max_genus, recursion_suite, t_of, t_table, tbar_of, tp_of, Count, TSeeds,
};
use crate::genus::{build_diagram, genus_from_seifert, genus_of_eps, row_sequence};
use crate::report::VerificationReport;
use crate::stats::{
    distribution, genus_sums, knot_variance, median_set, mode_set, qs_classify, totals_closed, totals_recursive_table,
    variance, GenusDistribution, QsClass, Source, TotalsBundle,
};
use crate::word::{
    class_rep, enumerate_palindromic, enumerate_words, shards, EnumerationCap, EnumerationError, Word, WordEnsemble,
    WordRecord,
};

/// Table of knot counts by crossing number and genus for `3 <= c <= 20`,
/// transcribed cell by cell; columns `c,g,tbar`.
pub const PUBLISHED_TABLE: &str = include_str!("../data/knot_counts.csv");

/// Parses [`PUBLISHED_TABLE`] into `(c, g, tbar)` cells.
pub fn published_cells() -> Vec<(usize, usize, u64)> {
    PUBLISHED_TABLE
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let p = |i: usize| f[i].parse::<u64>().expect("golden cell is an integer");
            (p(0) as usize, p(1) as usize, p(2))
        })
        .collect()
}

/// Cells of the transcribed table that disagree with every independent
/// count, as `(c, g, printed, corrected)`. Each entry is confirmed inside
/// [`verify_all`] by the row total `|K_c|`.
pub const PUBLISHED_ERRATA: [(usize, usize, u64, u64); 1] = [(17, 3, 904, 902)];

/// Transcribed cells with [`PUBLISHED_ERRATA`] applied.
pub fn published_cells_corrected() -> Vec<(usize, usize, u64)> {
    published_cells()
        .into_iter()
        .map(|(c, g, v)| match PUBLISHED_ERRATA.iter().find(|e| (e.0, e.1, e.2) == (c, g, v)) {
            Some(e) => (c, g, e.3),
            None => (c, g, v),
        })
        .collect()
}

/// Number of leading interior bits used to split `T(c)` into shards.
const SHARD_PREFIX_BITS: u32 = 8;

fn tally(words: impl Iterator<Item = Word>, c: usize) -> Vec<u64> {
    let mut acc = vec![0u64; max_genus(c)];
    for w in words {
        acc[genus_of_eps(w.eps()) as usize - 1] += 1;
    }
    acc
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool")
}

/// Counts by genus over an ensemble, computed word by word with the
/// reduction genus. `T(c)` is scanned in shards on `threads` workers; the
/// per-shard tallies are merged exactly, so the result does not depend on
/// the thread count.
pub fn empirical_distribution(
    c: usize,
    ensemble: WordEnsemble,
    cap: EnumerationCap,
    threads: usize,
) -> Result<GenusDistribution, EnumerationError> {
    cap.check(c)?;
    let tallies = match ensemble {
        WordEnsemble::PalindromicWords => tally(enumerate_palindromic(c, cap)?, c),
        WordEnsemble::AllWords | WordEnsemble::KnotClasses => {
            let parts = shards(c, SHARD_PREFIX_BITS, cap)?;
            let knots = ensemble == WordEnsemble::KnotClasses;
            pool(threads).install(|| {
                parts
                    .par_iter()
                    .map(|s| {
                        if knots {
                            tally(s.words().filter_map(class_rep).map(|(w, _)| w), c)
                        } else {
                            tally(s.words(), c)
                        }
                    })
                    .reduce(|| vec![0u64; max_genus(c)], merge)
            })
        }
    };
    Ok(GenusDistribution::new(c, ensemble, tallies.into_iter().map(Count::from).collect()))
}

/// Genus and squared-genus sums over `T(c)` and `T_p(c)` by enumeration.
pub fn empirical_totals(c: usize, cap: EnumerationCap, threads: usize) -> Result<TotalsBundle, EnumerationError> {
    let (g_total, g2_total) = genus_sums(&empirical_distribution(c, WordEnsemble::AllWords, cap, threads)?);
    let (gp_total, gp2_total) = genus_sums(&empirical_distribution(c, WordEnsemble::PalindromicWords, cap, threads)?);
    Ok(TotalsBundle { g_total, gp_total, g2_total, gp2_total })
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Feeds genus-annotated word records to `sink` in lexicographic order.
/// With `dedupe`, only one word per knot class is emitted, carrying its
/// multiplicity in `T(c)`. Genera are computed in parallel, a batch of
/// shards at a time, and handed to `sink` in order, so the stream is the
/// same for every thread count.
pub fn stream_word_records<F>(
    c: usize,
    palindromic_only: bool,
    dedupe: bool,
    cap: EnumerationCap,
    threads: usize,
    mut sink: F,
) -> Result<(), StreamError>
where
    F: FnMut(&WordRecord) -> io::Result<()>,
{
    cap.check(c)?;
    let annotate = |w: Word, multiplicity: Option<u8>| WordRecord {
        genus: Some(genus_of_eps(w.eps())),
        multiplicity,
        ..WordRecord::new(&w)
    };
    if palindromic_only {
        for w in enumerate_palindromic(c, cap)? {
            sink(&annotate(w, dedupe.then_some(1)))?;
        }
        return Ok(());
    }
    let parts = shards(c, SHARD_PREFIX_BITS, cap)?;
    let pool = pool(threads);
    for batch in parts.chunks(threads.max(1) * 4) {
        let records: Vec<Vec<WordRecord>> = pool.install(|| {
            batch
                .par_iter()
                .map(|s| {
                    if dedupe {
                        s.words().filter_map(class_rep).map(|(w, m)| annotate(w, Some(m))).collect()
                    } else {
                        s.words().map(|w| annotate(w, None)).collect()
                    }
                })
                .collect()
        });
        for r in records.iter().flatten() {
            sink(r)?;
        }
    }
    Ok(())
}

/// Deliberate faults for proving that the harness can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Seeds the word recursion with `t(5,1) = 1` instead of 2.
    T5G1,
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "t5g1" => Ok(Fault::T5G1),
            other => Err(format!("unknown fault `{other}` (known: t5g1)")),
        }
    }
}

/// Ranges and resources for [`verify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest `c` checked against enumeration.
    pub c_enum_max: usize,
    /// Largest `c` for closed form against recursion and identities.
    pub c_formula_max: usize,
    /// Largest `c` for the closed-form totals against their recurrences.
    pub totals_max: usize,
    /// Largest `c` for which both genus routes are compared on every word.
    pub seifert_max: usize,
    /// Largest `c` for median and mode membership.
    pub median_max: usize,
    /// Largest `c` for quasi-symmetry classes.
    pub qs_max: usize,
    pub cap: EnumerationCap,
    pub threads: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            c_enum_max: 16,
            c_formula_max: 60,
            totals_max: 200,
            seifert_max: 14,
            median_max: 64,
            qs_max: 50,
            cap: EnumerationCap::default(),
            threads: 1,
            fault: None,
        }
    }
}

impl VerifyConfig {
    pub fn new(c_enum_max: usize, c_formula_max: usize) -> Self {
        VerifyConfig { c_enum_max, c_formula_max, ..Self::default() }
    }

    fn seeds(&self) -> TSeeds {
        match self.fault {
            None => TSeeds::default(),
            Some(Fault::T5G1) => TSeeds::default().with_override(5, 1, 1),
        }
    }
}

/// Runs every check. With `c_enum_max < 3` the report is empty.
pub fn verify_all(cfg: &VerifyConfig) -> Result<VerificationReport, EnumerationError> {
    let mut report = VerificationReport::new();
    if cfg.c_enum_max < 3 {
        return Ok(report);
    }
    cfg.cap.check(cfg.c_enum_max)?;
    let seeds = cfg.seeds();
    oracle_checks(cfg, &seeds, &mut report)?;
    report.extend(recursion_suite(cfg.c_formula_max, &seeds));
    totals_checks(cfg, &mut report)?;
    report.extend(identity_suite(cfg.c_formula_max));
    shape_checks(cfg, &mut report);
    genus_engine_checks(cfg, &mut report)?;
    golden_checks(&mut report);
    Ok(report)
}

fn oracle_checks(cfg: &VerifyConfig, seeds: &TSeeds, report: &mut VerificationReport) -> Result<(), EnumerationError> {
    let range = (3, cfg.c_enum_max);
    let mut dists = Vec::new();
    for c in 3..=cfg.c_enum_max {
        let get = |e| empirical_distribution(c, e, cfg.cap, cfg.threads);
        dists.push((
            get(WordEnsemble::AllWords)?,
            get(WordEnsemble::PalindromicWords)?,
            get(WordEnsemble::KnotClasses)?,
        ));
    }
    let cells = |pick: fn(&(GenusDistribution, GenusDistribution, GenusDistribution)) -> &GenusDistribution| {
        dists.iter().flat_map(move |d| {
            let d = pick(d);
            (1..=max_genus(d.c)).map(move |g| (d.c, g, d.count(g)))
        })
    };
    report.compare("t closed = oracle", range, cells(|d| &d.0).map(|(c, g, n)| (c, Some(g), t_of(c, g), n)));
    report.compare("t_p closed = oracle", range, cells(|d| &d.1).map(|(c, g, n)| (c, Some(g), tp_of(c, g), n)));
    report.compare(
        "tbar closed = oracle",
        range,
        cells(|d| &d.2).map(|(c, g, n)| (c, Some(g), tbar_of(c, g).unwrap_or_default(), n)),
    );
    let t_rec = t_table(cfg.c_enum_max, seeds);
    report.compare(
        "t recursion = oracle",
        range,
        cells(|d| &d.0).map(|(c, g, n)| (c, Some(g), n.into(), t_rec.get(c, g))),
    );
    report.compare(
        "oracle class count = |K_c|",
        range,
        dists.iter().map(|d| (d.2.c, None, knots_total(d.2.c), d.2.total())),
    );
    report.compare(
        "knot variance from totals = oracle variance",
        range,
        dists.iter().map(|d| (d.2.c, None, variance(&d.2), knot_variance(d.2.c))),
    );
    Ok(())
}

fn totals_checks(cfg: &VerifyConfig, report: &mut VerificationReport) -> Result<(), EnumerationError> {
    let top = cfg.totals_max.max(cfg.c_enum_max);
    let rec = totals_recursive_table(top);
    let at = |c: usize| &rec[c - 3];
    let fields = |t: &TotalsBundle| [t.g_total.clone(), t.gp_total.clone(), t.g2_total.clone(), t.gp2_total.clone()];
    let names = ["g", "g_p", "g2", "g_p2"];
    let mut oracle = Vec::new();
    for c in 3..=cfg.c_enum_max {
        oracle.push((c, empirical_totals(c, cfg.cap, cfg.threads)?));
    }
    for (i, name) in names.iter().enumerate() {
        report.compare(
            &format!("{name} recurrence = oracle"),
            (3, cfg.c_enum_max),
            oracle.iter().map(|(c, t)| (*c, None, fields(t)[i].clone(), fields(at(*c))[i].clone())),
        );
        report.compare(
            &format!("{name} recurrence = closed form"),
            (3, cfg.totals_max),
            (3..=cfg.totals_max).map(|c| (c, None, fields(at(c))[i].clone(), fields(&totals_closed(c))[i].clone())),
        );
    }
    Ok(())
}

fn floor_div(a: usize, b: usize) -> usize {
    a / b
}

fn shape_checks(cfg: &VerifyConfig, report: &mut VerificationReport) {
    let formula = |c, e| distribution(c, e, Source::Formula).expect("formula distribution");
    let member = |c: usize, d: &GenusDistribution, m: usize| {
        let (med, mode) = (median_set(d), mode_set(d));
        let ok = med.contains(&m) && mode.contains(&m);
        (c, Some(m), ok, format!("median {med:?}, mode {mode:?}"))
    };
    report.assert_all(
        "knots: floor((c+2)/4) in median and mode",
        (3, cfg.median_max),
        (3..=cfg.median_max).map(|c| member(c, &formula(c, WordEnsemble::KnotClasses), floor_div(c + 2, 4))),
    );
    report.assert_all(
        "words: floor((c+2)/4) in median and mode",
        (3, cfg.qs_max),
        (3..=cfg.qs_max).map(|c| member(c, &formula(c, WordEnsemble::AllWords), floor_div(c + 2, 4))),
    );
    report.assert_all(
        "palindromic words: median and mode position",
        (5, cfg.qs_max),
        (5..=cfg.qs_max).map(|c| {
            let m = if matches!(c % 4, 1 | 2) { floor_div(c + 3, 4) } else { floor_div(c + 1, 4) };
            member(c, &formula(c, WordEnsemble::PalindromicWords), m)
        }),
    );
    report.assert_all(
        "knots: left-dominated for odd c, right-dominated for even c",
        (3, cfg.qs_max),
        (3..=cfg.qs_max).map(|c| {
            let class = qs_classify(&formula(c, WordEnsemble::KnotClasses));
            let want = if c % 2 == 1 { QsClass::LeftDominated } else { QsClass::RightDominated };
            (c, None, class == want || class == QsClass::Both, class.to_string())
        }),
    );
}

fn genus_engine_checks(cfg: &VerifyConfig, report: &mut VerificationReport) -> Result<(), EnumerationError> {
    let top = cfg.seifert_max.min(cfg.c_enum_max);
    let mut mismatch = None;
    'outer: for c in 3..=top {
        for w in enumerate_words(c, cfg.cap)? {
            let reduction = genus_of_eps(w.eps()) as usize;
            let seifert = build_diagram(&row_sequence(&w))
                .map_err(|e| e.to_string())
                .and_then(|d| genus_from_seifert(c, d.seifert_circles()).map_err(|e| e.to_string()));
            if seifert.as_ref().ok().copied().map(|g| g as usize) != Some(reduction) {
                let actual = match seifert {
                    Ok(g) => format!("{w}: seifert genus {g}"),
                    Err(e) => format!("{w}: {e}"),
                };
                mismatch = Some((c, reduction, actual));
                break 'outer;
            }
        }
    }
    report.compare(
        "reduction genus = Seifert genus on every word",
        (3, top),
        mismatch.map(|(c, g, actual)| (c, Some(g), format!("reduction genus {g}"), actual)),
    );
    Ok(())
}

fn row_sum(cells: &[(usize, usize, u64)], c: usize) -> Count {
    cells.iter().filter(|x| x.0 == c).map(|x| Count::from(x.2)).sum()
}

fn golden_checks(report: &mut VerificationReport) {
    let printed = published_cells();
    let cells = published_cells_corrected();
    report.compare(
        "transcribed table errata: printed row total differs from |K_c|",
        (3, 20),
        PUBLISHED_ERRATA.iter().map(|e| (e.0, Some(e.1), true, row_sum(&printed, e.0) != knots_total(e.0))),
    );
    report.compare(
        "transcribed table rows (errata applied) sum to |K_c|",
        (3, 20),
        (3..=20).map(|c| (c, None, knots_total(c), row_sum(&cells, c))),
    );
    report.compare(
        "tbar closed = transcribed table (errata applied)",
        (3, 20),
        cells.iter().map(|&(c, g, v)| (c, Some(g), Count::from(v), tbar_of(c, g).unwrap_or_default())),
    );
    let nonzero = (3..=20).flat_map(|c| (1..=max_genus(c)).map(move |g| (c, g)));
    report.assert_all(
        "transcribed table covers every nonzero cell",
        (3, 20),
        nonzero.map(|(c, g)| {
            let present = cells.iter().any(|&(tc, tg, _)| (tc, tg) == (c, g));
            (c, Some(g), present, "missing".to_string())
        }),
    );
}
