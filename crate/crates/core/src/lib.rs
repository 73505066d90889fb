//! Exact enumeration of 2-bridge knot words and their genus distribution.
//!
//! A 2-bridge knot with crossing number `c` is encoded by a word in `{+, -}`
//! whose run lengths are 1 or 2. [`word`] enumerates these words, [`genus`]
//! computes Seifert genus two independent ways, [`counts`] gives exact
//! closed forms and recursions for the counts by genus, [`stats`] turns
//! those counts into distribution statistics, and [`oracle`] checks every
//! formula against brute-force enumeration.

pub mod counts;
pub mod genus;
pub mod oracle;
pub mod report;
pub mod stats;
pub mod word;

pub use counts::{knots_total, t_of, t_total, tbar_of, tp_of, tp_total, Count, CountError};
pub use genus::{genus_by_reduction, genus_by_seifert, GenusError};
pub use oracle::{verify_all, Fault, VerifyConfig};
pub use report::{Check, Status, VerificationReport};
pub use stats::{GenusDistribution, QsClass, Source, StatsError, TotalsBundle};
pub use word::{EnumerationCap, EnumerationError, Word, WordEnsemble, WordError};
