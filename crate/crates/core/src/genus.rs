//! Genus of the knot behind a word, by two independent routes.
//!
//! The first route shortens the word from its tail. Each step removes one or
//! two runs and changes the genus by 0 or 1, until a word of `T(3)` or `T(4)`
//! (both genus 1) is left.
//!
//! The second route draws the two-row alternating diagram on three horizontal
//! channels, traces it to orient every arc, smooths every crossing along the
//! orientation and counts Seifert circles `s`; the genus is `(1 + c - s) / 2`.

use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("reduction needs at least 5 runs, got {runs}")]
    TooShort { runs: usize },
    #[error("row sequence must be nonempty and start in the first row")]
    InvalidRows,
    #[error("diagram traces to {components} components, expected a knot")]
    NotAKnot { components: usize },
    #[error("1 + c - s is odd for c={c}, s={s}")]
    ParityViolation { c: usize, s: usize },
    #[error("c={c}, s={s} gives a genus below 1")]
    NonPositiveGenus { c: usize, s: usize },
}

/// The five tail patterns of a word with at least 5 runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionCase {
    /// Runs `c-2, c-1` are `(1, 1)`.
    Case1,
    /// `(2, 2)` after a single run `c-3`.
    Case2A,
    /// `(2, 2)` after a double run `c-3`.
    Case2B,
    /// `(1, 2)`.
    Case3,
    /// `(2, 1)`.
    Case4,
}

impl ReductionCase {
    /// Genus lost by the replacement.
    pub fn genus_delta(self) -> u32 {
        match self {
            ReductionCase::Case2B | ReductionCase::Case3 => 1,
            ReductionCase::Case1 | ReductionCase::Case2A | ReductionCase::Case4 => 0,
        }
    }
}

fn classify_eps(eps: &[u8]) -> ReductionCase {
    let c = eps.len();
    debug_assert!(c >= 5);
    match (eps[c - 3], eps[c - 2]) {
        (1, 1) => ReductionCase::Case1,
        (2, 2) if eps[c - 4] == 1 => ReductionCase::Case2A,
        (2, 2) => ReductionCase::Case2B,
        (1, 2) => ReductionCase::Case3,
        (2, 1) => ReductionCase::Case4,
        _ => unreachable!("runs are 1 or 2"),
    }
}

/// Rewrites the tail of `eps` in place and returns the genus delta.
fn reduce_in_place(eps: &mut Vec<u8>) -> u32 {
    let case = classify_eps(eps);
    let keep = eps.len() - 3;
    eps.truncate(keep);
    match case {
        ReductionCase::Case1 => eps.extend_from_slice(&[2, 1]),
        ReductionCase::Case2A | ReductionCase::Case2B => eps.extend_from_slice(&[1, 1]),
        ReductionCase::Case3 | ReductionCase::Case4 => eps.push(1),
    }
    case.genus_delta()
}

pub fn classify_tail(w: &Word) -> Result<ReductionCase, GenusError> {
    if w.crossings() < 5 {
        return Err(GenusError::TooShort { runs: w.crossings() });
    }
    Ok(classify_eps(w.eps()))
}

/// One replacement step: a word with one or two fewer runs and the genus
/// difference between the two knots.
pub fn reduce_once(w: &Word) -> Result<(Word, u32), GenusError> {
    if w.crossings() < 5 {
        return Err(GenusError::TooShort { runs: w.crossings() });
    }
    let mut eps = w.eps().to_vec();
    let delta = reduce_in_place(&mut eps);
    Ok((Word::from_valid(eps), delta))
}

pub fn genus_by_reduction(w: &Word) -> u32 {
    genus_of_eps(w.eps())
}

/// Same as [`genus_by_reduction`] on a raw, already validated run sequence.
pub(crate) fn genus_of_eps(eps: &[u8]) -> u32 {
    let mut buf = eps.to_vec();
    let mut genus = 1;
    while buf.len() > 4 {
        genus += reduce_in_place(&mut buf);
    }
    genus
}

/// Row of the two-row alternating diagram a run turns into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Row {
    First,
    Second,
}

/// Runs `+` and `--` go to the first row, `-` and `++` to the second.
pub fn row_sequence(w: &Word) -> Vec<Row> {
    w.eps()
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let odd_run = i % 2 == 0;
            if odd_run == (e == 1) {
                Row::First
            } else {
                Row::Second
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Top = 0,
    Middle = 1,
    Bottom = 2,
}

impl Channel {
    const ALL: [Channel; 3] = [Channel::Top, Channel::Middle, Channel::Bottom];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Free end of a channel at one side of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub channel: Channel,
    pub side: Side,
}

impl End {
    pub const fn new(channel: Channel, side: Side) -> Self {
        End { channel, side }
    }
}

/// Closure for an odd number of crossings: the top channel runs around the
/// outside from its right end back to its left end, and the middle channel is
/// capped to the bottom channel on each side.
pub const STANDARD_CLOSURE: [(End, End); 3] = [
    (End::new(Channel::Top, Side::Left), End::new(Channel::Top, Side::Right)),
    (End::new(Channel::Middle, Side::Left), End::new(Channel::Bottom, Side::Left)),
    (End::new(Channel::Middle, Side::Right), End::new(Channel::Bottom, Side::Right)),
];

/// Closure for an even number of crossings. The left side is capped as in
/// [`STANDARD_CLOSURE`]; on the right the top channel is capped to the middle
/// one and the outer arc joins the top-left end to the bottom-right end.
pub const EVEN_CLOSURE: [(End, End); 3] = [
    (End::new(Channel::Top, Side::Left), End::new(Channel::Bottom, Side::Right)),
    (End::new(Channel::Middle, Side::Left), End::new(Channel::Bottom, Side::Left)),
    (End::new(Channel::Top, Side::Right), End::new(Channel::Middle, Side::Right)),
];

/// The closure that turns `c` rows into the 2-bridge knot diagram.
pub fn closure_for(c: usize) -> [(End, End); 3] {
    if c % 2 == 1 {
        STANDARD_CLOSURE
    } else {
        EVEN_CLOSURE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    Right,
    Left,
}

/// Three horizontal channels crossed `c` times. A first-row crossing swaps
/// the top and middle strands, a second-row crossing swaps middle and bottom.
/// The curve is cut into segments `(channel, gap)` where gap `j` lies between
/// crossings `j` and `j + 1` (gap 0 and gap `c` are the outer ends).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    rows: Vec<Row>,
    closure: [(End, End); 3],
    /// Direction of travel along each segment, indexed by `segment()`.
    orientation: Vec<Dir>,
}

impl PlanarDiagram {
    pub fn crossings(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    fn segment(channel: Channel, gap: usize) -> usize {
        gap * 3 + channel as usize
    }

    fn segment_count(&self) -> usize {
        3 * (self.rows.len() + 1)
    }

    /// Pairs of segments joined by a closure arc.
    fn closure_segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let c = self.rows.len();
        let seg = move |e: End| {
            let gap = if e.side == Side::Left { 0 } else { c };
            PlanarDiagram::segment(e.channel, gap)
        };
        self.closure.iter().map(move |&(a, b)| (seg(a), seg(b)))
    }

    /// Number of Seifert circles after smoothing every crossing along the
    /// orientation found by tracing.
    pub fn seifert_circles(&self) -> usize {
        let c = self.rows.len();
        let mut dsu = DisjointSets::new(self.segment_count());
        for (p, &row) in self.rows.iter().enumerate() {
            let (a, b) = joined(row);
            for ch in Channel::ALL {
                if ch != a && ch != b {
                    dsu.union(Self::segment(ch, p), Self::segment(ch, p + 1));
                }
            }
            let (al, bl) = (Self::segment(a, p), Self::segment(b, p));
            let (ar, br) = (Self::segment(a, p + 1), Self::segment(b, p + 1));
            if self.orientation[al] == self.orientation[bl] {
                dsu.union(al, ar);
                dsu.union(bl, br);
            } else {
                dsu.union(al, bl);
                dsu.union(ar, br);
            }
        }
        for (x, y) in self.closure_segments() {
            dsu.union(x, y);
        }
        debug_assert_eq!(self.segment_count(), 3 * (c + 1));
        dsu.count()
    }
}

fn joined(row: Row) -> (Channel, Channel) {
    match row {
        Row::First => (Channel::Top, Channel::Middle),
        Row::Second => (Channel::Middle, Channel::Bottom),
    }
}

fn partner(closure: &[(End, End); 3], end: End) -> End {
    closure
        .iter()
        .find_map(|&(a, b)| {
            if a == end {
                Some(b)
            } else if b == end {
                Some(a)
            } else {
                None
            }
        })
        .expect("closure covers all six ends")
}

/// Walks the curve, returning the direction on each segment and the number of
/// closed components.
fn trace(rows: &[Row], closure: &[(End, End); 3]) -> (Vec<Dir>, usize) {
    let c = rows.len();
    let n = 3 * (c + 1);
    let mut orientation: Vec<Option<Dir>> = vec![None; n];
    let mut components = 0;
    // start on the outer closure arc of the top channel, then any leftovers
    let starts =
        std::iter::once((Channel::Top, 0)).chain((0..=c).flat_map(|g| Channel::ALL.into_iter().map(move |ch| (ch, g))));
    for (ch0, gap0) in starts {
        if orientation[PlanarDiagram::segment(ch0, gap0)].is_some() {
            continue;
        }
        components += 1;
        let (mut ch, mut gap, mut dir) = (ch0, gap0, Dir::Right);
        loop {
            let seg = PlanarDiagram::segment(ch, gap);
            match orientation[seg] {
                Some(_) => break,
                None => orientation[seg] = Some(dir),
            }
            (ch, gap, dir) = step(rows, closure, ch, gap, dir);
        }
    }
    (orientation.into_iter().map(|d| d.expect("every segment traced")).collect(), components)
}

fn step(rows: &[Row], closure: &[(End, End); 3], ch: Channel, gap: usize, dir: Dir) -> (Channel, usize, Dir) {
    let c = rows.len();
    let at_end = match dir {
        Dir::Right => gap == c,
        Dir::Left => gap == 0,
    };
    if at_end {
        let side = if dir == Dir::Right { Side::Right } else { Side::Left };
        let other = partner(closure, End::new(ch, side));
        return match other.side {
            Side::Left => (other.channel, 0, Dir::Right),
            Side::Right => (other.channel, c, Dir::Left),
        };
    }
    let crossing = match dir {
        Dir::Right => gap,
        Dir::Left => gap - 1,
    };
    let (a, b) = joined(rows[crossing]);
    let next_ch = if ch == a {
        b
    } else if ch == b {
        a
    } else {
        ch
    };
    let next_gap = match dir {
        Dir::Right => gap + 1,
        Dir::Left => gap - 1,
    };
    (next_ch, next_gap, dir)
}

/// Builds the diagram with the closure matching the parity of the row count.
pub fn build_diagram(rows: &[Row]) -> Result<PlanarDiagram, GenusError> {
    build_diagram_with_closure(rows, closure_for(rows.len()))
}

/// Builds a diagram with an arbitrary pairing of the six channel ends.
pub fn build_diagram_with_closure(rows: &[Row], closure: [(End, End); 3]) -> Result<PlanarDiagram, GenusError> {
    if rows.first() != Some(&Row::First) {
        return Err(GenusError::InvalidRows);
    }
    let (orientation, components) = trace(rows, &closure);
    if components != 1 {
        return Err(GenusError::NotAKnot { components });
    }
    Ok(PlanarDiagram { rows: rows.to_vec(), closure, orientation })
}

pub fn count_seifert_circles(d: &PlanarDiagram) -> usize {
    d.seifert_circles()
}

/// Genus of an alternating knot from its crossing and Seifert circle counts.
pub fn genus_from_seifert(c: usize, s: usize) -> Result<u32, GenusError> {
    let twice = (1 + c) as i64 - s as i64;
    if twice.rem_euclid(2) != 0 {
        return Err(GenusError::ParityViolation { c, s });
    }
    if twice < 2 {
        return Err(GenusError::NonPositiveGenus { c, s });
    }
    Ok((twice / 2) as u32)
}

/// Full Seifert route for one word.
pub fn genus_by_seifert(w: &Word) -> Result<u32, GenusError> {
    let d = build_diagram(&row_sequence(w))?;
    genus_from_seifert(w.crossings(), d.seifert_circles())
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), size: vec![1; n], sets: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
    }

    fn count(&self) -> usize {
        self.sets
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{enumerate_words, EnumerationCap};

    fn w(eps: &[u8]) -> Word {
        Word::new(eps.iter().copied()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_tail(&w(&[1, 1, 2, 2, 1])), Ok(ReductionCase::Case2A));
        assert_eq!(classify_tail(&w(&[1, 2, 1, 2, 1])), Ok(ReductionCase::Case3));
        assert_eq!(classify_tail(&w(&[1, 2, 2, 1, 1])), Ok(ReductionCase::Case4));
        assert_eq!(classify_tail(&w(&[1, 1, 1, 1])), Err(GenusError::TooShort { runs: 4 }));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_once(&w(&[1, 1, 2, 2, 1])).unwrap(), (w(&[1, 1, 1, 1]), 0));
        assert_eq!(reduce_once(&w(&[1, 2, 1, 2, 1])).unwrap(), (w(&[1, 2, 1]), 1));
        assert_eq!(reduce_once(&w(&[1, 2, 2, 1, 1])).unwrap(), (w(&[1, 2, 1]), 0));
        assert_eq!(reduce_once(&w(&[1, 2, 1])), Err(GenusError::TooShort { runs: 3 }));
    }

    #[test]
    fn reduction_table_words() {
        // the four case words of T(7) and their replacements
        let cases = [
            ("+--++--+-+", "+--++--++-", ReductionCase::Case1),
            ("+-+--++--+", "+-+--+-", ReductionCase::Case2B),
            ("+--++-+--+", "+--++-+", ReductionCase::Case3),
            ("+--++-++-+", "+--++-+", ReductionCase::Case4),
        ];
        for (from, to, case) in cases {
            let word = Word::from_symbols(from).unwrap();
            assert_eq!(classify_tail(&word).unwrap(), case, "{from}");
            assert_eq!(reduce_once(&word).unwrap().0, Word::from_symbols(to).unwrap(), "{from}");
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_by_reduction(&w(&[1, 2, 1])), 1);
        assert_eq!(genus_by_reduction(&w(&[1, 1, 1, 1])), 1);
        assert_eq!(genus_by_reduction(&w(&[1, 2, 2, 2, 2, 1])), 2);
        assert_eq!(genus_by_reduction(&w(&[1, 2, 1, 2, 1])), 2);
    }

    #[test]
    fn case_2b_then_4() {
        let six = w(&[1, 2, 2, 2, 2, 1]);
        assert_eq!(classify_tail(&six), Ok(ReductionCase::Case2B));
        let (five, d) = reduce_once(&six).unwrap();
        assert_eq!((five.eps(), d), (&[1u8, 2, 2, 1, 1][..], 1));
        assert_eq!(classify_tail(&five), Ok(ReductionCase::Case4));
    }

    #[test]
    fn reduction_preserves_validity_and_bounds() {
        let cap = EnumerationCap::default();
        for c in 5..=14 {
            for word in enumerate_words(c, cap).unwrap() {
                let mut cur = word.clone();
                let mut genus = 1;
                let mut steps = 0;
                while cur.crossings() > 4 {
                    let (next, d) = reduce_once(&cur).unwrap();
                    assert!(Word::new(next.eps().iter().copied()).is_ok());
                    assert!(next.crossings() + 2 >= cur.crossings());
                    genus += d;
                    cur = next;
                    steps += 1;
                }
                assert!(steps <= c);
                assert_eq!(genus, genus_by_reduction(&word));
                assert!((1..=((c as u32 - 1) / 2)).contains(&genus));
            }
        }
    }

    #[test]
    fn rows() {
        assert_eq!(row_sequence(&w(&[1, 2, 1])), vec![Row::First; 3]);
        assert_eq!(row_sequence(&w(&[1, 1, 1, 1])), vec![Row::First, Row::Second, Row::First, Row::Second]);
        // the seven-crossing word +--+-++--+
        assert_eq!(
            row_sequence(&w(&[1, 2, 1, 1, 2, 2, 1])),
            [1, 1, 1, 2, 2, 1, 1].map(|r| if r == 1 { Row::First } else { Row::Second })
        );
    }

    #[test]
    fn trefoil_and_figure_eight() {
        let trefoil = build_diagram(&[Row::First; 3]).unwrap();
        assert_eq!(trefoil.crossings(), 3);
        assert_eq!(count_seifert_circles(&trefoil), 2);
        let fig8 = build_diagram(&[Row::First, Row::Second, Row::First, Row::Second]).unwrap();
        assert_eq!(count_seifert_circles(&fig8), 3);
        assert_eq!(genus_by_seifert(&w(&[1, 2, 1, 2, 1])), Ok(2));
    }

    #[test]
    fn diagram_rejects_bad_rows() {
        assert_eq!(build_diagram(&[]), Err(GenusError::InvalidRows));
        assert_eq!(build_diagram(&[Row::Second, Row::First]), Err(GenusError::InvalidRows));
    }

    #[test]
    fn top_middle_caps_leave_a_free_bottom_loop() {
        // capping top to middle on both sides leaves the bottom channel of a
        // first-row-only diagram as a separate circle
        let caps = [
            (End::new(Channel::Top, Side::Left), End::new(Channel::Middle, Side::Left)),
            (End::new(Channel::Top, Side::Right), End::new(Channel::Middle, Side::Right)),
            (End::new(Channel::Bottom, Side::Left), End::new(Channel::Bottom, Side::Right)),
        ];
        assert_eq!(build_diagram_with_closure(&[Row::First; 3], caps), Err(GenusError::NotAKnot { components: 2 }));
    }

    #[test]
    fn even_crossings_need_their_own_closure() {
        // +-+-++- has genus 2; the odd closure yields one component but five
        // Seifert circles, which would claim genus 1
        let word = w(&[1, 1, 1, 1, 2, 1]);
        let rows = row_sequence(&word);
        let wrong = build_diagram_with_closure(&rows, STANDARD_CLOSURE).unwrap();
        assert_eq!(wrong.seifert_circles(), 5);
        assert_eq!(build_diagram(&rows).unwrap().seifert_circles(), 3);
        assert_eq!(genus_by_seifert(&word), Ok(2));
        assert_eq!(closure_for(6), EVEN_CLOSURE);
        assert_eq!(closure_for(7), STANDARD_CLOSURE);
    }

    #[test]
    fn seifert_from_genus_formula() {
        assert_eq!(genus_from_seifert(3, 2), Ok(1));
        assert_eq!(genus_from_seifert(4, 3), Ok(1));
        assert_eq!(genus_from_seifert(5, 2), Ok(2));
        assert_eq!(genus_from_seifert(4, 2), Err(GenusError::ParityViolation { c: 4, s: 2 }));
        assert_eq!(genus_from_seifert(3, 4), Err(GenusError::NonPositiveGenus { c: 3, s: 4 }));
        assert_eq!(genus_from_seifert(3, 6), Err(GenusError::NonPositiveGenus { c: 3, s: 6 }));
    }

    #[test]
    fn both_routes_agree_up_to_14() {
        let cap = EnumerationCap::default();
        for c in 3..=14 {
            for word in enumerate_words(c, cap).unwrap() {
                let d = build_diagram(&row_sequence(&word)).expect("single component");
                let s = d.seifert_circles();
                assert_eq!((1 + c - s) % 2, 0);
                assert_eq!(genus_from_seifert(c, s).unwrap(), genus_by_reduction(&word), "{word}");
            }
        }
    }

    #[test]
    fn genus_is_invariant_under_reversal() {
        let cap = EnumerationCap::default();
        for c in 3..=14 {
            for word in enumerate_words(c, cap).unwrap() {
                assert_eq!(genus_by_reduction(&word), genus_by_reduction(&word.reversal_partner()));
            }
        }
    }
}
