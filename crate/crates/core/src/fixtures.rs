//! Reference arrays, kept as LaTeX-style transcriptions and parsed into
//! patterns.

use crate::arith::Rational;
use crate::classify::{minimal_period, PeriodInfo};
use crate::pattern::{FriezePattern, Vertical};
use crate::printed::parse_numeric;
use crate::wild::GammaVertex;

pub const INTRO: &str = include_str!("../data/intro.tex");
pub const TAME: &str = include_str!("../data/tame.tex");
pub const NONGENERIC: &str = include_str!("../data/nongeneric.tex");
pub const WILD: &str = include_str!("../data/wild.tex");
pub const PIECES: &str = include_str!("../data/pieces.tex");

/// Reads a printed block that repeats vertically and reduces it to its
/// minimal period.
pub fn periodic_from_printed(k: usize, n: usize, text: &str) -> FriezePattern {
    let rows = parse_numeric(k, n, text).expect("embedded array parses");
    let f = FriezePattern::periodic(k, n, rows).expect("embedded array is well shaped");
    match minimal_period(&f) {
        PeriodInfo::Found(m) => {
            let rows = f.stored_rows()[..m].to_vec();
            FriezePattern::periodic(k, n, rows).expect("prefix of a valid pattern")
        }
        PeriodInfo::NoneUpTo(_) => unreachable!("periodic patterns always have a period"),
    }
}

/// The opening example, k = 3, n = 5.
pub fn intro() -> FriezePattern {
    periodic_from_printed(3, 5, INTRO)
}

/// Tame integral positive, k = 3, n = 4.
pub fn tame_example() -> FriezePattern {
    periodic_from_printed(3, 4, TAME)
}

/// Tame but not generic, k = 3, n = 3.
pub fn nongeneric_example() -> FriezePattern {
    periodic_from_printed(3, 3, NONGENERIC)
}

/// Wild, periodic, integral and positive, k = 3, n = 4.
pub fn wild_example() -> FriezePattern {
    periodic_from_printed(3, 4, WILD)
}

/// The height-1 Conway–Coxeter frieze.
pub fn cc_height1() -> FriezePattern {
    FriezePattern::from_i64(2, 1, &[vec![1], vec![2], vec![1], vec![2]], Vertical::Periodic(4)).expect("valid shape")
}

/// The twelve vertices `A_1..A_12` of Γ_5 (k = 3).
pub fn a_pieces() -> Vec<GammaVertex> {
    let mut out = Vec::new();
    let mut block = String::new();
    let mut flush = |block: &mut String| {
        if !block.trim().is_empty() {
            let rows = parse_numeric(3, 5, block).expect("embedded piece parses");
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|v| v.to_integer().try_into().expect("small entry")).collect())
                .collect();
            out.push(GammaVertex::new(3, 5, rows).expect("two rows of five"));
        }
        block.clear();
    };
    for line in PIECES.lines() {
        if line.starts_with('%') {
            flush(&mut block);
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    flush(&mut block);
    out
}

pub fn rows_i64(f: &FriezePattern) -> Vec<Vec<i64>> {
    f.stored_rows()
        .iter()
        .map(|r| r.iter().map(|v: &Rational| v.to_integer().try_into().expect("small entry")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcriptions() {
        assert_eq!(rows_i64(&tame_example()), vec![vec![3, 8, 4, 7], vec![3, 2, 4, 1]]);
        assert_eq!(rows_i64(&wild_example()), vec![vec![1, 1, 2, 1], vec![1, 1, 2, 4]]);
        assert_eq!(intro().stored_period(), Some(9));
        assert_eq!(rows_i64(&intro())[0], vec![13, 88, 314, 25, 4]);
        assert_eq!(nongeneric_example().stored_period(), Some(7));
        let a = a_pieces();
        assert_eq!(a.len(), 12);
        assert_eq!(a[0].rows(), &[vec![1, 1, 1, 1, 1], vec![2, 2, 1, 1, 2]]);
        assert_eq!(a[11].rows(), &[vec![4, 2, 1, 2, 2], vec![1, 1, 1, 1, 1]]);
    }
}
