//! Enumeration of tame integral positive friezes of small height.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::Rational;
use crate::classify::classify;
use crate::pattern::FriezePattern;
use crate::wild::{continue_row, Constraint, Continuation};
use crate::xi::{reconstruct, XiSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Friezes are equal when their bi-infinite arrays agree entrywise.
    PatternEquality,
    /// Friezes are equal up to a diagonal shift of the array, i.e. a
    /// rotation of the ξ-sequence.
    ShiftEquivalence,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::PatternEquality => "pattern-equality",
            Convention::ShiftEquivalence => "shift-equivalence",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pattern-equality" | "pattern" => Ok(Convention::PatternEquality),
            "shift-equivalence" | "shift" => Ok(Convention::ShiftEquivalence),
            _ => Err(format!("unknown convention {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Depth-first search over ξ-tuples.
    XiSearch,
    /// Scan of the first k−1 band rows, continued row by row.
    RowScan,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::XiSearch => "xi-search",
            Algorithm::RowScan => "row-scan",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "xi-search" | "xi" | "a" | "A" => Ok(Algorithm::XiSearch),
            "row-scan" | "rows" | "b" | "B" => Ok(Algorithm::RowScan),
            _ => Err(format!("unknown algorithm {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub k: usize,
    pub n: usize,
    pub convention: Convention,
    pub algorithm: Algorithm,
    pub bound_schedule: Vec<u64>,
    pub budget: Duration,
    /// How many friezes to keep in the result.
    pub keep: usize,
    pub parallel: bool,
}

impl EnumerationConfig {
    pub fn new(k: usize, n: usize) -> Self {
        EnumerationConfig {
            k,
            n,
            convention: Convention::PatternEquality,
            algorithm: Algorithm::XiSearch,
            bound_schedule: vec![8, 16, 32],
            budget: Duration::from_secs(60),
            keep: 0,
            parallel: true,
        }
    }
}

/// ξ-tuples of one frieze, indexed by column `1..=n+k+1`.
pub type XiKey = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub k: usize,
    pub n: usize,
    pub convention: Convention,
    pub algorithm: Algorithm,
    pub bound_schedule: Vec<u64>,
    pub count_per_bound: Vec<usize>,
    pub stabilized: bool,
    /// Canonical keys found at the last completed bound.
    pub keys: Vec<XiKey>,
    /// The first `keep` friezes, in key order.
    pub friezes: Vec<FriezePattern>,
    pub nodes: u64,
    pub elapsed: Duration,
    pub budget_exhausted: bool,
}

impl EnumerationResult {
    /// The stabilized count, if any.
    pub fn count(&self) -> Option<usize> {
        (self.stabilized && !self.budget_exhausted).then(|| *self.count_per_bound.last().expect("stabilized"))
    }
}

impl fmt::Display for EnumerationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}, n = {}, {} ({})", self.k, self.n, self.convention.name(), self.algorithm.name())?;
        for (b, c) in self.bound_schedule.iter().zip(&self.count_per_bound) {
            writeln!(f, "  bound {b:>4}: {c}")?;
        }
        if self.budget_exhausted {
            writeln!(f, "budget exhausted after {:.1?}; counts are partial", self.elapsed)
        } else if self.stabilized {
            writeln!(
                f,
                "stabilized at {} ({} nodes, {:.1?})",
                self.count_per_bound.last().unwrap(),
                self.nodes,
                self.elapsed
            )
        } else {
            writeln!(f, "not stabilized within the schedule ({} nodes, {:.1?})", self.nodes, self.elapsed)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("k must be at least 2 and n at least 1")]
    BadShape,
    #[error("bound schedule is empty")]
    EmptySchedule,
    #[error("budget exhausted")]
    BudgetExhausted(Box<EnumerationResult>),
}

fn sign(e: usize) -> i128 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Band,
    Exact(i128),
}

fn target(n: usize, g: usize) -> Target {
    if g <= n {
        Target::Band
    } else if g == n + 1 {
        Target::Exact(1)
    } else {
        Target::Exact(0)
    }
}

struct Clock {
    deadline: Instant,
    stop: AtomicBool,
    nodes: AtomicU64,
}

impl Clock {
    fn tick(&self, local: &mut u64) -> bool {
        *local += 1;
        if (*local).is_multiple_of(4096) {
            self.nodes.fetch_add(4096, Ordering::Relaxed);
            if Instant::now() >= self.deadline {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn flush(&self, local: u64) {
        self.nodes.fetch_add(local % 4096, Ordering::Relaxed);
    }
}

/// DFS over ξ-tuples. Choosing the tuple for column `t` appends one entry
/// to every row still being generated and starts row `t+k`; band entries
/// must stay positive and the border/zero entries must come out exactly.
struct XiSearch<'a> {
    k: usize,
    n: usize,
    p: usize,
    bound: i64,
    tuples: Vec<Vec<i64>>,
    /// Entries of the row started at column `s` (index `s-1`), seed included.
    rows: Vec<Vec<i128>>,
    /// `cap[R]` bounds a band entry `R` places before the closing 1.
    cap: Vec<i128>,
    clock: &'a Clock,
    local: u64,
    out: Vec<XiKey>,
}

/// Upper bounds for band entries by distance from the closing 1 of their
/// row. Reading the recurrence backwards, with all entries and
/// coefficients in `0..=bound`, gives
/// `a_j <= |a_{j+k}| + bound · Σ_{r odd} a_{j+r}`.
fn entry_caps(k: usize, n: usize, bound: i64) -> Vec<i128> {
    // index R + k covers R = -k ..= n
    let mut u = vec![0i128; n + k + 1];
    u[0] = 1; // the sign-flipped 1 at distance -k
    u[k] = 1; // the closing 1
    let b = bound as i128;
    for r in 1..=n {
        let at = r + k;
        let mut v = u[at - k];
        for odd in (1..k).step_by(2) {
            v = v.saturating_add(b.saturating_mul(u[at - odd]));
        }
        u[at] = v;
    }
    u[k..].to_vec()
}

impl<'a> XiSearch<'a> {
    fn new(k: usize, n: usize, bound: i64, clock: &'a Clock) -> Self {
        let p = n + k + 1;
        XiSearch {
            k,
            n,
            p,
            bound,
            tuples: vec![vec![0; k - 1]; p],
            rows: Vec::new(),
            cap: entry_caps(k, n, bound),
            clock,
            local: 0,
            out: Vec::new(),
        }
    }

    fn seed(&self) -> Vec<i128> {
        let mut r = vec![0; self.k - 1];
        r.push(1);
        r
    }

    /// Rows that take an entry from column `t`: started at `s <= t` and not finished.
    fn live(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        let first = t.saturating_sub(self.n + self.k - 1).max(1);
        (first..=t).filter(move |&s| s <= self.rows.len())
    }

    /// New entry of a row given its last k entries: `base + coef·c_1`.
    fn affine(&self, row: &[i128], rest: &[i64]) -> (i128, i128) {
        let k = self.k;
        let a = &row[row.len() - k..];
        let mut base = sign(k - 1) * a[0];
        for r in 2..k {
            base += sign(k - 1 - r) * rest[r - 2] as i128 * a[r];
        }
        (base, sign(k - 2) * a[1])
    }

    fn step(&mut self, t: usize) {
        if !self.clock.tick(&mut self.local) {
            return;
        }
        if t > self.p {
            if self.closes() {
                self.out.push(self.tuples.clone());
            }
            return;
        }
        self.rows.push(self.seed());
        let mut rest = vec![0i64; self.k - 2];
        loop {
            self.try_rest(t, &rest);
            if !Self::advance(&mut rest, self.bound) {
                break;
            }
        }
        self.rows.pop();
    }

    fn advance(rest: &mut [i64], bound: i64) -> bool {
        for v in rest.iter_mut() {
            if *v < bound {
                *v += 1;
                return true;
            }
            *v = 0;
        }
        false
    }

    fn try_rest(&mut self, t: usize, rest: &[i64]) {
        let (mut lo, mut hi) = (0i128, self.bound as i128);
        let mut fixed: Option<i128> = None;
        let live: Vec<usize> = self.live(t).collect();
        for &s in &live {
            let row = &self.rows[s - 1];
            let g = row.len() - self.k + 1;
            let (base, coef) = self.affine(row, rest);
            match target(self.n, g) {
                Target::Band => {
                    // 1 <= base + coef·c <= cap
                    let cap = self.cap[self.n + 1 - g];
                    if coef == 0 {
                        if base < 1 || base > cap {
                            return;
                        }
                    } else if coef > 0 {
                        lo = lo.max((1 - base).div_euclid(coef) + i128::from((1 - base).rem_euclid(coef) != 0));
                        hi = hi.min((cap - base).div_euclid(coef));
                    } else {
                        hi = hi.min((base - 1).div_euclid(-coef));
                        let m = -coef;
                        lo = lo.max((base - cap).div_euclid(m) + i128::from((base - cap).rem_euclid(m) != 0));
                    }
                }
                Target::Exact(v) => {
                    if coef == 0 {
                        if base != v {
                            return;
                        }
                    } else {
                        if (v - base) % coef != 0 {
                            return;
                        }
                        let c = (v - base) / coef;
                        if fixed.is_some_and(|f| f != c) {
                            return;
                        }
                        fixed = Some(c);
                    }
                }
            }
        }
        let range = match fixed {
            Some(c) if (lo..=hi).contains(&c) => c..=c,
            Some(_) => return,
            None => lo..=hi,
        };
        for c1 in range {
            self.tuples[t - 1][0] = c1 as i64;
            self.tuples[t - 1][1..].copy_from_slice(rest);
            for &s in &live {
                let (base, coef) = self.affine(&self.rows[s - 1], rest);
                let v = base + coef * c1;
                self.rows[s - 1].push(v);
            }
            self.step(t + 1);
            for &s in &live {
                self.rows[s - 1].pop();
            }
            if self.clock.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    /// Regenerates all rows cyclically and checks positivity, closure and
    /// the product identity.
    fn closes(&self) -> bool {
        xi_sequence_closes(self.k, self.n, &self.tuples)
    }
}

/// True when the integer ξ-sequence reconstructs to a positive frieze.
pub fn xi_sequence_closes(k: usize, n: usize, tuples: &[Vec<i64>]) -> bool {
    let p = n + k + 1;
    for s in 1..=p {
        let mut row: Vec<i128> = vec![0; k - 1];
        row.push(1);
        for g in 1..=n + k {
            let j = (s + g - 2) % p;
            let c = &tuples[j];
            let a = &row[row.len() - k..];
            let mut v = sign(k - 1) * a[0];
            for r in 1..k {
                v += sign(k - 1 - r) * c[r - 1] as i128 * a[r];
            }
            match target(n, g) {
                Target::Band if v < 1 => return false,
                Target::Exact(x) if v != x => return false,
                _ => {}
            }
            row.push(v);
        }
    }
    // product of the ξ matrices equals ε·I
    let mut m: Vec<Vec<i128>> = (0..k).map(|r| (0..k).map(|c| i128::from(r == c)).collect()).collect();
    for c in tuples {
        let mut x = vec![vec![0i128; k]; k];
        for r in 1..k {
            x[r][r - 1] = 1;
            x[r][k - 1] = sign(k - 1 - r) * c[r - 1] as i128;
        }
        x[0][k - 1] = sign(k + 1);
        m = (0..k).map(|r| (0..k).map(|cc| (0..k).map(|t| m[r][t] * x[t][cc]).sum()).collect()).collect();
    }
    let eps = sign(k - 1);
    (0..k).all(|r| (0..k).all(|c| m[r][c] == if r == c { eps } else { 0 }))
}

fn run_xi_search(k: usize, n: usize, bound: i64, parallel: bool, clock: &Clock) -> Vec<XiKey> {
    let p = n + k + 1;
    // split on the tuple at column 1
    let firsts: Vec<Vec<i64>> = {
        let mut v = Vec::new();
        let mut cur = vec![0i64; k - 1];
        loop {
            v.push(cur.clone());
            if !XiSearch::advance(&mut cur, bound) {
                break;
            }
        }
        v
    };
    let task = |first: &Vec<i64>| {
        let mut s = XiSearch::new(k, n, bound, clock);
        s.rows.push(s.seed());
        let live = [1usize];
        let (base, coef) = s.affine(&s.rows[0], &first[1..]);
        let v = base + coef * first[0] as i128;
        if v < 1 || p < 2 {
            clock.flush(s.local);
            return Vec::new();
        }
        s.tuples[0] = first.clone();
        for &l in &live {
            s.rows[l - 1].push(v);
        }
        s.step(2);
        clock.flush(s.local);
        s.out
    };
    let mut out: Vec<XiKey> =
        if parallel { firsts.par_iter().flat_map_iter(task).collect() } else { firsts.iter().flat_map(task).collect() };
    out.sort();
    out
}

fn small_row(r: &[Rational]) -> Option<Vec<i64>> {
    r.iter().map(|v| if v.is_integer() && v.is_positive() { v.to_integer().to_i64() } else { None }).collect()
}

fn scan_rows(k: usize, n: usize, bound: i64, parallel: bool, clock: &Clock) -> Vec<XiKey> {
    let p = n + k + 1;
    let cells = n * (k - 1);
    let total = (bound as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    let decode = |mut idx: u128| -> Vec<Vec<Rational>> {
        let mut vals = Vec::with_capacity(cells);
        for _ in 0..cells {
            vals.push(Rational::from_integer(((idx % bound as u128) as i64 + 1).into()));
            idx /= bound as u128;
        }
        vals.chunks(n).map(<[Rational]>::to_vec).collect()
    };
    let task = |idx: u128| -> Option<XiKey> {
        let mut local = 0;
        if !clock.tick(&mut local) {
            return None;
        }
        clock.flush(local);
        let mut rows = decode(idx);
        while rows.len() < p + k - 1 {
            let window = &rows[rows.len() - (k - 1)..];
            match continue_row(k, n, window, Constraint::IntegerRange { lo: 1, hi: 1 << 19 }).ok()? {
                Continuation::Unique(r) => {
                    small_row(&r)?;
                    rows.push(r);
                }
                _ => return None,
            }
        }
        if rows[p..] != rows[..k - 1] {
            return None;
        }
        rows.truncate(p);
        let f = FriezePattern::periodic(k, n, rows).ok()?;
        let report = classify(&f).ok()?;
        if !(report.is_slk && report.tame && report.positive && report.integral) {
            return None;
        }
        let xi = crate::xi::extract_xi(&f).ok()?;
        xi.tuples().iter().map(|t| small_row_signed(t)).collect()
    };
    let mut out: Vec<XiKey> = if parallel {
        (0..total).into_par_iter().filter_map(task).collect()
    } else {
        (0..total).filter_map(task).collect()
    };
    out.sort();
    out
}

fn small_row_signed(r: &[Rational]) -> Option<Vec<i64>> {
    r.iter().map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None }).collect()
}

/// Least rotation of the sequence.
pub fn canonical_rotation(key: &[Vec<i64>]) -> XiKey {
    (0..key.len()).map(|r| key[r..].iter().chain(&key[..r]).cloned().collect::<Vec<_>>()).min().unwrap_or_default()
}

fn canonicalize(keys: Vec<XiKey>, convention: Convention) -> Vec<XiKey> {
    let set: BTreeSet<XiKey> = match convention {
        Convention::PatternEquality => keys.into_iter().collect(),
        Convention::ShiftEquivalence => keys.iter().map(|k| canonical_rotation(k)).collect(),
    };
    set.into_iter().collect()
}

pub fn frieze_from_key(k: usize, key: &XiKey) -> Option<FriezePattern> {
    let s = XiSequence::from_i64(k, key).ok()?;
    let f = reconstruct(&s).ok()?;
    // report one full diagonal period so friezes from different keys are comparable
    let p = f.glide_period();
    let rows = (1..=p).map(|i| f.band(i).map(<[Rational]>::to_vec)).collect::<Result<Vec<_>, _>>().ok()?;
    FriezePattern::periodic(k, f.n(), rows).ok()
}

/// Runs the bound schedule until two consecutive counts agree.
pub fn enumerate_tame_positive(cfg: &EnumerationConfig) -> Result<EnumerationResult, EnumerateError> {
    if cfg.k < 2 || cfg.n == 0 {
        return Err(EnumerateError::BadShape);
    }
    if cfg.bound_schedule.is_empty() {
        return Err(EnumerateError::EmptySchedule);
    }
    let start = Instant::now();
    let clock = Clock { deadline: start + cfg.budget, stop: AtomicBool::new(false), nodes: AtomicU64::new(0) };
    let mut result = EnumerationResult {
        k: cfg.k,
        n: cfg.n,
        convention: cfg.convention,
        algorithm: cfg.algorithm,
        bound_schedule: Vec::new(),
        count_per_bound: Vec::new(),
        stabilized: false,
        keys: Vec::new(),
        friezes: Vec::new(),
        nodes: 0,
        elapsed: Duration::ZERO,
        budget_exhausted: false,
    };
    for &b in &cfg.bound_schedule {
        let bound = i64::try_from(b).unwrap_or(i64::MAX);
        let raw = match cfg.algorithm {
            Algorithm::XiSearch => run_xi_search(cfg.k, cfg.n, bound, cfg.parallel, &clock),
            Algorithm::RowScan => scan_rows(cfg.k, cfg.n, bound, cfg.parallel, &clock),
        };
        let keys = canonicalize(raw, cfg.convention);
        result.bound_schedule.push(b);
        result.count_per_bound.push(keys.len());
        result.keys = keys;
        if clock.stop.load(Ordering::Relaxed) {
            result.budget_exhausted = true;
            break;
        }
        let c = &result.count_per_bound;
        if c.len() >= 2 && c[c.len() - 1] == c[c.len() - 2] {
            result.stabilized = true;
            break;
        }
    }
    result.friezes = result.keys.iter().take(cfg.keep).filter_map(|k| frieze_from_key(cfg.k, k)).collect();
    result.nodes = clock.nodes.load(Ordering::Relaxed);
    result.elapsed = start.elapsed();
    if result.budget_exhausted {
        Err(EnumerateError::BudgetExhausted(Box::new(result)))
    } else {
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: usize, n: usize, schedule: &[u64]) -> EnumerationConfig {
        EnumerationConfig { bound_schedule: schedule.to_vec(), ..EnumerationConfig::new(k, n) }
    }

    #[test]
    fn cc_counts_are_catalan() {
        // k=2: friezes of height n correspond to triangulations of an (n+3)-gon
        for (n, want) in [(1, 2), (2, 5), (3, 14), (4, 42)] {
            let r = enumerate_tame_positive(&cfg(2, n, &[8, 16])).unwrap();
            assert_eq!(r.count(), Some(want), "n = {n}");
        }
    }

    #[test]
    fn caps() {
        // k=3: last band entry is c_1 <= B, the one before at most B^2
        assert_eq!(entry_caps(3, 3, 5), vec![1, 5, 25, 126]);
        assert_eq!(entry_caps(2, 3, 5), vec![1, 5, 26, 135]);
    }

    #[test]
    fn rotation_canonical() {
        let key = vec![vec![2], vec![1], vec![3]];
        assert_eq!(canonical_rotation(&key), vec![vec![1], vec![3], vec![2]]);
    }

    #[test]
    fn empty_schedule() {
        assert_eq!(enumerate_tame_positive(&cfg(3, 1, &[])), Err(EnumerateError::EmptySchedule));
    }
}
