//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::{cofactor_det, layout_entry, periodic_bands, q, slk_failures, window_bands, Q};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slk_frieze::classify::{
    dual_band_has_zero, has_period, lemma_check, locate_dual_offset, sylvester_residual, PeriodInfo,
};
use slk_frieze::enumerate::{enumerate_tame_positive, Algorithm, EnumerationConfig};
use slk_frieze::pattern::{DenseArray, Vertical};
use slk_frieze::unbounded::{self, FormulaTable, SegmentTemplate};
use slk_frieze::wild::{
    analyze, continue_row, fibonacci_word, induced_subgraph, loop_walk, walk_frieze, AnalysisCaps, Constraint,
    Continuation, GammaVertex,
};
use slk_frieze::xi::{extract_xi, reconstruct, xi_tuple};
use slk_frieze::{classify, fixtures, verify_slk, Array, ExactMatrix, FriezePattern};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bands_of(f: &FriezePattern) -> Box<dyn Fn(i64) -> Vec<Q>> {
    let rows = f.stored_rows().to_vec();
    match f.vertical() {
        Vertical::Periodic(_) => Box::new(periodic_bands(rows)),
        Vertical::Window { first_index } => Box::new(window_bands(rows, first_index)),
    }
}

/// Rows whose k×k windows lie inside the stored data.
fn checked_rows(f: &FriezePattern) -> std::ops::RangeInclusive<i64> {
    let (lo, hi) = f.row_span();
    match f.vertical() {
        Vertical::Periodic(_) => lo..=hi,
        Vertical::Window { .. } => lo..=hi + 1 - f.k() as i64,
    }
}

fn q_segment(ell: i64) -> FriezePattern {
    let rows = unbounded::printed_segment(ell).expect("printed segment");
    let rows = rows.into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect();
    FriezePattern::window_mode(3, 8, 12 * ell + 1, rows).unwrap()
}

fn printed_arrays() -> Vec<(&'static str, FriezePattern)> {
    vec![
        ("intro", fixtures::intro()),
        ("tame", fixtures::tame_example()),
        ("tame_nongeneric", fixtures::nongeneric_example()),
        ("wild", fixtures::wild_example()),
        ("q0", q_segment(0)),
        ("q1", q_segment(1)),
    ]
}

fn fixture_verification() -> Outcome {
    let mut windows = 0;
    for (name, f) in printed_arrays() {
        let r = verify_slk(&f, None).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), format!("{name}: {} windows with determinant != 1", r.failures.len()))?;
        let bad = slk_failures(f.k(), f.n(), &*bands_of(&f), checked_rows(&f));
        ensure(bad.is_empty(), format!("{name}: cofactor oracle rejects windows {bad:?}"))?;
        windows += r.windows_checked;
    }
    Ok(format!("6 arrays, {windows} windows, all determinants 1"))
}

fn classification() -> Outcome {
    let big_vanish = |f: &FriezePattern| common::all_big_minors_vanish(f.k(), f.n(), &*bands_of(f), checked_rows(f));
    let label = |name: &str, f: &FriezePattern| -> Result<slk_frieze::ClassificationReport, String> {
        let r = classify(f).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.tame == big_vanish(f), format!("{name}: tameness disagrees with the minor oracle"))?;
        Ok(r)
    };
    let t = label("tame", &fixtures::tame_example())?;
    ensure(
        t.is_slk && t.tame && t.generic && t.positive && t.integral && t.period == PeriodInfo::Found(2),
        format!("tame example: {t}"),
    )?;
    let g = label("tame_nongeneric", &fixtures::nongeneric_example())?;
    ensure(g.is_slk && g.tame && !g.generic, format!("nongeneric example: {g}"))?;
    let w = label("wild", &fixtures::wild_example())?;
    ensure(
        w.is_slk && w.wild && w.positive && w.integral && w.period == PeriodInfo::Found(2),
        format!("wild example: {w}"),
    )?;
    let c = label("cc", &fixtures::cc_height1())?;
    ensure(c.is_slk && c.tame && c.generic && c.period.period().is_some(), format!("cc: {c}"))?;
    let intro = fixtures::intro();
    let i = label("intro", &intro)?;
    ensure(i.is_slk, "intro array is not SL_3")?;
    let verdict = if big_vanish(&intro) { "tame" } else { "wild" };
    Ok(format!("labels match; intro array is SL_3 and {verdict} by the 4x4-minor oracle (wild was anticipated)"))
}

fn window_matrix(f: &FriezePattern, i: i64, j: i64) -> ExactMatrix {
    let k = f.k() as i64;
    let rows = (0..k).map(|r| (0..k).map(|c| f.at(i + r, j + c).unwrap()).collect()).collect();
    ExactMatrix::from_rows(rows).unwrap()
}

/// `B_j = F_{i,j}^{-1} F_{i,j+1}` for `j = 1..=n+k+1`, checked for
/// independence of `i` over three rows.
fn transfer_matrices(f: &FriezePattern) -> Result<Vec<ExactMatrix>, String> {
    let p = f.glide_period();
    let mut out = Vec::new();
    for j in 1..=p {
        let per_i: Vec<ExactMatrix> = (1..=3)
            .map(|i| window_matrix(f, i, j).solve(&window_matrix(f, i, j + 1)).unwrap().expect("invertible"))
            .collect();
        ensure(per_i.iter().all(|b| *b == per_i[0]), format!("B_{j} depends on i"))?;
        out.push(per_i[0].clone());
    }
    Ok(out)
}

fn product(ms: &[ExactMatrix]) -> ExactMatrix {
    let size = ms[0].rows();
    ms.iter().fold(ExactMatrix::identity(size), |acc, m| {
        let mut out = ExactMatrix::zeros(size, size);
        for r in 0..size {
            for c in 0..size {
                let v = (0..size).fold(Q::zero(), |s, t| s + acc.get(r, t) * m.get(t, c));
                out.set(r, c, v);
            }
        }
        out
    })
}

fn xi_suite() -> Outcome {
    let f = fixtures::tame_example();
    let bs = transfer_matrices(&f)?;
    ensure(bs.len() == 8, "expected 8 transfer matrices")?;
    let s = extract_xi(&f).map_err(|e| e.to_string())?;
    for (j, b) in bs.iter().enumerate() {
        let t = xi_tuple(b).ok_or(format!("B_{} is not of ξ shape", j + 1))?;
        ensure(t == s.tuple(j as i64 + 1), format!("extracted tuple {} differs", j + 1))?;
    }
    ensure(product(&bs) == ExactMatrix::identity(3), "product over a period is not +I")?;
    let cc = fixtures::cc_height1();
    let neg = ExactMatrix::identity(2).scale(&-Q::one());
    ensure(product(&transfer_matrices(&cc)?) == neg, "CC product is not -I")?;
    for (name, g) in [("tame", &f), ("cc", &cc), ("nongeneric", &fixtures::nongeneric_example())] {
        let back = reconstruct(&extract_xi(g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let p = g.stored_period().unwrap() as i64;
        let same = (1..=p).all(|i| (i - 4..=i + 12).all(|j| back.at(i, j).unwrap() == g.at(i, j).unwrap()));
        ensure(same, format!("{name}: reconstruct(extract) differs"))?;
    }
    Ok("24 transfer matrices independent of i, ξ shape exact, products +I and -I, round trip exact".into())
}

fn sylvester() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5117);
    let mut checked = 0usize;
    for _ in 0..1000 {
        let rows: Vec<Vec<Q>> = (0..6).map(|_| (0..6).map(|_| q(rng.gen_range(-9..=9))).collect()).collect();
        let a = DenseArray::new(rows);
        for size in 1..=4usize {
            for i in 1..=(6 - size as i64) {
                for j in 1..=(6 - size as i64) {
                    let r = sylvester_residual(&a, i, j, size).map_err(|e| e.to_string())?;
                    ensure(r.is_zero(), format!("residual {r} at ({i},{j}) size {size}"))?;
                    let m = |ii: i64, jj: i64, s: usize| {
                        let w = a.window_rect(ii, jj, s, s).unwrap();
                        cofactor_det(&(0..s).map(|r| w.row(r).to_vec()).collect::<Vec<_>>())
                    };
                    let oracle = m(i, j, size + 1) * m(i + 1, j + 1, size - 1)
                        - (m(i, j, size) * m(i + 1, j + 1, size) - m(i + 1, j, size) * m(i, j + 1, size));
                    ensure(oracle.is_zero(), format!("cofactor residual nonzero at ({i},{j}) size {size}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} residuals, all zero"))
}

fn dual_theorem() -> Outcome {
    let mut found = Vec::new();
    for (name, f) in [("tame", fixtures::tame_example()), ("tame_nongeneric", fixtures::nongeneric_example())] {
        let (s, t) = locate_dual_offset(&f).map_err(|e| e.to_string())?.ok_or(format!("{name}: no offset"))?;
        let (k, n) = (f.k(), f.n());
        let band = bands_of(&f);
        for i in 1..=f.stored_period().unwrap() as i64 {
            for j in i - k as i64..=i + n as i64 + 1 {
                let w = common::window(k, n, &*band, i, j, k - 1);
                ensure(
                    cofactor_det(&w) == layout_entry(k, n, &*band, j + t, i + s),
                    format!("{name}: mismatch at ({i},{j})"),
                )?;
            }
        }
        found.push(format!("{name} ({s},{t})"));
    }
    ensure(dual_band_has_zero(&fixtures::nongeneric_example()).unwrap(), "nongeneric dual band has no zero")?;
    ensure(!dual_band_has_zero(&fixtures::tame_example()).unwrap(), "generic dual band has a zero")?;
    Ok(format!("offsets {}; nongeneric dual band contains a zero", found.join(", ")))
}

fn random_frieze(rng: &mut ChaCha8Rng) -> Option<FriezePattern> {
    let k = rng.gen_range(2..=4usize);
    let n = rng.gen_range(1..=4usize);
    let mut rows: Vec<Vec<Q>> = (0..k - 1)
        .map(|_| (0..n).map(|_| Q::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=4).into())).collect())
        .collect();
    for _ in 0..6 {
        let tail = rows[rows.len() + 1 - k..].to_vec();
        match continue_row(k, n, &tail, Constraint::ExactRational).ok()? {
            Continuation::Unique(r) => rows.push(r),
            _ => return None,
        }
    }
    FriezePattern::window_mode(k, n, 1, rows).ok()
}

fn lemma() -> Outcome {
    let mut fixtures_checked = 0;
    for f in [
        fixtures::intro(),
        fixtures::tame_example(),
        fixtures::nongeneric_example(),
        fixtures::wild_example(),
        fixtures::cc_height1(),
    ] {
        ensure(lemma_check(&f).unwrap().holds(), "counterexample among fixtures")?;
        fixtures_checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e33a);
    let (mut kept, mut drawn) = (0, 0);
    while kept < 100 {
        drawn += 1;
        ensure(drawn <= 100_000, format!("only {kept} random friezes satisfy the hypothesis"))?;
        let Some(f) = random_frieze(&mut rng) else { continue };
        ensure(verify_slk(&f, None).unwrap().passed(), "random continuation is not SL_k")?;
        let c = lemma_check(&f).map_err(|e| e.to_string())?;
        if !c.hypothesis {
            continue;
        }
        ensure(c.conclusion, format!("counterexample:\n{f}"))?;
        kept += 1;
    }
    Ok(format!("{fixtures_checked} fixtures and {kept} random friezes (of {drawn} drawn), no counterexample"))
}

fn wild_graph() -> Outcome {
    let pieces = fixtures::a_pieces();
    ensure(pieces.len() == 12, "expected 12 pieces")?;
    let g = induced_subgraph(&pieces, 4);
    let mut lib = BTreeSet::new();
    let mut oracle = BTreeSet::new();
    for (a, va) in pieces.iter().enumerate() {
        for (b, vb) in pieces.iter().enumerate() {
            if g.has_edge(va, vb) {
                lib.insert((a + 1, b + 1));
            }
            let mut rows = va.rational_rows();
            rows.push(vb.rational_rows().pop().unwrap());
            let overlap = va.rows()[1] == vb.rows()[0];
            if overlap && slk_failures(3, 5, &window_bands(rows, 1), 1..=1).is_empty() {
                oracle.insert((a + 1, b + 1));
            }
        }
    }
    ensure(lib == oracle, format!("edges {lib:?} differ from brute force {oracle:?}"))?;
    let expected: BTreeSet<(usize, usize)> = [
        (1, 8),
        (2, 11),
        (3, 9),
        (3, 10),
        (4, 12),
        (5, 4),
        (6, 3),
        (7, 1),
        (7, 2),
        (8, 9),
        (8, 10),
        (9, 5),
        (10, 7),
        (11, 6),
        (12, 1),
        (12, 2),
    ]
    .into_iter()
    .collect();
    ensure(lib == expected, format!("edge set {lib:?}"))?;
    let analysis = analyze(&g, AnalysisCaps::default());
    ensure(analysis.cycles.len() >= 2, "fewer than two cycles")?;
    let pick = |idx: &[usize]| -> Vec<GammaVertex> { idx.iter().map(|&i| pieces[i - 1].clone()).collect() };
    let (short, long) = (pick(&[1, 8, 10, 7]), pick(&[1, 8, 9, 5, 4, 12]));
    let word = fibonacci_word(2200);
    let walk = loop_walk([&short, &long], &word).map_err(|e| e.to_string())?;
    let f = walk_frieze(&g, &walk[..9999]).map_err(|e| e.to_string())?;
    ensure(f.stored_rows().len() == 10_000, format!("walk has {} rows", f.stored_rows().len()))?;
    let r = verify_slk(&f, None).map_err(|e| e.to_string())?;
    ensure(r.passed(), format!("{} failing windows", r.failures.len()))?;
    let periodic = (1..=1000).find(|&d| has_period(&f, d));
    ensure(periodic.is_none(), format!("vertical period {periodic:?}"))?;
    Ok(format!(
        "16 edges, {} cycles, 10000-row walk with {} windows all 1, no period <= 1000",
        analysis.cycles.len(),
        r.windows_checked
    ))
}

fn enumeration() -> Outcome {
    let mut notes = Vec::new();
    for (n, target) in [(1usize, 5usize), (2, 51)] {
        let cfg = EnumerationConfig { budget: Duration::from_secs(600), ..EnumerationConfig::new(3, n) };
        let r = enumerate_tame_positive(&cfg).map_err(|e| e.to_string())?;
        ensure(r.stabilized && r.count() == Some(target), format!("n={n}: {r}"))?;
        let scan = EnumerationConfig {
            algorithm: Algorithm::RowScan,
            bound_schedule: vec![8, 16],
            budget: Duration::from_secs(600),
            ..EnumerationConfig::new(3, n)
        };
        let s = enumerate_tame_positive(&scan).map_err(|e| e.to_string())?;
        let (a, b): (BTreeSet<_>, BTreeSet<_>) = (r.keys.iter().collect(), s.keys.iter().collect());
        ensure(a == b, format!("n={n}: row scan finds {} friezes, ξ search {}", b.len(), a.len()))?;
        notes.push(format!("n={n}: {target} {:?}", r.count_per_bound));
    }
    let stretch = EnumerationConfig { budget: Duration::from_secs(300), ..EnumerationConfig::new(3, 3) };
    match enumerate_tame_positive(&stretch) {
        Ok(r) if r.stabilized => {
            notes.push(format!("n=3: {} {:?} (stretch, budget 300 s)", r.count().unwrap(), r.count_per_bound))
        }
        Ok(r) => notes.push(format!("n=3: not stabilized {:?} (stretch)", r.count_per_bound)),
        Err(e) => notes.push(format!("n=3: {e} (stretch)")),
    }
    notes.push("convention pattern-equality".into());
    notes.push("height numbering conflict: these counts occur at n=1,2,3, the published list puts them at heights 2,3,4 and 26952 is also placed at height 4, left unresolved; n=4 is the ignored long-run test".into());
    Ok(notes.join("; "))
}

fn unbounded_frieze() -> Outcome {
    let parsed = unbounded::parse_formulas(unbounded::CLOSED_FORMS).map_err(|e| e.to_string())?;
    let template = SegmentTemplate::standard();
    let (q0, q1) = (unbounded::printed_segment(0).unwrap(), unbounded::printed_segment(1).unwrap());
    let derived = unbounded::derive_missing_constants(&parsed, &template, &q0, &q1).map_err(|e| e.to_string())?;
    let pairs: Vec<(usize, Q)> = derived.iter().map(|d| (d.index, d.value.clone())).collect();
    ensure(
        derived.iter().all(|d| d.confirmed)
            && pairs == unbounded::REPAIRED_CONSTANTS.iter().map(|&(i, v)| (i, q(v))).collect::<Vec<_>>(),
        format!("derived constants {pairs:?}"),
    )?;
    let ints: Vec<(usize, i64)> = derived.iter().map(|d| (d.index, d.value.to_integer().try_into().unwrap())).collect();
    let table = FormulaTable::new(parsed, &ints).map_err(|e| e.to_string())?;

    let mut slots = 0;
    for (ell, printed) in [(0, &q0), (1, &q1)] {
        let seg = template.instantiate(&table, ell).map_err(|e| e.to_string())?;
        let to_q = |rows: &Vec<Vec<num_bigint::BigInt>>| -> Vec<Vec<Q>> {
            rows.iter().map(|r| r.iter().cloned().map(Q::from_integer).collect()).collect()
        };
        let (a, b) = (to_q(&seg), to_q(printed));
        let (fa, fb) = (window_bands(a, 1), window_bands(b, 1));
        for i in 1..=12 {
            for j in i - 1..i + 11 {
                ensure(
                    layout_entry(3, 8, &fa, i, j) == layout_entry(3, 8, &fb, i, j),
                    format!("segment {ell} differs at ({i},{j})"),
                )?;
                slots += 1;
            }
        }
    }
    for ell in -10..=10 {
        for idx in 1..=unbounded::FORMULA_COUNT {
            let v = table.entry(idx, ell).map_err(|e| format!("a_{idx}({ell}): {e}"))?;
            ensure(v.is_positive(), format!("a_{idx}({ell}) = {v}"))?;
        }
        let t = |l: i64| table.entry(28, l).unwrap();
        if ell.abs() <= 8 {
            ensure(t(ell + 2) == 18 * t(ell + 1) - t(ell), format!("t recurrence fails at {ell}"))?;
        }
    }
    ensure(table.entry(28, 0).unwrap() == 2.into() && table.entry(28, 1).unwrap() == 18.into(), "t_0, t_1")?;
    let rep = unbounded::verify_concatenation(-3, 3).map_err(|e| e.to_string())?;
    ensure(rep.passed(), format!("stack [-3,3]: {} failing windows", rep.slk.failures.len()))?;
    let grow = unbounded::verify_concatenation(-5, 5).map_err(|e| e.to_string())?;
    let maxes: Vec<_> = grow.max_entries.iter().map(|(_, m)| m.clone()).collect();
    let mid = 5;
    ensure(
        (mid..maxes.len() - 1).all(|i| maxes[i + 1] > maxes[i]) && (1..=mid).all(|i| maxes[i - 1] > maxes[i]),
        format!("max entries not monotone: {maxes:?}"),
    )?;
    Ok(format!(
        "constants a_30 = a_62 = 1 derived, {slots} printed slots equal, 76 entries integral positive for |l| <= 10, \
         seams SL_3 over [-3,3] ({} windows), growth monotone over [-5,5], t recurrence exact",
        rep.slk.windows_checked
    ))
}

fn bareiss() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xba7e);
    for t in 0..1000 {
        let size = rng.gen_range(1..=5usize);
        let rows: Vec<Vec<Q>> = (0..size)
            .map(|_| (0..size).map(|_| Q::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into())).collect())
            .collect();
        let m = ExactMatrix::from_rows(rows.clone()).unwrap();
        ensure(m.det().unwrap() == cofactor_det(&rows), format!("matrix {t} disagrees"))?;
    }
    Ok("1000 matrices up to 5x5, exact agreement".into())
}

/// Writes to the stderr handle directly, past the harness output capture.
fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("fixture verification", fixture_verification, Duration::from_secs(1)),
        ("classification", classification, Duration::from_secs(10)),
        ("xi suite", xi_suite, Duration::from_secs(1)),
        ("sylvester identity", sylvester, Duration::from_secs(30)),
        ("dual frieze", dual_theorem, Duration::from_secs(10)),
        ("positivity lemma", lemma, Duration::from_secs(60)),
        ("wild graph walk", wild_graph, Duration::from_secs(120)),
        ("enumeration", enumeration, Duration::from_secs(600)),
        ("unbounded frieze", unbounded_frieze, Duration::from_secs(60)),
        ("exact determinant", bareiss, Duration::from_secs(30)),
    ];
    let mut failed = Vec::new();
    for (idx, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match &outcome {
            Ok(msg) => report(&format!("criterion {:>2} {name}: PASS ({took:.2?}, limit {limit:?}) {msg}", idx + 1)),
            Err(msg) => {
                report(&format!("criterion {:>2} {name}: FAIL ({took:.2?}, limit {limit:?}) {msg}", idx + 1));
                failed.push(idx + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
