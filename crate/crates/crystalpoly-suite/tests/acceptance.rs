//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any criterion fails.

use crystalpoly::arrangement::{Arrangement, CellState};
use crystalpoly::bounds::{self, AlphaKind, Shape};
use crystalpoly::construct::{self, kr, s_one, BoundaryKind, Corner, CornerSet, Family};
use crystalpoly::enumerate;
use crystalpoly::topology::{dual_graph, holes, is_efficiently_structured, summarize};
use crystalpoly::transform::{compress, expand, is_compressible, witness};
use crystalpoly::Polyomino;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const CENSUS_LIMIT: Duration = Duration::from_secs(5 * 60);
const DEEP_LIMIT: Duration = Duration::from_secs(60 * 60);
const TABLE_LIMIT: Duration = Duration::from_secs(1);
const SUITE_LIMIT: Duration = Duration::from_secs(10);
const SWEEP_LIMIT: Duration = Duration::from_secs(10 * 60);
const FUZZ_CASES_PER_SIDE: usize = 4000;
const FUZZ_SEED: u64 = 0x5eed;
const JUMP_H_MAX: u64 = 500;

/// g(h) and the number of free crystallized shapes for h = 1..=8.
const SMALL_TABLE: [(u64, u64); 8] = [(7, 1), (11, 4), (14, 3), (17, 8), (19, 1), (23, 64), (25, 4), (28, 37)];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 small-h census", small_h_census),
        ("2 g table for 9..=113", g_table),
        ("3 construction suite", construction_suite),
        ("4 witnesses for 1..=113", witnesses),
        ("5 expansion and compression", expansion_compression),
        ("6 invariant sweep to n=12", invariant_sweep),
        ("7 formula cross-checks", formula_cross_checks),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(note) => println!("PASS  {name}  ({secs:.2}s)  {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  ({secs:.2}s)  {why}");
            }
        }
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn one_thread<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn census_matches(max_n: usize, hs: std::ops::RangeInclusive<usize>) -> Result<(), String> {
    let t = one_thread(|| enumerate::census(max_n)).map_err(|e| e.to_string())?;
    let (min_n, counts) = (t.min_n_for_h(), t.crystal_counts());
    for h in hs {
        let (g, c) = SMALL_TABLE[h - 1];
        let got = (min_n.get(&h).map(|&n| n as u64), counts.get(&h).copied());
        ensure(got == (Some(g), Some(c)), || format!("census({max_n}) h={h}: got {got:?}, want g={g} count={c}"))?;
    }
    Ok(())
}

fn small_h_census() -> Verdict {
    let start = Instant::now();
    census_matches(14, 1..=3)?;
    within(start, CENSUS_LIMIT, "census(14)")?;
    let shallow = start.elapsed();
    let deep = Instant::now();
    census_matches(17, 1..=4)?;
    within(deep, DEEP_LIMIT, "census(17)")?;
    for h in 1..=8u64 {
        let (g, _) = SMALL_TABLE[h as usize - 1];
        ensure(bounds::g(h).map_err(|e| e.to_string())?.g == g, || format!("bounds::g({h}) != {g}"))?;
        let (p, _) = witness(h).map_err(|e| format!("witness({h}): {e}"))?;
        let s = summarize(&p);
        ensure((s.n as u64, s.h as u64) == (g, h), || format!("witness({h}) has n={} h={}", s.n, s.h))?;
    }
    Ok(format!("census(14) {shallow:.1?} single-threaded, census(17) {:.0?}", deep.elapsed()))
}

fn g_table() -> Verdict {
    let expected: Vec<serde_json::Value> = include_str!("data/g_table.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let v: Vec<u64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            serde_json::json!({ "h": v[0], "g": v[1], "is_h_alpha": v[2] == 1 })
        })
        .collect();
    let golden = serde_json::to_string(&expected).unwrap();
    let start = Instant::now();
    let rows = bounds::table_rows(9, 113).map_err(|e| e.to_string())?;
    let got = serde_json::to_string(&rows).unwrap();
    within(start, TABLE_LIMIT, "table_rows")?;
    if got == golden {
        return Ok("byte-exact".into());
    }
    let diffs: Vec<String> = rows
        .iter()
        .zip(&expected)
        .filter(|(r, e)| serde_json::to_value(r).unwrap() != **e)
        .map(|(r, e)| format!("h={}: computed g={} h_alpha={}, frozen g={} h_alpha={}", r.h, r.g, r.is_h_alpha, e["g"], e["is_h_alpha"]))
        .collect();
    Err(format!("JSON differs at {} row(s): {}", diffs.len(), diffs.join("; ")))
}

const SUITE: [(Family, u32); 7] = [
    (Family::S1, 3),
    (Family::S2, 4),
    (Family::S0, 3),
    (Family::R0, 7),
    (Family::R1, 7),
    (Family::R2, 7),
    (Family::Kr, 4),
];

fn construction_suite() -> Verdict {
    let start = Instant::now();
    let mut members = 0;
    for (fam, top) in SUITE {
        for k in 1..=top {
            let p = fam.generate(k).map_err(|e| format!("{} k={k}: {e}", fam.name()))?;
            let s = summarize(&p);
            let want = fam.closed_form(k as u64);
            ensure((s.h as u64, s.n as u64) == want, || format!("{} k={k}: (h,n)=({},{}) want {want:?}", fam.name(), s.h, s.n))?;
            let r = is_efficiently_structured(&p).map_err(|e| e.to_string())?;
            ensure(r.efficient, || format!("{} k={k} not efficient: {:?}", fam.name(), r.reasons))?;
            members += 1;
        }
    }
    within(start, SUITE_LIMIT, "construction suite")?;
    Ok(format!("{members} members"))
}

fn witnesses() -> Verdict {
    let mut failures = Vec::new();
    for h in 1..=113u64 {
        let ok = witness(h).map_err(|e| e.to_string()).and_then(|(p, _)| {
            let s = summarize(&p);
            let g = bounds::g(h).map_err(|e| e.to_string())?.g;
            let good = s.n as u64 == g && s.h as u64 == h && s.dual_acyclic && s.hole_areas.iter().all(|&a| a == 1);
            ensure(good, || format!("n={} h={} acyclic={} areas={:?}", s.n, s.h, s.dual_acyclic, s.hole_areas))
        });
        if let Err(e) = ok {
            failures.push(format!("h={h}: {e}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("failure set empty".into())
}

fn kinds() -> Vec<BoundaryKind> {
    let mut out = vec![BoundaryKind::D1];
    out.extend(Corner::ALL.map(BoundaryKind::D2));
    for mask in 0u8..16 {
        let cs: Vec<Corner> = Corner::ALL.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c).collect();
        if (1..=2).contains(&cs.len()) {
            out.push(BoundaryKind::from_filled(CornerSet::of(&cs)).unwrap());
        }
    }
    out
}

fn random_expanded(rng: &mut ChaCha8Rng, n: usize, kinds: &[BoundaryKind]) -> Arrangement {
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let mut a = construct::boundary(n, n, kind).unwrap();
    let density: f64 = rng.gen_range(0.2..0.9);
    for r in 1..n - 1 {
        for c in 1..n - 1 {
            let s = if (r + c) % 2 == 1 {
                CellState::Filled
            } else if r % 2 == 1 || rng.gen_bool(1.0 - density) {
                CellState::Empty
            } else {
                CellState::Filled
            };
            a.set(r, c, s);
        }
    }
    a
}

fn acyclic(a: &Arrangement) -> Option<Polyomino> {
    let p = a.to_polyomino().ok()?;
    dual_graph(&p).is_acyclic().then_some(p)
}

fn expansion_compression() -> Verdict {
    for l in 1..=5 {
        let a = Arrangement::from_polyomino(&kr(l).map_err(|e| e.to_string())?);
        if l > 1 {
            ensure(is_compressible(&a), || format!("kr({l}) not compressible"))?;
            ensure(expand(&compress(&a).map_err(|e| e.to_string())?).ok() == Some(a.clone()), || format!("E(C(kr({l}))) != kr({l})"))?;
        }
        let mut c = a;
        for _ in 1..l {
            c = compress(&c).map_err(|e| e.to_string())?;
        }
        ensure(c.to_polyomino().ok() == Some(s_one()), || format!("C^{}(kr({l})) != S_1", l - 1))?;
    }
    let kinds = kinds();
    let mut rng = ChaCha8Rng::seed_from_u64(FUZZ_SEED);
    let (mut cases, mut violations, mut acyclic_cases) = (0, 0, 0);
    for n in [5usize, 7, 9] {
        for _ in 0..FUZZ_CASES_PER_SIDE {
            let a = random_expanded(&mut rng, n, &kinds);
            let c = compress(&a).map_err(|e| e.to_string())?;
            ensure(expand(&c).ok() == Some(a.clone()), || format!("E(C(A)) != A at N={n}"))?;
            let left = acyclic(&a).is_some();
            let right = acyclic(&c).is_some_and(|p| holes(&p).iter().all(|h| h.len() == 1));
            violations += usize::from(left != right);
            acyclic_cases += usize::from(left);
            cases += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} of {cases} fuzz cases break the equivalence"))?;
    Ok(format!("{cases} fuzz cases, {acyclic_cases} acyclic, 0 violations"))
}

fn invariant_sweep() -> Verdict {
    let start = Instant::now();
    let r = enumerate::verify_invariants(12).map_err(|e| e.to_string())?;
    within(start, SWEEP_LIMIT, "verify_invariants(12)")?;
    ensure(r.is_clean(), || {
        let first: Vec<String> = r.violations.iter().take(5).map(|v| format!("{:?}: {}", v.invariant, v.shape)).collect();
        format!("{} violations, first: {}", r.violations.len(), first.join(" | "))
    })?;
    Ok(format!("{} shapes, {} one-break cases, 0 violations", r.shapes_checked, r.onebreak_cases))
}

fn formula_cross_checks() -> Verdict {
    let mut t_values = Vec::new();
    for n in 3..=25u64 {
        for a in [AlphaKind::square(n), AlphaKind::pronic(n)] {
            let t = bounds::t_alpha(a);
            ensure(t == bounds::t_alpha_by_definition(a), || format!("{a}: closed t={t}, definition {}", bounds::t_alpha_by_definition(a)))?;
            let kr = a.shape == Shape::Square && (n - 1).is_power_of_two();
            ensure(bounds::h_alpha(a) == t - u64::from(!kr), || format!("{a}: h_alpha={} t={t}", bounds::h_alpha(a)))?;
            let offset = match (a.shape, n % 3) {
                (Shape::Square, 1) => n * n,
                (Shape::Square, _) => n * n - 1,
                (Shape::Pronic, 2) => n * (n + 1) - 2,
                (Shape::Pronic, _) => n * (n + 1),
            };
            ensure(bounds::m(t) + t == offset, || format!("{a}: m(t)+t={} want {offset}", bounds::m(t) + t))?;
        }
    }
    for a in bounds::thresholds().take_while(|a| bounds::t_alpha(*a) <= JUMP_H_MAX + 3) {
        t_values.push(bounds::t_alpha(a));
    }
    let mut jumps = 0;
    for h in 1..=JUMP_H_MAX {
        let d = bounds::m(h + 1) - bounds::m(h);
        ensure(d == 2 || d == 3, || format!("m({})-m({h}) = {d}", h + 1))?;
        ensure((d == 3) == t_values.contains(&h), || format!("h={h}: step {d}, h is t_alpha: {}", t_values.contains(&h)))?;
        jumps += usize::from(d == 3);
    }
    Ok(format!("{jumps} jumps of 3 up to h={JUMP_H_MAX}, all at t_alpha"))
}
