//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ravol::census::{self, growth_graph, CensusResult, MoveKind};
use ravol::generators::antiprism;
use ravol::numerics::{
    antiprism4_side, check_identity_eq8, check_identity_eq9, v_oct, v_oct_f64, v_tet, Hp,
    PrecisionSpec, Verdict,
};
use ravol::realization::{ideal_volume, DEFAULT_TOL};
use ravol::spectra::{
    self, antiprism_summand, approximation_schedule, repeated_sum_convergence, repeated_sum_omega,
    weighted_average_check, SummandStats,
};
use ravol::volumes::{self, atkinson_bounds, landmark_constants};
use ravol::Kind;

/// Tolerance for values printed to six decimal places.
const PRINTED_TOL: f64 = 5e-7;
const SPECTRUM_TOL: f64 = 5e-6;
const REALIZED_TOL: f64 = 1e-6;
const GROWTH_TOL: f64 = 1e-5;
const WEIGHTED_TOL: f64 = 1e-12;
const SCHEDULE_EPS: f64 = 1e-4;
const SCHEDULE_TERMS: usize = 40;
const LIMIT_TOL: f64 = 1e-8;

const EQ8_PRINTED: &str = "6.02304602004718882363418931461679711549802902472249";

const IDEAL_COUNTS: [usize; 10] = [1, 0, 1, 1, 2, 2, 9, 11, 37, 79];
const COMPACT_COUNTS: [usize; 7] = [1, 0, 1, 1, 3, 4, 12];

/// (n, count, distinct, min ω, max ω) for the ideal class.
const IDEAL_ROWS: [(usize, usize, usize, &str, &str); 7] = [
    (6, 1, 1, "0.610643", "0.610643"),
    (7, 0, 0, "-", "-"),
    (8, 1, 1, "0.752880", "0.752880"),
    (9, 1, 1, "0.814191", "0.814191"),
    (10, 2, 2, "0.813788", "0.861241"),
    (11, 2, 2, "0.880628", "0.922674"),
    (12, 9, 7, "0.845784", "1.003841"),
];

/// A value printed to six decimals matches when it lies within `tol` of the
/// print or when the true value truncates to it.
fn matches_printed(x: f64, printed: &str, tol: f64) -> bool {
    let p: f64 = printed.parse().expect("printed value");
    if (x - p).abs() <= tol {
        return true;
    }
    let long = format!("{x:.12}");
    let dot = long.find('.').expect("decimal point");
    long[..dot + 7] == *printed
}

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(note.into());
        }
    }

    fn info(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

fn within(t: Instant, limit: Duration, out: &mut Outcome) {
    let e = t.elapsed();
    out.check(e < limit, format!("took {e:?}, limit {limit:?}"));
    out.info(format!("{:.2?}", e));
}

fn criterion_constants() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let p = PrecisionSpec::new(20).unwrap();
    let oct = v_oct(p).unwrap().value;
    let tet = v_tet(p).unwrap().value;
    out.check(
        matches_printed(oct, "3.663862", PRINTED_TOL),
        format!("v_oct {oct}"),
    );
    out.check(
        matches_printed(tet, "1.014941", PRINTED_TOL),
        format!("v_tet {tet}"),
    );
    let printed = [
        ('a', "0.068697"),
        ('b', "0.114495"),
        ('c', "0.317169"),
        ('d', "0.610643"),
        ('e', "0.634338"),
        ('f', "0.915965"),
        ('g', "1.221287"),
        ('h', "1.691558"),
        ('k', "1.831931"),
    ];
    let lm = landmark_constants(p).unwrap();
    for (name, s) in printed {
        let v = lm[&name].value;
        out.check(
            matches_printed(v, s, PRINTED_TOL),
            format!("{name} = {v:.9}, printed {s}"),
        );
    }
    within(t, Duration::from_secs(1), &mut out);
    out
}

fn criterion_closed_forms() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let d = PrecisionSpec::double();
    let cases = [
        ("A(3)", volumes::antiprism_volume(3, d), "3.663862"),
        ("A(4)", volumes::antiprism_volume(4, d), "6.023046"),
        ("L(5)", volumes::lobell_volume(5, d), "4.306210"),
        ("L(6)", volumes::lobell_volume(6, d), "6.023046"),
    ];
    for (name, v, s) in cases {
        let v = v.unwrap().value;
        out.check(
            (v - s.parse::<f64>().unwrap()).abs() <= PRINTED_TOL,
            format!("{name} = {v:.9}, printed {s}"),
        );
    }
    within(t, Duration::from_secs(1), &mut out);
    out
}

fn criterion_identities() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let eq8 = check_identity_eq8(50).unwrap();
    out.check(
        eq8.verdict == Verdict::Agree && eq8.agree_digits >= 50,
        format!("eq8 agrees to {} digits", eq8.agree_digits),
    );
    let common = antiprism4_side(&Hp::with_digits(1, 70)).truncated(50);
    out.check(common == EQ8_PRINTED, format!("common value {common}"));
    let eq9 = check_identity_eq9(30).unwrap();
    out.check(
        eq9.verdict == Verdict::Agree && eq9.agree_digits >= 30,
        format!("eq9 agrees to {} digits", eq9.agree_digits),
    );
    within(t, Duration::from_secs(10), &mut out);
    out
}

fn check_counts(res: &CensusResult, first: usize, step: usize, want: &[usize], out: &mut Outcome) {
    let counts = res.counts();
    for (i, &w) in want.iter().enumerate() {
        let n = first + step * i;
        let got = counts.get(&n).copied().unwrap_or(0);
        out.check(got == w, format!("n = {n}: {got} != {w}"));
    }
}

fn criterion_ideal_census(res: &CensusResult, elapsed: Duration) -> Outcome {
    let mut out = Outcome::new();
    check_counts(res, 6, 1, &IDEAL_COUNTS, &mut out);
    out.check(
        elapsed < Duration::from_secs(300),
        format!("took {elapsed:?}"),
    );
    out.info(format!("{elapsed:.2?}"));
    out
}

fn criterion_compact_census(res: &CensusResult, elapsed: Duration) -> Outcome {
    let mut out = Outcome::new();
    check_counts(res, 20, 2, &COMPACT_COUNTS, &mut out);
    out.check(
        elapsed < Duration::from_secs(600),
        format!("took {elapsed:?}"),
    );
    out.info(format!("{elapsed:.2?}"));
    out
}

fn realized(code: &ravol::CanonicalCode) -> f64 {
    ideal_volume(&code.decode().unwrap(), DEFAULT_TOL)
        .unwrap()
        .value
}

fn criterion_realized() -> Outcome {
    let mut out = Outcome::new();
    let d = PrecisionSpec::double();
    for n in 3..=8u64 {
        let closed = volumes::antiprism_volume(n, d).unwrap().value;
        let p = antiprism(n as usize).unwrap();
        let v = ideal_volume(&p, DEFAULT_TOL).unwrap().value;
        out.check(
            (v - closed).abs() <= REALIZED_TOL,
            format!("A({n}): realized {v}, closed form {closed}"),
        );
    }

    let g = growth_graph(&antiprism(4).unwrap(), &[MoveKind::Twist], 4, 100_000).unwrap();
    let vols: Vec<f64> = g.nodes.iter().map(|n| realized(&n.code)).collect();
    // P_5 has 11 vertices in generation 3; its twist P_8 has 12 in generation 4
    let p5 = g.nodes.iter().enumerate().find(|(i, n)| {
        n.generation == 3
            && n.code.vertex_count() == 11
            && matches_printed(vols[*i], "10.149416", SPECTRUM_TOL)
    });
    out.check(
        p5.is_some(),
        "no 11-vertex polyhedron of volume 10.149416 in generation 3",
    );
    if let Some((i5, _)) = p5 {
        let p8 = g.edges.iter().any(|&(a, b)| {
            let j = if a == i5 {
                b
            } else if b == i5 {
                a
            } else {
                return false;
            };
            g.nodes[j].code.vertex_count() == 12
                && matches_printed(vols[j], "10.991587", SPECTRUM_TOL)
        });
        out.check(p8, "no twist of P_5 with volume 10.991587");
    }
    let gen4: Vec<f64> = g
        .nodes
        .iter()
        .zip(&vols)
        .filter(|(n, _)| n.generation == 4)
        .map(|(_, &v)| v)
        .collect();
    for target in [10.991587, 11.136296] {
        let hits = gen4
            .iter()
            .filter(|&&v| (v - target).abs() <= GROWTH_TOL)
            .count();
        out.check(
            hits >= 2,
            format!("generation 4 has {hits} volumes at {target}"),
        );
    }
    out
}

fn criterion_spectrum(ideal: &CensusResult, compact: &CensusResult) -> Outcome {
    let mut out = Outcome::new();
    let mut upto12 = ideal.clone();
    upto12.levels.retain(|&n, _| n <= 12);
    let points = spectra::spectrum_points(&upto12, DEFAULT_TOL).unwrap();
    for (n, count, distinct, lo, hi) in IDEAL_ROWS {
        let row = spectra::spectrum_table(Kind::Ideal, n, &points).unwrap();
        out.check(row.count == count, format!("n = {n}: count {}", row.count));
        out.check(
            row.distinct == distinct,
            format!("n = {n}: distinct {}", row.distinct),
        );
        for (got, want) in [(row.min_omega, lo), (row.max_omega, hi)] {
            let ok = match got {
                None => want == "-",
                Some(x) => want != "-" && matches_printed(x, want, SPECTRUM_TOL),
            };
            out.check(ok, format!("n = {n}: ω {got:?}, printed {want}"));
        }
    }
    let l5 = volumes::lobell_volume(5, PrecisionSpec::double())
        .unwrap()
        .value;
    let witness = 2.0 * l5 / 30.0;
    out.check(
        matches_printed(witness, "0.287080", PRINTED_TOL),
        format!("ω(L(5)#L(5)) = {witness}"),
    );
    let points = spectra::spectrum_points(compact, DEFAULT_TOL).unwrap();
    let row = spectra::spectrum_table(Kind::Compact, 30, &points).unwrap();
    let found = row.min_omega.map(|w| (w - witness).abs() < 1e-12);
    out.check(
        found == Some(true),
        format!("census n = 30 minimum {:?}", row.min_omega),
    );
    out
}

fn criterion_bounds(ideal: &CensusResult, compact: &CensusResult) -> Outcome {
    let mut out = Outcome::new();
    let mut checked = 0;
    for m in ideal.members() {
        let ver = m.code.vertex_count();
        let v = realized(&m.code);
        let (lo, hi) = atkinson_bounds(ver, Kind::Ideal).unwrap();
        let ok = if ver == 6 {
            (v - lo).abs() < 1e-9 && (v - hi).abs() < 1e-9
        } else {
            lo < v && v < hi
        };
        out.check(ok, format!("{}: {lo} / {v} / {hi}", m.code));
        checked += 1;
    }
    for m in compact.members() {
        let Some(v) = m.volume else { continue };
        let (lo, hi) = atkinson_bounds(m.code.vertex_count(), Kind::Compact).unwrap();
        out.check(lo < v && v < hi, format!("{}: {lo} / {v} / {hi}", m.code));
        checked += 1;
    }
    out.info(format!("{checked} volumes"));
    out
}

fn criterion_density() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = v_oct_f64() / 4.0;
    let k = v_oct_f64() / 2.0;

    for _ in 0..100 {
        let stats = |rng: &mut ChaCha8Rng| {
            let ver = rng.gen_range(7..2000usize);
            let vol = rng.gen_range(f..k) * (ver - 3) as f64;
            (
                vol,
                ver,
                SummandStats::from_volume(vol, ver, Kind::Ideal).unwrap(),
            )
        };
        let (v1, n1, s1) = stats(&mut rng);
        let (v2, n2, s2) = stats(&mut rng);
        // a sum along triangles adds volumes and loses three vertices
        let direct = (v1 + v2) / ((n1 + n2 - 3) - 3) as f64;
        let avg = weighted_average_check(s1, s2);
        out.check(
            (direct - avg).abs() <= WEIGHTED_TOL * direct,
            format!("weighted average {avg} vs {direct}"),
        );
    }

    let (_, p1) = antiprism_summand(0.005).unwrap();
    let p2 = SummandStats {
        ver_tilde: 37,
        omega_tilde: k - 0.005,
    };
    let mut targets: Vec<f64> = (0..=200)
        .map(|i| (f + 0.01) + (k - f - 0.02) * i as f64 / 200.0)
        .collect();
    targets.extend((0..100).map(|_| rng.gen_range(f + 0.01..=k - 0.01)));
    let mut longest = 0;
    for t in targets {
        match approximation_schedule(t, p1, p2, SCHEDULE_EPS, SCHEDULE_TERMS) {
            Ok(s) => {
                longest = longest.max(s.pairs.len());
                out.check(
                    (s.predicted - t).abs() <= SCHEDULE_EPS,
                    format!("target {t}: {}", s.predicted),
                );
            }
            Err(e) => out.check(false, format!("target {t}: {e}")),
        }
    }
    out.info(format!("longest schedule {longest} terms"));

    let a4 = volumes::antiprism_volume(4, PrecisionSpec::double())
        .unwrap()
        .value;
    let l5 = volumes::lobell_volume(5, PrecisionSpec::double())
        .unwrap()
        .value;
    for (vol, ver, kind) in [(a4, 8, Kind::Ideal), (l5, 20, Kind::Compact)] {
        let s = SummandStats::from_volume(vol, ver, kind).unwrap();
        let seq = repeated_sum_convergence(s, kind, 1000);
        out.check(
            seq.windows(2).all(|w| w[0] < w[1]),
            format!("{kind}: sequence not strictly increasing"),
        );
        let far = repeated_sum_omega(s, kind, 1_000_000_000_000);
        out.check(
            (far - s.omega_tilde).abs() <= LIMIT_TOL && seq.iter().all(|&w| w < s.omega_tilde),
            format!("{kind}: limit {far} vs ω̃ {}", s.omega_tilde),
        );
    }
    out
}

fn snapshot() -> String {
    let ideal = census::ideal_census(12).unwrap();
    let compact = census::compact_census(30).unwrap();
    let points = spectra::spectrum_points(&ideal, DEFAULT_TOL).unwrap();
    let rows: Vec<_> = (6..=12)
        .map(|n| spectra::spectrum_table(Kind::Ideal, n, &points).unwrap())
        .collect();
    serde_json::to_string(&(&ideal, &compact, &points, &rows)).unwrap()
}

fn criterion_determinism() -> Outcome {
    let mut out = Outcome::new();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(snapshot)
    };
    let runs = [run(1), run(8), run(1), run(8)];
    out.check(
        runs.iter().all(|r| r == &runs[0]),
        "outputs differ between runs",
    );
    out.info(format!("{} bytes", runs[0].len()));
    out
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let t = Instant::now();
    let ideal = census::ideal_census(15).unwrap();
    let ideal_time = t.elapsed();
    let t = Instant::now();
    let compact = census::compact_census(32).unwrap();
    let compact_time = t.elapsed();

    let criteria: Vec<(&str, Criterion)> = vec![
        ("constants", Box::new(criterion_constants)),
        ("closed-form volumes", Box::new(criterion_closed_forms)),
        ("Lobachevsky identities", Box::new(criterion_identities)),
        (
            "ideal census counts",
            Box::new(|| criterion_ideal_census(&ideal, ideal_time)),
        ),
        (
            "compact census counts",
            Box::new(|| criterion_compact_census(&compact, compact_time)),
        ),
        ("realized volumes", Box::new(criterion_realized)),
        (
            "spectrum rows",
            Box::new(|| criterion_spectrum(&ideal, &compact)),
        ),
        (
            "volume bounds",
            Box::new(|| criterion_bounds(&ideal, &compact)),
        ),
        ("density machinery", Box::new(criterion_density)),
        ("determinism", Box::new(criterion_determinism)),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {}",
            i + 1,
            out.notes.join("; ")
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
