//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use multiseg_core::jacquet::{factors, jacquet_layers};
use multiseg_core::{
    compose_orbits, find_certificates, qa_example, rankin_selberg_example, run_sweep, trivial_example, universe,
    ExampleCase, LayerIndex, Line, OrbitOrder, Property, SearchBound, Segment, SweepConfig, SweepReport,
};

/// Exponents 0..5 in whole units, `l_abs <= 6`.
fn config(props: &[Property]) -> SweepConfig {
    SweepConfig { lo: 0, hi: 10, max_labs: 6, properties: props.to_vec(), ..Default::default() }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn sweep(props: &[Property]) -> Outcome {
    let report: SweepReport = run_sweep(&config(props)).expect("valid config");
    let mut detail = Vec::new();
    for p in &report.properties {
        let id = p.property.map_or("?", Property::id);
        detail.push(format!("{id}: {} checked, {} unknown, {} violations", p.checked, p.unknown, p.violations));
        for c in &p.counterexamples {
            detail.push(format!("    {c}"));
        }
    }
    let nonempty = report.properties.iter().all(|p| p.checked > p.unknown);
    Outcome { pass: report.is_clean() && nonempty, detail: detail.join("\n      ") }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut out = f();
    let took = t.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            out.pass = false;
            out.detail.push_str(&format!("\n      took {took:?}, limit {limit:?}"));
        }
    }
    (out, took)
}

fn certificate_found(ex: &ExampleCase) -> Result<(), String> {
    let s = find_certificates(&ex.pi, &ex.pi2, SearchBound::default()).map_err(|e| format!("{}: {e}", ex.name))?;
    if s.certificates.iter().any(|c| c.m == ex.m && c.n == ex.n) {
        Ok(())
    } else {
        Err(format!("{}: expected ({}, {}) among {} certificates", ex.name, ex.m, ex.n, s.certificates.len()))
    }
}

fn regressions() -> Outcome {
    let r = Line::new("r");
    let mut cases = Vec::new();
    for n in 1..=6 {
        cases.push(trivial_example(&r, n));
    }
    for (n, c) in [(2, 0), (4, 2), (4, -2)] {
        cases.push(qa_example(&r, n, c));
    }
    let q = Line::new("q");
    cases.push(rankin_selberg_example(
        &Segment::new(r.clone(), 0, 2).unwrap(),
        &Segment::new(q, 1, 1).unwrap(),
    ));
    let mut errors = Vec::new();
    let total = cases.len();
    for ex in cases {
        match ex.map_err(|e| e.to_string()).and_then(|ex| certificate_found(&ex)) {
            Ok(()) => {}
            Err(e) => errors.push(e),
        }
    }
    Outcome { pass: errors.is_empty(), detail: format!("{} of {total} cases matched {}", total - errors.len(), errors.join("; ")) }
}

/// Brute-force Bruhat order on `S_n`: transitive closure of `w < wt` for
/// transpositions `t` with `l(wt) > l(w)`.
struct Bruhat {
    perms: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    above: Vec<Vec<u64>>,
}

fn inversions(w: &[usize]) -> usize {
    (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl Bruhat {
    fn new(n: usize) -> Self {
        let mut perms = permutations(n);
        perms.sort_by_key(|w| std::cmp::Reverse(inversions(w)));
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let words = perms.len().div_ceil(64);
        let mut above = vec![vec![0u64; words]; perms.len()];
        // Longest first, so every strictly longer wt is already closed.
        for (i, w) in perms.iter().enumerate() {
            above[i][i / 64] |= 1 << (i % 64);
            let lw = inversions(w);
            for a in 0..n {
                for b in a + 1..n {
                    let mut v = w.clone();
                    v.swap(a, b);
                    if inversions(&v) > lw {
                        let k = index[&v];
                        let (lo, hi) = above.split_at_mut(i.max(k));
                        let (dst, src) = if i < k { (&mut lo[i], &hi[0]) } else { (&mut hi[0], &lo[k]) };
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d |= *s;
                        }
                    }
                }
            }
        }
        Bruhat { perms, index, above }
    }

    fn leq(&self, w: &[usize], v: &[usize]) -> bool {
        let (i, k) = (self.index[w], self.index[v]);
        self.above[i][k / 64] >> (k % 64) & 1 == 1
    }

    /// Minimal-length permutation with the given block matrix.
    fn representative(&self, rows: &[u32], cols: &[u32], m: &LayerIndex) -> Vec<usize> {
        let block = |sizes: &[u32], x: usize| {
            let mut acc = 0;
            sizes.iter().position(|&s| {
                acc += s as usize;
                x < acc
            })
        };
        self.perms
            .iter()
            .filter(|w| {
                let mut counts = vec![vec![0u32; cols.len()]; rows.len()];
                for (k, &x) in w.iter().enumerate() {
                    counts[block(rows, k).unwrap()][block(cols, x).unwrap()] += 1;
                }
                counts == m.rows()
            })
            .min_by_key(|w| inversions(w))
            .expect("every block matrix is realised")
            .clone()
    }
}

fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn order_of(b: &Bruhat, x: &[usize], y: &[usize]) -> OrbitOrder {
    match (b.leq(x, y), b.leq(y, x)) {
        (true, true) => OrbitOrder::Equal,
        (true, false) => OrbitOrder::Less,
        (false, true) => OrbitOrder::Greater,
        (false, false) => OrbitOrder::Incomparable,
    }
}

fn jacquet_geometry() -> Outcome {
    let mut errors: Vec<String> = Vec::new();
    let mut compared = 0u64;
    let oracles: Vec<Bruhat> = (0..=6).map(Bruhat::new).collect();
    let mut reps: HashMap<(Vec<u32>, Vec<u32>, LayerIndex), Vec<usize>> = HashMap::new();
    let mut rep = |rows: &[u32], cols: &[u32], m: &LayerIndex| -> Vec<usize> {
        let n: u32 = rows.iter().sum();
        reps.entry((rows.to_vec(), cols.to_vec(), m.clone()))
            .or_insert_with(|| oracles[n as usize].representative(rows, cols, m))
            .clone()
    };
    // Partial-sum order and enumeration order against the oracle.
    for n in 1..=6u32 {
        let b = &oracles[n as usize];
        for rows in compositions(n) {
            for cols in compositions(n).into_iter().filter(|c| c.len() <= 3) {
                let all = LayerIndex::enumerate(&rows, &cols);
                let ws: Vec<Vec<usize>> = all.iter().map(|m| rep(&rows, &cols, m)).collect();
                for i in 0..all.len() {
                    if all[i].length() as usize != inversions(&ws[i]) {
                        errors.push(format!("length of {} is {}, oracle {}", all[i], all[i].length(), inversions(&ws[i])));
                    }
                    for j in 0..all.len() {
                        compared += 1;
                        let want = order_of(b, &ws[i], &ws[j]);
                        let got = all[i].compare(&all[j]).unwrap();
                        if got != want {
                            errors.push(format!("{} vs {}: {got:?}, oracle {want:?}", all[i], all[j]));
                        }
                        if i < j && b.leq(&ws[j], &ws[i]) {
                            errors.push(format!("enumeration of {rows:?} x {cols:?}: {} before {}", all[i], all[j]));
                        }
                    }
                }
            }
        }
    }
    // Layer lists of the sweep parameters.
    let u = universe(&config(&[]));
    for pi in &u.reps {
        let Ok(f) = factors(pi) else { continue };
        let rows: Vec<u32> = f.iter().map(|p| p.seg.l_abs()).collect();
        let total: u32 = rows.iter().sum();
        if total == 0 || total > 6 {
            continue;
        }
        for k in 0..=total {
            let cols = [total - k, k];
            let layers = jacquet_layers(&f, k).unwrap();
            let ws: Vec<Vec<usize>> = layers.iter().map(|l| rep(&rows, &cols, &l.index)).collect();
            for i in 0..ws.len() {
                for j in i + 1..ws.len() {
                    compared += 1;
                    if oracles[total as usize].leq(&ws[j], &ws[i]) {
                        errors.push(format!("layers of {pi}, k = {k}: {} before {}", layers[i].index, layers[j].index));
                    }
                }
            }
        }
    }
    // Outer-then-inner enumeration of composed orbits.
    for n in 2..=6u32 {
        let b = &oracles[n as usize];
        for rows in compositions(n).into_iter().filter(|r| r.len() <= 3) {
            for k in 1..n {
                let cols = [n - k, k];
                for split in 1..k {
                    let refined = [n - k, split, k - split];
                    let mut seq = Vec::new();
                    for w in LayerIndex::enumerate(&rows, &cols) {
                        let feed1: Vec<u32> = w.rows().iter().map(|r| r[0]).filter(|&x| x > 0).collect();
                        let feed2: Vec<u32> = w.rows().iter().map(|r| r[1]).filter(|&x| x > 0).collect();
                        let us1 = LayerIndex::enumerate(&feed1, &[n - k]);
                        for u1 in &us1 {
                            for u2 in LayerIndex::enumerate(&feed2, &[split, k - split]) {
                                seq.push(compose_orbits(&w, &[u1.clone(), u2]).unwrap());
                            }
                        }
                    }
                    let expected = LayerIndex::enumerate(&rows, &refined).len();
                    if seq.len() != expected {
                        errors.push(format!("composition over {rows:?}: {} indices, expected {expected}", seq.len()));
                    }
                    let ws: Vec<Vec<usize>> = seq.iter().map(|m| rep(&rows, &refined, m)).collect();
                    for i in 0..ws.len() {
                        for j in i + 1..ws.len() {
                            compared += 1;
                            if b.leq(&ws[j], &ws[i]) {
                                errors.push(format!("composed order over {rows:?} -> {refined:?}: {} before {}", seq[i], seq[j]));
                            }
                        }
                    }
                }
            }
        }
    }
    let witnesses = sweep(&[Property::JacquetAudit]);
    errors.truncate(5);
    Outcome {
        pass: errors.is_empty() && witnesses.pass,
        detail: format!("{compared} oracle comparisons; {}\n      {}", witnesses.detail, errors.join("\n      ")),
    }
}

type Criterion = (&'static str, Option<Duration>, Box<dyn FnOnce() -> Outcome>);

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("operator laws", Some(Duration::from_secs(60)), Box::new(|| sweep(&[Property::InverseLaws]))),
        ("dual switching", None, Box::new(|| sweep(&[Property::DualSwitch]))),
        ("ordering independence", None, Box::new(|| sweep(&[Property::OrderingIndependence]))),
        ("combinatorial and dual combinatorial agree", None, Box::new(|| sweep(&[Property::DualCombinatorialEquivalence]))),
        ("eta monotonicity", None, Box::new(|| sweep(&[Property::EtaMonotonicity]))),
        ("mx removal", None, Box::new(|| sweep(&[Property::MxRemoval]))),
        (
            "commutativity properties",
            None,
            Box::new(|| {
                sweep(&[
                    Property::Saturation,
                    Property::LevelPreserving,
                    Property::UnionIntersection,
                    Property::DualTriple,
                    Property::RelevantDuality,
                    Property::CriteriaSoundness,
                    Property::StrongCommutation,
                ])
            }),
        ),
        ("regressions", None, Box::new(regressions)),
        ("hd fixed point", None, Box::new(|| sweep(&[Property::HdFixedPoint]))),
        ("jacquet audit", None, Box::new(jacquet_geometry)),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
        let (out, took) = timed(limit, f);
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!("criterion {:>2} {verdict} {name} ({:.1}s)\n      {}", k + 1, took.as_secs_f64(), out.detail);
    }
    let total = start.elapsed();
    let in_time = total <= Duration::from_secs(120);
    println!("suite {} total {:.1}s (limit 120s)", if in_time { "PASS" } else { "FAIL" }, total.as_secs_f64());
    if failed == 0 && in_time {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
