//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any outcome differs from the recorded expectation.
//!
//! Tolerances: every comparison is exact integer equality. Depths and ranges
//! are pinned below.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use serde_json::Value;

use pretzel_cli::{check_two_head, run, ALL_CLASSES, EXIT_OK};
use pretzel_core::closedform::{
    check_identity, euler_over_quadratic, euler_product, two_head, two_head_numerator, two_head_raw,
    Identity, TwoHeadCase,
};
use pretzel_core::exec::Strategy;
use pretzel_core::laurent::LaurentPoly;
use pretzel_core::qcalc::{delta, tet, theta_of, TetColors};
use pretzel_core::stability::HeadPipeline;
use pretzel_core::statesum::colored_jones;
use pretzel_core::tloracle::{bracket_eval, jw_idempotent, tl_compose, PlanarMatching, TLElement, DEFAULT_BUDGET};
use pretzel_core::PretzelSpec;

const TOP_DEPTH: usize = 16;
const TWO_HEAD_DEPTH: usize = 8;
const TWO_HEAD_COLORS: std::ops::RangeInclusive<u32> = 3..=11;
const CLOSED_FORM_DEPTH: usize = 20;

struct Verdict {
    pass: bool,
    detail: String,
}

fn ints(v: &Value) -> Vec<BigInt> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| BigInt::from(x.as_i64().expect("integer")))
        .collect()
}

fn rows(v: &Value) -> BTreeMap<u32, Vec<BigInt>> {
    v.as_object()
        .expect("object")
        .iter()
        .map(|(k, r)| (k.parse().expect("color"), ints(r)))
        .collect()
}

fn spec_of(v: &Value) -> PretzelSpec {
    let t: Vec<u32> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as u32)
        .collect();
    PretzelSpec::new(t[0], t[1], t[2]).unwrap()
}

fn fixtures() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/heads_9_35.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("fixture file")).expect("fixture json")
}

/// `N=c,a,b,...` lines of a CSV table, keyed by color; `H…` lines under 0.
fn parse_csv(text: &str) -> BTreeMap<u32, Vec<BigInt>> {
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let mut cells = line.split(',');
        let key = cells.next().unwrap();
        let color = key.strip_prefix("N=").map(|c| c.parse().unwrap()).unwrap_or(0);
        let v = cells.filter(|c| !c.is_empty()).map(|c| c.parse().unwrap()).collect();
        out.insert(color, v);
    }
    out
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut full = vec!["pretzel"];
    full.extend_from_slice(args);
    let o = run(full);
    (o.code, o.stdout)
}

fn compare_rows(
    label: &str,
    got: &BTreeMap<u32, Vec<BigInt>>,
    want: &BTreeMap<u32, Vec<BigInt>>,
    bad: &mut Vec<String>,
) {
    for (c, w) in want {
        match got.get(c) {
            Some(g) if g.len() >= w.len() && &g[..w.len()] == w.as_slice() => {}
            _ => bad.push(format!("{label} N={c}")),
        }
    }
}

fn criterion_1(fx: &Value) -> Verdict {
    // through the built binary, as a user would run it
    let want = rows(&fx["top"]["rows"]);
    let mut bad = Vec::new();
    for (&c, w) in &want {
        let out = Command::new(env!("CARGO_BIN_EXE_pretzel"))
            .args(["compute", "--pretzel", "3,3,3", "--color", &c.to_string()])
            .args(["--depth", &TOP_DEPTH.to_string(), "--format", "csv"])
            .output()
            .expect("binary runs");
        let got = parse_csv(&String::from_utf8_lossy(&out.stdout));
        if !out.status.success() || got.get(&c) != Some(w) {
            bad.push(format!("N={c}"));
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "16 coefficients at N=2..7 on (3,3,3)".into()
        } else {
            format!("mismatched rows {bad:?}")
        },
    }
}

fn criterion_2(fx: &Value) -> Verdict {
    let mut bad = Vec::new();
    let (code, out) = cli(&["heads", "--pretzel", "3,3,3", "--order", "1", "--depth", "5", "--colors", "2..7", "--residual", "--width", "16", "--format", "csv"]);
    let got = parse_csv(&out);
    compare_rows("after-euler", &got, &rows(&fx["after_euler"]["rows"]), &mut bad);
    if code != EXIT_OK || got.get(&0) != Some(&ints(&fx["top"]["head"])) {
        bad.push("after-euler header".into());
    }

    let (code, out) = cli(&["heads", "--pretzel", "3,3,3", "--order", "1", "--depth", "5", "--colors", "2..7", "--width", "12", "--format", "csv"]);
    compare_rows("one-head", &parse_csv(&out), &rows(&fx["one_head"]["rows"]), &mut bad);
    let (code2, head) = cli(&["heads", "--pretzel", "3,3,3", "--order", "1", "--depth", "12", "--format", "csv"]);
    if code != EXIT_OK || code2 != EXIT_OK || parse_csv(&head).get(&0) != Some(&ints(&fx["one_head"]["head"])) {
        bad.push("one-head header".into());
    }

    let (code, out) = cli(&["heads", "--pretzel", "3,3,3", "--order", "2", "--depth", "5", "--colors", "2..7", "--width", "6", "--format", "csv"]);
    compare_rows("two-head", &parse_csv(&out), &rows(&fx["two_head"]["rows"]), &mut bad);
    let (code2, head) = cli(&["heads", "--pretzel", "3,3,3", "--order", "2", "--depth", "6", "--colors", "2..9", "--format", "csv"]);
    if code != EXIT_OK || code2 != EXIT_OK || parse_csv(&head).get(&0) != Some(&ints(&fx["two_head"]["head"])) {
        bad.push("two-head header".into());
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "residual, 1-head and 2-head tables with headers, N=2..7".into()
        } else {
            format!("mismatches {bad:?}")
        },
    }
}

fn criterion_3() -> Verdict {
    let mut bad = Vec::new();
    for [a, b, c] in ALL_CLASSES {
        let spec = PretzelSpec::new(a, b, c).unwrap();
        match check_two_head(spec, TWO_HEAD_DEPTH, TWO_HEAD_COLORS, Strategy::Parallel) {
            Ok(r) if r.holds => {}
            Ok(_) => bad.push(format!("({spec}) differs")),
            Err(e) => bad.push(format!("({spec}) {e}")),
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("11 classes, depth {TWO_HEAD_DEPTH}, certified over colors 3..11")
        } else {
            format!("{bad:?}")
        },
    }
}

fn criterion_4(fx: &Value) -> Verdict {
    let d = CLOSED_FORM_DEPTH;
    let mut bad = Vec::new();
    let case = |s: &PretzelSpec| TwoHeadCase::of(s);
    for entry in fx["two_head_numerators"].as_array().unwrap() {
        let spec = spec_of(&entry["spec"]);
        let quoted: Vec<i64> = ints(&entry["numerator"])
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        let formula = two_head_raw(case(&spec), d);
        if formula != euler_over_quadratic(&quoted, d) || two_head_numerator(case(&spec)) != quoted {
            bad.push(format!("({spec})"));
        }
    }
    let base = two_head_raw(TwoHeadCase::new(0, 3).unwrap(), d);
    for s in fx["two_head_shifted_family"].as_array().unwrap() {
        let spec = spec_of(s);
        let n = BigInt::from(spec.n());
        let extra = euler_product(d + 4).mul_one_minus_xk_pow(1, -1).truncate(d).scale(&n);
        if two_head_raw(case(&spec), d) != base.add(&extra) {
            bad.push(format!("({spec})"));
        }
    }
    for s in fx["two_head_bare_euler"].as_array().unwrap() {
        let spec = spec_of(s);
        if two_head(&spec, d) != euler_product(d) {
            bad.push(format!("({spec})"));
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("6 quoted numerators, 3 shifted cases, bare product; depth {d}")
        } else {
            format!("{bad:?}")
        },
    }
}

fn criterion_5() -> (Verdict, bool) {
    let mut failures: BTreeMap<&'static str, Vec<u32>> = BTreeMap::new();
    let suites: [(Identity, std::ops::RangeInclusive<u32>); 11] = [
        (Identity::BraceFactorial, 1..=25),
        (Identity::DoubleFactorial, 1..=25),
        (Identity::DoubleFactorialSquared, 1..=25),
        (Identity::TripleFactorialPlusOne, 1..=25),
        (Identity::TripleFactorial, 1..=25),
        (Identity::JonesTop, 2..=8),
        (Identity::NormalizedTop, 2..=8),
        (Identity::SummandDropOne, 5..=10),
        (Identity::SummandDropTwo, 5..=10),
        (Identity::SummandDropThree, 5..=10),
        (Identity::SummandDropPair, 5..=10),
    ];
    for (id, range) in suites {
        for n in range {
            match check_identity(id, n) {
                Ok(c) if c.holds => {}
                _ => failures.entry(id.name()).or_default().push(n),
            }
        }
    }
    let finite_ok = (5..=10).all(|n| check_identity(Identity::SummandDropOneFinite, n).is_ok_and(|c| c.holds));
    // the infinite-product form of the drop-one summand identity is false at
    // depth 2N; see README
    let mut expected = BTreeMap::new();
    expected.insert("summand-drop-one", (5..=10).collect::<Vec<u32>>());
    let as_expected = failures == expected && finite_ok;
    let pass = failures.is_empty();
    let detail = if pass {
        "all identities at their stated depths".into()
    } else {
        format!(
            "failing {failures:?}; finite-product variant {}",
            if finite_ok { "holds" } else { "also fails" }
        )
    };
    (Verdict { pass, detail }, as_expected)
}

fn criterion_6() -> Verdict {
    let mut bad = Vec::new();
    let mut count = 0;
    for a in 1..=4 {
        for b in 1..=4 {
            for c in 1..=4 {
                let spec = PretzelSpec::new(a, b, c).unwrap();
                for color in [2, 3] {
                    count += 1;
                    let tl = bracket_eval(&spec, color, DEFAULT_BUDGET).unwrap();
                    let ss = colored_jones(color, &spec).unwrap();
                    if tl != ss {
                        bad.push(format!("({spec}) color {color}"));
                    }
                }
            }
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{count} spec/color pairs")
        } else {
            format!("{bad:?}")
        },
    }
}

fn same(x: &pretzel_core::RationalFn, y: &pretzel_core::RationalFn) -> bool {
    x.sub(y).map(|d| d.num.is_zero()).unwrap_or(false)
}

fn criterion_7() -> Verdict {
    let mut bad = Vec::new();

    // ring axioms on a fixed family
    let polys: Vec<LaurentPoly> = (0..6i64)
        .map(|k| LaurentPoly::from_terms([(-3 * k, k + 1), (2 * k - 1, -2), (5, k * k - 3)]))
        .collect();
    for a in &polys {
        for b in &polys {
            for c in &polys {
                let assoc = &(a * b) * c == a * &(b * c);
                let dist = a * &(b + c) == &(a * b) + &(a * c);
                if !assoc || !dist {
                    bad.push("ring axioms".to_string());
                }
            }
            if !b.is_zero() && (a * b).exact_div(b).ok().as_ref() != Some(a) {
                bad.push("exact division".to_string());
            }
        }
    }

    // θ symmetry
    for a in 0..6i64 {
        for b in 0..6 {
            for c in 0..6 {
                if let Ok(t) = theta_of(a, b, c) {
                    let perms = [(b, a, c), (c, b, a), (a, c, b)];
                    if perms.iter().any(|&(x, y, z)| theta_of(x, y, z).ok() != Some(t.clone())) {
                        bad.push(format!("theta({a},{b},{c})"));
                    }
                }
            }
        }
    }

    // tetrahedral symmetries and the zero-edge degeneracy
    let t = TetColors::new(4, 2, 2, 4, 4, 2);
    let base = tet(&t).unwrap();
    let perms = [[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2], [3, 2, 1, 0], [1, 2, 3, 0]];
    for p in perms {
        if !same(&tet(&t.permuted(p)).unwrap(), &base) {
            bad.push(format!("tet symmetry {p:?}"));
        }
    }
    for (a, b, c) in [(2, 2, 2), (3, 2, 1), (4, 4, 2)] {
        let th = theta_of(a, b, c).unwrap();
        let zero = tet(&TetColors::new(a as u32, b as u32, c as u32, b as u32, c as u32, 0)).unwrap();
        let want = pretzel_core::RationalFn::from_scalar(&th, &LaurentPoly::one()).unwrap();
        if !same(&zero, &want) {
            bad.push(format!("tet zero edge ({a},{b},{c})"));
        }
    }

    // Jones–Wenzl projectors
    for n in 1..=4usize {
        let f = jw_idempotent(n).unwrap();
        let minus_one = pretzel_core::RationalFn::from_poly(LaurentPoly::monomial(0, -1));
        let defect = tl_compose(&f, &f).unwrap().add(&f.scale(&minus_one).unwrap()).unwrap();
        if !defect.terms().is_empty() {
            bad.push(format!("jw idempotent {n}"));
        }
        for k in 0..n.saturating_sub(1) {
            let e = TLElement::basis(PlanarMatching::generator(n, k).unwrap());
            if !tl_compose(&e, &f).unwrap().terms().is_empty() {
                bad.push(format!("jw cap {n},{k}"));
            }
        }
        if f.closure_trace().unwrap().into_poly().ok() != Some(delta(n as u32)) {
            bad.push(format!("jw trace {n}"));
        }
    }

    // order-2 total shifts grow with slope 2
    let mut p = HeadPipeline::new(PretzelSpec::new(3, 3, 3).unwrap());
    let totals: Vec<usize> = (3..=8u32).map(|c| p.total_shift(2, c).unwrap()).collect();
    if totals.windows(2).any(|w| w[1] != w[0] + 2) {
        bad.push(format!("order-2 slope {totals:?}"));
    }

    bad.dedup();
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "ring, theta, tet, projector and shift-slope properties".into()
        } else {
            format!("{bad:?}")
        },
    }
}

fn main() {
    let fx = fixtures();
    let mut unexpected = Vec::new();
    let mut report = |k: u32, v: Verdict, expected_pass: bool, t: Instant| {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {k}: {tag} ({:.1?}) {}", t.elapsed(), v.detail);
        if v.pass != expected_pass {
            unexpected.push(k);
        }
    };

    let t = Instant::now();
    report(1, criterion_1(&fx), true, t);
    let t = Instant::now();
    report(2, criterion_2(&fx), true, t);
    let t = Instant::now();
    report(3, criterion_3(), true, t);
    let t = Instant::now();
    report(4, criterion_4(&fx), true, t);
    let t = Instant::now();
    let (v5, as_expected) = criterion_5();
    // red by design: only the known counterexample may fail
    report(5, v5, false, t);
    let t = Instant::now();
    report(6, criterion_6(), true, t);
    let t = Instant::now();
    report(7, criterion_7(), true, t);

    if !as_expected {
        unexpected.push(5);
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
