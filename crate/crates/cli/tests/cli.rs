use std::io::Write as _;

use hsbar_cli::corpus::{example, example_corpus, EXAMPLE_NAMES};
use hsbar_cli::document::ResultDocument;
use hsbar_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hsbar").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn kq_prints_the_group() {
    let (code, out, _) = call(&["kq", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "Z/2^6 + Z^1");
}

#[test]
fn trefoil_verdict_line() {
    let (code, out, _) = call(&["solve", "--example", "trefoil0"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("final: 2 x F[Q]/Q^2 tops {0,2}; unique: yes"),
        "{out}"
    );
}

#[test]
fn classify_two_orbits() {
    let (code, out, _) = call(&["classify", "--n", "3", "--cubic", "123"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 orbits"));
    assert!(out.contains("weights 1/7"));
    assert!(out.contains("weights 3/5"));
}

#[test]
fn list_and_print_examples() {
    let (code, out, _) = call(&["list-examples"]);
    assert_eq!(code, 0);
    for name in EXAMPLE_NAMES {
        assert!(out.contains(name));
    }
    let (code, out, _) = call(&["example", "t3"]);
    assert_eq!(code, 0);
    let f = write_temp(&out);
    let (code, out, _) = call(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok: t3"), "{out}");
}

#[test]
fn borromean_m_takes_even_values() {
    let (code, out, _) = call(&["hm", "--example", "borromean-m", "--m", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("quota: 8"), "{out}");
    let (code, _, err) = call(&["hm", "--example", "borromean-m", "--m", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("even"));
}

#[test]
fn validation_failures_exit_with_two() {
    let degree_four = write_temp(r#"{"b1": 4, "rokhlin": {"anf": {"1234": 1}}}"#);
    let (code, _, err) = call(&["validate", degree_four.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("not cubic"), "{err}");

    let short = write_temp(
        r#"{"b1": 3, "rokhlin": {"values": {"": 0, "1": 0, "2": 0, "3": 0, "12": 0, "13": 0, "23": 0}}}"#,
    );
    let (code, _, err) = call(&["validate", short.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("expected 8 entries"), "{err}");

    let mismatch = write_temp(r#"{"b1": 3, "rokhlin": {"anf": {"123": 1}}}"#);
    let (code, _, _) = call(&["solve", mismatch.path().to_str().unwrap()]);
    assert_eq!(code, 2);

    let broken = write_temp("{\"b1\": 1,\n\"rokhlin\": [}");
    let (code, _, err) = call(&["validate", broken.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let (code, _, err) = call(&["solve", "--example", "t3", "--budget", "3"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn usage_errors() {
    let (code, _, _) = call(&["solve"]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["solve", "--example", "nowhere"]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("solve"));
}

#[test]
fn machine_output_round_trips() {
    for name in EXAMPLE_NAMES {
        let (code, out, _) = call(&["solve", "--example", name, "--format", "machine"]);
        assert_eq!(code, 0, "{name}");
        let doc = ResultDocument::from_json(&out).unwrap();
        assert_eq!(format!("{}\n", doc.to_json()), out, "{name}");
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        for key in ["input", "shift", "quota", "pages", "final", "unique"] {
            assert!(value.get(key).is_some(), "{name}: missing {key}");
        }
    }
}

#[test]
fn no_normalize_shifts_tops_by_twice_the_constant() {
    for name in EXAMPLE_NAMES {
        let (_, a, _) = call(&["solve", "--example", name, "--format", "machine"]);
        let (_, b, _) = call(&[
            "solve",
            "--example",
            name,
            "--format",
            "machine",
            "--no-normalize",
        ]);
        let a = ResultDocument::from_json(&a).unwrap();
        let b = ResultDocument::from_json(&b).unwrap();
        let base = example(name).unwrap().validate().unwrap().mu().base_value();
        assert_eq!(a.shift, 2 * base as u8);
        assert_eq!(b.shift, 0);
        assert_eq!(a.candidates.len(), b.candidates.len(), "{name}");
        let moved: Vec<Vec<(u8, u8)>> = a
            .candidates
            .iter()
            .map(|c| {
                let mut v: Vec<(u8, u8)> = c
                    .iter()
                    .map(|s| (s.length, (s.top + a.shift) % 4))
                    .collect();
                v.sort();
                v
            })
            .collect();
        let raw: Vec<Vec<(u8, u8)>> = b
            .candidates
            .iter()
            .map(|c| {
                let mut v: Vec<(u8, u8)> = c.iter().map(|s| (s.length, s.top)).collect();
                v.sort();
                v
            })
            .collect();
        let mut moved = moved;
        let mut raw = raw;
        moved.sort();
        raw.sort();
        assert_eq!(moved, raw, "{name}");
    }
}

#[test]
fn corpus_entries_solve() {
    // Every entry solves; the two b1 = 3 entries without a distinguished
    // spin structure leave more than one candidate.
    for p in example_corpus() {
        let name = p.name.clone().unwrap();
        let (code, out, _) = call(&["solve", "--example", &name, "--format", "machine"]);
        assert_eq!(code, 0, "{name}");
        let doc = ResultDocument::from_json(&out).unwrap();
        let expect_unique = !matches!(name.as_str(), "borromean-arf" | "borromean-m");
        assert_eq!(doc.unique, expect_unique, "{name}");
        for c in &doc.candidates {
            assert_eq!(c.len(), doc.quota, "{name}");
        }
    }
}

#[test]
fn t3_machine_document() {
    let (_, out, _) = call(&["solve", "--example", "t3", "--format", "machine"]);
    let doc = ResultDocument::from_json(&out).unwrap();
    assert_eq!(doc.quota, 6);
    assert_eq!(doc.shift, 2);
    assert!(doc.input.discarded_constant);
    let fin = doc.final_module.unwrap();
    assert_eq!(fin.len(), 6);
    assert!(fin.iter().all(|s| s.length == 3));
    let d2: Vec<_> = doc
        .pages
        .iter()
        .filter(|p| p.page == 3 && p.path.len() == 1)
        .collect();
    assert_eq!(d2.len(), 8);
}
