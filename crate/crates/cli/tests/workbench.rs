use degen::bundle::{load_instance, parse_bundle, to_json_string, BundleError, BundleFile};
use degen::commands::{
    cmd_complex, cmd_conjecture, cmd_dim_theorem, cmd_quasi_iso, cmd_validate, Conjecture,
};
use degen::examples::{build_example, ngon, smooth_ec, zeta_fqt};
use degen::report::Verdict;
use degen::run;

fn ngon_file(n: usize, q: u64) -> BundleFile {
    BundleFile::from_instance(&ngon(n, q).unwrap())
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn examples_round_trip() {
    for inst in [
        ngon(3, 5).unwrap(),
        ngon(6, 2).unwrap(),
        smooth_ec(-3, 4).unwrap(),
        zeta_fqt(9).unwrap(),
    ] {
        let text = to_json_string(&BundleFile::from_instance(&inst));
        let (back, warnings) = load_instance(&text, true).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(back, inst);
        assert_eq!(to_json_string(&BundleFile::from_instance(&back)), text);
    }
}

#[test]
fn strict_mode_rejects_unknown_keys() {
    let mut v: serde_json::Value = serde_json::to_value(ngon_file(3, 5)).unwrap();
    v["fibres"]["v"]["dim_Y"] = serde_json::json!(1);
    let text = serde_json::to_string(&v).unwrap();
    match parse_bundle(&text, true) {
        Err(BundleError::UnknownFields(f)) => assert_eq!(f, vec!["fibres.v.dim_Y".to_string()]),
        other => panic!("expected unknown-field error, got {other:?}"),
    }
    let (_, warnings) = load_instance(&text, false).unwrap();
    assert_eq!(warnings, vec!["fibres.v.dim_Y".to_string()]);
}

#[test]
fn diagnostics_name_the_field() {
    let mut v: serde_json::Value = serde_json::to_value(ngon_file(3, 5)).unwrap();
    v["places"]["v"]["frob"][0][0] = serde_json::json!("five");
    let err = load_instance(&serde_json::to_string(&v).unwrap(), true).unwrap_err();
    assert!(err.to_string().contains("places.v.frob[0][0]"), "{err}");

    let mut v: serde_json::Value = serde_json::to_value(ngon_file(3, 5)).unwrap();
    v["params"]["field_q"] = serde_json::json!("5");
    let text = serde_json::to_string_pretty(&v).unwrap();
    match parse_bundle(&text, true) {
        Err(BundleError::Json { path, line, .. }) => {
            assert_eq!(path, "params.field_q");
            assert!(line > 1);
        }
        other => panic!("expected a located JSON error, got {other:?}"),
    }
}

#[test]
fn names_and_fields_are_checked() {
    let mut f = ngon_file(3, 5);
    let p = f.places.remove("v").unwrap();
    f.places.insert("w".into(), p);
    assert!(matches!(
        f.to_instance(),
        Err(BundleError::UnknownName { .. })
    ));

    let mut f = ngon_file(3, 5);
    f.params.as_mut().unwrap().field_q = 2;
    assert!(matches!(
        f.to_instance(),
        Err(BundleError::FieldMismatch { .. })
    ));

    let mut f = ngon_file(3, 25);
    f.params.as_mut().unwrap().field_q = 5;
    assert!(matches!(
        f.to_instance(),
        Err(BundleError::FieldMismatch { .. })
    ));
    f.places.get_mut("v").unwrap().degree = 2;
    f.to_instance().unwrap();
}

#[test]
fn validate_examples() {
    assert_eq!(cmd_validate(&ngon(3, 5).unwrap()).verdict(), Verdict::Pass);

    let mut f = ngon_file(3, 5);
    let block = &mut f.fibres.get_mut("v").unwrap().pushforward[0].matrix;
    block[0][0] = "-1".into();
    let report = cmd_validate(&f.to_instance().unwrap());
    assert_eq!(report.verdict(), Verdict::Fail);
    let w = &report.rows[0].witnesses;
    assert!(!w.is_empty());
    assert!(w[0].contains("level 1, codim 0"), "{w:?}");

    let empty = load_instance("{}", true).unwrap().0;
    assert_eq!(cmd_validate(&empty).verdict(), Verdict::Inconclusive);
}

#[test]
fn dim_theorem_examples() {
    let r = cmd_dim_theorem(&ngon(3, 3).unwrap(), None, None).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass);
    assert!(
        r.rows[0].value.starts_with("dim = 1, d_v = 1"),
        "{}",
        r.rows[0].value
    );

    let r = cmd_dim_theorem(&smooth_ec(1, 5).unwrap(), None, None).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass);
    assert!(r.rows[0].value.starts_with("dim = 0, d_v = 0"));

    let mut f = ngon_file(3, 5);
    f.places.get_mut("v").unwrap().frob = vec![vec!["1".into()]];
    let r = cmd_dim_theorem(&f.to_instance().unwrap(), None, None).unwrap();
    assert_eq!(r.verdict(), Verdict::Fail);
    assert_eq!(r.rows[0].witnesses, vec!["1 ≠ 0".to_string()]);

    let mut f = BundleFile::from_instance(&smooth_ec(1, 5).unwrap());
    f.fibres.get_mut("v").unwrap().higher_chow_dim = None;
    let r = cmd_dim_theorem(&f.to_instance().unwrap(), None, None).unwrap();
    assert_eq!(r.verdict(), Verdict::Inconclusive);
    assert!(r.rows[0].value.contains("higher_chow_dim"));

    assert!(cmd_dim_theorem(&ngon(3, 5).unwrap(), Some(1), Some(1)).is_err());
}

#[test]
fn conjecture_a_examples() {
    let r = cmd_conjecture(&ngon(3, 2).unwrap(), Conjecture::A2).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass, "{}", r.to_text());

    // a regulator column inside Im(γ) and no cycle classes
    let mut f = ngon_file(3, 2);
    let m = f.motivic.as_mut().unwrap();
    m.rank = 1;
    m.b_rank = 0;
    m.cycle_class.clear();
    m.regulators.insert(
        "v".into(),
        vec![vec!["1".into()], vec!["-1".into()], vec!["0".into()]],
    );
    let r = cmd_conjecture(&f.to_instance().unwrap(), Conjecture::A2).unwrap();
    assert_eq!(r.verdict(), Verdict::Fail);
    assert!(
        r.rows[0].witnesses[0].contains("spans 0 < 1"),
        "{:?}",
        r.rows[0].witnesses
    );

    let r = cmd_conjecture(&smooth_ec(2, 7).unwrap(), Conjecture::A1).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass);
    let r = cmd_conjecture(&smooth_ec(2, 7).unwrap(), Conjecture::A2).unwrap();
    assert_eq!(r.verdict(), Verdict::Inconclusive);
}

#[test]
fn global_examples() {
    let z = zeta_fqt(4).unwrap();
    let r = cmd_conjecture(&z, Conjecture::CFF).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass, "{}", r.to_text());
    assert!(r.to_text().contains("Λ*(0) = -1/3 · log(q)^-1"));
    assert_eq!(
        cmd_conjecture(&z, Conjecture::B2FF).unwrap().verdict(),
        Verdict::Pass
    );
    assert_eq!(
        cmd_conjecture(&z, Conjecture::B1FF).unwrap().verdict(),
        Verdict::Inconclusive
    );

    let mut no_global = z.clone();
    no_global.global = None;
    for c in [Conjecture::B2FF, Conjecture::CFF] {
        assert_eq!(
            cmd_conjecture(&no_global, c).unwrap().verdict(),
            Verdict::Inconclusive
        );
    }

    // a wrong kernel order breaks the special value
    let mut f = BundleFile::from_instance(&z);
    f.integral.as_mut().unwrap().source.relations[0][0] = "6".into();
    let r = cmd_conjecture(&f.to_instance().unwrap(), Conjecture::CFF).unwrap();
    assert_eq!(r.verdict(), Verdict::Fail);
    assert!(!r
        .rows
        .iter()
        .find(|x| x.check == "CFF.value")
        .unwrap()
        .witnesses
        .is_empty());
}

#[test]
fn complex_reports() {
    let tri = ngon(3, 2).unwrap();
    let r = cmd_complex(&tri, 3, 1).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass);
    assert!(
        r.to_text().contains("C spaces    [-1:0 0:3 1:3 2:0]"),
        "{}",
        r.to_text()
    );
    for star in -1..=3 {
        for q in -2..=5 {
            assert_eq!(
                cmd_quasi_iso(&tri, q, star).unwrap().verdict(),
                Verdict::Pass
            );
        }
    }
    assert_eq!(
        cmd_quasi_iso(&smooth_ec(0, 3).unwrap(), 1, 1)
            .unwrap()
            .verdict(),
        Verdict::Pass
    );
}

#[test]
fn example_parameters() {
    assert!(build_example("ngon", &[("n".into(), "4".into())]).is_ok());
    assert!(build_example("ngon", &[("m".into(), "4".into())]).is_err());
    assert!(build_example("cubic", &[]).is_err());
    assert!(build_example("zeta-fqt", &[("q".into(), "6".into())]).is_err());
    assert!(build_example(
        "smooth-ec",
        &[("a_v".into(), "5".into()), ("q".into(), "5".into())]
    )
    .is_err());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ng = dir.path().join("ng.json").to_string_lossy().into_owned();
    assert_eq!(
        run(["degen", "example", "ngon", "n=3", "q=5", "-o", &ng]).code,
        0
    );
    assert_eq!(run(["degen", "validate", &ng]).code, 0);
    assert_eq!(run(["degen", "check", "A2", &ng]).code, 0);
    assert_eq!(run(["degen", "check", "CFF", &ng]).code, 2);

    let mut f = ngon_file(3, 5);
    f.places.get_mut("v").unwrap().frob = vec![vec!["1".into()]];
    let bad = write(&dir, "bad.json", &to_json_string(&f));
    assert_eq!(run(["degen", "dim-theorem", &bad]).code, 1);

    let empty = write(&dir, "empty.json", "{}");
    assert_eq!(run(["degen", "validate", &empty]).code, 2);

    let typo = write(&dir, "typo.json", r#"{"fibers": {}}"#);
    let out = run(["degen", "validate", &typo]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("fibers"));
    let lax = run(["degen", "--strict", "false", "validate", &typo]);
    assert_eq!(lax.code, 2);
    assert!(lax.stderr.contains("warning"));

    assert_eq!(
        run(["degen", "validate", "/nonexistent/bundle.json"]).code,
        3
    );
    assert_eq!(run(["degen", "check", "A3", &ng]).code, 3);
    assert_eq!(run(["degen", "frobnicate"]).code, 3);
    assert_eq!(run(["degen", "--help"]).code, 0);
}

#[test]
fn tsv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(
        &dir,
        "z.json",
        &to_json_string(&BundleFile::from_instance(&zeta_fqt(5).unwrap())),
    );
    let out = run(["degen", "--tsv", "check", "CFF", &z]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "check\tplace\tverdict\tvalue");
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().skip(1).all(|l| l.split('\t').count() == 4));
    assert!(lines[2].starts_with("CFF.value\t-\tPASS\tΛ*(0) = -1/4 · log(q)^-1"));
}
