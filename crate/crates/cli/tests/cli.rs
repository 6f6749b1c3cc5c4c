use proptest::prelude::*;
use puiseux_cli::{
    execute, mini_regularize, parse_poly, CliError, EXIT_COMPUTATION, EXIT_INCONCLUSIVE, EXIT_USAGE,
};
use puiseux_core::algebra::rat::{int, Rat};
use puiseux_core::algebra::{GaussRat, MPoly, Ring};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut v = vec!["puiseux"];
    v.extend_from_slice(args);
    execute(v)
}

#[test]
fn parse_errors_exit_with_usage_code() {
    let (code, out, err) = run(&["expand", "x^2 + \n w"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("line 2, column 2"), "{err}");
    let (code, _, err) = run(&["expand", "x^-2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("negative exponent"));
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_is_not_an_error() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("stability"));
}

#[test]
fn computation_errors_and_inconclusive_have_their_own_codes() {
    // a constant term in t violates F(0, 0, t) = 0
    let (code, _, err) = run(&["stability", "x^2 - y^3 + t"]);
    assert_eq!(code, EXIT_COMPUTATION, "{err}");
    let e: CliError = puiseux_core::Error::Inconclusive("cluster".into()).into();
    assert_eq!(e.code, EXIT_INCONCLUSIVE);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["tree", "(x^2-y^3)^2-4*x*y^5", "--format", "json", "--jobs", "2"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["critical_points"].as_array().unwrap().len(), 3);
    let (_, s1, _) = run(&["stability", "x^3 - y^4 - 3*t^2*x*y^4", "--format", "json"]);
    let (_, s2, _) = run(&["stability", "x^3 - y^4 - 3*t^2*x*y^4", "--format", "json", "--jobs", "3"]);
    assert_eq!(s1, s2);
    let v: serde_json::Value = serde_json::from_str(&s1).unwrap();
    assert_eq!(v["report"]["verdict"], "MorseStable");
}

#[test]
fn svg_figures_are_written() {
    let dir = std::env::temp_dir().join(format!("puiseux-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (cmd, f) in [("polygon", "x^3 + 2*y*x^2 + y^4"), ("tree", "(x^2-y^3)^2-4*x*y^5")] {
        let path = dir.join(format!("{cmd}.svg"));
        let (code, _, err) = run(&[cmd, f, "--svg", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        let svg = std::fs::read_to_string(&path).unwrap();
        assert!(svg.starts_with("<?xml") && svg.contains(r#"version="1.1""#) && svg.trim_end().ends_with("</svg>"));
    }
    let (code, _, _) = run(&["expand", "x^2 - y^3", "--svg", dir.join("x.svg").to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn file_input() {
    let path = std::env::temp_dir().join(format!("puiseux-in-{}.txt", std::process::id()));
    std::fs::write(&path, "(x^2 - y^4)^2\n  - y^10\n").unwrap();
    let (code, out, err) = run(&["truncate", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("f_root = "));
}

#[test]
fn mini_regularization() {
    let p = |s: &str| parse_poly(s).unwrap();
    let (g, c) = mini_regularize(&p("x^2 - y^3")).unwrap();
    assert_eq!((g, c), (p("x^2 - y^3"), 0));
    // y^2 - x^3: H_2 = y^2 vanishes at (1, 0); y -> y + x gives H_2(1, 0) = 1
    let (g, c) = mini_regularize(&p("y^2 - x^3")).unwrap();
    assert_eq!(c, 1);
    assert_eq!(g, p("(y + x)^2 - x^3"));
    let (_, c) = mini_regularize(&p("x*y")).unwrap();
    assert_eq!(c, 1);
    let (code, _, err) = run(&["expand", "x*y", "--no-regularize"]);
    assert_eq!(code, EXIT_COMPUTATION, "{err}");
    let (code, out, _) = run(&["expand", "x*y"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("note: substituted y -> y + 1*x"));
}

#[test]
fn contact_commands() {
    let (_, out, _) = run(&["contact", "y^(3/2) + y^2", "y^(3/2) - y^2"]);
    assert_eq!(out.trim(), "contact order: 2");
    let (_, out, _) = run(&["contact", "y^(3/2)", "-y^(3/2)", "--curve"]);
    assert_eq!(out.trim(), "contact order: inf");
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-20i64..20, 1i64..6, -3i64..4, 1i64..4)
        .prop_map(|(a, b, c, d)| GaussRat::new(Rat::new(a.into(), b.into()), Rat::new(c.into(), d.into())))
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..5, 0u32..5, 0u32..3), gauss()), 0..7).prop_map(|ts| {
        let mut p = MPoly::zero();
        for ((a, b, c), z) in ts {
            p.add_term([a, b, c], z);
        }
        p
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(p in mpoly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn products_parse_like_they_multiply(p in mpoly(), q in mpoly()) {
        let s = format!("({}) * ({}) - ({})", p, q, q);
        prop_assert_eq!(parse_poly(&s).unwrap(), p.mul(&q).sub(&q));
    }
}

#[test]
fn zero_polynomial_is_rejected() {
    let (code, _, err) = run(&["expand", "x - x"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    let _ = int(0);
}
