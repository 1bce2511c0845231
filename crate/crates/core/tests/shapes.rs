//! Derived symbol shapes against the hand-transcribed patterns.

use normsym::galois::{derive_shape, PrimeCase, SymbolShape};
use serde::Deserialize;

const PATTERNS: &str = include_str!("data/shape_patterns.toml");

#[derive(Deserialize)]
struct Patterns {
    literal: Vec<Literal>,
    pattern: Vec<Pattern>,
}

#[derive(Deserialize)]
struct Literal {
    case: String,
    n: u32,
    rows: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct Pattern {
    case: String,
    n: u32,
    first_row: Vec<String>,
    bottom_first_row: Option<Vec<String>>,
    top_last_row: Option<Vec<String>>,
    bottom_last_row: Option<Vec<String>>,
}

fn patterns() -> Patterns {
    toml::from_str(PATTERNS).expect("pattern file parses")
}

fn case(name: &str) -> PrimeCase {
    match name {
        "fixed" => PrimeCase::Fixed,
        "shifted" => PrimeCase::Shifted,
        other => panic!("unknown case {other}"),
    }
}

fn negate(entry: &str) -> String {
    match entry {
        "0" => "0".to_string(),
        e => e
            .strip_prefix('-')
            .map_or_else(|| format!("-{e}"), str::to_string),
    }
}

/// Rows of the skew circulant with first row `c`.
fn skew_circulant(c: &[String]) -> Vec<Vec<String>> {
    let m = c.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if j >= i {
                        c[j - i].clone()
                    } else {
                        negate(&c[m + j - i])
                    }
                })
                .collect()
        })
        .collect()
}

fn rendered(shape: &SymbolShape) -> Vec<Vec<String>> {
    (0..shape.rows())
        .map(|r| shape.row(r).iter().map(|e| e.to_string()).collect())
        .collect()
}

#[test]
fn literal_matrices_match() {
    for lit in patterns().literal {
        let shape = derive_shape(lit.n, case(&lit.case)).unwrap();
        assert_eq!(rendered(&shape), lit.rows, "n={} {}", lit.n, lit.case);
    }
}

#[test]
fn patterns_match_for_levels_two_to_five() {
    let all = patterns().pattern;
    for n in 2..=5 {
        for prime in PrimeCase::BOTH {
            let p = all
                .iter()
                .find(|p| p.n == n && case(&p.case) == prime)
                .unwrap_or_else(|| panic!("no pattern for n={n} {prime}"));
            let shape = derive_shape(n, prime).unwrap();
            let rows = rendered(&shape);
            let half = 1usize << (n - 1);
            assert_eq!(rows.len(), 2 * half);
            assert_eq!(shape.param_len(), 1 << (n - 2));
            assert_eq!(shape.params_used(), (0..1 << (n - 2)).collect::<Vec<_>>());

            let top = skew_circulant(&p.first_row);
            let bottom_first = p
                .bottom_first_row
                .clone()
                .unwrap_or_else(|| p.first_row.iter().map(|e| negate(e)).collect());
            let bottom = skew_circulant(&bottom_first);
            assert_eq!(&rows[..half], &top[..], "top half n={n} {prime}");
            assert_eq!(&rows[half..], &bottom[..], "bottom half n={n} {prime}");

            if let Some(last) = &p.top_last_row {
                assert_eq!(&rows[half - 1], last);
            }
            if let Some(last) = &p.bottom_last_row {
                assert_eq!(&rows[2 * half - 1], last);
            }
        }
    }
}
