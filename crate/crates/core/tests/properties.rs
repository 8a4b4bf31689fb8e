mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use privacy_lens::frontend::ir::{Language, SourceFile};
use privacy_lens::frontend::parse_file;
use privacy_lens::metrics::{proportion, rank, MethodStats};
use privacy_lens::sources::to_snake_case;
use privacy_lens::MethodRef;

fn lang() -> impl Strategy<Value = (Language, &'static str)> {
    prop_oneof![Just((Language::JsLike, "a.ts")), Just((Language::JavaLike, "A.java"))]
}

const TOKENS: &[&str] = &[
    "function", "class", "import", "export", "from", "return", "new", "this", "public", "static", "void",
    "package", "{", "}", "(", ")", "[", "]", ";", ",", ".", "=", "=>", "+", "\"s\"", "'t'", "`x${y}`", "/*", "*/",
    "//", "\n", "x", "email", "@Ann", "<T>", ":", "?", "if", "for", "while", "try", "catch", "else", "1",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parsing_is_total_on_arbitrary_text((language, path) in lang(), text in any::<String>()) {
        let m = parse_file(SourceFile::new(path, language, text.clone()));
        for f in &m.functions {
            prop_assert!(f.span.end <= text.len());
        }
    }

    #[test]
    fn parsing_is_total_on_token_soup((language, path) in lang(), toks in prop::collection::vec(prop::sample::select(TOKENS), 0..200)) {
        let text = toks.join(" ");
        let m = parse_file(SourceFile::new(path, language, text.clone()));
        for f in &m.functions {
            prop_assert!(f.span.start <= f.span.end && f.span.end <= text.len());
            for s in &f.body {
                prop_assert!(s.span.end <= text.len());
            }
        }
    }

    #[test]
    fn ranking_ignores_input_order(
        rows in prop::collection::vec((0usize..20, 0usize..20, 0usize..6), 1..30),
        seed in any::<u64>(),
    ) {
        let stats: Vec<MethodStats> = rows
            .iter()
            .enumerate()
            .map(|(i, &(occ, pii, name))| {
                let occurrence = occ + 1;
                let pii_occurrence = pii.min(occurrence);
                MethodStats {
                    method: MethodRef::external(format!("lib.C{name}.m{i}"), "lib"),
                    occurrence,
                    pii_occurrence,
                    pii_frequency: pii_occurrence as f64 / occurrence as f64,
                    labels: BTreeSet::new(),
                }
            })
            .collect();
        let mut shuffled = stats.clone();
        rand::seq::SliceRandom::shuffle(&mut shuffled[..], &mut ChaCha8Rng::seed_from_u64(seed));
        let a = rank(stats);
        prop_assert_eq!(&a, &rank(shuffled));
        for w in a.windows(2) {
            prop_assert!((w[0].occurrence, w[0].pii_occurrence) >= (w[1].occurrence, w[1].pii_occurrence));
        }
    }

    #[test]
    fn proportion_bounds(total in 1usize..100_000, am_frac in 0.0f64..=1.0, pii_frac in 0.0f64..=1.0) {
        let am = (total as f64 * am_frac) as usize;
        let pii = (am as f64 * pii_frac) as usize;
        let p = proportion(am, total, pii).unwrap();
        prop_assert!(p.pii_percent <= p.percent);
        prop_assert!(p.percent.value() <= 100.0);
        prop_assert!((p.percent.value() - 100.0 * am as f64 / total as f64).abs() <= 0.05 + 1e-9);
    }

    #[test]
    fn snake_case_is_idempotent(id in "[A-Za-z][A-Za-z0-9_]{0,20}") {
        let once = to_snake_case(&id);
        prop_assert_eq!(to_snake_case(&once), once.clone());
        prop_assert_eq!(once.to_lowercase(), once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Appending statements to a function never removes a flow.
    #[test]
    fn flows_grow_with_program_prefix(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = common::straight_line(&mut rng, 20);
        let body = full.files[0].funcs[0].body.clone();
        let mut prev = BTreeSet::new();
        for k in 1..=body.len() {
            let mut files = full.files.clone();
            files[0].funcs[0].body.truncate(k);
            let p = common::render(files);
            let flows = common::engine_flows(&p, &common::analyse(&p));
            prop_assert!(prev.is_subset(&flows), "prefix {} lost flows", k);
            prev = flows;
        }
    }
}
