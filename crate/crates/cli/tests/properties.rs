use std::path::Path;

use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = firebreak_cli::execute(
        std::iter::once("firebreak").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

fn files(dir: &Path) -> Vec<(String, String)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

fn graph() -> impl Strategy<Value = &'static str> {
    prop_oneof![
        Just(r#"{ kind = "grid", dim = 2 }"#),
        Just(r#"{ kind = "regular-tree", degree = 3 }"#),
        Just(r#"{ kind = "heisenberg" }"#),
        Just(r#"{ kind = "cycle", n = 9 }"#),
    ]
}

fn strategy() -> impl Strategy<Value = &'static str> {
    prop_oneof![
        Just(r#"{ name = "greedy-frontier" }"#),
        Just(r#"{ name = "random-legal" }"#),
        Just(r#"{ name = "null" }"#),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Same config, same bytes; and every file names the hash and version.
    #[test]
    fn simulate_is_reproducible_and_stamped(
        graph in graph(),
        strategy in strategy(),
        c in 0u32..4,
        d in 0u32..2,
        horizon in 1usize..12,
        seed in any::<u64>(),
        fire in 0usize..2,
        format in prop_oneof![Just("table"), Just("records")],
    ) {
        let tmp = TempDir::new().unwrap();
        let cfg = tmp.path().join("p.toml");
        std::fs::write(
            &cfg,
            format!(
                "name = \"p\"\ngraph = {graph}\nfire = \"ball({fire})\"\nschedule = {{ c = {c}, d = {d} }}\n\
                 strategy = {strategy}\nhorizon = {horizon}\nseed = {seed}\n"
            ),
        )
        .unwrap();
        let cfg = cfg.to_str().unwrap();
        let a = tmp.path().join("a");
        let b = tmp.path().join("b");
        let (code_a, out_a) = run(&["simulate", "--config", cfg, "--format", format, "--out", a.to_str().unwrap()]);
        let (code_b, out_b) = run(&["simulate", "--config", cfg, "--format", format, "--out", b.to_str().unwrap()]);
        prop_assert_eq!(code_a, 0);
        prop_assert_eq!(code_b, 0);
        prop_assert_eq!(&out_a, &out_b);
        let (fa, fb) = (files(&a), files(&b));
        prop_assert_eq!(&fa, &fb);

        let (_, records) = run(&["simulate", "--config", cfg, "--format", "records"]);
        let meta: Value = serde_json::from_str(records.lines().next().unwrap()).unwrap();
        let hash = meta["config_hash"].as_str().unwrap();
        let version = meta["tool_version"].as_str().unwrap();
        prop_assert_eq!(fa.len(), 2);
        for (name, text) in &fa {
            prop_assert!(text.contains(hash), "{} lacks the config hash", name);
            prop_assert!(text.contains(version), "{} lacks the tool version", name);
        }
    }
}
