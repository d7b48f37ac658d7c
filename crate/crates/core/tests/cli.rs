//! Command-line contract: exit codes, outputs and config handling.

use std::path::{Path, PathBuf};

use intent_rrs::cli::{run_from, RunConfig, OUT_ENV};
use intent_rrs::harness::experiment::Mode;

const SMALL: &str = r#"
version = 1
[scenarios]
count = 1
[env]
steps_per_episode = 50
[experiment]
mode = "single"
ep_train = 2
ep_val = 1
ep_test = 2
epochs = 1
[train.ppo]
batch_size = 64
minibatch_size = 32
epochs = 1
"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> u8 {
    let mut v = vec!["intent-rrs"];
    v.extend_from_slice(args);
    run_from(v)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_writes_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", SMALL);
    let out = tmp.path().join("out");
    assert_eq!(run(&["eval", "--config", s(&cfg), "--out", s(&out), "--controller", "mapf"]), 0);
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3, "header plus two test episodes:\n{summary}");
}

#[test]
fn bad_configs_exit_2_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("missing_version.toml", "[experiment]\nmode = \"single\"\n"),
        ("wrong_version.toml", "version = 9\n"),
        ("unknown_field.toml", "version = 1\nbogus = 3\n"),
        ("bad_overfit.toml", "version = 1\n[experiment]\nmode = \"overfit\"\nep_train = 3\nep_val = 2\nep_test = 3\n"),
        ("not_toml.toml", "version = = 1"),
    ];
    for (name, text) in cases {
        let cfg = write(tmp.path(), name, text);
        let out = tmp.path().join(format!("out_{name}"));
        assert_eq!(run(&["eval", "--config", s(&cfg), "--out", s(&out)]), 2, "{name}");
        assert!(!out.exists(), "{name} left outputs behind");
    }
    let absent = tmp.path().join("absent.toml");
    assert_eq!(run(&["train", "--config", s(&absent), "--out", s(&tmp.path().join("x"))]), 2);
}

#[test]
fn unusable_checkpoint_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", SMALL);
    let junk = write(tmp.path(), "junk.ckpt", "not a checkpoint");
    let out = tmp.path().join("out");
    let code = run(&["eval", "--config", s(&cfg), "--out", s(&out), "--controller", "proposed", "--checkpoint", s(&junk)]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(run(&["frobnicate"]), 2);
}

#[test]
fn train_then_finetune_and_eval_checkpoint() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", SMALL);
    let out = tmp.path().join("train");
    assert_eq!(run(&["train", "--config", s(&cfg), "--out", s(&out)]), 0);
    for f in ["best.ckpt", "last.ckpt", "curve.csv", "validation.csv", "summary.csv"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let ft = tmp.path().join("ft");
    assert_eq!(run(&["finetune", "--config", s(&cfg), "--out", s(&ft), "--base", s(&out.join("best.ckpt"))]), 0);
    assert!(ft.join("best.ckpt").exists());
    let ev = tmp.path().join("ev");
    let code = run(&["eval", "--config", s(&cfg), "--out", s(&ev), "--controller", "proposed", "--checkpoint", s(&ft.join("best.ckpt"))]);
    assert_eq!(code, 0);
}

#[test]
fn gen_and_catalog_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", SMALL);
    let out = tmp.path().join("gen");
    assert_eq!(run(&["gen", "--config", s(&cfg), "--out", s(&out), "--count", "2", "--episodes", "1"]), 0);
    assert!(out.join("manifest.json").exists());
    let traces = std::fs::read_dir(out.join("traces")).unwrap().count();
    assert_eq!(traces, 4, "one grid and one sidecar per scenario");
    let cat = tmp.path().join("catalog.json");
    assert_eq!(run(&["catalog", "--out", s(&cat)]), 0);
    let text = std::fs::read_to_string(cat).unwrap();
    assert!(text.contains("UAV"));
}

#[test]
fn output_root_override_applies_to_relative_dirs() {
    let tmp = tempfile::tempdir().unwrap();
    let text = SMALL.replacen("version = 1", "version = 1\noutput_dir = \"rel\"", 1);
    let cfg = write(tmp.path(), "c.toml", &text);
    std::env::set_var(OUT_ENV, tmp.path().join("root"));
    let code = run(&["demand", "--config", s(&cfg)]);
    std::env::remove_var(OUT_ENV);
    assert_eq!(code, 0);
    assert!(tmp.path().join("root/rel/demand.csv").exists());
}

#[test]
fn shipped_configs_parse_with_expected_budgets() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let budget = |name: &str| {
        let c = RunConfig::load(&dir.join(name)).unwrap();
        (c.experiment.mode, c.experiment.scheduled_steps(c.env.steps_per_episode))
    };
    assert_eq!(budget("full_single.toml"), (Mode::Single, 600_000));
    assert_eq!(budget("full_generalize.toml"), (Mode::Generalize, 900_000));
    assert_eq!(budget("full_overfit.toml"), (Mode::Overfit, 1_000_000));
    assert_eq!(budget("full_finetune.toml"), (Mode::Finetune, 800_000));
    for e in std::fs::read_dir(&dir).unwrap() {
        let p = e.unwrap().path();
        let c = RunConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert!(c.scenarios.count == 0 || c.scenarios.count >= c.experiment.scenarios_needed(), "{}", p.display());
    }
}
