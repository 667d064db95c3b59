use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn modsm(args: &[&str], stdin: &str) -> Output {
    modsm_env(args, stdin, &[])
}

fn modsm_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_modsm"))
        .args(args)
        .env_remove("MODSM_CAP")
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, src: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, src).unwrap();
    path.to_str().unwrap().to_string()
}

const SPLITTING: &str = "a :- not b.\nb :- not a.\nc :- a.\n";

const CHAIN: &str = "#input x.
#output a, b, c, d.
#hidden h.
a :- x, not b.
b :- not a.
h :- a.
c :- h.
d :- c, d.
d :- not c.
{a, d} :- b.
";

#[test]
fn solve_prints_models_in_order() {
    let o = modsm(&["solve"], SPLITTING);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{a,c}\n{b}\n");
    let o = modsm(&["solve", "--max-models", "1", "--strategy", "instantiate"], SPLITTING);
    assert_eq!(stdout(&o), "{a,c}\n");
}

#[test]
fn solve_without_models_exits_one() {
    let o = modsm(&["solve"], "a :- not a.\n");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "");
    assert_eq!(stderr(&o), "no stable models\n");
}

#[test]
fn split_then_cat_preserves_rules() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "chain.lp", CHAIN);
    for mode in ["pos", "pos-hidden", "posneg-hidden"] {
        let split = modsm(&["split", "--mode", mode, &file], "");
        assert_eq!(split.status.code(), Some(0), "{}", stderr(&split));
        assert_eq!(stderr(&split).contains("warning"), mode == "pos");
        let cat = modsm(&["cat", "--check-rules", "8"], &stdout(&split));
        if mode == "pos" {
            continue;
        }
        assert_eq!(cat.status.code(), Some(0), "{mode}: {}", stderr(&cat));
        let eq_file = write(dir.path(), "joined.lp", &stdout(&cat));
        let eq = modsm(&["eq", &file, &eq_file], "");
        assert_eq!(stdout(&eq), "equivalent\n");
    }
}

#[test]
fn split_into_directory() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "chain.lp", CHAIN);
    let out = dir.path().join("parts");
    let o = modsm(
        &[
            "split",
            "--mode",
            "posneg-hidden",
            "--out-dir",
            out.to_str().unwrap(),
            &file,
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("mod-0.lp").exists());
    let cat = modsm(&["cat", out.to_str().unwrap()], "");
    assert_eq!(cat.status.code(), Some(0), "{}", stderr(&cat));
    let streamed = modsm(&["split", "--mode", "posneg-hidden", &file], "");
    let direct = modsm(&["cat"], &stdout(&streamed));
    assert_eq!(stdout(&cat), stdout(&direct));
    assert!(stdout(&cat).contains("{a} :- b.\n{d} :- b.\n"));
}

#[test]
fn split_is_deterministic() {
    for format in ["text", "smodels"] {
        let input = if format == "text" {
            CHAIN.as_bytes().to_vec()
        } else {
            modsm::io::encode_smodels(&modsm::io::parse_text(CHAIN).unwrap())
        };
        let input = String::from_utf8(input).unwrap();
        let runs: Vec<Vec<u8>> = (0..3)
            .map(|_| modsm(&["--format", format, "split"], &input).stdout)
            .collect();
        assert!(!runs[0].is_empty());
        assert!(runs.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn numeric_format_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let text_file = write(dir.path(), "chain.lp", CHAIN);
    let lp = modsm::io::parse_text(CHAIN).unwrap();
    let sm_file = dir.path().join("chain.sm");
    std::fs::write(&sm_file, modsm::io::encode_smodels(&lp)).unwrap();
    let sm_path = sm_file.to_str().unwrap();

    let a = modsm(&["solve", &text_file], "");
    let b = modsm(&["--format", "smodels", "solve", sm_path], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let split = modsm(
        &["--format", "smodels", "split", "--mode", "posneg-hidden", sm_path],
        "",
    );
    let cat = modsm(&["--format", "smodels", "cat"], &stdout(&split));
    assert_eq!(cat.status.code(), Some(0), "{}", stderr(&cat));
    let joined = modsm::io::decode_smodels(&cat.stdout).unwrap();
    assert_eq!(joined.rules().len(), lp.rules().len() + 1);
    assert!(modsm::equivalence::modular_eq(&joined, &lp, Default::default(), &Default::default()).unwrap());
    let garbage = modsm(&["--format", "smodels", "solve"], "1 2 3\n");
    assert_eq!(garbage.status.code(), Some(2));
}

#[test]
fn check_pair_reports_mutual_dependence() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.lp", "#input b.\n#output a.\na :- b.\n");
    let q = write(dir.path(), "q.lp", "#input a.\n#output b.\nb :- a.\n");
    let o = modsm(&["check", "--pair", &p, &q], "");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "composition: defined\njoin: MutualDependence({a,b})\n\
         semantical join: undefined, {a,b} is stable in both modules but not in the composition\n"
    );
    let o = modsm(&["check", &p, &q], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("q.lp: valid, 1 rules, 1 input, 1 output, 0 hidden atoms\n"));
}

#[test]
fn eq_and_eva_answers() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.lp", "#output a.\n#hidden h.\n{h}.\na :- h.\n");
    let q = write(dir.path(), "q.lp", "#output a.\n{a}.\n");
    assert_eq!(stdout(&modsm(&["eq", &p, &q], "")), "equivalent\n");
    let weak = modsm(&["eq", "--kind", "weak", &p, &q], "");
    assert_eq!(
        (weak.status.code(), stdout(&weak)),
        (Some(1), "not equivalent\n".into())
    );
    let gen = modsm(&["eq", "--method", "generator", &p, &q], "");
    assert_eq!(gen.status.code(), Some(0));
    assert_eq!(stdout(&modsm(&["eva", &q], "")), "EVA holds\n");
    let o = modsm(&["eva", &p], "");
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "EVA fails\n".into()));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(modsm(&[], "").status.code(), Some(2));
    assert_eq!(modsm(&["solve", "--strategy", "magic"], "").status.code(), Some(2));
    assert_eq!(modsm(&["--help"], "").status.code(), Some(0));
    let o = modsm(&["solve"], "a :- , b.\n");
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o), "error: 1:6: syntax error: expected an atom, found ','\n");
    let o = modsm(&["solve", "/nonexistent/file.lp"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_from_environment() {
    let src: String = (0..12).map(|i| format!("{{x{i}}}.\n")).collect();
    let o = modsm_env(&["solve", "--max-models", "1"], &src, &[("MODSM_CAP", "10")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap is 10"), "{}", stderr(&o));
    let o = modsm_env(&["solve", "--max-models", "1"], &src, &[("MODSM_CAP", "12")]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "{}\n".into()));
    let o = modsm_env(&["solve"], &src, &[("MODSM_CAP", "many")]);
    assert_eq!(o.status.code(), Some(2));
}
