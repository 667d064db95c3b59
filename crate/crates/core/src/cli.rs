//! The `modsm` command line.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{check_semantical_join, compose, join, join_all, SemanticalJoinWitness};
use crate::decompose::{decompose, Mode};
use crate::equivalence::{eva, modular_eq, visible_eq, weak_eq, Method};
use crate::error::{Error, Result};
use crate::interpretation::{Interpretation, ModelSet};
use crate::io::{name_cmp, print_names, write_stream, Format, ModuleStream};
use crate::module::Module;
use crate::semantics::{stable_models, Limits, Strategy};

pub const CAP_VAR: &str = "MODSM_CAP";

#[derive(Parser, Debug)]
#[command(name = "modsm", version, about = "Modular smodels-style logic programs")]
struct Cli {
    /// Module file format
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Text)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Smodels,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Smodels => Format::Smodels,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Pos,
    PosHidden,
    PosnegHidden,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Brute,
    Instantiate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Weak,
    Visible,
    Modular,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Direct,
    Generator,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a module into a stream of submodules
    Split {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long, value_enum, default_value_t = ModeArg::PosHidden)]
        mode: ModeArg,
        /// Write one file `mod-<index>.lp` per submodule into this directory
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Join the modules of streams, files or split directories
    Cat {
        #[arg(default_value = "-")]
        files: Vec<String>,
        /// Fail unless the joined module has this many rules
        #[arg(long)]
        check_rules: Option<usize>,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Enumerate stable models
    Solve {
        #[arg(default_value = "-")]
        file: String,
        /// Print at most this many models; 0 prints all
        #[arg(long, default_value_t = 0)]
        max_models: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Brute)]
        strategy: StrategyArg,
    },
    /// Compare two modules
    Eq {
        first: String,
        second: String,
        #[arg(long, value_enum, default_value_t = KindArg::Modular)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Validate modules; with --pair, diagnose composing two of them
    Check {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long)]
        pair: bool,
    },
    /// Check the EVA property
    Eva {
        #[arg(default_value = "-")]
        file: String,
    },
}

/// Runs the command line and returns the exit code: 0 for success or a
/// positive answer, 1 for a negative answer, 2 for errors.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Context {
        format: cli.format.into(),
        stdin,
        stdout,
        stderr,
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            2
        }
    }
}

/// Limits from `MODSM_CAP`, or the defaults.
pub fn limits_from_env() -> Result<Limits> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Limits::new)
            .map_err(|_| Error::Unsupported(format!("{CAP_VAR}={v:?} is not a number"))),
        Err(_) => Ok(Limits::default()),
    }
}

struct Context<'a> {
    format: Format,
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn read_bytes(&mut self, path: &str) -> Result<Vec<u8>> {
        if path == "-" {
            let mut buf = Vec::new();
            self.stdin.read_to_end(&mut buf)?;
            Ok(buf)
        } else {
            Ok(fs::read(path)?)
        }
    }

    fn read_module(&mut self, path: &str) -> Result<Module> {
        let bytes = self.read_bytes(path)?;
        self.format.read(&bytes)
    }

    fn read_modules(&mut self, path: &str, out: &mut Vec<Module>) -> Result<()> {
        let p = Path::new(path);
        if path != "-" && p.is_dir() {
            for file in split_dir_files(p)? {
                let bytes = fs::read(&file)?;
                out.push(self.format.read(&bytes)?);
            }
            return Ok(());
        }
        let reader: Box<dyn BufRead + '_> = if path == "-" {
            Box::new(BufReader::new(&mut *self.stdin))
        } else {
            Box::new(BufReader::new(fs::File::open(p)?))
        };
        for m in ModuleStream::new(reader, self.format) {
            out.push(m?);
        }
        Ok(())
    }

    fn write_to(&mut self, path: &str, bytes: &[u8]) -> Result<()> {
        if path == "-" {
            self.stdout.write_all(bytes)?;
        } else {
            fs::write(path, bytes)?;
        }
        Ok(())
    }

    fn dispatch(&mut self, command: Command) -> Result<i32> {
        let limits = limits_from_env()?;
        match command {
            Command::Split {
                file,
                mode,
                out_dir,
                output,
            } => {
                let m = self.read_module(&file)?;
                let mode = match mode {
                    ModeArg::Pos => Mode::Pos,
                    ModeArg::PosHidden => Mode::PosHidden,
                    ModeArg::PosnegHidden => Mode::PosNegHidden,
                };
                let d = decompose(&m, mode);
                for w in &d.warnings {
                    writeln!(self.stderr, "warning: {w}")?;
                }
                match out_dir {
                    Some(dir) => {
                        fs::create_dir_all(&dir)?;
                        for (i, sub) in d.modules.iter().enumerate() {
                            fs::write(dir.join(format!("mod-{i}.lp")), self.format.write(sub))?;
                        }
                    }
                    None => {
                        let mut bytes = Vec::new();
                        write_stream(&mut bytes, &d.modules, self.format)?;
                        self.write_to(&output, &bytes)?;
                    }
                }
                Ok(0)
            }
            Command::Cat {
                files,
                check_rules,
                output,
            } => {
                let mut modules = Vec::new();
                for f in &files {
                    self.read_modules(f, &mut modules)?;
                }
                let joined = join_all(&modules)?;
                let bytes = self.format.write(&joined);
                self.write_to(&output, &bytes)?;
                match check_rules {
                    Some(n) if n != joined.rules().len() => {
                        writeln!(self.stderr, "rule count {} differs from {n}", joined.rules().len())?;
                        Ok(1)
                    }
                    _ => Ok(0),
                }
            }
            Command::Solve {
                file,
                max_models,
                strategy,
            } => {
                let m = self.read_module(&file)?;
                let strategy = match strategy {
                    StrategyArg::Brute => Strategy::BruteForce,
                    StrategyArg::Instantiate => Strategy::Instantiate,
                };
                let models = stable_models(&m, strategy, &limits)?;
                let lines = model_lines(&m, &models);
                let take = if max_models == 0 { lines.len() } else { max_models };
                for l in lines.iter().take(take) {
                    writeln!(self.stdout, "{l}")?;
                }
                if models.is_empty() {
                    writeln!(self.stderr, "no stable models")?;
                    return Ok(1);
                }
                Ok(0)
            }
            Command::Eq {
                first,
                second,
                kind,
                method,
            } => {
                let p = self.read_module(&first)?;
                let q = self.read_module(&second)?;
                let method = match method {
                    MethodArg::Direct => Method::Direct,
                    MethodArg::Generator => Method::Generator,
                };
                let same = match kind {
                    KindArg::Weak => weak_eq(&p, &q, &limits)?,
                    KindArg::Visible => visible_eq(&p, &q, &limits)?,
                    KindArg::Modular => modular_eq(&p, &q, method, &limits)?,
                };
                writeln!(self.stdout, "{}", if same { "equivalent" } else { "not equivalent" })?;
                Ok(if same { 0 } else { 1 })
            }
            Command::Check { files, pair } => {
                let mut modules = Vec::new();
                for f in &files {
                    modules.push(self.read_module(f)?);
                }
                if pair {
                    let [p, q] = &modules[..] else {
                        return Err(Error::Unsupported("--pair takes exactly two modules".into()));
                    };
                    return self.check_pair(p, q, &limits);
                }
                for (f, m) in files.iter().zip(&modules) {
                    writeln!(
                        self.stdout,
                        "{f}: valid, {} rules, {} input, {} output, {} hidden atoms",
                        m.rules().len(),
                        m.input().len(),
                        m.output().len(),
                        m.hidden().len()
                    )?;
                }
                Ok(0)
            }
            Command::Eva { file } => {
                let m = self.read_module(&file)?;
                let holds = eva(&m, &limits)?;
                writeln!(self.stdout, "{}", if holds { "EVA holds" } else { "EVA fails" })?;
                Ok(if holds { 0 } else { 1 })
            }
        }
    }

    fn check_pair(&mut self, p: &Module, q: &Module, limits: &Limits) -> Result<i32> {
        match compose(p, q) {
            Ok(_) => writeln!(self.stdout, "composition: defined")?,
            Err(Error::Composition(e)) => {
                writeln!(self.stdout, "composition: {e}")?;
                return Ok(1);
            }
            Err(e) => return Err(e),
        }
        let joined = match join(p, q) {
            Ok(_) => {
                writeln!(self.stdout, "join: defined")?;
                true
            }
            Err(Error::Composition(e)) => {
                writeln!(self.stdout, "join: {e}")?;
                false
            }
            Err(e) => return Err(e),
        };
        let report = check_semantical_join(p, q, limits)?;
        match &report.witness {
            None => writeln!(self.stdout, "semantical join: defined")?,
            Some(w) => {
                let names = print_names(&report.composition);
                let (what, m) = match w {
                    SemanticalJoinWitness::NotStableInFirst(m) => {
                        ("stable in the composition but not in the first module", m)
                    }
                    SemanticalJoinWitness::NotStableInSecond(m) => {
                        ("stable in the composition but not in the second module", m)
                    }
                    SemanticalJoinWitness::LostInComposition(m) => {
                        ("stable in both modules but not in the composition", m)
                    }
                };
                writeln!(
                    self.stdout,
                    "semantical join: undefined, {} is {what}",
                    model_text(m, &names)
                )?;
            }
        }
        Ok(if joined { 0 } else { 1 })
    }
}

/// `mod-<index>.lp` files of a split directory in index order.
fn split_dir_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<(usize, PathBuf)> = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let index = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_prefix("mod-"))
            .and_then(|n| n.strip_suffix(".lp"))
            .and_then(|n| n.parse().ok());
        if let Some(i) = index {
            files.push((i, path));
        }
    }
    files.sort();
    Ok(files.into_iter().map(|(_, p)| p).collect())
}

fn sorted_names(m: &Interpretation, names: &std::collections::BTreeMap<crate::atom::Atom, String>) -> Vec<String> {
    let mut v: Vec<String> = m
        .atoms()
        .iter()
        .map(|a| names.get(a).cloned().unwrap_or_else(|| a.to_string()))
        .collect();
    v.sort_by(|a, b| name_cmp(a, b));
    v
}

fn model_text(m: &Interpretation, names: &std::collections::BTreeMap<crate::atom::Atom, String>) -> String {
    format!("{{{}}}", sorted_names(m, names).join(","))
}

/// Models as `{a,b}` lines in canonical order.
pub fn model_lines(m: &Module, models: &ModelSet) -> Vec<String> {
    let names = print_names(m);
    let mut keyed: Vec<Vec<String>> = models.iter().map(|x| sorted_names(x, &names)).collect();
    keyed.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| name_cmp(x, y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| a.len().cmp(&b.len()))
    });
    keyed.into_iter().map(|v| format!("{{{}}}", v.join(","))).collect()
}
