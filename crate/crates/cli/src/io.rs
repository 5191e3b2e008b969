use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use treepattern::{PruferSequence, RootedPattern, Tree};

/// Failure classes, mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad combination of flags or values (exit 1).
    Usage(String),
    /// Unreadable or malformed input (exit 2).
    Input(String),
    /// `verify` found a mismatch (exit 3).
    Verification,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verification => 3,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn read_source(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn label(path: Option<&Path>) -> String {
    path.map_or_else(|| "stdin".to_string(), |p| p.display().to_string())
}

pub fn read_tree(path: Option<&Path>) -> CliResult<Tree> {
    read_source(path)?
        .parse()
        .map_err(|e| CliError::Input(format!("{}: {e}", label(path))))
}

pub fn read_prufer(path: Option<&Path>) -> CliResult<PruferSequence> {
    read_source(path)?
        .parse()
        .map_err(|e| CliError::Input(format!("{}: {e}", label(path))))
}

/// `spec` is a pattern file when such a file exists, otherwise a built-in name.
pub fn resolve_pattern(spec: &str) -> CliResult<RootedPattern> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = read_source(Some(path))?;
        return text
            .parse()
            .map_err(|e| CliError::Input(format!("{spec}: {e}")));
    }
    RootedPattern::named(spec).map_err(|e| CliError::Input(format!("pattern `{spec}`: {e}")))
}

/// Destination for command output: a file given by `--out`, or stdout.
pub struct Output {
    path: Option<PathBuf>,
}

impl Output {
    pub fn new(path: Option<PathBuf>) -> Self {
        Output { path }
    }

    pub fn write(&self, text: &str) -> CliResult {
        match &self.path {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::Input(format!("stdout: {e}")))
            }
        }
    }

    pub fn json(&self, value: &impl serde::Serialize) -> CliResult {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        self.write(&text)
    }
}

/// Renders serializable rows as CSV with a header line.
pub fn csv_text<R: serde::Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
