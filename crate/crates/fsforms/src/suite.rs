//! Identity suites: named collections of symbolic theorem cases, loaded
//! from a small stanza-based text format, evaluated against the engine,
//! and summarized as [`Report`]s.
//!
//! Suite file format: `#` lines are comments; a stanza starts at a `case`
//! line and carries `note` (repeatable), `mode` (`exact` or `onshell`,
//! default `exact`), `lhs`, and `rhs` lines, each `key value` on one line.
//!
//! The built-in suites are compiled into the library; setting the
//! `FSFORMS_SUITE_DIR` environment variable (a directory of `*.txt` files)
//! replaces them wholesale, which the tests use to exercise failure paths.

use crate::calculus::Engine;
use crate::report::{CaseOutcome, Report, Verdict};
use crate::algebra::{pretty_print, AlgebraError, Expression};
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Compare canonical forms directly.
    Exact,
    /// Impose the Gauss constraint and move exact slice terms to the
    /// corner on both sides before comparing.
    OnShell,
}

#[derive(Debug, Clone)]
pub struct TheoremCase {
    pub name: String,
    pub notes: Vec<String>,
    pub mode: Mode,
    pub lhs: String,
    pub rhs: String,
}

/// Environment variable naming a directory of replacement suite files.
pub const SUITE_DIR_VAR: &str = "FSFORMS_SUITE_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("ym-core", include_str!("../suites/ym-core.txt")),
    ("ym-corner", include_str!("../suites/ym-corner.txt")),
    ("brst", include_str!("../suites/brst.txt")),
    ("aux-b2", include_str!("../suites/aux-b2.txt")),
];

pub struct SuiteRegistry {
    suites: BTreeMap<String, Vec<TheoremCase>>,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("suite file {file}, line {line}: {msg}")]
    Format {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("unknown suite `{0}`")]
    Unknown(String),
    #[error("reading suite directory: {0}")]
    Io(#[from] std::io::Error),
}

impl SuiteRegistry {
    /// Built-in suites, unless `FSFORMS_SUITE_DIR` points at a directory of
    /// replacement `*.txt` files.
    pub fn load() -> Result<Self, SuiteError> {
        match std::env::var_os(SUITE_DIR_VAR) {
            Some(dir) => Self::from_dir(std::path::Path::new(&dir)),
            None => Self::builtin(),
        }
    }

    pub fn builtin() -> Result<Self, SuiteError> {
        let mut suites = BTreeMap::new();
        for (name, text) in BUILTIN {
            suites.insert(name.to_string(), parse_suite(name, text)?);
        }
        Ok(SuiteRegistry { suites })
    }

    pub fn from_dir(dir: &std::path::Path) -> Result<Self, SuiteError> {
        let mut suites = BTreeMap::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("txt") {
                continue;
            }
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            let text = std::fs::read_to_string(&path)?;
            suites.insert(name.clone(), parse_suite(&name, &text)?);
        }
        Ok(SuiteRegistry { suites })
    }

    pub fn names(&self) -> Vec<&str> {
        self.suites.keys().map(String::as_str).collect()
    }

    pub fn cases(&self, suite: &str) -> Result<&[TheoremCase], SuiteError> {
        self.suites
            .get(suite)
            .map(Vec::as_slice)
            .ok_or_else(|| SuiteError::Unknown(suite.to_string()))
    }

    /// Runs one suite; cases are evaluated in parallel but reported in
    /// file order, so the report is deterministic.
    pub fn run(&self, engine: &Engine, suite: &str) -> Result<Report, SuiteError> {
        let cases = self.cases(suite)?;
        let outcomes: Vec<CaseOutcome> = cases
            .par_iter()
            .map(|c| run_case(engine, c))
            .collect();
        Ok(Report::new(suite, None, outcomes))
    }

    pub fn run_all(&self, engine: &Engine) -> Result<Vec<Report>, SuiteError> {
        self.names()
            .into_iter()
            .map(|n| self.run(engine, n))
            .collect()
    }
}

/// Evaluates a single case: parse both sides, reduce per the case's mode,
/// and compare canonical forms.
pub fn run_case(engine: &Engine, case: &TheoremCase) -> CaseOutcome {
    match evaluate(engine, case, &case.lhs, &case.rhs) {
        Ok(None) => CaseOutcome {
            name: case.name.clone(),
            verdict: Verdict::Pass,
            residual: None,
            citations: case.notes.clone(),
        },
        Ok(Some(residual)) => CaseOutcome {
            name: case.name.clone(),
            verdict: Verdict::Fail,
            residual: Some(residual),
            citations: case.notes.clone(),
        },
        Err(e) => CaseOutcome {
            name: case.name.clone(),
            verdict: Verdict::Error,
            residual: Some(e.to_string()),
            citations: case.notes.clone(),
        },
    }
}

/// `Ok(None)` when the identity holds, `Ok(Some(diff))` with the
/// pretty-printed nonzero difference when it does not.
fn evaluate(
    engine: &Engine,
    case: &TheoremCase,
    lhs_text: &str,
    rhs_text: &str,
) -> Result<Option<String>, AlgebraError> {
    let reduce = |e: &Expression| -> Result<Expression, AlgebraError> {
        match case.mode {
            Mode::Exact => Ok(e.clone()),
            Mode::OnShell => engine.reduce_onshell(e),
        }
    };
    let lhs = reduce(&engine.parse(lhs_text)?)?;
    let rhs = reduce(&engine.parse(rhs_text)?)?;
    if lhs.equals(&rhs)? {
        Ok(None)
    } else {
        Ok(Some(pretty_print(&lhs.sub(&rhs)?)))
    }
}

// ----- mutation testing of the registered identities ---------------------

/// One sign-flip mutant of a case: the same identity with exactly one
/// top-level term of the mutated side negated.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub case: String,
    pub description: String,
    pub lhs: String,
    pub rhs: String,
}

/// All sign-flip mutants of a case. The right-hand side is mutated; when
/// it is literally `0` the left-hand side is mutated instead.
pub fn sign_mutants(case: &TheoremCase) -> Vec<Mutant> {
    let (side_text, mutate_rhs) = if case.rhs.trim() == "0" {
        (case.lhs.as_str(), false)
    } else {
        (case.rhs.as_str(), true)
    };
    let terms = split_top_level(side_text);
    (0..terms.len())
        .map(|i| {
            let mutated = join_with_flip(&terms, i);
            let (lhs, rhs) = if mutate_rhs {
                (case.lhs.clone(), mutated.clone())
            } else {
                (mutated.clone(), case.rhs.clone())
            };
            Mutant {
                case: case.name.clone(),
                description: format!(
                    "{}: flipped sign of {} term {} of {}",
                    case.name,
                    if mutate_rhs { "rhs" } else { "lhs" },
                    i + 1,
                    terms.len()
                ),
                lhs,
                rhs,
            }
        })
        .collect()
}

/// Runs every sign-flip mutant of every case in the suite and returns the
/// survivors: mutants that still verify. A sound suite kills all of them.
pub fn mutation_survivors(
    engine: &Engine,
    cases: &[TheoremCase],
) -> Vec<String> {
    let mut survivors = Vec::new();
    for case in cases {
        for m in sign_mutants(case) {
            let verdict = evaluate(engine, case, &m.lhs, &m.rhs);
            if matches!(verdict, Ok(None)) {
                survivors.push(m.description);
            }
        }
    }
    survivors
}

/// Splits an expression's text into its top-level signed terms: `(sign,
/// body)` pairs, honoring parenthesis depth.
fn split_top_level(text: &str) -> Vec<(bool, String)> {
    let mut terms = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    let mut negative = false;
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            '+' | '-' if depth == 0 => {
                if current.trim().is_empty() {
                    // Leading sign of the first term.
                    negative = c == '-';
                } else {
                    terms.push((negative, current.trim().to_string()));
                    current.clear();
                    negative = c == '-';
                }
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        terms.push((negative, current.trim().to_string()));
    }
    terms
}

fn join_with_flip(terms: &[(bool, String)], flip: usize) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        let neg = if i == flip { !neg } else { *neg };
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

// ----- the stanza parser -------------------------------------------------

fn parse_suite(file: &str, text: &str) -> Result<Vec<TheoremCase>, SuiteError> {
    let mut cases: Vec<TheoremCase> = Vec::new();
    let err = |line: usize, msg: &str| SuiteError::Format {
        file: file.to_string(),
        line,
        msg: msg.to_string(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(lineno, "expected `key value`"))?;
        let value = value.trim().to_string();
        if key == "case" {
            cases.push(TheoremCase {
                name: value,
                notes: Vec::new(),
                mode: Mode::Exact,
                lhs: String::new(),
                rhs: String::new(),
            });
            continue;
        }
        let current = cases
            .last_mut()
            .ok_or_else(|| err(lineno, "key before any `case` line"))?;
        match key {
            "note" => current.notes.push(value),
            "mode" => {
                current.mode = match value.as_str() {
                    "exact" => Mode::Exact,
                    "onshell" => Mode::OnShell,
                    other => return Err(err(lineno, &format!("unknown mode `{other}`"))),
                }
            }
            "lhs" => current.lhs = value,
            "rhs" => current.rhs = value,
            other => return Err(err(lineno, &format!("unknown key `{other}`"))),
        }
    }
    for case in &cases {
        if case.lhs.is_empty() || case.rhs.is_empty() {
            return Err(err(0, &format!("case `{}` is missing lhs or rhs", case.name)));
        }
    }
    Ok(cases)
}
