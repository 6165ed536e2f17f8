//! System files and the subcommands of the `quasint` tool.

pub mod commands;
pub mod error;
pub mod format;

use quasint_core::catalog::System;
use quasint_core::parse::{lower_operator, parse_at, Pos};

pub use commands::{run, Command, Report, Selection, Verdict};
pub use error::{CliError, Result};

/// Name under which an operator given on the command line is added.
pub const INLINE_OPERATOR: &str = "expr";

/// Largest `k` among the tokens `x<k>` and `p<k>` of an operator text.
pub fn infer_dim(text: &str) -> usize {
    let mut best = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphanumeric() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            if let Some(rest) = word.strip_prefix('x').or_else(|| word.strip_prefix('p')) {
                if let Ok(k) = rest.parse::<usize>() {
                    if format!("{}{k}", &word[..1]) == word {
                        best = best.max(k);
                    }
                }
            }
        } else {
            i += 1;
        }
    }
    best
}

/// Adds an operator given as text to `sys` (or to a fresh system in the
/// variables `x1..xn` when there is none).
pub fn with_inline_operator(sys: Option<System>, text: &str) -> Result<System> {
    let fresh = sys.is_none();
    let mut sys = sys.unwrap_or_else(|| {
        let names: Vec<String> = (1..=infer_dim(text)).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        System::new("", &refs)
    });
    let mut scope = sys.scope();
    if fresh {
        // undeclared identifiers become parameters with value 1
        scope.params = None;
    }
    let node = parse_at(text, Pos { line: 1, column: 1 })?;
    let op = lower_operator(&node, &scope)?;
    if fresh {
        for c in op.terms().values() {
            for name in c.params() {
                sys.domain = sys.domain.clone().with_param(&name, 1.0);
            }
        }
    }
    sys.insert(INLINE_OPERATOR, op);
    Ok(sys)
}
