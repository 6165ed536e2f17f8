//! The system file format.
//!
//! ```text
//! # comment
//! system NAME
//! vars x1 x2 x3
//! param a = 1
//! box x1 -2 2
//! momentum -2 2
//! exclude x1^2 + x2^2 + x3^2
//! op H = 1/2*(p1^2 + p2^2 + p3^2) - a/sqrt(x1^2 + x2^2 + x3^2)
//! set integrals = [H, Mx, My, Mz] central 1
//! ncpoly shift (F: W1, W2) = F1 - F2 + 3
//! ```
//!
//! One statement per line. `p<i>` is the momentum of the `i`-th declared
//! variable. Operators may refer to operators defined above them; inside an
//! operator, `*` composes from left to right. `param NAME` without a value
//! means the value 1.

use quasint_core::catalog::{OperatorSet, System, Witness};
use quasint_core::diffop::DiffOperator;
use quasint_core::expr::Expr;
use quasint_core::ncpoly::NCPolynomial;
use quasint_core::parse::{lower_expr, lower_ncpoly, lower_operator, parse_at, Pos};

use crate::error::{CliError, Result};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn number(text: &str, line: usize, column: usize) -> Result<f64> {
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| syntax(line, column, format!("expected a number, found '{text}'")))
}

/// Words of a line with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(b, w)| (line[..b].chars().count() + 1, w))
        .collect()
}

/// Splits `NAME = rest` after a keyword, returning the name, its column and
/// the column where `rest` starts.
fn assignment(line: &str, after: usize, lineno: usize) -> Result<(&str, usize, &str, usize)> {
    let Some(eq) = line[after..].find('=') else {
        return Err(syntax(lineno, col(line, line.len()), "expected '='"));
    };
    let head = &line[after..after + eq];
    let name = head.trim();
    let name_col = col(line, after + head.len() - head.trim_start().len());
    let rest_start = after + eq + 1;
    let rest = &line[rest_start..];
    let lead = rest.len() - rest.trim_start().len();
    Ok((name, name_col, rest.trim(), col(line, rest_start + lead)))
}

fn col(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

struct Parser {
    sys: System,
    declared_vars: bool,
}

impl Parser {
    fn check_fresh(&self, name: &str, line: usize, column: usize) -> Result<()> {
        if !is_name(name) {
            return Err(syntax(line, column, format!("invalid name '{name}'")));
        }
        if self.sys.vars.iter().any(|v| v == name) || self.sys.domain.params.contains_key(name) {
            return Err(syntax(line, column, format!("'{name}' is already declared")));
        }
        Ok(())
    }

    fn need_vars(&self, line: usize) -> Result<()> {
        if !self.declared_vars {
            return Err(syntax(line, 1, "'vars' must come first"));
        }
        Ok(())
    }

    fn var_index(&self, name: &str, line: usize, column: usize) -> Result<usize> {
        self.sys
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| syntax(line, column, format!("unknown variable '{name}'")))
    }

    fn statement(&mut self, raw: &str, lineno: usize) -> Result<()> {
        let ws = words(raw);
        let Some(&(_, keyword)) = ws.first() else { return Ok(()) };
        let after = raw.find(keyword).unwrap() + keyword.len();
        match keyword {
            "system" => {
                if ws.len() != 2 {
                    return Err(syntax(lineno, 1, "expected 'system NAME'"));
                }
                self.sys.name = ws[1].1.to_string();
            }
            "vars" => {
                if self.declared_vars {
                    return Err(syntax(lineno, 1, "'vars' declared twice"));
                }
                if !self.sys.domain.params.is_empty() || !self.sys.operators.is_empty() {
                    return Err(syntax(lineno, 1, "'vars' must come first"));
                }
                let names: Vec<&str> = ws[1..].iter().map(|&(_, w)| w).collect();
                for &(c, w) in &ws[1..] {
                    if !is_name(w) {
                        return Err(syntax(lineno, c, format!("invalid variable name '{w}'")));
                    }
                    if names.iter().filter(|&&n| n == w).count() > 1 {
                        return Err(syntax(lineno, c, format!("variable '{w}' repeated")));
                    }
                    if w.starts_with('p') && w[1..].chars().all(|c| c.is_ascii_digit()) && w.len() > 1 {
                        return Err(syntax(lineno, c, format!("'{w}' is a momentum token")));
                    }
                }
                let name = std::mem::take(&mut self.sys.name);
                self.sys = System::new(&name, &names);
                self.declared_vars = true;
            }
            "param" => {
                self.need_vars(lineno)?;
                let (name, c, value) = if raw[after..].contains('=') {
                    let (name, c, rest, rc) = assignment(raw, after, lineno)?;
                    (name, c, number(rest, lineno, rc)?)
                } else {
                    match ws.as_slice() {
                        [_, (c, name)] => (*name, *c, 1.0),
                        _ => return Err(syntax(lineno, 1, "expected 'param NAME = VALUE'")),
                    }
                };
                self.check_fresh(name, lineno, c)?;
                if quasint_core::Func::from_name(name).is_some() {
                    return Err(syntax(lineno, c, format!("'{name}' is a function name")));
                }
                self.sys.domain = self.sys.domain.clone().with_param(name, value);
            }
            "box" => {
                self.need_vars(lineno)?;
                let [_, (vc, v), (lc, lo), (hc, hi)] = ws.as_slice() else {
                    return Err(syntax(lineno, 1, "expected 'box VAR LO HI'"));
                };
                let i = self.var_index(v, lineno, *vc)?;
                let (lo, hi) = (number(lo, lineno, *lc)?, number(hi, lineno, *hc)?);
                if lo > hi {
                    return Err(syntax(lineno, *lc, "empty box"));
                }
                self.sys.domain.bounds[i] = (lo, hi);
            }
            "momentum" => {
                let [_, (lc, lo), (hc, hi)] = ws.as_slice() else {
                    return Err(syntax(lineno, 1, "expected 'momentum LO HI'"));
                };
                let (lo, hi) = (number(lo, lineno, *lc)?, number(hi, lineno, *hc)?);
                if lo >= hi {
                    return Err(syntax(lineno, *lc, "empty momentum box"));
                }
                self.sys.domain.momentum_bounds = (lo, hi);
            }
            "exclude" => {
                self.need_vars(lineno)?;
                let rest = &raw[after..];
                let lead = rest.len() - rest.trim_start().len();
                let node = parse_at(
                    rest.trim(),
                    Pos {
                        line: lineno,
                        column: col(raw, after + lead),
                    },
                )?;
                let scope = self.sys.scope();
                let e = lower_expr(&node, &|n| scope.resolve(n))?;
                self.sys.domain.exclusions.push(e.simplify());
            }
            "op" => {
                self.need_vars(lineno)?;
                let (name, c, rest, rc) = assignment(raw, after, lineno)?;
                self.check_fresh(name, lineno, c)?;
                if self.sys.operator(name).is_some() {
                    return Err(syntax(lineno, c, format!("operator '{name}' defined twice")));
                }
                let scope = self.sys.scope();
                if scope.momentum(name).is_some() {
                    return Err(syntax(lineno, c, format!("'{name}' is a momentum token")));
                }
                let node = parse_at(
                    rest,
                    Pos {
                        line: lineno,
                        column: rc,
                    },
                )?;
                let op = lower_operator(&node, &scope)?;
                self.sys.insert(name, op);
            }
            "set" => {
                self.need_vars(lineno)?;
                let (name, c, rest, rc) = assignment(raw, after, lineno)?;
                if !is_name(name) {
                    return Err(syntax(lineno, c, format!("invalid name '{name}'")));
                }
                if self.sys.set(name).is_some() {
                    return Err(syntax(lineno, c, format!("set '{name}' defined twice")));
                }
                let (Some(open), Some(close)) = (rest.find('['), rest.find(']')) else {
                    return Err(syntax(lineno, rc, "expected '[members]'"));
                };
                if open != 0 || close < open {
                    return Err(syntax(lineno, rc, "expected '[members]'"));
                }
                let members: Vec<String> = rest[1..close]
                    .split(',')
                    .map(str::trim)
                    .filter(|m| !m.is_empty())
                    .map(String::from)
                    .collect();
                for m in &members {
                    if self.sys.operator(m).is_none() {
                        return Err(syntax(lineno, rc, format!("unknown operator '{m}'")));
                    }
                }
                let tail: Vec<&str> = rest[close + 1..].split_whitespace().collect();
                let central = match tail.as_slice() {
                    [] => 0,
                    ["central", k] => k
                        .parse::<usize>()
                        .map_err(|_| syntax(lineno, rc, format!("invalid central count '{k}'")))?,
                    _ => return Err(syntax(lineno, rc, "expected 'central K' after the members")),
                };
                if central > members.len() {
                    return Err(syntax(lineno, rc, "central count exceeds the set size"));
                }
                self.sys.sets.push(OperatorSet {
                    name: name.to_string(),
                    members,
                    central,
                });
            }
            "ncpoly" => {
                self.need_vars(lineno)?;
                self.ncpoly(raw, after, lineno)?;
            }
            other => return Err(syntax(lineno, 1, format!("unknown statement '{other}'"))),
        }
        Ok(())
    }

    fn ncpoly(&mut self, raw: &str, after: usize, lineno: usize) -> Result<()> {
        let rest = &raw[after..];
        let (Some(open), Some(close)) = (rest.find('('), rest.find(')')) else {
            return Err(syntax(
                lineno,
                col(raw, after),
                "expected 'ncpoly NAME (F: ..., G: ...) = ...'",
            ));
        };
        let name = rest[..open].trim();
        let name_col = col(raw, after + rest[..open].len() - rest[..open].trim_start().len());
        if !is_name(name) {
            return Err(syntax(lineno, name_col, format!("invalid name '{name}'")));
        }
        if self.sys.witness(name).is_some() {
            return Err(syntax(lineno, name_col, format!("ncpoly '{name}' defined twice")));
        }
        let mut f = Vec::new();
        let mut g = Vec::new();
        let mut letters = None;
        let binding_col = col(raw, after + open + 1);
        for item in rest[open + 1..close].split(',') {
            let mut item = item.trim();
            if let Some(r) = item.strip_prefix("F:") {
                letters = Some(true);
                item = r.trim();
            } else if let Some(r) = item.strip_prefix("G:") {
                letters = Some(false);
                item = r.trim();
            }
            let Some(is_f) = letters else {
                return Err(syntax(lineno, binding_col, "bindings must start with 'F:' or 'G:'"));
            };
            if item.is_empty() {
                continue;
            }
            if self.sys.operator(item).is_none() {
                return Err(syntax(lineno, binding_col, format!("unknown operator '{item}'")));
            }
            if is_f { &mut f } else { &mut g }.push(item.to_string());
        }
        let body = &rest[close + 1..];
        let Some(eq) = body.find('=') else {
            return Err(syntax(lineno, col(raw, after + close + 1), "expected '='"));
        };
        if !body[..eq].trim().is_empty() {
            return Err(syntax(lineno, col(raw, after + close + 1), "expected '='"));
        }
        let text = &body[eq + 1..];
        let lead = text.len() - text.trim_start().len();
        let start = after + close + 1 + eq + 1 + lead;
        let node = parse_at(
            text.trim(),
            Pos {
                line: lineno,
                column: col(raw, start),
            },
        )?;
        let params: Vec<String> = self.sys.domain.params.keys().cloned().collect();
        let resolve = |n: &str| params.iter().any(|p| p == n).then(|| Expr::param(n));
        let poly = lower_ncpoly(&node, g.len(), f.len(), &resolve)?;
        self.sys.witnesses.push(Witness {
            name: name.to_string(),
            g,
            f,
            poly,
        });
        Ok(())
    }
}

/// Parses a system file. An empty file gives an empty system.
pub fn parse(text: &str) -> Result<System> {
    let mut p = Parser {
        sys: System::new("", &[]),
        declared_vars: false,
    };
    for (k, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(c) => &line[..c],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        p.statement(line, k + 1)?;
    }
    Ok(p.sys)
}

pub fn operator_text(sys: &System, op: &DiffOperator) -> String {
    let vars = |i: usize| sys.vars[i].clone();
    let momenta = |i: usize| format!("p{}", i + 1);
    op.display_with(&vars, &momenta).to_string()
}

pub fn expr_text(sys: &System, e: &Expr) -> String {
    let vars = |i: usize| sys.vars[i].clone();
    e.display_with(&vars).to_string()
}

pub fn ncpoly_text(p: &NCPolynomial) -> String {
    p.to_string()
}

/// Writes a system back in the file format; [`parse`] of the output gives a
/// structurally equal system.
pub fn export(sys: &System) -> String {
    let mut out = String::new();
    if !sys.name.is_empty() {
        out.push_str(&format!("system {}\n", sys.name));
    }
    if sys.vars.is_empty() && sys.operators.is_empty() && sys.domain.params.is_empty() {
        return out;
    }
    out.push_str(&format!("vars {}\n", sys.vars.join(" ")));
    for (name, value) in &sys.domain.params {
        out.push_str(&format!("param {name} = {value}\n"));
    }
    for (v, (lo, hi)) in sys.vars.iter().zip(&sys.domain.bounds) {
        out.push_str(&format!("box {v} {lo} {hi}\n"));
    }
    let (lo, hi) = sys.domain.momentum_bounds;
    out.push_str(&format!("momentum {lo} {hi}\n"));
    for e in &sys.domain.exclusions {
        out.push_str(&format!("exclude {}\n", expr_text(sys, e)));
    }
    for (name, op) in &sys.operators {
        out.push_str(&format!("op {name} = {}\n", operator_text(sys, op)));
    }
    for set in &sys.sets {
        out.push_str(&format!("set {} = [{}]", set.name, set.members.join(", ")));
        if set.central > 0 {
            out.push_str(&format!(" central {}", set.central));
        }
        out.push('\n');
    }
    for w in &sys.witnesses {
        let mut binding = format!("F: {}", w.f.join(", "));
        if !w.g.is_empty() {
            binding.push_str(&format!(", G: {}", w.g.join(", ")));
        }
        out.push_str(&format!("ncpoly {} ({binding}) = {}\n", w.name, ncpoly_text(&w.poly)));
    }
    out
}
