//! Line-oriented text formats.
//!
//! `.sas` instances:
//!
//! ```text
//! sas 1
//! vars <n>
//! domain <d>
//! init <x_0> .. <x_{n-1}>
//! goal <g_0> .. <g_{n-1}>        # each a value or `_`
//! action <name>                  # zero or more blocks
//! pre <v>=<x> ..                 # optional, at most once per block
//! eff <v>=<x> ..                 # optional, at most once per block
//! end
//! ```
//!
//! `.hs` hitting-set instances: a header `hs <|S|> <|C|> <k>` followed by
//! exactly `|C|` lines, each listing the (nonempty) element indices of one set.
//!
//! `.pc` partitioned graphs: a header `pc <k> <n>` followed by edge lines
//! `i a j b`, meaning vertex `a` of part `i` is adjacent to vertex `b` of part
//! `j`, with `i != j`.
//!
//! Plans: one action name per line.
//!
//! In every format, lines starting with `#` are comments. Blank lines are
//! ignored, except inside the set block of a `.hs` file where a blank line
//! would denote an empty set and is rejected.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::reductions::{HittingSetInstance, PartitionedGraph, Vertex};
use crate::sas::{Action, DomainSpec, PartialState, Plan, SasInstance, State, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; points one past the last line for unexpected end of input.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Significant lines: comment and blank lines dropped, numbered from 1.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, keep_blank: bool) -> Self {
        let iter: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(move |(_, l)| !l.starts_with('#') && (keep_blank || !l.is_empty())),
        );
        Self {
            inner: iter.peekable(),
            last: text.lines().count(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.inner
            .next()
            .ok_or_else(|| ParseError::new(self.last + 1, format!("unexpected end of input, expected {what}")))
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.inner.peek().copied()
    }
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(line, format!("expected {what}, found `{token}`")));
    }
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("{what} `{token}` is too large")))
}

/// Splits `line` into keyword and arguments, checking the keyword.
fn keyword<'a>(line: usize, text: &'a str, expected: &str) -> Result<Vec<&'a str>, ParseError> {
    let mut tokens = text.split_whitespace();
    match tokens.next() {
        Some(k) if k == expected => Ok(tokens.collect()),
        Some(k) => Err(ParseError::new(line, format!("expected `{expected}`, found `{k}`"))),
        None => Err(ParseError::new(line, format!("expected `{expected}`"))),
    }
}

fn single<T: FromStr>(line: usize, args: &[&str], what: &str) -> Result<T, ParseError> {
    match args {
        [token] => number(line, token, what),
        _ => Err(ParseError::new(line, format!("expected exactly one {what}"))),
    }
}

fn domain_value(line: usize, token: &str, domain: DomainSpec) -> Result<Value, ParseError> {
    let x: Value = number(line, token, "domain value")?;
    if !domain.contains(x) {
        return Err(ParseError::new(
            line,
            format!("value {x} outside the domain 0..{}", domain.size()),
        ));
    }
    Ok(x)
}

fn assignments(line: usize, args: &[&str], n: usize, domain: DomainSpec) -> Result<PartialState, ParseError> {
    let mut state = PartialState::undefined(n);
    for token in args {
        let (var, value) = token
            .split_once('=')
            .ok_or_else(|| ParseError::new(line, format!("expected `<var>=<value>`, found `{token}`")))?;
        let var: usize = number(line, var, "variable index")?;
        if var >= n {
            return Err(ParseError::new(line, format!("variable {var} out of range (n = {n})")));
        }
        if state.get(var).is_some() {
            return Err(ParseError::new(line, format!("variable {var} assigned twice")));
        }
        state.set(var, Some(domain_value(line, value, domain)?));
    }
    Ok(state)
}

pub fn parse_sas(text: &str) -> Result<SasInstance, ParseError> {
    let mut lines = Lines::new(text, false);

    let (ln, l) = lines.next_line("`sas 1` header")?;
    let version: u32 = single(ln, &keyword(ln, l, "sas")?, "format version")?;
    if version != 1 {
        return Err(ParseError::new(ln, format!("unsupported format version {version}")));
    }
    let (ln, l) = lines.next_line("`vars`")?;
    let n: usize = single(ln, &keyword(ln, l, "vars")?, "variable count")?;
    let (ln, l) = lines.next_line("`domain`")?;
    let d: u32 = single(ln, &keyword(ln, l, "domain")?, "domain size")?;
    let domain = DomainSpec::new(d).map_err(|e| ParseError::new(ln, e.to_string()))?;

    let (ln, l) = lines.next_line("`init`")?;
    let args = keyword(ln, l, "init")?;
    if args.len() != n {
        return Err(ParseError::new(ln, format!("init has {} values, expected {n}", args.len())));
    }
    let init = args
        .iter()
        .map(|t| domain_value(ln, t, domain))
        .collect::<Result<Vec<_>, _>>()?;

    let (ln, l) = lines.next_line("`goal`")?;
    let args = keyword(ln, l, "goal")?;
    if args.len() != n {
        return Err(ParseError::new(ln, format!("goal has {} entries, expected {n}", args.len())));
    }
    let goal = args
        .iter()
        .map(|&t| if t == "_" { Ok(None) } else { domain_value(ln, t, domain).map(Some) })
        .collect::<Result<Vec<_>, _>>()?;

    let mut actions = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    while let Some((ln, l)) = lines.peek() {
        lines.next_line("")?;
        let args = keyword(ln, l, "action")?;
        let name = match args.as_slice() {
            [name] => name.to_string(),
            _ => return Err(ParseError::new(ln, "expected `action <name>`")),
        };
        if let Some(first) = names.insert(name.clone(), ln) {
            return Err(ParseError::new(
                ln,
                format!("duplicate action name `{name}` (first defined on line {first})"),
            ));
        }
        let mut pre = None;
        let mut eff = None;
        loop {
            let (ln, l) = lines.next_line("`pre`, `eff` or `end`")?;
            let mut tokens = l.split_whitespace();
            let slot = match tokens.next() {
                Some("end") if tokens.next().is_none() => break,
                Some("pre") => &mut pre,
                Some("eff") => &mut eff,
                _ => return Err(ParseError::new(ln, format!("expected `pre`, `eff` or `end`, found `{l}`"))),
            };
            if slot.is_some() {
                return Err(ParseError::new(ln, "repeated `pre`/`eff` line in one action"));
            }
            let args: Vec<&str> = tokens.collect();
            *slot = Some(assignments(ln, &args, n, domain)?);
        }
        let action = Action::new(
            name,
            pre.unwrap_or_else(|| PartialState::undefined(n)),
            eff.unwrap_or_else(|| PartialState::undefined(n)),
        )
        .map_err(|e| ParseError::new(ln, e.to_string()))?;
        actions.push(action);
    }

    SasInstance::new(domain, State::new(init), PartialState::new(goal), actions)
        .map_err(|e| ParseError::new(1, e.to_string()))
}

fn write_assignments(out: &mut String, keyword: &str, entries: &[(usize, Value)]) {
    out.push_str(keyword);
    for (var, x) in entries {
        let _ = write!(out, " {var}={x}");
    }
    out.push('\n');
}

/// Canonical `.sas` text.
pub fn serialize_sas(inst: &SasInstance) -> String {
    serialize_sas_with_comments(inst, &[])
}

/// Canonical `.sas` text preceded by one `# ` comment line per entry.
pub fn serialize_sas_with_comments(inst: &SasInstance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "sas 1");
    let _ = writeln!(out, "vars {}", inst.num_vars());
    let _ = writeln!(out, "domain {}", inst.domain().size());
    out.push_str("init");
    for x in inst.init().values() {
        let _ = write!(out, " {x}");
    }
    out.push_str("\ngoal");
    for g in inst.goal().values() {
        match g {
            Some(x) => {
                let _ = write!(out, " {x}");
            }
            None => out.push_str(" _"),
        }
    }
    out.push('\n');
    for action in inst.actions() {
        let _ = writeln!(out, "action {}", action.name());
        write_assignments(&mut out, "pre", action.preconditions());
        write_assignments(&mut out, "eff", action.effects());
        out.push_str("end\n");
    }
    out
}

pub fn parse_hitting_set(text: &str) -> Result<HittingSetInstance, ParseError> {
    let mut lines = Lines::new(text, true);
    let header = loop {
        let (ln, l) = lines.next_line("`hs` header")?;
        if !l.is_empty() {
            break (ln, l);
        }
    };
    let (ln, l) = header;
    let args = keyword(ln, l, "hs")?;
    let [s, c, k] = args.as_slice() else {
        return Err(ParseError::new(ln, "expected `hs <|S|> <|C|> <k>`"));
    };
    let set_size: usize = number(ln, s, "set size")?;
    let sets: usize = number(ln, c, "collection size")?;
    let k: usize = number(ln, k, "k")?;
    if k > sets {
        return Err(ParseError::new(ln, format!("k = {k} exceeds |C| = {sets}")));
    }

    let mut collection = Vec::new();
    for _ in 0..sets {
        let (ln, l) = lines.next_line("a set line")?;
        let mut set = BTreeSet::new();
        for token in l.split_whitespace() {
            let e: usize = number(ln, token, "element index")?;
            if e >= set_size {
                return Err(ParseError::new(ln, format!("element {e} out of range (|S| = {set_size})")));
            }
            set.insert(e);
        }
        if set.is_empty() {
            return Err(ParseError::new(ln, "empty set in the collection"));
        }
        collection.push(set);
    }
    while let Some((ln, l)) = lines.peek() {
        if !l.is_empty() {
            return Err(ParseError::new(ln, format!("expected {sets} set lines, found more")));
        }
        lines.next_line("")?;
    }
    HittingSetInstance::new(set_size, collection, k).map_err(|e| ParseError::new(ln, e.to_string()))
}

pub fn serialize_hitting_set(hs: &HittingSetInstance) -> String {
    let mut out = format!("hs {} {} {}\n", hs.set_size(), hs.collection().len(), hs.k());
    for set in hs.collection() {
        let line: Vec<String> = set.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_partitioned_graph(text: &str) -> Result<PartitionedGraph, ParseError> {
    let mut lines = Lines::new(text, false);
    let (ln, l) = lines.next_line("`pc` header")?;
    let args = keyword(ln, l, "pc")?;
    let [k, n] = args.as_slice() else {
        return Err(ParseError::new(ln, "expected `pc <k> <n>`"));
    };
    let k: usize = number(ln, k, "part count")?;
    let n: usize = number(ln, n, "part size")?;
    if k == 0 {
        return Err(ParseError::new(ln, "part count must be at least 1"));
    }

    let mut edges = Vec::new();
    while let Some((ln, l)) = lines.peek() {
        lines.next_line("")?;
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let [i, a, j, b] = tokens.as_slice() else {
            return Err(ParseError::new(ln, "expected edge line `i a j b`"));
        };
        let u = Vertex::new(number(ln, i, "part")?, number(ln, a, "vertex")?);
        let v = Vertex::new(number(ln, j, "part")?, number(ln, b, "vertex")?);
        for w in [u, v] {
            if w.part >= k || w.index >= n {
                return Err(ParseError::new(ln, format!("vertex {w} out of range")));
            }
        }
        if u.part == v.part {
            return Err(ParseError::new(ln, format!("edge {u}:{v} lies inside part {}", u.part)));
        }
        edges.push((u, v));
    }
    PartitionedGraph::new(k, n, edges).map_err(|e| ParseError::new(1, e.to_string()))
}

pub fn serialize_partitioned_graph(g: &PartitionedGraph) -> String {
    let mut out = format!("pc {} {}\n", g.k(), g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {} {} {}", u.part, u.index, v.part, v.index);
    }
    out
}

/// Resolves one action name per line against `inst`.
pub fn parse_plan(inst: &SasInstance, text: &str) -> Result<Plan, ParseError> {
    let mut lines = Lines::new(text, false);
    let mut steps = Vec::new();
    while let Some((ln, l)) = lines.peek() {
        lines.next_line("")?;
        let index = inst
            .action_index(l)
            .ok_or_else(|| ParseError::new(ln, format!("unknown action `{l}`")))?;
        steps.push(index);
    }
    Ok(Plan::new(steps))
}

/// Plan text: one action name per line.
pub struct PlanDisplay<'a> {
    pub inst: &'a SasInstance,
    pub plan: &'a Plan,
}

impl fmt::Display for PlanDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for name in self.inst.plan_names(self.plan) {
            writeln!(f, "{name}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "sas 1\nvars 1\ndomain 2\ninit 0\ngoal 1\naction a\neff 0=1\nend\n";

    #[test]
    fn minimal_instance() {
        let inst = parse_sas(MINIMAL).unwrap();
        assert_eq!(inst.num_vars(), 1);
        assert_eq!(inst.domain().size(), 2);
        assert_eq!(inst.actions().len(), 1);
        assert_eq!(inst.action(0).effects(), &[(0, 1)]);
        assert_eq!(
            serialize_sas(&inst),
            "sas 1\nvars 1\ndomain 2\ninit 0\ngoal 1\naction a\npre\neff 0=1\nend\n"
        );
    }

    #[test]
    fn goal_sentinel() {
        let inst = parse_sas("sas 1\nvars 2\ndomain 3\ninit 0 2\ngoal _ 1\n").unwrap();
        assert_eq!(inst.goal().values(), &[None, Some(1)]);
    }

    #[test]
    fn sas_errors_carry_lines() {
        let err = parse_sas("sas 1\nvars 2\ndomain 2\ninit 0 2\ngoal _ _\n").unwrap_err();
        assert_eq!(err.line, 4);
        let dup = "sas 1\nvars 1\ndomain 2\ninit 0\ngoal _\naction a\nend\n# c\naction a\nend\n";
        let err = parse_sas(dup).unwrap_err();
        assert_eq!(err.line, 9);
        assert!(err.message.contains("duplicate"));
        assert_eq!(parse_sas("sas 1\nvars 1\ndomain 2\ninit 0 0\ngoal _\n").unwrap_err().line, 4);
        assert_eq!(parse_sas("sas 2\n").unwrap_err().line, 1);
        assert_eq!(parse_sas("sas 1\nvars 1\ndomain 1\n").unwrap_err().line, 3);
        let truncated = parse_sas("sas 1\nvars 1\ndomain 2\ninit 0\ngoal _\naction a\npre 0=0\n").unwrap_err();
        assert_eq!(truncated.line, 8);
        let twice = parse_sas("sas 1\nvars 1\ndomain 2\ninit 0\ngoal _\naction a\neff 0=1 0=0\nend\n").unwrap_err();
        assert_eq!(twice.line, 7);
    }

    #[test]
    fn empty_and_degenerate() {
        let inst = parse_sas("sas 1\nvars 3\ndomain 2\ninit 0 0 0\ngoal _ _ _\n").unwrap();
        let text = serialize_sas(&inst);
        assert!(text.contains("goal _ _ _\n"));
        assert!(!text.contains("action"));
        let zero = parse_sas("sas 1\nvars 0\ndomain 2\ninit\ngoal\n").unwrap();
        assert_eq!(zero.num_vars(), 0);
        assert_eq!(parse_sas(&serialize_sas(&zero)).unwrap(), zero);
    }

    #[test]
    fn hitting_set_format() {
        let hs = parse_hitting_set("hs 3 2 1\n0 1\n1 2\n").unwrap();
        assert_eq!(hs.set_size(), 3);
        assert_eq!(hs.collection().len(), 2);
        assert_eq!(hs.k(), 1);
        assert_eq!(serialize_hitting_set(&hs), "hs 3 2 1\n0 1\n1 2\n");
        assert_eq!(parse_hitting_set("hs 3 2 1\n0 1\n\n").unwrap_err().line, 3);
        assert!(parse_hitting_set("hs 3 1 2\n0\n").unwrap_err().message.contains("exceeds"));
        assert_eq!(parse_hitting_set("hs 3 1 1\n3\n").unwrap_err().line, 2);
        assert_eq!(parse_hitting_set("hs 3 1 1\n0\n1\n").unwrap_err().line, 3);
        let empty = parse_hitting_set("hs 4 0 0\n").unwrap();
        assert!(empty.collection().is_empty());
    }

    #[test]
    fn graph_format() {
        let g = parse_partitioned_graph("pc 2 1\n0 0 1 0\n").unwrap();
        assert_eq!((g.k(), g.n(), g.edges().len()), (2, 1, 1));
        let k3 = parse_partitioned_graph("pc 3 1\n0 0 1 0\n1 0 2 0\n0 0 2 0\n").unwrap();
        assert_eq!(k3.edges().len(), 3);
        let err = parse_partitioned_graph("pc 2 1\n0 0 0 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("inside"));
        assert_eq!(parse_partitioned_graph("pc 2 1\n0 0 1 1\n").unwrap_err().line, 2);
        // Reversed endpoints normalize to the same edge.
        let rev = parse_partitioned_graph("pc 2 1\n1 0 0 0\n").unwrap();
        assert_eq!(serialize_partitioned_graph(&rev), "pc 2 1\n0 0 1 0\n");
    }

    #[test]
    fn plan_files() {
        let inst = parse_sas(MINIMAL).unwrap();
        let plan = parse_plan(&inst, "# plan\na\n\na\n").unwrap();
        assert_eq!(plan.steps(), &[0, 0]);
        assert_eq!(parse_plan(&inst, "a\nb\n").unwrap_err().line, 2);
        assert_eq!(PlanDisplay { inst: &inst, plan: &plan }.to_string(), "a\na\n");
    }
}
