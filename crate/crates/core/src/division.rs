//! Binary division schemes with declared ratio equalities (Name and Logos).
//!
//! A tree file looks like
//!
//! ```text
//! tree Angler
//! root art as a whole
//! step 1 keep A1 acquisitive
//! step 1 drop B1 productive
//! ...
//! logos B6/A6 = B9/A9
//! ```
//!
//! Each step splits the current genus into a kept species (the next genus)
//! and a dropped one. A `logos` line declares that the drop/keep ratio of one
//! step equals that of a later step. Ratios are declared, never computed: the
//! checker validates structure and consistency only.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The species that is divided further.
    Keep,
    /// The species set aside.
    Drop,
}

impl Side {
    fn keyword(self) -> &'static str {
        match self {
            Side::Keep => "keep",
            Side::Drop => "drop",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionNode {
    pub id: String,
    pub label: String,
    pub step: usize,
    pub side: Side,
}

/// `lhs.0/lhs.1 = rhs.0/rhs.1`, each pair written `drop/keep`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogosDecl {
    pub lhs: (String, String),
    pub rhs: (String, String),
}

impl fmt::Display for LogosDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} = {}/{}",
            self.lhs.0, self.lhs.1, self.rhs.0, self.rhs.1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionTree {
    name: String,
    root: String,
    nodes: Vec<DivisionNode>,
    logoi: Vec<LogosDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("expected `tree <name>` as the first line")]
    MissingHeader,
    #[error("expected `root <label>` after the tree header")]
    MissingRoot,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("malformed step line: {0}")]
    MalformedStep(String),
    #[error("malformed logos line: {0}")]
    MalformedLogos(String),
    #[error("invalid id `{0}`: ids are letters, digits and `_`")]
    InvalidId(String),
    #[error("missing label")]
    MissingLabel,
    #[error("label must not contain `#` or line breaks")]
    InvalidLabel,
    #[error("steps must be consecutive: expected step {expected}, found step {found}")]
    NonConsecutiveStep { expected: usize, found: usize },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("step {step} already has a {side} species")]
    DuplicateSide { step: usize, side: &'static str },
    #[error("step {step} is missing its {side} sibling")]
    MissingSibling { step: usize, side: &'static str },
    #[error("unknown node {0}")]
    UnknownNode(String),
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn valid_label(label: &str) -> bool {
    !label.contains(['#', '\n', '\r']) && label.trim() == label
}

impl DivisionTree {
    /// Assembles a tree from its parts, enforcing the same structural rules
    /// as the parser. Each element of `steps` is `(kept, dropped)` as
    /// `(id, label)` pairs, for steps `1..=steps.len()`.
    pub fn build(
        name: &str,
        root: &str,
        steps: Vec<((String, String), (String, String))>,
        logoi: Vec<LogosDecl>,
    ) -> Result<Self, ParseErrorKind> {
        for label in [name, root] {
            if label.is_empty() {
                return Err(ParseErrorKind::MissingLabel);
            }
            if !valid_label(label) {
                return Err(ParseErrorKind::InvalidLabel);
            }
        }
        let mut nodes = Vec::with_capacity(steps.len() * 2);
        for (i, (keep, drop)) in steps.into_iter().enumerate() {
            for ((id, label), side) in [(keep, Side::Keep), (drop, Side::Drop)] {
                if !valid_id(&id) {
                    return Err(ParseErrorKind::InvalidId(id));
                }
                if label.is_empty() {
                    return Err(ParseErrorKind::MissingLabel);
                }
                if !valid_label(&label) {
                    return Err(ParseErrorKind::InvalidLabel);
                }
                if nodes.iter().any(|n: &DivisionNode| n.id == id) {
                    return Err(ParseErrorKind::DuplicateId(id));
                }
                nodes.push(DivisionNode {
                    id,
                    label,
                    step: i + 1,
                    side,
                });
            }
        }
        let tree = Self {
            name: name.to_owned(),
            root: root.to_owned(),
            nodes,
            logoi,
        };
        for decl in &tree.logoi {
            for id in [&decl.lhs.0, &decl.lhs.1, &decl.rhs.0, &decl.rhs.1] {
                if tree.node(id).is_none() {
                    return Err(ParseErrorKind::UnknownNode(id.clone()));
                }
            }
        }
        Ok(tree)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn nodes(&self) -> &[DivisionNode] {
        &self.nodes
    }

    pub fn logoi(&self) -> &[LogosDecl] {
        &self.logoi
    }

    pub fn step_count(&self) -> usize {
        self.nodes.len() / 2
    }

    pub fn node(&self, id: &str) -> Option<&DivisionNode> {
        self.nodes.iter().find(|n| n.id == id)
    }
}

/// Splits off the first whitespace-delimited word, returning it with its
/// 0-based char offset inside `line`, and the rest.
fn next_word(line: &str, from: usize) -> Option<(&str, usize, usize)> {
    let rest = &line[from..];
    let start = from + (rest.len() - rest.trim_start().len());
    if start >= line.len() {
        return None;
    }
    let end = line[start..]
        .find(char::is_whitespace)
        .map_or(line.len(), |i| start + i);
    Some((&line[start..end], start, end))
}

struct LineParser<'a> {
    line_no: usize,
    text: &'a str,
}

impl<'a> LineParser<'a> {
    fn err(&self, byte_offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line_no,
            column: self.text[..byte_offset.min(self.text.len())].chars().count() + 1,
            kind,
        }
    }

    /// Rest of the line after `from`, trimmed, as a label.
    fn label(&self, from: usize) -> Result<&'a str, ParseError> {
        let label = self.text[from..].trim();
        if label.is_empty() {
            return Err(self.err(self.text.len(), ParseErrorKind::MissingLabel));
        }
        if let Some(at) = label.find('\r') {
            let rest = &self.text[from..];
            let offset = from + (rest.len() - rest.trim_start().len()) + at;
            return Err(self.err(offset, ParseErrorKind::InvalidLabel));
        }
        Ok(label)
    }
}

struct PendingStep {
    step: usize,
    line: usize,
    keep: Option<DivisionNode>,
    drop: Option<DivisionNode>,
}

impl PendingStep {
    fn missing(&self) -> Option<Side> {
        match (&self.keep, &self.drop) {
            (None, _) => Some(Side::Keep),
            (_, None) => Some(Side::Drop),
            _ => None,
        }
    }
}

/// Parses raw bytes; invalid UTF-8 is a parse error on line 1.
pub fn parse_tree_bytes(bytes: &[u8]) -> Result<DivisionTree, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_tree(text),
        Err(e) => {
            let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
            Err(ParseError {
                line,
                column: 1,
                kind: ParseErrorKind::InvalidUtf8,
            })
        }
    }
}

pub fn parse_tree(text: &str) -> Result<DivisionTree, ParseError> {
    let mut name: Option<String> = None;
    let mut root: Option<String> = None;
    let mut nodes: Vec<DivisionNode> = Vec::new();
    let mut ids: HashSet<String> = HashSet::new();
    let mut pending: Option<PendingStep> = None;
    let mut logoi: Vec<(LogosDecl, usize, [usize; 4])> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let content = content.strip_suffix('\r').unwrap_or(content);
        let lp = LineParser {
            line_no,
            text: content,
        };
        let Some((word, wstart, wend)) = next_word(content, 0) else {
            continue;
        };

        if name.is_none() {
            if word != "tree" {
                return Err(lp.err(wstart, ParseErrorKind::MissingHeader));
            }
            name = Some(lp.label(wend)?.to_owned());
            continue;
        }
        if root.is_none() {
            if word != "root" {
                return Err(lp.err(wstart, ParseErrorKind::MissingRoot));
            }
            root = Some(lp.label(wend)?.to_owned());
            continue;
        }

        match word {
            "step" => {
                let (node, id_at) = parse_step_line(&lp, wend)?;
                if !ids.insert(node.id.clone()) {
                    return Err(lp.err(id_at, ParseErrorKind::DuplicateId(node.id)));
                }
                let expected = pending.as_ref().map_or(1, |p| p.step + 1);
                match pending.as_mut() {
                    Some(p) if p.step == node.step => {
                        let slot = match node.side {
                            Side::Keep => &mut p.keep,
                            Side::Drop => &mut p.drop,
                        };
                        if slot.is_some() {
                            return Err(lp.err(
                                wstart,
                                ParseErrorKind::DuplicateSide {
                                    step: node.step,
                                    side: node.side.keyword(),
                                },
                            ));
                        }
                        *slot = Some(node);
                    }
                    _ if node.step == expected => {
                        if let Some(done) = pending.take() {
                            if let Some(side) = done.missing() {
                                return Err(lp.err(
                                    wstart,
                                    ParseErrorKind::MissingSibling {
                                        step: done.step,
                                        side: side.keyword(),
                                    },
                                ));
                            }
                            nodes.extend(done.keep);
                            nodes.extend(done.drop);
                        }
                        let mut fresh = PendingStep {
                            step: node.step,
                            line: line_no,
                            keep: None,
                            drop: None,
                        };
                        match node.side {
                            Side::Keep => fresh.keep = Some(node),
                            Side::Drop => fresh.drop = Some(node),
                        }
                        pending = Some(fresh);
                    }
                    _ => {
                        return Err(lp.err(
                            wstart,
                            ParseErrorKind::NonConsecutiveStep {
                                expected,
                                found: node.step,
                            },
                        ));
                    }
                }
            }
            "logos" => {
                let (decl, cols) = parse_logos_line(&lp, wend)?;
                logoi.push((decl, line_no, cols));
            }
            other => {
                return Err(lp.err(wstart, ParseErrorKind::UnknownDirective(other.to_owned())));
            }
        }
    }

    let eof = |kind| ParseError {
        line: last_line.max(1),
        column: 1,
        kind,
    };
    let name = name.ok_or_else(|| eof(ParseErrorKind::MissingHeader))?;
    let root = root.ok_or_else(|| eof(ParseErrorKind::MissingRoot))?;
    if let Some(done) = pending {
        if let Some(side) = done.missing() {
            return Err(ParseError {
                line: done.line,
                column: 1,
                kind: ParseErrorKind::MissingSibling {
                    step: done.step,
                    side: side.keyword(),
                },
            });
        }
        nodes.extend(done.keep);
        nodes.extend(done.drop);
    }

    for (decl, line, cols) in &logoi {
        let refs = [&decl.lhs.0, &decl.lhs.1, &decl.rhs.0, &decl.rhs.1];
        for (id, col) in refs.into_iter().zip(cols) {
            if !ids.contains(id.as_str()) {
                return Err(ParseError {
                    line: *line,
                    column: *col,
                    kind: ParseErrorKind::UnknownNode(id.clone()),
                });
            }
        }
    }

    Ok(DivisionTree {
        name,
        root,
        nodes,
        logoi: logoi.into_iter().map(|(d, _, _)| d).collect(),
    })
}

/// The node and the byte offset of its id.
fn parse_step_line(lp: &LineParser<'_>, from: usize) -> Result<(DivisionNode, usize), ParseError> {
    let malformed = |at, msg: &str| lp.err(at, ParseErrorKind::MalformedStep(msg.to_owned()));
    let (num, nstart, nend) =
        next_word(lp.text, from).ok_or_else(|| malformed(lp.text.len(), "missing step number"))?;
    let step: usize = num
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| malformed(nstart, "step number must be a positive integer"))?;
    let (side, sstart, send) =
        next_word(lp.text, nend).ok_or_else(|| malformed(lp.text.len(), "missing `keep` or `drop`"))?;
    let side = match side {
        "keep" => Side::Keep,
        "drop" => Side::Drop,
        _ => return Err(malformed(sstart, "expected `keep` or `drop`")),
    };
    let (id, istart, iend) =
        next_word(lp.text, send).ok_or_else(|| malformed(lp.text.len(), "missing node id"))?;
    if !valid_id(id) {
        return Err(lp.err(istart, ParseErrorKind::InvalidId(id.to_owned())));
    }
    let label = lp.label(iend)?;
    let node = DivisionNode {
        id: id.to_owned(),
        label: label.to_owned(),
        step,
        side,
    };
    Ok((node, istart))
}

/// `<Drop>/<Keep> = <Drop>/<Keep>`, whitespace allowed around `/` and `=`.
/// Returns the declaration and the columns of its four ids.
fn parse_logos_line(lp: &LineParser<'_>, from: usize) -> Result<(LogosDecl, [usize; 4]), ParseError> {
    let malformed = |at, msg: &str| lp.err(at, ParseErrorKind::MalformedLogos(msg.to_owned()));
    let body = &lp.text[from..];
    let Some(eq) = body.find('=') else {
        return Err(malformed(lp.text.len(), "expected `=`"));
    };
    if body[eq + 1..].contains('=') {
        return Err(malformed(from + eq + 1 + body[eq + 1..].find('=').unwrap_or(0), "more than one `=`"));
    }
    let mut ids = Vec::with_capacity(4);
    for (part, offset) in [(&body[..eq], from), (&body[eq + 1..], from + eq + 1)] {
        let Some(slash) = part.find('/') else {
            let at = offset + (part.len() - part.trim_start().len());
            return Err(malformed(at, "expected `<drop>/<keep>`"));
        };
        for (piece, poff) in [(&part[..slash], offset), (&part[slash + 1..], offset + slash + 1)] {
            let lead = piece.len() - piece.trim_start().len();
            let id = piece.trim();
            if id.is_empty() {
                return Err(malformed(poff + lead, "missing id"));
            }
            if !valid_id(id) {
                return Err(lp.err(poff + lead, ParseErrorKind::InvalidId(id.to_owned())));
            }
            let col = lp.text[..poff + lead].chars().count() + 1;
            ids.push((id.to_owned(), col));
        }
    }
    let cols = [ids[0].1, ids[1].1, ids[2].1, ids[3].1];
    let mut it = ids.into_iter().map(|(id, _)| id);
    let mut take = || it.next().expect("four ids");
    let decl = LogosDecl {
        lhs: (take(), take()),
        rhs: (take(), take()),
    };
    Ok((decl, cols))
}

/// Canonical text form: header, steps with the kept species first (indented
/// by depth), then the logos lines.
pub fn render_tree(t: &DivisionTree) -> String {
    let mut out = format!("tree {}\nroot {}\n", t.name, t.root);
    let mut by_step: Vec<&DivisionNode> = t.nodes.iter().collect();
    by_step.sort_by_key(|n| (n.step, n.side == Side::Drop));
    for n in by_step {
        out.push_str(&format!(
            "{}step {} {} {} {}\n",
            "  ".repeat(n.step - 1),
            n.step,
            n.side.keyword(),
            n.id,
            n.label
        ));
    }
    if !t.logoi.is_empty() {
        out.push('\n');
        for decl in &t.logoi {
            out.push_str(&format!("logos {decl}\n"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeclarationReport {
    pub logos: String,
    pub lhs_step: Option<usize>,
    pub rhs_step: Option<usize>,
    /// Both sides are genuine drop/keep siblings of one step, and the left
    /// step precedes the right.
    pub valid: bool,
    pub period: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogosReport {
    pub valid: bool,
    pub period: Option<usize>,
    pub covered_steps: Vec<usize>,
    pub declarations: Vec<DeclarationReport>,
    pub dialectic_number: usize,
    pub errors: Vec<String>,
}

impl fmt::Display for LogosReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        match self.period {
            Some(p) => writeln!(f, "period: {p}")?,
            None => writeln!(f, "period: none")?,
        }
        writeln!(f, "dialectic number: {}", self.dialectic_number)?;
        for d in &self.declarations {
            let step = |s: Option<usize>| s.map_or("?".to_owned(), |s| s.to_string());
            writeln!(
                f,
                "logos {} (steps {} and {}): {}",
                d.logos,
                step(d.lhs_step),
                step(d.rhs_step),
                if d.valid { "ok" } else { "invalid" }
            )?;
        }
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        Ok(())
    }
}

/// Step of a `drop/keep` pair when it really is one sibling pair.
fn sibling_step(t: &DivisionTree, pair: &(String, String)) -> Option<usize> {
    let drop = t.node(&pair.0)?;
    let keep = t.node(&pair.1)?;
    (drop.side == Side::Drop && keep.side == Side::Keep && drop.step == keep.step)
        .then_some(drop.step)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Validates every declaration and derives the implied period and the
/// dialectic number of the chain: steps equated by valid declarations share
/// one ratio class, every other step is its own class, and the number is
/// the class count plus one.
pub fn check_logos(t: &DivisionTree) -> LogosReport {
    let mut errors = Vec::new();
    let mut declarations = Vec::with_capacity(t.logoi.len());
    let mut periods: Vec<(usize, usize)> = Vec::new();
    let steps = t.step_count();
    let mut parent: Vec<usize> = (0..=steps).collect();

    for (i, decl) in t.logoi.iter().enumerate() {
        let lhs_step = sibling_step(t, &decl.lhs);
        let rhs_step = sibling_step(t, &decl.rhs);
        for (side, step) in [(&decl.lhs, lhs_step), (&decl.rhs, rhs_step)] {
            if step.is_none() {
                errors.push(format!(
                    "declaration {} ({decl}): {}/{} is not a drop/keep sibling pair",
                    i + 1,
                    side.0,
                    side.1
                ));
            }
        }
        let mut valid = lhs_step.is_some() && rhs_step.is_some();
        let mut period = None;
        if let (Some(l), Some(r)) = (lhs_step, rhs_step) {
            if l < r {
                period = Some(r - l);
                periods.push((i, r - l));
                let (a, b) = (find(&mut parent, l), find(&mut parent, r));
                parent[a] = b;
            } else {
                valid = false;
                errors.push(format!(
                    "declaration {} ({decl}): step {l} must precede step {r}",
                    i + 1
                ));
            }
        }
        declarations.push(DeclarationReport {
            logos: decl.to_string(),
            lhs_step,
            rhs_step,
            valid,
            period,
        });
    }

    let distinct: BTreeSet<usize> = periods.iter().map(|&(_, p)| p).collect();
    let consistent = distinct.len() <= 1;
    if !consistent {
        let listed: Vec<String> = distinct.iter().map(ToString::to_string).collect();
        errors.push(format!(
            "inconsistent periods: {}",
            listed.join(" vs ")
        ));
        let (first, p0) = periods[0];
        for &(i, p) in &periods[1..] {
            if p != p0 {
                errors.push(format!(
                    "declaration {} implies period {p}, declaration {} implies period {p0}",
                    i + 1,
                    first + 1
                ));
            }
        }
    }
    let period = if consistent {
        distinct.first().copied()
    } else {
        None
    };

    let covered_steps = declarations
        .iter()
        .filter(|d| d.valid)
        .flat_map(|d| [d.lhs_step, d.rhs_step])
        .flatten()
        .fold(None, |acc: Option<(usize, usize)>, s| {
            Some(acc.map_or((s, s), |(lo, hi)| (lo.min(s), hi.max(s))))
        })
        .map_or_else(Vec::new, |(lo, hi)| (lo..=hi).collect());

    let classes: BTreeSet<usize> = (1..=steps).map(|s| find(&mut parent, s)).collect();

    LogosReport {
        valid: errors.is_empty(),
        period,
        covered_steps,
        declarations,
        dialectic_number: classes.len() + 1,
        errors,
    }
}
