//! The text format for systems.
//!
//! ```text
//! name fx1
//! finite {1,2}
//! edges {(1,2),(2,1),(2,2)}
//! expect trans0 = {1}
//! ```
//!
//! Statements end at a newline or `;`, and `#` starts a comment. Interval
//! documents start with `interval` and list `segment (x0,y0)->(x1,y1)` lines.
//! Sequence-space documents start with `seqspace` and use `point`,
//! `sequence <s> limit <p>` and `rule` statements.

use std::fmt;

use crate::error::Error;
use crate::relation::FiniteSystem;
use crate::segment::{parse_q, SegRelation, Segment, Q};
use crate::seqspace::{Rule, SeqSpace, Sequence, SqPoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Finite(FiniteSystem),
    Interval(SegRelation),
    SeqSpace(SeqSpace),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Finite(_) => "finite",
            Body::Interval(_) => "interval",
            Body::SeqSpace(_) => "seqspace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Proved,
    Refuted,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Set(Vec<String>),
    Status(Status),
    Count(usize),
    Omega,
    NotApplicable,
    /// Every point of the space.
    All,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Set(s) => write!(f, "{{{}}}", s.join(",")),
            Value::Status(s) => f.write_str(s.as_str()),
            Value::Count(n) => write!(f, "{n}"),
            Value::Omega => f.write_str("omega"),
            Value::NotApplicable => f.write_str("none"),
            Value::All => f.write_str("all"),
        }
    }
}

/// `expect <key> [at <point>] = <value>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expect {
    pub key: String,
    pub at: Option<String>,
    pub value: Value,
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expect {}", self.key)?;
        if let Some(p) = &self.at {
            write!(f, " at {p}")?;
        }
        write!(f, " = {}", self.value)
    }
}

pub const KEYS: [&str; 12] = [
    "legal", "trans0", "trans1", "trans2", "trans3", "intrans", "three_n", "omega_cover", "itrans0", "itrans1",
    "itrans2", "sv",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDoc {
    pub name: Option<String>,
    pub depth: Option<usize>,
    pub net: Option<u64>,
    pub body: Body,
    pub expects: Vec<Expect>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || "_./[]'".contains(c)
}

/// Statements as token lists, split at newlines and `;`.
fn lex(text: &str) -> Result<Vec<Vec<Token>>, Error> {
    let mut out = vec![];
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap();
        let chars: Vec<char> = line.chars().collect();
        let mut cur = vec![];
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
            } else if c == ';' {
                out.push(std::mem::take(&mut cur));
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                cur.push(Token { tok: Tok::Punct("->"), line, col });
                i += 2;
            } else if let Some(p) = ["{", "}", "(", ")", ",", "="].iter().find(|p| p.starts_with(c)) {
                cur.push(Token { tok: Tok::Punct(p), line, col });
                i += 1;
            } else if is_word(c) || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                i += 1;
                while i < chars.len() && is_word(chars[i]) {
                    i += 1;
                }
                cur.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), line, col });
            } else {
                return Err(Error::Parse { line, col, msg: format!("unexpected character `{c}`") });
            }
        }
        out.push(cur);
    }
    Ok(out.into_iter().filter(|s| !s.is_empty()).collect())
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        let last = toks.last().unwrap();
        let width = match &last.tok {
            Tok::Word(w) => w.chars().count(),
            Tok::Punct(p) => p.len(),
        };
        Cursor { toks, pos: 0, end: (last.line, last.col + width) }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col));
        Error::Parse { line, col, msg: msg.into() }
    }

    fn err_prev(&self, msg: impl Into<String>) -> Error {
        let t = &self.toks[self.pos.saturating_sub(1)];
        Error::Parse { line: t.line, col: t.col, msg: msg.into() }
    }

    fn word(&mut self) -> Result<String, Error> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Word(w), .. }) => {
                self.pos += 1;
                Ok(w.clone())
            }
            _ => Err(self.err("expected a name or number")),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), Error> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Word(w), .. }) if w == k => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{k}`"))),
        }
    }

    fn punct(&mut self, p: &str) -> Result<(), Error> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Punct(q), .. }) if *q == p => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{p}`"))),
        }
    }

    fn peek_punct(&self, p: &str) -> bool {
        matches!(self.toks.get(self.pos), Some(Token { tok: Tok::Punct(q), .. }) if *q == p)
    }

    fn done(&self) -> Result<(), Error> {
        if self.pos < self.toks.len() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    /// `{a,b,…}` or `{}`.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, Error>) -> Result<Vec<T>, Error> {
        self.punct("{")?;
        let mut out = vec![];
        if self.peek_punct("}") {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.peek_punct(",") {
                self.pos += 1;
            } else {
                self.punct("}")?;
                return Ok(out);
            }
        }
    }

    fn pair(&mut self) -> Result<(String, String), Error> {
        self.punct("(")?;
        let a = self.word()?;
        self.punct(",")?;
        let b = self.word()?;
        self.punct(")")?;
        Ok((a, b))
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T, Error> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err_prev(format!("expected an integer, found `{w}`")))
    }

    fn rational(&mut self) -> Result<Q, Error> {
        let w = self.word()?;
        parse_q(&w).ok_or_else(|| self.err_prev(format!("expected a rational, found `{w}`")))
    }

    fn coords(&mut self) -> Result<(Q, Q), Error> {
        self.punct("(")?;
        let a = self.rational()?;
        self.punct(",")?;
        let b = self.rational()?;
        self.punct(")")?;
        Ok((a, b))
    }
}

fn located(t: &Token, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse { line: t.line, col: t.col, msg: other.to_string() },
    }
}

pub fn parse_system(text: &str) -> Result<SystemDoc, Error> {
    let stmts = lex(text)?;
    let mut name = None;
    let (mut depth, mut net) = (None, None);
    let mut expects = vec![];
    let mut kind: Option<(String, usize)> = None;
    // finite
    let mut points: Vec<String> = vec![];
    let mut edges: Vec<(String, String, Token)> = vec![];
    // interval
    let mut segments = vec![];
    // seqspace
    let mut seqs: Vec<(String, String, Token)> = vec![];
    let mut rules: Vec<(Vec<Token>, Token)> = vec![];

    for st in &stmts {
        let mut c = Cursor::new(st);
        let head = c.word()?;
        let set_kind = |kind: &mut Option<(String, usize)>, k: &str| -> Result<(), Error> {
            match kind {
                Some(_) => Err(Error::Parse { line: st[0].line, col: st[0].col, msg: "engine declared twice".into() }),
                None => {
                    *kind = Some((k.to_string(), st[0].line));
                    Ok(())
                }
            }
        };
        let need = |kind: &Option<(String, usize)>, k: &str| -> Result<(), Error> {
            match kind {
                Some((have, _)) if have == k => Ok(()),
                _ => Err(Error::Parse { line: st[0].line, col: st[0].col, msg: format!("`{head}` needs a `{k}` header") }),
            }
        };
        match head.as_str() {
            "name" => name = Some(c.word()?),
            "depth" => depth = Some(c.number()?),
            "net" => net = Some(c.number()?),
            "finite" => {
                set_kind(&mut kind, "finite")?;
                points = c.list(|c| c.word())?;
            }
            "edges" => {
                need(&kind, "finite")?;
                let ps = c.list(|c| {
                    let t = c.toks.get(c.pos).cloned();
                    c.pair().map(|(a, b)| (a, b, t.unwrap()))
                })?;
                edges.extend(ps);
            }
            "interval" => set_kind(&mut kind, "interval")?,
            "segment" => {
                need(&kind, "interval")?;
                let a = c.coords()?;
                c.punct("->")?;
                let b = c.coords()?;
                segments.push(Segment::new(a, b).map_err(|e| located(&st[0], e))?);
            }
            "seqspace" => set_kind(&mut kind, "seqspace")?,
            "point" => {
                need(&kind, "seqspace")?;
                points.push(c.word()?);
            }
            "sequence" => {
                need(&kind, "seqspace")?;
                let s = c.word()?;
                c.keyword("limit")?;
                let t = c.toks[c.pos.min(st.len() - 1)].clone();
                let l = c.word()?;
                seqs.push((s, l, t));
            }
            "rule" => {
                need(&kind, "seqspace")?;
                rules.push((st[1..].to_vec(), st[0].clone()));
                c.pos = st.len();
            }
            "expect" => {
                let key = c.word()?;
                if !KEYS.contains(&key.as_str()) {
                    return Err(c.err_prev(format!("unknown expectation `{key}`")));
                }
                let at = if matches!(c.toks.get(c.pos), Some(Token { tok: Tok::Word(w), .. }) if w == "at") {
                    c.pos += 1;
                    Some(c.word()?)
                } else {
                    None
                };
                c.punct("=")?;
                let value = if c.peek_punct("{") {
                    Value::Set(c.list(|c| c.word())?)
                } else {
                    match c.word()?.as_str() {
                        "proved" | "true" => Value::Status(Status::Proved),
                        "refuted" | "false" => Value::Status(Status::Refuted),
                        "unknown" => Value::Status(Status::Unknown),
                        "omega" => Value::Omega,
                        "none" => Value::NotApplicable,
                        "all" => Value::All,
                        w => Value::Count(w.parse().map_err(|_| c.err_prev(format!("bad expected value `{w}`")))?),
                    }
                };
                expects.push(Expect { key, at, value });
            }
            other => return Err(Error::Parse { line: st[0].line, col: st[0].col, msg: format!("unknown statement `{other}`") }),
        }
        c.done()?;
    }

    let body = match kind.as_ref().map(|(k, _)| k.as_str()) {
        None => return Err(Error::Parse { line: 1, col: 1, msg: "missing engine header".into() }),
        Some("finite") => {
            for (a, b, t) in &edges {
                for p in [a, b] {
                    if !points.contains(p) {
                        return Err(Error::Parse { line: t.line, col: t.col, msg: format!("unknown point `{p}`") });
                    }
                }
            }
            let pairs: Vec<(&str, &str)> = edges.iter().map(|(a, b, _)| (a.as_str(), b.as_str())).collect();
            let pts: Vec<&str> = points.iter().map(String::as_str).collect();
            Body::Finite(FiniteSystem::new(&pts, &pairs).map_err(|e| located(&stmts[0][0], e))?)
        }
        Some("interval") => Body::Interval(SegRelation::new(segments).map_err(|e| located(&stmts[0][0], e))?),
        Some(_) => {
            let mut sequences = vec![];
            for (s, l, t) in &seqs {
                let limit = points
                    .iter()
                    .position(|p| p == l)
                    .ok_or_else(|| Error::Parse { line: t.line, col: t.col, msg: format!("unknown point `{l}`") })?;
                sequences.push(Sequence { name: s.clone(), limit });
            }
            let lookup = SeqLookup { points: &points, seqs: &sequences };
            let mut parsed = vec![];
            for (toks, head) in &rules {
                parsed.push(parse_rule(toks, head, &lookup)?);
            }
            let at = rules.first().map_or(&stmts[0][0], |r| &r.1);
            Body::SeqSpace(SeqSpace::new(points, sequences, parsed).map_err(|e| located(at, e))?)
        }
    };
    Ok(SystemDoc { name, depth, net, body, expects })
}

struct SeqLookup<'a> {
    points: &'a [String],
    seqs: &'a [Sequence],
}

impl SeqLookup<'_> {
    fn seq(&self, s: &str) -> Option<usize> {
        self.seqs.iter().position(|q| q.name == s)
    }

    fn point(&self, s: &str) -> Option<SqPoint> {
        if let Some(i) = self.points.iter().position(|p| p == s) {
            return Some(SqPoint::Finite(i));
        }
        let (name, rest) = s.split_once('[')?;
        let k = rest.strip_suffix(']')?.parse().ok()?;
        Some(SqPoint::Term(self.seq(name)?, k))
    }
}

fn parse_rule(toks: &[Token], head: &Token, l: &SeqLookup) -> Result<Rule, Error> {
    if toks.is_empty() {
        return Err(Error::Parse { line: head.line, col: head.col, msg: "empty rule".into() });
    }
    let mut c = Cursor::new(toks);
    let point = |c: &mut Cursor| -> Result<SqPoint, Error> {
        let w = c.word()?;
        l.point(&w).ok_or_else(|| c.err_prev(format!("unknown point `{w}`")))
    };
    let seq = |c: &mut Cursor| -> Result<usize, Error> {
        let w = c.word()?;
        l.seq(&w).ok_or_else(|| c.err_prev(format!("unknown sequence `{w}`")))
    };
    let rule = match c.word()?.as_str() {
        "pair" => {
            c.punct("(")?;
            let u = point(&mut c)?;
            c.punct(",")?;
            let v = point(&mut c)?;
            c.punct(")")?;
            Rule::Pair(u, v)
        }
        "tail" => {
            let a = seq(&mut c)?;
            c.punct("->")?;
            if matches!(c.toks.get(c.pos), Some(Token { tok: Tok::Word(w), .. }) if w == "point") {
                c.pos += 1;
                let p = point(&mut c)?;
                c.keyword("from")?;
                Rule::TailToPoint { a, p, from: c.number()? }
            } else {
                let b = seq(&mut c)?;
                c.keyword("shift")?;
                let shift = c.number()?;
                c.keyword("from")?;
                Rule::TailToTail { a, b, shift, from: c.number()? }
            }
        }
        "point" => {
            let p = point(&mut c)?;
            c.punct("->")?;
            c.keyword("tail")?;
            let a = seq(&mut c)?;
            c.keyword("from")?;
            Rule::PointToTail { p, a, from: c.number()? }
        }
        w => return Err(c.err_prev(format!("unknown rule kind `{w}`"))),
    };
    c.done()?;
    Ok(rule)
}

/// Canonical text: one statement per line.
pub fn print_system(doc: &SystemDoc) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    if let Some(n) = &doc.name {
        line(format!("name {n}"));
    }
    if let Some(d) = doc.depth {
        line(format!("depth {d}"));
    }
    if let Some(n) = doc.net {
        line(format!("net {n}"));
    }
    match &doc.body {
        Body::Finite(s) => {
            line(format!("finite {{{}}}", s.names().join(",")));
            let e: Vec<String> = s.edges().iter().map(|&(a, b)| format!("({},{})", s.name(a), s.name(b))).collect();
            line(format!("edges {{{}}}", e.join(",")));
        }
        Body::Interval(r) => {
            line("interval".into());
            for s in r.segments() {
                line(s.to_string());
            }
        }
        Body::SeqSpace(s) => {
            line("seqspace".into());
            for p in s.points() {
                line(format!("point {p}"));
            }
            for q in s.seqs() {
                line(format!("sequence {} limit {}", q.name, s.points()[q.limit]));
            }
            for r in s.rules() {
                line(s.rule_text(r));
            }
        }
    }
    for e in &doc.expects {
        line(e.to_string());
    }
    out
}

impl SystemDoc {
    /// Resolve an interval point written as a rational.
    pub fn rational(&self, s: &str) -> Result<Q, Error> {
        parse_q(s).ok_or_else(|| Error::UnknownPoint(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_finite_document() {
        let d = parse_system("finite {1,2}; edges {(1,2),(2,1),(2,2)}").unwrap();
        let Body::Finite(s) = &d.body else { panic!() };
        assert_eq!(s.edges(), [(0, 1), (1, 0), (1, 1)]);
        assert_eq!(print_system(&d), "finite {1,2}\nedges {(1,2),(2,1),(2,2)}\n");
    }

    #[test]
    fn tent_document() {
        let d = parse_system("interval; segment (0,0)->(1/2,1); segment (1/2,1)->(1,0)").unwrap();
        let Body::Interval(r) = &d.body else { panic!() };
        assert_eq!(r.segments().len(), 2);
        assert_eq!(parse_system(&print_system(&d)).unwrap(), d);
    }

    #[test]
    fn unknown_point_is_located() {
        let e = parse_system("finite {1,2}\nedges {(1,3)}").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 8, msg: "unknown point `3`".into() });
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_system("finite {1,2\nedges {(1,2)}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = parse_system("interval\nsegment (0,0)->(1/0,1)").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 17, .. }), "{e:?}");
        assert!(matches!(parse_system("finite {a}; edges {}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn seqspace_document_roundtrips() {
        let text = "name branching\nseqspace\npoint 0\npoint 1\nsequence x limit 0\nrule pair (0,0)\n\
                    rule pair (1,x[0])\nrule pair (1,x[1])\nrule pair (x[0],x[0])\nrule tail x -> x shift 1 from 1\n\
                    expect omega_cover at 1 = 2\n";
        let d = parse_system(text).unwrap();
        assert_eq!(print_system(&d), text);
    }

    #[test]
    fn open_rule_set_is_rejected() {
        let e = parse_system("seqspace; point 0; point 1; sequence x limit 0; rule tail x -> point 1 from 0").unwrap_err();
        assert!(matches!(&e, Error::Parse { msg, .. } if msg.contains("not closed")), "{e:?}");
    }
}
