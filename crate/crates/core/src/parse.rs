//! Text syntax for segments, multisegments, parameters and operator
//! expressions.
//!
//! ```text
//! number  := ['-'|'−'|'+'] digits ['/2']       (k/2, or an integer)
//! segment := '[' number [',' number] ']' ['@' ident]
//! multi   := '{' [segment {',' segment}] '}'
//! expr    := 'St' multi | 'L' multi | 'Z' '<' segment '>' | 'Zero'
//!          | ('D_R'|'D_L'|'I_R'|'I_L') '(' (segment|multi) ',' expr ')'
//!          | 'dual' '(' expr ')' | 'shift' '(' number ',' expr ')'
//! header  := 'line' ident ['weight' n] ['dual' ident]   (one per line)
//! ```

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{derive_multi, integrate_multi, Side};
use crate::rep::RepParam;
use crate::segment::{Line, Multisegment, Segment};

/// Line declarations. Undeclared lines are self-dual of weight 1.
#[derive(Clone, Debug, Default)]
pub struct LineTable {
    lines: BTreeMap<String, Line>,
}

impl LineTable {
    pub fn new() -> Self {
        LineTable::default()
    }

    pub fn get(&self, id: &str) -> Line {
        self.lines.get(id).cloned().unwrap_or_else(|| Line::new(id))
    }

    pub fn declare(&mut self, id: &str, dual: &str, weight: u32) -> Result<()> {
        let l = Line::with_dual(id, dual, weight)?;
        for known in [id, dual] {
            if let Some(prev) = self.lines.get(known) {
                let want = if known == id { l.clone() } else { l.dual() };
                if *prev != want {
                    return Err(Error::Parse { pos: 0, msg: format!("conflicting declaration for line {known}") });
                }
            }
        }
        self.lines.insert(dual.to_string(), l.dual());
        self.lines.insert(id.to_string(), l);
        Ok(())
    }

    /// Parses header lines `line r weight 1 dual r`; blank lines and `#`
    /// comments are skipped.
    pub fn parse_header(text: &str) -> Result<Self> {
        let mut t = LineTable::new();
        let mut offset = 0;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let here = offset;
            let err = |msg: String| Error::Parse { pos: here, msg };
            offset += raw.len() + 1;
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if words[0] != "line" || words.len() < 2 {
                return Err(err(format!("expected `line <id> [weight n] [dual id]`, got {line:?}")));
            }
            let id = words[1];
            let (mut weight, mut dual) = (1u32, id);
            let mut k = 2;
            while k < words.len() {
                match (words[k], words.get(k + 1)) {
                    ("weight", Some(w)) => weight = w.parse().map_err(|_| err(format!("bad weight {w:?}")))?,
                    ("dual", Some(d)) => dual = d,
                    (w, _) => return Err(err(format!("unexpected {w:?}"))),
                }
                k += 2;
            }
            t.declare(id, dual, weight).map_err(|e| match e {
                Error::Parse { msg, .. } => err(msg),
                other => other,
            })?;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(RepParam),
    Derive { side: Side, by: Multisegment, inner: Box<Expr> },
    Integrate { side: Side, by: Multisegment, inner: Box<Expr> },
    Dual(Box<Expr>),
    Shift(i32, Box<Expr>),
}

/// Any parseable value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Segment(Segment),
    Multi(Multisegment),
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub op: String,
    pub input: RepParam,
    pub output: RepParam,
}

impl Expr {
    pub fn eval(&self) -> Result<RepParam> {
        let mut trace = Vec::new();
        self.eval_traced(&mut trace)
    }

    pub fn eval_traced(&self, trace: &mut Vec<TraceStep>) -> Result<RepParam> {
        let (op, input, output) = match self {
            Expr::Lit(p) => return Ok(p.clone()),
            Expr::Derive { side, by, inner } => {
                let x = inner.eval_traced(trace)?;
                let y = derive_multi(&x, by, *side)?;
                (format!("D^{side}_{by}"), x, y)
            }
            Expr::Integrate { side, by, inner } => {
                let x = inner.eval_traced(trace)?;
                let y = integrate_multi(&x, by, *side)?;
                (format!("I^{side}_{by}"), x, y)
            }
            Expr::Dual(inner) => {
                let x = inner.eval_traced(trace)?;
                let y = x.dual();
                ("dual".to_string(), x, y)
            }
            Expr::Shift(c, inner) => {
                let x = inner.eval_traced(trace)?;
                let y = x.shift(*c);
                (format!("shift {}", crate::segment::fmt_half(*c)), x, y)
            }
        };
        trace.push(TraceStep { op, input, output: output.clone() });
        Ok(output)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    lines: &'a LineTable,
    default_line: &'a str,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.ws();
        let r = self.rest();
        let n = r
            .char_indices()
            .find(|&(i, c)| !(c.is_alphanumeric() || c == '_' || (i > 0 && c == '\'')))
            .map_or(r.len(), |(i, _)| i);
        if n == 0 {
            return self.err("expected an identifier");
        }
        self.pos += n;
        Ok(&r[..n])
    }

    fn number(&mut self) -> Result<i32> {
        self.ws();
        let start = self.pos;
        let mut neg = false;
        if self.eat("-") || self.eat("−") {
            neg = true;
        } else {
            self.eat("+");
        }
        let r = self.rest();
        let n = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if n == 0 {
            self.pos = start;
            return self.err("expected a number");
        }
        let v: i32 = r[..n].parse().map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })?;
        self.pos += n;
        let halves = if self.rest().starts_with('/') {
            self.pos += 1;
            if !self.rest().starts_with('2') || self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
                return self.err("only halves are supported: use k/2");
            }
            self.pos += 1;
            v
        } else {
            2 * v
        };
        Ok(if neg { -halves } else { halves })
    }

    fn segment(&mut self) -> Result<Segment> {
        let start = self.pos;
        self.expect("[")?;
        let a = self.number()?;
        let b = if self.eat(",") { self.number()? } else { a };
        self.expect("]")?;
        let line = if self.eat("@") { self.lines.get(self.ident()?) } else { self.lines.get(self.default_line) };
        Segment::new(line, a, b).map_err(|e| Error::Parse { pos: start, msg: e.to_string() })
    }

    fn multi(&mut self) -> Result<Multisegment> {
        self.expect("{")?;
        let mut out = Vec::new();
        if !self.eat("}") {
            loop {
                out.push(self.segment()?);
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(Multisegment::new(out))
    }

    fn operand(&mut self) -> Result<Multisegment> {
        match self.peek() {
            Some('[') => Ok(Multisegment::singleton(self.segment()?)),
            Some('{') => self.multi(),
            _ => self.err("expected a segment or multisegment"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('{') | Some('[') => return self.err("expected a representation, e.g. St{...}, Z<...>, L{...}"),
            None => return self.err("unexpected end of input"),
            _ => {}
        }
        let at = self.pos;
        let word = self.ident()?;
        let lit = |p: Result<RepParam>| p.map(Expr::Lit);
        match word {
            "St" => {
                let m = self.multi()?;
                lit(RepParam::make_generic(m))
            }
            "L" => {
                let m = self.multi()?;
                lit(RepParam::from_langlands(m))
            }
            "Z" => {
                self.expect("<")?;
                let d = self.segment()?;
                self.expect(">")?;
                Ok(Expr::Lit(RepParam::make_zsegment(&d)))
            }
            "Zero" => Ok(Expr::Lit(RepParam::Zero)),
            "D_R" | "D_L" | "I_R" | "I_L" => {
                self.expect("(")?;
                let by = self.operand()?;
                self.expect(",")?;
                let inner = Box::new(self.expr()?);
                self.expect(")")?;
                let side = if word.ends_with('R') { Side::R } else { Side::L };
                Ok(if word.starts_with('D') {
                    Expr::Derive { side, by, inner }
                } else {
                    Expr::Integrate { side, by, inner }
                })
            }
            "dual" => {
                self.expect("(")?;
                let inner = Box::new(self.expr()?);
                self.expect(")")?;
                Ok(Expr::Dual(inner))
            }
            "shift" => {
                self.expect("(")?;
                let c = self.number()?;
                self.expect(",")?;
                let inner = Box::new(self.expr()?);
                self.expect(")")?;
                Ok(Expr::Shift(c, inner))
            }
            _ => {
                self.pos = at;
                self.err(format!("unknown form `{word}`"))
            }
        }
    }

    fn finish<T>(&mut self, v: T) -> Result<T> {
        self.ws();
        if self.pos < self.src.len() {
            return self.err("trailing input");
        }
        Ok(v)
    }
}

fn parser<'a>(src: &'a str, lines: &'a LineTable) -> Parser<'a> {
    Parser { src, pos: 0, lines, default_line: "r" }
}

pub fn parse_segment(src: &str, lines: &LineTable) -> Result<Segment> {
    let mut p = parser(src, lines);
    let v = p.segment()?;
    p.finish(v)
}

pub fn parse_multisegment(src: &str, lines: &LineTable) -> Result<Multisegment> {
    let mut p = parser(src, lines);
    let v = p.operand()?;
    p.finish(v)
}

pub fn parse_expr(src: &str, lines: &LineTable) -> Result<Expr> {
    let mut p = parser(src, lines);
    let v = p.expr()?;
    p.finish(v)
}

/// Parses and evaluates an expression.
pub fn parse_rep(src: &str, lines: &LineTable) -> Result<RepParam> {
    parse_expr(src, lines)?.eval()
}

pub fn parse_value(src: &str, lines: &LineTable) -> Result<Value> {
    let mut p = parser(src, lines);
    let v = match p.peek() {
        Some('[') => Value::Segment(p.segment()?),
        Some('{') => Value::Multi(p.multi()?),
        _ => Value::Expr(p.expr()?),
    };
    p.finish(v)
}

/// Parses a half-unit number such as `3/2`, `-1/2` or `2`.
pub fn parse_half(src: &str) -> Result<i32> {
    let t = LineTable::new();
    let mut p = parser(src, &t);
    let v = p.number()?;
    p.finish(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t() -> LineTable {
        LineTable::new()
    }

    #[test]
    fn literals() {
        let p = parse_rep("St{[0,2]@r,[1,2]@r}", &t()).unwrap();
        assert_eq!(p.to_string(), "St{[0,2]@r,[1,2]@r}");
        let z = parse_rep("Z<[−1,0]@r>", &t()).unwrap();
        assert_eq!(z.to_string(), "Z<[-1,0]@r>");
        assert!(matches!(parse_rep("St{[0,1]@r,[1,2]@r}", &t()), Err(Error::NotPairwiseUnlinked(_))));
        assert_eq!(parse_rep("L{[-1/2],[1/2],[3/2]}", &t()).unwrap().to_string(), "Z<[-1/2,3/2]@r>");
        assert_eq!(parse_rep(" Zero ", &t()).unwrap(), RepParam::Zero);
        assert_eq!(parse_half("-3/2").unwrap(), -3);
        assert_eq!(parse_half("2").unwrap(), 4);
        assert_eq!(parse_half("−1/2").unwrap(), -1);
    }

    #[test]
    fn operators() {
        let p = parse_rep("D_R([1,2]@r, St{[1,2]@r,[1,3]@r})", &t()).unwrap();
        assert_eq!(p.to_string(), "St{[1,3]@r}");
        let p = parse_rep("I_L({[0,2]}, St{})", &t()).unwrap();
        assert_eq!(p.to_string(), "St{[0,2]@r}");
        let p = parse_rep("shift(1/2, St{[-1,-1],[0,1]@r})", &t());
        assert!(p.is_err());
        let p = parse_rep("shift(1/2, L{[-1,-1],[0,1]@r})", &t()).unwrap();
        assert_eq!(p.to_string(), "L{[-1/2,-1/2]@r,[1/2,3/2]@r}");
        let p = parse_rep("dual(St{[0,1]@q})", &t()).unwrap();
        assert_eq!(p.to_string(), "St{[-1,0]@q}");
        let e = parse_expr("D_R([1], I_L([0], St{[1]}))", &t()).unwrap();
        let mut tr = Vec::new();
        e.eval_traced(&mut tr).unwrap();
        assert_eq!(tr.len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_rep("St{[0,1]@r,[1,2@r}", &t()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_rep("Foo{}", &t()), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_rep("St{} x", &t()), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_segment("[0,1/2]", &t()), Err(Error::Parse { .. })));
        assert!(matches!(parse_half("1/3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn headers() {
        let tab = LineTable::parse_header("# lines\nline r weight 2 dual s\nline q\n").unwrap();
        let r = tab.get("r");
        assert_eq!((r.weight(), r.dual_id()), (2, "s"));
        assert_eq!(tab.get("s").dual_id(), "r");
        assert_eq!(tab.get("s").weight(), 2);
        let p = parse_rep("dual(St{[0,1]@r})", &tab).unwrap();
        assert_eq!(p.to_string(), "St{[-1,0]@s}");
        assert_eq!(p.l_abs(), 4);
        assert!(LineTable::parse_header("line r weight 0").is_err());
        assert!(LineTable::parse_header("lines r").is_err());
        assert!(LineTable::parse_header("line r dual s\nline s dual q").is_err());
    }

    fn arb_rep() -> impl Strategy<Value = RepParam> {
        let seg = (-4i32..5, 0i32..3, prop_oneof![Just("r"), Just("q")])
            .prop_map(|(a, l, id)| Segment::new(Line::new(id), a, a + 2 * l).unwrap());
        prop_oneof![
            proptest::collection::vec(seg.clone(), 0..4).prop_filter_map("linked", |v| RepParam::make_generic(v.into_iter().collect()).ok()),
            (-4i32..5, 1i32..4).prop_map(|(a, l)| RepParam::make_zsegment(&Segment::new(Line::new("r"), a, a + 2 * l).unwrap())),
            proptest::collection::vec((-4i32..5, 0i32..3), 1..4)
                .prop_filter_map("ladder", |v| RepParam::from_langlands(v.into_iter().map(|(a, l)| Segment::new(Line::new("r"), 2 * a, 2 * (a + l)).unwrap()).collect()).ok()),
            Just(RepParam::Zero),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(p in arb_rep()) {
            let text = p.to_string();
            prop_assert_eq!(parse_rep(&text, &t()).unwrap(), p.clone());
            prop_assert_eq!(parse_rep(&text, &t()).unwrap().to_string(), text);
        }
    }
}
