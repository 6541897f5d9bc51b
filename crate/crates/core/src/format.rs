//! Text formats for relations, monoids and superposition expressions.
//!
//! Relation files:
//!
//! ```text
//! relation arity=2 order=3
//! - - -
//! - 1 1*2
//! - 1*2 0*1*2
//! ```
//!
//! There are `order^(arity-1)` rows in lexicographic order of the leading
//! coordinates, each with `order` cells indexed by the last coordinate. A
//! cell is `-` (undefined) or ascending values joined by `*`. On input,
//! `phi`, `N`, `φ` and `∅` are accepted for `-`, and blank lines and `#`
//! comments are ignored.
//!
//! Monoid files are `monoid order=N` followed by `N` rows of `N` element
//! indices. Expressions use
//!
//! ```text
//! expr     := "(var" INDEX ")" | "(sum" expr+ ")" | "(apply" reltoken expr ")"
//! reltoken := "[" cell ("," cell)* "]"
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::expr::SuperpositionExpr;
use crate::monoid::Monoid;
use crate::relation::{cell_count, Relation};
use crate::valueset::{ValueSet, MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("value out of range at line {line}, column {column}: {cell:?} (order {order})")]
    Range { line: usize, column: usize, cell: String, order: usize },
    #[error("shape error: {0}")]
    Shape(String),
}

type PResult<T> = std::result::Result<T, ParseError>;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

/// Significant lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end();
        let t = l.trim_start();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, l))
    })
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (ci, (bi, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((sb, sc)) = start.take() {
                out.push((sc + 1, &line[sb..bi]));
            }
        } else if start.is_none() {
            start = Some((bi, ci));
        }
    }
    if let Some((sb, sc)) = start {
        out.push((sc + 1, &line[sb..]));
    }
    out.into_iter()
}

/// Parses one cell (`-`, `0`, `0*2`, ..) for a carrier of the given order.
pub fn parse_cell(cell: &str, order: usize, line: usize, column: usize) -> PResult<ValueSet> {
    if matches!(cell, "-" | "phi" | "N" | "φ" | "∅") {
        return Ok(ValueSet::EMPTY);
    }
    let mut set = ValueSet::EMPTY;
    for part in cell.split('*') {
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(line, column, format!("invalid cell {cell:?}")));
        }
        let v: usize = part
            .parse()
            .map_err(|_| syntax(line, column, format!("invalid number in {cell:?}")))?;
        if v >= order {
            return Err(ParseError::Range { line, column, cell: cell.to_string(), order });
        }
        set.insert(v);
    }
    Ok(set)
}

fn header_field(
    tok: Option<(usize, &str)>,
    name: &str,
    line: usize,
) -> PResult<usize> {
    let (col, t) = tok.ok_or_else(|| syntax(line, 1, format!("missing {name}=")))?;
    let value = t
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| syntax(line, col, format!("expected {name}=<n>, found {t:?}")))?;
    value
        .parse()
        .map_err(|_| syntax(line, col + name.len() + 1, format!("invalid {name} {value:?}")))
}

pub fn parse_relation(text: &str) -> PResult<Relation> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::Shape("empty input".into()))?;
    let mut toks = tokens(header);
    match toks.next() {
        Some((_, "relation")) => {}
        Some((c, t)) => return Err(syntax(hl, c, format!("expected \"relation\", found {t:?}"))),
        None => return Err(syntax(hl, 1, "expected \"relation\"")),
    }
    let arity = header_field(toks.next(), "arity", hl)?;
    let order = header_field(toks.next(), "order", hl)?;
    if let Some((c, t)) = toks.next() {
        return Err(syntax(hl, c, format!("unexpected {t:?} after header")));
    }
    if arity == 0 {
        return Err(ParseError::Shape("arity must be at least 1".into()));
    }
    if order == 0 || order > MAX_ORDER {
        return Err(ParseError::Shape(format!("order must be within 1..={MAX_ORDER}")));
    }
    let n = cell_count(arity, order).map_err(|e| ParseError::Shape(e.to_string()))?;
    let rows = n / order;
    let mut cells = Vec::with_capacity(n);
    let mut seen_rows = 0;
    for (ln, line) in lines {
        seen_rows += 1;
        if seen_rows > rows {
            return Err(ParseError::Shape(format!("more than {rows} rows (line {ln})")));
        }
        let before = cells.len();
        for (col, tok) in tokens(line) {
            cells.push(parse_cell(tok, order, ln, col)?);
        }
        if cells.len() - before != order {
            return Err(ParseError::Shape(format!(
                "line {ln} has {} cells, expected {order}",
                cells.len() - before
            )));
        }
    }
    if seen_rows != rows {
        return Err(ParseError::Shape(format!("expected {rows} rows, found {seen_rows}")));
    }
    Relation::from_cells(arity, order, cells).map_err(|e| ParseError::Shape(e.to_string()))
}

/// Canonical text of a relation; `parse_relation` inverts it exactly.
pub fn print_relation(r: &Relation) -> String {
    let mut out = format!("relation arity={} order={}\n", r.arity(), r.order());
    for row in r.cells().chunks(r.order()) {
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
    out
}

/// Parses a monoid file; the axioms are verified as in [`Monoid::from_table`].
pub fn parse_monoid(text: &str) -> PResult<Monoid> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::Shape("empty input".into()))?;
    let mut toks = tokens(header);
    match toks.next() {
        Some((_, "monoid")) => {}
        Some((c, t)) => return Err(syntax(hl, c, format!("expected \"monoid\", found {t:?}"))),
        None => return Err(syntax(hl, 1, "expected \"monoid\"")),
    }
    let order = header_field(toks.next(), "order", hl)?;
    if let Some((c, t)) = toks.next() {
        return Err(syntax(hl, c, format!("unexpected {t:?} after header")));
    }
    let mut rows = Vec::with_capacity(order);
    for (ln, line) in lines {
        let mut row = Vec::with_capacity(order);
        for (col, tok) in tokens(line) {
            let v: usize = tok
                .parse()
                .map_err(|_| syntax(ln, col, format!("invalid element {tok:?}")))?;
            if v >= order {
                return Err(ParseError::Range { line: ln, column: col, cell: tok.to_string(), order });
            }
            row.push(v);
        }
        if row.len() != order {
            return Err(ParseError::Shape(format!("line {ln} has {} entries, expected {order}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != order {
        return Err(ParseError::Shape(format!("expected {order} rows, found {}", rows.len())));
    }
    Monoid::from_table(&rows).map_err(|e| ParseError::Shape(e.to_string()))
}

pub fn print_monoid(m: &Monoid) -> String {
    let mut out = format!("monoid order={}\n", m.order());
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn print_expr(e: &SuperpositionExpr) -> String {
    e.to_string()
}

struct ExprParser<'a> {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str) -> Self {
        let mut chars = Vec::new();
        let mut line = 1;
        let mut col = 1;
        let mut in_comment = false;
        for ch in src.chars() {
            if ch == '\n' {
                line += 1;
                col = 1;
                in_comment = false;
                continue;
            }
            if col == 1 && ch == '#' {
                in_comment = true;
            }
            if !in_comment {
                chars.push((line, col, ch));
            }
            col += 1;
        }
        ExprParser { chars, pos: 0, src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].2.is_whitespace() {
            self.pos += 1;
        }
    }

    fn here(&self) -> (usize, usize) {
        self.chars
            .get(self.pos)
            .map(|&(l, c, _)| (l, c))
            .unwrap_or_else(|| {
                let lines = self.src.lines().count().max(1);
                (lines, self.src.lines().last().map_or(1, |l| l.chars().count() + 1))
            })
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, _, c)| c)
    }

    fn expect(&mut self, ch: char) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {ch:?}")))
        }
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ',') {
                break;
            }
            w.push(c);
            self.pos += 1;
        }
        w
    }

    fn expr(&mut self) -> PResult<SuperpositionExpr> {
        self.expect('(')?;
        self.skip_ws();
        let (l, c) = self.here();
        let head = self.word();
        let e = match head.as_str() {
            "var" => {
                self.skip_ws();
                let (l, c) = self.here();
                let idx = self.word();
                let j: usize = idx
                    .parse()
                    .ok()
                    .filter(|&j| j >= 1)
                    .ok_or_else(|| syntax(l, c, format!("invalid variable index {idx:?}")))?;
                SuperpositionExpr::Var(j)
            }
            "sum" => {
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some('(') => children.push(self.expr()?),
                        _ => break,
                    }
                }
                if children.is_empty() {
                    return Err(syntax(l, c, "sum needs at least one term"));
                }
                SuperpositionExpr::Sum(children)
            }
            "apply" => {
                let f = self.reltoken()?;
                let child = self.expr()?;
                SuperpositionExpr::Apply(f, Box::new(child))
            }
            other => return Err(syntax(l, c, format!("unknown form {other:?}"))),
        };
        self.expect(')')?;
        Ok(e)
    }

    fn reltoken(&mut self) -> PResult<Relation> {
        self.expect('[')?;
        let mut raw = Vec::new();
        loop {
            self.skip_ws();
            let (l, c) = self.here();
            let w = self.word();
            if w.is_empty() {
                return Err(syntax(l, c, "expected a cell"));
            }
            raw.push((l, c, w));
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
        let order = raw.len();
        if order > MAX_ORDER {
            return Err(ParseError::Shape(format!("relation with {order} cells exceeds {MAX_ORDER}")));
        }
        let cells = raw
            .iter()
            .map(|(l, c, w)| parse_cell(w, order, *l, *c))
            .collect::<PResult<Vec<_>>>()?;
        Relation::unary(cells).map_err(|e| ParseError::Shape(e.to_string()))
    }
}

pub fn parse_expr(text: &str) -> PResult<SuperpositionExpr> {
    let mut p = ExprParser::new(text);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_one_variable_relation() {
        let r = parse_relation("relation arity=1 order=2\n0*1 -\n").unwrap();
        let expected = Relation::from_tuples(1, 2, [&[0, 0][..], &[0, 1]]).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn undefined_aliases() {
        for alias in ["-", "phi", "N", "φ", "∅"] {
            let r = parse_relation(&format!("relation arity=1 order=2\n{alias} 1\n")).unwrap();
            assert_eq!(r.at(0), ValueSet::EMPTY);
        }
    }

    #[test]
    fn canonicalizes_on_print() {
        let r = parse_relation("# comment\nrelation  arity=2 order=3\n\nphi 2*0 1*1\n0 1 2\nN 0*1*2 2\n").unwrap();
        assert_eq!(
            print_relation(&r),
            "relation arity=2 order=3\n- 0*2 1\n0 1 2\n- 0*1*2 2\n"
        );
    }

    #[test]
    fn worked_sum_prints_as_table() {
        let m = Monoid::modular(3);
        let a = parse_relation("relation arity=2 order=3\n- - -\n0 1 2\n0*1 1*2 0*1*2\n").unwrap();
        let b = parse_relation("relation arity=2 order=3\n- 1 0*1*2\n- 0 0*2\n- 0 1*2\n").unwrap();
        let s = crate::ops::add(&a, &b, &m).unwrap();
        assert_eq!(print_relation(&s), "relation arity=2 order=3\n- - -\n- 1 1*2\n- 1*2 0*1*2\n");
    }

    #[test]
    fn empty_relation_prints_dashes() {
        let r = Relation::empty(2, 2).unwrap();
        assert_eq!(print_relation(&r), "relation arity=2 order=2\n- -\n- -\n");
    }

    #[test]
    fn relation_errors() {
        assert!(matches!(
            parse_relation("relation arity=1 order=2\n0*x -\n"),
            Err(ParseError::Syntax { line: 2, column: 1, .. })
        ));
        assert!(matches!(
            parse_relation("relation arity=1 order=2\n0 5\n"),
            Err(ParseError::Range { line: 2, column: 3, .. })
        ));
        assert!(matches!(parse_relation("relation arity=1 order=2\n0 1 1\n"), Err(ParseError::Shape(_))));
        assert!(matches!(parse_relation("relation arity=2 order=2\n0 1\n"), Err(ParseError::Shape(_))));
        assert!(matches!(
            parse_relation("relation arity=2 order=2\n0 1\n0 1\n0 1\n"),
            Err(ParseError::Shape(_))
        ));
        assert!(matches!(
            parse_relation("relations arity=1 order=2\n0 1\n"),
            Err(ParseError::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_relation("relation arity=1 ord=2\n0 1\n"),
            Err(ParseError::Syntax { line: 1, column: 18, .. })
        ));
        assert!(matches!(parse_relation(""), Err(ParseError::Shape(_))));
        assert!(matches!(parse_relation("relation arity=1 order=2\n1** -\n"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn monoid_round_trip() {
        let m = Monoid::saturating(3);
        let text = print_monoid(&m);
        assert_eq!(text, "monoid order=4\n0 1 2 3\n1 2 3 3\n2 3 3 3\n3 3 3 3\n");
        assert_eq!(parse_monoid(&text).unwrap(), m);
    }

    #[test]
    fn monoid_errors() {
        assert!(matches!(parse_monoid("monoid order=2\n0 1\n1\n"), Err(ParseError::Shape(_))));
        assert!(matches!(parse_monoid("monoid order=2\n0 1\n1 2\n"), Err(ParseError::Range { .. })));
        // Valid shape, but identity is element 1.
        assert!(matches!(parse_monoid("monoid order=2\n1 0\n0 1\n"), Err(ParseError::Shape(_))));
    }

    #[test]
    fn expression_round_trip() {
        let text = "(sum (apply [0,0,1*2] (sum (apply [1,0,0] (var 1)) (apply [-,0,0] (var 2)))) (var 2))";
        let e = parse_expr(text).unwrap();
        assert_eq!(print_expr(&e), text);
        let spaced = "(sum\n  (apply [ 0 , 0 , 1*2 ] (sum (apply [1,0,0] (var 1)) (apply [phi,0,0] (var 2))))\n  (var 2) )";
        assert_eq!(parse_expr(spaced).unwrap(), e);
    }

    #[test]
    fn expression_errors() {
        assert!(matches!(parse_expr("(sum)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("(var 0)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("(mul (var 1))"), Err(ParseError::Syntax { line: 1, column: 2, .. })));
        assert!(matches!(parse_expr("(apply [0,3,1] (var 1))"), Err(ParseError::Range { .. })));
        assert!(matches!(parse_expr("(var 1) extra"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("(apply [0,1 (var 1))"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn random_relations_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for arity in 1..=3 {
            for order in [1, 2, 3, 5, 11] {
                let r = Relation::random(&mut rng, arity, order, 0.3).unwrap();
                assert_eq!(parse_relation(&print_relation(&r)).unwrap(), r);
            }
        }
    }
}
