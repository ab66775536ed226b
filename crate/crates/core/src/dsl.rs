//! Text syntax for twist words.
//!
//! ```text
//! word   := term { term }
//! term   := atom [ '^' integer ]
//! atom   := TWIST | '(' word ')' | '[' word ',' word ']' | OPAQUE | '1'
//! TWIST  := 't_' ident
//! OPAQUE := '?' [ '*' ] ident [ '(' ident '=' integer { ',' ident '=' integer } ')' ]
//! ident  := letter { letter | digit | '_' }
//! ```
//!
//! Factors are written in the displayed order and composed functionally, so
//! `t_a t_b` applies `t_b` first. `1` is the empty word. A bare `?C` is an
//! opaque commutator; `?*h` marks an opaque element of unknown kind. `#`
//! starts a comment running to the end of the line.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::word::{OpaqueBlock, OpaqueKind, TwistWord};

pub fn parse_word(src: &str) -> Result<TwistWord> {
    let mut p = Parser::new(src);
    p.skip_trivia()?;
    if p.peek().is_none() {
        return Err(p.error("expected a twist word, found end of input"));
    }
    let w = p.word()?;
    p.skip_trivia()?;
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected `{c}`")));
    }
    Ok(w)
}

/// Prints `w` so that [`parse_word`] rebuilds the same tree.
pub fn print_word(w: &TwistWord) -> String {
    let mut out = String::new();
    write_word(w, &mut out);
    out
}

fn write_word(w: &TwistWord, out: &mut String) {
    match w {
        TwistWord::Product(v) if v.is_empty() => out.push('1'),
        TwistWord::Product(v) => {
            for (i, f) in v.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                match f {
                    TwistWord::Product(inner) if !inner.is_empty() => {
                        out.push('(');
                        write_word(f, out);
                        out.push(')');
                    }
                    _ => write_word(f, out),
                }
            }
        }
        TwistWord::Twist { curve, exponent } => {
            out.push_str("t_");
            out.push_str(curve);
            if *exponent != 1 {
                out.push('^');
                out.push_str(&exponent.to_string());
            }
        }
        TwistWord::Power(base, k) => {
            match base.as_ref() {
                TwistWord::Commutator(..) | TwistWord::Opaque(_) => write_word(base, out),
                _ => {
                    out.push('(');
                    write_word(base, out);
                    out.push(')');
                }
            }
            out.push('^');
            out.push_str(&k.to_string());
        }
        TwistWord::Commutator(a, b) => {
            out.push('[');
            write_word(a, out);
            out.push_str(", ");
            write_word(b, out);
            out.push(']');
        }
        TwistWord::Opaque(block) => {
            out.push('?');
            if block.kind == OpaqueKind::UnknownElement {
                out.push('*');
            }
            out.push_str(&block.to_string());
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    /// Set when the atom just read was a parenthesized word, so that
    /// `(t_a)^2` stays a power node while `t_a^2` becomes a leaf exponent.
    last_atom_parenthesized: bool,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            last_atom_parenthesized: false,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.line, self.column, message)
    }

    fn error_at(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) -> Result<()> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c == '\\' {
                let (line, column) = (self.line, self.column);
                self.bump();
                let found = self.peek().unwrap_or(' ');
                return Err(Error::UnknownEscape {
                    line,
                    column,
                    found,
                });
            } else {
                break;
            }
        }
        Ok(())
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_trivia()?;
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn starts_term(&self) -> bool {
        match self.peek() {
            Some('t') => self.peek_at(1) == Some('_'),
            Some('(' | '[' | '?' | '1') => true,
            _ => false,
        }
    }

    fn word(&mut self) -> Result<TwistWord> {
        let mut terms = Vec::new();
        loop {
            self.skip_trivia()?;
            if !self.starts_term() {
                break;
            }
            terms.push(self.term()?);
        }
        match terms.len() {
            0 => Err(match self.peek() {
                Some(c) => self.error(format!("expected a term, found `{c}`")),
                None => self.error("expected a term, found end of input"),
            }),
            1 => Ok(terms.pop().unwrap()),
            _ => Ok(TwistWord::Product(terms)),
        }
    }

    fn term(&mut self) -> Result<TwistWord> {
        let atom = self.atom()?;
        self.skip_trivia()?;
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        let (line, column) = (self.line, self.column);
        self.bump();
        let k = self
            .integer()
            .map_err(|_| self.error_at(line, column, "expected an integer exponent after `^`"))?;
        Ok(match atom {
            TwistWord::Twist { curve, exponent: 1 } if k != 0 && !self.last_atom_parenthesized => {
                TwistWord::Twist { curve, exponent: k }
            }
            other => TwistWord::Power(Box::new(other), k),
        })
    }

    fn atom(&mut self) -> Result<TwistWord> {
        self.skip_trivia()?;
        self.last_atom_parenthesized = false;
        match self.peek() {
            Some('t') => {
                self.bump();
                self.bump();
                let curve = self.ident()?;
                Ok(TwistWord::twist(curve))
            }
            Some('1') => {
                self.bump();
                Ok(TwistWord::identity())
            }
            Some('(') => {
                self.bump();
                let inner = self.word()?;
                self.expect(')')?;
                self.last_atom_parenthesized = true;
                Ok(inner)
            }
            Some('[') => {
                self.bump();
                let a = self.word()?;
                self.expect(',')?;
                let b = self.word()?;
                self.expect(']')?;
                Ok(TwistWord::commutator(a, b))
            }
            Some('?') => {
                self.bump();
                let kind = if self.peek() == Some('*') {
                    self.bump();
                    OpaqueKind::UnknownElement
                } else {
                    OpaqueKind::Commutator
                };
                let label = self.ident()?;
                let mut block = OpaqueBlock::new(label, kind);
                if self.peek() == Some('(') {
                    self.bump();
                    block.params = self.params()?;
                }
                Ok(TwistWord::Opaque(block))
            }
            Some(c) => Err(self.error(format!("expected a term, found `{c}`"))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn params(&mut self) -> Result<BTreeMap<String, i64>> {
        let mut out = BTreeMap::new();
        loop {
            self.skip_trivia()?;
            let key = self.ident()?;
            self.expect('=')?;
            let v = self.integer()?;
            if out.insert(key.clone(), v).is_some() {
                return Err(self.error(format!("duplicate parameter `{key}`")));
            }
            self.skip_trivia()?;
            match self.bump() {
                Some(',') => continue,
                Some(')') => return Ok(out),
                Some(c) => return Err(self.error(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(self.error("unterminated parameter list")),
            }
        }
    }

    fn ident(&mut self) -> Result<String> {
        let mut s = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return Err(self.error(format!("expected an identifier, found `{c}`"))),
            None => return Err(self.error("expected an identifier, found end of input")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_trivia()?;
        let mut s = String::new();
        if let Some(c @ ('-' | '+')) = self.peek() {
            s.push(c);
            self.bump();
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s.parse::<i64>()
            .map_err(|_| self.error(format!("invalid integer `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_displayed_t() {
        let w = parse_word("t_c2 t_c1 (t_c1 t_c2 t_c3)^2 t_c1 t_c2").unwrap();
        assert_eq!(w.twist_count().positive, 10);
        let expected = TwistWord::product([
            TwistWord::twist("c2"),
            TwistWord::twist("c1"),
            TwistWord::twists(["c1", "c2", "c3"]).power(2),
            TwistWord::twist("c1"),
            TwistWord::twist("c2"),
        ]);
        assert_eq!(w, expected);
        assert_eq!(print_word(&w), "t_c2 t_c1 (t_c1 t_c2 t_c3)^2 t_c1 t_c2");
    }

    #[test]
    fn commutator_node() {
        let w = parse_word("[t_a, t_b]").unwrap();
        assert_eq!(w, TwistWord::commutator(TwistWord::twist("a"), TwistWord::twist("b")));
        assert_eq!(print_word(&w), "[t_a, t_b]");
    }

    #[test]
    fn dangling_caret() {
        match parse_word("t_c1^") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn error_positions_track_lines() {
        match parse_word("t_a\n  t_b )") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_escape() {
        assert!(matches!(
            parse_word("t_a \\q"),
            Err(Error::UnknownEscape { found: 'q', .. })
        ));
    }

    #[test]
    fn opaque_blocks() {
        let w = parse_word("?C(m=3) ?*T2(g=2)^-1").unwrap();
        let blocks = w.opaque_blocks();
        assert_eq!(blocks[0].kind, OpaqueKind::Commutator);
        assert_eq!(blocks[0].params["m"], 3);
        assert_eq!(blocks[1].kind, OpaqueKind::UnknownElement);
        assert_eq!(print_word(&w), "?C(m=3) ?*T2(g=2)^-1");
    }

    #[test]
    fn leaf_exponent_versus_power() {
        assert_eq!(parse_word("t_a^-2").unwrap(), TwistWord::twist_pow("a", -2));
        assert_eq!(
            parse_word("(t_a)^2").unwrap(),
            TwistWord::twist("a").power(2)
        );
        assert_eq!(parse_word("t_a^0").unwrap(), TwistWord::twist("a").power(0));
        let w = TwistWord::twist_pow("a", 3).power(2);
        assert_eq!(parse_word(&print_word(&w)).unwrap(), w);
    }

    #[test]
    fn identity_and_comments() {
        assert_eq!(parse_word("1").unwrap(), TwistWord::identity());
        assert_eq!(
            parse_word("# braid\nt_a t_b # tail\n").unwrap(),
            TwistWord::twists(["a", "b"])
        );
        assert!(parse_word("   ").is_err());
    }

    #[test]
    fn nested_products_keep_parentheses() {
        let w = TwistWord::product([TwistWord::twists(["a", "b"]), TwistWord::twist("c"), TwistWord::identity()]);
        let s = print_word(&w);
        assert_eq!(s, "(t_a t_b) t_c 1");
        assert_eq!(parse_word(&s).unwrap(), w);
    }
}
