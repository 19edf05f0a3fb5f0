//! Recursive-descent parser for the presentation language.
//!
//! ```text
//! presentation := "<" genlist "|" rellist ">"
//! genlist      := [ ident ("," ident)* ]
//! rellist      := [ relation ("," relation)* ]
//! relation     := word ("=" word)*
//! word         := term+
//! term         := atom [ "^" signed-int ]
//! atom         := ident | "1" | "[" word "," word "]" | "(" word ")"
//! ```
//!
//! `#` starts a line comment and an optional first line `name: <text>` names
//! the presentation. A chain `u = v = w` yields the relators `u v^-1` and
//! `v w^-1`. An identifier that is not itself a generator is split into
//! generator names, so `xqx` reads as `x q x` when `x` and `q` are
//! generators; the split must be unique.

use crate::error::{ParseError, ParseErrorKind};
use crate::word::{is_valid_name, CommutatorConvention, Generator, Letter, Word};

use super::Presentation;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("number `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, column: tc });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Int(s), line: tl, column: tc });
        } else if "<>|,=^[]()-+".contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(c), line: tl, column: tc });
        } else {
            return Err(ParseError {
                line: tl,
                column: tc,
                kind: ParseErrorKind::Unexpected { found: format!("character `{c}`"), expected: "a token".into() },
            });
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    gens: &'a [Generator],
    convention: CommutatorConvention,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError { line: t.line, column: t.column, kind }
    }

    fn unexpected(&self, t: &Token, expected: &str) -> ParseError {
        self.error_at(t, ParseErrorKind::Unexpected { found: t.tok.describe(), expected: expected.to_string() })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.bump();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&t, &format!("`{c}`")))
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn starts_term(&self) -> bool {
        match &self.peek().tok {
            Tok::Ident(_) => true,
            Tok::Int(s) => s == "1",
            Tok::Sym(c) => *c == '[' || *c == '(',
            Tok::Eof => false,
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        if !self.starts_term() {
            let t = self.peek().clone();
            return Err(self.unexpected(&t, "a word"));
        }
        let mut acc = Word::identity();
        while self.starts_term() {
            let term = self.term()?;
            acc = &acc * &term;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        // an exponent after a split identifier binds to its last generator only
        let (head, atom) = self.atom()?;
        if self.at_sym('^') {
            self.bump();
            let mut negative = false;
            if self.at_sym('-') {
                self.bump();
                negative = true;
            } else if self.at_sym('+') {
                self.bump();
            }
            let t = self.bump();
            let Tok::Int(digits) = &t.tok else {
                return Err(self.unexpected(&t, "an integer exponent"));
            };
            let n: i64 = digits
                .parse()
                .ok()
                .filter(|n: &i64| *n <= 1_000_000)
                .ok_or_else(|| self.error_at(&t, ParseErrorKind::BadExponent(digits.clone())))?;
            return Ok(&head * &atom.pow(if negative { -n } else { n }));
        }
        Ok(&head * &atom)
    }

    fn atom(&mut self) -> Result<(Word, Word), ParseError> {
        let t = self.bump();
        let whole = match &t.tok {
            Tok::Ident(name) => return self.resolve(name, &t),
            Tok::Int(s) if s == "1" => Ok(Word::identity()),
            Tok::Sym('[') => {
                let u = self.word()?;
                self.expect_sym(',')?;
                let v = self.word()?;
                self.expect_sym(']')?;
                Ok(Word::commutator(&u, &v, self.convention))
            }
            Tok::Sym('(') => {
                let w = self.word()?;
                self.expect_sym(')')?;
                Ok(w)
            }
            _ => Err(self.unexpected(&t, "a generator, `1`, `[` or `(`")),
        };
        whole.map(|w| (Word::identity(), w))
    }

    /// Resolves an identifier to a generator, or to a unique split of it
    /// into generator names, as `(all but the last, last)`.
    fn resolve(&self, name: &str, t: &Token) -> Result<(Word, Word), ParseError> {
        if let Some(g) = self.gens.iter().find(|g| g.name() == name) {
            return Ok((Word::identity(), Word::generator(g)));
        }
        // ways[i] = number of splits of name[i..], capped at 2
        let n = name.len();
        let mut ways = vec![0u8; n + 1];
        let mut choice: Vec<Option<usize>> = vec![None; n + 1];
        ways[n] = 1;
        for i in (0..n).rev() {
            for (gi, g) in self.gens.iter().enumerate() {
                let gn = g.name();
                if name[i..].starts_with(gn) && ways[i + gn.len()] > 0 {
                    ways[i] = (ways[i] + ways[i + gn.len()]).min(2);
                    if choice[i].is_none() {
                        choice[i] = Some(gi);
                    }
                }
            }
        }
        match ways[0] {
            0 => Err(self.error_at(t, ParseErrorKind::UnknownGenerator(name.to_string()))),
            1 => {
                let mut letters = Vec::new();
                let mut i = 0;
                while i < n {
                    let g = &self.gens[choice[i].expect("split exists")];
                    letters.push(Letter::pos(g.clone()));
                    i += g.name().len();
                }
                let last = letters.pop().expect("nonempty split");
                Ok((Word::free_reduce(letters), Word::free_reduce([last])))
            }
            _ => Err(self.error_at(t, ParseErrorKind::AmbiguousWord(name.to_string()))),
        }
    }

    fn relation(&mut self, out: &mut Vec<Word>) -> Result<(), ParseError> {
        let mut prev = self.word()?;
        if !self.at_sym('=') {
            out.push(prev);
            return Ok(());
        }
        while self.at_sym('=') {
            self.bump();
            let next = self.word()?;
            out.push(&prev * &next.inverse());
            prev = next;
        }
        Ok(())
    }
}

/// Splits off an optional `name:` header line, keeping line numbers intact.
fn split_header(text: &str) -> (String, String) {
    let mut name = String::new();
    let mut body = String::with_capacity(text.len());
    let mut seen_content = false;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if !seen_content && !content.is_empty() {
            seen_content = true;
            if let Some(rest) = content.strip_prefix("name:") {
                name = rest.trim().to_string();
                body.push_str(if line.ends_with('\n') { "\n" } else { "" });
                continue;
            }
        }
        body.push_str(line);
    }
    (name, body)
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    parse_presentation_with(text, CommutatorConvention::Default)
}

pub fn parse_presentation_with(text: &str, convention: CommutatorConvention) -> Result<Presentation, ParseError> {
    let (name, body) = split_header(text);
    let toks = lex(&body)?;
    let mut gens: Vec<Generator> = Vec::new();
    let mut p = Parser { toks, pos: 0, gens: &[], convention };
    p.expect_sym('<')?;
    if !p.at_sym('|') {
        loop {
            let t = p.bump();
            let Tok::Ident(id) = &t.tok else {
                return Err(p.unexpected(&t, "a generator name"));
            };
            if !is_valid_name(id) {
                return Err(p.error_at(&t, ParseErrorKind::InvalidName(id.clone())));
            }
            let g = Generator::new(id).expect("validated");
            if gens.contains(&g) {
                return Err(p.error_at(&t, ParseErrorKind::DuplicateGenerator(id.clone())));
            }
            gens.push(g);
            if p.at_sym(',') {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect_sym('|')?;
    let toks = std::mem::take(&mut p.toks);
    let pos = p.pos;
    let mut p = Parser { toks, pos, gens: &gens, convention };
    let mut relators = Vec::new();
    if !p.at_sym('>') {
        loop {
            p.relation(&mut relators)?;
            if p.at_sym(',') {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect_sym('>')?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(p.unexpected(&t, "end of input"));
    }
    Ok(Presentation::new(name, gens.clone(), relators).expect("parser only emits declared generators"))
}

/// Parses a single word (or relation `u = v`, returned as `u v^-1`) over the
/// given generators.
pub fn parse_word(text: &str, gens: &[Generator], convention: CommutatorConvention) -> Result<Word, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, gens, convention };
    let mut out = Vec::new();
    p.relation(&mut out)?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(p.unexpected(&t, "end of input"));
    }
    Ok(out.into_iter().fold(Word::identity(), |acc, w| &acc * &w))
}

/// Parses one relation, possibly chained, into its relators: `u = v = w`
/// gives `u v^-1` and `v w^-1`. A bare word gives itself.
pub fn parse_relation(text: &str, gens: &[Generator], convention: CommutatorConvention) -> Result<Vec<Word>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, gens, convention };
    let mut out = Vec::new();
    p.relation(&mut out)?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(p.unexpected(&t, "end of input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let p = parse_presentation("< a | a >").unwrap();
        assert_eq!(p.generators().len(), 1);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].to_text(), "a");
    }

    #[test]
    fn juxtaposition_splits_into_generators() {
        let p = parse_presentation("< x, q | xqx = qxq >").unwrap();
        assert_eq!(p.relators()[0].to_text(), "xqxq^-1x^-1q^-1");
    }

    #[test]
    fn ambiguous_split_is_rejected() {
        let err = parse_presentation("< a, ab, b | aab >").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::AmbiguousWord(_)));
    }

    #[test]
    fn chained_relation() {
        let p = parse_presentation("< q, x, u, v | qx^-1 = uv = v^-1u >").unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[0].to_text(), "qx^-1v^-1u^-1");
        assert_eq!(p.relators()[1].to_text(), "uvu^-1v");
    }

    #[test]
    fn final_relator_of_reduced_group() {
        let p = parse_presentation("< g, q | gq^-2g = q^-1gq^-1 >").unwrap();
        assert_eq!(p.relators()[0].to_text(), "gq^-2gqg^-1q");
    }

    #[test]
    fn comments_header_and_brackets() {
        let text = "# a comment\nname: demo\n< a, b | # gens\n  [a, b] = 1, (ab)^3, a^+2 b^-2 >\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.name(), "demo");
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.relators()[1].len(), 6);
    }

    #[test]
    fn gap_convention_changes_expansion() {
        let p = parse_presentation_with("< a, b | [a,b] >", CommutatorConvention::Gap).unwrap();
        assert_eq!(p.relators()[0].to_text(), "a^-1b^-1ab");
    }

    #[test]
    fn errors_carry_locations() {
        let err = parse_presentation("< a, b |\n  a c >").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert!(matches!(err.kind, ParseErrorKind::UnknownGenerator(ref s) if s == "c"));

        let err = parse_presentation("< a, a | a >").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::DuplicateGenerator(_)));

        let err = parse_presentation("< a | a ").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Unexpected { .. }));

        let err = parse_presentation("< a | a^ >").unwrap_err();
        assert_eq!((err.line, err.column), (1, 10));
    }

    #[test]
    fn standalone_words() {
        let gens: Vec<Generator> = ["q", "c"].iter().map(|n| Generator::new(n).unwrap()).collect();
        let w = parse_word("[q,c]", &gens, CommutatorConvention::Default).unwrap();
        assert_eq!(w.to_text(), "qcq^-1c^-1");
        let w = parse_word("qc = cq", &gens, CommutatorConvention::Default).unwrap();
        assert_eq!(w.to_text(), "qcq^-1c^-1");
    }
}
