//! Bi-intuitionistic formulas: AST, parser, printer.
//!
//! Grammar, tightest binding first:
//!
//! ```text
//! formula ::= disj (("->" disj)* | ("<-" disj)* | "<->" disj)
//! disj    ::= conj ("|" conj)*
//! conj    ::= unary ("&" unary)*
//! unary   ::= "!" unary | "~" unary | atom
//! atom    ::= ident | "top" | "bot" | "(" formula ")"
//! ident   ::= [A-Za-z_][A-Za-z0-9_']*        (except "top"/"bot")
//! ```
//!
//! `->` is right-associative, `<-` left-associative, and mixing different
//! arrows without parentheses is a syntax error. `a <-> b` is sugar for
//! `(a -> b) & (b -> a)` and may not be chained.
//!
//! `!x` abbreviates `x -> bot` and `~x` abbreviates `top <- x`; the printer
//! always uses the abbreviated forms, so `parse(print(f)) == f` exactly,
//! while `print(parse(s))` recovers `s` up to whitespace for sugar-free `s`
//! in printer-normal form.

use crate::error::{Error, Result};
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Coimp(Box<Formula>, Box<Formula>),
}

use Formula::*;

pub fn var(name: &str) -> Formula {
    Var(name.to_string())
}

pub fn and(a: Formula, b: Formula) -> Formula {
    And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Or(Box::new(a), Box::new(b))
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Imp(Box::new(a), Box::new(b))
}

pub fn coimp(a: Formula, b: Formula) -> Formula {
    Coimp(Box::new(a), Box::new(b))
}

/// `!a = a -> bot`
pub fn neg(a: Formula) -> Formula {
    imp(a, Bot)
}

/// `~a = top <- a`
pub fn coneg(a: Formula) -> Formula {
    coimp(Top, a)
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(imp(a.clone(), b.clone()), imp(b, a))
}

/// The Gödel-Dummett axiom `(p -> q) | (q -> p)`.
pub fn godel_dummett() -> Formula {
    or(imp(var("p"), var("q")), imp(var("q"), var("p")))
}

/// Conjunction of a nonempty list, folded right; `top` for the empty list.
pub fn big_and<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    let v: Vec<Formula> = items.into_iter().collect();
    match v.len() {
        0 => Top,
        _ => {
            let mut it = v.into_iter().rev();
            let last = it.next().unwrap();
            it.fold(last, |acc, f| and(f, acc))
        }
    }
}

impl Formula {
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Var(v) => {
                out.insert(v.clone());
            }
            Top | Bot => {}
            And(a, b) | Or(a, b) | Imp(a, b) | Coimp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// All subformulas (as trees), each once, in postorder of first visit.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Var(_) | Top | Bot => {}
                And(a, b) | Or(a, b) | Imp(a, b) | Coimp(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
            if !out.contains(&f) {
                out.push(f);
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Var(_) | Top | Bot => 1,
            And(a, b) | Or(a, b) | Imp(a, b) | Coimp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

// ---------------------------------------------------------------------------
// printer

const LEVEL_ARROW: u8 = 1;
const LEVEL_OR: u8 = 2;
const LEVEL_AND: u8 = 3;
const LEVEL_UNARY: u8 = 4;

fn level(f: &Formula) -> u8 {
    match f {
        Imp(_, b) if **b == Bot => LEVEL_UNARY,
        Coimp(a, _) if **a == Top => LEVEL_UNARY,
        Imp(..) | Coimp(..) => LEVEL_ARROW,
        Or(..) => LEVEL_OR,
        And(..) => LEVEL_AND,
        Var(_) | Top | Bot => 5,
    }
}

fn write_prec(f: &Formula, min: u8, out: &mut String) {
    let lv = level(f);
    let parens = lv < min;
    if parens {
        out.push('(');
    }
    match f {
        Var(v) => out.push_str(v),
        Top => out.push_str("top"),
        Bot => out.push_str("bot"),
        Imp(a, b) if **b == Bot => {
            out.push('!');
            write_prec(a, LEVEL_UNARY, out);
        }
        Coimp(a, b) if **a == Top => {
            out.push('~');
            write_prec(b, LEVEL_UNARY, out);
        }
        And(a, b) => {
            // left-associative: the right operand needs a strictly higher level
            write_prec(a, LEVEL_AND, out);
            out.push_str(" & ");
            write_prec(b, LEVEL_AND + 1, out);
        }
        Or(a, b) => {
            write_prec(a, LEVEL_OR, out);
            out.push_str(" | ");
            write_prec(b, LEVEL_OR + 1, out);
        }
        Imp(a, b) => {
            // right-associative; a right operand that is itself `->` keeps
            // its bare form, any other arrow gets parenthesized
            write_prec(a, LEVEL_ARROW + 1, out);
            out.push_str(" -> ");
            match (level(b), &**b) {
                (LEVEL_ARROW, Imp(..)) => write_prec(b, LEVEL_ARROW, out),
                _ => write_prec(b, LEVEL_ARROW + 1, out),
            }
        }
        Coimp(a, b) => {
            // left-associative
            match (level(a), &**a) {
                (LEVEL_ARROW, Coimp(..)) => write_prec(a, LEVEL_ARROW, out),
                _ => write_prec(a, LEVEL_ARROW + 1, out),
            }
            out.push_str(" <- ");
            write_prec(b, LEVEL_ARROW + 1, out);
        }
    }
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_prec(self, 0, &mut s);
        f.write_str(&s)
    }
}

pub fn print(f: &Formula) -> String {
    f.to_string()
}

// ---------------------------------------------------------------------------
// parser

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Bang,
    Tilde,
    AndOp,
    OrOp,
    Arrow,
    Coarrow,
    Iff,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        while let Some((t, p)) = lx.next_token()? {
            out.push((t, p));
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize)>> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'!' => {
                self.pos += 1;
                Tok::Bang
            }
            b'~' => {
                self.pos += 1;
                Tok::Tilde
            }
            b'&' => {
                self.pos += 1;
                Tok::AndOp
            }
            b'|' => {
                self.pos += 1;
                Tok::OrOp
            }
            b'-' => {
                if self.src.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 2;
                    Tok::Arrow
                } else {
                    return Err(Error::Syntax { pos: start, msg: "expected `->`".into() });
                }
            }
            b'<' => {
                if self.src.get(self.pos + 1) == Some(&b'-') {
                    if self.src.get(self.pos + 2) == Some(&b'>') {
                        self.pos += 3;
                        Tok::Iff
                    } else {
                        self.pos += 2;
                        Tok::Coarrow
                    }
                } else {
                    return Err(Error::Syntax { pos: start, msg: "expected `<-` or `<->`".into() });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos + 1;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric()
                        || self.src[end] == b'_'
                        || self.src[end] == b'\'')
                {
                    end += 1;
                }
                let word = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                match word {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word.to_string()),
                }
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                });
            }
        };
        Ok(Some((tok, start)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        self.i += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let pos = self.pos();
        let first = self.or_level()?;
        let mut kind: Option<Tok> = None;
        let mut operands = vec![first];
        while matches!(self.peek(), Some(Tok::Arrow | Tok::Coarrow | Tok::Iff)) {
            let op = self.bump();
            match &kind {
                None => kind = Some(op),
                Some(k) if *k == op => {
                    if op == Tok::Iff {
                        return Err(Error::Syntax {
                            pos: self.pos(),
                            msg: "`<->` may not be chained; add parentheses".into(),
                        });
                    }
                }
                Some(_) => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "mixing `->`, `<-`, or `<->` requires parentheses".into(),
                    });
                }
            }
            operands.push(self.or_level()?);
        }
        Ok(match kind {
            None => operands.pop().unwrap(),
            Some(Tok::Arrow) => {
                // right-associative
                let mut it = operands.into_iter().rev();
                let last = it.next().unwrap();
                it.fold(last, |acc, f| imp(f, acc))
            }
            Some(Tok::Coarrow) => {
                // left-associative
                let mut it = operands.into_iter();
                let first = it.next().unwrap();
                it.fold(first, coimp)
            }
            Some(Tok::Iff) => {
                let mut it = operands.into_iter();
                let a = it.next().unwrap();
                let b = it.next().unwrap();
                iff(a, b)
            }
            _ => unreachable!(),
        })
    }

    fn or_level(&mut self) -> Result<Formula> {
        let mut f = self.and_level()?;
        while self.peek() == Some(&Tok::OrOp) {
            self.bump();
            f = or(f, self.and_level()?);
        }
        Ok(f)
    }

    fn and_level(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::AndOp) {
            self.bump();
            f = and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(neg(self.unary()?))
            }
            Some(Tok::Tilde) => {
                self.bump();
                Ok(coneg(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                if let Tok::Ident(name) = self.bump() {
                    Ok(Var(name))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::Top) => {
                self.bump();
                Ok(Top)
            }
            Some(Tok::Bot) => {
                self.bump();
                Ok(Bot)
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(Error::Syntax { pos: self.pos(), msg: "expected a formula".into() }),
        }
    }
}

pub fn parse(src: &str) -> Result<Formula> {
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { toks, i: 0, end: src.len() };
    let f = p.formula()?;
    if p.i != p.toks.len() {
        return Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(f)
}

/// Deterministic random formula over the given variables, with the given
/// connective-depth budget.
pub fn random_formula<R: Rng>(rng: &mut R, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_range(0..8) == 0 {
        return match rng.gen_range(0..6) {
            0 => Top,
            1 => Bot,
            _ => Var(vars[rng.gen_range(0..vars.len())].to_string()),
        };
    }
    let a = random_formula(rng, vars, depth - 1);
    match rng.gen_range(0..6) {
        0 => and(a, random_formula(rng, vars, depth - 1)),
        1 => or(a, random_formula(rng, vars, depth - 1)),
        2 => imp(a, random_formula(rng, vars, depth - 1)),
        3 => coimp(a, random_formula(rng, vars, depth - 1)),
        4 => neg(a),
        _ => coneg(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_godel_dummett() {
        assert_eq!(parse("(p -> q) | (q -> p)").unwrap(), godel_dummett());
    }

    #[test]
    fn parses_derived_connectives() {
        assert_eq!(parse("~!p").unwrap(), coneg(neg(var("p"))));
        assert_eq!(parse("!p").unwrap(), imp(var("p"), Bot));
    }

    #[test]
    fn coimp_is_left_associative() {
        assert_eq!(
            parse("p <- q <- r").unwrap(),
            coimp(coimp(var("p"), var("q")), var("r"))
        );
    }

    #[test]
    fn imp_is_right_associative() {
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            imp(var("p"), imp(var("q"), var("r")))
        );
    }

    #[test]
    fn mixing_arrows_is_an_error() {
        assert!(matches!(parse("p -> q <- r"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("p <- q -> r"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("p <-> q <-> r"), Err(Error::Syntax { .. })));
        assert!(parse("(p -> q) <- r").is_ok());
    }

    #[test]
    fn iff_desugars() {
        assert_eq!(parse("p <-> q").unwrap(), iff(var("p"), var("q")));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("p -> ") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("p q").is_err());
        assert!(parse("(p").is_err());
    }

    #[test]
    fn printer_round_trips() {
        for src in [
            "p",
            "top",
            "bot",
            "!p",
            "~!p",
            "p & q & r",
            "p | q & r",
            "(p | q) & r",
            "p -> q -> r",
            "p <- q <- r",
            "p <- (q <- r)",
            "(p -> q) | (q -> p)",
            "!(p -> q)",
            "p & (q | r) -> ~s",
        ] {
            let f = parse(src).unwrap();
            let printed = print(&f);
            assert_eq!(parse(&printed).unwrap(), f, "src = {src}, printed = {printed}");
        }
    }

    #[test]
    fn print_then_parse_is_identity_on_random_formulas() {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let f = random_formula(&mut rng, &["p", "q", "r"], 5);
            let printed = print(&f);
            assert_eq!(parse(&printed).unwrap(), f, "printed = {printed}");
        }
    }

    #[test]
    fn print_normal_forms_are_stable() {
        // whitespace-normalized inputs in printer-normal form survive
        for src in ["p -> q", "p & q | r", "!p | ~q", "p <- q <- r"] {
            let f = parse(src).unwrap();
            assert_eq!(print(&f), src);
        }
    }

    #[test]
    fn subformulas_and_vars() {
        let f = parse("(p -> q) | !p").unwrap();
        assert_eq!(f.vars().len(), 2);
        let subs = f.subformulas();
        assert!(subs.contains(&&var("p")));
        assert!(subs.contains(&&parse("p -> q").unwrap()));
        assert!(subs.contains(&&f));
    }
}
