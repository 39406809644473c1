//! Shared helpers for the integration tests.
#![allow(dead_code)]

use bgw_core::algebra::{Alphabet, ParamPoly, Rational};
use num_bigint::BigInt;

/// Reads a polynomial such as `c2^2 - 2*c1*(c1 + 1)` or `3/2*c2 + 3c1` over `alphabet`.
///
/// Juxtaposition multiplies, so `2c1(c1+1)` is accepted as written in tables.
pub fn poly(alphabet: &Alphabet, src: &str) -> ParamPoly {
    let tokens = tokenize(src);
    let mut p = Parser { alphabet, tokens, pos: 0 };
    let out = p.sum();
    assert!(p.pos == p.tokens.len(), "trailing input in {src:?}");
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(src: &str) -> Vec<Tok> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else {
            assert!("+-*/^()".contains(c), "unexpected {c:?}");
            out.push(Tok::Op(c));
            i += 1;
        }
    }
    out
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> ParamPoly {
        let mut acc = if self.eat('-') { -&self.product() } else { self.product() };
        loop {
            if self.eat('+') {
                acc = &acc + &self.product();
            } else if self.eat('-') {
                acc = &acc - &self.product();
            } else {
                return acc;
            }
        }
    }

    fn product(&mut self) -> ParamPoly {
        let mut acc = self.power();
        loop {
            if self.eat('*') {
                acc = &acc * &self.power();
            } else if self.eat('/') {
                let Some(Tok::Num(n)) = self.peek().cloned() else { panic!("only numeric divisors") };
                self.pos += 1;
                acc = acc.scale(&Rational::new(1.into(), n));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Name(_)) | Some(Tok::Op('('))) {
                acc = &acc * &self.power();
            } else {
                return acc;
            }
        }
    }

    fn power(&mut self) -> ParamPoly {
        let base = self.atom();
        if self.eat('^') {
            let Some(Tok::Num(n)) = self.peek().cloned() else { panic!("exponent must be a number") };
            self.pos += 1;
            return base.pow(n.try_into().unwrap());
        }
        base
    }

    fn atom(&mut self) -> ParamPoly {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                ParamPoly::constant(self.alphabet, Rational::from_integer(n))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                let i = self.alphabet.position(&name).unwrap_or_else(|| panic!("{name} not in {:?}", self.alphabet));
                ParamPoly::param(self.alphabet, i + 1)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum();
                assert!(self.eat(')'), "unbalanced parentheses");
                inner
            }
            t => panic!("unexpected token {t:?}"),
        }
    }
}
