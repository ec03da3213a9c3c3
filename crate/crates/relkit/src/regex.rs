//! Regular-expression compilation to epsilon-free NFAs.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! union  := concat ('|' concat)*
//! concat := repeat+
//! repeat := atom '*'*
//! atom   := '(' union ')' | epsilon | emptyset | anysym | SYMBOL
//! ```
//!
//! `ε` (ASCII alias `eps`) denotes the empty word, `∅` (alias `empty`)
//! the empty language, and `S` (alias `.`) any single alphabet symbol.
//! Symbols are tokenized by longest match against the supplied alphabet;
//! an alphabet symbol of the same or greater length shadows the aliases.
//! Whitespace may separate tokens and is otherwise ignored. The
//! characters `( ) | *` always act as operators, so symbols containing
//! them cannot be written in regexes.
//!
//! Compilation is a Thompson-style construction followed by epsilon
//! elimination: predictable size, no determinization.

use crate::error::RegexError;
use crate::nfa::Nfa;
use crate::symbol::{Alphabet, Letter, Symbol};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Bar,
    Star,
    Eps,
    Empty,
    Any,
    Sym(Symbol),
}

fn tokenize(pattern: &str, symbols: &[Symbol]) -> Result<Vec<(usize, Tok)>, RegexError> {
    let bytes = pattern.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let rest = &pattern[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let op = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '|' => Some(Tok::Bar),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = op {
            out.push((pos, t));
            pos += 1;
            continue;
        }
        // Longest-match tokenization; alphabet symbols win ties.
        let mut best: Option<(usize, Tok)> = None;
        let mut consider = |len: usize, tok: Tok, prefer: bool| {
            let better = match &best {
                None => true,
                Some((blen, _)) => len > *blen || (len == *blen && prefer),
            };
            if better {
                best = Some((len, tok));
            }
        };
        for s in symbols {
            if rest.starts_with(s.as_str()) {
                consider(s.as_str().len(), Tok::Sym(s.clone()), true);
            }
        }
        for (text, tok) in [
            ("ε", Tok::Eps),
            ("eps", Tok::Eps),
            ("∅", Tok::Empty),
            ("empty", Tok::Empty),
            ("S", Tok::Any),
            (".", Tok::Any),
        ] {
            if rest.starts_with(text) {
                consider(text.len(), tok, false);
            }
        }
        match best {
            Some((len, tok)) => {
                out.push((pos, tok));
                pos += len;
            }
            None => {
                let token: String = rest.chars().take_while(|c| !c.is_whitespace()).collect();
                return Err(RegexError::SymbolOutsideAlphabet { pos, token });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy)]
struct Frag {
    start: usize,
    accept: usize,
}

struct Builder {
    states: usize,
    transitions: Vec<(usize, Letter, usize)>,
    eps: Vec<(usize, usize)>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    fn frag(&mut self) -> Frag {
        let start = self.fresh();
        let accept = self.fresh();
        Frag { start, accept }
    }
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    symbols: &'a [Symbol],
    b: Builder,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> RegexError {
        RegexError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn union(&mut self) -> Result<Frag, RegexError> {
        let mut frags = vec![self.concat()?];
        while self.peek() == Some(&Tok::Bar) {
            self.at += 1;
            frags.push(self.concat()?);
        }
        if frags.len() == 1 {
            return Ok(frags[0]);
        }
        let f = self.b.frag();
        for g in frags {
            self.b.eps.push((f.start, g.start));
            self.b.eps.push((g.accept, f.accept));
        }
        Ok(f)
    }

    fn concat(&mut self) -> Result<Frag, RegexError> {
        let mut frags = vec![self.repeat()?];
        while matches!(
            self.peek(),
            Some(Tok::LParen | Tok::Eps | Tok::Empty | Tok::Any | Tok::Sym(_))
        ) {
            frags.push(self.repeat()?);
        }
        let mut cur = frags[0];
        for g in &frags[1..] {
            self.b.eps.push((cur.accept, g.start));
            cur = Frag {
                start: cur.start,
                accept: g.accept,
            };
        }
        Ok(cur)
    }

    fn repeat(&mut self) -> Result<Frag, RegexError> {
        let mut f = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            let s = self.b.frag();
            self.b.eps.push((s.start, f.start));
            self.b.eps.push((s.start, s.accept));
            self.b.eps.push((f.accept, f.start));
            self.b.eps.push((f.accept, s.accept));
            f = s;
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Frag, RegexError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.union()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.at += 1;
                Ok(f)
            }
            Some(Tok::Eps) => {
                self.at += 1;
                let f = self.b.frag();
                self.b.eps.push((f.start, f.accept));
                Ok(f)
            }
            Some(Tok::Empty) => {
                self.at += 1;
                Ok(self.b.frag())
            }
            Some(Tok::Any) => {
                self.at += 1;
                let f = self.b.frag();
                for s in self.symbols {
                    self.b
                        .transitions
                        .push((f.start, Letter::symbol(s.clone()), f.accept));
                }
                Ok(f)
            }
            Some(Tok::Sym(s)) => {
                self.at += 1;
                let f = self.b.frag();
                self.b
                    .transitions
                    .push((f.start, Letter::symbol(s), f.accept));
                Ok(f)
            }
            _ => Err(self.err("expected an atom")),
        }
    }
}

/// Compiles `pattern` over the given symbols into an epsilon-free NFA
/// whose alphabet is exactly the supplied symbol set.
pub fn compile_regex(pattern: &str, symbols: &[Symbol]) -> Result<Nfa, RegexError> {
    let toks = tokenize(pattern, symbols)?;
    let mut parser = Parser {
        toks: &toks,
        at: 0,
        symbols,
        b: Builder {
            states: 0,
            transitions: Vec::new(),
            eps: Vec::new(),
        },
        end: pattern.len(),
    };
    let frag = parser.union()?;
    if parser.at != toks.len() {
        return Err(parser.err("trailing input"));
    }
    let nfa = Nfa::new(
        Alphabet::of_symbols(symbols),
        parser.b.states,
        [frag.start],
        [frag.accept],
        parser.b.transitions,
        parser.b.eps,
    )
    .expect("thompson construction is well-formed");
    Ok(nfa.eliminate_epsilon())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{sym, word};

    fn ab() -> Vec<Symbol> {
        vec![sym("a"), sym("b")]
    }

    fn accepts(n: &Nfa, w: &str) -> bool {
        n.accepts_symbols(&word(w)).unwrap()
    }

    #[test]
    fn basic_semantics() {
        let n = compile_regex("a*b", &ab()).unwrap();
        assert!(accepts(&n, "aab"));
        assert!(accepts(&n, "b"));
        assert!(!accepts(&n, "ba"));
    }

    #[test]
    fn epsilon_and_empty() {
        let n = compile_regex("ε", &[sym("a")]).unwrap();
        assert!(n.accepts_symbols(&[]).unwrap());
        assert!(!accepts(&n, "a"));
        let n = compile_regex("eps", &[sym("a")]).unwrap();
        assert!(n.accepts_symbols(&[]).unwrap());
        let n = compile_regex("∅", &[sym("a")]).unwrap();
        assert!(n.is_empty().is_empty());
    }

    #[test]
    fn alternation_and_grouping() {
        let n = compile_regex("(ab|ba)*", &ab()).unwrap();
        for (w, want) in [("", true), ("ab", true), ("abba", true), ("aa", false)] {
            assert_eq!(accepts(&n, w), want, "{w:?}");
        }
    }

    #[test]
    fn any_symbol_token() {
        let n = compile_regex("S*a", &ab()).unwrap();
        assert!(accepts(&n, "ba"));
        assert!(accepts(&n, "a"));
        assert!(!accepts(&n, "ab"));
    }

    #[test]
    fn exhaustive_against_reference_up_to_five() {
        // (a|b)* accepts every word; cross-check all 63 words up to length 5
        let n = compile_regex("(a|b)*", &ab()).unwrap();
        let mut count = 0;
        for len in 0..=5usize {
            for mut k in 0..(1 << len) {
                let mut w = String::new();
                for _ in 0..len {
                    w.push(if k & 1 == 0 { 'a' } else { 'b' });
                    k >>= 1;
                }
                assert!(accepts(&n, &w));
                count += 1;
            }
        }
        assert_eq!(count, 63);
    }

    #[test]
    fn errors_carry_positions() {
        match compile_regex("a(b", &ab()) {
            Err(RegexError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("unexpected: {other:?}"),
        }
        match compile_regex("ac", &ab()) {
            Err(RegexError::SymbolOutsideAlphabet { pos, token }) => {
                assert_eq!(pos, 1);
                assert_eq!(token, "c");
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn longest_match_prefers_declared_symbols() {
        let n = compile_regex("epsilon", &[sym("epsilon")]).unwrap();
        assert!(n.accepts_symbols(&[sym("epsilon")]).unwrap());
        // multi-character symbols tokenize greedily
        let n = compile_regex("q0 q0*", &[sym("q0")]).unwrap();
        assert!(n.accepts_symbols(&[sym("q0"), sym("q0"), sym("q0")]).unwrap());
        assert!(!n.accepts_symbols(&[]).unwrap());
    }
}
