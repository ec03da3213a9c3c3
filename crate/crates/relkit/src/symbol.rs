//! Alphabet symbols, tuple letters, and plain words.
//!
//! Every automaton in this crate runs over an alphabet of [`Letter`]s. A
//! letter is a fixed-arity tuple of tracks; a track carries an ordinary
//! [`Symbol`], the padding marker, or the epsilon marker. Plain languages
//! use arity-1 letters, synchronized (padded) relations use `Sym`/`Pad`
//! tracks, and asynchronous multi-tape relations use `Sym`/`Eps` tracks.

use std::fmt;
use std::sync::Arc;

use crate::error::SymbolError;

/// Text of the reserved padding track.
pub const PAD_TOKEN: &str = "_";
/// Text of the reserved epsilon track.
pub const EPS_TOKEN: &str = "eps";

/// An ordinary alphabet symbol: a nonempty token without whitespace or
/// commas, distinct from the reserved `_` and `eps` tokens.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(text: &str) -> Result<Self, SymbolError> {
        if text.is_empty() {
            return Err(SymbolError::Empty);
        }
        if text.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(SymbolError::IllegalChar(text.to_string()));
        }
        if text == PAD_TOKEN || text == EPS_TOKEN {
            return Err(SymbolError::Reserved(text.to_string()));
        }
        Ok(Symbol(Arc::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Shorthand used pervasively in tests and generators.
pub fn sym(text: &str) -> Symbol {
    Symbol::new(text).expect("valid symbol")
}

/// One coordinate of a tuple letter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Track {
    Sym(Symbol),
    Pad,
    Eps,
}

impl Track {
    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Track::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_pad(&self) -> bool {
        matches!(self, Track::Pad)
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Track::Eps)
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Track::Sym(s) => write!(f, "{s}"),
            Track::Pad => f.write_str(PAD_TOKEN),
            Track::Eps => f.write_str(EPS_TOKEN),
        }
    }
}

/// An alphabet letter: a nonempty tuple of tracks. Arity 1 letters over
/// `Sym` tracks are the letters of plain languages.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Box<[Track]>);

impl Letter {
    pub fn tuple(tracks: Vec<Track>) -> Self {
        assert!(!tracks.is_empty(), "letters have arity >= 1");
        Letter(tracks.into_boxed_slice())
    }

    /// Arity-1 letter carrying a single symbol.
    pub fn symbol(s: Symbol) -> Self {
        Letter::tuple(vec![Track::Sym(s)])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn tracks(&self) -> &[Track] {
        &self.0
    }

    pub fn track(&self, i: usize) -> &Track {
        &self.0[i]
    }

    /// The symbol of an arity-1 `Sym` letter, if that is what this is.
    pub fn as_symbol(&self) -> Option<&Symbol> {
        match &*self.0 {
            [Track::Sym(s)] => Some(s),
            _ => None,
        }
    }

    pub fn is_all_pad(&self) -> bool {
        self.0.iter().all(Track::is_pad)
    }

    pub fn is_all_eps(&self) -> bool {
        self.0.iter().all(Track::is_eps)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A plain word over ordinary symbols.
pub type Word = Vec<Symbol>;

/// Renders a word with symbols space-separated (empty word prints as
/// nothing); multi-character symbol tokens stay unambiguous this way.
pub fn display_word(word: &[Symbol]) -> String {
    word.iter()
        .map(|s| s.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Test/corpus helper: build a word from one-character symbols, so
/// `word("abc")` is the word `a b c`.
pub fn word(text: &str) -> Word {
    text.chars().map(|c| sym(&c.to_string())).collect()
}

/// An ordered, duplicate-free set of letters. Declared order is
/// significant: it fixes iteration order in every deterministic search.
#[derive(Clone, Debug)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Alphabet { letters: out }
    }

    /// An arity-1 alphabet from plain symbols.
    pub fn of_symbols(symbols: &[Symbol]) -> Self {
        Alphabet::new(symbols.iter().cloned().map(Letter::symbol).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index_of(&self, letter: &Letter) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        self.index_of(letter).is_some()
    }

    /// Set equality; declared order does not matter for compatibility.
    pub fn same_letters(&self, other: &Alphabet) -> bool {
        self.letters.len() == other.letters.len()
            && self.letters.iter().all(|l| other.contains(l))
    }

    /// The ordinary symbols mentioned on any track of any letter, in
    /// first-appearance order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        for l in &self.letters {
            for t in l.tracks() {
                if let Track::Sym(s) = t {
                    if !out.contains(s) {
                        out.push(s.clone());
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_rejects_reserved_and_malformed() {
        assert!(Symbol::new("a").is_ok());
        assert!(Symbol::new("q0").is_ok());
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("a b").is_err());
        assert!(Symbol::new("a,b").is_err());
        assert!(Symbol::new("_").is_err());
        assert!(Symbol::new("eps").is_err());
    }

    #[test]
    fn alphabet_dedups_and_keeps_order() {
        let a = Alphabet::of_symbols(&[sym("b"), sym("a"), sym("b")]);
        assert_eq!(a.len(), 2);
        assert_eq!(a.letters()[0], Letter::symbol(sym("b")));
        assert_eq!(a.index_of(&Letter::symbol(sym("a"))), Some(1));
    }

    #[test]
    fn display_is_stable() {
        let l = Letter::tuple(vec![Track::Sym(sym("a")), Track::Pad, Track::Eps]);
        assert_eq!(l.to_string(), "a,_,eps");
        assert_eq!(display_word(&word("ab")), "a b");
    }
}
