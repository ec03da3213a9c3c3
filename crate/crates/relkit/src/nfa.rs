//! Nondeterministic finite automata over arbitrary letter alphabets.
//!
//! One engine serves plain languages (arity-1 letters), synchronized
//! padded relations, and asynchronous multi-tape relations; the letter
//! arity is the only difference. All operations are pure: they take the
//! operands by reference and build fresh automata.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::NfaError;
use crate::symbol::{Alphabet, Letter, Symbol};

/// Outcome of an emptiness check. A `NonEmpty` verdict carries a
/// shortest accepted word, found by breadth-first predecessor tracking,
/// so repeated runs produce the same witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptinessResult {
    Empty,
    NonEmpty(Vec<Letter>),
}

impl EmptinessResult {
    pub fn witness(&self) -> Option<&[Letter]> {
        match self {
            EmptinessResult::NonEmpty(w) => Some(w),
            EmptinessResult::Empty => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, EmptinessResult::Empty)
    }
}

/// Nondeterministic finite automaton. States are `0 .. num_states`;
/// transitions are stored as per-state adjacency sorted by (letter
/// index in declared alphabet order, target id), which fixes the
/// iteration order of every search built on top.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    num_states: usize,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
    delta: Vec<Vec<(u32, u32)>>,
    eps: Vec<Vec<u32>>,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, Letter, usize)>,
        eps_transitions: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, NfaError> {
        let initial: BTreeSet<usize> = initial.into_iter().collect();
        let finals: BTreeSet<usize> = finals.into_iter().collect();
        if initial.is_empty() {
            return Err(NfaError::NoInitialState);
        }
        for &s in initial.iter().chain(finals.iter()) {
            if s >= num_states {
                return Err(NfaError::UnknownState(s));
            }
        }
        let mut delta = vec![Vec::new(); num_states];
        for (p, letter, q) in transitions {
            if p >= num_states {
                return Err(NfaError::UnknownState(p));
            }
            if q >= num_states {
                return Err(NfaError::UnknownState(q));
            }
            let idx = alphabet
                .index_of(&letter)
                .ok_or_else(|| NfaError::LetterOutsideAlphabet(letter.to_string()))?;
            delta[p].push((idx as u32, q as u32));
        }
        let mut eps = vec![Vec::new(); num_states];
        for (p, q) in eps_transitions {
            if p >= num_states {
                return Err(NfaError::UnknownState(p));
            }
            if q >= num_states {
                return Err(NfaError::UnknownState(q));
            }
            eps[p].push(q as u32);
        }
        for row in &mut delta {
            row.sort_unstable();
            row.dedup();
        }
        for row in &mut eps {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Nfa {
            alphabet,
            num_states,
            initial,
            finals,
            delta,
            eps,
        })
    }

    /// Automaton with the given alphabet accepting nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        Nfa::new(alphabet, 1, [0], [], [], []).expect("empty nfa")
    }

    /// Chain automaton accepting exactly one plain word.
    pub fn word_automaton(alphabet: Alphabet, word: &[Symbol]) -> Result<Self, NfaError> {
        let transitions: Vec<(usize, Letter, usize)> = word
            .iter()
            .enumerate()
            .map(|(i, s)| (i, Letter::symbol(s.clone()), i + 1))
            .collect();
        Nfa::new(alphabet, word.len() + 1, [0], [word.len()], transitions, [])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals.contains(&state)
    }

    /// Per-state adjacency as (letter index, target), sorted.
    pub fn transitions_from(&self, state: usize) -> &[(u32, u32)] {
        &self.delta[state]
    }

    pub fn eps_from(&self, state: usize) -> &[u32] {
        &self.eps[state]
    }

    pub fn has_eps(&self) -> bool {
        self.eps.iter().any(|row| !row.is_empty())
    }

    pub fn letter(&self, idx: u32) -> &Letter {
        &self.alphabet.letters()[idx as usize]
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    fn eps_closure(&self, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = seed.into_iter().collect();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for &t in &self.eps[s] {
                if seen.insert(t as usize) {
                    queue.push_back(t as usize);
                }
            }
        }
        seen
    }

    /// Does some run from an initial to a final state read `word`?
    pub fn accepts(&self, word: &[Letter]) -> Result<bool, NfaError> {
        let mut indices = Vec::with_capacity(word.len());
        for letter in word {
            let idx = self
                .alphabet
                .index_of(letter)
                .ok_or_else(|| NfaError::LetterOutsideAlphabet(letter.to_string()))?;
            indices.push(idx as u32);
        }
        let mut current = self.eps_closure(self.initial.iter().copied());
        for idx in indices {
            let mut next = BTreeSet::new();
            for &s in &current {
                for &(l, t) in &self.delta[s] {
                    if l == idx {
                        next.insert(t as usize);
                    }
                }
            }
            current = self.eps_closure(next);
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|s| self.finals.contains(s)))
    }

    /// Convenience for plain languages: wraps symbols into arity-1 letters.
    pub fn accepts_symbols(&self, word: &[Symbol]) -> Result<bool, NfaError> {
        let letters: Vec<Letter> = word.iter().cloned().map(Letter::symbol).collect();
        self.accepts(&letters)
    }

    /// Breadth-first emptiness check with a shortest witness.
    pub fn is_empty(&self) -> EmptinessResult {
        // parent[s] = (previous state, letter read to get here, if any)
        let mut parent: Vec<Option<(usize, Option<u32>)>> = vec![None; self.num_states];
        let mut seen = vec![false; self.num_states];
        let mut layer: Vec<usize> = Vec::new();

        let absorb = |state: usize,
                          from: Option<(usize, Option<u32>)>,
                          seen: &mut Vec<bool>,
                          parent: &mut Vec<Option<(usize, Option<u32>)>>,
                          layer: &mut Vec<usize>| {
            if !seen[state] {
                seen[state] = true;
                parent[state] = from;
                layer.push(state);
            }
        };

        for &s in &self.initial {
            absorb(s, None, &mut seen, &mut parent, &mut layer);
        }
        // Close the frontier under epsilon moves, preserving discovery order.
        let mut i = 0;
        while i < layer.len() {
            let s = layer[i];
            for &t in &self.eps[s] {
                absorb(t as usize, Some((s, None)), &mut seen, &mut parent, &mut layer);
            }
            i += 1;
        }

        let reconstruct = |state: usize, parent: &[Option<(usize, Option<u32>)>]| {
            let mut letters: Vec<Letter> = Vec::new();
            let mut cur = state;
            while let Some((prev, via)) = parent[cur] {
                if let Some(l) = via {
                    letters.push(self.letter(l).clone());
                }
                cur = prev;
            }
            letters.reverse();
            letters
        };

        loop {
            if let Some(&f) = layer.iter().find(|s| self.finals.contains(s)) {
                return EmptinessResult::NonEmpty(reconstruct(f, &parent));
            }
            let mut next: Vec<usize> = Vec::new();
            for &s in &layer {
                for &(l, t) in &self.delta[s] {
                    absorb(t as usize, Some((s, Some(l))), &mut seen, &mut parent, &mut next);
                }
            }
            let mut i = 0;
            while i < next.len() {
                let s = next[i];
                for &t in &self.eps[s] {
                    absorb(t as usize, Some((s, None)), &mut seen, &mut parent, &mut next);
                }
                i += 1;
            }
            if next.is_empty() {
                return EmptinessResult::Empty;
            }
            layer = next;
        }
    }

    /// Language intersection via the reachable product construction.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa, NfaError> {
        if !self.alphabet.same_letters(&other.alphabet) {
            return Err(NfaError::AlphabetMismatch);
        }
        let a = self.eliminated();
        let b = other.eliminated();
        // b's letter indices translated into a's alphabet order.
        let mut b_to_a: Vec<Option<u32>> = vec![None; b.alphabet.len()];
        for (bi, l) in b.alphabet.letters().iter().enumerate() {
            b_to_a[bi] = a.alphabet.index_of(l).map(|i| i as u32);
        }
        let mut b_by_a_letter: Vec<HashMap<u32, Vec<u32>>> = Vec::with_capacity(b.num_states);
        for s in 0..b.num_states {
            let mut map: HashMap<u32, Vec<u32>> = HashMap::new();
            for &(l, t) in &b.delta[s] {
                if let Some(ai) = b_to_a[l as usize] {
                    map.entry(ai).or_default().push(t);
                }
            }
            b_by_a_letter.push(map);
        }

        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for &p in &a.initial {
            for &q in &b.initial {
                if !ids.contains_key(&(p, q)) {
                    ids.insert((p, q), order.len());
                    order.push((p, q));
                    queue.push_back((p, q));
                }
            }
        }
        let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)];
            for &(l, t1) in &a.delta[p] {
                if let Some(t2s) = b_by_a_letter[q].get(&l) {
                    for &t2 in t2s {
                        let key = (t1 as usize, t2 as usize);
                        let to = *ids.entry(key).or_insert_with(|| {
                            order.push(key);
                            queue.push_back(key);
                            order.len() - 1
                        });
                        transitions.push((from, a.letter(l).clone(), to));
                    }
                }
            }
        }
        let finals: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| a.finals.contains(p) && b.finals.contains(q))
            .map(|(i, _)| i)
            .collect();
        let initial: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| a.initial.contains(p) && b.initial.contains(q))
            .map(|(i, _)| i)
            .collect();
        Nfa::new(
            a.alphabet.clone(),
            order.len().max(1),
            if initial.is_empty() { vec![0] } else { initial },
            finals,
            transitions,
            [],
        )
    }

    /// Language union by disjoint sum of the state sets.
    pub fn union(&self, other: &Nfa) -> Result<Nfa, NfaError> {
        if !self.alphabet.same_letters(&other.alphabet) {
            return Err(NfaError::AlphabetMismatch);
        }
        let off = self.num_states;
        let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
        for s in 0..self.num_states {
            for &(l, t) in &self.delta[s] {
                transitions.push((s, self.letter(l).clone(), t as usize));
            }
        }
        for s in 0..other.num_states {
            for &(l, t) in &other.delta[s] {
                transitions.push((s + off, other.letter(l).clone(), t as usize + off));
            }
        }
        let mut eps: Vec<(usize, usize)> = Vec::new();
        for s in 0..self.num_states {
            for &t in &self.eps[s] {
                eps.push((s, t as usize));
            }
        }
        for s in 0..other.num_states {
            for &t in &other.eps[s] {
                eps.push((s + off, t as usize + off));
            }
        }
        let initial: Vec<usize> = self
            .initial
            .iter()
            .copied()
            .chain(other.initial.iter().map(|&s| s + off))
            .collect();
        let finals: Vec<usize> = self
            .finals
            .iter()
            .copied()
            .chain(other.finals.iter().map(|&s| s + off))
            .collect();
        Nfa::new(
            self.alphabet.clone(),
            self.num_states + other.num_states,
            initial,
            finals,
            transitions,
            eps,
        )
    }

    /// Relabels letters through `f`; a `None` image becomes an epsilon
    /// transition. The result is epsilon-eliminated.
    pub fn map_labels(&self, f: impl Fn(&Letter) -> Option<Letter>) -> Nfa {
        let images: Vec<Option<Letter>> =
            self.alphabet.letters().iter().map(|l| f(l)).collect();
        let mut letters: Vec<Letter> = Vec::new();
        for img in images.iter().flatten() {
            if !letters.contains(img) {
                letters.push(img.clone());
            }
        }
        let alphabet = Alphabet::new(letters);
        let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
        let mut eps: Vec<(usize, usize)> = Vec::new();
        for s in 0..self.num_states {
            for &(l, t) in &self.delta[s] {
                match &images[l as usize] {
                    Some(img) => transitions.push((s, img.clone(), t as usize)),
                    None => eps.push((s, t as usize)),
                }
            }
            for &t in &self.eps[s] {
                eps.push((s, t as usize));
            }
        }
        let nfa = Nfa::new(
            alphabet,
            self.num_states,
            self.initial.iter().copied(),
            self.finals.iter().copied(),
            transitions,
            eps,
        )
        .expect("relabeling preserves well-formedness");
        nfa.eliminate_epsilon()
    }

    /// Removes epsilon transitions while preserving the language.
    pub fn eliminate_epsilon(&self) -> Nfa {
        let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
        let mut finals: BTreeSet<usize> = BTreeSet::new();
        for s in 0..self.num_states {
            let closure = self.eps_closure([s]);
            if closure.iter().any(|t| self.finals.contains(t)) {
                finals.insert(s);
            }
            for &u in &closure {
                for &(l, t) in &self.delta[u] {
                    transitions.push((s, self.letter(l).clone(), t as usize));
                }
            }
        }
        Nfa::new(
            self.alphabet.clone(),
            self.num_states,
            self.initial.iter().copied(),
            finals,
            transitions,
            [],
        )
        .expect("epsilon elimination preserves well-formedness")
    }

    fn eliminated(&self) -> Nfa {
        if self.has_eps() {
            self.eliminate_epsilon()
        } else {
            self.clone()
        }
    }

    /// States from which some final state is reachable.
    pub fn coaccessible(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.num_states];
        for s in 0..self.num_states {
            for &(_, t) in &self.delta[s] {
                rev[t as usize].push(s);
            }
            for &t in &self.eps[s] {
                rev[t as usize].push(s);
            }
        }
        let mut seen = vec![false; self.num_states];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &f in &self.finals {
            if !seen[f] {
                seen[f] = true;
                queue.push_back(f);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Same language over a larger alphabet (the extra letters label no
    /// transitions). Lets relations built over different symbol sets be
    /// combined, mirroring the disjoint-union-of-alphabets convention.
    pub fn widen_alphabet(&self, extra: &[Letter]) -> Nfa {
        let mut letters = self.alphabet.letters().to_vec();
        for l in extra {
            if !letters.contains(l) {
                letters.push(l.clone());
            }
        }
        let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
        for s in 0..self.num_states {
            for &(l, t) in &self.delta[s] {
                transitions.push((s, self.letter(l).clone(), t as usize));
            }
        }
        let mut eps: Vec<(usize, usize)> = Vec::new();
        for s in 0..self.num_states {
            for &t in &self.eps[s] {
                eps.push((s, t as usize));
            }
        }
        Nfa::new(
            Alphabet::new(letters),
            self.num_states,
            self.initial.iter().copied(),
            self.finals.iter().copied(),
            transitions,
            eps,
        )
        .expect("widening preserves well-formedness")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{sym, word, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::of_symbols(&[sym("a"), sym("b")])
    }

    fn letters(text: &str) -> Vec<Letter> {
        word(text).into_iter().map(Letter::symbol).collect()
    }

    #[test]
    fn word_automaton_accepts_only_its_word() {
        let n = Nfa::word_automaton(ab(), &word("ab")).unwrap();
        assert!(n.accepts(&letters("ab")).unwrap());
        assert!(!n.accepts(&letters("a")).unwrap());
        assert!(!n.accepts(&letters("ba")).unwrap());
        assert!(!n.accepts(&letters("")).unwrap());
    }

    #[test]
    fn accepts_rejects_foreign_letters() {
        let n = Nfa::word_automaton(ab(), &word("a")).unwrap();
        let c = vec![Letter::symbol(sym("c"))];
        assert!(matches!(
            n.accepts(&c),
            Err(NfaError::LetterOutsideAlphabet(_))
        ));
    }

    #[test]
    fn emptiness_finds_shortest_witness() {
        // accepts {ab, aab}; shortest witness must be ab
        let a = Nfa::word_automaton(ab(), &word("aab")).unwrap();
        let b = Nfa::word_automaton(ab(), &word("ab")).unwrap();
        let u = a.union(&b).unwrap();
        match u.is_empty() {
            EmptinessResult::NonEmpty(w) => assert_eq!(w, letters("ab")),
            EmptinessResult::Empty => panic!("nonempty expected"),
        }
        assert!(Nfa::empty(ab()).is_empty().is_empty());
    }

    #[test]
    fn epsilon_elimination_preserves_language() {
        // initial -eps-> mid -a-> final, plus eps cycle mid <-> initial
        let n = Nfa::new(
            ab(),
            3,
            [0],
            [2],
            [(1, Letter::symbol(sym("a")), 2)],
            [(0, 1), (1, 0)],
        )
        .unwrap();
        let e = n.eliminate_epsilon();
        assert!(!e.has_eps());
        for w in ["", "a", "aa", "b"] {
            assert_eq!(
                n.accepts(&letters(w)).unwrap(),
                e.accepts(&letters(w)).unwrap(),
                "word {w:?}"
            );
        }
    }

    #[test]
    fn intersect_requires_same_alphabet() {
        let n = Nfa::word_automaton(ab(), &word("a")).unwrap();
        let other = Nfa::word_automaton(Alphabet::of_symbols(&[sym("a")]), &word("a")).unwrap();
        assert!(matches!(n.intersect(&other), Err(NfaError::AlphabetMismatch)));
    }
}
