//! Brute-force ground truth: enumeration of relation members and direct
//! string predicates, independent of every solver code path.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::constraint::ConstraintSet;
use crate::nfa::Nfa;
use crate::relation::{RatRelation, RecRelation, RegRelation};
use crate::symbol::{Symbol, Track, Word};

/// A relation of any of the three automaton-backed classes, borrowed.
#[derive(Clone, Copy)]
pub enum AnyRelation<'a> {
    Rec(&'a RecRelation),
    Reg(&'a RegRelation),
    Rat(&'a RatRelation),
}

impl<'a> AnyRelation<'a> {
    pub fn arity(&self) -> usize {
        match self {
            AnyRelation::Rec(r) => r.arity(),
            AnyRelation::Reg(r) => r.arity(),
            AnyRelation::Rat(r) => r.arity(),
        }
    }

    pub fn contains(&self, tuple: &[Word]) -> bool {
        match self {
            AnyRelation::Rec(r) => r.contains(tuple).unwrap_or(false),
            AnyRelation::Reg(r) => r.contains(tuple).unwrap_or(false),
            AnyRelation::Rat(r) => r.contains(tuple).unwrap_or(false),
        }
    }
}

/// Textbook suffix test, independent of any automaton.
pub fn is_suffix(u: &[Symbol], v: &[Symbol]) -> bool {
    u.len() <= v.len() && v[v.len() - u.len()..] == *u
}

/// Textbook prefix test.
pub fn is_prefix(u: &[Symbol], v: &[Symbol]) -> bool {
    u.len() <= v.len() && v[..u.len()] == *u
}

/// Textbook contiguous-factor test.
pub fn is_subword(u: &[Symbol], v: &[Symbol]) -> bool {
    u.is_empty() || v.windows(u.len()).any(|w| w == &u[..])
}

/// Tuple ordering used by the enumerators: nondecreasing total length,
/// ties broken coordinatewise with each word compared shortlex.
fn tuple_cmp(a: &[Word], b: &[Word]) -> std::cmp::Ordering {
    let ta: usize = a.iter().map(Vec::len).sum();
    let tb: usize = b.iter().map(Vec::len).sum();
    ta.cmp(&tb).then_with(|| {
        for (u, v) in a.iter().zip(b) {
            let c = u.len().cmp(&v.len()).then_with(|| u.cmp(v));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// All words accepted by an arity-1 automaton, up to `max_len`.
pub fn words_of(nfa: &Nfa, max_len: usize) -> Vec<Word> {
    let nfa = if nfa.has_eps() {
        nfa.eliminate_epsilon()
    } else {
        nfa.clone()
    };
    let mut out: Vec<Word> = Vec::new();
    // stack of (prefix, live state set); dead branches are pruned
    let mut stack: Vec<(Word, BTreeSet<usize>)> = Vec::new();
    let start: BTreeSet<usize> = nfa.initial().iter().copied().collect();
    stack.push((Vec::new(), start));
    while let Some((prefix, states)) = stack.pop() {
        if states.iter().any(|&s| nfa.is_final(s)) {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            continue;
        }
        let mut by_symbol: std::collections::BTreeMap<Symbol, BTreeSet<usize>> =
            std::collections::BTreeMap::new();
        for &s in &states {
            for &(l, t) in nfa.transitions_from(s) {
                if let Some(sym) = nfa.letter(l).as_symbol() {
                    by_symbol.entry(sym.clone()).or_default().insert(t as usize);
                }
            }
        }
        for (sym, next) in by_symbol {
            let mut w = prefix.clone();
            w.push(sym);
            stack.push((w, next));
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Member tuples of one REC product with exact total length `total` and
/// every word at most `per_word` long. `word_lists[i][l]` holds the
/// coordinate-i words of exact length l.
fn product_stratum(word_lists: &[Vec<Vec<Word>>], per_word: usize, total: usize) -> Vec<Vec<Word>> {
    fn go(
        word_lists: &[Vec<Vec<Word>>],
        coord: usize,
        remaining: usize,
        per_word: usize,
        out: &mut Vec<Vec<Word>>,
        partial: &mut Vec<Word>,
    ) {
        let m = word_lists.len();
        if coord == m {
            debug_assert_eq!(remaining, 0);
            out.push(partial.clone());
            return;
        }
        let last = coord == m - 1;
        let max_here = remaining.min(per_word);
        for l in 0..=max_here {
            if last && l != remaining {
                continue;
            }
            if let Some(words) = word_lists[coord].get(l) {
                for w in words {
                    partial.push(w.clone());
                    go(word_lists, coord + 1, remaining - l, per_word, out, partial);
                    partial.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(word_lists, 0, total, per_word, &mut out, &mut Vec::new());
    out
}

/// Stratified enumeration of a recognizable relation: the per-product,
/// per-coordinate, per-exact-length word lists are computed once, then
/// each total-length stratum can be produced independently. Lets
/// searches stop at the stratum containing the first witness.
pub struct RecEnumerator {
    /// product -> coordinate -> exact length -> words
    lists: Vec<Vec<Vec<Vec<Word>>>>,
    per_word: usize,
}

impl RecEnumerator {
    pub fn new(rel: &RecRelation, per_word: usize) -> Self {
        let lists = rel
            .products()
            .iter()
            .map(|product| {
                product
                    .iter()
                    .map(|comp| {
                        let mut by_len: Vec<Vec<Word>> = vec![Vec::new(); per_word + 1];
                        for w in words_of(comp, per_word) {
                            by_len[w.len()].push(w);
                        }
                        by_len
                    })
                    .collect()
            })
            .collect();
        RecEnumerator { lists, per_word }
    }

    /// Member tuples of exact total length, deduplicated across
    /// products and sorted by the enumeration tie-break.
    pub fn stratum(&self, total: usize) -> Vec<Vec<Word>> {
        let mut set: BTreeSet<Vec<Word>> = BTreeSet::new();
        for product_lists in &self.lists {
            for t in product_stratum(product_lists, self.per_word, total) {
                set.insert(t);
            }
        }
        let mut out: Vec<Vec<Word>> = set.into_iter().collect();
        out.sort_by(|a, b| tuple_cmp(a, b));
        out
    }
}

/// All member tuples of a synchronized or multi-tape automaton within
/// the caps, by breadth-first search over (state, emitted tuple)
/// configurations. Pad and epsilon loops revisit configurations and are
/// cut off by the visited set.
fn automaton_members(
    nfa: &Nfa,
    arity: usize,
    per_word: usize,
    max_total: usize,
) -> BTreeSet<Vec<Word>> {
    let nfa = if nfa.has_eps() {
        nfa.eliminate_epsilon()
    } else {
        nfa.clone()
    };
    let mut members: BTreeSet<Vec<Word>> = BTreeSet::new();
    let mut seen: HashSet<(usize, Vec<Word>)> = HashSet::new();
    let mut queue: VecDeque<(usize, Vec<Word>)> = VecDeque::new();
    for &s in nfa.initial() {
        let cfg = (s, vec![Word::new(); arity]);
        if seen.insert(cfg.clone()) {
            queue.push_back(cfg);
        }
    }
    while let Some((state, words)) = queue.pop_front() {
        if nfa.is_final(state) {
            members.insert(words.clone());
        }
        let total: usize = words.iter().map(Vec::len).sum();
        for &(l, t) in nfa.transitions_from(state) {
            let letter = nfa.letter(l);
            let mut next = words.clone();
            let mut emitted = 0usize;
            let mut ok = true;
            for (i, track) in letter.tracks().iter().enumerate() {
                if let Track::Sym(s) = track {
                    if next[i].len() + 1 > per_word {
                        ok = false;
                        break;
                    }
                    next[i].push(s.clone());
                    emitted += 1;
                }
            }
            if !ok || total + emitted > max_total {
                continue;
            }
            let cfg = (t as usize, next);
            if seen.insert(cfg.clone()) {
                queue.push_back(cfg);
            }
        }
    }
    members
}

/// Every member tuple with total length at most `max_total`, yielded
/// exactly once in nondecreasing total length (ties broken
/// lexicographically, each coordinate compared shortlex). Each yielded
/// tuple is asserted against the relation's own membership operation.
pub fn enumerate_tuples<'a>(
    rel: AnyRelation<'a>,
    max_total: usize,
) -> impl Iterator<Item = Vec<Word>> + 'a {
    let collected = collect_members(rel, max_total, max_total);
    collected.into_iter().inspect(move |t| {
        assert!(
            rel.contains(t),
            "enumerated tuple {t:?} rejected by the relation's own membership"
        );
    })
}

/// Sorted member tuples with per-word and total caps.
pub(crate) fn collect_members(
    rel: AnyRelation<'_>,
    per_word: usize,
    max_total: usize,
) -> Vec<Vec<Word>> {
    let mut set: BTreeSet<Vec<Word>> = BTreeSet::new();
    match rel {
        AnyRelation::Rec(r) => {
            let strata = RecEnumerator::new(r, per_word.min(max_total));
            for total in 0..=max_total {
                set.extend(strata.stratum(total));
            }
        }
        AnyRelation::Reg(r) => {
            set = automaton_members(r.automaton(), r.arity(), per_word, max_total);
        }
        AnyRelation::Rat(r) => {
            set = automaton_members(r.automaton(), r.arity(), per_word, max_total);
        }
    }
    let mut out: Vec<Vec<Word>> = set.into_iter().collect();
    out.sort_by(|a, b| tuple_cmp(a, b));
    out
}

/// Result of a brute-force search: the first witness in enumeration
/// order, or nothing with the cap that was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub witness: Option<Vec<Word>>,
    pub exhausted_cap: usize,
}

/// The comparison side of a brute-force check: either a direct string
/// predicate or rational-relation membership.
#[derive(Clone, Copy)]
pub enum SOracle<'a> {
    Predicate(fn(&[Symbol], &[Symbol]) -> bool),
    Rat(&'a RatRelation),
}

impl<'a> SOracle<'a> {
    pub fn holds(&self, u: &[Symbol], v: &[Symbol]) -> bool {
        match self {
            SOracle::Predicate(f) => f(u, v),
            SOracle::Rat(r) => r.contains(&[u.to_vec(), v.to_vec()]).unwrap_or(false),
        }
    }
}

/// Decides the generalized intersection question by enumeration: the
/// first member tuple satisfying the comparison on every constraint
/// pair, searched up to the total-length cap.
pub fn brute_genint(
    rel: AnyRelation<'_>,
    constraints: &ConstraintSet,
    s: SOracle<'_>,
    max_total: usize,
) -> OracleResult {
    for tuple in enumerate_tuples(rel, max_total) {
        let ok = constraints
            .pairs()
            .all(|(i, j)| s.holds(&tuple[i - 1], &tuple[j - 1]));
        if ok {
            return OracleResult {
                witness: Some(tuple),
                exhausted_cap: max_total,
            };
        }
    }
    OracleResult {
        witness: None,
        exhausted_cap: max_total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{builtin, BuiltinRelation};
    use crate::symbol::{sym, word};

    #[test]
    fn direct_predicates() {
        assert!(is_suffix(&word("bc"), &word("abc")));
        assert!(!is_suffix(&word("ab"), &word("abc")));
        assert!(is_prefix(&word("ab"), &word("abc")));
        assert!(is_subword(&word("b"), &word("abc")));
        assert!(!is_subword(&word("ac"), &word("abc")));
        assert!(is_subword(&word(""), &word("")));
    }

    #[test]
    fn enumerates_equality_in_order() {
        let eq = match builtin("equality", &[sym("a")]).unwrap() {
            BuiltinRelation::Reg(r) => r,
            _ => unreachable!(),
        };
        let tuples: Vec<_> = enumerate_tuples(AnyRelation::Reg(&eq), 2).collect();
        assert_eq!(
            tuples,
            vec![vec![word(""), word("")], vec![word("a"), word("a")]]
        );
    }

    #[test]
    fn enumerates_rec_products() {
        let sigma = vec![sym("a"), sym("b")];
        let r = RecRelation::new(vec![vec![
            crate::regex::compile_regex("a", &sigma).unwrap(),
            crate::regex::compile_regex("b", &sigma).unwrap(),
        ]])
        .unwrap();
        let tuples: Vec<_> = enumerate_tuples(AnyRelation::Rec(&r), 2).collect();
        assert_eq!(tuples, vec![vec![word("a"), word("b")]]);
        let none: Vec<_> = enumerate_tuples(AnyRelation::Rec(&r), 1).collect();
        assert!(none.is_empty());
    }

    /// {(a^m, b^m a^k) : m, k >= 0} as a rational relation.
    fn matched_powers_with_tail() -> RatRelation {
        use crate::symbol::{Alphabet, Letter, Track};
        let ab = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
        let ea = Letter::tuple(vec![Track::Eps, Track::Sym(sym("a"))]);
        let nfa = Nfa::new(
            Alphabet::new(vec![ab.clone(), ea.clone()]),
            2,
            [0],
            [0, 1],
            [(0, ab, 0), (0, ea.clone(), 1), (1, ea, 1)],
            [],
        )
        .unwrap();
        RatRelation::new(2, nfa, vec![sym("a"), sym("b")]).unwrap()
    }

    #[test]
    fn brute_genint_finds_first_witness() {
        // subsequence constraint against matched powers: (eps, eps) wins
        let rel = matched_powers_with_tail();
        let i = ConstraintSet::new(2, [(1, 2)]);
        let res = brute_genint(
            AnyRelation::Rat(&rel),
            &i,
            SOracle::Predicate(crate::subseq::is_subsequence),
            4,
        );
        assert_eq!(res.witness, Some(vec![word(""), word("")]));

        let sigma = vec![sym("a"), sym("b")];
        let r = RecRelation::new(vec![vec![
            crate::regex::compile_regex("a", &sigma).unwrap(),
            crate::regex::compile_regex("b", &sigma).unwrap(),
        ]])
        .unwrap();
        let res = brute_genint(
            AnyRelation::Rec(&r),
            &i,
            SOracle::Predicate(crate::subseq::is_subsequence),
            4,
        );
        assert!(res.witness.is_none());
        assert_eq!(res.exhausted_cap, 4);
    }
}
