//! Subsequence-closed relations: closure-by-construction, the
//! polynomial-time intersection of two closed relations, and the
//! pipeline deciding intersection of a rational relation with a closed
//! one through the saturation-tree solver.
//!
//! A subsequence-closed automaton reads padded pairs projectively and
//! has, for every transition on (a,b) with a ≠ pad, a twin on (pad,b).
//! Closing an automaton this way closes the denoted relation downward
//! under subsequence in its first coordinate.

use crate::acyclic::{aligned_intersect, image_under, ImageDirection};
use crate::constraint::ConstraintSet;
use crate::error::SolveError;
use crate::nfa::{EmptinessResult, Nfa};
use crate::relation::{Decision, RatRelation, RegRelation};
use crate::subseq::{is_subsequence, tree_solve_with, TreeOptions};
use crate::symbol::{Alphabet, Letter, Symbol, Track, Word};

/// A binary projective synchronized relation whose automaton satisfies
/// the subsequence-closure condition.
#[derive(Clone, Debug)]
pub struct ScrRelation {
    rel: RegRelation,
    closed: bool,
}

impl ScrRelation {
    /// Wraps an automaton, recording whether it already satisfies the
    /// closure condition.
    pub fn new(automaton: Nfa, sigma: Vec<Symbol>) -> Result<Self, SolveError> {
        let closed = scr_check(&automaton);
        let rel = RegRelation::projective(2, automaton, sigma)?;
        Ok(ScrRelation { rel, closed })
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn relation(&self) -> &RegRelation {
        &self.rel
    }

    pub fn automaton(&self) -> &Nfa {
        self.rel.automaton()
    }

    pub fn sigma(&self) -> &[Symbol] {
        self.rel.sigma()
    }

    pub fn contains(&self, pair: &[Word]) -> Result<bool, crate::error::RelationError> {
        self.rel.contains(pair)
    }

    /// The same relation read asynchronously.
    pub fn to_rat(&self) -> RatRelation {
        self.rel.to_rat()
    }
}

/// Does every transition on (a,b) with a ≠ pad have its (pad,b) twin?
pub fn scr_check(nfa: &Nfa) -> bool {
    let mut present: std::collections::HashSet<(usize, Letter, usize)> =
        std::collections::HashSet::new();
    for q in 0..nfa.num_states() {
        for &(l, t) in nfa.transitions_from(q) {
            present.insert((q, nfa.letter(l).clone(), t as usize));
        }
    }
    for (q, letter, t) in present.iter() {
        if letter.arity() != 2 {
            return false;
        }
        if !letter.track(0).is_pad() {
            let twin = Letter::tuple(vec![Track::Pad, letter.track(1).clone()]);
            if !present.contains(&(*q, twin, *t)) {
                return false;
            }
        }
    }
    true
}

/// Adds the missing (pad,b) twins; the result denotes the downward
/// subsequence closure of the input's first coordinate and always
/// passes [`scr_check`].
pub fn scr_close(nfa: &Nfa, sigma: Vec<Symbol>) -> Result<ScrRelation, SolveError> {
    let mut letters: Vec<Letter> = nfa.alphabet().letters().to_vec();
    let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
    for q in 0..nfa.num_states() {
        for &(l, t) in nfa.transitions_from(q) {
            let letter = nfa.letter(l).clone();
            if letter.arity() != 2 || letter.tracks().iter().any(Track::is_eps) {
                return Err(SolveError::Relation(
                    crate::error::RelationError::MixedArity,
                ));
            }
            if !letter.track(0).is_pad() {
                let twin = Letter::tuple(vec![Track::Pad, letter.track(1).clone()]);
                if !letters.contains(&twin) {
                    letters.push(twin.clone());
                }
                transitions.push((q, twin, t as usize));
            }
            transitions.push((q, letter, t as usize));
        }
    }
    let eps: Vec<(usize, usize)> = (0..nfa.num_states())
        .flat_map(|q| nfa.eps_from(q).iter().map(move |&t| (q, t as usize)))
        .collect();
    let closed = Nfa::new(
        Alphabet::new(letters),
        nfa.num_states(),
        nfa.initial().iter().copied(),
        nfa.finals().iter().copied(),
        transitions,
        eps,
    )?;
    assert!(scr_check(&closed), "closure output must pass the closure check");
    let rel = RegRelation::projective(2, closed, sigma)?;
    Ok(ScrRelation { rel, closed: true })
}

/// Intersection of two closed relations: any common pair shrinks to
/// (ε, w), so it suffices to intersect the pad-only first-track slices.
pub fn int_scr_scr(a: &ScrRelation, b: &ScrRelation) -> Result<Decision, SolveError> {
    if !a.closed || !b.closed {
        return Err(SolveError::NotClosed);
    }
    // keep only transitions whose first track is pad, relabeled to the
    // second track alone
    let pad_slice = |r: &ScrRelation| -> Nfa {
        let nfa = r.automaton();
        let mut letters: Vec<Letter> = Vec::new();
        let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
        for q in 0..nfa.num_states() {
            for &(l, t) in nfa.transitions_from(q) {
                let letter = nfa.letter(l);
                if letter.track(0).is_pad() {
                    let out = Letter::tuple(vec![letter.track(1).clone()]);
                    if !letters.contains(&out) {
                        letters.push(out.clone());
                    }
                    transitions.push((q, out, t as usize));
                }
            }
        }
        let eps: Vec<(usize, usize)> = (0..nfa.num_states())
            .flat_map(|q| nfa.eps_from(q).iter().map(move |&t| (q, t as usize)))
            .collect();
        Nfa::new(
            Alphabet::new(letters),
            nfa.num_states(),
            nfa.initial().iter().copied(),
            nfa.finals().iter().copied(),
            transitions,
            eps,
        )
        .expect("slice automaton is well-formed")
    };
    let product = aligned_intersect(&pad_slice(a), &pad_slice(b))?;
    match product.is_empty() {
        EmptinessResult::Empty => Ok(Decision::Empty),
        EmptinessResult::NonEmpty(letters) => {
            let w: Word = letters
                .iter()
                .filter_map(|l| l.track(0).symbol().cloned())
                .collect();
            let witness = vec![Word::new(), w];
            assert!(
                a.contains(&witness).unwrap_or(false) && b.contains(&witness).unwrap_or(false),
                "pad-slice witness fails membership"
            );
            Ok(Decision::NonEmpty(witness))
        }
    }
}

/// Adds an all-pad self-loop on every state; the denoted projective
/// relation is unchanged, but any two acceptances with equal second
/// projections can then synchronize on an identical second track.
fn add_pad_loops(nfa: &Nfa, arity: usize) -> Nfa {
    let pad_letter = Letter::tuple(vec![Track::Pad; arity]);
    let widened = nfa.widen_alphabet(std::slice::from_ref(&pad_letter));
    let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
    for q in 0..widened.num_states() {
        for &(l, t) in widened.transitions_from(q) {
            transitions.push((q, widened.letter(l).clone(), t as usize));
        }
        transitions.push((q, pad_letter.clone(), q));
    }
    let eps: Vec<(usize, usize)> = (0..widened.num_states())
        .flat_map(|q| widened.eps_from(q).iter().map(move |&t| (q, t as usize)))
        .collect();
    Nfa::new(
        widened.alphabet().clone(),
        widened.num_states(),
        widened.initial().iter().copied(),
        widened.finals().iter().copied(),
        transitions,
        eps,
    )
    .expect("pad loops preserve well-formedness")
}

/// Outcome of [`int_rat_scr_with`].
pub struct ScrPipelineRun {
    pub decision: Decision,
    pub tree_nodes: u64,
}

/// Decides whether a binary rational relation meets a closed relation.
///
/// Pipeline: pad self-loops on both automata; a synchronized ternary
/// product (rat-side word, scr-side word, shared second track) accepting
/// triples whose pairs each automaton accepts; projection away of the
/// shared track; then the saturation-tree solver asking whether the
/// rat-side word embeds in the scr-side word. A yes-instance pins the
/// witness pair (rat-side word, common partner), which lies in both
/// relations since the closed one absorbs the smaller first coordinate.
pub fn int_rat_scr(a0: &RatRelation, a1: &ScrRelation) -> Result<Decision, SolveError> {
    int_rat_scr_with(a0, a1, &TreeOptions::default()).map(|run| run.decision)
}

pub fn int_rat_scr_with(
    a0: &RatRelation,
    a1: &ScrRelation,
    opts: &TreeOptions,
) -> Result<ScrPipelineRun, SolveError> {
    if a0.arity() != 2 {
        return Err(SolveError::NotBinary(a0.arity()));
    }
    if !a1.closed {
        return Err(SolveError::NotClosed);
    }
    let p_rat = add_pad_loops(a0.to_projective_reg().automaton(), 2);
    let p_scr = add_pad_loops(a1.automaton(), 2);

    // ternary synchronized product over (rat word, scr word, shared track)
    let id = |q0: usize, q1: usize| q0 * p_scr.num_states() + q1;
    let mut letters: Vec<Letter> = Vec::new();
    let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
    // scr transitions grouped by their shared-track component
    let mut scr_by_v: std::collections::HashMap<Track, Vec<(usize, Track, usize)>> =
        std::collections::HashMap::new();
    for q in 0..p_scr.num_states() {
        for &(l, t) in p_scr.transitions_from(q) {
            let letter = p_scr.letter(l);
            scr_by_v
                .entry(letter.track(1).clone())
                .or_default()
                .push((q, letter.track(0).clone(), t as usize));
        }
    }
    for q0 in 0..p_rat.num_states() {
        for &(l, t0) in p_rat.transitions_from(q0) {
            let letter = p_rat.letter(l);
            let (x_rat, v) = (letter.track(0).clone(), letter.track(1).clone());
            if let Some(scr_steps) = scr_by_v.get(&v) {
                for (q1, x_scr, t1) in scr_steps {
                    // the shared track is projected away immediately
                    let out = Letter::tuple(vec![x_rat.clone(), x_scr.clone()]);
                    if !letters.contains(&out) {
                        letters.push(out.clone());
                    }
                    transitions.push((id(q0, *q1), out, id(t0 as usize, *t1)));
                }
            }
        }
    }
    let initial: Vec<usize> = p_rat
        .initial()
        .iter()
        .flat_map(|&q0| p_scr.initial().iter().map(move |&q1| id(q0, q1)))
        .collect();
    let finals: Vec<usize> = p_rat
        .finals()
        .iter()
        .flat_map(|&q0| p_scr.finals().iter().map(move |&q1| id(q0, q1)))
        .collect();
    let product = Nfa::new(
        Alphabet::new(letters),
        p_rat.num_states() * p_scr.num_states(),
        initial,
        finals,
        transitions,
        [],
    )?;

    let mut sigma: Vec<Symbol> = a0.sigma().to_vec();
    for s in a1.sigma() {
        if !sigma.contains(s) {
            sigma.push(s.clone());
        }
    }
    let paired = RegRelation::projective(2, product, sigma)?;
    let constraints = ConstraintSet::new(2, [(1, 2)]);
    let run = tree_solve_with(&paired, &constraints, opts)?;
    let decision = match run.decision {
        Decision::Empty => Decision::Empty,
        Decision::NonEmpty(pair) => {
            let w_rat = pair[0].clone();
            // recover a partner second word shared by both relations
            let single = word_automaton_over(&w_rat, a0.sigma(), a1.sigma());
            let scr_rat = a1.to_rat();
            let img0 = image_under(&single, a0, ImageDirection::Forward)?;
            let img1 = image_under(&single, &scr_rat, ImageDirection::Forward)?;
            let both = aligned_intersect(&img0, &img1)?;
            match both.is_empty() {
                EmptinessResult::Empty => {
                    unreachable!("tree witness guarantees a shared partner word")
                }
                EmptinessResult::NonEmpty(letters) => {
                    let t: Word = letters
                        .iter()
                        .filter_map(|l| l.as_symbol().cloned())
                        .collect();
                    let witness = vec![w_rat, t];
                    assert!(
                        a0.contains(&witness).unwrap_or(false),
                        "pipeline witness fails the rational side"
                    );
                    assert!(
                        a1.contains(&witness).unwrap_or(false),
                        "pipeline witness fails the closed side"
                    );
                    assert!(is_subsequence(&pair[0], &pair[1]));
                    Decision::NonEmpty(witness)
                }
            }
        }
    };
    Ok(ScrPipelineRun {
        decision,
        tree_nodes: run.nodes,
    })
}

fn word_automaton_over(word: &[Symbol], sigma0: &[Symbol], sigma1: &[Symbol]) -> Nfa {
    let mut symbols: Vec<Symbol> = sigma0.to_vec();
    for s in sigma1.iter().chain(word.iter()) {
        if !symbols.contains(s) {
            symbols.push(s.clone());
        }
    }
    Nfa::word_automaton(Alphabet::of_symbols(&symbols), word).expect("word automaton")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::builtin;
    use crate::symbol::{sym, word};

    fn equality_nfa(sigma: &[Symbol]) -> Nfa {
        let letters: Vec<Letter> = sigma
            .iter()
            .map(|s| Letter::tuple(vec![Track::Sym(s.clone()), Track::Sym(s.clone())]))
            .collect();
        let transitions: Vec<(usize, Letter, usize)> =
            letters.iter().map(|l| (0usize, l.clone(), 0usize)).collect();
        Nfa::new(Alphabet::new(letters), 1, [0], [0], transitions, []).unwrap()
    }

    #[test]
    fn closure_check_and_idempotence() {
        let sigma = vec![sym("a"), sym("b")];
        let eq = equality_nfa(&sigma);
        assert!(!scr_check(&eq));
        let closed = scr_close(&eq, sigma.clone()).unwrap();
        assert!(scr_check(closed.automaton()));
        let twice = scr_close(closed.automaton(), sigma.clone()).unwrap();
        // closing twice adds nothing: same membership on small pairs
        for (u, v) in [("", ""), ("a", "aa"), ("aa", "a"), ("ab", "ab"), ("b", "ab")] {
            assert_eq!(
                closed.contains(&[word(u), word(v)]).unwrap(),
                twice.contains(&[word(u), word(v)]).unwrap(),
                "({u},{v})"
            );
        }
        // pad-only automata pass vacuously
        let pad_only = {
            let l = Letter::tuple(vec![Track::Pad, Track::Sym(sym("a"))]);
            Nfa::new(
                Alphabet::new(vec![l.clone()]),
                1,
                [0],
                [0],
                [(0, l, 0)],
                [],
            )
            .unwrap()
        };
        assert!(scr_check(&pad_only));
    }

    #[test]
    fn closure_of_equality_is_subsequence_on_unary_alphabet() {
        let sigma = vec![sym("a")];
        let closed = scr_close(&equality_nfa(&sigma), sigma).unwrap();
        assert!(closed.contains(&[word("a"), word("aaa")]).unwrap());
        assert!(!closed.contains(&[word("aa"), word("a")]).unwrap());
        assert!(closed.contains(&[word(""), word("")]).unwrap());
    }

    #[test]
    fn closed_intersection_via_pad_slices() {
        let sigma = vec![sym("a"), sym("b")];
        let a = scr_close(&equality_nfa(&[sym("a")]), vec![sym("a")]).unwrap();
        // {(a^n, b^n)} closed
        let anbn = {
            let l = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
            Nfa::new(
                Alphabet::new(vec![l.clone()]),
                1,
                [0],
                [0],
                [(0, l, 0)],
                [],
            )
            .unwrap()
        };
        let b = scr_close(&anbn, sigma).unwrap();
        let d = int_scr_scr(&a, &b).unwrap();
        assert_eq!(d, Decision::NonEmpty(vec![word(""), word("")]));

        // disjoint second coordinates with no empty member: empty
        let only = |x: &str, y: &str| {
            let l = Letter::tuple(vec![Track::Sym(sym(x)), Track::Sym(sym(y))]);
            Nfa::new(
                Alphabet::new(vec![l.clone()]),
                2,
                [0],
                [1],
                [(0, l, 1)],
                [],
            )
            .unwrap()
        };
        let pa = scr_close(&only("a", "b"), vec![sym("a"), sym("b")]).unwrap();
        let pb = scr_close(&only("a", "c"), vec![sym("a"), sym("c")]).unwrap();
        assert_eq!(int_scr_scr(&pa, &pb).unwrap(), Decision::Empty);

        // an unclosed operand is rejected
        let raw = ScrRelation::new(equality_nfa(&[sym("a")]), vec![sym("a")]).unwrap();
        assert!(matches!(
            int_scr_scr(&raw, &pa),
            Err(SolveError::NotClosed)
        ));
    }

    fn rat_pair(u: &str, v: &str) -> RatRelation {
        // the single pair (u, v) as a rational relation
        let uw = word(u);
        let vw = word(v);
        let mut sigma: Vec<Symbol> = Vec::new();
        for s in uw.iter().chain(vw.iter()) {
            if !sigma.contains(s) {
                sigma.push(s.clone());
            }
        }
        if sigma.is_empty() {
            sigma.push(sym("a"));
        }
        let len = uw.len().max(vw.len());
        let mut letters: Vec<Letter> = Vec::new();
        let mut transitions = Vec::new();
        for k in 0..len {
            let tr = |w: &Word, k: usize| {
                w.get(k).map_or(Track::Eps, |s| Track::Sym(s.clone()))
            };
            let l = Letter::tuple(vec![tr(&uw, k), tr(&vw, k)]);
            if !letters.contains(&l) {
                letters.push(l.clone());
            }
            transitions.push((k, l, k + 1));
        }
        if letters.is_empty() {
            letters.push(Letter::tuple(vec![Track::Eps, Track::Sym(sym("a"))]));
        }
        let nfa = Nfa::new(
            Alphabet::new(letters),
            len + 1,
            [0],
            [len],
            transitions,
            [],
        )
        .unwrap();
        RatRelation::new(2, nfa, sigma).unwrap()
    }

    #[test]
    fn rational_versus_closed_pipeline() {
        let sub_on_a = scr_close(&equality_nfa(&[sym("a")]), vec![sym("a")]).unwrap();

        let d = int_rat_scr(&rat_pair("a", "aa"), &sub_on_a).unwrap();
        assert_eq!(d, Decision::NonEmpty(vec![word("a"), word("aa")]));

        let d = int_rat_scr(&rat_pair("aa", "a"), &sub_on_a).unwrap();
        assert_eq!(d, Decision::Empty);

        // {(a^n, b^n)} closed meets {(a, b)}: a ⊑ a, so (a,b) is a member
        let anbn = {
            let l = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
            Nfa::new(
                Alphabet::new(vec![l.clone()]),
                1,
                [0],
                [0],
                [(0, l, 0)],
                [],
            )
            .unwrap()
        };
        let closed = scr_close(&anbn, vec![sym("a"), sym("b")]).unwrap();
        let d = int_rat_scr(&rat_pair("a", "b"), &closed).unwrap();
        assert_eq!(d, Decision::NonEmpty(vec![word("a"), word("b")]));
    }

    #[test]
    fn subsequence_itself_is_the_closed_equality() {
        // the builtin and the closure agree on small pairs
        let sigma = vec![sym("a"), sym("b")];
        let closed = scr_close(&equality_nfa(&sigma), sigma.clone()).unwrap();
        let sub = builtin("subsequence", &sigma).unwrap().into_rat();
        for u in ["", "a", "b", "ab", "ba", "aab"] {
            for v in ["", "a", "b", "ab", "ba", "aab"] {
                assert_eq!(
                    closed.contains(&[word(u), word(v)]).unwrap(),
                    sub.contains(&[word(u), word(v)]).unwrap(),
                    "({u},{v})"
                );
            }
        }
    }
}
