//! Subsequence machinery and the saturation-tree decision procedure for
//! generalized intersection with the subsequence relation over
//! synchronized automata of any constraint shape.
//!
//! The search explores the tree of automaton runs depth-first. Each node
//! carries, per constraint pair (i,j), the residual of coordinate i's
//! symbol projection against coordinate j's, recomputed from the branch
//! prefixes as the tree definition prescribes. A node with a final state
//! and all-empty residuals witnesses nonemptiness; a node dominated by a
//! same-state ancestor with componentwise subsequence-smaller residuals
//! is saturated and becomes a leaf. Higman's lemma, lifted to residual
//! tuples by the product ordering, makes every branch finite, so
//! exhausting the tree certifies emptiness.

use crate::constraint::ConstraintSet;
use crate::error::SolveError;
use crate::relation::{Decision, PaddingDiscipline, RegRelation};
use crate::symbol::{Symbol, Track, Word};

/// Greedy two-pointer embedding test: is `u` a subsequence of `v`?
pub fn is_subsequence(u: &[Symbol], v: &[Symbol]) -> bool {
    longest_embedded_prefix(u, v) == u.len()
}

/// Length of the longest prefix of `u` embeddable in `v`; greedy
/// matching is optimal for prefix maximality.
fn longest_embedded_prefix(u: &[Symbol], v: &[Symbol]) -> usize {
    let mut k = 0;
    for s in v {
        if k == u.len() {
            break;
        }
        if s == &u[k] {
            k += 1;
        }
    }
    k
}

/// The residual `u \ v`: what is left of `u` after removing its maximal
/// prefix that embeds into `v`. Empty exactly when `u` is a subsequence
/// of `v`.
pub fn subseq_residual(u: &[Symbol], v: &[Symbol]) -> Word {
    u[longest_embedded_prefix(u, v)..].to_vec()
}

/// Default node budget; generous for desk-scale instances. Overridable
/// per call and, in the CLI, via `RELKIT_NODE_BUDGET`.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Knobs for [`tree_solve_with`]. `Decision::Empty` is a certificate
/// only under the default configuration (saturation on, no depth cap);
/// switching saturation off or capping the depth turns the search into
/// a probe that can only report found / not found.
#[derive(Clone, Debug)]
pub struct TreeOptions {
    pub node_budget: u64,
    pub saturation: bool,
    pub depth_cap: Option<usize>,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            saturation: true,
            depth_cap: None,
        }
    }
}

/// Outcome of a tree search plus the number of nodes it visited.
#[derive(Clone, Debug)]
pub struct TreeRun {
    pub decision: Decision,
    pub nodes: u64,
}

/// Decides whether some tuple of the relation satisfies the subsequence
/// relation on every constraint pair. Both padding disciplines are
/// accepted: residuals are computed on symbol projections either way,
/// and under the strict discipline a final node additionally requires
/// its branch word to be a proper convolution.
pub fn tree_solve(rel: &RegRelation, constraints: &ConstraintSet) -> Result<Decision, SolveError> {
    tree_solve_with(rel, constraints, &TreeOptions::default()).map(|run| run.decision)
}

struct Frame {
    state: usize,
    /// residual per constraint pair, in constraint iteration order
    alphas: Vec<Word>,
    /// coordinates whose projection grew when this node's letter was read
    pushed: Vec<bool>,
    /// coordinates that have read padding up to this node
    padded: Vec<bool>,
    /// a symbol was read after padding somewhere on this branch
    improper: bool,
    next_child: usize,
    checked: bool,
}

pub fn tree_solve_with(
    rel: &RegRelation,
    constraints: &ConstraintSet,
    opts: &TreeOptions,
) -> Result<TreeRun, SolveError> {
    if rel.arity() != constraints.arity() {
        return Err(SolveError::ArityMismatch {
            relation: rel.arity(),
            constraints: constraints.arity(),
        });
    }
    let nfa = rel.automaton();
    let arity = rel.arity();
    let pairs: Vec<(usize, usize)> = constraints.pairs().collect();
    let strict = rel.discipline() == PaddingDiscipline::Strict;
    // Completing the automaton with a sink and then trimming useless
    // states cancel out: a sink can never reach a final state, so the
    // search simply skips transitions into non-coaccessible states.
    let coaccessible = nfa.coaccessible();

    let residuals = |projections: &[Word]| -> Vec<Word> {
        pairs
            .iter()
            .map(|&(i, j)| subseq_residual(&projections[i - 1], &projections[j - 1]))
            .collect()
    };

    let mut nodes: u64 = 0;
    let mut initials: Vec<usize> = nfa.initial().iter().copied().collect();
    initials.sort_unstable();

    for root in initials {
        if !coaccessible[root] {
            continue;
        }
        let mut projections: Vec<Word> = vec![Word::new(); arity];
        let mut stack: Vec<Frame> = vec![Frame {
            state: root,
            alphas: residuals(&projections),
            pushed: vec![false; arity],
            padded: vec![false; arity],
            improper: false,
            next_child: 0,
            checked: false,
        }];

        while !stack.is_empty() {
            let depth = stack.len() - 1;
            if !stack[depth].checked {
                stack[depth].checked = true;
                nodes += 1;
                if nodes > opts.node_budget {
                    return Err(SolveError::NodeBudgetExceeded {
                        budget: opts.node_budget,
                        expanded: nodes,
                    });
                }
                let top = &stack[depth];
                let is_final = nfa.is_final(top.state)
                    && top.alphas.iter().all(Word::is_empty)
                    && (!strict || !top.improper);
                if is_final {
                    let witness = projections.clone();
                    assert!(
                        rel.contains(&witness).unwrap_or(false),
                        "tree witness fails relation membership"
                    );
                    for &(i, j) in &pairs {
                        assert!(
                            is_subsequence(&witness[i - 1], &witness[j - 1]),
                            "tree witness fails constraint ({i},{j})"
                        );
                    }
                    return Ok(TreeRun {
                        decision: Decision::NonEmpty(witness),
                        nodes,
                    });
                }
                let saturated = opts.saturation
                    && stack[..depth].iter().any(|anc| {
                        anc.state == stack[depth].state
                            && anc
                                .alphas
                                .iter()
                                .zip(&stack[depth].alphas)
                                .all(|(a, b)| is_subsequence(a, b))
                    });
                if saturated || opts.depth_cap.is_some_and(|cap| depth >= cap) {
                    pop(&mut stack, &mut projections);
                    continue;
                }
            }

            let transitions = nfa.transitions_from(stack[depth].state);
            let child = stack[depth].next_child;
            if child >= transitions.len() {
                pop(&mut stack, &mut projections);
                continue;
            }
            stack[depth].next_child += 1;
            let (letter_idx, target) = transitions[child];
            if !coaccessible[target as usize] {
                continue;
            }
            let letter = nfa.letter(letter_idx).clone();
            let mut pushed = vec![false; arity];
            let mut padded = stack[depth].padded.clone();
            let mut improper = stack[depth].improper;
            for (i, t) in letter.tracks().iter().enumerate() {
                match t {
                    Track::Sym(s) => {
                        if padded[i] {
                            improper = true;
                        }
                        projections[i].push(s.clone());
                        pushed[i] = true;
                    }
                    Track::Pad => padded[i] = true,
                    Track::Eps => {}
                }
            }
            let alphas = residuals(&projections);
            stack.push(Frame {
                state: target as usize,
                alphas,
                pushed,
                padded,
                improper,
                next_child: 0,
                checked: false,
            });
        }
    }

    Ok(TreeRun {
        decision: Decision::Empty,
        nodes,
    })
}

fn pop(stack: &mut Vec<Frame>, projections: &mut [Word]) {
    if let Some(f) = stack.pop() {
        for (i, pushed) in f.pushed.iter().enumerate() {
            if *pushed {
                projections[i].pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{builtin, BuiltinRelation, RatRelation, RegRelation};
    use crate::symbol::{sym, word, Alphabet, Letter};

    #[test]
    fn residual_examples() {
        assert_eq!(subseq_residual(&word("abc"), &word("axbxc")), word(""));
        assert_eq!(subseq_residual(&word("ba"), &word("ab")), word("a"));
        assert_eq!(subseq_residual(&word(""), &word("ab")), word(""));
    }

    #[test]
    fn embedding_examples() {
        assert!(is_subsequence(&word("ac"), &word("abc")));
        assert!(!is_subsequence(&word("ca"), &word("abc")));
        assert!(is_subsequence(&word(""), &word("")));
    }

    #[test]
    fn residual_empty_iff_subsequence_exhaustive() {
        let sigma = [sym("a"), sym("b")];
        let mut words: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &layer {
                for s in &sigma {
                    let mut v = w.clone();
                    v.push(s.clone());
                    next.push(v);
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        for u in &words {
            for v in &words {
                assert_eq!(
                    subseq_residual(u, v).is_empty(),
                    is_subsequence(u, v),
                    "u={u:?} v={v:?}"
                );
            }
        }
    }

    fn equality_reg() -> RegRelation {
        match builtin("equality", &[sym("a"), sym("b")]).unwrap() {
            BuiltinRelation::Reg(r) => r,
            _ => unreachable!(),
        }
    }

    #[test]
    fn root_can_be_final() {
        let i = ConstraintSet::new(2, [(1, 2)]);
        let d = tree_solve(&equality_reg(), &i).unwrap();
        assert_eq!(d, Decision::NonEmpty(vec![word(""), word("")]));
    }

    #[test]
    fn finds_witness_through_mixed_blocks() {
        // {(a^m, b^m a^k)}: intersect with subsequence is nonempty
        let ab = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
        let pa = Letter::tuple(vec![Track::Pad, Track::Sym(sym("a"))]);
        let nfa = crate::nfa::Nfa::new(
            Alphabet::new(vec![ab.clone(), pa.clone()]),
            2,
            [0],
            [1],
            [(0, ab.clone(), 0), (0, pa.clone(), 1), (1, pa, 1)],
            [],
        )
        .unwrap();
        let rel = RegRelation::strict(2, nfa, vec![sym("a"), sym("b")]).unwrap();
        let i = ConstraintSet::new(2, [(1, 2)]);
        let d = tree_solve(&rel, &i).unwrap();
        let w = d.witness().expect("nonempty").to_vec();
        assert!(is_subsequence(&w[0], &w[1]));
        assert!(rel.contains(&w).unwrap());
        // pairs like (aa, bbaa) are members; the witness must be one
        assert!(!w[1].is_empty());
    }

    #[test]
    fn certifies_emptiness_for_length_preserving_mismatch() {
        // {(a^{n+1}, b^{n+1})}: no first word embeds in the second
        let ab = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
        let nfa = crate::nfa::Nfa::new(
            Alphabet::new(vec![ab.clone()]),
            2,
            [0],
            [1],
            [(0, ab.clone(), 1), (1, ab, 1)],
            [],
        )
        .unwrap();
        let rel = RegRelation::strict(2, nfa, vec![sym("a"), sym("b")]).unwrap();
        let i = ConstraintSet::new(2, [(1, 2)]);
        assert_eq!(tree_solve(&rel, &i).unwrap(), Decision::Empty);
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let i = ConstraintSet::new(2, [(1, 2)]);
        let r = {
            // (a,b)-loop relation has an infinite tree without saturation
            let ab = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
            let nfa = crate::nfa::Nfa::new(
                Alphabet::new(vec![ab.clone()]),
                2,
                [0],
                [1],
                [(0, ab.clone(), 1), (1, ab, 1)],
                [],
            )
            .unwrap();
            RegRelation::strict(2, nfa, vec![sym("a"), sym("b")]).unwrap()
        };
        let opts = TreeOptions {
            node_budget: 3,
            saturation: false,
            depth_cap: None,
        };
        assert!(matches!(
            tree_solve_with(&r, &i, &opts),
            Err(SolveError::NodeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn projective_inputs_are_accepted() {
        // subsequence builtin as a projective synchronized relation
        let rat: RatRelation = builtin("subsequence", &[sym("a")]).unwrap().into_rat();
        let proj = rat.to_projective_reg();
        let i = ConstraintSet::new(2, [(2, 1)]);
        // require second ⊑ first while the relation forces first ⊑ second:
        // only equal pairs remain, e.g. (ε, ε)
        let d = tree_solve(&proj, &i).unwrap();
        assert_eq!(d, Decision::NonEmpty(vec![word(""), word("")]));
    }
}
