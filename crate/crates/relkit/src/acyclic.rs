//! Generalized intersection for recognizable relations with a binary
//! rational comparison over undirected-acyclic constraint graphs.
//!
//! Instead of materializing one big multi-tape product, the solver
//! repeatedly eliminates a leaf coordinate of the constraint forest,
//! folding it into its neighbor as an image language (the image of a
//! regular language under a rational transduction is regular). When no
//! edges remain, every coordinate language must be nonempty; witnesses
//! are reconstructed by replaying the eliminations backwards against
//! single-word languages.

use crate::constraint::{ConstraintSet, Shape};
use crate::error::SolveError;
use crate::nfa::Nfa;
use crate::relation::{Decision, RatRelation, RecRelation};
use crate::symbol::{Alphabet, Letter, Symbol, Track, Word};

/// Which coordinate of the binary relation the input language binds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageDirection {
    /// `{ v : exists u in L with (u,v) in S }`
    Forward,
    /// `{ u : exists v in L with (u,v) in S }`
    Backward,
}

/// Image of a regular language under a binary rational relation, built
/// as the product of the language automaton with the relation automaton
/// projected to the other coordinate, followed by epsilon elimination.
pub fn image_under(
    lang: &Nfa,
    s: &RatRelation,
    direction: ImageDirection,
) -> Result<Nfa, SolveError> {
    if s.arity() != 2 {
        return Err(SolveError::NotBinary(s.arity()));
    }
    let lang = if lang.has_eps() {
        lang.eliminate_epsilon()
    } else {
        lang.clone()
    };
    let rel = s.automaton();
    let (input_coord, output_coord) = match direction {
        ImageDirection::Forward => (0usize, 1usize),
        ImageDirection::Backward => (1, 0),
    };

    // lang transitions grouped by symbol
    let mut lang_by_sym: Vec<std::collections::HashMap<Symbol, Vec<usize>>> =
        vec![Default::default(); lang.num_states()];
    for p in 0..lang.num_states() {
        for &(l, t) in lang.transitions_from(p) {
            if let Some(sym) = lang.letter(l).as_symbol() {
                lang_by_sym[p].entry(sym.clone()).or_default().push(t as usize);
            }
        }
    }

    let id = |p: usize, q: usize| p * rel.num_states() + q;
    let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
    let mut eps: Vec<(usize, usize)> = Vec::new();
    for q in 0..rel.num_states() {
        for &(l, q2) in rel.transitions_from(q) {
            let letter = rel.letter(l);
            let out = letter.track(output_coord).symbol().cloned();
            match letter.track(input_coord) {
                Track::Sym(a) => {
                    for p in 0..lang.num_states() {
                        if let Some(targets) = lang_by_sym[p].get(a) {
                            for &p2 in targets {
                                match &out {
                                    Some(b) => transitions.push((
                                        id(p, q),
                                        Letter::symbol(b.clone()),
                                        id(p2, q2 as usize),
                                    )),
                                    None => eps.push((id(p, q), id(p2, q2 as usize))),
                                }
                            }
                        }
                    }
                }
                Track::Eps => {
                    for p in 0..lang.num_states() {
                        match &out {
                            Some(b) => transitions.push((
                                id(p, q),
                                Letter::symbol(b.clone()),
                                id(p, q2 as usize),
                            )),
                            None => eps.push((id(p, q), id(p, q2 as usize))),
                        }
                    }
                }
                Track::Pad => {}
            }
        }
        for &q2 in rel.eps_from(q) {
            for p in 0..lang.num_states() {
                eps.push((id(p, q), id(p, q2 as usize)));
            }
        }
    }

    let mut sigma_letters: Vec<Letter> =
        s.sigma().iter().cloned().map(Letter::symbol).collect();
    for l in lang.alphabet().letters() {
        if !sigma_letters.contains(l) {
            sigma_letters.push(l.clone());
        }
    }
    let initial: Vec<usize> = lang
        .initial()
        .iter()
        .flat_map(|&p| rel.initial().iter().map(move |&q| id(p, q)))
        .collect();
    let finals: Vec<usize> = lang
        .finals()
        .iter()
        .flat_map(|&p| rel.finals().iter().map(move |&q| id(p, q)))
        .collect();
    let product = Nfa::new(
        Alphabet::new(sigma_letters),
        lang.num_states() * rel.num_states(),
        initial,
        finals,
        transitions,
        eps,
    )?;
    Ok(product.eliminate_epsilon())
}

/// Intersection of two plain languages whose alphabets may differ; each
/// side is widened to the union first, which leaves both languages
/// unchanged.
pub(crate) fn aligned_intersect(a: &Nfa, b: &Nfa) -> Result<Nfa, SolveError> {
    let wa = a.widen_alphabet(b.alphabet().letters());
    let wb = b.widen_alphabet(wa.alphabet().letters());
    Ok(wa.intersect(&wb)?)
}

struct Elimination {
    leaf: usize,
    other: usize,
    /// first coordinate of the constraint as stated: (first, ·) in S
    first: usize,
}

/// Decides the generalized intersection question for a recognizable
/// relation, a binary rational comparison, and an undirected-acyclic
/// constraint set, product by product. Degenerate pairs (i,i) are
/// admitted only when the comparison declares a reflexive diagonal, in
/// which case they constrain nothing.
pub fn solve_acyclic(
    rel: &RecRelation,
    s: &RatRelation,
    constraints: &ConstraintSet,
) -> Result<Decision, SolveError> {
    if s.arity() != 2 {
        return Err(SolveError::NotBinary(s.arity()));
    }
    if rel.arity() != constraints.arity() {
        return Err(SolveError::ArityMismatch {
            relation: rel.arity(),
            constraints: constraints.arity(),
        });
    }
    let shape = constraints.shape();
    if shape != Shape::UndirectedAcyclic {
        return Err(SolveError::ShapeViolation {
            required: "undirected-acyclic",
            got: shape.to_string(),
        });
    }
    for i in constraints.degenerate() {
        if !s.has_reflexive_diagonal() {
            return Err(SolveError::DegenerateConstraint(i));
        }
    }

    let m = rel.arity();
    for product in rel.products() {
        if let Some(witness) = solve_product(product, m, s, constraints)? {
            assert!(
                rel.contains(&witness).unwrap_or(false),
                "acyclic witness fails relation membership"
            );
            for (i, j) in constraints.pairs() {
                assert!(
                    s.contains(&[witness[i - 1].clone(), witness[j - 1].clone()])
                        .unwrap_or(false),
                    "acyclic witness fails constraint ({i},{j})"
                );
            }
            return Ok(Decision::NonEmpty(witness));
        }
    }
    Ok(Decision::Empty)
}

fn solve_product(
    product: &[Nfa],
    m: usize,
    s: &RatRelation,
    constraints: &ConstraintSet,
) -> Result<Option<Vec<Word>>, SolveError> {
    let mut langs: Vec<Nfa> = product.to_vec();
    let mut edges: Vec<(usize, usize)> = constraints.edges().collect();
    let mut eliminations: Vec<Elimination> = Vec::new();

    while !edges.is_empty() {
        let mut degree = vec![0usize; m + 1];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let leaf = (1..=m)
            .find(|&v| degree[v] == 1)
            .expect("a forest with edges has a leaf");
        let pos = edges
            .iter()
            .position(|&(i, j)| i == leaf || j == leaf)
            .expect("leaf has an incident edge");
        let (i, j) = edges.swap_remove(pos);
        let other = if i == leaf { j } else { i };
        let (direction, target) = if i == leaf {
            // constraint (leaf, other): fold leaf forward into other
            (ImageDirection::Forward, other)
        } else {
            (ImageDirection::Backward, other)
        };
        let image = image_under(&langs[leaf - 1], s, direction)?;
        langs[target - 1] = aligned_intersect(&langs[target - 1], &image)?;
        eliminations.push(Elimination {
            leaf,
            other,
            first: i,
        });
    }

    let mut words: Vec<Option<Word>> = vec![None; m + 1];
    let eliminated: std::collections::BTreeSet<usize> =
        eliminations.iter().map(|e| e.leaf).collect();
    for v in 1..=m {
        if eliminated.contains(&v) {
            continue;
        }
        match langs[v - 1].is_empty() {
            crate::nfa::EmptinessResult::Empty => return Ok(None),
            crate::nfa::EmptinessResult::NonEmpty(letters) => {
                words[v] = Some(letters_to_word(&letters));
            }
        }
    }

    for e in eliminations.iter().rev() {
        let partner = words[e.other].clone().expect("partner assigned first");
        let alphabet = langs[e.leaf - 1].alphabet().clone();
        let single = Nfa::word_automaton(alphabet, &partner)
            .unwrap_or_else(|_| single_word_automaton(&partner));
        let direction = if e.leaf == e.first {
            // need w_leaf with (w_leaf, partner) in S
            ImageDirection::Backward
        } else {
            ImageDirection::Forward
        };
        let image = image_under(&single, s, direction)?;
        let pool = aligned_intersect(&langs[e.leaf - 1], &image)?;
        match pool.is_empty() {
            crate::nfa::EmptinessResult::NonEmpty(letters) => {
                words[e.leaf] = Some(letters_to_word(&letters));
            }
            crate::nfa::EmptinessResult::Empty => {
                unreachable!("elimination invariant guarantees a partner word")
            }
        }
    }

    Ok(Some(
        (1..=m)
            .map(|v| words[v].clone().expect("every coordinate assigned"))
            .collect(),
    ))
}

fn letters_to_word(letters: &[Letter]) -> Word {
    letters
        .iter()
        .map(|l| l.as_symbol().expect("component letters are symbols").clone())
        .collect()
}

/// Fallback when the partner word uses symbols outside the leaf
/// language's alphabet (possible after cross-alphabet images).
fn single_word_automaton(word: &[Symbol]) -> Nfa {
    let mut symbols: Vec<Symbol> = Vec::new();
    for s in word {
        if !symbols.contains(s) {
            symbols.push(s.clone());
        }
    }
    if symbols.is_empty() {
        // the empty word needs at least a placeholder alphabet
        return Nfa::new(
            Alphabet::new(vec![]),
            1,
            [0],
            [0],
            Vec::<(usize, Letter, usize)>::new(),
            [],
        )
        .expect("empty-word automaton");
    }
    Nfa::word_automaton(Alphabet::of_symbols(&symbols), word).expect("word automaton")
}
