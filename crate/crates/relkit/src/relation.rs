//! The four relation representations and their conversions.
//!
//! * [`RecRelation`] — finite union of products of regular languages.
//! * [`RegRelation`] — synchronized automaton reading padded tuples,
//!   either with strict end-padding or with projective semantics where
//!   pads may interleave and membership is read off the per-coordinate
//!   symbol projections.
//! * [`RatRelation`] — asynchronous multi-tape automaton whose letters
//!   are tuples over the symbols extended with epsilon.
//!
//! Subsequence-closed relations live in [`crate::scr`].

use std::collections::{HashSet, VecDeque};

use crate::error::RelationError;
use crate::nfa::Nfa;
use crate::symbol::{Alphabet, Letter, Symbol, Track, Word};

/// A word over tuple letters whose tracks are symbols or padding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleWord {
    arity: usize,
    letters: Vec<Letter>,
}

impl TupleWord {
    pub fn new(arity: usize, letters: Vec<Letter>) -> Result<Self, RelationError> {
        assert!(arity >= 1, "tuple words have arity >= 1");
        for l in &letters {
            if l.arity() != arity {
                return Err(RelationError::MixedArity);
            }
            if l.tracks().iter().any(Track::is_eps) {
                return Err(RelationError::MixedArity);
            }
        }
        Ok(TupleWord { arity, letters })
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    /// A proper convolution has padding only at the end of every
    /// coordinate projection.
    pub fn is_proper_convolution(&self) -> bool {
        (0..self.arity).all(|i| {
            let mut padded = false;
            for l in &self.letters {
                match l.track(i) {
                    Track::Pad => padded = true,
                    Track::Sym(_) if padded => return false,
                    _ => {}
                }
            }
            true
        })
    }
}

/// Pads the words to a common length and tuples them positionwise.
pub fn convolve(words: &[Word]) -> TupleWord {
    assert!(!words.is_empty(), "convolution needs arity >= 1");
    let len = words.iter().map(Vec::len).max().unwrap_or(0);
    let letters = (0..len)
        .map(|k| {
            Letter::tuple(
                words
                    .iter()
                    .map(|w| w.get(k).map_or(Track::Pad, |s| Track::Sym(s.clone())))
                    .collect(),
            )
        })
        .collect();
    TupleWord {
        arity: words.len(),
        letters,
    }
}

/// Inverse of [`convolve`] on proper convolutions.
pub fn deconvolve(tw: &TupleWord) -> Result<Vec<Word>, RelationError> {
    let mut words = vec![Vec::new(); tw.arity];
    for (i, out) in words.iter_mut().enumerate() {
        let mut padded = false;
        for l in &tw.letters {
            match l.track(i) {
                Track::Sym(s) => {
                    if padded {
                        return Err(RelationError::ImproperConvolution { coordinate: i + 1 });
                    }
                    out.push(s.clone());
                }
                Track::Pad => padded = true,
                Track::Eps => return Err(RelationError::ImproperConvolution { coordinate: i + 1 }),
            }
        }
    }
    Ok(words)
}

/// Drops the non-symbol tracks of coordinate `i` along a word.
pub fn projection(letters: &[Letter], i: usize) -> Word {
    letters
        .iter()
        .filter_map(|l| l.track(i).symbol().cloned())
        .collect()
}

/// Solver verdict with an optional witness tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    NonEmpty(Vec<Word>),
    Empty,
}

impl Decision {
    pub fn witness(&self) -> Option<&[Word]> {
        match self {
            Decision::NonEmpty(w) => Some(w),
            Decision::Empty => None,
        }
    }

    pub fn is_nonempty(&self) -> bool {
        matches!(self, Decision::NonEmpty(_))
    }
}

fn check_arity(expected: usize, got: usize) -> Result<(), RelationError> {
    if expected == got {
        Ok(())
    } else {
        Err(RelationError::ArityMismatch { expected, got })
    }
}

/// Shared configuration-space reachability: does the automaton accept
/// some word whose per-coordinate symbol projections equal `tuple`?
/// Tracks carrying `Pad` or `Eps` consume nothing.
pub(crate) fn projections_reachable(nfa: &Nfa, tuple: &[Word]) -> bool {
    let arity = tuple.len();
    let target: Vec<usize> = tuple.iter().map(Vec::len).collect();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut queue: VecDeque<(usize, Vec<usize>)> = VecDeque::new();
    for &s in nfa.initial() {
        let cfg = (s, vec![0usize; arity]);
        if seen.insert(cfg.clone()) {
            queue.push_back(cfg);
        }
    }
    while let Some((state, pos)) = queue.pop_front() {
        if nfa.is_final(state) && pos == target {
            return true;
        }
        'next: for &(l, t) in nfa.transitions_from(state) {
            let letter = nfa.letter(l);
            let mut npos = pos.clone();
            for i in 0..arity {
                if let Track::Sym(s) = letter.track(i) {
                    if npos[i] >= target[i] || &tuple[i][npos[i]] != s {
                        continue 'next;
                    }
                    npos[i] += 1;
                }
            }
            let cfg = (t as usize, npos);
            if seen.insert(cfg.clone()) {
                queue.push_back(cfg);
            }
        }
        for &t in nfa.eps_from(state) {
            let cfg = (t as usize, pos.clone());
            if seen.insert(cfg.clone()) {
                queue.push_back(cfg);
            }
        }
    }
    false
}

/// Recognizable relation: a nonempty union of componentwise products of
/// regular languages sharing one symbol alphabet.
#[derive(Clone, Debug)]
pub struct RecRelation {
    arity: usize,
    sigma: Vec<Symbol>,
    products: Vec<Vec<Nfa>>,
}

impl RecRelation {
    pub fn new(products: Vec<Vec<Nfa>>) -> Result<Self, RelationError> {
        assert!(!products.is_empty(), "a recognizable relation has at least one product");
        let arity = products[0].len();
        assert!(arity >= 1, "products have arity >= 1");
        let alphabet = products[0][0].alphabet().clone();
        for product in &products {
            check_arity(arity, product.len())?;
            for comp in product {
                if !comp.alphabet().same_letters(&alphabet) {
                    return Err(RelationError::Nfa(crate::error::NfaError::AlphabetMismatch));
                }
            }
        }
        let sigma = alphabet.symbols();
        Ok(RecRelation {
            arity,
            sigma,
            products,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn sigma(&self) -> &[Symbol] {
        &self.sigma
    }

    pub fn products(&self) -> &[Vec<Nfa>] {
        &self.products
    }

    pub fn contains(&self, tuple: &[Word]) -> Result<bool, RelationError> {
        check_arity(self.arity, tuple.len())?;
        for product in &self.products {
            let mut all = true;
            for (comp, w) in product.iter().zip(tuple) {
                let ok = w
                    .iter()
                    .all(|s| comp.alphabet().contains(&Letter::symbol(s.clone())))
                    && comp.accepts_symbols(w).unwrap_or(false);
                if !ok {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Effective inclusion into the synchronized class: per product, the
    /// component automata run in lockstep and a component that has
    /// finished its word reads padding until all are done.
    pub fn to_reg(&self) -> RegRelation {
        let mut combined: Option<Nfa> = None;
        for product in &self.products {
            let synced = synchronize_product(product, self.arity);
            combined = Some(match combined {
                None => synced,
                Some(acc) => {
                    let wide_acc = acc.widen_alphabet(synced.alphabet().letters());
                    let wide_new = synced.widen_alphabet(wide_acc.alphabet().letters());
                    wide_acc.union(&wide_new).expect("aligned alphabets")
                }
            });
        }
        RegRelation {
            arity: self.arity,
            discipline: PaddingDiscipline::Strict,
            automaton: combined.expect("nonempty product list"),
            sigma: self.sigma.clone(),
            diagonal_reflexive: false,
        }
    }
}

/// Lockstep product of one REC product's components. Each component is
/// extended with a "done" phase entered from its final states by reading
/// padding; tuple letters that would be all padding are not emitted, so
/// accepted words are exactly the convolutions of member tuples.
fn synchronize_product(components: &[Nfa], arity: usize) -> Nfa {
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct Comp {
        state: usize,
        done: bool,
    }
    let comps: Vec<Nfa> = components
        .iter()
        .map(|c| if c.has_eps() { c.eliminate_epsilon() } else { c.clone() })
        .collect();

    let mut ids: std::collections::HashMap<Vec<Comp>, usize> = std::collections::HashMap::new();
    let mut order: Vec<Vec<Comp>> = Vec::new();
    let mut queue: VecDeque<Vec<Comp>> = VecDeque::new();

    let mut seeds: Vec<Vec<Comp>> = vec![Vec::new()];
    for comp in &comps {
        let mut next = Vec::new();
        for seed in &seeds {
            for &i in comp.initial() {
                let mut s = seed.clone();
                s.push(Comp {
                    state: i,
                    done: false,
                });
                next.push(s);
            }
        }
        seeds = next;
    }
    for seed in seeds {
        if !ids.contains_key(&seed) {
            ids.insert(seed.clone(), order.len());
            order.push(seed.clone());
            queue.push_back(seed);
        }
    }

    let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
    while let Some(cfg) = queue.pop_front() {
        let from = ids[&cfg];
        // per component: the moves it can make in this step
        let mut options: Vec<Vec<(Track, Comp)>> = Vec::with_capacity(arity);
        for (i, c) in cfg.iter().enumerate() {
            let mut opts: Vec<(Track, Comp)> = Vec::new();
            if !c.done {
                for &(l, t) in comps[i].transitions_from(c.state) {
                    if let Some(s) = comps[i].letter(l).as_symbol() {
                        opts.push((
                            Track::Sym(s.clone()),
                            Comp {
                                state: t as usize,
                                done: false,
                            },
                        ));
                    }
                }
                if comps[i].is_final(c.state) {
                    opts.push((
                        Track::Pad,
                        Comp {
                            state: c.state,
                            done: true,
                        },
                    ));
                }
            } else {
                opts.push((Track::Pad, c.clone()));
            }
            options.push(opts);
        }
        // cartesian choice of one move per component, skipping all-pad
        let mut stack: Vec<(Vec<Track>, Vec<Comp>)> = vec![(Vec::new(), Vec::new())];
        for opts in &options {
            let mut next = Vec::new();
            for (tracks, states) in &stack {
                for (tr, st) in opts {
                    let mut tracks = tracks.clone();
                    let mut states = states.clone();
                    tracks.push(tr.clone());
                    states.push(st.clone());
                    next.push((tracks, states));
                }
            }
            stack = next;
        }
        for (tracks, states) in stack {
            if tracks.iter().all(Track::is_pad) {
                continue;
            }
            let to = *ids.entry(states.clone()).or_insert_with(|| {
                order.push(states.clone());
                queue.push_back(states);
                order.len() - 1
            });
            transitions.push((from, Letter::tuple(tracks), to));
        }
    }

    let finals: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, cfg)| {
            cfg.iter()
                .enumerate()
                .all(|(i, c)| c.done || comps[i].is_final(c.state))
        })
        .map(|(i, _)| i)
        .collect();
    let initial: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, cfg)| {
            cfg.iter()
                .enumerate()
                .all(|(i, c)| !c.done && comps[i].initial().contains(&c.state))
        })
        .map(|(i, _)| i)
        .collect();
    let mut letters: Vec<Letter> = Vec::new();
    for (_, l, _) in &transitions {
        if !letters.contains(l) {
            letters.push(l.clone());
        }
    }
    Nfa::new(
        Alphabet::new(letters),
        order.len().max(1),
        if initial.is_empty() { vec![0] } else { initial },
        finals,
        transitions,
        [],
    )
    .expect("synchronized product is well-formed")
}

/// How a synchronized automaton's padded words are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaddingDiscipline {
    /// Every accepted word is a proper convolution; membership is
    /// acceptance of the convolution itself.
    Strict,
    /// Pads may interleave with symbols; the denoted tuples are the
    /// per-coordinate symbol projections of accepted words.
    Projective,
}

/// Relation accepted by a synchronized automaton over padded tuples.
#[derive(Clone, Debug)]
pub struct RegRelation {
    arity: usize,
    discipline: PaddingDiscipline,
    automaton: Nfa,
    sigma: Vec<Symbol>,
    diagonal_reflexive: bool,
}

impl RegRelation {
    /// Strict relation: the automaton is intersected with a padding
    /// checker, so every accepted word is a proper convolution with no
    /// all-padding letter. Downstream solvers may rely on this.
    pub fn strict(arity: usize, automaton: Nfa, sigma: Vec<Symbol>) -> Result<Self, RelationError> {
        validate_tuple_automaton(&automaton, arity, Track::is_eps)?;
        let checker = padding_checker(automaton.alphabet(), arity);
        let automaton = automaton.intersect(&checker)?;
        Ok(RegRelation {
            arity,
            discipline: PaddingDiscipline::Strict,
            automaton,
            sigma,
            diagonal_reflexive: false,
        })
    }

    /// Projective relation: any pad placement is allowed and membership
    /// goes through the coordinate projections.
    pub fn projective(
        arity: usize,
        automaton: Nfa,
        sigma: Vec<Symbol>,
    ) -> Result<Self, RelationError> {
        validate_tuple_automaton(&automaton, arity, Track::is_eps)?;
        Ok(RegRelation {
            arity,
            discipline: PaddingDiscipline::Projective,
            automaton,
            sigma,
            diagonal_reflexive: false,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn discipline(&self) -> PaddingDiscipline {
        self.discipline
    }

    pub fn automaton(&self) -> &Nfa {
        &self.automaton
    }

    pub fn sigma(&self) -> &[Symbol] {
        &self.sigma
    }

    /// Marks the relation as having a reflexive diagonal ((w,w) always a
    /// member); solvers use this only to admit degenerate constraint
    /// pairs (i,i).
    pub fn with_reflexive_diagonal(mut self) -> Self {
        self.diagonal_reflexive = true;
        self
    }

    pub fn has_reflexive_diagonal(&self) -> bool {
        self.diagonal_reflexive
    }

    pub fn contains(&self, tuple: &[Word]) -> Result<bool, RelationError> {
        check_arity(self.arity, tuple.len())?;
        match self.discipline {
            PaddingDiscipline::Strict => {
                let tw = convolve(tuple);
                if tw
                    .letters()
                    .iter()
                    .any(|l| !self.automaton.alphabet().contains(l))
                {
                    return Ok(false);
                }
                Ok(self.automaton.accepts(tw.letters())?)
            }
            PaddingDiscipline::Projective => Ok(projections_reachable(&self.automaton, tuple)),
        }
    }

    /// Effective inclusion into the asynchronous class: padding is
    /// relabeled to epsilon, which leaves the coordinate projections
    /// unchanged.
    pub fn to_rat(&self) -> RatRelation {
        let automaton = self.automaton.map_labels(|l| {
            Some(Letter::tuple(
                l.tracks()
                    .iter()
                    .map(|t| match t {
                        Track::Pad => Track::Eps,
                        other => other.clone(),
                    })
                    .collect(),
            ))
        });
        RatRelation {
            arity: self.arity,
            automaton,
            sigma: self.sigma.clone(),
            diagonal_reflexive: self.diagonal_reflexive,
        }
    }
}

/// Relation accepted by an asynchronous multi-tape automaton: each
/// transition consumes its named letters, epsilon tracks consume nothing.
#[derive(Clone, Debug)]
pub struct RatRelation {
    arity: usize,
    automaton: Nfa,
    sigma: Vec<Symbol>,
    diagonal_reflexive: bool,
}

impl RatRelation {
    pub fn new(arity: usize, automaton: Nfa, sigma: Vec<Symbol>) -> Result<Self, RelationError> {
        validate_tuple_automaton(&automaton, arity, Track::is_pad)?;
        Ok(RatRelation {
            arity,
            automaton,
            sigma,
            diagonal_reflexive: false,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn automaton(&self) -> &Nfa {
        &self.automaton
    }

    pub fn sigma(&self) -> &[Symbol] {
        &self.sigma
    }

    pub fn with_reflexive_diagonal(mut self) -> Self {
        self.diagonal_reflexive = true;
        self
    }

    pub fn has_reflexive_diagonal(&self) -> bool {
        self.diagonal_reflexive
    }

    /// Membership by reachability over (state, head positions)
    /// configurations.
    pub fn contains(&self, tuple: &[Word]) -> Result<bool, RelationError> {
        check_arity(self.arity, tuple.len())?;
        Ok(projections_reachable(&self.automaton, tuple))
    }

    /// The regular language of coordinate `i` (1-based), via relabeling
    /// and epsilon elimination.
    pub fn project(&self, i: usize) -> Result<Nfa, RelationError> {
        if i == 0 || i > self.arity {
            return Err(RelationError::CoordinateOutOfRange {
                arity: self.arity,
                got: i,
            });
        }
        let projected = self.automaton.map_labels(|l| match l.track(i - 1) {
            Track::Sym(s) => Some(Letter::symbol(s.clone())),
            _ => None,
        });
        let full: Vec<Letter> = self.sigma.iter().cloned().map(Letter::symbol).collect();
        Ok(projected.widen_alphabet(&full))
    }

    /// Reads the same automaton synchronously: epsilon relabeled to
    /// padding under projective semantics denotes the same relation.
    pub fn to_projective_reg(&self) -> RegRelation {
        let automaton = self.automaton.map_labels(|l| {
            Some(Letter::tuple(
                l.tracks()
                    .iter()
                    .map(|t| match t {
                        Track::Eps => Track::Pad,
                        other => other.clone(),
                    })
                    .collect(),
            ))
        });
        RegRelation {
            arity: self.arity,
            discipline: PaddingDiscipline::Projective,
            automaton,
            sigma: self.sigma.clone(),
            diagonal_reflexive: self.diagonal_reflexive,
        }
    }
}

fn validate_tuple_automaton(
    automaton: &Nfa,
    arity: usize,
    forbidden: impl Fn(&Track) -> bool,
) -> Result<(), RelationError> {
    assert!(arity >= 1, "relations have arity >= 1");
    for l in automaton.alphabet().letters() {
        if l.arity() != arity {
            return Err(RelationError::MixedArity);
        }
        if l.tracks().iter().any(&forbidden) {
            return Err(RelationError::MixedArity);
        }
    }
    Ok(())
}

/// Accepts exactly the proper convolutions over the given letters: once
/// a coordinate pads it stays padded, and all-padding letters are
/// rejected outright.
fn padding_checker(alphabet: &Alphabet, arity: usize) -> Nfa {
    assert!(arity <= 16, "padding checker supports arity <= 16");
    let n = 1usize << arity;
    let mut transitions: Vec<(usize, Letter, usize)> = Vec::new();
    for mask in 0..n {
        'letter: for l in alphabet.letters() {
            if l.is_all_pad() {
                continue;
            }
            let mut next = mask;
            for (i, t) in l.tracks().iter().enumerate() {
                match t {
                    Track::Pad => next |= 1 << i,
                    Track::Sym(_) => {
                        if mask & (1 << i) != 0 {
                            continue 'letter;
                        }
                    }
                    Track::Eps => continue 'letter,
                }
            }
            transitions.push((mask, l.clone(), next));
        }
    }
    Nfa::new(alphabet.clone(), n, [0], 0..n, transitions, [])
        .expect("padding checker is well-formed")
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "subsequence",
    "subword",
    "suffix",
    "prefix",
    "equality",
    "equal_length",
];

/// A built-in comparison relation, rational or regular depending on the
/// name.
#[derive(Clone, Debug)]
pub enum BuiltinRelation {
    Rat(RatRelation),
    Reg(RegRelation),
}

impl BuiltinRelation {
    pub fn into_rat(self) -> RatRelation {
        match self {
            BuiltinRelation::Rat(r) => r,
            BuiltinRelation::Reg(r) => r.to_rat(),
        }
    }
}

/// The comparison relations of everyday graph querying. `subsequence`,
/// `subword`, and `suffix` come back as rational relations built from
/// their defining expressions; `prefix`, `equality`, and `equal_length`
/// as strict regular relations. All have reflexive diagonals.
pub fn builtin(name: &str, sigma: &[Symbol]) -> Result<BuiltinRelation, RelationError> {
    assert!(!sigma.is_empty(), "builtins need a nonempty alphabet");
    let pair = |a: Track, b: Track| Letter::tuple(vec![a, b]);
    let esym = |s: &Symbol| Track::Sym(s.clone());
    match name {
        "subsequence" | "subseq" => {
            // ((eps,a) | (a,a))*
            let mut transitions = Vec::new();
            for s in sigma {
                transitions.push((0usize, pair(Track::Eps, esym(s)), 0usize));
                transitions.push((0, pair(esym(s), esym(s)), 0));
            }
            let letters: Vec<Letter> = transitions.iter().map(|(_, l, _)| l.clone()).collect();
            let nfa = Nfa::new(Alphabet::new(letters), 1, [0], [0], transitions, [])
                .expect("builtin automaton");
            Ok(BuiltinRelation::Rat(
                RatRelation::new(2, nfa, sigma.to_vec())?.with_reflexive_diagonal(),
            ))
        }
        "suffix" => {
            // (eps,a)* (a,a)*
            let mut transitions = Vec::new();
            for s in sigma {
                transitions.push((0usize, pair(Track::Eps, esym(s)), 0usize));
                transitions.push((0, pair(esym(s), esym(s)), 1));
                transitions.push((1, pair(esym(s), esym(s)), 1));
            }
            let letters: Vec<Letter> = transitions.iter().map(|(_, l, _)| l.clone()).collect();
            let nfa = Nfa::new(Alphabet::new(letters), 2, [0], [0, 1], transitions, [])
                .expect("builtin automaton");
            Ok(BuiltinRelation::Rat(
                RatRelation::new(2, nfa, sigma.to_vec())?.with_reflexive_diagonal(),
            ))
        }
        "subword" => {
            // (eps,a)* (a,a)* (eps,a)*
            let mut transitions = Vec::new();
            for s in sigma {
                transitions.push((0usize, pair(Track::Eps, esym(s)), 0usize));
                transitions.push((0, pair(esym(s), esym(s)), 1));
                transitions.push((1, pair(esym(s), esym(s)), 1));
                transitions.push((1, pair(Track::Eps, esym(s)), 2));
                transitions.push((2, pair(Track::Eps, esym(s)), 2));
                transitions.push((0, pair(Track::Eps, esym(s)), 2));
            }
            let letters: Vec<Letter> = transitions.iter().map(|(_, l, _)| l.clone()).collect();
            let nfa = Nfa::new(Alphabet::new(letters), 3, [0], [0, 1, 2], transitions, [])
                .expect("builtin automaton");
            Ok(BuiltinRelation::Rat(
                RatRelation::new(2, nfa, sigma.to_vec())?.with_reflexive_diagonal(),
            ))
        }
        "prefix" => {
            let mut transitions = Vec::new();
            for s in sigma {
                transitions.push((0usize, pair(esym(s), esym(s)), 0usize));
                transitions.push((0, pair(Track::Pad, esym(s)), 1));
                transitions.push((1, pair(Track::Pad, esym(s)), 1));
            }
            let letters: Vec<Letter> = transitions.iter().map(|(_, l, _)| l.clone()).collect();
            let nfa = Nfa::new(Alphabet::new(letters), 2, [0], [0, 1], transitions, [])
                .expect("builtin automaton");
            Ok(BuiltinRelation::Reg(
                RegRelation::strict(2, nfa, sigma.to_vec())?.with_reflexive_diagonal(),
            ))
        }
        "equality" => {
            let mut transitions = Vec::new();
            for s in sigma {
                transitions.push((0usize, pair(esym(s), esym(s)), 0usize));
            }
            let letters: Vec<Letter> = transitions.iter().map(|(_, l, _)| l.clone()).collect();
            let nfa = Nfa::new(Alphabet::new(letters), 1, [0], [0], transitions, [])
                .expect("builtin automaton");
            Ok(BuiltinRelation::Reg(
                RegRelation::strict(2, nfa, sigma.to_vec())?.with_reflexive_diagonal(),
            ))
        }
        "equal_length" => {
            let mut transitions = Vec::new();
            for a in sigma {
                for b in sigma {
                    transitions.push((0usize, pair(esym(a), esym(b)), 0usize));
                }
            }
            let letters: Vec<Letter> = transitions.iter().map(|(_, l, _)| l.clone()).collect();
            let nfa = Nfa::new(Alphabet::new(letters), 1, [0], [0], transitions, [])
                .expect("builtin automaton");
            Ok(BuiltinRelation::Reg(
                RegRelation::strict(2, nfa, sigma.to_vec())?.with_reflexive_diagonal(),
            ))
        }
        other => Err(RelationError::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::compile_regex;
    use crate::symbol::{sym, word};

    fn sigma_ab() -> Vec<Symbol> {
        vec![sym("a"), sym("b")]
    }

    /// All words over sigma of length <= max, shortlex order.
    fn all_words(sigma: &[Symbol], max: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &layer {
                for s in sigma {
                    let mut v = w.clone();
                    v.push(s.clone());
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn rec(products: &[&[&str]]) -> RecRelation {
        let sigma = sigma_ab();
        RecRelation::new(
            products
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|re| compile_regex(re, &sigma).unwrap())
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn convolve_pads_at_the_end() {
        let tw = convolve(&[word("ab"), word("a")]);
        assert_eq!(tw.len(), 2);
        assert_eq!(
            tw.letters()[0],
            Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("a"))])
        );
        assert_eq!(
            tw.letters()[1],
            Letter::tuple(vec![Track::Sym(sym("b")), Track::Pad])
        );
        assert!(tw.is_proper_convolution());

        let empty = convolve(&[word(""), word("")]);
        assert!(empty.is_empty());
        assert_eq!(deconvolve(&empty).unwrap(), vec![word(""), word("")]);
    }

    #[test]
    fn deconvolve_inverts_convolve() {
        let t = vec![word("ab"), word("a"), word("abc".trim_end_matches('c'))];
        let t = {
            let mut t = t;
            t[2] = word("abb");
            t
        };
        assert_eq!(deconvolve(&convolve(&t)).unwrap(), t);
    }

    #[test]
    fn deconvolve_rejects_pad_before_letter() {
        let tw = TupleWord::new(
            2,
            vec![
                Letter::tuple(vec![Track::Sym(sym("a")), Track::Pad]),
                Letter::tuple(vec![Track::Pad, Track::Sym(sym("a"))]),
            ],
        )
        .unwrap();
        assert!(!tw.is_proper_convolution());
        assert!(matches!(
            deconvolve(&tw),
            Err(RelationError::ImproperConvolution { coordinate: 2 })
        ));
    }

    #[test]
    fn rec_membership() {
        let r = rec(&[&["a", "ab"]]);
        assert!(r.contains(&[word("a"), word("ab")]).unwrap());
        assert!(!r.contains(&[word("a"), word("b")]).unwrap());
        let u = rec(&[&["a", "a"], &["b", "b"]]);
        assert!(u.contains(&[word("b"), word("b")]).unwrap());
        assert!(!u.contains(&[word("a"), word("b")]).unwrap());
        assert!(matches!(
            r.contains(&[word("a")]),
            Err(RelationError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn reg_builtin_membership() {
        let sigma = sigma_ab();
        let eq = match builtin("equality", &sigma).unwrap() {
            BuiltinRelation::Reg(r) => r,
            _ => unreachable!(),
        };
        assert!(eq.contains(&[word("ab"), word("ab")]).unwrap());
        assert!(!eq.contains(&[word("ab"), word("ba")]).unwrap());

        let pre = match builtin("prefix", &sigma).unwrap() {
            BuiltinRelation::Reg(r) => r,
            _ => unreachable!(),
        };
        assert!(pre.contains(&[word("a"), word("ab")]).unwrap());
        assert!(!pre.contains(&[word("b"), word("ab")]).unwrap());

        let el = match builtin("equal_length", &sigma).unwrap() {
            BuiltinRelation::Reg(r) => r,
            _ => unreachable!(),
        };
        assert!(el.contains(&[word("ab"), word("ba")]).unwrap());
        assert!(!el.contains(&[word("a"), word("ab")]).unwrap());
    }

    #[test]
    fn rat_builtin_membership() {
        let sigma = vec![sym("a"), sym("b"), sym("c")];
        let sub = builtin("subsequence", &sigma).unwrap().into_rat();
        assert!(sub.contains(&[word("ac"), word("abc")]).unwrap());
        assert!(!sub.contains(&[word("ca"), word("abc")]).unwrap());

        let subw = builtin("subword", &sigma).unwrap().into_rat();
        assert!(subw.contains(&[word("b"), word("abc")]).unwrap());
        assert!(!subw.contains(&[word("ac"), word("abc")]).unwrap());
        assert!(subw.contains(&[word("abc"), word("abc")]).unwrap());

        let suf = builtin("suffix", &sigma).unwrap().into_rat();
        assert!(suf.contains(&[word("bc"), word("abc")]).unwrap());
        assert!(!suf.contains(&[word("ab"), word("abc")]).unwrap());
        assert!(suf.contains(&[word(""), word("abc")]).unwrap());

        assert!(matches!(
            builtin("nope", &sigma),
            Err(RelationError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn rec_to_reg_small_cases() {
        let sigma = sigma_ab();
        let r = rec(&[&["a", "bb"]]);
        let reg = r.to_reg();
        // accepts exactly (a,b)(_,b)
        let tw = convolve(&[word("a"), word("bb")]);
        assert!(reg.automaton().accepts(tw.letters()).unwrap());
        assert!(reg.contains(&[word("a"), word("bb")]).unwrap());
        for t in [
            [word("a"), word("b")],
            [word(""), word("bb")],
            [word("a"), word("bbb")],
        ] {
            assert!(!reg.contains(&t).unwrap(), "{t:?}");
        }

        let e = RecRelation::new(vec![vec![
            compile_regex("ε", &sigma).unwrap(),
            compile_regex("ε", &sigma).unwrap(),
        ]])
        .unwrap();
        let ereg = e.to_reg();
        assert!(ereg.contains(&[word(""), word("")]).unwrap());
        assert!(!ereg.contains(&[word("a"), word("")]).unwrap());
    }

    #[test]
    fn rec_to_reg_membership_agrees_exhaustively() {
        let r = rec(&[&["a*b", "(a|b)*a"], &["ε|ba", "b*"]]);
        let reg = r.to_reg();
        let words = all_words(&sigma_ab(), 4);
        for u in &words {
            for v in &words {
                let t = [u.clone(), v.clone()];
                assert_eq!(
                    r.contains(&t).unwrap(),
                    reg.contains(&t).unwrap(),
                    "tuple {t:?}"
                );
            }
        }
    }

    #[test]
    fn reg_to_rat_membership_agrees_exhaustively() {
        let sigma = sigma_ab();
        for name in ["prefix", "equality"] {
            let reg = match builtin(name, &sigma).unwrap() {
                BuiltinRelation::Reg(r) => r,
                _ => unreachable!(),
            };
            let rat = reg.to_rat();
            let words = all_words(&sigma, 5);
            for u in &words {
                for v in &words {
                    let t = [u.clone(), v.clone()];
                    assert_eq!(
                        reg.contains(&t).unwrap(),
                        rat.contains(&t).unwrap(),
                        "{name} on {t:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn rat_projection_languages() {
        let sigma = sigma_ab();
        let subw = builtin("subword", &sigma).unwrap().into_rat();
        let first = subw.project(1).unwrap();
        for w in all_words(&sigma, 5) {
            assert!(first.accepts_symbols(&w).unwrap(), "{w:?}");
        }

        // {(a^n, b^n)}: coordinate 2 is b*
        let an_bn = same_count_relation();
        let second = an_bn.project(2).unwrap();
        for w in all_words(&sigma, 5) {
            let want = w.iter().all(|s| s == &sym("b"));
            assert_eq!(second.accepts_symbols(&w).unwrap(), want, "{w:?}");
        }

        let empty = RatRelation::new(
            2,
            Nfa::empty(Alphabet::new(vec![Letter::tuple(vec![
                Track::Sym(sym("a")),
                Track::Eps,
            ])])),
            sigma,
        )
        .unwrap();
        assert!(empty.project(1).unwrap().is_empty().is_empty());
        assert!(matches!(
            empty.project(3),
            Err(RelationError::CoordinateOutOfRange { .. })
        ));
    }

    /// {(a^n, b^n) : n >= 0} as a rational relation.
    pub(crate) fn same_count_relation() -> RatRelation {
        let l = Letter::tuple(vec![Track::Sym(sym("a")), Track::Sym(sym("b"))]);
        let nfa = Nfa::new(
            Alphabet::new(vec![l.clone()]),
            1,
            [0],
            [0],
            [(0, l, 0)],
            [],
        )
        .unwrap();
        RatRelation::new(2, nfa, sigma_ab()).unwrap()
    }

    #[test]
    fn strict_discipline_is_enforced_constructively() {
        // hand-built automaton that would accept a pad-before-letter word
        let a_pad = Letter::tuple(vec![Track::Sym(sym("a")), Track::Pad]);
        let pad_a = Letter::tuple(vec![Track::Pad, Track::Sym(sym("a"))]);
        let nfa = Nfa::new(
            Alphabet::new(vec![a_pad.clone(), pad_a.clone()]),
            3,
            [0],
            [2],
            [(0, a_pad.clone(), 1), (1, pad_a.clone(), 2)],
            [],
        )
        .unwrap();
        let strict = RegRelation::strict(2, nfa.clone(), sigma_ab()).unwrap();
        assert!(strict.automaton().is_empty().is_empty());
        let proj = RegRelation::projective(2, nfa, sigma_ab()).unwrap();
        assert!(proj.contains(&[word("a"), word("a")]).unwrap());
    }
}
