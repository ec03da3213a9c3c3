//! Constraint sets over tuple coordinates and their shape taxonomy.

use std::collections::BTreeSet;

/// Ordered constraint pairs over coordinates `1..=m`. A pair `(i,j)`
/// demands that the comparison relation hold between words `i` and `j`.
/// Pairs with `i == j` are kept but treated as degenerate: they never
/// contribute edges to the shape graphs and solvers route them through a
/// reflexivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    m: usize,
    pairs: BTreeSet<(usize, usize)>,
}

/// Shape classification; the strongest applicable label is returned, with
/// `UndirectedAcyclic` strictly inside `Dag`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    UndirectedAcyclic,
    Dag,
    Cyclic,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shape::UndirectedAcyclic => f.write_str("undirected-acyclic"),
            Shape::Dag => f.write_str("dag"),
            Shape::Cyclic => f.write_str("cyclic"),
        }
    }
}

impl ConstraintSet {
    /// Pairs are 1-based and must lie in `1..=m`.
    pub fn new(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(i, j) in &pairs {
            assert!(
                (1..=m).contains(&i) && (1..=m).contains(&j),
                "constraint pair ({i},{j}) out of range for arity {m}"
            );
        }
        ConstraintSet { m, pairs }
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The non-degenerate pairs (i != j).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied().filter(|&(i, j)| i != j)
    }

    pub fn degenerate(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs
            .iter()
            .copied()
            .filter(|&(i, j)| i == j)
            .map(|(i, _)| i)
    }

    /// Shape of the constraint graph. The undirected reading counts each
    /// ordered pair as its own edge, so `{(i,j),(j,i)}` forms a
    /// (multigraph) cycle; a plain cycle-free undirected graph is
    /// `UndirectedAcyclic`, a directed-acyclic edge set is `Dag`, and
    /// anything else `Cyclic`.
    pub fn shape(&self) -> Shape {
        if self.undirected_acyclic() {
            Shape::UndirectedAcyclic
        } else if self.directed_acyclic() {
            Shape::Dag
        } else {
            Shape::Cyclic
        }
    }

    fn undirected_acyclic(&self) -> bool {
        // union-find over {1..m}; a duplicated unordered pair or any
        // edge closing a component is a cycle
        let mut parent: Vec<usize> = (0..=self.m).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != c {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for (i, j) in self.edges() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                return false;
            }
            parent[ri] = rj;
        }
        true
    }

    fn directed_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Kahn's algorithm with smallest-index tie-breaking; `None` when
    /// the directed graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.m + 1];
        for (_, j) in self.edges() {
            indeg[j] += 1;
        }
        let mut ready: BTreeSet<usize> = (1..=self.m).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.m);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for (i, j) in self.edges() {
                if i == v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        (order.len() == self.m).then_some(order)
    }

    /// Predecessors of `v` among the non-degenerate edges.
    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        self.edges().filter(|&(_, j)| j == v).map(|(i, _)| i).collect()
    }
}

/// Spec-facing alias for [`ConstraintSet::shape`].
pub fn classify_shape(constraints: &ConstraintSet) -> Shape {
    constraints.shape()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_undirected_acyclic() {
        let i = ConstraintSet::new(3, [(1, 2), (2, 3)]);
        assert_eq!(i.shape(), Shape::UndirectedAcyclic);
    }

    #[test]
    fn triangle_is_dag() {
        let i = ConstraintSet::new(3, [(1, 2), (1, 3), (2, 3)]);
        assert_eq!(i.shape(), Shape::Dag);
        assert_eq!(i.topological_order(), Some(vec![1, 2, 3]));
    }

    #[test]
    fn two_cycle_is_cyclic() {
        let i = ConstraintSet::new(2, [(1, 2), (2, 1)]);
        assert_eq!(i.shape(), Shape::Cyclic);
    }

    #[test]
    fn degenerate_pairs_do_not_affect_shape() {
        let i = ConstraintSet::new(2, [(1, 1), (1, 2)]);
        assert_eq!(i.shape(), Shape::UndirectedAcyclic);
        assert_eq!(i.degenerate().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn empty_is_acyclic() {
        let i = ConstraintSet::new(4, []);
        assert_eq!(i.shape(), Shape::UndirectedAcyclic);
    }
}
