use super::element::{exponent_sum, Element};

/// A decidable subset `S ⊆ Ω`, given by a total predicate.
///
/// Group-theoretic sets such as `{w : w =_G 1}` are not decidable in
/// general; only decidable surrogates (e.g. `ExponentSumNonzero`, which
/// certifies non-membership in the kernel of `σ_t`) are offered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subset {
    All,
    Empty,
    /// Words (or tokens) whose first letter is the given one.
    StartsWith(u8),
    /// Words containing the given factor.
    ContainsFactor(Vec<u8>),
    /// Words with `σ_g(w) ≠ 0` for the given generator.
    ExponentSumNonzero(u8),
    /// Graphs with at least one edge.
    HasEdge,
    /// Permutations with at least one fixed point.
    HasFixedPoint,
    Not(Box<Subset>),
}

impl Subset {
    pub fn name(&self) -> &'static str {
        match self {
            Subset::All => "all",
            Subset::Empty => "empty",
            Subset::StartsWith(_) => "starts-with",
            Subset::ContainsFactor(_) => "contains-factor",
            Subset::ExponentSumNonzero(_) => "exponent-sum-nonzero",
            Subset::HasEdge => "has-edge",
            Subset::HasFixedPoint => "has-fixed-point",
            Subset::Not(_) => "not",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Subset::StartsWith(l) => format!("starts-with({})", *l as char),
            Subset::ContainsFactor(f) => format!("contains-factor({})", String::from_utf8_lossy(f)),
            Subset::ExponentSumNonzero(g) => format!("exponent-sum-nonzero({})", *g as char),
            Subset::Not(inner) => format!("not({})", inner.describe()),
            other => other.name().to_string(),
        }
    }

    /// Total membership test. Auxiliary elements belong to no subset.
    pub fn contains(&self, element: &Element) -> bool {
        if element.is_aux() {
            return false;
        }
        match self {
            Subset::All => true,
            Subset::Empty => false,
            Subset::StartsWith(l) => element.letters().and_then(|w| w.first()) == Some(l),
            Subset::ContainsFactor(f) => element
                .letters()
                .is_some_and(|w| f.is_empty() || w.windows(f.len()).any(|x| x == f.as_slice())),
            Subset::ExponentSumNonzero(g) => element.letters().is_some_and(|w| exponent_sum(w, *g) != 0),
            Subset::HasEdge => matches!(element, Element::Graph(g) if g.edge_count() > 0),
            Subset::HasFixedPoint => matches!(
                element,
                Element::Permutation(p) if p.iter().enumerate().any(|(i, &x)| x as usize == i + 1)
            ),
            Subset::Not(inner) => !inner.contains(element),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Graph;

    #[test]
    fn predicates() {
        let w = |s: &str| Element::Word(s.as_bytes().to_vec());
        assert!(Subset::StartsWith(b'a').contains(&w("ab")));
        assert!(!Subset::StartsWith(b'a').contains(&w("")));
        assert!(Subset::StartsWith(b'a').contains(&Element::Token(b'a')));
        assert!(Subset::ContainsFactor(b"aa".to_vec()).contains(&w("baab")));
        assert!(!Subset::ContainsFactor(b"aa".to_vec()).contains(&w("abab")));
        assert!(Subset::ExponentSumNonzero(b't').contains(&w("tab")));
        assert!(!Subset::ExponentSumNonzero(b't').contains(&w("taT")));
        assert!(Subset::HasEdge.contains(&Element::Graph(Graph::from_edges(2, [(1, 2)]).unwrap())));
        assert!(!Subset::HasEdge.contains(&Element::Graph(Graph::empty(3))));
        assert!(Subset::HasFixedPoint.contains(&Element::Permutation(vec![2, 1, 3])));
        assert!(!Subset::HasFixedPoint.contains(&Element::Permutation(vec![2, 3, 1])));
        assert!(Subset::Not(Box::new(Subset::Empty)).contains(&w("a")));
    }

    #[test]
    fn aux_is_never_a_member() {
        let aux = Element::aux(Element::Word(b"a".to_vec()));
        assert!(!Subset::All.contains(&aux));
        assert!(!Subset::Not(Box::new(Subset::Empty)).contains(&aux));
    }
}
