use std::collections::BTreeSet;
use std::fmt;

use super::DomainError;

/// A simple labeled graph on vertices `1..=vertices`.
///
/// Edges are stored as `(u, v)` with `u < v`, so the edge set is sorted and
/// free of duplicates by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    vertices: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn empty(vertices: u32) -> Self {
        Graph { vertices, edges: BTreeSet::new() }
    }

    pub fn from_edges<I>(vertices: u32, edges: I) -> Result<Self, DomainError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut graph = Graph::empty(vertices);
        for (u, v) in edges {
            graph.add_edge(u, v)?;
        }
        Ok(graph)
    }

    pub fn vertices(&self) -> u32 {
        self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    /// Adds a vertex and returns its label.
    pub fn add_vertex(&mut self) -> u32 {
        self.vertices += 1;
        self.vertices
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<(), DomainError> {
        if u == v {
            return Err(DomainError::InvalidElement(format!("self-loop at vertex {u}")));
        }
        if u == 0 || v == 0 || u > self.vertices || v > self.vertices {
            return Err(DomainError::InvalidElement(format!(
                "edge {u}-{v} outside vertex range 1..={}",
                self.vertices
            )));
        }
        let key = if u < v { (u, v) } else { (v, u) };
        if !self.edges.insert(key) {
            return Err(DomainError::InvalidElement(format!("duplicate edge {u}-{v}")));
        }
        Ok(())
    }
}

/// A value in some input set Ω, or a flagged auxiliary configuration.
///
/// Words are stored as ASCII letter bytes. For group alphabets a lowercase
/// letter is a generator and the matching uppercase letter is its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A single letter of a finite token set (e.g. Ω = {a, b}).
    Token(u8),
    Word(Vec<u8>),
    ReducedWord(Vec<u8>),
    Graph(Graph),
    /// Images `σ(1), …, σ(n)`, 1-based.
    Permutation(Vec<u32>),
    /// An intermediate configuration of a growth process. The wrapper is the
    /// flag: an `Aux` element is never a member of any domain. Its payload may
    /// be partial (e.g. an unfinished arrangement).
    Aux(Box<Element>),
}

/// Inverse of a group letter: swaps case.
pub fn inverse_letter(letter: u8) -> u8 {
    if letter.is_ascii_lowercase() {
        letter.to_ascii_uppercase()
    } else {
        letter.to_ascii_lowercase()
    }
}

/// True iff no adjacent pair `x x⁻¹` occurs.
pub fn is_freely_reduced(letters: &[u8]) -> bool {
    letters.windows(2).all(|w| w[1] != inverse_letter(w[0]))
}

/// `(# of generator) − (# of its inverse)` in `letters`.
pub fn exponent_sum(letters: &[u8], generator: u8) -> i64 {
    let inverse = inverse_letter(generator);
    letters.iter().fold(0i64, |acc, &l| {
        if l == generator {
            acc + 1
        } else if l == inverse {
            acc - 1
        } else {
            acc
        }
    })
}

impl Element {
    pub fn is_aux(&self) -> bool {
        matches!(self, Element::Aux(_))
    }

    pub fn aux(inner: Element) -> Self {
        Element::Aux(Box::new(inner))
    }

    /// Letters of a token, word or reduced word.
    pub fn letters(&self) -> Option<&[u8]> {
        match self {
            Element::Token(t) => Some(std::slice::from_ref(t)),
            Element::Word(w) | Element::ReducedWord(w) => Some(w),
            _ => None,
        }
    }

    /// Checks the variant's own structural invariants.
    pub fn check_invariants(&self) -> Result<(), DomainError> {
        if let Some(letters) = self.letters() {
            if letters.iter().any(|l| !l.is_ascii_alphabetic()) {
                return Err(DomainError::InvalidElement("letters must be ASCII alphabetic".into()));
            }
        }
        match self {
            Element::ReducedWord(w) if !is_freely_reduced(w) => Err(DomainError::InvalidElement(
                format!("word {} is not freely reduced", String::from_utf8_lossy(w)),
            )),
            Element::Graph(g) => {
                for (u, v) in g.edges() {
                    if u >= v || u == 0 || v > g.vertices() {
                        return Err(DomainError::InvalidElement(format!("bad edge {u}-{v}")));
                    }
                }
                if g.vertices() == 0 {
                    return Err(DomainError::InvalidElement("graph with no vertices".into()));
                }
                Ok(())
            }
            Element::Permutation(images) => {
                let n = images.len() as u32;
                let mut seen = vec![false; images.len()];
                for &i in images {
                    if i == 0 || i > n || std::mem::replace(&mut seen[(i - 1) as usize], true) {
                        return Err(DomainError::InvalidElement(format!(
                            "{images:?} is not a bijection of 1..={n}"
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Canonical text form: words as letter strings, graphs as
    /// `n;u-v,u-v` with sorted edges, permutations as comma-separated images.
    /// Auxiliary elements are prefixed with `aux:`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Token(t) => write!(f, "{}", *t as char),
            Element::Word(w) | Element::ReducedWord(w) => {
                f.write_str(std::str::from_utf8(w).map_err(|_| fmt::Error)?)
            }
            Element::Graph(g) => {
                write!(f, "{};", g.vertices())?;
                for (i, (u, v)) in g.edges().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{u}-{v}")?;
                }
                Ok(())
            }
            Element::Permutation(images) => {
                for (i, x) in images.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Element::Aux(inner) => write!(f, "aux:{inner}"),
        }
    }
}
