//! Input sets Ω, their size functions, and finite sphere enumeration.
//!
//! A sphere `S(n)` is the set of elements of size exactly `n`; the ball
//! `B(n)` is the union of spheres `0..=n`. The two are kept distinct
//! everywhere in this crate.

mod element;
mod subset;

use thiserror::Error;

pub use element::{exponent_sum, inverse_letter, is_freely_reduced, Element, Graph};
pub use subset::Subset;

/// Default per-sphere enumeration cap.
pub const DEFAULT_SPHERE_CAP: u128 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("element {element} does not belong to domain {domain}")]
    DomainMismatch { domain: String, element: String },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("integer overflow computing {0}")]
    Overflow(String),
    #[error("sphere of size {size} exceeds the enumeration cap of {cap} elements")]
    ResourceLimit { size: String, cap: u128 },
    #[error("invalid domain parameters: {0}")]
    InvalidParameters(String),
}

/// An ordered set of ASCII letters. Enumeration is lexicographic in this
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<u8>,
}

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self, DomainError> {
        let bytes = letters.as_bytes().to_vec();
        if bytes.is_empty() {
            return Err(DomainError::InvalidParameters("empty alphabet".into()));
        }
        if bytes.iter().any(|b| !b.is_ascii_alphabetic()) {
            return Err(DomainError::InvalidParameters(format!(
                "alphabet {letters:?} must consist of ASCII letters"
            )));
        }
        let mut sorted = bytes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != bytes.len() {
            return Err(DomainError::InvalidParameters(format!(
                "alphabet {letters:?} repeats a letter"
            )));
        }
        Ok(Alphabet { letters: bytes })
    }

    /// The first `m` lowercase letters.
    pub fn plain(m: usize) -> Result<Self, DomainError> {
        if m == 0 || m > 26 {
            return Err(DomainError::InvalidParameters(format!("alphabet size {m} not in 1..=26")));
        }
        Ok(Alphabet { letters: (b'a'..b'a' + m as u8).collect() })
    }

    /// Generators and their inverses, interleaved: `g₁ G₁ g₂ G₂ …`.
    pub fn signed(generators: &str) -> Result<Self, DomainError> {
        if generators.bytes().any(|g| !g.is_ascii_lowercase()) {
            return Err(DomainError::InvalidParameters(format!(
                "generators {generators:?} must be lowercase letters"
            )));
        }
        let letters: String = generators
            .chars()
            .flat_map(|g| [g, g.to_ascii_uppercase()])
            .collect();
        Alphabet::new(&letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.letters.contains(&letter)
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.letters).expect("alphabet is ASCII")
    }
}

/// `#B(n) = 1 + m + … + mⁿ = (m^{n+1} − 1)/(m − 1)` for the word domain
/// over an `m`-letter alphabet.
pub fn ball_cardinality(m: u64, n: u32) -> Result<u128, DomainError> {
    if m < 2 {
        return Err(DomainError::InvalidParameters(format!("alphabet size {m} < 2")));
    }
    let overflow = || DomainError::Overflow(format!("ball cardinality for m={m}, n={n}"));
    let power = (m as u128).checked_pow(n + 1).ok_or_else(overflow)?;
    Ok((power - 1) / (m as u128 - 1))
}

/// The built-in input domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// A finite token set; every token has size 1.
    Tokens(Alphabet),
    /// All words `A*`.
    Words(Alphabet),
    /// Freely reduced words over `{a₁..a_m}^{±1}`, generators named `a, b, …`.
    FreeGroup { rank: usize },
    /// Simple graphs on vertex set `{1..n}`; size is the vertex count.
    Graphs,
    /// Permutations of `{1..n}`; size is `n`.
    Permutations,
}

impl Domain {
    pub fn free_group(rank: usize) -> Result<Self, DomainError> {
        if rank == 0 || rank > 26 {
            return Err(DomainError::InvalidParameters(format!("free group rank {rank} not in 1..=26")));
        }
        Ok(Domain::FreeGroup { rank })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Tokens(_) => "tokens",
            Domain::Words(_) => "words",
            Domain::FreeGroup { .. } => "free-group",
            Domain::Graphs => "graphs",
            Domain::Permutations => "permutations",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Tokens(a) => format!("tokens({})", a.as_str()),
            Domain::Words(a) => format!("words({})", a.as_str()),
            Domain::FreeGroup { rank } => format!("free-group(rank={rank})"),
            Domain::Graphs => "graphs".into(),
            Domain::Permutations => "permutations".into(),
        }
    }

    /// The letter alphabet of word-like domains.
    pub fn alphabet(&self) -> Option<Alphabet> {
        match self {
            Domain::Tokens(a) | Domain::Words(a) => Some(a.clone()),
            Domain::FreeGroup { rank } => {
                let gens: String = (b'a'..b'a' + *rank as u8).map(char::from).collect();
                Some(Alphabet::signed(&gens).expect("rank checked"))
            }
            _ => None,
        }
    }

    /// Membership in Ω. Auxiliary elements are never members.
    pub fn contains(&self, element: &Element) -> bool {
        if element.check_invariants().is_err() {
            return false;
        }
        match (self, element) {
            (Domain::Tokens(a), Element::Token(t)) => a.contains(*t),
            (Domain::Words(a), Element::Word(w)) => w.iter().all(|&l| a.contains(l)),
            (Domain::FreeGroup { .. }, Element::ReducedWord(w)) => {
                let alphabet = self.alphabet().unwrap();
                w.iter().all(|&l| alphabet.contains(l))
            }
            (Domain::Graphs, Element::Graph(_)) => true,
            (Domain::Permutations, Element::Permutation(p)) => !p.is_empty(),
            _ => false,
        }
    }

    fn mismatch(&self, element: &Element) -> DomainError {
        DomainError::DomainMismatch { domain: self.describe(), element: element.to_text() }
    }

    /// The size function `|·|`.
    pub fn size_of(&self, element: &Element) -> Result<u64, DomainError> {
        if !self.contains(element) {
            return Err(self.mismatch(element));
        }
        Ok(match element {
            Element::Token(_) => 1,
            Element::Word(w) | Element::ReducedWord(w) => w.len() as u64,
            Element::Graph(g) => g.vertices() as u64,
            Element::Permutation(p) => p.len() as u64,
            Element::Aux(_) => unreachable!("aux elements are never members"),
        })
    }

    /// `#S(n)`, exact.
    pub fn sphere_size(&self, n: u32) -> Result<u128, DomainError> {
        let overflow = || DomainError::Overflow(format!("sphere size of {} at n={n}", self.describe()));
        match self {
            Domain::Tokens(a) => Ok(if n == 1 { a.len() as u128 } else { 0 }),
            Domain::Words(a) => (a.len() as u128).checked_pow(n).ok_or_else(overflow),
            Domain::FreeGroup { rank } => {
                if n == 0 {
                    return Ok(1);
                }
                let k = 2 * *rank as u128;
                (k - 1)
                    .checked_pow(n - 1)
                    .and_then(|p| p.checked_mul(k))
                    .ok_or_else(overflow)
            }
            Domain::Graphs => {
                if n == 0 {
                    return Ok(0);
                }
                let pairs = n as u64 * (n as u64 - 1) / 2;
                if pairs >= 128 {
                    return Err(overflow());
                }
                Ok(1u128 << pairs)
            }
            Domain::Permutations => {
                if n == 0 {
                    return Ok(0);
                }
                (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).ok_or_else(overflow)
            }
        }
    }

    /// `#B(n) = Σ_{k ≤ n} #S(k)`.
    pub fn ball_size(&self, n: u32) -> Result<u128, DomainError> {
        (0..=n).try_fold(0u128, |acc, k| {
            acc.checked_add(self.sphere_size(k)?)
                .ok_or_else(|| DomainError::Overflow(format!("ball size at n={n}")))
        })
    }

    fn check_cap(&self, n: u32, cap: u128) -> Result<u128, DomainError> {
        let size = self.sphere_size(n).map_err(|_| DomainError::ResourceLimit {
            size: format!("S({n}) of {} (overflows u128)", self.describe()),
            cap,
        })?;
        if size > cap {
            return Err(DomainError::ResourceLimit { size: size.to_string(), cap });
        }
        Ok(size)
    }

    /// Calls `visit` on every element of `S(n)` in enumeration order.
    ///
    /// Order: words lexicographic in alphabet order; graphs by ascending edge
    /// mask, bit `j` being the `j`-th pair of `(1,2), (1,3), …, (2,3), …`;
    /// permutations lexicographic.
    pub fn visit_sphere<F>(&self, n: u32, cap: u128, mut visit: F) -> Result<(), DomainError>
    where
        F: FnMut(Element),
    {
        self.check_cap(n, cap)?;
        match self {
            Domain::Tokens(a) => {
                if n == 1 {
                    a.letters().iter().for_each(|&t| visit(Element::Token(t)));
                }
            }
            Domain::Words(a) => {
                let mut buf = Vec::with_capacity(n as usize);
                visit_words(a.letters(), n as usize, &mut buf, &mut |w| visit(Element::Word(w.to_vec())));
            }
            Domain::FreeGroup { .. } => {
                let alphabet = self.alphabet().unwrap();
                let mut buf = Vec::with_capacity(n as usize);
                visit_reduced(alphabet.letters(), n as usize, &mut buf, &mut |w| {
                    visit(Element::ReducedWord(w.to_vec()))
                });
            }
            Domain::Graphs => {
                if n == 0 {
                    return Ok(());
                }
                let pairs: Vec<(u32, u32)> = (1..=n)
                    .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
                    .collect();
                for mask in 0u64..(1u64 << pairs.len()) {
                    let edges = pairs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| mask >> j & 1 == 1)
                        .map(|(_, &e)| e);
                    visit(Element::Graph(Graph::from_edges(n, edges).expect("valid pairs")));
                }
            }
            Domain::Permutations => {
                if n == 0 {
                    return Ok(());
                }
                let mut current: Vec<u32> = (1..=n).collect();
                loop {
                    visit(Element::Permutation(current.clone()));
                    if !next_permutation(&mut current) {
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    /// The elements of `S(n)`, in enumeration order.
    pub fn enumerate_sphere(&self, n: u32, cap: u128) -> Result<Vec<Element>, DomainError> {
        let mut out = Vec::with_capacity(self.check_cap(n, cap)? as usize);
        self.visit_sphere(n, cap, |e| out.push(e))?;
        Ok(out)
    }

    /// Parses the canonical text form of an element of this domain.
    pub fn parse_element(&self, text: &str) -> Result<Element, DomainError> {
        let bad = |why: &str| DomainError::InvalidElement(format!("{text:?}: {why}"));
        let element = match self {
            Domain::Tokens(_) => {
                let bytes = text.as_bytes();
                if bytes.len() != 1 {
                    return Err(bad("a token is a single letter"));
                }
                Element::Token(bytes[0])
            }
            Domain::Words(_) => Element::Word(text.as_bytes().to_vec()),
            Domain::FreeGroup { .. } => Element::ReducedWord(text.as_bytes().to_vec()),
            Domain::Graphs => {
                let (n, edges) = text.split_once(';').ok_or_else(|| bad("expected n;u-v,…"))?;
                let n: u32 = n.trim().parse().map_err(|_| bad("bad vertex count"))?;
                let mut graph = Graph::empty(n);
                for edge in edges.split(',').filter(|s| !s.trim().is_empty()) {
                    let (u, v) = edge.split_once('-').ok_or_else(|| bad("bad edge"))?;
                    let u = u.trim().parse().map_err(|_| bad("bad edge endpoint"))?;
                    let v = v.trim().parse().map_err(|_| bad("bad edge endpoint"))?;
                    graph.add_edge(u, v)?;
                }
                Element::Graph(graph)
            }
            Domain::Permutations => Element::Permutation(
                text.split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("bad image")))
                    .collect::<Result<_, _>>()?,
            ),
        };
        if !self.contains(&element) {
            return Err(self.mismatch(&element));
        }
        Ok(element)
    }
}

fn visit_words(letters: &[u8], n: usize, buf: &mut Vec<u8>, visit: &mut dyn FnMut(&[u8])) {
    if buf.len() == n {
        visit(buf);
        return;
    }
    for &l in letters {
        buf.push(l);
        visit_words(letters, n, buf, visit);
        buf.pop();
    }
}

fn visit_reduced(letters: &[u8], n: usize, buf: &mut Vec<u8>, visit: &mut dyn FnMut(&[u8])) {
    if buf.len() == n {
        visit(buf);
        return;
    }
    for &l in letters {
        if buf.last().is_some_and(|&prev| inverse_letter(prev) == l) {
            continue;
        }
        buf.push(l);
        visit_reduced(letters, n, buf, visit);
        buf.pop();
    }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn words(letters: &str) -> Domain {
        Domain::Words(Alphabet::new(letters).unwrap())
    }

    #[test]
    fn size_of_examples() {
        assert_eq!(words("ab").size_of(&Element::Word(b"ab".to_vec())), Ok(2));
        assert_eq!(Domain::Graphs.size_of(&Element::Graph(Graph::empty(5))), Ok(5));
        assert_eq!(Domain::Permutations.size_of(&Element::Permutation(vec![2, 1, 3, 4])), Ok(4));
    }

    #[test]
    fn size_of_rejects_aux_and_foreign() {
        let d = words("ab");
        let aux = Element::aux(Element::Word(b"a".to_vec()));
        assert!(matches!(d.size_of(&aux), Err(DomainError::DomainMismatch { .. })));
        assert!(matches!(d.size_of(&Element::Word(b"ac".to_vec())), Err(DomainError::DomainMismatch { .. })));
        assert!(matches!(
            Domain::Graphs.size_of(&Element::Permutation(vec![1])),
            Err(DomainError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn ball_cardinality_examples() {
        assert_eq!(ball_cardinality(2, 2), Ok(7));
        assert_eq!(ball_cardinality(3, 0), Ok(1));
        assert_eq!(ball_cardinality(2, 10), Ok((0..=10).map(|k| 1u128 << k).sum()));
        assert!(matches!(ball_cardinality(2, 200), Err(DomainError::Overflow(_))));
        assert!(ball_cardinality(1, 3).is_err());
    }

    #[test]
    fn word_spheres() {
        let d = words("ab");
        let s1 = d.enumerate_sphere(1, DEFAULT_SPHERE_CAP).unwrap();
        assert_eq!(s1, vec![Element::Word(b"a".to_vec()), Element::Word(b"b".to_vec())]);
        assert_eq!(d.enumerate_sphere(3, DEFAULT_SPHERE_CAP).unwrap().len(), 8);
        assert_eq!(d.enumerate_sphere(0, DEFAULT_SPHERE_CAP).unwrap(), vec![Element::Word(vec![])]);
    }

    #[test]
    fn free_group_sphere_matches_brute_force_filter() {
        let d = Domain::free_group(2).unwrap();
        let brute: BTreeSet<Vec<u8>> = words("aAbB")
            .enumerate_sphere(2, DEFAULT_SPHERE_CAP)
            .unwrap()
            .into_iter()
            .filter_map(|e| match e {
                Element::Word(w) if is_freely_reduced(&w) => Some(w),
                _ => None,
            })
            .collect();
        assert_eq!(brute.len(), 12);
        let sphere: BTreeSet<Vec<u8>> = d
            .enumerate_sphere(2, DEFAULT_SPHERE_CAP)
            .unwrap()
            .into_iter()
            .map(|e| e.letters().unwrap().to_vec())
            .collect();
        assert_eq!(sphere, brute);
        for n in 1..6 {
            assert_eq!(d.enumerate_sphere(n, DEFAULT_SPHERE_CAP).unwrap().len() as u128, d.sphere_size(n).unwrap());
        }
    }

    #[test]
    fn graph_and_permutation_spheres() {
        let g3 = Domain::Graphs.enumerate_sphere(3, DEFAULT_SPHERE_CAP).unwrap();
        assert_eq!(g3.len(), 8);
        assert_eq!(g3.iter().collect::<BTreeSet<_>>().len(), 8);
        assert!(Domain::Graphs.enumerate_sphere(0, DEFAULT_SPHERE_CAP).unwrap().is_empty());
        let p4 = Domain::Permutations.enumerate_sphere(4, DEFAULT_SPHERE_CAP).unwrap();
        assert_eq!(p4.len(), 24);
        assert_eq!(p4[0], Element::Permutation(vec![1, 2, 3, 4]));
        assert_eq!(p4[23], Element::Permutation(vec![4, 3, 2, 1]));
        assert!(p4.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let d = words("ab");
        let err = d.enumerate_sphere(5, 16).unwrap_err();
        assert_eq!(err, DomainError::ResourceLimit { size: "32".into(), cap: 16 });
        assert!(err.to_string().contains("16"));
        assert!(matches!(Domain::Graphs.enumerate_sphere(30, DEFAULT_SPHERE_CAP), Err(DomainError::ResourceLimit { .. })));
    }

    #[test]
    fn parse_round_trips_canonical_text() {
        let g = Domain::Graphs.parse_element("4;1-2,2-4").unwrap();
        assert_eq!(g.to_text(), "4;1-2,2-4");
        assert!(Domain::Graphs.parse_element("3;1-1").is_err());
        assert_eq!(Domain::Permutations.parse_element("2,1,3").unwrap().to_text(), "2,1,3");
        assert!(Domain::Permutations.parse_element("2,2").is_err());
        assert!(Domain::free_group(2).unwrap().parse_element("aA").is_err());
        assert!(words("ab").parse_element("abc").is_err());
    }

    #[test]
    fn signed_alphabet_interleaves_inverses() {
        assert_eq!(Alphabet::signed("tab").unwrap().as_str(), "tTaAbB");
        assert!(Alphabet::new("aa").is_err());
        assert!(Alphabet::signed("T").is_err());
    }
}
