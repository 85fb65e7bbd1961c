//! Listing of the built-in components and their parameters.

use std::fmt::Write;

struct Entry {
    name: &'static str,
    params: &'static str,
    note: &'static str,
}

const DOMAINS: &[Entry] = &[
    Entry { name: "free-group", params: "rank", note: "freely reduced words over {a,b,..}^{+-1}; size = length" },
    Entry { name: "graphs", params: "", note: "simple graphs on {1..n}; size = vertex count" },
    Entry { name: "permutations", params: "", note: "permutations of {1..n}; size = n" },
    Entry { name: "tokens", params: "letters", note: "finite token set; every token has size 1" },
    Entry { name: "words", params: "letters | m | generators", note: "all words over the alphabet; size = length" },
];

const PROCESSES: &[Entry] = &[
    Entry { name: "ball-uniform", params: "letters | m", note: "AllValid" },
    Entry { name: "graph-growth", params: "", note: "Deterministic (n_i = i(i+1)/2)" },
    Entry { name: "iid-token", params: "letters", note: "AllValid" },
    Entry { name: "nonbacktracking-walk", params: "rank", note: "AllValid" },
    Entry { name: "permutation-from-scratch", params: "", note: "Deterministic (n_i = i(i+1)/2)" },
    Entry { name: "restricted-subalphabet", params: "alphabet | generators, letters", note: "AllValid" },
    Entry {
        name: "synthetic-bernoulli",
        params: "curve = constant(p) | one-minus-power(base) | one-minus-inverse",
        note: "AllValid",
    },
    Entry { name: "uniform-word", params: "letters | m | generators", note: "AllValid" },
];

const MACHINES: &[Entry] = &[
    Entry { name: "constant-output", params: "label", note: "outputs label on tick 1" },
    Entry { name: "dfa-membership", params: "language = starts-with, letter, letters | m", note: "n + 1 ticks" },
    Entry { name: "exponent-sum", params: "generator (default t)", note: "n + 1 ticks if sigma != 0, else diverges" },
    Entry { name: "instant-halt", params: "", note: "outputs done on tick 1" },
    Entry { name: "never-halt", params: "", note: "diverges" },
    Entry { name: "synthetic-acceptor", params: "", note: "tick 1: accept on token a, halt without output on b" },
    Entry { name: "table", params: "entries = [{input, action, label, steps}]", note: "unlisted inputs diverge" },
    Entry { name: "two-element", params: "", note: "a -> halt on tick 1, b -> diverges" },
];

const SUBSETS: &[Entry] = &[
    Entry { name: "all", params: "", note: "" },
    Entry { name: "contains-factor", params: "factor", note: "" },
    Entry { name: "empty", params: "", note: "" },
    Entry { name: "exponent-sum-nonzero", params: "generator", note: "" },
    Entry { name: "has-edge", params: "", note: "" },
    Entry { name: "has-fixed-point", params: "", note: "" },
    Entry { name: "not", params: "inner", note: "" },
    Entry { name: "starts-with", params: "letter", note: "" },
];

/// Registered process identifiers, alphabetical.
pub fn process_names() -> Vec<&'static str> {
    PROCESSES.iter().map(|e| e.name).collect()
}

/// Stable, alphabetical listing of every registered component.
pub fn list_registry() -> String {
    let mut out = String::new();
    for (title, entries) in [("domains", DOMAINS), ("processes", PROCESSES), ("machines", MACHINES), ("subsets", SUBSETS)] {
        writeln!(out, "{title}:").unwrap();
        for e in entries {
            let params = if e.params.is_empty() { "-" } else { e.params };
            let line = format!("  {:<26} {params}", e.name);
            if e.note.is_empty() {
                writeln!(out, "{line}").unwrap();
            } else {
                writeln!(out, "{line:<80} [{}]", e.note).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_are_sorted() {
        for entries in [DOMAINS, PROCESSES, MACHINES, SUBSETS] {
            assert!(entries.windows(2).all(|w| w[0].name < w[1].name));
        }
    }

    #[test]
    fn listing_names_processes_and_schedules() {
        let text = list_registry();
        for name in ["uniform-word", "nonbacktracking-walk", "graph-growth"] {
            assert!(text.contains(name));
        }
        assert!(text.contains("[AllValid]") && text.contains("[Deterministic"));
        assert_eq!(text, list_registry());
    }
}
