//! Index vocabularies for node labels, output classes and code tokens.
//! Index 0 is always the unknown entry.

use std::collections::{BTreeMap, HashMap};

pub const UNK: &str = "<UNK>";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    /// Build from an iterator of entries; duplicates collapse, entries are
    /// indexed in sorted order after UNK.
    pub fn build<I: IntoIterator<Item = String>>(entries: I) -> Vocab {
        let unique: BTreeMap<String, ()> =
            entries.into_iter().filter(|e| e != UNK).map(|e| (e, ())).collect();
        let mut names = vec![UNK.to_string()];
        names.extend(unique.into_keys());
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Vocab { names, index }
    }

    pub fn from_names(names: Vec<String>) -> Vocab {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Vocab { names, index }
    }

    pub fn id(&self, name: &str) -> usize {
        self.index.get(name).copied().unwrap_or(0)
    }

    /// Some(id) only for known (non-UNK) entries.
    pub fn known_id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied().filter(|&i| i != 0)
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Class vocabulary from training labels: only labels seen at least
/// `min_class_freq` times become classes.
pub fn class_vocab<'a, I: IntoIterator<Item = &'a str>>(labels: I, min_class_freq: usize) -> Vocab {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    Vocab::build(
        counts
            .into_iter()
            .filter(|(_, c)| *c >= min_class_freq)
            .map(|(l, _)| l.to_string()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unk_is_index_zero() {
        let v = Vocab::build(vec!["b".to_string(), "a".to_string(), "b".to_string()]);
        assert_eq!(v.id(UNK), 0);
        assert_eq!(v.id("a"), 1);
        assert_eq!(v.id("b"), 2);
        assert_eq!(v.id("missing"), 0);
        assert_eq!(v.known_id("missing"), None);
    }

    #[test]
    fn class_vocab_respects_min_freq() {
        let labels = ["x", "x", "y"];
        let v = class_vocab(labels.iter().copied(), 2);
        assert_eq!(v.len(), 2); // UNK + x
        assert_eq!(v.known_id("y"), None);
        assert!(v.known_id("x").is_some());
    }
}
