//! Bag-of-tokens extraction: identifier splitting, rule-based
//! lemmatization, and vocabulary-filtered normalization.

use std::collections::BTreeSet;
use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

use crate::source::resolve::ResolvedMethod;
use crate::source::{ApiCatalog, MethodIr};

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("cannot read vocabulary {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("vocabulary file contains no tokens")]
    Empty,
}

/// Word list used to keep only meaningful tokens.
#[derive(Debug, Clone)]
pub struct TokenVocabulary {
    words: HashSet<String>,
}

impl TokenVocabulary {
    pub fn new<I: IntoIterator<Item = String>>(words: I) -> Result<Self, VocabError> {
        let words: HashSet<String> =
            words.into_iter().map(|w| w.trim().to_lowercase()).filter(|w| !w.is_empty()).collect();
        if words.is_empty() {
            return Err(VocabError::Empty);
        }
        Ok(TokenVocabulary { words })
    }

    /// One lowercase token per line.
    pub fn load(path: &Path) -> Result<Self, VocabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VocabError::Io { path: path.display().to_string(), source: e })?;
        Self::new(text.lines().map(|l| l.to_string()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Deduplicated, normalized token set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenBag {
    tokens: BTreeSet<String>,
}

impl TokenBag {
    pub fn from_tokens<I: IntoIterator<Item = String>>(tokens: I) -> Self {
        TokenBag { tokens: tokens.into_iter().collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|s| s.as_str())
    }

    pub fn contains(&self, t: &str) -> bool {
        self.tokens.contains(t)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn is_subset(&self, other: &TokenBag) -> bool {
        self.tokens.is_subset(&other.tokens)
    }
}

impl FromIterator<String> for TokenBag {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        TokenBag::from_tokens(iter)
    }
}

/// Raw names feeding the bag: the method name plus parameter/variable names
/// whose declared types the catalog knows (primitives always count).
pub fn extract_names(m: &MethodIr, catalog: &ApiCatalog) -> Vec<String> {
    crate::source::resolve_apis(m, catalog).names
}

/// Names of an already-resolved method.
pub fn method_names(rm: &ResolvedMethod) -> &[String] {
    &rm.names
}

/// Split one identifier into normalized word tokens: digits pruned in
/// place, `_`/`$` boundaries, camel-case boundaries, lowercase,
/// rule-based lemmatization.
pub fn split_name(raw: &str) -> Vec<String> {
    let no_digits: String = raw.chars().filter(|c| !c.is_ascii_digit()).collect();
    let mut out = Vec::new();
    for part in no_digits.split(['_', '$']) {
        for word in camel_split(part) {
            let lemma = lemmatize(&word.to_lowercase());
            if !lemma.is_empty() {
                out.push(lemma);
            }
        }
    }
    out
}

fn camel_split(word: &str) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 1..chars.len() {
        let prev = chars[i - 1];
        let cur = chars[i];
        let boundary = (prev.is_lowercase() && cur.is_uppercase())
            // end of an acronym run: "URLConnection" -> URL | Connection
            || (prev.is_uppercase()
                && cur.is_uppercase()
                && i + 1 < chars.len()
                && chars[i + 1].is_lowercase());
        if boundary {
            parts.push(chars[start..i].iter().collect());
            start = i;
        }
    }
    if start < chars.len() {
        parts.push(chars[start..].iter().collect());
    }
    parts
}

/// Suffix-stripping lemmatizer covering plural/past/progressive forms.
fn lemmatize(word: &str) -> String {
    let mut w = word.to_string();
    if let Some(stem) = w.strip_suffix("ies") {
        if w.len() >= 5 {
            w = format!("{stem}y");
        }
    }
    if w == word {
        if let Some(stem) = w.strip_suffix("es") {
            let sibilant = stem.ends_with('s')
                || stem.ends_with('x')
                || stem.ends_with('z')
                || stem.ends_with('o')
                || stem.ends_with("ch")
                || stem.ends_with("sh");
            if sibilant && stem.len() >= 3 {
                w = stem.to_string();
            }
        }
    }
    if w == word && w.ends_with('s') && !w.ends_with("ss") && w.len() >= 4 {
        w.truncate(w.len() - 1);
    }
    if let Some(stem) = w.clone().strip_suffix("ing") {
        if stem.len() >= 3 {
            w = stem.to_string();
        }
    }
    if let Some(stem) = w.clone().strip_suffix("ed") {
        if stem.len() >= 3 {
            w = stem.to_string();
        }
    }
    w
}

/// Drop duplicates, one-character tokens and out-of-vocabulary tokens.
pub fn normalize_bag<I: IntoIterator<Item = String>>(
    tokens: I,
    vocab: &TokenVocabulary,
) -> TokenBag {
    TokenBag {
        tokens: tokens
            .into_iter()
            .filter(|t| t.chars().count() >= 2 && vocab.contains(t))
            .collect(),
    }
}

/// Full pipeline from raw names to a normalized bag.
pub fn bag_from_names<S: AsRef<str>>(names: &[S], vocab: &TokenVocabulary) -> TokenBag {
    normalize_bag(names.iter().flat_map(|n| split_name(n.as_ref())), vocab)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(words: &[&str]) -> TokenVocabulary {
        TokenVocabulary::new(words.iter().map(|s| s.to_string())).unwrap()
    }

    #[test]
    fn digit_pruning() {
        assert_eq!(split_name("file2"), vec!["file"]);
        assert_eq!(split_name("file2name"), vec!["filename"]);
        assert_eq!(split_name("file2Name"), vec!["file", "name"]);
    }

    #[test]
    fn underscore_and_camel_splits() {
        assert_eq!(split_name("file_name"), vec!["file", "name"]);
        assert_eq!(split_name("fileName"), vec!["file", "name"]);
        assert_eq!(split_name("computeHashCode"), vec!["compute", "hash", "code"]);
        assert_eq!(split_name("URLConnection"), vec!["url", "connection"]);
    }

    #[test]
    fn lemmatization_rules() {
        assert_eq!(split_name("files"), vec!["file"]);
        assert_eq!(split_name("entries"), vec!["entry"]);
        assert_eq!(split_name("classes"), vec!["class"]);
        assert_eq!(split_name("boxes"), vec!["box"]);
        assert_eq!(split_name("loaded"), vec!["load"]);
        assert_eq!(split_name("reading"), vec!["read"]);
    }

    #[test]
    fn empty_split_allowed() {
        assert_eq!(split_name("2"), Vec::<String>::new());
        assert_eq!(split_name("_"), Vec::<String>::new());
    }

    #[test]
    fn normalize_drops_short_and_out_of_vocab() {
        let v = vocab(&["file"]);
        let bag = normalize_bag(
            vec!["i".into(), "j".into(), "file".into(), "zqxwv".into()],
            &v,
        );
        assert_eq!(bag.iter().collect::<Vec<_>>(), vec!["file"]);
    }

    #[test]
    fn normalize_dedups() {
        let v = vocab(&["file"]);
        let bag = normalize_bag(vec!["file".into(), "file".into()], &v);
        assert_eq!(bag.len(), 1);
    }

    #[test]
    fn normalize_is_idempotent() {
        let v = vocab(&["file", "name", "read"]);
        let once = normalize_bag(
            vec!["file".into(), "name".into(), "read".into(), "x".into()],
            &v,
        );
        let twice = normalize_bag(once.iter().map(|s| s.to_string()), &v);
        assert_eq!(once, twice);
    }
}
