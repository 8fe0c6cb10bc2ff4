//! Signature catalog: the set of library classes, members and subtype links
//! that API references are resolved against.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::CatalogError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MemberKind {
    Method,
    Constructor,
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApiSignature {
    pub kind: MemberKind,
    pub fq_class: String,
    /// Member name; `new` for constructors.
    pub member: String,
    pub param_types: Vec<String>,
    pub return_type: String,
}

impl ApiSignature {
    /// `fq.Class.member(type,...)` / `fq.Class.new(type,...)` / `fq.Class.field`
    pub fn label_text(&self) -> String {
        match self.kind {
            MemberKind::Field => format!("{}.{}", self.fq_class, self.member),
            _ => format!("{}.{}({})", self.fq_class, self.member, self.param_types.join(",")),
        }
    }
}

pub const PRIMITIVES: &[&str] =
    &["int", "long", "short", "byte", "float", "double", "boolean", "char", "void"];

pub fn is_primitive(ty: &str) -> bool {
    PRIMITIVES.contains(&ty)
}

#[derive(Debug, Default, Clone)]
pub struct ApiCatalog {
    /// fq class -> members declared on it
    classes: BTreeMap<String, Vec<ApiSignature>>,
    /// fq class -> fq superclass
    extends: BTreeMap<String, String>,
    /// simple name -> smallest fq class carrying it
    by_simple: BTreeMap<String, String>,
    entry_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogStats {
    pub classes: usize,
    pub members: usize,
}

impl ApiCatalog {
    pub fn from_entries<I: IntoIterator<Item = ApiSignature>>(
        entries: I,
        extends: Vec<(String, String)>,
    ) -> Self {
        let mut cat = ApiCatalog::default();
        let mut seen = BTreeSet::new();
        for e in entries {
            if !seen.insert(e.clone()) {
                continue;
            }
            cat.classes.entry(e.fq_class.clone()).or_default().push(e);
            cat.entry_count += 1;
        }
        for (sub, sup) in extends {
            cat.classes.entry(sub.clone()).or_default();
            cat.classes.entry(sup.clone()).or_default();
            cat.extends.insert(sub, sup);
        }
        for members in cat.classes.values_mut() {
            members.sort();
        }
        // simple-name index; ties go to the lexicographically smallest class
        for fq in cat.classes.keys() {
            let simple = fq.rsplit('.').next().unwrap_or(fq).to_string();
            cat.by_simple.entry(simple).or_insert_with(|| fq.clone());
        }
        cat
    }

    /// Parse the line-oriented catalog format.
    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), source: e })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut entries = Vec::new();
        let mut extends = Vec::new();
        let mut any = false;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            any = true;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| CatalogError::Format { line: lineno, message: msg.into() };
            match fields[0] {
                "X" => {
                    if fields.len() != 4 || fields[2] != "extends" {
                        return Err(bad("expected `X <class> extends <class>`"));
                    }
                    extends.push((fields[1].to_string(), fields[3].to_string()));
                }
                k @ ("M" | "C" | "F") => {
                    if fields.len() != 5 {
                        return Err(bad("expected `<kind> <class> <member> (<params>) <return>`"));
                    }
                    let kind = match k {
                        "M" => MemberKind::Method,
                        "C" => MemberKind::Constructor,
                        _ => MemberKind::Field,
                    };
                    let params_field = fields[3];
                    if !params_field.starts_with('(') || !params_field.ends_with(')') {
                        return Err(bad("parameter list must be parenthesized"));
                    }
                    let inner = &params_field[1..params_field.len() - 1];
                    let param_types: Vec<String> = if inner.is_empty() {
                        vec![]
                    } else {
                        inner.split(',').map(|s| s.to_string()).collect()
                    };
                    if kind == MemberKind::Field && !param_types.is_empty() {
                        return Err(bad("field entries take an empty parameter list"));
                    }
                    let member = match (kind, fields[2]) {
                        (MemberKind::Constructor, "-") => "new".to_string(),
                        (MemberKind::Constructor, _) => {
                            return Err(bad("constructor member column must be `-`"))
                        }
                        (_, "-") => return Err(bad("missing member name")),
                        (_, m) => m.to_string(),
                    };
                    entries.push(ApiSignature {
                        kind,
                        fq_class: fields[1].to_string(),
                        member,
                        param_types,
                        return_type: fields[4].to_string(),
                    });
                }
                other => return Err(bad(&format!("unknown entry kind `{other}`"))),
            }
        }
        if !any {
            return Err(CatalogError::Empty);
        }
        Ok(Self::from_entries(entries, extends))
    }

    pub fn stats(&self) -> CatalogStats {
        CatalogStats { classes: self.classes.len(), members: self.entry_count }
    }

    /// Resolve a declared type name (simple or fully qualified) to the fq
    /// class known to the catalog.
    pub fn resolve_class(&self, name: &str) -> Option<&str> {
        if self.classes.contains_key(name) {
            return Some(self.classes.get_key_value(name).unwrap().0);
        }
        self.by_simple.get(name).map(|s| s.as_str())
    }

    pub fn is_known_class(&self, declared: &str) -> bool {
        self.resolve_class(declared).is_some()
    }

    /// Superclass chain starting at `fq`, inclusive.
    pub fn ancestry<'a>(&'a self, fq: &'a str) -> Vec<&'a str> {
        let mut out = vec![fq];
        let mut cur = fq;
        while let Some(sup) = self.extends.get(cur) {
            if out.contains(&sup.as_str()) {
                break; // defensive against cyclic extends data
            }
            out.push(sup);
            cur = sup;
        }
        out
    }

    /// Members named `member` of `fq` or the nearest ancestor declaring any.
    pub fn lookup_members(&self, fq: &str, kind: MemberKind, member: &str) -> Vec<&ApiSignature> {
        for class in self.ancestry(fq) {
            if let Some(members) = self.classes.get(class) {
                let hits: Vec<&ApiSignature> = members
                    .iter()
                    .filter(|s| s.kind == kind && s.member == member)
                    .collect();
                if !hits.is_empty() {
                    return hits;
                }
            }
        }
        vec![]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_one_method_line() {
        let cat = ApiCatalog::parse("M java.lang.String hashCode () int").unwrap();
        assert_eq!(cat.stats(), CatalogStats { classes: 1, members: 1 });
        let hits = cat.lookup_members("java.lang.String", MemberKind::Method, "hashCode");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].label_text(), "java.lang.String.hashCode()");
    }

    #[test]
    fn duplicate_lines_collapse() {
        let a = ApiCatalog::parse("M java.lang.String hashCode () int\nM java.lang.String hashCode () int").unwrap();
        let b = ApiCatalog::parse("M java.lang.String hashCode () int").unwrap();
        assert_eq!(a.stats(), b.stats());
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(ApiCatalog::parse("\n  \n"), Err(CatalogError::Empty)));
    }

    #[test]
    fn format_error_carries_line_number() {
        let err = ApiCatalog::parse("M java.lang.String hashCode () int\nQ what\n").unwrap_err();
        match err {
            CatalogError::Format { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn member_lookup_walks_extends_chain() {
        let cat = ApiCatalog::parse(
            "M java.io.Reader close () void\nX java.io.BufferedReader extends java.io.Reader",
        )
        .unwrap();
        let hits = cat.lookup_members("java.io.BufferedReader", MemberKind::Method, "close");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].fq_class, "java.io.Reader");
    }

    #[test]
    fn simple_name_resolution() {
        let cat = ApiCatalog::parse("M java.lang.String hashCode () int").unwrap();
        assert_eq!(cat.resolve_class("String"), Some("java.lang.String"));
        assert_eq!(cat.resolve_class("java.lang.String"), Some("java.lang.String"));
        assert_eq!(cat.resolve_class("Missing"), None);
    }
}
