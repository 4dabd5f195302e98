use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use aho_corasick::AhoCorasick;
use rayon::prelude::*;
use unicode_normalization::UnicodeNormalization;

use super::posts::Post;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    /// The characters either side of a match must not be alphanumeric.
    WordBoundary,
    Substring,
}

impl MatchMode {
    /// Substring matching for Arabic, word boundaries elsewhere.
    pub fn default_for(language: &str) -> Self {
        match language {
            "ar" => MatchMode::Substring,
            _ => MatchMode::WordBoundary,
        }
    }
}

fn is_arabic_mark(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{06D6}'..='\u{06ED}' | '\u{0640}')
}

/// NFKC, lowercase, typographic apostrophes folded to `'`, Arabic
/// diacritics and tatweel removed.
pub fn normalize_text(text: &str) -> String {
    text.nfkc()
        .flat_map(char::to_lowercase)
        .filter(|c| !is_arabic_mark(*c))
        .map(|c| match c {
            '\u{2019}' | '\u{2018}' | '\u{02BC}' => '\'',
            c => c,
        })
        .collect()
}

#[derive(Debug, Clone)]
struct LanguageTerms {
    terms: Vec<String>,
    mode: MatchMode,
    automaton: AhoCorasick,
}

impl LanguageTerms {
    fn build(terms: Vec<String>, mode: MatchMode) -> Self {
        let automaton = AhoCorasick::new(&terms).expect("lexicon automaton");
        Self { terms, mode, automaton }
    }

    fn matches(&self, normalized: &str) -> bool {
        match self.mode {
            MatchMode::Substring => self.automaton.is_match(normalized),
            MatchMode::WordBoundary => self.automaton.find_overlapping_iter(normalized).any(|m| {
                let before = normalized[..m.start()].chars().next_back();
                let after = normalized[m.end()..].chars().next();
                !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
            }),
        }
    }
}

/// Per-language term lists in normalized form.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    languages: BTreeMap<String, LanguageTerms>,
}

impl Lexicon {
    /// Terms are normalized and de-duplicated within each language.
    pub fn from_terms<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut grouped: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (language, term) in entries {
            let language = language.trim().to_lowercase();
            let term = normalize_text(term.trim());
            if language.is_empty() || term.is_empty() {
                return Err(Error::Config(format!("empty lexicon entry `{language}`/`{term}`")));
            }
            let list = grouped.entry(language).or_default();
            if !list.contains(&term) {
                list.push(term);
            }
        }
        let languages = grouped
            .into_iter()
            .map(|(lang, terms)| {
                let mode = MatchMode::default_for(&lang);
                (lang, LanguageTerms::build(terms, mode))
            })
            .collect();
        Ok(Self { languages })
    }

    /// `language<TAB>term` per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (lang, term) = line.split_once('\t').ok_or_else(|| Error::Row {
                source_name: source.to_string(),
                row: i + 1,
                column: "language".into(),
                message: "expected `language<TAB>term`".into(),
            })?;
            if term.trim().is_empty() || lang.trim().is_empty() {
                return Err(Error::Row {
                    source_name: source.to_string(),
                    row: i + 1,
                    column: if lang.trim().is_empty() { "language" } else { "term" }.into(),
                    message: "empty field".into(),
                });
            }
            entries.push((lang, term));
        }
        Self::from_terms(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Override the match mode of one language.
    pub fn with_mode(mut self, language: &str, mode: MatchMode) -> Result<Self> {
        let entry = self
            .languages
            .get_mut(language)
            .ok_or_else(|| Error::Config(format!("language `{language}` is not in the lexicon")))?;
        entry.mode = mode;
        Ok(self)
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.languages.keys().map(String::as_str)
    }

    pub fn terms(&self, language: &str) -> Option<&[String]> {
        self.languages.get(language).map(|l| l.terms.as_slice())
    }

    pub fn mode(&self, language: &str) -> Option<MatchMode> {
        self.languages.get(language).map(|l| l.mode)
    }

    pub fn len(&self) -> usize {
        self.languages.values().map(|l| l.terms.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `text` contains a term of `language`.
    pub fn matches(&self, language: &str, text: &str) -> Result<bool> {
        let terms = self
            .languages
            .get(language)
            .ok_or_else(|| Error::Config(format!("language `{language}` is not in the lexicon")))?;
        Ok(terms.matches(&normalize_text(text)))
    }
}

/// Posts containing at least one lexicon term of their own language, in
/// input order.
pub fn lexicon_filter(posts: &[Post], lexicon: &Lexicon) -> Result<Vec<Post>> {
    if let Some(p) = posts.iter().find(|p| !lexicon.languages.contains_key(&p.language)) {
        return Err(Error::Config(format!(
            "post `{}` has language `{}`, which is not in the lexicon",
            p.id, p.language
        )));
    }
    Ok(posts
        .par_iter()
        .filter(|p| lexicon.languages[&p.language].matches(&normalize_text(&p.text)))
        .cloned()
        .collect())
}
