//! Penn Treebank word tokenization.
//!
//! The rule list mirrors the classic Treebank regular-expression cascade
//! (quotes, punctuation, brackets, dashes, clitics, MacIntyre contractions).
//! One extension: the section sign `§` is split off like `$` and `%`.
//! Like the original, only a period at the very end of the input is split;
//! sentence-internal periods stay attached to their word.

use std::fmt;
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;

use crate::model::{CodeGraph, CorpusNode, ModelError};

/// Ordered token tuple of one vertex, stored compactly as a single
/// space-joined buffer. Tokens never contain whitespace and are never empty.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenStream {
    joined: String,
    len: usize,
}

impl TokenStream {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends one token. Panics if the token is empty or contains whitespace.
    pub fn push(&mut self, token: &str) {
        assert!(
            !token.is_empty() && !token.contains(char::is_whitespace),
            "invalid token {token:?}"
        );
        if self.len > 0 {
            self.joined.push(' ');
        }
        self.joined.push_str(token);
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.joined.split(' ').filter(|_| self.len > 0)
    }

    /// Tokens joined by single spaces.
    pub fn as_joined(&self) -> &str {
        &self.joined
    }

    pub fn append(&mut self, other: &TokenStream) {
        if other.is_empty() {
            return;
        }
        if self.len > 0 {
            self.joined.push(' ');
        }
        self.joined.push_str(&other.joined);
        self.len += other.len;
    }

    pub fn to_vec(&self) -> Vec<String> {
        self.iter().map(str::to_string).collect()
    }
}

impl fmt::Debug for TokenStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl<S: AsRef<str>> FromIterator<S> for TokenStream {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut stream = TokenStream::new();
        for tok in iter {
            stream.push(tok.as_ref());
        }
        stream
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenizeOptions {
    /// Lowercase every token. Off by default: tokens compare as exact strings.
    pub case_fold: bool,
}

struct Rule {
    re: Regex,
    rep: &'static str,
}

fn rule(pattern: &str, rep: &'static str) -> Rule {
    Rule {
        re: Regex::new(pattern).expect("static tokenizer pattern"),
        rep,
    }
}

struct Rules {
    starting_quotes: Vec<Rule>,
    punctuation: Vec<Rule>,
    brackets: Rule,
    double_dashes: Rule,
    ending_quotes: Vec<Rule>,
    contractions: Vec<Rule>,
}

static RULES: LazyLock<Rules> = LazyLock::new(|| Rules {
    starting_quotes: vec![
        rule(r#"^""#, "``"),
        rule(r"(``)", " ${1} "),
        rule(r#"([ (\[{<])("|'{2})"#, "${1} `` "),
    ],
    punctuation: vec![
        rule(r"([:,])([^\d])", " ${1} ${2}"),
        // a trailing `$` in the reference also matches before a final newline
        rule(r"([:,])(\n?)\z", " ${1} ${2}"),
        rule(r"\.\.\.", " ... "),
        rule(r"[;@#$%&§]", " ${0} "),
        rule(r#"([^.])(\.)([\])}>"']*)\s*\z"#, "${1} ${2}${3} "),
        rule(r"[?!]", " ${0} "),
        rule(r"([^'])' ", "${1} ' "),
    ],
    brackets: rule(r"[\]\[(){}<>]", " ${0} "),
    double_dashes: rule(r"--", " -- "),
    ending_quotes: vec![
        rule(r"''", " '' "),
        rule(r#"""#, " '' "),
        rule(r"([^' ])('[sS]|'[mM]|'[dD]|') ", "${1} ${2} "),
        rule(r"([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) ", "${1} ${2} "),
    ],
    contractions: vec![
        rule(r"(?i)\b(can)(not)\b", " ${1} ${2} "),
        rule(r"(?i)\b(d)('ye)\b", " ${1} ${2} "),
        rule(r"(?i)\b(gim)(me)\b", " ${1} ${2} "),
        rule(r"(?i)\b(gon)(na)\b", " ${1} ${2} "),
        rule(r"(?i)\b(got)(ta)\b", " ${1} ${2} "),
        rule(r"(?i)\b(lem)(me)\b", " ${1} ${2} "),
        rule(r"(?i)\b(more)('n)\b", " ${1} ${2} "),
        // the reference uses a lookahead for the trailing space; it is re-emitted here
        rule(r"(?i)\b(wan)(na)(\s)", " ${1} ${2} ${3}"),
        rule(r"(?i) ('t)(is)\b", " ${1} ${2} "),
        rule(r"(?i) ('t)(was)\b", " ${1} ${2} "),
    ],
});

fn apply(text: String, rule: &Rule) -> String {
    match rule.re.replace_all(&text, rule.rep) {
        std::borrow::Cow::Borrowed(_) => text,
        std::borrow::Cow::Owned(s) => s,
    }
}

/// Tokenizes with default options.
pub fn tokenize(text: &str) -> TokenStream {
    tokenize_with(text, TokenizeOptions::default())
}

pub fn tokenize_with(text: &str, options: TokenizeOptions) -> TokenStream {
    if text.trim().is_empty() {
        return TokenStream::new();
    }
    let rules = &*RULES;
    let mut s = text.to_string();
    for r in &rules.starting_quotes {
        s = apply(s, r);
    }
    for r in &rules.punctuation {
        s = apply(s, r);
    }
    s = apply(s, &rules.brackets);
    s = apply(s, &rules.double_dashes);
    let mut s = format!(" {s} ");
    for r in &rules.ending_quotes {
        s = apply(s, r);
    }
    for r in &rules.contractions {
        s = apply(s, r);
    }
    if options.case_fold {
        s.split_whitespace().map(str::to_lowercase).collect()
    } else {
        s.split_whitespace().collect()
    }
}

/// |T(v)|. Zero for vertices without text.
pub fn word_count(node: &CorpusNode) -> usize {
    node.tokens.len()
}

/// Tokenizes the raw text of every vertex, in parallel. Existing token
/// streams are replaced.
pub fn tokenize_graph(g: CodeGraph, options: TokenizeOptions) -> Result<CodeGraph, ModelError> {
    let streams: Vec<TokenStream> = g.nodes().par_iter().map(|n| tokenize_with(&n.text, options)).collect();
    g.with_tokens(streams)
}

/// Sum of |T(v)| over all vertices.
pub fn total_tokens(g: &CodeGraph) -> u64 {
    g.nodes().iter().map(|n| n.tokens.len() as u64).sum()
}
