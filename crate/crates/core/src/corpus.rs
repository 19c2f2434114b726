//! Corpus ingestion: JSONL sentence pairs in the SNLI interchange
//! format, each carrying Penn-Treebank-style constituency parses.

use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

/// A constituency tree node. Leaves hold a token; interior nodes hold
/// children. Exactly one of the two is ever populated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    pub children: Vec<ParseTree>,
    pub token: Option<String>,
}

impl ParseTree {
    pub fn leaf(label: impl Into<String>, token: impl Into<String>) -> ParseTree {
        ParseTree {
            label: label.into(),
            children: Vec::new(),
            token: Some(token.into()),
        }
    }

    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> ParseTree {
        ParseTree {
            label: label.into(),
            children,
            token: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.token.is_some()
    }

    /// Leaf tokens in left-to-right order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.token {
            Some(t) => out.push(t),
            None => {
                for c in &self.children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// Structural well-formedness: token iff no children, everywhere.
    pub fn is_well_formed(&self) -> bool {
        match &self.token {
            Some(_) => self.children.is_empty(),
            None => !self.children.is_empty() && self.children.iter().all(|c| c.is_well_formed()),
        }
    }

    /// Render back to bracketed text with single spaces.
    pub fn to_ptb(&self) -> String {
        match &self.token {
            Some(t) => format!("({} {})", self.label, t),
            None => {
                let inner: Vec<String> = self.children.iter().map(|c| c.to_ptb()).collect();
                format!("({} {})", self.label, inner.join(" "))
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum PtbError {
    #[error("offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

struct PtbParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PtbParser<'a> {
    fn error(&self, message: impl Into<String>) -> PtbError {
        PtbError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// A run of characters that are not whitespace or parentheses.
    fn word(&mut self) -> Result<String, PtbError> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b'(' || b == b')' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a label or token"));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn node(&mut self) -> Result<ParseTree, PtbError> {
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Err(self.error("expected '('"));
        }
        self.pos += 1;
        self.skip_ws();
        let label = self.word()?;
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                let mut children = Vec::new();
                while self.peek() == Some(b'(') {
                    children.push(self.node()?);
                    self.skip_ws();
                }
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')' after children"));
                }
                self.pos += 1;
                Ok(ParseTree::node(label, children))
            }
            Some(b')') => Err(self.error(format!("constituent {label:?} is empty"))),
            Some(_) => {
                let token = self.word()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')' after token"));
                }
                self.pos += 1;
                Ok(ParseTree::leaf(label, token))
            }
            None => Err(self.error("unbalanced parentheses: input ended inside a node")),
        }
    }
}

/// Parse one Penn-Treebank bracketing, e.g.
/// `(ROOT (NP (DT A) (NN dog)))`.
pub fn parse_ptb(text: &str) -> Result<ParseTree, PtbError> {
    let mut p = PtbParser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let tree = p.node()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input after the closing parenthesis"));
    }
    Ok(tree)
}

/// Gold annotation of a pair. The loader only ever produces the first
/// three; lines annotated "-" (no consensus) are skipped and counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldLabel {
    Entailment,
    Contradiction,
    Neutral,
    Unlabeled,
}

impl GoldLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GoldLabel::Entailment => "entailment",
            GoldLabel::Contradiction => "contradiction",
            GoldLabel::Neutral => "neutral",
            GoldLabel::Unlabeled => "unlabeled",
        }
    }
}

/// One premise/hypothesis pair with its constituency parses.
#[derive(Debug, Clone)]
pub struct Pair {
    pub id: String,
    pub premise_text: String,
    pub hypothesis_text: String,
    pub gold_label: GoldLabel,
    pub premise_parse: ParseTree,
    pub hypothesis_parse: ParseTree,
}

/// Outcome of loading a corpus file: the usable pairs plus accounting
/// for everything that was not loaded.
#[derive(Debug)]
pub struct CorpusStats {
    pub pairs: Vec<Pair>,
    /// Lines whose gold label was "-" (annotator disagreement).
    pub skipped_unlabeled: usize,
    /// (line number, reason) for each malformed line that was skipped.
    pub line_errors: Vec<(usize, String)>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Deserialize)]
struct RawLine {
    sentence1: String,
    sentence2: String,
    gold_label: String,
    sentence1_parse: String,
    sentence2_parse: String,
    #[serde(rename = "pairID")]
    pair_id: Option<String>,
}

fn strip_whitespace(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn check_leaves_match(tree: &ParseTree, text: &str, which: &str) -> Result<(), String> {
    let from_leaves: String = tree.leaves().concat();
    if strip_whitespace(&from_leaves) != strip_whitespace(text) {
        return Err(format!(
            "{which} parse leaves do not match the sentence text: {:?} vs {:?}",
            from_leaves, text
        ));
    }
    Ok(())
}

fn pair_from_line(line_no: usize, line: &str) -> Result<Option<Pair>, String> {
    let raw: RawLine =
        serde_json::from_str(line).map_err(|e| format!("bad JSON: {e}"))?;
    let gold_label = match raw.gold_label.as_str() {
        "entailment" => GoldLabel::Entailment,
        "contradiction" => GoldLabel::Contradiction,
        "neutral" => GoldLabel::Neutral,
        "-" => return Ok(None),
        other => return Err(format!("unknown gold_label {other:?}")),
    };
    if raw.sentence1.trim().is_empty() || raw.sentence2.trim().is_empty() {
        return Err("empty sentence text".to_string());
    }
    let premise_parse =
        parse_ptb(&raw.sentence1_parse).map_err(|e| format!("sentence1_parse: {e}"))?;
    let hypothesis_parse =
        parse_ptb(&raw.sentence2_parse).map_err(|e| format!("sentence2_parse: {e}"))?;
    check_leaves_match(&premise_parse, &raw.sentence1, "sentence1")?;
    check_leaves_match(&hypothesis_parse, &raw.sentence2, "sentence2")?;
    Ok(Some(Pair {
        id: raw.pair_id.unwrap_or_else(|| line_no.to_string()),
        premise_text: raw.sentence1,
        hypothesis_text: raw.sentence2,
        gold_label,
        premise_parse,
        hypothesis_parse,
    }))
}

/// Load a JSONL corpus. Unreadable files are fatal; malformed lines are
/// recorded and skipped; "-"-labeled lines are counted and skipped.
pub fn load_jsonl(path: &Path) -> Result<CorpusStats, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut stats = CorpusStats {
        pairs: Vec::new(),
        skipped_unlabeled: 0,
        line_errors: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        match pair_from_line(line_no, line) {
            Ok(Some(pair)) => stats.pairs.push(pair),
            Ok(None) => stats.skipped_unlabeled += 1,
            Err(message) => stats.line_errors.push((line_no, message)),
        }
    }
    Ok(stats)
}
