//! Exact recursive-descent grammar for the controlled fragment.
//!
//! Accepted sentence forms:
//! ```text
//! S    → NP VP "." | "there" (is|are) NP "." | NegS "."
//! NegS → "nobody" VP | "no" N' VP
//! NP   → NPUnit ("and" NPUnit)*
//! NPUnit → ProperName | NumberWord N' | Det? N'
//! N'   → AdjP* N
//! AdjP → Adj ("and" Adj)*
//! VP   → VPUnit ("and" VPUnit)*
//! VPUnit → copula AdjP | copula PP | V NP PP* | V PP+ | V AdvP | V
//! PP   → Prep NP
//! AdvP → Adv ("and" Adv)*
//! ```
//! Det ∈ {a, an, the, every, no, some}; copula ∈ {is, are}. Open-class
//! terminals come from the lexicon; unknown words are accepted only
//! with an explicit POS marker (n:/a:/p:). A verb matches its base
//! lemma or third-person-singular form only.
//!
//! Parsing failures are reported as [`CoverageFailure`] at the furthest
//! token any derivation reached.

use super::{AceToken, PosMarker};
use crate::lexicon::Lexicon;
use std::collections::BTreeSet;
use std::fmt;

/// Prepositions of the fragment (closed class).
pub const PREPOSITIONS: &[&str] = &[
    "above", "across", "against", "along", "around", "at", "behind", "below", "beside",
    "between", "by", "down", "during", "for", "from", "in", "inside", "into", "near",
    "of", "off", "on", "onto", "outside", "over", "past", "through", "to", "toward",
    "towards", "under", "up", "with",
];

/// A sentence the grammar rejects: the offending token (the furthest
/// point any derivation reached) and the terminal categories that were
/// expected there. Not fatal — this drives the coverage metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageFailure {
    pub index: usize,
    pub token: String,
    pub expected: Vec<String>,
}

impl fmt::Display for CoverageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "outside fragment at token {} ({:?}): expected {}",
            self.index,
            self.token,
            self.expected.join(" or ")
        )
    }
}

impl std::error::Error for CoverageFailure {}

/// One matched terminal: token position, the lemma as written, and the
/// normalized lemma the semantics uses (singular noun, verb base form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lex {
    pub index: usize,
    pub word: String,
    pub sem: String,
}

/// Words coordinated by "and" inside one phrase (adjectives of an
/// AdjP, or adverbs of an AdvP).
pub type CoordWords = Vec<Lex>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetKind {
    A,
    An,
    The,
    Every,
    No,
    Some,
}

/// N': zero or more adjective phrases followed by the head noun.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NbarNode {
    pub adj_phrases: Vec<CoordWords>,
    pub noun: Lex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NpNode {
    Simple {
        det: Option<(Lex, DetKind)>,
        number: Option<Lex>,
        nbar: NbarNode,
    },
    Proper {
        name: Lex,
    },
    Conj(Vec<NpNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpNode {
    pub prep: Lex,
    pub np: NpNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VpNode {
    Conj(Vec<VpNode>),
    Verb {
        verb: Lex,
        object: Option<NpNode>,
        pps: Vec<PpNode>,
        advp: Option<CoordWords>,
    },
    CopulaAdj {
        copula: Lex,
        adjp: CoordWords,
    },
    CopulaPp {
        copula: Lex,
        pp: PpNode,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SentenceNode {
    Declarative {
        subject: NpNode,
        vp: VpNode,
    },
    /// "there is/are NP"
    Existential {
        there: Lex,
        copula: Lex,
        np: NpNode,
    },
    /// "nobody VP"
    NegNobody {
        nobody: Lex,
        vp: VpNode,
    },
    /// "no N' VP"
    NegNoun {
        no: Lex,
        nbar: NbarNode,
        vp: VpNode,
    },
}

/// A successful fragment parse, kept for diagnostics and rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub root: SentenceNode,
    pub terminator: Lex,
    pub tokens: Vec<AceToken>,
}

impl Derivation {
    /// Reconstruct the lemma sequence from the structure alone. Equal
    /// to the input tokens' lemma sequence for any successful parse.
    pub fn render_lemmas(&self) -> Vec<String> {
        let mut out = Vec::new();
        render_sentence(&self.root, &mut out);
        out.push(self.terminator.word.clone());
        out
    }
}

fn render_coord(words: &[Lex], out: &mut Vec<String>) {
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            out.push("and".to_string());
        }
        out.push(w.word.clone());
    }
}

fn render_nbar(nbar: &NbarNode, out: &mut Vec<String>) {
    for phrase in &nbar.adj_phrases {
        render_coord(phrase, out);
    }
    out.push(nbar.noun.word.clone());
}

fn render_np(np: &NpNode, out: &mut Vec<String>) {
    match np {
        NpNode::Simple { det, number, nbar } => {
            if let Some((d, _)) = det {
                out.push(d.word.clone());
            }
            if let Some(n) = number {
                out.push(n.word.clone());
            }
            render_nbar(nbar, out);
        }
        NpNode::Proper { name } => out.push(name.word.clone()),
        NpNode::Conj(units) => {
            for (i, u) in units.iter().enumerate() {
                if i > 0 {
                    out.push("and".to_string());
                }
                render_np(u, out);
            }
        }
    }
}

fn render_pp(pp: &PpNode, out: &mut Vec<String>) {
    out.push(pp.prep.word.clone());
    render_np(&pp.np, out);
}

fn render_vp(vp: &VpNode, out: &mut Vec<String>) {
    match vp {
        VpNode::Conj(units) => {
            for (i, u) in units.iter().enumerate() {
                if i > 0 {
                    out.push("and".to_string());
                }
                render_vp(u, out);
            }
        }
        VpNode::Verb {
            verb,
            object,
            pps,
            advp,
        } => {
            out.push(verb.word.clone());
            if let Some(obj) = object {
                render_np(obj, out);
            }
            for pp in pps {
                render_pp(pp, out);
            }
            if let Some(advs) = advp {
                render_coord(advs, out);
            }
        }
        VpNode::CopulaAdj { copula, adjp } => {
            out.push(copula.word.clone());
            render_coord(adjp, out);
        }
        VpNode::CopulaPp { copula, pp } => {
            out.push(copula.word.clone());
            render_pp(pp, out);
        }
    }
}

fn render_sentence(s: &SentenceNode, out: &mut Vec<String>) {
    match s {
        SentenceNode::Declarative { subject, vp } => {
            render_np(subject, out);
            render_vp(vp, out);
        }
        SentenceNode::Existential { there, copula, np } => {
            out.push(there.word.clone());
            out.push(copula.word.clone());
            render_np(np, out);
        }
        SentenceNode::NegNobody { nobody, vp } => {
            out.push(nobody.word.clone());
            render_vp(vp, out);
        }
        SentenceNode::NegNoun { no, nbar, vp } => {
            out.push(no.word.clone());
            render_nbar(nbar, out);
            render_vp(vp, out);
        }
    }
}

struct Parser<'a> {
    toks: &'a [AceToken],
    lex: &'a Lexicon,
    pos: usize,
    far: usize,
    expected: BTreeSet<&'static str>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a AceToken> {
        self.toks.get(self.pos)
    }

    /// Record a terminal-match failure for furthest-failure reporting.
    fn miss(&mut self, what: &'static str) {
        if self.pos > self.far {
            self.far = self.pos;
            self.expected.clear();
        }
        if self.pos == self.far {
            self.expected.insert(what);
        }
    }

    /// Consume the current token, recording the normalized lemma.
    fn take(&mut self, sem: String) -> Lex {
        let t = &self.toks[self.pos];
        let lex = Lex {
            index: self.pos,
            word: t.lemma.clone(),
            sem,
        };
        self.pos += 1;
        lex
    }

    /// Match an unmarked literal word.
    fn word(&mut self, lemma: &'static str) -> Option<Lex> {
        match self.peek() {
            Some(t) if t.marker == PosMarker::None && t.lemma == lemma => {
                Some(self.take(lemma.to_string()))
            }
            _ => {
                self.miss(lemma);
                None
            }
        }
    }

    fn copula(&mut self) -> Option<Lex> {
        match self.peek() {
            Some(t) if t.marker == PosMarker::None && (t.lemma == "is" || t.lemma == "are") => {
                Some(self.take("be".to_string()))
            }
            _ => {
                self.miss("is/are");
                None
            }
        }
    }

    fn det(&mut self) -> Option<(Lex, DetKind)> {
        let kind = match self.peek() {
            Some(t) if t.marker == PosMarker::None => match t.lemma.as_str() {
                "a" => Some(DetKind::A),
                "an" => Some(DetKind::An),
                "the" => Some(DetKind::The),
                "every" => Some(DetKind::Every),
                "no" => Some(DetKind::No),
                "some" => Some(DetKind::Some),
                _ => None,
            },
            _ => None,
        };
        match kind {
            Some(k) => {
                let lemma = self.toks[self.pos].lemma.clone();
                Some((self.take(lemma), k))
            }
            None => {
                self.miss("determiner");
                None
            }
        }
    }

    fn noun(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            match t.marker {
                PosMarker::Noun => {
                    // Unknown marked nouns are accepted; try to
                    // singularize, falling back to the surface form.
                    let sem = if self.lex.is_noun(&t.lemma) {
                        t.lemma.clone()
                    } else {
                        self.lex.to_singular(&t.lemma)
                    };
                    return Some(self.take(sem));
                }
                PosMarker::None => {
                    if self.lex.is_noun(&t.lemma) {
                        let sem = t.lemma.clone();
                        return Some(self.take(sem));
                    }
                    if self.lex.is_plural_noun(&t.lemma) {
                        let sem = self.lex.to_singular(&t.lemma);
                        return Some(self.take(sem));
                    }
                }
                _ => {}
            }
        }
        self.miss("noun");
        None
    }

    fn adjective(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            match t.marker {
                PosMarker::Adjective => {
                    let sem = t.lemma.clone();
                    return Some(self.take(sem));
                }
                PosMarker::None if self.lex.is_adjective(&t.lemma) => {
                    let sem = t.lemma.clone();
                    return Some(self.take(sem));
                }
                _ => {}
            }
        }
        self.miss("adjective");
        None
    }

    fn adverb(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            if t.marker == PosMarker::None && self.lex.is_adverb(&t.lemma) {
                let sem = t.lemma.clone();
                return Some(self.take(sem));
            }
        }
        self.miss("adverb");
        None
    }

    fn verb(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            if t.marker == PosMarker::None {
                if self.lex.is_verb(&t.lemma) {
                    let sem = t.lemma.clone();
                    return Some(self.take(sem));
                }
                if let Some(base) = self.lex.third_singular_base(&t.lemma) {
                    let sem = base.to_string();
                    return Some(self.take(sem));
                }
            }
        }
        self.miss("verb");
        None
    }

    fn preposition(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            if t.marker == PosMarker::None && PREPOSITIONS.contains(&t.lemma.as_str()) {
                let sem = t.lemma.clone();
                return Some(self.take(sem));
            }
        }
        self.miss("preposition");
        None
    }

    fn number_word(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            if t.marker == PosMarker::None && self.lex.cardinal_value(&t.lemma).is_some() {
                let sem = t.lemma.clone();
                return Some(self.take(sem));
            }
        }
        self.miss("number word");
        None
    }

    fn proper_name(&mut self) -> Option<Lex> {
        if let Some(t) = self.peek() {
            if t.marker == PosMarker::Proper {
                let sem = t.lemma.clone();
                return Some(self.take(sem));
            }
        }
        self.miss("proper name");
        None
    }

    /// Adj ("and" Adj)* — greedy over "and" extensions.
    fn adj_phrase(&mut self) -> Option<CoordWords> {
        let first = self.adjective()?;
        let mut words = vec![first];
        loop {
            let save = self.pos;
            if self.word("and").is_some() {
                if let Some(a) = self.adjective() {
                    words.push(a);
                    continue;
                }
            }
            self.pos = save;
            break;
        }
        Some(words)
    }

    /// N' → AdjP* N with backtracking: a word that is both adjective
    /// and noun ("an orange .") is re-read as the head noun when no
    /// noun follows.
    fn nbar(&mut self) -> Option<NbarNode> {
        let save = self.pos;
        if let Some(phrase) = self.adj_phrase() {
            if let Some(mut rest) = self.nbar() {
                rest.adj_phrases.insert(0, phrase);
                return Some(rest);
            }
            self.pos = save;
        }
        let noun = self.noun()?;
        Some(NbarNode {
            adj_phrases: Vec::new(),
            noun,
        })
    }

    fn np_unit(&mut self) -> Option<NpNode> {
        if let Some(name) = self.proper_name() {
            return Some(NpNode::Proper { name });
        }
        let save = self.pos;
        if let Some(number) = self.number_word() {
            if let Some(nbar) = self.nbar() {
                return Some(NpNode::Simple {
                    det: None,
                    number: Some(number),
                    nbar,
                });
            }
            self.pos = save;
        }
        if let Some(det) = self.det() {
            if let Some(nbar) = self.nbar() {
                return Some(NpNode::Simple {
                    det: Some(det),
                    number: None,
                    nbar,
                });
            }
            self.pos = save;
            return None;
        }
        let nbar = self.nbar()?;
        Some(NpNode::Simple {
            det: None,
            number: None,
            nbar,
        })
    }

    fn np(&mut self) -> Option<NpNode> {
        let first = self.np_unit()?;
        let mut units = vec![first];
        loop {
            let save = self.pos;
            if self.word("and").is_some() {
                if let Some(u) = self.np_unit() {
                    units.push(u);
                    continue;
                }
            }
            self.pos = save;
            break;
        }
        Some(if units.len() == 1 {
            units.pop().unwrap()
        } else {
            NpNode::Conj(units)
        })
    }

    fn pp(&mut self) -> Option<PpNode> {
        let save = self.pos;
        let prep = self.preposition()?;
        match self.np() {
            Some(np) => Some(PpNode { prep, np }),
            None => {
                self.pos = save;
                None
            }
        }
    }

    fn advp(&mut self) -> Option<CoordWords> {
        let first = self.adverb()?;
        let mut words = vec![first];
        loop {
            let save = self.pos;
            if self.word("and").is_some() {
                if let Some(a) = self.adverb() {
                    words.push(a);
                    continue;
                }
            }
            self.pos = save;
            break;
        }
        Some(words)
    }

    fn vp_unit(&mut self) -> Option<VpNode> {
        let save = self.pos;
        if let Some(copula) = self.copula() {
            if let Some(adjp) = self.adj_phrase() {
                return Some(VpNode::CopulaAdj { copula, adjp });
            }
            if let Some(pp) = self.pp() {
                return Some(VpNode::CopulaPp { copula, pp });
            }
            // "is"/"are" still works as a verb on its own ("a dog is .").
            self.pos = save;
        }
        let verb = self.verb()?;
        let object = {
            let save = self.pos;
            match self.np() {
                Some(np) => Some(np),
                None => {
                    self.pos = save;
                    None
                }
            }
        };
        let mut pps = Vec::new();
        while let Some(pp) = self.pp() {
            pps.push(pp);
        }
        if object.is_none() && pps.is_empty() {
            let save = self.pos;
            match self.advp() {
                Some(advp) => {
                    return Some(VpNode::Verb {
                        verb,
                        object: None,
                        pps: Vec::new(),
                        advp: Some(advp),
                    });
                }
                None => self.pos = save,
            }
        }
        Some(VpNode::Verb {
            verb,
            object,
            pps,
            advp: None,
        })
    }

    fn vp(&mut self) -> Option<VpNode> {
        let first = self.vp_unit()?;
        let mut units = vec![first];
        loop {
            let save = self.pos;
            if self.word("and").is_some() {
                if let Some(u) = self.vp_unit() {
                    units.push(u);
                    continue;
                }
            }
            self.pos = save;
            break;
        }
        Some(if units.len() == 1 {
            units.pop().unwrap()
        } else {
            VpNode::Conj(units)
        })
    }

    fn sentence(&mut self) -> Option<SentenceNode> {
        let save = self.pos;
        if let Some(there) = self.word("there") {
            if let Some(copula) = self.copula() {
                if let Some(np) = self.np() {
                    return Some(SentenceNode::Existential { there, copula, np });
                }
            }
            self.pos = save;
        }
        if let Some(nobody) = self.word("nobody") {
            if let Some(vp) = self.vp() {
                return Some(SentenceNode::NegNobody { nobody, vp });
            }
            self.pos = save;
        }
        if let Some(no) = self.word("no") {
            if let Some(nbar) = self.nbar() {
                if let Some(vp) = self.vp() {
                    return Some(SentenceNode::NegNoun { no, nbar, vp });
                }
            }
            self.pos = save;
        }
        let subject = self.np()?;
        let vp = self.vp()?;
        Some(SentenceNode::Declarative { subject, vp })
    }
}

/// Parse a token sequence against the fragment grammar. The whole
/// sequence must form exactly one period-terminated sentence.
pub fn parse_fragment(
    tokens: &[AceToken],
    lex: &Lexicon,
) -> Result<Derivation, CoverageFailure> {
    let mut p = Parser {
        toks: tokens,
        lex,
        pos: 0,
        far: 0,
        expected: BTreeSet::new(),
    };
    let parsed = p.sentence().and_then(|root| {
        let terminator = p.word(".")?;
        if p.pos == tokens.len() {
            Some((root, terminator))
        } else {
            p.miss("end of sentence");
            None
        }
    });
    match parsed {
        Some((root, terminator)) => Ok(Derivation {
            root,
            terminator,
            tokens: tokens.to_vec(),
        }),
        None => {
            let token = tokens
                .get(p.far)
                .map(|t| t.lemma.clone())
                .unwrap_or_else(|| "end of input".to_string());
            Err(CoverageFailure {
                index: p.far,
                token,
                expected: p.expected.iter().map(|s| s.to_string()).collect(),
            })
        }
    }
}
