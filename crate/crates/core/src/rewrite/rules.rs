//! Tree-to-tree rewrite rules: tense normalization (R3, R8), numeral
//! words (R4), predeterminer removal (R5), adverb reordering (R6),
//! adverb-conjunction smoothing (R7), and part-of-speech marker
//! prefixes (R1).
//!
//! Every function rebuilds the tree functionally; the input is never
//! mutated. Rules that consult verb morphology report unknown words
//! through a `warnings` sink and leave them unchanged.

use crate::corpus::ParseTree;
use crate::lexicon::{Lexicon, Number};

/// Clause labels at which a new grammatical subject can be established.
const CLAUSE_LABELS: [&str; 3] = ["S", "SINV", "SQ"];

fn is_verb_label(label: &str) -> bool {
    label.starts_with("VB")
}

fn lower_token(leaf: &ParseTree) -> String {
    leaf.token.as_deref().unwrap_or("").to_lowercase()
}

/// Grammatical number of a noun phrase, judged by its head.
///
/// Coordinations of two or more NPs are plural. Otherwise the
/// rightmost direct noun or pronoun child decides; failing that, the
/// rightmost NP child is consulted recursively (covers `(NP (NP ...)
/// (PP ...))`). Returns `None` when no head can be found, e.g. for an
/// expletive `(NP (EX There))`.
pub(crate) fn np_number(np: &ParseTree, lex: &Lexicon) -> Option<Number> {
    let np_children = np.children.iter().filter(|c| c.label == "NP").count();
    let has_and = np
        .children
        .iter()
        .any(|c| c.label == "CC" && lower_token(c) == "and");
    if np_children >= 2 && has_and {
        return Some(Number::Plural);
    }
    for child in np.children.iter().rev() {
        match child.label.as_str() {
            "NN" | "NNP" => return Some(Number::Singular),
            "NNS" | "NNPS" => return Some(Number::Plural),
            "PRP" => {
                let word = lower_token(child);
                return Some(
                    lex.pronoun(&word)
                        .map(|p| p.number)
                        .unwrap_or(Number::Singular),
                );
            }
            _ => {}
        }
    }
    np.children
        .iter()
        .rev()
        .find(|c| c.label == "NP")
        .and_then(|c| np_number(c, lex))
}

/// Number of the subject governing verbs inside a clause node.
///
/// The first NP child is the subject; when it is an expletive
/// (`there`), agreement instead comes from the first NP inside the VP.
fn clause_subject_number(clause: &ParseTree, lex: &Lexicon) -> Option<Number> {
    let subject = clause
        .children
        .iter()
        .find(|c| c.label == "NP" || c.label == "EX")?;
    if let Some(number) = np_number(subject, lex) {
        return Some(number);
    }
    let expletive = subject.label == "EX"
        || subject
            .children
            .iter()
            .any(|c| c.label == "EX" || lower_token(c) == "there");
    if expletive {
        let vp = clause.children.iter().find(|c| c.label == "VP")?;
        let inner = vp.children.iter().find(|c| c.label == "NP")?;
        return np_number(inner, lex);
    }
    None
}

/// Present-tense verb leaf agreeing with the given subject number.
fn present_leaf(base: &str, subject: Number, lex: &Lexicon) -> ParseTree {
    match subject {
        Number::Singular => ParseTree::leaf(
            "VBZ",
            lex.third_singular(base)
                .unwrap_or_else(|| base.to_string()),
        ),
        Number::Plural => ParseTree::leaf("VBP", lex.present_plural(base)),
    }
}

/// R3: rewrite past-tense verb leaves (VBD/VBN) into simple present
/// with subject agreement. Unknown verbs are left in place and
/// reported through `warnings`.
pub fn r3_past_tense(tree: &ParseTree, lex: &Lexicon, warnings: &mut Vec<String>) -> ParseTree {
    fn walk(
        node: &ParseTree,
        lex: &Lexicon,
        subject: Number,
        warnings: &mut Vec<String>,
    ) -> ParseTree {
        if node.is_leaf() {
            if node.label == "VBD" || node.label == "VBN" {
                let word = lower_token(node);
                let present = lex.to_present(&word);
                if !present.known {
                    warnings.push(format!(
                        "past-tense verb '{word}' not in the morphology table; left unchanged"
                    ));
                    return node.clone();
                }
                return match subject {
                    Number::Singular => ParseTree::leaf("VBZ", present.third_singular),
                    Number::Plural => {
                        ParseTree::leaf("VBP", lex.present_plural(&present.base))
                    }
                };
            }
            return node.clone();
        }
        let subject = if CLAUSE_LABELS.contains(&node.label.as_str()) {
            clause_subject_number(node, lex).unwrap_or(subject)
        } else {
            subject
        };
        ParseTree::node(
            node.label.clone(),
            node.children
                .iter()
                .map(|c| walk(c, lex, subject, warnings))
                .collect(),
        )
    }
    walk(tree, lex, Number::Singular, warnings)
}

/// R8: rewrite progressives `is/are/was/were + VBG` into simple
/// present with subject agreement, dropping the auxiliary. Copula
/// followed by anything other than a gerund (ADJP, PP, NP) is left
/// untouched. Gerunds missing from the morphology table are kept and
/// reported through `warnings`.
pub fn r8_progressive(tree: &ParseTree, lex: &Lexicon, warnings: &mut Vec<String>) -> ParseTree {
    const AUX_FORMS: [&str; 4] = ["is", "are", "was", "were"];

    fn is_aux(node: &ParseTree) -> bool {
        node.is_leaf()
            && (is_verb_label(&node.label) || node.label == "AUX")
            && AUX_FORMS.contains(&lower_token(node).as_str())
    }

    /// Index of the VBG leaf inside an inner VP, allowing only ADVP
    /// nodes before it (a preverbal adverb does not break the
    /// progressive pattern; R6 reorders it later).
    fn inner_gerund_index(vp: &ParseTree) -> Option<usize> {
        for (i, child) in vp.children.iter().enumerate() {
            if child.is_leaf() && child.label == "VBG" {
                return Some(i);
            }
            if child.label != "ADVP" {
                return None;
            }
        }
        None
    }

    fn rewrite_vp(
        children: &[ParseTree],
        lex: &Lexicon,
        subject: Number,
        warnings: &mut Vec<String>,
    ) -> Option<Vec<ParseTree>> {
        for i in 0..children.len() {
            if !is_aux(&children[i]) {
                continue;
            }
            let Some(next) = children.get(i + 1) else {
                continue;
            };
            // Sibling form: (VP (VBZ is) (VBG running) ...)
            if next.is_leaf() && next.label == "VBG" {
                let gerund = lower_token(next);
                let Some(base) = lex.gerund_base(&gerund) else {
                    warnings.push(format!(
                        "gerund '{gerund}' not in the morphology table; progressive left unchanged"
                    ));
                    return None;
                };
                let verb = present_leaf(base, subject, lex);
                let mut out = children[..i].to_vec();
                out.push(verb);
                out.extend_from_slice(&children[i + 2..]);
                return Some(out);
            }
            // Nested form: (VP (VBZ is) (VP [ADVP*] (VBG running) rest...))
            if next.label == "VP" {
                let Some(g) = inner_gerund_index(next) else {
                    continue;
                };
                let gerund = lower_token(&next.children[g]);
                let Some(base) = lex.gerund_base(&gerund) else {
                    warnings.push(format!(
                        "gerund '{gerund}' not in the morphology table; progressive left unchanged"
                    ));
                    return None;
                };
                let verb = present_leaf(base, subject, lex);
                let mut out = children[..i].to_vec();
                out.extend_from_slice(&next.children[..g]);
                out.push(verb);
                out.extend_from_slice(&next.children[g + 1..]);
                out.extend_from_slice(&children[i + 2..]);
                return Some(out);
            }
        }
        None
    }

    fn walk(
        node: &ParseTree,
        lex: &Lexicon,
        subject: Number,
        warnings: &mut Vec<String>,
    ) -> ParseTree {
        if node.is_leaf() {
            return node.clone();
        }
        let subject = if CLAUSE_LABELS.contains(&node.label.as_str()) {
            clause_subject_number(node, lex).unwrap_or(subject)
        } else {
            subject
        };
        let children = if node.label == "VP" {
            rewrite_vp(&node.children, lex, subject, warnings)
                .unwrap_or_else(|| node.children.clone())
        } else {
            node.children.clone()
        };
        ParseTree::node(
            node.label.clone(),
            children
                .iter()
                .map(|c| walk(c, lex, subject, warnings))
                .collect(),
        )
    }
    walk(tree, lex, Number::Singular, warnings)
}

/// R4: spell out small numerals. Any leaf token with a word form in
/// the lexicon's number table ("2" -> "two", "3rd" -> "third") is
/// replaced, keeping its label; other numerals stay as digits.
pub fn r4_numbers(tree: &ParseTree, lex: &Lexicon) -> ParseTree {
    if tree.is_leaf() {
        if let Some(token) = tree.token.as_deref() {
            if let Some(word) = lex.number_word(token) {
                return ParseTree::leaf(tree.label.clone(), word);
            }
        }
        return tree.clone();
    }
    ParseTree::node(
        tree.label.clone(),
        tree.children.iter().map(|c| r4_numbers(c, lex)).collect(),
    )
}

/// R5: delete predeterminer leaves (PDT), pruning any constituents
/// left empty by the deletion.
pub fn r5_predeterminers(tree: &ParseTree) -> ParseTree {
    fn walk(node: &ParseTree) -> Option<ParseTree> {
        if node.is_leaf() {
            if node.label == "PDT" {
                return None;
            }
            return Some(node.clone());
        }
        let children: Vec<ParseTree> = node.children.iter().filter_map(walk).collect();
        if children.is_empty() {
            return None;
        }
        Some(ParseTree::node(node.label.clone(), children))
    }
    walk(tree).unwrap_or_else(|| tree.clone())
}

/// R6: inside each VP, move an ADVP that immediately precedes a verb
/// leaf to immediately after it. Children are processed first, so
/// nested VPs are reordered innermost-first.
pub fn r6_advp_order(tree: &ParseTree) -> ParseTree {
    if tree.is_leaf() {
        return tree.clone();
    }
    let mut children: Vec<ParseTree> = tree.children.iter().map(r6_advp_order).collect();
    if tree.label == "VP" {
        loop {
            let mut swapped = false;
            for i in 0..children.len().saturating_sub(1) {
                if children[i].label == "ADVP"
                    && children[i + 1].is_leaf()
                    && is_verb_label(&children[i + 1].label)
                {
                    children.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
    }
    ParseTree::node(tree.label.clone(), children)
}

/// R7: inside ADVP constituents, replace the conjunctions "but" and
/// "yet" with "and". Occurrences outside ADVP are left alone.
pub fn r7_adv_conjunction(tree: &ParseTree) -> ParseTree {
    fn walk(node: &ParseTree, inside_advp: bool) -> ParseTree {
        if node.is_leaf() {
            if inside_advp && matches!(lower_token(node).as_str(), "but" | "yet") {
                return ParseTree::leaf(node.label.clone(), "and");
            }
            return node.clone();
        }
        let inside = inside_advp || node.label == "ADVP";
        ParseTree::node(
            node.label.clone(),
            node.children.iter().map(|c| walk(c, inside)).collect(),
        )
    }
    walk(tree, false)
}

/// R1: attach part-of-speech markers inside simple noun phrases.
///
/// Fires on NPs whose entire child sequence is `[DT|CD]? JJ* (NN|NNS)`
/// with at least one determiner, numeral, or adjective present. Each
/// adjective token gains an `a:` prefix and the noun an `n:` prefix;
/// two or more adjectives are regrouped under an ADJP with "and"
/// conjunctions. Already-prefixed tokens are left as they are, which
/// makes the rule idempotent.
pub fn r1_adjective_phrases(tree: &ParseTree) -> ParseTree {
    fn mark(token: &str, prefix: &str) -> String {
        if token.starts_with(prefix) {
            token.to_string()
        } else {
            format!("{prefix}{token}")
        }
    }

    fn try_rewrite(np: &ParseTree) -> Option<ParseTree> {
        let c = &np.children;
        if c.is_empty() || c.iter().any(|ch| !ch.is_leaf()) {
            return None;
        }
        let mut idx = 0;
        let det = if matches!(c[0].label.as_str(), "DT" | "CD") {
            idx = 1;
            Some(c[0].clone())
        } else {
            None
        };
        let jj_start = idx;
        while idx < c.len() && c[idx].label == "JJ" {
            idx += 1;
        }
        let adjectives = &c[jj_start..idx];
        if idx + 1 != c.len() || !matches!(c[idx].label.as_str(), "NN" | "NNS") || idx == 0 {
            return None;
        }
        let noun = &c[idx];
        let marked_noun = ParseTree::leaf(
            noun.label.clone(),
            mark(noun.token.as_deref().unwrap_or(""), "n:"),
        );
        let marked_adjs: Vec<ParseTree> = adjectives
            .iter()
            .map(|a| ParseTree::leaf("JJ", mark(a.token.as_deref().unwrap_or(""), "a:")))
            .collect();
        let mut children = Vec::new();
        children.extend(det);
        if marked_adjs.len() >= 2 {
            let mut adjp = Vec::new();
            for (i, adj) in marked_adjs.into_iter().enumerate() {
                if i > 0 {
                    adjp.push(ParseTree::leaf("CC", "and"));
                }
                adjp.push(adj);
            }
            children.push(ParseTree::node("ADJP", adjp));
        } else {
            children.extend(marked_adjs);
        }
        children.push(marked_noun);
        Some(ParseTree::node("NP", children))
    }

    if tree.is_leaf() {
        return tree.clone();
    }
    let rebuilt = ParseTree::node(
        tree.label.clone(),
        tree.children.iter().map(r1_adjective_phrases).collect(),
    );
    if rebuilt.label == "NP" {
        if let Some(rewritten) = try_rewrite(&rebuilt) {
            return rewritten;
        }
    }
    rebuilt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_ptb;
    use crate::lexicon::Lexicon;
    use std::path::Path;

    fn lex() -> Lexicon {
        Lexicon::load(Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../data/lexicon"
        )))
        .expect("bundled lexicon loads")
    }

    fn tree(s: &str) -> ParseTree {
        parse_ptb(s).expect("test tree parses")
    }

    #[test]
    fn r1_regroups_multiple_adjectives_with_markers() {
        let input = tree("(NP (DT a) (JJ big) (JJ red) (NN ball))");
        let expected = tree("(NP (DT a) (ADJP (JJ a:big) (CC and) (JJ a:red)) (NN n:ball))");
        assert_eq!(r1_adjective_phrases(&input), expected);
    }

    #[test]
    fn r1_marks_noun_when_no_adjectives() {
        let input = tree("(NP (DT a) (NN dog))");
        let expected = tree("(NP (DT a) (NN n:dog))");
        assert_eq!(r1_adjective_phrases(&input), expected);
    }

    #[test]
    fn r1_single_adjective_keeps_flat_shape() {
        let input = tree("(NP (JJ big) (NN dog))");
        let expected = tree("(NP (JJ a:big) (NN n:dog))");
        assert_eq!(r1_adjective_phrases(&input), expected);
    }

    #[test]
    fn r1_leaves_bare_and_blocked_nps_alone() {
        for s in [
            "(NP (NN Nobody))",
            "(NP (NNP John))",
            "(NP (PRP$ his) (NN wife))",
            "(NP (NP (DT a) (NN dog)) (PP (IN in) (NP (DT a) (NN park))))",
        ] {
            let input = tree(s);
            let out = r1_adjective_phrases(&input);
            // Nested simple NPs may still be marked; the blocked outer
            // shapes themselves must not be regrouped.
            if s.contains("PRP$") || s.contains("NNP") || s == "(NP (NN Nobody))" {
                assert_eq!(out, input, "{s} should be untouched");
            }
        }
    }

    #[test]
    fn r1_marks_numeral_noun_phrase() {
        let input = tree("(NP (CD Two) (NNS dogs))");
        let expected = tree("(NP (CD Two) (NNS n:dogs))");
        assert_eq!(r1_adjective_phrases(&input), expected);
    }

    #[test]
    fn r1_is_idempotent() {
        let input = tree("(S (NP (DT a) (JJ big) (JJ red) (NN ball)) (VP (VBZ bounces)) (. .))");
        let once = r1_adjective_phrases(&input);
        let twice = r1_adjective_phrases(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn r3_singular_subject_gets_third_singular() {
        let lex = lex();
        let mut warnings = Vec::new();
        let input = tree("(S (NP (DT A) (NN dog)) (VP (VBD walked)) (. .))");
        let out = r3_past_tense(&input, &lex, &mut warnings);
        assert_eq!(out.leaves(), vec!["A", "dog", "walks", "."]);
        assert!(warnings.is_empty());
    }

    #[test]
    fn r3_plural_subject_gets_base_form() {
        let lex = lex();
        let mut warnings = Vec::new();
        let input = tree("(S (NP (NNS dogs)) (VP (VBD ran)) (. .))");
        let out = r3_past_tense(&input, &lex, &mut warnings);
        assert_eq!(out.leaves(), vec!["dogs", "run", "."]);
    }

    #[test]
    fn r3_rewrites_was_and_were_to_present_be() {
        let lex = lex();
        let mut w = Vec::new();
        let sg = tree("(S (NP (DT a) (NN dog)) (VP (VBD was) (ADJP (JJ happy))) (. .))");
        assert_eq!(
            r3_past_tense(&sg, &lex, &mut w).leaves(),
            vec!["a", "dog", "is", "happy", "."]
        );
        let pl = tree("(S (NP (NNS dogs)) (VP (VBD were) (ADJP (JJ happy))) (. .))");
        assert_eq!(
            r3_past_tense(&pl, &lex, &mut w).leaves(),
            vec!["dogs", "are", "happy", "."]
        );
    }

    #[test]
    fn r3_flags_unknown_verbs_and_keeps_them() {
        let lex = lex();
        let mut warnings = Vec::new();
        let input = tree("(S (NP (DT a) (NN dog)) (VP (VBD glorbed)) (. .))");
        let out = r3_past_tense(&input, &lex, &mut warnings);
        assert_eq!(out, input);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("glorbed"));
    }

    #[test]
    fn r3_expletive_subject_agrees_with_postverbal_np() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree("(S (NP (EX There)) (VP (VBD were) (NP (NNS dogs))) (. .))");
        let out = r3_past_tense(&input, &lex, &mut w);
        assert_eq!(out.leaves(), vec!["There", "are", "dogs", "."]);
    }

    #[test]
    fn r8_rewrites_nobody_is_working() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree("(ROOT (S (NP (NN Nobody)) (VP (VBZ is) (VP (VBG working))) (. .)))");
        let out = r8_progressive(&input, &lex, &mut w);
        assert_eq!(out.leaves(), vec!["Nobody", "works", "."]);
    }

    #[test]
    fn r8_plural_progressive_keeps_trailing_material() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree(
            "(ROOT (S (NP (CD Two) (NNS dogs)) (VP (VBP are) (VP (VBG running) \
             (PP (IN through) (NP (DT a) (NN field))))) (. .)))",
        );
        let out = r8_progressive(&input, &lex, &mut w);
        assert_eq!(
            out.leaves(),
            vec!["Two", "dogs", "run", "through", "a", "field", "."]
        );
    }

    #[test]
    fn r8_leaves_copula_with_adjective_alone() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree("(S (NP (DT A) (NN man)) (VP (VBZ is) (ADJP (JJ tall))) (. .))");
        let out = r8_progressive(&input, &lex, &mut w);
        assert_eq!(out, input);
        assert!(w.is_empty());
    }

    #[test]
    fn r8_flags_unknown_gerund() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree("(S (NP (NNP p:John)) (VP (VBZ is) (VP (VBG laughing))) (. .))");
        let out = r8_progressive(&input, &lex, &mut w);
        assert_eq!(out, input);
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("laughing"));
    }

    #[test]
    fn r8_past_progressive_becomes_simple_present() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree("(S (NP (DT a) (NN dog)) (VP (VBD was) (VP (VBG running))) (. .))");
        let out = r8_progressive(&input, &lex, &mut w);
        assert_eq!(out.leaves(), vec!["a", "dog", "runs", "."]);
    }

    #[test]
    fn r8_sibling_gerund_form() {
        let lex = lex();
        let mut w = Vec::new();
        let input = tree("(S (NP (NNS dogs)) (VP (VBP are) (VBG running)) (. .))");
        let out = r8_progressive(&input, &lex, &mut w);
        assert_eq!(out.leaves(), vec!["dogs", "run", "."]);
    }

    #[test]
    fn r4_spells_out_small_numbers_and_ordinals() {
        let lex = lex();
        let input = tree("(NP (CD 2) (NNS dogs))");
        assert_eq!(r4_numbers(&input, &lex).leaves(), vec!["two", "dogs"]);
        let ordinal = tree("(NP (DT the) (JJ 1st) (NN dog))");
        assert_eq!(
            r4_numbers(&ordinal, &lex).leaves(),
            vec!["the", "first", "dog"]
        );
    }

    #[test]
    fn r4_leaves_large_numbers_alone() {
        let lex = lex();
        let input = tree("(NP (CD 12) (NNS dogs))");
        assert_eq!(r4_numbers(&input, &lex), input);
    }

    #[test]
    fn r5_deletes_predeterminers() {
        let input = tree("(NP (PDT All) (DT the) (NNS dogs))");
        let expected = tree("(NP (DT the) (NNS dogs))");
        assert_eq!(r5_predeterminers(&input), expected);
        let vacuous = tree("(NP (DT the) (NNS dogs))");
        assert_eq!(r5_predeterminers(&vacuous), vacuous);
    }

    #[test]
    fn r5_prunes_emptied_constituents() {
        let input = tree("(NP (X (PDT half)) (DT a) (NN cake))");
        let expected = tree("(NP (DT a) (NN cake))");
        assert_eq!(r5_predeterminers(&input), expected);
    }

    #[test]
    fn r6_swaps_preverbal_adverb_phrase() {
        let input = tree("(VP (ADVP (RB quickly)) (VBZ runs))");
        let expected = tree("(VP (VBZ runs) (ADVP (RB quickly)))");
        assert_eq!(r6_advp_order(&input), expected);
        assert_eq!(r6_advp_order(&expected), expected);
    }

    #[test]
    fn r6_handles_nested_vps_innermost_first() {
        let input = tree(
            "(VP (VP (ADVP (RB quickly)) (VBZ runs)) (CC and) \
             (VP (ADVP (RB slowly)) (VBZ jumps)))",
        );
        let expected = tree(
            "(VP (VP (VBZ runs) (ADVP (RB quickly))) (CC and) \
             (VP (VBZ jumps) (ADVP (RB slowly))))",
        );
        assert_eq!(r6_advp_order(&input), expected);
    }

    #[test]
    fn r6_moves_verb_past_stacked_adverb_phrases() {
        let input = tree("(VP (ADVP (RB quickly)) (ADVP (RB quietly)) (VBZ runs))");
        let out = r6_advp_order(&input);
        assert_eq!(out.leaves(), vec!["runs", "quickly", "quietly"]);
    }

    #[test]
    fn r7_replaces_but_and_yet_inside_advp() {
        let input = tree("(ADVP (RB slowly) (CC but) (RB surely))");
        assert_eq!(
            r7_adv_conjunction(&input).leaves(),
            vec!["slowly", "and", "surely"]
        );
        let yet = tree("(ADVP (RB slowly) (CC yet) (RB surely))");
        assert_eq!(
            r7_adv_conjunction(&yet).leaves(),
            vec!["slowly", "and", "surely"]
        );
    }

    #[test]
    fn r7_ignores_but_outside_advp() {
        let input = tree("(S (S (NP (NNS dogs)) (VP (VBP run))) (CC but) (S (NP (NNS cats)) (VP (VBP sit))))");
        assert_eq!(r7_adv_conjunction(&input), input);
    }

    #[test]
    fn np_number_judges_heads_and_coordination() {
        let lex = lex();
        assert_eq!(
            np_number(&tree("(NP (DT a) (NN dog))"), &lex),
            Some(Number::Singular)
        );
        assert_eq!(
            np_number(&tree("(NP (CD two) (NNS dogs))"), &lex),
            Some(Number::Plural)
        );
        assert_eq!(
            np_number(
                &tree("(NP (NP (DT a) (NN dog)) (CC and) (NP (DT a) (NN cat)))"),
                &lex
            ),
            Some(Number::Plural)
        );
        assert_eq!(
            np_number(&tree("(NP (PRP they))"), &lex),
            Some(Number::Plural)
        );
        assert_eq!(np_number(&tree("(NP (EX There))"), &lex), None);
    }
}
