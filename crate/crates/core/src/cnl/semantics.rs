//! Translation from fragment derivations to closed first-order
//! formulas.
//!
//! Predicate inventory (fixed): `object(X, noun)`, `property1(X, adj)`,
//! `predicate1(E, verb, X)`, `predicate2(E, verb, X, Y)`,
//! `modifier_pp(E, prep, Z)`, `modifier_adv(E, adv)`, `count(X, word)`,
//! and `human(X)` (the restrictor of "nobody", also used whenever the
//! noun lemma is literally "human").
//!
//! Quantification is surface-scope: the subject's quantifier takes
//! widest scope, objects and prepositional objects quantify inside the
//! verb's event. Indefinites, bare plurals, "the", "some" and number
//! words are existential; "every" is universal; "no"/"nobody" are
//! negated existentials. Noun-phrase conjunction distributes the
//! predication over each conjunct with fresh variables.

use super::grammar::{Derivation, DetKind, NbarNode, NpNode, PpNode, SentenceNode, VpNode};
use crate::fol::{Formula, Term};

/// The logical form of one sentence plus the derivation it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceSem {
    pub formula: Formula,
    pub derivation: Derivation,
}

#[derive(Default)]
struct Ctx {
    next_x: usize,
    next_e: usize,
}

impl Ctx {
    fn fresh_x(&mut self) -> String {
        let n = self.next_x;
        self.next_x += 1;
        format!("X{n}")
    }

    fn fresh_e(&mut self) -> String {
        let n = self.next_e;
        self.next_e += 1;
        format!("E{n}")
    }
}

/// Predication over a bound individual, supplied by the surrounding
/// quantifier.
type Body<'b> = &'b mut dyn FnMut(&mut Ctx, &Term) -> Formula;

fn conjoin(parts: Vec<Formula>) -> Formula {
    Formula::and_all(parts).expect("non-empty conjunction")
}

/// `human(V)` for the lemma "human", `object(V, lemma)` otherwise.
pub fn noun_atom(lemma: &str, v: &Term) -> Formula {
    if lemma == "human" {
        Formula::atom("human", vec![v.clone()])
    } else {
        Formula::atom("object", vec![v.clone(), Term::constant(lemma)])
    }
}

/// The restriction a noun phrase places on its variable: head noun,
/// adjective properties, and the inert cardinality record.
fn restriction(nbar: &NbarNode, number: Option<&str>, v: &Term) -> Vec<Formula> {
    let mut parts = vec![noun_atom(&nbar.noun.sem, v)];
    for phrase in &nbar.adj_phrases {
        for adj in phrase {
            parts.push(Formula::atom(
                "property1",
                vec![v.clone(), Term::constant(&adj.sem)],
            ));
        }
    }
    if let Some(word) = number {
        parts.push(Formula::atom(
            "count",
            vec![v.clone(), Term::constant(word)],
        ));
    }
    parts
}

/// Quantify a noun phrase around an optional body. With no body (the
/// "there is/are" form) the restriction is existentially closed on its
/// own; a bare proper name then asserts its being.
fn np_quantify(np: &NpNode, ctx: &mut Ctx, mut body: Option<Body>) -> Formula {
    match np {
        NpNode::Proper { name } => {
            let c = Term::constant(&name.sem);
            match body {
                Some(b) => b(ctx, &c),
                None => {
                    let e = ctx.fresh_e();
                    Formula::exists(
                        e.clone(),
                        Formula::atom(
                            "predicate1",
                            vec![Term::var(e), Term::constant("be"), c],
                        ),
                    )
                }
            }
        }
        NpNode::Conj(units) => {
            let parts = units
                .iter()
                .map(|u| {
                    let b: Option<Body> = match body {
                        Some(ref mut b) => Some(&mut **b),
                        None => None,
                    };
                    np_quantify(u, ctx, b)
                })
                .collect();
            conjoin(parts)
        }
        NpNode::Simple { det, number, nbar } => {
            let vname = ctx.fresh_x();
            let v = Term::var(&vname);
            let restr = restriction(nbar, number.as_ref().map(|n| n.sem.as_str()), &v);
            match det.as_ref().map(|(_, k)| *k) {
                Some(DetKind::Every) => match body {
                    Some(b) => {
                        let consequent = b(ctx, &v);
                        Formula::forall(vname, Formula::implies(conjoin(restr), consequent))
                    }
                    // "there is every N": plain existential closure.
                    None => Formula::exists(vname, conjoin(restr)),
                },
                Some(DetKind::No) => {
                    let mut parts = restr;
                    if let Some(b) = body {
                        parts.push(b(ctx, &v));
                    }
                    Formula::not(Formula::exists(vname, conjoin(parts)))
                }
                _ => {
                    let mut parts = restr;
                    if let Some(b) = body {
                        parts.push(b(ctx, &v));
                    }
                    Formula::exists(vname, conjoin(parts))
                }
            }
        }
    }
}

/// `modifier_pp(E, prep, Z)` with Z quantified by the PP's noun phrase.
fn pp_formula(pp: &PpNode, ctx: &mut Ctx, event: &Term) -> Formula {
    let prep = pp.prep.sem.clone();
    np_quantify(
        &pp.np,
        ctx,
        Some(&mut |_ctx: &mut Ctx, z: &Term| {
            Formula::atom(
                "modifier_pp",
                vec![event.clone(), Term::constant(&prep), z.clone()],
            )
        }),
    )
}

/// Denotation of a verb phrase applied to the subject term `x`.
fn vp_formula(vp: &VpNode, ctx: &mut Ctx, x: &Term) -> Formula {
    match vp {
        VpNode::Conj(units) => {
            let parts = units.iter().map(|u| vp_formula(u, ctx, x)).collect();
            conjoin(parts)
        }
        VpNode::CopulaAdj { adjp, .. } => {
            let parts = adjp
                .iter()
                .map(|adj| {
                    Formula::atom(
                        "property1",
                        vec![x.clone(), Term::constant(&adj.sem)],
                    )
                })
                .collect();
            conjoin(parts)
        }
        VpNode::CopulaPp { pp, .. } => {
            let ename = ctx.fresh_e();
            let e = Term::var(&ename);
            let being = Formula::atom(
                "predicate1",
                vec![e.clone(), Term::constant("be"), x.clone()],
            );
            let modifier = pp_formula(pp, ctx, &e);
            Formula::exists(ename, Formula::and(being, modifier))
        }
        VpNode::Verb {
            verb,
            object,
            pps,
            advp,
        } => {
            let verb = verb.sem.clone();
            match object {
                None => event_formula(ctx, &verb, x, None, pps, advp),
                Some(obj) => np_quantify(
                    obj,
                    ctx,
                    Some(&mut |ctx: &mut Ctx, y: &Term| {
                        event_formula(ctx, &verb, x, Some(y), pps, advp)
                    }),
                ),
            }
        }
    }
}

/// `∃E (predicate1/2(E, verb, …) ∧ PP modifiers ∧ adverb modifiers)`.
fn event_formula(
    ctx: &mut Ctx,
    verb: &str,
    x: &Term,
    y: Option<&Term>,
    pps: &[PpNode],
    advp: &Option<Vec<super::grammar::Lex>>,
) -> Formula {
    let ename = ctx.fresh_e();
    let e = Term::var(&ename);
    let core = match y {
        Some(y) => Formula::atom(
            "predicate2",
            vec![e.clone(), Term::constant(verb), x.clone(), y.clone()],
        ),
        None => Formula::atom(
            "predicate1",
            vec![e.clone(), Term::constant(verb), x.clone()],
        ),
    };
    let mut parts = vec![core];
    for pp in pps {
        parts.push(pp_formula(pp, ctx, &e));
    }
    if let Some(advs) = advp {
        for adv in advs {
            parts.push(Formula::atom(
                "modifier_adv",
                vec![e.clone(), Term::constant(&adv.sem)],
            ));
        }
    }
    Formula::exists(ename, conjoin(parts))
}

/// Translate a fragment derivation into a closed formula.
pub fn to_fol(parse: &Derivation) -> SentenceSem {
    let mut ctx = Ctx::default();
    let formula = match &parse.root {
        SentenceNode::Declarative { subject, vp } => np_quantify(
            subject,
            &mut ctx,
            Some(&mut |ctx: &mut Ctx, x: &Term| vp_formula(vp, ctx, x)),
        ),
        SentenceNode::Existential { np, .. } => np_quantify(np, &mut ctx, None),
        SentenceNode::NegNobody { vp, .. } => {
            let vname = ctx.fresh_x();
            let v = Term::var(&vname);
            let human = Formula::atom("human", vec![v.clone()]);
            let body = vp_formula(vp, &mut ctx, &v);
            Formula::not(Formula::exists(vname, Formula::and(human, body)))
        }
        SentenceNode::NegNoun { nbar, vp, .. } => {
            let vname = ctx.fresh_x();
            let v = Term::var(&vname);
            let mut parts = restriction(nbar, None, &v);
            parts.push(vp_formula(vp, &mut ctx, &v));
            Formula::not(Formula::exists(vname, conjoin(parts)))
        }
    };
    SentenceSem {
        formula,
        derivation: parse.clone(),
    }
}
