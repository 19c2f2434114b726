//! Clause-normal-form transformation.
//!
//! Pipeline: eliminate `<=>`/`=>`, push negations to literals, rename
//! bound variables apart, Skolemize existentials (fresh `sk{n}` symbols
//! applied to the enclosing universal variables), drop universal
//! quantifiers, then distribute `|` over `&` naively. There is no
//! equality handling. Distribution is guarded: inputs that would expand
//! past [`MAX_CNF_CLAUSES`] clauses abort with an error instead of
//! exhausting memory.

use super::{Atom, Clause, ClauseOrigin, Formula, Literal, Term};
use std::collections::HashMap;
use thiserror::Error;

/// Upper bound on the number of clauses one clausification may produce.
pub const MAX_CNF_CLAUSES: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClausifyError {
    #[error("formula expands to more than {MAX_CNF_CLAUSES} clauses")]
    TooManyClauses,
    #[error("formula has free variables: {0:?}")]
    FreeVariables(Vec<String>),
}

/// Negation normal form over the `{atom, not-atom, and, or, forall,
/// exists}` fragment.
enum Nnf {
    Lit(Literal),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Forall(String, Box<Nnf>),
    Exists(String, Box<Nnf>),
}

fn to_nnf(f: &Formula, negated: bool) -> Nnf {
    match f {
        Formula::Atom(a) => Nnf::Lit(Literal {
            positive: !negated,
            atom: a.clone(),
        }),
        Formula::Not(inner) => to_nnf(inner, !negated),
        Formula::And(a, b) => {
            let (l, r) = (to_nnf(a, negated), to_nnf(b, negated));
            if negated {
                Nnf::Or(Box::new(l), Box::new(r))
            } else {
                Nnf::And(Box::new(l), Box::new(r))
            }
        }
        Formula::Or(a, b) => {
            let (l, r) = (to_nnf(a, negated), to_nnf(b, negated));
            if negated {
                Nnf::And(Box::new(l), Box::new(r))
            } else {
                Nnf::Or(Box::new(l), Box::new(r))
            }
        }
        Formula::Implies(a, b) => {
            // a => b  ==  ~a | b
            let (l, r) = (to_nnf(a, !negated), to_nnf(b, negated));
            if negated {
                // ~(a => b) == a & ~b
                Nnf::And(Box::new(l), Box::new(r))
            } else {
                Nnf::Or(Box::new(l), Box::new(r))
            }
        }
        Formula::Iff(a, b) => {
            // a <=> b  ==  (a => b) & (b => a); expand before NNF.
            let expanded = Formula::and(
                Formula::implies((**a).clone(), (**b).clone()),
                Formula::implies((**b).clone(), (**a).clone()),
            );
            to_nnf(&expanded, negated)
        }
        Formula::Forall(v, body) => {
            let inner = to_nnf(body, negated);
            if negated {
                Nnf::Exists(v.clone(), Box::new(inner))
            } else {
                Nnf::Forall(v.clone(), Box::new(inner))
            }
        }
        Formula::Exists(v, body) => {
            let inner = to_nnf(body, negated);
            if negated {
                Nnf::Forall(v.clone(), Box::new(inner))
            } else {
                Nnf::Exists(v.clone(), Box::new(inner))
            }
        }
    }
}

/// Shared fresh-name state for one clausification run. Skolem symbols
/// are numbered from zero within each run, never globally.
struct Fresh {
    next_var: usize,
    next_skolem: usize,
}

impl Fresh {
    fn var(&mut self) -> String {
        let v = format!("V{}", self.next_var);
        self.next_var += 1;
        v
    }

    fn skolem(&mut self) -> String {
        let s = format!("sk{}", self.next_skolem);
        self.next_skolem += 1;
        s
    }
}

fn substitute_term(t: &Term, env: &HashMap<String, Term>) -> Term {
    match t {
        Term::Variable(v) => env.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Constant(_) => t.clone(),
        Term::Function(f, args) => Term::Function(
            f.clone(),
            args.iter().map(|a| substitute_term(a, env)).collect(),
        ),
    }
}

/// Skolemize and strip quantifiers, renaming every bound variable to a
/// fresh name on the way down. `universals` tracks the enclosing
/// universal variables (post-renaming) for Skolem arguments.
fn skolemize(
    nnf: Nnf,
    env: &mut HashMap<String, Term>,
    universals: &mut Vec<String>,
    fresh: &mut Fresh,
) -> QuantFree {
    match nnf {
        Nnf::Lit(l) => QuantFree::Lit(Literal {
            positive: l.positive,
            atom: Atom {
                predicate: l.atom.predicate,
                args: l.atom.args.iter().map(|t| substitute_term(t, env)).collect(),
            },
        }),
        Nnf::And(a, b) => {
            let l = skolemize(*a, env, universals, fresh);
            let r = skolemize(*b, env, universals, fresh);
            QuantFree::And(Box::new(l), Box::new(r))
        }
        Nnf::Or(a, b) => {
            let l = skolemize(*a, env, universals, fresh);
            let r = skolemize(*b, env, universals, fresh);
            QuantFree::Or(Box::new(l), Box::new(r))
        }
        Nnf::Forall(v, body) => {
            let new = fresh.var();
            let shadowed = env.insert(v.clone(), Term::Variable(new.clone()));
            universals.push(new);
            let out = skolemize(*body, env, universals, fresh);
            universals.pop();
            match shadowed {
                Some(t) => {
                    env.insert(v, t);
                }
                None => {
                    env.remove(&v);
                }
            }
            out
        }
        Nnf::Exists(v, body) => {
            let sym = fresh.skolem();
            let term = if universals.is_empty() {
                Term::Constant(sym)
            } else {
                Term::Function(
                    sym,
                    universals.iter().map(|u| Term::Variable(u.clone())).collect(),
                )
            };
            let shadowed = env.insert(v.clone(), term);
            let out = skolemize(*body, env, universals, fresh);
            match shadowed {
                Some(t) => {
                    env.insert(v, t);
                }
                None => {
                    env.remove(&v);
                }
            }
            out
        }
    }
}

enum QuantFree {
    Lit(Literal),
    And(Box<QuantFree>, Box<QuantFree>),
    Or(Box<QuantFree>, Box<QuantFree>),
}

/// Distribute disjunction over conjunction, producing literal lists.
/// Counts the running total against the expansion guard.
fn distribute(f: &QuantFree, budget: &mut usize) -> Result<Vec<Vec<Literal>>, ClausifyError> {
    match f {
        QuantFree::Lit(l) => Ok(vec![vec![l.clone()]]),
        QuantFree::And(a, b) => {
            let mut l = distribute(a, budget)?;
            let r = distribute(b, budget)?;
            l.extend(r);
            if l.len() > *budget {
                return Err(ClausifyError::TooManyClauses);
            }
            Ok(l)
        }
        QuantFree::Or(a, b) => {
            let l = distribute(a, budget)?;
            let r = distribute(b, budget)?;
            if l.len().saturating_mul(r.len()) > *budget {
                return Err(ClausifyError::TooManyClauses);
            }
            let mut out = Vec::with_capacity(l.len() * r.len());
            for lc in &l {
                for rc in &r {
                    let mut c = lc.clone();
                    c.extend(rc.iter().cloned());
                    out.push(c);
                }
            }
            Ok(out)
        }
    }
}

/// Clausify a batch of closed formulas sharing one Skolem counter, so a
/// classification attempt numbers its Skolem symbols deterministically
/// from zero. Tautologies are dropped; each clause is canonicalized so
/// its variables are clause-local.
pub fn clausify_formulas(
    inputs: &[(Formula, ClauseOrigin)],
) -> Result<Vec<Clause>, ClausifyError> {
    let mut fresh = Fresh {
        next_var: 0,
        next_skolem: 0,
    };
    let mut out = Vec::new();
    for (formula, origin) in inputs {
        let free = formula.free_vars();
        if !free.is_empty() {
            return Err(ClausifyError::FreeVariables(free.into_iter().collect()));
        }
        let nnf = to_nnf(formula, false);
        let qf = skolemize(nnf, &mut HashMap::new(), &mut Vec::new(), &mut fresh);
        let mut budget = MAX_CNF_CLAUSES;
        let clauses = distribute(&qf, &mut budget)?;
        for lits in clauses {
            let clause = Clause::new(lits, origin.clone());
            if clause.is_tautology() {
                continue;
            }
            out.push(clause.canonicalized());
        }
    }
    Ok(out)
}

/// Clausify a single closed formula with a fresh Skolem counter.
pub fn clausify(formula: &Formula, origin: ClauseOrigin) -> Result<Vec<Clause>, ClausifyError> {
    clausify_formulas(&[(formula.clone(), origin)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::Formula;

    fn lits(c: &Clause) -> Vec<String> {
        c.literals.iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn negated_disjunction_splits_into_unit_clauses() {
        let f = Formula::not(Formula::or(
            Formula::atom("p", vec![]),
            Formula::atom("q", vec![]),
        ));
        let cs = clausify(&f, ClauseOrigin::Premise).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(lits(&cs[0]), vec!["~p"]);
        assert_eq!(lits(&cs[1]), vec!["~q"]);
    }

    #[test]
    fn existential_becomes_skolem_constant() {
        let f = Formula::exists("X", Formula::atom("p", vec![Term::var("X")]));
        let cs = clausify(&f, ClauseOrigin::Premise).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(lits(&cs[0]), vec!["p(sk0)"]);
    }

    #[test]
    fn existential_under_universal_becomes_skolem_function() {
        // ! [X] : (dog(X) => ? [E] : runs(E,X))
        let f = Formula::forall(
            "X",
            Formula::implies(
                Formula::atom("dog", vec![Term::var("X")]),
                Formula::exists(
                    "E",
                    Formula::atom("runs", vec![Term::var("E"), Term::var("X")]),
                ),
            ),
        );
        let cs = clausify(&f, ClauseOrigin::Premise).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(lits(&cs[0]), vec!["~dog(X0)", "runs(sk0(X0),X0)"]);
    }

    #[test]
    fn skolem_numbering_is_per_call() {
        let f = Formula::exists("X", Formula::atom("p", vec![Term::var("X")]));
        let a = clausify(&f, ClauseOrigin::Premise).unwrap();
        let b = clausify(&f, ClauseOrigin::Premise).unwrap();
        assert_eq!(a, b, "each call restarts at sk0");
    }

    #[test]
    fn batch_shares_skolem_counter() {
        let f = Formula::exists("X", Formula::atom("p", vec![Term::var("X")]));
        let g = Formula::exists("X", Formula::atom("q", vec![Term::var("X")]));
        let cs = clausify_formulas(&[
            (f, ClauseOrigin::Premise),
            (g, ClauseOrigin::NegatedHypothesis),
        ])
        .unwrap();
        assert_eq!(lits(&cs[0]), vec!["p(sk0)"]);
        assert_eq!(lits(&cs[1]), vec!["q(sk1)"]);
    }

    #[test]
    fn iff_expands_to_both_directions() {
        let f = Formula::forall(
            "X",
            Formula::iff(
                Formula::atom("dog", vec![Term::var("X")]),
                Formula::not(Formula::atom("cat", vec![Term::var("X")])),
            ),
        );
        let cs = clausify(&f, ClauseOrigin::AxiomN).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(lits(&cs[0]), vec!["~cat(X0)", "~dog(X0)"]);
        assert_eq!(lits(&cs[1]), vec!["cat(X0)", "dog(X0)"]);
    }

    #[test]
    fn tautologies_are_dropped() {
        let f = Formula::or(
            Formula::atom("p", vec![]),
            Formula::not(Formula::atom("p", vec![])),
        );
        let cs = clausify(&f, ClauseOrigin::Premise).unwrap();
        assert!(cs.is_empty());
    }

    #[test]
    fn rejects_open_formulas() {
        let f = Formula::atom("p", vec![Term::var("X")]);
        assert_eq!(
            clausify(&f, ClauseOrigin::Premise).unwrap_err(),
            ClausifyError::FreeVariables(vec!["X".into()])
        );
    }

    #[test]
    fn expansion_guard_trips_on_pathological_input() {
        // (a1 & b1) | (a2 & b2) | ... doubles on every disjunct; 20 of
        // them would want 2^20-ish clauses.
        let mut f = Formula::and(Formula::atom("a0", vec![]), Formula::atom("b0", vec![]));
        for i in 1..20 {
            f = Formula::or(
                f,
                Formula::and(
                    Formula::atom(format!("a{i}"), vec![]),
                    Formula::atom(format!("b{i}"), vec![]),
                ),
            );
        }
        assert_eq!(
            clausify(&f, ClauseOrigin::Premise).unwrap_err(),
            ClausifyError::TooManyClauses
        );
    }
}
