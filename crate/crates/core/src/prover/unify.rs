//! Syntactic unification with occurs check.
//!
//! Bindings are held behind `Rc` and variable chains are followed by
//! reference, so unification never copies a term except at the one
//! point where a fresh binding is recorded. (The naive alternative —
//! resolving chains by cloning at every node — is quadratic in term
//! depth, which matters once saturation starts building deep terms.)

use crate::fol::{Atom, Clause, Literal, Term};
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// A finite variable-to-term map. [`unify`] always returns an idempotent
/// substitution: applying it twice equals applying it once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Rc<Term>>,
}

/// A variable chain's endpoint: either a subterm of one of the input
/// terms, or shared structure already owned by the substitution.
enum Head<'a> {
    Borrowed(&'a Term),
    Shared(Rc<Term>),
}

impl Head<'_> {
    fn term(&self) -> &Term {
        match self {
            Head::Borrowed(t) => t,
            Head::Shared(rc) => rc,
        }
    }

    /// An owned handle suitable for storing as a binding. Only this
    /// conversion ever deep-copies, and only for the `Borrowed` case.
    fn into_rc(self) -> Rc<Term> {
        match self {
            Head::Borrowed(t) => Rc::new(t.clone()),
            Head::Shared(rc) => rc,
        }
    }
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var).map(|rc| rc.as_ref())
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Variable(v) => match self.map.get(v) {
                Some(bound) => self.apply_term(bound),
                None => t.clone(),
            },
            Term::Constant(_) => t.clone(),
            Term::Function(f, args) => Term::Function(
                f.clone(),
                args.iter().map(|a| self.apply_term(a)).collect(),
            ),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            positive: l.positive,
            atom: self.apply_atom(&l.atom),
        }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause::new(
            c.literals.iter().map(|l| self.apply_literal(l)).collect(),
            c.origin.clone(),
        )
    }

    /// Resolve a variable chain to its endpoint without copying any
    /// term structure.
    fn head<'a>(&self, t: &'a Term) -> Head<'a> {
        let Term::Variable(v) = t else {
            return Head::Borrowed(t);
        };
        let mut name = v.as_str();
        loop {
            match self.map.get(name) {
                None => {
                    return if name == v {
                        Head::Borrowed(t)
                    } else {
                        Head::Shared(Rc::new(Term::Variable(name.to_string())))
                    };
                }
                Some(rc) => match rc.as_ref() {
                    Term::Variable(next) => name = next,
                    _ => return Head::Shared(Rc::clone(rc)),
                },
            }
        }
    }

    /// Does `var` occur in `t` once bindings are expanded? Entirely
    /// by-reference.
    fn occurs(&self, var: &str, t: &Term) -> bool {
        match t {
            Term::Variable(v) => {
                if v == var {
                    return true;
                }
                match self.map.get(v) {
                    Some(bound) => self.occurs(var, bound),
                    None => false,
                }
            }
            Term::Constant(_) => false,
            Term::Function(_, args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }

    /// Fully expand each binding so the substitution is idempotent.
    fn normalized(mut self) -> Substitution {
        let keys: Vec<String> = self.map.keys().cloned().collect();
        for k in keys {
            let cur = Rc::clone(&self.map[&k]);
            let expanded = self.apply_term(&cur);
            self.map.insert(k, Rc::new(expanded));
        }
        self
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        write!(f, "}}")
    }
}

/// Why unification failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifyError {
    PredicateMismatch { left: String, right: String },
    ArityMismatch { symbol: String, left: usize, right: usize },
    SymbolClash { left: String, right: String },
    OccursCheck { var: String, term: Term },
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::PredicateMismatch { left, right } => {
                write!(f, "predicate mismatch: {left} vs {right}")
            }
            UnifyError::ArityMismatch { symbol, left, right } => {
                write!(f, "arity mismatch on {symbol}: {left} vs {right}")
            }
            UnifyError::SymbolClash { left, right } => {
                write!(f, "symbol clash: {left} vs {right}")
            }
            UnifyError::OccursCheck { var, term } => {
                write!(f, "occurs check: {var} in {term}")
            }
        }
    }
}

fn unify_terms(a: &Term, b: &Term, subst: &mut Substitution) -> Result<(), UnifyError> {
    let a = subst.head(a);
    let b = subst.head(b);
    match (a.term(), b.term()) {
        (Term::Variable(x), Term::Variable(y)) if x == y => Ok(()),
        (Term::Variable(x), t) | (t, Term::Variable(x)) => {
            if subst.occurs(x, t) {
                return Err(UnifyError::OccursCheck {
                    var: x.clone(),
                    term: subst.apply_term(t),
                });
            }
            let x = x.clone();
            let bound = if matches!(a.term(), Term::Variable(v) if *v == x) {
                b.into_rc()
            } else {
                a.into_rc()
            };
            subst.map.insert(x, bound);
            Ok(())
        }
        (Term::Constant(x), Term::Constant(y)) => {
            if x == y {
                Ok(())
            } else {
                Err(UnifyError::SymbolClash {
                    left: x.clone(),
                    right: y.clone(),
                })
            }
        }
        (Term::Function(f, xs), Term::Function(g, ys)) => {
            if f != g {
                return Err(UnifyError::SymbolClash {
                    left: f.clone(),
                    right: g.clone(),
                });
            }
            if xs.len() != ys.len() {
                return Err(UnifyError::ArityMismatch {
                    symbol: f.clone(),
                    left: xs.len(),
                    right: ys.len(),
                });
            }
            for (x, y) in xs.iter().zip(ys) {
                unify_terms(x, y, subst)?;
            }
            Ok(())
        }
        (Term::Constant(x), Term::Function(g, _)) => Err(UnifyError::SymbolClash {
            left: x.clone(),
            right: g.clone(),
        }),
        (Term::Function(f, _), Term::Constant(y)) => Err(UnifyError::SymbolClash {
            left: f.clone(),
            right: y.clone(),
        }),
    }
}

/// Compute the most general unifier of two atoms, or report why none
/// exists. The result is idempotent.
pub fn unify(a: &Atom, b: &Atom) -> Result<Substitution, UnifyError> {
    if a.predicate != b.predicate {
        return Err(UnifyError::PredicateMismatch {
            left: a.predicate.clone(),
            right: b.predicate.clone(),
        });
    }
    if a.args.len() != b.args.len() {
        return Err(UnifyError::ArityMismatch {
            symbol: a.predicate.clone(),
            left: a.args.len(),
            right: b.args.len(),
        });
    }
    let mut subst = Substitution::new();
    for (x, y) in a.args.iter().zip(&b.args) {
        unify_terms(x, y, &mut subst)?;
    }
    Ok(subst.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str, args: Vec<Term>) -> Atom {
        Atom::new(p, args)
    }

    #[test]
    fn binds_variable_to_constant() {
        let s = unify(
            &atom("p", vec![Term::var("X")]),
            &atom("p", vec![Term::constant("a")]),
        )
        .unwrap();
        assert_eq!(s.apply_term(&Term::var("X")), Term::constant("a"));
    }

    #[test]
    fn predicate_mismatch_fails() {
        let err = unify(
            &atom("p", vec![Term::var("X")]),
            &atom("q", vec![Term::var("X")]),
        )
        .unwrap_err();
        assert!(matches!(err, UnifyError::PredicateMismatch { .. }));
    }

    #[test]
    fn occurs_check_fails() {
        // p(X, f(X)) vs p(Y, Y)
        let err = unify(
            &atom("p", vec![Term::var("X"), Term::func("f", vec![Term::var("X")])]),
            &atom("p", vec![Term::var("Y"), Term::var("Y")]),
        )
        .unwrap_err();
        assert!(matches!(err, UnifyError::OccursCheck { .. }), "{err:?}");
    }

    #[test]
    fn arity_mismatch_fails() {
        let err = unify(
            &atom("p", vec![Term::var("X")]),
            &atom("p", vec![Term::var("X"), Term::var("Y")]),
        )
        .unwrap_err();
        assert!(matches!(err, UnifyError::ArityMismatch { .. }));
    }

    #[test]
    fn result_is_idempotent() {
        // p(X, Y) vs p(f(Y), g(a)) forces X -> f(g(a)) after expansion.
        let s = unify(
            &atom("p", vec![Term::var("X"), Term::var("Y")]),
            &atom(
                "p",
                vec![
                    Term::func("f", vec![Term::var("Y")]),
                    Term::func("g", vec![Term::constant("a")]),
                ],
            ),
        )
        .unwrap();
        let x_once = s.apply_term(&Term::var("X"));
        let x_twice = s.apply_term(&x_once);
        assert_eq!(x_once, x_twice);
        assert_eq!(
            x_once,
            Term::func("f", vec![Term::func("g", vec![Term::constant("a")])])
        );
    }

    #[test]
    fn mgu_is_most_general_on_small_term_space() {
        // Enumerate small atom pairs; whenever unify succeeds with sigma,
        // every other unifier theta must factor through sigma:
        // theta(t) == theta(sigma(t)) for the flagship variable terms.
        let consts = [Term::constant("a"), Term::constant("b")];
        let small: Vec<Term> = vec![
            Term::var("X"),
            Term::var("Y"),
            consts[0].clone(),
            consts[1].clone(),
            Term::func("f", vec![Term::var("X")]),
            Term::func("f", vec![consts[0].clone()]),
        ];
        let mut checked = 0;
        for s in &small {
            for t in &small {
                let a = atom("p", vec![s.clone(), t.clone()]);
                let b = atom("p", vec![t.clone(), s.clone()]);
                let Ok(sigma) = unify(&a, &b) else { continue };
                // candidate thetas: all groundings of X, Y over consts
                for xt in &consts {
                    for yt in &consts {
                        let mut theta = Substitution::new();
                        theta.map.insert("X".into(), Rc::new(xt.clone()));
                        theta.map.insert("Y".into(), Rc::new(yt.clone()));
                        let ta = theta.apply_atom(&a);
                        let tb = theta.apply_atom(&b);
                        if ta != tb {
                            continue; // theta is not a unifier
                        }
                        checked += 1;
                        // theta == theta . sigma on both atoms
                        assert_eq!(theta.apply_atom(&sigma.apply_atom(&a)), ta);
                        assert_eq!(theta.apply_atom(&sigma.apply_atom(&b)), tb);
                    }
                }
            }
        }
        assert!(checked > 10, "spot check exercised {checked} unifiers");
    }
}
