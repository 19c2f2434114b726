//! First-order logic syntax: terms, formulas, clauses.
//!
//! The formula language is function-complete FOL without equality. The
//! concrete syntax used for interchange is the TPTP `fof` dialect
//! (see [`tptp`]); [`clausify`] lowers formulas to clause normal form.

pub mod clausify;
pub mod tptp;

pub use clausify::{clausify, clausify_formulas, ClausifyError, MAX_CNF_CLAUSES};
pub use tptp::{parse_tptp, serialize_tptp, Role, TptpError};

use std::collections::BTreeSet;
use std::fmt;

/// A first-order term. Variables are uppercase-initial in the TPTP
/// rendering; constants and function symbols are lowercase-initial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Variable(String),
    Constant(String),
    Function(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Variable(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Constant(name.into())
    }

    pub fn func(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Function(name.into(), args)
    }

    /// Number of symbol occurrences (variables, constants, functors).
    pub fn size(&self) -> usize {
        match self {
            Term::Variable(_) | Term::Constant(_) => 1,
            Term::Function(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Variable(_) => false,
            Term::Constant(_) => true,
            Term::Function(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(v) => {
                out.insert(v.clone());
            }
            Term::Constant(_) => {}
            Term::Function(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => write!(f, "{v}"),
            Term::Constant(c) => write!(f, "{c}"),
            Term::Function(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A predicate applied to terms. Arity zero renders without parentheses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for a in &self.args {
            a.collect_vars(out);
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            return write!(f, "{}", self.predicate);
        }
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A closed or open first-order formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(predicate, args))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Fold a non-empty list into a right-nested conjunction.
    pub fn and_all(mut parts: Vec<Formula>) -> Option<Formula> {
        let mut acc = parts.pop()?;
        while let Some(f) = parts.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    /// Variables occurring free in the formula.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(a) => {
                    let mut vars = BTreeSet::new();
                    a.collect_vars(&mut vars);
                    for v in vars {
                        if !bound.iter().any(|b| *b == v) {
                            out.insert(v);
                        }
                    }
                }
                Formula::Not(x) => go(x, bound, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    bound.push(v.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of quantifier nodes.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(x) => x.quantifier_count(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.quantifier_count(),
        }
    }

    /// Structural equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn term_eq(a: &Term, b: &Term, map: &[(String, String)]) -> bool {
            match (a, b) {
                (Term::Variable(x), Term::Variable(y)) => {
                    // Bound variables must correspond through the innermost
                    // binding; free variables must match by name.
                    for (l, r) in map.iter().rev() {
                        match (l == x, r == y) {
                            (true, true) => return true,
                            (true, false) | (false, true) => return false,
                            (false, false) => {}
                        }
                    }
                    x == y
                }
                (Term::Constant(x), Term::Constant(y)) => x == y,
                (Term::Function(f, xs), Term::Function(g, ys)) => {
                    f == g
                        && xs.len() == ys.len()
                        && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, map))
                }
                _ => false,
            }
        }
        fn go(a: &Formula, b: &Formula, map: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Formula::Atom(x), Formula::Atom(y)) => {
                    x.predicate == y.predicate
                        && x.args.len() == y.args.len()
                        && x.args.iter().zip(&y.args).all(|(s, t)| term_eq(s, t, map))
                }
                (Formula::Not(x), Formula::Not(y)) => go(x, y, map),
                (Formula::And(a1, a2), Formula::And(b1, b2))
                | (Formula::Or(a1, a2), Formula::Or(b1, b2))
                | (Formula::Implies(a1, a2), Formula::Implies(b1, b2))
                | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => {
                    go(a1, b1, map) && go(a2, b2, map)
                }
                (Formula::Forall(v, x), Formula::Forall(w, y))
                | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
                    map.push((v.clone(), w.clone()));
                    let ok = go(x, y, map);
                    map.pop();
                    ok
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "~({x})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            Formula::Forall(v, x) => write!(f, "(![{v}]: {x})"),
            Formula::Exists(v, x) => write!(f, "(?[{v}]: {x})"),
        }
    }
}

/// A signed atom inside a clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~{}", self.atom)
        }
    }
}

/// Where a clause came from, for reporting and trace output.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum ClauseOrigin {
    Premise,
    NegatedHypothesis,
    Hypothesis,
    AxiomA,
    AxiomN,
    /// Derived in the prover; carries the parent clause ids.
    Derived(Vec<usize>),
}

/// A disjunction of literals. Literals are kept sorted and deduplicated,
/// so two clauses with the same literal set compare equal; the origin is
/// bookkeeping and does not participate in equality.
#[derive(Debug, Clone)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub origin: ClauseOrigin,
}

impl PartialEq for Clause {
    fn eq(&self, other: &Clause) -> bool {
        self.literals == other.literals
    }
}

impl Eq for Clause {}

impl Clause {
    pub fn new(mut literals: Vec<Literal>, origin: ClauseOrigin) -> Clause {
        literals.sort();
        literals.dedup();
        Clause { literals, origin }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// True when some literal's complement is also present.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .any(|l| self.literals.iter().any(|m| l.complement_of(m)))
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.collect_vars(&mut out);
        }
        out
    }

    /// Total symbol count over all literals; used by the prover's
    /// clause-selection heuristic.
    pub fn term_size(&self) -> usize {
        self.literals.iter().map(|l| l.atom.size()).sum()
    }

    /// Rename variables to `X0, X1, ...` in order of first occurrence.
    pub fn canonicalized(&self) -> Clause {
        let mut order: Vec<String> = Vec::new();
        fn walk(t: &Term, order: &mut Vec<String>) {
            match t {
                Term::Variable(v) => {
                    if !order.iter().any(|o| o == v) {
                        order.push(v.clone());
                    }
                }
                Term::Constant(_) => {}
                Term::Function(_, args) => {
                    for a in args {
                        walk(a, order);
                    }
                }
            }
        }
        for l in &self.literals {
            for a in &l.atom.args {
                walk(a, &mut order);
            }
        }
        let rename: Vec<(String, String)> = order
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), format!("X{i}")))
            .collect();
        fn apply(t: &Term, rename: &[(String, String)]) -> Term {
            match t {
                Term::Variable(v) => {
                    let new = rename
                        .iter()
                        .find(|(old, _)| old == v)
                        .map(|(_, n)| n.clone())
                        .unwrap_or_else(|| v.clone());
                    Term::Variable(new)
                }
                Term::Constant(c) => Term::Constant(c.clone()),
                Term::Function(f, args) => Term::Function(
                    f.clone(),
                    args.iter().map(|a| apply(a, rename)).collect(),
                ),
            }
        }
        let literals = self
            .literals
            .iter()
            .map(|l| Literal {
                positive: l.positive,
                atom: Atom {
                    predicate: l.atom.predicate.clone(),
                    args: l.atom.args.iter().map(|a| apply(a, &rename)).collect(),
                },
            })
            .collect();
        Clause::new(literals, self.origin.clone())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "[]");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
