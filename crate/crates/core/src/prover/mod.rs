//! Saturation-based refutation prover.
//!
//! Binary resolution plus factoring under a given-clause loop with
//! forward subsumption and tautology deletion. The loop is budgeted: once
//! the number of clauses created (counted at generation time, before any
//! subsumption filtering, input clauses excluded) exceeds the configured
//! limit, the run stops with [`ProofStatus::LimitReached`]. The default
//! budget is [`DEFAULT_CLAUSE_LIMIT`].
//!
//! Every choice point (clause selection, literal pairing) is ordered, so
//! a given clause set always produces the same result, including the
//! created-clause count.

pub mod unify;

pub use unify::{unify, Substitution, UnifyError};

use crate::fol::{Clause, ClauseOrigin, Literal, Term};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

/// Clause-creation budget used when no explicit limit is given.
pub const DEFAULT_CLAUSE_LIMIT: usize = 1500;

/// Outcome of a saturation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStatus {
    /// The empty clause was derived; the input set is unsatisfiable.
    Unsatisfiable,
    /// The search space was exhausted without deriving the empty clause.
    Saturated,
    /// The clause-creation budget ran out first.
    LimitReached,
}

impl ProofStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProofStatus::Unsatisfiable => "unsatisfiable",
            ProofStatus::Saturated => "saturated",
            ProofStatus::LimitReached => "limit_reached",
        }
    }
}

/// Result of [`saturate`]. `clauses_created` may slightly exceed the
/// limit on `LimitReached` because the budget is checked after each
/// generation batch, not after each clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofResult {
    pub status: ProofStatus,
    pub clauses_created: usize,
    /// Ids (indices into the run's clause arena) of the empty clause's
    /// ancestry, oldest first, when a refutation was found.
    pub empty_clause_derivation: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
enum Parents {
    Input,
    Resolvent(usize, usize),
    Factor(usize),
}

#[derive(Debug)]
struct Stored {
    clause: Clause,
    parents: Parents,
    hash: u64,
    ground: bool,
}

fn clause_hash(c: &Clause) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for l in &c.literals {
        l.positive.hash(&mut h);
        l.atom.predicate.hash(&mut h);
        l.atom.args.hash(&mut h);
    }
    h.finish()
}

/// One-way matching: find sigma with `pattern * sigma == target`.
fn match_term(
    pattern: &Term,
    target: &Term,
    bind: &mut HashMap<String, Term>,
) -> bool {
    match (pattern, target) {
        (Term::Variable(v), t) => match bind.get(v) {
            Some(bound) => bound == t,
            None => {
                bind.insert(v.clone(), t.clone());
                true
            }
        },
        (Term::Constant(a), Term::Constant(b)) => a == b,
        (Term::Function(f, xs), Term::Function(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, bind))
        }
        _ => false,
    }
}

fn match_literal(
    pattern: &Literal,
    target: &Literal,
    bind: &mut HashMap<String, Term>,
) -> bool {
    pattern.positive == target.positive
        && pattern.atom.predicate == target.atom.predicate
        && pattern.atom.args.len() == target.atom.args.len()
        && pattern
            .atom
            .args
            .iter()
            .zip(&target.atom.args)
            .all(|(p, t)| match_term(p, t, bind))
}

/// Does `general` subsume `specific`: is there a substitution mapping
/// every literal of `general` onto a literal of `specific`?
pub fn subsumes(general: &Clause, specific: &Clause) -> bool {
    if general.literals.len() > specific.literals.len() {
        return false;
    }
    fn go(
        pats: &[Literal],
        targets: &[Literal],
        bind: &mut HashMap<String, Term>,
    ) -> bool {
        let Some(first) = pats.first() else {
            return true;
        };
        for t in targets {
            let saved = bind.clone();
            if match_literal(first, t, bind) && go(&pats[1..], targets, bind) {
                return true;
            }
            *bind = saved;
        }
        false
    }
    go(&general.literals, &specific.literals, &mut HashMap::new())
}

fn rename_clause(c: &Clause, suffix: &str) -> Clause {
    fn go(t: &Term, suffix: &str) -> Term {
        match t {
            Term::Variable(v) => Term::Variable(format!("{v}{suffix}")),
            Term::Constant(_) => t.clone(),
            Term::Function(f, args) => {
                Term::Function(f.clone(), args.iter().map(|a| go(a, suffix)).collect())
            }
        }
    }
    Clause::new(
        c.literals
            .iter()
            .map(|l| Literal {
                positive: l.positive,
                atom: crate::fol::Atom {
                    predicate: l.atom.predicate.clone(),
                    args: l.atom.args.iter().map(|a| go(a, suffix)).collect(),
                },
            })
            .collect(),
        c.origin.clone(),
    )
}

/// Could any literal of `c1` clash with one of `c2`? Cheap screen used
/// to skip the clause-renaming work when no resolvent is possible.
fn have_complementary_pair(c1: &Clause, c2: &Clause) -> bool {
    c1.literals.iter().any(|l1| {
        c2.literals.iter().any(|l2| {
            l1.positive != l2.positive
                && l1.atom.predicate == l2.atom.predicate
                && l1.atom.args.len() == l2.atom.args.len()
        })
    })
}

/// All binary resolvents of `c1` and `c2` (standardizing the clauses
/// apart internally), in literal-pair order. Tautologies are dropped.
pub fn binary_resolvents(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    if !have_complementary_pair(c1, c2) {
        return Vec::new();
    }
    let left = rename_clause(c1, "_l");
    let right = rename_clause(c2, "_r");
    let mut out = Vec::new();
    for (i, li) in left.literals.iter().enumerate() {
        for (j, lj) in right.literals.iter().enumerate() {
            if li.positive == lj.positive {
                continue;
            }
            let Ok(sigma) = unify(&li.atom, &lj.atom) else {
                continue;
            };
            let mut lits = Vec::new();
            for (k, l) in left.literals.iter().enumerate() {
                if k != i {
                    lits.push(sigma.apply_literal(l));
                }
            }
            for (k, l) in right.literals.iter().enumerate() {
                if k != j {
                    lits.push(sigma.apply_literal(l));
                }
            }
            let resolvent = Clause::new(lits, ClauseOrigin::Derived(vec![])).canonicalized();
            if !resolvent.is_tautology() {
                out.push(resolvent);
            }
        }
    }
    out
}

/// All factors of a clause: for each unifiable same-sign literal pair,
/// the clause under their most general unifier. Tautologies are dropped.
pub fn factors(c: &Clause) -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..c.literals.len() {
        for j in (i + 1)..c.literals.len() {
            let (li, lj) = (&c.literals[i], &c.literals[j]);
            if li.positive != lj.positive {
                continue;
            }
            let Ok(sigma) = unify(&li.atom, &lj.atom) else {
                continue;
            };
            let factored = sigma.apply_clause(c).canonicalized();
            if factored.literals.len() < c.literals.len() && !factored.is_tautology() {
                out.push(Clause::new(factored.literals, ClauseOrigin::Derived(vec![])));
            }
        }
    }
    out
}

/// Everything derivable from one pair in one step: binary resolvents
/// plus the factors of each input clause.
pub fn resolve(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    let mut out = binary_resolvents(c1, c2);
    out.extend(factors(c1));
    out.extend(factors(c2));
    out
}

/// Priority key: fewest literals first, then smallest term size, then
/// earliest insertion. `BinaryHeap` is a max-heap, hence the `Reverse`.
type PassiveKey = Reverse<(usize, usize, usize)>;

struct Arena {
    stored: Vec<Stored>,
}

impl Arena {
    fn push(&mut self, clause: Clause, parents: Parents) -> usize {
        let hash = clause_hash(&clause);
        let ground = clause.is_ground();
        self.stored.push(Stored {
            clause,
            parents,
            hash,
            ground,
        });
        self.stored.len() - 1
    }
}

/// Is `id`'s clause subsumed by any clause in `kept`?
fn forward_subsumed(arena: &Arena, kept: &[usize], candidate: &Stored) -> bool {
    for &k in kept {
        let keeper = &arena.stored[k];
        if keeper.clause.literals.len() > candidate.clause.literals.len() {
            continue;
        }
        // Ground unit vs ground unit reduces to equality; compare hashes first.
        if keeper.ground
            && candidate.ground
            && keeper.clause.literals.len() == candidate.clause.literals.len()
        {
            if keeper.hash == candidate.hash && keeper.clause == candidate.clause {
                return true;
            }
            if keeper.clause.literals.len() == 1 {
                continue; // distinct ground units can't subsume each other
            }
        }
        if subsumes(&keeper.clause, &candidate.clause) {
            return true;
        }
    }
    false
}

fn derivation_trace(arena: &Arena, empty_id: usize) -> Vec<usize> {
    let mut seen = Vec::new();
    let mut stack = vec![empty_id];
    while let Some(id) = stack.pop() {
        if seen.contains(&id) {
            continue;
        }
        seen.push(id);
        match arena.stored[id].parents {
            Parents::Input => {}
            Parents::Resolvent(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Parents::Factor(a) => stack.push(a),
        }
    }
    seen.sort_unstable();
    seen
}

/// Run the given-clause loop over `inputs` with the supplied
/// clause-creation budget.
///
/// Saturation can legitimately build terms whose depth is on the order
/// of the budget (unit chains like `p(f(f(...f(a))))`), and term
/// operations recurse by depth, so the loop runs on a dedicated thread
/// with a stack provisioned for that worst case rather than whatever
/// stack the caller happens to have.
pub fn saturate(inputs: &[Clause], limit: usize) -> ProofResult {
    const PROVER_STACK_BYTES: usize = 64 * 1024 * 1024;
    let inputs = inputs.to_vec();
    let handle = std::thread::Builder::new()
        .name("saturate".to_string())
        .stack_size(PROVER_STACK_BYTES)
        .spawn(move || saturate_on_thread(&inputs, limit))
        .expect("failed to spawn prover thread");
    match handle.join() {
        Ok(result) => result,
        Err(panic) => std::panic::resume_unwind(panic),
    }
}

fn saturate_on_thread(inputs: &[Clause], limit: usize) -> ProofResult {
    let mut arena = Arena { stored: Vec::new() };
    let mut kept: Vec<usize> = Vec::new(); // passive + active, for subsumption
    let mut passive: BinaryHeap<(PassiveKey, usize)> = BinaryHeap::new();
    let mut active: Vec<usize> = Vec::new();
    let mut created = 0usize;

    let enqueue = |arena: &mut Arena,
                       kept: &mut Vec<usize>,
                       passive: &mut BinaryHeap<(PassiveKey, usize)>,
                       clause: Clause,
                       parents: Parents|
     -> Option<usize> {
        if clause.is_tautology() {
            return None;
        }
        let hash = clause_hash(&clause);
        let ground = clause.is_ground();
        let candidate = Stored {
            clause,
            parents,
            hash,
            ground,
        };
        if forward_subsumed(arena, kept, &candidate) {
            return None;
        }
        if candidate.clause.is_empty() {
            let id = arena.stored.len();
            arena.stored.push(candidate);
            return Some(id);
        }
        let key = Reverse((
            candidate.clause.literals.len(),
            candidate.clause.term_size(),
            arena.stored.len(),
        ));
        let id = arena.stored.len();
        arena.stored.push(candidate);
        kept.push(id);
        passive.push((key, id));
        None
    };

    for input in inputs {
        if input.is_empty() {
            let id = arena.push(input.canonicalized(), Parents::Input);
            return ProofResult {
                status: ProofStatus::Unsatisfiable,
                clauses_created: 0,
                empty_clause_derivation: Some(derivation_trace(&arena, id)),
            };
        }
        enqueue(
            &mut arena,
            &mut kept,
            &mut passive,
            input.canonicalized(),
            Parents::Input,
        );
    }

    while let Some((_, given_id)) = passive.pop() {
        active.push(given_id);

        // Generation batch for this given clause: factors once, then
        // resolvents against every active clause (including itself).
        let mut batch: Vec<(Clause, Parents)> = Vec::new();
        let given = &arena.stored[given_id].clause;
        for f in factors(given) {
            batch.push((f, Parents::Factor(given_id)));
        }
        for &partner_id in &active {
            let partner = &arena.stored[partner_id].clause;
            for r in binary_resolvents(given, partner) {
                batch.push((r, Parents::Resolvent(given_id, partner_id)));
            }
        }

        created += batch.len();
        for (mut clause, parents) in batch {
            let parent_ids = match &parents {
                Parents::Resolvent(a, b) => vec![*a, *b],
                Parents::Factor(a) => vec![*a],
                Parents::Input => vec![],
            };
            clause.origin = ClauseOrigin::Derived(parent_ids);
            if let Some(empty_id) = enqueue(&mut arena, &mut kept, &mut passive, clause, parents) {
                return ProofResult {
                    status: ProofStatus::Unsatisfiable,
                    clauses_created: created,
                    empty_clause_derivation: Some(derivation_trace(&arena, empty_id)),
                };
            }
        }

        // Budget check happens after the batch, so the final count can
        // overshoot the limit by at most one batch.
        if created > limit {
            return ProofResult {
                status: ProofStatus::LimitReached,
                clauses_created: created,
                empty_clause_derivation: None,
            };
        }
    }

    ProofResult {
        status: ProofStatus::Saturated,
        clauses_created: created,
        empty_clause_derivation: None,
    }
}

/// [`saturate`] with the default budget.
pub fn saturate_default(inputs: &[Clause]) -> ProofResult {
    saturate(inputs, DEFAULT_CLAUSE_LIMIT)
}
