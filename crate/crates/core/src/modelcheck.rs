//! Brute-force semantic checks for desk-scale problems.
//!
//! Satisfiability here is decided by enumerating truth assignments over
//! the distinct ground atoms of a problem, with no sharing of machinery
//! with the prover or the clausifier — this module exists so those two
//! can be checked against an implementation that cannot agree with them
//! by construction.

use crate::fol::{Atom, Clause, Formula, Term};
use std::collections::{BTreeMap, BTreeSet};

/// Practical ceiling: 2^20 assignments is the most enumeration we allow.
pub const MAX_ENUM_ATOMS: usize = 20;

/// Three-way answer: the enumerator refuses problems that are too large
/// or not ground rather than guessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumSat {
    Satisfiable,
    Unsatisfiable,
    /// Not ground, or more distinct atoms than [`MAX_ENUM_ATOMS`].
    Unsupported,
}

fn collect_clause_atoms(clauses: &[Clause]) -> Option<BTreeSet<Atom>> {
    let mut atoms = BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            if !l.atom.is_ground() {
                return None;
            }
            atoms.insert(l.atom.clone());
        }
    }
    Some(atoms)
}

fn clause_true(c: &Clause, truth: &BTreeMap<Atom, bool>) -> bool {
    c.literals
        .iter()
        .any(|l| truth.get(&l.atom).copied().unwrap_or(false) == l.positive)
}

/// Decide satisfiability of a ground clause set by enumeration.
pub fn enumerate_clause_sat(clauses: &[Clause]) -> EnumSat {
    let Some(atoms) = collect_clause_atoms(clauses) else {
        return EnumSat::Unsupported;
    };
    if atoms.len() > MAX_ENUM_ATOMS {
        return EnumSat::Unsupported;
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();
    let n = atoms.len();
    for bits in 0u64..(1u64 << n) {
        let truth: BTreeMap<Atom, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), bits & (1 << i) != 0))
            .collect();
        if clauses.iter().all(|c| clause_true(c, &truth)) {
            return EnumSat::Satisfiable;
        }
    }
    EnumSat::Unsatisfiable
}

fn formula_atoms(f: &Formula, out: &mut BTreeSet<Atom>) -> bool {
    match f {
        Formula::Atom(a) => {
            if !a.is_ground() {
                return false;
            }
            out.insert(a.clone());
            true
        }
        Formula::Not(x) => formula_atoms(x, out),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b) => formula_atoms(a, out) && formula_atoms(b, out),
        Formula::Forall(_, _) | Formula::Exists(_, _) => false,
    }
}

/// Evaluate a quantifier-free ground formula under a truth assignment.
pub fn eval_formula(f: &Formula, truth: &BTreeMap<Atom, bool>) -> Option<bool> {
    match f {
        Formula::Atom(a) => truth.get(a).copied(),
        Formula::Not(x) => eval_formula(x, truth).map(|b| !b),
        Formula::And(a, b) => Some(eval_formula(a, truth)? && eval_formula(b, truth)?),
        Formula::Or(a, b) => Some(eval_formula(a, truth)? || eval_formula(b, truth)?),
        Formula::Implies(a, b) => Some(!eval_formula(a, truth)? || eval_formula(b, truth)?),
        Formula::Iff(a, b) => Some(eval_formula(a, truth)? == eval_formula(b, truth)?),
        Formula::Forall(_, _) | Formula::Exists(_, _) => None,
    }
}

/// Decide satisfiability of a quantifier-free ground formula by truth
/// table.
pub fn enumerate_formula_sat(f: &Formula) -> EnumSat {
    let mut atoms = BTreeSet::new();
    if !formula_atoms(f, &mut atoms) {
        return EnumSat::Unsupported;
    }
    if atoms.len() > MAX_ENUM_ATOMS {
        return EnumSat::Unsupported;
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();
    let n = atoms.len();
    for bits in 0u64..(1u64 << n) {
        let truth: BTreeMap<Atom, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), bits & (1 << i) != 0))
            .collect();
        if eval_formula(f, &truth) == Some(true) {
            return EnumSat::Satisfiable;
        }
    }
    EnumSat::Unsatisfiable
}

/// Decide satisfiability of a ground clause set by unit-propagating
/// backtracking search (DPLL). Same answers as
/// [`enumerate_clause_sat`] but scales past [`MAX_ENUM_ATOMS`]; still
/// purely semantic — no resolution, no unification.
pub fn dpll_clause_sat(clauses: &[Clause]) -> EnumSat {
    let Some(atom_set) = collect_clause_atoms(clauses) else {
        return EnumSat::Unsupported;
    };
    let atoms: Vec<Atom> = atom_set.into_iter().collect();
    let index: BTreeMap<&Atom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let lits: Vec<Vec<(usize, bool)>> = clauses
        .iter()
        .map(|c| {
            c.literals
                .iter()
                .map(|l| (index[&l.atom], l.positive))
                .collect()
        })
        .collect();
    let mut assign: Vec<Option<bool>> = vec![None; atoms.len()];
    if dpll(&lits, &mut assign) {
        EnumSat::Satisfiable
    } else {
        EnumSat::Unsatisfiable
    }
}

fn dpll(clauses: &[Vec<(usize, bool)>], assign: &mut Vec<Option<bool>>) -> bool {
    // Unit propagation to fixpoint.
    let mut trail: Vec<usize> = Vec::new();
    loop {
        let mut unit: Option<(usize, bool)> = None;
        let mut conflict = false;
        for c in clauses {
            let mut unassigned: Option<(usize, bool)> = None;
            let mut satisfied = false;
            let mut open = 0;
            for &(a, pos) in c {
                match assign[a] {
                    Some(v) if v == pos => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some((a, pos));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => {
                    conflict = true;
                    break;
                }
                1 => {
                    unit = unassigned;
                    break;
                }
                _ => {}
            }
        }
        if conflict {
            for a in trail {
                assign[a] = None;
            }
            return false;
        }
        match unit {
            Some((a, pos)) => {
                assign[a] = Some(pos);
                trail.push(a);
            }
            None => break,
        }
    }
    // Pick a branching atom from any clause not yet satisfied.
    let mut branch: Option<usize> = None;
    'outer: for c in clauses {
        if c.iter()
            .any(|&(a, pos)| assign[a].map(|v| v == pos).unwrap_or(false))
        {
            continue;
        }
        for &(a, _) in c {
            if assign[a].is_none() {
                branch = Some(a);
                break 'outer;
            }
        }
    }
    let Some(a) = branch else {
        return true; // every clause satisfied
    };
    for value in [true, false] {
        assign[a] = Some(value);
        if dpll(clauses, assign) {
            return true;
        }
    }
    assign[a] = None;
    for a in trail {
        assign[a] = None;
    }
    false
}

fn collect_constants_term(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Variable(_) => {}
        Term::Constant(c) => {
            out.insert(c.clone());
        }
        Term::Function(_, args) => {
            for a in args {
                collect_constants_term(a, out);
            }
        }
    }
}

/// All constants appearing in a clause set.
pub fn constants_of(clauses: &[Clause]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            for t in &l.atom.args {
                collect_constants_term(t, &mut out);
            }
        }
    }
    out
}

fn instantiate_term(t: &Term, env: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Variable(v) => env.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Constant(_) => t.clone(),
        Term::Function(f, args) => Term::Function(
            f.clone(),
            args.iter().map(|a| instantiate_term(a, env)).collect(),
        ),
    }
}

/// Ground a clause set over its own constants (depth-0 Herbrand
/// instantiation: variables range over constants only, function terms
/// are not expanded further). If the instantiated set is unsatisfiable
/// then so is the original — the converse does not hold, so a
/// `Satisfiable` answer here is inconclusive for non-ground inputs.
pub fn ground_instances(clauses: &[Clause]) -> Option<Vec<Clause>> {
    let mut consts = constants_of(clauses);
    if consts.is_empty() {
        consts.insert("c0".to_string());
    }
    let consts: Vec<Term> = consts.into_iter().map(Term::Constant).collect();
    let mut out = Vec::new();
    for c in clauses {
        let vars: Vec<String> = c.vars().into_iter().collect();
        if vars.is_empty() {
            out.push(c.clone());
            continue;
        }
        // Refuse combinatorial blowups.
        let combos = consts.len().checked_pow(vars.len() as u32)?;
        if combos > 4096 {
            return None;
        }
        let mut idx = vec![0usize; vars.len()];
        loop {
            let env: BTreeMap<String, Term> = vars
                .iter()
                .cloned()
                .zip(idx.iter().map(|&i| consts[i].clone()))
                .collect();
            let lits = c
                .literals
                .iter()
                .map(|l| crate::fol::Literal {
                    positive: l.positive,
                    atom: Atom {
                        predicate: l.atom.predicate.clone(),
                        args: l.atom.args.iter().map(|t| instantiate_term(t, &env)).collect(),
                    },
                })
                .collect();
            out.push(Clause::new(lits, c.origin.clone()));
            // advance the odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < consts.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Some(out)
}

/// Sound unsatisfiability check for possibly-non-ground clause sets:
/// returns `Unsatisfiable` only when the depth-0 ground instantiation is
/// unsatisfiable by enumeration. `Satisfiable` means "no refutation at
/// this depth", not a model of the original set.
pub fn ground_unsat_witness(clauses: &[Clause]) -> EnumSat {
    let Some(grounded) = ground_instances(clauses) else {
        return EnumSat::Unsupported;
    };
    match enumerate_clause_sat(&grounded) {
        // Too many distinct atoms to enumerate: fall back to search,
        // which answers the same question without the size ceiling.
        EnumSat::Unsupported => dpll_clause_sat(&grounded),
        answer => answer,
    }
}
