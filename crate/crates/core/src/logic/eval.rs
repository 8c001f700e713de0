//! Tarskian satisfaction over finite structures.

use std::collections::BTreeMap;

use super::{Formula, LogicError, Term};
use crate::model::FinStructure;

/// Partial map from variable names to domain elements.
pub type Assignment = BTreeMap<String, usize>;

/// Classical truth value of `phi` in `m` under `asg`.
///
/// The assignment must cover every free variable and every symbol of `phi`
/// must be interpreted in `m`. Quantifiers short-circuit.
pub fn evaluate(m: &FinStructure, phi: &Formula, asg: &Assignment) -> Result<bool, LogicError> {
    let mut scope = asg.clone();
    eval_rec(m, phi, &mut scope)
}

fn term_value(m: &FinStructure, t: &Term, scope: &Assignment) -> Result<usize, LogicError> {
    match t {
        Term::Var(v) => scope
            .get(v)
            .copied()
            .ok_or_else(|| LogicError::UncoveredVariable(v.clone())),
        Term::Const(c) => m
            .constant(c)
            .ok_or_else(|| LogicError::MissingInterpretation(c.clone())),
    }
}

fn eval_rec(m: &FinStructure, phi: &Formula, scope: &mut Assignment) -> Result<bool, LogicError> {
    match phi {
        Formula::Rel(name, args) => {
            let tuple = args
                .iter()
                .map(|t| term_value(m, t, scope))
                .collect::<Result<Vec<_>, _>>()?;
            let table = m
                .relation(name)
                .ok_or_else(|| LogicError::MissingInterpretation(name.clone()))?;
            Ok(table.contains(&tuple))
        }
        Formula::Eq(a, b) => Ok(term_value(m, a, scope)? == term_value(m, b, scope)?),
        Formula::Not(f) => Ok(!eval_rec(m, f, scope)?),
        Formula::And(a, b) => Ok(eval_rec(m, a, scope)? && eval_rec(m, b, scope)?),
        Formula::Or(a, b) => Ok(eval_rec(m, a, scope)? || eval_rec(m, b, scope)?),
        Formula::Implies(a, b) => Ok(!eval_rec(m, a, scope)? || eval_rec(m, b, scope)?),
        Formula::Exists(v, f) => {
            let saved = scope.get(v).copied();
            let mut found = false;
            for e in 0..m.size() {
                scope.insert(v.clone(), e);
                if eval_rec(m, f, scope)? {
                    found = true;
                    break;
                }
            }
            restore(scope, v, saved);
            Ok(found)
        }
        Formula::Forall(v, f) => {
            let saved = scope.get(v).copied();
            let mut holds = true;
            for e in 0..m.size() {
                scope.insert(v.clone(), e);
                if !eval_rec(m, f, scope)? {
                    holds = false;
                    break;
                }
            }
            restore(scope, v, saved);
            Ok(holds)
        }
    }
}

fn restore(scope: &mut Assignment, v: &str, saved: Option<usize>) {
    match saved {
        Some(e) => {
            scope.insert(v.to_string(), e);
        }
        None => {
            scope.remove(v);
        }
    }
}

/// The set of tuples over `vars` satisfying `phi`, i.e. the relation `phi`
/// defines on `m` with the given variable order.
///
/// Free variables of `phi` must be among `vars`.
pub fn satisfying_tuples(
    m: &FinStructure,
    phi: &Formula,
    vars: &[String],
) -> Result<Vec<Vec<usize>>, LogicError> {
    for v in phi.free_vars() {
        if !vars.contains(&v) {
            return Err(LogicError::UncoveredVariable(v));
        }
    }
    let mut out = Vec::new();
    let mut tuple = vec![0usize; vars.len()];
    let mut asg = Assignment::new();
    loop {
        asg.clear();
        for (v, &e) in vars.iter().zip(tuple.iter()) {
            asg.insert(v.clone(), e);
        }
        if evaluate(m, phi, &asg)? {
            out.push(tuple.clone());
        }
        // odometer over the domain
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < m.size() {
                break;
            }
            tuple[i] = 0;
        }
        if m.size() == 0 {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::model::FinStructure;

    fn two_cycle() -> FinStructure {
        FinStructure::new(
            crate::logic::Signature::membership(),
            2,
            [("E".to_string(), vec![vec![0, 1], vec![1, 0]])],
            [],
        )
        .unwrap()
    }

    fn edgeless(n: usize) -> FinStructure {
        FinStructure::new(
            crate::logic::Signature::membership(),
            n,
            [("E".to_string(), vec![])],
            [],
        )
        .unwrap()
    }

    #[test]
    fn two_cycle_has_total_out_edges() {
        let m = two_cycle();
        let f = parse_formula("Ax.Ey.E(x,y)", m.signature()).unwrap();
        assert!(evaluate(&m, &f, &Assignment::new()).unwrap());
    }

    #[test]
    fn identity_sentence_true_everywhere() {
        let f = parse_formula("Ax.(x=x)", &crate::logic::Signature::empty()).unwrap();
        for m in [two_cycle(), edgeless(2), edgeless(5)] {
            assert!(evaluate(&m, &f, &Assignment::new()).unwrap());
        }
    }

    #[test]
    fn edgeless_has_no_self_loop() {
        let m = edgeless(2);
        let f = parse_formula("Ex.E(x,x)", m.signature()).unwrap();
        assert!(!evaluate(&m, &f, &Assignment::new()).unwrap());
    }

    #[test]
    fn uncovered_variable_is_an_error() {
        let m = edgeless(2);
        let f = parse_formula("E(x,y)", m.signature()).unwrap();
        let asg = Assignment::from([("x".to_string(), 0)]);
        assert_eq!(
            evaluate(&m, &f, &asg).unwrap_err(),
            LogicError::UncoveredVariable("y".to_string())
        );
    }

    #[test]
    fn missing_symbol_is_an_error() {
        // formula parsed against a richer signature than the structure carries
        let sig = crate::logic::Signature::new([("R".to_string(), 1)], []).unwrap();
        let f = parse_formula("R(x)", &sig).unwrap();
        let m = edgeless(2);
        let asg = Assignment::from([("x".to_string(), 0)]);
        assert_eq!(
            evaluate(&m, &f, &asg).unwrap_err(),
            LogicError::MissingInterpretation("R".to_string())
        );
    }
}
