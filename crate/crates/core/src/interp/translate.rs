//! The recursive translation of source formulas along an interpretation.
//!
//! Each source variable `v` becomes the fresh tuple `v__1..v__k`; the double
//! underscore splits names unambiguously because the index is all digits.
//! Atomic formulas are replaced by the interpretation's formulas with slot
//! blocks instantiated; connectives distribute; an existential becomes a
//! domain-guarded existential block and a universal its relativized dual.

use std::collections::BTreeMap;

use crate::logic::{Formula, Term};

use super::{block_subst, Interpretation, InterpError};

pub fn translate(phi: &Formula, interp: &Interpretation) -> Result<Formula, InterpError> {
    phi.validate(interp.source())?;
    let mut tr = Translator {
        interp,
        taken: phi.all_vars(),
        fresh_counter: 0,
    };
    tr.go(phi)
}

struct Translator<'a> {
    interp: &'a Interpretation,
    taken: std::collections::BTreeSet<String>,
    fresh_counter: usize,
}

fn family(v: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{v}__{i}")).collect()
}

impl Translator<'_> {
    fn go(&mut self, phi: &Formula) -> Result<Formula, InterpError> {
        let k = self.interp.dim();
        match phi {
            Formula::Rel(name, args) => {
                let base = self
                    .interp
                    .relation_formula(name)
                    .ok_or_else(|| InterpError::MissingTranslation(name.clone()))?
                    .clone();
                self.atom(&base, args)
            }
            Formula::Eq(a, b) => {
                let base = self.interp.equality_formula().clone();
                self.atom(&base, &[a.clone(), b.clone()])
            }
            Formula::Not(f) => Ok(Formula::not(self.go(f)?)),
            Formula::And(a, b) => Ok(Formula::and(self.go(a)?, self.go(b)?)),
            Formula::Or(a, b) => Ok(Formula::or(self.go(a)?, self.go(b)?)),
            Formula::Implies(a, b) => Ok(Formula::implies(self.go(a)?, self.go(b)?)),
            Formula::Exists(v, f) => {
                let fam = family(v, k);
                let guard = self
                    .interp
                    .domain_formula()
                    .substitute(&block_subst(k, 1, &fam));
                let mut out = Formula::and(guard, self.go(f)?);
                for name in fam.into_iter().rev() {
                    out = Formula::exists(name, out);
                }
                Ok(out)
            }
            Formula::Forall(v, f) => {
                let fam = family(v, k);
                let guard = self
                    .interp
                    .domain_formula()
                    .substitute(&block_subst(k, 1, &fam));
                let mut out = Formula::implies(guard, self.go(f)?);
                for name in fam.into_iter().rev() {
                    out = Formula::forall(name, out);
                }
                Ok(out)
            }
        }
    }

    /// Instantiates an interpretation formula at the given argument terms.
    /// Variable arguments substitute their tuple families directly; constant
    /// arguments are unpacked through a fresh domain-guarded existential
    /// block constrained by the constant's defining formula.
    fn atom(&mut self, base: &Formula, args: &[Term]) -> Result<Formula, InterpError> {
        let k = self.interp.dim();
        let mut subst = BTreeMap::new();
        let mut wrappers: Vec<(Vec<String>, Formula)> = Vec::new();
        for (j, arg) in args.iter().enumerate() {
            let fam = match arg {
                Term::Var(v) => family(v, k),
                Term::Const(c) => {
                    let cf = self
                        .interp
                        .constant_formula(c)
                        .ok_or_else(|| InterpError::MissingTranslation(c.clone()))?;
                    let fam = self.fresh_family();
                    let guard = self
                        .interp
                        .domain_formula()
                        .substitute(&block_subst(k, 1, &fam));
                    let pick = cf.substitute(&block_subst(k, 1, &fam));
                    wrappers.push((fam.clone(), Formula::and(guard, pick)));
                    fam
                }
            };
            for (i, name) in fam.iter().enumerate() {
                subst.insert(
                    super::slot_name(j * k + i + 1),
                    Term::Var(name.clone()),
                );
            }
        }
        let mut out = base.substitute(&subst);
        for (fam, constraint) in wrappers.into_iter().rev() {
            out = Formula::and(constraint, out);
            for name in fam.into_iter().rev() {
                out = Formula::exists(name, out);
            }
        }
        Ok(out)
    }

    fn fresh_family(&mut self) -> Vec<String> {
        loop {
            let base = format!("q__c{}", self.fresh_counter);
            self.fresh_counter += 1;
            if !self.taken.contains(&base) {
                self.taken.insert(base.clone());
                return family(&base, self.interp.dim());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};

    fn graph_sig() -> Signature {
        Signature::membership()
    }

    fn reversal() -> Interpretation {
        let sig = graph_sig();
        let mut rels = BTreeMap::new();
        rels.insert("E".to_string(), parse_formula("E(x2,x1)", &sig).unwrap());
        Interpretation::new(
            sig.clone(),
            sig,
            1,
            parse_formula("x1=x1", &graph_sig()).unwrap(),
            parse_formula("x1=x2", &graph_sig()).unwrap(),
            rels,
            BTreeMap::new(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn negation_distributes() {
        let phi = parse_formula("~E(x,y)", &graph_sig()).unwrap();
        let t = translate(&phi, &reversal()).unwrap();
        assert_eq!(t.render(), "~E(y__1,x__1)");
    }

    #[test]
    fn existential_is_domain_guarded() {
        let phi = parse_formula("Ex.x=x", &graph_sig()).unwrap();
        let t = translate(&phi, &reversal()).unwrap();
        assert_eq!(t.render(), "Ex__1.(x__1=x__1 & x__1=x__1)");
    }

    #[test]
    fn universal_is_relativized() {
        let phi = parse_formula("Ax.E(x,x)", &graph_sig()).unwrap();
        let t = translate(&phi, &reversal()).unwrap();
        assert_eq!(t.render(), "Ax__1.(x__1=x__1 -> E(x__1,x__1))");
    }

    #[test]
    fn dimension_two_expands_tuples() {
        let sig = graph_sig();
        let mut rels = BTreeMap::new();
        // arity 2 × dim 2: slots x1..x4
        rels.insert(
            "E".to_string(),
            parse_formula("(E(x1,x3) & E(x2,x4))", &sig).unwrap(),
        );
        let pairs = Interpretation::new(
            sig.clone(),
            sig.clone(),
            2,
            parse_formula("x1=x1", &sig).unwrap(),
            parse_formula("(x1=x3 & x2=x4)", &sig).unwrap(),
            rels,
            BTreeMap::new(),
            vec![],
        )
        .unwrap();
        let phi = parse_formula("Eu.E(u,u)", &sig).unwrap();
        let t = translate(&phi, &pairs).unwrap();
        assert_eq!(
            t.render(),
            "Eu__1.Eu__2.(u__1=u__1 & (E(u__1,u__1) & E(u__2,u__2)))"
        );
    }

    #[test]
    fn constant_arguments_unpack_existentially() {
        let sig = Signature::new([("E".to_string(), 2)], ["c".to_string()]).unwrap();
        let mut rels = BTreeMap::new();
        rels.insert("E".to_string(), parse_formula("E(x1,x2)", &sig).unwrap());
        let mut consts = BTreeMap::new();
        consts.insert("c".to_string(), parse_formula("x1=c", &sig).unwrap());
        let id_with_const = Interpretation::new(
            sig.clone(),
            sig.clone(),
            1,
            parse_formula("x1=x1", &sig).unwrap(),
            parse_formula("x1=x2", &sig).unwrap(),
            rels,
            consts,
            vec![],
        )
        .unwrap();
        let phi = parse_formula("E(c,y)", &sig).unwrap();
        let t = translate(&phi, &id_with_const).unwrap();
        assert_eq!(
            t.render(),
            "Eq__c0__1.((q__c0__1=q__c0__1 & q__c0__1=c) & E(q__c0__1,y__1))"
        );
    }

    #[test]
    fn missing_constant_formula_errors() {
        let sig = Signature::new([("E".to_string(), 2)], ["c".to_string()]).unwrap();
        let mut rels = BTreeMap::new();
        rels.insert("E".to_string(), parse_formula("E(x1,x2)", &sig).unwrap());
        let interp = Interpretation::new(
            sig.clone(),
            sig.clone(),
            1,
            parse_formula("x1=x1", &sig).unwrap(),
            parse_formula("x1=x2", &sig).unwrap(),
            rels,
            BTreeMap::new(),
            vec![],
        )
        .unwrap();
        let phi = parse_formula("E(c,y)", &sig).unwrap();
        assert_eq!(
            translate(&phi, &interp).unwrap_err(),
            InterpError::MissingTranslation("c".to_string())
        );
    }

    #[test]
    fn identity_translation_is_semantically_transparent() {
        use crate::logic::{evaluate, Assignment};
        use crate::model::BinRel;
        let sig = graph_sig();
        let id = Interpretation::identity(&sig);
        let sentences = [
            "Ax.x=x",
            "Ex.E(x,x)",
            "Ax.Ey.E(x,y)",
            "Ex.Ey.(E(x,y) & ~x=y)",
            "Ax.(E(x,x) -> Ey.E(y,x))",
        ];
        for n in 1..=3usize {
            for mask in 0u32..(1 << (n * n)) {
                let edges = (0..n * n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i / n, i % n));
                let m = BinRel::new(n, edges).unwrap().as_structure();
                for text in sentences {
                    let phi = parse_formula(text, &sig).unwrap();
                    let direct = evaluate(&m, &phi, &Assignment::new()).unwrap();
                    let translated = translate(&phi, &id).unwrap();
                    let via = evaluate(&m, &translated, &Assignment::new()).unwrap();
                    assert_eq!(direct, via, "{text} on n={n} mask={mask}");
                }
            }
        }
    }

    #[test]
    fn universal_agrees_with_its_classical_dual() {
        // the translation defines ∀ by relativization; it must coincide with
        // ¬∃¬ under evaluation
        use crate::logic::{evaluate, Assignment};
        use crate::model::BinRel;
        let sig = graph_sig();
        let rev = reversal();
        let bodies = ["E(x,x)", "Ey.E(x,y)", "(E(x,x) -> Ey.E(y,x))"];
        for n in 1..=3usize {
            for mask in 0u32..(1 << (n * n)) {
                let edges = (0..n * n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i / n, i % n));
                let m = BinRel::new(n, edges).unwrap().as_structure();
                for body in bodies {
                    let all = parse_formula(&format!("Ax.{body}"), &sig).unwrap();
                    let dual = parse_formula(&format!("~Ex.~{body}"), &sig).unwrap();
                    let t_all = translate(&all, &rev).unwrap();
                    let t_dual = translate(&dual, &rev).unwrap();
                    assert_eq!(
                        evaluate(&m, &t_all, &Assignment::new()).unwrap(),
                        evaluate(&m, &t_dual, &Assignment::new()).unwrap(),
                        "{body} on n={n} mask={mask}"
                    );
                }
            }
        }
    }

    #[test]
    fn shadowing_translates_to_shadowing() {
        let sig = graph_sig();
        let phi = parse_formula("Ex.(E(x,x) & Ex.E(x,x))", &sig).unwrap();
        let t = translate(&phi, &reversal()).unwrap();
        assert_eq!(
            t.render(),
            "Ex__1.(x__1=x__1 & (E(x__1,x__1) & Ex__1.(x__1=x__1 & E(x__1,x__1))))"
        );
    }
}
