//! Mutual interpretation, bi-interpretation, and synonymy checks, plus the
//! per-axiom theory-interpretation report and theory disjunction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::logic::{evaluate, satisfying_tuples, Assignment, Formula};
use crate::model::{find_isomorphisms, FinStructure};

use super::{apply, slot_names, translate, Applied, BiInterpretation, Interpretation, InterpError, Theory};

const ISO_CAP: usize = 8;

/// Per-axiom verdicts for "the target structure believes the translated
/// source theory".
#[derive(Debug, Clone, Serialize)]
pub struct TheoryReport {
    pub theory: String,
    pub axioms: Vec<AxiomVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub translated: String,
    pub holds: bool,
}

impl TheoryReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }
}

/// Evaluates the translation of every axiom of `t1` in the finite stand-in
/// model `m` of the hosting theory.
pub fn check_theory_interpretation(
    interp: &Interpretation,
    t1: &Theory,
    m: &FinStructure,
) -> Result<TheoryReport, InterpError> {
    if t1.sig != *interp.source() {
        return Err(InterpError::SignatureMismatch(
            "theory signature differs from the interpretation source".to_string(),
        ));
    }
    let m_aug = m.with_extra_constants(
        interp
            .params()
            .iter()
            .enumerate()
            .map(|(i, &e)| (format!("p{}", i + 1), e)),
    )?;
    let mut axioms = Vec::new();
    for ax in &t1.axioms {
        let translated = translate(ax, interp)?;
        let holds = evaluate(&m_aug, &translated, &Assignment::new())?;
        axioms.push(AxiomVerdict {
            axiom: ax.render(),
            translated: translated.render(),
            holds,
        });
    }
    Ok(TheoryReport {
        theory: t1.name.clone(),
        axioms,
    })
}

/// All pairwise disjunctions of axioms; a structure models the result iff it
/// models one of the inputs.
pub fn theory_disjunction(t1: &Theory, t2: &Theory) -> Result<Theory, InterpError> {
    if t1.sig != t2.sig {
        return Err(InterpError::SignatureMismatch(
            "theories are over different signatures".to_string(),
        ));
    }
    let axioms: Vec<Formula> = t1
        .axioms
        .iter()
        .flat_map(|a| t2.axioms.iter().map(move |b| Formula::or(a.clone(), b.clone())))
        .collect();
    Theory::new(
        format!("({} | {})", t1.name, t2.name),
        t1.sig.clone(),
        axioms,
    )
}

/// The two directions of a mutual interpretation, with witnessing
/// isomorphisms and the iterated double-interpretation structures.
#[derive(Debug, Clone)]
pub struct MutualReport {
    /// apply(J, M) ≅ N, with a witness when it holds.
    pub m_interprets_n: Option<Vec<usize>>,
    /// apply(I, N) ≅ M.
    pub n_interprets_m: Option<Vec<usize>>,
    /// M̄ = apply(I, apply(J, M)).
    pub mbar: Applied,
    /// N̄ = apply(J, apply(I, N)).
    pub nbar: Applied,
}

impl MutualReport {
    pub fn mutual(&self) -> bool {
        self.m_interprets_n.is_some() && self.n_interprets_m.is_some()
    }
}

/// Checks that `i` and `j` mutually interpret `m` and `n`: `i` interprets
/// `m`'s language inside `n`, `j` the other way. The isomorphism oracle
/// supplies the verdicts.
pub fn check_mutual(
    m: &FinStructure,
    n: &FinStructure,
    i: &Interpretation,
    j: &Interpretation,
) -> Result<MutualReport, InterpError> {
    if i.source() != m.signature() || i.target() != n.signature() {
        return Err(InterpError::SignatureMismatch(
            "interpretation `i` must interpret M's language inside N".to_string(),
        ));
    }
    if j.source() != n.signature() || j.target() != m.signature() {
        return Err(InterpError::SignatureMismatch(
            "interpretation `j` must interpret N's language inside M".to_string(),
        ));
    }
    let jm = apply(j, m)?;
    let m_interprets_n = find_isomorphisms(&jm.structure, n, ISO_CAP)?
        .into_iter()
        .next();
    let in_ = apply(i, n)?;
    let n_interprets_m = find_isomorphisms(&in_.structure, m, ISO_CAP)?
        .into_iter()
        .next();
    let mbar = apply(i, &jm.structure)?;
    let nbar = apply(j, &in_.structure)?;
    Ok(MutualReport {
        m_interprets_n,
        n_interprets_m,
        mbar,
        nbar,
    })
}

/// How a candidate iso formula fares as the graph of an isomorphism between
/// a structure and its double-interpretation copy.
#[derive(Debug, Clone, Serialize)]
pub struct IsoSideReport {
    pub functional: bool,
    pub injective: bool,
    pub surjective: bool,
    pub homomorphic: bool,
    pub diagnostics: Vec<String>,
}

impl IsoSideReport {
    pub fn ok(&self) -> bool {
        self.functional && self.injective && self.surjective && self.homomorphic
    }
}

#[derive(Debug, Clone)]
pub struct BiReport {
    pub mutual: MutualReport,
    pub source_side: Option<IsoSideReport>,
    pub target_side: Option<IsoSideReport>,
}

impl BiReport {
    pub fn ok(&self) -> bool {
        self.mutual.mutual()
            && self.source_side.as_ref().is_some_and(|s| s.ok())
            && self.target_side.as_ref().is_some_and(|s| s.ok())
    }
}

/// Bi-interpretation: on top of mutuality, the iso formulas must define, in
/// each structure, the graph of an isomorphism onto its double-interpreted
/// copy, extensionally modulo the interpreted equivalence.
pub fn check_bi(
    b: &BiInterpretation,
    m: &FinStructure,
    n: &FinStructure,
) -> Result<BiReport, InterpError> {
    let mutual = check_mutual(m, n, &b.i, &b.j)?;
    if !mutual.mutual() {
        return Ok(BiReport {
            mutual,
            source_side: None,
            target_side: None,
        });
    }
    let source_side = Some(iso_formula_report(m, &b.iso_source, &mutual.mbar)?);
    let target_side = Some(iso_formula_report(n, &b.iso_target, &mutual.nbar)?);
    Ok(BiReport {
        mutual,
        source_side,
        target_side,
    })
}

/// Interprets `iso` as a relation between points of `m` and composite tuples
/// of the applied copy, and checks graph-of-isomorphism conditions.
fn iso_formula_report(
    m: &FinStructure,
    iso: &Formula,
    copy: &Applied,
) -> Result<IsoSideReport, InterpError> {
    let tuple_width = copy.reps.first().map_or(0, |r| r.len());
    let vars = slot_names(1 + tuple_width);
    let ext = satisfying_tuples(m, iso, &vars)?;
    let mut diagnostics = Vec::new();

    // classes hit per point; tuples outside the interpreted domain are inert
    let mut image: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.size()];
    for t in &ext {
        let (point, tail) = (t[0], &t[1..]);
        if let Some(&class) = copy.class_of.get(tail) {
            image[point].insert(class);
        }
    }
    let functional = image.iter().all(|c| c.len() == 1);
    if !functional {
        for (e, classes) in image.iter().enumerate() {
            if classes.len() != 1 {
                diagnostics.push(format!(
                    "point {e} maps to {} classes",
                    classes.len()
                ));
            }
        }
        return Ok(IsoSideReport {
            functional,
            injective: false,
            surjective: false,
            homomorphic: false,
            diagnostics,
        });
    }
    let f: Vec<usize> = image.iter().map(|c| *c.iter().next().expect("one")).collect();
    let distinct: BTreeSet<usize> = f.iter().copied().collect();
    let injective = distinct.len() == f.len();
    let surjective = distinct.len() == copy.class_count();
    if !injective {
        diagnostics.push("map is not injective on classes".to_string());
    }
    if !surjective {
        diagnostics.push(format!(
            "map reaches {} of {} classes",
            distinct.len(),
            copy.class_count()
        ));
    }

    let mut homomorphic = injective && surjective;
    if homomorphic {
        'rels: for (name, _) in m.signature().relations() {
            let ta = m.relation(name).expect("table");
            let tb = copy.structure.relation(name).expect("table");
            let width = m
                .signature()
                .relation_arity(name)
                .expect("arity");
            let mut combo = vec![0usize; width];
            loop {
                let image_tuple: Vec<usize> = combo.iter().map(|&e| f[e]).collect();
                if ta.contains(&combo) != tb.contains(&image_tuple) {
                    diagnostics.push(format!(
                        "relation `{name}` differs at {combo:?}"
                    ));
                    homomorphic = false;
                    break 'rels;
                }
                let mut pos = width;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    combo[pos] += 1;
                    if combo[pos] < m.size() {
                        break;
                    }
                    combo[pos] = 0;
                }
                if combo.iter().all(|&e| e == 0) {
                    break;
                }
            }
        }
        for c in m.signature().constants() {
            let e = m.constant(c).expect("constant");
            let target = copy.structure.constant(c).expect("constant");
            if f[e] != target {
                diagnostics.push(format!("constant `{c}` is not preserved"));
                homomorphic = false;
            }
        }
    }
    Ok(IsoSideReport {
        functional,
        injective,
        surjective,
        homomorphic,
        diagnostics,
    })
}

#[derive(Debug, Clone)]
pub struct SynonymyReport {
    pub bi: BiReport,
    pub dimensions_are_one: bool,
    pub domains_are_full: bool,
    pub equalities_are_identity: bool,
}

impl SynonymyReport {
    pub fn ok(&self) -> bool {
        self.bi.ok() && self.dimensions_are_one && self.domains_are_full && self.equalities_are_identity
    }
}

/// Synonymy: a bi-interpretation whose interpretations are one-dimensional,
/// with full domains and identity interpreted equalities on both sides.
pub fn check_synonymy(
    b: &BiInterpretation,
    m: &FinStructure,
    n: &FinStructure,
) -> Result<SynonymyReport, InterpError> {
    let bi = check_bi(b, m, n)?;
    let dimensions_are_one = b.i.dim() == 1 && b.j.dim() == 1;
    let mut domains_are_full = true;
    let mut equalities_are_identity = true;
    for (interp, host) in [(&b.i, n), (&b.j, m)] {
        let host_aug = host.with_extra_constants(
            interp
                .params()
                .iter()
                .enumerate()
                .map(|(idx, &e)| (format!("p{}", idx + 1), e)),
        )?;
        let k = interp.dim();
        let dom = satisfying_tuples(&host_aug, interp.domain_formula(), &slot_names(k))?;
        if dom.len() != host.size().pow(k as u32) {
            domains_are_full = false;
        }
        let eq = satisfying_tuples(&host_aug, interp.equality_formula(), &slot_names(2 * k))?;
        let identity: Vec<Vec<usize>> = dom
            .iter()
            .map(|t| {
                let mut d = t.clone();
                d.extend_from_slice(t);
                d
            })
            .collect();
        let eq_on_dom: Vec<Vec<usize>> = eq
            .into_iter()
            .filter(|t| {
                dom.binary_search(&t[..k].to_vec()).is_ok()
                    && dom.binary_search(&t[k..].to_vec()).is_ok()
            })
            .collect();
        if eq_on_dom != identity {
            equalities_are_identity = false;
        }
    }
    Ok(SynonymyReport {
        bi,
        dimensions_are_one,
        domains_are_full,
        equalities_are_identity,
    })
}
