//! Cofibration categories: axioms, exact functors, fibrations, pullbacks,
//! the path object P(C), and the Gluing and K. Brown properties.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{self, initial_object, pushout, CategoryFile, FinCategory, Functor, Mor, Obj};
use crate::hocat;
use crate::par;

/// A finite category with weak equivalences and cofibrations.
#[derive(Clone, Debug)]
pub struct CofCategory {
    pub cat: FinCategory,
    pub weq: Vec<bool>,
    pub cof: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CofError {
    #[error("invalid category: {0}")]
    Invalid(String),
    #[error("not a fibration: {0}")]
    NotFibration(String),
    #[error("malformed cube: {0}")]
    MalformedCube(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
}

impl CofCategory {
    pub fn new(cat: FinCategory, weq: Vec<bool>, cof: Vec<bool>) -> Self {
        CofCategory { cat, weq, cof }
    }

    /// Every morphism a cofibration; weak equivalences all or identities only.
    pub fn with_all_cof(cat: FinCategory, all_weq: bool) -> Self {
        let n = cat.n_mor();
        let weq = (0..n).map(|f| all_weq || cat.is_identity(f)).collect();
        CofCategory { cat, weq, cof: vec![true; n] }
    }

    pub fn from_file(file: &CategoryFile) -> Result<Self, CofError> {
        let cat = fincat::validate_category(file).map_err(|e| CofError::Invalid(format!("{:?}", e)))?;
        let mark = |names: &Option<Vec<String>>, default_all: bool| -> Result<Vec<bool>, CofError> {
            match names {
                Some(ns) => {
                    let mut m = fincat::marking(&cat, ns).map_err(|e| CofError::Invalid(e.to_string()))?;
                    for x in 0..cat.n_obj() {
                        m[cat.id(x)] = true;
                    }
                    Ok(m)
                }
                None => Ok((0..cat.n_mor()).map(|f| default_all || cat.is_identity(f)).collect()),
            }
        };
        let weq = mark(&file.weq, false)?;
        let cof = mark(&file.cof, true)?;
        Ok(CofCategory { cat, weq, cof })
    }

    pub fn to_file(&self) -> CategoryFile {
        fincat::to_file(&self.cat, Some(&self.weq), Some(&self.cof), None)
    }

    pub fn is_acyclic_cof(&self, f: Mor) -> bool {
        self.weq[f] && self.cof[f]
    }

    pub fn initial(&self) -> Option<Obj> {
        initial_object(&self.cat)
    }

    /// Componentwise product.
    pub fn product(a: &CofCategory, b: &CofCategory) -> CofCategory {
        let cat = FinCategory::product(&a.cat, &b.cat);
        let mb = b.cat.n_mor();
        let weq = (0..cat.n_mor()).map(|f| a.weq[f / mb] && b.weq[f % mb]).collect();
        let cof = (0..cat.n_mor()).map(|f| a.cof[f / mb] && b.cof[f % mb]).collect();
        CofCategory { cat, weq, cof }
    }

    fn mor_label(&self, f: Mor) -> String {
        self.cat.mor_name(f).to_string()
    }
}

/// Outcome of one axiom with a witness on failure.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomResult {
    pub pass: bool,
    pub witness: Option<String>,
}

impl AxiomResult {
    fn ok() -> Self {
        AxiomResult { pass: true, witness: None }
    }
    fn fail(w: String) -> Self {
        AxiomResult { pass: false, witness: Some(w) }
    }
    fn from(r: Result<(), String>) -> Self {
        match r {
            Ok(()) => Self::ok(),
            Err(w) => Self::fail(w),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    /// Weak equivalences and cofibrations are subcategories.
    pub subcategories: AxiomResult,
    pub c0: AxiomResult,
    pub c1: AxiomResult,
    pub c2: AxiomResult,
    pub c3: AxiomResult,
    pub c4_existence: AxiomResult,
    pub c4_stability: AxiomResult,
    pub c5: AxiomResult,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.entries().iter().all(|(_, r)| r.pass)
    }
    pub fn entries(&self) -> Vec<(&'static str, &AxiomResult)> {
        vec![
            ("subcategories", &self.subcategories),
            ("C0", &self.c0),
            ("C1", &self.c1),
            ("C2", &self.c2),
            ("C3", &self.c3),
            ("C4-existence", &self.c4_existence),
            ("C4-stability", &self.c4_stability),
            ("C5", &self.c5),
        ]
    }
    /// Names of failing axioms.
    pub fn failures(&self) -> Vec<&'static str> {
        self.entries().into_iter().filter(|(_, r)| !r.pass).map(|(n, _)| n).collect()
    }
}

fn check_subcategory(c: &FinCategory, m: &[bool], what: &str) -> Result<(), String> {
    for x in 0..c.n_obj() {
        if !m[c.id(x)] {
            return Err(format!("{}: identity of {} unmarked", what, c.obj_name(x)));
        }
    }
    for f in 0..c.n_mor() {
        if !m[f] {
            continue;
        }
        for &g in c.out_of(c.tgt(f)) {
            if m[g] && !m[c.compose(g, f)] {
                return Err(format!("{}: composite of {} and {} unmarked", what, c.mor_name(f), c.mor_name(g)));
            }
        }
    }
    Ok(())
}

/// Checks (C0)-(C5) with existence and stability of (C4) reported separately.
pub fn check_axioms(c: &CofCategory) -> AxiomReport {
    let cat = &c.cat;
    let subcategories =
        AxiomResult::from(check_subcategory(cat, &c.weq, "weq").and_then(|_| check_subcategory(cat, &c.cof, "cof")));
    let c0 = AxiomResult::from(fincat::check_homotopical(cat, &c.weq));
    let c1 = match (0..cat.n_mor()).find(|&f| cat.is_iso(f) && !c.is_acyclic_cof(f)) {
        Some(f) => AxiomResult::fail(format!("isomorphism {} is not an acyclic cofibration", c.mor_label(f))),
        None => AxiomResult::ok(),
    };
    let init = c.initial();
    let c2 = match init {
        Some(_) => AxiomResult::ok(),
        None => AxiomResult::fail("no initial object".into()),
    };
    let c3 = match init {
        None => AxiomResult::fail("no initial object".into()),
        Some(i) => match (0..cat.n_obj()).find(|&x| !c.cof[cat.hom(i, x)[0]]) {
            Some(x) => AxiomResult::fail(format!("{} is not cofibrant", cat.obj_name(x))),
            None => AxiomResult::ok(),
        },
    };
    // (C4): every span with one leg a cofibration
    let cofs: Vec<Mor> = (0..cat.n_mor()).filter(|&i| c.cof[i]).collect();
    let results: Vec<(Option<String>, Option<String>)> = par::map(&cofs, |&i| {
        let mut missing = None;
        let mut unstable = None;
        for &f in cat.out_of(cat.src(i)) {
            match pushout(cat, i, f) {
                None => {
                    missing = Some(format!("no pushout of {} along {}", cat.mor_name(i), cat.mor_name(f)));
                    break;
                }
                Some((_, _, leg)) => {
                    if unstable.is_none() {
                        if !c.cof[leg] {
                            unstable = Some(format!(
                                "pushout of cofibration {} along {} is not a cofibration",
                                cat.mor_name(i),
                                cat.mor_name(f)
                            ));
                        } else if c.weq[i] && !c.weq[leg] {
                            unstable = Some(format!(
                                "pushout of acyclic cofibration {} along {} is not acyclic",
                                cat.mor_name(i),
                                cat.mor_name(f)
                            ));
                        }
                    }
                }
            }
        }
        (missing, unstable)
    });
    let c4_existence = match results.iter().find_map(|r| r.0.clone()) {
        Some(w) => AxiomResult::fail(w),
        None => AxiomResult::ok(),
    };
    let c4_stability = match results.iter().find_map(|r| r.1.clone()) {
        Some(w) => AxiomResult::fail(w),
        None => AxiomResult::ok(),
    };
    let c5 = match par::find_first(&(0..cat.n_mor()).collect::<Vec<_>>(), |&f| {
        if factorizations(c, f).next().is_none() {
            Some(f)
        } else {
            None
        }
    }) {
        Some(f) => AxiomResult::fail(format!("{} has no cofibration-weq factorization", c.mor_label(f))),
        None => AxiomResult::ok(),
    };
    AxiomReport { subcategories, c0, c1, c2, c3, c4_existence, c4_stability, c5 }
}

/// Pairs (i, w) with i a cofibration, w a weq and w i = f.
pub fn factorizations(c: &CofCategory, f: Mor) -> impl Iterator<Item = (Mor, Mor)> + '_ {
    let cat = &c.cat;
    let (a, b) = (cat.src(f), cat.tgt(f));
    cat.out_of(a).iter().filter(move |&&i| c.cof[i]).flat_map(move |&i| {
        cat.hom(cat.tgt(i), b)
            .iter()
            .filter(move |&&w| c.weq[w] && cat.compose(w, i) == f)
            .map(move |&w| (i, w))
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExactReport {
    pub functor: bool,
    pub cofibrations: bool,
    pub acyclic_cofibrations: bool,
    pub initial: bool,
    pub pushouts: bool,
    pub witness: Option<String>,
}

impl ExactReport {
    pub fn exact(&self) -> bool {
        self.functor && self.cofibrations && self.acyclic_cofibrations && self.initial && self.pushouts
    }
}

/// Preservation of cofibrations, acyclic cofibrations, initial objects and
/// pushouts along cofibrations (up to the comparison isomorphism).
pub fn check_exact(f: &Functor, c: &CofCategory, d: &CofCategory) -> ExactReport {
    let mut r =
        ExactReport { functor: true, cofibrations: true, acyclic_cofibrations: true, initial: true, pushouts: true, witness: None };
    if let Err(e) = f.validate(&c.cat, &d.cat) {
        r.functor = false;
        r.witness = Some(e);
        return r;
    }
    for m in 0..c.cat.n_mor() {
        if c.cof[m] && !d.cof[f.mor[m]] {
            r.cofibrations = false;
            r.witness.get_or_insert(format!("cofibration {} not preserved", c.mor_label(m)));
        }
        if c.is_acyclic_cof(m) && !d.is_acyclic_cof(f.mor[m]) {
            r.acyclic_cofibrations = false;
            r.witness.get_or_insert(format!("acyclic cofibration {} not preserved", c.mor_label(m)));
        }
    }
    match (c.initial(), d.initial()) {
        (Some(i), Some(j)) if d.cat.hom(j, f.obj[i]).len() == 1 && d.cat.is_iso(d.cat.hom(j, f.obj[i])[0]) => {}
        _ => {
            r.initial = false;
            r.witness.get_or_insert("initial object not preserved".into());
        }
    }
    'outer: for i in (0..c.cat.n_mor()).filter(|&i| c.cof[i]) {
        for &g in c.cat.out_of(c.cat.src(i)) {
            let Some((p, li, lg)) = pushout(&c.cat, i, g) else { continue };
            let Some((q, mi, mg)) = pushout(&d.cat, f.mor[i], f.mor[g]) else {
                r.pushouts = false;
                r.witness.get_or_insert(format!("image of pushout of {} has no pushout", c.mor_label(i)));
                break 'outer;
            };
            let comparison = d.cat.hom(q, f.obj[p]).iter().copied().find(|&t| {
                d.cat.compose(t, mi) == f.mor[li] && d.cat.compose(t, mg) == f.mor[lg]
            });
            if !comparison.map(|t| d.cat.is_iso(t)).unwrap_or(false) {
                r.pushouts = false;
                r.witness.get_or_insert(format!(
                    "pushout of {} along {} not preserved",
                    c.mor_label(i),
                    c.cat.mor_name(g)
                ));
                break 'outer;
            }
        }
    }
    r
}

// ---- lifting against small structured categories ----

/// A small category with marked weq and cof (the generators of fibrations).
#[derive(Clone, Debug)]
pub struct Shape {
    pub cat: FinCategory,
    pub weq: Vec<bool>,
    pub cof: Vec<bool>,
}

impl Shape {
    fn poset(names: &[&str], arrows: &[(usize, usize)], weq: &[(usize, usize)], cof: &[(usize, usize)]) -> Shape {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for &(a, b) in arrows {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        let cat = FinCategory::poset(names.iter().map(|s| s.to_string()).collect(), |i, j| leq[i][j]);
        let mark = |list: &[(usize, usize)]| -> Vec<bool> {
            (0..cat.n_mor())
                .map(|f| cat.is_identity(f) || list.contains(&(cat.src(f), cat.tgt(f))))
                .collect()
        };
        Shape { weq: mark(weq), cof: mark(cof), cat }
    }

    /// [0]
    pub fn point() -> Shape {
        Shape::poset(&["0"], &[], &[], &[])
    }
    /// [1] with only identities marked.
    pub fn arrow() -> Shape {
        Shape::poset(&["0", "1"], &[(0, 1)], &[], &[])
    }
    /// [1] with the arrow a weak equivalence.
    pub fn marked_arrow() -> Shape {
        Shape::poset(&["0", "1"], &[(0, 1)], &[(0, 1)], &[])
    }
    /// 0 >-> 1.
    pub fn cof_arrow() -> Shape {
        Shape::poset(&["0", "1"], &[(0, 1)], &[], &[(0, 1)])
    }
    /// The free isomorphism with everything marked.
    pub fn free_iso() -> Shape {
        let cat = FinCategory::free_iso();
        let n = cat.n_mor();
        Shape { cat, weq: vec![true; n], cof: vec![true; n] }
    }
    /// 0 -> 1 factored as 0 >-> b -~-> 1; objects 0, 1, b.
    pub fn factorization() -> Shape {
        Shape::poset(&["0", "1", "b"], &[(0, 2), (2, 1)], &[(2, 1)], &[(0, 2)])
    }
    /// The pseudofactorization square; objects 00, 10, 01, 11.
    pub fn pseudofactorization() -> Shape {
        Shape::poset(&["00", "10", "01", "11"], &[(0, 1), (0, 2), (2, 3), (1, 3)], &[(2, 3), (1, 3)], &[(0, 2), (1, 3)])
    }
}

/// Calls `visit` on every functor `b -> e` preserving weq and cof, agreeing
/// with the fixed object and morphism images, and (when `over` is given as
/// `(p, v)`) with `p . w = v`. Stops when `visit` returns false.
pub fn for_each_structured_functor<F>(
    b: &Shape,
    e: &CofCategory,
    obj_fixed: &[Option<Obj>],
    over: Option<(&Functor, &Functor)>,
    mut visit: F,
) where
    F: FnMut(&Functor) -> bool,
{
    let nb = b.cat.n_obj();
    let mut obj = vec![usize::MAX; nb];
    let mut mor = vec![usize::MAX; b.cat.n_mor()];
    let non_id: Vec<Mor> = (0..b.cat.n_mor()).filter(|&m| !b.cat.is_identity(m)).collect();
    #[allow(clippy::too_many_arguments)]
    fn assign_mors<F: FnMut(&Functor) -> bool>(
        k: usize,
        non_id: &[Mor],
        b: &Shape,
        e: &CofCategory,
        over: Option<(&Functor, &Functor)>,
        obj: &[Obj],
        mor: &mut Vec<Mor>,
        visit: &mut F,
    ) -> bool {
        if k == non_id.len() {
            return visit(&Functor { obj: obj.to_vec(), mor: mor.clone() });
        }
        let m = non_id[k];
        let (s, t) = (b.cat.src(m), b.cat.tgt(m));
        for &cand in e.cat.hom(obj[s], obj[t]) {
            if (b.weq[m] && !e.weq[cand]) || (b.cof[m] && !e.cof[cand]) {
                continue;
            }
            if let Some((p, v)) = over {
                if p.mor[cand] != v.mor[m] {
                    continue;
                }
            }
            mor[m] = cand;
            // composites among assigned morphisms
            let consistent = non_id[..=k].iter().all(|&f| {
                b.cat.out_of(b.cat.tgt(f)).iter().all(|&g| {
                    let gf = b.cat.compose(g, f);
                    mor[g] == usize::MAX || mor[gf] == usize::MAX || e.cat.compose(mor[g], mor[f]) == mor[gf]
                })
            });
            if consistent && !assign_mors(k + 1, non_id, b, e, over, obj, mor, visit) {
                return false;
            }
            mor[m] = usize::MAX;
        }
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn assign_objs<F: FnMut(&Functor) -> bool>(
        k: usize,
        non_id: &[Mor],
        b: &Shape,
        e: &CofCategory,
        obj_fixed: &[Option<Obj>],
        over: Option<(&Functor, &Functor)>,
        obj: &mut Vec<Obj>,
        mor: &mut Vec<Mor>,
        visit: &mut F,
    ) -> bool {
        if k == obj.len() {
            for x in 0..obj.len() {
                mor[b.cat.id(x)] = e.cat.id(obj[x]);
            }
            return assign_mors(0, non_id, b, e, over, obj, mor, visit);
        }
        let cands: Vec<Obj> = match obj_fixed.get(k).copied().flatten() {
            Some(x) => vec![x],
            None => (0..e.cat.n_obj()).collect(),
        };
        for x in cands {
            if let Some((p, v)) = over {
                if p.obj[x] != v.obj[k] {
                    continue;
                }
            }
            obj[k] = x;
            if !assign_objs(k + 1, non_id, b, e, obj_fixed, over, obj, mor, visit) {
                return false;
            }
        }
        true
    }
    assign_objs(0, &non_id, b, e, obj_fixed, over, &mut obj, &mut mor, &mut visit);
}

/// Every structured functor with the given constraints.
pub fn structured_functors(b: &Shape, e: &CofCategory, obj_fixed: &[Option<Obj>], over: Option<(&Functor, &Functor)>) -> Vec<Functor> {
    let mut out = Vec::new();
    for_each_structured_functor(b, e, obj_fixed, over, |f| {
        out.push(f.clone());
        true
    });
    out
}

/// Right lifting of `p: e -> d` against the sub-shape `a` of `b` given by
/// `incl` (an injective-on-objects inclusion). Returns a witness on failure.
pub fn check_rlp(p: &Functor, e: &CofCategory, d: &CofCategory, a: &Shape, b: &Shape, incl: &Functor) -> (usize, Option<String>) {
    let mut problems = 0;
    let us = structured_functors(a, e, &vec![None; a.cat.n_obj()], None);
    for u in us {
        let pu = p.after(&u);
        let mut fixed_d = vec![None; b.cat.n_obj()];
        for x in 0..a.cat.n_obj() {
            fixed_d[incl.obj[x]] = Some(pu.obj[x]);
        }
        let vs: Vec<Functor> = structured_functors(b, d, &fixed_d, None)
            .into_iter()
            .filter(|v| (0..a.cat.n_mor()).all(|m| v.mor[incl.mor[m]] == pu.mor[m]))
            .collect();
        for v in vs {
            problems += 1;
            let mut fixed_e = vec![None; b.cat.n_obj()];
            for x in 0..a.cat.n_obj() {
                fixed_e[incl.obj[x]] = Some(u.obj[x]);
            }
            let mut found = false;
            for_each_structured_functor(b, e, &fixed_e, Some((p, &v)), |w| {
                if (0..a.cat.n_mor()).all(|m| w.mor[incl.mor[m]] == u.mor[m]) {
                    found = true;
                    false
                } else {
                    true
                }
            });
            if !found {
                let desc: Vec<&str> = u.mor.iter().map(|&m| e.cat.mor_name(m)).collect();
                return (problems, Some(format!("no lift over {:?}", desc)));
            }
        }
    }
    (problems, None)
}

fn inclusion(a: &Shape, b: &Shape, objs: &[Obj]) -> Functor {
    let mor = (0..a.cat.n_mor())
        .map(|m| b.cat.arrow(objs[a.cat.src(m)], objs[a.cat.tgt(m)]).unwrap())
        .collect();
    Functor { obj: objs.to_vec(), mor }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FibrationReport {
    pub isofibration: bool,
    pub factorization_lifting: bool,
    pub pseudofactorization_lifting: bool,
    /// The same three properties as right lifting against the generators.
    pub rlp: [bool; 3],
    pub problems: usize,
    pub witness: Option<String>,
}

impl FibrationReport {
    pub fn is_fibration(&self) -> bool {
        self.isofibration && self.factorization_lifting && self.pseudofactorization_lifting
    }
    pub fn agrees(&self) -> bool {
        self.rlp == [self.isofibration, self.factorization_lifting, self.pseudofactorization_lifting]
    }
}

/// The three clauses of a fibration, checked directly and as lifting
/// properties against the three generators.
pub fn check_fibration(p: &Functor, e: &CofCategory, d: &CofCategory) -> FibrationReport {
    let (ec, dc) = (&e.cat, &d.cat);
    let mut witness = None;
    let mut problems = 0;
    // isofibration
    let mut iso = true;
    'iso: for a in 0..ec.n_obj() {
        for &g in dc.out_of(p.obj[a]) {
            if !dc.is_iso(g) {
                continue;
            }
            problems += 1;
            if !ec.out_of(a).iter().any(|&f| ec.is_iso(f) && p.mor[f] == g) {
                iso = false;
                witness = Some(format!("iso {} out of P({}) has no lift", dc.mor_name(g), ec.obj_name(a)));
                break 'iso;
            }
        }
    }
    // factorizations
    let mut fact = true;
    'fact: for f in 0..ec.n_mor() {
        let (a, b) = (ec.src(f), ec.tgt(f));
        let pf = p.mor[f];
        for &j in dc.out_of(p.obj[a]) {
            if !d.cof[j] {
                continue;
            }
            for &t in dc.hom(dc.tgt(j), p.obj[b]) {
                if !d.weq[t] || dc.compose(t, j) != pf {
                    continue;
                }
                problems += 1;
                let lifted = ec.out_of(a).iter().any(|&i| {
                    e.cof[i]
                        && p.mor[i] == j
                        && ec.hom(ec.tgt(i), b).iter().any(|&s| e.weq[s] && p.mor[s] == t && ec.compose(s, i) == f)
                });
                if !lifted {
                    fact = false;
                    witness.get_or_insert(format!(
                        "factorization ({}, {}) of P({}) has no lift",
                        dc.mor_name(j),
                        dc.mor_name(t),
                        ec.mor_name(f)
                    ));
                    break 'fact;
                }
            }
        }
    }
    // pseudofactorizations
    let mut pseudo = true;
    'pseudo: for f in 0..ec.n_mor() {
        let (a, b) = (ec.src(f), ec.tgt(f));
        let pf = p.mor[f];
        for &j in dc.out_of(p.obj[a]) {
            if !d.cof[j] {
                continue;
            }
            for &v in dc.out_of(p.obj[b]) {
                if !d.is_acyclic_cof(v) {
                    continue;
                }
                for &t in dc.hom(dc.tgt(j), dc.tgt(v)) {
                    if !d.weq[t] || dc.compose(t, j) != dc.compose(v, pf) {
                        continue;
                    }
                    problems += 1;
                    let lifted = ec.out_of(a).iter().any(|&i| {
                        e.cof[i]
                            && p.mor[i] == j
                            && ec.out_of(b).iter().any(|&u| {
                                e.is_acyclic_cof(u)
                                    && p.mor[u] == v
                                    && ec.hom(ec.tgt(i), ec.tgt(u)).iter().any(|&s| {
                                        e.weq[s] && p.mor[s] == t && ec.compose(s, i) == ec.compose(u, f)
                                    })
                            })
                    });
                    if !lifted {
                        pseudo = false;
                        witness.get_or_insert(format!(
                            "pseudofactorization ({}, {}, {}) of P({}) has no lift",
                            dc.mor_name(j),
                            dc.mor_name(t),
                            dc.mor_name(v),
                            ec.mor_name(f)
                        ));
                        break 'pseudo;
                    }
                }
            }
        }
    }
    let (pt, e1) = (Shape::point(), Shape::free_iso());
    let (ar, fa, ps) = (Shape::arrow(), Shape::factorization(), Shape::pseudofactorization());
    let r1 = check_rlp(p, e, d, &pt, &e1, &inclusion(&pt, &e1, &[0]));
    let r2 = check_rlp(p, e, d, &ar, &fa, &inclusion(&ar, &fa, &[0, 1]));
    let r3 = check_rlp(p, e, d, &ar, &ps, &inclusion(&ar, &ps, &[0, 1]));
    FibrationReport {
        isofibration: iso,
        factorization_lifting: fact,
        pseudofactorization_lifting: pseudo,
        rlp: [r1.1.is_none(), r2.1.is_none(), r3.1.is_none()],
        problems,
        witness,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AcyclicFibrationReport {
    pub fibration: bool,
    pub app1: bool,
    pub cof_lifting: bool,
    /// Fibration, (App1) and lifting of cofibrations.
    pub by_characterization: bool,
    /// Fibration and an equivalence of homotopy categories.
    pub by_definition: bool,
}

impl AcyclicFibrationReport {
    pub fn agrees(&self) -> bool {
        self.by_characterization == self.by_definition
    }
}

pub fn check_acyclic_fibration(p: &Functor, e: &CofCategory, d: &CofCategory) -> Result<AcyclicFibrationReport, hocat::HoError> {
    let fib = check_fibration(p, e, d).is_fibration();
    let app1 = hocat::app1(p, e, d);
    let (pt, ca) = (Shape::point(), Shape::cof_arrow());
    let cof_lifting = check_rlp(p, e, d, &pt, &ca, &inclusion(&pt, &ca, &[0])).1.is_none();
    let he = hocat::homotopy_category(e)?;
    let hd = hocat::homotopy_category(d)?;
    let weq = hocat::is_weq_functor(p, e, d, &he, &hd).equivalence;
    Ok(AcyclicFibrationReport {
        fibration: fib,
        app1,
        cof_lifting,
        by_characterization: fib && app1 && cof_lifting,
        by_definition: fib && weq,
    })
}

/// The unique functor from `c` to the terminal cofibration category.
pub fn to_terminal(c: &CofCategory) -> (CofCategory, Functor) {
    let t = CofCategory::with_all_cof(FinCategory::terminal(), true);
    (t, Functor { obj: vec![0; c.cat.n_obj()], mor: vec![0; c.cat.n_mor()] })
}

/// Strict pullback of `p: e -> d` along `f: c -> d`, with projections to `c` and `e`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub cat: CofCategory,
    pub q: Functor,
    pub g: Functor,
}

pub fn pullback(f: &Functor, c: &CofCategory, p: &Functor, e: &CofCategory, d: &CofCategory) -> Result<Pullback, CofError> {
    let fr = check_fibration(p, e, d);
    if !fr.is_fibration() {
        return Err(CofError::NotFibration(fr.witness.unwrap_or_default()));
    }
    let mut objs = Vec::new();
    for x in 0..c.cat.n_obj() {
        for y in 0..e.cat.n_obj() {
            if f.obj[x] == p.obj[y] {
                objs.push((x, y));
            }
        }
    }
    let oix: HashMap<(Obj, Obj), Obj> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut mors = Vec::new();
    for m in 0..c.cat.n_mor() {
        for n in 0..e.cat.n_mor() {
            if f.mor[m] == p.mor[n] {
                if let (Some(&s), Some(&t)) =
                    (oix.get(&(c.cat.src(m), e.cat.src(n))), oix.get(&(c.cat.tgt(m), e.cat.tgt(n))))
                {
                    mors.push((m, n, s, t));
                }
            }
        }
    }
    let mix: HashMap<(Mor, Mor), Mor> = mors.iter().enumerate().map(|(i, &(m, n, _, _))| ((m, n), i)).collect();
    let names = objs.iter().map(|&(x, y)| format!("({}|{})", c.cat.obj_name(x), e.cat.obj_name(y))).collect();
    let mlist = mors
        .iter()
        .map(|&(m, n, s, t)| (format!("({}|{})", c.cat.mor_name(m), e.cat.mor_name(n)), s, t))
        .collect();
    let identity = objs.iter().map(|&(x, y)| mix[&(c.cat.id(x), e.cat.id(y))]).collect();
    let cat = FinCategory::from_parts(names, mlist, identity, |g2, f2| {
        let (m1, n1, _, _) = mors[f2];
        let (m2, n2, _, _) = mors[g2];
        mix[&(c.cat.compose(m2, m1), e.cat.compose(n2, n1))]
    });
    let weq = mors.iter().map(|&(m, n, _, _)| c.weq[m] && e.weq[n]).collect();
    let cof = mors.iter().map(|&(m, n, _, _)| c.cof[m] && e.cof[n]).collect();
    let q = Functor { obj: objs.iter().map(|o| o.0).collect(), mor: mors.iter().map(|m| m.0).collect() };
    let g = Functor { obj: objs.iter().map(|o| o.1).collect(), mor: mors.iter().map(|m| m.1).collect() };
    Ok(Pullback { cat: CofCategory { cat, weq, cof }, q, g })
}

/// The unique functor `t -> pb` induced by a commuting cone, if it is one.
pub fn pullback_cone_map(pb: &Pullback, a: &Functor, b: &Functor) -> Option<Functor> {
    let obj = (0..a.obj.len())
        .map(|x| (0..pb.cat.cat.n_obj()).find(|&o| pb.q.obj[o] == a.obj[x] && pb.g.obj[o] == b.obj[x]))
        .collect::<Option<Vec<_>>>()?;
    let mor = (0..a.mor.len())
        .map(|m| (0..pb.cat.cat.n_mor()).find(|&o| pb.q.mor[o] == a.mor[m] && pb.g.mor[o] == b.mor[m]))
        .collect::<Option<Vec<_>>>()?;
    Some(Functor { obj, mor })
}

/// An object of P(C): X0 -> X01 <- X1 with both maps acyclic cofibrations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PathObj {
    pub x0: Obj,
    pub x1: Obj,
    pub x01: Obj,
    pub e0: Mor,
    pub e1: Mor,
}

#[derive(Clone, Debug)]
pub struct PathObject {
    pub pc: CofCategory,
    pub objects: Vec<PathObj>,
    /// Components (m0, m1, m01) of each morphism.
    pub components: Vec<(Mor, Mor, Mor)>,
    pub cc: CofCategory,
    pub diag: Functor,
    pub ev01: Functor,
}

/// A -> X in P(C) is a cofibration iff A0 -> X0, A1 -> X1 and both
/// A01 + X0 -> X01, A01 + X1 -> X01 (pushouts over A0, A1) are cofibrations.
pub fn path_cofibration(c: &CofCategory, a: &PathObj, x: &PathObj, m: (Mor, Mor, Mor)) -> Option<bool> {
    let cat = &c.cat;
    if !c.cof[m.0] || !c.cof[m.1] {
        return Some(false);
    }
    for (ea, ex, mi) in [(a.e0, x.e0, m.0), (a.e1, x.e1, m.1)] {
        let (p, lb, le) = pushout(cat, ea, mi)?;
        let t = cat.hom(p, x.x01).iter().copied().find(|&t| cat.compose(t, lb) == m.2 && cat.compose(t, le) == ex)?;
        if !c.cof[t] {
            return Some(false);
        }
    }
    Some(true)
}

pub fn path_object(c: &CofCategory) -> PathObject {
    let cat = &c.cat;
    let mut objects = Vec::new();
    for x01 in 0..cat.n_obj() {
        let legs: Vec<Mor> = cat.into(x01).iter().copied().filter(|&m| c.is_acyclic_cof(m)).collect();
        for &e0 in &legs {
            for &e1 in &legs {
                objects.push(PathObj { x0: cat.src(e0), x1: cat.src(e1), x01, e0, e1 });
            }
        }
    }
    objects.sort_by_key(|o| (o.x0, o.x1, o.x01, o.e0, o.e1));
    let mut comps = Vec::new();
    let mut ends = Vec::new();
    for (ai, a) in objects.iter().enumerate() {
        for (xi, x) in objects.iter().enumerate() {
            for &m01 in cat.hom(a.x01, x.x01) {
                for &m0 in cat.hom(a.x0, x.x0) {
                    if cat.compose(m01, a.e0) != cat.compose(x.e0, m0) {
                        continue;
                    }
                    for &m1 in cat.hom(a.x1, x.x1) {
                        if cat.compose(m01, a.e1) == cat.compose(x.e1, m1) {
                            comps.push((m0, m1, m01));
                            ends.push((ai, xi));
                        }
                    }
                }
            }
        }
    }
    let cix: HashMap<(Obj, Obj, (Mor, Mor, Mor)), Mor> =
        comps.iter().zip(&ends).enumerate().map(|(i, (&m, &(s, t)))| ((s, t, m), i)).collect();
    let names: Vec<String> = objects
        .iter()
        .map(|o| {
            let base = format!("[{},{},{}]", cat.obj_name(o.x0), cat.obj_name(o.x1), cat.obj_name(o.x01));
            if cat.is_thin() {
                base
            } else {
                format!("{}<{},{}>", base, cat.mor_name(o.e0), cat.mor_name(o.e1))
            }
        })
        .collect();
    let mlist = comps
        .iter()
        .zip(&ends)
        .map(|(m, &(s, t))| {
            (format!("{}->{}:({},{},{})", names[s], names[t], cat.mor_name(m.0), cat.mor_name(m.1), cat.mor_name(m.2)), s, t)
        })
        .collect();
    let identity = objects
        .iter()
        .enumerate()
        .map(|(i, o)| cix[&(i, i, (cat.id(o.x0), cat.id(o.x1), cat.id(o.x01)))])
        .collect();
    let pcat = FinCategory::from_parts(names, mlist, identity, |g, f| {
        let (s, _) = ends[f];
        let (_, t) = ends[g];
        let (a, b) = (comps[f], comps[g]);
        cix[&(s, t, (cat.compose(b.0, a.0), cat.compose(b.1, a.1), cat.compose(b.2, a.2)))]
    });
    let weq = comps.iter().map(|m| c.weq[m.0] && c.weq[m.1] && c.weq[m.2]).collect();
    let cof = comps
        .iter()
        .zip(&ends)
        .map(|(&m, &(s, t))| path_cofibration(c, &objects[s], &objects[t], m).unwrap_or(false))
        .collect();
    let pc = CofCategory { cat: pcat, weq, cof };
    let cc = CofCategory::product(c, c);
    let oix: HashMap<PathObj, Obj> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let diag_obj: Vec<Obj> = (0..cat.n_obj())
        .map(|x| oix[&PathObj { x0: x, x1: x, x01: x, e0: cat.id(x), e1: cat.id(x) }])
        .collect();
    let diag_mor = (0..cat.n_mor())
        .map(|m| cix[&(diag_obj[cat.src(m)], diag_obj[cat.tgt(m)], (m, m, m))])
        .collect();
    let (nb, mb) = (cat.n_obj(), cat.n_mor());
    let ev01 = Functor {
        obj: objects.iter().map(|o| o.x0 * nb + o.x1).collect(),
        mor: comps.iter().map(|m| m.0 * mb + m.1).collect(),
    };
    PathObject { pc, objects, components: comps, cc, diag: Functor { obj: diag_obj, mor: diag_mor }, ev01 }
}

/// The diagonal C -> C x C.
pub fn diagonal(c: &CofCategory) -> Functor {
    let (nb, mb) = (c.cat.n_obj(), c.cat.n_mor());
    Functor { obj: (0..nb).map(|x| x * nb + x).collect(), mor: (0..mb).map(|m| m * mb + m).collect() }
}

/// A commutative cube between two spans A0 -> B0, A0 >-> X0 and A1 -> B1,
/// A1 >-> X1 with comparisons a, b, x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub f0: Mor,
    pub i0: Mor,
    pub f1: Mor,
    pub i1: Mor,
    pub a: Mor,
    pub b: Mor,
    pub x: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GluingOutcome {
    /// Hypotheses hold; the induced comparison is a weq iff the flag.
    Checked { comparison: Mor, weq: bool },
    /// A hypothesis fails; names it.
    HypothesisFailed(String),
}

/// The Gluing Lemma on one cube.
pub fn gluing_check(c: &CofCategory, cube: &Cube) -> Result<GluingOutcome, CofError> {
    let cat = &c.cat;
    let Cube { f0, i0, f1, i1, a, b, x } = *cube;
    let ok_shape = cat.src(f0) == cat.src(i0)
        && cat.src(f1) == cat.src(i1)
        && cat.src(a) == cat.src(f0)
        && cat.tgt(a) == cat.src(f1)
        && cat.src(b) == cat.tgt(f0)
        && cat.tgt(b) == cat.tgt(f1)
        && cat.src(x) == cat.tgt(i0)
        && cat.tgt(x) == cat.tgt(i1);
    if !ok_shape {
        return Err(CofError::MalformedCube("ill-typed cube".into()));
    }
    if cat.compose(b, f0) != cat.compose(f1, a) || cat.compose(x, i0) != cat.compose(i1, a) {
        return Err(CofError::MalformedCube("side faces do not commute".into()));
    }
    if !c.cof[i0] {
        return Ok(GluingOutcome::HypothesisFailed("back leg is not a cofibration".into()));
    }
    if !c.cof[i1] {
        return Ok(GluingOutcome::HypothesisFailed("front leg is not a cofibration".into()));
    }
    for (name, m) in [("A0 -> A1", a), ("B0 -> B1", b), ("X0 -> X1", x)] {
        if !c.weq[m] {
            return Ok(GluingOutcome::HypothesisFailed(format!("{} is not a weak equivalence", name)));
        }
    }
    let (y0, lb0, lx0) = pushout(cat, f0, i0).ok_or_else(|| CofError::MalformedCube("back pushout missing".into()))?;
    let (y1, lb1, lx1) = pushout(cat, f1, i1).ok_or_else(|| CofError::MalformedCube("front pushout missing".into()))?;
    let comparison = cat
        .hom(y0, y1)
        .iter()
        .copied()
        .find(|&y| cat.compose(y, lb0) == cat.compose(lb1, b) && cat.compose(y, lx0) == cat.compose(lx1, x))
        .ok_or_else(|| CofError::MalformedCube("no induced comparison".into()))?;
    Ok(GluingOutcome::Checked { comparison, weq: c.weq[comparison] })
}

/// Every span A -> B, A >-> X (as pairs (f, i)).
pub fn spans(c: &CofCategory) -> Vec<(Mor, Mor)> {
    let cat = &c.cat;
    let mut out = Vec::new();
    for f in 0..cat.n_mor() {
        for &i in cat.out_of(cat.src(f)) {
            if c.cof[i] {
                out.push((f, i));
            }
        }
    }
    out
}

/// Every commutative cube with cofibrant legs and weq comparisons.
pub fn gluing_cubes(c: &CofCategory) -> Vec<Cube> {
    let cat = &c.cat;
    let sp = spans(c);
    par::flat_map(&sp, |&(f0, i0)| {
        let mut out = Vec::new();
        for &(f1, i1) in &sp {
            for &a in cat.hom(cat.src(f0), cat.src(f1)) {
                if !c.weq[a] {
                    continue;
                }
                for &b in cat.hom(cat.tgt(f0), cat.tgt(f1)) {
                    if !c.weq[b] || cat.compose(b, f0) != cat.compose(f1, a) {
                        continue;
                    }
                    for &x in cat.hom(cat.tgt(i0), cat.tgt(i1)) {
                        if c.weq[x] && cat.compose(x, i0) == cat.compose(i1, a) {
                            out.push(Cube { f0, i0, f1, i1, a, b, x });
                        }
                    }
                }
            }
        }
        out
    })
}

/// K. Brown: if `f` sends acyclic cofibrations to weqs it sends weqs to weqs.
pub fn brown_check(f: &Functor, c: &CofCategory, d: &CofCategory) -> Result<bool, CofError> {
    if let Some(m) = (0..c.cat.n_mor()).find(|&m| c.is_acyclic_cof(m) && !d.weq[f.mor[m]]) {
        return Err(CofError::HypothesisFailed(format!(
            "acyclic cofibration {} not sent to a weak equivalence",
            c.cat.mor_name(m)
        )));
    }
    Ok((0..c.cat.n_mor()).all(|m| !c.weq[m] || d.weq[f.mor[m]]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(atoms: &[&str], all: bool) -> CofCategory {
        CofCategory::with_all_cof(FinCategory::subset_lattice(atoms), all)
    }

    #[test]
    fn lattices_pass() {
        for all in [false, true] {
            assert!(check_axioms(&lattice(&["a"], all)).all_pass());
            assert!(check_axioms(&lattice(&["a", "b"], all)).all_pass());
        }
    }

    #[test]
    fn non_lattice_fails_pushout_existence() {
        // bottom < a, b < c, d (no join of a and b)
        let p = FinCategory::poset(
            vec!["0".into(), "a".into(), "b".into(), "c".into(), "d".into()],
            |i, j| i == j || i == 0 || ((i == 1 || i == 2) && j >= 3),
        );
        let r = check_axioms(&CofCategory::with_all_cof(p, false));
        assert_eq!(r.failures(), vec!["C4-existence"]);
    }

    #[test]
    fn shapes_are_categories() {
        for s in [Shape::factorization(), Shape::pseudofactorization(), Shape::free_iso(), Shape::cof_arrow()] {
            assert!(s.cat.check_laws().is_empty());
        }
        assert_eq!(Shape::pseudofactorization().cat.n_mor(), 9);
    }

    #[test]
    fn map_to_terminal_is_fibration() {
        let c = lattice(&["a", "b"], false);
        let (t, p) = to_terminal(&c);
        let r = check_fibration(&p, &c, &t);
        assert!(r.is_fibration() && r.agrees());
    }

    #[test]
    fn path_object_counts() {
        let c = lattice(&["a"], true);
        let po = path_object(&c);
        assert_eq!(po.objects.len(), 5);
        assert!(check_axioms(&po.pc).all_pass());
        assert!(check_exact(&po.diag, &c, &po.pc).exact());
        assert!(check_exact(&po.ev01, &po.pc, &po.cc).exact());
        let r = check_fibration(&po.ev01, &po.pc, &po.cc);
        assert!(r.is_fibration() && r.agrees(), "{:?}", r);
        assert_eq!(path_object(&lattice(&["a", "b"], true)).objects.len(), 25);
    }

    #[test]
    fn identity_pullback() {
        let c = lattice(&["a"], true);
        let (t, p) = to_terminal(&c);
        let (t2, q) = to_terminal(&t);
        let pb = pullback(&p, &c, &q, &t2, &t).unwrap();
        assert_eq!(pb.cat.cat.n_obj(), c.cat.n_obj());
        assert!(check_axioms(&pb.cat).all_pass());
    }

    #[test]
    fn gluing_and_brown() {
        let c = lattice(&["a", "b"], true);
        let cubes = gluing_cubes(&c);
        assert!(!cubes.is_empty());
        for cube in &cubes {
            assert!(matches!(gluing_check(&c, cube).unwrap(), GluingOutcome::Checked { weq: true, .. }));
        }
        let d = lattice(&["a", "b"], false);
        let id = Functor::identity(&c.cat);
        assert!(brown_check(&id, &c, &c).unwrap());
        assert!(matches!(brown_check(&id, &c, &d), Err(CofError::HypothesisFailed(_))));
    }
}
