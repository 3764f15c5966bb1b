//! Finite categories, homotopical and direct structure, functors, sieves,
//! latching categories and colimits by enumeration.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Obj = usize;
pub type Mor = usize;

/// A violated category law found by [`validate_category`].
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CategoryError {
    #[error("missing identity for object {0}")]
    MissingIdentity(String),
    #[error("ill-typed composite for pair ({0}, {1})")]
    IllTypedComposite(String, String),
    #[error("missing composite for pair ({0}, {1})")]
    MissingComposite(String, String),
    #[error("non-associative triple ({0}, {1}, {2})")]
    NonAssociative(String, String, String),
    #[error("identity law fails at {0}")]
    IdentityLaw(String),
    #[error("unknown name {0}")]
    UnknownName(String),
    #[error("duplicate name {0}")]
    DuplicateName(String),
}

/// A finite category with O(1) composition.
#[derive(Clone, Debug)]
pub struct FinCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Mor>,
    out_of: Vec<Vec<Mor>>,
    into: Vec<Vec<Mor>>,
    out_pos: Vec<usize>,
    // post[f][j] = out_of[tgt f][j] . f
    post: Vec<Vec<Mor>>,
    homs: Vec<HashMap<Obj, Vec<Mor>>>,
    thin: bool,
}

impl FinCategory {
    /// Builds a category from trusted data. `compose(g, f)` must return g.f
    /// for every composable pair; laws are not re-checked here.
    pub fn from_parts<F>(
        obj_names: Vec<String>,
        mors: Vec<(String, Obj, Obj)>,
        identity: Vec<Mor>,
        compose: F,
    ) -> Self
    where
        F: Fn(Mor, Mor) -> Mor,
    {
        let n = obj_names.len();
        let mut mor_names = Vec::with_capacity(mors.len());
        let mut src = Vec::with_capacity(mors.len());
        let mut tgt = Vec::with_capacity(mors.len());
        for (name, s, t) in mors {
            mor_names.push(name);
            src.push(s);
            tgt.push(t);
        }
        let mut out_of = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        let mut out_pos = vec![0; src.len()];
        let mut homs: Vec<HashMap<Obj, Vec<Mor>>> = vec![HashMap::new(); n];
        for f in 0..src.len() {
            out_pos[f] = out_of[src[f]].len();
            out_of[src[f]].push(f);
            into[tgt[f]].push(f);
            homs[src[f]].entry(tgt[f]).or_default().push(f);
        }
        let post = (0..src.len())
            .map(|f| out_of[tgt[f]].iter().map(|&g| compose(g, f)).collect())
            .collect();
        let thin = homs.iter().all(|m| m.values().all(|v| v.len() <= 1));
        FinCategory { obj_names, mor_names, src, tgt, identity, out_of, into, out_pos, post, homs, thin }
    }

    /// The poset on `names` with order `leq` (assumed reflexive, transitive, antisymmetric
    /// or at least a preorder).
    pub fn poset<F: Fn(usize, usize) -> bool>(names: Vec<String>, leq: F) -> Self {
        let n = names.len();
        let mut mors = Vec::new();
        let mut index = HashMap::new();
        let mut identity = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    let name = if i == j {
                        format!("id:{}", names[i])
                    } else {
                        format!("{}->{}", names[i], names[j])
                    };
                    if i == j {
                        identity[i] = mors.len();
                    }
                    index.insert((i, j), mors.len());
                    mors.push((name, i, j));
                }
            }
        }
        let pairs: Vec<(usize, usize)> = mors.iter().map(|m| (m.1, m.2)).collect();
        FinCategory::from_parts(names, mors, identity, |g, f| index[&(pairs[f].0, pairs[g].1)])
    }

    /// The chain [n] = {0 < 1 < ... < n}.
    pub fn chain(n: usize) -> Self {
        FinCategory::poset((0..=n).map(|i| i.to_string()).collect(), |i, j| i <= j)
    }

    /// The category with one object and one morphism.
    pub fn terminal() -> Self {
        FinCategory::chain(0)
    }

    pub fn discrete(names: Vec<String>) -> Self {
        FinCategory::poset(names, |i, j| i == j)
    }

    /// The indiscrete category on `names` (every hom-set a singleton).
    pub fn indiscrete(names: Vec<String>) -> Self {
        FinCategory::poset(names, |_, _| true)
    }

    /// The free-living isomorphism E(1).
    pub fn free_iso() -> Self {
        FinCategory::indiscrete(vec!["0".into(), "1".into()])
    }

    /// Subsets of `atoms` ordered by inclusion; object i is the bitmask i.
    pub fn subset_lattice(atoms: &[&str]) -> Self {
        let n = 1usize << atoms.len();
        let names = (0..n).map(|m| subset_name(atoms, m)).collect();
        FinCategory::poset(names, |i, j| i & !j == 0)
    }

    /// The span shape b <- a -> c with objects ordered a, b, c.
    pub fn span() -> Self {
        FinCategory::poset(vec!["a".into(), "b".into(), "c".into()], |i, j| i == j || i == 0)
    }

    /// Product category with componentwise composition.
    pub fn product(a: &FinCategory, b: &FinCategory) -> Self {
        let names = (0..a.n_obj())
            .flat_map(|x| (0..b.n_obj()).map(move |y| (x, y)))
            .map(|(x, y)| format!("({},{})", a.obj_name(x), b.obj_name(y)))
            .collect();
        let nb = b.n_obj();
        let mb = b.n_mor();
        let mut mors = Vec::with_capacity(a.n_mor() * mb);
        for f in 0..a.n_mor() {
            for g in 0..mb {
                mors.push((
                    format!("({},{})", a.mor_name(f), b.mor_name(g)),
                    a.src(f) * nb + b.src(g),
                    a.tgt(f) * nb + b.tgt(g),
                ));
            }
        }
        let identity = (0..a.n_obj())
            .flat_map(|x| (0..nb).map(move |y| (x, y)))
            .map(|(x, y)| a.id(x) * mb + b.id(y))
            .collect();
        FinCategory::from_parts(names, mors, identity, |g, f| {
            a.compose(g / mb, f / mb) * mb + b.compose(g % mb, f % mb)
        })
    }

    pub fn n_obj(&self) -> usize {
        self.obj_names.len()
    }
    pub fn n_mor(&self) -> usize {
        self.mor_names.len()
    }
    pub fn src(&self, f: Mor) -> Obj {
        self.src[f]
    }
    pub fn tgt(&self, f: Mor) -> Obj {
        self.tgt[f]
    }
    pub fn id(&self, x: Obj) -> Mor {
        self.identity[x]
    }
    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.src[f]] == f
    }
    pub fn obj_name(&self, x: Obj) -> &str {
        &self.obj_names[x]
    }
    pub fn mor_name(&self, f: Mor) -> &str {
        &self.mor_names[f]
    }
    pub fn obj_names(&self) -> &[String] {
        &self.obj_names
    }
    pub fn mor_names(&self) -> &[String] {
        &self.mor_names
    }
    pub fn obj_by_name(&self, name: &str) -> Option<Obj> {
        self.obj_names.iter().position(|n| n == name)
    }
    pub fn mor_by_name(&self, name: &str) -> Option<Mor> {
        self.mor_names.iter().position(|n| n == name)
    }
    pub fn out_of(&self, x: Obj) -> &[Mor] {
        &self.out_of[x]
    }
    pub fn into(&self, x: Obj) -> &[Mor] {
        &self.into[x]
    }
    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.thin
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        self.homs[a].get(&b).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// For thin categories: the unique morphism a -> b if any.
    pub fn arrow(&self, a: Obj, b: Obj) -> Option<Mor> {
        self.hom(a, b).first().copied()
    }

    pub fn leq(&self, a: Obj, b: Obj) -> bool {
        !self.hom(a, b).is_empty()
    }

    /// g . f
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        debug_assert_eq!(self.tgt[f], self.src[g], "not composable");
        self.post[f][self.out_pos[g]]
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.tgt[f] == self.src[g]).then(|| self.post[f][self.out_pos[g]])
    }

    /// Composite of a path given first-to-last.
    pub fn compose_path(&self, path: &[Mor]) -> Mor {
        let mut acc = path[0];
        for &g in &path[1..] {
            acc = self.compose(g, acc);
        }
        acc
    }

    /// An inverse of `f` if `f` is an isomorphism.
    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        self.hom(self.tgt[f], self.src[f]).iter().copied().find(|&g| {
            self.compose(g, f) == self.id(self.src[f]) && self.compose(f, g) == self.id(self.tgt[f])
        })
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    /// Full subcategory on `objs` together with its inclusion functor.
    pub fn full_subcategory(&self, objs: &[Obj]) -> (FinCategory, Functor) {
        let mut pos = HashMap::new();
        for (i, &x) in objs.iter().enumerate() {
            pos.insert(x, i);
        }
        let mut mors = Vec::new();
        let mut mor_map = Vec::new();
        let mut back = HashMap::new();
        for &a in objs {
            for &f in &self.out_of[a] {
                if let Some(&t) = pos.get(&self.tgt[f]) {
                    back.insert(f, mors.len());
                    mors.push((self.mor_names[f].clone(), pos[&a], t));
                    mor_map.push(f);
                }
            }
        }
        let identity = objs.iter().map(|&x| back[&self.id(x)]).collect();
        let names = objs.iter().map(|&x| self.obj_names[x].clone()).collect();
        let sub = FinCategory::from_parts(names, mors, identity, |g, f| {
            back[&self.compose(mor_map[g], mor_map[f])]
        });
        (sub, Functor { obj: objs.to_vec(), mor: mor_map })
    }

    /// Every law violation, used by tests on constructed categories.
    pub fn check_laws(&self) -> Vec<CategoryError> {
        let mut errs = Vec::new();
        for x in 0..self.n_obj() {
            let i = self.id(x);
            if self.src[i] != x || self.tgt[i] != x {
                errs.push(CategoryError::MissingIdentity(self.obj_names[x].clone()));
            }
        }
        for f in 0..self.n_mor() {
            for (j, &g) in self.out_of[self.tgt[f]].iter().enumerate() {
                let gf = self.post[f][j];
                if self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] {
                    errs.push(CategoryError::IllTypedComposite(
                        self.mor_names[f].clone(),
                        self.mor_names[g].clone(),
                    ));
                }
            }
            if self.compose(f, self.id(self.src[f])) != f || self.compose(self.id(self.tgt[f]), f) != f {
                errs.push(CategoryError::IdentityLaw(self.mor_names[f].clone()));
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        for f in 0..self.n_mor() {
            for &g in &self.out_of[self.tgt[f]] {
                let gf = self.compose(g, f);
                for &h in &self.out_of[self.tgt[g]] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        errs.push(CategoryError::NonAssociative(
                            self.mor_names[f].clone(),
                            self.mor_names[g].clone(),
                            self.mor_names[h].clone(),
                        ));
                    }
                }
            }
        }
        errs
    }
}

pub fn subset_name(atoms: &[&str], mask: usize) -> String {
    let parts: Vec<&str> = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i]).collect();
    format!("{{{}}}", parts.join(","))
}

/// A functor recorded by its object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functor {
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl Functor {
    pub fn identity(c: &FinCategory) -> Self {
        Functor { obj: (0..c.n_obj()).collect(), mor: (0..c.n_mor()).collect() }
    }

    /// The constant functor at `x`.
    pub fn constant(src: &FinCategory, tgt: &FinCategory, x: Obj) -> Self {
        Functor { obj: vec![x; src.n_obj()], mor: vec![tgt.id(x); src.n_mor()] }
    }

    /// `self . other`
    pub fn after(&self, other: &Functor) -> Functor {
        Functor {
            obj: other.obj.iter().map(|&x| self.obj[x]).collect(),
            mor: other.mor.iter().map(|&f| self.mor[f]).collect(),
        }
    }

    /// Checks the functor laws against `src` and `tgt`.
    pub fn validate(&self, src: &FinCategory, tgt: &FinCategory) -> Result<(), String> {
        if self.obj.len() != src.n_obj() || self.mor.len() != src.n_mor() {
            return Err("size mismatch".into());
        }
        for x in 0..src.n_obj() {
            if self.obj[x] >= tgt.n_obj() || self.mor[src.id(x)] != tgt.id(self.obj[x]) {
                return Err(format!("identity of {} not preserved", src.obj_name(x)));
            }
        }
        for f in 0..src.n_mor() {
            let g = self.mor[f];
            if g >= tgt.n_mor() || tgt.src(g) != self.obj[src.src(f)] || tgt.tgt(g) != self.obj[src.tgt(f)] {
                return Err(format!("{} mapped to an ill-typed morphism", src.mor_name(f)));
            }
        }
        for f in 0..src.n_mor() {
            for &g in src.out_of(src.tgt(f)) {
                if self.mor[src.compose(g, f)] != tgt.compose(self.mor[g], self.mor[f]) {
                    return Err(format!(
                        "composite of {} and {} not preserved",
                        src.mor_name(f),
                        src.mor_name(g)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_homotopical(&self, src_weq: &[bool], tgt_weq: &[bool]) -> bool {
        (0..self.mor.len()).all(|f| !src_weq[f] || tgt_weq[self.mor[f]])
    }
}

/// The least set containing `generators` and the identities that satisfies 2-out-of-6.
pub fn two_out_of_six_closure(c: &FinCategory, generators: &[bool]) -> Vec<bool> {
    let mut w = generators.to_vec();
    for x in 0..c.n_obj() {
        w[c.id(x)] = true;
    }
    loop {
        let mut changed = false;
        for g in 0..c.n_mor() {
            for &f in c.into(c.src(g)) {
                let gf = c.compose(g, f);
                if !w[gf] {
                    continue;
                }
                for &h in c.out_of(c.tgt(g)) {
                    if !w[c.compose(h, g)] {
                        continue;
                    }
                    let hgf = c.compose(h, gf);
                    for m in [f, g, h, hgf] {
                        if !w[m] {
                            w[m] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return w;
        }
    }
}

/// Checks the homotopical-category invariants; returns the first failure.
pub fn check_homotopical(c: &FinCategory, w: &[bool]) -> Result<(), String> {
    for x in 0..c.n_obj() {
        if !w[c.id(x)] {
            return Err(format!("identity of {} is not a weak equivalence", c.obj_name(x)));
        }
    }
    for g in 0..c.n_mor() {
        for &f in c.into(c.src(g)) {
            let gf = c.compose(g, f);
            if w[f] && w[g] && !w[gf] {
                return Err(format!("composite {} not a weak equivalence", c.mor_name(gf)));
            }
            if !w[gf] {
                continue;
            }
            for &h in c.out_of(c.tgt(g)) {
                if w[c.compose(h, g)] {
                    for m in [f, g, h, c.compose(h, gf)] {
                        if !w[m] {
                            return Err(format!(
                                "2-out-of-6 fails on ({}, {}, {}) at {}",
                                c.mor_name(f),
                                c.mor_name(g),
                                c.mor_name(h),
                                c.mor_name(m)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("non-identity endomorphism {0}")]
    NonidentityEndomorphism(String),
    #[error("cycle of non-identity morphisms through {0}")]
    Cycle(String),
    #[error("morphism {0} does not raise degree")]
    NotDirect(String),
}

/// Longest-path layering of the non-identity morphisms.
pub fn synthesize_degree(c: &FinCategory) -> Result<Vec<usize>, DegreeError> {
    let n = c.n_obj();
    let mut preds: Vec<Vec<Obj>> = vec![Vec::new(); n];
    for f in 0..c.n_mor() {
        if c.is_identity(f) {
            continue;
        }
        if c.src(f) == c.tgt(f) {
            return Err(DegreeError::NonidentityEndomorphism(c.mor_name(f).into()));
        }
        preds[c.tgt(f)].push(c.src(f));
    }
    let mut deg: Vec<Option<usize>> = vec![None; n];
    let mut state = vec![0u8; n];
    fn visit(
        x: Obj,
        preds: &[Vec<Obj>],
        deg: &mut [Option<usize>],
        state: &mut [u8],
        c: &FinCategory,
    ) -> Result<usize, DegreeError> {
        if let Some(d) = deg[x] {
            return Ok(d);
        }
        if state[x] == 1 {
            return Err(DegreeError::Cycle(c.obj_name(x).into()));
        }
        state[x] = 1;
        let mut d = 0;
        for &p in &preds[x] {
            d = d.max(visit(p, preds, deg, state, c)? + 1);
        }
        deg[x] = Some(d);
        Ok(d)
    }
    for x in 0..n {
        visit(x, &preds, &mut deg, &mut state, c)?;
    }
    Ok(deg.into_iter().map(|d| d.unwrap()).collect())
}

pub fn check_degree(c: &FinCategory, degree: &[usize]) -> Result<(), DegreeError> {
    for f in 0..c.n_mor() {
        if !c.is_identity(f) && degree[c.src(f)] >= degree[c.tgt(f)] {
            return Err(DegreeError::NotDirect(c.mor_name(f).into()));
        }
    }
    Ok(())
}

/// The latching category of non-identity morphisms into `i`, with its
/// forgetful functor to `c`.
pub fn latching_category(c: &FinCategory, i: Obj) -> (FinCategory, Functor) {
    let objs: Vec<Mor> = c.into(i).iter().copied().filter(|&u| !c.is_identity(u)).collect();
    let mut mors = Vec::new();
    let mut mor_map = Vec::new();
    let mut index = HashMap::new();
    let mut identity = vec![0; objs.len()];
    for (a, &u) in objs.iter().enumerate() {
        for (b, &v) in objs.iter().enumerate() {
            for &w in c.hom(c.src(u), c.src(v)) {
                if c.compose(v, w) == u {
                    if a == b && c.is_identity(w) {
                        identity[a] = mors.len();
                    }
                    index.insert((a, b, w), mors.len());
                    mors.push((c.mor_name(w).to_string(), a, b));
                    mor_map.push(w);
                }
            }
        }
    }
    let ends: Vec<(usize, usize)> = mors.iter().map(|m| (m.1, m.2)).collect();
    let names = objs.iter().map(|&u| c.mor_name(u).to_string()).collect();
    let cat = FinCategory::from_parts(names, mors, identity, |g, f| {
        index[&(ends[f].0, ends[g].1, c.compose(mor_map[g], mor_map[f]))]
    });
    let obj = objs.iter().map(|&u| c.src(u)).collect();
    (cat, Functor { obj, mor: mor_map })
}

/// Injective on objects, fully faithful and downward closed.
pub fn is_sieve(f: &Functor, src: &FinCategory, tgt: &FinCategory) -> bool {
    let mut image = vec![false; tgt.n_obj()];
    for &x in &f.obj {
        if image[x] {
            return false;
        }
        image[x] = true;
    }
    for a in 0..src.n_obj() {
        for b in 0..src.n_obj() {
            let mut mapped: Vec<Mor> = src.hom(a, b).iter().map(|&m| f.mor[m]).collect();
            mapped.sort_unstable();
            mapped.dedup();
            if mapped.len() != src.hom(a, b).len() || mapped.len() != tgt.hom(f.obj[a], f.obj[b]).len() {
                return false;
            }
        }
    }
    (0..tgt.n_mor()).all(|m| !image[tgt.tgt(m)] || image[tgt.src(m)])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone {
    pub apex: Obj,
    pub legs: Vec<Mor>,
}

/// All cocones under `x: j -> c` with the given apex.
pub fn cocones_at(j: &FinCategory, c: &FinCategory, x: &Functor, apex: Obj) -> Vec<Vec<Mor>> {
    let n = j.n_obj();
    let mut out = Vec::new();
    let mut legs = vec![usize::MAX; n];
    fn go(
        k: usize,
        j: &FinCategory,
        c: &FinCategory,
        x: &Functor,
        apex: Obj,
        legs: &mut Vec<Mor>,
        out: &mut Vec<Vec<Mor>>,
    ) {
        if k == legs.len() {
            out.push(legs.clone());
            return;
        }
        for &l in c.hom(x.obj[k], apex) {
            legs[k] = l;
            let ok = j.into(k).iter().chain(j.out_of(k)).all(|&u| {
                let (s, t) = (j.src(u), j.tgt(u));
                s > k || t > k || c.compose(legs[t], x.mor[u]) == legs[s]
            });
            if ok {
                go(k + 1, j, c, x, apex, legs, out);
            }
        }
        legs[k] = usize::MAX;
    }
    go(0, j, c, x, apex, &mut legs, &mut out);
    out
}

/// The universal cocone under `x: j -> c`, canonical by least apex, or `None`.
pub fn colimit(j: &FinCategory, c: &FinCategory, x: &Functor) -> Option<Cocone> {
    if c.is_thin() {
        let vals: Vec<Obj> = x.obj.clone();
        let apex = lub(c, &vals)?;
        let legs = vals.iter().map(|&v| c.arrow(v, apex).unwrap()).collect();
        return Some(Cocone { apex, legs });
    }
    colimit_generic(j, c, x)
}

/// Colimit search without the thin fast path.
pub fn colimit_generic(j: &FinCategory, c: &FinCategory, x: &Functor) -> Option<Cocone> {
    let all: Vec<Vec<Vec<Mor>>> = (0..c.n_obj()).map(|d| cocones_at(j, c, x, d)).collect();
    for apex in 0..c.n_obj() {
        for lam in &all[apex] {
            let universal = (0..c.n_obj()).all(|d| {
                all[d].iter().all(|mu| {
                    c.hom(apex, d)
                        .iter()
                        .filter(|&&t| (0..j.n_obj()).all(|i| c.compose(t, lam[i]) == mu[i]))
                        .count()
                        == 1
                })
            });
            if universal {
                return Some(Cocone { apex, legs: lam.clone() });
            }
        }
    }
    None
}

/// Least upper bound in a thin category, first in object order among the least ones.
pub fn lub(c: &FinCategory, vals: &[Obj]) -> Option<Obj> {
    let ub: Vec<Obj> = (0..c.n_obj()).filter(|&d| vals.iter().all(|&v| c.leq(v, d))).collect();
    ub.iter().copied().find(|&u| ub.iter().all(|&d| c.leq(u, d)))
}

/// Pushout of `f: a -> b` and `g: a -> e`: apex with the two legs.
pub fn pushout(c: &FinCategory, f: Mor, g: Mor) -> Option<(Obj, Mor, Mor)> {
    let (b, e) = (c.tgt(f), c.tgt(g));
    if c.is_thin() {
        let p = lub(c, &[b, e])?;
        return Some((p, c.arrow(b, p).unwrap(), c.arrow(e, p).unwrap()));
    }
    let cocones: Vec<Vec<(Mor, Mor)>> = (0..c.n_obj())
        .map(|d| {
            let mut v = Vec::new();
            for &p in c.hom(b, d) {
                for &q in c.hom(e, d) {
                    if c.compose(p, f) == c.compose(q, g) {
                        v.push((p, q));
                    }
                }
            }
            v
        })
        .collect();
    for apex in 0..c.n_obj() {
        for &(p, q) in &cocones[apex] {
            let universal = (0..c.n_obj()).all(|d| {
                cocones[d].iter().all(|&(p2, q2)| {
                    c.hom(apex, d)
                        .iter()
                        .filter(|&&t| c.compose(t, p) == p2 && c.compose(t, q) == q2)
                        .count()
                        == 1
                })
            });
            if universal {
                return Some((apex, p, q));
            }
        }
    }
    None
}

/// Coproduct of `a` and `b` with its two insertions.
pub fn coproduct(c: &FinCategory, a: Obj, b: Obj) -> Option<(Obj, Mor, Mor)> {
    let j = FinCategory::discrete(vec!["0".into(), "1".into()]);
    let x = Functor { obj: vec![a, b], mor: vec![c.id(a), c.id(b)] };
    colimit(&j, c, &x).map(|cc| (cc.apex, cc.legs[0], cc.legs[1]))
}

/// An initial object, least in object order.
pub fn initial_object(c: &FinCategory) -> Option<Obj> {
    (0..c.n_obj()).find(|&x| (0..c.n_obj()).all(|y| c.hom(x, y).len() == 1))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismEntry {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// On-disk category description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CategoryFile {
    pub schema_version: u32,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[f, g, g.f]`.
    pub composition: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weq: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cof: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<BTreeMap<String, usize>>,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Validates a raw description, reporting every violated law.
pub fn validate_category(raw: &CategoryFile) -> Result<FinCategory, Vec<CategoryError>> {
    let mut errs = Vec::new();
    let mut obj_ix = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_ix.insert(o.as_str(), i).is_some() {
            errs.push(CategoryError::DuplicateName(o.clone()));
        }
    }
    let mut mor_ix = HashMap::new();
    let mut mors = Vec::new();
    for (i, m) in raw.morphisms.iter().enumerate() {
        if mor_ix.insert(m.name.as_str(), i).is_some() {
            errs.push(CategoryError::DuplicateName(m.name.clone()));
        }
        match (obj_ix.get(m.src.as_str()), obj_ix.get(m.tgt.as_str())) {
            (Some(&s), Some(&t)) => mors.push((m.name.clone(), s, t)),
            (None, _) => errs.push(CategoryError::UnknownName(m.src.clone())),
            (_, None) => errs.push(CategoryError::UnknownName(m.tgt.clone())),
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let mut identity = vec![usize::MAX; raw.objects.len()];
    for (x, o) in raw.objects.iter().enumerate() {
        match raw.identities.get(o).and_then(|m| mor_ix.get(m.as_str())) {
            Some(&i) if mors[i].1 == x && mors[i].2 == x => identity[x] = i,
            _ => errs.push(CategoryError::MissingIdentity(o.clone())),
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let is_id: Vec<bool> = (0..mors.len()).map(|f| identity[mors[f].1] == f).collect();
    let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for [f, g, h] in &raw.composition {
        let look = |n: &String| mor_ix.get(n.as_str()).copied().ok_or_else(|| CategoryError::UnknownName(n.clone()));
        match (look(f), look(g), look(h)) {
            (Ok(f), Ok(g), Ok(h)) => {
                if mors[f].2 != mors[g].1 || mors[h].1 != mors[f].1 || mors[h].2 != mors[g].2 {
                    errs.push(CategoryError::IllTypedComposite(mors[f].0.clone(), mors[g].0.clone()));
                } else {
                    table.insert((g, f), h);
                }
            }
            (a, b, c) => {
                for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                    errs.push(e);
                }
            }
        }
    }
    for f in 0..mors.len() {
        for g in 0..mors.len() {
            if mors[f].2 != mors[g].1 {
                continue;
            }
            let implied = if is_id[f] {
                Some(g)
            } else if is_id[g] {
                Some(f)
            } else {
                None
            };
            match (table.get(&(g, f)), implied) {
                (Some(&h), Some(i)) if h != i => errs.push(CategoryError::IdentityLaw(mors[h].0.clone())),
                (Some(_), _) => {}
                (None, Some(i)) => {
                    table.insert((g, f), i);
                }
                (None, None) => errs.push(CategoryError::MissingComposite(mors[f].0.clone(), mors[g].0.clone())),
            }
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let names = raw.objects.clone();
    let cat = FinCategory::from_parts(names, mors, identity, |g, f| table[&(g, f)]);
    let laws = cat.check_laws();
    if laws.is_empty() {
        Ok(cat)
    } else {
        Err(laws)
    }
}

/// Serializes a category (with optional markings) to the file schema.
pub fn to_file(c: &FinCategory, weq: Option<&[bool]>, cof: Option<&[bool]>, degree: Option<&[usize]>) -> CategoryFile {
    let marked = |s: &[bool]| (0..c.n_mor()).filter(|&f| s[f]).map(|f| c.mor_name(f).to_string()).collect();
    let mut composition = Vec::new();
    for f in 0..c.n_mor() {
        for &g in c.out_of(c.tgt(f)) {
            if !c.is_identity(f) && !c.is_identity(g) {
                composition.push([
                    c.mor_name(f).to_string(),
                    c.mor_name(g).to_string(),
                    c.mor_name(c.compose(g, f)).to_string(),
                ]);
            }
        }
    }
    CategoryFile {
        schema_version: SCHEMA_VERSION,
        objects: c.obj_names().to_vec(),
        morphisms: (0..c.n_mor())
            .map(|f| MorphismEntry {
                name: c.mor_name(f).into(),
                src: c.obj_name(c.src(f)).into(),
                tgt: c.obj_name(c.tgt(f)).into(),
            })
            .collect(),
        identities: (0..c.n_obj()).map(|x| (c.obj_name(x).to_string(), c.mor_name(c.id(x)).to_string())).collect(),
        composition,
        weq: weq.map(marked),
        cof: cof.map(marked),
        degree: degree.map(|d| (0..c.n_obj()).map(|x| (c.obj_name(x).to_string(), d[x])).collect()),
    }
}

/// Resolves a list of morphism names to a marking.
pub fn marking(c: &FinCategory, names: &[String]) -> Result<Vec<bool>, CategoryError> {
    let mut m = vec![false; c.n_mor()];
    for n in names {
        let f = c.mor_by_name(n).ok_or_else(|| CategoryError::UnknownName(n.clone()))?;
        m[f] = true;
    }
    Ok(m)
}

/// Canonical JSON: sorted keys, arrays in declaration order.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_six_morphisms() {
        let c = FinCategory::chain(2);
        assert_eq!(c.n_mor(), 6);
        assert!(c.check_laws().is_empty());
        let raw = to_file(&c, None, None, None);
        let back = validate_category(&raw).unwrap();
        assert_eq!(back.n_mor(), 6);
    }

    #[test]
    fn redirected_composite_is_ill_typed() {
        let c = FinCategory::chain(2);
        let mut raw = to_file(&c, None, None, None);
        for t in raw.composition.iter_mut() {
            if t[0] == "0->1" && t[1] == "1->2" {
                t[2] = "id:0".into();
            }
        }
        let errs = validate_category(&raw).unwrap_err();
        assert!(matches!(errs[0], CategoryError::IllTypedComposite(_, _)));
    }

    #[test]
    fn missing_identity_reported() {
        let mut raw = to_file(&FinCategory::chain(1), None, None, None);
        raw.identities.remove("1");
        let errs = validate_category(&raw).unwrap_err();
        assert_eq!(errs, vec![CategoryError::MissingIdentity("1".into())]);
    }

    #[test]
    fn lattice_ab_counts() {
        let c = FinCategory::subset_lattice(&["a", "b"]);
        assert_eq!((c.n_obj(), c.n_mor()), (4, 9));
    }

    #[test]
    fn closure_on_free_iso_is_everything() {
        let c = FinCategory::free_iso();
        let mut gens = vec![false; c.n_mor()];
        gens[c.arrow(0, 1).unwrap()] = true;
        assert!(two_out_of_six_closure(&c, &gens).iter().all(|&b| b));
    }

    #[test]
    fn closure_on_poset_without_generators() {
        let c = FinCategory::subset_lattice(&["a", "b"]);
        let w = two_out_of_six_closure(&c, &vec![false; c.n_mor()]);
        assert_eq!(w.iter().filter(|&&b| b).count(), 4);
    }

    #[test]
    fn latching_of_top_subset() {
        let names = (1..8usize).map(|m| m.to_string()).collect();
        let c = FinCategory::poset(names, |i, j| (i + 1) & !(j + 1) == 0);
        let (lat, _) = latching_category(&c, 6);
        assert_eq!(lat.n_obj(), 6);
    }

    #[test]
    fn sieves_in_chain() {
        let one = FinCategory::chain(1);
        let pt = FinCategory::terminal();
        let zero = Functor { obj: vec![0], mor: vec![one.id(0)] };
        let top = Functor { obj: vec![1], mor: vec![one.id(1)] };
        assert!(is_sieve(&zero, &pt, &one));
        assert!(!is_sieve(&top, &pt, &one));
    }

    #[test]
    fn colimits_in_small_posets() {
        let c = FinCategory::subset_lattice(&["a", "b"]);
        let empty = FinCategory::discrete(vec![]);
        let cc = colimit(&empty, &c, &Functor { obj: vec![], mor: vec![] }).unwrap();
        assert_eq!(cc.apex, 0);
        let span = FinCategory::span();
        let x = Functor {
            obj: vec![0, 1, 2],
            mor: (0..span.n_mor())
                .map(|f| c.arrow([0, 1, 2][span.src(f)], [0, 1, 2][span.tgt(f)]).unwrap())
                .collect(),
        };
        assert_eq!(colimit(&span, &c, &x).unwrap().apex, 3);
        assert_eq!(colimit_generic(&span, &c, &x).unwrap().apex, 3);
        // two minimal upper bounds and no least one
        let bowtie = FinCategory::poset(
            vec!["p".into(), "q".into(), "r".into(), "s".into()],
            |i, j| i == j || (i < 2 && j >= 2),
        );
        let pair = FinCategory::discrete(vec!["0".into(), "1".into()]);
        let x = Functor { obj: vec![0, 1], mor: vec![bowtie.id(0), bowtie.id(1)] };
        assert!(colimit(&pair, &bowtie, &x).is_none());
        assert!(colimit_generic(&pair, &bowtie, &x).is_none());
    }

    #[test]
    fn degrees_and_endomorphisms() {
        let c = FinCategory::chain(3);
        assert_eq!(synthesize_degree(&c).unwrap(), vec![0, 1, 2, 3]);
        assert!(matches!(synthesize_degree(&FinCategory::free_iso()), Err(DegreeError::Cycle(_))));
    }

    #[test]
    fn product_laws() {
        let p = FinCategory::product(&FinCategory::chain(1), &FinCategory::free_iso());
        assert_eq!((p.n_obj(), p.n_mor()), (4, 12));
        assert!(p.check_laws().is_empty());
    }
}
