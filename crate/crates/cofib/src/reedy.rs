//! Diagrams over finite direct homotopical categories: latching objects,
//! Reedy cofibrancy, extension, relative factorization, colimits by cell
//! attachment and the stage colimits of filtrations.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::cofcat::CofCategory;
use crate::dconstr::FiltCategory;
use crate::fincat::{self, colimit, initial_object, latching_category, pushout, Cocone, FinCategory, Functor, Mor, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReedyError {
    #[error("latching object at {0} not found")]
    NotFound(String),
    #[error("latching morphism at {0} is not a cofibration")]
    NotCofibrant(String),
    #[error("missing pushout attaching {0}")]
    MissingPushout(String),
    #[error("{0} is not a cofibration under the latching object")]
    NotCofibration(String),
    #[error("no lift at degree {degree}: {problem}")]
    NoLift { degree: usize, problem: String },
    #[error("enumeration budget of {0} diagrams exceeded")]
    Budget(usize),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
}

/// A finite direct category with weak equivalences and cached latching categories.
#[derive(Clone, Debug)]
pub struct DirectIndex {
    pub cat: FinCategory,
    pub weq: Vec<bool>,
    pub degree: Vec<usize>,
    /// Objects in a degree-compatible order.
    pub order: Vec<Obj>,
    latching: Vec<(FinCategory, Functor, Vec<Mor>)>,
}

impl DirectIndex {
    pub fn new(cat: FinCategory, weq: Vec<bool>, degree: Vec<usize>) -> Result<Self, ReedyError> {
        fincat::check_degree(&cat, &degree).map_err(|e| ReedyError::Inconsistent(format!("{:?}", e)))?;
        let mut order: Vec<Obj> = (0..cat.n_obj()).collect();
        order.sort_by_key(|&x| (degree[x], x));
        let latching = (0..cat.n_obj())
            .map(|i| {
                let (l, forget) = latching_category(&cat, i);
                let into: Vec<Mor> = FinCategory::into(&cat, i).iter().copied().filter(|&u| !cat.is_identity(u)).collect();
                (l, forget, into)
            })
            .collect();
        Ok(DirectIndex { cat, weq, degree, order, latching })
    }

    pub fn from_filt(f: &FiltCategory) -> Self {
        DirectIndex::new(f.cat.clone(), f.weq.clone(), f.degree.clone()).expect("filtrations are direct")
    }

    /// With degrees synthesized from the category.
    pub fn from_category(cat: FinCategory, weq: Vec<bool>) -> Result<Self, ReedyError> {
        let degree = fincat::synthesize_degree(&cat).map_err(|e| ReedyError::Inconsistent(format!("{:?}", e)))?;
        DirectIndex::new(cat, weq, degree)
    }

    pub fn n_obj(&self) -> usize {
        self.cat.n_obj()
    }
}

/// Latching object with its colimit cocone and the latching morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Latching {
    pub cocone: Cocone,
    pub map: Mor,
}

fn latching_diagram(idx: &DirectIndex, obj: &[Obj], mor: &[Mor], i: Obj) -> Functor {
    let (_, forget, _) = &idx.latching[i];
    Functor { obj: forget.obj.iter().map(|&j| obj[j]).collect(), mor: forget.mor.iter().map(|&m| mor[m]).collect() }
}

/// The colimit of the latching diagram at `i`, for a diagram given on all
/// objects of lower degree (entries at other objects are ignored).
pub fn latching_colimit(idx: &DirectIndex, c: &CofCategory, obj: &[Obj], mor: &[Mor], i: Obj) -> Result<Cocone, ReedyError> {
    let (l, _, _) = &idx.latching[i];
    let xl = latching_diagram(idx, obj, mor, i);
    colimit(l, &c.cat, &xl).ok_or_else(|| ReedyError::NotFound(idx.cat.obj_name(i).to_string()))
}

/// The unique morphism out of a colimit apex restricting to `legs`.
fn induced(c: &FinCategory, cocone: &Cocone, target: Obj, legs: &[Mor]) -> Option<Mor> {
    c.hom(cocone.apex, target)
        .iter()
        .copied()
        .find(|&t| cocone.legs.iter().zip(legs).all(|(&l, &m)| c.compose(t, l) == m))
}

pub fn latching_object(idx: &DirectIndex, c: &CofCategory, x: &Functor, i: Obj) -> Result<Latching, ReedyError> {
    let cocone = latching_colimit(idx, c, &x.obj, &x.mor, i)?;
    let legs: Vec<Mor> = idx.latching[i].2.iter().map(|&u| x.mor[u]).collect();
    let map = induced(&c.cat, &cocone, x.obj[i], &legs)
        .ok_or_else(|| ReedyError::Inconsistent(format!("no latching morphism at {}", idx.cat.obj_name(i))))?;
    Ok(Latching { cocone, map })
}

pub fn is_homotopical(idx: &DirectIndex, c: &CofCategory, x: &Functor) -> bool {
    x.is_homotopical(&idx.weq, &c.weq)
}

pub fn check_reedy_cofibrant(idx: &DirectIndex, c: &CofCategory, x: &Functor) -> Result<(), ReedyError> {
    for &i in &idx.order {
        let l = latching_object(idx, c, x, i)?;
        if !c.cof[l.map] {
            return Err(ReedyError::NotCofibrant(idx.cat.obj_name(i).to_string()));
        }
    }
    Ok(())
}

pub fn is_reedy_cofibrant(idx: &DirectIndex, c: &CofCategory, x: &Functor) -> bool {
    check_reedy_cofibrant(idx, c, x).is_ok()
}

/// Whether the natural transformation with `components` from `x` to `y` is a
/// Reedy cofibration: every X_i + L_iY -> Y_i (pushout over L_iX) is a cofibration.
pub fn check_reedy_cofibration(
    idx: &DirectIndex,
    c: &CofCategory,
    x: &Functor,
    y: &Functor,
    components: &[Mor],
) -> Result<(), ReedyError> {
    let cat = &c.cat;
    for &i in &idx.order {
        let name = idx.cat.obj_name(i).to_string();
        let lx = latching_object(idx, c, x, i)?;
        let ly = latching_object(idx, c, y, i)?;
        let (_, forget, _) = &idx.latching[i];
        let legs: Vec<Mor> =
            forget.obj.iter().zip(&ly.cocone.legs).map(|(&j, &leg)| cat.compose(leg, components[j])).collect();
        let lf = induced(cat, &lx.cocone, ly.cocone.apex, &legs)
            .ok_or_else(|| ReedyError::Inconsistent(format!("latching map at {}", name)))?;
        let (p, lb, le) = pushout(cat, lx.map, lf).ok_or_else(|| ReedyError::MissingPushout(name.clone()))?;
        let q = cat
            .hom(p, y.obj[i])
            .iter()
            .copied()
            .find(|&q| cat.compose(q, lb) == components[i] && cat.compose(q, le) == ly.map)
            .ok_or_else(|| ReedyError::Inconsistent(format!("relative latching map at {}", name)))?;
        if !c.cof[q] {
            return Err(ReedyError::NotCofibration(name));
        }
    }
    Ok(())
}

pub fn is_reedy_cofibration(idx: &DirectIndex, c: &CofCategory, x: &Functor, y: &Functor, components: &[Mor]) -> bool {
    check_reedy_cofibration(idx, c, x, y, components).is_ok()
}

/// A diagram defined on a sieve: entries outside are `usize::MAX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partial {
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl Partial {
    pub fn empty(idx: &DirectIndex) -> Self {
        Partial { obj: vec![usize::MAX; idx.n_obj()], mor: vec![usize::MAX; idx.cat.n_mor()] }
    }
    pub fn defined(&self, i: Obj) -> bool {
        self.obj[i] != usize::MAX
    }
    pub fn into_functor(self) -> Option<Functor> {
        if self.obj.contains(&usize::MAX) || self.mor.contains(&usize::MAX) {
            return None;
        }
        Some(Functor { obj: self.obj, mor: self.mor })
    }
    /// The restriction of a full diagram to a set of objects.
    pub fn restrict(idx: &DirectIndex, x: &Functor, keep: &[bool]) -> Partial {
        let mut p = Partial::empty(idx);
        for i in 0..idx.n_obj() {
            if keep[i] {
                p.obj[i] = x.obj[i];
            }
        }
        for m in 0..idx.cat.n_mor() {
            if keep[idx.cat.tgt(m)] {
                p.mor[m] = x.mor[m];
            }
        }
        p
    }
}

/// Extends a diagram over a sieve to the object `j` (all of whose latching
/// objects are defined) by a cofibration out of L_jX.
pub fn extend_over_object(
    idx: &DirectIndex,
    c: &CofCategory,
    partial: &Partial,
    j: Obj,
    latch: &Cocone,
    choice: Mor,
) -> Result<Partial, ReedyError> {
    let cat = &c.cat;
    if cat.src(choice) != latch.apex || !c.cof[choice] {
        return Err(ReedyError::NotCofibration(cat.mor_name(choice).to_string()));
    }
    let mut p = partial.clone();
    p.obj[j] = cat.tgt(choice);
    p.mor[idx.cat.id(j)] = cat.id(p.obj[j]);
    for (a, &u) in idx.latching[j].2.iter().enumerate() {
        p.mor[u] = cat.compose(choice, latch.legs[a]);
    }
    Ok(p)
}

/// Calls `visit` with every homotopical (if requested) Reedy cofibrant
/// extension of `start` to the whole index, in canonical order.
pub fn for_each_extension<F>(
    idx: &DirectIndex,
    c: &CofCategory,
    start: &Partial,
    homotopical: bool,
    mut visit: F,
) -> Result<(), ReedyError>
where
    F: FnMut(&Functor) -> bool,
{
    fn go<F: FnMut(&Functor) -> bool>(
        k: usize,
        idx: &DirectIndex,
        c: &CofCategory,
        p: &Partial,
        homotopical: bool,
        visit: &mut F,
    ) -> bool {
        if k == idx.order.len() {
            return visit(&p.clone().into_functor().expect("complete"));
        }
        let j = idx.order[k];
        let Ok(latch) = latching_colimit(idx, c, &p.obj, &p.mor, j) else { return true };
        if p.defined(j) {
            let legs: Vec<Mor> = idx.latching[j].2.iter().map(|&u| p.mor[u]).collect();
            let ok = induced(&c.cat, &latch, p.obj[j], &legs).map(|m| c.cof[m]).unwrap_or(false);
            return !ok || go(k + 1, idx, c, p, homotopical, visit);
        }
        for &ch in c.cat.out_of(latch.apex) {
            if !c.cof[ch] {
                continue;
            }
            let q = extend_over_object(idx, c, p, j, &latch, ch).expect("cofibration");
            if homotopical && idx.latching[j].2.iter().any(|&u| idx.weq[u] && !c.weq[q.mor[u]]) {
                continue;
            }
            if !go(k + 1, idx, c, &q, homotopical, visit) {
                return false;
            }
        }
        true
    }
    go(0, idx, c, start, homotopical, &mut visit);
    Ok(())
}

/// Every homotopical Reedy cofibrant diagram, up to `budget`.
pub fn enumerate_diagrams(idx: &DirectIndex, c: &CofCategory, budget: usize) -> Result<Vec<Functor>, ReedyError> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_extension(idx, c, &Partial::empty(idx), true, |x| {
        if out.len() == budget {
            over = true;
            return false;
        }
        out.push(x.clone());
        true
    })?;
    if over {
        return Err(ReedyError::Budget(budget));
    }
    Ok(out)
}

/// A factorization X -> Z -> Y through a Reedy cofibration followed by a
/// levelwise weak equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub z: Functor,
    pub k: Vec<Mor>,
    pub s: Vec<Mor>,
}

/// Factors `f: X -> Y` (X Reedy cofibrant) as a Reedy cofibration followed
/// by a levelwise weq, extending the factorization `given` over the sieve
/// `given_on` and lifting along `p: C -> D` the factorization `over` of `p f`
/// (components in D). Built degreewise.
#[allow(clippy::too_many_arguments)]
pub fn relative_factorization(
    idx: &DirectIndex,
    c: &CofCategory,
    d: &CofCategory,
    p: &Functor,
    x: &Functor,
    y: &Functor,
    f: &[Mor],
    given_on: &[bool],
    given: Option<&Factorization>,
    over: &Factorization,
) -> Result<Factorization, ReedyError> {
    let cat = &c.cat;
    let n = idx.n_obj();
    let mut z = Partial::empty(idx);
    let mut k = vec![usize::MAX; n];
    let mut s = vec![usize::MAX; n];
    if let Some(g) = given {
        let part = Partial::restrict(idx, &g.z, given_on);
        z = part;
        for i in 0..n {
            if given_on[i] {
                k[i] = g.k[i];
                s[i] = g.s[i];
            }
        }
    }
    for &j in &idx.order {
        if given_on[j] && given.is_some() {
            continue;
        }
        let name = idx.cat.obj_name(j).to_string();
        if !d.weq[over.s[j]] {
            return Err(ReedyError::Inconsistent(format!("given factorization not a weq at {}", name)));
        }
        let lz = latching_colimit(idx, c, &z.obj, &z.mor, j)?;
        let lx = latching_object(idx, c, x, j)?;
        let (_, forget, into) = &idx.latching[j];
        // L_jX -> L_jZ
        let legs: Vec<Mor> = forget.obj.iter().zip(&lz.legs).map(|(&i, &leg)| cat.compose(leg, k[i])).collect();
        let lk = induced(cat, &lx.cocone, lz.apex, &legs).ok_or_else(|| ReedyError::Inconsistent(name.clone()))?;
        let (pt, from_x, from_lz) = pushout(cat, lx.map, lk).ok_or_else(|| ReedyError::MissingPushout(name.clone()))?;
        // the map from the pushout to Y_j
        let legs_y: Vec<Mor> = forget.obj.iter().zip(into).map(|(&i, &u)| cat.compose(y.mor[u], s[i])).collect();
        let lzy = induced(cat, &lz, y.obj[j], &legs_y).ok_or_else(|| ReedyError::Inconsistent(name.clone()))?;
        let to_y = cat
            .hom(pt, y.obj[j])
            .iter()
            .copied()
            .find(|&t| cat.compose(t, from_x) == f[j] && cat.compose(t, from_lz) == lzy)
            .ok_or_else(|| ReedyError::Inconsistent(name.clone()))?;
        // factor to_y as a cofibration then a weq, lying over the given data
        let mut found = None;
        'search: for &i in cat.out_of(pt) {
            if !c.cof[i] {
                continue;
            }
            for &w in cat.hom(cat.tgt(i), y.obj[j]) {
                if !c.weq[w] || cat.compose(w, i) != to_y {
                    continue;
                }
                let kj = cat.compose(i, from_x);
                if p.obj[cat.tgt(i)] != over.z.obj[j] || p.mor[kj] != over.k[j] || p.mor[w] != over.s[j] {
                    continue;
                }
                found = Some((i, w));
                break 'search;
            }
        }
        let (i, w) = found.ok_or_else(|| ReedyError::NoLift {
            degree: idx.degree[j],
            problem: format!("factor {} at {}", cat.mor_name(to_y), name),
        })?;
        z.obj[j] = cat.tgt(i);
        z.mor[idx.cat.id(j)] = cat.id(z.obj[j]);
        for (a, &u) in into.iter().enumerate() {
            z.mor[u] = cat.compose(i, cat.compose(from_lz, lz.legs[a]));
        }
        k[j] = cat.compose(i, from_x);
        s[j] = w;
    }
    let z = z.into_functor().ok_or_else(|| ReedyError::Inconsistent("incomplete factorization".into()))?;
    Ok(Factorization { z, k, s })
}

/// The colimit of a Reedy cofibrant diagram, attaching one object at a time
/// along its latching morphism; checked against the direct colimit search.
pub fn reedy_colimit(idx: &DirectIndex, c: &CofCategory, x: &Functor) -> Result<Cocone, ReedyError> {
    reedy_colimit_on(idx, c, x, &vec![true; idx.n_obj()])
}

/// The colimit over the sieve `keep`.
pub fn reedy_colimit_on(idx: &DirectIndex, c: &CofCategory, x: &Functor, keep: &[bool]) -> Result<Cocone, ReedyError> {
    let cat = &c.cat;
    let init = initial_object(cat).ok_or_else(|| ReedyError::MissingPushout("no initial object".into()))?;
    let mut apex = init;
    let mut legs = vec![usize::MAX; idx.n_obj()];
    for &i in idx.order.iter().filter(|&&i| keep[i]) {
        let name = idx.cat.obj_name(i).to_string();
        let l = latching_object(idx, c, x, i)?;
        if !c.cof[l.map] {
            return Err(ReedyError::NotCofibrant(name));
        }
        let (_, forget, _) = &idx.latching[i];
        let to_apex: Vec<Mor> = forget.obj.iter().map(|&j| legs[j]).collect();
        let a = induced(cat, &l.cocone, apex, &to_apex).ok_or_else(|| ReedyError::Inconsistent(name.clone()))?;
        let (p, old, new) = pushout(cat, a, l.map).ok_or_else(|| ReedyError::MissingPushout(name))?;
        for j in 0..legs.len() {
            if legs[j] != usize::MAX {
                legs[j] = cat.compose(old, legs[j]);
            }
        }
        legs[i] = new;
        apex = p;
    }
    let kept: Vec<Obj> = (0..idx.n_obj()).filter(|&i| keep[i]).collect();
    Ok(Cocone { apex, legs: kept.iter().map(|&i| legs[i]).collect() })
}

/// [`reedy_colimit_on`] compared against the colimit computed from cocones.
pub fn reedy_colimit_checked(idx: &DirectIndex, c: &CofCategory, x: &Functor, keep: &[bool]) -> Result<Cocone, ReedyError> {
    let cat = &c.cat;
    let cocone = reedy_colimit_on(idx, c, x, keep)?;
    let kept: Vec<Obj> = (0..idx.n_obj()).filter(|&i| keep[i]).collect();
    let (sub, inc) = idx.cat.full_subcategory(&kept);
    if let Some(direct) = colimit(&sub, cat, &x.after(&inc)) {
        if !cat.hom(direct.apex, cocone.apex).iter().any(|&t| cat.is_iso(t)) {
            return Err(ReedyError::Inconsistent("cell attachment disagrees with the colimit".into()));
        }
    }
    Ok(cocone)
}

/// Objects with connecting morphisms and the least index from which all
/// connecting morphisms are weak equivalences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventualSequence {
    pub objects: Vec<Obj>,
    pub connecting: Vec<Mor>,
    pub stabilization: usize,
}

impl EventualSequence {
    pub fn from_parts(c: &CofCategory, objects: Vec<Obj>, connecting: Vec<Mor>) -> Self {
        let mut s = connecting.len();
        while s > 0 && c.weq[connecting[s - 1]] {
            s -= 1;
        }
        EventualSequence { objects, connecting, stabilization: s }
    }
}

/// The colimit of `x` over the image of a sieve inclusion `inc`, with legs
/// indexed by the objects of the source of `inc`.
pub fn phi_along(inc: &Functor, idx_big: &DirectIndex, c: &CofCategory, x: &Functor) -> Result<Cocone, ReedyError> {
    let mut keep = vec![false; idx_big.n_obj()];
    for &o in &inc.obj {
        keep[o] = true;
    }
    let cc = reedy_colimit_on(idx_big, c, x, &keep)?;
    let pos: HashMap<Obj, usize> = (0..idx_big.n_obj()).filter(|&i| keep[i]).enumerate().map(|(a, i)| (i, a)).collect();
    Ok(Cocone { apex: cc.apex, legs: inc.obj.iter().map(|o| cc.legs[pos[o]]).collect() })
}

/// Φ^(k): the colimit over filt{k,K} of a diagram on filt{kmax,K}.
pub fn phi(small: &FiltCategory, big: &FiltCategory, idx_big: &DirectIndex, c: &CofCategory, x: &Functor) -> Result<Cocone, ReedyError> {
    let inc = small.inclusion_into(big).ok_or_else(|| ReedyError::Inconsistent("level not contained".into()))?;
    phi_along(&inc, idx_big, c, x)
}

/// The morphism between two colimits over nested sieves (`a` inside `b`,
/// both given by their inclusions into the same index).
pub fn colimit_comparison(c: &CofCategory, inc_a: &Functor, ca: &Cocone, inc_b: &Functor, cb: &Cocone) -> Result<Mor, ReedyError> {
    let pos: HashMap<Obj, usize> = inc_b.obj.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let legs = inc_a
        .obj
        .iter()
        .map(|o| pos.get(o).map(|&i| cb.legs[i]))
        .collect::<Option<Vec<Mor>>>()
        .ok_or_else(|| ReedyError::Inconsistent("sieves not nested".into()))?;
    induced(&c.cat, ca, cb.apex, &legs).ok_or_else(|| ReedyError::Inconsistent("no comparison".into()))
}

/// The index of the last filtration stage with the inclusions of all
/// stages, shared by every diagram on it.
pub struct PhiLevels {
    pub idx: DirectIndex,
    pub incs: Vec<Functor>,
}

impl PhiLevels {
    /// `levels[k]` is filt{k,K}.
    pub fn new(levels: &[FiltCategory]) -> Result<PhiLevels, ReedyError> {
        let big = levels.last().ok_or_else(|| ReedyError::Inconsistent("no levels".into()))?;
        let idx = DirectIndex::from_filt(big);
        let incs: Vec<Functor> = levels
            .iter()
            .map(|l| l.inclusion_into(big).ok_or_else(|| ReedyError::Inconsistent("levels".into())))
            .collect::<Result<_, _>>()?;
        Ok(PhiLevels { idx, incs })
    }

    /// Φ^(0), ..., Φ^(kmax) of a diagram on the last stage, with connecting maps.
    pub fn sequence(&self, c: &CofCategory, x: &Functor) -> Result<(Vec<Cocone>, EventualSequence), ReedyError> {
        let cones: Vec<Cocone> =
            self.incs.iter().map(|inc| phi_along(inc, &self.idx, c, x)).collect::<Result<_, _>>()?;
        let connecting = (0..cones.len().saturating_sub(1))
            .map(|k| colimit_comparison(c, &self.incs[k], &cones[k], &self.incs[k + 1], &cones[k + 1]))
            .collect::<Result<Vec<_>, _>>()?;
        let seq = EventualSequence::from_parts(c, cones.iter().map(|cc| cc.apex).collect(), connecting);
        Ok((cones, seq))
    }
}

/// Φ^(0), ..., Φ^(kmax) of a diagram on the last filtration stage, with
/// connecting maps. `levels[k]` is filt{k,K}.
pub fn phi_sequence(levels: &[FiltCategory], c: &CofCategory, x: &Functor) -> Result<(Vec<Cocone>, EventualSequence), ReedyError> {
    PhiLevels::new(levels)?.sequence(c, x)
}

/// The comparisons Φ^(k)(X|A) -> Φ^(k)(X) at every level, for sieves
/// `sub[k]` inside `whole[k]`, all given as inclusions into the top index.
pub fn phi_comparison(idx_big: &DirectIndex, sub: &[Functor], whole: &[Functor], c: &CofCategory, x: &Functor) -> Result<Vec<Mor>, ReedyError> {
    sub.iter()
        .zip(whole)
        .map(|(s, w)| {
            let cs = phi_along(s, idx_big, c, x)?;
            let cw = phi_along(w, idx_big, c, x)?;
            colimit_comparison(c, s, &cs, w, &cw)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dconstr::WeqPolicy;
    use crate::simplicial::FinSimplicialSet;

    fn lattice(atoms: &[&str], all: bool) -> CofCategory {
        CofCategory::with_all_cof(FinCategory::subset_lattice(atoms), all)
    }

    #[test]
    fn arrow_latching() {
        let idx = DirectIndex::from_category(FinCategory::chain(1), vec![true, false, true]).unwrap();
        let c = lattice(&["a", "b"], true);
        let x = Functor { obj: vec![1, 3], mor: vec![c.cat.id(1), c.cat.arrow(1, 3).unwrap(), c.cat.id(3)] };
        let l = latching_object(&idx, &c, &x, 1).unwrap();
        assert_eq!(l.cocone.apex, 1);
        let l0 = latching_object(&idx, &c, &x, 0).unwrap();
        assert_eq!(l0.cocone.apex, 0);
        assert!(is_reedy_cofibrant(&idx, &c, &x));
        assert_eq!(reedy_colimit(&idx, &c, &x).unwrap().apex, 3);
    }

    #[test]
    fn frame_latching_is_join() {
        let f = FiltCategory::build(&FinSimplicialSet::standard(1), 1, &WeqPolicy::Generated).unwrap();
        let idx = DirectIndex::from_filt(&f);
        let c = lattice(&["a", "b"], true);
        let all = enumerate_diagrams(&idx, &c, 1 << 20).unwrap();
        assert!(!all.is_empty());
        let e01 = f.obj_by_seq(&[0, 1]).unwrap();
        for x in &all {
            let l = latching_object(&idx, &c, x, e01).unwrap();
            let (a, b) = (x.obj[f.obj_by_seq(&[0]).unwrap()], x.obj[f.obj_by_seq(&[1]).unwrap()]);
            assert_eq!(l.cocone.apex, a | b);
        }
    }

    #[test]
    fn phi_on_point() {
        let pt = FinSimplicialSet::standard(0);
        let levels: Vec<FiltCategory> =
            (0..3).map(|k| FiltCategory::build(&pt, k, &WeqPolicy::Generated).unwrap()).collect();
        let c = lattice(&["a"], true);
        let idx = DirectIndex::from_filt(&levels[2]);
        for x in enumerate_diagrams(&idx, &c, 1000).unwrap() {
            let (cones, seq) = phi_sequence(&levels, &c, &x).unwrap();
            let top = *x.obj.iter().max().unwrap();
            assert_eq!(cones[2].apex, top);
            assert_eq!(seq.stabilization, 0);
        }
    }

    #[test]
    fn factorization_in_lattice() {
        let idx = DirectIndex::from_category(FinCategory::chain(1), vec![true, false, true]).unwrap();
        let c = lattice(&["a"], true);
        let x = Functor { obj: vec![0, 0], mor: vec![0, 0, 0] };
        let y = Functor { obj: vec![1, 1], mor: vec![c.cat.id(1), c.cat.id(1), c.cat.id(1)] };
        let f = vec![c.cat.arrow(0, 1).unwrap(); 2];
        let (t, p) = crate::cofcat::to_terminal(&c);
        let over = Factorization { z: Functor { obj: vec![0, 0], mor: vec![0; 3] }, k: vec![0; 2], s: vec![0; 2] };
        let r = relative_factorization(&idx, &c, &t, &p, &x, &y, &f, &[false, false], None, &over).unwrap();
        assert!(is_reedy_cofibration(&idx, &c, &x, &r.z, &r.k));
        for i in 0..2 {
            assert!(c.weq[r.s[i]]);
            assert_eq!(c.cat.compose(r.s[i], r.k[i]), f[i]);
        }
    }
}
