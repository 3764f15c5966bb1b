//! Cylinders, left homotopy, homotopy categories by left fractions, and an
//! independent localization oracle by coset enumeration.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::cofcat::CofCategory;
use crate::fincat::{coproduct, FinCategory, Functor, Mor, Obj};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoError {
    #[error("no coproduct {0} + {0}")]
    NoCoproduct(String),
    #[error("composition search failed for {0}")]
    CompositionSearchFailed(String),
    #[error("localization bound {bound} too small at source {source_obj}")]
    BoundTooSmall { bound: usize, source_obj: String },
    #[error("inconsistent localization: {0}")]
    Inconsistent(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
}

/// X + X >-> IX -~-> X with `d0`, `d1` the two composite insertions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub x: Obj,
    pub cyl: Obj,
    pub insertion: Mor,
    pub projection: Mor,
    pub d0: Mor,
    pub d1: Mor,
}

pub fn enumerate_cylinders(c: &CofCategory, x: Obj) -> Result<Vec<Cylinder>, HoError> {
    let cat = &c.cat;
    let (xx, i0, i1) = coproduct(cat, x, x).ok_or_else(|| HoError::NoCoproduct(cat.obj_name(x).to_string()))?;
    let id = cat.id(x);
    let mut out = Vec::new();
    for &j in cat.out_of(xx) {
        if !c.cof[j] {
            continue;
        }
        let cyl = cat.tgt(j);
        for &p in cat.hom(cyl, x) {
            let (d0, d1) = (cat.compose(j, i0), cat.compose(j, i1));
            if c.weq[p] && cat.compose(p, d0) == id && cat.compose(p, d1) == id {
                out.push(Cylinder { x, cyl, insertion: j, projection: p, d0, d1 });
            }
        }
    }
    Ok(out)
}

/// A homotopy H: IX -> Z between w f and w g for an acyclic cofibration w: Y >-> Z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyWitness {
    pub cylinder: Cylinder,
    pub w: Mor,
    pub h: Mor,
}

/// Cylinders and acyclic cofibrations cached per object.
pub struct HomotopyCtx<'a> {
    pub c: &'a CofCategory,
    cylinders: Vec<Vec<Cylinder>>,
    acyclic_out: Vec<Vec<Mor>>,
}

impl<'a> HomotopyCtx<'a> {
    pub fn new(c: &'a CofCategory) -> Result<Self, HoError> {
        let cat = &c.cat;
        let objs: Vec<Obj> = (0..cat.n_obj()).collect();
        let cylinders = par::map(&objs, |&x| enumerate_cylinders(c, x)).into_iter().collect::<Result<Vec<_>, _>>()?;
        let acyclic_out = objs
            .iter()
            .map(|&y| cat.out_of(y).iter().copied().filter(|&w| c.is_acyclic_cof(w)).collect())
            .collect();
        Ok(HomotopyCtx { c, cylinders, acyclic_out })
    }

    pub fn cylinders(&self, x: Obj) -> &[Cylinder] {
        &self.cylinders[x]
    }

    pub fn homotopy(&self, f: Mor, g: Mor) -> Option<HomotopyWitness> {
        let cat = &self.c.cat;
        let (x, y) = (cat.src(f), cat.tgt(f));
        if cat.src(g) != x || cat.tgt(g) != y {
            return None;
        }
        for cy in &self.cylinders[x] {
            for &w in &self.acyclic_out[y] {
                let (wf, wg) = (cat.compose(w, f), cat.compose(w, g));
                for &h in cat.hom(cy.cyl, cat.tgt(w)) {
                    if cat.compose(h, cy.d0) == wf && cat.compose(h, cy.d1) == wg {
                        return Some(HomotopyWitness { cylinder: cy.clone(), w, h });
                    }
                }
            }
        }
        None
    }

    pub fn left_homotopic(&self, f: Mor, g: Mor) -> bool {
        f == g || self.homotopy(f, g).is_some()
    }
}

pub fn left_homotopic(c: &CofCategory, f: Mor, g: Mor) -> Result<bool, HoError> {
    Ok(HomotopyCtx::new(c)?.left_homotopic(f, g))
}

/// Morphisms that become isomorphisms modulo left homotopy but are not weqs.
pub fn homotopy_isos_not_weq(ctx: &HomotopyCtx) -> Vec<Mor> {
    let cat = &ctx.c.cat;
    (0..cat.n_mor())
        .filter(|&f| {
            !ctx.c.weq[f]
                && cat.hom(cat.tgt(f), cat.src(f)).iter().any(|&g| {
                    ctx.left_homotopic(cat.compose(g, f), cat.id(cat.src(f)))
                        && ctx.left_homotopic(cat.compose(f, g), cat.id(cat.tgt(f)))
                })
        })
        .collect()
}

/// One letter of a zig-zag: a morphism or the formal inverse of a weq.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    Fwd(Mor),
    Inv(Mor),
}

/// A localization of C: the category, the functor from C, the inverses of
/// weqs, and a zig-zag word (applied left to right) for each morphism.
#[derive(Clone, Debug)]
pub struct HoCategory {
    pub cat: FinCategory,
    pub loc: Functor,
    pub inverse: Vec<Option<Mor>>,
    pub words: Vec<Vec<Letter>>,
    /// Pairs of fractions identified only through transitivity.
    pub closure_added: usize,
}

impl HoCategory {
    pub fn eval(&self, word: &[Letter]) -> Option<Mor> {
        let mut acc: Option<Mor> = None;
        for &l in word {
            let m = match l {
                Letter::Fwd(f) => self.loc.mor[f],
                Letter::Inv(w) => self.inverse[w]?,
            };
            acc = Some(match acc {
                None => m,
                Some(a) => self.cat.try_compose(m, a)?,
            });
        }
        acc
    }

    pub fn hom_sizes(&self) -> Vec<usize> {
        let n = self.cat.n_obj();
        (0..n * n).map(|i| self.cat.hom(i / n, i % n).len()).collect()
    }
}

fn check_localization(c: &CofCategory, h: &HoCategory) -> Result<(), HoError> {
    let cat = &c.cat;
    for f in 0..cat.n_mor() {
        for &g in cat.out_of(cat.tgt(f)) {
            if h.cat.compose(h.loc.mor[g], h.loc.mor[f]) != h.loc.mor[cat.compose(g, f)] {
                return Err(HoError::Inconsistent(format!("loc not functorial at {}", cat.mor_name(f))));
            }
        }
        if c.weq[f] {
            let inv = h.inverse[f].ok_or_else(|| HoError::Inconsistent("missing inverse".into()))?;
            let l = h.loc.mor[f];
            if h.cat.compose(inv, l) != h.cat.id(cat.src(f)) || h.cat.compose(l, inv) != h.cat.id(cat.tgt(f)) {
                return Err(HoError::Inconsistent(format!("{} not inverted", cat.mor_name(f))));
            }
        }
    }
    for x in 0..cat.n_obj() {
        if h.loc.mor[cat.id(x)] != h.cat.id(x) {
            return Err(HoError::Inconsistent("identity".into()));
        }
    }
    Ok(())
}

struct Uf(Vec<usize>);
impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Classes of fractions X -> Y.
struct HomClasses {
    fractions: Vec<(Mor, Mor)>,
    class_of: Vec<usize>,
    reps: Vec<Vec<usize>>,
    closure_added: usize,
}

fn fraction_classes(ctx: &HomotopyCtx, x: Obj, y: Obj) -> HomClasses {
    let c = ctx.c;
    let cat = &c.cat;
    let mut fractions = Vec::new();
    for t in 0..cat.n_obj() {
        for &s in cat.hom(y, t) {
            if !c.weq[s] {
                continue;
            }
            for &f in cat.hom(x, t) {
                fractions.push((f, s));
            }
        }
    }
    let related = |(f, s): (Mor, Mor), (g, t): (Mor, Mor)| -> bool {
        let (a, b) = (cat.tgt(s), cat.tgt(t));
        for w in 0..cat.n_obj() {
            for &u in cat.hom(a, w) {
                if !c.weq[u] {
                    continue;
                }
                for &v in cat.hom(b, w) {
                    if c.weq[v]
                        && ctx.left_homotopic(cat.compose(u, s), cat.compose(v, t))
                        && ctx.left_homotopic(cat.compose(u, f), cat.compose(v, g))
                    {
                        return true;
                    }
                }
            }
        }
        false
    };
    let n = fractions.len();
    let mut direct = vec![vec![false; n]; n];
    let mut uf = Uf::new(n);
    for i in 0..n {
        direct[i][i] = true;
        for j in (i + 1)..n {
            if related(fractions[i], fractions[j]) || related(fractions[j], fractions[i]) {
                direct[i][j] = true;
                direct[j][i] = true;
                uf.union(i, j);
            }
        }
    }
    let mut closure_added = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if !direct[i][j] && uf.find(i) == uf.find(j) {
                closure_added += 1;
            }
        }
    }
    let mut root_class = HashMap::new();
    let mut class_of = vec![0; n];
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = uf.find(i);
        let k = *root_class.entry(r).or_insert_with(|| {
            reps.push(Vec::new());
            reps.len() - 1
        });
        class_of[i] = k;
        reps[k].push(i);
    }
    HomClasses { fractions, class_of, reps, closure_added }
}

/// Ho C by the calculus of left fractions up to left homotopy.
pub fn homotopy_category(c: &CofCategory) -> Result<HoCategory, HoError> {
    let ctx = HomotopyCtx::new(c)?;
    let cat = &c.cat;
    let n = cat.n_obj();
    let pairs: Vec<(Obj, Obj)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let homs: Vec<HomClasses> = par::map(&pairs, |&(x, y)| fraction_classes(&ctx, x, y));
    let hom = |x: Obj, y: Obj| &homs[x * n + y];
    // global numbering
    let mut offset = vec![0; n * n];
    let mut total = 0;
    for (i, h) in homs.iter().enumerate() {
        offset[i] = total;
        total += h.reps.len();
    }
    let frac_index: Vec<HashMap<(Mor, Mor), usize>> =
        homs.iter().map(|h| h.fractions.iter().enumerate().map(|(i, &fr)| (fr, i)).collect()).collect();
    let class_of_fraction = |x: Obj, y: Obj, fr: (Mor, Mor)| -> Option<Mor> {
        let i = *frac_index[x * n + y].get(&fr)?;
        Some(offset[x * n + y] + hom(x, y).class_of[i])
    };
    // composite of fractions (f, s): X -> Y and (g, t): Y -> Z
    let compose_fr = |(f, s): (Mor, Mor), (g, t): (Mor, Mor)| -> Option<(Mor, Mor)> {
        let (tt, uu) = (cat.tgt(s), cat.tgt(t));
        for v in 0..n {
            for &u in cat.hom(uu, v) {
                if !c.weq[u] {
                    continue;
                }
                let ug = cat.compose(u, g);
                for &h in cat.hom(tt, v) {
                    if ctx.left_homotopic(cat.compose(h, s), ug) {
                        return Some((cat.compose(h, f), cat.compose(u, t)));
                    }
                }
            }
        }
        None
    };
    let mut mors = Vec::with_capacity(total);
    let mut words = Vec::with_capacity(total);
    for x in 0..n {
        for y in 0..n {
            let h = hom(x, y);
            for r in &h.reps {
                let (f, s) = h.fractions[r[0]];
                let name = if cat.is_identity(s) {
                    format!("[{}]", cat.mor_name(f))
                } else {
                    format!("[{}]^-1[{}]", cat.mor_name(s), cat.mor_name(f))
                };
                mors.push((name, x, y));
                words.push(if cat.is_identity(s) { vec![Letter::Fwd(f)] } else { vec![Letter::Fwd(f), Letter::Inv(s)] });
            }
        }
    }
    let triples: Vec<(Obj, Obj, Obj)> =
        (0..n).flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z)))).collect();
    let tables: Vec<Result<Vec<((usize, usize), Mor)>, HoError>> = par::map(&triples, |&(x, y, z)| {
        let (h1, h2) = (hom(x, y), hom(y, z));
        let mut out = Vec::new();
        for (a, ra) in h1.reps.iter().enumerate() {
            for (b, rb) in h2.reps.iter().enumerate() {
                let mut result = None;
                let checks = ra.iter().map(|&i| (i, rb[0])).chain(rb.iter().skip(1).map(|&j| (ra[0], j)));
                for (i, j) in checks {
                    let fr = compose_fr(h1.fractions[i], h2.fractions[j]).ok_or_else(|| {
                        HoError::CompositionSearchFailed(format!(
                            "{} -> {} -> {}",
                            cat.obj_name(x),
                            cat.obj_name(y),
                            cat.obj_name(z)
                        ))
                    })?;
                    let cl = class_of_fraction(x, z, fr).ok_or_else(|| HoError::Inconsistent("fraction lookup".into()))?;
                    match result {
                        None => result = Some(cl),
                        Some(r) if r != cl => {
                            return Err(HoError::Inconsistent(format!(
                                "composition not well defined at {} -> {} -> {}",
                                cat.obj_name(x),
                                cat.obj_name(y),
                                cat.obj_name(z)
                            )))
                        }
                        _ => {}
                    }
                }
                out.push(((offset[x * n + y] + a, offset[y * n + z] + b), result.unwrap()));
            }
        }
        Ok(out)
    });
    let mut table = HashMap::new();
    for t in tables {
        for (k, v) in t? {
            table.insert(k, v);
        }
    }
    let identity: Vec<Mor> = (0..n).map(|x| class_of_fraction(x, x, (cat.id(x), cat.id(x))).unwrap()).collect();
    let names = cat.obj_names().to_vec();
    let ho = FinCategory::from_parts(names, mors, identity, |g, f| table[&(f, g)]);
    let loc = Functor {
        obj: (0..n).collect(),
        mor: (0..cat.n_mor()).map(|f| class_of_fraction(cat.src(f), cat.tgt(f), (f, cat.id(cat.tgt(f)))).unwrap()).collect(),
    };
    let inverse = (0..cat.n_mor())
        .map(|w| {
            if c.weq[w] {
                class_of_fraction(cat.tgt(w), cat.src(w), (cat.id(cat.tgt(w)), w))
            } else {
                None
            }
        })
        .collect();
    let closure_added = homs.iter().map(|h| h.closure_added).sum();
    let out = HoCategory { cat: ho, loc, inverse, words, closure_added };
    if !out.cat.check_laws().is_empty() {
        return Err(HoError::Inconsistent("composition laws".into()));
    }
    check_localization(c, &out)?;
    Ok(out)
}

/// Coset table for hom(X, -) in the free category on C and formal inverses.
struct CosetTable<'a> {
    gens: &'a [Letter],
    obj: Vec<Obj>,
    parent: Vec<usize>,
    act: Vec<Vec<Option<usize>>>,
    word: Vec<Vec<Letter>>,
    live: usize,
}

impl<'a> CosetTable<'a> {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }

    fn define(&mut self, e: usize, g: usize, tgt: Obj) -> usize {
        let n = self.obj.len();
        self.obj.push(tgt);
        self.parent.push(n);
        self.act.push(vec![None; self.gens.len()]);
        let mut w = self.word[e].clone();
        w.push(self.gens[g]);
        self.word.push(w);
        self.act[e][g] = Some(n);
        self.live += 1;
        n
    }

    fn follow(&mut self, e: usize, g: usize, tgt: Obj) -> usize {
        match self.act[e][g] {
            Some(d) => self.find(d),
            None => self.define(e, g, tgt),
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            self.live -= 1;
            for g in 0..self.gens.len() {
                if let Some(d) = self.act[drop][g] {
                    match self.act[keep][g] {
                        Some(k) => queue.push((k, d)),
                        None => self.act[keep][g] = Some(d),
                    }
                }
            }
        }
    }
}

/// Localization by enumerating cosets of the presentation: generators are
/// the nonidentity morphisms and formal inverses of nonidentity weqs,
/// relations are composition, identities and w w' = id = w' w.
/// `bound` caps the number of simultaneously live cosets per source.
pub fn oracle_localization(cat: &FinCategory, weq: &[bool], bound: Option<usize>) -> Result<HoCategory, HoError> {
    let bound = bound.unwrap_or(2 * cat.n_mor());
    let n = cat.n_obj();
    let mut gens = Vec::new();
    for f in 0..cat.n_mor() {
        if !cat.is_identity(f) {
            gens.push(Letter::Fwd(f));
        }
    }
    for w in 0..cat.n_mor() {
        if weq[w] && !cat.is_identity(w) {
            gens.push(Letter::Inv(w));
        }
    }
    let gsrc = |l: Letter| match l {
        Letter::Fwd(f) => cat.src(f),
        Letter::Inv(w) => cat.tgt(w),
    };
    let gtgt = |l: Letter| match l {
        Letter::Fwd(f) => cat.tgt(f),
        Letter::Inv(w) => cat.src(w),
    };
    let gix: HashMap<Letter, usize> = gens.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let gens_at: Vec<Vec<usize>> = (0..n).map(|y| (0..gens.len()).filter(|&g| gsrc(gens[g]) == y).collect()).collect();
    let mut rels: Vec<Vec<(Vec<usize>, Vec<usize>)>> = vec![Vec::new(); n];
    for f in 0..cat.n_mor() {
        if cat.is_identity(f) {
            continue;
        }
        for &g in cat.out_of(cat.tgt(f)) {
            if cat.is_identity(g) {
                continue;
            }
            let gf = cat.compose(g, f);
            let rhs = if cat.is_identity(gf) { vec![] } else { vec![gix[&Letter::Fwd(gf)]] };
            rels[cat.src(f)].push((vec![gix[&Letter::Fwd(f)], gix[&Letter::Fwd(g)]], rhs));
        }
        if weq[f] {
            let (a, b) = (gix[&Letter::Fwd(f)], gix[&Letter::Inv(f)]);
            rels[cat.src(f)].push((vec![a, b], vec![]));
            rels[cat.tgt(f)].push((vec![b, a], vec![]));
        }
    }
    let sources: Vec<Obj> = (0..n).collect();
    let tables = par::map(&sources, |&x| -> Result<(Vec<usize>, CosetTable), HoError> {
        let mut t = CosetTable {
            gens: &gens,
            obj: vec![x],
            parent: vec![0],
            act: vec![vec![None; gens.len()]],
            word: vec![vec![]],
            live: 1,
        };
        let mut i = 0;
        while i < t.obj.len() {
            if t.find(i) == i {
                let y = t.obj[i];
                for (lhs, rhs) in &rels[y] {
                    let mut ends = [0usize; 2];
                    for (k, w) in [lhs, rhs].into_iter().enumerate() {
                        let mut e = t.find(i);
                        for &g in w {
                            e = t.follow(e, g, gtgt(gens[g]));
                            e = t.find(e);
                        }
                        ends[k] = e;
                    }
                    t.merge(ends[0], ends[1]);
                    if t.find(i) != i {
                        break;
                    }
                }
                if t.find(i) == i {
                    for &g in &gens_at[y] {
                        t.follow(i, g, gtgt(gens[g]));
                    }
                }
                if t.live > bound {
                    return Err(HoError::BoundTooSmall { bound, source_obj: cat.obj_name(x).to_string() });
                }
            }
            i += 1;
        }
        let alive: Vec<usize> = (0..t.obj.len()).filter(|&e| t.parent[e] == e).collect();
        Ok((alive, t))
    });
    let mut tables = tables.into_iter().collect::<Result<Vec<_>, _>>()?;
    // number the cosets by (source, target, index)
    let mut index: HashMap<(Obj, usize), Mor> = HashMap::new();
    let mut mors = Vec::new();
    let mut words = Vec::new();
    for x in 0..n {
        let (alive, t) = &tables[x];
        for y in 0..n {
            for &e in alive.iter().filter(|&&e| t.obj[e] == y) {
                index.insert((x, e), mors.len());
                let w = &t.word[e];
                let name = if w.is_empty() {
                    format!("id:{}", cat.obj_name(x))
                } else {
                    w.iter()
                        .map(|l| match *l {
                            Letter::Fwd(f) => cat.mor_name(f).to_string(),
                            Letter::Inv(w) => format!("{}^-1", cat.mor_name(w)),
                        })
                        .collect::<Vec<_>>()
                        .join(";")
                };
                mors.push((name, x, y));
                words.push(w.clone());
            }
        }
    }
    let src_of: Vec<(Obj, usize)> = {
        let mut v = vec![(0, 0); mors.len()];
        for (&k, &m) in &index {
            v[m] = k;
        }
        v
    };
    let mut trace = |x: Obj, start: usize, w: &[Letter]| -> usize {
        let t = &mut tables[x].1;
        let mut e = t.find(start);
        for l in w {
            let d = t.act[e][gix[l]].expect("complete table");
            e = t.find(d);
        }
        e
    };
    let nm = mors.len();
    let mut comp = HashMap::new();
    for f in 0..nm {
        let (x, e) = src_of[f];
        for g in 0..nm {
            if src_of[g].0 != mors[f].2 {
                continue;
            }
            let r = trace(x, e, &words[g].clone());
            comp.insert((g, f), index[&(x, r)]);
        }
    }
    let identity: Vec<Mor> = (0..n).map(|x| index[&(x, 0)]).collect();
    let loc_mor: Vec<Mor> = (0..cat.n_mor())
        .map(|f| {
            let x = cat.src(f);
            if cat.is_identity(f) {
                identity[x]
            } else {
                index[&(x, trace(x, 0, &[Letter::Fwd(f)]))]
            }
        })
        .collect();
    let inverse: Vec<Option<Mor>> = (0..cat.n_mor())
        .map(|w| {
            if !weq[w] {
                None
            } else if cat.is_identity(w) {
                Some(identity[cat.src(w)])
            } else {
                let y = cat.tgt(w);
                Some(index[&(y, trace(y, 0, &[Letter::Inv(w)]))])
            }
        })
        .collect();
    let ho = FinCategory::from_parts(cat.obj_names().to_vec(), mors, identity, |g, f| comp[&(g, f)]);
    Ok(HoCategory { cat: ho, loc: Functor { obj: (0..n).collect(), mor: loc_mor }, inverse, words, closure_added: 0 })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComparisonReport {
    pub isomorphic: bool,
    pub hom_sizes_a: Vec<usize>,
    pub hom_sizes_b: Vec<usize>,
    pub witness: Option<String>,
}

/// Whether the identity-on-objects comparison `a -> b` sending each word to
/// its value in `b` is an isomorphism compatible with the localizations.
pub fn compare(a: &HoCategory, b: &HoCategory) -> ComparisonReport {
    let mut r = ComparisonReport { isomorphic: false, hom_sizes_a: a.hom_sizes(), hom_sizes_b: b.hom_sizes(), witness: None };
    if a.cat.n_obj() != b.cat.n_obj() {
        r.witness = Some("object counts differ".into());
        return r;
    }
    let phi: Option<Vec<Mor>> = a.words.iter().zip(0..).map(|(w, m)| {
        if w.is_empty() {
            Some(b.cat.id(a.cat.src(m)))
        } else {
            b.eval(w)
        }
    }).collect();
    let Some(phi) = phi else {
        r.witness = Some("a word does not evaluate".into());
        return r;
    };
    let n = a.cat.n_obj();
    for x in 0..n {
        for y in 0..n {
            let mut img: Vec<Mor> = a.cat.hom(x, y).iter().map(|&m| phi[m]).collect();
            img.sort();
            img.dedup();
            if img.len() != a.cat.hom(x, y).len() || img.len() != b.cat.hom(x, y).len() {
                r.witness = Some(format!("hom({}, {}) not in bijection", a.cat.obj_name(x), a.cat.obj_name(y)));
                return r;
            }
        }
    }
    for f in 0..a.cat.n_mor() {
        for &g in a.cat.out_of(a.cat.tgt(f)) {
            if phi[a.cat.compose(g, f)] != b.cat.compose(phi[g], phi[f]) {
                r.witness = Some(format!("composition of {} and {}", a.cat.mor_name(f), a.cat.mor_name(g)));
                return r;
            }
        }
    }
    if a.loc.mor.iter().zip(&b.loc.mor).any(|(&x, &y)| phi[x] != y) {
        r.witness = Some("localization functors disagree".into());
        return r;
    }
    r.isomorphic = true;
    r
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WeqFunctorReport {
    pub essentially_surjective: bool,
    pub full: bool,
    pub faithful: bool,
    pub equivalence: bool,
    pub app1: bool,
    pub app2: bool,
}

impl WeqFunctorReport {
    pub fn agrees(&self) -> bool {
        self.equivalence == (self.app1 && self.app2)
    }
}

/// F reflects weak equivalences.
pub fn app1(f: &Functor, c: &CofCategory, d: &CofCategory) -> bool {
    (0..c.cat.n_mor()).all(|m| !d.weq[f.mor[m]] || c.weq[m])
}

/// Every g: FA -> Y completes to a square with some F(i) and weqs into Z.
pub fn app2(f: &Functor, c: &CofCategory, d: &CofCategory) -> bool {
    let (cc, dc) = (&c.cat, &d.cat);
    (0..cc.n_obj()).all(|a| {
        dc.out_of(f.obj[a]).iter().all(|&g| {
            cc.out_of(a).iter().any(|&i| {
                (0..dc.n_obj()).any(|z| {
                    dc.hom(f.obj[cc.tgt(i)], z).iter().any(|&w1| {
                        d.weq[w1]
                            && dc
                                .hom(dc.tgt(g), z)
                                .iter()
                                .any(|&w2| d.weq[w2] && dc.compose(w1, f.mor[i]) == dc.compose(w2, g))
                    })
                })
            })
        })
    })
}

/// Ho F on the word representatives.
pub fn ho_functor(f: &Functor, hc: &HoCategory, hd: &HoCategory) -> Option<Functor> {
    let mor = (0..hc.cat.n_mor())
        .map(|m| {
            let w: Vec<Letter> = hc.words[m]
                .iter()
                .map(|l| match *l {
                    Letter::Fwd(g) => Letter::Fwd(f.mor[g]),
                    Letter::Inv(g) => Letter::Inv(f.mor[g]),
                })
                .collect();
            if w.is_empty() {
                Some(hd.cat.id(f.obj[hc.cat.src(m)]))
            } else {
                hd.eval(&w)
            }
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Functor { obj: f.obj.clone(), mor })
}

pub fn is_weq_functor(f: &Functor, c: &CofCategory, d: &CofCategory, hc: &HoCategory, hd: &HoCategory) -> WeqFunctorReport {
    let mut r = WeqFunctorReport {
        essentially_surjective: false,
        full: false,
        faithful: false,
        equivalence: false,
        app1: app1(f, c, d),
        app2: app2(f, c, d),
    };
    let Some(hf) = ho_functor(f, hc, hd) else { return r };
    let n = hc.cat.n_obj();
    r.essentially_surjective = (0..hd.cat.n_obj())
        .all(|y| (0..n).any(|x| hd.cat.hom(f.obj[x], y).iter().any(|&m| hd.cat.is_iso(m))));
    r.full = true;
    r.faithful = true;
    for x in 0..n {
        for y in 0..n {
            let mut img: Vec<Mor> = hc.cat.hom(x, y).iter().map(|&m| hf.mor[m]).collect();
            img.sort();
            img.dedup();
            if img.len() != hc.cat.hom(x, y).len() {
                r.faithful = false;
            }
            if img.len() != hd.cat.hom(f.obj[x], f.obj[y]).len() {
                r.full = false;
            }
        }
    }
    r.equivalence = r.essentially_surjective && r.full && r.faithful;
    r
}

/// Given i: A >-> B, f: A -> X and g: B -> X with g i left homotopic to f,
/// finds a weq s: X -> X' and g': B -> X' with g' i = s f and g' homotopic to s g.
pub fn hep_transport(c: &CofCategory, i: Mor, f: Mor, g: Mor) -> Result<(Mor, Mor), HoError> {
    let cat = &c.cat;
    let ctx = HomotopyCtx::new(c)?;
    if !c.cof[i] {
        return Err(HoError::Precondition(format!("{} is not a cofibration", cat.mor_name(i))));
    }
    let gi = cat.try_compose(g, i).ok_or_else(|| HoError::Precondition("g i undefined".into()))?;
    if cat.src(f) != cat.src(i) || cat.tgt(f) != cat.tgt(g) || !ctx.left_homotopic(gi, f) {
        return Err(HoError::Precondition("g i is not left homotopic to f".into()));
    }
    let (b, x) = (cat.tgt(i), cat.tgt(f));
    for &s in cat.out_of(x) {
        if !c.weq[s] {
            continue;
        }
        let (sf, sg) = (cat.compose(s, f), cat.compose(s, g));
        for &gt in cat.hom(b, cat.tgt(s)) {
            if cat.compose(gt, i) == sf && ctx.left_homotopic(gt, sg) {
                return Ok((s, gt));
            }
        }
    }
    Err(HoError::SearchFailed(format!(
        "no weq out of {} with a compatible extension along {}",
        cat.obj_name(x),
        cat.mor_name(i)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::two_out_of_six_closure;

    fn lattice(atoms: &[&str], all: bool) -> CofCategory {
        CofCategory::with_all_cof(FinCategory::subset_lattice(atoms), all)
    }

    fn chain_w12() -> CofCategory {
        let cat = FinCategory::chain(2);
        let gen: Vec<bool> = (0..cat.n_mor()).map(|f| cat.src(f) == 1 && cat.tgt(f) == 2).collect();
        let weq = two_out_of_six_closure(&cat, &gen);
        let n = cat.n_mor();
        CofCategory { cat, weq, cof: vec![true; n] }
    }

    #[test]
    fn lattice_all_weq_is_indiscrete() {
        let c = lattice(&["a", "b"], true);
        let h = homotopy_category(&c).unwrap();
        assert_eq!(h.cat.n_mor(), 16);
        let o = oracle_localization(&c.cat, &c.weq, None).unwrap();
        assert_eq!(o.cat.n_mor(), 16);
        assert!(compare(&h, &o).isomorphic);
        assert!(compare(&o, &h).isomorphic);
    }

    #[test]
    fn chain_identifies_one_and_two() {
        let c = chain_w12();
        let h = homotopy_category(&c).unwrap();
        assert_eq!(h.hom_sizes(), vec![1, 1, 1, 0, 1, 1, 0, 1, 1]);
        let o = oracle_localization(&c.cat, &c.weq, Some(20)).unwrap();
        assert!(compare(&h, &o).isomorphic);
    }

    #[test]
    fn identities_only() {
        let c = lattice(&["a", "b"], false);
        let h = homotopy_category(&c).unwrap();
        assert_eq!(h.cat.n_mor(), c.cat.n_mor());
        for x in 0..4 {
            assert_eq!(enumerate_cylinders(&c, x).unwrap().len(), 1);
        }
        let o = oracle_localization(&c.cat, &c.weq, None).unwrap();
        assert!(compare(&h, &o).isomorphic);
    }

    #[test]
    fn weq_functor_examples() {
        let small = lattice(&["a"], true);
        let big = lattice(&["a", "b"], true);
        let inc = Functor { obj: vec![0, 1], mor: vec![big.cat.id(0), big.cat.arrow(0, 1).unwrap(), big.cat.id(1)] };
        let inc = {
            let mor = (0..small.cat.n_mor()).map(|m| big.cat.arrow(small.cat.src(m), small.cat.tgt(m)).unwrap()).collect();
            Functor { obj: inc.obj, mor }
        };
        let (hs, hb) = (homotopy_category(&small).unwrap(), homotopy_category(&big).unwrap());
        let r = is_weq_functor(&inc, &small, &big, &hs, &hb);
        assert!(r.equivalence && r.agrees());
        let (s2, b2) = (lattice(&["a"], false), lattice(&["a", "b"], false));
        let (hs, hb) = (homotopy_category(&s2).unwrap(), homotopy_category(&b2).unwrap());
        let r = is_weq_functor(&inc, &s2, &b2, &hs, &hb);
        assert!(!r.essentially_surjective && r.agrees());
    }

    #[test]
    fn hep_examples() {
        let c = lattice(&["a", "b"], true);
        let i = c.cat.arrow(0, 1).unwrap();
        let f = c.cat.arrow(0, 3).unwrap();
        let g = c.cat.arrow(1, 3).unwrap();
        let (s, gt) = hep_transport(&c, i, f, g).unwrap();
        assert!(c.weq[s]);
        assert_eq!(c.cat.compose(gt, i), c.cat.compose(s, f));
        let d = lattice(&["a", "b"], false);
        assert!(hep_transport(&d, i, c.cat.id(0), g).is_err());
    }
}
