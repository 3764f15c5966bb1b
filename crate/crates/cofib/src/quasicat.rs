//! Bounded-dimension quasicategory checks: inner horn lifting, homotopy
//! categories, equivalences, special horns and universal cones.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{FinCategory, Functor};
use crate::simplicial::{
    all_maps, first_map, for_each_map, inclusion_by_names, partial_from, slice_under, FinSimplicialSet, Op, SMap,
    Simplex, SsetError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcError {
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error("two fillers give non-homotopic composites of {0} and {1}")]
    CompositionAmbiguous(String, String),
    #[error("no composite for {0} and {1}")]
    NoComposite(String, String),
    #[error("horn is not special")]
    NotSpecial,
    #[error("no filler up to cap {0}")]
    NoFillerAtCap(usize),
    #[error("cap {0} too small, need at least {1}")]
    CapTooSmall(usize, usize),
}

/// Outcome of an exhaustive lifting check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LiftingReport {
    pub holds: bool,
    pub problems: usize,
    /// Every solved problem had exactly one lift.
    pub unique: bool,
    pub counterexample: Option<String>,
}

/// Lifts of `u: a -> dom` along `a -> b` over `v: b -> cod`.
fn lifts(
    b: &FinSimplicialSet,
    inc: &SMap,
    dom: &FinSimplicialSet,
    cod: &FinSimplicialSet,
    p: &SMap,
    u: &SMap,
    v: &SMap,
    limit: usize,
) -> Result<usize, SsetError> {
    let partial = partial_from(inc, b, u);
    let mut count = 0;
    for_each_map(b, dom, &partial, |w| {
        let ok = (0..b.n_cells()).all(|c| p.map(cod, &w[c]) == v.images[c]);
        if ok {
            count += 1;
        }
        count < limit
    })?;
    Ok(count)
}

/// Exhaustive check of lifting against `a -> b` for `p: dom -> cod`.
pub fn check_lifting(
    a: &FinSimplicialSet,
    b: &FinSimplicialSet,
    dom: &FinSimplicialSet,
    cod: &FinSimplicialSet,
    p: &SMap,
    label: &str,
) -> Result<LiftingReport, SsetError> {
    let inc = inclusion_by_names(a, b).expect("a is a named subcomplex of b");
    let mut report = LiftingReport { holds: true, problems: 0, unique: true, counterexample: None };
    for u in all_maps(a, dom, &vec![None; a.n_cells()])? {
        let pu = SMap { images: u.images.iter().map(|x| p.map(cod, x)).collect() };
        let partial = partial_from(&inc, b, &pu);
        for v in all_maps(b, cod, &partial)? {
            report.problems += 1;
            let n = lifts(b, &inc, dom, cod, p, &u, &v, 2)?;
            if n == 0 {
                report.holds = false;
                report.counterexample = Some(format!("{}: {:?}", label, describe(dom, &u)));
                return Ok(report);
            }
            if n > 1 {
                report.unique = false;
            }
        }
    }
    Ok(report)
}

fn describe(k: &FinSimplicialSet, m: &SMap) -> Vec<String> {
    m.images.iter().map(|x| format!("{}{}", k.cell(x.cell).name, if x.is_degenerate() { format!("@{}", x.epi.word()) } else { String::new() })).collect()
}

/// Inner horn lifting through dimension `cap`.
pub fn check_inner_fibration(
    dom: &FinSimplicialSet,
    cod: &FinSimplicialSet,
    p: &SMap,
    cap: usize,
) -> Result<LiftingReport, SsetError> {
    dom.check_cap(cap)?;
    let mut total = LiftingReport { holds: true, problems: 0, unique: true, counterexample: None };
    for d in 2..=cap {
        for i in 1..d {
            let horn = FinSimplicialSet::horn(d, &[i])?;
            let simplex = FinSimplicialSet::standard(d);
            let r = check_lifting(&horn, &simplex, dom, cod, p, &format!("horn({},{})", d, i))?;
            total.problems += r.problems;
            total.unique &= r.unique;
            if !r.holds {
                total.holds = false;
                total.counterexample = r.counterexample;
                return Ok(total);
            }
        }
    }
    Ok(total)
}

/// The unique map to the point.
pub fn to_point(q: &FinSimplicialSet) -> (FinSimplicialSet, SMap) {
    let pt = FinSimplicialSet::standard(0);
    let images = q.cells().iter().map(|c| Simplex { cell: 0, epi: Op::constant(c.dim, 0, 0) }).collect();
    (pt, SMap { images })
}

pub fn is_quasicategory(q: &FinSimplicialSet, cap: usize) -> Result<LiftingReport, SsetError> {
    let (pt, p) = to_point(q);
    check_inner_fibration(q, &pt, &p, cap)
}

/// Lifting against the vertex inclusion into a truncated NE(1).
pub fn check_isofibration_clause(
    dom: &FinSimplicialSet,
    cod: &FinSimplicialSet,
    p: &SMap,
    cap: usize,
) -> Result<LiftingReport, SsetError> {
    let e1 = FinSimplicialSet::nerve(&FinCategory::free_iso(), cap);
    let inc = SMap { images: vec![Simplex::nd(e1.cell_by_name("0").unwrap(), 0)] };
    let mut report = LiftingReport { holds: true, problems: 0, unique: true, counterexample: None };
    for &x in dom.vertices() {
        let u = SMap { images: vec![Simplex::nd(x, 0)] };
        let pu = SMap { images: vec![p.map(cod, &u.images[0])] };
        for v in all_maps(&e1, cod, &partial_from(&inc, &e1, &pu))? {
            report.problems += 1;
            if lifts(&e1, &inc, dom, cod, p, &u, &v, 1)? == 0 {
                report.holds = false;
                report.counterexample = Some(format!("vertex {}", dom.cell(x).name));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Homotopy category of a (truncated) quasicategory.
#[derive(Clone, Debug)]
pub struct QHo {
    pub cat: FinCategory,
    /// Class morphism of every 1-simplex, keyed by the simplex.
    pub class_of: HashMap<Simplex, usize>,
    /// The homotopy relation needed closing under symmetry or transitivity.
    pub closure_added: bool,
}

fn find(parent: &mut Vec<usize>, x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// Objects are vertices; morphisms are edges modulo the relation given by
/// 2-simplices with d0 degenerate; composition by filling inner 2-horns.
/// Independence of the filler is checked over every filler and representative.
pub fn homotopy_category(q: &FinSimplicialSet) -> Result<QHo, QcError> {
    if let Some(c) = q.cap() {
        if c < 2 {
            return Err(QcError::CapTooSmall(c, 2));
        }
    }
    let edges = q.simplices(1)?;
    let eix: HashMap<Simplex, usize> = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let ends: Vec<(usize, usize)> = edges.iter().map(|e| (q.face(e, 1).cell, q.face(e, 0).cell)).collect();
    let tris = q.simplices(2)?;
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    let mut related = std::collections::HashSet::new();
    for h in &tris {
        let d0 = q.face(h, 0);
        if d0.is_degenerate() {
            let f = eix[&q.face(h, 2)];
            let g = eix[&q.face(h, 1)];
            related.insert((f, g));
            let (a, b) = (find(&mut parent, f), find(&mut parent, g));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut closure_added = false;
    for f in 0..edges.len() {
        for g in 0..edges.len() {
            if ends[f] == ends[g] && find(&mut parent, f) == find(&mut parent, g) && !related.contains(&(f, g)) {
                closure_added = true;
            }
        }
    }
    let roots: Vec<usize> = (0..edges.len()).filter(|&e| find(&mut parent, e) == e).collect();
    let class_ix: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let cls: Vec<usize> = (0..edges.len()).map(|e| class_ix[&find(&mut parent, e)]).collect();
    // composition table from every filler
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for h in &tris {
        let f = cls[eix[&q.face(h, 2)]];
        let g = cls[eix[&q.face(h, 0)]];
        let gf = cls[eix[&q.face(h, 1)]];
        if let Some(&old) = table.get(&(g, f)) {
            if old != gf {
                return Err(QcError::CompositionAmbiguous(
                    describe_edge(q, &edges[roots[f]]),
                    describe_edge(q, &edges[roots[g]]),
                ));
            }
        } else {
            table.insert((g, f), gf);
        }
    }
    let vix: HashMap<usize, usize> = q.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut mors = Vec::new();
    for &r in &roots {
        mors.push((describe_edge(q, &edges[r]), vix[&ends[r].0], vix[&ends[r].1]));
    }
    for f in 0..roots.len() {
        for g in 0..roots.len() {
            if mors[f].2 == mors[g].1 && !table.contains_key(&(g, f)) {
                return Err(QcError::NoComposite(mors[f].0.clone(), mors[g].0.clone()));
            }
        }
    }
    let identity: Vec<usize> = q.vertices().iter().map(|&v| cls[eix[&q.degen(&Simplex::nd(v, 0), 0)]]).collect();
    let names = q.vertices().iter().map(|&v| q.cell(v).name.clone()).collect();
    let cat = FinCategory::from_parts(names, mors, identity, |g, f| table[&(g, f)]);
    let class_of = edges.iter().cloned().zip(cls).collect();
    Ok(QHo { cat, class_of, closure_added })
}

fn describe_edge(q: &FinSimplicialSet, e: &Simplex) -> String {
    if e.is_degenerate() {
        format!("id:{}", q.cell(e.cell).name)
    } else {
        q.cell(e.cell).name.clone()
    }
}

/// True iff the class of `f` is invertible.
pub fn is_equivalence_edge(ho: &QHo, f: &Simplex) -> bool {
    ho.cat.is_iso(ho.class_of[f])
}

/// A filler for a special outer horn (`which` is 0 or m) in `q`, or an error.
pub fn fill_special_horn(q: &FinSimplicialSet, ho: &QHo, m: usize, which: usize, u: &SMap) -> Result<SMap, QcError> {
    let horn = FinSimplicialSet::horn(m, &[which])?;
    let simplex = FinSimplicialSet::standard(m);
    let edge_name = if which == 0 { "01".to_string() } else { format!("{}{}", m - 1, m) };
    let e = horn.cell_by_name(&edge_name).expect("special edge in horn");
    if !is_equivalence_edge(ho, &u.images[e]) {
        return Err(QcError::NotSpecial);
    }
    let inc = inclusion_by_names(&horn, &simplex).unwrap();
    first_map(&simplex, q, &partial_from(&inc, &simplex, u))?.ok_or(QcError::NoFillerAtCap(q.cap().unwrap_or(m)))
}

/// Result of a bounded universal-cone check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UniversalReport {
    pub universal: bool,
    /// The same verdict obtained as initiality in the slice.
    pub via_slice: bool,
    pub cap: usize,
    pub failing_dim: Option<usize>,
}

/// Every K * bd(Delta^m) -> Q restricting to `s` on K * {0} extends over
/// K * Delta^m, for 0 < m <= cap.
pub fn universal_by_extension(k: &FinSimplicialSet, q: &FinSimplicialSet, s: &SMap, cap: usize) -> Result<Option<usize>, SsetError> {
    let cone = FinSimplicialSet::join(k, &FinSimplicialSet::standard(0));
    for m in 1..=cap {
        let jb = FinSimplicialSet::join(k, &FinSimplicialSet::boundary(m));
        let js = FinSimplicialSet::join(k, &FinSimplicialSet::standard(m));
        let cone_in = inclusion_by_names(&cone, &jb).expect("cone in boundary join");
        let bd_in = inclusion_by_names(&jb, &js).expect("boundary join in simplex join");
        let mut failed = false;
        let mut err = None;
        for_each_map(&jb, q, &partial_from(&cone_in, &jb, s), |u| {
            let um = SMap { images: u.to_vec() };
            match first_map(&js, q, &partial_from(&bd_in, &js, &um)) {
                Ok(Some(_)) => true,
                Ok(None) => {
                    failed = true;
                    false
                }
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if failed {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Bounded universal-cone test with the slice cross-check.
pub fn is_universal_cone(k: &FinSimplicialSet, q: &FinSimplicialSet, s: &SMap, cap: usize) -> Result<UniversalReport, QcError> {
    let failing_dim = universal_by_extension(k, q, s, cap)?;
    let universal = failing_dim.is_none();
    // initiality of the vertex s in the slice under s|K
    let x = SMap { images: s.images[..k.n_cells()].to_vec() };
    let slice = slice_under(k, q, &x, cap)?;
    let v = slice
        .cell_maps
        .iter()
        .position(|y| y.images == s.images)
        .expect("the cone is a vertex of the slice");
    let empty = FinSimplicialSet::empty();
    let vs = SMap { images: vec![Simplex::nd(v, 0)] };
    let via_slice = universal_by_extension(&empty, &slice.sset, &vs, cap)?.is_none();
    Ok(UniversalReport { universal, via_slice, cap, failing_dim })
}

/// Vertex `v` is initial up to `cap`.
pub fn is_initial_vertex(q: &FinSimplicialSet, v: usize, cap: usize) -> Result<bool, SsetError> {
    let empty = FinSimplicialSet::empty();
    let s = SMap { images: vec![Simplex::nd(v, 0)] };
    Ok(universal_by_extension(&empty, q, &s, cap)?.is_none())
}

/// Functor induced on homotopy categories by a simplicial map.
pub fn ho_functor(dom: &FinSimplicialSet, cod: &FinSimplicialSet, hd: &QHo, hc: &QHo, f: &SMap) -> Functor {
    let vix: HashMap<usize, usize> = cod.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let obj = dom.vertices().iter().map(|&v| vix[&f.images[v].cell]).collect();
    let mut mor = vec![usize::MAX; hd.cat.n_mor()];
    for (e, &c) in &hd.class_of {
        mor[c] = hc.class_of[&f.map(cod, e)];
    }
    Functor { obj, mor }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nerves_are_quasicategories_with_unique_fillers() {
        let c = FinCategory::subset_lattice(&["a", "b"]);
        let n = FinSimplicialSet::nerve(&c, 4);
        let r = is_quasicategory(&n, 3).unwrap();
        assert!(r.holds && r.unique && r.problems > 0);
    }

    #[test]
    fn boundary_of_triangle_is_not() {
        let b = FinSimplicialSet::boundary(2);
        let r = is_quasicategory(&b, 2).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn ho_of_e1_is_indiscrete() {
        let e = FinSimplicialSet::nerve(&FinCategory::free_iso(), 3);
        let ho = homotopy_category(&e).unwrap();
        assert_eq!((ho.cat.n_obj(), ho.cat.n_mor()), (2, 4));
        let gen = Simplex::nd(e.cells_of_dim(1)[0], 1);
        assert!(is_equivalence_edge(&ho, &gen));
    }

    #[test]
    fn ho_of_nerve_and_point() {
        let n1 = FinSimplicialSet::nerve(&FinCategory::chain(1), 3);
        let ho = homotopy_category(&n1).unwrap();
        assert_eq!(ho.cat.n_mor(), 3);
        assert!(!is_equivalence_edge(&ho, &Simplex::nd(n1.cells_of_dim(1)[0], 1)));
        let pt = FinSimplicialSet::standard(0);
        assert_eq!(homotopy_category(&pt).unwrap().cat.n_mor(), 1);
    }

    #[test]
    fn initial_vertices() {
        let n = FinSimplicialSet::nerve(&FinCategory::subset_lattice(&["a", "b"]), 4);
        assert!(is_initial_vertex(&n, 0, 3).unwrap());
        let n1 = FinSimplicialSet::nerve(&FinCategory::chain(1), 3);
        assert!(!is_initial_vertex(&n1, 1, 2).unwrap());
    }

    #[test]
    fn span_cone_in_lattice_is_universal() {
        let lat = FinCategory::subset_lattice(&["a", "b"]);
        let n = FinSimplicialSet::nerve(&lat, 4);
        let span = FinSimplicialSet::nerve(&FinCategory::span(), 2);
        let cone = FinSimplicialSet::join(&span, &FinSimplicialSet::standard(0));
        // span a <- 0 -> b (objects 0, 1, 2 of the span map to {}, {a}, {b}); apex {a,b}
        let vmap = |name: &str| -> usize {
            match name {
                "(a)*" => 0,
                "(b)*" => 1,
                "(c)*" => 2,
                _ => 3,
            }
        };
        let mut partial = vec![None; cone.n_cells()];
        for &v in cone.vertices() {
            partial[v] = Some(Simplex::nd(n.cell_by_name(lat.obj_name(vmap(&cone.cell(v).name))).unwrap(), 0));
        }
        let s = first_map(&cone, &n, &partial).unwrap().unwrap();
        let r = is_universal_cone(&span, &n, &s, 2).unwrap();
        assert!(r.universal && r.via_slice);
        // apex too high is not universal in a poset with a strictly smaller apex
        let bigger = FinCategory::subset_lattice(&["a", "b", "c"]);
        let nb = FinSimplicialSet::nerve(&bigger, 4);
        let mut partial = vec![None; cone.n_cells()];
        for &v in cone.vertices() {
            let o = match vmap(&cone.cell(v).name) {
                3 => 7,
                x => x,
            };
            partial[v] = Some(Simplex::nd(nb.cell_by_name(bigger.obj_name(o)).unwrap(), 0));
        }
        let s = first_map(&cone, &nb, &partial).unwrap().unwrap();
        let r = is_universal_cone(&span, &nb, &s, 2).unwrap();
        assert!(!r.universal && !r.via_slice);
    }

    #[test]
    fn special_horns() {
        let e = FinSimplicialSet::nerve(&FinCategory::free_iso(), 3);
        let ho = homotopy_category(&e).unwrap();
        let horn = FinSimplicialSet::horn(2, &[0]).unwrap();
        let gen = e.cells_of_dim(1)[0];
        let mut partial = vec![None; horn.n_cells()];
        partial[horn.cell_by_name("01").unwrap()] = Some(Simplex::nd(gen, 1));
        let u = first_map(&horn, &e, &partial).unwrap().unwrap();
        assert!(fill_special_horn(&e, &ho, 2, 0, &u).is_ok());
        let n1 = FinSimplicialSet::nerve(&FinCategory::chain(1), 3);
        let ho1 = homotopy_category(&n1).unwrap();
        let mut partial = vec![None; horn.n_cells()];
        partial[horn.cell_by_name("01").unwrap()] = Some(Simplex::nd(n1.cells_of_dim(1)[0], 1));
        let u = first_map(&horn, &n1, &partial).unwrap().unwrap();
        assert_eq!(fill_special_horn(&n1, &ho1, 2, 0, &u).unwrap_err(), QcError::NotSpecial);
    }
}
