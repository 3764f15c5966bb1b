//! The level-k truncated quasicategory of frames Nf^(k)(C): enumeration,
//! operator action, representation of diagrams, horn filling, colimit
//! criteria, the comparison Θ and weak equivalences of diagrams.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::cofcat::CofCategory;
use crate::dconstr::{transport, DError, FiltCategory, WeqPolicy};
use crate::fincat::{pushout, Functor, Mor, Obj};
use crate::hocat::{HoCategory, Letter};
use crate::quasicat::{self, QcError, QHo};
use crate::reedy::{self, DirectIndex, Partial, ReedyError};
use crate::simplicial::{
    first_map, inclusion_by_names, operator_map, pushout_sset, simplex_from_vertex_word, FinSimplicialSet, Op, SMap,
    Simplex, SsetError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error(transparent)]
    D(#[from] DError),
    #[error(transparent)]
    Reedy(#[from] ReedyError),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Qc(#[from] QcError),
    #[error("no filler at level {0}")]
    NoFillerAtBudget(usize),
    #[error("missing pushout: {0}")]
    MissingPushout(String),
    #[error("level {level} below the required {required}")]
    LevelTooLow { level: usize, required: usize },
    #[error("not a frame: {0}")]
    NotAFrame(String),
}

/// A homotopical Reedy cofibrant diagram on filt{k,[m]}. For thin targets
/// the morphism part is implicit and `mor` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Frame {
    pub m: usize,
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

/// The operator [n] -> [m] underlying an object of filt{k,[m]}.
pub fn object_op(f: &FiltCategory, o: Obj, m: usize) -> Op {
    Op::new(m, f.seq(o))
}

/// The object of filt{k,[m]} given by an operator into [m].
pub fn op_object(f: &FiltCategory, op: &Op) -> Option<Obj> {
    let vals: Vec<usize> = (0..=op.src_dim()).map(|i| op.at(i)).collect();
    f.obj_by_seq(&vals)
}

/// Nf^(k)(C) through dimension `cap`, as frames and as a simplicial set.
pub struct Nf {
    pub c: CofCategory,
    pub k: usize,
    pub cap: usize,
    pub levels: Vec<FiltCategory>,
    pub idx: Vec<DirectIndex>,
    pub frames: Vec<Vec<Frame>>,
    index: Vec<HashMap<Frame, usize>>,
    transports: HashMap<Op, Functor>,
    pub sset: FinSimplicialSet,
    /// The simplex of `sset` of each frame.
    pub simplex_of: Vec<Vec<Simplex>>,
    /// The frame (dimension, index) of each nondegenerate cell.
    pub cell_frame: Vec<(usize, usize)>,
    thin: bool,
}

fn standard_level(m: usize, k: usize) -> Result<FiltCategory, DError> {
    FiltCategory::build(&FinSimplicialSet::standard(m), k, &WeqPolicy::Generated)
}

/// All frames of dimension m at level k.
pub fn enumerate_simplices(c: &CofCategory, m: usize, k: usize, budget: usize) -> Result<Vec<Frame>, FrameError> {
    let f = standard_level(m, k)?;
    let idx = DirectIndex::from_filt(&f);
    enumerate_on(&idx, c, m, budget)
}

fn enumerate_on(idx: &DirectIndex, c: &CofCategory, m: usize, budget: usize) -> Result<Vec<Frame>, FrameError> {
    let thin = c.cat.is_thin();
    let mut out = Vec::new();
    let mut over = false;
    reedy::for_each_extension(idx, c, &Partial::empty(idx), true, |x| {
        if out.len() == budget {
            over = true;
            return false;
        }
        out.push(compress(thin, m, x));
        true
    })?;
    if over {
        return Err(ReedyError::Budget(budget).into());
    }
    Ok(out)
}

fn compress(thin: bool, m: usize, x: &Functor) -> Frame {
    Frame { m, obj: x.obj.clone(), mor: if thin { Vec::new() } else { x.mor.clone() } }
}

impl Nf {
    pub fn build(c: &CofCategory, k: usize, cap: usize, budget: usize) -> Result<Nf, FrameError> {
        let levels: Vec<FiltCategory> = (0..=cap).map(|m| standard_level(m, k)).collect::<Result<_, _>>()?;
        let idx: Vec<DirectIndex> = levels.iter().map(DirectIndex::from_filt).collect();
        let mut transports = HashMap::new();
        for n in 0..=cap {
            for m in 0..=cap {
                for op in Op::all_monotone(n, m) {
                    let t = transport(&operator_map(&op), &levels[n], &levels[m])?;
                    transports.insert(op, t);
                }
            }
        }
        let frames: Vec<Vec<Frame>> =
            (0..=cap).map(|m| enumerate_on(&idx[m], c, m, budget)).collect::<Result<_, _>>()?;
        let index: Vec<HashMap<Frame, usize>> =
            frames.iter().map(|fs| fs.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect()).collect();
        let mut nf = Nf {
            c: c.clone(),
            k,
            cap,
            levels,
            idx,
            frames,
            index,
            transports,
            sset: FinSimplicialSet::empty(),
            simplex_of: Vec::new(),
            cell_frame: Vec::new(),
            thin: c.cat.is_thin(),
        };
        nf.build_sset()?;
        Ok(nf)
    }

    fn build_sset(&mut self) -> Result<(), FrameError> {
        // Eilenberg-Zilber decomposition, dimension by dimension
        let mut ez: Vec<Vec<(usize, Op)>> = Vec::new();
        let mut cells = Vec::new();
        for n in 0..=self.cap {
            let mut row = Vec::with_capacity(self.frames[n].len());
            for i in 0..self.frames[n].len() {
                let f = &self.frames[n][i];
                let mut found = None;
                for j in 0..n {
                    let d = self.act(f, &Op::coface(n, j));
                    if self.act(&d, &Op::codegeneracy(n - 1, j)) == *f {
                        let di = self.lookup(&d)?;
                        let (cell, e1) = &ez[n - 1][di];
                        found = Some((*cell, e1.compose(&Op::codegeneracy(n - 1, j))));
                        break;
                    }
                }
                let entry = match found {
                    Some(e) => e,
                    None => {
                        let faces = if n == 0 {
                            Vec::new()
                        } else {
                            (0..=n)
                                .map(|t| {
                                    let d = self.act(f, &Op::coface(n, t));
                                    let di = self.lookup(&d)?;
                                    let (cell, e) = &ez[n - 1][di];
                                    Ok(Simplex { cell: *cell, epi: e.clone() })
                                })
                                .collect::<Result<Vec<_>, FrameError>>()?
                        };
                        cells.push(crate::simplicial::Cell { name: format!("f{}.{}", n, i), dim: n, faces });
                        self.cell_frame.push((n, i));
                        (cells.len() - 1, Op::id(n))
                    }
                };
                row.push(entry);
            }
            ez.push(row);
        }
        self.simplex_of =
            ez.into_iter().map(|row| row.into_iter().map(|(cell, epi)| Simplex { cell, epi }).collect()).collect();
        self.sset = FinSimplicialSet::from_cells(cells, Some(self.cap));
        Ok(())
    }

    pub fn is_thin(&self) -> bool {
        self.thin
    }

    fn lookup(&self, f: &Frame) -> Result<usize, FrameError> {
        self.index[f.m].get(f).copied().ok_or_else(|| FrameError::NotAFrame(format!("{:?}", f.obj)))
    }

    pub fn frame_index(&self, f: &Frame) -> Option<usize> {
        self.index.get(f.m)?.get(f).copied()
    }

    /// The morphism image of a frame.
    pub fn mor(&self, f: &Frame, m: Mor) -> Mor {
        if self.thin {
            let l = &self.levels[f.m].cat;
            self.c.cat.arrow(f.obj[l.src(m)], f.obj[l.tgt(m)]).expect("thin frame")
        } else {
            f.mor[m]
        }
    }

    pub fn functor(&self, f: &Frame) -> Functor {
        let n = self.levels[f.m].n_mor();
        Functor { obj: f.obj.clone(), mor: (0..n).map(|m| self.mor(f, m)).collect() }
    }

    /// chi^* of an m-frame for chi: [n] -> [m].
    pub fn act(&self, f: &Frame, chi: &Op) -> Frame {
        let t = &self.transports[chi];
        Frame {
            m: chi.src_dim(),
            obj: t.obj.iter().map(|&o| f.obj[o]).collect(),
            mor: if self.thin { Vec::new() } else { t.mor.iter().map(|&m| f.mor[m]).collect() },
        }
    }

    /// The frame of a simplex of the simplicial set.
    pub fn frame_of(&self, x: &Simplex) -> Frame {
        let (d, i) = self.cell_frame[x.cell];
        self.act(&self.frames[d][i], &x.epi)
    }

    pub fn simplex(&self, f: &Frame) -> Option<Simplex> {
        Some(self.simplex_of[f.m][self.frame_index(f)?].clone())
    }

    /// Value at the vertex i of a frame.
    pub fn vertex_value(&self, f: &Frame, i: usize) -> Obj {
        f.obj[self.levels[f.m].obj_by_seq(&[i]).expect("vertex object")]
    }

    /// Value at the nondegenerate simplex with the given vertices.
    pub fn value(&self, f: &Frame, vs: &[usize]) -> Obj {
        f.obj[self.levels[f.m].obj_by_seq(vs).expect("face object")]
    }

    fn arrow_between(&self, f: &Frame, a: &[usize], b: &[usize]) -> Mor {
        let l = &self.levels[f.m];
        let (x, y) = (l.obj_by_seq(a).unwrap(), l.obj_by_seq(b).unwrap());
        let pos: Vec<usize> = a.iter().map(|v| b.iter().position(|w| w == v).unwrap()).collect();
        let m = l.mor_of(x, y, &Op::new(b.len() - 1, pos)).expect("face morphism");
        self.mor(f, m)
    }
}

/// Edge frames whose diagram is homotopical for the marked interval: every
/// morphism goes to a weak equivalence.
pub fn is_equivalence_frame(nf: &Nf, f: &Frame) -> Result<bool, FrameError> {
    if f.m != 1 || nf.k < 1 {
        return Err(FrameError::LevelTooLow { level: nf.k, required: 1 });
    }
    Ok((0..nf.levels[1].n_mor()).all(|m| nf.c.weq[nf.mor(f, m)]))
}

/// 0 -> X_0 is a weak equivalence.
pub fn is_initial_frame(nf: &Nf, f: &Frame) -> Result<bool, FrameError> {
    let init = nf.c.initial().ok_or_else(|| FrameError::MissingPushout("no initial object".into()))?;
    let x0 = nf.vertex_value(f, 0);
    Ok(nf.c.weq[nf.c.cat.hom(init, x0)[0]])
}

/// A square as two triangles (00, 01, 11) and (00, 10, 11) with common
/// diagonal: the comparison X_{00,01} + X_{01,00} -> X_{001,011} + X_{011,001}
/// (pushouts over X_{0,0} and X_{01,01}) is a weak equivalence.
pub fn is_pushout_square(nf: &Nf, upper: &Frame, lower: &Frame) -> Result<bool, FrameError> {
    if nf.k < 2 {
        return Err(FrameError::LevelTooLow { level: nf.k, required: 2 });
    }
    if nf.act(upper, &Op::coface(2, 1)) != nf.act(lower, &Op::coface(2, 1)) {
        return Err(FrameError::NotAFrame("triangles do not share the diagonal".into()));
    }
    let cat = &nf.c.cat;
    let (a1, a2) = (nf.arrow_between(upper, &[0], &[0, 1]), nf.arrow_between(lower, &[0], &[0, 1]));
    let (p1, l1, l2) = pushout(cat, a1, a2).ok_or_else(|| FrameError::MissingPushout("edges over the corner".into()))?;
    let (b1, b2) = (nf.arrow_between(upper, &[0, 2], &[0, 1, 2]), nf.arrow_between(lower, &[0, 2], &[0, 1, 2]));
    let (p2, m1, m2) = pushout(cat, b1, b2).ok_or_else(|| FrameError::MissingPushout("triangles over the diagonal".into()))?;
    let u = cat.compose(m1, nf.arrow_between(upper, &[0, 1], &[0, 1, 2]));
    let v = cat.compose(m2, nf.arrow_between(lower, &[0, 1], &[0, 1, 2]));
    let t = cat
        .hom(p1, p2)
        .iter()
        .copied()
        .find(|&t| cat.compose(t, l1) == u && cat.compose(t, l2) == v)
        .ok_or_else(|| FrameError::MissingPushout("no comparison".into()))?;
    Ok(nf.c.weq[t])
}

/// The characteristic map of a cell.
pub fn characteristic_map(k: &FinSimplicialSet, cell: usize) -> SMap {
    let d = k.cell(cell).dim;
    let std = FinSimplicialSet::standard(d);
    let images = std
        .cells()
        .iter()
        .map(|c| {
            let vs: Vec<usize> = c.name.bytes().map(|b| (b - b'0') as usize).collect();
            k.apply(&Simplex::nd(cell, d), &Op::new(d, vs))
        })
        .collect();
    SMap { images }
}

/// The simplicial map K -> Nf represented by a diagram on filt{k,K}.
pub fn represent(nf: &Nf, k_set: &FinSimplicialSet, filt: &FiltCategory, x: &Functor) -> Result<SMap, FrameError> {
    let images = (0..k_set.n_cells())
        .map(|c| {
            let d = k_set.cell(c).dim;
            if d > nf.cap {
                return Err(FrameError::LevelTooLow { level: nf.cap, required: d });
            }
            let t = transport(&characteristic_map(k_set, c), &nf.levels[d], filt)?;
            let fx = x.after(&t);
            let fr = compress(nf.thin, d, &fx);
            nf.simplex(&fr).ok_or_else(|| FrameError::NotAFrame(k_set.cell(c).name.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SMap { images })
}

/// The diagram on filt{k,K} of a simplicial map K -> Nf.
pub fn diagram_of(nf: &Nf, k_set: &FinSimplicialSet, filt: &FiltCategory, map: &SMap) -> Result<Functor, FrameError> {
    let cell_frames: Vec<Frame> = map.images.iter().map(|s| nf.frame_of(s)).collect();
    let stds: Vec<FinSimplicialSet> = (0..=nf.cap).map(FinSimplicialSet::standard).collect();
    let locate = |y: &Simplex| -> Result<(usize, Obj), FrameError> {
        let d = k_set.cell(y.cell).dim;
        let vals: Vec<usize> = (0..=y.epi.src_dim()).map(|i| y.epi.at(i)).collect();
        let s = simplex_from_vertex_word(&stds[d], &vals).ok_or_else(|| FrameError::NotAFrame("simplex".into()))?;
        let o = nf.levels[d].obj_of(&s).ok_or_else(|| FrameError::NotAFrame("level".into()))?;
        Ok((d, o))
    };
    let mut obj = Vec::with_capacity(filt.n_obj());
    for y in &filt.objects {
        let (_, o) = locate(y)?;
        obj.push(cell_frames[y.cell].obj[o]);
    }
    let mut mor = Vec::with_capacity(filt.n_mor());
    for m in 0..filt.n_mor() {
        let y = &filt.objects[filt.cat.tgt(m)];
        let (d, oy) = locate(y)?;
        let phi = &filt.ops[m];
        let (_, ox) = locate(&Simplex { cell: y.cell, epi: y.epi.compose(phi) })?;
        let lm = nf.levels[d].mor_of(ox, oy, phi).ok_or_else(|| FrameError::NotAFrame("morphism".into()))?;
        mor.push(nf.mor(&cell_frames[y.cell], lm));
    }
    Ok(Functor { obj, mor })
}

/// Verdict of the Φ comparison for a cone.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConeVerdict {
    pub comparisons: Vec<Mor>,
    pub universal: bool,
}

/// The filtration data of a cone shape K * Δ^0 up to level `kmax`.
pub struct ConeShape {
    pub k_set: FinSimplicialSet,
    pub cone: FinSimplicialSet,
    pub kmax: usize,
    pub required: usize,
    pub filt: FiltCategory,
    idx: DirectIndex,
    sub: Vec<Functor>,
    whole: Vec<Functor>,
}

impl ConeShape {
    pub fn new(k_set: &FinSimplicialSet, kmax: usize) -> Result<ConeShape, FrameError> {
        let required = (k_set.dim() + 1).max(0) as usize;
        if kmax < required {
            return Err(FrameError::LevelTooLow { level: kmax, required });
        }
        let cone = FinSimplicialSet::join(k_set, &FinSimplicialSet::standard(0));
        let inc = SMap { images: (0..k_set.n_cells()).map(|i| Simplex::nd(i, k_set.cell(i).dim)).collect() };
        let policy = WeqPolicy::Generated;
        let filt = FiltCategory::build(&cone, kmax, &policy)?;
        let idx = DirectIndex::from_filt(&filt);
        let mut sub = Vec::new();
        let mut whole = Vec::new();
        for k in 0..=kmax {
            let lk = FiltCategory::build(&cone, k, &policy)?;
            whole.push(lk.inclusion_into(&filt).ok_or_else(|| FrameError::NotAFrame("levels".into()))?);
            let sk = FiltCategory::build(k_set, k, &policy)?;
            sub.push(transport(&inc, &sk, &filt)?);
        }
        Ok(ConeShape { k_set: k_set.clone(), cone, kmax, required, filt, idx, sub, whole })
    }

    /// A cone S (a diagram on filt{kmax, K * Δ^0}) is universal iff
    /// Φ^(k)(S|K) -> Φ^(k)(S) is a weak equivalence from level dim K + 1 on.
    pub fn verdict(&self, c: &CofCategory, x: &Functor) -> Result<ConeVerdict, FrameError> {
        let comparisons = reedy::phi_comparison(&self.idx, &self.sub, &self.whole, c, x)?;
        let universal = comparisons[self.required..].iter().all(|&t| c.weq[t]);
        Ok(ConeVerdict { comparisons, universal })
    }
}

pub fn is_universal_cone_frame(
    c: &CofCategory,
    k_set: &FinSimplicialSet,
    kmax: usize,
    x: &Functor,
) -> Result<ConeVerdict, FrameError> {
    ConeShape::new(k_set, kmax)?.verdict(c, x)
}

/// The span 1 <- 0 -> 2 as a simplicial set.
pub fn span_sset() -> FinSimplicialSet {
    FinSimplicialSet::from_vertex_sets(&[0, 1, 2], &[1, 2, 4, 3, 5])
}

/// The map K * Δ^0 -> Nf sending the top cells to the given simplices.
pub fn cone_map(nf: &Nf, k_set: &FinSimplicialSet, tops: &[(usize, Simplex)]) -> Result<Option<SMap>, FrameError> {
    let cone = FinSimplicialSet::join(k_set, &FinSimplicialSet::standard(0));
    let mut partial = vec![None; cone.n_cells()];
    for (c, s) in tops {
        partial[*c] = Some(s.clone());
    }
    Ok(first_map(&cone, &nf.sset, &partial)?)
}

/// The square of two triangles as a cone on the span, as a map and as a
/// diagram on the shape's filtration (whose level must be that of `nf`).
pub fn square_cone(nf: &Nf, shape: &ConeShape, upper: &Frame, lower: &Frame) -> Result<(SMap, Functor), FrameError> {
    let top_up = shape.cone.cell_by_name("(01)*(0)").expect("cone cell");
    let top_lo = shape.cone.cell_by_name("(02)*(0)").expect("cone cell");
    let su = nf.simplex(upper).ok_or_else(|| FrameError::NotAFrame("upper".into()))?;
    let sl = nf.simplex(lower).ok_or_else(|| FrameError::NotAFrame("lower".into()))?;
    let map = cone_map(nf, &shape.k_set, &[(top_up, su), (top_lo, sl)])?
        .ok_or_else(|| FrameError::NotAFrame("triangles do not form a cone".into()))?;
    let x = diagram_of(nf, &shape.cone, &shape.filt, &map)?;
    Ok((map, x))
}

/// The vertex as a cone on the empty simplicial set.
pub fn vertex_cone(nf: &Nf, shape: &ConeShape, v: &Frame) -> Result<(SMap, Functor), FrameError> {
    let s = nf.simplex(v).ok_or_else(|| FrameError::NotAFrame("vertex".into()))?;
    let map = SMap { images: vec![s] };
    let x = diagram_of(nf, &shape.cone, &shape.filt, &map)?;
    Ok((map, x))
}

/// Extends a horn problem on filt{k, Λ^{m,i}} to a frame on filt{k',[m]}.
pub fn fill_inner_horn(
    c: &CofCategory,
    m: usize,
    i: usize,
    k: usize,
    problem: &Functor,
    k_prime: usize,
) -> Result<Frame, FrameError> {
    if i == 0 || i >= m || k_prime < k {
        return Err(FrameError::NotAFrame(format!("horn ({}, {}) at levels {} <= {}", m, i, k, k_prime)));
    }
    let horn = FinSimplicialSet::horn(m, &[i])?;
    let std = FinSimplicialSet::standard(m);
    let inc = inclusion_by_names(&horn, &std).ok_or_else(|| FrameError::NotAFrame("horn inclusion".into()))?;
    let small = FiltCategory::build(&horn, k, &WeqPolicy::Generated)?;
    let big = standard_level(m, k_prime)?;
    let t = transport(&inc, &small, &big)?;
    let idx = DirectIndex::from_filt(&big);
    let mut start = Partial::empty(&idx);
    for o in 0..small.n_obj() {
        start.obj[t.obj[o]] = problem.obj[o];
    }
    for f in 0..small.n_mor() {
        start.mor[t.mor[f]] = problem.mor[f];
    }
    let mut found = None;
    reedy::for_each_extension(&idx, c, &start, true, |x| {
        found = Some(x.clone());
        false
    })?;
    let x = found.ok_or(FrameError::NoFillerAtBudget(k_prime))?;
    Ok(compress(c.cat.is_thin(), m, &x))
}

/// All horn problems Λ^{m,i} -> Nf^(k), as diagrams on filt{k, Λ^{m,i}}.
pub fn horn_problems(c: &CofCategory, m: usize, i: usize, k: usize, budget: usize) -> Result<Vec<Functor>, FrameError> {
    let horn = FinSimplicialSet::horn(m, &[i])?;
    let small = FiltCategory::build(&horn, k, &WeqPolicy::Generated)?;
    let idx = DirectIndex::from_filt(&small);
    Ok(reedy::enumerate_diagrams(&idx, c, budget)?)
}

/// Θ: Ho Nf^(k)(C) -> Ho C on vertices X -> X_0 and edges to [υ1]^-1[υ0].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ThetaReport {
    pub well_defined: bool,
    pub functorial: bool,
    pub essentially_surjective: bool,
    pub full: bool,
    pub faithful: bool,
    pub objects: (usize, usize),
    pub morphisms: (usize, usize),
}

impl ThetaReport {
    pub fn equivalence(&self) -> bool {
        self.well_defined && self.functorial && self.essentially_surjective && self.full && self.faithful
    }
}

pub fn theta(nf: &Nf, qho: &QHo, ho: &HoCategory) -> Result<(Functor, ThetaReport), FrameError> {
    let q = &nf.sset;
    let obj: Vec<Obj> = q.vertices().iter().map(|&v| nf.vertex_value(&nf.frame_of(&Simplex::nd(v, 0)), 0)).collect();
    let mut mor = vec![usize::MAX; qho.cat.n_mor()];
    let mut well_defined = true;
    for (e, &cls) in &qho.class_of {
        let f = nf.frame_of(e);
        let u0 = nf.arrow_between(&f, &[0], &[0, 1]);
        let u1 = nf.arrow_between(&f, &[1], &[0, 1]);
        let v = ho.eval(&[Letter::Fwd(u0), Letter::Inv(u1)]).ok_or_else(|| FrameError::NotAFrame("υ1 not a weq".into()))?;
        if mor[cls] == usize::MAX {
            mor[cls] = v;
        } else if mor[cls] != v {
            well_defined = false;
        }
    }
    let fun = Functor { obj, mor };
    let functorial = fun.validate(&qho.cat, &ho.cat).is_ok();
    let n = qho.cat.n_obj();
    let essentially_surjective =
        (0..ho.cat.n_obj()).all(|y| (0..n).any(|x| ho.cat.hom(fun.obj[x], y).iter().any(|&m| ho.cat.is_iso(m))));
    let (mut full, mut faithful) = (true, true);
    for a in 0..n {
        for b in 0..n {
            let mut img: Vec<Mor> = qho.cat.hom(a, b).iter().map(|&m| fun.mor[m]).collect();
            img.sort();
            img.dedup();
            faithful &= img.len() == qho.cat.hom(a, b).len();
            full &= img.len() == ho.cat.hom(fun.obj[a], fun.obj[b]).len();
        }
    }
    let report = ThetaReport {
        well_defined,
        functorial,
        essentially_surjective,
        full,
        faithful,
        objects: (qho.cat.n_obj(), ho.cat.n_obj()),
        morphisms: (qho.cat.n_mor(), ho.cat.n_mor()),
    };
    Ok((fun, report))
}

/// Homotopy category of the truncated quasicategory.
pub fn nf_homotopy_category(nf: &Nf) -> Result<QHo, FrameError> {
    Ok(quasicat::homotopy_category(&nf.sset)?)
}

/// Φ comparisons for the morphism (K, Y g) -> (L, Y) of diagrams given by
/// g: K -> L, at levels 0..=kmax.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DgrmWeqReport {
    pub comparisons: Vec<Mor>,
    pub stabilization: usize,
    pub weq: bool,
}

pub fn dgrm_weq(
    c: &CofCategory,
    k_set: &FinSimplicialSet,
    l_set: &FinSimplicialSet,
    g: &SMap,
    y: &Functor,
    kmax: usize,
) -> Result<DgrmWeqReport, FrameError> {
    let policy = WeqPolicy::Generated;
    let lk: Vec<FiltCategory> = (0..=kmax).map(|k| FiltCategory::build(l_set, k, &policy)).collect::<Result<_, _>>()?;
    let kk: Vec<FiltCategory> = (0..=kmax).map(|k| FiltCategory::build(k_set, k, &policy)).collect::<Result<_, _>>()?;
    let big_l = &lk[kmax];
    let t = transport(g, &kk[kmax], big_l)?;
    let x = y.after(&t);
    let (cones_k, _) = reedy::phi_sequence(&kk, c, &x)?;
    let (cones_l, _) = reedy::phi_sequence(&lk, c, y)?;
    let mut comparisons = Vec::new();
    for k in 0..=kmax {
        let inc_k = kk[k].inclusion_into(&kk[kmax]).unwrap();
        let inc_l = lk[k].inclusion_into(big_l).unwrap();
        let pos: HashMap<Obj, usize> = inc_l.obj.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let legs: Vec<Mor> = inc_k.obj.iter().map(|&o| cones_l[k].legs[pos[&t.obj[o]]]).collect();
        let cat = &c.cat;
        let m = cat
            .hom(cones_k[k].apex, cones_l[k].apex)
            .iter()
            .copied()
            .find(|&m| cones_k[k].legs.iter().zip(&legs).all(|(&a, &b)| cat.compose(m, a) == b))
            .ok_or_else(|| FrameError::NotAFrame("no comparison".into()))?;
        comparisons.push(m);
    }
    let mut s = comparisons.len();
    while s > 0 && c.weq[comparisons[s - 1]] {
        s -= 1;
    }
    let weq = c.weq[comparisons[kmax]];
    Ok(DgrmWeqReport { comparisons, stabilization: s, weq })
}

/// K >-> Mf -> L with Mf = K x Δ^1 glued to L along K x {1}.
pub struct MappingCylinder {
    pub mf: FinSimplicialSet,
    pub inc_k: SMap,
    pub inc_l: SMap,
    pub retraction: SMap,
}

pub fn mapping_cylinder(k_set: &FinSimplicialSet, l_set: &FinSimplicialSet, f: &SMap) -> Result<MappingCylinder, FrameError> {
    let i1 = FinSimplicialSet::standard(1);
    let prod = FinSimplicialSet::product(k_set, &i1);
    let (pk, _) = crate::simplicial::product_projections(k_set, &i1);
    let end = |v: &str| -> Result<SMap, FrameError> {
        let vc = i1.cell_by_name(v).expect("vertex");
        let images = (0..k_set.n_cells())
            .map(|c| {
                let d = k_set.cell(c).dim;
                prod.product_cell(k_set, &i1, &Simplex::nd(c, d), &Simplex { cell: vc, epi: Op::constant(d, 0, 0) })
                    .ok_or_else(|| FrameError::NotAFrame("product cell".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SMap { images })
    };
    let (e0, e1) = (end("0")?, end("1")?);
    let (mf, leg_l, leg_prod) = pushout_sset(k_set, &prod, l_set, &e1, f)?;
    let inc_k = leg_prod.after(&prod, &mf, &e0);
    // Mf -> L: identity on L, f . pr on the product cells
    let f_pr = f.after(k_set, l_set, &pk);
    let mut images = vec![None; mf.n_cells()];
    for c in 0..l_set.n_cells() {
        images[leg_l.images[c].cell] = Some(Simplex::nd(c, l_set.cell(c).dim));
    }
    for (c, s) in leg_prod.images.iter().enumerate() {
        if !s.is_degenerate() && images[s.cell].is_none() {
            images[s.cell] = Some(f_pr.images[c].clone());
        }
    }
    let retraction = SMap { images: images.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| FrameError::NotAFrame("retraction".into()))? };
    retraction.validate(&mf, l_set).map_err(FrameError::NotAFrame)?;
    inc_k.validate(k_set, &mf).map_err(FrameError::NotAFrame)?;
    Ok(MappingCylinder { mf, inc_k, inc_l: leg_l, retraction })
}

/// Ψ x on filt{k,[m]}: the simplex x φ of Q at each object φ.
pub fn psi_simplex(q: &FinSimplicialSet, x: &Simplex, filt: &FiltCategory) -> Vec<Simplex> {
    let m = x.dim();
    (0..filt.n_obj()).map(|o| q.apply(x, &object_op(filt, o, m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;

    fn lattice(atoms: &[&str], all: bool) -> CofCategory {
        CofCategory::with_all_cof(FinCategory::subset_lattice(atoms), all)
    }

    #[test]
    fn terminal_frames() {
        let t = lattice(&[], true);
        let nf = Nf::build(&t, 2, 3, 10).unwrap();
        for m in 0..=3 {
            assert_eq!(nf.frames[m].len(), 1);
        }
        assert_eq!(nf.sset.n_cells(), 1);
    }

    #[test]
    fn lattice_level_zero_and_one() {
        let c = lattice(&["a"], true);
        assert_eq!(enumerate_simplices(&c, 0, 0, 100).unwrap().len(), 2);
        let nf = Nf::build(&c, 1, 2, 100_000).unwrap();
        assert_eq!(nf.frames[0].len(), 4);
        // simplicial identities on 2-frames
        for f in &nf.frames[2] {
            for i in 0..2 {
                for j in (i + 1)..=2 {
                    let a = nf.act(&nf.act(f, &Op::coface(2, j)), &Op::coface(1, i));
                    let b = nf.act(&nf.act(f, &Op::coface(2, i)), &Op::coface(1, j - 1));
                    assert_eq!(a, b);
                }
            }
        }
        nf.sset.check().unwrap();
    }

    #[test]
    fn equivalence_frames() {
        let c = lattice(&["a"], false);
        let nf = Nf::build(&c, 1, 1, 1000).unwrap();
        for f in &nf.frames[1] {
            let e = is_equivalence_frame(&nf, f).unwrap();
            assert_eq!(e, nf.vertex_value(f, 0) == nf.value(f, &[0, 1]) && nf.vertex_value(f, 1) == nf.value(f, &[0, 1]));
        }
    }

    #[test]
    fn representation_round_trip() {
        let c = lattice(&["a"], true);
        let nf = Nf::build(&c, 1, 2, 100_000).unwrap();
        let k = FinSimplicialSet::from_vertex_sets(&[0, 1, 2], &[1, 2, 4, 3, 6]);
        let filt = FiltCategory::build(&k, 1, &WeqPolicy::Generated).unwrap();
        let idx = DirectIndex::from_filt(&filt);
        let all = reedy::enumerate_diagrams(&idx, &c, 1 << 20).unwrap();
        assert!(!all.is_empty());
        for x in &all {
            let m = represent(&nf, &k, &filt, x).unwrap();
            m.validate(&k, &nf.sset).unwrap();
            assert_eq!(&diagram_of(&nf, &k, &filt, &m).unwrap(), x);
        }
    }

    #[test]
    fn horn_filling_in_lattice() {
        let c = lattice(&["a"], true);
        for p in horn_problems(&c, 2, 1, 1, 100_000).unwrap() {
            fill_inner_horn(&c, 2, 1, 1, &p, 2).unwrap();
        }
    }

    #[test]
    fn mapping_cylinder_counts() {
        let k = FinSimplicialSet::standard(0);
        let l = FinSimplicialSet::standard(1);
        let f = SMap { images: vec![Simplex::nd(l.cell_by_name("0").unwrap(), 0)] };
        let mc = mapping_cylinder(&k, &l, &f).unwrap();
        let prod = FinSimplicialSet::product(&k, &FinSimplicialSet::standard(1));
        assert_eq!(mc.mf.n_cells(), prod.n_cells() - k.n_cells() + l.n_cells());
    }
}

#[cfg(test)]
mod criteria_tests {
    use super::*;
    use crate::fincat::FinCategory;

    #[test]
    fn squares_and_initial_vertices_agree() {
        let c = CofCategory::with_all_cof(FinCategory::subset_lattice(&["a"]), false);
        let nf = Nf::build(&c, 2, 2, 100_000).unwrap();
        let pt = ConeShape::new(&FinSimplicialSet::empty(), 2).unwrap();
        for v in &nf.frames[0] {
            let (_, x) = vertex_cone(&nf, &pt, v).unwrap();
            let by_phi = pt.verdict(&c, &x).unwrap().universal;
            let cell = nf.simplex(v).unwrap().cell;
            assert_eq!(is_initial_frame(&nf, v).unwrap(), by_phi);
            assert_eq!(quasicat::is_initial_vertex(&nf.sset, cell, 2).unwrap(), by_phi);
        }
        let nf = Nf::build(&c, 2, 4, 100_000).unwrap();
        assert_eq!(nf.frames[4].len(), 6);
        let shape = ConeShape::new(&span_sset(), 2).unwrap();
        let mut n = 0;
        for u in &nf.frames[2] {
            for l in &nf.frames[2] {
                if nf.act(u, &Op::coface(2, 1)) != nf.act(l, &Op::coface(2, 1)) {
                    continue;
                }
                let (map, x) = square_cone(&nf, &shape, u, l).unwrap();
                let by_phi = shape.verdict(&c, &x).unwrap().universal;
                assert_eq!(is_pushout_square(&nf, u, l).unwrap(), by_phi);
                let def = quasicat::is_universal_cone(&shape.k_set, &nf.sset, &map, 2).unwrap();
                assert_eq!(def.universal, by_phi);
                n += 1;
            }
        }
        assert!(n > 0);
    }
}
