//! Finite simplicial sets presented by nondegenerate cells, simplicial
//! operators, joins, products, horns, nerves, pushouts and map enumeration.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::FinCategory;

/// A monotone map [m] -> [n], stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Op {
    pub tgt: u8,
    pub vals: Vec<u8>,
}

impl Op {
    pub fn new(tgt: usize, vals: Vec<usize>) -> Self {
        debug_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(vals.iter().all(|&v| v <= tgt));
        Op { tgt: tgt as u8, vals: vals.into_iter().map(|v| v as u8).collect() }
    }

    pub fn id(n: usize) -> Self {
        Op::new(n, (0..=n).collect())
    }

    /// delta_i : [n-1] -> [n], skipping i.
    pub fn coface(n: usize, i: usize) -> Self {
        Op::new(n, (0..=n).filter(|&v| v != i).collect())
    }

    /// sigma_j : [n+1] -> [n], hitting j twice.
    pub fn codegeneracy(n: usize, j: usize) -> Self {
        Op::new(n, (0..=n + 1).map(|v| if v <= j { v } else { v - 1 }).collect())
    }

    /// The constant map [m] -> [n] at v.
    pub fn constant(m: usize, n: usize, v: usize) -> Self {
        Op::new(n, vec![v; m + 1])
    }

    pub fn src_dim(&self) -> usize {
        self.vals.len() - 1
    }
    pub fn tgt_dim(&self) -> usize {
        self.tgt as usize
    }
    pub fn at(&self, i: usize) -> usize {
        self.vals[i] as usize
    }
    pub fn last(&self) -> usize {
        *self.vals.last().unwrap() as usize
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &Op) -> Op {
        debug_assert_eq!(other.tgt_dim(), self.src_dim());
        Op { tgt: self.tgt, vals: other.vals.iter().map(|&v| self.vals[v as usize]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.src_dim() == self.tgt_dim() && self.vals.iter().enumerate().all(|(i, &v)| i == v as usize)
    }
    pub fn is_injective(&self) -> bool {
        self.vals.windows(2).all(|w| w[0] < w[1])
    }
    pub fn is_surjective(&self) -> bool {
        self.vals[0] == 0 && self.last() == self.tgt_dim() && self.vals.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// Positions i with vals[i] == vals[i+1].
    pub fn collapsed(&self) -> Vec<usize> {
        (0..self.src_dim()).filter(|&i| self.vals[i] == self.vals[i + 1]).collect()
    }

    /// Values not hit.
    pub fn missing(&self) -> Vec<usize> {
        (0..=self.tgt_dim()).filter(|v| !self.vals.contains(&(*v as u8))).collect()
    }

    /// The epi [m] -> [m - |collapsed|] collapsing exactly the given positions.
    pub fn epi_from_collapsed(m: usize, collapsed: &[usize]) -> Op {
        let mut vals = Vec::with_capacity(m + 1);
        let mut v = 0;
        for i in 0..=m {
            if i > 0 && !collapsed.contains(&(i - 1)) {
                v += 1;
            }
            vals.push(v);
        }
        Op::new(v, vals)
    }

    /// The mono with the given image.
    pub fn mono_from_image(n: usize, image: &[usize]) -> Op {
        Op::new(n, image.to_vec())
    }

    /// Epi-mono factorization: `self = mono . epi`.
    pub fn factor(&self) -> (Op, Op) {
        let mut image: Vec<u8> = self.vals.clone();
        image.dedup();
        let mut vals = Vec::with_capacity(self.vals.len());
        let mut k = 0u8;
        for i in 0..self.vals.len() {
            if i > 0 && self.vals[i] != self.vals[i - 1] {
                k += 1;
            }
            vals.push(k);
        }
        let epi = Op { tgt: (image.len() - 1) as u8, vals };
        let mono = Op { tgt: self.tgt, vals: image };
        (epi, mono)
    }

    /// Every monotone map [m] -> [n].
    pub fn all_monotone(m: usize, n: usize) -> Vec<Op> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(m + 1);
        fn go(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Op>) {
            if cur.len() == m + 1 {
                out.push(Op::new(n, cur.clone()));
                return;
            }
            for v in lo..=n {
                cur.push(v);
                go(m, n, v, cur, out);
                cur.pop();
            }
        }
        go(m, n, 0, &mut cur, &mut out);
        out
    }

    /// Every injective monotone map [m] -> [n].
    pub fn all_injective(m: usize, n: usize) -> Vec<Op> {
        Op::all_monotone(m, n).into_iter().filter(|o| o.is_injective()).collect()
    }

    /// Every surjective monotone map [m] -> [n].
    pub fn all_surjective(m: usize, n: usize) -> Vec<Op> {
        if n > m {
            return Vec::new();
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize == m - n {
                let coll: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                out.push(Op::epi_from_collapsed(m, &coll));
            }
        }
        out.sort();
        out
    }

    /// Values written as a digit string, e.g. "0011".
    pub fn word(&self) -> String {
        seq_word(&self.vals)
    }
}

pub fn seq_word(vals: &[u8]) -> String {
    if vals.iter().all(|&v| v < 10) {
        vals.iter().map(|v| char::from(b'0' + v)).collect()
    } else {
        vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// A simplex x = x# . x-flat: a nondegenerate cell and a degeneracy operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex {
    pub cell: usize,
    pub epi: Op,
}

impl Simplex {
    pub fn nd(cell: usize, dim: usize) -> Self {
        Simplex { cell, epi: Op::id(dim) }
    }
    pub fn dim(&self) -> usize {
        self.epi.src_dim()
    }
    pub fn is_degenerate(&self) -> bool {
        !self.epi.is_identity()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub dim: usize,
    /// `faces[i]` is d_i of the cell, of dimension `dim - 1`.
    pub faces: Vec<Simplex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsetError {
    #[error("dimension {0} exceeds cap {1}")]
    CapExceeded(usize, usize),
    #[error("horn would be empty")]
    EmptyHorn,
    #[error("complement of {0:?} is an interval")]
    NotInner(Vec<usize>),
    #[error("attaching map is not injective")]
    NonMonoAttach,
    #[error("malformed simplicial set: {0}")]
    Malformed(String),
}

type FaceIndex = HashMap<Vec<Simplex>, Vec<Simplex>>;

/// A finite simplicial set given by its nondegenerate cells.
///
/// `cap = None` means every nondegenerate cell is listed; `Some(c)` means the
/// listing is complete only through dimension c.
#[derive(Debug)]
pub struct FinSimplicialSet {
    cells: Vec<Cell>,
    by_dim: Vec<Vec<usize>>,
    names: HashMap<String, usize>,
    cap: Option<usize>,
    face_cache: Mutex<HashMap<usize, Arc<FaceIndex>>>,
}

impl Clone for FinSimplicialSet {
    fn clone(&self) -> Self {
        FinSimplicialSet::from_cells(self.cells.clone(), self.cap)
    }
}

impl FinSimplicialSet {
    pub fn from_cells(cells: Vec<Cell>, cap: Option<usize>) -> Self {
        let top = cells.iter().map(|c| c.dim + 1).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        let mut names = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(i);
            names.insert(c.name.clone(), i);
        }
        FinSimplicialSet { cells, by_dim, names, cap, face_cache: Mutex::new(HashMap::new()) }
    }

    pub fn empty() -> Self {
        FinSimplicialSet::from_cells(Vec::new(), None)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
    pub fn cell(&self, c: usize) -> &Cell {
        &self.cells[c]
    }
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }
    pub fn cap(&self) -> Option<usize> {
        self.cap
    }
    pub fn cell_by_name(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }
    pub fn cells_of_dim(&self, d: usize) -> &[usize] {
        self.by_dim.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }
    /// Highest dimension of a nondegenerate cell, or -1 for the empty set.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }
    pub fn vertices(&self) -> &[usize] {
        self.cells_of_dim(0)
    }

    pub fn check_cap(&self, d: usize) -> Result<(), SsetError> {
        match self.cap {
            Some(c) if d > c => Err(SsetError::CapExceeded(d, c)),
            _ => Ok(()),
        }
    }

    /// x . theta
    pub fn apply(&self, x: &Simplex, theta: &Op) -> Simplex {
        let composite = x.epi.compose(theta);
        let (eps, mu) = composite.factor();
        let face = self.face_along(x.cell, &mu);
        Simplex { cell: face.cell, epi: face.epi.compose(&eps) }
    }

    /// The simplex c . mu for a mono mu into the cell's dimension.
    fn face_along(&self, c: usize, mu: &Op) -> Simplex {
        if mu.is_identity() {
            return Simplex::nd(c, self.cells[c].dim);
        }
        let j = *mu.missing().last().unwrap();
        let rest = Op::new(
            mu.tgt_dim() - 1,
            mu.vals.iter().map(|&v| if (v as usize) < j { v as usize } else { v as usize - 1 }).collect(),
        );
        self.apply(&self.cells[c].faces[j], &rest)
    }

    pub fn face(&self, x: &Simplex, i: usize) -> Simplex {
        if !x.is_degenerate() && x.dim() > 0 {
            return self.cells[x.cell].faces[i].clone();
        }
        self.apply(x, &Op::coface(x.dim(), i))
    }

    pub fn degen(&self, x: &Simplex, j: usize) -> Simplex {
        self.apply(x, &Op::codegeneracy(x.dim(), j))
    }

    /// Vertex cells of a simplex, in order.
    pub fn vertex_seq(&self, x: &Simplex) -> Vec<usize> {
        let vs = self.cell_vertices(x.cell);
        (0..=x.dim()).map(|p| vs[x.epi.at(p)]).collect()
    }

    fn cell_vertices(&self, c: usize) -> Vec<usize> {
        let cell = &self.cells[c];
        if cell.dim == 0 {
            return vec![c];
        }
        let mut vs = self.vertex_seq(&cell.faces[cell.dim]);
        vs.push(*self.vertex_seq(&cell.faces[0]).last().unwrap());
        vs
    }

    /// Vertex cells of every nondegenerate cell, indexed by cell.
    pub fn all_cell_vertices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.cells.len()];
        let of = |out: &Vec<Vec<usize>>, x: &Simplex| -> Vec<usize> {
            (0..=x.dim()).map(|p| out[x.cell][x.epi.at(p)]).collect()
        };
        for cells in &self.by_dim {
            for &c in cells {
                let cell = &self.cells[c];
                out[c] = if cell.dim == 0 {
                    vec![c]
                } else {
                    // d_dim keeps vertices 0..dim-1, d_0 keeps the last one
                    let mut vs = of(&out, &cell.faces[cell.dim]);
                    vs.push(*of(&out, &cell.faces[0]).last().unwrap());
                    vs
                };
            }
        }
        out
    }

    /// Every simplex of dimension d, in canonical order.
    pub fn simplices(&self, d: usize) -> Result<Vec<Simplex>, SsetError> {
        self.check_cap(d)?;
        let mut out = Vec::new();
        for e in 0..=d.min(self.by_dim.len().saturating_sub(1)) {
            let epis = Op::all_surjective(d, e);
            for &c in self.cells_of_dim(e) {
                for ep in &epis {
                    out.push(Simplex { cell: c, epi: ep.clone() });
                }
            }
        }
        Ok(out)
    }

    fn face_index(&self, d: usize) -> Result<Arc<FaceIndex>, SsetError> {
        if let Some(ix) = self.face_cache.lock().unwrap().get(&d) {
            return Ok(ix.clone());
        }
        let mut ix: FaceIndex = HashMap::new();
        for s in self.simplices(d)? {
            let key = (0..=d).map(|i| self.face(&s, i)).collect();
            ix.entry(key).or_default().push(s);
        }
        let ix = Arc::new(ix);
        self.face_cache.lock().unwrap().insert(d, ix.clone());
        Ok(ix)
    }

    /// Simplices of dimension d >= 1 with the given faces.
    pub fn with_faces(&self, faces: &[Simplex]) -> Result<Vec<Simplex>, SsetError> {
        let d = faces.len() - 1;
        Ok(self.face_index(d)?.get(faces).cloned().unwrap_or_default())
    }

    /// Checks face shapes and the identity d_i d_j = d_{j-1} d_i (i < j).
    pub fn check(&self) -> Result<(), SsetError> {
        for (ci, c) in self.cells.iter().enumerate() {
            if c.dim == 0 {
                if !c.faces.is_empty() {
                    return Err(SsetError::Malformed(format!("vertex {} has faces", c.name)));
                }
                continue;
            }
            if c.faces.len() != c.dim + 1 {
                return Err(SsetError::Malformed(format!("cell {} has wrong face count", c.name)));
            }
            for f in &c.faces {
                if f.dim() != c.dim - 1 || !f.epi.is_surjective() || f.epi.tgt_dim() != self.cells[f.cell].dim {
                    return Err(SsetError::Malformed(format!("cell {} has a bad face", c.name)));
                }
            }
            if c.dim < 2 {
                continue;
            }
            let x = Simplex::nd(ci, c.dim);
            for j in 0..=c.dim {
                for i in 0..j {
                    let a = self.face(&self.face(&x, j), i);
                    let b = self.face(&self.face(&x, i), j - 1);
                    if a != b {
                        return Err(SsetError::Malformed(format!("simplicial identity fails on {}", c.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks d_i s_j relations on every simplex up to dimension `d`.
    pub fn check_degeneracies(&self, d: usize) -> Result<(), SsetError> {
        for n in 0..=d {
            for x in self.simplices(n)? {
                for j in 0..=n {
                    let y = self.degen(&x, j);
                    for i in 0..=n + 1 {
                        let lhs = self.face(&y, i);
                        let ok = if i == j || i == j + 1 {
                            lhs == x
                        } else if i < j {
                            lhs == self.degen(&self.face(&x, i), j - 1)
                        } else {
                            lhs == self.degen(&self.face(&x, i - 1), j)
                        };
                        if !ok {
                            return Err(SsetError::Malformed(format!("d{} s{} fails", i, j)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    // ---- constructions ----

    /// Subcomplex of a simplex on `n_vertices` given by a downward closed
    /// family of vertex masks; cells are named by their vertex labels.
    pub fn from_vertex_sets(labels: &[usize], sets: &[u32]) -> Self {
        let mut sets: Vec<u32> = sets.iter().copied().filter(|&s| s != 0).collect();
        sets.sort_by_key(|&s| (s.count_ones(), mask_members(s)));
        sets.dedup();
        let ix: HashMap<u32, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let cells = sets
            .iter()
            .map(|&s| {
                let vs = mask_members(s);
                let dim = vs.len() - 1;
                let faces = if dim == 0 {
                    Vec::new()
                } else {
                    vs.iter().map(|&v| Simplex::nd(ix[&(s & !(1 << v))], dim - 1)).collect()
                };
                let names: Vec<u8> = vs.iter().map(|&v| labels[v] as u8).collect();
                Cell { name: seq_word(&names), dim, faces }
            })
            .collect();
        FinSimplicialSet::from_cells(cells, None)
    }

    pub fn standard(n: usize) -> Self {
        FinSimplicialSet::standard_labeled(&(0..=n).collect::<Vec<_>>())
    }

    /// The standard simplex whose vertices carry the given labels.
    pub fn standard_labeled(labels: &[usize]) -> Self {
        let n = labels.len();
        let sets: Vec<u32> = (1..(1u32 << n)).collect();
        FinSimplicialSet::from_vertex_sets(labels, &sets)
    }

    pub fn boundary(n: usize) -> Self {
        let full = (1u32 << (n + 1)) - 1;
        let sets: Vec<u32> = (1..full).collect();
        FinSimplicialSet::from_vertex_sets(&(0..=n).collect::<Vec<_>>(), &sets)
    }

    /// The generalized horn on vertex set [m] omitting faces opposite `a`.
    pub fn horn(m: usize, a: &[usize]) -> Result<Self, SsetError> {
        FinSimplicialSet::horn_labeled(&(0..=m).collect::<Vec<_>>(), a.iter().map(|&i| 1u32 << i).fold(0, |x, y| x | y))
    }

    /// Generalized horn of the labeled simplex; `a` is a mask of positions.
    pub fn horn_labeled(labels: &[usize], a: u32) -> Result<Self, SsetError> {
        let full = (1u32 << labels.len()) - 1;
        let comp = full & !a;
        if comp == 0 {
            return Err(SsetError::EmptyHorn);
        }
        let sets: Vec<u32> = (1..=full).filter(|&s| s & comp != comp).collect();
        Ok(FinSimplicialSet::from_vertex_sets(labels, &sets))
    }

    /// Nerve of a finite category through dimension `cap`; the cap is dropped
    /// when there are no nondegenerate simplices above it.
    pub fn nerve(c: &FinCategory, cap: usize) -> Self {
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut cells = Vec::new();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for x in 0..c.n_obj() {
            index.insert(vec![x], cells.len());
            chains.push(vec![x]);
            cells.push(Cell { name: c.obj_name(x).to_string(), dim: 0, faces: Vec::new() });
        }
        // chains of non-identity morphisms are stored as [obj, f1, ..., fm]
        let mut layer: Vec<Vec<usize>> = (0..c.n_obj()).map(|x| vec![x]).collect();
        let mut complete = true;
        for m in 1..=cap + 1 {
            let mut next = Vec::new();
            for ch in &layer {
                let end = if ch.len() == 1 { ch[0] } else { c.tgt(*ch.last().unwrap()) };
                for &f in c.out_of(end) {
                    if !c.is_identity(f) {
                        let mut n = ch.clone();
                        if n.len() == 1 {
                            n = vec![usize::MAX];
                        }
                        n.push(f);
                        next.push(n);
                    }
                }
            }
            if m == cap + 1 {
                complete = next.is_empty();
                break;
            }
            for ch in &next {
                let mors = &ch[1..];
                let faces = (0..=m)
                    .map(|i| {
                        let mut face: Vec<usize> = Vec::new();
                        let mut objs = vec![c.src(mors[0])];
                        for &f in mors {
                            objs.push(c.tgt(f));
                        }
                        // face i drops vertex i
                        if i == 0 {
                            face.extend_from_slice(&mors[1..]);
                        } else if i == m {
                            face.extend_from_slice(&mors[..m - 1]);
                        } else {
                            face.extend_from_slice(&mors[..i - 1]);
                            face.push(c.compose(mors[i], mors[i - 1]));
                            face.extend_from_slice(&mors[i + 1..]);
                        }
                        let start = if i == 0 { objs[1] } else { objs[0] };
                        nerve_simplex(c, &index, start, &face)
                    })
                    .collect();
                index.insert(ch.clone(), cells.len());
                let name = mors.iter().map(|&f| c.mor_name(f)).collect::<Vec<_>>().join(";");
                cells.push(Cell { name, dim: m, faces });
                chains.push(ch.clone());
            }
            layer = next;
            if layer.is_empty() {
                break;
            }
        }
        FinSimplicialSet::from_cells(cells, if complete { None } else { Some(cap) })
    }

    /// The join K * L.
    pub fn join(k: &FinSimplicialSet, l: &FinSimplicialSet) -> Self {
        let nk = k.n_cells();
        let nl = l.n_cells();
        let mut cells: Vec<Cell> = Vec::with_capacity(nk + nl + nk * nl);
        let pair = |a: usize, b: usize| nk + nl + a * nl + b;
        for c in &k.cells {
            cells.push(Cell { name: format!("({})*", c.name), dim: c.dim, faces: c.faces.clone() });
        }
        for c in &l.cells {
            let faces = c.faces.iter().map(|f| Simplex { cell: f.cell + nk, epi: f.epi.clone() }).collect();
            cells.push(Cell { name: format!("*({})", c.name), dim: c.dim, faces });
        }
        for (a, ca) in k.cells.iter().enumerate() {
            for (b, cb) in l.cells.iter().enumerate() {
                let (p, q) = (ca.dim, cb.dim);
                let mut faces = Vec::with_capacity(p + q + 2);
                for t in 0..=p {
                    if p == 0 {
                        faces.push(Simplex::nd(nk + b, q));
                    } else {
                        let f = &ca.faces[t];
                        faces.push(Simplex { cell: pair(f.cell, b), epi: concat_epi(&f.epi, &Op::id(q)) });
                    }
                }
                for t in 0..=q {
                    if q == 0 {
                        faces.push(Simplex::nd(a, p));
                    } else {
                        let f = &cb.faces[t];
                        faces.push(Simplex { cell: pair(a, f.cell), epi: concat_epi(&Op::id(p), &f.epi) });
                    }
                }
                cells.push(Cell { name: format!("({})*({})", ca.name, cb.name), dim: p + q + 1, faces });
            }
        }
        let cap = match (k.cap, l.cap) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(usize::MAX / 4).min(b.unwrap_or(usize::MAX / 4)) + 1),
        };
        // join cells are ordered by construction, not by dimension; that is fine for lookups
        FinSimplicialSet::from_cells(cells, cap)
    }

    /// The product K x L (nondegenerate pairs of simplices).
    pub fn product(k: &FinSimplicialSet, l: &FinSimplicialSet) -> Self {
        let keys = product_keys(k, l);
        let index: HashMap<ProductKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let cells = keys
            .iter()
            .map(|(a, ea, b, eb)| {
                let n = ea.src_dim();
                let faces = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|t| {
                            let x = k.face(&Simplex { cell: *a, epi: ea.clone() }, t);
                            let y = l.face(&Simplex { cell: *b, epi: eb.clone() }, t);
                            normalize_pair(&index, &x, &y)
                        })
                        .collect()
                };
                let name = format!("({}:{}|{}:{})", k.cells[*a].name, ea.word(), l.cells[*b].name, eb.word());
                Cell { name, dim: n, faces }
            })
            .collect();
        let cap = match (k.cap, l.cap) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(usize::MAX).min(b.unwrap_or(usize::MAX))),
        };
        FinSimplicialSet::from_cells(cells, cap)
    }

    /// The product cell for a pair of nondegenerate cells (both with identity epis would
    /// only match in equal dimension; this looks up the general case).
    pub fn product_cell(&self, k: &FinSimplicialSet, l: &FinSimplicialSet, x: &Simplex, y: &Simplex) -> Option<Simplex> {
        let name_of = |s: &Simplex, set: &FinSimplicialSet| (set.cells[s.cell].name.clone(), s.epi.clone());
        let coll: BTreeSet<usize> = x.epi.collapsed().into_iter().collect();
        let common: Vec<usize> = y.epi.collapsed().into_iter().filter(|i| coll.contains(i)).collect();
        let sigma = Op::epi_from_collapsed(x.dim(), &common);
        let xa = descend_epi(&x.epi, &sigma);
        let yb = descend_epi(&y.epi, &sigma);
        let (xn, _) = name_of(x, k);
        let (yn, _) = name_of(y, l);
        let name = format!("({}:{}|{}:{})", xn, xa.word(), yn, yb.word());
        self.cell_by_name(&name).map(|c| Simplex { cell: c, epi: sigma })
    }
}

type ProductKey = (usize, Op, usize, Op);

/// Nondegenerate simplices of K x L as pairs of simplices with no common collapse.
fn product_keys(k: &FinSimplicialSet, l: &FinSimplicialSet) -> Vec<ProductKey> {
    let mut keys = Vec::new();
    let top = (k.dim() + l.dim()).max(-1);
    for n in 0..=(top.max(0) as usize) {
        for a in 0..k.n_cells() {
            let p = k.cells[a].dim;
            if p > n {
                continue;
            }
            for b in 0..l.n_cells() {
                let q = l.cells[b].dim;
                if q > n || p + q < n {
                    continue;
                }
                for ea in Op::all_surjective(n, p) {
                    let ca: BTreeSet<usize> = ea.collapsed().into_iter().collect();
                    for eb in Op::all_surjective(n, q) {
                        if eb.collapsed().iter().all(|i| !ca.contains(i)) {
                            keys.push((a, ea.clone(), b, eb));
                        }
                    }
                }
            }
        }
    }
    keys
}

/// The two projections out of `FinSimplicialSet::product(k, l)`.
pub fn product_projections(k: &FinSimplicialSet, l: &FinSimplicialSet) -> (SMap, SMap) {
    let keys = product_keys(k, l);
    let pk = keys.iter().map(|(a, ea, _, _)| Simplex { cell: *a, epi: ea.clone() }).collect();
    let pl = keys.iter().map(|(_, _, b, eb)| Simplex { cell: *b, epi: eb.clone() }).collect();
    (SMap { images: pk }, SMap { images: pl })
}

fn descend_epi(e: &Op, sigma: &Op) -> Op {
    let mut vals = vec![0usize; sigma.tgt_dim() + 1];
    for i in 0..=e.src_dim() {
        vals[sigma.at(i)] = e.at(i);
    }
    Op::new(e.tgt_dim(), vals)
}

fn normalize_pair(index: &HashMap<(usize, Op, usize, Op), usize>, x: &Simplex, y: &Simplex) -> Simplex {
    let cx: BTreeSet<usize> = x.epi.collapsed().into_iter().collect();
    let common: Vec<usize> = y.epi.collapsed().into_iter().filter(|i| cx.contains(i)).collect();
    let sigma = Op::epi_from_collapsed(x.dim(), &common);
    let key = (x.cell, descend_epi(&x.epi, &sigma), y.cell, descend_epi(&y.epi, &sigma));
    Simplex { cell: index[&key], epi: sigma }
}

/// Concatenation of operators used by the join: [a]+1+[b] -> [a']+1+[b'].
pub fn concat_epi(e: &Op, f: &Op) -> Op {
    let shift = e.tgt_dim() + 1;
    let mut vals: Vec<usize> = e.vals.iter().map(|&v| v as usize).collect();
    vals.extend(f.vals.iter().map(|&v| v as usize + shift));
    Op::new(shift + f.tgt_dim(), vals)
}

fn nerve_simplex(c: &FinCategory, index: &HashMap<Vec<usize>, usize>, start: usize, chain: &[usize]) -> Simplex {
    let p = chain.len();
    let mut kept = Vec::new();
    let mut coll = Vec::new();
    for (i, &f) in chain.iter().enumerate() {
        if c.is_identity(f) {
            coll.push(i);
        } else {
            kept.push(f);
        }
    }
    let key = if kept.is_empty() {
        vec![start]
    } else {
        let mut k = vec![usize::MAX];
        k.extend(kept);
        k
    };
    Simplex { cell: index[&key], epi: Op::epi_from_collapsed(p, &coll) }
}

pub fn mask_members(s: u32) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).collect()
}

/// A simplicial map, given by the image of each nondegenerate cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SMap {
    pub images: Vec<Simplex>,
}

impl SMap {
    pub fn map(&self, cod: &FinSimplicialSet, x: &Simplex) -> Simplex {
        cod.apply(&self.images[x.cell], &x.epi)
    }

    pub fn identity(k: &FinSimplicialSet) -> SMap {
        SMap { images: (0..k.n_cells()).map(|c| Simplex::nd(c, k.cell(c).dim)).collect() }
    }

    /// `self . other`
    pub fn after(&self, mid: &FinSimplicialSet, cod: &FinSimplicialSet, other: &SMap) -> SMap {
        let _ = mid;
        SMap { images: other.images.iter().map(|x| self.map(cod, x)).collect() }
    }

    pub fn validate(&self, dom: &FinSimplicialSet, cod: &FinSimplicialSet) -> Result<(), String> {
        if self.images.len() != dom.n_cells() {
            return Err("size mismatch".into());
        }
        for (c, cell) in dom.cells().iter().enumerate() {
            let img = &self.images[c];
            if img.dim() != cell.dim || img.cell >= cod.n_cells() || img.epi.tgt_dim() != cod.cell(img.cell).dim {
                return Err(format!("cell {} has an ill-shaped image", cell.name));
            }
            for (i, f) in cell.faces.iter().enumerate() {
                if cod.face(img, i) != self.map(cod, f) {
                    return Err(format!("face {} of {} not preserved", i, cell.name));
                }
            }
        }
        Ok(())
    }

    /// Injective on nondegenerate cells (a monomorphism).
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.images.iter().all(|x| !x.is_degenerate() && seen.insert(x.cell))
    }
}

/// Inclusion of `a` into `b` by matching cell names.
pub fn inclusion_by_names(a: &FinSimplicialSet, b: &FinSimplicialSet) -> Option<SMap> {
    let images = a
        .cells()
        .iter()
        .map(|c| b.cell_by_name(&c.name).filter(|&i| b.cell(i).dim == c.dim).map(|i| Simplex::nd(i, c.dim)))
        .collect::<Option<Vec<_>>>()?;
    let m = SMap { images };
    m.validate(a, b).ok().map(|_| m)
}

/// The map of standard simplices induced by an operator.
pub fn operator_map(theta: &Op) -> SMap {
    let a = FinSimplicialSet::standard(theta.src_dim());
    let b = FinSimplicialSet::standard(theta.tgt_dim());
    standard_map(&a, &b, |v| theta.at(v))
}

/// A map between vertex-set complexes determined by a monotone vertex map.
pub fn standard_map<F: Fn(usize) -> usize>(a: &FinSimplicialSet, b: &FinSimplicialSet, f: F) -> SMap {
    let images = a
        .cells()
        .iter()
        .map(|c| {
            let vs: Vec<usize> = c.name.bytes().map(|ch| (ch - b'0') as usize).map(&f).collect();
            simplex_from_vertex_word(b, &vs).expect("image simplex exists")
        })
        .collect();
    SMap { images }
}

/// For vertex-set complexes named by digit strings: the simplex with the given
/// weakly increasing vertex sequence.
pub fn simplex_from_vertex_word(b: &FinSimplicialSet, vs: &[usize]) -> Option<Simplex> {
    let mut distinct: Vec<u8> = vs.iter().map(|&v| v as u8).collect();
    distinct.dedup();
    let cell = b.cell_by_name(&seq_word(&distinct))?;
    let coll: Vec<usize> = (0..vs.len() - 1).filter(|&i| vs[i] == vs[i + 1]).collect();
    Some(Simplex { cell, epi: Op::epi_from_collapsed(vs.len() - 1, &coll) })
}

/// The map K * L -> K * L' induced by g: L -> L' (identity on K).
pub fn join_map_right(k: &FinSimplicialSet, l: &FinSimplicialSet, l2: &FinSimplicialSet, g: &SMap) -> SMap {
    let nk = k.n_cells();
    let (nl, nl2) = (l.n_cells(), l2.n_cells());
    let mut images = Vec::new();
    for c in 0..nk {
        images.push(Simplex::nd(c, k.cell(c).dim));
    }
    for e in 0..nl {
        let y = &g.images[e];
        images.push(Simplex { cell: nk + y.cell, epi: y.epi.clone() });
    }
    for c in 0..nk {
        for e in 0..nl {
            let y = &g.images[e];
            images.push(Simplex {
                cell: nk + nl2 + c * nl2 + y.cell,
                epi: concat_epi(&Op::id(k.cell(c).dim), &y.epi),
            });
        }
    }
    SMap { images }
}

/// Pushout of a monomorphism `f: a -> b` along `g: a -> k`, with its two legs
/// `k -> p` and `b -> p`.
pub fn pushout_sset(
    a: &FinSimplicialSet,
    b: &FinSimplicialSet,
    k: &FinSimplicialSet,
    f: &SMap,
    g: &SMap,
) -> Result<(FinSimplicialSet, SMap, SMap), SsetError> {
    if !f.is_injective() {
        return Err(SsetError::NonMonoAttach);
    }
    let mut preimage: HashMap<usize, usize> = HashMap::new();
    for (c, x) in f.images.iter().enumerate() {
        preimage.insert(x.cell, c);
    }
    let _ = a;
    let mut cells: Vec<Cell> = k.cells().to_vec();
    let mut used: std::collections::HashSet<String> = cells.iter().map(|c| c.name.clone()).collect();
    let mut new_index: HashMap<usize, usize> = HashMap::new();
    let mut order: Vec<usize> = (0..b.n_cells()).filter(|c| !preimage.contains_key(c)).collect();
    order.sort_by_key(|&c| b.cell(c).dim);
    for &c in &order {
        new_index.insert(c, cells.len());
        let mut name = b.cell(c).name.clone();
        while used.contains(&name) {
            name.push('\'');
        }
        used.insert(name.clone());
        cells.push(Cell { name, dim: b.cell(c).dim, faces: Vec::new() });
    }
    let leg_b = |x: &Simplex, cells: &Vec<Cell>| -> Simplex {
        let _ = cells;
        match preimage.get(&x.cell) {
            Some(&ac) => k.apply(&g.images[ac], &x.epi),
            None => Simplex { cell: new_index[&x.cell], epi: x.epi.clone() },
        }
    };
    for &c in &order {
        let faces: Vec<Simplex> = b.cell(c).faces.iter().map(|x| leg_b(x, &cells)).collect();
        let i = new_index[&c];
        cells[i].faces = faces;
    }
    let cap = match (b.cap, k.cap) {
        (None, None) => None,
        (x, y) => Some(x.unwrap_or(usize::MAX).min(y.unwrap_or(usize::MAX))),
    };
    let p = FinSimplicialSet::from_cells(cells, cap);
    let leg_k = SMap::identity(k);
    let leg_b_map = SMap {
        images: (0..b.n_cells())
            .map(|c| match preimage.get(&c) {
                Some(&ac) => g.images[ac].clone(),
                None => Simplex::nd(new_index[&c], b.cell(c).dim),
            })
            .collect(),
    };
    Ok((p, leg_k, leg_b_map))
}

/// Disjoint union.
pub fn coproduct_sset(k: &FinSimplicialSet, l: &FinSimplicialSet) -> FinSimplicialSet {
    let empty = FinSimplicialSet::empty();
    let none = SMap { images: Vec::new() };
    pushout_sset(&empty, l, k, &none, &none).unwrap().0
}

/// Calls `visit` on every simplicial map `dom -> cod` that agrees with the
/// fixed images in `partial`; stops early when `visit` returns false.
pub fn for_each_map<F>(
    dom: &FinSimplicialSet,
    cod: &FinSimplicialSet,
    partial: &[Option<Simplex>],
    mut visit: F,
) -> Result<(), SsetError>
where
    F: FnMut(&[Simplex]) -> bool,
{
    let mut order: Vec<usize> = (0..dom.n_cells()).collect();
    order.sort_by_key(|&c| dom.cell(c).dim);
    for &c in &order {
        let d = dom.cell(c).dim;
        if d > 0 {
            cod.face_index(d)?;
        }
    }
    // fixed cells determine their nondegenerate faces
    let mut fixed: Vec<Option<Simplex>> = vec![None; dom.n_cells()];
    for (c, x) in partial.iter().enumerate().take(dom.n_cells()) {
        fixed[c] = x.clone();
    }
    for &c in order.iter().rev() {
        let Some(img) = fixed[c].clone() else { continue };
        for (i, f) in dom.cell(c).faces.iter().enumerate() {
            if !f.epi.is_identity() {
                continue;
            }
            let fi = cod.face(&img, i);
            match &fixed[f.cell] {
                Some(x) if *x != fi => return Ok(()),
                Some(_) => {}
                None => fixed[f.cell] = Some(fi),
            }
        }
    }
    let partial = &fixed[..];
    let verts: Vec<Simplex> = cod.vertices().iter().map(|&v| Simplex::nd(v, 0)).collect();
    let mut images: Vec<Option<Simplex>> = vec![None; dom.n_cells()];
    fn go<F: FnMut(&[Simplex]) -> bool>(
        pos: usize,
        order: &[usize],
        dom: &FinSimplicialSet,
        cod: &FinSimplicialSet,
        partial: &[Option<Simplex>],
        verts: &[Simplex],
        images: &mut Vec<Option<Simplex>>,
        visit: &mut F,
    ) -> bool {
        if pos == order.len() {
            let full: Vec<Simplex> = images.iter().map(|x| x.clone().unwrap()).collect();
            return visit(&full);
        }
        let c = order[pos];
        let cell = dom.cell(c);
        let candidates: Vec<Simplex> = if cell.dim == 0 {
            match &partial[c] {
                Some(x) => vec![x.clone()],
                None => verts.to_vec(),
            }
        } else {
            let faces: Vec<Simplex> = cell
                .faces
                .iter()
                .map(|f| cod.apply(images[f.cell].as_ref().unwrap(), &f.epi))
                .collect();
            cod.with_faces(&faces).unwrap_or_default()
        };
        for x in candidates {
            if let Some(Some(fixed)) = partial.get(c) {
                if *fixed != x {
                    continue;
                }
            }
            images[c] = Some(x);
            if !go(pos + 1, order, dom, cod, partial, verts, images, visit) {
                return false;
            }
        }
        images[c] = None;
        true
    }
    go(0, &order, dom, cod, partial, &verts, &mut images, &mut visit);
    Ok(())
}

/// Every map extending `partial`.
pub fn all_maps(dom: &FinSimplicialSet, cod: &FinSimplicialSet, partial: &[Option<Simplex>]) -> Result<Vec<SMap>, SsetError> {
    let mut out = Vec::new();
    for_each_map(dom, cod, partial, |m| {
        out.push(SMap { images: m.to_vec() });
        true
    })?;
    Ok(out)
}

/// The first map extending `partial`, in canonical order.
pub fn first_map(dom: &FinSimplicialSet, cod: &FinSimplicialSet, partial: &[Option<Simplex>]) -> Result<Option<SMap>, SsetError> {
    let mut out = None;
    for_each_map(dom, cod, partial, |m| {
        out = Some(SMap { images: m.to_vec() });
        false
    })?;
    Ok(out)
}

/// Partial assignment on `big` induced by a map defined on a subcomplex.
pub fn partial_from(inc: &SMap, big: &FinSimplicialSet, small_map: &SMap) -> Vec<Option<Simplex>> {
    let mut partial = vec![None; big.n_cells()];
    for (c, x) in inc.images.iter().enumerate() {
        debug_assert!(!x.is_degenerate());
        partial[x.cell] = Some(small_map.images[c].clone());
    }
    partial
}

/// An isomorphism `k -> l` sending vertex i of `k` to `vertex_map[i]`, found by
/// matching vertex sequences; requires both sets to be determined by vertices.
pub fn find_isomorphism(k: &FinSimplicialSet, l: &FinSimplicialSet, vertex_map: &[usize]) -> Option<SMap> {
    if k.n_cells() != l.n_cells() {
        return None;
    }
    let kv = k.vertices();
    let lv = l.vertices();
    let mut vmap = HashMap::new();
    for (i, &v) in kv.iter().enumerate() {
        vmap.insert(v, lv[*vertex_map.get(i)?]);
    }
    let mut lseq: HashMap<Vec<usize>, usize> = HashMap::new();
    for (c, vs) in l.all_cell_vertices().into_iter().enumerate() {
        if lseq.insert(vs, c).is_some() {
            return None;
        }
    }
    let mut images = Vec::new();
    let mut hit = std::collections::HashSet::new();
    for (c, vs) in k.all_cell_vertices().into_iter().enumerate() {
        let seq: Vec<usize> = vs.iter().map(|v| vmap[v]).collect();
        let t = *lseq.get(&seq)?;
        if !hit.insert(t) || l.cell(t).dim != k.cell(c).dim {
            return None;
        }
        images.push(Simplex::nd(t, k.cell(c).dim));
    }
    let m = SMap { images };
    m.validate(k, l).ok().map(|_| m)
}

// ---- generalized horns ----

/// One inner-horn pushout: attach the simplex on `vertices` along the horn
/// missing the face opposite local index `inner`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornStep {
    pub dim: usize,
    pub inner: usize,
    pub vertices: Vec<usize>,
}

fn is_interval(set: &[usize], order: &[usize]) -> bool {
    if set.is_empty() {
        return true;
    }
    let pos: Vec<usize> = set.iter().map(|v| order.iter().position(|w| w == v).unwrap()).collect();
    let (lo, hi) = (*pos.iter().min().unwrap(), *pos.iter().max().unwrap());
    hi - lo + 1 == pos.len()
}

fn complement(f: &[usize], a: &BTreeSet<usize>) -> Vec<usize> {
    f.iter().copied().filter(|v| !a.contains(v)).collect()
}

/// Inner-horn pushouts taking the generalized horn on (m, B) to the one on (m, A).
pub fn decompose_generalized_horn(m: usize, a: &[usize], b: &[usize]) -> Result<Vec<HornStep>, SsetError> {
    let full: Vec<usize> = (0..=m).collect();
    let aset: BTreeSet<usize> = a.iter().copied().collect();
    let bset: BTreeSet<usize> = b.iter().copied().collect();
    if !aset.is_subset(&bset) || bset.iter().any(|&v| v > m) {
        return Err(SsetError::Malformed("need A within B within [m]".into()));
    }
    if aset.len() == m + 1 || bset.len() == m + 1 {
        return Err(SsetError::EmptyHorn);
    }
    for s in [&aset, &bset] {
        let comp = complement(&full, s);
        if is_interval(&comp, &full) {
            return Err(SsetError::NotInner(s.iter().copied().collect()));
        }
    }
    attach_faces(&full, &bset, &aset).ok_or(SsetError::Malformed("no inner decomposition found".into()))
}

fn attach_faces(f: &[usize], start: &BTreeSet<usize>, target: &BTreeSet<usize>) -> Option<Vec<HornStep>> {
    if start == target {
        return Some(Vec::new());
    }
    for &b in start.difference(target) {
        let g: Vec<usize> = f.iter().copied().filter(|&v| v != b).collect();
        let mut a2 = start.clone();
        a2.remove(&b);
        if is_interval(&complement(&g, &a2), &g) {
            continue;
        }
        let Some(mut steps) = fill_simplex(&g, &a2) else { continue };
        let Some(rest) = attach_faces(f, &a2, target) else { continue };
        steps.extend(rest);
        return Some(steps);
    }
    None
}

/// Steps taking the generalized horn of Delta^g on `a` to all of Delta^g.
fn fill_simplex(g: &[usize], a: &BTreeSet<usize>) -> Option<Vec<HornStep>> {
    for (pos, &i) in g.iter().enumerate() {
        if pos == 0 || pos + 1 == g.len() || !a.contains(&i) {
            continue;
        }
        let single: BTreeSet<usize> = [i].into_iter().collect();
        if let Some(mut steps) = attach_faces(g, a, &single) {
            steps.push(HornStep { dim: g.len() - 1, inner: pos, vertices: g.to_vec() });
            return Some(steps);
        }
    }
    None
}

/// Result of replaying a decomposition with [`pushout_sset`].
#[derive(Clone, Debug, Serialize)]
pub struct HornReplay {
    pub equal: bool,
    pub injective: bool,
    pub max_dim: usize,
    pub cells_before: usize,
    pub cells_after: usize,
}

/// Replays the steps from the (m, B) horn and compares with the (m, A) horn.
pub fn replay_horn_steps(m: usize, a: &[usize], b: &[usize], steps: &[HornStep]) -> Result<HornReplay, SsetError> {
    let mask = |s: &[usize]| s.iter().fold(0u32, |x, &i| x | 1 << i);
    let labels: Vec<usize> = (0..=m).collect();
    let mut x = FinSimplicialSet::horn_labeled(&labels, mask(b))?;
    let before = x.n_cells();
    let target = FinSimplicialSet::horn_labeled(&labels, mask(a))?;
    let mut injective = true;
    let mut max_dim = 0;
    for st in steps {
        max_dim = max_dim.max(st.dim);
        let horn = FinSimplicialSet::horn_labeled(&st.vertices, 1 << st.inner)?;
        let simplex = FinSimplicialSet::standard_labeled(&st.vertices);
        let f = inclusion_by_names(&horn, &simplex).ok_or(SsetError::Malformed("horn not in simplex".into()))?;
        let g = match inclusion_by_names(&horn, &x) {
            Some(g) => g,
            None => {
                injective = false;
                break;
            }
        };
        injective &= g.is_injective();
        let (p, _, _) = pushout_sset(&horn, &simplex, &x, &f, &g)?;
        if p.n_cells() != x.n_cells() + 2 {
            injective = false;
        }
        x = p;
    }
    let equal = x.n_cells() == target.n_cells()
        && target.cells().iter().all(|c| match x.cell_by_name(&c.name) {
            Some(i) => {
                let xc = x.cell(i);
                xc.dim == c.dim
                    && xc
                        .faces
                        .iter()
                        .zip(&c.faces)
                        .all(|(u, v)| x.cell(u.cell).name == target.cell(v.cell).name && u.epi == v.epi)
            }
            None => false,
        });
    Ok(HornReplay { equal, injective, max_dim, cells_before: before, cells_after: x.n_cells() })
}

/// Every admissible pair (A, B) for a given m: A within B, neither complement an interval.
pub fn admissible_horn_pairs(m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let full: Vec<usize> = (0..=m).collect();
    let n = 1u32 << (m + 1);
    let ok = |s: u32| {
        let set: BTreeSet<usize> = mask_members(s).into_iter().collect();
        let comp = complement(&full, &set);
        !comp.is_empty() && !is_interval(&comp, &full)
    };
    let mut out = Vec::new();
    for a in 0..n {
        if !ok(a) {
            continue;
        }
        for b in 0..n {
            if a & !b == 0 && ok(b) {
                out.push((mask_members(a), mask_members(b)));
            }
        }
    }
    out
}

// ---- slices ----

/// The slice under `x: K -> M` through dimension `cap`, together with the
/// join-form data of each cell (its map K * Delta^n -> M).
pub struct Slice {
    pub sset: FinSimplicialSet,
    pub cell_maps: Vec<SMap>,
}

/// Simplices of the slice: maps K * Delta^n -> M extending `x` on K.
pub fn slice_under(k: &FinSimplicialSet, m: &FinSimplicialSet, x: &SMap, cap: usize) -> Result<Slice, SsetError> {
    let mut cells: Vec<Cell> = Vec::new();
    let mut cell_maps: Vec<SMap> = Vec::new();
    let mut nd_index: HashMap<(usize, Vec<Simplex>), usize> = HashMap::new();
    let mut joins: Vec<FinSimplicialSet> = Vec::new();
    for n in 0..=cap {
        joins.push(FinSimplicialSet::join(k, &FinSimplicialSet::standard(n)));
    }
    for n in 0..=cap {
        let jn = &joins[n];
        let mut partial = vec![None; jn.n_cells()];
        for c in 0..k.n_cells() {
            partial[c] = Some(x.images[c].clone());
        }
        let maps = all_maps(jn, m, &partial)?;
        for y in maps {
            // degenerate iff y = y . (K * sigma_j) . (K * delta_j) for some j
            let mut degenerate = false;
            for j in 0..n {
                let s = slice_restrict(k, m, &joins, n, &y, &Op::coface(n, j));
                let back = slice_restrict(k, m, &joins, n - 1, &s, &Op::codegeneracy(n - 1, j));
                if back == y {
                    degenerate = true;
                    break;
                }
            }
            if degenerate {
                continue;
            }
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        let f = slice_restrict(k, m, &joins, n, &y, &Op::coface(n, i));
                        slice_normalize(k, m, &joins, n - 1, &f, &nd_index)
                    })
                    .collect()
            };
            nd_index.insert((n, y.images.clone()), cells.len());
            cells.push(Cell { name: format!("s{}", cells.len()), dim: n, faces });
            cell_maps.push(y);
        }
    }
    Ok(Slice { sset: FinSimplicialSet::from_cells(cells, Some(cap)), cell_maps })
}

/// Restriction of a slice n-simplex `y` along theta: [p] -> [n].
fn slice_restrict(k: &FinSimplicialSet, m: &FinSimplicialSet, joins: &[FinSimplicialSet], n: usize, y: &SMap, theta: &Op) -> SMap {
    let p = theta.src_dim();
    let g = operator_map(theta);
    let jm = join_map_right(k, &FinSimplicialSet::standard(p), &FinSimplicialSet::standard(n), &g);
    let _ = &joins[n];
    SMap { images: jm.images.iter().map(|s| y.map(m, s)).collect() }
}

fn slice_normalize(
    k: &FinSimplicialSet,
    m: &FinSimplicialSet,
    joins: &[FinSimplicialSet],
    n: usize,
    y: &SMap,
    nd_index: &HashMap<(usize, Vec<Simplex>), usize>,
) -> Simplex {
    if let Some(&c) = nd_index.get(&(n, y.images.clone())) {
        return Simplex::nd(c, n);
    }
    for j in 0..n {
        let s = slice_restrict(k, m, joins, n, y, &Op::coface(n, j));
        let back = slice_restrict(k, m, joins, n - 1, &s, &Op::codegeneracy(n - 1, j));
        if back == *y {
            let inner = slice_normalize(k, m, joins, n - 1, &s, nd_index);
            return Simplex { cell: inner.cell, epi: inner.epi.compose(&Op::codegeneracy(n - 1, j)) };
        }
    }
    panic!("slice simplex neither nondegenerate nor degenerate");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_factorization() {
        for m in 0..4 {
            for n in 0..4 {
                for op in Op::all_monotone(m, n) {
                    let (e, mo) = op.factor();
                    assert!(e.is_surjective() && mo.is_injective());
                    assert_eq!(mo.compose(&e), op);
                }
            }
        }
    }

    #[test]
    fn standard_simplex_identities() {
        for n in 0..5 {
            let s = FinSimplicialSet::standard(n);
            assert_eq!(s.n_cells(), (1 << (n + 1)) - 1);
            s.check().unwrap();
            s.check_degeneracies(n.min(3)).unwrap();
        }
    }

    #[test]
    fn ez_in_nerve_of_one() {
        let n1 = FinSimplicialSet::nerve(&FinCategory::chain(1), 3);
        assert_eq!(n1.cap(), None);
        let s = n1.simplices(2).unwrap();
        assert_eq!(s.len(), 4);
        let mut seen = std::collections::HashSet::new();
        for x in &s {
            assert!(seen.insert(n1.vertex_seq(x)));
        }
    }

    #[test]
    fn horn_cell_counts() {
        assert_eq!(FinSimplicialSet::horn(2, &[1]).unwrap().n_cells(), 5);
        assert_eq!(FinSimplicialSet::horn(3, &[]).unwrap().n_cells(), FinSimplicialSet::boundary(3).n_cells());
        // faces opposite 0 and 3: 7 + 7 - 3
        assert_eq!(FinSimplicialSet::horn(3, &[1, 2]).unwrap().n_cells(), 11);
        assert_eq!(FinSimplicialSet::horn(2, &[0, 1, 2]).unwrap_err(), SsetError::EmptyHorn);
    }

    #[test]
    fn decompose_small_example() {
        let steps = decompose_generalized_horn(3, &[1], &[1, 2]).unwrap();
        assert_eq!(steps, vec![HornStep { dim: 2, inner: 1, vertices: vec![0, 1, 3] }]);
        let r = replay_horn_steps(3, &[1], &[1, 2], &steps).unwrap();
        assert!(r.equal && r.injective);
        assert!(decompose_generalized_horn(3, &[0], &[0]).is_err());
    }

    #[test]
    fn join_counts() {
        let b1 = FinSimplicialSet::boundary(1);
        let j = FinSimplicialSet::join(&b1, &b1);
        assert_eq!(j.n_cells(), 8);
        j.check().unwrap();
    }

    #[test]
    fn nerve_of_free_iso_has_two_cells_per_dim() {
        let n = FinSimplicialSet::nerve(&FinCategory::free_iso(), 4);
        assert_eq!(n.cap(), Some(4));
        for d in 0..=4 {
            assert_eq!(n.cells_of_dim(d).len(), 2);
        }
        n.check().unwrap();
    }

    #[test]
    fn pushout_two_points() {
        let p = coproduct_sset(&FinSimplicialSet::standard(0), &FinSimplicialSet::standard(0));
        assert_eq!(p.n_cells(), 2);
    }

    #[test]
    fn slice_of_vertex_in_n1() {
        let n1 = FinSimplicialSet::nerve(&FinCategory::chain(1), 3);
        let pt = FinSimplicialSet::standard(0);
        let x = SMap { images: vec![Simplex::nd(0, 0)] };
        let sl = slice_under(&pt, &n1, &x, 2).unwrap();
        assert_eq!(sl.sset.cells_of_dim(0).len(), 2);
        sl.sset.check().unwrap();
    }

    #[test]
    fn product_with_interval() {
        let i = FinSimplicialSet::standard(1);
        let sq = FinSimplicialSet::product(&i, &i);
        // 4 vertices, 5 edges, 2 triangles
        assert_eq!(sq.n_cells(), 11);
        sq.check().unwrap();
    }
}
