//! The fat subdivision D(K), its level filtration filt{k,K}, barycentric
//! subdivisions of marked complexes and the explicit homotopy-equivalence
//! witnesses used to contract them.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{two_out_of_six_closure, FinCategory, Functor, Mor, Obj};
use crate::par;
use crate::simplicial::{seq_word, FinSimplicialSet, Op, SMap, Simplex, SsetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DError {
    #[error("B_{{{0},{1}}} is empty: 2k < m")]
    Empty(usize, usize),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error("level too small: {0} leaves the truncation")]
    LevelTooSmall(String),
    #[error("malformed marked complex: {0}")]
    BadComplex(String),
    #[error("simplicial map does not preserve the filtration at {0}")]
    NotTransported(String),
}

/// Monotone maps [2k-m] -> [m] all of whose fibers have odd size.
pub fn b_set(k: usize, m: usize) -> Result<Vec<Op>, DError> {
    if 2 * k < m {
        return Err(DError::Empty(k, m));
    }
    let len = 2 * k - m + 1;
    let mut out = Vec::new();
    let mut sizes = Vec::with_capacity(m + 1);
    fn go(parts: usize, left: usize, sizes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if sizes.len() == parts {
            if left == 0 {
                out.push(sizes.clone());
            }
            return;
        }
        let mut s = 1;
        while s <= left {
            sizes.push(s);
            go(parts, left - s, sizes, out);
            sizes.pop();
            s += 2;
        }
    }
    let mut profiles = Vec::new();
    go(m + 1, len, &mut sizes, &mut profiles);
    for p in profiles {
        let vals: Vec<usize> = p.iter().enumerate().flat_map(|(v, &n)| std::iter::repeat(v).take(n)).collect();
        out.push(Op::new(m, vals));
    }
    out.sort();
    Ok(out)
}

/// A_{k,0} = B_{k,0}; A_{k,m} = B_{k,m} together with every d_i A_{k,m-1}.
pub fn a_set(k: usize, m: usize) -> Vec<Op> {
    let mut out: BTreeSet<Op> = BTreeSet::new();
    if m == 0 {
        out.insert(Op::constant(2 * k, 0, 0));
    } else {
        if let Ok(b) = b_set(k, m) {
            out.extend(b);
        }
        let prev = a_set(k, m - 1);
        for i in 0..=m {
            let d = Op::coface(m, i);
            out.extend(prev.iter().map(|a| d.compose(a)));
        }
    }
    out.into_iter().collect()
}

/// The sieve filt{k,[m]}: every nonempty subsequence of an element of A_{k,m}.
pub fn filt_standard(k: usize, m: usize) -> Vec<Op> {
    let mut out: BTreeSet<Op> = BTreeSet::new();
    for a in a_set(k, m) {
        let n = a.src_dim();
        for mask in 1u32..(1 << (n + 1)) {
            let vals: Vec<usize> = (0..=n).filter(|i| mask >> i & 1 == 1).map(|i| a.at(i)).collect();
            out.insert(Op::new(m, vals));
        }
    }
    let mut v: Vec<Op> = out.into_iter().collect();
    v.sort_by(|a, b| (a.src_dim(), &a.vals).cmp(&(b.src_dim(), &b.vals)));
    v
}

/// Surjections in filt{k,[n]}, for every n (empty beyond 2k).
pub fn filt_epis(k: usize) -> Vec<HashSet<Op>> {
    (0..=2 * k)
        .map(|n| filt_standard(k, n).into_iter().filter(|o| o.is_surjective()).collect())
        .collect()
}

/// Smallest k with `x` in filt{k,K}.
pub fn filtration_degree(x: &Simplex) -> usize {
    let p = x.dim();
    (0..=p + 1)
        .find(|&k| {
            let n = x.epi.tgt_dim();
            n <= 2 * k && filt_standard(k, n).contains(&x.epi)
        })
        .expect("every degeneracy lies in some level")
}

/// How the weak equivalences of D(K) are determined.
#[derive(Clone, Debug)]
pub enum WeqPolicy {
    /// Generated by the morphisms x -> y with y.nu degenerate, then closed
    /// under 2-out-of-6 inside the truncation.
    Generated,
    /// Created by a thin homotopical category J through a labelling of the
    /// vertices of K: phi: x -> y is a weq iff y(phi(last)) -> y(last) is one in J.
    Created { cat: FinCategory, weq: Vec<bool>, vertex_obj: Vec<Obj> },
}

/// A finite sieve of D(K) as a homotopical direct category.
#[derive(Clone, Debug)]
pub struct FiltCategory {
    pub level: Option<usize>,
    pub base: FinSimplicialSet,
    pub objects: Vec<Simplex>,
    pub cat: FinCategory,
    pub ops: Vec<Op>,
    pub weq: Vec<bool>,
    pub generating: Vec<bool>,
    pub degree: Vec<usize>,
    index: HashMap<Simplex, Obj>,
    mor_index: HashMap<(Obj, Obj, Op), Mor>,
    /// Vertex label of each vertex cell of the base (its position among vertices).
    labels: HashMap<usize, usize>,
    seq_index: Option<HashMap<Vec<usize>, Obj>>,
}

impl FiltCategory {
    /// filt{k,K}.
    pub fn build(k_set: &FinSimplicialSet, k: usize, policy: &WeqPolicy) -> Result<Self, DError> {
        if let Some(c) = k_set.cap() {
            if c < 2 * k && k_set.dim() >= c as isize {
                return Err(SsetError::CapExceeded(2 * k, c).into());
            }
        }
        let epis = filt_epis(k);
        let mut objs = Vec::new();
        for (c, cell) in k_set.cells().iter().enumerate() {
            if cell.dim > 2 * k {
                continue;
            }
            let mut es: Vec<&Op> = epis[cell.dim].iter().collect();
            es.sort();
            objs.extend(es.into_iter().map(|e| Simplex { cell: c, epi: e.clone() }));
        }
        let mut f = FiltCategory::from_sieve(k_set, objs, policy)?;
        f.level = Some(k);
        Ok(f)
    }

    /// The sieve generated by `generators`.
    pub fn generated(k_set: &FinSimplicialSet, generators: &[Simplex], policy: &WeqPolicy) -> Result<Self, DError> {
        let mut objs: BTreeSet<Simplex> = BTreeSet::new();
        for g in generators {
            let d = g.dim();
            for p in 0..=d {
                for phi in Op::all_injective(p, d) {
                    objs.insert(k_set.apply(g, &phi));
                }
            }
        }
        FiltCategory::from_sieve(k_set, objs.into_iter().collect(), policy)
    }

    fn from_sieve(k_set: &FinSimplicialSet, mut objs: Vec<Simplex>, policy: &WeqPolicy) -> Result<Self, DError> {
        let labels: HashMap<usize, usize> = k_set.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let seq = |x: &Simplex| -> Vec<usize> { k_set.vertex_seq(x).iter().map(|v| labels[v]).collect() };
        objs.sort_by(|a, b| (a.dim(), seq(a), a.cell, &a.epi).cmp(&(b.dim(), seq(b), b.cell, &b.epi)));
        objs.dedup();
        let index: HashMap<Simplex, Obj> = objs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let per_obj: Vec<Vec<(Obj, Op)>> = par::map(&objs, |y| {
            let d = y.dim();
            let mut out = Vec::new();
            for p in 0..=d {
                for phi in Op::all_injective(p, d) {
                    let x = k_set.apply(y, &phi);
                    out.push((x, phi));
                }
            }
            out.into_iter().map(|(x, phi)| (index.get(&x).copied().unwrap_or(usize::MAX), phi)).collect()
        });
        let mut mors: Vec<(Obj, Obj, Op)> = Vec::new();
        for (y, list) in per_obj.into_iter().enumerate() {
            for (x, phi) in list {
                if x == usize::MAX {
                    return Err(DError::BadComplex(format!("object set not a sieve below {:?}", objs[y])));
                }
                mors.push((x, y, phi));
            }
        }
        mors.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        let mor_index: HashMap<(Obj, Obj, Op), Mor> =
            mors.iter().cloned().enumerate().map(|(i, (x, y, p))| ((x, y, p), i)).collect();
        let seqs: Vec<Vec<usize>> = objs.iter().map(seq).collect();
        let seq_index = {
            let mut m = HashMap::new();
            let mut ok = true;
            for (i, s) in seqs.iter().enumerate() {
                if m.insert(s.clone(), i).is_some() {
                    ok = false;
                }
            }
            ok.then_some(m)
        };
        let names: Vec<String> = if seq_index.is_some() && labels.len() <= 10 {
            seqs.iter().map(|s| seq_word(&s.iter().map(|&v| v as u8).collect::<Vec<_>>())).collect()
        } else {
            objs.iter().map(|x| format!("{}.{}", k_set.cell(x.cell).name, x.epi.word())).collect()
        };
        let identity: Vec<Mor> = (0..objs.len()).map(|x| mor_index[&(x, x, Op::id(objs[x].dim()))]).collect();
        let mor_list: Vec<(String, Obj, Obj)> = mors
            .iter()
            .map(|(x, y, p)| {
                let name = if x == y { format!("id:{}", names[*x]) } else { format!("{}->{}@{}", names[*x], names[*y], p.word()) };
                (name, *x, *y)
            })
            .collect();
        let cat = FinCategory::from_parts(names, mor_list, identity, |g, f| {
            let (x, _, ref phi) = mors[f];
            let (_, z, ref psi) = mors[g];
            mor_index[&(x, z, psi.compose(phi))]
        });
        let generating: Vec<bool> = mors
            .iter()
            .map(|(_, y, phi)| {
                let yy = &objs[*y];
                let n = yy.dim();
                match policy {
                    WeqPolicy::Generated => k_set.apply(yy, &Op::new(n, vec![phi.last(), n])).is_degenerate(),
                    WeqPolicy::Created { cat: j, weq, vertex_obj } => {
                        let vs = k_set.vertex_seq(yy);
                        let a = vertex_obj[labels[&vs[phi.last()]]];
                        let b = vertex_obj[labels[&vs[n]]];
                        j.arrow(a, b).map(|m| weq[m]).unwrap_or(false)
                    }
                }
            })
            .collect();
        let weq = match policy {
            WeqPolicy::Generated => two_out_of_six_closure(&cat, &generating),
            WeqPolicy::Created { .. } => generating.clone(),
        };
        let degree = objs.iter().map(|x| x.dim()).collect();
        let ops = mors.into_iter().map(|(_, _, p)| p).collect();
        Ok(FiltCategory {
            level: None,
            base: k_set.clone(),
            objects: objs,
            cat,
            ops,
            weq,
            generating,
            degree,
            index,
            mor_index,
            labels,
            seq_index,
        })
    }

    pub fn n_obj(&self) -> usize {
        self.objects.len()
    }
    pub fn n_mor(&self) -> usize {
        self.ops.len()
    }
    pub fn obj_of(&self, x: &Simplex) -> Option<Obj> {
        self.index.get(x).copied()
    }
    pub fn mor_of(&self, x: Obj, y: Obj, phi: &Op) -> Option<Mor> {
        self.mor_index.get(&(x, y, phi.clone())).copied()
    }
    /// Vertex labels of an object.
    pub fn seq(&self, x: Obj) -> Vec<usize> {
        self.base.vertex_seq(&self.objects[x]).iter().map(|v| self.labels[v]).collect()
    }
    /// The object with the given vertex labels, when objects are determined by them.
    pub fn obj_by_seq(&self, s: &[usize]) -> Option<Obj> {
        self.seq_index.as_ref()?.get(s).copied()
    }
    /// The 2-out-of-6 closure added morphisms beyond the generators.
    pub fn closure_added(&self) -> bool {
        self.weq != self.generating
    }
    /// Degree reflects identities: every non-identity morphism raises dimension.
    pub fn degree_reflects_identities(&self) -> bool {
        (0..self.n_mor()).all(|f| {
            self.cat.is_identity(f) || self.degree[self.cat.src(f)] < self.degree[self.cat.tgt(f)]
        })
    }
    /// Inclusion functor into a larger sieve of D of the same base.
    pub fn inclusion_into(&self, big: &FiltCategory) -> Option<Functor> {
        let obj = self.objects.iter().map(|x| big.obj_of(x)).collect::<Option<Vec<_>>>()?;
        let mor = (0..self.n_mor())
            .map(|f| big.mor_of(obj[self.cat.src(f)], obj[self.cat.tgt(f)], &self.ops[f]))
            .collect::<Option<Vec<_>>>()?;
        Some(Functor { obj, mor })
    }
}

/// The functor filt{k,K} -> filt{k,L} induced by `f: K -> L`.
pub fn transport(f: &SMap, src: &FiltCategory, tgt: &FiltCategory) -> Result<Functor, DError> {
    let obj = src
        .objects
        .iter()
        .map(|x| {
            let fx = f.map(&tgt.base, x);
            tgt.obj_of(&fx).ok_or_else(|| DError::NotTransported(format!("{:?}", x)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mor = (0..src.n_mor())
        .map(|m| {
            tgt.mor_of(obj[src.cat.src(m)], obj[src.cat.tgt(m)], &src.ops[m])
                .ok_or_else(|| DError::NotTransported(src.cat.mor_name(m).to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Functor { obj, mor })
}

/// A simplicial complex embedded in the nerve of a homotopical poset. Object
/// indices of the poset must be a linear extension of its order.
#[derive(Clone, Debug)]
pub struct MarkedComplex {
    pub poset: FinCategory,
    pub weq: Vec<bool>,
    /// Simplices as bitmasks of poset objects.
    pub simplices: Vec<u32>,
}

impl MarkedComplex {
    /// The whole nerve of the poset.
    pub fn full(poset: FinCategory, weq: Vec<bool>) -> Self {
        let n = poset.n_obj();
        let simplices = (1u32..(1 << n))
            .filter(|&s| {
                let vs: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
                vs.windows(2).all(|w| poset.leq(w[0], w[1]))
            })
            .collect();
        MarkedComplex { poset, weq, simplices }
    }

    pub fn validate(&self) -> Result<(), DError> {
        let n = self.poset.n_obj();
        let set: HashSet<u32> = self.simplices.iter().copied().collect();
        for v in 0..n {
            if !set.contains(&(1 << v)) {
                return Err(DError::BadComplex(format!("missing vertex {}", self.poset.obj_name(v))));
            }
        }
        for &s in &self.simplices {
            let vs: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
            if s >> n != 0 || !vs.windows(2).all(|w| self.poset.leq(w[0], w[1])) {
                return Err(DError::BadComplex(format!("{:b} is not a chain", s)));
            }
            for &v in &vs {
                let f = s & !(1 << v);
                if f != 0 && !set.contains(&f) {
                    return Err(DError::BadComplex(format!("{:b} lacks a face", s)));
                }
            }
        }
        Ok(())
    }

    pub fn sset(&self) -> FinSimplicialSet {
        let labels: Vec<usize> = (0..self.poset.n_obj()).collect();
        FinSimplicialSet::from_vertex_sets(&labels, &self.simplices)
    }

    /// The weq policy created by the poset.
    pub fn policy(&self) -> WeqPolicy {
        WeqPolicy::Created { cat: self.poset.clone(), weq: self.weq.clone(), vertex_obj: (0..self.poset.n_obj()).collect() }
    }

    /// filt{k,K} with the created homotopical structure.
    pub fn filt(&self, k: usize) -> Result<FiltCategory, DError> {
        self.validate()?;
        FiltCategory::build(&self.sset(), k, &self.policy())
    }
}

/// Sd K: nondegenerate simplices ordered by inclusion; A in B is a weq iff
/// max A -> max B is one in the poset.
pub fn build_sd(m: &MarkedComplex) -> Result<(FinCategory, Vec<bool>, Vec<u32>), DError> {
    m.validate()?;
    let mut sets = m.simplices.clone();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    sets.dedup();
    let n = m.poset.n_obj();
    let names: Vec<String> = sets
        .iter()
        .map(|&s| {
            let vs: Vec<&str> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| m.poset.obj_name(i)).collect();
            format!("<{}>", vs.join(","))
        })
        .collect();
    let cat = FinCategory::poset(names, |i, j| sets[i] & !sets[j] == 0);
    let top = |s: u32| 31 - s.leading_zeros() as usize;
    let weq = (0..cat.n_mor())
        .map(|f| {
            let a = top(sets[cat.src(f)]);
            let b = top(sets[cat.tgt(f)]);
            m.poset.arrow(a, b).map(|x| m.weq[x]).unwrap_or(false)
        })
        .collect();
    Ok((cat, weq, sets))
}

/// Which contraction is being verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// D[m] -> [m]
    DmM,
    /// [0] -> D E(1)
    E1,
    /// the sieve generated by 0^k 1 in D of the marked interval
    ConeFilt,
    /// Sd K -> D K
    DSd,
}

impl std::str::FromStr for WitnessKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Dm-m" => Ok(WitnessKind::DmM),
            "E1" => Ok(WitnessKind::E1),
            "cone-filt" => Ok(WitnessKind::ConeFilt),
            "D-Sd" => Ok(WitnessKind::DSd),
            _ => Err(format!("unknown witness kind {}", s)),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub k: usize,
    pub k_prime: usize,
    pub objects: usize,
    pub morphisms: usize,
    pub functorial: bool,
    pub homotopical: bool,
    pub natural: bool,
    pub components_weq: bool,
    pub strict_identity: bool,
    /// Every morphism of the truncation is a weak equivalence.
    pub all_weq: bool,
    pub failures: Vec<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.functorial && self.homotopical && self.natural && self.components_weq && self.strict_identity
    }
}

/// Result of an insertion functor on one sequence: the new sequence, where
/// the old entries went, and the designated occurrence of each anchored value.
struct Insertion {
    seq: Vec<usize>,
    old: Vec<usize>,
    fresh: Vec<usize>,
    anchor: HashMap<usize, usize>,
}

fn insert_after_blocks(x: &[usize], values: &[usize]) -> Insertion {
    let mut seq = Vec::new();
    let mut old = Vec::new();
    let mut fresh = Vec::new();
    let mut anchor = HashMap::new();
    let mut vals: Vec<usize> = values.to_vec();
    vals.sort();
    let mut vi = 0;
    for (i, &v) in x.iter().enumerate() {
        while vi < vals.len() && vals[vi] < v {
            anchor.insert(vals[vi], seq.len());
            fresh.push(seq.len());
            seq.push(vals[vi]);
            vi += 1;
        }
        old.push(seq.len());
        seq.push(v);
        let block_ends = x.get(i + 1).map_or(true, |&w| w != v);
        if block_ends && vi < vals.len() && vals[vi] == v {
            anchor.insert(v, seq.len());
            fresh.push(seq.len());
            seq.push(v);
            vi += 1;
        }
    }
    while vi < vals.len() {
        anchor.insert(vals[vi], seq.len());
        fresh.push(seq.len());
        seq.push(vals[vi]);
        vi += 1;
    }
    Insertion { seq, old, fresh, anchor }
}

/// Data of a contraction: a small thin category `a` with f: a -> big',
/// p: big' -> a and s: big -> big', with id => s <= f p.
struct Contraction<'a> {
    a: &'a FinCategory,
    a_weq: &'a [bool],
    big: &'a FiltCategory,
    big2: &'a FiltCategory,
    f_seq: &'a dyn Fn(Obj) -> Vec<usize>,
    p_obj: &'a dyn Fn(&[usize]) -> Obj,
    s_seq: &'a dyn Fn(&[usize]) -> Insertion,
}

fn check_contraction(c: &Contraction, kind: WitnessKind) -> Result<WitnessReport, DError> {
    let (big, big2) = (c.big, c.big2);
    let mut failures = Vec::new();
    let lookup = |cat: &FiltCategory, s: &[usize]| -> Result<Obj, DError> {
        cat.obj_by_seq(s).ok_or_else(|| DError::LevelTooSmall(seq_word(&s.iter().map(|&v| v as u8).collect::<Vec<_>>())))
    };
    let hom_op = |x: &[usize], y: &[usize], map: &[usize]| -> Option<Op> {
        if map.windows(2).all(|w| w[0] < w[1]) && map.iter().enumerate().all(|(i, &j)| y[j] == x[i]) {
            Some(Op::new(y.len() - 1, map.to_vec()))
        } else {
            None
        }
    };
    // f : a -> big2
    let f_obj: Vec<Obj> = (0..c.a.n_obj()).map(|i| lookup(big2, &(c.f_seq)(i))).collect::<Result<_, _>>()?;
    let mut f_mor = Vec::new();
    for m in 0..c.a.n_mor() {
        let hom = big2.cat.hom(f_obj[c.a.src(m)], f_obj[c.a.tgt(m)]);
        if hom.len() != 1 {
            failures.push(format!("f on {} is not determined", c.a.mor_name(m)));
            f_mor.push(big2.cat.id(f_obj[c.a.src(m)]));
        } else {
            f_mor.push(hom[0]);
        }
    }
    let f = Functor { obj: f_obj, mor: f_mor };
    // p : big2 -> a
    let p_obj2: Vec<Obj> = (0..big2.n_obj()).map(|x| (c.p_obj)(&big2.seq(x))).collect();
    let mut p_mor2 = Vec::new();
    for m in 0..big2.n_mor() {
        match c.a.arrow(p_obj2[big2.cat.src(m)], p_obj2[big2.cat.tgt(m)]) {
            Some(g) => p_mor2.push(g),
            None => {
                failures.push(format!("p undefined on {}", big2.cat.mor_name(m)));
                p_mor2.push(c.a.id(p_obj2[big2.cat.src(m)]));
            }
        }
    }
    let p2 = Functor { obj: p_obj2, mor: p_mor2 };
    let incl = big.inclusion_into(big2).ok_or_else(|| DError::LevelTooSmall("inclusion".into()))?;
    let p = p2.after(&incl);
    // s : big -> big2
    let ins: Vec<Insertion> = (0..big.n_obj()).map(|x| (c.s_seq)(&big.seq(x))).collect();
    let s_obj: Vec<Obj> = ins.iter().map(|i| lookup(big2, &i.seq)).collect::<Result<_, _>>()?;
    let mut s_mor = Vec::new();
    for m in 0..big.n_mor() {
        let (x, y) = (big.cat.src(m), big.cat.tgt(m));
        let (ix, iy) = (&ins[x], &ins[y]);
        let phi = &big.ops[m];
        let mut map = vec![0; ix.seq.len()];
        for (j, &pos) in ix.old.iter().enumerate() {
            map[pos] = iy.old[phi.at(j)];
        }
        let mut ok = true;
        for &pos in &ix.fresh {
            match iy.anchor.get(&ix.seq[pos]) {
                Some(&q) => map[pos] = q,
                None => ok = false,
            }
        }
        let g = if ok { hom_op(&ix.seq, &iy.seq, &map).and_then(|op| big2.mor_of(s_obj[x], s_obj[y], &op)) } else { None };
        match g {
            Some(g) => s_mor.push(g),
            None => {
                failures.push(format!("s undefined on {}", big.cat.mor_name(m)));
                s_mor.push(big2.cat.id(s_obj[x]));
            }
        }
    }
    let s = Functor { obj: s_obj, mor: s_mor };
    let mut functorial = failures.is_empty();
    for (name, func, src, tgt) in [
        ("f", &f, c.a, &big2.cat),
        ("p", &p2, &big2.cat, c.a),
        ("s", &s, &big.cat, &big2.cat),
    ] {
        if let Err(e) = func.validate(src, tgt) {
            functorial = false;
            failures.push(format!("{}: {}", name, e));
        }
    }
    let homotopical = f.is_homotopical(c.a_weq, &big2.weq) && p2.is_homotopical(&big2.weq, c.a_weq) && s.is_homotopical(&big.weq, &big2.weq);
    if !homotopical {
        failures.push("a functor is not homotopical".into());
    }
    // components
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for x in 0..big.n_obj() {
        let i = &ins[x];
        let xs = big.seq(x);
        let a = hom_op(&xs, &i.seq, &i.old).and_then(|op| big2.mor_of(incl.obj[x], s.obj[x], &op));
        let fp = f.obj[p.obj[x]];
        let fps = big2.seq(fp);
        let bmap: Option<Vec<usize>> = fps.iter().map(|v| i.anchor.get(v).copied()).collect();
        let b = bmap.and_then(|m| hom_op(&fps, &i.seq, &m)).and_then(|op| big2.mor_of(fp, s.obj[x], &op));
        match (a, b) {
            (Some(a), Some(b)) => {
                alpha.push(a);
                beta.push(b);
            }
            _ => {
                failures.push(format!("component at {} undefined", big.cat.obj_name(x)));
                return Ok(report(kind, big, big2, false, homotopical, false, false, false, failures));
            }
        }
    }
    let components_weq = alpha.iter().chain(&beta).all(|&m| big2.weq[m]);
    if !components_weq {
        failures.push("a component is not a weak equivalence".into());
    }
    let fp = f.after(&p);
    let natural = (0..big.n_mor()).all(|m| {
        let (x, y) = (big.cat.src(m), big.cat.tgt(m));
        let sm = s.mor[m];
        big2.cat.compose(sm, alpha[x]) == big2.cat.compose(alpha[y], incl.mor[m])
            && big2.cat.compose(sm, beta[x]) == big2.cat.compose(beta[y], fp.mor[m])
    });
    if !natural {
        failures.push("naturality square fails".into());
    }
    let strict_identity = p2.after(&f) == Functor::identity(c.a);
    if !strict_identity {
        failures.push("p f is not the identity".into());
    }
    Ok(report(kind, big, big2, functorial, homotopical, natural, components_weq, strict_identity, failures))
}

#[allow(clippy::too_many_arguments)]
fn report(
    kind: WitnessKind,
    big: &FiltCategory,
    big2: &FiltCategory,
    functorial: bool,
    homotopical: bool,
    natural: bool,
    components_weq: bool,
    strict_identity: bool,
    failures: Vec<String>,
) -> WitnessReport {
    WitnessReport {
        kind,
        k: big.level.unwrap_or(0),
        k_prime: big2.level.unwrap_or(0),
        objects: big.n_obj(),
        morphisms: big.n_mor(),
        functorial,
        homotopical,
        natural,
        components_weq,
        strict_identity,
        all_weq: big.weq.iter().all(|&w| w),
        failures,
    }
}

/// Parameters of a witness: `m` for Dm-m and the sieve index for cone-filt;
/// `complex` for D-Sd.
#[derive(Clone, Debug, Default)]
pub struct WitnessParams {
    pub m: usize,
    pub complex: Option<MarkedComplex>,
}

/// Builds the functors of the chosen contraction on the truncations at `k`
/// and `k_prime` and checks them.
pub fn verify_retraction_witness(kind: WitnessKind, params: &WitnessParams, k: usize, k_prime: usize) -> Result<WitnessReport, DError> {
    match kind {
        WitnessKind::DmM => {
            let m = params.m;
            let d = FinSimplicialSet::standard(m);
            let big = FiltCategory::build(&d, k, &WeqPolicy::Generated)?;
            let big2 = FiltCategory::build(&d, k_prime, &WeqPolicy::Generated)?;
            let a = FinCategory::chain(m);
            let a_weq: Vec<bool> = (0..a.n_mor()).map(|f| a.is_identity(f)).collect();
            let f_seq = |i: Obj| (0..=i).collect::<Vec<_>>();
            let p_obj = |s: &[usize]| *s.last().unwrap();
            let s_seq = |s: &[usize]| insert_after_blocks(s, &(0..=*s.last().unwrap()).collect::<Vec<_>>());
            check_contraction(
                &Contraction { a: &a, a_weq: &a_weq, big: &big, big2: &big2, f_seq: &f_seq, p_obj: &p_obj, s_seq: &s_seq },
                kind,
            )
        }
        WitnessKind::E1 => {
            let e = FinCategory::free_iso();
            let n = FinSimplicialSet::nerve(&e, 2 * k_prime.max(k));
            let policy = WeqPolicy::Created { weq: vec![true; e.n_mor()], vertex_obj: vec![0, 1], cat: e };
            let big = FiltCategory::build(&n, k, &policy)?;
            let big2 = FiltCategory::build(&n, k_prime, &policy)?;
            let a = FinCategory::terminal();
            let a_weq = vec![true];
            let f_seq = |_: Obj| vec![0];
            let p_obj = |_: &[usize]| 0;
            let s_seq = |s: &[usize]| {
                let mut seq = s.to_vec();
                seq.push(0);
                let last = s.len();
                Insertion { seq, old: (0..s.len()).collect(), fresh: vec![last], anchor: HashMap::from([(0, last)]) }
            };
            check_contraction(
                &Contraction { a: &a, a_weq: &a_weq, big: &big, big2: &big2, f_seq: &f_seq, p_obj: &p_obj, s_seq: &s_seq },
                kind,
            )
        }
        WitnessKind::ConeFilt => {
            let d = FinSimplicialSet::standard(1);
            let j = FinCategory::chain(1);
            let policy = WeqPolicy::Created { weq: vec![true; j.n_mor()], vertex_obj: vec![0, 1], cat: j };
            let gen_vals: Vec<usize> = std::iter::repeat(0).take(params.m).chain([1]).collect();
            let top = d.cell_by_name("01").unwrap();
            let epi = if params.m == 0 { Op::new(0, vec![0]) } else { Op::new(1, gen_vals) };
            let generator = if params.m == 0 {
                Simplex::nd(d.cell_by_name("1").unwrap(), 0)
            } else {
                Simplex { cell: top, epi }
            };
            let big = FiltCategory::generated(&d, &[generator], &policy)?;
            let a = FinCategory::terminal();
            let a_weq = vec![true];
            let f_seq = |_: Obj| vec![1];
            let p_obj = |_: &[usize]| 0;
            let s_seq = |s: &[usize]| {
                let mut seq = s.to_vec();
                let mut fresh = Vec::new();
                if *s.last().unwrap() != 1 {
                    fresh.push(seq.len());
                    seq.push(1);
                }
                let last = seq.len() - 1;
                Insertion { seq, old: (0..s.len()).collect(), fresh, anchor: HashMap::from([(1, last)]) }
            };
            let mut r = check_contraction(
                &Contraction { a: &a, a_weq: &a_weq, big: &big, big2: &big, f_seq: &f_seq, p_obj: &p_obj, s_seq: &s_seq },
                kind,
            )?;
            r.k = params.m;
            r.k_prime = params.m;
            Ok(r)
        }
        WitnessKind::DSd => {
            let mc = params
                .complex
                .clone()
                .ok_or_else(|| DError::BadComplex("D-Sd needs a marked complex".into()))?;
            let big = mc.filt(k)?;
            let big2 = mc.filt(k_prime)?;
            let (a, a_weq, sets) = build_sd(&mc)?;
            let set_ix: HashMap<u32, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let n = mc.poset.n_obj();
            let f_seq = |i: Obj| (0..n).filter(|v| sets[i] >> v & 1 == 1).collect::<Vec<_>>();
            let p_obj = |s: &[usize]| set_ix[&s.iter().fold(0u32, |acc, &v| acc | 1 << v)];
            let s_seq = |s: &[usize]| {
                let mut present: Vec<usize> = s.to_vec();
                present.dedup();
                insert_after_blocks(s, &present)
            };
            check_contraction(
                &Contraction { a: &a, a_weq: &a_weq, big: &big, big2: &big2, f_seq: &f_seq, p_obj: &p_obj, s_seq: &s_seq },
                kind,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ops: &[Op]) -> Vec<String> {
        ops.iter().map(|o| o.word()).collect()
    }

    #[test]
    fn b_and_a_sets() {
        assert_eq!(words(&b_set(1, 0).unwrap()), vec!["000"]);
        assert_eq!(words(&b_set(2, 1).unwrap()), vec!["0001", "0111"]);
        assert_eq!(words(&b_set(2, 2).unwrap()), vec!["012"]);
        assert_eq!(b_set(1, 3), Err(DError::Empty(1, 3)));
        let mut a = words(&a_set(1, 1));
        a.sort();
        assert_eq!(a, vec!["000", "01", "111"]);
        assert_eq!(words(&a_set(0, 2)), vec!["0", "1", "2"]);
    }

    #[test]
    fn filt_counts() {
        let d0 = FinSimplicialSet::standard(0);
        let f = FiltCategory::build(&d0, 1, &WeqPolicy::Generated).unwrap();
        assert_eq!((f.n_obj(), f.n_mor()), (3, 11));
        let d1 = FinSimplicialSet::standard(1);
        let f = FiltCategory::build(&d1, 1, &WeqPolicy::Generated).unwrap();
        assert_eq!((f.n_obj(), f.n_mor()), (7, 25));
        let names: BTreeSet<&str> = f.cat.obj_names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["0", "1", "00", "11", "01", "000", "111"].into_iter().collect());
        assert!(f.degree_reflects_identities());
        assert!(f.cat.check_laws().is_empty());
    }

    #[test]
    fn transport_of_degeneracy() {
        let d1 = FinSimplicialSet::standard(1);
        let d0 = FinSimplicialSet::standard(0);
        let f1 = FiltCategory::build(&d1, 1, &WeqPolicy::Generated).unwrap();
        let f0 = FiltCategory::build(&d0, 1, &WeqPolicy::Generated).unwrap();
        let sigma = SMap { images: d1.cells().iter().map(|c| Simplex { cell: 0, epi: Op::constant(c.dim, 0, 0) }).collect() };
        let t = transport(&sigma, &f1, &f0).unwrap();
        t.validate(&f1.cat, &f0.cat).unwrap();
        assert!(t.is_homotopical(&f1.weq, &f0.weq));
        let name = |x: &str| f0.cat.obj_name(t.obj[f1.cat.obj_by_name(x).unwrap()]).to_string();
        assert_eq!(name("01"), "00");
        assert_eq!(name("111"), "000");
    }

    #[test]
    fn sd_examples() {
        let sd = |c: &MarkedComplex| build_sd(c).unwrap();
        let i = FinCategory::chain(1);
        let triv: Vec<bool> = (0..i.n_mor()).map(|f| i.is_identity(f)).collect();
        let (cat, weq, _) = sd(&MarkedComplex::full(i.clone(), triv));
        assert_eq!(cat.n_obj(), 3);
        // only <1> -> <0,1> has equal maxima
        let non_id: Vec<&str> = (0..cat.n_mor()).filter(|&f| weq[f] && !cat.is_identity(f)).map(|f| cat.mor_name(f)).collect();
        assert_eq!(non_id, vec!["<1>-><0,1>"]);
        let (cat, weq, _) = sd(&MarkedComplex::full(i.clone(), vec![true; i.n_mor()]));
        assert!(weq.iter().all(|&w| w) && cat.n_mor() == 5);
    }

    #[test]
    fn insertion_blocks() {
        let i = insert_after_blocks(&[0, 0, 2], &[0, 1, 2]);
        assert_eq!(i.seq, vec![0, 0, 0, 1, 2, 2]);
        assert_eq!(i.old, vec![0, 1, 4]);
        assert_eq!(i.anchor[&1], 3);
    }

    #[test]
    fn witnesses_pass() {
        let p = WitnessParams::default();
        let r = verify_retraction_witness(WitnessKind::DmM, &p, 1, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let r = verify_retraction_witness(WitnessKind::E1, &p, 1, 3).unwrap();
        assert!(r.passed() && r.all_weq, "{:?}", r.failures);
        let r = verify_retraction_witness(WitnessKind::ConeFilt, &WitnessParams { m: 2, complex: None }, 0, 0).unwrap();
        assert!(r.passed() && r.all_weq, "{:?}", r.failures);
        let i = FinCategory::chain(1);
        let triv: Vec<bool> = (0..i.n_mor()).map(|f| i.is_identity(f)).collect();
        let params = WitnessParams { m: 0, complex: Some(MarkedComplex::full(i, triv)) };
        let r = verify_retraction_witness(WitnessKind::DSd, &params, 1, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}
