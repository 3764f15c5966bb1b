//! On-disk formats: categories, simplicial sets, functors and diagrams.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cofib::cofcat::CofCategory;
use cofib::dconstr::{FiltCategory, WeqPolicy};
use cofib::fincat::{canonical_json, CategoryFile, FinCategory, Functor, SCHEMA_VERSION};
use cofib::simplicial::{seq_word, Cell, FinSimplicialSet, Op, Simplex};

/// Where inputs are looked up when a path does not exist.
pub struct Inputs {
    pub corpus_root: Option<PathBuf>,
    pub hashes: BTreeMap<String, String>,
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Inputs {
    pub fn new(corpus_root: Option<PathBuf>) -> Self {
        Inputs { corpus_root, hashes: BTreeMap::new() }
    }

    fn locate(&self, arg: &str) -> Result<PathBuf> {
        let p = Path::new(arg);
        if p.exists() {
            return Ok(p.to_path_buf());
        }
        if let Some(root) = &self.corpus_root {
            let q = root.join(arg);
            if q.exists() {
                return Ok(q);
            }
        }
        bail!("input {} not found", arg)
    }

    /// Reads a JSON input. `corpus:NAME` names a bundled category.
    pub fn read<T: for<'de> Deserialize<'de>>(&mut self, arg: &str) -> Result<T> {
        let text = if let Some(name) = arg.strip_prefix("corpus:") {
            let c = cofib::corpus::by_name(name).ok_or_else(|| anyhow!("unknown corpus instance {}", name))?;
            canonical_json(&c.to_file())
        } else {
            let path = self.locate(arg)?;
            std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
        };
        self.hashes.insert(arg.to_string(), sha256(text.as_bytes()));
        serde_json::from_str(&text).with_context(|| format!("parsing {}", arg))
    }

    pub fn category(&mut self, arg: &str) -> Result<CofCategory> {
        let file: CategoryFile = self.read(arg)?;
        check_version(file.schema_version, arg)?;
        CofCategory::from_file(&file).map_err(|e| anyhow!("{}: {}", arg, e))
    }

    pub fn sset(&mut self, arg: &str) -> Result<FinSimplicialSet> {
        let file: SsetFile = self.read(arg)?;
        check_version(file.schema_version, arg)?;
        file.to_sset()
    }

    pub fn functor(&mut self, arg: &str, src: &FinCategory, tgt: &FinCategory) -> Result<Functor> {
        let file: FunctorFile = self.read(arg)?;
        check_version(file.schema_version, arg)?;
        file.to_functor(src, tgt)
    }

    pub fn diagram(&mut self, arg: &str, level: usize) -> Result<Diagram> {
        let file: DiagramFile = self.read(arg)?;
        check_version(file.schema_version, arg)?;
        Diagram::from_file(&file, level)
    }
}

fn check_version(v: u32, arg: &str) -> Result<()> {
    if v != SCHEMA_VERSION {
        bail!("{}: schema_version {} unsupported (expected {})", arg, v, SCHEMA_VERSION);
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceEntry {
    pub cell: String,
    /// Positions collapsed by the degeneracy, empty for a nondegenerate face.
    #[serde(default)]
    pub collapsed: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellEntry {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<FaceEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsetFile {
    pub schema_version: u32,
    pub cells: Vec<CellEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

impl SsetFile {
    pub fn from_sset(k: &FinSimplicialSet) -> Self {
        let cells = k
            .cells()
            .iter()
            .map(|c| CellEntry {
                name: c.name.clone(),
                dim: c.dim,
                faces: c
                    .faces
                    .iter()
                    .map(|f| FaceEntry { cell: k.cell(f.cell).name.clone(), collapsed: f.epi.collapsed() })
                    .collect(),
            })
            .collect();
        SsetFile { schema_version: SCHEMA_VERSION, cells, cap: k.cap() }
    }

    pub fn to_sset(&self) -> Result<FinSimplicialSet> {
        let ix: BTreeMap<&str, usize> = self.cells.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
        if ix.len() != self.cells.len() {
            bail!("duplicate cell names");
        }
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let expected = if c.dim == 0 { 0 } else { c.dim + 1 };
            if c.faces.len() != expected {
                bail!("cell {} has {} faces, expected {}", c.name, c.faces.len(), expected);
            }
            let faces = c
                .faces
                .iter()
                .map(|f| {
                    let j = *ix.get(f.cell.as_str()).ok_or_else(|| anyhow!("unknown cell {}", f.cell))?;
                    let d = c.dim - 1;
                    if f.collapsed.iter().any(|&p| p >= d) {
                        bail!("face {} of {}: collapsed position out of range", f.cell, c.name);
                    }
                    let epi = Op::epi_from_collapsed(d, &f.collapsed);
                    if epi.tgt_dim() != self.cells[j].dim {
                        bail!("face {} of {} has the wrong dimension", f.cell, c.name);
                    }
                    Ok(Simplex { cell: j, epi })
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(Cell { name: c.name.clone(), dim: c.dim, faces });
        }
        let k = FinSimplicialSet::from_cells(cells, self.cap);
        k.check().map_err(|e| anyhow!("{}", e))?;
        Ok(k)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctorFile {
    pub schema_version: u32,
    pub obj: BTreeMap<String, String>,
    #[serde(default)]
    pub mor: BTreeMap<String, String>,
}

impl FunctorFile {
    pub fn from_functor(f: &Functor, src: &FinCategory, tgt: &FinCategory) -> Self {
        FunctorFile {
            schema_version: SCHEMA_VERSION,
            obj: (0..src.n_obj()).map(|x| (src.obj_name(x).into(), tgt.obj_name(f.obj[x]).into())).collect(),
            mor: (0..src.n_mor()).map(|m| (src.mor_name(m).into(), tgt.mor_name(f.mor[m]).into())).collect(),
        }
    }

    /// Morphisms may be omitted when the target is thin.
    pub fn to_functor(&self, src: &FinCategory, tgt: &FinCategory) -> Result<Functor> {
        let obj = (0..src.n_obj())
            .map(|x| {
                let n = self.obj.get(src.obj_name(x)).ok_or_else(|| anyhow!("object {} unmapped", src.obj_name(x)))?;
                tgt.obj_by_name(n).ok_or_else(|| anyhow!("unknown object {}", n))
            })
            .collect::<Result<Vec<_>>>()?;
        let mor = (0..src.n_mor())
            .map(|m| match self.mor.get(src.mor_name(m)) {
                Some(n) => tgt.mor_by_name(n).ok_or_else(|| anyhow!("unknown morphism {}", n)),
                None => tgt
                    .arrow(obj[src.src(m)], obj[src.tgt(m)])
                    .filter(|_| tgt.is_thin())
                    .ok_or_else(|| anyhow!("morphism {} unmapped", src.mor_name(m))),
            })
            .collect::<Result<Vec<_>>>()?;
        let f = Functor { obj, mor };
        f.validate(src, tgt).map_err(|e| anyhow!("not a functor: {}", e))?;
        Ok(f)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeSpec {
    Standard { m: usize },
    Horn { m: usize, i: usize },
    Sset { sset: SsetFile },
    /// The cone K * Δ^0.
    Cone { sset: SsetFile },
}

/// A diagram on filt{k, K} valued in a thin category.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramFile {
    pub schema_version: u32,
    pub category: CategoryFile,
    pub shape: ShapeSpec,
    /// Object name at each simplex, keyed by its encoding.
    pub values: BTreeMap<String, String>,
}

pub struct Diagram {
    pub c: CofCategory,
    pub shape: ShapeSpec,
    /// The K of the shape (for cones, K rather than the cone).
    pub k_set: FinSimplicialSet,
    pub base: FinSimplicialSet,
    pub filt: FiltCategory,
    pub x: Functor,
}

impl ShapeSpec {
    fn by_seq(&self) -> bool {
        matches!(self, ShapeSpec::Standard { .. } | ShapeSpec::Horn { .. })
    }

    /// (K, base) where base is K or its cone.
    pub fn base(&self) -> Result<(FinSimplicialSet, FinSimplicialSet)> {
        Ok(match self {
            ShapeSpec::Standard { m } => {
                let s = FinSimplicialSet::standard(*m);
                (s.clone(), s)
            }
            ShapeSpec::Horn { m, i } => {
                let h = FinSimplicialSet::horn(*m, &[*i]).map_err(|e| anyhow!("{}", e))?;
                (h.clone(), h)
            }
            ShapeSpec::Sset { sset } => {
                let k = sset.to_sset()?;
                (k.clone(), k)
            }
            ShapeSpec::Cone { sset } => {
                let k = sset.to_sset()?;
                let cone = FinSimplicialSet::join(&k, &FinSimplicialSet::standard(0));
                (k, cone)
            }
        })
    }
}

/// The key of an object of a filtration.
pub fn simplex_key(filt: &FiltCategory, o: usize, by_seq: bool) -> String {
    if by_seq {
        let s: Vec<u8> = filt.seq(o).into_iter().map(|v| v as u8).collect();
        seq_word(&s)
    } else {
        let x = &filt.objects[o];
        format!("{}:{}", filt.base.cell(x.cell).name, x.epi.word())
    }
}

impl Diagram {
    pub fn from_file(file: &DiagramFile, level: usize) -> Result<Self> {
        let c = CofCategory::from_file(&file.category).map_err(|e| anyhow!("{}", e))?;
        if !c.cat.is_thin() {
            bail!("diagram files require a thin target category");
        }
        let (k_set, base) = file.shape.base()?;
        let filt = FiltCategory::build(&base, level, &WeqPolicy::Generated).map_err(|e| anyhow!("{}", e))?;
        let by_seq = file.shape.by_seq();
        let mut obj = Vec::with_capacity(filt.n_obj());
        for o in 0..filt.n_obj() {
            let key = simplex_key(&filt, o, by_seq);
            let name = file.values.get(&key).ok_or_else(|| anyhow!("no value at {} (level {})", key, level))?;
            obj.push(c.cat.obj_by_name(name).ok_or_else(|| anyhow!("unknown object {}", name))?);
        }
        if file.values.len() != filt.n_obj() {
            bail!("{} values given, level {} has {} simplices", file.values.len(), level, filt.n_obj());
        }
        let mor = (0..filt.n_mor())
            .map(|m| {
                let (s, t) = (filt.cat.src(m), filt.cat.tgt(m));
                c.cat.arrow(obj[s], obj[t]).ok_or_else(|| {
                    anyhow!("no morphism {} -> {} for {}", c.cat.obj_name(obj[s]), c.cat.obj_name(obj[t]), filt.cat.mor_name(m))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Diagram { c, shape: file.shape.clone(), k_set, base, filt, x: Functor { obj, mor } })
    }
}

pub fn diagram_file(c: &CofCategory, shape: &ShapeSpec, filt: &FiltCategory, x: &Functor) -> DiagramFile {
    let by_seq = shape.by_seq();
    DiagramFile {
        schema_version: SCHEMA_VERSION,
        category: c.to_file(),
        shape: shape.clone(),
        values: (0..filt.n_obj()).map(|o| (simplex_key(filt, o, by_seq), c.cat.obj_name(x.obj[o]).to_string())).collect(),
    }
}

/// A category file for a bare category with markings.
pub fn category_file(cat: &FinCategory, weq: &[bool], cof: Option<&[bool]>, degree: Option<&[usize]>) -> CategoryFile {
    cofib::fincat::to_file(cat, Some(weq), cof, degree)
}
