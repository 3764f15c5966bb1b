//! Command implementations. Input and parameter problems are errors (exit 2);
//! failed properties are recorded as checks (exit 1).

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use cofib::cofcat::{self, check_axioms, check_exact, check_fibration, gluing_check, CofCategory, GluingOutcome};
use cofib::corpus;
use cofib::dconstr::{self, FiltCategory, MarkedComplex, WeqPolicy, WitnessKind, WitnessParams};
use cofib::fincat::{self, canonical_json, CategoryFile, FinCategory, Functor, Mor, Obj};
use cofib::frames::{self, ConeShape, Frame, FrameError, Nf};
use cofib::hocat::{self, compare, oracle_localization, HoCategory};
use cofib::par;
use cofib::quasicat;
use cofib::reedy::{self, DirectIndex, Factorization};
use cofib::simplicial::{self, FinSimplicialSet, Op, Simplex};

use crate::io::{category_file, diagram_file, Diagram, FunctorFile, ShapeSpec, SsetFile};
use crate::{CatCmd, CofcatCmd, CorpusCmd, Ctx, DsdCmd, FiltCmd, Group, HoCmd, NfCmd, QcCmd, ReedyCmd, SsetCmd, Suite, WitnessCmd};

const DEFAULT_BUDGET: usize = 1 << 20;

pub fn run(group: &Group, ctx: &mut Ctx) -> Result<()> {
    match group {
        Group::Cat(c) => cat(c, ctx),
        Group::Sset(c) => sset(c, ctx),
        Group::Qc(c) => qc(c, ctx),
        Group::Filt(c) => filt(c, ctx),
        Group::Dsd(c) => dsd(c, ctx),
        Group::Witness(c) => witness(c, ctx),
        Group::Cofcat(c) => cofcat_cmd(c, ctx),
        Group::Reedy(c) => reedy_cmd(c, ctx),
        Group::Ho(c) => ho(c, ctx),
        Group::Nf(c) => nf(c, ctx),
        Group::Corpus(c) => corpus_cmd(c, ctx),
        Group::Acceptance { suite } => acceptance(*suite, ctx),
    }
}

fn budget(ctx: &mut Ctx) -> usize {
    let b = ctx.budget.unwrap_or(DEFAULT_BUDGET);
    ctx.report.param("budget", b);
    b
}

fn obj_names(c: &FinCategory, objs: &[Obj]) -> Vec<String> {
    objs.iter().map(|&o| c.obj_name(o).to_string()).collect()
}

fn mor_names(c: &FinCategory, mors: &[Mor]) -> Vec<String> {
    mors.iter().map(|&m| c.mor_name(m).to_string()).collect()
}

fn simplex_name(k: &FinSimplicialSet, x: &Simplex) -> String {
    format!("{}:{}", k.cell(x.cell).name, x.epi.word())
}

fn cat(cmd: &CatCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        CatCmd::Check(a) => {
            let raw: CategoryFile = ctx.inputs.read(&a.file)?;
            match fincat::validate_category(&raw) {
                Ok(c) => {
                    ctx.report.check("laws", true, format!("{} objects, {} morphisms", c.n_obj(), c.n_mor()));
                    if let Err(e) = CofCategory::from_file(&raw) {
                        ctx.report.check("markings", false, e.to_string());
                    }
                    ctx.report.data("thin", c.is_thin());
                    ctx.report.data("direct", fincat::synthesize_degree(&c).is_ok());
                }
                Err(errs) => {
                    let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
                    ctx.report.check("laws", false, format!("{} violations", msgs.len()));
                    ctx.report.witness("laws", &msgs, None);
                }
            }
        }
        CatCmd::Degree(a) => {
            let raw: CategoryFile = ctx.inputs.read(&a.file)?;
            let c = fincat::validate_category(&raw).map_err(|e| anyhow!("invalid category: {:?}", e))?;
            let degree = match &raw.degree {
                Some(d) => {
                    let deg = (0..c.n_obj())
                        .map(|x| d.get(c.obj_name(x)).copied().ok_or_else(|| anyhow!("no degree for {}", c.obj_name(x))))
                        .collect::<Result<Vec<_>>>()?;
                    let r = fincat::check_degree(&c, &deg);
                    ctx.report.check("given degree", r.is_ok(), r.err().map(|e| e.to_string()).unwrap_or_default());
                    deg
                }
                None => match fincat::synthesize_degree(&c) {
                    Ok(d) => {
                        ctx.report.check("direct", true, "");
                        d
                    }
                    Err(e) => {
                        ctx.report.check("direct", false, e.to_string());
                        return Ok(());
                    }
                },
            };
            let map: BTreeMap<&str, usize> = (0..c.n_obj()).map(|x| (c.obj_name(x), degree[x])).collect();
            ctx.report.data("degree", map);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HornRow {
    m: usize,
    a: Vec<usize>,
    b: Vec<usize>,
    steps: usize,
    max_dim: usize,
    bound: usize,
    equal: bool,
    injective: bool,
}

fn horn_table(max_m: usize) -> Result<Vec<HornRow>> {
    let mut rows = Vec::new();
    for m in 0..=max_m {
        for (a, b) in simplicial::admissible_horn_pairs(m) {
            let steps = simplicial::decompose_generalized_horn(m, &a, &b)?;
            let r = simplicial::replay_horn_steps(m, &a, &b, &steps)?;
            rows.push(HornRow {
                m,
                bound: m - a.len(),
                max_dim: steps.iter().map(|s| s.dim).max().unwrap_or(0),
                steps: steps.len(),
                a,
                b,
                equal: r.equal,
                injective: r.injective,
            });
        }
    }
    Ok(rows)
}

fn horn_checks(ctx: &mut Ctx, max_m: usize) -> Result<()> {
    let rows = horn_table(max_m)?;
    let n = rows.len();
    for (name, bad) in [
        ("replay exact", rows.iter().filter(|r| !r.equal).count()),
        ("attachments injective", rows.iter().filter(|r| !r.injective).count()),
        ("step dimension within m - |A|", rows.iter().filter(|r| r.max_dim > r.bound).count()),
    ] {
        ctx.report.check(name, bad == 0, format!("{} of {} pairs violate", bad, n));
    }
    if let Some(r) = rows.iter().find(|r| !r.equal || !r.injective || r.max_dim > r.bound) {
        ctx.report.witness("horn decomposition", r, Some(format!("cofib sset horns --m {}", r.m)));
    }
    ctx.report.data("table", &rows);
    Ok(())
}

fn sset(cmd: &SsetCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        SsetCmd::Check(a) => {
            let file: SsetFile = ctx.inputs.read(&a.file)?;
            match file.to_sset() {
                Ok(k) => {
                    ctx.report.check("simplicial identities", true, format!("{} cells, dimension {}", k.n_cells(), k.dim()));
                    let per_dim: Vec<usize> = (0..=k.dim().max(0) as usize).map(|d| k.cells_of_dim(d).len()).collect();
                    ctx.report.data("cells_per_dim", per_dim);
                }
                Err(e) => {
                    ctx.report.check("simplicial identities", false, e.to_string());
                }
            }
        }
        SsetCmd::Join { a, b } => {
            let (k, l) = (ctx.inputs.sset(a)?, ctx.inputs.sset(b)?);
            let j = FinSimplicialSet::join(&k, &l);
            let r = j.check();
            ctx.report.check("simplicial identities", r.is_ok(), r.err().map(|e| e.to_string()).unwrap_or_default());
            ctx.report.data("cells", j.n_cells());
            ctx.report.data("join", SsetFile::from_sset(&j));
        }
        SsetCmd::Horns { m } => {
            ctx.report.param("m", m);
            horn_checks(ctx, *m)?;
        }
    }
    Ok(())
}

fn qc(cmd: &QcCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        QcCmd::Check(a) => {
            let q = ctx.inputs.sset(&a.file)?;
            let r = quasicat::is_quasicategory(&q, ctx.cap)?;
            ctx.report.check("inner horn lifting", r.holds, format!("{} problems, unique lifts: {}", r.problems, r.unique));
            if let Some(w) = &r.counterexample {
                ctx.report.witness("inner horn lifting", w, Some(format!("cofib qc check {} --cap {}", a.file, ctx.cap)));
            }
        }
        QcCmd::Ho(a) => {
            let q = ctx.inputs.sset(&a.file)?;
            let h = quasicat::homotopy_category(&q)?;
            let classes: BTreeMap<String, String> =
                h.class_of.iter().map(|(e, &m)| (simplex_name(&q, e), h.cat.mor_name(m).to_string())).collect();
            ctx.report.data("category", fincat::to_file(&h.cat, None, None, None));
            ctx.report.data("class_of", classes);
            ctx.report.data("closure_added", h.closure_added);
        }
        QcCmd::Universal { file, vertex } => {
            let q = ctx.inputs.sset(file)?;
            let v = q.cell_by_name(vertex).filter(|&v| q.cell(v).dim == 0).ok_or_else(|| anyhow!("no vertex {}", vertex))?;
            let r = quasicat::is_initial_vertex(&q, v, ctx.cap)?;
            ctx.report.data("initial", r);
        }
    }
    Ok(())
}

fn filt(cmd: &FiltCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        FiltCmd::Build(a) => {
            let k = ctx.inputs.sset(&a.file)?;
            let f = FiltCategory::build(&k, ctx.level, &WeqPolicy::Generated)?;
            ctx.report.check("degree reflects identities", f.degree_reflects_identities(), "");
            ctx.report.data("objects", f.n_obj());
            ctx.report.data("closure_added", f.closure_added());
            ctx.report.data("category", category_file(&f.cat, &f.weq, None, Some(&f.degree)));
        }
        FiltCmd::Degree(a) => {
            let k = ctx.inputs.sset(&a.file)?;
            let f = FiltCategory::build(&k, ctx.level, &WeqPolicy::Generated)?;
            let map: BTreeMap<String, usize> =
                f.objects.iter().map(|x| (simplex_name(&k, x), dconstr::filtration_degree(x))).collect();
            let ok = map.values().all(|&d| d <= ctx.level);
            ctx.report.check("degrees within the level", ok, "");
            ctx.report.data("degree", map);
        }
        FiltCmd::Bset { k, m } => {
            ctx.report.param("k", k);
            ctx.report.param("m", m);
            let words: Vec<String> = match dconstr::b_set(*k, *m) {
                Ok(v) => v.iter().map(Op::word).collect(),
                Err(dconstr::DError::Empty(..)) => Vec::new(),
                Err(e) => return Err(e.into()),
            };
            ctx.report.data("count", words.len());
            ctx.report.data("operators", words);
        }
        FiltCmd::Aset { k, m } => {
            ctx.report.param("k", k);
            ctx.report.param("m", m);
            let words: Vec<String> = dconstr::a_set(*k, *m).iter().map(Op::word).collect();
            ctx.report.data("count", words.len());
            ctx.report.data("operators", words);
        }
    }
    Ok(())
}

fn marked_poset(ctx: &mut Ctx, file: &str) -> Result<MarkedComplex> {
    let c = ctx.inputs.category(file)?;
    let n = c.cat.n_obj();
    for x in 0..n {
        for y in 0..n {
            if c.cat.hom(x, y).len() > 1 || (x > y && !c.cat.hom(x, y).is_empty()) {
                bail!("{}: objects must be a linearly extended poset", file);
            }
        }
    }
    Ok(MarkedComplex::full(c.cat, c.weq))
}

fn dsd(cmd: &DsdCmd, ctx: &mut Ctx) -> Result<()> {
    let DsdCmd::Build(a) = cmd;
    let m = marked_poset(ctx, &a.file)?;
    let (cat, weq, _) = dconstr::build_sd(&m)?;
    ctx.report.data("objects", cat.n_obj());
    ctx.report.data("category", category_file(&cat, &weq, None, None));
    Ok(())
}

fn witness(cmd: &WitnessCmd, ctx: &mut Ctx) -> Result<()> {
    let WitnessCmd::Verify { kind, m, complex } = cmd;
    let kind: WitnessKind = kind.parse().map_err(|e: String| anyhow!(e))?;
    let k_prime = ctx.budget.unwrap_or(3);
    ctx.report.param("budget", k_prime);
    ctx.report.param("m", m);
    let complex = match complex {
        Some(f) => Some(marked_poset(ctx, f)?),
        None => {
            let cat = FinCategory::chain(1);
            let weq = (0..cat.n_mor()).map(|f| cat.is_identity(f)).collect();
            Some(MarkedComplex::full(cat, weq))
        }
    };
    let params = WitnessParams { m: *m, complex };
    match dconstr::verify_retraction_witness(kind, &params, ctx.level, k_prime) {
        Ok(r) => {
            ctx.report.check("witness", r.passed(), r.failures.join("; "));
            ctx.report.data("report", &r);
        }
        Err(e @ dconstr::DError::LevelTooSmall(_)) => {
            ctx.report.check("witness", false, e.to_string());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn cofcat_cmd(cmd: &CofcatCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        CofcatCmd::Check(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let r = check_axioms(&c);
            for (name, res) in r.entries() {
                ctx.report.check(name, res.pass, res.witness.clone().unwrap_or_default());
                if let Some(w) = &res.witness {
                    ctx.report.witness(name, w, Some(format!("cofib cofcat check {}", a.file)));
                }
            }
        }
        CofcatCmd::Pullback { c, e, d, f, p } => {
            let (cc, ec, dc) = (ctx.inputs.category(c)?, ctx.inputs.category(e)?, ctx.inputs.category(d)?);
            let ff = ctx.inputs.functor(f, &cc.cat, &dc.cat)?;
            let pf = ctx.inputs.functor(p, &ec.cat, &dc.cat)?;
            match cofcat::pullback(&ff, &cc, &pf, &ec, &dc) {
                Ok(pb) => {
                    let r = check_axioms(&pb.cat);
                    ctx.report.check("pullback is a cofibration category", r.all_pass(), format!("{:?}", r.failures()));
                    ctx.report.data("category", pb.cat.to_file());
                    ctx.report.data("to_c", FunctorFile::from_functor(&pb.q, &pb.cat.cat, &cc.cat));
                    ctx.report.data("to_e", FunctorFile::from_functor(&pb.g, &pb.cat.cat, &ec.cat));
                }
                Err(err) => {
                    ctx.report.check("P is a fibration", false, err.to_string());
                }
            }
        }
        CofcatCmd::Pathobj(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let p = cofcat::path_object(&c);
            let r = check_axioms(&p.pc);
            ctx.report.check("P(C) axioms", r.all_pass(), format!("{:?}", r.failures()));
            let ex = check_exact(&p.diag, &c, &p.pc);
            ctx.report.check("diag exact", ex.exact(), ex.witness.clone().unwrap_or_default());
            let hc = hocat::homotopy_category(&c)?;
            let hp = hocat::homotopy_category(&p.pc)?;
            let w = hocat::is_weq_functor(&p.diag, &c, &p.pc, &hc, &hp);
            ctx.report.check("Ho(diag) equivalence", w.equivalence, "");
            let fr = check_fibration(&p.ev01, &p.pc, &p.cc);
            ctx.report.check("ev01 fibration", fr.is_fibration(), fr.witness.clone().unwrap_or_default());
            ctx.report.data("objects", p.pc.cat.n_obj());
            ctx.report.data("morphisms", p.pc.cat.n_mor());
            ctx.report.data("category", p.pc.to_file());
        }
        CofcatCmd::Fibration { e, d, p } => {
            let ec = ctx.inputs.category(e)?;
            let (dc, pf) = match (d, p) {
                (Some(d), Some(p)) => {
                    let dc = ctx.inputs.category(d)?;
                    let pf = ctx.inputs.functor(p, &ec.cat, &dc.cat)?;
                    (dc, pf)
                }
                (None, None) => cofcat::to_terminal(&ec),
                _ => bail!("give both D and P, or neither"),
            };
            let fr = check_fibration(&pf, &ec, &dc);
            ctx.report.check("fibration", fr.is_fibration(), fr.witness.clone().unwrap_or_default());
            ctx.report.check("lifting characterization agrees", fr.agrees(), format!("{:?}", fr.rlp));
            let ar = cofcat::check_acyclic_fibration(&pf, &ec, &dc)?;
            ctx.report.check("acyclic characterizations agree", ar.agrees(), "");
            ctx.report.data("fibration", &fr);
            ctx.report.data("acyclic", &ar);
        }
        CofcatCmd::Glue(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let cubes = cofcat::gluing_cubes(&c);
            let outcomes = par::map(&cubes, |cube| gluing_check(&c, cube));
            let mut bad = Vec::new();
            for (cube, o) in cubes.iter().zip(outcomes) {
                match o? {
                    GluingOutcome::Checked { weq: false, .. } => bad.push(*cube),
                    GluingOutcome::Checked { .. } => {}
                    GluingOutcome::HypothesisFailed(h) => bail!("generated cube fails a hypothesis: {}", h),
                }
            }
            ctx.report.check("gluing", bad.is_empty(), format!("{} cubes, {} counterexamples", cubes.len(), bad.len()));
            if let Some(cube) = bad.first() {
                ctx.report.witness("gluing", cube, None);
            }
        }
    }
    Ok(())
}

fn load_diagram(ctx: &mut Ctx, file: &str) -> Result<Diagram> {
    let level = ctx.level;
    ctx.inputs.diagram(file, level)
}

fn cocone_data(c: &CofCategory, cc: &fincat::Cocone) -> serde_json::Value {
    serde_json::json!({ "apex": c.cat.obj_name(cc.apex), "legs": mor_names(&c.cat, &cc.legs) })
}

fn reedy_cmd(cmd: &ReedyCmd, ctx: &mut Ctx) -> Result<()> {
    let file = match cmd {
        ReedyCmd::Check(a) | ReedyCmd::Colim(a) | ReedyCmd::Phi(a) | ReedyCmd::Factor(a) => &a.file,
    };
    let d = load_diagram(ctx, file)?;
    let idx = DirectIndex::from_filt(&d.filt);
    let (c, x) = (&d.c, &d.x);
    let cof = reedy::check_reedy_cofibrant(&idx, c, x);
    match cmd {
        ReedyCmd::Check(_) => {
            ctx.report.check("homotopical", reedy::is_homotopical(&idx, c, x), "");
            ctx.report.check("Reedy cofibrant", cof.is_ok(), cof.err().map(|e| e.to_string()).unwrap_or_default());
        }
        ReedyCmd::Colim(_) => {
            if !ctx.report.check("Reedy cofibrant", cof.is_ok(), cof.err().map(|e| e.to_string()).unwrap_or_default()) {
                return Ok(());
            }
            let r = reedy::reedy_colimit_checked(&idx, c, x, &vec![true; idx.n_obj()]);
            ctx.report.check("agrees with the direct colimit", r.is_ok(), r.as_ref().err().map(|e| e.to_string()).unwrap_or_default());
            if let Ok(cc) = r {
                ctx.report.data("colimit", cocone_data(c, &cc));
            }
        }
        ReedyCmd::Phi(_) => {
            if !ctx.report.check("Reedy cofibrant", cof.is_ok(), cof.err().map(|e| e.to_string()).unwrap_or_default()) {
                return Ok(());
            }
            let levels = (0..=ctx.level)
                .map(|k| FiltCategory::build(&d.base, k, &WeqPolicy::Generated))
                .collect::<Result<Vec<_>, _>>()?;
            let (cones, seq) = reedy::phi_sequence(&levels, c, x)?;
            ctx.report.data("phi", obj_names(&c.cat, &seq.objects));
            ctx.report.data("connecting", mor_names(&c.cat, &seq.connecting));
            ctx.report.data("stabilization", seq.stabilization);
            ctx.report.data("apex_legs", cones.iter().map(|cc| cocone_data(c, cc)).collect::<Vec<_>>());
        }
        ReedyCmd::Factor(_) => {
            if !ctx.report.check("Reedy cofibrant", cof.is_ok(), cof.err().map(|e| e.to_string()).unwrap_or_default()) {
                return Ok(());
            }
            let cat = &c.cat;
            let Some(t) = (0..cat.n_obj()).find(|&t| (0..cat.n_obj()).all(|y| cat.hom(y, t).len() == 1)) else {
                ctx.report.check("terminal object", false, "C has no terminal object");
                return Ok(());
            };
            let n = idx.n_obj();
            let y = Functor::constant(&d.filt.cat, cat, t);
            let f: Vec<Mor> = x.obj.iter().map(|&o| cat.hom(o, t)[0]).collect();
            let (tc, p) = cofcat::to_terminal(c);
            let over = Factorization { z: Functor::constant(&d.filt.cat, &tc.cat, 0), k: vec![0; n], s: vec![0; n] };
            match reedy::relative_factorization(&idx, c, &tc, &p, x, &y, &f, &vec![false; n], None, &over) {
                Ok(r) => {
                    let cofib = reedy::is_reedy_cofibration(&idx, c, x, &r.z, &r.k);
                    let weq = r.s.iter().all(|&s| c.weq[s]);
                    ctx.report.check("Reedy cofibration", cofib, "");
                    ctx.report.check("levelwise weak equivalence", weq, "");
                    ctx.report.data("z", diagram_file(c, &d.shape, &d.filt, &r.z).values);
                }
                Err(e) => {
                    ctx.report.check("factorization", false, e.to_string());
                }
            }
        }
    }
    Ok(())
}

fn ho_data(ctx: &mut Ctx, c: &CofCategory, h: &HoCategory) {
    ctx.report.data("category", fincat::to_file(&h.cat, None, None, None));
    ctx.report.data("loc", FunctorFile::from_functor(&h.loc, &c.cat, &h.cat).mor);
    ctx.report.data("hom_sizes", h.hom_sizes());
}

fn oracle_bound(ctx: &mut Ctx) -> Option<usize> {
    ctx.report.param("oracle_bound", ctx.oracle_bound);
    ctx.oracle_bound
}

fn ho(cmd: &HoCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        HoCmd::Compute(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let h = hocat::homotopy_category(&c)?;
            ho_data(ctx, &c, &h);
            ctx.report.data("closure_added", h.closure_added);
        }
        HoCmd::Oracle(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let bound = oracle_bound(ctx);
            match oracle_localization(&c.cat, &c.weq, bound) {
                Ok(h) => ho_data(ctx, &c, &h),
                Err(e @ hocat::HoError::BoundTooSmall { .. }) => {
                    ctx.report.check("oracle within bound", false, e.to_string());
                }
                Err(e) => return Err(e.into()),
            }
        }
        HoCmd::Compare(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let bound = oracle_bound(ctx);
            let h = hocat::homotopy_category(&c)?;
            let o = match oracle_localization(&c.cat, &c.weq, bound) {
                Ok(o) => o,
                Err(e @ hocat::HoError::BoundTooSmall { .. }) => {
                    ctx.report.check("oracle within bound", false, e.to_string());
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            let r = compare(&h, &o);
            ctx.report.check("isomorphic", r.isomorphic, r.witness.clone().unwrap_or_default());
            if r.isomorphic {
                ctx.report.witness("isomorphic", "identity on objects, each fraction sent to its zig-zag", None);
            }
            ctx.report.data("hom_sizes", &r.hom_sizes_a);
            ctx.report.data("oracle_hom_sizes", &r.hom_sizes_b);
        }
        HoCmd::Weqfunctor { c, d, f } => {
            let (cc, dc) = (ctx.inputs.category(c)?, ctx.inputs.category(d)?);
            let ff = ctx.inputs.functor(f, &cc.cat, &dc.cat)?;
            let (hc, hd) = (hocat::homotopy_category(&cc)?, hocat::homotopy_category(&dc)?);
            let r = hocat::is_weq_functor(&ff, &cc, &dc, &hc, &hd);
            ctx.report.check("approximation properties agree", r.agrees(), "");
            ctx.report.data("report", &r);
        }
    }
    Ok(())
}

fn build_nf(ctx: &mut Ctx, c: &CofCategory) -> Result<Nf> {
    let b = budget(ctx);
    Ok(Nf::build(c, ctx.level, ctx.cap, b)?)
}

fn frame_of(d: &Diagram, m: usize) -> Frame {
    Frame { m, obj: d.x.obj.clone(), mor: Vec::new() }
}

fn standard_m(d: &Diagram) -> Result<usize> {
    match d.shape {
        ShapeSpec::Standard { m } => Ok(m),
        _ => bail!("expected a diagram on a standard simplex"),
    }
}

fn nf(cmd: &NfCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        NfCmd::Enum(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let nf = build_nf(ctx, &c)?;
            let counts: Vec<usize> = nf.frames.iter().map(Vec::len).collect();
            let cells: Vec<usize> = (0..=nf.cap).map(|d| nf.sset.cells_of_dim(d).len()).collect();
            ctx.report.data("frames_per_dim", counts);
            ctx.report.data("nondegenerate_per_dim", cells);
        }
        NfCmd::Act { file, op } => {
            let d = load_diagram(ctx, file)?;
            let m = standard_m(&d)?;
            let vals: Vec<usize> = op.chars().map(|ch| ch.to_digit(10).map(|v| v as usize)).collect::<Option<_>>()
                .ok_or_else(|| anyhow!("operator {} is not a digit word", op))?;
            if vals.is_empty() || vals.windows(2).any(|w| w[0] > w[1]) || vals.iter().any(|&v| v > m) {
                bail!("{} is not a monotone map into [{}]", op, m);
            }
            let chi = Op::new(m, vals);
            let n = chi.src_dim();
            let small = FiltCategory::build(&FinSimplicialSet::standard(n), ctx.level, &WeqPolicy::Generated)?;
            let t = dconstr::transport(&simplicial::operator_map(&chi), &small, &d.filt)?;
            let y = d.x.after(&t);
            let idx = DirectIndex::from_filt(&small);
            ctx.report.check("result is a frame", reedy::is_homotopical(&idx, &d.c, &y) && reedy::is_reedy_cofibrant(&idx, &d.c, &y), "");
            ctx.report.data("frame", diagram_file(&d.c, &ShapeSpec::Standard { m: n }, &small, &y));
        }
        NfCmd::Fill(a) => {
            let d = load_diagram(ctx, &a.file)?;
            let (m, i) = match d.shape {
                ShapeSpec::Horn { m, i } => (m, i),
                _ => bail!("expected a diagram on a horn"),
            };
            let k_prime = ctx.budget.unwrap_or(ctx.level);
            ctx.report.param("budget", k_prime);
            if k_prime < ctx.level {
                bail!("filler level {} below the level {}", k_prime, ctx.level);
            }
            match frames::fill_inner_horn(&d.c, m, i, ctx.level, &d.x, k_prime) {
                Ok(f) => {
                    ctx.report.check("filler", true, format!("filled at level {}", k_prime));
                    let big = FiltCategory::build(&FinSimplicialSet::standard(m), k_prime, &WeqPolicy::Generated)?;
                    let fx = Functor { obj: f.obj.clone(), mor: Vec::new() };
                    let values = diagram_file(&d.c, &ShapeSpec::Standard { m }, &big, &fx).values;
                    ctx.report.data("filler", values);
                }
                Err(e @ FrameError::NoFillerAtBudget(_)) => {
                    ctx.report.check("filler", false, format!("NoFillerAtBudget: {}", e));
                    ctx.report.witness("filler", serde_json::json!({ "horn": [m, i], "level": ctx.level, "budget": k_prime }), Some(format!(
                        "cofib nf fill {} --level {} --budget {}",
                        a.file, ctx.level, k_prime
                    )));
                }
                Err(e) => return Err(e.into()),
            }
        }
        NfCmd::Init(a) => {
            let d = load_diagram(ctx, &a.file)?;
            if standard_m(&d)? != 0 {
                bail!("expected a vertex frame");
            }
            let nf = build_nf(ctx, &d.c)?;
            let v = frame_of(&d, 0);
            let shape = ConeShape::new(&FinSimplicialSet::empty(), ctx.level)?;
            let (_, x) = frames::vertex_cone(&nf, &shape, &v)?;
            let by_phi = shape.verdict(&d.c, &x)?.universal;
            let formula = frames::is_initial_frame(&nf, &v)?;
            let cell = nf.simplex(&v).ok_or_else(|| anyhow!("not a frame"))?.cell;
            let def = quasicat::is_initial_vertex(&nf.sset, cell, ctx.cap)?;
            ctx.report.check("formula agrees with Φ", formula == by_phi, "");
            ctx.report.check("definitional agrees with Φ", def == by_phi, format!("through dimension {}", ctx.cap));
            ctx.report.data("initial", by_phi);
        }
        NfCmd::Push { upper, lower } => {
            let du = load_diagram(ctx, upper)?;
            let dl = load_diagram(ctx, lower)?;
            if standard_m(&du)? != 2 || standard_m(&dl)? != 2 {
                bail!("expected two 2-frames");
            }
            let nf = build_nf(ctx, &du.c)?;
            let (u, l) = (frame_of(&du, 2), frame_of(&dl, 2));
            let shape = ConeShape::new(&frames::span_sset(), ctx.level)?;
            let formula = frames::is_pushout_square(&nf, &u, &l)?;
            let (map, x) = frames::square_cone(&nf, &shape, &u, &l)?;
            let by_phi = shape.verdict(&du.c, &x)?.universal;
            ctx.report.check("formula agrees with Φ", formula == by_phi, "");
            if ctx.cap >= 3 {
                let r = quasicat::is_universal_cone(&shape.k_set, &nf.sset, &map, ctx.cap - 2)?;
                ctx.report.check("definitional agrees with Φ", r.universal == by_phi, format!("through dimension {}", ctx.cap - 2));
            }
            ctx.report.data("pushout", by_phi);
        }
        NfCmd::Universal(a) => {
            let d = load_diagram(ctx, &a.file)?;
            if !matches!(d.shape, ShapeSpec::Cone { .. }) {
                bail!("expected a diagram on a cone");
            }
            let v = frames::is_universal_cone_frame(&d.c, &d.k_set, ctx.level, &d.x)?;
            let need = (d.k_set.dim() + 2) as usize;
            if ctx.cap >= need {
                let nf = build_nf(ctx, &d.c)?;
                let map = frames::represent(&nf, &d.base, &d.filt, &d.x)?;
                let r = quasicat::is_universal_cone(&d.k_set, &nf.sset, &map, ctx.cap - need + 1)?;
                ctx.report.check("definitional agrees with Φ", r.universal == v.universal, format!("through dimension {}", ctx.cap - need + 1));
            }
            ctx.report.data("comparisons", mor_names(&d.c.cat, &v.comparisons));
            ctx.report.data("universal", v.universal);
        }
        NfCmd::Theta(a) => {
            let c = ctx.inputs.category(&a.file)?;
            let nf = build_nf(ctx, &c)?;
            let qho = frames::nf_homotopy_category(&nf)?;
            let ho = hocat::homotopy_category(&c)?;
            let (_, r) = frames::theta(&nf, &qho, &ho)?;
            for (name, ok) in [
                ("well defined", r.well_defined),
                ("functorial", r.functorial),
                ("essentially surjective", r.essentially_surjective),
                ("full", r.full),
                ("faithful", r.faithful),
            ] {
                ctx.report.check(name, ok, "");
            }
            ctx.report.data("theta", &r);
        }
        NfCmd::DgrmWeq { file, sub } => {
            let d = load_diagram(ctx, file)?;
            if !matches!(d.shape, ShapeSpec::Sset { .. }) {
                bail!("expected a diagram on a simplicial set");
            }
            let k = ctx.inputs.sset(sub)?;
            let g = simplicial::inclusion_by_names(&k, &d.base).ok_or_else(|| anyhow!("{} is not a subcomplex by names", sub))?;
            let r = frames::dgrm_weq(&d.c, &k, &d.base, &g, &d.x, ctx.level)?;
            ctx.report.data("comparisons", mor_names(&d.c.cat, &r.comparisons));
            ctx.report.data("stabilization", r.stabilization);
            ctx.report.data("weq", r.weq);
        }
        NfCmd::Horns { file, m, i, emit } => {
            let c = ctx.inputs.category(file)?;
            ctx.report.param("m", m);
            ctx.report.param("i", i);
            let b = budget(ctx);
            let problems = frames::horn_problems(&c, *m, *i, ctx.level, b)?;
            let level = ctx.level;
            let filled = par::map(&problems, |p| frames::fill_inner_horn(&c, *m, *i, level, p, level));
            let mut unfilled = Vec::new();
            for (p, r) in problems.iter().zip(filled) {
                match r {
                    Ok(_) => {}
                    Err(FrameError::NoFillerAtBudget(_)) => unfilled.push(p),
                    Err(e) => return Err(e.into()),
                }
            }
            ctx.report.check(
                "horns fill at the level",
                unfilled.is_empty(),
                format!("{} problems, {} unfilled", problems.len(), unfilled.len()),
            );
            if let Some(p) = unfilled.first() {
                let horn = FinSimplicialSet::horn(*m, &[*i])?;
                let small = FiltCategory::build(&horn, level, &WeqPolicy::Generated)?;
                let df = diagram_file(&c, &ShapeSpec::Horn { m: *m, i: *i }, &small, p);
                let target = match emit {
                    Some(path) => {
                        std::fs::write(path, canonical_json(&df) + "\n")?;
                        path.display().to_string()
                    }
                    None => "<witness.json>".to_string(),
                };
                let replay = format!("cofib nf fill {} --level {} --budget {}", target, level, level);
                ctx.report.witness("horns fill at the level", &df, Some(replay));
            }
        }
    }
    Ok(())
}

fn corpus_cmd(cmd: &CorpusCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        CorpusCmd::List => {
            let mut rows = BTreeMap::new();
            for name in corpus::NAMES.iter().chain(["nolub_all"].iter()) {
                let c = corpus::by_name(name).unwrap();
                rows.insert(name.to_string(), (c.cat.n_obj(), c.cat.n_mor()));
            }
            ctx.report.data("instances", rows);
        }
        CorpusCmd::Export { name, out } => {
            let c = corpus::by_name(name).ok_or_else(|| anyhow!("unknown corpus instance {}", name))?;
            let file = c.to_file();
            match out {
                Some(p) => {
                    std::fs::write(p, canonical_json(&file) + "\n")?;
                    ctx.report.data("written", p.display().to_string());
                }
                None => ctx.report.data("category", file),
            }
        }
    }
    Ok(())
}

fn odd_compositions(n: usize, parts: usize) -> usize {
    let mut ways = vec![vec![0usize; n + 1]; parts + 1];
    ways[0][0] = 1;
    for p in 1..=parts {
        for s in 0..=n {
            ways[p][s] = (1..=s).step_by(2).map(|x| ways[p - 1][s - x]).sum();
        }
    }
    ways[parts][n]
}

fn acceptance(suite: Suite, ctx: &mut Ctx) -> Result<()> {
    ctx.report.param("suite", format!("{:?}", suite).to_lowercase());
    match suite {
        Suite::Horns => horn_checks(ctx, 4),
        Suite::Core => {
            let insts = corpus::instances();
            let axioms = par::map(&insts, |i| check_axioms(&i.c));
            for (inst, r) in insts.iter().zip(&axioms) {
                ctx.report.check(&format!("axioms {}", inst.name), r.all_pass(), format!("{:?}", r.failures()));
            }
            for m in corpus::mutations() {
                let r = check_axioms(&m.c);
                let ok = r.failures() == m.expected && r.entries().iter().all(|(_, a)| a.pass || a.witness.is_some());
                ctx.report.check(&format!("mutation {}", m.name), ok, r.failures().join(", "));
            }
            for g in corpus::gluing_controls() {
                let ok = matches!(gluing_check(&g.c, &g.cube), Ok(GluingOutcome::HypothesisFailed(ref h)) if h.contains(g.hypothesis));
                ctx.report.check(&format!("gluing control {}", g.name), ok, g.hypothesis);
            }
            let lab = corpus::lattice(&["a", "b"], true);
            let bad = cofcat::gluing_cubes(&lab)
                .iter()
                .filter(|cube| !matches!(gluing_check(&lab, cube), Ok(GluingOutcome::Checked { weq: true, .. })))
                .count();
            ctx.report.check("gluing lab_all", bad == 0, format!("{} counterexamples", bad));
            for inst in insts.iter().filter(|i| i.c.cat.n_obj() <= 5) {
                let bound = if inst.name == "chain_w12" { Some(20) } else { None };
                let ho = hocat::homotopy_category(&inst.c)?;
                let ok = match oracle_localization(&inst.c.cat, &inst.c.weq, bound) {
                    Ok(o) => compare(&ho, &o).isomorphic,
                    Err(_) => false,
                };
                ctx.report.check(&format!("localization {}", inst.name), ok, "");
            }
            let mut counts_ok = true;
            for k in 0..=4 {
                for m in 0..=3 {
                    let got = dconstr::b_set(k, m).map(|v| v.len()).unwrap_or(0);
                    let want = if 2 * k < m { 0 } else { odd_compositions(2 * k - m + 1, m + 1) };
                    counts_ok &= got == want;
                }
            }
            ctx.report.check("B-set counts", counts_ok, "k <= 4, m <= 3");
            let t = corpus::terminal();
            let mut ok = true;
            for k in 0..=2 {
                let nf = Nf::build(&t, k, 3, 10)?;
                ok &= nf.frames.iter().all(|f| f.len() == 1);
                for m in 2..=3 {
                    for i in 1..m {
                        for p in frames::horn_problems(&t, m, i, k, 10)? {
                            ok &= frames::fill_inner_horn(&t, m, i, k, &p, k).is_ok();
                        }
                    }
                }
            }
            ctx.report.check("terminal frames", ok, "one frame per dimension, horns fill at their level");
            Ok(())
        }
    }
}
