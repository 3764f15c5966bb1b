use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cofib::cofcat::{
    check_axioms, check_exact, check_fibration, gluing_check, gluing_cubes, path_object, GluingOutcome,
};
use cofib::corpus;
use cofib::dconstr::{b_set, transport, verify_retraction_witness, FiltCategory, MarkedComplex, WeqPolicy, WitnessKind, WitnessParams};
use cofib::fincat::{FinCategory, Functor};
use cofib::frames::{self, ConeShape, Frame, Nf};
use cofib::hocat::{self, compare, is_weq_functor, oracle_localization};
use cofib::quasicat;
use cofib::reedy::{enumerate_diagrams, PhiLevels};
use cofib::simplicial::{
    admissible_horn_pairs, decompose_generalized_horn, find_isomorphism, operator_map, replay_horn_steps,
    FinSimplicialSet, Op,
};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn iso(a: &FinSimplicialSet, b: &FinSimplicialSet) -> bool {
    let n = a.vertices().len();
    n == b.vertices().len() && find_isomorphism(a, b, &(0..n).collect::<Vec<_>>()).is_some()
}

fn join_laws() -> Result<String, String> {
    let mut checks = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            let j = FinSimplicialSet::join(&FinSimplicialSet::standard(a), &FinSimplicialSet::standard(b));
            ensure(iso(&j, &FinSimplicialSet::standard(a + b + 1)), || format!("Δ^{} * Δ^{}", a, b))?;
            checks += 1;
        }
    }
    let empty = FinSimplicialSet::empty();
    let mut samples: Vec<FinSimplicialSet> = (0..=3).map(FinSimplicialSet::standard).collect();
    samples.extend((1..=3).map(FinSimplicialSet::boundary));
    samples.push(FinSimplicialSet::horn(2, &[1]).map_err(e)?);
    for k in &samples {
        ensure(iso(&FinSimplicialSet::join(&empty, k), k), || "left unit".into())?;
        ensure(iso(&FinSimplicialSet::join(k, &empty), k), || "right unit".into())?;
        checks += 2;
    }
    for x in &samples {
        for y in &samples {
            for z in &samples {
                if x.dim() + y.dim() + z.dim() + 2 > 6 {
                    continue;
                }
                let l = FinSimplicialSet::join(&FinSimplicialSet::join(x, y), z);
                let r = FinSimplicialSet::join(x, &FinSimplicialSet::join(y, z));
                ensure(iso(&l, &r), || format!("associativity at dims {} {} {}", x.dim(), y.dim(), z.dim()))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{} isomorphisms", checks))
}

fn horn_decomposition() -> Result<String, String> {
    let (mut pairs, mut over) = (0, Vec::new());
    for m in 0..=4 {
        for (a, b) in admissible_horn_pairs(m) {
            let steps = decompose_generalized_horn(m, &a, &b).map_err(e)?;
            let r = replay_horn_steps(m, &a, &b, &steps).map_err(e)?;
            ensure(r.equal && r.injective, || format!("replay m={} A={:?} B={:?}: {:?}", m, a, b, r))?;
            if r.max_dim > m.saturating_sub(a.len()) {
                over.push(format!("m={} A={:?} B={:?} step dim {}", m, a, b, r.max_dim));
            }
            pairs += 1;
        }
    }
    if over.is_empty() {
        Ok(format!("{} pairs replay exactly", pairs))
    } else {
        Err(format!(
            "{} pairs replay exactly and injectively, but {} exceed the step bound m - |A| (first: {})",
            pairs,
            over.len(),
            over[0]
        ))
    }
}

fn filt_transport() -> Result<String, String> {
    let mut checks = 0;
    for k in 0..=2 {
        let lv: Vec<FiltCategory> = (0..=3)
            .map(|m| FiltCategory::build(&FinSimplicialSet::standard(m), k, &WeqPolicy::Generated))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let mut t: HashMap<Op, Functor> = HashMap::new();
        for m in 0..=3 {
            for n in 0..=3 {
                for chi in Op::all_monotone(m, n) {
                    let f = transport(&operator_map(&chi), &lv[m], &lv[n]).map_err(e)?;
                    f.validate(&lv[m].cat, &lv[n].cat).map_err(|w| format!("k={} {}: {}", k, chi.word(), w))?;
                    t.insert(chi, f);
                }
            }
        }
        for (chi, f) in &t {
            for (psi, g) in &t {
                if psi.src_dim() == chi.tgt_dim() {
                    ensure(t[&psi.compose(chi)] == g.after(f), || format!("k={} {} . {}", k, psi.word(), chi.word()))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{} composites", checks))
}

fn odd_compositions(n: usize, parts: usize) -> usize {
    // ways[p][s]: p odd parts summing to s
    let mut ways = vec![vec![0usize; n + 1]; parts + 1];
    ways[0][0] = 1;
    for p in 1..=parts {
        for s in 0..=n {
            ways[p][s] = (1..=s).step_by(2).map(|x| ways[p - 1][s - x]).sum();
        }
    }
    ways[parts][n]
}

fn b_sets() -> Result<String, String> {
    for (k, m, n) in [(2, 1, 2), (2, 2, 1), (3, 1, 3)] {
        let got = b_set(k, m).map_err(e)?.len();
        ensure(got == n, || format!("|B_{},{}| = {}, expected {}", k, m, got, n))?;
    }
    let mut checks = 0;
    for k in 0..=4 {
        for m in 0..=3 {
            let got = b_set(k, m).map(|v| v.len()).unwrap_or(0);
            let want = if 2 * k < m { 0 } else { odd_compositions(2 * k - m + 1, m + 1) };
            ensure(got == want, || format!("|B_{},{}| = {}, enumerator {}", k, m, got, want))?;
            checks += 1;
        }
    }
    Ok(format!("{} counts", checks))
}

fn localization() -> Result<String, String> {
    let mut names = Vec::new();
    for inst in corpus::instances() {
        if inst.c.cat.n_obj() > 5 {
            continue;
        }
        let bound = if inst.name == "chain_w12" { Some(20) } else { None };
        let ho = hocat::homotopy_category(&inst.c).map_err(e)?;
        let or = oracle_localization(&inst.c.cat, &inst.c.weq, bound).map_err(e)?;
        let r = compare(&ho, &or);
        ensure(r.isomorphic, || format!("{}: {:?}", inst.name, r.witness))?;
        match inst.name {
            "lab_all" => ensure(ho.cat.n_mor() == 16 && ho.hom_sizes().iter().all(|&h| h == 1), || "lab_all".into())?,
            "chain_w12" => ensure(ho.hom_sizes() == vec![1, 1, 1, 0, 1, 1, 0, 1, 1], || "chain_w12".into())?,
            _ => {}
        }
        names.push(inst.name);
    }
    Ok(format!("isomorphic on {}", names.join(", ")))
}

fn axiom_suite() -> Result<String, String> {
    for inst in corpus::instances() {
        let r = check_axioms(&inst.c);
        ensure(r.all_pass(), || format!("{} fails {:?}", inst.name, r.failures()))?;
    }
    let ms = corpus::mutations();
    for m in &ms {
        let r = check_axioms(&m.c);
        ensure(r.failures() == m.expected, || format!("{}: {:?}", m.name, r.failures()))?;
        ensure(r.entries().iter().all(|(_, a)| a.pass || a.witness.is_some()), || format!("{}: no witness", m.name))?;
    }
    Ok(format!("{} instances pass, {} mutations localized", corpus::NAMES.len(), ms.len()))
}

fn path_objects() -> Result<String, String> {
    let mut out = Vec::new();
    for atoms in [&["a"][..], &["a", "b"][..]] {
        let c = corpus::lattice(atoms, true);
        let p = path_object(&c);
        let r = check_axioms(&p.pc);
        ensure(r.all_pass(), || format!("P(C) fails {:?}", r.failures()))?;
        ensure(check_exact(&p.diag, &c, &p.pc).exact(), || "diag not exact".into())?;
        let hc = hocat::homotopy_category(&c).map_err(e)?;
        let hp = hocat::homotopy_category(&p.pc).map_err(e)?;
        ensure(is_weq_functor(&p.diag, &c, &p.pc, &hc, &hp).equivalence, || "Ho(diag) not an equivalence".into())?;
        ensure(check_fibration(&p.ev01, &p.pc, &p.cc).is_fibration(), || "ev01 not a fibration".into())?;
        out.push(format!("|P(C)| = {}", p.pc.cat.n_obj()));
    }
    Ok(out.join(", "))
}

fn terminal_frames() -> Result<String, String> {
    let t = corpus::terminal();
    let mut problems = 0;
    for k in 0..=2 {
        let nf = Nf::build(&t, k, 3, 10).map_err(e)?;
        ensure(nf.frames.iter().all(|f| f.len() == 1), || format!("k={}: {:?}", k, nf.frames.iter().map(Vec::len).collect::<Vec<_>>()))?;
        for m in 2..=3 {
            for i in 1..m {
                for p in frames::horn_problems(&t, m, i, k, 10).map_err(e)? {
                    frames::fill_inner_horn(&t, m, i, k, &p, k).map_err(e)?;
                    problems += 1;
                }
            }
        }
    }
    Ok(format!("{} horn problems filled at their own level", problems))
}

fn square_pairs(nf: &Nf) -> HashMap<Frame, Vec<usize>> {
    let mut by_diag: HashMap<Frame, Vec<usize>> = HashMap::new();
    for (i, f) in nf.frames[2].iter().enumerate() {
        by_diag.entry(nf.act(f, &Op::coface(2, 1))).or_default().push(i);
    }
    by_diag
}

fn colimit_criteria() -> Result<String, String> {
    let mut report = Vec::new();
    let pt = ConeShape::new(&FinSimplicialSet::empty(), 2).map_err(e)?;
    let span = ConeShape::new(&frames::span_sset(), 2).map_err(e)?;
    for name in ["la_all", "la_id", "lab_id", "chain_w12"] {
        let c = corpus::by_name(name).unwrap();
        let nf = Nf::build(&c, 2, 2, 1 << 20).map_err(e)?;
        let mut initial = 0;
        for v in &nf.frames[0] {
            let (_, x) = frames::vertex_cone(&nf, &pt, v).map_err(e)?;
            let by_phi = pt.verdict(&c, &x).map_err(e)?.universal;
            let formula = frames::is_initial_frame(&nf, v).map_err(e)?;
            let def = quasicat::is_initial_vertex(&nf.sset, nf.simplex(v).unwrap().cell, 2).map_err(e)?;
            ensure(formula == by_phi && def == by_phi, || format!("{} vertex {:?}: {} {} {}", name, v.obj, formula, by_phi, def))?;
            initial += by_phi as usize;
        }
        let (mut squares, mut pushouts) = (0, 0);
        let mut check = |nf: &Nf, u: &Frame, l: &Frame, definitional: bool| -> Result<(), String> {
            let (map, x) = frames::square_cone(nf, &span, u, l).map_err(e)?;
            let by_phi = span.verdict(&c, &x).map_err(e)?.universal;
            let formula = frames::is_pushout_square(nf, u, l).map_err(e)?;
            ensure(formula == by_phi, || format!("{} square {:?} {:?}", name, u.obj, l.obj))?;
            if definitional {
                let def = quasicat::is_universal_cone(&span.k_set, &nf.sset, &map, 2).map_err(e)?;
                ensure(def.universal == by_phi && def.via_slice == by_phi, || format!("{} square (definitional)", name))?;
            }
            squares += 1;
            pushouts += by_phi as usize;
            Ok(())
        };
        let mode = if matches!(name, "la_id" | "lab_id") {
            let nf4 = Nf::build(&c, 2, 4, 1 << 20).map_err(e)?;
            for group in square_pairs(&nf4).values() {
                for &u in group {
                    for &l in group {
                        check(&nf4, &nf4.frames[2][u], &nf4.frames[2][l], true)?;
                    }
                }
            }
            "exhaustive, definitional"
        } else {
            let groups = square_pairs(&nf);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let n2 = nf.frames[2].len();
            for _ in 0..1500 {
                let u = &nf.frames[2][rng.gen_range(0..n2)];
                let g = &groups[&nf.act(u, &Op::coface(2, 1))];
                let l = &nf.frames[2][g[rng.gen_range(0..g.len())]];
                check(&nf, u, l, false)?;
            }
            "sampled"
        };
        report.push(format!(
            "{}: {}/{} initial, {}/{} pushout squares ({})",
            name,
            initial,
            nf.frames[0].len(),
            pushouts,
            squares,
            mode
        ));
    }
    Ok(report.join("; "))
}

fn theta() -> Result<String, String> {
    let mut report = Vec::new();
    for name in ["terminal", "la_all", "la_id", "lab_id", "chain_w12"] {
        let c = corpus::by_name(name).unwrap();
        let nf = Nf::build(&c, 2, 2, 1 << 20).map_err(e)?;
        let qho = frames::nf_homotopy_category(&nf).map_err(e)?;
        let ho = hocat::homotopy_category(&c).map_err(e)?;
        let (fun, r) = frames::theta(&nf, &qho, &ho).map_err(e)?;
        ensure(r.equivalence(), || format!("{}: {:?}", name, r))?;
        if name == "la_all" {
            let indiscrete = |cat: &FinCategory| {
                (0..cat.n_obj()).all(|a| (0..cat.n_obj()).all(|b| cat.hom(a, b).len() == 1))
            };
            let mut hit: Vec<usize> = fun.obj.clone();
            hit.sort();
            hit.dedup();
            ensure(indiscrete(&qho.cat) && indiscrete(&ho.cat), || "la_all not indiscrete".into())?;
            ensure(hit.len() == ho.cat.n_obj(), || "object sets do not match".into())?;
        }
        report.push(format!("{} {}->{}", name, r.objects.0, r.objects.1));
    }
    Ok(format!("equivalences: {}", report.join(", ")))
}

fn stabilization() -> Result<String, String> {
    let mut diagrams = 0;
    for name in ["terminal", "la_all", "la_id", "lab_id", "chain_w12"] {
        let c = corpus::by_name(name).unwrap();
        for (m, kmax) in [(0, 3), (1, 2), (2, 2)] {
            let levels: Vec<FiltCategory> = (0..=kmax)
                .map(|k| FiltCategory::build(&FinSimplicialSet::standard(m), k, &WeqPolicy::Generated))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            let pl = PhiLevels::new(&levels).map_err(e)?;
            let top = levels[kmax].obj_by_seq(&(0..=m).collect::<Vec<_>>()).unwrap();
            let top_pos: Vec<Option<usize>> = pl.incs.iter().map(|inc| inc.obj.iter().position(|&o| o == top)).collect();
            let xs = enumerate_diagrams(&pl.idx, &c, 1 << 20).map_err(e)?;
            let bad: Vec<String> = cofib::par::map(&xs, |x| {
                let ok = match pl.sequence(&c, x) {
                    Ok((cones, seq)) => {
                        seq.stabilization <= m
                            && (m..=kmax).all(|k| top_pos[k].is_some_and(|p| c.weq[cones[k].legs[p]]))
                    }
                    Err(_) => false,
                };
                (!ok).then(|| format!("{} m={} {:?}", name, m, x.obj))
            })
            .into_iter()
            .flatten()
            .collect();
            ensure(bad.is_empty(), || bad[0].clone())?;
            diagrams += xs.len();
        }
        for (k_set, bound) in [
            (FinSimplicialSet::empty(), 0),
            (FinSimplicialSet::standard(0), 1),
            (FinSimplicialSet::from_vertex_sets(&[0, 1], &[1, 2]), 1),
        ] {
            let cone = FinSimplicialSet::join(&k_set, &FinSimplicialSet::standard(0));
            let levels: Vec<FiltCategory> = (0..=bound + 1)
                .map(|k| FiltCategory::build(&cone, k, &WeqPolicy::Generated))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            let pl = PhiLevels::new(&levels).map_err(e)?;
            let xs = enumerate_diagrams(&pl.idx, &c, 1 << 20).map_err(e)?;
            for x in &xs {
                let (_, seq) = pl.sequence(&c, x).map_err(e)?;
                ensure(seq.stabilization <= bound, || format!("{} cone on {} cells: {:?}", name, k_set.n_cells(), seq))?;
            }
            diagrams += xs.len();
        }
    }
    Ok(format!("{} diagrams stabilize in time", diagrams))
}

fn witnesses() -> Result<String, String> {
    let i = FinCategory::chain(1);
    let triv: Vec<bool> = (0..i.n_mor()).map(|f| i.is_identity(f)).collect();
    let cases = [
        (WitnessKind::DmM, WitnessParams { m: 1, complex: None }),
        (WitnessKind::E1, WitnessParams::default()),
        (WitnessKind::ConeFilt, WitnessParams { m: 1, complex: None }),
        (WitnessKind::DSd, WitnessParams { m: 0, complex: Some(MarkedComplex::full(i, triv)) }),
    ];
    for (kind, params) in &cases {
        let r = verify_retraction_witness(*kind, params, 1, 3).map_err(e)?;
        ensure(r.passed(), || format!("{:?}: {:?}", kind, r.failures))?;
    }
    Ok("4 witnesses verify".into())
}

fn gluing() -> Result<String, String> {
    let mut cubes = 0;
    for name in ["la_all", "la_id", "lab_all", "lab_id"] {
        let c = corpus::by_name(name).unwrap();
        for cube in gluing_cubes(&c) {
            match gluing_check(&c, &cube).map_err(e)? {
                GluingOutcome::Checked { weq: true, .. } => cubes += 1,
                o => return Err(format!("{}: {:?} gives {:?}", name, cube, o)),
            }
        }
    }
    let controls = corpus::gluing_controls();
    for g in &controls {
        match gluing_check(&g.c, &g.cube).map_err(e)? {
            GluingOutcome::HypothesisFailed(h) if h.contains(g.hypothesis) => {}
            o => return Err(format!("{}: {:?}", g.name, o)),
        }
    }
    Ok(format!("{} cubes, 0 counterexamples, {} controls rejected", cubes, controls.len()))
}

fn main() {
    let criteria: [(&str, u64, Check); 13] = [
        ("join laws", 1, join_laws),
        ("generalized horn decomposition", 5, horn_decomposition),
        ("filtration transport", 5, filt_transport),
        ("B-set counts", 1, b_sets),
        ("localization vs oracle", 30, localization),
        ("axiom suite and mutations", 10, axiom_suite),
        ("path object", 30, path_objects),
        ("frames of the terminal category", 1, terminal_frames),
        ("colimit criteria agreement", 60, colimit_criteria),
        ("theta comparison", 60, theta),
        ("phi stabilization", 30, stabilization),
        ("retraction witnesses", 10, witnesses),
        ("gluing lemma", 60, gluing),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (title, limit, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let r = check();
        let dt = t.elapsed();
        let in_time = dt < Duration::from_secs(*limit);
        let (pass, detail) = match r {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        failed += !pass as usize;
        println!(
            "{} {:>2} {} [{:.2} s, limit {} s{}]: {}",
            if pass { "PASS" } else { "FAIL" },
            n,
            title,
            dt.as_secs_f64(),
            limit,
            if in_time { "" } else { ", over time" },
            detail
        );
    }
    println!("{} criteria failed", failed);
}
