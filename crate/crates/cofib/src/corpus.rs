//! Bundled instances: small cofibration categories, axiom mutations and
//! gluing negative controls.

use crate::cofcat::{path_object, CofCategory, Cube};
use crate::fincat::{two_out_of_six_closure, FinCategory, Mor};

/// A named cofibration category of the corpus.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub c: CofCategory,
}

pub fn terminal() -> CofCategory {
    CofCategory::with_all_cof(FinCategory::terminal(), true)
}

pub fn lattice(atoms: &[&str], all_weq: bool) -> CofCategory {
    CofCategory::with_all_cof(FinCategory::subset_lattice(atoms), all_weq)
}

/// 0 < 1 < 2 with weq generated by 1 -> 2.
pub fn chain_w12() -> CofCategory {
    let cat = FinCategory::chain(2);
    let gen: Vec<bool> = (0..cat.n_mor()).map(|f| cat.src(f) == 1 && cat.tgt(f) == 2).collect();
    let weq = two_out_of_six_closure(&cat, &gen);
    let n = cat.n_mor();
    CofCategory::new(cat, weq, vec![true; n])
}

/// The subset lattice of {a, b} with {a, b} removed.
pub fn lattice_without_top(all_weq: bool) -> CofCategory {
    let (cat, _) = FinCategory::subset_lattice(&["a", "b"]).full_subcategory(&[0, 1, 2]);
    CofCategory::with_all_cof(cat, all_weq)
}

pub fn by_name(name: &str) -> Option<CofCategory> {
    Some(match name {
        "terminal" => terminal(),
        "la_all" => lattice(&["a"], true),
        "la_id" => lattice(&["a"], false),
        "lab_all" => lattice(&["a", "b"], true),
        "lab_id" => lattice(&["a", "b"], false),
        "chain_w12" => chain_w12(),
        "path_la" => path_object(&lattice(&["a"], true)).pc,
        "nolub_all" => lattice_without_top(true),
        _ => return None,
    })
}

pub const NAMES: [&str; 7] = ["terminal", "la_all", "la_id", "lab_all", "lab_id", "chain_w12", "path_la"];

/// The cofibration categories of the corpus.
pub fn instances() -> Vec<Instance> {
    NAMES.iter().map(|&name| Instance { name, c: by_name(name).unwrap() }).collect()
}

/// A corrupted instance together with the axioms it must fail.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub name: &'static str,
    pub c: CofCategory,
    pub expected: Vec<&'static str>,
}

fn subset(s: &str) -> String {
    let atoms: Vec<String> = s.chars().filter(|&ch| ch != '0').map(String::from).collect();
    format!("{{{}}}", atoms.join(","))
}

fn mor(c: &FinCategory, a: &str, b: &str) -> Mor {
    c.arrow(c.obj_by_name(&subset(a)).unwrap(), c.obj_by_name(&subset(b)).unwrap()).unwrap()
}

pub fn mutations() -> Vec<Mutation> {
    let lab = FinCategory::subset_lattice(&["a", "b"]);
    let mut out = Vec::new();

    out.push(Mutation { name: "drop a pushout apex", c: lattice_without_top(true), expected: vec!["C4-existence"] });

    let mut c = lattice(&["a", "b"], true);
    c.weq[mor(&lab, "a", "a")] = false;
    out.push(Mutation { name: "unmark a weq identity", c, expected: vec!["subcategories", "C0", "C1", "C4-stability", "C5"] });

    let mut c = lattice(&["a", "b"], false);
    c.cof[mor(&lab, "a", "ab")] = false;
    out.push(Mutation { name: "break factorization", c, expected: vec!["C4-stability", "C5"] });

    let (cat, _) = lab.full_subcategory(&[1, 2, 3]);
    out.push(Mutation {
        name: "drop the initial object",
        c: CofCategory::with_all_cof(cat, false),
        expected: vec!["C2", "C3"],
    });

    let mut c = lattice(&["a", "b"], false);
    c.cof[mor(&lab, "0", "b")] = false;
    out.push(Mutation { name: "unmark an initial cofibration", c, expected: vec!["C3", "C5"] });

    let cat = FinCategory::chain(3);
    let weq: Vec<bool> = (0..cat.n_mor())
        .map(|f| cat.is_identity(f) || (cat.src(f), cat.tgt(f)) == (0, 2) || (cat.src(f), cat.tgt(f)) == (1, 3))
        .collect();
    let n = cat.n_mor();
    out.push(Mutation {
        name: "break 2-out-of-6",
        c: CofCategory::new(cat, weq, vec![true; n]),
        expected: vec!["C0", "C4-stability"],
    });
    out
}

/// A cube over a corpus instance whose named hypothesis fails.
#[derive(Clone, Debug)]
pub struct GluingControl {
    pub name: &'static str,
    pub c: CofCategory,
    pub cube: Cube,
    pub hypothesis: &'static str,
}

pub fn gluing_controls() -> Vec<GluingControl> {
    let lab = FinCategory::subset_lattice(&["a", "b"]);
    let m = |a: &str, b: &str| mor(&lab, a, b);
    let id = |a: &str| m(a, a);
    // back span 0 -> a, 0 >-> b; front span a -> a, a >-> ab
    let base = Cube { f0: m("0", "a"), i0: m("0", "b"), f1: id("a"), i1: m("a", "ab"), a: m("0", "a"), b: id("a"), x: m("b", "ab") };
    let mut out = Vec::new();

    out.push(GluingControl { name: "comparison A not a weq", c: lattice(&["a", "b"], false), cube: base, hypothesis: "A0 -> A1" });

    let mut c = lattice(&["a", "b"], true);
    c.cof[m("0", "b")] = false;
    out.push(GluingControl { name: "back leg not a cofibration", c, cube: base, hypothesis: "back leg" });

    let mut c = lattice(&["a", "b"], true);
    c.cof[m("a", "ab")] = false;
    out.push(GluingControl { name: "front leg not a cofibration", c, cube: base, hypothesis: "front leg" });

    let mut c = lattice(&["a", "b"], true);
    c.weq[m("b", "ab")] = false;
    out.push(GluingControl { name: "comparison X not a weq", c, cube: base, hypothesis: "X0 -> X1" });

    let mut c = lattice(&["a", "b"], true);
    let cube = Cube { f0: m("0", "a"), i0: id("0"), f1: m("0", "ab"), i1: id("0"), a: id("0"), b: m("a", "ab"), x: id("0") };
    c.weq[m("a", "ab")] = false;
    out.push(GluingControl { name: "comparison B not a weq", c, cube, hypothesis: "B0 -> B1" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cofcat::{check_axioms, gluing_check, GluingOutcome};

    #[test]
    fn corpus_passes_axioms() {
        for inst in instances() {
            let r = check_axioms(&inst.c);
            assert!(r.all_pass(), "{}: {:?}", inst.name, r.failures());
        }
    }

    #[test]
    fn mutations_fail_as_documented() {
        let ms = mutations();
        assert_eq!(ms.len(), 6);
        for m in ms {
            let r = check_axioms(&m.c);
            assert_eq!(r.failures(), m.expected, "{}", m.name);
            for (_, e) in r.entries() {
                assert_eq!(e.pass, e.witness.is_none());
            }
        }
    }

    #[test]
    fn gluing_controls_name_hypothesis() {
        for g in gluing_controls() {
            match gluing_check(&g.c, &g.cube).unwrap() {
                GluingOutcome::HypothesisFailed(h) => assert!(h.contains(g.hypothesis), "{}: {}", g.name, h),
                o => panic!("{}: {:?}", g.name, o),
            }
        }
    }
}
