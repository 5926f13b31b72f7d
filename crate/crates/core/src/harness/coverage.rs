//! Case-to-anchor manifest. A case id maps to the entry whose prefix matches
//! it exactly or up to a `.` boundary; the longest such prefix wins.

pub const MANIFEST: &[(&str, &str, &str)] = &[
    ("heisenberg-hermite", "action.homomorphism", "(e1.1), (e1.6)"),
    ("heisenberg-hermite", "action.identity-and-phase", "(e1.6)"),
    ("heisenberg-hermite", "action.route-agreement", "(e1.6), (3.2.24)"),
    ("heisenberg-hermite", "action.unitarity", "(e1.6)"),
    ("heisenberg-hermite", "conjugation", "(2.15)"),
    ("heisenberg-hermite", "continuity", "(e1.10), (2.18), (2.19)"),
    ("heisenberg-hermite", "differentiability", "(e1.11), (2.20)"),
    ("heisenberg-hermite", "generators.commutator", "(e1.3)"),
    ("heisenberg-hermite", "generators.entries", "(e1.7)"),
    ("heisenberg-hermite", "generators.structure", "(e1.2), (e1.7)"),
    ("heisenberg-hermite", "growth.group-bound", "(2.16)"),
    ("heisenberg-hermite", "growth.modulation", "(e1.12)"),
    ("heisenberg-hermite", "growth.phase-equality", "(e1.9)"),
    ("heisenberg-hermite", "growth.sharp", "(e1.9)"),
    ("heisenberg-hermite", "scale.basis-invariance", "Prop 2.1"),
    ("heisenberg-hermite", "scale.h0-norms", "(e1.8)"),
    ("heisenberg-hermite", "scale.monotonicity", "(2.6), (2.7)"),
    ("heisenberg-hermite", "scale.norm-axioms", "(2.4), (2.5)"),
    ("heisenberg-hermite", "scale.x2-h0", "(2.6)"),
    ("hille-yosida", "beta.ladder", "(2.1.9), (2.1.11)"),
    ("hille-yosida", "e118", "(e1.18)"),
    ("hille-yosida", "equicontinuity", "(e1.15), (e1.19), (2.1.9)"),
    ("hille-yosida", "global", "(2.1.10), (2.1.11)"),
    ("hille-yosida", "laplace.tail", "(2.1.7)"),
    ("hille-yosida", "resolvent.identity", "(2.1.7)"),
    ("hille-yosida", "resolvent.large-lambda", "(e1.17)"),
    ("hille-yosida", "resolvent.negative-branch", "(e1.14), (2.1.7)"),
    ("hille-yosida", "resolvent.oracle", "(e1.17)"),
    ("hille-yosida", "resolvent.scalar-laplace", "(e1.16)"),
    ("hille-yosida", "resolvent.triple", "(e1.14), (e1.17)"),
    ("hille-yosida", "type.phase-and-identity", "(2.1.6)"),
    ("hille-yosida", "type.x2", "(e1.13), (2.1.6)"),
    ("hille-yosida", "yosida", "(2.1.8)"),
    ("integrator", "chart.hermite-analytic", "(3.2.24), (3.2.25)"),
    ("integrator", "chart.identity", "(3.2.24)"),
    ("integrator", "chart.l2-rep", "(3.2.24), (e2.6)"),
    ("integrator", "chart.operator-identities", "(3.2.23)"),
    ("integrator", "derivative.hermite", "(3.2.26), (3.2.27)"),
    ("integrator", "derivative.product-rule", "Prop 3.2, (3.2.13)"),
    ("integrator", "derivative.translated", "(3.2.28)"),
    ("integrator", "dual.generator", "(2.3.2), (2.3.3)"),
    ("integrator", "dual.homomorphism", "Cor 3.1"),
    ("integrator", "dual.involution", "(2.3.3)"),
    ("integrator", "dual.pairing", "(2.3.1)"),
    ("integrator", "dual.triplet-norms", "Def 1.1, (e2.5)"),
    ("integrator", "extension", "Prop 3.4, (3.2.31), (3.2.32)"),
    ("integrator", "flow", "Thm 3.1"),
    ("integrator", "homomorphism", "(3.2.30)"),
    ("integrator", "homomorphism.interpolation", "(3.2.29)"),
    ("integrator", "int-identity", "Prop 3.3, (3.2.14), (3.2.22)"),
    ("integrator", "int-rows", "(2.15), (3.2.22)"),
    ("lie-core", "ad-series.algebra", "(3.2.7)"),
    ("lie-core", "ad-series.hermite", "Prop 3.1, (3.2.10)"),
    ("lie-core", "automorphism.expansion", "(*)"),
    ("lie-core", "automorphism.homomorphism", "(2.15)"),
    ("lie-core", "automorphism.identity", "(**)"),
    ("lie-core", "automorphism.int-so3", "(**), (3.2.7)"),
    ("lie-core", "bracket.relations", "(e1.2), (e1.3)"),
    ("lie-core", "chart.derivative-identities", "(3.2.8), (3.2.8a), (3.2.9)"),
    ("lie-core", "chart.roundtrip", "(3.2.1), (3.2.2)"),
    ("lie-core", "exp.one-parameter", "(3.2.3)"),
    ("lie-core", "group.associativity", "(e1.1)"),
    ("lie-core", "group.inverse", "(e1.1)"),
    ("lie-core", "group.matrix-realization", "(e1.5)"),
    ("lie-core", "realization.products", "(e1.3a), (e1.4), (e1.4b)"),
    ("lie-core", "structure", "(3.2.7)"),
    ("nilpotent-l2", "continuity.level-one", "(e2.5), (e2.6)"),
    ("nilpotent-l2", "generators.action", "(e2.1)"),
    ("nilpotent-l2", "generators.nilpotency", "(e2.3), (e2.6)"),
    ("nilpotent-l2", "generators.products", "(e2.3)"),
    ("nilpotent-l2", "growth.exp-norm", "(e2.6), Prop 3.4"),
    ("nilpotent-l2", "growth.x1-norm", "(e2.1)"),
    ("nilpotent-l2", "rep", "(e2.6)"),
    ("nilpotent-l2", "resolvent", "(e2.7)"),
    ("nilpotent-l2", "scale.floors", "(2.6), (e2.4)"),
    ("nilpotent-l2", "scale.formula", "(e2.2)"),
    ("nilpotent-l2", "scale.two-norm", "(e2.2), (e2.4)"),
    ("nilpotent-l2", "scale.two-norm-sup", "(e2.2), (e2.4)"),
];

pub const REQUIRED_ANCHORS: &[&str] = &[
    "Def 1.1", "Prop 2.1", "(2.4)", "(2.5)", "(2.6)", "(2.7)", "(2.15)", "(*)", "(**)", "(2.16)", "(2.18)", "(2.19)",
    "(2.20)", "(2.1.6)", "(2.1.7)", "(2.1.8)", "(2.1.9)", "(2.1.10)", "(2.1.11)", "(e1.1)", "(e1.2)", "(e1.3)",
    "(e1.3a)", "(e1.4)", "(e1.4b)", "(e1.5)", "(e1.6)", "(e1.7)", "(e1.8)", "(e1.9)", "(e1.10)", "(e1.11)",
    "(e1.12)", "(e1.13)", "(e1.14)", "(e1.15)", "(e1.16)", "(e1.17)", "(e1.18)", "(e1.19)", "(2.3.1)", "(2.3.2)",
    "(2.3.3)", "(e2.1)", "(e2.2)", "(e2.3)", "(e2.4)", "(e2.5)", "(e2.6)", "(e2.7)", "(3.2.1)", "(3.2.2)",
    "(3.2.3)", "(3.2.7)", "(3.2.8)", "(3.2.8a)", "(3.2.9)", "Prop 3.1", "Prop 3.2", "Prop 3.3", "(3.2.10)",
    "(3.2.13)", "(3.2.14)", "(3.2.22)", "(3.2.23)", "Thm 3.1", "(3.2.24)", "(3.2.25)", "(3.2.26)", "(3.2.27)",
    "(3.2.28)", "(3.2.29)", "(3.2.30)", "Prop 3.4", "(3.2.31)", "(3.2.32)", "Cor 3.1",
];

fn prefix_matches(prefix: &str, case: &str) -> bool {
    case == prefix || (case.starts_with(prefix) && case.as_bytes().get(prefix.len()) == Some(&b'.'))
}

pub fn anchor_for(suite: &str, case: &str) -> Option<&'static str> {
    MANIFEST
        .iter()
        .filter(|(s, p, _)| *s == suite && prefix_matches(p, case))
        .max_by_key(|(_, p, _)| p.len())
        .map(|(_, _, a)| *a)
}

fn anchors_of(entry: &str) -> impl Iterator<Item = &str> {
    entry.split(", ").map(str::trim)
}

/// Required anchors that no manifest entry lists.
pub fn missing_anchors() -> Vec<&'static str> {
    REQUIRED_ANCHORS
        .iter()
        .filter(|a| !MANIFEST.iter().any(|(_, _, e)| anchors_of(e).any(|x| x == **a)))
        .cloned()
        .collect()
}

/// Tab-separated `suite, case prefix, anchors`, one line per entry.
pub fn render_manifest() -> String {
    let mut s = String::from("suite\tcase\tanchor\n");
    for (suite, case, anchor) in MANIFEST {
        s.push_str(&format!("{suite}\t{case}\t{anchor}\n"));
    }
    s
}
