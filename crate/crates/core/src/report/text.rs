use std::fmt::Write;

use crate::building::OracleSummary;
use crate::growth::GrowthRateEstimate;
use crate::hyperbolic::{ConfdimBoundsReport, Lambda, Obstruction, PRange, UpperBound};

use super::{fmt_quantity, ExponentsSection, GrowthSection, InvariantReport, Section, VcdSection};

fn estimate(e: &GrowthRateEstimate) -> String {
    format!("{:.9} ± {:.3e} [{:?}]", e.value, e.uncertainty, e.method)
}

fn set(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn section_body<T>(out: &mut String, title: &str, s: &Section<T>, body: impl FnOnce(&mut String, &T)) {
    let _ = writeln!(out, "\n== {title} ==");
    match s {
        Section::Computed { value } => body(out, value),
        Section::Skipped { reason } => {
            let _ = writeln!(out, "  skipped: {reason}");
        }
    }
}

fn vcd_text(out: &mut String, v: &VcdSection) {
    let _ = writeln!(out, "  vcd: {}", v.vcd);
    let _ = writeln!(out, "  spherical-only maximum: {}", v.spherical_only);
    let _ = writeln!(out, "  chamber dimension: {}", v.chamber_dimension);
    for w in &v.witnesses {
        let _ = writeln!(
            out,
            "  witness T = {} (spherical: {}, complement spherical: {})",
            set(&w.names),
            w.spherical,
            w.complement_spherical
        );
    }
    match &v.bestvina {
        Section::Computed { value: b } => {
            let _ = writeln!(out, "  F0 = {}, S0 = {}", set(&b.f0_names), set(&b.s0_names));
            let _ = writeln!(out, "  refined rate on S0: {}", estimate(&b.refined_rate));
        }
        Section::Skipped { reason } => {
            let _ = writeln!(out, "  support selection skipped: {reason}");
        }
    }
}

fn growth_text(out: &mut String, g: &GrowthSection) {
    let _ = writeln!(out, "  W(x) = ({}) / ({})", g.numerator, g.denominator);
    let _ = writeln!(out, "  checked against enumeration through length {}", g.validated_depth);
    let counts: Vec<String> = g.layer_counts.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "  sphere sizes: {}", counts.join(", "));
    let _ = writeln!(out, "  entropy e(W): {}", estimate(&g.entropy));
    let _ = writeln!(out, "  e_q: {}", fmt_quantity(&g.e_q.quantity()));
    match &g.e_q_fit {
        Section::Computed { value } => {
            let _ = writeln!(out, "  e_q from enumeration fit: {}", estimate(value));
        }
        Section::Skipped { reason } => {
            let _ = writeln!(out, "  enumeration fit skipped: {reason}");
        }
    }
    let q: Vec<String> = g.weighted_counts.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "  Q_n (elements with q_w <= e^n): {}", q.join(", "));
}

fn exponents_text(out: &mut String, x: &ExponentsSection) {
    let c = &x.exponents;
    let grade = if c.pm_grade { "exact thresholds" } else { "one-sided bounds" };
    let _ = writeln!(out, "  e_q: {}", fmt_quantity(&c.e_q));
    let _ = writeln!(out, "  homology threshold 1 + e_q: {} ({grade})", fmt_quantity(&c.p_homology));
    let _ = writeln!(out, "  cohomology threshold 1 + 1/e_q: {} ({grade})", fmt_quantity(&c.p_cohomology));
    for w in &c.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    let _ = writeln!(out, "  sum of q_w^(1-p) over lengths <= {}:", x.depth);
    let _ = writeln!(out, "  {:>8}  {:>14}  {:<13}  exact", "p", "partial sum", "verdict");
    for row in &x.grid {
        let _ = writeln!(
            out,
            "  {:>8}  {:>14.6}  {:<13}  {}",
            row.p,
            row.partial_sum,
            format!("{:?}", row.verdict),
            row.exact_partial_sum.as_deref().unwrap_or("-")
        );
    }
}

fn confdim_text(out: &mut String, c: &ConfdimBoundsReport) {
    let _ = writeln!(out, "  e_q: {}", estimate(&c.e_q));
    let _ = writeln!(out, "  factor 1 + 1/e_q: {}", fmt_quantity(&c.factor));
    let _ = writeln!(out, "  vcd: {}", c.vcd);
    let _ = writeln!(out, "  lower: {} [{:?}] = {}", c.lower.formula, c.lower.provenance, fmt_quantity(&c.lower.value));
    let _ = writeln!(out, "  vcd floor: {}", fmt_quantity(&c.vcd_floor));
    match &c.upper {
        UpperBound::Concrete(b) => {
            let _ = writeln!(out, "  upper: {} [{:?}] = {}", b.formula, b.provenance, fmt_quantity(&b.value));
        }
        UpperBound::Symbolic { numerator, formula } => {
            let _ = writeln!(out, "  upper: {formula}, numerator {}", fmt_quantity(numerator));
        }
    }
    if let Some(f) = &c.fuchsian {
        let _ = writeln!(out, "  polygon case ({}): confdim = {}", f.detection, fmt_quantity(&f.confdim));
        for row in &f.table {
            let side = match row.range {
                PRange::BelowThreshold => "p < confdim",
                PRange::AboveThreshold => "p > confdim",
            };
            let name = if row.reduced { "reduced H" } else { "H" };
            let state = if row.vanishes { "= 0" } else { "!= 0" };
            let _ = writeln!(out, "    {side}: l^p {name}^{} {state}", row.degree);
        }
    }
}

fn oracle_text(out: &mut String, o: &OracleSummary) {
    let _ = writeln!(out, "  radius {}, {} chambers", o.radius, o.chambers);
    let _ = writeln!(out, "  sphere counts checked: {}, mismatches: {}", o.sphere_counts.len(), o.sphere_mismatches);
    for t in &o.identities {
        let _ = writeln!(out, "  {}: {} checked, {} failed", t.identity, t.checked, t.failed);
    }
    for j in &o.jensen {
        let _ = writeln!(
            out,
            "  norm inequality at p = {}: {} pass, {} fail, {} indeterminate ({} equalities)",
            j.p, j.pass, j.fail, j.indeterminate, j.equalities
        );
    }
    let _ = writeln!(out, "  all passed: {}", o.all_passed);
}

/// Human-readable report, one block per computed section.
pub fn render_text(r: &InvariantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", r.tool, r.version);
    let _ = writeln!(out, "generators: {}", r.input.generators.join(" "));
    let _ = writeln!(out, "digest: {}", r.input.digest);
    let q: Vec<String> = r.input.thickness.iter().map(|(g, q)| format!("{g}={q}")).collect();
    let _ = writeln!(out, "thickness: {}{}", q.join(" "), if r.input.thickness_given { "" } else { " (default)" });
    match r.input.lambda {
        Some(Lambda::Value(l)) => {
            let _ = writeln!(out, "lambda: {l}");
        }
        Some(Lambda::Bourdon) => {
            let _ = writeln!(out, "lambda: exp(e_q)");
        }
        None => {}
    }
    if let Some(a) = r.input.apartment_confdim {
        let _ = writeln!(out, "apartment confdim: {a}");
    }
    if let Some(c) = &r.classification {
        let _ = writeln!(out, "\n== classification ==");
        let _ = writeln!(out, "  {}", c.summary);
        let _ = writeln!(out, "  type: {} ({:?})", c.label, c.kind);
        match &c.hyperbolicity.obstruction {
            Some(Obstruction::AffineRank3 { names, label, .. }) => {
                let _ = writeln!(out, "  obstruction: affine subsystem {label} on {}", set(names));
            }
            Some(Obstruction::CommutingInfinitePair { first_names, second_names, .. }) => {
                let _ = writeln!(
                    out,
                    "  obstruction: commuting infinite subsystems {} and {}",
                    set(first_names),
                    set(second_names)
                );
            }
            None => {}
        }
        let classes: Vec<String> = c.conjugacy_classes.iter().map(|k| set(k)).collect();
        let _ = writeln!(out, "  generator classes: {}", classes.join(" "));
    }
    if let Some(n) = &r.nerve {
        let _ = writeln!(out, "\n== nerve ==");
        let _ = writeln!(out, "  face counts: {:?}", n.face_counts);
        let _ = writeln!(
            out,
            "  pseudomanifold: {} (pure: {}, gallery connected: {}, orientable: {})",
            n.pm.pseudomanifold, n.pm.purely_dimensional, n.pm.gallery_connected, n.pm.orientable
        );
        let _ = writeln!(out, "  type PM: {}", n.type_pm);
        let _ = writeln!(out, "  Davis chamber face counts: {:?}", n.chamber_face_counts);
    }
    if let Some(v) = &r.vcd {
        section_body(&mut out, "cohomological dimension", v, vcd_text);
    }
    if let Some(g) = &r.growth {
        section_body(&mut out, "growth", g, growth_text);
    }
    if let Some(x) = &r.exponents {
        section_body(&mut out, "critical exponents", x, exponents_text);
    }
    if let Some(c) = &r.confdim {
        section_body(&mut out, "conformal dimension", c, confdim_text);
    }
    if let Some(o) = &r.oracle {
        section_body(&mut out, "explicit building checks", o, oracle_text);
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out, "\n== notes ==");
        for n in &r.notes {
            let _ = writeln!(out, "  {n}");
        }
    }
    if let Some(t) = &r.timings {
        let _ = writeln!(out, "\n== timings (ms) ==");
        for (name, ms) in t {
            let _ = writeln!(out, "  {name:<10} {ms:>10.1}");
        }
    }
    out
}
