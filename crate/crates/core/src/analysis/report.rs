//! Human-readable rendering of a triad analysis.

use super::TriadAnalysis;

/// Format with 3 significant figures in scientific notation, matching how
/// recorded hit counts are usually quoted.
fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

fn full(x: f64) -> String {
    format!("{x:e}")
}

/// Markdown report with 3-significant-figure formatting.
pub fn render_markdown(analysis: &TriadAnalysis) -> String {
    render(analysis, sci)
}

/// Markdown report with full-precision numbers.
pub fn render_markdown_full(analysis: &TriadAnalysis) -> String {
    render(analysis, full)
}

fn render(analysis: &TriadAnalysis, fmt: fn(f64) -> String) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: &str| {
        out.push_str(line);
        out.push('\n');
    };

    let labels = &analysis.counts.labels;
    let phrase = labels.phrase.join(" ");
    push(&mut out, &format!("# Triad analysis: A={}, B={}, C={}, AB=\"{}\"", labels.a, labels.b, labels.c, phrase));
    push(&mut out, "");
    push(&mut out, &format!("Source: {:?} — {}", analysis.provenance.source, analysis.provenance.origin));
    if let Some(earliest) = analysis.provenance.observed_earliest {
        push(&mut out, &format!("Observed: {}", earliest.format("%Y-%m-%d")));
    }
    push(&mut out, "");

    push(&mut out, "## Counts");
    push(&mut out, "");
    push(&mut out, "| quantity | value |");
    push(&mut out, "|---|---|");
    let c = &analysis.counts;
    if let Some(n_w) = c.n_w {
        push(&mut out, &format!("| n_W | {} |", fmt(n_w)));
    }
    for (name, value) in [
        ("n_A", c.n_a),
        ("n_B", c.n_b),
        ("n_C", c.n_c),
        ("n_AB", c.n_ab),
        ("n_(A,B)", c.n_a_b),
        ("n_(A,C)", c.n_a_c),
        ("n_(B,C)", c.n_b_c),
        ("n_(AB,C)", c.n_ab_c),
        ("n_(A,B,C)", c.n_a_b_c),
        ("n_(A,notB)", c.n_a_not_b),
    ] {
        push(&mut out, &format!("| {name} | {} |", fmt(value)));
    }
    push(&mut out, "");

    push(&mut out, "## Consistency audit");
    push(&mut out, "");
    if analysis.consistency.all_satisfied() {
        push(&mut out, "All invariants satisfied.");
    } else {
        push(&mut out, "| invariant | lhs | rhs | ok |");
        push(&mut out, "|---|---|---|---|");
        for check in &analysis.consistency.checks {
            push(
                &mut out,
                &format!(
                    "| {} | {} | {} | {} |",
                    check.name,
                    fmt(check.lhs),
                    fmt(check.rhs),
                    if check.satisfied { "yes" } else { "NO" }
                ),
            );
        }
    }
    push(&mut out, "");

    push(&mut out, "## Emergent combination (single evaluation of AB)");
    push(&mut out, "");
    match &analysis.ee {
        Some(ee) => {
            push(&mut out, &format!("- p(C|AB) = {}", fmt(ee.p_c_given_ab)));
            push(&mut out, &format!("- p(C|A)  = {}", fmt(analysis.p_c_given_a)));
            push(&mut out, &format!("- p(C|B)  = {}", fmt(analysis.p_c_given_b)));
            push(&mut out, &format!("- p(C|AB)/p(C|A) = {}", fmt(ee.ratio_vs_a)));
            push(&mut out, &format!("- p(C|AB)/p(C|B) = {}", fmt(ee.ratio_vs_b)));
            push(&mut out, &format!("- overextension: {}", ee.class));
        }
        None => push(
            &mut out,
            "Undefined: the strict combination never occurs (p(C|AB) would condition on an empty event).",
        ),
    }
    push(&mut out, "");

    push(&mut out, "## Sequential interrogation (A then B)");
    push(&mut out, "");
    let oe = &analysis.oe;
    push(&mut out, &format!("- p(C|A then B) = {}", fmt(oe.p_c_a_then_b)));
    push(&mut out, &format!("- p(C|B then A) = {}", fmt(oe.p_c_b_then_a)));
    push(&mut out, &format!("- p(C|A then B)/p(C|A) = {}", fmt(oe.ratio_vs_a)));
    push(&mut out, &format!("- p(C|A then B)/p(C|B) = {}", fmt(oe.ratio_vs_b)));
    push(
        &mut out,
        &format!(
            "- necessary conditions: n_B/n_A = {} (for overextending B), n_A/n_B = {} (for overextending A)",
            fmt(oe.necessary_ab),
            fmt(oe.necessary_ba)
        ),
    );
    push(&mut out, &format!("- overextension: {}", oe.class));
    push(&mut out, "");

    push(&mut out, "## Dominance of the emergent mechanism");
    push(&mut out, "");
    match &analysis.dominance {
        Some(d) => {
            push(
                &mut out,
                &format!("- direct: p(C|AB)/p(C|A then B) = {}", fmt(d.direct)),
            );
            push(
                &mut out,
                &format!(
                    "- decomposed: factor1 = {}, factor2 = {}, product = {}",
                    fmt(d.factor1),
                    fmt(d.factor2),
                    fmt(d.decomposed)
                ),
            );
            push(
                &mut out,
                &format!(
                    "- agreement between the two computations: relative discrepancy {}",
                    fmt(d.relative_discrepancy)
                ),
            );
            if let Some(check) = d.bond_ratio_check {
                push(
                    &mut out,
                    &format!("- bond-ratio cross-check M(C,AB)/M(C;A,B) = {}", fmt(check)),
                );
            }
            push(
                &mut out,
                &format!("- dominant (>= threshold): {}", if d.dominant { "yes" } else { "no" }),
            );
        }
        None => push(&mut out, "Undefined: a required count is zero."),
    }

    out
}
