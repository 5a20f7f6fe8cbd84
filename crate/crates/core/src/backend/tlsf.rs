//! TLSF output for external reactive synthesis tools.

use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::translate::PropSpec;

fn render(f: &Ltl<String>) -> String {
    match f {
        Ltl::True => "true".into(),
        Ltl::False => "false".into(),
        Ltl::Atom(a) => a.clone(),
        Ltl::Not(a) => format!("!{}", render(a)),
        Ltl::And(a, b) => format!("({} && {})", render(a), render(b)),
        Ltl::Or(a, b) => format!("({} || {})", render(a), render(b)),
        Ltl::Implies(a, b) => format!("({} -> {})", render(a), render(b)),
        Ltl::Iff(a, b) => format!("({} <-> {})", render(a), render(b)),
        Ltl::Next(a) => format!("X {}", render(a)),
        Ltl::Until(a, b) => format!("({} U {})", render(a), render(b)),
        Ltl::Globally(a) => format!("G {}", render(a)),
        Ltl::Finally(a) => format!("F {}", render(a)),
        Ltl::Yesterday(_) | Ltl::Since(..) => unreachable!("past operators are rejected first"),
    }
}

fn section(out: &mut String, name: &str, items: &[String]) {
    out.push_str(&format!("  {name} {{\n"));
    for i in items {
        out.push_str(&format!("    {i};\n"));
    }
    out.push_str("  }\n");
}

/// TLSF rendering of a future-only PropSpec. Past operators must first be
/// replaced by counter guards.
pub fn export_tlsf(p: &PropSpec, title: &str) -> Result<String> {
    let f = p.formula();
    if let Some(past) = f.find_past() {
        return Err(Error::Unsupported(format!(
            "TLSF has no past operators; `{past}` remains (translate with counter guards)"
        )));
    }
    let mut out = String::new();
    out.push_str("INFO {\n");
    out.push_str(&format!("  TITLE:       \"{}\"\n", title.replace('"', "'")));
    out.push_str(&format!(
        "  DESCRIPTION: \"{} encoding over structure {}\"\n",
        p.meta.encoding.name(),
        p.meta.structure
    ));
    out.push_str("  SEMANTICS:   Mealy\n");
    out.push_str("  TARGET:      Mealy\n");
    out.push_str("}\n\nMAIN {\n");
    section(&mut out, "INPUTS", &p.inputs);
    section(&mut out, "OUTPUTS", &p.outputs);
    section(&mut out, "GUARANTEES", &[render(&f)]);
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_prop_ltl;

    #[test]
    fn operators() {
        let f = parse_prop_ltl("G (a -> F (b U !c)) & X true").unwrap();
        assert_eq!(render(&f), "(G (a -> F (b U !c)) && X true)");
    }
}
