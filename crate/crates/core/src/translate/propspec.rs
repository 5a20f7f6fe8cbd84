//! Text form of a [`PropSpec`].
//!
//! ```text
//! MODE naive
//! GUARD past
//! INPUTS P_1
//! OUTPUTS Q_1e2 Q_1s2
//! ASSUME G P_1
//! FORMULA (G P_1 -> ...)
//! META
//! structure eq
//! widths 0 1 1
//! partial 0 P_1 {1}
//! full 0 Q_1e2 {1 2}
//! ...
//! ```
//!
//! `ASSUME` is present only when the formula has assume-guarantee shape; the
//! guarantee is then the right side of the top-level implication. Records in
//! `META` are one per line: `partial|full|memory <idx> <prop or -> <render>`,
//! `inbit|outbit <name>`, `atom <idx> <prop or -> <guard> <copy 0/1> <formula>`,
//! `witness <σ> <ρ> <atom bits> <τ>`, `counter <name>`.

use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::parse::parse_prop_ltl;

use super::encode::{AtomEntry, Encoding, GuardMode, Meta, PropSpec, TypeEntry, WitnessEntry};

pub fn write_propspec(p: &PropSpec) -> String {
    let m = &p.meta;
    let mut out = String::new();
    out.push_str(&format!("MODE {}\n", m.encoding.name()));
    out.push_str(&format!("GUARD {}\n", m.guard.name()));
    out.push_str(format!("INPUTS {}\n", p.inputs.join(" ")).trim_end());
    out.push('\n');
    out.push_str(format!("OUTPUTS {}\n", p.outputs.join(" ")).trim_end());
    out.push('\n');
    if p.assumption != Ltl::True {
        out.push_str(&format!("ASSUME {}\n", p.assumption));
    }
    out.push_str(&format!("FORMULA {}\n", p.formula()));
    out.push_str("META\n");
    out.push_str(&format!("structure {}\n", m.structure));
    out.push_str(&format!("widths {} {} {}\n", m.widths[0], m.widths[1], m.widths[2]));
    for (kind, list) in [("partial", &m.partial), ("full", &m.full), ("memory", &m.memory)] {
        for (i, e) in list.iter().enumerate() {
            out.push_str(&format!("{kind} {i} {} {}\n", e.prop.as_deref().unwrap_or("-"), e.render));
        }
    }
    for b in &m.input_bits {
        out.push_str(&format!("inbit {b}\n"));
    }
    for b in &m.output_bits {
        out.push_str(&format!("outbit {b}\n"));
    }
    for (i, a) in m.atoms.iter().enumerate() {
        out.push_str(&format!(
            "atom {i} {} {} {} {}\n",
            a.prop.as_deref().unwrap_or("-"),
            a.guard,
            a.copy as u8,
            a.formula
        ));
    }
    for w in &m.witness {
        out.push_str(&format!("witness {} {} {} {}\n", w.sigma, w.rho, w.atoms, w.tau));
    }
    for c in &m.counters {
        out.push_str(&format!("counter {c}\n"));
    }
    out
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Format(format!("line {line}: {}", msg.into()))
}

fn num<T: std::str::FromStr>(s: Option<&str>, line: usize) -> Result<T> {
    s.and_then(|s| s.parse().ok()).ok_or_else(|| bad(line, "expected a number"))
}

pub fn read_propspec(text: &str) -> Result<PropSpec> {
    let mut encoding = None;
    let mut guard = None;
    let mut inputs = None;
    let mut outputs = None;
    let mut assume = None;
    let mut formula = None;
    let mut meta = Meta {
        encoding: Encoding::Naive,
        guard: GuardMode::Past,
        structure: String::new(),
        widths: [0; 3],
        partial: Vec::new(),
        full: Vec::new(),
        memory: Vec::new(),
        input_bits: Vec::new(),
        output_bits: Vec::new(),
        atoms: Vec::new(),
        witness: Vec::new(),
        counters: Vec::new(),
    };
    let mut in_meta = false;
    for (n, raw) in text.lines().enumerate() {
        let ln = n + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
        if !in_meta {
            match head {
                "MODE" => encoding = Some(Encoding::from_name(rest).ok_or_else(|| bad(ln, "unknown mode"))?),
                "GUARD" => guard = Some(GuardMode::from_name(rest).ok_or_else(|| bad(ln, "unknown guard mode"))?),
                "INPUTS" => inputs = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>()),
                "OUTPUTS" => outputs = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>()),
                "ASSUME" => assume = Some(parse_prop_ltl(rest)?),
                "FORMULA" => formula = Some(parse_prop_ltl(rest)?),
                "META" => in_meta = true,
                _ => return Err(bad(ln, format!("unknown section `{head}`"))),
            }
            continue;
        }
        let mut f = rest.splitn(4, ' ');
        match head {
            "structure" => meta.structure = rest.to_string(),
            "widths" => {
                let mut w = rest.split_whitespace();
                for slot in meta.widths.iter_mut() {
                    *slot = num(w.next(), ln)?;
                }
            }
            "partial" | "full" | "memory" => {
                let idx: usize = num(f.next(), ln)?;
                let prop = f.next().ok_or_else(|| bad(ln, "missing proposition"))?;
                let render = rest.splitn(3, ' ').nth(2).ok_or_else(|| bad(ln, "missing rendering"))?;
                let list = match head {
                    "partial" => &mut meta.partial,
                    "full" => &mut meta.full,
                    _ => &mut meta.memory,
                };
                if idx != list.len() {
                    return Err(bad(ln, "type records out of order"));
                }
                list.push(TypeEntry {
                    prop: (prop != "-").then(|| prop.to_string()),
                    render: render.to_string(),
                });
            }
            "inbit" => meta.input_bits.push(rest.to_string()),
            "outbit" => meta.output_bits.push(rest.to_string()),
            "atom" => {
                let mut f = rest.splitn(5, ' ');
                let idx: usize = num(f.next(), ln)?;
                if idx != meta.atoms.len() {
                    return Err(bad(ln, "atom records out of order"));
                }
                let prop = f.next().ok_or_else(|| bad(ln, "missing proposition"))?;
                let guard = num(f.next(), ln)?;
                let copy: u8 = num(f.next(), ln)?;
                let formula = f.next().ok_or_else(|| bad(ln, "missing atom formula"))?;
                meta.atoms.push(AtomEntry {
                    prop: (prop != "-").then(|| prop.to_string()),
                    formula: formula.to_string(),
                    guard,
                    copy: copy == 1,
                });
            }
            "witness" => {
                let mut w = rest.split_whitespace();
                meta.witness.push(WitnessEntry {
                    sigma: num(w.next(), ln)?,
                    rho: num(w.next(), ln)?,
                    atoms: num(w.next(), ln)?,
                    tau: num(w.next(), ln)?,
                });
            }
            "counter" => meta.counters.push(rest.to_string()),
            _ => return Err(bad(ln, format!("unknown META record `{head}`"))),
        }
    }
    meta.encoding = encoding.ok_or_else(|| Error::Format("missing MODE".into()))?;
    meta.guard = guard.ok_or_else(|| Error::Format("missing GUARD".into()))?;
    let formula = formula.ok_or_else(|| Error::Format("missing FORMULA".into()))?;
    let (assumption, guarantee) = match assume {
        None => (Ltl::True, formula),
        Some(a) => match formula {
            Ltl::Implies(x, g) if *x == a => (a, *g),
            _ => return Err(Error::Format("FORMULA is not ASSUME -> guarantee".into())),
        },
    };
    let inputs = inputs.ok_or_else(|| Error::Format("missing INPUTS".into()))?;
    let outputs = outputs.ok_or_else(|| Error::Format("missing OUTPUTS".into()))?;
    if let Some(p) = inputs.iter().find(|p| outputs.contains(p)) {
        return Err(Error::Format(format!("proposition {p} is both input and output")));
    }
    Ok(PropSpec {
        inputs,
        outputs,
        assumption,
        guarantee,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_spec;
    use crate::translate::{reduce_to_kernel, translate, GuardDepth};

    #[test]
    fn round_trip_every_mode() {
        let spec = parse_spec("structure dlo; lookback 1; spec G ({ y < x } & (YTRUE -> { y < y[-1] }))").unwrap();
        let k = reduce_to_kernel(&spec, GuardDepth::AtomLag).unwrap();
        for enc in [Encoding::Naive, Encoding::Binary, Encoding::Minterm, Encoding::Sat] {
            for mode in [GuardMode::Past, GuardMode::Counter] {
                let p = translate(&k, enc, mode).unwrap();
                let text = write_propspec(&p);
                let back = read_propspec(&text).unwrap();
                assert_eq!(back, p, "{enc:?} {mode:?}");
                assert_eq!(write_propspec(&back), text);
            }
        }
    }

    #[test]
    fn rejects_overlapping_partition() {
        let text = "MODE naive\nGUARD past\nINPUTS a\nOUTPUTS a\nFORMULA a\nMETA\n";
        assert!(read_propspec(text).is_err());
    }
}
