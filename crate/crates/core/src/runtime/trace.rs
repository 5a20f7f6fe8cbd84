use crate::error::{Error, Result};
use crate::structure::{Element, Structure};

/// One step of a run: the input tuple and the output tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub inputs: Vec<Element>,
    pub outputs: Vec<Element>,
}

/// The run `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteTrace {
    pub prefix: Vec<Step>,
    pub period: Vec<Step>,
}

impl ConcreteTrace {
    pub fn new(prefix: Vec<Step>, period: Vec<Step>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition("trace period must be nonempty".into()));
        }
        Ok(ConcreteTrace { prefix, period })
    }

    /// Step at absolute time `t`.
    pub fn at(&self, t: usize) -> &Step {
        if t < self.prefix.len() {
            &self.prefix[t]
        } else {
            &self.period[(t - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn check_widths(&self, s: &Structure, streams: usize) -> Result<()> {
        for st in self.prefix.iter().chain(&self.period) {
            if st.inputs.len() != streams || st.outputs.len() != streams {
                return Err(Error::Arity(format!(
                    "trace step has {} inputs and {} outputs, expected {streams} each",
                    st.inputs.len(),
                    st.outputs.len()
                )));
            }
            s.type_of(&st.inputs)?;
            s.type_of(&st.outputs)?;
        }
        Ok(())
    }
}

pub fn format_tuple(t: &[Element]) -> String {
    t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";")
}

/// Input file: one step per line, `;`-separated element literals. Blank
/// lines and lines starting with `#` are skipped.
pub fn read_inputs(s: &Structure, text: &str, streams: usize) -> Result<Vec<Vec<Element>>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(';')
            .map(|lit| s.parse_element(lit.trim()))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Format(format!("line {}: {e}", n + 1)))?;
        if row.len() != streams {
            return Err(Error::Format(format!(
                "line {}: {} values for {streams} input streams",
                n + 1,
                row.len()
            )));
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_rationals() {
        let s = Structure::dlo();
        let rows = read_inputs(&s, "0/1\n# note\n\n-3/2\n", 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(format_tuple(&rows[1]), "-3/2");
        assert!(read_inputs(&s, "1;2", 1).is_err());
    }
}
