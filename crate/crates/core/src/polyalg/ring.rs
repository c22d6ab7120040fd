use std::fmt;
use std::sync::Arc;

use super::PolyError;

/// Ordered list of distinct variable names; the coordinates of an ambient space.
#[derive(Clone)]
pub struct Ring {
    vars: Arc<Vec<String>>,
}

/// Identifier grammar `[A-Za-z][A-Za-z0-9_]*`, with `I` reserved for the imaginary unit.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "I"
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Ring, PolyError> {
        let mut out: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            if !is_identifier(v) {
                return Err(PolyError::InvalidRing(format!("bad variable name `{v}`")));
            }
            if out.iter().any(|w| w == v) {
                return Err(PolyError::InvalidRing(format!("duplicate variable `{v}`")));
            }
            out.push(v.to_string());
        }
        Ok(Ring { vars: Arc::new(out) })
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of(vars: &[&str]) -> Ring {
        Ring::new(vars).expect("invalid ring literal")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    /// A ring with `extra` appended after the existing variables.
    pub fn extend(&self, extra: &[&str]) -> Result<Ring, PolyError> {
        let mut vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        vars.extend_from_slice(extra);
        Ring::new(&vars)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{}]", self.vars.join(","))
    }
}
