use std::cmp::Ordering;

use crate::polyalg::{Monomial, Ring};

use super::IdealError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial order together with a variable precedence.
///
/// `precedence[0]` is the index of the largest variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

/// Sort key realising a [`MonomialOrder`] as plain lexicographic comparison.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey(Vec<i64>);

impl MonomialOrder {
    pub fn grevlex(ring: &Ring) -> MonomialOrder {
        MonomialOrder { kind: OrderKind::Grevlex, precedence: (0..ring.arity()).collect() }
    }

    pub fn lex(ring: &Ring) -> MonomialOrder {
        MonomialOrder { kind: OrderKind::Lex, precedence: (0..ring.arity()).collect() }
    }

    /// Order with an explicit precedence, largest variable first.
    pub fn with_precedence(kind: OrderKind, ring: &Ring, names: &[&str]) -> Result<MonomialOrder, IdealError> {
        let mut precedence = Vec::with_capacity(names.len());
        for n in names {
            let i = ring.index_of(n).ok_or_else(|| IdealError::BadOrder(format!("unknown variable `{n}`")))?;
            if precedence.contains(&i) {
                return Err(IdealError::BadOrder(format!("variable `{n}` repeated")));
            }
            precedence.push(i);
        }
        if precedence.len() != ring.arity() {
            return Err(IdealError::BadOrder("precedence must list every variable once".into()));
        }
        Ok(MonomialOrder { kind, precedence })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn arity(&self) -> usize {
        self.precedence.len()
    }

    pub fn key(&self, m: &Monomial) -> OrderKey {
        let e = &m.0;
        match self.kind {
            OrderKind::Lex => OrderKey(self.precedence.iter().map(|&i| e[i] as i64).collect()),
            OrderKind::Grevlex => {
                let mut k = Vec::with_capacity(e.len() + 1);
                k.push(m.degree() as i64);
                k.extend(self.precedence.iter().rev().map(|&i| -(e[i] as i64)));
                OrderKey(k)
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// The same order on a ring with `extra` new variables appended, ranked
    /// below all existing ones.
    pub fn extend(&self, extra: usize) -> MonomialOrder {
        let n = self.precedence.len();
        let mut precedence = self.precedence.clone();
        precedence.extend(n..n + extra);
        MonomialOrder { kind: self.kind, precedence }
    }
}
