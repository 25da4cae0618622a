use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A laboratory that can own registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
    E,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Party::A => "A",
            Party::B => "B",
            Party::C => "C",
            Party::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Party::A),
            "B" => Ok(Party::B),
            "C" => Ok(Party::C),
            "E" => Ok(Party::E),
            other => Err(Error::Parse(format!("unknown party `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub label: String,
    pub dim: usize,
    pub party: Party,
}

impl Register {
    pub fn new(label: impl Into<String>, dim: usize, party: Party) -> Self {
        Self {
            label: label.into(),
            dim,
            party,
        }
    }
}

/// Ordered registers defining a tensor factorisation. The first register is
/// the most significant digit of every basis index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemLayout {
    registers: Vec<Register>,
}

impl SubsystemLayout {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &registers {
            if r.dim == 0 {
                return Err(Error::InvalidParameter(format!(
                    "register `{}` has dimension 0",
                    r.label
                )));
            }
            if !seen.insert(r.label.as_str()) {
                return Err(Error::LabelCollision(r.label.clone()));
            }
        }
        Ok(Self { registers })
    }

    pub fn single(label: &str, dim: usize, party: Party) -> Self {
        Self::new(vec![Register::new(label, dim, party)]).expect("single register is valid")
    }

    /// Registers `A` (party A) and `B` (party B).
    pub fn bipartite(d_a: usize, d_b: usize) -> Self {
        Self::new(vec![
            Register::new("A", d_a, Party::A),
            Register::new("B", d_b, Party::B),
        ])
        .expect("bipartite layout is valid")
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.registers.iter().map(|r| r.label.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.registers.iter().map(|r| r.dim).product()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.label == label)
            .ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    pub fn register(&self, label: &str) -> Result<&Register> {
        Ok(&self.registers[self.index_of(label)?])
    }

    /// Positions of the given labels, rejecting unknown and repeated ones.
    pub fn resolve<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let i = self.index_of(l.as_ref())?;
            if out.contains(&i) {
                return Err(Error::LabelCollision(l.as_ref().to_string()));
            }
            out.push(i);
        }
        Ok(out)
    }

    pub fn dim_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        Ok(self
            .resolve(labels)?
            .into_iter()
            .map(|i| self.registers[i].dim)
            .product())
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut regs = self.registers.clone();
        regs.extend(other.registers.iter().cloned());
        Self::new(regs)
    }

    /// Keeps only registers at the given positions, preserving layout order.
    pub fn select(&self, keep: &[usize]) -> Self {
        let regs = self
            .registers
            .iter()
            .enumerate()
            .filter(|(i, _)| keep.contains(i))
            .map(|(_, r)| r.clone())
            .collect();
        Self { registers: regs }
    }

    pub fn with_party(&self, label: &str, party: Party) -> Result<Self> {
        let i = self.index_of(label)?;
        let mut regs = self.registers.clone();
        regs[i].party = party;
        Ok(Self { registers: regs })
    }

    pub fn rename(&self, label: &str, new_label: &str) -> Result<Self> {
        let i = self.index_of(label)?;
        let mut regs = self.registers.clone();
        regs[i].label = new_label.to_string();
        Self::new(regs)
    }

    /// Labels of registers owned by `party`, in layout order.
    pub fn owned_by(&self, party: Party) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| r.party == party)
            .map(|r| r.label.clone())
            .collect()
    }

    /// Registers not owned by the party of the first register. This is the
    /// side that a partial transposition acts on by default.
    pub fn default_cut(&self) -> Vec<String> {
        match self.registers.first() {
            None => Vec::new(),
            Some(first) => self
                .registers
                .iter()
                .filter(|r| r.party != first.party)
                .map(|r| r.label.clone())
                .collect(),
        }
    }

    /// Labels not in `labels`, in layout order.
    pub fn complement<S: AsRef<str>>(&self, labels: &[S]) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| !labels.iter().any(|l| l.as_ref() == r.label))
            .map(|r| r.label.clone())
            .collect()
    }
}

/// Row-major digit decomposition of basis indices for a register list.
pub(crate) struct IndexMap {
    pub dims: Vec<usize>,
    pub strides: Vec<usize>,
}

impl IndexMap {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Self {
            dims: dims.to_vec(),
            strides,
        }
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn digit(&self, index: usize, reg: usize) -> usize {
        (index / self.strides[reg]) % self.dims[reg]
    }

    /// For every full index, its sub-index over `selected` registers and its
    /// sub-index over the remaining registers (both row-major, layout order).
    pub fn split(&self, selected: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let n = self.total();
        let mut sel = vec![0; n];
        let mut rest = vec![0; n];
        for (idx, (s_out, r_out)) in sel.iter_mut().zip(rest.iter_mut()).enumerate() {
            let mut s = 0;
            let mut r = 0;
            for k in 0..self.dims.len() {
                let dgt = self.digit(idx, k);
                if selected.contains(&k) {
                    s = s * self.dims[k] + dgt;
                } else {
                    r = r * self.dims[k] + dgt;
                }
            }
            *s_out = s;
            *r_out = r;
        }
        (sel, rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_labels_and_zero_dims() {
        let dup = SubsystemLayout::new(vec![
            Register::new("A", 2, Party::A),
            Register::new("A", 2, Party::B),
        ]);
        assert!(matches!(dup, Err(Error::LabelCollision(_))));
        assert!(SubsystemLayout::new(vec![Register::new("A", 0, Party::A)]).is_err());
    }

    #[test]
    fn index_split_row_major() {
        let map = IndexMap::new(&[2, 3, 2]);
        assert_eq!(map.total(), 12);
        // index 7 = (1, 0, 1)
        assert_eq!(map.digit(7, 0), 1);
        assert_eq!(map.digit(7, 1), 0);
        assert_eq!(map.digit(7, 2), 1);
        let (sel, rest) = map.split(&[1]);
        assert_eq!(sel[7], 0);
        assert_eq!(rest[7], 3);
    }

    #[test]
    fn default_cut_is_other_party() {
        let l = SubsystemLayout::new(vec![
            Register::new("A", 2, Party::A),
            Register::new("A'", 3, Party::A),
            Register::new("B'", 3, Party::B),
        ])
        .unwrap();
        assert_eq!(l.default_cut(), vec!["B'".to_string()]);
        assert_eq!(l.complement(&["A'"]), vec!["A".to_string(), "B'".to_string()]);
    }
}
