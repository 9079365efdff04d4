use std::collections::HashMap;

use crate::error::{Error, Result};

/// Opaque element names with positional indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Labels {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(n.clone()));
            }
        }
        Ok(Labels { names, index })
    }

    /// Labels `prefix0, prefix1, ...`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Labels::new((0..n).map(|i| format!("{prefix}{i}")).collect())
            .expect("numbered labels are distinct")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    #[inline]
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// Indices ordered by label, the canonical serialization order.
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        idx
    }

    /// `{a,b,c}` rendering of a subset, members in label order.
    pub fn render_set(&self, set: crate::BitSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }
}
