//! Finite groups given by full multiplication tables.

use std::collections::BTreeSet;

use crate::error::{LabError, Result};

/// A finite group on the element ids `0..order`.
///
/// Elements carry optional human-readable labels (e.g. cycle notation for
/// permutations); the table is the only source of truth for the structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(LabError::Structural("group must be non-empty".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(LabError::Structural(format!(
                    "row {i} of multiplication table has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(LabError::Structural(format!("table entry {bad} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| LabError::Structural("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| LabError::Structural(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(LabError::Structural(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(Self { table, identity, inverse, labels })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` with element `k` meaning `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self { table, identity: 0, inverse, labels }
    }

    /// Direct product; element `(a, b)` has id `a * |other| + b`.
    pub fn product(&self, other: &Self) -> Self {
        let (n, m) = (self.order(), other.order());
        let mut table = vec![vec![0; n * m]; n * m];
        for a in 0..n {
            for b in 0..m {
                for c in 0..n {
                    for d in 0..m {
                        table[a * m + b][c * m + d] = self.mul(a, c) * m + other.mul(b, d);
                    }
                }
            }
        }
        let identity = self.identity * m + other.identity;
        let inverse = (0..n * m)
            .map(|x| self.inv(x / m) * m + other.inv(x % m))
            .collect();
        let labels = (0..n * m)
            .map(|x| format!("({},{})", self.labels[x / m], other.labels[x % m]))
            .collect();
        Self { table, identity, inverse, labels }
    }

    /// The symmetric group on `0..n`; element ids follow lexicographic order
    /// of the one-line notation, so id 0 is the identity. Composition is
    /// `(a*b)(i) = a(b(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = all_permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&i| a[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect::<Vec<Vec<usize>>>();
        let inverse = perms
            .iter()
            .map(|a| {
                let mut inv = vec![0; n];
                for (i, &ai) in a.iter().enumerate() {
                    inv[ai] = i;
                }
                index(&inv)
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self { table, identity: 0, inverse, labels }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(LabError::DimensionMismatch { expected: self.order(), found: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if a < self.order() {
            Ok(())
        } else {
            Err(LabError::UnknownElement { element: a, order: self.order() })
        }
    }

    /// Smallest subgroup containing `generators`, as sorted element ids.
    pub fn generated_by(&self, generators: &[usize]) -> Result<Vec<usize>> {
        for &g in generators {
            self.check_element(g)?;
        }
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(set.into_iter().collect())
    }

    /// Greedy generating set: each element not yet reached is added in id order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = BTreeSet::from([self.identity]);
        for e in 0..self.order() {
            if !reached.contains(&e) {
                gens.push(e);
                reached = self.generated_by(&gens).expect("valid ids").into_iter().collect();
            }
        }
        gens
    }

    /// Restricts to a subset closed under multiplication and relabels it as
    /// `0..k` in the order given. Returns the subgroup together with the
    /// embedding `sub id -> parent id`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<(Self, Vec<usize>)> {
        for &e in elements {
            self.check_element(e)?;
        }
        let unique: BTreeSet<usize> = elements.iter().copied().collect();
        if unique.len() != elements.len() {
            return Err(LabError::Structural("subgroup elements repeated".into()));
        }
        if !unique.contains(&self.identity) {
            return Err(LabError::Structural("subset does not contain the identity".into()));
        }
        let pos = |x: usize| elements.iter().position(|&e| e == x);
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let c = self.mul(a, b);
                row.push(pos(c).ok_or_else(|| {
                    LabError::Structural(format!(
                        "subset not closed under multiplication: {} * {} = {}",
                        self.label(a),
                        self.label(b),
                        self.label(c)
                    ))
                })?);
            }
            table.push(row);
        }
        let sub = Self::from_table(table)?
            .with_labels(elements.iter().map(|&e| self.labels[e].clone()).collect())?;
        Ok((sub, elements.to_vec()))
    }
}

pub(crate) fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Cycle notation with 1-based points, e.g. `(1 2)(3 4)`; identity is `()`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = p[start];
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
