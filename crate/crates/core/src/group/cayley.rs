//! Finite groups given by explicit multiplication tables.

use std::collections::HashMap;

use super::{GroupError, Permutation};

/// A finite group of order n on elements `{0..n-1}`, stored as its full
/// multiplication table. Construction validates associativity, a two-sided
/// identity, and two-sided inverses, so a value of this type is always an
/// actual group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::InvalidTable {
                reason: "empty table".into(),
            });
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::InvalidTable {
                    reason: format!("row {i} has length {} in a table of order {order}", row.len()),
                });
            }
            for &entry in row {
                if entry >= order {
                    return Err(GroupError::InvalidTable {
                        reason: format!("entry {entry} out of range in row {i}"),
                    });
                }
                table.push(entry);
            }
        }

        let at = |a: usize, b: usize| table[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable {
                reason: "no two-sided identity".into(),
            })?;

        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| GroupError::InvalidTable {
                    reason: format!("element {a} has no two-sided inverse"),
                })?;
            inverses.push(inv);
        }

        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::InvalidTable {
                            reason: format!("associativity fails at ({a}, {b}, {c})"),
                        });
                    }
                }
            }
        }

        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverses,
        })
    }

    /// The cyclic group Z_n under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(rows).expect("addition mod n is a group")
    }

    /// The symmetric group S_n, elements indexed by the lexicographic order of
    /// their image tables (index 0 is the identity). Capped at n = 5 to keep
    /// tables small.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::InvalidTable {
                reason: format!("symmetric group supported for 1 <= n <= 5, got {n}"),
            });
        }
        let perms = all_permutations_lex(n);
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().to_vec(), i))
            .collect();
        let rows = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index[a.compose(b).expect("same size").images()])
                    .collect()
            })
            .collect();
        Self::from_table(rows)
    }

    /// The dihedral group D_n of order 2n. Indices 0..n are the rotations
    /// r^i, indices n..2n the reflections s·r^i.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidTable {
                reason: "dihedral group needs n >= 1".into(),
            });
        }
        // Element (f, i) acts on Z_n as x -> (-1)^f x + i; composition gives
        // (f1, i1)(f2, i2) = (f1 xor f2, i1 + (-1)^{f1} i2).
        let encode = |f: usize, i: usize| f * n + i;
        let mut rows = vec![vec![0; 2 * n]; 2 * n];
        for f1 in 0..2 {
            for i1 in 0..n {
                for f2 in 0..2 {
                    for i2 in 0..n {
                        let signed = if f1 == 0 { i2 } else { (n - i2) % n };
                        rows[encode(f1, i1)][encode(f2, i2)] =
                            encode(f1 ^ f2, (i1 + signed) % n);
                    }
                }
            }
        }
        Self::from_table(rows)
    }

    /// Parses the table format used on disk: a first line holding the order
    /// n, then n lines of n space-separated element indices.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| GroupError::Parse("empty input".into()))?;
        let order: usize = first
            .trim()
            .parse()
            .map_err(|_| GroupError::Parse(format!("bad order line {first:?}")))?;
        let mut rows = Vec::with_capacity(order);
        for _ in 0..order {
            let line = lines
                .next()
                .ok_or_else(|| GroupError::Parse(format!("expected {order} table rows")))?;
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| GroupError::Parse(format!("bad table entry {tok:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(GroupError::Parse("trailing data after table rows".into()));
        }
        Self::from_table(rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        assert!(a < self.order && b < self.order);
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        assert!(a < self.order);
        self.inverses[a]
    }

    fn check_index(&self, g: usize) -> Result<(), GroupError> {
        if g >= self.order {
            return Err(GroupError::IndexOutOfRange {
                index: g,
                order: self.order,
            });
        }
        Ok(())
    }

    /// Conjugation by g0 as a permutation of the element indices:
    /// x -> g0 x g0^{-1}.
    pub fn inner_automorphism(&self, g0: usize) -> Result<Permutation, GroupError> {
        self.check_index(g0)?;
        let inv = self.inv(g0);
        let images = (0..self.order).map(|x| self.mul(self.mul(g0, x), inv)).collect();
        Ok(Permutation::from_images(images).expect("conjugation is a bijection"))
    }

    /// All |G| conjugation maps, in element order. Distinct elements with the
    /// same conjugation action each contribute a copy.
    pub fn inner_automorphisms(&self) -> Vec<Permutation> {
        (0..self.order)
            .map(|g| self.inner_automorphism(g).expect("index in range"))
            .collect()
    }

    /// Smallest g0 with g0 g2 g0^{-1} = g1, if the two are conjugate.
    pub fn conjugacy_oracle(&self, g1: usize, g2: usize) -> Result<Option<usize>, GroupError> {
        self.check_index(g1)?;
        self.check_index(g2)?;
        for g0 in 0..self.order {
            if self.mul(self.mul(g0, g2), self.inv(g0)) == g1 {
                return Ok(Some(g0));
            }
        }
        Ok(None)
    }

    pub fn centralizer_order(&self, g: usize) -> Result<usize, GroupError> {
        self.check_index(g)?;
        Ok((0..self.order).filter(|&h| self.mul(h, g) == self.mul(g, h)).count())
    }

    pub fn conjugacy_class(&self, g: usize) -> Result<Vec<usize>, GroupError> {
        self.check_index(g)?;
        let mut class: Vec<usize> = (0..self.order)
            .map(|h| self.mul(self.mul(h, g), self.inv(h)))
            .collect();
        class.sort_unstable();
        class.dedup();
        Ok(class)
    }
}

/// All permutations of `{0..n-1}` in lexicographic order of their image
/// tables.
fn all_permutations_lex(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    build(n, &mut current, &mut used, &mut out);
    out
}

fn build(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    if current.len() == n {
        out.push(Permutation::from_images(current.clone()).expect("built as a bijection"));
        return;
    }
    for x in 0..n {
        if !used[x] {
            used[x] = true;
            current.push(x);
            build(n, current, used, out);
            current.pop();
            used[x] = false;
        }
    }
}
