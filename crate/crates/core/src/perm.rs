//! Permutations of a contiguous label range `{base, ..., base + n - 1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    base: usize,
    images: Vec<usize>,
}

impl Permutation {
    /// `images[i]` is the image of `base + i`.
    pub fn new(base: usize, images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v < base || v >= base + n || seen[v - base] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of {base}..{}: {images:?}",
                    base + n - 1
                )));
            }
            seen[v - base] = true;
        }
        Ok(Permutation { base, images })
    }

    pub fn from_fn(base: usize, n: usize, f: impl Fn(usize) -> usize) -> Result<Permutation> {
        Permutation::new(base, (base..base + n).map(f).collect())
    }

    pub fn identity(base: usize, n: usize) -> Permutation {
        Permutation {
            base,
            images: (base..base + n).collect(),
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - self.base]
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!((self.base, self.len()), (other.base, other.len()));
        Permutation {
            base: self.base,
            images: other.images.iter().map(|&j| self.apply(j)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - self.base] = self.base + i;
        }
        Permutation {
            base: self.base,
            images: inv,
        }
    }

    /// Cycles in order of their smallest element, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j + self.base);
                j = self.images[j] - self.base;
            }
            out.push(cyc);
        }
        out
    }

    /// True when the permutation is a single cycle through every label.
    pub fn is_full_cycle(&self) -> bool {
        self.cycles().len() == 1
    }

    /// Cycle notation, e.g. `(7,5,3,1)(6,4,2)`, omitting fixed points.
    pub fn cycle_string(&self) -> String {
        let mut s = String::new();
        for c in self.cycles() {
            if c.len() < 2 {
                continue;
            }
            // start each cycle at its largest element
            let k = c.iter().enumerate().max_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap_or(0);
            let rot: Vec<String> = c[k..].iter().chain(&c[..k]).map(|v| v.to_string()).collect();
            s.push('(');
            s.push_str(&rot.join(","));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", v.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(1, vec![1, 1, 2]).is_err());
        assert!(Permutation::new(1, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn cycle_notation() {
        let p = Permutation::new(1, vec![7, 6, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(p.cycle_string(), "(7,5,3,1)(6,4,2)");
        assert!(!p.is_full_cycle());
        let q = Permutation::new(1, vec![7, 1, 2, 3, 4, 5, 6]).unwrap();
        assert!(q.is_full_cycle());
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::new(0, vec![2, 0, 1, 3]).unwrap();
        let id = Permutation::identity(0, 4);
        assert_eq!(p.compose(&p.inverse()), id);
        assert_eq!(p.compose(&p).apply(0), 1);
    }
}
