use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0..n-1}`, stored by its images.
///
/// Composition follows function notation: `g.compose(h)` applies `h` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u32).collect(),
        }
    }

    /// Zero-based image list; fails unless it is a bijection.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::arg(format!(
                    "image list {:?} is not a permutation",
                    one_based(&image)
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            image: image.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Zero-based cycles, e.g. `[[0, 1], [2, 3]]`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(Error::arg(format!("point {} exceeds degree {n}", a + 1)));
                }
                if used[a] {
                    return Err(Error::arg(format!("point {} repeated in cycle notation", a + 1)));
                }
                used[a] = true;
                image[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(image)
    }

    /// Parses 1-based cycle notation `"(1 2)(3 4)"` or a 1-based one-line
    /// image list such as `"2 1 4 3"` or `"[2,1,4,3]"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('(') || t.is_empty() {
            let mut cycles = Vec::new();
            let mut rest = t;
            while let Some(open) = rest.find('(') {
                let close = rest[open..]
                    .find(')')
                    .ok_or_else(|| Error::arg(format!("unbalanced parenthesis in '{text}'")))?
                    + open;
                let body = &rest[open + 1..close];
                let cycle = parse_points(body, text)?;
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                rest = &rest[close + 1..];
            }
            if !rest.trim().is_empty() {
                return Err(Error::arg(format!("trailing text in cycle notation '{text}'")));
            }
            Self::from_cycles(n, &cycles)
        } else {
            let body = t.trim_start_matches('[').trim_end_matches(']');
            let image = parse_points(body, text)?;
            if image.len() != n {
                return Err(Error::arg(format!(
                    "one-line permutation '{text}' has {} entries, expected {n}",
                    image.len()
                )));
            }
            Self::from_images(image)
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&i| i as usize).collect()
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            image: other.image.iter().map(|&i| self.image[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Zero-based cycles of length at least two, each starting at its
    /// minimum, sorted by that minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Lengths of all cycles including fixed points, in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lengths.iter().sum();
        lengths.extend(std::iter::repeat_n(1, self.degree() - moved));
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Places this permutation on the points `offset..offset+degree` of a
    /// larger set of size `n`.
    pub fn shifted(&self, offset: usize, n: usize) -> Permutation {
        let mut image: Vec<u32> = (0..n as u32).collect();
        for (i, &j) in self.image.iter().enumerate() {
            image[offset + i] = offset as u32 + j;
        }
        Permutation { image }
    }
}

fn parse_points(body: &str, whole: &str) -> Result<Vec<usize>> {
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Error::arg(format!("bad point '{s}' in permutation '{whole}'"))),
        })
        .collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized in 1-based cycle notation.
impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
