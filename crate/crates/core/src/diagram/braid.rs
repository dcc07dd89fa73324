use std::fmt;
use std::str::FromStr;

use super::{renumber, DiagramError, EdgeId, LinkDiagram};

/// A braid word: letter `i > 0` is the generator sigma_i, `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::InvalidBraid("strand count must be positive".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(DiagramError::InvalidBraid(format!("letter {l} out of range for {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// `self` repeated `k` times.
    pub fn pow(&self, k: usize) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters.repeat(k) }
    }

    /// Underlying permutation: the strand starting at position `i` ends at `perm[i]`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let p = l.unsigned_abs() as usize - 1;
            at.swap(p, p + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Number of cycles of the permutation, i.e. components of the closure.
    pub fn cycle_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for i in 0..self.strands {
            if !seen[i] {
                cycles += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={} :", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |t: &str| DiagramError::MalformedToken(t.to_string());
        let (head, word) = s.split_once(':').ok_or_else(|| bad(s))?;
        let strands = head
            .trim()
            .strip_prefix("strands=")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| bad(head.trim()))?;
        let letters =
            word.split_whitespace().map(|t| t.parse::<i32>().map_err(|_| bad(t))).collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(strands, letters)
    }
}

/// Closes the braid drawn bottom to top with strands at positions 0..n.
///
/// sigma_i crosses positions i-1 and i; in the positive generator the strand
/// moving up and to the right passes over.
pub fn braid_closure(b: &BraidWord) -> LinkDiagram {
    let n = b.strands;
    let mut cur: Vec<EdgeId> = (1..=n as EdgeId).collect();
    let mut next = n as EdgeId + 1;
    let mut codes = Vec::with_capacity(b.letters.len());
    let mut hints = Vec::with_capacity(b.letters.len());
    for &l in &b.letters {
        let p = l.unsigned_abs() as usize - 1;
        let (sw, se) = (cur[p], cur[p + 1]);
        let (nw, ne) = (next, next + 1);
        next += 2;
        if l > 0 {
            // under-strand runs SE -> NW; over enters from SW (slot 3).
            codes.push([se, ne, nw, sw]);
            hints.push(3);
        } else {
            // under-strand runs SW -> NE; over enters from SE (slot 1).
            codes.push([sw, se, ne, nw]);
            hints.push(1);
        }
        cur[p] = nw;
        cur[p + 1] = ne;
    }
    let mut unknots = 0;
    let mut rename = std::collections::BTreeMap::new();
    for (p, &e) in cur.iter().enumerate() {
        if e == p as EdgeId + 1 {
            unknots += 1;
        } else {
            rename.insert(e, p as EdgeId + 1);
        }
    }
    let codes = codes.into_iter().map(|x| x.map(|e| rename.get(&e).copied().unwrap_or(e))).collect();
    LinkDiagram::from_pd_oriented(renumber(codes), unknots, &hints).expect("braid closures are planar diagrams")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(n, letters.to_vec()).unwrap()
    }

    #[test]
    fn turks_head_closures() {
        let th = word(3, &[1, -2]);
        let th2 = braid_closure(&th.pow(2));
        assert_eq!((th2.crossing_count(), th2.component_count()), (4, 1));
        let th3 = braid_closure(&th.pow(3));
        assert_eq!((th3.crossing_count(), th3.component_count()), (6, 3));
        assert!(th3.is_alternating() && th3.is_reduced());
    }

    #[test]
    fn trefoil_closure() {
        let d = braid_closure(&word(2, &[1, 1, 1]));
        assert_eq!((d.crossing_count(), d.component_count()), (3, 1));
        assert_eq!(d.faces().len(), 5);
        assert_eq!(d.twist_number().unwrap(), 1);
    }

    #[test]
    fn untouched_strands_become_unknots() {
        let d = braid_closure(&word(3, &[1, 1, 1]));
        assert_eq!(d.unknots(), 1);
        assert_eq!(d.component_count(), 2);
        let e = braid_closure(&word(4, &[]));
        assert_eq!(e.component_count(), 4);
    }

    #[test]
    fn validation_and_text() {
        assert!(BraidWord::new(2, vec![2]).is_err());
        assert!(BraidWord::new(2, vec![0]).is_err());
        assert!(BraidWord::new(0, vec![]).is_err());
        let b: BraidWord = "strands=3 : 1 -2 1 -2".parse().unwrap();
        assert_eq!(b, word(3, &[1, -2, 1, -2]));
        assert_eq!(b.to_string().parse::<BraidWord>().unwrap(), b);
        assert_eq!("strands=2 :".parse::<BraidWord>().unwrap(), word(2, &[]));
        assert!("strands=2 1 1".parse::<BraidWord>().is_err());
    }
}
