//! Rational tangles built by twisting, used to generate 2-bridge diagrams.
//!
//! Every crossing is stored with counterclockwise slots `[NE, NW, SW, SE]`.

use super::{renumber, DiagramError, EdgeId, LinkDiagram};

#[derive(Debug, Clone)]
pub(crate) struct Tangle {
    crossings: Vec<([EdgeId; 4], bool)>,
    /// Edge ids at the NW, NE, SW, SE boundary points.
    ends: [EdgeId; 4],
    next: EdgeId,
}

const NW: usize = 0;
const NE: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

impl Tangle {
    /// Two horizontal arcs, NW-NE and SW-SE.
    pub(crate) fn zero() -> Self {
        Tangle { crossings: Vec::new(), ends: [1, 1, 2, 2], next: 3 }
    }

    /// Adds a crossing on the east side joining the NE and SE ends.
    /// `ne_over` selects whether the SW-NE diagonal of the new crossing is over.
    pub(crate) fn twist_east(&mut self, ne_over: bool) {
        let (ne, se) = (self.next, self.next + 1);
        self.next += 2;
        self.crossings.push(([ne, self.ends[NE], self.ends[SE], se], !ne_over));
        self.ends[NE] = ne;
        self.ends[SE] = se;
    }

    /// Adds a crossing on the south side joining the SW and SE ends.
    pub(crate) fn twist_south(&mut self, ne_over: bool) {
        let (sw, se) = (self.next, self.next + 1);
        self.next += 2;
        self.crossings.push(([self.ends[SE], self.ends[SW], sw, se], !ne_over));
        self.ends[SW] = sw;
        self.ends[SE] = se;
    }

    /// Joins NW to NE and SW to SE outside the tangle.
    #[cfg(test)]
    pub(crate) fn numerator(&self) -> Result<LinkDiagram, DiagramError> {
        self.close([(NW, NE), (SW, SE)])
    }

    /// Joins NW to SW and NE to SE outside the tangle.
    pub(crate) fn denominator(&self) -> Result<LinkDiagram, DiagramError> {
        self.close([(NW, SW), (NE, SE)])
    }

    fn close(&self, pairs: [(usize, usize); 2]) -> Result<LinkDiagram, DiagramError> {
        let mut parent: std::collections::BTreeMap<EdgeId, EdgeId> = Default::default();
        fn find(p: &mut std::collections::BTreeMap<EdgeId, EdgeId>, x: EdgeId) -> EdgeId {
            let mut r = x;
            while let Some(&q) = p.get(&r) {
                if q == r {
                    break;
                }
                r = q;
            }
            r
        }
        let mut loops = 0;
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, self.ends[a]), find(&mut parent, self.ends[b]));
            if ra == rb {
                loops += 1;
            } else {
                parent.insert(ra, rb);
            }
        }
        let raw: Vec<([EdgeId; 4], bool)> =
            self.crossings.iter().map(|(e, o)| (e.map(|x| find(&mut parent, x)), *o)).collect();
        // A closing arc that meets its own other end never passes a crossing.
        let unknots = loops;
        let edges: Vec<[EdgeId; 4]> = renumber(raw.iter().map(|r| r.0).collect());
        let raw: Vec<([EdgeId; 4], bool)> = edges.into_iter().zip(raw.iter().map(|r| r.1)).collect();
        LinkDiagram::from_unoriented(&raw, unknots)
    }
}
