//! Planar link diagrams in PD form.
//!
//! A crossing lists the four edges meeting at it in counterclockwise order,
//! starting from the incoming under-strand. So in `X[a,b,c,d]` the under
//! strand runs `a -> c` and the over strand joins `b` and `d`; the direction of
//! the over strand is recovered by tracing components. The canonical example
//! is the trefoil `X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]`.
//!
//! Edges are cut at every crossing, so each edge id appears exactly twice.
//! Crossingless unknotted components cannot be written in PD form and are
//! carried as an explicit `unknots` count.

mod braid;
mod pd;
pub(crate) mod tangle;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use braid::{braid_closure, BraidWord};
pub use pd::parse_pd;

pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("edge id 0 is not allowed (ids are positive)")]
    ZeroEdge,
    #[error("edge {edge} appears {count} times (expected exactly 2)")]
    EdgeMultiplicity { edge: EdgeId, count: usize },
    #[error("strand orientation is inconsistent at crossing {0}")]
    InconsistentOrientation(usize),
    #[error("diagram is not planar: a connected piece has V - E + F = {euler}")]
    NotPlanar { euler: i64 },
    #[error("diagram is not reduced")]
    NotReduced,
    #[error("edge {0} does not exist in the diagram")]
    InvalidArc(EdgeId),
    #[error("a crossingless component must be selected for a diagram without crossings")]
    ArcRequired,
    #[error("invalid braid: {0}")]
    InvalidBraid(String),
}

/// A position around a crossing: `position` 0..4 counterclockwise from the
/// incoming under-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: usize,
    pub position: u8,
}

impl Slot {
    fn new(crossing: usize, position: u8) -> Self {
        Slot { crossing, position }
    }

    fn opposite(self) -> Self {
        Slot::new(self.crossing, (self.position + 2) % 4)
    }

    fn index(self) -> usize {
        4 * self.crossing + self.position as usize
    }
}

/// The angular sector at a crossing between slot `index` and slot `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub crossing: usize,
    pub index: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossing {
    edges: [EdgeId; 4],
    over_in: u8,
}

impl Crossing {
    pub fn edges(&self) -> [EdgeId; 4] {
        self.edges
    }

    /// Slot (1 or 3) where the over-strand enters.
    pub fn over_entry(&self) -> u8 {
        self.over_in
    }

    /// +1 for a right-handed crossing, -1 for a left-handed one.
    pub fn sign(&self) -> i8 {
        if self.over_in == 3 {
            1
        } else {
            -1
        }
    }

    fn is_entry(&self, position: u8) -> bool {
        position == 0 || position == self.over_in
    }
}

/// A region of the diagram's complement on the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<Corner>,
}

impl Face {
    pub fn size(&self) -> usize {
        self.boundary.len()
    }
}

/// A validated, immutable link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    unknots: usize,
    /// (tail, head) slot of every edge, following the orientation.
    ends: BTreeMap<EdgeId, (Slot, Slot)>,
    /// Entry slots of each traced component, in traversal order.
    components: Vec<Vec<Slot>>,
}

impl LinkDiagram {
    /// The diagram of `unknots` unlinked round circles.
    pub fn unlink(unknots: usize) -> Self {
        LinkDiagram { crossings: Vec::new(), unknots, ends: BTreeMap::new(), components: Vec::new() }
    }

    pub fn from_pd(codes: Vec<[EdgeId; 4]>, unknots: usize) -> Result<Self, DiagramError> {
        Self::build(codes, unknots, None)
    }

    /// Like [`from_pd`](Self::from_pd), but components that only pass over
    /// other strands take their direction from `over_entry[i]` (1 or 3).
    pub(crate) fn from_pd_oriented(
        codes: Vec<[EdgeId; 4]>,
        unknots: usize,
        over_entry: &[u8],
    ) -> Result<Self, DiagramError> {
        Self::build(codes, unknots, Some(over_entry))
    }

    /// Builds a diagram from crossings whose slots are counterclockwise but not
    /// yet rotated to the PD convention. `over_odd` tells whether slots 1 and 3
    /// carry the over-strand. Components are oriented by tracing from their
    /// lowest slot.
    pub(crate) fn from_unoriented(raw: &[([EdgeId; 4], bool)], unknots: usize) -> Result<Self, DiagramError> {
        let n = raw.len();
        let partner = partner_map(raw.iter().map(|r| r.0))?;
        let mut entering = vec![None::<bool>; 4 * n];
        for start in 0..4 * n {
            if entering[start].is_some() {
                continue;
            }
            let mut s = start;
            loop {
                entering[s] = Some(true);
                let out = s ^ 2;
                entering[out] = Some(false);
                s = partner[out];
                if s == start {
                    break;
                }
            }
        }
        let mut codes = Vec::with_capacity(n);
        let mut hints = Vec::with_capacity(n);
        for (c, (edges, over_odd)) in raw.iter().enumerate() {
            let under = if *over_odd { [0usize, 2] } else { [1, 3] };
            let over = if *over_odd { [1usize, 3] } else { [0, 2] };
            let u = if entering[4 * c + under[0]] == Some(true) { under[0] } else { under[1] };
            let o = if entering[4 * c + over[0]] == Some(true) { over[0] } else { over[1] };
            codes.push([0, 1, 2, 3].map(|k| edges[(u + k) % 4]));
            hints.push(((o + 4 - u) % 4) as u8);
        }
        Self::build(codes, unknots, Some(&hints))
    }

    fn build(codes: Vec<[EdgeId; 4]>, unknots: usize, hints: Option<&[u8]>) -> Result<Self, DiagramError> {
        if codes.is_empty() {
            return Ok(Self::unlink(unknots));
        }
        let n = codes.len();
        let partner = partner_map(codes.iter().copied())?;

        let mut over_in = vec![0u8; n];
        let mut visited = vec![false; 4 * n];
        let mut components = Vec::new();
        let trace = |start: Slot, visited: &mut Vec<bool>, over_in: &mut Vec<u8>| -> Result<Vec<Slot>, DiagramError> {
            let mut passages = Vec::new();
            let mut s = start;
            loop {
                if s.position == 2 {
                    return Err(DiagramError::InconsistentOrientation(s.crossing));
                }
                if s.position % 2 == 1 {
                    over_in[s.crossing] = s.position;
                }
                visited[s.index()] = true;
                visited[s.opposite().index()] = true;
                passages.push(s);
                let next = partner[s.opposite().index()];
                s = Slot::new(next / 4, (next % 4) as u8);
                if s == start {
                    return Ok(passages);
                }
                if visited[s.index()] {
                    return Err(DiagramError::InconsistentOrientation(s.crossing));
                }
            }
        };
        for c in 0..n {
            if !visited[4 * c] {
                components.push(trace(Slot::new(c, 0), &mut visited, &mut over_in)?);
            }
        }
        for c in 0..n {
            if !visited[4 * c + 1] {
                let pos = hints.map_or(1, |h| if h[c] == 3 { 3 } else { 1 });
                components.push(trace(Slot::new(c, pos), &mut visited, &mut over_in)?);
            }
        }

        let crossings: Vec<Crossing> =
            codes.into_iter().zip(over_in).map(|(edges, over_in)| Crossing { edges, over_in }).collect();
        let mut ends = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for p in 0..4u8 {
                if !x.is_entry(p) {
                    let tail = Slot::new(c, p);
                    let h = partner[tail.index()];
                    ends.insert(x.edges[p as usize], (tail, Slot::new(h / 4, (h % 4) as u8)));
                }
            }
        }
        let diagram = LinkDiagram { crossings, unknots, ends, components };
        diagram.check_planar()?;
        Ok(diagram)
    }

    fn check_planar(&self) -> Result<(), DiagramError> {
        let faces = self.faces();
        let pieces = self.projection_pieces();
        let count = pieces.iter().copied().max().map_or(0, |m| m + 1);
        let mut vertices = vec![0i64; count];
        let mut face_count = vec![0i64; count];
        for &p in &pieces {
            vertices[p] += 1;
        }
        for f in &faces {
            face_count[pieces[f.boundary[0].crossing]] += 1;
        }
        for (v, f) in vertices.into_iter().zip(face_count) {
            let euler = v - 2 * v + f;
            if euler != 2 {
                return Err(DiagramError::NotPlanar { euler });
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of crossingless unknotted components.
    pub fn unknots(&self) -> usize {
        self.unknots
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ends.keys().copied()
    }

    /// Tail and head slot of an edge with respect to the diagram orientation.
    pub fn edge_ends(&self, edge: EdgeId) -> Option<(Slot, Slot)> {
        self.ends.get(&edge).copied()
    }

    /// The slot at the other end of the edge leaving `slot`.
    pub(crate) fn partner(&self, slot: Slot) -> Slot {
        let edge = self.crossings[slot.crossing].edges[slot.position as usize];
        let (a, b) = self.ends[&edge];
        if a == slot {
            b
        } else {
            a
        }
    }

    /// Entry slots of each component met by at least one crossing, in
    /// traversal order. Even positions are under-passes.
    pub fn component_passages(&self) -> &[Vec<Slot>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len() + self.unknots
    }

    /// Connected piece of the projection graph containing each crossing.
    pub fn projection_pieces(&self) -> Vec<usize> {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (tail, head) in self.ends.values() {
            let a = find(&mut parent, tail.crossing);
            let b = find(&mut parent, head.crossing);
            parent[a] = b;
        }
        let mut label = BTreeMap::new();
        (0..n)
            .map(|c| {
                let root = find(&mut parent, c);
                let next = label.len();
                *label.entry(root).or_insert(next)
            })
            .collect()
    }

    /// True when the projection is one connected piece and there are no
    /// extra crossingless circles (a single crossingless circle counts as
    /// connected).
    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() {
            return self.unknots == 1;
        }
        self.unknots == 0 && self.projection_pieces().iter().all(|&p| p == 0)
    }

    /// Faces of the diagram as orbits of the corner successor map. Each corner
    /// lies in exactly one face.
    pub fn faces(&self) -> Vec<Face> {
        let n = self.crossings.len();
        let mut seen = vec![false; 4 * n];
        let mut faces = Vec::new();
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            let mut boundary = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                let corner = Corner { crossing: k / 4, index: (k % 4) as u8 };
                boundary.push(corner);
                let next = self.partner(Slot::new(corner.crossing, (corner.index + 1) % 4));
                k = next.index();
            }
            faces.push(Face { boundary });
        }
        faces
    }

    /// Face index of every corner, plus the faces themselves.
    pub(crate) fn corner_faces(&self) -> (Vec<usize>, Vec<Face>) {
        let faces = self.faces();
        let mut owner = vec![0; 4 * self.crossings.len()];
        for (i, f) in faces.iter().enumerate() {
            for c in &f.boundary {
                owner[4 * c.crossing + c.index as usize] = i;
            }
        }
        (owner, faces)
    }

    /// Over/under alternate along every component.
    pub fn is_alternating(&self) -> bool {
        self.components.iter().all(|passages| {
            let k = passages.len();
            (0..k).all(|i| passages[i].position % 2 != passages[(i + 1) % k].position % 2)
        })
    }

    /// No face meets the same crossing twice, i.e. there is no nugatory crossing.
    pub fn is_reduced(&self) -> bool {
        self.faces().iter().all(|f| {
            let mut seen: Vec<usize> = f.boundary.iter().map(|c| c.crossing).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Number of twists: classes of crossings joined through bigon faces.
    pub fn twist_number(&self) -> Result<usize, DiagramError> {
        if !self.is_reduced() {
            return Err(DiagramError::NotReduced);
        }
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut twists = n;
        for f in self.faces().iter().filter(|f| f.size() == 2) {
            let a = find(&mut parent, f.boundary[0].crossing);
            let b = find(&mut parent, f.boundary[1].crossing);
            if a != b {
                parent[a] = b;
                twists -= 1;
            }
        }
        Ok(twists)
    }

    /// Swaps over and under at every crossing, keeping edge ids and orientation.
    pub fn mirror(&self) -> LinkDiagram {
        let mut codes = Vec::with_capacity(self.crossings.len());
        let mut hints = Vec::with_capacity(self.crossings.len());
        for x in &self.crossings {
            let [a, b, c, d] = x.edges;
            if x.over_in == 1 {
                codes.push([b, c, d, a]);
                hints.push(3);
            } else {
                codes.push([d, a, b, c]);
                hints.push(1);
            }
        }
        Self::build(codes, self.unknots, Some(&hints)).expect("mirror of a valid diagram is valid")
    }

    /// Connected sum along one edge of each diagram.
    ///
    /// `arc` is `None` exactly when the corresponding diagram has no crossings;
    /// one of its unknotted circles is then absorbed.
    pub fn connected_sum(
        &self,
        arc: Option<EdgeId>,
        other: &LinkDiagram,
        other_arc: Option<EdgeId>,
    ) -> Result<LinkDiagram, DiagramError> {
        let check = |d: &LinkDiagram, arc: Option<EdgeId>| match (d.crossings.is_empty(), arc) {
            (true, None) if d.unknots > 0 => Ok(()),
            (true, _) => Err(DiagramError::ArcRequired),
            (false, None) => Err(DiagramError::ArcRequired),
            (false, Some(e)) if d.ends.contains_key(&e) => Ok(()),
            (false, Some(e)) => Err(DiagramError::InvalidArc(e)),
        };
        check(self, arc)?;
        check(other, other_arc)?;
        if other.crossings.is_empty() {
            let mut d = self.clone();
            d.unknots += other.unknots - 1;
            return Ok(d);
        }
        if self.crossings.is_empty() {
            let mut d = other.clone();
            d.unknots += self.unknots - 1;
            return Ok(d);
        }
        let (e1, e2) = (arc.unwrap(), other_arc.unwrap());
        let offset = self.ends.keys().next_back().copied().unwrap_or(0);
        let shift = self.crossings.len();
        let (_, head1) = self.ends[&e1];
        let (_, head2) = other.ends[&e2];
        let mut codes: Vec<[EdgeId; 4]> = self.crossings.iter().map(|x| x.edges).collect();
        codes.extend(other.crossings.iter().map(|x| x.edges.map(|e| e + offset)));
        let mut hints: Vec<u8> = self.crossings.iter().map(|x| x.over_in).collect();
        hints.extend(other.crossings.iter().map(|x| x.over_in));
        codes[head2.crossing + shift][head2.position as usize] = e1;
        codes[head1.crossing][head1.position as usize] = e2 + offset;
        let codes = renumber(codes);
        Self::build(codes, self.unknots + other.unknots, Some(&hints))
    }

    /// The PD text of this diagram.
    pub fn to_pd_string(&self) -> String {
        pd::serialize(self)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

/// Relabels edges as 1, 2, ... in order of first appearance.
pub(crate) fn renumber(codes: Vec<[EdgeId; 4]>) -> Vec<[EdgeId; 4]> {
    let mut map = BTreeMap::new();
    codes
        .into_iter()
        .map(|x| {
            x.map(|e| {
                let next = map.len() as EdgeId + 1;
                *map.entry(e).or_insert(next)
            })
        })
        .collect()
}

/// Slot index (4*crossing + position) paired with each slot through its edge.
fn partner_map(codes: impl Iterator<Item = [EdgeId; 4]>) -> Result<Vec<usize>, DiagramError> {
    let mut seen: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (c, x) in codes.enumerate() {
        for (p, &e) in x.iter().enumerate() {
            if e == 0 {
                return Err(DiagramError::ZeroEdge);
            }
            seen.entry(e).or_default().push(4 * c + p);
        }
    }
    let mut partner = vec![0; 4 * seen.values().map(Vec::len).sum::<usize>() / 4];
    for (&edge, slots) in &seen {
        if slots.len() != 2 {
            return Err(DiagramError::EdgeMultiplicity { edge, count: slots.len() });
        }
        partner[slots[0]] = slots[1];
        partner[slots[1]] = slots[0];
    }
    Ok(partner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> LinkDiagram {
        parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap()
    }

    fn hopf() -> LinkDiagram {
        parse_pd("X[1,4,2,3] X[3,2,4,1]").unwrap()
    }

    fn kink() -> LinkDiagram {
        parse_pd("X[1,1,2,2]").unwrap()
    }

    #[test]
    fn trefoil_pd_basics() {
        let d = trefoil();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.faces().len(), 5);
        assert!(d.is_alternating());
        assert!(d.is_reduced());
        assert_eq!(d.twist_number().unwrap(), 1);
    }

    #[test]
    fn hopf_has_two_components_and_four_faces() {
        let d = hopf();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.faces().len(), 4);
        assert_eq!(d.twist_number().unwrap(), 1);
    }

    #[test]
    fn kink_is_not_reduced() {
        let d = kink();
        assert_eq!(d.faces().len(), 3);
        assert_eq!(d.component_count(), 1);
        assert!(!d.is_reduced());
        assert_eq!(d.twist_number(), Err(DiagramError::NotReduced));
    }

    #[test]
    fn face_sizes_sum_to_four_per_crossing() {
        for d in [trefoil(), hopf(), kink()] {
            let total: usize = d.faces().iter().map(Face::size).sum();
            assert_eq!(total, 4 * d.crossing_count());
        }
    }

    #[test]
    fn repeated_edges_are_rejected() {
        // Every id occurs twice here, but both copies of edge 1 claim to be incoming.
        assert!(parse_pd("X[1,4,2,3] X[1,4,2,3]").is_err());
        assert_eq!(parse_pd("X[1,1,2,2] X[1,1,2,2]"), Err(DiagramError::EdgeMultiplicity { edge: 1, count: 4 }));
        assert!(matches!(parse_pd("X[1,2,3,4]"), Err(DiagramError::EdgeMultiplicity { .. })));
    }

    #[test]
    fn non_planar_code_is_rejected() {
        // A single component with Gauss code 1 2 1 2 cannot be drawn on the sphere.
        let r = parse_pd("X[1,3,2,4] X[4,2,1,3]");
        assert!(matches!(r, Err(DiagramError::NotPlanar { .. })), "{r:?}");
    }

    #[test]
    fn backwards_under_strand_is_rejected() {
        // Edge 2 leaves the first crossing under and would enter the second as its outgoing under-strand.
        let r = parse_pd("X[1,4,2,3] X[4,1,2,3]");
        assert!(r.is_err());
    }

    #[test]
    fn mirror_is_an_involution_and_keeps_properties() {
        for d in [trefoil(), hopf(), kink()] {
            let m = d.mirror();
            assert_eq!(m.mirror(), d);
            assert_eq!(m.is_alternating(), d.is_alternating());
            assert_eq!(m.is_reduced(), d.is_reduced());
            assert_eq!(m.component_count(), d.component_count());
        }
        let signs: Vec<i8> = trefoil().crossings().iter().map(Crossing::sign).collect();
        let mirrored: Vec<i8> = trefoil().mirror().crossings().iter().map(Crossing::sign).collect();
        assert_eq!(signs.iter().map(|s| -s).collect::<Vec<_>>(), mirrored);
    }

    #[test]
    fn connected_sums() {
        let t = trefoil();
        let tt = t.connected_sum(Some(1), &t, Some(1)).unwrap();
        assert_eq!(tt.crossing_count(), 6);
        assert_eq!(tt.component_count(), 1);
        assert!(tt.is_reduced());

        let ht = hopf().connected_sum(Some(1), &t, Some(2)).unwrap();
        assert_eq!(ht.crossing_count(), 5);
        assert_eq!(ht.component_count(), 2);

        let u = LinkDiagram::unlink(1);
        assert_eq!(t.connected_sum(Some(3), &u, None).unwrap(), t);
        assert_eq!(u.connected_sum(None, &t, Some(3)).unwrap(), t);
        assert_eq!(t.connected_sum(Some(99), &t, Some(1)), Err(DiagramError::InvalidArc(99)));
        assert_eq!(t.connected_sum(None, &t, Some(1)), Err(DiagramError::ArcRequired));
    }

    #[test]
    fn empty_diagram_conventions() {
        let u = LinkDiagram::unlink(3);
        assert_eq!(u.component_count(), 3);
        assert!(u.is_alternating());
        assert!(u.is_reduced());
        assert_eq!(u.twist_number().unwrap(), 0);
        assert!(u.faces().is_empty());
        assert!(!u.is_connected());
        assert!(LinkDiagram::unlink(1).is_connected());
    }
}
