//! Fixtures shared by the benchmarks.

use linkspine::families::FamilySpec;
use linkspine::LinkDiagram;

/// Closure of the Turk's head braid `Th_n`.
pub fn turks_head(n: u64) -> LinkDiagram {
    FamilySpec::TurksHead(n).diagram().expect("n >= 2").expect("Turk's heads have diagrams")
}

/// Closure of the torus braid for `T(m,q)`.
pub fn torus(m: u64, q: u64) -> LinkDiagram {
    FamilySpec::Torus(m, q).diagram().expect("valid torus parameters").expect("torus diagram")
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_build() {
        assert_eq!(super::turks_head(4).crossing_count(), 8);
        assert_eq!(super::torus(3, 4).crossing_count(), 8);
    }
}
