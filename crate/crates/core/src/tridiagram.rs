use serde::{Deserialize, Serialize};

use crate::diagram::{Axis, SquareDiagram};

/// Three diagrams of one unit cell, projected along axes 1, 2 and 3.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagram {
    pub diagrams: [SquareDiagram; 3],
    pub provenance: Option<String>,
}

impl Tridiagram {
    pub fn new(mut diagrams: [SquareDiagram; 3]) -> Self {
        for (d, a) in diagrams.iter_mut().zip(Axis::ALL) {
            d.axis = Some(a);
        }
        Tridiagram {
            diagrams,
            provenance: None,
        }
    }

    pub fn empty() -> Self {
        Self::new(Default::default())
    }

    pub fn diagram(&self, axis: Axis) -> &SquareDiagram {
        &self.diagrams[axis.index()]
    }

    pub fn triplet(&self) -> CrossingTriplet {
        triplet_of_crossings(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingTriplet {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub c_value: usize,
}

impl CrossingTriplet {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        CrossingTriplet {
            a,
            b,
            c,
            c_value: a * a + b * b + c * c,
        }
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }
}

pub fn triplet_of_crossings(t: &Tridiagram) -> CrossingTriplet {
    let [a, b, c] = [0, 1, 2].map(|i| t.diagrams[i].crossing_count());
    CrossingTriplet::new(a, b, c)
}

/// Marker and puncture counters of a tridiagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// `counters[i]` = (markers of diagram i, puncture pairs crossing the
    /// axis-i faces in each of the two other diagrams, in axis order).
    pub counters: [[usize; 3]; 3],
}

/// Puncture pairs of the diagram projected along `along` that come from
/// strands crossing the faces perpendicular to `face_axis`.
pub fn face_pairs(d: &SquareDiagram, along: Axis, face_axis: Axis) -> usize {
    let (h, _) = along.plane();
    let (lr, bt) = d.puncture_pairs();
    if face_axis.index() == h {
        lr
    } else {
        bt
    }
}

pub fn check_tridiagram(t: &Tridiagram) -> ConsistencyReport {
    let mut counters = [[0; 3]; 3];
    let mut consistent = true;
    for (i, axis) in Axis::ALL.into_iter().enumerate() {
        let markers = t.diagrams[i].marker_count();
        counters[i][0] = markers;
        let mut k = 1;
        for (j, other) in Axis::ALL.into_iter().enumerate() {
            if j == i {
                continue;
            }
            let n = face_pairs(&t.diagrams[j], other, axis);
            counters[i][k] = n;
            k += 1;
            consistent &= n == markers;
        }
    }
    ConsistencyReport {
        consistent,
        counters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_diagram;

    #[test]
    fn empty_tridiagram() {
        let t = Tridiagram::empty();
        assert_eq!(t.triplet(), CrossingTriplet::new(0, 0, 0));
        assert!(check_tridiagram(&t).consistent);
    }

    #[test]
    fn single_crossing_triplet() {
        let curl = parse_diagram("pdg 1\nX 0 a b c d over=02\nA a b\nA c d\n").unwrap();
        let t = Tridiagram::new([curl, SquareDiagram::new(), SquareDiagram::new()]);
        let tr = t.triplet();
        assert_eq!((tr.a, tr.b, tr.c, tr.c_value), (1, 0, 0, 1));
    }

    #[test]
    fn marker_without_punctures_is_inconsistent() {
        let loop3 = parse_diagram("pdg 1\nM 0 a b\nA a b\n").unwrap();
        let t = Tridiagram::new([SquareDiagram::new(), SquareDiagram::new(), loop3]);
        let r = check_tridiagram(&t);
        assert!(!r.consistent);
        assert_eq!(r.counters[2], [1, 0, 0]);
    }
}
