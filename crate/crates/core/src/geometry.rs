//! Face numbering of the dodecahedron and its 60 orientation-preserving
//! symmetries, expressed as permutations of the twelve face indices.
//!
//! The ring table below is the single source of truth: every row lists the
//! five faces around a face in clockwise order seen from outside the solid.
//! Symmetries are obtained by propagating ring alignments, never from
//! coordinates.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub const FACE_COUNT: usize = 12;
pub const MOTION_COUNT: usize = 60;

/// The faces around each face.
const RINGS: [[u8; 5]; FACE_COUNT] = [
    [1, 5, 4, 3, 2],
    [0, 2, 7, 6, 5],
    [0, 3, 8, 7, 1],
    [0, 4, 9, 8, 2],
    [0, 5, 10, 9, 3],
    [0, 1, 6, 10, 4],
    [1, 7, 11, 10, 5],
    [1, 2, 8, 11, 6],
    [2, 3, 9, 11, 7],
    [3, 4, 10, 11, 8],
    [4, 5, 6, 11, 9],
    [6, 7, 8, 9, 10],
];

/// Order in which rings are walked when extending a motion from faces 0
/// and 1 to the whole solid. Each entry is `(centre, anchor)` where both
/// images are already known when the ring is visited.
const PROPAGATION: [(u8, u8); 5] = [(0, 1), (1, 0), (5, 0), (7, 1), (8, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("face index {0} out of range 0..=11")]
    FaceOutOfRange(usize),
    #[error("faces {f0} and {f1} do not share an edge")]
    NotAdjacent { f0: FaceId, f1: FaceId },
    #[error("not a symmetry of the dodecahedron: {0:?}")]
    NotASymmetry([u8; FACE_COUNT]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(u8);

impl FaceId {
    pub fn new(value: usize) -> Result<Self, GeometryError> {
        if value < FACE_COUNT {
            Ok(FaceId(value as u8))
        } else {
            Err(GeometryError::FaceOutOfRange(value))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = FaceId> {
        (0..FACE_COUNT as u8).map(FaceId)
    }

    /// The five faces sharing an edge with `self`, in table order.
    pub fn ring(self) -> [FaceId; 5] {
        RINGS[self.index()].map(FaceId)
    }

    pub fn is_adjacent(self, other: FaceId) -> bool {
        RINGS[self.index()].contains(&other.0)
    }

    fn ring_position(self, other: FaceId) -> Option<usize> {
        RINGS[self.index()].iter().position(|&f| f == other.0)
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered list of the 5 neighbouring faces of `face`.
pub fn ring_of(face: FaceId) -> [FaceId; 5] {
    face.ring()
}

/// A positive motion, given by the images of faces 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Motion {
    f0: FaceId,
    f1: FaceId,
}

impl Motion {
    pub fn new(f0: usize, f1: usize) -> Result<Self, GeometryError> {
        let (f0, f1) = (FaceId::new(f0)?, FaceId::new(f1)?);
        if !f0.is_adjacent(f1) {
            return Err(GeometryError::NotAdjacent { f0, f1 });
        }
        Ok(Motion { f0, f1 })
    }

    pub fn f0(self) -> FaceId {
        self.f0
    }

    pub fn f1(self) -> FaceId {
        self.f1
    }

    /// All 60 motions: `f0` ascending, `f1` in ring order of `f0`.
    pub fn all() -> impl Iterator<Item = Motion> {
        FaceId::all().flat_map(|f0| f0.ring().into_iter().map(move |f1| Motion { f0, f1 }))
    }
}

impl fmt::Display for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.f0, self.f1)
    }
}

/// A bijection on the 12 faces: `images[i]` is the image of face `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacePermutation {
    images: [u8; FACE_COUNT],
}

impl FacePermutation {
    pub const IDENTITY: FacePermutation = FacePermutation {
        images: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
    };

    /// Checked constructor: the images must form an adjacency-preserving
    /// bijection.
    pub fn from_images(images: [u8; FACE_COUNT]) -> Result<Self, GeometryError> {
        let mut seen = [false; FACE_COUNT];
        for &f in &images {
            let f = f as usize;
            if f >= FACE_COUNT || seen[f] {
                return Err(GeometryError::NotASymmetry(images));
            }
            seen[f] = true;
        }
        let p = FacePermutation { images };
        if !p.preserves_adjacency() {
            return Err(GeometryError::NotASymmetry(images));
        }
        Ok(p)
    }

    pub fn apply(&self, face: FaceId) -> FaceId {
        FaceId(self.images[face.index()])
    }

    pub fn images(&self) -> [u8; FACE_COUNT] {
        self.images
    }

    /// `(a ∘ b)[i] = a[b[i]]`.
    pub fn compose(&self, b: &FacePermutation) -> FacePermutation {
        let mut images = [0u8; FACE_COUNT];
        for (i, img) in images.iter_mut().enumerate() {
            *img = self.images[b.images[i] as usize];
        }
        FacePermutation { images }
    }

    pub fn inverse(&self) -> FacePermutation {
        let mut images = [0u8; FACE_COUNT];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u8;
        }
        FacePermutation { images }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// The motion label `(σ(0), σ(1))`.
    pub fn motion(&self) -> Motion {
        Motion {
            f0: FaceId(self.images[0]),
            f1: FaceId(self.images[1]),
        }
    }

    pub fn preserves_adjacency(&self) -> bool {
        FaceId::all().all(|i| {
            FaceId::all().all(|j| i.is_adjacent(j) == self.apply(i).is_adjacent(self.apply(j)))
        })
    }
}

impl fmt::Display for FacePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Builds the permutation for a motion with the ring-propagation algorithm:
/// place the images of faces 0 and 1, then walk the rings of faces 0, 1, 5,
/// 7 and 8, each time aligning the table row of the image face on an
/// already-known neighbour.
pub fn permutation_from_motion(m: Motion) -> FacePermutation {
    let mut images: [Option<u8>; FACE_COUNT] = [None; FACE_COUNT];
    images[0] = Some(m.f0.0);
    images[1] = Some(m.f1.0);

    for &(centre, anchor) in &PROPAGATION {
        let centre = FaceId(centre);
        let anchor = FaceId(anchor);
        let centre_img = FaceId(images[centre.index()].expect("centre placed before its ring"));
        let anchor_img = FaceId(images[anchor.index()].expect("anchor placed before its ring"));
        let from = centre
            .ring_position(anchor)
            .expect("anchor lies on centre ring");
        let to = centre_img
            .ring_position(anchor_img)
            .expect("images of adjacent faces are adjacent");
        let src = centre.ring();
        let dst = centre_img.ring();
        for k in 0..5 {
            let face = src[(from + k) % 5];
            let img = dst[(to + k) % 5].0;
            debug_assert!(images[face.index()].is_none_or(|x| x == img));
            images[face.index()] = Some(img);
        }
    }

    FacePermutation {
        images: images.map(|x| x.expect("propagation reaches every face")),
    }
}

/// The rotation group, built once.
pub struct RotationGroup {
    elements: [FacePermutation; MOTION_COUNT],
}

impl RotationGroup {
    pub fn get() -> &'static RotationGroup {
        static GROUP: OnceLock<RotationGroup> = OnceLock::new();
        GROUP.get_or_init(|| {
            let mut elements = [FacePermutation::IDENTITY; MOTION_COUNT];
            for (slot, m) in elements.iter_mut().zip(Motion::all()) {
                *slot = permutation_from_motion(m);
            }
            RotationGroup { elements }
        })
    }

    pub fn elements(&self) -> &[FacePermutation; MOTION_COUNT] {
        &self.elements
    }

    /// Index of a motion in [`RotationGroup::elements`].
    pub fn index_of(m: Motion) -> usize {
        let pos = m.f0.ring_position(m.f1).expect("motion faces are adjacent");
        m.f0.index() * 5 + pos
    }

    pub fn permutation(&self, m: Motion) -> &FacePermutation {
        &self.elements[Self::index_of(m)]
    }

    pub fn contains(&self, p: &FacePermutation) -> bool {
        let m = p.motion();
        m.f0.is_adjacent(m.f1) && self.permutation(m) == p
    }
}

/// All 60 orientation-preserving symmetries, identity first.
pub fn enumerate_motions() -> Vec<FacePermutation> {
    RotationGroup::get().elements().to_vec()
}

pub fn compose(a: &FacePermutation, b: &FacePermutation) -> FacePermutation {
    a.compose(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(i: usize) -> FaceId {
        FaceId::new(i).unwrap()
    }

    fn ring_indices(i: usize) -> Vec<usize> {
        ring_of(face(i)).iter().map(|f| f.index()).collect()
    }

    #[test]
    fn table_rows() {
        assert_eq!(ring_indices(0), vec![1, 5, 4, 3, 2]);
        assert_eq!(ring_indices(11), vec![6, 7, 8, 9, 10]);
        assert_eq!(ring_indices(7), vec![1, 2, 8, 11, 6]);
    }

    #[test]
    fn rings_are_symmetric_and_duplicate_free() {
        let mut appearances = [0usize; FACE_COUNT];
        for i in FaceId::all() {
            let ring = i.ring();
            for (k, j) in ring.iter().enumerate() {
                assert!(!ring[k + 1..].contains(j));
                assert_ne!(*j, i);
                assert!(j.is_adjacent(i), "{j} lists {i}?");
                appearances[j.index()] += 1;
            }
        }
        assert_eq!(appearances, [5; FACE_COUNT]);
    }

    #[test]
    fn identity_motion() {
        let m = Motion::new(0, 1).unwrap();
        assert!(permutation_from_motion(m).is_identity());
    }

    #[test]
    fn rotation_about_face_zero() {
        // Hand propagation: ring(0) = 1 5 4 3 2 shifts by one, so 1->2,
        // 2->3, 3->4, 4->5, 5->1, and the far ring 6..10 shifts alike.
        let p = permutation_from_motion(Motion::new(0, 2).unwrap());
        assert_eq!(p.images(), [0, 2, 3, 4, 5, 1, 7, 8, 9, 10, 6, 11]);
        let mut q = p;
        for _ in 0..4 {
            q = q.compose(&p);
        }
        assert!(q.is_identity());
    }

    #[test]
    fn motion_rejects_non_adjacent_faces() {
        assert_eq!(
            Motion::new(0, 11),
            Err(GeometryError::NotAdjacent {
                f0: face(0),
                f1: face(11)
            })
        );
        assert!(matches!(
            Motion::new(12, 1),
            Err(GeometryError::FaceOutOfRange(12))
        ));
    }

    #[test]
    fn sixty_distinct_motions_forming_a_group() {
        let all = enumerate_motions();
        assert_eq!(all.len(), MOTION_COUNT);
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), MOTION_COUNT);
        let group = RotationGroup::get();
        for a in &all {
            assert!(a.preserves_adjacency());
            assert!(group.contains(&a.inverse()));
            for b in &all {
                assert!(group.contains(&a.compose(b)));
            }
        }
        assert!(all[0].is_identity());
    }

    #[test]
    fn each_face_is_image_of_face_zero_five_times() {
        let mut counts = [0usize; FACE_COUNT];
        for p in enumerate_motions() {
            counts[p.apply(face(0)).index()] += 1;
        }
        assert_eq!(counts, [5; FACE_COUNT]);
    }

    #[test]
    fn face_zero_rotations_compose_to_face_zero_rotations() {
        let about_zero: Vec<_> = enumerate_motions()
            .into_iter()
            .filter(|p| p.apply(face(0)) == face(0))
            .collect();
        assert_eq!(about_zero.len(), 5);
        for a in &about_zero {
            for b in &about_zero {
                assert_eq!(a.compose(b).apply(face(0)), face(0));
                assert_eq!(a.compose(b).apply(face(11)), face(11));
            }
        }
    }

    #[test]
    fn from_images_rejects_non_symmetries() {
        // Transposition of two adjacent faces is a bijection but not a symmetry.
        let mut images = FacePermutation::IDENTITY.images();
        images.swap(0, 1);
        assert!(FacePermutation::from_images(images).is_err());
        images = FacePermutation::IDENTITY.images();
        images[3] = 2;
        assert!(FacePermutation::from_images(images).is_err());
        let p = permutation_from_motion(Motion::new(7, 11).unwrap());
        assert_eq!(FacePermutation::from_images(p.images()), Ok(p));
    }
}
