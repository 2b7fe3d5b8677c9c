//! Decision outcomes with certificates.

use serde::Serialize;

/// Outcome of a decision procedure: exactly one certificate is carried.
#[derive(Clone, Debug)]
pub enum Verdict<C, W> {
    Holds(C),
    Fails(W),
}

impl<C, W> Verdict<C, W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn positive(&self) -> Option<&C> {
        match self {
            Verdict::Holds(c) => Some(c),
            Verdict::Fails(_) => None,
        }
    }

    pub fn negative(&self) -> Option<&W> {
        match self {
            Verdict::Holds(_) => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// The two ranks whose inequality proves that a map is not in the image of
/// postcomposition with a projective epimorphism.
///
/// `image_rank` is the dimension of the set of maps that do factor;
/// `target_rank` is the dimension after adjoining the witness (or of the
/// whole hom-space, for domain questions). Non-factorability is exactly
/// `image_rank < target_rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankEvidence {
    pub image_rank: usize,
    pub target_rank: usize,
}

/// A map that does not factor through any projective, with rank evidence.
#[derive(Clone, Debug)]
pub struct Witness<M> {
    pub map: M,
    pub ranks: RankEvidence,
}
