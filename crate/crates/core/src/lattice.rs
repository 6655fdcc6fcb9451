//! The exponent lattice of the quintic and its dual.
//!
//! Points of the Newton simplex `Δ` live in two coordinate forms that must
//! never be confused:
//!
//! * **degree form** ([`Monomial`]): five non-negative exponents summing
//!   to 5 — what a monomial of the quintic actually looks like;
//! * **reduced form** ([`ReducedM`]): the same point translated by the
//!   center `m₀ = (1,1,1,1,1)`, so coordinates sum to 0.  This is the form
//!   in which the pairing with the dual lattice is well defined.
//!
//! The two forms are distinct types; the pairing only accepts the reduced
//! one, so using an unreduced point is a compile error rather than a wrong
//! number.
//!
//! The dual lattice `N = Z⁵/Z(1,…,1)` is represented canonically with the
//! fifth coordinate normalised to 0 ([`NVec`]).  Because reduced M-vectors
//! have coordinate sum 0, the plain dot product of the two 5-tuples is
//! representative independent.

use crate::error::Error;
use crate::linalg::smith_divisors;
use num::bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Number of homogeneous variables.
pub const NVARS: usize = 5;
/// Degree of the hypersurface.
pub const DEGREE: i64 = 5;

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A lattice point of `Δ` in degree form: exponents ≥ 0 summing to 5.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub [i64; NVARS]);

/// A vector of the reduced lattice `M̄ = {m ∈ Z⁵ : Σmᵢ = 0}`: either a
/// translated point `m − m₀` or a displacement between two points.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReducedM(pub [i64; NVARS]);

/// An element of `N = Z⁵/Z(1,…,1)` in canonical form (last coordinate 0).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NVec(pub [i64; NVARS]);

impl Monomial {
    /// Validating constructor: entries ≥ 0, Σ = 5.
    pub fn new(coords: [i64; NVARS]) -> Result<Self, Error> {
        if coords.iter().any(|&c| c < 0) || coords.iter().sum::<i64>() != DEGREE {
            return Err(Error::InvalidPoint(format!(
                "degree-form point must have non-negative coordinates summing to {DEGREE}, got {coords:?}"
            )));
        }
        Ok(Monomial(coords))
    }

    /// Reduced form `m − m₀`.
    pub fn reduced(&self) -> ReducedM {
        let mut c = self.0;
        for x in c.iter_mut() {
            *x -= 1;
        }
        ReducedM(c)
    }

    /// Indices of vanishing exponents (which facets of `Δ` contain the point).
    pub fn zeros(&self) -> Vec<usize> {
        (0..NVARS).filter(|&i| self.0[i] == 0).collect()
    }

    /// A point is on the 2-skeleton iff it lies on a 2-face, i.e. has at
    /// least two vanishing exponents.
    pub fn on_two_skeleton(&self) -> bool {
        self.0.iter().filter(|&&c| c == 0).count() >= 2
    }

    /// Displacement to another point (lands in the reduced lattice).
    pub fn displacement_to(&self, other: &Monomial) -> ReducedM {
        let mut c = [0i64; NVARS];
        for i in 0..NVARS {
            c[i] = other.0[i] - self.0[i];
        }
        ReducedM(c)
    }
}

impl ReducedM {
    /// Validating constructor: Σ = 0.
    pub fn new(coords: [i64; NVARS]) -> Result<Self, Error> {
        if coords.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidPoint(format!(
                "reduced-form vector must have coordinate sum 0, got {coords:?}"
            )));
        }
        Ok(ReducedM(coords))
    }

    /// Back to degree form; errors if the translate leaves the simplex.
    pub fn to_degree(&self) -> Result<Monomial, Error> {
        let mut c = self.0;
        for x in c.iter_mut() {
            *x += 1;
        }
        Monomial::new(c)
    }
}

impl NVec {
    /// Canonicalise an arbitrary representative by subtracting the last
    /// coordinate from all entries.
    pub fn from_raw(raw: [i64; NVARS]) -> Self {
        let last = raw[NVARS - 1];
        let mut c = raw;
        for x in c.iter_mut() {
            *x -= last;
        }
        NVec(c)
    }

    /// The class of the standard basis vector `[eⁱ]` (0-based `i`) — the
    /// vertex `nⁱ` of the dual simplex `Δ^∨`.
    pub fn vertex(i: usize) -> Self {
        assert!(i < NVARS);
        let mut c = [0i64; NVARS];
        c[i] = 1;
        NVec::from_raw(c)
    }
}

/// The pairing `⟨m̄, n⟩ = Σ m̄ᵢ nᵢ`.  Requires the reduced form on the left;
/// the value is then independent of the representative chosen for `n`.
pub fn pairing(m: &ReducedM, n: &NVec) -> i64 {
    m.0.iter().zip(n.0.iter()).map(|(a, b)| a * b).sum()
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.0)
    }
}
impl fmt::Debug for ReducedM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m̄{:?}", self.0)
    }
}
impl fmt::Debug for NVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{:?}", self.0)
    }
}

// ---------------------------------------------------------------------------
// Distinguished points and enumeration
// ---------------------------------------------------------------------------

/// The center `m₀ = (1,1,1,1,1)` (the unique interior lattice point).
pub fn m0() -> Monomial {
    Monomial([1; NVARS])
}

/// The vertex `mⁱ = 5·eᵢ` of `Δ` (0-based `i`).
pub fn vertex_monomial(i: usize) -> Monomial {
    assert!(i < NVARS);
    let mut c = [0i64; NVARS];
    c[i] = DEGREE;
    Monomial(c)
}

/// All 126 lattice points of `Δ`, in lexicographic order.
pub fn enumerate_monomials() -> Vec<Monomial> {
    let mut out = Vec::with_capacity(126);
    for a in 0..=DEGREE {
        for b in 0..=DEGREE - a {
            for c in 0..=DEGREE - a - b {
                for d in 0..=DEGREE - a - b - c {
                    let e = DEGREE - a - b - c - d;
                    out.push(Monomial([a, b, c, d, e]));
                }
            }
        }
    }
    out
}

/// The 105 lattice points of the 2-skeleton `Δ⁰` (≥ 2 vanishing exponents),
/// in lexicographic order.
pub fn two_skeleton() -> Vec<Monomial> {
    enumerate_monomials()
        .into_iter()
        .filter(Monomial::on_two_skeleton)
        .collect()
}

// ---------------------------------------------------------------------------
// Faces of the simplex
// ---------------------------------------------------------------------------

/// The 21 chart points of the standard triangle `Δ₅ = {a,b ≥ 0, a+b ≤ 5}`,
/// in lexicographic order.  Every 2-face of `Δ` is carried onto this domain
/// by its [`FaceChart`].
pub fn chart_points() -> Vec<[i64; 2]> {
    let mut out = Vec::with_capacity(21);
    for a in 0..=DEGREE {
        for b in 0..=DEGREE - a {
            out.push([a, b]);
        }
    }
    out
}

/// Unimodular chart of a 2-face: drop the two vanishing coordinates, keep
/// the first two of the remaining three (the third is `5 − a − b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceChart {
    /// The two coordinates that vanish on the face (ascending).
    pub zeros: [usize; 2],
    /// The two coordinates used as chart coordinates (ascending).
    pub kept: [usize; 2],
    /// The remaining coordinate, determined by the degree.
    pub third: usize,
}

impl FaceChart {
    /// Chart for the face `{m : m_i = m_j = 0}`.
    pub fn for_zeros(zeros: [usize; 2]) -> Self {
        assert!(zeros[0] < zeros[1] && zeros[1] < NVARS);
        let others: Vec<usize> = (0..NVARS).filter(|i| !zeros.contains(i)).collect();
        FaceChart { zeros, kept: [others[0], others[1]], third: others[2] }
    }

    /// Project a point of the face to chart coordinates.
    pub fn to_chart(&self, m: &Monomial) -> Result<[i64; 2], Error> {
        if self.zeros.iter().any(|&i| m.0[i] != 0) {
            return Err(Error::InvalidPoint(format!(
                "{m:?} is not on the face with zeros {:?}",
                self.zeros
            )));
        }
        Ok([m.0[self.kept[0]], m.0[self.kept[1]]])
    }

    /// Lift a chart point back to the face.
    pub fn from_chart(&self, p: [i64; 2]) -> Result<Monomial, Error> {
        let mut c = [0i64; NVARS];
        c[self.kept[0]] = p[0];
        c[self.kept[1]] = p[1];
        c[self.third] = DEGREE - p[0] - p[1];
        Monomial::new(c)
    }

    /// Lift a *rational* chart point to reduced ambient coordinates (used
    /// for barycenters and midpoints of the locus graph).
    pub fn from_chart_rat(&self, p: [crate::rat::Rat; 2]) -> [crate::rat::Rat; NVARS] {
        use crate::rat::{rat_i, Rat};
        use num::Zero;
        let mut c: [Rat; NVARS] = std::array::from_fn(|_| Rat::zero());
        c[self.kept[0]] = p[0].clone();
        c[self.kept[1]] = p[1].clone();
        c[self.third] = rat_i(DEGREE) - &p[0] - &p[1];
        // reduced form: subtract m₀
        for x in c.iter_mut() {
            *x -= rat_i(1);
        }
        c
    }
}

/// A 2-face of `Δ` with its chart and its 21 lattice points (chart order).
#[derive(Clone, Debug)]
pub struct TwoFace {
    pub zeros: [usize; 2],
    pub chart: FaceChart,
    pub points: Vec<Monomial>,
}

/// The ten 2-faces, ordered by their vanishing pair.
pub fn two_faces() -> Vec<TwoFace> {
    let mut out = Vec::with_capacity(10);
    for i in 0..NVARS {
        for j in i + 1..NVARS {
            let chart = FaceChart::for_zeros([i, j]);
            let points = chart_points()
                .into_iter()
                .map(|p| chart.from_chart(p).expect("chart points stay in the simplex"))
                .collect();
            out.push(TwoFace { zeros: [i, j], chart, points });
        }
    }
    out
}

/// An edge (1-face) of `Δ` with its six lattice points, ordered along the
/// edge, and the three 2-faces containing it.
#[derive(Clone, Debug)]
pub struct DeltaEdge {
    pub zeros: [usize; 3],
    /// The two coordinates supported on the edge (ascending).
    pub kept: [usize; 2],
    /// Six points `(5,0), (4,1), …, (0,5)` in the kept coordinates.
    pub points: Vec<Monomial>,
}

/// The ten edges, ordered by their vanishing triple.
pub fn delta_edges() -> Vec<DeltaEdge> {
    let mut out = Vec::with_capacity(10);
    for i in 0..NVARS {
        for j in i + 1..NVARS {
            for k in j + 1..NVARS {
                let zeros = [i, j, k];
                let kept: Vec<usize> = (0..NVARS).filter(|t| !zeros.contains(t)).collect();
                let points = (0..=DEGREE)
                    .map(|b| {
                        let mut c = [0i64; NVARS];
                        c[kept[0]] = DEGREE - b;
                        c[kept[1]] = b;
                        Monomial(c)
                    })
                    .collect();
                out.push(DeltaEdge { zeros, kept: [kept[0], kept[1]], points });
            }
        }
    }
    out
}

/// Interior lattice points of the 3-face `{m : m_i = 0}` (all other
/// exponents positive): exactly four per facet.
pub fn three_face_interior(i: usize) -> Vec<Monomial> {
    enumerate_monomials()
        .into_iter()
        .filter(|m| m.0[i] == 0 && (0..NVARS).filter(|&j| j != i).all(|j| m.0[j] > 0))
        .collect()
}

/// Vanishing set of the minimal face of `Δ` containing all given points
/// (empty set = the whole simplex).
pub fn minimal_face_zeros(points: &[Monomial]) -> Vec<usize> {
    (0..NVARS)
        .filter(|&i| points.iter().all(|m| m.0[i] == 0))
        .collect()
}

// ---------------------------------------------------------------------------
// The vertex correspondence N → M and its quotient
// ---------------------------------------------------------------------------

/// Matrix of the map `Q : N → M̄`, `nⁱ ↦ m̄ⁱ = 5eᵢ − m₀`, written in the
/// bases `([e⁰],…,[e³])` of `N` and `(e₀−e₄,…,e₃−e₄)` of `M̄`: this is
/// `5·I − J` on `Z⁴`.
pub fn vertex_map_matrix() -> Vec<Vec<i64>> {
    (0..4)
        .map(|i| (0..4).map(|j| if i == j { 4 } else { -1 }).collect())
        .collect()
}

/// Invariant factors of `M̄ / Q(N)`: the quotient is `(Z/5)³`.
pub fn vertex_map_divisors() -> Vec<BigInt> {
    smith_divisors(&vertex_map_matrix())
}

// ---------------------------------------------------------------------------
// The simplex pair as face lattices
// ---------------------------------------------------------------------------

/// The Newton simplex and its polar dual as exact face lattices.
///
/// The primal lives in reduced M-coordinates (first four entries of `m̄`;
/// the fifth is minus their sum) and is cut out by the five halfspaces
/// `⟨·, nʲ⟩ ≥ −1`.  The polar has exactly the `nʲ` as vertices, each facet
/// of one polytope is matched to a vertex of the other, and every proper
/// face `α` satisfies `dim α + dim α* = 3`.
pub fn dual_simplex() -> Result<crate::polytope::DualPair, Error> {
    use crate::polytope::{DualPair, FaceLattice, Halfspace};
    let halfspaces: Vec<Halfspace> = (0..NVARS)
        .map(|j| Halfspace::new(NVec::vertex(j).0[..4].to_vec(), crate::rat::rat_i(-1)))
        .collect();
    let seed: Vec<usize> = (0..NVARS).collect();
    let primal = FaceLattice::from_halfspaces(4, halfspaces, &seed)?;
    DualPair::new(primal)
}
