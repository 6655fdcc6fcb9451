//! Exact convex polytopes: vertex enumeration by double description and the
//! full face lattice, over `BigRational`.
//!
//! A polytope is described by halfspaces `⟨normal, x⟩ ≥ rhs` with integer
//! normals and rational right-hand sides — the sign convention under which
//! a weight bound `⟨m̄, n⟩ ≥ −w_m` is a halfspace verbatim.  Construction is
//! incremental: a seed of `d+1` halfspaces whose intersection is a bounded
//! simplex, then one cut at a time, with new vertices generated on edges
//! between a strictly feasible and an infeasible vertex.  Adjacency is
//! decided combinatorially from active sets, so the whole computation is
//! exact and needs no genericity assumption.
//!
//! Redundant halfspaces are never dropped: each keeps its slot and a
//! `facet_defining` flag, because downstream consumers need the *full*
//! active constraint set of a face, including constraints that merely touch
//! it.
//!
//! The polar dual (convention `⟨x, y⟩ ≥ −1`, the natural one for polytopes
//! with the origin inside) is built honestly: one halfspace per vertex of
//! the primal, then vertex enumeration from scratch inside an explicit
//! bounding simplex.  That the result's face lattice is the primal's turned
//! upside down is then a checkable fact, not a construction artifact.

use crate::error::Error;
use crate::linalg::{affine_rank, lp_feasible, solve_rat, Constraint};
use crate::rat::{dot_int_rat, rat_i, Rat};
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;

/// The halfspace `⟨normal, x⟩ ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub rhs: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<i64>, rhs: Rat) -> Self {
        Halfspace { normal, rhs }
    }

    /// The halfspace `⟨p, y⟩ ≥ −1` cut out by a rational point, with
    /// denominators cleared to an integer normal.
    pub fn polar_of_point(p: &[Rat]) -> Result<Self, Error> {
        let mut lcm = BigInt::one();
        for c in p {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let normal: Option<Vec<i64>> = p
            .iter()
            .map(|c| {
                let v = c.numer() * (&lcm / c.denom());
                i64::try_from(&v).ok()
            })
            .collect();
        let normal = normal.ok_or_else(|| {
            Error::Numeric("polar normal does not fit 64 bits".into())
        })?;
        let rhs = -Rat::from(lcm);
        Ok(Halfspace { normal, rhs })
    }

    /// Signed slack `⟨normal, x⟩ − rhs` (non-negative means feasible).
    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot_int_rat(&self.normal, x) - &self.rhs
    }
}

/// Fixed-width bit set over constraint indices.  Wide enough for the polar
/// of the weight polytope, whose constraint list carries one entry per
/// primal vertex (a few hundred).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mask([u64; Mask::WORDS]);

impl Mask {
    const WORDS: usize = 12;
    /// Maximum number of constraints a lattice can carry.
    pub const BITS: usize = 64 * Mask::WORDS;

    pub fn empty() -> Self {
        Mask([0; Mask::WORDS])
    }

    /// The `n` lowest bits set.
    pub fn full(n: usize) -> Self {
        assert!(n <= Mask::BITS);
        let mut m = Mask::empty();
        for i in 0..n {
            m.set(i);
        }
        m
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn and(&self, other: &Mask) -> Mask {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
        out
    }

    pub fn or(&self, other: &Mask) -> Mask {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
        out
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..Mask::BITS).filter(move |&i| self.get(i))
    }
}

impl std::fmt::Debug for Mask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A face, stored by its vertex set and its full active constraint set.
#[derive(Clone, Debug)]
pub struct Face {
    /// Dimension of the affine hull of the face's vertices.
    pub dim: usize,
    /// Sorted indices into `FaceLattice::vertices`.
    pub vertices: Vec<usize>,
    /// Bit `i` set iff halfspace `i` (redundant or not) is tight on the
    /// whole face.
    pub active: Mask,
}

/// A bounded, full-dimensional polytope with vertices, flagged halfspaces
/// and the complete face poset (proper faces and the polytope itself; the
/// empty face is left out).
#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// Ambient dimension.
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    /// `facet_defining[i]` iff halfspace `i` is tight on a `(dim−1)`-face.
    pub facet_defining: Vec<bool>,
    pub vertices: Vec<Vec<Rat>>,
    /// Sorted by (dim, vertex set); the last entry is the whole polytope.
    pub faces: Vec<Face>,
    face_by_vertices: BTreeMap<Vec<usize>, usize>,
}

/// Working vertex during incremental construction.
#[derive(Clone)]
struct WorkVertex {
    coords: Vec<Rat>,
    active: Mask,
}

impl FaceLattice {
    /// Build from halfspaces.  `seed` names `dim+1` of them whose common
    /// intersection is a bounded simplex containing the final polytope;
    /// the rest are inserted incrementally in list order.
    pub fn from_halfspaces(
        dim: usize,
        halfspaces: Vec<Halfspace>,
        seed: &[usize],
    ) -> Result<Self, Error> {
        if halfspaces.len() > Mask::BITS {
            return Err(Error::Polytope(format!(
                "at most {} halfspaces supported, got {}",
                Mask::BITS,
                halfspaces.len()
            )));
        }
        if seed.len() != dim + 1 {
            return Err(Error::Polytope(format!(
                "seed must name {} halfspaces, got {}",
                dim + 1,
                seed.len()
            )));
        }
        for h in &halfspaces {
            if h.normal.len() != dim {
                return Err(Error::Polytope("normal of wrong dimension".into()));
            }
        }

        // Boundedness of the seed cone: the seed normals must positively
        // span, i.e. admit a strictly positive vanishing combination.
        let mut cons: Vec<Constraint> = Vec::new();
        for r in 0..seed.len() {
            // −λ_r ≤ −1
            let mut c = vec![Rat::zero(); seed.len()];
            c[r] = rat_i(-1);
            cons.push(Constraint { coeffs: c, rhs: rat_i(-1) });
        }
        for coord in 0..dim {
            let row: Vec<Rat> =
                seed.iter().map(|&s| rat_i(halfspaces[s].normal[coord])).collect();
            cons.push(Constraint { coeffs: row.clone(), rhs: Rat::zero() });
            cons.push(Constraint {
                coeffs: row.iter().map(|x| -x).collect(),
                rhs: Rat::zero(),
            });
        }
        if lp_feasible(&cons).is_none() {
            return Err(Error::Polytope(
                "seed halfspaces do not bound a simplex (normals do not positively span)"
                    .into(),
            ));
        }

        // Seed simplex vertices: every dim-subset of the seed.
        let mut verts: Vec<WorkVertex> = Vec::with_capacity(dim + 1);
        for omit in 0..seed.len() {
            let rows: Vec<Vec<Rat>> = seed
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != omit)
                .map(|(_, &s)| halfspaces[s].normal.iter().map(|&x| rat_i(x)).collect())
                .collect();
            let rhs: Vec<Rat> = seed
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != omit)
                .map(|(_, &s)| halfspaces[s].rhs.clone())
                .collect();
            if crate::linalg::rank_rat(&rows) != dim {
                return Err(Error::Polytope("seed subsystem is singular".into()));
            }
            let x = solve_rat(&rows, &rhs)
                .ok_or_else(|| Error::Polytope("seed subsystem is inconsistent".into()))?;
            // the omitted constraint must hold strictly, otherwise the seed
            // simplex is degenerate
            if halfspaces[seed[omit]].slack(&x) <= Rat::zero() {
                return Err(Error::Polytope("seed simplex is degenerate".into()));
            }
            let mut active = Mask::empty();
            for (k, &s) in seed.iter().enumerate() {
                if k != omit {
                    active.set(s);
                }
            }
            verts.push(WorkVertex { coords: x, active });
        }

        // Incremental cuts.
        let in_seed = |i: usize| seed.contains(&i);
        for h_idx in 0..halfspaces.len() {
            if in_seed(h_idx) {
                continue;
            }
            insert_halfspace(&mut verts, &halfspaces, h_idx, dim)?;
        }

        // Recompute full active masks (covers redundant constraints that
        // merely touch the final polytope).
        for v in verts.iter_mut() {
            v.active = Mask::empty();
            for (i, h) in halfspaces.iter().enumerate() {
                let s = h.slack(&v.coords);
                if s.is_negative() {
                    return Err(Error::Polytope(
                        "internal: enumerated vertex violates a constraint".into(),
                    ));
                }
                if s.is_zero() {
                    v.active.set(i);
                }
            }
        }
        verts.sort_by(|a, b| a.coords.cmp(&b.coords));
        let vertices: Vec<Vec<Rat>> = verts.iter().map(|v| v.coords.clone()).collect();
        let vert_active: Vec<Mask> = verts.iter().map(|v| v.active).collect();

        // Facet flags.
        let mut facet_defining = vec![false; halfspaces.len()];
        for i in 0..halfspaces.len() {
            let on: Vec<&[Rat]> = vertices
                .iter()
                .zip(&vert_active)
                .filter(|&(_, a)| a.get(i))
                .map(|(v, _)| v.as_slice())
                .collect();
            facet_defining[i] = on.len() >= dim && affine_rank(&on) == dim - 1;
        }

        // Face poset: close the facet vertex sets under intersection.
        let full: Vec<usize> = (0..vertices.len()).collect();
        let mut sets: Vec<Vec<usize>> = vec![full.clone()];
        let facet_sets: Vec<Vec<usize>> = (0..halfspaces.len())
            .filter(|&i| facet_defining[i])
            .map(|i| {
                (0..vertices.len()).filter(|&v| vert_active[v].get(i)).collect()
            })
            .collect();
        let mut known: std::collections::BTreeSet<Vec<usize>> =
            sets.iter().cloned().collect();
        let mut frontier = sets.clone();
        while let Some(s) = frontier.pop() {
            for f in &facet_sets {
                let inter: Vec<usize> =
                    s.iter().copied().filter(|v| f.binary_search(v).is_ok()).collect();
                if !inter.is_empty() && known.insert(inter.clone()) {
                    sets.push(inter.clone());
                    frontier.push(inter);
                }
            }
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let pts: Vec<&[Rat]> = vs.iter().map(|&v| vertices[v].as_slice()).collect();
                let dim_f = affine_rank(&pts);
                let active = vs
                    .iter()
                    .fold(Mask::full(halfspaces.len()), |acc, &v| acc.and(&vert_active[v]));
                Face { dim: dim_f, vertices: vs, active }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        let face_by_vertices =
            faces.iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect();

        let lat = FaceLattice {
            dim,
            halfspaces,
            facet_defining,
            vertices,
            faces,
            face_by_vertices,
        };
        if lat.faces.last().map(|f| f.dim) != Some(dim) {
            return Err(Error::Polytope(
                "halfspace intersection is not full-dimensional".into(),
            ));
        }
        Ok(lat)
    }

    /// Index of the face with exactly this vertex set.
    pub fn face_index_by_vertices(&self, vs: &[usize]) -> Option<usize> {
        let mut key = vs.to_vec();
        key.sort_unstable();
        self.face_by_vertices.get(&key).copied()
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d)
    }

    /// The whole polytope as a face (always present, always last).
    pub fn full_face(&self) -> usize {
        self.faces.len() - 1
    }

    /// Average of the face's vertices.
    pub fn barycenter(&self, face: usize) -> Vec<Rat> {
        let f = &self.faces[face];
        let pts: Vec<&[Rat]> =
            f.vertices.iter().map(|&v| self.vertices[v].as_slice()).collect();
        crate::rat::average(&pts)
    }

    /// Membership test against every halfspace.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Indices of the facet-defining halfspaces.
    pub fn facet_indices(&self) -> Vec<usize> {
        (0..self.halfspaces.len()).filter(|&i| self.facet_defining[i]).collect()
    }

    /// Polar dual `{y : ⟨v, y⟩ ≥ −1 for every vertex v}`, enumerated from
    /// scratch.  Requires the origin strictly inside (every facet has
    /// negative rhs).
    pub fn polar(&self) -> Result<FaceLattice, Error> {
        let d = self.dim;
        for (i, h) in self.halfspaces.iter().enumerate() {
            if self.facet_defining[i] && !h.rhs.is_negative() {
                return Err(Error::Polytope(
                    "polar dual needs the origin strictly inside".into(),
                ));
            }
        }
        // Outer bound: if the ball of radius r sits inside the primal then
        // the polar sits inside the ball of radius 1/r; use the l1-robust
        // bound M = max over facets of ‖normal‖₁ / |rhs|.
        let mut m_bound = Rat::one();
        for (i, h) in self.halfspaces.iter().enumerate() {
            if !self.facet_defining[i] {
                continue;
            }
            let l1: i64 = h.normal.iter().map(|&x| x.abs()).sum();
            let cand = rat_i(l1) / -h.rhs.clone();
            if cand > m_bound {
                m_bound = cand;
            }
        }
        let m1 = m_bound + rat_i(1);

        let mut hs: Vec<Halfspace> = Vec::with_capacity(self.vertices.len() + d + 1);
        for v in &self.vertices {
            hs.push(Halfspace::polar_of_point(v)?);
        }
        // Bounding simplex: y_i ≤ M+1 for each coordinate, Σ y_i ≥ −(d+1)(M+1).
        let n_pts = self.vertices.len();
        for i in 0..d {
            let mut nrm = vec![0i64; d];
            nrm[i] = -1;
            hs.push(Halfspace::new(nrm, -m1.clone()));
        }
        hs.push(Halfspace::new(vec![1i64; d], -m1.clone() * rat_i(d as i64 + 1)));
        let seed: Vec<usize> = (n_pts..n_pts + d + 1).collect();
        let with_box = FaceLattice::from_halfspaces(d, hs, &seed)?;

        // The box must be slack everywhere; then strip it.
        for aux in n_pts..n_pts + d + 1 {
            if with_box.facet_defining[aux]
                || with_box.faces.iter().any(|f| f.active.get(aux))
            {
                return Err(Error::Polytope(
                    "polar bounding simplex is not slack — dual is unbounded?".into(),
                ));
            }
        }
        let mut hs = with_box.halfspaces;
        hs.truncate(n_pts);
        let facet_defining = with_box.facet_defining[..n_pts].to_vec();
        let mask = Mask::full(n_pts);
        let faces: Vec<Face> = with_box
            .faces
            .into_iter()
            .map(|f| Face { active: f.active.and(&mask), ..f })
            .collect();
        let face_by_vertices =
            faces.iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect();
        Ok(FaceLattice {
            dim: d,
            halfspaces: hs,
            facet_defining,
            vertices: with_box.vertices,
            faces,
            face_by_vertices,
        })
    }
}

/// One incremental cut of the double-description loop.
fn insert_halfspace(
    verts: &mut Vec<WorkVertex>,
    halfspaces: &[Halfspace],
    h_idx: usize,
    dim: usize,
) -> Result<(), Error> {
    let h = &halfspaces[h_idx];
    let slacks: Vec<Rat> = verts.iter().map(|v| h.slack(&v.coords)).collect();
    let neg: Vec<usize> =
        (0..verts.len()).filter(|&i| slacks[i].is_negative()).collect();
    if neg.is_empty() {
        for (v, s) in verts.iter_mut().zip(&slacks) {
            if s.is_zero() {
                v.active.set(h_idx);
            }
        }
        return Ok(());
    }
    let pos: Vec<usize> =
        (0..verts.len()).filter(|&i| slacks[i].is_positive()).collect();
    if pos.is_empty() {
        return Err(Error::Polytope(
            "a cut removed the polytope's interior entirely".into(),
        ));
    }

    // New vertices on edges between a kept and a cut vertex.  Adjacency is
    // combinatorial: p and n span an edge iff no third vertex is active on
    // everything both are active on.
    let mut new_verts: Vec<WorkVertex> = Vec::new();
    for &p in &pos {
        for &n in &neg {
            let common = verts[p].active.and(&verts[n].active);
            let adjacent = (0..verts.len())
                .all(|w| w == p || w == n || !common.is_subset(&verts[w].active));
            if !adjacent {
                continue;
            }
            // x = (s_p · v_n − s_n · v_p) / (s_p − s_n), the zero of the
            // slack on the segment [v_p, v_n]
            let denom = &slacks[p] - &slacks[n];
            let coords: Vec<Rat> = (0..dim)
                .map(|c| {
                    (&slacks[p] * &verts[n].coords[c]
                        - &slacks[n] * &verts[p].coords[c])
                        / &denom
                })
                .collect();
            let mut active = common;
            active.set(h_idx);
            new_verts.push(WorkVertex { coords, active });
        }
    }
    let mut kept: Vec<WorkVertex> = Vec::with_capacity(verts.len());
    for (i, v) in verts.drain(..).enumerate() {
        if slacks[i].is_negative() {
            continue;
        }
        let mut v = v;
        if slacks[i].is_zero() {
            v.active.set(h_idx);
        }
        kept.push(v);
    }
    kept.extend(new_verts);
    *verts = kept;
    Ok(())
}

/// A polytope together with its polar dual and the exact index
/// correspondences between the two descriptions.
pub struct DualPair {
    pub primal: FaceLattice,
    pub dual: FaceLattice,
    /// primal facet-defining halfspace index → dual vertex index.
    pub dual_vertex_of_facet: BTreeMap<usize, usize>,
    /// primal vertex index → dual halfspace index (identity by construction,
    /// kept explicit for symmetry).
    pub dual_halfspace_of_vertex: Vec<usize>,
}

impl DualPair {
    pub fn new(primal: FaceLattice) -> Result<Self, Error> {
        let dual = primal.polar()?;
        // facet ⟨n, x⟩ ≥ rhs (rhs < 0) ↦ point n/(−rhs), which must occur
        // among the dual's vertices
        let mut dual_vertex_of_facet = BTreeMap::new();
        for i in primal.facet_indices() {
            let h = &primal.halfspaces[i];
            let scale = -h.rhs.clone();
            let pt: Vec<Rat> =
                h.normal.iter().map(|&x| rat_i(x) / scale.clone()).collect();
            let j = dual
                .vertices
                .iter()
                .position(|v| *v == pt)
                .ok_or_else(|| {
                    Error::Mismatch(format!(
                        "facet {i} does not reappear as a dual vertex"
                    ))
                })?;
            dual_vertex_of_facet.insert(i, j);
        }
        if dual_vertex_of_facet.len() != dual.vertices.len() {
            return Err(Error::Mismatch(
                "dual has vertices not accounted for by primal facets".into(),
            ));
        }
        let dual_halfspace_of_vertex = (0..primal.vertices.len()).collect();
        Ok(DualPair { primal, dual, dual_vertex_of_facet, dual_halfspace_of_vertex })
    }

    /// The dual of a proper primal face: vertex set = dual vertices of the
    /// face's active facets.  Errors on the full face (its dual is empty).
    pub fn dual_face(&self, face: usize) -> Result<usize, Error> {
        let f = &self.primal.faces[face];
        if f.dim == self.primal.dim {
            return Err(Error::Polytope("the full face has no proper dual".into()));
        }
        let vs: Vec<usize> = self
            .dual_vertex_of_facet
            .iter()
            .filter(|&(&i, _)| f.active.get(i))
            .map(|(_, &j)| j)
            .collect();
        let idx = self.dual.face_index_by_vertices(&vs).ok_or_else(|| {
            Error::Mismatch(format!(
                "active facets of face {face} do not span a dual face"
            ))
        })?;
        let want = self.primal.dim - 1 - f.dim;
        if self.dual.faces[idx].dim != want {
            return Err(Error::Mismatch(format!(
                "dual face dimension {} ≠ {} for face {face}",
                self.dual.faces[idx].dim, want
            )));
        }
        Ok(idx)
    }

    /// Inverse direction: a proper dual face back to the primal face whose
    /// vertex set is the dual face's active constraint set.
    pub fn primal_face(&self, dual_face: usize) -> Result<usize, Error> {
        let f = &self.dual.faces[dual_face];
        if f.dim == self.dual.dim {
            return Err(Error::Polytope("the full face has no proper dual".into()));
        }
        let vs: Vec<usize> =
            (0..self.primal.vertices.len()).filter(|&j| f.active.get(j)).collect();
        let idx = self.primal.face_index_by_vertices(&vs).ok_or_else(|| {
            Error::Mismatch(format!(
                "active constraints of dual face {dual_face} are not a primal face"
            ))
        })?;
        let want = self.primal.dim - 1 - f.dim;
        if self.primal.faces[idx].dim != want {
            return Err(Error::Mismatch(format!(
                "primal face dimension {} ≠ {} for dual face {dual_face}",
                self.primal.faces[idx].dim, want
            )));
        }
        Ok(idx)
    }
}
