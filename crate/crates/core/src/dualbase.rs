//! The mirror-side base: the weight polytope, its rescaled polar hull, and
//! the piecewise-linear identifications between the two boundaries.
//!
//! A skeleton weight function cuts out the 4-polytope
//! `{n : ⟨m̄, n⟩ ≥ −w_m for every skeleton point m}` — the base over which
//! the mirror fibration lives.  Its boundary carries a graph (built in
//! [`crate::locus`]) that must reproduce the primal singular-locus graph
//! exactly; this module supplies the polytope, the face-collapse map onto
//! the reference simplex, the barycentric duality, the rescaling of the
//! weighted skeleton onto the polar hull, and the final matching check.

use crate::error::Error;
use crate::lattice::{vertex_monomial, Monomial, NVARS};
use crate::polytope::{FaceLattice, Halfspace};
use crate::rat::Rat;
use crate::subdivision::WeightFunction;

/// The weight polytope `{n : ⟨m̄, n⟩ ≥ −w_m ∀m ∈ Δ⁰}` with its constraint
/// bookkeeping: halfspace `i` comes from skeleton point `monomials[i]`,
/// including the constraints that end up redundant (they keep their index
/// and a `facet_defining` flag of `false` in the lattice).
pub struct MirrorBase {
    pub lattice: FaceLattice,
    /// Halfspace index → the skeleton point that cut it (total on Δ⁰).
    pub monomials: Vec<Monomial>,
    /// The common weight of the five vertex monomials.
    pub vertex_weight: Rat,
    /// The weights that cut the polytope.
    pub weights: WeightFunction,
}

/// Build the weight polytope.  The five vertex-monomial constraints seed
/// the enumeration (their normals positively span), and the weights must
/// be normalized so all five vertices carry `vertex_weight`.
pub fn build_mirror_base(
    w: &WeightFunction,
    vertex_weight: &Rat,
) -> Result<MirrorBase, Error> {
    for i in 0..NVARS {
        let vm = vertex_monomial(i);
        if w.value(&vm)? != vertex_weight {
            return Err(Error::WrongDomain(format!(
                "weights are not normalized: {vm:?} has weight {}, expected {}",
                w.value(&vm)?,
                vertex_weight
            )));
        }
    }
    Ok(MirrorBase {
        lattice: weight_polytope(w)?,
        monomials: w.points.clone(),
        vertex_weight: vertex_weight.clone(),
        weights: w.clone(),
    })
}

impl MirrorBase {
    /// The skeleton points whose constraints are tight on the whole face.
    pub fn active_monomials(&self, face: usize) -> Vec<Monomial> {
        let f = &self.lattice.faces[face];
        (0..self.monomials.len())
            .filter(|&i| f.active.get(i))
            .map(|i| self.monomials[i].clone())
            .collect()
    }
}

/// The H-representation underlying [`MirrorBase`], usable on its own for
/// convexity tests (no normalization requirement).
fn weight_polytope(w: &WeightFunction) -> Result<FaceLattice, Error> {
    let halfspaces: Vec<Halfspace> = w
        .points
        .iter()
        .zip(&w.values)
        .map(|(m, wm)| Halfspace::new(m.reduced().0[..4].to_vec(), -wm.clone()))
        .collect();
    let seed: Vec<usize> = (0..NVARS)
        .map(|i| {
            w.index_of(&vertex_monomial(i))
                .expect("weight domain contains the vertices")
        })
        .collect();
    FaceLattice::from_halfspaces(4, halfspaces, &seed)
}

// ---------------------------------------------------------------------------
// Piecewise-linear identifications
// ---------------------------------------------------------------------------

/// A map between two face lattices recorded face-by-face.
#[derive(Clone, Debug)]
pub struct PlMap {
    /// `(source face, image face)`, one pair per source face covered.
    pub pairs: Vec<(usize, usize)>,
    /// Whether the map reverses inclusion order.
    pub reversing: bool,
}

impl PlMap {
    /// Image of a source face, if recorded.
    pub fn image(&self, face: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(s, _)| s == face).map(|&(_, t)| t)
    }
}

/// The face collapse onto the reference simplex boundary: a face of the
/// weight polytope is sent to the dual of the minimal simplex face
/// containing all of its active skeleton points.  Order-preserving, and
/// heavily collapsing: every facet goes to the dual of a single lattice
/// point's carrier face, so facets over face-interior points land on mere
/// edges.  Faces with no common vanishing coordinate (including the whole
/// polytope) map to the whole dual simplex.
pub fn face_collapse_map(
    base: &MirrorBase,
    simplex: &crate::polytope::DualPair,
) -> Result<PlMap, Error> {
    // vertex i of the dual simplex = the class of eⁱ
    let mut vertex_index = Vec::with_capacity(NVARS);
    for i in 0..NVARS {
        let n = crate::lattice::NVec::vertex(i);
        let coords: Vec<Rat> = (0..4).map(|t| crate::rat::rat_i(n.0[t])).collect();
        let idx = simplex
            .dual
            .vertices
            .iter()
            .position(|v| *v == coords)
            .ok_or_else(|| Error::Mismatch(format!("vertex n{i} missing from Δ^∨")))?;
        vertex_index.push(idx);
    }
    let mut pairs = Vec::with_capacity(base.lattice.faces.len());
    for (idx, f) in base.lattice.faces.iter().enumerate() {
        let zeros = if f.dim == base.lattice.dim {
            Vec::new()
        } else {
            crate::lattice::minimal_face_zeros(&base.active_monomials(idx))
        };
        let image = if zeros.is_empty() {
            simplex.dual.full_face()
        } else {
            let vs: Vec<usize> = zeros.iter().map(|&z| vertex_index[z]).collect();
            simplex.dual.face_index_by_vertices(&vs).ok_or_else(|| {
                Error::Mismatch(format!("zeros {zeros:?} span no face of Δ^∨"))
            })?
        };
        pairs.push((idx, image));
    }
    Ok(PlMap { pairs, reversing: false })
}

/// The order-reversing barycentric duality of a polytope pair: every proper
/// face to its dual face, with `dim α + dim α* = dim − 1`.  Applying it on
/// each side composes to the identity.
pub fn barycentric_duality(pair: &crate::polytope::DualPair) -> Result<PlMap, Error> {
    let full = pair.primal.full_face();
    let mut pairs = Vec::with_capacity(full);
    for face in 0..pair.primal.faces.len() {
        if face == full {
            continue;
        }
        pairs.push((face, pair.dual_face(face)?));
    }
    Ok(PlMap { pairs, reversing: true })
}

/// The weighted skeleton carried onto the polar hull: lattice point `m`
/// goes to `m̄ / w_m`, and each subdivision cell must land on a 2-face of
/// the polar of the weight polytope.  Records, per 2-face of `Δ` and per
/// cell, the polar face index; a cell whose image is not a face certifies
/// non-generic (or non-convex) weights.
pub struct RescaledHull {
    /// The weight polytope together with its polar, which equals the convex
    /// hull of the rescaled skeleton.
    pub pair: crate::polytope::DualPair,
    /// `cell_faces[f][c]` = polar 2-face carrying cell `c` of face `f`.
    pub cell_faces: Vec<Vec<usize>>,
}

/// Image of one skeleton point under the rescaling.
pub fn rescale_point(w: &WeightFunction, m: &Monomial) -> Result<Vec<Rat>, Error> {
    let wm = w.value(m)?;
    if !num::Signed::is_positive(wm) {
        return Err(Error::WrongDomain(format!(
            "rescaling needs positive weights, {m:?} has {wm}"
        )));
    }
    Ok((0..4).map(|t| crate::rat::rat_i(m.reduced().0[t]) / wm).collect())
}

/// Build the rescaled hull and check cell-by-cell that the subdivision is
/// carried onto its 2-skeleton.
pub fn rescaled_hull(base: &MirrorBase) -> Result<RescaledHull, Error> {
    let w = &base.weights;
    let pair = crate::polytope::DualPair::new(base.lattice.clone())?;
    let global = crate::subdivision::subdivide_skeleton(w)?;
    let faces = crate::lattice::two_faces();
    let mut cell_faces = Vec::with_capacity(faces.len());
    for (f, face) in faces.iter().enumerate() {
        let fw = w.face_weights(face);
        let mut per_cell = Vec::new();
        for (c, cell) in global.per_face[f].cells.iter().enumerate() {
            // dual vertices of the constraints tight on this cell's plane
            let mut vs = Vec::with_capacity(cell.on_plane.len());
            for &p in &cell.on_plane {
                let m = face.chart.from_chart(fw.chart[p])?;
                let h = w.index_of(&m).expect("cell points are skeleton points");
                let v = pair.dual_vertex_of_facet.get(&h).ok_or_else(|| {
                    Error::NonGeneric(format!(
                        "skeleton point {m:?} cuts no facet — its rescaled image \
                         falls inside the hull"
                    ))
                })?;
                vs.push(*v);
            }
            let img = pair.dual.face_index_by_vertices(&vs).ok_or_else(|| {
                Error::NonGeneric(format!(
                    "cell {c} of face {:?} does not land on a polar face",
                    face.zeros
                ))
            })?;
            if pair.dual.faces[img].dim != 2 {
                return Err(Error::NonGeneric(format!(
                    "cell {c} of face {:?} lands on a face of dimension {}",
                    face.zeros, pair.dual.faces[img].dim
                )));
            }
            per_cell.push(img);
        }
        cell_faces.push(per_cell);
    }
    Ok(RescaledHull { pair, cell_faces })
}

/// The base identification evaluated at a face of the weight polytope: the
/// barycenter of face `α` travels through the barycentric duality and back
/// off the rescaled hull to the plain average of `α`'s active skeleton
/// points, in degree coordinates.  Facets land on their own lattice point.
pub fn base_identification(base: &MirrorBase, face: usize) -> Result<Vec<Rat>, Error> {
    if face == base.lattice.full_face() {
        return Err(Error::WrongDomain(
            "the identification is defined on proper faces only".into(),
        ));
    }
    let active = base.active_monomials(face);
    if active.is_empty() {
        return Err(Error::Mismatch(format!("face {face} has no active constraints")));
    }
    let pts: Vec<Vec<Rat>> = active
        .iter()
        .map(|m| m.0.iter().map(|&c| crate::rat::rat_i(c)).collect())
        .collect();
    let refs: Vec<&[Rat]> = pts.iter().map(|p| p.as_slice()).collect();
    Ok(crate::rat::average(&refs))
}

// ---------------------------------------------------------------------------
// The locus match
// ---------------------------------------------------------------------------

/// A successful side-by-side match of the two locus graphs.
#[derive(Clone, Debug)]
pub struct MatchCertificate {
    /// Mirror site → primal site, in mirror order.
    pub site_pairs: Vec<(usize, usize)>,
    /// Mirror edge → primal edge, in mirror order.
    pub edge_pairs: Vec<(usize, usize)>,
    pub vertices: usize,
    pub edges: usize,
}

/// Check that the mirror graph reproduces the primal one under the base
/// identification: sites correspond bijectively with exactly matching
/// coordinates and swapped fiber kinds, and edges correspond bijectively
/// over the site matching.  The first discrepancy is reported.
pub fn verify_locus_match(
    mirror: &crate::locus::LocusGraph,
    primal: &crate::locus::LocusGraph,
    base: &MirrorBase,
) -> Result<MatchCertificate, Error> {
    use crate::locus::{HostFace, SiteKind};
    if mirror.sites.len() != primal.sites.len() {
        return Err(Error::Mismatch(format!(
            "site counts differ: mirror {}, primal {}",
            mirror.sites.len(),
            primal.sites.len()
        )));
    }
    let mut primal_at: std::collections::BTreeMap<Vec<Rat>, usize> =
        std::collections::BTreeMap::new();
    for (i, s) in primal.sites.iter().enumerate() {
        primal_at.insert(s.coords.clone(), i);
    }
    let mut site_pairs = Vec::with_capacity(mirror.sites.len());
    let mut hit = vec![false; primal.sites.len()];
    for (i, s) in mirror.sites.iter().enumerate() {
        let HostFace::DualFace { face } = &s.host else {
            return Err(Error::WrongDomain(format!(
                "mirror site {i} is not anchored to a weight-polytope face"
            )));
        };
        let img = base_identification(base, *face)?;
        let Some(&p) = primal_at.get(&img) else {
            return Err(Error::Mismatch(format!(
                "mirror site {i} identifies to {img:?}, where the primal graph \
                 has no site"
            )));
        };
        let want = match s.kind {
            SiteKind::II => SiteKind::III,
            SiteKind::III => SiteKind::II,
        };
        if primal.sites[p].kind != want {
            return Err(Error::Mismatch(format!(
                "site at {img:?} has kind {:?} on both sides",
                s.kind
            )));
        }
        if hit[p] {
            return Err(Error::Mismatch(format!(
                "two mirror sites identify to the same primal site {p}"
            )));
        }
        hit[p] = true;
        site_pairs.push((i, p));
    }

    if mirror.edges.len() != primal.edges.len() {
        return Err(Error::Mismatch(format!(
            "edge counts differ: mirror {}, primal {}",
            mirror.edges.len(),
            primal.edges.len()
        )));
    }
    let mut primal_edge: std::collections::BTreeMap<[usize; 2], usize> =
        std::collections::BTreeMap::new();
    for (j, e) in primal.edges.iter().enumerate() {
        let [a, b] = e.ends;
        primal_edge.insert([a.min(b), a.max(b)], j);
    }
    let mut edge_pairs = Vec::with_capacity(mirror.edges.len());
    let mut edge_hit = vec![false; primal.edges.len()];
    for (j, e) in mirror.edges.iter().enumerate() {
        let a = site_pairs[e.ends[0]].1;
        let b = site_pairs[e.ends[1]].1;
        let key = [a.min(b), a.max(b)];
        let Some(&p) = primal_edge.get(&key) else {
            return Err(Error::Mismatch(format!(
                "mirror edge {:?} identifies to {:?}–{:?}, which is not a \
                 primal edge",
                e.ends, primal.sites[a].coords, primal.sites[b].coords
            )));
        };
        if edge_hit[p] {
            return Err(Error::Mismatch(format!(
                "two mirror edges identify to primal edge {p}"
            )));
        }
        edge_hit[p] = true;
        edge_pairs.push((j, p));
    }

    Ok(MatchCertificate {
        vertices: site_pairs.len(),
        edges: edge_pairs.len(),
        site_pairs,
        edge_pairs,
    })
}
