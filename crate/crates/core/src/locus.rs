//! The singular-locus graph: per-face dual graphs of the regular
//! subdivisions, their assembly across the ten 2-faces, and the mirror-side
//! graph read off the weight polytope's face lattice.
//!
//! Within one 2-face the locus is the dual curve of the triangulation: one
//! trivalent site per triangle, an arc through the midpoint of every
//! interior edge, and a leg through the midpoint of every boundary segment.
//! Legs from the three faces sharing a `Δ`-edge meet in triples at the
//! segment midpoints of that edge.  On the mirror side the same graph is
//! carved out of `∂Δ_w`: a face of the weight polytope contributes a vertex
//! exactly when the collapse onto `∂Δ^∨` preserves its dimension, and the
//! dimension-dropping 2-faces are absorbed as interior points of arcs.

use std::collections::BTreeMap;

use num::{ToPrimitive, Zero};

use crate::dualbase::MirrorBase;
use crate::error::Error;
use crate::lattice::{delta_edges, two_faces, FaceChart, NVARS};
use crate::rat::{rat, rat_i, Rat};
use crate::subdivision::{regular_subdivision, FaceWeights, WeightFunction};

// ---------------------------------------------------------------------------
// Sites and graphs
// ---------------------------------------------------------------------------

/// Fiber class over a site: a cycle of lines (II) or a triangle of lines
/// (III), distinguished by where the site sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SiteKind {
    II,
    III,
}

/// The combinatorial datum a site is anchored to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HostFace {
    /// A subdivision cell of a 2-face (primal triangle sites).
    FaceCell { face: usize, cell: usize },
    /// A unit segment of a `Δ`-edge (primal triple junctions); `seg` counts
    /// the segment along the edge's point order.
    EdgeSegment { edge: usize, seg: usize },
    /// A face of the weight polytope (mirror sites).
    DualFace { face: usize },
}

/// A vertex of the locus graph.
#[derive(Clone, Debug)]
pub struct LocusSite {
    /// Degree-form coordinates (length 5, entries summing to 5) for primal
    /// sites; weight-polytope coordinates (length 4) for mirror sites.
    pub coords: Vec<Rat>,
    pub kind: SiteKind,
    pub host: HostFace,
}

/// An arc between two sites; `via` lists interior waypoints the arc is
/// known to pass through (subdivision-edge midpoints on the primal side,
/// absorbed face barycenters on the mirror side).
#[derive(Clone, Debug)]
pub struct LocusEdge {
    pub ends: [usize; 2],
    pub via: Vec<Vec<Rat>>,
}

/// A locus graph, primal or mirror.
#[derive(Clone, Debug)]
pub struct LocusGraph {
    pub sites: Vec<LocusSite>,
    pub edges: Vec<LocusEdge>,
}

impl LocusGraph {
    /// Number of incident edges at a site.
    pub fn degree(&self, site: usize) -> usize {
        self.edges.iter().filter(|e| e.ends.contains(&site)).count()
    }

    /// `(II, III)` site counts.
    pub fn counts(&self) -> (usize, usize) {
        let ii = self.sites.iter().filter(|s| s.kind == SiteKind::II).count();
        (ii, self.sites.len() - ii)
    }

    /// Structural soundness: trivalent sites, sane edges, exact coordinates.
    pub fn validate(&self) -> Result<(), Error> {
        let mut degrees = vec![0usize; self.sites.len()];
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.edges {
            let [a, b] = e.ends;
            if a >= self.sites.len() || b >= self.sites.len() || a == b {
                return Err(Error::Assembly(format!("edge {:?} is malformed", e.ends)));
            }
            if !seen.insert([a.min(b), a.max(b)]) {
                return Err(Error::Assembly(format!("edge {:?} occurs twice", e.ends)));
            }
            degrees[a] += 1;
            degrees[b] += 1;
        }
        for (i, s) in self.sites.iter().enumerate() {
            if degrees[i] != 3 {
                return Err(Error::Assembly(format!(
                    "site {i} ({:?} at {:?}) has degree {}, expected 3",
                    s.kind, s.coords, degrees[i]
                )));
            }
        }
        // degree-form sites: on the boundary, off the lattice, and distinct
        let mut coord_set = std::collections::BTreeSet::new();
        for s in &self.sites {
            if !coord_set.insert(s.coords.clone()) {
                return Err(Error::Assembly(format!(
                    "two sites share coordinates {:?}",
                    s.coords
                )));
            }
            if s.coords.len() == NVARS {
                let total: Rat = s.coords.iter().cloned().sum();
                if total != rat_i(crate::lattice::DEGREE) {
                    return Err(Error::Assembly(format!(
                        "site coordinates {:?} do not sum to the degree",
                        s.coords
                    )));
                }
                if s.coords.iter().all(|c| c.is_integer()) {
                    return Err(Error::Assembly(format!(
                        "site at lattice point {:?}",
                        s.coords
                    )));
                }
            }
        }
        for e in &self.edges {
            for p in &e.via {
                if p.len() == NVARS && p.iter().all(|c| c.is_integer()) {
                    return Err(Error::Assembly(format!(
                        "arc waypoint at lattice point {p:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Per-face graphs
// ---------------------------------------------------------------------------

/// An interior arc of a facial graph, dual to a shared subdivision edge.
#[derive(Clone, Debug)]
pub struct FaceEdge {
    /// The two sites (triangle indices) it joins.
    pub sites: [usize; 2],
    /// Midpoint of the crossed subdivision edge, in chart coordinates.
    pub midpoint: [Rat; 2],
    /// Chart indices of the crossed subdivision edge's endpoints.
    pub span: [usize; 2],
}

/// A leg of a facial graph, dual to a boundary segment of the chart.
#[derive(Clone, Debug)]
pub struct FaceLeg {
    pub site: usize,
    pub midpoint: [Rat; 2],
    pub span: [usize; 2],
}

/// The dual graph of one 2-face's triangulation, in chart coordinates.
#[derive(Clone, Debug)]
pub struct FaceGraph {
    /// The two vanishing coordinates identifying the face.
    pub zeros: [usize; 2],
    pub chart: Vec<[i64; 2]>,
    /// Site `i` is the barycenter of triangle `i`.
    pub sites: Vec<[Rat; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<FaceEdge>,
    pub legs: Vec<FaceLeg>,
    /// Connected regions of the face complement, one per lattice point the
    /// curve encloses (Euler count `1 − sites + edges + legs`).
    pub region_count: usize,
}

fn chart_barycenter(chart: &[[i64; 2]], tri: &[usize; 3]) -> [Rat; 2] {
    let sum = |k: usize| -> Rat {
        rat(tri.iter().map(|&v| chart[v][k]).sum::<i64>(), 3)
    };
    [sum(0), sum(1)]
}

fn chart_midpoint(chart: &[[i64; 2]], a: usize, b: usize) -> [Rat; 2] {
    [
        rat(chart[a][0] + chart[b][0], 2),
        rat(chart[a][1] + chart[b][1], 2),
    ]
}

/// Build the dual graph of one face's regular subdivision.  The weights
/// must induce a triangulation using every lattice point; ties or coarse
/// cells are reported, never triangulated silently.
pub fn face_graph(fw: &FaceWeights) -> Result<FaceGraph, Error> {
    let zeros = fw.zeros.ok_or_else(|| {
        Error::WrongDomain("facial graphs need weights anchored to a 2-face".into())
    })?;
    let sub = regular_subdivision(fw)?;
    let triangles = sub.triangles()?;
    let sites: Vec<[Rat; 2]> =
        triangles.iter().map(|t| chart_barycenter(&fw.chart, t)).collect();

    // every unordered triangle edge, with the triangles on it
    let mut by_edge: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            by_edge.entry([a.min(b), a.max(b)]).or_default().push(t);
        }
    }

    let mut edges = Vec::new();
    let mut legs = Vec::new();
    for (&[a, b], ts) in &by_edge {
        match ts.as_slice() {
            [s, t] => edges.push(FaceEdge {
                sites: [*s.min(t), *s.max(t)],
                midpoint: chart_midpoint(&fw.chart, a, b),
                span: [a, b],
            }),
            [s] => {
                let (p, q) = (fw.chart[a], fw.chart[b]);
                let on_boundary = (p[0] == 0 && q[0] == 0)
                    || (p[1] == 0 && q[1] == 0)
                    || (p[0] + p[1] == 5 && q[0] + q[1] == 5);
                if !on_boundary {
                    return Err(Error::Assembly(format!(
                        "interior subdivision edge {p:?}–{q:?} has one cell"
                    )));
                }
                legs.push(FaceLeg {
                    site: *s,
                    midpoint: chart_midpoint(&fw.chart, a, b),
                    span: [a, b],
                });
            }
            _ => {
                return Err(Error::Assembly(format!(
                    "subdivision edge {:?}–{:?} lies on {} cells",
                    fw.chart[a],
                    fw.chart[b],
                    ts.len()
                )))
            }
        }
    }
    let region_count = 1 + edges.len() + legs.len() - sites.len();
    Ok(FaceGraph {
        zeros,
        chart: fw.chart.clone(),
        sites,
        triangles,
        edges,
        legs,
        region_count,
    })
}

// ---------------------------------------------------------------------------
// Global assembly
// ---------------------------------------------------------------------------

/// Lift a rational chart point of the face to degree-form coordinates
/// (length 5, entries summing to 5).
fn chart_to_degree(chart: &FaceChart, p: &[Rat; 2]) -> Vec<Rat> {
    let mut c = vec![Rat::zero(); NVARS];
    c[chart.kept[0]] = p[0].clone();
    c[chart.kept[1]] = p[1].clone();
    c[chart.third] = rat_i(crate::lattice::DEGREE) - &p[0] - &p[1];
    c
}

/// Join the ten facial graphs into the global locus graph.  Legs must meet
/// in exact-coordinate triples at the segment midpoints of the `Δ`-edges;
/// anything else (missing faces, dangling or crowded junctions) is an
/// assembly error.
pub fn assemble_global(fragments: &[FaceGraph]) -> Result<LocusGraph, Error> {
    let faces = two_faces();
    if fragments.len() != faces.len() {
        return Err(Error::Assembly(format!(
            "assembly needs one fragment per 2-face ({} total), got {}",
            faces.len(),
            fragments.len()
        )));
    }
    for (i, frag) in fragments.iter().enumerate() {
        if frag.zeros != faces[i].zeros {
            return Err(Error::Assembly(format!(
                "fragment {i} covers face {:?}, expected {:?}",
                frag.zeros, faces[i].zeros
            )));
        }
    }

    let edges_of_delta = delta_edges();
    let mut sites = Vec::new();
    let mut arcs = Vec::new();
    // leg junction bookkeeping: Δ-edge midpoint coords → incident (site, face)
    let mut junctions: BTreeMap<Vec<Rat>, Vec<(usize, usize)>> = BTreeMap::new();

    for (f, frag) in fragments.iter().enumerate() {
        let chart = faces[f].chart;
        let offset = sites.len();
        for (cell, bc) in frag.sites.iter().enumerate() {
            sites.push(LocusSite {
                coords: chart_to_degree(&chart, bc),
                kind: SiteKind::II,
                host: HostFace::FaceCell { face: f, cell },
            });
        }
        for e in &frag.edges {
            arcs.push(LocusEdge {
                ends: [offset + e.sites[0], offset + e.sites[1]],
                via: vec![chart_to_degree(&chart, &e.midpoint)],
            });
        }
        for leg in &frag.legs {
            let mid = chart_to_degree(&chart, &leg.midpoint);
            junctions.entry(mid).or_default().push((offset + leg.site, f));
        }
    }

    for (mid, incident) in junctions {
        if incident.len() != 3 {
            return Err(Error::Assembly(format!(
                "leg junction at {mid:?} joins {} legs, expected 3",
                incident.len()
            )));
        }
        // locate the Δ-edge and segment carrying this midpoint
        let zero_set: Vec<usize> =
            (0..NVARS).filter(|&i| mid[i].is_zero()).collect();
        let edge = edges_of_delta
            .iter()
            .position(|e| e.zeros.as_slice() == zero_set.as_slice())
            .ok_or_else(|| {
                Error::Assembly(format!("junction {mid:?} is not on a Δ-edge"))
            })?;
        let along = &mid[edges_of_delta[edge].kept[1]];
        let seg = (along - rat(1, 2))
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::Assembly(format!("junction {mid:?} off its edge")))?;
        let junction = sites.len();
        sites.push(LocusSite {
            coords: mid,
            kind: SiteKind::III,
            host: HostFace::EdgeSegment { edge, seg },
        });
        for (site, _) in incident {
            arcs.push(LocusEdge { ends: [site, junction], via: Vec::new() });
        }
    }

    let graph = LocusGraph { sites, edges: arcs };
    graph.validate()?;
    Ok(graph)
}

/// The full pipeline: subdivide every 2-face under `w` and assemble.
pub fn locus_graph(w: &WeightFunction) -> Result<LocusGraph, Error> {
    let fragments: Vec<FaceGraph> = two_faces()
        .iter()
        .map(|face| face_graph(&w.face_weights(face)))
        .collect::<Result<_, _>>()?;
    assemble_global(&fragments)
}

// ---------------------------------------------------------------------------
// The mirror-side graph
// ---------------------------------------------------------------------------

/// Carve the locus graph out of `∂Δ_w`.  A proper face of dimension 1 or 2
/// becomes a site exactly when the collapse onto `∂Δ^∨` preserves its
/// dimension (image dimension 1 → kind III, 2 → kind II); 2-faces whose
/// image drops to dimension 1 are pass-throughs absorbed into arcs.  The
/// same path handles generic chambers (250 III + 50 II, 450 arcs) and the
/// constant-weight simplex (10 III + 10 II, 30 arcs).
pub fn mirror_locus(base: &MirrorBase) -> Result<LocusGraph, Error> {
    let lat = &base.lattice;
    let full = lat.full_face();

    // collapse dimension per face: the common zero set of the active
    // monomials spans the face of Δ^∨ the collapse lands in
    let image_dim = |face: usize| -> Option<usize> {
        let zeros = crate::lattice::minimal_face_zeros(&base.active_monomials(face));
        if zeros.is_empty() {
            None
        } else {
            Some(zeros.len() - 1)
        }
    };

    let mut sites = Vec::new();
    let mut site_of_face: BTreeMap<usize, usize> = BTreeMap::new();
    let mut connectors = Vec::new();
    for (idx, f) in lat.faces.iter().enumerate() {
        if idx == full || !(f.dim == 1 || f.dim == 2) {
            continue;
        }
        match image_dim(idx) {
            Some(d) if d == f.dim => {
                site_of_face.insert(idx, sites.len());
                sites.push(LocusSite {
                    coords: lat.barycenter(idx),
                    kind: if f.dim == 2 { SiteKind::II } else { SiteKind::III },
                    host: HostFace::DualFace { face: idx },
                });
            }
            Some(1) if f.dim == 2 => connectors.push(idx),
            _ => {}
        }
    }

    let contains = |big: usize, small: usize| -> bool {
        let (b, s) = (&lat.faces[big].vertices, &lat.faces[small].vertices);
        s.iter().all(|v| b.binary_search(v).is_ok())
    };

    let mut arcs = Vec::new();
    // pass-throughs: each absorbed 2-face must bridge exactly two sites
    for &c in &connectors {
        let ends: Vec<usize> = site_of_face
            .iter()
            .filter(|&(&face, _)| lat.faces[face].dim == 1 && contains(c, face))
            .map(|(_, &s)| s)
            .collect();
        if ends.len() != 2 {
            return Err(Error::Assembly(format!(
                "absorbed face {c} bridges {} sites, expected 2",
                ends.len()
            )));
        }
        arcs.push(LocusEdge {
            ends: [ends[0], ends[1]],
            via: vec![lat.barycenter(c)],
        });
    }
    // direct incidences between preserved 1- and 2-dimensional sites
    for (&a, &sa) in &site_of_face {
        if lat.faces[a].dim != 1 {
            continue;
        }
        for (&b, &sb) in &site_of_face {
            if lat.faces[b].dim == 2 && contains(b, a) {
                arcs.push(LocusEdge { ends: [sa, sb], via: Vec::new() });
            }
        }
    }

    let graph = LocusGraph { sites, edges: arcs };
    graph.validate().map_err(|e| {
        Error::Assembly(format!("mirror graph is not trivalent: {e}"))
    })?;
    Ok(graph)
}
