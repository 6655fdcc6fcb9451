//! Singular-fiber taxonomy and stratified Euler accounting.
//!
//! The fibration is smooth (`T³` fibers) away from the locus graph.  Over
//! the open arcs the fiber is type I — a two-dimensional `A_n` fiber times
//! a circle, Euler number 0.  Over trivalent sites the fiber is type II
//! (fibered over a 2-torus, point fibers on a hexagonal graph cutting the
//! torus into `n·m` regions, Euler number `−nm`) or type III (fibered over
//! a circle with `n` point fibers and 2-torus fibers elsewhere, Euler
//! number `+n`).  The variant ĨI (parallelogram instead of hexagon tiling)
//! exists in the taxonomy but is never produced by these constructions.
//!
//! Stratified additivity of the compactly-supported Euler characteristic
//! makes the total χ a sum over the sites alone: the complement and the
//! type-I arcs contribute zero.  Mirror duality swaps the site fibers
//! (II ↔ III), flipping the sign of every contribution, hence of χ.

use crate::error::Error;
use crate::locus::{LocusGraph, SiteKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The fiber taxonomy.  All parameters are positive multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FiberType {
    /// A torus `T³` (generic fiber).
    Smooth,
    /// `A_n` two-dimensional fiber × circle; one vanishing 1-cycle.
    I(u32),
    /// Fibered over `T²`, point fibers over a hexagonal graph with `n·m`
    /// regions; one vanishing 1-cycle.
    II(u32, u32),
    /// Like [`FiberType::II`] but over a parallelogram tiling; occurs in
    /// the taxonomy only — never assigned by these constructions.
    IItilde(u32, u32),
    /// Fibered over `S¹`, `n` point fibers, 2-torus fibers elsewhere; two
    /// vanishing 1-cycles.
    III(u32),
}

impl FiberType {
    /// All multiplicities must be positive.
    pub fn validate(&self) -> Result<(), Error> {
        let ok = match self {
            FiberType::Smooth => true,
            FiberType::I(n) | FiberType::III(n) => *n > 0,
            FiberType::II(n, m) | FiberType::IItilde(n, m) => *n > 0 && *m > 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadFiber(format!(
                "{self:?} has a zero multiplicity — parameters must be positive"
            )))
        }
    }
}

/// Euler number of one fiber, per the classification table.
pub fn euler_of_fiber(t: &FiberType) -> i64 {
    match t {
        FiberType::Smooth | FiberType::I(_) => 0,
        FiberType::II(n, m) | FiberType::IItilde(n, m) => -i64::from(*n) * i64::from(*m),
        FiberType::III(n) => i64::from(*n),
    }
}

/// Which side of the mirror pair a summary describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Quintic,
    Mirror,
}

/// The four strata of the base: the smooth complement, the open arcs of
/// the graph, and the two kinds of trivalent sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stratum {
    Complement,
    Arcs,
    SitesII,
    SitesIII,
}

/// Fiber assignment for a stratified fibration: one fiber type per site,
/// one for all arcs, and the tallies per stratum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FibrationSummary {
    pub side: Side,
    /// Fiber at each graph site, indexed like `LocusGraph::sites`.
    pub site_fibers: Vec<FiberType>,
    /// The stratum each site belongs to (by its graph kind, which is fixed
    /// regardless of side).
    pub site_strata: Vec<Stratum>,
    /// Fiber over every open arc.
    pub arc_fiber: FiberType,
    pub arc_count: usize,
}

impl FibrationSummary {
    /// Tallies per stratum and fiber type.  The complement always counts
    /// one smooth class.
    pub fn counts(&self) -> BTreeMap<(Stratum, FiberType), usize> {
        let mut out = BTreeMap::new();
        *out.entry((Stratum::Complement, FiberType::Smooth)).or_insert(0) += 1;
        if self.arc_count > 0 {
            *out.entry((Stratum::Arcs, self.arc_fiber)).or_insert(0) += self.arc_count;
        }
        for (f, s) in self.site_fibers.iter().zip(&self.site_strata) {
            *out.entry((*s, *f)).or_insert(0) += 1;
        }
        out
    }

    /// Build a summary from an explicitly supplied site multiset (for
    /// coarse models whose graphs are not constructed here, e.g. the
    /// highly symmetric one with fibers I₅ / II₅ₓ₅ / III₅).
    pub fn from_site_multiset(
        side: Side,
        site_fibers: Vec<FiberType>,
        arc_fiber: FiberType,
        arc_count: usize,
    ) -> Result<Self, Error> {
        for f in &site_fibers {
            check_site_fiber(f)?;
        }
        arc_fiber.validate()?;
        if matches!(arc_fiber, FiberType::II(..) | FiberType::IItilde(..) | FiberType::III(_)) {
            return Err(Error::BadFiber(format!(
                "{arc_fiber:?} cannot sit over a one-dimensional stratum"
            )));
        }
        let site_strata = site_fibers
            .iter()
            .map(|f| match f {
                FiberType::II(..) => Stratum::SitesII,
                FiberType::III(_) => Stratum::SitesIII,
                _ => Stratum::Arcs,
            })
            .collect();
        Ok(FibrationSummary { side, site_fibers, site_strata, arc_fiber, arc_count })
    }
}

fn check_site_fiber(f: &FiberType) -> Result<(), Error> {
    f.validate()?;
    match f {
        FiberType::IItilde(..) => Err(Error::BadFiber(format!(
            "{f:?}: the parallelogram variant is never produced by these \
             constructions"
        ))),
        FiberType::Smooth => Err(Error::BadFiber(
            "a graph site cannot carry a smooth fiber".into(),
        )),
        _ => Ok(()),
    }
}

/// Assign generic fibers to a stratified locus graph: arcs get `I(1)`; on
/// the quintic side II sites get `II(1,1)` and III sites `III(1)`; on the
/// mirror side the two site assignments are swapped (fiber duality).
pub fn assign_fibers(g: &LocusGraph, side: Side) -> Result<FibrationSummary, Error> {
    for (i, e) in g.edges.iter().enumerate() {
        if e.ends.iter().any(|&s| s >= g.sites.len()) {
            return Err(Error::Assembly(format!(
                "graph is not stratified: arc {i} ends outside the site list"
            )));
        }
    }
    let mut site_fibers = Vec::with_capacity(g.sites.len());
    let mut site_strata = Vec::with_capacity(g.sites.len());
    for s in &g.sites {
        let (fiber, stratum) = match (s.kind, side) {
            (SiteKind::II, Side::Quintic) => (FiberType::II(1, 1), Stratum::SitesII),
            (SiteKind::II, Side::Mirror) => (FiberType::III(1), Stratum::SitesII),
            (SiteKind::III, Side::Quintic) => (FiberType::III(1), Stratum::SitesIII),
            (SiteKind::III, Side::Mirror) => (FiberType::II(1, 1), Stratum::SitesIII),
        };
        site_fibers.push(fiber);
        site_strata.push(stratum);
    }
    Ok(FibrationSummary {
        side,
        site_fibers,
        site_strata,
        arc_fiber: FiberType::I(1),
        arc_count: g.edges.len(),
    })
}

/// Override the fiber at one site (entering non-generic multiplicities).
/// The parallelogram variant and smooth fibers are rejected: the former is
/// never produced, the latter contradicts the site being singular.
pub fn set_site_fiber(
    s: &mut FibrationSummary,
    site: usize,
    fiber: FiberType,
) -> Result<(), Error> {
    if site >= s.site_fibers.len() {
        return Err(Error::BadFiber(format!(
            "site {site} is outside the summary ({} sites)",
            s.site_fibers.len()
        )));
    }
    check_site_fiber(&fiber)?;
    s.site_fibers[site] = fiber;
    Ok(())
}

/// Total Euler characteristic by stratified additivity: the complement and
/// the arcs carry fibers with χ = 0, so only sites contribute.
pub fn euler_characteristic(s: &FibrationSummary) -> i64 {
    s.site_fibers.iter().map(euler_of_fiber).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::locus_graph;
    use crate::subdivision::{flip_weights, jittered_standard, same_chamber};

    #[test]
    fn euler_table_matches_the_classification() {
        assert_eq!(euler_of_fiber(&FiberType::III(5)), 5);
        assert_eq!(euler_of_fiber(&FiberType::II(5, 5)), -25);
        assert_eq!(euler_of_fiber(&FiberType::I(7)), 0);
        assert_eq!(euler_of_fiber(&FiberType::Smooth), 0);
        assert_eq!(euler_of_fiber(&FiberType::IItilde(2, 3)), -6);
        assert!(FiberType::I(0).validate().is_err());
        assert!(FiberType::II(1, 0).validate().is_err());
        assert!(FiberType::Smooth.validate().is_ok());
    }

    /// The Euler numbers are not axioms: they follow from explicit CW
    /// models of the fibers, whose cell counts we tally here.
    #[test]
    fn euler_table_agrees_with_cell_models() {
        let chi = |cells: &[i64]| -> i64 {
            cells
                .iter()
                .enumerate()
                .map(|(d, c)| if d % 2 == 0 { *c } else { -*c })
                .sum()
        };
        // III_n fibers over S¹ with n point fibers: each of the n open arcs
        // carries T² × (arc), compactified by collapsing the torus at both
        // ends onto the point fibers.  With T² = (1 vertex, 2 edges,
        // 1 face), each arc contributes (0,1,2,1) cells and each point
        // fiber one vertex.
        for n in [1i64, 2, 5] {
            let cells = [n, n, 2 * n, n];
            assert_eq!(chi(&cells), euler_of_fiber(&FiberType::III(n as u32)));
        }
        // II_{n×m} fibers over T², point fibers over the hexagonal graph
        // with nm regions (2nm vertices, 3nm edges on the torus); over the
        // nm open hexagons the fiber is a circle, giving one 2-cell and one
        // 3-cell per region.
        for (n, m) in [(1i64, 1i64), (5, 5), (2, 3)] {
            let cells = [2 * n * m, 3 * n * m, n * m, n * m];
            assert_eq!(
                chi(&cells),
                euler_of_fiber(&FiberType::II(n as u32, m as u32))
            );
        }
        // ĨI: same but over the parallelogram tiling with one region
        // (1 vertex, 2 edges): cells (1,2,1,1).
        assert_eq!(chi(&[1, 2, 1, 1]), euler_of_fiber(&FiberType::IItilde(1, 1)));
        // I_n: the cycle of n spheres (n vertices, 2n edges, 2n faces —
        // χ = n) times the circle (1 vertex, 1 edge): χ multiplies to 0.
        for n in [1i64, 5, 7] {
            let a_n = [n, 2 * n, 2 * n];
            assert_eq!(chi(&a_n), n);
            let product = [n, 3 * n, 4 * n, 2 * n];
            assert_eq!(chi(&product), euler_of_fiber(&FiberType::I(n as u32)));
        }
    }

    #[test]
    fn standard_graph_accounts_to_minus_and_plus_two_hundred() {
        let g = locus_graph(&jittered_standard(1)).unwrap();
        let q = assign_fibers(&g, Side::Quintic).unwrap();
        assert_eq!(euler_characteristic(&q), -200);
        let m = assign_fibers(&g, Side::Mirror).unwrap();
        assert_eq!(euler_characteristic(&m), 200);
        // tallies per stratum
        let counts = q.counts();
        assert_eq!(
            counts.get(&(Stratum::SitesII, FiberType::II(1, 1))),
            Some(&250)
        );
        assert_eq!(
            counts.get(&(Stratum::SitesIII, FiberType::III(1))),
            Some(&50)
        );
        assert_eq!(counts.get(&(Stratum::Arcs, FiberType::I(1))), Some(&450));
        assert_eq!(
            counts.get(&(Stratum::Complement, FiberType::Smooth)),
            Some(&1)
        );
        // mirror: same strata, swapped fibers
        let mc = m.counts();
        assert_eq!(mc.get(&(Stratum::SitesII, FiberType::III(1))), Some(&250));
        assert_eq!(
            mc.get(&(Stratum::SitesIII, FiberType::II(1, 1))),
            Some(&50)
        );
    }

    #[test]
    fn the_characteristic_is_chamber_independent() {
        let chambers = [jittered_standard(1), flip_weights(0), flip_weights(7)];
        for (i, a) in chambers.iter().enumerate() {
            for b in &chambers[i + 1..] {
                assert!(!same_chamber(a, b).unwrap());
            }
        }
        for w in &chambers {
            let g = locus_graph(w).unwrap();
            let q = assign_fibers(&g, Side::Quintic).unwrap();
            let m = assign_fibers(&g, Side::Mirror).unwrap();
            assert_eq!(euler_characteristic(&q), -200);
            assert_eq!(euler_characteristic(&m), 200);
            assert_eq!(
                euler_characteristic(&q),
                -euler_characteristic(&m),
                "duality must negate χ"
            );
        }
    }

    #[test]
    fn empty_graph_is_smooth_with_zero_characteristic() {
        let g = LocusGraph { sites: vec![], edges: vec![] };
        let s = assign_fibers(&g, Side::Quintic).unwrap();
        assert_eq!(euler_characteristic(&s), 0);
        let counts = s.counts();
        assert_eq!(counts.len(), 1);
        assert_eq!(
            counts.get(&(Stratum::Complement, FiberType::Smooth)),
            Some(&1)
        );
    }

    #[test]
    fn coarse_symmetric_model_enters_at_minus_two_hundred() {
        // ten 2-face sites with II₅ₓ₅, ten edge sites with III₅, arcs I₅
        let mut sites = vec![FiberType::II(5, 5); 10];
        sites.extend(vec![FiberType::III(5); 10]);
        let s =
            FibrationSummary::from_site_multiset(Side::Quintic, sites, FiberType::I(5), 30)
                .unwrap();
        assert_eq!(euler_characteristic(&s), -250 + 50);
        assert_eq!(euler_characteristic(&s), -200);
    }

    #[test]
    fn forbidden_assignments_are_rejected_with_diagnostics() {
        let g = locus_graph(&jittered_standard(1)).unwrap();
        let mut s = assign_fibers(&g, Side::Quintic).unwrap();
        // the parallelogram variant is never assigned
        match set_site_fiber(&mut s, 0, FiberType::IItilde(1, 1)) {
            Err(Error::BadFiber(msg)) => assert!(msg.contains("parallelogram")),
            other => panic!("expected BadFiber, got {other:?}"),
        }
        // smooth fibers cannot sit at sites, zero multiplicities are invalid
        assert!(matches!(
            set_site_fiber(&mut s, 0, FiberType::Smooth),
            Err(Error::BadFiber(_))
        ));
        assert!(matches!(
            set_site_fiber(&mut s, 0, FiberType::II(0, 1)),
            Err(Error::BadFiber(_))
        ));
        assert!(matches!(
            set_site_fiber(&mut s, usize::MAX, FiberType::III(1)),
            Err(Error::BadFiber(_))
        ));
        // a legal override shifts χ by the fiber difference
        let before = euler_characteristic(&s);
        let old = s.site_fibers[0];
        set_site_fiber(&mut s, 0, FiberType::II(5, 5)).unwrap();
        assert_eq!(
            euler_characteristic(&s),
            before - 25 - euler_of_fiber(&old)
        );
        // malformed graphs are refused
        let mut bad = LocusGraph { sites: vec![], edges: vec![] };
        bad.edges.push(crate::locus::LocusEdge { ends: [0, 1], via: vec![] });
        assert!(matches!(
            assign_fibers(&bad, Side::Quintic),
            Err(Error::Assembly(_))
        ));
    }
}
