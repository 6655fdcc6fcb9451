//! End-to-end run of the mirror-base pipeline on a generic chamber:
//! weights → skeleton subdivision → singular-locus graph → weight polytope →
//! mirror graph → exact side-by-side match.

use syzkit::dualbase::{build_mirror_base, rescaled_hull, verify_locus_match};
use syzkit::locus::{locus_graph, mirror_locus};
use syzkit::rat::rat_i;
use syzkit::subdivision::{jittered_standard, lemma_threshold, subdivide_skeleton, WeightFunction};

fn main() -> Result<(), syzkit::Error> {
    let w = jittered_standard(1);
    let global = subdivide_skeleton(&w)?;
    println!(
        "subdivision: {} faces, generic: {}",
        global.per_face.len(),
        global.generic()
    );

    let primal = locus_graph(&w)?;
    let (ii, iii) = primal.counts();
    println!(
        "primal locus: {} sites (II={ii} III={iii}), {} arcs",
        primal.sites.len(),
        primal.edges.len()
    );

    let base = build_mirror_base(&w, &rat_i(33))?;
    let facets = base
        .lattice
        .facet_defining
        .iter()
        .filter(|&&b| b)
        .count();
    println!("weight polytope: {facets} facets, {} vertices", base.lattice.vertices.len());

    let hull = rescaled_hull(&base)?;
    let cells: usize = hull.cell_faces.iter().map(|c| c.len()).sum();
    println!("rescaled hull carries {cells} cells onto polar 2-faces");

    let mirror = mirror_locus(&base)?;
    let (mii, miii) = mirror.counts();
    println!(
        "mirror locus: {} sites (II={mii} III={miii}), {} arcs",
        mirror.sites.len(),
        mirror.edges.len()
    );

    let cert = verify_locus_match(&mirror, &primal, &base)?;
    println!(
        "match certificate: {} vertices, {} edges",
        cert.vertices, cert.edges
    );

    let threshold = lemma_threshold(&WeightFunction::standard())?;
    println!("threshold of the bare squared weights: {threshold}");
    Ok(())
}
