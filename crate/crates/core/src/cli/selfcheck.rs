//! Randomized end-to-end check of the index against the brute-force oracles.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::geometry::{Axis, Rect};
use crate::oracle::{oracle_cover_check, oracle_intersect, oracle_stab, MAX_CHECK_SIDE};
use crate::random::{random_instance, random_point, rng};
use crate::unified::{DyadicAddress, UnifiedSegmentTree};

pub const POINTS_PER_INSTANCE: usize = 50;
pub const MAX_ANCESTORS_PER_UNIT: usize = 16;

#[derive(Clone, Debug)]
pub struct SelfCheckConfig {
    pub instances: usize,
    pub max_n: usize,
    pub grid: i64,
    pub seed: u64,
    /// Corrupt every built tree before checking it.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheckSummary {
    pub status: &'static str,
    pub seed: u64,
    pub instances: usize,
    pub max_n: usize,
    pub grid: i64,
    pub rects: usize,
    pub rect_queries: usize,
    pub point_queries: usize,
    pub checks: u64,
    pub max_pieces: usize,
    pub max_unit_ancestors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub status: &'static str,
    pub instance: usize,
    pub check: String,
    pub detail: String,
    pub rects: Vec<Rect<i64>>,
}

/// Upper bound on canonical pieces of one rectangle, `max(1, 2 Lx) * max(1, 2 Ly)`.
pub fn piece_bound(lx: u32, ly: u32) -> usize {
    (2 * lx as usize).max(1) * (2 * ly as usize).max(1)
}

struct Failure {
    check: &'static str,
    detail: String,
}

fn fail(check: &'static str, detail: String) -> Failure {
    Failure { check, detail }
}

pub fn run_selfcheck(cfg: &SelfCheckConfig) -> Result<SelfCheckSummary, Violation> {
    let mut rng = rng(cfg.seed);
    let mut summary = SelfCheckSummary {
        status: "pass",
        seed: cfg.seed,
        instances: cfg.instances,
        max_n: cfg.max_n,
        grid: cfg.grid,
        rects: 0,
        rect_queries: 0,
        point_queries: 0,
        checks: 0,
        max_pieces: 0,
        max_unit_ancestors: 0,
    };
    for instance in 0..cfg.instances {
        let rects = random_instance(&mut rng, cfg.max_n, cfg.grid);
        let points: Vec<u64> = (0..POINTS_PER_INSTANCE).map(|_| rng.gen()).collect();
        check_instance(&rects, &points, cfg, &mut summary).map_err(|f| Violation {
            status: "fail",
            instance,
            check: f.check.to_owned(),
            detail: f.detail,
            rects: rects.clone(),
        })?;
    }
    Ok(summary)
}

fn check_instance(
    rects: &[Rect<i64>],
    point_seeds: &[u64],
    cfg: &SelfCheckConfig,
    summary: &mut SelfCheckSummary,
) -> Result<(), Failure> {
    let mut tree = UnifiedSegmentTree::build(rects).map_err(|e| fail("build", e.to_string()))?;
    if cfg.inject_fault {
        if let Some(r) = rects.first() {
            tree.corrupt_forget_pieces(r.id);
        }
    }
    let levels = tree.levels();
    summary.rects += rects.len();

    let problems = tree.verify_records();
    summary.checks += 1;
    if let Some(p) = problems.into_iter().next() {
        return Err(fail("node_records", p));
    }

    let bound = piece_bound(levels.x, levels.y);
    let mut expected_nodes: HashSet<DyadicAddress> = HashSet::new();
    for r in rects {
        let pieces = tree.canonical_pieces(r).map_err(|e| fail("pieces", e.to_string()))?;
        let y_first = tree.canonical_pieces_y_first(r).map_err(|e| fail("pieces", e.to_string()))?;
        summary.checks += 4;
        if pieces.iter().collect::<BTreeSet<_>>() != y_first.iter().collect::<BTreeSet<_>>() {
            return Err(fail("order_invariance", format!("rect {}: {pieces:?} vs {y_first:?}", r.id)));
        }
        if pieces.len() > bound {
            return Err(fail("piece_bound", format!("rect {} has {} pieces > {bound}", r.id, pieces.len())));
        }
        if tree.map().padded_size(Axis::X) <= MAX_CHECK_SIDE && tree.map().padded_size(Axis::Y) <= MAX_CHECK_SIDE {
            let xr = tree.map().rank_interval(Axis::X, r.min_x, r.max_x).unwrap();
            let yr = tree.map().rank_interval(Axis::Y, r.min_y, r.max_y).unwrap();
            if !oracle_cover_check(&pieces, levels, xr, yr) {
                return Err(fail("exact_cover", format!("rect {}: {pieces:?}", r.id)));
            }
        }
        let ancestors: HashSet<DyadicAddress> = pieces.iter().flat_map(|p| p.ancestors(false)).collect();
        let mut per_unit: HashMap<(u32, u32), usize> = HashMap::new();
        for a in &ancestors {
            *per_unit.entry(a.unit()).or_default() += 1;
        }
        let worst = per_unit.values().copied().max().unwrap_or(0);
        summary.max_unit_ancestors = summary.max_unit_ancestors.max(worst);
        summary.max_pieces = summary.max_pieces.max(pieces.len());
        if worst > MAX_ANCESTORS_PER_UNIT {
            return Err(fail("ancestors_per_unit", format!("rect {}: {worst} ancestors in one unit", r.id)));
        }
        expected_nodes.extend(pieces);
        expected_nodes.extend(ancestors);
    }
    summary.checks += 1;
    let materialized: HashSet<DyadicAddress> = tree.addresses().collect();
    if materialized != expected_nodes {
        return Err(fail(
            "ancestor_closure",
            format!("{} materialized nodes, {} expected", materialized.len(), expected_nodes.len()),
        ));
    }

    for q in rects {
        let got = tree.intersect_query(q).map_err(|e| fail("intersect", e.to_string()))?;
        let want = oracle_intersect(rects, q);
        summary.checks += 1;
        summary.rect_queries += 1;
        if got != want {
            return Err(fail("intersect", format!("query {q:?}: index {got:?}, oracle {want:?}")));
        }
    }

    for &s in point_seeds {
        let p = random_point(&mut rng(s), tree.map(), cfg.grid);
        let got = tree.stab(p);
        let want = oracle_stab(rects, p);
        summary.checks += 1;
        summary.point_queries += 1;
        if got != want {
            return Err(fail("stab", format!("point {p:?}: index {got:?}, oracle {want:?}")));
        }
    }
    // corner cells pin down every stored piece
    for r in rects {
        let p = crate::geometry::Point::new(r.min_x, r.min_y);
        let got = tree.stab(p);
        let want = oracle_stab(rects, p);
        summary.checks += 1;
        summary.point_queries += 1;
        if got != want {
            return Err(fail("stab", format!("corner {p:?}: index {got:?}, oracle {want:?}")));
        }
    }
    Ok(())
}
