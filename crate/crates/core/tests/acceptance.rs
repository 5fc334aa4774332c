//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each, and exits non-zero
//! if any fails.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use unified_segtree::cli::bench::node_bound;
use unified_segtree::cli::dataset::to_csv;
use unified_segtree::cli::selfcheck::piece_bound;
use unified_segtree::geometry::Rect as GRect;
use unified_segtree::oracle::{oracle_cover_check, oracle_intersect, oracle_stab};
use unified_segtree::random::{random_instance, random_point, random_rects, rng, scattered_rects};
use unified_segtree::seg1d::{ancestors_1d, canonical_cover_1d, stab_path_1d};
use unified_segtree::unified::{crossing, is_descendant};
use unified_segtree::{
    classify_intersection, Axis, DyadicAddress, DyadicNode1D, IntersectionKind, Levels, RankInterval, Rect, Tree,
};

const SEED: u64 = 0x5e6_7ee;
const INSTANCES: usize = 200;
const MAX_N: usize = 64;
const GRID: i64 = 12;
const POINTS: usize = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn instances() -> Vec<Vec<Rect>> {
    let mut r = rng(SEED);
    (0..INSTANCES).map(|_| random_instance(&mut r, MAX_N, GRID)).collect()
}

fn within_time(started: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let took = started.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    }
}

fn oracle_equivalence_intersection() -> Outcome {
    let started = Instant::now();
    let mut queries = 0;
    for (i, rects) in instances().iter().enumerate() {
        let endpoints_x: BTreeSet<i64> = rects.iter().flat_map(|r| [r.min_x, r.max_x]).collect();
        let endpoints_y: BTreeSet<i64> = rects.iter().flat_map(|r| [r.min_y, r.max_y]).collect();
        if endpoints_x.len() > GRID as usize || endpoints_y.len() > GRID as usize {
            return Err(format!("instance {i} exceeds a {GRID}x{GRID} endpoint grid"));
        }
        let tree = Tree::build(rects).map_err(|e| format!("instance {i}: {e}"))?;
        for q in rects {
            let got = tree.intersect_query(q).map_err(|e| e.to_string())?;
            let want = oracle_intersect(rects, q);
            if got != want {
                return Err(format!("instance {i}, query {q:?}: index {got:?} vs oracle {want:?}"));
            }
            queries += 1;
        }
    }
    let took = within_time(started, Duration::from_secs(10), "intersection equivalence")?;
    Ok(format!("{INSTANCES} instances, {queries} queries equal to brute force in {took:.2?}"))
}

fn oracle_equivalence_stabbing() -> Outcome {
    let started = Instant::now();
    let mut r = rng(SEED ^ 0xabc);
    let (mut on_endpoint, mut off_grid, mut total) = (0, 0, 0);
    for (i, rects) in instances().iter().enumerate() {
        let tree = Tree::build(rects).map_err(|e| format!("instance {i}: {e}"))?;
        for _ in 0..POINTS {
            let p = random_point(&mut r, tree.map(), GRID);
            let got = tree.stab(p);
            let want = oracle_stab(rects, p);
            if got != want {
                return Err(format!("instance {i}, point {p:?}: index {got:?} vs oracle {want:?}"));
            }
            let xs = tree.map().endpoints(Axis::X);
            if xs.binary_search(&p.x).is_ok() {
                on_endpoint += 1;
            }
            if tree.map().slab_of(Axis::X, p.x).is_none() || tree.map().slab_of(Axis::Y, p.y).is_none() {
                off_grid += 1;
            }
            total += 1;
        }
    }
    if on_endpoint == 0 || off_grid == 0 {
        return Err("point generator missed endpoints or off-grid points".into());
    }
    let took = within_time(started, Duration::from_secs(5), "stabbing equivalence")?;
    Ok(format!("{total} points ({on_endpoint} on x-endpoints, {off_grid} off-grid) equal to brute force in {took:.2?}"))
}

fn one_dimensional_properties() -> Outcome {
    let mut covers = 0u64;
    for levels in 0..=6u32 {
        let size = 1u64 << levels;
        for slab in 0..size {
            let path = stab_path_1d(slab, levels);
            if path.len() as u32 != levels + 1 {
                return Err(format!("L={levels} slab {slab}: path length {}", path.len()));
            }
        }
        for lo in 0..size {
            for hi in lo + 1..=size {
                let iv = RankInterval::new(lo, hi);
                let cover = canonical_cover_1d(iv, levels).map_err(|e| e.to_string())?;
                covers += 1;
                let mut per_level = vec![0usize; levels as usize + 1];
                let mut cells = vec![0u32; size as usize];
                for n in &cover {
                    per_level[n.level as usize] += 1;
                    let span = n.interval(levels);
                    for c in span.lo..span.hi {
                        cells[c as usize] += 1;
                    }
                }
                if per_level.iter().any(|&c| c > 2) {
                    return Err(format!("L={levels} {iv:?}: more than 2 cover nodes on a level"));
                }
                if cover.len() > (2 * levels as usize).max(1) {
                    return Err(format!("L={levels} {iv:?}: {} cover nodes", cover.len()));
                }
                if (0..size).any(|c| cells[c as usize] != u32::from(iv.contains(c))) {
                    return Err(format!("L={levels} {iv:?}: cover is not an exact tiling"));
                }
                let ancestors: HashSet<DyadicNode1D> = cover.iter().flat_map(|n| ancestors_1d(*n)).collect();
                let mut anc_per_level = vec![0usize; levels as usize + 1];
                for a in &ancestors {
                    anc_per_level[a.level as usize] += 1;
                }
                if anc_per_level.iter().any(|&c| c > 4) {
                    return Err(format!("L={levels} {iv:?}: more than 4 cover ancestors on a level"));
                }
            }
        }
    }
    // every node pair of the L=6 tree: disjoint or nested
    let levels = 6u32;
    let nodes: Vec<DyadicNode1D> =
        (0..=levels).flat_map(|l| (0..1u64 << l).map(move |i| DyadicNode1D::new(l, i))).collect();
    let mut pairs = 0u64;
    for a in &nodes {
        for b in &nodes {
            let (ia, ib) = (a.interval(levels), b.interval(levels));
            if ia.lo < ib.lo && ib.lo < ia.hi && ia.hi < ib.hi {
                return Err(format!("partial overlap between {a:?} and {b:?}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{covers} covers over L<=6 within bounds, {pairs} node pairs without partial overlap"))
}

/// Ancestors reached by following x- and y-parent links, self excluded.
fn reachable_ancestors(addr: DyadicAddress) -> HashSet<DyadicAddress> {
    let mut seen = HashSet::new();
    let mut stack = vec![addr];
    while let Some(a) = stack.pop() {
        for p in [a.x_parent(), a.y_parent()].into_iter().flatten() {
            if seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

fn unified_structure() -> Outcome {
    let levels = Levels::new(5, 5);
    let mut addresses = 0;
    for addr in levels.all_addresses() {
        let listed = addr.ancestors(false);
        let listed_set: HashSet<DyadicAddress> = listed.iter().copied().collect();
        let (a, b) = addr.unit();
        let units: HashSet<(u32, u32)> = listed.iter().map(|x| x.unit()).collect();
        if listed.len() != units.len() || listed.len() != ((a + 1) * (b + 1) - 1) as usize {
            return Err(format!("{addr}: {} ancestors over {} units", listed.len(), units.len()));
        }
        if listed_set != reachable_ancestors(addr) {
            return Err(format!("{addr}: ancestor list differs from parent-link reachability"));
        }
        addresses += 1;
    }

    let (mut worst_unit, mut worst_pieces) = (0usize, 0usize);
    for (i, rects) in instances().iter().enumerate() {
        let tree = Tree::build(rects).map_err(|e| e.to_string())?;
        let lv = tree.levels();
        for r in rects {
            let pieces = tree.canonical_pieces(r).map_err(|e| e.to_string())?;
            if pieces.len() > piece_bound(lv.x, lv.y) {
                return Err(format!("instance {i} rect {}: {} pieces", r.id, pieces.len()));
            }
            worst_pieces = worst_pieces.max(pieces.len());
            let strict: HashSet<DyadicAddress> = pieces.iter().flat_map(|p| p.ancestors(false)).collect();
            let mut per_unit: HashMap<(u32, u32), usize> = HashMap::new();
            for s in &strict {
                *per_unit.entry(s.unit()).or_default() += 1;
            }
            let most = per_unit.values().copied().max().unwrap_or(0);
            if most > 16 {
                return Err(format!("instance {i} rect {}: {most} ancestors of one shape", r.id));
            }
            worst_unit = worst_unit.max(most);
        }
        if tree.stats().max_unit_ancestors > 16 {
            return Err(format!("instance {i}: tree reports {} ancestors in a unit", tree.stats().max_unit_ancestors));
        }
    }
    Ok(format!(
        "{addresses} addresses with one ancestor per unit; max {worst_unit} ancestors per unit (<= 16), max {worst_pieces} pieces"
    ))
}

fn strict_x_ancestors(a: DyadicAddress) -> HashSet<DyadicAddress> {
    std::iter::successors(a.x_parent().ok(), |p| p.x_parent().ok()).collect()
}

fn strict_y_ancestors(a: DyadicAddress) -> HashSet<DyadicAddress> {
    std::iter::successors(a.y_parent().ok(), |p| p.y_parent().ok()).collect()
}

fn relation_suite() -> Outcome {
    let started = Instant::now();
    let levels = Levels::new(3, 3);
    let all: Vec<DyadicAddress> = levels.all_addresses().collect();
    let xa: Vec<HashSet<DyadicAddress>> = all.iter().map(|&a| strict_x_ancestors(a)).collect();
    let ya: Vec<HashSet<DyadicAddress>> = all.iter().map(|&a| strict_y_ancestors(a)).collect();
    let mut pairs = 0u64;
    let mut crossings = 0u64;
    for (i, a) in all.iter().enumerate() {
        let (ax, ay) = a.region(levels);
        let ra = a.region_rect(levels);
        for (j, b) in all.iter().enumerate() {
            let (bx, by) = b.region(levels);
            let inside = bx.contains_interval(&ax) && by.contains_interval(&ay);
            if is_descendant(a, b) != inside {
                return Err(format!("is_descendant({a}, {b}) disagrees with region containment"));
            }
            let common = !xa[i].is_disjoint(&ya[j]) || !xa[j].is_disjoint(&ya[i]);
            if crossing(a, b) != common {
                return Err(format!("crossing({a}, {b}) = {} but common x/y-ancestor = {common}", crossing(a, b)));
            }
            crossings += u64::from(common);
            let kind = classify_intersection(&ra, &b.region_rect(levels));
            if kind == IntersectionKind::Partial {
                return Err(format!("regions of {a} and {b} overlap partially"));
            }
            let overlapping = kind != IntersectionKind::Disjoint;
            if overlapping && !(is_descendant(a, b) || is_descendant(b, a) || crossing(a, b)) {
                return Err(format!("{a} and {b} overlap without nesting or crossing"));
            }
            pairs += 1;
        }
    }
    let took = within_time(started, Duration::from_secs(5), "relation checks")?;
    Ok(format!("{pairs} address pairs ({crossings} crossing) consistent in {took:.2?}"))
}

fn order_invariance() -> Outcome {
    let rects = random_rects(&mut rng(SEED + 6), 1000, 200);
    let tree = Tree::build(&rects).map_err(|e| e.to_string())?;
    let levels = tree.levels();
    for r in &rects {
        let x_first = tree.canonical_pieces(r).map_err(|e| e.to_string())?;
        let y_first = tree.canonical_pieces_y_first(r).map_err(|e| e.to_string())?;
        let xs: BTreeSet<_> = x_first.iter().collect();
        if xs != y_first.iter().collect::<BTreeSet<_>>() || xs.len() != x_first.len() {
            return Err(format!("rect {}: x-first and y-first pieces differ", r.id));
        }
        let xr = tree.map().rank_interval(Axis::X, r.min_x, r.max_x).unwrap();
        let yr = tree.map().rank_interval(Axis::Y, r.min_y, r.max_y).unwrap();
        if !oracle_cover_check(&x_first, levels, xr, yr) {
            return Err(format!("rect {}: pieces fail the cell-enumeration cover check", r.id));
        }
    }
    Ok(format!("1000 rects, universe {}x{}: identical piece sets, exact covers", 1 << levels.x, 1 << levels.y))
}

fn asymptotic_sanity() -> Outcome {
    let side = 1i64 << 20;
    let mut lines = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    for exp in [10u32, 12, 14] {
        let n = 1usize << exp;
        let rects = scattered_rects(&mut rng(SEED + exp as u64), n, side);
        let tree = Tree::build(&rects).map_err(|e| e.to_string())?;
        let lv = tree.levels();
        let bound = node_bound(n, lv.x, lv.y);
        if tree.node_count() as u64 >= bound {
            return Err(format!("n={n}: {} nodes >= bound {bound}", tree.node_count()));
        }
        let mut r = rng(SEED);
        let queries: Vec<&Rect> = (0..400).map(|_| &rects[r.gen_range(0..n)]).collect();
        let started = Instant::now();
        let mut k = 0usize;
        for q in &queries {
            k += tree.intersect_query(q).map_err(|e| e.to_string())?.len();
        }
        let mean = started.elapsed().as_secs_f64() * 1e6 / queries.len() as f64;
        let growth = prev.map_or(String::new(), |(pn, pm)| {
            format!(", latency x{:.2} for n x{}", mean / pm, n / pn)
        });
        lines.push(format!(
            "n=2^{exp}: {} nodes (bound {bound}), L={}x{}, rectq mean {mean:.1}us, mean k {:.1}{growth}",
            tree.node_count(),
            lv.x,
            lv.y,
            k as f64 / queries.len() as f64
        ));
        prev = Some((n, mean));
    }
    for l in &lines {
        println!("    {l}");
    }
    Ok("node counts below 16 n (2Lx)(2Ly); latency trend logged above".into())
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_usegtree")).args(args).output().expect("run usegtree")
}

fn cli_contract() -> Outcome {
    let a = run_cli(&["selfcheck", "--seed", "11", "--instances", "200", "--max-n", "64"]);
    let b = run_cli(&["selfcheck", "--seed", "11", "--instances", "200", "--max-n", "64"]);
    if a.status.code() != Some(0) || a.stdout != b.stdout || a.stdout.is_empty() {
        return Err(format!("selfcheck not reproducible: {:?} / {:?}", a.status, b.status));
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rects: Vec<GRect<i64>> = random_rects(&mut rng(3), 30, 6);
    let csv = dir.path().join("data.csv");
    std::fs::write(&csv, to_csv(&rects)).map_err(|e| e.to_string())?;
    let svg = dir.path().join("out.svg");
    let out = run_cli(&["render", "--input", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    if out.status.code() != Some(0) {
        return Err(format!("render failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let text = std::fs::read_to_string(&svg).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&text).map_err(|e| format!("SVG is not well-formed: {e}"))?;
    let cells = doc.descendants().filter(|n| n.attribute("class") == Some("unit")).count();
    let lv = Tree::build(&rects).unwrap().levels();
    let expected = ((lv.x + 1) * (lv.y + 1)) as usize;
    if cells != expected {
        return Err(format!("SVG has {cells} unit cells, expected {expected}"));
    }

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "id,minx,miny,maxx,maxy\n1,0,0,2,2\n2,0,zero,1,1\n").unwrap();
    let out = run_cli(&["stats", "--input", bad.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.code() != Some(1) || !stderr.contains("line 3") {
        return Err(format!("malformed CSV gave {:?}: {stderr}", out.status.code()));
    }
    Ok(format!("selfcheck reproducible, SVG well-formed with {cells} cells, malformed CSV -> exit 1 at line 3"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence: intersection", oracle_equivalence_intersection),
        ("2 oracle equivalence: stabbing", oracle_equivalence_stabbing),
        ("3 one-dimensional segment tree properties", one_dimensional_properties),
        ("4 unified structural bounds", unified_structure),
        ("5 node relations", relation_suite),
        ("6 order invariance of canonical pieces", order_invariance),
        ("7 asymptotic sanity", asymptotic_sanity),
        ("8 CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
