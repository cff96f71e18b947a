use rayon::prelude::*;
use serde::Serialize;

use super::word::{letter_from_key, Alphabet, ReducedWord};
use super::GroupError;
use crate::config::{OrientedCircle, SchottkyConfiguration};
use crate::moebius::{GeneralizedCircle, MoebiusMap, SpherePoint};

/// Words at this length are the units of parallel work; the decomposition is
/// fixed, so results do not depend on the worker count.
const SPLIT_DEPTH: usize = 2;
const NESTING_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CloudParams {
    pub epsilon: f64,
    pub max_depth: usize,
    pub max_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudEntry {
    /// Center (interior pole) of the word's disk.
    pub point: SpherePoint,
    pub word: ReducedWord,
    pub depth: usize,
    pub disk_diameter: f64,
}

impl CloudEntry {
    pub fn converged(&self, epsilon: f64) -> bool {
        self.disk_diameter <= epsilon
    }
}

/// Disk centers approximating `Λ(Γ)`, in canonical word order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCloud {
    pub params: CloudParams,
    pub entries: Vec<CloudEntry>,
    /// The point budget cut the search short.
    pub truncated: bool,
    /// Entries emitted at `max_depth` with a disk still wider than `epsilon`.
    pub unconverged: usize,
    /// Child disks found not inside their parent during the search.
    pub nesting_violations: usize,
}

impl LimitCloud {
    pub fn points(&self) -> impl Iterator<Item = SpherePoint> + '_ {
        self.entries.iter().map(|e| e.point)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_distance_to(&self, p: &SpherePoint) -> f64 {
        self.points().map(|q| q.chordal_distance(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn min_distance_to_circle(&self, c: &GeneralizedCircle) -> f64 {
        self.points().map(|q| c.distance_to(&q)).fold(f64::INFINITY, f64::min)
    }

    pub fn max_disk_diameter(&self) -> f64 {
        self.entries.iter().map(|e| e.disk_diameter).fold(0.0, f64::max)
    }
}

/// The closed disk selected by a letter: `Int(C'_k)` for `+k`, `Int(C_k)` for `-k`.
pub(crate) fn letter_disk(config: &SchottkyConfiguration, letter: i32) -> OrientedCircle {
    let pair = &config.pairs()[letter.unsigned_abs() as usize - 1];
    if letter > 0 {
        pair.partner
    } else {
        pair.circle
    }
}

/// Every sampled boundary point and the pole of `child` lie on the interior
/// side of `parent`.
pub(crate) fn sampled_inside(parent: &OrientedCircle, child: &OrientedCircle) -> bool {
    let form = parent.circle();
    child
        .circle()
        .sample(NESTING_SAMPLES)
        .iter()
        .chain(std::iter::once(&child.interior_cap().pole_point()))
        .all(|p| form.form_value(p) < 0.0)
}

struct Node {
    letters: Vec<i32>,
    /// `A_w` for the word so far.
    map: MoebiusMap,
    disk: OrientedCircle,
}

struct Search<'a> {
    config: &'a SchottkyConfiguration,
    alphabet: Alphabet,
    params: CloudParams,
}

#[derive(Default)]
struct TaskOutput {
    entries: Vec<CloudEntry>,
    truncated: bool,
    nesting_violations: usize,
}

impl Search<'_> {
    fn child(&self, node: &Node, letter: i32) -> Node {
        let disk = letter_disk(self.config, letter).transform(&node.map);
        let map = node.map.compose(self.alphabet.letter(letter).expect("letter within rank"));
        let mut letters = node.letters.clone();
        letters.push(letter);
        Node { letters, map, disk }
    }

    fn root(&self) -> Node {
        Node { letters: Vec::new(), map: MoebiusMap::identity(), disk: self.config.pairs()[0].circle }
    }

    fn next_letters(&self, node: &Node) -> impl Iterator<Item = i32> + '_ {
        let last = node.letters.last().copied();
        (0..2 * self.alphabet.rank() as u32).map(letter_from_key).filter(move |&l| Some(-l) != last)
    }

    fn is_leaf(&self, node: &Node) -> bool {
        node.disk.interior_cap().diameter() <= self.params.epsilon || node.letters.len() >= self.params.max_depth
    }

    fn emit(&self, node: &Node, out: &mut TaskOutput) {
        let cap = node.disk.interior_cap();
        out.entries.push(CloudEntry {
            point: cap.pole_point(),
            word: ReducedWord::from_letters_unchecked(node.letters.clone()),
            depth: node.letters.len(),
            disk_diameter: cap.diameter(),
        });
    }

    fn dfs(&self, node: Node, out: &mut TaskOutput) {
        let mut stack = vec![node];
        while let Some(node) = stack.pop() {
            if out.entries.len() >= self.params.max_points {
                out.truncated = true;
                return;
            }
            if self.is_leaf(&node) {
                self.emit(&node, out);
                continue;
            }
            let children: Vec<Node> = self.next_letters(&node).map(|l| self.child(&node, l)).collect();
            for child in children.into_iter().rev() {
                if !sampled_inside(&node.disk, &child.disk) {
                    out.nesting_violations += 1;
                }
                stack.push(child);
            }
        }
    }

    /// Nodes at `SPLIT_DEPTH` (or shallower leaves) in canonical order.
    fn tasks(&self) -> Vec<Node> {
        let mut frontier = vec![self.root()];
        for _ in 0..SPLIT_DEPTH {
            let mut next = Vec::new();
            for node in frontier {
                if !node.letters.is_empty() && self.is_leaf(&node) {
                    next.push(node);
                } else {
                    next.extend(self.next_letters(&node).map(|l| self.child(&node, l)).collect::<Vec<_>>());
                }
            }
            frontier = next;
        }
        frontier
    }
}

/// Nested-disk approximation of the limit set. Each word's disk is the image
/// under its prefix of the disk selected by its last letter; a disk is
/// emitted once its chordal diameter is at most `epsilon` or the word reaches
/// `max_depth`. Work is split into fixed subtrees, each capped at
/// `max_points`; the merged entries are sorted canonically and cut to
/// `max_points`, so the output is the same for any number of workers.
pub fn limit_cloud(config: &SchottkyConfiguration, params: CloudParams) -> Result<LimitCloud, GroupError> {
    if params.epsilon.is_nan() || params.epsilon <= 0.0 {
        return Err(GroupError::BadParameters("epsilon must be positive".into()));
    }
    if params.max_depth == 0 || params.max_points == 0 {
        return Err(GroupError::BadParameters("max_depth and max_points must be at least 1".into()));
    }
    let search = Search { config, alphabet: Alphabet::new(config), params };
    let outputs: Vec<TaskOutput> = search
        .tasks()
        .into_par_iter()
        .map(|node| {
            let mut out = TaskOutput::default();
            if node.letters.len() < SPLIT_DEPTH || search.is_leaf(&node) {
                search.emit(&node, &mut out);
            } else {
                search.dfs(node, &mut out);
            }
            out
        })
        .collect();
    let mut truncated = outputs.iter().any(|o| o.truncated);
    let nesting_violations = outputs.iter().map(|o| o.nesting_violations).sum();
    let mut entries: Vec<CloudEntry> = outputs.into_iter().flat_map(|o| o.entries).collect();
    entries.sort_by(|a, b| a.word.cmp(&b.word));
    if entries.len() > params.max_points {
        entries.truncate(params.max_points);
        truncated = true;
    }
    let unconverged = entries.iter().filter(|e| !e.converged(params.epsilon)).count();
    Ok(LimitCloud { params, entries, truncated, unconverged, nesting_violations })
}

/// [`limit_cloud`] on a dedicated pool of `threads` workers.
pub fn limit_cloud_with_threads(
    config: &SchottkyConfiguration,
    params: CloudParams,
    threads: usize,
) -> Result<LimitCloud, GroupError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| GroupError::BadParameters(e.to_string()))?;
    pool.install(|| limit_cloud(config, params))
}

/// One disk of the depth-`n` cover.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverDisk {
    pub word: ReducedWord,
    pub disk: OrientedCircle,
    /// Angular margin by which the disk sits inside its parent (positive = inside).
    pub parent_margin: f64,
    /// All boundary samples and the pole lie inside the parent.
    pub sampled_inside: bool,
}

/// All disks of words of length exactly `depth`, in canonical order.
pub fn disk_cover(config: &SchottkyConfiguration, depth: usize) -> Result<Vec<CoverDisk>, GroupError> {
    if depth == 0 {
        return Err(GroupError::BadParameters("cover depth must be at least 1".into()));
    }
    let search = Search {
        config,
        alphabet: Alphabet::new(config),
        params: CloudParams { epsilon: 0.0, max_depth: depth, max_points: usize::MAX },
    };
    let firsts: Vec<Node> = search.next_letters(&search.root()).map(|l| search.child(&search.root(), l)).collect();
    let per_first: Vec<Vec<CoverDisk>> = firsts
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut stack = vec![(first, f64::INFINITY, true)];
            while let Some((node, margin, inside)) = stack.pop() {
                if node.letters.len() == depth {
                    out.push(CoverDisk {
                        word: ReducedWord::from_letters_unchecked(node.letters),
                        disk: node.disk,
                        parent_margin: margin,
                        sampled_inside: inside,
                    });
                    continue;
                }
                let children: Vec<Node> = search.next_letters(&node).map(|l| search.child(&node, l)).collect();
                for child in children.into_iter().rev() {
                    let m = node.disk.interior_cap().containment_margin(&child.disk.interior_cap());
                    let s = sampled_inside(&node.disk, &child.disk);
                    stack.push((child, m, s));
                }
            }
            out
        })
        .collect();
    let mut disks: Vec<CoverDisk> = per_first.into_iter().flatten().collect();
    disks.sort_by(|a, b| a.word.cmp(&b.word));
    Ok(disks)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    pub depth: usize,
    pub disks: usize,
    pub expected: u64,
    /// Disks not strictly inside their parent (by cap margin or by samples).
    pub nesting_violations: usize,
    pub min_parent_margin: f64,
    pub overlapping_pairs: usize,
    /// Smallest angular separation between two disks of the cover.
    pub min_separation: f64,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.disks as u64 == self.expected && self.nesting_violations == 0 && self.overlapping_pairs == 0
    }
}

/// Builds the depth-`n` cover and checks count, nesting and pairwise disjointness.
pub fn check_disk_cover(config: &SchottkyConfiguration, depth: usize) -> Result<CoverReport, GroupError> {
    let disks = disk_cover(config, depth)?;
    let g = config.rank() as u64;
    let expected = 2 * g * (2 * g - 1).pow(depth as u32 - 1);
    let nesting_violations = disks.iter().filter(|d| !(d.parent_margin > 0.0 && d.sampled_inside)).count();
    let min_parent_margin = disks.iter().map(|d| d.parent_margin).fold(f64::INFINITY, f64::min);
    let caps: Vec<_> = disks.iter().map(|d| d.disk.interior_cap()).collect();
    let (overlapping_pairs, min_separation) = (0..caps.len())
        .into_par_iter()
        .map(|i| {
            let mut count = 0usize;
            let mut min = f64::INFINITY;
            for j in (i + 1)..caps.len() {
                let s = caps[i].separation(&caps[j]);
                if s <= 0.0 {
                    count += 1;
                }
                min = min.min(s);
            }
            (count, min)
        })
        .reduce(|| (0, f64::INFINITY), |a, b| (a.0 + b.0, a.1.min(b.1)));
    Ok(CoverReport {
        depth,
        disks: disks.len(),
        expected,
        nesting_violations,
        min_parent_margin,
        overlapping_pairs,
        min_separation,
    })
}

/// Uniform grid on the unit sphere for nearest-neighbor queries.
pub struct PointIndex {
    cell: f64,
    cells: std::collections::HashMap<[i64; 3], Vec<[f64; 3]>>,
    all: Vec<[f64; 3]>,
}

fn chord3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

impl PointIndex {
    /// `cell` is the grid spacing in chordal units (the unit sphere has
    /// diameter 2 in these coordinates, matching the chordal metric).
    pub fn new(points: impl IntoIterator<Item = SpherePoint>, cell: f64) -> Self {
        let mut cells: std::collections::HashMap<[i64; 3], Vec<[f64; 3]>> = std::collections::HashMap::new();
        let mut all = Vec::new();
        for p in points {
            let x = p.to_unit_sphere();
            cells.entry(Self::key(&x, cell)).or_default().push(x);
            all.push(x);
        }
        Self { cell, cells, all }
    }

    fn key(x: &[f64; 3], cell: f64) -> [i64; 3] {
        x.map(|v| (v / cell).floor() as i64)
    }

    /// Chordal distance from `p` to the nearest indexed point (infinite if empty).
    pub fn nearest(&self, p: &SpherePoint) -> f64 {
        if self.all.is_empty() {
            return f64::INFINITY;
        }
        let x = p.to_unit_sphere();
        let k = Self::key(&x, self.cell);
        let max_ring = (2.0 / self.cell).ceil() as i64 + 1;
        let mut best = f64::INFINITY;
        for ring in 0..=max_ring {
            // points in ring r are at least (r - 1) cells away
            if (ring - 1) as f64 * self.cell > best {
                break;
            }
            if ring > 8 {
                return self.all.iter().map(|y| chord3(&x, y)).fold(f64::INFINITY, f64::min);
            }
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    for dz in -ring..=ring {
                        if dx.abs().max(dy.abs()).max(dz.abs()) != ring {
                            continue;
                        }
                        if let Some(pts) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                            for y in pts {
                                best = best.min(chord3(&x, y));
                            }
                        }
                    }
                }
            }
        }
        best
    }
}

/// Directed Hausdorff distance `sup_{p ∈ from} d(p, to)`.
pub fn directed_hausdorff(from: &[SpherePoint], to: &PointIndex) -> f64 {
    from.par_iter().map(|p| to.nearest(p)).reduce(|| 0.0, f64::max)
}
