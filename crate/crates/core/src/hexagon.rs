//! Point-line incidence geometries, the geometry Γ built from a set Ω of Baer
//! subgenerators, and generalised-polygon certification of the incidence
//! graph by all-sources breadth-first search.
//!
//! Incidence-graph vertices are numbered points first, then lines: point `i`
//! is vertex `i` and line `j` is vertex `num_points + j`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::hermitian::HermitianSurface;
use crate::unitary::NormClasses;

/// What a geometry element stands for on H(3,q²).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementLabel {
    /// Point of type (a): a generator, by index.
    Generator(u32),
    /// Point of type (b): an affine surface point, by index.
    AffinePoint(u32),
    /// Line of type (i): a point of `O`, by surface index.
    CurvePoint(u32),
    /// Line of type (ii): a Baer subgenerator, by index.
    Subgenerator(u32),
    /// An element with no surface meaning.
    Plain(u32),
}

impl ElementLabel {
    pub fn kind(&self) -> &'static str {
        match self {
            ElementLabel::Generator(_) => "generator",
            ElementLabel::AffinePoint(_) => "affine-point",
            ElementLabel::CurvePoint(_) => "curve-point",
            ElementLabel::Subgenerator(_) => "subgenerator",
            ElementLabel::Plain(_) => "plain",
        }
    }

    pub fn key(&self) -> u32 {
        match *self {
            ElementLabel::Generator(i)
            | ElementLabel::AffinePoint(i)
            | ElementLabel::CurvePoint(i)
            | ElementLabel::Subgenerator(i)
            | ElementLabel::Plain(i) => i,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IncidenceGeometry {
    point_labels: Vec<ElementLabel>,
    line_labels: Vec<ElementLabel>,
    point_lines: Vec<Vec<u32>>,
    line_points: Vec<Vec<u32>>,
    adj: Vec<Vec<u32>>,
}

impl IncidenceGeometry {
    /// Builds a geometry from `(point, line)` incidences; repeated or out of
    /// range incidences are rejected.
    pub fn new(
        point_labels: Vec<ElementLabel>,
        line_labels: Vec<ElementLabel>,
        incidences: &[(u32, u32)],
    ) -> Result<IncidenceGeometry, GeometryError> {
        let (np, nl) = (point_labels.len(), line_labels.len());
        let mut point_lines = vec![Vec::new(); np];
        let mut line_points = vec![Vec::new(); nl];
        let mut seen = BTreeSet::new();
        for &(p, l) in incidences {
            if p as usize >= np || l as usize >= nl {
                return Err(GeometryError::Certification(format!("incidence ({p}, {l}) out of range")));
            }
            if !seen.insert((p, l)) {
                return Err(GeometryError::Certification(format!("repeated incidence ({p}, {l})")));
            }
            point_lines[p as usize].push(l);
            line_points[l as usize].push(p);
        }
        let mut adj = vec![Vec::new(); np + nl];
        for (p, ls) in point_lines.iter().enumerate() {
            for &l in ls {
                adj[p].push(np as u32 + l);
                adj[np + l as usize].push(p as u32);
            }
        }
        Ok(IncidenceGeometry { point_labels, line_labels, point_lines, line_points, adj })
    }

    /// Unlabelled geometry.
    pub fn from_incidences(points: usize, lines: usize, incidences: &[(u32, u32)]) -> Result<IncidenceGeometry, GeometryError> {
        let pl = (0..points as u32).map(ElementLabel::Plain).collect();
        let ll = (0..lines as u32).map(ElementLabel::Plain).collect();
        IncidenceGeometry::new(pl, ll, incidences)
    }

    pub fn num_points(&self) -> usize {
        self.point_labels.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_incidences(&self) -> usize {
        self.point_lines.iter().map(Vec::len).sum()
    }

    pub fn point_label(&self, p: u32) -> ElementLabel {
        self.point_labels[p as usize]
    }

    pub fn line_label(&self, l: u32) -> ElementLabel {
        self.line_labels[l as usize]
    }

    pub fn lines_on(&self, p: u32) -> &[u32] {
        &self.point_lines[p as usize]
    }

    pub fn points_on(&self, l: u32) -> &[u32] {
        &self.line_points[l as usize]
    }

    /// Neighbours of an incidence-graph vertex.
    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Label of an incidence-graph vertex.
    pub fn vertex_label(&self, v: u32) -> ElementLabel {
        let np = self.num_points() as u32;
        if v < np {
            self.point_label(v)
        } else {
            self.line_label(v - np)
        }
    }

    /// `(lines per point, points per line)` when both are constant.
    pub fn degrees(&self) -> Option<(usize, usize)> {
        let pd = uniform(self.point_lines.iter().map(Vec::len))?;
        let ld = uniform(self.line_points.iter().map(Vec::len))?;
        Some((pd, ld))
    }

    /// Any two points share at most one line.
    pub fn is_partial_linear_space(&self) -> bool {
        let mut pairs = BTreeSet::new();
        for pts in &self.line_points {
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    if !pairs.insert((a.min(b), a.max(b))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// No point lies on two of the given lines.
    pub fn lines_pairwise_disjoint(&self, lines: &[u32]) -> bool {
        let mut used = BTreeSet::new();
        lines.iter().all(|&l| self.points_on(l).iter().all(|&p| used.insert(p)))
    }

    /// Breadth-first search from one vertex: eccentricity and the shortest
    /// cycle closed by a non-tree edge.
    pub fn bfs_profile(&self, source: u32) -> SourceProfile {
        let (dist, parent) = self.bfs(source);
        let mut reached = 0;
        let mut ecc = 0;
        let mut cycle: Option<(usize, u32, u32)> = None;
        for (u, &du) in dist.iter().enumerate() {
            if du == u32::MAX {
                continue;
            }
            reached += 1;
            ecc = ecc.max(du as usize);
            for &w in &self.adj[u] {
                let dw = dist[w as usize];
                // each non-tree edge between layers closes a closed walk through the source
                let tree = parent[w as usize] == u as u32 || parent[u] == w;
                if dw != u32::MAX && dw >= du && !tree {
                    let len = (du + dw + 1) as usize;
                    if cycle.map_or(true, |c| (len, u as u32, w) < c) {
                        cycle = Some((len, u as u32, w));
                    }
                }
            }
        }
        SourceProfile { source, reached, eccentricity: ecc, cycle }
    }

    fn bfs(&self, source: u32) -> (Vec<u32>, Vec<u32>) {
        let n = self.num_vertices();
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        dist[source as usize] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    parent[w as usize] = u;
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// The simple cycle closed by edge `u–w` in the BFS tree of `source`,
    /// trimmed at the lowest common ancestor.
    pub fn cycle_witness(&self, source: u32, u: u32, w: u32) -> Vec<u32> {
        let (_, parent) = self.bfs(source);
        let path = |mut x: u32| {
            let mut p = vec![x];
            while x != source {
                x = parent[x as usize];
                p.push(x);
            }
            p.reverse();
            p
        };
        let (pu, pw) = (path(u), path(w));
        let mut k = 0;
        while k + 1 < pu.len() && k + 1 < pw.len() && pu[k + 1] == pw[k + 1] {
            k += 1;
        }
        let mut cycle: Vec<u32> = pu[k..].to_vec();
        cycle.extend(pw[k + 1..].iter().rev());
        cycle
    }

    fn components(&self) -> Vec<(u32, usize)> {
        let mut seen = vec![false; self.num_vertices()];
        let mut out = Vec::new();
        for v in 0..self.num_vertices() {
            if seen[v] {
                continue;
            }
            let (dist, _) = self.bfs(v as u32);
            let mut size = 0;
            for (x, &d) in dist.iter().enumerate() {
                if d != u32::MAX {
                    seen[x] = true;
                    size += 1;
                }
            }
            out.push((v as u32, size));
        }
        out
    }
}

fn uniform(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

/// Result of one breadth-first search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceProfile {
    pub source: u32,
    pub reached: usize,
    pub eccentricity: usize,
    /// `(length, u, w)` for the shortest closed walk found through a non-tree
    /// edge `u–w`.
    pub cycle: Option<(usize, u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonCertificate {
    pub n: usize,
    /// `(s, t)`: `s+1` points per line, `t+1` lines per point.
    pub order: Option<(usize, usize)>,
    pub points: usize,
    pub lines: usize,
    pub expected_points: Option<usize>,
    pub expected_lines: Option<usize>,
    pub girth: Option<usize>,
    pub diameter: Option<usize>,
    pub connected: bool,
    /// `(representative vertex, size)` per connected component.
    pub components: Vec<(u32, usize)>,
    /// A shortest cycle of the incidence graph, as vertices.
    pub witness_cycle: Option<Vec<u32>>,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Point and line counts of a generalised n-gon of order (s,t).
pub fn polygon_counts(n: usize, s: usize, t: usize) -> Option<(usize, usize)> {
    let st = s * t;
    match n {
        3 if s == t => Some((s * s + s + 1, s * s + s + 1)),
        4 => Some(((1 + s) * (1 + st), (1 + t) * (1 + st))),
        6 => Some(((1 + s) * (1 + st + st * st), (1 + t) * (1 + st + st * st))),
        8 => Some(((1 + s) * (1 + st) * (1 + st * st), (1 + t) * (1 + st) * (1 + st * st))),
        _ => None,
    }
}

impl PolygonCertificate {
    /// Assembles a certificate from one profile per vertex, in any order.
    pub fn from_profiles(g: &IncidenceGeometry, n: usize, profiles: &[SourceProfile]) -> PolygonCertificate {
        let v = g.num_vertices();
        let connected = v > 0 && profiles.iter().all(|p| p.reached == v);
        let best = profiles.iter().filter_map(|p| p.cycle.map(|c| (c, p.source))).min();
        let girth = best.map(|((len, _, _), _)| len);
        let witness_cycle = best.map(|((_, a, b), s)| g.cycle_witness(s, a, b));
        let diameter = connected.then(|| profiles.iter().map(|p| p.eccentricity).max().unwrap_or(0));
        let order = g.degrees().and_then(|(pd, ld)| (pd >= 1 && ld >= 1).then(|| (ld - 1, pd - 1)));
        let expected = order.and_then(|(s, t)| polygon_counts(n, s, t));
        let components = if connected { vec![(0, v)] } else { g.components() };

        let mut failures = Vec::new();
        if !connected {
            failures.push(format!("disconnected: {} components", components.len()));
        }
        if girth != Some(2 * n) {
            failures.push(format!("girth {girth:?}, expected {}", 2 * n));
        }
        if diameter != Some(n) {
            failures.push(format!("diameter {diameter:?}, expected {n}"));
        }
        match order {
            None => failures.push("not biregular".into()),
            Some((s, t)) if s == 0 || t == 0 => failures.push("degenerate order".into()),
            _ => {}
        }
        match expected {
            Some((ep, el)) if (ep, el) != (g.num_points(), g.num_lines()) => {
                failures.push(format!("counts ({}, {}), expected ({ep}, {el})", g.num_points(), g.num_lines()))
            }
            None if order.is_some() => failures.push(format!("no count formula for n = {n} and this order")),
            _ => {}
        }
        PolygonCertificate {
            n,
            order,
            points: g.num_points(),
            lines: g.num_lines(),
            expected_points: expected.map(|e| e.0),
            expected_lines: expected.map(|e| e.1),
            girth,
            diameter,
            connected,
            components,
            witness_cycle,
            pass: failures.is_empty(),
            failures,
        }
    }
}

/// Exact girth and diameter by BFS from every vertex.
pub fn certify_generalized_polygon(g: &IncidenceGeometry, n: usize) -> PolygonCertificate {
    let profiles: Vec<SourceProfile> = (0..g.num_vertices() as u32).map(|v| g.bfs_profile(v)).collect();
    PolygonCertificate::from_profiles(g, n, &profiles)
}

/// A `2k`-cycle of the incidence graph (an ordinary k-gon), if one exists.
pub fn ordinary_subpolygon_witness(g: &IncidenceGeometry, k: usize) -> Option<Vec<u32>> {
    let target = 2 * k;
    let girth = (0..g.num_vertices() as u32).filter_map(|v| g.bfs_profile(v).cycle).map(|c| c.0).min()?;
    if girth > target {
        return None;
    }
    let n = g.num_vertices();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(target);
    for start in 0..n as u32 {
        path.clear();
        path.push(start);
        on_path[start as usize] = true;
        if extend_cycle(g, start, target, &mut path, &mut on_path) {
            return Some(path);
        }
        on_path[start as usize] = false;
    }
    None
}

/// Depth-first extension of a simple path through vertices above `start`.
fn extend_cycle(g: &IncidenceGeometry, start: u32, target: usize, path: &mut Vec<u32>, on_path: &mut [bool]) -> bool {
    let last = *path.last().unwrap();
    if path.len() == target {
        return g.neighbours(last).contains(&start);
    }
    for &w in g.neighbours(last) {
        if w <= start || on_path[w as usize] {
            continue;
        }
        path.push(w);
        on_path[w as usize] = true;
        if extend_cycle(g, start, target, path, on_path) {
            return true;
        }
        on_path[w as usize] = false;
        path.pop();
    }
    false
}

/// Γ: points are generators and affine points, lines are points of `O` and
/// the elements of `omega`.
pub fn build_gamma(surface: &HermitianSurface, omega: &[u32]) -> IncidenceGeometry {
    let ng = surface.generators().len();
    let affine = surface.affine();
    let curve = surface.curve();
    let mut point_labels: Vec<ElementLabel> = (0..ng as u32).map(ElementLabel::Generator).collect();
    point_labels.extend(affine.iter().map(|&p| ElementLabel::AffinePoint(p)));
    let mut line_labels: Vec<ElementLabel> = curve.iter().map(|&x| ElementLabel::CurvePoint(x)).collect();
    line_labels.extend(omega.iter().map(|&b| ElementLabel::Subgenerator(b)));

    let mut affine_slot = vec![u32::MAX; surface.points().len()];
    for (i, &p) in affine.iter().enumerate() {
        affine_slot[p as usize] = (ng + i) as u32;
    }
    let mut curve_slot = vec![u32::MAX; surface.points().len()];
    for (i, &x) in curve.iter().enumerate() {
        curve_slot[x as usize] = i as u32;
    }
    let mut inc = Vec::new();
    for (gi, gen) in surface.generators().iter().enumerate() {
        inc.push((gi as u32, curve_slot[gen.curve_point as usize]));
    }
    for (j, &b) in omega.iter().enumerate() {
        let line = (curve.len() + j) as u32;
        let sb = surface.subgenerator(b);
        inc.push((sb.host, line));
        for &p in sb.points.iter().filter(|&&p| !surface.on_curve(p)) {
            inc.push((affine_slot[p as usize], line));
        }
    }
    IncidenceGeometry::new(point_labels, line_labels, &inc).expect("Γ incidences are distinct")
}

/// The mixed-class negative control: each generator contributes the `q`
/// subgenerators it carries from a seeded random class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedOmega {
    pub seed: u64,
    /// Class position chosen per generator.
    pub choice: Vec<usize>,
    pub omega: Vec<u32>,
}

pub fn mixed_class_omega(surface: &HermitianSurface, classes: &NormClasses, seed: u64) -> MixedOmega {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nc = classes.classes().len();
    let mut choice: Vec<usize> = (0..surface.generators().len()).map(|_| rng.gen_range(0..nc)).collect();
    if choice.iter().all(|&c| c == choice[0]) {
        choice[0] = (choice[0] + 1) % nc;
    }
    let mut omega: Vec<u32> = (0..surface.subgenerators().len() as u32)
        .filter(|&b| classes.class_of(b) == choice[surface.subgenerator(b).host as usize])
        .collect();
    omega.sort_unstable();
    MixedOmega { seed, choice, omega }
}
