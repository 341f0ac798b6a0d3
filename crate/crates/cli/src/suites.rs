//! The verification suites. Each suite is a pure function of the context
//! and configuration; parallel sections reduce in a fixed order.

use std::sync::OnceLock;
use std::time::Instant;

use cayley_core::hexagon::{build_gamma, mixed_class_omega, ordinary_subpolygon_witness, SourceProfile};
use cayley_core::quadric::{
    certify_split_cayley, classify_line_set, extract_spread, find_plane_spread, hermitian_spread_check,
    spread_union_lines, su3bar_orbit_census, switch_regulus, verify_dictionary, LineSetCensus, LineSetClass,
    SplitCayleyCertificate,
};
use cayley_core::unitary::{
    image_of_subgenerator, orbit_with_transporters, swap_one_element, verify_norm_subplane_pairs, verify_omega_axioms,
};
use cayley_core::{
    BcsMap, Field, GeometryError, HermitianSurface, IncidenceGeometry, NormClasses, PolygonCertificate, Subspace,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ConfigError, RunConfig, Suite};
use crate::report::{Check, Report, SuiteResult};

/// Plane-spread search budget for the spread-union control.
pub const SPREAD_SEARCH_BUDGET: usize = 2_000_000;

/// The objects shared by the suites of one run.
pub struct Context<'a> {
    pub surface: &'a HermitianSurface,
    pub classes: &'a NormClasses,
    bcs: OnceLock<Result<BcsMap<'a>, GeometryError>>,
}

impl<'a> Context<'a> {
    pub fn new(surface: &'a HermitianSurface, classes: &'a NormClasses) -> Context<'a> {
        Context { surface, classes, bcs: OnceLock::new() }
    }

    pub fn field(&self) -> &Field {
        self.surface.field()
    }

    pub fn q(&self) -> usize {
        self.field().q()
    }

    pub fn bcs(&self) -> Result<&BcsMap<'a>, GeometryError> {
        self.bcs.get_or_init(|| BcsMap::new(self.surface)).as_ref().map_err(Clone::clone)
    }
}

fn q3(q: usize) -> usize {
    q * q * q + 1
}

fn gamma_size(q: usize) -> usize {
    (q.pow(6) - 1) / (q - 1)
}

/// All-sources BFS on the rayon pool, assembled in vertex order.
pub fn certify_gamma(g: &IncidenceGeometry) -> PolygonCertificate {
    let profiles: Vec<SourceProfile> = (0..g.num_vertices() as u32).into_par_iter().map(|v| g.bfs_profile(v)).collect();
    PolygonCertificate::from_profiles(g, 6, &profiles)
}

pub fn labelled_cycle(g: &IncidenceGeometry, cycle: &[u32]) -> Value {
    cycle
        .iter()
        .map(|&v| {
            let l = g.vertex_label(v);
            json!({"vertex": v, "type": l.kind(), "key": l.key()})
        })
        .collect()
}

/// Whether `cycle` is a closed walk with distinct vertices in the incidence
/// graph.
pub fn is_cycle(g: &IncidenceGeometry, cycle: &[u32]) -> bool {
    let mut seen = cycle.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == cycle.len()
        && cycle.len() >= 3
        && (0..cycle.len()).all(|i| g.neighbours(cycle[i]).contains(&cycle[(i + 1) % cycle.len()]))
}

fn geometry_error(suite: &mut SuiteResult, e: GeometryError) {
    suite.push(Check::rule("construction", e.to_string(), "ok", false));
}

pub fn counts(ctx: &Context<'_>, cfg: &RunConfig) -> SuiteResult {
    let q = ctx.q();
    let mut s = SuiteResult::new(Suite::Counts.name());
    for pos in cfg.classes() {
        let g = build_gamma(ctx.surface, ctx.classes.class(pos));
        s.push(Check::eq(format!("class {pos} points"), g.num_points(), gamma_size(q)));
        s.push(Check::eq(format!("class {pos} lines"), g.num_lines(), gamma_size(q)));
        s.push(Check::eq(format!("class {pos} incidences"), g.num_incidences(), gamma_size(q) * (q + 1)));
    }
    s
}

fn hexagon_checks(s: &mut SuiteResult, g: &IncidenceGeometry, q: usize, label: &str) {
    let cert = certify_gamma(g);
    s.push(Check::eq(format!("{label} order"), json!(cert.order.map(|(a, b)| [a, b])), json!([q, q])));
    s.push(Check::eq(format!("{label} points"), cert.points, gamma_size(q)));
    s.push(Check::eq(format!("{label} lines"), cert.lines, gamma_size(q)));
    s.push(Check::eq(format!("{label} connected"), cert.connected, true));
    s.push(Check::eq(format!("{label} girth"), json!(cert.girth), 12));
    s.push(Check::eq(format!("{label} diameter"), json!(cert.diameter), 6));
    s.push(Check::eq(format!("{label} partial linear space"), g.is_partial_linear_space(), true));
    let type_one: Vec<u32> = (0..g.num_lines() as u32).filter(|&l| g.line_label(l).kind() == "curve-point").collect();
    s.push(Check::eq(format!("{label} curve lines pairwise disjoint"), g.lines_pairwise_disjoint(&type_one), true));
    for k in [3, 4, 5] {
        let w = ordinary_subpolygon_witness(g, k);
        s.push(Check::eq(format!("{label} ordinary {k}-gons"), w.is_some(), false));
    }
    if !cert.pass {
        let cycle = cert.witness_cycle.as_deref().map(|c| labelled_cycle(g, c));
        s.witness(json!({"omega": label, "failures": cert.failures, "cycle": cycle, "components": cert.components}));
    }
}

pub fn hexagon(ctx: &Context<'_>, cfg: &RunConfig) -> SuiteResult {
    let q = ctx.q();
    let mut s = SuiteResult::new(Suite::Hexagon.name());
    match cfg.corrupt_seed {
        Some(seed) => {
            let mixed = mixed_class_omega(ctx.surface, ctx.classes, seed);
            let g = build_gamma(ctx.surface, &mixed.omega);
            hexagon_checks(&mut s, &g, q, &format!("mixed seed {seed}"));
        }
        None => {
            for pos in cfg.classes() {
                let g = build_gamma(ctx.surface, ctx.classes.class(pos));
                hexagon_checks(&mut s, &g, q, &format!("class {pos}"));
            }
        }
    }
    s
}

pub fn norms(ctx: &Context<'_>) -> SuiteResult {
    let f = ctx.field();
    let q = f.q();
    let c = ctx.classes;
    let surface = ctx.surface;
    let mut s = SuiteResult::new(Suite::Norms.name());
    let total = surface.subgenerators().len();
    s.push(Check::eq("classes", c.classes().len(), q + 1));
    for (pos, class) in c.classes().iter().enumerate() {
        s.push(Check::eq(format!("class {pos} size"), class.len(), q * (q + 1) * q3(q)));
    }
    s.push(Check::eq("subgenerators meeting O", c.classes().iter().map(Vec::len).sum::<usize>(), total));
    s.push(Check::eq("seed norm is 1", c.norm(c.seed()) == cayley_core::FieldElement::ONE, true));

    let reversed = orbit_with_transporters(surface, &c.gu().reversed(), c.seed());
    let agree = (0..total as u32).filter(|&b| reversed.word_det(f, b) == Some(c.norm(b))).count();
    s.push(Check::eq("reversed transporters agree", agree, total));

    let gu = c.gu();
    let consistent: usize = (0..gu.len())
        .into_par_iter()
        .map(|g| {
            let det = gu.generators()[g].det();
            (0..total as u32)
                .filter(|&b| c.norm(image_of_subgenerator(surface, gu.permutation(g), b)) == f.mul(c.norm(b), det))
                .count()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    s.push(Check::eq("edge-consistent norms", consistent, total * gu.len()));

    for (pos, class) in c.classes().iter().enumerate() {
        let orbit = orbit_with_transporters(surface, c.su(), class[0]);
        let mut cells = orbit.orbit().to_vec();
        cells.sort_unstable();
        s.push(Check::eq(format!("class {pos} is one SU3 orbit"), &cells == class, true));
    }
    s
}

pub fn omega(ctx: &Context<'_>, cfg: &RunConfig) -> SuiteResult {
    let q = ctx.q();
    let mut s = SuiteResult::new(Suite::Omega.name());
    for pos in cfg.classes() {
        let r = verify_omega_axioms(ctx.surface, ctx.classes.class(pos));
        s.push(Check::eq(format!("class {pos} affine points"), r.affine_checked, q * q * q3(q)));
        s.push(Check::eq(format!("class {pos} curve/polar pairs"), r.pairs_checked, q3(q) * q * q * (q + 1)));
        s.push(Check::eq(format!("class {pos} violations"), r.violations.len(), 0));
        if !r.violations.is_empty() {
            s.witness(json!({"class": pos, "violations": format!("{:?}", &r.violations[..r.violations.len().min(8)])}));
        }
    }
    s
}

pub fn pairs(ctx: &Context<'_>) -> SuiteResult {
    let q = ctx.q();
    let mut s = SuiteResult::new(Suite::Pairs.name());
    let r = verify_norm_subplane_pairs(ctx.surface, ctx.classes);
    let per_point_same = (q + 1) * (q + 1) * q / 2;
    let per_point = (q + 1) * q / 2 * (q + 1) * (q + 1);
    let affine = q * q * q3(q);
    s.push(Check::eq("qualifying pairs", r.pairs, affine * per_point));
    s.push(Check::eq("same norm, contained", r.same_norm_contained, affine * per_point_same));
    s.push(Check::eq("same norm, not contained", r.same_norm_not_contained, 0));
    s.push(Check::eq("different norm, contained", r.cross_norm_contained, 0));
    s.push(Check::eq("different norm, not contained", r.cross_norm_not_contained, affine * (per_point - per_point_same)));
    s.push(Check::eq("biconditional", r.biconditional_holds(), true));
    s
}

pub fn dictionary(ctx: &Context<'_>) -> SuiteResult {
    let mut s = SuiteResult::new(Suite::Dictionary.name());
    let bcs = match ctx.bcs() {
        Ok(b) => b,
        Err(e) => {
            geometry_error(&mut s, e);
            return s;
        }
    };
    let r = verify_dictionary(bcs);
    for row in &r.rows {
        s.push(Check::eq(row.surface, row.surface_count, row.expected));
        s.push(Check::eq(row.quadric, row.quadric_count, row.expected));
        if row.pointwise {
            s.push(Check::eq(format!("{} round trips", row.surface), row.round_trips, row.expected));
        }
    }
    s.push(Check::eq("translation failures", r.failures.len(), 0));
    if !r.failures.is_empty() {
        s.witness(json!({"failures": r.failures}));
    }
    s
}

fn census_checks(s: &mut SuiteResult, q: usize, planes: usize, label: &str, class: LineSetClass, c: &LineSetCensus) {
    let (n0, n1, np) = LineSetCensus::expected_hexagon(q);
    s.push(Check::eq(format!("{label} verdict"), format!("{class:?}"), "Hexagon"));
    s.push(Check::eq(format!("{label} N0"), c.n0, n0));
    s.push(Check::eq(format!("{label} N1"), c.n1, n1));
    s.push(Check::eq(format!("{label} Nq+1"), c.n_pencil, np));
    s.push(Check::eq(format!("{label} Nfull"), c.n_full, 0));
    s.push(Check::eq(format!("{label} total"), c.n0 + c.n1 + c.n_pencil + c.n_full + c.n_other, planes));
}

pub fn plane_census(ctx: &Context<'_>, cfg: &RunConfig) -> SuiteResult {
    let q = ctx.q();
    let mut s = SuiteResult::new(Suite::PlaneCensus.name());
    let bcs = match ctx.bcs() {
        Ok(b) => b,
        Err(e) => {
            geometry_error(&mut s, e);
            return s;
        }
    };
    s.push(Check::eq("planes of Q(6,q)", bcs.planes().len(), (q + 1) * (q * q + 1) * q3(q)));
    for pos in cfg.classes() {
        match bcs.hexagon_lines(ctx.classes.class(pos)) {
            Ok(lines) => {
                let (class, c) = classify_line_set(bcs.parabolic(), bcs.planes(), &lines);
                census_checks(&mut s, q, bcs.planes().len(), &format!("class {pos}"), class, &c);
            }
            Err(e) => geometry_error(&mut s, e),
        }
    }
    s
}

fn spread_checks(s: &mut SuiteResult, q: usize, label: &str, r: &cayley_core::quadric::SpreadReport) {
    let n = q3(q);
    s.push(Check::eq(format!("{label} lines"), r.lines, n));
    s.push(Check::eq(format!("{label} in Q-(5,q)"), r.in_section, true));
    s.push(Check::eq(format!("{label} pairwise disjoint"), r.pairwise_disjoint, true));
    s.push(Check::eq(format!("{label} covers Q-(5,q)"), r.covering, true));
    s.push(Check::eq(format!("{label} pairs"), r.pairs_checked, n * (n - 1) / 2));
    s.push(Check::eq(format!("{label} reguli closed"), r.pairs_closed, r.pairs_checked));
}

pub fn spread(ctx: &Context<'_>, cfg: &RunConfig) -> SuiteResult {
    let q = ctx.q();
    let mut s = SuiteResult::new(Suite::Spread.name());
    let bcs = match ctx.bcs() {
        Ok(b) => b,
        Err(e) => {
            geometry_error(&mut s, e);
            return s;
        }
    };
    let mut canonical = bcs.spread().to_vec();
    canonical.sort();
    let r = hermitian_spread_check(bcs.parabolic(), bcs.sigma(), &canonical);
    spread_checks(&mut s, q, "image of O", &r);
    for pos in cfg.classes() {
        let extracted = bcs.hexagon_lines(ctx.classes.class(pos)).ok().and_then(|l| extract_spread(bcs, &l));
        match extracted {
            Some(e) => {
                let r = hermitian_spread_check(bcs.parabolic(), bcs.sigma(), &e);
                spread_checks(&mut s, q, &format!("class {pos} extracted"), &r);
                s.push(Check::eq(format!("class {pos} extracted equals image of O"), e == canonical, true));
            }
            None => s.push(Check::rule(format!("class {pos} extraction"), "pencil-plane property fails", "ok", false)),
        }
    }
    s
}

pub fn line_orbits(ctx: &Context<'_>) -> SuiteResult {
    let mut s = SuiteResult::new(Suite::LineOrbits.name());
    let bcs = match ctx.bcs() {
        Ok(b) => b,
        Err(e) => {
            geometry_error(&mut s, e);
            return s;
        }
    };
    match su3bar_orbit_census(bcs, ctx.classes) {
        Ok(c) => {
            for row in &c.rows {
                s.push(Check::eq(row.family.name(), row.size, row.expected));
            }
            for (pos, &n) in c.class_sizes.iter().enumerate() {
                s.push(Check::eq(format!("affine-bound, class {pos}"), n, c.class_expected));
            }
            let sum: usize = c.rows.iter().map(|r| r.size).sum();
            s.push(Check::eq("total lines", sum, c.total_lines));
        }
        Err(e) => geometry_error(&mut s, e),
    }
    s
}

fn stages_json(cert: &SplitCayleyCertificate) -> Value {
    cert.stages.iter().map(|st| json!({"stage": st.stage, "pass": st.pass, "detail": st.detail})).collect()
}

/// Deterministic index choices derived from the seed.
fn pick(seed: u64, salt: u64, n: usize) -> usize {
    let mut x = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    (x % n as u64) as usize
}

/// Seeded mixed-class Ω′: must fail with a short-cycle witness.
pub fn mixed_control(s: &mut SuiteResult, ctx: &Context<'_>, seed: u64) -> cayley_core::hexagon::MixedOmega {
    let mixed = mixed_class_omega(ctx.surface, ctx.classes, seed);
    let g = build_gamma(ctx.surface, &mixed.omega);
    let cert = certify_gamma(&g);
    s.push(Check::eq("mixed-class certificate passes", cert.pass, false));
    let girth = cert.girth.unwrap_or(usize::MAX);
    s.push(Check::rule("mixed-class girth", json!(cert.girth), "<= 10", girth <= 10));
    let cycle = cert.witness_cycle.clone().unwrap_or_default();
    s.push(Check::eq("mixed-class witness length", cycle.len(), json!(cert.girth)));
    s.push(Check::eq("mixed-class witness is a cycle", is_cycle(&g, &cycle), true));
    let k = girth / 2;
    let sub = (3..=5).contains(&k).then(|| ordinary_subpolygon_witness(&g, k)).flatten();
    s.push(Check::rule("mixed-class ordinary subpolygon", json!(sub.as_ref().map(Vec::len)), json!(cert.girth), sub.as_ref().is_some_and(|c| c.len() == girth && is_cycle(&g, c))));
    let again = mixed_class_omega(ctx.surface, ctx.classes, seed);
    let cert2 = certify_gamma(&build_gamma(ctx.surface, &again.omega));
    s.push(Check::eq("mixed-class control reproducible", again == mixed && cert2 == cert, true));
    s.witness(json!({"control": "mixed-class", "seed": seed, "girth": cert.girth, "cycle": labelled_cycle(&g, &cycle)}));
    mixed
}

pub fn controls(ctx: &Context<'_>, cfg: &RunConfig) -> SuiteResult {
    let q = ctx.q();
    let seed = cfg.seed;
    let mut s = SuiteResult::new(Suite::Controls.name());

    let mixed = mixed_control(&mut s, ctx, seed);

    // one element swapped across classes
    let pos = pick(seed, 1, q + 1);
    let (swapped, removed, incoming) = swap_one_element(ctx.classes, pos, seed);
    let report = verify_omega_axioms(ctx.surface, &swapped);
    s.push(Check::rule("swapped-element violations", report.violations.len(), "> 0", !report.violations.is_empty()));
    s.witness(json!({"control": "swapped-element", "class": pos, "removed": removed, "incoming": incoming,
        "violations": format!("{:?}", &report.violations[..report.violations.len().min(4)])}));

    let bcs = match ctx.bcs() {
        Ok(b) => b,
        Err(e) => {
            geometry_error(&mut s, e);
            return s;
        }
    };
    let space = bcs.parabolic();

    // regulus switch
    let n = bcs.spread().len();
    let i = pick(seed, 2, n);
    let j = (i + 1 + pick(seed, 3, n - 1)) % n;
    match switch_regulus(space, bcs.spread(), i, j) {
        Ok(switched) => {
            let r = hermitian_spread_check(space, bcs.sigma(), &switched);
            s.push(Check::eq("switched spread partitions Q-(5,q)", r.pairwise_disjoint && r.covering, true));
            s.push(Check::rule("switched spread reguli closed", r.pairs_closed, format!("< {}", r.pairs_checked), r.pairs_closed < r.pairs_checked));
            s.push(Check::eq("switched spread passes", r.passed(), false));
            let again = switch_regulus(space, bcs.spread(), i, j).ok();
            s.push(Check::eq("regulus switch reproducible", again.as_ref() == Some(&switched), true));
            s.witness(json!({"control": "regulus-switch", "lines": [i, j], "open_pairs": r.open_pairs}));
        }
        Err(e) => geometry_error(&mut s, e),
    }

    // one hexagon line replaced
    if let Ok(mut lines) = bcs.hexagon_lines(ctx.classes.class(0)) {
        let outsiders: Vec<&Subspace> = bcs.lines().iter().filter(|l| lines.binary_search(l).is_err()).collect();
        let slot = pick(seed, 4, lines.len());
        lines[slot] = outsiders[pick(seed, 5, outsiders.len())].clone();
        let cert = certify_split_cayley(bcs, ctx.classes, &lines);
        s.push(Check::eq("replaced-line first failing stage", json!(cert.failed_stage()), "pencil-planes"));
    }

    // lines of a plane spread: pencils everywhere, but disconnected
    if q == 2 {
        match find_plane_spread(space, bcs.planes(), SPREAD_SEARCH_BUDGET) {
            Some(ps) => {
                let lines = spread_union_lines(space, bcs.planes(), &ps);
                let cert = certify_split_cayley(bcs, ctx.classes, &lines);
                s.push(Check::eq("spread-union first failing stage", json!(cert.failed_stage()), "connectivity"));
                s.witness(json!({"control": "spread-union", "stages": stages_json(&cert), "components": cert.components}));
            }
            None => s.push(Check::rule("spread-union instance", "not found", "plane spread", false)),
        }
    }

    // mixed-class line set through the full pipeline
    if let Ok(lines) = bcs.hexagon_lines(&mixed.omega) {
        let cert = certify_split_cayley(bcs, ctx.classes, &lines);
        s.push(Check::eq("mixed-class line set certifies", cert.pass, false));
    }
    s
}

/// The certification pipeline on an external line set.
pub fn certify(ctx: &Context<'_>, lines: &[Subspace]) -> SuiteResult {
    let mut s = SuiteResult::new("certify");
    let bcs = match ctx.bcs() {
        Ok(b) => b,
        Err(e) => {
            geometry_error(&mut s, e);
            return s;
        }
    };
    let cert = certify_split_cayley(bcs, ctx.classes, lines);
    for st in &cert.stages {
        s.push(Check::eq(st.stage, st.pass, true));
    }
    s.push(Check::rule("recovered norm class", json!(cert.class), "a single class", cert.pass && cert.class.is_some()));
    s.witness(json!({"stages": stages_json(&cert)}));
    if let (Some(p), Some(omega)) = (&cert.polygon, &cert.omega) {
        if let Some(c) = &p.witness_cycle {
            let g = build_gamma(ctx.surface, omega);
            s.witness(json!({"cycle": labelled_cycle(&g, c)}));
        }
    }
    s
}

pub fn run_suite(ctx: &Context<'_>, cfg: &RunConfig, suite: Suite) -> SuiteResult {
    match suite {
        Suite::Counts => counts(ctx, cfg),
        Suite::Hexagon => hexagon(ctx, cfg),
        Suite::Norms => norms(ctx),
        Suite::Omega => omega(ctx, cfg),
        Suite::Pairs => pairs(ctx),
        Suite::Dictionary => dictionary(ctx),
        Suite::PlaneCensus => plane_census(ctx, cfg),
        Suite::Spread => spread(ctx, cfg),
        Suite::LineOrbits => line_orbits(ctx),
        Suite::Controls => controls(ctx, cfg),
    }
}

/// Builds the surface and norm classes, then runs each selected suite on a
/// pool of `cfg.threads` workers.
pub fn run(command: &str, cfg: &RunConfig, suites: &[Suite]) -> Result<Report, ConfigError> {
    run_with(command, cfg, suites, |_, _| {})
}

/// As [`run`], with a hook for command-specific suites after the listed ones.
pub fn run_with(
    command: &str,
    cfg: &RunConfig,
    suites: &[Suite],
    extra: impl FnOnce(&Context<'_>, &mut Report) + Send,
) -> Result<Report, ConfigError> {
    let start = Instant::now();
    let field = cfg.field()?;
    let mut report = Report::new(command, cfg.q, field.spec(), cfg.seed);
    report.corrupt_seed = cfg.corrupt_seed;
    let outcome = with_context(cfg, |ctx| {
        let mut report = report.clone();
        report.timings_ms.insert("setup".into(), start.elapsed().as_millis() as u64);
        for &suite in suites {
            let t = Instant::now();
            let r = run_suite(ctx, cfg, suite);
            report.push(r, t.elapsed().as_millis() as u64);
        }
        extra(ctx, &mut report);
        report
    })?;
    Ok(outcome.unwrap_or_else(|e| {
        let mut s = SuiteResult::new("setup");
        geometry_error(&mut s, e);
        report.push(s, start.elapsed().as_millis() as u64);
        report
    }))
}

/// Builds the surface and norm classes on the configured pool and hands
/// them to `f`. The inner error is a failed construction certificate.
pub fn with_context<T: Send>(
    cfg: &RunConfig,
    f: impl FnOnce(&Context<'_>) -> T + Send,
) -> Result<Result<T, GeometryError>, ConfigError> {
    let field = cfg.field()?;
    with_pool(cfg, move || {
        let surface = HermitianSurface::new(field);
        Ok(NormClasses::new(&surface).map(|classes| f(&Context::new(&surface, &classes))))
    })
}

/// Runs `f` on a dedicated pool when a thread count is given.
pub fn with_pool<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> Result<T, ConfigError> + Send) -> Result<T, ConfigError> {
    match cfg.threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ConfigError::Threads(e.to_string()))?
            .install(f),
    }
}
