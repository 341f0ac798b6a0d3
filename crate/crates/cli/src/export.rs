//! Interchange exports: line sets, Γ, the class table and the stabiliser
//! of the base subgenerator.

use cayley_core::hexagon::build_gamma;
use cayley_core::quadric::{find_plane_spread, spread_union_lines};
use cayley_core::unitary::{closed_form_parameters, enumerate_gu3, stabiliser};
use cayley_core::GeometryError;
use serde_json::{json, Value};

use crate::lineset::{encode, LineSetFile};
use crate::suites::{Context, SPREAD_SEARCH_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportKind {
    /// Spread lines plus the images of Ω(μ) on Q(6,q).
    Lines,
    /// Lines of a plane spread of Q(6,q).
    SpreadUnion,
    /// Points, lines and incidences of Γ.
    Gamma,
    /// The norm-class table.
    Classes,
    /// Stabiliser of the base subgenerator in GU₃(q).
    Stabiliser,
}

pub fn omega_line_set(ctx: &Context<'_>, pos: usize) -> Result<LineSetFile, GeometryError> {
    let bcs = ctx.bcs()?;
    Ok(encode(ctx.field(), &bcs.hexagon_lines(ctx.classes.class(pos))?))
}

pub fn spread_union_line_set(ctx: &Context<'_>) -> Result<Option<LineSetFile>, GeometryError> {
    let bcs = ctx.bcs()?;
    let space = bcs.parabolic();
    Ok(find_plane_spread(space, bcs.planes(), SPREAD_SEARCH_BUDGET)
        .map(|ps| encode(ctx.field(), &spread_union_lines(space, bcs.planes(), &ps))))
}

pub fn gamma_json(ctx: &Context<'_>, pos: usize) -> Value {
    let g = build_gamma(ctx.surface, ctx.classes.class(pos));
    let element = |id: u32, l: cayley_core::hexagon::ElementLabel| json!({"id": id, "type": l.kind(), "key": l.key()});
    let points: Vec<Value> = (0..g.num_points() as u32).map(|p| element(p, g.point_label(p))).collect();
    let lines: Vec<Value> = (0..g.num_lines() as u32).map(|l| element(l, g.line_label(l))).collect();
    let incidences: Vec<[u32; 2]> =
        (0..g.num_points() as u32).flat_map(|p| g.lines_on(p).iter().map(move |&l| [p, l])).collect();
    json!({"q": ctx.q(), "class": pos, "points": points, "lines": lines, "incidences": incidences})
}

/// Element keys are the sorted surface indices of a subgenerator's points.
pub fn classes_json(ctx: &Context<'_>) -> Value {
    let f = ctx.field();
    let classes: Vec<Value> = ctx
        .classes
        .classes()
        .iter()
        .enumerate()
        .map(|(pos, class)| {
            let mu = ctx.classes.values()[pos];
            let keys: Vec<&[u32]> = class.iter().map(|&b| ctx.surface.subgenerator(b).points.as_slice()).collect();
            json!({"mu_index": pos, "mu": mu.0, "log": f.log(mu), "size": class.len(), "elements": keys})
        })
        .collect();
    json!({"q": ctx.q(), "seed": ctx.surface.subgenerator(ctx.classes.seed()).points, "classes": classes})
}

/// Matrix entries are element indices of GF(q²).
pub fn stabiliser_json(ctx: &Context<'_>) -> Value {
    let f = ctx.field();
    let group = enumerate_gu3(f);
    let stab = stabiliser(ctx.surface, &group, ctx.classes.seed());
    let elements: Vec<Value> = stab
        .iter()
        .map(|a| {
            let m = a.matrix();
            let rows: Vec<Vec<u8>> = (0..3).map(|i| (0..3).map(|j| m.get(i, j).0).collect()).collect();
            let params = closed_form_parameters(f, m).ok().map(|(k, b, g)| [k.0, b.0, g.0]);
            json!({"matrix": rows, "det": a.det().0, "k_b_g": params})
        })
        .collect();
    json!({"q": ctx.q(), "group_order": group.len(), "stabiliser_order": stab.len(), "elements": elements})
}
