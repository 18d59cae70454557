use std::io::Read;

use ising_peel::algebra::{constants_critical, parse_rational, Field};
use ising_peel::map::{ball_sampler_halfplane, sample_finite_map, validate_map, ColoredPlanarMap, CriticalFiller, Expected, FaceKind, Spin};
use ising_peel::sim::{LawProvider, RngStream};
use ising_peel::tutte::{build_evaluated_table, Coef};
use serde::Serialize;
use serde_json::json;

use crate::args::{Global, MapBallArgs, MapSampleArgs, MapValidateArgs, OutFormat};
use crate::output::{csv_string, emit, json_string, need_seed, CliError, CliResult};

#[derive(Serialize, Debug)]
struct HalfEdgeRow {
    seed: u64,
    half_edge: usize,
    origin: u32,
    twin: u32,
    next: u32,
    face: u32,
    face_kind: &'static str,
    side_spin: &'static str,
}

fn kind_label(k: FaceKind) -> &'static str {
    match k {
        FaceKind::Internal(Spin::Plus) => "+",
        FaceKind::Internal(Spin::Minus) => "-",
        FaceKind::External => "external",
        FaceKind::Hole => "hole",
        FaceKind::Unexplored => "unexplored",
    }
}

fn half_edge_rows(m: &ColoredPlanarMap, seed: u64) -> Vec<HalfEdgeRow> {
    (0..m.twin.len())
        .map(|h| HalfEdgeRow {
            seed,
            half_edge: h,
            origin: m.origin[h],
            twin: m.twin[h],
            next: m.next[h],
            face: m.face[h],
            face_kind: kind_label(m.faces[m.face[h] as usize]),
            side_spin: match m.side_spin[h] {
                Some(Spin::Plus) => "+",
                Some(Spin::Minus) => "-",
                None => "",
            },
        })
        .collect()
}

fn sample_with<F: Field + Coef<Nu = F>>(a: &MapSampleArgs, nu: F, seed: u64) -> CliResult<ColoredPlanarMap> {
    let table = build_evaluated_table(a.n, a.p + a.q + 2, nu)?;
    let mut rng = RngStream::new(seed, 0).rng();
    Ok(sample_finite_map(a.p, a.q, a.n, &table, &mut rng)?)
}

pub fn map_sample(g: &Global, a: &MapSampleArgs) -> CliResult {
    let seed = need_seed(a.seed)?;
    let m = match a.nu.trim() {
        "nu_c" => sample_with(a, constants_critical().nu_c, seed)?,
        s => {
            let nu = parse_rational(s).ok_or_else(|| CliError::Usage(format!("cannot parse ν = {s:?}")))?;
            sample_with(a, nu, seed)?
        }
    };
    let text = match g.format.unwrap_or(OutFormat::Text) {
        OutFormat::Text => format!("# seed {seed}\n# nu {}\n{}", a.nu, m.to_text()),
        OutFormat::Json => json_string(&json!({ "seed": seed, "nu": a.nu, "map": m }))?,
        OutFormat::Csv => csv_string(&half_edge_rows(&m, seed))?,
    };
    emit(g, &text)
}

fn read_map(path: &std::path::Path) -> CliResult<ColoredPlanarMap> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path)?;
    }
    if !s.trim_start().starts_with('{') {
        return Ok(ColoredPlanarMap::from_text(&s)?);
    }
    let v: serde_json::Value = serde_json::from_str(&s)?;
    // accept the output of map-sample (map under "map") or map-ball
    // (map under "ball.ball.map") as well as a bare map
    let inner = v.get("map").or_else(|| v.pointer("/ball/ball/map")).cloned().unwrap_or(v);
    serde_json::from_value(inner).map_err(|e| CliError::Usage(format!("not a map: {e}")))
}

#[derive(Serialize, Debug)]
struct ValidationRow {
    ok: bool,
    vertices: usize,
    edges: usize,
    faces: usize,
    internal_faces: usize,
    monochromatic_edges: usize,
    weight: f64,
    problems: String,
}

pub fn map_validate(g: &Global, a: &MapValidateArgs) -> CliResult {
    let m = read_map(&a.input)?;
    let rep = validate_map(&m, a.nu, &Expected { p: a.p, q: a.q, faces: a.faces, weight: None });
    let text = match g.format.unwrap_or(OutFormat::Text) {
        OutFormat::Text => format!("{rep}\n"),
        OutFormat::Json => json_string(&json!({ "ok": rep.ok(), "report": rep }))?,
        OutFormat::Csv => csv_string(&[ValidationRow {
            ok: rep.ok(),
            vertices: rep.vertices,
            edges: rep.edges,
            faces: rep.faces,
            internal_faces: rep.internal_faces,
            monochromatic_edges: rep.monochromatic_edges,
            weight: rep.weight,
            problems: rep.problems.join("; "),
        }])?,
    };
    emit(g, &text)?;
    if rep.ok() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} validation problem(s)", rep.problems.len())))
    }
}

#[derive(Serialize, Debug)]
struct ThetaRow {
    seed: u64,
    radius: usize,
    theta: u64,
}

pub fn map_ball(g: &Global, a: &MapBallArgs) -> CliResult {
    let seed = need_seed(a.seed)?;
    let laws = LawProvider::shared()?;
    let filler = CriticalFiller::new(a.filler_faces, a.filler_perimeter)?;
    let mut rng = RngStream::new(seed, 0).rng();
    let b = ball_sampler_halfplane(a.p, a.r, &laws, &filler, a.guard, &mut rng)?;
    let text = match g.format.unwrap_or(OutFormat::Text) {
        OutFormat::Text => {
            let theta: Vec<String> = b.theta.iter().map(u64::to_string).collect();
            format!(
                "# seed {seed}\n# theta {}\n# faces {}\n# unfilled {}\n{}",
                theta.join(" "),
                b.faces,
                b.unfilled,
                b.ball.map.to_text()
            )
        }
        OutFormat::Json => json_string(&json!({ "seed": seed, "p": a.p, "ball": b }))?,
        OutFormat::Csv => {
            let rows: Vec<ThetaRow> = b.theta.iter().enumerate().map(|(j, &t)| ThetaRow { seed, radius: j, theta: t }).collect();
            csv_string(&rows)?
        }
    };
    emit(g, &text)
}
