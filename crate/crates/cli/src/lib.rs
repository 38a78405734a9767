//! Command implementations behind the `homgrow` binary: file-driven wraps
//! of the core operations plus the acceptance verification suites.
//!
//! Reports are plain `key = value` text with a final verdict line, and
//! embed the tool version, the seed, and a digest of every input file, so
//! identical configuration yields byte-identical output.

pub mod suites;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use sha2::{Digest, Sha256};

use homgrow_core::complexes::SimplicialComplex;
use homgrow_core::covers::{
    build_cover, building_quotient, enumerate_covers, CellComplex, QuotientTarget, SimplicialMap,
};
use homgrow_core::embedding::{
    intersection_vector, mod2_graph_obstruction, moment_immersion, octahedral_obstruction_reduce,
    perturbed_octahedral_immersion, vankampen_solve, OctaOutcome, SolveOutcome, SolveRing,
};
use homgrow_core::growth::{
    graph_product_growth_estimate, growth_bracket, mapping_torus_decay, mv_decomposition,
    mv_inequality_check, nerve_relative_betti, normalized_betti, verify_graph_product_bound,
    with_identity_base, FamilySample,
};
use homgrow_core::io::{
    parse_complex, parse_graph_product, parse_immersion, write_complex, Report,
};
use homgrow_core::{rat, CoeffField, Rat};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(data: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(data);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Output of a command: the rendered report and whether properties passed.
pub struct CmdOutput {
    pub text: String,
    pub pass: bool,
}

fn read_input(path: &Path) -> Result<(String, String)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let digest = sha256_hex(text.as_bytes());
    Ok((text, digest))
}

fn header(report: &mut Report, command: &str, inputs: &[(&str, &Path, &str)], seed: u64) {
    report.set("tool", format!("homgrow {VERSION}"));
    report.set("command", command);
    for (name, path, digest) in inputs {
        report.set(format!("input_{name}"), path.display());
        report.set(format!("sha256_{name}"), digest);
    }
    report.set("seed", seed);
}

pub fn parse_field(s: &str) -> Result<CoeffField> {
    if s == "q" || s == "Q" {
        return Ok(CoeffField::Q);
    }
    if let Some(p) = s.strip_prefix('f').or_else(|| s.strip_prefix('F')) {
        let p: u64 = p.parse().map_err(|_| anyhow!("bad field `{s}`"))?;
        let field = CoeffField::Fp(p);
        if !field.modulus_is_prime() {
            bail!("modulus {p} is not prime");
        }
        return Ok(field);
    }
    bail!("field must be `q` or `f<prime>`, got `{s}`")
}

fn comma_names(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_owned())
        .filter(|x| !x.is_empty())
        .collect()
}

/// `complex check`: flag and no-square verdicts with witnesses.
pub fn complex_check(path: &Path, seed: u64) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let k = parse_complex(&text)?;
    let mut report = Report::new();
    header(&mut report, "complex check", &[("complex", path, &digest)], seed);
    report.set("vertices", k.vertex_count());
    report.set("dim", k.dim());
    let flag_witness = k.flag_witness();
    report.set("flag", flag_witness.is_none());
    let mut pass = flag_witness.is_none();
    match flag_witness {
        Some(w) => {
            let names: Vec<&str> = w.iter().map(|&v| k.vertex_name(v)).collect();
            report.set("flag_witness", names.join(","));
            report.set("no_square", "not-checked");
        }
        None => {
            let sq = k.no_square_witness().expect("flag was just verified");
            report.set("no_square", sq.is_none());
            if let Some(cycle) = sq {
                let names: Vec<&str> = cycle.iter().map(|&v| k.vertex_name(v)).collect();
                report.set("square_witness", names.join(","));
                pass = false;
            }
        }
    }
    Ok(CmdOutput {
        text: report.render(Some(pass)),
        pass,
    })
}

/// One of the complex transforms, emitting a complex file with the report
/// metadata as comments.
pub fn complex_transform(
    op: &str,
    path: &Path,
    simplex: Option<&str>,
    vertices: Option<&str>,
    out: Option<&Path>,
) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let k = parse_complex(&text)?;
    let to_indices = |names: &str| -> Result<Vec<u32>> {
        comma_names(names)
            .iter()
            .map(|n| k.vertex_index(n).map_err(|e| anyhow!(e)))
            .collect()
    };
    let mut extra_comment = String::new();
    let result = match op {
        "link" => {
            let spx = to_indices(simplex.ok_or_else(|| anyhow!("--simplex required"))?)?;
            k.link(&spx)?
        }
        "full" => {
            let verts = to_indices(vertices.ok_or_else(|| anyhow!("--vertices required"))?)?;
            k.full_subcomplex(&verts)?
        }
        "bary" => k.barycentric_subdivision(),
        "octa" => {
            let (ol, proj) = k.octahedralize();
            for (w, &v) in proj.iter().enumerate() {
                let _ = writeln!(
                    extra_comment,
                    "# pi {} -> {}",
                    ol.vertex_name(w as u32),
                    k.vertex_name(v)
                );
            }
            ol
        }
        other => bail!("unknown transform `{other}`"),
    };
    let mut body = format!(
        "# homgrow {VERSION} complex {op}\n# input {} sha256 {}\n",
        path.display(),
        digest
    );
    body.push_str(&extra_comment);
    body.push_str(&write_complex(&result));
    if let Some(out_path) = out {
        std::fs::write(out_path, &body)
            .with_context(|| format!("writing {}", out_path.display()))?;
    }
    Ok(CmdOutput {
        text: body,
        pass: true,
    })
}

pub fn growth_estimate(path: &Path, k: usize, field: CoeffField, seed: u64) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let spec = parse_graph_product(&text)?;
    let (center, error) = graph_product_growth_estimate(&spec, k, field)?;
    let mut report = Report::new();
    header(&mut report, "growth estimate", &[("spec", path, &digest)], seed);
    report.set("k", k);
    report.set("field", field);
    report.set("center", center);
    report.set_rat("error", &error);
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

pub fn growth_verify_bound(
    path: &Path,
    k: usize,
    field: CoeffField,
    divisors: Option<&str>,
    seed: u64,
) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let spec = parse_graph_product(&text)?;
    let target = match divisors {
        Some(list) => {
            let ds: Result<Vec<u64>> = list
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|e| anyhow!("{e}")))
                .collect();
            QuotientTarget { divisors: ds? }
        }
        None => QuotientTarget::full(&spec),
    };
    let r = verify_graph_product_bound(&spec, &target, k, field)?;
    let mut report = Report::new();
    header(&mut report, "growth verify-bound", &[("spec", path, &digest)], seed);
    report.set("k", k);
    report.set("field", field);
    report.set("degree", r.degree);
    report.set("betti", r.betti);
    report.set_rat("value", &r.value);
    report.set("center", r.center);
    report.set_rat("error", &r.error);
    if let Some(t) = r.top_dimension_pass {
        report.set("top_dimension_bound", t);
    }
    let pass = r.pass();
    Ok(CmdOutput {
        text: report.render(Some(pass)),
        pass,
    })
}

pub fn growth_bracket_cmd(
    path: &Path,
    max_degree: usize,
    k: usize,
    field: CoeffField,
    cover_file: Option<&Path>,
    seed: u64,
) -> Result<CmdOutput> {
    if max_degree > 6 {
        bail!("cover enumeration is documented for degree <= 6");
    }
    let (text, digest) = read_input(path)?;
    let complex = parse_complex(&text)?;
    let x = CellComplex::from_simplicial(&complex);
    let mut samples = Vec::new();
    for n in 1..=max_degree {
        for cover in enumerate_covers(&x, n)? {
            if !cover.is_transitive() {
                continue;
            }
            let built = build_cover(&x, &cover)?;
            let sample = normalized_betti(&x, &built, k, field)?;
            samples.push(FamilySample {
                id: format!("deg{n}"),
                degree: n as u64,
                value: sample.value,
            });
        }
    }
    // an explicit cover from a cover-spec file joins the family
    let mut cover_input = None;
    if let Some(cpath) = cover_file {
        let (ctext, cdigest) = read_input(cpath)?;
        let pi1 = homgrow_core::covers::pi1_presentation(&x)?;
        let cover = homgrow_core::io::parse_cover(&ctext, pi1.generators.len())?;
        let built = build_cover(&x, &cover)?;
        let sample = normalized_betti(&x, &built, k, field)?;
        samples.push(FamilySample {
            id: format!("file:{}", cpath.display()),
            degree: cover.degree as u64,
            value: sample.value,
        });
        cover_input = Some((cpath.to_path_buf(), cdigest));
    }
    let bracket = growth_bracket(&samples, &[], "connected covers")?;
    let mut report = Report::new();
    header(&mut report, "growth bracket", &[("complex", path, &digest)], seed);
    if let Some((p, dg)) = &cover_input {
        report.set("input_cover", p.display());
        report.set("sha256_cover", dg);
    }
    report.set("k", k);
    report.set("field", field);
    report.set("family", format!("connected covers of degree <= {max_degree}"));
    report.set("samples", samples.len());
    report.set_rat("observed_min", &bracket.observed_min);
    report.set_rat("observed_max", &bracket.observed_max);
    report.set_rat("inf_of_sup", &bracket.inf_of_sup);
    report.set_rat("sup_of_inf", &bracket.sup_of_inf);
    report.set("caveat", "sampled family, not the true limits");
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

pub fn growth_mv(
    path: &Path,
    k: usize,
    field: CoeffField,
    vertex: Option<&str>,
    seed: u64,
) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let spec = parse_graph_product(&text)?;
    let x = building_quotient(&spec, &QuotientTarget::full(&spec))?;
    let v = match vertex {
        Some(name) => x
            .cells(0)
            .iter()
            .position(|c| c.id.contains(name))
            .ok_or_else(|| anyhow!("no vertex cell matches `{name}`"))?,
        None => 0,
    };
    let dec = mv_decomposition(&x, x.star(v), x.complement_of_star(v))?;
    let covers = vec![("quotient".to_owned(), with_identity_base(&x))];
    let report_data = mv_inequality_check(&x, &dec, &covers, k, field, false)?;
    let mut report = Report::new();
    header(&mut report, "growth mv", &[("spec", path, &digest)], seed);
    report.set("k", k);
    report.set("field", field);
    report.set("star_vertex", &x.cells(0)[v].id);
    for check in &report_data.checks {
        report.set_rat(format!("{}_x", check.cover), &check.x_k);
        report.set_rat(format!("{}_a1", check.cover), &check.a1_k);
        report.set_rat(format!("{}_a2", check.cover), &check.a2_k);
        report.set_rat(format!("{}_b_k", check.cover), &check.b_k);
        report.set_rat(format!("{}_b_km1", check.cover), &check.b_km1);
        report.set(format!("{}_first", check.cover), check.first_ok);
        report.set(format!("{}_second", check.cover), check.second_ok);
    }
    let pass = report_data.pass();
    Ok(CmdOutput {
        text: report.render(Some(pass)),
        pass,
    })
}

/// Pieces file: `piece <id> <vertex> ...` (full subcomplex on those
/// vertices) and `acyclic <piece-id> ...` flags for nerve simplices.
pub fn growth_nerve(
    path: &Path,
    pieces_path: &Path,
    k: usize,
    field: CoeffField,
    seed: u64,
) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let (ptext, pdigest) = read_input(pieces_path)?;
    let complex = parse_complex(&text)?;
    let x = CellComplex::from_simplicial(&complex);
    let mut piece_ids = Vec::new();
    let mut pieces = Vec::new();
    let mut acyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
    for line in ptext.lines() {
        let toks: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match toks[0] {
            "piece" => {
                let id = toks.get(1).ok_or_else(|| anyhow!("piece needs an id"))?;
                let verts: Result<Vec<u32>> = toks[2..]
                    .iter()
                    .map(|n| complex.vertex_index(n).map_err(|e| anyhow!(e)))
                    .collect();
                let sub = complex.full_subcomplex(&verts?)?;
                // translate to a cell selection of x by cell ids
                let mut cells = vec![BTreeSet::new(); (x.dim() + 1) as usize];
                for d in 0..=(sub.dim().max(0) as usize) {
                    for spx in sub.simplices(d) {
                        let id: Vec<&str> =
                            spx.iter().map(|&v| sub.vertex_name(v)).collect();
                        let id = id.join(".");
                        if let Some(i) = x.cells(d).iter().position(|c| c.id == id) {
                            cells[d].insert(i);
                        }
                    }
                }
                piece_ids.push(id.to_string());
                pieces.push(homgrow_core::covers::SubComplex { cells });
            }
            "acyclic" => {
                let subset: Result<Vec<usize>> = toks[1..]
                    .iter()
                    .map(|id| {
                        piece_ids
                            .iter()
                            .position(|p| p == id)
                            .ok_or_else(|| anyhow!("unknown piece `{id}`"))
                    })
                    .collect();
                let mut subset = subset?;
                subset.sort_unstable();
                acyclic.insert(subset);
            }
            other => bail!("unknown directive `{other}` in pieces file"),
        }
    }
    let b = nerve_relative_betti(&x, &pieces, &acyclic, k, field)?;
    let mut report = Report::new();
    header(
        &mut report,
        "growth nerve",
        &[("complex", path, &digest), ("pieces", pieces_path, &pdigest)],
        seed,
    );
    report.set("k", k);
    report.set("field", field);
    report.set("pieces", pieces.len());
    report.set("betti_nerve_rel", b);
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

pub fn growth_torus(
    path: &Path,
    degrees: &str,
    k: usize,
    field: CoeffField,
    map: Option<&str>,
    seed: u64,
) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let complex = parse_complex(&text)?;
    let f = match map {
        None => SimplicialMap::identity(&complex),
        Some(spec) => {
            let mut images: Vec<u32> = (0..complex.vertex_count() as u32).collect();
            for pair in spec.split(',') {
                let (from, to) = pair
                    .split_once(':')
                    .ok_or_else(|| anyhow!("map entries look like a:b"))?;
                let from = complex.vertex_index(from.trim())?;
                let to = complex.vertex_index(to.trim())?;
                images[from as usize] = to;
            }
            SimplicialMap::new(&complex, images)?
        }
    };
    let ds: Result<Vec<usize>> = degrees
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| anyhow!("{e}")))
        .collect();
    let decay = mapping_torus_decay(&complex, &f, k, field, &ds?)?;
    let mut report = Report::new();
    header(&mut report, "growth torus", &[("complex", path, &digest)], seed);
    report.set("k", k);
    report.set("field", field);
    for (m, v) in &decay.values {
        report.set_rat(format!("value_m{m}"), v);
    }
    report.set("non_increasing", decay.non_increasing);
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

fn immersion_for(
    complex: &SimplicialComplex,
    coords: Option<&Path>,
    d: usize,
) -> Result<(homgrow_core::embedding::Immersion, Vec<(PathBuf, String)>)> {
    match coords {
        Some(p) => {
            let (text, digest) = read_input(p)?;
            let f = parse_immersion(complex, &text)?;
            Ok((f, vec![(p.to_path_buf(), digest)]))
        }
        None => Ok((moment_immersion(complex, d)?, Vec::new())),
    }
}

pub fn vankampen_obstruct(path: &Path, coords: Option<&Path>, seed: u64) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let complex = parse_complex(&text)?;
    if complex.dim() != 1 {
        bail!("the mod-2 obstruction is for graphs (dimension 1)");
    }
    let (f, extra) = immersion_for(&complex, coords, 1)?;
    let v = intersection_vector(&f)?;
    let ob = mod2_graph_obstruction(&v)?;
    let mut report = Report::new();
    header(&mut report, "vankampen obstruct", &[("complex", path, &digest)], seed);
    for (p, dg) in &extra {
        report.set("input_coords", p.display());
        report.set("sha256_coords", dg);
    }
    report.set("pairs", v.entries.len() / 2);
    let tops = complex.simplices(1);
    let name_of = |spx: &[u32]| -> String {
        spx.iter()
            .map(|&x| complex.vertex_name(x))
            .collect::<Vec<_>>()
            .join(".")
    };
    for (&(i, j), &value) in &v.entries {
        if i < j {
            report.set(format!("v[{}|{}]", name_of(&tops[i]), name_of(&tops[j])), value);
        }
    }
    report.set("obstruction", ob);
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

pub fn vankampen_solve_cmd(
    path: &Path,
    ring: &str,
    coords: Option<&Path>,
    seed: u64,
) -> Result<CmdOutput> {
    let (text, digest) = read_input(path)?;
    let complex = parse_complex(&text)?;
    let d = complex.dim();
    if d < 1 {
        bail!("complex has no top simplices");
    }
    let d = d as usize;
    let ring = match ring {
        "z" | "Z" => SolveRing::Z,
        "f2" | "F2" => SolveRing::F2,
        other => bail!("ring must be `z` or `f2`, got `{other}`"),
    };
    let (f, extra) = immersion_for(&complex, coords, d)?;
    let v = intersection_vector(&f)?;
    let r = vankampen_solve(&complex, &v, ring)?;
    let mut report = Report::new();
    header(&mut report, "vankampen solve", &[("complex", path, &digest)], seed);
    for (p, dg) in &extra {
        report.set("input_coords", p.display());
        report.set("sha256_coords", dg);
    }
    report.set("ring", format!("{:?}", r.ring));
    if r.d2_caveat {
        report.set("caveat", "d = 2: finger-move completeness not guaranteed");
    }
    match &r.outcome {
        SolveOutcome::Solved(_) => {
            report.set("solvable", true);
        }
        SolveOutcome::Unsolvable { certificate } => {
            report.set("solvable", false);
            report.set("certificate", certificate);
        }
    }
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

pub fn vankampen_octa_reduce(path: &Path, seed: u64) -> Result<CmdOutput> {
    use rand::{Rng, SeedableRng};
    let (text, digest) = read_input(path)?;
    let complex = parse_complex(&text)?;
    let d = complex.dim();
    if d < 1 {
        bail!("complex has no top simplices");
    }
    let d = d as usize;
    let f = moment_immersion(&complex, d)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = None;
    let mut chosen_eps = None;
    for _ in 0..5 {
        let x: Vec<Vec<Rat>> = (0..complex.vertex_count())
            .map(|_| {
                (0..2 * d)
                    .map(|_| rat(rng.gen_range(-9i64..=9) * 2 + 1, 1))
                    .collect()
            })
            .collect();
        match perturbed_octahedral_immersion(&complex, &f, &x, &rat(1, 1)) {
            Ok(p) => {
                chosen_eps = Some(p.epsilon.clone());
                outcome = Some(octahedral_obstruction_reduce(
                    &complex,
                    &p.octahedralization,
                    &p.projection,
                    &p.vector,
                )?);
                break;
            }
            Err(homgrow_core::embedding::EmbedError::PerturbationDegenerate(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let outcome = outcome.ok_or_else(|| anyhow!("no generic perturbation found; change seed"))?;
    let mut report = Report::new();
    header(&mut report, "vankampen octa-reduce", &[("complex", path, &digest)], seed);
    if let Some(eps) = chosen_eps {
        report.set_rat("epsilon", &eps);
    }
    match outcome {
        OctaOutcome::Reduced {
            scaled_by,
            d2_caveat,
            ..
        } => {
            report.set("reduced", true);
            report.set("scaled_by", scaled_by);
            if d2_caveat {
                report.set("caveat", "d = 2: completeness not guaranteed");
            }
        }
        OctaOutcome::Obstructed { certificate } => {
            report.set("reduced", false);
            report.set("certificate", certificate);
        }
    }
    Ok(CmdOutput {
        text: report.render(Some(true)),
        pass: true,
    })
}

/// `verify <suite>`: replay acceptance criteria; nonzero exit on failure.
pub fn verify(suite: &str, seed: u64, trials: Option<usize>) -> Result<CmdOutput> {
    let ids: Vec<usize> = match suite {
        "all" => (1..=11).collect(),
        "smalleigs" => vec![5],
        "pinch" => vec![6],
        "modpl2" => vec![1, 2],
        "mv" => vec![11],
        "appendixC" | "appendixc" => vec![3, 4, 10],
        other => bail!("unknown suite `{other}`"),
    };
    let results = suites::run_criteria(&ids, seed, trials);
    let mut report = Report::new();
    report.set("tool", format!("homgrow {VERSION}"));
    report.set("command", format!("verify {suite}"));
    report.set("seed", seed);
    if let Some(t) = trials {
        report.set("trials", t);
    }
    let mut pass = true;
    let mut body = report.render(None);
    for r in &results {
        let _ = writeln!(body, "{}", r.line());
        pass &= r.pass;
    }
    let passed = results.iter().filter(|r| r.pass).count();
    let _ = writeln!(body, "passed = {}/{}", passed, results.len());
    let _ = writeln!(body, "verdict = {}", if pass { "pass" } else { "fail" });
    Ok(CmdOutput { text: body, pass })
}
