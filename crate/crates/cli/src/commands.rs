use std::path::Path;

use serde_json::{json, Value};
use spectral_twins::graph::{polynomial_apply, seven_one_transplantation, PolynomialImage, Variant};
use spectral_twins::io::{parse_real_list, GraphFile};
use spectral_twins::nodal::{
    isonodal as compare_nodal, nodal_sequence, predicted_total_7_1, Convention, NodalReport, SignPattern,
};
use spectral_twins::quantum::{find_roots, MetricGraph, ReducedSevenOne, ScanConfig, SecularFunction, SecularScan};
use spectral_twins::spectra::{char_poly, eig_sym, isospectral as compare_spectra, verify_transplantation};
use spectral_twins::{GeneralizedLaplacian, Matrix, WeightedGraph};

use crate::input::{load_builtin, BuiltinArgs, LaplacianKind, Loaded, PairSource, Source};
use crate::report::{round_significant, RunReport};
use crate::{CliError, Outcome};

/// Eigenvalues this close to zero make the `7_1` rule undefined.
const RULE_ZERO: f64 = 1e-10;

fn kind_name(kind: LaplacianKind) -> &'static str {
    match kind {
        LaplacianKind::Generalized => "generalized",
        LaplacianKind::Combinatorial => "combinatorial",
    }
}

fn with(mut echo: Value, extra: Value) -> Value {
    if let (Value::Object(base), Value::Object(more)) = (&mut echo, extra) {
        base.extend(more);
    }
    echo
}

fn finish(report: RunReport, verdict: Option<bool>) -> Result<Outcome, CliError> {
    Ok(Outcome {
        stdout: report.render(),
        verdict,
    })
}

fn one_based(indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    indices.into_iter().map(|i| i + 1).collect()
}

fn warn_degenerate(report: &mut RunReport, indices: &[usize], label: &str) {
    for n in indices {
        report.warn(format!(
            "{label}eigenvalue {n} is degenerate; its eigenvector and nodal count depend on the basis"
        ));
    }
}

pub fn spectrum(source: &Source) -> Result<Outcome, CliError> {
    let loaded = source.load()?;
    let l = loaded.laplacian(source.laplacian);
    let s = eig_sym(l.matrix())?;
    let poly = char_poly(l.matrix())?;
    let mut report = RunReport::new(
        "spectrum",
        with(loaded.echo.clone(), json!({"laplacian": kind_name(source.laplacian)})),
    );
    let degenerate = one_based(s.degenerate_indices());
    warn_degenerate(&mut report, &degenerate, "");
    report.results = json!({
        "eigenvalues": s.eigenvalues,
        "eigenvectors": s.eigenvectors,
        "char_poly": poly,
        "trace": l.matrix().trace(),
        "eigenvalue_sum": s.eigenvalues.iter().sum::<f64>(),
        "degenerate_indices": degenerate,
        "sweeps": s.sweeps,
    });
    finish(report, None)
}

fn zero_entry_warnings(report: &mut RunReport, l: &GeneralizedLaplacian, zero_tol: f64) -> Result<(), CliError> {
    let s = eig_sym(l.matrix())?;
    for (i, phi) in s.eigenvectors.iter().enumerate() {
        let pattern = SignPattern::classify(phi, zero_tol);
        for (v, &sign) in pattern.signs.iter().enumerate() {
            if sign == 0 {
                report.warn(format!("eigenvector {} vanishes at vertex {}", i + 1, v + 1));
            }
        }
    }
    Ok(())
}

fn nodal_json(r: &NodalReport) -> Value {
    json!({
        "eigenvalues": r.eigenvalues,
        "counts": r.counts,
        "degenerate_indices": one_based(r.degenerate_indices.iter().copied()),
        "bound_violations": r.bound_violations,
    })
}

pub fn nodal(source: &Source, convention: Convention, zero_tol: f64) -> Result<Outcome, CliError> {
    let loaded = source.load()?;
    let l = loaded.laplacian(source.laplacian);
    let mut report = RunReport::new(
        "nodal",
        with(
            loaded.echo.clone(),
            json!({"laplacian": kind_name(source.laplacian), "convention": convention, "zero_tol": zero_tol}),
        ),
    );
    if convention == Convention::Weak {
        zero_entry_warnings(&mut report, &l, zero_tol)?;
    }
    let r = nodal_sequence(&loaded.graph, &l, convention, zero_tol)?;
    let degenerate = one_based(r.degenerate_indices.iter().copied());
    warn_degenerate(&mut report, &degenerate, "");
    let mut results = nodal_json(&r);
    results["cycle_rank"] = json!(loaded.graph.cycle_rank());
    results["bounds_hold"] = json!(r.bound_violations.is_empty());
    if let (Some((a, b, c, _)), LaplacianKind::Generalized) = (loaded.seven_one, source.laplacian) {
        let predicted: Vec<Option<usize>> = r
            .eigenvalues
            .iter()
            .map(|&lambda| {
                if lambda.abs() < RULE_ZERO {
                    None
                } else {
                    predicted_total_7_1(lambda, a, b, c).ok()
                }
            })
            .collect();
        let mismatches: Vec<usize> = predicted
            .iter()
            .zip(&r.counts)
            .enumerate()
            .filter(|(_, (p, &nu))| p.is_some_and(|p| p != nu))
            .map(|(i, _)| i + 1)
            .collect();
        if predicted.iter().any(Option::is_none) {
            report.warn("an eigenvalue is zero; the eigenvalue rule does not apply there");
        }
        results["predicted"] = json!(predicted);
        results["rule_mismatches"] = json!(mismatches);
    }
    for v in &r.bound_violations {
        report.warn(format!(
            "nodal count {} at index {} is outside [{}, {}]",
            v.count, v.n, v.lower, v.upper
        ));
    }
    report.results = results;
    finish(report, None)
}

fn pair_echo(first: &Loaded, second: &Loaded, extra: Value) -> Value {
    with(json!({"first": first.echo, "second": second.echo}), extra)
}

/// Transplantation residual when both graphs are the built-in pair with the
/// same weights.
fn builtin_residual(first: &Loaded, second: &Loaded, l1: &Matrix, l2: &Matrix) -> Result<Option<f64>, CliError> {
    match (first.seven_one, second.seven_one) {
        (Some((a, b, c, Variant::First)), Some((a2, b2, c2, Variant::Second))) if (a, b, c) == (a2, b2, c2) => {
            Ok(Some(verify_transplantation(l1, l2, &seven_one_transplantation())?))
        }
        _ => Ok(None),
    }
}

pub fn isospectral(source: &PairSource, tol: f64) -> Result<Outcome, CliError> {
    let (first, second) = source.load()?;
    let (l1, l2) = (first.laplacian(source.laplacian), second.laplacian(source.laplacian));
    let r = compare_spectra(l1.matrix(), l2.matrix(), tol)?;
    let (s1, s2) = (eig_sym(l1.matrix())?, eig_sym(l2.matrix())?);
    let mut report = RunReport::new(
        "isospectral",
        pair_echo(
            &first,
            &second,
            json!({"laplacian": kind_name(source.laplacian), "tol": tol}),
        ),
    );
    report.results = json!({
        "verdict": r.verdict,
        "max_eigenvalue_gap": r.max_eigenvalue_gap,
        "charpoly_coeff_gap": r.charpoly_coeff_gap,
        "tolerance_used": r.tolerance_used,
        "eigenvalues": [s1.eigenvalues, s2.eigenvalues],
    });
    if let Some(res) = builtin_residual(&first, &second, l1.matrix(), l2.matrix())? {
        report.results["transplantation_residual"] = json!(res);
    }
    finish(report, Some(r.verdict))
}

pub fn isonodal(source: &PairSource, convention: Convention, zero_tol: f64) -> Result<Outcome, CliError> {
    let (first, second) = source.load()?;
    let (l1, l2) = (first.laplacian(source.laplacian), second.laplacian(source.laplacian));
    let mut report = RunReport::new(
        "isonodal",
        pair_echo(
            &first,
            &second,
            json!({"laplacian": kind_name(source.laplacian), "convention": convention, "zero_tol": zero_tol}),
        ),
    );
    if convention == Convention::Weak {
        zero_entry_warnings(&mut report, &l1, zero_tol)?;
        zero_entry_warnings(&mut report, &l2, zero_tol)?;
    }
    let r = compare_nodal(&first.graph, &l1, &second.graph, &l2, convention, zero_tol)?;
    warn_degenerate(&mut report, &r.degenerate, "");
    report.results = json!({
        "verdict": r.verdict,
        "first": nodal_json(&r.first),
        "second": nodal_json(&r.second),
        "mismatches": r.mismatches,
        "degenerate_indices": r.degenerate,
    });
    finish(report, Some(r.verdict))
}

fn image_json(img: &PolynomialImage) -> Value {
    let graph = img.graph.as_ref().map(|g| {
        json!({
            "file": serde_json::to_value(GraphFile::from_graph(g, None)).expect("graph file serializes"),
            "edge_count": g.edge_count(),
            "complete": g.edge_count() == g.vertex_count() * (g.vertex_count() - 1) / 2,
        })
    });
    json!({
        "matrix": img.matrix.to_rows(),
        "valid": img.valid,
        "graph": graph,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn polymap(source: &Source, coeffs: &str, out: Option<&Path>, tol: f64) -> Result<Outcome, CliError> {
    let coeffs = parse_real_list(coeffs).map_err(|e| CliError::Input(format!("--coeffs: {e}")))?;
    let loaded = source.load()?;
    let l = loaded.laplacian(source.laplacian);
    let img = polynomial_apply(&l, &coeffs);
    let mut inputs = with(
        loaded.echo.clone(),
        json!({"laplacian": kind_name(source.laplacian), "coeffs": coeffs, "tol": tol}),
    );
    if let Some(path) = out {
        inputs["out"] = json!(path.display().to_string());
    }
    let mut report = RunReport::new("polymap", inputs);
    report.results = json!({ "image": image_json(&img) });
    if !img.valid {
        report.warn("P(L) has a positive or non-finite off-diagonal entry; it is not a generalized Laplacian");
    }
    if let Some(path) = out {
        match &img.graph {
            Some(g) => write_file(path, &(GraphFile::from_graph(g, None).to_json() + "\n"))?,
            None => report.warn(format!(
                "{} not written: P(L) is not a generalized Laplacian",
                path.display()
            )),
        }
    }

    let mut verdict = None;
    if let (Some((_, _, _, variant)), LaplacianKind::Generalized) = (loaded.seven_one, source.laplacian) {
        let other = match variant {
            Variant::First => Variant::Second,
            Variant::Second => Variant::First,
        };
        let partner = load_builtin(&source.builtin, other)?;
        let partner_img = polynomial_apply(&partner.laplacian(LaplacianKind::Generalized), &coeffs);
        let (first, second) = match variant {
            Variant::First => (&img, &partner_img),
            Variant::Second => (&partner_img, &img),
        };
        let scaled = tol * first.matrix.max_abs().max(1.0);
        let spectra = compare_spectra(&first.matrix, &second.matrix, scaled)?;
        let residual = verify_transplantation(&first.matrix, &second.matrix, &seven_one_transplantation())?;
        let mut pair = json!({
            "partner_image": image_json(&partner_img),
            "isospectral": spectra,
            "transplantation_residual": residual,
        });
        let mut ok = spectra.verdict;
        match (&first.graph, &second.graph) {
            (Some(g1), Some(g2)) => {
                let l1 = GeneralizedLaplacian::from_matrix(first.matrix.clone())
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                let l2 = GeneralizedLaplacian::from_matrix(second.matrix.clone())
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                let r = compare_nodal(
                    g1,
                    &l1,
                    g2,
                    &l2,
                    Convention::Strong,
                    spectral_twins::nodal::DEFAULT_ZERO_TOL,
                )?;
                warn_degenerate(&mut report, &r.degenerate, "image ");
                ok &= r.verdict;
                pair["isonodal"] = json!({
                    "verdict": r.verdict,
                    "first": r.first.counts,
                    "second": r.second.counts,
                    "mismatches": r.mismatches,
                    "degenerate_indices": r.degenerate,
                });
            }
            _ => report.warn("nodal counts skipped: the images are not generalized Laplacians"),
        }
        pair["verdict"] = json!(ok);
        report.results["pair"] = pair;
        verdict = Some(ok);
    }
    finish(report, verdict)
}

fn scan_grid(cfg: &ScanConfig) -> Vec<f64> {
    let n = ((cfg.k_max - cfg.k_min) / cfg.grid_step).ceil() as usize;
    (0..=n)
        .map(|i| (cfg.k_min + i as f64 * cfg.grid_step).min(cfg.k_max))
        .collect()
}

fn scan_json(scan: &SecularScan, residuals: &[Option<f64>]) -> Value {
    let worst = residuals.iter().flatten().fold(0.0_f64, |m, &r| m.max(r));
    json!({
        "roots": scan.roots,
        "flagged": scan.flagged,
        "dips": scan.dips,
        "residuals": residuals,
        "max_residual": worst,
    })
}

fn scan_warnings(report: &mut RunReport, scan: &SecularScan, label: &str) {
    if !scan.flagged.is_empty() {
        report.warn(format!(
            "{label}{} flagged points where some sin(k L) vanishes; eigenfunctions vanishing on every vertex may sit there",
            scan.flagged.len()
        ));
    }
    for d in &scan.dips {
        report.warn(format!(
            "{label}|h| dips to zero without a sign change near k = {}; possible double root",
            round_significant(*d)
        ));
    }
}

fn csv_line(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&x| round_significant(x).to_string()).collect();
    cells.join(",") + "\n"
}

pub fn quantum(
    source: &Source,
    kmin: f64,
    kmax: f64,
    grid: f64,
    emit: Option<&Path>,
    tol: f64,
) -> Result<Outcome, CliError> {
    let loaded = source.load()?;
    let cfg = ScanConfig::range(kmin, kmax, grid);
    let mut inputs = with(
        loaded.echo.clone(),
        json!({"kmin": kmin, "kmax": kmax, "grid": grid, "tol": tol}),
    );
    if let Some(path) = emit {
        inputs["emit_secular"] = json!(path.display().to_string());
    }
    let mut report = RunReport::new("quantum", inputs);

    if let Some((a, b, c, _)) = loaded.seven_one {
        let r1 = ReducedSevenOne::new(a, b, c, Variant::First)?;
        let r2 = ReducedSevenOne::new(a, b, c, Variant::Second)?;
        let (s1, s2) = (find_roots(&r1, &cfg)?, find_roots(&r2, &cfg)?);
        let residuals = |r: &ReducedSevenOne, s: &SecularScan| -> Vec<Option<f64>> {
            s.roots.iter().map(|&k| r.vertex_residual(k).ok()).collect()
        };
        let (res1, res2) = (residuals(&r1, &s1), residuals(&r2, &s2));
        for (label, res, s) in [("variant 1: ", &res1, &s1), ("variant 2: ", &res2, &s2)] {
            for (k, r) in s.roots.iter().zip(res.iter()) {
                if r.is_none() {
                    report.warn(format!(
                        "{label}no boundary reconstruction at k = {}; cos(k L) vanishes",
                        round_significant(*k)
                    ));
                }
            }
        }
        scan_warnings(&mut report, &s1, "variant 1: ");
        scan_warnings(&mut report, &s2, "variant 2: ");

        let ks = scan_grid(&cfg);
        let mut csv = String::from("k,h1,h2\n");
        let mut secular_gap = 0.0_f64;
        for &k in &ks {
            let (h1, h2) = (r1.value(k), r2.value(k));
            secular_gap = secular_gap.max((h1 - h2).abs());
            if emit.is_some() {
                csv.push_str(&csv_line(&[k, h1, h2]));
            }
        }
        let same_count = s1.roots.len() == s2.roots.len();
        let root_gap = if same_count {
            Some(
                s1.roots
                    .iter()
                    .zip(&s2.roots)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
            )
        } else {
            report.warn(format!(
                "variant 1 has {} roots, variant 2 has {}",
                s1.roots.len(),
                s2.roots.len()
            ));
            None
        };
        let verdict = root_gap.is_some_and(|g| g <= tol);
        report.results = json!({
            "first": scan_json(&s1, &res1),
            "second": scan_json(&s2, &res2),
            "max_root_gap": root_gap,
            "max_secular_gap": secular_gap,
            "grid_points": ks.len(),
            "total_length": r1.metric_graph().total_length(),
            "verdict": verdict,
        });
        if let Some(path) = emit {
            write_file(path, &csv)?;
        }
        return finish(report, Some(verdict));
    }

    let mg = match &loaded.lengths {
        Some(lengths) => MetricGraph::with_lengths(&loaded.graph, lengths.clone())?,
        None => MetricGraph::from_weighted(&loaded.graph),
    };
    let scan = find_roots(&mg, &cfg)?;
    let residuals: Vec<Option<f64>> = scan
        .roots
        .iter()
        .map(|&k| mg.null_vector(k).and_then(|phi| mg.vertex_residual(k, &phi)).ok())
        .collect();
    scan_warnings(&mut report, &scan, "");
    if let Some(path) = emit {
        let mut csv = String::from("k,h\n");
        for k in scan_grid(&cfg) {
            csv.push_str(&csv_line(&[k, mg.value(k)]));
        }
        write_file(path, &csv)?;
    }
    let mut results = scan_json(&scan, &residuals);
    results["total_length"] = json!(mg.total_length());
    results["lengths"] = json!(mg.lengths());
    report.results = results;
    finish(report, None)
}

pub fn export(builtin: &BuiltinArgs, variant: u8, with_lengths: bool) -> Result<Outcome, CliError> {
    if builtin.builtin.is_none() {
        return Err(CliError::Input("export needs --builtin".into()));
    }
    let variant = Variant::from_number(variant).expect("clap checks the range");
    let loaded = load_builtin(builtin, variant)?;
    let g: &WeightedGraph = &loaded.graph;
    let lengths = with_lengths.then(|| g.edges().iter().map(|e| e.weight).collect());
    Ok(Outcome {
        stdout: GraphFile::from_graph(g, lengths).to_json() + "\n",
        verdict: None,
    })
}
