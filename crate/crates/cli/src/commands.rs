use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

use pt_horizon::identities::{run_all_seeded, IdentityReport};
use pt_horizon::model::{boundary_tolerance, build_circular, energies, eval_discriminants};
use pt_horizon::oracle::eigenvalues;
use pt_horizon::topology::{
    components2d, components3d, membership, sample_slice, trace_boundary, Axis, BoxSpec, ComponentReport, Mode,
    SliceGrid, SliceSpec,
};
use pt_horizon::{CouplingPoint, Factor, SpectrumClass};

use crate::args::{
    ClassifyArgs, Command, ComponentsArgs, GridArgs, PointArgs, SliceArgs, SpectrumArgs, SweepArgs,
    VerifyArgs,
};
use crate::render::{render_svg, write_csv};

/// Exit status of a successful run: 0 or 1 per the subcommand's contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Negative,
}

pub fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Classify(args) => classify(&args),
        Command::Slice(args) => slice(&args),
        Command::Components(args) => components(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Verify(args) => verify(&args),
        Command::Spectrum(args) => spectrum(&args),
    }
}

fn point(p: &PointArgs) -> anyhow::Result<CouplingPoint> {
    Ok(CouplingPoint::new(p.a, p.b, p.c)?)
}

fn pairs(values: &[Complex<f64>]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn to_json(value: &impl Serialize) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `inside`, `outside(...)` or `boundary(...)`. Factors within the boundary
/// tolerance are listed as boundaries; in an `outside` verdict they carry a
/// `-boundary` suffix.
pub fn verdict(p: &CouplingPoint, eta: f64, mode: Mode) -> anyhow::Result<(String, Vec<Factor>, Vec<Factor>)> {
    if membership(p, eta, mode)? {
        return Ok(("inside".into(), Vec::new(), Vec::new()));
    }
    let d = eval_discriminants(p);
    let tol = boundary_tolerance(p);
    let boundary: Vec<Factor> = Factor::ALL.into_iter().filter(|f| d.get(*f).abs() <= tol).collect();
    let outside: Vec<Factor> = Factor::ALL
        .into_iter()
        .filter(|f| d.get(*f) <= eta && !boundary.contains(f))
        .collect();
    let text = if outside.is_empty() && !boundary.is_empty() {
        let names: Vec<&str> = boundary.iter().map(|f| f.name()).collect();
        format!("boundary({})", names.join(","))
    } else {
        let names: Vec<String> = outside
            .iter()
            .map(|f| f.name().to_string())
            .chain(boundary.iter().map(|f| format!("{f}-boundary")))
            .collect();
        format!("outside({})", names.join(","))
    };
    Ok((text, outside, boundary))
}

fn classify(args: &ClassifyArgs) -> anyhow::Result<Outcome> {
    let p = point(&args.point)?;
    let d = eval_discriminants(&p);
    let closed = energies(&p);
    let oracle = eigenvalues(&build_circular(&p)?)?;
    let (text, outside, boundary) = verdict(&p, args.eta, args.mode.into())?;
    if args.json {
        let value = json!({
            "point": p,
            "W": d.w,
            "Q": d.q,
            "P": d.p,
            "closed_form": pairs(&closed.values),
            "oracle": pairs(&oracle.sorted_by_modulus()),
            "oracle_class": oracle.classification,
            "verdict": text,
            "outside": outside,
            "boundary": boundary,
        });
        emit(None, &to_json(&value)?)?;
    } else {
        let fmt = |v: &[Complex<f64>]| -> String {
            v.iter()
                .map(|z| if z.im == 0.0 { format!("{:.10}", z.re) } else { format!("{:.10}{:+.10}i", z.re, z.im) })
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!("point: a={} b={} c={}", p.a, p.b, p.c);
        println!("W={} Q={} P={}", d.w, d.q, d.p);
        println!("closed-form energies: {}", fmt(&closed.values));
        println!("oracle energies: {} ({:?})", fmt(&oracle.sorted_by_modulus()), oracle.classification);
        println!("verdict: {text}");
    }
    Ok(if text == "inside" { Outcome::Success } else { Outcome::Negative })
}

fn slice_spec(grid: &GridArgs, default_res: usize) -> anyhow::Result<SliceSpec> {
    let Some(fix) = grid.fix else {
        bail!("a slice needs --fix axis=value");
    };
    let mut spec = SliceSpec::new(fix.axis, fix.value, grid.res.unwrap_or(default_res))
        .with_eta(grid.domain.eta)
        .with_mode(grid.domain.mode.into())
        .with_factors(grid.domain.factor_set());
    let (u_axis, v_axis) = fix.axis.free_axes();
    let (mut u_range, mut v_range) = (spec.u_range, spec.v_range);
    for r in &grid.ranges {
        if r.axis == u_axis {
            u_range = (r.min, r.max);
        } else if r.axis == v_axis {
            v_range = (r.min, r.max);
        } else {
            bail!("--range {} conflicts with --fix {}", r.axis.name(), fix.axis.name());
        }
    }
    spec = spec.with_ranges(u_range, v_range);
    spec.validate()?;
    Ok(spec)
}

fn box_spec(grid: &GridArgs) -> anyhow::Result<BoxSpec> {
    let domain = &grid.domain;
    if grid.fix.is_some() {
        bail!("--box and --fix are exclusive");
    }
    let mut spec = BoxSpec::new(grid.res.unwrap_or(160))
        .with_eta(domain.eta)
        .with_mode(domain.mode.into())
        .with_factors(domain.factor_set());
    for r in &grid.ranges {
        let range = (r.min, r.max);
        match r.axis {
            Axis::A => spec.a_range = range,
            Axis::B => spec.b_range = range,
            Axis::C => spec.c_range = range,
        }
    }
    spec.validate()?;
    Ok(spec)
}

fn write_slice(grid: &SliceGrid, report: &ComponentReport, csv: Option<&Path>, svg: Option<&Path>) -> anyhow::Result<()> {
    match csv {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            write_csv(BufWriter::new(file), grid, report)?;
        }
        None => write_csv(io::stdout().lock(), grid, report)?,
    }
    if let Some(path) = svg {
        let mut curves = Vec::new();
        for f in Factor::ALL {
            curves.extend(trace_boundary(&grid.spec, f, None)?);
        }
        emit(Some(path), &render_svg(grid, report, &curves))?;
    }
    Ok(())
}

fn slice(args: &SliceArgs) -> anyhow::Result<Outcome> {
    let spec = slice_spec(&args.grid, 800)?;
    let grid = sample_slice(&spec)?;
    let report = components2d(&grid);
    write_slice(&grid, &report, args.out.as_deref(), args.svg.as_deref())?;
    Ok(Outcome::Success)
}

fn components(args: &ComponentsArgs) -> anyhow::Result<Outcome> {
    let report = if args.boxed {
        components3d(&box_spec(&args.grid)?)?
    } else {
        components2d(&sample_slice(&slice_spec(&args.grid, 800)?)?)
    };
    emit(args.out.as_deref(), &to_json(&report)?)?;
    Ok(Outcome::Success)
}

/// Ten b values running from just under the top of the domain down to 0.1.
pub fn default_b_list() -> Vec<f64> {
    let r5 = 5f64.sqrt();
    vec![r5 - 0.01, r5 - 0.5, r5 - 1.0, 1.01, 1.0, 0.999, 0.6, 0.4, 0.2, 0.1]
}

#[derive(Serialize)]
struct SweepEntry {
    b: f64,
    count: usize,
    csv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg: Option<String>,
}

#[derive(Serialize)]
struct SweepSummary {
    resolution: usize,
    eta: f64,
    mode: Mode,
    slices: Vec<SweepEntry>,
}

fn sweep(args: &SweepArgs) -> anyhow::Result<Outcome> {
    let bs = if args.b.is_empty() { default_b_list() } else { args.b.clone() };
    if let Some(b) = bs.iter().find(|b| !b.is_finite()) {
        bail!("b value {b} is not finite");
    }
    fs::create_dir_all(&args.out_dir).with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let mut slices = Vec::with_capacity(bs.len());
    for (k, &b) in bs.iter().enumerate() {
        let spec = SliceSpec::new(Axis::B, b, args.res)
            .with_eta(args.domain.eta)
            .with_mode(args.domain.mode.into())
            .with_factors(args.domain.factor_set());
        let grid = sample_slice(&spec)?;
        let report = components2d(&grid);
        let csv = format!("slice_{k:02}.csv");
        let svg = (!args.no_svg).then(|| format!("slice_{k:02}.svg"));
        let svg_path = svg.as_ref().map(|s| args.out_dir.join(s));
        write_slice(&grid, &report, Some(&args.out_dir.join(&csv)), svg_path.as_deref())?;
        eprintln!("b = {b}: {} component(s)", report.count);
        slices.push(SweepEntry {
            b,
            count: report.count,
            csv,
            svg,
        });
    }
    let summary = SweepSummary {
        resolution: args.res,
        eta: args.domain.eta,
        mode: args.domain.mode.into(),
        slices,
    };
    emit(Some(&args.out_dir.join("summary.json")), &to_json(&summary)?)?;
    Ok(Outcome::Success)
}

/// 0 iff no check fails.
pub fn verify_outcome(report: &IdentityReport) -> Outcome {
    if report.all_passed() {
        Outcome::Success
    } else {
        Outcome::Negative
    }
}

fn verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let report = run_all_seeded(args.seed);
    emit(args.out.as_deref(), &to_json(&report)?)?;
    for failed in report.checks.iter().filter(|c| c.status == pt_horizon::identities::Status::Fails) {
        eprintln!("{} failed; witness {:?}", failed.name, failed.witness);
    }
    Ok(verify_outcome(&report))
}

/// Largest pairwise distance under the best matching of two 4-element sets.
pub fn matched_deviation(x: &[Complex<f64>; 4], y: &[Complex<f64>; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for perm in (0..256usize).map(|k| [k & 3, (k >> 2) & 3, (k >> 4) & 3, (k >> 6) & 3]) {
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| perm[i] != perm[j]));
        if distinct {
            let worst = (0..4).map(|i| (x[i] - y[perm[i]]).norm()).fold(0.0, f64::max);
            best = best.min(worst);
        }
    }
    best
}

fn spectrum(args: &SpectrumArgs) -> anyhow::Result<Outcome> {
    let p = point(&args.point)?;
    let closed = energies(&p);
    let oracle = eigenvalues(&build_circular(&p)?)?;
    let value = json!({
        "point": p,
        "closed_form": pairs(&closed.sorted_by_modulus()),
        "oracle": pairs(&oracle.sorted_by_modulus()),
        "closed_form_class": closed.classification,
        "oracle_class": oracle.classification,
        "real_degenerate": oracle.classification == SpectrumClass::RealDegenerate,
        "max_deviation": matched_deviation(&closed.values, &oracle.values),
    });
    emit(args.out.as_deref(), &to_json(&value)?)?;
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pt_horizon::identities::{prove_on_integer_grid, run_all};
    use pt_horizon::model::eval_w;

    fn pt(a: f64, b: f64, c: f64) -> CouplingPoint {
        CouplingPoint { a, b, c }
    }

    #[test]
    fn verdicts() {
        assert_eq!(verdict(&pt(0.0, 0.0, 0.0), 0.0, Mode::StrictSimple).unwrap().0, "inside");
        assert_eq!(verdict(&pt(2.9, 0.0, 0.0), 0.0, Mode::StrictSimple).unwrap().0, "inside");
        let (text, outside, boundary) = verdict(&pt(0.0, 5f64.sqrt(), 0.0), 0.0, Mode::StrictSimple).unwrap();
        assert_eq!(text, "outside(W,P-boundary)");
        assert_eq!((outside, boundary), (vec![Factor::W], vec![Factor::P]));
        let pinch = pt(8f64.sqrt(), 0.0, 0.0);
        assert_eq!(verdict(&pinch, 0.0, Mode::StrictSimple).unwrap().0, "boundary(W)");
        assert_eq!(verdict(&pinch, 0.0, Mode::RealOnly).unwrap().0, "inside");
    }

    #[test]
    fn matching_ignores_order() {
        let x = [Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0), Complex::new(3.0, 0.0), Complex::new(-3.0, 0.0)];
        let y = [x[3], x[1], x[0], x[2]];
        assert_eq!(matched_deviation(&x, &y), 0.0);
        let z = [x[0], x[1], x[2], Complex::new(-3.0, 1e-3)];
        assert!((matched_deviation(&x, &z) - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn verify_exit_contract() {
        let mut report = run_all();
        assert_eq!(verify_outcome(&report), Outcome::Success);
        // Negative control: a W with its mixed term's sign flipped.
        let tampered = prove_on_integer_grid(
            "w_forms",
            "tampered",
            3,
            |v| eval_w(&pt_horizon::ExactPoint { a: v[0], b: v[1], c: v[2] }),
            |v| {
                let (a, b, c) = (v[0], v[1], v[2]);
                (8 + c * c - a * a).pow(2) - 4 * (16 - (a - c).pow(2)) * b * b
            },
        );
        assert!(tampered.witness.is_some());
        let slot = report.checks.iter().position(|c| c.name == "w_forms").unwrap();
        report.checks[slot] = tampered;
        assert_eq!(verify_outcome(&report), Outcome::Negative);
        let text = to_json(&report).unwrap();
        assert!(text.contains("\"witness\": ["));
    }

    #[test]
    fn spectrum_deviation_small() {
        for p in [pt(0.0, 0.0, 0.0), pt(1.0, 1.0, 1.0), pt(0.4, -1.3, 0.2)] {
            let closed = energies(&p);
            let oracle = eigenvalues(&build_circular(&p).unwrap()).unwrap();
            assert!(matched_deviation(&closed.values, &oracle.values) < 1e-12, "{p:?}");
        }
    }
}
