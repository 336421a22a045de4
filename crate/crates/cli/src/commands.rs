use std::path::{Path, PathBuf};

use gqt_core::dhsp::{self, DhspInstance, SampleStrategy};
use gqt_core::qstate::{apply_circuit, circuit_to_dense, measure_all};
use gqt_core::rotft::{self, Variant};
use gqt_core::{gqft, haar, phasemat, rng, Circuit, DenseUnitary, Error, Limits, QState, Regime};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::formats::*;
use crate::output::{num, Report, Table};

pub struct Ctx {
    pub limits: Limits,
    pub tol: f64,
    pub seed: u64,
    pub config: Value,
}

impl Ctx {
    pub fn new(cli: &Cli) -> Self {
        Self {
            limits: Limits {
                dense_cap: cli.dense_cap,
                state_cap: cli.state_cap,
                general_check_cap: cli.general_cap,
                ..Limits::default()
            },
            tol: cli.tol,
            seed: cli.seed,
            config: serde_json::to_value(cli).expect("serializable"),
        }
    }

    fn report(&self, fields: Value) -> Report {
        let mut body = Map::new();
        body.insert("config".into(), self.config.clone());
        if let Value::Object(m) = fields {
            body.extend(m);
        }
        Report::new(Value::Object(body))
    }

    fn check_state(&self, n: usize) -> CliResult<()> {
        if n > self.limits.state_cap {
            return Err(Error::CapExceeded {
                what: "statevector",
                n,
                cap: self.limits.state_cap,
            }
            .into());
        }
        Ok(())
    }
}

pub fn run(cli: &Cli) -> CliResult<Report> {
    let ctx = Ctx::new(cli);
    match &cli.command {
        Command::Matrix(a) => matrix(a, &ctx),
        Command::CheckUnitary(a) => check_unitary(a, &ctx),
        Command::Simulate(a) => simulate(a, &ctx),
        Command::Compare(a) => compare(a, &ctx),
        Command::Dhsp(a) => dhsp_cmd(a, &ctx),
        Command::Haar(a) => haar_cmd(a, &ctx),
    }
}

fn need_spec<'a>(spec: &'a Option<PathBuf>, what: &str) -> CliResult<&'a Path> {
    spec.as_deref()
        .ok_or_else(|| CliError::Usage(format!("{what} needs --spec")))
}

fn need_n(n: Option<usize>, what: &str) -> CliResult<usize> {
    n.ok_or_else(|| CliError::Usage(format!("{what} needs --n")))
}

fn load_rot(path: &Path, want: Option<Variant>) -> CliResult<rotft::RotSpec> {
    let spec = RotSpecFile::load(path)?;
    if let Some(v) = want {
        if spec.variant() != v {
            return Err(CliError::Usage(format!(
                "{}: variant {:?} does not match the requested kind",
                path.display(),
                spec.variant()
            )));
        }
    }
    Ok(spec)
}

fn matrix_table(u: &DenseUnitary) -> Table {
    let mut t = Table::new(&["row", "col", "re", "im"]);
    let m = u.matrix();
    for r in 0..m.dim() {
        for (c, z) in m.row(r).iter().enumerate() {
            t.rows.push(vec![r.to_string(), c.to_string(), num(z.re), num(z.im)]);
        }
    }
    t
}

fn matrix(a: &MatrixArgs, ctx: &Ctx) -> CliResult<Report> {
    let l = &ctx.limits;
    let u = match a.kind {
        MatrixKind::Gqft => {
            let (pm, regime) = PhaseMatrixFile::load(need_spec(&a.spec, "gqft")?)?;
            let spec = gqft::GqftSpec::new(pm, regime, None, l)?;
            gqft::gqft_dense(&spec, l)?
        }
        MatrixKind::Rot1 => {
            rotft::rot1_dense(&load_rot(need_spec(&a.spec, "rot1")?, Some(Variant::HadamardFirst))?, l)?
        }
        MatrixKind::Rot2 => {
            rotft::rot2_dense(&load_rot(need_spec(&a.spec, "rot2")?, Some(Variant::RotationFirst))?, l)?
        }
        MatrixKind::Haar => haar::haar_matrix(need_n(a.n, "haar")?, l)?.p().clone(),
        MatrixKind::Dft => gqft::dft_dense(need_n(a.n, "dft")?, l)?,
    };
    let dump = MatrixDump::from_unitary(&u);
    let mut r = ctx.report(json!({
        "kind": a.kind,
        "n": dump.n,
        "convention": dump.convention,
        "entries": dump.entries,
    }));
    r.table = Some(matrix_table(&u));
    Ok(r)
}

fn optional_check(res: gqt_core::Result<gqt_core::ValidityReport>) -> CliResult<Option<gqt_core::ValidityReport>> {
    match res {
        Ok(r) => Ok(Some(r)),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn check_unitary(a: &CheckArgs, ctx: &Ctx) -> CliResult<Report> {
    let l = &ctx.limits;
    let (pm, _) = PhaseMatrixFile::load(&a.spec)?;
    let n = pm.n();
    let triangular = phasemat::check_triangular(&pm);
    let subset = optional_check(phasemat::check_general(&pm, l))?;
    let signed = optional_check(phasemat::check_signed(&pm, l))?;
    let numeric = if n <= l.dense_cap {
        let a_dev = phasemat::a_of_z_deviation(&pm, l)?;
        let gram = gqft::transform_matrix(&pm, l)?.unitarity_error();
        Some(json!({
            "a_of_z_deviation": a_dev,
            "gram_error": gram,
            "unitary": gram < ctx.tol,
        }))
    } else {
        None
    };
    let chosen = match a.criterion {
        Criterion::Triangular => Some(triangular.clone()),
        Criterion::Subset => subset.clone(),
        Criterion::Signed => signed.clone(),
    };
    let Some(chosen) = chosen else {
        let cap = match a.criterion {
            Criterion::Subset => l.general_check_cap,
            _ => l.dense_cap,
        };
        return Err(Error::CapExceeded {
            what: "check-unitary",
            n,
            cap,
        }
        .into());
    };
    let mut r = ctx.report(json!({
        "n": n,
        "phi": pm.rows(),
        "criterion": a.criterion,
        "valid": chosen.valid,
        "witness": chosen.witness.as_ref().map(witness_json),
        "triangular": report_json(&triangular),
        "subset": subset.as_ref().map(report_json),
        "signed": signed.as_ref().map(report_json),
        "numeric": numeric,
    }));
    if !chosen.valid {
        r.exit_code = 2;
    }
    Ok(r)
}

fn simulate(a: &SimulateArgs, ctx: &Ctx) -> CliResult<Report> {
    let file: CircuitFile = read_json(&a.circuit)?;
    ctx.check_state(file.n)?;
    let c = file.to_circuit()?;
    let out = apply_circuit(&QState::basis(c.n(), a.basis)?, &c)?;
    let probs = out.probabilities();
    let histogram = match a.shots {
        Some(shots) => Some(measure_all(&out, ctx.seed, shots)?),
        None => None,
    };
    let mut t = Table::new(&["index", "re", "im", "probability", "count"]);
    for (k, z) in out.amplitudes().iter().enumerate() {
        let count = histogram
            .as_ref()
            .map(|h| h.get(&k).copied().unwrap_or(0).to_string())
            .unwrap_or_default();
        t.rows.push(vec![k.to_string(), num(z.re), num(z.im), num(probs[k]), count]);
    }
    let amps: Vec<Pair> = out.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    let mut r = ctx.report(json!({
        "n": c.n(),
        "gate_count": c.len(),
        "amplitudes": amps,
        "probabilities": probs,
        "histogram": histogram,
    }));
    r.table = Some(t);
    Ok(r)
}

fn compare(a: &CompareArgs, ctx: &Ctx) -> CliResult<Report> {
    let l = &ctx.limits;
    let (circuit, dense, bound, note): (Circuit, DenseUnitary, usize, &str) = match a.kind {
        CompareKind::Gqft => {
            let (pm, regime) = PhaseMatrixFile::load(need_spec(&a.spec, "gqft")?)?;
            if regime != Regime::Triangular {
                return Err(Error::UnsupportedRegime(format!(
                    "no gate cascade for the {regime} regime; use matrix --kind gqft"
                ))
                .into());
            }
            let spec = gqft::GqftSpec::triangular(pm)?;
            let n = spec.n();
            (gqft::gqft_circuit(&spec)?, gqft::gqft_dense(&spec, l)?, gqft::gate_bound(n), "no output swaps")
        }
        CompareKind::Rot => {
            let spec = load_rot(need_spec(&a.spec, "rot")?, None)?;
            let (c, d) = match spec.variant() {
                Variant::HadamardFirst => (rotft::rot1_circuit(&spec)?, rotft::rot1_dense(&spec, l)?),
                Variant::RotationFirst => (rotft::rot2_circuit(&spec)?, rotft::rot2_dense(&spec, l)?),
            };
            (c, d, rotft::gate_bound(spec.n()), "no output swaps")
        }
        CompareKind::Qft => {
            let n = need_n(a.n, "qft")?;
            (
                gqft::qft_circuit(n)?,
                gqft::dft_dense(n, l)?,
                gqft::gate_bound(n) + n / 2,
                "cascade for the bit-reversed DFT phase matrix followed by n/2 bit-reversal swaps",
            )
        }
    };
    let built = circuit_to_dense(&circuit, l)?;
    let diff = built.max_abs_diff(&dense);
    if let Some(path) = &a.dump_circuit {
        write_json(path, &CircuitFile::from_circuit(&circuit))?;
    }
    let pass = diff < ctx.tol;
    let mut r = ctx.report(json!({
        "kind": a.kind,
        "n": circuit.n(),
        "max_abs_diff": diff,
        "gate_count": circuit.len(),
        "gate_bound": bound,
        "swap_count": circuit.swap_count(),
        "note": note,
        "pass": pass,
    }));
    if !pass {
        r.exit_code = 2;
    }
    Ok(r)
}

pub fn parse_strategy(s: &str) -> CliResult<SampleStrategy> {
    match s {
        "perfect" => Ok(SampleStrategy::Perfect),
        "random" => Ok(SampleStrategy::Random),
        _ => s
            .strip_prefix("mixed:")
            .and_then(|k| k.parse().ok())
            .map(SampleStrategy::Mixed)
            .ok_or_else(|| CliError::Usage(format!("--samples must be perfect, random or mixed:k, got {s:?}"))),
    }
}

fn dhsp_cmd(a: &DhspArgs, ctx: &Ctx) -> CliResult<Report> {
    ctx.check_state(a.n)?;
    let strategy = parse_strategy(&a.samples)?;
    let samples = dhsp::seeded_samples(a.n, strategy, ctx.seed)?;
    let inst = DhspInstance::new(a.n, a.d, samples)?;
    let analysis = dhsp::analyze(&inst);
    let rec = dhsp::recover_d(&inst, a.trials, ctx.seed, &ctx.limits)?;
    let histogram: Map<String, Value> = rec
        .histogram
        .iter()
        .map(|(y, c)| (y.to_string(), json!(c)))
        .collect();
    let sweep = if a.sweep { Some(sweep(a, ctx)?) } else { None };
    let mut r = ctx.report(json!({
        "n": a.n,
        "d": a.d,
        "samples": inst.samples(),
        "z": inst.z(),
        "phi": analysis.phi.rows(),
        "lambda": analysis.lambda,
        "f_per_row": analysis.f_per_row,
        "f": analysis.f,
        "analytic_p": rec.analytic_p,
        "empirical_rate": rec.empirical_rate,
        "d_hat": rec.d_hat,
        "recovered": rec.d_hat == a.d,
        "histogram": histogram,
        "sweep": sweep,
    }));
    if let Some(Value::Array(rows)) = r.body.get("sweep") {
        let mut t = Table::new(&["k", "mean_analytic_p", "mean_empirical_rate", "recovered_fraction"]);
        for row in rows {
            t.rows.push(vec![
                row["k"].to_string(),
                num(row["mean_analytic_p"].as_f64().unwrap_or(f64::NAN)),
                num(row["mean_empirical_rate"].as_f64().unwrap_or(f64::NAN)),
                num(row["recovered_fraction"].as_f64().unwrap_or(f64::NAN)),
            ]);
        }
        r.table = Some(t);
    }
    Ok(r)
}

/// Mean success over `mixed:k` sample sets for `k = 0..=n`. Draw `r` of
/// level `k` uses its own sample stream and its own measurement seed.
fn sweep(a: &DhspArgs, ctx: &Ctx) -> CliResult<Value> {
    if a.sweep_draws == 0 {
        return Err(CliError::Usage("--sweep-draws must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for k in 0..=a.n {
        let (mut p, mut rate, mut hits) = (0.0, 0.0, 0u64);
        for draw in 0..a.sweep_draws {
            let id = 2 + k as u64 * a.sweep_draws + draw;
            let samples = dhsp::draw_samples(a.n, SampleStrategy::Mixed(k), &mut rng::stream(ctx.seed, id))?;
            let inst = DhspInstance::new(a.n, a.d, samples)?;
            let rec = dhsp::recover_d(&inst, a.trials, ctx.seed.wrapping_add(id), &ctx.limits)?;
            p += rec.analytic_p;
            rate += rec.empirical_rate;
            hits += u64::from(rec.d_hat == a.d);
        }
        let draws = a.sweep_draws as f64;
        rows.push(json!({
            "k": k,
            "mean_analytic_p": p / draws,
            "mean_empirical_rate": rate / draws,
            "recovered_fraction": hits as f64 / draws,
        }));
    }
    Ok(Value::Array(rows))
}

fn haar_cmd(a: &HaarArgs, ctx: &Ctx) -> CliResult<Report> {
    let l = &ctx.limits;
    let n = a.n;
    let hm = haar::haar_matrix(n, l)?;
    let identity_holds = (0..1usize << n)
        .map(|x| haar::haar_matrix_identity_check(&hm, &haar::register_slots(x, n)))
        .collect::<gqt_core::Result<Vec<bool>>>()?
        .into_iter()
        .all(|ok| ok);
    let mut levels = Vec::new();
    let mut t = Table::new(&["level", "gate_count", "swap_count", "expected_swap_count", "max_deviation"]);
    for level in 0..n {
        let c = haar::haar_inverse_circuit(n, level)?;
        let mut worst: f64 = 0.0;
        for p in 0..1usize << level {
            let prefix = (0..level).map(|k| ((p >> k) & 1) as u8).collect();
            let ket = haar::HaarKet::Detail { level, prefix };
            let input = QState::basis(n, ket.index(n)?)?;
            let got = apply_circuit(&input, &c)?;
            worst = worst.max(got.max_abs_diff(&haar::haar_inverse_apply(n, &ket, l)?));
        }
        let expected = haar::inverse_swap_count(n, level);
        t.rows.push(vec![
            level.to_string(),
            c.len().to_string(),
            c.swap_count().to_string(),
            expected.to_string(),
            num(worst),
        ]);
        levels.push(json!({
            "level": level,
            "gate_count": c.len(),
            "swap_count": c.swap_count(),
            "expected_swap_count": expected,
            "max_deviation": worst,
        }));
    }
    if let Some(path) = &a.dump {
        write_json(path, &MatrixDump::from_unitary(hm.p()))?;
    }
    let mut r = ctx.report(json!({
        "n": n,
        "unitarity_error": hm.p().unitarity_error(),
        "identity_holds": identity_holds,
        "gate_bound": haar::inverse_gate_bound(n),
        "inverse_levels": levels,
        "a": hm.a_rows(),
    }));
    r.table = Some(t);
    Ok(r)
}
