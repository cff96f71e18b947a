use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use super::files::{Certification, ConfigFile, InputError, LoadError, Loaded, ScheduleSpec};
use super::output::{cloud_csv, to_json};
use super::{CheckArgs, ExampleArgs, LimitsetArgs, Outcome, Suite, ValidateArgs, EXIT_INPUT, EXIT_PASS, EXIT_VIOLATION};
use crate::config::{ConfigError, SchottkyConfiguration, ValidationReport, Verdict};
use crate::families::{build_classical_rank_g, descriptors, finite_schedule};
use crate::group::{
    check_free_loxodromic, check_precise_invariance, check_round_trips, invariant_component_probe, limit_cloud,
    limit_cloud_with_threads, CloudParams, FreenessReport, InvarianceReport, ProbeReport, RoundTripReport,
};
use crate::moebius::{GeneralizedCircle, SpherePoint};

const TOOL: &str = "schottky";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Report<'a, P: Serialize, B: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    params: &'a P,
    verdict: Verdict,
    #[serde(flatten)]
    body: B,
}

#[derive(Serialize)]
struct ErrorBody {
    error: InputError,
}

/// Ends a command early with exit code 2.
struct Abort(InputError);

impl From<InputError> for Abort {
    fn from(e: InputError) -> Self {
        Abort(e)
    }
}

fn input_error<P: Serialize>(command: &'static str, params: &P, error: InputError) -> Outcome {
    let stderr = format!("error: {}\n", error.message);
    let report = Report { tool: TOOL, version: VERSION, command, params, verdict: Verdict::Fail, body: ErrorBody { error } };
    Outcome::new(EXIT_INPUT, to_json(&report), stderr)
}

/// Sends `text` to `out` if given, else to stdout.
fn emit(out: &Option<PathBuf>, text: String, code: i32, stderr: String) -> Result<Outcome, Abort> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| InputError::new(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome::new(code, String::new(), stderr))
        }
        None => Ok(Outcome::new(code, text, stderr)),
    }
}

fn read_config(path: &Path) -> Result<ConfigFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
    ConfigFile::parse(&text)
}

fn config_error(e: ConfigError) -> InputError {
    InputError { message: e.to_string(), detail: serde_json::to_value(&e).ok() }
}

fn finish<P: Serialize>(command: &'static str, params: &P, result: Result<Outcome, Abort>) -> Outcome {
    result.unwrap_or_else(|Abort(e)| input_error(command, params, e))
}

fn code(verdict: Verdict) -> i32 {
    if verdict.passed() {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    }
}

#[derive(Serialize)]
struct ValidateBody {
    kind: &'static str,
    level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation_failure: Option<ConfigError>,
}

pub(super) fn validate(args: &ValidateArgs) -> Outcome {
    finish("validate", args, validate_inner(args))
}

fn validate_inner(args: &ValidateArgs) -> Result<Outcome, Abort> {
    let file = read_config(&args.config)?;
    let (kind, schedule) = match file.load(Certification::Required) {
        Err(LoadError::Input(e)) => return Err(e.into()),
        Err(LoadError::Orientation(e)) => {
            let stderr = format!("violation: {e}\n");
            let body = ValidateBody { kind: "finite", level: None, validation: None, orientation_failure: Some(e) };
            let report = Report { tool: TOOL, version: VERSION, command: "validate", params: args, verdict: Verdict::Fail, body };
            return emit(&args.out, to_json(&report), EXIT_VIOLATION, stderr);
        }
        Ok(Loaded::Finite(config)) => ("finite", finite_schedule(config).map_err(config_error)?),
        Ok(Loaded::Schedule(s)) => ("schedule", s),
    };
    let level = args.level.unwrap_or(schedule.levels);
    let validation = schedule.validate(level, args.epsilon).map_err(config_error)?;
    let verdict = validation.verdict;
    let stderr = validation.failures.iter().map(|f| format!("violation: {f}\n")).collect();
    let body = ValidateBody { kind, level: Some(level), validation: Some(validation), orientation_failure: None };
    let report = Report { tool: TOOL, version: VERSION, command: "validate", params: args, verdict, body };
    emit(&args.out, to_json(&report), code(verdict), stderr)
}

/// The configuration a command works on.
struct Target {
    config: SchottkyConfiguration,
    validation: ValidationReport,
    from_schedule: bool,
}

fn load_for_group(path: &Path, level: Option<usize>, certification: Certification) -> Result<Target, InputError> {
    let file = read_config(path)?;
    match file.load(certification) {
        Err(LoadError::Input(e)) => Err(e),
        Err(LoadError::Orientation(e)) => Err(config_error(e)),
        Ok(Loaded::Finite(config)) => {
            if level.is_some_and(|n| n != config.rank()) {
                return Err(InputError::new("--level applies to schedule files only"));
            }
            let validation = config.validate();
            Ok(Target { config, validation, from_schedule: false })
        }
        Ok(Loaded::Schedule(s)) => {
            let n = level.unwrap_or(s.levels);
            let validation = s.validate(n, 1e-3).map_err(config_error)?;
            let config = s.truncate_unvalidated(n).map_err(config_error)?;
            Ok(Target { config, validation, from_schedule: true })
        }
    }
}

pub(super) fn limitset(args: &LimitsetArgs) -> Outcome {
    finish("limitset", args, limitset_inner(args))
}

fn limitset_inner(args: &LimitsetArgs) -> Result<Outcome, Abort> {
    let Target { config, validation, from_schedule } =
        load_for_group(&args.config, args.level, Certification::Required)?;
    let mut stderr = String::new();
    if !validation.passed() {
        let first = validation.failures.first().map(|f| f.to_string()).unwrap_or_default();
        if !from_schedule {
            return Err(InputError {
                message: format!("configuration is not valid: {first}"),
                detail: serde_json::to_value(&validation).ok(),
            }
            .into());
        }
        // deep truncations can fall below double precision; the cloud is still computed
        stderr.push_str(&format!("warning: truncation is not certified: {first}\n"));
    }
    let params = CloudParams { epsilon: args.eps, max_depth: args.max_depth, max_points: args.max_points };
    let cloud = match args.threads {
        Some(t) => limit_cloud_with_threads(&config, params, t),
        None => limit_cloud(&config, params),
    }
    .map_err(|e| InputError::new(e.to_string()))?;
    if cloud.truncated {
        stderr.push_str(&format!("budget exceeded: max_points = {} reached, cloud truncated\n", args.max_points));
    }
    emit(&args.out, cloud_csv(&cloud), EXIT_PASS, stderr)
}

#[derive(Serialize, Default)]
struct CheckBody {
    validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    free: Option<FreenessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariance: Option<InvarianceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fundamental: Option<RoundTripReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeReport>,
}

pub(super) fn check(args: &CheckArgs) -> Outcome {
    finish("check", args, check_inner(args))
}

fn check_inner(args: &CheckArgs) -> Result<Outcome, Abort> {
    let Target { config, validation, .. } = load_for_group(&args.config, args.level, Certification::Lenient)?;
    let runs = |s: Suite| args.suite == Suite::All || args.suite == s;
    let mut body = CheckBody::default();
    let mut passed = validation.passed();
    let mut stderr: String = validation.failures.iter().map(|f| format!("violation: {f}\n")).collect();
    if runs(Suite::Free) {
        let r = check_free_loxodromic(&config, args.word_len);
        if !r.passed() {
            passed = false;
            stderr.push_str(&format!("violation: {} words fail freeness\n", r.violations_total));
        }
        body.free = Some(r);
    }
    if runs(Suite::Invariance) {
        let r = check_precise_invariance(&config, args.word_len, args.samples, args.seed);
        if !r.passed() {
            passed = false;
            stderr.push_str(&format!("violation: {} images return to Ext\n", r.violations_total));
        }
        body.invariance = Some(r);
    }
    if runs(Suite::Fundamental) {
        let r = check_round_trips(&config, args.word_len, args.samples, args.seed);
        if !r.passed() {
            passed = false;
            stderr.push_str(&format!("violation: {} of {} round trips fail\n", r.trials - r.successes, r.trials));
        }
        body.fundamental = Some(r);
    }
    if runs(Suite::Probe) {
        let [re, im, radius] = args.probe_circle;
        let circle = GeneralizedCircle::from_center_radius(Complex64::new(re, im), radius)
            .map_err(|e| InputError::new(format!("--probe-circle: {e}")))?;
        let base = SpherePoint::from_re_im(args.probe_base[0], args.probe_base[1]);
        let r = invariant_component_probe(&config, &circle, base, args.probe_len)
            .map_err(|e| InputError::new(format!("--probe-base: {e}")))?;
        if let Some(c) = &r.crossing {
            stderr.push_str(&format!("probe: word {} moves the base point across the test circle\n", c.word));
        }
        body.probe = Some(r);
    }
    body.validation = Some(validation);
    let verdict = Verdict::from_bool(passed);
    let report = Report { tool: TOOL, version: VERSION, command: "check", params: args, verdict, body };
    emit(&args.out, to_json(&report), code(verdict), stderr)
}

pub(super) fn example(args: &ExampleArgs) -> Outcome {
    finish("example", args, example_inner(args))
}

fn example_inner(args: &ExampleArgs) -> Result<Outcome, Abort> {
    let names: Vec<&str> = descriptors().iter().map(|d| d.name).collect();
    let descriptor = descriptors()
        .into_iter()
        .find(|d| d.name == args.name)
        .ok_or_else(|| InputError::new(format!("unknown family {:?} (expected one of {})", args.name, names.join(", "))))?;
    let given = [
        ("g", args.g.is_some()),
        ("spacing", args.spacing.is_some()),
        ("re", args.re.is_some()),
        ("im", args.im.is_some()),
        ("levels", args.levels.is_some()),
    ];
    for (flag, set) in given {
        if set && descriptor.params.iter().all(|p| p.name != flag) {
            return Err(InputError::new(format!("--{flag} does not apply to {}", args.name)).into());
        }
    }
    let file = match descriptor.name {
        "classical-rank-g" => {
            let config = build_classical_rank_g(args.g.unwrap_or(2), args.spacing.unwrap_or(4.0)).map_err(config_error)?;
            ConfigFile::from_configuration(&config, false)
        }
        name => {
            let params = match name {
                "accumulating-point" => serde_json::json!({ "re": args.re.unwrap_or(0.0), "im": args.im.unwrap_or(0.0) }),
                _ => serde_json::json!({}),
            };
            let serde_json::Value::Object(params) = params else { unreachable!("json! object literal") };
            let levels = args.levels.unwrap_or(if name == "accumulating-point" { 8 } else { 16 });
            let spec = ScheduleSpec { family: name.to_string(), params, levels };
            spec.build()?;
            ConfigFile::from_schedule(spec)
        }
    };
    emit(&args.out, to_json(&file), EXIT_PASS, String::new())
}
