use koszul_core::{Error, Verdict};
use serde_json::{json, Value};

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "checked": v.checked,
        "passed": v.passed(),
        "failures": v.failures.len(),
        "witness": v.witness().map(|f| json!({"at": f.at, "residual": f.residual})),
    })
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::WindowTooSmall(_) => "window_too_small",
        Error::IndexOutOfRange { .. } => "index_out_of_range",
        Error::NotAdmissible(_) => "not_admissible",
        Error::FiltrationNotRespected(_) => "filtration_not_respected",
        Error::NotAChainMap(_) => "not_a_chain_map",
        Error::InconsistentPresentation(_) => "inconsistent_presentation",
        Error::NotClosedUnderDecomposition(_) => "not_closed_under_decomposition",
        Error::CurvatureMismatch(_) => "curvature_mismatch",
        Error::NotATwistingMorphism(_) => "not_a_twisting_morphism",
        Error::NotConilpotent(_) => "not_conilpotent",
        Error::NonSplitSemisimple(_) => "non_split_semisimple",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::Invalid(_) => "invalid",
        Error::Schema(_) => "schema",
    }
}

/// 0 on success, 1 when validation failed, 2 on schema errors, 3 when the window is too small.
pub fn exit_code(outcome: &Result<bool, Error>) -> i32 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Error::Schema(_)) => 2,
        Err(Error::WindowTooSmall(_)) => 3,
        Err(_) => 1,
    }
}

/// `path: value` lines in key order.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    flatten(v, "", &mut out);
    out
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(x, &p, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}
