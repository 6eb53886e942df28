//! Curve CSV output.

use veto_manip::experiments::CurvePoint;
use veto_manip::generators::PRNG_DESCRIPTION;

pub const COLUMNS: [&str; 15] = [
    "kind",
    "n",
    "m",
    "k",
    "mean",
    "sd",
    "k_prime",
    "trials",
    "seed",
    "p_hat",
    "ci",
    "branch_mean",
    "branch_median",
    "branch_max",
    "x_rescaled",
];

fn opt<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn row(point: &CurvePoint) -> [String; 15] {
    let spec = &point.spec;
    let s = &point.summary;
    let normal = spec.model.normal_parameters();
    [
        spec.model.kind().to_string(),
        spec.n.to_string(),
        spec.m.to_string(),
        opt(spec.model.k()),
        opt(normal.map(|(mean, _)| mean)),
        opt(normal.map(|(_, sd)| sd)),
        opt(spec.model.k_prime()),
        s.trials.to_string(),
        spec.base_seed.to_string(),
        s.p_hat.to_string(),
        s.ci_halfwidth.to_string(),
        s.branch_mean.to_string(),
        s.branch_median.to_string(),
        s.branch_max.to_string(),
        opt(point.x_rescaled),
    ]
}

/// The full CSV document: `#` metadata lines, header, one row per point.
///
/// `config` is a description of the resolved run configuration; it must not
/// include anything that does not affect the rows (worker count, output path).
pub fn render(points: &[CurvePoint], config: &str) -> Result<Vec<u8>, csv::Error> {
    let mut out = Vec::new();
    out.extend_from_slice(format!("# tool: vetoman {}\n", env!("CARGO_PKG_VERSION")).as_bytes());
    out.extend_from_slice(format!("# prng: {PRNG_DESCRIPTION}\n").as_bytes());
    out.extend_from_slice(format!("# config: {config}\n").as_bytes());
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(COLUMNS)?;
    for point in points {
        writer.write_record(row(point))?;
    }
    writer.into_inner().map_err(|e| e.into_error().into())
}
