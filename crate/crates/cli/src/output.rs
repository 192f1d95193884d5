//! `results.json` and CSV writers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use lielac::fields::Field1D;

use crate::CliError;

/// Writes floats as `{:.16e}` (17 significant digits); everything else as compact JSON.
struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigFormatter);
    value.serialize(&mut ser).map_err(|e| CliError::Config(format!("serializing results: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON output is UTF-8"))
}

/// Common schema of every `canon-*` command.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Results {
    pub command: String,
    pub final_energy: f64,
    /// Parameters of the canonicalizing element `g` (`x = g · canonical`).
    pub group_params: Vec<f64>,
    #[serde(rename = "relL2_direct_vs_pipeline")]
    pub rel_l2_direct_vs_pipeline: Option<f64>,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub seed: u64,
    /// Command-specific scalar metrics.
    pub metrics: BTreeMap<String, f64>,
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    write_file(dir, name, &to_json(value)?)
}

/// `t,x,direct,pipeline` rows for paired solution slices on a common grid.
pub fn solutions_csv(direct: &[Field1D], pipeline: &[Field1D]) -> String {
    let mut out = String::from("t,x,direct,pipeline\n");
    for (d, p) in direct.iter().zip(pipeline) {
        for (i, (a, b)) in d.values.iter().zip(&p.values).enumerate() {
            writeln!(out, "{:.16e},{:.16e},{a:.16e},{b:.16e}", d.time, d.x(i)).expect("writing to a String cannot fail");
        }
    }
    out
}
