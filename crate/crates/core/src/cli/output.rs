//! Report JSON and cloud CSV encodings. Floats are written with 17
//! significant digits so that every value round-trips exactly.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::group::{CloudEntry, LimitCloud, ReducedWord};
use crate::moebius::SpherePoint;

/// `d.dddddddddddddddde±x`: 17 significant digits, valid JSON and CSV.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Pretty JSON with 17-digit floats; non-finite floats become `null`.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub const CLOUD_HEADER: [&str; 5] = ["re", "im", "word", "depth", "disk_diameter"];
pub const TRUNCATED_MARKER: &str = "# truncated=true";

/// `re,im,word,depth,disk_diameter` rows in canonical word order; the point
/// at infinity is written as `inf,inf`. A truncated cloud ends with a
/// `# truncated=true` line.
pub fn cloud_csv(cloud: &LimitCloud) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CLOUD_HEADER).expect("in-memory write");
    for e in &cloud.entries {
        let (re, im) = match e.point {
            SpherePoint::Finite(z) => (format_f64(z.re), format_f64(z.im)),
            SpherePoint::Infinity => ("inf".to_string(), "inf".to_string()),
        };
        writer
            .write_record([re, im, e.word.to_string(), e.depth.to_string(), format_f64(e.disk_diameter)])
            .expect("in-memory write");
    }
    let mut out = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("CSV of ASCII fields");
    if cloud.truncated {
        out.push_str(TRUNCATED_MARKER);
        out.push('\n');
    }
    out
}

/// A parsed cloud file.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudRows {
    pub entries: Vec<CloudEntry>,
    pub truncated: bool,
}

/// Reads a file written by [`cloud_csv`].
pub fn parse_cloud_csv(text: &str) -> Result<CloudRows, String> {
    let truncated = text.lines().any(|l| l.trim() == TRUNCATED_MARKER);
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(CLOUD_HEADER) {
        return Err(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()));
    }
    let mut entries = Vec::new();
    for (k, row) in reader.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let at = |msg: String| format!("row {}: {msg}", k + 1);
        let float = |i: usize| row[i].parse::<f64>().map_err(|e| at(format!("column {}: {e}", CLOUD_HEADER[i])));
        let point = if &row[0] == "inf" {
            SpherePoint::Infinity
        } else {
            SpherePoint::from_re_im(float(0)?, float(1)?)
        };
        let word: ReducedWord = row[2].parse().map_err(|e| at(format!("{e}")))?;
        let depth = row[3].parse().map_err(|e| at(format!("column depth: {e}")))?;
        entries.push(CloudEntry { point, word, depth, disk_diameter: float(4)? });
    }
    Ok(CloudRows { entries, truncated })
}
