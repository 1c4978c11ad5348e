//! TSPLIB instance ingestion.
//!
//! Supports the symmetric and asymmetric layouts needed for the classic
//! benchmark sets: `EUC_2D`, `CEIL_2D`, `GEO` coordinates and `EXPLICIT`
//! matrices in `FULL_MATRIX`, `UPPER_ROW`, `LOWER_DIAG_ROW` and
//! `UPPER_DIAG_ROW` layouts. Whatever the source, the full `n x n` integer
//! matrix is materialized up front.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense zero-based node index. TSPLIB node `k` maps to `k - 1`.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Symmetric,
    Asymmetric,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Symmetric => "symmetric",
            Kind::Asymmetric => "asymmetric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceFormat {
    #[serde(rename = "EUC_2D")]
    Euc2d,
    #[serde(rename = "CEIL_2D")]
    Ceil2d,
    #[serde(rename = "GEO")]
    Geo,
    #[serde(rename = "EXPLICIT_FULL")]
    ExplicitFull,
    #[serde(rename = "EXPLICIT_UPPER_ROW")]
    ExplicitUpperRow,
    #[serde(rename = "EXPLICIT_LOWER_DIAG")]
    ExplicitLowerDiag,
    #[serde(rename = "EXPLICIT_UPPER_DIAG")]
    ExplicitUpperDiag,
}

/// A complete weighted graph on `n` nodes.
///
/// Immutable once built. The diagonal is stored as zero and never read by
/// any construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    n: usize,
    kind: Kind,
    source_format: SourceFormat,
    weights: Vec<i64>,
}

impl Instance {
    /// Builds an instance from a row-major `n x n` matrix.
    ///
    /// The diagonal is overwritten with zero. A `Symmetric` kind requires a
    /// symmetric matrix.
    pub fn from_matrix(
        name: impl Into<String>,
        kind: Kind,
        source_format: SourceFormat,
        n: usize,
        mut weights: Vec<i64>,
    ) -> Result<Self> {
        if n < 3 {
            return Err(Error::Argument(format!(
                "instance needs at least 3 nodes, got {n}"
            )));
        }
        if weights.len() != n * n {
            return Err(Error::Argument(format!(
                "matrix has {} entries, expected {}",
                weights.len(),
                n * n
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w < 0) {
            return Err(Error::Argument(format!("negative weight {w}")));
        }
        for i in 0..n {
            weights[i * n + i] = 0;
        }
        if kind == Kind::Symmetric {
            for i in 0..n {
                for j in (i + 1)..n {
                    if weights[i * n + j] != weights[j * n + i] {
                        return Err(Error::Argument(format!(
                            "symmetric instance has d({}, {}) = {} but d({}, {}) = {}",
                            i + 1,
                            j + 1,
                            weights[i * n + j],
                            j + 1,
                            i + 1,
                            weights[j * n + i]
                        )));
                    }
                }
            }
        }
        Ok(Instance {
            name: name.into(),
            n,
            kind,
            source_format,
            weights,
        })
    }

    /// Builds a symmetric instance from planar points with `EUC_2D` rounding.
    pub fn euclidean(name: impl Into<String>, points: &[(f64, f64)]) -> Result<Self> {
        let n = points.len();
        let mut weights = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                weights[i * n + j] = euc_2d(points[i], points[j]);
            }
        }
        Instance::from_matrix(name, Kind::Symmetric, SourceFormat::Euc2d, n, weights)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_symmetric(&self) -> bool {
        self.kind == Kind::Symmetric
    }

    pub fn source_format(&self) -> SourceFormat {
        self.source_format
    }

    /// Weight of the arc `i -> j`.
    #[inline]
    pub fn dist(&self, i: NodeId, j: NodeId) -> i64 {
        self.weights[i * self.n + j]
    }

    pub fn row(&self, i: NodeId) -> &[i64] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Cost of the closed tour visiting `order` in sequence and returning to
    /// its first node.
    pub fn tour_cost(&self, order: &[NodeId]) -> Result<i64> {
        if order.len() != self.n {
            return Err(Error::InvalidTour(format!(
                "tour has {} nodes, instance has {}",
                order.len(),
                self.n
            )));
        }
        if let Some(&v) = order.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidTour(format!("node index {v} out of range")));
        }
        let closing = self.dist(order[self.n - 1], order[0]);
        Ok(order.windows(2).map(|w| self.dist(w[0], w[1])).sum::<i64>() + closing)
    }
}

/// Reads and parses a TSPLIB file from disk.
pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    kind: Option<Kind>,
    dimension: Option<usize>,
    weight_type: Option<(WeightType, usize)>,
    weight_format: Option<(String, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightType {
    Euc2d,
    Ceil2d,
    Geo,
    Explicit,
}

enum Section {
    Header,
    Coords,
    Weights,
    Skip,
}

/// Parses TSPLIB text into an [`Instance`].
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header = Header::default();
    let mut section = Section::Header;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut coord_count = 0usize;
    let mut values: Vec<i64> = Vec::new();
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if let Some(next) = section_keyword(line) {
            if let Section::Coords = next {
                let n = header
                    .dimension
                    .ok_or_else(|| Error::parse(lineno, "NODE_COORD_SECTION before DIMENSION"))?;
                coords = vec![None; n];
            }
            section = next;
            continue;
        }
        match section {
            Section::Header => parse_header_line(&mut header, line, lineno)?,
            Section::Coords => {
                if line.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    section = Section::Header;
                    parse_header_line(&mut header, line, lineno)?;
                    continue;
                }
                let mut it = line.split_whitespace();
                let id = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(lineno, format!("bad node id in `{line}`")))?;
                let x = parse_f64(it.next(), lineno, line)?;
                let y = parse_f64(it.next(), lineno, line)?;
                if id == 0 || id > coords.len() {
                    return Err(Error::parse(
                        lineno,
                        format!("node id {id} outside 1..={}", coords.len()),
                    ));
                }
                if coords[id - 1].replace((x, y)).is_some() {
                    return Err(Error::parse(lineno, format!("duplicate node id {id}")));
                }
                coord_count += 1;
            }
            Section::Weights => {
                if line.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    section = Section::Header;
                    parse_header_line(&mut header, line, lineno)?;
                    continue;
                }
                for tok in line.split_whitespace() {
                    values.push(parse_weight(tok, lineno)?);
                }
            }
            Section::Skip => {}
        }
    }

    let n = header
        .dimension
        .ok_or_else(|| Error::parse(last_line, "missing DIMENSION"))?;
    if n < 3 {
        return Err(Error::parse(last_line, format!("DIMENSION {n} is below 3")));
    }
    let kind = header.kind.unwrap_or(Kind::Symmetric);
    let name = header.name.unwrap_or_default();
    let (weight_type, type_line) = header
        .weight_type
        .ok_or_else(|| Error::parse(last_line, "missing EDGE_WEIGHT_TYPE"))?;

    let (format, weights) = match weight_type {
        WeightType::Explicit => {
            let (fmt_name, fmt_line) = header.weight_format.ok_or_else(|| {
                Error::parse(type_line, "EXPLICIT weights without EDGE_WEIGHT_FORMAT")
            })?;
            let format = match fmt_name.as_str() {
                "FULL_MATRIX" => SourceFormat::ExplicitFull,
                "UPPER_ROW" => SourceFormat::ExplicitUpperRow,
                "LOWER_DIAG_ROW" => SourceFormat::ExplicitLowerDiag,
                "UPPER_DIAG_ROW" => SourceFormat::ExplicitUpperDiag,
                other => {
                    return Err(Error::parse(
                        fmt_line,
                        format!("unsupported EDGE_WEIGHT_FORMAT `{other}`"),
                    ))
                }
            };
            let weights = expand_explicit(format, n, &values)
                .map_err(|message| Error::parse(last_line, message))?;
            (format, weights)
        }
        coord_type => {
            if coord_count != n {
                return Err(Error::parse(
                    last_line,
                    format!("DIMENSION is {n} but {coord_count} coordinates were given"),
                ));
            }
            let pts: Vec<(f64, f64)> = coords.into_iter().flatten().collect();
            let (format, metric): (SourceFormat, Metric) = match coord_type {
                WeightType::Euc2d => (SourceFormat::Euc2d, euc_2d),
                WeightType::Ceil2d => (SourceFormat::Ceil2d, ceil_2d),
                WeightType::Geo => (SourceFormat::Geo, geo),
                WeightType::Explicit => unreachable!(),
            };
            let mut weights = vec![0i64; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = metric(pts[i], pts[j]);
                    weights[i * n + j] = d;
                    weights[j * n + i] = d;
                }
            }
            (format, weights)
        }
    };
    Instance::from_matrix(name, kind, format, n, weights)
        .map_err(|e| Error::parse(last_line, e.to_string()))
}

fn section_keyword(line: &str) -> Option<Section> {
    let key = line.trim_end_matches(':').trim();
    match key {
        "NODE_COORD_SECTION" => Some(Section::Coords),
        "EDGE_WEIGHT_SECTION" => Some(Section::Weights),
        "DISPLAY_DATA_SECTION" | "FIXED_EDGES_SECTION" | "DEMAND_SECTION" | "DEPOT_SECTION" => {
            Some(Section::Skip)
        }
        _ => None,
    }
}

fn parse_header_line(header: &mut Header, line: &str, lineno: usize) -> Result<()> {
    let Some((key, value)) = line.split_once(':') else {
        return Err(Error::parse(
            lineno,
            format!("malformed header line `{line}`"),
        ));
    };
    let key = key.trim();
    let value = value.trim();
    match key {
        "NAME" => header.name = Some(value.to_string()),
        "TYPE" => {
            header.kind = Some(match value {
                "TSP" => Kind::Symmetric,
                "ATSP" => Kind::Asymmetric,
                other => {
                    return Err(Error::parse(lineno, format!("unsupported TYPE `{other}`")));
                }
            })
        }
        "DIMENSION" => {
            let n = value
                .parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad DIMENSION `{value}`")))?;
            header.dimension = Some(n);
        }
        "EDGE_WEIGHT_TYPE" => {
            let t = match value {
                "EUC_2D" => WeightType::Euc2d,
                "CEIL_2D" => WeightType::Ceil2d,
                "GEO" => WeightType::Geo,
                "EXPLICIT" => WeightType::Explicit,
                other => {
                    return Err(Error::parse(
                        lineno,
                        format!("unsupported EDGE_WEIGHT_TYPE `{other}`"),
                    ))
                }
            };
            header.weight_type = Some((t, lineno));
        }
        "EDGE_WEIGHT_FORMAT" => header.weight_format = Some((value.to_string(), lineno)),
        "COMMENT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" | "CAPACITY" | "VEHICLES" => {}
        other => {
            log::debug!("line {lineno}: ignoring header key `{other}`");
        }
    }
    Ok(())
}

fn parse_f64(tok: Option<&str>, lineno: usize, line: &str) -> Result<f64> {
    tok.and_then(|t| t.parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(lineno, format!("bad coordinate in `{line}`")))
}

fn parse_weight(tok: &str, lineno: usize) -> Result<i64> {
    let w = match tok.parse::<i64>() {
        Ok(w) => w,
        Err(_) => {
            let f = tok
                .parse::<f64>()
                .map_err(|_| Error::parse(lineno, format!("bad weight `{tok}`")))?;
            if f.fract() != 0.0 || !f.is_finite() {
                return Err(Error::parse(lineno, format!("non-integer weight `{tok}`")));
            }
            f as i64
        }
    };
    if w < 0 {
        return Err(Error::parse(lineno, format!("negative weight {w}")));
    }
    Ok(w)
}

fn expand_explicit(format: SourceFormat, n: usize, values: &[i64]) -> Result<Vec<i64>, String> {
    let expected = match format {
        SourceFormat::ExplicitFull => n * n,
        SourceFormat::ExplicitUpperRow => n * (n - 1) / 2,
        SourceFormat::ExplicitLowerDiag | SourceFormat::ExplicitUpperDiag => n * (n + 1) / 2,
        _ => unreachable!("coordinate formats are not explicit"),
    };
    if values.len() != expected {
        return Err(format!(
            "DIMENSION {n} needs {expected} weights for this layout, found {}",
            values.len()
        ));
    }
    if format == SourceFormat::ExplicitFull {
        return Ok(values.to_vec());
    }
    let mut w = vec![0i64; n * n];
    let mut it = values.iter().copied();
    let mut set = |i: usize, j: usize, v: i64| {
        w[i * n + j] = v;
        w[j * n + i] = v;
    };
    for i in 0..n {
        let cols = match format {
            SourceFormat::ExplicitUpperRow => (i + 1)..n,
            SourceFormat::ExplicitLowerDiag => 0..(i + 1),
            _ => i..n,
        };
        for j in cols {
            set(i, j, it.next().expect("length checked above"));
        }
    }
    Ok(w)
}

type Metric = fn((f64, f64), (f64, f64)) -> i64;

fn nint(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

fn euc_2d(a: (f64, f64), b: (f64, f64)) -> i64 {
    nint((a.0 - b.0).hypot(a.1 - b.1))
}

fn ceil_2d(a: (f64, f64), b: (f64, f64)) -> i64 {
    (a.0 - b.0).hypot(a.1 - b.1).ceil() as i64
}

// TSPLIB geographical distance; coordinates are DDD.MM (degrees, minutes).
fn geo(a: (f64, f64), b: (f64, f64)) -> i64 {
    // The format defines GEO with this truncated value of pi.
    #[allow(clippy::approx_constant)]
    const PI: f64 = 3.141592;
    const RRR: f64 = 6378.388;
    let rad = |x: f64| {
        let deg = x.trunc();
        let min = x - deg;
        PI * (deg + 5.0 * min / 3.0) / 180.0
    };
    let (lat_a, lon_a) = (rad(a.0), rad(a.1));
    let (lat_b, lon_b) = (rad(b.0), rad(b.1));
    let q1 = (lon_a - lon_b).cos();
    let q2 = (lat_a - lat_b).cos();
    let q3 = (lat_a + lat_b).cos();
    (RRR * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0) as i64
}

/// Parses the `TOUR_SECTION` of a TSPLIB `.tour` file into zero-based nodes.
pub fn parse_tour(text: &str) -> Result<Vec<NodeId>> {
    let mut in_tour = false;
    let mut order = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if !in_tour {
            in_tour = line.trim_end_matches(':').trim() == "TOUR_SECTION";
            continue;
        }
        if line == "EOF" {
            break;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("bad tour entry `{tok}`")))?;
            if v == -1 {
                return Ok(order);
            }
            if v < 1 {
                return Err(Error::parse(idx + 1, format!("bad node number {v}")));
            }
            order.push(v as usize - 1);
        }
    }
    if !in_tour {
        return Err(Error::parse(text.lines().count(), "missing TOUR_SECTION"));
    }
    Ok(order)
}

/// Writes an instance as a TSPLIB `EXPLICIT` / `FULL_MATRIX` file.
pub fn to_full_matrix_text(inst: &Instance) -> String {
    let mut out = String::new();
    let ty = match inst.kind {
        Kind::Symmetric => "TSP",
        Kind::Asymmetric => "ATSP",
    };
    out.push_str(&format!(
        "NAME: {}\nTYPE: {ty}\nDIMENSION: {}\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n",
        inst.name, inst.n
    ));
    for i in 0..inst.n {
        let row: Vec<String> = inst.row(i).iter().map(|w| w.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str("EOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n\
EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2\n1 0 3\n2 3 0\nEOF\n";

    #[test]
    fn full_matrix_triangle() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.kind(), Kind::Symmetric);
        assert_eq!(inst.dist(0, 1), 1);
        assert_eq!(inst.dist(2, 1), 3);
        assert_eq!(inst.source_format(), SourceFormat::ExplicitFull);
    }

    #[test]
    fn triangle_tour_cost() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.tour_cost(&[0, 1, 2]).unwrap(), 6);
        assert_eq!(inst.tour_cost(&[2, 1, 0]).unwrap(), 6);
        assert!(matches!(
            inst.tour_cost(&[0, 1]),
            Err(Error::InvalidTour(_))
        ));
    }

    #[test]
    fn euclidean_rounding() {
        let text =
            "NAME: e\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n\
1 0 0\n2 3 4\n3 1 1\nEOF\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.dist(0, 1), 5);
        // sqrt(2) rounds down, sqrt(13) = 3.61 rounds up
        assert_eq!(inst.dist(0, 2), 1);
        assert_eq!(inst.dist(1, 2), 4);

        let ceil = parse_instance(&text.replace("EUC_2D", "CEIL_2D")).unwrap();
        assert_eq!(ceil.dist(0, 2), 2);
        assert_eq!(ceil.dist(0, 1), 5);
    }

    #[test]
    fn rejects_unsupported_weight_type() {
        let text = TRIANGLE.replace("EXPLICIT", "ATT");
        match parse_instance(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("ATT"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let text = TRIANGLE.replace("2 3 0\n", "2 3\n");
        let err = parse_instance(&text).unwrap_err();
        assert!(err.to_string().contains("needs 9 weights"), "{err}");
    }

    #[test]
    fn rejects_negative_weight() {
        let text = TRIANGLE.replace("1 0 3", "1 0 -3");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }), "{err}");
    }

    #[test]
    fn rejects_malformed_header() {
        let text = TRIANGLE.replace("DIMENSION: 3", "DIMENSION 3");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_asymmetric_full_matrix_declared_tsp() {
        let text = TRIANGLE.replace("1 0 3", "5 0 3");
        assert!(parse_instance(&text).is_err());
        let atsp = text.replace("TYPE: TSP", "TYPE: ATSP");
        let inst = parse_instance(&atsp).unwrap();
        assert_eq!(inst.kind(), Kind::Asymmetric);
        assert_eq!(inst.dist(1, 0), 5);
        assert_eq!(inst.dist(0, 1), 1);
    }

    #[test]
    fn diagonal_is_zeroed() {
        let text = TRIANGLE
            .replace("TYPE: TSP", "TYPE: ATSP")
            .replace("0 1 2\n1 0 3\n2 3 0", "9999 1 2\n1 9999 3\n2 3 9999");
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst.dist(1, 1), 0);
    }

    #[test]
    fn geo_distance_matches_reference_pair() {
        // gr666 nodes 1 and 2: (90.00, 0.00) and (71.17, -156.47).
        let text = "NAME: g\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n\
1 90.00 0.00\n2 71.17 -156.47\n3 64.51 -147.43\nEOF\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.dist(0, 1), inst.dist(1, 0));
        assert!(inst.dist(0, 1) > 2000 && inst.dist(0, 1) < 2300);
    }

    #[test]
    fn tour_file_parsing() {
        let text = "NAME : t\nTYPE : TOUR\nDIMENSION : 3\nTOUR_SECTION\n1\n3\n2\n-1\nEOF\n";
        assert_eq!(parse_tour(text).unwrap(), vec![0, 2, 1]);
    }

    #[test]
    fn full_matrix_text_round_trips() {
        let inst = parse_instance(TRIANGLE).unwrap();
        let again = parse_instance(&to_full_matrix_text(&inst)).unwrap();
        assert_eq!(inst, again);
    }
}
