//! TSPLIB instance and tour files.
//!
//! City ids are 1-based in files and 0-based everywhere else.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::Point;

/// Supported `EDGE_WEIGHT_TYPE` conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeWeightType {
    #[serde(rename = "EUC_2D")]
    Euc2d,
    #[serde(rename = "CEIL_2D")]
    Ceil2d,
    #[serde(rename = "ATT")]
    Att,
}

impl EdgeWeightType {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeWeightType::Euc2d => "EUC_2D",
            EdgeWeightType::Ceil2d => "CEIL_2D",
            EdgeWeightType::Att => "ATT",
        }
    }
}

impl FromStr for EdgeWeightType {
    type Err = ParseErrorKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EUC_2D" => Ok(EdgeWeightType::Euc2d),
            "CEIL_2D" => Ok(EdgeWeightType::Ceil2d),
            "ATT" => Ok(EdgeWeightType::Att),
            other => Err(ParseErrorKind::UnsupportedEdgeWeightType(other.to_string())),
        }
    }
}

impl std::fmt::Display for EdgeWeightType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parsed TSPLIB problem. `coords[i]` belongs to file id `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub edge_weight_type: EdgeWeightType,
    pub coords: Vec<Point>,
}

impl Instance {
    pub fn new(name: impl Into<String>, edge_weight_type: EdgeWeightType, coords: Vec<Point>) -> Self {
        Instance {
            name: name.into(),
            edge_weight_type,
            coords,
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

/// A visiting order: a permutation of `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tour(Vec<usize>);

impl Tour {
    /// Validates that `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_permutation(&order)?;
        Ok(Tour(order))
    }

    pub fn identity(n: usize) -> Self {
        Tour((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl AsRef<[usize]> for Tour {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

pub(crate) fn check_permutation(order: &[usize]) -> Result<()> {
    let n = order.len();
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n {
            return Err(Error::NotAPermutation(format!("index {c} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::NotAPermutation(format!("index {c} appears twice")));
        }
    }
    Ok(())
}

/// Splits `KEY : VALUE` (colon optional for section markers).
fn split_keyword(line: &str) -> (String, &str) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim().to_ascii_uppercase(), v.trim()),
        None => {
            let mut it = line.splitn(2, char::is_whitespace);
            let k = it.next().unwrap_or("").trim().to_ascii_uppercase();
            (k, it.next().unwrap_or("").trim())
        }
    }
}

fn starts_with_keyword(line: &str) -> bool {
    line.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
}

fn parse_num<T: FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::MalformedNumber(tok.to_string())))
}

/// Parses a TSPLIB problem with a `NODE_COORD_SECTION`.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut ewt: Option<EdgeWeightType> = None;
    let mut coords: Option<Vec<Option<Point>>> = None;
    let mut found = 0usize;
    let mut last_line = 0usize;

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    while let Some((ln, line)) = lines.next() {
        last_line = ln;
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_keyword(line);
        match key.as_str() {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                let d: usize = parse_num(value, ln)?;
                if d == 0 {
                    return Err(ParseError::new(ln, ParseErrorKind::MalformedLine(line.to_string())));
                }
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => {
                ewt = Some(value.parse().map_err(|k| ParseError::new(ln, k))?);
            }
            "EOF" => break,
            "NODE_COORD_SECTION" => {
                let n = dimension.ok_or(ParseError::new(ln, ParseErrorKind::MissingDimension))?;
                if ewt.is_none() {
                    return Err(ParseError::new(ln, ParseErrorKind::MissingEdgeWeightType));
                }
                let mut slots: Vec<Option<Point>> = vec![None; n];
                let mut end_line = ln;
                for (cl, cline) in lines.by_ref() {
                    last_line = cl;
                    end_line = cl;
                    if cline.is_empty() {
                        continue;
                    }
                    if starts_with_keyword(cline) {
                        break;
                    }
                    let toks: Vec<&str> = cline.split_whitespace().collect();
                    if toks.len() != 3 {
                        return Err(ParseError::new(cl, ParseErrorKind::MalformedLine(cline.to_string())));
                    }
                    let id: i64 = parse_num(toks[0], cl)?;
                    let x: f64 = parse_num(toks[1], cl)?;
                    let y: f64 = parse_num(toks[2], cl)?;
                    found += 1;
                    if found > n {
                        return Err(ParseError::new(
                            cl,
                            ParseErrorKind::CoordinateCount { expected: n, found },
                        ));
                    }
                    if id < 1 || id as usize > n {
                        return Err(ParseError::new(cl, ParseErrorKind::NodeIdOutOfRange(id)));
                    }
                    let slot = &mut slots[id as usize - 1];
                    if slot.is_some() {
                        return Err(ParseError::new(cl, ParseErrorKind::DuplicateNode(id as usize)));
                    }
                    *slot = Some(Point::new(x, y));
                }
                if found != n {
                    return Err(ParseError::new(
                        end_line,
                        ParseErrorKind::CoordinateCount { expected: n, found },
                    ));
                }
                coords = Some(slots);
                // the line that ended the section (a keyword or EOF) is not re-read;
                // anything after the coordinates is display data or trailer
                break;
            }
            _ => {}
        }
    }

    let dimension = dimension.ok_or(ParseError::new(last_line, ParseErrorKind::MissingDimension))?;
    let ewt = ewt.ok_or(ParseError::new(last_line, ParseErrorKind::MissingEdgeWeightType))?;
    let coords = coords.ok_or(ParseError::new(
        last_line,
        ParseErrorKind::MissingSection("NODE_COORD_SECTION"),
    ))?;
    debug_assert_eq!(coords.len(), dimension);
    Ok(Instance {
        name,
        edge_weight_type: ewt,
        coords: coords.into_iter().map(|p| p.expect("all slots filled")).collect(),
    })
}

/// Parses a TSPLIB tour over `n` cities and returns it 0-based.
pub fn parse_tour(text: &str, n: usize) -> Result<Tour, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut last_line = 0;
    let mut in_section = false;
    for (ln, line) in lines.by_ref() {
        last_line = ln;
        if split_keyword(line).0 == "TOUR_SECTION" {
            in_section = true;
            break;
        }
    }
    if !in_section {
        return Err(ParseError::new(
            last_line,
            ParseErrorKind::MissingSection("TOUR_SECTION"),
        ));
    }

    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    'outer: for (ln, line) in lines {
        last_line = ln;
        if starts_with_keyword(line) {
            break;
        }
        for tok in line.split_whitespace() {
            let id: i64 = parse_num(tok, ln)?;
            if id == -1 {
                break 'outer;
            }
            if id < 1 || id as usize > n {
                return Err(ParseError::new(ln, ParseErrorKind::NodeIdOutOfRange(id)));
            }
            let c = id as usize - 1;
            if std::mem::replace(&mut seen[c], true) {
                return Err(ParseError::new(ln, ParseErrorKind::DuplicateNode(id as usize)));
            }
            order.push(c);
        }
    }
    if order.len() != n {
        return Err(ParseError::new(
            last_line,
            ParseErrorKind::TourCount {
                expected: n,
                found: order.len(),
            },
        ));
    }
    Ok(Tour(order))
}

/// Serializes a tour in TSPLIB `.tour` format. An empty name becomes `UNNAMED`.
pub fn write_tour(tour: &Tour, name: &str) -> String {
    let name = if name.trim().is_empty() { "UNNAMED" } else { name.trim() };
    let mut out = String::with_capacity(16 + tour.len() * 6);
    let _ = writeln!(out, "NAME : {name}");
    let _ = writeln!(out, "TYPE : TOUR");
    let _ = writeln!(out, "DIMENSION : {}", tour.len());
    out.push_str("TOUR_SECTION\n");
    for &c in tour.as_slice() {
        let _ = writeln!(out, "{}", c + 1);
    }
    out.push_str("-1\nEOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str =
        "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 0 3\n3 4 0\nEOF\n";

    #[test]
    fn minimal_file() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.dimension(), 3);
        assert_eq!(inst.name, "tri");
        assert_eq!(inst.edge_weight_type, EdgeWeightType::Euc2d);
        assert_eq!(inst.coords[2], Point::new(4.0, 0.0));
    }

    #[test]
    fn crlf_and_spacing() {
        let text = "NAME :  tri \r\nDIMENSION   :   3\r\nEDGE_WEIGHT_TYPE:CEIL_2D\r\nNODE_COORD_SECTION\r\n 1   0.5  0 \r\n2 0 3\r\n3\t4 0\r\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.edge_weight_type, EdgeWeightType::Ceil2d);
        assert_eq!(inst.coords[0], Point::new(0.5, 0.0));
        assert_eq!(inst.coords[2], Point::new(4.0, 0.0));
    }

    #[test]
    fn missing_coordinate_is_reported() {
        let text = TRIANGLE.replace("3 4 0\n", "");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::CoordinateCount { expected: 3, found: 2 });
    }

    #[test]
    fn missing_dimension() {
        let text = TRIANGLE.replace("DIMENSION: 3\n", "");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingDimension);
        assert_eq!(err.line, 4);
    }

    #[test]
    fn unsupported_weight_type() {
        let text = TRIANGLE.replace("EUC_2D", "GEO");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedEdgeWeightType("GEO".into()));
        assert_eq!(err.line, 4);
    }

    #[test]
    fn malformed_number() {
        let text = TRIANGLE.replace("2 0 3", "2 0 3x");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MalformedNumber("3x".into()));
        assert_eq!(err.line, 7);
    }

    #[test]
    fn unknown_keywords_ignored() {
        let text = TRIANGLE.replace("TYPE: TSP", "TYPE: TSP\nCAPACITY: 7\nDISPLAY_DATA_TYPE: COORD_DISPLAY");
        assert!(parse_instance(&text).is_ok());
    }

    #[test]
    fn tours() {
        let t = parse_tour("TOUR_SECTION\n1 2 3 -1\n", 3).unwrap();
        assert_eq!(t.as_slice(), &[0, 1, 2]);

        let err = parse_tour("TOUR_SECTION\n1 1 3 -1\n", 3).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateNode(1));

        let err = parse_tour("TOUR_SECTION\n1 4 3 -1\n", 3).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NodeIdOutOfRange(4));

        let err = parse_tour("TOUR_SECTION\n1 2 -1\n", 3).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TourCount { expected: 3, found: 2 });

        let err = parse_tour("1 2 3 -1\n", 3).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingSection("TOUR_SECTION"));
    }

    #[test]
    fn write_format() {
        let text = write_tour(&Tour::identity(3), "tri");
        assert!(text.contains("1\n2\n3\n-1"));
        assert!(text.starts_with("NAME : tri\n"));
        assert!(write_tour(&Tour::identity(3), "").contains("NAME : UNNAMED"));
        assert_eq!(parse_tour(&text, 3).unwrap(), Tour::identity(3));
    }

    #[test]
    fn tour_validation() {
        assert!(Tour::new(vec![2, 0, 1]).is_ok());
        assert!(Tour::new(vec![0, 0, 1]).is_err());
        assert!(Tour::new(vec![0, 3, 1]).is_err());
    }
}
