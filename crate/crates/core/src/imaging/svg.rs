//! A minimal SVG profile: filled `path` elements made of `M`, `C`, `L`, `H`,
//! `V` and `Z` commands. Everything else in path data is rejected.

use std::fmt::Write as _;
use std::path::Path;

use super::{ImagingError, Rgb};
use crate::energy::VectorShape;
use crate::geometry::{Bezigon, Point};

/// Shapes in pixel coordinates, painted in order.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorDocument {
    pub width: f64,
    pub height: f64,
    pub shapes: Vec<VectorShape>,
}

impl VectorDocument {
    pub fn new(width: f64, height: f64) -> Self {
        VectorDocument { width, height, shapes: Vec::new() }
    }

    /// Copy with every coordinate multiplied by `k`.
    pub fn scaled(&self, k: f64) -> VectorDocument {
        VectorDocument {
            width: self.width * k,
            height: self.height * k,
            shapes: self
                .shapes
                .iter()
                .map(|s| VectorShape::new(s.bezigon.map_points(|p| p * k), s.color))
                .collect(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_whitespace() || self.src[self.pos] == b',')
        {
            self.pos += 1;
        }
    }

    fn peek_command(&mut self) -> Option<char> {
        self.skip_separators();
        let c = *self.src.get(self.pos)? as char;
        c.is_ascii_alphabetic().then_some(c).filter(|c| *c != 'e' && *c != 'E')
    }

    fn at_end(&mut self) -> bool {
        self.skip_separators();
        self.pos >= self.src.len()
    }

    fn err(&self, message: &str) -> ImagingError {
        ImagingError::PathSyntax { offset: self.pos, message: message.to_string() }
    }

    fn number(&mut self) -> Result<f64, ImagingError> {
        self.skip_separators();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let mut seen_dot = false;
        let mut digits = 0;
        while i < s.len() && (s[i].is_ascii_digit() || (s[i] == b'.' && !seen_dot)) {
            seen_dot |= s[i] == b'.';
            digits += s[i].is_ascii_digit() as usize;
            i += 1;
        }
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        self.pos = i;
        std::str::from_utf8(&s[start..i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("malformed number"))
    }

    fn has_number(&mut self) -> bool {
        self.skip_separators();
        matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit() || b"+-.".contains(c))
    }
}

fn finish_subpath(
    pts: &mut Vec<Point>,
    start: Point,
    out: &mut Vec<Bezigon>,
) -> Result<(), ImagingError> {
    if pts.len() <= 1 {
        pts.clear();
        return Ok(());
    }
    let last = *pts.last().unwrap();
    if last.distance(start) > 1e-9 {
        let a = last;
        pts.push(a.lerp(start, 1.0 / 3.0));
        pts.push(a.lerp(start, 2.0 / 3.0));
    } else {
        pts.pop();
    }
    out.push(Bezigon::new(std::mem::take(pts))?);
    Ok(())
}

/// Parses path data into one bezigon per subpath. Open subpaths are closed
/// with a straight segment.
pub fn parse_path_data(d: &str) -> Result<Vec<Bezigon>, ImagingError> {
    let mut lx = Lexer { src: d.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    let mut pts: Vec<Point> = Vec::new();
    let mut cur = Point::ZERO;
    let mut start = Point::ZERO;
    let mut cmd: Option<char> = None;
    while !lx.at_end() {
        let c = match lx.peek_command() {
            Some(c) => {
                lx.pos += 1;
                c
            }
            None => match cmd {
                Some('M') => 'L',
                Some('m') => 'l',
                Some(c) if c != 'Z' && c != 'z' => c,
                _ => return Err(lx.err("expected a command")),
            },
        };
        if cmd.is_none() && c.to_ascii_uppercase() != 'M' {
            return Err(lx.err("path must start with a moveto"));
        }
        cmd = Some(c);
        if pts.is_empty() && "LHVC".contains(c.to_ascii_uppercase()) {
            pts.push(cur);
            start = cur;
        }
        let rel = c.is_ascii_lowercase();
        let base = if rel { cur } else { Point::ZERO };
        let line_to = |pts: &mut Vec<Point>, cur: &mut Point, p: Point| {
            pts.push(cur.lerp(p, 1.0 / 3.0));
            pts.push(cur.lerp(p, 2.0 / 3.0));
            pts.push(p);
            *cur = p;
        };
        match c.to_ascii_uppercase() {
            'M' => {
                finish_subpath(&mut pts, start, &mut out)?;
                let p = base + Point::new(lx.number()?, lx.number()?);
                cur = p;
                start = p;
                pts.push(p);
            }
            'L' => {
                let p = base + Point::new(lx.number()?, lx.number()?);
                line_to(&mut pts, &mut cur, p);
            }
            'H' => {
                let x = lx.number()? + if rel { cur.x } else { 0.0 };
                let p = Point::new(x, cur.y);
                line_to(&mut pts, &mut cur, p);
            }
            'V' => {
                let y = lx.number()? + if rel { cur.y } else { 0.0 };
                let p = Point::new(cur.x, y);
                line_to(&mut pts, &mut cur, p);
            }
            'C' => {
                let mut q = [Point::ZERO; 3];
                for p in &mut q {
                    *p = base + Point::new(lx.number()?, lx.number()?);
                }
                pts.extend_from_slice(&q);
                cur = q[2];
            }
            'Z' => {
                finish_subpath(&mut pts, start, &mut out)?;
                cur = start;
                if lx.has_number() {
                    return Err(lx.err("numbers after closepath"));
                }
            }
            _ => return Err(ImagingError::UnsupportedCommand(c)),
        }
    }
    finish_subpath(&mut pts, start, &mut out)?;
    Ok(out)
}

/// `#rgb`, `#rrggbb`, `rgb(r,g,b)` or a handful of color names.
pub fn parse_color(s: &str) -> Result<Rgb, ImagingError> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || ImagingError::UnsupportedColor(s.to_string());
    let hex = |h: &str| u8::from_str_radix(h, 16).map(|v| v as f64 / 255.0).map_err(|_| bad());
    if let Some(h) = t.strip_prefix('#') {
        return match h.len() {
            6 => Ok([hex(&h[0..2])?, hex(&h[2..4])?, hex(&h[4..6])?]),
            3 => {
                let d = |i: usize| hex(&h[i..i + 1].repeat(2));
                Ok([d(0)?, d(1)?, d(2)?])
            }
            _ => Err(bad()),
        };
    }
    if let Some(inner) = t.strip_prefix("rgb(").and_then(|r| r.strip_suffix(')')) {
        let v: Vec<f64> = inner
            .split(',')
            .map(|c| c.trim().parse::<f64>().map(|x| (x / 255.0).clamp(0.0, 1.0)))
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        return if v.len() == 3 { Ok([v[0], v[1], v[2]]) } else { Err(bad()) };
    }
    match t.as_str() {
        "black" => Ok([0.0; 3]),
        "white" => Ok([1.0; 3]),
        "red" => Ok([1.0, 0.0, 0.0]),
        "lime" => Ok([0.0, 1.0, 0.0]),
        "blue" => Ok([0.0, 0.0, 1.0]),
        "gray" | "grey" => Ok([128.0 / 255.0; 3]),
        _ => Err(bad()),
    }
}

fn fill_of<'a>(node: roxmltree::Node<'a, '_>) -> Option<&'a str> {
    let from_style = node.attribute("style").and_then(|st| {
        st.split(';').find_map(|decl| {
            let (k, v) = decl.split_once(':')?;
            (k.trim() == "fill").then_some(v.trim())
        })
    });
    from_style.or_else(|| node.attribute("fill"))
}

fn length_attr(v: Option<&str>) -> Option<f64> {
    v.map(|s| s.trim().trim_end_matches("px")).and_then(|s| s.parse().ok())
}

/// Parses an SVG document in the supported profile. Paths with `fill="none"`
/// are skipped.
pub fn parse_svg(text: &str) -> Result<VectorDocument, ImagingError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| ImagingError::Xml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(ImagingError::Xml("root element is not <svg>".into()));
    }
    let view_box: Option<Vec<f64>> = root.attribute("viewBox").map(|vb| {
        vb.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .filter_map(|s| s.parse().ok())
            .collect()
    });
    let view_box = view_box.filter(|v| v.len() == 4 && v[2] > 0.0 && v[3] > 0.0);
    let width = length_attr(root.attribute("width")).or(view_box.as_ref().map(|v| v[2]));
    let height = length_attr(root.attribute("height")).or(view_box.as_ref().map(|v| v[3]));
    let (Some(width), Some(height)) = (width, height) else {
        return Err(ImagingError::Xml("missing width/height and viewBox".into()));
    };
    let (ox, oy, kx, ky) = match &view_box {
        Some(v) => (v[0], v[1], width / v[2], height / v[3]),
        None => (0.0, 0.0, 1.0, 1.0),
    };
    let mut out = VectorDocument::new(width, height);
    for node in root.descendants().filter(|n| n.has_tag_name("path")) {
        let fill = fill_of(node).unwrap_or("black");
        if fill.trim() == "none" {
            continue;
        }
        let color = parse_color(fill)?;
        let d = node.attribute("d").unwrap_or("");
        for b in parse_path_data(d)? {
            let b = b.map_points(|p| Point::new((p.x - ox) * kx, (p.y - oy) * ky));
            out.shapes.push(VectorShape::new(b, color));
        }
    }
    Ok(out)
}

pub fn load_svg(path: impl AsRef<Path>) -> Result<VectorDocument, ImagingError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ImagingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_svg(&text)
}

pub fn hex_color(c: Rgb) -> String {
    let q = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", q(c[0]), q(c[1]), q(c[2]))
}

/// Serializes with one absolute `M … C … Z` path per shape.
pub fn write_svg(doc: &VectorDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = doc.width,
        h = doc.height
    );
    for shape in &doc.shapes {
        let pts = shape.bezigon.points();
        let _ = write!(s, "  <path fill=\"{}\" d=\"M{:.6},{:.6}", hex_color(shape.color), pts[0].x, pts[0].y);
        for seg in shape.bezigon.segments() {
            let _ = write!(s, " C");
            for (k, p) in seg.p[1..].iter().enumerate() {
                let sep = if k == 0 { "" } else { " " };
                let _ = write!(s, "{sep}{:.6},{:.6}", p.x, p.y);
            }
        }
        let _ = writeln!(s, " Z\"/>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn save_svg(doc: &VectorDocument, path: impl AsRef<Path>) -> Result<(), ImagingError> {
    let path = path.as_ref();
    std::fs::write(path, write_svg(doc)).map_err(|source| ImagingError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_segment_path() {
        let bs = parse_path_data("M0,0 C0,0 1,1 1,1 C1,1 0,1 0,0 Z").unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].num_segments(), 2);
        assert_eq!(bs[0].points()[3], Point::new(1.0, 1.0));
    }

    #[test]
    fn relative_lines_become_cubics() {
        let bs = parse_path_data("m1 1 h3 v3 l-3 -3z").unwrap();
        assert_eq!(bs[0].num_segments(), 3);
        assert_eq!(bs[0].points()[1], Point::new(2.0, 1.0));
        assert_eq!(bs[0].points()[3], Point::new(4.0, 1.0));
    }

    #[test]
    fn implicit_lineto_after_moveto_and_compact_numbers() {
        let bs = parse_path_data("M0,0 10,0 10-10.5.5e1,0Z").unwrap();
        assert_eq!(bs[0].num_segments(), 4);
        assert_eq!(bs[0].points()[9], Point::new(5.0, 0.0));
        assert_eq!(bs[0].points()[6], Point::new(10.0, -10.5));
    }

    #[test]
    fn unsupported_commands_are_named() {
        for (d, c) in [("M0 0 A1 1 0 0 1 2 2Z", 'A'), ("M0 0 q1 1 2 2", 'q'), ("M0 0 S1 1 2 2", 'S'), ("M0 0 T2 2", 'T')] {
            match parse_path_data(d) {
                Err(ImagingError::UnsupportedCommand(got)) => assert_eq!(got, c),
                other => panic!("{d}: {other:?}"),
            }
        }
        let msg = parse_path_data("M0 0 A1 1 0 0 1 2 2Z").unwrap_err().to_string();
        assert!(msg.contains("'A'"));
    }

    #[test]
    fn colors() {
        assert_eq!(parse_color("#ff0000").unwrap(), [1.0, 0.0, 0.0]);
        assert_eq!(parse_color("#0f0").unwrap(), [0.0, 1.0, 0.0]);
        assert_eq!(parse_color("rgb(0, 0, 255)").unwrap(), [0.0, 0.0, 1.0]);
        assert!(parse_color("url(#g)").is_err());
    }

    #[test]
    fn document_round_trip() {
        let svg = r##"<svg xmlns="http://www.w3.org/2000/svg" width="64" height="32">
            <path d="M1.25,2 C3,4 5,6 7,8 L 1.25 2 Z" style="fill:#336699"/>
            <path d="M0 0 H 10 V 10 Z" fill="none"/>
        </svg>"##;
        let doc = parse_svg(svg).unwrap();
        assert_eq!(doc.shapes.len(), 1);
        let again = parse_svg(&write_svg(&doc)).unwrap();
        assert_eq!(again.width, 64.0);
        for (a, b) in doc.shapes[0].bezigon.points().iter().zip(again.shapes[0].bezigon.points()) {
            assert!(a.distance(*b) < 1e-6);
        }
        assert_eq!(hex_color(again.shapes[0].color), "#336699");
    }

    #[test]
    fn view_box_scales_to_canvas() {
        let svg = r#"<svg width="100" height="100" viewBox="0 0 10 10"><path d="M1 1 L9 1 L9 9Z"/></svg>"#;
        let doc = parse_svg(svg).unwrap();
        assert_eq!(doc.shapes[0].bezigon.points()[3], Point::new(90.0, 10.0));
    }
}
