//! Deterministic SVG 1.1 figures.
//!
//! Numbers are written with 9 significant digits and attributes in sorted
//! order, so equal input gives byte-identical files. The y axis points up.

use std::collections::BTreeMap;
use std::fmt::Write;

use conway_core::conway::ConwayCircleResult;
use conway_core::{Point2, TangentialPolygon};

use crate::document::RenderOptions;

/// `v` rounded to 9 significant digits, in plain decimal notation.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return "0".to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let rounded: f64 = sci.parse().expect("float");
    let decimals = (8 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Element<'a> {
    name: &'a str,
    attrs: BTreeMap<&'a str, String>,
}

impl<'a> Element<'a> {
    fn new(name: &'a str) -> Self {
        Element {
            name,
            attrs: BTreeMap::new(),
        }
    }

    fn attr(mut self, key: &'a str, value: impl Into<String>) -> Self {
        self.attrs.insert(key, value.into());
        self
    }

    fn num(self, key: &'a str, value: f64) -> Self {
        self.attr(key, fmt_num(value))
    }

    fn open_tag(&self) -> String {
        let mut s = format!("<{}", self.name);
        for (k, v) in &self.attrs {
            let _ = write!(s, " {k}=\"{}\"", escape(v));
        }
        s
    }

    fn write_empty(&self, out: &mut String, indent: usize) {
        let _ = writeln!(out, "{}{}/>", "  ".repeat(indent), self.open_tag());
    }

    fn write_text(&self, out: &mut String, indent: usize, text: &str) {
        let _ = writeln!(
            out,
            "{}{}>{}</{}>",
            "  ".repeat(indent),
            self.open_tag(),
            escape(text),
            self.name
        );
    }
}

struct Bounds {
    min: Point2,
    max: Point2,
}

impl Bounds {
    fn new() -> Self {
        Bounds {
            min: Point2::new(f64::INFINITY, f64::INFINITY),
            max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn add(&mut self, p: Point2) {
        self.min = Point2::new(self.min.x.min(p.x), self.min.y.min(p.y));
        self.max = Point2::new(self.max.x.max(p.x), self.max.y.max(p.y));
    }

    fn add_circle(&mut self, c: Point2, r: f64) {
        self.add(Point2::new(c.x - r, c.y - r));
        self.add(Point2::new(c.x + r, c.y + r));
    }
}

/// Draws the polygon, the extended sides, the incircle, the Conway circle and
/// one marker per endpoint (`class="endpoint"`).
pub fn render(
    poly: &TangentialPolygon,
    result: &ConwayCircleResult,
    labels: &[String],
    options: &RenderOptions,
) -> String {
    let mut bounds = Bounds::new();
    for &p in poly.vertices().iter().chain(&result.endpoints) {
        bounds.add(p);
    }
    bounds.add_circle(poly.incenter(), poly.inradius());
    bounds.add_circle(result.circle.center, result.circle.radius);

    let extent = (bounds.max.x - bounds.min.x).max(bounds.max.y - bounds.min.y);
    let margin = 0.05 * extent;
    let (x0, y0) = (bounds.min.x - margin, -bounds.max.y - margin);
    let (w, h) = (
        bounds.max.x - bounds.min.x + 2.0 * margin,
        bounds.max.y - bounds.min.y + 2.0 * margin,
    );
    let px = w / options.size;
    let stroke = options.stroke * px;
    let flip = |p: Point2| (p.x, -p.y);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let root = Element::new("svg")
        .attr("xmlns", "http://www.w3.org/2000/svg")
        .attr("version", "1.1")
        .attr(
            "viewBox",
            format!(
                "{} {} {} {}",
                fmt_num(x0),
                fmt_num(y0),
                fmt_num(w),
                fmt_num(h)
            ),
        )
        .num("width", options.size)
        .num("height", (options.size * h / w).round());
    let _ = writeln!(out, "{}>", root.open_tag());
    Element::new("title").write_text(
        &mut out,
        1,
        &format!("Conway circle of a tangential {}-gon", poly.n()),
    );

    let line = |class: &'static str, a: Point2, b: Point2| {
        let (ax, ay) = flip(a);
        let (bx, by) = flip(b);
        Element::new("line")
            .attr("class", class)
            .num("x1", ax)
            .num("y1", ay)
            .num("x2", bx)
            .num("y2", by)
    };
    let circle = |class: &'static str, c: Point2, r: f64| {
        let (cx, cy) = flip(c);
        Element::new("circle")
            .attr("class", class)
            .num("cx", cx)
            .num("cy", cy)
            .num("r", r)
    };

    let _ = writeln!(
        out,
        "  {}>",
        Element::new("g").attr("class", "extensions").open_tag()
    );
    let v = poly.vertices();
    let n = poly.n();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for (vertex, end) in [
            (a, result.endpoints[2 * i]),
            (b, result.endpoints[2 * i + 1]),
        ] {
            line("extension", vertex, end)
                .attr("stroke", "#7f7f7f")
                .attr(
                    "stroke-dasharray",
                    format!("{} {}", fmt_num(4.0 * stroke), fmt_num(2.0 * stroke)),
                )
                .num("stroke-width", stroke)
                .write_empty(&mut out, 2);
        }
    }
    out.push_str("  </g>\n");

    let points: Vec<String> = v
        .iter()
        .map(|&p| {
            let (x, y) = flip(p);
            format!("{},{}", fmt_num(x), fmt_num(y))
        })
        .collect();
    Element::new("polygon")
        .attr("class", "polygon")
        .attr("fill", "none")
        .attr("points", points.join(" "))
        .attr("stroke", "#000000")
        .attr("stroke-linejoin", "round")
        .num("stroke-width", stroke)
        .write_empty(&mut out, 1);

    circle("incircle", poly.incenter(), poly.inradius())
        .attr("fill", "none")
        .attr("stroke", "#1f77b4")
        .num("stroke-width", stroke)
        .write_empty(&mut out, 1);
    circle("conway-circle", result.circle.center, result.circle.radius)
        .attr("fill", "none")
        .attr("stroke", "#d62728")
        .num("stroke-width", stroke)
        .write_empty(&mut out, 1);
    circle("incenter", poly.incenter(), 2.0 * stroke)
        .attr("fill", "#1f77b4")
        .write_empty(&mut out, 1);

    let _ = writeln!(
        out,
        "  {}>",
        Element::new("g").attr("class", "endpoints").open_tag()
    );
    for &p in &result.endpoints {
        circle("endpoint", p, 3.0 * stroke)
            .attr("fill", "#d62728")
            .write_empty(&mut out, 2);
    }
    out.push_str("  </g>\n");

    if options.labels {
        let font = 14.0 * px;
        let _ = writeln!(
            out,
            "  {}>",
            Element::new("g").attr("class", "labels").open_tag()
        );
        for (p, label) in v.iter().zip(labels) {
            let away = *p - poly.incenter();
            let at = *p + away * (font / away.norm().max(f64::MIN_POSITIVE));
            let (x, y) = flip(at);
            Element::new("text")
                .attr("class", "label")
                .attr("dominant-baseline", "middle")
                .attr("font-family", "sans-serif")
                .num("font-size", font)
                .attr("text-anchor", "middle")
                .num("x", x)
                .num("y", y)
                .write_text(&mut out, 2, label);
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}
