//! JSON documents read and written by the command-line tool.

use conway_core::conway::{self, ExtensionSpec};
use conway_core::tangential::{self, SideLengthSpec, TangentialPolygon};
use conway_core::{Error, Point2, Result};
use serde::{Deserialize, Serialize};

/// A polygon given either by its vertices or by its side lengths.
///
/// Unknown fields are ignored, so the output of `build` reads back as a
/// polygon through its `vertices`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PolygonDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<f64>>,
    /// Tangent length at `V_1`; only for an even number of sides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Allow negative tangent lengths when synthesizing from sides.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub relaxed: bool,
}

impl PolygonDocument {
    pub fn from_sides(sides: Vec<f64>, h0: Option<f64>) -> Self {
        PolygonDocument {
            sides: Some(sides),
            h0,
            ..Default::default()
        }
    }

    pub fn from_vertices(vertices: Vec<[f64; 2]>) -> Self {
        PolygonDocument {
            vertices: Some(vertices),
            ..Default::default()
        }
    }

    pub fn n(&self) -> usize {
        match (&self.vertices, &self.sides) {
            (Some(v), _) => v.len(),
            (_, Some(s)) => s.len(),
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.vertices, &self.sides) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(Error::InvalidConfig(
                    "a polygon needs exactly one of `vertices` or `sides`".to_string(),
                ))
            }
            (Some(_), None) if self.h0.is_some() => {
                return Err(Error::InvalidConfig(
                    "`h0` only applies to a polygon given by sides".to_string(),
                ))
            }
            (Some(_), None) if self.relaxed => {
                return Err(Error::InvalidConfig(
                    "`relaxed` only applies to a polygon given by sides".to_string(),
                ))
            }
            (None, Some(s)) if s.len() % 2 == 1 && self.h0.is_some() => {
                return Err(Error::InvalidConfig(
                    "`h0` only applies to an even number of sides".to_string(),
                ))
            }
            _ => {}
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n() {
                return Err(Error::InvalidConfig(format!(
                    "{} labels for {} vertices",
                    labels.len(),
                    self.n()
                )));
            }
        }
        Ok(())
    }

    pub fn side_length_spec(&self) -> Option<SideLengthSpec> {
        self.sides.as_ref().map(|lengths| SideLengthSpec {
            lengths: lengths.clone(),
            h0: self.h0,
        })
    }

    pub fn build(&self) -> Result<TangentialPolygon> {
        self.validate()?;
        if let Some(vertices) = &self.vertices {
            let points: Vec<Point2> = vertices.iter().map(|&p| p.into()).collect();
            return tangential::validate_tangential(&points);
        }
        let spec = self.side_length_spec().expect("validated");
        if self.relaxed {
            tangential::relaxed_polygon_from_sides(&spec)
        } else {
            tangential::polygon_from_sides(&spec)
        }
    }

    /// Given labels, or `A, B, C` for a triangle and `V1 … Vn` otherwise.
    pub fn labels_or_default(&self) -> Vec<String> {
        if let Some(labels) = &self.labels {
            return labels.clone();
        }
        let n = self.n();
        if n == 3 {
            ["A", "B", "C"].map(String::from).to_vec()
        } else {
            (1..=n).map(|i| format!("V{i}")).collect()
        }
    }
}

/// Which extension family to apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Selector {
    /// Each side extended by the opposite side (triangles).
    Conway,
    Theorem1 {
        x_a: f64,
    },
    Corollary1,
    Corollary2,
    Corollary3,
    Theorem2 {
        x_1: f64,
    },
    Theorem3,
    Corollary4 {
        d0: f64,
    },
}

impl Selector {
    /// The selector used when a scene names neither a selector nor extensions.
    pub fn default_for(n: usize) -> Selector {
        match n {
            3 => Selector::Conway,
            n if n % 2 == 1 => Selector::Corollary2,
            _ => Selector::Theorem3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderOptions {
    /// Width of the image in pixels.
    pub size: f64,
    /// Line width in pixels.
    pub stroke: f64,
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 800.0,
            stroke: 2.0,
            labels: true,
        }
    }
}

/// A polygon with the extensions to apply and how to draw the result.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SceneDocument {
    pub polygon: PolygonDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<Selector>,
    /// Explicit extensions: `n` vertex values or `2n` per-end values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extensions: Option<Vec<f64>>,
    #[serde(default)]
    pub render: RenderOptions,
}

/// Contents of an `--input` file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum InputDocument {
    Scene(SceneDocument),
    Polygon(PolygonDocument),
}

impl InputDocument {
    pub fn into_scene(self) -> SceneDocument {
        match self {
            InputDocument::Scene(scene) => scene,
            InputDocument::Polygon(polygon) => SceneDocument {
                polygon,
                ..Default::default()
            },
        }
    }
}

/// A scene turned into geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScene {
    pub polygon: TangentialPolygon,
    pub spec: ExtensionSpec,
    pub labels: Vec<String>,
}

fn corollary3_from_sides(lambda: &[f64]) -> Result<ExtensionSpec> {
    if lambda.len() != 5 {
        return Err(Error::WrongArity(format!(
            "corollary3 needs a pentagon, got {} sides",
            lambda.len()
        )));
    }
    // sides AB, BC, CD, DE, EA are d, e, a, b, c
    let x = conway::corollary3_extensions(lambda[2], lambda[3], lambda[4], lambda[0], lambda[1]);
    ExtensionSpec::from_vertex_values(&x)
}

impl SceneDocument {
    pub fn resolve(&self) -> Result<ResolvedScene> {
        self.polygon.validate()?;
        if self.selector.is_some() && self.extensions.is_some() {
            return Err(Error::InvalidConfig(
                "give either a selector or explicit extensions, not both".to_string(),
            ));
        }
        let labels = self.polygon.labels_or_default();
        let selector = match (&self.extensions, self.selector) {
            (Some(values), _) => {
                let polygon = self.polygon.build()?;
                let spec = explicit_spec(values, polygon.n())?;
                return Ok(ResolvedScene {
                    polygon,
                    spec,
                    labels,
                });
            }
            (None, Some(selector)) => selector,
            (None, None) => Selector::default_for(self.polygon.n()),
        };
        if let Selector::Corollary4 { d0 } = selector {
            let polygon = self.corollary4_polygon(d0)?;
            return Ok(ResolvedScene {
                spec: conway::theorem3_even_extensions(&polygon)?,
                polygon,
                labels,
            });
        }
        let polygon = self.polygon.build()?;
        let spec = match selector {
            Selector::Conway => conway::conway_extensions_triangle(&polygon)?,
            Selector::Theorem1 { x_a } => conway::theorem1_family(&polygon, x_a)?,
            Selector::Corollary1 => conway::corollary1_extensions(&polygon)?,
            Selector::Corollary2 => conway::corollary2_extensions(&polygon)?,
            Selector::Corollary3 => corollary3_from_sides(polygon.side_lengths())?,
            Selector::Theorem2 { x_1 } => conway::theorem2_family(&polygon, x_1)?,
            Selector::Theorem3 => conway::theorem3_even_extensions(&polygon)?,
            Selector::Corollary4 { .. } => unreachable!("handled above"),
        };
        Ok(ResolvedScene {
            polygon,
            spec,
            labels,
        })
    }

    fn corollary4_polygon(&self, d0: f64) -> Result<TangentialPolygon> {
        let doc = &self.polygon;
        let Some(sides) = &doc.sides else {
            return Err(Error::InvalidConfig(
                "corollary4 needs the quadrilateral as side lengths".to_string(),
            ));
        };
        let &[a, b, c, d] = sides.as_slice() else {
            return Err(Error::WrongArity(format!(
                "corollary4 needs a quadrilateral, got {} sides",
                sides.len()
            )));
        };
        if doc.relaxed {
            return Err(Error::InvalidConfig(
                "corollary4 does not take `relaxed`".to_string(),
            ));
        }
        if let Some(h0) = doc.h0 {
            if (h0 - (d - d0)).abs() > 1e-12 * d.abs().max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "h0 = {h0} contradicts d0 = {d0}, which fixes h0 = d - d0 = {}",
                    d - d0
                )));
            }
        }
        Ok(conway::corollary4_quadrilateral(a, b, c, d, d0)?.polygon)
    }
}

fn explicit_spec(values: &[f64], n: usize) -> Result<ExtensionSpec> {
    if values.len() == n {
        ExtensionSpec::from_vertex_values(values)
    } else if values.len() == 2 * n {
        ExtensionSpec::from_per_end(values.to_vec())
    } else {
        Err(Error::ArityMismatch {
            expected: 2 * n,
            got: values.len(),
        })
    }
}

/// What `build` prints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuiltPolygon {
    pub n: usize,
    pub vertices: Vec<[f64; 2]>,
    pub incenter: [f64; 2],
    pub inradius: f64,
    pub side_lengths: Vec<f64>,
    pub tangent_lengths: Vec<f64>,
    pub tangency_points: Vec<[f64; 2]>,
    pub perimeter: f64,
    pub convex: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn xy(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

impl BuiltPolygon {
    pub fn new(poly: &TangentialPolygon, labels: Option<Vec<String>>) -> Self {
        BuiltPolygon {
            n: poly.n(),
            vertices: poly.vertices().iter().copied().map(xy).collect(),
            incenter: xy(poly.incenter()),
            inradius: poly.inradius(),
            side_lengths: poly.side_lengths().to_vec(),
            tangent_lengths: poly.tangent_lengths().to_vec(),
            tangency_points: poly.tangency_points().iter().copied().map(xy).collect(),
            perimeter: poly.perimeter(),
            convex: poly.is_convex(),
            labels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_json_shape() {
        let s: Selector = serde_json::from_str(r#"{"kind":"theorem1","x_a":2.5}"#).unwrap();
        assert_eq!(s, Selector::Theorem1 { x_a: 2.5 });
        assert_eq!(
            serde_json::to_string(&Selector::Corollary4 { d0: 1.0 }).unwrap(),
            r#"{"kind":"corollary4","d0":1.0}"#
        );
    }

    #[test]
    fn input_document_accepts_both_shapes() {
        let scene: InputDocument =
            serde_json::from_str(r#"{"polygon":{"sides":[3,4,5]},"selector":{"kind":"conway"}}"#)
                .unwrap();
        assert!(matches!(scene, InputDocument::Scene(_)));
        let poly: InputDocument = serde_json::from_str(r#"{"sides":[3,4,5]}"#).unwrap();
        assert_eq!(
            poly.into_scene().polygon,
            PolygonDocument::from_sides(vec![3.0, 4.0, 5.0], None)
        );
    }

    #[test]
    fn polygon_document_rules() {
        let both = PolygonDocument {
            vertices: Some(vec![[0.0, 0.0]]),
            sides: Some(vec![1.0]),
            ..Default::default()
        };
        assert_eq!(both.validate().unwrap_err().kind(), "invalid_config");
        assert!(PolygonDocument::default().validate().is_err());
        let odd_h0 = PolygonDocument::from_sides(vec![3.0, 4.0, 5.0], Some(1.0));
        assert!(odd_h0.validate().is_err());
        let mut labels = PolygonDocument::from_sides(vec![3.0, 4.0, 5.0], None);
        labels.labels = Some(vec!["P".into()]);
        assert!(labels.validate().is_err());
    }

    #[test]
    fn default_selectors_follow_parity() {
        assert_eq!(Selector::default_for(3), Selector::Conway);
        assert_eq!(Selector::default_for(7), Selector::Corollary2);
        assert_eq!(Selector::default_for(4), Selector::Theorem3);
    }

    #[test]
    fn corollary3_selector_matches_corollary2() {
        let scene = SceneDocument {
            polygon: PolygonDocument::from_sides(vec![5.0, 6.0, 7.0, 6.0, 6.0], None),
            selector: Some(Selector::Corollary3),
            ..Default::default()
        };
        let resolved = scene.resolve().unwrap();
        let general = conway::corollary2_extensions(&resolved.polygon).unwrap();
        for (a, b) in resolved.spec.per_end().iter().zip(general.per_end()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_extensions_take_vertex_or_end_values() {
        let mut scene = SceneDocument {
            polygon: PolygonDocument::from_sides(vec![3.0, 4.0, 5.0], None),
            extensions: Some(vec![4.0, 5.0, 3.0]),
            ..Default::default()
        };
        let by_vertex = scene.resolve().unwrap().spec;
        scene.extensions = Some(by_vertex.per_end().to_vec());
        assert_eq!(scene.resolve().unwrap().spec, by_vertex);
        scene.extensions = Some(vec![1.0; 4]);
        assert_eq!(scene.resolve().unwrap_err().kind(), "arity_mismatch");
    }

    #[test]
    fn corollary4_rejects_conflicting_h0() {
        let scene = SceneDocument {
            polygon: PolygonDocument::from_sides(vec![2.0; 4], Some(0.5)),
            selector: Some(Selector::Corollary4 { d0: 1.0 }),
            ..Default::default()
        };
        assert_eq!(scene.resolve().unwrap_err().kind(), "invalid_config");
    }
}
