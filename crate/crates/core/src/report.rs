//! Serializable reports. Rationals are rendered as `p/q` strings.

use serde::Serialize;
use serde_json::Value;

use crate::caps::Caps;
use crate::covering::{CutCovering, FlowCovering};
use crate::cut;
use crate::error::Result;
use crate::graph::{GraphJson, Multigraph, OrientedSubgraph};
use crate::orient::{self, OrientationPoset};
use crate::poset::GradedPoset;
use crate::rational::{self, Q};
use crate::voronoi::{self, FacePoset, LatticeQuotient};

const DECIMALS: usize = 6;

fn qs(x: &Q) -> String {
    rational::to_string(x)
}

fn keys(ds: &[OrientedSubgraph]) -> Vec<String> {
    ds.iter().map(OrientedSubgraph::key).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetReport {
    pub side: &'static str,
    pub size: usize,
    pub grade_counts: Vec<usize>,
    pub poset: GradedPoset,
}

impl PosetReport {
    pub fn of_orientations(side: &'static str, p: &OrientationPoset) -> Self {
        PosetReport {
            side,
            size: p.poset.len(),
            grade_counts: p.poset.grade_counts(),
            poset: p.poset.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub side: &'static str,
    pub f_vector: Vec<usize>,
    /// Vertex edge vectors with the full orientation each comes from.
    pub vertices: Vec<(String, Vec<String>)>,
    /// Face dimension and the orientation it was built from.
    pub faces: Vec<(String, usize)>,
    pub poset: GradedPoset,
}

impl CellReport {
    pub fn new(side: &'static str, f: &FacePoset) -> Self {
        CellReport {
            side,
            f_vector: f.f_vector(),
            vertices: f
                .vertices
                .iter()
                .map(|v| (v.orientation.key(), v.edge.to_strings()))
                .collect(),
            faces: f.faces.iter().map(|x| (x.orientation.key(), x.dim)).collect(),
            poset: f.poset.clone(),
        }
    }
}

/// A closed form compared with the computed value.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedForm {
    pub formula: &'static str,
    pub value: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationRow {
    pub orientation: String,
    pub vertex: Vec<String>,
    pub q: String,
    pub energy: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub side: &'static str,
    pub value: String,
    pub value_decimal: String,
    pub oracle: Option<String>,
    pub matches_oracle: bool,
    pub lower_bound: bool,
    pub identities_hold: bool,
    pub argmax: Vec<String>,
    /// Published closed forms that are checked but not trusted.
    pub closed_forms: Vec<ClosedForm>,
    pub closed_form_discrepancy: bool,
    pub orientations: Vec<OrientationRow>,
}

impl CoveringReport {
    pub fn flow(c: &FlowCovering) -> Self {
        let mut forms = Vec::new();
        if let Some(p) = &c.closed_formula_value {
            forms.push(ClosedForm {
                formula: "eps/2 - <f,Lf>/2",
                value: qs(p),
                agrees: *p == c.value,
            });
        }
        if let Some(p) = &c.eulerian_closed_form {
            forms.push(ClosedForm {
                formula: "|E|/2 (Eulerian)",
                value: qs(p),
                agrees: *p == c.value,
            });
        }
        CoveringReport {
            side: "flow",
            value: qs(&c.value),
            value_decimal: rational::to_decimal(&c.value, DECIMALS),
            oracle: c.oracle.as_ref().map(qs),
            matches_oracle: c.matches_oracle(),
            lower_bound: c.lower_bound,
            identities_hold: c.identities_hold(),
            argmax: keys(&c.argmax),
            closed_forms: forms,
            closed_form_discrepancy: c.closed_form_discrepancy(),
            orientations: c
                .per_orientation
                .iter()
                .map(|o| OrientationRow {
                    orientation: o.orientation.key(),
                    vertex: o.vertex.to_strings(),
                    q: qs(&o.q),
                    energy: qs(&o.energy),
                })
                .collect(),
        }
    }

    pub fn cut(c: &CutCovering) -> Self {
        let forms = c
            .bipartite_closed_form
            .iter()
            .map(|p| ClosedForm {
                formula: "|E|/2 (bipartite)",
                value: qs(p),
                agrees: *p == c.value,
            })
            .collect();
        CoveringReport {
            side: "cut",
            value: qs(&c.value),
            value_decimal: rational::to_decimal(&c.value, DECIMALS),
            oracle: c.oracle.as_ref().map(qs),
            matches_oracle: c.matches_oracle(),
            lower_bound: false,
            identities_hold: c.identities_hold(),
            argmax: keys(&c.argmax),
            closed_forms: forms,
            closed_form_discrepancy: c.closed_form_discrepancy(),
            orientations: c
                .per_orientation
                .iter()
                .map(|o| OrientationRow {
                    orientation: o.orientation.key(),
                    vertex: o.vertex.to_strings(),
                    q: qs(&o.q),
                    energy: qs(&o.energy),
                })
                .collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.matches_oracle && self.identities_hold && !self.lower_bound
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub side: &'static str,
    pub face_classes: Vec<usize>,
    pub orientation_classes: Vec<usize>,
    pub isomorphic: bool,
    pub phi_respects_classes: bool,
    pub reversal_rule: bool,
    pub passed: bool,
    pub classes: Vec<Vec<String>>,
}

impl QuotientReport {
    pub fn new(q: &LatticeQuotient, elements: &[OrientedSubgraph]) -> Self {
        QuotientReport {
            side: q.side,
            face_classes: q.class_counts(),
            orientation_classes: q.orientations.poset.grade_counts(),
            isomorphic: q.isomorphic,
            phi_respects_classes: q.phi_respects_classes,
            reversal_rule: q.reversal_rule,
            passed: q.passed(),
            classes: q
                .orientations
                .members
                .iter()
                .map(|m| m.iter().map(|&i| elements[i].key()).collect())
                .collect(),
        }
    }
}

/// Everything needed to audit a failed face-poset check.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleDump {
    pub side: &'static str,
    pub graph: GraphJson,
    pub face_lattice: GradedPoset,
    pub orientation_poset: GradedPoset,
    /// First face whose image under `phi` is missing, has the wrong grade,
    /// or breaks a cover relation.
    pub first_mismatch: Option<String>,
}

fn first_mismatch(lattice: &GradedPoset, dims: &[usize], phi: &[OrientedSubgraph], target: &GradedPoset) -> Option<String> {
    let image: Vec<Option<usize>> = phi.iter().map(|d| target.index_of(&d.key())).collect();
    for (i, d) in phi.iter().enumerate() {
        match image[i] {
            None => return Some(format!("face {} -> {} (not an orientation)", lattice.keys()[i], d.key())),
            Some(j) if target.grades()[j] != dims[i] as i64 => {
                return Some(format!(
                    "face {} of dimension {} -> {} of grade {}",
                    lattice.keys()[i],
                    dims[i],
                    d.key(),
                    target.grades()[j]
                ))
            }
            Some(_) => {}
        }
    }
    for &(a, b) in lattice.covers() {
        let (x, y) = (image[a]?, image[b]?);
        if !target.up(x).contains(&y) {
            return Some(format!(
                "cover {} < {} maps to {} , {}",
                lattice.keys()[a],
                lattice.keys()[b],
                phi[a].key(),
                phi[b].key()
            ));
        }
    }
    None
}

pub fn flow_dump(g: &Multigraph, caps: &Caps) -> Result<CounterexampleDump> {
    let (lattice, phi, _) = voronoi::flow_face_lattice_geometric(g, caps)?;
    let sc = orient::enumerate_sc(g, caps)?;
    let dims: Vec<usize> = lattice.faces.iter().map(|f| f.dim).collect();
    Ok(CounterexampleDump {
        side: "flow",
        graph: g.to_json(),
        first_mismatch: first_mismatch(&lattice.poset, &dims, &phi, &sc.poset),
        face_lattice: lattice.poset,
        orientation_poset: sc.poset,
    })
}

pub fn cut_dump(g: &Multigraph, caps: &Caps) -> Result<CounterexampleDump> {
    let (lattice, phi, _) = cut::cut_face_lattice_geometric(g, caps)?;
    let cac = orient::enumerate_cac(g, caps)?;
    let dims: Vec<usize> = lattice.faces.iter().map(|f| f.dim).collect();
    Ok(CounterexampleDump {
        side: "cut",
        graph: g.to_json(),
        first_mismatch: first_mismatch(&lattice.poset, &dims, &phi, &cac.poset),
        face_lattice: lattice.poset,
        orientation_poset: cac.poset,
    })
}

/// Indented `key: value` rendering of a JSON value; object keys keep the
/// order of the value.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(x, indent + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering;
    use crate::examples;

    #[test]
    fn covering_report_flags_closed_forms() {
        let caps = Caps::default();
        let r = CoveringReport::flow(&covering::covering_number_flow(&examples::cycle(4), &caps).unwrap());
        assert_eq!(r.value, "1/1");
        assert!(r.passed());
        assert!(r.closed_form_discrepancy);
        assert!(r.closed_forms.iter().any(|c| c.formula.starts_with("|E|/2") && c.value == "2/1"));
        let c = CoveringReport::cut(&covering::covering_number_cut(&examples::complete(2), &caps).unwrap());
        assert_eq!((c.value.as_str(), c.value_decimal.as_str()), ("1/4", "0.250000"));
        assert!(c.closed_form_discrepancy);
    }

    #[test]
    fn dumps_have_no_mismatch_on_valid_instances() {
        let caps = Caps::default();
        let g = examples::theta();
        assert_eq!(flow_dump(&g, &caps).unwrap().first_mismatch, None);
        assert_eq!(cut_dump(&examples::cycle(3), &caps).unwrap().first_mismatch, None);
    }

    #[test]
    fn first_mismatch_reports_bad_grade() {
        let caps = Caps::default();
        let g = examples::theta();
        let (lattice, phi, _) = voronoi::flow_face_lattice_geometric(&g, &caps).unwrap();
        let sc = orient::enumerate_sc(&g, &caps).unwrap();
        let mut dims: Vec<usize> = lattice.faces.iter().map(|f| f.dim).collect();
        dims[0] += 1;
        let m = first_mismatch(&lattice.poset, &dims, &phi, &sc.poset).unwrap();
        assert!(m.contains("of dimension"));
    }

    #[test]
    fn text_rendering() {
        let v = serde_json::json!({"a": 1, "b": ["x", "y"], "c": {"d": true}, "e": [{"f": null}]});
        assert_eq!(to_text(&v), "a: 1\nb: [x, y]\nc:\n  d: true\ne:\n  -\n    f: -\n");
    }
}
