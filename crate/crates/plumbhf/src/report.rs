//! Machine-readable reports and the pipeline driver behind the CLI.
//!
//! Every rational is emitted as an exact string, `p/q` or plain `p`
//! when the denominator is one. Field order and every collection order
//! are fixed, so identical inputs give byte-identical JSON.

use num::{BigInt, BigRational, One, Signed};
use serde::Serialize;

use crate::contact::{
    chern_from_rotations, locate_invariant, planar_obstruction, sigma, SteinData,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{intersection_form, validate, IntersectionForm, PlumbingGraph, Support};
use crate::lattice::initial_candidate_count;
use crate::paths::{correction_term, good_vectors, GoodVectorSet};
use crate::umodel::{HFPlusModule, ModelCache, RelationSearch};

pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub const DEFAULT_DEPTH_CAP: u32 = 16;

#[derive(Debug, Clone, Serialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub weights: Vec<i32>,
    pub edges: Vec<(usize, usize)>,
    pub is_tree: bool,
    pub negative_definite: bool,
    pub determinant: String,
    pub bad_vertices: Vec<usize>,
    pub bad_vertex_count: usize,
    pub support: String,
}

pub fn graph_json(graph: &PlumbingGraph) -> GraphJson {
    let report = validate(graph);
    GraphJson {
        vertices: graph.vertex_count(),
        weights: graph.weights().to_vec(),
        edges: graph.edges().to_vec(),
        is_tree: report.is_tree,
        negative_definite: report.negative_definite,
        determinant: report.determinant.to_string(),
        bad_vertex_count: report.bad_vertices.len(),
        bad_vertices: report.bad_vertices,
        support: report.support.to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandJson {
    pub length: u32,
    pub bottom: String,
    pub top: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleJson {
    pub tower_bottom: String,
    pub reduced: Vec<SummandJson>,
    pub notation: String,
}

fn module_json(module: &HFPlusModule) -> ModuleJson {
    ModuleJson {
        tower_bottom: rational_string(&module.tower_bottom),
        reduced: module
            .reduced
            .iter()
            .map(|s| SummandJson {
                length: s.length,
                bottom: rational_string(&s.bottom),
                top: rational_string(&s.top()),
            })
            .collect(),
        notation: module.notation(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberJson {
    pub id: usize,
    pub pairings: Vec<i32>,
    pub degree: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationJson {
    pub lhs_vector: usize,
    pub lhs_exponent: u32,
    pub rhs_vector: usize,
    pub rhs_exponent: u32,
    pub minimal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpincClassJson {
    pub id: usize,
    pub members: Vec<MemberJson>,
    pub correction_term: String,
    pub hf_plus: Option<ModuleJson>,
    pub relations: Vec<RelationJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HfDiagnosticsJson {
    pub unstabilized_classes: Vec<usize>,
    pub undecided_pairs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HfJson {
    pub graph: GraphJson,
    pub depth_used: u32,
    pub depth_cap: u32,
    pub stabilized: bool,
    pub initial_candidates: String,
    pub good_vector_count: usize,
    pub spinc_class_count: usize,
    pub classes: Vec<SpincClassJson>,
    pub diagnostics: HfDiagnosticsJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanarJson {
    pub verdict: String,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactJson {
    pub graph: GraphJson,
    pub rotations: Vec<i32>,
    pub chern: Vec<i32>,
    pub good_vector: usize,
    pub good_vector_pairings: Vec<i32>,
    pub spinc_class: usize,
    pub d3: String,
    pub grading: String,
    pub correction_term: String,
    pub planar: PlanarJson,
    pub sigma: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyJson {
    pub n: u32,
    pub determinant_is_unit: bool,
    pub kernel_generators_match: bool,
    pub kernel_generator_count: usize,
    pub contact: ContactJson,
}

/// Parsed graph with its validation, form, and good vectors; the entry
/// point for the report builders.
pub struct Analyzer {
    pub graph: PlumbingGraph,
    pub form: IntersectionForm,
    pub support: Support,
    pub good: GoodVectorSet,
}

impl Analyzer {
    pub fn new(graph: PlumbingGraph) -> Result<Self> {
        let report = validate(&graph);
        match report.support {
            Support::Full | Support::EvenDegreesOnly => {}
            Support::Unsupported => {
                return Err(Error::Unsupported(if report.negative_definite {
                    "more than two bad vertices".into()
                } else {
                    "intersection form is not negative definite".into()
                }))
            }
        }
        let form = intersection_form(&graph)?;
        let good = good_vectors(&form)?;
        Ok(Analyzer {
            graph,
            form,
            support: report.support,
            good,
        })
    }

    pub fn hf_report(&self, depth_cap: u32) -> Result<HfJson> {
        let mut cache = ModelCache::new(&self.good, &self.form, depth_cap);
        let mut depth_used = 0;
        let mut modules: Vec<Option<HFPlusModule>> = Vec::new();
        let mut unstabilized = Vec::new();
        for class in 0..self.good.classes.len() {
            match cache.assemble(class) {
                Ok((depth, module)) => {
                    depth_used = depth_used.max(depth);
                    modules.push(Some(module));
                }
                Err(Error::NotStabilized { .. }) => {
                    unstabilized.push(class);
                    modules.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        let search = cache.find_relations()?;
        depth_used = depth_used.max(cache.max_built_depth());

        let classes = self.class_reports(&modules, &search);
        let stabilized = unstabilized.is_empty() && search.is_complete();
        Ok(HfJson {
            graph: graph_json(&self.graph),
            depth_used,
            depth_cap,
            stabilized,
            initial_candidates: initial_candidate_count(&self.form).to_string(),
            good_vector_count: self.good.len(),
            spinc_class_count: self.good.classes.len(),
            classes,
            diagnostics: HfDiagnosticsJson {
                unstabilized_classes: unstabilized,
                undecided_pairs: search
                    .undecided
                    .iter()
                    .map(|(a, b, msg)| format!("vectors {a} and {b}: {msg}"))
                    .collect(),
            },
        })
    }

    fn class_reports(
        &self,
        modules: &[Option<HFPlusModule>],
        search: &RelationSearch,
    ) -> Vec<SpincClassJson> {
        self.good
            .classes
            .iter()
            .enumerate()
            .map(|(ci, class)| {
                let members = class
                    .member_ids
                    .iter()
                    .map(|&i| MemberJson {
                        id: i,
                        pairings: self.good.vectors[i].pairings().to_vec(),
                        degree: rational_string(&self.good.degrees[i]),
                    })
                    .collect();
                let relations = search
                    .relations
                    .iter()
                    .filter(|r| self.good.spinc_of[r.lhs.0] == ci)
                    .map(|r| RelationJson {
                        lhs_vector: r.lhs.0,
                        lhs_exponent: r.lhs.1,
                        rhs_vector: r.rhs.0,
                        rhs_exponent: r.rhs.1,
                        minimal: r.minimal,
                    })
                    .collect();
                SpincClassJson {
                    id: ci,
                    members,
                    correction_term: rational_string(&correction_term(&self.good, ci)),
                    hf_plus: modules[ci].as_ref().map(module_json),
                    relations,
                }
            })
            .collect()
    }

    pub fn contact_report(&self, rotations: &[i32], depth_cap: u32) -> Result<ContactJson> {
        if self.support != Support::Full {
            return Err(Error::Unsupported(
                "contact invariants refuse to run on graphs with two bad vertices: \
                 only even-degree generators are modelled"
                    .into(),
            ));
        }
        let stein = SteinData {
            rotations: rotations.to_vec(),
        };
        let chern = chern_from_rotations(&stein, &self.graph)?;
        let located = locate_invariant(&chern, &self.good, &self.form)?;
        let class = self.good.spinc_of[located.good_id];
        let planar = planar_obstruction(&located, &self.good, self.support)?;
        let mut cache = ModelCache::new(&self.good, &self.form, depth_cap);
        let sigma_value = sigma(&mut cache, &located)?;
        Ok(ContactJson {
            graph: graph_json(&self.graph),
            rotations: rotations.to_vec(),
            chern: chern.pairings().to_vec(),
            good_vector: located.good_id,
            good_vector_pairings: self.good.vectors[located.good_id].pairings().to_vec(),
            spinc_class: class,
            d3: rational_string(&located.d3),
            grading: rational_string(&located.grading),
            correction_term: rational_string(&correction_term(&self.good, class)),
            planar: PlanarJson {
                verdict: planar.verdict.to_string(),
                reason: planar.reason.map(|r| r.to_string()),
            },
            sigma: sigma_value.to_string(),
        })
    }
}

pub fn family_report(n: u32, depth_cap: u32) -> Result<FamilyJson> {
    let graph = fixtures::sigma_2_family(n)?;
    let analyzer = Analyzer::new(graph)?;
    let determinant_is_unit = analyzer.form.determinant().abs() == BigInt::one();
    let generators = fixtures::sigma_2_family_generators(n);
    let kernel_generators_match = analyzer.good.vectors == generators;
    let contact = analyzer.contact_report(&fixtures::sigma_2_family_rotations(n), depth_cap)?;
    Ok(FamilyJson {
        n,
        determinant_is_unit,
        kernel_generators_match,
        kernel_generator_count: analyzer.good.len(),
        contact,
    })
}

fn pairings_string(p: &[i32]) -> String {
    let inner: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(","))
}

pub fn render_graph(g: &GraphJson) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph: {} vertices, {} edges, det = {}\n",
        g.vertices,
        g.edges.len(),
        g.determinant
    ));
    out.push_str(&format!(
        "negative definite: {}, bad vertices: {:?}, support: {}\n",
        g.negative_definite, g.bad_vertices, g.support
    ));
    if g.support == "EVEN_DEGREES_ONLY" {
        out.push_str("warning: two bad vertices; only even-degree generators are modelled\n");
    }
    out
}

pub fn render_hf(r: &HfJson) -> String {
    let mut out = render_graph(&r.graph);
    out.push_str(&format!(
        "initial candidates: {}, good vectors: {}, spin-c classes: {}\n",
        r.initial_candidates, r.good_vector_count, r.spinc_class_count
    ));
    out.push_str(&format!(
        "depth used: {} (cap {}), stabilized: {}\n",
        r.depth_used, r.depth_cap, r.stabilized
    ));
    for c in &r.classes {
        out.push_str(&format!(
            "spin-c {} (d = {}): {}\n",
            c.id,
            c.correction_term,
            c.hf_plus
                .as_ref()
                .map(|m| m.notation.clone())
                .unwrap_or_else(|| "not stabilized".into())
        ));
        for m in &c.members {
            out.push_str(&format!(
                "  K_{} = {}  degree {}\n",
                m.id,
                pairings_string(&m.pairings),
                m.degree
            ));
        }
        for rel in &c.relations {
            out.push_str(&format!(
                "  U^{} K_{} ~ U^{} K_{}{}\n",
                rel.lhs_exponent,
                rel.lhs_vector,
                rel.rhs_exponent,
                rel.rhs_vector,
                if rel.minimal { " (minimal)" } else { "" }
            ));
        }
    }
    for msg in &r.diagnostics.undecided_pairs {
        out.push_str(&format!("undecided: {msg}\n"));
    }
    out
}

pub fn render_contact(r: &ContactJson) -> String {
    let mut out = render_graph(&r.graph);
    out.push_str(&format!(
        "chern vector: {} (good vector {})\n",
        pairings_string(&r.chern),
        r.good_vector
    ));
    out.push_str(&format!(
        "d3 = {}, grading = {}, correction term = {} (spin-c {})\n",
        r.d3, r.grading, r.correction_term, r.spinc_class
    ));
    out.push_str(&format!(
        "planar open book: {}{}\n",
        r.planar.verdict,
        r.planar
            .reason
            .as_ref()
            .map(|s| format!(" ({s})"))
            .unwrap_or_default()
    ));
    out.push_str(&format!("sigma = {}\n", r.sigma));
    out
}

pub fn render_family(r: &FamilyJson) -> String {
    let mut out = format!(
        "family member n = {}: |det| = 1: {}, kernel generators match: {} ({} generators)\n",
        r.n, r.determinant_is_unit, r.kernel_generators_match, r.kernel_generator_count
    );
    out.push_str(&render_contact(&r.contact));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let r = BigRational::new(BigInt::from(-15), BigInt::from(8));
        assert_eq!(rational_string(&r), "-15/8");
        let r = BigRational::from(BigInt::from(-2));
        assert_eq!(rational_string(&r), "-2");
    }

    #[test]
    fn json_deterministic() {
        let analyzer = Analyzer::new(fixtures::sigma_3_5_7()).unwrap();
        let a = serde_json::to_string(&analyzer.hf_report(8).unwrap()).unwrap();
        let b = serde_json::to_string(&analyzer.hf_report(8).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unsupported_graph_rejected() {
        let g = PlumbingGraph::parse("v 0 1\n").unwrap();
        assert!(matches!(Analyzer::new(g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn family_report_n1() {
        let r = family_report(1, 16).unwrap();
        assert!(r.determinant_is_unit);
        assert!(r.kernel_generators_match);
        assert_eq!(r.contact.sigma, "0");
    }
}
