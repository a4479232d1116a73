//! Staged verification runs and their JSON reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::equivariant::{
    automorphism_report, build_m, check_invariance, element_invariance, expected_m_f_vector, DihedralElement,
};
use crate::error::{Error, Result};
use crate::kneser::{build_graph, neighbor_profile, outer_neighbors_by_shift, tight_parity, SchrijverGraph};
use crate::morse::{collapse_to_critical, FiberSelection, MorseData};
use crate::planar::{steinitz_check, surface_rotation_system, RotationSystem};
use crate::realize::{realize_polytope, PolytopeRealization, RealizeOptions};
use crate::ring::{build_ring_complex, expected_f_vector, outer_cap_face, RingLayout};
use crate::simplicial::{complexes_identical, homology, neighborhood_complex, surface_check, Complex, VertexLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Graph,
    Morse,
    Ring,
    Topology,
    Steinitz,
    Realize,
    Equivariant,
}

impl Stage {
    pub const ALL: [Stage; 7] =
        [Stage::Graph, Stage::Morse, Stage::Ring, Stage::Topology, Stage::Steinitz, Stage::Realize, Stage::Equivariant];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Graph => "graph",
            Stage::Morse => "morse",
            Stage::Ring => "ring",
            Stage::Topology => "topology",
            Stage::Steinitz => "steinitz",
            Stage::Realize => "realize",
            Stage::Equivariant => "equivariant",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parse a comma-separated stage list; `all` and `sphere-only` are shorthands.
pub fn parse_stages(list: &str) -> Result<Vec<Stage>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part {
            "all" => out.extend(Stage::ALL),
            "sphere-only" => out.extend([Stage::Graph, Stage::Topology]),
            name => out.push(
                Stage::ALL
                    .into_iter()
                    .find(|s| s.name() == name)
                    .ok_or_else(|| Error::InvalidParameters(format!("unknown stage `{name}`")))?,
            ),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameters("no stages selected".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_stages(s)?.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::InvalidParameters(format!("`{s}` is not a single stage"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: Stage,
    pub passed: bool,
    pub skipped: bool,
    pub metrics: BTreeMap<String, Value>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub passed: bool,
    pub stages: Vec<StageResult>,
}

impl VerificationReport {
    pub fn stage(&self, s: Stage) -> Option<&StageResult> {
        self.stages.iter().find(|r| r.stage == s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Record wall-clock seconds per stage (makes the report nondeterministic).
    pub timings: bool,
}

/// Collects metrics and failures for one stage.
struct Recorder {
    metrics: BTreeMap<String, Value>,
    failures: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { metrics: BTreeMap::new(), failures: Vec::new() }
    }

    fn metric(&mut self, key: &str, value: impl Serialize) {
        self.metrics.insert(key.to_string(), serde_json::to_value(value).expect("metrics serialize"));
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures.push(what());
        }
        ok
    }
}

/// Artifacts shared between stages of one `n`, built on first use.
#[derive(Default)]
struct Context {
    graph: Option<SchrijverGraph>,
    morse: Option<MorseData>,
    critical: Option<Complex<VertexLabel>>,
    ring: Option<(Complex<VertexLabel>, RotationSystem, RingLayout)>,
}

impl Context {
    fn graph(&mut self, n: usize) -> Result<&SchrijverGraph> {
        if self.graph.is_none() {
            self.graph = Some(build_graph(n, 2)?);
        }
        Ok(self.graph.as_ref().expect("just built"))
    }

    fn morse(&mut self, n: usize) -> Result<&MorseData> {
        if self.morse.is_none() {
            self.morse = Some(MorseData::build(n)?);
        }
        Ok(self.morse.as_ref().expect("just built"))
    }

    fn critical(&mut self, n: usize) -> Result<&Complex<VertexLabel>> {
        if self.critical.is_none() {
            let data = self.morse(n)?;
            let m = data.matching(FiberSelection::All)?;
            let (k, _) = collapse_to_critical(data.complex(), data.poset(), &m)?;
            self.critical = Some(k);
        }
        Ok(self.critical.as_ref().expect("just built"))
    }

    fn ring(&mut self, n: usize) -> Result<&(Complex<VertexLabel>, RotationSystem, RingLayout)> {
        if self.ring.is_none() {
            self.ring = Some(build_ring_complex(n)?);
        }
        Ok(self.ring.as_ref().expect("just built"))
    }
}

fn graph_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let g = ctx.graph(n)?;
    let tight = g.tight_vertices().count();
    let loose = g.loose_vertices().count();
    r.metric("vertices", g.vertex_count());
    r.metric("edges", g.edge_count());
    r.metric("tight", tight);
    r.metric("loose", loose);
    r.check(g.vertex_count() == (n + 1) * (n + 1), || {
        format!("{} vertices, expected {}", g.vertex_count(), (n + 1) * (n + 1))
    });
    r.check(tight == 2 * (n + 1), || format!("{tight} tight vertices"));
    r.check(loose + 1 == n * n, || format!("{loose} loose vertices"));
    if n < 2 {
        return Ok(());
    }
    for v in g.vertices() {
        let p = neighbor_profile(g, v)?;
        match &p.tight {
            None => {
                let degree = g.degree(v)?;
                r.check(degree == 4, || format!("loose {v} has degree {degree}"));
                let mut by_shift = outer_neighbors_by_shift(g, v);
                by_shift.sort();
                r.check(by_shift == p.outer, || format!("outer neighbors of {v} disagree with the shift form"));
            }
            Some(_) => {
                r.check(p.outer.len() == 1, || format!("tight {v} has {} outer neighbors", p.outer.len()));
            }
        }
    }
    let tights: Vec<_> = g.tight_vertices().collect();
    let bipartite =
        tights.iter().all(|a| tights.iter().all(|b| g.adjacent(a, b) == (tight_parity(a) != tight_parity(b))));
    r.metric("tight_induce_complete_bipartite", bipartite);
    r.check(bipartite, || "tight vertices do not induce K_{n+1,n+1}".into());
    Ok(())
}

fn morse_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let data = ctx.morse(n)?;
    let m = data.matching(FiberSelection::All)?;
    let audit = data.audit(&m, FiberSelection::All);
    let order_preserving = data.is_order_preserving();
    r.metric("complex_f_vector", data.complex().f_vector());
    r.metric("shared_faces", data.shared_face_count());
    r.metric("fibers", data.fiber_sizes().iter().map(|(q, c)| (q.to_string(), *c)).collect::<BTreeMap<_, _>>());
    r.metric("audit", &audit);
    r.metric("order_preserving", order_preserving);
    r.check(order_preserving, || "Φ is not order-preserving".into());
    r.check(audit.unmatched_outside_a == 0, || format!("{} faces outside Φ⁻¹(A) unmatched", audit.unmatched_outside_a));
    r.check(audit.cross_fiber_pairs == 0, || format!("{} pairs cross fibers", audit.cross_fiber_pairs));
    let (critical, report) = collapse_to_critical(data.complex(), data.poset(), &m)?;
    r.metric("acyclic", report.certificate.acyclic);
    r.metric("matched_pairs", report.matched_pairs);
    r.metric("collapse_steps", report.collapse_steps);
    r.metric("critical_f_vector", critical.f_vector());
    r.check(critical.face_count() == audit.a_faces, || "critical cells differ from Φ⁻¹(A)".into());
    r.check(report.critical_euler == report.input_euler, || "Euler characteristic changed".into());
    ctx.critical = Some(critical);
    Ok(())
}

fn ring_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let critical = ctx.critical(n)?.clone();
    let (ring, rs, _) = ctx.ring(n)?;
    r.metric("f_vector", ring.f_vector());
    r.metric("rotation_edges", rs.edge_count());
    r.check(ring.f_vector() == expected_f_vector(n), || format!("f-vector {:?}", ring.f_vector()));
    let same = complexes_identical(&critical, ring);
    r.metric("identical_to_critical", same);
    r.check(same, || "ring complex differs from the critical complex".into());
    Ok(())
}

fn topology_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let full = neighborhood_complex(ctx.graph(n)?);
    let h = homology(&full);
    r.metric("neighborhood_betti", h.betti());
    let expected: Vec<usize> = (0..h.groups.len()).map(|d| usize::from(d == 0 || d == 2)).collect();
    r.check(h.is_torsion_free() && h.betti() == expected, || format!("N has homology betti {:?}", h.betti()));
    let sphere = if n == 1 { full } else { ctx.ring(n)?.0.clone() };
    let s = surface_check(&sphere);
    r.metric("is_sphere", s.is_sphere);
    r.metric("euler_characteristic", s.euler_characteristic);
    r.check(s.is_sphere, || format!("surface check failed: {:?}", s.failures));
    let hs = homology(&sphere);
    r.metric("sphere_betti", hs.betti());
    r.check(hs.is_sphere_signature(2), || format!("sphere homology betti {:?}", hs.betti()));
    Ok(())
}

fn steinitz_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let (ring, rs, _) = ctx.ring(n)?;
    let report = steinitz_check(ring, rs);
    r.metric("planar", report.planar);
    r.metric("euler_from_rotation", report.euler_from_rotation);
    r.metric("faces_match_triangles", report.faces_match_triangles);
    r.metric("min_connectivity", report.min_connectivity);
    r.metric("min_pair", &report.min_pair);
    r.check(report.passed && report.faces_match_triangles, || format!("{:?}", report.failures));
    let generic = steinitz_check(ring, &surface_rotation_system(ring)?);
    r.metric("generic_planar", generic.planar);
    r.check(generic.planar, || "orientation-derived rotation system is not planar".into());
    Ok(())
}

/// Realization of the ring sphere with the Tutte outer face at the even cap.
pub fn realize_ring(n: usize) -> Result<PolytopeRealization<f64>> {
    let (k, rs, layout) = build_ring_complex(n)?;
    let opts = RealizeOptions { outer_face: Some(outer_cap_face(&k, &layout)?), ..Default::default() };
    realize_polytope(&k, &rs, &opts)
}

fn realize_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let (k, rs, layout) = ctx.ring(n)?;
    let opts = RealizeOptions { outer_face: Some(outer_cap_face(k, layout)?), ..Default::default() };
    r.metric("tolerance", opts.tolerance);
    match realize_polytope::<_, f64>(k, rs, &opts) {
        Ok(p) => {
            r.metric("vertices", p.vertex_count());
            r.metric("facets", p.facets.len());
            r.metric("convexity_margin", p.margin);
            r.metric("stress_residual", p.stress_residual);
            r.check(p.stress_residual < 1e-9, || format!("stress residual {}", p.stress_residual));
        }
        Err(e) => {
            r.check(false, || e.to_string());
        }
    }
    Ok(())
}

fn equivariant_stage(n: usize, ctx: &mut Context, r: &mut Recorder) -> Result<()> {
    let auto = automorphism_report(n)?;
    r.metric("group_order", auto.group_order);
    r.metric("automorphisms", auto.automorphisms);
    r.metric("distinct_permutations", auto.distinct_permutations);
    r.check(auto.passed, || format!("{:?}", auto.failures));

    let (m, report) = build_m(n)?;
    r.metric("m_intermediate_f_vector", &report.intermediate_f_vector);
    r.metric("m_subdivided_f_vector", &report.subdivided_f_vector);
    r.metric("m_f_vector", &report.f_vector);
    r.metric("m_two_way_agreement", report.agrees_with_direct);
    r.metric("psi_acyclic", report.psi_certificate.acyclic);
    r.metric("psi_perfect", report.psi_perfect);
    r.check(report.f_vector == expected_m_f_vector(n), || format!("M f-vector {:?}", report.f_vector));
    let orbit = check_invariance(&m, n);
    r.metric("m_invariant", orbit.invariant);
    r.check(orbit.invariant, || {
        let bad = orbit.elements.iter().find(|e| !e.invariant).expect("some violation");
        format!("M not invariant under {}: {:?}", bad.element, bad.violation)
    });
    let s = surface_check(&m);
    r.metric("m_euler_characteristic", s.euler_characteristic);
    r.check(s.is_sphere, || format!("M surface check: {:?}", s.failures));
    let st = steinitz_check(&m, &surface_rotation_system(&m)?);
    r.metric("m_min_connectivity", st.min_connectivity);
    r.check(st.passed, || format!("M Steinitz: {:?}", st.failures));

    // Ñ is not invariant for n ≥ 3; for n = 2 the answer is only reported.
    let ring = &ctx.ring(n)?.0;
    let witness = element_invariance(ring, &DihedralElement::rotation(2, (2 * n + 2) as u32));
    let ring_orbit = check_invariance(ring, n);
    r.metric("ring_invariant", ring_orbit.invariant);
    r.metric(
        "ring_rotation2",
        json!({ "invariant": witness.invariant, "facet": witness.violation, "image": witness.image }),
    );
    if n >= 3 {
        r.check(!witness.invariant, || "Ñ is invariant under rotation by 2".into());
    }
    Ok(())
}

fn run_stage(n: usize, stage: Stage, ctx: &mut Context, opts: &VerifyOptions) -> StageResult {
    let start = Instant::now();
    let mut r = Recorder::new();
    let skipped = n < 2 && !matches!(stage, Stage::Graph | Stage::Topology);
    if !skipped {
        let outcome = match stage {
            Stage::Graph => graph_stage(n, ctx, &mut r),
            Stage::Morse => morse_stage(n, ctx, &mut r),
            Stage::Ring => ring_stage(n, ctx, &mut r),
            Stage::Topology => topology_stage(n, ctx, &mut r),
            Stage::Steinitz => steinitz_stage(n, ctx, &mut r),
            Stage::Realize => realize_stage(n, ctx, &mut r),
            Stage::Equivariant => equivariant_stage(n, ctx, &mut r),
        };
        if let Err(e) = outcome {
            r.failures.push(e.to_string());
        }
    }
    StageResult {
        stage,
        passed: r.failures.is_empty(),
        skipped,
        metrics: r.metrics,
        failures: r.failures,
        seconds: opts.timings.then(|| start.elapsed().as_secs_f64()),
    }
}

/// Verify one `n`. For `n = 1` only the graph counts and the sphere check of
/// `N(SG(1,2)) = ∂Δ³` apply; other stages are marked skipped.
pub fn verify_n(n: usize, stages: &[Stage], opts: &VerifyOptions) -> Result<VerificationReport> {
    if n < 1 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let mut ctx = Context::default();
    let stages: Vec<StageResult> = stages.iter().map(|&s| run_stage(n, s, &mut ctx, opts)).collect();
    Ok(VerificationReport { n, passed: stages.iter().all(|s| s.passed), stages })
}

pub fn run_verify(
    n_min: usize,
    n_max: usize,
    stages: &[Stage],
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    if n_min < 1 || n_min > n_max {
        return Err(Error::InvalidParameters(format!("bad range {n_min}..={n_max}")));
    }
    (n_min..=n_max).map(|n| verify_n(n, stages, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_parsing() {
        assert_eq!(parse_stages("all").unwrap(), Stage::ALL.to_vec());
        assert_eq!(parse_stages("sphere-only").unwrap(), vec![Stage::Graph, Stage::Topology]);
        assert_eq!(parse_stages("ring,graph").unwrap(), vec![Stage::Graph, Stage::Ring]);
        assert!(parse_stages("bogus").is_err());
        assert!(parse_stages("").is_err());
    }

    #[test]
    fn n1_sphere_only() {
        let r = verify_n(1, &parse_stages("sphere-only").unwrap(), &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.stage(Stage::Topology).unwrap().metrics["is_sphere"], json!(true));
    }

    #[test]
    fn n2_all_stages_pass_and_report_is_deterministic() {
        let stages = parse_stages("all").unwrap();
        let a = verify_n(2, &stages, &VerifyOptions::default()).unwrap();
        for s in &a.stages {
            assert!(s.passed, "{}: {:?}", s.stage, s.failures);
        }
        let b = verify_n(2, &stages, &VerifyOptions::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
