//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use kneser_sphere::equivariant::{
    automorphism_report, build_m, check_invariance, element_invariance, expected_m_f_vector, DihedralElement,
};
use kneser_sphere::kneser::{build_graph, neighbor_profile, tight_parity, StableSet};
use kneser_sphere::morse::{collapse_to_critical, verify_acyclicity, FiberSelection, Matching, MorseData};
use kneser_sphere::pipeline::realize_ring;
use kneser_sphere::planar::{steinitz_check, surface_rotation_system, RotationSystem};
use kneser_sphere::ring::build_ring_complex;
use kneser_sphere::simplicial::{
    complexes_identical, face_poset, homology, neighborhood_complex, surface_check, Complex,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ground_stable(n: usize) -> Vec<Vec<u32>> {
    let g = (2 * n + 2) as u32;
    (1..=g).combinations(n).filter(|c| c.iter().all(|&x| !c.contains(&(x % g + 1)))).collect()
}

/// `{i, i+2, …}` mod `2n+2`, recomputed from scratch.
fn brute_tight(s: &[u32], n: usize) -> bool {
    let g = (2 * n + 2) as u32;
    (1..=g).any(|i| {
        let mut t: Vec<u32> = (0..n as u32).map(|j| (i - 1 + 2 * j) % g + 1).collect();
        t.sort_unstable();
        t == s
    })
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for n in 1..=8 {
        let g = build_graph(n, 2).map_err(|e| e.to_string())?;
        let brute = ground_stable(n);
        let tight = brute.iter().filter(|s| brute_tight(s, n)).count();
        ensure(g.vertex_count() == (n + 1) * (n + 1) && brute.len() == g.vertex_count(), || {
            format!("n={n}: {} vertices", g.vertex_count())
        })?;
        ensure(g.tight_vertices().count() == 2 * (n + 1) && tight == 2 * (n + 1), || format!("n={n}: tight count"))?;
        ensure(g.loose_vertices().count() == n * n - 1, || format!("n={n}: loose count"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("n=1..8 in {:.1} ms", t.as_secs_f64() * 1e3))
}

fn criterion_2() -> Check {
    for n in 2..=8 {
        let g = build_graph(n, 2).map_err(|e| e.to_string())?;
        let sets = ground_stable(n);
        for s in &sets {
            let v = StableSet::new(s.iter().map(|&x| i64::from(x)), g.ground()).map_err(|e| e.to_string())?;
            let degree = sets.iter().filter(|t| t.iter().all(|x| !s.contains(x))).count();
            ensure(g.degree(&v).ok() == Some(degree), || format!("n={n}: degree of {v}"))?;
            let p = neighbor_profile(&g, &v).map_err(|e| e.to_string())?;
            if brute_tight(s, n) {
                ensure(p.outer.len() == 1, || format!("n={n}: tight {v} has {} outer neighbors", p.outer.len()))?;
            } else {
                ensure(degree == 4, || format!("n={n}: loose {v} has degree {degree}"))?;
            }
        }
        let tights: Vec<_> = g.tight_vertices().collect();
        for (a, b) in tights.iter().tuple_combinations() {
            let want = tight_parity(a) != tight_parity(b);
            ensure(g.adjacent(a, b) == want, || format!("n={n}: tight pair {a}, {b}"))?;
        }
    }
    Ok("n=2..8".into())
}

fn criterion_3() -> Check {
    let mut worst = Duration::ZERO;
    for n in 2..=5 {
        let start = Instant::now();
        let data = MorseData::build(n).map_err(|e| format!("n={n}: {e}"))?;
        let m = data.matching(FiberSelection::All).map_err(|e| e.to_string())?;
        ensure(verify_acyclicity(&m, data.poset()), || format!("n={n}: cyclic matching"))?;
        let audit = data.audit(&m, FiberSelection::All);
        ensure(audit.unmatched_outside_a == 0 && audit.cross_fiber_pairs == 0, || format!("n={n}: {audit:?}"))?;
        ensure(2 * m.len() + audit.a_faces == data.complex().face_count(), || format!("n={n}: not perfect"))?;
        ensure(data.is_order_preserving(), || format!("n={n}: Φ not order-preserving"))?;
        let (critical, _) = collapse_to_critical(data.complex(), data.poset(), &m).map_err(|e| e.to_string())?;
        ensure(critical.face_count() == audit.a_faces, || format!("n={n}: critical cells"))?;
        worst = worst.max(start.elapsed());
    }
    ensure(worst < Duration::from_secs(30), || format!("slowest n took {worst:?}"))?;
    Ok(format!("n=2..5, slowest {:.1} ms", worst.as_secs_f64() * 1e3))
}

fn criterion_4() -> Check {
    for n in 2..=5 {
        let data = MorseData::build(n).map_err(|e| e.to_string())?;
        let m = data.matching(FiberSelection::All).map_err(|e| e.to_string())?;
        let (critical, _) = collapse_to_critical(data.complex(), data.poset(), &m).map_err(|e| e.to_string())?;
        let (ring, _, _) = build_ring_complex(n).map_err(|e| e.to_string())?;
        ensure(complexes_identical(&critical, &ring), || format!("n={n}: complexes differ"))?;
        let want = vec![(n + 1) * (n + 1), 3 * (n * n + 2 * n - 1), 2 * n * n + 4 * n - 2];
        ensure(ring.f_vector() == want, || format!("n={n}: f-vector {:?}", ring.f_vector()))?;
    }
    Ok("n=2..5".into())
}

fn criterion_5() -> Check {
    for n in 2..=5 {
        let (ring, _, _) = build_ring_complex(n).map_err(|e| e.to_string())?;
        let s = surface_check(&ring);
        ensure(s.is_sphere && s.euler_characteristic == 2, || format!("n={n}: {:?}", s.failures))?;
        ensure(homology(&ring).is_sphere_signature(2), || format!("n={n}: ring homology"))?;
        let h = homology(&neighborhood_complex(&build_graph(n, 2).map_err(|e| e.to_string())?));
        let want: Vec<usize> = (0..h.groups.len()).map(|d| usize::from(d == 0 || d == 2)).collect();
        ensure(h.is_torsion_free() && h.betti() == want, || format!("n={n}: N betti {:?}", h.betti()))?;
    }
    Ok("n=2..5".into())
}

fn criterion_6() -> Check {
    for n in 2..=5 {
        let (ring, rs, _) = build_ring_complex(n).map_err(|e| e.to_string())?;
        let r = steinitz_check(&ring, &rs);
        ensure(r.planar && r.euler_from_rotation == 2, || format!("n={n}: not planar"))?;
        ensure(r.min_connectivity >= 3, || format!("n={n}: connectivity {}", r.min_connectivity))?;
    }
    let mut margins = Vec::new();
    for n in 2..=4 {
        let p = realize_ring(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure(p.margin > 1e-9, || format!("n={n}: margin {}", p.margin))?;
        margins.push(format!("{:.1e}", p.margin));
    }
    Ok(format!("margins n=2..4: {}", margins.join(", ")))
}

fn criterion_7() -> Check {
    for n in 2..=5 {
        let auto = automorphism_report(n).map_err(|e| e.to_string())?;
        ensure(auto.passed && auto.distinct_permutations == 2 * (2 * n + 2), || format!("n={n}: {:?}", auto.failures))?;
        let (m, report) = build_m(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure(report.agrees_with_direct, || format!("n={n}: two builds differ"))?;
        ensure(m.f_vector() == expected_m_f_vector(n), || format!("n={n}: M f-vector {:?}", m.f_vector()))?;
        ensure(check_invariance(&m, n).invariant, || format!("n={n}: M not invariant"))?;
        let s = surface_check(&m);
        ensure(s.is_sphere && s.euler_characteristic == 2, || format!("n={n}: M not a sphere"))?;
        let rs = surface_rotation_system(&m).map_err(|e| e.to_string())?;
        ensure(steinitz_check(&m, &rs).passed, || format!("n={n}: M fails Steinitz"))?;
    }
    Ok("n=2..5".into())
}

fn criterion_8() -> Check {
    let mut witnesses = Vec::new();
    for n in 3..=5 {
        let (ring, _, _) = build_ring_complex(n).map_err(|e| e.to_string())?;
        let w = element_invariance(&ring, &DihedralElement::rotation(2, (2 * n + 2) as u32));
        ensure(!w.invariant, || format!("n={n}: invariant under rotation by 2"))?;
        let facet = w.violation.ok_or("no violating facet reported")?;
        witnesses.push(format!("n={n}: {{{}}}", facet.join(", ")));
    }
    Ok(witnesses.join("; "))
}

fn criterion_9() -> Check {
    let square = Complex::from_facets([[0u32, 1], [1, 2], [2, 3], [0, 3]]);
    let p = face_poset(&square);
    let id = |f: &[u32]| square.face_id(f).expect("face");
    let pairs =
        vec![(id(&[0]), id(&[0, 1])), (id(&[1]), id(&[1, 2])), (id(&[2]), id(&[2, 3])), (id(&[3]), id(&[0, 3]))];
    let m = Matching::new(&p, pairs).map_err(|e| e.to_string())?;
    ensure(!verify_acyclicity(&m, &p), || "cyclic matching accepted".into())?;

    let c5 = Complex::from_facets((0u32..5).map(|i| [i, (i + 1) % 5]));
    let rs = RotationSystem::new((0u32..5).map(|i| vec![(i + 1) % 5, (i + 4) % 5]).collect());
    let r = steinitz_check(&c5, &rs);
    ensure(!r.three_connected && r.min_connectivity == 2, || "C5 reported 3-connected".into())?;

    let n22 = neighborhood_complex(&build_graph(2, 2).map_err(|e| e.to_string())?);
    ensure(!surface_check(&n22).is_sphere, || "N(SG(2,2)) passed the surface check".into())?;
    Ok("all three controls rejected".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("vertex counts", criterion_1),
        ("degree facts", criterion_2),
        ("Morse certification", criterion_3),
        ("sphere identity", criterion_4),
        ("topology", criterion_5),
        ("Steinitz and convex realization", criterion_6),
        ("equivariance", criterion_7),
        ("non-invariance witness", criterion_8),
        ("negative controls", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
