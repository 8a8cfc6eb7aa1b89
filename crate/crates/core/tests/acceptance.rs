//! Acceptance criteria, one PASS/FAIL line each. Counts are exact (tolerance 0);
//! time limits are wall-clock on the test profile.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use hyperpolygon::arrangements::{
    build_a, build_b, chamber_to_complex, characteristic_polynomial, count_chambers_at_ray, count_regions,
    count_regions_in_cone, enumerate_regions_in_cone, named_cone, Method, NamedCone,
};
use hyperpolygon::bunches::{complex_from_bunch, is_projective_complex, phi_from_complex, projectivity_witness};
use hyperpolygon::complexes::{
    biconnected_to_max_biconnected, count_biconnected, count_max_biconnected, enumerate_max_biconnected, is_full,
    is_maximal_biconnected, max_biconnected_to_biconnected, Complex, Subset,
};
use hyperpolygon::coxrelations::{iota_substitution_identities, mutate, sample_x_point, verify_relations_vanish};
use hyperpolygon::hyper_cones::census_summary;
use hyperpolygon::oracle::crosscheck;
use hyperpolygon::ratgeom::RatVector;

const LAMBDA: [(usize, u64, Duration); 3] = [
    (5, 81, Duration::from_secs(1)),
    (6, 2646, Duration::from_secs(10)),
    (7, 1_422_564, Duration::from_secs(600)),
];
const IN_F: [(usize, u64); 3] = [(5, 81), (6, 1684), (7, 122_921)];
const IN_C0: [(usize, u64); 3] = [(5, 76), (6, 1678), (7, 122_914)];
const CHAMBER_LIMIT_7: Duration = Duration::from_secs(1800);
const CENSUS_LIMIT_6: Duration = Duration::from_secs(300);
const SEGRE: u64 = 332;
const B84_REGIONS: u64 = 495_504;
const COX_SAMPLES: usize = 100;
const MIN_SPEEDUP_AT_8: f64 = 5.0;

#[derive(Default)]
struct Report {
    failed: Vec<String>,
    unverifiable: Vec<String>,
}

/// Straight to the process stdout so the lines survive libtest's capture.
fn emit(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").and_then(|_| out.flush()).expect("stdout");
}

impl Report {
    fn check(&mut self, id: &str, pass: bool, detail: impl AsRef<str>) {
        emit(format!("{} {id}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref()));
        if !pass {
            self.failed.push(id.to_string());
        }
    }

    /// A criterion the machine cannot exercise; reported as failing but not asserted.
    fn unverifiable(&mut self, id: &str, detail: impl AsRef<str>) {
        emit(format!("FAIL {id}: {} (unverifiable on this machine)", detail.as_ref()));
        self.unverifiable.push(id.to_string());
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn complex_counts(r: &mut Report) {
    for (n, want, limit) in LAMBDA {
        let (enumerated, dt) = timed(|| count_max_biconnected(n, false).unwrap());
        let via_link = count_biconnected(n - 1).unwrap();
        r.check(
            &format!("1 lambda({n})"),
            enumerated == want && via_link == want && dt <= limit,
            format!("enumerated={enumerated} via_link={via_link} expected={want} tol=0 time={dt:.2?} limit={limit:?}"),
        );
    }
    speedup(r);
}

#[cfg(feature = "parallel")]
fn speedup(r: &mut Report) {
    let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
    let a = build_a(6).unwrap();
    let f = named_cone(6, NamedCone::F).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        timed(|| pool.install(|| count_regions_in_cone(&a, &f).unwrap()))
    };
    let (c1, t1) = run(1);
    let (c8, t8) = run(8);
    let s = t1.as_secs_f64() / t8.as_secs_f64();
    let detail = format!(
        "workers 1 vs 8 on A(6) in F: counts {c1}/{c8}, speedup {s:.2} (need >= {MIN_SPEEDUP_AT_8}), cores={cores}"
    );
    if cores < 8 {
        r.check("1 determinism across workers", c1 == c8, format!("counts {c1}/{c8}"));
        r.unverifiable("1 speedup", detail);
    } else {
        r.check("1 speedup", c1 == c8 && s >= MIN_SPEEDUP_AT_8, detail);
    }
}

#[cfg(not(feature = "parallel"))]
fn speedup(r: &mut Report) {
    r.unverifiable("1 speedup", "built without the parallel feature");
}

fn non_full(r: &mut Report) {
    for n in 5..=7 {
        let all = count_max_biconnected(n, false).unwrap();
        let full = count_max_biconnected(n, true).unwrap();
        r.check(
            &format!("2 non-full({n})"),
            all - full == n as u64,
            format!("non-full={} expected={n} tol=0", all - full),
        );
    }
}

fn chambers(r: &mut Report) {
    for ((n, f_want), (_, c_want)) in IN_F.into_iter().zip(IN_C0) {
        let a = build_a(n).unwrap();
        let (f, tf) = timed(|| count_regions_in_cone(&a, &named_cone(n, NamedCone::F).unwrap()).unwrap());
        let (c, tc) = timed(|| count_regions_in_cone(&a, &named_cone(n, NamedCone::C0).unwrap()).unwrap());
        let in_time = n < 7 || (tf <= CHAMBER_LIMIT_7 && tc <= CHAMBER_LIMIT_7);
        r.check(
            &format!("3 chambers({n})"),
            f == f_want && c == c_want && f - c == n as u64 && in_time,
            format!(
                "F={f} (expected {f_want}, {tf:.2?}) C0={c} (expected {c_want}, {tc:.2?}) F-C0={} tol=0",
                f - c
            ),
        );
    }
}

fn census(r: &mut Report) {
    for ((n, lambda, _), (_, p)) in LAMBDA.into_iter().zip(IN_F) {
        let (s, dt) = timed(|| census_summary(n).unwrap());
        let in_time = n != 6 || dt <= CENSUS_LIMIT_6;
        r.check(
            &format!("4 census({n})"),
            s.total == lambda && s.projective == p && s.non_projective == lambda - p && in_time,
            format!(
                "total={} projective={} non-projective={} expected=({lambda}, {p}, {}) tol=0 time={dt:.2?}",
                s.total,
                s.projective,
                s.non_projective,
                lambda - p
            ),
        );
    }
}

fn segre(r: &mut Report) {
    let a6 = build_a(6).unwrap();
    let ray = RatVector::from_ints(&[1; 6]);
    let b = build_b(6, 3).unwrap();
    let counts = [
        count_chambers_at_ray(&a6, &ray, Method::Enumerate).unwrap(),
        count_chambers_at_ray(&a6, &ray, Method::Charpoly).unwrap(),
        count_regions(&b, Method::Enumerate).unwrap(),
        count_regions(&b, Method::Charpoly).unwrap(),
    ];
    r.check(
        "5 Segre",
        counts.iter().all(|&c| c == SEGRE),
        format!("A(6) at 1^6 enumerate/charpoly={}/{} B(6,3) enumerate/charpoly={}/{} expected={SEGRE} tol=0",
            counts[0], counts[1], counts[2], counts[3]),
    );

    let n = 6;
    let halves: Vec<Subset> = (0..64u32).map(Subset).filter(|s| s.len() == 3 && s.contains(1)).collect();
    let small: Vec<Subset> = (1..64u32).map(Subset).filter(|s| s.len() <= 2).collect();
    let mut seen = BTreeSet::new();
    let mut projective = 0u64;
    for choice in 0u32..1 << halves.len() {
        let mut faces = small.clone();
        for (i, &h) in halves.iter().enumerate() {
            faces.push(if choice >> i & 1 == 1 { h } else { h.complement(n) });
        }
        let d = Complex::generated_by(n, &faces).unwrap();
        assert!(is_maximal_biconnected(&d) && is_full(&d));
        projective += projectivity_witness(n, d.maximal_faces()).is_some() as u64;
        seen.insert(d);
    }
    r.check(
        "5 Segre complexes",
        seen.len() == 1024 && projective == SEGRE,
        format!("distinct={} projective={projective} expected=(1024, {SEGRE}) tol=0", seen.len()),
    );
}

fn b84(r: &mut Report) {
    let b = build_b(8, 4).unwrap();
    let (p, dt) = timed(|| characteristic_polynomial(&b));
    match p {
        Ok(p) => {
            let regions = p.regions().unwrap();
            r.check(
                "6 B(8,4)",
                regions == B84_REGIONS,
                format!("charpoly regions={regions} expected={B84_REGIONS} tol=0 primes={:?} time={dt:.2?}", p.primes),
            );
        }
        Err(e) => r.check("6 B(8,4)", false, format!("{e}")),
    }
}

fn oracles(r: &mut Report) {
    let report = crosscheck(5).unwrap();
    for a in &report {
        r.check(
            &format!("7 oracle {}", a.name),
            a.ok(),
            format!("n=5 instances={} disagreements={} tol=0", a.instances, a.disagreements),
        );
    }
}

fn bijections(r: &mut Report) {
    for n in 5..=6 {
        let mut total = 0;
        let mut ok = 0;
        for c in enumerate_max_biconnected(n, true).unwrap() {
            total += 1;
            let b = phi_from_complex(&c).unwrap();
            ok += (complex_from_bunch(&b).unwrap() == c) as usize;
        }
        r.check(
            &format!("8 complex-bunch({n})"),
            ok == total,
            format!("round trips {ok}/{total}"),
        );
    }
    for n in 3..=6 {
        let mut images = BTreeSet::new();
        let mut total = 0u64;
        let mut ok = 0u64;
        for c in enumerate_max_biconnected(n, false).unwrap() {
            total += 1;
            let link = max_biconnected_to_biconnected(&c).unwrap();
            ok += (biconnected_to_max_biconnected(&link).unwrap() == c) as u64;
            images.insert(link);
        }
        let target = count_biconnected(n - 1).unwrap();
        r.check(
            &format!("8 link bijection({n})"),
            ok == total && images.len() as u64 == total && total == target,
            format!("round trips {ok}/{total} distinct images={} biconnected on [{}]={target}", images.len(), n - 1),
        );
    }
}

fn chamber_complexes(r: &mut Report) {
    for (n, want) in IN_C0.into_iter().take(2) {
        let a = build_a(n).unwrap();
        let chambers = enumerate_regions_in_cone(&a, &named_cone(n, NamedCone::C0).unwrap()).unwrap();
        let images: BTreeSet<Complex> = chambers.iter().map(|ch| chamber_to_complex(&a, ch).unwrap()).collect();
        let projective: BTreeSet<Complex> = enumerate_max_biconnected(n, true)
            .unwrap()
            .filter(|c| is_projective_complex(c).unwrap().is_some())
            .collect();
        r.check(
            &format!("9 chamber-complex({n})"),
            chambers.len() as u64 == want && images.len() == chambers.len() && images == projective,
            format!(
                "chambers={} distinct complexes={} projective full={} expected={want} tol=0",
                chambers.len(),
                images.len(),
                projective.len()
            ),
        );
    }
}

fn cox(r: &mut Report) {
    let ids: Vec<bool> = (4..=9).map(|n| iota_substitution_identities(n).unwrap()).collect();
    r.check("10 pullback identities", ids.iter().all(|&b| b), format!("n=4..9 {ids:?}"));
    for n in 5..=8 {
        let mut vanish = 0;
        let mut rejected = true;
        for s in 0..COX_SAMPLES as u64 {
            let pt = sample_x_point(n, 1000 * s).unwrap();
            vanish += verify_relations_vanish(&pt).unwrap() as usize;
            if s == 0 {
                rejected = !verify_relations_vanish(&mutate(&pt, 1)).unwrap();
            }
        }
        r.check(
            &format!("10 cox({n})"),
            vanish == COX_SAMPLES && rejected,
            format!("vanishing samples {vanish}/{COX_SAMPLES}, mutant rejected={rejected} tol=0"),
        );
    }
}

#[test]
fn acceptance() {
    let mut r = Report::default();
    complex_counts(&mut r);
    non_full(&mut r);
    census(&mut r);
    segre(&mut r);
    oracles(&mut r);
    bijections(&mut r);
    chamber_complexes(&mut r);
    cox(&mut r);
    b84(&mut r);
    chambers(&mut r);
    emit(format!(
        "acceptance: {} failed, {} unverifiable {:?}",
        r.failed.len(),
        r.unverifiable.len(),
        r.unverifiable
    ));
    assert!(r.failed.is_empty(), "failed criteria: {:?}", r.failed);
}
