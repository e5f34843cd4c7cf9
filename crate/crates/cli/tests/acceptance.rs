//! Acceptance suite: one test per criterion, every check exact, each test
//! printing a single PASS/FAIL line. Run with
//! `cargo test -p exteria-cli --test acceptance -- --show-output`.

use std::collections::BTreeSet;
use std::process::Command;

use exteria_core::comb::{binomial, combinations, Combination};
use exteria_core::exterior::{compound, retract_project, theta, DecomposableSpec, ExteriorPoint};
use exteria_core::invariants::{
    f_v_eval, normal_form, orbit_dimension, same_fiber_high_rank, same_fiber_rank_t, small_rank,
    SmallRankStrategy,
};
use exteria_core::linalg::{
    self, random_full_rank, random_indices, random_matrix, rng_from_seed,
};
use exteria_core::localize::{phi_set, verify_localize, LocalizeBounds, PhiLevel};
use exteria_core::poly::PolyRing;
use exteria_core::relations::{
    anti_straighten, append_index, degree3_catalog, genplu2_pushforward_data, genplu2_relation,
    is_zero, plucker_relation, pushforward_relation, twelve_term_relation, MinorSymbol,
    RelationExpr, ZeroMode,
};
use exteria_core::scalar::ExactScalar;
use exteria_core::shapes::{
    admissible_pairs, gamma, in_at_support, orbit_rank, orbit_to_prime, pi_formula_check,
    prime_catalog, OrbitClass, Shape,
};
use exteria_core::tangent::{
    d_lambda_rank, relation_ideal_slice, sing_counting_check, tangent_dim_at,
};
use exteria_core::DenseMatrix;

fn conclude(number: usize, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {number} ({name}): PASS");
    } else {
        println!("criterion {number} ({name}): FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!("criterion {number} failed with {} defects", failures.len());
    }
}

#[test]
fn criterion_01_rank_law() {
    let mut failures = Vec::new();
    for m in 1..=6usize {
        for n in m..=6usize {
            for t in 1..=m {
                for r in 0..=m {
                    for rep in 0..10u64 {
                        let seed = (m * 1000 + n * 100 + t * 10 + r) as u64 * 31 + rep;
                        let b = random_matrix(m, n, r, seed).expect("feasible rank");
                        let c = compound(&b, t).expect("valid compound");
                        let expected = binomial(r, t);
                        if c.rank() != expected {
                            failures.push(format!(
                                "rank(compound) = {} but C({r},{t}) = {expected} at ({m},{n})",
                                c.rank()
                            ));
                        }
                    }
                }
            }
        }
    }
    conclude(1, "rank law", failures);
}

#[test]
fn criterion_02_binet() {
    let mut failures = Vec::new();
    let mut rng = rng_from_seed(20_02);
    for case in 0..20 {
        use rand::Rng;
        let a_rows = rng.gen_range(1..=5);
        let inner = rng.gen_range(1..=5);
        let b_cols = rng.gen_range(1..=5);
        let a = random_full_rank(&mut rng, a_rows, inner);
        let b = random_full_rank(&mut rng, inner, b_cols);
        let ab = a.matmul(&b).unwrap();
        for t in 0..=a_rows.min(inner).min(b_cols) {
            let lhs = compound(&ab, t).unwrap();
            let rhs = compound(&a, t)
                .unwrap()
                .coords()
                .matmul(compound(&b, t).unwrap().coords())
                .unwrap();
            if lhs.coords() != &rhs {
                failures.push(format!("case {case}, t = {t}: compound is not multiplicative"));
            }
        }
    }
    conclude(2, "Cauchy-Binet multiplicativity", failures);
}

#[test]
fn criterion_03_normal_form_suite() {
    let mut failures = Vec::new();
    for (m, n, t) in [(4, 4, 2), (5, 5, 2), (5, 6, 3)] {
        for orbit in admissible_pairs(m, t) {
            let d = normal_form(orbit, m, n, t).expect("admissible");
            let expected_u = match orbit {
                OrbitClass::Zero => 0,
                OrbitClass::RankOne => 1,
                OrbitClass::SmallRank { u, .. } => u,
            };
            if d.rank() != orbit_rank(orbit) {
                failures.push(format!("rank of {orbit:?} at ({m},{n},{t}) is {}", d.rank()));
            }
            let sr = small_rank(&d, SmallRankStrategy::Randomized, 303, 20);
            if sr != expected_u {
                failures.push(format!(
                    "randomized small rank of {orbit:?} at ({m},{n},{t}) is {sr}, want {expected_u}"
                ));
            }
            for v in 0..=t + 1 {
                let val = f_v_eval(&d, v).expect("ambient large enough");
                let should_vanish = expected_u < t + 1 - v;
                if val.is_zero() != should_vanish {
                    failures.push(format!(
                        "f_{v} vanishing at {orbit:?}, ({m},{n},{t}): got {} want {}",
                        val.is_zero(),
                        should_vanish
                    ));
                }
            }
        }
    }
    conclude(3, "normal-form suite", failures);
}

#[test]
fn criterion_04_orbit_prime_catalog() {
    let mut failures = Vec::new();
    for m in 3..=6usize {
        for t in 2..m {
            let expected = t * (m - t) + 2;
            let orbits = admissible_pairs(m, t);
            let catalog = prime_catalog(m, t).unwrap();
            if orbits.len() != expected || catalog.len() != expected {
                failures.push(format!(
                    "counts at (m, t) = ({m}, {t}): {} orbits, {} ideals, want {expected}",
                    orbits.len(),
                    catalog.len()
                ));
            }
            let labels: BTreeSet<String> =
                orbits.iter().map(|o| orbit_to_prime(*o, m, t).unwrap().label()).collect();
            let catalog_labels: BTreeSet<String> = catalog.iter().map(|p| p.label()).collect();
            if labels != catalog_labels {
                failures.push(format!("orbit-to-prime is not bijective at ({m}, {t})"));
            }
            for n in [m, (m + 1).min(6)] {
                // dimensions against an independent reading of the formulas
                for orbit in &orbits {
                    let dim = orbit_dimension(*orbit, m, n, t).unwrap();
                    let direct = match *orbit {
                        OrbitClass::Zero => 0,
                        OrbitClass::RankOne => (m - t) * t + (n - t) * t + 1,
                        OrbitClass::SmallRank { u, k } => {
                            m * n - (t + 1 - u) * (t + 1 - u) - (m - (t + k)) * (n - (t + k))
                        }
                    };
                    if dim != direct {
                        failures.push(format!("dimension mismatch for {orbit:?} at ({m},{n},{t})"));
                    }
                }
                let dense =
                    orbit_dimension(OrbitClass::SmallRank { u: t + 1, k: m - t }, m, n, t).unwrap();
                if dense != m * n {
                    failures.push(format!("dense orbit at ({m},{n},{t}) has dimension {dense}"));
                }
            }
        }
    }
    conclude(4, "orbit and prime-ideal catalog", failures);
}

#[test]
fn criterion_05_shape_calculus() {
    let mut failures = Vec::new();
    for boxes in 1..=12usize {
        for shape in Shape::enumerate(boxes, boxes) {
            for t in 2..=6usize {
                // support condition against an independent integer reading:
                // pi_2 >= 0 is t * gamma_2 >= (t - 1) * gamma_1
                let support = in_at_support(&shape, t).unwrap();
                let divisible = shape.boxes() % t == 0;
                let g1 = gamma(&shape, 1).unwrap();
                let g2 = gamma(&shape, 2).unwrap();
                let direct = divisible && (t as i64) * g2 >= (t as i64 - 1) * g1;
                if support != direct {
                    failures.push(format!("support mismatch for {shape:?} at t = {t}"));
                }
                for u in 3..=t {
                    if !pi_formula_check(&shape, u, t).unwrap() {
                        failures.push(format!("pi formula fails for {shape:?}, u = {u}, t = {t}"));
                    }
                }
            }
        }
    }
    conclude(5, "shape calculus", failures);
}

#[test]
fn criterion_06_relation_families_expand_to_zero() {
    let mut failures = Vec::new();
    let mut check = |name: String, rel: &RelationExpr| match is_zero(rel, ZeroMode::Exact) {
        Ok(v) if v.is_zero() => {}
        _ => failures.push(format!("{name} does not expand to zero")),
    };
    // all typical relations with t <= 3, n <= 6 (subsets of [6] cover all n)
    for t in 2..=3usize {
        let n = 6;
        for a in combinations(n, t - 1).unwrap() {
            for b in combinations(n, t + 1).unwrap() {
                let rel = plucker_relation(&a, &b).unwrap();
                check(format!("plucker a={a:?} b={b:?}"), &rel);
            }
        }
    }
    check("twelve-term".into(), &twelve_term_relation());
    check("appended twelve-term".into(), &append_index(&twelve_term_relation()));
    for t in 2..=3usize {
        for s in 0..=t {
            check(format!("genplu2({s},{t})"), &genplu2_relation(s, t).unwrap());
        }
    }
    // pushforwards of random data
    let mut rng = rng_from_seed(20_06);
    for t in 2..=3usize {
        let base = plucker_relation(
            &Combination::new((1..=t - 1).collect(), 2 * t).unwrap(),
            &Combination::new((t..=2 * t).collect(), 2 * t).unwrap(),
        )
        .unwrap();
        for case in 0..10 {
            use rand::Rng;
            let m = rng.gen_range(t + 1..=6);
            let a = DenseMatrix::from_fn(t, m, |_, _| {
                ExactScalar::from_int(rng.gen_range(-9..=9))
            });
            let u = random_indices(&mut rng, m, 2 * t);
            let rel = pushforward_relation(&base, &a, &u).unwrap();
            check(format!("pushforward t={t} case={case}"), &rel);
        }
    }
    for (name, rel) in degree3_catalog().unwrap() {
        check(format!("degree-3 {name}"), &rel);
    }
    conclude(6, "relation families", failures);
}

#[test]
fn criterion_07_genplu2_cross_validation() {
    let mut failures = Vec::new();
    for t in 1..=3usize {
        for s in 0..=t {
            let direct = genplu2_relation(s, t).unwrap();
            let (a, u) = genplu2_pushforward_data(s, t).unwrap();
            let base = plucker_relation(
                &Combination::new((1..=t - 1).collect(), 2 * t).unwrap(),
                &Combination::new((t..=2 * t).collect(), 2 * t).unwrap(),
            )
            .unwrap();
            let pushed = pushforward_relation(&base, &a, &u).unwrap();
            if direct != pushed {
                failures.push(format!("family and pushforward differ at (s, t) = ({s}, {t})"));
            }
        }
    }
    conclude(7, "two-parameter family cross-validation", failures);
}

#[test]
fn criterion_08_anti_straightening() {
    let mut failures = Vec::new();
    let bound = 5;
    for v in 2..=4usize {
        for rows in combinations(bound, v).unwrap() {
            for cols in combinations(bound, v).unwrap() {
                for u in 0..v.saturating_sub(1) {
                    // residual is verified identically zero inside the solver
                    match anti_straighten(&rows, &cols, u) {
                        Ok(sol) => {
                            if sol.coeffs.is_empty() {
                                failures.push(format!(
                                    "empty solution for eta = [{rows:?}|{cols:?}], u = {u}"
                                ));
                            }
                        }
                        Err(e) => failures.push(format!(
                            "solve failed for eta = [{rows:?}|{cols:?}], u = {u}: {e}"
                        )),
                    }
                }
            }
        }
    }
    conclude(8, "anti-straightening", failures);
}

#[test]
fn criterion_09_localization() {
    let mut failures = Vec::new();
    for (m, n, t) in [(3, 4, 2), (4, 4, 2), (4, 5, 2), (4, 5, 3), (5, 5, 2)] {
        let p0 = phi_set(PhiLevel::Phi0, m, n, t).unwrap();
        if p0.members.len() != m * n {
            failures.push(format!("|Phi0| = {} at ({m},{n},{t})", p0.members.len()));
        }
    }
    for (m, n, t) in [(3, 4, 2), (4, 4, 2)] {
        let report = match verify_localize(m, n, t, LocalizeBounds::default_for(t)) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("verify_localize({m},{n},{t}) failed: {e}"));
                continue;
            }
        };
        if !report.complete {
            failures.push(format!("incomplete certificate chain at ({m},{n},{t})"));
            continue;
        }
        let ring = PolyRing::new(m, n);
        for entry in &report.minors {
            for k in [entry.k1, entry.k2, entry.k3] {
                if k.is_none_or(|k| k > 3) {
                    failures.push(format!("step exponent above 3 for {}", entry.minor));
                }
            }
            // re-verify the step-1 identities independently of the library's
            // internal check
            if let Some(cert) = &entry.step1 {
                if !cert.residual(t).expand(&ring).unwrap().is_zero() {
                    failures.push(format!("step-1 identity fails for {}", entry.minor));
                }
            }
        }
        for cert in report.step2.values().chain(report.step3.values()) {
            if !cert.residual(t).expand(&ring).unwrap().is_zero() {
                failures.push(format!("step identity fails for {}", cert.minor));
            }
        }
        if (m, n) == (4, 4) {
            // the five hard outer-set minors (and transposes) must be covered
            for (r, c) in [([1, 3], [2, 4]), ([1, 4], [2, 3]), ([1, 4], [2, 4]), ([2, 3], [2, 4]), ([2, 4], [2, 4])]
            {
                let sym = MinorSymbol::from_indices(&r, &c).unwrap();
                let tsym = sym.transposed();
                if !report.step2.contains_key(&sym) || !report.step2.contains_key(&tsym) {
                    failures.push(format!("missing pair-clearing certificate for {sym}"));
                }
            }
        }
    }
    conclude(9, "localization certificates", failures);
}

#[test]
fn criterion_10_tangent_and_singularity() {
    let mut failures = Vec::new();
    // differential ranks at generic points
    for (m, n, t) in [(3, 4, 2), (4, 4, 2), (4, 5, 3)] {
        for seed in 0..5u64 {
            let b = random_matrix(m, n, m.min(n), 1000 + seed).unwrap();
            let rank = d_lambda_rank(&b, t).unwrap();
            if rank != m * n {
                failures.push(format!("differential rank {rank} at ({m},{n},{t}), want {}", m * n));
            }
        }
    }
    for seed in 0..5u64 {
        let b = random_matrix(2, 4, 2, 2000 + seed).unwrap();
        let rank = d_lambda_rank(&b, 2).unwrap();
        if rank != 2 * (4 - 2) + 1 {
            failures.push(format!("differential rank {rank} at (2,4,2), want 5"));
        }
    }
    // catalog relations inside the degree-3 slices
    let slice24 = relation_ideal_slice(2, 4, 2, 3).unwrap();
    let plu = plucker_relation(
        &Combination::new(vec![1], 4).unwrap(),
        &Combination::new(vec![2, 3, 4], 4).unwrap(),
    )
    .unwrap();
    if !slice24.contains_relation(&plu).unwrap() {
        failures.push("three-term relation missing from the (2,4,2) slice".into());
    }
    let slice44 = relation_ideal_slice(4, 4, 2, 3).unwrap();
    if !slice44.contains_relation(&twelve_term_relation()).unwrap() {
        failures.push("twelve-term relation missing from the (4,4,2) slice".into());
    }
    for (name, rel) in degree3_catalog().unwrap() {
        if !slice44.contains_relation(&rel).unwrap() {
            failures.push(format!("degree-3 relation {name} missing from the (4,4,2) slice"));
        }
    }
    // tangent dimensions at marker points
    for (m, n, t) in [(3, 4, 2), (4, 4, 2)] {
        let slice = relation_ideal_slice(m, n, t, 3).unwrap();
        let smooth = compound(&random_matrix(m, n, t + 1, 3000).unwrap(), t).unwrap();
        let dim = tangent_dim_at(&smooth, &slice).unwrap();
        if dim != m * n {
            failures.push(format!("smooth tangent dimension {dim} at ({m},{n},{t})"));
        }
        let rank1 = normal_form(OrbitClass::RankOne, m, n, t).unwrap();
        let dim = tangent_dim_at(&rank1, &slice).unwrap();
        if dim <= m * n {
            failures.push(format!("rank-one tangent dimension {dim} not above {}", m * n));
        }
    }
    // counting argument across the full desk range
    for m in 3..=6usize {
        for n in m..=6 {
            for t in 2..m.min(n) {
                if m == n && t == m - 1 {
                    continue;
                }
                let r = sing_counting_check(m, n, t).unwrap();
                if !r.consistent() {
                    failures.push(format!(
                        "counting check at ({m},{n},{t}): {} vs {} vs mn = {}",
                        r.enumerated, r.closed_form, r.ambient
                    ));
                }
            }
        }
    }
    conclude(10, "tangent and singular locus", failures);
}

#[test]
fn criterion_11_fibers() {
    let mut failures = Vec::new();
    let mut rng = rng_from_seed(20_11);
    use rand::Rng;
    // rank above t: equality of compounds happens exactly for +-f with the
    // sign allowed only at even t
    for case in 0..20 {
        let t = rng.gen_range(2..=3);
        let m = rng.gen_range(t + 1..=5);
        let n = rng.gen_range(m..=5);
        let seed = rng.gen::<u64>();
        let f = random_matrix(m, n, rng.gen_range(t + 1..=m), seed).unwrap();
        if !same_fiber_high_rank(&f, &f, t).unwrap() {
            failures.push(format!("case {case}: f and f disagree"));
        }
        let minus_equal = same_fiber_high_rank(&f, &f.neg(), t).unwrap();
        if minus_equal != (t % 2 == 0) {
            failures.push(format!("case {case}: -f at t = {t} gives {minus_equal}"));
        }
        let double = f.scale(&ExactScalar::from_int(2));
        if same_fiber_high_rank(&f, &double, t).unwrap() {
            failures.push(format!("case {case}: 2f unexpectedly in the fiber"));
        }
    }
    // rank exactly t: scalar relation happens exactly for equal kernel and
    // image, and the scalar is 1 exactly for a unimodular middle twist
    for case in 0..20 {
        let t = 2;
        let m = rng.gen_range(t + 1..=5);
        let n = rng.gen_range(m..=5);
        let l = random_full_rank(&mut rng, m, t);
        let r = random_full_rank(&mut rng, t, n);
        let f = l.matmul(&r).unwrap();
        let unimodular = DenseMatrix::from_rows(vec![
            vec![ExactScalar::from_int(3), ExactScalar::from_int(1)],
            vec![ExactScalar::from_int(2), ExactScalar::from_int(1)],
        ])
        .unwrap();
        let g = l.matmul(&unimodular).unwrap().matmul(&r).unwrap();
        let fiber = same_fiber_rank_t(&f, &g, t).unwrap();
        if !fiber.scalar_is_one() {
            failures.push(format!("case {case}: unimodular twist scalar is {:?}", fiber.scalar));
        }
        let scaled = DenseMatrix::from_int_rows(&[&[2, 0], &[0, 1]]);
        let g = l.matmul(&scaled).unwrap().matmul(&r).unwrap();
        let fiber = same_fiber_rank_t(&f, &g, t).unwrap();
        if fiber.scalar != Some(ExactScalar::from_int(2)) {
            failures.push(format!("case {case}: det-2 twist scalar is {:?}", fiber.scalar));
        }
        // an independent random rank-t map almost surely has another kernel
        let h = random_matrix(m, n, t, rng.gen::<u64>()).unwrap();
        let same_spaces = {
            let ker = linalg::rank(&f.vstack(&h).unwrap()) == t;
            let img = linalg::rank(&f.transpose().vstack(&h.transpose()).unwrap()) == t;
            ker && img
        };
        let fiber = same_fiber_rank_t(&f, &h, t).unwrap();
        if fiber.related() != same_spaces {
            failures.push(format!("case {case}: scalar relation disagrees with subspace equality"));
        }
    }
    conclude(11, "fibers of the compound map", failures);
}

#[test]
fn criterion_12_theta_and_retraction() {
    let mut failures = Vec::new();
    let (m, n, t) = (5, 5, 3);
    for v in [1usize, 2] {
        let alpha = DecomposableSpec::standard(v, m).unwrap();
        let y = DecomposableSpec::standard(v, n).unwrap();
        for orbit in admissible_pairs(m - v, t - v) {
            let small = normal_form(orbit, m - v, n - v, t - v).unwrap();
            let lifted = theta(&alpha, &y, &small).unwrap();
            let expected = normal_form(orbit, m, n, t).unwrap();
            if lifted != expected {
                failures.push(format!("theta of {orbit:?} at v = {v} is not the normal form"));
            }
        }
        // retraction inverts theta on random points
        let mut rng = rng_from_seed(20_12 + v as u64);
        use rand::Rng;
        for case in 0..10 {
            let coords = DenseMatrix::from_fn(
                binomial(m - v, t - v),
                binomial(n - v, t - v),
                |_, _| ExactScalar::from_int(rng.gen_range(-9..=9)),
            );
            let f = ExteriorPoint::new(m - v, n - v, t - v, coords).unwrap();
            let lifted = theta(&alpha, &y, &f).unwrap();
            if retract_project(&lifted, v).unwrap() != f {
                failures.push(format!("retraction fails at v = {v}, case {case}"));
            }
        }
    }
    conclude(12, "theta and retraction", failures);
}

#[test]
fn criterion_13_cli_determinism() {
    let mut failures = Vec::new();
    let dir = std::env::temp_dir().join(format!("exteria-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mat = dir.join("b.txt");
    std::fs::write(&mat, "3 4\n1 2 0 1\n0 1 1 -1\n2 0 1 3\n").unwrap();
    let mat2 = dir.join("c.txt");
    std::fs::write(&mat2, "3 4\n-1 -2 0 -1\n0 -1 -1 1\n-2 0 -1 -3\n").unwrap();
    let mat_str = mat.to_str().unwrap();
    let mat2_str = mat2.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["compound", "--input", mat_str, "--t", "2"],
        vec!["small-rank", "--m", "3", "--n", "4", "--t", "2", "--point", "smooth", "--seed", "7"],
        vec![
            "small-rank", "--m", "3", "--n", "4", "--t", "2", "--point", "smooth", "--seed", "7",
            "--strategy", "certificate",
        ],
        vec!["classify", "--m", "4", "--n", "4", "--t", "2", "--point", "normal:u=2,k=1", "--seed", "5"],
        vec!["normal-form", "--m", "4", "--n", "4", "--t", "2", "--u", "3", "--k", "1"],
        vec!["testfn", "--m", "4", "--n", "4", "--t", "2", "--point", "normal:u=3,k=2"],
        vec!["shapes", "--lambda", "3,1", "--t", "2", "--m", "4"],
        vec!["primes", "--m", "5", "--t", "3"],
        vec!["primes", "--m", "4", "--t", "2", "--format", "tsv"],
        vec!["relations", "gen", "--family", "genplu2", "--s", "0", "--t", "2"],
        vec!["relations", "gen", "--family", "pushforward", "--t", "2", "--family-seed", "3"],
        vec!["relations", "verify", "--family", "twelve-term"],
        vec![
            "relations", "verify", "--family", "degree3", "--which", "6e", "--mode",
            "probabilistic", "--seed", "11",
        ],
        vec!["localize", "--m", "3", "--n", "4", "--t", "2", "--threads", "2"],
        vec!["tangent", "--m", "3", "--n", "4", "--t", "2", "--deg", "3", "--point", "rank1"],
        vec!["fibers", "--t", "2", "--left", mat_str, "--right", mat2_str],
        vec!["sing-count", "--m", "4", "--n", "4", "--t", "2"],
    ];
    for args in &invocations {
        let run = |args: &[&str]| {
            Command::new(env!("CARGO_BIN_EXE_exteria"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let first = run(args);
        let second = run(args);
        if !first.status.success() {
            failures.push(format!("{args:?} exited with {:?}", first.status.code()));
            continue;
        }
        if first.stdout != second.stdout {
            failures.push(format!("{args:?} is not byte-identical across runs"));
        }
    }
    conclude(13, "CLI determinism", failures);
}
