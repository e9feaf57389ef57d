//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p forest-bottleneck --test acceptance`. The process
//! exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use forest_bottleneck::generate::{
    generate, random_edges, random_multidigraph, rng_from_seed, GraphKind, WeightRange,
};
use forest_bottleneck::matrix::DenseMatrix;
use forest_bottleneck::routes::{companion_matrix, RouteMethod, RouteTable};
use forest_bottleneck::{
    choose_epsilon, determinant, forest_matrices, is_bottleneck, oracle_matrices, route_matrix,
    route_weight_by_length, stochastic_matrix, verify_all_triples, verify_undirected, Arc,
    Rational, Relation, WeightedMultiDigraph, DEFAULT_FOREST_CAP, DEFAULT_ROUTE_CAP,
};
use num_traits::{One, Signed, Zero};

const CORPUS_SEED: u64 = 20_081_020;
const CORPUS_SIZE: usize = 200;
const MAX_ARCS: usize = 8;
const SERIES_TOLERANCE: f64 = 1e-12;
const SERIES_MAX_TERMS: usize = 100_000;
const TAIL_BOUND_LIMIT: f64 = 1e-9;
const MAX_ROUTE_LENGTH: usize = 6;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn weights() -> WeightRange {
    WeightRange::new(1, 5).unwrap()
}

/// 200 seeded multidigraphs, n in 2..=5, at most 8 arcs, weights p/q with
/// p, q in 1..=5.
fn corpus() -> Vec<WeightedMultiDigraph> {
    let mut rng = rng_from_seed(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let n = rand::Rng::random_range(&mut rng, 2..=5);
            random_multidigraph(&mut rng, n, MAX_ARCS, weights())
        })
        .collect()
}

fn triangle() -> WeightedMultiDigraph {
    WeightedMultiDigraph::new(
        3,
        vec![Arc::new(0, 1, q(1, 1)), Arc::new(1, 2, q(1, 1)), Arc::new(0, 2, q(1, 1))],
    )
    .unwrap()
}

fn fixture(kind: GraphKind, n: usize) -> WeightedMultiDigraph {
    generate(kind, n, 0, WeightRange::UNIT).unwrap().to_graph().unwrap()
}

fn fixtures() -> Vec<(&'static str, WeightedMultiDigraph)> {
    vec![
        ("path", fixture(GraphKind::Path, 3)),
        ("cycle", fixture(GraphKind::Cycle, 4)),
        ("complete", fixture(GraphKind::Complete, 4)),
        ("triangle", triangle()),
    ]
}

fn corpus_and_fixtures() -> Vec<WeightedMultiDigraph> {
    let mut all = corpus();
    all.extend(fixtures().into_iter().map(|(_, g)| g));
    all
}

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    ensure(start.elapsed() < budget, || {
        format!("took {:.1?}, budget {:?}", start.elapsed(), budget)
    })
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let corpus = corpus();
    for (index, g) in corpus.iter().enumerate() {
        let fm = forest_matrices::<Rational>(g);
        let oracle = oracle_matrices(g, DEFAULT_FOREST_CAP).map_err(|e| e.to_string())?;
        let n = g.vertex_count();
        let det = determinant(&DenseMatrix::<Rational>::identity(n).add(&g.laplacian()));
        ensure(det == oracle.f, || format!("graph {index}: det(I+L) = {det}, oracle f = {}", oracle.f))?;
        ensure(fm.f == oracle.f, || format!("graph {index}: f differs"))?;
        ensure(fm.forests == oracle.forests, || format!("graph {index}: F differs from oracle"))?;
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{} graphs exact match, {:.2?}", corpus.len(), start.elapsed()))
}

fn theorem_sweep() -> Outcome {
    let start = Instant::now();
    let graphs = corpus_and_fixtures();
    let (mut triples, mut equal) = (0, 0);
    for (index, g) in graphs.iter().enumerate() {
        let v = verify_all_triples::<Rational>(g).map_err(|e| format!("graph {index}: {e}"))?;
        ensure(v.summary.inconsistent == 0, || format!("graph {index}: inconsistencies"))?;
        // Recheck against the enumeration oracle rather than the algebraic F.
        let oracle = oracle_matrices(g, DEFAULT_FOREST_CAP).map_err(|e| e.to_string())?;
        let f = &oracle.forests;
        for report in &v.reports {
            let [i, j, k] = report.triple;
            let lhs = f[(i, j)].clone() * f[(j, k)].clone();
            let rhs = f[(i, k)].clone() * f[(j, j)].clone();
            let separator = is_bottleneck(g, i, j, k).map_err(|e| e.to_string())?;
            ensure(lhs <= rhs, || format!("graph {index} {:?}: {lhs} > {rhs}", report.triple))?;
            ensure((lhs == rhs) == separator, || {
                format!("graph {index} {:?}: equality {} vs separator {separator}", report.triple, lhs == rhs)
            })?;
            ensure(report.lhs == lhs && report.rhs == rhs, || {
                format!("graph {index} {:?}: report disagrees with oracle", report.triple)
            })?;
        }
        triples += v.summary.triples;
        equal += v.summary.equal;
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} graphs, {triples} triples ({equal} equal), 0 inconsistent, {:.2?}",
        graphs.len(),
        start.elapsed()
    ))
}

fn closed_form_fixtures() -> Outcome {
    let path = fixture(GraphKind::Path, 3);
    let oracle = oracle_matrices(&path, DEFAULT_FOREST_CAP).map_err(|e| e.to_string())?;
    let fm = forest_matrices::<Rational>(&path);
    ensure(fm.f == q(4, 1) && oracle.f == q(4, 1), || format!("path f = {}", fm.f))?;
    // Oracle-confirmed first row: vertex 1 is a root in {} and {2->3}.
    let row = [q(2, 1), q(1, 1), q(1, 1)];
    ensure(oracle.forests.row(0) == row, || format!("oracle row 1 = {:?}", oracle.forests.row(0)))?;
    ensure(fm.forests.row(0) == row, || format!("F row 1 = {:?}", fm.forests.row(0)))?;
    let v = verify_all_triples::<Rational>(&path).map_err(|e| e.to_string())?;
    let r = &v.reports[1 * 3 + 2];
    ensure(r.triple == [0, 1, 2] && r.relation == Relation::Equal, || "path (1,2,3) not equal".into())?;
    ensure(r.lhs == q(2, 1) && r.rhs == q(2, 1), || format!("path (1,2,3): {} vs {}", r.lhs, r.rhs))?;

    let tri = triangle();
    let oracle = oracle_matrices(&tri, DEFAULT_FOREST_CAP).map_err(|e| e.to_string())?;
    ensure(oracle.f == q(6, 1), || format!("triangle oracle f = {}", oracle.f))?;
    let v = verify_all_triples::<Rational>(&tri).map_err(|e| e.to_string())?;
    ensure(v.forests.f == q(6, 1), || format!("triangle f = {}", v.forests.f))?;
    let r = &v.reports[1 * 3 + 2];
    ensure(r.relation == Relation::StrictlyLess, || "triangle (1,2,3) not strict".into())?;
    ensure(r.lhs == q(3, 1) && r.rhs == q(9, 1), || format!("triangle (1,2,3): {} vs {}", r.lhs, r.rhs))?;
    Ok("path f=4 row1=[2,1,1] (1,2,3) equal 2=2; triangle f=6 (1,2,3) strict 3<9".into())
}

fn route_proportionality() -> Outcome {
    let start = Instant::now();
    let graphs = corpus_and_fixtures();
    let (mut worst_gap, mut worst_bound, mut max_terms) = (0.0f64, 0.0f64, 0);
    for (index, g) in graphs.iter().enumerate() {
        let fm = forest_matrices::<Rational>(g);
        let default = choose_epsilon(g);
        for eps in [default.clone(), default.halved()] {
            let rm = route_matrix::<f64>(g, &eps, SERIES_TOLERANCE, SERIES_MAX_TERMS)
                .map_err(|e| format!("graph {index}, eps {eps}: {e}"))?;
            let gap = rm.forest_gap(&fm);
            ensure(gap <= rm.tail_bound, || {
                format!("graph {index}, eps {eps}: gap {gap:e} > tail bound {:e}", rm.tail_bound)
            })?;
            ensure(rm.tail_bound <= TAIL_BOUND_LIMIT, || {
                format!("graph {index}, eps {eps}: tail bound {:e} > {TAIL_BOUND_LIMIT:e}", rm.tail_bound)
            })?;
            worst_gap = worst_gap.max(gap);
            worst_bound = worst_bound.max(rm.tail_bound);
            max_terms = max_terms.max(rm.terms_used);
        }
    }
    within_budget(start, Duration::from_secs(120))?;
    Ok(format!(
        "{} graphs x 2 eps, max gap {worst_gap:.2e}, max tail bound {worst_bound:.2e}, max terms {max_terms}, {:.2?}",
        graphs.len(),
        start.elapsed()
    ))
}

fn route_length_oracle() -> Outcome {
    let start = Instant::now();
    let sub: Vec<WeightedMultiDigraph> =
        corpus().into_iter().filter(|g| g.vertex_count() <= 4).take(50).collect();
    ensure(sub.len() == 50, || format!("only {} graphs with n <= 4", sub.len()))?;
    let mut checked = 0;
    for (index, g) in sub.iter().enumerate() {
        let eps = choose_epsilon(g);
        let m = companion_matrix::<Rational>(g, &eps).map_err(|e| e.to_string())?;
        let mut power = DenseMatrix::<Rational>::identity(g.vertex_count());
        for length in 0..=MAX_ROUTE_LENGTH {
            for i in 0..g.vertex_count() {
                for j in 0..g.vertex_count() {
                    let walked = route_weight_by_length(g, &eps, i, j, length, DEFAULT_ROUTE_CAP)
                        .map_err(|e| e.to_string())?;
                    ensure(walked == power[(i, j)], || {
                        format!("graph {index}, ({}, {}), length {length}: {walked} vs {}", i + 1, j + 1, power[(i, j)])
                    })?;
                    checked += 1;
                }
            }
            power = power.mul(&m);
        }
    }
    Ok(format!("50 graphs, {checked} (i, j, length) entries exact, {:.2?}", start.elapsed()))
}

fn route_decomposition_fixtures() -> Outcome {
    let mut checked = 0;
    for (name, g) in [("path", fixture(GraphKind::Path, 3)), ("triangle", triangle())] {
        let eps = choose_epsilon(&g);
        let table = RouteTable::<Rational>::new(&g, &eps, RouteMethod::ClosedForm)
            .map_err(|e| e.to_string())?;
        let verdicts = verify_all_triples::<Rational>(&g).map_err(|e| e.to_string())?;
        for report in verdicts.reports.iter().filter(|r| !r.degenerate) {
            let [i, j, k] = report.triple;
            let d = table.decompose(i, j, k);
            ensure(d.identities_hold(0.0), || format!("{name} {:?}: identities fail", report.triple))?;
            ensure(!d.r_i_notj_k.is_negative(), || format!("{name}: negative avoiding weight"))?;
            ensure(d.relation() == report.relation, || {
                format!("{name} {:?}: route verdict {} vs forest verdict {}", report.triple, d.relation(), report.relation)
            })?;
            ensure(d.r_i_notj_k.is_zero() == report.separator, || {
                format!("{name} {:?}: avoiding weight vs separator", report.triple)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-degenerate triples, identities exact, verdicts match"))
}

fn undirected_corollary() -> Outcome {
    let mut rng = rng_from_seed(CORPUS_SEED ^ 0x5eed);
    for index in 0..50 {
        let n = rand::Rng::random_range(&mut rng, 2..=5);
        let edges = random_edges(&mut rng, n, 6, weights());
        let v = verify_undirected::<Rational>(n, &edges).map_err(|e| format!("graph {index}: {e}"))?;
        ensure(v.forests.forests.is_symmetric(), || format!("graph {index}: F not symmetric"))?;
        let doubled = WeightedMultiDigraph::from_undirected(n, &edges).map_err(|e| e.to_string())?;
        let direct = verify_all_triples::<Rational>(&doubled).map_err(|e| e.to_string())?;
        ensure(v.reports == direct.reports, || format!("graph {index}: reports differ"))?;
    }
    Ok("50 undirected graphs, F symmetric, reports identical to doubled digraph".into())
}

fn invariant_suite() -> Outcome {
    let graphs = corpus_and_fixtures();
    for (index, g) in graphs.iter().enumerate() {
        let fail = |what: &str| format!("graph {index}: {what}");
        let eps = choose_epsilon(g);
        let p = stochastic_matrix::<Rational>(g, &eps).map_err(|e| e.to_string())?;
        ensure(p.row_sums().iter().all(One::is_one), || fail("P row sums"))?;
        ensure(
            p.rows().flatten().all(|x| !x.is_negative() && *x <= Rational::one()),
            || fail("P entries outside [0, 1]"),
        )?;

        let fm = forest_matrices::<Rational>(g);
        ensure(fm.proximity.row_sums().iter().all(One::is_one), || fail("Q row sums"))?;
        ensure(fm.forests.row_sums().iter().all(|s| *s == fm.f), || fail("F row sums"))?;

        let oracle = oracle_matrices(g, DEFAULT_FOREST_CAP).map_err(|e| e.to_string())?;
        let merged = oracle_matrices(&g.merged_parallel_arcs(), DEFAULT_FOREST_CAP)
            .map_err(|e| e.to_string())?;
        ensure(merged.f == oracle.f && merged.forests == oracle.forests, || fail("merge changes (f, F)"))?;
        if let Some(first) = g.arcs().first() {
            // Split the first arc into two parallel arcs of weight w/3 and 2w/3.
            let mut arcs = g.arcs().to_vec();
            arcs[0].weight = first.weight.clone() / q(3, 1);
            arcs.push(Arc::new(first.tail, first.head, first.weight.clone() * q(2, 3)));
            let split = WeightedMultiDigraph::new(g.vertex_count(), arcs).map_err(|e| e.to_string())?;
            let split = oracle_matrices(&split, DEFAULT_FOREST_CAP).map_err(|e| e.to_string())?;
            ensure(split.f == oracle.f && split.forests == oracle.forests, || fail("split changes (f, F)"))?;
        }

        let base = verify_all_triples::<Rational>(g).map_err(|e| e.to_string())?;
        for t in [q(2, 1), q(1, 3)] {
            let scaled = g.scaled(&t).map_err(|e| e.to_string())?;
            let v = verify_all_triples::<Rational>(&scaled).map_err(|e| e.to_string())?;
            let same = base.reports.iter().zip(&v.reports).all(|(a, b)| a.relation == b.relation);
            ensure(same, || fail(&format!("verdicts change under scaling by {t}")))?;
        }
    }
    Ok(format!("{} graphs: P stochastic, Q/F row sums, merge/split and scaling invariance", graphs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 bottleneck theorem sweep", theorem_sweep),
        ("3 closed-form fixtures", closed_form_fixtures),
        ("4 route/forest proportionality", route_proportionality),
        ("5 route-length oracle", route_length_oracle),
        ("6 route decomposition", route_decomposition_fixtures),
        ("7 undirected corollary", undirected_corollary),
        ("8 invariant suite", invariant_suite),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
