//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every grid, tolerance and time budget is pinned below.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;

use domino_core::crossed;
use domino_core::cstar::{self, AbelianGroupDescriptor};
use domino_core::domino::{self, compose, complete_path, BasicData, DominoGraph, Grid, PartialRect, PathRect};
use domino_core::graphalg::{self, DirectedGraph};
use domino_core::twograph;
use domino_core::words;
use domino_core::Limits;

/// Alphabet sizes for the sweeps that materialize skeletons or paths.
const HEAVY_Q: [u32; 4] = [2, 3, 4, 5];
/// Largest alphabet for sweeps that only evaluate formulas.
const WIDE_Q_MAX: u32 = 64;

const TABLE_BUDGET: Duration = Duration::from_secs(1);
const CYCLES_BUDGET: Duration = Duration::from_secs(1);
const LYNDON_BUDGET: Duration = Duration::from_secs(60);
const LYNDON_MAX_N: usize = 12;
const LYNDON_MAX_WORDS: u64 = 1_000_000;
const PARTITION_BUDGET: Duration = Duration::from_secs(30);
const PARTITION_MAX_VERTICES: u64 = 100_000;
const AXIOMS_BUDGET: Duration = Duration::from_secs(60);
const SKELETON_MAX_VERTICES: u64 = 4096;
const FACTOR_BUDGET: Duration = Duration::from_secs(120);
const FACTOR_MAX_VERTICES: u64 = 64;
const FACTOR_MAX_DEGREE: (u32, u32) = (2, 2);
const ISO_BUDGET: Duration = Duration::from_secs(60);
const GRAPH_BUDGET: Duration = Duration::from_secs(60);
const GRAPH_SAMPLES: usize = 500;
const GRAPH_MAX_VERTICES: usize = 8;
const GRAPH_SEED: u64 = 20_240_611;

const TABLE_FIXTURE: &str = include_str!("../fixtures/table_6_2.txt");
const MU: &str = include_str!("../../core/fixtures/mu.txt");
const NU: &str = include_str!("../../core/fixtures/nu.txt");
const MU_NU_PARTIAL: &str = include_str!("../../core/fixtures/mu_nu_partial.txt");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(budget: Duration, start: Instant, detail: String) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed <= budget {
        Ok(format!("{detail}; {:.2?} (budget {budget:?})", elapsed))
    } else {
        Err(format!("{detail}; took {:.2?}, over budget {budget:?}", elapsed))
    }
}

/// `(n, q)` pairs with `q` from `qs` and `q^(n-1) <= max_vertices`.
fn grid(qs: impl IntoIterator<Item = u32>, max_vertices: u64) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for q in qs {
        let mut n = 1usize;
        while u64::from(q).checked_pow(n as u32 - 1).is_some_and(|v| v <= max_vertices) {
            out.push((n, q));
            n += 1;
        }
    }
    out
}

fn all_data(qs: impl IntoIterator<Item = u32>, max_vertices: u64) -> Vec<BasicData> {
    grid(qs, max_vertices)
        .into_iter()
        .flat_map(|(n, q)| (0..q).map(move |t| BasicData::new(n, q, t).unwrap()))
        .collect()
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_domino"))
        .args(["table", "-n", "6", "-q", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(format!("exit status {}", output.status));
    }
    if output.stdout != TABLE_FIXTURE.as_bytes() {
        return Err(format!("output differs from fixture:\n{}", String::from_utf8_lossy(&output.stdout)));
    }
    let zero = words::enumerate_necklaces(6, 2, 0).map_err(|e| e.to_string())?.len();
    let one = words::enumerate_necklaces(6, 2, 1).map_err(|e| e.to_string())?.len();
    if (zero, one) != (8, 6) {
        return Err(format!("{zero} trace-0 and {one} trace-1 necklaces"));
    }
    within(TABLE_BUDGET, start, "byte-identical to fixture, 8 + 6 necklaces".into())
}

fn example_cycle_counts() -> Outcome {
    let start = Instant::now();
    let data = BasicData::new(6, 2, 0).unwrap();
    let expected: BTreeMap<usize, u64> = [(1, 2), (2, 0), (3, 2), (6, 4)].into();
    let formula: BTreeMap<usize, u64> = domino::blue_cycle_counts(&data)
        .into_iter()
        .map(|(d, h)| (d, words::small(&h).unwrap_or(u64::MAX)))
        .collect();
    let walked = domino::blue_cycle_counts_by_orbits(&data, 1 << 20).map_err(|e| e.to_string())?;
    if formula != expected || walked != expected {
        return Err(format!("formula {formula:?}, orbit walk {walked:?}"));
    }
    within(CYCLES_BUDGET, start, format!("{expected:?} by formula and orbit walk"))
}

fn lyndon_formula() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for q in HEAVY_Q {
        for n in 1..=LYNDON_MAX_N {
            if u64::from(q).pow(n as u32) > LYNDON_MAX_WORDS {
                break;
            }
            for t in 0..q {
                let formula = words::count_lyndon(n, q, t).map_err(|e| e.to_string())?;
                let brute = words::count_lyndon_bruteforce(n, q, t, LYNDON_MAX_WORDS).map_err(|e| e.to_string())?;
                if formula != BigUint::from(brute) {
                    return Err(format!("L_{q}({n},{t}): formula {formula}, enumeration {brute}"));
                }
                cases += 1;
            }
        }
    }
    within(LYNDON_BUDGET, start, format!("{cases} (n,q,t) cases"))
}

fn cycle_partition() -> Outcome {
    let start = Instant::now();
    let cases = all_data(2..=WIDE_Q_MAX, PARTITION_MAX_VERTICES);
    for data in &cases {
        let total = domino::blue_cycle_counts(data)
            .into_iter()
            .fold(BigUint::from(0u32), |acc, (d, h)| acc + h * BigUint::from(d));
        if total != data.vertex_count() {
            return Err(format!("Λ{data}: sum d*h_d = {total}"));
        }
    }
    within(PARTITION_BUDGET, start, format!("{} cases, q <= {WIDE_Q_MAX}", cases.len()))
}

fn skeleton_axioms() -> Outcome {
    let start = Instant::now();
    let cases = all_data(HEAVY_Q, SKELETON_MAX_VERTICES);
    let mut squares = 0usize;
    for data in &cases {
        let sk = domino::build_skeleton(data, &Limits::default()).map_err(|e| e.to_string())?;
        let report = twograph::check_axioms(&sk);
        if !report.is_ok() {
            return Err(format!("Λ{data}: {:?}", report.violations.first()));
        }
        squares += report.squares;
    }
    within(AXIOMS_BUDGET, start, format!("{} cases, {squares} squares, q in {HEAVY_Q:?}", cases.len()))
}

fn unique_factorisation() -> Outcome {
    let start = Instant::now();
    let cases = all_data(HEAVY_Q, FACTOR_MAX_VERTICES);
    let mut checked = 0u64;
    for data in &cases {
        let report =
            domino::check_unique_factorisation(data, FACTOR_MAX_DEGREE, &Limits::default()).map_err(|e| e.to_string())?;
        if !report.is_ok() {
            return Err(format!("Λ{data}: {:?}", report.failures.first()));
        }
        checked += report.factorisations;
    }
    within(FACTOR_BUDGET, start, format!("{} cases, {checked} factorisations, q in {HEAVY_Q:?}", cases.len()))
}

fn composition_fixture() -> Outcome {
    let data = BasicData::new(6, 2, 0).unwrap();
    let load = |text: &str, degree| -> Result<PathRect, String> {
        PathRect::new(data, degree, Grid::parse(text, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    let lambda = compose(&load(MU, (3, 2))?, &load(NU, (2, 1))?).map_err(|e| e.to_string())?;
    let g = lambda.grid();
    let holes = [
        ((9, 0), 0),
        ((10, 0), 1),
        ((9, 1), 1),
        ((10, 1), 1),
        ((0, 3), 1),
        ((1, 3), 1),
        ((2, 3), 1),
    ];
    for ((x, y), v) in holes {
        if g.get(x, y) != v {
            return Err(format!("cell ({x},{y}) = {}, expected {v}", g.get(x, y)));
        }
    }
    // the same partial rectangle, completed by the reference hole filler
    let partial = PartialRect::parse(data, MU_NU_PARTIAL).map_err(|e| e.to_string())?;
    let rows = (0..partial.height())
        .map(|y| (0..partial.width()).map(|x| partial.get(x, y)).collect())
        .collect();
    let oracle = oracles::fill_single_holes(rows, 6, 2, 0);
    let completed = complete_path(&partial).map_err(|e| e.to_string())?;
    for (y, row) in oracle.iter().enumerate() {
        for (x, cell) in row.iter().enumerate() {
            if *cell != Some(g.get(x, y)) || completed.grid().get(x, y) != g.get(x, y) {
                return Err(format!("oracle disagrees at ({x},{y})"));
            }
        }
    }
    if lambda.degree() != (5, 3) {
        return Err(format!("degree {:?}", lambda.degree()));
    }
    Ok("degree (5,3), 7 holes filled as documented, oracle agrees".into())
}

fn crossed_product_iso() -> Outcome {
    let start = Instant::now();
    let cases: Vec<BasicData> = all_data(HEAVY_Q, SKELETON_MAX_VERTICES)
        .into_iter()
        .filter(|d| d.n >= 2 && (d.n, d.q, d.t) != (2, 2, 0))
        .collect();
    for data in &cases {
        let report = crossed::verify_iso(data, &Limits::default()).map_err(|e| e.to_string())?;
        if report.status != crossed::IsoStatus::Verified {
            return Err(format!("Λ{data}: {report:?}"));
        }
    }
    within(ISO_BUDGET, start, format!("{} cases, q in {HEAVY_Q:?}", cases.len()))
}

fn sigma_orders() -> Outcome {
    let cases = all_data(2..=WIDE_Q_MAX, SKELETON_MAX_VERTICES);
    for data in &cases {
        let expected = if data.n == 1 || (data.n, data.q, data.t) == (2, 2, 0) { 1 } else { data.n as u64 };
        let by_formula = domino::sigma_order(data);
        let walked = domino::blue_cycle_counts_by_orbits(data, SKELETON_MAX_VERTICES).map_err(|e| e.to_string())?;
        let by_walk = walked
            .iter()
            .filter(|&(_, &h)| h > 0)
            .fold(1u64, |acc, (&d, _)| oracles::lcm(acc, d as u64));
        if by_formula != expected || by_walk != expected {
            return Err(format!("Λ{data}: formula {by_formula}, walk {by_walk}, expected {expected}"));
        }
    }
    let graph = DominoGraph::build(BasicData::new(6, 2, 0).unwrap(), &Limits::default()).map_err(|e| e.to_string())?;
    let mut v = 1u32;
    let mut steps = 0;
    loop {
        v = graph.sigma_ids()[v as usize];
        steps += 1;
        if v == 1 {
            break;
        }
    }
    Ok(format!("{} cases, q <= {WIDE_Q_MAX}; σ-orbit of 000001 in Λ(6,2,0) has length {steps}", cases.len()))
}

fn k_theory() -> Outcome {
    let mut cases = 0;
    for q in 2..=WIDE_Q_MAX {
        for n in 1..=12usize {
            for t in 0..q {
                let data = BasicData::new(n, q, t).unwrap();
                let (k0, k1) = cstar::k_theory(&data);
                let expected = if n == 1 {
                    AbelianGroupDescriptor::free(2)
                } else if (n, q, t) == (2, 2, 0) {
                    AbelianGroupDescriptor::trivial()
                } else {
                    AbelianGroupDescriptor::cyclic(big_pow(q, n - 1) - 1u32)
                };
                if k0 != expected || k1 != expected {
                    return Err(format!("Λ{data}: ({k0}, {k1}), expected {expected}"));
                }
                cases += 1;
            }
        }
    }
    let (k0, k1) = cstar::k_theory(&BasicData::new(6, 2, 0).unwrap());
    if k0.to_string() != "Z/31" || k1 != k0 {
        return Err(format!("Λ(6,2,0): ({k0}, {k1})"));
    }
    Ok(format!("{cases} cases, (6,2,0) gives Z/31 in both degrees"))
}

fn big_pow(q: u32, e: usize) -> BigUint {
    (0..e).fold(BigUint::from(1u32), |acc, _| acc * q)
}

fn graph_analytics() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(GRAPH_SEED);
    let (mut primitive, mut other) = (0, 0);
    for i in 0..GRAPH_SAMPLES {
        let adj = oracles::random_digraph(&mut rng, GRAPH_MAX_VERTICES);
        let nv = adj.len();
        let g = DirectedGraph::from_edges(nv, &oracles::edges_of(&adj)).map_err(|e| e.to_string())?;
        let sc = graphalg::is_strongly_connected(&g);
        let period_one = sc && graphalg::graph_period(&g).ok() == Some(1);
        let exponent = graphalg::min_connectivity_exponent(&g, graphalg::default_exponent_cap(&g))
            .map_err(|e| e.to_string())?
            .value();
        if period_one != exponent.is_some() {
            return Err(format!("sample {i}: strongly connected {sc}, period one {period_one}, exponent {exponent:?}"));
        }
        let wielandt = ((nv - 1) * (nv - 1) + 1) as u64;
        let brute = oracles::exponent(&adj, wielandt);
        if exponent != brute {
            return Err(format!("sample {i}: exponent {exponent:?}, brute force {brute:?}"));
        }
        if sc != oracles::strongly_connected(&adj) {
            return Err(format!("sample {i}: strong connectivity disagrees with closure"));
        }
        if period_one {
            primitive += 1;
        } else {
            other += 1;
        }
    }
    within(GRAPH_BUDGET, start, format!("{GRAPH_SAMPLES} graphs ({primitive} primitive, {other} not)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("necklace table reproduction", table_reproduction),
        ("example blue cycle counts", example_cycle_counts),
        ("Lyndon formula vs enumeration", lyndon_formula),
        ("cycle partition identity", cycle_partition),
        ("skeleton axioms", skeleton_axioms),
        ("unique factorisation", unique_factorisation),
        ("composition fixture", composition_fixture),
        ("crossed-product isomorphism", crossed_product_iso),
        ("σ order", sigma_orders),
        ("K-theory", k_theory),
        ("graph analytics equivalence", graph_analytics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
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
