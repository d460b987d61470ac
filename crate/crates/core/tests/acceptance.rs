//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines come out in
//! order; the process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidkit_core::corpus::{self, CORPUS};
use rigidkit_core::energy::{energy_along_trajectory, EnergySpec};
use rigidkit_core::growth::{self, fit_growth_order, min_energy_on_sphere};
use rigidkit_core::jet::{factorial, Jet};
use rigidkit_core::poly::{Monomial, Polynomial};
use rigidkit_core::rigidity::decompose;
use rigidkit_core::{
    auto_pin, faa_di_bruno_term, fourth_derivative_test, order2k_family_test, pin, rigidity_order,
    AnalyticTarget, Classification, EnergyFamily, Framework, OrderReport, PinnedFramework, PolyTrajectory,
    Verdict, DEFAULT_LADDER_TOL, DEFAULT_MAX_K, DEFAULT_RANK_TOL,
};

const MARGIN_MIN: f64 = 1e3;
const LADDER_BUDGET: Duration = Duration::from_secs(5);
const POLY_BUDGET: Duration = Duration::from_secs(1);
const FAA_BUDGET: Duration = Duration::from_secs(1);
const GROWTH_BUDGET: Duration = Duration::from_secs(60);
const JET_VANISH_TOL: f64 = 1e-8;
const FAA_REL_TOL: f64 = 1e-10;
const A4_ZERO_TOL: f64 = 1e-6;
const SQUARE_RESIDUAL_MAX: f64 = 1e-10;
const SQUARE_ENERGY_MAX: f64 = 1e-14;

type Outcome = Result<String, String>;

fn pinned(name: &str) -> PinnedFramework {
    let f = corpus::get(name).unwrap().framework().unwrap();
    auto_pin(&f, DEFAULT_RANK_TOL).unwrap().pinned
}

fn ladder(pf: &PinnedFramework) -> OrderReport {
    rigidity_order(pf, DEFAULT_MAX_K, DEFAULT_LADDER_TOL).unwrap()
}

fn square() -> PinnedFramework {
    let points = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
    let f = Framework::new(2, points, [(0, 1), (1, 2), (2, 3), (3, 0)], None).unwrap();
    pin(&f, DEFAULT_RANK_TOL).unwrap().0
}

fn triangle() -> PinnedFramework {
    let points = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 1.0]];
    let f = Framework::new(2, points, [(0, 1), (1, 2), (0, 2)], None).unwrap();
    pin(&f, DEFAULT_RANK_TOL).unwrap().0
}

fn corpus_orders() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut bad = Vec::new();
    for entry in CORPUS.iter() {
        let report = ladder(&pinned(entry.name));
        let margin = report.margin().unwrap_or(0.0);
        notes.push(format!("{}={:?} (margin {:.1e})", entry.name, report.order(), margin));
        if report.order() != Some(entry.expected_order) || margin < MARGIN_MIN {
            bad.push(entry.name);
        }
    }
    let elapsed = start.elapsed();
    let detail = format!("{} in {:.2?}", notes.join(", "), elapsed);
    if bad.is_empty() && elapsed < LADDER_BUDGET {
        Ok(detail)
    } else {
        Err(format!("mismatch {bad:?}; {detail}"))
    }
}

fn corpus_dim_k() -> Outcome {
    let dims: Vec<usize> = CORPUS.iter().map(|e| decompose(&pinned(e.name)).1.dim_k).collect();
    if dims.iter().all(|&d| d == 1) {
        Ok(format!("dimK {dims:?}"))
    } else {
        Err(format!("dimK {dims:?}"))
    }
}

fn poly(terms: &[([u32; 2], f64)]) -> AnalyticTarget {
    let terms = terms.iter().map(|(e, c)| Monomial { exps: e.to_vec(), coef: *c }).collect();
    AnalyticTarget::Polynomial(Polynomial::new(terms).unwrap())
}

// (x - y^2)^2 + A y^4
fn quartic_family(a: f64) -> AnalyticTarget {
    poly(&[([2, 0], 1.0), ([1, 2], -2.0), ([0, 4], 1.0 + a)])
}

fn polynomial_tests() -> Outcome {
    let start = Instant::now();
    let crit = |t: &AnalyticTarget| fourth_derivative_test(t, 1e-8, 64).unwrap();
    let plus = crit(&quartic_family(1.0));
    let minus = crit(&quartic_family(-1.0));
    let zero = crit(&quartic_family(0.0));
    // (x - y^2)^2 + x^2 y^2 - y^6
    let saddle = crit(&poly(&[([2, 0], 1.0), ([1, 2], -2.0), ([0, 4], 1.0), ([2, 2], 1.0), ([0, 6], -1.0)]));
    let elapsed = start.elapsed();

    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let located = [1.0, -1.0].iter().all(|&s| {
        zero.zeros.iter().any(|z| {
            (z.second[0] - phi).abs() < A4_ZERO_TOL
                && z.second[1].abs() < A4_ZERO_TOL
                && z.first[0].abs() < A4_ZERO_TOL
                && (z.first[1] - s * phi.sqrt()).abs() < A4_ZERO_TOL
        })
    });
    let detail = format!(
        "A=1 {:?}, A=-1 {:?}, A=0 {:?} with {} zeros, second example {:?}, {:.2?}",
        plus.classification,
        minus.classification,
        zero.classification,
        zero.zeros.len(),
        saddle.classification,
        elapsed
    );
    let ok = plus.classification == Classification::StrictMin
        && minus.classification == Classification::Saddle
        && zero.classification == Classification::Inconclusive
        && located
        && saddle.classification == Classification::Inconclusive
        && elapsed < POLY_BUDGET;
    if ok {
        Ok(detail)
    } else {
        Err(format!("{detail}; zeros located: {located}"))
    }
}

fn e_flex_property() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let mut checked = 0;
    for entry in CORPUS.iter() {
        let pf = pinned(entry.name);
        let report = ladder(&pf);
        let (Some(k), Some(witness)) = (report.order(), report.witness.as_ref()) else {
            bad.push(format!("{}: no witness", entry.name));
            continue;
        };
        let order = 2 * k as usize;
        for family in EnergyFamily::ALL {
            let spec = EnergySpec::new(family, pf.framework());
            let jet = energy_along_trajectory(&spec, &pf, witness, order).unwrap();
            let c = jet.coeffs();
            let cmax = c[1..=order].iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let low = c[1..order].iter().fold(0.0f64, |m, x| m.max(x.abs())) / cmax;
            worst = worst.max(low);
            checked += 1;
            if !(low < JET_VANISH_TOL && c[order] > 0.0) {
                bad.push(format!("{} {}: low {low:.1e}, c{order} {:.3e}", entry.name, family, c[order]));
            }
        }
    }
    let detail = format!("{checked} witness/energy pairs, worst low-order ratio {worst:.1e}");
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", bad.join("; ")))
    }
}

// The explicit expansions of d^n/dt^n f(g(t)) for n = 1..6.
fn printed_expansion(f: &[f64], g: &[f64], n: usize) -> f64 {
    let (g1, g2, g3, g4, g5, g6) = (g[1], g[2], g[3], g[4], g[5], g[6]);
    match n {
        1 => f[1] * g1,
        2 => f[1] * g2 + f[2] * g1 * g1,
        3 => f[1] * g3 + 3.0 * f[2] * g1 * g2 + f[3] * g1.powi(3),
        4 => {
            f[1] * g4 + f[2] * (4.0 * g1 * g3 + 3.0 * g2 * g2) + f[3] * 6.0 * g1 * g1 * g2 + f[4] * g1.powi(4)
        }
        5 => {
            f[1] * g5
                + f[2] * (5.0 * g1 * g4 + 10.0 * g2 * g3)
                + f[3] * (10.0 * g1 * g1 * g3 + 15.0 * g1 * g2 * g2)
                + f[4] * 10.0 * g1.powi(3) * g2
                + f[5] * g1.powi(5)
        }
        6 => {
            f[1] * g6
                + f[2] * (6.0 * g1 * g5 + 15.0 * g2 * g4 + 10.0 * g3 * g3)
                + f[3] * (15.0 * g1 * g1 * g4 + 60.0 * g1 * g2 * g3 + 15.0 * g2.powi(3))
                + f[4] * (20.0 * g1.powi(3) * g3 + 45.0 * g1 * g1 * g2 * g2)
                + f[5] * 15.0 * g1.powi(4) * g2
                + f[6] * g1.powi(6)
        }
        _ => unreachable!(),
    }
}

fn faa_di_bruno_oracle() -> Outcome {
    const N_MAX: usize = 8;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let f: Vec<f64> = (0..=N_MAX).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g: Vec<f64> = (0..=N_MAX).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f_taylor: Vec<f64> = f.iter().enumerate().map(|(i, d)| d / factorial(i)).collect();
        let composed: Jet = Jet::from_derivatives(&g, N_MAX).compose(&f_taylor);
        for n in 1..=N_MAX {
            let explicit = faa_di_bruno_term(&f, &g, n);
            let via_jet = composed.derivative(n);
            let mut rel = (explicit - via_jet).abs() / explicit.abs().max(via_jet.abs()).max(f64::MIN_POSITIVE);
            if n <= 6 {
                let printed = printed_expansion(&f, &g, n);
                rel = rel.max((printed - via_jet).abs() / printed.abs().max(via_jet.abs()).max(f64::MIN_POSITIVE));
            }
            worst = worst.max(rel);
        }
    }
    let elapsed = start.elapsed();
    let detail = format!("1000 pairs, n <= {N_MAX}, worst relative {worst:.1e}, {elapsed:.2?}");
    if worst < FAA_REL_TOL && elapsed < FAA_BUDGET {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn growth_fits() -> Outcome {
    use growth::{DEFAULT_N_RADII, DEFAULT_R_MAX, DEFAULT_R_MIN, DEFAULT_STARTS};
    let start = Instant::now();
    let fit = |pf: &PinnedFramework, family: EnergyFamily| {
        let spec = EnergySpec::new(family, pf.framework());
        fit_growth_order(&spec, pf, DEFAULT_R_MIN, DEFAULT_R_MAX, DEFAULT_N_RADII, DEFAULT_STARTS, 0)
            .map(|f| f.fitted_s)
            .unwrap_or(f64::NAN)
    };
    let tri = triangle();
    let k33 = pinned("k33");
    let hfp = pinned("half_flat_prism");
    let s_tri: Vec<f64> = EnergyFamily::ALL.iter().map(|&fam| fit(&tri, fam)).collect();
    let s_k33: Vec<f64> =
        [EnergyFamily::Harmonic, EnergyFamily::Algebraic, EnergyFamily::Morse].iter().map(|&fam| fit(&k33, fam)).collect();
    let s_hfp = fit(&hfp, EnergyFamily::Harmonic);
    let elapsed = start.elapsed();

    let spread = s_k33.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
        - s_k33.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let ok = s_tri.iter().all(|s| (s - 2.0).abs() <= 0.2)
        && (s_k33[0] - 6.0).abs() <= 0.5
        && spread <= 0.5
        && (s_hfp - 8.0).abs() <= 0.5
        && elapsed < GROWTH_BUDGET;
    let detail = format!(
        "triangle {:.3?}, k33 harmonic/algebraic/morse {:.3?} (spread {spread:.3}), half_flat_prism {s_hfp:.3}, {elapsed:.1?}",
        s_tri, s_k33
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn family_consistency() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, k) in [("half_flat_prism", 4usize), ("k33", 3)] {
        let pf = pinned(name);
        let report = ladder(&pf);
        let witness = report.witness.clone().unwrap();
        let spec = EnergySpec::new(EnergyFamily::Harmonic, pf.framework());
        let at_k = order2k_family_test(&pf, &spec, &witness, k, 1e-8).unwrap();
        let below: PolyTrajectory = witness.truncated(k - 2);
        let at_km1 = order2k_family_test(&pf, &spec, &below, k - 1, 1e-8).unwrap();
        notes.push(format!("{name}: k={k} {:?}, k={} {:?}", at_k.classification, k - 1, at_km1.classification));
        ok &= at_k.classification == Classification::StrictMin && at_km1.classification == Classification::Inconclusive;
    }
    if ok {
        Ok(notes.join("; "))
    } else {
        Err(notes.join("; "))
    }
}

fn relabel_invariance() -> Outcome {
    let base = corpus::get("k33").unwrap().framework().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut orders = Vec::new();
    for _ in 0..20 {
        let mut perm: Vec<usize> = (0..base.n_vertices()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let relabeled = base.permuted(&perm).unwrap();
        let pf = auto_pin(&relabeled, DEFAULT_RANK_TOL).unwrap().pinned;
        orders.push(ladder(&pf).verdict);
    }
    let good = orders.iter().filter(|v| **v == Verdict::Order(3)).count();
    if good == 20 {
        Ok("20/20 permutations give Order(3)".into())
    } else {
        Err(format!("{good}/20 give Order(3): {orders:?}"))
    }
}

fn negative_control() -> Outcome {
    let pf = square();
    let report = ladder(&pf);
    let worst = report.residuals.iter().fold(0.0f64, |m, r| m.max(r.relative));
    let spec = EnergySpec::new(EnergyFamily::Harmonic, pf.framework());
    let radii = growth::geometric_radii(growth::DEFAULT_R_MIN, growth::DEFAULT_R_MAX, growth::DEFAULT_N_RADII);
    let m_worst = radii
        .iter()
        .map(|&r| min_energy_on_sphere(&spec, &pf, r, growth::DEFAULT_STARTS, 0).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let detail = format!(
        "{:?}, {} levels, worst relative residual {worst:.1e}, worst m(r) {m_worst:.1e}",
        report.verdict,
        report.residuals.len()
    );
    let ok = report.verdict == Verdict::FlexFoundUpTo(DEFAULT_MAX_K)
        && report.residuals.iter().all(|r| r.accepted)
        && worst < SQUARE_RESIDUAL_MAX
        && m_worst < SQUARE_ENERGY_MAX;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("corpus rigidity orders", corpus_orders),
        ("corpus flex spaces are one-dimensional", corpus_dim_k),
        ("polynomial fourth derivative tests", polynomial_tests),
        ("witnesses are energy flexes", e_flex_property),
        ("Faa di Bruno oracle", faa_di_bruno_oracle),
        ("growth-order fits", growth_fits),
        ("order-2k family consistency", family_consistency),
        ("relabel invariance", relabel_invariance),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
