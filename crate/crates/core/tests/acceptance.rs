//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines show up in `cargo test`
//! output. The process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use chanlab::channels::{nonlinear_counterexample, transpose_witness};
use chanlab::entropy::{
    additivity_check, ampss_audit, classical_distance, relative_entropy, trace_distance_report,
    von_neumann_entropy, AmpssEntropies, EntropyConfig,
};
use chanlab::holo::{
    build_embedding, chain_with, default_probes, prepare, reconstruct_with, EmbeddingKind, HoloDims,
};
use chanlab::linalg::{trace_norm, Operator, C64};
use chanlab::qec::{
    circuit_readout, encode, random_logical, roundtrip, shor_code, single_qubit_errors, three_qubit_code,
    PauliString, StabilizerCode,
};
use chanlab::random::{
    ginibre, random_density_with, random_hermitian, random_multipartite, random_pure, random_unitary,
    seeded_rng, substream,
};
use chanlab::recovery::{erasure_example, recoverability_gap, tomographic_states, QuadratureGrid};
use chanlab::states::{schmidt, DensityOperator, PureState};
use chanlab::suites::{choi_roundtrip_fuzz, dilation_fuzz, entropy_fuzz, monotonicity_fuzz, recovery_fuzz};
use rand::Rng;

type Verdict = chanlab::Result<(bool, String)>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Verdict,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "entropy axioms", budget: Duration::from_secs(1), run: entropy_axioms },
        Criterion { id: 2, name: "inequality fuzz", budget: Duration::from_secs(30), run: inequality_fuzz },
        Criterion { id: 3, name: "black-hole entropy audit", budget: Duration::from_secs(10), run: ampss },
        Criterion { id: 4, name: "Choi-Kraus round trip", budget: Duration::from_secs(20), run: choi_kraus },
        Criterion { id: 5, name: "channel counterexamples", budget: Duration::from_secs(1), run: counterexamples },
        Criterion { id: 6, name: "isometric dilation", budget: Duration::from_secs(20), run: dilation },
        Criterion { id: 7, name: "monotonicity fuzz", budget: Duration::from_secs(30), run: monotonicity },
        Criterion { id: 8, name: "Shor code sweep", budget: Duration::from_secs(10), run: shor_sweep },
        Criterion { id: 9, name: "Petz exactness", budget: Duration::from_secs(5), run: petz_exactness },
        Criterion { id: 10, name: "universal recovery bound", budget: Duration::from_secs(120), run: universal_bound },
        Criterion { id: 11, name: "wedge reconstruction", budget: Duration::from_secs(120), run: wedge },
        Criterion { id: 12, name: "exercises", budget: Duration::from_secs(10), run: exercises },
    ];

    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(Ok((ok, detail))) => (ok, detail),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        let in_time = elapsed <= c.budget;
        let passed = ok && in_time;
        failures += (!passed) as usize;
        println!(
            "criterion {:>2} {} {}: {}; {:.2}s of {}s{}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_time { "" } else { " (over budget)" }
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn min(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn entropy_axioms() -> Verdict {
    let cfg = EntropyConfig::default();
    let mut pure_max: f64 = 0.0;
    let mut mixed_err: f64 = 0.0;
    for d in 2..=16usize {
        let psi = random_pure(&[d], &mut substream(1, d as u64));
        pure_max = pure_max.max(von_neumann_entropy(&psi.density(), &cfg).abs());
        let mixed = DensityOperator::maximally_mixed(&[d]);
        mixed_err = mixed_err.max((von_neumann_entropy(&mixed, &cfg) - (d as f64).ln()).abs());
    }
    Ok((
        pure_max <= 1e-12 && mixed_err <= 1e-10,
        format!("max S(pure) {pure_max:.1e}, max |S(I/d) - ln d| {mixed_err:.1e} for d in 2..=16"),
    ))
}

fn inequality_fuzz() -> Verdict {
    let reports = entropy_fuzz(&[2, 2, 2], 2000, 2, &EntropyConfig::default())?;
    let core: Vec<_> = reports
        .iter()
        .filter(|r| {
            r.name.starts_with("subadditivity") || r.name.starts_with("araki_lieb") || r.name == "strong_subadditivity"
        })
        .collect();
    let violations = core.iter().filter(|r| r.slack < -1e-9).count();
    let worst = min(core.iter().map(|r| r.slack));
    Ok((
        violations == 0 && core.len() == 2000 * 7,
        format!("{} checks on 2000 states, {violations} violations, min slack {worst:.2e}", core.len()),
    ))
}

fn ampss() -> Verdict {
    let hand = ampss_audit(&AmpssEntropies::hand_input());
    let first = hand.chain.first().map(|s| s.value).unwrap_or(f64::NAN);
    let last = hand.chain.last().map(|s| s.value).unwrap_or(f64::NAN);
    let replay_ok = hand.contradiction && first > last;

    let cfg = EntropyConfig::default();
    let mut joint = 0;
    let mut ssa_fail = 0;
    let mut sampled = 0;
    for (k, dims) in [[2usize, 2, 2], [2, 2, 4], [3, 3, 2]].iter().enumerate() {
        let d: usize = dims.iter().product();
        for t in 0..400u64 {
            let mut rng = substream(3 + k as u64, t);
            let rank = rng.gen_range(1..=d);
            let rho = random_multipartite(dims, rank, &mut rng)?;
            let report = ampss_audit(&AmpssEntropies::from_state(&rho, &cfg)?);
            joint += report.contradiction as usize;
            ssa_fail += (!report.strong_subadditivity) as usize;
            sampled += 1;
        }
    }
    Ok((
        replay_ok && joint == 0 && ssa_fail == 0,
        format!(
            "replay derives the impossible S(R)+S(B) < S(R), i.e. {first} < {last}; {sampled} sampled states: (i)^(ii)^(iii) on {joint}, (iv) fails on {ssa_fail}"
        ),
    ))
}

fn choi_kraus() -> Verdict {
    let runs = choi_roundtrip_fuzz(100, 4, 4)?;
    let worst = max(runs.iter().map(|r| r.choi_distance));
    let count_ok = runs.iter().all(|r| r.kraus_out <= r.in_dim * r.out_dim);
    let largest = runs.iter().map(|r| (r.in_dim, r.out_dim)).max().unwrap_or((0, 0));
    Ok((
        worst <= 1e-8 && count_ok && runs.len() == 100,
        format!("100 channels up to {}x{}: max Choi distance {worst:.1e}, Kraus count <= dA dB: {count_ok}", largest.0, largest.1),
    ))
}

fn counterexamples() -> Verdict {
    let witnesses: Vec<f64> = (2..=4).map(transpose_witness).collect::<chanlab::Result<_>>()?;
    let swap_err = max(witnesses.iter().map(|w| (w + 1.0).abs()));

    let x = Operator::pauli_x();
    let rho1 = DensityOperator::diagonal(&[0.5, 0.5])?;
    let e1 = (nonlinear_counterexample(&rho1)?.op() - rho1.op()).max_abs();

    let h = C64::new(0.5, 0.0);
    let plus = Operator::from_rows(&[vec![h, h], vec![h, h]]);
    let zero = Operator::diag(&[1.0, 0.0]);
    let rho2 = DensityOperator::new(&zero.scale_real(0.5) + &plus.scale_real(0.5))?;
    let e2 = (nonlinear_counterexample(&rho2)?.op() - &x.conjugate(rho2.op())).max_abs();
    Ok((
        swap_err <= 1e-10 && e1 <= 1e-12 && e2 <= 1e-12,
        format!("transpose Choi min eigenvalue within {swap_err:.1e} of -1; |E(rho1)-rho1| {e1:.1e}, |E(rho2)-X rho2 X| {e2:.1e}"),
    ))
}

fn dilation() -> Verdict {
    let runs = dilation_fuzz(100, 4, 6)?;
    let iso = max(runs.iter().map(|r| r.isometry_residual));
    let rt = max(runs.iter().map(|r| r.roundtrip));
    let rot = max(runs.iter().map(|r| r.rotation_invariance));
    Ok((
        iso <= 1e-9 && rt <= 1e-9 && rot <= 1e-9,
        format!("100 channels: ||V^dag V - I|| {iso:.1e}, Tr_E round trip {rt:.1e}, rotated Choi {rot:.1e}"),
    ))
}

fn monotonicity() -> Verdict {
    let reports = monotonicity_fuzz(500, 4, 7, &EntropyConfig::default())?;
    let worst = min(reports.iter().map(|r| r.slack));
    Ok((
        worst >= -1e-8 && reports.len() == 500,
        format!("500 triples, min D(rho||sigma) - D(N rho||N sigma) = {worst:.2e}"),
    ))
}

/// Expected syndrome for a single X or Z error on the Shor code, built from
/// the two lookup tables: bit flips are read by the Z-pair checks of their
/// block, phase flips by the two six-qubit X checks.
fn shor_table(kind: char, qubit: usize) -> Vec<i8> {
    let mut s = vec![1i8; 8];
    let block = (qubit - 1) / 3;
    let pos = (qubit - 1) % 3;
    let pattern = [[-1, 1], [-1, -1], [1, -1]];
    match kind {
        'X' => {
            s[2 * block] = pattern[pos][0];
            s[2 * block + 1] = pattern[pos][1];
        }
        'Z' => {
            s[6] = pattern[block][0];
            s[7] = pattern[block][1];
        }
        _ => unreachable!(),
    }
    s
}

fn circuit_agrees(code: &StabilizerCode, logical: (C64, C64), e: &PauliString) -> chanlab::Result<bool> {
    let corrupted = e.apply(&encode(code, logical.0, logical.1)?)?;
    Ok(circuit_readout(code, &corrupted)?.is_some_and(|c| c == code.syndrome_of(e)))
}

fn shor_sweep() -> Verdict {
    let code = shor_code();
    let mut corrected = 0;
    let mut table_rows = 0;
    let mut circuit = 0;
    let mut min_fid: f64 = 1.0;
    let errors = single_qubit_errors(9);
    for seed in [1u64, 2, 3] {
        let logical = random_logical(seed);
        for e in &errors {
            let r = roundtrip(&code, logical, e)?;
            min_fid = min_fid.min(r.fidelity);
            corrected += (r.fidelity >= 1.0 - 1e-9) as usize;
            let kind = r.error.chars().next().unwrap();
            if kind != 'Y' {
                let q: usize = r.error[1..].parse().unwrap();
                table_rows += (r.syndrome == shor_table(kind, q)) as usize;
            }
            circuit += circuit_agrees(&code, logical, e)? as usize;
        }
    }

    let three = three_qubit_code();
    let logical = random_logical(9);
    let three_table = [[-1i8, 1], [-1, -1], [1, -1]];
    let mut three_ok = true;
    for q in 1..=3 {
        let x = roundtrip(&three, logical, &PauliString::single(3, 'X', q)?)?;
        three_ok &= x.syndrome == three_table[q - 1] && x.logical_preserved;
        let z = roundtrip(&three, logical, &PauliString::single(3, 'Z', q)?)?;
        three_ok &= !z.logical_preserved && z.effective_logical == "X" && z.syndrome == [1, 1];
        for kind in ['X', 'Z', 'Y'] {
            three_ok &= circuit_agrees(&three, logical, &PauliString::single(3, kind, q)?)?;
        }
    }
    Ok((
        corrected == 81 && table_rows == 54 && circuit == 81 && three_ok,
        format!(
            "27 errors x 3 logical states: {corrected}/81 corrected (min fidelity {min_fid:.12}), {table_rows}/54 X/Z rows match the tables, circuits agree {circuit}/81; 3-qubit code ok: {three_ok}"
        ),
    ))
}

fn petz_exactness() -> Verdict {
    let seed = 9;
    let ex = erasure_example(2, 2, 2, 0, 2, &[0.7, 0.3], seed)?;
    let mut states = tomographic_states(2);
    for t in 0..20 {
        states.push(random_density_with(2, 2, &mut substream(seed, t))?);
    }
    let mut residual: f64 = 0.0;
    for rho in &states {
        let back = ex.petz.apply(&ex.channel.apply(rho)?)?;
        residual = residual.max(trace_norm(&(rho.op() - back.op()))?);
    }
    let cfg = EntropyConfig::default();
    let mut gap = ex.report.max_gap;
    for t in 20..40 {
        let mut rng = substream(seed, t);
        let rho = random_density_with(2, 2, &mut rng)?;
        let sigma = random_density_with(2, 2, &mut rng)?;
        gap = gap.max(recoverability_gap(&ex.channel, &rho, &sigma, &cfg)?.abs());
    }
    Ok((
        residual <= 1e-8 && gap <= 1e-8,
        format!("{} code states: max ||rho - P(N(rho))||_1 {residual:.1e}; max |gap| {gap:.1e}", states.len()),
    ))
}

fn universal_bound() -> Verdict {
    let grid = QuadratureGrid::default();
    let mass_err = (grid.mass() - 1.0).abs();
    let trials = recovery_fuzz(200, 3, 10, &grid, true, &EntropyConfig::default())?;
    let worst = min(trials.iter().map(|t| t.report.bound_slack));
    let shift = max(trials.iter().filter_map(|t| t.refinement_shift));
    Ok((
        mass_err <= 1e-6 && worst >= -1e-6 && shift <= 1e-6 && trials.len() == 200,
        format!("|sum w beta0 - 1| {mass_err:.1e} on {} nodes; 200 triples min gap + 2 log F {worst:.1e}; doubling shift {shift:.1e}", grid.len()),
    ))
}

fn wedge() -> Verdict {
    let grid = QuadratureGrid::default();
    let dims = HoloDims::default();

    let product = build_embedding(EmbeddingKind::ProductWedge, dims, 11)?;
    let probes = default_probes(&product, 10, 11)?;
    let setup = prepare(&product, &probes, &grid)?;
    let mut product_err: f64 = 0.0;
    for k in 0..5 {
        let phi = random_hermitian(dims.a, &mut substream(12, k));
        let (_, report) = reconstruct_with(&product, &setup, &phi, &probes)?;
        product_err = product_err.max(max(report.per_operator.iter().map(|c| c.lhs)));
    }

    let random = build_embedding(EmbeddingKind::RandomIsometry, dims, 37)?;
    let probes = default_probes(&random, 10, 37)?;
    let setup = prepare(&random, &probes, &grid)?;
    let phi = random_hermitian(dims.a, &mut substream(37, 10));
    let (_, recon) = reconstruct_with(&random, &setup, &phi, &probes)?;
    let chain = chain_with(&random, &setup, &probes, &phi)?;
    let d = chain.deltas;
    let step1 = chain.probes.iter().all(|p| p.step1 <= d.delta1 + 1e-9);
    let step2 = chain.probes.iter().all(|p| p.step2 <= d.delta2 + 1e-9);
    let fin = recon.per_operator.iter().all(|c| c.lhs <= c.rhs + 1e-9);
    Ok((
        product_err <= 1e-6 && step1 && step2 && fin && chain.passed && chain.probes.len() == 10,
        format!(
            "product wedge max expectation error {product_err:.1e}; random isometry eps {:.3} bits, step1/step2/final hold on 10 probes: {step1}/{step2}/{fin}",
            d.epsilon
        ),
    ))
}

fn exercises() -> Verdict {
    let cfg = EntropyConfig::default();
    let mut rng = seeded_rng(12);

    let mut schmidt_err: f64 = 0.0;
    for dims in [[2usize, 3], [3, 3], [4, 2]] {
        let psi = random_pure(&dims, &mut rng);
        let s = schmidt(&psi, &[0])?;
        schmidt_err = schmidt_err.max((&s.reconstruct() - psi.amplitudes()).norm());
    }

    let mut saturation: f64 = 0.0;
    let mut dominated = true;
    for _ in 0..20 {
        let a = random_density_with(3, rng.gen_range(1..=3), &mut rng)?;
        let b = random_density_with(3, rng.gen_range(1..=3), &mut rng)?;
        let report = trace_distance_report(&a, &b)?;
        saturation = saturation.max((report.measured_distance - report.distance).abs());
        let u = random_unitary(3, &mut rng);
        let other: Vec<Operator> = (0..3)
            .map(|k| {
                let v = u.matrix().column(k).into_owned();
                Operator::outer(&v, &v)
            })
            .collect();
        dominated &= classical_distance(&a, &b, &other) <= report.distance + 1e-12;
    }

    let mut d_min = f64::INFINITY;
    let mut d_self: f64 = 0.0;
    for _ in 0..20 {
        let rho = random_density_with(3, 3, &mut rng)?;
        let sigma = random_density_with(3, 3, &mut rng)?;
        d_min = d_min.min(relative_entropy(&rho, &sigma, &cfg)?);
        d_self = d_self.max(relative_entropy(&rho, &rho, &cfg)?.abs());
    }

    let mut cyc: f64 = 0.0;
    for (da, db, dc) in [(2usize, 3usize, 2usize), (3, 2, 3)] {
        let v = Operator::from_matrix(ginibre(db, da, &mut rng));
        let w = Operator::from_matrix(ginibre(da, db, &mut rng));
        let tau = Operator::from_matrix(ginibre(db, db, &mut rng));
        let lhs = w.compose(&tau)?.compose(&v)?.trace();
        let rhs = v.compose(&w)?.compose(&tau)?.trace();
        cyc = cyc.max((lhs - rhs).norm());

        let id = Operator::identity(&[dc]);
        let (vc, wc) = (v.kron(&id), w.kron(&id));
        let tau_bc = Operator::from_matrix(ginibre(db * dc, db * dc, &mut rng)).with_square_dims(vec![db, dc])?;
        let left = wc.compose(&tau_bc)?.compose(&vc)?.with_square_dims(vec![da, dc])?.partial_trace(&[1])?;
        let right = vc.compose(&wc)?.compose(&tau_bc)?.with_square_dims(vec![db, dc])?.partial_trace(&[1])?;
        cyc = cyc.max((&left - &right).max_abs());
    }

    let mut additivity: f64 = 0.0;
    for _ in 0..20 {
        let (rho, chi) = (random_density_with(2, 2, &mut rng)?, random_density_with(3, 2, &mut rng)?);
        let (sigma, tau) = (random_density_with(2, 2, &mut rng)?, random_density_with(3, 3, &mut rng)?);
        additivity = additivity.max(-additivity_check(&rho, &chi, &sigma, &tau, &cfg)?.slack);
    }

    let bell = PureState::from_amplitudes(
        &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)].map(|z| z * std::f64::consts::FRAC_1_SQRT_2),
        vec![2, 2],
    )?;
    let bell_coeffs = schmidt(&bell, &[0])?.coefficients;

    let ok = schmidt_err <= 1e-9
        && saturation <= 1e-12
        && dominated
        && d_min > 1e-6
        && d_self <= 1e-10
        && cyc <= 1e-9
        && additivity <= 1e-9
        && bell_coeffs.len() == 2;
    Ok((
        ok,
        format!(
            "Schmidt {schmidt_err:.1e}; measured vs 1/2 sum|lambda| {saturation:.1e}; min D(rho||sigma) {d_min:.2e}, D(rho||rho) {d_self:.1e}; cyclicity {cyc:.1e}; additivity {additivity:.1e}"
        ),
    ))
}
