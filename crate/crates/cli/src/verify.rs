//! `verify-deterministic`: identity and symplecticity checks.

use qnd_interface::phase_space::{
    balanced_bs_gate, joint_qnd_gate, phase_flip_gate, qnd_gate, squeeze_gate, Mode,
    SymplecticMatrix,
};
use qnd_interface::protocols::{
    deterministic_joint_map, deterministic_sequential_map, joint_chain, sequential_chain, Kappa3Sign,
    JointConfig, SequentialConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::Format;
use crate::config::{positive, Settings};
use crate::error::{CliError, CliResult};
use crate::output::write_text;

const TOL: f64 = 1e-12;

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    max_residual: f64,
    pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, max_residual: f64) -> Check {
        Check {
            name: name.into(),
            max_residual,
            pass: max_residual < TOL,
        }
    }
}

#[derive(Debug, Serialize)]
struct Report {
    tolerance: f64,
    ideal_gains: bool,
    checks: Vec<Check>,
    pass: bool,
}

fn gate_residual(k1: f64, k2: f64) -> CliResult<f64> {
    let mut worst = 0.0f64;
    let mut note = |s: SymplecticMatrix<f64>| worst = worst.max(s.symplectic_residual());
    for m in Mode::ALL {
        note(squeeze_gate(m, k2)?);
        note(phase_flip_gate(m));
        for n in Mode::ALL {
            if m != n {
                note(qnd_gate(m, n, k1)?);
                note(balanced_bs_gate(m, n)?);
            }
        }
    }
    note(joint_qnd_gate(k1)?);
    Ok(worst)
}

pub fn run(s: &Settings) -> CliResult<()> {
    s.reject(
        "verify-deterministic",
        &[
            ("q", s.q.is_some()),
            ("range", s.range.is_some()),
            ("ps-target", s.ps_target.is_some()),
            ("svg", s.svg.is_some()),
            ("dump-matrix", s.dump_matrix.is_some()),
            ("dump-state", s.dump_state.is_some()),
        ],
    )?;
    let k1 = positive("kappa1", s.kappa1.unwrap_or(0.5))?;
    let k2 = positive("kappa2", s.kappa2.unwrap_or(0.5))?;
    let kappa = match s.kappa.as_deref() {
        None => 0.5,
        Some([k]) => positive("kappa", *k)?,
        Some(_) => return Err(CliError::invalid("verify-deterministic takes a single --kappa")),
    };
    let samples = s.samples.unwrap_or(100);
    let seed = s.seed.unwrap_or(0);
    let sign = s.sign();

    let mut seq = SequentialConfig::with_sign(k1, k2, sign)?;
    if let Some(g) = s.gamma_x {
        seq.gamma_x = g;
    }
    if let Some(g) = s.gamma_p {
        seq.gamma_p = g;
    }
    let ideal = seq.is_ideal(TOL) && sign == Kappa3Sign::Positive;
    if !ideal {
        eprintln!(
            "warning: non-ideal gains (kappa3 = {}, g = {}, gamma_x = {}, gamma_p = {})",
            seq.kappa3, seq.g, seq.gamma_x, seq.gamma_p
        );
    }
    let joint = JointConfig::new(kappa)?;

    let seq_map = deterministic_sequential_map(&seq)?;
    let joint_map = deterministic_joint_map(&joint)?;
    let seq_chain = sequential_chain(&seq)?;
    let mut checks = vec![
        Check::new(
            format!("sequential transfer x_A=x_L, p_A=p_L (kappa1={k1}, kappa2={k2})"),
            seq_map.transfer_residual(Mode::L),
        ),
        Check::new("sequential matter-mode coefficients vanish", seq_map.matter_residual()),
        Check::new("sequential output commutator", seq_map.commutator_residual()),
        Check::new(format!("joint transfer (kappa={kappa})"), joint_map.transfer_residual(Mode::L)),
        Check::new(
            "symplectic gates and chains",
            gate_residual(k1, k2)?
                .max(seq_chain.symplectic_residual())
                .max(seq_chain.inverse().symplectic_residual())
                .max(joint_chain(&joint)?.symplectic_residual()),
        ),
    ];

    if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut seq_worst, mut joint_worst, mut symp_worst) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..samples {
            let (a, b) = (rng.gen_range(0.05..=1.0), rng.gen_range(0.05..=1.0));
            let cfg = SequentialConfig::with_sign(a, b, sign)?;
            seq_worst = seq_worst.max(deterministic_sequential_map(&cfg)?.transfer_residual(Mode::L));
            let jc = JointConfig::new(a)?;
            joint_worst = joint_worst.max(deterministic_joint_map(&jc)?.transfer_residual(Mode::L));
            symp_worst = symp_worst
                .max(gate_residual(a, b)?)
                .max(sequential_chain(&cfg)?.symplectic_residual())
                .max(joint_chain(&jc)?.symplectic_residual());
        }
        let tag = format!("{samples} random gains, seed {seed}");
        checks.push(Check::new(format!("sequential transfer ({tag})"), seq_worst));
        checks.push(Check::new(format!("joint transfer ({tag})"), joint_worst));
        checks.push(Check::new(format!("symplectic ({tag})"), symp_worst));
    }

    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = Report {
        tolerance: TOL,
        ideal_gains: ideal,
        pass: failed == 0,
        checks,
    };
    let text = match s.format() {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut t = String::new();
            for c in &report.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                t += &format!("{tag} {} (max residual {:.3e})\n", c.name, c.max_residual);
            }
            t
        }
    };
    write_text(s.out.as_deref(), &text)?;
    if failed > 0 {
        return Err(CliError::CheckFailed(failed));
    }
    Ok(())
}
