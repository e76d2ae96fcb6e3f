//! `dump`: protocol matrices and input states as JSON.

use qnd_interface::phase_space::{reference_matrix_u, MatrixJson, SymplecticMatrix};
use qnd_interface::protocols::{joint_chain, sequential_chain, JointConfig, SequentialConfig};
use qnd_interface::wigner::WignerJson;
use qnd_interface::Wigner64;
use serde::Serialize;

use crate::args::{MatrixKind, StateKind};
use crate::config::{positive, variance, Settings};
use crate::error::{CliError, CliResult};
use crate::output::write_text;

fn to_text(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes") + "\n"
}

/// Re-emits a previously dumped file after validating it.
fn reload(text: &str) -> CliResult<String> {
    if let Ok(m) = serde_json::from_str::<MatrixJson>(text) {
        let s = SymplecticMatrix::<f64>::from_json(&m).map_err(|e| CliError::invalid(e.to_string()))?;
        return Ok(to_text(&s.to_json()));
    }
    let w: WignerJson = serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("neither a matrix nor a state: {e}")))?;
    let w = Wigner64::from_json(&w).map_err(|e| CliError::invalid(e.to_string()))?;
    Ok(to_text(&w.to_json()))
}

pub fn run(s: &Settings) -> CliResult<()> {
    s.reject(
        "dump",
        &[
            ("q", s.q.is_some()),
            ("range", s.range.is_some()),
            ("ps-target", s.ps_target.is_some()),
            ("svg", s.svg.is_some()),
            ("vm", s.vm.is_some()),
            ("va", s.va.is_some()),
        ],
    )?;
    let chosen = [s.dump_matrix.is_some(), s.dump_state.is_some(), s.load.is_some()];
    if chosen.iter().filter(|&&c| c).count() != 1 {
        return Err(CliError::invalid(
            "dump needs exactly one of --dump-matrix, --dump-state or --load",
        ));
    }
    let text = if let Some(kind) = s.dump_matrix {
        let k1 = positive("kappa1", s.kappa1.unwrap_or(0.5))?;
        let k2 = positive("kappa2", s.kappa2.unwrap_or(0.5))?;
        let m = match kind {
            MatrixKind::Sequential => {
                let mut cfg = SequentialConfig::with_sign(k1, k2, s.sign())?;
                if let Some(g) = s.gamma_x {
                    cfg.gamma_x = g;
                }
                if let Some(g) = s.gamma_p {
                    cfg.gamma_p = g;
                }
                sequential_chain(&cfg)?
            }
            MatrixKind::Joint => {
                let kappa = match s.kappa.as_deref() {
                    None => 0.5,
                    Some([k]) => positive("kappa", *k)?,
                    Some(_) => return Err(CliError::invalid("dump takes a single --kappa")),
                };
                joint_chain(&JointConfig::new(kappa)?)?
            }
            MatrixKind::Reference => reference_matrix_u(k1, k2)?,
        };
        to_text(&m.to_json())
    } else if let Some(kind) = s.dump_state {
        let w = match kind {
            StateKind::SinglePhoton => Wigner64::single_photon(),
            StateKind::Vacuum => Wigner64::vacuum(),
            StateKind::Thermal => {
                let v = variance("variance", s.variance.unwrap_or(1.0))?;
                Wigner64::thermal(v)?
            }
        };
        to_text(&w.to_json())
    } else {
        let path = s.load.as_ref().unwrap();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
        reload(&text)?
    };
    write_text(s.out.as_deref(), &text)
}
