//! Command implementations for the `latdiag` binary. Each command returns an
//! [`Output`] so that tests can check text and exit codes without a process.

pub mod explore;
pub mod fixtures;
pub mod report;
pub mod verify;

use std::fs;
use std::path::Path;

use latdiag::diagram::{parse_chain, InclusionDiagram};
use latdiag::iso::{decide_iso, IsoConfig, IsoVerdict, NonIsoCert};
use latdiag::logic::{countermodel_search, parse_formula};
use latdiag::normal_form::{hnf, snf};
use latdiag::IntMatrix;
use serde_json::json;

pub use explore::{explore_v, ExploreConfig, ExploreReport};
pub use fixtures::Fixtures;
pub use report::VerificationReport;
pub use verify::verify_paper;

/// Exit codes: 0 decisive, 1 inconclusive or failed checks, 2 usage errors.
pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDECIDED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn usage(stderr: String) -> Self {
        Output { stdout: String::new(), stderr: format!("error: {stderr}\n"), code: EXIT_USAGE }
    }
}

fn read_chain(path: &Path) -> Result<InclusionDiagram, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_chain(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_matrix(path: &Path) -> Result<IntMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    IntMatrix::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn cmd_verify_paper(fixture_dir: Option<&Path>, as_json: bool) -> Output {
    let fx = match fixture_dir {
        Some(dir) => match Fixtures::from_dir(dir) {
            Ok(fx) => fx,
            Err(e) => return Output::usage(e),
        },
        None => Fixtures::embedded(),
    };
    let report = verify_paper(&fx);
    let stdout = if as_json { report.to_json() + "\n" } else { report.to_text() };
    Output {
        stdout,
        stderr: String::new(),
        code: if report.ok() { EXIT_OK } else { EXIT_UNDECIDED },
    }
}

pub fn cmd_iso(left: &Path, right: &Path, coeff_bound: u64, max_modulus: u64, as_json: bool) -> Output {
    let (b, c) = match (read_chain(left), read_chain(right)) {
        (Ok(b), Ok(c)) => (b, c),
        (Err(e), _) | (_, Err(e)) => return Output::usage(e),
    };
    let cfg = IsoConfig { coeff_bound, max_modulus, ..IsoConfig::default() };
    let verdict = match decide_iso(&b, &c, &cfg) {
        Ok(v) => v,
        Err(e) => return Output::usage(e.to_string()),
    };
    let code = match verdict {
        IsoVerdict::Inconclusive(_) => EXIT_UNDECIDED,
        _ => EXIT_OK,
    };
    let stdout = if as_json {
        let mut rec = json!({ "record": verdict.record() });
        match &verdict {
            IsoVerdict::Isomorphic(w) => {
                let maps: Vec<Vec<Vec<String>>> = w
                    .node_maps
                    .iter()
                    .map(|m| m.row_iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect())
                    .collect();
                rec["verdict"] = json!("ISO");
                rec["node_maps"] = json!(maps);
            }
            IsoVerdict::NotIsomorphic(NonIsoCert::Modulus(cert)) => {
                rec["verdict"] = json!("NOT-ISO");
                rec["modulus"] = json!(cert.modulus);
                rec["checked"] = json!(cert.checked_count.to_string());
            }
            IsoVerdict::NotIsomorphic(NonIsoCert::Invariants(m)) => {
                rec["verdict"] = json!("NOT-ISO");
                rec["invariant_mismatch"] = json!(m.to_string());
            }
            IsoVerdict::Inconclusive(bounds) => {
                rec["verdict"] = json!("INCONCLUSIVE");
                rec["coeff_bound"] = json!(bounds.coeff_bound);
                rec["max_modulus"] = json!(bounds.max_modulus);
                rec["skipped_moduli"] = json!(bounds.skipped_moduli);
            }
        }
        serde_json::to_string_pretty(&rec).expect("json value") + "\n"
    } else {
        let mut s = verdict.record() + "\n";
        if let IsoVerdict::Isomorphic(w) = &verdict {
            for (i, m) in w.node_maps.iter().enumerate() {
                s.push_str(&format!("node {i} map:\n{m}"));
            }
        }
        s
    };
    Output { stdout, stderr: String::new(), code }
}

pub fn cmd_hnf(path: &Path) -> Output {
    match read_matrix(path) {
        Ok(m) => {
            let r = hnf(&m);
            Output::ok(format!("H:\n{}U:\n{}rank {}\n", r.h, r.u, r.rank()))
        }
        Err(e) => Output::usage(e),
    }
}

pub fn cmd_snf(path: &Path) -> Output {
    match read_matrix(path) {
        Ok(m) => {
            let r = snf(&m);
            let inv: Vec<String> = r.invariant_factors().iter().map(|d| d.to_string()).collect();
            Output::ok(format!(
                "D:\n{}L:\n{}R:\n{}invariant factors: {}\n",
                r.d,
                r.l,
                r.r,
                inv.join(" ")
            ))
        }
        Err(e) => Output::usage(e),
    }
}

pub fn cmd_kripke(formula: &str, max_worlds: usize) -> Output {
    let phi = match parse_formula(formula) {
        Ok(phi) => phi,
        Err(e) => return Output::usage(e.to_string()),
    };
    match countermodel_search(&phi, max_worlds) {
        Some(model) => Output::ok(format!("NOT-VALID\nformula: {phi}\n{model}")),
        None => Output::ok(format!("VALID-UP-TO {max_worlds}\n")),
    }
}

pub fn cmd_explore_v(cfg: &ExploreConfig) -> Output {
    if cfg.rank_bound == 0 || cfg.entry_bound == 0 || cfg.coeff_bound == 0 || cfg.max_modulus == 0 {
        return Output::usage("explore-v bounds must be at least 1".into());
    }
    Output::ok(explore_v(cfg).to_text(cfg))
}
