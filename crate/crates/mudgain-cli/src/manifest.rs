//! Run manifests: the sidecar records that make every output re-derivable.
//!
//! Each file-producing run writes `<out>.manifest` next to its output — a
//! flat `key=value` text file holding the command and every resolved
//! parameter that shaped the bytes. Feeding [`RunManifest::to_args`] back
//! into the binary reproduces the output exactly: numbers are serialized
//! through Rust's shortest-round-trip float formatting, so nothing is lost
//! in the text detour.
//!
//! One deliberate omission: the outage figures derive their default power
//! grid per spectral-efficiency value, so a single recorded grid could not
//! be faithful. A defaulted grid is therefore *not* recorded — it is a pure
//! function of the recorded `eta_s` — while an explicit `--power-db`
//! override is. Worker count is also absent: it can never change the bytes.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunManifest {
    pub command: String,
    /// Figure id for `figure`, selector for `analytic`.
    pub what: Option<String>,
    pub eta_s: Vec<f64>,
    pub epsilon: Option<f64>,
    pub power_db: Option<Vec<f64>>,
    pub j: Option<Vec<usize>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub tol_db: Option<f64>,
    pub out: Option<String>,
    pub version: String,
}

fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn split_f64(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| v.parse::<f64>().with_context(|| format!("bad real `{v}`")))
        .collect()
}

fn split_usize(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|v| v.parse::<usize>().with_context(|| format!("bad integer `{v}`")))
        .collect()
}

impl RunManifest {
    /// The `key=value` text, keys in a fixed order, absent parameters
    /// skipped.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command={}", self.command);
        if let Some(what) = &self.what {
            let _ = writeln!(s, "what={what}");
        }
        let _ = writeln!(s, "eta_s={}", join(&self.eta_s));
        if let Some(eps) = self.epsilon {
            let _ = writeln!(s, "epsilon={eps}");
        }
        if let Some(grid) = &self.power_db {
            let _ = writeln!(s, "power_db={}", join(grid));
        }
        if let Some(j) = &self.j {
            let _ = writeln!(s, "j={}", join(j));
        }
        if let Some(trials) = self.trials {
            let _ = writeln!(s, "trials={trials}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed={seed}");
        }
        if let Some(tol) = self.tol_db {
            let _ = writeln!(s, "tol_db={tol}");
        }
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out={out}");
        }
        let _ = writeln!(s, "version={}", self.version);
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = RunManifest::default();
        let mut saw_eta = false;
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("manifest line without `=`: `{line}`"))?;
            match key {
                "command" => m.command = value.to_string(),
                "what" => m.what = Some(value.to_string()),
                "eta_s" => {
                    m.eta_s = split_f64(value)?;
                    saw_eta = true;
                }
                "epsilon" => m.epsilon = Some(value.parse()?),
                "power_db" => m.power_db = Some(split_f64(value)?),
                "j" => m.j = Some(split_usize(value)?),
                "trials" => m.trials = Some(value.parse()?),
                "seed" => m.seed = Some(value.parse()?),
                "tol_db" => m.tol_db = Some(value.parse()?),
                "out" => m.out = Some(value.to_string()),
                "version" => m.version = value.to_string(),
                other => bail!("unknown manifest key `{other}`"),
            }
        }
        if m.command.is_empty() {
            bail!("manifest has no command");
        }
        if m.version.is_empty() {
            bail!("manifest has no version");
        }
        if !saw_eta {
            bail!("manifest has no eta_s");
        }
        if matches!(m.command.as_str(), "figure" | "analytic") && m.what.is_none() {
            bail!("`{}` manifest needs a `what` entry", m.command);
        }
        Ok(m)
    }

    /// The argv (without the program name) that replays this run.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.command.clone()];
        match self.command.as_str() {
            "figure" => args.push(self.what.clone().unwrap_or_default()),
            "analytic" => {
                args.push("--what".into());
                args.push(self.what.clone().unwrap_or_default());
            }
            _ => {}
        }
        args.push("--eta-s".into());
        args.push(join(&self.eta_s));
        if let Some(eps) = self.epsilon {
            args.push("--epsilon".into());
            args.push(eps.to_string());
        }
        if let Some(grid) = &self.power_db {
            args.push("--power-db".into());
            args.push(join(grid));
        }
        if let Some(j) = &self.j {
            args.push("--j".into());
            args.push(join(j));
        }
        if let Some(trials) = self.trials {
            args.push("--trials".into());
            args.push(trials.to_string());
        }
        if let Some(seed) = self.seed {
            args.push("--seed".into());
            args.push(seed.to_string());
        }
        if let Some(tol) = self.tol_db {
            args.push("--tol-db".into());
            args.push(tol.to_string());
        }
        if let Some(out) = &self.out {
            args.push("--out".into());
            args.push(out.clone());
        }
        args
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_manifest() -> RunManifest {
        RunManifest {
            command: "figure".into(),
            what: Some("fig3".into()),
            eta_s: vec![3.0, 6.0],
            epsilon: Some(0.01),
            power_db: None,
            j: Some(vec![1, 2, 4]),
            trials: Some(20_000),
            seed: Some(7),
            tol_db: Some(0.05),
            out: Some("fig3.csv".into()),
            version: "0.1.0".into(),
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let m = figure_manifest();
        let text = m.render();
        let back = RunManifest::parse(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn floats_survive_the_text_detour_exactly() {
        let mut m = figure_manifest();
        m.eta_s = vec![0.1 + 0.2, 1e-9, 2.0f64.sqrt()];
        m.epsilon = Some(1.0 / 3.0);
        let back = RunManifest::parse(&m.render()).unwrap();
        for (a, b) in m.eta_s.iter().zip(&back.eta_s) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.epsilon.unwrap().to_bits(), m.epsilon.unwrap().to_bits());
    }

    #[test]
    fn args_replay_the_command_line() {
        let args = figure_manifest().to_args();
        assert_eq!(
            args,
            vec![
                "figure", "fig3", "--eta-s", "3,6", "--epsilon", "0.01", "--j", "1,2,4",
                "--trials", "20000", "--seed", "7", "--tol-db", "0.05", "--out", "fig3.csv",
            ]
        );
    }

    #[test]
    fn analytic_args_use_the_what_flag() {
        let m = RunManifest {
            command: "analytic".into(),
            what: Some("oma-power".into()),
            eta_s: vec![3.0],
            epsilon: Some(0.01),
            version: "0.1.0".into(),
            ..RunManifest::default()
        };
        assert_eq!(
            m.to_args(),
            vec!["analytic", "--what", "oma-power", "--eta-s", "3", "--epsilon", "0.01"]
        );
    }

    #[test]
    fn malformed_manifests_are_rejected() {
        assert!(RunManifest::parse("command=figure\n").is_err());
        assert!(RunManifest::parse("no equals sign").is_err());
        assert!(RunManifest::parse("command=gain\neta_s=3\nmystery=1\nversion=0.1.0\n").is_err());
        assert!(RunManifest::parse("command=figure\neta_s=3\nversion=0.1.0\n").is_err());
    }
}
