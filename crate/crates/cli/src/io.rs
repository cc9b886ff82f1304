//! On-disk formats: snapshot JSON Lines, spectrum CSV, peak JSON, and
//! sampled-circuit JSON Lines.
//!
//! `snapshots.jsonl` starts with one metadata object, then one record
//! per line:
//!
//! ```text
//! {"n_qubits":2,"n_t":1,"m":3,"n_s":1,"dt":0.7,"method":"tepai","delta_over_pi":0.25,"seed":7,"config_sha":"…","degenerate_initial":false}
//! {"s":1,"gamma":1.8703,"bases":"XZ","bits":"01"}
//! ```
//!
//! Bases and bits strings are qubit 0 first.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use gapscope_core::evolution::SampledCircuit;
use gapscope_core::shadows::{Method, SnapshotMeta, SnapshotRecord, SnapshotSet};
use gapscope_core::spectroscopy::{Peak, Spectrum};
use gapscope_core::statevector::Basis;

use crate::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MetaLine {
    n_qubits: usize,
    n_t: usize,
    m: usize,
    n_s: usize,
    dt: f64,
    method: String,
    delta_over_pi: f64,
    seed: u64,
    config_sha: String,
    degenerate_initial: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct RecordLine {
    s: usize,
    gamma: f64,
    bases: String,
    bits: String,
}

fn bases_string(bases: &[Basis]) -> String {
    bases.iter().map(|b| b.letter()).collect()
}

fn bits_string(bits: u64, n: usize) -> String {
    (0..n)
        .map(|k| if bits >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Write a snapshot set (metadata line + one record per line).
pub fn write_snapshots(path: &Path, set: &SnapshotSet, config_sha: &str) -> Result<()> {
    let meta = set.meta();
    let mut w = BufWriter::new(File::create(path)?);
    let line = MetaLine {
        n_qubits: meta.n_qubits,
        n_t: meta.n_t,
        m: meta.m_samples,
        n_s: meta.shots_per_sample,
        dt: meta.dt,
        method: meta.method.as_str().into(),
        delta_over_pi: meta.delta_over_pi,
        seed: meta.seed,
        config_sha: config_sha.into(),
        degenerate_initial: meta.degenerate_initial,
    };
    serde_json::to_writer(&mut w, &line).map_err(io_err)?;
    w.write_all(b"\n")?;
    for r in set.records() {
        let line = RecordLine {
            s: r.time_index,
            gamma: r.gamma,
            bases: bases_string(&r.bases),
            bits: bits_string(r.bits, meta.n_qubits),
        };
        serde_json::to_writer(&mut w, &line).map_err(io_err)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn io_err(e: serde_json::Error) -> CliError {
    CliError::Config(format!("json: {e}"))
}

/// Read a snapshot file back. Returns the set and the stored config
/// digest.
pub fn read_snapshots(path: &Path) -> Result<(SnapshotSet, String)> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let meta_text = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("{}: empty snapshot file", path.display())))??;
    let meta_line: MetaLine = serde_json::from_str(&meta_text)
        .map_err(|e| CliError::Config(format!("{}: bad metadata line: {e}", path.display())))?;
    let method = Method::parse(&meta_line.method).ok_or_else(|| {
        CliError::Config(format!(
            "{}: unknown method {:?}",
            path.display(),
            meta_line.method
        ))
    })?;
    let n = meta_line.n_qubits;
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RecordLine = serde_json::from_str(&line).map_err(|e| {
            CliError::Config(format!("{}: record line {}: {e}", path.display(), idx + 2))
        })?;
        if rec.bases.len() != n || rec.bits.len() != n {
            return Err(CliError::Config(format!(
                "{}: record line {} has wrong width",
                path.display(),
                idx + 2
            )));
        }
        let bases: Option<Vec<Basis>> = rec.bases.chars().map(Basis::from_letter).collect();
        let bases = bases.ok_or_else(|| {
            CliError::Config(format!(
                "{}: record line {}: bad basis letter",
                path.display(),
                idx + 2
            ))
        })?;
        let mut bits = 0u64;
        for (k, c) in rec.bits.chars().enumerate() {
            match c {
                '1' => bits |= 1 << k,
                '0' => {}
                _ => {
                    return Err(CliError::Config(format!(
                        "{}: record line {}: bad bit character",
                        path.display(),
                        idx + 2
                    )));
                }
            }
        }
        records.push(SnapshotRecord {
            time_index: rec.s,
            gamma: rec.gamma,
            bases,
            bits,
        });
    }
    let meta = SnapshotMeta {
        n_qubits: n,
        n_t: meta_line.n_t,
        m_samples: meta_line.m,
        shots_per_sample: meta_line.n_s,
        dt: meta_line.dt,
        method,
        delta_over_pi: meta_line.delta_over_pi,
        seed: meta_line.seed,
        degenerate_initial: meta_line.degenerate_initial,
    };
    let set = SnapshotSet::from_records(meta, records).map_err(CliError::from)?;
    Ok((set, meta_line.config_sha))
}

/// Write the spectrum as `omega,lambda` CSV.
pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "omega,lambda")?;
    for (omega, lambda) in spectrum.omegas.iter().zip(&spectrum.lambdas) {
        writeln!(w, "{omega},{lambda}")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct PeakLine {
    omega: f64,
    lambda: f64,
}

/// Write the detected peaks as a JSON array.
pub fn write_peaks_json(path: &Path, peaks: &[Peak]) -> Result<()> {
    let lines: Vec<PeakLine> = peaks
        .iter()
        .map(|p| PeakLine {
            omega: p.omega,
            lambda: p.lambda,
        })
        .collect();
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &lines).map_err(io_err)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct CircuitLine<'a> {
    gamma: f64,
    gates: Vec<GateLine<'a>>,
}

#[derive(Debug, Serialize)]
struct GateLine<'a> {
    pauli: &'a str,
    angle: f64,
}

/// Append one sampled circuit as a JSON line
/// (`{"gamma": …, "gates": [{"pauli": "IXZI", "angle": …}]}`).
pub fn write_sampled_circuit<W: Write>(w: &mut W, sampled: &SampledCircuit) -> Result<()> {
    let paulis: Vec<String> = sampled
        .circuit
        .gates()
        .iter()
        .map(|g| g.axis.to_string())
        .collect();
    let line = CircuitLine {
        gamma: sampled.gamma_signed,
        gates: sampled
            .circuit
            .gates()
            .iter()
            .zip(&paulis)
            .map(|(g, p)| GateLine {
                pauli: p,
                angle: g.angle,
            })
            .collect(),
    };
    serde_json::to_writer(&mut *w, &line).map_err(io_err)?;
    w.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gapscope_core::evolution::TimeGrid;
    use gapscope_core::hamiltonian::Hamiltonian;
    use gapscope_core::shadows::{ExperimentPlan, Method, SamplingConfig};
    use gapscope_core::statevector::StateVector;

    fn small_set() -> SnapshotSet {
        let h = Hamiltonian::heisenberg_chain(3, 1.0, 1.0, 1.0).unwrap();
        let plan = ExperimentPlan::new(
            h,
            StateVector::product("0+1").unwrap(),
            false,
            TimeGrid::new(0.5, 2, 4).unwrap(),
            SamplingConfig {
                method: Method::Tepai,
                delta: 0.5,
                m_samples: 3,
                shots_per_sample: 2,
                noise: None,
                noise_on_measurement: true,
                seed: 99,
            },
        )
        .unwrap();
        plan.run().unwrap().set
    }

    #[test]
    fn snapshot_roundtrip_is_exact() {
        let set = small_set();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snapshots.jsonl");
        write_snapshots(&path, &set, "deadbeef").unwrap();
        let (read, sha) = read_snapshots(&path).unwrap();
        assert_eq!(sha, "deadbeef");
        assert_eq!(read.meta(), set.meta());
        assert_eq!(read.records(), set.records());
    }

    #[test]
    fn rejects_truncated_files() {
        let set = small_set();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snapshots.jsonl");
        write_snapshots(&path, &set, "x").unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let truncated: Vec<&str> = text.lines().take(text.lines().count() - 1).collect();
        std::fs::write(&path, truncated.join("\n")).unwrap();
        assert!(read_snapshots(&path).is_err());
    }

    #[test]
    fn spectrum_csv_format() {
        let spectrum = Spectrum {
            omegas: vec![0.0, 0.5, 1.0],
            lambdas: vec![1.0, 2.5, 0.25],
            peaks: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        write_spectrum_csv(&path, &spectrum).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "omega,lambda\n0,1\n0.5,2.5\n1,0.25\n");
    }

    #[test]
    fn hamiltonian_json_is_an_array_of_terms() {
        let h = Hamiltonian::tfim_chain(3, 0.1, 2.0).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let terms = v.as_array().unwrap();
        assert_eq!(terms.len(), h.n_terms());
        assert_eq!(terms[0]["pauli"], "ZZI");
        assert_eq!(terms[0]["coeff"], -0.1);
        let back: Hamiltonian = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<Hamiltonian>("[]").is_err());
    }

    #[test]
    fn sampled_circuit_line_shape() {
        let h = Hamiltonian::heisenberg_chain(2, 1.0, 1.0, 1.0).unwrap();
        let mut rng = gapscope_core::streams::derive(
            1,
            gapscope_core::streams::StreamRole::Validate,
            0,
            0,
            0,
        );
        let sampled =
            gapscope_core::evolution::sample_tepai_circuit(&h, 0.3, 4, 0.7, &mut rng).unwrap();
        let mut buf = Vec::new();
        write_sampled_circuit(&mut buf, &sampled).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v["gamma"].is_f64() || v["gamma"].is_number());
        assert!(v["gates"].is_array());
        for g in v["gates"].as_array().unwrap() {
            assert_eq!(g["pauli"].as_str().unwrap().len(), 2);
            assert!(g["angle"].is_number());
        }
    }
}
