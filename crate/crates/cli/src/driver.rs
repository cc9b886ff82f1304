//! Parallel experiment driver.
//!
//! Cells `(s, m)` are independent given the counter-derived RNG streams,
//! so the driver fans them out over a rayon pool and reassembles in
//! index order — output is bit-identical to the sequential core runner
//! at any worker count. `GAPSCOPE_THREADS` caps the pool.

use rayon::prelude::*;

use gapscope_core::shadows::{CellStats, ExperimentOutput, ExperimentPlan, Method, SnapshotSet};

use crate::{CliError, Result};

/// Threads to use: `GAPSCOPE_THREADS` if set, else all cores.
pub fn worker_count() -> Result<usize> {
    match std::env::var("GAPSCOPE_THREADS") {
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                CliError::Config(format!("GAPSCOPE_THREADS={v:?} is not a positive integer"))
            })?;
            if n == 0 {
                return Err(CliError::Config("GAPSCOPE_THREADS must be >= 1".into()));
            }
            Ok(n)
        }
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

/// Run the whole experiment on a private worker pool.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    let threads = worker_count()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    pool.install(|| run_on_current_pool(plan))
}

fn run_on_current_pool(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    let n_t = plan.grid().n_t();
    let m = plan.config().m_samples;
    let trotter_clean = plan.config().method == Method::Trotter && plan.config().noise.is_none();

    let cell_results: Vec<(CellStats, Vec<gapscope_core::shadows::SnapshotRecord>)> =
        if trotter_clean {
            // One evolution per time point, shared across all cells.
            let per_point: Vec<Vec<_>> = (1..=n_t)
                .into_par_iter()
                .map(|s| -> Result<Vec<_>> {
                    let cell = plan.build_circuit(s, 0);
                    let stats = CellStats {
                        s,
                        m_index: 0,
                        gamma: cell.gamma,
                        depth: cell.circuit.depth(),
                        gate_count: cell.circuit.len(),
                    };
                    let mut psi = plan.initial_state().clone();
                    psi.apply_circuit(&cell.circuit);
                    (0..m)
                        .map(|mi| {
                            let records = plan
                                .shots_from_state(s, mi, cell.gamma, &psi)
                                .map_err(CliError::from)?;
                            Ok((
                                CellStats {
                                    m_index: mi,
                                    ..stats
                                },
                                records,
                            ))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            per_point.into_iter().flatten().collect()
        } else {
            (0..n_t * m)
                .into_par_iter()
                .map(|idx| -> Result<_> {
                    let s = idx / m + 1;
                    let mi = idx % m;
                    let out = plan.simulate_cell(s, mi).map_err(CliError::from)?;
                    Ok((out.stats, out.records))
                })
                .collect::<Result<_>>()?
        };

    let mut cells = Vec::with_capacity(cell_results.len());
    let mut records = Vec::with_capacity(cell_results.len() * plan.config().shots_per_sample);
    for (stats, recs) in cell_results {
        cells.push(stats);
        records.extend(recs);
    }
    let set = SnapshotSet::from_records(plan.meta(), records).map_err(CliError::from)?;
    Ok(ExperimentOutput { set, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gapscope_core::evolution::TimeGrid;
    use gapscope_core::hamiltonian::Hamiltonian;
    use gapscope_core::shadows::SamplingConfig;
    use gapscope_core::statevector::{NoiseModel, StateVector};

    fn plan(method: Method, noise: Option<NoiseModel>) -> ExperimentPlan {
        let h = Hamiltonian::heisenberg_chain(3, 1.0, 1.0, 1.0).unwrap();
        ExperimentPlan::new(
            h,
            StateVector::product("+00").unwrap(),
            false,
            TimeGrid::new(0.8, 4, 8).unwrap(),
            SamplingConfig {
                method,
                delta: 0.6,
                m_samples: 6,
                shots_per_sample: 2,
                noise,
                noise_on_measurement: true,
                seed: 31,
            },
        )
        .unwrap()
    }

    fn with_threads<T>(n: usize, f: impl FnOnce() -> T) -> T {
        // Serialize env mutation across tests.
        static LOCK: std::sync::Mutex<()> = std::sync::Mutex::new(());
        let _guard = LOCK.lock().unwrap();
        std::env::set_var("GAPSCOPE_THREADS", n.to_string());
        let out = f();
        std::env::remove_var("GAPSCOPE_THREADS");
        out
    }

    #[test]
    fn parallel_output_is_thread_count_invariant_and_matches_sequential() {
        let noise = NoiseModel::new(1e-3, 1e-2).unwrap();
        for (method, nm) in [
            (Method::Tepai, None),
            (Method::Trotter, None),
            (Method::Tepai, Some(noise)),
            (Method::Trotter, Some(noise)),
        ] {
            let p = plan(method, nm);
            let sequential = p.run().unwrap();
            let one = with_threads(1, || run_experiment(&p).unwrap());
            let four = with_threads(4, || run_experiment(&p).unwrap());
            assert_eq!(one.set, sequential.set, "{method:?} noise={}", nm.is_some());
            assert_eq!(four.set, sequential.set);
            assert_eq!(one.cells, sequential.cells);
            assert_eq!(four.cells, sequential.cells);
        }
    }

    #[test]
    fn bad_thread_env_is_a_config_error() {
        let err = with_threads(0, worker_count);
        assert!(err.is_err());
    }
}
