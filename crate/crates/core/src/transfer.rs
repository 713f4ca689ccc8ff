//! The policy reuse matrix over the word transformation suites.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::corpus::{transfer_problem, TransformKind};
use crate::policy::{fmt_sig9, QTable};
use crate::search::{run, LearnConfig, LearnError};
use crate::stats::{mean, wilcoxon_signed_rank, Wilcoxon};

/// Source policies are learned on samples drawn from a shifted seed so
/// that the diagonal does not replay the target run.
const SOURCE_SEED_OFFSET: u64 = 1_000;

#[derive(Clone, Debug)]
pub struct TransferCell {
    pub source: TransformKind,
    pub target: TransformKind,
    /// Steps without reuse, one per seed.
    pub scratch: Vec<usize>,
    /// Steps with the source policy imported, paired with `scratch`.
    pub reuse: Vec<usize>,
    pub wilcoxon: Option<Wilcoxon>,
}

impl TransferCell {
    pub fn scratch_mean(&self) -> f64 {
        mean(&self.scratch.iter().map(|&s| s as f64).collect::<Vec<_>>())
    }

    pub fn reuse_mean(&self) -> f64 {
        mean(&self.reuse.iter().map(|&s| s as f64).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub seeds: Vec<u64>,
    pub cells: Vec<TransferCell>,
}

impl TransferMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,target,scratch_mean,reuse_mean,p_value\n");
        for c in &self.cells {
            let p = c.wilcoxon.map_or(String::new(), |w| fmt_sig9(w.p_value));
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.source.name(),
                c.target.name(),
                fmt_sig9(c.scratch_mean()),
                fmt_sig9(c.reuse_mean()),
                p
            );
        }
        out
    }

    /// Cells where reuse needed no more steps on average.
    pub fn cells_not_worse(&self) -> usize {
        self.cells.iter().filter(|c| c.reuse_mean() <= c.scratch_mean()).count()
    }

    /// Relative reduction of the all-cells mean step count.
    pub fn mean_reduction(&self) -> f64 {
        let s = mean(&self.cells.iter().map(TransferCell::scratch_mean).collect::<Vec<_>>());
        let r = mean(&self.cells.iter().map(TransferCell::reuse_mean).collect::<Vec<_>>());
        (s - r) / s
    }
}

fn learn_steps(
    kind: TransformKind,
    sample: u64,
    cfg: &LearnConfig,
    policy: Option<&QTable>,
) -> Result<(usize, QTable), LearnError> {
    let problem = transfer_problem(kind, sample, sample);
    let mut cfg = cfg.clone();
    cfg.seed = sample;
    let r = run(&problem, &cfg, policy)?;
    Ok((r.steps, r.q_table))
}

/// Runs every (source, target) pair over `seeds`. Runs are paired by seed:
/// the scratch and reuse runs of a cell share sample, operator order and
/// tie-break stream.
pub fn transfer_matrix(
    kinds: &[TransformKind],
    seeds: &[u64],
    cfg: &LearnConfig,
) -> Result<TransferMatrix, LearnError> {
    let jobs: Vec<(TransformKind, u64)> = kinds.iter().flat_map(|&k| seeds.iter().map(move |&s| (k, s))).collect();
    let policies: Vec<QTable> = jobs
        .par_iter()
        .map(|&(k, s)| learn_steps(k, s + SOURCE_SEED_OFFSET, cfg, None).map(|r| r.1))
        .collect::<Result<_, _>>()?;
    let scratch: Vec<usize> =
        jobs.par_iter().map(|&(k, s)| learn_steps(k, s, cfg, None).map(|r| r.0)).collect::<Result<_, _>>()?;
    let idx = |k: TransformKind, s: u64| jobs.iter().position(|j| *j == (k, s)).expect("job exists");

    let pairs: Vec<(TransformKind, TransformKind, u64)> = kinds
        .iter()
        .flat_map(|&src| kinds.iter().flat_map(move |&tgt| seeds.iter().map(move |&s| (src, tgt, s))))
        .collect();
    let reuse: Vec<usize> = pairs
        .par_iter()
        .map(|&(src, tgt, s)| learn_steps(tgt, s, cfg, Some(&policies[idx(src, s)])).map(|r| r.0))
        .collect::<Result<_, _>>()?;

    let mut cells = Vec::new();
    for &src in kinds {
        for &tgt in kinds {
            let sc: Vec<usize> = seeds.iter().map(|&s| scratch[idx(tgt, s)]).collect();
            let re: Vec<usize> =
                pairs.iter().zip(&reuse).filter(|((a, b, _), _)| *a == src && *b == tgt).map(|(_, &r)| r).collect();
            let wilcoxon = if seeds.len() > 1 {
                let x: Vec<f64> = sc.iter().map(|&v| v as f64).collect();
                let y: Vec<f64> = re.iter().map(|&v| v as f64).collect();
                wilcoxon_signed_rank(&x, &y)
            } else {
                None
            };
            cells.push(TransferCell { source: src, target: tgt, scratch: sc, reuse: re, wilcoxon });
        }
    }
    Ok(TransferMatrix { seeds: seeds.to_vec(), cells })
}
