use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::{build_shell, fill_shell_lascar, n_s_of, oracle_min_fill_arithmetic, GridOracle, ShellSpec};
use crate::circle::ModelParams;
use crate::error::Result;

/// One row of the `n_s` table. Column order is fixed:
/// `n,k1,k2,k3,k4,n_s,oracle_len,lascar_len,match`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: i64,
    pub k1: i64,
    pub k2: i64,
    pub k3: i64,
    pub k4: i64,
    pub n_s: u64,
    /// The grid-search oracle's least fill length.
    pub oracle_len: Option<u64>,
    /// Length of the Lascar-distance fill of the built shell.
    pub lascar_len: u64,
    /// Both oracles report `n_s` and the Lascar fill verifies.
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Rows for every spec with `n` in `ns`, ordered by `(n, k₁, k₂, k₃)`.
pub fn table_rows(ns: RangeInclusive<i64>, oracle_max: u64) -> Result<Vec<TableRow>> {
    let jobs: Vec<(ModelParams, i64)> = ns
        .map(ModelParams::new)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flat_map(|p| (0..p.n()).map(move |k1| (p, k1)))
        .collect();
    let chunks: Vec<Vec<TableRow>> = jobs
        .par_iter()
        .map(|(params, k1)| -> Result<Vec<TableRow>> {
            let grid = GridOracle::new(*params, *k1, oracle_max)?;
            let mut rows = Vec::new();
            for k2 in 0..params.n() {
                for k3 in 0..params.n() {
                    let spec = ShellSpec::new(*params, *k1, k2, k3)?;
                    let n_s = n_s_of(&spec);
                    let oracle_len = grid.min_len(k2, k3);
                    let lascar = fill_shell_lascar(&build_shell(&spec), *params)?;
                    let matches = oracle_len == Some(n_s)
                        && oracle_min_fill_arithmetic(&spec, oracle_max) == Some(n_s)
                        && lascar.verified;
                    rows.push(TableRow {
                        n: params.n(),
                        k1: *k1,
                        k2,
                        k3,
                        k4: spec.k4(),
                        n_s,
                        oracle_len,
                        lascar_len: lascar.length,
                        matches,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}
