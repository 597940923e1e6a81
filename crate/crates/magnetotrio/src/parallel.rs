//! Grid sweeps fanned out over a rayon pool. Results come back in grid
//! order and go through the deterministic merge, so the thread count never
//! changes the output.

use magnetotrio_core::solvers::{
    finish_nbody, merge_solutions, solve_config_ii_at, solve_config_iii_at, solve_nbody_ii_at, ConfigSolution,
    GridSettings, NbodySearch,
};
use magnetotrio_core::{Result, SystemSpec};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "MAGNETOTRIO_THREADS";

/// Positive integer from `MAGNETOTRIO_THREADS`, if set.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|n: &usize| *n > 0)
}

/// Runs `f` on a pool capped by [`thread_cap`].
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        b = b.num_threads(n);
    }
    match b.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn sweep<T: Send>(grid: &GridSettings, f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    grid.validate()?;
    let values = grid.values();
    with_pool(|| values.par_iter().map(|&v| f(v)).collect())
}

pub fn find_config_ii(spec: &SystemSpec, grid: &GridSettings) -> Result<Vec<ConfigSolution>> {
    let per = sweep(grid, |v3| solve_config_ii_at(spec, v3, grid.v1_points_per_decade))?;
    merge_solutions(per.into_iter().flatten().collect(), "no certified Config II root on the grid")
}

pub fn find_config_iii(spec: &SystemSpec, grid: &GridSettings) -> Result<Vec<ConfigSolution>> {
    let per = sweep(grid, |v3| solve_config_iii_at(spec, v3, grid.v1_points_per_decade))?;
    merge_solutions(per.into_iter().flatten().collect(), "no certified Config III root on the grid")
}

pub fn find_nbody_ii(spec: &SystemSpec, grid: &GridSettings) -> Result<NbodySearch> {
    let per = sweep(grid, |vn| solve_nbody_ii_at(spec, vn, grid.v1_points_per_decade))?;
    let mut all = NbodySearch { solutions: Vec::new(), seeds: 0, stalled: 0 };
    for s in per {
        all.seeds += s.seeds;
        all.stalled += s.stalled;
        all.solutions.extend(s.solutions);
    }
    finish_nbody(all)
}
