//! Catalog of the displayed identities and nonnegativity claims, a uniform
//! verification entry point, conjecture scans over parameter grids, and a
//! deterministic parallel job runner.

mod catalog;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::report::VerificationReport;
use crate::Error;

pub use catalog::{coratq3_excluded_pair, crank_table};

/// Every identity and claim the engine can check. Conjecture ids are
/// scan-only: they carry no equality oracle and report scan-pass/scan-fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IdentityId {
    Thm1,
    Cazq2,
    Kid,
    Eprop,
    Dprod,
    Sprop,
    Pcore1,
    Atq,
    Atqfin,
    Coratq1,
    Coratq2,
    Coratq3,
    Crankgen,
    Aci,
    Res1,
    Res2,
    Ekin,
    Cazqzero,
    FunceqR,
    FunceqC,
    FunceqF,
    Conj2a,
    Conj2b,
    Conj2c,
}

impl IdentityId {
    pub const ALL: [IdentityId; 24] = [
        IdentityId::Thm1,
        IdentityId::Cazq2,
        IdentityId::Kid,
        IdentityId::Eprop,
        IdentityId::Dprod,
        IdentityId::Sprop,
        IdentityId::Pcore1,
        IdentityId::Atq,
        IdentityId::Atqfin,
        IdentityId::Coratq1,
        IdentityId::Coratq2,
        IdentityId::Coratq3,
        IdentityId::Crankgen,
        IdentityId::Aci,
        IdentityId::Res1,
        IdentityId::Res2,
        IdentityId::Ekin,
        IdentityId::Cazqzero,
        IdentityId::FunceqR,
        IdentityId::FunceqC,
        IdentityId::FunceqF,
        IdentityId::Conj2a,
        IdentityId::Conj2b,
        IdentityId::Conj2c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Thm1 => "THM1",
            IdentityId::Cazq2 => "CAZQ2",
            IdentityId::Kid => "KID",
            IdentityId::Eprop => "EPROP",
            IdentityId::Dprod => "DPROD",
            IdentityId::Sprop => "SPROP",
            IdentityId::Pcore1 => "PCORE1",
            IdentityId::Atq => "ATQ",
            IdentityId::Atqfin => "ATQFIN",
            IdentityId::Coratq1 => "CORATQ1",
            IdentityId::Coratq2 => "CORATQ2",
            IdentityId::Coratq3 => "CORATQ3",
            IdentityId::Crankgen => "CRANKGEN",
            IdentityId::Aci => "ACI",
            IdentityId::Res1 => "RES1",
            IdentityId::Res2 => "RES2",
            IdentityId::Ekin => "EKIN",
            IdentityId::Cazqzero => "CAZQZERO",
            IdentityId::FunceqR => "FUNCEQ_R",
            IdentityId::FunceqC => "FUNCEQ_C",
            IdentityId::FunceqF => "FUNCEQ_F",
            IdentityId::Conj2a => "CONJ2A",
            IdentityId::Conj2b => "CONJ2B",
            IdentityId::Conj2c => "CONJ2C",
        }
    }

    /// Named integer parameters this id accepts, in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            IdentityId::Thm1 => &["a"],
            IdentityId::Cazq2 => &[],
            IdentityId::Kid => &["t"],
            IdentityId::Eprop => &["M"],
            IdentityId::Dprod | IdentityId::Sprop => &["N"],
            IdentityId::Pcore1 => &["t"],
            IdentityId::Atq => &["i", "j"],
            IdentityId::Atqfin => &["L", "i", "j"],
            IdentityId::Coratq1 => &["a", "b", "M"],
            IdentityId::Coratq2 | IdentityId::Coratq3 => &["m", "n"],
            IdentityId::Crankgen
            | IdentityId::Aci
            | IdentityId::Res1
            | IdentityId::Res2
            | IdentityId::Ekin => &[],
            IdentityId::Cazqzero
            | IdentityId::FunceqR
            | IdentityId::FunceqC
            | IdentityId::FunceqF => &["a"],
            IdentityId::Conj2a => &["p"],
            IdentityId::Conj2b => &["a", "b", "m", "n"],
            IdentityId::Conj2c => &["a"],
        }
    }

    /// Conjecture ids have no equality oracle; a clean scan is reported as
    /// scan-pass, never as a verified equality.
    pub fn is_conjecture(self) -> bool {
        matches!(
            self,
            IdentityId::Conj2a | IdentityId::Conj2b | IdentityId::Conj2c
        )
    }

    /// Ids whose product carries an uncancellable q^0 pole and therefore
    /// requires a z-window.
    pub fn requires_window(self) -> bool {
        matches!(self, IdentityId::Conj2a | IdentityId::Conj2c)
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named integer parameters plus the truncation order and optional z-window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityParams {
    pub values: BTreeMap<String, i64>,
    pub order: usize,
    pub window: Option<(i64, i64)>,
}

impl IdentityParams {
    pub fn new(order: usize) -> Self {
        IdentityParams {
            values: BTreeMap::new(),
            order,
            window: None,
        }
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn with_window(mut self, zmin: i64, zmax: i64) -> Self {
        self.window = Some((zmin, zmax));
        self
    }

    fn get(&self, id: IdentityId, name: &str) -> Result<i64, Error> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| Error::BadIdentityParams {
                id: id.name().into(),
                msg: format!("missing parameter {name}"),
            })
    }

    fn validate_names(&self, id: IdentityId) -> Result<(), Error> {
        for key in self.values.keys() {
            if !id.param_names().contains(&key.as_str()) {
                return Err(Error::BadIdentityParams {
                    id: id.name().into(),
                    msg: format!("unknown parameter {key}"),
                });
            }
        }
        for name in id.param_names() {
            if !self.values.contains_key(*name) {
                return Err(Error::BadIdentityParams {
                    id: id.name().into(),
                    msg: format!("missing parameter {name}"),
                });
            }
        }
        Ok(())
    }
}

/// Check one identity at one parameter point.
pub fn verify(id: IdentityId, params: &IdentityParams) -> Result<VerificationReport, Error> {
    params.validate_names(id)?;
    if id.requires_window() && params.window.is_none() {
        return Err(Error::WindowRequired(id.name().into()));
    }
    catalog::dispatch(id, params)
}

/// Run a scan-only conjecture over a parameter grid. Ranges are inclusive and
/// the grid is walked in lexicographic order of the canonical parameter
/// names, so report order is deterministic.
pub fn scan_conjecture(
    id: IdentityId,
    grid: &[(String, i64, i64)],
    order: usize,
    window: Option<(i64, i64)>,
) -> Result<Vec<VerificationReport>, Error> {
    if !id.is_conjecture() {
        return Err(Error::BadIdentityParams {
            id: id.name().into(),
            msg: "scan_conjecture only accepts conjecture ids".into(),
        });
    }
    let jobs = grid_jobs(id, grid, order, window)?;
    let mut out = Vec::with_capacity(jobs.len());
    for job in &jobs {
        out.push(verify(job.id, &job.params)?);
    }
    Ok(out)
}

/// One verification work item.
#[derive(Clone, Debug)]
pub struct Job {
    pub id: IdentityId,
    pub params: IdentityParams,
}

/// Expand per-parameter inclusive ranges into the lexicographic grid of jobs.
pub fn grid_jobs(
    id: IdentityId,
    grid: &[(String, i64, i64)],
    order: usize,
    window: Option<(i64, i64)>,
) -> Result<Vec<Job>, Error> {
    let mut names: Vec<&str> = id.param_names().to_vec();
    names.retain(|n| grid.iter().any(|(g, _, _)| g == n));
    if names.len() != grid.len() {
        let extra: Vec<&String> = grid
            .iter()
            .map(|(g, _, _)| g)
            .filter(|g| !id.param_names().contains(&g.as_str()))
            .collect();
        return Err(Error::BadIdentityParams {
            id: id.name().into(),
            msg: format!("grid names {extra:?} not accepted by this id"),
        });
    }
    let mut jobs = vec![IdentityParams {
        values: BTreeMap::new(),
        order,
        window,
    }];
    for name in names {
        let (_, lo, hi) = grid.iter().find(|(g, _, _)| g == name).unwrap();
        if lo > hi {
            return Err(Error::BadIdentityParams {
                id: id.name().into(),
                msg: format!("empty range for {name}: {lo}..{hi}"),
            });
        }
        let mut next = Vec::with_capacity(jobs.len() * (hi - lo + 1) as usize);
        for base in &jobs {
            for v in *lo..=*hi {
                next.push(base.clone().with(name, v));
            }
        }
        jobs = next;
    }
    Ok(jobs.into_iter().map(|params| Job { id, params }).collect())
}

/// Run jobs with the requested thread count, collecting reports in job
/// order. Results are bit-identical regardless of thread count.
pub fn run_jobs(jobs: &[Job], threads: usize) -> Vec<Result<VerificationReport, Error>> {
    run_jobs_timed(jobs, threads, false)
}

/// Like [`run_jobs`], optionally filling `elapsedMs` on each report. Timings
/// are wall-clock and not reproducible, so the default output omits them.
pub fn run_jobs_timed(
    jobs: &[Job],
    threads: usize,
    timings: bool,
) -> Vec<Result<VerificationReport, Error>> {
    let run_one = |job: &Job| {
        let started = std::time::Instant::now();
        let mut result = verify(job.id, &job.params);
        if timings {
            if let Ok(report) = result.as_mut() {
                report.elapsed_ms = Some(started.elapsed().as_millis() as u64);
            }
        }
        result
    };
    #[cfg(feature = "parallel")]
    if threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        return pool.install(|| jobs.par_iter().map(run_one).collect());
    }
    let _ = threads;
    jobs.iter().map(run_one).collect()
}
