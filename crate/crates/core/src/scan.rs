//! Batch runs over all primes of given degrees: table rows for rank two
//! and searches for primes whose indices have a given divisor.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::charpoly::{frobenius_charpoly, FrobeniusData};
use crate::drinfeld::GlobalDrinfeldModule;
use crate::endoring::{endomorphism_index, EndoRingData};
use crate::error::{Error, Result};
use crate::fq::{format_apoly, is_irreducible, monic_at, monic_count, APoly, Fq, FqContext};
use crate::quadorder::{maximal_order, Case, MaximalOrderData};

#[derive(Clone, Debug)]
pub struct PrimeInvariants {
    pub prime: APoly,
    pub fd: FrobeniusData,
    pub mo: MaximalOrderData,
    pub endo: EndoRingData,
}

/// Charpoly, maximal order and endomorphism ring at one prime.
pub fn analyze_prime(phi: &GlobalDrinfeldModule, prime: &APoly) -> Result<PrimeInvariants> {
    let k = phi.base();
    let red = phi.reduce_at(prime)?;
    let fd = frobenius_charpoly(&red)?;
    let mo = maximal_order(&fd, k)?;
    let endo = endomorphism_index(&red, &fd, &mo)?;
    Ok(PrimeInvariants { prime: prime.clone(), fd, mo, endo })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub prime: APoly,
    pub a: APoly,
    pub epsilon: Fq,
    pub c_pi: APoly,
    pub c_phi: APoly,
    pub b: APoly,
    pub case: Case,
    /// `Delta_max`, the different, or `sqrt(T)`.
    pub last: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowRecord {
    pub p: String,
    pub a: String,
    pub eps: String,
    pub c_pi: String,
    pub c_phi: String,
    pub last: String,
}

impl TableRow {
    pub fn new(inv: &PrimeInvariants, k: &FqContext) -> TableRow {
        TableRow {
            prime: inv.prime.clone(),
            a: inv.fd.trace(k),
            epsilon: inv.fd.epsilon,
            c_pi: inv.endo.c_pi.clone(),
            c_phi: inv.endo.c_phi.clone(),
            b: inv.endo.b.clone(),
            case: inv.mo.case(),
            last: inv.mo.last_column(k),
        }
    }

    pub fn record(&self, k: &FqContext) -> RowRecord {
        RowRecord {
            p: format_apoly(&self.prime, k),
            a: format_apoly(&self.a, k),
            eps: k.format(self.epsilon),
            c_pi: format_apoly(&self.c_pi, k),
            c_phi: format_apoly(&self.c_phi, k),
            last: self.last.clone(),
        }
    }
}

/// Name of the last column: `delta_max` for odd `q`, `different` for even.
pub fn last_column_name(k: &FqContext) -> &'static str {
    if k.characteristic() == 2 {
        "different"
    } else {
        "delta_max"
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub d_min: usize,
    pub d_max: usize,
    /// Keep primes with `A[pi] = E` too.
    pub all: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ScanConfig {
    pub fn degree(d: usize) -> ScanConfig {
        ScanConfig { d_min: d, d_max: d, all: false, threads: None }
    }

    fn validate(&self) -> Result<()> {
        if self.d_min == 0 || self.d_min > self.d_max {
            return Err(Error::InvalidInput(format!("bad degree range {}..={}", self.d_min, self.d_max)));
        }
        Ok(())
    }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Monic primes of degree `d` in enumeration order, tested in parallel.
pub fn primes_of_degree(k: &FqContext, d: usize) -> Vec<APoly> {
    (0..monic_count(k, d))
        .into_par_iter()
        .filter_map(|i| {
            let f = monic_at(k, d, i);
            is_irreducible(&f, k).then_some(f)
        })
        .collect()
}

/// `None` for bad primes, which are logged and skipped.
fn analyze_good(phi: &GlobalDrinfeldModule, prime: &APoly) -> Result<Option<PrimeInvariants>> {
    if !phi.has_good_reduction(prime) {
        log::warn!("skipping bad prime {}", format_apoly(prime, phi.base()));
        return Ok(None);
    }
    analyze_prime(phi, prime).map(Some)
}

/// Table rows in prime enumeration order; by default only primes with `b != 1`.
pub fn scan_table(phi: &GlobalDrinfeldModule, cfg: &ScanConfig) -> Result<Vec<TableRow>> {
    cfg.validate()?;
    if phi.rank() != 2 {
        return Err(Error::Precondition("table scan needs rank 2".into()));
    }
    let k = phi.base();
    in_pool(cfg.threads, || {
        let mut rows = Vec::new();
        for d in cfg.d_min..=cfg.d_max {
            let found: Result<Vec<Option<TableRow>>> = primes_of_degree(k, d)
                .par_iter()
                .map(|p| {
                    Ok(analyze_good(phi, p)?
                        .filter(|inv| cfg.all || !inv.endo.b.is_one())
                        .map(|inv| TableRow::new(&inv, k)))
                })
                .collect();
            rows.extend(found?.into_iter().flatten());
        }
        Ok(rows)
    })?
}

/// What a search asks of the refined index `b_1 = c_pi / c_phi` and of `c_phi`.
#[derive(Clone, Debug, Default)]
pub struct IndexTarget {
    /// `n | b_1`.
    pub b1: Option<APoly>,
    /// `m | c_phi`.
    pub c_phi: Option<APoly>,
}

impl IndexTarget {
    fn validate(&self) -> Result<()> {
        if self.b1.is_none() && self.c_phi.is_none() {
            return Err(Error::InvalidInput("no search target given".into()));
        }
        if self.b1.iter().chain(&self.c_phi).any(|t| t.is_zero()) {
            return Err(Error::InvalidInput("search targets must be nonzero".into()));
        }
        Ok(())
    }

    /// Both targets divide `c_pi`, a cheap necessary condition.
    fn admits(&self, c_pi: &APoly, k: &FqContext) -> bool {
        self.b1.iter().chain(&self.c_phi).all(|t| t.divides(c_pi, k))
    }

    pub fn matches(&self, endo: &EndoRingData, k: &FqContext) -> bool {
        self.b1.as_ref().is_none_or(|n| n.divides(&endo.b, k))
            && self.c_phi.as_ref().is_none_or(|m| m.divides(&endo.c_phi, k))
    }
}

/// The first prime, by degree and then enumeration order, meeting `target`.
pub fn find_prime_with_index_divisor(
    phi: &GlobalDrinfeldModule,
    target: &IndexTarget,
    cfg: &ScanConfig,
) -> Result<PrimeInvariants> {
    cfg.validate()?;
    target.validate()?;
    if phi.rank() != 2 {
        return Err(Error::Precondition("index search needs rank 2".into()));
    }
    let k = phi.base();
    in_pool(cfg.threads, || {
        for d in cfg.d_min..=cfg.d_max {
            let hit = primes_of_degree(k, d)
                .par_iter()
                .map(|p| -> Result<Option<PrimeInvariants>> {
                    if !phi.has_good_reduction(p) {
                        return Ok(None);
                    }
                    let red = phi.reduce_at(p)?;
                    let fd = frobenius_charpoly(&red)?;
                    let mo = maximal_order(&fd, k)?;
                    if !target.admits(&mo.c_pi, k) {
                        return Ok(None);
                    }
                    let endo = endomorphism_index(&red, &fd, &mo)?;
                    Ok(target.matches(&endo, k).then(|| PrimeInvariants { prime: p.clone(), fd, mo, endo }))
                })
                .find_first(|r| !matches!(r, Ok(None)));
            if let Some(hit) = hit {
                return hit.map(|x| x.unwrap());
            }
            log::info!("no prime of degree {d} meets the target");
        }
        Err(Error::SearchExhausted { max_degree: cfg.d_max })
    })?
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    /// One JSON object per line.
    Json,
}

/// Writes rows as CSV (header always present) or JSON lines.
pub fn emit<W: Write>(rows: &[TableRow], k: &FqContext, format: Format, out: W) -> Result<()> {
    let last = last_column_name(k);
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["p", "a", "eps", "c_pi", "c_phi", last])?;
            for row in rows {
                let r = row.record(k);
                w.write_record([&r.p, &r.a, &r.eps, &r.c_pi, &r.c_phi, &r.last])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            for row in rows {
                let r = row.record(k);
                let mut v = serde_json::to_value(&r)?;
                let obj = v.as_object_mut().unwrap();
                let cell = obj.remove("last").unwrap();
                obj.insert(last.into(), cell);
                serde_json::to_writer(&mut out, &v)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// [`emit`] to a file, or to stdout when `path` is `None`.
pub fn emit_to(rows: &[TableRow], k: &FqContext, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => emit(rows, k, format, io::BufWriter::new(File::create(p)?)),
        None => emit(rows, k, format, io::stdout().lock()),
    }
}
