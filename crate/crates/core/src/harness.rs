//! Seeded Monte Carlo property suites.
//!
//! Every trial draws from its own ChaCha8 stream `(seed, trial index)`, so a
//! report is identical regardless of how rayon schedules the trials.
//!
//! A violated *proved* statement counts as a failure; a violated conjecture
//! counts as a candidate and is archived with enough data to reproduce it.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::{eigenvalues, in_zn};
use crate::error::{Error, Result};
use crate::gram::{associate_circulant, gram_of, hadamard};
use crate::io::{to_pair, GramMatrixJson, Pair, StateTupleJson};
use crate::linalg::hermitian_eig;
use crate::regions::{in_polygon, max_imaginarity, polygon_margin, real_window};
use crate::states::{bargmann, tensor_tuple, PureState, StateTuple};
use crate::synth::{boundary_tuple, realize_real, scale_tuple};
use crate::BOUNDARY_BAND;

/// Most candidate/failure records kept in one report.
pub const MAX_RECORDS: usize = 64;

const EIG_TOL: f64 = 1e-9;
const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    /// Hadamard products of Gram matrices are Gram matrices of tensor tuples.
    #[serde(rename = "prop1")]
    Prop1,
    /// Invariants lie in the regular polygon.
    #[serde(rename = "prop2")]
    Prop2,
    /// Shrinking toward zero stays realizable.
    #[serde(rename = "star-shape")]
    StarShape,
    /// Real qubit tuples stay inside the real window.
    #[serde(rename = "real-window")]
    RealWindow,
    /// Associated circulants of Gram matrices are PSD.
    #[serde(rename = "ch-conjecture")]
    ChConjecture,
    /// Imaginary parts stay below the circulant maximum.
    #[serde(rename = "max-imaginarity")]
    MaxImaginarity,
    /// Polygon membership agrees with circulant feasibility.
    #[serde(rename = "polygon-feasibility")]
    PolygonFeasibility,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Prop1,
        Property::Prop2,
        Property::StarShape,
        Property::RealWindow,
        Property::ChConjecture,
        Property::MaxImaginarity,
        Property::PolygonFeasibility,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Prop1 => "prop1",
            Property::Prop2 => "prop2",
            Property::StarShape => "star-shape",
            Property::RealWindow => "real-window",
            Property::ChConjecture => "ch-conjecture",
            Property::MaxImaginarity => "max-imaginarity",
            Property::PolygonFeasibility => "polygon-feasibility",
        }
    }

    pub fn default_n(self) -> usize {
        match self {
            Property::Prop2 | Property::StarShape => 5,
            Property::MaxImaginarity => 3,
            _ => 4,
        }
    }

    /// Default local dimension; `None` means "same as n".
    pub fn default_d(self, n: usize) -> usize {
        match self {
            Property::Prop2 => 4,
            Property::ChConjecture => n,
            _ => 2,
        }
    }

    fn min_n(self) -> usize {
        match self {
            Property::Prop1 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown property '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Failure,
    Candidate,
}

/// Reproduction data for one offending trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub kind: RecordKind,
    pub trial: u64,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<GramMatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<StateTupleJson>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    /// Equal-width bins over `[lo, hi]`; out-of-range values go to the end bins.
    pub counts: Vec<u64>,
}

impl Histogram {
    fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Self {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let pos = ((x - self.lo) / (self.hi - self.lo) * bins as f64).floor();
        let idx = if pos.is_nan() || pos < 0.0 {
            0
        } else {
            (pos as usize).min(bins - 1)
        };
        self.counts[idx] += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub property_id: Property,
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub failures: u64,
    pub candidates: u64,
    /// Smallest per-trial margin; negative means the property was violated
    /// by that much (see [`run`] for the margin of each property).
    pub worst_margin: f64,
    pub seed: u64,
    pub elapsed_ms: u64,
    /// Whether violations count as failures (proved) or candidates.
    pub proved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
    pub records: Vec<Record>,
}

impl TrialReport {
    /// Everything except the wall-clock time, for reproducibility checks.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self {
            elapsed_ms: 0,
            ..self.clone()
        } == Self {
            elapsed_ms: 0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub property: Property,
    pub trials: u64,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

impl Config {
    pub fn new(property: Property, trials: u64, seed: u64) -> Self {
        let n = property.default_n();
        Self {
            property,
            trials,
            n,
            d: property.default_d(n),
            seed,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }
}

#[derive(Debug, Default)]
struct Outcome {
    margin: f64,
    records: Vec<Record>,
    histogram_value: Option<f64>,
}

impl Outcome {
    fn margin(margin: f64) -> Self {
        Self {
            margin,
            ..Self::default()
        }
    }

    fn with(mut self, r: Record) -> Self {
        self.records.push(r);
        self
    }
}

fn record(kind: RecordKind, trial: u64, note: impl Into<String>) -> Record {
    Record {
        kind,
        trial,
        note: note.into(),
        value: None,
        gram: None,
        tuple: None,
        eigenvalues: Vec::new(),
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_real_qubit_tuple(n: usize, rng: &mut impl Rng) -> StateTuple {
    let states = (0..n)
        .map(|_| PureState::real_qubit(rng.random_range(0.0..PI)))
        .collect();
    StateTuple::new(states).expect("n ≥ 1 states of equal dimension")
}

fn min_eig(m: &crate::linalg::ComplexMatrix) -> Result<(f64, Vec<f64>)> {
    let e = hermitian_eig(m)?.eigenvalues;
    Ok((e[0], e))
}

/// Runs a property suite.
///
/// Per-trial margins (the report keeps the minimum):
///
/// - `prop1`: smallest eigenvalue of the Hadamard product.
/// - `prop2`: signed distance of the invariant inside the polygon.
/// - `star-shape`: minus the scaling residual.
/// - `real-window`: real invariant minus the lower window endpoint.
/// - `ch-conjecture`: smallest eigenvalue of the associated circulant.
/// - `max-imaginarity`: `I_n − |Im|`.
/// - `polygon-feasibility`: distance to the polygon edge, negated on disagreement.
pub fn run(cfg: Config) -> Result<TrialReport> {
    let Config {
        property,
        trials,
        n,
        d,
        seed,
    } = cfg;
    if n < property.min_n() {
        return Err(Error::BadN(n));
    }
    if d < 2 {
        return Err(Error::Invalid(format!("dimension {d} < 2")));
    }
    let start = Instant::now();

    let ctx = Context::new(property, n, d)?;
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|trial| ctx.trial(trial, &mut trial_rng(seed, trial)))
        .collect::<Result<_>>()?;

    let proved = ctx.proved();
    let mut report = TrialReport {
        property_id: property,
        n,
        d,
        trials,
        failures: 0,
        candidates: 0,
        worst_margin: f64::INFINITY,
        seed,
        elapsed_ms: 0,
        proved,
        histogram: ctx.histogram(),
        records: Vec::new(),
    };
    for o in outcomes {
        report.worst_margin = report.worst_margin.min(o.margin);
        if let (Some(h), Some(x)) = (report.histogram.as_mut(), o.histogram_value) {
            h.add(x);
        }
        for r in o.records {
            match r.kind {
                RecordKind::Failure => report.failures += 1,
                RecordKind::Candidate => report.candidates += 1,
            }
            if report.records.len() < MAX_RECORDS {
                report.records.push(r);
            }
        }
    }
    if !report.worst_margin.is_finite() {
        report.worst_margin = 0.0;
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

struct Context {
    property: Property,
    n: usize,
    d: usize,
    lo: f64,
    i_n: f64,
    t_star: f64,
}

impl Context {
    fn new(property: Property, n: usize, d: usize) -> Result<Self> {
        let (lo, i_n, t_star) = if n >= 3 {
            let m = max_imaginarity(n)?;
            (real_window(n)?.0, m.i_n, m.t_star)
        } else {
            (0.0, 0.0, 0.0)
        };
        Ok(Self {
            property,
            n,
            d,
            lo,
            i_n,
            t_star,
        })
    }

    fn proved(&self) -> bool {
        match self.property {
            Property::ChConjecture => self.n == 3,
            Property::MaxImaginarity => false,
            _ => true,
        }
    }

    fn histogram(&self) -> Option<Histogram> {
        match self.property {
            Property::Prop2 => Some(Histogram::new(0.0, (PI / self.n as f64).cos(), 20)),
            _ => None,
        }
    }

    fn violation(&self) -> RecordKind {
        if self.proved() {
            RecordKind::Failure
        } else {
            RecordKind::Candidate
        }
    }

    fn trial(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        match self.property {
            Property::Prop1 => self.prop1(trial, rng),
            Property::Prop2 => self.prop2(trial, rng),
            Property::StarShape => self.star_shape(trial, rng),
            Property::RealWindow => self.real_window(trial, rng),
            Property::ChConjecture => self.ch_conjecture(trial, rng),
            Property::MaxImaginarity => self.max_imaginarity(trial, rng),
            Property::PolygonFeasibility => self.polygon_feasibility(trial, rng),
        }
    }

    fn prop1(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let a = StateTuple::haar(self.n, self.d, rng)?;
        let b = StateTuple::haar(self.n, self.d, rng)?;
        let (ga, gb) = (gram_of(&a), gram_of(&b));
        let prod = ga.matrix().hadamard(gb.matrix())?;
        let (min, eigs) = min_eig(&prod)?;
        let ab = tensor_tuple(&a, &b)?;
        let gram_dev = prod.max_abs_diff(gram_of(&ab).matrix());
        let inv_dev = (bargmann(&a) * bargmann(&b) - bargmann(&ab)).norm();
        let closed = hadamard(&ga, &gb).is_ok();

        let mut out = Outcome::margin(min);
        if min < -EIG_TOL || !closed || gram_dev > GRAM_TOL || inv_dev > GRAM_TOL {
            let mut r = record(
                RecordKind::Failure,
                trial,
                format!("min eigenvalue {min:e}, gram deviation {gram_dev:e}, invariant deviation {inv_dev:e}"),
            );
            r.gram = Some(GramMatrixJson::from_matrix(&prod));
            r.eigenvalues = eigs;
            out = out.with(r);
        }
        Ok(out)
    }

    fn prop2(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let t = StateTuple::haar(self.n, self.d, rng)?;
        let z = bargmann(&t);
        let margin = in_polygon(z, self.n)?.margin;
        let mut out = Outcome::margin(margin);
        out.histogram_value = Some(margin);
        if margin < -EIG_TOL {
            let mut r = record(
                RecordKind::Failure,
                trial,
                format!("polygon margin {margin:e}"),
            );
            r.value = Some(to_pair(z));
            r.tuple = Some((&t).into());
            out = out.with(r);
        }
        Ok(out)
    }

    fn star_shape(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let tup = StateTuple::haar(self.n, 2, rng)?;
        let s = match trial {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        };
        let c = bargmann(&tup);
        let scaled = scale_tuple(&tup, s)?;
        let residual = (bargmann(&scaled.tuple) - c * s).norm();
        let mut out = Outcome::margin(-residual);
        if residual > 1e-8 {
            let mut r = record(
                RecordKind::Failure,
                trial,
                format!("scale {s}, residual {residual:e}"),
            );
            r.value = Some(to_pair(c));
            r.tuple = Some((&tup).into());
            out = out.with(r);
        }
        Ok(out)
    }

    fn real_window(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let real = random_real_qubit_tuple(self.n, rng);
        let z = bargmann(&real);
        let mut out = Outcome::margin(z.re - self.lo);
        if z.re < self.lo - 1e-9 || z.im.abs() > 1e-12 {
            let mut r = record(RecordKind::Failure, trial, "real tuple outside the window");
            r.value = Some(to_pair(z));
            r.tuple = Some((&real).into());
            out = out.with(r);
        }

        let cplx = StateTuple::haar(self.n, 2, rng)?;
        let w = bargmann(&cplx);
        if w.im.abs() < 1e-9 && w.re < self.lo - 1e-6 {
            let mut r = record(
                RecordKind::Candidate,
                trial,
                "complex qubit tuple with real invariant below the window",
            );
            r.value = Some(to_pair(w));
            r.tuple = Some((&cplx).into());
            out = out.with(r);
        }

        if trial == 0 {
            let ok = realize_real(self.lo, self.n)
                .map(|p| p.residual <= 1e-9 && p.tuple.states().iter().all(PureState::is_real))
                .unwrap_or(false);
            if !ok {
                out = out.with(record(
                    RecordKind::Failure,
                    trial,
                    "directed endpoint realization missed",
                ));
            }
        }
        Ok(out)
    }

    fn ch_conjecture(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let t = StateTuple::haar(self.n, self.d, rng)?;
        let h = gram_of(&t);
        let eigs = associate_circulant(h.matrix()).and_then(|c| eigenvalues(&c));
        match eigs {
            Ok(mut e) => {
                e.sort_by(f64::total_cmp);
                let mut out = Outcome::margin(e[0]);
                if e[0] < -1e-8 {
                    let mut r = record(
                        self.violation(),
                        trial,
                        format!("associated circulant eigenvalue {:e}", e[0]),
                    );
                    r.gram = Some((&h).into());
                    r.eigenvalues = e;
                    out = out.with(r);
                }
                Ok(out)
            }
            Err(err) => {
                let mut r = record(
                    RecordKind::Failure,
                    trial,
                    format!("associated circulant failed: {err}"),
                );
                r.gram = Some((&h).into());
                Ok(Outcome::margin(0.0).with(r))
            }
        }
    }

    fn max_imaginarity(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let t = StateTuple::haar(self.n, self.d, rng)?;
        let z = bargmann(&t);
        let mut out = Outcome::margin(self.i_n - z.im.abs());
        if z.im.abs() > self.i_n + 1e-9 {
            let mut r = record(
                RecordKind::Candidate,
                trial,
                "imaginary part above the circulant maximum",
            );
            r.value = Some(to_pair(z));
            r.tuple = Some((&t).into());
            out = out.with(r);
        }
        if trial == 0 {
            let directed = boundary_tuple(self.n, self.t_star.sqrt().asin())?;
            let w = bargmann(&directed);
            if (w.im.abs() - self.i_n).abs() > 1e-8 {
                let mut r = record(
                    RecordKind::Failure,
                    trial,
                    "directed trial missed the maximum",
                );
                r.value = Some(to_pair(w));
                out = out.with(r);
            }
        }
        Ok(out)
    }

    fn polygon_feasibility(&self, trial: u64, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let z1 = Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
        let margin = polygon_margin(z1, self.n);
        let polygon = margin >= -1e-12;
        let feasible = in_zn(z1, self.n)?;
        let agree = polygon == feasible.member;
        let mut out = Outcome::margin(if agree { margin.abs() } else { -margin.abs() });
        if !agree && margin.abs() > BOUNDARY_BAND {
            let mut r = record(
                RecordKind::Failure,
                trial,
                format!(
                    "polygon {polygon}, feasibility {} (max min eigenvalue {:e})",
                    feasible.member, feasible.max_min_eigenvalue
                ),
            );
            r.value = Some(to_pair(z1));
            out = out.with(r);
        }
        Ok(out)
    }
}

/// Two random Haar tuples: Hadamard product checks.
pub fn check_prop1(trials: u64, n: usize, d: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::Prop1, trials, seed)
        .with_n(n)
        .with_d(d))
}

pub fn check_prop2(trials: u64, n: usize, d: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::Prop2, trials, seed)
        .with_n(n)
        .with_d(d))
}

pub fn check_star_shape(trials: u64, n: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::StarShape, trials, seed).with_n(n))
}

pub fn check_real_window(trials: u64, n: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::RealWindow, trials, seed).with_n(n))
}

/// Tuples are drawn in dimension `n`, enough to reach every Gram matrix.
pub fn check_ch_conjecture(trials: u64, n: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::ChConjecture, trials, seed)
        .with_n(n)
        .with_d(n))
}

/// Random qubit tuples.
pub fn check_max_imaginarity(trials: u64, n: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::MaxImaginarity, trials, seed)
        .with_n(n)
        .with_d(2))
}

pub fn check_polygon_feasibility(trials: u64, n: usize, seed: u64) -> Result<TrialReport> {
    run(Config::new(Property::PolygonFeasibility, trials, seed).with_n(n))
}
