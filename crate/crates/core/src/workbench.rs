//! Module descriptors, the census, the expectation table and the
//! reproduction harness behind the command-line tool.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{build_algebra, AlgebraError, AlgebraTable};
use crate::deformation::{
    classify_defring, find_certificate, first_order, DefReport, DeformationError, ModuleOrigin, PowerSeriesEvidence,
    RingType,
};
use crate::homological::{ext1_dim, hom_space, omega, stable_end_dim, HomologicalError};
use crate::quiver::{catalog, parse_presentation, CharConstraint, DslError, Presentation, Word, CATALOG_NAMES};
use crate::rep::{is_isomorphic, IsoVerdict, Rep, RepError};
use crate::strings::{band_module, band_of, enumerate_strings, string_module, Mu, StringError};

/// Default lifting cap for `k[[t]]` verdicts without a certificate.
pub const DEFAULT_CAP: usize = 10;
/// Longest strings the census accepts.
pub const CENSUS_MAX_LEN: usize = 12;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error("bad module descriptor `{0}`")]
    Descriptor(String),
    #[error("census max_len {0} exceeds the limit {CENSUS_MAX_LEN}")]
    CensusTooLarge(usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Catalog algebra over `F_p`.
pub fn load_algebra(name: &str, p: u32) -> Result<Arc<AlgebraTable>, WorkbenchError> {
    Ok(Arc::new(build_algebra(&catalog(name, p)?, p)?))
}

/// Algebra from a presentation file.
pub fn load_algebra_file(path: &std::path::Path, p: u32) -> Result<Arc<AlgebraTable>, WorkbenchError> {
    let text = std::fs::read_to_string(path)?;
    let pres = parse_presentation(&text)?;
    pres.check_char(p)?;
    Ok(Arc::new(build_algebra(&pres, p)?))
}

/// `p` itself, or 2 for algebras that only exist in characteristic 2.
pub fn prime_for(name: &str, p: u32) -> u32 {
    let pres: Presentation = parse_presentation(crate::quiver::catalog_text(name).expect("catalog name"))
        .expect("catalog parses");
    match pres.char_constraint {
        CharConstraint::Only2 => 2,
        CharConstraint::Any => p,
    }
}

/// How a module is specified on the command line and in reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleDesc {
    String(String),
    Band { mu: Mu, m: usize },
    Simple(String),
    Projective(String),
}

impl fmt::Display for ModuleDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleDesc::String(w) => write!(f, "string:{w}"),
            ModuleDesc::Band { mu, m } => write!(f, "band:{mu}:{m}"),
            ModuleDesc::Simple(v) => write!(f, "simple:{v}"),
            ModuleDesc::Projective(v) => write!(f, "proj:{v}"),
        }
    }
}

impl FromStr for ModuleDesc {
    type Err = WorkbenchError;

    /// `string:<word>`, `band:<mu>[:<m>]`, `simple:<v>` or `proj:<v>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WorkbenchError::Descriptor(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "string" => Ok(ModuleDesc::String(rest.trim().to_string())),
            "simple" => Ok(ModuleDesc::Simple(rest.trim().to_string())),
            "proj" | "projective" => Ok(ModuleDesc::Projective(rest.trim().to_string())),
            "band" => {
                let mut parts = rest.split(':');
                let mu: Mu = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let m = match parts.next() {
                    Some(m) => m.trim().parse().map_err(|_| bad())?,
                    None => 1,
                };
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(ModuleDesc::Band { mu, m })
            }
            _ => Err(bad()),
        }
    }
}

/// Builds the module and records where it came from for certificate lookup.
pub fn build_module(alg: &Arc<AlgebraTable>, desc: &ModuleDesc) -> Result<(Rep, ModuleOrigin), WorkbenchError> {
    let q = alg.quiver();
    let vertex = |v: &str| {
        q.vertex_index(v).ok_or_else(|| DslError::UnknownVertex {
            line: 1,
            name: v.to_string(),
        })
    };
    match desc {
        ModuleDesc::String(text) => {
            let w = Word::parse(text, q)?;
            let rep = string_module(alg, &w)?;
            Ok((rep, ModuleOrigin::String(w)))
        }
        ModuleDesc::Band { mu, m } => {
            let bm = band_module(alg, *mu, *m)?;
            let origin = match (&bm.string, mu) {
                (Some(_), Mu::Infinity) => ModuleOrigin::Other,
                _ => ModuleOrigin::Band { mu: *mu, m: *m },
            };
            Ok((bm.rep, origin))
        }
        ModuleDesc::Simple(v) => Ok((Rep::simple(alg.clone(), vertex(v)?), ModuleOrigin::Other)),
        ModuleDesc::Projective(v) => Ok((Rep::projective(alg.clone(), vertex(v)?), ModuleOrigin::Other)),
    }
}

/// Classification with automatic lookup of a shipped certificate.
pub fn classify_module(alg: &Arc<AlgebraTable>, desc: &ModuleDesc, cap: usize) -> Result<(Rep, DefReport), WorkbenchError> {
    let (rep, origin) = build_module(alg, desc)?;
    let cert = find_certificate(alg, &origin);
    let report = classify_defring(&rep, cap, cert.as_ref().map(|(id, l)| (id.as_str(), l)))?;
    Ok((rep, report))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CensusRow {
    pub algebra: String,
    pub p: u32,
    pub module: String,
    pub dims: Vec<usize>,
    pub stable_end_dim: usize,
    pub ext1: Option<usize>,
    pub ring: RingType,
    pub verdict: String,
    pub orbit: Option<usize>,
}

impl CensusRow {
    pub const CSV_HEADER: [&'static str; 8] =
        ["algebra", "p", "module", "dims", "stable_end_dim", "ext1", "verdict", "orbit"];

    fn csv_record(&self) -> [String; 8] {
        [
            self.algebra.clone(),
            self.p.to_string(),
            self.module.clone(),
            self.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";"),
            self.stable_end_dim.to_string(),
            self.ext1.map(|e| e.to_string()).unwrap_or_default(),
            self.verdict.clone(),
            self.orbit.map(|o| o.to_string()).unwrap_or_default(),
        ]
    }
}

/// CSV with a header row and fixed column order.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CensusRow::CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r.csv_record()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Descriptors covered by the census: strings up to `max_len`, then the
/// band boundary modules for every parameter.
pub fn census_modules(alg: &AlgebraTable, max_len: usize) -> Vec<ModuleDesc> {
    let q = alg.quiver();
    let mut out: Vec<ModuleDesc> = enumerate_strings(alg, max_len)
        .into_iter()
        .map(|w| match w {
            Word::Empty(u) => ModuleDesc::Simple(q.vertex_name(u).to_string()),
            w => ModuleDesc::String(w.display(q)),
        })
        .collect();
    if let Ok(spec) = band_of(alg) {
        out.extend(spec.mu_values(alg.field().p()).into_iter().map(|mu| ModuleDesc::Band { mu, m: 1 }));
    }
    out
}

/// Census of one algebra; rows come out in descriptor order.
pub fn census(alg: &Arc<AlgebraTable>, max_len: usize, cap: usize) -> Result<Vec<CensusRow>, WorkbenchError> {
    if max_len > CENSUS_MAX_LEN {
        return Err(WorkbenchError::CensusTooLarge(max_len));
    }
    let descs = census_modules(alg, max_len);
    let computed: Vec<(Rep, DefReport)> = descs
        .par_iter()
        .map(|d| classify_module(alg, d, cap))
        .collect::<Result<_, _>>()?;
    let reps: Vec<&Rep> = computed.iter().map(|(r, _)| r).collect();
    let stable_k: Vec<bool> = computed.iter().map(|(_, r)| r.stable_end_dim == 1).collect();
    let orbits = orbit_ids(&reps, &stable_k)?;
    let p = alg.field().p();
    Ok(descs
        .iter()
        .zip(&computed)
        .zip(orbits)
        .map(|((d, (rep, rpt)), orbit)| CensusRow {
            algebra: alg.name().to_string(),
            p,
            module: d.to_string(),
            dims: rep.dims().to_vec(),
            stable_end_dim: rpt.stable_end_dim,
            ext1: rpt.ext1,
            ring: rpt.ring,
            verdict: rpt.verdict_label(),
            orbit,
        })
        .collect())
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
}

/// Classes of rows under isomorphism and `Ω`, numbered by first occurrence.
fn orbit_ids(reps: &[&Rep], active: &[bool]) -> Result<Vec<Option<usize>>, WorkbenchError> {
    let n = reps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
    let mut by_dims: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &i in &idx {
        by_dims.entry(reps[i].dims().to_vec()).or_default().push(i);
    }
    let iso = |a: &Rep, b: &Rep| -> Result<bool, WorkbenchError> { Ok(is_isomorphic(a, b)?.verdict == IsoVerdict::Yes) };
    for group in by_dims.values() {
        for (k, &i) in group.iter().enumerate() {
            for &j in &group[..k] {
                if find(&mut parent, i) != find(&mut parent, j) && iso(reps[i], reps[j])? {
                    union(&mut parent, i, j);
                }
            }
        }
    }
    let omegas: Vec<Rep> = idx.par_iter().map(|&i| omega(reps[i])).collect::<Result<_, _>>()?;
    for (&i, om) in idx.iter().zip(&omegas) {
        if let Some(group) = by_dims.get(om.dims()) {
            for &j in group {
                if iso(om, reps[j])? {
                    union(&mut parent, i, j);
                    break;
                }
            }
        }
    }
    let mut numbering: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = vec![None; n];
    for &i in &idx {
        let root = find(&mut parent, i);
        let next = numbering.len();
        out[i] = Some(*numbering.entry(root).or_insert(next));
    }
    Ok(out)
}

/// Whether a census contains no `k[[t]]` verdict.
pub fn all_finite_dimensional(rows: &[CensusRow]) -> bool {
    rows.iter().all(|r| r.ring != RingType::PowerSeries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Representatives,
    Tubes,
    Bands,
    Omega,
    CrossOracle,
    CharSensitivity,
    Finiteness,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Representatives,
        Scenario::Tubes,
        Scenario::Bands,
        Scenario::Omega,
        Scenario::CrossOracle,
        Scenario::CharSensitivity,
        Scenario::Finiteness,
    ];

    pub fn criterion(self) -> u8 {
        Scenario::ALL.iter().position(|s| *s == self).unwrap() as u8 + 1
    }

    pub fn id(self) -> &'static str {
        match self {
            Scenario::Representatives => "representatives",
            Scenario::Tubes => "tubes",
            Scenario::Bands => "bands",
            Scenario::Omega => "omega",
            Scenario::CrossOracle => "cross-oracle",
            Scenario::CharSensitivity => "char-sensitivity",
            Scenario::Finiteness => "finiteness",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Scenario::Representatives => "Omega-orbit representatives",
            Scenario::Tubes => "tube modules and boundary modules",
            Scenario::Bands => "band boundary census",
            Scenario::Omega => "Omega-functoriality",
            Scenario::CrossOracle => "cross-oracle invariants",
            Scenario::CharSensitivity => "characteristic 2 sensitivity",
            Scenario::Finiteness => "finite-dimensionality flag",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SedExpect {
    Exactly(usize),
    AtLeast(usize),
}

impl SedExpect {
    pub fn accepts(self, d: usize) -> bool {
        match self {
            SedExpect::Exactly(e) => d == e,
            SedExpect::AtLeast(e) => d >= e,
        }
    }
}

impl fmt::Display for SedExpect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SedExpect::Exactly(e) => write!(f, "stend={e}"),
            SedExpect::AtLeast(e) => write!(f, "stend>={e}"),
        }
    }
}

/// One expected verdict for a named module.
#[derive(Clone, Copy, Debug)]
pub struct ModuleExpectation {
    pub algebra: &'static str,
    pub scenario: Scenario,
    /// Role of the module, e.g. `V1`, `T2`, `boundary`, `T(2,1)`.
    pub clause: &'static str,
    pub module: &'static str,
    pub stable_end: SedExpect,
    pub ext1: Option<usize>,
    pub ring: Option<RingType>,
    pub certificate: Option<&'static str>,
}

const fn rep(algebra: &'static str, clause: &'static str, module: &'static str, ext1: usize, ring: RingType) -> ModuleExpectation {
    ModuleExpectation {
        algebra,
        scenario: Scenario::Representatives,
        clause,
        module,
        stable_end: SedExpect::Exactly(1),
        ext1: Some(ext1),
        ring: Some(ring),
        certificate: None,
    }
}

const fn tube_k(algebra: &'static str, clause: &'static str, module: &'static str) -> ModuleExpectation {
    ModuleExpectation {
        algebra,
        scenario: Scenario::Tubes,
        clause,
        module,
        stable_end: SedExpect::Exactly(1),
        ext1: Some(0),
        ring: Some(RingType::K),
        certificate: None,
    }
}

const fn tube_t2(algebra: &'static str, module: &'static str, cert: &'static str) -> ModuleExpectation {
    ModuleExpectation {
        algebra,
        scenario: Scenario::Tubes,
        clause: "T2",
        module,
        stable_end: SedExpect::Exactly(1),
        ext1: Some(1),
        ring: Some(RingType::PowerSeries),
        certificate: Some(cert),
    }
}

const fn tube_wide(algebra: &'static str, clause: &'static str, module: &'static str) -> ModuleExpectation {
    ModuleExpectation {
        algebra,
        scenario: Scenario::Tubes,
        clause,
        module,
        stable_end: SedExpect::AtLeast(2),
        ext1: None,
        ring: Some(RingType::VersalOnly),
        certificate: None,
    }
}

use RingType::{DualNumbers as DN, RegularLambda as REG, K};

/// Expected verdicts for named modules.
pub const EXPECTATIONS: &[ModuleExpectation] = &[
    rep("D(1)_0", "V0", "simple:0", 2, REG),
    rep("D(1)_1", "V0", "simple:0", 2, REG),
    rep("D(2A)_0", "V0", "simple:0", 1, DN),
    rep("D(2A)_0", "V1", "string:beta", 1, DN),
    rep("D(2A)_1", "V0", "simple:0", 1, DN),
    rep("D(2A)_1", "V1", "string:beta", 1, DN),
    rep("D(3A)_1", "V0", "simple:1", 0, K),
    rep("D(3A)_1", "V1", "string:beta", 0, K),
    rep("D(3A)_1", "V2", "string:eta", 0, K),
    rep("D(3K)", "V0", "simple:1", 0, K),
    rep("D(3K)", "V1", "simple:0", 0, K),
    rep("D(3K)", "V2", "simple:2", 0, K),
    rep("D(3A)_2", "V0", "simple:1", 0, K),
    rep("D(3A)_2", "V1", "string:beta", 1, DN),
    rep("D(3A)_2", "V2", "string:eta", 1, DN),
    rep("D(3B)_{2,1}", "V0", "simple:1", 0, K),
    rep("D(3B)_{2,1}", "V1", "simple:0", 1, DN),
    rep("D(3B)_{2,1}", "V2", "string:eta", 1, DN),
    rep("D(3B)_{2,2}", "V0", "string:gamma*delta^-1", 0, K),
    rep("D(3B)_{2,2}", "V1", "simple:0", 1, DN),
    rep("D(3B)_{2,2}", "V2", "string:gamma", 1, DN),
    rep("D(3D)_2", "V0", "simple:1", 0, K),
    rep("D(3D)_2", "V1", "simple:0", 1, DN),
    rep("D(3D)_2", "V2", "simple:2", 1, DN),
    rep("D(3L)", "V0", "string:beta", 0, K),
    rep("D(3L)", "V1", "simple:0", 1, DN),
    rep("D(3L)", "V2", "string:delta*beta", 1, DN),
    rep("D(3Q)", "V0", "string:delta", 0, K),
    rep("D(3Q)", "V1", "simple:0", 1, DN),
    rep("D(3Q)", "V2", "simple:1", 1, DN),
    tube_k("D(3A)_2", "T0", "simple:0"),
    tube_k("D(3A)_2", "T1", "string:gamma*delta^-1*eta^-1*delta^-1"),
    tube_t2("D(3A)_2", "string:gamma*delta^-1*eta^-1", "d3a_2-t2"),
    tube_k("D(3B)_{2,1}", "T0", "simple:2"),
    tube_k("D(3B)_{2,1}", "T1", "string:delta*gamma^-1"),
    tube_t2("D(3B)_{2,1}", "string:delta*gamma^-1*alpha*beta^-1", "d3b_21-t2"),
    tube_k("D(3B)_{2,2}", "T0", "string:delta^-1"),
    tube_k("D(3B)_{2,2}", "T1", "simple:1"),
    tube_t2("D(3B)_{2,2}", "string:beta*alpha^-1", "d3b_22-t2"),
    tube_k("D(3D)_2", "T0", "string:gamma^-1"),
    tube_k("D(3D)_2", "T1", "string:gamma^-1*alpha*beta^-1"),
    tube_t2("D(3D)_2", "string:gamma^-1*alpha*beta^-1*eta*xi^-1", "d3d_2-t2"),
    tube_k("D(3L)", "T0", "simple:2"),
    tube_k("D(3L)", "T1", "string:delta"),
    tube_t2("D(3L)", "string:delta*beta*alpha^-1", "d3l-t2"),
    tube_k("D(3Q)", "T0", "simple:2"),
    tube_k("D(3Q)", "T1", "string:delta*rho^-1"),
    tube_t2("D(3Q)", "string:delta*rho^-1*beta*alpha^-1", "d3q-t2"),
    tube_k("D(2A)_0", "boundary", "simple:1"),
    tube_k("D(2A)_1", "boundary", "simple:1"),
    tube_k("D(3A)_1", "boundary", "simple:1"),
    tube_k("D(3A)_1", "boundary", "simple:2"),
    tube_k("D(3K)", "boundary", "string:gamma"),
    tube_k("D(3K)", "boundary", "string:lambda"),
    tube_wide("D(2A)_0", "T(1,1)", "string:alpha^-1"),
    tube_wide("D(2A)_0", "T(1,2)", "string:alpha^-1*gamma*beta*alpha^-1"),
    tube_wide("D(2A)_0", "T(2,1)", "string:alpha^-1*gamma"),
    tube_wide("D(2A)_0", "T(2,2)", "string:alpha^-1*gamma*beta*alpha^-1*gamma"),
    tube_wide("D(2A)_0", "T(3,1)", "string:alpha^-1*gamma*beta*alpha^-1*beta^-1"),
    tube_wide("D(2A)_0", "T(3,2)", "string:(alpha^-1*gamma*beta)^2*alpha^-1*beta^-1"),
    tube_wide("D(2A)_1", "T(1,1)", "string:alpha^-1"),
    tube_wide("D(2A)_1", "T(1,2)", "string:alpha^-1*gamma*beta*alpha^-1"),
    tube_wide("D(2A)_1", "T(2,1)", "string:alpha^-1*gamma"),
    tube_wide("D(2A)_1", "T(2,2)", "string:alpha^-1*gamma*beta*alpha^-1*gamma"),
    tube_wide("D(2A)_1", "T(3,1)", "string:alpha^-1*gamma*beta*alpha^-1*beta^-1"),
    tube_wide("D(2A)_1", "T(3,2)", "string:(alpha^-1*gamma*beta)^2*alpha^-1*beta^-1"),
];

/// Parameters `μ` of the band with `stable End(M(B, μ, 1)) = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandRule {
    /// `μ ∈ k*`, and no parameter at all in characteristic 2.
    UnitsOddChar,
    /// Every `μ ∈ F_2` (characteristic 2 only).
    AllOfF2,
    /// `μ ∈ k*` with `μ² ≠ −1`.
    SquareNotMinusOne,
    /// `μ ∈ k*` with `μ² ≠ 1`.
    SquareNotOne,
}

impl BandRule {
    pub fn of(algebra: &str) -> BandRule {
        match crate::quiver::canonical_name(algebra).expect("catalog algebra") {
            "D(1)_0" | "D(2A)_0" | "D(3A)_1" | "D(3K)" => BandRule::UnitsOddChar,
            "D(1)_1" | "D(2A)_1" => BandRule::AllOfF2,
            "D(3B)_{2,1}" | "D(3Q)" => BandRule::SquareNotOne,
            _ => BandRule::SquareNotMinusOne,
        }
    }

    pub fn passes(self, mu: Mu, p: u32) -> bool {
        let Mu::Finite(x) = mu else { return false };
        let (x, p64) = (x as u64, p as u64);
        let sq = x * x % p64;
        match self {
            BandRule::AllOfF2 => p == 2 && x < 2,
            BandRule::UnitsOddChar => p != 2 && x != 0,
            BandRule::SquareNotMinusOne => x != 0 && sq != p64 - 1,
            BandRule::SquareNotOne => x != 0 && sq != 1 % p64,
        }
    }

    /// Parameter of `Ω(M(B, μ, 1))` for `μ ∈ k*` (all of `F_2` for `AllOfF2`).
    pub fn omega_image(self, mu: u32, p: u32) -> Option<u32> {
        let f = crate::linalg::PrimeField::new(p).ok()?;
        match self {
            BandRule::UnitsOddChar => (mu != 0).then(|| f.neg(mu)),
            BandRule::AllOfF2 => Some(f.sub(1, mu)),
            BandRule::SquareNotMinusOne => f.inv(mu).map(|i| f.neg(i)),
            BandRule::SquareNotOne => f.inv(mu),
        }
    }
}

/// Algebras whose census at `p = 2` contains no `k[[t]]` verdict.
pub const FINITE_AT_TWO: [&str; 4] = ["D(1)_0", "D(2A)_0", "D(3A)_1", "D(3K)"];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRow {
    pub scenario: Scenario,
    pub clause: String,
    pub algebra: String,
    pub p: u32,
    pub module: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub criterion: u8,
    pub scenario: Scenario,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<CheckRow>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    fn new(s: Scenario, checks: Vec<CheckRow>, notes: Vec<String>) -> Self {
        Self {
            criterion: s.criterion(),
            scenario: s,
            title: s.title().to_string(),
            passed: checks.iter().all(|c| c.pass),
            checks,
            notes,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn verdict_summary(sed: usize, ext1: Option<usize>, ring: RingType) -> String {
    match ext1 {
        Some(e) => format!("stend={sed} ext1={e} R={ring}"),
        None => format!("stend={sed} R={ring}"),
    }
}

fn check_expectation(e: &ModuleExpectation, p: u32, cap: usize) -> Result<CheckRow, WorkbenchError> {
    let p = prime_for(e.algebra, p);
    let alg = load_algebra(e.algebra, p)?;
    let desc: ModuleDesc = e.module.parse()?;
    let (_, r) = classify_module(&alg, &desc, cap)?;
    let mut expected = match e.ext1 {
        Some(x) => format!("{} ext1={x}", e.stable_end),
        None => e.stable_end.to_string(),
    };
    if let Some(ring) = e.ring {
        expected.push_str(&format!(" R={ring}"));
    }
    let mut observed = verdict_summary(r.stable_end_dim, r.ext1, r.ring);
    let mut pass = e.stable_end.accepts(r.stable_end_dim)
        && e.ext1.is_none_or(|x| r.ext1 == Some(x))
        && e.ring.is_none_or(|x| r.ring == x);
    if let Some(cert) = e.certificate {
        expected.push_str(&format!(" certificate={cert}"));
        match &r.power_series {
            Some(PowerSeriesEvidence::Certified { certificate }) => {
                observed.push_str(&format!(" certificate={certificate}"));
                pass &= certificate == cert;
            }
            _ => {
                observed.push_str(" uncertified");
                pass = false;
            }
        }
    }
    if e.ext1.is_none() && r.ext1.is_some() {
        observed = verdict_summary(r.stable_end_dim, None, r.ring);
    }
    Ok(CheckRow {
        scenario: e.scenario,
        clause: e.clause.to_string(),
        algebra: e.algebra.to_string(),
        p,
        module: e.module.to_string(),
        expected,
        observed,
        pass,
    })
}

fn expectation_rows(s: Scenario, p: u32, cap: usize) -> Result<Vec<CheckRow>, WorkbenchError> {
    let selected: Vec<&ModuleExpectation> = EXPECTATIONS.iter().filter(|e| e.scenario == s).collect();
    selected.par_iter().map(|e| check_expectation(e, p, cap)).collect()
}

/// Named representatives: stable End `k`, `Ext¹` and ring type.
pub fn scenario_representatives(p: u32, cap: usize) -> Result<ScenarioReport, WorkbenchError> {
    Ok(ScenarioReport::new(Scenario::Representatives, expectation_rows(Scenario::Representatives, p, cap)?, vec![]))
}

/// `T0, T1, T2`, boundary modules and the wide tubes.
pub fn scenario_tubes(p: u32, cap: usize) -> Result<ScenarioReport, WorkbenchError> {
    Ok(ScenarioReport::new(Scenario::Tubes, expectation_rows(Scenario::Tubes, p, cap)?, vec![]))
}

fn band_rows(name: &str, p: u32, cap: usize, classify: bool) -> Result<Vec<CheckRow>, WorkbenchError> {
    let alg = load_algebra(name, p)?;
    let rule = BandRule::of(name);
    let spec = band_of(&alg)?;
    spec.mu_values(p)
        .par_iter()
        .map(|&mu| {
            let desc = ModuleDesc::Band { mu, m: 1 };
            let want = rule.passes(mu, p);
            let (observed, pass) = if classify {
                let (_, r) = classify_module(&alg, &desc, cap)?;
                let certified = matches!(r.power_series, Some(PowerSeriesEvidence::Certified { .. }));
                let obs = format!("stend={} R={}{}", r.stable_end_dim, r.ring, if certified { " certified" } else { "" });
                let ok = if want {
                    r.stable_end_dim == 1 && r.ring == RingType::PowerSeries && certified
                } else {
                    r.stable_end_dim != 1
                };
                (obs, ok)
            } else {
                let (rep, _) = build_module(&alg, &desc)?;
                let sed = stable_end_dim(&rep)?;
                (format!("stend={sed}"), (sed == 1) == want)
            };
            let expected = match (want, classify) {
                (true, true) => "stend=1 R=k[[t]] certified".to_string(),
                (true, false) => "stend=1".to_string(),
                (false, _) => "stend!=1".to_string(),
            };
            Ok(CheckRow {
                scenario: if classify { Scenario::Bands } else { Scenario::CharSensitivity },
                clause: format!("{rule:?}"),
                algebra: name.to_string(),
                p,
                module: desc.to_string(),
                expected,
                observed,
                pass,
            })
        })
        .collect()
}

/// Every band boundary module over `F_p` (char-2 algebras over `F_2`).
pub fn scenario_bands(p: u32, cap: usize) -> Result<ScenarioReport, WorkbenchError> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for name in CATALOG_NAMES {
        rows.extend(band_rows(name, prime_for(name, p), cap, true)?);
    }
    if p > 2 && !(1..p as u64).any(|x| x * x % p as u64 == p as u64 - 1) {
        notes.push(format!("-1 is not a square mod {p}: the mu^2 = -1 exception set is empty"));
    }
    for rule in [BandRule::SquareNotMinusOne, BandRule::SquareNotOne] {
        let excluded: Vec<u32> = (1..p).filter(|&x| !rule.passes(Mu::Finite(x), p)).collect();
        notes.push(format!("{rule:?} excludes {excluded:?} at p = {p}"));
    }
    Ok(ScenarioReport::new(Scenario::Bands, rows, notes))
}

/// `Ω` preserves stable End `k` and the ring type; band parameters move by
/// the rule of their algebra.
pub fn scenario_omega(p: u32, cap: usize) -> Result<ScenarioReport, WorkbenchError> {
    let mut modules: Vec<(String, u32, ModuleDesc, String)> = EXPECTATIONS
        .iter()
        .filter(|e| matches!(e.scenario, Scenario::Representatives | Scenario::Tubes) && e.stable_end == SedExpect::Exactly(1))
        .map(|e| (e.algebra.to_string(), prime_for(e.algebra, p), e.module.parse().expect("table descriptor"), e.clause.to_string()))
        .collect();
    for name in CATALOG_NAMES {
        let q = prime_for(name, p);
        let rule = BandRule::of(name);
        let alg = load_algebra(name, q)?;
        let spec = band_of(&alg)?;
        for mu in spec.mu_values(q) {
            if rule.passes(mu, q) {
                modules.push((name.to_string(), q, ModuleDesc::Band { mu, m: 1 }, "band".into()));
            }
        }
    }
    let mut rows: Vec<CheckRow> = modules
        .par_iter()
        .map(|(name, q, desc, clause)| {
            let alg = load_algebra(name, *q)?;
            let (rep, r) = classify_module(&alg, desc, cap)?;
            let om = omega(&rep)?;
            let ro = classify_defring(&om, cap, None)?;
            Ok(CheckRow {
                scenario: Scenario::Omega,
                clause: clause.clone(),
                algebra: name.clone(),
                p: *q,
                module: desc.to_string(),
                expected: format!("Omega: stend=1 R={}", r.ring),
                observed: format!("Omega: stend={} R={}", ro.stable_end_dim, ro.ring),
                pass: r.stable_end_dim == 1 && ro.stable_end_dim == 1 && ro.ring == r.ring,
            })
        })
        .collect::<Result<_, WorkbenchError>>()?;
    for name in CATALOG_NAMES {
        let q = prime_for(name, p);
        let rule = BandRule::of(name);
        if rule == BandRule::UnitsOddChar && q == 2 {
            continue;
        }
        let alg = load_algebra(name, q)?;
        let start = if rule == BandRule::AllOfF2 { 0 } else { 1 };
        for mu in start..q {
            let Some(image) = rule.omega_image(mu, q) else { continue };
            let (v, _) = build_module(&alg, &ModuleDesc::Band { mu: Mu::Finite(mu), m: 1 })?;
            let (w, _) = build_module(&alg, &ModuleDesc::Band { mu: Mu::Finite(image), m: 1 })?;
            let om = omega(&v)?;
            let iso = om.dims() == w.dims() && is_isomorphic(&om, &w)?.verdict == IsoVerdict::Yes;
            rows.push(CheckRow {
                scenario: Scenario::Omega,
                clause: format!("{rule:?}"),
                algebra: name.to_string(),
                p: q,
                module: format!("band:{mu}:1"),
                expected: format!("Omega = band:{image}:1"),
                observed: if iso { format!("Omega = band:{image}:1") } else { "Omega differs".into() },
                pass: iso,
            });
        }
    }
    Ok(ScenarioReport::new(Scenario::Omega, rows, vec![]))
}

/// Sample size and seed for the cross-oracle scenario.
pub const CROSS_SAMPLES: usize = 30;
pub const CROSS_MAX_LEN: usize = 6;
pub const CROSS_SEED: u64 = 0x5eed;

/// Independent computations that must agree on random string modules.
pub fn cross_oracle_rows(alg: &Arc<AlgebraTable>, samples: usize, max_len: usize, seed: u64) -> Result<Vec<CheckRow>, WorkbenchError> {
    let q = alg.quiver();
    let mut words: Vec<Word> = enumerate_strings(alg, max_len).into_iter().filter(|w| !w.is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    words.shuffle(&mut rng);
    words.truncate(samples);
    let regular = Rep::regular(alg.clone());
    let proj_dims: Vec<usize> = (0..alg.num_vertices()).map(|u| Rep::projective(alg.clone(), u).dim()).collect();
    words
        .par_iter()
        .map(|w| {
            let v = string_module(alg, w)?;
            let mut failures = Vec::new();
            let e_def = first_order(&v).ext1;
            let e_hom = ext1_dim(&v, &v)?;
            if e_def != e_hom {
                failures.push(format!("ext1 {e_def} vs {e_hom}"));
            }
            let (top, _) = v.top_and_radical();
            let cover: usize = top.iter().zip(&proj_dims).map(|(t, d)| t * d).sum();
            let om = omega(&v)?;
            if om.dim() + v.dim() != cover {
                failures.push(format!("dim Omega {} vs {}", om.dim(), cover - v.dim()));
            }
            let h = hom_space(&regular, &v)?.dim();
            if h != v.dim() {
                failures.push(format!("dim Hom(A,V) {h} vs {}", v.dim()));
            }
            let inv = string_module(alg, &w.inverse())?;
            if is_isomorphic(&v, &inv)?.verdict != IsoVerdict::Yes {
                failures.push("M(C) and M(C^-1) differ".into());
            }
            Ok(CheckRow {
                scenario: Scenario::CrossOracle,
                clause: "invariants".into(),
                algebra: alg.name().to_string(),
                p: alg.field().p(),
                module: format!("string:{}", w.display(q)),
                expected: "all agree".into(),
                observed: if failures.is_empty() { "all agree".into() } else { failures.join("; ") },
                pass: failures.is_empty(),
            })
        })
        .collect()
}

pub fn scenario_cross_oracle(p: u32) -> Result<ScenarioReport, WorkbenchError> {
    let mut rows = Vec::new();
    for name in CATALOG_NAMES {
        let alg = load_algebra(name, prime_for(name, p))?;
        rows.extend(cross_oracle_rows(&alg, CROSS_SAMPLES, CROSS_MAX_LEN, CROSS_SEED)?);
    }
    Ok(ScenarioReport::new(Scenario::CrossOracle, rows, vec![]))
}

/// Band boundary modules over `F_2` for the algebras with and without `c`.
pub fn scenario_char_sensitivity() -> Result<ScenarioReport, WorkbenchError> {
    let mut rows = Vec::new();
    for name in ["D(1)_0", "D(2A)_0", "D(1)_1", "D(2A)_1"] {
        rows.extend(band_rows(name, 2, DEFAULT_CAP, false)?);
    }
    Ok(ScenarioReport::new(Scenario::CharSensitivity, rows, vec![]))
}

/// The census over `F_2` for every algebra and the resulting finiteness flag.
pub fn scenario_finiteness(max_len: usize, cap: usize) -> Result<(ScenarioReport, Vec<CensusRow>), WorkbenchError> {
    let mut rows = Vec::new();
    let mut all = Vec::new();
    let mut notes = Vec::new();
    for name in CATALOG_NAMES {
        let alg = load_algebra(name, 2)?;
        let census_rows = census(&alg, max_len, cap)?;
        let flag = all_finite_dimensional(&census_rows);
        let want = FINITE_AT_TWO.contains(&name);
        let unknown = census_rows.iter().filter(|r| r.ring == RingType::Unknown).count();
        if unknown > 0 {
            notes.push(format!("{name}: {unknown} rows without a classification"));
        }
        let series = census_rows.iter().filter(|r| r.ring == RingType::PowerSeries).count();
        rows.push(CheckRow {
            scenario: Scenario::Finiteness,
            clause: format!("max_len {max_len}"),
            algebra: name.to_string(),
            p: 2,
            module: format!("{} rows", census_rows.len()),
            expected: format!("finite={want}"),
            observed: format!("finite={flag} ({series} k[[t]] rows)"),
            pass: flag == want,
        });
        all.extend(census_rows);
    }
    Ok((ScenarioReport::new(Scenario::Finiteness, rows, notes), all))
}

#[derive(Clone, Debug)]
pub struct ReproduceOptions {
    pub cap: usize,
    pub census_max_len: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            census_max_len: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceReport {
    pub p: u32,
    pub passed: bool,
    pub scenarios: Vec<ScenarioReport>,
}

impl ReproduceReport {
    /// CSV of every check, one row each.
    pub fn checks_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["criterion", "scenario", "clause", "algebra", "p", "module", "expected", "observed", "pass"])
            .expect("in-memory write");
        for s in &self.scenarios {
            for c in &s.checks {
                w.write_record([
                    s.criterion.to_string(),
                    s.scenario.id().to_string(),
                    c.clause.clone(),
                    c.algebra.clone(),
                    c.p.to_string(),
                    c.module.clone(),
                    c.expected.clone(),
                    c.observed.clone(),
                    c.pass.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Runs every scenario at `p`; characteristic-2 algebras and checks run over `F_2`.
pub fn reproduce(p: u32, opts: &ReproduceOptions) -> Result<ReproduceReport, WorkbenchError> {
    crate::linalg::PrimeField::new(p).map_err(|e| WorkbenchError::Descriptor(e.to_string()))?;
    let scenarios = vec![
        scenario_representatives(p, opts.cap)?,
        scenario_tubes(p, opts.cap)?,
        scenario_bands(p, opts.cap)?,
        scenario_omega(p, opts.cap)?,
        scenario_cross_oracle(p)?,
        scenario_char_sensitivity()?,
        scenario_finiteness(opts.census_max_len, opts.cap)?.0,
    ];
    Ok(ReproduceReport {
        p,
        passed: scenarios.iter().all(|s| s.passed),
        scenarios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        for s in ["string:beta*alpha^-1", "band:3:1", "band:inf:2", "simple:0", "proj:1"] {
            assert_eq!(s.parse::<ModuleDesc>().unwrap().to_string(), s);
        }
        assert_eq!("band:4".parse::<ModuleDesc>().unwrap(), ModuleDesc::Band { mu: Mu::Finite(4), m: 1 });
        assert!("cube:3".parse::<ModuleDesc>().is_err());
    }

    #[test]
    fn band_rule_exceptions() {
        let ex = |r: BandRule, p: u32| (1..p).filter(|&x| !r.passes(Mu::Finite(x), p)).collect::<Vec<_>>();
        assert_eq!(ex(BandRule::SquareNotMinusOne, 13), vec![5, 8]);
        assert_eq!(ex(BandRule::SquareNotOne, 13), vec![1, 12]);
        assert!(ex(BandRule::SquareNotMinusOne, 3).is_empty());
        assert_eq!(BandRule::SquareNotMinusOne.omega_image(2, 5), Some(2));
    }

    #[test]
    fn projective_is_versal_only() {
        let a = load_algebra("D(2A)_0", 5).unwrap();
        let (_, r) = classify_module(&a, &ModuleDesc::Projective("0".into()), DEFAULT_CAP).unwrap();
        assert_eq!(r.stable_end_dim, 0);
        assert_eq!(r.ring, RingType::VersalOnly);
    }

    #[test]
    fn small_census_of_3k() {
        let a = load_algebra("D(3K)", 5).unwrap();
        let rows = census(&a, 4, DEFAULT_CAP).unwrap();
        for v in ["simple:0", "simple:1", "simple:2"] {
            let r = rows.iter().find(|r| r.module == v).unwrap();
            assert_eq!(r.ring, RingType::K);
        }
        assert_eq!(census_csv(&rows), census_csv(&census(&a, 4, DEFAULT_CAP).unwrap()));
        assert!(census(&a, 13, DEFAULT_CAP).is_err());
    }
}
