//! Strings and bands over `Λ/soc(Λ)`, their modules, and bounded string
//! enumeration.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::AlgebraTable;
use crate::linalg::DenseMatrix;
use crate::quiver::{canonical_name, ArrowId, ArrowPath, DslError, Letter, Quiver, Word};
use crate::rep::Rep;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StringError {
    #[error("invalid string: {0}")]
    InvalidString(StringRejection),
    #[error("mu = {mu} outside the domain {domain} of {algebra}")]
    MuOutOfDomain { algebra: String, mu: Mu, domain: MuDomain },
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error(transparent)]
    Dsl(#[from] DslError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StringRejection {
    NotComposable,
    NotReduced { position: usize },
    ZeroSubword { path: String },
}

impl fmt::Display for StringRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StringRejection::NotComposable => write!(f, "letters are not composable"),
            StringRejection::NotReduced { position } => {
                write!(f, "letters {position} and {} cancel", position + 1)
            }
            StringRejection::ZeroSubword { path } => {
                write!(f, "directed subword {path} is zero modulo the socle")
            }
        }
    }
}

/// Scalar parameter of a band module; `Infinity` only for one-vertex quivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mu {
    Finite(u32),
    Infinity,
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu::Finite(x) => write!(f, "{x}"),
            Mu::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Mu {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Mu::Infinity),
            t => t
                .parse::<u32>()
                .map(Mu::Finite)
                .map_err(|_| format!("bad mu `{s}`")),
        }
    }
}

/// Allowed band parameters: `k ∪ {∞}`, `k` or `k*` for 1, 2 or 3 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MuDomain {
    WithInfinity,
    Field,
    Units,
}

impl fmt::Display for MuDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MuDomain::WithInfinity => "k ∪ {inf}",
            MuDomain::Field => "k",
            MuDomain::Units => "k*",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandSpec {
    pub algebra: String,
    pub word: Word,
    pub domain: MuDomain,
}

impl BandSpec {
    /// All parameters in the domain over `F_p`, `∞` last.
    pub fn mu_values(&self, p: u32) -> Vec<Mu> {
        let start = if self.domain == MuDomain::Units { 1 } else { 0 };
        let mut v: Vec<Mu> = (start..p).map(Mu::Finite).collect();
        if self.domain == MuDomain::WithInfinity {
            v.push(Mu::Infinity);
        }
        v
    }

    pub fn contains(&self, mu: Mu, p: u32) -> bool {
        match (mu, self.domain) {
            (Mu::Infinity, d) => d == MuDomain::WithInfinity,
            (Mu::Finite(x), _) if x >= p => false,
            (Mu::Finite(0), MuDomain::Units) => false,
            _ => true,
        }
    }
}

const BANDS: [(&str, &str); 12] = [
    ("D(1)_0", "beta*alpha^-1"),
    ("D(1)_1", "beta*alpha^-1"),
    ("D(2A)_0", "alpha*beta^-1*gamma^-1"),
    ("D(2A)_1", "alpha*beta^-1*gamma^-1"),
    ("D(3A)_1", "beta*gamma*delta^-1*eta^-1"),
    ("D(3A)_2", "beta*gamma*delta^-1*eta^-1"),
    ("D(3B)_{2,1}", "alpha*beta^-1*eta*delta*gamma^-1"),
    ("D(3B)_{2,2}", "alpha*beta^-1*gamma^-1"),
    ("D(3D)_2", "alpha*beta^-1*eta*xi^-1*delta*gamma^-1"),
    ("D(3K)", "beta*kappa^-1*delta*gamma^-1*lambda*eta^-1"),
    ("D(3L)", "alpha*beta^-1*delta^-1*lambda^-1"),
    ("D(3Q)", "alpha*beta^-1*rho*delta^-1*lambda^-1"),
];

/// The band of a catalog algebra and its parameter domain.
pub fn band_of(a: &AlgebraTable) -> Result<BandSpec, StringError> {
    let name = canonical_name(a.name()).ok_or_else(|| DslError::UnknownAlgebra(a.name().to_string()))?;
    let text = BANDS.iter().find(|(n, _)| *n == name).map(|(_, w)| *w).expect("every catalog algebra has a band");
    let q = a.quiver();
    let word = Word::parse(text, q)?;
    let letters = word.letters();
    assert_eq!(letters.last().unwrap().source(q), letters[0].target(q), "bands are closed");
    assert!(!letters[0].is_inverse(), "bands start with an arrow");
    let domain = match a.num_vertices() {
        1 => MuDomain::WithInfinity,
        2 => MuDomain::Field,
        _ => MuDomain::Units,
    };
    Ok(BandSpec {
        algebra: name.to_string(),
        word,
        domain,
    })
}

/// Validity checks against the minimal zero paths of `Λ/soc(Λ)`.
#[derive(Clone, Debug)]
pub struct StringChecker {
    forbidden: Vec<Vec<ArrowId>>,
}

impl StringChecker {
    pub fn new(a: &AlgebraTable) -> Self {
        Self {
            forbidden: a.forbidden_subpaths().iter().map(|p| p.letters().to_vec()).collect(),
        }
    }

    pub fn forbidden(&self) -> &[Vec<ArrowId>] {
        &self.forbidden
    }

    /// A path is zero modulo the socle iff it contains a minimal zero path.
    pub fn path_is_zero(&self, path: &[ArrowId]) -> bool {
        self.forbidden
            .iter()
            .any(|f| f.len() <= path.len() && path.windows(f.len()).any(|w| w == &f[..]))
    }

    /// Maximal directed runs of `w`, each as a path of arrows.
    pub fn runs(letters: &[Letter]) -> Vec<Vec<ArrowId>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < letters.len() {
            let inv = letters[i].is_inverse();
            let mut j = i;
            while j < letters.len() && letters[j].is_inverse() == inv {
                j += 1;
            }
            let mut run: Vec<ArrowId> = letters[i..j].iter().map(|l| l.arrow()).collect();
            if inv {
                run.reverse();
            }
            out.push(run);
            i = j;
        }
        out
    }

    pub fn check(&self, q: &Quiver, w: &Word) -> Result<(), StringRejection> {
        let letters = w.letters();
        if !w.is_composable(q) {
            return Err(StringRejection::NotComposable);
        }
        if let Some(pos) = letters.windows(2).position(|p| p[0] == p[1].inverse()) {
            return Err(StringRejection::NotReduced { position: pos + 1 });
        }
        for run in Self::runs(letters) {
            if self.path_is_zero(&run) {
                return Err(StringRejection::ZeroSubword {
                    path: ArrowPath::new(run).display(q),
                });
            }
        }
        Ok(())
    }

    /// Whether appending `l` to a valid nonempty string keeps it valid.
    fn can_append(&self, q: &Quiver, letters: &[Letter], l: Letter) -> bool {
        let last = *letters.last().unwrap();
        if last.source(q) != l.target(q) || last == l.inverse() {
            return false;
        }
        let inv = l.is_inverse();
        let start = letters.iter().rposition(|x| x.is_inverse() != inv).map_or(0, |i| i + 1);
        let mut run: Vec<ArrowId> = letters[start..].iter().map(|x| x.arrow()).collect();
        run.push(l.arrow());
        if inv {
            run.reverse();
        }
        !self.path_is_zero(&run)
    }
}

pub fn is_string(a: &AlgebraTable, w: &Word) -> Result<(), StringRejection> {
    StringChecker::new(a).check(a.quiver(), w)
}

/// The string module `M(C)`; basis `z_0, ..., z_n` regrouped by vertex.
pub fn string_module(a: &Arc<AlgebraTable>, c: &Word) -> Result<Rep, StringError> {
    is_string(a, c).map_err(StringError::InvalidString)?;
    Ok(string_module_unchecked(a, c))
}

pub(crate) fn string_module_unchecked(a: &Arc<AlgebraTable>, c: &Word) -> Rep {
    let q = a.quiver();
    let f = a.field();
    match c {
        Word::Empty(u) => Rep::simple(a.clone(), *u),
        Word::Letters(letters) => {
            let n = letters.len();
            let mut vertex_of: Vec<usize> = letters.iter().map(|l| l.target(q)).collect();
            vertex_of.push(letters[n - 1].source(q));
            let mut totals = vec![DenseMatrix::zeros(f, n + 1, n + 1); q.num_arrows()];
            for (k0, l) in letters.iter().enumerate() {
                let k = k0 + 1;
                match *l {
                    Letter::Direct(z) => totals[z].set(k - 1, k, 1),
                    Letter::Inverse(z) => totals[z].set(k, k - 1, 1),
                }
            }
            Rep::from_graded(a.clone(), &vertex_of, &totals).expect("string grading is consistent")
        }
    }
}

/// A band module together with how it was produced.
#[derive(Clone, Debug)]
pub struct BandModule {
    pub rep: Rep,
    pub mu: Mu,
    pub m: usize,
    /// `m = 1`: the module lies at the boundary of its 1-tube.
    pub boundary: bool,
    /// Set when `μ ∈ {0, ∞}` was realised as a string module.
    pub string: Option<Word>,
}

/// String identified with `M(B, μ, m)` for `μ ∈ {0, ∞}`, if any.
pub fn extended_mu_string(a: &AlgebraTable, mu: Mu, m: usize) -> Option<Word> {
    let name = canonical_name(a.name())?;
    let q = a.quiver();
    let rep = |unit: &str, k: usize| -> String {
        let mut parts = vec![unit.to_string(); k];
        parts.retain(|s| !s.is_empty());
        parts.join("*")
    };
    let text = match (name, mu) {
        ("D(1)_0" | "D(1)_1", Mu::Finite(0)) => {
            let tail = rep("beta*alpha^-1", m - 1);
            if tail.is_empty() {
                "alpha^-1".to_string()
            } else {
                format!("alpha^-1*{tail}")
            }
        }
        ("D(1)_0" | "D(1)_1", Mu::Infinity) => {
            let head = rep("beta*alpha^-1", m - 1);
            if head.is_empty() {
                "beta".to_string()
            } else {
                format!("{head}*beta")
            }
        }
        ("D(2A)_0" | "D(2A)_1", Mu::Finite(0)) => {
            let tail = rep("alpha*beta^-1*gamma^-1", m - 1);
            if tail.is_empty() {
                "beta^-1*gamma^-1".to_string()
            } else {
                format!("beta^-1*gamma^-1*{tail}")
            }
        }
        _ => return None,
    };
    Some(Word::parse(&text, q).expect("catalog string"))
}

/// `M(B, μ, m)`; `μ ∈ {0, ∞}` dispatches to the identified string module.
pub fn band_module(a: &Arc<AlgebraTable>, mu: Mu, m: usize) -> Result<BandModule, StringError> {
    if m == 0 {
        return Err(StringError::ZeroMultiplicity);
    }
    let spec = band_of(a)?;
    let p = a.field().p();
    if !spec.contains(mu, p) {
        return Err(StringError::MuOutOfDomain {
            algebra: spec.algebra,
            mu,
            domain: spec.domain,
        });
    }
    if let Some(w) = extended_mu_string(a, mu, m) {
        let rep = string_module(a, &w)?;
        return Ok(BandModule {
            rep,
            mu,
            m,
            boundary: m == 1,
            string: Some(w),
        });
    }
    let Mu::Finite(muv) = mu else { unreachable!("infinity only for one-vertex algebras") };
    Ok(BandModule {
        rep: band_rep(a, &spec.word, muv, m),
        mu,
        m,
        boundary: m == 1,
        string: None,
    })
}

/// Total matrices of the band module on the ordered basis
/// `z_{0,1..m}, z_{1,1..m}, ..., z_{n-1,1..m}` and the vertex of each vector.
pub fn band_totals(a: &AlgebraTable, band: &Word, mu: u32, m: usize) -> (Vec<usize>, Vec<DenseMatrix>) {
    let q = a.quiver();
    let f = a.field();
    let letters = band.letters();
    let n = letters.len();
    let idx = |i: usize, j: usize| (i % n) * m + j;
    let vertex_of: Vec<usize> = (0..n * m).map(|b| letters[b / m].target(q)).collect();
    let mut totals = vec![DenseMatrix::zeros(f, n * m, n * m); q.num_arrows()];
    for (k0, l) in letters.iter().enumerate() {
        let k = k0 + 1;
        for j in 0..m {
            match *l {
                Letter::Direct(z) if k == 1 => {
                    let t = &mut totals[z];
                    t.set(idx(0, j), idx(1, j), mu);
                    if j + 1 < m {
                        t.set(idx(0, j + 1), idx(1, j), 1);
                    }
                }
                Letter::Direct(z) => totals[z].set(idx(k - 1, j), idx(k, j), 1),
                Letter::Inverse(z) => totals[z].set(idx(k, j), idx(k - 1, j), 1),
            }
        }
    }
    (vertex_of, totals)
}

fn band_rep(a: &Arc<AlgebraTable>, band: &Word, mu: u32, m: usize) -> Rep {
    let (vertex_of, totals) = band_totals(a, band, mu, m);
    Rep::from_graded(a.clone(), &vertex_of, &totals).expect("band grading is consistent")
}

/// Smaller of `w` and `w⁻¹`: letters compare arrows before inverses, then by
/// arrow declaration order.
pub fn canonical(w: &Word) -> Word {
    let inv = w.inverse();
    if inv.letters() < w.letters() {
        inv
    } else {
        w.clone()
    }
}

/// One representative per `{w, w⁻¹}` class of strings of length `≤ max_len`,
/// ordered by length and then by letters.
pub fn enumerate_strings(a: &AlgebraTable, max_len: usize) -> Vec<Word> {
    let checker = StringChecker::new(a);
    let q = a.quiver();
    let mut out: Vec<Word> = (0..a.num_vertices()).map(Word::Empty).collect();
    if max_len == 0 {
        return out;
    }
    let all_letters: Vec<Letter> = (0..q.num_arrows())
        .map(Letter::Direct)
        .chain((0..q.num_arrows()).map(Letter::Inverse))
        .collect();
    let mut layer: Vec<Vec<Letter>> = all_letters
        .iter()
        .filter(|l| !checker.path_is_zero(&[l.arrow()]))
        .map(|&l| vec![l])
        .collect();
    for len in 1..=max_len {
        let mut reps: Vec<Word> = layer
            .iter()
            .map(|l| Word::Letters(l.clone()))
            .filter(|w| canonical(w) == *w)
            .collect();
        reps.sort_by(|x, y| x.letters().cmp(y.letters()));
        out.extend(reps);
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for w in &layer {
            for &l in &all_letters {
                if checker.can_append(q, w, l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::quiver::catalog;

    fn alg(name: &str, p: u32) -> Arc<AlgebraTable> {
        Arc::new(build_algebra(&catalog(name, p).unwrap(), p).unwrap())
    }

    #[test]
    fn string_examples() {
        let a = alg("D(2A)_0", 5);
        let q = a.quiver();
        assert!(is_string(&a, &Word::parse("beta", q).unwrap()).is_ok());
        assert!(matches!(
            is_string(&a, &Word::parse("beta*gamma", q).unwrap()),
            Err(StringRejection::ZeroSubword { .. })
        ));
        let b = alg("D(1)_0", 5);
        assert!(matches!(
            is_string(&b, &Word::parse("alpha*alpha^-1", b.quiver()).unwrap()),
            Err(StringRejection::NotReduced { position: 1 })
        ));
    }

    #[test]
    fn string_module_of_beta() {
        let a = alg("D(2A)_0", 5);
        let m = string_module(&a, &Word::parse("beta", a.quiver()).unwrap()).unwrap();
        assert_eq!(m.dims(), &[1, 1]);
        assert_eq!(m.arrow(1).to_rows(), vec![vec![1]]);
        let s = string_module(&a, &Word::Empty(0)).unwrap();
        assert_eq!(s.dims(), &[1, 0]);
    }

    #[test]
    fn t2_of_d3a2_has_dim_four() {
        let a = alg("D(3A)_2", 5);
        let w = Word::parse("gamma*delta^-1*eta^-1", a.quiver()).unwrap();
        let m = string_module(&a, &w).unwrap();
        assert_eq!(m.dim(), 4);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn bands() {
        let a = alg("D(1)_0", 5);
        let spec = band_of(&a).unwrap();
        assert_eq!(spec.word.display(a.quiver()), "beta*alpha^-1");
        assert_eq!(spec.domain, MuDomain::WithInfinity);
        let m = band_module(&a, Mu::Finite(2), 1).unwrap();
        assert_eq!(m.rep.arrow(0).to_rows(), vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(m.rep.arrow(1).to_rows(), vec![vec![0, 2], vec![0, 0]]);
        let inf = band_module(&a, Mu::Infinity, 1).unwrap();
        assert_eq!(inf.string.unwrap().display(a.quiver()), "beta");
        let l = alg("D(3L)", 5);
        assert_eq!(band_of(&l).unwrap().domain, MuDomain::Units);
        assert!(matches!(band_module(&l, Mu::Finite(0), 1), Err(StringError::MuOutOfDomain { .. })));
        let k = alg("D(3K)", 5);
        let km = band_module(&k, Mu::Finite(1), 2).unwrap();
        assert_eq!(km.rep.dim(), 12);
        assert!(km.rep.validate().is_ok());
    }

    #[test]
    fn enumeration_small() {
        let a = alg("D(1)_0", 5);
        let q = a.quiver();
        let shown: Vec<String> = enumerate_strings(&a, 1).iter().map(|w| w.display(q)).collect();
        assert_eq!(shown, ["1_0", "alpha", "beta"]);
        assert_eq!(enumerate_strings(&a, 0).len(), 1);
    }
}
