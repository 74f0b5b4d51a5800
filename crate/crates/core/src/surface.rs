//! Compact orientable surfaces, their first homology, and the configured
//! curve and arc systems that twist words are written over.
//!
//! Homology of `Σ_{g,n}` uses the ordered basis
//! `A_1, B_1, ..., A_g, B_g, D_1, ..., D_{n-1}` where `D_j` is the class of
//! the j-th boundary component (boundary orientation). The last boundary
//! component is the base: `D_n = -(D_1 + ... + D_{n-1})`, and every arc
//! `r_i` runs from component `n` to component `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::{row_span_contains, IntMatrix};

/// Integer homology class in the standard basis.
pub type HomologyClass = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("page must have boundary")]
    ClosedPage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    pub genus: usize,
    pub boundary_count: usize,
}

impl Surface {
    pub const fn new(genus: usize, boundary_count: usize) -> Self {
        Self {
            genus,
            boundary_count,
        }
    }

    pub const fn disk() -> Self {
        Self::new(0, 1)
    }

    pub const fn annulus() -> Self {
        Self::new(0, 2)
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    pub fn h1_rank(&self) -> usize {
        2 * self.genus + self.boundary_count.saturating_sub(1)
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary_count > 0
    }

    pub fn index_a(&self, i: usize) -> usize {
        2 * (i - 1)
    }

    pub fn index_b(&self, i: usize) -> usize {
        2 * (i - 1) + 1
    }

    /// Coordinate of `D_j` for `1 <= j <= n-1`.
    pub fn index_d(&self, j: usize) -> usize {
        2 * self.genus + j - 1
    }

    /// Class of the j-th boundary component for `1 <= j <= n`; the base
    /// component is `-(D_1 + ... + D_{n-1})`.
    pub fn boundary_class(&self, j: usize) -> HomologyClass {
        let n = self.boundary_count;
        assert!(j >= 1 && j <= n, "boundary index out of range");
        let mut v = vec![0; self.h1_rank()];
        if j < n {
            v[self.index_d(j)] = 1;
        } else {
            for m in 1..n {
                v[self.index_d(m)] = -1;
            }
        }
        v
    }

    /// True when the class pairs trivially with everything, i.e. it only has
    /// boundary coordinates.
    pub fn is_radical(&self, class: &[i64]) -> bool {
        class[..2 * self.genus].iter().all(|&x| x == 0)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ_{{{},{}}}", self.genus, self.boundary_count)
    }
}

/// Ordered basis labels and the intersection pairing on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Basis {
    pub labels: Vec<String>,
    pub pairing: IntMatrix,
}

impl H1Basis {
    pub fn standard(s: &Surface) -> Self {
        let rank = s.h1_rank();
        let mut labels = Vec::with_capacity(rank);
        for i in 1..=s.genus {
            labels.push(format!("A{i}"));
            labels.push(format!("B{i}"));
        }
        for j in 1..s.boundary_count {
            labels.push(format!("D{j}"));
        }
        let mut pairing = IntMatrix::zeros(rank, rank);
        for i in 1..=s.genus {
            pairing[(s.index_a(i), s.index_b(i))] = BigInt::from(1);
            pairing[(s.index_b(i), s.index_a(i))] = BigInt::from(-1);
        }
        Self { labels, pairing }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `<x, y>` for integer classes.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut total = 0i64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let p = i64::try_from(&self.pairing[(i, j)]).expect("pairing entry fits i64");
                total += xi * p * yj;
            }
        }
        total
    }

    /// Renders a class as `A1 - A2 + 2 D1`.
    pub fn describe(&self, class: &[i64]) -> String {
        let mut out = String::new();
        for (label, &c) in self.labels.iter().zip(class) {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let term = if mag == 1 {
                label.clone()
            } else {
                format!("{mag} {label}")
            };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    HandleA,
    HandleB,
    Chain,
    BoundaryPair,
    BoundaryParallel,
    /// Curve with no position in the standard picture: relabeled through a
    /// stabilization, or supplied by an override file.
    Derived,
}

impl CurveKind {
    fn name_prefix(self) -> Option<char> {
        match self {
            CurveKind::HandleA => Some('a'),
            CurveKind::HandleB => Some('b'),
            CurveKind::Chain => Some('c'),
            CurveKind::BoundaryPair => Some('e'),
            CurveKind::BoundaryParallel => Some('t'),
            CurveKind::Derived => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub class: HomologyClass,
    pub kind: CurveKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveConfig {
    pub basis: H1Basis,
    pub curves: Vec<Curve>,
}

impl CurveConfig {
    pub fn get(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.curves.iter().map(|c| c.name.as_str())
    }
}

/// Arc `r_index` from the base boundary component to component `index`,
/// recorded by its algebraic intersection with every configured curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub index: usize,
    pub intersections: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArcConfig {
    pub arcs: Vec<Arc>,
}

impl ArcConfig {
    pub fn get(&self, index: usize) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.index == index)
    }

    /// `<r_index, curve>`; zero when the table has no entry.
    pub fn intersection(&self, index: usize, curve: &str) -> i64 {
        self.get(index)
            .and_then(|a| a.intersections.get(curve))
            .copied()
            .unwrap_or(0)
    }
}

/// A page together with the curves and arcs words are written over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSystem {
    pub surface: Surface,
    pub curves: CurveConfig,
    pub arcs: ArcConfig,
}

impl CurveSystem {
    pub fn standard(surface: Surface) -> Result<Self, SurfaceError> {
        let (curves, arcs) = lickorish_system(&surface)?;
        Ok(Self {
            surface,
            curves,
            arcs,
        })
    }

    pub fn validate(&self) -> Vec<ConfigViolation> {
        validate_config(&self.curves, &self.arcs, &self.surface)
    }

    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            curves: self.curves.curves.clone(),
            arcs: self.arcs.arcs.clone(),
        }
    }

    /// Assembles a system from an override file; the basis is always the
    /// standard one for `surface`.
    pub fn from_file(surface: Surface, file: ConfigFile) -> Self {
        Self {
            surface,
            curves: CurveConfig {
                basis: H1Basis::standard(&surface),
                curves: file.curves,
            },
            arcs: ArcConfig { arcs: file.arcs },
        }
    }
}

/// Override file layout: `{curves: [{name, class, kind}], arcs: [{index, intersections}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub curves: Vec<Curve>,
    #[serde(default)]
    pub arcs: Vec<Arc>,
}

/// The class a curve with a positional kind and index must have.
fn positional_class(s: &Surface, kind: CurveKind, index: usize) -> Option<HomologyClass> {
    let (g, n) = (s.genus, s.boundary_count);
    let mut v = vec![0; s.h1_rank()];
    match kind {
        CurveKind::HandleA if (1..=g).contains(&index) => v[s.index_a(index)] = 1,
        CurveKind::HandleB if (1..=g).contains(&index) => v[s.index_b(index)] = 1,
        CurveKind::Chain if index >= 1 && index < g => {
            v[s.index_a(index)] = 1;
            v[s.index_a(index + 1)] = -1;
        }
        CurveKind::BoundaryPair if n >= 2 && index >= 1 && index < n => {
            let lo = s.boundary_class(index);
            let hi = s.boundary_class(index + 1);
            v = lo.iter().zip(&hi).map(|(a, b)| a + b).collect();
        }
        CurveKind::BoundaryParallel if index >= 1 && index <= n => {
            v = s.boundary_class(index);
        }
        _ => return None,
    }
    Some(v)
}

/// Splits `a12` into `('a', 12)`.
fn split_positional_name(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let prefix = chars.next()?;
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    Some((prefix, rest.parse().ok()?))
}

/// True for names usable inside `t(<name>)`.
pub fn is_valid_curve_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
}

/// The default generator system of a page with boundary.
///
/// Curves, in order: `a_i`, `b_i` (i = 1..g), chain curves `c_i` with
/// `[c_i] = A_i - A_{i+1}` (i = 1..g-1), boundary-pair curves `e_j` enclosing
/// components `j, j+1` (j = 1..n-1, omitted on the annulus where they bound
/// disks), and boundary-parallel curves `t_j` (j = 1..n, omitted on the disk).
/// Arc `r_i` meets a curve of class `x` in the `D_i` coordinate of `x`; in
/// particular `<r_i, t_n> = -1` and the arcs miss every handle curve.
pub fn lickorish_system(s: &Surface) -> Result<(CurveConfig, ArcConfig), SurfaceError> {
    if !s.has_boundary() {
        return Err(SurfaceError::ClosedPage);
    }
    let (g, n) = (s.genus, s.boundary_count);
    let mut curves = Vec::new();
    let mut push = |kind: CurveKind, index: usize| {
        let class = positional_class(s, kind, index).expect("index in range");
        let prefix = kind.name_prefix().expect("positional kind");
        curves.push(Curve {
            name: format!("{prefix}{index}"),
            class,
            kind,
        });
    };
    for i in 1..=g {
        push(CurveKind::HandleA, i);
    }
    for i in 1..=g {
        push(CurveKind::HandleB, i);
    }
    for i in 1..g {
        push(CurveKind::Chain, i);
    }
    if n >= 3 || (n == 2 && g >= 1) {
        for j in 1..n {
            push(CurveKind::BoundaryPair, j);
        }
    }
    if g >= 1 || n >= 2 {
        for j in 1..=n {
            push(CurveKind::BoundaryParallel, j);
        }
    }

    let arcs = (1..n)
        .map(|i| Arc {
            index: i,
            intersections: curves
                .iter()
                .map(|c| (c.name.clone(), c.class[s.index_d(i)]))
                .collect(),
        })
        .collect();

    Ok((
        CurveConfig {
            basis: H1Basis::standard(s),
            curves,
        },
        ArcConfig { arcs },
    ))
}

/// One failed invariant of a curve/arc configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigViolation(pub String);

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Checks every invariant of a configuration against its surface. An empty
/// list means the configuration is valid.
pub fn validate_config(cfg: &CurveConfig, arcs: &ArcConfig, s: &Surface) -> Vec<ConfigViolation> {
    let mut out = Vec::new();
    let mut bad = |msg: String| out.push(ConfigViolation(msg));

    if !s.has_boundary() {
        bad("page must have boundary".into());
    }

    let rank = s.h1_rank();
    let standard = H1Basis::standard(s);
    if cfg.basis.labels != standard.labels {
        bad(format!(
            "basis labels {:?} do not match the standard basis {:?}",
            cfg.basis.labels, standard.labels
        ));
    }
    let p = &cfg.basis.pairing;
    if p.rows() != rank || p.cols() != rank {
        bad(format!(
            "pairing matrix is {}x{}, expected {rank}x{rank}",
            p.rows(),
            p.cols()
        ));
    } else {
        let skew = (0..rank).all(|i| (0..rank).all(|j| p[(i, j)] == -&p[(j, i)]));
        if !skew {
            bad("pairing matrix is not skew-symmetric".into());
        }
        for i in 0..rank {
            for j in 0..rank {
                if p[(i, j)] != standard.pairing[(i, j)] {
                    bad(format!(
                        "pairing <{},{}> = {}, expected {}",
                        label(&standard, i),
                        label(&standard, j),
                        p[(i, j)],
                        standard.pairing[(i, j)]
                    ));
                }
            }
        }
    }

    let mut seen = BTreeSet::new();
    for c in &cfg.curves {
        if !seen.insert(c.name.as_str()) {
            bad(format!("duplicate curve name `{}`", c.name));
        }
        if !is_valid_curve_name(&c.name) {
            bad(format!("curve name `{}` is not usable in a twist word", c.name));
        }
        if c.class.len() != rank {
            bad(format!(
                "curve `{}` has class of dimension {}, expected {rank}",
                c.name,
                c.class.len()
            ));
            continue;
        }
        let content = c.class.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if content > 1 {
            bad(format!(
                "curve `{}` has non-primitive class {:?}; simple closed curves carry primitive or zero classes",
                c.name, c.class
            ));
        }
        if let Some(prefix) = c.kind.name_prefix() {
            match split_positional_name(&c.name) {
                Some((p, idx)) if p == prefix => match positional_class(s, c.kind, idx) {
                    Some(expected) if expected != c.class => bad(format!(
                        "curve `{}` of kind {:?} must have class {:?}, found {:?}",
                        c.name, c.kind, expected, c.class
                    )),
                    Some(_) => {}
                    None => bad(format!(
                        "curve `{}` of kind {:?} has index {idx} out of range on {s}",
                        c.name, c.kind
                    )),
                },
                _ => bad(format!(
                    "curve `{}` of kind {:?} must be named `{prefix}<index>`",
                    c.name, c.kind
                )),
            }
        }
    }

    validate_arcs(cfg, arcs, s, &mut bad);
    out
}

fn label(b: &H1Basis, i: usize) -> &str {
    b.labels.get(i).map_or("?", String::as_str)
}

fn validate_arcs(cfg: &CurveConfig, arcs: &ArcConfig, s: &Surface, bad: &mut impl FnMut(String)) {
    let n = s.boundary_count;
    let rank = s.h1_rank();
    let mut indices = BTreeSet::new();
    for arc in &arcs.arcs {
        if arc.index == 0 || arc.index >= n.max(1) {
            bad(format!(
                "arc index {} out of range (expected 1..{})",
                arc.index,
                n.saturating_sub(1)
            ));
            continue;
        }
        if !indices.insert(arc.index) {
            bad(format!("duplicate arc r{}", arc.index));
        }
        for name in arc.intersections.keys() {
            if cfg.get(name).is_none() {
                bad(format!("arc r{} refers to unknown curve `{name}`", arc.index));
            }
        }
        let usable: Vec<&Curve> = cfg.curves.iter().filter(|c| c.class.len() == rank).collect();
        let mut missing = false;
        for c in &usable {
            if !arc.intersections.contains_key(&c.name) {
                bad(format!("arc r{} has no intersection entry for `{}`", arc.index, c.name));
                missing = true;
            }
        }
        if missing {
            continue;
        }
        // The table must be the pairing of one relative class with the curve
        // classes. On boundary coordinates that class is forced (it meets the
        // curve around component i once); on handle coordinates it is free.
        let handle_dim = 2 * s.genus;
        let mut handle_part = IntMatrix::zeros(handle_dim, usable.len());
        let mut residual = Vec::with_capacity(usable.len());
        for (k, c) in usable.iter().enumerate() {
            for r in 0..handle_dim {
                handle_part[(r, k)] = BigInt::from(c.class[r]);
            }
            let forced = c.class[s.index_d(arc.index)];
            residual.push(BigInt::from(arc.intersections[&c.name] - forced));
        }
        if !row_span_contains(&handle_part, &residual) {
            bad(format!(
                "arc r{} intersection table is not realized by any arc from boundary {n} to boundary {}",
                arc.index, arc.index
            ));
        }
    }
    for i in 1..n {
        if !indices.contains(&i) {
            bad(format!("missing arc r{i}"));
        }
    }
}
