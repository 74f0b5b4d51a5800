//! Dehn twist words and their homological action.
//!
//! A [`TwistWord`] is read as function composition: the rightmost letter acts
//! first, so `t(a1) t(b1)` means "twist along b1, then along a1". The action
//! of a letter `(c, e)` on a class `x` is the transvection
//! `x ↦ x + e·<x,[c]>·[c]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::IntMatrix;
use crate::surface::{is_valid_curve_name, ArcConfig, CurveConfig, H1Basis, HomologyClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McgError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("arc index {index} out of range: the page has {arcs} arcs")]
    ArcOutOfRange { index: usize, arcs: usize },
    #[error("bad twist word at column {column}: {message}")]
    Syntax { column: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistLetter {
    pub curve: String,
    pub exponent: i64,
}

impl TwistLetter {
    pub fn new(curve: impl Into<String>, exponent: i64) -> Self {
        Self {
            curve: curve.into(),
            exponent,
        }
    }
}

impl fmt::Display for TwistLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t({})", self.curve)?;
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistWord {
    letters: Vec<TwistLetter>,
}

impl TwistWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word, dropping zero-exponent letters.
    pub fn new(letters: Vec<TwistLetter>) -> Self {
        Self {
            letters: letters.into_iter().filter(|l| l.exponent != 0).collect(),
        }
    }

    pub fn letter(curve: impl Into<String>, exponent: i64) -> Self {
        Self::new(vec![TwistLetter::new(curve, exponent)])
    }

    pub fn letters(&self) -> &[TwistLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in the order they act: rightmost first.
    pub fn action_order(&self) -> impl Iterator<Item = (usize, &TwistLetter)> {
        self.letters.iter().enumerate().rev()
    }

    /// `self · other`: `other` acts first.
    pub fn then_after(&self, other: &TwistWord) -> TwistWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        TwistWord { letters }
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| TwistLetter::new(l.curve.clone(), -l.exponent))
                .collect(),
        }
    }

    /// `psi · self · psi^-1`.
    pub fn conjugate_by(&self, psi: &TwistWord) -> TwistWord {
        psi.then_after(self).then_after(&psi.inverse())
    }

    /// Applies a curve renaming to every letter.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> TwistWord {
        TwistWord {
            letters: self
                .letters
                .iter()
                .map(|l| TwistLetter::new(f(&l.curve), l.exponent))
                .collect(),
        }
    }

    /// Every letter names a configured curve.
    pub fn check_over(&self, cfg: &CurveConfig) -> Result<(), McgError> {
        match self.letters.iter().find(|l| cfg.get(&l.curve).is_none()) {
            Some(l) => Err(McgError::UnknownCurve(l.curve.clone())),
            None => Ok(()),
        }
    }

    /// Sum of exponents.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent).sum()
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for TwistWord {
    type Err = McgError;

    /// Parses `t(a1) t(b1)^-1 t(e1)^3`. Letters are separated by whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in s.split_whitespace() {
            let column = s[offset..].find(token).map_or(offset, |p| offset + p) + 1;
            offset = column - 1 + token.len();
            letters.push(parse_letter(token).map_err(|message| McgError::Syntax { column, message })?);
        }
        Ok(TwistWord::new(letters))
    }
}

fn parse_letter(token: &str) -> Result<TwistLetter, String> {
    let rest = token
        .strip_prefix("t(")
        .ok_or_else(|| format!("expected `t(<name>)`, found `{token}`"))?;
    let close = rest
        .find(')')
        .ok_or_else(|| format!("missing `)` in `{token}`"))?;
    let name = &rest[..close];
    if !is_valid_curve_name(name) {
        return Err(format!("invalid curve name `{name}`"));
    }
    let tail = &rest[close + 1..];
    let exponent = if tail.is_empty() {
        1
    } else {
        let digits = tail
            .strip_prefix('^')
            .ok_or_else(|| format!("unexpected `{tail}` after `t({name})`"))?;
        digits
            .parse::<i64>()
            .map_err(|_| format!("bad exponent `{digits}`"))?
    };
    Ok(TwistLetter::new(name, exponent))
}

/// Matrix of `x ↦ x + exponent·<x,c>·c` on the basis. Since `<c,c> = 0`, the
/// k-th power of a twist is the transvection with coefficient `k`.
pub fn transvection(basis: &H1Basis, class: &[i64], exponent: i64) -> IntMatrix {
    let n = basis.dim();
    assert_eq!(class.len(), n, "class dimension mismatch");
    let mut m = IntMatrix::identity(n);
    // column j is the image of e_j: e_j + exponent·<e_j, c>·c
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let coeff = exponent * basis.pair(&e, class);
        if coeff == 0 {
            continue;
        }
        for (i, &ci) in class.iter().enumerate() {
            m[(i, j)] += BigInt::from(coeff * ci);
        }
    }
    m
}

pub fn twist_matrix(cfg: &CurveConfig, curve: &str, exponent: i64) -> Result<IntMatrix, McgError> {
    let c = cfg
        .get(curve)
        .ok_or_else(|| McgError::UnknownCurve(curve.to_string()))?;
    Ok(transvection(&cfg.basis, &c.class, exponent))
}

/// `Φ = T_{letter_1} ··· T_{letter_k}`, so that the rightmost letter is applied
/// to a column vector first.
pub fn word_action(w: &TwistWord, cfg: &CurveConfig) -> Result<IntMatrix, McgError> {
    let mut phi = IntMatrix::identity(cfg.basis.dim());
    for l in w.letters() {
        phi = &phi * &twist_matrix(cfg, &l.curve, l.exponent)?;
    }
    Ok(phi)
}

/// `δ_i = φ(r_i) - r_i` as a class in `H1(Σ)`.
///
/// Letters are processed right to left; on `(c, e)` the running defect `v`
/// becomes `v + e·(<r_i,c> + <v,[c]>)·[c]`. This is a crossed homomorphism:
/// `δ(w1·w2) = δ(w1) + Φ(w1)·δ(w2)`.
pub fn arc_defect(
    w: &TwistWord,
    index: usize,
    cfg: &CurveConfig,
    arcs: &ArcConfig,
) -> Result<HomologyClass, McgError> {
    if arcs.get(index).is_none() {
        return Err(McgError::ArcOutOfRange {
            index,
            arcs: arcs.arcs.len(),
        });
    }
    let mut v = vec![0i64; cfg.basis.dim()];
    for (_, l) in w.action_order() {
        let c = cfg
            .get(&l.curve)
            .ok_or_else(|| McgError::UnknownCurve(l.curve.clone()))?;
        let coeff = l.exponent * (arcs.intersection(index, &l.curve) + cfg.basis.pair(&v, &c.class));
        if coeff != 0 {
            for (vi, ci) in v.iter_mut().zip(&c.class) {
                *vi += coeff * ci;
            }
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Braid,
    Commutation,
    OrderSix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub kind: RelationKind,
    pub curves: Vec<String>,
    pub passed: bool,
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            RelationKind::Braid => "braid",
            RelationKind::Commutation => "commute",
            RelationKind::OrderSix => "(T T)^6 = 1",
        };
        write!(
            f,
            "{} {what} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.curves.join(", "),
            if self.passed { "ok" } else { "violated" }
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks the standard mapping class relations as exact matrix identities:
/// braid relations for every configured pair with `|<c,d>| = 1`,
/// commutation for every pair with `<c,d> = 0`, and `(T_a1 T_b1)^6 = I`
/// whenever the page has genus.
pub fn relation_report(cfg: &CurveConfig) -> RelationReport {
    let basis = &cfg.basis;
    let mats: Vec<IntMatrix> = cfg
        .curves
        .iter()
        .map(|c| transvection(basis, &c.class, 1))
        .collect();
    let mut checks = Vec::new();
    for i in 0..cfg.curves.len() {
        for j in i + 1..cfg.curves.len() {
            let (c, d) = (&cfg.curves[i], &cfg.curves[j]);
            let (tc, td) = (&mats[i], &mats[j]);
            let p = basis.pair(&c.class, &d.class);
            let (kind, passed) = match p.abs() {
                0 => (RelationKind::Commutation, tc * td == td * tc),
                1 => (RelationKind::Braid, &(tc * td) * tc == &(td * tc) * td),
                _ => continue,
            };
            checks.push(RelationCheck {
                kind,
                curves: vec![c.name.clone(), d.name.clone()],
                passed,
            });
        }
    }
    if let (Some(a), Some(b)) = (cfg.get("a1"), cfg.get("b1")) {
        let step = &transvection(basis, &a.class, 1) * &transvection(basis, &b.class, 1);
        let mut power = IntMatrix::identity(basis.dim());
        for _ in 0..6 {
            power = &power * &step;
        }
        checks.push(RelationCheck {
            kind: RelationKind::OrderSix,
            curves: vec!["a1".into(), "b1".into()],
            passed: power.is_identity(),
        });
    }
    RelationReport { checks }
}
