//! Abstract open books `(Σ, φ)`, the homology of their mapping tori and of
//! the closed 3-manifolds they present, and positive stabilization.
//!
//! For a page `Σ_{g,n}` with monodromy `φ` acting on `H1(Σ)` by `Φ`:
//!
//! * the mapping torus has `H1 = Z ⊕ coker(Φ - I)`;
//! * the closed manifold has `H1 = H1(Σ) / (im(Φ - I) + <δ_1, ..., δ_{n-1}>)`
//!   where `δ_i = φ(r_i) - r_i` is the defect of the arc `r_i` (see
//!   [`arc_defect`]). Filling the binding kills the circle through each
//!   boundary component; the circles through components `i` and `n` differ
//!   by exactly `δ_i`, and the circle through `n` is the mapping torus
//!   direction.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::{cokernel, AbelianGroup, IntMatrix};
use crate::mcg::{arc_defect, word_action, McgError, TwistWord};
use crate::surface::{
    lickorish_system, Arc, ArcConfig, ConfigViolation, Curve, CurveConfig, CurveKind, CurveSystem,
    HomologyClass, Surface, SurfaceError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpenBookError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Word(#[from] McgError),
    #[error("invalid curve configuration: {}", join_violations(.0))]
    InvalidConfig(Vec<ConfigViolation>),
    #[error("curve configuration is for {found}, page is {expected}")]
    ConfigSurfaceMismatch { expected: Surface, found: Surface },
    #[error("bad attachment: {0}")]
    BadAttachment(String),
}

fn join_violations(v: &[ConfigViolation]) -> String {
    v.iter().map(|x| x.0.as_str()).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractOpenBook {
    pub monodromy: TwistWord,
    pub label: Option<String>,
    system: CurveSystem,
}

impl AbstractOpenBook {
    /// Open book over the page's default generator system.
    pub fn new(page: Surface, monodromy: TwistWord) -> Result<Self, OpenBookError> {
        Self::with_system(CurveSystem::standard(page)?, monodromy)
    }

    /// Open book over an attached (validated) curve system.
    pub fn with_system(system: CurveSystem, monodromy: TwistWord) -> Result<Self, OpenBookError> {
        if !system.surface.has_boundary() {
            return Err(SurfaceError::ClosedPage.into());
        }
        let violations = system.validate();
        if !violations.is_empty() {
            return Err(OpenBookError::InvalidConfig(violations));
        }
        monodromy.check_over(&system.curves)?;
        Ok(Self {
            monodromy,
            label: None,
            system,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn page(&self) -> Surface {
        self.system.surface
    }

    pub fn system(&self) -> &CurveSystem {
        &self.system
    }

    pub fn curves(&self) -> &CurveConfig {
        &self.system.curves
    }

    pub fn arcs(&self) -> &ArcConfig {
        &self.system.arcs
    }

    /// True when the curve system is the page's default one, so the open book
    /// is fully described by the four-line text format.
    pub fn has_standard_system(&self) -> bool {
        CurveSystem::standard(self.page()).is_ok_and(|s| s == self.system)
    }

    pub fn mapping_torus_model(&self) -> MappingTorusModel {
        let page = self.page();
        let action = word_action(&self.monodromy, self.curves()).expect("word checked on construction");
        let defects = (1..page.boundary_count)
            .map(|i| {
                arc_defect(&self.monodromy, i, self.curves(), self.arcs())
                    .expect("word and arcs checked on construction")
            })
            .collect();
        MappingTorusModel {
            page,
            action,
            defects,
        }
    }

    pub fn mapping_torus_h1(&self) -> AbelianGroup {
        mapping_torus_h1(self)
    }

    pub fn closed_h1(&self) -> AbelianGroup {
        closed_h1(self)
    }

    /// Four-line text form. Only the word is recorded, so an attached curve
    /// system must travel separately (see [`CurveSystem::to_file`]).
    pub fn to_text(&self) -> String {
        let page = self.page();
        let word = self.monodromy.to_string();
        let word_line = if word.is_empty() {
            "word".to_string()
        } else {
            format!("word {word}")
        };
        format!(
            "openbook v1\ngenus {}\nboundary {}\n{word_line}\n",
            page.genus, page.boundary_count
        )
    }
}

impl fmt::Display for AbstractOpenBook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.monodromy.to_string();
        write!(
            f,
            "({}, {})",
            self.page(),
            if word.is_empty() { "id" } else { word.as_str() }
        )
    }
}

/// `𝒯(Σ, φ)` in homology: the action `Φ` and the arc defects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingTorusModel {
    pub page: Surface,
    pub action: IntMatrix,
    pub defects: Vec<HomologyClass>,
}

impl MappingTorusModel {
    pub fn action_minus_identity(&self) -> IntMatrix {
        self.action.sub(&IntMatrix::identity(self.action.rows()))
    }

    /// `[Φ - I | δ_1 ... δ_{n-1}]`, whose cokernel is `H1` of the closed manifold.
    pub fn relation_matrix(&self) -> IntMatrix {
        let rank = self.page.h1_rank();
        let defect_cols: Vec<Vec<BigInt>> = self
            .defects
            .iter()
            .map(|d| d.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        self.action_minus_identity()
            .hstack(&IntMatrix::from_columns(rank, &defect_cols))
    }
}

pub fn mapping_torus_h1(ob: &AbstractOpenBook) -> AbelianGroup {
    cokernel(&ob.mapping_torus_model().action_minus_identity()).with_extra_free(1)
}

pub fn closed_h1(ob: &AbstractOpenBook) -> AbelianGroup {
    cokernel(&ob.mapping_torus_model().relation_matrix())
}

/// Where the feet of the stabilizing 1-handle sit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attachment {
    /// Both feet on boundary component `j`: `Σ_{g,n}` becomes `Σ_{g,n+1}`.
    SameBoundary(usize),
    /// Feet on distinct components `j, k`: `Σ_{g,n}` becomes `Σ_{g+1,n-1}`.
    JoinBoundaries(usize, usize),
}

/// Inclusion `Σ ⊂ Σ' = Σ ∪ (1-handle)` in homology, plus the class of the
/// curve running once over the new handle.
struct HandleAttachment {
    target: Surface,
    /// Columns are images of the old basis vectors.
    inclusion: Vec<HomologyClass>,
    fresh: HomologyClass,
}

impl HandleAttachment {
    fn image(&self, class: &[i64]) -> HomologyClass {
        let mut out = vec![0; self.target.h1_rank()];
        for (col, &c) in self.inclusion.iter().zip(class) {
            if c != 0 {
                for (o, x) in out.iter_mut().zip(col) {
                    *o += c * x;
                }
            }
        }
        out
    }
}

fn unit(len: usize, at: usize) -> HomologyClass {
    let mut v = vec![0; len];
    v[at] = 1;
    v
}

fn handle_columns(old: &Surface, new: &Surface) -> Vec<HomologyClass> {
    let rank = new.h1_rank();
    (1..=old.genus)
        .flat_map(|i| [unit(rank, new.index_a(i)), unit(rank, new.index_b(i))])
        .collect()
}

/// Feet on one component: the component splits into a piece `L` that keeps
/// its label and a small piece `S` inserted as component `n` (just before the
/// base). The new handle curve is parallel to `S`.
fn attach_same(old: &Surface, j: usize) -> HandleAttachment {
    let n = old.boundary_count;
    let new = Surface::new(old.genus, n + 1);
    let rank = new.h1_rank();
    let mut inclusion = handle_columns(old, &new);
    for q in 1..n {
        let mut col = unit(rank, new.index_d(q));
        if q == j {
            col[new.index_d(n)] += 1;
        }
        inclusion.push(col);
    }
    HandleAttachment {
        target: new,
        inclusion,
        fresh: unit(rank, new.index_d(n)),
    }
}

/// Feet on components `j != k`: they merge into one component placed at the
/// lower of the two positions, the higher position is removed, and the
/// remaining components keep their relative order. `D_j` becomes `A_{g+1}`;
/// the handle core closed up by an arc from `k` to `j` is `-B_{g+1}`.
fn attach_join(old: &Surface, j: usize, k: usize) -> HandleAttachment {
    let n = old.boundary_count;
    let new = Surface::new(old.genus + 1, n - 1);
    let rank = new.h1_rank();
    let (lo, hi) = (j.min(k), j.max(k));
    let position = |q: usize| -> usize {
        let q = if q == hi { lo } else { q };
        if q > hi {
            q - 1
        } else {
            q
        }
    };
    let a_new = unit(rank, new.index_a(old.genus + 1));
    let merged = new.boundary_class(position(lo));
    let image_of_component = |q: usize| -> HomologyClass {
        if q == j {
            a_new.clone()
        } else if q == k {
            merged.iter().zip(&a_new).map(|(m, a)| m - a).collect()
        } else {
            new.boundary_class(position(q))
        }
    };
    let mut inclusion = handle_columns(old, &new);
    for q in 1..n {
        inclusion.push(image_of_component(q));
    }
    HandleAttachment {
        target: new,
        inclusion,
        fresh: unit(rank, new.index_b(old.genus + 1)),
    }
}

fn strip_primes(name: &str) -> &str {
    name.trim_end_matches('\'')
}

/// New system, name of the fresh curve, and the `(old, new)` curve renames.
type Transported = (CurveSystem, String, Vec<(String, String)>);

/// Moves the open book's curves onto the enlarged page and builds its system:
/// the default generators of the new page, every old curve (keeping its name
/// when it coincides with the default curve of that name, primed otherwise),
/// and a fresh curve `h<N>`. Arc tables are the `D_i` coordinates, i.e. the
/// default arcs of the new page.
fn transport(ob: &AbstractOpenBook, att: &HandleAttachment) -> Result<Transported, OpenBookError> {
    let s = att.target;
    let (standard, _) = lickorish_system(&s)?;
    let mut curves = standard.curves.clone();
    let mut taken: BTreeSet<String> = curves.iter().map(|c| c.name.clone()).collect();
    let mut renames = Vec::new();
    for c in &ob.curves().curves {
        let class = att.image(&c.class);
        let same_as_default = standard
            .get(&c.name)
            .is_some_and(|d| d.class == class && d.kind == c.kind);
        let name = if same_as_default {
            c.name.clone()
        } else {
            let mut candidate = format!("{}'", c.name);
            while taken.contains(&candidate) {
                candidate.push('\'');
            }
            taken.insert(candidate.clone());
            curves.push(Curve {
                name: candidate.clone(),
                class,
                kind: CurveKind::Derived,
            });
            candidate
        };
        renames.push((c.name.clone(), name));
    }

    let used_stems: BTreeSet<&str> = taken.iter().map(|n| strip_primes(n)).collect();
    let fresh_name = (1..)
        .map(|i| format!("h{i}"))
        .find(|n| !used_stems.contains(n.as_str()))
        .expect("unbounded search");
    curves.push(Curve {
        name: fresh_name.clone(),
        class: att.fresh.clone(),
        kind: CurveKind::Derived,
    });

    let arcs = (1..s.boundary_count)
        .map(|i| Arc {
            index: i,
            intersections: curves
                .iter()
                .map(|c| (c.name.clone(), c.class[s.index_d(i)]))
                .collect(),
        })
        .collect();
    let system = CurveSystem {
        surface: s,
        curves: CurveConfig {
            basis: standard.basis,
            curves,
        },
        arcs: ArcConfig { arcs },
    };
    Ok((system, fresh_name, renames))
}

/// Plumbs a positive Hopf band onto the page: a 1-handle is attached and the
/// monodromy becomes `t_h · φ` where `h` runs once over the new handle.
/// The total manifold is unchanged.
pub fn stabilize_positive(ob: &AbstractOpenBook, attachment: Attachment) -> Result<AbstractOpenBook, OpenBookError> {
    let page = ob.page();
    let n = page.boundary_count;
    let in_range = |x: usize| (1..=n).contains(&x);
    let att = match attachment {
        Attachment::SameBoundary(j) if in_range(j) => attach_same(&page, j),
        Attachment::JoinBoundaries(j, k) if in_range(j) && in_range(k) && j != k => attach_join(&page, j, k),
        Attachment::SameBoundary(j) => {
            return Err(OpenBookError::BadAttachment(format!(
                "boundary {j} out of range 1..{n}"
            )))
        }
        Attachment::JoinBoundaries(j, k) if j == k => {
            return Err(OpenBookError::BadAttachment(
                "joining a component to itself; use same-boundary attachment".into(),
            ))
        }
        Attachment::JoinBoundaries(j, k) => {
            return Err(OpenBookError::BadAttachment(format!(
                "boundaries {j}, {k} out of range 1..{n}"
            )))
        }
    };
    let (system, fresh, renames) = transport(ob, &att)?;
    let word = TwistWord::letter(fresh, 1).then_after(&ob.monodromy.rename(|name| {
        renames
            .iter()
            .find(|(old, _)| old == name)
            .map(|(_, new)| new.clone())
            .expect("every word letter is a configured curve")
    }));
    let mut out = AbstractOpenBook::with_system(system, word)?;
    out.label = ob.label.clone();
    Ok(out)
}

/// Joins boundary components pairwise until one remains (`n - 1` stabilizations).
pub fn reduce_to_one_boundary(ob: &AbstractOpenBook) -> Result<AbstractOpenBook, OpenBookError> {
    let mut cur = ob.clone();
    while cur.page().boundary_count > 1 {
        let n = cur.page().boundary_count;
        cur = stabilize_positive(&cur, Attachment::JoinBoundaries(n - 1, n))?;
    }
    Ok(cur)
}

/// Names the manifold when the open book is one of a few standard ones:
/// the trivial open book, annulus pages twisted along the core, and planar
/// pages with trivial monodromy. Returns `None` for everything else.
pub fn identify_known(ob: &AbstractOpenBook) -> Option<String> {
    let page = ob.page();
    if page.genus != 0 {
        return None;
    }
    if ob.monodromy.is_empty() {
        return Some(match page.boundary_count {
            1 => "S3".to_string(),
            2 => "S1xS2".to_string(),
            n => format!("#{}(S1xS2)", n - 1),
        });
    }
    if page.boundary_count != 2 {
        return None;
    }
    // every letter must be a twist along the core circle
    let core_twist = |name: &str| {
        ob.curves()
            .get(name)
            .is_some_and(|c| c.class[0].abs() == 1 && ob.arcs().intersection(1, name) * c.class[0] == 1)
    };
    if !ob.monodromy.letters().iter().all(|l| core_twist(&l.curve)) {
        return None;
    }
    let k = ob.monodromy.exponent_sum();
    let p = k.unsigned_abs();
    Some(match k {
        0 => "S1xS2".to_string(),
        1 | -1 => "S3".to_string(),
        k if k > 0 => format!("L({p},1)"),
        _ => format!("L({p},{})", p - 1),
    })
}

/// Error in the four-line open book text, with a 1-based line number.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Parses
///
/// ```text
/// openbook v1
/// genus <g>
/// boundary <n>
/// word <word or nothing>
/// ```
pub fn parse_openbook_text(text: &str) -> Result<(Surface, TwistWord), ParseError> {
    let err = |line: usize, message: String| ParseError { line, message };
    let lines: Vec<&str> = text.lines().collect();
    let non_blank_tail = lines.iter().skip(4).position(|l| !l.trim().is_empty());
    if let Some(p) = non_blank_tail {
        return Err(err(5 + p, "unexpected content after the word line".into()));
    }
    let get = |i: usize| lines.get(i).map(|l| l.trim_end_matches('\r'));

    match get(0) {
        Some("openbook v1") => {}
        Some(other) => return Err(err(1, format!("expected `openbook v1`, found `{other}`"))),
        None => return Err(err(1, "empty input, expected `openbook v1`".into())),
    }
    let field = |i: usize, key: &str| -> Result<usize, ParseError> {
        let line = get(i).ok_or_else(|| err(i + 1, format!("missing `{key} <count>` line")))?;
        let value = line
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| err(i + 1, format!("expected `{key} <count>`, found `{line}`")))?;
        value
            .trim()
            .parse()
            .map_err(|_| err(i + 1, format!("`{}` is not a non-negative integer", value.trim())))
    };
    let genus = field(1, "genus")?;
    let boundary = field(2, "boundary")?;
    let line = get(3).ok_or_else(|| err(4, "missing `word ...` line".into()))?;
    let body = if line == "word" {
        ""
    } else {
        line.strip_prefix("word ")
            .ok_or_else(|| err(4, format!("expected `word <letters>`, found `{line}`")))?
    };
    let word = body.parse::<TwistWord>().map_err(|e| err(4, e.to_string()))?;
    if boundary == 0 {
        return Err(err(3, "page must have boundary".into()));
    }
    Ok((Surface::new(genus, boundary), word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ob(g: usize, n: usize, word: &str) -> AbstractOpenBook {
        AbstractOpenBook::new(Surface::new(g, n), word.parse().unwrap()).unwrap()
    }

    fn z(k: i64) -> AbelianGroup {
        AbelianGroup::from_cyclic_factors(0, &[BigInt::from(k)])
    }

    #[test]
    fn mapping_torus_examples() {
        assert_eq!(ob(0, 2, "").mapping_torus_h1(), AbelianGroup::free(2));
        assert_eq!(ob(1, 1, "t(a1) t(b1)").mapping_torus_h1(), AbelianGroup::free(1));
        assert_eq!(ob(0, 1, "").mapping_torus_h1(), AbelianGroup::free(1));
    }

    #[test]
    fn closed_examples() {
        assert!(ob(0, 1, "").closed_h1().is_trivial());
        assert_eq!(ob(0, 2, "").closed_h1(), AbelianGroup::free(1));
        assert_eq!(ob(0, 3, "").closed_h1(), AbelianGroup::free(2));
        for k in 2..8 {
            assert_eq!(ob(0, 2, &format!("t(t1)^{k}")).closed_h1(), z(k));
        }
        assert!(ob(0, 2, "t(t1)").closed_h1().is_trivial());
        // τ1 τ2 is the square of the core twist
        assert_eq!(ob(0, 2, "t(t1) t(t2)").closed_h1(), z(2));
    }

    #[test]
    fn pants_boundary_twists() {
        assert_eq!(ob(0, 3, "t(t1) t(t2) t(t3)").closed_h1(), z(3));
        let g = ob(0, 3, "t(t1)^2 t(t2)^2").closed_h1();
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(2)]);
        // relabeling symmetry of the pair of pants
        assert_eq!(ob(0, 3, "t(t1)^2 t(t3)^2").closed_h1(), g);
        assert_eq!(ob(0, 3, "t(t3)^3").closed_h1(), ob(0, 3, "t(t1)^3").closed_h1());
    }

    #[test]
    fn closed_page_rejected() {
        assert!(matches!(
            AbstractOpenBook::new(Surface::new(1, 0), TwistWord::empty()),
            Err(OpenBookError::Surface(SurfaceError::ClosedPage))
        ));
    }

    #[test]
    fn unknown_letter_rejected() {
        let err = AbstractOpenBook::new(Surface::new(1, 1), "t(q7)".parse().unwrap()).unwrap_err();
        assert_eq!(err, OpenBookError::Word(McgError::UnknownCurve("q7".into())));
    }

    #[test]
    fn stabilize_disk_gives_hopf_annulus() {
        let s = stabilize_positive(&ob(0, 1, ""), Attachment::SameBoundary(1)).unwrap();
        assert_eq!(s.page(), Surface::annulus());
        assert_eq!(s.monodromy.to_string(), "t(h1)");
        assert!(s.closed_h1().is_trivial());
        assert_eq!(identify_known(&s).as_deref(), Some("S3"));
    }

    #[test]
    fn join_annulus_lens_space() {
        for k in 1..6 {
            let before = ob(0, 2, &format!("t(t1)^{k}"));
            let after = stabilize_positive(&before, Attachment::JoinBoundaries(1, 2)).unwrap();
            assert_eq!(after.page(), Surface::new(1, 1));
            assert_eq!(after.closed_h1(), before.closed_h1());
        }
    }

    #[test]
    fn stabilization_keeps_matching_names() {
        let before = ob(1, 2, "t(a1) t(b1) t(e1)");
        let after = stabilize_positive(&before, Attachment::SameBoundary(1)).unwrap();
        assert_eq!(after.page(), Surface::new(1, 3));
        assert_eq!(after.monodromy.to_string(), "t(h1) t(a1) t(b1) t(e1')");
        assert_eq!(after.closed_h1(), before.closed_h1());
    }

    #[test]
    fn repeated_stabilization_picks_new_fresh_name() {
        let a = stabilize_positive(&ob(0, 1, ""), Attachment::SameBoundary(1)).unwrap();
        let b = stabilize_positive(&a, Attachment::SameBoundary(2)).unwrap();
        assert_eq!(b.monodromy.to_string(), "t(h2) t(h1')");
        assert!(b.closed_h1().is_trivial());
    }

    #[test]
    fn bad_attachments() {
        let o = ob(0, 3, "");
        assert!(stabilize_positive(&o, Attachment::SameBoundary(4)).is_err());
        assert!(stabilize_positive(&o, Attachment::SameBoundary(0)).is_err());
        assert!(stabilize_positive(&o, Attachment::JoinBoundaries(2, 2)).is_err());
        assert!(stabilize_positive(&o, Attachment::JoinBoundaries(1, 5)).is_err());
    }

    #[test]
    fn reduce_examples() {
        let one = ob(2, 1, "t(a1)");
        assert_eq!(reduce_to_one_boundary(&one).unwrap(), one);
        let lens = ob(0, 2, "t(t1)^3");
        let r = reduce_to_one_boundary(&lens).unwrap();
        assert_eq!(r.page().boundary_count, 1);
        assert_eq!(r.closed_h1(), z(3));
        let pants = ob(0, 3, "");
        let r = reduce_to_one_boundary(&pants).unwrap();
        assert_eq!(r.page(), Surface::new(2, 1));
        assert_eq!(r.closed_h1(), AbelianGroup::free(2));
    }

    #[test]
    fn identify_catalog() {
        assert_eq!(identify_known(&ob(0, 1, "")).as_deref(), Some("S3"));
        assert_eq!(identify_known(&ob(0, 2, "t(t1)^5")).as_deref(), Some("L(5,1)"));
        assert_eq!(identify_known(&ob(0, 2, "t(t1)")).as_deref(), Some("S3"));
        assert_eq!(identify_known(&ob(0, 2, "")).as_deref(), Some("S1xS2"));
        assert_eq!(identify_known(&ob(0, 2, "t(t1)^2 t(t1)^-2")).as_deref(), Some("S1xS2"));
        assert_eq!(identify_known(&ob(0, 2, "t(t2)^-3")).as_deref(), Some("L(3,2)"));
        assert_eq!(identify_known(&ob(0, 4, "")).as_deref(), Some("#3(S1xS2)"));
        assert_eq!(identify_known(&ob(2, 1, "t(a1) t(b2)^3")), None);
        assert_eq!(identify_known(&ob(0, 3, "t(t1)")), None);
    }

    #[test]
    fn text_round_trip() {
        let o = ob(1, 2, "t(a1) t(b1)^-1 t(e1)^3");
        let text = o.to_text();
        assert_eq!(text, "openbook v1\ngenus 1\nboundary 2\nword t(a1) t(b1)^-1 t(e1)^3\n");
        let (s, w) = parse_openbook_text(&text).unwrap();
        assert_eq!(s, o.page());
        assert_eq!(w, o.monodromy);
        assert_eq!(ob(0, 1, "").to_text(), "openbook v1\ngenus 0\nboundary 1\nword\n");
        assert!(parse_openbook_text("openbook v1\ngenus 0\nboundary 1\nword \n").is_ok());
    }

    #[test]
    fn text_errors_are_line_numbered() {
        let e = parse_openbook_text("openbook v2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_openbook_text("openbook v1\ngenus x\nboundary 1\nword\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_openbook_text("openbook v1\ngenus 0\nboundary 0\nword\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_openbook_text("openbook v1\ngenus 0\nboundary 1\nword t(a1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_openbook_text("openbook v1\ngenus 0\nboundary 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_openbook_text("openbook v1\ngenus 0\nboundary 1\nword\nextra\n").unwrap_err();
        assert_eq!(e.line, 5);
    }
}
