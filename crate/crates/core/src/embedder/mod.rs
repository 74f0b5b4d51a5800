//! Structural certificates for embeddings of open books.
//!
//! Four certificate kinds are produced:
//!
//! * `flexible_embedding`: a page properly embedded in the disk bundle
//!   `DE(m)` (B^4 plus a 2-handle along an `m`-framed unknot) with one
//!   scheduled ambient isotopy per generator curve;
//! * `openbook_embedding`: an open book embedded in `Aob(DE(m), Id)`, whose
//!   total space is `S^3 × S^2` for even `m` and `S^2 ×~ S^3` for odd `m`;
//! * `annulus_s5`: an annulus-paged open book in the trivial open book of `S^5`;
//! * `s5_plan`: the `S^3 × R^2 ⊂ S^5` construction for an arbitrary open book.
//!
//! Certificates record isotopies as ordered schedule steps with levels and
//! reason codes. They are checked combinatorially by [`validate_certificate`],
//! which reads nothing but the serialized JSON.

mod build;
mod validate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::AbelianGroup;
use crate::mcg::TwistWord;
use crate::openbook::{AbstractOpenBook, OpenBookError};
use crate::surface::{ConfigFile, Curve, Surface, SurfaceError};

pub use build::{build_annulus_s5, build_flexible_embedding, build_openbook_embedding, build_s5_plan};
pub use validate::{validate_certificate, validate_json, ValidationReport, Violation};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Distinguished levels of the collar `S^3 × [0, 1]` of `∂B^4`.
pub const COLLAR_LEVELS: [f64; 3] = [0.0, 0.5, 1.0];
/// Level of the collar that carries the page (away from the boundary cylinders).
pub const PAGE_LEVEL: f64 = 0.5;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    OpenBook(#[from] OpenBookError),
    #[error("annulus certificate needs the annulus page, got {0}")]
    NotAnnulus(Surface),
    #[error("letter {index} twists along `{curve}`, which is not a core curve of the annulus")]
    NonCoreLetter { index: usize, curve: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("certificate must be a JSON object with a string `kind`")]
    NotACertificate,
    #[error("unknown certificate kind `{0}`")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// The collar `S^3 × [0, 1]` of `∂B^4` (level 0 is the inner sphere).
    Collar,
    /// The 2-handle `D^2 × D^2`.
    Handle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolidTorus {
    /// `N(K)`, the neighborhood of the attaching circle.
    AttachingRegion,
    /// The closed complementary solid torus `S^3 - int N(K)`.
    Complement,
}

/// A piece of the scene, placed precisely enough to decide disjointness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub name: String,
    pub region: Region,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solid_torus: Option<SolidTorus>,
    /// Closed range of collar levels the piece meets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<[f64; 2]>,
    /// Point of the cocore disk the piece sits over (handle pieces only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocore_point: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub piece: String,
    pub along: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSectionPiece {
    #[serde(flatten)]
    pub piece: Piece,
    pub glued_to: Vec<Gluing>,
}

/// `DE(m)` as B^4 with collar, attaching region `N(K)` and the 2-handle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskBundleModel {
    pub framing: i64,
    pub total_space: String,
    pub regions: Vec<String>,
    pub collar_levels: Vec<f64>,
    pub zero_section: Vec<ZeroSectionPiece>,
}

impl DiskBundleModel {
    pub const REGIONS: [&'static str; 6] =
        ["B4_interior", "collar", "attaching_region", "handle", "core_disk", "cocore"];
    pub const ZERO_SECTION: [&'static str; 3] = ["handle_core_disk", "K_cylinder", "bottom_disk"];

    pub fn new(framing: i64) -> Self {
        let glue = |piece: &str, along: &str| Gluing {
            piece: piece.into(),
            along: along.into(),
        };
        let zero_section = vec![
            ZeroSectionPiece {
                piece: Piece {
                    name: "handle_core_disk".into(),
                    region: Region::Handle,
                    solid_torus: None,
                    levels: None,
                    cocore_point: Some("0".into()),
                },
                glued_to: vec![glue("K_cylinder", "Kx{1}")],
            },
            ZeroSectionPiece {
                piece: Piece {
                    name: "K_cylinder".into(),
                    region: Region::Collar,
                    solid_torus: Some(SolidTorus::AttachingRegion),
                    levels: Some([0.0, 1.0]),
                    cocore_point: None,
                },
                glued_to: vec![glue("handle_core_disk", "Kx{1}"), glue("bottom_disk", "Kx{0}")],
            },
            ZeroSectionPiece {
                piece: Piece {
                    name: "bottom_disk".into(),
                    region: Region::Collar,
                    solid_torus: None,
                    levels: Some([0.0, 0.0]),
                    cocore_point: None,
                },
                glued_to: vec![glue("K_cylinder", "Kx{0}")],
            },
        ];
        Self {
            framing,
            total_space: total_space_label(framing).into(),
            regions: Self::REGIONS.iter().map(|s| s.to_string()).collect(),
            collar_levels: COLLAR_LEVELS.to_vec(),
            zero_section,
        }
    }

    pub fn is_even(&self) -> bool {
        self.framing % 2 == 0
    }
}

pub fn total_space_label(m: i64) -> &'static str {
    if m % 2 == 0 {
        "S3xS2 page bundle"
    } else {
        "twisted"
    }
}

/// Short target label of `Aob(DE(m), Id)`.
pub fn target_label(m: i64) -> &'static str {
    if m % 2 == 0 {
        "S3xS2"
    } else {
        "twisted"
    }
}

pub fn target_manifold(m: i64) -> &'static str {
    if m % 2 == 0 {
        "S3xS2"
    } else {
        "S2~xS3"
    }
}

/// An open book as recorded in a certificate: page, word and the full curve system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenBookRecord {
    pub page: Surface,
    pub word: TwistWord,
    pub system: ConfigFile,
}

impl OpenBookRecord {
    pub fn of(ob: &AbstractOpenBook) -> Self {
        Self {
            page: ob.page(),
            word: ob.monodromy.clone(),
            system: ob.system().to_file(),
        }
    }

    pub fn rebuild(&self) -> Result<AbstractOpenBook, OpenBookError> {
        let system = crate::surface::CurveSystem::from_file(self.page, self.system.clone());
        AbstractOpenBook::with_system(system, self.word.clone())
    }
}

// ---- flexible_embedding ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlexibleInput {
    pub page: Surface,
    pub framing: i64,
    pub curves: Vec<Curve>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandRecord {
    pub disk: String,
    pub full_twists: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CappingDisk {
    pub name: String,
    pub bounds: String,
    pub side: Region,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCylinder {
    pub disk: String,
    pub levels: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCensus {
    pub boundary: Vec<String>,
    pub euler_characteristic: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlexibleScene {
    pub bundle: DiskBundleModel,
    pub removed_disks: Vec<String>,
    pub band: BandRecord,
    pub hopf_pair: [String; 2],
    pub capping_disk: CappingDisk,
    pub boundary_cylinders: Vec<BoundaryCylinder>,
    /// The surface `S` before capping: `n + 1` boundary components.
    pub intermediate: SurfaceCensus,
    /// `S ∪ D`, which is the page again.
    pub capped: SurfaceCensus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsotopyPhase {
    Push,
    Twist,
    Return,
}

pub const ISOTOPY_PHASES: [IsotopyPhase; 3] = [IsotopyPhase::Push, IsotopyPhase::Twist, IsotopyPhase::Return];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistStep {
    pub step: usize,
    pub curve: String,
    pub band_sum_curve: String,
    pub level: f64,
    /// Collar levels touched by the twist isotopy.
    pub support: [f64; 2],
    /// Time interval `[step - 1, step]` occupied by this isotopy.
    pub window: [usize; 2],
    pub isotopy: Vec<IsotopyPhase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexibleChecks {
    pub generator_count: usize,
    pub euler_page: i64,
    pub euler_intermediate: i64,
    pub euler_capped: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlexibleEmbeddingCertificate {
    pub version: u32,
    pub input: FlexibleInput,
    pub scene: FlexibleScene,
    pub schedule: Vec<TwistStep>,
    pub checks: FlexibleChecks,
}

impl FlexibleEmbeddingCertificate {
    pub fn step_for(&self, curve: &str) -> Option<&TwistStep> {
        self.schedule.iter().find(|s| s.curve == curve)
    }
}

pub fn band_sum_name(curve: &str) -> String {
    format!("{curve}#_b C_H")
}

// ---- openbook_embedding ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessInput {
    pub openbook: OpenBookRecord,
    pub framing: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessScene {
    pub target: String,
    pub target_manifold: String,
    pub compatibility: String,
    pub page_certificate: FlexibleEmbeddingCertificate,
}

/// One word letter, in action order, realized by a scheduled isotopy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub action_step: usize,
    pub letter_index: usize,
    pub curve: String,
    pub exponent: i64,
    pub schedule_step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub letters: usize,
    pub framing_parity: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenBookEmbeddingWitness {
    pub version: u32,
    pub input: WitnessInput,
    pub scene: WitnessScene,
    pub schedule: Vec<Realization>,
    pub checks: WitnessChecks,
}

pub fn compatibility_stamp(m: i64) -> String {
    format!("Aob(DE({m}), Id)")
}

pub fn parity_name(m: i64) -> &'static str {
    if m % 2 == 0 {
        "even"
    } else {
        "odd"
    }
}

// ---- annulus_s5 ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfBandPlacement {
    pub ambient: String,
    pub boundary: String,
    /// The page's core curve is carried to the center circle of the band.
    pub core_to_center: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollarPush {
    pub collar: String,
    pub band_level: f64,
    pub boundary_cylinder: [f64; 2],
    pub proper_in: String,
}

/// One branch of the extension `Γ_1(x, t) = Ψ_{a·t + b}(x)` over `t ∈ [lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionBranch {
    pub t_range: [f64; 2],
    pub psi_slope: i64,
    pub psi_offset: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotopyExtension {
    pub collar: String,
    pub branches: Vec<ExtensionBranch>,
    pub outside_collar: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusScene {
    pub hopf_band: HopfBandPlacement,
    pub collar_push: CollarPush,
    pub isotopy_extension: IsotopyExtension,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreTwistStep {
    pub action_step: usize,
    pub letter_index: usize,
    pub curve: String,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusChecks {
    pub realized_power: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusD4Certificate {
    pub version: u32,
    pub input: OpenBookRecord,
    pub scene: AnnulusScene,
    pub schedule: Vec<CoreTwistStep>,
    pub checks: AnnulusChecks,
}

impl AnnulusD4Certificate {
    pub fn realized_power(&self) -> i64 {
        self.checks.realized_power
    }
}

// ---- s5_plan ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S5Input {
    pub original: OpenBookRecord,
    pub normalized: OpenBookRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<i64>,
    pub role: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfAnnulus {
    pub boundary: [String; 2],
    pub level: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSum {
    pub summands: [String; 2],
    pub result: Surface,
    pub euler_characteristic: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assembly {
    pub complement: String,
    pub capping: String,
    pub target: String,
    pub ambient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct S5Scene {
    pub bundle: DiskBundleModel,
    pub knots: Vec<KnotRecord>,
    pub hopf_annulus: HopfAnnulus,
    pub handlebody: SolidTorus,
    pub connected_sum: ConnectedSum,
    pub surface_pieces: Vec<Piece>,
    pub page_certificate: FlexibleEmbeddingCertificate,
    pub assembly: Assembly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvoidanceReason {
    DifferentLevel,
    InsideComplementSolidTorus,
    HandleSideDisjointness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceEntry {
    pub surface_piece: String,
    pub zero_section_piece: String,
    pub disjoint: bool,
    pub reason: Option<AvoidanceReason>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S5Checks {
    pub h1_before: AbelianGroup,
    pub h1_after: AbelianGroup,
    pub h1_preserved: bool,
    pub avoidance: Vec<AvoidanceEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct S5Plan {
    pub version: u32,
    pub input: S5Input,
    pub scene: S5Scene,
    pub schedule: Vec<Realization>,
    pub checks: S5Checks,
}

/// Why two pieces are disjoint, derived from their placement alone.
pub fn disjointness_reason(a: &Piece, b: &Piece) -> Option<AvoidanceReason> {
    match (a.region, b.region) {
        (Region::Handle, Region::Collar) | (Region::Collar, Region::Handle) => {
            return Some(AvoidanceReason::HandleSideDisjointness)
        }
        (Region::Handle, Region::Handle) => {
            return match (&a.cocore_point, &b.cocore_point) {
                (Some(p), Some(q)) if p != q => Some(AvoidanceReason::HandleSideDisjointness),
                _ => None,
            }
        }
        (Region::Collar, Region::Collar) => {}
    }
    if let (Some([a0, a1]), Some([b0, b1])) = (a.levels, b.levels) {
        if a1 < b0 || b1 < a0 {
            return Some(AvoidanceReason::DifferentLevel);
        }
    }
    match (a.solid_torus, b.solid_torus) {
        (Some(SolidTorus::Complement), Some(SolidTorus::AttachingRegion))
        | (Some(SolidTorus::AttachingRegion), Some(SolidTorus::Complement)) => {
            Some(AvoidanceReason::InsideComplementSolidTorus)
        }
        _ => None,
    }
}

// ---- envelope ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Certificate {
    FlexibleEmbedding(FlexibleEmbeddingCertificate),
    OpenbookEmbedding(OpenBookEmbeddingWitness),
    AnnulusS5(AnnulusD4Certificate),
    S5Plan(S5Plan),
}

impl Certificate {
    pub const KINDS: [&'static str; 4] = ["flexible_embedding", "openbook_embedding", "annulus_s5", "s5_plan"];

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::FlexibleEmbedding(_) => "flexible_embedding",
            Certificate::OpenbookEmbedding(_) => "openbook_embedding",
            Certificate::AnnulusS5(_) => "annulus_s5",
            Certificate::S5Plan(_) => "s5_plan",
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificates serialize")
    }

    /// Pretty JSON; byte-identical for equal certificates.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

impl From<FlexibleEmbeddingCertificate> for Certificate {
    fn from(c: FlexibleEmbeddingCertificate) -> Self {
        Certificate::FlexibleEmbedding(c)
    }
}

impl From<OpenBookEmbeddingWitness> for Certificate {
    fn from(c: OpenBookEmbeddingWitness) -> Self {
        Certificate::OpenbookEmbedding(c)
    }
}

impl From<AnnulusD4Certificate> for Certificate {
    fn from(c: AnnulusD4Certificate) -> Self {
        Certificate::AnnulusS5(c)
    }
}

impl From<S5Plan> for Certificate {
    fn from(c: S5Plan) -> Self {
        Certificate::S5Plan(c)
    }
}
