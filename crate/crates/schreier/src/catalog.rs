//! Named one-relator families, worked subgroup computations over them, and
//! the verification pipeline that replays each computation end to end.
//!
//! A recipe packages an ambient presentation, a finite generating set for a
//! finite-index subgroup, the index the enumeration must confirm, and the
//! presentation the rewritten subgroup must simplify to. `verify` replays
//! the whole chain and reports every intermediate artifact.

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{
    build_bgamma, detect_raag, gamma1_graph, gamma2_graph, hub_and_square_graph, make_bristled,
    make_star, path_graph,
};
use crate::matcher::{presentations_match, MatchReport};
use crate::par;
use crate::parse::{parse_word, ParseError};
use crate::present::{AbelianInvariants, Presentation, PresentationError};
use crate::rewrite::{subgroup_presentation, RewriteOptions, SubgroupPresentation};
use crate::tietze::{self, TietzeError, TietzeMove};
use crate::words::{commutator, GeneratorId, Word};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} expects {expected}")]
    BadParams { family: &'static str, expected: &'static str },
    #[error("unknown recipe {0:?}")]
    UnknownRecipe(String),
    #[error("recipe {recipe} expects {expected}")]
    BadRecipeParams { recipe: &'static str, expected: &'static str },
    #[error(transparent)]
    Coset(#[from] crate::coset::CosetError),
    #[error(transparent)]
    Tietze(#[from] TietzeError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// The one-relator (or free) families the catalog knows how to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `< a, b | a^m b^n >`, torus-knot-like; `m, n >= 0`.
    TorusKnot,
    /// `< a, b | (a^p b^q)^k >` with `p, q >= 2`, `k >= 1`.
    InflatedTorus,
    /// `< a, b | [a^m, b^n] >` with `m, n >= 1`.
    Moldavanskii,
    /// `< a, b | b a^m b^-1 a^-n >`, Baumslag-Solitar, `m, n` nonzero.
    BaumslagSolitar,
    /// `< a, b | (b a^m b^-1 a^-n)^k >` with `m, n` nonzero, `k >= 1`.
    InflatedBaumslagSolitar,
    /// `< y, x1..xp | y^-1 (y^q)^{x1} ... (y^q)^{xp} >` with `p, q >= 1`,
    /// writing `u^v` for `v u v^-1`.
    Newman,
    /// `< a, b, c | a c^{m+1} a b c^m b >` with `m >= 0`.
    HGroup,
    /// `< a, b | [a b^i, b^i a] >` with `i >= 1`.
    Bob,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::TorusKnot,
        Family::InflatedTorus,
        Family::Moldavanskii,
        Family::BaumslagSolitar,
        Family::InflatedBaumslagSolitar,
        Family::Newman,
        Family::HGroup,
        Family::Bob,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TorusKnot => "torus_knot",
            Family::InflatedTorus => "inflated_torus",
            Family::Moldavanskii => "moldavanskii",
            Family::BaumslagSolitar => "bs",
            Family::InflatedBaumslagSolitar => "inflated_bs",
            Family::Newman => "newman",
            Family::HGroup => "h_group",
            Family::Bob => "bob",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::TorusKnot | Family::Moldavanskii | Family::BaumslagSolitar => &["m", "n"],
            Family::InflatedTorus => &["p", "q", "k"],
            Family::InflatedBaumslagSolitar => &["m", "n", "k"],
            Family::Newman => &["p", "q"],
            Family::HGroup => &["m"],
            Family::Bob => &["i"],
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == name)
    }
}

pub fn family_named(name: &str) -> Result<Family, CatalogError> {
    Family::parse(name).ok_or_else(|| CatalogError::UnknownFamily(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: Vec<i64>,
}

impl FamilySpec {
    pub fn new(family: Family, params: impl Into<Vec<i64>>) -> Self {
        FamilySpec { family, params: params.into() }
    }

    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(ToString::to_string).collect();
        format!("{}({})", self.family.name(), params.join(","))
    }
}

fn two(params: &[i64]) -> Option<(i64, i64)> {
    match params {
        [m, n] => Some((*m, *n)),
        _ => None,
    }
}

fn three(params: &[i64]) -> Option<(i64, i64, i64)> {
    match params {
        [a, b, c] => Some((*a, *b, *c)),
        _ => None,
    }
}

fn one(params: &[i64]) -> Option<i64> {
    match params {
        [a] => Some(*a),
        _ => None,
    }
}

fn two_generator(relators: Vec<Word>) -> Presentation {
    let alphabet = crate::words::Alphabet::new(["a", "b"]).expect("valid names");
    Presentation::new(alphabet, relators).expect("relators nonempty by construction")
}

/// Builds the presentation a family spec names, validating the parameter
/// ranges the family is defined for.
pub fn build_family(spec: &FamilySpec) -> Result<Presentation, CatalogError> {
    let bad = |expected: &'static str| CatalogError::BadParams {
        family: spec.family.name(),
        expected,
    };
    let a = GeneratorId(0);
    let b = GeneratorId(1);
    match spec.family {
        Family::TorusKnot => {
            let (m, n) = two(&spec.params).ok_or_else(|| bad("m, n >= 0"))?;
            if m < 0 || n < 0 {
                return Err(bad("m, n >= 0"));
            }
            let r = Word::generator_power(a, m).concat(&Word::generator_power(b, n));
            // m = n = 0 degenerates to the free group on a, b.
            Ok(two_generator(if r.is_empty() { vec![] } else { vec![r] }))
        }
        Family::InflatedTorus => {
            let (p, q, k) = three(&spec.params).ok_or_else(|| bad("p, q >= 2 and k >= 1"))?;
            if p < 2 || q < 2 || k < 1 {
                return Err(bad("p, q >= 2 and k >= 1"));
            }
            let base = Word::generator_power(a, p).concat(&Word::generator_power(b, q));
            Ok(two_generator(vec![base.pow(k)]))
        }
        Family::Moldavanskii => {
            let (m, n) = two(&spec.params).ok_or_else(|| bad("m, n >= 1"))?;
            if m < 1 || n < 1 {
                return Err(bad("m, n >= 1"));
            }
            let r = commutator(&Word::generator_power(a, m), &Word::generator_power(b, n));
            Ok(two_generator(vec![r]))
        }
        Family::BaumslagSolitar => {
            let (m, n) = two(&spec.params).ok_or_else(|| bad("nonzero m, n"))?;
            if m == 0 || n == 0 {
                return Err(bad("nonzero m, n"));
            }
            Ok(two_generator(vec![bs_relator(m, n)]))
        }
        Family::InflatedBaumslagSolitar => {
            let (m, n, k) =
                three(&spec.params).ok_or_else(|| bad("nonzero m, n and k >= 1"))?;
            if m == 0 || n == 0 || k < 1 {
                return Err(bad("nonzero m, n and k >= 1"));
            }
            Ok(two_generator(vec![bs_relator(m, n).pow(k)]))
        }
        Family::Newman => {
            let (p, q) = two(&spec.params).ok_or_else(|| bad("p, q >= 1"))?;
            if p < 1 || q < 1 {
                return Err(bad("p, q >= 1"));
            }
            let names: Vec<String> = std::iter::once("y".to_string())
                .chain((1..=p).map(|i| format!("x{i}")))
                .collect();
            let alphabet = crate::words::Alphabet::new(names).expect("valid names");
            let y = GeneratorId(0);
            let mut r = Word::generator_power(y, -1);
            for i in 1..=p {
                let xi = Word::generator(GeneratorId(i as usize));
                r = r.concat(&Word::generator_power(y, q).conjugated_by(&xi));
            }
            Ok(Presentation::new(alphabet, vec![r]).expect("relator nonempty"))
        }
        Family::HGroup => {
            let m = one(&spec.params).ok_or_else(|| bad("m >= 0"))?;
            if m < 0 {
                return Err(bad("m >= 0"));
            }
            let names = crate::words::Alphabet::new(["a", "b", "c"]).expect("valid names");
            let (a, b, c) = (GeneratorId(0), GeneratorId(1), GeneratorId(2));
            let r = Word::generator(a)
                .concat(&Word::generator_power(c, m + 1))
                .concat(&Word::generator(a))
                .concat(&Word::generator(b))
                .concat(&Word::generator_power(c, m))
                .concat(&Word::generator(b));
            Ok(Presentation::new(names, vec![r]).expect("relator nonempty"))
        }
        Family::Bob => {
            let i = one(&spec.params).ok_or_else(|| bad("i >= 1"))?;
            if i < 1 {
                return Err(bad("i >= 1"));
            }
            let u = Word::generator(a).concat(&Word::generator_power(b, i));
            let v = Word::generator_power(b, i).concat(&Word::generator(a));
            Ok(two_generator(vec![commutator(&u, &v)]))
        }
    }
}

fn bs_relator(m: i64, n: i64) -> Word {
    let a = GeneratorId(0);
    let b = GeneratorId(1);
    Word::generator_power(a, m)
        .conjugated_by(&Word::generator(b))
        .concat(&Word::generator_power(a, -n))
}

/// The worked subgroup computations the catalog can replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecipeId {
    /// Index-`mn` subgroup of `torus_knot(m,n)` presenting `Z x F_{(m-1)(n-1)}`.
    Torus,
    /// Index-`m` subgroup of `moldavanskii(m,n)` presenting `B` of a star.
    Mt,
    /// Index-`l` subgroup of the star group `B(S_{k,l})` presenting a
    /// bristled-star group.
    Starbs,
    /// Index-2 subgroup of `B(gamma1)` presenting the path group `A(P5)`.
    Gamma1,
    /// Index-2 subgroup of `B(gamma2)` presenting the hub-and-square group.
    Chordal,
    /// Index-2 subgroup of `inflated_torus(2, 2m+1, 2)` presenting `h_group(m)`.
    Sqtorus,
    /// Index-`p` subgroup of `inflated_bs(1, pq, p)` presenting `newman(p,q)`.
    Newman,
}

impl RecipeId {
    pub const ALL: [RecipeId; 7] = [
        RecipeId::Torus,
        RecipeId::Mt,
        RecipeId::Starbs,
        RecipeId::Gamma1,
        RecipeId::Chordal,
        RecipeId::Sqtorus,
        RecipeId::Newman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecipeId::Torus => "TORUS",
            RecipeId::Mt => "MT",
            RecipeId::Starbs => "STARBS",
            RecipeId::Gamma1 => "GAMMA1",
            RecipeId::Chordal => "CHORDAL",
            RecipeId::Sqtorus => "SQTORUS",
            RecipeId::Newman => "NEWMAN",
        }
    }

    pub fn parse(name: &str) -> Option<RecipeId> {
        let upper = name.to_ascii_uppercase();
        RecipeId::ALL.iter().copied().find(|r| r.name() == upper)
    }
}

pub fn recipe_named(name: &str) -> Result<RecipeId, CatalogError> {
    RecipeId::parse(name).ok_or_else(|| CatalogError::UnknownRecipe(name.to_string()))
}

pub fn recipe_label(id: RecipeId, params: &[i64]) -> String {
    if params.is_empty() {
        id.name().to_string()
    } else {
        let params: Vec<String> = params.iter().map(ToString::to_string).collect();
        format!("{}({})", id.name(), params.join(","))
    }
}

/// A change of free basis applied to the rewritten presentation before
/// simplification. Applying `forward` then `inverse` must give back the
/// original relators; `verify` checks that round trip.
#[derive(Clone, Debug)]
pub enum BasisChange {
    /// Every generator goes to its own inverse.
    InvertGenerators,
    Map { forward: Vec<(String, String)>, inverse: Vec<(String, String)> },
}

/// Consistency checks pinned per recipe, beyond index and final match.
#[derive(Clone, Debug)]
enum Check {
    /// The rewritten relators are exactly these words, in this order.
    RawRelators(Vec<String>),
    /// Deduplication leaves exactly one relator.
    SingleRelator,
    /// Every nonempty conjugate image is a cyclic rotation of the first.
    MutualRotations,
    /// The first rewritten relator is a cyclic rotation of this word.
    RotationOf(String),
    /// The simplified presentation reads back as a star with this many
    /// leaves, all edges plain.
    StarLeaves(usize),
    /// The simplified presentation reads back as a graph containing an
    /// induced four-cycle.
    InducedSquare,
}

impl Check {
    fn label(&self) -> String {
        match self {
            Check::RawRelators(_) => "rewritten relators exactly as derived".to_string(),
            Check::SingleRelator => "images collapse to a single relator".to_string(),
            Check::MutualRotations => {
                "conjugate images are rotations of the first".to_string()
            }
            Check::RotationOf(w) => format!("relator is a rotation of {w}"),
            Check::StarLeaves(k) => format!("defining graph is a star with {k} leaves"),
            Check::InducedSquare => "defining graph has an induced four-cycle".to_string(),
        }
    }

    /// Runs against the raw rewriting output; graph-stage checks defer.
    fn run_raw(&self, pipeline: &SubgroupPresentation) -> Option<bool> {
        let p = &pipeline.presentation;
        match self {
            Check::RawRelators(texts) => {
                let mut expected = Vec::new();
                for t in texts {
                    match parse_word(t, p.alphabet()) {
                        Ok(w) => expected.push(w),
                        Err(_) => return Some(false),
                    }
                }
                Some(p.relators() == expected.as_slice())
            }
            Check::SingleRelator => Some(p.relator_count() == 1),
            Check::MutualRotations => {
                let images: Vec<&Word> = pipeline
                    .rewrites
                    .iter()
                    .map(|r| &r.image)
                    .filter(|w| !w.is_empty())
                    .collect();
                let Some(first) = images.first() else { return Some(true) };
                let rotations = first.cyclically_reduce().0.rotations();
                Some(images.iter().all(|w| rotations.contains(&w.cyclically_reduce().0)))
            }
            Check::RotationOf(text) => {
                let Ok(w) = parse_word(text, p.alphabet()) else { return Some(false) };
                let rotations = w.cyclically_reduce().0.rotations();
                Some(p.relators().first().is_some_and(|r| rotations.contains(r)))
            }
            Check::StarLeaves(_) | Check::InducedSquare => None,
        }
    }

    /// Runs against the simplified presentation; raw-stage checks defer.
    fn run_simplified(&self, simplified: &Presentation) -> Option<bool> {
        match self {
            Check::StarLeaves(k) => Some(
                detect_raag(simplified)
                    .ok()
                    .and_then(|g| g.star_leaf_count())
                    .is_some_and(|leaves| leaves == *k),
            ),
            Check::InducedSquare => Some(
                detect_raag(simplified).ok().is_some_and(|g| !g.is_c4_free()),
            ),
            _ => None,
        }
    }
}

/// One fully specified subgroup computation: ambient group, subgroup
/// generators, the index the enumeration must confirm, and the target the
/// simplified presentation must match.
#[derive(Clone, Debug)]
pub struct SubgroupRecipe {
    pub id: RecipeId,
    pub params: Vec<i64>,
    pub label: String,
    pub ambient_label: String,
    pub ambient: Presentation,
    pub generators: Vec<Word>,
    pub expected_index: usize,
    pub target_label: String,
    pub target: Presentation,
    pub basis_change: Option<BasisChange>,
    /// Hand-pinned cleanup applied only if greedy simplification stalls.
    pub script: Option<Vec<TietzeMove>>,
    checks: Vec<Check>,
}

/// Builds the recipe for a worked computation, validating parameters
/// against the range the computation is stated for.
pub fn recipe(id: RecipeId, params: &[i64]) -> Result<SubgroupRecipe, CatalogError> {
    let bad = |expected: &'static str| CatalogError::BadRecipeParams {
        recipe: id.name(),
        expected,
    };
    let label = recipe_label(id, params);
    match id {
        RecipeId::Torus => {
            let (m, n) = two(params).ok_or_else(|| bad("m, n >= 2"))?;
            if m < 2 || n < 2 {
                return Err(bad("m, n >= 2"));
            }
            let spec = FamilySpec::new(Family::TorusKnot, [m, n]);
            let ambient = build_family(&spec)?;
            let a = GeneratorId(0);
            let b = GeneratorId(1);
            let mut generators = vec![Word::generator_power(a, m)];
            for i in 0..m {
                for j in 0..n {
                    generators.push(commutator(
                        &Word::generator_power(a, i),
                        &Word::generator_power(b, j),
                    ));
                }
            }
            let leaves = ((m - 1) * (n - 1)) as usize;
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: spec.label(),
                ambient,
                generators,
                expected_index: (m * n) as usize,
                target_label: format!("A(S_{leaves})"),
                target: build_bgamma(&make_star(leaves, 1)),
                basis_change: None,
                script: None,
                checks: vec![Check::StarLeaves(leaves)],
            })
        }
        RecipeId::Mt => {
            let (m, n) = two(params).ok_or_else(|| bad("m, n >= 1"))?;
            if m < 1 || n < 1 {
                return Err(bad("m, n >= 1"));
            }
            let spec = FamilySpec::new(Family::Moldavanskii, [m, n]);
            let ambient = build_family(&spec)?;
            let a = GeneratorId(0);
            let b = GeneratorId(1);
            let mut generators = vec![Word::generator_power(a, m)];
            for i in 0..m {
                generators
                    .push(Word::generator(b).conjugated_by(&Word::generator_power(a, i)));
            }
            let expected: Vec<String> =
                (0..m).map(|i| format!("[s_{m}_a, s_{}_b^{n}]", i + 1)).collect();
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: spec.label(),
                ambient,
                generators,
                expected_index: m as usize,
                target_label: format!("B(S_{{{m},{n}}})"),
                target: build_bgamma(&make_star(m as usize, n)),
                basis_change: None,
                script: None,
                checks: vec![Check::RawRelators(expected)],
            })
        }
        RecipeId::Starbs => {
            let (k, l) = two(params).ok_or_else(|| bad("k, l >= 2"))?;
            if k < 2 || l < 2 {
                return Err(bad("k, l >= 2"));
            }
            let star = make_star(k as usize, l);
            let ambient = build_bgamma(&star);
            let xk = GeneratorId(k as usize);
            let mut generators = vec![Word::generator_power(xk, l)];
            for j in 0..k {
                for i in 0..l {
                    generators.push(
                        Word::generator(GeneratorId(j as usize))
                            .conjugated_by(&Word::generator_power(xk, i)),
                    );
                }
            }
            let mut expected = Vec::new();
            for i in 0..l {
                for e in 1..=k {
                    expected.push(if e < k {
                        format!("[s_{}_x0, s_{}_x{e}^{l}]", i + 1, i + 1)
                    } else {
                        format!("[s_{}_x0, s_{l}_x{k}]", i + 1)
                    });
                }
            }
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: format!("B(S_{{{k},{l}}})"),
                ambient,
                generators,
                expected_index: l as usize,
                target_label: format!("B(bristled star {k},{l})"),
                target: build_bgamma(&make_bristled(k as usize, l)),
                basis_change: None,
                script: None,
                checks: vec![Check::RawRelators(expected)],
            })
        }
        RecipeId::Gamma1 => {
            if !params.is_empty() {
                return Err(bad("no parameters"));
            }
            let ambient = build_bgamma(&gamma1_graph());
            let generators = ["w0", "w2", "w1^2", "w1*w0*w1^-1", "w1*w2*w1^-1"]
                .iter()
                .map(|t| parse_word(t, ambient.alphabet()))
                .collect::<Result<Vec<_>, _>>()?;
            let expected = vec![
                "[s_1_w0, s_2_w1]".to_string(),
                "[s_1_w0, s_1_w2]".to_string(),
                "[s_2_w0, s_2_w1]".to_string(),
                "[s_2_w0, s_2_w2]".to_string(),
            ];
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: "B(gamma1)".to_string(),
                ambient,
                generators,
                expected_index: 2,
                target_label: "A(P5)".to_string(),
                target: build_bgamma(&path_graph(5)),
                basis_change: None,
                script: None,
                checks: vec![Check::RawRelators(expected)],
            })
        }
        RecipeId::Chordal => {
            if !params.is_empty() {
                return Err(bad("no parameters"));
            }
            let ambient = build_bgamma(&gamma2_graph());
            let generators = ["w1", "w2^2", "w3", "w0", "w2*w0*w2^-1"]
                .iter()
                .map(|t| parse_word(t, ambient.alphabet()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: "B(gamma2)".to_string(),
                ambient,
                generators,
                expected_index: 2,
                target_label: "A(hub and square)".to_string(),
                target: build_bgamma(&hub_and_square_graph()),
                basis_change: None,
                script: None,
                checks: vec![Check::InducedSquare],
            })
        }
        RecipeId::Sqtorus => {
            let m = one(params).ok_or_else(|| bad("m >= 1"))?;
            if m < 1 {
                return Err(bad("m >= 1"));
            }
            let spec = FamilySpec::new(Family::InflatedTorus, [2, 2 * m + 1, 2]);
            let ambient = build_family(&spec)?;
            let generators = ["a^2", "a*b", "a*b^-1"]
                .iter()
                .map(|t| parse_word(t, ambient.alphabet()))
                .collect::<Result<Vec<_>, _>>()?;
            // With alpha = s_1_b, beta = s_2_b, gamma = s_2_a the image of
            // the defining relator is gamma (alpha beta)^m alpha gamma beta
            // (alpha beta)^m; sending alpha to alpha beta^-1 and gamma to
            // beta gamma turns it into the h_group relator.
            let pinned = format!(
                "s_2_a * (s_1_b*s_2_b)^{m} * s_1_b * s_2_a * s_2_b * (s_1_b*s_2_b)^{m}"
            );
            let forward = vec![
                ("s_1_b".to_string(), "s_1_b*s_2_b^-1".to_string()),
                ("s_2_a".to_string(), "s_2_b*s_2_a".to_string()),
            ];
            let inverse = vec![
                ("s_1_b".to_string(), "s_1_b*s_2_b".to_string()),
                ("s_2_a".to_string(), "s_2_b^-1*s_2_a".to_string()),
            ];
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: spec.label(),
                ambient,
                generators,
                expected_index: 2,
                target_label: format!("h_group({m})"),
                target: build_family(&FamilySpec::new(Family::HGroup, [m]))?,
                basis_change: Some(BasisChange::Map { forward, inverse }),
                script: None,
                checks: vec![
                    Check::SingleRelator,
                    Check::MutualRotations,
                    Check::RotationOf(pinned),
                ],
            })
        }
        RecipeId::Newman => {
            let (p, q) = two(params).ok_or_else(|| bad("p >= 2, q >= 1"))?;
            if p < 2 || q < 1 {
                return Err(bad("p >= 2, q >= 1"));
            }
            let spec = FamilySpec::new(Family::InflatedBaumslagSolitar, [1, p * q, p]);
            let ambient = build_family(&spec)?;
            let a = GeneratorId(0);
            let b = GeneratorId(1);
            let mut generators = vec![Word::generator_power(a, p)];
            for i in 0..p {
                generators
                    .push(Word::generator(b).conjugated_by(&Word::generator_power(a, i)));
            }
            // Image of the defining relator, with alpha = s_p_a and
            // beta_i = s_{i+1}_b: the product over j < p-1 of
            // beta_j beta_{j+1}^-1 alpha^-q, then beta_{p-1} alpha
            // beta_0^-1 alpha^-q.
            let mut parts: Vec<String> = (0..p - 1)
                .map(|j| format!("s_{}_b * s_{}_b^-1 * s_{p}_a^-{q}", j + 1, j + 2))
                .collect();
            parts.push(format!("s_{p}_b * s_{p}_a * s_1_b^-1 * s_{p}_a^-{q}"));
            Ok(SubgroupRecipe {
                id,
                params: params.to_vec(),
                label,
                ambient_label: spec.label(),
                ambient,
                generators,
                expected_index: p as usize,
                target_label: format!("newman({p},{q})"),
                target: build_family(&FamilySpec::new(Family::Newman, [p, q]))?,
                basis_change: Some(BasisChange::InvertGenerators),
                script: None,
                checks: vec![
                    Check::SingleRelator,
                    Check::MutualRotations,
                    Check::RotationOf(parts.join(" * ")),
                ],
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Cap on cosets ever defined during enumeration.
    pub max_cosets: usize,
    /// Step budget shared by simplification and isomorphism search.
    pub budget: u64,
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_cosets: 100_000, budget: 10_000, parallel: true }
    }
}

/// Everything `verify` established about one recipe, including the
/// intermediate artifacts the conclusion rests on.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub recipe: String,
    pub ambient_label: String,
    pub ambient: Presentation,
    pub target_label: String,
    pub expected_index: usize,
    pub computed_index: usize,
    pub index_ok: bool,
    /// Coset table, transversal, Schreier generators, conjugate images,
    /// and the presentation they assemble into.
    pub pipeline: SubgroupPresentation,
    pub after_basis_change: Option<Presentation>,
    pub simplified: Presentation,
    pub simplify_steps: u64,
    pub simplify_fixpoint: bool,
    pub simplify_log: Vec<String>,
    pub used_script: bool,
    pub target: Presentation,
    pub match_report: MatchReport,
    pub checks: Vec<(String, bool)>,
    /// Abelian invariants at every stage, target last; they must all agree.
    pub abelianization_stages: Vec<(String, AbelianInvariants)>,
    pub abelianization_ok: bool,
    pub verified: bool,
}

impl VerificationReport {
    pub fn verdict(&self) -> &'static str {
        if self.verified {
            "verified"
        } else {
            "failed"
        }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "recipe": self.recipe,
            "verdict": self.verdict(),
            "ambient": self.ambient_label,
            "ambient_presentation": self.ambient.to_string(),
            "index": self.computed_index,
            "expected_index": self.expected_index,
            "index_ok": self.index_ok,
            "subgroup_presentation": self.pipeline.presentation.to_string(),
            "after_basis_change": self.after_basis_change.as_ref().map(ToString::to_string),
            "simplified": self.simplified.to_string(),
            "simplify_steps": self.simplify_steps,
            "used_script": self.used_script,
            "target": self.target_label,
            "target_presentation": self.target.to_string(),
            "matched": self.match_report.matched,
            "relabeling": self.match_report.relabeling,
            "checks": self.checks.iter()
                .map(|(name, ok)| json!({"check": name, "ok": ok}))
                .collect::<Vec<_>>(),
            "abelianization": {
                "stages": self.abelianization_stages.iter()
                    .map(|(stage, inv)| json!({"stage": stage, "invariants": inv.to_string()}))
                    .collect::<Vec<_>>(),
                "consistent": self.abelianization_ok,
            },
        })
    }

    /// Full transcript: every intermediate artifact, suitable for replaying
    /// or auditing the run.
    pub fn trace_json_value(&self) -> Value {
        let mut v = self.to_json_value();
        let extra = json!({
            "pipeline": self.pipeline.to_json_value(),
            "simplify_log": self.simplify_log,
            "match_evidence": self.match_report.evidence,
        });
        let (Value::Object(map), Value::Object(extra)) = (&mut v, extra) else {
            unreachable!("both values are objects");
        };
        map.extend(extra);
        v
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "recipe: {}", self.recipe)?;
        writeln!(f, "ambient: {} = {}", self.ambient_label, self.ambient)?;
        writeln!(
            f,
            "index: {} (expected {}) {}",
            self.computed_index,
            self.expected_index,
            if self.index_ok { "ok" } else { "MISMATCH" }
        )?;
        writeln!(f, "subgroup presentation: {}", self.pipeline.presentation)?;
        if let Some(p) = &self.after_basis_change {
            writeln!(f, "after basis change: {p}")?;
        }
        writeln!(
            f,
            "simplified ({} steps{}): {}",
            self.simplify_steps,
            if self.used_script { ", scripted" } else { "" },
            self.simplified
        )?;
        writeln!(f, "target: {} = {}", self.target_label, self.target)?;
        match (&self.match_report.matched, &self.match_report.relabeling) {
            (true, Some(map)) => {
                let pairs: Vec<String> =
                    map.iter().map(|(from, to)| format!("{from} -> {to}")).collect();
                writeln!(f, "matched: yes ({})", pairs.join(", "))?;
            }
            (true, None) => writeln!(f, "matched: yes")?,
            (false, _) => writeln!(f, "matched: NO")?,
        }
        for (name, ok) in &self.checks {
            writeln!(f, "check: {name}: {}", if *ok { "ok" } else { "FAILED" })?;
        }
        let stages: Vec<String> = self
            .abelianization_stages
            .iter()
            .map(|(stage, inv)| format!("{stage} {inv}"))
            .collect();
        writeln!(
            f,
            "abelianization: {} ({})",
            if self.abelianization_ok { "consistent" } else { "INCONSISTENT" },
            stages.join(", ")
        )?;
        write!(f, "verdict: {}", self.verdict())
    }
}

fn apply_basis_change(
    p: &Presentation,
    change: &BasisChange,
    checks: &mut Vec<(String, bool)>,
) -> Result<Presentation, CatalogError> {
    let (forward, inverse) = match change {
        BasisChange::InvertGenerators => {
            let map: Vec<(String, String)> = p
                .alphabet()
                .names()
                .iter()
                .map(|n| (n.clone(), format!("{n}^-1")))
                .collect();
            (map.clone(), map)
        }
        BasisChange::Map { forward, inverse } => (forward.clone(), inverse.clone()),
    };
    let fwd_pairs: Vec<(&str, &str)> =
        forward.iter().map(|(g, w)| (g.as_str(), w.as_str())).collect();
    let changed = tietze::substitute(p, &fwd_pairs)?;
    let inv_pairs: Vec<(&str, &str)> =
        inverse.iter().map(|(g, w)| (g.as_str(), w.as_str())).collect();
    let back = tietze::substitute(&changed, &inv_pairs)?;
    checks.push(("basis change round trip".to_string(), back.same_relator_classes(p)));
    Ok(changed)
}

/// Replays one recipe end to end and reports what held. `verified` means
/// the enumeration confirmed the expected index, the simplified
/// presentation matched the target, every pinned check passed, and the
/// abelian invariants agreed at every stage.
pub fn verify_recipe(
    recipe: &SubgroupRecipe,
    options: &VerifyOptions,
) -> Result<VerificationReport, CatalogError> {
    let rewrite_options =
        RewriteOptions { max_cosets: options.max_cosets, parallel: options.parallel };
    let pipeline = subgroup_presentation(&recipe.ambient, &recipe.generators, rewrite_options)?;
    let computed_index = pipeline.index();
    let index_ok = computed_index == recipe.expected_index;

    let mut checks: Vec<(String, bool)> = Vec::new();
    for check in &recipe.checks {
        if let Some(ok) = check.run_raw(&pipeline) {
            checks.push((check.label(), ok));
        }
    }

    let raw = pipeline.presentation.clone();
    let mut stages = vec![("subgroup rewriting".to_string(), raw.abelianization())];

    let after_basis_change = match &recipe.basis_change {
        Some(change) => {
            let changed = apply_basis_change(&raw, change, &mut checks)?;
            stages.push(("basis change".to_string(), changed.abelianization()));
            Some(changed)
        }
        None => None,
    };

    let start = after_basis_change.clone().unwrap_or_else(|| raw.clone());
    let mut outcome = tietze::simplify(&start, options.budget);
    let mut match_report =
        presentations_match(&outcome.presentation, &recipe.target, options.budget);
    let mut used_script = false;
    if !match_report.matched {
        if let Some(script) = &recipe.script {
            let scripted = tietze::apply_script(&start, script)?;
            outcome = tietze::simplify(&scripted, options.budget);
            match_report =
                presentations_match(&outcome.presentation, &recipe.target, options.budget);
            used_script = true;
        }
    }
    let simplified = outcome.presentation;
    stages.push(("simplification".to_string(), simplified.abelianization()));
    stages.push(("target".to_string(), recipe.target.abelianization()));

    for check in &recipe.checks {
        if let Some(ok) = check.run_simplified(&simplified) {
            checks.push((check.label(), ok));
        }
    }

    let abelianization_ok = stages.windows(2).all(|w| w[0].1 == w[1].1);
    let verified = index_ok
        && match_report.matched
        && abelianization_ok
        && checks.iter().all(|(_, ok)| *ok);

    Ok(VerificationReport {
        recipe: recipe.label.clone(),
        ambient_label: recipe.ambient_label.clone(),
        ambient: recipe.ambient.clone(),
        target_label: recipe.target_label.clone(),
        expected_index: recipe.expected_index,
        computed_index,
        index_ok,
        pipeline,
        after_basis_change,
        simplified,
        simplify_steps: outcome.steps,
        simplify_fixpoint: outcome.reached_fixpoint,
        simplify_log: outcome.log,
        used_script,
        target: recipe.target.clone(),
        match_report,
        checks,
        abelianization_stages: stages,
        abelianization_ok,
        verified,
    })
}

pub fn verify(
    id: RecipeId,
    params: &[i64],
    options: &VerifyOptions,
) -> Result<VerificationReport, CatalogError> {
    let r = recipe(id, params)?;
    verify_recipe(&r, options)
}

/// The full grid of worked computations at the parameters they are
/// spot-checked at.
pub fn standard_grid() -> Vec<(RecipeId, Vec<i64>)> {
    let mut grid = Vec::new();
    for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        grid.push((RecipeId::Torus, vec![m, n]));
    }
    for m in 1..=3 {
        for n in 1..=3 {
            grid.push((RecipeId::Mt, vec![m, n]));
        }
    }
    for (k, l) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        grid.push((RecipeId::Starbs, vec![k, l]));
    }
    grid.push((RecipeId::Gamma1, vec![]));
    grid.push((RecipeId::Chordal, vec![]));
    for m in [1, 2] {
        grid.push((RecipeId::Sqtorus, vec![m]));
    }
    for (p, q) in [(2, 1), (2, 2), (3, 1)] {
        grid.push((RecipeId::Newman, vec![p, q]));
    }
    grid
}

/// Verifies the whole grid, in parallel when enabled, preserving order.
pub fn verify_all(
    options: &VerifyOptions,
) -> Vec<(String, Result<VerificationReport, CatalogError>)> {
    par::map_ordered(options.parallel, standard_grid(), |(id, params)| {
        (recipe_label(id, &params), verify(id, &params, options))
    })
}
