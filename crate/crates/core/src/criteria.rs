//! Hypothesis checkers for the two non-triviality lemmas on words of the form
//! `v · g^p · v'`, and a bounded exhaustive search over reduced products.
//!
//! One-family mode: every word carries `g^p`; the outer parts `v`, `v'` use
//! single letters `g^{±1}` separated by powers of the other generator `h`.
//! Two-family mode: `A` carries `g^p`, `B` carries `h^p`, and the outer parts
//! strictly alternate single letters of both generators.
//! In both modes the outer lengths must grow strictly along each family.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::freegroup::{generator_name, Sign, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FamilyTag {
    A,
    B,
}

/// `v · g^p · v'` split of one word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub prefix: Word,
    pub suffix: Word,
    /// Letter offset where the chosen cube starts.
    pub cube_at: usize,
    /// Letter offsets of every maximal `g^p` run in the word.
    pub candidates: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaFamily {
    pub words: Vec<Word>,
    pub cube_generator: usize,
    pub p: u32,
    pub decompositions: Vec<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    EmptyFamily { family: FamilyTag },
    PowerTooSmall { p: u32 },
    NotRankTwo { family: FamilyTag, word: usize, rank: usize },
    MissingCube { family: FamilyTag, word: usize, cube: String },
    BadShape {
        family: FamilyTag,
        word: usize,
        candidates: Vec<usize>,
        reason: String,
    },
    NotIncreasing {
        family: FamilyTag,
        word: usize,
        prefix_lengths: (usize, usize),
        suffix_lengths: (usize, usize),
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EmptyFamily { family } => write!(f, "family {family:?} is empty"),
            Violation::PowerTooSmall { p } => write!(f, "power p = {p} is below 3"),
            Violation::NotRankTwo { family, word, rank } => {
                write!(f, "{family:?}[{word}] has rank {rank}, expected 2")
            }
            Violation::MissingCube { family, word, cube } => {
                write!(f, "{family:?}[{word}] contains no maximal {cube} block")
            }
            Violation::BadShape { family, word, candidates, reason } => {
                write!(f, "{family:?}[{word}]: no valid split at cube offsets {candidates:?} ({reason})")
            }
            Violation::NotIncreasing {
                family,
                word,
                prefix_lengths,
                suffix_lengths,
            } => write!(
                f,
                "{family:?}[{word}]: outer lengths must grow, prefix {} -> {}, suffix {} -> {}",
                prefix_lengths.0, prefix_lengths.1, suffix_lengths.0, suffix_lengths.1
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `g^{±1}` singletons between powers of the other generator.
    SingleCubeLetters,
    /// Every syllable is a single letter.
    StrictAlternation,
}

fn shape_problem(part: &Word, cube: usize, shape: Shape) -> Option<String> {
    let syl = part.syllables();
    for s in &syl {
        let single_required = match shape {
            Shape::SingleCubeLetters => s.generator == cube,
            Shape::StrictAlternation => true,
        };
        if single_required && s.exponent.abs() != 1 {
            return Some(format!(
                "`{}` contains {}^{}",
                part,
                generator_name(s.generator, 2, false),
                s.exponent
            ));
        }
    }
    None
}

/// Every maximal run `g^p` of `word`, as letter offsets.
fn cube_candidates(word: &Word, cube: usize, p: u32) -> Vec<usize> {
    let mut offset = 0;
    let mut out = Vec::new();
    for s in word.syllables() {
        if s.generator == cube && s.exponent == i64::from(p) {
            out.push(offset);
        }
        offset += s.exponent.unsigned_abs() as usize;
    }
    out
}

fn check_family(
    words: &[Word],
    family: FamilyTag,
    cube: usize,
    p: u32,
    shape: Shape,
) -> Result<LemmaFamily, Violation> {
    if words.is_empty() {
        return Err(Violation::EmptyFamily { family });
    }
    if p < 3 {
        return Err(Violation::PowerTooSmall { p });
    }
    let other = 1 - cube;
    let mut options: Vec<Vec<Decomposition>> = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        if w.rank() != 2 {
            return Err(Violation::NotRankTwo { family, word: i, rank: w.rank() });
        }
        let candidates = cube_candidates(w, cube, p);
        if candidates.is_empty() {
            return Err(Violation::MissingCube {
                family,
                word: i,
                cube: format!("{}^{p}", generator_name(cube, 2, false)),
            });
        }
        let mut valid = Vec::new();
        let mut reasons = Vec::new();
        for &at in &candidates {
            let prefix = w.slice(0..at);
            let suffix = w.slice(at + p as usize..w.len());
            let mut problem = shape_problem(&prefix, cube, shape).or_else(|| shape_problem(&suffix, cube, shape));
            if problem.is_none() {
                if prefix.letters().last().is_some_and(|l| l.generator != other) {
                    problem = Some("prefix must end with the other generator".into());
                } else if suffix.letters().first().is_some_and(|l| l.generator != other) {
                    problem = Some("suffix must start with the other generator".into());
                }
            }
            match problem {
                Some(r) => reasons.push(format!("offset {at}: {r}")),
                None => valid.push(Decomposition {
                    prefix,
                    suffix,
                    cube_at: at,
                    candidates: candidates.clone(),
                }),
            }
        }
        if valid.is_empty() {
            return Err(Violation::BadShape {
                family,
                word: i,
                candidates,
                reason: reasons.join("; "),
            });
        }
        options.push(valid);
    }

    let mut chosen = Vec::with_capacity(words.len());
    if !choose_increasing(&options, 0, None, &mut chosen) {
        return Err(first_growth_failure(&options, family));
    }
    Ok(LemmaFamily {
        words: words.to_vec(),
        cube_generator: cube,
        p,
        decompositions: chosen.into_iter().zip(&options).map(|(c, o)| o[c].clone()).collect(),
    })
}

fn lengths(d: &Decomposition) -> (usize, usize) {
    (d.prefix.len(), d.suffix.len())
}

/// Depth-first choice of one split per word with strictly growing outer
/// lengths; earliest candidates are preferred.
fn choose_increasing(
    options: &[Vec<Decomposition>],
    i: usize,
    prev: Option<(usize, usize)>,
    chosen: &mut Vec<usize>,
) -> bool {
    if i == options.len() {
        return true;
    }
    for (c, d) in options[i].iter().enumerate() {
        let (lv, lw) = lengths(d);
        if prev.is_none_or(|(pv, pw)| lv > pv && lw > pw) {
            chosen.push(c);
            if choose_increasing(options, i + 1, Some((lv, lw)), chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn first_growth_failure(options: &[Vec<Decomposition>], family: FamilyTag) -> Violation {
    let mut prev = lengths(&options[0][0]);
    for (i, opts) in options.iter().enumerate().skip(1) {
        let ok = opts.iter().find(|d| {
            let (lv, lw) = lengths(d);
            lv > prev.0 && lw > prev.1
        });
        match ok {
            Some(d) => prev = lengths(d),
            None => {
                let cur = lengths(&opts[0]);
                return Violation::NotIncreasing {
                    family,
                    word: i,
                    prefix_lengths: (prev.0, cur.0),
                    suffix_lengths: (prev.1, cur.1),
                };
            }
        }
    }
    unreachable!("a greedy pass succeeds whenever the search does")
}

/// One-family hypotheses: every word is `v_i · g^p · v_i'`.
pub fn check_hypotheses_a(words: &[Word], cube_generator: usize, p: u32) -> Result<LemmaFamily, Violation> {
    check_family(words, FamilyTag::A, cube_generator, p, Shape::SingleCubeLetters)
}

/// Two-family hypotheses: `A` words carry `g^p`, `B` words carry `h^p`.
pub fn check_hypotheses_ab(
    words_a: &[Word],
    words_b: &[Word],
    cube_generator_a: usize,
    p: u32,
) -> Result<(LemmaFamily, LemmaFamily), Violation> {
    let a = check_family(words_a, FamilyTag::A, cube_generator_a, p, Shape::StrictAlternation)?;
    let b = check_family(words_b, FamilyTag::B, 1 - cube_generator_a, p, Shape::StrictAlternation)?;
    Ok((a, b))
}

/// Which words a product ranges over.
#[derive(Debug, Clone, Copy)]
pub enum ProductFamilies<'a> {
    One(&'a [Word]),
    Two(&'a [Word], &'a [Word]),
}

impl ProductFamilies<'_> {
    fn tagged(&self) -> Vec<(FamilyTag, usize, &Word)> {
        match *self {
            ProductFamilies::One(a) => a.iter().enumerate().map(|(i, w)| (FamilyTag::A, i, w)).collect(),
            ProductFamilies::Two(a, b) => a
                .iter()
                .enumerate()
                .map(|(i, w)| (FamilyTag::A, i, w))
                .chain(b.iter().enumerate().map(|(i, w)| (FamilyTag::B, i, w)))
                .collect(),
        }
    }

    pub fn bound(&self) -> LengthBound {
        match self {
            ProductFamilies::One(_) => LengthBound::AtLeastS,
            ProductFamilies::Two(..) => LengthBound::GreaterThanS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductSyllable {
    pub family: FamilyTag,
    pub index: usize,
    pub sign: Sign,
}

impl Serialize for ProductSyllable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ProductSyllable", 3)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("index", &self.index)?;
        st.serialize_field("sign", &self.sign.as_i64())?;
        st.end()
    }
}

/// A product `w_1 ⋯ w_s` of family words and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ProductExpression(pub Vec<ProductSyllable>);

impl std::fmt::Display for ProductExpression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| {
                let inv = if s.sign == Sign::Minus { "^-1" } else { "" };
                format!("{:?}{}{inv}", s.family, s.index + 1)
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthBound {
    AtLeastS,
    GreaterThanS,
}

impl LengthBound {
    pub fn holds(self, len: usize, s: usize) -> bool {
        match self {
            LengthBound::AtLeastS => len >= s,
            LengthBound::GreaterThanS => len > s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationVerdict {
    pub s_max: usize,
    pub expressions_checked: u64,
    /// Entry `s - 1` is the shortest reduced product with `s` factors.
    pub min_reduced_length_by_s: Vec<usize>,
    pub counterexample: Option<ProductExpression>,
    pub length_bound: LengthBound,
    pub bound_holds: bool,
}

impl EnumerationVerdict {
    pub fn no_trivial_product(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("enumeration needs {required} expressions, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("no words to multiply")]
    Empty,
    #[error("s_max must be at least 1")]
    ZeroLength,
}

/// Number of reduced products with `1..=s_max` factors over `m` words.
pub fn expression_count(m: usize, s_max: usize) -> Option<u64> {
    let first = 2 * m as u64;
    let rest = first.checked_sub(1)?;
    let mut total: u64 = 0;
    let mut level = first;
    for s in 1..=s_max {
        if s > 1 {
            level = level.checked_mul(rest)?;
        }
        total = total.checked_add(level)?;
    }
    Some(total)
}

struct SubtreeResult {
    checked: u64,
    min_len: Vec<usize>,
    first_trivial: Vec<Option<Vec<usize>>>,
}

/// Enumerate every product with `1..=s_max` factors and no adjacent pair
/// `w · w⁻¹`, in breadth-first-by-length, lexicographic order.
pub fn enumerate_products(
    families: ProductFamilies<'_>,
    s_max: usize,
    budget: u64,
) -> Result<EnumerationVerdict, EnumerationError> {
    let tagged = families.tagged();
    if tagged.is_empty() {
        return Err(EnumerationError::Empty);
    }
    if s_max == 0 {
        return Err(EnumerationError::ZeroLength);
    }
    let required = expression_count(tagged.len(), s_max).unwrap_or(u64::MAX);
    if required > budget {
        return Err(EnumerationError::BudgetExceeded { required, budget });
    }

    // Syllable alphabet in lexicographic order: (family, index, +) < (.., -).
    let mut alphabet: Vec<(ProductSyllable, Word)> = Vec::with_capacity(2 * tagged.len());
    for (family, index, w) in &tagged {
        alphabet.push((ProductSyllable { family: *family, index: *index, sign: Sign::Plus }, (*w).clone()));
        alphabet.push((ProductSyllable { family: *family, index: *index, sign: Sign::Minus }, w.inverse()));
    }
    let inverse_of = |i: usize| i ^ 1;

    let results: Vec<SubtreeResult> = (0..alphabet.len())
        .into_par_iter()
        .map(|first| {
            let mut r = SubtreeResult {
                checked: 0,
                min_len: vec![usize::MAX; s_max],
                first_trivial: vec![None; s_max],
            };
            let mut path = vec![first];
            dfs(&alphabet, &inverse_of, s_max, &alphabet[first].1, &mut path, &mut r);
            r
        })
        .collect();

    let mut checked = 0;
    let mut min_len = vec![usize::MAX; s_max];
    let mut first_trivial: Option<Vec<usize>> = None;
    for depth in 0..s_max {
        for r in &results {
            min_len[depth] = min_len[depth].min(r.min_len[depth]);
            if first_trivial.is_none() {
                first_trivial = r.first_trivial[depth].clone();
            }
        }
    }
    for r in &results {
        checked += r.checked;
    }
    let bound = families.bound();
    let bound_holds = min_len.iter().enumerate().all(|(d, &l)| bound.holds(l, d + 1));
    Ok(EnumerationVerdict {
        s_max,
        expressions_checked: checked,
        min_reduced_length_by_s: min_len,
        counterexample: first_trivial
            .map(|path| ProductExpression(path.into_iter().map(|i| alphabet[i].0).collect())),
        length_bound: bound,
        bound_holds,
    })
}

fn dfs(
    alphabet: &[(ProductSyllable, Word)],
    inverse_of: &impl Fn(usize) -> usize,
    s_max: usize,
    product: &Word,
    path: &mut Vec<usize>,
    r: &mut SubtreeResult,
) {
    let depth = path.len() - 1;
    r.checked += 1;
    r.min_len[depth] = r.min_len[depth].min(product.len());
    if product.is_identity() && r.first_trivial[depth].is_none() {
        r.first_trivial[depth] = Some(path.clone());
    }
    if path.len() == s_max {
        return;
    }
    let last = *path.last().unwrap();
    for next in 0..alphabet.len() {
        if next == inverse_of(last) {
            continue;
        }
        let p = product.multiply(&alphabet[next].1).expect("family words share a rank");
        path.push(next);
        dfs(alphabet, inverse_of, s_max, &p, path, r);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::w2;

    const Y: usize = 1;
    const X: usize = 0;

    fn ws(texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| w2(t)).collect()
    }

    #[test]
    fn one_family_valid() {
        let fam = check_hypotheses_a(&ws(&["y^3", "Y X y^3 x"]), Y, 3).unwrap();
        assert!(fam.decompositions[0].prefix.is_identity());
        assert!(fam.decompositions[0].suffix.is_identity());
        assert_eq!(fam.decompositions[1].prefix, w2("Y X"));
        assert_eq!(fam.decompositions[1].suffix, w2("x"));
    }

    #[test]
    fn one_family_equal_lengths() {
        let err = check_hypotheses_a(&ws(&["y^3", "y^3"]), Y, 3).unwrap_err();
        assert!(matches!(err, Violation::NotIncreasing { word: 1, .. }), "{err:?}");
    }

    #[test]
    fn one_family_missing_cube() {
        let err = check_hypotheses_a(&ws(&["y^3", "x y^2 x"]), Y, 3).unwrap_err();
        assert!(matches!(err, Violation::MissingCube { word: 1, .. }), "{err:?}");
    }

    #[test]
    fn one_family_rejects_repeated_cube_letter() {
        // y^2 in the prefix breaks the single-letter alternation
        let err = check_hypotheses_a(&ws(&["y^3", "y^2 x y^3 x"]), Y, 3).unwrap_err();
        assert!(matches!(err, Violation::BadShape { word: 1, .. }), "{err:?}");
    }

    #[test]
    fn ambiguous_cube_reports_every_candidate() {
        // two y^3 blocks: whichever is chosen, the other sits in v or v'
        let words = ws(&["x y^3 x", "x y^3 x Y x y^3 x^2"]);
        match check_hypotheses_a(&words, Y, 3).unwrap_err() {
            Violation::BadShape { word, candidates, reason, .. } => {
                assert_eq!(word, 1);
                assert_eq!(candidates, vec![1, 7]);
                assert!(reason.contains("offset 1") && reason.contains("offset 7"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn growth_search_backtracks() {
        // a y^-3 block is not a candidate, so each word has a single split
        let words = ws(&["x y^3", "x^2 y^3 x", "Y x^2 y^3 x^2"]);
        let fam = check_hypotheses_a(&words, Y, 3).unwrap();
        let lens: Vec<(usize, usize)> =
            fam.decompositions.iter().map(|d| (d.prefix.len(), d.suffix.len())).collect();
        assert_eq!(lens, vec![(1, 0), (2, 1), (3, 2)]);
    }

    #[test]
    fn power_below_three() {
        assert_eq!(
            check_hypotheses_a(&ws(&["y^2"]), Y, 2).unwrap_err(),
            Violation::PowerTooSmall { p: 2 }
        );
    }

    #[test]
    fn two_family_valid() {
        let (a, b) = check_hypotheses_ab(&ws(&["x^3", "y x^3 y"]), &ws(&["y^3", "x y^3 x"]), X, 3).unwrap();
        assert_eq!(a.cube_generator, X);
        assert_eq!(b.cube_generator, Y);
    }

    #[test]
    fn two_family_same_cube() {
        let err = check_hypotheses_ab(&ws(&["x^3"]), &ws(&["x^3"]), X, 3).unwrap_err();
        assert!(matches!(err, Violation::MissingCube { family: FamilyTag::B, .. }), "{err:?}");
    }

    #[test]
    fn two_family_requires_single_letters() {
        let err = check_hypotheses_ab(&ws(&["x^3", "y^2 x^3 y"]), &ws(&["y^3"]), X, 3).unwrap_err();
        assert!(matches!(err, Violation::BadShape { family: FamilyTag::A, word: 1, .. }), "{err:?}");
    }

    #[test]
    fn single_generator_family() {
        let words = ws(&["x"]);
        let v = enumerate_products(ProductFamilies::One(&words), 2, 1000).unwrap();
        assert!(v.no_trivial_product());
        assert_eq!(v.expressions_checked, 4);
        assert_eq!(v.min_reduced_length_by_s, vec![1, 2]);
    }

    #[test]
    fn counterexample_is_found() {
        let words = ws(&["x y", "Y X x y x y"]);
        let v = enumerate_products(ProductFamilies::One(&words), 3, 1000).unwrap();
        let ce = v.counterexample.expect("w1 w2^-1 collapses");
        assert_eq!(ce.to_string(), "A1 A2^-1");
        assert_eq!(v.min_reduced_length_by_s[1], 0);
    }

    #[test]
    fn counterexample_prefers_shortest() {
        // x x x2^-1 at s = 3 and nothing shorter
        let words = ws(&["x", "x^2"]);
        let v = enumerate_products(ProductFamilies::One(&words), 3, 1000).unwrap();
        assert_eq!(v.counterexample.unwrap().to_string(), "A1 A1 A2^-1");
    }

    #[test]
    fn budget_is_enforced() {
        let words = ws(&["x", "y"]);
        assert_eq!(expression_count(2, 3), Some(4 + 12 + 36));
        assert_eq!(
            enumerate_products(ProductFamilies::One(&words), 3, 51),
            Err(EnumerationError::BudgetExceeded { required: 52, budget: 51 })
        );
        assert!(enumerate_products(ProductFamilies::One(&words), 3, 52).is_ok());
    }

    #[test]
    fn lemma_bound_on_small_family() {
        let words = ws(&["y^3", "Y X y^3 x", "Y X Y X y^3 x^2"]);
        let v = enumerate_products(ProductFamilies::One(&words), 3, 1_000_000).unwrap();
        assert!(v.no_trivial_product());
        assert!(v.bound_holds);
    }

    #[test]
    fn violation_json() {
        let v = Violation::MissingCube { family: FamilyTag::A, word: 1, cube: "y^3".into() };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"violation":"missing_cube","family":"A","word":1,"cube":"y^3"}"#
        );
    }
}
