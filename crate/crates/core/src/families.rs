//! Builders for the five disk-with-bands families in the genus-two handlebody.
//!
//! For each [`FamilyInstance`] this module produces the images of the band
//! generators in `F(x, y)`, a [`RibbonSurface`] realising the surface, and the
//! closed-form genus/boundary counts the surface must have.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::{w2, Word};
use crate::ribbon::{EndId, Parity, RibbonError, RibbonSurface, SurfaceInvariants};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    NonsepOrientable,
    NonsepOrientableGenus0,
    NonOrientable,
    Separating,
    SeparatingGenus0,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::NonsepOrientable,
        Family::NonsepOrientableGenus0,
        Family::NonOrientable,
        Family::Separating,
        Family::SeparatingGenus0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::NonsepOrientable => "NonsepOrientable",
            Family::NonsepOrientableGenus0 => "NonsepOrientableGenus0",
            Family::NonOrientable => "NonOrientable",
            Family::Separating => "Separating",
            Family::SeparatingGenus0 => "SeparatingGenus0",
        }
    }

    pub fn is_separating(self) -> bool {
        matches!(self, Family::Separating | Family::SeparatingGenus0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().to_ascii_lowercase() == key)
            .ok_or_else(|| FamilyError::InvalidInstance(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub primed: bool,
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} k={}", self.family, self.n, self.k)?;
        if self.primed {
            f.write_str(" primed")?;
        }
        Ok(())
    }
}

impl FamilyInstance {
    pub fn new(family: Family, n: usize, k: usize, primed: bool) -> Self {
        FamilyInstance { family, n, k, primed }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        use Family::*;
        let FamilyInstance { family, n, k, primed } = *self;
        let bad = |why: String| Err(FamilyError::InvalidInstance(format!("{self}: {why}")));
        if primed && !family.is_separating() {
            return bad("primed surfaces exist only for the separating families".into());
        }
        match family {
            NonsepOrientable => {
                if k < 2 || k % 2 != 0 {
                    return bad("k must be even and at least 2".into());
                }
                // With n = k - 1 the count formula asks for zero boundary
                // curves, which no disk-with-bands surface has.
                if n < k {
                    return bad(format!("n must be at least k = {k}"));
                }
            }
            NonsepOrientableGenus0 | SeparatingGenus0 => {
                if k != 0 {
                    return bad("k must be 0".into());
                }
                if n < 1 {
                    return bad("n must be at least 1".into());
                }
            }
            NonOrientable => {
                if k < 1 {
                    return bad("k must be at least 1".into());
                }
                if n < k {
                    return bad(format!("n must be at least k = {k}"));
                }
            }
            Separating => {
                if k < 2 {
                    return bad("k must be at least 2".into());
                }
                if n + 1 < k {
                    return bad(format!("n must be at least k - 1 = {}", k - 1));
                }
            }
        }
        Ok(())
    }

    /// Number of bands, which is also the free rank of the surface group.
    pub fn band_count(&self) -> usize {
        if self.family.is_separating() {
            2 * self.n + usize::from(self.primed)
        } else {
            self.n
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub orientable: bool,
    pub genus_or_crosscap: usize,
    pub boundary: usize,
}

impl ExpectedCounts {
    pub fn matches(&self, inv: &SurfaceInvariants) -> bool {
        self.orientable == inv.orientable
            && self.genus_or_crosscap == inv.genus_or_crosscap()
            && self.boundary == inv.boundary_components
    }
}

pub fn expected_counts(inst: &FamilyInstance) -> Result<ExpectedCounts, FamilyError> {
    inst.validate()?;
    let FamilyInstance { family, n, k, primed } = *inst;
    let extra = usize::from(primed);
    let counts = match family {
        Family::NonsepOrientable => ExpectedCounts {
            orientable: true,
            genus_or_crosscap: k / 2,
            boundary: n - k + 1,
        },
        Family::NonsepOrientableGenus0 => ExpectedCounts {
            orientable: true,
            genus_or_crosscap: 0,
            boundary: n + 1,
        },
        Family::NonOrientable => ExpectedCounts {
            orientable: false,
            genus_or_crosscap: k,
            boundary: n - k + 1,
        },
        Family::Separating => {
            let g = k - 1;
            ExpectedCounts {
                orientable: true,
                genus_or_crosscap: g,
                boundary: 2 * n + 1 - 2 * g + extra,
            }
        }
        Family::SeparatingGenus0 => ExpectedCounts {
            orientable: true,
            genus_or_crosscap: 0,
            boundary: 2 * n + 1 + extra,
        },
    };
    Ok(counts)
}

/// Name of a band: `α_i` or `β_i`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BandName {
    Alpha(usize),
    Beta(usize),
}

impl BandName {
    pub fn index(self) -> usize {
        match self {
            BandName::Alpha(i) | BandName::Beta(i) => i,
        }
    }

    /// Label of one of the band's ends: `a3`, `a3'`, `b1`, ...
    pub fn end_label(self, primed: bool) -> String {
        let (letter, i) = match self {
            BandName::Alpha(i) => ('a', i),
            BandName::Beta(i) => ('b', i),
        };
        if primed {
            format!("{letter}{i}'")
        } else {
            format!("{letter}{i}")
        }
    }
}

impl fmt::Display for BandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandName::Alpha(i) => write!(f, "alpha{i}"),
            BandName::Beta(i) => write!(f, "beta{i}"),
        }
    }
}

/// Generator images in band order (interleaved `α_1, β_1, α_2, ...` for the
/// separating families).
pub fn named_words(inst: &FamilyInstance) -> Result<Vec<(BandName, Word)>, FamilyError> {
    inst.validate()?;
    let FamilyInstance { family, n, k, primed } = *inst;
    let out = match family {
        Family::NonsepOrientable => alphas(nonsep_orientable_words(n, k)),
        Family::NonsepOrientableGenus0 => alphas(nonsep_genus0_words(n)),
        Family::NonOrientable => alphas(non_orientable_words(n, k)),
        Family::Separating | Family::SeparatingGenus0 => separating_words(n, k, primed),
    };
    debug_assert_eq!(out.len(), inst.band_count());
    Ok(out)
}

pub fn words(inst: &FamilyInstance) -> Result<Vec<Word>, FamilyError> {
    Ok(named_words(inst)?.into_iter().map(|(_, w)| w).collect())
}

fn alphas(words: Vec<Word>) -> Vec<(BandName, Word)> {
    words
        .into_iter()
        .enumerate()
        .map(|(i, w)| (BandName::Alpha(i + 1), w))
        .collect()
}

fn wrap(left: &Word, w: &Word, right: &Word) -> Word {
    w.conjugate_by(left, right).expect("rank-2 words")
}

/// `α_1 = y^3`; before the changeover `α_{m+1} = y⁻¹x⁻¹ α_m x`. After it the
/// bands come in blocks of `k`: on odd blocks the left factor is `x⁻¹` and the
/// right factors are `x` then `xy`; on even blocks the left factor is `y⁻¹x⁻¹`
/// and the right factors are `xy` then `x`.
fn nonsep_orientable_words(n: usize, k: usize) -> Vec<Word> {
    let (x, xi, xy, yixi) = (w2("x"), w2("X"), w2("x y"), w2("Y X"));
    let mut out = vec![w2("y^3")];
    for m in 2..=n {
        let prev = out.last().unwrap();
        let next = if m <= k {
            wrap(&yixi, prev, &x)
        } else {
            let block = (m - 1) / k;
            let first = (m - 1) % k == 0;
            match (block % 2 == 1, first) {
                (true, true) => wrap(&xi, prev, &x),
                (true, false) => wrap(&xi, prev, &xy),
                (false, true) => wrap(&yixi, prev, &xy),
                (false, false) => wrap(&yixi, prev, &x),
            }
        };
        out.push(next);
    }
    out
}

/// `α_s = x^{-(s-1)} y^3 x^{s-1}`.
fn nonsep_genus0_words(n: usize) -> Vec<Word> {
    let (x, xi) = (w2("x"), w2("X"));
    let mut out = vec![w2("y^3")];
    for _ in 2..=n {
        let next = wrap(&xi, out.last().unwrap(), &x);
        out.push(next);
    }
    out
}

/// First stage `α_m = x α_{m-1} x` from `α_1 = x y^3`; the second stage
/// depends on the parity of `k` and treats `k = 1` separately.
fn non_orientable_words(n: usize, k: usize) -> Vec<Word> {
    let (x, xi, y, yi, xy, yixi) = (w2("x"), w2("X"), w2("y"), w2("Y"), w2("x y"), w2("Y X"));
    let mut out = vec![w2("x y^3")];
    for m in 2..=n {
        let prev = out.last().unwrap();
        let next = if m <= k {
            wrap(&x, prev, &x)
        } else if k.is_multiple_of(2) {
            if m == k + 1 {
                wrap(&yi, prev, &x)
            } else {
                wrap(&yixi, prev, &xy)
            }
        } else if k == 1 {
            if m == 2 {
                wrap(&x, prev, &w2("x Y X"))
            } else {
                wrap(&xy, prev, &yixi)
            }
        } else if m == k + 1 {
            wrap(&y, prev, &x)
        } else {
            wrap(&xi, prev, &x)
        };
        out.push(next);
    }
    out
}

/// Separating families, interleaved `α_1, β_1, ..., α_n, β_n` (plus
/// `α_{n+1}` when primed).
///
/// `k = 0`: `α_{m} = x⁻¹ β_{m-1} x`, `β_m = y⁻¹ α_{m-1} y`.
///
/// `k ≥ 2`: steps come in blocks of `2k - 1`. Inside block 0 and every even
/// block `α_m = x β_{m-1} x`, `β_m = y α_{m-1} y`; inside odd blocks
/// `α_m = x⁻¹ β_{m-1} x⁻¹`, `β_m = y⁻¹ α_{m-1} y⁻¹`. The first step of every
/// later block instead uses `α_m = x⁻¹ β_{m-1} x`, `β_m = y α_{m-1} y⁻¹` for
/// odd `k`; even `k` uses the mirror image under `x ↔ y`, `α ↔ β`, namely
/// `α_m = x β_{m-1} x⁻¹`, `β_m = y⁻¹ α_{m-1} y`.
fn separating_words(n: usize, k: usize, primed: bool) -> Vec<(BandName, Word)> {
    let (x, xi, y, yi) = (w2("x"), w2("X"), w2("y"), w2("Y"));
    let steps = n + usize::from(primed);
    let mut alpha = vec![w2("x^3")];
    let mut beta = vec![w2("y^3")];
    for m in 2..=steps {
        let (a_prev, b_prev) = (&alpha[m - 2], &beta[m - 2]);
        let (a, b) = if k == 0 {
            (wrap(&xi, b_prev, &x), wrap(&yi, a_prev, &y))
        } else {
            let period = 2 * k - 1;
            let block = (m - 1) / period;
            let first = (m - 1) % period == 0;
            if block == 0 || (block.is_multiple_of(2) && !first) {
                (wrap(&x, b_prev, &x), wrap(&y, a_prev, &y))
            } else if !first {
                (wrap(&xi, b_prev, &xi), wrap(&yi, a_prev, &yi))
            } else if k % 2 == 1 {
                (wrap(&xi, b_prev, &x), wrap(&y, a_prev, &yi))
            } else {
                (wrap(&x, b_prev, &xi), wrap(&yi, a_prev, &y))
            }
        };
        alpha.push(a);
        beta.push(b);
    }
    let mut out = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        out.push((BandName::Alpha(i + 1), alpha[i].clone()));
        out.push((BandName::Beta(i + 1), beta[i].clone()));
    }
    if primed {
        out.push((BandName::Alpha(n + 1), alpha[n].clone()));
    }
    out
}

/// Which lemma shape a family's words are checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordPartition {
    /// All words carry `y^3`.
    OneFamily { words: Vec<Word> },
    /// `A` (odd `α`, even `β`) carries `x^3`; `B` (odd `β`, even `α`) carries `y^3`.
    TwoFamily { a: Vec<Word>, b: Vec<Word> },
}

/// Split a family's words the way the injectivity argument uses them.
pub fn partition_words(family: Family, named: &[(BandName, Word)]) -> WordPartition {
    if !family.is_separating() {
        return WordPartition::OneFamily {
            words: named.iter().map(|(_, w)| w.clone()).collect(),
        };
    }
    let mut tagged: Vec<(usize, bool, Word)> = named
        .iter()
        .map(|(name, w)| {
            let i = name.index();
            let in_a = match name {
                BandName::Alpha(_) => i % 2 == 1,
                BandName::Beta(_) => i % 2 == 0,
            };
            (i, in_a, w.clone())
        })
        .collect();
    tagged.sort_by_key(|(i, _, _)| *i);
    let (a, b): (Vec<_>, Vec<_>) = tagged.into_iter().partition(|(_, in_a, _)| *in_a);
    WordPartition::TwoFamily {
        a: a.into_iter().map(|(_, _, w)| w).collect(),
        b: b.into_iter().map(|(_, _, w)| w).collect(),
    }
}

/// A built surface with band names and the boundary count after each band.
#[derive(Debug, Clone)]
pub struct BuiltSurface {
    pub surface: RibbonSurface,
    pub band_names: Vec<BandName>,
    pub boundary_history: Vec<usize>,
}

impl BuiltSurface {
    pub fn end_label(&self, end: EndId) -> String {
        self.band_names[RibbonSurface::band_of(end)].end_label(end % 2 == 1)
    }
}

/// Token in a target cyclic order: band position in build order, and whether
/// this is the primed end.
type EndToken = (usize, bool);

fn linked_pair(p: usize, q: usize) -> [EndToken; 4] {
    [(p, false), (q, false), (p, true), (q, true)]
}

fn side_by_side(p: usize) -> [EndToken; 2] {
    [(p, false), (p, true)]
}

fn rainbow(bands: impl DoubleEndedIterator<Item = usize> + Clone) -> Vec<EndToken> {
    let mut out: Vec<EndToken> = bands.clone().map(|b| (b, false)).collect();
    out.extend(bands.rev().map(|b| (b, true)));
    out
}

/// Build the surface band by band and check it against [`expected_counts`].
pub fn build_surface(inst: &FamilyInstance) -> Result<BuiltSurface, FamilyError> {
    let expected = expected_counts(inst)?;
    let built = construct_surface(inst)?;
    let inv = built.surface.invariants();
    if !expected.matches(&inv) {
        return Err(FamilyError::Inconsistent(format!(
            "{inst}: built surface has b={} g/c={} orientable={}, expected b={} g/c={} orientable={}",
            inv.boundary_components,
            inv.genus_or_crosscap(),
            inv.orientable,
            expected.boundary,
            expected.genus_or_crosscap,
            expected.orientable
        )));
    }
    Ok(built)
}

/// Build the surface band by band, checking each band against the
/// boundary-change rule but not the final counts.
pub fn construct_surface(inst: &FamilyInstance) -> Result<BuiltSurface, FamilyError> {
    let FamilyInstance { family, n, k, .. } = *inst;
    let band_names: Vec<BandName> = named_words(inst)?.into_iter().map(|(b, _)| b).collect();
    let total = band_names.len();

    let (target, parities): (Vec<EndToken>, Vec<Parity>) = match family {
        Family::NonsepOrientable => {
            // k bands in linked consecutive pairs, the rest nested
            let mut t: Vec<EndToken> = (0..k / 2).flat_map(|i| linked_pair(2 * i, 2 * i + 1)).collect();
            t.extend(rainbow(k..n));
            (t, vec![Parity::Even; n])
        }
        Family::NonsepOrientableGenus0 => (rainbow(0..n), vec![Parity::Even; n]),
        Family::NonOrientable => {
            let mut t: Vec<EndToken> = (0..k).flat_map(side_by_side).collect();
            t.extend(rainbow(k..n));
            let mut p = vec![Parity::Odd; k];
            p.resize(n, Parity::Even);
            (t, p)
        }
        Family::Separating => {
            // steps 1..k-1 add linked (α_i, β_i) pairs; bands from step k on nest
            let genus_steps = (k - 1).min(n);
            let mut t: Vec<EndToken> = (0..genus_steps).flat_map(|i| linked_pair(2 * i, 2 * i + 1)).collect();
            t.extend(rainbow(2 * genus_steps..total));
            (t, vec![Parity::Even; total])
        }
        Family::SeparatingGenus0 => (rainbow(0..total), vec![Parity::Even; total]),
    };
    debug_assert_eq!(target.len(), 2 * total);

    let (surface, boundary_history) = replay(&target, &parities)?;
    Ok(BuiltSurface {
        surface,
        band_names,
        boundary_history,
    })
}

/// Add bands one at a time, each at the positions its ends occupy in the
/// target order restricted to the bands added so far.
fn replay(target: &[EndToken], parities: &[Parity]) -> Result<(RibbonSurface, Vec<usize>), FamilyError> {
    let mut surface = RibbonSurface::disk();
    let mut history = vec![1];
    for (band, &parity) in parities.iter().enumerate() {
        let visible: Vec<EndToken> = target.iter().copied().filter(|(b, _)| *b <= band).collect();
        let pos = |primed: bool| {
            visible
                .iter()
                .position(|&t| t == (band, primed))
                .ok_or_else(|| FamilyError::Inconsistent(format!("band {band} missing from target order")))
        };
        let slots = (pos(false)?, pos(true)?);
        let predicted = surface.predicted_delta(slots, parity);
        let before = history[history.len() - 1] as i64;
        surface = surface.add_band(slots, parity)?;
        let after = surface.boundary_components();
        if after as i64 != before + predicted {
            return Err(FamilyError::Inconsistent(format!(
                "band {band}: boundary went {before} -> {after}, band rule predicts {}",
                before + predicted
            )));
        }
        history.push(after);
    }
    Ok((surface, history))
}
