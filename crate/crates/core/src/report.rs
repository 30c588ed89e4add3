//! The full verification pipeline for one family instance.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::criteria::{
    check_hypotheses_a, check_hypotheses_ab, enumerate_products, EnumerationError, EnumerationVerdict,
    ProductFamilies, Violation,
};
use crate::families::{
    construct_surface, expected_counts, named_words, partition_words, ExpectedCounts, FamilyError, FamilyInstance,
    WordPartition,
};
use crate::freegroup::Word;
use crate::ribbon::SurfaceInvariants;
use crate::stallings::{certify_injective, GraphError, InjectivityVerdict};

pub const DEFAULT_S_MAX: usize = 3;
pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const BUDGET_ENV: &str = "HANDLEWEAVE_BUDGET";
const CUBE_POWER: u32 = 3;
const X: usize = 0;
const Y: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("budget exceeded: enumeration needs {required} expressions, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error(transparent)]
    Enumeration(EnumerationError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid {BUDGET_ENV} value `{0}`")]
    BadBudget(String),
}

impl From<EnumerationError> for ReportError {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::BudgetExceeded { required, budget } => ReportError::BudgetExceeded { required, budget },
            other => ReportError::Enumeration(other),
        }
    }
}

/// Enumeration budget from the environment, or the default.
pub fn budget_from_env() -> Result<u64, ReportError> {
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| ReportError::BadBudget(raw)),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisVerdict {
    Pass,
    Fail(Violation),
}

impl HypothesisVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, HypothesisVerdict::Pass)
    }
}

impl Serialize for HypothesisVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            HypothesisVerdict::Pass => serializer.serialize_str("pass"),
            HypothesisVerdict::Fail(v) => v.serialize(serializer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub hypotheses: HypothesisVerdict,
    pub enumeration: EnumerationVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub instance: FamilyInstance,
    pub invariants: SurfaceInvariants,
    pub expected: ExpectedCounts,
    pub counts_match: bool,
    pub criteria: CriteriaReport,
    pub oracle: InjectivityVerdict,
    pub overall: Overall,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub s_max: usize,
    pub budget: u64,
    /// Replaces the family's generated words.
    pub words: Option<Vec<Word>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            s_max: DEFAULT_S_MAX,
            budget: DEFAULT_BUDGET,
            words: None,
        }
    }
}

pub fn verify(inst: &FamilyInstance, opts: &VerifyOptions) -> Result<VerificationReport, ReportError> {
    let expected = expected_counts(inst)?;
    let invariants = construct_surface(inst)?.surface.invariants();
    let counts_match = expected.matches(&invariants);

    let mut named = named_words(inst)?;
    let partition = match &opts.words {
        Some(words) if words.len() == named.len() => {
            for ((_, w), replacement) in named.iter_mut().zip(words) {
                *w = replacement.clone();
            }
            partition_words(inst.family, &named)
        }
        Some(words) => WordPartition::OneFamily { words: words.clone() },
        None => partition_words(inst.family, &named),
    };

    let (hypotheses, enumeration) = match &partition {
        WordPartition::OneFamily { words } => (
            check_hypotheses_a(words, Y, CUBE_POWER).map(drop),
            enumerate_products(ProductFamilies::One(words), opts.s_max, opts.budget)?,
        ),
        WordPartition::TwoFamily { a, b } => (
            check_hypotheses_ab(a, b, X, CUBE_POWER).map(drop),
            enumerate_products(ProductFamilies::Two(a, b), opts.s_max, opts.budget)?,
        ),
    };
    let hypotheses = match hypotheses {
        Ok(()) => HypothesisVerdict::Pass,
        Err(v) => HypothesisVerdict::Fail(v),
    };

    let all_words: Vec<Word> = match opts.words.as_ref() {
        Some(words) => words.clone(),
        None => named.into_iter().map(|(_, w)| w).collect(),
    };
    let oracle = certify_injective(&all_words)?;

    let pass = counts_match && hypotheses.passed() && enumeration.no_trivial_product() && oracle.injective;
    Ok(VerificationReport {
        instance: *inst,
        invariants,
        expected,
        counts_match,
        criteria: CriteriaReport { hypotheses, enumeration },
        oracle,
        overall: if pass { Overall::Pass } else { Overall::Fail },
    })
}
