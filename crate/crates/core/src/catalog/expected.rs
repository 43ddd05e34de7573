use alloc::vec::Vec;

use crate::analysis::TranslationClass;

/// Claimed value or range of `<H, H>` for the space-form mean curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HNormRange {
    /// Exactly this value (checked with the pass tolerance).
    Equal(f64),
    /// Strictly between the bounds; either may be infinite.
    Open(f64, f64),
}

impl HNormRange {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        match *self {
            HNormRange::Equal(v) => (x - v).abs() <= tol,
            HNormRange::Open(lo, hi) => x > lo + tol && x < hi - tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HNormClaim {
    /// Closed-form value for these parameters, when one exists.
    pub value: Option<f64>,
    pub range: HNormRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionClaim {
    pub hull_dim: usize,
    pub translation: TranslationClass,
}

/// Properties a catalog entry is claimed to have. `None` means no claim.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    /// Where the claim comes from, quoted in the mathematical language of the result.
    pub source: &'static str,
    pub radical_rank: usize,
    /// How many trailing chart variables span directions in the radical.
    pub trailing_radical: usize,
    /// Radical ranks accepted with a discrepancy note instead of a failure.
    pub radical_rank_tolerated: Vec<usize>,
    /// Explanation attached when a tolerated value is observed.
    pub discrepancy_note: Option<&'static str>,
    pub totally_umbilical: bool,
    pub totally_geodesic: bool,
    pub minimal: Option<bool>,
    pub marginally_trapped: Option<bool>,
    pub h_norm: Option<HNormClaim>,
    pub parallel: Option<bool>,
    pub full: Option<bool>,
    pub first_normal_dim: Option<usize>,
    pub reduction: Option<ReductionClaim>,
}

impl Expected {
    /// A non-degenerate totally umbilical immersion.
    pub(crate) fn umbilical(source: &'static str, value: f64, range: HNormRange, geodesic: bool) -> Self {
        Self {
            source,
            radical_rank: 0,
            trailing_radical: 0,
            radical_rank_tolerated: Vec::new(),
            discrepancy_note: None,
            totally_umbilical: true,
            totally_geodesic: geodesic,
            minimal: Some(geodesic),
            marginally_trapped: Some(!geodesic && range == HNormRange::Equal(0.0)),
            h_norm: Some(HNormClaim { value: Some(value), range }),
            parallel: Some(true),
            full: Some(!geodesic),
            first_normal_dim: Some(if geodesic { 0 } else { 1 }),
            reduction: None,
        }
    }

    /// A totally umbilical immersion whose induced metric has a radical of rank `rank`.
    pub(crate) fn lightlike(source: &'static str, rank: usize, geodesic: bool) -> Self {
        Self {
            source,
            radical_rank: rank,
            trailing_radical: 0,
            radical_rank_tolerated: Vec::new(),
            discrepancy_note: None,
            totally_umbilical: true,
            totally_geodesic: geodesic,
            minimal: Some(geodesic),
            marginally_trapped: None,
            h_norm: None,
            parallel: None,
            full: None,
            first_normal_dim: None,
            reduction: None,
        }
    }

    /// A non-degenerate immersion that is not totally umbilical.
    pub(crate) fn control(source: &'static str, minimal: bool, h_norm: HNormClaim, parallel: bool) -> Self {
        Self {
            source,
            radical_rank: 0,
            trailing_radical: 0,
            radical_rank_tolerated: Vec::new(),
            discrepancy_note: None,
            totally_umbilical: false,
            totally_geodesic: false,
            minimal: Some(minimal),
            marginally_trapped: Some(!minimal && h_norm.range == HNormRange::Equal(0.0)),
            h_norm: Some(h_norm),
            parallel: Some(parallel),
            full: Some(true),
            first_normal_dim: None,
            reduction: None,
        }
    }

    pub(crate) fn with_reduction(mut self, hull_dim: usize, translation: TranslationClass) -> Self {
        self.reduction = Some(ReductionClaim { hull_dim, translation });
        self
    }

    pub(crate) fn with_trailing_radical(mut self, k: usize) -> Self {
        self.trailing_radical = k;
        self
    }

    pub(crate) fn with_full(mut self, full: Option<bool>) -> Self {
        self.full = full;
        self
    }

    pub(crate) fn tolerating(mut self, ranks: &[usize], note: &'static str) -> Self {
        self.radical_rank_tolerated = ranks.to_vec();
        self.discrepancy_note = Some(note);
        self
    }

    /// Whether `rank` is the claimed radical rank (`Some(true)`), a tolerated
    /// discrepancy (`Some(false)`), or a failure (`None`).
    pub fn radical_rank_verdict(&self, rank: usize) -> Option<bool> {
        if rank == self.radical_rank {
            Some(true)
        } else if self.radical_rank_tolerated.contains(&rank) {
            Some(false)
        } else {
            None
        }
    }
}
