//! Weighted three-candidate veto elections and coalition manipulation.
//!
//! The sincere voters have already cast veto weight `a`, `b` and `c` on
//! candidates A, B and C. A coalition with weights `W` wants C to win. The
//! candidate with the least veto weight wins and ties go the coalition's way,
//! so C wins iff `c <= a + x` and `c <= b + y`, where `x + y = sum(W)` is the
//! split of coalition vetoes between A and B. Vetoing C never helps.
//!
//! Deciding the split is two-way partitioning of `W ∪ {|a - b|}` with
//! acceptable difference `a + b - 2c + sum(W)`.

use crate::partition::{
    brute_force_partition, ckk_decide, Bag, PartitionError, PartitionProblem, SearchStats,
};
use thiserror::Error;

/// Largest coalition accepted by [`brute_force_manipulation`].
pub const BRUTE_FORCE_MAX_COALITION: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElectionError {
    #[error("coalition member {index} has zero weight")]
    ZeroWeight { index: usize },
    #[error("assignment has {got} labels for a coalition of {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("brute force enumeration limited to {max} coalition members, got {len}")]
    TooLarge { len: usize, max: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Candidate a coalition member vetoes. C is never vetoed by the coalition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VetoTarget {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationInstance {
    a: u64,
    b: u64,
    c: u64,
    coalition: Vec<u64>,
    n: u32,
}

impl ManipulationInstance {
    pub fn new(a: u64, b: u64, c: u64, coalition: Vec<u64>) -> Result<Self, ElectionError> {
        if let Some(index) = coalition.iter().position(|&w| w == 0) {
            return Err(ElectionError::ZeroWeight { index });
        }
        Ok(Self {
            a,
            b,
            c,
            coalition,
            n: 0,
        })
    }

    /// Record how many sincere voters produced `a`, `b`, `c`. Metadata only.
    pub fn with_voters(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn coalition(&self) -> &[u64] {
        &self.coalition
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.coalition.len()
    }

    pub fn coalition_weight(&self) -> u64 {
        self.coalition.iter().sum()
    }

    /// `2c - a - b`: the total weight the coalition must add to A and B.
    pub fn deficit(&self) -> i128 {
        2 * self.c as i128 - self.a as i128 - self.b as i128
    }

    /// Same election with A and B relabelled.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// Both A and B already have at least as many vetoes as C.
    BothLosersAhead,
    /// Exactly one of A, B has at least as many vetoes as C.
    OneLoserAhead,
    /// Both A and B trail C; the coalition must split its vetoes.
    Deficit,
}

pub fn classify_case(a: u64, b: u64, c: u64) -> CaseLabel {
    let (hi, lo) = (a.max(b), a.min(b));
    if lo >= c {
        CaseLabel::BothLosersAhead
    } else if hi >= c {
        CaseLabel::OneLoserAhead
    } else {
        CaseLabel::Deficit
    }
}

/// The partitioning problem equivalent to a manipulation instance.
///
/// `problem.numbers` is the coalition in order followed by the synthetic
/// element `|a - b|` at index `synthetic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub problem: PartitionProblem,
    pub synthetic: usize,
}

pub fn reduce_to_partition(instance: &ManipulationInstance) -> Reduction {
    let mut numbers = instance.coalition.clone();
    numbers.push(instance.a.abs_diff(instance.b));
    let threshold = instance.a as i128 + instance.b as i128 - 2 * instance.c as i128
        + instance.coalition_weight() as i128;
    let threshold = threshold.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
    Reduction {
        synthetic: instance.coalition.len(),
        problem: PartitionProblem::new(numbers, threshold),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationResult {
    pub manipulable: bool,
    pub case: CaseLabel,
    pub veto_to_a: u64,
    pub veto_to_b: u64,
    /// Target of each coalition member, in coalition order.
    pub assignment: Vec<VetoTarget>,
    pub stats: SearchStats,
}

impl ManipulationResult {
    fn uniform(instance: &ManipulationInstance, case: CaseLabel, target: VetoTarget, manipulable: bool) -> Self {
        let total = instance.coalition_weight();
        let (veto_to_a, veto_to_b) = match target {
            VetoTarget::A => (total, 0),
            VetoTarget::B => (0, total),
        };
        Self {
            manipulable,
            case,
            veto_to_a,
            veto_to_b,
            assignment: vec![target; instance.m()],
            stats: SearchStats::default(),
        }
    }
}

pub fn decide_manipulation(instance: &ManipulationInstance) -> ManipulationResult {
    let (a, b, c) = (instance.a, instance.b, instance.c);
    let (heavier, lighter) = if a >= b {
        (VetoTarget::A, VetoTarget::B)
    } else {
        (VetoTarget::B, VetoTarget::A)
    };
    let case = classify_case(a, b, c);
    match case {
        CaseLabel::BothLosersAhead => ManipulationResult::uniform(instance, case, heavier, true),
        CaseLabel::OneLoserAhead => {
            let manipulable = c as u128 <= a.min(b) as u128 + instance.coalition_weight() as u128;
            ManipulationResult::uniform(instance, case, lighter, manipulable)
        }
        CaseLabel::Deficit => {
            let reduction = reduce_to_partition(instance);
            let outcome = ckk_decide(&reduction.problem);
            // Members sharing a bag with |a - b| pad the heavier loser; the
            // other bag goes to the lighter one. The two loser totals then
            // differ by exactly the partition difference.
            let padded: Bag = outcome.assignment[reduction.synthetic];
            let mut veto_to_a = 0;
            let mut veto_to_b = 0;
            let assignment: Vec<VetoTarget> = instance
                .coalition
                .iter()
                .zip(&outcome.assignment)
                .map(|(&w, &bag)| {
                    let target = if bag == padded { heavier } else { lighter };
                    match target {
                        VetoTarget::A => veto_to_a += w,
                        VetoTarget::B => veto_to_b += w,
                    }
                    target
                })
                .collect();
            debug_assert_eq!(
                outcome.feasible,
                verify_assignment(instance, &assignment).unwrap_or(false)
            );
            ManipulationResult {
                manipulable: outcome.feasible,
                case,
                veto_to_a,
                veto_to_b,
                assignment,
                stats: outcome.stats,
            }
        }
    }
}

/// Whether C wins (ties included) once the coalition vetoes as assigned.
pub fn verify_assignment(
    instance: &ManipulationInstance,
    assignment: &[VetoTarget],
) -> Result<bool, ElectionError> {
    if assignment.len() != instance.m() {
        return Err(ElectionError::AssignmentLength {
            expected: instance.m(),
            got: assignment.len(),
        });
    }
    let (mut to_a, mut to_b) = (instance.a, instance.b);
    for (&w, &target) in instance.coalition.iter().zip(assignment) {
        match target {
            VetoTarget::A => to_a += w,
            VetoTarget::B => to_b += w,
        }
    }
    Ok(instance.c <= to_a && instance.c <= to_b)
}

/// Try every split of the coalition between A and B. Test oracle.
pub fn brute_force_manipulation(instance: &ManipulationInstance) -> Result<bool, ElectionError> {
    let m = instance.m();
    if m > BRUTE_FORCE_MAX_COALITION {
        return Err(ElectionError::TooLarge {
            len: m,
            max: BRUTE_FORCE_MAX_COALITION,
        });
    }
    let mut labels = vec![VetoTarget::A; m];
    for mask in 0u32..(1u32 << m) {
        for (j, label) in labels.iter_mut().enumerate() {
            *label = if mask >> j & 1 == 1 { VetoTarget::B } else { VetoTarget::A };
        }
        if verify_assignment(instance, &labels)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A hung election (`a = b = 0`, `2c = sum(W)`) is manipulable exactly when
/// the coalition weights split perfectly.
pub fn has_perfect_partition(weights: &[u64]) -> Result<bool, ElectionError> {
    Ok(brute_force_partition(weights)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(a: u64, b: u64, c: u64, w: &[u64]) -> ManipulationInstance {
        ManipulationInstance::new(a, b, c, w.to_vec()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(10, 7, 5), CaseLabel::BothLosersAhead);
        assert_eq!(classify_case(10, 2, 5), CaseLabel::OneLoserAhead);
        assert_eq!(classify_case(2, 10, 5), CaseLabel::OneLoserAhead);
        assert_eq!(classify_case(1, 2, 9), CaseLabel::Deficit);
        assert_eq!(classify_case(5, 5, 5), CaseLabel::BothLosersAhead);
        assert_eq!(classify_case(5, 4, 5), CaseLabel::OneLoserAhead);
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_to_partition(&inst(10, 1, 3, &[1]));
        assert_eq!(r.problem.numbers, vec![1, 9]);
        assert_eq!(r.problem.threshold, 6);
        assert_eq!(r.synthetic, 1);

        let r = reduce_to_partition(&inst(0, 0, 7, &[3, 5, 6]));
        assert_eq!(r.problem.numbers, vec![3, 5, 6, 0]);
        assert_eq!(r.problem.threshold, 0);

        let r = reduce_to_partition(&inst(0, 0, 0, &[]));
        assert_eq!(r.problem.numbers, vec![0]);
        assert_eq!(r.problem.threshold, 0);
        assert!(ckk_decide(&r.problem).feasible);
    }

    #[test]
    fn decide_split_needed() {
        let i = inst(5, 5, 6, &[1, 1]);
        let res = decide_manipulation(&i);
        assert!(res.manipulable);
        assert_eq!(res.case, CaseLabel::Deficit);
        assert_eq!((res.veto_to_a, res.veto_to_b), (1, 1));
        assert!(verify_assignment(&i, &res.assignment).unwrap());
        assert!(brute_force_manipulation(&i).unwrap());
    }

    #[test]
    fn decide_not_manipulable() {
        let i = inst(10, 1, 3, &[1]);
        assert!(!decide_manipulation(&i).manipulable);
        assert!(!brute_force_manipulation(&i).unwrap());
    }

    #[test]
    fn decide_easy_cases_do_not_search() {
        let res = decide_manipulation(&inst(10, 7, 5, &[3, 4]));
        assert!(res.manipulable);
        assert_eq!(res.stats.branches, 0);
        assert_eq!(res.veto_to_a, 7);
        assert_eq!(res.assignment, vec![VetoTarget::A; 2]);

        let res = decide_manipulation(&inst(10, 2, 5, &[1, 1]));
        assert!(!res.manipulable);
        assert_eq!(res.veto_to_b, 2);
        assert_eq!(res.stats.branches, 0);

        let res = decide_manipulation(&inst(2, 10, 5, &[1, 2]));
        assert!(res.manipulable);
        assert_eq!((res.veto_to_a, res.veto_to_b), (3, 0));
    }

    #[test]
    fn empty_coalition() {
        for (a, b, c) in [(3, 4, 3), (3, 3, 3), (0, 0, 0), (9, 2, 3), (1, 1, 2)] {
            let i = inst(a, b, c, &[]);
            assert_eq!(decide_manipulation(&i).manipulable, c <= a.min(b));
        }
    }

    #[test]
    fn verify_examples() {
        let i = inst(5, 5, 6, &[1, 1]);
        assert!(!verify_assignment(&i, &[VetoTarget::A, VetoTarget::A]).unwrap());
        assert!(verify_assignment(&inst(5, 5, 5, &[]), &[]).unwrap());
        assert!(!verify_assignment(&inst(0, 0, 1, &[2]), &[VetoTarget::A]).unwrap());
        assert_eq!(
            verify_assignment(&i, &[VetoTarget::A]),
            Err(ElectionError::AssignmentLength {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn zero_weight_rejected() {
        assert_eq!(
            ManipulationInstance::new(1, 1, 1, vec![2, 0]),
            Err(ElectionError::ZeroWeight { index: 1 })
        );
    }

    #[test]
    fn brute_force_guard() {
        let i = inst(0, 0, 1, &[1; 21]);
        assert!(matches!(
            brute_force_manipulation(&i),
            Err(ElectionError::TooLarge { len: 21, .. })
        ));
    }

    #[test]
    fn hung_matches_perfect_partition() {
        for w in [vec![3u64, 5, 6, 2], vec![1, 1], vec![4, 6, 7, 9], vec![2, 2, 2, 8]] {
            let total: u64 = w.iter().sum();
            if total % 2 == 1 {
                continue;
            }
            let i = inst(0, 0, total / 2, &w);
            assert_eq!(brute_force_manipulation(&i).unwrap(), has_perfect_partition(&w).unwrap());
            assert_eq!(decide_manipulation(&i).manipulable, has_perfect_partition(&w).unwrap());
        }
    }
}
