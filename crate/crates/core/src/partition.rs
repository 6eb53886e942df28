//! Two-way number partitioning.
//!
//! [`ckk_decide`] is the complete Karmarkar-Karp search: at every node the
//! two largest remaining numbers are either placed in different bags
//! (replaced by their difference) or in the same bag (replaced by their
//! sum). A node whose largest number is at least the sum of all the others
//! is closed immediately, because the best completion puts the largest
//! number alone against everything else. The difference branch is always
//! explored first, so the first leaf reached is the greedy
//! [`kk_heuristic`] solution.

use thiserror::Error;

/// Largest input accepted by [`brute_force_partition`].
pub const BRUTE_FORCE_MAX_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("brute force enumeration limited to {max} numbers, got {len}")]
    TooLarge { len: usize, max: usize },
}

/// A multiset of non-negative integers together with the largest bag-sum
/// difference that is still acceptable.
///
/// A negative threshold is legal and can never be met.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionProblem {
    pub numbers: Vec<u64>,
    pub threshold: i64,
}

impl PartitionProblem {
    pub fn new(numbers: Vec<u64>, threshold: i64) -> Self {
        Self { numbers, threshold }
    }

    pub fn total(&self) -> u64 {
        self.numbers.iter().sum()
    }

    /// Whether a partition with difference `difference` meets the threshold.
    pub fn accepts(&self, difference: u64) -> bool {
        self.threshold >= 0 && difference <= self.threshold as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bag {
    Left,
    Right,
}

impl Bag {
    pub fn other(self) -> Bag {
        match self {
            Bag::Left => Bag::Right,
            Bag::Right => Bag::Left,
        }
    }
}

/// Cost counters for one search.
///
/// `branches` counts nodes that were split into a difference child and a sum
/// child. Leaves and nodes closed by the dominance rule are visited (and
/// counted in `nodes`) but are not branches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub branches: u64,
    pub nodes: u64,
    pub terminated_early: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionOutcome {
    pub feasible: bool,
    pub best_difference: u64,
    /// Bag label of each input number, in input order.
    pub assignment: Vec<Bag>,
    pub stats: SearchStats,
}

/// Recompute `|sum(Left) - sum(Right)|` for an assignment.
pub fn assignment_difference(numbers: &[u64], assignment: &[Bag]) -> u64 {
    assert_eq!(numbers.len(), assignment.len());
    let (mut left, mut right) = (0u64, 0u64);
    for (&x, &bag) in numbers.iter().zip(assignment) {
        match bag {
            Bag::Left => left += x,
            Bag::Right => right += x,
        }
    }
    left.abs_diff(right)
}

/// One combination of the two largest numbers. The merged value keeps the
/// id of `keep`; `absorbed` disappears from the working set.
#[derive(Debug, Clone, Copy)]
struct Merge {
    keep: u32,
    absorbed: u32,
    separate: bool,
}

/// Working multiset kept sorted ascending by value. Among equal values the
/// most recently inserted sits last and is taken first.
struct WorkSet {
    items: Vec<(u64, u32)>,
    total: u64,
}

impl WorkSet {
    fn new(numbers: &[u64]) -> Self {
        let mut items: Vec<(u64, u32)> = numbers
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        items.sort_by_key(|&(x, _)| x);
        let total = numbers.iter().sum();
        Self { items, total }
    }

    fn insert(&mut self, item: (u64, u32)) -> usize {
        let at = self.items.partition_point(|&(x, _)| x <= item.0);
        self.items.insert(at, item);
        self.total += item.0;
        at
    }

    fn remove(&mut self, at: usize) -> (u64, u32) {
        let item = self.items.remove(at);
        self.total -= item.0;
        item
    }

    fn pop(&mut self) -> (u64, u32) {
        let item = self.items.pop().expect("pop from empty work set");
        self.total -= item.0;
        item
    }

    fn push(&mut self, item: (u64, u32)) {
        debug_assert!(self.items.last().is_none_or(|&(x, _)| x <= item.0));
        self.items.push(item);
        self.total += item.0;
    }

    /// Difference of the best completion when the largest number dominates
    /// the rest, `None` when the node still needs splitting.
    fn closed_difference(&self) -> Option<u64> {
        match self.items.last() {
            None => Some(0),
            Some(&(largest, _)) => {
                let rest = self.total - largest;
                (largest >= rest).then(|| largest - rest)
            }
        }
    }
}

/// Labels for the original numbers given the closed working set at a leaf:
/// the largest number goes alone in `Left`, everything else in `Right`, and
/// merges are then unwound newest first.
fn reconstruct(len: usize, work: &WorkSet, merges: &[Merge]) -> Vec<Bag> {
    let mut labels = vec![Bag::Right; len];
    if let Some(&(_, id)) = work.items.last() {
        labels[id as usize] = Bag::Left;
    }
    for merge in merges.iter().rev() {
        let keep = labels[merge.keep as usize];
        labels[merge.absorbed as usize] = if merge.separate { keep.other() } else { keep };
    }
    labels
}

/// Greedy largest differencing: repeatedly replace the two largest numbers
/// by their difference.
pub fn kk_heuristic(problem: &PartitionProblem) -> PartitionOutcome {
    let len = problem.numbers.len();
    let mut work = WorkSet::new(&problem.numbers);
    let mut merges = Vec::with_capacity(len.saturating_sub(1));
    let mut nodes = 1;
    while work.items.len() >= 2 {
        let (a, a_id) = work.pop();
        let (b, b_id) = work.pop();
        work.insert((a - b, a_id));
        merges.push(Merge {
            keep: a_id,
            absorbed: b_id,
            separate: true,
        });
        nodes += 1;
    }
    let best_difference = work.items.last().map_or(0, |&(x, _)| x);
    PartitionOutcome {
        feasible: problem.accepts(best_difference),
        best_difference,
        assignment: reconstruct(len, &work, &merges),
        stats: SearchStats {
            branches: 0,
            nodes,
            terminated_early: false,
        },
    }
}

struct Search {
    len: usize,
    work: WorkSet,
    merges: Vec<Merge>,
    best: u64,
    best_assignment: Vec<Bag>,
    /// Stop as soon as `best <= stop_at`.
    stop_at: u64,
    done: bool,
    stats: SearchStats,
}

impl Search {
    fn new(numbers: &[u64], stop_at: u64) -> Self {
        Self {
            len: numbers.len(),
            work: WorkSet::new(numbers),
            merges: Vec::with_capacity(numbers.len()),
            best: u64::MAX,
            best_assignment: Vec::new(),
            stop_at,
            done: false,
            stats: SearchStats::default(),
        }
    }

    fn run(mut self) -> (u64, Vec<Bag>, SearchStats) {
        self.descend();
        self.stats.terminated_early = self.done;
        (self.best, self.best_assignment, self.stats)
    }

    fn descend(&mut self) {
        self.stats.nodes += 1;
        if let Some(difference) = self.work.closed_difference() {
            if difference < self.best {
                self.best = difference;
                self.best_assignment = reconstruct(self.len, &self.work, &self.merges);
                if difference <= self.stop_at {
                    self.done = true;
                }
            }
            return;
        }

        self.stats.branches += 1;
        let (a, a_id) = self.work.pop();
        let (b, b_id) = self.work.pop();

        for separate in [true, false] {
            let merged = if separate { a - b } else { a + b };
            let at = self.work.insert((merged, a_id));
            self.merges.push(Merge {
                keep: a_id,
                absorbed: b_id,
                separate,
            });
            self.descend();
            self.merges.pop();
            self.work.remove(at);
            if self.done {
                break;
            }
        }

        self.work.push((b, b_id));
        self.work.push((a, a_id));
    }
}

fn run_ckk(numbers: &[u64], threshold: Option<u64>) -> (u64, Vec<Bag>, SearchStats) {
    // no partition can beat the parity of the total
    let floor = numbers.iter().sum::<u64>() % 2;
    let stop_at = threshold.map_or(floor, |t| t.max(floor));
    Search::new(numbers, stop_at).run()
}

/// Complete Karmarkar-Karp decision search.
///
/// Stops at the first partition whose difference is within the threshold.
/// When no such partition exists the whole tree is searched and
/// `best_difference` is the global optimum. A negative threshold is
/// rejected without search; `best_difference` is then the greedy
/// difference, not necessarily the optimum (use [`ckk_optimize`]).
pub fn ckk_decide(problem: &PartitionProblem) -> PartitionOutcome {
    if problem.threshold < 0 {
        let mut outcome = kk_heuristic(problem);
        outcome.feasible = false;
        return outcome;
    }
    let (best_difference, assignment, stats) =
        run_ckk(&problem.numbers, Some(problem.threshold as u64));
    PartitionOutcome {
        feasible: problem.accepts(best_difference),
        best_difference,
        assignment,
        stats,
    }
}

/// Exhaustive complete Karmarkar-Karp: the minimum achievable difference.
///
/// The search only stops early once the parity floor (`total mod 2`) is
/// reached. The outcome is reported against a threshold of `-1`, so it is
/// never feasible.
pub fn ckk_optimize(numbers: &[u64]) -> PartitionOutcome {
    let (best_difference, assignment, stats) = run_ckk(numbers, None);
    PartitionOutcome {
        feasible: false,
        best_difference,
        assignment,
        stats,
    }
}

/// Minimum difference by enumerating every assignment. Test oracle.
pub fn brute_force_partition(numbers: &[u64]) -> Result<u64, PartitionError> {
    if numbers.len() > BRUTE_FORCE_MAX_LEN {
        return Err(PartitionError::TooLarge {
            len: numbers.len(),
            max: BRUTE_FORCE_MAX_LEN,
        });
    }
    let total: u64 = numbers.iter().sum();
    let mut best = total;
    // first element pinned to one bag; the mirror image has the same cost
    let free = numbers.len().saturating_sub(1);
    for mask in 0u32..(1u32 << free) {
        let mut left = numbers.first().copied().unwrap_or(0);
        for (j, &x) in numbers.iter().skip(1).enumerate() {
            if mask >> j & 1 == 1 {
                left += x;
            }
        }
        best = best.min(left.abs_diff(total - left));
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_outcome(numbers: &[u64], outcome: &PartitionOutcome) {
        assert_eq!(outcome.assignment.len(), numbers.len());
        assert_eq!(
            assignment_difference(numbers, &outcome.assignment),
            outcome.best_difference
        );
        assert!(outcome.stats.branches <= outcome.stats.nodes);
    }

    #[test]
    fn kk_empty() {
        let p = PartitionProblem::new(vec![], 0);
        let out = kk_heuristic(&p);
        assert_eq!(out.best_difference, 0);
        assert!(out.feasible);
    }

    #[test]
    fn kk_symmetric_pair() {
        let p = PartitionProblem::new(vec![5, 5], 0);
        let out = kk_heuristic(&p);
        assert_eq!(out.best_difference, 0);
        assert!(out.feasible);
        check_outcome(&p.numbers, &out);
    }

    #[test]
    fn kk_four_to_eight() {
        // 8-7=1; {1,4,5,6}: 6-5=1; {1,1,4}: 4-1=3; {1,3}: 2. Greedy reaches 2,
        // while {4,5,6} vs {7,8} is perfect.
        let p = PartitionProblem::new(vec![4, 5, 6, 7, 8], 0);
        let out = kk_heuristic(&p);
        assert_eq!(out.best_difference, 2);
        assert!(!out.feasible);
        assert_eq!(out.stats.branches, 0);
        check_outcome(&p.numbers, &out);
        assert_eq!(brute_force_partition(&p.numbers).unwrap(), 0);
        let exact = ckk_decide(&p);
        assert!(exact.feasible);
        assert_eq!(exact.best_difference, 0);
        check_outcome(&p.numbers, &exact);
    }

    #[test]
    fn ckk_small_infeasible() {
        let p = PartitionProblem::new(vec![1, 2, 4], 0);
        let out = ckk_decide(&p);
        assert!(!out.feasible);
        assert_eq!(out.best_difference, 1);
        check_outcome(&p.numbers, &out);
    }

    #[test]
    fn ckk_pair_reduction_example() {
        let p = PartitionProblem::new(vec![1, 9], 6);
        let out = ckk_decide(&p);
        assert!(!out.feasible);
        assert_eq!(out.best_difference, 8);
        assert_eq!(out.stats.branches, 0);
    }

    #[test]
    fn ckk_single_element() {
        for k in [0u64, 1, 17, 1 << 40] {
            let p = PartitionProblem::new(vec![k], k as i64);
            let out = ckk_decide(&p);
            assert!(out.feasible);
            assert_eq!(out.best_difference, k);
            assert_eq!(out.stats.branches, 0);
        }
    }

    #[test]
    fn ckk_negative_threshold_rejects_without_search() {
        let p = PartitionProblem::new(vec![3, 3], -1);
        let out = ckk_decide(&p);
        assert!(!out.feasible);
        assert_eq!(out.stats.branches, 0);
        check_outcome(&p.numbers, &out);
    }

    #[test]
    fn ckk_zeros_and_duplicates() {
        let numbers = vec![0, 0, 7, 7, 7, 0, 3, 3];
        let out = ckk_optimize(&numbers);
        assert_eq!(out.best_difference, brute_force_partition(&numbers).unwrap());
        check_outcome(&numbers, &out);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_partition(&[]).unwrap(), 0);
        assert_eq!(brute_force_partition(&[3, 1, 1]).unwrap(), 1);
        let powers: Vec<u64> = (0..10).map(|j| 1 << j).collect();
        assert_eq!(brute_force_partition(&powers).unwrap(), 1);
    }

    #[test]
    fn brute_force_guard() {
        let numbers = vec![1u64; BRUTE_FORCE_MAX_LEN + 1];
        assert_eq!(
            brute_force_partition(&numbers),
            Err(PartitionError::TooLarge {
                len: 25,
                max: BRUTE_FORCE_MAX_LEN
            })
        );
    }

    #[test]
    fn first_leaf_is_greedy() {
        // the exhaustive search never does worse than the greedy first dive
        let numbers = vec![8, 7, 6, 5, 4, 19, 23, 2];
        let greedy = kk_heuristic(&PartitionProblem::new(numbers.clone(), 0));
        let exact = ckk_optimize(&numbers);
        assert!(greedy.best_difference >= exact.best_difference);
    }
}
