//! Problem corpora: exhaustive profile spaces (optionally canonicalized under
//! relabeling) and seeded random samples.

use crate::error::{guard, Result};
use crate::model::{Preference, Problem};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest number of objects whose preference orders are enumerated.
pub const MAX_ENUMERATED_OBJECTS: usize = 6;

/// Largest profile space materialized by [`ProfileSpace`].
pub const MAX_PROFILES: usize = 2_000_000;

/// Every strict order over `m` objects, lexicographic.
pub fn all_preferences(m: usize) -> Result<Vec<Preference>> {
    guard("objects", m, MAX_ENUMERATED_OBJECTS)?;
    Ok((0..m)
        .permutations(m)
        .map(|order| Preference::new(order).expect("permutation"))
        .collect())
}

#[derive(Debug, Clone)]
enum Layout {
    /// Index decoded in base `m!`, agent 1 least significant.
    Full,
    /// Sorted multisets of preference indices; optionally prefixed by the
    /// identity order for agent 1.
    Canonical {
        multisets: Vec<Vec<usize>>,
        fix_first: bool,
    },
}

/// An indexable set of profiles over fixed agents and quotas.
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    n: usize,
    quotas: Vec<usize>,
    preferences: Vec<Preference>,
    layout: Layout,
    len: usize,
}

impl ProfileSpace {
    /// All `m!^n` profiles.
    pub fn full(n: usize, quotas: Vec<usize>) -> Result<Self> {
        let preferences = all_preferences(quotas.len())?;
        let len = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(preferences.len()));
        guard("profiles", len.unwrap_or(usize::MAX), MAX_PROFILES)?;
        Ok(Self {
            n,
            quotas,
            preferences,
            layout: Layout::Full,
            len: len.expect("guarded"),
        })
    }

    /// One profile per class under agent relabeling, and also under object
    /// relabeling when every quota is equal. Only valid for rules and
    /// properties invariant under those relabelings.
    pub fn canonical(n: usize, quotas: Vec<usize>) -> Result<Self> {
        let preferences = all_preferences(quotas.len())?;
        let fix_first = n > 0 && quotas.iter().all_equal();
        let free = if fix_first { n - 1 } else { n };
        let count = multiset_count(preferences.len(), free);
        guard("profiles", count.unwrap_or(usize::MAX), MAX_PROFILES)?;
        let multisets: Vec<Vec<usize>> = (0..preferences.len())
            .combinations_with_replacement(free)
            .collect();
        let len = multisets.len();
        Ok(Self {
            n,
            quotas,
            preferences,
            layout: Layout::Canonical {
                multisets,
                fix_first,
            },
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn quotas(&self) -> &[usize] {
        &self.quotas
    }

    /// Preference indices of profile `index`.
    pub fn profile_indices(&self, index: usize) -> Vec<usize> {
        assert!(index < self.len, "profile index {index} out of range");
        match &self.layout {
            Layout::Full => {
                let base = self.preferences.len();
                let mut rest = index;
                (0..self.n)
                    .map(|_| {
                        let d = rest % base;
                        rest /= base;
                        d
                    })
                    .collect()
            }
            Layout::Canonical {
                multisets,
                fix_first,
            } => {
                let mut out = Vec::with_capacity(self.n);
                if *fix_first {
                    out.push(0);
                }
                out.extend_from_slice(&multisets[index]);
                out
            }
        }
    }

    pub fn problem(&self, index: usize) -> Problem {
        let profile = self
            .profile_indices(index)
            .into_iter()
            .map(|p| self.preferences[p].clone())
            .collect();
        Problem::from_indices(self.quotas.clone(), profile).expect("supply covers agents")
    }

    pub fn iter(&self) -> impl Iterator<Item = Problem> + '_ {
        (0..self.len).map(|i| self.problem(i))
    }
}

fn multiset_count(kinds: usize, size: usize) -> Option<usize> {
    // C(kinds + size - 1, size)
    let mut acc: usize = 1;
    for i in 0..size {
        acc = acc.checked_mul(kinds + i)? / (i + 1);
    }
    Some(acc)
}

/// `(n, m)` pairs with `1 <= n <= max_agents`, `n <= m <= max_objects`,
/// ordered by `n` then `m`.
pub fn unit_sizes(max_agents: usize, max_objects: usize) -> Vec<(usize, usize)> {
    (1..=max_agents)
        .flat_map(|n| (n..=max_objects).map(move |m| (n, m)))
        .collect()
}

/// How quotas of random problems are drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotaRule {
    Unit,
    Fixed(Vec<usize>),
    /// Each quota uniform in `1..=max`, redrawn until supply covers the
    /// agents.
    Random {
        max: usize,
    },
}

/// A problem with uniformly random strict preferences.
pub fn random_problem<R: Rng>(rng: &mut R, n: usize, m: usize, quotas: &QuotaRule) -> Problem {
    let quotas = match quotas {
        QuotaRule::Unit => vec![1; m],
        QuotaRule::Fixed(q) => q.clone(),
        QuotaRule::Random { max } => loop {
            let q: Vec<usize> = (0..m).map(|_| rng.random_range(1..=*max)).collect();
            if q.iter().sum::<usize>() >= n {
                break q;
            }
        },
    };
    let profile = (0..n)
        .map(|_| {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(rng);
            Preference::new(order).expect("permutation")
        })
        .collect();
    Problem::from_indices(quotas, profile).expect("supply covers agents")
}

/// `count` random problems from a fixed seed; bit-reproducible.
pub fn random_corpus(
    seed: u64,
    count: usize,
    n: usize,
    m: usize,
    quotas: &QuotaRule,
) -> Vec<Problem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_problem(&mut rng, n, m, quotas))
        .collect()
}
