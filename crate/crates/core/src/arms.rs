use std::fmt;

/// Sorted, duplicate-free set of arm ids.
///
/// Active sets hold a handful of arms and are scanned every step, so a sorted
/// vector beats a tree or hash set here.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArmSet(Vec<usize>);

impl ArmSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(arm: usize) -> Self {
        Self(vec![arm])
    }

    /// Arms `start..end`.
    pub fn range(start: usize, end: usize) -> Self {
        Self((start..end).collect())
    }

    pub fn contains(&self, arm: usize) -> bool {
        self.0.binary_search(&arm).is_ok()
    }

    /// Returns `true` if the arm was not already present.
    pub fn insert(&mut self, arm: usize) -> bool {
        match self.0.binary_search(&arm) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, arm);
                true
            }
        }
    }

    pub fn remove(&mut self, arm: usize) -> bool {
        match self.0.binary_search(&arm) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arms in increasing id order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max_arm(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &ArmSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    pub fn union(&self, other: &ArmSet) -> ArmSet {
        let mut out = self.clone();
        for a in other.iter() {
            out.insert(a);
        }
        out
    }

    /// `self \ other`.
    pub fn difference(&self, other: &ArmSet) -> ArmSet {
        Self(self.iter().filter(|&a| !other.contains(a)).collect())
    }

    pub fn with(&self, arm: usize) -> ArmSet {
        let mut out = self.clone();
        out.insert(arm);
        out
    }
}

impl FromIterator<usize> for ArmSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl<const N: usize> From<[usize; N]> for ArmSet {
    fn from(arms: [usize; N]) -> Self {
        arms.into_iter().collect()
    }
}

impl fmt::Display for ArmSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}
