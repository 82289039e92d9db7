use super::{ModelError, Value, Var};

/// Variables `0..n` and their finite integer domains, shared by learner and user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    domains: Vec<Vec<Value>>,
}

impl Vocabulary {
    /// Builds a vocabulary; each domain is sorted ascending and must be
    /// non-empty and duplicate-free.
    pub fn new(domains: Vec<Vec<Value>>) -> Result<Self, ModelError> {
        if domains.is_empty() {
            return Err(ModelError::NoVariables);
        }
        let mut out = Vec::with_capacity(domains.len());
        for (var, mut dom) in domains.into_iter().enumerate() {
            if dom.is_empty() {
                return Err(ModelError::EmptyDomain(var));
            }
            dom.sort_unstable();
            if dom.windows(2).any(|w| w[0] == w[1]) {
                return Err(ModelError::DuplicateDomainValue(var));
            }
            out.push(dom);
        }
        Ok(Vocabulary { domains: out })
    }

    /// `n` variables sharing the domain `lo..=hi`.
    pub fn uniform(n: usize, lo: Value, hi: Value) -> Result<Self, ModelError> {
        if hi < lo {
            return Err(ModelError::EmptyDomain(0));
        }
        Self::new(vec![(lo..=hi).collect(); n])
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn vars(&self) -> std::ops::Range<Var> {
        0..self.domains.len()
    }

    pub fn domain(&self, var: Var) -> &[Value] {
        &self.domains[var]
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn contains(&self, var: Var, value: Value) -> bool {
        var < self.len() && self.domains[var].binary_search(&value).is_ok()
    }

    /// The common `(min, max)` range when every domain is the same contiguous range.
    pub fn shared_range(&self) -> Option<(Value, Value)> {
        let first = &self.domains[0];
        let (lo, hi) = (first[0], *first.last()?);
        let contiguous = (hi - lo) as usize + 1 == first.len();
        (contiguous && self.domains.iter().all(|d| d == first)).then_some((lo, hi))
    }

    pub fn max_domain_size(&self) -> usize {
        self.domains.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_domains() {
        assert!(matches!(Vocabulary::new(vec![]), Err(ModelError::NoVariables)));
        assert!(matches!(Vocabulary::new(vec![vec![1], vec![]]), Err(ModelError::EmptyDomain(1))));
        assert!(matches!(
            Vocabulary::new(vec![vec![2, 1, 2]]),
            Err(ModelError::DuplicateDomainValue(0))
        ));
    }

    #[test]
    fn domains_are_sorted_and_ranges_detected() {
        let v = Vocabulary::new(vec![vec![3, 1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(v.domain(0), &[1, 2, 3]);
        assert_eq!(v.shared_range(), Some((1, 3)));
        assert!(v.contains(1, 3));
        assert!(!v.contains(1, 4));
        let gappy = Vocabulary::new(vec![vec![1, 5]]).unwrap();
        assert_eq!(gappy.shared_range(), None);
    }
}
