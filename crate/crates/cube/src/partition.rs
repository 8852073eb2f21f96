use crate::CubeError;
use std::fmt;
use std::str::FromStr;

/// A partition of the coordinate set {0, ..., N-1} into d nonempty classes.
///
/// Classes keep their construction order; inside a class the indices are
/// sorted. Per-class bit masks are cached so that class-restricted Hamming
/// distances cost a few word operations.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    classes: Vec<Vec<usize>>,
    masks: Vec<Vec<u64>>,
}

impl Partition {
    /// Build from explicit classes. The classes must be nonempty, disjoint,
    /// and cover 0..n exactly.
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self, CubeError> {
        if n == 0 {
            return Err(CubeError::InvalidPartition("dimension 0".into()));
        }
        if classes.is_empty() {
            return Err(CubeError::InvalidPartition("no classes".into()));
        }
        let mut seen = vec![false; n];
        let mut classes: Vec<Vec<usize>> = classes;
        for class in classes.iter_mut() {
            if class.is_empty() {
                return Err(CubeError::InvalidPartition("empty class".into()));
            }
            class.sort_unstable();
            for &i in class.iter() {
                if i >= n {
                    return Err(CubeError::InvalidPartition(format!(
                        "index {i} out of range 0..{n}"
                    )));
                }
                if seen[i] {
                    return Err(CubeError::InvalidPartition(format!(
                        "index {i} appears twice"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(CubeError::InvalidPartition(
                "classes do not cover every coordinate".into(),
            ));
        }
        let words = n.div_ceil(64);
        let masks = classes
            .iter()
            .map(|class| {
                let mut m = vec![0u64; words];
                for &i in class {
                    m[i / 64] |= 1 << (i % 64);
                }
                m
            })
            .collect();
        Ok(Partition { n, classes, masks })
    }

    /// The trivial single-class partition.
    pub fn trivial(n: usize) -> Self {
        Partition::new(n, vec![(0..n).collect()]).expect("trivial partition is valid")
    }

    /// Consecutive blocks of the given sizes (the "2,2,4" textual form).
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, CubeError> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(CubeError::InvalidPartition(
                "size list must be nonempty with positive entries".into(),
            ));
        }
        let n: usize = sizes.iter().sum();
        let mut classes = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            classes.push((start..start + s).collect());
            start += s;
        }
        Partition::new(n, classes)
    }

    /// An equipartition of n coordinates into d classes; when d does not
    /// divide n the first `n % d` classes get one extra coordinate.
    pub fn equipartition(n: usize, d: usize) -> Result<Self, CubeError> {
        if d == 0 || d > n {
            return Err(CubeError::InvalidPartition(format!(
                "cannot split {n} coordinates into {d} classes"
            )));
        }
        let base = n / d;
        let extra = n % d;
        let sizes: Vec<usize> = (0..d).map(|k| base + usize::from(k < extra)).collect();
        Partition::from_sizes(&sizes)
    }

    /// All-singletons partition (d = N).
    pub fn singletons(n: usize) -> Self {
        Partition::new(n, (0..n).map(|i| vec![i]).collect()).expect("singletons are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of classes d.
    pub fn d(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, k: usize) -> &[usize] {
        &self.classes[k]
    }

    /// |Lambda_k|.
    pub fn size(&self, k: usize) -> usize {
        self.classes[k].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// Packed bit mask of class k (same word layout as `SpinConfig`).
    pub fn mask(&self, k: usize) -> &[u64] {
        &self.masks[k]
    }

    /// Class index of coordinate i.
    pub fn class_of(&self, i: usize) -> usize {
        assert!(i < self.n);
        self.masks
            .iter()
            .position(|m| m[i / 64] >> (i % 64) & 1 == 1)
            .expect("partition covers all coordinates")
    }

    /// True when every class is a consecutive index block in class order,
    /// i.e. the partition is expressible as a size list.
    pub fn is_consecutive(&self) -> bool {
        let mut expect = 0;
        for class in &self.classes {
            for (off, &i) in class.iter().enumerate() {
                if i != expect + off {
                    return false;
                }
            }
            expect += class.len();
        }
        true
    }
}

impl fmt::Display for Partition {
    /// Size-list form when the classes are consecutive blocks, otherwise the
    /// explicit bracket form with 1-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_consecutive() {
            let sizes: Vec<String> = self.classes.iter().map(|c| c.len().to_string()).collect();
            f.write_str(&sizes.join(","))
        } else {
            f.write_str("[")?;
            for (k, class) in self.classes.iter().enumerate() {
                if k > 0 {
                    f.write_str("|")?;
                }
                let ids: Vec<String> = class.iter().map(|i| (i + 1).to_string()).collect();
                f.write_str(&ids.join(","))?;
            }
            f.write_str("]")
        }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition(N={}, {})", self.n, self)
    }
}

impl FromStr for Partition {
    type Err = CubeError;

    /// Parse either the size-list form "2,2,4" (consecutive blocks) or the
    /// explicit form "[1,2|3,4]" with 1-based coordinate indices.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| CubeError::Parse(format!("unterminated class list: {s}")))?;
            let mut classes = Vec::new();
            let mut max_index = 0usize;
            for chunk in body.split('|') {
                let mut class = Vec::new();
                for tok in chunk.split(',') {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    let v: usize = tok
                        .parse()
                        .map_err(|_| CubeError::Parse(format!("bad index '{tok}'")))?;
                    if v == 0 {
                        return Err(CubeError::Parse("indices are 1-based".into()));
                    }
                    max_index = max_index.max(v);
                    class.push(v - 1);
                }
                classes.push(class);
            }
            Partition::new(max_index, classes)
        } else {
            let sizes: Result<Vec<usize>, _> = s
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| CubeError::Parse(format!("bad size '{tok}'")))
                })
                .collect();
            Partition::from_sizes(&sizes?)
        }
    }
}
