//! Permutation groups on small point sets, orbit partitions of x-subsets and
//! the tactical-sequence condition.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::binom::binomial_u64;
use crate::error::{Error, Result};
use crate::subset::{k_subsets, Subset, MAX_POINTS};

/// Default bound on the number of group elements materialized by
/// [`GeneratorSet::order`].
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// How point labels in textual input map to internal indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointBase {
    /// Labels `0..v` are used as is.
    #[default]
    Zero,
    /// Labels `1..=v`; label `p` becomes index `p - 1`.
    One,
}

impl PointBase {
    pub fn offset(self) -> usize {
        match self {
            PointBase::Zero => 0,
            PointBase::One => 1,
        }
    }

    /// Converts a written label into an internal index.
    pub fn to_index(self, label: usize, v: usize) -> Result<usize> {
        let off = self.offset();
        if label < off || label - off >= v {
            return Err(Error::PointOutOfRange { point: label, v });
        }
        Ok(label - off)
    }

    pub fn to_label(self, index: usize) -> usize {
        index + self.offset()
    }
}

/// A bijection of `{0, …, v-1}`; `images[i]` is the image of point `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(v: usize) -> Self {
        assert!(v <= MAX_POINTS, "at most {MAX_POINTS} points");
        Self { images: (0..v as u8).collect() }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let v = images.len();
        if v > MAX_POINTS {
            return Err(Error::GroundSetTooLarge { v });
        }
        let mut seen = vec![false; v];
        for &img in images {
            if img >= v {
                return Err(Error::PointOutOfRange { point: img, v });
            }
            if core::mem::replace(&mut seen[img], true) {
                return Err(Error::NotABijection);
            }
        }
        Ok(Self { images: images.iter().map(|&i| i as u8).collect() })
    }

    /// Parses disjoint-cycle notation such as `"(1 2 3)(4,5,6)"`.
    ///
    /// Points missing from every cycle are fixed; the empty string is the
    /// identity. Cycle elements are separated by spaces and/or commas.
    pub fn parse_cycles(text: &str, v: usize, base: PointBase) -> Result<Self> {
        if v > MAX_POINTS {
            return Err(Error::GroundSetTooLarge { v });
        }
        let mut images: Vec<u8> = (0..v as u8).collect();
        let mut used = vec![false; v];
        let bytes = text.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'(' {
                return Err(Error::MalformedCycles { position: pos, reason: "expected '('" });
            }
            pos += 1;
            let mut cycle: Vec<usize> = Vec::new();
            loop {
                while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',') {
                    pos += 1;
                }
                if pos == bytes.len() {
                    return Err(Error::MalformedCycles { position: pos, reason: "unclosed cycle" });
                }
                match bytes[pos] {
                    b')' => {
                        pos += 1;
                        break;
                    }
                    b'0'..=b'9' => {
                        let start = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        let label: usize = text[start..pos].parse().map_err(|_| {
                            Error::MalformedCycles { position: start, reason: "number too large" }
                        })?;
                        let idx = base.to_index(label, v)?;
                        if core::mem::replace(&mut used[idx], true) {
                            return Err(Error::RepeatedPoint { point: label });
                        }
                        cycle.push(idx);
                    }
                    _ => {
                        return Err(Error::MalformedCycles {
                            position: pos,
                            reason: "unexpected character",
                        })
                    }
                }
            }
            if cycle.is_empty() {
                return Err(Error::MalformedCycles { position: pos - 1, reason: "empty cycle" });
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()] as u8;
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    pub fn apply_subset(&self, s: Subset) -> Subset {
        let bits = s.points().fold(0u64, |acc, p| acc | 1 << self.images[p]);
        Subset::from_bits(bits)
    }

    /// Disjoint-cycle notation of the non-trivial cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }
}

/// Generators of a permutation group on `v` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    v: usize,
    generators: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn new(v: usize, generators: Vec<Permutation>) -> Result<Self> {
        if v > MAX_POINTS {
            return Err(Error::GroundSetTooLarge { v });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != v) {
            return Err(Error::DegreeMismatch { expected: v, found: g.degree() });
        }
        Ok(Self { v, generators })
    }

    pub fn trivial(v: usize) -> Result<Self> {
        Self::new(v, Vec::new())
    }

    /// Parses one cycle-notation string per generator.
    pub fn parse<S: AsRef<str>>(v: usize, cycles: &[S], base: PointBase) -> Result<Self> {
        let generators = cycles
            .iter()
            .map(|c| Permutation::parse_cycles(c.as_ref(), v, base))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v, generators)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All group elements, by breadth-first closure under the generators.
    pub fn elements(&self, cap: usize) -> Result<BTreeSet<Permutation>> {
        let id = Permutation::identity(self.v);
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = g.then(s);
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(seen)
    }

    /// Order of the generated group.
    pub fn order(&self, cap: usize) -> Result<usize> {
        self.elements(cap).map(|e| e.len())
    }
}

/// One part of a partition of the x-subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCell {
    members: Vec<Subset>,
}

impl PartitionCell {
    /// Members are stored sorted; the representative is the smallest one.
    fn new(mut members: Vec<Subset>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn representative(&self) -> Subset {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// An ordered partition of all x-subsets of the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    x: usize,
    cells: Vec<PartitionCell>,
    index: BTreeMap<Subset, usize>,
}

impl Partition {
    /// Checks that `cells` partition the x-subsets of `{0, …, v-1}`, keeping
    /// the given cell order.
    pub fn from_cells(v: usize, x: usize, cells: Vec<Vec<Subset>>) -> Result<Self> {
        let bad = |reason: alloc::string::String| Error::NotAPartition { level: x, reason };
        let mut index = BTreeMap::new();
        let mut out = Vec::with_capacity(cells.len());
        for (ci, members) in cells.into_iter().enumerate() {
            if members.is_empty() {
                return Err(bad(format!("cell {ci} is empty")));
            }
            for &m in &members {
                if m.len() != x || !m.fits(v) {
                    return Err(bad(format!("{m} is not a {x}-subset of the {v} points")));
                }
                if index.insert(m, ci).is_some() {
                    return Err(bad(format!("{m} occurs twice")));
                }
            }
            out.push(PartitionCell::new(members));
        }
        let total = binomial_u64(v as u64, x as u64).unwrap_or(u64::MAX);
        if index.len() as u64 != total {
            return Err(bad(format!("covers {} of {total} subsets", index.len())));
        }
        Ok(Self { x, cells: out, index })
    }

    pub fn subset_size(&self) -> usize {
        self.x
    }

    pub fn cells(&self) -> &[PartitionCell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &PartitionCell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the cell containing `s`.
    pub fn cell_of(&self, s: Subset) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// Cell sizes in cell order.
    pub fn sizes(&self) -> Vec<u64> {
        self.cells.iter().map(|c| c.len() as u64).collect()
    }

    pub fn representatives(&self) -> Vec<Subset> {
        self.cells.iter().map(PartitionCell::representative).collect()
    }

    /// Every x-subset with the index of its cell, in lexicographic order.
    pub fn members_with_cells(&self) -> impl Iterator<Item = (Subset, usize)> + '_ {
        self.index.iter().map(|(&s, &c)| (s, c))
    }

    /// Reorders cells so that position `i` holds the old cell `order[i]`.
    pub fn reorder(&mut self, order: &[usize]) -> Result<()> {
        let n = self.cells.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::Invalid(format!("cell order lists {} of {n} cells", order.len())));
        }
        for &o in order {
            if o >= n || core::mem::replace(&mut seen[o], true) {
                return Err(Error::Invalid(format!("cell order is not a permutation of 0..{n}")));
            }
        }
        let mut new_pos = vec![0; n];
        for (pos, &old) in order.iter().enumerate() {
            new_pos[old] = pos;
        }
        self.cells = order.iter().map(|&o| self.cells[o].clone()).collect();
        for c in self.index.values_mut() {
            *c = new_pos[*c];
        }
        Ok(())
    }

    /// Reorders cells so that the `i`-th cell is the one containing `members[i]`.
    pub fn order_by_members(&mut self, members: &[Subset]) -> Result<()> {
        let order = members
            .iter()
            .map(|&m| {
                self.cell_of(m)
                    .ok_or_else(|| Error::Invalid(format!("{m} is not a {}-subset in this partition", self.x)))
            })
            .collect::<Result<Vec<_>>>()?;
        self.reorder(&order)
    }
}

/// Orbits of the group generated by `g` on the x-subsets, ordered by their
/// lexicographically smallest member.
pub fn orbit_partition(g: &GeneratorSet, x: usize) -> Result<Partition> {
    let v = g.v();
    if x > v {
        return Err(Error::LevelOutOfRange { level: x, max: v });
    }
    let mut index: BTreeMap<Subset, usize> = BTreeMap::new();
    let mut cells: Vec<PartitionCell> = Vec::new();
    // Lexicographic scan: the first unvisited subset is the minimum of its orbit.
    for start in k_subsets(v, x) {
        if index.contains_key(&start) {
            continue;
        }
        let id = cells.len();
        let mut members = vec![start];
        index.insert(start, id);
        let mut head = 0;
        while head < members.len() {
            let s = members[head];
            head += 1;
            for gen in g.generators() {
                let img = gen.apply_subset(s);
                if let alloc::collections::btree_map::Entry::Vacant(e) = index.entry(img) {
                    e.insert(id);
                    members.push(img);
                }
            }
        }
        cells.push(PartitionCell::new(members));
    }
    Ok(Partition { x, cells, index })
}

/// A sequence of partitions `𝔓_0, …, 𝔓_s` of the x-subsets of a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TacticalSequence {
    v: usize,
    levels: Vec<Partition>,
}

impl TacticalSequence {
    /// Orbit partitions for `x = 0..=s`.
    pub fn from_group(g: &GeneratorSet, s: usize) -> Result<Self> {
        if s > g.v() {
            return Err(Error::LevelOutOfRange { level: s, max: g.v() });
        }
        let levels = (0..=s).map(|x| orbit_partition(g, x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { v: g.v(), levels })
    }

    /// Wraps explicit partitions, checking only that each level partitions
    /// the x-subsets. Use [`validate_tactical`] for the tactical condition.
    pub fn from_partitions(v: usize, levels: Vec<Vec<Vec<Subset>>>) -> Result<Self> {
        if v > MAX_POINTS {
            return Err(Error::GroundSetTooLarge { v });
        }
        if levels.is_empty() {
            return Err(Error::Invalid("a sequence needs at least level 0".into()));
        }
        if levels.len() > v + 1 {
            return Err(Error::LevelOutOfRange { level: levels.len() - 1, max: v });
        }
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(x, cells)| Partition::from_cells(v, x, cells))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { v, levels })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Highest level `s` present.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, x: usize) -> Result<&Partition> {
        self.levels.get(x).ok_or(Error::LevelOutOfRange { level: x, max: self.depth() })
    }

    pub fn levels(&self) -> &[Partition] {
        &self.levels
    }

    pub fn reorder_level(&mut self, x: usize, order: &[usize]) -> Result<()> {
        let max = self.depth();
        self.levels.get_mut(x).ok_or(Error::LevelOutOfRange { level: x, max })?.reorder(order)
    }

    pub fn order_level_by(&mut self, x: usize, members: &[Subset]) -> Result<()> {
        let max = self.depth();
        self.levels
            .get_mut(x)
            .ok_or(Error::LevelOutOfRange { level: x, max })?
            .order_by_members(members)
    }
}

/// Builds the orbit sequence `(𝔓_0, …, 𝔓_s)` of `g`.
pub fn build_sequence(g: &GeneratorSet, s: usize) -> Result<TacticalSequence> {
    TacticalSequence::from_group(g, s)
}

/// Which containment count failed to be representative-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    /// `#{Y ∈ 𝒴 : X ⊆ Y}` differs between two members `X` of the lower cell.
    Supersets,
    /// `#{X ∈ 𝒳 : X ⊆ Y}` differs between two members `Y` of the upper cell.
    Subsets,
}

/// Witness that a sequence of partitions is not tactical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TacticalViolation {
    pub lower_level: usize,
    pub upper_level: usize,
    pub lower_cell: usize,
    pub upper_cell: usize,
    pub kind: CountKind,
    /// Two members of the varying cell with their differing counts.
    pub witnesses: [(Subset, u64); 2],
}

/// Checks that every `R`/`K` count is independent of the chosen
/// representatives, for all level pairs `x <= y` of the sequence.
pub fn validate_tactical(seq: &TacticalSequence) -> core::result::Result<(), TacticalViolation> {
    for y in 0..=seq.depth() {
        let upper = &seq.levels[y];
        let upper_members: Vec<(Subset, usize)> = upper.members_with_cells().collect();
        for x in 0..=y {
            let lower = &seq.levels[x];
            let lower_members: Vec<(Subset, usize)> = lower.members_with_cells().collect();

            for (cx, cell) in lower.cells().iter().enumerate() {
                let mut reference: Option<(Subset, Vec<u64>)> = None;
                for &xs in cell.members() {
                    let mut counts = vec![0u64; upper.len()];
                    for &(ys, cy) in &upper_members {
                        if xs.is_subset_of(ys) {
                            counts[cy] += 1;
                        }
                    }
                    match &reference {
                        None => reference = Some((xs, counts)),
                        Some((r, rc)) => {
                            if let Some(cy) = (0..counts.len()).find(|&i| counts[i] != rc[i]) {
                                return Err(TacticalViolation {
                                    lower_level: x,
                                    upper_level: y,
                                    lower_cell: cx,
                                    upper_cell: cy,
                                    kind: CountKind::Supersets,
                                    witnesses: [(*r, rc[cy]), (xs, counts[cy])],
                                });
                            }
                        }
                    }
                }
            }

            for (cy, cell) in upper.cells().iter().enumerate() {
                let mut reference: Option<(Subset, Vec<u64>)> = None;
                for &ys in cell.members() {
                    let mut counts = vec![0u64; lower.len()];
                    for &(xs, cx) in &lower_members {
                        if xs.is_subset_of(ys) {
                            counts[cx] += 1;
                        }
                    }
                    match &reference {
                        None => reference = Some((ys, counts)),
                        Some((r, rc)) => {
                            if let Some(cx) = (0..counts.len()).find(|&i| counts[i] != rc[i]) {
                                return Err(TacticalViolation {
                                    lower_level: x,
                                    upper_level: y,
                                    lower_cell: cx,
                                    upper_cell: cy,
                                    kind: CountKind::Subsets,
                                    witnesses: [(*r, rc[cx]), (ys, counts[cx])],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
