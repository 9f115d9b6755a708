//! Union-find variants used by the enumerators.

/// Outcome of adding one edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Union {
    Merged,
    /// Both ends already in one component.
    Cycle,
    /// The merge would join two different labeled blocks.
    Conflict,
}

/// Union by rank, no path compression, with an undo log and an optional
/// block label per component.
#[derive(Clone, Debug)]
pub struct RollbackUf {
    parent: Vec<usize>,
    rank: Vec<u8>,
    label: Vec<Option<usize>>,
    log: Vec<(usize, usize, u8, Option<usize>)>,
}

impl RollbackUf {
    pub fn new(n: usize) -> Self {
        RollbackUf {
            parent: (0..n).collect(),
            rank: vec![0; n],
            label: vec![None; n],
            log: Vec::new(),
        }
    }

    pub fn with_labels(labels: Vec<Option<usize>>) -> Self {
        let mut uf = RollbackUf::new(labels.len());
        uf.label = labels;
        uf
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn label(&self, x: usize) -> Option<usize> {
        self.label[self.find(x)]
    }

    pub fn checkpoint(&self) -> usize {
        self.log.len()
    }

    pub fn union(&mut self, a: usize, b: usize) -> Union {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Union::Cycle;
        }
        if let (Some(x), Some(y)) = (self.label[ra], self.label[rb]) {
            if x != y {
                return Union::Conflict;
            }
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.log.push((rb, ra, self.rank[ra], self.label[ra]));
        self.parent[rb] = ra;
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] += 1;
        }
        if self.label[ra].is_none() {
            self.label[ra] = self.label[rb];
        }
        Union::Merged
    }

    pub fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (child, root, rank, label) = self.log.pop().unwrap();
            self.parent[child] = child;
            self.rank[root] = rank;
            self.label[root] = label;
        }
    }
}

/// Union-find over a quotient by a rank-one translation group.
///
/// Each element stands for the orbit of a lifted vertex. `find(x) = (r, s)`
/// means translate 0 of `x` lies in the lifted component of translate `s`
/// of `r`.
#[derive(Clone, Debug)]
pub struct ShiftUf {
    parent: Vec<usize>,
    pot: Vec<i64>,
}

impl ShiftUf {
    pub fn new(n: usize) -> Self {
        ShiftUf {
            parent: (0..n).collect(),
            pot: vec![0; n],
        }
    }

    /// The root of `x` and the translate of the root joined to `x`'s 0.
    pub fn find(&self, mut x: usize) -> (usize, i64) {
        let mut s = 0;
        while self.parent[x] != x {
            s += self.pot[x];
            x = self.parent[x];
        }
        (x, s)
    }

    /// Joins translate `sa` of `a` with translate `sb` of `b`.
    ///
    /// Fails when both already share a component: in the lift that is either
    /// a cycle or an infinite component wrapping the cylinder.
    pub fn union(&mut self, a: usize, sa: i64, b: usize, sb: i64) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        self.pot[rb] = pa + sa - pb - sb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rollback_restores_state() {
        let mut uf = RollbackUf::with_labels(vec![Some(0), Some(1), None, None]);
        let mark = uf.checkpoint();
        assert_eq!(uf.union(0, 2), Union::Merged);
        assert_eq!(uf.union(2, 1), Union::Conflict);
        assert_eq!(uf.union(2, 0), Union::Cycle);
        assert_eq!(uf.label(2), Some(0));
        uf.rollback(mark);
        assert_eq!(uf.find(2), 2);
        assert_eq!(uf.label(2), None);
        assert_eq!(uf.union(2, 1), Union::Merged);
    }

    #[test]
    fn shift_potentials() {
        let mut uf = ShiftUf::new(3);
        assert!(uf.union(0, 0, 1, 1));
        assert!(uf.union(1, 0, 2, 0));
        let (r0, s0) = uf.find(0);
        let (r2, s2) = uf.find(2);
        assert_eq!(r0, r2);
        // 0@0 ~ 1@1 ~ 2@1
        assert_eq!(s2 - s0, -1);
        assert!(!uf.union(0, 0, 2, 5));
    }
}
