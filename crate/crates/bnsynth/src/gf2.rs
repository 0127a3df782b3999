//! Dense linear systems over the two-element field.

/// A packed bit vector of fixed width.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    width: usize,
}

impl BitVec {
    pub fn zeros(width: usize) -> BitVec {
        BitVec {
            words: vec![0; width.div_ceil(64)],
            width,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.width);
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_set(&self) -> Option<usize> {
        for (wi, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Parity of the AND of two vectors, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.width, other.width);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&i| self.get(i))
    }
}

/// One equation: a coefficient row and its right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Row {
    pub coeffs: BitVec,
    pub rhs: bool,
}

/// A dense equation system over named variables.
#[derive(Debug, Clone)]
pub struct Gf2System {
    variables: Vec<String>,
    rows: Vec<Gf2Row>,
}

/// Outcome of Gaussian elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Outcome {
    /// One satisfying assignment; free variables are forced to 0, so the
    /// result is deterministic.
    Solution(Vec<bool>),
    Unsatisfiable,
}

impl Gf2System {
    pub fn new(variables: Vec<String>) -> Gf2System {
        Gf2System {
            variables,
            rows: Vec::new(),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[Gf2Row] {
        &self.rows
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// Adds the equation `sum of vars in `coeff_vars` = rhs`. Repeated
    /// mentions of a variable cancel out.
    pub fn add_row<I: IntoIterator<Item = usize>>(&mut self, coeff_vars: I, rhs: bool) {
        let mut coeffs = BitVec::zeros(self.variables.len());
        for v in coeff_vars {
            coeffs.flip(v);
        }
        self.rows.push(Gf2Row { coeffs, rhs });
    }

    pub fn push_row(&mut self, row: Gf2Row) {
        debug_assert_eq!(row.coeffs.width(), self.variables.len());
        self.rows.push(row);
    }

    /// Gaussian elimination on a copy of the rows.
    pub fn solve(&self) -> Gf2Outcome {
        solve_rows(self.variables.len(), self.rows.clone())
    }

    /// True if `assignment` satisfies every row.
    pub fn check(&self, assignment: &[bool]) -> bool {
        let mut vec = BitVec::zeros(self.variables.len());
        for (i, &v) in assignment.iter().enumerate() {
            vec.set(i, v);
        }
        self.rows.iter().all(|r| r.coeffs.dot(&vec) == r.rhs)
    }
}

/// Elimination core shared with internal callers that track variables by
/// index only.
pub fn solve_rows(n_vars: usize, mut rows: Vec<Gf2Row>) -> Gf2Outcome {
    let mut pivot_of_row: Vec<usize> = Vec::with_capacity(rows.len());
    let mut reduced: Vec<Gf2Row> = Vec::with_capacity(rows.len());
    for mut row in rows.drain(..) {
        for (r, &p) in reduced.iter().zip(&pivot_of_row) {
            if row.coeffs.get(p) {
                row.coeffs.xor_assign(&r.coeffs);
                row.rhs ^= r.rhs;
            }
        }
        match row.coeffs.first_set() {
            None => {
                if row.rhs {
                    return Gf2Outcome::Unsatisfiable;
                }
            }
            Some(p) => {
                pivot_of_row.push(p);
                reduced.push(row);
            }
        }
    }
    // Back-substitution with free variables pinned to 0: a pivot variable is
    // the sum of the row's other (all later-eliminated or free) variables.
    let mut assignment = vec![false; n_vars];
    for ix in (0..reduced.len()).rev() {
        let p = pivot_of_row[ix];
        let row = &reduced[ix];
        let mut v = row.rhs;
        for var in row.coeffs.iter_set() {
            if var != p {
                v ^= assignment[var];
            }
        }
        assignment[p] = v;
    }
    Gf2Outcome::Solution(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(vars: &[&str]) -> Gf2System {
        Gf2System::new(vars.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn single_equation() {
        let mut s = sys(&["x"]);
        s.add_row([0], true);
        assert_eq!(s.solve(), Gf2Outcome::Solution(vec![true]));
    }

    #[test]
    fn substitution() {
        let mut s = sys(&["x", "y"]);
        s.add_row([0, 1], false);
        s.add_row([0], true);
        assert_eq!(s.solve(), Gf2Outcome::Solution(vec![true, true]));
    }

    #[test]
    fn contradiction() {
        let mut s = sys(&["x"]);
        s.add_row([0], false);
        s.add_row([0], true);
        assert_eq!(s.solve(), Gf2Outcome::Unsatisfiable);
    }

    #[test]
    fn free_variables_default_to_zero() {
        let mut s = sys(&["x", "y", "z"]);
        s.add_row([0, 1], true);
        match s.solve() {
            Gf2Outcome::Solution(a) => {
                assert!(s.check(&a));
                assert!(!a[2], "free variable must be 0");
                // y is free too (x is the pivot), so y=0 and x=1.
                assert_eq!(a, vec![true, false, false]);
            }
            _ => panic!("expected solution"),
        }
    }

    proptest! {
        /// Solver verdict matches brute force for small random systems and
        /// any returned assignment re-substitutes.
        #[test]
        fn matches_bruteforce(n_vars in 1usize..=8, raw_rows in proptest::collection::vec((0u16..256, proptest::bool::ANY), 0..8)) {
            let vars: Vec<String> = (0..n_vars).map(|i| format!("v{i}")).collect();
            let mut s = Gf2System::new(vars);
            for (mask, rhs) in raw_rows {
                s.add_row((0..n_vars).filter(|i| mask >> i & 1 == 1), rhs);
            }
            let brute_sat = (0u32..1 << n_vars).any(|m| {
                let a: Vec<bool> = (0..n_vars).map(|i| m >> i & 1 == 1).collect();
                s.check(&a)
            });
            match s.solve() {
                Gf2Outcome::Solution(a) => {
                    prop_assert!(brute_sat);
                    prop_assert!(s.check(&a));
                }
                Gf2Outcome::Unsatisfiable => prop_assert!(!brute_sat),
            }
        }
    }
}
