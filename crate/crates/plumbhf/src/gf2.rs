//! Dense bit-matrix elimination over GF(2).

#[derive(Clone, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] |= 1u64 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let (w, d) = (self.words, &mut self.data);
        let (a, b) = if dst < src {
            let (lo, hi) = d.split_at_mut(src * w);
            (&mut lo[dst * w..dst * w + w], &hi[..w])
        } else {
            let (lo, hi) = d.split_at_mut(dst * w);
            (&mut hi[..w], &lo[src * w..src * w + w])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(&mut Vec::new()).0
    }

    /// Whether `A x = b` has a solution.
    pub fn solvable(&self, b: &[bool]) -> bool {
        debug_assert_eq!(b.len(), self.rows);
        let mut rhs: Vec<bool> = b.to_vec();
        let (_, consistent) = self.clone().eliminate(&mut rhs);
        consistent
    }

    /// Row-reduces in place; returns (rank, rhs consistent).
    fn eliminate(mut self, rhs: &mut Vec<bool>) -> (usize, bool) {
        let with_rhs = !rhs.is_empty();
        let mut pivot_row = 0;
        for c in 0..self.cols {
            let Some(r) = (pivot_row..self.rows)
                .find(|&r| self.row(r)[c / 64] >> (c % 64) & 1 == 1)
            else {
                continue;
            };
            if r != pivot_row {
                for w in 0..self.words {
                    self.data.swap(pivot_row * self.words + w, r * self.words + w);
                }
                if with_rhs {
                    rhs.swap(pivot_row, r);
                }
            }
            for i in 0..self.rows {
                if i != pivot_row && self.row(i)[c / 64] >> (c % 64) & 1 == 1 {
                    self.xor_rows(i, pivot_row);
                    if with_rhs {
                        rhs[i] ^= rhs[pivot_row];
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == self.rows {
                break;
            }
        }
        // consistent iff no zero row has rhs 1
        let consistent = !with_rhs
            || (pivot_row..self.rows).all(|r| !rhs[r] || self.row(r).iter().any(|&w| w != 0));
        (pivot_row, consistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_identity() {
        let mut m = BitMatrix::new(3, 3);
        for i in 0..3 {
            m.set(i, i);
        }
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn rank_dependent_rows() {
        let mut m = BitMatrix::new(3, 2);
        m.set(0, 0);
        m.set(1, 0);
        m.set(2, 1);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_consistency() {
        // x0 + x1 = 1, x1 = 1 -> solvable; x0 = 1 with duplicate row rhs 0 -> not
        let mut m = BitMatrix::new(2, 2);
        m.set(0, 0);
        m.set(0, 1);
        m.set(1, 1);
        assert!(m.solvable(&[true, true]));

        let mut m = BitMatrix::new(2, 1);
        m.set(0, 0);
        m.set(1, 0);
        assert!(!m.solvable(&[true, false]));
        assert!(m.solvable(&[true, true]));
    }

    #[test]
    fn wide_matrix() {
        let mut m = BitMatrix::new(2, 130);
        m.set(0, 129);
        m.set(1, 64);
        assert_eq!(m.rank(), 2);
    }
}
