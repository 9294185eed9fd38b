//! Affine linear systems over GF(2) with bitset rows.

/// Enumeration of an affine solution space stops after `2^MAX_FREE_BITS` points.
pub const MAX_FREE_BITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Rows `coeffs · x = rhs (mod 2)` over `nvars` unknowns.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    nvars: usize,
    rows: Vec<(BitRow, bool)>,
}

/// `particular + span(basis)`.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: BitRow,
    pub basis: Vec<BitRow>,
}

impl AffineSystem {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, rows: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn push(&mut self, coeffs: BitRow, rhs: bool) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, rhs));
    }

    /// Row-reduces the system; `None` when it is inconsistent.
    pub fn solve(&self) -> Option<AffineSolution> {
        let mut rows = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..self.nvars {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].0.get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let (pivot_row, pivot_rhs) = rows[rank].clone();
            for (r, (row, rhs)) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                    *rhs ^= pivot_rhs;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        // 0 = 1 rows
        if rows[rank..].iter().any(|(_, rhs)| *rhs) {
            return None;
        }

        let mut particular = BitRow::zeros(self.nvars);
        for (r, &col) in pivots.iter().enumerate() {
            particular.set(col, rows[r].1);
        }
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.nvars];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let basis = (0..self.nvars)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitRow::zeros(self.nvars);
                v.set(free, true);
                for (r, &col) in pivots.iter().enumerate() {
                    if rows[r].0.get(free) {
                        v.set(col, true);
                    }
                }
                v
            })
            .collect();
        Some(AffineSolution { particular, basis })
    }
}

impl AffineSolution {
    pub fn free_dimension(&self) -> usize {
        self.basis.len()
    }

    /// Points of the solution space in Gray-code order, at most `2^MAX_FREE_BITS`.
    pub fn enumerate(&self) -> Vec<BitRow> {
        let free = self.basis.len().min(MAX_FREE_BITS);
        let total = 1usize << free;
        let mut out = Vec::with_capacity(total);
        let mut current = self.particular.clone();
        out.push(current.clone());
        for k in 1..total {
            let bit = k.trailing_zeros() as usize;
            current.xor_assign(&self.basis[bit]);
            out.push(current.clone());
        }
        out
    }

    pub fn contains(&self, point: &BitRow) -> bool {
        // reduce point - particular against the basis leading bits
        let mut diff = point.clone();
        diff.xor_assign(&self.particular);
        let mut basis = self.basis.clone();
        let n = point.len();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..basis.len()).find(|&r| basis[r].get(col)) else {
                continue;
            };
            basis.swap(rank, p);
            let pivot = basis[rank].clone();
            for (r, row) in basis.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            if diff.get(col) {
                diff.xor_assign(&pivot);
            }
            rank += 1;
        }
        diff.is_zero()
    }
}
