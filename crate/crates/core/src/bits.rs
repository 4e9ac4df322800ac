/// Dense square bit matrix, row-major, one `u64` word per 64 columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    size: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(size: usize) -> Self {
        let words_per_row = size.div_ceil(64);
        BitMatrix { size, words_per_row, words: vec![0; size * words_per_row] }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.size && col < self.size);
        self.words[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize) {
        debug_assert!(row < self.size && col < self.size);
        self.words[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    /// `row[target] |= row[source]`.
    pub fn union_rows(&mut self, target: usize, source: usize) {
        if target == source {
            return;
        }
        let w = self.words_per_row;
        let (t, s) = (target * w, source * w);
        for i in 0..w {
            let v = self.words[s + i];
            self.words[t + i] |= v;
        }
    }

    pub fn row_ones(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let base = row * self.words_per_row;
        (0..self.words_per_row).flat_map(move |wi| {
            let mut word = self.words[base + wi];
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_union() {
        let mut m = BitMatrix::new(130);
        m.set(0, 129);
        m.set(1, 3);
        m.set(1, 64);
        assert!(m.get(0, 129));
        assert!(!m.get(0, 128));
        m.union_rows(0, 1);
        assert_eq!(m.row_ones(0).collect::<Vec<_>>(), vec![3, 64, 129]);
    }
}
