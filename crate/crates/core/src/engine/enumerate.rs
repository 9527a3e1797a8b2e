use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Number of length-`n` sequences over `s` symbols, if it fits the budget.
pub fn sequence_count(s: usize, n: usize, budget: u64) -> Result<u64> {
    let exceeded = || Error::BudgetExceeded { alphabet: s, length: n, budget };
    let n32 = u32::try_from(n).map_err(|_| exceeded())?;
    let count = (s as u64).checked_pow(n32).ok_or_else(exceeded)?;
    if count > budget {
        return Err(exceeded());
    }
    Ok(count)
}

/// All `s^n` sequences in lexicographic order (base-`s` odometer, last symbol
/// fastest).
pub fn enumerate_sequences(s: usize, n: usize, budget: u64) -> Result<Sequences> {
    if s < 2 {
        return Err(Error::AlphabetTooSmall(s));
    }
    let count = sequence_count(s, n, budget)?;
    Ok(Sequences::range(s, n, 0, count))
}

/// Odometer over a contiguous range of sequence ranks.
#[derive(Debug, Clone)]
pub struct Sequences {
    s: usize,
    current: Vec<usize>,
    remaining: u64,
}

impl Sequences {
    /// Sequences with lexicographic rank in `[start, end)`.
    pub(crate) fn range(s: usize, n: usize, start: u64, end: u64) -> Self {
        let mut current = alloc::vec![0; n];
        let mut rank = start;
        for slot in current.iter_mut().rev() {
            *slot = (rank % s as u64) as usize;
            rank /= s as u64;
        }
        Self { s, current, remaining: end.saturating_sub(start) }
    }

    /// Visits each remaining sequence in place without allocating.
    pub(crate) fn visit(mut self, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
        while self.remaining > 0 {
            f(&self.current)?;
            self.advance();
        }
        Ok(())
    }

    fn advance(&mut self) {
        self.remaining -= 1;
        for slot in self.current.iter_mut().rev() {
            *slot += 1;
            if *slot < self.s {
                return;
            }
            *slot = 0;
        }
    }
}

impl Iterator for Sequences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current.clone();
        self.advance();
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}
