//! Exhaustive check of every assignment, for cross-checking the engines on
//! tiny grids. Shares no code with them beyond the coloring type.

use crate::error::{Error, Result};
use crate::grid::{Color, Coloring, GridDims};

/// Largest mn accepted by [`brute_force_oracle`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 12;

fn is_dynamic(m: usize, n: usize, r: usize, cells: &[usize]) -> bool {
    let at = |i: usize, j: usize| cells[i * n + j];
    for i in 0..m {
        for j in 0..n {
            let mut around = [0usize; 4];
            let mut degree = 0;
            for (ok, di, dj) in [(i > 0, -1, 0), (i + 1 < m, 1, 0), (j > 0, 0, -1), (j + 1 < n, 0, 1)] {
                if ok {
                    around[degree] = at(i.wrapping_add_signed(di), j.wrapping_add_signed(dj));
                    degree += 1;
                }
            }
            let around = &mut around[..degree];
            if around.contains(&at(i, j)) {
                return false;
            }
            around.sort_unstable();
            let distinct = 1 + around.windows(2).filter(|w| w[0] != w[1]).count();
            if degree > 0 && distinct < degree.min(r) {
                return false;
            }
        }
    }
    true
}

/// Counts the r-dynamic k-colorings of `dims` and returns the first one in
/// lexicographic row-major order.
pub fn brute_force_oracle(dims: GridDims, r: usize, k: usize) -> Result<(u64, Option<Coloring>)> {
    let (m, n) = (dims.m(), dims.n());
    if m * n > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::unsupported(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_CELLS} cells, got {}",
            m * n
        )));
    }
    if r == 0 || k == 0 {
        return Err(Error::invalid("r and k must be at least 1"));
    }
    let total = m * n;
    let mut cells = vec![0usize; total];
    let mut count = 0u64;
    let mut first = None;
    loop {
        if is_dynamic(m, n, r, &cells) {
            count += 1;
            if first.is_none() {
                first = Some(cells.clone());
            }
        }
        // Odometer, last cell fastest.
        let mut pos = total;
        loop {
            if pos == 0 {
                let witness = match first {
                    Some(cells) => Some(Coloring::new(dims, k, cells.into_iter().map(|c| c as Color).collect())?),
                    None => None,
                };
                return Ok((count, witness));
            }
            pos -= 1;
            cells[pos] += 1;
            if cells[pos] < k {
                break;
            }
            cells[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let d = |m, n| GridDims::new(m, n).unwrap();
        // Proper 2-colorings of a connected bipartite graph: 2.
        assert_eq!(brute_force_oracle(d(2, 3), 1, 2).unwrap().0, 2);
        // Proper 3-colorings of C4 = G(2,2): 18.
        assert_eq!(brute_force_oracle(d(2, 2), 1, 3).unwrap().0, 18);
        // 2-dynamic on C4 forces both diagonals to differ: 4 * 3 * 2 * 1.
        assert_eq!(brute_force_oracle(d(2, 2), 2, 4).unwrap().0, 24);
        assert_eq!(brute_force_oracle(d(2, 2), 2, 3).unwrap().0, 0);
        let (count, first) = brute_force_oracle(d(1, 3), 2, 3).unwrap();
        assert_eq!(count, 6);
        assert_eq!(first.unwrap().cells(), &[0, 1, 2]);
        assert!(brute_force_oracle(d(4, 4), 3, 4).is_err());
    }
}
