//! Decomposition into evidently basepoint-free classes.

use super::{DivisorClass, LatticeError, SurfaceModel};

/// `-K`, `L`, `L - E_i`, and `2L` minus any four distinct `E`'s, in search
/// order.
pub fn bpf_generators(s: &SurfaceModel) -> Result<Vec<DivisorClass>, LatticeError> {
    let k = s.blown_up_points().ok_or_else(|| s.unsupported("basepoint-free decomposition"))?;
    let rank = k + 1;
    let mut gens = vec![s.anticanonical()];
    let mut l = vec![0; rank];
    l[0] = 1;
    gens.push(DivisorClass::new(l.clone()));
    for i in 1..=k {
        let mut v = l.clone();
        v[i] = -1;
        gens.push(DivisorClass::new(v));
    }
    for mask in 0u32..(1 << k) {
        if mask.count_ones() != 4 {
            continue;
        }
        let mut v = vec![0; rank];
        v[0] = 2;
        for i in 0..k {
            if mask & (1 << i) != 0 {
                v[i + 1] = -1;
            }
        }
        gens.push(DivisorClass::new(v));
    }
    // masks enumerate subsets in binary order; sort for a stable listing
    gens[2 + k..].sort_by(|a, b| b.cmp(a));
    Ok(gens)
}

/// Writes `c` as a sum of generators, largest multiplicities first.
///
/// Returns `Ok(None)` when no decomposition exists.
pub fn bpf_decompose(s: &SurfaceModel, c: &DivisorClass) -> Result<Option<Vec<DivisorClass>>, LatticeError> {
    s.check(c)?;
    let gens = bpf_generators(s)?;
    let mut chosen = Vec::new();
    if search(&gens, 0, c.coeffs(), &mut chosen) {
        Ok(Some(chosen.into_iter().map(|i| gens[i].clone()).collect()))
    } else {
        Ok(None)
    }
}

/// Every generator has positive `L` coefficient and nonpositive `E`
/// coefficients, so a remainder outside that cone is dead.
fn feasible(rem: &[i64]) -> bool {
    rem[0] >= 0 && rem[1..].iter().all(|&e| e <= 0)
}

fn search(gens: &[DivisorClass], from: usize, rem: &[i64], chosen: &mut Vec<usize>) -> bool {
    if rem.iter().all(|&x| x == 0) {
        return true;
    }
    if from == gens.len() || !feasible(rem) {
        return false;
    }
    let g = gens[from].coeffs();
    let max_mult = rem[0] / g[0];
    for m in (0..=max_mult).rev() {
        let next: Vec<i64> = rem.iter().zip(g).map(|(r, x)| r - m * x).collect();
        if !feasible(&next) {
            continue;
        }
        let mark = chosen.len();
        chosen.extend(std::iter::repeat_n(from, m as usize));
        if search(gens, from + 1, &next, chosen) {
            return true;
        }
        chosen.truncate(mark);
    }
    false
}
