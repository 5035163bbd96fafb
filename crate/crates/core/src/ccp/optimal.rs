use rayon::prelude::*;

use super::{score, CcpTask, ClassicalStrategy, BRUTE_FORCE_LIMIT, ENCODER_SWEEP_LIMIT};
use crate::error::{checked_pow, guard};
use crate::Result;

/// Scores closer than this are treated as ties (the earlier strategy wins).
const TIE_TOL: f64 = 1e-12;

/// Best deterministic strategy and its score.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalOptimum {
    pub value: f64,
    pub strategy: ClassicalStrategy,
}

fn encoder_from_index(mut index: u64, messages: usize, inputs: usize) -> Vec<usize> {
    let mut enc = vec![0; inputs];
    for slot in enc.iter_mut().rev() {
        *slot = (index % messages as u64) as usize;
        index /= messages as u64;
    }
    enc
}

/// For a fixed encoder the score splits over disjoint `(m, Y)` cells, so the
/// best decoder picks `argmax_g Σ_{X: E(X)=m} t[g][X][Y]` per cell (smallest
/// `g` on ties).
fn best_decoder(task: &CcpTask, encoder: &[usize], acc: &mut [f64], decoder: &mut [usize]) -> f64 {
    let (nb, ng, nm) = (task.receiver_inputs(), task.guesses(), task.messages());
    acc.fill(0.0);
    let t = task.coeffs();
    for (x, &m) in encoder.iter().enumerate() {
        for y in 0..nb {
            let src = &t[(x * nb + y) * ng..(x * nb + y + 1) * ng];
            let dst = &mut acc[(m * nb + y) * ng..(m * nb + y + 1) * ng];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
    }
    let mut total = 0.0;
    for m in 0..nm {
        for y in 0..nb {
            let cell = &acc[(m * nb + y) * ng..(m * nb + y + 1) * ng];
            let mut best = (cell[0], 0);
            for (g, &v) in cell.iter().enumerate().skip(1) {
                if v > best.0 + TIE_TOL {
                    best = (v, g);
                }
            }
            decoder[m + nm * y] = best.1;
            total += best.0;
        }
    }
    total
}

/// Exact optimal classical score by sweeping all `M^{N_A}` encoders (in
/// lexicographic order) with the greedy per-cell decoder. The returned value
/// is the task score of the returned maximizer.
pub fn optimal_classical_score(task: &CcpTask) -> Result<ClassicalOptimum> {
    let (na, nb, nm, ng) = (
        task.sender_inputs(),
        task.receiver_inputs(),
        task.messages(),
        task.guesses(),
    );
    let count = checked_pow(nm, na);
    guard("encoders", count, ENCODER_SWEEP_LIMIT)?;
    let count = count as u64;
    const BLOCK: u64 = 1 << 12;
    let blocks = count.div_ceil(BLOCK);

    let (_, best_index) = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut acc = vec![0.0; nm * nb * ng];
            let mut decoder = vec![0; nm * nb];
            let start = blk * BLOCK;
            let end = (start + BLOCK).min(count);
            let mut encoder = encoder_from_index(start, nm, na);
            let mut best = (f64::NEG_INFINITY, start);
            for index in start..end {
                let v = best_decoder(task, &encoder, &mut acc, &mut decoder);
                if v > best.0 + TIE_TOL {
                    best = (v, index);
                }
                crate::util::advance(&mut encoder, nm);
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| {
                if b.0 > a.0 + TIE_TOL || (a.0 <= b.0 + TIE_TOL && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let encoder = encoder_from_index(best_index, nm, na);
    let mut acc = vec![0.0; nm * nb * ng];
    let mut decoder = vec![0; nm * nb];
    best_decoder(task, &encoder, &mut acc, &mut decoder);
    let strategy = ClassicalStrategy::new(nb, nm, ng, encoder, decoder)?;
    let value = score(task, &strategy.behavior())?;
    Ok(ClassicalOptimum { value, strategy })
}

/// Independent oracle: enumerates every `(E, D)` pair and evaluates the
/// score cell by cell. Lexicographically first maximizer.
pub fn brute_force_classical_score(task: &CcpTask) -> Result<ClassicalOptimum> {
    let (na, nb, nm, ng) = (
        task.sender_inputs(),
        task.receiver_inputs(),
        task.messages(),
        task.guesses(),
    );
    let encoders = checked_pow(nm, na);
    let decoders = checked_pow(ng, nm * nb);
    guard("strategy pairs", encoders.saturating_mul(decoders), BRUTE_FORCE_LIMIT)?;

    let mut encoder = vec![0usize; na];
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    loop {
        let mut decoder = vec![0usize; nm * nb];
        loop {
            let mut v = 0.0;
            for (x, &m) in encoder.iter().enumerate() {
                for y in 0..nb {
                    v += task.coeff(decoder[m + nm * y], x, y);
                }
            }
            if best.as_ref().is_none_or(|b| v > b.0 + TIE_TOL) {
                best = Some((v, encoder.clone(), decoder.clone()));
            }
            if !crate::util::advance(&mut decoder, ng) {
                break;
            }
        }
        if !crate::util::advance(&mut encoder, nm) {
            break;
        }
    }
    let (_, encoder, decoder) = best.expect("at least one strategy");
    let strategy = ClassicalStrategy::new(nb, nm, ng, encoder, decoder)?;
    let value = score(task, &strategy.behavior())?;
    Ok(ClassicalOptimum { value, strategy })
}
