/// Lexicographic odometer step (last position fastest). Returns false after
/// the final tuple, leaving all digits at zero.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Mixed-radix digits of `index` (first entry most significant).
pub(crate) fn unflatten(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_visits_all_tuples_in_order() {
        let mut d = vec![0, 0];
        let mut seen = vec![d.clone()];
        while advance(&mut d, 3) {
            seen.push(d.clone());
        }
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[1], vec![0, 1]);
        assert_eq!(seen[8], vec![2, 2]);
    }

    #[test]
    fn unflatten_is_row_major() {
        assert_eq!(unflatten(5, &[2, 3]), vec![1, 2]);
        assert_eq!(unflatten(0, &[2, 3]), vec![0, 0]);
    }
}
