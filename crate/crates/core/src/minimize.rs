//! Golden-section search for a bracketed minimum.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a one-dimensional minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `f` on `[a, b]` by golden-section search.
///
/// Stops once the bracket is narrower than `x_tol` (absolute) or after
/// `max_iter` reductions. The best point seen is returned, including the
/// bracket endpoints, so a minimum sitting on the boundary is still found.
pub fn golden_section<F>(mut f: F, a: f64, b: f64, x_tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let f_lo = f(lo);
    let f_hi = f(hi);
    let mut best = if f_lo <= f_hi {
        Minimum {
            x: lo,
            value: f_lo,
            iterations: 0,
        }
    } else {
        Minimum {
            x: hi,
            value: f_hi,
            iterations: 0,
        }
    };

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > x_tol && iterations < max_iter {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v < best.value {
                best = Minimum {
                    x,
                    value: v,
                    iterations: 0,
                };
            }
        }
    }
    best.iterations = iterations;
    best
}
