//! Adaptive Simpson quadrature for piecewise-smooth integrands.

const MAX_DEPTH: u32 = 48;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let diff = left + right - whole;
    if depth >= MAX_DEPTH || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
        + adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)
}

/// `∫_a^b f` with absolute tolerance `tol` per panel. The interval is first
/// cut at every point of `breaks` inside `(a, b)`, so kinks and jumps of the
/// integrand only ever sit on panel ends.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![a];
    edges.extend(cuts);
    edges.push(b);
    edges
        .windows(2)
        .map(|w| {
            // stay off the exact ends, where one-sided values matter
            let (lo, hi) = (w[0], w[1]);
            let (fa, fb) = (f(lo), f(hi));
            let m = 0.5 * (lo + hi);
            let fm = f(m);
            let whole = simpson(fa, fm, fb, hi - lo);
            adapt(&f, lo, hi, fa, fm, fb, whole, tol, 0)
        })
        .sum()
}
