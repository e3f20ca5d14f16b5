//! Derivative-free 1-D minimization: a uniform coarse scan followed by
//! golden-section refinement around the best few scan minima.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns the best point seen.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Scan `points` equally spaced abscissae `lo + k·(hi−lo)/points` (treating
/// the interval as one period), then golden-refine the `refine` lowest local
/// minima of the scan within one scan step either side.
pub fn scan_then_refine(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
    refine: usize,
) -> (f64, f64) {
    assert!(points >= 3, "scan needs at least three points");
    let step = (hi - lo) / points as f64;
    let values: Vec<f64> = (0..points).map(|k| f(lo + k as f64 * step)).collect();

    // Local minima on the periodic scan, lowest first.
    let mut minima: Vec<usize> = (0..points)
        .filter(|&k| {
            let prev = values[(k + points - 1) % points];
            let next = values[(k + 1) % points];
            values[k] <= prev && values[k] <= next
        })
        .collect();
    minima.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    minima.truncate(refine.max(1));

    let mut best_k = 0;
    for k in 1..points {
        if values[k] < values[best_k] {
            best_k = k;
        }
    }
    let mut best = (lo + best_k as f64 * step, values[best_k]);
    for k in minima {
        let center = lo + k as f64 * step;
        let (x, fx) = golden_section(&mut f, center - step, center + step, tol);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}
