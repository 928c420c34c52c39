//! Derivative-free local maximizers used by the best-ball search.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local<X> {
    pub x: X,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `xtol`. The best point seen is
/// returned, endpoints included.
pub fn golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Local<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut evals = 0;
    let mut eval = |x: f64, evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let fa = eval(a, &mut evals);
    let fb = eval(b, &mut evals);
    let mut best = if fa >= fb { (a, fa) } else { (b, fb) };

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut evals);
    let mut fd = eval(d, &mut evals);
    let mut iter = 0;
    while (b - a) > xtol && iter < max_iter {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut evals);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut evals);
        }
        iter += 1;
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx > best.1 {
            best = (x, fx);
        }
    }
    Local {
        x: best.0,
        value: best.1,
        evals,
        converged: (b - a) <= xtol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Per-coordinate simplex size below which the search stops.
    pub xtol: [f64; 2],
    pub max_iter: usize,
}

/// Nelder-Mead maximization in two variables.
///
/// `project` maps any trial point into the feasible set; vertices are
/// stored projected so the simplex never leaves it.
pub fn nelder_mead_max<F, P>(
    mut f: F,
    project: P,
    start: [f64; 2],
    step: [f64; 2],
    opts: &NelderMeadOptions,
) -> Local<[f64; 2]>
where
    F: FnMut([f64; 2]) -> f64,
    P: Fn([f64; 2]) -> [f64; 2],
{
    let mut evals = 0;
    let mut vertex = |x: [f64; 2], evals: &mut usize| {
        let p = project(x);
        *evals += 1;
        (p, f(p))
    };
    let x0 = project(start);
    let mut simplex = [
        vertex(x0, &mut evals),
        vertex([x0[0] + step[0], x0[1]], &mut evals),
        vertex([x0[0], x0[1] + step[1]], &mut evals),
    ];
    // Degenerate start on a constraint: try the opposite directions.
    if simplex[1].0 == simplex[0].0 {
        simplex[1] = vertex([x0[0] - step[0], x0[1]], &mut evals);
    }
    if simplex[2].0 == simplex[0].0 {
        simplex[2] = vertex([x0[0], x0[1] - step[1]], &mut evals);
    }

    let mut converged = false;
    for _ in 0..opts.max_iter {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let best = simplex[0].0;
        let size_ok = simplex[1..].iter().all(|(x, _)| {
            (x[0] - best[0]).abs() <= opts.xtol[0] && (x[1] - best[1]).abs() <= opts.xtol[1]
        });
        if size_ok {
            converged = true;
            break;
        }
        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let along = |k: f64| {
            [
                centroid[0] + k * (centroid[0] - worst.0[0]),
                centroid[1] + k * (centroid[1] - worst.0[1]),
            ]
        };
        let reflected = vertex(along(1.0), &mut evals);
        if reflected.1 > simplex[0].1 {
            let expanded = vertex(along(2.0), &mut evals);
            simplex[2] = if expanded.1 > reflected.1 { expanded } else { reflected };
            continue;
        }
        if reflected.1 > simplex[1].1 {
            simplex[2] = reflected;
            continue;
        }
        let contracted = if reflected.1 > worst.1 {
            vertex(along(0.5), &mut evals)
        } else {
            vertex(along(-0.5), &mut evals)
        };
        if contracted.1 > worst.1.max(reflected.1) {
            simplex[2] = contracted;
            continue;
        }
        // shrink towards the best vertex
        let b = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            let x = [b[0] + 0.5 * (v.0[0] - b[0]), b[1] + 0.5 * (v.0[1] - b[1])];
            *v = vertex(x, &mut evals);
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    Local {
        x: simplex[0].0,
        value: simplex[0].1,
        evals,
        converged,
    }
}
