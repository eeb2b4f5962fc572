//! Nelder–Mead downhill simplex with restarts.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_evaluations: usize,
    /// Relative improvement below which a full cycle counts as stalled.
    pub rtol: f64,
    pub initial_step: f64,
    pub max_rounds: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 100_000,
            rtol: 1e-10,
            initial_step: 0.3,
            max_rounds: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value seen after each iteration; nonincreasing.
    pub trace: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Counter<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

fn improved(old: f64, new: f64, rtol: f64) -> bool {
    if !old.is_finite() {
        return new < old;
    }
    old - new > rtol * new.abs().max(f64::MIN_POSITIVE)
}

/// Minimizes `f` from `x0`. Non-finite values act as walls.
///
/// A round ends when a full cycle of `d + 1` iterations improves the best
/// value by less than `rtol` (relative) and the simplex values agree to the
/// same tolerance. The simplex is then rebuilt around the best vertex; the
/// search is converged once a fresh round fails to improve on the previous
/// one.
pub fn minimize<F>(f: F, x0: &[f64], options: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let d = x0.len();
    assert!(d >= 1, "need at least one dimension");
    let mut counter = Counter { f, evaluations: 0 };
    let mut best_point = x0.to_vec();
    let mut best_value = counter.eval(x0);
    let mut trace = vec![best_value];
    let mut converged = false;

    'rounds: for _ in 0..options.max_rounds {
        let round_start = best_value;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
        simplex.push((best_point.clone(), best_value));
        for i in 0..d {
            let mut x = best_point.clone();
            x[i] += options.initial_step;
            let v = counter.eval(&x);
            simplex.push((x, v));
        }

        let mut cycle_best = f64::INFINITY;
        let mut iterations = 0usize;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 < best_value {
                best_value = simplex[0].1;
                best_point.clone_from(&simplex[0].0);
            }
            trace.push(best_value);

            if iterations.is_multiple_of(d + 1) {
                let spread = simplex[d].1 - simplex[0].1;
                let stalled = !improved(cycle_best, simplex[0].1, options.rtol);
                let flat = spread.is_finite()
                    && spread <= options.rtol * simplex[0].1.abs().max(f64::MIN_POSITIVE);
                if iterations > 0 && stalled && flat {
                    break;
                }
                if collapsed(&simplex) {
                    break;
                }
                cycle_best = simplex[0].1;
            }
            if counter.evaluations >= options.max_evaluations {
                break 'rounds;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..d)
                .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
                .collect();
            let worst = simplex[d].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = along(REFLECT);
            let f_r = counter.eval(&reflected);
            if f_r < simplex[0].1 {
                let expanded = along(REFLECT * EXPAND);
                let f_e = counter.eval(&expanded);
                simplex[d] = if f_e < f_r {
                    (expanded, f_e)
                } else {
                    (reflected, f_r)
                };
                continue;
            }
            if f_r < simplex[d - 1].1 {
                simplex[d] = (reflected, f_r);
                continue;
            }
            let (contracted, accept) = if f_r < worst.1 {
                let x = along(REFLECT * CONTRACT);
                let v = counter.eval(&x);
                ((x, v), v <= f_r)
            } else {
                let x = along(-CONTRACT);
                let v = counter.eval(&x);
                ((x, v), v < worst.1)
            };
            if accept {
                simplex[d] = contracted;
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, v)| a + SHRINK * (v - a))
                    .collect();
                let v = counter.eval(&x);
                *vertex = (x, v);
            }
        }

        if !improved(round_start, best_value, options.rtol) && best_value.is_finite() {
            converged = true;
            break;
        }
    }

    SimplexOutcome {
        point: best_point,
        value: best_value,
        evaluations: counter.evaluations,
        converged,
        trace,
    }
}

fn collapsed(simplex: &[(Vec<f64>, f64)]) -> bool {
    let base = &simplex[0].0;
    simplex[1..].iter().all(|(x, _)| {
        x.iter()
            .zip(base)
            .all(|(a, b)| (a - b).abs() <= 4.0 * f64::EPSILON * (1.0 + b.abs()))
    })
}
