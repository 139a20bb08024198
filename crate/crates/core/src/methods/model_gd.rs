//! Model gradient method: `x^{k+1} = argmin { ψ_δ(x, x^k) + L·V(x, x^k) }`.

use crate::linalg::all_finite;
use crate::methods::gd::History;
use crate::model::{solve_model_step, ModelOracle};
use crate::prox::ProxSetup;
use crate::scalar::Real;
use crate::trace::{Trace, TraceBuilder};

/// Runs the model method with constant `L` (step `h = 1/L`) for `N`
/// iterations. With the Euclidean free-space prox and a linear model it
/// reduces to plain gradient descent bit for bit. The trace averages
/// `x^1..x^N` uniformly; `history`, when given, records linearizations at
/// `x^0..x^{N-1}`.
pub fn model_gradient_method<T: Real>(
    oracle: &ModelOracle<T>,
    prox: &ProxSetup<T>,
    l: T,
    x0: &[T],
    iterations: usize,
    mut history: Option<&mut History<T>>,
) -> crate::Result<Trace<T>> {
    if !(l > T::zero()) {
        return Err(crate::Error::config("model gradient method needs L > 0"));
    }
    assert!(all_finite(x0), "start point must be finite");
    let grad0 = oracle.grad_calls();
    let val0 = oracle.value_calls();
    let h = T::one() / l;

    let mut x = x0.to_vec();
    let mut model = oracle.query(&x);
    let mut builder = TraceBuilder::new(x.clone(), model.f_delta, l);

    for k in 0..iterations {
        if let Some(hist) = history.as_deref_mut() {
            hist.push(&x, model.f_delta, &model.linear, T::one());
        }
        let next = solve_model_step(prox, &model.composite, &x, &model.linear, h)?;
        if !all_finite(&next) {
            return Err(crate::Error::Divergence { step: k });
        }
        x = next;
        model = oracle.query(&x);
        if !model.f_delta.is_finite() || !all_finite(&model.linear) {
            return Err(crate::Error::Divergence { step: k });
        }
        builder.push(x.clone(), model.f_delta, l);
        builder.mark_calls(oracle.grad_calls() - grad0, oracle.value_calls() - val0);
    }

    Ok(builder.finish(
        oracle.grad_calls() - grad0,
        oracle.value_calls() - val0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{gradient_descent, StepRule};
    use crate::model::CompositeTerm;
    use crate::oracle::{FnObjective, Oracle, Problem};
    use crate::sets::FeasibleSet;

    fn quad_problem() -> Problem<f64> {
        Problem::unconstrained(Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * (x[0] * x[0] + 4.0 * x[1] * x[1]),
            |x: &[f64]| vec![x[0], 4.0 * x[1]],
        )))
    }

    #[test]
    fn euclidean_linear_model_coincides_with_gd() {
        let p = quad_problem();
        let gd = gradient_descent(&p, &[1.0, -1.0], &StepRule::FixedInverseL(4.0), 20, None)
            .unwrap();
        let model = ModelOracle::linear_model(p.oracle.clone());
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let mg = model_gradient_method(&model, &prox, 4.0, &[1.0, -1.0], 20, None).unwrap();
        for (a, b) in gd.iterates.iter().zip(&mg.iterates) {
            assert_eq!(a, b, "iterates must agree bit for bit");
        }
    }

    #[test]
    fn entropy_step_on_linear_objective_is_multiplicative_weights() {
        let c = vec![1.0, 0.0];
        let cc = c.clone();
        let oracle = Oracle::new(FnObjective::new(
            move |x: &[f64]| crate::linalg::dot(&c, x),
            move |_x: &[f64]| cc.clone(),
        ));
        let model = ModelOracle::linear_model(oracle);
        let prox = ProxSetup::entropy_simplex();
        let l = 2.0;
        let t = model_gradient_method(&model, &prox, l, &[0.5, 0.5], 1, None).unwrap();
        // closed form: x_i ∝ x_i exp(−c_i / L)
        let w0 = 0.5 * (-1.0 / l).exp();
        let w1 = 0.5;
        let want0 = w0 / (w0 + w1);
        assert!((t.final_point()[0] - want0).abs() < 1e-14);
    }

    #[test]
    fn lasso_step_is_soft_thresholding() {
        // F = ½‖x − b‖², g = λ‖x‖₁; one model step from x0 soft-thresholds.
        let b = vec![1.0, -0.4, 0.05];
        let bc = b.clone();
        let oracle = Oracle::new(FnObjective::new(
            move |x: &[f64]| {
                0.5 * x
                    .iter()
                    .zip(&b)
                    .map(|(xi, bi)| (xi - bi) * (xi - bi))
                    .sum::<f64>()
            },
            move |x: &[f64]| x.iter().zip(&bc).map(|(xi, bi)| xi - bi).collect(),
        ));
        let lam = 0.1;
        let model = ModelOracle::composite_model(oracle, CompositeTerm::L1Scaled(lam));
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let t = model_gradient_method(&model, &prox, 1.0, &[0.0, 0.0, 0.0], 1, None).unwrap();
        // step from 0 with L = 1: soft(b, λ)
        let expect = [0.9, -0.3, 0.0];
        for (a, b) in t.final_point().iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn indicator_composite_reduces_to_projected_gradient() {
        let p = quad_problem();
        let set = FeasibleSet::Box {
            lo: vec![0.25, 0.25],
            hi: vec![2.0, 2.0],
        };
        let model = ModelOracle::composite_model(
            p.oracle.clone(),
            CompositeTerm::IndicatorOfSet(set.clone()),
        );
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let t = model_gradient_method(&model, &prox, 4.0, &[1.0, 1.0], 30, None).unwrap();
        // optimum of the quadratic over the box is the corner (0.25, 0.25)
        assert!((t.final_point()[0] - 0.25).abs() < 1e-6);
        assert!((t.final_point()[1] - 0.25).abs() < 1e-9);
    }
}
