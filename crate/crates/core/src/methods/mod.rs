//! Non-adaptive baselines: gradient descent, the model gradient method,
//! momentum methods, linear coupling, conjugate gradients and Frank-Wolfe.

mod cg;
mod frank_wolfe;
mod gd;
mod model_gd;
mod momentum;

pub use cg::{cg_quadratic, nonlinear_cg, CgVariant, NcgLineSearch};
pub use frank_wolfe::frank_wolfe_simplex;
pub use gd::{gradient_descent, subgradient_descent_step, History, StepRule};
pub use model_gd::model_gradient_method;
pub use momentum::{heavy_ball, linear_coupling, nesterov_momentum, CouplingStep};
