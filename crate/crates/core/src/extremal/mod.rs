//! Node systems, the Newton basis, the minimax solver, `Φₙ`, Green estimates and level sets.

mod basis;
mod green;
mod level;
pub mod minimax;
mod nodes;
mod phi;

pub use basis::{MeshBasis, NewtonBasis};
pub use green::{green_estimate, GreenSource};
pub use level::{level_set, suggest_window, LevelSet};
pub use minimax::{complex_minimax, MinimaxOptions, MinimaxSolution};
pub use nodes::{fekete_points_exact, leja_points, log_vandermonde, NodeKind, NodeSequence};
pub use phi::{
    phi_n, phi_shell_inf, phi_shell_inf_ranked, phi_shell_inf_screened, Certificate, ExtremalSolver, ExtremalValue,
    ShellInfimum,
};
