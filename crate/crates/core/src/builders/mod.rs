//! Constructive ReLU networks with checkable error and size budgets.

pub mod budget;
pub mod generator;
pub mod holder;
pub mod indicator;
pub mod times;

pub use budget::ApproxBudget;
pub use generator::{assemble_generator, GeneratorTolerances};
pub use holder::{
    build_holder_approx, build_piecewise_net, piecewise_constant_approx, uniform_cube_partition,
    CubePartition, HolderFunction, PiecewiseConstant,
};
pub use indicator::{build_cube_indicator, build_indicator, Cube};
pub use times::{build_times, build_times_d};
