//! Navigation planners: the eight-direction step planner and the Bug1/Bug2
//! baselines it is compared against.

pub mod bug;
pub mod nspmr;

pub use bug::{bug1_run, bug2_run, follow_boundary, BoundaryWalk, BugError, BugOutcome, BugRun, WalkDirection};
pub use nspmr::{
    apply_move, desired_angle, filter_candidates, nspmr_step, quantize, select_direction, CellId, NspmrState,
    PlannerError, Rules, StepEvent, StepKind,
};
