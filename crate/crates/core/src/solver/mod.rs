pub mod biunimodular;
pub mod count;
pub mod fiber;
pub mod tracker;

pub use biunimodular::{
    biunimodular_search, certify_new, known_functions, Family, FamilyCounts, Find, NewCertificate, SearchReport,
};
pub use count::{
    cluster, same_solutions, solve_equivariant, solve_odd_cfunctions, Counts, Method, Solution, SolutionSet,
    SolveConfig, Tags,
};
pub use fiber::{
    chebotarev_minor, start_fiber, uncertainty_check, BilinearSystem, MinorReport, StartPoint, UncertaintyReport,
};
