//! Exact construction and verification of local quasitriangular Hopf algebras
//! built from finite Hopf quivers.

pub mod exactlin;
pub mod bimodules;
pub mod braidmod;
pub mod gradedhopf;
pub mod lqt;
pub mod quivers;
pub mod cli;
