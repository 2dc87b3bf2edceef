pub mod exactlin;
pub mod gradedring;
pub mod chowvariety;
pub mod prelogcx;
pub mod cubic3fold;
pub mod cli;
