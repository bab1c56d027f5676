pub mod commands;
pub mod experiment;
