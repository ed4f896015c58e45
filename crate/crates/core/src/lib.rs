pub mod hnn;
pub mod nielsen;
pub mod words;
pub mod h3;
pub mod poly;
pub mod pwgeo;
pub mod holonomy;
pub mod pairs;
pub mod cli;
