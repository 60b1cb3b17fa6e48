pub mod array;
pub mod checks;
pub mod cli;
pub mod corpus;
pub mod enumerate;
pub mod exact;
pub mod poly;
pub mod spectral;
