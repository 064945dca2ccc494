pub mod algebra;
pub mod catalog;
pub mod exactmath;
pub mod operator;
pub mod sampling;
pub mod search;
