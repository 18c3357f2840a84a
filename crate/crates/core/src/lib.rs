pub mod action;
pub mod cmfield;
pub mod exact;
pub mod harness;
pub mod modularity;
pub mod primgen;
pub mod symplectic;
pub mod theta;
