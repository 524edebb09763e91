pub mod algebra;
pub mod dynamics;
pub mod modp;
pub mod analytics;
pub mod hypothesis;
