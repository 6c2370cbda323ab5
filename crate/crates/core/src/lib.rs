pub mod algebra;
pub mod catalog;
pub mod elliptic;
pub mod expr;
pub mod front;
pub mod report;
pub mod sphere;
pub mod valuedist;
